use super::modular::{gcd, mul_mod};
use super::primes::is_prime;
use crate::error::{Error, Result};

/// Trial division runs through all divisors up to this bound before
/// switching to Pollard rho.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

const RHO_ITERATION_BUDGET: u64 = 1 << 22;

/// Signed prime factorization `value = sign * prod p^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub value: i64,
    pub sign: i8,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self) -> i128 {
        let magnitude: i128 = self
            .factors
            .iter()
            .map(|&(p, e)| (p as i128).pow(e))
            .product();
        self.sign as i128 * magnitude
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }
}

pub fn factorize(n: i64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let sign = if n < 0 { -1 } else { 1 };
    let mut primes = Vec::new();
    factor_unsigned(n.unsigned_abs(), &mut primes)?;
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization {
        value: n,
        sign,
        factors,
    })
}

/// Pushes the prime factors of `m` (with multiplicity) onto `out`.
pub(crate) fn factor_unsigned(mut m: u64, out: &mut Vec<u64>) -> Result<()> {
    while m.is_multiple_of(2) {
        out.push(2);
        m /= 2;
    }
    let mut d = 3u64;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= m {
        while m.is_multiple_of(d) {
            out.push(d);
            m /= d;
        }
        d += 2;
    }
    if m > 1 {
        split_large(m, out)?;
    }
    Ok(())
}

fn split_large(m: u64, out: &mut Vec<u64>) -> Result<()> {
    if is_prime(m) {
        out.push(m);
        return Ok(());
    }
    let d = pollard_brent(m).ok_or(Error::Unfactored(m as i128))?;
    split_large(d, out)?;
    split_large(m / d, out)
}

fn pollard_brent(n: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let isqrt = n.isqrt();
    if isqrt * isqrt == n {
        return Some(isqrt);
    }
    for c in 1..32u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        let mut iterations = 0u64;
        while g == 1 && iterations < RHO_ITERATION_BUDGET {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..r.min(128).min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
            iterations += r;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}
