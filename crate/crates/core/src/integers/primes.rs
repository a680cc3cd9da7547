use super::modular::{mul_mod, pow_mod};
use crate::error::{capacity, Result};

/// Largest bound accepted by [`primes_up_to`].
pub const MAX_SIEVE_BOUND: u64 = 1 << 32;

/// Odd-only bit sieve: bit `i` stands for `2i + 1`.
struct OddSieve {
    composite: Vec<u64>,
    bound: u64,
}

impl OddSieve {
    fn new(bound: u64) -> Self {
        let slots = (bound / 2 + 1) as usize;
        let mut composite = vec![0u64; slots.div_ceil(64)];
        composite[0] |= 1; // 1 is not prime
        let mut i = 1usize;
        loop {
            let p = 2 * i as u64 + 1;
            if p * p > bound {
                break;
            }
            if composite[i / 64] >> (i % 64) & 1 == 0 {
                let mut j = (p * p / 2) as usize;
                while j < slots {
                    composite[j / 64] |= 1 << (j % 64);
                    j += p as usize;
                }
            }
            i += 1;
        }
        Self { composite, bound }
    }

    fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        let two = (self.bound >= 2).then_some(2);
        let slots = (self.bound / 2 + 1) as usize;
        two.into_iter().chain((1..slots).filter_map(move |i| {
            let p = 2 * i as u64 + 1;
            (p <= self.bound && self.composite[i / 64] >> (i % 64) & 1 == 0).then_some(p)
        }))
    }
}

/// All primes in `[2, bound]`, ascending. Returns an empty list for `bound < 2`.
pub fn primes_up_to(bound: u64) -> Result<Vec<u64>> {
    if bound > MAX_SIEVE_BOUND {
        return Err(capacity("sieve bound", bound, MAX_SIEVE_BOUND));
    }
    if bound < 2 {
        return Ok(Vec::new());
    }
    Ok(OddSieve::new(bound).primes().collect())
}

/// Prime counting function pi(x) via the sieve.
pub fn prime_count(bound: u64) -> Result<usize> {
    if bound > MAX_SIEVE_BOUND {
        return Err(capacity("sieve bound", bound, MAX_SIEVE_BOUND));
    }
    if bound < 2 {
        return Ok(0);
    }
    Ok(OddSieve::new(bound).primes().count())
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin; the twelve prime bases are exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
