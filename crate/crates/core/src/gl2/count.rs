use num_bigint::BigUint;
use num_traits::One;

use super::fiber::TraceRow;
use super::{prime_powers, DetCharacter, PrimePower};
use crate::bipoly::{horner_mod, horner_mod_small, BiPoly, Var};
use crate::error::{capacity, Result};
use crate::integers::legendre;

/// Largest odd prime `p` accepted by the `p^2` lifting counter.
pub const ODD_SQUARE_PRIME_LIMIT: u64 = 4000;

/// Largest prime power handled by the per-trace histogram counter
/// (cost `O(q^2)`).
pub const HISTOGRAM_MODULUS_LIMIT: u64 = 1 << 14;

/// Plain and character-weighted counts of `{g in GL2(Z/qZ) : f(tr g, det g) = 0 mod q}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LocalCounts {
    pub plain: u128,
    pub twisted: i128,
}

impl LocalCounts {
    fn add(&mut self, weight: i8, m: u128) {
        self.plain += m;
        self.twisted += weight as i128 * m as i128;
    }
}

/// Counts at a prime power, with `chi` weighting the determinant.
pub fn local_counts(f: &BiPoly, q: PrimePower, chi: DetCharacter) -> Result<LocalCounts> {
    chi.check_modulus(q)?;
    if q.p % 2 == 1 && q.e == 2 && matches!(chi, DetCharacter::Trivial | DetCharacter::Legendre(_))
    {
        if q.p > ODD_SQUARE_PRIME_LIMIT {
            return Err(capacity(
                "odd prime for p^2 counting",
                q.p,
                ODD_SQUARE_PRIME_LIMIT,
            ));
        }
        return Ok(odd_square_counts(f, q.p, chi));
    }
    if q.q > HISTOGRAM_MODULUS_LIMIT {
        return Err(capacity(
            "prime-power modulus",
            q.q,
            HISTOGRAM_MODULUS_LIMIT,
        ));
    }
    Ok(histogram_counts(f, q, chi))
}

/// `|C_f(m)|`, multiplied out over the prime powers of `m`.
pub fn count_cf(f: &BiPoly, m: u64) -> Result<BigUint> {
    let mut total = BigUint::one();
    for q in prime_powers(m)? {
        total *= BigUint::from(local_counts(f, q, DetCharacter::Trivial)?.plain);
    }
    Ok(total)
}

/// `sum over g in C_f(q) of chi(det g)` at a prime power.
pub fn count_cf_twisted(f: &BiPoly, q: PrimePower, chi: DetCharacter) -> Result<i128> {
    Ok(local_counts(f, q, chi)?.twisted)
}

fn histogram_counts(f: &BiPoly, q: PrimePower, chi: DetCharacter) -> LocalCounts {
    let mut counts = LocalCounts::default();
    let mut row = TraceRow::new(q);
    let mut zeros = Vec::new();
    for t in 0..q.q {
        let in_y = f.specialize_x(t, q.q);
        zeros.clear();
        zeros.extend((1..q.q).filter(|d| d % q.p != 0 && horner_mod(&in_y, *d, q.q) == 0));
        if zeros.is_empty() {
            continue;
        }
        row.fill(t);
        for &d in &zeros {
            counts.add(chi.eval(d), row.count(d) as u128);
        }
    }
    counts
}

/// Fiber sizes mod `p^2` (odd `p`) by the class of `delta = T^2 - 4D`.
struct OddSquareFibers {
    /// `delta` a unit, indexed by `1 + (delta | p)`.
    unit: [u128; 3],
    /// `v_p(delta) = 1`.
    valuation_one: u128,
    /// `delta = 0 mod p^2`.
    vanishing: u128,
}

impl OddSquareFibers {
    fn new(p: u64) -> Self {
        let p = p as u128;
        let unit = |n: u128| (p - 1) * p * (p * p + p * n + n) + p * n;
        Self {
            unit: [unit(0), unit(1), unit(2)],
            valuation_one: p * p * (p * p - 1),
            vanishing: p * p * (p * p + p - 1),
        }
    }
}

/// Number of `(u, v)` in `F_p^2` with `a1 u + b1 v = c1` and `a2 u + b2 v = c2`.
fn solutions_2x2(eq1: [u64; 3], eq2: [u64; 3], p: u64) -> u64 {
    let [a1, b1, c1] = eq1;
    let [a2, b2, c2] = eq2;
    let single = |a: u64, b: u64, c: u64| match (a, b) {
        (0, 0) if c == 0 => p * p,
        (0, 0) => 0,
        _ => p,
    };
    if (a1, b1) == (0, 0) {
        return if c1 == 0 { single(a2, b2, c2) } else { 0 };
    }
    if (a2, b2) == (0, 0) {
        return if c2 == 0 { single(a1, b1, c1) } else { 0 };
    }
    let m = |x: u64, y: u64| (x as u128 * y as u128 % p as u128) as u64;
    if m(a1, b2) != m(a2, b1) {
        return 1;
    }
    if m(a1, c2) == m(a2, c1) && m(b1, c2) == m(b2, c1) {
        p
    } else {
        0
    }
}

/// Counts mod `p^2` for odd `p` by lifting the zeros of `f` mod `p`.
///
/// A zero `(T0, D0)` mod `p` lifts to `(T0 + pu, D0 + pv)` and
/// `f(T0 + pu, D0 + pv) = f(T0, D0) + p (u f_x + v f_y) mod p^2`, so the
/// surviving lifts form an affine line (or everything, or nothing) in
/// `(u, v)`. The fiber size depends only on the class of the discriminant,
/// which is constant along the lifts unless `p | T0^2 - 4 D0`, in which case
/// it is cut by a second linear condition.
fn odd_square_counts(f: &BiPoly, p: u64, chi: DetCharacter) -> LocalCounts {
    let p2 = p * p;
    let fx = f.partial(Var::X);
    let fy = f.partial(Var::Y);
    let fibers = OddSquareFibers::new(p);
    let neg = |x: u64| (p - x % p) % p;
    let mut counts = LocalCounts::default();
    for d0 in 1..p {
        let in_x = f.specialize_y(d0, p2);
        let weight = chi.eval(d0);
        for t0 in 0..p {
            let value = horner_mod_small(&in_x, t0, p2);
            if !value.is_multiple_of(p) {
                continue;
            }
            let c = value / p;
            let a = fx.eval_mod(t0, d0, p);
            let b = fy.eval_mod(t0, d0, p);
            let lifts = match (a, b) {
                (0, 0) if c == 0 => p2,
                (0, 0) => 0,
                _ => p,
            };
            if lifts == 0 {
                continue;
            }
            let delta = (t0 * t0) as i128 - 4 * d0 as i128;
            let m = if delta % p as i128 != 0 {
                let n = (1 + legendre(delta.rem_euclid(p as i128) as u64, p)) as usize;
                lifts as u128 * fibers.unit[n]
            } else {
                let k = (delta / p as i128).rem_euclid(p as i128) as u64;
                let eq_f = [a, b, neg(c)];
                let eq_delta = [(2 * t0) % p, neg(4), neg(k)];
                let both = solutions_2x2(eq_f, eq_delta, p) as u128;
                both * fibers.vanishing + (lifts as u128 - both) * fibers.valuation_one
            };
            counts.add(weight, m);
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gl2::oracle;

    fn sample_polys() -> Vec<BiPoly> {
        vec![
            BiPoly::koblitz(),
            BiPoly::frobdisc(),
            BiPoly::from_terms([(3, 0, 1), (1, 1, -2), (0, 0, 5)]).unwrap(),
            BiPoly::from_terms([(2, 1, 1), (1, 0, 1), (0, 2, 3), (0, 0, -1)]).unwrap(),
            BiPoly::from_terms([(1, 1, 7), (0, 3, -1), (1, 0, 1)]).unwrap(),
            // vanishes identically mod 3
            BiPoly::from_terms([(1, 0, 3), (0, 1, 9)]).unwrap(),
        ]
    }

    #[test]
    fn lifting_matches_histogram() {
        for f in sample_polys() {
            for p in [3u64, 5, 7, 11, 13, 23] {
                let q = PrimePower::new(p, 2);
                for chi in [DetCharacter::Trivial, DetCharacter::Legendre(p)] {
                    assert_eq!(
                        odd_square_counts(&f, p, chi),
                        histogram_counts(&f, q, chi),
                        "f = {f}, p = {p}, chi = {chi}"
                    );
                }
            }
        }
    }

    #[test]
    fn system_counter() {
        assert_eq!(solutions_2x2([1, 0, 2], [0, 1, 3], 5), 1);
        assert_eq!(solutions_2x2([1, 1, 2], [2, 2, 4], 5), 5);
        assert_eq!(solutions_2x2([1, 1, 2], [2, 2, 3], 5), 0);
        assert_eq!(solutions_2x2([0, 0, 0], [0, 0, 0], 5), 25);
        assert_eq!(solutions_2x2([0, 0, 0], [1, 4, 0], 5), 5);
        assert_eq!(solutions_2x2([0, 0, 1], [1, 4, 0], 5), 0);
    }

    #[test]
    fn matches_enumeration() {
        for f in sample_polys() {
            for m in [2u64, 3, 4, 5, 6, 7, 8, 9, 12, 16] {
                let counted = count_cf(&f, m).unwrap();
                let brute = oracle::enumerate_oracle(&f, m, None).unwrap();
                assert_eq!(counted, BigUint::from(brute), "f = {f}, m = {m}");
            }
        }
    }

    #[test]
    fn frobdisc_mod_four() {
        assert_eq!(
            count_cf(&BiPoly::frobdisc(), 4).unwrap(),
            BigUint::from(64u32)
        );
        assert_eq!(count_cf(&BiPoly::frobdisc(), 1).unwrap(), BigUint::one());
    }

    #[test]
    fn trivial_twist_is_plain_count() {
        for f in sample_polys() {
            for q in [
                PrimePower::new(3, 2),
                PrimePower::new(2, 3),
                PrimePower::new(5, 1),
            ] {
                let plain = count_cf(&f, q.q).unwrap();
                let twisted = count_cf_twisted(&f, q, DetCharacter::Trivial).unwrap();
                assert_eq!(BigUint::from(twisted as u128), plain);
            }
        }
    }

    #[test]
    fn twisted_matches_signed_enumeration() {
        for f in sample_polys() {
            for (p, e) in [(3u64, 2u32), (3, 1), (5, 1)] {
                let q = PrimePower::new(p, e);
                let chi = DetCharacter::Legendre(p);
                let brute =
                    oracle::enumerate_weighted(&f, q.q, q.q, |g| chi.eval(g.det(q.q)) as i64)
                        .unwrap();
                assert_eq!(count_cf_twisted(&f, q, chi).unwrap(), brute as i128);
            }
            for chi in [
                DetCharacter::Minus4,
                DetCharacter::Plus8,
                DetCharacter::Minus8,
            ] {
                let q = PrimePower::new(2, 3);
                let brute =
                    oracle::enumerate_weighted(&f, 8, 8, |g| chi.eval(g.det(8)) as i64).unwrap();
                assert_eq!(count_cf_twisted(&f, q, chi).unwrap(), brute as i128);
            }
        }
    }

    #[test]
    fn invalid_character_rejected() {
        let f = BiPoly::frobdisc();
        assert!(count_cf_twisted(&f, PrimePower::new(3, 2), DetCharacter::Legendre(5)).is_err());
        assert!(count_cf_twisted(&f, PrimePower::new(2, 1), DetCharacter::Minus4).is_err());
    }

    #[test]
    fn budgets() {
        let f = BiPoly::koblitz();
        assert!(local_counts(&f, PrimePower::new(4001, 2), DetCharacter::Trivial).is_err());
        assert!(local_counts(&f, PrimePower::new(2, 15), DetCharacter::Trivial).is_err());
    }
}
