use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::psi::epsilon;
use super::{serre_data, Curve, SerreData};
use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::gl2::oracle::enumerate_weighted;
use crate::gl2::{
    gl2_order, local_counts, DensityKind, DetCharacter, LocalCounts, LocalDensity, PrimePower,
};
use crate::integers::factorize;

/// Local counts for one polynomial, memoised so that many curves (or many
/// divisors of one `M_E`) share the expensive prime-square counts.
///
/// Safe to share across threads; a value raced by two threads is simply
/// computed twice, with identical results.
#[derive(Debug)]
pub struct LocalFactorCache {
    f: BiPoly,
    squares: Mutex<HashMap<u64, LocalCounts>>,
    two_adic: Mutex<HashMap<(u32, bool, DetCharacter), (i64, i64)>>,
}

fn lookup<K: std::hash::Hash + Eq + Copy, V: Copy>(
    map: &Mutex<HashMap<K, V>>,
    key: K,
    compute: impl FnOnce() -> Result<V>,
) -> Result<V> {
    if let Some(v) = map.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(*v);
    }
    let v = compute()?;
    map.lock().unwrap_or_else(|e| e.into_inner()).insert(key, v);
    Ok(v)
}

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

impl LocalFactorCache {
    pub fn new(f: BiPoly) -> Self {
        Self {
            f,
            squares: Mutex::default(),
            two_adic: Mutex::default(),
        }
    }

    pub fn poly(&self) -> &BiPoly {
        &self.f
    }

    /// Counts mod `ell^2`; the twisted entry uses the Legendre symbol at odd `ell`.
    pub fn square_counts(&self, ell: u64) -> Result<LocalCounts> {
        lookup(&self.squares, ell, || {
            let chi = if ell == 2 {
                DetCharacter::Trivial
            } else {
                DetCharacter::Legendre(ell)
            };
            local_counts(&self.f, PrimePower::new(ell, 2), chi)
        })
    }

    /// `|C_f(ell^2)| / |GL2(Z/ell^2 Z)|` for a prime `ell`.
    pub fn generic(&self, ell: u64) -> Result<LocalDensity> {
        let counts = self.square_counts(ell)?;
        Ok(LocalDensity::new(
            ell,
            BigUint::from(counts.plain),
            BigUint::from(PrimePower::new(ell, 2).gl2_order()),
            DensityKind::Generic,
        ))
    }

    /// Plain and `eps * chi`-weighted counts over `GL2(Z/2^k Z)`, with the
    /// `f`-condition imposed mod 4 when `conditioned`.
    fn two_adic_counts(&self, k: u32, conditioned: bool, chi: DetCharacter) -> Result<(i64, i64)> {
        lookup(&self.two_adic, (k, conditioned, chi), || {
            let m = 1u64 << k;
            let cond = if conditioned { 4 } else { 1 };
            let plain = enumerate_weighted(&self.f, m, cond, |_| 1)?;
            let twisted = enumerate_weighted(&self.f, m, cond, |g| {
                (epsilon(g) * chi.eval(g.det(m))) as i64
            })?;
            Ok((plain, twisted))
        })
    }

    /// `|C_{E,f}(n^2)| / |G_E(n^2)|` for squarefree `n`, under the Serre-curve hypothesis.
    pub fn ratio_cef(&self, sd: &SerreData, n: u64) -> Result<LocalDensity> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        let factors = factorize(n as i64)?;
        if !factors.is_squarefree() {
            return Err(Error::NotSquarefree(n));
        }
        let (mut gen_num, mut gen_den) = (BigUint::one(), BigUint::one());
        let mut n2 = 1u64;
        for p in factors.primes() {
            if sd.m_e.is_multiple_of(p) {
                n2 *= p;
            } else {
                let d = self.generic(p)?;
                gen_num *= d.numerator;
                gen_den *= d.denominator;
            }
        }
        if n2 == 1 {
            return Ok(LocalDensity::new(n, gen_num, gen_den, DensityKind::Generic));
        }

        // Level L = lcm(n2^2, M_E): G_E(L) is the kernel of psi, so
        // |C_{E,f}(n2^2)| / |G_E(n2^2)| = (P + S) / |GL2(Z/LZ)| with P the plain
        // and S the psi-weighted count, both multiplicative over the primes of L.
        let two = n2.is_multiple_of(2);
        let k = sd.two_adic_valuation().max(if two { 2 } else { 0 });
        let (p2, s2) = self.two_adic_counts(k, two, sd.two_adic)?;
        let order2 = PrimePower::new(2, k).gl2_order();
        let mut plain = ratio(p2, order2);
        let mut twisted = ratio(s2, order2);
        for &p in &sd.odd_primes {
            if n2.is_multiple_of(p) {
                let c = self.square_counts(p)?;
                let order = PrimePower::new(p, 2).gl2_order();
                plain *= ratio(c.plain, order);
                twisted *= ratio(c.twisted, order);
            } else {
                // no condition at p: the Legendre symbol of det sums to zero
                twisted = BigRational::zero();
            }
        }
        let curve_ratio = plain + twisted;

        let g_order = BigInt::from(gl2_order(n2 * n2)?) / BigInt::from(subgroup_index(sd, n2));
        let count = &curve_ratio * BigRational::from_integer(g_order.clone());
        assert!(
            count.is_integer() && !count.is_negative(),
            "|C_E,f({n2}^2)| = {count} is not a count"
        );
        let to_natural = |v: BigInt| v.to_biguint().expect("nonnegative");
        Ok(LocalDensity::new(
            n,
            gen_num * to_natural(count.to_integer()),
            gen_den * to_natural(g_order),
            DensityKind::Curve,
        ))
    }
}

/// `[GL2(Z/n^2 Z) : G_E(n^2)]` for `n | M_E`: 2 exactly when `psi` factors
/// through level `n^2`, which needs `2 | n` and `|d_fund|` dividing `n^2`.
pub fn subgroup_index(sd: &SerreData, n: u64) -> u64 {
    let n2 = n as u128 * n as u128;
    if n.is_multiple_of(2) && n2.is_multiple_of(sd.d_fund.unsigned_abs() as u128) {
        2
    } else {
        1
    }
}

/// `|C_{E,f}(n^2)| / |G_E(n^2)|` for squarefree `n`.
pub fn ratio_cef(curve: &Curve, f: &BiPoly, n: u64) -> Result<LocalDensity> {
    LocalFactorCache::new(f.clone()).ratio_cef(&serre_data(curve)?, n)
}

#[cfg(test)]
mod tests {
    use super::super::psi;
    use super::*;
    use crate::gl2::generic_density;
    use crate::gl2::oracle::for_each_invertible;

    /// `|C_{E,f}(n^2)| / |G_E(n^2)|` by enumerating `ker psi` at level `L`.
    fn level_oracle(curve: &Curve, f: &BiPoly, n: u64, level: u64) -> BigRational {
        let sd = serre_data(curve).unwrap();
        assert!(level.is_multiple_of(sd.m_e) && level.is_multiple_of(n * n));
        let (mut hits, mut size) = (0u64, 0u64);
        for_each_invertible(level, |g| {
            if psi(&g.reduce(sd.m_e), &sd).unwrap() == 1 {
                size += 1;
                if f.eval_mod(g.trace(level), g.det(level), n * n) == 0 {
                    hits += 1;
                }
            }
        })
        .unwrap();
        ratio(hits, size)
    }

    fn builtins() -> [BiPoly; 2] {
        [BiPoly::koblitz(), BiPoly::frobdisc()]
    }

    #[test]
    fn trivial_and_coprime() {
        let curve = Curve::new(0, 1).unwrap();
        for f in builtins() {
            assert!(ratio_cef(&curve, &f, 1).unwrap().ratio().is_one());
            let d = ratio_cef(&curve, &f, 5).unwrap();
            assert_eq!(d.kind, DensityKind::Generic);
            assert_eq!(d.ratio(), generic_density(&f, 5).unwrap().ratio());
        }
        assert_eq!(
            ratio_cef(&curve, &BiPoly::koblitz(), 12),
            Err(Error::NotSquarefree(12))
        );
    }

    #[test]
    fn level_36_enumeration() {
        let curve = Curve::new(0, 1).unwrap();
        for f in builtins() {
            let d = ratio_cef(&curve, &f, 6).unwrap();
            assert_eq!(d.kind, DensityKind::Curve);
            assert_eq!(d.ratio(), level_oracle(&curve, &f, 6, 36), "f = {f}");
            // index 2 at level 36 since psi has conductor 12 | 36
            assert_eq!(d.denominator, (gl2_order(36).unwrap() / 2u32));
        }
    }

    #[test]
    fn small_levels_against_enumeration() {
        // (curve, n, level) with level a multiple of both n^2 and M_E, at most 64
        let cases = [
            ((-1, 0), 2, 4),
            ((1, 0), 2, 4),
            ((0, 1), 2, 12),
            ((0, 1), 3, 18),
            ((-2, 0), 2, 8),
            ((2, 0), 2, 8),
            ((-3, 0), 2, 12),
            ((-3, 0), 3, 36),
            ((-3, 0), 6, 36),
            ((-1, 0), 6, 36),
        ];
        let extra = BiPoly::from_terms([(2, 1, 1), (1, 0, 1), (0, 0, -3)]).unwrap();
        for ((a, b), n, level) in cases {
            let curve = Curve::new(a, b).unwrap();
            for f in builtins().into_iter().chain([extra.clone()]) {
                let computed = ratio_cef(&curve, &f, n).unwrap().ratio();
                assert_eq!(
                    computed,
                    level_oracle(&curve, &f, n, level),
                    "{curve} n={n} f={f}"
                );
            }
        }
    }

    #[test]
    fn only_full_level_divisors_differ() {
        // n | M_E but n not in {M_E, M_E/2, M_E/4}: the curve ratio is generic
        let curve = Curve::new(0, 1).unwrap();
        for f in builtins() {
            for n in [2, 3] {
                let d = ratio_cef(&curve, &f, n).unwrap();
                assert_eq!(d.ratio(), generic_density(&f, n).unwrap().ratio());
            }
        }
        // M_E = 30 for (-3, 3): only n = 30 can differ (15 is odd, and eps lives at 2)
        let curve = Curve::new(-3, 3).unwrap();
        let sd = serre_data(&curve).unwrap();
        assert_eq!(sd.m_e, 30);
        let cache = LocalFactorCache::new(BiPoly::koblitz());
        for n in [2, 3, 5, 6, 10, 15] {
            let d = cache.ratio_cef(&sd, n).unwrap();
            assert_eq!(
                d.ratio(),
                generic_density(cache.poly(), n).unwrap().ratio(),
                "n={n}"
            );
        }
        {
            let n = 30;
            let d = cache.ratio_cef(&sd, n).unwrap();
            assert_ne!(
                d.ratio(),
                generic_density(cache.poly(), n).unwrap().ratio(),
                "n={n}"
            );
        }
    }

    #[test]
    fn curve_ratio_at_most_twice_generic() {
        for (a, b) in [
            (0, 1),
            (1, 0),
            (-1, 0),
            (-1, 1),
            (1, 1),
            (-1, 2),
            (-3, 3),
            (2, 2),
        ] {
            let curve = Curve::new(a, b).unwrap();
            let sd = serre_data(&curve).unwrap();
            for f in builtins() {
                let cache = LocalFactorCache::new(f.clone());
                for n in [sd.m_e, sd.m_e / 2, sd.m_e / 4] {
                    if n == 0 || !factorize(n as i64).unwrap().is_squarefree() {
                        continue;
                    }
                    let curve_ratio = cache.ratio_cef(&sd, n).unwrap().ratio();
                    let generic = generic_density(&f, n).unwrap().ratio();
                    assert!(curve_ratio <= generic * BigRational::from_integer(2.into()));
                }
            }
        }
    }

    #[test]
    fn multiplicative_across_split() {
        let curve = Curve::new(0, 1).unwrap();
        for f in builtins() {
            let whole = ratio_cef(&curve, &f, 30).unwrap().ratio();
            let split =
                ratio_cef(&curve, &f, 6).unwrap().ratio() * generic_density(&f, 5).unwrap().ratio();
            assert_eq!(whole, split);
        }
    }

    #[test]
    fn index_rule() {
        let sd = |a, b| serre_data(&Curve::new(a, b).unwrap()).unwrap();
        assert_eq!(subgroup_index(&sd(0, 1), 6), 2);
        assert_eq!(subgroup_index(&sd(0, 1), 2), 1);
        assert_eq!(subgroup_index(&sd(0, 1), 3), 1);
        assert_eq!(subgroup_index(&sd(-1, 0), 2), 2);
        assert_eq!(subgroup_index(&sd(1, 0), 2), 2);
        // d = -8: 8 does not divide 4
        assert_eq!(subgroup_index(&sd(2, 0), 2), 1);
    }
}
