use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{serre_data, Curve, LocalFactorCache, SerreData};
use crate::bipoly::BiPoly;
use crate::error::{capacity, Error, Result};
use crate::gl2::{LocalDensity, ODD_SQUARE_PRIME_LIMIT};
use crate::integers::{factorize, primes_up_to, squarefree_divisors};
use crate::scalar::{euler_product, signed_sum, Scalar};

/// A truncated Euler-product constant with its exact pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct SerreConstant {
    /// `finite_part * generic_part`.
    pub value: BigRational,
    pub ell_max: u64,
    /// Bound on `sum over ell > ell_max` of the local densities, `C / ell_max`.
    pub tail_estimate: f64,
    /// Measured `max ell^2 * |C_f(ell^2)| / |GL2(Z/ell^2 Z)|` over the included primes.
    pub decay_constant: f64,
    /// `sum over squarefree n | M_E of mu(n) |C_{E,f}(n^2)| / |G_E(n^2)|`; 1 for the generic constant.
    pub finite_part: BigRational,
    /// `prod (1 - |C_f(ell^2)| / |GL2(Z/ell^2 Z)|)` over primes `ell <= ell_max`, `ell` not dividing `M_E`.
    pub generic_part: BigRational,
    pub local_factors: Vec<LocalDensity>,
    /// `(n, mu(n), density)` for each squarefree `n | M_E`.
    pub finite_terms: Vec<(u64, i8, LocalDensity)>,
}

impl SerreConstant {
    pub fn value_as<T: Scalar>(&self) -> T {
        T::from_ratio(self.value.numer(), self.value.denom())
    }

    pub fn value_f64(&self) -> f64 {
        self.value_as()
    }
}

/// Partial sum `sum over squarefree d <= z of mu(d) |C_{E,f}(d^2)| / |G_E(d^2)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct MoebiusTruncation {
    pub z: u64,
    pub sum: BigRational,
    /// `max d^2 * ratio(d)` over the summed `d`.
    pub measured_constant: f64,
    /// `measured_constant * sum over d > z of 1 / d^2`.
    pub tail_bound: f64,
}

fn check_ell_max(ell_max: u64) -> Result<()> {
    if ell_max < 2 {
        return Err(Error::InvalidArgument("ell_max must be at least 2".into()));
    }
    if ell_max > ODD_SQUARE_PRIME_LIMIT {
        return Err(capacity("ell_max", ell_max, ODD_SQUARE_PRIME_LIMIT));
    }
    Ok(())
}

fn decay_constant(density: &LocalDensity) -> f64 {
    let ell = density.modulus as f64;
    ell * ell * density.value::<f64>()
}

impl LocalFactorCache {
    fn euler_factors(
        &self,
        ell_max: u64,
        skip: impl Fn(u64) -> bool,
    ) -> Result<(Vec<LocalDensity>, BigRational, f64)> {
        check_ell_max(ell_max)?;
        let factors = primes_up_to(ell_max)?
            .into_iter()
            .filter(|&ell| !skip(ell))
            .map(|ell| self.generic(ell))
            .collect::<Result<Vec<_>>>()?;
        let product = euler_product(factors.iter().map(LocalDensity::ratio));
        let c = factors.iter().map(decay_constant).fold(0.0, f64::max);
        Ok((factors, product, c))
    }

    /// `prod over ell <= ell_max of (1 - |C_f(ell^2)| / |GL2(Z/ell^2 Z)|)`.
    pub fn constant_generic(&self, ell_max: u64) -> Result<SerreConstant> {
        let (local_factors, generic_part, c) = self.euler_factors(ell_max, |_| false)?;
        Ok(SerreConstant {
            value: generic_part.clone(),
            ell_max,
            tail_estimate: c / ell_max as f64,
            decay_constant: c,
            finite_part: BigRational::one(),
            generic_part,
            local_factors,
            finite_terms: Vec::new(),
        })
    }

    /// `C_{E,f}` for a Serre curve, truncated at `ell_max`.
    ///
    /// The finite part over divisors of `M_E` is exact regardless of
    /// `ell_max`; only the product over `ell` not dividing `M_E` is truncated.
    pub fn constant_serre(&self, sd: &SerreData, ell_max: u64) -> Result<SerreConstant> {
        let (local_factors, generic_part, c) =
            self.euler_factors(ell_max, |ell| sd.m_e.is_multiple_of(ell))?;
        let finite_terms = squarefree_divisors(&sd.primes())
            .into_iter()
            .map(|n| {
                let mu = if factorize(n as i64)?.omega() % 2 == 0 {
                    1
                } else {
                    -1
                };
                Ok((n, mu, self.ratio_cef(sd, n)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let finite_part = signed_sum(finite_terms.iter().map(|(_, mu, d)| (*mu, d.ratio())));
        Ok(SerreConstant {
            value: &finite_part * &generic_part,
            ell_max,
            tail_estimate: c / ell_max as f64,
            decay_constant: c,
            finite_part,
            generic_part,
            local_factors,
            finite_terms,
        })
    }

    /// Möbius series `sum mu(d) ratio(d)` truncated at `d <= z`.
    pub fn moebius_series(&self, sd: &SerreData, z: u64) -> Result<MoebiusTruncation> {
        let mut sum = BigRational::zero();
        let mut measured = 0f64;
        let mut head = 0f64;
        for d in 1..=z {
            head += 1.0 / (d * d) as f64;
            let fac = factorize(d as i64)?;
            if !fac.is_squarefree() {
                continue;
            }
            let density = self.ratio_cef(sd, d)?;
            let r = density.ratio();
            measured = measured.max((d * d) as f64 * r.to_f64().unwrap_or(f64::INFINITY));
            if fac.omega() % 2 == 0 {
                sum += r;
            } else {
                sum -= r;
            }
        }
        let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        Ok(MoebiusTruncation {
            z,
            sum,
            measured_constant: measured,
            tail_bound: measured * (zeta2 - head).max(0.0),
        })
    }
}

/// Truncated generic constant `C_f`.
pub fn constant_generic(f: &BiPoly, ell_max: u64) -> Result<SerreConstant> {
    LocalFactorCache::new(f.clone()).constant_generic(ell_max)
}

/// Truncated `C_{E,f}` under the Serre-curve hypothesis.
pub fn constant_serre(curve: &Curve, f: &BiPoly, ell_max: u64) -> Result<SerreConstant> {
    LocalFactorCache::new(f.clone()).constant_serre(&serre_data(curve)?, ell_max)
}

pub fn moebius_series(curve: &Curve, f: &BiPoly, z: u64) -> Result<MoebiusTruncation> {
    LocalFactorCache::new(f.clone()).moebius_series(&serre_data(curve)?, z)
}
