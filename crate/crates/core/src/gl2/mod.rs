//! Exact counting in `GL2(Z/mZ)`.
//!
//! Everything is organised around trace/determinant fibers: the number of
//! matrices with a given `(T, D)` is a closed function of `(T, D)`, so a
//! condition on `f(tr g, det g)` only needs a pass over `(T, D)` pairs
//! instead of over all `m^4` matrices.

mod character;
mod count;
mod fiber;
pub mod oracle;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

pub use character::DetCharacter;
pub use count::{count_cf, count_cf_twisted, local_counts, LocalCounts, ODD_SQUARE_PRIME_LIMIT};
pub use fiber::{trace_det_fiber, TraceDetFiber, FIBER_MODULUS_LIMIT};

use crate::error::{Error, Result};
use crate::integers::{factorize, is_prime};
use crate::scalar::Scalar;

/// A prime power modulus `q = p^e`, `e >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
    pub q: u64,
}

impl PrimePower {
    /// Panics on overflow; callers pass small, known-prime `p`.
    pub fn new(p: u64, e: u32) -> Self {
        debug_assert!(e >= 1 && is_prime(p));
        Self {
            p,
            e,
            q: p.checked_pow(e).expect("prime power fits in u64"),
        }
    }

    /// Recognises `q` as a prime power.
    pub fn from_modulus(q: u64) -> Result<Self> {
        let f = factorize(q as i64)?;
        match f.factors.as_slice() {
            [(p, e)] => Ok(Self::new(*p, *e)),
            _ => Err(Error::InvalidArgument(format!("{q} is not a prime power"))),
        }
    }

    /// `p^(e-1)`.
    pub fn lower(&self) -> u64 {
        self.q / self.p
    }

    /// `|GL2(Z/qZ)| = p^(4e-3) (p - 1) (p^2 - 1)`.
    pub fn gl2_order(&self) -> u128 {
        let p = self.p as u128;
        p.pow(4 * self.e - 3) * (p - 1) * (p * p - 1)
    }
}

/// Prime-power decomposition of `m >= 1`.
pub fn prime_powers(m: u64) -> Result<Vec<PrimePower>> {
    if m == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    Ok(factorize(m as i64)?
        .factors
        .into_iter()
        .map(|(p, e)| PrimePower::new(p, e))
        .collect())
}

/// `|GL2(Z/mZ)|`, exact.
pub fn gl2_order(m: u64) -> Result<BigUint> {
    Ok(prime_powers(m)?
        .iter()
        .map(|q| BigUint::from(q.gl2_order()))
        .product())
}

/// `#{(b, c) mod q : bc = k}`.
pub fn count_bc_pairs(k: i128, q: PrimePower) -> u64 {
    let k = k.rem_euclid(q.q as i128) as u64;
    let unit_part = (q.p - 1) * q.lower();
    if k == 0 {
        q.e as u64 * unit_part + q.q
    } else {
        let v = crate::integers::modular::valuation(k, q.p) as u64;
        (v + 1) * unit_part
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityKind {
    Generic,
    Curve,
}

/// Exact ratio `|C(n^2)| / |G(n^2)|` with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDensity {
    /// `n`; the counts live at level `n^2`.
    pub modulus: u64,
    pub numerator: BigUint,
    pub denominator: BigUint,
    pub kind: DensityKind,
}

impl LocalDensity {
    pub fn new(modulus: u64, numerator: BigUint, denominator: BigUint, kind: DensityKind) -> Self {
        debug_assert!(numerator <= denominator);
        Self {
            modulus,
            numerator,
            denominator,
            kind,
        }
    }

    pub fn ratio(&self) -> BigRational {
        BigRational::new(
            self.numerator.clone().into(),
            self.denominator.clone().into(),
        )
    }

    pub fn value<T: Scalar>(&self) -> T {
        T::from_ratio(
            &self.numerator.clone().into(),
            &self.denominator.clone().into(),
        )
    }

    /// The Euler factor `1 - ratio`.
    pub fn complement(&self) -> BigRational {
        BigRational::one() - self.ratio()
    }
}

/// `|C_f(n^2)| / |GL2(Z/n^2 Z)|` for squarefree `n`, as a [`LocalDensity`].
pub fn generic_density(f: &crate::BiPoly, n: u64) -> Result<LocalDensity> {
    let n2 = n
        .checked_mul(n)
        .ok_or_else(|| crate::error::capacity("modulus n^2", n as u128 * n as u128, u64::MAX))?;
    let numerator = count_cf(f, n2)?;
    Ok(LocalDensity::new(
        n,
        numerator,
        gl2_order(n2)?,
        DensityKind::Generic,
    ))
}
