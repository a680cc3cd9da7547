//! Scalar types that densities and Euler products can be evaluated in.
//!
//! Counting is always exact; a [`Scalar`] only decides how the resulting
//! ratios are combined. [`crate::Rational`] keeps everything exact, `f64`
//! and `f32` give fast approximate renderings of the same products.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive};

pub trait Scalar: Num + Clone + PartialOrd + std::fmt::Debug {
    /// Builds `num / den`; `den` must be nonzero.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self;

    fn from_int(v: i64) -> Self;

    fn as_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        <f64 as Scalar>::from_ratio(num, den) as f32
    }

    fn from_int(v: i64) -> Self {
        v as f32
    }

    fn as_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
    }

    fn from_int(v: i64) -> Self {
        <BigRational as FromPrimitive>::from_i64(v).expect("integer converts")
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// `prod (1 - r)` over the given local densities.
pub fn euler_product<T: Scalar>(densities: impl IntoIterator<Item = T>) -> T {
    densities
        .into_iter()
        .fold(T::one(), |acc, r| acc * (T::one() - r))
}

/// Sum of `sign * value` pairs, the shape of a truncated Möbius series.
pub fn signed_sum<T: Scalar>(terms: impl IntoIterator<Item = (i8, T)>) -> T {
    terms
        .into_iter()
        .fold(T::zero(), |acc, (sign, v)| match sign {
            1 => acc + v,
            -1 => acc - v,
            _ => acc,
        })
}

#[cfg(test)]
fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_agrees_across_scalars() {
        let pairs = [(2i64, 3i64), (11, 72), (29, 600)];
        let exact: BigRational = euler_product(
            pairs
                .iter()
                .map(|&(n, d)| BigRational::from_ratio(&n.into(), &d.into())),
        );
        let approx: f64 = euler_product(pairs.iter().map(|&(n, d)| n as f64 / d as f64));
        let single: f32 = euler_product(pairs.iter().map(|&(n, d)| n as f32 / d as f32));
        assert_eq!(exact, rational(61 * 571, 3 * 72 * 600));
        assert!((exact.as_f64() - approx).abs() < 1e-15);
        assert!((single as f64 - approx).abs() < 1e-6);
    }

    #[test]
    fn signed_sum_skips_zero_signs() {
        let s: f64 = signed_sum([(1, 1.0), (-1, 0.25), (0, 100.0)]);
        assert_eq!(s, 0.75);
    }
}
