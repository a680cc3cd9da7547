//! Serre-curve data and the per-curve constant `C_{E,f}`.
//!
//! For a Serre curve the image of Galois in `GL2(Z/mZ)` is the full
//! preimage of `ker psi`, where `psi = eps(g mod 2) * chi_d(det g)` with `eps`
//! the sign character of `GL2(F_2) ~ S_3` and `d` the fundamental
//! discriminant of `Q(sqrt(Delta))`. Every curve-specific density below is
//! computed under that hypothesis; nothing here certifies it.

mod constant;
mod density;
mod psi;

pub use constant::{
    constant_generic, constant_serre, moebius_series, MoebiusTruncation, SerreConstant,
};
pub use density::{ratio_cef, subgroup_index, LocalFactorCache};
pub use psi::{epsilon, psi, psi_factored};

use crate::error::{capacity, Error, Result};
use crate::gl2::DetCharacter;
use crate::integers::{factorize, squarefree_part};

/// `y^2 = x^3 + a x + b`, nonsingular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Curve {
    a: i64,
    b: i64,
    delta: i64,
}

impl Curve {
    /// Rejects singular models and models whose discriminant leaves `i64`.
    pub fn new(a: i64, b: i64) -> Result<Self> {
        let (a128, b128) = (a as i128, b as i128);
        let delta = a128
            .checked_pow(3)
            .and_then(|a3| a3.checked_mul(4))
            .zip(b128.checked_mul(b128).and_then(|b2| b2.checked_mul(27)))
            .and_then(|(x, y)| x.checked_add(y))
            .map(|s| -s)
            .ok_or_else(|| capacity("|4a^3 + 27b^2|", u128::MAX, i64::MAX as u128))?;
        if delta == 0 {
            return Err(Error::SingularCurve { a, b });
        }
        let delta = i64::try_from(delta)
            .map_err(|_| capacity("|4a^3 + 27b^2|", delta.unsigned_abs(), i64::MAX as u128))?;
        Ok(Self { a, b, delta })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// Discriminant of the cubic, `-(4a^3 + 27b^2)`.
    pub fn delta(&self) -> i64 {
        self.delta
    }

    /// Good reduction at `p`, meaning `p >= 5` and `p` does not divide `delta`.
    pub fn is_good_prime(&self, p: u64) -> bool {
        p >= 5 && !self.delta.unsigned_abs().is_multiple_of(p)
    }

    /// All nonsingular curves with `|a| <= a_bound`, `|b| <= b_bound`, in `(a, b)` order.
    pub fn family(a_bound: i64, b_bound: i64) -> Vec<Curve> {
        (-a_bound..=a_bound)
            .flat_map(|a| (-b_bound..=b_bound).map(move |b| (a, b)))
            .filter_map(|(a, b)| Curve::new(a, b).ok())
            .collect()
    }
}

impl std::fmt::Display for Curve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Discriminant data of a curve and the level `M_E` of its Serre character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerreData {
    pub delta: i64,
    pub delta_sf: i64,
    /// Discriminant of `Q(sqrt(delta))`, or 1 when `delta` is a square.
    pub d_fund: i64,
    pub m_e: u64,
    /// Odd primes dividing `m_e`, ascending.
    pub odd_primes: Vec<u64>,
    /// The 2-primary part of `chi_{d_fund}`.
    pub two_adic: DetCharacter,
}

impl SerreData {
    /// All primes of `m_e`, ascending (2 always divides `m_e`).
    pub fn primes(&self) -> Vec<u64> {
        std::iter::once(2)
            .chain(self.odd_primes.iter().copied())
            .collect()
    }

    pub fn two_adic_valuation(&self) -> u32 {
        self.m_e.trailing_zeros()
    }
}

pub fn serre_data(curve: &Curve) -> Result<SerreData> {
    let delta = curve.delta();
    let delta_sf = squarefree_part(delta)?;
    let (d_fund, m_e) = if delta_sf.rem_euclid(4) == 1 {
        (delta_sf, 2 * delta_sf.unsigned_abs())
    } else {
        (4 * delta_sf, 4 * delta_sf.unsigned_abs())
    };
    let odd_primes: Vec<u64> = factorize(delta_sf)?.primes().filter(|&p| p != 2).collect();
    // d_fund divided by the odd prime discriminants p* = (-1)^((p-1)/2) p
    let odd_product: i64 = odd_primes
        .iter()
        .map(|&p| if p % 4 == 1 { p as i64 } else { -(p as i64) })
        .product();
    let two_adic = match d_fund / odd_product {
        1 => DetCharacter::Trivial,
        -4 => DetCharacter::Minus4,
        8 => DetCharacter::Plus8,
        -8 => DetCharacter::Minus8,
        other => unreachable!("2-part {other} of a fundamental discriminant"),
    };
    Ok(SerreData {
        delta,
        delta_sf,
        d_fund,
        m_e,
        odd_primes,
        two_adic,
    })
}
