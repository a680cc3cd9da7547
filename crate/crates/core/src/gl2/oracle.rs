//! Brute-force enumeration of `GL2(Z/mZ)`, used as the independent check on
//! the fiber-based counters.

use crate::bipoly::BiPoly;
use crate::error::{capacity, Result};
use crate::integers::modular::gcd;

/// Modulus cap for [`enumerate_oracle`] (`16^4 = 65536` matrices).
pub const ORACLE_MODULUS_LIMIT: u64 = 16;

/// Modulus cap for [`for_each_invertible`] and the weighted variant.
pub const ENUMERATION_MODULUS_LIMIT: u64 = 64;

/// `[[a, b], [c, d]]` with entries reduced mod some `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        Self { a, b, c, d }
    }

    pub fn reduce(&self, m: u64) -> Self {
        Self::new(self.a % m, self.b % m, self.c % m, self.d % m)
    }

    pub fn trace(&self, m: u64) -> u64 {
        (self.a + self.d) % m
    }

    pub fn det(&self, m: u64) -> u64 {
        let ad = (self.a as u128 * self.d as u128 % m as u128) as u64;
        let bc = (self.b as u128 * self.c as u128 % m as u128) as u64;
        (ad + m - bc) % m
    }

    pub fn mul(&self, rhs: &Mat2, m: u64) -> Mat2 {
        let dot = |x: u64, y: u64, z: u64, w: u64| ((x * y) % m + (z * w) % m) % m;
        Mat2::new(
            dot(self.a, rhs.a, self.b, rhs.c),
            dot(self.a, rhs.b, self.b, rhs.d),
            dot(self.c, rhs.a, self.d, rhs.c),
            dot(self.c, rhs.b, self.d, rhs.d),
        )
    }

    pub fn is_invertible(&self, m: u64) -> bool {
        gcd(self.det(m), m) == 1
    }
}

/// Calls `visit` on every invertible matrix mod `m`.
pub fn for_each_invertible(m: u64, mut visit: impl FnMut(&Mat2)) -> Result<()> {
    if m > ENUMERATION_MODULUS_LIMIT {
        return Err(capacity(
            "enumeration modulus",
            m,
            ENUMERATION_MODULUS_LIMIT,
        ));
    }
    let unit: Vec<bool> = (0..m).map(|x| gcd(x, m) == 1).collect();
    for a in 0..m {
        for d in 0..m {
            let ad = a * d % m;
            for b in 0..m {
                for c in 0..m {
                    let det = (ad + m - b * c % m) % m;
                    if unit[det as usize] {
                        visit(&Mat2::new(a, b, c, d));
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn count_invertible(m: u64) -> Result<u64> {
    let mut n = 0;
    for_each_invertible(m, |_| n += 1)?;
    Ok(n)
}

/// `#{g in GL2(Z/mZ) : f(tr g, det g) = 0 mod m and predicate(g)}` by brute force.
pub fn enumerate_oracle(
    f: &BiPoly,
    m: u64,
    predicate: Option<&dyn Fn(&Mat2) -> bool>,
) -> Result<u64> {
    if m > ORACLE_MODULUS_LIMIT {
        return Err(capacity("oracle modulus", m, ORACLE_MODULUS_LIMIT));
    }
    let mut n = 0;
    for_each_invertible(m, |g| {
        if f.eval_mod(g.trace(m), g.det(m), m) == 0 && predicate.is_none_or(|keep| keep(g)) {
            n += 1;
        }
    })?;
    Ok(n)
}

/// `sum of weight(g)` over `g in GL2(Z/mZ)` with `f(tr g, det g) = 0 mod condition_modulus`.
pub fn enumerate_weighted(
    f: &BiPoly,
    m: u64,
    condition_modulus: u64,
    weight: impl Fn(&Mat2) -> i64,
) -> Result<i64> {
    debug_assert!(m.is_multiple_of(condition_modulus));
    let mut total = 0i64;
    for_each_invertible(m, |g| {
        if f.eval_mod(g.trace(m), g.det(m), condition_modulus) == 0 {
            total += weight(g);
        }
    })?;
    Ok(total)
}
