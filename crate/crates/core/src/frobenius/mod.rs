//! Frobenius traces by point counting, and the empirical side of the
//! squarefree-density experiments.

mod family;
mod sf;

pub use family::{family_average, FamilyMode, FamilyReport, Sample, SkippedCurve};
pub use sf::{pi_sf, pi_sf_with, DivisibilityRow, SfOptions, SfReport};

use rayon::prelude::*;

use crate::error::{capacity, Error, Result};
use crate::integers::primes_up_to;
use crate::serre::Curve;

/// Largest `x_max` accepted by [`ap_series`].
pub const AP_SERIES_LIMIT: u64 = 1_000_000;

/// Quadratic-residue flags mod `p`, reused across primes to avoid reallocating.
#[derive(Default)]
struct ResidueTable {
    flags: Vec<u8>,
}

impl ResidueTable {
    fn fill(&mut self, p: u64) {
        self.flags.clear();
        self.flags.resize(p as usize, 0);
        // (x+1)^2 = x^2 + 2x + 1
        let mut square = 0u64;
        for x in 1..=(p - 1) / 2 {
            square += 2 * x - 1;
            if square >= p {
                square -= p;
            }
            self.flags[square as usize] = 1;
        }
    }
}

/// `-sum over x of (x^3 + a x + b | p)`, walking the cubic by finite differences.
fn trace_with(table: &mut ResidueTable, a: i64, b: i64, p: u64) -> i64 {
    table.fill(p);
    let flags = &table.flags[..];
    let red = |v: i64| v.rem_euclid(p as i64) as u64;
    let six = 6 % p;
    // c(x) = x^3 + a x + b, c(x+1) - c(x) = 3x^2 + 3x + 1 + a, second difference 6x + 6
    let (mut c, mut d1, mut d2) = (red(b), red(1 + a.rem_euclid(p as i64)), six);
    let (mut residues, mut zeros) = (0u64, 0u64);
    for _ in 0..p {
        residues += flags[c as usize] as u64;
        zeros += (c == 0) as u64;
        c += d1;
        if c >= p {
            c -= p;
        }
        d1 += d2;
        if d1 >= p {
            d1 -= p;
        }
        d2 += six;
        if d2 >= p {
            d2 -= p;
        }
    }
    let char_sum = 2 * residues as i64 + zeros as i64 - p as i64;
    -char_sum
}

/// `a_p(E) = p + 1 - #E(F_p)` for a prime `p >= 5` of good reduction.
pub fn ap(curve: &Curve, p: u64) -> Result<i64> {
    if !curve.is_good_prime(p) {
        return Err(Error::BadReduction { p });
    }
    if !crate::integers::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if p > u32::MAX as u64 {
        return Err(capacity("prime for point counting", p, u32::MAX));
    }
    Ok(trace_with(
        &mut ResidueTable::default(),
        curve.a(),
        curve.b(),
        p,
    ))
}

/// `a_p` over the good primes `5 <= p <= x_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApSeries {
    pub curve: Curve,
    pub x_max: u64,
    pub entries: Vec<(u64, i64)>,
    /// Primes `<= x_max` left out: 2, 3 and the divisors of `delta`.
    pub skipped: Vec<u64>,
}

impl ApSeries {
    /// Entries violating `|a_p| <= 2 sqrt(p)`; empty for a correct series.
    pub fn hasse_violations(&self) -> Vec<(u64, i64)> {
        self.entries
            .iter()
            .copied()
            .filter(|&(p, a)| (a as i128).pow(2) > 4 * p as i128)
            .collect()
    }
}

pub fn ap_series(curve: &Curve, x_max: u64) -> Result<ApSeries> {
    if x_max > AP_SERIES_LIMIT {
        return Err(capacity("x_max", x_max, AP_SERIES_LIMIT));
    }
    let (good, skipped): (Vec<u64>, Vec<u64>) = primes_up_to(x_max)?
        .into_iter()
        .partition(|&p| curve.is_good_prime(p));
    let (a, b) = (curve.a(), curve.b());
    // large primes first so the expensive work is spread early; order restored below
    let mut entries: Vec<(u64, i64)> = good
        .par_iter()
        .rev()
        .map_init(ResidueTable::default, |table, &p| {
            (p, trace_with(table, a, b, p))
        })
        .collect();
    entries.reverse();
    Ok(ApSeries {
        curve: *curve,
        x_max,
        entries,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts affine solutions of `y^2 = x^3 + ax + b` pair by pair.
    fn naive_ap(a: i64, b: i64, p: u64) -> i64 {
        let p = p as i64;
        let mut points = 1;
        for x in 0..p {
            let rhs = (x * x % p * x + a * x + b).rem_euclid(p);
            points += (0..p).filter(|y| y * y % p == rhs).count() as i64;
        }
        p + 1 - points
    }

    #[test]
    fn examples() {
        let e = Curve::new(-1, 0).unwrap();
        assert_eq!(ap(&e, 5).unwrap(), -2);
        assert_eq!(ap(&e, 7).unwrap(), 0);
        assert_eq!(ap(&Curve::new(0, 1).unwrap(), 5).unwrap(), 0);
        assert_eq!(ap(&e, 3), Err(Error::BadReduction { p: 3 }));
        // delta = -23
        assert_eq!(
            ap(&Curve::new(-1, 1).unwrap(), 23),
            Err(Error::BadReduction { p: 23 })
        );
    }

    #[test]
    fn matches_naive_counting() {
        for (a, b) in [(-1, 0), (0, 1), (1, 1), (-1, 2), (7, -3), (-13, 11)] {
            let curve = Curve::new(a, b).unwrap();
            for p in primes_up_to(150).unwrap() {
                if curve.is_good_prime(p) {
                    assert_eq!(ap(&curve, p).unwrap(), naive_ap(a, b, p), "({a},{b}) p={p}");
                }
            }
        }
    }

    #[test]
    fn series_small() {
        let s = ap_series(&Curve::new(-1, 0).unwrap(), 10).unwrap();
        assert_eq!(s.entries, vec![(5, -2), (7, 0)]);
        assert_eq!(s.skipped, vec![2, 3]);
        assert!(ap_series(&Curve::new(-1, 0).unwrap(), AP_SERIES_LIMIT + 1).is_err());
    }

    #[test]
    fn series_matches_pointwise_and_hasse() {
        let curve = Curve::new(3, -7).unwrap();
        let s = ap_series(&curve, 5000).unwrap();
        assert!(s.hasse_violations().is_empty());
        for &(p, a) in s.entries.iter().step_by(37) {
            assert_eq!(ap(&curve, p).unwrap(), a);
        }
        assert!(s.skipped.iter().all(|&p| !curve.is_good_prime(p)));
    }

    #[test]
    fn trace_sum_fixture() {
        // recorded from a separate square-root-counting implementation
        let s = ap_series(&Curve::new(0, 1).unwrap(), 10_000).unwrap();
        assert_eq!(s.skipped, vec![2, 3]);
        assert_eq!(s.entries.iter().map(|&(_, a)| a).sum::<i64>(), 208);
    }

    #[test]
    fn supersingular_for_x3_minus_x() {
        let s = ap_series(&Curve::new(-1, 0).unwrap(), 10_000).unwrap();
        for &(p, a) in &s.entries {
            if p % 4 == 3 {
                assert_eq!(a, 0, "p = {p}");
            }
        }
    }
}
