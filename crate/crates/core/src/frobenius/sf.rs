use num_rational::BigRational;

use super::{ap_series, ApSeries};
use crate::bipoly::BiPoly;
use crate::error::{capacity, Error, Result};
use crate::integers::{is_squarefree, prime_count, SquarefreeTable};
use crate::serre::{serre_data, LocalFactorCache, SerreConstant};

/// Largest `|f_p|` for which a shared squarefree table is built; beyond it
/// each value is tested individually.
pub const SF_TABLE_BOUND: u64 = 1 << 28;

/// Knobs of [`pi_sf_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SfOptions {
    /// `n` values for the divisibility rows; each must be squarefree.
    pub moduli: Vec<u64>,
    /// Truncation of the matching constant.
    pub ell_max: u64,
}

impl Default for SfOptions {
    fn default() -> Self {
        Self {
            moduli: (2..=20).filter(|&n| is_squarefree(n as i64)).collect(),
            ell_max: 101,
        }
    }
}

/// `#{p : n^2 | f_p}` against the predicted density `|C_{E,f}(n^2)| / |G_E(n^2)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisibilityRow {
    pub n: u64,
    pub observed: u64,
    pub ratio: BigRational,
    /// `ratio * good_primes`.
    pub expected: f64,
    /// Binomial standard deviation `sqrt(good_primes * r (1 - r))`.
    pub std_dev: f64,
}

impl DivisibilityRow {
    /// `(observed - expected) / std_dev`, 0 when the prediction is degenerate.
    pub fn z_score(&self) -> f64 {
        if self.std_dev == 0.0 {
            if self.observed as f64 == self.expected {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.observed as f64 - self.expected) / self.std_dev
        }
    }
}

#[derive(Debug, Clone)]
pub struct SfReport {
    pub x_max: u64,
    /// `pi(x_max)`, all primes.
    pub pi_x: u64,
    /// Primes actually tested (good reduction, `p >= 5`).
    pub good_primes: u64,
    pub excluded: Vec<u64>,
    /// `#{good p : f_p squarefree}`.
    pub sf_count: u64,
    /// `#{good p : f_p = 0}`; these count as not squarefree.
    pub zero_count: u64,
    /// `sf_count / pi_x`.
    pub empirical_ratio: f64,
    /// `C_{E,f}` truncated at `ell_max`, or the reason it is unavailable.
    pub constant: std::result::Result<SerreConstant, Error>,
    pub divisibility: Vec<DivisibilityRow>,
}

/// `f(a_p, p)` for every entry, as exact integers.
fn sequence(series: &ApSeries, f: &BiPoly) -> Result<Vec<i64>> {
    series
        .entries
        .iter()
        .map(|&(p, a)| {
            f.eval_int(a as i128, p as i128)
                .and_then(|v| i64::try_from(v).ok())
                .ok_or_else(|| capacity("|f(a_p, p)|", u128::MAX, i64::MAX as u128))
        })
        .collect()
}

/// Squarefree and divisibility statistics for an already computed series.
pub fn pi_sf_with(series: &ApSeries, f: &BiPoly, options: &SfOptions) -> Result<SfReport> {
    let values = sequence(series, f)?;
    let largest = values
        .iter()
        .map(|v| v.unsigned_abs())
        .max()
        .unwrap_or(1)
        .max(1);
    let table = (largest <= SF_TABLE_BOUND)
        .then(|| SquarefreeTable::new(largest))
        .transpose()?;
    let test = |v: i64| match &table {
        Some(t) => t.is_squarefree(v),
        None => is_squarefree(v),
    };
    let sf_count = values.iter().filter(|&&v| test(v)).count() as u64;
    let zero_count = values.iter().filter(|&&v| v == 0).count() as u64;
    let pi_x = prime_count(series.x_max)? as u64;
    let good_primes = values.len() as u64;

    let sd = serre_data(&series.curve)?;
    let cache = LocalFactorCache::new(f.clone());
    let divisibility = options
        .moduli
        .iter()
        .map(|&n| {
            let density = cache.ratio_cef(&sd, n)?;
            let r = density.value::<f64>();
            let modulus = (n as i128) * (n as i128);
            Ok(DivisibilityRow {
                n,
                observed: values.iter().filter(|&&v| v as i128 % modulus == 0).count() as u64,
                ratio: density.ratio(),
                expected: r * good_primes as f64,
                std_dev: (good_primes as f64 * r * (1.0 - r)).sqrt(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SfReport {
        x_max: series.x_max,
        pi_x,
        good_primes,
        excluded: series.skipped.clone(),
        sf_count,
        zero_count,
        empirical_ratio: if pi_x == 0 {
            0.0
        } else {
            sf_count as f64 / pi_x as f64
        },
        constant: cache.constant_serre(&sd, options.ell_max),
        divisibility,
    })
}

/// `pi^SF_{E,f}(x_max)` with the default divisibility rows and `ell_max = 101`.
pub fn pi_sf(curve: &crate::serre::Curve, f: &BiPoly, x_max: u64) -> Result<SfReport> {
    pi_sf_with(&ap_series(curve, x_max)?, f, &SfOptions::default())
}
