use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ap_series, pi_sf_with, SfOptions};
use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::serre::{serre_data, Curve, LocalFactorCache};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyMode {
    /// Average of the truncated per-curve constants.
    Constants,
    /// Average of the empirical ratios `pi^SF(x_max) / pi(x_max)`.
    Empirical { x_max: u64 },
}

/// Seeded subsample of the box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sample {
    pub size: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedCurve {
    pub a: i64,
    pub b: i64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub a_bound: i64,
    pub b_bound: i64,
    pub mode: FamilyMode,
    pub ell_max: u64,
    /// Nonsingular curves in the box.
    pub family_size: usize,
    /// Curves selected for evaluation (the whole family unless sampled).
    pub selected: usize,
    pub evaluated: usize,
    /// Curves left out because a budget was exceeded.
    pub skipped: Vec<SkippedCurve>,
    pub average: f64,
    /// Truncated `C_f` at the same `ell_max`.
    pub generic: f64,
}

impl FamilyReport {
    pub fn skipped_fraction(&self) -> f64 {
        if self.selected == 0 {
            0.0
        } else {
            self.skipped.len() as f64 / self.selected as f64
        }
    }

    pub fn difference(&self) -> f64 {
        self.average - self.generic
    }
}

fn budget_error(e: &Error) -> bool {
    matches!(e, Error::Capacity { .. } | Error::Unfactored(_))
}

/// Average over `E(a, b)` with `|a| <= a_bound`, `|b| <= b_bound`, compared
/// with the generic constant.
pub fn family_average(
    a_bound: i64,
    b_bound: i64,
    f: &BiPoly,
    mode: FamilyMode,
    ell_max: u64,
    sample: Option<Sample>,
) -> Result<FamilyReport> {
    if a_bound < 0 || b_bound < 0 {
        return Err(Error::InvalidArgument(
            "box bounds must be nonnegative".into(),
        ));
    }
    let family = Curve::family(a_bound, b_bound);
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let selected: Vec<Curve> = match sample {
        Some(s) if s.size < family.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let mut picks = index::sample(&mut rng, family.len(), s.size).into_vec();
            picks.sort_unstable();
            picks.into_iter().map(|i| family[i]).collect()
        }
        _ => family.clone(),
    };
    if selected.is_empty() {
        return Err(Error::EmptyFamily);
    }

    let cache = LocalFactorCache::new(f.clone());
    let generic = cache.constant_generic(ell_max)?.value_f64();
    let options = SfOptions {
        moduli: Vec::new(),
        ell_max,
    };
    let values: Vec<Result<f64>> = selected
        .par_iter()
        .map(|curve| match mode {
            FamilyMode::Constants => Ok(cache
                .constant_serre(&serre_data(curve)?, ell_max)?
                .value_f64()),
            FamilyMode::Empirical { x_max } => {
                Ok(pi_sf_with(&ap_series(curve, x_max)?, f, &options)?.empirical_ratio)
            }
        })
        .collect();

    let mut skipped = Vec::new();
    let mut sum = 0.0;
    let mut evaluated = 0;
    for (curve, value) in selected.iter().zip(values) {
        match value {
            Ok(v) => {
                sum += v;
                evaluated += 1;
            }
            Err(e) if budget_error(&e) => skipped.push(SkippedCurve {
                a: curve.a(),
                b: curve.b(),
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    if evaluated == 0 {
        return Err(Error::EmptyFamily);
    }
    Ok(FamilyReport {
        a_bound,
        b_bound,
        mode,
        ell_max,
        family_size: family.len(),
        selected: selected.len(),
        evaluated,
        skipped,
        average: sum / evaluated as f64,
        generic,
    })
}
