use super::PrimePower;
use crate::error::{capacity, Result};

/// Largest prime power for which a full `(T, D)` table is materialised.
pub const FIBER_MODULUS_LIMIT: u64 = 2500;

/// Histograms of `a(T - a)` for one trace `T`, reduced modulo each `p^j`.
///
/// With `r_a = a(T - a)` and `k = r_a - D`, the number of `(b, c)` with
/// `bc = k mod p^e` is `(p-1) p^(e-1) (1 + #{j in 1..=e : p^j | k}) + [p^e | k] p^(e-1)`,
/// so summing over `a` only needs, for every `j`, how many `r_a` agree with `D`
/// modulo `p^j`.
pub(crate) struct TraceRow {
    q: PrimePower,
    moduli: Vec<u64>,
    hist: Vec<Vec<u32>>,
}

impl TraceRow {
    pub(crate) fn new(q: PrimePower) -> Self {
        let moduli: Vec<u64> = (1..=q.e).map(|j| q.p.pow(j)).collect();
        let hist = moduli.iter().map(|&m| vec![0u32; m as usize]).collect();
        Self { q, moduli, hist }
    }

    pub(crate) fn fill(&mut self, t: u64) {
        for h in &mut self.hist {
            h.fill(0);
        }
        let q = self.q.q;
        for a in 0..q {
            let r = a * ((t + q - a) % q) % q;
            for (h, &m) in self.hist.iter_mut().zip(&self.moduli) {
                h[(r % m) as usize] += 1;
            }
        }
    }

    /// `M(T, D)` for the trace last passed to [`TraceRow::fill`].
    #[inline]
    pub(crate) fn count(&self, d: u64) -> u64 {
        let agree: u64 = self
            .hist
            .iter()
            .zip(&self.moduli)
            .map(|(h, &m)| h[(d % m) as usize] as u64)
            .sum();
        let top = self.hist[self.hist.len() - 1][d as usize] as u64;
        let lower = self.q.lower();
        (self.q.p - 1) * lower * (self.q.q + agree) + lower * top
    }
}

/// Table of `M(T, D) = #{g in GL2(Z/qZ) : tr g = T, det g = D}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceDetFiber {
    modulus: PrimePower,
    table: Vec<u64>,
}

impl TraceDetFiber {
    pub fn modulus(&self) -> PrimePower {
        self.modulus
    }

    /// `None` when `D` is not a unit (no invertible matrix has that determinant).
    pub fn get(&self, t: u64, d: u64) -> Option<u64> {
        let q = self.modulus.q;
        let (t, d) = (t % q, d % q);
        (d % self.modulus.p != 0).then(|| self.table[(t * q + d) as usize])
    }

    /// `(T, D, M(T, D))` over all traces and unit determinants.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        let q = self.modulus.q;
        let p = self.modulus.p;
        (0..q).flat_map(move |t| {
            (1..q)
                .filter(move |d| d % p != 0)
                .map(move |d| (t, d, self.table[(t * q + d) as usize]))
        })
    }

    pub fn total(&self) -> u128 {
        self.iter().map(|(_, _, m)| m as u128).sum()
    }
}

pub fn trace_det_fiber(q: PrimePower) -> Result<TraceDetFiber> {
    if q.q > FIBER_MODULUS_LIMIT {
        return Err(capacity("fiber modulus", q.q, FIBER_MODULUS_LIMIT));
    }
    let n = q.q as usize;
    let mut table = vec![0u64; n * n];
    let mut row = TraceRow::new(q);
    for t in 0..q.q {
        row.fill(t);
        for d in (1..q.q).filter(|d| d % q.p != 0) {
            table[t as usize * n + d as usize] = row.count(d);
        }
    }
    Ok(TraceDetFiber { modulus: q, table })
}
