use super::factor::factorize;
use super::primes::primes_up_to;
use crate::error::{capacity, Result};

/// Largest bound accepted by [`SquarefreeTable::new`].
pub const MAX_TABLE_BOUND: u64 = 1 << 32;

/// Squarefree kernel with sign: `n = d * m^2`, `d` squarefree, `sign(d) = sign(n)`.
pub fn squarefree_part(n: i64) -> Result<i64> {
    let f = factorize(n)?;
    let odd_power_product: i64 = f
        .factors
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(p, _)| p as i64)
        .product();
    Ok(f.sign as i64 * odd_power_product)
}

/// `true` iff `n != 0` and no prime square divides `|n|`.
///
/// Zero is not squarefree; negative values are judged by their absolute value.
pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n.unsigned_abs();
    if m.is_multiple_of(4) {
        return false;
    }
    if m.is_multiple_of(2) {
        m /= 2;
    }
    let mut d = 3u64;
    while d * d * d <= m {
        if m.is_multiple_of(d) {
            m /= d;
            if m.is_multiple_of(d) {
                return false;
            }
        }
        d += 2;
    }
    // every prime factor of m now exceeds cbrt(m), so m is 1, p, p*q or p^2
    let r = m.isqrt();
    m == 1 || r * r != m
}

/// Bitmap of squarefree flags for `1..=bound`.
#[derive(Debug, Clone)]
pub struct SquarefreeTable {
    bound: u64,
    bits: Vec<u64>,
}

impl SquarefreeTable {
    pub fn new(bound: u64) -> Result<Self> {
        if bound == 0 {
            return Err(crate::Error::InvalidArgument(
                "squarefree table bound must be positive".into(),
            ));
        }
        if bound > MAX_TABLE_BOUND {
            return Err(capacity("squarefree table bound", bound, MAX_TABLE_BOUND));
        }
        let len = bound as usize + 1;
        let mut bits = vec![u64::MAX; len.div_ceil(64)];
        bits[0] &= !1; // index 0
        for p in primes_up_to(bound.isqrt())? {
            let step = (p * p) as usize;
            let mut j = step;
            while j < len {
                bits[j / 64] &= !(1 << (j % 64));
                j += step;
            }
        }
        let tail = len % 64;
        if tail != 0 {
            *bits.last_mut().unwrap() &= (1u64 << tail) - 1;
        }
        Ok(Self { bound, bits })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Flag for `n`; `None` if `n` lies outside `1..=bound`.
    #[inline]
    pub fn get(&self, n: u64) -> Option<bool> {
        (n >= 1 && n <= self.bound).then(|| self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1)
    }

    /// Squarefree test for a signed value, falling back to trial division
    /// outside the table.
    pub fn is_squarefree(&self, n: i64) -> bool {
        self.get(n.unsigned_abs())
            .unwrap_or_else(|| is_squarefree(n))
    }

    /// Number of squarefree integers in `1..=bound`.
    pub fn count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_part_examples() {
        assert_eq!(squarefree_part(12).unwrap(), 3);
        assert_eq!(squarefree_part(-48).unwrap(), -3);
        assert_eq!(squarefree_part(1).unwrap(), 1);
        assert_eq!(squarefree_part(-4).unwrap(), -1);
        assert_eq!(squarefree_part(-104).unwrap(), -26);
    }

    #[test]
    fn is_squarefree_examples() {
        assert!(!is_squarefree(18));
        assert!(!is_squarefree(-20));
        assert!(is_squarefree(-1));
        assert!(!is_squarefree(0));
        assert!(is_squarefree(30));
        assert!(!is_squarefree(1_000_003 * 1_000_003));
        assert!(is_squarefree(1_000_003 * 999_983));
    }

    #[test]
    fn table_small() {
        let t = SquarefreeTable::new(10).unwrap();
        let yes: Vec<u64> = (1..=10).filter(|&n| t.get(n).unwrap()).collect();
        assert_eq!(yes, vec![1, 2, 3, 5, 6, 7, 10]);
        assert_eq!(t.get(0), None);
        assert_eq!(t.get(11), None);
    }

    #[test]
    fn table_marks_prime_squares() {
        let t = SquarefreeTable::new(10_000).unwrap();
        for p in primes_up_to(100).unwrap() {
            assert_eq!(t.get(p * p), Some(false));
        }
    }

    #[test]
    fn table_agrees_with_pointwise_test() {
        let t = SquarefreeTable::new(10_000).unwrap();
        for n in 1..=10_000u64 {
            let by_factor = factorize(n as i64).unwrap().is_squarefree();
            assert_eq!(t.get(n), Some(by_factor), "n = {n}");
            assert_eq!(is_squarefree(n as i64), by_factor);
        }
        assert_eq!(t.count(), 6083);
    }

    #[test]
    fn count_to_one_million() {
        let t = SquarefreeTable::new(1_000_000).unwrap();
        assert_eq!(t.count(), 607_926);
    }
}
