//! Number-theoretic substrate: sieving, factorization, squarefreeness and
//! quadratic symbols.

mod factor;
mod kronecker;
pub mod modular;
mod primes;
mod squarefree;

pub use factor::{factorize, Factorization, TRIAL_DIVISION_LIMIT};
pub use kronecker::{kronecker, legendre};
pub use primes::{is_prime, prime_count, primes_up_to, MAX_SIEVE_BOUND};
pub use squarefree::{is_squarefree, squarefree_part, SquarefreeTable, MAX_TABLE_BOUND};

/// Möbius function of a positive integer.
pub fn moebius(n: u64) -> crate::Result<i8> {
    let f = factorize(n as i64)?;
    Ok(if !f.is_squarefree() {
        0
    } else if f.omega() % 2 == 0 {
        1
    } else {
        -1
    })
}

/// Squarefree divisors of the positive integer whose distinct primes are `primes`.
pub fn squarefree_divisors(primes: &[u64]) -> Vec<u64> {
    let mut divisors = vec![1u64];
    for &p in primes {
        let extended: Vec<u64> = divisors.iter().map(|d| d * p).collect();
        divisors.extend(extended);
    }
    divisors.sort_unstable();
    divisors
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn moebius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1];
        for (i, &m) in expected.iter().enumerate() {
            assert_eq!(moebius(i as u64 + 1).unwrap(), m);
        }
    }

    #[test]
    fn divisors_of_thirty() {
        assert_eq!(
            squarefree_divisors(&[2, 3, 5]),
            vec![1, 2, 3, 5, 6, 10, 15, 30]
        );
    }

    proptest! {
        #[test]
        fn squarefree_part_reconstructs(n in any::<i32>().prop_filter("nonzero", |n| *n != 0)) {
            let n = n as i64;
            let d = squarefree_part(n).unwrap();
            prop_assert!(is_squarefree(d));
            prop_assert_eq!(d.signum(), n.signum());
            let q = n / d;
            prop_assert_eq!(q * d, n);
            let r = q.isqrt();
            prop_assert_eq!(r * r, q);
        }

        #[test]
        fn squarefree_iff_kernel_is_self(n in any::<i32>().prop_filter("nonzero", |n| *n != 0)) {
            let n = n as i64;
            prop_assert_eq!(is_squarefree(n), squarefree_part(n).unwrap() == n);
        }
    }
}
