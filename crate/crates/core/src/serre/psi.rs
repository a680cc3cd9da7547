use super::SerreData;
use crate::error::{Error, Result};
use crate::gl2::oracle::Mat2;
use crate::integers::{kronecker, legendre};

/// Sign of the permutation `g mod 2` induces on the nonzero vectors of `F_2^2`.
///
/// `+1` on the identity and the two elements of order 3, `-1` on the three
/// involutions.
pub fn epsilon(g: &Mat2) -> i8 {
    // nonzero vectors (1,0), (0,1), (1,1) indexed 0, 1, 2 by x + 2y - 1
    let index = |x: u64, y: u64| ((x & 1) + 2 * (y & 1) - 1) as usize;
    let image = [
        index(g.a, g.c),
        index(g.b, g.d),
        index(g.a + g.b, g.c + g.d),
    ];
    let inversions = (0..3)
        .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
        .filter(|&(i, j)| image[i] > image[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn unit_det(g: &Mat2, m: u64) -> Result<u64> {
    if !g.is_invertible(m) {
        return Err(Error::NotInvertible(m));
    }
    Ok(g.det(m))
}

/// `psi(g) = eps(g mod 2) * (d_fund | det g)` on `GL2(Z/M_E Z)`.
pub fn psi(g: &Mat2, sd: &SerreData) -> Result<i8> {
    let det = unit_det(g, sd.m_e)?;
    Ok(epsilon(g) * kronecker(sd.d_fund, det as i64))
}

/// The same character assembled prime by prime: `eps` times the 2-adic
/// determinant character times a Legendre symbol at each odd prime of `M_E`.
pub fn psi_factored(g: &Mat2, sd: &SerreData) -> Result<i8> {
    let det = unit_det(g, sd.m_e)?;
    Ok(sd
        .odd_primes
        .iter()
        .map(|&p| legendre(det % p, p))
        .product::<i8>()
        * sd.two_adic.eval(det)
        * epsilon(g))
}

#[cfg(test)]
mod tests {
    use super::super::{serre_data, Curve};
    use super::*;
    use crate::gl2::oracle::for_each_invertible;
    use proptest::prelude::*;

    fn group(m: u64) -> Vec<Mat2> {
        let mut gs = Vec::new();
        for_each_invertible(m, |g| gs.push(*g)).unwrap();
        gs
    }

    #[test]
    fn epsilon_on_gl2_f2() {
        let gs = group(2);
        assert_eq!(gs.len(), 6);
        let odd = gs.iter().filter(|g| epsilon(g) == -1).count();
        assert_eq!(odd, 3);
        for g in &gs {
            let involution = g.mul(g, 2) == Mat2::IDENTITY && *g != Mat2::IDENTITY;
            assert_eq!(epsilon(g) == -1, involution);
        }
    }

    #[test]
    fn examples() {
        let sd = serre_data(&Curve::new(-1, 0).unwrap()).unwrap();
        assert_eq!(psi(&Mat2::IDENTITY, &sd).unwrap(), 1);
        assert_eq!(psi(&Mat2::new(0, 1, 1, 0), &sd).unwrap(), -1);
        let sd6 = serre_data(&Curve::new(0, 1).unwrap()).unwrap();
        assert_eq!(psi(&Mat2::IDENTITY, &sd6).unwrap(), 1);
        assert_eq!(
            psi(&Mat2::new(2, 0, 0, 1), &sd6),
            Err(Error::NotInvertible(6))
        );
    }

    #[test]
    fn homomorphism_mod_two_exhaustive() {
        let sd = serre_data(&Curve::new(-1, 0).unwrap()).unwrap();
        let gs = group(2);
        for g in &gs {
            for h in &gs {
                let gh = psi(&g.mul(h, 2), &sd).unwrap();
                assert_eq!(gh, psi(g, &sd).unwrap() * psi(h, &sd).unwrap());
            }
        }
    }

    #[test]
    fn homomorphism_mod_six() {
        let sd = serre_data(&Curve::new(0, 1).unwrap()).unwrap();
        let gs = group(6);
        assert_eq!(gs.len(), 288);
        let values: Vec<i8> = gs.iter().map(|g| psi(g, &sd).unwrap()).collect();
        // index-2 kernel
        assert_eq!(values.iter().filter(|&&v| v == 1).count(), 144);
        for (g, &pg) in gs.iter().zip(&values) {
            for (h, &ph) in gs.iter().zip(&values).step_by(7) {
                assert_eq!(psi(&g.mul(h, 6), &sd).unwrap(), pg * ph);
            }
        }
    }

    #[test]
    fn factored_form_on_small_levels() {
        // m_e = 4, 6, 8 (d = 8), 8 (d = -8), 12, 2
        for (a, b) in [(1, 0), (0, 1), (-2, 0), (2, 0), (-3, 0), (-1, 0)] {
            let sd = serre_data(&Curve::new(a, b).unwrap()).unwrap();
            if sd.m_e > 24 {
                continue;
            }
            for g in group(sd.m_e) {
                assert_eq!(psi(&g, &sd).unwrap(), psi_factored(&g, &sd).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn factored_form_agrees(a in -40i64..=40, b in -40i64..=40, entries in any::<[u32; 4]>()) {
            prop_assume!(Curve::new(a, b).is_ok());
            let sd = serre_data(&Curve::new(a, b).unwrap()).unwrap();
            let m = sd.m_e;
            let g = Mat2::new(entries[0] as u64 % m, entries[1] as u64 % m,
                              entries[2] as u64 % m, entries[3] as u64 % m);
            prop_assume!(g.is_invertible(m));
            prop_assert_eq!(psi(&g, &sd).unwrap(), psi_factored(&g, &sd).unwrap());
        }
    }
}
