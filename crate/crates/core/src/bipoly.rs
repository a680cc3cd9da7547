//! Integer bivariate polynomials `f(x, y)`; `x` stands for the trace of
//! Frobenius and `y` for the prime (or, in GL2 counting, trace and determinant).

use std::fmt;

use crate::error::{Error, Result};
use crate::integers::modular::reduce_signed;

/// Per-variable degree cap. With coefficients in `i128` and moduli below
/// `2^32` every modular evaluation stays in `u128` range.
pub const MAX_DEGREE: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub deg_x: u32,
    pub deg_y: u32,
    pub coeff: i128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Sparse polynomial in canonical form: terms sorted by `(deg_x, deg_y)`,
/// no repeated monomials, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: Vec<Term>,
}

impl BiPoly {
    pub fn from_terms(raw: impl IntoIterator<Item = (u32, u32, i128)>) -> Result<Self> {
        let mut terms: Vec<Term> = Vec::new();
        let mut raw: Vec<(u32, u32, i128)> = raw.into_iter().collect();
        raw.sort_by_key(|&(i, j, _)| (i, j));
        for (deg_x, deg_y, coeff) in raw {
            if deg_x > MAX_DEGREE || deg_y > MAX_DEGREE {
                return Err(Error::InvalidArgument(format!(
                    "monomial x^{deg_x}*y^{deg_y} exceeds the degree cap {MAX_DEGREE}"
                )));
            }
            match terms.last_mut() {
                Some(t) if (t.deg_x, t.deg_y) == (deg_x, deg_y) => {
                    t.coeff = t
                        .coeff
                        .checked_add(coeff)
                        .ok_or_else(|| Error::InvalidArgument("coefficient overflow".into()))?
                }
                _ => terms.push(Term {
                    deg_x,
                    deg_y,
                    coeff,
                }),
            }
        }
        terms.retain(|t| t.coeff != 0);
        Ok(Self { terms })
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// `y + 1 - x`, whose sequence is `#E(F_p) = p + 1 - a_p`.
    pub fn koblitz() -> Self {
        Self::from_terms([(0, 1, 1), (0, 0, 1), (1, 0, -1)]).expect("static polynomial")
    }

    /// `x^2 - 4y`, whose sequence is the Frobenius discriminant `a_p^2 - 4p`.
    pub fn frobdisc() -> Self {
        Self::from_terms([(2, 0, 1), (0, 1, -4)]).expect("static polynomial")
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "koblitz" => Ok(Self::koblitz()),
            "frobdisc" => Ok(Self::frobdisc()),
            other => Err(Error::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.deg_x == 0 && t.deg_y == 0)
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.iter().map(|t| t.deg_x).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.iter().map(|t| t.deg_y).max().unwrap_or(0)
    }

    /// Formal partial derivative.
    pub fn partial(&self, var: Var) -> Self {
        let terms = self.terms.iter().filter_map(|t| match var {
            Var::X if t.deg_x > 0 => Some((t.deg_x - 1, t.deg_y, t.coeff * t.deg_x as i128)),
            Var::Y if t.deg_y > 0 => Some((t.deg_x, t.deg_y - 1, t.coeff * t.deg_y as i128)),
            _ => None,
        });
        Self::from_terms(terms).expect("derivative keeps degrees within the cap")
    }

    /// `f(x, y) mod m` in `[0, m)`.
    pub fn eval_mod(&self, x: u64, y: u64, m: u64) -> u64 {
        assert!(m >= 1, "modulus must be positive");
        let m128 = m as u128;
        let (x, y) = (x as u128 % m128, y as u128 % m128);
        let mut acc = 0u128;
        for t in &self.terms {
            let mut v = reduce_signed(t.coeff, m) as u128;
            for _ in 0..t.deg_x {
                v = v * x % m128;
            }
            for _ in 0..t.deg_y {
                v = v * y % m128;
            }
            acc = (acc + v) % m128;
        }
        acc as u64
    }

    /// Exact integer evaluation; `None` on `i128` overflow.
    pub fn eval_int(&self, x: i128, y: i128) -> Option<i128> {
        self.terms.iter().try_fold(0i128, |acc, t| {
            let xp = x.checked_pow(t.deg_x)?;
            let yp = y.checked_pow(t.deg_y)?;
            acc.checked_add(t.coeff.checked_mul(xp)?.checked_mul(yp)?)
        })
    }

    /// Coefficients of `x^0, x^1, ..., x^deg_x` in `f(x, y)` reduced mod `m`,
    /// for Horner evaluation over many `x` at a fixed `y`.
    pub fn specialize_y(&self, y: u64, m: u64) -> Vec<u64> {
        let mut coeffs = vec![0u64; self.deg_x() as usize + 1];
        let y = y % m;
        for t in &self.terms {
            let mut v = reduce_signed(t.coeff, m) as u128;
            for _ in 0..t.deg_y {
                v = v * y as u128 % m as u128;
            }
            let slot = &mut coeffs[t.deg_x as usize];
            *slot = ((*slot as u128 + v) % m as u128) as u64;
        }
        coeffs
    }

    /// Coefficients of `y^0, ..., y^deg_y` in `f(x, y)` reduced mod `m`.
    pub fn specialize_x(&self, x: u64, m: u64) -> Vec<u64> {
        let mut coeffs = vec![0u64; self.deg_y() as usize + 1];
        let x = x % m;
        for t in &self.terms {
            let mut v = reduce_signed(t.coeff, m) as u128;
            for _ in 0..t.deg_x {
                v = v * x as u128 % m as u128;
            }
            let slot = &mut coeffs[t.deg_y as usize];
            *slot = ((*slot as u128 + v) % m as u128) as u64;
        }
        coeffs
    }

    /// Number of `(T, D)` with `D` a unit mod the odd prime `p` where `f`
    /// and both partial derivatives vanish.
    pub fn count_singular_pairs(&self, p: u64) -> Result<u64> {
        const ENUMERATION_LIMIT: u64 = 200;
        if p > ENUMERATION_LIMIT {
            return Err(crate::error::capacity(
                "singular-pair prime",
                p,
                ENUMERATION_LIMIT,
            ));
        }
        let fx = self.partial(Var::X);
        let fy = self.partial(Var::Y);
        let mut count = 0;
        for d in 1..p {
            for t in 0..p {
                if self.eval_mod(t, d, p) == 0
                    && fx.eval_mod(t, d, p) == 0
                    && fy.eval_mod(t, d, p) == 0
                {
                    count += 1;
                }
            }
        }
        Ok(count)
    }
}

/// Horner evaluation of a dense coefficient vector (constant term first) mod `m`.
#[inline]
pub fn horner_mod(coeffs: &[u64], x: u64, m: u64) -> u64 {
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = ((acc as u128 * x as u128 + c as u128) % m as u128) as u64;
    }
    acc
}

/// [`horner_mod`] for moduli below `2^32`, where products fit in `u64`.
#[inline]
pub fn horner_mod_small(coeffs: &[u64], x: u64, m: u64) -> u64 {
    debug_assert!(m <= u32::MAX as u64 + 1);
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = (acc * x + c) % m;
    }
    acc
}

impl fmt::Display for BiPoly {
    /// Renders in the CLI grammar, e.g. `x^2-4*y`, highest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered = self.terms.clone();
        ordered.sort_by_key(|t| std::cmp::Reverse((t.deg_x + t.deg_y, t.deg_x)));
        for (i, t) in ordered.iter().enumerate() {
            let magnitude = t.coeff.unsigned_abs();
            if t.coeff < 0 {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            let mut factors = Vec::new();
            if magnitude != 1 || (t.deg_x == 0 && t.deg_y == 0) {
                factors.push(magnitude.to_string());
            }
            for (name, deg) in [("x", t.deg_x), ("y", t.deg_y)] {
                match deg {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    d => factors.push(format!("{name}^{d}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn builtins() {
        assert_eq!(
            BiPoly::koblitz().terms(),
            &[
                Term {
                    deg_x: 0,
                    deg_y: 0,
                    coeff: 1
                },
                Term {
                    deg_x: 0,
                    deg_y: 1,
                    coeff: 1
                },
                Term {
                    deg_x: 1,
                    deg_y: 0,
                    coeff: -1
                },
            ]
        );
        assert_eq!(
            BiPoly::frobdisc().terms(),
            &[
                Term {
                    deg_x: 0,
                    deg_y: 1,
                    coeff: -4
                },
                Term {
                    deg_x: 2,
                    deg_y: 0,
                    coeff: 1
                },
            ]
        );
        assert_eq!(BiPoly::builtin("frobdisc").unwrap(), BiPoly::frobdisc());
        assert!(matches!(
            BiPoly::builtin("lang-trotter"),
            Err(Error::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(BiPoly::koblitz().eval_mod(3, 7, 5), 0);
        assert_eq!(BiPoly::frobdisc().eval_mod(2, 1, 12), 0);
        assert_eq!(BiPoly::frobdisc().eval_mod(1, 3, 9), 7);
        assert_eq!(BiPoly::frobdisc().eval_mod(5, 5, 1), 0);
    }

    #[test]
    fn partials() {
        let f = BiPoly::frobdisc();
        assert_eq!(f.partial(Var::X), BiPoly::from_terms([(1, 0, 2)]).unwrap());
        assert_eq!(f.partial(Var::Y), BiPoly::from_terms([(0, 0, -4)]).unwrap());
        assert_eq!(
            BiPoly::koblitz().partial(Var::X),
            BiPoly::from_terms([(0, 0, -1)]).unwrap()
        );
    }

    #[test]
    fn canonical_form_merges_and_drops() {
        let f = BiPoly::from_terms([(1, 0, 2), (0, 1, 3), (1, 0, -2)]).unwrap();
        assert_eq!(f, BiPoly::from_terms([(0, 1, 3)]).unwrap());
        assert!(BiPoly::from_terms([(9, 0, 1)]).is_err());
        assert!(BiPoly::from_terms([(0, 0, 5)]).unwrap().is_constant());
    }

    #[test]
    fn display() {
        assert_eq!(BiPoly::frobdisc().to_string(), "x^2-4*y");
        assert_eq!(BiPoly::koblitz().to_string(), "-x+y+1");
        assert_eq!(
            BiPoly::from_terms([(2, 1, 1), (1, 0, 1)])
                .unwrap()
                .to_string(),
            "x^2*y+x"
        );
        assert_eq!(BiPoly::zero().to_string(), "0");
    }

    #[test]
    fn singular_pairs() {
        for p in [3u64, 5, 7, 11, 13, 101, 199] {
            assert_eq!(BiPoly::koblitz().count_singular_pairs(p).unwrap(), 0);
            assert_eq!(BiPoly::frobdisc().count_singular_pairs(p).unwrap(), 0);
        }
        // f = x^2*y + x: f_x = 2xy + 1, f_y = x^2; brute force over F_3 x F_3^*
        let f = BiPoly::from_terms([(2, 1, 1), (1, 0, 1)]).unwrap();
        let mut oracle = 0;
        for d in 1..3i128 {
            for t in 0..3i128 {
                let vals = [t * t * d + t, 2 * t * d + 1, t * t];
                if vals.iter().all(|v| v.rem_euclid(3) == 0) {
                    oracle += 1;
                }
            }
        }
        assert_eq!(f.count_singular_pairs(3).unwrap(), oracle);
        assert!(f.count_singular_pairs(211).is_err());
    }

    #[test]
    fn finite_differences_match_partials() {
        // both builtins have total degree <= 2, so
        // f(x+1,y) - f(x,y) = f_x(x,y) + (1/2) f_xx and f(x,y+1) - f(x,y) = f_y(x,y)
        for f in [BiPoly::koblitz(), BiPoly::frobdisc()] {
            let fx = f.partial(Var::X);
            let fy = f.partial(Var::Y);
            let fxx = fx.partial(Var::X);
            for x in -5i128..5 {
                for y in -5i128..5 {
                    let dx = f.eval_int(x + 1, y).unwrap() - f.eval_int(x, y).unwrap();
                    let second = fxx.eval_int(x, y).unwrap();
                    assert_eq!(2 * dx, 2 * fx.eval_int(x, y).unwrap() + second);
                    let dy = f.eval_int(x, y + 1).unwrap() - f.eval_int(x, y).unwrap();
                    assert_eq!(dy, fy.eval_int(x, y).unwrap());
                }
            }
        }
    }

    fn small_poly() -> impl Strategy<Value = BiPoly> {
        prop::collection::vec((0u32..4, 0u32..4, -20i128..20), 1..6)
            .prop_map(|t| BiPoly::from_terms(t).unwrap())
    }

    proptest! {
        #[test]
        fn eval_mod_respects_crt(f in small_poly(), x in 0u64..10_000, y in 0u64..10_000,
                                 (m1, m2) in prop::sample::select(vec![(4u64, 9u64), (7, 25), (8, 27), (11, 13)])) {
            let whole = f.eval_mod(x, y, m1 * m2);
            prop_assert_eq!(whole % m1, f.eval_mod(x, y, m1));
            prop_assert_eq!(whole % m2, f.eval_mod(x, y, m2));
        }

        #[test]
        fn eval_mod_matches_integer_eval(f in small_poly(), x in -50i128..50, y in -50i128..50, m in 1u64..500) {
            let exact = f.eval_int(x, y).unwrap();
            prop_assert_eq!(
                f.eval_mod(reduce_signed(x, m), reduce_signed(y, m), m),
                reduce_signed(exact, m)
            );
        }

        #[test]
        fn horner_matches_eval(f in small_poly(), x in 0u64..1000, y in 0u64..1000, m in 1u64..5000) {
            prop_assert_eq!(horner_mod(&f.specialize_y(y, m), x % m, m), f.eval_mod(x, y, m));
            prop_assert_eq!(horner_mod_small(&f.specialize_y(y, m), x % m, m), f.eval_mod(x, y, m));
            prop_assert_eq!(horner_mod_small(&f.specialize_x(x, m), y % m, m), f.eval_mod(x, y, m));
        }
    }
}
