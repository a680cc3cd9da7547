use std::fmt;

use super::PrimePower;
use crate::error::{Error, Result};
use crate::integers::legendre;

/// Real Dirichlet character evaluated on determinants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetCharacter {
    Trivial,
    /// `D -> (D | p)` for an odd prime `p`.
    Legendre(u64),
    /// Kronecker character of `Q(sqrt(-1))`, conductor 4.
    Minus4,
    /// Kronecker character of `Q(sqrt(2))`, conductor 8.
    Plus8,
    /// Kronecker character of `Q(sqrt(-2))`, conductor 8.
    Minus8,
}

impl DetCharacter {
    pub fn conductor(&self) -> u64 {
        match *self {
            DetCharacter::Trivial => 1,
            DetCharacter::Legendre(p) => p,
            DetCharacter::Minus4 => 4,
            DetCharacter::Plus8 | DetCharacter::Minus8 => 8,
        }
    }

    /// Value at a unit residue `d`.
    #[inline]
    pub fn eval(&self, d: u64) -> i8 {
        match *self {
            DetCharacter::Trivial => 1,
            DetCharacter::Legendre(p) => legendre(d, p),
            DetCharacter::Minus4 => match d % 4 {
                1 => 1,
                3 => -1,
                _ => 0,
            },
            DetCharacter::Plus8 => match d % 8 {
                1 | 7 => 1,
                3 | 5 => -1,
                _ => 0,
            },
            DetCharacter::Minus8 => match d % 8 {
                1 | 3 => 1,
                5 | 7 => -1,
                _ => 0,
            },
        }
    }

    /// Checks that the character is defined modulo the prime power `q`.
    pub fn check_modulus(&self, q: PrimePower) -> Result<()> {
        let ok = match *self {
            DetCharacter::Trivial => true,
            DetCharacter::Legendre(p) => p % 2 == 1 && p == q.p,
            DetCharacter::Minus4 => q.p == 2 && q.e >= 2,
            DetCharacter::Plus8 | DetCharacter::Minus8 => q.p == 2 && q.e >= 3,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidCharacter {
                character: self.to_string(),
                modulus: q.q,
            })
        }
    }
}

impl fmt::Display for DetCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DetCharacter::Trivial => write!(f, "trivial"),
            DetCharacter::Legendre(p) => write!(f, "legendre({p})"),
            DetCharacter::Minus4 => write!(f, "chi(-4)"),
            DetCharacter::Plus8 => write!(f, "chi(8)"),
            DetCharacter::Minus8 => write!(f, "chi(-8)"),
        }
    }
}
