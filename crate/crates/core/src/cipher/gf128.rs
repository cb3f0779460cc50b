use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use crate::error::{Error, Result};

/// Reduction polynomial `y^7 + y^3 + y^2 + y + 1`.
pub const MODULUS: u16 = 0b1000_1111;

/// Element of GF(2^7) in the polynomial basis `{1, w, ..., w^6}`; bit `j`
/// holds the coefficient of `w^j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Gf128(u8);

impl Gf128 {
    pub const ZERO: Gf128 = Gf128(0);
    pub const ONE: Gf128 = Gf128(1);
    /// The root `w` of the reduction polynomial.
    pub const OMEGA: Gf128 = Gf128(2);

    pub fn new(bits: u8) -> Result<Self> {
        if bits >= 0x80 {
            return Err(Error::usage(format!("{bits:#x} is not a 7-bit field element")));
        }
        Ok(Gf128(bits))
    }

    pub(crate) const fn from_low_bits(bits: u8) -> Self {
        Gf128(bits & 0x7f)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn coeff(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn pow(self, mut e: u64) -> Gf128 {
        let mut base = self;
        let mut acc = Gf128::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(self) -> Option<Gf128> {
        (self != Gf128::ZERO).then(|| self.pow(126))
    }

    /// All 128 field elements in bit order.
    pub fn all() -> impl Iterator<Item = Gf128> {
        (0u8..128).map(Gf128)
    }
}

impl Add for Gf128 {
    type Output = Gf128;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf128) -> Gf128 {
        Gf128(self.0 ^ rhs.0)
    }
}

impl AddAssign for Gf128 {
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Gf128) {
        self.0 ^= rhs.0;
    }
}

impl Mul for Gf128 {
    type Output = Gf128;
    fn mul(self, rhs: Gf128) -> Gf128 {
        let mut acc: u16 = 0;
        for j in 0..7 {
            if rhs.0 >> j & 1 == 1 {
                acc ^= (self.0 as u16) << j;
            }
        }
        for k in (7..13).rev() {
            if acc >> k & 1 == 1 {
                acc ^= MODULUS << (k - 7);
            }
        }
        Gf128(acc as u8)
    }
}

impl fmt::Debug for Gf128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf128({:#04x})", self.0)
    }
}

impl fmt::Display for Gf128 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02x}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_examples() {
        let x = Gf128::new(0x5a).unwrap();
        assert_eq!(x * Gf128::ONE, x);
        assert_eq!(Gf128::OMEGA.pow(7), Gf128::new(0b1111).unwrap());
        assert!(Gf128::new(0x80).is_err());
    }

    #[test]
    fn omega_is_primitive() {
        assert_eq!(Gf128::OMEGA.pow(127), Gf128::ONE);
        // 127 is prime, so only w^1 needs excluding; check every power anyway
        for k in 1..127 {
            assert_ne!(Gf128::OMEGA.pow(k), Gf128::ONE, "k={k}");
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for a in Gf128::all() {
            if let Some(inv) = a.inverse() {
                assert_eq!(a * inv, Gf128::ONE);
            }
            for b in Gf128::all() {
                assert_eq!(a * b, b * a);
                let c = Gf128::OMEGA;
                assert_eq!(a * (b + c), a * b + a * c);
            }
        }
    }
}
