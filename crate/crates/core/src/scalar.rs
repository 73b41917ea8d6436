//! Exact coefficient fields.
//!
//! Everything in the workbench is generic over [`Field`]. Two families of
//! implementations are provided: the prime fields [`Fp`] (modulus fixed at
//! compile time, `p < 2^31`) and the rationals, backed by
//! [`num_rational::BigRational`].

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact field usable as polynomial coefficients.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// 0 for the rationals, `p` for `F_p`.
    fn characteristic() -> u64;

    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    /// `num / den`; `None` if `den` vanishes in the field.
    fn from_fraction(num: &BigInt, den: &BigInt) -> Option<Self> {
        Self::from_bigint(den)
            .inv()
            .map(|d| Self::from_bigint(num) * d)
    }

    /// True when the canonical representative is "negative" and should be
    /// printed with a leading minus sign. Prime-field residues never are.
    fn is_negative_repr(&self) -> bool {
        false
    }

    fn from_u64(v: u64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }

    fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

/// Residue class modulo the prime `P`. Values are kept canonical in `[0, P)`.
///
/// `P` must be prime; this is checked by [`Fp::new`] only in debug builds,
/// the aliases exported at the crate root are all prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub fn new(v: u64) -> Self {
        debug_assert!(is_prime(P as u64), "modulus {P} is not prime");
        Fp((v % P as u64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl<const P: u32> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 as u64 + rhs.0 as u64;
        Fp((s % P as u64) as u32)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let s = self.0 as u64 + P as u64 - rhs.0 as u64;
        Fp((s % P as u64) as u32)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl<const P: u32> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u32> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u32> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u32> Field for Fp<P> {
    fn characteristic() -> u64 {
        P as u64
    }

    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        Some(self.pow_u64(P as u64 - 2))
    }

    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u32)
    }

    fn from_bigint(v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(P));
        Fp(r.to_u32().expect("residue fits in u32"))
    }

    fn from_u64(v: u64) -> Self {
        Fp::new(v)
    }
}

impl Field for BigRational {
    fn characteristic() -> u64 {
        0
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_fraction(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }

    fn is_negative_repr(&self) -> bool {
        self.is_negative()
    }
}

/// Trial-division primality, enough for moduli below `2^31`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    type F7 = Fp<7>;

    #[test]
    fn residues_are_canonical() {
        assert_eq!(F7::from_i64(-1).value(), 6);
        assert_eq!(F7::from_i64(15).value(), 1);
        assert_eq!((F7::from_i64(3) - F7::from_i64(5)).value(), 5);
        assert_eq!((-F7::from_i64(0)).value(), 0);
    }

    #[test]
    fn inverses_in_prime_field() {
        for a in 1..7 {
            let x = F7::from_i64(a);
            assert_eq!(x * x.inv().unwrap(), F7::one());
        }
        assert!(F7::zero().inv().is_none());
    }

    #[test]
    fn rationals_stay_reduced() {
        let q = BigRational::from_fraction(&BigInt::from(4), &BigInt::from(-6)).unwrap();
        assert_eq!(q.numer(), &BigInt::from(-2));
        assert_eq!(q.denom(), &BigInt::from(3));
        assert!(q.is_negative_repr());
    }

    #[test]
    fn fraction_with_vanishing_denominator() {
        assert!(F7::from_fraction(&BigInt::from(1), &BigInt::from(14)).is_none());
        assert_eq!(
            F7::from_fraction(&BigInt::from(1), &BigInt::from(2)).unwrap(),
            F7::from_i64(4)
        );
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(31) && is_prime(2147483647));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(0));
    }
}
