//! Q[ℏ]/(ℏ²): first-order expansions in the deformation parameter.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DualNumber {
    pub value: BigRational,
    pub epsilon: BigRational,
}

impl DualNumber {
    pub fn new(value: BigRational, epsilon: BigRational) -> Self {
        DualNumber { value, epsilon }
    }

    pub fn constant(value: BigRational) -> Self {
        DualNumber { value, epsilon: BigRational::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        Self::constant(BigRational::from_integer(v.into()))
    }

    /// ℏ itself.
    pub fn hbar() -> Self {
        DualNumber { value: BigRational::zero(), epsilon: BigRational::one() }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero() && self.epsilon.is_zero()
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        DualNumber { value: &self.value * r, epsilon: &self.epsilon * r }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.value.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let v = self.value.recip();
        let e = -(&self.epsilon * &v * &v);
        Ok(DualNumber { value: v, epsilon: e })
    }
}

impl Add for &DualNumber {
    type Output = DualNumber;
    fn add(self, o: &DualNumber) -> DualNumber {
        DualNumber { value: &self.value + &o.value, epsilon: &self.epsilon + &o.epsilon }
    }
}

impl Sub for &DualNumber {
    type Output = DualNumber;
    fn sub(self, o: &DualNumber) -> DualNumber {
        DualNumber { value: &self.value - &o.value, epsilon: &self.epsilon - &o.epsilon }
    }
}

impl Mul for &DualNumber {
    type Output = DualNumber;
    fn mul(self, o: &DualNumber) -> DualNumber {
        DualNumber {
            value: &self.value * &o.value,
            epsilon: &self.value * &o.epsilon + &self.epsilon * &o.value,
        }
    }
}

impl Neg for &DualNumber {
    type Output = DualNumber;
    fn neg(self) -> DualNumber {
        DualNumber { value: -&self.value, epsilon: -&self.epsilon }
    }
}

impl fmt::Display for DualNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})h", self.value, self.epsilon)
    }
}

impl fmt::Debug for DualNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_plus_hbar_times_one_minus_hbar() {
        let one = DualNumber::one();
        let h = DualNumber::hbar();
        let p = &(&one + &h) * &(&one - &h);
        assert_eq!(p, one);
    }

    #[test]
    fn hbar_squares_to_zero() {
        let h = DualNumber::hbar();
        assert!((&h * &h).is_zero());
        assert!(h.inv().is_err());
    }

    #[test]
    fn inverse() {
        let x = DualNumber::new(BigRational::from_integer(3.into()), BigRational::from_integer(5.into()));
        assert_eq!(&x * &x.inv().unwrap(), DualNumber::one());
    }
}
