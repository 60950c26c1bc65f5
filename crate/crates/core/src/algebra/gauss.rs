use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// `re + im·i` over a scalar field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gauss<S> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> Gauss<S> {
    pub fn new(re: S, im: S) -> Self {
        Gauss { re, im }
    }

    pub fn real(re: S) -> Self {
        Gauss { re, im: S::zero() }
    }

    pub fn zero() -> Self {
        Gauss::new(S::zero(), S::zero())
    }

    pub fn one() -> Self {
        Gauss::new(S::one(), S::zero())
    }

    pub fn i() -> Self {
        Gauss::new(S::zero(), S::one())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Gauss::new(S::from_int(re), S::from_int(im))
    }

    pub fn conj(&self) -> Self {
        Gauss::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> S {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, s: &S) -> Self {
        Gauss::new(self.re.clone() * s.clone(), self.im.clone() * s.clone())
    }
}

impl<S: Scalar> Add for Gauss<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Gauss::new(self.re + o.re, self.im + o.im)
    }
}

impl<S: Scalar> Sub for Gauss<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Gauss::new(self.re - o.re, self.im - o.im)
    }
}

impl<S: Scalar> Neg for Gauss<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Gauss::new(-self.re, -self.im)
    }
}

impl<S: Scalar> Mul for Gauss<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Gauss::new(self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(), self.re * o.im + self.im * o.re)
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Gauss<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.re, self.im)
    }
}

impl<S: Scalar + fmt::Display> fmt::Debug for Gauss<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use proptest::prelude::*;

    fn g(a: i64, b: i64, c: i64, d: i64) -> Gauss<Rat> {
        Gauss::new(Rat::from_ratio(a, b.max(1)), Rat::from_ratio(c, d.max(1)))
    }

    proptest! {
        #[test]
        fn conj_is_involution(a in -20i64..20, b in 1i64..7, c in -20i64..20, d in 1i64..7) {
            let z = g(a, b, c, d);
            prop_assert_eq!(z.conj().conj(), z);
        }

        #[test]
        fn commutator_form_is_antisymmetric(
            a in -9i64..9, b in 1i64..5, c in -9i64..9, d in 1i64..5,
            e in -9i64..9, f in 1i64..5, h in -9i64..9, k in 1i64..5,
        ) {
            let z = g(a, b, c, d);
            let w = g(e, f, h, k);
            let lhs = (z.conj() * w.clone()).im;
            let rhs = -(w.conj() * z).im;
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn norm_is_rational_sum_of_squares() {
        let z = g(3, 5, 4, 5);
        assert_eq!(z.norm_sqr(), Rat::from_int(1));
    }
}
