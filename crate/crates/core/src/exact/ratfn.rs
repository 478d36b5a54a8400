//! Reduced quotients of polynomials.

use std::fmt;

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and `den` monic. Zero is `0 / 1`.
///
/// Canonical form makes `==` decide equality of rational functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn zero() -> Self {
        RationalFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFn {
            num: p,
            den: Poly::one(),
        }
    }

    /// `c / x^k`.
    pub fn inverse_power(c: Rational, k: usize) -> Self {
        Self::new(Poly::constant(c), Poly::monomial(Rational::one(), k)).expect("nonzero")
    }

    /// Reduces to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        // Fast path: every operator in this crate has pure x-power denominators.
        let (num, den) = if den.is_monomial() {
            let k = den.valuation().unwrap().min(num.valuation().unwrap());
            (num.shift_down(k), den.shift_down(k))
        } else {
            let g = num.gcd(&den);
            if g.degree() == Some(0) {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        let lead = den.leading().unwrap().recip();
        Ok(RationalFn {
            num: num.scale(&lead),
            den: den.scale(&lead),
        })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial itself when the denominator is 1.
    pub fn as_poly(&self) -> Option<&Poly> {
        (self.den.degree() == Some(0)).then_some(&self.num)
    }

    pub fn into_poly(self) -> Option<Poly> {
        (self.den.degree() == Some(0)).then_some(self.num)
    }

    pub fn eval(&self, x0: &Rational) -> Result<Rational> {
        let d = self.den.eval(x0);
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval(x0) / d)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::new(&self.num + &other.num, self.den.clone()).unwrap();
        }
        if self.den.is_monomial() && other.den.is_monomial() {
            let a = self.den.degree().unwrap();
            let b = other.den.degree().unwrap();
            let k = a.max(b);
            let num = &self.num.shift_up(k - a) + &other.num.shift_up(k - b);
            return Self::new(num, Poly::monomial(Rational::one(), k)).unwrap();
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::new(num, &self.den * &other.den).unwrap()
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RationalFn) -> RationalFn {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(&self.num * &other.num, &self.den * &other.den).unwrap()
    }

    pub fn mul_poly(&self, p: &Poly) -> RationalFn {
        Self::new(&self.num * p, self.den.clone()).unwrap()
    }

    /// `f(λx)`; `λ` must be nonzero.
    pub fn substitute_scaled(&self, lambda: &Rational) -> RationalFn {
        assert!(!lambda.is_zero());
        Self::new(self.num.substitute_scaled(lambda), self.den.substitute_scaled(lambda)).unwrap()
    }
}

impl Default for RationalFn {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Poly> for RationalFn {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) && self.den.coeff(0).is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
