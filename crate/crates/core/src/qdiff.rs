//! q-difference operators `p(x) -> sum_j f_j(x) p(q^j x)` with rational
//! function coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, is_unit_root, parse_rational, pow};
use crate::exact::{Poly, Rational, RationalFn};

/// Terms are keyed by shift exponent. No stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QDiffOperator {
    q: Rational,
    terms: BTreeMap<i64, RationalFn>,
}

impl QDiffOperator {
    pub fn zero(q: Rational) -> Self {
        QDiffOperator {
            q,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(q: Rational) -> Self {
        Self::shift(q, 0, RationalFn::one())
    }

    /// Single term `f(x) p(q^j x)`.
    pub fn shift(q: Rational, j: i64, f: RationalFn) -> Self {
        let mut op = Self::zero(q);
        op.add_term(j, f);
        op
    }

    /// Multiplication by a fixed rational function.
    pub fn multiplication(q: Rational, f: RationalFn) -> Self {
        Self::shift(q, 0, f)
    }

    pub fn from_terms(q: Rational, terms: impl IntoIterator<Item = (i64, RationalFn)>) -> Self {
        let mut op = Self::zero(q);
        for (j, f) in terms {
            op.add_term(j, f);
        }
        op
    }

    fn add_term(&mut self, j: i64, f: RationalFn) {
        if f.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&j) {
            Some(g) => g.add(&f),
            None => f,
        };
        if !merged.is_zero() {
            self.terms.insert(j, merged);
        }
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn terms(&self) -> &BTreeMap<i64, RationalFn> {
        &self.terms
    }

    pub fn coefficient(&self, j: i64) -> Option<&RationalFn> {
        self.terms.get(&j)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest and largest shift, `None` for the zero operator.
    pub fn window(&self) -> Option<(i64, i64)> {
        let lo = *self.terms.keys().next()?;
        let hi = *self.terms.keys().next_back()?;
        Some((lo, hi))
    }

    /// `r - s` for the shift window `[s, r]`; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.window().map(|(lo, hi)| (hi - lo) as usize)
    }

    pub fn apply(&self, p: &Poly) -> RationalFn {
        let mut acc = RationalFn::zero();
        for (&j, f) in &self.terms {
            let shifted = p.substitute_scaled(&pow(&self.q, j));
            acc = acc.add(&f.mul_poly(&shifted));
        }
        acc
    }

    /// Like [`apply`](Self::apply) but insists on a polynomial result.
    pub fn apply_poly(&self, p: &Poly) -> Result<Poly> {
        self.apply(p).into_poly().ok_or(Error::NonPolynomial)
    }

    fn same_base(&self, other: &QDiffOperator) -> Result<()> {
        if self.q == other.q {
            Ok(())
        } else {
            Err(Error::MixedBase)
        }
    }

    pub fn scale(&self, c: &Rational) -> QDiffOperator {
        if c.is_zero() {
            return Self::zero(self.q.clone());
        }
        QDiffOperator {
            q: self.q.clone(),
            terms: self.terms.iter().map(|(&j, f)| (j, f.scale(c))).collect(),
        }
    }

    pub fn add(&self, other: &QDiffOperator) -> Result<QDiffOperator> {
        self.same_base(other)?;
        let mut out = self.clone();
        for (&j, f) in &other.terms {
            out.add_term(j, f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &QDiffOperator) -> Result<QDiffOperator> {
        self.add(&other.scale(&-Rational::one()))
    }

    /// `sum_i c_i D_i`; the empty list is rejected because it carries no base.
    pub fn combine(ops: &[(Rational, &QDiffOperator)]) -> Result<QDiffOperator> {
        let (_, first) = ops
            .first()
            .ok_or_else(|| Error::InvalidProblem("empty operator combination".into()))?;
        let mut out = Self::zero(first.q.clone());
        for (c, op) in ops {
            out = out.add(&op.scale(c))?;
        }
        Ok(out)
    }

    /// `(self ∘ other)(p) = self(other(p))`.
    ///
    /// `(j1, f) ∘ (j2, g)` contributes `f(x) g(q^{j1} x)` at shift `j1 + j2`.
    pub fn compose(&self, other: &QDiffOperator) -> Result<QDiffOperator> {
        self.same_base(other)?;
        let mut out = Self::zero(self.q.clone());
        for (&j1, f) in &self.terms {
            let qj = pow(&self.q, j1);
            for (&j2, g) in &other.terms {
                out.add_term(j1 + j2, f.mul(&g.substitute_scaled(&qj)));
            }
        }
        Ok(out)
    }

    /// Left multiplication by a rational function: `(f · D)(p) = f · D(p)`.
    pub fn premultiply(&self, f: &RationalFn) -> QDiffOperator {
        QDiffOperator {
            q: self.q.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&j, g)| (j, f.mul(g)))
                .filter(|(_, g)| !g.is_zero())
                .collect(),
        }
    }

    /// `P(D) = sum_j a_j D^j` with `D^0` the identity.
    pub fn poly_of_operator(p: &Poly, d: &QDiffOperator) -> QDiffOperator {
        // Horner: (((a_k D + a_{k-1}) D + ...) D + a_0)
        let mut acc = Self::zero(d.q.clone());
        let id = Self::identity(d.q.clone());
        for c in p.coeffs().iter().rev() {
            acc = acc.compose(d).expect("same base");
            acc = acc.add(&id.scale(c)).expect("same base");
        }
        acc
    }

    /// True when every coefficient is a polynomial in `1/x` times a
    /// polynomial, i.e. has a pure power of `x` as denominator.
    pub fn has_monomial_denominators(&self) -> bool {
        self.terms.values().all(|f| f.den().is_monomial())
    }
}

/// `D_q f = (f(qx) - f(x)) / (x (q - 1))`.
pub fn q_derivative(q: &Rational) -> Result<QDiffOperator> {
    if q.is_zero() || is_unit_root(q) {
        return Err(Error::DegenerateBase(format!(
            "q = {} must avoid 0 and ±1",
            format_rational(q)
        )));
    }
    let c = (q - Rational::one()).recip();
    Ok(QDiffOperator::from_terms(
        q.clone(),
        [
            (1, RationalFn::inverse_power(c.clone(), 1)),
            (0, RationalFn::inverse_power(-c, 1)),
        ],
    ))
}

/// `D_{1/q} f = (f(x/q) - f(x)) / (x (1/q - 1))`, expressed over base `q`.
pub fn q_derivative_inverse(q: &Rational) -> Result<QDiffOperator> {
    if q.is_zero() || is_unit_root(q) {
        return Err(Error::DegenerateBase(format!(
            "q = {} must avoid 0 and ±1",
            format_rational(q)
        )));
    }
    let c = (q.recip() - Rational::one()).recip();
    Ok(QDiffOperator::from_terms(
        q.clone(),
        [
            (-1, RationalFn::inverse_power(c.clone(), 1)),
            (0, RationalFn::inverse_power(-c, 1)),
        ],
    ))
}

impl fmt::Display for QDiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(j, c)| format!("[{c}] p(q^{j} x)"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    shift: i64,
    num: Poly,
    den: Poly,
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    q: String,
    terms: Vec<TermRepr>,
}

/// JSON: `{"q": "2/5", "terms": [{"shift": -1, "num": [...], "den": [...]}, ...]}`.
impl Serialize for QDiffOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorRepr {
            q: format_rational(&self.q),
            terms: self
                .terms
                .iter()
                .map(|(&shift, f)| TermRepr {
                    shift,
                    num: f.num().clone(),
                    den: f.den().clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QDiffOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = OperatorRepr::deserialize(d)?;
        let q = parse_rational(&repr.q).map_err(serde::de::Error::custom)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            let f = RationalFn::new(t.num, t.den).map_err(serde::de::Error::custom)?;
            terms.push((t.shift, f));
        }
        Ok(QDiffOperator::from_terms(q, terms))
    }
}
