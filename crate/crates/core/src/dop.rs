//! D-operators: operators defined on a polynomial family through two
//! sequences `ε_n`, `σ_n`, together with the closed forms that realize them
//! inside the algebra of q-difference operators.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::rational::pow;
use crate::exact::{Poly, Rational, RationalFn};
use crate::families::{FamilyParams, PolynomialFamily, N_MAX};
use crate::qdiff::{q_derivative, q_derivative_inverse, QDiffOperator};

pub type Sequence = Arc<dyn Fn(usize) -> Rational + Send + Sync>;

#[derive(Clone)]
pub struct DOperatorSpec {
    id: String,
    eps: Sequence,
    sigma: Sequence,
    sigma_overrides: BTreeMap<usize, Rational>,
    geometric: Option<(Rational, Rational)>,
    closed_form: QDiffOperator,
}

impl fmt::Debug for DOperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DOperatorSpec")
            .field("id", &self.id)
            .field("geometric", &self.geometric)
            .field("closed_form", &self.closed_form)
            .finish()
    }
}

impl DOperatorSpec {
    pub fn new(
        id: impl Into<String>,
        eps: Sequence,
        sigma: Sequence,
        geometric: Option<(Rational, Rational)>,
        closed_form: QDiffOperator,
    ) -> Self {
        DOperatorSpec {
            id: id.into(),
            eps,
            sigma,
            sigma_overrides: BTreeMap::new(),
            geometric,
            closed_form,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn eps(&self, n: usize) -> Rational {
        (self.eps)(n)
    }

    pub fn sigma(&self, n: usize) -> Rational {
        match self.sigma_overrides.get(&n) {
            Some(v) => v.clone(),
            None => (self.sigma)(n),
        }
    }

    /// `(u, v)` with `θ_n = u q^n` and `σ_n = v q^n`.
    pub fn geometric(&self) -> Option<&(Rational, Rational)> {
        self.geometric.as_ref()
    }

    pub fn closed_form(&self) -> &QDiffOperator {
        &self.closed_form
    }

    /// Copy with `σ_n` replaced by `value`, for fault-injection tests.
    pub fn with_sigma(&self, n: usize, value: Rational) -> Self {
        let mut s = self.clone();
        s.sigma_overrides.insert(n, value);
        s.id = format!("{}[sigma_{n} perturbed]", self.id);
        s
    }

    /// Finitely many shifts with rational function coefficients.
    pub fn in_algebra(&self) -> bool {
        self.closed_form.order().is_some()
            && self
                .closed_form
                .terms()
                .values()
                .all(|f| !f.den().is_zero())
    }

    /// `σ_n = v q^n` and `θ_n = u q^n` for `n ≤ upto`.
    pub fn geometric_consistent(&self, family: &PolynomialFamily, upto: usize) -> Result<bool> {
        let Some((u, v)) = &self.geometric else {
            return Err(Error::NoGeometricForm(self.id.clone()));
        };
        let q = family.q();
        for n in 0..=upto {
            let qn = pow(q, n as i64);
            if self.sigma(n) != v * &qn || family.eigenvalue(n)? != u * &qn {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `-½σ_{n+1} p_n + Σ_{j=1}^n (-1)^{j+1} σ_{n+1-j} (Π_{i=1}^j ε_{n-i+1}) p_{n-j}`.
pub fn dop_action(spec: &DOperatorSpec, family: &PolynomialFamily, n: usize) -> Result<Poly> {
    let coeffs = dop_action_coeffs(spec, n);
    let mut out = Poly::zero();
    for (m, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            out = &out + &family.poly(m)?.scale(c);
        }
    }
    Ok(out)
}

/// Coefficients of the action in the family basis, indexed by degree.
pub fn dop_action_coeffs(spec: &DOperatorSpec, n: usize) -> Vec<Rational> {
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = -spec.sigma(n + 1) / Rational::from_integer(2.into());
    let mut prod = Rational::one();
    for j in 1..=n {
        prod *= spec.eps(n - j + 1);
        let sign = if j % 2 == 1 { Rational::one() } else { -Rational::one() };
        coeffs[n - j] = sign * spec.sigma(n + 1 - j) * &prod;
    }
    coeffs
}

fn seq(f: impl Fn(usize) -> Rational + Send + Sync + 'static) -> Sequence {
    Arc::new(f)
}

fn mul_op(q: &Rational, p: Poly) -> QDiffOperator {
    QDiffOperator::multiplication(q.clone(), RationalFn::from_poly(p))
}

/// The shipped D-operators of a family: three for q-Meixner, two for q-Laguerre.
pub fn dop_catalog(family: &PolynomialFamily) -> Result<Vec<DOperatorSpec>> {
    let q = family.q().clone();
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    let dq = q_derivative(&q)?;
    let dqi = q_derivative_inverse(&q)?;
    let id = QDiffOperator::identity(q.clone());
    let dp = family.operator()?;
    match family.params() {
        FamilyParams::Meixner(p) => {
            let (b, c) = (p.b.clone(), p.c.clone());
            let qm1 = &q - &one;
            // (D_{b,c} - 2I) / (2(q-1))
            let tail = dp.sub(&id.scale(&two))?.scale(&(&two * &qm1).recip());

            let d1 = mul_op(&q, Poly::from_coeffs(vec![one.clone(), -one.clone()]))
                .compose(&dq)?
                .add(&tail)?;
            let d2 = dqi.add(&dp.scale(&(&q / (&two * &c * &qm1))))?;
            let d3 = mul_op(&q, Poly::from_coeffs(vec![-(&b * &c), -one.clone()]))
                .compose(&dq)?
                .add(&tail)?;

            let v13 = (&q * &qm1).recip();
            let v2 = (&c * (&one - &q)).recip();
            let (q1, q2, q3) = (q.clone(), q.clone(), q.clone());
            let (b2, b3, c2, c3) = (b.clone(), b.clone(), c.clone(), c.clone());
            let qm1_1 = qm1.clone();
            let qm1_3 = qm1.clone();
            Ok(vec![
                DOperatorSpec::new(
                    "meixner-1",
                    seq(|_| Rational::one()),
                    seq(move |n| pow(&q1, n as i64 - 1) / &qm1_1),
                    Some((one.clone(), v13.clone())),
                    d1,
                ),
                DOperatorSpec::new(
                    "meixner-2",
                    seq(move |n| (Rational::one() - &b2 * pow(&q2, n as i64)).recip()),
                    seq({
                        let q = q.clone();
                        move |n| pow(&q, n as i64) / (&c2 * (Rational::one() - &q))
                    }),
                    Some((one.clone(), v2)),
                    d2,
                ),
                DOperatorSpec::new(
                    "meixner-3",
                    seq({
                        let q = q3.clone();
                        move |n| {
                            let qn = pow(&q, n as i64);
                            (&c3 + &qn) / (&c3 * (Rational::one() - &b3 * &qn))
                        }
                    }),
                    seq(move |n| pow(&q3, n as i64 - 1) / &qm1_3),
                    Some((one.clone(), v13)),
                    d3,
                ),
            ])
        }
        FamilyParams::Laguerre(p) => {
            let t = p.t.clone();
            let half = two.recip();
            let qm1 = &q - &one;
            let inv_part = dqi.scale(&((&one - &q) / (&t * &q)));
            let l1 = mul_op(&q, Poly::from_coeffs(vec![qm1.clone(), -qm1.clone()]))
                .compose(&dq)?
                .add(&inv_part)?
                .sub(&id)?
                .scale(&half);
            let l2 = mul_op(&q, Poly::from_coeffs(vec![-qm1.clone(), -qm1.clone()]))
                .compose(&dq)?
                .add(&inv_part)?
                .sub(&id)?
                .scale(&half);
            let (q1, q2) = (q.clone(), q.clone());
            let q3 = q.clone();
            let t2 = t.clone();
            Ok(vec![
                DOperatorSpec::new(
                    "laguerre-1",
                    seq(|_| Rational::one()),
                    seq(move |n| pow(&q1, n as i64 - 1)),
                    Some((t.clone(), q.recip())),
                    l1,
                ),
                DOperatorSpec::new(
                    "laguerre-2",
                    seq(move |n| (Rational::one() - &t2 * pow(&q3, n as i64)).recip()),
                    seq(move |n| pow(&q2, n as i64 - 1)),
                    Some((t.clone(), q.recip())),
                    l2,
                ),
            ])
        }
        FamilyParams::AlSalamCarlitz { .. } => Err(Error::UnsupportedFamily(
            "no D-operators for al-salam-carlitz".into(),
        )),
    }
}

pub fn dop_by_id(family: &PolynomialFamily, id: &str) -> Result<DOperatorSpec> {
    dop_catalog(family)?
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnsupportedFamily(format!("no D-operator {id:?} for {}", family.kind())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DopRow {
    pub spec_id: String,
    pub n: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DopReport {
    pub spec_id: String,
    pub in_algebra: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometric_consistent: Option<bool>,
    pub rows: Vec<DopRow>,
}

impl DopReport {
    pub fn all_pass(&self) -> bool {
        self.in_algebra && self.geometric_consistent != Some(false) && self.rows.iter().all(|r| r.pass)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.rows.iter().find(|r| !r.pass).map(|r| r.n)
    }
}

/// Compares the closed form against the defining action for `n ≤ upto`.
pub fn verify_dop(spec: &DOperatorSpec, family: &PolynomialFamily, upto: usize) -> Result<DopReport> {
    let mut rows = Vec::with_capacity(upto + 1);
    for n in 0..=upto {
        let p = family.poly(n)?;
        let applied = spec.closed_form.apply(&p);
        let expected = RationalFn::from_poly(dop_action(spec, family, n)?);
        let diff = applied.sub(&expected);
        let pass = diff.is_zero();
        let residual = if pass {
            None
        } else {
            Some(diff.into_poly().unwrap_or_else(Poly::zero))
        };
        rows.push(DopRow {
            spec_id: spec.id.clone(),
            n,
            pass,
            residual,
        });
    }
    let geometric_consistent = match spec.geometric {
        Some(_) => Some(spec.geometric_consistent(family, upto.max(N_MAX))?),
        None => None,
    };
    Ok(DopReport {
        spec_id: spec.id.clone(),
        in_algebra: spec.in_algebra(),
        geometric_consistent,
        rows,
    })
}
