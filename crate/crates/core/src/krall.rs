//! The D-operator construction of q-Krall polynomials.
//!
//! Given a family `(p_n)` with `D^P p_n = θ_n p_n`, a D-operator with
//! sequences `ε_n`, `σ_n`, and a polynomial `P₂`, the polynomials
//! `q_n = p_n + β_n p_{n-1}` are eigenfunctions of
//! `D^Q = ½ P₁(D^P) + 𝒟 P₂(D^P)`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dop::{dop_by_id, DOperatorSpec};
use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, pow, serde_rational_vec};
use crate::exact::{qpochhammer, Poly, Rational};
use crate::families::{
    alsalam_carlitz, check_base, meixner, LaguerreParams, MeixnerParams, PolynomialFamily,
};
use crate::qdiff::QDiffOperator;

/// `P₁(x) = (vqx/u)(P₂(x) - 2 Σ_j w_j x^j/(1-q^{j+1}))` for `P₂ = Σ w_j x^j`.
pub fn build_p1(p2: &Poly, u: &Rational, v: &Rational, q: &Rational) -> Result<Poly> {
    if u.is_zero() {
        return Err(Error::DegenerateBase("u = 0".into()));
    }
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    let mut inner = Vec::with_capacity(p2.coeffs().len());
    for (j, w) in p2.coeffs().iter().enumerate() {
        let d = &one - pow(q, j as i64 + 1);
        if d.is_zero() {
            return Err(Error::DegenerateBase(format!("1 - q^{} = 0", j + 1)));
        }
        inner.push(w - &two * w / d);
    }
    Ok(Poly::from_coeffs(inner).shift_up(1).scale(&(v * q / u)))
}

#[derive(Clone, Debug)]
pub struct KrallConstruction {
    family: PolynomialFamily,
    spec: DOperatorSpec,
    p2: Poly,
    p1: Poly,
    upto: usize,
    /// `γ_n` for `n = 0..=upto+1`; index 0 is unused and stored as zero.
    gamma: Vec<Rational>,
    /// `λ_n` for `n = 0..=upto+1`.
    lambda: Vec<Rational>,
    /// `β_n` for `n = 0..=upto`; index 0 is unused and stored as zero.
    beta: Vec<Rational>,
    qpolys: Vec<Poly>,
    dq: QDiffOperator,
}

/// Runs the construction for indices `n ≤ upto`.
pub fn build(
    family: &PolynomialFamily,
    spec: &DOperatorSpec,
    p2: &Poly,
    upto: usize,
) -> Result<KrallConstruction> {
    let (u, v) = spec
        .geometric()
        .cloned()
        .ok_or_else(|| Error::NoGeometricForm(spec.id().to_string()))?;
    let q = family.q().clone();
    let theta = |n: usize| &u * pow(&q, n as i64);
    let p1 = build_p1(p2, &u, &v, &q)?;

    let mut gamma = vec![Rational::zero()];
    for n in 0..=upto {
        let g = p2.eval(&theta(n));
        if g.is_zero() {
            return Err(Error::GammaVanishes(n));
        }
        gamma.push(g);
    }

    let two = Rational::from_integer(2.into());
    let mut lambda = vec![(p1.eval(&theta(0)) - spec.sigma(1) * p2.eval(&theta(0))) / &two];
    for n in 1..=upto + 1 {
        let next = &lambda[n - 1] + spec.sigma(n) * &gamma[n];
        lambda.push(next);
    }

    let mut beta = vec![Rational::zero()];
    let mut qpolys = vec![Poly::one()];
    for n in 1..=upto {
        let b = spec.eps(n) * &gamma[n + 1] / &gamma[n];
        let qn = &family.poly(n)? + &family.poly(n - 1)?.scale(&b);
        beta.push(b);
        qpolys.push(qn);
    }

    let dp = family.operator()?;
    let half = two.recip();
    let dq = QDiffOperator::poly_of_operator(&p1, &dp)
        .scale(&half)
        .add(&spec.closed_form().compose(&QDiffOperator::poly_of_operator(p2, &dp))?)?;

    Ok(KrallConstruction {
        family: family.clone(),
        spec: spec.clone(),
        p2: p2.clone(),
        p1,
        upto,
        gamma,
        lambda,
        beta,
        qpolys,
        dq,
    })
}

impl KrallConstruction {
    pub fn family(&self) -> &PolynomialFamily {
        &self.family
    }

    pub fn spec(&self) -> &DOperatorSpec {
        &self.spec
    }

    pub fn p1(&self) -> &Poly {
        &self.p1
    }

    pub fn p2(&self) -> &Poly {
        &self.p2
    }

    pub fn upto(&self) -> usize {
        self.upto
    }

    /// `γ_n`, `1 ≤ n ≤ upto + 1`.
    pub fn gamma(&self, n: usize) -> &Rational {
        assert!(n >= 1, "gamma is indexed from 1");
        &self.gamma[n]
    }

    pub fn lambda(&self, n: usize) -> &Rational {
        &self.lambda[n]
    }

    pub fn lambdas(&self) -> &[Rational] {
        &self.lambda[..=self.upto]
    }

    /// `β_n`, `1 ≤ n ≤ upto`.
    pub fn beta(&self, n: usize) -> &Rational {
        assert!(n >= 1, "beta is indexed from 1");
        &self.beta[n]
    }

    pub fn q_poly(&self, n: usize) -> &Poly {
        &self.qpolys[n]
    }

    pub fn q_polys(&self) -> &[Poly] {
        &self.qpolys
    }

    pub fn operator(&self) -> &QDiffOperator {
        &self.dq
    }

    /// `θ_n` of the underlying family.
    pub fn theta(&self, n: usize) -> Rational {
        let (u, _) = self.spec.geometric().expect("checked in build");
        u * pow(self.family.q(), n as i64)
    }

    /// Copy with `β_n` and hence `q_n` replaced, for fault-injection tests.
    pub fn with_beta(&self, n: usize, value: Rational) -> Result<Self> {
        assert!((1..=self.upto).contains(&n));
        let mut k = self.clone();
        k.qpolys[n] = &k.family.poly(n)? + &k.family.poly(n - 1)?.scale(&value);
        k.beta[n] = value;
        Ok(k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenRow {
    pub n: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenReport {
    pub rows: Vec<EigenRow>,
    pub order: Option<usize>,
    pub expected_order: usize,
    pub order_matches: bool,
    /// `D^Q q_n` came out polynomial for every tested `n`.
    pub polynomial_output: bool,
}

impl EigenReport {
    pub fn all_pass(&self) -> bool {
        self.order_matches && self.polynomial_output && self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| !r.pass).map(|r| r.n).collect()
    }
}

/// Checks `D^Q q_n = λ_n q_n` for `n ≤ upto` and the order `2 deg P₂ + 2`.
pub fn verify_eigen(kc: &KrallConstruction, upto: usize) -> EigenReport {
    let upto = upto.min(kc.upto);
    let mut rows = Vec::new();
    let mut polynomial_output = true;
    for n in 0..=upto {
        let qn = &kc.qpolys[n];
        let applied = kc.dq.apply(qn);
        let residual = applied.sub(&qn.scale(&kc.lambda[n]).into());
        let pass = residual.is_zero();
        if applied.as_poly().is_none() {
            polynomial_output = false;
        }
        rows.push(EigenRow {
            n,
            pass,
            residual: (!pass).then(|| residual.num().clone()),
        });
    }
    let expected_order = 2 * kc.p2.degree().unwrap_or(0) + 2;
    let order = kc.dq.order();
    EigenReport {
        rows,
        order,
        expected_order,
        order_matches: order == Some(expected_order),
        polynomial_output,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    /// `γ_{n+1} = P₂(θ_n)`.
    pub gamma: bool,
    /// `λ_n - λ_{n-1} = σ_n γ_n`.
    pub lambda_step: bool,
    /// `λ_{n+1} + λ_n = P₁(θ_n)`.
    pub lambda_sum: bool,
    /// `β_n = ε_n γ_{n+1}/γ_n` and `q_n = p_n + β_n p_{n-1}`.
    pub beta: bool,
    /// `D_q P₁(x) = vq/(u(q-1)) (P₂(x) + q P₂(qx))`.
    pub p1_derivative: bool,
}

impl ConsistencyReport {
    pub fn all_pass(&self) -> bool {
        self.gamma && self.lambda_step && self.lambda_sum && self.beta && self.p1_derivative
    }
}

pub fn check_consistency(kc: &KrallConstruction, upto: usize) -> Result<ConsistencyReport> {
    let upto = upto.min(kc.upto);
    let spec = &kc.spec;
    let mut rep = ConsistencyReport {
        gamma: true,
        lambda_step: true,
        lambda_sum: true,
        beta: true,
        p1_derivative: true,
    };
    for n in 0..=upto {
        let th = kc.theta(n);
        rep.gamma &= kc.gamma[n + 1] == kc.p2.eval(&th);
        rep.lambda_sum &= &kc.lambda[n + 1] + &kc.lambda[n] == kc.p1.eval(&th);
        if n >= 1 {
            rep.lambda_step &= &kc.lambda[n] - &kc.lambda[n - 1] == spec.sigma(n) * &kc.gamma[n];
            rep.beta &= kc.beta[n] == spec.eps(n) * &kc.gamma[n + 1] / &kc.gamma[n];
            let qn = &kc.family.poly(n)? + &kc.family.poly(n - 1)?.scale(&kc.beta[n]);
            rep.beta &= kc.qpolys[n] == qn;
        }
    }
    rep.beta &= kc.qpolys[0] == Poly::one();
    rep.p1_derivative = p1_derivative_holds(&kc.p1, &kc.p2, spec, kc.family.q())?;
    Ok(rep)
}

fn p1_derivative_holds(p1: &Poly, p2: &Poly, spec: &DOperatorSpec, q: &Rational) -> Result<bool> {
    let (u, v) = spec
        .geometric()
        .ok_or_else(|| Error::NoGeometricForm(spec.id().to_string()))?;
    let dq = crate::qdiff::q_derivative(q)?;
    let lhs = dq.apply_poly(p1)?;
    let c = v * q / (u * (q - Rational::one()));
    let rhs = (p2 + &p2.substitute_scaled(q).scale(q)).scale(&c);
    Ok(lhs == rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theorem {
    #[serde(rename = "meixner-i")]
    MeixnerI,
    #[serde(rename = "meixner-ii")]
    MeixnerII,
    #[serde(rename = "meixner-iii")]
    MeixnerIII,
    #[serde(rename = "laguerre-i")]
    LaguerreI,
    #[serde(rename = "laguerre-ii")]
    LaguerreII,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [
        Theorem::MeixnerI,
        Theorem::MeixnerII,
        Theorem::MeixnerIII,
        Theorem::LaguerreI,
        Theorem::LaguerreII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::MeixnerI => "meixner-i",
            Theorem::MeixnerII => "meixner-ii",
            Theorem::MeixnerIII => "meixner-iii",
            Theorem::LaguerreI => "laguerre-i",
            Theorem::LaguerreII => "laguerre-ii",
        }
    }

    pub fn is_meixner(self) -> bool {
        matches!(self, Theorem::MeixnerI | Theorem::MeixnerII | Theorem::MeixnerIII)
    }

    pub fn dop_id(self) -> &'static str {
        match self {
            Theorem::MeixnerI => "meixner-1",
            Theorem::MeixnerII => "meixner-2",
            Theorem::MeixnerIII => "meixner-3",
            Theorem::LaguerreI => "laguerre-1",
            Theorem::LaguerreII => "laguerre-2",
        }
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoremParams {
    Meixner(MeixnerParams),
    Laguerre(LaguerreParams),
}

/// A theorem together with concrete parameters. For `LaguerreII`, `k` is `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremInstance {
    pub theorem: Theorem,
    pub params: TheoremParams,
    pub k: usize,
    pub m: Rational,
}

impl TheoremInstance {
    pub fn meixner(theorem: Theorem, params: MeixnerParams, k: usize) -> Result<Self> {
        if !theorem.is_meixner() {
            return Err(Error::UnknownTheorem(format!("{theorem} is not a q-Meixner theorem")));
        }
        if matches!(theorem, Theorem::MeixnerI | Theorem::MeixnerIII) && params.b.is_zero() {
            return Err(Error::DegenerateParams(format!("{theorem} requires b ≠ 0")));
        }
        if theorem == Theorem::MeixnerII && params.b.is_zero() {
            return Err(Error::DegenerateParams("meixner-ii requires b ≠ 0".into()));
        }
        Ok(TheoremInstance {
            theorem,
            params: TheoremParams::Meixner(params),
            k,
            m: Rational::zero(),
        })
    }

    pub fn laguerre_i(params: LaguerreParams, k: usize) -> Self {
        TheoremInstance {
            theorem: Theorem::LaguerreI,
            params: TheoremParams::Laguerre(params),
            k,
            m: Rational::zero(),
        }
    }

    pub fn laguerre_ii(q: Rational, alpha: usize, m: Rational) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::DegenerateParams("laguerre-ii requires a positive integer alpha".into()));
        }
        Ok(TheoremInstance {
            theorem: Theorem::LaguerreII,
            params: TheoremParams::Laguerre(LaguerreParams::with_alpha(q, alpha as i64)?),
            k: alpha,
            m,
        })
    }

    pub fn q(&self) -> &Rational {
        match &self.params {
            TheoremParams::Meixner(p) => &p.q,
            TheoremParams::Laguerre(p) => &p.q,
        }
    }

    pub fn meixner_params(&self) -> Option<&MeixnerParams> {
        match &self.params {
            TheoremParams::Meixner(p) => Some(p),
            _ => None,
        }
    }

    pub fn laguerre_params(&self) -> Option<&LaguerreParams> {
        match &self.params {
            TheoremParams::Laguerre(p) => Some(p),
            _ => None,
        }
    }

    pub fn family(&self) -> PolynomialFamily {
        match &self.params {
            TheoremParams::Meixner(p) => PolynomialFamily::meixner(p.clone()),
            TheoremParams::Laguerre(p) => PolynomialFamily::laguerre(p.clone()),
        }
    }
}

/// `P₂` built from a theorem, plus what goes with it.
#[derive(Clone, Debug)]
pub struct TheoremSetup {
    pub instance: TheoremInstance,
    pub family: PolynomialFamily,
    pub spec: DOperatorSpec,
    pub p2: Poly,
    /// Human-readable recipe of the orthogonalizing functional.
    pub measure_recipe: &'static str,
}

impl TheoremSetup {
    pub fn build(&self, upto: usize) -> Result<KrallConstruction> {
        build(&self.family, &self.spec, &self.p2, upto)
    }
}

/// `m_k^{-c,1/(bc);q}`.
pub(crate) fn meixner_i_aux(p: &MeixnerParams) -> MeixnerParams {
    MeixnerParams {
        q: p.q.clone(),
        b: -p.c.clone(),
        c: (&p.b * &p.c).recip(),
    }
}

/// `m_k^{b,c;1/q}`.
pub(crate) fn meixner_ii_aux(p: &MeixnerParams) -> MeixnerParams {
    MeixnerParams {
        q: p.q.recip(),
        b: p.b.clone(),
        c: p.c.clone(),
    }
}

/// `m_k^{1/b,bc;q}`.
pub(crate) fn meixner_iii_aux(p: &MeixnerParams) -> MeixnerParams {
    MeixnerParams {
        q: p.q.clone(),
        b: p.b.recip(),
        c: &p.b * &p.c,
    }
}

/// `G_n = 1 + M (tq;q)_n/(q;q)_n`.
pub fn laguerre_ii_weight(q: &Rational, t: &Rational, m: &Rational, n: usize) -> Rational {
    Rational::one() + m * qpochhammer(&(t * q), q, n) / qpochhammer(q, q, n)
}

/// `1 + M (x/q^{α-1};q)_α/(q;q)_α`. Its `γ`-ratios reproduce the
/// orthogonal sequence of the mass perturbation `ρ_{α-1} + Mδ₀`.
pub fn laguerre_ii_p2(q: &Rational, alpha: usize, m: &Rational) -> Poly {
    let a = alpha as i64;
    let poch = Poly::pochhammer_in_x(&pow(q, 1 - a), q, alpha);
    &Poly::one() + &poch.scale(&(m / qpochhammer(q, q, alpha)))
}

/// The variant `1 + M (x/q^{α-2};q)_α/(q;q)_α`. Its `q_n` are eigenfunctions
/// of the constructed operator but are not orthogonal for `ρ_{α-1} + Mδ₀`.
pub fn laguerre_ii_p2_unshifted(q: &Rational, alpha: usize, m: &Rational) -> Poly {
    let a = alpha as i64;
    let poch = Poly::pochhammer_in_x(&pow(q, 2 - a), q, alpha);
    &Poly::one() + &poch.scale(&(m / qpochhammer(q, q, alpha)))
}

pub fn theorem_catalog(inst: &TheoremInstance) -> Result<TheoremSetup> {
    let family = inst.family();
    let spec = dop_by_id(&family, inst.theorem.dop_id())?;
    let k = inst.k;
    let (p2, measure_recipe) = match (&inst.theorem, &inst.params) {
        (Theorem::MeixnerI, TheoremParams::Meixner(p)) => (
            meixner(&meixner_i_aux(p), k)?.substitute_scaled(&p.q),
            "christoffel(rho_{b,q^{k+1}c}, prod_{i=1..k}(x+bcq^i))",
        ),
        (Theorem::MeixnerII, TheoremParams::Meixner(p)) => {
            check_base(&p.q.recip())?;
            (
                meixner(&meixner_ii_aux(p), k)?.substitute_scaled(&p.b),
                "christoffel(rho_{b/q^{k+1},q^{k+1}c}, prod_{i=0..k-1}(x-b/q^i))",
            )
        }
        (Theorem::MeixnerIII, TheoremParams::Meixner(p)) => (
            meixner(&meixner_iii_aux(p), k)?.substitute_scaled(&p.q),
            "geronimus(rho_{b,c}, q^{k+1}, c^{k+1}q^{C(k+1,2)}(b/q^k;q)_{k+1})",
        ),
        (Theorem::LaguerreI, TheoremParams::Laguerre(p)) => (
            alsalam_carlitz(&p.t.recip(), &p.q, k)?.substitute_scaled(&(&p.q / &p.t)),
            "christoffel(q^{k+1} rho_alpha(x/q^{k+1}), prod_{i=1..k}(1+x/q^i))",
        ),
        (Theorem::LaguerreII, TheoremParams::Laguerre(p)) => {
            let alpha = p
                .alpha
                .ok_or_else(|| Error::DegenerateParams("laguerre-ii needs integer alpha".into()))?;
            if alpha as usize != k || alpha < 1 {
                return Err(Error::DegenerateParams(format!(
                    "laguerre-ii needs alpha = k ≥ 1, got alpha = {alpha}, k = {k}"
                )));
            }
            (laguerre_ii_p2(&p.q, k, &inst.m), "rho_{alpha-1} + M delta_0")
        }
        (t, _) => return Err(Error::UnknownTheorem(format!("{t} with mismatched parameters"))),
    };
    Ok(TheoremSetup {
        instance: inst.clone(),
        family,
        spec,
        p2,
        measure_recipe,
    })
}

/// Closed form of `β_n` for each theorem, written out independently of
/// the generic construction.
pub fn theorem_beta(inst: &TheoremInstance, n: usize) -> Result<Rational> {
    assert!(n >= 1);
    let k = inst.k;
    let one = Rational::one();
    let ni = n as i64;
    match &inst.params {
        TheoremParams::Meixner(p) => {
            let q = &p.q;
            match inst.theorem {
                Theorem::MeixnerI => {
                    let m = meixner(&meixner_i_aux(p), k)?;
                    Ok(m.eval(&pow(q, ni + 1)) / m.eval(&pow(q, ni)))
                }
                Theorem::MeixnerII => {
                    let m = meixner(&meixner_ii_aux(p), k)?;
                    let g = |j: i64| m.eval(&(&p.b * pow(q, j - 1)));
                    Ok(g(ni + 1) / ((&one - &p.b * pow(q, ni)) * g(ni)))
                }
                Theorem::MeixnerIII => {
                    let m = meixner(&meixner_iii_aux(p), k)?;
                    let qn = pow(q, ni);
                    let f = (&p.c + &qn) / (&p.c * (&one - &p.b * &qn));
                    Ok(f * m.eval(&pow(q, ni + 1)) / m.eval(&qn))
                }
                _ => unreachable!(),
            }
        }
        TheoremParams::Laguerre(p) => {
            let q = &p.q;
            match inst.theorem {
                Theorem::LaguerreI => {
                    let v = alsalam_carlitz(&p.t.recip(), q, k)?;
                    Ok(v.eval(&pow(q, ni + 1)) / v.eval(&pow(q, ni)))
                }
                Theorem::LaguerreII => {
                    let g = |j: usize| laguerre_ii_weight(q, &p.t, &inst.m, j);
                    Ok(g(n) / ((&one - &p.t * pow(q, ni)) * g(n - 1)))
                }
                _ => unreachable!(),
            }
        }
    }
}

/// Plain-data view of a construction for reports.
#[derive(Clone, Debug, Serialize)]
pub struct KrallSummary {
    pub dop: String,
    pub p2: Poly,
    pub p1: Poly,
    #[serde(with = "serde_rational_vec")]
    pub gamma: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub lambda: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub beta: Vec<Rational>,
    pub q_polys: Vec<Poly>,
    pub order: Option<usize>,
    pub operator: QDiffOperator,
}

impl KrallConstruction {
    /// `gamma` and `beta` start at index 1.
    pub fn summary(&self) -> KrallSummary {
        KrallSummary {
            dop: self.spec.id().to_string(),
            p2: self.p2.clone(),
            p1: self.p1.clone(),
            gamma: self.gamma[1..].to_vec(),
            lambda: self.lambdas().to_vec(),
            beta: self.beta[1..].to_vec(),
            q_polys: self.qpolys.clone(),
            order: self.dq.order(),
            operator: self.dq.clone(),
        }
    }
}

impl fmt::Display for TheoremInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.params {
            TheoremParams::Meixner(p) => write!(
                f,
                "{} k={} q={} b={} c={}",
                self.theorem,
                self.k,
                format_rational(&p.q),
                format_rational(&p.b),
                format_rational(&p.c)
            ),
            TheoremParams::Laguerre(p) if self.theorem == Theorem::LaguerreII => write!(
                f,
                "{} alpha={} q={} M={}",
                self.theorem,
                self.k,
                format_rational(&p.q),
                format_rational(&self.m)
            ),
            TheoremParams::Laguerre(p) => write!(
                f,
                "{} k={} q={} t={}",
                self.theorem,
                self.k,
                format_rational(&p.q),
                format_rational(&p.t)
            ),
        }
    }
}
