//! q-Meixner, q-Laguerre and Al-Salam–Carlitz polynomials, their second
//! order q-difference operators and three-term recurrences.

use std::fmt;
use std::sync::RwLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, is_unit_root, pow, serde_rational};
use crate::exact::{qpochhammer, Poly, Rational, RationalFn};
use crate::qdiff::{q_derivative_inverse, QDiffOperator};

/// Parameter degeneracy conditions are scanned for `n` up to this bound.
pub const N_MAX: usize = 32;

pub(crate) fn check_base(q: &Rational) -> Result<()> {
    if q.is_zero() || is_unit_root(q) {
        return Err(Error::DegenerateParams(format!(
            "q = {} violates q ∉ {{0, 1, -1}}",
            format_rational(q)
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeixnerParams {
    #[serde(with = "serde_rational")]
    pub q: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
    #[serde(with = "serde_rational")]
    pub c: Rational,
}

impl MeixnerParams {
    /// Checks `q ∉ {0, ±1}`, `b ≠ q^{-n}` and `c ∉ {0, -q^n}` for `n ≤ N_MAX`.
    pub fn new(q: Rational, b: Rational, c: Rational) -> Result<Self> {
        check_base(&q)?;
        if c.is_zero() {
            return Err(Error::DegenerateParams("c = 0".into()));
        }
        for n in 0..=N_MAX as i64 {
            let qn = pow(&q, n);
            if n >= 1 && (&b * &qn).is_one() {
                return Err(Error::DegenerateParams(format!("b = q^-{n}")));
            }
            if c == -qn {
                return Err(Error::DegenerateParams(format!("c = -q^{n}")));
            }
        }
        Ok(MeixnerParams { q, b, c })
    }

    /// Re-runs the construction checks, for values that came in through serde.
    pub fn validated(self) -> Result<Self> {
        Self::new(self.q, self.b, self.c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaguerreParams {
    #[serde(with = "serde_rational")]
    pub q: Rational,
    /// Stands for `q^α`.
    #[serde(with = "serde_rational")]
    pub t: Rational,
    /// Integer `α` when a construction needs it; must satisfy `t = q^α`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<i64>,
}

impl LaguerreParams {
    pub fn new(q: Rational, t: Rational) -> Result<Self> {
        check_base(&q)?;
        if t.is_zero() {
            return Err(Error::DegenerateParams("t = q^alpha = 0".into()));
        }
        for m in 1..=N_MAX as i64 {
            if (&t * pow(&q, m)).is_one() {
                return Err(Error::DegenerateParams(format!("t = q^-{m} (alpha = -{m})")));
            }
        }
        Ok(LaguerreParams { q, t, alpha: None })
    }

    /// Integer `α` with `t = q^α` computed from it.
    pub fn with_alpha(q: Rational, alpha: i64) -> Result<Self> {
        check_base(&q)?;
        let t = pow(&q, alpha);
        let mut p = Self::new(q, t)?;
        p.alpha = Some(alpha);
        Ok(p)
    }

    pub fn validated(self) -> Result<Self> {
        let alpha = self.alpha;
        let mut p = Self::new(self.q, self.t)?;
        if let Some(a) = alpha {
            if pow(&p.q, a) != p.t {
                return Err(Error::DegenerateParams(format!(
                    "t = {} is not q^{a}",
                    format_rational(&p.t)
                )));
            }
            p.alpha = Some(a);
        }
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyKind {
    #[serde(rename = "q-meixner")]
    QMeixner,
    #[serde(rename = "q-laguerre")]
    QLaguerre,
    #[serde(rename = "al-salam-carlitz")]
    AlSalamCarlitz,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::QMeixner => "q-meixner",
            FamilyKind::QLaguerre => "q-laguerre",
            FamilyKind::AlSalamCarlitz => "al-salam-carlitz",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "q-meixner" => Ok(FamilyKind::QMeixner),
            "q-laguerre" => Ok(FamilyKind::QLaguerre),
            "al-salam-carlitz" => Ok(FamilyKind::AlSalamCarlitz),
            other => Err(Error::UnsupportedFamily(other.into())),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyParams {
    Meixner(MeixnerParams),
    Laguerre(LaguerreParams),
    AlSalamCarlitz { a: Rational, q: Rational },
}

/// `m_n^{b,c;q}`: `(-1)^n/(q;q)_n Σ_j (q^-n;q)_j/((bq;q)_j (q;q)_j) (-q^{n+1}/c)^j (x;q)_j`.
pub fn meixner(p: &MeixnerParams, n: usize) -> Result<Poly> {
    let MeixnerParams { q, b, c } = p;
    let one = Rational::one();
    let qinv_n = pow(q, -(n as i64));
    let z = -pow(q, n as i64 + 1) / c;
    let mut sum = Poly::zero();
    for j in 0..=n {
        let den = qpochhammer(&(b * q), q, j) * qpochhammer(q, q, j);
        if den.is_zero() {
            return Err(Error::ParamDegeneracy(format!("(bq;q)_{j} vanishes")));
        }
        let coef = qpochhammer(&qinv_n, q, j) / den * pow(&z, j as i64);
        sum = &sum + &Poly::pochhammer_in_x(&one, q, j).scale(&coef);
    }
    let qq = qpochhammer(q, q, n);
    let sign = if n.is_multiple_of(2) { one } else { -one };
    Ok(sum.scale(&(sign / qq)))
}

/// `L_n^{α;q}` with `q^α = t`:
/// `(-1)^n/((tq;q)_n (q;q)_n) Σ_j (q^-n;q)_j/(q;q)_j q^{j(n+1)} t^j (-x;q)_j`.
pub fn laguerre(p: &LaguerreParams, n: usize) -> Result<Poly> {
    let LaguerreParams { q, t, .. } = p;
    let one = Rational::one();
    let qinv_n = pow(q, -(n as i64));
    let z = pow(q, n as i64 + 1) * t;
    let mut sum = Poly::zero();
    for j in 0..=n {
        let coef = qpochhammer(&qinv_n, q, j) / qpochhammer(q, q, j) * pow(&z, j as i64);
        sum = &sum + &Poly::pochhammer_in_x(&-one.clone(), q, j).scale(&coef);
    }
    let den = qpochhammer(&(t * q), q, n) * qpochhammer(q, q, n);
    if den.is_zero() {
        return Err(Error::ParamDegeneracy("(tq;q)_n vanishes".into()));
    }
    let sign = if n.is_multiple_of(2) { one } else { -one };
    Ok(sum.scale(&(sign / den)))
}

/// `v_n^{a;q} = Σ_j (-1)^j (q^-n;q)_j q^{-C(j,2)+jn} / (a^j (q;q)_j) (x;q)_j`.
pub fn alsalam_carlitz(a: &Rational, q: &Rational, n: usize) -> Result<Poly> {
    if a.is_zero() {
        return Err(Error::ParamDegeneracy("a = 0".into()));
    }
    let one = Rational::one();
    let qinv_n = pow(q, -(n as i64));
    let mut sum = Poly::zero();
    for j in 0..=n {
        let ji = j as i64;
        let sign = if j % 2 == 0 { one.clone() } else { -one.clone() };
        let coef = sign * qpochhammer(&qinv_n, q, j) * pow(q, -(ji * (ji - 1) / 2) + ji * n as i64)
            / (pow(a, ji) * qpochhammer(q, q, j));
        sum = &sum + &Poly::pochhammer_in_x(&one, q, j).scale(&coef);
    }
    Ok(sum)
}

/// `D_{b,c}`: shifts -1, 0, 1 with coefficients
/// `c(x-bq)/x^2`, `-(c(x-bq) + (x-1)(x+bc))/x^2 + 1`, `(x-1)(x+bc)/x^2`.
pub fn meixner_operator(p: &MeixnerParams) -> QDiffOperator {
    let MeixnerParams { q, b, c } = p;
    let x2 = Poly::monomial(Rational::one(), 2);
    let down = Poly::linear_root(&(b * q)).scale(c);
    let up = &Poly::linear_root(&Rational::one()) * &Poly::linear_root(&-(b * c));
    let mid = &(&x2 - &down) - &up;
    let f = |num: Poly| RationalFn::new(num, x2.clone()).expect("x^2 is nonzero");
    QDiffOperator::from_terms(q.clone(), [(-1, f(down.clone())), (0, f(mid)), (1, f(up))])
}

/// `D_α`: `p(x/q)/x - (1+t) p(x)/x + t(1+x) p(qx)/x`.
pub fn laguerre_operator(p: &LaguerreParams) -> QDiffOperator {
    let LaguerreParams { q, t, .. } = p;
    let one = Rational::one();
    let x = Poly::x();
    let f = |num: Poly| RationalFn::new(num, x.clone()).expect("x is nonzero");
    QDiffOperator::from_terms(
        q.clone(),
        [
            (-1, f(Poly::one())),
            (0, f(Poly::constant(-(&one + t)))),
            (1, f(Poly::from_coeffs(vec![t.clone(), t.clone()]))),
        ],
    )
}

/// A polynomial family with memoized members.
pub struct PolynomialFamily {
    params: FamilyParams,
    cache: RwLock<Vec<Poly>>,
}

impl Clone for PolynomialFamily {
    fn clone(&self) -> Self {
        PolynomialFamily {
            params: self.params.clone(),
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

impl fmt::Debug for PolynomialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolynomialFamily").field("params", &self.params).finish()
    }
}

impl PolynomialFamily {
    pub fn meixner(p: MeixnerParams) -> Self {
        Self::from_params(FamilyParams::Meixner(p))
    }

    pub fn laguerre(p: LaguerreParams) -> Self {
        Self::from_params(FamilyParams::Laguerre(p))
    }

    pub fn alsalam_carlitz(a: Rational, q: Rational) -> Result<Self> {
        check_base(&q)?;
        if a.is_zero() {
            return Err(Error::DegenerateParams("a = 0".into()));
        }
        Ok(Self::from_params(FamilyParams::AlSalamCarlitz { a, q }))
    }

    fn from_params(params: FamilyParams) -> Self {
        PolynomialFamily {
            params,
            cache: RwLock::new(Vec::new()),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        match self.params {
            FamilyParams::Meixner(_) => FamilyKind::QMeixner,
            FamilyParams::Laguerre(_) => FamilyKind::QLaguerre,
            FamilyParams::AlSalamCarlitz { .. } => FamilyKind::AlSalamCarlitz,
        }
    }

    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    pub fn q(&self) -> &Rational {
        match &self.params {
            FamilyParams::Meixner(p) => &p.q,
            FamilyParams::Laguerre(p) => &p.q,
            FamilyParams::AlSalamCarlitz { q, .. } => q,
        }
    }

    fn generate(&self, n: usize) -> Result<Poly> {
        match &self.params {
            FamilyParams::Meixner(p) => meixner(p, n),
            FamilyParams::Laguerre(p) => laguerre(p, n),
            FamilyParams::AlSalamCarlitz { a, q } => alsalam_carlitz(a, q, n),
        }
    }

    /// `p_n`, computed from the defining sum and cached.
    pub fn poly(&self, n: usize) -> Result<Poly> {
        if let Some(p) = self.cache.read().expect("cache lock").get(n) {
            return Ok(p.clone());
        }
        let mut cache = self.cache.write().expect("cache lock");
        while cache.len() <= n {
            let next = self.generate(cache.len())?;
            cache.push(next);
        }
        Ok(cache[n].clone())
    }

    pub fn polys(&self, upto: usize) -> Result<Vec<Poly>> {
        (0..=upto).map(|n| self.poly(n)).collect()
    }

    /// `θ_n`; Al-Salam–Carlitz carries no operator here.
    pub fn eigenvalue(&self, n: usize) -> Result<Rational> {
        let qn = pow(self.q(), n as i64);
        match &self.params {
            FamilyParams::Meixner(_) => Ok(qn),
            FamilyParams::Laguerre(p) => Ok(&p.t * qn),
            FamilyParams::AlSalamCarlitz { .. } => {
                Err(Error::UnsupportedFamily("al-salam-carlitz has no shipped operator".into()))
            }
        }
    }

    /// `θ_n = u q^n`; returns `u`.
    pub fn eigenvalue_base(&self) -> Result<Rational> {
        self.eigenvalue(0)
    }

    /// `D^P`, the second order operator with `D^P p_n = θ_n p_n`.
    pub fn operator(&self) -> Result<QDiffOperator> {
        family_operator(self)
    }
}

pub fn family_operator(family: &PolynomialFamily) -> Result<QDiffOperator> {
    match &family.params {
        FamilyParams::Meixner(p) => Ok(meixner_operator(p)),
        FamilyParams::Laguerre(p) => Ok(laguerre_operator(p)),
        FamilyParams::AlSalamCarlitz { .. } => {
            Err(Error::UnsupportedFamily("al-salam-carlitz has no shipped operator".into()))
        }
    }
}

/// `x p_n = a_n p_{n+1} + b_n p_n + c_n p_{n-1}`, tabulated for `n = 0..=N`.
/// `c_0` is stored as zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeTermRecurrence {
    #[serde(with = "crate::exact::rational::serde_rational_vec")]
    pub a: Vec<Rational>,
    #[serde(with = "crate::exact::rational::serde_rational_vec")]
    pub b: Vec<Rational>,
    #[serde(with = "crate::exact::rational::serde_rational_vec")]
    pub c: Vec<Rational>,
}

impl ThreeTermRecurrence {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Closed forms for q-Meixner:
    /// `a_n = c(1-q^{n+1})(1-bq^{n+1})/q^{2n+1}`, `c_n = (c+q^n)/q^{2n}`,
    /// `b_n = 1 + c(1-bq^{n+1})/q^{2n+1} + (1-q^n)(c+q^n)/q^{2n}`.
    pub fn meixner(p: &MeixnerParams, upto: usize) -> Self {
        let MeixnerParams { q, b, c } = p;
        let one = Rational::one();
        let mut rec = ThreeTermRecurrence {
            a: Vec::new(),
            b: Vec::new(),
            c: Vec::new(),
        };
        for n in 0..=upto as i64 {
            let qn = pow(q, n);
            let qn1 = &qn * q;
            let q2n = pow(q, 2 * n);
            let q2n1 = &q2n * q;
            let cn = (c + &qn) / &q2n;
            rec.a
                .push(c * (&one - &qn1) * (&one - b * &qn1) / &q2n1);
            rec.b.push(
                &one + c * (&one - b * &qn1) / &q2n1 + (&one - &qn) * (c + &qn) / &q2n,
            );
            rec.c.push(if n == 0 { Rational::zero() } else { cn });
        }
        rec
    }

    /// Regenerates `p_0 = 1, ..., p_upto` by running the recurrence forward.
    pub fn regenerate(&self, upto: usize) -> Result<Vec<Poly>> {
        let mut out = vec![Poly::one()];
        for n in 0..upto {
            if self.a[n].is_zero() {
                return Err(Error::SingularSystem {
                    n,
                    reason: "a_n = 0".into(),
                });
            }
            let mut next = &out[n].shift_up(1) - &out[n].scale(&self.b[n]);
            if n > 0 {
                next = &next - &out[n - 1].scale(&self.c[n]);
            }
            out.push(next.scale(&self.a[n].recip()));
        }
        Ok(out)
    }

    /// `a_{n-1} c_n` for `n = 1..len`.
    pub fn favard_products(&self) -> Vec<Rational> {
        (1..self.len()).map(|n| &self.a[n - 1] * &self.c[n]).collect()
    }
}

/// Solves `x p_n = a_n p_{n+1} + b_n p_n + c_n p_{n-1}` coefficientwise for `n ≤ N`.
///
/// The system is triangular in the monomial basis: the top coefficient fixes
/// `a_n`, the next `b_n`, the next `c_n`, and the remainder must vanish.
pub fn derive_recurrence(family: &PolynomialFamily, upto: usize) -> Result<ThreeTermRecurrence> {
    let ps = family.polys(upto + 1)?;
    derive_recurrence_from(&ps, upto)
}

pub fn derive_recurrence_from(ps: &[Poly], upto: usize) -> Result<ThreeTermRecurrence> {
    let mut rec = ThreeTermRecurrence {
        a: Vec::new(),
        b: Vec::new(),
        c: Vec::new(),
    };
    for n in 0..=upto {
        let singular = |reason: &str| Error::SingularSystem {
            n,
            reason: reason.into(),
        };
        for (i, p) in ps.iter().enumerate().take(n + 2) {
            if p.degree() != Some(i) {
                return Err(singular("p_n does not have degree n"));
            }
        }
        let xp = ps[n].shift_up(1);
        let an = xp.coeff(n + 1) / ps[n + 1].coeff(n + 1);
        let r = &xp - &ps[n + 1].scale(&an);
        let bn = r.coeff(n) / ps[n].coeff(n);
        let mut r = &r - &ps[n].scale(&bn);
        let cn = if n == 0 {
            Rational::zero()
        } else {
            let cn = r.coeff(n - 1) / ps[n - 1].coeff(n - 1);
            r = &r - &ps[n - 1].scale(&cn);
            cn
        };
        if !r.is_zero() {
            return Err(singular("x p_n is not in span(p_{n+1}, p_n, p_{n-1})"));
        }
        rec.a.push(an);
        rec.b.push(bn);
        rec.c.push(cn);
    }
    Ok(rec)
}

/// `(-1)^n (tq;q)_n L_n^{t} = Σ_j (-q)^{n-j} (t;q)_{n-j} L_{n-j}^{t/q}`; returns the residual.
pub fn laguerre_lowering_residual(q: &Rational, t: &Rational, n: usize) -> Result<Poly> {
    let p = LaguerreParams::new(q.clone(), t.clone())?;
    let lower = LaguerreParams::new(q.clone(), t / q)?;
    let sign = if n.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let lhs = laguerre(&p, n)?.scale(&(sign * qpochhammer(&(t * q), q, n)));
    let mut rhs = Poly::zero();
    for j in 0..=n {
        let m = n - j;
        let c = pow(&-q.clone(), m as i64) * qpochhammer(t, q, m);
        rhs = &rhs + &laguerre(&lower, m)?.scale(&c);
    }
    Ok(&lhs - &rhs)
}

/// `D_{1/q} L_n^{t} - tq/((1-q)(1-tq)) L_{n-1}^{tq}`, for `n ≥ 1`.
pub fn laguerre_inverse_derivative_residual(q: &Rational, t: &Rational, n: usize) -> Result<Poly> {
    let p = LaguerreParams::new(q.clone(), t.clone())?;
    let upper = LaguerreParams::new(q.clone(), t * q)?;
    let one = Rational::one();
    let lhs = q_derivative_inverse(q)?.apply_poly(&laguerre(&p, n)?)?;
    let rhs = if n == 0 {
        Poly::zero()
    } else {
        laguerre(&upper, n - 1)?.scale(&(t * q / ((&one - q) * (&one - t * q))))
    };
    Ok(&lhs - &rhs)
}

/// `q/(1-bq) m_{n-1}^{bq,c/q} - Σ_{j=1}^n (-1)^{j+1} q^{n+1-j}/(bq^{n-j+1};q)_j m_{n-j}^{b,c}`, `n ≥ 1`.
pub fn meixner_expansion_residual(p: &MeixnerParams, n: usize) -> Result<Poly> {
    assert!(n >= 1);
    let MeixnerParams { q, b, c } = p;
    let one = Rational::one();
    let shifted = MeixnerParams {
        q: q.clone(),
        b: b * q,
        c: c / q,
    };
    let lhs = meixner(&shifted, n - 1)?.scale(&(q / (&one - b * q)));
    let mut rhs = Poly::zero();
    for j in 1..=n {
        let m = n - j;
        let sign = if j % 2 == 1 { one.clone() } else { -one.clone() };
        let den = qpochhammer(&(b * pow(q, m as i64 + 1)), q, j);
        let coef = sign * pow(q, m as i64 + 1) / den;
        rhs = &rhs + &meixner(p, m)?.scale(&coef);
    }
    Ok(&lhs - &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn s0() -> MeixnerParams {
        MeixnerParams::new(rat(2, 5), rat(1, 3), rat(3, 2)).unwrap()
    }

    fn lag() -> LaguerreParams {
        LaguerreParams::new(rat(2, 5), rat(3, 4)).unwrap()
    }

    #[test]
    fn degree_zero_members() {
        assert_eq!(meixner(&s0(), 0).unwrap(), Poly::one());
        assert_eq!(laguerre(&lag(), 0).unwrap(), Poly::one());
        assert_eq!(alsalam_carlitz(&rat(4, 3), &rat(2, 5), 0).unwrap(), Poly::one());
    }

    #[test]
    fn meixner_degree_one_by_hand() {
        // m_1 = -1/(1-q) [1 + (1-1/q)/((1-bq)(1-q)) (-q^2/c) (1-x)]
        let (q, b, c) = (rat(2, 5), rat(1, 3), rat(3, 2));
        let one = int(1);
        let k = (&one - q.recip()) / ((&one - &b * &q) * (&one - &q)) * (-(&q * &q) / &c);
        let pre = -(&one - &q).recip();
        let expect = Poly::from_coeffs(vec![&pre * (&one + &k), -(&pre * &k)]);
        assert_eq!(meixner(&s0(), 1).unwrap(), expect);
    }

    #[test]
    fn laguerre_degree_one_by_hand() {
        // L_1 = -1/((1-tq)(1-q)) [1 + (1-1/q)/(1-q) q^2 t (1+x)]
        let (q, t) = (rat(2, 5), rat(3, 4));
        let one = int(1);
        let k = (&one - q.recip()) / (&one - &q) * &q * &q * &t;
        let pre = -((&one - &t * &q) * (&one - &q)).recip();
        let expect = Poly::from_coeffs(vec![&pre * (&one + &k), &pre * &k]);
        assert_eq!(laguerre(&lag(), 1).unwrap(), expect);
    }

    #[test]
    fn meixner_value_at_one() {
        // m_k^{-c,1/(bc);q}(1) = (-1)^k/(q;q)_k
        let p = s0();
        let aux = MeixnerParams::new(p.q.clone(), -p.c.clone(), (&p.b * &p.c).recip()).unwrap();
        for k in 0..6 {
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(
                meixner(&aux, k).unwrap().eval(&int(1)),
                sign / qpochhammer(&p.q, &p.q, k)
            );
        }
    }

    #[test]
    fn degrees_are_exact() {
        let f = PolynomialFamily::meixner(s0());
        let g = PolynomialFamily::laguerre(lag());
        for n in 0..=10 {
            assert_eq!(f.poly(n).unwrap().degree(), Some(n));
            assert_eq!(g.poly(n).unwrap().degree(), Some(n));
        }
    }

    #[test]
    fn eigen_equations() {
        for fam in [PolynomialFamily::meixner(s0()), PolynomialFamily::laguerre(lag())] {
            let d = fam.operator().unwrap();
            assert_eq!(d.order(), Some(2));
            for n in 0..=10 {
                let p = fam.poly(n).unwrap();
                let lhs = d.apply_poly(&p).unwrap();
                assert_eq!(lhs, p.scale(&fam.eigenvalue(n).unwrap()), "n = {n}");
            }
        }
    }

    #[test]
    fn laguerre_operator_on_constant_is_t() {
        let d = laguerre_operator(&lag());
        assert_eq!(d.apply_poly(&Poly::one()).unwrap(), Poly::constant(rat(3, 4)));
        assert_eq!(meixner_operator(&s0()).apply_poly(&Poly::one()).unwrap(), Poly::one());
    }

    #[test]
    fn closed_recurrence_examples() {
        let p = s0();
        let (q, b, c) = (&p.q, &p.b, &p.c);
        let r = ThreeTermRecurrence::meixner(&p, 10);
        let one = int(1);
        assert_eq!(r.a[0], c * (&one - q) * (&one - b * q) / q);
        assert_eq!(r.c[1], (c + q) / (q * q));
    }

    #[test]
    fn derived_recurrence_matches_closed_form() {
        let p = s0();
        let fam = PolynomialFamily::meixner(p.clone());
        let derived = derive_recurrence(&fam, 10).unwrap();
        assert_eq!(derived, ThreeTermRecurrence::meixner(&p, 10));
        let polys = fam.polys(11).unwrap();
        for n in 0..=10 {
            let lhs = polys[n].shift_up(1);
            let mut rhs = &polys[n + 1].scale(&derived.a[n]) + &polys[n].scale(&derived.b[n]);
            if n > 0 {
                rhs = &rhs + &polys[n - 1].scale(&derived.c[n]);
            }
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn regeneration_reproduces_definitions() {
        for fam in [PolynomialFamily::meixner(s0()), PolynomialFamily::laguerre(lag())] {
            let rec = derive_recurrence(&fam, 10).unwrap();
            assert_eq!(rec.regenerate(10).unwrap()[..], fam.polys(10).unwrap()[..]);
        }
    }

    #[test]
    fn favard_positive_range() {
        let rec = ThreeTermRecurrence::meixner(&s0(), 10);
        assert!(rec.favard_products().iter().all(|v| *v > Rational::zero()));
        let neg = MeixnerParams::new(rat(2, 5), rat(1, 3), rat(-1, 50)).unwrap();
        let rec = ThreeTermRecurrence::meixner(&neg, 10);
        let fl = rec.favard_products();
        assert!(fl.iter().any(|v| *v > Rational::zero()) && fl.iter().any(|v| *v < Rational::zero()));
    }

    #[test]
    fn degenerate_params_rejected() {
        assert!(matches!(
            MeixnerParams::new(int(1), rat(1, 3), rat(3, 2)),
            Err(Error::DegenerateParams(_))
        ));
        let e = MeixnerParams::new(rat(2, 5), rat(5, 2), rat(3, 2)).unwrap_err();
        assert!(e.to_string().contains("b = q^-1"), "{e}");
        assert!(MeixnerParams::new(rat(2, 5), rat(1, 3), -pow(&rat(2, 5), 3)).is_err());
        assert!(MeixnerParams::new(rat(2, 5), rat(1, 3), int(0)).is_err());
        assert!(LaguerreParams::new(rat(2, 5), rat(25, 4)).is_err());
        assert!(LaguerreParams::new(rat(2, 5), int(0)).is_err());
        let bad = LaguerreParams {
            q: rat(2, 5),
            t: rat(3, 4),
            alpha: Some(2),
        };
        assert!(bad.validated().is_err());
        assert!(LaguerreParams::with_alpha(rat(2, 5), 2).unwrap().validated().is_ok());
    }

    #[test]
    fn structural_identities() {
        let (q, t) = (rat(2, 5), rat(3, 4));
        for n in 0..=8 {
            assert!(laguerre_lowering_residual(&q, &t, n).unwrap().is_zero(), "n = {n}");
            assert!(laguerre_inverse_derivative_residual(&q, &t, n).unwrap().is_zero());
            if n >= 1 {
                assert!(meixner_expansion_residual(&s0(), n).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn family_names_round_trip() {
        for k in [FamilyKind::QMeixner, FamilyKind::QLaguerre, FamilyKind::AlSalamCarlitz] {
            assert_eq!(FamilyKind::from_name(k.name()).unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.name()));
        }
        assert!(matches!(FamilyKind::from_name("hermite"), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn cache_is_shared_across_threads() {
        let fam = std::sync::Arc::new(PolynomialFamily::meixner(s0()));
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let f = fam.clone();
                std::thread::spawn(move || f.poly(6 + i).unwrap())
            })
            .collect();
        for (i, h) in handles.into_iter().enumerate() {
            assert_eq!(h.join().unwrap(), meixner(&s0(), 6 + i).unwrap());
        }
    }
}
