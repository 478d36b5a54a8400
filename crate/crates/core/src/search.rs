//! Exact search for q-difference operators with prescribed eigenfunctions,
//! and the conjecture checkers built on it.

use std::time::Instant;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::rational::{int, pow, serde_rational_opt_vec};
use crate::exact::{Poly, Rational, RationalFn};
use crate::families::{check_base, LaguerreParams, MeixnerParams};
use crate::linalg::{modular_nullspace, IntMatrix};
use crate::moments::{hankel_orthogonal, MomentFunctional};
use crate::qdiff::QDiffOperator;

/// Operator ansatz `Σ_{j=-h}^{h} g_j(x)/x^t · p(q^j x)` with `deg g_j ≤ d`.
#[derive(Clone, Debug)]
pub struct SearchProblem {
    eigenpolys: Vec<Poly>,
    h: usize,
    d: usize,
    t: usize,
    q: Rational,
}

impl SearchProblem {
    /// Needs at least `2h + d + 3` eigenpolynomials.
    pub fn new(eigenpolys: Vec<Poly>, h: usize, d: usize, t: usize, q: Rational) -> Result<Self> {
        check_base(&q)?;
        if h == 0 {
            return Err(Error::InvalidProblem("window half-width must be positive".into()));
        }
        if eigenpolys.len() < 2 * h + d + 3 {
            return Err(Error::InvalidProblem(format!(
                "{} eigenpolynomials given, at least {} needed for h = {h}, d = {d}",
                eigenpolys.len(),
                2 * h + d + 3
            )));
        }
        if eigenpolys.iter().any(Poly::is_zero) {
            return Err(Error::InvalidProblem("zero eigenpolynomial".into()));
        }
        Ok(SearchProblem { eigenpolys, h, d, t, q })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn eigenpolys(&self) -> &[Poly] {
        &self.eigenpolys
    }

    fn block(&self) -> usize {
        self.d + 1
    }

    fn unknowns(&self) -> usize {
        (2 * self.h + 1) * self.block() + self.eigenpolys.len()
    }

    fn rows(&self) -> Vec<Vec<Rational>> {
        let h = self.h as i64;
        let width = self.unknowns();
        let lam0 = (2 * self.h + 1) * self.block();
        let mut rows = Vec::new();
        for (n, p) in self.eigenpolys.iter().enumerate() {
            let deg = p.degree().unwrap_or(0);
            let shifted: Vec<Poly> = (-h..=h).map(|j| p.substitute_scaled(&pow(&self.q, j))).collect();
            for m in 0..=deg + self.d.max(self.t) {
                let mut row = vec![Rational::zero(); width];
                for (ji, sp) in shifted.iter().enumerate() {
                    for e in 0..=self.d.min(m) {
                        row[ji * self.block() + e] = sp.coeff(m - e);
                    }
                }
                if m >= self.t {
                    row[lam0 + n] = -p.coeff(m - self.t);
                }
                if row.iter().any(|v| !v.is_zero()) {
                    rows.push(row);
                }
            }
        }
        rows
    }

    /// The operator and eigenvalues encoded by a nullspace vector.
    fn decode(&self, v: &[Rational]) -> (QDiffOperator, Vec<Rational>) {
        let h = self.h as i64;
        let den = RationalFn::inverse_power(Rational::one(), self.t);
        let terms = (-h..=h).enumerate().map(|(ji, j)| {
            let g = Poly::from_coeffs(v[ji * self.block()..(ji + 1) * self.block()].to_vec());
            (j, den.mul_poly(&g))
        });
        let op = QDiffOperator::from_terms(self.q.clone(), terms);
        let lam0 = (2 * self.h + 1) * self.block();
        (op, v[lam0..].to_vec())
    }

    /// `D q_n = ℓ_n q_n` for every supplied `q_n`.
    pub fn is_sound(&self, op: &QDiffOperator, eigenvalues: &[Rational]) -> bool {
        eigenvalues.len() == self.eigenpolys.len()
            && self
                .eigenpolys
                .iter()
                .zip(eigenvalues)
                .all(|(p, l)| matches!(op.apply_poly(p), Ok(r) if r == p.scale(l)))
    }

    /// Whether `op` has the ansatz shape: window inside `[-h, h]` and
    /// `x^t f_j` a polynomial of degree at most `d`.
    pub fn fits_ansatz(&self, op: &QDiffOperator) -> bool {
        let xt = Poly::monomial(Rational::one(), self.t);
        op.terms().iter().all(|(&j, f)| {
            j.unsigned_abs() as usize <= self.h
                && matches!(f.mul_poly(&xt).as_poly(), Some(g) if g.degree().is_none_or(|dg| dg <= self.d))
        })
    }
}

/// Outcome of one search.
#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub found: bool,
    pub operator: Option<QDiffOperator>,
    #[serde(with = "serde_rational_opt_vec")]
    pub eigenvalues: Option<Vec<Rational>>,
    pub nullspace_dim: usize,
    pub rows: usize,
    pub unknowns: usize,
}

fn first_nonzero_coord(basis: &[Vec<Rational>], range: std::ops::Range<usize>) -> Option<usize> {
    range.into_iter().find(|&i| basis.iter().any(|v| !v[i].is_zero()))
}

fn eval_form(basis: &[Vec<Rational>], coord: usize, s: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut pw = Rational::one();
    for v in basis {
        acc += &v[coord] * &pw;
        pw *= s;
    }
    acc
}

/// Looks for an operator of exact order `2h` in the ansatz.
///
/// The nullspace of the joint linear system in `(g_j, ℓ_n)` is computed
/// exactly. A genuine element needs `g_{-h} ≠ 0` and `g_h ≠ 0`; the two
/// failure loci are proper subspaces when each coordinate block is nonzero
/// on some basis vector, so the combination `Σ s^i v_i` avoids both for
/// some `s` among the first `2r - 1` integers.
pub fn find_operator(problem: &SearchProblem) -> Result<SearchResult> {
    let rows = problem.rows();
    let unknowns = problem.unknowns();
    let matrix = IntMatrix::from_rational_rows(&rows, unknowns);
    let basis = modular_nullspace(&matrix)?;
    let mut result = SearchResult {
        found: false,
        operator: None,
        eigenvalues: None,
        nullspace_dim: basis.len(),
        rows: rows.len(),
        unknowns,
    };
    let block = problem.block();
    let lo = first_nonzero_coord(&basis, 0..block);
    let hi = first_nonzero_coord(&basis, 2 * problem.h * block..(2 * problem.h + 1) * block);
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Ok(result);
    };
    let r = basis.len();
    let s = (0..2 * r as i64)
        .map(int)
        .find(|s| !eval_form(&basis, lo, s).is_zero() && !eval_form(&basis, hi, s).is_zero())
        .expect("a nonzero polynomial of degree < r has fewer than r roots");
    let mut v = vec![Rational::zero(); unknowns];
    let mut pw = Rational::one();
    for b in &basis {
        for (x, y) in v.iter_mut().zip(b) {
            *x += y * &pw;
        }
        pw *= &s;
    }
    // normalize: leading coefficient of g_h is 1
    let top = (2 * problem.h + 1) * block;
    let lead = (2 * problem.h * block..top)
        .rev()
        .find(|&i| !v[i].is_zero())
        .map(|i| v[i].clone())
        .expect("g_h is nonzero");
    for x in v.iter_mut() {
        *x /= &lead;
    }
    let (op, eig) = problem.decode(&v);
    debug_assert_eq!(op.order(), Some(2 * problem.h));
    if !problem.is_sound(&op, &eig) {
        return Err(Error::InvalidProblem("nullspace element failed exact verification".into()));
    }
    result.found = true;
    result.operator = Some(op);
    result.eigenvalues = Some(eig);
    Ok(result)
}

/// Search budgets; unset fields take the per-`h` defaults
/// `d = 2h + 2`, `t = 2h`, `N = 2h + d + 6`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SearchBudget {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

impl SearchBudget {
    pub fn d(&self, h: usize) -> usize {
        self.d.unwrap_or(2 * h + 2)
    }

    pub fn t(&self, h: usize) -> usize {
        self.t.unwrap_or(2 * h)
    }

    /// Highest eigenpolynomial index used at half-width `h`.
    pub fn n(&self, h: usize) -> usize {
        self.n.unwrap_or(2 * h + self.d(h) + 6)
    }

    pub fn max_n(&self, h_max: usize) -> usize {
        (1..=h_max).map(|h| self.n(h)).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanStep {
    pub h: usize,
    pub d: usize,
    pub t: usize,
    pub n: usize,
    pub nullspace_dim: usize,
    pub genuine: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalOrder {
    pub h_min: Option<usize>,
    pub steps: Vec<ScanStep>,
    pub result: Option<SearchResult>,
}

impl MinimalOrder {
    pub fn order(&self) -> Option<usize> {
        self.h_min.map(|h| 2 * h)
    }
}

/// Scans `h = 1..=h_max` and stops at the first genuine solution.
pub fn minimal_even_order(
    eigenpolys: &[Poly],
    h_max: usize,
    budget: &SearchBudget,
    q: &Rational,
) -> Result<MinimalOrder> {
    let mut steps = Vec::new();
    for h in 1..=h_max {
        let n = budget.n(h);
        if eigenpolys.len() <= n {
            return Err(Error::InvalidProblem(format!(
                "h = {h} needs q_0..q_{n}, only {} given",
                eigenpolys.len()
            )));
        }
        let problem = SearchProblem::new(eigenpolys[..=n].to_vec(), h, budget.d(h), budget.t(h), q.clone())?;
        let res = find_operator(&problem)?;
        steps.push(ScanStep {
            h,
            d: problem.d,
            t: problem.t,
            n,
            nullspace_dim: res.nullspace_dim,
            genuine: res.found,
        });
        if res.found {
            return Ok(MinimalOrder {
                h_min: Some(h),
                steps,
                result: Some(res),
            });
        }
    }
    Ok(MinimalOrder {
        h_min: None,
        steps,
        result: None,
    })
}

/// `(a, b)` with `reference_n = a·found_n + b` for all `n`, if such a map
/// exists with `a ≠ 0`.
pub fn affine_map(found: &[Rational], reference: &[Rational]) -> Option<(Rational, Rational)> {
    if found.len() != reference.len() || found.is_empty() {
        return None;
    }
    let i = (1..found.len()).find(|&i| found[i] != found[0])?;
    let a = (&reference[i] - &reference[0]) / (&found[i] - &found[0]);
    if a.is_zero() {
        return None;
    }
    let b = &reference[0] - &a * &found[0];
    found
        .iter()
        .zip(reference)
        .all(|(f, r)| &a * f + &b == *r)
        .then_some((a, b))
}

/// `reference = a·found + b·I` as operators, with `(a, b)` from the
/// eigenvalue map.
pub fn matches_up_to_identity(
    found: &QDiffOperator,
    found_eigen: &[Rational],
    reference: &QDiffOperator,
    reference_eigen: &[Rational],
) -> Result<bool> {
    let Some((a, b)) = affine_map(found_eigen, reference_eigen) else {
        return Ok(false);
    };
    let id = QDiffOperator::identity(found.q().clone());
    let combo = QDiffOperator::combine(&[(a, found), (b, &id)])?;
    Ok(combo == *reference)
}

/// `2 Σ_{f∈F} f - n_F(n_F - 1)`.
pub fn set_order_term(f: &[usize]) -> usize {
    let n = f.len();
    2 * f.iter().sum::<usize>() - n * n.saturating_sub(1)
}

pub fn conjecture_a_order(f1: &[usize], f2: &[usize], f3: &[usize]) -> usize {
    set_order_term(f1) + set_order_term(f2) + set_order_term(f3) + 2
}

pub fn conjecture_b1_order(f: &[usize]) -> usize {
    set_order_term(f) + 2
}

/// B2 states no order. With `F = ∅` and `K = 0` the functional is the
/// Laguerre II measure of parameter `α + 1`, of order `2(α + 1) + 2`.
pub fn conjecture_b2_order(f: &[usize], alpha: usize, masses: &[Rational]) -> Option<usize> {
    (f.is_empty() && masses.len() == 1).then_some(2 * (alpha + 1) + 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Found,
    NotFoundWithinAnsatz,
    NotQuasiDefinite,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub conjecture: String,
    pub inputs: serde_json::Value,
    pub quasi_definite: bool,
    pub conjectured_order: Option<usize>,
    pub found_order: Option<usize>,
    pub operator: Option<QDiffOperator>,
    #[serde(with = "serde_rational_opt_vec")]
    pub eigenvalues: Option<Vec<Rational>>,
    pub outcome: Outcome,
    pub h_max: usize,
    pub scan: Vec<ScanStep>,
    /// Wall-clock seconds; not part of the comparable payload.
    pub elapsed: f64,
}

impl ConjectureReport {
    /// Found order equals the conjectured one.
    pub fn agrees(&self) -> bool {
        self.found_order.is_some() && self.found_order == self.conjectured_order
    }

    /// The report without `elapsed`.
    pub fn comparable(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(o) = v.as_object_mut() {
            o.remove("elapsed");
        }
        v
    }
}

/// Runs the search pipeline on a functional: Hankel orthogonalization,
/// then the minimal-order scan.
pub fn check_functional(
    conjecture: &str,
    inputs: serde_json::Value,
    mu: &MomentFunctional,
    q: &Rational,
    conjectured_order: Option<usize>,
    h_max: usize,
    budget: &SearchBudget,
) -> Result<ConjectureReport> {
    let start = Instant::now();
    let mut report = ConjectureReport {
        conjecture: conjecture.to_string(),
        inputs,
        quasi_definite: true,
        conjectured_order,
        found_order: None,
        operator: None,
        eigenvalues: None,
        outcome: Outcome::NotFoundWithinAnsatz,
        h_max,
        scan: Vec::new(),
        elapsed: 0.0,
    };
    match hankel_orthogonal(mu, budget.max_n(h_max)) {
        Err(Error::NotQuasiDefinite(_)) => {
            report.quasi_definite = false;
            report.outcome = Outcome::NotQuasiDefinite;
        }
        Err(e) => return Err(e),
        Ok(gram) => {
            let scan = minimal_even_order(&gram.polys, h_max, budget, q)?;
            report.found_order = scan.order();
            report.scan = scan.steps;
            if let Some(res) = scan.result {
                report.outcome = Outcome::Found;
                report.operator = res.operator;
                report.eigenvalues = res.eigenvalues;
            }
        }
    }
    report.elapsed = start.elapsed().as_secs_f64();
    Ok(report)
}

fn product(factors: impl IntoIterator<Item = Poly>) -> Poly {
    factors.into_iter().fold(Poly::one(), |acc, f| &acc * &f)
}

fn default_h_max(order: Option<usize>, h_max: Option<usize>) -> usize {
    h_max.unwrap_or_else(|| order.map_or(2, |o| o / 2 + 1))
}

fn positive_set(name: &str, f: &[usize]) -> Result<()> {
    if f.contains(&0) {
        return Err(Error::InvalidProblem(format!("{name} must contain positive integers")));
    }
    let mut s = f.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != f.len() {
        return Err(Error::InvalidProblem(format!("{name} has repeated elements")));
    }
    Ok(())
}

fn rat_json(r: &Rational) -> serde_json::Value {
    serde_json::Value::String(crate::exact::rational::format_rational(r))
}

/// `Π(x + bc/q^f) Π(x - bq^{f+1}) Π(x - 1/q^f) ρ_{b,c}`.
pub fn conjecture_a_functional(f1: &[usize], f2: &[usize], f3: &[usize], p: &MeixnerParams) -> MomentFunctional {
    let (q, b, c) = (&p.q, &p.b, &p.c);
    let r = product(
        f1.iter()
            .map(|&f| Poly::linear_root(&-(b * c / pow(q, f as i64))))
            .chain(f2.iter().map(|&f| Poly::linear_root(&(b * pow(q, f as i64 + 1)))))
            .chain(f3.iter().map(|&f| Poly::linear_root(&pow(q, -(f as i64))))),
    );
    MomentFunctional::meixner(p).christoffel(&r)
}

pub fn check_conjecture_a(
    f1: &[usize],
    f2: &[usize],
    f3: &[usize],
    p: &MeixnerParams,
    h_max: Option<usize>,
    budget: &SearchBudget,
) -> Result<ConjectureReport> {
    positive_set("F1", f1)?;
    positive_set("F2", f2)?;
    positive_set("F3", f3)?;
    let order = conjecture_a_order(f1, f2, f3);
    let inputs = serde_json::json!({
        "f1": f1, "f2": f2, "f3": f3,
        "q": rat_json(&p.q), "b": rat_json(&p.b), "c": rat_json(&p.c),
        "budget": budget,
    });
    let mu = conjecture_a_functional(f1, f2, f3, p);
    check_functional("a", inputs, &mu, &p.q, Some(order), default_h_max(Some(order), h_max), budget)
}

fn b_christoffel(f: &[usize], q: &Rational) -> Poly {
    product(
        f.iter()
            .map(|&f| Poly::from_coeffs(vec![Rational::one(), pow(q, f as i64)])),
    )
}

/// `Π(1 + xq^f) ρ_α`.
pub fn conjecture_b1_functional(f: &[usize], p: &LaguerreParams) -> MomentFunctional {
    MomentFunctional::laguerre(p).christoffel(&b_christoffel(f, &p.q))
}

pub fn check_conjecture_b1(
    f: &[usize],
    p: &LaguerreParams,
    h_max: Option<usize>,
    budget: &SearchBudget,
) -> Result<ConjectureReport> {
    positive_set("F", f)?;
    let order = conjecture_b1_order(f);
    let inputs = serde_json::json!({
        "f": f, "q": rat_json(&p.q), "t": rat_json(&p.t), "budget": budget,
    });
    let mu = conjecture_b1_functional(f, p);
    check_functional("b1", inputs, &mu, &p.q, Some(order), default_h_max(Some(order), h_max), budget)
}

/// `Π(1 + xq^f) ρ_α + Σ_j M_j δ_0^{(j)}`, with `K = masses.len() - 1`.
pub fn conjecture_b2_functional(f: &[usize], alpha: usize, masses: &[Rational], q: &Rational) -> Result<MomentFunctional> {
    if masses.is_empty() {
        return Err(Error::InvalidProblem("B2 needs at least one mass M_0".into()));
    }
    let k = masses.len() - 1;
    if alpha <= k {
        return Err(Error::InvalidProblem(format!("B2 requires alpha > K, got alpha = {alpha}, K = {k}")));
    }
    let p = LaguerreParams::with_alpha(q.clone(), alpha as i64)?;
    let mut mu = conjecture_b1_functional(f, &p);
    for (j, m) in masses.iter().enumerate() {
        if !m.is_zero() {
            mu = mu.add(&MomentFunctional::point_mass(Rational::zero(), j, m.clone()));
        }
    }
    Ok(mu)
}

/// `order_hint` sets the conjectured order for the report and the default
/// `h_max`; without it the Laguerre II prediction is used where it applies.
pub fn check_conjecture_b2(
    f: &[usize],
    alpha: usize,
    masses: &[Rational],
    q: &Rational,
    order_hint: Option<usize>,
    h_max: Option<usize>,
    budget: &SearchBudget,
) -> Result<ConjectureReport> {
    positive_set("F", f)?;
    let mu = conjecture_b2_functional(f, alpha, masses, q)?;
    let order = order_hint.or_else(|| conjecture_b2_order(f, alpha, masses));
    let inputs = serde_json::json!({
        "f": f, "alpha": alpha, "q": rat_json(q),
        "masses": masses.iter().map(rat_json).collect::<Vec<_>>(),
        "budget": budget,
    });
    check_functional("b2", inputs, &mu, q, order, default_h_max(order, h_max), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use crate::families::{meixner_operator, PolynomialFamily};
    use crate::krall::{theorem_catalog, Theorem, TheoremInstance};

    fn s0() -> MeixnerParams {
        MeixnerParams::new(rat(2, 5), rat(1, 3), rat(3, 2)).unwrap()
    }

    #[test]
    fn recovers_meixner_operator() {
        let p = s0();
        let fam = PolynomialFamily::meixner(p.clone());
        let b = SearchBudget::default();
        let polys = fam.polys(b.n(1)).unwrap();
        let prob = SearchProblem::new(polys, 1, b.d(1), b.t(1), p.q.clone()).unwrap();
        let res = find_operator(&prob).unwrap();
        assert!(res.found);
        let eig: Vec<Rational> = (0..=b.n(1)).map(|n| fam.eigenvalue(n).unwrap()).collect();
        let d = meixner_operator(&p);
        let ok = matches_up_to_identity(res.operator.as_ref().unwrap(), res.eigenvalues.as_ref().unwrap(), &d, &eig);
        assert!(ok.unwrap());
    }

    #[test]
    fn too_few_polys_rejected() {
        let polys = vec![Poly::one(), Poly::x()];
        assert!(matches!(
            SearchProblem::new(polys, 1, 4, 2, rat(2, 5)),
            Err(Error::InvalidProblem(_))
        ));
    }

    #[test]
    fn meixner_i_k1_minimality() {
        let inst = TheoremInstance::meixner(Theorem::MeixnerI, s0(), 1).unwrap();
        let b = SearchBudget::default();
        let n = b.n(2);
        let kc = theorem_catalog(&inst).unwrap().build(n).unwrap();
        let scan = minimal_even_order(kc.q_polys(), 2, &b, &rat(2, 5)).unwrap();
        assert_eq!(scan.h_min, Some(2));
        assert!(!scan.steps[0].genuine);
        let res = scan.result.unwrap();
        let ok = matches_up_to_identity(
            res.operator.as_ref().unwrap(),
            res.eigenvalues.as_ref().unwrap(),
            kc.operator(),
            &kc.lambdas()[..=n],
        );
        assert!(ok.unwrap());
        assert_eq!(res.nullspace_dim, 2);
    }

    #[test]
    fn conjecture_a_empty_sets() {
        let r = check_conjecture_a(&[], &[], &[], &s0(), None, &SearchBudget::default()).unwrap();
        assert_eq!(r.conjectured_order, Some(2));
        assert_eq!(r.found_order, Some(2));
        assert!(r.agrees());
        assert!(r.comparable().get("elapsed").is_none());
    }

    #[test]
    fn order_formulas() {
        assert_eq!(conjecture_a_order(&[1], &[], &[]), 4);
        assert_eq!(conjecture_a_order(&[], &[], &[1, 2]), 6);
        assert_eq!(conjecture_a_order(&[2], &[], &[]), 6);
        assert_eq!(conjecture_b1_order(&[1]), 4);
        assert_eq!(conjecture_b2_order(&[], 1, &[int(1)]), Some(6));
    }

    #[test]
    fn affine_maps() {
        let f = vec![int(0), int(1), int(2)];
        let r = vec![int(3), int(5), int(7)];
        assert_eq!(affine_map(&f, &r), Some((int(2), int(3))));
        assert_eq!(affine_map(&f, &[int(3), int(5), int(8)]), None);
        assert_eq!(affine_map(&[int(1), int(1)], &[int(1), int(2)]), None);
    }

    #[test]
    fn b2_alpha_must_exceed_k() {
        let r = check_conjecture_b2(&[], 1, &[int(1), int(1)], &rat(2, 5), None, None, &SearchBudget::default());
        assert!(matches!(r, Err(Error::InvalidProblem(_))));
    }

    #[test]
    fn nonpositive_set_rejected() {
        let r = check_conjecture_a(&[0], &[], &[], &s0(), None, &SearchBudget::default());
        assert!(matches!(r, Err(Error::InvalidProblem(_))));
    }
}
