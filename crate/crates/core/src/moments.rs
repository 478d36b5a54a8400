//! Exact moment functionals, their transforms, Hankel orthogonalization
//! and the orthogonalizing functionals of the Krall theorems.

use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::rational::{binom2, format_rational, pow, serde_rational, serde_rational_vec};
use crate::exact::{qpochhammer, Poly, Rational};
use crate::families::{derive_recurrence, meixner, alsalam_carlitz, LaguerreParams, MeixnerParams, PolynomialFamily, ThreeTermRecurrence};
use crate::krall::{meixner_i_aux, meixner_ii_aux, meixner_iii_aux, Theorem, TheoremInstance, TheoremParams};

/// Cross-check identities of the theorem functionals are verified for
/// moments `0..=CROSS_CHECK_DEPTH`.
pub const CROSS_CHECK_DEPTH: usize = 20;

#[derive(Clone)]
enum RecurrenceSource {
    Meixner(MeixnerParams),
    Derived(PolynomialFamily),
    Table(ThreeTermRecurrence),
}

impl RecurrenceSource {
    fn table(&self, len: usize) -> Result<ThreeTermRecurrence> {
        match self {
            RecurrenceSource::Meixner(p) => Ok(ThreeTermRecurrence::meixner(p, len.saturating_sub(1))),
            RecurrenceSource::Derived(f) => derive_recurrence(f, len.saturating_sub(1)),
            RecurrenceSource::Table(t) => Ok(t.clone()),
        }
    }

    fn describe(&self) -> String {
        match self {
            RecurrenceSource::Meixner(p) => format!(
                "q-meixner(q={}, b={}, c={})",
                format_rational(&p.q),
                format_rational(&p.b),
                format_rational(&p.c)
            ),
            RecurrenceSource::Derived(f) => format!("{} (derived recurrence)", f.kind()),
            RecurrenceSource::Table(t) => format!("recurrence table of length {}", t.len()),
        }
    }
}

#[derive(Clone)]
enum Source {
    Recurrence(RecurrenceSource),
    Explicit(Vec<Rational>),
    Christoffel(MomentFunctional, Poly),
    Geronimus {
        base: MomentFunctional,
        lambda: Rational,
        c: Rational,
        seed: Rational,
    },
    PointMass {
        at: Rational,
        derivative: usize,
        mass: Rational,
    },
    Sum(MomentFunctional, MomentFunctional),
    Shift(MomentFunctional, Rational),
    Dilation(MomentFunctional, Rational),
    Scaled(MomentFunctional, Rational),
}

struct Inner {
    source: Source,
    cache: RwLock<Vec<Rational>>,
}

/// A linear functional on polynomials given by its moments `μ_n = ⟨μ, x^n⟩`.
///
/// Moments are produced on demand and memoized; clones share the cache.
#[derive(Clone)]
pub struct MomentFunctional(Arc<Inner>);

/// How a functional was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    Recurrence {
        source: String,
    },
    Explicit {
        len: usize,
    },
    Christoffel {
        base: Box<Provenance>,
        multiplier: Poly,
    },
    Geronimus {
        base: Box<Provenance>,
        #[serde(with = "serde_rational")]
        lambda: Rational,
        #[serde(with = "serde_rational")]
        c: Rational,
        #[serde(with = "serde_rational")]
        seed: Rational,
    },
    PointMass {
        #[serde(with = "serde_rational")]
        at: Rational,
        derivative: usize,
        #[serde(with = "serde_rational")]
        mass: Rational,
    },
    Sum {
        left: Box<Provenance>,
        right: Box<Provenance>,
    },
    Shift {
        base: Box<Provenance>,
        #[serde(with = "serde_rational")]
        by: Rational,
    },
    Dilation {
        base: Box<Provenance>,
        #[serde(with = "serde_rational")]
        by: Rational,
    },
    Scaled {
        base: Box<Provenance>,
        #[serde(with = "serde_rational")]
        factor: Rational,
    },
}

impl fmt::Debug for MomentFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MomentFunctional")
            .field("provenance", &self.provenance())
            .finish()
    }
}

fn falling(n: usize, j: usize) -> Rational {
    (0..j).fold(Rational::one(), |acc, i| acc * Rational::from_integer(BigInt::from(n - i)))
}

fn binomial(n: usize, k: usize) -> Rational {
    falling(n, k) / falling(k, k)
}

impl MomentFunctional {
    fn from_source(source: Source) -> Self {
        MomentFunctional(Arc::new(Inner {
            source,
            cache: RwLock::new(Vec::new()),
        }))
    }

    /// `ρ_{b,c}` through the closed-form q-Meixner recurrence, `μ₀ = 1`.
    pub fn meixner(p: &MeixnerParams) -> Self {
        Self::from_source(Source::Recurrence(RecurrenceSource::Meixner(p.clone())))
    }

    /// `ρ_α` through the derived q-Laguerre recurrence, `μ₀ = 1`.
    pub fn laguerre(p: &LaguerreParams) -> Self {
        Self::from_family(PolynomialFamily::laguerre(p.clone()))
    }

    /// The functional that makes `family` orthogonal with `μ₀ = 1`, via
    /// its derived recurrence.
    pub fn from_family(family: PolynomialFamily) -> Self {
        Self::from_source(Source::Recurrence(RecurrenceSource::Derived(family)))
    }

    /// Moments from a fixed recurrence table. `μ_n` needs `len > n/2`.
    pub fn from_recurrence(rec: ThreeTermRecurrence) -> Self {
        Self::from_source(Source::Recurrence(RecurrenceSource::Table(rec)))
    }

    /// A finite list of moments; higher moments are unavailable.
    pub fn explicit(moments: Vec<Rational>) -> Self {
        Self::from_source(Source::Explicit(moments))
    }

    /// `⟨rμ, p⟩ = ⟨μ, rp⟩`.
    pub fn christoffel(&self, r: &Poly) -> Self {
        Self::from_source(Source::Christoffel(self.clone(), r.clone()))
    }

    /// The functional `μ̃` with `μ̃₀ = seed` and `(x - λ)μ̃ = Cμ`.
    pub fn geronimus(&self, lambda: Rational, c: Rational, seed: Rational) -> Self {
        Self::from_source(Source::Geronimus {
            base: self.clone(),
            lambda,
            c,
            seed,
        })
    }

    /// `M δ_λ^{(j)}`, with `⟨δ_λ^{(j)}, p⟩ = (-1)^j p^{(j)}(λ)`.
    pub fn point_mass(at: Rational, derivative: usize, mass: Rational) -> Self {
        Self::from_source(Source::PointMass { at, derivative, mass })
    }

    pub fn add(&self, other: &MomentFunctional) -> Self {
        Self::from_source(Source::Sum(self.clone(), other.clone()))
    }

    /// `⟨μ(x+λ), p⟩ = ⟨μ, p(x-λ)⟩`.
    pub fn shift(&self, lambda: Rational) -> Self {
        Self::from_source(Source::Shift(self.clone(), lambda))
    }

    /// Support scaling `x ↦ λx`: `μ̃_n = λ^n μ_n`.
    pub fn dilate(&self, lambda: Rational) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroDilation);
        }
        Ok(Self::from_source(Source::Dilation(self.clone(), lambda)))
    }

    pub fn scale(&self, factor: Rational) -> Self {
        Self::from_source(Source::Scaled(self.clone(), factor))
    }

    pub fn provenance(&self) -> Provenance {
        match &self.0.source {
            Source::Recurrence(r) => Provenance::Recurrence { source: r.describe() },
            Source::Explicit(v) => Provenance::Explicit { len: v.len() },
            Source::Christoffel(b, r) => Provenance::Christoffel {
                base: Box::new(b.provenance()),
                multiplier: r.clone(),
            },
            Source::Geronimus { base, lambda, c, seed } => Provenance::Geronimus {
                base: Box::new(base.provenance()),
                lambda: lambda.clone(),
                c: c.clone(),
                seed: seed.clone(),
            },
            Source::PointMass { at, derivative, mass } => Provenance::PointMass {
                at: at.clone(),
                derivative: *derivative,
                mass: mass.clone(),
            },
            Source::Sum(a, b) => Provenance::Sum {
                left: Box::new(a.provenance()),
                right: Box::new(b.provenance()),
            },
            Source::Shift(b, l) => Provenance::Shift {
                base: Box::new(b.provenance()),
                by: l.clone(),
            },
            Source::Dilation(b, l) => Provenance::Dilation {
                base: Box::new(b.provenance()),
                by: l.clone(),
            },
            Source::Scaled(b, f) => Provenance::Scaled {
                base: Box::new(b.provenance()),
                factor: f.clone(),
            },
        }
    }

    pub fn moment(&self, n: usize) -> Result<Rational> {
        if let Some(v) = self.0.cache.read().expect("moment cache").get(n) {
            return Ok(v.clone());
        }
        let mut cache = self.0.cache.write().expect("moment cache");
        if cache.len() <= n {
            let target = match self.0.source {
                Source::Recurrence(_) => n.max(2 * cache.len()).max(16),
                _ => n,
            };
            self.extend(&mut cache, target)?;
        }
        Ok(cache[n].clone())
    }

    /// `μ_0, ..., μ_upto`.
    pub fn moments(&self, upto: usize) -> Result<Vec<Rational>> {
        self.moment(upto)?;
        Ok(self.0.cache.read().expect("moment cache")[..=upto].to_vec())
    }

    fn extend(&self, cache: &mut Vec<Rational>, target: usize) -> Result<()> {
        match &self.0.source {
            Source::Recurrence(src) => {
                let rec = src.table(target / 2 + 1)?;
                let all = moments_from_table(&rec, target)?;
                *cache = all;
                return Ok(());
            }
            Source::Explicit(v) => {
                if target >= v.len() {
                    return Err(Error::MomentUnavailable(target));
                }
                *cache = v.clone();
                return Ok(());
            }
            _ => {}
        }
        for n in cache.len()..=target {
            let v = match &self.0.source {
                Source::Christoffel(b, r) => {
                    let mut s = Rational::zero();
                    for (k, rk) in r.coeffs().iter().enumerate() {
                        if !rk.is_zero() {
                            s += rk * b.moment(n + k)?;
                        }
                    }
                    s
                }
                Source::Geronimus { base, lambda, c, seed } => {
                    if n == 0 {
                        seed.clone()
                    } else {
                        lambda * &cache[n - 1] + c * base.moment(n - 1)?
                    }
                }
                Source::PointMass { at, derivative, mass } => {
                    let j = *derivative;
                    if n < j {
                        Rational::zero()
                    } else {
                        let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
                        sign * mass * falling(n, j) * pow(at, (n - j) as i64)
                    }
                }
                Source::Sum(a, b) => a.moment(n)? + b.moment(n)?,
                Source::Shift(b, l) => {
                    let mut s = Rational::zero();
                    for k in 0..=n {
                        s += binomial(n, k) * pow(&-l.clone(), (n - k) as i64) * b.moment(k)?;
                    }
                    s
                }
                Source::Dilation(b, l) => pow(l, n as i64) * b.moment(n)?,
                Source::Scaled(b, f) => f * b.moment(n)?,
                Source::Recurrence(_) | Source::Explicit(_) => unreachable!(),
            };
            cache.push(v);
        }
        Ok(())
    }

    /// `Σ_n coeff_n μ_n`.
    pub fn pair(&self, p: &Poly) -> Result<Rational> {
        let mut s = Rational::zero();
        for (n, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                s += c * self.moment(n)?;
            }
        }
        Ok(s)
    }

    pub fn to_report(&self, upto: usize) -> Result<FunctionalReport> {
        Ok(FunctionalReport {
            provenance: self.provenance(),
            moments: self.moments(upto)?,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctionalReport {
    pub provenance: Provenance,
    #[serde(with = "serde_rational_vec")]
    pub moments: Vec<Rational>,
}

/// `μ_n` = coefficient of `p_0` in `x^n` expanded in the recurrence basis,
/// by iterated tridiagonal multiplication.
pub fn moments_from_table(rec: &ThreeTermRecurrence, upto: usize) -> Result<Vec<Rational>> {
    let half = upto / 2;
    if rec.len() < half + 1 {
        return Err(Error::MomentUnavailable(upto));
    }
    let mut out = Vec::with_capacity(upto + 1);
    let mut v = vec![Rational::one()];
    out.push(Rational::one());
    for m in 1..=upto {
        // entries above min(m, upto - m) never reach index 0 again
        let keep = m.min(upto - m);
        let mut next = vec![Rational::zero(); keep + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            let mut s = Rational::zero();
            if i >= 1 && i - 1 < v.len() && !v[i - 1].is_zero() {
                s += &rec.a[i - 1] * &v[i - 1];
            }
            if i < v.len() && !v[i].is_zero() {
                s += &rec.b[i] * &v[i];
            }
            if i + 1 < v.len() && !v[i + 1].is_zero() {
                s += &rec.c[i + 1] * &v[i + 1];
            }
            *slot = s;
        }
        out.push(next[0].clone());
        v = next;
    }
    Ok(out)
}

/// `moments_from_table` packaged as a functional.
pub fn moments_from_recurrence(rec: &ThreeTermRecurrence, upto: usize) -> Result<MomentFunctional> {
    Ok(MomentFunctional::explicit(moments_from_table(rec, upto)?))
}

/// `G_{ij} = ⟨μ, p_i p_j⟩`.
pub fn gram_matrix(mu: &MomentFunctional, polys: &[Poly]) -> Result<Vec<Vec<Rational>>> {
    let n = polys.len();
    let mut g = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = mu.pair(&(&polys[i] * &polys[j]))?;
            g[j][i] = v.clone();
            g[i][j] = v;
        }
    }
    Ok(g)
}

/// Off-diagonal entries zero and diagonal entries nonzero.
pub fn is_diagonal_nonsingular(g: &[Vec<Rational>]) -> bool {
    g.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, v)| if i == j { !v.is_zero() } else { v.is_zero() })
    })
}

/// Exact rationals as `num/den`, comma separated, one row per line.
pub fn gram_csv(g: &[Vec<Rational>]) -> String {
    let mut out = String::new();
    for row in g {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramData {
    /// `Δ_n = det(μ_{i+j})_{i,j=0..n}`.
    #[serde(with = "serde_rational_vec")]
    pub deltas: Vec<Rational>,
    /// Monic orthogonal polynomials `π_0..π_N`.
    pub polys: Vec<Poly>,
    /// `h_n = ⟨μ, π_n²⟩`.
    #[serde(with = "serde_rational_vec")]
    pub norms: Vec<Rational>,
}

/// Monic orthogonal polynomials `π_0..π_N`.
///
/// Realized by the Stieltjes recursion `π_{n+1} = (x - b_n)π_n - (h_n/h_{n-1})π_{n-1}`
/// with `b_n = ⟨μ, xπ_n²⟩/h_n`; `Δ_n = Δ_{n-1} h_n`. A zero `h_n` is exactly a
/// vanishing `Δ_n`.
pub fn hankel_orthogonal(mu: &MomentFunctional, upto: usize) -> Result<GramData> {
    let mut polys = vec![Poly::one()];
    let mut norms: Vec<Rational> = Vec::new();
    let mut deltas: Vec<Rational> = Vec::new();
    for n in 0..=upto {
        let pn = &polys[n];
        let h = mu.pair(&(pn * pn))?;
        if h.is_zero() {
            return Err(Error::NotQuasiDefinite(n));
        }
        let d = match deltas.last() {
            Some(prev) => prev * &h,
            None => h.clone(),
        };
        deltas.push(d);
        norms.push(h);
        if n == upto {
            break;
        }
        let xp = pn.shift_up(1);
        let bn = mu.pair(&(&xp * pn))? / &norms[n];
        let mut next = &xp - &pn.scale(&bn);
        if n > 0 {
            next = &next - &polys[n - 1].scale(&(&norms[n] / &norms[n - 1]));
        }
        polys.push(next);
    }
    Ok(GramData { deltas, polys, norms })
}

/// Bit `n-1` is `a_{n-1} c_n > 0`, for `n = 1..=upto`.
pub fn favard_positivity(rec: &ThreeTermRecurrence, upto: usize) -> Vec<bool> {
    rec.favard_products()
        .into_iter()
        .take(upto)
        .map(|v| v > Rational::zero())
        .collect()
}

/// Orthogonal polynomials for `ν + Mδ_λ` from a family `p_n` orthogonal
/// for `(x - λ)ν`: `q_n = p_n + β_n p_{n-1}` with
/// `β_n = -(α_n + M p_n(λ))/(α_{n-1} + M p_{n-1}(λ))`, `α_n = ⟨ν, p_n⟩`.
///
/// Returns `(β_1..β_N, q_0..q_N)`.
pub fn mass_perturbed_family(
    nu: &MomentFunctional,
    lambda: &Rational,
    m: &Rational,
    family: &[Poly],
    upto: usize,
) -> Result<(Vec<Rational>, Vec<Poly>)> {
    let w = |n: usize| -> Result<Rational> { Ok(nu.pair(&family[n])? + m * family[n].eval(lambda)) };
    let mut betas = Vec::with_capacity(upto);
    let mut qs = vec![Poly::one()];
    let mut prev = w(0)?;
    for n in 1..=upto {
        if prev.is_zero() {
            return Err(Error::DenominatorVanishes(n));
        }
        let cur = w(n)?;
        let b = -(&cur / &prev);
        qs.push(&family[n] + &family[n - 1].scale(&b));
        betas.push(b);
        prev = cur;
    }
    Ok((betas, qs))
}

/// Gram matrix of the Krall polynomials against the theorem functional,
/// and agreement with the Hankel orthogonal polynomials.
#[derive(Clone, Debug, Serialize)]
pub struct OrthogonalityReport {
    pub upto: usize,
    pub diagonal: bool,
    pub hankel_matches: bool,
    /// Signs of `Δ_0..Δ_N`; empty when the functional is not quasi-definite.
    pub hankel_signs: Vec<i8>,
    #[serde(skip)]
    pub gram: Vec<Vec<Rational>>,
}

impl OrthogonalityReport {
    pub fn all_pass(&self) -> bool {
        self.diagonal && self.hankel_matches
    }
}

/// `⟨ρ̃, q_n q_m⟩` for `n, m ≤ upto` and the monic comparison with
/// `hankel_orthogonal(ρ̃)`.
pub fn verify_orthogonality(rho: &MomentFunctional, qpolys: &[Poly], upto: usize) -> Result<OrthogonalityReport> {
    let qs = &qpolys[..=upto.min(qpolys.len() - 1)];
    let gram = gram_matrix(rho, qs)?;
    let diagonal = is_diagonal_nonsingular(&gram);
    let (hankel_matches, hankel_signs) = match hankel_orthogonal(rho, qs.len() - 1) {
        Ok(g) => (
            g.polys.iter().zip(qs).all(|(a, b)| *a == b.monic()),
            g.deltas.iter().map(crate::linalg::sign_of).collect(),
        ),
        Err(Error::NotQuasiDefinite(_)) => (false, Vec::new()),
        Err(e) => return Err(e),
    };
    Ok(OrthogonalityReport {
        upto: qs.len() - 1,
        diagonal,
        hankel_matches,
        hankel_signs,
        gram,
    })
}

fn meixner_base(p: &MeixnerParams, b: Rational, c: Rational) -> MomentFunctional {
    MomentFunctional::meixner(&MeixnerParams { q: p.q.clone(), b, c })
}

fn product_of_roots(factors: impl IntoIterator<Item = Poly>) -> Poly {
    factors.into_iter().fold(Poly::one(), |acc, f| &acc * &f)
}

fn compare(check: &str, lhs: &MomentFunctional, rhs: &MomentFunctional, depth: usize) -> Result<()> {
    for n in 0..=depth {
        if lhs.moment(n)? != rhs.moment(n)? {
            return Err(Error::CrossCheckFailed {
                check: check.to_string(),
                index: n,
            });
        }
    }
    Ok(())
}

/// A cross-check relation: `multiplier · ρ̃ = factor · base`.
#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub name: &'static str,
    pub multiplier: Poly,
    pub factor: Rational,
    pub base: MomentFunctional,
}

impl CrossCheck {
    pub fn run(&self, rho: &MomentFunctional, depth: usize) -> Result<()> {
        compare(
            self.name,
            &rho.christoffel(&self.multiplier),
            &self.base.scale(self.factor.clone()),
            depth,
        )
    }

    /// First failing moment index, if any.
    pub fn first_mismatch(&self, rho: &MomentFunctional, depth: usize) -> Result<Option<usize>> {
        match self.run(rho, depth) {
            Ok(()) => Ok(None),
            Err(Error::CrossCheckFailed { index, .. }) => Ok(Some(index)),
            Err(e) => Err(e),
        }
    }
}

/// The functional, before its cross-check, and the check itself.
pub fn measure_with_check(inst: &TheoremInstance) -> Result<(MomentFunctional, Option<CrossCheck>)> {
    let k = inst.k;
    let ki = k as i64;
    let one = Rational::one();
    match (&inst.theorem, &inst.params) {
        (Theorem::MeixnerI, TheoremParams::Meixner(p)) => {
            let (q, b, c) = (&p.q, &p.b, &p.c);
            let base = meixner_base(p, b.clone(), pow(q, ki + 1) * c);
            let r = product_of_roots((1..=ki).map(|i| Poly::linear_root(&-(b * c * pow(q, i)))));
            let rho = base.christoffel(&r);
            let check = CrossCheck {
                name: "(x + bcq^{k+1}) rho~ = (-c;q)_{k+1} rho_{b,c}",
                multiplier: Poly::linear_root(&-(b * c * pow(q, ki + 1))),
                factor: qpochhammer(&-c.clone(), q, k + 1),
                base: MomentFunctional::meixner(p),
            };
            Ok((rho, Some(check)))
        }
        (Theorem::MeixnerII, TheoremParams::Meixner(p)) => {
            let (q, b, c) = (&p.q, &p.b, &p.c);
            let base = meixner_base(p, b / pow(q, ki + 1), pow(q, ki + 1) * c);
            let r = product_of_roots((0..ki).map(|i| Poly::linear_root(&(b / pow(q, i)))));
            let rho = base.christoffel(&r);
            let bq_k = b / pow(q, ki);
            let check = CrossCheck {
                name: "(x - b/q^k) rho~ = (b/q^k;q)_{k+1} (-c;q)_{k+1} rho_{b,c}",
                multiplier: Poly::linear_root(&bq_k),
                factor: qpochhammer(&bq_k, q, k + 1) * qpochhammer(&-c.clone(), q, k + 1),
                base: MomentFunctional::meixner(p),
            };
            Ok((rho, Some(check)))
        }
        (Theorem::MeixnerIII, TheoremParams::Meixner(p)) => {
            let (q, b, c) = (&p.q, &p.b, &p.c);
            let lambda = pow(q, ki + 1);
            let cc = pow(c, ki + 1) * pow(q, binom2(ki + 1)) * qpochhammer(&(b / pow(q, ki)), q, k + 1);
            let seed = meixner_iii_pairing(p, k, 0)?;
            let base = MomentFunctional::meixner(p);
            let rho = base.geronimus(lambda.clone(), cc.clone(), seed);
            let check = CrossCheck {
                name: "(x - q^{k+1}) rho~ = c^{k+1} q^{C(k+1,2)} (b/q^k;q)_{k+1} rho_{b,c}",
                multiplier: Poly::linear_root(&lambda),
                factor: cc,
                base,
            };
            Ok((rho, Some(check)))
        }
        (Theorem::LaguerreI, TheoremParams::Laguerre(p)) => {
            let (q, t) = (&p.q, &p.t);
            let s = pow(q, ki + 1);
            let base = MomentFunctional::laguerre(p);
            // density substitution x ↦ x/s: moments s^{n+1} μ_n
            let dilated = base.dilate(s.clone())?.scale(s.clone());
            let r = product_of_roots(
                (1..=ki).map(|i| Poly::from_coeffs(vec![one.clone(), pow(q, -i)])),
            );
            let rho = dilated.christoffel(&r);
            let check = CrossCheck {
                name: "(1 + x/q^{k+1}) rho~ = q^{-alpha(k+1)} rho_alpha",
                multiplier: Poly::from_coeffs(vec![one.clone(), pow(q, -(ki + 1))]),
                factor: pow(t, -(ki + 1)),
                base,
            };
            Ok((rho, Some(check)))
        }
        (Theorem::LaguerreII, TheoremParams::Laguerre(p)) => {
            let alpha = p
                .alpha
                .ok_or_else(|| Error::DegenerateParams("laguerre-ii needs integer alpha".into()))?;
            let lower = LaguerreParams::with_alpha(p.q.clone(), alpha - 1)?;
            let rho = MomentFunctional::laguerre(&lower)
                .add(&MomentFunctional::point_mass(Rational::zero(), 0, inst.m.clone()));
            Ok((rho, None))
        }
        (t, _) => Err(Error::UnknownTheorem(format!("{t} with mismatched parameters"))),
    }
}

/// The orthogonalizing functional of a theorem, after its cross-check
/// passed for moments `0..=CROSS_CHECK_DEPTH`.
pub fn measure_catalog(inst: &TheoremInstance) -> Result<MomentFunctional> {
    let (rho, check) = measure_with_check(inst)?;
    if let Some(c) = check {
        c.run(&rho, CROSS_CHECK_DEPTH)?;
    }
    Ok(rho)
}

/// `⟨ρ̃_I, m_n⟩ = (-1)^{n+k} (-cq;q)_k (q;q)_k m_k^{-c,1/(bc);q}(q^{n+1})`.
pub fn meixner_i_pairing(p: &MeixnerParams, k: usize, n: usize) -> Result<Rational> {
    let q = &p.q;
    let sign = if (n + k).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let m = meixner(&meixner_i_aux(p), k)?;
    Ok(sign
        * qpochhammer(&-(&p.c * q), q, k)
        * qpochhammer(q, q, k)
        * m.eval(&pow(q, n as i64 + 1)))
}

/// `⟨ρ̃_II, m_n⟩ = (-1)^n c^k (b/q^k;q)_k (q;q)_k m_k^{b,c;1/q}(bq^n)/(bq;q)_n`.
pub fn meixner_ii_pairing(p: &MeixnerParams, k: usize, n: usize) -> Result<Rational> {
    let (q, b, c) = (&p.q, &p.b, &p.c);
    let ki = k as i64;
    let sign = if n.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let m = meixner(&meixner_ii_aux(p), k)?;
    Ok(sign
        * pow(c, ki)
        * qpochhammer(&(b / pow(q, ki)), q, k)
        * qpochhammer(q, q, k)
        * m.eval(&(b * pow(q, n as i64)))
        / qpochhammer(&(b * q), q, n))
}

/// `⟨ρ̃_III, m_n⟩ = (-1)^{n+k} (q;q)_k (b/q^k;q)_k c^k q^{C(n+1,2)+C(k+1,2)}
/// (-c/q^n;q)_n / (c^n (bq;q)_n) m_k^{1/b,bc;q}(q^{n+1})`.
pub fn meixner_iii_pairing(p: &MeixnerParams, k: usize, n: usize) -> Result<Rational> {
    let (q, b, c) = (&p.q, &p.b, &p.c);
    let (ki, ni) = (k as i64, n as i64);
    let sign = if (n + k).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let m = meixner(&meixner_iii_aux(p), k)?;
    Ok(sign
        * qpochhammer(q, q, k)
        * qpochhammer(&(b / pow(q, ki)), q, k)
        * pow(c, ki)
        * pow(q, binom2(ni + 1) + binom2(ki + 1))
        * qpochhammer(&-(c / pow(q, ni)), q, n)
        / (pow(c, ni) * qpochhammer(&(b * q), q, n))
        * m.eval(&pow(q, ni + 1)))
}

/// `⟨ρ̃_{k,α}, L_n⟩ = (-1)^n q^{k+1} t^{-k} v_k^{1/t;q}(q^{n+1})` for the
/// Laguerre I functional as built by [`measure_catalog`].
pub fn laguerre_i_pairing(p: &LaguerreParams, k: usize, n: usize) -> Result<Rational> {
    let (q, t) = (&p.q, &p.t);
    let sign = if n.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let v = alsalam_carlitz(&t.recip(), q, k)?;
    Ok(sign * pow(q, k as i64 + 1) * pow(t, -(k as i64)) * v.eval(&pow(q, n as i64 + 1)))
}

/// `η_{k,c} = bcq(1-q^k) η_{k-1,cq} + (-cq;q)_k`, `η_{0,c} = 1`.
pub fn eta(p: &MeixnerParams, k: usize) -> Rational {
    if k == 0 {
        return Rational::one();
    }
    let (q, b, c) = (&p.q, &p.b, &p.c);
    let shifted = MeixnerParams {
        q: q.clone(),
        b: b.clone(),
        c: c * q,
    };
    b * c * q * (Rational::one() - pow(q, k as i64)) * eta(&shifted, k - 1)
        + qpochhammer(&-(c * q), q, k)
}

/// `τ_{k,c} = (-1)^k (-cq;q)_k (q;q)_k m_k^{-c,1/(bc);q}(q)`, the `n = 0`
/// value of the Meixner I pairing.
pub fn tau(p: &MeixnerParams, k: usize) -> Result<Rational> {
    meixner_i_pairing(p, k, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use crate::krall::theorem_catalog;
    use crate::linalg::{determinant, solve};
    use proptest::prelude::*;

    fn s0() -> MeixnerParams {
        MeixnerParams::new(rat(2, 5), rat(1, 3), rat(3, 2)).unwrap()
    }

    #[test]
    fn first_moments() {
        let p = s0();
        let rec = ThreeTermRecurrence::meixner(&p, 4);
        let mu = MomentFunctional::meixner(&p);
        assert_eq!(mu.moment(0).unwrap(), int(1));
        assert_eq!(mu.moment(1).unwrap(), rec.b[0]);
        let one = int(1);
        assert_eq!(rec.b[0], &one + &p.c * (&one - &p.b * &p.q) / &p.q);
        assert_eq!(mu.moment(2).unwrap(), &rec.b[0] * &rec.b[0] + &rec.a[0] * &rec.c[1]);
    }

    #[test]
    fn family_is_orthogonal_to_constants() {
        let p = s0();
        let mu = MomentFunctional::meixner(&p);
        let fam = PolynomialFamily::meixner(p);
        assert_eq!(mu.pair(&Poly::zero()).unwrap(), int(0));
        for n in 1..=10 {
            assert!(mu.pair(&fam.poly(n).unwrap()).unwrap().is_zero());
        }
        let lag = LaguerreParams::new(rat(2, 5), rat(3, 4)).unwrap();
        let mu = MomentFunctional::laguerre(&lag);
        let fam = PolynomialFamily::laguerre(lag);
        for n in 1..=10 {
            assert!(mu.pair(&fam.poly(n).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn point_masses() {
        let d0 = MomentFunctional::point_mass(int(0), 0, int(1));
        assert_eq!(d0.moments(4).unwrap(), vec![int(1), int(0), int(0), int(0), int(0)]);
        let d1 = MomentFunctional::point_mass(int(0), 1, int(1));
        assert_eq!(d1.moments(3).unwrap(), vec![int(0), int(-1), int(0), int(0)]);
        let d2 = MomentFunctional::point_mass(rat(1, 2), 2, int(3));
        // ⟨δ''_{1/2}, x^3⟩ = 6 · 1/2
        assert_eq!(d2.moment(3).unwrap(), int(9));
    }

    #[test]
    fn trivial_transforms() {
        let mu = MomentFunctional::meixner(&s0());
        assert_eq!(mu.shift(int(0)).moments(8).unwrap(), mu.moments(8).unwrap());
        assert_eq!(mu.dilate(int(1)).unwrap().moments(8).unwrap(), mu.moments(8).unwrap());
        assert_eq!(mu.christoffel(&Poly::one()).moments(8).unwrap(), mu.moments(8).unwrap());
        assert!(matches!(mu.dilate(int(0)), Err(Error::ZeroDilation)));
    }

    #[test]
    fn hankel_small_cases() {
        let mu = MomentFunctional::meixner(&s0());
        let g = hankel_orthogonal(&mu, 8).unwrap();
        assert_eq!(g.polys[0], Poly::one());
        assert_eq!(g.norms[0], mu.moment(0).unwrap());
        let m1 = mu.moment(1).unwrap() / mu.moment(0).unwrap();
        assert_eq!(g.polys[1], Poly::linear_root(&m1));
        let fam = PolynomialFamily::meixner(s0());
        for n in 0..=8 {
            assert_eq!(g.polys[n], fam.poly(n).unwrap().monic());
        }
    }

    #[test]
    fn hankel_matches_linear_solve() {
        let mu = MomentFunctional::meixner(&s0()).christoffel(&Poly::linear_root(&rat(-1, 2)));
        let g = hankel_orthogonal(&mu, 6).unwrap();
        for n in 1..=6 {
            // ⟨μ, π_n x^m⟩ = 0, m < n, π_n monic
            let a: Vec<Vec<Rational>> = (0..n)
                .map(|m| (0..n).map(|j| mu.moment(m + j).unwrap()).collect())
                .collect();
            let b: Vec<Rational> = (0..n).map(|m| -mu.moment(m + n).unwrap()).collect();
            let mut c = solve(&a, &b).unwrap();
            c.push(int(1));
            assert_eq!(g.polys[n], Poly::from_coeffs(c));
            let h: Vec<Vec<Rational>> = (0..=n)
                .map(|i| (0..=n).map(|j| mu.moment(i + j).unwrap()).collect())
                .collect();
            assert_eq!(g.deltas[n], determinant(&h));
        }
    }

    #[test]
    fn not_quasi_definite() {
        // μ = δ_0 - δ_1... simplest: moments 1, 0, 0, ... but h_1 = μ_2 - μ_1²/μ_0 = 0
        let mu = MomentFunctional::point_mass(int(0), 0, int(1));
        assert!(matches!(hankel_orthogonal(&mu, 3), Err(Error::NotQuasiDefinite(1))));
        let z = MomentFunctional::explicit(vec![int(0); 10]);
        assert!(matches!(hankel_orthogonal(&z, 3), Err(Error::NotQuasiDefinite(0))));
    }

    #[test]
    fn mass_perturbation_forbidden_mass() {
        let lag = LaguerreParams::with_alpha(rat(2, 5), 2).unwrap();
        let lower = LaguerreParams::with_alpha(rat(2, 5), 1).unwrap();
        let nu = MomentFunctional::laguerre(&lower);
        let fam = PolynomialFamily::laguerre(lag).polys(6).unwrap();
        // α_0 + M p_0(0) = 1 + M = 0
        let r = mass_perturbed_family(&nu, &int(0), &int(-1), &fam, 5);
        assert!(matches!(r, Err(Error::DenominatorVanishes(1))));
    }

    #[test]
    fn mass_perturbation_gram_is_diagonal() {
        let lag = LaguerreParams::with_alpha(rat(2, 5), 2).unwrap();
        let lower = LaguerreParams::with_alpha(rat(2, 5), 1).unwrap();
        let nu = MomentFunctional::laguerre(&lower);
        let m = rat(7, 3);
        let fam = PolynomialFamily::laguerre(lag).polys(6).unwrap();
        let (_, qs) = mass_perturbed_family(&nu, &int(0), &m, &fam, 6).unwrap();
        let rho = nu.add(&MomentFunctional::point_mass(int(0), 0, m));
        assert!(is_diagonal_nonsingular(&gram_matrix(&rho, &qs).unwrap()));
    }

    #[test]
    fn favard_bits() {
        let rec = ThreeTermRecurrence::meixner(&s0(), 10);
        assert!(favard_positivity(&rec, 10).iter().all(|&b| b));
        assert_eq!(favard_positivity(&rec, 10).len(), 10);
    }

    #[test]
    fn catalog_measures_orthogonalize_krall_polynomials() {
        let k = 1;
        let insts = vec![
            TheoremInstance::meixner(Theorem::MeixnerI, s0(), k).unwrap(),
            TheoremInstance::meixner(Theorem::MeixnerII, s0(), k).unwrap(),
            TheoremInstance::meixner(Theorem::MeixnerIII, s0(), k).unwrap(),
            TheoremInstance::laguerre_i(LaguerreParams::new(rat(2, 5), rat(3, 4)).unwrap(), k),
            TheoremInstance::laguerre_ii(rat(2, 5), 2, int(1)).unwrap(),
        ];
        for inst in insts {
            let rho = measure_catalog(&inst).unwrap();
            let kc = theorem_catalog(&inst).unwrap().build(6).unwrap();
            let g = gram_matrix(&rho, kc.q_polys()).unwrap();
            assert!(is_diagonal_nonsingular(&g), "{inst}");
        }
    }

    #[test]
    fn pairing_formulas() {
        let p = s0();
        let lag = LaguerreParams::new(rat(2, 5), rat(3, 4)).unwrap();
        let fam = PolynomialFamily::meixner(p.clone());
        let lf = PolynomialFamily::laguerre(lag.clone());
        for k in 1..=2 {
            let r1 = measure_catalog(&TheoremInstance::meixner(Theorem::MeixnerI, p.clone(), k).unwrap()).unwrap();
            let r2 = measure_catalog(&TheoremInstance::meixner(Theorem::MeixnerII, p.clone(), k).unwrap()).unwrap();
            let r3 = measure_catalog(&TheoremInstance::meixner(Theorem::MeixnerIII, p.clone(), k).unwrap()).unwrap();
            let r4 = measure_catalog(&TheoremInstance::laguerre_i(lag.clone(), k)).unwrap();
            for n in 0..=6 {
                let mn = fam.poly(n).unwrap();
                assert_eq!(r1.pair(&mn).unwrap(), meixner_i_pairing(&p, k, n).unwrap());
                assert_eq!(r2.pair(&mn).unwrap(), meixner_ii_pairing(&p, k, n).unwrap());
                assert_eq!(r3.pair(&mn).unwrap(), meixner_iii_pairing(&p, k, n).unwrap());
                assert_eq!(r4.pair(&lf.poly(n).unwrap()).unwrap(), laguerre_i_pairing(&lag, k, n).unwrap());
            }
        }
    }

    #[test]
    fn eta_tau_recursion() {
        let p = s0();
        for k in 0..=4 {
            let rho = measure_catalog(&TheoremInstance::meixner(Theorem::MeixnerI, p.clone(), k).unwrap());
            let e = eta(&p, k);
            assert_eq!(e, tau(&p, k).unwrap(), "k = {k}");
            assert_eq!(rho.unwrap().moment(0).unwrap(), e);
        }
    }

    #[test]
    fn failed_cross_check_reports_index() {
        let p = s0();
        let inst = TheoremInstance::meixner(Theorem::MeixnerI, p.clone(), 1).unwrap();
        let (rho, check) = measure_with_check(&inst).unwrap();
        let mut bad = check.unwrap();
        bad.factor += rat(1, 1000);
        assert!(matches!(bad.run(&rho, 20), Err(Error::CrossCheckFailed { index: 0, .. })));
    }

    #[test]
    fn provenance_json() {
        let mu = MomentFunctional::meixner(&s0()).christoffel(&Poly::x());
        let rep = serde_json::to_value(mu.to_report(3).unwrap()).unwrap();
        assert_eq!(rep["provenance"]["kind"], "christoffel");
        assert_eq!(rep["provenance"]["base"]["kind"], "recurrence");
        assert_eq!(rep["moments"].as_array().unwrap().len(), 4);
        let csv = gram_csv(&[vec![int(1), rat(-1, 2)], vec![rat(-1, 2), int(3)]]);
        assert_eq!(csv, "1/1,-1/2\n-1/2,3/1\n");
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-4i64..4, 0..4).prop_map(|v| Poly::from_coeffs(v.into_iter().map(int).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn christoffel_law(r in arb_poly(), p in arb_poly()) {
            let mu = MomentFunctional::meixner(&s0());
            prop_assert_eq!(mu.christoffel(&r).pair(&p).unwrap(), mu.pair(&(&r * &p)).unwrap());
        }

        #[test]
        fn shift_law(l in -3i64..3, p in arb_poly()) {
            let mu = MomentFunctional::meixner(&s0());
            let lam = rat(l, 2);
            prop_assert_eq!(mu.shift(lam.clone()).pair(&p).unwrap(), mu.pair(&p.substitute_shifted(&-lam)).unwrap());
        }

        #[test]
        fn dilation_law(l in 1i64..4, p in arb_poly()) {
            let mu = MomentFunctional::meixner(&s0());
            let lam = rat(l, 3);
            prop_assert_eq!(mu.dilate(lam.clone()).unwrap().pair(&p).unwrap(), mu.pair(&p.substitute_scaled(&lam)).unwrap());
        }

        #[test]
        fn geronimus_round_trip(l in -3i64..3, c in 1i64..5, s in -5i64..5) {
            let mu = MomentFunctional::meixner(&s0());
            let lam = rat(l, 2);
            let g = mu.geronimus(lam.clone(), rat(c, 3), rat(s, 7));
            let back = g.christoffel(&Poly::linear_root(&lam));
            for n in 0..8 {
                prop_assert_eq!(back.moment(n).unwrap(), rat(c, 3) * mu.moment(n).unwrap());
            }
        }
    }
}
