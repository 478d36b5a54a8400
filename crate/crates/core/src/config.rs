//! Run configuration shared by the command line and JSON config files.
//!
//! Every key is optional. Missing parameters fall back to the reference set
//! `q = 2/5`, `b = 1/3`, `c = 3/2`, `t = 3/4`.

use std::path::{Path, PathBuf};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, parse_rational, pow, rat};
use crate::exact::Rational;
use crate::families::{check_base, FamilyKind, LaguerreParams, MeixnerParams, PolynomialFamily, N_MAX};
use crate::krall::{Theorem, TheoremInstance};
use crate::search::SearchBudget;

pub const DEFAULT_N: usize = 10;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    /// `q^α` for the q-Laguerre family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    /// Al-Salam–Carlitz parameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Point mass of the q-Laguerre II measure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f2: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f3: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masses: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_max: Option<usize>,
    /// Expected order for a conjecture B2 run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denom_power: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_search: Option<usize>,
    /// Fault injection, `"index=value"`: replaces `σ_index` or `β_index`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inject_sigma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inject_beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f; } )*
    };
}

impl RunConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Keys set in `other` win.
    pub fn overlay(mut self, other: RunConfig) -> Self {
        overlay!(self, other; family, theorem, q, b, c, t, a, alpha, k, m, n, id, f1, f2, f3, f,
            masses, h_max, order_max, order, d, denom_power, n_search, inject_sigma, inject_beta, out);
        self
    }

    /// Parses every rational and runs the degeneracy checks on whatever
    /// parameters are present.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("n", self.n), ("h_max", self.h_max), ("order_max", self.order_max), ("n_search", self.n_search)] {
            if v == Some(0) {
                return Err(Error::Parse(format!("{name} must be positive")));
            }
        }
        let q = self.q()?;
        check_base(&q)?;
        if let Some(b) = opt_rational(&self.b)? {
            for n in 1..=N_MAX as i64 {
                if (&b * pow(&q, n)).is_one() {
                    return Err(Error::DegenerateParams(format!("b = q^-{n}")));
                }
            }
        }
        if let Some(c) = opt_rational(&self.c)? {
            if c.is_zero() {
                return Err(Error::DegenerateParams("c = 0".into()));
            }
            for n in 0..=N_MAX as i64 {
                if c == -pow(&q, n) {
                    return Err(Error::DegenerateParams(format!("c = -q^{n}")));
                }
            }
        }
        if let Some(t) = opt_rational(&self.t)? {
            let p = LaguerreParams {
                q: q.clone(),
                t,
                alpha: self.alpha,
            };
            p.validated()?;
        }
        opt_rational(&self.a)?;
        opt_rational(&self.m)?;
        self.masses()?;
        if let Some(f) = &self.family {
            FamilyKind::from_name(f)?;
        }
        if let Some(t) = &self.theorem {
            t.parse::<Theorem>()?;
        }
        self.injection(&self.inject_sigma)?;
        self.injection(&self.inject_beta)?;
        Ok(())
    }

    pub fn q(&self) -> Result<Rational> {
        Ok(opt_rational(&self.q)?.unwrap_or_else(|| rat(2, 5)))
    }

    pub fn n(&self) -> usize {
        self.n.unwrap_or(DEFAULT_N)
    }

    pub fn meixner_params(&self) -> Result<MeixnerParams> {
        MeixnerParams::new(
            self.q()?,
            opt_rational(&self.b)?.unwrap_or_else(|| rat(1, 3)),
            opt_rational(&self.c)?.unwrap_or_else(|| rat(3, 2)),
        )
    }

    /// `alpha` alone fixes `t = q^α`; otherwise `t` defaults to `3/4`.
    pub fn laguerre_params(&self) -> Result<LaguerreParams> {
        let q = self.q()?;
        match (opt_rational(&self.t)?, self.alpha) {
            (None, Some(a)) => LaguerreParams::with_alpha(q, a),
            (t, alpha) => LaguerreParams {
                q,
                t: t.unwrap_or_else(|| rat(3, 4)),
                alpha,
            }
            .validated(),
        }
    }

    pub fn family(&self) -> Result<PolynomialFamily> {
        let kind = FamilyKind::from_name(self.family.as_deref().unwrap_or("q-meixner"))?;
        match kind {
            FamilyKind::QMeixner => Ok(PolynomialFamily::meixner(self.meixner_params()?)),
            FamilyKind::QLaguerre => Ok(PolynomialFamily::laguerre(self.laguerre_params()?)),
            FamilyKind::AlSalamCarlitz => {
                PolynomialFamily::alsalam_carlitz(opt_rational(&self.a)?.unwrap_or_else(|| rat(4, 3)), self.q()?)
            }
        }
    }

    pub fn theorem(&self) -> Result<Theorem> {
        self.theorem
            .as_deref()
            .ok_or_else(|| Error::Parse("missing theorem".into()))?
            .parse()
    }

    /// `k` defaults to 1, `alpha` to 1 and `m` to 1.
    pub fn theorem_instance(&self) -> Result<TheoremInstance> {
        let th = self.theorem()?;
        let k = self.k.unwrap_or(1);
        match th {
            Theorem::MeixnerI | Theorem::MeixnerII | Theorem::MeixnerIII => {
                TheoremInstance::meixner(th, self.meixner_params()?, k)
            }
            Theorem::LaguerreI => Ok(TheoremInstance::laguerre_i(self.laguerre_params()?, k)),
            Theorem::LaguerreII => {
                let alpha = self.alpha.unwrap_or(1);
                if alpha < 1 {
                    return Err(Error::DegenerateParams(format!("laguerre-ii needs alpha >= 1, got {alpha}")));
                }
                if self.t.is_some() {
                    self.laguerre_params()?;
                }
                let m = opt_rational(&self.m)?.unwrap_or_else(Rational::one);
                TheoremInstance::laguerre_ii(self.q()?, alpha as usize, m)
            }
        }
    }

    pub fn masses(&self) -> Result<Vec<Rational>> {
        match &self.masses {
            None => Ok(vec![Rational::one()]),
            Some(v) => v.iter().map(|s| parse_rational(s)).collect(),
        }
    }

    pub fn budget(&self) -> SearchBudget {
        SearchBudget {
            d: self.d,
            t: self.denom_power,
            n: self.n_search,
        }
    }

    /// `h_max`, or half of `order_max`.
    pub fn h_max(&self) -> Option<usize> {
        self.h_max.or(self.order_max.map(|o| (o / 2).max(1)))
    }

    pub fn injection(&self, v: &Option<String>) -> Result<Option<(usize, Rational)>> {
        let Some(s) = v else { return Ok(None) };
        let (i, val) = s
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("injection {s:?} is not index=value")))?;
        let i: usize = i.trim().parse().map_err(|_| Error::Parse(format!("bad index in {s:?}")))?;
        Ok(Some((i, parse_rational(val)?)))
    }

    /// Resolved parameters for reports.
    pub fn describe(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(o) = v.as_object_mut() {
            o.remove("out");
            if let Ok(q) = self.q() {
                o.insert("q".into(), format_rational(&q).into());
            }
        }
        v
    }
}

fn opt_rational(s: &Option<String>) -> Result<Option<Rational>> {
    s.as_deref().map(parse_rational).transpose()
}
