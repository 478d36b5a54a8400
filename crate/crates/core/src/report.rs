//! Verification suites behind the command line, and report output.
//!
//! A run yields a [`Report`]: named pass/fail checks plus a data payload.
//! The JSON payload is deterministic; wall-clock time goes to a sidecar
//! file so that identical configs give byte-identical reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::dop::{dop_by_id, dop_catalog, verify_dop};
use crate::error::{Error, Result};
use crate::exact::rational::{approx, format_rational};
use crate::exact::Rational;
use crate::families::{derive_recurrence, family_operator, FamilyKind};
use crate::krall::{check_consistency, theorem_catalog, verify_eigen, KrallConstruction};
use crate::moments::{gram_csv, measure_catalog, verify_orthogonality};
use crate::search::{check_conjecture_a, check_conjecture_b1, check_conjecture_b2, ConjectureReport, Outcome};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INVALID_INPUT: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Families,
    VerifyDop,
    BuildKrall,
    VerifyEigen,
    VerifyOrthogonality,
    ConjectureA,
    ConjectureB1,
    ConjectureB2,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Families => "families",
            Command::VerifyDop => "verify-dop",
            Command::BuildKrall => "build-krall",
            Command::VerifyEigen => "verify-eigen",
            Command::VerifyOrthogonality => "verify-orthogonality",
            Command::ConjectureA => "conjecture-a",
            Command::ConjectureB1 => "conjecture-b1",
            Command::ConjectureB2 => "conjecture-b2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub data: Value,
    /// Exact values repeated in the text summary with decimals.
    #[serde(skip)]
    pub highlights: Vec<(String, Rational)>,
    #[serde(skip)]
    pub attachments: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            pass: true,
            checks: Vec::new(),
            data: Value::Object(Default::default()),
            highlights: Vec::new(),
            attachments: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: Option<Value>) {
        self.pass &= pass;
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail,
        });
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report data serializes");
        self.data.as_object_mut().expect("data is an object").insert(key.to_string(), v);
    }

    pub fn exit_code(&self) -> u8 {
        if self.pass {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILED
        }
    }

    /// Deterministic JSON: struct fields in declaration order, map keys sorted.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{} {}", self.command, verdict);
        for c in &self.checks {
            let _ = writeln!(s, "  {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
        }
        if !self.highlights.is_empty() {
            let _ = writeln!(s, "values (decimals are approximate, exact value is authoritative):");
            for (name, v) in &self.highlights {
                let _ = writeln!(s, "  {name} = {} (~{:.6e})", format_rational(v), approx(v));
            }
        }
        s
    }
}

/// Where report files go. Without a directory nothing is written.
#[derive(Clone, Debug, Default)]
pub struct Emitter {
    dir: Option<PathBuf>,
}

impl Emitter {
    pub fn new(dir: Option<&Path>) -> Result<Self> {
        if let Some(d) = dir {
            std::fs::create_dir_all(d)?;
        }
        Ok(Emitter {
            dir: dir.map(Path::to_path_buf),
        })
    }

    /// Writes `<command>.json`, `<command>.txt`, `<command>.elapsed.json` and
    /// attachments. Returns the written paths.
    pub fn emit(&self, report: &Report, elapsed: f64) -> Result<Vec<PathBuf>> {
        let Some(dir) = &self.dir else {
            return Ok(Vec::new());
        };
        let mut files = vec![
            (format!("{}.json", report.command), report.to_json()),
            (format!("{}.txt", report.command), report.summary()),
            (
                format!("{}.elapsed.json", report.command),
                serde_json::to_string(&json!({ "elapsed": elapsed }))? + "\n",
            ),
        ];
        files.extend(report.attachments.iter().cloned());
        let mut out = Vec::new();
        for (name, body) in files {
            let p = dir.join(name);
            std::fs::write(&p, body)?;
            out.push(p);
        }
        Ok(out)
    }
}

/// Exit code for an error: 2 for bad input, 1 for a failed check.
pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::CrossCheckFailed { .. }
        | Error::NotQuasiDefinite(_)
        | Error::DenominatorVanishes(_)
        | Error::ReconstructionFailed(_)
        | Error::NonPolynomial
        | Error::SingularSystem { .. } => EXIT_CHECK_FAILED,
        _ => EXIT_INVALID_INPUT,
    }
}

/// Validates the config and runs one suite. Returns the report and the
/// elapsed wall-clock seconds.
pub fn run_suite(cmd: Command, cfg: &RunConfig) -> Result<(Report, f64)> {
    cfg.validate()?;
    let start = Instant::now();
    let report = match cmd {
        Command::Families => families(cfg)?,
        Command::VerifyDop => verify_dops(cfg)?,
        Command::BuildKrall => build_krall(cfg)?,
        Command::VerifyEigen => eigen(cfg)?,
        Command::VerifyOrthogonality => orthogonality(cfg)?,
        Command::ConjectureA | Command::ConjectureB1 | Command::ConjectureB2 => {
            let r = conjecture(cmd, cfg)?;
            let elapsed = r.elapsed;
            return Ok((conjecture_report(cmd, cfg, r), elapsed));
        }
    };
    Ok((report, start.elapsed().as_secs_f64()))
}

fn families(cfg: &RunConfig) -> Result<Report> {
    let fam = cfg.family()?;
    let n = cfg.n();
    let mut rep = Report::new(Command::Families.name(), cfg.describe());
    let polys = fam.polys(n)?;
    rep.set("family", fam.kind());
    rep.set("polys", &polys);
    let rec = derive_recurrence(&fam, n)?;
    rep.check("three-term recurrence regenerates p_n", rec.regenerate(n)? == polys, None);
    rep.set("recurrence", &rec);
    match family_operator(&fam) {
        Ok(op) => {
            let mut eig = Vec::new();
            let mut bad = Vec::new();
            for (i, p) in polys.iter().enumerate() {
                let l = fam.eigenvalue(i)?;
                if op.apply_poly(p).ok() != Some(p.scale(&l)) {
                    bad.push(i);
                }
                eig.push(format_rational(&l));
            }
            rep.check("second order eigen equation", bad.is_empty(), (!bad.is_empty()).then(|| json!({ "failed_n": bad })));
            rep.set("eigenvalues", eig);
            rep.set("operator", &op);
        }
        Err(Error::UnsupportedFamily(_)) => {}
        Err(e) => return Err(e),
    }
    if fam.kind() != FamilyKind::AlSalamCarlitz {
        if let Some(p) = polys.get(1) {
            rep.highlights.push(("p_1(1)".into(), p.eval(&Rational::from_integer(1.into()))));
        }
    }
    Ok(rep)
}

fn verify_dops(cfg: &RunConfig) -> Result<Report> {
    let fam = cfg.family()?;
    let n = cfg.n();
    let specs = match &cfg.id {
        Some(id) => vec![dop_by_id(&fam, id)?],
        None => dop_catalog(&fam)?,
    };
    let inject = cfg.injection(&cfg.inject_sigma)?;
    let mut rep = Report::new(Command::VerifyDop.name(), cfg.describe());
    let mut reports = Vec::new();
    for spec in specs {
        let spec = match &inject {
            Some((i, v)) => spec.with_sigma(*i, v.clone()),
            None => spec,
        };
        let r = verify_dop(&spec, &fam, n)?;
        let failed: Vec<&crate::dop::DopRow> = r.rows.iter().filter(|row| !row.pass).collect();
        rep.check(
            format!("{} closed form equals defining action, n <= {n}", r.spec_id),
            failed.is_empty(),
            (!failed.is_empty()).then(|| serde_json::to_value(&failed).expect("rows serialize")),
        );
        rep.check(format!("{} lies in the operator algebra", r.spec_id), r.in_algebra, None);
        if let Some(g) = r.geometric_consistent {
            rep.check(format!("{} geometric eigenvalue form", r.spec_id), g, None);
        }
        reports.push(r);
    }
    rep.set("reports", &reports);
    Ok(rep)
}

fn construction(cfg: &RunConfig, upto: usize) -> Result<(crate::krall::TheoremInstance, KrallConstruction)> {
    let inst = cfg.theorem_instance()?;
    let mut kc = theorem_catalog(&inst)?.build(upto)?;
    if let Some((i, v)) = cfg.injection(&cfg.inject_beta)? {
        if i == 0 || i > upto {
            return Err(Error::Parse(format!("inject_beta index {i} outside 1..={upto}")));
        }
        kc = kc.with_beta(i, v)?;
    }
    Ok((inst, kc))
}

fn consistency_checks(rep: &mut Report, kc: &KrallConstruction, n: usize) -> Result<()> {
    let c = check_consistency(kc, n)?;
    rep.check("gamma_{n+1} = P2(theta_n)", c.gamma, None);
    rep.check("lambda_n - lambda_{n-1} = sigma_n gamma_n", c.lambda_step, None);
    rep.check("lambda_{n+1} + lambda_n = P1(theta_n)", c.lambda_sum, None);
    rep.check("beta_n = eps_n gamma_{n+1}/gamma_n and q_n = p_n + beta_n p_{n-1}", c.beta, None);
    rep.check("D_q P1 relation to P2", c.p1_derivative, None);
    Ok(())
}

fn build_krall(cfg: &RunConfig) -> Result<Report> {
    let n = cfg.n();
    let (inst, kc) = construction(cfg, n)?;
    let mut rep = Report::new(Command::BuildKrall.name(), cfg.describe());
    rep.set("instance", inst.to_string());
    rep.set("construction", kc.summary());
    consistency_checks(&mut rep, &kc, n)?;
    if n >= 1 {
        rep.highlights.push(("beta_1".into(), kc.beta(1).clone()));
    }
    rep.highlights.push(("lambda_0".into(), kc.lambda(0).clone()));
    Ok(rep)
}

fn eigen(cfg: &RunConfig) -> Result<Report> {
    let n = cfg.n();
    let (inst, kc) = construction(cfg, n)?;
    let mut rep = Report::new(Command::VerifyEigen.name(), cfg.describe());
    rep.set("instance", inst.to_string());
    let ev = verify_eigen(&kc, n);
    let failed: Vec<_> = ev.rows.iter().filter(|r| !r.pass).collect();
    rep.check(
        format!("D^Q q_n = lambda_n q_n, n <= {n}"),
        failed.is_empty() && ev.polynomial_output,
        (!failed.is_empty()).then(|| serde_json::to_value(&failed).expect("rows serialize")),
    );
    rep.check(
        format!("order of D^Q is {}", ev.expected_order),
        ev.order_matches,
        Some(json!({ "order": ev.order })),
    );
    consistency_checks(&mut rep, &kc, n)?;
    rep.set("eigen", &ev);
    rep.set("lambda", kc.lambdas().iter().map(format_rational).collect::<Vec<_>>());
    Ok(rep)
}

fn orthogonality(cfg: &RunConfig) -> Result<Report> {
    let n = cfg.n.unwrap_or(8);
    let (inst, kc) = construction(cfg, n)?;
    let rho = measure_catalog(&inst)?;
    let o = verify_orthogonality(&rho, kc.q_polys(), n)?;
    let mut rep = Report::new(Command::VerifyOrthogonality.name(), cfg.describe());
    rep.set("instance", inst.to_string());
    rep.set("measure", rho.provenance());
    rep.check(format!("Gram matrix diagonal with nonzero diagonal, n, m <= {n}"), o.diagonal, None);
    rep.check("Hankel orthogonal polynomials equal monic q_n", o.hankel_matches, None);
    rep.set("hankel_signs", &o.hankel_signs);
    rep.set(
        "gram_diagonal",
        (0..o.gram.len()).map(|i| format_rational(&o.gram[i][i])).collect::<Vec<_>>(),
    );
    rep.highlights.push(("<rho, q_0^2>".into(), o.gram[0][0].clone()));
    rep.attachments.push(("gram.csv".into(), gram_csv(&o.gram)));
    Ok(rep)
}

fn conjecture(cmd: Command, cfg: &RunConfig) -> Result<ConjectureReport> {
    let budget = cfg.budget();
    let h_max = cfg.h_max();
    match cmd {
        Command::ConjectureA => check_conjecture_a(
            cfg.f1.as_deref().unwrap_or(&[]),
            cfg.f2.as_deref().unwrap_or(&[]),
            cfg.f3.as_deref().unwrap_or(&[]),
            &cfg.meixner_params()?,
            h_max,
            &budget,
        ),
        Command::ConjectureB1 => check_conjecture_b1(cfg.f.as_deref().unwrap_or(&[]), &cfg.laguerre_params()?, h_max, &budget),
        Command::ConjectureB2 => {
            let alpha = cfg.alpha.unwrap_or(2);
            if alpha < 0 {
                return Err(Error::DegenerateParams(format!("alpha = {alpha} must be nonnegative")));
            }
            check_conjecture_b2(
                cfg.f.as_deref().unwrap_or(&[]),
                alpha as usize,
                &cfg.masses()?,
                &cfg.q()?,
                cfg.order,
                h_max,
                &budget,
            )
        }
        _ => unreachable!("not a conjecture command"),
    }
}

fn conjecture_report(cmd: Command, cfg: &RunConfig, r: ConjectureReport) -> Report {
    let mut rep = Report::new(cmd.name(), cfg.describe());
    match r.outcome {
        Outcome::NotQuasiDefinite => {
            // no orthogonal polynomials: nothing to refute
            rep.check("functional is quasi-definite", true, Some(json!({ "quasi_definite": false })));
        }
        Outcome::Found | Outcome::NotFoundWithinAnsatz => {
            let name = match r.conjectured_order {
                Some(o) => format!("minimal order within ansatz equals {o}"),
                None => "operator found within ansatz".to_string(),
            };
            let pass = match r.conjectured_order {
                Some(_) => r.agrees(),
                None => r.found_order.is_some(),
            };
            rep.check(name, pass, Some(json!({ "found_order": r.found_order, "outcome": r.outcome })));
        }
    }
    rep.data = r.comparable();
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new("empty", json!({}));
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["pass"], true);
        assert_eq!(v["checks"].as_array().unwrap().len(), 0);
        assert_eq!(r.exit_code(), EXIT_PASS);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code_for(&Error::Parse("x".into())), EXIT_INVALID_INPUT);
        assert_eq!(exit_code_for(&Error::DegenerateParams("x".into())), EXIT_INVALID_INPUT);
        assert_eq!(exit_code_for(&Error::NotQuasiDefinite(2)), EXIT_CHECK_FAILED);
    }

    #[test]
    fn summary_marks_decimals() {
        let mut r = Report::new("x", json!({}));
        r.check("a", false, None);
        r.highlights.push(("v".into(), crate::exact::rational::rat(1, 3)));
        let s = r.summary();
        assert!(s.starts_with("x FAIL"));
        assert!(s.contains("1/3 (~3.333333e-1)"));
        assert!(s.contains("approximate"));
        assert_eq!(r.exit_code(), EXIT_CHECK_FAILED);
    }
}
