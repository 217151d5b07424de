//! Machine- and human-readable reports for problem files.
//!
//! JSON output contains no wall-clock data unless timings are requested,
//! so identical inputs give identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

use crate::degree::{
    global_degree, local_degree_direct, local_degree_trace, verify_with_fault, DegreeError, Fault, LocalDegree,
    TraceDegree,
};
use crate::field::FieldDescriptor;
use crate::gw::{invariants, GWClass, Verdict};
use crate::problem::Problem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Direct,
    Trace,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Trace => "trace",
        }
    }
}

/// How a run ended, most severe first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    NotEqual,
    Internal,
    Precondition,
    Undecided,
    Success,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ClassJson {
    pub diagonal: Vec<String>,
    pub rank: usize,
    pub det_square_class: String,
    pub signed_discriminant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hasse_witt: Option<BTreeMap<String, i32>>,
}

impl ClassJson {
    pub fn of(c: &GWClass) -> Self {
        let k = c.field();
        let inv = invariants(c);
        ClassJson {
            diagonal: c.format_entries(),
            rank: inv.rank,
            det_square_class: k.format_element(&inv.det_square_class),
            signed_discriminant: k.format_element(&inv.signed_discriminant(k)),
            signature: inv.signature,
            hasse_witt: inv.hasse_witt.map(|hw| hw.into_iter().map(|(v, s)| (v.to_string(), s)).collect()),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ErrorJson {
    pub kind: String,
    pub message: String,
}

impl ErrorJson {
    fn of(e: &DegreeError) -> Self {
        ErrorJson { kind: e.kind().to_string(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PipelineJson {
    pub method: &'static str,
    pub class: ClassJson,
    pub local_dim: usize,
    pub algebra_dim: usize,
    pub separating_form: String,
    /// Trace pipeline only: local dimension at the point above.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lifted_local_dim: Option<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(untagged)]
pub enum SideJson {
    Ok(PipelineJson),
    Err { error: ErrorJson },
}

impl SideJson {
    fn direct(r: &Result<LocalDegree, DegreeError>, vars: &[String]) -> Self {
        match r {
            Ok(d) => SideJson::Ok(PipelineJson {
                method: Method::Direct.name(),
                class: ClassJson::of(&d.class),
                local_dim: d.local_dim,
                algebra_dim: d.algebra_dim,
                separating_form: d.form.format(vars),
                lifted_local_dim: None,
            }),
            Err(e) => SideJson::Err { error: ErrorJson::of(e) },
        }
    }

    fn trace(r: &Result<TraceDegree, DegreeError>, vars: &[String]) -> Self {
        match r {
            Ok(t) => SideJson::Ok(PipelineJson {
                method: Method::Trace.name(),
                class: ClassJson::of(&t.class),
                local_dim: t.class.rank(),
                algebra_dim: t.lifted.algebra_dim,
                separating_form: t.lifted.form.format(vars),
                lifted_local_dim: Some(t.lifted.local_dim),
            }),
            Err(e) => SideJson::Err { error: ErrorJson::of(e) },
        }
    }

    fn outcome(&self) -> Outcome {
        match self {
            SideJson::Ok(_) => Outcome::Success,
            SideJson::Err { error } if error.kind == "Internal" => Outcome::Internal,
            SideJson::Err { .. } => Outcome::Precondition,
        }
    }

    pub fn class(&self) -> Option<&ClassJson> {
        match self {
            SideJson::Ok(p) => Some(&p.class),
            SideJson::Err { .. } => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Timings {
    pub direct: Option<f64>,
    pub trace: Option<f64>,
}

fn ms(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PointReport {
    pub label: String,
    pub point: String,
    pub residue_degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<SideJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<SideJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<SideJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Option<String>>,
    pub timings_ms: Option<Timings>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub field: String,
    pub variables: Vec<String>,
    pub polynomials: Vec<String>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<&'static str>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global: Option<SideOrGlobal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip)]
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
#[serde(untagged)]
pub enum SideOrGlobal {
    Ok { class: ClassJson, algebra_dim: usize },
    Err { error: ErrorJson },
}

/// Options shared by the problem-file commands.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub timings: bool,
    pub require_decided: bool,
    #[doc(hidden)]
    pub fault: Fault,
}

fn header(command: &'static str, p: &Problem, seed: u64) -> Report {
    Report {
        command,
        field: p.field.to_string(),
        variables: p.variables.clone(),
        polynomials: p.polynomials.iter().map(|f| f.to_string()).collect(),
        seed,
        method: None,
        points: Vec::new(),
        global: None,
        verdict: None,
        outcome: Outcome::Success,
    }
}

/// Fields where the invariants do not classify forms.
fn undecidable_field(k: &FieldDescriptor) -> bool {
    k.order().is_none() && k.is_extension()
}

pub fn degree_report(p: &Problem, method: Method, opts: RunOptions) -> Report {
    let seed = opts.seed.unwrap_or(p.seed);
    let mut report = header("degree", p, seed);
    report.method = Some(method.name());
    for np in &p.points {
        let start = std::time::Instant::now();
        let side = match method {
            Method::Direct => SideJson::direct(&local_degree_direct(&p.polynomials, &np.spec, seed), &p.variables),
            Method::Trace => SideJson::trace(&local_degree_trace(&p.polynomials, &np.spec, seed), &p.variables),
        };
        let elapsed = ms(start.elapsed());
        let mut outcome = side.outcome();
        if outcome == Outcome::Success && opts.require_decided && undecidable_field(&p.field) {
            outcome = Outcome::Undecided;
        }
        report.outcome = report.outcome.min(outcome);
        let timings = opts.timings.then_some(match method {
            Method::Direct => Timings { direct: Some(elapsed), trace: None },
            Method::Trace => Timings { direct: None, trace: Some(elapsed) },
        });
        report.points.push(PointReport {
            label: np.label.clone(),
            point: np.spec.format(),
            residue_degree: np.spec.degree_over(&p.field).unwrap_or(0),
            result: Some(side),
            lhs: None,
            rhs: None,
            verdict: None,
            timings_ms: timings,
        });
    }
    report
}

pub fn verify_report(p: &Problem, opts: RunOptions) -> Report {
    let seed = opts.seed.unwrap_or(p.seed);
    let mut report = header("verify", p, seed);
    let mut overall: Option<Verdict> = Some(Verdict::Equal);
    for np in &p.points {
        let (lhs, rhs, verdict, timings) = match verify_with_fault(&p.polynomials, &np.spec, seed, opts.fault) {
            Ok(r) => (
                SideJson::direct(&r.lhs, &p.variables),
                SideJson::trace(&r.rhs, &p.variables),
                r.verdict,
                Timings { direct: Some(ms(r.timings[0])), trace: Some(ms(r.timings[1])) },
            ),
            Err(e) => {
                let side = SideJson::Err { error: ErrorJson::of(&e) };
                (side.clone(), side, None, Timings { direct: None, trace: None })
            }
        };
        let mut outcome = lhs.outcome().min(rhs.outcome());
        outcome = match verdict {
            Some(Verdict::NotEqual) => Outcome::NotEqual,
            Some(Verdict::Undecided) => outcome.min(Outcome::Undecided),
            _ => outcome,
        };
        report.outcome = report.outcome.min(outcome);
        overall = match (overall, verdict) {
            (_, Some(Verdict::NotEqual)) | (Some(Verdict::NotEqual), _) => Some(Verdict::NotEqual),
            (None, _) | (_, None) => None,
            (Some(Verdict::Undecided), _) | (_, Some(Verdict::Undecided)) => Some(Verdict::Undecided),
            _ => Some(Verdict::Equal),
        };
        report.points.push(PointReport {
            label: np.label.clone(),
            point: np.spec.format(),
            residue_degree: np.spec.degree_over(&p.field).unwrap_or(0),
            result: None,
            lhs: Some(lhs),
            rhs: Some(rhs),
            verdict: Some(verdict.map(|v| v.to_string())),
            timings_ms: opts.timings.then_some(timings),
        });
    }
    if p.points.is_empty() {
        overall = None;
    }
    report.verdict = Some(overall.map_or_else(|| "Unavailable".to_string(), |v| v.to_string()));
    report
}

pub fn global_report(p: &Problem, opts: RunOptions) -> Report {
    let seed = opts.seed.unwrap_or(p.seed);
    let mut report = header("global", p, seed);
    report.global = Some(match global_degree(&p.polynomials) {
        Ok(g) => SideOrGlobal::Ok { class: ClassJson::of(&g.class), algebra_dim: g.algebra_dim },
        Err(e) => {
            report.outcome = if e.kind() == "Internal" { Outcome::Internal } else { Outcome::Precondition };
            SideOrGlobal::Err { error: ErrorJson::of(&e) }
        }
    });
    if report.outcome == Outcome::Success && opts.require_decided && undecidable_field(&p.field) {
        report.outcome = Outcome::Undecided;
    }
    report
}

/// Invariants of a hand-entered diagonal class.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct InvariantsReport {
    pub command: &'static str,
    pub field: String,
    pub class: ClassJson,
}

pub fn invariants_report(c: &GWClass) -> InvariantsReport {
    InvariantsReport { command: "invariants", field: c.field().to_string(), class: ClassJson::of(c) }
}

pub fn to_json<T: Serialize>(r: &T) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
    s.push('\n');
    s
}

fn hasse_witt_text(c: &ClassJson) -> String {
    match &c.hasse_witt {
        None => "n/a".into(),
        Some(hw) => {
            let bad: Vec<&str> = hw.iter().filter(|(_, &s)| s == -1).map(|(v, _)| v.as_str()).collect();
            if bad.is_empty() {
                "trivial".into()
            } else {
                format!("-1 at {}", bad.join(", "))
            }
        }
    }
}

fn class_rows(c: &ClassJson) -> Vec<(&'static str, String)> {
    vec![
        ("diagonal", format!("<{}>", c.diagonal.join(", "))),
        ("rank", c.rank.to_string()),
        ("det class", c.det_square_class.clone()),
        ("signature", c.signature.map_or("n/a".into(), |s| s.to_string())),
        ("hasse-witt", hasse_witt_text(c)),
    ]
}

fn side_rows(s: &SideJson) -> Vec<(&'static str, String)> {
    match s {
        SideJson::Ok(p) => {
            let mut rows = class_rows(&p.class);
            rows.push(("local dim", match p.lifted_local_dim {
                Some(l) => format!("{} = {} x {}", p.local_dim, p.local_dim / l.max(1), l),
                None => p.local_dim.to_string(),
            }));
            rows.push(("linear form", p.separating_form.clone()));
            rows
        }
        SideJson::Err { error } => vec![("error", error.kind.clone()), ("", error.message.clone())],
    }
}

fn preamble(out: &mut String, r: &Report) {
    let _ = writeln!(out, "field     {}", r.field);
    let _ = writeln!(out, "system    {}", r.polynomials.join(", "));
    let _ = writeln!(out, "seed      {}", r.seed);
}

pub fn to_text(r: &Report) -> String {
    let mut out = String::new();
    preamble(&mut out, r);
    if let Some(g) = &r.global {
        out.push('\n');
        match g {
            SideOrGlobal::Ok { class, algebra_dim } => {
                for (name, value) in class_rows(class) {
                    let _ = writeln!(out, "  {name:<12} {value}");
                }
                let _ = writeln!(out, "  {:<12} {}", "algebra dim", algebra_dim);
            }
            SideOrGlobal::Err { error } => {
                let _ = writeln!(out, "  error        {}: {}", error.kind, error.message);
            }
        }
    }
    for pt in &r.points {
        let _ = writeln!(out, "\n{}: {}, residue degree {}", pt.label, pt.point, pt.residue_degree);
        if let Some(side) = &pt.result {
            let _ = writeln!(out, "  method       {}", r.method.unwrap_or("direct"));
            for (name, value) in side_rows(side) {
                let _ = writeln!(out, "  {name:<12} {value}");
            }
        }
        if let (Some(lhs), Some(rhs)) = (&pt.lhs, &pt.rhs) {
            let (a, b) = (side_rows(lhs), side_rows(rhs));
            let width = a.iter().map(|(_, v)| v.chars().count()).max().unwrap_or(0).max(6) + 2;
            let _ = writeln!(out, "  {:<12} {:<width$}trace", "", "direct");
            for i in 0..a.len().max(b.len()) {
                let name = a.get(i).or(b.get(i)).map_or("", |r| r.0);
                let left = a.get(i).map_or("", |r| r.1.as_str());
                let right = b.get(i).map_or("", |r| r.1.as_str());
                let _ = writeln!(out, "  {name:<12} {left:<width$}{right}").map(|_| ());
            }
            if let Some(v) = &pt.verdict {
                let _ = writeln!(out, "  verdict      {}", v.as_deref().unwrap_or("Unavailable"));
            }
        }
        if let Some(t) = &pt.timings_ms {
            let show = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.3} ms"));
            let _ = writeln!(out, "  timings      direct {}, trace {}", show(t.direct), show(t.trace));
        }
    }
    if let Some(v) = &r.verdict {
        let _ = writeln!(out, "\nverdict: {v}");
    }
    // trim trailing spaces left by column padding
    out.lines().map(|l| l.trim_end()).collect::<Vec<_>>().join("\n") + "\n"
}

pub fn invariants_text(r: &InvariantsReport) -> String {
    let mut out = format!("field     {}\n", r.field);
    for (name, value) in class_rows(&r.class) {
        let _ = writeln!(out, "  {name:<12} {value}");
    }
    let _ = writeln!(out, "  {:<12} {}", "signed disc", r.class.signed_discriminant);
    out
}
