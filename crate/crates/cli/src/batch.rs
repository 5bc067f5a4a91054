//! Batch mode: one PD code per line, entries processed in parallel, output in
//! input order.

use std::fmt::Write as _;
use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use qalt::bracket::{jones, jones_determinant, kauffman_bracket};
use qalt::corpus::parse_named_line;
use qalt::laurent::Gap;
use qalt::qa::{certify, goeritz_determinant, obstruct, Budget, Certificate, CertifyOutcome, QAVerdict, Status};
use qalt::tait::SignedPlanarGraph;
use qalt::{parse_pd, HalfInt};

pub struct Options {
    pub certify: bool,
    pub prime: bool,
    pub torus_2n: bool,
    pub budget: Budget,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub jones_ms: f64,
    pub certify_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Checks {
    pub det_routes_agree: bool,
    /// `None` for split diagrams, which have no checkerboard graph here.
    pub gamma_matches_bracket: Option<bool>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Record {
    Ok {
        name: String,
        line: usize,
        crossings: usize,
        det: u64,
        breadth: HalfInt,
        gaps: Vec<Gap>,
        /// Missing when the determinant is zero.
        verdict: Option<QAVerdict>,
        certified: Option<bool>,
        certificate: Option<Certificate>,
        checks: Checks,
        timings: Timings,
    },
    Error {
        name: String,
        line: usize,
        error: String,
    },
}

#[derive(Debug, Default, Serialize)]
pub struct Summary {
    pub entries: usize,
    pub errors: usize,
    pub not_qa: usize,
    pub inconclusive: usize,
    pub certified: usize,
    pub unknown: usize,
    pub failed_checks: usize,
}

#[derive(Debug, Serialize)]
pub struct BatchReport {
    pub entries: Vec<Record>,
    pub summary: Summary,
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn process(name: String, line: usize, pd: &str, opts: &Options) -> Record {
    let fail = |name: String, error: String| Record::Error { name, line, error };
    let d = match parse_pd(pd) {
        Ok(d) => d,
        Err(e) => return fail(name, e.to_string()),
    };
    let start = Instant::now();
    let v = jones(&d);
    let jones_ms = ms(start);
    let Some(det) = jones_determinant(&v).to_u64() else {
        return fail(name, "determinant does not fit in 64 bits".into());
    };
    let report = match v.analyze(HalfInt::ONE) {
        Ok(r) => r,
        Err(e) => return fail(name, e.to_string()),
    };
    let verdict = obstruct(&v, det, opts.prime, opts.torus_2n).ok();
    let connected = d.is_connected();
    let checks = Checks {
        det_routes_agree: !connected || goeritz_determinant(&d) == det,
        gamma_matches_bracket: SignedPlanarGraph::checkerboard(&d)
            .ok()
            .map(|(g, _)| g.gamma() == kauffman_bracket(&d)),
    };
    let (mut certified, mut certificate, mut certify_ms) = (None, None, None);
    if opts.certify && connected {
        let start = Instant::now();
        match certify(&d, opts.budget) {
            Ok(CertifyOutcome::Certified { certificate: c, .. }) => {
                certified = Some(true);
                certificate = Some(c);
            }
            Ok(CertifyOutcome::Unknown { .. }) => certified = Some(false),
            Err(e) => return fail(name, e.to_string()),
        }
        certify_ms = Some(ms(start));
    }
    Record::Ok {
        name,
        line,
        crossings: d.crossing_count(),
        det,
        breadth: report.breadth,
        gaps: report.gaps,
        verdict,
        certified,
        certificate,
        checks,
        timings: Timings { jones_ms, certify_ms },
    }
}

pub fn run(text: &str, opts: &Options) -> BatchReport {
    let lines: Vec<(usize, Option<&str>, &str)> = text
        .lines()
        .enumerate()
        .filter_map(|(i, l)| parse_named_line(l).map(|(name, pd)| (i + 1, name, pd)))
        .collect();
    let entries: Vec<Record> = lines
        .par_iter()
        .map(|&(line, name, pd)| {
            let name = name.map_or_else(|| format!("line {line}"), str::to_string);
            process(name, line, pd, opts)
        })
        .collect();
    let mut summary = Summary {
        entries: entries.len(),
        ..Summary::default()
    };
    for r in &entries {
        match r {
            Record::Error { .. } => summary.errors += 1,
            Record::Ok {
                verdict,
                certified,
                checks,
                ..
            } => {
                match verdict.as_ref().map(|v| v.status) {
                    Some(Status::NotQA) => summary.not_qa += 1,
                    Some(Status::Inconclusive) => summary.inconclusive += 1,
                    None => {}
                }
                match certified {
                    Some(true) => summary.certified += 1,
                    Some(false) => summary.unknown += 1,
                    None => {}
                }
                if !checks.det_routes_agree || checks.gamma_matches_bracket == Some(false) {
                    summary.failed_checks += 1;
                }
            }
        }
    }
    BatchReport { entries, summary }
}

impl BatchReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for r in &self.entries {
            match r {
                Record::Error { name, line, error } => {
                    let _ = writeln!(s, "{name} (line {line}): error: {error}");
                }
                Record::Ok {
                    name,
                    det,
                    breadth,
                    gaps,
                    verdict,
                    certified,
                    checks,
                    ..
                } => {
                    let status = verdict.as_ref().map_or("-".to_string(), |v| format!("{:?}", v.status));
                    let rules: Vec<String> = verdict
                        .iter()
                        .flat_map(|v| &v.reasons)
                        .map(|r| format!("{:?}: {}", r.rule, r.citation))
                        .collect();
                    let cert = match certified {
                        Some(true) => " certified",
                        Some(false) => " unknown",
                        None => "",
                    };
                    let ok = checks.det_routes_agree && checks.gamma_matches_bracket != Some(false);
                    let _ = write!(
                        s,
                        "{name}: det {det}, breadth {breadth}, gaps {}, {status}{cert}, checks {}",
                        gaps.len(),
                        if ok { "ok" } else { "FAILED" }
                    );
                    for r in rules {
                        let _ = write!(s, "\n  - {r}");
                    }
                    s.push('\n');
                }
            }
        }
        let t = &self.summary;
        let _ = writeln!(
            s,
            "entries {}, errors {}, NotQA {}, inconclusive {}, certified {}, unknown {}, failed checks {}",
            t.entries, t.errors, t.not_qa, t.inconclusive, t.certified, t.unknown, t.failed_checks
        );
        s
    }
}
