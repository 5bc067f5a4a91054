//! Paired text and JSON rendering, so both modes carry the same numbers.

use std::fmt::Display;

use anyhow::{anyhow, Result};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use qalt::laurent::{Gap, HalfLaurent};
use qalt::qa::{CertifyOutcome, QAVerdict, Witness};
use qalt::HalfInt;

pub struct Output {
    json: bool,
    text: Vec<String>,
    fields: Map<String, Value>,
}

impl Output {
    pub fn new(json: bool) -> Self {
        Output {
            json,
            text: Vec::new(),
            fields: Map::new(),
        }
    }

    pub fn line(&mut self, key: &str, text: impl Display, value: Value) {
        self.text.push(format!("{key}: {text}"));
        self.fields.insert(key.to_string(), value);
    }

    pub fn print(self) -> Result<()> {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&Value::Object(self.fields))?);
        } else {
            for l in self.text {
                println!("{l}");
            }
        }
        Ok(())
    }
}

/// A determinant as a JSON number when it fits, a decimal string otherwise.
pub fn big(n: &num_bigint::BigInt) -> Value {
    n.to_u64().map_or_else(|| json!(n.to_string()), |v| json!(v))
}

pub fn det_u64(n: &num_bigint::BigInt) -> Result<u64> {
    n.to_u64().ok_or_else(|| anyhow!("determinant {n} does not fit in 64 bits"))
}

pub fn gaps_text(gaps: &[Gap]) -> String {
    let parts: Vec<String> = gaps.iter().map(|g| format!("from t^{} length {}", g.start, g.length)).collect();
    format!("{} [{}]", gaps.len(), parts.join(", "))
}

fn half(h: HalfInt) -> Value {
    serde_json::to_value(h).expect("half-integers serialize")
}

/// det, breadth and gaps of a Jones polynomial.
pub fn polynomial_summary(o: &mut Output, v: &HalfLaurent) -> Result<()> {
    let det = qalt::bracket::jones_determinant(v);
    o.line("det", &det, big(&det));
    let r = v.analyze(HalfInt::ONE)?;
    o.line("breadth", r.breadth, half(r.breadth));
    o.line("gaps", gaps_text(&r.gaps), serde_json::to_value(&r.gaps)?);
    Ok(())
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Breadth { breadth, det } => format!("breadth {breadth}, det {det}"),
        Witness::Gaps { gaps } => format!("gaps {}", gaps_text(gaps)),
        Witness::SignBreak { exponent } => format!("sign break at t^{exponent}"),
    }
}

pub fn verdict(o: &mut Output, v: &QAVerdict) {
    let mut text = format!("{:?}", v.status);
    for r in &v.reasons {
        text.push_str(&format!("\n  - {:?}: {} ({})", r.rule, r.citation, witness_text(&r.witness)));
    }
    o.line("verdict", text, serde_json::to_value(v).expect("verdicts serialize"));
}

pub fn certificate(json: bool, outcome: &CertifyOutcome) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(outcome)?);
        return Ok(());
    }
    match outcome {
        CertifyOutcome::Certified { certificate, nodes } => {
            println!("result: certified");
            println!("det: {}", certificate.tree.det());
            println!("tree nodes: {}", certificate.tree.node_count());
            println!("search nodes: {nodes}");
            println!("certificate: {}", serde_json::to_string(certificate)?);
        }
        CertifyOutcome::Unknown { nodes } => {
            println!("result: unknown");
            println!("search nodes: {nodes}");
        }
    }
    Ok(())
}
