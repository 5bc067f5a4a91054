//! Quasi-alternating obstructions, certification by determinant-additive
//! smoothing trees, and the Kanenobu knot family.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, Smoothing};
use crate::laurent::{Gap, HalfInt, HalfLaurent, LaurentError};
use crate::tait::SignedPlanarGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QaError {
    #[error("the zero polynomial is not a Jones polynomial")]
    ZeroPolynomial,
    #[error("determinant must be at least 1")]
    ZeroDeterminant,
    #[error("diagram is split or disconnected")]
    SplitDiagram,
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    NotQA,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    BreadthExceedsDet,
    GapInPrimeKnot,
    ManyGaps,
    SmallBreadth,
    NotAlternating,
}

impl Rule {
    /// Human-readable statement of the obstruction.
    pub fn citation(self) -> &'static str {
        match self {
            Rule::BreadthExceedsDet => "quasi-alternating links satisfy breadth(V) <= det",
            Rule::GapInPrimeKnot => {
                "the Jones polynomial of a prime quasi-alternating link other than a (2,n)-torus link has no gap"
            }
            Rule::ManyGaps => {
                "a quasi-alternating Jones polynomial with more than one gap is that of a connected sum of Hopf links"
            }
            Rule::SmallBreadth => {
                "quasi-alternating links with breadth(V) <= 3 are the unknot, the Hopf link or the trefoil"
            }
            Rule::NotAlternating => "quasi-alternating Jones polynomials alternate in sign",
        }
    }
}

/// Evidence for a rule firing; each variant can be re-checked from `V` and `det`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Breadth { breadth: HalfInt, det: u64 },
    Gaps { gaps: Vec<Gap> },
    SignBreak { exponent: HalfInt },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub rule: Rule,
    pub citation: String,
    pub witness: Witness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assumptions {
    pub prime: bool,
    pub torus_2n: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QAVerdict {
    pub status: Status,
    pub reasons: Vec<Reason>,
    pub assumptions: Assumptions,
}

/// Run every obstruction against a Jones polynomial and determinant.
/// `prime` and `torus_2n` are trusted, not checked.
pub fn obstruct(v: &HalfLaurent, det: u64, prime: bool, torus_2n: bool) -> Result<QAVerdict, QaError> {
    if v.is_zero() {
        return Err(QaError::ZeroPolynomial);
    }
    if det == 0 {
        return Err(QaError::ZeroDeterminant);
    }
    let report = v.analyze(HalfInt::ONE)?;
    let breadth = report.breadth;
    let mut reasons = Vec::new();
    let mut fire = |rule: Rule, witness: Witness| {
        reasons.push(Reason {
            rule,
            citation: rule.citation().to_string(),
            witness,
        })
    };
    // breadth is a whole number of steps because the support is on one lattice
    let breadth_steps = (breadth.0 / 2) as u64;
    if breadth_steps > det {
        fire(Rule::BreadthExceedsDet, Witness::Breadth { breadth, det });
    }
    if prime && !torus_2n && report.gap_count() >= 1 {
        fire(Rule::GapInPrimeKnot, Witness::Gaps { gaps: report.gaps.clone() });
    }
    if report.gap_count() >= 2 && !is_hopf_power(v) {
        fire(Rule::ManyGaps, Witness::Gaps { gaps: report.gaps.clone() });
    }
    if breadth_steps <= 3 && !(1..=3).contains(&det) {
        fire(Rule::SmallBreadth, Witness::Breadth { breadth, det });
    }
    if !report.alternating {
        fire(
            Rule::NotAlternating,
            Witness::SignBreak {
                exponent: first_sign_break(v).expect("non-alternating polynomial has a break"),
            },
        );
    }
    Ok(QAVerdict {
        status: if reasons.is_empty() {
            Status::Inconclusive
        } else {
            Status::NotQA
        },
        reasons,
        assumptions: Assumptions { prime, torus_2n },
    })
}

/// `±t^r (1 + t^2)^k`: a product of Hopf-link Jones polynomials up to a
/// monomial.
pub fn is_hopf_power(v: &HalfLaurent) -> bool {
    let Some(lo) = v.min_degree() else {
        return false;
    };
    let hopf = HalfLaurent::from_int_terms(&[(0, 1), (2, 1)]);
    let mut rest = v.shift(-lo);
    while rest.len() > 1 {
        match rest.div_exact(&hopf) {
            Some(q) => rest = q,
            None => return false,
        }
    }
    rest.is_monomial() && rest.l1_norm().is_one()
}

/// First lattice position whose sign breaks the alternating pattern.
fn first_sign_break(v: &HalfLaurent) -> Option<HalfInt> {
    let lo = v.min_degree()?;
    let first_sign = v.coefficient(lo) > BigInt::from(0);
    v.terms().find_map(|(e, c)| {
        let steps = (e - lo).0 / 2;
        let expected = first_sign == (steps % 2 == 0);
        ((c > &BigInt::from(0)) != expected).then_some(e)
    })
}

/// Search limits for [`certify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_depth: usize,
    pub max_nodes: usize,
    pub simplify_passes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_depth: 24,
            max_nodes: 100_000,
            simplify_passes: 50,
        }
    }
}

impl Budget {
    /// Defaults, with `QALT_BUDGET_NODES` overriding `max_nodes` when set to
    /// a valid number.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(n) = std::env::var("QALT_BUDGET_NODES").ok().and_then(|s| s.trim().parse().ok()) {
            b.max_nodes = n;
        }
        b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertNode {
    /// Simplifies to the crossingless unknot.
    Leaf { diagram: Diagram },
    /// `det(reduced) = det(child 0) + det(child 1)`, children being the
    /// A- and B-smoothings of `reduced` at `crossing`.
    Node {
        diagram: Diagram,
        reduced: Diagram,
        crossing: usize,
        det: u64,
        children: Box<[CertNode; 2]>,
    },
}

impl CertNode {
    pub fn diagram(&self) -> &Diagram {
        match self {
            CertNode::Leaf { diagram } | CertNode::Node { diagram, .. } => diagram,
        }
    }

    pub fn det(&self) -> u64 {
        match self {
            CertNode::Leaf { .. } => 1,
            CertNode::Node { det, .. } => *det,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            CertNode::Leaf { .. } => 1,
            CertNode::Node { children, .. } => 1 + children.iter().map(CertNode::node_count).sum::<usize>(),
        }
    }
}

/// A smoothing tree proving membership in the quasi-alternating class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub root: Diagram,
    pub tree: CertNode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CertifyOutcome {
    Certified { certificate: Certificate, nodes: usize },
    /// The search gave up; this says nothing about the link.
    Unknown { nodes: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("certificate root differs from its tree's diagram")]
    RootMismatch,
    #[error("leaf {0} does not simplify to the unknot")]
    NotUnknot(String),
    #[error("node {diagram}: reduction does not match simplification")]
    BadReduction { diagram: String },
    #[error("node {diagram}: child {index} is not the expected smoothing")]
    BadChild { diagram: String, index: usize },
    #[error("node {diagram}: det {det} != {d0} + {d1}")]
    NotAdditive { diagram: String, det: u64, d0: u64, d1: u64 },
    #[error("node {diagram}: crossing {crossing} out of range")]
    BadCrossing { diagram: String, crossing: usize },
}

/// Determinant via the Goeritz matrix; 0 for split or disconnected diagrams.
pub fn goeritz_determinant(d: &Diagram) -> u64 {
    match SignedPlanarGraph::checkerboard(d) {
        Ok((g, _)) => g.goeritz_det().to_u64().expect("determinant fits in u64"),
        Err(_) => 0,
    }
}

fn is_leaf(r: &Diagram) -> bool {
    r.crossing_count() == 0 && r.component_count() == 1
}

struct Search {
    budget: Budget,
    nodes: usize,
    exhausted: bool,
    solved: HashMap<String, (usize, u64, [CertNode; 2])>,
    /// Largest remaining depth at which each diagram has already failed.
    failed: HashMap<String, usize>,
}

impl Search {
    fn run(&mut self, d: &Diagram, depth: usize) -> Option<CertNode> {
        if self.nodes >= self.budget.max_nodes {
            self.exhausted = true;
            return None;
        }
        self.nodes += 1;
        let r = d.simplify(self.budget.simplify_passes);
        if is_leaf(&r) {
            return Some(CertNode::Leaf { diagram: d.clone() });
        }
        let remaining = self.budget.max_depth.saturating_sub(depth);
        let key = r.to_string();
        let node = |(crossing, det, children): (usize, u64, [CertNode; 2])| CertNode::Node {
            diagram: d.clone(),
            reduced: r.clone(),
            crossing,
            det,
            children: Box::new(children),
        };
        if let Some(hit) = self.solved.get(&key) {
            return Some(node(hit.clone()));
        }
        if remaining == 0 || self.failed.get(&key).is_some_and(|&f| f >= remaining) {
            return None;
        }
        let det = goeritz_determinant(&r);
        if det == 0 {
            return None;
        }
        for c in 0..r.crossing_count() {
            let kids = [Smoothing::A, Smoothing::B].map(|s| r.smooth(c, s).expect("crossing in range"));
            let (d0, d1) = (goeritz_determinant(&kids[0]), goeritz_determinant(&kids[1]));
            if d0 == 0 || d1 == 0 || d0 + d1 != det {
                continue;
            }
            let Some(c0) = self.run(&kids[0], depth + 1) else {
                if self.exhausted {
                    return None;
                }
                continue;
            };
            let Some(c1) = self.run(&kids[1], depth + 1) else {
                if self.exhausted {
                    return None;
                }
                continue;
            };
            let found = (c, det, [c0, c1]);
            self.solved.insert(key, found.clone());
            return Some(node(found));
        }
        if !self.exhausted {
            self.failed.insert(key, remaining);
        }
        None
    }
}

/// Depth-first search for a determinant-additive smoothing tree ending in
/// unknots. Crossings are tried in ascending order, the A-smoothing child
/// first, so the result is deterministic.
pub fn certify(d: &Diagram, budget: Budget) -> Result<CertifyOutcome, QaError> {
    if !d.is_connected() {
        return Err(QaError::SplitDiagram);
    }
    let mut s = Search {
        budget,
        nodes: 0,
        exhausted: false,
        solved: HashMap::new(),
        failed: HashMap::new(),
    };
    Ok(match s.run(d, 0) {
        Some(tree) => CertifyOutcome::Certified {
            certificate: Certificate { root: d.clone(), tree },
            nodes: s.nodes,
        },
        None => CertifyOutcome::Unknown { nodes: s.nodes },
    })
}

/// Re-verify a certificate from scratch: every leaf simplifies to the
/// unknot, every node's children are its smoothings, and determinants
/// recomputed from the diagrams add up.
pub fn replay(cert: &Certificate, simplify_passes: usize) -> Result<(), ReplayError> {
    if cert.tree.diagram() != &cert.root {
        return Err(ReplayError::RootMismatch);
    }
    replay_node(&cert.tree, simplify_passes).map(|_| ())
}

fn replay_node(node: &CertNode, passes: usize) -> Result<u64, ReplayError> {
    match node {
        CertNode::Leaf { diagram } => {
            if is_leaf(&diagram.simplify(passes)) {
                Ok(1)
            } else {
                Err(ReplayError::NotUnknot(diagram.to_string()))
            }
        }
        CertNode::Node {
            diagram,
            reduced,
            crossing,
            det,
            children,
        } => {
            let name = diagram.to_string();
            if &diagram.simplify(passes) != reduced {
                return Err(ReplayError::BadReduction { diagram: name });
            }
            for (index, (child, s)) in children.iter().zip([Smoothing::A, Smoothing::B]).enumerate() {
                let expected = reduced.smooth(*crossing, s).map_err(|_| ReplayError::BadCrossing {
                    diagram: name.clone(),
                    crossing: *crossing,
                })?;
                if child.diagram() != &expected {
                    return Err(ReplayError::BadChild {
                        diagram: name.clone(),
                        index,
                    });
                }
            }
            let d0 = replay_node(&children[0], passes)?;
            let d1 = replay_node(&children[1], passes)?;
            let actual = goeritz_determinant(reduced);
            if actual != *det || d0 == 0 || d1 == 0 || d0 + d1 != actual {
                return Err(ReplayError::NotAdditive {
                    diagram: name,
                    det: actual,
                    d0,
                    d1,
                });
            }
            for (child, claimed) in children.iter().zip([d0, d1]) {
                if goeritz_determinant(child.diagram()) != claimed {
                    return Err(ReplayError::NotAdditive {
                        diagram: name,
                        det: actual,
                        d0,
                        d1,
                    });
                }
            }
            Ok(actual)
        }
    }
}

/// Jones polynomial of the Kanenobu knot `K(p,q)`:
/// `(-1)^{p+q}(t^{s-4} - 2t^{s-3} + 3t^{s-2} - 4t^{s-1} + 4t^s - 4t^{s+1}
/// + 3t^{s+2} - 2t^{s+3} + t^{s+4}) + 1` with `s = p + q`.
pub fn kanenobu_jones(p: i64, q: i64) -> HalfLaurent {
    let s = p + q;
    let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
    let coeffs = [1, -2, 3, -4, 4, -4, 3, -2, 1];
    let body: HalfLaurent = coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| HalfLaurent::mono(sign * c, s - 4 + i as i64))
        .sum();
    &body + &HalfLaurent::one()
}

pub const KANENOBU_DET: u64 = 25;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KanenobuReport {
    pub p: i64,
    pub q: i64,
    /// `|p| + |q| ≥ 19` or `|p + q| > 6`.
    pub status: Status,
    /// What the obstruction battery says about the closed-form polynomial.
    pub battery: QAVerdict,
    /// Gap-derived status: NotQA exactly when the polynomial has a gap.
    pub gap_status: Status,
    /// Whether the battery reaches the same status as `status`.
    pub agrees: bool,
    /// The polynomial has a gap but `|p + q| > 6` fails, or the reverse.
    pub gap_clause_disagrees: bool,
}

pub fn kanenobu_obstruction(p: i64, q: i64) -> KanenobuReport {
    let v = kanenobu_jones(p, q);
    let status = if p.abs() + q.abs() >= 19 || (p + q).abs() > 6 {
        Status::NotQA
    } else {
        Status::Inconclusive
    };
    let battery = obstruct(&v, KANENOBU_DET, true, false).expect("nonzero polynomial, det 25");
    let has_gap = v.analyze(HalfInt::ONE).expect("integer lattice").gap_count() > 0;
    let gap_status = if has_gap { Status::NotQA } else { Status::Inconclusive };
    KanenobuReport {
        p,
        q,
        status,
        agrees: status == battery.status,
        battery,
        gap_status,
        gap_clause_disagrees: has_gap != ((p + q).abs() > 6),
    }
}
