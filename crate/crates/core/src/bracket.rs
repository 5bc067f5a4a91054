//! Kauffman bracket, Jones polynomial and determinant.
//!
//! The bracket is a [`HalfLaurent`] in `A` with integer exponents; the Jones
//! polynomial is in `t` with `t^{1/2} = A^{-2}`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Label, Smoothing};
use crate::laurent::{HalfInt, HalfLaurent, LaurentError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("crossing {0} is not of type I")]
    NotTypeI(usize),
    #[error("crossing {0} joins two arcs of the same component")]
    SameComponent(usize),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// `-A^2 - A^{-2}`.
pub fn loop_value() -> HalfLaurent {
    HalfLaurent::from_int_terms(&[(2, -1), (-2, -1)])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketResult {
    pub bracket: HalfLaurent,
    pub jones: HalfLaurent,
    pub writhe: i64,
    pub determinant: BigInt,
}

impl BracketResult {
    pub fn of(d: &Diagram) -> Self {
        let bracket = kauffman_bracket(d);
        let jones = normalize(&bracket, d.writhe());
        let determinant = jones_determinant(&jones);
        BracketResult {
            bracket,
            jones,
            writhe: d.writhe(),
            determinant,
        }
    }
}

/// Frontier state: which open strand ends are joined through the processed
/// crossings, and whether a closed circle has been seen yet.
type FrontierKey = (Vec<(Label, Label)>, bool);

/// The bracket by resolving crossings one at a time, merging partial states
/// that leave the same connectivity on the unprocessed strands.
pub fn kauffman_bracket(d: &Diagram) -> HalfLaurent {
    let delta = loop_value();
    let mut states: HashMap<FrontierKey, HalfLaurent> = HashMap::new();
    states.insert((Vec::new(), false), HalfLaurent::one());
    let order = processing_order(d);
    let a = HalfLaurent::mono(1, 1);
    let a_inv = HalfLaurent::mono(1, -1);
    for &x in &order {
        let t = d.crossings()[x];
        let mut next: HashMap<FrontierKey, HalfLaurent> = HashMap::new();
        for ((pairs, closed_any), poly) in states {
            let partner: HashMap<Label, Label> = pairs
                .iter()
                .flat_map(|&(p, q)| [(p, q), (q, p)])
                .collect();
            for (r, weight) in [(Smoothing::A, &a), (Smoothing::B, &a_inv)] {
                let (open, circles) = resolve(&t, r, &partner);
                let mut kept: Vec<(Label, Label)> = pairs
                    .iter()
                    .copied()
                    .filter(|(p, q)| !t.contains(p) && !t.contains(q))
                    .collect();
                kept.extend(open);
                kept.sort_unstable();
                let mut term = &poly * weight;
                let mut closed = closed_any;
                for _ in 0..circles {
                    if closed {
                        term = &term * &delta;
                    }
                    closed = true;
                }
                *next.entry((kept, closed)).or_default() += &term;
            }
        }
        states = next;
    }
    let mut total = HalfLaurent::zero();
    for ((pairs, closed_any), poly) in states {
        debug_assert!(pairs.is_empty());
        let extra = d.loops() + usize::from(closed_any) - 1;
        total += &(&poly * &delta.pow(extra as u32));
    }
    total
}

/// Greedy order keeping the frontier small: next take the crossing sharing
/// the most strands with those already taken.
fn processing_order(d: &Diagram) -> Vec<usize> {
    let n = d.crossing_count();
    let mut done = vec![false; n];
    let mut seen: HashMap<Label, u8> = HashMap::new();
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let best = (0..n)
            .filter(|&x| !done[x])
            .max_by_key(|&x| {
                let shared = d.crossings()[x].iter().filter(|l| seen.contains_key(l)).count();
                (shared, std::cmp::Reverse(x))
            })
            .expect("unprocessed crossing remains");
        done[best] = true;
        for &l in &d.crossings()[best] {
            *seen.entry(l).or_default() += 1;
        }
        order.push(best);
    }
    order
}

/// Resolve one crossing against the frontier. Returns new open pairs and
/// the number of circles closed.
fn resolve(t: &[Label; 4], r: Smoothing, partner: &HashMap<Label, Label>) -> (Vec<(Label, Label)>, usize) {
    // a small graph on the four slots and the open strand ends they reach
    let joins: [(usize, usize); 2] = match r {
        Smoothing::A => [(0, 1), (2, 3)],
        Smoothing::B => [(0, 3), (1, 2)],
    };
    let mut adj: BTreeMap<Node, Vec<Node>> = BTreeMap::new();
    let mut link = |p: Node, q: Node| {
        adj.entry(p).or_default().push(q);
        adj.entry(q).or_default().push(p);
    };
    for (p, q) in joins {
        link(Node::Slot(p), Node::Slot(q));
    }
    let slot_of = |l: Label, not: usize| (0..4).find(|&s| s != not && t[s] == l);
    for s in 0..4 {
        let l = t[s];
        if let Some(s2) = slot_of(l, s) {
            if s < s2 {
                link(Node::Slot(s), Node::Slot(s2));
            }
        } else if let Some(&p) = partner.get(&l) {
            // the strand continues through processed crossings to `p`
            match (0..4).find(|&u| t[u] == p) {
                Some(u) if s < u => link(Node::Slot(s), Node::Slot(u)),
                Some(_) => {}
                None => link(Node::Slot(s), Node::End(p)),
            }
        } else {
            link(Node::Slot(s), Node::End(l));
        }
    }
    let mut visited: BTreeMap<Node, bool> = adj.keys().map(|&k| (k, false)).collect();
    let mut open = Vec::new();
    // paths start at degree-1 end nodes
    let ends: Vec<Node> = adj.keys().copied().filter(|k| matches!(k, Node::End(_))).collect();
    for start in ends {
        if visited[&start] {
            continue;
        }
        let (mut prev, mut cur) = (start, start);
        visited.insert(start, true);
        loop {
            let next = adj[&cur].iter().copied().find(|&n| n != prev || adj[&cur].len() == 1);
            let Some(nx) = next.filter(|n| !visited[n]) else {
                break;
            };
            visited.insert(nx, true);
            (prev, cur) = (cur, nx);
        }
        let (Node::End(p), Node::End(q)) = (start, cur) else {
            unreachable!("frontier paths end at open strands")
        };
        open.push((p.min(q), p.max(q)));
    }
    let mut circles = 0;
    let keys: Vec<Node> = adj.keys().copied().collect();
    for k in keys {
        if visited[&k] {
            continue;
        }
        circles += 1;
        let mut stack = vec![k];
        while let Some(n) = stack.pop() {
            if std::mem::replace(visited.get_mut(&n).expect("known node"), true) {
                continue;
            }
            stack.extend(adj[&n].iter().copied());
        }
    }
    (open, circles)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Slot(usize),
    End(Label),
}

/// The full `2^n` state sum, evaluated in parallel. Intended as an oracle
/// for small diagrams.
pub fn bracket_state_sum(d: &Diagram) -> HalfLaurent {
    let n = d.crossing_count();
    assert!(n < 31, "state sum over {n} crossings is out of reach");
    let labels: Vec<Label> = {
        let mut v: Vec<Label> = d.crossings().iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let index: HashMap<Label, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let delta = loop_value();
    // (A-exponent, circle count) -> number of states
    let counts: HashMap<(i64, usize), u64> = (0u64..1 << n)
        .into_par_iter()
        .fold(HashMap::new, |mut acc, state| {
            let mut parent: Vec<usize> = (0..labels.len()).collect();
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            let mut a_exp = 0i64;
            for (x, t) in d.crossings().iter().enumerate() {
                let b = state >> x & 1 == 1;
                let pairs = if b { [(0, 3), (1, 2)] } else { [(0, 1), (2, 3)] };
                a_exp += if b { -1 } else { 1 };
                for (p, q) in pairs {
                    let (rp, rq) = (find(&mut parent, index[&t[p]]), find(&mut parent, index[&t[q]]));
                    parent[rp] = rq;
                }
            }
            let circles = (0..labels.len()).filter(|&i| find(&mut parent, i) == i).count() + d.loops();
            *acc.entry((a_exp, circles)).or_insert(0u64) += 1;
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    counts
        .into_iter()
        .map(|((e, k), c)| &HalfLaurent::mono(c as i64, e) * &delta.pow(k as u32 - 1))
        .sum()
}

/// `(-A)^{-3w} ⟨L⟩` with `A ↦ t^{-1/4}`.
pub fn normalize(bracket: &HalfLaurent, writhe: i64) -> HalfLaurent {
    let sign = if writhe % 2 == 0 { 1 } else { -1 };
    let f = &HalfLaurent::mono(sign, -3 * writhe) * bracket;
    f.map_exponents(|e| (e.0 % 4 == 0).then_some(HalfInt(-e.0 / 4)))
        .expect("bracket exponents of a diagram share parity with twice the writhe")
}

pub fn jones(d: &Diagram) -> HalfLaurent {
    normalize(&kauffman_bracket(d), d.writhe())
}

/// `|V(-1)|` with `t^{1/2} = i`, computed exactly.
pub fn jones_determinant(v: &HalfLaurent) -> BigInt {
    v.abs_at_root_of_unity(4)
        .expect("a Jones polynomial at t = -1 is an integer multiple of a unit")
}

pub fn determinant(d: &Diagram) -> BigInt {
    jones_determinant(&jones(d))
}

/// The two sides of the crossing skein relation at crossing `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeinReport {
    pub crossing: usize,
    pub sign: i8,
    /// Change in the number of negative crossings on the resolution that
    /// does not respect orientation, counting `c` itself in the original.
    pub e: i64,
    pub holds: bool,
}

/// Jones skein at a type I crossing: for a positive crossing
/// `V_L = -t^{1/2} V_{L_0} - t^{3e/2+1} V_{L_1}`, for a negative one
/// `V_L = -t^{3e/2-1} V_{L_0} - t^{-1/2} V_{L_1}`, with `L_0` the
/// `A`-resolution and `L_1` the `B`-resolution.
pub fn skein_check(d: &Diagram, c: usize) -> Result<SkeinReport, BracketError> {
    let info = d.crossing_info(c)?;
    if !info.type_i {
        return Err(BracketError::NotTypeI(c));
    }
    let l0 = d.smooth(c, Smoothing::A)?;
    let l1 = d.smooth(c, Smoothing::B)?;
    let (v, v0, v1) = (jones(d), jones(&l0), jones(&l1));
    let x_rest = d.negative_crossings() as i64 - i64::from(info.sign < 0);
    let (e, rhs) = if info.sign > 0 {
        let e = l1.negative_crossings() as i64 - x_rest;
        let t0 = HalfLaurent::monomial(-1, HalfInt(1));
        let t1 = HalfLaurent::monomial(-1, HalfInt(3 * e + 2));
        (e, &(&t0 * &v0) + &(&t1 * &v1))
    } else {
        let e = l0.negative_crossings() as i64 - x_rest;
        let t0 = HalfLaurent::monomial(-1, HalfInt(3 * e - 2));
        let t1 = HalfLaurent::monomial(-1, HalfInt(-1));
        (e, &(&t0 * &v0) + &(&t1 * &v1))
    };
    Ok(SkeinReport {
        crossing: c,
        sign: info.sign,
        e,
        holds: rhs == v,
    })
}

/// Gap between `A⟨L_0⟩` and `A^{-1}⟨L_1⟩` at a crossing joining two
/// different components, on the `A`-lattice (step 4), taking whichever
/// order puts the supports apart. `Ok(None)` when they touch or overlap.
pub fn bracket_gap_check(d: &Diagram, c: usize) -> Result<Option<HalfInt>, BracketError> {
    let (p, q) = d.crossing_components(c)?;
    if p == q {
        return Err(BracketError::SameComponent(c));
    }
    let (f, g) = bracket_gap_terms(d, c)?;
    let step = HalfInt::from_int(4);
    for (lo, hi) in [(&f, &g), (&g, &f)] {
        if let Ok(gap) = lo.gap_between(hi, step) {
            return Ok(gap);
        }
    }
    Ok(None)
}

/// `(A⟨L_0⟩, A^{-1}⟨L_1⟩)` at crossing `c`.
pub fn bracket_gap_terms(d: &Diagram, c: usize) -> Result<(HalfLaurent, HalfLaurent), BracketError> {
    let f = &HalfLaurent::mono(1, 1) * &kauffman_bracket(&d.smooth(c, Smoothing::A)?);
    let g = &HalfLaurent::mono(1, -1) * &kauffman_bracket(&d.smooth(c, Smoothing::B)?);
    Ok((f, g))
}
