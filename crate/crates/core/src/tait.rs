//! Signed Tait graphs of link diagrams and the spanning-tree expansion of
//! the bracket.
//!
//! Polynomials in `A` are [`HalfLaurent`] values with integer exponents.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};
use crate::laurent::{HalfInt, HalfLaurent};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TaitError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("edge {0} does not exist")]
    InvalidEdge(usize),
    #[error("edge {edge} has endpoint {vertex} but the graph has {vertices} vertices")]
    InvalidVertex {
        edge: usize,
        vertex: usize,
        vertices: usize,
    },
    #[error("edge {0} is a loop or an isthmus")]
    LoopOrIsthmus(usize),
    #[error("edge {0} is not the highest-ordered edge")]
    NotLastEdge(usize),
    #[error("graph carries no plane embedding")]
    NoEmbedding,
    #[error("edge list line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub sign: i8,
}

/// Endpoints of each edge's dual edge, indexed like the primal edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct DualData {
    vertices: usize,
    ends: Vec<(usize, usize)>,
}

/// A multigraph with ±1 edge signs; edge order is the index order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPlanarGraph {
    vertices: usize,
    edges: Vec<Edge>,
    dual: Option<DualData>,
}

/// The activity class of an edge with respect to a spanning tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeState {
    pub internal: bool,
    pub active: bool,
    pub sign: i8,
}

impl EdgeState {
    /// `L D l d` for positive edges, barred (`L̄` …) for negative ones.
    pub fn symbol(&self) -> String {
        let base = match (self.internal, self.active) {
            (true, true) => 'L',
            (true, false) => 'D',
            (false, true) => 'l',
            (false, false) => 'd',
        };
        if self.sign > 0 {
            base.to_string()
        } else {
            format!("{base}\u{304}")
        }
    }

    /// Monomial weight in `A`.
    pub fn weight(&self) -> HalfLaurent {
        let (c, e) = match (self.internal, self.active) {
            (true, true) => (-1, -3),
            (true, false) => (1, 1),
            (false, true) => (-1, 3),
            (false, false) => (1, -1),
        };
        HalfLaurent::mono(c, e * self.sign as i64)
    }
}

/// Outcome of comparing `Γ_G` with the specialized Tutte polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TutteCheck {
    /// `Γ_G = A^shift · χ_G(-A^{-4}, -A^4)`.
    Match { shift: i64 },
    Mismatch { reason: String },
}

impl SignedPlanarGraph {
    pub fn new(vertices: usize, edges: Vec<Edge>) -> Result<Self, TaitError> {
        for (i, e) in edges.iter().enumerate() {
            for vertex in [e.u, e.v] {
                if vertex >= vertices {
                    return Err(TaitError::InvalidVertex {
                        edge: i,
                        vertex,
                        vertices,
                    });
                }
            }
        }
        let edges = edges
            .into_iter()
            .map(|e| Edge {
                sign: if e.sign < 0 { -1 } else { 1 },
                ..e
            })
            .collect();
        Ok(SignedPlanarGraph {
            vertices,
            edges,
            dual: None,
        })
    }

    /// Lines `u v s` with `s` one of `+ - 1 -1 +1`; `vertices N` fixes the
    /// vertex count (otherwise one more than the largest endpoint). `#`
    /// starts a comment.
    pub fn parse_edge_list(text: &str) -> Result<Self, TaitError> {
        let mut vertices = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| TaitError::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|f| !f.is_empty())
                .collect();
            if fields[0] == "vertices" {
                let [_, n] = fields[..] else {
                    return Err(err("expected `vertices N`"));
                };
                vertices = Some(n.parse().map_err(|_| err("bad vertex count"))?);
                continue;
            }
            let [u, v, s] = fields[..] else {
                return Err(err("expected `u v sign`"));
            };
            let u = u.parse().map_err(|_| err("bad endpoint"))?;
            let v = v.parse().map_err(|_| err("bad endpoint"))?;
            let sign = match s {
                "+" | "1" | "+1" => 1,
                "-" | "-1" => -1,
                _ => return Err(err("sign must be + or -")),
            };
            edges.push(Edge { u, v, sign });
        }
        let n = vertices.unwrap_or_else(|| edges.iter().map(|e| e.u.max(e.v) + 1).max().unwrap_or(1));
        Self::new(n, edges)
    }

    /// The Tait graph of a connected diagram and its plane dual.
    ///
    /// Faces are 2-coloured; the black graph has one vertex per face of the
    /// larger colour class (ties go to the class at corner 1 of crossing 0).
    /// A crossing gives a positive edge when its black corners lie on the
    /// `A`-smoothing side.
    pub fn checkerboard(d: &Diagram) -> Result<(Self, Self), TaitError> {
        if !d.is_connected() {
            return Err(DiagramError::DisconnectedDiagram.into());
        }
        if d.crossing_count() == 0 {
            let point = |other| SignedPlanarGraph {
                vertices: 1,
                edges: Vec::new(),
                dual: Some(DualData {
                    vertices: other,
                    ends: Vec::new(),
                }),
            };
            return Ok((point(1), point(1)));
        }
        let faces = d.faces();
        let mut adj = vec![Vec::new(); faces.count];
        for cs in &faces.corner_face {
            for k in 0..4 {
                adj[cs[k]].push(cs[(k + 1) % 4]);
                adj[cs[(k + 1) % 4]].push(cs[k]);
            }
        }
        let mut colour = vec![None; faces.count];
        let first = faces.corner_face[0][1];
        colour[first] = Some(true);
        let mut queue = VecDeque::from([first]);
        while let Some(f) = queue.pop_front() {
            let c = colour[f].expect("queued faces are coloured");
            for &g in &adj[f] {
                match colour[g] {
                    None => {
                        colour[g] = Some(!c);
                        queue.push_back(g);
                    }
                    Some(cg) => assert!(cg != c, "diagram faces are not 2-colourable"),
                }
            }
        }
        let with_first = colour.iter().filter(|&&c| c == Some(true)).count();
        let black_is_first = 2 * with_first >= faces.count;
        let is_black = |f: usize| colour[f] == Some(black_is_first);
        let mut index = vec![0; faces.count];
        let (mut nb, mut nw) = (0, 0);
        for f in 0..faces.count {
            if is_black(f) {
                index[f] = nb;
                nb += 1;
            } else {
                index[f] = nw;
                nw += 1;
            }
        }
        let mut black = Vec::new();
        let mut white = Vec::new();
        for cs in &faces.corner_face {
            let (b, w, sign) = if is_black(cs[1]) {
                ((cs[1], cs[3]), (cs[0], cs[2]), 1)
            } else {
                ((cs[0], cs[2]), (cs[1], cs[3]), -1)
            };
            black.push((index[b.0], index[b.1], sign));
            white.push((index[w.0], index[w.1], -sign));
        }
        let ends = |es: &[(usize, usize, i8)]| es.iter().map(|&(u, v, _)| (u, v)).collect();
        let g = SignedPlanarGraph {
            vertices: nb,
            edges: black.iter().map(|&(u, v, sign)| Edge { u, v, sign }).collect(),
            dual: Some(DualData {
                vertices: nw,
                ends: ends(&white),
            }),
        };
        let gd = g.dual()?;
        Ok((g, gd))
    }

    /// The plane dual: one vertex per face, each edge crossing its primal
    /// edge with the opposite sign.
    pub fn dual(&self) -> Result<Self, TaitError> {
        let d = self.dual.as_ref().ok_or(TaitError::NoEmbedding)?;
        Ok(SignedPlanarGraph {
            vertices: d.vertices,
            edges: d
                .ends
                .iter()
                .zip(&self.edges)
                .map(|(&(u, v), e)| Edge { u, v, sign: -e.sign })
                .collect(),
            dual: Some(DualData {
                vertices: self.vertices,
                ends: self.edges.iter().map(|e| (e.u, e.v)).collect(),
            }),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_embedding(&self) -> bool {
        self.dual.is_some()
    }

    fn edge(&self, e: usize) -> Result<Edge, TaitError> {
        self.edges.get(e).copied().ok_or(TaitError::InvalidEdge(e))
    }

    pub fn is_loop(&self, e: usize) -> Result<bool, TaitError> {
        let ed = self.edge(e)?;
        Ok(ed.u == ed.v)
    }

    /// Removing the edge disconnects its endpoints.
    pub fn is_isthmus(&self, e: usize) -> Result<bool, TaitError> {
        let ed = self.edge(e)?;
        if ed.u == ed.v {
            return Ok(false);
        }
        let mut uf = UnionFind::new(self.vertices);
        for (i, f) in self.edges.iter().enumerate() {
            if i != e {
                uf.union(f.u, f.v);
            }
        }
        Ok(uf.find(ed.u) != uf.find(ed.v))
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.vertices);
        for f in &self.edges {
            uf.union(f.u, f.v);
        }
        (1..self.vertices).all(|v| uf.find(v) == uf.find(0))
    }

    /// `G ∖ e`; later edges shift down by one.
    pub fn delete(&self, e: usize) -> Result<Self, TaitError> {
        self.edge(e)?;
        let mut edges = self.edges.clone();
        edges.remove(e);
        Ok(SignedPlanarGraph {
            vertices: self.vertices,
            edges,
            dual: None,
        })
    }

    /// `G / e`: identify the endpoints of `e` (the higher index merges into
    /// the lower) and drop `e`.
    pub fn contract(&self, e: usize) -> Result<Self, TaitError> {
        let ed = self.edge(e)?;
        if ed.u == ed.v {
            return self.delete(e);
        }
        let (keep, gone) = (ed.u.min(ed.v), ed.u.max(ed.v));
        let map = |x: usize| match x.cmp(&gone) {
            std::cmp::Ordering::Less => x,
            std::cmp::Ordering::Equal => keep,
            std::cmp::Ordering::Greater => x - 1,
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, f)| Edge {
                u: map(f.u),
                v: map(f.v),
                sign: f.sign,
            })
            .collect();
        Ok(SignedPlanarGraph {
            vertices: self.vertices - 1,
            edges,
            dual: None,
        })
    }

    /// All spanning trees as sorted edge-index lists.
    pub fn spanning_trees(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if !self.is_connected() {
            return out;
        }
        let need = self.vertices - 1;
        let mut chosen = Vec::new();
        self.trees_from(0, &UnionFind::new(self.vertices), &mut chosen, need, &mut out);
        out
    }

    fn trees_from(
        &self,
        i: usize,
        uf: &UnionFind,
        chosen: &mut Vec<usize>,
        need: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if chosen.len() == need {
            out.push(chosen.clone());
            return;
        }
        if need - chosen.len() > self.edges.len() - i {
            return;
        }
        let e = self.edges[i];
        let mut with = uf.clone();
        if with.find(e.u) != with.find(e.v) {
            with.union(e.u, e.v);
            chosen.push(i);
            self.trees_from(i + 1, &with, chosen, need, out);
            chosen.pop();
        }
        self.trees_from(i + 1, uf, chosen, need, out);
    }

    /// Spanning-tree count by the matrix-tree theorem.
    pub fn kirchhoff_count(&self) -> BigInt {
        let weights = self.edges.iter().map(|_| BigInt::one());
        reduced_laplacian_det(self.vertices, self.edges.iter().zip(weights))
    }

    /// Activity of every edge with respect to `tree`: a tree edge is active
    /// when it is the lowest edge of its fundamental cut, a non-tree edge
    /// when it is the lowest edge of its fundamental cycle.
    pub fn activities(&self, tree: &[usize]) -> Vec<EdgeState> {
        let in_tree: Vec<bool> = (0..self.edges.len()).map(|i| tree.contains(&i)).collect();
        let mut tree_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.vertices];
        for &t in tree {
            let e = self.edges[t];
            tree_adj[e.u].push((e.v, t));
            tree_adj[e.v].push((e.u, t));
        }
        // side[v] = vertices reachable from v in T without crossing `skip`
        let reach = |from: usize, skip: Option<usize>| -> Vec<Option<usize>> {
            let mut via = vec![None; self.vertices];
            let mut seen = vec![false; self.vertices];
            seen[from] = true;
            let mut queue = VecDeque::from([from]);
            while let Some(x) = queue.pop_front() {
                for &(y, t) in &tree_adj[x] {
                    if Some(t) != skip && !seen[y] {
                        seen[y] = true;
                        via[y] = Some(t);
                        queue.push_back(y);
                    }
                }
            }
            via.iter()
                .zip(&seen)
                .map(|(v, &s)| if s { Some(v.unwrap_or(usize::MAX)) } else { None })
                .collect()
        };
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let active = if in_tree[i] {
                    let side = reach(e.u, Some(i));
                    self.edges
                        .iter()
                        .enumerate()
                        .filter(|(_, f)| side[f.u].is_some() != side[f.v].is_some())
                        .all(|(j, _)| j >= i)
                } else {
                    // walk the tree path from v back to u
                    let parent = reach(e.u, None);
                    let mut x = e.v;
                    let mut ok = true;
                    while x != e.u {
                        let t = parent[x].expect("tree spans the graph");
                        ok &= t > i;
                        let f = self.edges[t];
                        x = if f.u == x { f.v } else { f.u };
                    }
                    ok
                };
                EdgeState {
                    internal: in_tree[i],
                    active,
                    sign: e.sign,
                }
            })
            .collect()
    }

    /// `Γ_G`: the sum over spanning trees of the product of edge weights.
    pub fn gamma(&self) -> HalfLaurent {
        self.spanning_trees()
            .iter()
            .map(|t| {
                self.activities(t)
                    .iter()
                    .fold(HalfLaurent::one(), |acc, s| &acc * &s.weight())
            })
            .sum()
    }

    /// `Γ_G` by deletion and contraction of the highest non-loop,
    /// non-isthmus edge; an independent route to [`Self::gamma`].
    pub fn gamma_recursive(&self) -> HalfLaurent {
        if !self.is_connected() {
            return HalfLaurent::zero();
        }
        for e in (0..self.edges.len()).rev() {
            if self.is_loop(e).unwrap_or(true) || self.is_isthmus(e).unwrap_or(true) {
                continue;
            }
            let s = self.edges[e].sign as i64;
            let con = self.contract(e).expect("edge exists").gamma_recursive();
            let del = self.delete(e).expect("edge exists").gamma_recursive();
            return &(&HalfLaurent::mono(1, s) * &con) + &(&HalfLaurent::mono(1, -s) * &del);
        }
        self.edges
            .iter()
            .map(|e| {
                EdgeState {
                    internal: e.u != e.v,
                    active: true,
                    sign: e.sign,
                }
                .weight()
            })
            .fold(HalfLaurent::one(), |acc, w| &acc * &w)
    }

    /// Check `Γ_G = A^ε Γ_{G/e} + A^{-ε} Γ_{G∖e}` for the highest edge `e`.
    pub fn gamma_skein_check(&self, e: usize) -> Result<bool, TaitError> {
        self.edge(e)?;
        if e + 1 != self.edges.len() {
            return Err(TaitError::NotLastEdge(e));
        }
        if self.is_loop(e)? || self.is_isthmus(e)? {
            return Err(TaitError::LoopOrIsthmus(e));
        }
        let s = self.edges[e].sign as i64;
        let rhs = &(&HalfLaurent::mono(1, s) * &self.contract(e)?.gamma())
            + &(&HalfLaurent::mono(1, -s) * &self.delete(e)?.gamma());
        Ok(rhs == self.gamma())
    }

    /// Goeritz-type matrix: off-diagonal `-Σ signs` of edges joining `i,j`,
    /// rows summing to zero; returns `|det|` of the matrix with one row and
    /// column removed. Loops contribute nothing.
    pub fn goeritz_det(&self) -> BigInt {
        let weights = self.edges.iter().map(|e| BigInt::from(e.sign));
        reduced_laplacian_det(self.vertices, self.edges.iter().zip(weights)).abs()
    }

    /// Tutte polynomial at `x = -t`, `y = -t^{-1}`, in the variable `t`,
    /// ignoring signs.
    pub fn tutte_specialized(&self) -> HalfLaurent {
        if !self.is_connected() {
            return HalfLaurent::zero();
        }
        for e in (0..self.edges.len()).rev() {
            if self.is_loop(e).unwrap_or(true) || self.is_isthmus(e).unwrap_or(true) {
                continue;
            }
            return &self.delete(e).expect("edge exists").tutte_specialized()
                + &self.contract(e).expect("edge exists").tutte_specialized();
        }
        let loops = self.edges.iter().filter(|e| e.u == e.v).count() as i64;
        let bridges = self.edges.len() as i64 - loops;
        let sign = if (loops + bridges) % 2 == 0 { 1 } else { -1 };
        HalfLaurent::mono(sign, bridges - loops)
    }

    /// Compare `Γ_G` against `χ_G(-A^{-4}, -A^4)`. Only graphs whose edges
    /// are all positive can match.
    pub fn tutte_check(&self) -> TutteCheck {
        if self.edges.iter().any(|e| e.sign < 0) {
            return TutteCheck::Mismatch {
                reason: "graph has negative edges".into(),
            };
        }
        let chi = self
            .tutte_specialized()
            .map_exponents(|t| Some(HalfInt(-4 * t.0)))
            .expect("total map");
        match self.gamma().monomial_quotient(&chi) {
            Some((1, k)) => TutteCheck::Match {
                shift: k.to_int().expect("integer A-exponent"),
            },
            Some((_, k)) => TutteCheck::Mismatch {
                reason: format!("Γ = -A^{k} χ"),
            },
            None => TutteCheck::Mismatch {
                reason: "Γ is not a monomial multiple of χ".into(),
            },
        }
    }
}

/// [`SignedPlanarGraph::tutte_check`] on whichever Tait graph of `d` is
/// all-positive.
pub fn tutte_check_diagram(d: &Diagram) -> Result<TutteCheck, TaitError> {
    let (g, gd) = SignedPlanarGraph::checkerboard(d)?;
    let positive = |h: &SignedPlanarGraph| h.edges.iter().all(|e| e.sign > 0);
    Ok(if positive(&g) {
        g.tutte_check()
    } else if positive(&gd) {
        gd.tutte_check()
    } else {
        TutteCheck::Mismatch {
            reason: "neither Tait graph is all-positive".into(),
        }
    })
}

impl fmt::Display for SignedPlanarGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices {}", self.vertices)?;
        for e in &self.edges {
            writeln!(f, "{} {} {}", e.u, e.v, if e.sign > 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

/// `det` of the weighted Laplacian with the first row and column removed.
fn reduced_laplacian_det<'a>(
    vertices: usize,
    edges: impl Iterator<Item = (&'a Edge, BigInt)>,
) -> BigInt {
    if vertices <= 1 {
        return BigInt::one();
    }
    let mut off: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    for (e, w) in edges {
        if e.u != e.v {
            *off.entry((e.u, e.v)).or_default() += &w;
            *off.entry((e.v, e.u)).or_default() += &w;
        }
    }
    let n = vertices - 1;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (&(i, j), w) in &off {
        if i > 0 {
            m[i - 1][i - 1] += w;
            if j > 0 {
                m[i - 1][j - 1] -= w;
            }
        }
    }
    bareiss_det(m)
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &m[n - 1][n - 1]
    }
}

#[derive(Clone)]
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}
