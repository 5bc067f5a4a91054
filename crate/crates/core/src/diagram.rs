//! Oriented link diagrams stored as planar-diagram (PD) codes.
//!
//! Each crossing is a 4-tuple of strand labels listed counterclockwise,
//! starting from the incoming under-strand. The under-strand therefore runs
//! from slot 0 to slot 2; the over-strand runs 3→1 at a positive crossing
//! and 1→3 at a negative one. Crossingless unknotted components are counted
//! separately (`Loop[k]` in text form).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Label = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("PD syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("strand label {label} appears {count} times (expected exactly 2)")]
    InvalidStrandLabels { label: Label, count: usize },
    #[error("under-strand directions disagree along the component through strand {label}")]
    InconsistentOrientation { label: Label },
    #[error("crossing {0} does not exist")]
    InvalidCrossing(usize),
    #[error("PD code is not planar: {faces} faces where {expected} were expected")]
    NonPlanar { faces: usize, expected: usize },
    #[error("diagram is not connected")]
    DisconnectedDiagram,
    #[error("diagram has no components")]
    EmptyDiagram,
}

/// A position on a crossing: crossing index and slot `0..4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub crossing: usize,
    pub slot: usize,
}

impl Slot {
    fn new(crossing: usize, slot: usize) -> Self {
        Slot { crossing, slot }
    }

    fn opposite(self) -> Self {
        Slot::new(self.crossing, (self.slot + 2) % 4)
    }
}

/// The two ways of resolving a crossing.
///
/// `A` joins slots (0,1) and (2,3) and is the `L_0` term of the bracket
/// skein `⟨L⟩ = A⟨L_0⟩ + A^{-1}⟨L_1⟩`; `B` joins (0,3) and (1,2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Smoothing {
    A,
    B,
}

impl Smoothing {
    /// `0 → A` (`L_0`), `1 → B` (`L_1`).
    pub fn from_index(r: u8) -> Option<Self> {
        match r {
            0 => Some(Smoothing::A),
            1 => Some(Smoothing::B),
            _ => None,
        }
    }

    fn pairing(self) -> Pairing {
        match self {
            Smoothing::A => [1, 0, 3, 2],
            Smoothing::B => [3, 2, 1, 0],
        }
    }
}

/// Slot `s` of a removed crossing is joined to slot `pairing[s]`.
type Pairing = [usize; 4];

const PASS_THROUGH: Pairing = [2, 3, 0, 1];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingInfo {
    pub index: usize,
    pub sign: i8,
    /// The crossing's oriented resolution is `L_0` when positive and `L_1`
    /// when negative.
    pub type_i: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Diagram {
    crossings: Vec<[Label; 4]>,
    signs: Vec<i8>,
    loops: usize,
    component_of: BTreeMap<Label, usize>,
    components: usize,
}

impl Diagram {
    /// The crossingless one-component diagram.
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    pub fn unlink(n: usize) -> Self {
        assert!(n > 0, "an unlink needs at least one component");
        Diagram {
            crossings: Vec::new(),
            signs: Vec::new(),
            loops: n,
            component_of: BTreeMap::new(),
            components: n,
        }
    }

    /// Build from PD tuples, deriving orientation from the under-strands.
    ///
    /// Components that never pass under are oriented so that labels increase
    /// along them; when that is ambiguous (two strands), the lowest strand
    /// runs toward the lower-numbered crossing.
    pub fn from_pd(crossings: Vec<[Label; 4]>, loops: usize) -> Result<Self, DiagramError> {
        if crossings.is_empty() && loops == 0 {
            return Err(DiagramError::EmptyDiagram);
        }
        let occ = occurrences(&crossings)?;
        let mut signs = vec![0i8; crossings.len()];
        let mut component_of = BTreeMap::new();
        let mut comp = 0;
        for &label in occ.keys() {
            if component_of.contains_key(&label) {
                continue;
            }
            let walk = walk_cycle(&crossings, &occ, label);
            let mut vote = None;
            for step in &walk {
                let v = match step.to.slot {
                    0 => true,
                    2 => false,
                    _ => continue,
                };
                if *vote.get_or_insert(v) != v {
                    return Err(DiagramError::InconsistentOrientation { label });
                }
            }
            let forward = vote.unwrap_or_else(|| over_only_forward(&walk));
            for step in &walk {
                component_of.insert(step.label, comp);
                let arrival = if forward { step.to } else { step.from };
                match arrival.slot {
                    3 => signs[arrival.crossing] = 1,
                    1 => signs[arrival.crossing] = -1,
                    _ => {}
                }
            }
            comp += 1;
        }
        let d = Diagram {
            crossings,
            signs,
            loops,
            component_of,
            components: comp + loops,
        };
        let expected = d.crossings.len() + 2 * d.crossing_groups();
        let faces = d.faces().count;
        if faces != expected {
            return Err(DiagramError::NonPlanar { faces, expected });
        }
        Ok(d)
    }

    /// Number of connected pieces containing crossings.
    fn crossing_groups(&self) -> usize {
        let n = self.crossings.len();
        let mut uf = UnionFind::new(n);
        for [p, q] in self.occurrences().values() {
            uf.union(p.crossing, q.crossing);
        }
        (0..n).filter(|&x| uf.find(x) == x).count()
    }

    /// Build from tuples whose orientation is already known.
    fn from_oriented(crossings: Vec<[Label; 4]>, signs: Vec<i8>, loops: usize) -> Self {
        let occ = occurrences(&crossings).expect("oriented construction keeps labels paired");
        let mut component_of = BTreeMap::new();
        let mut comp = 0;
        for &label in occ.keys() {
            if component_of.contains_key(&label) {
                continue;
            }
            for step in walk_cycle(&crossings, &occ, label) {
                component_of.insert(step.label, comp);
            }
            comp += 1;
        }
        let d = Diagram {
            crossings,
            signs,
            loops,
            component_of,
            components: comp + loops,
        };
        debug_assert!(d.orientation_is_consistent());
        d
    }

    fn orientation_is_consistent(&self) -> bool {
        let occ = occurrences(&self.crossings).expect("paired");
        occ.values()
            .all(|[p, q]| self.is_incoming(*p) != self.is_incoming(*q))
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[[Label; 4]] {
        &self.crossings
    }

    /// Crossingless unknotted components.
    pub fn loops(&self) -> usize {
        self.loops
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn component_of(&self, label: Label) -> Option<usize> {
        self.component_of.get(&label).copied()
    }

    pub fn sign(&self, c: usize) -> Result<i8, DiagramError> {
        self.signs.get(c).copied().ok_or(DiagramError::InvalidCrossing(c))
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Positive minus negative crossings.
    pub fn writhe(&self) -> i64 {
        self.signs.iter().map(|&s| s as i64).sum()
    }

    pub fn negative_crossings(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    /// Whether the strand at this slot enters the crossing.
    pub fn is_incoming(&self, at: Slot) -> bool {
        match at.slot {
            0 => true,
            2 => false,
            3 => self.signs[at.crossing] > 0,
            _ => self.signs[at.crossing] < 0,
        }
    }

    /// Components of the under- and over-strand at crossing `c`.
    pub fn crossing_components(&self, c: usize) -> Result<(usize, usize), DiagramError> {
        let t = self.crossings.get(c).ok_or(DiagramError::InvalidCrossing(c))?;
        Ok((self.component_of[&t[0]], self.component_of[&t[1]]))
    }

    pub fn max_label(&self) -> Label {
        self.component_of.keys().next_back().copied().unwrap_or(0)
    }

    /// Connected as a plane curve: one crossingless circle, or crossings
    /// linked through strands and no free loops.
    pub fn is_connected(&self) -> bool {
        if self.crossings.is_empty() {
            return self.loops == 1;
        }
        if self.loops > 0 {
            return false;
        }
        let n = self.crossings.len();
        let mut uf = UnionFind::new(n);
        let occ = occurrences(&self.crossings).expect("paired");
        for [p, q] in occ.values() {
            uf.union(p.crossing, q.crossing);
        }
        (1..n).all(|x| uf.find(x) == uf.find(0))
    }

    pub fn crossing_info(&self, c: usize) -> Result<CrossingInfo, DiagramError> {
        let sign = self.sign(c)?;
        let oriented = self.oriented_smoothing(c)?;
        let type_i = match sign {
            1 => oriented == Smoothing::A,
            _ => oriented == Smoothing::B,
        };
        Ok(CrossingInfo { index: c, sign, type_i })
    }

    /// The resolution that pairs each incoming strand with an outgoing one.
    pub fn oriented_smoothing(&self, c: usize) -> Result<Smoothing, DiagramError> {
        if c >= self.crossings.len() {
            return Err(DiagramError::InvalidCrossing(c));
        }
        let inc = |s| self.is_incoming(Slot::new(c, s));
        Ok(if inc(0) != inc(1) && inc(2) != inc(3) {
            Smoothing::A
        } else {
            Smoothing::B
        })
    }

    /// Resolve crossing `c`. The result has one fewer crossing; each new
    /// component is oriented along its lowest-labelled original strand.
    pub fn smooth(&self, c: usize, r: Smoothing) -> Result<Diagram, DiagramError> {
        if c >= self.crossings.len() {
            return Err(DiagramError::InvalidCrossing(c));
        }
        Ok(self.rebuild(&BTreeMap::from([(c, r.pairing())])))
    }

    /// Disjoint union with `k` crossingless circles.
    pub fn add_loops(&self, k: usize) -> Diagram {
        let mut d = self.clone();
        d.loops += k;
        d.components += k;
        d
    }

    /// Exchange over and under at every crossing. Labels are kept.
    pub fn mirror(&self) -> Diagram {
        let crossings = self
            .crossings
            .iter()
            .zip(&self.signs)
            .map(|(&[a, b, c, d], &s)| if s > 0 { [d, a, b, c] } else { [b, c, d, a] })
            .collect();
        let signs = self.signs.iter().map(|s| -s).collect();
        Diagram::from_oriented(crossings, signs, self.loops)
    }

    /// Canonical relabelling: components in order of their lowest label,
    /// labels consecutive along the orientation.
    pub fn canonical(&self) -> Diagram {
        self.rebuild(&BTreeMap::new())
    }

    /// Band sum along the lowest strand of `self` and a strand of `other`
    /// of matching over/under type, so alternating summands stay alternating.
    pub fn connected_sum(&self, other: &Diagram) -> Result<Diagram, DiagramError> {
        if !self.is_connected() || !other.is_connected() {
            return Err(DiagramError::DisconnectedDiagram);
        }
        if self.crossings.is_empty() {
            return Ok(other.canonical());
        }
        if other.crossings.is_empty() {
            return Ok(self.canonical());
        }
        let offset = self.max_label();
        let mut skel = Skeleton {
            crossings: Vec::new(),
            incoming: Vec::new(),
            loops: 0,
        };
        for (d, off) in [(self, 0), (other, offset)] {
            for (x, t) in d.crossings.iter().enumerate() {
                skel.crossings.push(t.map(|l| l + off));
                skel.incoming
                    .push([0, 1, 2, 3].map(|s| d.is_incoming(Slot::new(x, s))));
            }
        }
        let n1 = self.crossings.len();
        let occ = occurrences(&skel.crossings).expect("paired");
        let head_of = |label: Label| -> Slot {
            let [p, q] = occ[&label];
            if skel.incoming[p.crossing][p.slot] {
                p
            } else {
                q
            }
        };
        let leaves_over = |label: Label| -> bool {
            let h = head_of(label);
            let [p, q] = occ[&label];
            let tail = if p == h { q } else { p };
            tail.slot % 2 == 1
        };
        let s1 = *occ.keys().next().expect("nonempty");
        let candidates: Vec<Label> = occ
            .keys()
            .copied()
            .filter(|&l| occ[&l][0].crossing >= n1)
            .collect();
        let s2 = candidates
            .iter()
            .copied()
            .find(|&l| leaves_over(l) == leaves_over(s1))
            .unwrap_or(candidates[0]);
        let (h1, h2) = (head_of(s1), head_of(s2));
        skel.crossings[h1.crossing][h1.slot] = s2;
        skel.crossings[h2.crossing][h2.slot] = s1;
        Ok(skel.assemble(|l| l))
    }

    /// Closure of a braid word on `strands` strands; generator `i` crosses
    /// positions `i-1` and `i`, positive with the left strand passing over.
    pub fn from_braid(strands: usize, word: &[i32]) -> Diagram {
        let mut next: Label = 1;
        let mut fresh = || {
            let l = next;
            next += 1;
            l
        };
        let start: Vec<Label> = (0..strands).map(|_| fresh()).collect();
        let mut cur = start.clone();
        let mut skel = Skeleton {
            crossings: Vec::new(),
            incoming: Vec::new(),
            loops: 0,
        };
        for &g in word {
            let i = g.unsigned_abs() as usize - 1;
            assert!(g != 0 && i + 1 < strands, "braid generator {g} out of range");
            let (u, v) = (cur[i], cur[i + 1]);
            let (w1, w2) = (fresh(), fresh());
            if g > 0 {
                skel.crossings.push([v, w2, w1, u]);
                skel.incoming.push([true, false, false, true]);
            } else {
                skel.crossings.push([u, v, w2, w1]);
                skel.incoming.push([true, true, false, false]);
            }
            cur[i] = w1;
            cur[i + 1] = w2;
        }
        let mut subst = HashMap::new();
        for (p, &l) in cur.iter().enumerate() {
            if l == start[p] {
                skel.loops += 1;
            } else {
                subst.insert(l, start[p]);
            }
        }
        for t in &mut skel.crossings {
            for l in t.iter_mut() {
                if let Some(&s) = subst.get(l) {
                    *l = s;
                }
            }
        }
        skel.assemble(|l| l)
    }

    /// Greedy Reidemeister I/II reduction, one move per pass.
    pub fn simplify(&self, max_passes: usize) -> Diagram {
        let mut d = self.clone();
        for _ in 0..max_passes {
            if let Some(x) = d.find_r1() {
                d = d.rebuild(&BTreeMap::from([(x, PASS_THROUGH)]));
            } else if let Some((x, y)) = d.find_r2() {
                d = d.rebuild(&BTreeMap::from([(x, PASS_THROUGH), (y, PASS_THROUGH)]));
            } else {
                break;
            }
        }
        d
    }

    /// A crossing with a strand joining two adjacent slots (a curl).
    pub fn find_r1(&self) -> Option<usize> {
        self.crossings
            .iter()
            .position(|t| (0..4).any(|s| t[s] == t[(s + 1) % 4]))
    }

    /// Two crossings bounding a bigon face where one strand is over at both.
    pub fn find_r2(&self) -> Option<(usize, usize)> {
        let faces = self.faces();
        for face in faces.corners_by_face() {
            let [(x, k), (y, j)] = match face.as_slice() {
                [a, b] => [*a, *b],
                _ => continue,
            };
            if x == y {
                continue;
            }
            let p = self.crossings[x][k];
            let slot_at = |c: usize, corner: usize| -> Option<usize> {
                [corner, (corner + 1) % 4]
                    .into_iter()
                    .find(|&s| self.crossings[c][s] == p)
            };
            let (Some(sx), Some(sy)) = (slot_at(x, k), slot_at(y, j)) else {
                continue;
            };
            if sx % 2 == sy % 2 {
                return Some((x.min(y), x.max(y)));
            }
        }
        None
    }

    /// Faces of the diagram viewed as a 4-valent plane graph.
    pub fn faces(&self) -> Faces {
        let n = self.crossings.len();
        let occ = occurrences(&self.crossings).expect("paired");
        let other = |d: Slot| -> Slot {
            let [p, q] = occ[&self.crossings[d.crossing][d.slot]];
            if p == d {
                q
            } else {
                p
            }
        };
        let mut corner_face = vec![[usize::MAX; 4]; n];
        let mut count = 0;
        for x in 0..n {
            for s in 0..4 {
                let start = Slot::new(x, s);
                // corner of `d` is α(d); skip darts whose corner is already assigned
                let c0 = other(start);
                if corner_face[c0.crossing][c0.slot] != usize::MAX {
                    continue;
                }
                let mut d = start;
                loop {
                    let a = other(d);
                    corner_face[a.crossing][a.slot] = count;
                    d = Slot::new(a.crossing, (a.slot + 1) % 4);
                    if d == start {
                        break;
                    }
                }
                count += 1;
            }
        }
        Faces { corner_face, count }
    }

    fn occurrences(&self) -> BTreeMap<Label, [Slot; 2]> {
        occurrences(&self.crossings).expect("paired")
    }

    /// Remove the given crossings, joining slots per each pairing, and
    /// relabel canonically.
    fn rebuild(&self, removed: &BTreeMap<usize, Pairing>) -> Diagram {
        let occ = self.occurrences();
        let other = |label: Label, from: Slot| -> Slot {
            let [p, q] = occ[&label];
            if p == from {
                q
            } else {
                p
            }
        };
        let keep: Vec<usize> = (0..self.crossings.len())
            .filter(|x| !removed.contains_key(x))
            .collect();
        let new_index: HashMap<usize, usize> =
            keep.iter().enumerate().map(|(i, &x)| (x, i)).collect();

        struct Chain {
            start: Slot,
            end: Slot,
            min_label: Label,
            /// Walking start→end follows the original orientation of `min_label`.
            agrees: bool,
        }
        let mut chains: Vec<Chain> = Vec::new();
        let mut chain_at: HashMap<Slot, usize> = HashMap::new();
        let mut used: BTreeSet<Label> = BTreeSet::new();
        for &x in &keep {
            for s in 0..4 {
                let start = Slot::new(x, s);
                if chain_at.contains_key(&start) {
                    continue;
                }
                let mut label = self.crossings[x][s];
                let mut from = start;
                let mut best = (Label::MAX, true);
                let end = loop {
                    let to = other(label, from);
                    used.insert(label);
                    if label < best.0 {
                        best = (label, self.is_incoming(to));
                    }
                    match removed.get(&to.crossing) {
                        None => break to,
                        Some(pairing) => {
                            from = Slot::new(to.crossing, pairing[to.slot]);
                            label = self.crossings[from.crossing][from.slot];
                        }
                    }
                };
                let id = chains.len();
                chain_at.insert(start, id);
                chain_at.insert(end, id);
                chains.push(Chain {
                    start,
                    end,
                    min_label: best.0,
                    agrees: best.1,
                });
            }
        }
        // whatever remains closes up into crossingless circles
        let mut new_loops = 0;
        for &label in occ.keys() {
            if used.contains(&label) {
                continue;
            }
            let from0 = occ[&label][0];
            let (mut label, mut from) = (label, from0);
            loop {
                used.insert(label);
                let to = other(label, from);
                from = Slot::new(to.crossing, removed[&to.crossing][to.slot]);
                label = self.crossings[from.crossing][from.slot];
                if from == from0 {
                    break;
                }
            }
            new_loops += 1;
        }

        // orient each new component along its lowest original label
        let mut oriented: Vec<Option<bool>> = vec![None; chains.len()];
        for first in 0..chains.len() {
            if oriented[first].is_some() {
                continue;
            }
            let mut seq: Vec<(usize, bool)> = Vec::new();
            let (mut c, mut fwd) = (first, true);
            loop {
                seq.push((c, fwd));
                let arrive = if fwd { chains[c].end } else { chains[c].start };
                let next = arrive.opposite();
                let nc = chain_at[&next];
                let nfwd = chains[nc].start == next;
                if nc == first && nfwd {
                    break;
                }
                (c, fwd) = (nc, nfwd);
            }
            let &(mc, mfwd) = seq
                .iter()
                .min_by_key(|(c, _)| chains[*c].min_label)
                .expect("nonempty");
            let flip = mfwd != chains[mc].agrees;
            for (c, f) in seq {
                oriented[c] = Some(f != flip);
            }
        }

        let mut skel = Skeleton {
            crossings: vec![[0; 4]; keep.len()],
            incoming: vec![[false; 4]; keep.len()],
            loops: self.loops + new_loops,
        };
        let mut priority = HashMap::new();
        for (id, ch) in chains.iter().enumerate() {
            let strand = id as Label + 1;
            priority.insert(strand, ch.min_label);
            let head = if oriented[id] == Some(true) { ch.end } else { ch.start };
            for end in [ch.start, ch.end] {
                let x = new_index[&end.crossing];
                skel.crossings[x][end.slot] = strand;
                skel.incoming[x][end.slot] = end == head;
            }
        }
        skel.assemble(|s| priority[&s])
    }
}

/// Crossing tuples with explicit per-slot direction, before canonical labelling.
struct Skeleton {
    crossings: Vec<[Label; 4]>,
    incoming: Vec<[bool; 4]>,
    loops: usize,
}

impl Skeleton {
    /// Canonical labelling: components ordered by lowest priority; labels
    /// consecutive along orientation starting from the lowest-priority strand
    /// (for components that never pass under, from the first strand that runs
    /// toward a lower-numbered crossing); tuples rotated to start at the
    /// incoming under-strand.
    fn assemble(self, priority: impl Fn(Label) -> Label) -> Diagram {
        let occ = occurrences(&self.crossings).expect("skeleton labels are paired");
        let head = |l: Label| -> Slot {
            let [p, q] = occ[&l];
            debug_assert!(self.incoming[p.crossing][p.slot] != self.incoming[q.crossing][q.slot]);
            if self.incoming[p.crossing][p.slot] {
                p
            } else {
                q
            }
        };
        let tail = |l: Label| -> Slot {
            let h = head(l);
            let [p, q] = occ[&l];
            if p == h {
                q
            } else {
                p
            }
        };
        // components as oriented strand cycles
        let mut seen: BTreeSet<Label> = BTreeSet::new();
        let mut comps: Vec<Vec<Label>> = Vec::new();
        for &l in occ.keys() {
            if seen.contains(&l) {
                continue;
            }
            let mut cyc = Vec::new();
            let mut cur = l;
            loop {
                seen.insert(cur);
                cyc.push(cur);
                let h = head(cur).opposite();
                cur = self.crossings[h.crossing][h.slot];
                if cur == l {
                    break;
                }
            }
            let (mpos, _) = cyc
                .iter()
                .enumerate()
                .min_by_key(|(_, &s)| (priority(s), s))
                .expect("nonempty");
            let mut start = mpos;
            if cyc.iter().all(|&s| head(s).slot % 2 == 1) {
                let k = cyc.len();
                start = (0..k)
                    .map(|i| (mpos + i) % k)
                    .find(|&i| head(cyc[i]).crossing < tail(cyc[i]).crossing)
                    .unwrap_or(mpos);
            }
            cyc.rotate_left(start);
            let key = cyc.iter().map(|&s| priority(s)).min().expect("nonempty");
            comps.push(cyc);
            let _ = key;
        }
        comps.sort_by_key(|c| c.iter().map(|&s| (priority(s), s)).min());
        let mut relabel = HashMap::new();
        let mut next: Label = 1;
        for c in &comps {
            for &s in c {
                relabel.insert(s, next);
                next += 1;
            }
        }
        let mut crossings = Vec::with_capacity(self.crossings.len());
        let mut signs = Vec::with_capacity(self.crossings.len());
        for (t, inc) in self.crossings.iter().zip(&self.incoming) {
            let t = t.map(|l| relabel[&l]);
            let (t, inc) = if inc[0] {
                (t, *inc)
            } else {
                ([t[2], t[3], t[0], t[1]], [inc[2], inc[3], inc[0], inc[1]])
            };
            debug_assert!(inc[0] && !inc[2] && inc[1] != inc[3]);
            crossings.push(t);
            signs.push(if inc[3] { 1 } else { -1 });
        }
        if crossings.is_empty() && self.loops == 0 {
            return Diagram::unknot();
        }
        Diagram::from_oriented(crossings, signs, self.loops)
    }
}

/// Face structure: `corner_face[x][k]` is the face at the corner of crossing
/// `x` between slots `k` and `k+1`.
#[derive(Clone, Debug)]
pub struct Faces {
    pub corner_face: Vec<[usize; 4]>,
    pub count: usize,
}

impl Faces {
    pub fn corners_by_face(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.count];
        for (x, cs) in self.corner_face.iter().enumerate() {
            for (k, &f) in cs.iter().enumerate() {
                out[f].push((x, k));
            }
        }
        out
    }
}

#[derive(Clone, Copy)]
struct Step {
    label: Label,
    from: Slot,
    to: Slot,
}

fn occurrences(crossings: &[[Label; 4]]) -> Result<BTreeMap<Label, [Slot; 2]>, DiagramError> {
    let mut occ: BTreeMap<Label, Vec<Slot>> = BTreeMap::new();
    for (x, t) in crossings.iter().enumerate() {
        for (s, &l) in t.iter().enumerate() {
            occ.entry(l).or_default().push(Slot::new(x, s));
        }
    }
    occ.into_iter()
        .map(|(label, v)| match v.as_slice() {
            [p, q] => Ok((label, [*p, *q])),
            _ => Err(DiagramError::InvalidStrandLabels {
                label,
                count: v.len(),
            }),
        })
        .collect()
}

/// Walk the component through `start`, leaving its first occurrence.
fn walk_cycle(crossings: &[[Label; 4]], occ: &BTreeMap<Label, [Slot; 2]>, start: Label) -> Vec<Step> {
    let origin = occ[&start][0];
    let (mut label, mut from) = (start, origin);
    let mut steps = Vec::new();
    loop {
        let [p, q] = occ[&label];
        let to = if p == from { q } else { p };
        steps.push(Step { label, from, to });
        from = to.opposite();
        label = crossings[from.crossing][from.slot];
        if from == origin {
            break;
        }
    }
    steps
}

fn over_only_forward(walk: &[Step]) -> bool {
    if walk.len() >= 3 {
        let next = walk[1].label;
        let prev = walk[walk.len() - 1].label;
        if next != prev {
            return next < prev;
        }
    }
    walk[0].to.crossing <= walk[0].from.crossing
}

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
        let mut c = x;
        while self.parent[c] != r {
            let n = self.parent[c];
            self.parent[c] = r;
            c = n;
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

/// Parse PD text: `X[a,b,c,d]` and `Loop[k]` tokens, optionally wrapped in
/// `PD[...]` and separated by commas or whitespace, or a JSON array of
/// 4-element arrays. Empty text is the unknot.
pub fn parse_pd(text: &str) -> Result<Diagram, DiagramError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Diagram::unknot());
    }
    if trimmed.starts_with('[') {
        let crossings: Vec<[Label; 4]> =
            serde_json::from_str(trimmed).map_err(|e| DiagramError::Syntax {
                pos: e.column().saturating_sub(1),
                msg: e.to_string(),
            })?;
        return if crossings.is_empty() {
            Ok(Diagram::unknot())
        } else {
            Diagram::from_pd(crossings, 0)
        };
    }
    let mut p = PdScanner { src: text, pos: 0 };
    let mut crossings = Vec::new();
    let mut loops = 0;
    p.skip_separators();
    let wrapped = p.eat("PD[");
    loop {
        p.skip_separators();
        if p.at_end() {
            break;
        }
        if wrapped && p.peek() == Some(']') {
            p.pos += 1;
            p.skip_separators();
            if !p.at_end() {
                return Err(p.error("trailing input after PD[...]"));
            }
            return finish(crossings, loops);
        }
        if p.eat("X[") {
            let args = p.args()?;
            let t: [Label; 4] = args
                .try_into()
                .map_err(|v: Vec<Label>| p.error(&format!("crossing needs 4 labels, got {}", v.len())))?;
            crossings.push(t);
        } else if p.eat("Loop[") {
            let args = p.args()?;
            if args.len() != 1 {
                return Err(p.error("Loop takes one label"));
            }
            loops += 1;
        } else {
            return Err(p.error("expected X[...] or Loop[...]"));
        }
    }
    if wrapped {
        return Err(p.error("unclosed PD["));
    }
    finish(crossings, loops)
}

fn finish(crossings: Vec<[Label; 4]>, loops: usize) -> Result<Diagram, DiagramError> {
    if crossings.is_empty() && loops == 0 {
        return Ok(Diagram::unknot());
    }
    Diagram::from_pd(crossings, loops)
}

struct PdScanner<'a> {
    src: &'a str,
    pos: usize,
}

impl PdScanner<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_separators(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == ',' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn error(&self, msg: &str) -> DiagramError {
        DiagramError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    /// Comma-separated integers up to and including `]`.
    fn args(&mut self) -> Result<Vec<Label>, DiagramError> {
        let mut out = Vec::new();
        loop {
            while self.peek().is_some_and(char::is_whitespace) {
                self.pos += 1;
            }
            let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
            if digits == 0 {
                return Err(self.error("expected a strand label"));
            }
            let n = self.rest()[..digits]
                .parse()
                .map_err(|_| self.error("strand label out of range"))?;
            out.push(n);
            self.pos += digits;
            while self.peek().is_some_and(char::is_whitespace) {
                self.pos += 1;
            }
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.error("expected ',' or ']'")),
            }
        }
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossings.is_empty() && self.loops == 1 {
            return Ok(());
        }
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|[a, b, c, d]| format!("X[{a},{b},{c},{d}]"))
            .collect();
        let base = self.max_label();
        parts.extend((1..=self.loops as Label).map(|k| format!("Loop[{}]", base + k)));
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Diagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pd(s)
    }
}

impl From<Diagram> for String {
    fn from(d: Diagram) -> String {
        d.to_string()
    }
}

impl TryFrom<String> for Diagram {
    type Error = DiagramError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        parse_pd(&s)
    }
}
