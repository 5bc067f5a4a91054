//! Seeded random signed planar graphs built by series-parallel operations.

#![allow(dead_code)]

use qalt::tait::{Edge, SignedPlanarGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed;

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

fn sign(rng: &mut impl Rng) -> i8 {
    if rng.gen_bool(0.5) {
        1
    } else {
        -1
    }
}

/// A connected planar signed multigraph with `1..=max_edges` edges, grown
/// from one edge by subdividing, doubling, hanging pendant edges and
/// (rarely) adding loops; edge order is shuffled at the end.
pub fn random_planar(rng: &mut impl Rng, max_edges: usize) -> SignedPlanarGraph {
    let target = rng.gen_range(1..=max_edges);
    let mut vertices = 2;
    let mut edges = vec![Edge { u: 0, v: 1, sign: sign(rng) }];
    while edges.len() < target {
        let i = rng.gen_range(0..edges.len());
        match rng.gen_range(0..10) {
            0..=3 if edges[i].u != edges[i].v => {
                let v = edges[i].v;
                let w = vertices;
                vertices += 1;
                edges[i].v = w;
                edges.push(Edge { u: w, v, sign: sign(rng) });
            }
            4..=7 => {
                let e = edges[i];
                edges.push(Edge { sign: sign(rng), ..e });
            }
            8 => {
                let u = rng.gen_range(0..vertices);
                edges.push(Edge { u, v: vertices, sign: sign(rng) });
                vertices += 1;
            }
            _ => {
                let u = rng.gen_range(0..vertices);
                edges.push(Edge { u, v: u, sign: sign(rng) });
            }
        }
    }
    edges.shuffle(rng);
    SignedPlanarGraph::new(vertices, edges).expect("endpoints in range")
}

/// The same graph with its edges listed in another order.
pub fn permuted(g: &SignedPlanarGraph, rng: &mut impl Rng) -> SignedPlanarGraph {
    let mut edges = g.edges().to_vec();
    edges.shuffle(rng);
    SignedPlanarGraph::new(g.vertex_count(), edges).expect("same endpoints")
}
