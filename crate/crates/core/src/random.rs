//! Seeded random generators for property suites.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use num::Zero;

use crate::model0::{Mobius, Point, PointConfig, C};
use crate::permgraph::{StableRibbonGraph, Vertex};
use crate::polyform::{Form, Poly};
use crate::polytope::{combinations, Polytope};
use crate::rational::{qf, Q};

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SuiteRng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random valid stable ribbon graph with `1..=max_edges` edges, random vertex
/// partitions, several cycles per vertex and random defects; faces get random labels.
pub fn stable_graph(rng: &mut SuiteRng, max_edges: usize) -> StableRibbonGraph {
    loop {
        let edges = rng.gen_range(1..=max_edges);
        let nh = 2 * edges;
        let mut hs: Vec<usize> = (0..nh).collect();
        hs.shuffle(rng);
        let nv = rng.gen_range(1..=nh.min(edges + 1));
        let cuts = sorted_cuts(rng, nh, nv);
        let mut vertices = Vec::new();
        for w in cuts.windows(2) {
            let block = &hs[w[0]..w[1]];
            // mostly single cycles, sometimes a node with several branches
            let nc = if rng.gen_bool(0.7) { 1 } else { rng.gen_range(1..=block.len()) };
            let ccuts = sorted_cuts(rng, block.len(), nc);
            let cycles: Vec<Vec<usize>> = ccuts.windows(2).map(|c| block[c[0]..c[1]].to_vec()).collect();
            let defect = if rng.gen_bool(0.75) { 0 } else { rng.gen_range(1..=2) };
            vertices.push(Vertex::new(cycles, defect));
        }
        for v in &mut vertices {
            let deg = v.degree();
            if (deg == 1 || (deg == 2 && v.cycles.len() == 1)) && v.defect == 0 {
                v.defect = 1;
            }
        }
        let Ok(g) = StableRibbonGraph::with_numbered_faces(nh, vertices) else { continue };
        if !g.is_connected() {
            continue;
        }
        let g = shuffle_face_labels(rng, &g);
        if g.validate().is_ok() {
            return g;
        }
    }
}

fn sorted_cuts(rng: &mut SuiteRng, len: usize, parts: usize) -> Vec<usize> {
    let mut inner: Vec<usize> = (1..len).collect();
    inner.shuffle(rng);
    let mut cuts: Vec<usize> = inner.into_iter().take(parts - 1).collect();
    cuts.push(0);
    cuts.push(len);
    cuts.sort();
    cuts
}

pub fn shuffle_face_labels(rng: &mut SuiteRng, g: &StableRibbonGraph) -> StableRibbonGraph {
    let reps: Vec<usize> = g.faces().iter().map(|f| f.half_edges[0]).collect();
    let mut labels: Vec<usize> = (1..=reps.len()).collect();
    labels.shuffle(rng);
    let map: BTreeMap<usize, usize> = reps.into_iter().zip(labels).collect();
    StableRibbonGraph::new(g.half_edge_count(), g.vertices().to_vec(), map).expect("same structure")
}

/// Random rational in `(0, 1]` with denominator at most `den`.
pub fn unit_rational(rng: &mut SuiteRng, den: i64) -> Q {
    let d = rng.gen_range(1..=den);
    qf(rng.gen_range(1..=d), d)
}

/// Random rational in `[-range, range]` with denominator at most `den`.
pub fn signed_rational(rng: &mut SuiteRng, range: i64, den: i64) -> Q {
    let d = rng.gen_range(1..=den);
    qf(rng.gen_range(-range * d..=range * d), d)
}

/// Random positive lengths, one per edge.
pub fn lengths(rng: &mut SuiteRng, edges: usize) -> Vec<Q> {
    (0..edges).map(|_| unit_rational(rng, 9) * Q::from_integer(rng.gen_range(1..=5).into())).collect()
}

/// Random polynomial with at most `terms` monomials of total degree at most `max_degree`.
pub fn poly(rng: &mut SuiteRng, nvars: usize, max_degree: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(nvars);
    for _ in 0..rng.gen_range(1..=terms) {
        let mut exp = vec![0u32; nvars];
        let mut budget = rng.gen_range(0..=max_degree);
        while budget > 0 && nvars > 0 {
            exp[rng.gen_range(0..nvars)] += 1;
            budget -= 1;
        }
        p.add_term(exp, signed_rational(rng, 3, 4));
    }
    p
}

/// Random `degree`-form with polynomial coefficients.
pub fn form(rng: &mut SuiteRng, nvars: usize, degree: usize, max_degree: u32) -> Form {
    let mut out = Form::zero(nvars, degree);
    for idx in combinations(nvars, degree) {
        if rng.gen_bool(0.7) {
            out = out.add(&Form::monomial(poly(rng, nvars, max_degree, 3), &idx));
        }
    }
    out
}

/// Random point of a bounded polytope: a random convex combination of its vertices.
pub fn point_in(rng: &mut SuiteRng, p: &Polytope) -> Vec<Q> {
    let verts = p.vertices();
    let weights: Vec<Q> = verts.iter().map(|_| unit_rational(rng, 7)).collect();
    let total: Q = weights.iter().sum();
    (0..p.dim)
        .map(|i| verts.iter().zip(&weights).map(|(v, w)| &v.point[i] * w).sum::<Q>() / &total)
        .collect()
}

/// Perimeters with no vanishing signed sub-sum `Σ ε_i p_i`, `ε_i ∈ {-1, 0, 1}` not all zero.
pub fn generic_perimeters(rng: &mut SuiteRng, n: usize) -> Vec<Q> {
    loop {
        let p: Vec<Q> = (0..n)
            .map(|_| qf(rng.gen_range(1..=60), 1) + unit_rational(rng, 13))
            .collect();
        let generic = (1..3usize.pow(n as u32)).all(|code| {
            let mut c = code;
            let mut s = Q::zero();
            for x in &p {
                match c % 3 {
                    1 => s += x,
                    2 => s -= x,
                    _ => {}
                }
                c /= 3;
            }
            !s.is_zero()
        });
        if generic {
            return p;
        }
    }
}

pub fn gaussian_rational(rng: &mut SuiteRng) -> C {
    C::new(signed_rational(rng, 5, 6), if rng.gen_bool(0.5) { Q::zero() } else { signed_rational(rng, 5, 6) })
}

/// Random Möbius transformation with small Gaussian-rational coefficients.
pub fn mobius(rng: &mut SuiteRng) -> Mobius {
    loop {
        let [a, b, c, d] = [(); 4].map(|_| gaussian_rational(rng));
        if let Ok(m) = Mobius::new(a, b, c, d) {
            return m;
        }
    }
}

/// Random configuration of `n` distinct points, one of them at infinity with probability 1/3.
pub fn point_config(rng: &mut SuiteRng, n: usize) -> PointConfig {
    loop {
        let mut pts: Vec<Point> = (0..n).map(|_| Point::Finite(gaussian_rational(rng))).collect();
        if rng.gen_bool(1.0 / 3.0) {
            let i = rng.gen_range(0..n);
            pts[i] = Point::Infinity;
        }
        if let Ok(c) = PointConfig::new(pts) {
            return c;
        }
    }
}
