//! Convex polytopes in H-description with exact vertex enumeration, pulling
//! triangulation and volume.
//!
//! Vertex enumeration solves every square subsystem of tight constraints, which is
//! fine for the handful of constraints and dimensions arising here.

use std::collections::BTreeSet;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, Matrix};
use crate::rational::{self, Q};

/// `normal · x <= bound`, or `<` when `strict`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    #[serde(with = "rational::vec")]
    pub normal: Vec<Q>,
    #[serde(with = "rational")]
    pub bound: Q,
    pub strict: bool,
}

impl Inequality {
    pub fn new(normal: Vec<Q>, bound: Q, strict: bool) -> Self {
        Inequality { normal, bound, strict }
    }

    pub fn slack(&self, x: &[Q]) -> Q {
        let dot: Q = self.normal.iter().zip(x).map(|(a, b)| a * b).sum();
        &self.bound - dot
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polytope {
    pub dim: usize,
    pub inequalities: Vec<Inequality>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub point: Vec<Q>,
    /// Indices of the inequalities tight at this vertex.
    pub tight: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolytopeError {
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope has empty interior")]
    EmptyInterior,
}

impl Polytope {
    pub fn new(dim: usize, inequalities: Vec<Inequality>) -> Self {
        Polytope { dim, inequalities }
    }

    /// Axis-aligned box `lo_i <= x_i <= hi_i`.
    pub fn cuboid(lo: &[Q], hi: &[Q]) -> Self {
        let dim = lo.len();
        let mut ineqs = Vec::new();
        for i in 0..dim {
            let mut n = vec![Q::zero(); dim];
            n[i] = Q::from_integer((-1).into());
            ineqs.push(Inequality::new(n.clone(), -lo[i].clone(), false));
            n[i] = Q::from_integer(1.into());
            ineqs.push(Inequality::new(n, hi[i].clone(), false));
        }
        Polytope::new(dim, ineqs)
    }

    /// Closed unit cube `[0, 1]^dim`.
    pub fn unit_cube(dim: usize) -> Self {
        Self::cuboid(&vec![Q::zero(); dim], &vec![Q::from_integer(1.into()); dim])
    }

    /// Standard simplex `{x >= 0, Σx <= 1}`.
    pub fn standard_simplex(dim: usize) -> Self {
        let mut ineqs = Vec::new();
        for i in 0..dim {
            let mut n = vec![Q::zero(); dim];
            n[i] = Q::from_integer((-1).into());
            ineqs.push(Inequality::new(n, Q::zero(), false));
        }
        ineqs.push(Inequality::new(vec![Q::from_integer(1.into()); dim], Q::from_integer(1.into()), false));
        Polytope::new(dim, ineqs)
    }

    /// Membership in the closure (strictness ignored).
    pub fn contains_closure(&self, x: &[Q]) -> bool {
        self.inequalities.iter().all(|c| !c.slack(x).is_negative())
    }

    /// Membership respecting strict inequalities.
    pub fn contains(&self, x: &[Q]) -> bool {
        self.inequalities.iter().all(|c| {
            let s = c.slack(x);
            if c.strict {
                s.is_positive()
            } else {
                !s.is_negative()
            }
        })
    }

    pub fn contains_interior(&self, x: &[Q]) -> bool {
        self.inequalities.iter().all(|c| c.slack(x).is_positive())
    }

    /// Vertices of the closure.
    pub fn vertices(&self) -> Vec<Vertex> {
        let m = self.inequalities.len();
        let d = self.dim;
        if d == 0 {
            return if self.contains_closure(&[]) {
                vec![Vertex { point: vec![], tight: (0..m).collect() }]
            } else {
                vec![]
            };
        }
        let mut out: Vec<Vertex> = Vec::new();
        for subset in combinations(m, d) {
            let a: Matrix = subset.iter().map(|&i| self.inequalities[i].normal.clone()).collect();
            let b: Vec<Q> = subset.iter().map(|&i| self.inequalities[i].bound.clone()).collect();
            let Some(x) = linalg::solve_square(&a, &b) else { continue };
            if !self.contains_closure(&x) || out.iter().any(|v| v.point == x) {
                continue;
            }
            let tight = (0..m).filter(|&i| self.inequalities[i].slack(&x).is_zero()).collect();
            out.push(Vertex { point: x, tight });
        }
        out.sort_by(|a, b| a.point.cmp(&b.point));
        out
    }

    /// True when the recession cone `{d : normal·d <= 0}` is trivial.
    pub fn is_bounded(&self) -> bool {
        let d = self.dim;
        if d == 0 {
            return true;
        }
        let normals: Matrix = self.inequalities.iter().map(|c| c.normal.clone()).collect();
        if linalg::rank(&normals) < d {
            return false;
        }
        for subset in combinations(self.inequalities.len(), d - 1) {
            let a: Matrix = subset.iter().map(|&i| normals[i].clone()).collect();
            let ker = if a.is_empty() {
                (0..d).map(|i| (0..d).map(|j| Q::from_integer(((i == j) as i64).into())).collect()).collect()
            } else {
                linalg::kernel(&a, d)
            };
            if ker.len() != 1 {
                continue;
            }
            for sgn in [1i64, -1] {
                let dir: Vec<Q> = ker[0].iter().map(|x| x * Q::from_integer(sgn.into())).collect();
                let ok = normals.iter().all(|n| {
                    let dot: Q = n.iter().zip(&dir).map(|(a, b)| a * b).sum();
                    !dot.is_positive()
                });
                if ok {
                    return false;
                }
            }
        }
        true
    }

    /// Simplices (as vertex index lists into `vertices`) of a pulling triangulation.
    pub fn triangulate(&self, vertices: &[Vertex]) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..vertices.len()).collect();
        let k = affine_dim(vertices, &all);
        let mut out = Vec::new();
        triangulate_face(self, vertices, &all, k, &mut out);
        out
    }

    /// Euclidean volume of the closure. A 0-dimensional polytope that is a point has volume 1.
    pub fn volume(&self) -> Result<Q, PolytopeError> {
        if !self.is_bounded() {
            return Err(PolytopeError::Unbounded);
        }
        let verts = self.vertices();
        if verts.is_empty() {
            return Err(PolytopeError::EmptyInterior);
        }
        let all: Vec<usize> = (0..verts.len()).collect();
        if affine_dim(&verts, &all) < self.dim {
            return Err(PolytopeError::EmptyInterior);
        }
        if self.dim == 0 {
            return Ok(Q::from_integer(1.into()));
        }
        let fact = Q::from_integer(rational::factorial(self.dim));
        let mut vol = Q::zero();
        for s in self.triangulate(&verts) {
            vol += simplex_det(&verts, &s).abs();
        }
        Ok(vol / fact)
    }

    /// Interior non-empty: the closure has full affine dimension.
    pub fn has_interior(&self) -> bool {
        let verts = self.vertices();
        let all: Vec<usize> = (0..verts.len()).collect();
        !verts.is_empty() && affine_dim(&verts, &all) == self.dim
    }
}

/// `det(v1 - v0, …, vd - v0)` for a simplex given by vertex indices.
pub fn simplex_det(verts: &[Vertex], s: &[usize]) -> Q {
    let v0 = &verts[s[0]].point;
    let m: Matrix = s[1..]
        .iter()
        .map(|&i| verts[i].point.iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    linalg::determinant(&m)
}

fn affine_dim(verts: &[Vertex], subset: &[usize]) -> usize {
    if subset.len() <= 1 {
        return 0;
    }
    let v0 = &verts[subset[0]].point;
    let m: Matrix = subset[1..]
        .iter()
        .map(|&i| verts[i].point.iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    linalg::rank(&m)
}

fn triangulate_face(p: &Polytope, verts: &[Vertex], face: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 0 {
        out.push(vec![face[0]]);
        return;
    }
    let apex = face[0];
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for j in 0..p.inequalities.len() {
        let sub: Vec<usize> = face.iter().copied().filter(|&v| verts[v].tight.contains(&j)).collect();
        if sub.len() == face.len() || sub.contains(&apex) || sub.len() < k {
            continue;
        }
        if affine_dim(verts, &sub) == k - 1 {
            facets.insert(sub);
        }
    }
    for f in facets {
        let mut sub = Vec::new();
        triangulate_face(p, verts, &f, k - 1, &mut sub);
        for mut s in sub {
            s.insert(0, apex);
            out.push(s);
        }
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn cube_and_simplex_volumes() {
        assert_eq!(Polytope::unit_cube(3).volume().unwrap(), q(1));
        assert_eq!(Polytope::standard_simplex(3).volume().unwrap(), qf(1, 6));
        assert_eq!(Polytope::cuboid(&[q(0), q(-1)], &[q(2), q(1)]).volume().unwrap(), q(4));
        assert_eq!(Polytope::unit_cube(3).vertices().len(), 8);
    }

    #[test]
    fn octahedron_is_not_simple() {
        // |x| + |y| + |z| <= 1: volume 4/3, vertices with four tight facets
        let mut ineqs = Vec::new();
        for sx in [-1, 1] {
            for sy in [-1, 1] {
                for sz in [-1, 1] {
                    ineqs.push(Inequality::new(vec![q(sx), q(sy), q(sz)], q(1), false));
                }
            }
        }
        let p = Polytope::new(3, ineqs);
        assert_eq!(p.vertices().len(), 6);
        assert_eq!(p.volume().unwrap(), qf(4, 3));
    }

    #[test]
    fn unbounded_and_empty() {
        let half = Polytope::new(2, vec![Inequality::new(vec![q(1), q(0)], q(0), false)]);
        assert!(!half.is_bounded());
        assert_eq!(half.volume(), Err(PolytopeError::Unbounded));
        let flat = Polytope::cuboid(&[q(0), q(0)], &[q(1), q(0)]);
        assert_eq!(flat.volume(), Err(PolytopeError::EmptyInterior));
        let none = Polytope::cuboid(&[q(1), q(0)], &[q(0), q(1)]);
        assert_eq!(none.volume(), Err(PolytopeError::EmptyInterior));
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
