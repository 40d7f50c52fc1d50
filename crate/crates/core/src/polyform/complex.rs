//! Polytopal complexes: polytopes glued along faces by affine injections, and forms on them.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use super::form::Form;
use super::poly::Poly;
use crate::linalg;
use crate::polytope::Polytope;
use crate::rational::{self, Q};

/// `x ↦ matrix · x + offset`, with `matrix` stored row-major (`out × in`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    #[serde(with = "rational::mat")]
    pub matrix: Vec<Vec<Q>>,
    #[serde(with = "rational::vec")]
    pub offset: Vec<Q>,
}

impl AffineMap {
    pub fn new(matrix: Vec<Vec<Q>>, offset: Vec<Q>) -> Self {
        AffineMap { matrix, offset }
    }

    /// From degree-1 polynomial components; `None` if some component is not affine.
    pub fn from_polys(components: &[Poly]) -> Option<Self> {
        let mut matrix = Vec::new();
        let mut offset = Vec::new();
        for p in components {
            let (c, lin) = p.affine_parts()?;
            matrix.push(lin);
            offset.push(c);
        }
        Some(AffineMap { matrix, offset })
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
        AffineMap { matrix, offset: vec![Q::zero(); n] }
    }

    pub fn in_dim(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    pub fn out_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, b)| row.iter().zip(x).map(|(a, xi)| a * xi).sum::<Q>() + b)
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        let n = inner.in_dim();
        let matrix = self
            .matrix
            .iter()
            .map(|row| {
                (0..n)
                    .map(|j| row.iter().zip(&inner.matrix).map(|(a, r)| a * &r[j]).sum())
                    .collect()
            })
            .collect();
        let offset = self.apply(&inner.offset);
        AffineMap { matrix, offset }
    }

    /// Components as degree-1 polynomials in the source variables.
    pub fn as_polys(&self) -> Vec<Poly> {
        let n = self.in_dim();
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, b)| {
                if n == 0 {
                    Poly::constant(0, b.clone())
                } else {
                    Poly::affine(b, row)
                }
            })
            .collect()
    }

    /// Components as polynomials in exactly `n` variables (`n` may be zero).
    pub fn as_polys_in(&self, n: usize) -> Vec<Poly> {
        if n == 0 {
            self.offset.iter().map(|c| Poly::constant(0, c.clone())).collect()
        } else {
            self.as_polys()
        }
    }

    pub fn rank(&self) -> usize {
        if self.in_dim() == 0 {
            0
        } else {
            linalg::rank(&self.matrix)
        }
    }
}

/// Identifies polytope `source` with a face of polytope `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub source: usize,
    pub target: usize,
    pub map: AffineMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PolytopalComplex {
    pub polytopes: Vec<Polytope>,
    pub gluings: Vec<Gluing>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("gluing {0} refers to a missing polytope")]
    MissingPolytope(usize),
    #[error("gluing {0} has the wrong dimensions or is not injective")]
    BadMap(usize),
    #[error("gluing {0} does not land in a proper face of its target")]
    NotAFace(usize),
    #[error("gluings {0} and {1} identify two polytopes with the same face")]
    SharedFace(usize, usize),
    #[error("gluings {0} and {1} compose but no matching gluing exists")]
    NotCommutative(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("expected {expected} polytope forms, got {got}")]
    Count { expected: usize, got: usize },
    #[error("form on polytope {polytope} has {got} variables, expected {expected}")]
    Dimension { polytope: usize, expected: usize, got: usize },
    #[error("forms of mixed degree")]
    MixedDegree,
    #[error("form on polytope {face} differs from the restriction of the form on polytope {target}")]
    Incompatible { face: usize, target: usize },
}

impl PolytopalComplex {
    pub fn new(polytopes: Vec<Polytope>, gluings: Vec<Gluing>) -> Self {
        PolytopalComplex { polytopes, gluings }
    }

    /// Checks the gluing axioms on bounded polytopes: each map is injective into a proper face,
    /// no face receives two polytopes, and composable gluings have a composite gluing.
    pub fn validate(&self) -> Result<(), ComplexError> {
        let mut faces: BTreeMap<(usize, BTreeSet<usize>), usize> = BTreeMap::new();
        for (k, g) in self.gluings.iter().enumerate() {
            let (Some(src), Some(tgt)) = (self.polytopes.get(g.source), self.polytopes.get(g.target)) else {
                return Err(ComplexError::MissingPolytope(k));
            };
            if g.map.in_dim() != src.dim || g.map.out_dim() != tgt.dim || g.map.rank() != src.dim || src.dim >= tgt.dim {
                return Err(ComplexError::BadMap(k));
            }
            if !src.is_bounded() {
                continue;
            }
            let images: Vec<Vec<Q>> = src.vertices().iter().map(|v| g.map.apply(&v.point)).collect();
            if images.iter().any(|x| !tgt.contains_closure(x)) {
                return Err(ComplexError::NotAFace(k));
            }
            let tight: BTreeSet<usize> = (0..tgt.inequalities.len())
                .filter(|&i| images.iter().all(|x| tgt.inequalities[i].slack(x).is_zero()))
                .collect();
            if tight.is_empty() {
                return Err(ComplexError::NotAFace(k));
            }
            if let Some(&other) = faces.get(&(g.target, tight.clone())) {
                return Err(ComplexError::SharedFace(other, k));
            }
            faces.insert((g.target, tight), k);
        }
        for (a, ga) in self.gluings.iter().enumerate() {
            for (b, gb) in self.gluings.iter().enumerate() {
                if ga.target != gb.source {
                    continue;
                }
                let composite = gb.map.compose(&ga.map);
                let found = self
                    .gluings
                    .iter()
                    .any(|gc| gc.source == ga.source && gc.target == gb.target && gc.map == composite);
                if !found {
                    return Err(ComplexError::NotCommutative(a, b));
                }
            }
        }
        Ok(())
    }
}

/// One form per polytope of a complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexForm {
    pub forms: Vec<Form>,
}

impl ComplexForm {
    pub fn new(forms: Vec<Form>) -> Self {
        ComplexForm { forms }
    }

    pub fn degree(&self) -> Option<usize> {
        let d = self.forms.first()?.degree();
        self.forms.iter().all(|f| f.degree() == d).then_some(d)
    }

    pub fn d(&self) -> ComplexForm {
        ComplexForm::new(self.forms.iter().map(Form::d).collect())
    }

    pub fn wedge(&self, other: &ComplexForm) -> ComplexForm {
        ComplexForm::new(self.forms.iter().zip(&other.forms).map(|(a, b)| a.wedge(b)).collect())
    }
}

/// Checks that every gluing pulls the target's form back to the source's form.
pub fn validate_form(x: &PolytopalComplex, w: &ComplexForm) -> Result<(), FormError> {
    if w.forms.len() != x.polytopes.len() {
        return Err(FormError::Count { expected: x.polytopes.len(), got: w.forms.len() });
    }
    for (i, (p, f)) in x.polytopes.iter().zip(&w.forms).enumerate() {
        if f.nvars() != p.dim {
            return Err(FormError::Dimension { polytope: i, expected: p.dim, got: f.nvars() });
        }
    }
    if w.degree().is_none() {
        return Err(FormError::MixedDegree);
    }
    for g in &x.gluings {
        let pulled = w.forms[g.target].pullback(&g.map.as_polys());
        if pulled != w.forms[g.source] {
            return Err(FormError::Incompatible { face: g.source, target: g.target });
        }
    }
    Ok(())
}

/// The two unit squares `[0,1]×[0,1]` and `[-1,0]×[0,1]` sharing the segment on the `y` axis.
pub fn two_squares() -> PolytopalComplex {
    use crate::rational::q;
    let right = Polytope::cuboid(&[q(0), q(0)], &[q(1), q(1)]);
    let left = Polytope::cuboid(&[q(-1), q(0)], &[q(0), q(1)]);
    let edge = Polytope::cuboid(&[q(0)], &[q(1)]);
    // edge parameter y ↦ (0, y)
    let into = AffineMap::new(vec![vec![q(0)], vec![q(1)]], vec![q(0), q(0)]);
    PolytopalComplex::new(
        vec![right, left, edge],
        vec![Gluing { source: 2, target: 0, map: into.clone() }, Gluing { source: 2, target: 1, map: into }],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn one_form(a: i64, b: i64) -> Form {
        Form::dx(2, 0).scale(&q(a)).add(&Form::dx(2, 1).scale(&q(b)))
    }

    #[test]
    fn two_square_example_is_compatible() {
        let x = two_squares();
        assert_eq!(x.validate(), Ok(()));
        let w = ComplexForm::new(vec![one_form(1, 1), one_form(-2, 1), Form::dx(1, 0)]);
        assert_eq!(validate_form(&x, &w), Ok(()));
    }

    #[test]
    fn mismatched_left_form_is_reported() {
        let x = two_squares();
        let w = ComplexForm::new(vec![one_form(1, 1), one_form(1, 2), Form::dx(1, 0)]);
        assert_eq!(validate_form(&x, &w), Err(FormError::Incompatible { face: 2, target: 1 }));
    }

    #[test]
    fn constants_are_compatible() {
        let x = two_squares();
        let w = ComplexForm::new(vec![
            Form::function(Poly::one(2)),
            Form::function(Poly::one(2)),
            Form::function(Poly::one(1)),
        ]);
        assert_eq!(validate_form(&x, &w), Ok(()));
    }

    #[test]
    fn gluing_into_interior_is_rejected() {
        let mut x = two_squares();
        x.gluings[0].map.offset = vec![q(1) / q(2), q(0)];
        assert_eq!(x.validate(), Err(ComplexError::NotAFace(0)));
    }

    #[test]
    fn composite_gluing_required() {
        use crate::polytope::Polytope;
        // point -> edge -> square without the point -> square gluing
        let square = Polytope::unit_cube(2);
        let edge = Polytope::unit_cube(1);
        let point = Polytope::new(0, vec![]);
        let e_in_s = AffineMap::new(vec![vec![q(1)], vec![q(0)]], vec![q(0), q(0)]);
        let p_in_e = AffineMap::new(vec![vec![]], vec![q(0)]);
        let mut x = PolytopalComplex::new(
            vec![square, edge, point],
            vec![Gluing { source: 1, target: 0, map: e_in_s.clone() }, Gluing { source: 2, target: 1, map: p_in_e.clone() }],
        );
        assert_eq!(x.validate(), Err(ComplexError::NotCommutative(1, 0)));
        x.gluings.push(Gluing { source: 2, target: 0, map: e_in_s.compose(&p_in_e) });
        assert_eq!(x.validate(), Ok(()));
    }
}
