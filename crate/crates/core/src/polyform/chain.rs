//! Simplicial chains in a polytopal complex and exact integration of forms over them.

use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::complex::{ComplexForm, PolytopalComplex};
use super::form::{basis, Form};
use super::poly::Poly;
use crate::polytope::{simplex_det, Polytope};
use crate::rational::{self, Q};

/// Affine simplex `s ↦ v0 + Σ s_i (v_i - v0)` inside one polytope's chart.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex {
    pub polytope: usize,
    #[serde(with = "rational::mat")]
    pub vertices: Vec<Vec<Q>>,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Parametrization from the standard simplex as polynomials in `dim()` variables.
    pub fn parametrization(&self) -> Vec<Poly> {
        let k = self.dim();
        let v0 = &self.vertices[0];
        (0..v0.len())
            .map(|c| {
                let lin: Vec<Q> = (1..=k).map(|i| &self.vertices[i][c] - &v0[c]).collect();
                if k == 0 {
                    Poly::constant(0, v0[c].clone())
                } else {
                    Poly::affine(&v0[c], &lin)
                }
            })
            .collect()
    }

    fn face(&self, i: usize) -> Simplex {
        let mut vertices = self.vertices.clone();
        vertices.remove(i);
        Simplex { polytope: self.polytope, vertices }
    }

    /// Sorted vertices and the parity of the sorting permutation.
    fn sorted(&self) -> (Simplex, bool) {
        let mut v = self.vertices.clone();
        let mut odd = false;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    odd = !odd;
                }
            }
        }
        (Simplex { polytope: self.polytope, vertices: v }, odd)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainTerm {
    #[serde(with = "rational")]
    pub coeff: Q,
    pub simplex: Simplex,
}

/// Formal rational combination of `degree`-simplices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub degree: usize,
    pub terms: Vec<ChainTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("simplex of dimension {got} in a chain of degree {expected}")]
    SimplexDegree { expected: usize, got: usize },
    #[error("form of degree {form} cannot be integrated over a {chain}-chain")]
    DegreeMismatch { form: usize, chain: usize },
    #[error("simplex refers to missing polytope {0}")]
    MissingPolytope(usize),
    #[error("simplex vertex outside polytope {0}")]
    Outside(usize),
    #[error("polytope {0} is unbounded or has empty interior")]
    BadPolytope(usize),
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Chain { degree, terms: vec![] }
    }

    pub fn push(&mut self, coeff: Q, simplex: Simplex) {
        self.terms.push(ChainTerm { coeff, simplex });
    }

    pub fn is_zero(&self) -> bool {
        self.normalized().terms.is_empty()
    }

    /// Merges simplices equal up to vertex order and drops zero coefficients.
    pub fn normalized(&self) -> Chain {
        let mut acc: BTreeMap<Simplex, Q> = BTreeMap::new();
        for t in &self.terms {
            let (s, odd) = t.simplex.sorted();
            let c = if odd { -t.coeff.clone() } else { t.coeff.clone() };
            *acc.entry(s).or_insert_with(Q::zero) += c;
        }
        Chain {
            degree: self.degree,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(simplex, coeff)| ChainTerm { coeff, simplex }).collect(),
        }
    }

    /// `∂ [v0 … vk] = Σ (-1)^i [v0 … v̂i … vk]`. Boundary of a 0-chain is the empty (-1)-chain,
    /// represented as the zero 0-chain.
    pub fn boundary(&self) -> Chain {
        if self.degree == 0 {
            return Chain::zero(0);
        }
        let mut out = Chain::zero(self.degree - 1);
        for t in &self.terms {
            for i in 0..=self.degree {
                let c = if i % 2 == 0 { t.coeff.clone() } else { -t.coeff.clone() };
                out.push(c, t.simplex.face(i));
            }
        }
        out.normalized()
    }

    pub fn check(&self, x: &PolytopalComplex) -> Result<(), ChainError> {
        for t in &self.terms {
            let s = &t.simplex;
            if s.dim() != self.degree {
                return Err(ChainError::SimplexDegree { expected: self.degree, got: s.dim() });
            }
            let p = x.polytopes.get(s.polytope).ok_or(ChainError::MissingPolytope(s.polytope))?;
            if s.vertices.iter().any(|v| v.len() != p.dim || !p.contains_closure(v)) {
                return Err(ChainError::Outside(s.polytope));
            }
        }
        Ok(())
    }

    /// Oriented triangulation of a full-dimensional bounded polytope: every simplex is
    /// positively oriented relative to the chart, times `orientation`.
    pub fn of_polytope(index: usize, p: &Polytope, orientation: i32) -> Result<Chain, ChainError> {
        if !p.is_bounded() || !p.has_interior() {
            return Err(ChainError::BadPolytope(index));
        }
        let verts = p.vertices();
        let mut out = Chain::zero(p.dim);
        for mut s in p.triangulate(&verts) {
            if p.dim > 0 && simplex_det(&verts, &s).is_negative() {
                s.swap(0, 1);
            }
            let simplex = Simplex { polytope: index, vertices: s.iter().map(|&i| verts[i].point.clone()).collect() };
            out.push(Q::from_integer(orientation.into()), simplex);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Chain) -> Chain {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }
}

/// Integral of a single form over one affine simplex.
pub fn integrate_simplex(w: &Form, s: &Simplex) -> Q {
    let k = s.dim();
    if k == 0 {
        return w.coefficient(0).eval(&s.vertices[0]);
    }
    let pulled = w.pullback(&s.parametrization());
    let top = pulled.coefficient(basis(&(0..k).collect::<Vec<_>>()));
    top.integrate_standard_simplex()
}

pub fn integrate(w: &ComplexForm, c: &Chain, x: &PolytopalComplex) -> Result<Q, ChainError> {
    c.check(x)?;
    let mut total = Q::zero();
    for t in &c.terms {
        let f = &w.forms[t.simplex.polytope];
        if f.degree() != c.degree {
            return Err(ChainError::DegreeMismatch { form: f.degree(), chain: c.degree });
        }
        total += &t.coeff * integrate_simplex(f, &t.simplex);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StokesResult {
    pub lhs: Q,
    pub rhs: Q,
}

impl StokesResult {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Compares `∫_C dα` with `∫_{∂C} α`.
pub fn stokes_check(c: &Chain, alpha: &ComplexForm, x: &PolytopalComplex) -> Result<StokesResult, ChainError> {
    let lhs = integrate(&alpha.d(), c, x)?;
    let rhs = if c.degree == 0 { Q::zero() } else { integrate(alpha, &c.boundary(), x)? };
    Ok(StokesResult { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::complex::two_squares;
    use crate::rational::{q, qf};

    #[test]
    fn boundary_of_boundary_vanishes() {
        let p = Polytope::unit_cube(3);
        let c = Chain::of_polytope(0, &p, 1).unwrap();
        assert!(!c.boundary().is_zero());
        assert!(c.boundary().boundary().is_zero());
    }

    #[test]
    fn area_of_triangulated_square() {
        let x = two_squares();
        let vol = Form::monomial(Poly::one(2), &[0, 1]);
        let c = Chain::of_polytope(1, &x.polytopes[1], 1).unwrap();
        let w = ComplexForm::new(vec![vol.clone(), vol, Form::zero(1, 2)]);
        assert_eq!(integrate(&w, &c, &x).unwrap(), q(1));
        let flipped = Chain::of_polytope(1, &x.polytopes[1], -1).unwrap();
        assert_eq!(integrate(&w, &flipped, &x).unwrap(), q(-1));
    }

    #[test]
    fn stokes_on_two_squares() {
        let x = two_squares();
        // α = x y dy on both squares, y dy on the shared edge restricted: pulls back to 0
        let xy = &Poly::var(2, 0) * &Poly::var(2, 1);
        let alpha = ComplexForm::new(vec![
            Form::monomial(xy.clone(), &[1]),
            Form::monomial(xy, &[1]),
            Form::zero(1, 1),
        ]);
        let c = Chain::of_polytope(0, &x.polytopes[0], 1).unwrap().add(&Chain::of_polytope(1, &x.polytopes[1], 1).unwrap());
        let r = stokes_check(&c, &alpha, &x).unwrap();
        assert!(r.holds());
        // ∫ y dx∧dy over [0,1]^2 is 1/2, over [-1,0]×[0,1] also 1/2
        assert_eq!(r.lhs, q(1));
        let _ = qf(1, 2);
    }

    #[test]
    fn point_evaluation() {
        let f = Form::function(&Poly::var(2, 0) + &Poly::one(2));
        let s = Simplex { polytope: 0, vertices: vec![vec![q(2), q(5)]] };
        assert_eq!(integrate_simplex(&f, &s), q(3));
    }
}
