//! Curvature 2-forms on top cells and exact assembly of ψ-class intersection numbers.
//!
//! Each top cell is integrated in a chart of free edge coordinates. The cell is oriented so
//! that the top power of `Σ_i p_i² ω_i` is positive in that chart, which makes every
//! contribution independent of the chart.

use num::{BigInt, One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cells::{self, cell_fiber_product, cell_polytope_with_order, CellError, CellPolytope};
use crate::enumerate::{enumerate_trivalent, EnumerateError, GraphClass};
use crate::linalg;
use crate::permgraph::StableRibbonGraph;
use crate::polyform::form::basis;
use crate::polyform::{Form, Poly};
use crate::polytope::PolytopeError;
use crate::rational::{self, Q};

/// Overall sign fixed once by requiring `⟨τ_0³⟩ = 1`.
pub const GLOBAL_SIGN: i32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntersectError {
    #[error("exponents sum to {got}, expected 3g - 3 + n = {expected}")]
    DimensionMismatch { expected: i64, got: i64 },
    #[error("form of degree {form} on a cell of dimension {cell}")]
    DegreeMismatch { form: usize, cell: usize },
    #[error("perimeter equations are rank deficient")]
    RankDeficient,
    #[error("reference form vanishes on cell {0}")]
    DegenerateOrientation(String),
    #[error("cell polytope: {0}")]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Cell(#[from] CellError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionQuery {
    pub genus: u32,
    pub d: Vec<u32>,
    pub perimeters: Vec<Q>,
}

impl IntersectionQuery {
    /// Checks `Σ d_i = 3g - 3 + n`; perimeters default to distinct primes.
    pub fn new(genus: u32, d: Vec<u32>, perimeters: Option<Vec<Q>>) -> Result<Self, IntersectError> {
        let n = d.len();
        let expected = 3 * genus as i64 - 3 + n as i64;
        let got: i64 = d.iter().map(|&x| x as i64).sum();
        if expected != got {
            return Err(IntersectError::DimensionMismatch { expected, got });
        }
        let perimeters = perimeters.unwrap_or_else(|| cells::default_perimeters(n));
        if perimeters.len() != n {
            return Err(CellError::PerimeterCount { expected: n, got: perimeters.len() }.into());
        }
        if let Some(i) = perimeters.iter().position(|p| !p.is_positive()) {
            return Err(CellError::NonPositivePerimeter(i).into());
        }
        Ok(IntersectionQuery { genus, d, perimeters })
    }

    /// Half the dimension of a top cell.
    pub fn top_degree(&self) -> usize {
        self.d.iter().map(|&x| x as usize).sum()
    }
}

/// `ω_i = p^{-2} Σ_{a<b≤k-1} dl_{e_a} ∧ dl_{e_b}` over the sides of face `label`, read from its
/// smallest half-edge. The form lives on all `E` edge lengths.
pub fn omega(g: &StableRibbonGraph, label: usize, p: &Q) -> Result<Form, IntersectError> {
    omega_from_side(g, label, p, 0)
}

/// As [`omega`], reading the face from side `start` (modulo its length).
pub fn omega_from_side(g: &StableRibbonGraph, label: usize, p: &Q, start: usize) -> Result<Form, IntersectError> {
    let faces = g.faces();
    let face = faces.iter().find(|f| f.label == label).ok_or(CellError::NoSuchFace(label))?;
    let mut sides = face.edges();
    let k = sides.len();
    sides.rotate_left(start % k);
    let e = g.edge_count();
    let mut out = Form::zero(e, 2);
    for a in 0..k.saturating_sub(1) {
        for b in a + 1..k - 1 {
            out = out.add(&Form::dx(e, sides[a]).wedge(&Form::dx(e, sides[b])));
        }
    }
    Ok(out.scale(&(p * p).recip()))
}

/// Pull-back of a form on edge lengths to the free coordinates of the cell's chart.
pub fn restrict_form(form: &Form, cell: &CellPolytope) -> Result<Form, IntersectError> {
    let lengths = cell.length_polys().ok_or(CellError::Empty)?;
    let m = cell.dimension().unwrap_or(0);
    if m == 0 {
        return Ok(Form::zero(0, form.degree()));
    }
    Ok(form.pullback(&lengths))
}

/// Top coefficient of `form` restricted to the cell, in the chart's coordinate order.
pub fn restrict_to_cell(form: &Form, cell: &CellPolytope) -> Result<Q, IntersectError> {
    let dim = cell.dimension().ok_or(CellError::Empty)?;
    if cell.rank_deficient() {
        return Err(IntersectError::RankDeficient);
    }
    if form.degree() != dim {
        return Err(IntersectError::DegreeMismatch { form: form.degree(), cell: dim });
    }
    if dim == 0 {
        return Ok(form.coefficient(0).constant_term());
    }
    top_coefficient(&restrict_form(form, cell)?)
}

fn top_coefficient(f: &Form) -> Result<Q, IntersectError> {
    let c = f.coefficient(basis(&(0..f.nvars()).collect::<Vec<_>>()));
    Ok(c.as_constant().expect("constant coefficients on cells"))
}

fn wedge_power(w: &Form, k: usize) -> Form {
    (0..k).fold(Form::function(Poly::one(w.nvars())), |acc, _| acc.wedge(w))
}

/// Sign of the top coefficient of `(Σ_i p_i² ω_i)^D / D!` in the cell's chart.
pub fn orientation_sign(cell: &CellPolytope) -> Result<i32, IntersectError> {
    let dim = cell.dimension().ok_or(CellError::Empty)?;
    if dim == 0 {
        return Ok(1);
    }
    let g = &cell.graph;
    let mut reference = Form::zero(g.edge_count(), 2);
    for (face, p) in g.faces().iter().zip(&cell.perimeters) {
        reference = reference.add(&omega(g, face.label, p)?.scale(&(p * p)));
    }
    let top = wedge_power(&restrict_form(&reference, cell)?, dim / 2);
    let c = top_coefficient(&top)? / Q::from_integer(rational::factorial(dim / 2));
    match linalg::sign(&c) {
        0 => Err(IntersectError::DegenerateOrientation(format!("{:?}", g.sigma0()))),
        s => Ok(s),
    }
}

/// One line of the audit ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellContribution {
    pub key: String,
    pub aut_order: usize,
    pub dimension: usize,
    pub empty: bool,
    pub sign: i32,
    #[serde(with = "rational")]
    pub coefficient: Q,
    #[serde(with = "rational")]
    pub volume: Q,
    #[serde(with = "rational")]
    pub contribution: Q,
    pub free_edges: Vec<usize>,
}

/// `sign · c · vol / |Aut|` for one top cell, with pivots chosen in `order`.
pub fn integrate_cell(class: &GraphClass, query: &IntersectionQuery, order: &[usize]) -> Result<CellContribution, IntersectError> {
    let g = &class.graph;
    let cell = cell_polytope_with_order(g, &query.perimeters, order)?;
    let dim = cell.dimension().unwrap_or(0);
    let zero = |empty| CellContribution {
        key: class.key.short_hex(),
        aut_order: class.aut_order,
        dimension: dim,
        empty,
        sign: 0,
        coefficient: Q::zero(),
        volume: Q::zero(),
        contribution: Q::zero(),
        free_edges: cell.chart.as_ref().map(|c| c.free.clone()).unwrap_or_default(),
    };
    if cell.empty {
        return Ok(zero(true));
    }
    if 2 * query.top_degree() != dim {
        return Err(IntersectError::DegreeMismatch { form: 2 * query.top_degree(), cell: dim });
    }
    let faces = g.faces();
    let mut product = Form::function(Poly::one(dim));
    for ((face, p), &di) in faces.iter().zip(&query.perimeters).zip(&query.d) {
        let w = restrict_form(&omega(g, face.label, p)?, &cell)?;
        product = product.wedge(&wedge_power(&w, di as usize));
    }
    let coefficient = if dim == 0 { Q::one() } else { top_coefficient(&product)? };
    let sign = orientation_sign(&cell)?;
    let volume = cell.polytope.as_ref().expect("chart exists").volume()?;
    let contribution = Q::from_integer(BigInt::from(sign * GLOBAL_SIGN)) * &coefficient * &volume
        / Q::from_integer(BigInt::from(class.aut_order));
    Ok(CellContribution { sign, coefficient, volume, contribution, ..zero(false) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionResult {
    pub genus: u32,
    pub d: Vec<u32>,
    #[serde(with = "rational::vec")]
    pub perimeters: Vec<Q>,
    #[serde(with = "rational")]
    pub value: Q,
    pub ledger: Vec<CellContribution>,
}

/// Sum of cell contributions over all trivalent classes, ordered by key.
pub fn intersection_number(query: &IntersectionQuery) -> Result<IntersectionResult, IntersectError> {
    let classes = enumerate_trivalent(query.genus, query.d.len())?;
    intersection_number_over(query, &classes, |_, e| (0..e).collect())
}

/// As [`intersection_number`] over given classes, choosing each chart by `order(class, E)`.
pub fn intersection_number_over(
    query: &IntersectionQuery,
    classes: &[GraphClass],
    order: impl Fn(usize, usize) -> Vec<usize> + Sync,
) -> Result<IntersectionResult, IntersectError> {
    let ledger: Vec<CellContribution> = classes
        .par_iter()
        .enumerate()
        .map(|(i, c)| integrate_cell(c, query, &order(i, c.graph.edge_count())))
        .collect::<Result<_, _>>()?;
    let value = ledger.iter().map(|c| c.contribution.clone()).sum();
    Ok(IntersectionResult { genus: query.genus, d: query.d.clone(), perimeters: query.perimeters.clone(), value, ledger })
}

/// Outcome of comparing `dα` on a cell-times-polygon complex with the curvature form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicReport {
    pub face: usize,
    /// No `dt` appears in `dα` on any arc.
    pub fiber_free: bool,
    /// `dα = -π*ω` on every arc.
    pub equals_minus_pullback: bool,
    /// `dα = +π*ω` on every arc.
    pub equals_pullback: bool,
}

/// Computes `dα` symbolically on every arc of the product of `cell` with face `label`.
pub fn alpha_basic_check(cell: &CellPolytope, label: usize) -> Result<BasicReport, IntersectError> {
    let idx = cell.graph.faces().iter().position(|f| f.label == label).ok_or(CellError::NoSuchFace(label))?;
    let product = cell_fiber_product(cell, label)?;
    let m = product.base.dim;
    let w = restrict_form(&omega(&cell.graph, label, &cell.perimeters[idx])?, cell)?;
    let pulled = if m == 0 {
        Form::zero(1, 2)
    } else {
        w.pullback(&(0..m).map(|i| Poly::var(m + 1, i)).collect::<Vec<_>>())
    };
    let mut report = BasicReport { face: label, fiber_free: true, equals_minus_pullback: true, equals_pullback: true };
    for j in 0..product.arc_count() {
        let da = product.d_alpha(j);
        report.fiber_free &= !da.involves_differential(m);
        report.equals_minus_pullback &= da == pulled.scale(&Q::from_integer((-1).into()));
        report.equals_pullback &= da == pulled;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::cell_polytope;
    use crate::permgraph::samples;
    use crate::rational::{q, qf};

    #[test]
    fn omega_on_triangle_face() {
        // planar theta: face of three distinct edges
        let g = samples::theta_planar();
        for f in g.faces() {
            let w = omega(&g, f.label, &q(3)).unwrap();
            let e = f.edges();
            let expect = Form::dx(3, e[0]).wedge(&Form::dx(3, e[1])).scale(&qf(1, 9));
            if f.degree() == 3 {
                assert_eq!(w, expect);
            }
        }
    }

    #[test]
    fn single_side_omega_vanishes() {
        let g = samples::single_edge(1, 0);
        for f in g.faces() {
            if f.degree() == 1 {
                assert!(omega(&g, f.label, &q(2)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn starting_side_is_irrelevant_on_cells() {
        let g = samples::theta_one_face();
        let cell = cell_polytope(&g, &[q(12)]).unwrap();
        let base = restrict_form(&omega(&g, 1, &q(12)).unwrap(), &cell).unwrap();
        for s in 1..6 {
            let other = restrict_form(&omega_from_side(&g, 1, &q(12), s).unwrap(), &cell).unwrap();
            assert_eq!(base, other);
        }
    }

    #[test]
    fn one_one_hand_value() {
        let g = samples::theta_one_face();
        let cell = cell_polytope(&g, &[q(12)]).unwrap();
        assert_eq!(orientation_sign(&cell).unwrap().abs(), 1);
        let w = omega(&g, 1, &q(12)).unwrap();
        let c = restrict_to_cell(&w, &cell).unwrap();
        let vol = cell.polytope.as_ref().unwrap().volume().unwrap();
        assert_eq!((c * vol).abs(), qf(1, 4));
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let g = samples::theta_one_face();
        let cell = cell_polytope(&g, &[q(12)]).unwrap();
        let w = omega(&g, 1, &q(12)).unwrap();
        assert!(matches!(restrict_to_cell(&w.wedge(&w), &cell), Err(IntersectError::DegreeMismatch { .. })));
    }

    #[test]
    fn query_dimension_checked() {
        assert!(matches!(IntersectionQuery::new(0, vec![1, 0, 0], None), Err(IntersectError::DimensionMismatch { .. })));
    }

    #[test]
    fn alpha_is_basic_on_theta() {
        let g = samples::theta_one_face();
        let cell = cell_polytope(&g, &[q(12)]).unwrap();
        let r = alpha_basic_check(&cell, 1).unwrap();
        assert!(r.fiber_free);
        assert!(r.equals_minus_pullback);
    }
}
