//! Cells of the metric ribbon graph complex at fixed perimeters, the polygon fibers of the
//! face bundles and the connection form `α` on the product of a cell with a fiber.

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::enumerate::{canonical_form, canonical_key, CanonicalKey};
use crate::linalg::{self, AffineSolution};
use crate::permgraph::{GraphFile, StableRibbonGraph, Violation};
use crate::polyform::{AffineMap, CircleBundle, ComplexForm, FiberArc, Form, Gluing, PolytopalComplex, Poly};
use crate::polytope::{Inequality, Polytope};
use crate::rational::{self, Q};
use crate::stable::contract_edge;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CellError {
    #[error("expected {expected} perimeters, got {got}")]
    PerimeterCount { expected: usize, got: usize },
    #[error("perimeter {0} is not positive")]
    NonPositivePerimeter(usize),
    #[error("no face labeled {0}")]
    NoSuchFace(usize),
    #[error("cell polytope is empty")]
    Empty,
    #[error("polygon fiber needs at least one side, all positive")]
    BadFiber,
    #[error("invalid graph: {0}")]
    Invalid(#[from] Violation),
}

/// `{l ∈ ℝ^E : l > 0, M l = p}` in a chart of free edge coordinates.
#[derive(Debug, Clone)]
pub struct CellPolytope {
    pub graph: StableRibbonGraph,
    pub perimeters: Vec<Q>,
    pub incidence: Vec<Vec<u32>>,
    pub rank: usize,
    /// `None` when `M l = p` has no solution at all.
    pub chart: Option<AffineSolution>,
    /// `l_e > 0` for every edge, in the free coordinates of `chart`.
    pub polytope: Option<Polytope>,
    pub empty: bool,
}

pub fn cell_polytope(g: &StableRibbonGraph, p: &[Q]) -> Result<CellPolytope, CellError> {
    let order: Vec<usize> = (0..g.edge_count()).collect();
    cell_polytope_with_order(g, p, &order)
}

/// As [`cell_polytope`], choosing pivots among the edge columns in `order`.
pub fn cell_polytope_with_order(g: &StableRibbonGraph, p: &[Q], order: &[usize]) -> Result<CellPolytope, CellError> {
    g.validate()?;
    let n = g.face_count();
    if p.len() != n {
        return Err(CellError::PerimeterCount { expected: n, got: p.len() });
    }
    if let Some(i) = p.iter().position(|x| !x.is_positive()) {
        return Err(CellError::NonPositivePerimeter(i));
    }
    let incidence = g.incidence_matrix();
    let m: Vec<Vec<Q>> = incidence.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
    let rank = linalg::rank(&m);
    let chart = linalg::solve_affine(&m, p, order);
    let polytope = chart.as_ref().map(|sol| {
        let dim = sol.free.len();
        let inequalities = (0..g.edge_count())
            .map(|e| {
                let (c, lin) = sol.coordinate(e);
                Inequality::new(lin.iter().map(|a| -a).collect(), c, true)
            })
            .collect();
        Polytope::new(dim, inequalities)
    });
    let empty = match (&chart, &polytope) {
        (Some(sol), Some(poly)) => {
            if sol.free.is_empty() {
                !sol.point(&[]).iter().all(Signed::is_positive)
            } else {
                !poly.has_interior()
            }
        }
        _ => true,
    };
    Ok(CellPolytope { graph: g.clone(), perimeters: p.to_vec(), incidence, rank, chart, polytope, empty })
}

impl CellPolytope {
    pub fn dimension(&self) -> Option<usize> {
        self.chart.as_ref().map(|c| c.free.len())
    }

    /// Fewer independent perimeter equations than faces.
    pub fn rank_deficient(&self) -> bool {
        self.rank < self.perimeters.len()
    }

    /// Edge lengths as affine polynomials in the free coordinates.
    pub fn length_polys(&self) -> Option<Vec<Poly>> {
        let sol = self.chart.as_ref()?;
        let m = sol.free.len();
        Some(
            (0..self.graph.edge_count())
                .map(|e| {
                    let (c, lin) = sol.coordinate(e);
                    if m == 0 {
                        Poly::constant(0, c)
                    } else {
                        Poly::affine(&c, &lin)
                    }
                })
                .collect(),
        )
    }

    pub fn edge_lengths(&self, free: &[Q]) -> Option<Vec<Q>> {
        Some(self.chart.as_ref()?.point(free))
    }

    /// Average of the vertices of the closure; interior whenever the cell is non-empty.
    pub fn interior_point(&self) -> Option<Vec<Q>> {
        if self.empty {
            return None;
        }
        let poly = self.polytope.as_ref()?;
        let verts = poly.vertices();
        let k = Q::from_integer((verts.len() as i64).into());
        Some((0..poly.dim).map(|i| verts.iter().map(|v| v.point[i].clone()).sum::<Q>() / &k).collect())
    }

    pub fn to_file(&self) -> CellFile {
        CellFile {
            key: canonical_key(&self.graph).short_hex(),
            graph: self.graph.to_file(),
            perimeters: self.perimeters.iter().map(rational::to_string).collect(),
            incidence: self.incidence.clone(),
            rank: self.rank,
            rank_deficient: self.rank_deficient(),
            free_edges: self.chart.as_ref().map(|c| c.free.clone()),
            dimension: self.dimension(),
            empty: self.empty,
            polytope: self.polytope.clone(),
        }
    }
}

/// JSON record of one cell polytope.
#[derive(Debug, Clone, Serialize)]
pub struct CellFile {
    pub key: String,
    pub graph: GraphFile,
    pub perimeters: Vec<String>,
    pub incidence: Vec<Vec<u32>>,
    pub rank: usize,
    pub rank_deficient: bool,
    pub free_edges: Option<Vec<usize>>,
    pub dimension: Option<usize>,
    pub empty: bool,
    pub polytope: Option<Polytope>,
}

/// Distinct odd primes `3, 5, 7, …`.
pub fn default_perimeters(n: usize) -> Vec<Q> {
    let mut out = Vec::with_capacity(n);
    let mut k = 3i64;
    while out.len() < n {
        if (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0) {
            out.push(Q::from_integer(k.into()));
        }
        k += 1;
    }
    out
}

/// Every admissible single-edge contraction, with the canonical class it lands in.
pub fn boundary_cells(g: &StableRibbonGraph) -> Vec<(usize, CanonicalKey, StableRibbonGraph)> {
    (0..g.edge_count())
        .filter_map(|e| contract_edge(g, e).ok().map(|c| (e, canonical_key(&c), canonical_form(&c))))
        .collect()
}

/// Boundary polygon of one face: side `j` starts at vertex `j` and has length `sides[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonFiber {
    pub face: usize,
    pub sides: Vec<Q>,
}

impl PolygonFiber {
    pub fn new(face: usize, sides: Vec<Q>) -> Result<Self, CellError> {
        if sides.is_empty() || sides.iter().any(|l| !l.is_positive()) {
            return Err(CellError::BadFiber);
        }
        Ok(PolygonFiber { face, sides })
    }

    /// The fiber of face `label` of `g` at edge lengths `lengths`.
    pub fn of_face(g: &StableRibbonGraph, label: usize, lengths: &[Q]) -> Result<Self, CellError> {
        let f = g.faces().into_iter().find(|f| f.label == label).ok_or(CellError::NoSuchFace(label))?;
        Self::new(label, f.edges().iter().map(|&e| lengths[e].clone()).collect())
    }

    pub fn perimeter(&self) -> Q {
        self.sides.iter().sum()
    }

    /// Pairs `(φ_j, l_j)` sorted by the distance `φ_j` from the point at position `t`, where
    /// `l_j` is the side that follows vertex `j`.
    pub fn distances(&self, t: &Q) -> Vec<(Q, Q)> {
        let p = self.perimeter();
        let mut start = Q::zero();
        let mut out = Vec::new();
        for l in &self.sides {
            let mut phi = &start - t;
            while phi.is_negative() {
                phi += &p;
            }
            while phi >= p {
                phi -= &p;
            }
            out.push((phi, l.clone()));
            start += l;
        }
        out.sort();
        out
    }
}

/// A base polytope times the boundary polygon of one face, cut into one polytope per side.
///
/// Polytopes `0..k` are the arcs `{S_j ≤ t ≤ S_j + l_j}` in coordinates `(y, t)`; polytopes
/// `k..2k` are copies of the base, section `j` sitting at `t = S_j` and glued to the ends of
/// arcs `j` and `j - 1` (arc `k - 1` ends at `t = p`, which is identified with `t = 0`).
#[derive(Debug, Clone)]
pub struct FiberProduct {
    pub base: Polytope,
    pub sides: Vec<Poly>,
    pub perimeter: Q,
    pub complex: PolytopalComplex,
    pub alpha: ComplexForm,
}

impl FiberProduct {
    /// `sides` are affine in the base coordinates and sum to `perimeter` identically.
    pub fn new(base: Polytope, sides: Vec<Poly>, perimeter: Q) -> Self {
        let m = base.dim;
        let k = sides.len();
        let starts: Vec<Poly> = (0..k)
            .map(|j| sides[..j].iter().fold(Poly::zero(m), |acc, s| &acc + s))
            .collect();
        let lift = |p: &Poly| p.extend_vars(m + 1);
        let t = Poly::var(m + 1, m);
        let mut polytopes = Vec::new();
        let mut forms = Vec::new();
        for j in 0..k {
            let mut ineqs: Vec<Inequality> = base
                .inequalities
                .iter()
                .map(|c| {
                    let mut normal = c.normal.clone();
                    normal.push(Q::zero());
                    Inequality::new(normal, c.bound.clone(), false)
                })
                .collect();
            // S_j - t <= 0 and t - S_j - l_j <= 0
            let lower = &lift(&starts[j]) - &t;
            let upper = &(&t - &lift(&starts[j])) - &lift(&sides[j]);
            for g in [lower, upper] {
                let (c, lin) = g.affine_parts().expect("affine sides");
                ineqs.push(Inequality::new(lin, -c, false));
            }
            polytopes.push(Polytope::new(m + 1, ineqs));
            forms.push(arc_alpha(&sides, &starts, &perimeter, j));
        }
        let mut gluings = Vec::new();
        for j in 0..k {
            polytopes.push(base.clone());
            let section = |height: &Poly| {
                let mut comps: Vec<Poly> = (0..m).map(|i| Poly::var(m, i)).collect();
                comps.push(height.clone());
                AffineMap::from_polys(&comps).expect("affine section")
            };
            let bottom = section(&starts[j]);
            let prev = (j + k - 1) % k;
            let top_height = if j == 0 { Poly::constant(m, perimeter.clone()) } else { starts[j].clone() };
            let top = section(&top_height);
            forms.push(forms[j].pullback(&bottom.as_polys_in(m)));
            gluings.push(Gluing { source: k + j, target: j, map: bottom });
            gluings.push(Gluing { source: k + j, target: prev, map: top });
        }
        FiberProduct { base, sides, perimeter, complex: PolytopalComplex::new(polytopes, gluings), alpha: ComplexForm::new(forms) }
    }

    pub fn arc_count(&self) -> usize {
        self.sides.len()
    }

    /// `(y, s) ↦ (y, S_j(y) + s l_j(y))` for `s ∈ [0, 1]`.
    pub fn arc_parametrization(&self, j: usize) -> Vec<Poly> {
        let m = self.base.dim;
        let start = self.sides[..j].iter().fold(Poly::zero(m), |acc, s| &acc + s).extend_vars(m + 1);
        let s = Poly::var(m + 1, m);
        let mut comps: Vec<Poly> = (0..m).map(|i| Poly::var(m + 1, i)).collect();
        comps.push(&start + &(&s * &self.sides[j].extend_vars(m + 1)));
        comps
    }

    /// The bundle over the base polytope alone, projection forgetting `t`.
    pub fn bundle(&self) -> CircleBundle {
        let m = self.base.dim;
        let k = self.arc_count();
        let drop_t = AffineMap::new(
            (0..m).map(|i| (0..=m).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect(),
            vec![Q::zero(); m],
        );
        let mut projection = vec![(0, drop_t); k];
        projection.extend((0..k).map(|_| (0, AffineMap::identity(m))));
        let fibers = vec![(0..k).map(|j| FiberArc { total: j, map: self.arc_parametrization(j) }).collect()];
        CircleBundle {
            total: self.complex.clone(),
            base: PolytopalComplex::new(vec![self.base.clone()], vec![]),
            projection,
            fibers,
        }
    }

    /// Integral of `α` over the fiber, as a polynomial on the base.
    pub fn fiber_integral(&self) -> Poly {
        self.bundle().fiber_integral(&self.alpha, 0)
    }

    /// `dα` on arc `j`.
    pub fn d_alpha(&self, j: usize) -> Form {
        self.alpha.forms[j].d()
    }
}

/// `α = Σ_i (l_i/p) d(φ_i/p)` on arc `j`, where `φ_i = S_i - t` for `i > j` and `S_i - t + p`
/// otherwise.
fn arc_alpha(sides: &[Poly], starts: &[Poly], p: &Q, j: usize) -> Form {
    let m = sides.first().map_or(0, Poly::nvars);
    let t = Poly::var(m + 1, m);
    let inv_p2 = (p * p).recip();
    let mut out = Form::zero(m + 1, 1);
    for (i, (l, s)) in sides.iter().zip(starts).enumerate() {
        let mut phi = &s.extend_vars(m + 1) - &t;
        if i <= j {
            phi = &phi + &Poly::constant(m + 1, p.clone());
        }
        let term = Form::function(phi).d().mul_function(&l.extend_vars(m + 1)).scale(&inv_p2);
        out = out.add(&term);
    }
    out
}

/// `α` for a single polygon, over the simplex of side lengths with perimeter fixed:
/// coordinates `l_1, …, l_{k-1}`, with `l_k = p - Σ`.
pub fn alpha_form(fiber: &PolygonFiber) -> FiberProduct {
    let k = fiber.sides.len();
    let m = k - 1;
    let p = fiber.perimeter();
    let mut sides: Vec<Poly> = (0..m).map(|i| Poly::var(m, i)).collect();
    let rest = sides.iter().fold(Poly::constant(m, p.clone()), |acc, s| &acc - s);
    sides.push(rest);
    let mut ineqs = Vec::new();
    for s in &sides {
        let (c, lin) = s.affine_parts().expect("affine");
        ineqs.push(Inequality::new(lin.iter().map(|a| -a).collect(), c, true));
    }
    FiberProduct::new(Polytope::new(m, ineqs), sides, p)
}

/// `∫` of `α` over the single fiber at the fiber's side lengths (base is a point).
pub fn fiber_integral_alpha(fiber: &PolygonFiber) -> Q {
    let sides = fiber.sides.iter().map(|l| Poly::constant(0, l.clone())).collect();
    let product = FiberProduct::new(Polytope::new(0, vec![]), sides, fiber.perimeter());
    product.fiber_integral().eval(&[])
}

/// The product of a non-empty cell with the polygon of face `label`.
pub fn cell_fiber_product(cell: &CellPolytope, label: usize) -> Result<FiberProduct, CellError> {
    if cell.empty {
        return Err(CellError::Empty);
    }
    let lengths = cell.length_polys().ok_or(CellError::Empty)?;
    let faces = cell.graph.faces();
    let (idx, face) = faces.iter().enumerate().find(|(_, f)| f.label == label).ok_or(CellError::NoSuchFace(label))?;
    let sides = face.edges().iter().map(|&e| lengths[e].clone()).collect();
    let base = cell.polytope.clone().ok_or(CellError::Empty)?;
    Ok(FiberProduct::new(base, sides, cell.perimeters[idx].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgraph::samples;
    use crate::polyform::validate_form;
    use crate::rational::{q, qf};

    #[test]
    fn theta_one_face_is_a_triangle() {
        let g = samples::theta_one_face();
        let c = cell_polytope(&g, &[q(12)]).unwrap();
        assert_eq!(c.incidence, vec![vec![2, 2, 2]]);
        assert_eq!(c.dimension(), Some(2));
        assert!(!c.empty);
        let x = c.interior_point().unwrap();
        let l = c.edge_lengths(&x).unwrap();
        assert_eq!(g.perimeters(&l).unwrap(), vec![q(12)]);
    }

    #[test]
    fn planar_theta_cell_is_a_point_or_empty() {
        let g = samples::theta_planar();
        let p = default_perimeters(3);
        let c = cell_polytope(&g, &p).unwrap();
        assert_eq!(c.dimension(), Some(0));
        let c2 = cell_polytope(&g, &[q(1), q(1), q(10)]).unwrap();
        assert!(c2.empty);
    }

    #[test]
    fn bad_perimeters() {
        let g = samples::theta_one_face();
        assert_eq!(cell_polytope(&g, &[q(0)]).unwrap_err(), CellError::NonPositivePerimeter(0));
        assert_eq!(cell_polytope(&g, &[q(1), q(2)]).unwrap_err(), CellError::PerimeterCount { expected: 1, got: 2 });
    }

    #[test]
    fn default_perimeters_are_primes() {
        assert_eq!(default_perimeters(4), vec![q(3), q(5), q(7), q(11)]);
    }

    #[test]
    fn fiber_integrals() {
        for sides in [vec![q(5)], vec![q(1), q(1)], vec![qf(1, 3), q(2), qf(7, 5)], vec![q(1), q(2), q(3), q(4)]] {
            let f = PolygonFiber::new(1, sides.clone()).unwrap();
            assert_eq!(fiber_integral_alpha(&f), q(-1));
            let scaled = PolygonFiber::new(1, sides.iter().map(|l| l * q(7)).collect()).unwrap();
            assert_eq!(fiber_integral_alpha(&scaled), q(-1));
        }
    }

    #[test]
    fn alpha_is_a_form_on_the_fiber_complex() {
        let f = PolygonFiber::new(1, vec![q(1), q(2), q(3)]).unwrap();
        let prod = alpha_form(&f);
        assert_eq!(prod.complex.validate(), Ok(()));
        assert_eq!(validate_form(&prod.complex, &prod.alpha), Ok(()));
        assert_eq!(prod.fiber_integral().as_constant(), Some(q(-1)));
    }

    #[test]
    fn single_side_alpha_is_minus_dt_over_p() {
        let f = PolygonFiber::new(1, vec![q(4)]).unwrap();
        let prod = alpha_form(&f);
        assert_eq!(prod.alpha.forms[0], Form::dx(1, 0).scale(&qf(-1, 4)));
    }

    #[test]
    fn distances_sorted_from_point() {
        let f = PolygonFiber::new(1, vec![q(1), q(2), q(3)]).unwrap();
        // vertices at 0, 1, 3; point at 2
        assert_eq!(f.distances(&q(2)), vec![(q(1), q(3)), (q(4), q(1)), (q(5), q(2))]);
    }

    #[test]
    fn cell_product_validates() {
        let g = samples::theta_one_face();
        let c = cell_polytope(&g, &[q(12)]).unwrap();
        let prod = cell_fiber_product(&c, 1).unwrap();
        assert_eq!(prod.complex.validate(), Ok(()));
        assert_eq!(validate_form(&prod.complex, &prod.alpha), Ok(()));
        assert_eq!(prod.fiber_integral().as_constant(), Some(q(-1)));
        assert_eq!(prod.bundle().validate_morphism(), Ok(()));
    }

    #[test]
    fn boundary_of_theta() {
        let g = samples::theta_planar();
        let b = boundary_cells(&g);
        assert_eq!(b.len(), 3);
        assert!(b.iter().all(|(_, _, c)| c.edge_count() == 2 && c.genus() == 0));
    }
}
