//! Circle bundles over polytopal complexes and the first Chern number of a basic connection form.

use num::{BigInt, Zero};

use super::chain::{integrate, Chain, ChainError};
use super::complex::{validate_form, AffineMap, ComplexForm, FormError, PolytopalComplex};
use super::form::basis;
use super::poly::Poly;
use crate::rational::{self, Q};

/// Arc of a fiber: `(y, s) ↦ map(y, s)` into the chart of polytope `total`, for `s ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberArc {
    pub total: usize,
    pub map: Vec<Poly>,
}

/// Total complex, base complex, a cellwise affine projection and fibers over every base polytope.
#[derive(Debug, Clone)]
pub struct CircleBundle {
    pub total: PolytopalComplex,
    pub base: PolytopalComplex,
    /// For each total polytope, the base polytope it maps to and the map.
    pub projection: Vec<(usize, AffineMap)>,
    /// For each base polytope, arcs whose union is the fiber over its interior.
    pub fibers: Vec<Vec<FiberArc>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChernError {
    #[error("projection is not a morphism: {0}")]
    Morphism(String),
    #[error("fiber integral over base polytope {base} is {value}, not the common nonzero constant")]
    FiberIntegral { base: usize, value: String },
    #[error("dα differs from the pulled-back base form on total polytope {0}")]
    NotBasic(usize),
    #[error("∫ω divided by the fiber integral is {0}, not an integer")]
    NonIntegral(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernResult {
    pub fiber_integral: Q,
    pub integral: Q,
    pub chern: BigInt,
}

impl CircleBundle {
    /// Dimension and containment checks, compatibility with gluings, and that every fiber arc
    /// projects back to its base point.
    pub fn validate_morphism(&self) -> Result<(), ChernError> {
        let bad = |s: String| Err(ChernError::Morphism(s));
        if self.projection.len() != self.total.polytopes.len() {
            return bad("one projection map per total polytope".into());
        }
        for (i, (q, f)) in self.projection.iter().enumerate() {
            let Some(qp) = self.base.polytopes.get(*q) else { return bad(format!("polytope {i} maps to missing {q}")) };
            let p = &self.total.polytopes[i];
            if f.out_dim() != qp.dim || (f.out_dim() > 0 && f.in_dim() != p.dim) {
                return bad(format!("map on polytope {i} has wrong dimensions"));
            }
            if p.is_bounded() && p.vertices().iter().any(|v| !qp.contains_closure(&f.apply(&v.point))) {
                return bad(format!("polytope {i} does not map into base polytope {q}"));
            }
        }
        for g in &self.total.gluings {
            let (q1, f1) = &self.projection[g.source];
            let (q2, f2) = &self.projection[g.target];
            let lhs = f2.compose(&g.map);
            let ok = if q1 == q2 {
                lhs == *f1
            } else {
                self.base.gluings.iter().any(|h| h.source == *q1 && h.target == *q2 && h.map.compose(f1) == lhs)
            };
            if !ok {
                return bad(format!("gluing {} -> {} does not commute with projection", g.source, g.target));
            }
        }
        if self.fibers.len() != self.base.polytopes.len() {
            return bad("one fiber description per base polytope".into());
        }
        for (q, arcs) in self.fibers.iter().enumerate() {
            let m = self.base.polytopes[q].dim;
            for arc in arcs {
                let Some((target, f)) = self.projection.get(arc.total) else {
                    return bad(format!("fiber arc over {q} uses missing polytope {}", arc.total));
                };
                if *target != q || arc.map.len() != self.total.polytopes[arc.total].dim {
                    return bad(format!("fiber arc over {q} lies over the wrong base polytope"));
                }
                if arc.map.iter().any(|p| p.nvars() != m + 1) {
                    return bad(format!("fiber arc over {q} has the wrong number of parameters"));
                }
                for (c, comp) in f.as_polys().iter().enumerate() {
                    let back = if f.in_dim() == 0 { Poly::constant(m + 1, comp.constant_term()) } else { comp.compose(&arc.map) };
                    if back != Poly::var(m + 1, c) {
                        return bad(format!("fiber arc over {q} does not project to its base point"));
                    }
                }
            }
        }
        Ok(())
    }

    /// `∫` of `alpha` over the fiber above base polytope `q`, as a polynomial in the base chart.
    pub fn fiber_integral(&self, alpha: &ComplexForm, q: usize) -> Poly {
        let m = self.base.polytopes[q].dim;
        let mut total = Poly::zero(m);
        for arc in &self.fibers[q] {
            let pulled = alpha.forms[arc.total].pullback(&arc.map);
            let ds = pulled.coefficient(basis(&[m]));
            for (e, a) in ds.terms() {
                let mut e2 = e.clone();
                let k = e2.pop().expect("fiber parameter");
                total.add_term(e2, a / Q::from_integer((k + 1).into()));
            }
        }
        total
    }
}

/// `∫_S ω / c` where `c` is the constant fiber integral of `alpha` and `dα = π*ω` cellwise.
pub fn circle_bundle_chern(
    bundle: &CircleBundle,
    alpha: &ComplexForm,
    omega: &ComplexForm,
    cycle: &Chain,
) -> Result<ChernResult, ChernError> {
    validate_form(&bundle.total, alpha)?;
    validate_form(&bundle.base, omega)?;
    bundle.validate_morphism()?;
    let mut c: Option<Q> = None;
    for q in 0..bundle.base.polytopes.len() {
        let f = bundle.fiber_integral(alpha, q);
        let value = f.as_constant();
        let ok = match (&value, &c) {
            (Some(v), _) if v.is_zero() => false,
            (Some(v), Some(c0)) => v == c0,
            (Some(_), None) => true,
            (None, _) => false,
        };
        if !ok {
            return Err(ChernError::FiberIntegral { base: q, value: format!("{f:?}") });
        }
        c = value;
    }
    let c = c.ok_or_else(|| ChernError::Morphism("empty base".into()))?;
    for (i, (q, f)) in bundle.projection.iter().enumerate() {
        if alpha.forms[i].d() != omega.forms[*q].pullback(&f.as_polys()) {
            return Err(ChernError::NotBasic(i));
        }
    }
    let integral = integrate(omega, cycle, &bundle.base)?;
    let ratio = &integral / &c;
    if !ratio.is_integer() {
        return Err(ChernError::NonIntegral(rational::to_string(&ratio)));
    }
    Ok(ChernResult { fiber_integral: c, integral, chern: ratio.to_integer() })
}
