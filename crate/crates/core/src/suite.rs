//! Seeded property suites. Every failure carries a JSON input that reproduces it.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cells::{cell_polytope, fiber_integral_alpha, PolygonFiber};
use crate::enumerate::{canonical_key, enumerate_cells, enumerate_trivalent, CellClass, GraphClass};
use crate::intersect::{alpha_basic_check, intersection_number_over, omega, omega_from_side, restrict_form, IntersectionQuery};
use crate::model0::{config_cross_ratio, full_map, Point, PointConfig};
use crate::permgraph::StableRibbonGraph;
use crate::polyform::complex::two_squares;
use crate::polyform::{homotopy_defect, stokes_check, AffineMap, Chain, ComplexForm, Form, Gluing, PolytopalComplex, Poly, Simplex};
use crate::polytope::{Inequality, Polytope};
use crate::random::{self, SuiteRng};
use crate::rational::{self, q, Q};
use crate::stable::{contract_edge, contract_set, ContractionPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    Contraction,
    Stokes,
    Alpha,
    Omega,
    PIndependence,
    Model0,
    All,
}

impl SuiteName {
    pub const EACH: [SuiteName; 6] = [
        SuiteName::Contraction,
        SuiteName::Stokes,
        SuiteName::Alpha,
        SuiteName::Omega,
        SuiteName::PIndependence,
        SuiteName::Model0,
    ];
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SuiteName::Contraction => "contraction",
            SuiteName::Stokes => "stokes",
            SuiteName::Alpha => "alpha",
            SuiteName::Omega => "omega",
            SuiteName::PIndependence => "p-independence",
            SuiteName::Model0 => "model0",
            SuiteName::All => "all",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

impl FromStr for SuiteName {
    type Err = UnknownSuite;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        std::iter::once(SuiteName::All)
            .chain(SuiteName::EACH)
            .find(|n| n.to_string() == s)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub suite: String,
    pub case: usize,
    pub message: String,
    pub input: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub wall_time_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A failed case: what went wrong and the input that shows it.
pub type CaseError = (String, Value);

pub fn run_suite(name: SuiteName, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let (cases, failures) = match name {
        SuiteName::All => {
            let mut cases = 0;
            let mut failures = Vec::new();
            for s in SuiteName::EACH {
                let r = run_suite(s, seed);
                cases += r.cases;
                failures.extend(r.failures);
            }
            (cases, failures)
        }
        one => {
            let mut rng = random::rng(seed);
            let outcomes = match one {
                SuiteName::Contraction => contraction_suite(&mut rng, 300),
                SuiteName::Stokes => (0..200).map(|_| stokes_case(&mut rng)).collect(),
                SuiteName::Alpha => alpha_suite(&mut rng, 30),
                SuiteName::Omega => omega_suite(&mut rng, 30),
                SuiteName::PIndependence => p_independence_suite(&mut rng),
                SuiteName::Model0 => (0..100).flat_map(|_| [mobius_case(&mut rng), separation_case(&mut rng)]).collect(),
                SuiteName::All => unreachable!(),
            };
            let cases = outcomes.len();
            let failures = outcomes
                .into_iter()
                .enumerate()
                .filter_map(|(case, r)| r.err().map(|(message, input)| Failure { suite: one.to_string(), case, message, input }))
                .collect();
            (cases, failures)
        }
    };
    SuiteReport { suite: name.to_string(), seed, cases, failures, wall_time_ms: start.elapsed().as_millis() }
}

fn graph_input(g: &StableRibbonGraph) -> Value {
    serde_json::to_value(g.to_file()).expect("graph serializes")
}

fn contractible(g: &StableRibbonGraph) -> Vec<usize> {
    (0..g.edge_count()).filter(|&e| ContractionPlan::new(g, [e]).is_ok()).collect()
}

fn after_removing(f: usize, e: usize) -> usize {
    if f > e {
        f - 1
    } else {
        f
    }
}

/// Validity, genus and face-count conservation for every admissible edge; commutativity and
/// agreement of set contraction with sequential contraction for every admissible pair.
pub fn contraction_case(g: &StableRibbonGraph) -> Result<usize, CaseError> {
    let fail = |msg: String| (msg, graph_input(g));
    let edges = contractible(g);
    let mut checks = 0;
    for &e in &edges {
        let c = contract_edge(g, e).map_err(|err| fail(format!("contract {e}: {err}")))?;
        c.validate().map_err(|err| fail(format!("contract {e} gives invalid graph: {err}")))?;
        if c.genus() != g.genus() || c.face_count() != g.face_count() {
            return Err(fail(format!("contract {e} changes genus or face count")));
        }
        for &f in &edges {
            if f == e {
                continue;
            }
            let Ok(ef) = contract_edge(&c, after_removing(f, e)) else { continue };
            let fe = contract_edge(&contract_edge(g, f).expect("admissible"), after_removing(e, f))
                .map_err(|err| fail(format!("{f} then {e} fails though {e} then {f} succeeds: {err}")))?;
            if canonical_key(&ef) != canonical_key(&fe) {
                return Err(fail(format!("contracting {e}, {f} depends on the order")));
            }
            let set = contract_set(g, [e, f]).map_err(|err| fail(format!("set {{{e}, {f}}}: {err}")))?;
            if canonical_key(&set) != canonical_key(&ef) {
                return Err(fail(format!("set {{{e}, {f}}} differs from sequential contraction")));
            }
            checks += 1;
        }
        checks += 1;
    }
    Ok(checks)
}

fn contraction_suite(rng: &mut SuiteRng, random_graphs: usize) -> Vec<Result<(), CaseError>> {
    let mut out = Vec::new();
    for (g, n) in [(0, 3), (1, 1)] {
        for c in enumerate_cells(g, n).expect("small") {
            out.push(contraction_case(&c.graph).map(|_| ()));
        }
    }
    for _ in 0..random_graphs {
        out.push(contraction_case(&random::stable_graph(rng, 6)).map(|_| ()));
    }
    out
}

/// Fixed corpus of complexes of dimension at most three.
pub fn stokes_corpus() -> Vec<PolytopalComplex> {
    let prism = {
        // triangle × [0, 1]
        let mut ineqs = Polytope::standard_simplex(2).inequalities;
        for c in &mut ineqs {
            c.normal.push(Q::zero());
        }
        ineqs.push(Inequality::new(vec![q(0), q(0), q(-1)], q(0), false));
        ineqs.push(Inequality::new(vec![q(0), q(0), q(1)], q(1), false));
        Polytope::new(3, ineqs)
    };
    let pentagon = Polytope::new(
        2,
        vec![
            Inequality::new(vec![q(0), q(-1)], q(0), false),
            Inequality::new(vec![q(-1), q(0)], q(0), false),
            Inequality::new(vec![q(1), q(0)], q(2), false),
            Inequality::new(vec![q(0), q(1)], q(2), false),
            Inequality::new(vec![q(1), q(1)], q(3), false),
        ],
    );
    let cube_with_face = PolytopalComplex::new(
        vec![Polytope::unit_cube(3), Polytope::unit_cube(2)],
        vec![Gluing {
            source: 1,
            target: 0,
            map: AffineMap::new(vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(0), q(0)]], vec![q(0), q(0), q(1)]),
        }],
    );
    vec![
        two_squares(),
        PolytopalComplex::new(vec![Polytope::unit_cube(1)], vec![]),
        PolytopalComplex::new(vec![Polytope::standard_simplex(3)], vec![]),
        PolytopalComplex::new(vec![prism], vec![]),
        PolytopalComplex::new(vec![pentagon], vec![]),
        cube_with_face,
    ]
}

fn form_files(w: &ComplexForm) -> Value {
    json!(w.forms.iter().map(Form::to_file).collect::<Vec<_>>())
}

/// `∫_C dα = ∫_{∂C} α` on the two-square example.
pub fn two_square_stokes() -> Result<(), CaseError> {
    let x = two_squares();
    // α = (x y + y²) dy + x dx is compatible along the shared edge x = 0
    let (xv, yv) = (Poly::var(2, 0), Poly::var(2, 1));
    let a = Form::monomial(&(&xv * &yv) + &(&yv * &yv), &[1]).add(&Form::monomial(xv, &[0]));
    let edge = Form::monomial(Poly::var(1, 0).pow(2), &[0]);
    let alpha = ComplexForm::new(vec![a.clone(), a, edge]);
    let chain = Chain::of_polytope(0, &x.polytopes[0], 1)
        .and_then(|c| Ok(c.add(&Chain::of_polytope(1, &x.polytopes[1], 1)?)))
        .map_err(|e| (e.to_string(), Value::Null))?;
    let input = || json!({"complex": x, "chain": chain, "alpha": form_files(&alpha)});
    let r = stokes_check(&chain, &alpha, &x).map_err(|e| (e.to_string(), input()))?;
    if r.holds() {
        Ok(())
    } else {
        Err((format!("{} != {}", rational::to_string(&r.lhs), rational::to_string(&r.rhs)), input()))
    }
}

/// One random form and chain on a random corpus complex.
pub fn stokes_case(rng: &mut SuiteRng) -> Result<(), CaseError> {
    let corpus = stokes_corpus();
    let x = corpus.choose(rng).expect("non-empty corpus").clone();
    let pi = rng.gen_range(0..x.polytopes.len());
    let p = &x.polytopes[pi];
    let k = rng.gen_range(1..=p.dim);
    let chain = if k == p.dim && rng.gen_bool(0.5) {
        Chain::of_polytope(pi, p, if rng.gen_bool(0.5) { 1 } else { -1 }).map_err(|e| (e.to_string(), Value::Null))?
    } else {
        let mut c = Chain::zero(k);
        for _ in 0..rng.gen_range(1..=3) {
            let vertices = (0..=k).map(|_| random::point_in(rng, p)).collect();
            c.push(random::signed_rational(rng, 3, 5), Simplex { polytope: pi, vertices });
        }
        c
    };
    let alpha = ComplexForm::new(x.polytopes.iter().map(|poly| random::form(rng, poly.dim, k - 1, 3)).collect());
    let input = || json!({"complex": x, "chain": chain, "alpha": form_files(&alpha)});
    let r = stokes_check(&chain, &alpha, &x).map_err(|e| (e.to_string(), input()))?;
    if r.holds() {
        Ok(())
    } else {
        Err((format!("∫dα = {} but ∫∂α = {}", rational::to_string(&r.lhs), rational::to_string(&r.rhs)), input()))
    }
}

/// `d(hω) + h(dω) = ω` for a random form of degree 1 to 3 on a cube or simplex.
pub fn homotopy_case(rng: &mut SuiteRng) -> Result<(), CaseError> {
    let n = rng.gen_range(1..=4);
    let p = if rng.gen_bool(0.5) { Polytope::unit_cube(n) } else { Polytope::standard_simplex(n) };
    let k = rng.gen_range(1..=n.min(3));
    let w = random::form(rng, n, k, 3);
    let x0 = random::point_in(rng, &p);
    let input = || json!({"polytope": p, "cone_point": x0.iter().map(rational::to_string).collect::<Vec<_>>(), "form": w.to_file()});
    let defect = homotopy_defect(&p, &x0, &w).map_err(|e| (e.to_string(), input()))?;
    if defect.is_zero() {
        Ok(())
    } else {
        Err((format!("d h ω + h d ω - ω = {defect:?}"), input()))
    }
}

/// Fiber integral of `α` at random edge lengths on every face of a cell.
pub fn alpha_case(rng: &mut SuiteRng, g: &StableRibbonGraph) -> Result<(), CaseError> {
    let lengths = random::lengths(rng, g.edge_count());
    for f in g.faces() {
        let fiber = PolygonFiber::of_face(g, f.label, &lengths).map_err(|e| (e.to_string(), graph_input(g)))?;
        let v = fiber_integral_alpha(&fiber);
        if v != -Q::one() {
            let input = json!({"graph": graph_input(g), "face": f.label, "lengths": lengths.iter().map(rational::to_string).collect::<Vec<_>>()});
            return Err((format!("fiber integral {}", rational::to_string(&v)), input));
        }
    }
    Ok(())
}

fn small_cells() -> Vec<CellClass> {
    [(0, 3), (0, 4), (1, 1)].into_iter().flat_map(|(g, n)| enumerate_cells(g, n).expect("small")).collect()
}

fn alpha_suite(rng: &mut SuiteRng, per_cell: usize) -> Vec<Result<(), CaseError>> {
    let cells = small_cells();
    cells.iter().flat_map(|c| (0..per_cell).map(|_| alpha_case(rng, &c.graph)).collect::<Vec<_>>()).collect()
}

/// On a non-empty top cell at `p`: `dα` has no fiber differential and equals `-π*ω` on every face,
/// and `ω` restricted to the cell does not depend on the starting side.
pub fn omega_case(g: &StableRibbonGraph, p: &[Q], start: usize) -> Result<bool, CaseError> {
    let input = || json!({"graph": graph_input(g), "perimeters": p.iter().map(rational::to_string).collect::<Vec<_>>()});
    let cell = cell_polytope(g, p).map_err(|e| (e.to_string(), input()))?;
    if cell.empty {
        return Ok(false);
    }
    for (f, pi) in g.faces().iter().zip(p) {
        let r = alpha_basic_check(&cell, f.label).map_err(|e| (e.to_string(), input()))?;
        if !r.fiber_free || !r.equals_minus_pullback {
            return Err((format!("face {}: {r:?}", f.label), input()));
        }
        let a = restrict_form(&omega(g, f.label, pi).map_err(|e| (e.to_string(), input()))?, &cell);
        let b = restrict_form(&omega_from_side(g, f.label, pi, start).map_err(|e| (e.to_string(), input()))?, &cell);
        if a != b {
            return Err((format!("face {}: ω depends on the starting side {start}", f.label), input()));
        }
    }
    Ok(true)
}

fn omega_suite(rng: &mut SuiteRng, cases: usize) -> Vec<Result<(), CaseError>> {
    let tops: Vec<GraphClass> =
        [(0, 3), (1, 1), (0, 4)].into_iter().flat_map(|(g, n)| enumerate_trivalent(g, n).expect("small")).collect();
    (0..cases)
        .map(|_| {
            let c = tops.choose(rng).expect("classes");
            let p = random::generic_perimeters(rng, c.graph.face_count());
            omega_case(&c.graph, &p, rng.gen_range(1..6)).map(|_| ())
        })
        .collect()
}

/// The queries whose values are compared across perimeter vectors.
pub const P_QUERIES: [(u32, &[u32]); 5] = [(0, &[0, 0, 0]), (1, &[1]), (0, &[1, 0, 0, 0]), (1, &[1, 1]), (1, &[2, 0])];

/// Intersection numbers at two perimeter vectors agree.
pub fn p_independence_case(genus: u32, d: &[u32], classes: &[GraphClass], p1: Vec<Q>, p2: Vec<Q>) -> Result<Q, CaseError> {
    let input = || {
        json!({"genus": genus, "d": d, "perimeters": [
            p1.iter().map(rational::to_string).collect::<Vec<_>>(),
            p2.iter().map(rational::to_string).collect::<Vec<_>>()]})
    };
    let mut values = Vec::new();
    for p in [&p1, &p2] {
        let query = IntersectionQuery::new(genus, d.to_vec(), Some(p.clone())).map_err(|e| (e.to_string(), input()))?;
        let r = intersection_number_over(&query, classes, |_, e| (0..e).collect()).map_err(|e| (e.to_string(), input()))?;
        values.push(r.value);
    }
    if values[0] == values[1] {
        Ok(values.swap_remove(0))
    } else {
        Err((format!("{} != {}", rational::to_string(&values[0]), rational::to_string(&values[1])), input()))
    }
}

fn p_independence_suite(rng: &mut SuiteRng) -> Vec<Result<(), CaseError>> {
    P_QUERIES
        .iter()
        .map(|&(g, d)| {
            let classes = enumerate_trivalent(g, d.len()).expect("small");
            let p1 = random::generic_perimeters(rng, d.len());
            let p2 = random::generic_perimeters(rng, d.len());
            p_independence_case(g, d, &classes, p1, p2).map(|_| ())
        })
        .collect()
}

fn config_input(c: &PointConfig) -> Value {
    json!(c.points().iter().map(Point::to_string).collect::<Vec<_>>())
}

/// `full_map` is unchanged by a random Möbius transformation of a random configuration.
pub fn mobius_case(rng: &mut SuiteRng) -> Result<(), CaseError> {
    let n = rng.gen_range(3..=6);
    let cfg = random::point_config(rng, n);
    let m = random::mobius(rng);
    let moved = m.apply_config(&cfg);
    let coeffs: Vec<String> = [&m.a, &m.b, &m.c, &m.d].into_iter().map(crate::model0::complex_to_string).collect();
    let input = || json!({"points": config_input(&cfg), "mobius": coeffs});
    let a = full_map(&cfg).map_err(|e| (e.to_string(), input()))?;
    let b = full_map(&moved).map_err(|e| (e.to_string(), input()))?;
    if a.iter().any(|f| !f.coordinate_sum().is_zero()) {
        return Err(("coordinates do not sum to zero".into(), input()));
    }
    if a == b {
        Ok(())
    } else {
        Err(("full_map changed under a Möbius transformation".into(), input()))
    }
}

/// For two four-point configurations, equal `full_map` exactly when cross-ratios agree. Half of
/// the pairs are built to share a cross-ratio.
pub fn separation_case(rng: &mut SuiteRng) -> Result<(), CaseError> {
    let a = random::point_config(rng, 4);
    let b = if rng.gen_bool(0.5) {
        random::mobius(rng).apply_config(&a)
    } else if rng.gen_bool(0.5) {
        // swap two points: cross-ratio usually changes
        a.permuted(&[1, 0, 2, 3])
    } else {
        random::point_config(rng, 4)
    };
    let input = || json!({"a": config_input(&a), "b": config_input(&b)});
    let same_map = full_map(&a).map_err(|e| (e.to_string(), input()))? == full_map(&b).map_err(|e| (e.to_string(), input()))?;
    let same_ratio = config_cross_ratio(&a) == config_cross_ratio(&b);
    if same_map == same_ratio {
        Ok(())
    } else {
        Err((format!("full_map equal: {same_map}, cross-ratio equal: {same_ratio}"), input()))
    }
}
