//! Edge contraction in stable ribbon graphs.
//!
//! Contracting `e` removes its half-edges from every face word (`σ2'` is the first
//! return of `σ2` outside `e`) and recovers the vertex permutations as
//! `σ0' = σ1'σ2'⁻¹`. Genus defects follow the loop trichotomy: the endpoints' defects
//! add for a non-loop, a loop inside one `σ0` cycle leaves the defect unchanged, and a
//! loop joining two `σ0` cycles raises it by one.

use std::collections::{BTreeMap, BTreeSet};

use crate::perm::Perm;
use crate::permgraph::{StableRibbonGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContractionError {
    #[error("edge {edge} out of range (graph has {edges} edges)")]
    EdgeOutOfRange { edge: usize, edges: usize },
    #[error("contraction would leave face {label} without edges")]
    StrandsFace { label: usize },
    #[error("edge set is not connected")]
    DisconnectedComponent,
}

/// A validated set of edges to contract together with its connected components.
#[derive(Debug, Clone)]
pub struct ContractionPlan<'g> {
    graph: &'g StableRibbonGraph,
    edges: BTreeSet<usize>,
    components: Vec<Vec<usize>>,
}

impl<'g> ContractionPlan<'g> {
    pub fn new(graph: &'g StableRibbonGraph, edges: impl IntoIterator<Item = usize>) -> Result<Self, ContractionError> {
        let edges: BTreeSet<usize> = edges.into_iter().collect();
        let ne = graph.edge_count();
        if let Some(&e) = edges.iter().find(|&&e| e >= ne) {
            return Err(ContractionError::EdgeOutOfRange { edge: e, edges: ne });
        }
        for f in graph.faces() {
            if f.half_edges.iter().all(|h| edges.contains(&(h / 2))) {
                return Err(ContractionError::StrandsFace { label: f.label });
            }
        }
        let components = edge_components(graph, &edges);
        Ok(ContractionPlan { graph, edges, components })
    }

    pub fn edges(&self) -> &BTreeSet<usize> {
        &self.edges
    }

    /// Connected components of the subgraph spanned by the contracted edges.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn graph(&self) -> &StableRibbonGraph {
        self.graph
    }
}

fn edge_components(g: &StableRibbonGraph, edges: &BTreeSet<usize>) -> Vec<Vec<usize>> {
    let nv = g.vertices().len();
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &e in edges {
        let a = find(&mut parent, g.vertex_of(2 * e));
        let b = find(&mut parent, g.vertex_of(2 * e + 1));
        parent[a] = b;
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in edges {
        let r = find(&mut parent, g.vertex_of(2 * e));
        by_root.entry(r).or_default().push(e);
    }
    let mut comps: Vec<Vec<usize>> = by_root.into_values().collect();
    comps.sort();
    comps
}

/// First element of `perm(h), perm²(h), …` satisfying `keep`.
fn first_return(perm: &Perm, h: usize, keep: impl Fn(usize) -> bool) -> usize {
    let mut x = perm.apply(h);
    while !keep(x) {
        x = perm.apply(x);
    }
    x
}

/// Rebuilds a graph on the half-edges of `kept_edges` (renumbered in order) from a first-return
/// `σ2'`, grouping the resulting `σ0'` cycles into vertices by `vertex_class`.
fn rebuild(
    g: &StableRibbonGraph,
    kept_edges: &[usize],
    vertex_class: &[usize],
    class_defects: &BTreeMap<usize, u32>,
) -> StableRibbonGraph {
    let mut new_edge = vec![usize::MAX; g.edge_count()];
    for (k, &e) in kept_edges.iter().enumerate() {
        new_edge[e] = k;
    }
    let keep = |h: usize| new_edge[h / 2] != usize::MAX;
    let renum = |h: usize| 2 * new_edge[h / 2] + (h & 1);
    let nh = 2 * kept_edges.len();
    let s2 = g.sigma2();

    let mut sigma2_new = vec![0; nh];
    for &e in kept_edges {
        for h in [2 * e, 2 * e + 1] {
            sigma2_new[renum(h)] = renum(first_return(&s2, h, keep));
        }
    }
    let sigma2_new = Perm::from_images(sigma2_new).expect("first return is a bijection");
    let sigma0_new = Perm::edge_involution(nh).compose(&sigma2_new.inverse());

    // new vertex order: by first appearance of the class along old vertex order
    let mut class_index: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in vertex_class {
        let next = class_index.len();
        class_index.entry(c).or_insert(next);
    }
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); class_index.len()];
    let mut block_of = vec![0; nh];
    for &e in kept_edges {
        for h in [2 * e, 2 * e + 1] {
            let b = class_index[&vertex_class[g.vertex_of(h)]];
            blocks[b].push(renum(h));
            block_of[renum(h)] = b;
        }
    }
    let mut cycles_by_block: Vec<Vec<Vec<usize>>> = vec![Vec::new(); blocks.len()];
    for c in sigma0_new.cycles() {
        let b = block_of[c[0]];
        debug_assert!(c.iter().all(|&h| block_of[h] == b), "σ0' cycle crosses vertices");
        cycles_by_block[b].push(c);
    }
    let mut ordered_classes: Vec<(usize, usize)> = class_index.iter().map(|(&c, &i)| (i, c)).collect();
    ordered_classes.sort();
    let vertices: Vec<Vertex> = ordered_classes
        .iter()
        .filter(|(i, _)| !blocks[*i].is_empty())
        .map(|&(i, c)| Vertex::new(cycles_by_block[i].clone(), class_defects[&c]))
        .collect();

    let labels: BTreeMap<usize, usize> = g
        .faces()
        .iter()
        .map(|f| {
            let h = *f.half_edges.iter().find(|&&h| keep(h)).expect("plan keeps an edge per face");
            (renum(h), f.label)
        })
        .collect();
    StableRibbonGraph::new(nh, vertices, labels)
        .expect("contraction preserves the half-edge partition")
        .normalized_labels()
}

/// Contracts a single edge following the loop trichotomy for the genus defect.
pub fn contract_edge(g: &StableRibbonGraph, e: usize) -> Result<StableRibbonGraph, ContractionError> {
    ContractionPlan::new(g, [e])?;
    let u = g.vertex_of(2 * e);
    let v = g.vertex_of(2 * e + 1);
    let mut class: Vec<usize> = (0..g.vertices().len()).collect();
    let mut defects: BTreeMap<usize, u32> =
        g.vertices().iter().enumerate().map(|(i, vx)| (i, vx.defect)).collect();
    if u != v {
        class[v] = u;
        defects.insert(u, g.vertices()[u].defect + g.vertices()[v].defect);
        defects.remove(&v);
    } else {
        let same_cycle = g.vertices()[u].cycles.iter().any(|c| c.contains(&(2 * e)) && c.contains(&(2 * e + 1)));
        if !same_cycle {
            *defects.get_mut(&u).unwrap() += 1;
        }
    }
    let kept: Vec<usize> = (0..g.edge_count()).filter(|&f| f != e).collect();
    Ok(rebuild(g, &kept, &class, &defects))
}

/// Contracts a set of edges at once: each connected component collapses to a vertex whose
/// defect is the genus of the stable ribbon graph induced on that component.
pub fn contract_set(
    g: &StableRibbonGraph,
    edges: impl IntoIterator<Item = usize>,
) -> Result<StableRibbonGraph, ContractionError> {
    let plan = ContractionPlan::new(g, edges)?;
    contract_plan(&plan)
}

pub fn contract_plan(plan: &ContractionPlan<'_>) -> Result<StableRibbonGraph, ContractionError> {
    let g = plan.graph();
    if plan.edges().is_empty() {
        return Ok(g.normalized_labels());
    }
    let nv = g.vertices().len();
    let mut class: Vec<usize> = (0..nv).collect();
    let mut defects: BTreeMap<usize, u32> =
        g.vertices().iter().enumerate().map(|(i, vx)| (i, vx.defect)).collect();
    for comp in plan.components() {
        let induced = induced_component_graph(g, comp)?;
        let mut touched: BTreeSet<usize> = BTreeSet::new();
        for &e in comp {
            touched.insert(g.vertex_of(2 * e));
            touched.insert(g.vertex_of(2 * e + 1));
        }
        let rep = *touched.iter().next().unwrap();
        for &v in &touched {
            class[v] = rep;
            defects.remove(&v);
        }
        defects.insert(rep, induced.genus());
    }
    let kept: Vec<usize> = (0..g.edge_count()).filter(|e| !plan.edges().contains(e)).collect();
    Ok(rebuild(g, &kept, &class, &defects))
}

/// The stable ribbon graph structure on a connected edge subset: `σ0` is replaced by its first
/// return to the subset, `σ1` is restricted and defects are restricted to the touched vertices.
/// Faces are numbered by smallest half-edge. The result need not satisfy the stability condition.
pub fn induced_component_graph(
    g: &StableRibbonGraph,
    edges: &[usize],
) -> Result<StableRibbonGraph, ContractionError> {
    let set: BTreeSet<usize> = edges.iter().copied().collect();
    if let Some(&e) = set.iter().find(|&&e| e >= g.edge_count()) {
        return Err(ContractionError::EdgeOutOfRange { edge: e, edges: g.edge_count() });
    }
    if set.is_empty() || edge_components(g, &set).len() != 1 {
        return Err(ContractionError::DisconnectedComponent);
    }
    let order: Vec<usize> = set.iter().copied().collect();
    let mut new_edge = vec![usize::MAX; g.edge_count()];
    for (k, &e) in order.iter().enumerate() {
        new_edge[e] = k;
    }
    let keep = |h: usize| new_edge[h / 2] != usize::MAX;
    let renum = |h: usize| 2 * new_edge[h / 2] + (h & 1);
    let s0 = g.sigma0();

    let mut vertices = Vec::new();
    for vx in g.vertices() {
        let mut cycles = Vec::new();
        for c in &vx.cycles {
            // first return along a σ0 cycle keeps the cyclic order of the kept half-edges
            let kept: Vec<usize> = c.iter().copied().filter(|&h| keep(h)).collect();
            if let Some(&start) = kept.first() {
                let mut cyc = vec![renum(start)];
                let mut h = first_return(s0, start, keep);
                while h != start {
                    cyc.push(renum(h));
                    h = first_return(s0, h, keep);
                }
                cycles.push(cyc);
            }
        }
        if !cycles.is_empty() {
            vertices.push(Vertex::new(cycles, vx.defect));
        }
    }
    Ok(StableRibbonGraph::with_numbered_faces(2 * order.len(), vertices).expect("restriction is a partition"))
}
