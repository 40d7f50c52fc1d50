//! Canonical forms, automorphism groups and exhaustive enumeration of ribbon graphs
//! with numbered faces.
//!
//! Canonical labels come from rooted traversals: starting at a root half-edge, half-edges
//! are numbered breadth-first through `σ1` and `σ0`. When the traversal stalls inside a
//! vertex with several `σ0` cycles it branches over every unvisited half-edge of the
//! earliest such vertex. Each leaf of this search is a relabeling; the smallest resulting
//! code is the key, and the leaves achieving it are in bijection with the automorphisms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::perm::Perm;
use crate::permgraph::{StableRibbonGraph, Vertex};
use crate::stable::contract_edge;

/// Largest edge count accepted by the exhaustive enumerators.
pub const MAX_ENUM_EDGES: usize = 9;

/// Total-order key of an isomorphism class (face labels fixed).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey(pub Vec<u32>);

impl CanonicalKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|x| x.to_be_bytes()).collect()
    }

    /// Short hexadecimal digest, used for file names.
    pub fn short_hex(&self) -> String {
        // FNV-1a over the key bytes
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.to_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismGroup {
    pub order: usize,
    pub generators: Vec<Perm>,
    pub elements: Vec<Perm>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerateError {
    #[error("(g, n) = ({genus}, {faces}) is not stable: need 2g - 2 + n > 0")]
    Unstable { genus: u32, faces: usize },
    #[error("{edges} edges exceeds the enumeration size guard of {max}")]
    TooLarge { edges: usize, max: usize },
}

struct Labeling {
    code: Vec<u32>,
    /// `new_label[old_half_edge]`
    new_label: Vec<usize>,
}

fn traverse_all(g: &StableRibbonGraph, with_faces: bool) -> Vec<Labeling> {
    let nh = g.half_edge_count();
    let s0 = g.sigma0();
    let face_of = if with_faces { g.face_label_of() } else { vec![0; nh] };
    let mut out = Vec::new();
    for root in 0..nh {
        let mut label = vec![usize::MAX; nh];
        label[root] = 0;
        extend(g, s0, &face_of, vec![root], label, 0, &mut out);
    }
    out
}

fn extend(
    g: &StableRibbonGraph,
    s0: &Perm,
    face_of: &[usize],
    mut order: Vec<usize>,
    mut label: Vec<usize>,
    mut idx: usize,
    out: &mut Vec<Labeling>,
) {
    let nh = g.half_edge_count();
    while idx < order.len() {
        let x = order[idx];
        for y in [x ^ 1, s0.apply(x)] {
            if label[y] == usize::MAX {
                label[y] = order.len();
                order.push(y);
            }
        }
        idx += 1;
    }
    if order.len() == nh {
        out.push(Labeling { code: encode(g, s0, face_of, &order, &label), new_label: label });
        return;
    }
    // earliest-labeled vertex that still has unvisited branches
    let mut best: Option<(usize, usize)> = None;
    for &h in &order {
        let v = g.vertex_of(h);
        if g.vertices()[v].half_edges().any(|x| label[x] == usize::MAX) {
            best = Some((label[h], v));
            break;
        }
    }
    let (_, v) = best.expect("connected graph: some visited vertex has unvisited branches");
    let pending: Vec<usize> = g.vertices()[v].half_edges().filter(|&x| label[x] == usize::MAX).collect();
    for u in pending {
        let mut o = order.clone();
        let mut l = label.clone();
        l[u] = o.len();
        o.push(u);
        extend(g, s0, face_of, o, l, idx, out);
    }
}

fn encode(g: &StableRibbonGraph, s0: &Perm, face_of: &[usize], order: &[usize], label: &[usize]) -> Vec<u32> {
    let mut vertex_index: BTreeMap<usize, u32> = BTreeMap::new();
    let mut code = Vec::with_capacity(order.len() * 4 + 8);
    code.push(order.len() as u32);
    for &h in order {
        let v = g.vertex_of(h);
        let next = vertex_index.len() as u32;
        let vi = *vertex_index.entry(v).or_insert(next);
        code.push(label[s0.apply(h)] as u32);
        code.push(label[h ^ 1] as u32);
        code.push(vi);
        code.push(face_of[h] as u32);
    }
    let mut by_index: Vec<(u32, usize)> = vertex_index.iter().map(|(&v, &i)| (i, v)).collect();
    by_index.sort();
    code.push(by_index.len() as u32);
    for (_, v) in by_index {
        code.push(g.vertices()[v].defect);
    }
    code
}

fn min_code(labelings: &[Labeling]) -> &[u32] {
    labelings.iter().map(|l| l.code.as_slice()).min().expect("at least one half-edge")
}

/// Canonical key with face labels fixed. Requires a connected graph with at least one edge.
pub fn canonical_key(g: &StableRibbonGraph) -> CanonicalKey {
    CanonicalKey(min_code(&traverse_all(g, true)).to_vec())
}

/// Key of the underlying graph with face labels forgotten.
pub fn unlabeled_key(g: &StableRibbonGraph) -> CanonicalKey {
    CanonicalKey(min_code(&traverse_all(g, false)).to_vec())
}

fn relabel_by(g: &StableRibbonGraph, new_label: &[usize]) -> StableRibbonGraph {
    // pair the new labels into edges ordered by their smaller member
    let nh = g.half_edge_count();
    let mut pairs: Vec<(usize, usize)> = (0..g.edge_count())
        .map(|e| {
            let (a, b) = (new_label[2 * e], new_label[2 * e + 1]);
            (a.min(b), a.max(b))
        })
        .collect();
    pairs.sort();
    let mut to_final = vec![0; nh];
    for (k, &(a, b)) in pairs.iter().enumerate() {
        to_final[a] = 2 * k;
        to_final[b] = 2 * k + 1;
    }
    let bij = Perm::from_images((0..nh).map(|h| to_final[new_label[h]]).collect()).expect("bijection");
    let mut out = g.relabeled(&bij).expect("edge-respecting relabeling");
    // fix a deterministic vertex and cycle order
    let mut verts: Vec<Vertex> = out
        .vertices()
        .iter()
        .map(|v| {
            let mut cycles: Vec<Vec<usize>> = v.cycles.iter().map(|c| rotate_min(c)).collect();
            cycles.sort();
            Vertex::new(cycles, v.defect)
        })
        .collect();
    verts.sort_by(|a, b| a.cycles.cmp(&b.cycles));
    out = StableRibbonGraph::new(nh, verts, out.face_labels().clone()).expect("same partition");
    out.normalized_labels()
}

fn rotate_min(c: &[usize]) -> Vec<usize> {
    let k = (0..c.len()).min_by_key(|&i| c[i]).unwrap_or(0);
    c[k..].iter().chain(&c[..k]).copied().collect()
}

/// Canonical representative of the isomorphism class (face labels fixed).
pub fn canonical_form(g: &StableRibbonGraph) -> StableRibbonGraph {
    let ls = traverse_all(g, true);
    let best = ls.iter().min_by(|a, b| a.code.cmp(&b.code)).unwrap();
    relabel_by(g, &best.new_label)
}

/// All face-label-fixing automorphisms, as half-edge bijections.
pub fn automorphisms(g: &StableRibbonGraph) -> AutomorphismGroup {
    let ls = traverse_all(g, true);
    let best = min_code(&ls).to_vec();
    let leaves: Vec<&Labeling> = ls.iter().filter(|l| l.code == best).collect();
    let base = &leaves[0].new_label;
    let mut base_inv = vec![0; base.len()];
    for (h, &l) in base.iter().enumerate() {
        base_inv[l] = h;
    }
    let mut elements: Vec<Perm> = leaves
        .iter()
        .map(|l| Perm::from_images((0..base.len()).map(|h| base_inv[l.new_label[h]]).collect()).unwrap())
        .collect();
    elements.sort();
    let generators = greedy_generators(&elements);
    AutomorphismGroup { order: elements.len(), generators, elements }
}

fn greedy_generators(elements: &[Perm]) -> Vec<Perm> {
    let mut gens: Vec<Perm> = Vec::new();
    let mut span: BTreeSet<Perm> = BTreeSet::new();
    if let Some(first) = elements.first() {
        span.insert(Perm::identity(first.len()));
    }
    for x in elements {
        if span.contains(x) {
            continue;
        }
        gens.push(x.clone());
        let mut queue: VecDeque<Perm> = span.iter().cloned().collect();
        while let Some(y) = queue.pop_front() {
            for gen in &gens {
                let z = gen.compose(&y);
                if span.insert(z.clone()) {
                    queue.push_back(z);
                }
            }
        }
    }
    gens
}

/// Number of edges of a trivalent graph of type `(g, n)`, after the stability and size checks.
pub fn trivalent_edge_count(genus: u32, faces: usize) -> Result<usize, EnumerateError> {
    let chi = 2 * genus as i64 - 2 + faces as i64;
    if chi <= 0 || faces == 0 {
        return Err(EnumerateError::Unstable { genus, faces });
    }
    let edges = 3 * chi as usize;
    if edges > MAX_ENUM_EDGES {
        return Err(EnumerateError::TooLarge { edges, max: MAX_ENUM_EDGES });
    }
    Ok(edges)
}

/// One isomorphism class with a canonical representative.
#[derive(Debug, Clone)]
pub struct GraphClass {
    pub key: CanonicalKey,
    pub graph: StableRibbonGraph,
    pub aut_order: usize,
}

impl GraphClass {
    pub fn of(g: &StableRibbonGraph) -> Self {
        GraphClass { key: canonical_key(g), graph: canonical_form(g), aut_order: automorphisms(g).order }
    }
}

/// All trivalent ribbon graphs of genus `g` with `n` numbered faces, one per isomorphism class,
/// sorted by key.
///
/// The vertex permutation is fixed to `(0 1 2)(3 4 5)…` and edge involutions are grown as
/// rooted maps; each hit is then relabeled so that edges pair `2k, 2k+1`.
pub fn enumerate_trivalent(genus: u32, faces: usize) -> Result<Vec<GraphClass>, EnumerateError> {
    let edges = trivalent_edge_count(genus, faces)?;
    let nh = 2 * edges;
    let s0 = Perm::from_images((0..nh).map(|h| if h % 3 == 2 { h - 2 } else { h + 1 }).collect()).unwrap();
    let s0_inv = s0.inverse();

    let mut rooted: Vec<StableRibbonGraph> = Vec::new();
    let mut inv = vec![usize::MAX; nh];
    grow_rooted(&mut inv, 0, 3, &mut |inv| {
        if let Some(g) = accept(&s0, &s0_inv, inv, genus, faces) {
            rooted.push(g);
        }
    });
    let keyed: Vec<(CanonicalKey, StableRibbonGraph)> = rooted.into_par_iter().map(|g| (unlabeled_key(&g), g)).collect();
    let mut unlabeled: BTreeMap<CanonicalKey, StableRibbonGraph> = BTreeMap::new();
    for (k, g) in keyed {
        unlabeled.entry(k).or_insert(g);
    }

    let mut labeled: BTreeMap<CanonicalKey, StableRibbonGraph> = BTreeMap::new();
    for g in unlabeled.values() {
        for relabeled in all_face_labelings(g) {
            let key = canonical_key(&relabeled);
            labeled.entry(key).or_insert(relabeled);
        }
    }
    Ok(labeled
        .into_iter()
        .map(|(key, g)| GraphClass { key, aut_order: automorphisms(&g).order, graph: canonical_form(&g) })
        .collect())
}

/// Grows connected rooted trivalent maps with half-edges numbered in traversal order: vertex
/// `v` carries `3v, 3v+1, 3v+2` in cyclic order, and the partner of the first unpaired
/// half-edge `h` is either a later unpaired half-edge already discovered or the first half-edge
/// of a new vertex. Every rooted map appears exactly once.
fn grow_rooted(inv: &mut [usize], from: usize, discovered: usize, visit: &mut impl FnMut(&[usize])) {
    let nh = inv.len();
    let Some(h) = (from..discovered).find(|&h| inv[h] == usize::MAX) else {
        if discovered == nh {
            visit(inv);
        }
        return;
    };
    for b in h + 1..discovered {
        if inv[b] == usize::MAX {
            inv[h] = b;
            inv[b] = h;
            grow_rooted(inv, h + 1, discovered, visit);
            inv[h] = usize::MAX;
            inv[b] = usize::MAX;
        }
    }
    if discovered < nh {
        inv[h] = discovered;
        inv[discovered] = h;
        grow_rooted(inv, h + 1, discovered + 3, visit);
        inv[h] = usize::MAX;
        inv[discovered] = usize::MAX;
    }
}

fn accept(s0: &Perm, s0_inv: &Perm, inv: &[usize], genus: u32, faces: usize) -> Option<StableRibbonGraph> {
    let nh = inv.len();
    // face count of σ0⁻¹σ1
    let mut seen = vec![false; nh];
    let mut f = 0;
    for start in 0..nh {
        if !seen[start] {
            f += 1;
            if f > faces {
                return None;
            }
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                h = s0_inv.apply(inv[h]);
            }
        }
    }
    if f != faces {
        return None;
    }
    // transitivity of ⟨σ0, σ1⟩
    let mut seen = vec![false; nh];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(h) = stack.pop() {
        for y in [inv[h], s0.apply(h)] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    if count != nh {
        return None;
    }
    let v = nh / 3;
    let e = nh / 2;
    if 2 + e as i64 - v as i64 - faces as i64 != 2 * genus as i64 {
        return None;
    }
    // relabel so that σ1 pairs 2k, 2k+1
    let mut to_new = vec![usize::MAX; nh];
    let mut k = 0;
    for h in 0..nh {
        if to_new[h] == usize::MAX {
            to_new[h] = 2 * k;
            to_new[inv[h]] = 2 * k + 1;
            k += 1;
        }
    }
    let cycles: Vec<Vertex> = s0
        .cycles()
        .into_iter()
        .map(|c| Vertex::new(vec![c.iter().map(|&h| to_new[h]).collect()], 0))
        .collect();
    StableRibbonGraph::with_numbered_faces(nh, cycles).ok()
}

/// The graph with its faces relabeled by every permutation of `1..=n`.
pub fn all_face_labelings(g: &StableRibbonGraph) -> Vec<StableRibbonGraph> {
    let reps: Vec<usize> = g.faces().iter().map(|f| f.half_edges[0]).collect();
    let n = reps.len();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (1..=n).collect();
    permutations(&mut perm, 0, &mut |p| {
        let labels: BTreeMap<usize, usize> = reps.iter().zip(p).map(|(&h, &l)| (h, l)).collect();
        out.push(StableRibbonGraph::new(g.half_edge_count(), g.vertices().to_vec(), labels).unwrap());
    });
    out
}

fn permutations(xs: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == xs.len() {
        visit(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permutations(xs, k + 1, visit);
        xs.swap(k, i);
    }
}

/// A cell of the complex: a class of stable ribbon graphs with its boundary relation.
#[derive(Debug, Clone)]
pub struct CellClass {
    pub key: CanonicalKey,
    pub graph: StableRibbonGraph,
    pub aut_order: usize,
    /// Indices (into the same list) of the cells this one is obtained from by one contraction,
    /// with the contracted edge of the parent.
    pub parents: Vec<(usize, usize)>,
}

impl CellClass {
    pub fn dimension(&self) -> usize {
        self.graph.edge_count()
    }
}

/// Closure of the trivalent cells under admissible single-edge contractions, sorted by
/// decreasing edge count and then by key.
pub fn enumerate_cells(genus: u32, faces: usize) -> Result<Vec<CellClass>, EnumerateError> {
    let top = enumerate_trivalent(genus, faces)?;
    let mut graphs: BTreeMap<CanonicalKey, StableRibbonGraph> = BTreeMap::new();
    let mut parent_links: Vec<(CanonicalKey, CanonicalKey, usize)> = Vec::new();
    let mut frontier: Vec<CanonicalKey> = Vec::new();
    for c in top {
        frontier.push(c.key.clone());
        graphs.insert(c.key, c.graph);
    }
    while !frontier.is_empty() {
        let step: Vec<Vec<(CanonicalKey, CanonicalKey, usize, StableRibbonGraph)>> = frontier
            .par_iter()
            .map(|k| {
                let g = &graphs[k];
                (0..g.edge_count())
                    .filter_map(|e| contract_edge(g, e).ok().map(|c| (k.clone(), canonical_key(&c), e, canonical_form(&c))))
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (parent, child, e, g) in step.into_iter().flatten() {
            if !graphs.contains_key(&child) {
                graphs.insert(child.clone(), g);
                next.push(child.clone());
            }
            parent_links.push((child, parent, e));
        }
        next.sort();
        next.dedup();
        frontier = next;
    }
    let mut keys: Vec<CanonicalKey> = graphs.keys().cloned().collect();
    keys.sort_by(|a, b| graphs[b].edge_count().cmp(&graphs[a].edge_count()).then(a.cmp(b)));
    let index: BTreeMap<CanonicalKey, usize> = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
    let mut cells: Vec<CellClass> = keys
        .par_iter()
        .map(|k| {
            let g = graphs[k].clone();
            CellClass { key: k.clone(), aut_order: automorphisms(&g).order, graph: g, parents: Vec::new() }
        })
        .collect();
    for (child, parent, e) in parent_links {
        cells[index[&child]].parents.push((index[&parent], e));
    }
    for c in &mut cells {
        c.parents.sort();
        c.parents.dedup();
    }
    Ok(cells)
}

/// Whether cell `lower` lies in the closure of cell `upper` (reflexive, transitive).
pub fn is_face_of(cells: &[CellClass], lower: usize, upper: usize) -> bool {
    let mut stack = vec![lower];
    let mut seen = BTreeSet::new();
    while let Some(c) = stack.pop() {
        if c == upper {
            return true;
        }
        if seen.insert(c) {
            stack.extend(cells[c].parents.iter().map(|&(p, _)| p));
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgraph::samples::*;

    #[test]
    fn relabeling_keeps_key() {
        let g = theta_planar();
        let bij = Perm::from_images(vec![3, 2, 0, 1, 5, 4]).unwrap();
        let h = g.relabeled(&bij).unwrap();
        assert_eq!(canonical_key(&g), canonical_key(&h));
        assert_eq!(canonical_form(&g), canonical_form(&h));
    }

    #[test]
    fn one_face_and_three_face_theta_differ() {
        assert_ne!(canonical_key(&theta_one_face()), canonical_key(&theta_planar()));
    }

    #[test]
    fn theta_one_face_has_six_automorphisms() {
        assert_eq!(automorphisms(&theta_one_face()).order, 6);
        assert_eq!(automorphisms(&theta_planar()).order, 1);
    }

    #[test]
    fn single_edge_symmetry_depends_on_defects() {
        assert_eq!(automorphisms(&single_edge(1, 1)).order, 2);
        assert_eq!(automorphisms(&single_edge(1, 2)).order, 1);
    }

    #[test]
    fn unstable_and_oversized_types() {
        assert_eq!(enumerate_trivalent(0, 2).unwrap_err(), EnumerateError::Unstable { genus: 0, faces: 2 });
        assert!(matches!(enumerate_trivalent(2, 2), Err(EnumerateError::TooLarge { .. })));
    }

    #[test]
    fn small_type_counts() {
        assert_eq!(enumerate_trivalent(0, 3).unwrap().len(), 4);
        let t11 = enumerate_trivalent(1, 1).unwrap();
        assert_eq!(t11.len(), 1);
        assert_eq!(t11[0].aut_order, 6);
    }
}
