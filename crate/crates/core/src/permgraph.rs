//! Stable ribbon graphs as permutation data on half-edges.
//!
//! Half-edges are `0..2E`; half-edges `2k` and `2k+1` form edge `k`, so the edge
//! involution `σ1` is implicit. Each vertex carries a permutation of its half-edges
//! given as a list of cycles (one cycle for an ordinary ribbon-graph vertex, several
//! for a vertex sitting at a node), and a genus defect. `σ0` is the product of all
//! vertex permutations and faces are the cycles of `σ2 = σ0⁻¹σ1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::perm::Perm;
use crate::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub cycles: Vec<Vec<usize>>,
    pub defect: u32,
}

impl Vertex {
    pub fn new(cycles: Vec<Vec<usize>>, defect: u32) -> Self {
        Vertex { cycles, defect }
    }

    pub fn degree(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    pub fn half_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.cycles.iter().flatten().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("half-edge count {0} is odd")]
    OddHalfEdgeCount(usize),
    #[error("vertex permutations do not partition the half-edges: {0}")]
    NotBlockRespecting(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no faces")]
    NoFaces,
    #[error("face labels do not match the faces: {0}")]
    FaceLabelMismatch(String),
    #[error("vertex {vertex} of degree {degree} has genus defect 0")]
    Unstable { vertex: usize, degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LengthError {
    #[error("expected {expected} edge lengths, got {got}")]
    Count { expected: usize, got: usize },
    #[error("length of edge {0} is not positive")]
    NonPositive(usize),
}

/// One face: a cycle of `σ2`, starting at its smallest half-edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceWord {
    pub label: usize,
    pub half_edges: Vec<usize>,
}

impl FaceWord {
    pub fn degree(&self) -> usize {
        self.half_edges.len()
    }

    /// Edge indices along the face; an edge bordering the face on both sides appears twice.
    pub fn edges(&self) -> Vec<usize> {
        self.half_edges.iter().map(|h| h / 2).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableRibbonGraph {
    half_edges: usize,
    vertices: Vec<Vertex>,
    /// Representative half-edge of a face mapped to the face label `1..=n`.
    face_labels: BTreeMap<usize, usize>,
    sigma0: Perm,
    vertex_of: Vec<usize>,
}

impl StableRibbonGraph {
    /// Builds the graph after checking that the vertex cycles partition `0..half_edges`.
    /// The remaining invariants are checked by [`StableRibbonGraph::validate`].
    pub fn new(
        half_edges: usize,
        vertices: Vec<Vertex>,
        face_labels: BTreeMap<usize, usize>,
    ) -> Result<Self, Violation> {
        if !half_edges.is_multiple_of(2) {
            return Err(Violation::OddHalfEdgeCount(half_edges));
        }
        let mut vertex_of = vec![usize::MAX; half_edges];
        for (v, vert) in vertices.iter().enumerate() {
            for c in &vert.cycles {
                if c.is_empty() {
                    return Err(Violation::NotBlockRespecting(format!("vertex {v} has an empty cycle")));
                }
                for &h in c {
                    if h >= half_edges {
                        return Err(Violation::NotBlockRespecting(format!("half-edge {h} out of range")));
                    }
                    if vertex_of[h] != usize::MAX {
                        return Err(Violation::NotBlockRespecting(format!("half-edge {h} listed twice")));
                    }
                    vertex_of[h] = v;
                }
            }
        }
        if let Some(h) = vertex_of.iter().position(|&v| v == usize::MAX) {
            return Err(Violation::NotBlockRespecting(format!("half-edge {h} belongs to no vertex")));
        }
        let cycles: Vec<Vec<usize>> = vertices.iter().flat_map(|v| v.cycles.iter().cloned()).collect();
        let sigma0 = Perm::from_cycles(half_edges, &cycles).expect("cycles checked disjoint");
        Ok(StableRibbonGraph { half_edges, vertices, face_labels, sigma0, vertex_of })
    }

    /// Builds the graph and numbers its faces `1..=n` in order of their smallest half-edge.
    pub fn with_numbered_faces(half_edges: usize, vertices: Vec<Vertex>) -> Result<Self, Violation> {
        let mut g = Self::new(half_edges, vertices, BTreeMap::new())?;
        g.face_labels = g
            .sigma2()
            .cycles()
            .iter()
            .enumerate()
            .map(|(i, c)| (c[0], i + 1))
            .collect();
        Ok(g)
    }

    /// An ordinary ribbon graph: one cycle per vertex, all defects zero.
    pub fn ordinary(sigma0: &Perm) -> Result<Self, Violation> {
        let vertices = sigma0.cycles().into_iter().map(|c| Vertex::new(vec![c], 0)).collect();
        Self::with_numbered_faces(sigma0.len(), vertices)
    }

    pub fn half_edge_count(&self) -> usize {
        self.half_edges
    }

    pub fn edge_count(&self) -> usize {
        self.half_edges / 2
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    pub fn face_labels(&self) -> &BTreeMap<usize, usize> {
        &self.face_labels
    }

    pub fn sigma0(&self) -> &Perm {
        &self.sigma0
    }

    pub fn sigma1(&self) -> Perm {
        Perm::edge_involution(self.half_edges)
    }

    pub fn sigma2(&self) -> Perm {
        self.sigma0.inverse().compose(&self.sigma1())
    }

    pub fn face_count(&self) -> usize {
        self.sigma2().cycles().len()
    }

    /// Number of `σ0` cycles, i.e. local branches summed over all vertices.
    pub fn branch_count(&self) -> usize {
        self.vertices.iter().map(|v| v.cycles.len()).sum()
    }

    pub fn total_defect(&self) -> u32 {
        self.vertices.iter().map(|v| v.defect).sum()
    }

    /// True when every vertex is a single cycle of length at least 3 with zero defect.
    pub fn is_ordinary(&self) -> bool {
        self.vertices.iter().all(|v| v.cycles.len() == 1 && v.defect == 0 && v.degree() >= 3)
    }

    pub fn is_trivalent(&self) -> bool {
        self.is_ordinary() && self.vertices.iter().all(|v| v.degree() == 3)
    }

    pub fn is_connected(&self) -> bool {
        let nv = self.vertices.len();
        if nv == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in 0..self.edge_count() {
            let a = find(&mut parent, self.vertex_of[2 * e]);
            let b = find(&mut parent, self.vertex_of[2 * e + 1]);
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..nv).all(|v| find(&mut parent, v) == root)
    }

    /// Checks connectivity, face labeling and stability.
    pub fn validate(&self) -> Result<(), Violation> {
        if !self.is_connected() {
            return Err(Violation::Disconnected);
        }
        let faces = self.sigma2().cycles();
        if faces.is_empty() {
            return Err(Violation::NoFaces);
        }
        self.check_face_labels(&faces)?;
        for (v, vert) in self.vertices.iter().enumerate() {
            let deg = vert.degree();
            let needs_defect = deg == 1 || (deg == 2 && vert.cycles.len() == 1);
            if needs_defect && vert.defect == 0 {
                return Err(Violation::Unstable { vertex: v, degree: deg });
            }
        }
        Ok(())
    }

    fn check_face_labels(&self, faces: &[Vec<usize>]) -> Result<(), Violation> {
        let n = faces.len();
        if self.face_labels.len() != n {
            return Err(Violation::FaceLabelMismatch(format!(
                "{} labels for {} faces",
                self.face_labels.len(),
                n
            )));
        }
        let mut face_of = vec![usize::MAX; self.half_edges];
        for (i, c) in faces.iter().enumerate() {
            for &h in c {
                face_of[h] = i;
            }
        }
        let mut faces_seen = BTreeSet::new();
        let mut labels_seen = BTreeSet::new();
        for (&h, &label) in &self.face_labels {
            if h >= self.half_edges {
                return Err(Violation::FaceLabelMismatch(format!("representative {h} out of range")));
            }
            if label == 0 || label > n || !labels_seen.insert(label) {
                return Err(Violation::FaceLabelMismatch(format!("label {label} invalid or repeated")));
            }
            if !faces_seen.insert(face_of[h]) {
                return Err(Violation::FaceLabelMismatch(format!("face of half-edge {h} labeled twice")));
            }
        }
        Ok(())
    }

    /// Faces ordered by label. Panics if the face labels are inconsistent; call `validate` first.
    pub fn faces(&self) -> Vec<FaceWord> {
        let cycles = self.sigma2().cycles();
        let mut face_of = vec![0; self.half_edges];
        for (i, c) in cycles.iter().enumerate() {
            for &h in c {
                face_of[h] = i;
            }
        }
        let mut out: Vec<FaceWord> = self
            .face_labels
            .iter()
            .map(|(&h, &label)| FaceWord { label, half_edges: cycles[face_of[h]].clone() })
            .collect();
        out.sort_by_key(|f| f.label);
        out
    }

    /// Label of the face containing each half-edge.
    pub fn face_label_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.half_edges];
        for f in self.faces() {
            for h in f.half_edges {
                out[h] = f.label;
            }
        }
        out
    }

    /// Arithmetic genus of the surface of embedding plus the sum of genus defects.
    ///
    /// The embedding surface is the ribbon surface of `(σ0, σ1)` with the branches of
    /// each vertex glued at one point; a point where `m` branches meet adds `m - 1`.
    pub fn genus(&self) -> u32 {
        let v = self.vertices.len() as i64;
        let branches = self.branch_count() as i64;
        let e = self.edge_count() as i64;
        let f = self.face_count() as i64;
        let twice = branches + e - f + 2 - 2 * v;
        debug_assert!(twice % 2 == 0 && twice >= 0, "odd or negative Euler bookkeeping");
        (twice / 2) as u32 + self.total_defect()
    }

    /// Entry `(i, e)` is the number of times edge `e` borders face `i + 1`.
    pub fn incidence_matrix(&self) -> Vec<Vec<u32>> {
        self.faces()
            .iter()
            .map(|f| {
                let mut row = vec![0u32; self.edge_count()];
                for e in f.edges() {
                    row[e] += 1;
                }
                row
            })
            .collect()
    }

    /// Perimeters of the faces in label order, counting an edge twice when it borders a face twice.
    pub fn perimeters(&self, lengths: &[Q]) -> Result<Vec<Q>, LengthError> {
        if lengths.len() != self.edge_count() {
            return Err(LengthError::Count { expected: self.edge_count(), got: lengths.len() });
        }
        if let Some(e) = lengths.iter().position(|l| !rational::is_positive(l)) {
            return Err(LengthError::NonPositive(e));
        }
        Ok(self
            .faces()
            .iter()
            .map(|f| f.edges().iter().map(|&e| lengths[e].clone()).sum())
            .collect())
    }

    /// Relabels half-edges by `bij` (old `h` becomes `bij(h)`). `None` if `bij` does not map
    /// edges to edges.
    pub fn relabeled(&self, bij: &Perm) -> Option<Self> {
        if bij.len() != self.half_edges || (0..self.half_edges).any(|h| bij.apply(h ^ 1) != bij.apply(h) ^ 1) {
            return None;
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex::new(v.cycles.iter().map(|c| c.iter().map(|&h| bij.apply(h)).collect()).collect(), v.defect))
            .collect();
        let labels = self.face_labels.iter().map(|(&h, &l)| (bij.apply(h), l)).collect();
        Self::new(self.half_edges, vertices, labels).ok()
    }

    /// Same graph with each face labeled by its smallest half-edge (keeps the labels).
    pub fn normalized_labels(&self) -> Self {
        let mut out = self.clone();
        out.face_labels = self.faces().iter().map(|f| (f.half_edges[0], f.label)).collect();
        out
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            half_edges: self.half_edges,
            vertices: self.vertices.clone(),
            face_labels: self.face_labels.iter().map(|(h, l)| (h.to_string(), *l)).collect(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self, GraphFileError> {
        let mut labels = BTreeMap::new();
        for (k, &l) in &file.face_labels {
            let h: usize = k.parse().map_err(|_| GraphFileError::BadKey(k.clone()))?;
            labels.insert(h, l);
        }
        Ok(Self::new(file.half_edges, file.vertices.clone(), labels)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, GraphFileError> {
        let file: GraphFile = serde_json::from_str(s).map_err(|e| json_error(s, &e))?;
        Self::from_file(&file)
    }

    /// Plain structural multigraph in DOT syntax; ribbon structure is not represented.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph ribbon {\n");
        for (v, vert) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{v} [label=\"v{v} d={}\"];", vert.defect);
        }
        for e in 0..self.edge_count() {
            let _ = writeln!(s, "  v{} -- v{} [label=\"e{e}\"];", self.vertex_of[2 * e], self.vertex_of[2 * e + 1]);
        }
        s.push_str("}\n");
        s
    }
}

/// On-disk JSON shape of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub half_edges: usize,
    pub vertices: Vec<Vertex>,
    pub face_labels: BTreeMap<String, usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum GraphFileError {
    #[error("malformed graph JSON at byte {offset} (line {line}, column {column}): {msg}")]
    Json { offset: usize, line: usize, column: usize, msg: String },
    #[error("face label key `{0}` is not a half-edge index")]
    BadKey(String),
    #[error(transparent)]
    Structure(#[from] Violation),
}

impl From<serde_json::Error> for GraphFileError {
    fn from(e: serde_json::Error) -> Self {
        GraphFileError::Json { offset: 0, line: e.line(), column: e.column(), msg: e.to_string() }
    }
}

/// Attaches the byte offset of serde's 1-based line and column within `src`.
fn json_error(src: &str, e: &serde_json::Error) -> GraphFileError {
    let line_start: usize = src.split_inclusive('\n').take(e.line().saturating_sub(1)).map(str::len).sum();
    let offset = (line_start + e.column().saturating_sub(1)).min(src.len());
    GraphFileError::Json { offset, line: e.line(), column: e.column(), msg: e.to_string() }
}

/// Small graphs used across tests and examples.
pub mod samples {
    use super::*;

    /// Theta graph `σ0 = (0 2 4)(1 3 5)` with one face (genus 1).
    pub fn theta_one_face() -> StableRibbonGraph {
        StableRibbonGraph::with_numbered_faces(
            6,
            vec![Vertex::new(vec![vec![0, 2, 4]], 0), Vertex::new(vec![vec![1, 3, 5]], 0)],
        )
        .unwrap()
    }

    /// Planar theta graph `σ0 = (0 2 4)(1 5 3)` with three faces.
    pub fn theta_planar() -> StableRibbonGraph {
        StableRibbonGraph::with_numbered_faces(
            6,
            vec![Vertex::new(vec![vec![0, 2, 4]], 0), Vertex::new(vec![vec![1, 5, 3]], 0)],
        )
        .unwrap()
    }

    /// One edge between two univalent vertices of the given defects.
    pub fn single_edge(d0: u32, d1: u32) -> StableRibbonGraph {
        StableRibbonGraph::with_numbered_faces(
            2,
            vec![Vertex::new(vec![vec![0]], d0), Vertex::new(vec![vec![1]], d1)],
        )
        .unwrap()
    }

    /// Two loops joined by a bridge: a genus-0 trivalent graph with three faces.
    pub fn dumbbell() -> StableRibbonGraph {
        // edge 0 loop at v0, edge 1 loop at v1, edge 2 bridge
        StableRibbonGraph::with_numbered_faces(
            6,
            vec![Vertex::new(vec![vec![0, 1, 4]], 0), Vertex::new(vec![vec![2, 3, 5]], 0)],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;
    use crate::rational::q;

    fn cyclic_eq(a: &[usize], b: &[usize]) -> bool {
        a.len() == b.len() && (0..a.len()).any(|s| (0..a.len()).all(|k| a[(s + k) % a.len()] == b[k]))
    }

    #[test]
    fn theta_is_valid_with_one_face() {
        let g = theta_one_face();
        assert_eq!(g.validate(), Ok(()));
        let faces = g.faces();
        assert_eq!(faces.len(), 1);
        assert!(cyclic_eq(&faces[0].half_edges, &[0, 5, 2, 1, 4, 3]));
        assert_eq!(g.genus(), 1);
    }

    #[test]
    fn planar_theta_has_three_faces() {
        let g = theta_planar();
        assert_eq!(g.validate(), Ok(()));
        assert_eq!(g.face_count(), 3);
        assert_eq!(g.genus(), 0);
        let mut p = g.perimeters(&[q(1), q(2), q(3)]).unwrap();
        p.sort();
        assert_eq!(p, vec![q(3), q(4), q(5)]);
    }

    #[test]
    fn theta_perimeter_counts_each_edge_twice() {
        let g = theta_one_face();
        assert_eq!(g.perimeters(&[q(1), q(2), q(3)]).unwrap(), vec![q(12)]);
    }

    #[test]
    fn zero_lengths_rejected() {
        let g = theta_planar();
        assert_eq!(g.perimeters(&[q(0), q(0), q(0)]), Err(LengthError::NonPositive(0)));
        assert!(matches!(g.perimeters(&[q(1)]), Err(LengthError::Count { .. })));
    }

    #[test]
    fn degree_one_vertex_needs_defect() {
        let g = single_edge(0, 1);
        assert_eq!(g.validate(), Err(Violation::Unstable { vertex: 0, degree: 1 }));
        let g = single_edge(1, 1);
        assert_eq!(g.validate(), Ok(()));
        assert_eq!(g.faces().len(), 1);
        assert_eq!(g.faces()[0].half_edges, vec![0, 1]);
        assert_eq!(g.genus(), 2);
    }

    #[test]
    fn degree_two_transposition_needs_defect() {
        // two vertices joined by two edges, each vertex a single 2-cycle
        let bad = StableRibbonGraph::with_numbered_faces(
            4,
            vec![Vertex::new(vec![vec![0, 2]], 0), Vertex::new(vec![vec![1, 3]], 1)],
        )
        .unwrap();
        assert!(matches!(bad.validate(), Err(Violation::Unstable { vertex: 0, degree: 2 })));
        // the same degree split into two 1-cycles is allowed without defect
        let ok = StableRibbonGraph::with_numbered_faces(
            4,
            vec![Vertex::new(vec![vec![0], vec![2]], 0), Vertex::new(vec![vec![1, 3]], 1)],
        )
        .unwrap();
        assert_eq!(ok.validate(), Ok(()));
    }

    #[test]
    fn empty_graph_has_no_faces() {
        let g = StableRibbonGraph::new(0, vec![Vertex::new(vec![], 2)], BTreeMap::new()).unwrap();
        assert_eq!(g.validate(), Err(Violation::NoFaces));
    }

    #[test]
    fn structural_errors() {
        assert_eq!(
            StableRibbonGraph::new(3, vec![], BTreeMap::new()),
            Err(Violation::OddHalfEdgeCount(3))
        );
        assert!(matches!(
            StableRibbonGraph::new(2, vec![Vertex::new(vec![vec![0, 0]], 0)], BTreeMap::new()),
            Err(Violation::NotBlockRespecting(_))
        ));
        assert!(matches!(
            StableRibbonGraph::new(2, vec![Vertex::new(vec![vec![0]], 1)], BTreeMap::new()),
            Err(Violation::NotBlockRespecting(_))
        ));
    }

    #[test]
    fn disconnected_and_bad_labels() {
        let g = StableRibbonGraph::with_numbered_faces(
            4,
            vec![
                Vertex::new(vec![vec![0]], 1),
                Vertex::new(vec![vec![1]], 1),
                Vertex::new(vec![vec![2]], 1),
                Vertex::new(vec![vec![3]], 1),
            ],
        )
        .unwrap();
        assert_eq!(g.validate(), Err(Violation::Disconnected));

        let mut labels = BTreeMap::new();
        labels.insert(0, 2);
        let g = StableRibbonGraph::new(6, theta_one_face().vertices().to_vec(), labels).unwrap();
        assert!(matches!(g.validate(), Err(Violation::FaceLabelMismatch(_))));
    }

    #[test]
    fn json_round_trip() {
        let g = theta_planar();
        let back = StableRibbonGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        let err = StableRibbonGraph::from_json("{\"half_edges\": 2,").unwrap_err();
        assert!(matches!(err, GraphFileError::Json { line: 1, .. }));
        let err = StableRibbonGraph::from_json("{\n \"half_edges\": x}").unwrap_err();
        assert!(matches!(err, GraphFileError::Json { offset: 17, line: 2, .. }), "{err}");
    }

    #[test]
    fn sigma_relation_holds() {
        for g in [theta_one_face(), theta_planar(), dumbbell(), single_edge(1, 2)] {
            let s1 = g.sigma1();
            assert_eq!(g.sigma0().compose(&g.sigma2()), s1);
        }
    }
}
