//! Link graphs of triangular presentations.
//!
//! Vertices are the letters `g1, G1, ..., gn, Gn`, numbered by
//! [`Letter::code`](crate::words::Letter::code). A relation `abc` adds the
//! edges `{a, b^-1}`, `{b, c^-1}` and `{c, a^-1}`; the three positions give
//! the parts `L1`, `L2`, `L3` of the decomposition.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;

use crate::words::{Letter, Presentation, Word};

/// Undirected loop-free multigraph with integer edge multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertices: usize,
    edges: BTreeMap<(usize, usize), u32>,
    degree: Vec<u64>,
}

impl Multigraph {
    pub fn new(vertices: usize) -> Self {
        Self {
            vertices,
            edges: BTreeMap::new(),
            degree: vec![0; vertices],
        }
    }

    /// Complete graph on `m` vertices, every edge simple.
    pub fn complete(m: usize) -> Self {
        let mut g = Self::new(m);
        for u in 0..m {
            for w in u + 1..m {
                g.add_edge(u, w);
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, w: usize) {
        self.add_edges(u, w, 1);
    }

    /// # Panics
    /// Panics on a loop (`u == w`) or a vertex out of range.
    pub fn add_edges(&mut self, u: usize, w: usize, multiplicity: u32) {
        assert_ne!(u, w, "multigraphs here are loop-free");
        assert!(
            u < self.vertices && w < self.vertices,
            "vertex out of range"
        );
        if multiplicity == 0 {
            return;
        }
        *self.edges.entry((u.min(w), u.max(w))).or_insert(0) += multiplicity;
        self.degree[u] += u64::from(multiplicity);
        self.degree[w] += u64::from(multiplicity);
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn multiplicity(&self, u: usize, w: usize) -> u32 {
        self.edges.get(&(u.min(w), u.max(w))).copied().unwrap_or(0)
    }

    pub fn degree(&self, v: usize) -> u64 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degree
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edges.values().map(|&m| u64::from(m)).sum()
    }

    /// `(u, w, multiplicity)` with `u < w`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(u, w), &m)| (u, w, m))
    }

    pub fn min_degree(&self) -> u64 {
        self.degree.iter().copied().min().unwrap_or(0)
    }

    /// Multiset sum of the edges of two graphs on the same vertex set.
    ///
    /// # Panics
    /// Panics if the vertex counts differ.
    pub fn union(&self, other: &Multigraph) -> Multigraph {
        assert_eq!(
            self.vertices, other.vertices,
            "union needs a shared vertex set"
        );
        let mut out = self.clone();
        for (u, w, m) in other.edges() {
            out.add_edges(u, w, m);
        }
        out
    }

    /// Debug dump: `v <count>` then one `e <u> <w> <mult>` line per edge.
    pub fn dump(&self) -> String {
        let mut s = format!("v {}\n", self.vertices);
        for (u, w, m) in self.edges() {
            writeln!(s, "e {u} {w} {m}").expect("writing to a String");
        }
        s
    }

    /// Number of connected components, isolated vertices included.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::<usize>::new(self.vertices);
        let mut components = self.vertices;
        for (u, w, _) in self.edges() {
            if uf.union(u, w) {
                components -= 1;
            }
        }
        components
    }
}

/// Connectivity over all vertices; an isolated vertex disconnects the graph.
pub fn is_connected(g: &Multigraph) -> bool {
    g.component_count() <= 1
}

fn link_edges(word: &Word) -> [(usize, usize); 3] {
    let [a, b, c] = word.letters();
    let edge = |x: Letter, y: Letter| (x.code(), y.inverse().code());
    [edge(a, b), edge(b, c), edge(c, a)]
}

pub fn build_link_graph(p: &Presentation) -> Multigraph {
    let mut g = Multigraph::new(2 * p.n() as usize);
    for word in p.relations() {
        for (u, w) in link_edges(word) {
            g.add_edge(u, w);
        }
    }
    g
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDecomposition {
    /// `L1`, `L2`, `L3`.
    pub parts: [Multigraph; 3],
    /// Per relation, the edge it put into each part.
    pub provenance: Vec<[(usize, usize); 3]>,
}

impl LinkDecomposition {
    pub fn union(&self) -> Multigraph {
        self.parts[0].union(&self.parts[1]).union(&self.parts[2])
    }
}

pub fn decompose_link_graph(p: &Presentation) -> LinkDecomposition {
    let m = 2 * p.n() as usize;
    let mut parts = [Multigraph::new(m), Multigraph::new(m), Multigraph::new(m)];
    let mut provenance = Vec::with_capacity(p.len());
    for word in p.relations() {
        let edges = link_edges(word);
        for (part, &(u, w)) in parts.iter_mut().zip(edges.iter()) {
            part.add_edge(u, w);
        }
        provenance.push(edges);
    }
    LinkDecomposition { parts, provenance }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeConcentration {
    pub mean_degree: f64,
    /// `max_v |d(v) - mean| / mean`, infinite when the mean is zero.
    pub max_relative_deviation: f64,
}

pub fn degree_concentration(g: &Multigraph) -> DegreeConcentration {
    let m = g.vertex_count();
    if m == 0 {
        return DegreeConcentration {
            mean_degree: 0.0,
            max_relative_deviation: f64::INFINITY,
        };
    }
    let mean = g.degrees().iter().sum::<u64>() as f64 / m as f64;
    let max_relative_deviation = if mean == 0.0 {
        f64::INFINITY
    } else {
        g.degrees()
            .iter()
            .map(|&d| (d as f64 - mean).abs() / mean)
            .fold(0.0, f64::max)
    };
    DegreeConcentration {
        mean_degree: mean,
        max_relative_deviation,
    }
}

/// Vertex of the formal inverse: `gk <-> Gk`.
pub fn inverse_vertex(v: usize) -> usize {
    v ^ 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub max_multiplicity: u32,
    /// Edges of multiplicity at least two are pairwise vertex-disjoint.
    pub double_edges_form_matching: bool,
    /// Some pair `(v, pairing(v))` carries two or more edges.
    pub paired_multiple_edge: bool,
}

pub fn multiplicity_report(g: &Multigraph, pairing: impl Fn(usize) -> usize) -> MultiplicityReport {
    let mut max_multiplicity = 0;
    let mut in_double = vec![0u32; g.vertex_count()];
    let mut paired_multiple_edge = false;
    for (u, w, m) in g.edges() {
        max_multiplicity = max_multiplicity.max(m);
        if m >= 2 {
            in_double[u] += 1;
            in_double[w] += 1;
            if pairing(u) == w {
                paired_multiple_edge = true;
            }
        }
    }
    MultiplicityReport {
        max_multiplicity,
        double_edges_form_matching: in_double.iter().all(|&c| c <= 1),
        paired_multiple_edge,
    }
}

/// Closed-form edge counts of the auxiliary multigraph from which each `Li`
/// is drawn: `4(n-1)` between `a` and `b` with `b != a^-1`, and `2n-1`
/// between `a` and `a^-1`. Zero for `u == w`.
///
/// The second count covers only the words starting with `aa`; see
/// [`l1_pair_capacity`] for the number of words that actually land on the
/// pair.
pub fn stated_capacity(n: u64, u: usize, w: usize) -> u64 {
    if u == w || n == 0 {
        0
    } else if inverse_vertex(u) == w {
        2 * n - 1
    } else {
        4 * (n - 1)
    }
}

/// Number of words whose `L1` edge is `{u, w}` with `u` the first letter.
pub fn l1_orientation_capacity(n: u64, u: usize, w: usize) -> u64 {
    if u == w || n == 0 {
        0
    } else if inverse_vertex(u) == w {
        2 * n - 1
    } else {
        2 * (n - 1)
    }
}

/// Number of words whose `L1` edge falls on the unordered pair `{u, w}`:
/// `4(n-1)` for non-inverse pairs, `2(2n-1)` for `{a, a^-1}` since both
/// `aa..` and `a^-1 a^-1 ..` words land there.
pub fn l1_pair_capacity(n: u64, u: usize, w: usize) -> u64 {
    l1_orientation_capacity(n, u, w) + l1_orientation_capacity(n, w, u)
}
