//! Freeness certification by pivotal generator elimination.
//!
//! A relation in which some generator occurs exactly once, while that
//! generator occurs in no other relation, can be deleted together with the
//! generator without changing the group. When repeated deletion empties the
//! relation set, the group is free of rank `n - t`. When it gets stuck the
//! outcome is inconclusive: nothing is proved either way.

use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{Presentation, Word};

/// Largest relation count accepted by [`subset_property_check`].
pub const SUBSET_GUARD: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationKind {
    /// `aaa`: one generator.
    Type1,
    /// `aab` up to rotation, `a != b`: `b` is the pivot.
    Type2,
    /// Three distinct generators, all pivotal.
    Type3,
}

impl RelationKind {
    pub fn edge_size(self) -> usize {
        match self {
            RelationKind::Type1 => 1,
            RelationKind::Type2 => 2,
            RelationKind::Type3 => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationClass {
    pub kind: RelationKind,
    /// Pivotal generators, ascending.
    pub pivots: Vec<u32>,
}

/// Classify by the multiset of underlying generators; signs are ignored.
pub fn classify_relation(word: &Word) -> RelationClass {
    let [a, b, c] = word.letters().map(|l| l.generator());
    if a == b && b == c {
        RelationClass {
            kind: RelationKind::Type1,
            pivots: Vec::new(),
        }
    } else if a == b || b == c || a == c {
        // The generator that occurs once.
        let pivot = if a == b {
            c
        } else if b == c {
            a
        } else {
            b
        };
        RelationClass {
            kind: RelationKind::Type2,
            pivots: vec![pivot],
        }
    } else {
        let mut pivots = vec![a, b, c];
        pivots.sort_unstable();
        RelationClass {
            kind: RelationKind::Type3,
            pivots,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperEdge {
    /// Position of the generating relation in the presentation.
    pub relation: usize,
    /// Distinct generators of the relation, ascending.
    pub vertices: Vec<u32>,
    pub pivots: Vec<u32>,
    pub kind: RelationKind,
}

/// Multi-hypergraph on the generators with one edge per relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    pub n: u32,
    pub edges: Vec<HyperEdge>,
}

pub fn build_hypergraph(p: &Presentation) -> Hypergraph {
    let edges = p
        .relations()
        .iter()
        .enumerate()
        .map(|(relation, word)| {
            let class = classify_relation(word);
            let mut vertices: Vec<u32> = word.letters().iter().map(|l| l.generator()).collect();
            vertices.sort_unstable();
            vertices.dedup();
            HyperEdge {
                relation,
                vertices,
                pivots: class.pivots,
                kind: class.kind,
            }
        })
        .collect();
    Hypergraph { n: p.n(), edges }
}

/// One elimination step: drop `generator` together with `relation`
/// (a zero-based relation position).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elimination {
    pub generator: u32,
    pub relation: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessCertificate {
    pub eliminations: Vec<Elimination>,
    /// Rank of the free group, `n - t`.
    pub rank: u32,
}

impl FreenessCertificate {
    /// Line-oriented form. Relation ids are 1-based line positions.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

impl fmt::Display for FreenessCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.eliminations {
            writeln!(
                f,
                "eliminate g{} using relation {}",
                e.generator,
                e.relation + 1
            )?;
        }
        writeln!(f, "rank {}", self.rank)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreenessOutcome {
    Certified(FreenessCertificate),
    /// Elimination got stuck on these relation positions.
    Inconclusive {
        residual: Vec<usize>,
    },
}

impl FreenessOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, FreenessOutcome::Certified(_))
    }

    pub fn certificate(&self) -> Option<&FreenessCertificate> {
        match self {
            FreenessOutcome::Certified(c) => Some(c),
            FreenessOutcome::Inconclusive { .. } => None,
        }
    }
}

/// Greedy elimination with fixed tie-breaking: the smallest generator that
/// currently occurs exactly once (counting both signs) is removed together
/// with the unique relation containing it.
pub fn greedy_eliminate(p: &Presentation) -> FreenessOutcome {
    let n = p.n() as usize;
    let rels = p.relations();
    let mut occurrences = vec![0usize; n + 1];
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (id, word) in rels.iter().enumerate() {
        for letter in word.letters() {
            let g = letter.generator() as usize;
            occurrences[g] += 1;
            if containing[g].last() != Some(&id) {
                containing[g].push(id);
            }
        }
    }
    let mut alive = vec![true; rels.len()];
    let mut remaining = rels.len();
    let mut eliminations = Vec::with_capacity(rels.len());

    while remaining > 0 {
        let Some(g) = (1..=n).find(|&g| occurrences[g] == 1) else {
            let residual = (0..rels.len()).filter(|&i| alive[i]).collect();
            return FreenessOutcome::Inconclusive { residual };
        };
        let relation = containing[g]
            .iter()
            .copied()
            .find(|&id| alive[id])
            .expect("a generator with one occurrence lies in a live relation");
        alive[relation] = false;
        remaining -= 1;
        for letter in rels[relation].letters() {
            occurrences[letter.generator() as usize] -= 1;
        }
        eliminations.push(Elimination {
            generator: g as u32,
            relation,
        });
    }

    FreenessOutcome::Certified(FreenessCertificate {
        eliminations,
        rank: p.n() - rels.len() as u32,
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("certificate has {found} steps for {expected} relations")]
    WrongLength { expected: usize, found: usize },
    #[error("certificate rank {found}, expected {expected}")]
    WrongRank { expected: i64, found: u32 },
    #[error("step {step}: relation {relation} is unknown or already eliminated")]
    StaleRelation { step: usize, relation: usize },
    #[error("step {step}: generator g{generator} is unknown or already eliminated")]
    StaleGenerator { step: usize, generator: u32 },
    #[error("step {step}: g{generator} occurs {in_relation} times in the relation")]
    NotExactlyOnce {
        step: usize,
        generator: u32,
        in_relation: usize,
    },
    #[error("step {step}: g{generator} also occurs in relation {other}")]
    OccursElsewhere {
        step: usize,
        generator: u32,
        other: usize,
    },
}

/// Replay a certificate against its presentation, checking every step from
/// scratch.
pub fn validate_certificate(
    p: &Presentation,
    cert: &FreenessCertificate,
) -> Result<(), ReplayError> {
    let rels = p.relations();
    if cert.eliminations.len() != rels.len() {
        return Err(ReplayError::WrongLength {
            expected: rels.len(),
            found: cert.eliminations.len(),
        });
    }
    let expected_rank = i64::from(p.n()) - rels.len() as i64;
    if i64::from(cert.rank) != expected_rank {
        return Err(ReplayError::WrongRank {
            expected: expected_rank,
            found: cert.rank,
        });
    }
    let mut removed = vec![false; rels.len()];
    let mut gone = vec![false; p.n() as usize + 1];
    for (step, e) in cert.eliminations.iter().enumerate() {
        if e.relation >= rels.len() || removed[e.relation] {
            return Err(ReplayError::StaleRelation {
                step,
                relation: e.relation,
            });
        }
        if e.generator == 0 || e.generator > p.n() || gone[e.generator as usize] {
            return Err(ReplayError::StaleGenerator {
                step,
                generator: e.generator,
            });
        }
        let in_relation = rels[e.relation].occurrences(e.generator);
        if in_relation != 1 {
            return Err(ReplayError::NotExactlyOnce {
                step,
                generator: e.generator,
                in_relation,
            });
        }
        if let Some(other) = (0..rels.len())
            .find(|&i| i != e.relation && !removed[i] && rels[i].occurrences(e.generator) > 0)
        {
            return Err(ReplayError::OccursElsewhere {
                step,
                generator: e.generator,
                other,
            });
        }
        removed[e.relation] = true;
        gone[e.generator as usize] = true;
    }
    Ok(())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("subset check limited to {SUBSET_GUARD} relations, got {0}")]
pub struct SubsetGuardError(pub usize);

/// Brute force over every nonempty subset `R'` of the relations: does some
/// `r` in `R'` contain a letter `a` such that `r` has exactly one letter in
/// `{a, a^-1}` and no other relation of `R'` mentions `a`?
pub fn subset_property_check(p: &Presentation) -> Result<bool, SubsetGuardError> {
    let rels = p.relations();
    if rels.len() > SUBSET_GUARD {
        return Err(SubsetGuardError(rels.len()));
    }
    let subset_has_pair = |mask: u32| {
        let members: Vec<usize> = (0..rels.len()).filter(|&i| mask & (1 << i) != 0).collect();
        members.iter().any(|&r| {
            rels[r].letters().iter().any(|a| {
                let once = rels[r]
                    .letters()
                    .iter()
                    .filter(|x| **x == *a || **x == a.inverse())
                    .count()
                    == 1;
                once && members.iter().filter(|&&t| t != r).all(|&t| {
                    rels[t]
                        .letters()
                        .iter()
                        .all(|x| x.generator() != a.generator())
                })
            })
        })
    };
    Ok((1u32..(1u32 << rels.len())).all(subset_has_pair))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentInfo {
    /// Smallest vertex of the component, used as its label.
    pub representative: u32,
    pub size: usize,
    /// Vertices lying in exactly one 3-edge.
    pub degree_one_vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypergraphReport {
    pub one_edges: usize,
    pub two_edges: usize,
    pub three_edges: usize,
    /// Components of the 3-edge subhypergraph with at least one edge.
    pub components: Vec<ComponentInfo>,
    /// No vertex lies in two 2-edges; parallel 2-edges count as a violation.
    pub two_edges_form_matching: bool,
    /// Components of the 3-edge subhypergraph (isolated vertices included)
    /// that meet two or more 2-edges.
    pub components_meeting_several_two_edges: usize,
    pub max_component_size: usize,
}

pub fn hypergraph_diagnostics(h: &Hypergraph) -> HypergraphReport {
    let n = h.n as usize;
    let mut uf = UnionFind::<usize>::new(n + 1);
    let mut three_degree = vec![0usize; n + 1];
    let mut two_degree = vec![0usize; n + 1];
    let mut counts = [0usize; 4];
    for e in &h.edges {
        counts[e.kind.edge_size()] += 1;
        match e.kind {
            RelationKind::Type3 => {
                for &v in &e.vertices {
                    three_degree[v as usize] += 1;
                }
                uf.union(e.vertices[0] as usize, e.vertices[1] as usize);
                uf.union(e.vertices[0] as usize, e.vertices[2] as usize);
            }
            RelationKind::Type2 => {
                for &v in &e.vertices {
                    two_degree[v as usize] += 1;
                }
            }
            RelationKind::Type1 => {}
        }
    }

    let mut size = vec![0usize; n + 1];
    let mut degree_one = vec![0usize; n + 1];
    let mut has_edge = vec![false; n + 1];
    let mut representative = vec![u32::MAX; n + 1];
    for (v, &deg) in three_degree.iter().enumerate().skip(1) {
        let root = uf.find(v);
        size[root] += 1;
        representative[root] = representative[root].min(v as u32);
        if deg == 1 {
            degree_one[root] += 1;
        }
        if deg > 0 {
            has_edge[root] = true;
        }
    }

    let mut components: Vec<ComponentInfo> = (1..=n)
        .filter(|&r| uf.find(r) == r && has_edge[r])
        .map(|r| ComponentInfo {
            representative: representative[r],
            size: size[r],
            degree_one_vertices: degree_one[r],
        })
        .collect();
    components.sort_by_key(|c| c.representative);

    let mut two_edges_meeting = vec![0usize; n + 1];
    for e in h.edges.iter().filter(|e| e.kind == RelationKind::Type2) {
        let mut roots: Vec<usize> = e.vertices.iter().map(|&v| uf.find(v as usize)).collect();
        roots.dedup();
        for r in roots {
            two_edges_meeting[r] += 1;
        }
    }

    HypergraphReport {
        one_edges: counts[1],
        two_edges: counts[2],
        three_edges: counts[3],
        components,
        two_edges_form_matching: two_degree.iter().all(|&d| d <= 1),
        components_meeting_several_two_edges: two_edges_meeting.iter().filter(|&&c| c >= 2).count(),
        max_component_size: size.iter().copied().max().unwrap_or(0),
    }
}
