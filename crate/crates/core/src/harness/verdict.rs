//! Witnesses and per-trial verdict assembly.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::freeness::{
    build_hypergraph, greedy_eliminate, hypergraph_diagnostics, FreenessCertificate,
    FreenessOutcome,
};
use crate::linkgraph::{build_link_graph, degree_concentration, is_connected};
use crate::spectra::{zuk_certificate, TCertificate, CERTIFICATE_MARGIN};
use crate::words::Presentation;

/// Out-of-scope result a witness leans on, with the density range in which
/// it is known to hold asymptotically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Assumption {
    /// The presentation complex is aspherical, so its Euler characteristic
    /// is the group's. Density below 1/2.
    AsphericalComplex,
    /// Every generator is nontrivial in the group. Density below 4/9.
    NontrivialGenerators,
}

impl Assumption {
    pub fn density_bound(self) -> f64 {
        match self {
            Assumption::AsphericalComplex => 0.5,
            Assumption::NontrivialGenerators => 4.0 / 9.0,
        }
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assumption::AsphericalComplex => {
                f.write_str("aspherical presentation complex (density < 1/2)")
            }
            Assumption::NontrivialGenerators => {
                f.write_str("nontrivial generators (density < 4/9)")
            }
        }
    }
}

/// Realized density `log t / (3 log n)`; `-inf` when there are no relations
/// and NaN for a single generator.
pub fn density(p: &Presentation) -> f64 {
    (p.len() as f64).ln() / (3.0 * f64::from(p.n()).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EulerCharacteristic {
    /// `1 - n + t`.
    pub chi: i64,
    /// `chi > 0`, which no free group has.
    pub witness: bool,
}

pub fn euler_characteristic(p: &Presentation) -> EulerCharacteristic {
    let chi = 1 - i64::from(p.n()) + p.len() as i64;
    EulerCharacteristic {
        chi,
        witness: chi > 0,
    }
}

/// Generators `s` such that neither `s` nor `s^-1` occurs in any relation.
pub fn find_isolated_generators(p: &Presentation) -> Vec<u32> {
    let mut seen = vec![false; p.n() as usize + 1];
    for word in p.relations() {
        for letter in word.letters() {
            seen[letter.generator() as usize] = true;
        }
    }
    (1..=p.n()).filter(|&g| !seen[g as usize]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiWitness {
    pub chi: i64,
    pub assumes: Assumption,
    pub density: f64,
    /// Realized density is below the assumption's bound.
    pub within_assumed_range: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsolationWitness {
    pub generators: Vec<u32>,
    pub assumes: Assumption,
    pub density: f64,
    pub within_assumed_range: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FreeVerdict {
    Certified { rank: u32 },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TVerdict {
    Certified {
        lambda2: f64,
    },
    Inconclusive {
        lambda2: f64,
        connected: bool,
    },
    /// Spectra disabled for this trial.
    Skipped {
        connected: bool,
    },
    /// The eigensolver failed; the rest of the verdict stands.
    Failed {
        connected: bool,
        error: String,
    },
}

impl TVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            TVerdict::Certified { .. } => "certified",
            TVerdict::Inconclusive { .. } => "inconclusive",
            TVerdict::Skipped { .. } => "skipped",
            TVerdict::Failed { .. } => "failed",
        }
    }

    pub fn lambda2(&self) -> Option<f64> {
        match *self {
            TVerdict::Certified { lambda2 } | TVerdict::Inconclusive { lambda2, .. } => {
                Some(lambda2)
            }
            _ => None,
        }
    }

    pub fn connected(&self) -> bool {
        match *self {
            TVerdict::Certified { .. } => true,
            TVerdict::Inconclusive { connected, .. }
            | TVerdict::Skipped { connected }
            | TVerdict::Failed { connected, .. } => connected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialStats {
    pub relations: usize,
    pub max_h_component: usize,
    pub degree_deviation: f64,
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialVerdict {
    pub n: u32,
    pub free: FreeVerdict,
    pub certificate: Option<FreenessCertificate>,
    pub chi: i64,
    pub not_free_witness: Option<ChiWitness>,
    pub t_cert: TVerdict,
    pub not_t_witness: Option<IsolationWitness>,
    pub stats: TrialStats,
}

impl TrialVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }

    /// Contradictory certificate/witness pairs never occur together.
    pub fn is_consistent(&self) -> bool {
        let free_clash =
            matches!(self.free, FreeVerdict::Certified { .. }) && self.not_free_witness.is_some();
        let t_clash =
            matches!(self.t_cert, TVerdict::Certified { .. }) && self.not_t_witness.is_some();
        !free_clash && !t_clash
    }
}

impl fmt::Display for TrialVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "generators {}  relations {}",
            self.n, self.stats.relations
        )?;
        match self.free {
            FreeVerdict::Certified { rank } => writeln!(f, "free: certified, rank {rank}")?,
            FreeVerdict::Inconclusive => writeln!(f, "free: inconclusive")?,
        }
        write!(f, "euler characteristic: {}", self.chi)?;
        match &self.not_free_witness {
            Some(w) => writeln!(
                f,
                "  -> not free, assuming {}{}",
                w.assumes,
                if w.within_assumed_range {
                    ""
                } else {
                    " [density out of range]"
                }
            )?,
            None => writeln!(f)?,
        }
        match &self.t_cert {
            TVerdict::Certified { lambda2 } => writeln!(f, "property (T): certified, lambda2 = {lambda2}")?,
            TVerdict::Inconclusive { lambda2, connected } => {
                writeln!(f, "property (T): inconclusive, lambda2 = {lambda2}, link graph connected = {connected}")?
            }
            TVerdict::Skipped { connected } => writeln!(f, "property (T): skipped, link graph connected = {connected}")?,
            TVerdict::Failed { error, .. } => writeln!(f, "property (T): solver failure: {error}")?,
        }
        if let Some(w) = &self.not_t_witness {
            let list: Vec<String> = w.generators.iter().map(|g| format!("g{g}")).collect();
            writeln!(
                f,
                "isolated generators: {}  -> not (T), assuming {}{}",
                list.join(" "),
                w.assumes,
                if w.within_assumed_range {
                    ""
                } else {
                    " [density out of range]"
                }
            )?;
        }
        writeln!(
            f,
            "largest 3-edge component {}  degree deviation {}",
            self.stats.max_h_component, self.stats.degree_deviation
        )?;
        if let Some(c) = &self.certificate {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Margin above 1/2 for the spectral certificate.
    pub margin: f64,
    /// Run the eigensolver; when off, property (T) is reported as skipped.
    pub spectra: bool,
    /// Record wall-clock time per trial.
    pub timing: bool,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            margin: CERTIFICATE_MARGIN,
            spectra: true,
            timing: false,
        }
    }
}

/// Run every certifier and witness on one presentation.
///
/// # Panics
/// Panics if a certificate and the witness refuting it are both produced,
/// which can only be a bug.
pub fn classify_trial(p: &Presentation, thresholds: &Thresholds) -> TrialVerdict {
    let start = Instant::now();
    let outcome = greedy_eliminate(p);
    let euler = euler_characteristic(p);
    let isolated = find_isolated_generators(p);
    let dens = density(p);

    let link = build_link_graph(p);
    let connected = is_connected(&link);
    let t_cert = if !thresholds.spectra {
        TVerdict::Skipped { connected }
    } else {
        match zuk_certificate(p, thresholds.margin) {
            Ok(TCertificate::Certified { lambda2 }) => TVerdict::Certified { lambda2 },
            Ok(TCertificate::Inconclusive { lambda2, connected }) => {
                TVerdict::Inconclusive { lambda2, connected }
            }
            Err(e) => TVerdict::Failed {
                connected,
                error: e.to_string(),
            },
        }
    };

    let (free, certificate) = match outcome {
        FreenessOutcome::Certified(c) => (FreeVerdict::Certified { rank: c.rank }, Some(c)),
        FreenessOutcome::Inconclusive { .. } => (FreeVerdict::Inconclusive, None),
    };
    let not_free_witness = euler.witness.then(|| ChiWitness {
        chi: euler.chi,
        assumes: Assumption::AsphericalComplex,
        density: dens,
        within_assumed_range: dens < Assumption::AsphericalComplex.density_bound(),
    });
    let not_t_witness = (!isolated.is_empty()).then(|| IsolationWitness {
        generators: isolated,
        assumes: Assumption::NontrivialGenerators,
        density: dens,
        within_assumed_range: dens < Assumption::NontrivialGenerators.density_bound(),
    });

    let stats = TrialStats {
        relations: p.len(),
        max_h_component: hypergraph_diagnostics(&build_hypergraph(p)).max_component_size,
        degree_deviation: degree_concentration(&link).max_relative_deviation,
        elapsed_ms: thresholds
            .timing
            .then(|| start.elapsed().as_millis() as u64),
    };

    let verdict = TrialVerdict {
        n: p.n(),
        free,
        certificate,
        chi: euler.chi,
        not_free_witness,
        t_cert,
        not_t_witness,
        stats,
    };
    assert!(
        verdict.is_consistent(),
        "contradictory verdict: {verdict:?}"
    );
    verdict
}
