//! Dense symmetric eigensolver, normalized Laplacians and spectral-gap
//! certificates.
//!
//! The solver reduces the matrix to tridiagonal form with Householder
//! reflections and then runs the implicit-shift QL iteration (the classic
//! `tred2`/`tql2` pair from EISPACK), accumulating eigenvectors so that every
//! eigenpair can be checked by its residual.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::linkgraph::{build_link_graph, is_connected, Multigraph};
use crate::words::Presentation;

/// Default solver tolerance, relative to the Frobenius norm of the matrix.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Margin above 1/2 that a spectral gap must clear to be certified.
pub const CERTIFICATE_MARGIN: f64 = 1e-8;

/// Iteration cap per eigenvalue in the QL sweep.
pub const MAX_QL_ITERATIONS: usize = 60;

/// Slack tolerated when comparing two computed spectral quantities.
pub const COMPARISON_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix of order zero has no spectrum")]
    Empty,
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("QL iteration did not converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },
    #[error("eigenpair residual {residual:e} exceeds bound {bound:e}")]
    ResidualExceeded { residual: f64, bound: f64 },
    #[error("eigenvalue sum misses the trace by {error:e} (bound {bound:e})")]
    TraceMismatch { error: f64, bound: f64 },
}

/// Real symmetric matrix stored as its packed lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    lower: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            lower: vec![0.0; order * (order + 1) / 2],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from `f(i, j)` evaluated on `i >= j` only.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    fn slot(i: usize, j: usize) -> usize {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        hi * (hi + 1) / 2 + lo
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[Self::slot(i, j)]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.lower[Self::slot(i, j)] = value;
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.order {
            for j in 0..=i {
                let v = self.get(i, j);
                sum += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        sum.sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.lower.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.order);
        let mut y = vec![0.0; self.order];
        for i in 0..self.order {
            let row = i * (i + 1) / 2;
            for j in 0..i {
                let a = self.lower[row + j];
                y[i] += a * x[j];
                y[j] += a * x[i];
            }
            y[i] += self.lower[row + i] * x[i];
        }
        y
    }

    /// `<Mx, x>`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.order;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.get(i, j);
            }
        }
        out
    }
}

/// Full spectral decomposition with its accuracy record.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigendecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` is the unit eigenvector of `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `max_k ||M v_k - lambda_k v_k||_2`.
    pub residual: f64,
    /// `|sum lambda_k - trace(M)|`.
    pub trace_error: f64,
    /// Frobenius norm of the input, the scale for both checks.
    pub norm: f64,
    pub tol: f64,
}

/// Every eigenvalue of a symmetric matrix, ascending, with eigenvectors.
///
/// Fails rather than return an eigenpair whose residual exceeds
/// `tol * ||M||_F` or a spectrum whose sum misses the trace by more than
/// `m * tol * ||M||_F`.
pub fn sym_eigs(matrix: &SymmetricMatrix, tol: f64) -> Result<Eigendecomposition, SpectralError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SpectralError::InvalidTolerance(tol));
    }
    let n = matrix.order();
    if n == 0 {
        return Err(SpectralError::Empty);
    }
    let mut v = matrix.to_dense();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut v, &mut d, &mut e);
    tridiagonal_ql(n, &mut v, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| (0..n).map(|i| v[i * n + k]).collect())
        .collect();

    let norm = matrix.frobenius_norm();
    let residual = eigenvalues
        .iter()
        .zip(&eigenvectors)
        .map(|(&lambda, x)| {
            let mx = matrix.mul_vec(x);
            mx.iter()
                .zip(x)
                .map(|(a, b)| (a - lambda * b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    let trace_error = (eigenvalues.iter().sum::<f64>() - matrix.trace()).abs();

    let bound = tol * norm;
    if residual > bound {
        return Err(SpectralError::ResidualExceeded { residual, bound });
    }
    let trace_bound = n as f64 * tol * norm;
    if trace_error > trace_bound {
        return Err(SpectralError::TraceMismatch {
            error: trace_error,
            bound: trace_bound,
        });
    }

    Ok(Eigendecomposition {
        eigenvalues,
        eigenvectors,
        residual,
        trace_error,
        norm,
        tol,
    })
}

// Householder reduction of the row-major symmetric matrix `v` to tridiagonal
// form. On return `d` holds the diagonal, `e[1..]` the subdiagonal and `v`
// the accumulated orthogonal transformation.
fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
    }

    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
                v[j * n + i] = 0.0;
            }
        } else {
            for dk in d[..i].iter_mut() {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);

            for j in 0..i {
                f = d[j];
                v[j * n + i] = f;
                g = e[j] + v[j * n + j] * f;
                for k in j + 1..i {
                    g += v[k * n + j] * d[k];
                    e[k] += v[k * n + j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1) * n + j];
                v[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[(n - 1) * n + i] = v[i * n + i];
        v[i * n + i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k * n + i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k * n + i + 1] * v[k * n + j];
                }
                for k in 0..=i {
                    v[k * n + j] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k * n + i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1) * n + j];
        v[(n - 1) * n + j] = 0.0;
    }
    v[(n - 1) * n + (n - 1)] = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal matrix (d, e), rotating `v` along.
fn tridiagonal_ql(
    n: usize,
    v: &mut [f64],
    d: &mut [f64],
    e: &mut [f64],
) -> Result<(), SpectralError> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            let mut iterations = 0;
            loop {
                iterations += 1;
                if iterations > MAX_QL_ITERATIONS {
                    return Err(SpectralError::NoConvergence {
                        index: l,
                        iterations: MAX_QL_ITERATIONS,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d[l + 2..].iter_mut() {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let row = k * n;
                        h = v[row + i + 1];
                        v[row + i + 1] = s * v[row + i] + c * h;
                        v[row + i] = c * v[row + i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Normalized Laplacian: 1 on the diagonal of non-isolated vertices,
/// `-a_vw / sqrt(d_v d_w)` on edges, zero elsewhere. Rows of isolated
/// vertices are entirely zero.
pub fn normalized_laplacian(g: &Multigraph) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(g.vertex_count());
    for v in 0..g.vertex_count() {
        if g.degree(v) > 0 {
            m.set(v, v, 1.0);
        }
    }
    for (u, w, mult) in g.edges() {
        let scale = ((g.degree(u) as f64) * (g.degree(w) as f64)).sqrt();
        m.set(u, w, -f64::from(mult) / scale);
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    /// Ascending eigenvalues of the normalized Laplacian.
    pub eigenvalues: Vec<f64>,
    pub lambda2: f64,
    pub residual: f64,
    pub connected: bool,
    pub tol: f64,
}

impl SpectralReport {
    /// `# m=<m> tol=<tol> residual=<r>` then `index,eigenvalue` rows.
    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "# m={} tol={:e} residual={:e}\nindex,eigenvalue\n",
            self.eigenvalues.len(),
            self.tol,
            self.residual
        );
        for (i, lambda) in self.eigenvalues.iter().enumerate() {
            writeln!(s, "{i},{lambda:e}").expect("writing to a String");
        }
        s
    }
}

/// Spectrum of the normalized Laplacian and its second-smallest eigenvalue.
///
/// A graph with fewer than two vertices reports `lambda2 = 0`.
pub fn spectral_gap(g: &Multigraph) -> Result<SpectralReport, SpectralError> {
    spectral_gap_with_tol(g, DEFAULT_TOL)
}

pub fn spectral_gap_with_tol(g: &Multigraph, tol: f64) -> Result<SpectralReport, SpectralError> {
    let eig = sym_eigs(&normalized_laplacian(g), tol)?;
    let lambda2 = eig.eigenvalues.get(1).copied().unwrap_or(0.0);
    Ok(SpectralReport {
        lambda2,
        residual: eig.residual,
        connected: is_connected(g),
        eigenvalues: eig.eigenvalues,
        tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TCertificate {
    /// Connected link graph with `lambda2 > 1/2 + margin`.
    Certified { lambda2: f64 },
    /// The criterion does not apply; nothing is proved. For a disconnected
    /// link graph `lambda2` is exactly zero and no eigensolve is run.
    Inconclusive { lambda2: f64, connected: bool },
}

impl TCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, TCertificate::Certified { .. })
    }

    pub fn lambda2(&self) -> f64 {
        match *self {
            TCertificate::Certified { lambda2 } | TCertificate::Inconclusive { lambda2, .. } => {
                lambda2
            }
        }
    }
}

/// Spectral-gap criterion for property (T) on the link graph.
///
/// Certifies iff the link graph is connected and its normalized-Laplacian
/// spectral gap exceeds `1/2 + margin`.
pub fn zuk_certificate(p: &Presentation, margin: f64) -> Result<TCertificate, SpectralError> {
    let link = build_link_graph(p);
    if !is_connected(&link) {
        // Each component contributes a zero eigenvalue, so lambda2 = 0.
        return Ok(TCertificate::Inconclusive {
            lambda2: 0.0,
            connected: false,
        });
    }
    let report = spectral_gap(&link)?;
    Ok(if report.lambda2 > 0.5 + margin {
        TCertificate::Certified {
            lambda2: report.lambda2,
        }
    } else {
        TCertificate::Inconclusive {
            lambda2: report.lambda2,
            connected: true,
        }
    })
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LemmaError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    EpsilonOutOfRange(f64),
    #[error("graphs have {0} and {1} vertices")]
    VertexMismatch(usize, usize),
    #[error("base graph is not connected")]
    Disconnected,
    #[error("base graph degree {degree} at vertex {vertex} is outside [{low}, {high}]")]
    DegreeOutOfBand {
        vertex: usize,
        degree: u64,
        low: f64,
        high: f64,
    },
    #[error("perturbation degree {degree} at vertex {vertex} exceeds {bound}")]
    PerturbationTooLarge {
        vertex: usize,
        degree: u64,
        bound: f64,
    },
    #[error("part L{part} has an isolated vertex {vertex}")]
    IsolatedVertex { part: usize, vertex: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationCheck {
    /// `lambda2(G ∪ H)`.
    pub perturbed: f64,
    /// `lambda2(G) - eps / (1 - eps)`.
    pub lower_bound: f64,
    /// `perturbed - lower_bound`.
    pub slack: f64,
    pub holds: bool,
}

/// Check `lambda2(G ∪ H) >= lambda2(G) - eps/(1-eps)` for a connected `G`
/// whose degrees all lie within `eps * d` of `d`, and an `H` whose degrees
/// are at most `eps * d`.
pub fn check_perturbation_inequality(
    g: &Multigraph,
    h: &Multigraph,
    eps: f64,
    d: f64,
) -> Result<PerturbationCheck, LemmaError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(LemmaError::EpsilonOutOfRange(eps));
    }
    if g.vertex_count() != h.vertex_count() {
        return Err(LemmaError::VertexMismatch(
            g.vertex_count(),
            h.vertex_count(),
        ));
    }
    if !is_connected(g) {
        return Err(LemmaError::Disconnected);
    }
    let (low, high) = (d - eps * d, d + eps * d);
    for (vertex, &degree) in g.degrees().iter().enumerate() {
        if (degree as f64) < low || (degree as f64) > high {
            return Err(LemmaError::DegreeOutOfBand {
                vertex,
                degree,
                low,
                high,
            });
        }
    }
    for (vertex, &degree) in h.degrees().iter().enumerate() {
        if degree as f64 > eps * d {
            return Err(LemmaError::PerturbationTooLarge {
                vertex,
                degree,
                bound: eps * d,
            });
        }
    }
    let base = spectral_gap(g)?.lambda2;
    let perturbed = spectral_gap(&g.union(h))?.lambda2;
    let lower_bound = base - eps / (1.0 - eps);
    let slack = perturbed - lower_bound;
    Ok(PerturbationCheck {
        perturbed,
        lower_bound,
        slack,
        holds: slack >= -COMPARISON_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinationCheck {
    /// `1 - lambda2(L1 ∪ L2 ∪ L3)`, the second-largest eigenvalue of
    /// `D^-1/2 A D^-1/2` for the union.
    pub union_term: f64,
    /// `1 - lambda2(Li)` for each part.
    pub part_terms: [f64; 3],
    pub holds: bool,
}

/// Check `1 - lambda2(L) <= sum_i (1 - lambda2(Li))` for `L = L1 ∪ L2 ∪ L3`.
/// Every part must have minimum degree at least one.
pub fn check_combination_inequality(
    l1: &Multigraph,
    l2: &Multigraph,
    l3: &Multigraph,
) -> Result<CombinationCheck, LemmaError> {
    let parts = [l1, l2, l3];
    for (i, part) in parts.iter().enumerate() {
        if part.vertex_count() != l1.vertex_count() {
            return Err(LemmaError::VertexMismatch(
                l1.vertex_count(),
                part.vertex_count(),
            ));
        }
        if let Some(vertex) = part.degrees().iter().position(|&d| d == 0) {
            return Err(LemmaError::IsolatedVertex {
                part: i + 1,
                vertex,
            });
        }
    }
    let mut part_terms = [0.0; 3];
    for (term, part) in part_terms.iter_mut().zip(parts) {
        *term = 1.0 - spectral_gap(part)?.lambda2;
    }
    let union_term = 1.0 - spectral_gap(&l1.union(l2).union(l3))?.lambda2;
    Ok(CombinationCheck {
        union_term,
        part_terms,
        holds: union_term <= part_terms.iter().sum::<f64>() + COMPARISON_TOL,
    })
}
