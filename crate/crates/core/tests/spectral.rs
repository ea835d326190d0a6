use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trigroup::linkgraph::{build_link_graph, Multigraph};
use trigroup::spectra::{
    normalized_laplacian, spectral_gap, sym_eigs, SymmetricMatrix, COMPARISON_TOL, DEFAULT_TOL,
};
use trigroup::words::sample_binomial;

fn random_connected_graph(m: usize, rng: &mut ChaCha8Rng) -> Multigraph {
    let mut g = Multigraph::new(m);
    for v in 1..m {
        let u = rng.random_range(0..v);
        g.add_edge(u, v);
    }
    for _ in 0..2 * m {
        let (u, w) = (rng.random_range(0..m), rng.random_range(0..m));
        if u != w {
            g.add_edges(u, w, rng.random_range(1..=3));
        }
    }
    g
}

fn sqrt_degrees(g: &Multigraph) -> Vec<f64> {
    let v: Vec<f64> = g.degrees().iter().map(|&d| (d as f64).sqrt()).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// `lambda2 = min x^T L x / x^T x` over `x` orthogonal to `D^1/2 1`, so no
/// random vector may undercut it.
#[test]
fn rayleigh_quotients_bound_lambda2() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = random_connected_graph(25, &mut rng);
    let l = normalized_laplacian(&g);
    let lambda2 = spectral_gap(&g).unwrap().lambda2;
    let top = sqrt_degrees(&g);
    for _ in 0..10_000 {
        let mut x: Vec<f64> = (0..25).map(|_| rng.random_range(-1.0..1.0)).collect();
        let along: f64 = x.iter().zip(&top).map(|(a, b)| a * b).sum();
        for (xi, ti) in x.iter_mut().zip(&top) {
            *xi -= along * ti;
        }
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        assert!(l.quadratic_form(&x) / norm2 >= lambda2 - COMPARISON_TOL);
    }
}

#[test]
fn bottom_eigenvector_is_sqrt_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let g = random_connected_graph(30, &mut rng);
    let eig = sym_eigs(&normalized_laplacian(&g), DEFAULT_TOL).unwrap();
    assert_abs_diff_eq!(eig.eigenvalues[0], 0.0, epsilon = 1e-10);
    let expected = sqrt_degrees(&g);
    let v = &eig.eigenvectors[0];
    let sign = v
        .iter()
        .zip(&expected)
        .map(|(a, b)| a * b)
        .sum::<f64>()
        .signum();
    for (a, b) in v.iter().zip(&expected) {
        assert_abs_diff_eq!(sign * a, b, epsilon = 1e-9);
    }
}

#[test]
fn complete_graph_spectra() {
    for m in 3..=10 {
        let eig = sym_eigs(&normalized_laplacian(&Multigraph::complete(m)), DEFAULT_TOL).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], 0.0, epsilon = 1e-9);
        for &x in &eig.eigenvalues[1..] {
            assert_abs_diff_eq!(x, m as f64 / (m as f64 - 1.0), epsilon = 1e-9);
        }
        assert!(eig.residual <= DEFAULT_TOL * eig.norm);
        assert!(eig.trace_error <= m as f64 * DEFAULT_TOL * eig.norm);
    }
}

#[test]
fn agrees_with_nalgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for m in [1usize, 2, 5, 17, 40] {
        let mut a = SymmetricMatrix::zeros(m);
        for i in 0..m {
            for j in 0..=i {
                a.set(i, j, rng.random_range(-3.0..3.0));
            }
        }
        let ours = sym_eigs(&a, DEFAULT_TOL).unwrap().eigenvalues;
        let dense = nalgebra::DMatrix::from_row_slice(m, m, &a.to_dense());
        let mut theirs: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (x, y) in ours.iter().zip(&theirs) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-9);
        }
    }
}

#[test]
fn link_graph_spectra_lie_in_range() {
    for seed in 0..30 {
        let p = sample_binomial(15, 4.0 / 225.0, seed).unwrap();
        let eig = sym_eigs(&normalized_laplacian(&build_link_graph(&p)), DEFAULT_TOL).unwrap();
        assert!(eig
            .eigenvalues
            .iter()
            .all(|&x| (-1e-10..=2.0 + 1e-10).contains(&x)));
    }
}

#[test]
fn repeated_eigenvalues_and_diagonal_input() {
    let d = SymmetricMatrix::from_fn(6, |i, j| if i == j { (i % 2) as f64 } else { 0.0 });
    let eig = sym_eigs(&d, DEFAULT_TOL).unwrap();
    assert_eq!(eig.eigenvalues, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
    let zero = sym_eigs(&SymmetricMatrix::zeros(4), DEFAULT_TOL).unwrap();
    assert_eq!(zero.eigenvalues, vec![0.0; 4]);
}
