//! Frozen verdict for `n = 50, p = 30 log n / n^2, seed 1`.

use trigroup::harness::verdict::{classify_trial, TVerdict, Thresholds};
use trigroup::words::sample_binomial;

const FROZEN: &str = include_str!("fixtures/regression_n50_seed1.json");

#[test]
fn verdict_replays_bit_identically() {
    let n = 50u32;
    let p = 30.0 * f64::from(n).ln() / f64::from(n * n);
    let verdict = classify_trial(&sample_binomial(n, p, 1).unwrap(), &Thresholds::default());
    assert_eq!(verdict.to_json(), FROZEN.trim_end());
    assert!(
        matches!(verdict.t_cert, TVerdict::Certified { lambda2 } if lambda2.to_bits() == 0.9738271600813608f64.to_bits())
    );
}
