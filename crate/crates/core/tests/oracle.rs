//! Block-positivity minima on C²⊗C² against an exhaustive Bloch-sphere search.

use conewitness::catalog;
use conewitness::config::SeeSawConfig;
use conewitness::linalg::{frobenius, CMatrix, CVector};
use conewitness::positivity::block_positivity_min;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn bloch(theta: f64, phi: f64) -> [Complex64; 2] {
    [
        Complex64::from((theta / 2.0).cos()),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// ⟨x⊗y|W|x⊗y⟩ computed straight from the definition.
fn product_value(w: &CMatrix, angles: [f64; 4]) -> f64 {
    let x = bloch(angles[0], angles[1]);
    let y = bloch(angles[2], angles[3]);
    let v: Vec<Complex64> = (0..4).map(|k| x[k / 2] * y[k % 2]).collect();
    let mut acc = Complex64::from(0.0);
    for r in 0..4 {
        for c in 0..4 {
            acc += v[r].conj() * w[(r, c)] * v[c];
        }
    }
    acc.re
}

/// Grid search followed by a shrinking coordinate pattern search.
fn oracle_min(w: &CMatrix) -> f64 {
    const T: usize = 16;
    const P: usize = 24;
    let mut best = (f64::INFINITY, [0.0; 4]);
    for a in 0..=T {
        for b in 0..P {
            for c in 0..=T {
                for d in 0..P {
                    let angles = [
                        PI * a as f64 / T as f64,
                        2.0 * PI * b as f64 / P as f64,
                        PI * c as f64 / T as f64,
                        2.0 * PI * d as f64 / P as f64,
                    ];
                    let v = product_value(w, angles);
                    if v < best.0 {
                        best = (v, angles);
                    }
                }
            }
        }
    }
    let (mut value, mut angles) = best;
    let mut step = PI / T as f64;
    while step > 1e-10 {
        let mut moved = false;
        for k in 0..4 {
            for sign in [-1.0, 1.0] {
                let mut trial = angles;
                trial[k] += sign * step;
                let v = product_value(w, trial);
                if v < value {
                    value = v;
                    angles = trial;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    value
}

fn normalized(w: CMatrix) -> CMatrix {
    let n = frobenius(&w);
    w / Complex64::from(n)
}

fn random_hermitian(rng: &mut ChaCha8Rng) -> CMatrix {
    let a = CMatrix::from_fn(4, 4, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    normalized(&a + a.adjoint())
}

fn compare(w: &CMatrix, rng: &mut ChaCha8Rng) {
    let report = block_positivity_min(w, 2, 2, &SeeSawConfig::default(), rng).unwrap();
    let oracle = oracle_min(w);
    assert!(report.converged);
    assert!(
        (report.min_value - oracle).abs() < 1e-3,
        "see-saw {} vs grid {}",
        report.min_value,
        oracle
    );
    // see-saw is an upper bound on the true minimum
    assert!(report.min_value >= oracle - 1e-3);
}

#[test]
fn catalog_maps_match_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let maps = [
        catalog::transposition(2).unwrap().into_choi(),
        catalog::reduction(2).unwrap().into_choi(),
        CMatrix::identity(4, 4),
    ];
    for w in maps {
        compare(&normalized(w), &mut rng);
    }
}

#[test]
fn random_witnesses_match_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..8 {
        let w = random_hermitian(&mut rng);
        compare(&w, &mut rng);
    }
}

#[test]
fn partially_transposed_singlet() {
    // the singlet's partial transpose is I/2 − P_Φ with Φ = (|00⟩+|11⟩)/√2:
    // eigenvalue −1/2, yet ⟨x⊗y|·|x⊗y⟩ = (1 − |xᵗy|²)/2 ≥ 0, zero at y = x̄
    let s = 1.0 / 2f64.sqrt();
    let psi = CVector::from_vec(
        vec![0.0, s, -s, 0.0]
            .into_iter()
            .map(Complex64::from)
            .collect(),
    );
    let p = &psi * psi.adjoint();
    let gamma = conewitness::linalg::partial_transpose_first(&p, 2, 2);
    assert!(conewitness::linalg::eigh(&gamma, 1e-12).unwrap().0[0] < -0.49);
    assert!(oracle_min(&gamma).abs() < 1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    compare(&gamma, &mut rng);
}
