//! Finite-difference gradient check shared by the gradient and acceptance tests.

#![allow(dead_code)]

use holocomp::nn::{InrArchitecture, InrKind, InrModel};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const STEP: f64 = 1e-4;
pub const TOLERANCE: f64 = 1e-4;
/// Denominator floor so that near-zero components compare absolutely.
pub const FLOOR: f64 = 1e-6;

fn random_arch(kind: InrKind, rng: &mut ChaCha8Rng) -> InrArchitecture {
    let depth = rng.random_range(1..=3);
    let widths: Vec<usize> = (0..depth).map(|_| rng.random_range(1..=6)).collect();
    match kind {
        InrKind::VanillaMlp => InrArchitecture::vanilla_mlp(widths),
        InrKind::Siren => InrArchitecture::siren(widths),
        InrKind::FilmSiren => {
            let mapping: Vec<usize> = (0..rng.random_range(1..=2)).map(|_| rng.random_range(1..=3)).collect();
            InrArchitecture::film_siren(widths, rng.random_range(1..=4), mapping)
        }
    }
}

/// Loss recomputed from the forward pass only.
fn mse(model: &InrModel, coords: &Array2<f64>, targets: &Array2<f64>) -> f64 {
    let out = model.forward(coords.view()).unwrap();
    out.iter().zip(targets.iter()).map(|(o, t)| (o - t) * (o - t)).sum::<f64>() / out.len() as f64
}

pub fn random_model(kind: InrKind, seed: u64) -> (InrModel, Array2<f64>, Array2<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arch = random_arch(kind, &mut rng);
    let mut model = InrModel::init(arch, seed).unwrap();
    // perturb everything so zero-initialized parts (the FiLM head) are exercised
    for p in model.params.iter_mut() {
        *p += rng.random_range(-0.1..0.1);
    }
    let n = rng.random_range(1..=8);
    let coords = Array2::from_shape_fn((n, 2), |_| rng.random_range(-1.0..1.0));
    let targets = Array2::from_shape_fn((n, 3), |_| rng.random_range(0.0..1.0));
    (model, coords, targets)
}

pub fn central_difference(model: &InrModel, coords: &Array2<f64>, targets: &Array2<f64>, i: usize, h: f64) -> f64 {
    let mut plus = model.clone();
    plus.params[i] += h;
    let mut minus = model.clone();
    minus.params[i] -= h;
    (mse(&plus, coords, targets) - mse(&minus, coords, targets)) / (2.0 * h)
}

pub fn max_relative_error_with(kind: InrKind, seed: u64, h: f64) -> f64 {
    let (model, coords, targets) = random_model(kind, seed);
    let (loss, grads) = model.backward(coords.view(), targets.view()).unwrap();
    assert!((loss - mse(&model, &coords, &targets)).abs() < 1e-12);
    let mut worst: f64 = 0.0;
    for i in 0..model.params.len() {
        let numeric = central_difference(&model, &coords, &targets, i, h);
        let rel = (grads[i] - numeric).abs() / grads[i].abs().max(numeric.abs()).max(FLOOR);
        worst = worst.max(rel);
    }
    worst
}

pub fn max_relative_error(kind: InrKind, seed: u64) -> f64 {
    max_relative_error_with(kind, seed, STEP)
}

/// Seeds of the 20 configurations checked per architecture.
pub fn config_seeds(kind: InrKind) -> impl Iterator<Item = u64> {
    (0..20u64).map(move |config| 1000 * (kind as u64 + 1) + config)
}

/// `(config, error)` for every configuration at or above the tolerance.
pub fn failing_configs(kind: InrKind) -> Vec<(usize, f64)> {
    config_seeds(kind)
        .enumerate()
        .filter_map(|(config, seed)| {
            let err = max_relative_error(kind, seed);
            (err >= TOLERANCE).then_some((config, err))
        })
        .collect()
}
