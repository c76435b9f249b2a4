use ndarray::{Array2, Array3, ArrayView2, ArrayView3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::arch::{InrArchitecture, InrKind, ParamLayout};
use super::engine;
use crate::error::{HoloError, Result};

/// One patch's network: architecture plus its flat parameter vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InrModel {
    pub arch: InrArchitecture,
    pub params: Vec<f64>,
    pub seed: u64,
}

/// Pixel-center coordinates of an `h×w` patch in raster order, as `(x, y)`
/// rows in `[-1, 1]²`: `x = 2·(i + 0.5)/w − 1`.
pub fn patch_coordinates(h: usize, w: usize) -> Array2<f64> {
    let mut coords = Array2::zeros((h * w, 2));
    for y in 0..h {
        for x in 0..w {
            let row = y * w + x;
            coords[[row, 0]] = 2.0 * (x as f64 + 0.5) / w as f64 - 1.0;
            coords[[row, 1]] = 2.0 * (y as f64 + 0.5) / h as f64 - 1.0;
        }
    }
    coords
}

/// 3×h×w patch values to `(h·w)×3` targets matching [`patch_coordinates`].
pub fn patch_targets(patch: ArrayView3<'_, f64>) -> Array2<f64> {
    let (c, h, w) = patch.dim();
    Array2::from_shape_fn((h * w, c), |(row, ch)| patch[[ch, row / w, row % w]])
}

/// Inverse of [`patch_targets`].
pub fn outputs_to_patch(outputs: ArrayView2<'_, f64>, h: usize, w: usize) -> Array3<f64> {
    let c = outputs.ncols();
    Array3::from_shape_fn((c, h, w), |(ch, y, x)| outputs[[y * w + x, ch]])
}

fn fill_uniform(rng: &mut ChaCha8Rng, out: &mut [f64], bound: f64) {
    for v in out {
        *v = if bound > 0.0 { rng.random_range(-bound..bound) } else { 0.0 };
    }
}

impl InrModel {
    /// Seeded initialization.
    ///
    /// * vanilla MLP: He-uniform weights `U(±sqrt(6/fan_in))` on the ReLU layers,
    ///   `U(±1/sqrt(fan_in))` on the linear output layer, biases `U(±1/sqrt(fan_in))`.
    /// * SIREN: first layer `U(±1/fan_in)`, later layers `U(±sqrt(6/fan_in)/ω0)`,
    ///   biases `U(±1/sqrt(fan_in))`.
    /// * FilmSIREN: SIREN trunk, latent `U(±1)`, He-uniform mapping layers and a
    ///   zero (γ, β) head so the fresh model is exactly the unmodulated SIREN.
    pub fn init(arch: InrArchitecture, seed: u64) -> Result<Self> {
        arch.validate()?;
        let layout = arch.layout();
        let mut params = vec![0.0; layout.len];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let last = layout.trunk.len() - 1;
        for (l, slot) in layout.trunk.iter().enumerate() {
            let fan_in = slot.fan_in as f64;
            let w_bound = match arch.kind {
                InrKind::VanillaMlp if l == last => 1.0 / fan_in.sqrt(),
                InrKind::VanillaMlp => (6.0 / fan_in).sqrt(),
                _ if l == 0 => 1.0 / fan_in,
                _ => (6.0 / fan_in).sqrt() / arch.omega0,
            };
            fill_uniform(&mut rng, &mut params[slot.weight..slot.bias], w_bound);
            fill_uniform(&mut rng, &mut params[slot.bias..slot.bias + slot.fan_out], 1.0 / fan_in.sqrt());
        }
        if let Some((off, len)) = layout.latent {
            fill_uniform(&mut rng, &mut params[off..off + len], 1.0);
            let (_, hidden) = layout.mapping.split_last().expect("mapping head");
            for slot in hidden {
                fill_uniform(&mut rng, &mut params[slot.weight..slot.bias], (6.0 / slot.fan_in as f64).sqrt());
            }
        }
        Ok(Self { arch, params, seed })
    }

    pub fn from_params(arch: InrArchitecture, params: Vec<f64>, seed: u64) -> Result<Self> {
        arch.validate()?;
        let expected = arch.parameter_count();
        if params.len() != expected {
            return Err(HoloError::Structural(format!(
                "parameter vector has {} values, architecture needs {expected}",
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(HoloError::Validation("non-finite parameter".into()));
        }
        Ok(Self { arch, params, seed })
    }

    pub fn layout(&self) -> ParamLayout {
        self.arch.layout()
    }

    fn check_batch(&self, coords: ArrayView2<'_, f64>) -> Result<()> {
        if coords.ncols() != self.arch.input_dim {
            return Err(HoloError::Structural(format!(
                "coordinates have {} columns, model expects {}",
                coords.ncols(),
                self.arch.input_dim
            )));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(HoloError::Validation("non-finite coordinate".into()));
        }
        Ok(())
    }

    /// `N×2` coordinates to `N×3` outputs.
    pub fn forward(&self, coords: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        self.check_batch(coords)?;
        Ok(engine::forward(&self.arch, &self.layout(), &self.params, coords))
    }

    /// MSE loss and its gradient with respect to `params`.
    pub fn backward(&self, coords: ArrayView2<'_, f64>, targets: ArrayView2<'_, f64>) -> Result<(f64, Vec<f64>)> {
        self.check_batch(coords)?;
        if coords.nrows() == 0 {
            return Err(HoloError::Validation("empty batch".into()));
        }
        if targets.dim() != (coords.nrows(), self.arch.output_dim) {
            return Err(HoloError::Structural(format!(
                "targets {:?} do not match batch of {} × {} outputs",
                targets.dim(),
                coords.nrows(),
                self.arch.output_dim
            )));
        }
        let mut grads = vec![0.0; self.params.len()];
        let loss = engine::loss_and_grad(&self.arch, &self.layout(), &self.params, coords, targets, &mut grads);
        Ok((loss, grads))
    }
}
