use crate::error::{HoloError, Result};
use crate::nn::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// First/second moment estimates and the step counter.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState<T> {
    pub m: Vec<T>,
    pub v: Vec<T>,
    pub step: u64,
}

impl<T: Real> AdamState<T> {
    pub fn new(len: usize) -> Self {
        Self {
            m: vec![T::zero(); len],
            v: vec![T::zero(); len],
            step: 0,
        }
    }
}

/// One bias-corrected Adam update. Non-finite gradients leave `params` and
/// `state` untouched and return an error.
pub fn adam_step<T: Real>(params: &mut [T], grads: &[T], state: &mut AdamState<T>, lr: f64, cfg: &AdamConfig) -> Result<()> {
    if params.len() != grads.len() || params.len() != state.m.len() || params.len() != state.v.len() {
        return Err(HoloError::Structural(format!(
            "adam: {} params, {} grads, {} moments",
            params.len(),
            grads.len(),
            state.m.len()
        )));
    }
    if let Some(i) = grads.iter().position(|g| !g.is_finite()) {
        return Err(HoloError::Training(format!("non-finite gradient at parameter {i}")));
    }
    state.step += 1;
    let t = state.step as i32;
    let c1 = 1.0 - cfg.beta1.powi(t);
    let c2 = 1.0 - cfg.beta2.powi(t);
    let (b1, b2) = (T::of(cfg.beta1), T::of(cfg.beta2));
    let (nb1, nb2) = (T::of(1.0 - cfg.beta1), T::of(1.0 - cfg.beta2));
    // lr·m̂/(sqrt(v̂)+eps) = (lr/c1)·m / (sqrt(v)/sqrt(c2) + eps)
    let step_size = T::of(lr / c1);
    let inv_sqrt_c2 = T::of(1.0 / c2.sqrt());
    let eps = T::of(cfg.eps);
    for (((p, &g), m), v) in params.iter_mut().zip(grads).zip(state.m.iter_mut()).zip(state.v.iter_mut()) {
        *m = b1 * *m + nb1 * g;
        *v = b2 * *v + nb2 * g * g;
        *p = *p - step_size * *m / (v.sqrt() * inv_sqrt_c2 + eps);
    }
    Ok(())
}
