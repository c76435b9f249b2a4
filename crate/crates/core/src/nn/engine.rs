//! Batched forward pass and hand-written reverse pass for the three INR kinds.
//!
//! Hidden layer `l` computes `Z = A·Wᵀ + b` and then
//!
//! * vanilla MLP: `relu(Z)`
//! * SIREN: `sin(ω0·Z)`
//! * FilmSIREN: `sin(γ_l ⊙ ω0·Z + β_l)`, with `γ = 1 + head_γ(latent)` and
//!   `β = head_β(latent)` produced by a small leaky-ReLU mapping network.
//!
//! The output layer is linear. The objective is the mean squared error over
//! every (sample, channel) pair.

use std::fmt::Debug;
use std::ops::{AddAssign, MulAssign, SubAssign};

use ndarray::linalg::general_mat_mul;
use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut1, ArrayViewMut2, Axis, LinalgScalar, ScalarOperand, Zip};
use num_traits::Float;

use super::arch::{DenseSlot, InrArchitecture, InrKind, ParamLayout};

pub const MAPPING_LEAK: f64 = 0.2;

/// Floating point type the engine can run in.
pub trait Real:
    Float + LinalgScalar + ScalarOperand + AddAssign + SubAssign + MulAssign + Send + Sync + Debug + 'static
{
    fn of(v: f64) -> Self;
    fn as_f64(self) -> f64;
}

impl Real for f32 {
    fn of(v: f64) -> Self {
        v as f32
    }
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn of(v: f64) -> Self {
        v
    }
    fn as_f64(self) -> f64 {
        self
    }
}

fn weights<T>(params: &[T], slot: DenseSlot) -> ArrayView2<'_, T> {
    ArrayView2::from_shape((slot.fan_out, slot.fan_in), &params[slot.weight..slot.bias]).expect("layout")
}

fn bias<T>(params: &[T], slot: DenseSlot) -> ArrayView1<'_, T> {
    ArrayView1::from(&params[slot.bias..slot.bias + slot.fan_out])
}

fn weights_mut<T>(grads: &mut [T], slot: DenseSlot) -> ArrayViewMut2<'_, T> {
    ArrayViewMut2::from_shape((slot.fan_out, slot.fan_in), &mut grads[slot.weight..slot.bias]).expect("layout")
}

fn dense<T: Real>(input: ArrayView2<'_, T>, params: &[T], slot: DenseSlot) -> Array2<T> {
    let mut out = Array2::zeros((input.nrows(), slot.fan_out));
    general_mat_mul(T::one(), &input, &weights(params, slot).t(), T::zero(), &mut out);
    out += &bias(params, slot);
    out
}

/// Accumulates `dW = dZᵀ·A` and `db = Σ dZ` into `grads` (overwriting).
fn dense_grads<T: Real>(d_pre: ArrayView2<'_, T>, input: ArrayView2<'_, T>, grads: &mut [T], slot: DenseSlot) {
    let mut dw = weights_mut(grads, slot);
    general_mat_mul(T::one(), &d_pre.t(), &input, T::zero(), &mut dw);
    let db = d_pre.sum_axis(Axis(0));
    ArrayViewMut1::from(&mut grads[slot.bias..slot.bias + slot.fan_out]).assign(&db);
}

fn leaky<T: Real>(v: T) -> T {
    if v > T::zero() {
        v
    } else {
        v * T::of(MAPPING_LEAK)
    }
}

fn leaky_slope<T: Real>(v: T) -> T {
    if v > T::zero() {
        T::one()
    } else {
        T::of(MAPPING_LEAK)
    }
}

/// Per-layer FiLM scales and shifts plus what the reverse pass needs.
struct Modulation<T> {
    gamma: Vec<Array1<T>>,
    beta: Vec<Array1<T>>,
    /// Input of every mapping layer (latent first).
    inputs: Vec<Array1<T>>,
    /// Pre-activations of the hidden mapping layers.
    pre: Vec<Array1<T>>,
}

fn modulation<T: Real>(arch: &InrArchitecture, layout: &ParamLayout, params: &[T]) -> Modulation<T> {
    let (lat_off, lat_len) = layout.latent.expect("film layout has a latent");
    let mut h = Array1::from(params[lat_off..lat_off + lat_len].to_vec());
    let mut inputs = Vec::with_capacity(layout.mapping.len());
    let mut pre = Vec::with_capacity(layout.mapping.len() - 1);
    let (head, hidden) = layout.mapping.split_last().expect("mapping head");
    for &slot in hidden {
        let z = weights(params, slot).dot(&h) + bias(params, slot);
        inputs.push(std::mem::replace(&mut h, z.mapv(leaky)));
        pre.push(z);
    }
    let out = weights(params, *head).dot(&h) + bias(params, *head);
    inputs.push(h);

    let total = arch.film_width();
    let mut gamma = Vec::with_capacity(arch.hidden_widths.len());
    let mut beta = Vec::with_capacity(arch.hidden_widths.len());
    let mut offset = 0;
    for &w in &arch.hidden_widths {
        gamma.push(out.slice(ndarray::s![offset..offset + w]).mapv(|g| T::one() + g));
        beta.push(out.slice(ndarray::s![total + offset..total + offset + w]).to_owned());
        offset += w;
    }
    Modulation { gamma, beta, inputs, pre }
}

struct HiddenCache<T> {
    input: Array2<T>,
    /// `Z`, kept for FiLM's γ gradient.
    pre: Option<Array2<T>>,
    /// Local derivative of the activation w.r.t. its argument (cos for sines, 0/1 for ReLU).
    slope: Array2<T>,
}

struct Pass<T> {
    output: Array2<T>,
    hidden: Vec<HiddenCache<T>>,
    film: Option<Modulation<T>>,
}

fn run<T: Real>(arch: &InrArchitecture, layout: &ParamLayout, params: &[T], coords: ArrayView2<'_, T>, keep: bool) -> Pass<T> {
    let film = (arch.kind == InrKind::FilmSiren).then(|| modulation(arch, layout, params));
    let omega = T::of(arch.omega0);
    let (out_slot, hidden_slots) = layout.trunk.split_last().expect("trunk has an output layer");
    let mut hidden = Vec::with_capacity(if keep { hidden_slots.len() } else { 0 });
    let mut act = coords.to_owned();
    for (l, &slot) in hidden_slots.iter().enumerate() {
        let z = dense(act.view(), params, slot);
        // Activations and slopes come from the same code in both modes: a lone
        // `sin` and the `sin` of a fused `sincos` may differ in the last bit.
        let mut next = Array2::zeros(z.dim());
        let mut slope = Array2::zeros(z.dim());
        match arch.kind {
            InrKind::VanillaMlp => {
                Zip::from(&mut next).and(&mut slope).and(&z).for_each(|a, s, &z| {
                    let on = z > T::zero();
                    *a = if on { z } else { T::zero() };
                    *s = if on { T::one() } else { T::zero() };
                });
            }
            InrKind::Siren => {
                Zip::from(&mut next).and(&mut slope).and(&z).for_each(|a, s, &z| {
                    let (sin, cos) = (omega * z).sin_cos();
                    *a = sin;
                    *s = cos;
                });
            }
            InrKind::FilmSiren => {
                let m = film.as_ref().expect("modulation");
                let (g, b) = (&m.gamma[l], &m.beta[l]);
                for ((mut a_row, mut s_row), z_row) in next.outer_iter_mut().zip(slope.outer_iter_mut()).zip(z.outer_iter()) {
                    Zip::from(&mut a_row)
                        .and(&mut s_row)
                        .and(&z_row)
                        .and(g)
                        .and(b)
                        .for_each(|a, s, &z, &g, &b| {
                            let (sin, cos) = (g * omega * z + b).sin_cos();
                            *a = sin;
                            *s = cos;
                        });
                }
            }
        }
        let input = std::mem::replace(&mut act, next);
        if keep {
            hidden.push(HiddenCache {
                input,
                pre: (arch.kind == InrKind::FilmSiren).then_some(z),
                slope,
            });
        }
    }
    let output = dense(act.view(), params, *out_slot);
    if keep {
        // the output layer's input is needed too; stash it as a cache entry without activation data
        hidden.push(HiddenCache {
            input: act,
            pre: None,
            slope: Array2::zeros((0, 0)),
        });
    }
    Pass { output, hidden, film }
}

pub fn forward<T: Real>(arch: &InrArchitecture, layout: &ParamLayout, params: &[T], coords: ArrayView2<'_, T>) -> Array2<T> {
    run(arch, layout, params, coords, false).output
}

/// Returns the MSE loss (accumulated in f64) and writes `∂loss/∂params` into `grads`.
pub fn loss_and_grad<T: Real>(
    arch: &InrArchitecture,
    layout: &ParamLayout,
    params: &[T],
    coords: ArrayView2<'_, T>,
    targets: ArrayView2<'_, T>,
    grads: &mut [T],
) -> f64 {
    let mut pass = run(arch, layout, params, coords, true);
    let count = pass.output.len();
    let mut residual = pass.output;
    residual -= &targets;
    let loss = residual.iter().map(|r| r.as_f64() * r.as_f64()).sum::<f64>() / count as f64;
    let mut d_act = residual * T::of(2.0 / count as f64);

    let omega = T::of(arch.omega0);
    let (out_slot, hidden_slots) = layout.trunk.split_last().expect("trunk");
    let last = pass.hidden.pop().expect("output input cache");
    dense_grads(d_act.view(), last.input.view(), grads, *out_slot);
    d_act = d_act.dot(&weights(params, *out_slot));

    let film_width = arch.film_width();
    let mut d_gamma = vec![T::zero(); film_width];
    let mut d_beta = vec![T::zero(); film_width];
    let mut film_offsets = Vec::with_capacity(arch.hidden_widths.len());
    let mut acc = 0;
    for &w in &arch.hidden_widths {
        film_offsets.push(acc);
        acc += w;
    }

    for (l, &slot) in hidden_slots.iter().enumerate().rev() {
        let cache = &pass.hidden[l];
        // d_act becomes dL/d(argument of the activation)
        d_act *= &cache.slope;
        match arch.kind {
            InrKind::VanillaMlp => {}
            InrKind::Siren => d_act *= omega,
            InrKind::FilmSiren => {
                let m = pass.film.as_ref().expect("modulation");
                let z = cache.pre.as_ref().expect("film keeps Z");
                let off = film_offsets[l];
                for j in 0..slot.fan_out {
                    let ds = d_act.column(j);
                    d_gamma[off + j] = ds.dot(&z.column(j)) * omega;
                    d_beta[off + j] = ds.sum();
                }
                let scale = m.gamma[l].mapv(|g| g * omega);
                d_act *= &scale;
            }
        }
        dense_grads(d_act.view(), cache.input.view(), grads, slot);
        if l > 0 {
            d_act = d_act.dot(&weights(params, slot));
        }
    }

    if let Some(m) = pass.film.take() {
        let mut d_out = Array1::from(d_gamma);
        d_out.append(Axis(0), ArrayView1::from(&d_beta)).expect("1-d append");
        for (k, &slot) in layout.mapping.iter().enumerate().rev() {
            if k < layout.mapping.len() - 1 {
                Zip::from(&mut d_out).and(&m.pre[k]).for_each(|d, &p| *d = *d * leaky_slope(p));
            }
            let input = &m.inputs[k];
            {
                let mut dw = weights_mut(grads, slot);
                Zip::from(dw.rows_mut()).and(&d_out).for_each(|mut row, &d| row.assign(&input.mapv(|v| v * d)));
            }
            ArrayViewMut1::from(&mut grads[slot.bias..slot.bias + slot.fan_out]).assign(&d_out);
            d_out = weights(params, slot).t().dot(&d_out);
        }
        let (lat_off, lat_len) = layout.latent.expect("latent");
        ArrayViewMut1::from(&mut grads[lat_off..lat_off + lat_len]).assign(&d_out);
    }
    loss
}

