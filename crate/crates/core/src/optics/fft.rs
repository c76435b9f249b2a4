//! 2D FFT helpers.
//!
//! Convention: forward kernel `e^{-i2π kn/N}` unnormalized, inverse scaled by
//! `1/(H·W)`. Frequency grids are laid out DC-centered and moved to FFT order
//! with [`ifftshift`].

use ndarray::Array2;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

fn transform_rows(data: &mut Array2<Complex64>, planner: &mut FftPlanner<f64>, inverse: bool) {
    let (_, w) = data.dim();
    let fft = if inverse {
        planner.plan_fft_inverse(w)
    } else {
        planner.plan_fft_forward(w)
    };
    let buf = data.as_slice_mut().expect("standard layout");
    fft.process(buf);
}

fn transform(data: &Array2<Complex64>, inverse: bool) -> Array2<Complex64> {
    let mut planner = FftPlanner::new();
    let mut rows = data.as_standard_layout().into_owned();
    transform_rows(&mut rows, &mut planner, inverse);
    let mut cols = rows.t().as_standard_layout().into_owned();
    transform_rows(&mut cols, &mut planner, inverse);
    cols.t().as_standard_layout().into_owned()
}

pub fn fft2(data: &Array2<Complex64>) -> Array2<Complex64> {
    transform(data, false)
}

pub fn ifft2(data: &Array2<Complex64>) -> Array2<Complex64> {
    let (h, w) = data.dim();
    let scale = 1.0 / (h * w) as f64;
    let mut out = transform(data, true);
    out.mapv_inplace(|v| v * scale);
    out
}

fn roll<T: Clone>(data: &Array2<T>, dy: usize, dx: usize) -> Array2<T> {
    let (h, w) = data.dim();
    Array2::from_shape_fn((h, w), |(y, x)| data[[(y + h - dy) % h, (x + w - dx) % w]].clone())
}

/// Moves the zero-frequency bin from index 0 to the center.
pub fn fftshift<T: Clone>(data: &Array2<T>) -> Array2<T> {
    let (h, w) = data.dim();
    roll(data, h / 2, w / 2)
}

/// Inverse of [`fftshift`].
pub fn ifftshift<T: Clone>(data: &Array2<T>) -> Array2<T> {
    let (h, w) = data.dim();
    roll(data, h.div_ceil(2), w.div_ceil(2))
}

/// DC-centered sample frequencies `(k - n/2) / (n·spacing)` for k in `0..n`.
pub fn centered_frequencies(n: usize, spacing: f64) -> Vec<f64> {
    let half = (n / 2) as f64;
    (0..n).map(|k| (k as f64 - half) / (n as f64 * spacing)).collect()
}
