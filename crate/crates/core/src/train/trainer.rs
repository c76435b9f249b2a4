//! Per-patch overfitting and the whole-hologram driver.

use std::io::Write;
use std::sync::Mutex;
use std::time::Instant;

use ndarray::{Array2, ArrayView3};
use serde::{Deserialize, Serialize};

use super::adam::{adam_step, AdamConfig, AdamState};
use super::schedule::TrainingSchedule;
use crate::error::{HoloError, Result};
use crate::hologram::PhaseHologram;
use crate::metrics::{mean_std, psnr_from_mse};
use crate::nn::{engine, patch_coordinates, patch_targets, InrArchitecture, InrModel, Real};
use crate::patch::{split_array, PatchGrid};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComputePrecision {
    #[default]
    F32,
    F64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    MaxEpochs,
    EarlyStop,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchReport {
    pub index: usize,
    /// Best MSE seen, on normalized phase.
    pub loss: f64,
    /// `10·log10(1/loss)`.
    #[serde(with = "crate::metrics::db_serde")]
    pub psnr: f64,
    pub epochs: usize,
    pub stop_reason: StopReason,
    pub wall_seconds: f64,
    pub restarts: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub patches: Vec<PatchReport>,
    #[serde(with = "crate::metrics::db_serde")]
    pub mean_psnr: f64,
    #[serde(with = "crate::metrics::db_serde")]
    pub std_psnr: f64,
}

impl TrainReport {
    pub fn from_patches(patches: Vec<PatchReport>) -> Self {
        let psnrs: Vec<f64> = patches.iter().map(|p| p.psnr).collect();
        let (mean_psnr, std_psnr) = mean_std(&psnrs);
        Self {
            patches,
            mean_psnr,
            std_psnr,
        }
    }

    pub fn failures(&self) -> usize {
        self.patches.iter().filter(|p| p.stop_reason == StopReason::Failed).count()
    }
}

/// Line-delimited JSON training log: one record per epoch.
pub struct TrainLog {
    sink: Mutex<Box<dyn Write + Send>>,
}

#[derive(Serialize)]
struct LogRecord {
    patch: usize,
    epoch: usize,
    loss: f64,
    lr: f64,
}

impl TrainLog {
    pub fn new(sink: impl Write + Send + 'static) -> Self {
        Self {
            sink: Mutex::new(Box::new(sink)),
        }
    }

    fn record(&self, patch: usize, epoch: usize, loss: f64, lr: f64) {
        let line = serde_json::to_string(&LogRecord { patch, epoch, loss, lr }).expect("plain record");
        let mut sink = self.sink.lock().unwrap_or_else(|e| e.into_inner());
        // logging is best effort; a full disk must not abort training
        let _ = writeln!(sink, "{line}");
    }

    pub fn flush(&self) {
        let mut sink = self.sink.lock().unwrap_or_else(|e| e.into_inner());
        let _ = sink.flush();
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainOptions {
    pub schedule: TrainingSchedule,
    pub seed: u64,
    pub workers: usize,
    pub precision: ComputePrecision,
    /// Initialize each patch from the previously trained one (within a stripe).
    pub warm_start: bool,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            schedule: TrainingSchedule::default(),
            seed: 0,
            workers: 1,
            precision: ComputePrecision::F32,
            warm_start: true,
        }
    }
}

struct RunOutcome {
    params: Vec<f64>,
    loss: f64,
    epochs: usize,
    stop_reason: StopReason,
}

fn run_schedule<T: Real>(
    model: &InrModel,
    coords: &Array2<f64>,
    targets: &Array2<f64>,
    schedule: &TrainingSchedule,
    patch_index: usize,
    log: Option<&TrainLog>,
) -> Result<RunOutcome> {
    let arch = &model.arch;
    let layout = arch.layout();
    let coords = coords.mapv(T::of);
    let targets = targets.mapv(T::of);
    let mut params: Vec<T> = model.params.iter().map(|&p| T::of(p)).collect();
    let mut grads = vec![T::zero(); params.len()];
    let mut state = AdamState::new(params.len());
    let adam = AdamConfig {
        beta1: schedule.adam_beta1,
        beta2: schedule.adam_beta2,
        eps: schedule.adam_eps,
    };

    let mut best_loss = f64::INFINITY;
    let mut best_params = params.clone();
    // best loss after each epoch, for the early-stop window
    let mut best_history = Vec::with_capacity(schedule.max_epochs);
    let mut stop_reason = StopReason::MaxEpochs;
    let mut epochs = 0;
    for epoch in 0..schedule.max_epochs {
        let loss = engine::loss_and_grad(arch, &layout, &params, coords.view(), targets.view(), &mut grads);
        if !loss.is_finite() {
            return Err(HoloError::Training(format!("loss diverged at epoch {epoch}")));
        }
        let lr = schedule.lr(epoch);
        if let Some(log) = log {
            log.record(patch_index, epoch, loss, lr);
        }
        if loss < best_loss {
            best_loss = loss;
            best_params.copy_from_slice(&params);
        }
        best_history.push(best_loss);
        epochs = epoch + 1;
        if let Some(es) = schedule.early_stop {
            if epoch >= es.window && epochs >= es.min_epochs {
                let before = best_history[epoch - es.window];
                if before <= 0.0 || (before - best_loss) / before < es.min_rel_improvement {
                    stop_reason = StopReason::EarlyStop;
                    break;
                }
            }
        }
        adam_step(&mut params, &grads, &mut state, lr, &adam)?;
    }
    Ok(RunOutcome {
        params: best_params.iter().map(|p| p.as_f64()).collect(),
        loss: best_loss,
        epochs,
        stop_reason,
    })
}

/// Overfits one 3×h×w patch of normalized phases (values in `[0, 1)`).
///
/// Returns the best-loss parameters seen. A diverging run is retried once from
/// a fresh initialization with `seed + 1`; if that also fails the patch is
/// reported as failed and the starting model is returned.
pub fn train_patch(
    patch: ArrayView3<'_, f64>,
    arch: &InrArchitecture,
    options: &TrainOptions,
    init_from: Option<&InrModel>,
    seed: u64,
    patch_index: usize,
    log: Option<&TrainLog>,
) -> Result<(InrModel, PatchReport)> {
    options.schedule.validate()?;
    arch.validate()?;
    let (c, h, w) = patch.dim();
    if c != arch.output_dim {
        return Err(HoloError::Structural(format!("patch has {c} channels, model outputs {}", arch.output_dim)));
    }
    if patch.iter().any(|v| !(0.0..1.0).contains(v)) {
        return Err(HoloError::Validation("patch values must lie in [0, 1)".into()));
    }
    let start = match init_from {
        Some(prev) if prev.arch == *arch => prev.clone(),
        Some(_) => return Err(HoloError::Structural("warm-start model has a different architecture".into())),
        None => InrModel::init(arch.clone(), seed)?,
    };
    let coords = patch_coordinates(h, w);
    let targets = patch_targets(patch);
    let started = Instant::now();

    let attempt = |model: &InrModel| match options.precision {
        ComputePrecision::F32 => run_schedule::<f32>(model, &coords, &targets, &options.schedule, patch_index, log),
        ComputePrecision::F64 => run_schedule::<f64>(model, &coords, &targets, &options.schedule, patch_index, log),
    };

    let mut restarts = 0;
    let outcome = match attempt(&start) {
        Ok(o) => Ok(o),
        Err(_) => {
            restarts = 1;
            let fresh = InrModel::init(arch.clone(), seed.wrapping_add(1))?;
            attempt(&fresh)
        }
    };
    let wall_seconds = started.elapsed().as_secs_f64();
    match outcome {
        Ok(o) => {
            let model = InrModel {
                arch: arch.clone(),
                params: o.params,
                seed,
            };
            let report = PatchReport {
                index: patch_index,
                loss: o.loss,
                psnr: psnr_from_mse(o.loss),
                epochs: o.epochs,
                stop_reason: o.stop_reason,
                wall_seconds,
                restarts,
                error: None,
            };
            Ok((model, report))
        }
        Err(e) => {
            let report = PatchReport {
                index: patch_index,
                loss: f64::NAN,
                psnr: f64::NAN,
                epochs: 0,
                stop_reason: StopReason::Failed,
                wall_seconds,
                restarts,
                error: Some(e.to_string()),
            };
            Ok((start, report))
        }
    }
}

/// Splits rows `0..rows` into `workers` contiguous stripes of near-equal size.
pub fn stripes(rows: usize, workers: usize) -> Vec<std::ops::Range<usize>> {
    let workers = workers.clamp(1, rows.max(1));
    let (base, extra) = (rows / workers, rows % workers);
    let mut out = Vec::with_capacity(workers);
    let mut start = 0;
    for i in 0..workers {
        let len = base + usize::from(i < extra);
        out.push(start..start + len);
        start += len;
    }
    out
}

/// Trains one model per patch. Patches of a stripe of grid rows are visited
/// in raster order, each warm-started from its predecessor; stripes run on
/// separate threads. With one worker the whole grid is a single chain.
pub fn train_hologram(
    holo: &PhaseHologram,
    grid: &PatchGrid,
    arch: &InrArchitecture,
    options: &TrainOptions,
    log: Option<&TrainLog>,
) -> Result<(Vec<InrModel>, TrainReport)> {
    train_hologram_subset(holo, grid, arch, options, log, None)
}

/// Like [`train_hologram`] but optionally only the first `limit` patches in
/// raster order (for quick benchmarks).
pub fn train_hologram_subset(
    holo: &PhaseHologram,
    grid: &PatchGrid,
    arch: &InrArchitecture,
    options: &TrainOptions,
    log: Option<&TrainLog>,
    limit: Option<usize>,
) -> Result<(Vec<InrModel>, TrainReport)> {
    options.schedule.validate()?;
    arch.validate()?;
    let normalized = holo.normalized();
    let patches = split_array(normalized.view(), grid)?;
    let count = limit.map_or(patches.len(), |l| l.min(patches.len()));

    let chain = |range: std::ops::Range<usize>| -> Result<Vec<(InrModel, PatchReport)>> {
        let mut out: Vec<(InrModel, PatchReport)> = Vec::new();
        for index in range {
            let prev = if options.warm_start { out.last().map(|(m, _)| m) } else { None };
            let seed = options.seed.wrapping_add(index as u64);
            out.push(train_patch(patches[index].values.view(), arch, options, prev, seed, index, log)?);
        }
        Ok(out)
    };

    let rows_needed = count.div_ceil(grid.cols);
    let ranges: Vec<std::ops::Range<usize>> = stripes(rows_needed, options.workers)
        .into_iter()
        .map(|r| (r.start * grid.cols).min(count)..(r.end * grid.cols).min(count))
        .filter(|r| !r.is_empty())
        .collect();

    let results: Vec<Result<Vec<(InrModel, PatchReport)>>> = if ranges.len() <= 1 {
        ranges.into_iter().map(chain).collect()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges.into_iter().map(|r| scope.spawn(move || chain(r))).collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap_or_else(|_| Err(HoloError::Training("worker panicked".into()))))
                .collect()
        })
    };

    let mut models = Vec::with_capacity(count);
    let mut reports = Vec::with_capacity(count);
    for stripe in results {
        for (m, r) in stripe? {
            models.push(m);
            reports.push(r);
        }
    }
    if let Some(log) = log {
        log.flush();
    }
    Ok((models, TrainReport::from_patches(reports)))
}
