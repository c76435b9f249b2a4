//! Per-patch overfitting: Adam with step decay, early stopping and
//! warm-started patch chains.

mod adam;
mod schedule;
mod trainer;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use schedule::{EarlyStop, TrainingSchedule};
pub use trainer::{
    stripes, train_hologram, train_hologram_subset, train_patch, ComputePrecision, PatchReport, StopReason, TrainLog,
    TrainOptions, TrainReport,
};
