use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};

/// Stop once the best loss has improved by less than `min_rel_improvement`
/// (relative) over the last `window` epochs.
///
/// The rule is not consulted before `min_epochs`: freshly initialized sine
/// networks sit on a flat plateau for the first one to two thousand epochs
/// before they pick up the checkerboard carrier of a double-phase patch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EarlyStop {
    pub window: usize,
    pub min_rel_improvement: f64,
    #[serde(default)]
    pub min_epochs: usize,
}

impl Default for EarlyStop {
    fn default() -> Self {
        Self {
            window: 500,
            min_rel_improvement: 1e-4,
            min_epochs: 3000,
        }
    }
}

/// Adam with a step learning-rate decay; one epoch is one full-batch step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingSchedule {
    pub base_lr: f64,
    pub step_size: usize,
    pub gamma: f64,
    pub max_epochs: usize,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub early_stop: Option<EarlyStop>,
}

impl Default for TrainingSchedule {
    fn default() -> Self {
        Self {
            base_lr: 1e-4,
            step_size: 5000,
            gamma: 0.5,
            max_epochs: 10_000,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            early_stop: Some(EarlyStop::default()),
        }
    }
}

impl TrainingSchedule {
    /// `base_lr · gamma^⌊epoch / step_size⌋`
    pub fn lr(&self, epoch: usize) -> f64 {
        self.base_lr * self.gamma.powi((epoch / self.step_size) as i32)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.base_lr > 0.0
            && self.base_lr.is_finite()
            && self.step_size > 0
            && self.gamma > 0.0
            && self.max_epochs > 0
            && (0.0..1.0).contains(&self.adam_beta1)
            && (0.0..1.0).contains(&self.adam_beta2)
            && self.adam_eps > 0.0
            && self.early_stop.is_none_or(|e| e.window > 0 && e.min_rel_improvement >= 0.0);
        if ok {
            Ok(())
        } else {
            Err(HoloError::Validation(format!("invalid training schedule: {self:?}")))
        }
    }
}
