//! Compression of phase-only holograms with per-patch implicit neural
//! representations, plus the wave-optics simulation and metrics used to judge
//! the result.

pub mod cli;
pub mod codec;
pub mod error;
pub mod hologram;
pub mod imaging;
pub mod metrics;
pub mod nn;
pub mod optics;
pub mod patch;
pub mod train;

pub use error::{HoloError, Result};
pub use hologram::{OpticalConfig, PhaseHologram};
pub use patch::{merge_patches, split_patches, PatchGrid};
