//! Wave optics: angular spectrum propagation, double-phase encoding,
//! hologram synthesis and multi-plane reconstruction.

mod double_phase;
pub mod fft;
mod propagate;
mod reconstruct;

pub use double_phase::{double_phase_decode, double_phase_encode, double_phase_encode_scaled, DoublePhase};
pub use propagate::{max_propagation_distance, propagate_asm, transfer_function, ComplexField};
pub use reconstruct::{
    reconstruct, reconstruct_with, synthesize_hologram, Aperture, ReconstructionPlane, ReconstructionStack,
};
