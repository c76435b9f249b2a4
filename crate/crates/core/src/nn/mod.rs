//! Minimal dense-network engine for coordinate networks: vanilla ReLU MLP,
//! SIREN and FilmSIREN, with a hand-derived reverse pass.

mod arch;
pub mod engine;
mod model;

pub use arch::{
    DenseSlot, InrArchitecture, InrKind, ParamLayout, DEFAULT_OMEGA0, FILM_LATENT_DIM, INPUT_DIM, OUTPUT_DIM,
    PRESET_PATCH_SIZES,
};
pub use engine::Real;
pub use model::{outputs_to_patch, patch_coordinates, patch_targets, InrModel};
