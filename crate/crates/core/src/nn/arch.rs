//! Architecture descriptors, parameter layout and the per-patch presets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};

pub const INPUT_DIM: usize = 2;
pub const OUTPUT_DIM: usize = 3;
pub const DEFAULT_OMEGA0: f64 = 30.0;
pub const FILM_LATENT_DIM: usize = 16;

/// Patch sizes with a preset.
pub const PRESET_PATCH_SIZES: [usize; 4] = [64, 96, 128, 160];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InrKind {
    VanillaMlp,
    Siren,
    FilmSiren,
}

impl InrKind {
    pub const ALL: [InrKind; 3] = [InrKind::VanillaMlp, InrKind::FilmSiren, InrKind::Siren];

    pub fn name(self) -> &'static str {
        match self {
            InrKind::VanillaMlp => "mlp",
            InrKind::Siren => "siren",
            InrKind::FilmSiren => "film-siren",
        }
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            InrKind::VanillaMlp => 0,
            InrKind::Siren => 1,
            InrKind::FilmSiren => 2,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(InrKind::VanillaMlp),
            1 => Some(InrKind::Siren),
            2 => Some(InrKind::FilmSiren),
            _ => None,
        }
    }
}

impl fmt::Display for InrKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InrKind {
    type Err = HoloError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mlp" | "vanilla-mlp" | "vanilla_mlp" => Ok(InrKind::VanillaMlp),
            "siren" => Ok(InrKind::Siren),
            "film-siren" | "filmsiren" | "film_siren" => Ok(InrKind::FilmSiren),
            other => Err(HoloError::Validation(format!(
                "unknown architecture '{other}' (expected mlp, siren or film-siren)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InrArchitecture {
    pub kind: InrKind,
    pub input_dim: usize,
    pub output_dim: usize,
    pub hidden_widths: Vec<usize>,
    /// Sine frequency scale; ignored by the vanilla MLP.
    pub omega0: f64,
    /// FilmSIREN only.
    pub latent_dim: usize,
    /// FilmSIREN only: hidden widths of the latent → (γ, β) mapping network.
    pub mapping_widths: Vec<usize>,
}

/// Offsets of one dense layer inside the flat parameter vector.
/// Weights are stored row-major as `fan_out × fan_in`, followed by `fan_out` biases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DenseSlot {
    pub weight: usize,
    pub bias: usize,
    pub fan_in: usize,
    pub fan_out: usize,
}

impl DenseSlot {
    fn end(&self) -> usize {
        self.bias + self.fan_out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamLayout {
    /// Hidden layers then the output layer.
    pub trunk: Vec<DenseSlot>,
    pub latent: Option<(usize, usize)>,
    /// Mapping hidden layers then the (γ, β) head.
    pub mapping: Vec<DenseSlot>,
    pub len: usize,
}

fn dense_chain(dims: &[usize], start: usize) -> (Vec<DenseSlot>, usize) {
    let mut offset = start;
    let mut slots = Vec::with_capacity(dims.len().saturating_sub(1));
    for pair in dims.windows(2) {
        let slot = DenseSlot {
            weight: offset,
            bias: offset + pair[0] * pair[1],
            fan_in: pair[0],
            fan_out: pair[1],
        };
        offset = slot.end();
        slots.push(slot);
    }
    (slots, offset)
}

impl InrArchitecture {
    pub fn vanilla_mlp(hidden_widths: Vec<usize>) -> Self {
        Self {
            kind: InrKind::VanillaMlp,
            input_dim: INPUT_DIM,
            output_dim: OUTPUT_DIM,
            hidden_widths,
            omega0: DEFAULT_OMEGA0,
            latent_dim: 0,
            mapping_widths: Vec::new(),
        }
    }

    pub fn siren(hidden_widths: Vec<usize>) -> Self {
        Self {
            kind: InrKind::Siren,
            ..Self::vanilla_mlp(hidden_widths)
        }
    }

    pub fn film_siren(hidden_widths: Vec<usize>, latent_dim: usize, mapping_widths: Vec<usize>) -> Self {
        Self {
            kind: InrKind::FilmSiren,
            latent_dim,
            mapping_widths,
            ..Self::vanilla_mlp(hidden_widths)
        }
    }

    /// Preset for a square patch of side `patch`, sized to a budget of roughly
    /// 40% of the patch's `3·patch²` samples.
    pub fn preset(kind: InrKind, patch: usize) -> Result<Self> {
        let uniform = |w: usize| vec![w; 3];
        let arch = match (kind, patch) {
            (InrKind::VanillaMlp, 64) => Self::vanilla_mlp(uniform(48)),
            (InrKind::VanillaMlp, 96) => Self::vanilla_mlp(uniform(72)),
            (InrKind::VanillaMlp, 128) => Self::vanilla_mlp(uniform(97)),
            (InrKind::VanillaMlp, 160) => Self::vanilla_mlp(uniform(124)),
            (InrKind::Siren, 64) => Self::siren(vec![47, 48, 47]),
            (InrKind::Siren, 96) => Self::siren(uniform(72)),
            (InrKind::Siren, 128) => Self::siren(uniform(97)),
            (InrKind::Siren, 160) => Self::siren(uniform(124)),
            (InrKind::FilmSiren, 64) => Self::film_siren(uniform(43), FILM_LATENT_DIM, vec![2]),
            (InrKind::FilmSiren, 96) => Self::film_siren(uniform(67), FILM_LATENT_DIM, vec![2]),
            (InrKind::FilmSiren, 128) => Self::film_siren(uniform(91), FILM_LATENT_DIM, vec![2]),
            (InrKind::FilmSiren, 160) => Self::film_siren(uniform(117), FILM_LATENT_DIM, vec![2]),
            (_, other) => {
                return Err(HoloError::Validation(format!(
                    "no preset for patch size {other} (supported: {PRESET_PATCH_SIZES:?})"
                )))
            }
        };
        Ok(arch)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HoloError::Structural(msg));
        if self.input_dim == 0 || self.output_dim == 0 {
            return bad("input and output dimensions must be positive".into());
        }
        if self.hidden_widths.is_empty() || self.hidden_widths.contains(&0) {
            return bad(format!("hidden widths must be nonempty and positive: {:?}", self.hidden_widths));
        }
        if self.kind != InrKind::VanillaMlp && !(self.omega0.is_finite() && self.omega0 > 0.0) {
            return bad(format!("omega0 must be positive, got {}", self.omega0));
        }
        if self.kind == InrKind::FilmSiren && (self.latent_dim == 0 || self.mapping_widths.contains(&0)) {
            return bad("film-siren needs a positive latent size and mapping widths".into());
        }
        Ok(())
    }

    /// Total width of the sine layers that receive FiLM modulation.
    pub fn film_width(&self) -> usize {
        self.hidden_widths.iter().sum()
    }

    pub fn layout(&self) -> ParamLayout {
        let mut dims = Vec::with_capacity(self.hidden_widths.len() + 2);
        dims.push(self.input_dim);
        dims.extend_from_slice(&self.hidden_widths);
        dims.push(self.output_dim);
        let (trunk, mut end) = dense_chain(&dims, 0);

        let mut latent = None;
        let mut mapping = Vec::new();
        if self.kind == InrKind::FilmSiren {
            latent = Some((end, self.latent_dim));
            let mut mdims = Vec::with_capacity(self.mapping_widths.len() + 2);
            mdims.push(self.latent_dim);
            mdims.extend_from_slice(&self.mapping_widths);
            mdims.push(2 * self.film_width());
            let (slots, e) = dense_chain(&mdims, end + self.latent_dim);
            mapping = slots;
            end = e;
        }
        ParamLayout {
            trunk,
            latent,
            mapping,
            len: end,
        }
    }

    pub fn parameter_count(&self) -> usize {
        self.layout().len
    }
}
