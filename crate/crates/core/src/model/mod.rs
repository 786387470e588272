//! Reaction terms, exact wave profiles, and profile checks.

mod catalog;
mod checks;
mod profile;
mod reaction;

pub use catalog::{catalog, kink_front_speed, CatalogParams, CATALOG};
pub use checks::{far_field, residual, uniform_grid, validate_piecewise, zero_count_vprime, FarFieldData, Side};
pub use profile::{PiecewiseProfile, ProfileFormula, ProfileShape, WaveKind, WaveProfile};
pub use reaction::ReactionTerm;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reaction term plus profile as one TOML document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveDocument {
    pub reaction: ReactionTerm,
    pub profile: WaveProfile,
}

impl WaveDocument {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
    }
}
