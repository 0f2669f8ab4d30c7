//! Shared fixtures for the pipeline benchmarks.

use bresse_core::model::{Parameters, SystemKind};
use bresse_core::sampling::StateSampler;
use bresse_core::spectral::ModeState;

pub fn fixture_state(kind: SystemKind, xi: f64) -> ModeState {
    StateSampler::new(7).random_state(kind, xi)
}

pub fn unit_params() -> Parameters {
    Parameters::default()
}
