pub mod error;
pub mod essential_spectrum;
pub mod evans_closed_form;
pub mod linearization;
pub mod model;
pub mod numerics;
pub mod riccati_evans;

pub use error::{Error, Result};
