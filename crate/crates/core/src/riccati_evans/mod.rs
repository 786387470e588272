//! Riccati–Evans functions: subspace flows in chart coordinates, evaluation
//! at a matching point, real-axis scans, windings and pole location.

mod evaluate;
mod flow;
mod scan;

pub use evaluate::{default_chart, evaluate, far_field_split, EvansOptions, EvansValue, DEFAULT_RETRY_SEED};
pub use flow::{line_flow, plane_flow, riccati_field, RiccatiFlow};
pub use scan::{
    default_contour, locate_poles, locate_poles_with, locate_roots, locate_roots_with, scan_real, winding, EvansReport, EvansSample, RootRecord,
    WindingRecord,
};
