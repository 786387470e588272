//! Closed-form Evans functions: equal-diffusivity scalar reductions and
//! piecewise-constant standing waves without `v` diffusion.

mod pencil;
mod scalar;

pub use pencil::{
    evans_example3, evans_example4, example4_report, example4_roots, in_intervals, pencil_essential_intervals,
    pencil_essential_spectrum, pencil_reduce, piecewise_evans, realness_certificate, ClosedFormReport, PencilProblem,
    RootEntry,
};
pub use scalar::{
    d1_point_spectrum, evans_example1, poschl_teller_data, poschl_teller_eigenvalues, PointEigenvalue, ScalarReduction,
};
