use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::flow::plane_flow;
use crate::error::{Error, Result};
use crate::linearization::{spectral_subspace, Chart, SpectralCase, SpectralProblem};
use crate::model::{Side, WaveKind};
use crate::numerics::{eigenvalues, OdeOptions, NEAR_AXIS_MARGIN};

type C = Complex64;

/// Seed of the unitary fallback chart unless overridden.
pub const DEFAULT_RETRY_SEED: u64 = 20_190_601;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvansOptions {
    /// Matching point.
    pub z0: f64,
    /// Truncation `L`; the flows start at `±L`.
    pub l: f64,
    /// Raise `L` to `25 / min|Re ν|` (capped at `l_cap`) when that is larger.
    pub decay_floor: bool,
    pub l_cap: f64,
    /// Double `L` until `E` changes by less than `1e-7` relative (at most three times).
    pub refine_l: bool,
    pub ode: OdeOptions,
    /// Seed of the unitary chart used after a blow-up.
    pub seed: u64,
}

impl Default for EvansOptions {
    fn default() -> Self {
        Self {
            z0: 0.0,
            l: 30.0,
            decay_floor: true,
            l_cap: 120.0,
            refine_l: false,
            ode: OdeOptions { record_all: false, ..OdeOptions::default() },
            seed: DEFAULT_RETRY_SEED,
        }
    }
}

/// One Riccati–Evans value with the bookkeeping needed to reproduce it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvansValue {
    pub lambda: C,
    pub value: C,
    /// `L` actually used.
    pub l: f64,
    /// Whether a flow had to be recomputed in the unitary chart.
    pub rechart: bool,
}

/// Chart used by default for a problem: complex charts for the travelling
/// third-order problem and the fourth-order pulse/front problems.
pub fn default_chart(sp: &SpectralProblem) -> Chart {
    match (sp.case(), sp.profile().kind()) {
        (SpectralCase::D0Moving3, _) => Chart::complex3(),
        (SpectralCase::General4, WaveKind::Pulse) => Chart::pulse4(),
        (SpectralCase::General4, WaveKind::Front) => Chart::front4(),
        _ => Chart::identity(sp.order()),
    }
}

/// Dimensions `(k_u, k_s)` and the smallest `|Re ν|` of the far fields.
pub fn far_field_split(sp: &SpectralProblem, lambda: C) -> Result<(usize, usize, f64)> {
    let mut dims = [0usize; 2];
    let mut min_decay = f64::INFINITY;
    for (slot, side) in [(0, Side::Minus), (1, Side::Plus)] {
        let a = sp.asymptotic(lambda, side);
        if a.iter().any(|z| !z.is_finite()) {
            return Err(Error::Pole { lambda });
        }
        let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for nu in eigenvalues(&a)? {
            if nu.re.abs() < NEAR_AXIS_MARGIN * scale {
                return Err(Error::EssentialSpectrum { lambda, detail: format!("spatial eigenvalue {nu} on the imaginary axis") });
            }
            min_decay = min_decay.min(nu.re.abs());
            let counted = if slot == 0 { nu.re > 0.0 } else { nu.re < 0.0 };
            dims[slot] += counted as usize;
        }
    }
    if dims[0] + dims[1] != sp.order() {
        return Err(Error::EssentialSpectrum {
            lambda,
            detail: format!("unstable dimension {} at -∞ and stable dimension {} at +∞ do not sum to {}", dims[0], dims[1], sp.order()),
        });
    }
    Ok((dims[0], dims[1], min_decay))
}

fn plane_coordinates(basis: &DMatrix<C>, k: usize) -> Option<DMatrix<C>> {
    let n = basis.nrows();
    let x = basis.view((0, 0), (k, k)).into_owned();
    let scale: f64 = (0..k).map(|j| basis.column(j).norm()).product();
    if !(x.determinant().norm() > 1e-12 * scale) {
        return None;
    }
    Some(basis.view((k, 0), (n - k, k)) * x.try_inverse()?)
}

fn stacked(w: &DMatrix<C>, k: usize) -> DMatrix<C> {
    let n = w.nrows() + k;
    let mut m = DMatrix::zeros(n, k);
    m.view_mut((0, 0), (k, k)).fill_with_identity();
    m.view_mut((k, 0), (n - k, k)).copy_from(w);
    m
}

/// Transported far-field subspace at `z0` as an `n×k` basis in the problem's chart.
fn transported(sp: &SpectralProblem, lambda: C, unstable: bool, k: usize, l: f64, opts: &EvansOptions) -> Result<(DMatrix<C>, bool)> {
    let (side, from) = if unstable { (Side::Minus, opts.z0 - l) } else { (Side::Plus, opts.z0 + l) };
    let attempt = |p: &SpectralProblem| -> Result<Option<DMatrix<C>>> {
        let basis = spectral_subspace(&p.asymptotic(lambda, side), unstable)?;
        if basis.ncols() != k {
            return Err(Error::EssentialSpectrum { lambda, detail: "far-field subspace dimension changed".into() });
        }
        let Some(w0) = plane_coordinates(&basis, k) else { return Ok(None) };
        let end = match plane_flow(p, lambda, k).integrate(&w0, from, opts.z0, &opts.ode) {
            Ok(end) => end,
            Err(Error::StepUnderflow { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(end.map(|w| stacked(&w, k)))
    };
    if let Some(m) = attempt(sp)? {
        return Ok((m, false));
    }
    let retry = Chart::random_unitary(sp.order(), opts.seed);
    let sp_r = sp.with_chart(retry.clone())?;
    match attempt(&sp_r)? {
        // back to the original chart: T R⁻¹
        Some(m) => Ok((sp.chart().matrix() * retry.inverse() * m, true)),
        None => Err(Error::Pole { lambda }),
    }
}

fn evaluate_at(sp: &SpectralProblem, lambda: C, ku: usize, ks: usize, l: f64, opts: &EvansOptions) -> Result<EvansValue> {
    let (u, ru) = transported(sp, lambda, true, ku, l, opts)?;
    let (s, rs) = transported(sp, lambda, false, ks, l, opts)?;
    let normalise = |m: DMatrix<C>, k: usize, rechart: bool| -> Result<DMatrix<C>> {
        if !rechart {
            return Ok(m);
        }
        plane_coordinates(&m, k).map(|w| stacked(&w, k)).ok_or(Error::Pole { lambda })
    };
    let u = normalise(u, ku, ru)?;
    let s = normalise(s, ks, rs)?;
    let n = sp.order();
    let mut m = DMatrix::zeros(n, n);
    m.view_mut((0, 0), (n, ku)).copy_from(&u);
    m.view_mut((0, ku), (n, ks)).copy_from(&s);
    let value = m.determinant();
    if !value.is_finite() {
        return Err(Error::Pole { lambda });
    }
    Ok(EvansValue { lambda, value, l, rechart: ru || rs })
}

/// Riccati–Evans function `det[[I, I], [W_u, W_s]]` at `z0` in the problem's chart.
///
/// For a third-order problem with a two-dimensional unstable space this is
/// `β - w₁ - w₂α`; for two-by-two blocks it is `det(W_s - W_u)`.
pub fn evaluate(sp: &SpectralProblem, lambda: C, opts: &EvansOptions) -> Result<EvansValue> {
    let (ku, ks, min_decay) = far_field_split(sp, lambda)?;
    let mut l = opts.l;
    if opts.decay_floor {
        l = l.max((25.0 / min_decay).min(opts.l_cap));
    }
    let mut current = evaluate_at(sp, lambda, ku, ks, l, opts)?;
    if opts.refine_l {
        for _ in 0..3 {
            let next = evaluate_at(sp, lambda, ku, ks, 2.0 * current.l, opts)?;
            let done = (next.value - current.value).norm() < 1e-7 * next.value.norm().max(1.0);
            current = next;
            if done {
                break;
            }
        }
    }
    Ok(current)
}
