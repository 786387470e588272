use serde::{Deserialize, Serialize};

use super::profile::WaveProfile;
use super::reaction::ReactionTerm;
use crate::error::{Error, Result};

/// Far-field end of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Minus, Side::Plus];

    pub fn sign(self) -> f64 {
        match self {
            Side::Minus => -1.0,
            Side::Plus => 1.0,
        }
    }
}

/// Partial derivatives of `g` at the two far-field states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarFieldData {
    pub gu_plus: f64,
    pub gv_plus: f64,
    pub gu_minus: f64,
    pub gv_minus: f64,
}

impl FarFieldData {
    /// Same values at both ends.
    pub fn uniform(gu: f64, gv: f64) -> Self {
        Self { gu_plus: gu, gv_plus: gv, gu_minus: gu, gv_minus: gv }
    }

    /// `(ĝ_u, ĝ_v)` on one side.
    pub fn side(&self, side: Side) -> (f64, f64) {
        match side {
            Side::Minus => (self.gu_minus, self.gv_minus),
            Side::Plus => (self.gu_plus, self.gv_plus),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.gu_plus == self.gu_minus && self.gv_plus == self.gv_minus
    }
}

/// Evaluates `g_u`, `g_v` at the stored limit states.
pub fn far_field(rt: &ReactionTerm, wp: &WaveProfile) -> FarFieldData {
    let (ul, vl) = wp.left;
    let (ur, vr) = wp.right;
    FarFieldData { gu_plus: rt.g_u(ur, vr), gv_plus: rt.g_v(ur, vr), gu_minus: rt.g_u(ul, vl), gv_minus: rt.g_v(ul, vl) }
}

/// Sup over `grid` of the travelling-wave ODE residuals
/// `|û'' + cû' + g|` and `|Dv̂'' + cv̂' - g|`.
pub fn residual(rt: &ReactionTerm, wp: &WaveProfile, grid: &[f64]) -> Result<f64> {
    if !wp.is_closed_form() {
        return Err(Error::WrongProfileKind { expected: "closed-form" });
    }
    const H: f64 = 1e-5;
    let (c, d) = (wp.c, wp.d);
    let mut worst: f64 = 0.0;
    for &z in grid {
        if !z.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite grid point {z}")));
        }
        let [u, v, du, dv] = wp.eval(z);
        let ddu = (wp.du(z + H) - wp.du(z - H)) / (2.0 * H);
        let ddv = (wp.dv(z + H) - wp.dv(z - H)) / (2.0 * H);
        let g = rt.g(u, v);
        worst = worst.max((ddu + c * du + g).abs()).max((d * ddv + c * dv - g).abs());
    }
    Ok(worst)
}

/// True iff every piece value is a zero of `g(u₋, ·)` and `û ≡ u₋`.
pub fn validate_piecewise(rt: &ReactionTerm, wp: &WaveProfile) -> Result<bool> {
    let p = wp.piecewise_data().ok_or(Error::WrongProfileKind { expected: "piecewise" })?;
    let u_ok = wp.left.0 == p.u_minus && wp.right.0 == p.u_minus;
    Ok(u_ok && p.values.iter().all(|&v| rt.g(p.u_minus, v).abs() < 1e-12))
}

/// Number of sign changes of `v̂'` along `grid`; exact zeros are skipped.
pub fn zero_count_vprime(wp: &WaveProfile, grid: &[f64]) -> Result<usize> {
    if !wp.is_closed_form() {
        return Err(Error::WrongProfileKind { expected: "closed-form" });
    }
    let mut count = 0;
    let mut last = 0.0f64;
    for &z in grid {
        let s = wp.dv(z);
        if s == 0.0 || !s.is_finite() {
            continue;
        }
        if last != 0.0 && s.signum() != last.signum() {
            count += 1;
        }
        last = s;
    }
    Ok(count)
}

/// Uniform grid with `n` points on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}
