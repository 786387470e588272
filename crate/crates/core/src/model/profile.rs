use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed-form wave families with analytic first derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ProfileFormula {
    /// `û = -D sech²(z+β)`, `v̂ = sech²(z+β)`.
    SechPulse { beta: f64 },
    /// `û = -D tanh(z+β)`, `v̂ = tanh(z+β)`.
    TanhFront { beta: f64 },
    /// `û = 1/(1+z²)`, `v̂ = (-cz² + 2z - c)/(c(1+z²)²)`.
    AlgebraicPulse,
    /// `û = -1/2 + tanh(√(δ/8) z)/2`, `v̂ = -û'/c - û`.
    KinkFront { delta: f64 },
    /// `û = -sech²z (2D tanh z - c)/(c(1-D))`, `v̂ = sech²z (2 tanh z - c)/(c(1-D))`.
    TravellingPulse,
    /// `û = (D t² - c t - D)/(c(D-1))`, `v̂ = -(t² - c t - 1)/(c(D-1))`, `t = tanh z`.
    TravellingFront,
}

/// Piecewise-constant `v̂` with `û ≡ u₋`; piece `k` covers `[jumps[k-1], jumps[k])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseProfile {
    pub u_minus: f64,
    pub jumps: Vec<f64>,
    pub values: Vec<f64>,
}

impl PiecewiseProfile {
    pub fn new(u_minus: f64, jumps: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != jumps.len() + 1 {
            return Err(Error::InvalidParameter(format!(
                "{} jumps need {} piece values, got {}",
                jumps.len(),
                jumps.len() + 1,
                values.len()
            )));
        }
        if jumps.windows(2).any(|w| w[0] >= w[1]) || jumps.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidParameter("jump positions must be finite and strictly increasing".into()));
        }
        Ok(Self { u_minus, jumps, values })
    }

    /// Index of the piece containing `z`.
    pub fn piece_at(&self, z: f64) -> usize {
        self.jumps.partition_point(|&j| j <= z)
    }

    pub fn v_at(&self, z: f64) -> f64 {
        self.values[self.piece_at(z)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProfileShape {
    ClosedForm { formula: ProfileFormula },
    Piecewise(PiecewiseProfile),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaveKind {
    Pulse,
    Front,
}

/// Travelling-wave solution `(û, v̂)(x - ct)` with its far-field states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveProfile {
    pub shape: ProfileShape,
    pub c: f64,
    pub d: f64,
    /// `(û₋, v̂₋)` at `z → -∞`.
    pub left: (f64, f64),
    /// `(û₊, v̂₊)` at `z → +∞`.
    pub right: (f64, f64),
}

fn sech2(x: f64) -> f64 {
    let s = 1.0 / x.cosh();
    s * s
}

impl WaveProfile {
    pub fn closed_form(formula: ProfileFormula, c: f64, d: f64) -> Self {
        let (left, right) = formula_limits(formula, c, d);
        Self { shape: ProfileShape::ClosedForm { formula }, c, d, left, right }
    }

    pub fn piecewise(p: PiecewiseProfile) -> Self {
        let left = (p.u_minus, p.values[0]);
        let right = (p.u_minus, *p.values.last().unwrap());
        Self { shape: ProfileShape::Piecewise(p), c: 0.0, d: 0.0, left, right }
    }

    pub fn kind(&self) -> WaveKind {
        if self.left == self.right {
            WaveKind::Pulse
        } else {
            WaveKind::Front
        }
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self.shape, ProfileShape::ClosedForm { .. })
    }

    pub fn piecewise_data(&self) -> Option<&PiecewiseProfile> {
        match &self.shape {
            ProfileShape::Piecewise(p) => Some(p),
            _ => None,
        }
    }

    /// `(û, v̂, û', v̂')` at `z`.
    pub fn eval(&self, z: f64) -> [f64; 4] {
        let (c, d) = (self.c, self.d);
        match &self.shape {
            ProfileShape::Piecewise(p) => [p.u_minus, p.v_at(z), 0.0, 0.0],
            ProfileShape::ClosedForm { formula } => match *formula {
                ProfileFormula::SechPulse { beta } => {
                    let x = z + beta;
                    let s2 = sech2(x);
                    let ds2 = -2.0 * s2 * x.tanh();
                    [-d * s2, s2, -d * ds2, ds2]
                }
                ProfileFormula::TanhFront { beta } => {
                    let x = z + beta;
                    let t = x.tanh();
                    let s2 = sech2(x);
                    [-d * t, t, -d * s2, s2]
                }
                ProfileFormula::AlgebraicPulse => {
                    let q = 1.0 + z * z;
                    let n = -c * z * z + 2.0 * z - c;
                    let dn = -2.0 * c * z + 2.0;
                    let u = 1.0 / q;
                    let du = -2.0 * z / (q * q);
                    let v = n / (c * q * q);
                    let dv = (dn * q - 4.0 * z * n) / (c * q * q * q);
                    [u, v, du, dv]
                }
                ProfileFormula::KinkFront { delta } => {
                    let a = (delta / 8.0).sqrt();
                    let t = (a * z).tanh();
                    let s2 = sech2(a * z);
                    let u = -0.5 + 0.5 * t;
                    let du = 0.5 * a * s2;
                    let ddu = -a * a * s2 * t;
                    [u, -du / c - u, du, -ddu / c - du]
                }
                ProfileFormula::TravellingPulse => {
                    let t = z.tanh();
                    let s2 = sech2(z);
                    let k = c * (1.0 - d);
                    // d/dz [sech² (a t - c)] = sech² (a sech² - 2t(a t - c))
                    let shape = |a: f64| (s2 * (a * t - c), s2 * (a * s2 - 2.0 * t * (a * t - c)));
                    let (pu, dpu) = shape(2.0 * d);
                    let (pv, dpv) = shape(2.0);
                    [-pu / k, pv / k, -dpu / k, dpv / k]
                }
                ProfileFormula::TravellingFront => {
                    let t = z.tanh();
                    let s2 = sech2(z);
                    let k = c * (d - 1.0);
                    let u = (d * t * t - c * t - d) / k;
                    let v = -(t * t - c * t - 1.0) / k;
                    let du = (2.0 * d * t - c) * s2 / k;
                    let dv = -(2.0 * t - c) * s2 / k;
                    [u, v, du, dv]
                }
            },
        }
    }

    pub fn u(&self, z: f64) -> f64 {
        self.eval(z)[0]
    }

    pub fn v(&self, z: f64) -> f64 {
        self.eval(z)[1]
    }

    pub fn du(&self, z: f64) -> f64 {
        self.eval(z)[2]
    }

    pub fn dv(&self, z: f64) -> f64 {
        self.eval(z)[3]
    }
}

fn formula_limits(formula: ProfileFormula, _c: f64, d: f64) -> ((f64, f64), (f64, f64)) {
    match formula {
        ProfileFormula::SechPulse { .. } | ProfileFormula::AlgebraicPulse | ProfileFormula::TravellingPulse => {
            ((0.0, 0.0), (0.0, 0.0))
        }
        ProfileFormula::TanhFront { .. } => ((d, -1.0), (-d, 1.0)),
        ProfileFormula::KinkFront { .. } => ((-1.0, 1.0), (0.0, 0.0)),
        ProfileFormula::TravellingFront => {
            let w = 1.0 / (d - 1.0);
            ((w, -w), (-w, w))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_profiles() -> Vec<WaveProfile> {
        vec![
            WaveProfile::closed_form(ProfileFormula::SechPulse { beta: 0.3 }, 0.0, 1.7),
            WaveProfile::closed_form(ProfileFormula::TanhFront { beta: -0.2 }, 0.0, 0.6),
            WaveProfile::closed_form(ProfileFormula::AlgebraicPulse, 1.3, 0.0),
            WaveProfile::closed_form(ProfileFormula::KinkFront { delta: 1.5 }, 0.9, 0.0),
            WaveProfile::closed_form(ProfileFormula::TravellingPulse, 1.5, 0.5),
            WaveProfile::closed_form(ProfileFormula::TravellingFront, 0.3, 0.3),
        ]
    }

    #[test]
    fn derivatives_match_central_differences() {
        let h = 1e-6;
        for p in all_profiles() {
            for &z in &[-2.1, -0.4, 0.0, 0.7, 1.9] {
                let du = (p.u(z + h) - p.u(z - h)) / (2.0 * h);
                let dv = (p.v(z + h) - p.v(z - h)) / (2.0 * h);
                assert!((du - p.du(z)).abs() < 1e-7, "{:?} at {z}", p.shape);
                assert!((dv - p.dv(z)).abs() < 1e-7, "{:?} at {z}", p.shape);
            }
        }
    }

    #[test]
    fn exponential_profiles_reach_their_limits() {
        for p in all_profiles() {
            if matches!(p.shape, ProfileShape::ClosedForm { formula: ProfileFormula::AlgebraicPulse }) {
                continue;
            }
            let [ul, vl, _, _] = p.eval(-40.0);
            let [ur, vr, _, _] = p.eval(40.0);
            assert!((ul - p.left.0).abs() < 1e-8 && (vl - p.left.1).abs() < 1e-8, "{:?}", p.shape);
            assert!((ur - p.right.0).abs() < 1e-8 && (vr - p.right.1).abs() < 1e-8, "{:?}", p.shape);
        }
    }

    #[test]
    fn pieces_are_half_open() {
        let p = PiecewiseProfile::new(0.0, vec![-1.0, 1.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(p.v_at(-1.0 - 1e-12), 0.0);
        assert_eq!(p.v_at(-1.0), 1.0);
        assert_eq!(p.v_at(1.0), 0.0);
        assert!(PiecewiseProfile::new(0.0, vec![1.0, -1.0], vec![0.0, 1.0, 0.0]).is_err());
        assert!(PiecewiseProfile::new(0.0, vec![1.0], vec![0.0]).is_err());
        assert_eq!(WaveProfile::piecewise(p).kind(), WaveKind::Pulse);
    }
}
