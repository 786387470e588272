use serde::{Deserialize, Serialize};

use super::profile::{PiecewiseProfile, ProfileFormula, WaveProfile};
use super::reaction::ReactionTerm;
use crate::error::{Error, Result};

/// Optional overrides for catalog parameters; unset fields take per-entry defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CatalogParams {
    pub d: Option<f64>,
    pub c: Option<f64>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub beta: Option<f64>,
    /// Half-width of the plateau of the piecewise standing pulse.
    pub half_width: Option<f64>,
}

impl CatalogParams {
    pub fn with_d(mut self, d: f64) -> Self {
        self.d = Some(d);
        self
    }
    pub fn with_c(mut self, c: f64) -> Self {
        self.c = Some(c);
        self
    }
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }
    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }
    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }
    pub fn with_half_width(mut self, l: f64) -> Self {
        self.half_width = Some(l);
        self
    }
}

/// One-line descriptions of the catalog entries, indexed by id.
pub const CATALOG: [(u8, &str); 10] = [
    (1, "stationary pulse, D = 1, g = -u(4 - 6v), v = sech²(z+β)"),
    (2, "stationary front, D = 1, g = 2u(1 - v²), v = tanh(z+β)"),
    (3, "piecewise standing pulse, D = c = 0, g = v(v-γ)(v-1) - u"),
    (4, "piecewise standing front, D = c = 0, g = v(v-γ)(v-1) - u"),
    (5, "travelling pulse, D = 0, g = 8u³ - 6u² + c²(u+v)"),
    (6, "travelling front, D = 0, g = (u+v) - δu(u+γ)(u+1)"),
    (7, "stationary pulse, D > 0, g = -u(4 - 6v), v = sech²(z+β)"),
    (8, "stationary front, D > 0, g = 2u(1 - v²), v = tanh(z+β)"),
    (9, "travelling pulse, D ≠ 0, 1, sech² family"),
    (10, "travelling front, D ≠ 0, 1, tanh² family"),
];

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn require_stationary(id: u8, p: &CatalogParams) -> Result<()> {
    match p.c {
        Some(c) if c != 0.0 => Err(bad(format!("entry {id} is stationary; got c = {c}"))),
        _ => Ok(()),
    }
}

fn unit_interval(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(bad(format!("{name} must lie in (0, 1), got {x}")))
    }
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(bad(format!("{name} must be positive, got {x}")))
    }
}

/// Speed of the D = 0 kink front as a function of `(δ, γ)`.
pub fn kink_front_speed(delta: f64, gamma: f64) -> f64 {
    let s = 1.0 - 2.0 * gamma;
    (delta.sqrt() * s + (delta * s * s + 8.0).sqrt()) / (2.0 * 2f64.sqrt())
}

fn cubic_nullcline(gamma: f64) -> ReactionTerm {
    // v(v-γ)(v-1) - u
    ReactionTerm::new()
        .with_monomial(0, 3, 1.0)
        .with_monomial(0, 2, -(1.0 + gamma))
        .with_monomial(0, 1, gamma)
        .with_monomial(1, 0, -1.0)
        .with_parameter("gamma", gamma)
}

/// Reaction term and exact profile of catalog entry `id`.
pub fn catalog(id: u8, p: &CatalogParams) -> Result<(ReactionTerm, WaveProfile)> {
    match id {
        1 | 2 | 7 | 8 => {
            let default_d = if id == 8 { 1.5 } else { 1.0 };
            let d = positive("D", p.d.unwrap_or(default_d))?;
            if id <= 2 && d != 1.0 {
                return Err(bad(format!("entry {id} is the D = 1 reduction; got D = {d}")));
            }
            if let Some(c) = p.c.filter(|&c| c != 0.0 && (id == 1 || id == 7) && d == 1.0) {
                return Err(bad(format!("no travelling pulse exists for D = 1 (c = {c})")));
            }
            require_stationary(id, p)?;
            let beta = p.beta.unwrap_or(0.0);
            let pulse = id == 1 || id == 7;
            let (rt, formula) = if pulse {
                (ReactionTerm::new().with_monomial(1, 0, -4.0).with_monomial(1, 1, 6.0), ProfileFormula::SechPulse { beta })
            } else {
                (ReactionTerm::new().with_monomial(1, 0, 2.0).with_monomial(1, 2, -2.0), ProfileFormula::TanhFront { beta })
            };
            let rt = rt.with_parameter("c", 0.0).with_parameter("D", d).with_parameter("beta", beta);
            Ok((rt, WaveProfile::closed_form(formula, 0.0, d)))
        }
        3 | 4 => {
            require_stationary(id, p)?;
            if let Some(d) = p.d.filter(|&d| d != 0.0) {
                return Err(bad(format!("piecewise standing waves need D = 0, got D = {d}")));
            }
            let gamma = unit_interval("gamma", p.gamma.unwrap_or(0.3))?;
            let rt = cubic_nullcline(gamma).with_parameter("c", 0.0).with_parameter("D", 0.0);
            let pw = if id == 3 {
                let l = positive("half_width", p.half_width.unwrap_or(1.0))?;
                PiecewiseProfile::new(0.0, vec![-l, l], vec![0.0, 1.0, 0.0])?
            } else {
                PiecewiseProfile::new(0.0, vec![0.0], vec![0.0, 1.0])?
            };
            Ok((rt, WaveProfile::piecewise(pw)))
        }
        5 => {
            if let Some(d) = p.d.filter(|&d| d != 0.0) {
                return Err(bad(format!("entry 5 needs D = 0, got D = {d}")));
            }
            let c = positive("c", p.c.unwrap_or(1.0))?;
            let c2 = c * c;
            let rt = ReactionTerm::new()
                .with_monomial(3, 0, 8.0)
                .with_monomial(2, 0, -6.0)
                .with_monomial(1, 0, c2)
                .with_monomial(0, 1, c2)
                .with_parameter("c", c)
                .with_parameter("D", 0.0);
            Ok((rt, WaveProfile::closed_form(ProfileFormula::AlgebraicPulse, c, 0.0)))
        }
        6 => {
            if let Some(d) = p.d.filter(|&d| d != 0.0) {
                return Err(bad(format!("entry 6 needs D = 0, got D = {d}")));
            }
            let delta = positive("delta", p.delta.unwrap_or(1.0))?;
            let gamma = unit_interval("gamma", p.gamma.unwrap_or(0.75))?;
            let c = kink_front_speed(delta, gamma);
            if let Some(given) = p.c {
                if (given - c).abs() > 1e-12 * c.max(1.0) {
                    return Err(bad(format!("entry 6 fixes c = {c} from (delta, gamma); got c = {given}")));
                }
            }
            // (u+v) - δ(u³ + (1+γ)u² + γu)
            let rt = ReactionTerm::new()
                .with_monomial(1, 0, 1.0 - delta * gamma)
                .with_monomial(0, 1, 1.0)
                .with_monomial(2, 0, -delta * (1.0 + gamma))
                .with_monomial(3, 0, -delta)
                .with_parameter("c", c)
                .with_parameter("D", 0.0)
                .with_parameter("delta", delta)
                .with_parameter("gamma", gamma);
            Ok((rt, WaveProfile::closed_form(ProfileFormula::KinkFront { delta }, c, 0.0)))
        }
        9 | 10 => {
            let d = positive("D", p.d.unwrap_or(if id == 9 { 0.5 } else { 0.3 }))?;
            let c = positive("c", p.c.unwrap_or(if id == 9 { 1.5 } else { 0.3 }))?;
            if d == 1.0 {
                let what = if id == 9 { "no travelling pulse exists for D = 1" } else { "entry 10 needs D ≠ 1" };
                return Err(bad(what));
            }
            let k = 1.0 - d;
            let rt = if id == 9 {
                ReactionTerm::new()
                    .with_monomial(2, 0, 6.0)
                    .with_monomial(0, 2, -6.0 * d * d)
                    .with_monomial(1, 0, (c * c - 4.0) / k)
                    .with_monomial(0, 1, (c * c - 4.0 * d * d) / k)
            } else {
                let sum = ReactionTerm::new().with_monomial(1, 0, 1.0 / k).with_monomial(0, 1, 1.0 / k);
                let quad = ReactionTerm::new()
                    .with_monomial(2, 0, 4.0 * d)
                    .with_monomial(0, 2, 4.0 * d * d * d)
                    .with_monomial(1, 1, 8.0 * d * d)
                    .with_monomial(1, 0, -2.0 * c)
                    .with_monomial(0, 1, -2.0 * c * d * d)
                    .with_monomial(0, 0, c * c);
                sum.product(&quad)
            };
            let rt = rt.with_parameter("c", c).with_parameter("D", d);
            let formula = if id == 9 { ProfileFormula::TravellingPulse } else { ProfileFormula::TravellingFront };
            Ok((rt, WaveProfile::closed_form(formula, c, d)))
        }
        _ => Err(bad(format!("unknown catalog id {id}; valid ids are 1..=10"))),
    }
}
