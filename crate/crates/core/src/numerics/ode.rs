//! Adaptive Dormand–Prince 5(4) integration of complex-valued systems.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_BLOW_UP_NORM: f64 = 1e8;

// Dormand–Prince tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// error coefficients b - b*
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub blow_up_norm: f64,
    /// Initial step; chosen automatically when `None`.
    pub initial_step: Option<f64>,
    pub max_steps: usize,
    /// Keep every accepted step rather than only the endpoints.
    pub record_all: bool,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            blow_up_norm: DEFAULT_BLOW_UP_NORM,
            initial_step: None,
            max_steps: 200_000,
            record_all: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Termination {
    ReachedEndpoint,
    BlowUp { z: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub z: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
    pub termination: Termination,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn last_state(&self) -> &[Complex64] {
        self.states.last().expect("trajectory has at least one sample")
    }

    pub fn last_z(&self) -> f64 {
        *self.z.last().expect("trajectory has at least one sample")
    }

    pub fn blew_up(&self) -> bool {
        matches!(self.termination, Termination::BlowUp { .. })
    }
}

fn norm_inf(y: &[Complex64]) -> f64 {
    y.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Integrates `y' = f(z, y)` from `z_from` to `z_to` (either direction).
///
/// Stops early with [`Termination::BlowUp`] once `‖y‖∞` exceeds the blow-up
/// norm. Fails when the step size underflows.
pub fn integrate<F>(
    mut f: F,
    state0: &[Complex64],
    z_from: f64,
    z_to: f64,
    opts: &OdeOptions,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    if z_from == z_to || !z_from.is_finite() || !z_to.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "integration interval [{z_from}, {z_to}] is empty or non-finite"
        )));
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(Error::InvalidParameter("rtol and atol must be positive".into()));
    }
    let n = state0.len();
    let dir = (z_to - z_from).signum();
    let span = (z_to - z_from).abs();
    let zero = Complex64::new(0.0, 0.0);

    let mut z = z_from;
    let mut y = state0.to_vec();
    let mut traj = Trajectory {
        z: vec![z],
        states: vec![y.clone()],
        termination: Termination::ReachedEndpoint,
        accepted_steps: 0,
        rejected_steps: 0,
    };
    if norm_inf(&y) > opts.blow_up_norm || y.iter().any(|c| !c.is_finite()) {
        traj.termination = Termination::BlowUp { z };
        return Ok(traj);
    }

    let mut k1 = vec![zero; n];
    let mut k2 = vec![zero; n];
    let mut k3 = vec![zero; n];
    let mut k4 = vec![zero; n];
    let mut k5 = vec![zero; n];
    let mut k6 = vec![zero; n];
    let mut k7 = vec![zero; n];
    let mut tmp = vec![zero; n];
    let mut y_new = vec![zero; n];

    f(z, &y, &mut k1);
    let mut h = match opts.initial_step {
        Some(h0) => h0.abs().min(span),
        None => {
            let d0 = norm_inf(&y).max(1e-5);
            let d1 = norm_inf(&k1).max(1e-5);
            (0.01 * d0 / d1).min(span).max(1e-6_f64.min(span))
        }
    };
    let h_min = 1e-13 * span.max(z_from.abs()).max(z_to.abs()).max(1.0);

    while traj.accepted_steps + traj.rejected_steps < opts.max_steps {
        let remaining = (z_to - z) * dir;
        if remaining <= 0.0 {
            break;
        }
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let hs = h * dir;

        for i in 0..n {
            tmp[i] = y[i] + k1[i] * (hs * A21);
        }
        f(z + C2 * hs, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A31 + k2[i] * A32) * hs;
        }
        f(z + C3 * hs, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A41 + k2[i] * A42 + k3[i] * A43) * hs;
        }
        f(z + C4 * hs, &tmp, &mut k4);
        for i in 0..n {
            tmp[i] = y[i] + (k1[i] * A51 + k2[i] * A52 + k3[i] * A53 + k4[i] * A54) * hs;
        }
        f(z + C5 * hs, &tmp, &mut k5);
        for i in 0..n {
            tmp[i] = y[i]
                + (k1[i] * A61 + k2[i] * A62 + k3[i] * A63 + k4[i] * A64 + k5[i] * A65) * hs;
        }
        f(z + hs, &tmp, &mut k6);
        for i in 0..n {
            y_new[i] = y[i]
                + (k1[i] * B1 + k3[i] * B3 + k4[i] * B4 + k5[i] * B5 + k6[i] * B6) * hs;
        }
        let z_new = if last { z_to } else { z + hs };
        f(z_new, &y_new, &mut k7);

        let mut err_sq = 0.0;
        let mut finite = true;
        for i in 0..n {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * hs;
            let sc = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
            let r = e.norm() / sc;
            if !r.is_finite() {
                finite = false;
            }
            err_sq += r * r;
        }
        let err = if finite { (err_sq / n as f64).sqrt() } else { f64::INFINITY };

        if err <= 1.0 {
            z = z_new;
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            traj.accepted_steps += 1;
            let blown = norm_inf(&y) > opts.blow_up_norm;
            if opts.record_all || last || blown {
                traj.z.push(z);
                traj.states.push(y.clone());
            }
            if blown {
                traj.termination = Termination::BlowUp { z };
                return Ok(traj);
            }
            if last {
                return Ok(traj);
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            traj.rejected_steps += 1;
            let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h *= fac;
            if h < h_min {
                // a singularity this close to z is a blow-up, not stiffness
                if norm_inf(&y) > opts.blow_up_norm.sqrt() || !finite {
                    traj.z.push(z);
                    traj.states.push(y.clone());
                    traj.termination = Termination::BlowUp { z };
                    return Ok(traj);
                }
                return Err(Error::StepUnderflow { z });
            }
        }
    }
    if (z_to - z) * dir > 0.0 {
        return Err(Error::StepUnderflow { z });
    }
    Ok(traj)
}
