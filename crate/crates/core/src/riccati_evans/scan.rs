use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evaluate::{evaluate, EvansOptions};
use crate::error::{Error, Result};
use crate::linearization::{ChartInfo, SpectralProblem};
use crate::numerics::{refine_complex_zero, winding_adaptive, winding_number, Contour, MAX_CONTOUR_SAMPLES};

type C = Complex64;

/// Largest accepted `|E|` at a refined root.
const ROOT_TOL: f64 = 1e-8;
/// Largest accepted `|Im λ|` for a root reported by a real scan.
const REAL_ROOT_IM: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvansSample {
    pub lambda: C,
    pub value: Option<C>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub lambda: C,
    /// `|E|` at the refined root.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingRecord {
    /// Roots minus poles inside the contour.
    pub winding: i64,
    /// Distance of the unwrapped phase count from the nearest integer.
    pub residual: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvansReport {
    pub chart: ChartInfo,
    pub z0: f64,
    pub l: f64,
    pub seed: u64,
    pub samples: Vec<EvansSample>,
    pub roots: Vec<RootRecord>,
    pub poles: Vec<C>,
    pub winding: Option<WindingRecord>,
    /// `max |E(conj λ) - conj E(λ)| / |E(λ)|` over probe pairs, for real charts.
    pub conjugate_defect: Option<f64>,
}

impl EvansReport {
    fn new(sp: &SpectralProblem, opts: &EvansOptions, samples: Vec<EvansSample>) -> Self {
        Self {
            chart: sp.chart().info(),
            z0: opts.z0,
            l: opts.l,
            seed: opts.seed,
            samples,
            roots: Vec::new(),
            poles: Vec::new(),
            winding: None,
            conjugate_defect: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// CSV with columns `re_lambda,im_lambda,re_e,im_e,phase`; failed samples leave the value columns empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["re_lambda", "im_lambda", "re_e", "im_e", "phase"])?;
        for s in &self.samples {
            let (re, im, ph) = match s.value {
                Some(v) => (format!("{:e}", v.re), format!("{:e}", v.im), format!("{:e}", v.arg())),
                None => Default::default(),
            };
            w.write_record([format!("{:e}", s.lambda.re), format!("{:e}", s.lambda.im), re, im, ph])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Positive real part among the located roots.
    pub fn has_unstable_root(&self) -> bool {
        self.roots.iter().any(|r| r.lambda.re > 0.0)
    }
}

fn sample(sp: &SpectralProblem, lambda: C, opts: &EvansOptions) -> EvansSample {
    match evaluate(sp, lambda, opts) {
        Ok(v) => EvansSample { lambda, value: Some(v.value), error: None },
        Err(e) => EvansSample { lambda, value: None, error: Some(e.to_string()) },
    }
}

/// `1/E`, with a detected pole mapped to zero.
fn reciprocal(e: Result<C>) -> Option<C> {
    match e {
        Ok(v) if v.norm() > 0.0 && v.is_finite() => Some(1.0 / v),
        Err(Error::Pole { .. }) => Some(C::new(0.0, 0.0)),
        _ => None,
    }
}

fn value(sp: &SpectralProblem, lambda: C, opts: &EvansOptions) -> Option<C> {
    evaluate(sp, lambda, opts).ok().map(|v| v.value)
}

/// Samples `E` on `n` points of a real interval and refines its real roots.
///
/// A root is bracketed where the phase of `E` flips between neighbours; it is
/// kept when the secant refinement converges to `|E| < 1e-8` with a
/// negligible imaginary part. Brackets whose reciprocal refines instead are
/// recorded as poles, as are samples that fail with a pole.
pub fn scan_real(sp: &SpectralProblem, interval: (f64, f64), n: usize, opts: &EvansOptions) -> Result<EvansReport> {
    let (a, b) = interval;
    if n < 2 || !(b > a) {
        return Err(Error::InvalidParameter(format!("real scan needs n >= 2 and a < b, got n = {n}, [{a}, {b}]")));
    }
    let h = (b - a) / (n - 1) as f64;
    let samples: Vec<EvansSample> = (0..n)
        .into_par_iter()
        .map(|i| sample(sp, C::new(a + h * i as f64, 0.0), opts))
        .collect();
    let mut report = EvansReport::new(sp, opts, samples);
    let f = |l: C| value(sp, l, opts);
    let brackets: Vec<(C, C, C)> = report
        .samples
        .windows(2)
        .filter_map(|w| match (w[0].value, w[1].value) {
            (Some(e0), Some(e1)) if (e0 * e1.conj()).re < 0.0 || e1 == C::new(0.0, 0.0) => {
                let t = e0.norm() / (e0.norm() + e1.norm());
                Some((w[0].lambda, w[1].lambda, w[0].lambda + (w[1].lambda - w[0].lambda) * t))
            }
            _ => None,
        })
        .collect();
    let found: Vec<(Option<RootRecord>, Option<C>)> = brackets
        .par_iter()
        .map(|&(lo, hi, start)| {
            let inside = |z: C| z.re >= lo.re - 1e-3 * h && z.re <= hi.re + 1e-3 * h;
            let root = refine_complex_zero(f, start, h * 1e-3, 2.0 * h, ROOT_TOL * 1e-2)
                .and_then(|z| f(z).map(|e| (z, e.norm())))
                .filter(|&(z, r)| r < ROOT_TOL && z.im.abs() < REAL_ROOT_IM && inside(z))
                .or_else(|| bisect_bracket(f, lo, hi));
            if let Some((z, residual)) = root {
                return (Some(RootRecord { lambda: z, residual }), None);
            }
            let inv = |l: C| reciprocal(evaluate(sp, l, opts).map(|v| v.value));
            let pole = refine_complex_zero(inv, start, h * 1e-3, 2.0 * h, 1e-12).filter(|z| z.re >= lo.re - h && z.re <= hi.re + h);
            (None, pole)
        })
        .collect();
    for (root, pole) in found {
        report.roots.extend(root);
        report.poles.extend(pole);
    }
    report.poles.extend(
        report.samples.iter().filter(|s| s.error.as_deref().is_some_and(|e| e.starts_with("pole"))).map(|s| s.lambda),
    );
    report.roots.sort_by(|x, y| x.lambda.re.total_cmp(&y.lambda.re));
    report.roots.dedup_by(|x, y| (x.lambda - y.lambda).norm() < 1e-6);
    report.poles.sort_by(|x, y| x.re.total_cmp(&y.re));
    if sp.has_real_coefficients() {
        report.conjugate_defect = conjugate_defect(sp, &report.samples, opts);
    }
    Ok(report)
}

/// Bisection on a real sign change, for when the secant iteration leaves the bracket.
/// A sign change through a pole is rejected by the size of `E` at the limit point.
fn bisect_bracket(f: impl Fn(C) -> Option<C>, lo: C, hi: C) -> Option<(C, f64)> {
    let e0 = f(lo)?;
    let e1 = f(hi)?;
    let side = |e: C| (e * e0.conj()).re > 0.0;
    let (mut a, mut b) = (lo.re, hi.re);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if side(f(C::new(m, 0.0))?) {
            a = m
        } else {
            b = m
        }
    }
    let z = C::new(0.5 * (a + b), 0.0);
    let residual = f(z)?.norm();
    (residual < 1e-6 * e0.norm().max(e1.norm())).then_some((z, residual))
}

/// Probes `E(x ± iε)` at a few scan points of a real-coefficient problem.
fn conjugate_defect(sp: &SpectralProblem, samples: &[EvansSample], opts: &EvansOptions) -> Option<f64> {
    let eps = 1e-3;
    let stride = (samples.len() / 5).max(1);
    samples
        .iter()
        .step_by(stride)
        .filter_map(|s| {
            let up = value(sp, s.lambda + C::new(0.0, eps), opts)?;
            let down = value(sp, s.lambda - C::new(0.0, eps), opts)?;
            Some((down - up.conj()).norm() / up.norm().max(f64::MIN_POSITIVE))
        })
        .reduce(f64::max)
}

/// Region `K`: right half-annulus with outer radius `20·max(1, |ĝ|, c²)` and inner radius `1e-2`.
pub fn default_contour(sp: &SpectralProblem) -> Result<Contour> {
    let far = sp.far_field();
    let g = [far.gu_plus, far.gv_plus, far.gu_minus, far.gv_minus].iter().map(|x| x.abs()).fold(1.0, f64::max);
    let c = sp.profile().c;
    Contour::right_half_annulus(20.0 * g.max(c * c), 1e-2)
}

/// Winding number of `E` along a closed contour with adaptive refinement.
pub fn winding(sp: &SpectralProblem, contour: &Contour, initial: usize, opts: &EvansOptions) -> Result<EvansReport> {
    let scan = winding_adaptive(|l| evaluate(sp, l, opts).map(|v| v.value), contour, initial, MAX_CONTOUR_SAMPLES)?;
    let samples = scan
        .vertices
        .iter()
        .zip(&scan.values)
        .map(|(v, &e)| EvansSample { lambda: v.point, value: Some(e), error: None })
        .collect();
    let mut report = EvansReport::new(sp, opts, samples);
    report.winding = Some(WindingRecord { winding: scan.winding, residual: scan.residual, samples: scan.values.len() });
    Ok(report)
}

fn grid_extrema<F>(f: &F, re: (f64, f64), im: (f64, f64), nre: usize, nim: usize, poles: bool) -> Vec<C>
where
    F: Fn(C) -> Result<C> + Sync,
{
    let (nre, nim) = (nre.max(3), nim.max(3));
    let hx = (re.1 - re.0) / (nre - 1) as f64;
    let hy = (im.1 - im.0) / (nim - 1) as f64;
    let point = |i: usize, j: usize| C::new(re.0 + hx * i as f64, im.0 + hy * j as f64);
    let mags: Vec<f64> = (0..nre * nim)
        .into_par_iter()
        .map(|idx| {
            let m = match f(point(idx % nre, idx / nre)) {
                Ok(v) if v.is_finite() => v.norm(),
                Err(Error::Pole { .. }) => f64::INFINITY,
                _ => f64::NAN,
            };
            if poles {
                m
            } else {
                -m
            }
        })
        .collect();
    let at = |i: usize, j: usize| mags[j * nre + i];
    // |f| has no interior local maxima away from poles and no interior
    // local minima away from zeros.
    let mut seeds = Vec::new();
    for j in 1..nim - 1 {
        for i in 1..nre - 1 {
            let m = at(i, j);
            let around = [(0, 1), (2, 1), (1, 0), (1, 2), (0, 0), (2, 2), (0, 2), (2, 0)];
            if around.iter().all(|&(di, dj)| at(i + di - 1, j + dj - 1) < m) {
                seeds.push(point(i, j));
            }
        }
    }
    let h = hx.max(hy);
    let target = |l: C| if poles { reciprocal(f(l)) } else { f(l).ok() };
    let expected = if poles { -1 } else { 1 };
    let mut found: Vec<C> = seeds
        .par_iter()
        .filter_map(|&s| {
            let p = refine_complex_zero(target, s, h * 1e-2, 2.0 * h, 1e-13)?;
            let r = 0.25 * h;
            let ring: Option<Vec<C>> = (0..64)
                .map(|k| f(p + C::from_polar(r, std::f64::consts::TAU * k as f64 / 64.0)).ok())
                .collect();
            match winding_number(&ring?) {
                Ok((w, _)) if w == expected => Some(p),
                _ => None,
            }
        })
        .collect();
    found.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    found.dedup_by(|x, y| (*x - *y).norm() < 1e-6);
    found
}

/// Poles of a meromorphic function on a rectangle.
///
/// Interior grid points where `|f|` is a strict local maximum are refined as
/// zeros of `1/f` and kept when a small circle around them winds `-1` times.
pub fn locate_poles_with<F>(f: F, re: (f64, f64), im: (f64, f64), nre: usize, nim: usize) -> Vec<C>
where
    F: Fn(C) -> Result<C> + Sync,
{
    grid_extrema(&f, re, im, nre, nim, true)
}

/// Zeros of a meromorphic function on a rectangle, from strict local minima
/// of `|f|` confirmed by a `+1` winding on a small circle.
pub fn locate_roots_with<F>(f: F, re: (f64, f64), im: (f64, f64), nre: usize, nim: usize) -> Vec<C>
where
    F: Fn(C) -> Result<C> + Sync,
{
    grid_extrema(&f, re, im, nre, nim, false)
}

/// Zeros of the Riccati–Evans function on a rectangle off the essential spectrum.
pub fn locate_roots(sp: &SpectralProblem, re: (f64, f64), im: (f64, f64), nre: usize, nim: usize, opts: &EvansOptions) -> Vec<C> {
    locate_roots_with(|l| evaluate(sp, l, opts).map(|v| v.value), re, im, nre, nim)
}

/// Poles of the Riccati–Evans function on a rectangle off the essential spectrum.
pub fn locate_poles(sp: &SpectralProblem, re: (f64, f64), im: (f64, f64), nre: usize, nim: usize, opts: &EvansOptions) -> Vec<C> {
    locate_poles_with(|l| evaluate(sp, l, opts).map(|v| v.value), re, im, nre, nim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_pole() {
        let f = |l: C| Ok((l + 1.0) / (l - 2.0));
        let poles = locate_poles_with(f, (0.5, 3.7), (-1.0, 1.3), 17, 13);
        assert_eq!(poles.len(), 1);
        assert!((poles[0] - C::new(2.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn analytic_function_has_no_poles() {
        let f = |l: C| Ok(l * l - 3.0);
        assert!(locate_poles_with(f, (-2.0, 2.0), (-2.0, 2.0), 21, 21).is_empty());
        let roots = locate_roots_with(f, (-2.0, 2.0), (-1.0, 1.3), 21, 21);
        assert_eq!(roots.len(), 2);
        assert!((roots[1] - C::new(3f64.sqrt(), 0.0)).norm() < 1e-10);
    }
}
