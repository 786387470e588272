//! One-dimensional root location on real intervals and point refinement in
//! the complex plane.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const BRACKET_ITERS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealRootScan {
    pub roots: Vec<f64>,
    /// Seeds where `f` was non-finite (poles or failed evaluations).
    pub skipped: Vec<f64>,
    pub seeds: Vec<f64>,
    pub values: Vec<Option<Complex64>>,
}

#[derive(Clone, Copy)]
enum Part {
    Re,
    Im,
}

impl Part {
    fn of(self, z: Complex64) -> f64 {
        match self {
            Part::Re => z.re,
            Part::Im => z.im,
        }
    }
}

/// Locates real zeros of a complex-valued function of a real variable.
///
/// `f` is sampled on `n_seed` uniform points; sign changes of the real (and
/// of the imaginary) part are refined by Illinois false position, and a
/// candidate is kept when `|f| < tol` there. Seeds returning `None` or a
/// non-finite value are skipped and recorded.
pub fn find_real_roots<F>(f: F, interval: (f64, f64), n_seed: usize, tol: f64) -> RealRootScan
where
    F: Fn(f64) -> Option<Complex64> + Sync,
{
    let (a, b) = interval;
    let n = n_seed.max(2);
    let seeds: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    let values: Vec<Option<Complex64>> = seeds
        .par_iter()
        .map(|&x| f(x).filter(|v| v.is_finite()))
        .collect();
    let skipped = seeds
        .iter()
        .zip(&values)
        .filter(|(_, v)| v.is_none())
        .map(|(x, _)| *x)
        .collect();

    let mut brackets = Vec::new();
    for i in 0..n - 1 {
        let (Some(fa), Some(fb)) = (values[i], values[i + 1]) else { continue };
        if fa.norm() < tol {
            brackets.push((seeds[i], seeds[i], Part::Re));
            continue;
        }
        for part in [Part::Re, Part::Im] {
            let (pa, pb) = (part.of(fa), part.of(fb));
            if pa != 0.0 && pb != 0.0 && pa.signum() != pb.signum() {
                brackets.push((seeds[i], seeds[i + 1], part));
            }
        }
    }
    if let Some(fl) = values[n - 1] {
        if fl.norm() < tol {
            brackets.push((seeds[n - 1], seeds[n - 1], Part::Re));
        }
    }

    let candidates: Vec<f64> = brackets
        .par_iter()
        .filter_map(|&(lo, hi, part)| {
            let x = if lo == hi { lo } else { refine_bracket(&f, lo, hi, part)? };
            let v = f(x)?;
            (v.is_finite() && v.norm() < tol).then_some(x)
        })
        .collect();

    let mut roots: Vec<f64> = Vec::new();
    let mut sorted = candidates;
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let dedup = 1e-8 * (b - a).abs().max(1.0);
    for x in sorted {
        if roots.last().is_none_or(|&r| (x - r).abs() > dedup) {
            roots.push(x);
        }
    }
    RealRootScan { roots, skipped, seeds, values }
}

fn refine_bracket<F>(f: &F, mut lo: f64, mut hi: f64, part: Part) -> Option<f64>
where
    F: Fn(f64) -> Option<Complex64>,
{
    let mut flo = part.of(f(lo)?);
    let mut fhi = part.of(f(hi)?);
    let mut side = 0i8;
    for _ in 0..BRACKET_ITERS {
        let width = hi - lo;
        if width.abs() <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1e-300) {
            break;
        }
        let mut x = (lo * fhi - hi * flo) / (fhi - flo);
        if !x.is_finite() || x <= lo.min(hi) || x >= lo.max(hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x)?;
        let px = part.of(fx);
        if !px.is_finite() {
            return None;
        }
        if px == 0.0 {
            return Some(x);
        }
        if px.signum() == flo.signum() {
            lo = x;
            flo = px;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = px;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Refines a simple zero of an analytic function by the secant method in the
/// complex plane. Returns `None` if the iteration leaves `radius` of the
/// start or fails to converge.
pub fn refine_complex_zero<F>(f: F, start: Complex64, step: f64, radius: f64, tol: f64) -> Option<Complex64>
where
    F: Fn(Complex64) -> Option<Complex64>,
{
    let mut x0 = start;
    let mut x1 = start + Complex64::new(step, step * 0.5);
    let mut f0 = f(x0)?;
    let mut f1 = f(x1)?;
    for _ in 0..100 {
        if f1.norm() < tol {
            return Some(x1);
        }
        let denom = f1 - f0;
        if denom.norm() == 0.0 {
            return None;
        }
        let x2 = x1 - f1 * (x1 - x0) / denom;
        if !x2.is_finite() || (x2 - start).norm() > radius {
            return None;
        }
        if (x2 - x1).norm() < 1e-14 * x2.norm().max(1.0) {
            return Some(x2);
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1)?;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        let scan = find_real_roots(|x| Some(Complex64::new(x - 5.0, 0.0)), (0.1, 10.0), 50, 1e-10);
        assert_eq!(scan.roots.len(), 1);
        assert!((scan.roots[0] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn pole_is_not_a_root_and_nan_seeds_are_recorded() {
        let f = |x: f64| {
            if (x - 1.0).abs() < 1e-12 {
                None
            } else {
                Some(Complex64::new(1.0 / (x - 2.345), 0.0))
            }
        };
        let scan = find_real_roots(f, (0.0, 4.0), 41, 1e-8);
        assert!(scan.roots.is_empty());
        assert_eq!(scan.skipped.len(), 1);
    }

    #[test]
    fn complex_valued_with_rotating_phase() {
        // (x - 3) e^{i x}: the real part also vanishes away from x = 3
        let f = |x: f64| Some(Complex64::new(x - 3.0, 0.0) * Complex64::new(0.0, x).exp());
        let scan = find_real_roots(f, (0.5, 6.0), 200, 1e-9);
        assert_eq!(scan.roots.len(), 1);
        assert!((scan.roots[0] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn secant_finds_complex_zero() {
        let z0 = Complex64::new(0.3, 1.2);
        let r = refine_complex_zero(|z| Some((z - z0) * (z + 2.0)), Complex64::new(0.2, 1.0), 1e-3, 1.0, 1e-13)
            .unwrap();
        assert!((r - z0).norm() < 1e-10);
    }
}
