use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{catalog, CatalogParams, ReactionTerm, WaveProfile};

type C = Complex64;

/// Scalar reduction `u = -v` of the equal-diffusivity problem.
///
/// `G(v) = g(-v, v)`; profiles satisfy `v'' + cv' - G(v) = 0` and the
/// linearisation is `q'' + cq' - G'(v̂)q = λq`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarReduction {
    /// Coefficients of `G` in ascending powers of `v`.
    g: Vec<f64>,
    pub c: f64,
}

impl ScalarReduction {
    pub fn new(rt: &ReactionTerm, c: f64) -> Self {
        let degree = rt.monomials().keys().map(|&(i, j)| (i + j) as usize).max().unwrap_or(0);
        let mut g = vec![0.0; degree + 1];
        for (&(i, j), &coeff) in rt.monomials() {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            g[(i + j) as usize] += sign * coeff;
        }
        Self { g, c }
    }

    pub fn from_profile(rt: &ReactionTerm, wp: &WaveProfile) -> Result<Self> {
        if wp.d != 1.0 {
            return Err(Error::InvalidParameter(format!("the scalar reduction needs D = 1, got D = {}", wp.d)));
        }
        Ok(Self::new(rt, wp.c))
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.g
    }

    pub fn g(&self, v: f64) -> f64 {
        self.g.iter().rev().fold(0.0, |acc, &a| acc * v + a)
    }

    pub fn g_prime(&self, v: f64) -> f64 {
        self.g.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, &a)| acc * v + k as f64 * a)
    }

    /// `H(v) = ∫₀ᵛ G`.
    pub fn potential(&self, v: f64) -> f64 {
        self.g.iter().enumerate().rev().fold(0.0, |acc, (k, &a)| acc * v + a / (k + 1) as f64) * v
    }

    /// `½v̂'² - H(v̂)`, constant along stationary profiles.
    pub fn energy(&self, wp: &WaveProfile, z: f64) -> f64 {
        0.5 * wp.dv(z).powi(2) - self.potential(wp.v(z))
    }

    /// `q'' + cq' - G'(v̂)q` at `q = v̂'`, with `q''` from the profile equation.
    pub fn translation_residual(&self, wp: &WaveProfile, z: f64) -> f64 {
        let (v, dv) = (wp.v(z), wp.dv(z));
        // v̂'' = G(v̂) - cv̂', so v̂''' = G'(v̂)v̂' - cv̂''.
        let ddv = self.g(v) - self.c * dv;
        let dddv = self.g_prime(v) * dv - self.c * ddv;
        dddv + self.c * ddv - self.g_prime(v) * dv
    }
}

fn on_cut(lambda: C) -> bool {
    lambda.im == 0.0 && lambda.re <= 0.0
}

/// `4(λ-5)λ^{3/2}(λ+3)√(λ+4)` on the principal branch.
pub fn evans_example1(lambda: C) -> Result<C> {
    if on_cut(lambda) {
        return Err(Error::BranchCut { lambda });
    }
    let s = lambda.sqrt();
    Ok(4.0 * (lambda - 5.0) * lambda * s * (lambda + 3.0) * (lambda + 4.0).sqrt())
}

/// A real eigenvalue of the equal-diffusivity problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointEigenvalue {
    pub lambda: f64,
    /// Inside the continuous spectrum `(-∞, 0]`; never counted as unstable.
    pub embedded: bool,
}

/// Depth `A` and offset `m` with `-G'(v̂(z)) = -m + A sech²(z + β)`.
pub fn poschl_teller_data(rt: &ReactionTerm, wp: &WaveProfile) -> Result<(f64, f64)> {
    let red = ScalarReduction::from_profile(rt, wp)?;
    let beta = rt.parameter("beta").unwrap_or(0.0);
    let pot = |z: f64| -red.g_prime(wp.v(z));
    let m = -pot(60.0 - beta);
    let a = pot(-beta) + m;
    for i in 0..=200 {
        let z = -10.0 + 0.1 * i as f64;
        let fit = -m + a / (z.cosh() * z.cosh());
        if (pot(z - beta) - fit).abs() > 1e-9 * (1.0 + a.abs()) {
            return Err(Error::InvalidParameter("linearised potential is not of sech² form".into()));
        }
    }
    Ok((a, m))
}

/// Bound states `(ℓ-j)² - m`, `0 ≤ j < ℓ`, of `q'' - mq + A sech² q`.
pub fn poschl_teller_eigenvalues(a: f64, m: f64) -> Vec<f64> {
    let ell = (-1.0 + (1.0 + 4.0 * a).sqrt()) / 2.0;
    let mut out = Vec::new();
    let mut j = 0.0;
    while ell - j > 1e-12 {
        out.push((ell - j).powi(2) - m);
        j += 1.0;
    }
    out
}

/// Real point spectrum of catalog entries 1 and 2, descending.
pub fn d1_point_spectrum(example_id: u8) -> Result<Vec<PointEigenvalue>> {
    if !matches!(example_id, 1 | 2) {
        return Err(Error::InvalidParameter(format!("closed-form point spectrum exists for entries 1 and 2, got {example_id}")));
    }
    let (rt, wp) = catalog(example_id, &CatalogParams::default())?;
    let (a, m) = poschl_teller_data(&rt, &wp)?;
    Ok(poschl_teller_eigenvalues(a, m)
        .into_iter()
        .map(|lambda| PointEigenvalue { lambda, embedded: lambda <= 0.0 })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_values() {
        assert_eq!(evans_example1(C::new(5.0, 0.0)).unwrap(), C::new(0.0, 0.0));
        let v = evans_example1(C::new(1.0, 0.0)).unwrap();
        assert!((v.re + 64.0 * 5f64.sqrt()).abs() < 1e-12 && v.im == 0.0);
        let v = evans_example1(C::new(4.0, 0.0)).unwrap();
        assert!((v.re + 224.0 * 8f64.sqrt()).abs() < 1e-10);
        assert!(matches!(evans_example1(C::new(-1.0, 0.0)), Err(Error::BranchCut { .. })));
        assert!(evans_example1(C::new(-1.0, 1e-3)).is_ok());
    }

    #[test]
    fn reduction_derivative_matches_differences() {
        for id in [1, 2] {
            let (rt, wp) = catalog(id, &CatalogParams::default()).unwrap();
            let r = ScalarReduction::from_profile(&rt, &wp).unwrap();
            for v in [-1.3, -0.2, 0.0, 0.4, 1.1] {
                let h = 1e-5;
                let fd = (r.g(v + h) - r.g(v - h)) / (2.0 * h);
                assert!((fd - r.g_prime(v)).abs() < 1e-6);
                let fd = (r.potential(v + h) - r.potential(v - h)) / (2.0 * h);
                assert!((fd - r.g(v)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn point_spectra() {
        let one: Vec<_> = d1_point_spectrum(1).unwrap();
        let vals: Vec<f64> = one.iter().map(|p| p.lambda).collect();
        assert!(vals.iter().zip([5.0, 0.0, -3.0]).all(|(a, b)| (a - b).abs() < 1e-12), "{vals:?}");
        assert!(!one[0].embedded && one[1].embedded && one[2].embedded);
        let two = d1_point_spectrum(2).unwrap();
        let vals: Vec<f64> = two.iter().map(|p| p.lambda).collect();
        assert!(vals.iter().zip([0.0, -3.0]).all(|(a, b)| (a - b).abs() < 1e-12), "{vals:?}");
        assert!(two.iter().all(|p| p.embedded));
        assert!(d1_point_spectrum(3).is_err());
    }
}
