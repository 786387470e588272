//! Complex polynomials and their roots.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NEWTON_ITERS: usize = 8;
const POLISH_TOL: f64 = 1e-12;

/// Polynomial with complex coefficients stored in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coefficients: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial, trimming zero leading coefficients.
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        let mut coefficients = coefficients;
        while coefficients.len() > 1 && coefficients.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(Complex64::new(0.0, 0.0));
        }
        Self { coefficients }
    }

    pub fn from_real(coefficients: &[f64]) -> Self {
        Self::new(coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial with the given roots, times `leading`.
    pub fn from_roots(roots: &[Complex64], leading: Complex64) -> Self {
        let mut coeffs = vec![leading];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coefficients.last().expect("nonempty")
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.degree() == 0 {
            return Polynomial::new(vec![Complex64::new(0.0, 0.0)]);
        }
        Polynomial::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    /// Substitutes `x -> a x`.
    pub fn scale_argument(&self, a: Complex64) -> Polynomial {
        let mut pow = Complex64::new(1.0, 0.0);
        let mut out = Vec::with_capacity(self.coefficients.len());
        for &c in &self.coefficients {
            out.push(c * pow);
            pow *= a;
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        Polynomial::new(self.coefficients.iter().map(|&c| c * s).collect())
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Scaled residual `|p(r)| / (max|a_i| * max(1,|r|)^deg)`.
    pub fn scaled_residual(&self, r: Complex64) -> f64 {
        let scale = self.max_coefficient() * r.norm().max(1.0).powi(self.degree() as i32);
        if scale == 0.0 {
            return 0.0;
        }
        self.eval(r).norm() / scale
    }
}

/// All roots of `p`, repeated according to multiplicity.
///
/// Eigenvalues of the companion matrix, then a few guarded Newton steps.
pub fn polynomial_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let lead = p.leading();
    let monic: Vec<Complex64> = p.coefficients().iter().map(|&c| c / lead).collect();
    if n == 1 {
        return Ok(vec![-monic[0]]);
    }
    let mut companion = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        companion[(i, n - 1)] = -monic[i];
    }
    let eig = super::eigen::eigenvalues(&companion)?;
    let dp = p.derivative();
    let roots = eig
        .iter()
        .map(|&r0| polish(p, &dp, r0))
        .collect();
    Ok(roots)
}

fn polish(p: &Polynomial, dp: &Polynomial, mut r: Complex64) -> Complex64 {
    let mut res = p.scaled_residual(r);
    for _ in 0..NEWTON_ITERS {
        if res < POLISH_TOL * 1e-3 {
            break;
        }
        let d = dp.eval(r);
        if d.norm() == 0.0 {
            break;
        }
        let cand = r - p.eval(r) / d;
        let cand_res = p.scaled_residual(cand);
        // multiple roots: Newton may wander, keep only improvements
        if !(cand_res < res) {
            break;
        }
        r = cand;
        res = cand_res;
    }
    r
}

/// Number of roots with positive real part.
///
/// Fails with [`Error::NearBorder`] when a root is within `margin` of the
/// imaginary axis.
pub fn count_roots_positive_real(p: &Polynomial, margin: f64) -> Result<usize> {
    let roots = polynomial_roots(p)?;
    count_positive(&roots, margin)
}

pub(crate) fn count_positive(roots: &[Complex64], margin: f64) -> Result<usize> {
    let mut count = 0;
    for &nu in roots {
        if nu.re.abs() < margin {
            return Err(Error::NearBorder { nu, margin });
        }
        if nu.re > 0.0 {
            count += 1;
        }
    }
    Ok(count)
}
