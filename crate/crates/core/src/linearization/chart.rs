use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type C = Complex64;

const I: C = C::new(0.0, 1.0);
const ONE: C = C::new(1.0, 0.0);
const ZERO: C = C::new(0.0, 0.0);

/// Invertible change of coordinates `y ↦ T y`, acting on matrices as `T A T⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    name: String,
    t: DMatrix<C>,
    t_inv: DMatrix<C>,
    det: C,
}

/// Serializable record of the chart used for a computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartInfo {
    pub name: String,
    pub order: usize,
    pub det: C,
}

impl Chart {
    pub fn new(name: impl Into<String>, t: DMatrix<C>) -> Result<Self> {
        if t.nrows() != t.ncols() {
            return Err(Error::Dimension { expected: t.nrows(), got: t.ncols() });
        }
        let det = t.determinant();
        let scale = t.iter().map(|z| z.norm()).fold(0.0, f64::max).powi(t.nrows() as i32);
        if !(det.norm() > 1e-12 * scale) {
            return Err(Error::Singular(format!("chart determinant {det}")));
        }
        let t_inv = t.clone().try_inverse().ok_or_else(|| Error::Singular("chart is not invertible".into()))?;
        Ok(Self { name: name.into(), t, t_inv, det })
    }

    pub fn identity(n: usize) -> Self {
        let t = DMatrix::identity(n, n);
        Self { name: "identity".into(), t_inv: t.clone(), t, det: ONE }
    }

    /// Complex 3×3 chart with unit determinant for the D = 0 travelling problem.
    pub fn complex3() -> Self {
        let t = DMatrix::from_row_slice(3, 3, &[I, ZERO, ONE, ZERO, -I, ZERO, ZERO, ZERO, ONE]);
        Self::new("complex3", t).expect("fixed chart is invertible")
    }

    /// Complex 4×4 chart used for stationary pulses.
    pub fn pulse4() -> Self {
        #[rustfmt::skip]
        let t = DMatrix::from_row_slice(4, 4, &[
            I, ZERO, ONE, ZERO,
            ZERO, ONE, ZERO, ONE,
            ZERO, ZERO, -I, ZERO,
            ZERO, ZERO, ZERO, ONE,
        ]);
        Self::new("pulse4", t).expect("fixed chart is invertible")
    }

    /// Complex 4×4 chart used for stationary fronts.
    pub fn front4() -> Self {
        #[rustfmt::skip]
        let t = DMatrix::from_row_slice(4, 4, &[
            I, ZERO, ONE, ZERO,
            ZERO, -I, ZERO, ONE,
            ZERO, ZERO, ONE, ZERO,
            ZERO, ZERO, ZERO, ONE,
        ]);
        Self::new("front4", t).expect("fixed chart is invertible")
    }

    /// Unitary chart drawn from a seeded generator (QR of a complex Gaussian-like matrix).
    pub fn random_unitary(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = DMatrix::from_fn(n, n, |_, _| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let q = m.qr().q();
        Self::new(format!("unitary-{seed}"), q).expect("unitary matrix is invertible")
    }

    /// Named chart lookup: identity, complex3, pulse4, front4, unitary-<seed>.
    pub fn by_name(name: &str, n: usize) -> Result<Self> {
        let chart = match name {
            "identity" => Self::identity(n),
            "complex3" => Self::complex3(),
            "pulse4" => Self::pulse4(),
            "front4" => Self::front4(),
            other => match other.strip_prefix("unitary-").and_then(|s| s.parse::<u64>().ok()) {
                Some(seed) => Self::random_unitary(n, seed),
                None => return Err(Error::InvalidParameter(format!("unknown chart '{other}'"))),
            },
        };
        if chart.order() != n {
            return Err(Error::Dimension { expected: n, got: chart.order() });
        }
        Ok(chart)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.t.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C> {
        &self.t
    }

    pub fn inverse(&self) -> &DMatrix<C> {
        &self.t_inv
    }

    pub fn det(&self) -> C {
        self.det
    }

    pub fn is_identity(&self) -> bool {
        self.t == DMatrix::identity(self.order(), self.order())
    }

    /// `T A T⁻¹`.
    pub fn conjugate(&self, a: &DMatrix<C>) -> DMatrix<C> {
        if self.is_identity() {
            return a.clone();
        }
        &self.t * a * &self.t_inv
    }

    /// Composition `self ∘ other`, i.e. the matrix `T_self T_other`.
    pub fn compose(&self, other: &Chart) -> Result<Chart> {
        Chart::new(format!("{}*{}", self.name, other.name), &self.t * &other.t)
    }

    pub fn info(&self) -> ChartInfo {
        ChartInfo { name: self.name.clone(), order: self.order(), det: self.det }
    }
}
