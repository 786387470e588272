use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::chart::Chart;
use crate::error::{Error, Result};
use crate::model::{far_field, FarFieldData, ReactionTerm, Side, WaveProfile};

type C = Complex64;

/// Which first-order reduction of the eigenvalue problem is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralCase {
    /// `(p, q, r, s)` with `r = p' + cp`, `s = Dq' + cq`; needs `D > 0`.
    General4,
    /// `(p, q, r)` with `r = p' + cp`; needs `D = 0`, `c ≠ 0`.
    D0Moving3,
    /// `(p, p')` of the rational pencil; needs `D = c = 0`.
    D0Pencil2,
    /// `(q, q')` of the scalar equal-diffusivity reduction; needs `D = 1`.
    D1Scalar2,
}

impl SpectralCase {
    pub fn order(self) -> usize {
        match self {
            SpectralCase::General4 => 4,
            SpectralCase::D0Moving3 => 3,
            SpectralCase::D0Pencil2 | SpectralCase::D1Scalar2 => 2,
        }
    }

    /// Default reduction for given `(D, c)`; `D = 1` still uses the full system.
    pub fn for_parameters(d: f64, c: f64) -> Self {
        if d > 0.0 {
            SpectralCase::General4
        } else if c != 0.0 {
            SpectralCase::D0Moving3
        } else {
            SpectralCase::D0Pencil2
        }
    }
}

/// First-order system `y' = A(λ, z) y` in the coordinates of its chart.
#[derive(Debug, Clone)]
pub struct SpectralProblem {
    case: SpectralCase,
    reaction: ReactionTerm,
    profile: WaveProfile,
    far: FarFieldData,
    chart: Chart,
}

fn c(x: f64) -> C {
    C::new(x, 0.0)
}

impl SpectralProblem {
    pub fn build(rt: &ReactionTerm, wp: &WaveProfile, case: SpectralCase) -> Result<Self> {
        let (d, speed) = (wp.d, wp.c);
        let ok = match case {
            SpectralCase::General4 => d > 0.0,
            SpectralCase::D0Moving3 => d == 0.0 && speed != 0.0,
            SpectralCase::D0Pencil2 => d == 0.0 && speed == 0.0,
            SpectralCase::D1Scalar2 => d == 1.0,
        };
        if !ok {
            return Err(Error::InconsistentCase(format!("{case:?} with D = {d}, c = {speed}")));
        }
        if case != SpectralCase::D0Pencil2 && !wp.is_closed_form() {
            return Err(Error::InconsistentCase(format!("{case:?} needs a closed-form profile")));
        }
        Ok(Self { case, reaction: rt.clone(), profile: wp.clone(), far: far_field(rt, wp), chart: Chart::identity(case.order()) })
    }

    pub fn case(&self) -> SpectralCase {
        self.case
    }

    pub fn order(&self) -> usize {
        self.case.order()
    }

    pub fn reaction(&self) -> &ReactionTerm {
        &self.reaction
    }

    pub fn profile(&self) -> &WaveProfile {
        &self.profile
    }

    pub fn far_field(&self) -> FarFieldData {
        self.far
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// Same problem expressed in `chart` (replacing any previous chart).
    pub fn with_chart(&self, chart: Chart) -> Result<Self> {
        if chart.order() != self.order() {
            return Err(Error::Dimension { expected: self.order(), got: chart.order() });
        }
        Ok(Self { chart, ..self.clone() })
    }

    /// True when `A` is real for real `λ` in the current chart.
    pub fn has_real_coefficients(&self) -> bool {
        self.chart.matrix().iter().all(|z| z.im == 0.0)
    }

    fn assemble(&self, lambda: C, gu: f64, gv: f64) -> DMatrix<C> {
        let (d, speed) = (self.profile.d, self.profile.c);
        let z0 = C::new(0.0, 0.0);
        match self.case {
            SpectralCase::General4 => {
                #[rustfmt::skip]
                let m = DMatrix::from_row_slice(4, 4, &[
                    c(-speed), z0, c(1.0), z0,
                    z0, c(-speed / d), z0, c(1.0 / d),
                    lambda - gu, c(-gv), z0, z0,
                    c(gu), lambda + gv, z0, z0,
                ]);
                m
            }
            SpectralCase::D0Moving3 => {
                #[rustfmt::skip]
                let m = DMatrix::from_row_slice(3, 3, &[
                    c(-speed), z0, c(1.0),
                    c(gu / speed), (lambda + gv) / speed, z0,
                    lambda - gu, c(-gv), z0,
                ]);
                m
            }
            SpectralCase::D0Pencil2 => {
                let coeff = lambda - gu + gu * gv / (lambda + gv);
                DMatrix::from_row_slice(2, 2, &[z0, c(1.0), coeff, z0])
            }
            SpectralCase::D1Scalar2 => {
                // gu, gv here are g_u, g_v at (-v̂, v̂); G'(v̂) = g_v - g_u.
                DMatrix::from_row_slice(2, 2, &[z0, c(1.0), lambda + (gv - gu), c(-speed)])
            }
        }
    }

    fn partials_at(&self, z: f64) -> (f64, f64) {
        let [u, v, _, _] = self.profile.eval(z);
        match self.case {
            SpectralCase::D1Scalar2 => (self.reaction.g_u(-v, v), self.reaction.g_v(-v, v)),
            _ => (self.reaction.g_u(u, v), self.reaction.g_v(u, v)),
        }
    }

    fn far_partials(&self, side: Side) -> (f64, f64) {
        match self.case {
            SpectralCase::D1Scalar2 => {
                let (_, v) = if side == Side::Plus { self.profile.right } else { self.profile.left };
                (self.reaction.g_u(-v, v), self.reaction.g_v(-v, v))
            }
            _ => self.far.side(side),
        }
    }

    /// `A(λ, z)` in original coordinates.
    pub fn raw_matrix(&self, lambda: C, z: f64) -> DMatrix<C> {
        let (gu, gv) = self.partials_at(z);
        self.assemble(lambda, gu, gv)
    }

    /// `A±(λ)` in original coordinates, from the stored limit states.
    pub fn raw_asymptotic(&self, lambda: C, side: Side) -> DMatrix<C> {
        let (gu, gv) = self.far_partials(side);
        self.assemble(lambda, gu, gv)
    }

    /// `T A(λ, z) T⁻¹`.
    pub fn matrix(&self, lambda: C, z: f64) -> DMatrix<C> {
        self.chart.conjugate(&self.raw_matrix(lambda, z))
    }

    /// `T A±(λ) T⁻¹`.
    pub fn asymptotic(&self, lambda: C, side: Side) -> DMatrix<C> {
        self.chart.conjugate(&self.raw_asymptotic(lambda, side))
    }
}
