use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::linearization::SpectralProblem;
use crate::numerics::{integrate, OdeOptions};

type C = Complex64;

/// Matrix Riccati field `W' = C + DW - WA - WBW` for the block split
/// `[[A, B], [C, D]]` of `a` with `A` of size `k×k`; `W` is `(n-k)×k`.
pub fn riccati_field(a: &DMatrix<C>, k: usize, w: &DMatrix<C>) -> DMatrix<C> {
    let n = a.nrows();
    let a11 = a.view((0, 0), (k, k));
    let a12 = a.view((0, k), (k, n - k));
    let a21 = a.view((k, 0), (n - k, k));
    let a22 = a.view((k, k), (n - k, n - k));
    a21 + a22 * w - w * a11 - w * (a12 * w)
}

/// Riccati flow of `k`-planes for one spectral problem at fixed `λ`.
#[derive(Debug, Clone, Copy)]
pub struct RiccatiFlow<'a> {
    pub problem: &'a SpectralProblem,
    pub lambda: C,
    pub k: usize,
}

/// Flow of lines `(1, α, β, …)`.
pub fn line_flow(sp: &SpectralProblem, lambda: C) -> RiccatiFlow<'_> {
    RiccatiFlow { problem: sp, lambda, k: 1 }
}

/// Flow of `k`-planes with coordinates `W = Y X⁻¹`.
pub fn plane_flow(sp: &SpectralProblem, lambda: C, k: usize) -> RiccatiFlow<'_> {
    RiccatiFlow { problem: sp, lambda, k }
}

impl RiccatiFlow<'_> {
    pub fn rows(&self) -> usize {
        self.problem.order() - self.k
    }

    pub fn field(&self, z: f64, w: &DMatrix<C>) -> DMatrix<C> {
        riccati_field(&self.problem.matrix(self.lambda, z), self.k, w)
    }

    /// Integrates from `w0` at `from` to `to`; `None` when the coordinates blow up.
    pub fn integrate(&self, w0: &DMatrix<C>, from: f64, to: f64, opts: &OdeOptions) -> Result<Option<DMatrix<C>>> {
        let (rows, k) = (self.rows(), self.k);
        let traj = integrate(
            |z, y, dy| {
                let w = DMatrix::from_column_slice(rows, k, y);
                dy.copy_from_slice(self.field(z, &w).as_slice());
            },
            w0.as_slice(),
            from,
            to,
            opts,
        )?;
        if traj.blew_up() {
            return Ok(None);
        }
        Ok(Some(DMatrix::from_column_slice(rows, k, traj.last_state())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearization::{spectral_subspace, Chart, SpectralCase};
    use crate::model::{catalog, CatalogParams, Side};

    fn cx(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn diagonal_field_is_linear() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![cx(1.0), cx(-2.0), cx(3.0)]));
        let w = DMatrix::from_column_slice(2, 1, &[cx(0.5), cx(0.25)]);
        let f = riccati_field(&a, 1, &w);
        assert!((f[0] - cx(-1.5)).norm() < 1e-15 && (f[1] - cx(0.5)).norm() < 1e-15);
        assert!(riccati_field(&a, 1, &DMatrix::zeros(2, 1)).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn block_triangular_field_is_sylvester() {
        let mut a = DMatrix::from_fn(4, 4, |i, j| C::new((i * 4 + j) as f64 * 0.1, 0.2 * i as f64));
        a.view_mut((0, 2), (2, 2)).fill(cx(0.0));
        a.view_mut((2, 0), (2, 2)).fill(cx(0.0));
        let w = DMatrix::from_fn(2, 2, |i, j| C::new(i as f64 - j as f64, 0.3));
        let expected = a.view((2, 2), (2, 2)) * &w - &w * a.view((0, 0), (2, 2));
        assert!((riccati_field(&a, 2, &w) - expected).norm() < 1e-14);
    }

    fn plane_coords(basis: &DMatrix<C>, k: usize) -> DMatrix<C> {
        let n = basis.nrows();
        let x = basis.view((0, 0), (k, k)).into_owned();
        basis.view((k, 0), (n - k, k)) * x.try_inverse().unwrap()
    }

    #[test]
    fn invariant_subspaces_are_fixed_points() {
        let (g, w) = catalog(5, &CatalogParams::default()).unwrap();
        let sp = SpectralProblem::build(&g, &w, SpectralCase::D0Moving3).unwrap().with_chart(Chart::complex3()).unwrap();
        let lambda = cx(2.0);
        let a = sp.asymptotic(lambda, Side::Plus);
        let unstable = spectral_subspace(&a, true).unwrap();
        assert_eq!(unstable.ncols(), 2);
        let wu = plane_coords(&unstable, 2);
        assert!(riccati_field(&a, 2, &wu).norm() < 1e-10 * (1.0 + wu.norm()));
        let stable = spectral_subspace(&a, false).unwrap();
        let ws = plane_coords(&stable, 1);
        assert!(riccati_field(&a, 1, &ws).norm() < 1e-10 * (1.0 + ws.norm()));
    }

    #[test]
    fn line_flow_matches_projected_linear_flow() {
        let (g, w) = catalog(5, &CatalogParams::default().with_c(1.0)).unwrap();
        let sp = SpectralProblem::build(&g, &w, SpectralCase::D0Moving3).unwrap().with_chart(Chart::complex3()).unwrap();
        let lambda = cx(1.0);
        let l = 25.0;
        let stable = spectral_subspace(&sp.asymptotic(lambda, Side::Plus), false).unwrap();
        let w0 = plane_coords(&stable, 1);
        let opts = OdeOptions { record_all: false, ..OdeOptions::default() };
        let flow = line_flow(&sp, lambda);
        let w_end = flow.integrate(&w0, l, 0.0, &opts).unwrap().expect("no blow-up");
        // Linear integration of y' = A_T y from the same line.
        let y0: Vec<C> = stable.column(0).iter().copied().collect();
        let traj = integrate(
            |z, y, dy| {
                let v = sp.matrix(lambda, z) * nalgebra::DVector::from_column_slice(y);
                dy.copy_from_slice(v.as_slice());
            },
            &y0,
            l,
            0.0,
            &OdeOptions { blow_up_norm: f64::INFINITY, ..opts },
        )
        .unwrap();
        let y = traj.last_state();
        let projected = DMatrix::from_column_slice(2, 1, &[y[1] / y[0], y[2] / y[0]]);
        assert!((w_end - projected).norm() < 1e-7);
    }
}
