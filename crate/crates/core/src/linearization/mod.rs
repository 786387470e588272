//! First-order spectral problems, far-field subspaces, and charts.

mod chart;
mod problem;

pub use chart::{Chart, ChartInfo};
pub use problem::{SpectralCase, SpectralProblem};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{FarFieldData, Side};
use crate::numerics::{eigenvalues, Polynomial, NEAR_AXIS_MARGIN};

type C = Complex64;

/// Far-field characteristic polynomial in `ν`, ascending coefficients:
/// `λ(ĝ_v-ĝ_u+λ) - c(ĝ_v-ĝ_u+2λ)ν + [c²-(ĝ_v-Dĝ_u)-λ(D+1)]ν² + c(D+1)ν³ + Dν⁴`.
pub fn characteristic_quartic(far: &FarFieldData, d: f64, c: f64, lambda: C, side: Side) -> Polynomial {
    let (gu, gv) = far.side(side);
    Polynomial::new(vec![
        lambda * (gv - gu + lambda),
        -c * (gv - gu + 2.0 * lambda),
        C::new(c * c - (gv - d * gu), 0.0) - lambda * (d + 1.0),
        C::new(c * (d + 1.0), 0.0),
        C::new(d, 0.0),
    ])
}

/// Large-`|λ|` approximations of the spatial eigenvalues.
pub fn asymptotic_roots(far: &FarFieldData, d: f64, c: f64, lambda: C, side: Side) -> Result<Vec<C>> {
    let g = far.gu_plus.abs().max(far.gv_plus.abs()).max(far.gu_minus.abs()).max(far.gv_minus.abs());
    let mut need = 1f64.max(g).max(c * c);
    if d > 0.0 {
        need = need.max(1.0 / d);
    }
    need *= 100.0;
    if lambda.norm() < need {
        return Err(Error::InvalidParameter(format!("|λ| = {} is below the asymptotic threshold {need}", lambda.norm())));
    }
    let s = lambda.sqrt();
    let half = C::new(c / 2.0, 0.0);
    Ok(if d > 0.0 {
        let sd = d.sqrt();
        let hd = C::new(c / (2.0 * d), 0.0);
        vec![s - half, -s - half, s / sd - hd, -s / sd - hd]
    } else if c != 0.0 {
        let (_, gv) = far.side(side);
        vec![s - half, -s - half, (lambda + gv) / c]
    } else {
        vec![s, -s]
    })
}

/// Far-field invariant subspaces on one side.
#[derive(Debug, Clone)]
pub struct Subspaces {
    pub side: Side,
    /// Eigenvalues with `Re ν < 0`.
    pub stable_eigenvalues: Vec<C>,
    /// Eigenvalues with `Re ν > 0`.
    pub unstable_eigenvalues: Vec<C>,
    /// Eigenvectors normalized so the first nonzero component is one.
    pub stable_eigenvectors: DMatrix<C>,
    pub unstable_eigenvectors: DMatrix<C>,
    /// Orthonormal bases of the same spans.
    pub stable: DMatrix<C>,
    pub unstable: DMatrix<C>,
}

impl Subspaces {
    pub fn stable_dim(&self) -> usize {
        self.stable_eigenvalues.len()
    }

    pub fn unstable_dim(&self) -> usize {
        self.unstable_eigenvalues.len()
    }

    /// Smallest `|Re ν|` over all spatial eigenvalues.
    pub fn min_decay(&self) -> f64 {
        self.stable_eigenvalues.iter().chain(&self.unstable_eigenvalues).map(|z| z.re.abs()).fold(f64::INFINITY, f64::min)
    }
}

fn normalize_first(v: DVector<C>) -> DVector<C> {
    let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v.iter().copied().find(|z| z.norm() > 1e-10 * peak).unwrap_or(C::new(1.0, 0.0));
    v / pivot
}

fn orthonormal(m: &DMatrix<C>) -> DMatrix<C> {
    if m.ncols() == 0 {
        return m.clone();
    }
    m.clone().qr().q()
}

/// Null space of `a` for the eigenvalue cluster at `nu` of size `mult`.
fn eigenspace(a: &DMatrix<C>, nu: C, mult: usize, scale: f64) -> Result<Vec<DVector<C>>> {
    let n = a.nrows();
    let shifted = a - DMatrix::<C>::identity(n, n) * nu;
    let svd = nalgebra::SVD::try_new(shifted, false, true, 1e-15, 500)
        .ok_or_else(|| Error::Singular(format!("SVD did not converge near ν = {nu}")))?;
    let v_t = svd.v_t.expect("requested V");
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let tol = 1e-7 * scale;
    let small = idx.iter().take_while(|&&i| svd.singular_values[i] < tol).count();
    if small < mult {
        return Err(Error::Defective {
            nu,
            detail: format!(
                "algebraic multiplicity {mult} but geometric multiplicity {small} (singular values {:?})",
                idx.iter().map(|&i| svd.singular_values[i]).collect::<Vec<_>>()
            ),
        });
    }
    Ok(idx[..mult].iter().map(|&i| v_t.row(i).adjoint().into_owned()).collect())
}

/// Eigen-decomposition of a far-field matrix split by the sign of `Re ν`.
pub fn split_subspaces(a: &DMatrix<C>, side: Side) -> Result<Subspaces> {
    let n = a.nrows();
    if a.iter().any(|z| !z.is_finite()) {
        return Err(Error::Singular("far-field matrix has non-finite entries".into()));
    }
    let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut nus = eigenvalues(a)?;
    nus.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    if let Some(&nu) = nus.iter().find(|z| z.re.abs() < NEAR_AXIS_MARGIN) {
        return Err(Error::NearBorder { nu, margin: NEAR_AXIS_MARGIN });
    }
    // cluster nearly equal eigenvalues
    let cluster_tol = 1e-6 * scale;
    let mut used = vec![false; n];
    let mut pairs: Vec<(C, DVector<C>)> = Vec::with_capacity(n);
    for i in 0..n {
        if used[i] {
            continue;
        }
        let members: Vec<usize> = (i..n).filter(|&j| !used[j] && (nus[j] - nus[i]).norm() < cluster_tol).collect();
        for &j in &members {
            used[j] = true;
        }
        let mean = members.iter().map(|&j| nus[j]).sum::<C>() / members.len() as f64;
        let vecs = eigenspace(a, mean, members.len(), scale)?;
        for (&j, v) in members.iter().zip(vecs) {
            pairs.push((nus[j], normalize_first(v)));
        }
    }
    let (st, un): (Vec<_>, Vec<_>) = pairs.into_iter().partition(|(nu, _)| nu.re < 0.0);
    let to_matrix = |set: &[(C, DVector<C>)]| {
        let cols: Vec<DVector<C>> = set.iter().map(|(_, v)| v.clone()).collect();
        if cols.is_empty() {
            DMatrix::zeros(n, 0)
        } else {
            DMatrix::from_columns(&cols)
        }
    };
    let stable_eigenvectors = to_matrix(&st);
    let unstable_eigenvectors = to_matrix(&un);
    Ok(Subspaces {
        side,
        stable_eigenvalues: st.iter().map(|p| p.0).collect(),
        unstable_eigenvalues: un.iter().map(|p| p.0).collect(),
        stable: orthonormal(&stable_eigenvectors),
        unstable: orthonormal(&unstable_eigenvectors),
        stable_eigenvectors,
        unstable_eigenvectors,
    })
}

/// Orthonormal basis of the unstable (or stable) invariant subspace of a
/// hyperbolic matrix, via the Newton iteration for the matrix sign function.
///
/// Unlike eigenvector bases this stays well defined when eigenvalues on the
/// same side of the imaginary axis collide.
pub fn spectral_subspace(a: &DMatrix<C>, unstable: bool) -> Result<DMatrix<C>> {
    let n = a.nrows();
    let id = DMatrix::<C>::identity(n, n);
    let mut s = a.clone();
    for _ in 0..100 {
        let inv = s.clone().try_inverse().ok_or_else(|| Error::Singular("sign iteration hit a singular matrix".into()))?;
        let det = s.determinant().norm();
        let mu = if det > 0.0 && det.is_finite() { det.powf(-1.0 / n as f64) } else { 1.0 };
        let next = (&s * C::new(mu, 0.0) + inv * C::new(1.0 / mu, 0.0)) * C::new(0.5, 0.0);
        let change = (&next - &s).norm();
        s = next;
        if change <= 1e-13 * s.norm() {
            break;
        }
    }
    if !((&s * &s - &id).norm() <= 1e-8 * (1.0 + s.norm_squared())) {
        return Err(Error::Singular("matrix sign iteration did not converge; far field is not hyperbolic".into()));
    }
    let p = if unstable { (&id + &s) * C::new(0.5, 0.0) } else { (&id - &s) * C::new(0.5, 0.0) };
    let k = p.trace().re.round().max(0.0) as usize;
    if k == 0 {
        return Ok(DMatrix::zeros(n, 0));
    }
    let svd = nalgebra::SVD::try_new(p, true, false, 1e-15, 500).ok_or_else(|| Error::Singular("SVD of spectral projector did not converge".into()))?;
    let u = svd.u.expect("requested U");
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let cols: Vec<_> = idx[..k].iter().map(|&i| u.column(i).into_owned()).collect();
    Ok(DMatrix::from_columns(&cols))
}

/// Stable and unstable subspaces of `A±(λ)` in the problem's chart.
pub fn subspaces(sp: &SpectralProblem, lambda: C, side: Side) -> Result<Subspaces> {
    split_subspaces(&sp.asymptotic(lambda, side), side)
}

/// The problem re-expressed in `chart`.
pub fn apply_chart(sp: &SpectralProblem, chart: Chart) -> Result<SpectralProblem> {
    sp.with_chart(chart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{catalog, CatalogParams};

    fn cx(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn equal_diffusivity_quartic_is_a_square() {
        let far = FarFieldData::uniform(0.0, 0.0);
        let q = characteristic_quartic(&far, 1.0, 0.0, cx(2.0, 1.0), Side::Plus);
        let lam = cx(2.0, 1.0);
        let expected = Polynomial::new(vec![lam * lam, C::new(0.0, 0.0), -2.0 * lam, C::new(0.0, 0.0), C::new(1.0, 0.0)]);
        for (a, b) in q.coefficients().iter().zip(expected.coefficients()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn degrees_follow_the_case() {
        let far = FarFieldData::uniform(1.0, 2.0);
        let l = cx(0.5, 0.1);
        assert_eq!(characteristic_quartic(&far, 0.5, 1.0, l, Side::Plus).degree(), 4);
        assert_eq!(characteristic_quartic(&far, 0.0, 1.0, l, Side::Plus).degree(), 3);
        assert_eq!(characteristic_quartic(&far, 0.0, 0.0, l, Side::Plus).degree(), 2);
    }

    #[test]
    fn stationary_pulse_far_field_matrix() {
        let d = 0.7;
        let (g, w) = catalog(7, &CatalogParams::default().with_d(d)).unwrap();
        let sp = SpectralProblem::build(&g, &w, SpectralCase::General4).unwrap();
        let lam = cx(1.3, 0.2);
        let a = sp.asymptotic(lam, Side::Plus);
        let z = C::new(0.0, 0.0);
        let one = C::new(1.0, 0.0);
        #[rustfmt::skip]
        let expected = DMatrix::from_row_slice(4, 4, &[
            z, z, one, z,
            z, z, z, one / d,
            lam + 4.0, z, z, z,
            C::new(-4.0, 0.0), lam, z, z,
        ]);
        assert!((a - expected).norm() < 1e-15);
    }

    #[test]
    fn stationary_pulse_subspaces() {
        let (g, w) = catalog(7, &CatalogParams::default().with_d(1.0)).unwrap();
        let sp = SpectralProblem::build(&g, &w, SpectralCase::General4).unwrap();
        let s = subspaces(&sp, cx(1.0, 0.0), Side::Plus).unwrap();
        assert_eq!(s.stable_dim(), 2);
        let mut re: Vec<f64> = s.stable_eigenvalues.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 5f64.sqrt()).abs() < 1e-12 && (re[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn algebraic_pulse_subspace_dimensions() {
        let (g, w) = catalog(5, &CatalogParams::default().with_c(1.0)).unwrap();
        let sp = SpectralProblem::build(&g, &w, SpectralCase::D0Moving3).unwrap();
        let s = subspaces(&sp, cx(1.0, 0.0), Side::Minus).unwrap();
        assert_eq!((s.unstable_dim(), s.stable_dim()), (2, 1));
    }

    #[test]
    fn sign_function_subspace_handles_collisions() {
        // Jordan block with eigenvalue 2 plus a stable eigenvalue.
        let a = DMatrix::from_row_slice(3, 3, &[cx(2.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(2.0, 0.0), cx(0.5, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(-1.0, 0.0)]);
        let u = spectral_subspace(&a, true).unwrap();
        assert_eq!(u.ncols(), 2);
        assert!(u.row(2).iter().all(|z| z.norm() < 1e-12));
        let s = spectral_subspace(&a, false).unwrap();
        assert_eq!(s.ncols(), 1);
        let v = s.column(0);
        let av = &a * v;
        assert!((av + v).norm() < 1e-12);
    }

    #[test]
    fn defective_far_field_is_reported() {
        let (g, w) = catalog(8, &CatalogParams::default().with_d(1.5)).unwrap();
        let sp = SpectralProblem::build(&g, &w, SpectralCase::General4).unwrap();
        // ν = 0 is a double root at λ = 0 and lies on the imaginary axis.
        assert!(subspaces(&sp, cx(0.0, 0.0), Side::Plus).is_err());
        let a = DMatrix::from_row_slice(2, 2, &[cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)]);
        assert!(matches!(split_subspaces(&a, Side::Plus), Err(Error::Defective { .. })));
    }

    #[test]
    fn semisimple_repeated_eigenvalue_is_accepted() {
        let a = DMatrix::from_row_slice(2, 2, &[cx(2.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(2.0, 0.0)]);
        let s = split_subspaces(&a, Side::Minus).unwrap();
        assert_eq!(s.unstable_dim(), 2);
    }

    #[test]
    fn chart_preserves_spectrum() {
        let (g, w) = catalog(5, &CatalogParams::default()).unwrap();
        let sp = SpectralProblem::build(&g, &w, SpectralCase::D0Moving3).unwrap();
        let spt = apply_chart(&sp, Chart::complex3()).unwrap();
        let lam = cx(2.0, 0.0);
        let mut e1 = eigenvalues(&sp.asymptotic(lam, Side::Plus)).unwrap();
        let mut e2 = eigenvalues(&spt.asymptotic(lam, Side::Plus)).unwrap();
        let key = |z: &C| (z.re * 1e6).round() as i64;
        e1.sort_by_key(key);
        e2.sort_by_key(key);
        for (a, b) in e1.iter().zip(&e2) {
            assert!((a - b).norm() < 1e-10);
        }
        assert!(apply_chart(&sp, Chart::pulse4()).is_err());
    }

    #[test]
    fn matrix_field_converges_to_far_field() {
        for (id, case) in [(7u8, SpectralCase::General4), (8, SpectralCase::General4), (6, SpectralCase::D0Moving3), (10, SpectralCase::General4)] {
            let (g, w) = catalog(id, &CatalogParams::default()).unwrap();
            let sp = SpectralProblem::build(&g, &w, case).unwrap();
            let lam = cx(0.7, -0.4);
            assert!((sp.raw_matrix(lam, 40.0) - sp.raw_asymptotic(lam, Side::Plus)).norm() < 1e-8, "{id}");
            assert!((sp.raw_matrix(lam, -40.0) - sp.raw_asymptotic(lam, Side::Minus)).norm() < 1e-8, "{id}");
        }
    }

    #[test]
    fn asymptotic_roots_match_quartic() {
        let far = FarFieldData::uniform(0.0, 1.0);
        let r = asymptotic_roots(&far, 0.0, 1.0, cx(1e4, 0.0), Side::Plus).unwrap();
        assert!((r[2] - cx(10001.0, 0.0)).norm() < 1e-9);
        let far = FarFieldData::uniform(0.0, 0.0);
        let r = asymptotic_roots(&far, 1.0, 0.0, cx(1e4, 0.0), Side::Plus).unwrap();
        for z in &r {
            assert!((z.norm() - 100.0).abs() < 1e-12);
        }
        assert!(asymptotic_roots(&far, 1.0, 0.0, cx(10.0, 0.0), Side::Plus).is_err());
        let far = FarFieldData::uniform(-1.0, 2.0);
        let lam = cx(1e4, 0.0);
        let q = characteristic_quartic(&far, 0.5, 1.0, lam, Side::Plus);
        for z in asymptotic_roots(&far, 0.5, 1.0, lam, Side::Plus).unwrap() {
            let rel = q.eval(z).norm() / (q.leading() * z.powu(4)).norm();
            assert!(rel < 0.05, "{z}: {rel}");
        }
    }
}
