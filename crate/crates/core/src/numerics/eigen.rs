//! Eigenvalues and eigenvectors of small dense complex matrices.
//!
//! Hessenberg reduction with pivoted elementary similarities, then a
//! single-shift complex QR iteration with Wilkinson shifts and periodic
//! exceptional shifts.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

fn hessenberg(a: &mut DMatrix<Complex64>) {
    let n = a.nrows();
    for m in 1..n.saturating_sub(1) {
        // pivot
        let mut x = Complex64::new(0.0, 0.0);
        let mut piv = m;
        for j in m..n {
            if cabs1(a[(j, m - 1)]) > cabs1(x) {
                x = a[(j, m - 1)];
                piv = j;
            }
        }
        if piv != m {
            a.swap_rows(piv, m);
            a.swap_columns(piv, m);
        }
        if x == Complex64::new(0.0, 0.0) {
            continue;
        }
        for i in m + 1..n {
            let mut y = a[(i, m - 1)];
            if y == Complex64::new(0.0, 0.0) {
                continue;
            }
            y /= x;
            a[(i, m - 1)] = y;
            for j in m..n {
                let t = a[(m, j)];
                a[(i, j)] -= y * t;
            }
            for j in 0..n {
                let t = a[(j, i)];
                a[(j, m)] += y * t;
            }
        }
    }
    for i in 2..n {
        for j in 0..i - 1 {
            a[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// All eigenvalues of a square complex matrix.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Dimension { expected: n, got: m.ncols() });
    }
    if m.iter().any(|z| !z.is_finite()) {
        return Err(Error::Singular("non-finite matrix entry".into()));
    }
    let mut h = m.clone();
    hessenberg(&mut h);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(out);
    }
    let anorm = h.iter().map(|z| cabs1(*z)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut iter = 0usize;
    loop {
        if hi == 0 {
            out[0] = h[(0, 0)];
            break;
        }
        // find a negligible subdiagonal
        let mut l = hi;
        while l > 0 {
            let s = cabs1(h[(l - 1, l - 1)]) + cabs1(h[(l, l)]);
            let s = if s == 0.0 { anorm } else { s };
            if cabs1(h[(l, l - 1)]) <= f64::EPSILON * s {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            out[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::Singular("QR iteration did not converge".into()));
        }
        let shift = if iter % 10 == 0 {
            h[(hi, hi)] + Complex64::new(cabs1(h[(hi, hi - 1)]), 0.0) * 0.75
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, l, hi, shift);
    }
    Ok(out)
}

fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    // eigenvalue of [[a, b], [c, d]] closest to d
    let tr_half = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let sq = disc.sqrt();
    let e1 = tr_half + sq;
    let e2 = tr_half - sq;
    if (e1 - d).norm() < (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

fn qr_sweep(h: &mut DMatrix<Complex64>, l: usize, hi: usize, shift: Complex64) {
    for k in l..=hi {
        h[(k, k)] -= shift;
    }
    let mut rots = Vec::with_capacity(hi - l);
    for k in l..hi {
        let a = h[(k, k)];
        let b = h[(k + 1, k)];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (a / r, b / r)
        };
        for j in k..=hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = c.conj() * x + s.conj() * y;
            h[(k + 1, j)] = -s * x + c * y;
        }
        rots.push((c, s));
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let k = l + idx;
        let top = (k + 2).min(hi);
        for i in l..=top {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s;
            h[(i, k + 1)] = -x * s.conj() + y * c.conj();
        }
    }
    for k in l..=hi {
        h[(k, k)] += shift;
    }
}

/// Eigenvector for a (simple) eigenvalue by inverse iteration.
pub fn eigenvector(m: &DMatrix<Complex64>, nu: Complex64) -> Result<DVector<Complex64>> {
    let n = m.nrows();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let mut shifted = m.clone();
    let perturb = nu + Complex64::new(1.0, 0.7) * (1e-10 * scale);
    for i in 0..n {
        shifted[(i, i)] -= perturb;
    }
    let lu = shifted.lu();
    let mut x = DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * i as f64, 0.05 * i as f64));
    for _ in 0..3 {
        let y = lu
            .solve(&x)
            .ok_or_else(|| Error::Singular(format!("inverse iteration at {nu}")))?;
        let nrm = y.norm();
        if !(nrm.is_finite() && nrm > 0.0) {
            return Err(Error::Singular(format!("inverse iteration at {nu}")));
        }
        x = y / Complex64::new(nrm, 0.0);
    }
    Ok(x)
}
