//! Fredholm borders of the far-field problems, their stability, and
//! Fredholm-index maps over the λ-plane.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linearization::{characteristic_quartic, SpectralProblem};
use crate::model::{FarFieldData, Side};
use crate::numerics::{count_roots_positive_real, NEAR_AXIS_MARGIN};

type C = Complex64;

/// Discriminant of the border quadratic in both algebraic forms:
/// `[(D+1)k²+ĝ_v-ĝ_u]² - 4k²[Dk²+ĝ_v-Dĝ_u]` and `[(D-1)k²+ĝ_v+ĝ_u]² - 4ĝ_vĝ_u`.
pub fn delta(k2: f64, far: &FarFieldData, d: f64, side: Side) -> (f64, f64) {
    let (gu, gv) = far.side(side);
    let a = (d + 1.0) * k2 + gv - gu;
    let first = a * a - 4.0 * k2 * (d * k2 + gv - d * gu);
    let b = (d - 1.0) * k2 + gv + gu;
    let second = b * b - 4.0 * gv * gu;
    (first, second)
}

/// Which root of the border quadratic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }
}

/// `λ` on the Fredholm border for spatial eigenvalue `ν = ik`.
pub fn border_point(k: f64, far: &FarFieldData, d: f64, c: f64, side: Side, branch: Branch) -> C {
    let (gu, gv) = far.side(side);
    let k2 = k * k;
    // the second form avoids the k⁴ cancellation of the first
    let (_, disc) = delta(k2, far, d, side);
    // Δ < 0 gives Im λ = (2kc ± √-Δ)/2 with Re λ fixed; the complex root covers both cases.
    let root = if disc >= 0.0 { C::new(disc.sqrt(), 0.0) } else { C::new(0.0, (-disc).sqrt()) };
    (C::new(-(d + 1.0) * k2 - gv + gu, 2.0 * k * c) + branch.sign() * root) / 2.0
}

/// Relative residual of `(λ-ikc)² + [(D+1)k²+ĝ_v-ĝ_u](λ-ikc) + k²[Dk²+ĝ_v-Dĝ_u]`.
pub fn border_residual(lambda: C, k: f64, far: &FarFieldData, d: f64, c: f64, side: Side) -> f64 {
    let (gu, gv) = far.side(side);
    let k2 = k * k;
    let m = lambda - C::new(0.0, k * c);
    let b = (d + 1.0) * k2 + gv - gu;
    let c0 = k2 * (d * k2 + gv - d * gu);
    let value = m * m + b * m + c0;
    // scaled by the terms before cancellation, since gu and gv may agree
    let b_size = (d + 1.0) * k2 + gv.abs() + gu.abs();
    let c0_size = k2 * (d * k2 + gv.abs() + d * gu.abs());
    let scale = m.norm_sqr() + b_size * m.norm() + c0_size;
    if scale == 0.0 {
        value.norm()
    } else {
        value.norm() / scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BorderSample {
    pub k: f64,
    pub lambda: C,
}

/// One branch of the Fredholm border sampled over a wavenumber grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorderCurve {
    pub branch: Branch,
    pub side: Side,
    pub samples: Vec<BorderSample>,
}

/// Wavenumber range covering both `Δ < 0` windows with margin.
pub fn default_k_max(far: &FarFieldData, d: f64, side: Side) -> f64 {
    let (gu, gv) = far.side(side);
    3.0 * (1.0 + gu.abs().sqrt().max(gv.abs().sqrt())) / (1.0 - d).max(0.05).sqrt()
}

pub const DEFAULT_BORDER_SAMPLES: usize = 2001;

/// Both border branches on a uniform `k` grid over `[-k_max, k_max]`.
pub fn border_curves(far: &FarFieldData, d: f64, c: f64, side: Side, k_max: f64, n: usize) -> Result<[BorderCurve; 2]> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 border samples, got {n}")));
    }
    if !(k_max > 0.0) {
        return Err(Error::InvalidParameter(format!("k_max must be positive, got {k_max}")));
    }
    let ks: Vec<f64> = (0..n).map(|i| -k_max + 2.0 * k_max * i as f64 / (n - 1) as f64).collect();
    let curve = |branch| BorderCurve {
        branch,
        side,
        samples: ks.iter().map(|&k| BorderSample { k, lambda: border_point(k, far, d, c, side, branch) }).collect(),
    };
    Ok([curve(Branch::Plus), curve(Branch::Minus)])
}

/// Far-field stability class of the borders on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BorderClass {
    Stable,
    DirectInstability,
    TuringInstability,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorderStability {
    pub class: BorderClass,
    /// Set when `ĝ_v = ĝ_u` or `ĝ_v = Dĝ_u`; the class is then the non-strict reading.
    pub marginal: bool,
}

/// Relative tolerance under which `ĝ_v` and `ĝ_u` (or `Dĝ_u`) count as equal.
pub const MARGINAL_TOL: f64 = 1e-9;

/// Stable iff `ĝ_v > ĝ_u` and `ĝ_v > Dĝ_u`, up to [`MARGINAL_TOL`].
pub fn border_stability(far: &FarFieldData, d: f64, side: Side) -> BorderStability {
    let (gu, gv) = far.side(side);
    let tol = MARGINAL_TOL * gu.abs().max(gv.abs()).max(1.0);
    let eq_direct = (gv - gu).abs() <= tol;
    let eq_turing = (gv - d * gu).abs() <= tol;
    let direct = gv < gu && !eq_direct;
    let turing = gv < d * gu && !eq_turing;
    let marginal = eq_direct || eq_turing;
    let class = match (direct, turing) {
        (false, false) => BorderClass::Stable,
        (true, false) => BorderClass::DirectInstability,
        (false, true) => BorderClass::TuringInstability,
        (true, true) => BorderClass::Both,
    };
    BorderStability { class, marginal }
}

/// Closed-form speed condition `(c-2)(c-2D) >= 0` and `(c+2)(c+2D) >= 0` for
/// the stable essential spectrum of the travelling `tanh²` front family.
///
/// The published condition carries an undefined capital `C` in place of the
/// second `c`; it is read as `c`, and [`border_stability`] on the actual far
/// fields is the authoritative check.
pub fn front_speed_condition(d: f64, c: f64) -> bool {
    (c - 2.0) * (c - 2.0 * d) >= 0.0 && (c + 2.0) * (c + 2.0 * d) >= 0.0
}

/// Values of `k²` at which `Re λ` on the border can be stationary; always contains 0.
pub fn stationary_k(far: &FarFieldData, d: f64, side: Side) -> Result<Vec<f64>> {
    if d == 1.0 {
        return Err(Error::InvalidParameter("stationary wavenumbers are undefined for D = 1".into()));
    }
    let (gu, gv) = far.side(side);
    let mut out = vec![0.0];
    let p = gu * gv;
    if p < 0.0 || d <= 0.0 {
        return Ok(out);
    }
    let candidates = if d < 1.0 && gu < 0.0 && gv < 0.0 {
        let (a, b, sd) = ((-gv).sqrt(), (-gu).sqrt(), d.sqrt());
        let den = (1.0 - d) * sd;
        [-(sd * a + b) * (a + sd * b) / den, -(sd * a - b) * (a - sd * b) / den]
    } else {
        let root = (1.0 + d) * (p / d).sqrt();
        [(gu + gv + root) / (1.0 - d), (gu + gv - root) / (1.0 - d)]
    };
    for k2 in candidates {
        if k2 > 0.0 && k2.is_finite() {
            out.push(k2);
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

/// Essential spectrum of a stationary wave on one side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C0Spectrum {
    /// Ray `(-∞, ray_max]` on the real axis.
    pub ray_max: f64,
    /// Closed curve traced by `Δ < 0` wavenumbers, present iff `ĝ_u, ĝ_v > 0` and `D < 1`.
    pub ellipse: Option<Vec<C>>,
}

/// Ray plus optional ellipse, the latter sampled from the border formula at `c = 0`.
pub fn c0_spectrum(far: &FarFieldData, d: f64, side: Side, n: usize) -> C0Spectrum {
    let (gu, gv) = far.side(side);
    let ray_max = 0f64.max(gu - gv);
    let ellipse = if gu > 0.0 && gv > 0.0 && d < 1.0 && n >= 2 {
        let lo = (gv.sqrt() - gu.sqrt()).abs() / (1.0 - d).sqrt();
        let hi = (gv.sqrt() + gu.sqrt()) / (1.0 - d).sqrt();
        let mut pts = Vec::with_capacity(2 * n);
        for branch in [Branch::Plus, Branch::Minus] {
            for i in 0..n {
                let k2 = (lo + (hi - lo) * i as f64 / (n - 1) as f64).powi(2);
                // Δ ≤ 0 on the whole window; rounding at the ends must not leak into Re λ
                let (_, disc) = delta(k2, far, d, side);
                let im = branch.sign() * (-disc).max(0.0).sqrt() / 2.0;
                pts.push(C::new((-(d + 1.0) * k2 - gv + gu) / 2.0, im));
            }
        }
        Some(pts)
    } else {
        None
    };
    C0Spectrum { ray_max, ellipse }
}

/// Residual of `[(1-D)Re λ + ĝ_v + Dĝ_u]² + (D+1)²(Im λ)² - (D+1)²ĝ_uĝ_v`.
pub fn c0_ellipse_residual(lambda: C, far: &FarFieldData, d: f64, side: Side) -> f64 {
    let (gu, gv) = far.side(side);
    let x = (1.0 - d) * lambda.re + gv + d * gu;
    x * x + (d + 1.0).powi(2) * lambda.im * lambda.im - (d + 1.0).powi(2) * gu * gv
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub lambda: C,
    /// Spatial eigenvalues with `Re ν > 0` at `+∞`; `None` on a border.
    pub count_plus: Option<usize>,
    pub count_minus: Option<usize>,
    /// `count⁻ - count⁺`.
    pub index: Option<i64>,
    pub border: bool,
}

impl RegionPoint {
    pub fn in_essential_spectrum(&self) -> bool {
        self.border || self.index != Some(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub points: Vec<RegionPoint>,
}

/// Rectangular grid of `nre × nim` points.
pub fn lambda_grid(re: (f64, f64), im: (f64, f64), nre: usize, nim: usize) -> Vec<C> {
    let step = |a: f64, b: f64, n: usize, i: usize| if n < 2 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 };
    (0..nim).flat_map(|j| (0..nre).map(move |i| C::new(step(re.0, re.1, nre, i), step(im.0, im.1, nim, j)))).collect()
}

/// Unstable spatial-eigenvalue count on one side, `None` within the near-axis margin.
pub fn unstable_count(far: &FarFieldData, d: f64, c: f64, lambda: C, side: Side) -> Result<Option<usize>> {
    let q = characteristic_quartic(far, d, c, lambda, side);
    match count_roots_positive_real(&q, NEAR_AXIS_MARGIN) {
        Ok(n) => Ok(Some(n)),
        Err(Error::NearBorder { .. }) => Ok(None),
        Err(Error::ConstantPolynomial) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Per-λ unstable counts and Fredholm index of the problem's far fields.
pub fn region_map(sp: &SpectralProblem, grid: &[C]) -> Result<RegionMap> {
    let far = sp.far_field();
    let (d, c) = (sp.profile().d, sp.profile().c);
    let points = grid
        .par_iter()
        .map(|&lambda| {
            let plus = unstable_count(&far, d, c, lambda, Side::Plus)?;
            let minus = unstable_count(&far, d, c, lambda, Side::Minus)?;
            let index = match (plus, minus) {
                (Some(p), Some(m)) => Some(m as i64 - p as i64),
                _ => None,
            };
            Ok(RegionPoint { lambda, count_plus: plus, count_minus: minus, index, border: index.is_none() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionMap { points })
}

/// CSV with columns `k,re_lambda,im_lambda,branch,side`.
pub fn write_border_csv<W: Write>(out: W, curves: &[BorderCurve]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "re_lambda", "im_lambda", "branch", "side"])?;
    for curve in curves {
        let side = match curve.side {
            Side::Minus => "-",
            Side::Plus => "+",
        };
        for s in &curve.samples {
            w.write_record([
                format!("{:e}", s.k),
                format!("{:e}", s.lambda.re),
                format!("{:e}", s.lambda.im),
                curve.branch.label().to_string(),
                side.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// CSV with columns `re_lambda,im_lambda,count_plus,count_minus,index`; border points leave counts empty.
pub fn write_region_csv<W: Write>(out: W, map: &RegionMap) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re_lambda", "im_lambda", "count_plus", "count_minus", "index"])?;
    let opt = |x: Option<i64>| x.map(|v| v.to_string()).unwrap_or_default();
    for p in &map.points {
        w.write_record([
            format!("{:e}", p.lambda.re),
            format!("{:e}", p.lambda.im),
            opt(p.count_plus.map(|v| v as i64)),
            opt(p.count_minus.map(|v| v as i64)),
            opt(p.index),
        ])?;
    }
    w.flush()?;
    Ok(())
}
