//! Closed contours in the complex plane, phase unwrapping and winding numbers.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on contour samples during adaptive refinement.
pub const MAX_CONTOUR_SAMPLES: usize = 1 << 16;
/// Segments whose phase change exceeds this are bisected.
pub const REFINE_PHASE_JUMP: f64 = FRAC_PI_2;
const ZERO_SAMPLE: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmentLabel {
    OuterArc,
    InnerArc,
    AxisSegment,
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Piece {
    Line { from: Complex64, to: Complex64 },
    Arc { center: Complex64, radius: f64, theta_from: f64, theta_to: f64 },
}

impl Piece {
    pub fn point(&self, s: f64) -> Complex64 {
        match *self {
            Piece::Line { from, to } => from + (to - from) * s,
            Piece::Arc { center, radius, theta_from, theta_to } => {
                let th = theta_from + (theta_to - theta_from) * s;
                center + Complex64::from_polar(radius, th)
            }
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Piece::Line { from, to } => (to - from).norm(),
            Piece::Arc { radius, theta_from, theta_to, .. } => radius * (theta_to - theta_from).abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourPiece {
    pub piece: Piece,
    pub label: SegmentLabel,
}

/// A piecewise-smooth path made of line segments and circular arcs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub pieces: Vec<ContourPiece>,
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourVertex {
    pub piece: usize,
    pub s: f64,
    pub point: Complex64,
    pub label: SegmentLabel,
}

impl Contour {
    /// Boundary of the right half-annulus `{inner < |λ| < outer, Re λ > 0}`,
    /// positively oriented: outer arc, axis down to the inner arc, inner arc
    /// clockwise, axis down to the outer arc.
    pub fn right_half_annulus(outer: f64, inner: f64) -> Result<Self> {
        if !(inner > 0.0 && outer > inner) {
            return Err(Error::InvalidParameter(format!(
                "half-annulus radii must satisfy 0 < inner < outer (got {inner}, {outer})"
            )));
        }
        let z = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        Ok(Self {
            pieces: vec![
                ContourPiece {
                    piece: Piece::Arc { center: z, radius: outer, theta_from: -FRAC_PI_2, theta_to: FRAC_PI_2 },
                    label: SegmentLabel::OuterArc,
                },
                ContourPiece {
                    piece: Piece::Line { from: i * outer, to: i * inner },
                    label: SegmentLabel::AxisSegment,
                },
                ContourPiece {
                    piece: Piece::Arc { center: z, radius: inner, theta_from: FRAC_PI_2, theta_to: -FRAC_PI_2 },
                    label: SegmentLabel::InnerArc,
                },
                ContourPiece {
                    piece: Piece::Line { from: -i * inner, to: -i * outer },
                    label: SegmentLabel::AxisSegment,
                },
            ],
            closed: true,
        })
    }

    /// Same as [`Contour::right_half_annulus`] but with the straight sides
    /// moved to `Re λ = shift` (useful to keep away from features on the
    /// imaginary axis).
    pub fn shifted_half_annulus(outer: f64, inner: f64, shift: f64) -> Result<Self> {
        let mut c = Self::right_half_annulus(outer, inner)?;
        let d = Complex64::new(shift, 0.0);
        for p in &mut c.pieces {
            match &mut p.piece {
                Piece::Line { from, to } => {
                    *from += d;
                    *to += d;
                }
                Piece::Arc { center, .. } => *center += d,
            }
        }
        Ok(c)
    }

    /// Positively oriented rectangle.
    pub fn rectangle(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_max > re_min && im_max > im_min) {
            return Err(Error::InvalidParameter("degenerate rectangle".into()));
        }
        let p = |x: f64, y: f64| Complex64::new(x, y);
        let corners = [p(re_min, im_min), p(re_max, im_min), p(re_max, im_max), p(re_min, im_max)];
        let pieces = (0..4)
            .map(|k| ContourPiece {
                piece: Piece::Line { from: corners[k], to: corners[(k + 1) % 4] },
                label: SegmentLabel::Edge,
            })
            .collect();
        Ok(Self { pieces, closed: true })
    }

    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter("circle radius must be positive".into()));
        }
        Ok(Self {
            pieces: vec![ContourPiece {
                piece: Piece::Arc { center, radius, theta_from: -PI, theta_to: PI },
                label: SegmentLabel::Edge,
            }],
            closed: true,
        })
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(|p| p.piece.length()).sum()
    }

    /// Roughly `n` vertices distributed by arc length; every piece gets at
    /// least four. The closing vertex is not repeated.
    pub fn vertices(&self, n: usize) -> Vec<ContourVertex> {
        let total = self.length();
        let mut out = Vec::with_capacity(n + 4 * self.pieces.len());
        for (idx, p) in self.pieces.iter().enumerate() {
            let share = ((p.piece.length() / total) * n as f64).round() as usize;
            let m = share.max(4);
            for j in 0..m {
                let s = j as f64 / m as f64;
                out.push(ContourVertex { piece: idx, s, point: p.piece.point(s), label: p.label });
            }
        }
        if !self.closed {
            let last = self.pieces.len() - 1;
            let p = &self.pieces[last];
            out.push(ContourVertex { piece: last, s: 1.0, point: p.piece.point(1.0), label: p.label });
        }
        out
    }

    fn midpoint(&self, a: &ContourVertex, b: &ContourVertex) -> ContourVertex {
        // b may start the next piece, in which case a's piece runs to s = 1
        let (piece, s_end) = if b.piece == a.piece && b.s > a.s { (a.piece, b.s) } else { (a.piece, 1.0) };
        let s = 0.5 * (a.s + s_end);
        let p = &self.pieces[piece];
        ContourVertex { piece, s, point: p.piece.point(s), label: p.label }
    }
}

/// Phase change from `a` to `b` in (-π, π].
fn phase_step(a: Complex64, b: Complex64) -> f64 {
    (b / a).arg()
}

/// Winding number of a closed sampled path about the origin.
///
/// Returns the nearest integer and the distance of the raw unwrapped phase
/// count from it.
pub fn winding_number(samples: &[Complex64]) -> Result<(i64, f64)> {
    for (index, s) in samples.iter().enumerate() {
        if !(s.norm() > ZERO_SAMPLE) || !s.is_finite() {
            return Err(Error::ZeroOnContour { index, modulus: s.norm() });
        }
    }
    let n = samples.len();
    if n < 2 {
        return Ok((0, 0.0));
    }
    let mut total = 0.0;
    for i in 0..n {
        let next = (i + 1) % n;
        let jump = phase_step(samples[i], samples[next]);
        if jump.abs() >= PI * (1.0 - 1e-9) {
            return Err(Error::InsufficientSampling { index: i, next, jump });
        }
        total += jump;
    }
    let raw = total / TAU;
    let w = raw.round();
    Ok((w as i64, (raw - w).abs()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourScan {
    pub vertices: Vec<ContourVertex>,
    pub values: Vec<Complex64>,
    pub winding: i64,
    pub residual: f64,
}

impl ContourScan {
    /// Unwrapped phase along the contour, starting at `arg(values[0])`.
    pub fn unwrapped_phase(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.values.len());
        let mut acc = self.values.first().map(|v| v.arg()).unwrap_or(0.0);
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                acc += phase_step(self.values[i - 1], *v);
            }
            out.push(acc);
        }
        out
    }
}

/// Samples `f` on a closed contour, bisecting any segment whose phase jump
/// exceeds π/2, and returns the winding number about the origin.
///
/// Evaluations within a refinement round run in parallel.
pub fn winding_adaptive<F>(f: F, contour: &Contour, initial: usize, cap: usize) -> Result<ContourScan>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if !contour.closed {
        return Err(Error::InvalidParameter("winding requires a closed contour".into()));
    }
    let cap = cap.min(MAX_CONTOUR_SAMPLES);
    let eval = |v: &ContourVertex, index: usize| -> Result<Complex64> {
        match f(v.point) {
            Ok(w) if w.is_finite() && w.norm() > ZERO_SAMPLE => Ok(w),
            Ok(w) => Err(Error::ZeroOnContour { index, modulus: w.norm() }),
            Err(Error::Pole { .. }) => Err(Error::ZeroOnContour { index, modulus: f64::INFINITY }),
            Err(e) => Err(e),
        }
    };
    let mut vertices = contour.vertices(initial);
    let mut values: Vec<Complex64> = vertices
        .par_iter()
        .enumerate()
        .map(|(i, v)| eval(v, i))
        .collect::<Result<_>>()?;

    loop {
        let n = vertices.len();
        let bad: Vec<usize> = (0..n)
            .filter(|&i| phase_step(values[i], values[(i + 1) % n]).abs() > REFINE_PHASE_JUMP)
            .collect();
        if bad.is_empty() {
            break;
        }
        if n + bad.len() > cap {
            return Err(Error::SampleCap { cap });
        }
        let mids: Vec<ContourVertex> = bad
            .iter()
            .map(|&i| contour.midpoint(&vertices[i], &vertices[(i + 1) % n]))
            .collect();
        let mid_vals: Vec<Complex64> = mids
            .par_iter()
            .enumerate()
            .map(|(k, v)| eval(v, bad[k]))
            .collect::<Result<_>>()?;
        let mut nv = Vec::with_capacity(n + bad.len());
        let mut nval = Vec::with_capacity(n + bad.len());
        let mut b = 0;
        for i in 0..n {
            nv.push(vertices[i]);
            nval.push(values[i]);
            if b < bad.len() && bad[b] == i {
                nv.push(mids[b]);
                nval.push(mid_vals[b]);
                b += 1;
            }
        }
        vertices = nv;
        values = nval;
    }
    let (winding, residual) = winding_number(&values)?;
    Ok(ContourScan { vertices, values, winding, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_circle_samples() {
        let s: Vec<Complex64> = (0..64).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 64.0)).collect();
        let (w, r) = winding_number(&s).unwrap();
        assert_eq!(w, 1);
        assert!(r < 1e-12);
    }

    #[test]
    fn constant_has_no_winding() {
        let s = vec![Complex64::new(1.0, 0.0); 10];
        assert_eq!(winding_number(&s).unwrap(), (0, 0.0));
    }

    #[test]
    fn zero_sample_is_an_error() {
        let s = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)];
        assert!(matches!(winding_number(&s), Err(Error::ZeroOnContour { index: 1, .. })));
    }

    #[test]
    fn coarse_sampling_is_an_error() {
        let s = vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        assert!(matches!(winding_number(&s), Err(Error::InsufficientSampling { .. })));
    }

    #[test]
    fn half_annulus_counts_roots_and_poles() {
        let k = Contour::right_half_annulus(10.0, 0.1).unwrap();
        let f = |l: Complex64| -> Result<Complex64> {
            Ok((l - Complex64::new(2.0, 1.0)) * (l - Complex64::new(3.0, 0.0))
                / ((l - Complex64::new(0.5, -4.0)) * (l + Complex64::new(1.0, 0.0))))
        };
        let scan = winding_adaptive(f, &k, 16, MAX_CONTOUR_SAMPLES).unwrap();
        assert_eq!(scan.winding, 1);
        assert!(scan.residual < 1e-9);
        assert!(scan.vertices.len() > 16);
    }

    #[test]
    fn rectangle_winding_with_refinement() {
        let r = Contour::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap();
        let scan = winding_adaptive(|l| Ok(l.powi(5)), &r, 4, 4096).unwrap();
        assert_eq!(scan.winding, 5);
    }
}
