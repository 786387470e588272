use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ReactionTerm, WaveProfile};

type C = Complex64;

/// Below this `|Re μ|` a far-field solution is treated as non-decaying.
const DECAY_MARGIN: f64 = 1e-12;

/// Piecewise-constant coefficients of `p'' + (g_u - g_u g_v/(λ+g_v) - λ)p = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PencilProblem {
    /// Interface positions, strictly increasing.
    pub jumps: Vec<f64>,
    /// `(g_u, g_v)` per piece; the first and last pieces are the far fields.
    pub pieces: Vec<(f64, f64)>,
}

impl PencilProblem {
    pub fn new(jumps: Vec<f64>, pieces: Vec<(f64, f64)>) -> Result<Self> {
        if pieces.len() != jumps.len() + 1 {
            return Err(Error::InvalidParameter(format!("{} jumps need {} pieces, got {}", jumps.len(), jumps.len() + 1, pieces.len())));
        }
        if jumps.windows(2).any(|w| w[0] >= w[1]) || jumps.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidParameter("jump positions must be finite and strictly increasing".into()));
        }
        Ok(Self { jumps, pieces })
    }

    /// Pencil of a piecewise-constant standing wave, with partials at `(u₋, v_k)`.
    pub fn from_wave(rt: &ReactionTerm, wp: &WaveProfile) -> Result<Self> {
        let pw = wp.piecewise_data().ok_or(Error::WrongProfileKind { expected: "piecewise" })?;
        if wp.d != 0.0 || wp.c != 0.0 {
            return Err(Error::InconsistentCase(format!("pencil needs D = c = 0, got D = {}, c = {}", wp.d, wp.c)));
        }
        let pieces = pw.values.iter().map(|&v| (rt.g_u(pw.u_minus, v), rt.g_v(pw.u_minus, v))).collect();
        Self::new(pw.jumps.clone(), pieces)
    }

    pub fn far_minus(&self) -> (f64, f64) {
        self.pieces[0]
    }

    pub fn far_plus(&self) -> (f64, f64) {
        *self.pieces.last().expect("at least one piece")
    }
}

fn coefficient(gu: f64, gv: f64, lambda: C) -> Result<C> {
    let den = lambda + gv;
    if den.norm() <= 1e-14 * (1.0 + gv.abs()) {
        return Err(Error::Pole { lambda });
    }
    Ok(gu - gu * gv / den - lambda)
}

/// Per-piece coefficient `g_u - g_u g_v/(λ+g_v) - λ`.
pub fn pencil_reduce(pp: &PencilProblem, lambda: C) -> Result<Vec<C>> {
    pp.pieces.iter().map(|&(gu, gv)| coefficient(gu, gv, lambda)).collect()
}

/// Decay rate `μ` with `Re μ > 0` for `μ² = -coeff`.
fn decay_rate(coeff: C, lambda: C) -> Result<C> {
    let mu = (-coeff).sqrt();
    if mu.re <= DECAY_MARGIN {
        return Err(Error::EssentialSpectrum { lambda, detail: format!("far-field rate {mu} is not decaying") });
    }
    Ok(mu)
}

/// `cosh(μℓ)` and `sinh(μℓ)/μ` as entire functions of `μ²`.
fn transfer_entries(mu2: C, ell: f64) -> (C, C) {
    if mu2.norm() * ell * ell < 1e-16 {
        return (C::new(1.0, 0.0) + mu2 * ell * ell / 2.0, C::new(ell, 0.0) * (1.0 + mu2 * ell * ell / 6.0));
    }
    let mu = mu2.sqrt();
    ((mu * ell).cosh(), (mu * ell).sinh() / mu)
}

/// Mismatch `p' + μ₊p` at the last interface of the solution decaying at `-∞`.
///
/// Starts from `(1, μ₋)` at the first interface (or at 0 with no interfaces)
/// and crosses each interior piece with its cosh/sinh transfer matrix.
pub fn piecewise_evans(pp: &PencilProblem, lambda: C) -> Result<C> {
    let coeffs = pencil_reduce(pp, lambda)?;
    let mu_minus = decay_rate(coeffs[0], lambda)?;
    let mu_plus = decay_rate(*coeffs.last().expect("at least one piece"), lambda)?;
    let (mut p, mut dp) = (C::new(1.0, 0.0), mu_minus);
    for k in 1..coeffs.len().saturating_sub(1) {
        let mu2 = -coeffs[k];
        let (ch, sh_mu) = transfer_entries(mu2, pp.jumps[k] - pp.jumps[k - 1]);
        (p, dp) = (ch * p + sh_mu * dp, mu2 * sh_mu * p + ch * dp);
    }
    Ok(dp + mu_plus * p)
}

/// True when `g_u g_v` has one strict sign on every piece, forcing real eigenvalues.
pub fn realness_certificate(pp: &PencilProblem) -> bool {
    if pp.pieces.len() == 1 {
        return true;
    }
    let signs: Vec<f64> = pp.pieces.iter().map(|&(gu, gv)| gu * gv).collect();
    signs.iter().all(|&s| s > 0.0) || signs.iter().all(|&s| s < 0.0)
}

/// Real `λ` with `λ(λ+g_v-g_u)/(λ+g_v) ≤ 0`, as closed intervals (the lowest unbounded).
///
/// These are the real points where the far-field matrix has an imaginary
/// eigenvalue. The pole `-g_v` appears as an endpoint though it is excluded.
pub fn pencil_essential_intervals(gu: f64, gv: f64) -> Vec<(f64, f64)> {
    let mut marks = vec![0.0, gu - gv, -gv];
    marks.sort_by(f64::total_cmp);
    marks.dedup();
    let ratio = |x: f64| x * (x + gv - gu) / (x + gv);
    let mut edges = vec![f64::NEG_INFINITY];
    edges.extend(&marks);
    edges.push(f64::INFINITY);
    let mut out: Vec<(f64, f64)> = Vec::new();
    for w in edges.windows(2) {
        let mid = match (w[0].is_finite(), w[1].is_finite()) {
            (false, _) => w[1] - 1.0,
            (_, false) => w[0] + 1.0,
            _ => 0.5 * (w[0] + w[1]),
        };
        if ratio(mid) <= 0.0 {
            match out.last_mut() {
                Some(last) if last.1 == w[0] && w[0] != -gv => last.1 = w[1],
                _ => out.push((w[0], w[1])),
            }
        }
    }
    out
}

/// Union of the essential-spectrum intervals of both far fields.
pub fn pencil_essential_spectrum(pp: &PencilProblem) -> Vec<(f64, f64)> {
    let (a, b) = (pp.far_minus(), pp.far_plus());
    let mut all = pencil_essential_intervals(a.0, a.1);
    if a != b {
        all.extend(pencil_essential_intervals(b.0, b.1));
    }
    all.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    all
}

pub fn in_intervals(x: f64, intervals: &[(f64, f64)]) -> bool {
    intervals.iter().any(|&(a, b)| a <= x && x <= b)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("gamma must lie in (0, 1), got {gamma}")))
    }
}

fn real_essential(lambda: C, sets: &[(f64, f64)]) -> Result<()> {
    if lambda.im == 0.0 && in_intervals(lambda.re, sets) {
        return Err(Error::EssentialSpectrum { lambda, detail: "on the real essential spectrum".into() });
    }
    Ok(())
}

/// Even-mode matching function of the standing pulse on `[-L, L]`.
pub fn evans_example3(lambda: C, gamma: f64, half_width: f64) -> Result<C> {
    check_gamma(gamma)?;
    real_essential(lambda, &pencil_essential_intervals(-1.0, gamma))?;
    for gv in [gamma, 1.0 - gamma] {
        if lambda == C::new(-gv, 0.0) {
            return Err(Error::Pole { lambda });
        }
    }
    let s = lambda.sqrt();
    let outer = (1.0 + 1.0 / (lambda + gamma)).sqrt();
    let inner = (1.0 + 1.0 / (lambda + 1.0 - gamma)).sqrt();
    Ok(s * (outer + inner * (s * half_width * inner).tanh()))
}

/// `λ(2 + 1/(λ+1-γ) + 1/(λ+γ))` for the standing front.
///
/// Rational, so it is evaluated on the essential spectrum too; the two
/// nonzero roots are embedded there.
pub fn evans_example4(lambda: C, gamma: f64) -> Result<C> {
    check_gamma(gamma)?;
    for gv in [gamma, 1.0 - gamma] {
        if lambda == C::new(-gv, 0.0) {
            return Err(Error::Pole { lambda });
        }
    }
    Ok(lambda * (2.0 + 1.0 / (lambda + 1.0 - gamma) + 1.0 / (lambda + gamma)))
}

/// `{0, -1 ± (√2/2)√(γ² + (γ-1)²)}`, descending.
pub fn example4_roots(gamma: f64) -> Result<[f64; 3]> {
    check_gamma(gamma)?;
    let r = 0.5 * 2f64.sqrt() * (gamma * gamma + (gamma - 1.0).powi(2)).sqrt();
    Ok([0.0, -1.0 + r, -1.0 - r])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootEntry {
    pub lambda: C,
    pub embedded: bool,
}

/// Serializable summary of a closed-form spectral computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormReport {
    pub roots: Vec<RootEntry>,
    pub poles: Vec<C>,
    pub essential_spectrum: Vec<(f64, f64)>,
}

impl ClosedFormReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Report for the standing front: formula roots, poles, and essential intervals.
pub fn example4_report(gamma: f64) -> Result<ClosedFormReport> {
    let mut ess = pencil_essential_intervals(-1.0, gamma);
    ess.extend(pencil_essential_intervals(-1.0, 1.0 - gamma));
    let roots = example4_roots(gamma)?
        .iter()
        .map(|&x| RootEntry { lambda: C::new(x, 0.0), embedded: in_intervals(x, &ess) })
        .collect();
    Ok(ClosedFormReport { roots, poles: vec![C::new(-gamma, 0.0), C::new(gamma - 1.0, 0.0)], essential_spectrum: ess })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex3(gamma: f64, l: f64) -> PencilProblem {
        PencilProblem::new(vec![-l, l], vec![(-1.0, gamma), (-1.0, 1.0 - gamma), (-1.0, gamma)]).unwrap()
    }

    #[test]
    fn coefficients_and_poles() {
        let pp = ex3(0.3, 1.0);
        let lam = C::new(0.7, 0.2);
        let k = pencil_reduce(&pp, lam).unwrap();
        assert!((k[0] - (-1.0 + 0.3 / (lam + 0.3) - lam)).norm() < 1e-15);
        assert!(matches!(pencil_reduce(&pp, C::new(-0.3, 0.0)), Err(Error::Pole { .. })));
        let big = C::new(1e8, 0.0);
        assert!((pencil_reduce(&pp, big).unwrap()[1] / big + 1.0).norm() < 1e-7);
    }

    #[test]
    fn essential_intervals_match_display() {
        let g = 0.3;
        assert_eq!(pencil_essential_intervals(-1.0, g), vec![(f64::NEG_INFINITY, -1.0 - g), (-g, 0.0)]);
        assert_eq!(pencil_essential_intervals(-1.0, 1.0 - g), vec![(f64::NEG_INFINITY, -2.0 + g), (-1.0 + g, 0.0)]);
    }

    #[test]
    fn pulse_factorises_into_even_and_odd_modes() {
        let (g, l) = (0.3, 2.0);
        let pp = ex3(g, l);
        for lam in [C::new(1.0, 0.0), C::new(0.4, 0.9), C::new(-0.5, 0.3)] {
            let e = piecewise_evans(&pp, lam).unwrap();
            let mu_o = (lam * (1.0 + 1.0 / (lam + g))).sqrt();
            let mu_i = (lam * (1.0 + 1.0 / (lam + 1.0 - g))).sqrt();
            let odd = mu_o + mu_i / (mu_i * l).tanh();
            let factor = (2.0 * mu_i * l).sinh() / mu_i;
            let even = evans_example3(lam, g, l).unwrap();
            assert!((e - factor * even * odd).norm() < 1e-10 * e.norm(), "{lam}");
        }
    }

    #[test]
    fn example4_formula_and_roots() {
        let r = example4_roots(0.5).unwrap();
        assert!((r[1] + 0.5).abs() < 1e-15 && (r[2] + 1.5).abs() < 1e-15);
        for g in [0.1, 0.3, 0.7, 0.9] {
            let r = example4_roots(g).unwrap();
            assert!(r[1] < 0.0 && r[2] < 0.0);
            let rep = example4_report(g).unwrap();
            assert!(rep.roots[1].embedded && rep.roots[2].embedded);
        }
        for g in [0.2, 0.35, 0.8] {
            for x in example4_roots(g).unwrap() {
                assert!(evans_example4(C::new(x, 0.0), g).unwrap().norm() < 1e-12);
            }
        }
        assert!(matches!(evans_example4(C::new(-0.3, 0.0), 0.3), Err(Error::Pole { .. })));
    }

    #[test]
    fn realness() {
        assert!(realness_certificate(&ex3(0.3, 1.0)));
        let mixed = PencilProblem::new(vec![0.0], vec![(1.0, 1.0), (1.0, -1.0)]).unwrap();
        assert!(!realness_certificate(&mixed));
        assert!(realness_certificate(&PencilProblem::new(vec![], vec![(2.0, 0.0)]).unwrap()));
    }

    #[test]
    fn zero_coefficient_piece_uses_linear_limit() {
        // λ(λ+g_v-g_u)/(λ+g_v) = 0 inside with λ = g_u - g_v.
        let pp = PencilProblem::new(vec![0.0, 1.5], vec![(-1.0, 1.0), (-1.0, 0.5), (-1.0, 1.0)]).unwrap();
        let lam = C::new(-1.5, 0.0);
        assert_eq!(pencil_reduce(&pp, lam).unwrap()[1], C::new(0.0, 0.0));
        let e = piecewise_evans(&pp, lam).unwrap();
        let mu = decay_rate(pencil_reduce(&pp, lam).unwrap()[0], lam).unwrap();
        let expected = mu * (1.0 + 1.5 * mu) + mu;
        assert!((e - expected).norm() < 1e-12);
    }
}
