use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Polynomial reaction term `g(u, v) = Σ a_ij u^i v^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ReactionDoc", from = "ReactionDoc")]
pub struct ReactionTerm {
    monomials: BTreeMap<(u32, u32), f64>,
    parameters: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
struct Monomial {
    i: u32,
    j: u32,
    coeff: f64,
}

// Tuple map keys do not survive TOML or JSON, so monomials go out as a list.
#[derive(Serialize, Deserialize)]
struct ReactionDoc {
    monomials: Vec<Monomial>,
    #[serde(default)]
    parameters: BTreeMap<String, f64>,
}

impl From<ReactionTerm> for ReactionDoc {
    fn from(r: ReactionTerm) -> Self {
        let monomials = r.monomials.iter().map(|(&(i, j), &coeff)| Monomial { i, j, coeff }).collect();
        ReactionDoc { monomials, parameters: r.parameters }
    }
}

impl From<ReactionDoc> for ReactionTerm {
    fn from(d: ReactionDoc) -> Self {
        let mut out = ReactionTerm::new();
        for m in d.monomials {
            out.add_monomial(m.i, m.j, m.coeff);
        }
        out.parameters = d.parameters;
        out
    }
}

fn powi(x: f64, k: u32) -> f64 {
    x.powi(k as i32)
}

impl ReactionTerm {
    pub fn new() -> Self {
        Self { monomials: BTreeMap::new(), parameters: BTreeMap::new() }
    }

    /// Adds `coeff * u^i v^j`, merging with an existing monomial.
    pub fn with_monomial(mut self, i: u32, j: u32, coeff: f64) -> Self {
        self.add_monomial(i, j, coeff);
        self
    }

    pub fn add_monomial(&mut self, i: u32, j: u32, coeff: f64) {
        let entry = self.monomials.entry((i, j)).or_insert(0.0);
        *entry += coeff;
        if *entry == 0.0 {
            self.monomials.remove(&(i, j));
        }
    }

    pub fn with_parameter(mut self, name: &str, value: f64) -> Self {
        self.parameters.insert(name.to_string(), value);
        self
    }

    pub fn monomials(&self) -> &BTreeMap<(u32, u32), f64> {
        &self.monomials
    }

    pub fn parameters(&self) -> &BTreeMap<String, f64> {
        &self.parameters
    }

    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.parameters.get(name).copied()
    }

    pub fn g(&self, u: f64, v: f64) -> f64 {
        self.monomials.iter().map(|(&(i, j), &a)| a * powi(u, i) * powi(v, j)).sum()
    }

    pub fn g_u(&self, u: f64, v: f64) -> f64 {
        self.monomials
            .iter()
            .filter(|(&(i, _), _)| i > 0)
            .map(|(&(i, j), &a)| a * i as f64 * powi(u, i - 1) * powi(v, j))
            .sum()
    }

    pub fn g_v(&self, u: f64, v: f64) -> f64 {
        self.monomials
            .iter()
            .filter(|(&(_, j), _)| j > 0)
            .map(|(&(i, j), &a)| a * j as f64 * powi(u, i) * powi(v, j - 1))
            .sum()
    }

    /// Product of two reaction polynomials.
    pub fn product(&self, other: &ReactionTerm) -> ReactionTerm {
        let mut out = ReactionTerm::new();
        for (&(i, j), &a) in &self.monomials {
            for (&(k, l), &b) in &other.monomials {
                out.add_monomial(i + k, j + l, a * b);
            }
        }
        out.parameters = self.parameters.clone();
        out
    }

    pub fn scaled(&self, s: f64) -> ReactionTerm {
        let mut out = self.clone();
        for a in out.monomials.values_mut() {
            *a *= s;
        }
        out
    }

    /// Ascending coefficients of `v ↦ g(-v, v)`.
    pub fn diagonal_coefficients(&self) -> Vec<f64> {
        let deg = self.monomials.keys().map(|&(i, j)| (i + j) as usize).max().unwrap_or(0);
        let mut out = vec![0.0; deg + 1];
        for (&(i, j), &a) in &self.monomials {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            out[(i + j) as usize] += sign * a;
        }
        out
    }
}

impl Default for ReactionTerm {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> ReactionTerm {
        // 8u³ - 6u² + 2(u + v)
        ReactionTerm::new()
            .with_monomial(3, 0, 8.0)
            .with_monomial(2, 0, -6.0)
            .with_monomial(1, 0, 2.0)
            .with_monomial(0, 1, 2.0)
    }

    #[test]
    fn evaluates_polynomial_and_partials() {
        let g = sample();
        assert_eq!(g.g(1.0, 1.0), 8.0 - 6.0 + 4.0);
        assert_eq!(g.g_u(1.0, 0.0), 24.0 - 12.0 + 2.0);
        assert_eq!(g.g_v(0.3, -5.0), 2.0);
    }

    #[test]
    fn cancelling_monomials_are_dropped() {
        let g = ReactionTerm::new().with_monomial(1, 1, 2.0).with_monomial(1, 1, -2.0);
        assert!(g.monomials().is_empty());
    }

    #[test]
    fn diagonal_restriction() {
        // g = -u(4 - 6v): g(-v, v) = 4v - 6v²
        let g = ReactionTerm::new().with_monomial(1, 0, -4.0).with_monomial(1, 1, 6.0);
        assert_eq!(g.diagonal_coefficients(), vec![0.0, 4.0, -6.0]);
    }

    proptest! {
        #[test]
        fn partials_match_central_differences(u in -2.0..2.0f64, v in -2.0..2.0f64) {
            let g = sample().product(&ReactionTerm::new().with_monomial(0, 1, 1.5).with_monomial(1, 0, -0.5).with_monomial(0, 0, 1.0));
            let h = 1e-5;
            let du = (g.g(u + h, v) - g.g(u - h, v)) / (2.0 * h);
            let dv = (g.g(u, v + h) - g.g(u, v - h)) / (2.0 * h);
            prop_assert!((g.g_u(u, v) - du).abs() < 1e-6 * (1.0 + du.abs()));
            prop_assert!((g.g_v(u, v) - dv).abs() < 1e-6 * (1.0 + dv.abs()));
        }
    }
}
