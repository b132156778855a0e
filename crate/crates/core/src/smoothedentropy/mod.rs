//! Differential entropy of Gaussian-smoothed atomic laws and the gap
//! functional
//!
//! ```text
//! Phi(a) = sup_{t > 0} H(t a xi + G) - H(t xi + G)
//! ```
//!
//! where `xi` has the step law and `G` is a standard Gaussian. Any single `t`
//! gives a lower bound for `Phi(a)`, so the search over `t` affects only how
//! tight a certificate is, never whether it is valid. Tolerances here are
//! quadrature error estimates, not interval-arithmetic bounds.

mod phi;
pub mod quadrature;

pub use phi::{
    c_constant, entropy_lower_bound, phi, CConstantCertificate, CellBound, PhiCertificate, PhiSearch,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::walk::StepDistribution;

/// Default absolute tolerance of each entropy integral.
pub const DEFAULT_QUAD_TOL: f64 = 1e-9;

/// Half-width of the window kept around each atom, in units of `s`.
const WINDOW: f64 = 12.0;

/// Mixture densities below this are treated as zero.
const DENSITY_FLOOR: f64 = 1e-300;

/// `xi` scaled by `t`, smoothed by a centered Gaussian of standard deviation `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedQuery {
    pub nu: StepDistribution,
    pub t: f64,
    pub s: f64,
}

impl SmoothedQuery {
    pub fn new(nu: StepDistribution, t: f64, s: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) || !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "t and s must be positive and finite (t = {t}, s = {s})"
            )));
        }
        Ok(Self { nu, t, s })
    }
}

/// Differential entropy of `N(0, s^2)` in bits.
pub fn gaussian_entropy(s: f64) -> f64 {
    0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * s * s).log2()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub value: f64,
    /// Quadrature error estimate; at most the requested tolerance.
    pub error: f64,
}

/// Atoms of a law scaled by `t`, sorted, with their probabilities.
fn scaled_atoms(nu: &StepDistribution, t: f64) -> (Vec<f64>, Vec<f64>) {
    let mut pairs: Vec<(f64, f64)> = nu
        .atoms_f64()
        .into_iter()
        .map(|x| x * t)
        .zip(nu.probs_f64())
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// `-integral f log2 f` for `f(y) = sum_i p_i phi_s(y - t x_i)`.
pub fn mixture_entropy(q: &SmoothedQuery, quad_tol: f64) -> Result<EntropyEstimate> {
    mixture_entropy_raw(&q.nu, q.t, q.s, quad_tol)
}

pub(crate) fn mixture_entropy_raw(
    nu: &StepDistribution,
    t: f64,
    s: f64,
    quad_tol: f64,
) -> Result<EntropyEstimate> {
    let (centers, weights) = scaled_atoms(nu, t);
    entropy_of_atoms(&centers, &weights, s, quad_tol)
}

/// Differential entropy of `N(0, s^2)` computed by the same quadrature path
/// as [`mixture_entropy`], for checking that path against the closed form.
pub fn gaussian_entropy_by_quadrature(s: f64, quad_tol: f64) -> Result<EntropyEstimate> {
    entropy_of_atoms(&[0.0], &[1.0], s, quad_tol)
}

fn entropy_of_atoms(centers: &[f64], weights: &[f64], s: f64, quad_tol: f64) -> Result<EntropyEstimate> {
    let norm = 1.0 / (s * (2.0 * std::f64::consts::PI).sqrt());
    let inv2s2 = 0.5 / (s * s);
    let reach = WINDOW * s;
    let density = |y: f64| -> f64 {
        // Only atoms within the window contribute above the floor.
        let lo = centers.partition_point(|&c| c < y - reach);
        let hi = centers.partition_point(|&c| c <= y + reach);
        let mut f = 0.0;
        for i in lo..hi {
            let d = y - centers[i];
            f += weights[i] * (-d * d * inv2s2).exp();
        }
        f * norm
    };
    let integrand = |y: f64| -> f64 {
        let f = density(y);
        if f < DENSITY_FLOOR {
            0.0
        } else {
            -f * f.log2()
        }
    };
    // Merge the atom windows into disjoint segments.
    let mut segments: Vec<(f64, f64)> = Vec::new();
    for &c in centers {
        let (a, b) = (c - reach, c + reach);
        match segments.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => segments.push((a, b)),
        }
    }
    let pieces = 8;
    let (value, error) = quadrature::integrate(integrand, &segments, pieces, quad_tol)?;
    Ok(EntropyEstimate { value, error })
}

/// `H(t a xi + G) - H(t xi + G)`, nonnegative for `a >= 1` up to quadrature
/// error.
pub fn smoothed_entropy_gap(nu: &StepDistribution, a: f64, t: f64, quad_tol: f64) -> Result<f64> {
    if !(a > 0.0) || !(t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "a and t must be positive (a = {a}, t = {t})"
        )));
    }
    let hi = mixture_entropy_raw(nu, t * a, 1.0, quad_tol)?;
    let lo = mixture_entropy_raw(nu, t, 1.0, quad_tol)?;
    Ok(hi.value - lo.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        let g1 = gaussian_entropy(1.0);
        assert!((g1 - 2.047_095_585_180_641_3).abs() < 1e-12);
        assert!((gaussian_entropy(2.0) - g1 - 1.0).abs() < 1e-12);
        assert!((gaussian_entropy(0.5) - g1 + 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for s in [0.5, 1.0, 3.0] {
            let h = gaussian_entropy_by_quadrature(s, DEFAULT_QUAD_TOL).unwrap();
            assert!((h.value - gaussian_entropy(s)).abs() < 1e-9);
        }
    }

    #[test]
    fn tiny_t_is_pure_gaussian() {
        let q = SmoothedQuery::new(StepDistribution::fair_coin(), 1e-9, 1.0).unwrap();
        let h = mixture_entropy(&q, DEFAULT_QUAD_TOL).unwrap();
        assert!((h.value - gaussian_entropy(1.0)).abs() < 1e-9);
        assert!(h.error <= DEFAULT_QUAD_TOL);
    }

    #[test]
    fn separated_components_add_one_bit() {
        let q = SmoothedQuery::new(StepDistribution::fair_coin(), 50.0, 1.0).unwrap();
        let h = mixture_entropy(&q, DEFAULT_QUAD_TOL).unwrap();
        assert!((h.value - gaussian_entropy(1.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gap_is_zero_at_a_one() {
        let nu = StepDistribution::fair_coin();
        assert_eq!(smoothed_entropy_gap(&nu, 1.0, 0.7, DEFAULT_QUAD_TOL).unwrap(), 0.0);
    }

    #[test]
    fn gap_vanishes_for_large_t() {
        let nu = StepDistribution::fair_coin();
        let g = smoothed_entropy_gap(&nu, 2.0, 60.0, DEFAULT_QUAD_TOL).unwrap();
        assert!(g.abs() < 2e-9);
    }

    #[test]
    fn invalid_query() {
        assert!(SmoothedQuery::new(StepDistribution::fair_coin(), 0.0, 1.0).is_err());
        assert!(SmoothedQuery::new(StepDistribution::fair_coin(), 1.0, -1.0).is_err());
    }
}
