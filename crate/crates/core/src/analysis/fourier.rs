use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numberfield::{power_sums, rational_to_f64, up, AlgebraicContext, ComplexInterval, RootClass};

/// Certificate that the Fourier transform of the fair-coin law stays away
/// from zero along `xi = lambda^-m`, which rules out absolute continuity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityCertificate {
    /// Requested truncation.
    pub n_requested: usize,
    /// Truncation actually used, raised until the tail estimate applies.
    pub n: usize,
    /// Lower bound on `prod_{0<=j<=N} |cos 2 pi u_j| * prod_{1<=j<=N} |cos 2 pi v_-j|`.
    pub truncated_product: f64,
    pub tail_lower_bound: f64,
    pub certified_c: f64,
    /// First index whose factor could not be separated from zero.
    pub factor_near_zero: Option<i64>,
    /// `u_j`, `j = 0..=N`: power sums over the roots inside the unit circle.
    pub u_sequence: Vec<f64>,
    /// `v_j`, `j = -1..=-N`: power sums over the roots outside.
    pub v_sequence: Vec<f64>,
    /// Largest enclosure radius over both sequences.
    pub sequence_error: f64,
    /// `max |u_j + v_j - s_j|` over `0 <= j <= CHECK_TERMS`, with `s_j` exact.
    pub power_sum_residual: f64,
}

const CHECK_TERMS: usize = 20;

/// Enclosure `(value, error)` of `sum z^j` over the given disks.
fn power_sum(disks: &[ComplexInterval], j: usize) -> (f64, f64) {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for d in disks {
        let (_, hi) = d.modulus_bounds();
        let zj = d.center.powi(j as i32);
        sum += zj;
        // |z^j - c^j| <= j (|c| + r)^(j-1) r, plus rounding in powi.
        let jf = j as f64;
        err += jf * hi.powi(j as i32 - 1) * d.radius + 4.0 * (jf + 1.0) * f64::EPSILON * zj.norm();
    }
    // Conjugate pairs make the sum real; the imaginary part is rounding.
    (sum.re, up(err + sum.im.abs(), 2))
}

/// Lower bound on `|cos 2 pi x|` for `x` within `e` of `value`, or `None`
/// when the enclosure contains a zero at `1/4 + k/2`.
fn cos_lower(value: f64, e: f64) -> Option<f64> {
    let (lo, hi) = (value - e, value + e);
    let k = ((lo - 0.25) * 2.0).ceil();
    if 0.25 + k / 2.0 <= hi {
        return None;
    }
    let c = |x: f64| (2.0 * std::f64::consts::PI * x).cos().abs();
    Some((c(lo).min(c(hi)) - 4.0 * f64::EPSILON).max(0.0))
}

/// `sum_{j>n} (theta_j^2 / 2 + theta_j^4)` with `theta_j = 2 pi d q^j`, valid
/// once `theta_{n+1} <= 1/2`.
fn tail_sum(d: usize, q: f64, n: usize) -> f64 {
    let a = 2.0 * std::f64::consts::PI * d as f64;
    let q1 = q.powi(n as i32 + 1);
    let s2 = a * a * q1 * q1 / (1.0 - q * q) / 2.0;
    let s4 = a.powi(4) * q1.powi(4) / (1.0 - q.powi(4));
    up(s2 + s4, 8)
}

/// Lower bound for the limit of `|hat mu(lambda^-m)|` for the fair coin on
/// `{-1, +1}` when `lambda` is a unit with no conjugate on the unit circle.
pub fn fourier_certificate(ctx: &AlgebraicContext, n_terms: usize) -> Result<SingularityCertificate> {
    if !ctx.flags().is_unit {
        return Err(Error::NotUnit);
    }
    if ctx.k_on_circle() > 0 {
        return Err(Error::CircleRootPresent);
    }
    let inside: Vec<ComplexInterval> = ctx.roots_in(RootClass::Inside).copied().collect();
    let outside: Vec<ComplexInterval> = ctx.roots_in(RootClass::Outside).copied().collect();
    if inside.is_empty() || outside.is_empty() {
        return Err(Error::NoContractingRoot);
    }
    let inverted: Vec<ComplexInterval> = outside
        .iter()
        .map(|d| d.inverted().expect("outside roots avoid the origin").conj())
        .collect();
    let alpha = inside.iter().map(|d| d.modulus_bounds().1).fold(0.0, f64::max);
    let beta = inverted.iter().map(|d| d.modulus_bounds().1).fold(0.0, f64::max);
    if !(alpha < 1.0 && beta < 1.0) {
        return Err(Error::PrecisionExhausted { bits: 0 });
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut n = n_terms.max(1);
    while two_pi * inside.len() as f64 * alpha.powi(n as i32 + 1) > 0.5
        || two_pi * outside.len() as f64 * beta.powi(n as i32 + 1) > 0.5
    {
        n += 1;
    }

    let mut log_sum = 0.0;
    let mut near_zero = None;
    let mut u_sequence = Vec::with_capacity(n + 1);
    let mut v_sequence = Vec::with_capacity(n);
    let mut sequence_error = 0.0f64;
    for j in 0..=n {
        let (u, e) = power_sum(&inside, j);
        u_sequence.push(u);
        sequence_error = sequence_error.max(e);
        match cos_lower(u, e) {
            Some(f) if f > 0.0 => log_sum += f.ln(),
            _ => near_zero = near_zero.or(Some(j as i64)),
        }
    }
    for j in 1..=n {
        let (v, e) = power_sum(&inverted, j);
        v_sequence.push(v);
        sequence_error = sequence_error.max(e);
        match cos_lower(v, e) {
            Some(f) if f > 0.0 => log_sum += f.ln(),
            _ => near_zero = near_zero.or(Some(-(j as i64))),
        }
    }
    // Each ln carries a few ulps of rounding.
    let log_sum = log_sum - (2 * n + 1) as f64 * 4.0 * f64::EPSILON * log_sum.abs().max(1.0);
    let tail = tail_sum(inside.len(), alpha, n) + tail_sum(outside.len(), beta, n);
    let (truncated_product, tail_lower_bound, certified_c) = if near_zero.is_some() {
        (0.0, (-tail).exp(), 0.0)
    } else {
        let p = log_sum.exp() * (1.0 - 4.0 * f64::EPSILON);
        let t = (-tail).exp() * (1.0 - 4.0 * f64::EPSILON);
        (p, t, p * t * (1.0 - 2.0 * f64::EPSILON))
    };

    let sums = power_sums(&ctx.poly().to_qpoly(), CHECK_TERMS + 1);
    let power_sum_residual = (0..=CHECK_TERMS.min(n))
        .map(|j| {
            let (u, _) = power_sum(&inside, j);
            let (w, _) = power_sum(&outside, j);
            (u + w - rational_to_f64(&sums[j])).abs()
        })
        .fold(0.0, f64::max);

    Ok(SingularityCertificate {
        n_requested: n_terms,
        n,
        truncated_product,
        tail_lower_bound,
        certified_c,
        factor_near_zero: near_zero,
        u_sequence,
        v_sequence,
        sequence_error,
        power_sum_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::parse_polynomial;

    fn ctx(c: &[i64]) -> AlgebraicContext {
        AlgebraicContext::new(parse_polynomial(c).unwrap()).unwrap()
    }

    #[test]
    fn golden_is_singular() {
        let cert = fourier_certificate(&ctx(&[-1, 1, 1]), 200).unwrap();
        assert!(cert.certified_c > 0.0);
        assert!(cert.factor_near_zero.is_none());
        assert_eq!(cert.u_sequence[0], 1.0);
        assert!(cert.power_sum_residual < 1e-9);
        // v_-1 = 1 / (-phi).
        assert!((cert.v_sequence[0] + 0.618_033_988_749_894_9).abs() < 1e-14);
    }

    #[test]
    fn rejections() {
        assert_eq!(fourier_certificate(&ctx(&[1, 1, 1, -1, 1, 1, 1]), 200), Err(Error::CircleRootPresent));
        assert_eq!(fourier_certificate(&ctx(&[-1, 2]), 200), Err(Error::NotUnit));
    }

    #[test]
    fn cos_zero_detection() {
        assert!(cos_lower(0.25, 1e-12).is_none());
        assert!(cos_lower(-0.75, 1e-12).is_none());
        assert!(cos_lower(0.0, 1e-3).unwrap() > 0.999);
        let f = cos_lower(0.2, 0.01).unwrap();
        assert!((f - (2.0 * std::f64::consts::PI * 0.21).cos()).abs() < 1e-14);
    }

    #[test]
    fn tail_grows_truncation() {
        // Plastic number: inside roots have modulus about 0.87.
        let cert = fourier_certificate(&ctx(&[-1, -1, 0, 1]), 10).unwrap();
        assert!(cert.n > 10);
        assert!(cert.tail_lower_bound > 0.0 && cert.tail_lower_bound <= 1.0);
    }
}
