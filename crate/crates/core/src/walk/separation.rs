use num_complex::Complex64;
use serde::Serialize;

use super::level::{level_at, WalkLevel};
use super::step::StepDistribution;
use crate::error::{Error, Result};
use crate::numberfield::{rational_to_f64, AlgebraicContext, ComplexInterval, RootClass};

/// Minimum distance between distinct support points of `mu^(n)` under the
/// embedding given by the contracting roots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Separation {
    pub n: usize,
    /// Computed minimum pairwise distance.
    pub value: f64,
    /// Certified lower bound after subtracting evaluation error.
    pub lower_bound: f64,
    /// Bound on the evaluation error of any single embedded point.
    pub eval_error: f64,
    /// `value * M^n` using the lower Mahler endpoint.
    pub fitted_c: f64,
    /// Number of complex coordinates in the embedding.
    pub embedding_dim: usize,
}

/// Roots used to embed the field: the real root of largest modulus inside the
/// unit disk when there is one, else every inside root in the upper half
/// plane (one per conjugate pair).
pub fn embedding_roots(ctx: &AlgebraicContext) -> Result<Vec<ComplexInterval>> {
    let inside: Vec<(usize, &ComplexInterval)> = ctx
        .roots()
        .iter()
        .enumerate()
        .filter(|(i, _)| ctx.classes()[*i] == RootClass::Inside)
        .collect();
    if inside.is_empty() {
        return Err(Error::NoContractingRoot);
    }
    let real = ctx.real_root_indices();
    if let Some((_, r)) = inside
        .iter()
        .filter(|(i, _)| real.contains(i))
        .max_by(|a, b| a.1.center.norm().total_cmp(&b.1.center.norm()))
    {
        return Ok(vec![ComplexInterval {
            center: Complex64::new(r.center.re, 0.0),
            radius: r.radius,
        }]);
    }
    Ok(inside
        .into_iter()
        .filter(|(_, r)| r.center.im > 0.0)
        .map(|(_, r)| *r)
        .collect())
}

fn embed(level: &WalkLevel, roots: &[ComplexInterval]) -> (Vec<Vec<Complex64>>, f64) {
    let mut points = Vec::with_capacity(level.support_size());
    let mut max_err = 0.0f64;
    for (key, _) in level.raw() {
        let coeffs: Vec<f64> = key
            .iter()
            .map(|c| rational_to_f64(&num_rational::BigRational::new(c.clone(), level.scale().clone())))
            .collect();
        let mut point = Vec::with_capacity(roots.len());
        let mut err2 = 0.0;
        for root in roots {
            let z = root.center;
            let m = z.norm() + root.radius;
            let value = coeffs
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
            let k_max = coeffs.len() as f64;
            let mut err = 0.0;
            for (k, c) in coeffs.iter().enumerate() {
                let ca = c.abs();
                if k > 0 {
                    err += ca * k as f64 * m.powi(k as i32 - 1) * root.radius;
                }
                err += ca * m.powi(k as i32) * (2.0 * k_max + 4.0) * f64::EPSILON;
            }
            err2 += err * err;
            point.push(value);
        }
        max_err = max_err.max(err2.sqrt());
        points.push(point);
    }
    (points, max_err)
}

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Minimum pairwise distance of a point set, by a sweep over the first real
/// coordinate.
pub(crate) fn min_pairwise_distance(points: &mut [Vec<Complex64>]) -> f64 {
    points.sort_by(|a, b| a[0].re.total_cmp(&b[0].re));
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[j][0].re - points[i][0].re >= best {
                break;
            }
            best = best.min(dist(&points[i], &points[j]));
        }
    }
    best
}

/// Minimum distance between distinct support points of `mu^(n)`.
pub fn min_separation(
    ctx: &AlgebraicContext,
    nu: &StepDistribution,
    n: usize,
    budget: usize,
) -> Result<Separation> {
    let roots = embedding_roots(ctx)?;
    let level = level_at(ctx.poly(), nu, n, budget)?;
    let (mut points, eval_error) = embed(&level, &roots);
    let value = min_pairwise_distance(&mut points);
    if !value.is_finite() {
        return Err(Error::InvalidArgument("support has a single point".into()));
    }
    let mahler = ctx.mahler().lo;
    Ok(Separation {
        n,
        value,
        lower_bound: (value - 2.0 * eval_error).max(0.0),
        eval_error,
        fitted_c: value * mahler.powi(n as i32),
        embedding_dim: roots.len(),
    })
}
