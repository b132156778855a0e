use serde::Serialize;

use crate::error::{Error, Result};
use crate::numberfield::{down, up, AlgebraicContext, Interval};
use crate::smoothedentropy::entropy_lower_bound;
use crate::walk::{growth_sequences, StepDistribution};

/// The published lower bound for `Phi(a) / log2(a)` on `[sqrt 2, 2]`.
pub const PUBLISHED_C: f64 = 0.44;

/// Where the constant `c` in an entropy lower bound came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CProvenance {
    Published,
    Certified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionBracket {
    pub lambda_value: f64,
    /// `log2(1 / lambda)`.
    pub log_inv_lambda: f64,
    pub h_lower: f64,
    pub h_upper: f64,
    pub dim_lower: f64,
    pub dim_upper: f64,
    pub n_max: usize,
    pub c_used: f64,
    pub c_provenance: CProvenance,
    /// Every level up to `n_max` had full support.
    pub free_through_n_max: bool,
}

/// Largest real root certified to lie in `[lo, 1)` (or `(lo, 1)` when
/// `closed_lo` is false), returned as an enclosure.
pub fn designated_root(ctx: &AlgebraicContext, lo: f64, closed_lo: bool) -> Option<Interval> {
    ctx.real_root_indices()
        .into_iter()
        .map(|i| {
            let r = ctx.roots()[i];
            let x = r.center.re;
            let slack = if r.radius == 0.0 { 0.0 } else { x.abs() * 2.0 * f64::EPSILON };
            Interval {
                lo: x - r.radius - slack,
                hi: x + r.radius + slack,
            }
        })
        .filter(|iv| iv.hi < 1.0 && if closed_lo { iv.lo >= lo } else { iv.lo > lo })
        .max_by(|a, b| a.hi.total_cmp(&b.hi))
}

fn midpoint(iv: Interval) -> f64 {
    0.5 * (iv.lo + iv.hi)
}

/// Brackets the dimension of the law of `sum xi_i lambda^i` for the real root
/// `lambda` in `[1/2, 1)` between `h_lower / log2(1/lambda)` and
/// `h_upper / log2(1/lambda)`, both capped at 1.
pub fn dimension_bracket(
    ctx: &AlgebraicContext,
    nu: &StepDistribution,
    n_max: usize,
    c_used: f64,
    c_provenance: CProvenance,
    budget: usize,
) -> Result<DimensionBracket> {
    let lambda = designated_root(ctx, 0.5, true).ok_or(Error::NoRealRootInRange { range: "[1/2, 1)" })?;
    let report = growth_sequences(ctx.poly(), nu, n_max, budget)?;
    let h_upper = report.h_upper;
    let h_lower = entropy_lower_bound(ctx.mahler().lo, c_used)?;
    // log2(1/lambda) is largest at lambda.lo, which makes the lower dimension smallest.
    let log_hi = up(-lambda.lo.log2(), 2);
    let log_lo = down(-lambda.hi.log2(), 2);
    let dim_lower = (down(h_lower / log_hi, 1)).min(1.0);
    let dim_upper = (up(h_upper / log_lo, 1)).min(1.0);
    Ok(DimensionBracket {
        lambda_value: midpoint(lambda),
        log_inv_lambda: -midpoint(lambda).log2(),
        h_lower,
        h_upper,
        dim_lower,
        dim_upper,
        n_max,
        c_used,
        c_provenance,
        free_through_n_max: report.last().is_some_and(|r| r.free_so_far) && !report.truncated,
    })
}

/// `min(M, 2)^(-c) <= lambda` for the largest real root in `(0, 1)`, tested
/// with the endpoints of both enclosures that make it hardest to pass.
pub fn full_dimension_test(ctx: &AlgebraicContext) -> Result<bool> {
    let lambda = designated_root(ctx, 0.0, false).ok_or(Error::NoRealRootInRange { range: "(0, 1)" })?;
    let m = ctx.mahler().lo.min(2.0);
    let threshold = up(m.powf(-PUBLISHED_C), 2);
    Ok(threshold <= lambda.lo)
}

/// `M < 2` certified and no conjugate on the unit circle.
pub fn strictness_applicable(ctx: &AlgebraicContext) -> bool {
    ctx.mahler().hi < 2.0 && ctx.k_on_circle() == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::parse_polynomial;
    use crate::walk::DEFAULT_BUDGET;

    fn ctx(c: &[i64]) -> AlgebraicContext {
        AlgebraicContext::new(parse_polynomial(c).unwrap()).unwrap()
    }

    #[test]
    fn large_mahler_gives_full_dimension() {
        let c = ctx(&[-99, 100]);
        let b = dimension_bracket(&c, &StepDistribution::fair_coin(), 8, PUBLISHED_C, CProvenance::Published, DEFAULT_BUDGET).unwrap();
        assert!((b.lambda_value - 0.99).abs() < 1e-15);
        assert_eq!(b.h_lower, 0.44);
        assert_eq!(b.dim_lower, 1.0);
        assert_eq!(b.dim_upper, 1.0);
        assert!(full_dimension_test(&c).unwrap());
    }

    #[test]
    fn golden_bracket() {
        let c = ctx(&[-1, 1, 1]);
        let b = dimension_bracket(&c, &StepDistribution::fair_coin(), 12, PUBLISHED_C, CProvenance::Published, DEFAULT_BUDGET).unwrap();
        assert!((b.log_inv_lambda - 0.694_241_913_630_617_3).abs() < 1e-12);
        assert!((b.dim_lower - 0.44).abs() < 1e-12);
        assert!(b.h_upper > b.h_lower);
        assert!(b.dim_lower <= b.dim_upper);
        assert!(!b.free_through_n_max);
        assert!(!full_dimension_test(&c).unwrap());
        assert!(strictness_applicable(&c));
    }

    #[test]
    fn dyadic_bracket() {
        let c = ctx(&[-1, 2]);
        let b = dimension_bracket(&c, &StepDistribution::fair_coin(), 10, PUBLISHED_C, CProvenance::Published, DEFAULT_BUDGET).unwrap();
        assert_eq!(b.lambda_value, 0.5);
        assert!((b.dim_lower - 0.44).abs() < 1e-12);
        assert_eq!(b.dim_upper, 1.0);
        assert!(b.free_through_n_max);
        assert!(!strictness_applicable(&c));
    }

    #[test]
    fn ninety_percent_with_mahler_two() {
        // 10x - 9 has M = 10, so min(M, 2) = 2.
        assert!(full_dimension_test(&ctx(&[-9, 10])).unwrap());
    }

    #[test]
    fn no_root_in_range() {
        let c = ctx(&[-1, 3]);
        assert!(matches!(
            dimension_bracket(&c, &StepDistribution::fair_coin(), 4, PUBLISHED_C, CProvenance::Published, DEFAULT_BUDGET),
            Err(Error::NoRealRootInRange { .. })
        ));
        assert!(matches!(full_dimension_test(&ctx(&[-1, 1])), Err(Error::NoRealRootInRange { .. })));
    }

    #[test]
    fn mercat_not_strict() {
        assert!(!strictness_applicable(&ctx(&[1, 1, 1, -1, 1, 1, 1])));
        assert!(!strictness_applicable(&ctx(&[-2, 1])));
    }
}
