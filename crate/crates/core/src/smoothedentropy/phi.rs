use rayon::prelude::*;
use serde::Serialize;

use super::{smoothed_entropy_gap, DEFAULT_QUAD_TOL};
use crate::error::{Error, Result};
use crate::numberfield::up;
use crate::walk::StepDistribution;

/// How `phi` searches over the scale `t`: a coarse geometric grid followed by
/// golden-section refinement around the best grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiSearch {
    pub t_lo: f64,
    pub t_hi: f64,
    pub coarse_points: usize,
    /// Stop refining once the bracket is this narrow relative to `t`.
    pub rel_width: f64,
    pub quad_tol: f64,
}

impl Default for PhiSearch {
    fn default() -> Self {
        Self {
            t_lo: 2f64.powi(-10),
            t_hi: 2f64.powi(10),
            coarse_points: 81,
            rel_width: 1e-4,
            quad_tol: DEFAULT_QUAD_TOL,
        }
    }
}

impl PhiSearch {
    pub fn with_tol(quad_tol: f64) -> Self {
        Self {
            quad_tol,
            ..Self::default()
        }
    }
}

/// A lower bound for `Phi(a)` witnessed by one scale `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiCertificate {
    pub a: f64,
    /// Best gap found minus twice the quadrature tolerance, clipped at zero.
    pub value: f64,
    pub witness_t: f64,
    pub quad_tol: f64,
    /// The best gap itself, an estimate of `Phi(a)` that is not certified.
    pub upper_hint: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Certified lower bound for `Phi(a)`, `a > 1`.
pub fn phi(nu: &StepDistribution, a: f64, search: &PhiSearch) -> Result<PhiCertificate> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("phi needs a > 1, got {a}")));
    }
    if !(search.t_lo > 0.0 && search.t_hi > search.t_lo && search.coarse_points >= 3) {
        return Err(Error::InvalidArgument("bad t-search range".into()));
    }
    let tol = search.quad_tol;
    let gap = |t: f64| smoothed_entropy_gap(nu, a, t, tol);

    let steps = search.coarse_points - 1;
    let log_lo = search.t_lo.ln();
    let log_step = (search.t_hi.ln() - log_lo) / steps as f64;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| (log_lo + log_step * i as f64).exp())
        .collect();
    let values = grid.iter().map(|&t| gap(t)).collect::<Result<Vec<_>>>()?;
    let (best_i, _) = values
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty grid");
    let mut best_t = grid[best_i];
    let mut best = values[best_i];

    // Golden-section search on the neighbouring bracket.
    let mut lo = grid[best_i.saturating_sub(1)];
    let mut hi = grid[(best_i + 1).min(steps)];
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = gap(x1)?;
    let mut f2 = gap(x2)?;
    while (hi - lo) > search.rel_width * best_t {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = gap(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = gap(x2)?;
        }
        for (x, f) in [(x1, f1), (x2, f2)] {
            if f > best {
                best = f;
                best_t = x;
            }
        }
    }
    Ok(PhiCertificate {
        a,
        value: (best - 2.0 * tol).max(0.0),
        witness_t: best_t,
        quad_tol: tol,
        upper_hint: best,
    })
}

/// Bound on `Phi(a) / log2(a)` valid over one cell `[a_lo, a_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellBound {
    pub a_lo: f64,
    pub a_hi: f64,
    pub phi_lo: f64,
    pub witness_t: f64,
    pub bound: f64,
}

/// Certified lower bound on `min_{sqrt 2 <= a <= 2} Phi(a) / log2(a)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CConstantCertificate {
    pub grid: Vec<f64>,
    pub cells: Vec<CellBound>,
    pub c_lower: f64,
    pub quad_tol: f64,
}

/// Covers `[sqrt 2, 2]` with `cells` equal cells. On each cell `Phi` is at
/// least its value at the left end and `log2 a` at most its value at the
/// right end, both by monotonicity.
pub fn c_constant(nu: &StepDistribution, cells: usize, search: &PhiSearch) -> Result<CConstantCertificate> {
    if cells < 8 {
        return Err(Error::InvalidArgument(format!(
            "need at least 8 cells, got {cells}"
        )));
    }
    // Start just below sqrt 2 so that rounding cannot leave a gap.
    let start = f64::from_bits(std::f64::consts::SQRT_2.to_bits() - 1);
    let width = (2.0 - start) / cells as f64;
    let grid: Vec<f64> = (0..=cells)
        .map(|k| if k == cells { 2.0 } else { start + width * k as f64 })
        .collect();
    let cells: Vec<CellBound> = grid
        .par_windows(2)
        .map(|w| {
            let cert = phi(nu, w[0], search)?;
            Ok(CellBound {
                a_lo: w[0],
                a_hi: w[1],
                phi_lo: cert.value,
                witness_t: cert.witness_t,
                bound: cert.value / up(w[1].log2(), 2),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let c_lower = cells.iter().map(|c| c.bound).fold(f64::INFINITY, f64::min);
    Ok(CConstantCertificate {
        grid,
        cells,
        c_lower,
        quad_tol: search.quad_tol,
    })
}

/// `c * min(1, log2 M)`, the entropy lower bound implied by `Phi`.
pub fn entropy_lower_bound(mahler: f64, c: f64) -> Result<f64> {
    if !(mahler >= 1.0) {
        return Err(Error::InvalidArgument(format!("Mahler measure {mahler} < 1")));
    }
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::InvalidArgument(format!("c = {c} outside (0, 1]")));
    }
    Ok(c * mahler.log2().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_bound_examples() {
        assert_eq!(entropy_lower_bound(2.0, 0.44).unwrap(), 0.44);
        assert_eq!(entropy_lower_bound(1.0, 0.44).unwrap(), 0.0);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let v = entropy_lower_bound(golden, 0.44).unwrap();
        assert!((v - 0.44 * 0.694_241_913_630_617_3).abs() < 1e-12);
        assert!((v - 0.3055).abs() < 1e-4);
        assert!(entropy_lower_bound(0.5, 0.44).is_err());
        assert!(entropy_lower_bound(2.0, 1.5).is_err());
    }

    #[test]
    fn phi_near_one_is_tiny() {
        let c = phi(&StepDistribution::fair_coin(), 1.0 + 1e-9, &PhiSearch::default()).unwrap();
        assert!(c.value < 1e-8);
        assert!(c.value >= 0.0);
    }

    #[test]
    fn phi_at_two() {
        let c = phi(&StepDistribution::fair_coin(), 2.0, &PhiSearch::default()).unwrap();
        assert!(c.value >= 0.44);
        let check = smoothed_entropy_gap(&StepDistribution::fair_coin(), 2.0, c.witness_t, 1e-11).unwrap();
        assert!((check - c.upper_hint).abs() < 4e-9);
    }

    #[test]
    fn rejects_small_a_and_few_cells() {
        let nu = StepDistribution::fair_coin();
        assert!(phi(&nu, 1.0, &PhiSearch::default()).is_err());
        assert!(c_constant(&nu, 4, &PhiSearch::default()).is_err());
    }
}
