//! Floating-point brute force over every step sequence, used to cross-check
//! the exact enumeration.

use num_complex::Complex64;

use super::step::StepDistribution;
use crate::error::{Error, Result};

/// Largest number of sequences the oracle will evaluate.
pub const ORACLE_LIMIT: u128 = 1 << 24;

/// One cluster of numerically coincident sums.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub center: Complex64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub clusters: Vec<Cluster>,
    pub gap: f64,
}

impl OracleResult {
    pub fn count(&self) -> usize {
        self.clusters.len()
    }
}

/// Default merge threshold `1e-9 * M^-n`.
pub fn default_gap(mahler: f64, n: usize) -> f64 {
    1e-9 * mahler.max(1.0).powi(-(n as i32))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Evaluates `sum_{i<n} xi_i lambda^i` for every sequence and merges values
/// closer than `gap`. Fails with `ClusterAmbiguity` when two clusters come
/// within `10 * gap` of each other.
pub fn brute_force_oracle(
    lambda: Complex64,
    nu: &StepDistribution,
    n: usize,
    gap: f64,
) -> Result<OracleResult> {
    let total = (nu.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge { count: total });
    }
    let atoms = nu.atoms_f64();
    let probs = nu.probs_f64();
    let mut points = vec![(Complex64::new(0.0, 0.0), 1.0f64)];
    let mut power = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        points = points
            .iter()
            .flat_map(|&(v, p)| {
                atoms
                    .iter()
                    .zip(&probs)
                    .map(move |(&a, &q)| (v + power * a, p * q))
            })
            .collect();
        power *= lambda;
    }
    points.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));

    let mut uf = UnionFind((0..points.len()).collect());
    let mut near = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[j].0.re - points[i].0.re >= 10.0 * gap {
                break;
            }
            let d = (points[j].0 - points[i].0).norm();
            if d < gap {
                uf.union(i, j);
            } else if d < 10.0 * gap {
                near.push((i, j));
            }
        }
    }
    if near.into_iter().any(|(i, j)| uf.find(i) != uf.find(j)) {
        return Err(Error::ClusterAmbiguity);
    }
    let mut sums: std::collections::BTreeMap<usize, (Complex64, f64, usize)> = Default::default();
    for (i, &(z, p)) in points.iter().enumerate() {
        let root = uf.find(i);
        let e = sums.entry(root).or_insert((Complex64::new(0.0, 0.0), 0.0, 0));
        e.0 += z;
        e.1 += p;
        e.2 += 1;
    }
    let clusters = sums
        .into_values()
        .map(|(s, mass, count)| Cluster {
            center: s / count as f64,
            mass,
        })
        .collect();
    Ok(OracleResult { clusters, gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_ten_steps() {
        let r = brute_force_oracle(
            Complex64::new(0.5, 0.0),
            &StepDistribution::fair_coin(),
            10,
            default_gap(2.0, 10),
        )
        .unwrap();
        assert_eq!(r.count(), 1024);
        assert!(r.clusters.iter().all(|c| c.mass == 1.0 / 1024.0));
    }

    #[test]
    fn golden_three_steps() {
        let lam = Complex64::new((5f64.sqrt() - 1.0) / 2.0, 0.0);
        let r = brute_force_oracle(lam, &StepDistribution::fair_coin(), 3, 1e-9).unwrap();
        assert_eq!(r.count(), 7);
        let zero = r.clusters.iter().find(|c| c.center.norm() < 1e-12).unwrap();
        assert_eq!(zero.mass, 0.25);
    }

    #[test]
    fn ambiguity_is_reported() {
        // lambda = 1/2 + 1e-10: sums that coincide at 1/2 now differ by ~1e-10.
        let lam = Complex64::new(0.5 + 1e-10, 0.0);
        let nu = StepDistribution::from_ratios(&[(0, 1), (1, 1), (2, 1)], &[(1, 3), (1, 3), (1, 3)]).unwrap();
        assert_eq!(
            brute_force_oracle(lam, &nu, 3, 5e-11),
            Err(Error::ClusterAmbiguity)
        );
    }

    #[test]
    fn too_large() {
        let nu = StepDistribution::fair_coin();
        assert!(matches!(
            brute_force_oracle(Complex64::new(0.5, 0.0), &nu, 25, 1e-9),
            Err(Error::OracleTooLarge { .. })
        ));
    }
}
