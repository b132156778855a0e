use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::level::{advance_level, shannon_entropy, Key, StableHasher, WalkLevel};
use super::step::StepDistribution;
use crate::error::{Error, Result};
use crate::numberfield::{power_residues, AlgebraicContext, IntPolynomial, RootClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GrowthKind {
    /// Support and entropy of the random walk.
    RandomWalk,
    /// Ball growth of the semigroup generated by `x -> lambda x + a`, which
    /// for the fair coin coincides with the support growth of the walk.
    SemigroupBall,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub supp_size: usize,
    pub h_bits: f64,
    pub h_over_n: f64,
    pub log2_supp_over_n: f64,
    pub free_so_far: bool,
}

/// Per-step support sizes and entropies, with the running minima of the
/// normalized sequences. By subadditivity each running minimum is an upper
/// bound for the corresponding limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub kind: GrowthKind,
    pub rows: Vec<GrowthRow>,
    pub rho_upper: f64,
    pub h_upper: f64,
    /// True when the memory budget stopped enumeration before `n_max`.
    pub truncated: bool,
}

impl GrowthReport {
    pub fn last(&self) -> Option<&GrowthRow> {
        self.rows.last()
    }

    pub fn row(&self, n: usize) -> Option<&GrowthRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// Enumerates levels `1..=n_max`. Hitting the budget truncates the report
/// instead of failing, since every completed row is still a valid bound.
pub fn growth_sequences(
    poly: &IntPolynomial,
    nu: &StepDistribution,
    n_max: usize,
    budget: usize,
) -> Result<GrowthReport> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    if !poly.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let atoms = nu.len() as f64;
    let mut level = WalkLevel::initial(poly, nu);
    let mut rows = Vec::with_capacity(n_max);
    let mut free = true;
    let mut truncated = false;
    for n in 1..=n_max {
        level = match advance_level(poly, nu, &level, budget) {
            Ok(l) => l,
            Err(Error::MemoryBudgetExceeded { .. }) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let supp = level.support_size();
        free &= (supp as f64) == atoms.powi(n as i32);
        let h = shannon_entropy(&level);
        rows.push(GrowthRow {
            n,
            supp_size: supp,
            h_bits: h,
            h_over_n: h / n as f64,
            log2_supp_over_n: (supp as f64).log2() / n as f64,
            free_so_far: free,
        });
    }
    let min = |f: fn(&GrowthRow) -> f64| rows.iter().map(f).fold(f64::INFINITY, f64::min);
    Ok(GrowthReport {
        kind: GrowthKind::RandomWalk,
        rho_upper: min(|r| r.log2_supp_over_n),
        h_upper: min(|r| r.h_over_n),
        rows,
        truncated,
    })
}

/// Result of [`is_free_up_to`].
#[derive(Debug, Clone, PartialEq)]
pub struct Freeness {
    pub free: bool,
    /// Largest `m` for which the support had full size.
    pub free_through: usize,
    /// Two distinct step sequences with the same sum, when not free.
    pub witness: Option<(Vec<BigRational>, Vec<BigRational>)>,
}

/// Checks that all `atoms^m` step sequences of length `m <= n` give distinct
/// sums. On the first collision both sequences are returned.
pub fn is_free_up_to(
    ctx: &AlgebraicContext,
    nu: &StepDistribution,
    n: usize,
    budget: usize,
) -> Result<Freeness> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if ctx.count(RootClass::Inside) == 0 {
        return Err(Error::NoContractingRoot);
    }
    let poly = ctx.poly();
    let powers = power_residues(poly, n);
    // Common denominator of a * lambda^i over all atoms and i < n.
    let scale = powers
        .iter()
        .flat_map(|p| p.residue().iter())
        .flat_map(|c| nu.atoms().iter().map(move |a| (c * a).denom().clone()))
        .fold(BigInt::one(), |l, d| l.lcm(&d));
    let scale_q = BigRational::from_integer(scale);
    let incs: Vec<Vec<Vec<BigInt>>> = powers
        .iter()
        .map(|p| {
            nu.atoms()
                .iter()
                .map(|a| {
                    p.residue()
                        .iter()
                        .map(|c| (c * a * &scale_q).to_integer())
                        .collect()
                })
                .collect()
        })
        .collect();

    let r = poly.degree();
    let mut current: HashMap<Key, Vec<u16>, StableHasher> = HashMap::default();
    current.insert(vec![BigInt::zero(); r].into_boxed_slice(), Vec::new());
    for (m, step_incs) in incs.iter().enumerate() {
        let mut next: HashMap<Key, Vec<u16>, StableHasher> =
            HashMap::with_capacity_and_hasher(current.len() * nu.len(), StableHasher::default());
        let mut keys: Vec<&Key> = current.keys().collect();
        keys.sort();
        for key in keys {
            let seq = &current[key];
            for (ai, inc) in step_incs.iter().enumerate() {
                let new_key: Key = key
                    .iter()
                    .zip(inc)
                    .map(|(b, i)| b + i)
                    .collect::<Vec<_>>()
                    .into_boxed_slice();
                let mut new_seq = seq.clone();
                new_seq.push(ai as u16);
                if let Some(other) = next.get(&new_key) {
                    let to_atoms = |s: &[u16]| -> Vec<BigRational> {
                        s.iter().map(|&i| nu.atoms()[i as usize].clone()).collect()
                    };
                    return Ok(Freeness {
                        free: false,
                        free_through: m,
                        witness: Some((to_atoms(other), to_atoms(&new_seq))),
                    });
                }
                if next.len() >= budget {
                    return Err(Error::MemoryBudgetExceeded {
                        count: next.len() + 1,
                        budget,
                    });
                }
                next.insert(new_key, new_seq);
            }
        }
        current = next;
    }
    Ok(Freeness {
        free: true,
        free_through: n,
        witness: None,
    })
}
