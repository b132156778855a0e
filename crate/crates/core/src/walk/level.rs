use std::collections::HashMap;
use std::hash::BuildHasherDefault;
use std::collections::hash_map::DefaultHasher;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::step::StepDistribution;
use crate::error::{Error, Result};
use crate::numberfield::{FieldElement, IntPolynomial};

/// Default cap on the number of distinct residues held in one level.
pub const DEFAULT_BUDGET: usize = 200_000_000;

pub(crate) type StableHasher = BuildHasherDefault<DefaultHasher>;
pub(crate) type Key = Box<[BigInt]>;

/// The law of `sum_{i<n} xi_i lambda^i` as exact masses on canonical residues
/// of `Q[x]/(p)`.
///
/// Residues are stored as integer numerator vectors over a common
/// denominator `scale`, and masses as integer weights over `W^n` where `W`
/// is the common denominator of the step probabilities. For the fair coin
/// the weights are path counts.
#[derive(Debug, Clone)]
pub struct WalkLevel {
    n: usize,
    scale: BigInt,
    weight_base: BigUint,
    masses: HashMap<Key, BigUint, StableHasher>,
    lambda_power: Vec<BigRational>,
}

impl WalkLevel {
    /// The point mass at zero (`n = 0`).
    pub fn initial(poly: &IntPolynomial, nu: &StepDistribution) -> Self {
        let r = poly.degree();
        let mut masses = HashMap::default();
        masses.insert(vec![BigInt::zero(); r].into_boxed_slice(), BigUint::one());
        let mut lambda_power = vec![BigRational::zero(); r];
        lambda_power[0] = BigRational::one();
        Self {
            n: 0,
            scale: BigInt::one(),
            weight_base: nu.integer_weights().0,
            masses,
            lambda_power,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support_size(&self) -> usize {
        self.masses.len()
    }

    /// Canonical residue of `lambda^n`.
    pub fn lambda_power(&self) -> FieldElement {
        FieldElement::from_parts(self.lambda_power.clone())
    }

    /// `W^n`, the implicit denominator of every stored weight.
    pub fn total_weight(&self) -> BigUint {
        num_traits::pow(self.weight_base.clone(), self.n)
    }

    /// Support points with their exact probabilities, in canonical order.
    pub fn masses(&self) -> Vec<(FieldElement, BigRational)> {
        let total = BigInt::from(self.total_weight());
        let mut out: Vec<(FieldElement, BigRational)> = self
            .masses
            .iter()
            .map(|(k, w)| {
                let residue = k
                    .iter()
                    .map(|c| BigRational::new(c.clone(), self.scale.clone()))
                    .collect();
                (
                    FieldElement::from_parts(residue),
                    BigRational::new(BigInt::from(w.clone()), total.clone()),
                )
            })
            .collect();
        out.sort_by(|a, b| a.0.residue().cmp(b.0.residue()));
        out
    }

    /// Exact sum of all masses; equals one for every valid level.
    pub fn mass_sum(&self) -> BigRational {
        let sum: BigUint = self.masses.values().sum();
        BigRational::new(BigInt::from(sum), BigInt::from(self.total_weight()))
    }

    /// Probabilities as floats, accurate to a few ulps each.
    pub fn probabilities_f64(&self) -> Vec<f64> {
        let total = self.total_weight();
        self.masses.values().map(|w| ratio_f64(w, &total)).collect()
    }

    pub(crate) fn raw(&self) -> impl Iterator<Item = (&Key, &BigUint)> {
        self.masses.iter()
    }

    pub(crate) fn scale(&self) -> &BigInt {
        &self.scale
    }
}

/// `a / b` as `f64` without overflowing either operand.
pub(crate) fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    let shift = a.bits().max(b.bits()).saturating_sub(900);
    let a = (a >> shift).to_f64().unwrap_or(f64::INFINITY);
    let b = (b >> shift).to_f64().unwrap_or(f64::INFINITY);
    a / b
}

/// Multiplies a residue by `x` modulo `poly`.
fn next_power(cur: &[BigRational], poly: &IntPolynomial) -> Vec<BigRational> {
    let r = poly.degree();
    let lead = BigRational::from_integer(poly.leading().clone());
    let top = cur[r - 1].clone();
    let mut next = Vec::with_capacity(r);
    next.push(BigRational::zero());
    next.extend(cur[..r - 1].iter().cloned());
    if !top.is_zero() {
        for (n, a) in next.iter_mut().zip(poly.coeffs()) {
            *n -= &top * BigRational::from_integer(a.clone()) / &lead;
        }
    }
    next
}

/// One step of the walk: convolve with `nu` placed at `lambda^n`.
///
/// Fails with `MemoryBudgetExceeded` as soon as the new level would hold more
/// than `budget` residues.
pub fn advance_level(
    poly: &IntPolynomial,
    nu: &StepDistribution,
    level: &WalkLevel,
    budget: usize,
) -> Result<WalkLevel> {
    let (_, weights) = nu.integer_weights();
    // Increments a * lambda^n for each atom, over a common denominator.
    let increments: Vec<Vec<BigRational>> = nu
        .atoms()
        .iter()
        .map(|a| level.lambda_power.iter().map(|c| c * a).collect())
        .collect();
    let new_scale = increments
        .iter()
        .flatten()
        .fold(level.scale.clone(), |l, c| l.lcm(c.denom()));
    let factor = &new_scale / &level.scale;
    let scaled: Vec<Vec<BigInt>> = increments
        .iter()
        .map(|inc| {
            inc.iter()
                .map(|c| (c * BigRational::from_integer(new_scale.clone())).to_integer())
                .collect()
        })
        .collect();
    let rescale = !factor.is_one();

    let cap = level.masses.len().saturating_mul(nu.len()).min(budget.saturating_add(1));
    let mut masses: HashMap<Key, BigUint, StableHasher> =
        HashMap::with_capacity_and_hasher(cap.min(1 << 24), StableHasher::default());
    for (key, w) in &level.masses {
        let base: Vec<BigInt> = if rescale {
            key.iter().map(|c| c * &factor).collect()
        } else {
            key.to_vec()
        };
        for (inc, aw) in scaled.iter().zip(&weights) {
            let new_key: Key = base
                .iter()
                .zip(inc)
                .map(|(b, i)| b + i)
                .collect::<Vec<_>>()
                .into_boxed_slice();
            let mass = w * aw;
            match masses.get_mut(&new_key) {
                Some(m) => *m += mass,
                None => {
                    if masses.len() >= budget {
                        return Err(Error::MemoryBudgetExceeded {
                            count: masses.len() + 1,
                            budget,
                        });
                    }
                    masses.insert(new_key, mass);
                }
            }
        }
    }
    Ok(WalkLevel {
        n: level.n + 1,
        scale: new_scale,
        weight_base: level.weight_base.clone(),
        masses,
        lambda_power: next_power(&level.lambda_power, poly),
    })
}

/// Shannon entropy of a level in bits, summed with compensation.
pub fn shannon_entropy(level: &WalkLevel) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for p in level.probabilities_f64() {
        if p > 0.0 {
            let term = -p * p.log2();
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
    }
    sum + comp
}

/// Enumerates levels `0..=n` and returns level `n`.
pub fn level_at(poly: &IntPolynomial, nu: &StepDistribution, n: usize, budget: usize) -> Result<WalkLevel> {
    if !poly.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let mut level = WalkLevel::initial(poly, nu);
    for _ in 0..n {
        level = advance_level(poly, nu, &level, budget)?;
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::{reduce_mod, QPoly};

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn dyadic_three_steps() {
        let p = poly(&[-1, 2]);
        let level = level_at(&p, &StepDistribution::fair_coin(), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(level.support_size(), 8);
        for (_, m) in level.masses() {
            assert_eq!(m, q(1, 8));
        }
        assert_eq!(shannon_entropy(&level), 3.0);
        assert_eq!(level.lambda_power().residue(), &[q(1, 8)]);
    }

    /// Brute force over all 8 sign sequences, reducing each mod p.
    fn brute_force_masses(p: &IntPolynomial, n: usize) -> Vec<(FieldElement, BigRational)> {
        let mut out: Vec<(FieldElement, BigRational)> = Vec::new();
        let mass = q(1, 1 << n);
        for mask in 0..(1u32 << n) {
            let coeffs: Vec<i64> = (0..n)
                .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
                .collect();
            let e = reduce_mod(p, &QPoly::from_ints(&coeffs));
            match out.iter_mut().find(|(k, _)| *k == e) {
                Some((_, m)) => *m += &mass,
                None => out.push((e, mass.clone())),
            }
        }
        out.sort_by(|a, b| a.0.residue().cmp(b.0.residue()));
        out
    }

    #[test]
    fn golden_level_three_matches_brute_force() {
        let p = poly(&[-1, 1, 1]);
        let level = level_at(&p, &StepDistribution::fair_coin(), 3, DEFAULT_BUDGET).unwrap();
        let masses = level.masses();
        assert_eq!(masses, brute_force_masses(&p, 3));
        assert_eq!(masses.len(), 7);
        let zero = masses.iter().find(|(k, _)| k.is_zero()).unwrap();
        assert_eq!(zero.1, q(1, 4));
        assert_eq!(masses.iter().filter(|(_, m)| *m == q(1, 8)).count(), 6);
        assert_eq!(shannon_entropy(&level), 2.75);
    }

    #[test]
    fn mercat_level_eight_matches_brute_force() {
        let p = poly(&[1, 1, 1, -1, 1, 1, 1]);
        let level = level_at(&p, &StepDistribution::fair_coin(), 8, DEFAULT_BUDGET).unwrap();
        assert_eq!(level.masses(), brute_force_masses(&p, 8));
    }

    #[test]
    fn non_monic_and_biased_mass_conservation() {
        let p = poly(&[2, -1, 3]);
        let nu = StepDistribution::from_ratios(&[(0, 1), (1, 2), (3, 1)], &[(1, 6), (1, 3), (1, 2)]).unwrap();
        let mut level = WalkLevel::initial(&p, &nu);
        for _ in 0..6 {
            level = advance_level(&p, &nu, &level, DEFAULT_BUDGET).unwrap();
            assert!(level.mass_sum().is_one());
            assert!(level.support_size() <= 3usize.pow(level.n() as u32));
        }
    }

    #[test]
    fn point_mass_has_zero_entropy() {
        let level = WalkLevel::initial(&poly(&[-1, 1, 1]), &StepDistribution::fair_coin());
        assert_eq!(shannon_entropy(&level), 0.0);
        assert_eq!(level.support_size(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let p = poly(&[-1, 3]);
        let err = level_at(&p, &StepDistribution::fair_coin(), 6, 40).unwrap_err();
        assert!(matches!(err, Error::MemoryBudgetExceeded { budget: 40, .. }));
    }
}
