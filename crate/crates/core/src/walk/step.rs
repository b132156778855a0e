use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numberfield::rational_to_f64;

/// A finitely supported law on the rationals: the distribution of each step
/// `xi_i` of the walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepDistribution {
    atoms: Vec<BigRational>,
    probs: Vec<BigRational>,
}

impl StepDistribution {
    /// Validates and sorts the atoms. Probabilities must be positive and sum
    /// to exactly one.
    pub fn new(atoms: Vec<BigRational>, probs: Vec<BigRational>) -> Result<Self> {
        if atoms.len() != probs.len() {
            return Err(Error::LengthMismatch {
                atoms: atoms.len(),
                probs: probs.len(),
            });
        }
        if let Some(p) = probs.iter().find(|p| !p.is_positive()) {
            return Err(Error::NonPositiveProbability(p.to_string()));
        }
        let total: BigRational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::ProbabilitySumNotOne(total.to_string()));
        }
        let mut pairs: Vec<_> = atoms.into_iter().zip(probs).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateAtom(w[0].0.to_string()));
        }
        if pairs.len() < 2 {
            return Err(Error::TooFewAtoms);
        }
        let (atoms, probs) = pairs.into_iter().unzip();
        Ok(Self { atoms, probs })
    }

    /// Atoms and probabilities given as integer ratios `(num, den)`.
    pub fn from_ratios(atoms: &[(i64, i64)], probs: &[(i64, i64)]) -> Result<Self> {
        let conv = |v: &[(i64, i64)]| -> Result<Vec<BigRational>> {
            v.iter()
                .map(|&(n, d)| {
                    if d == 0 {
                        Err(Error::InvalidArgument("zero denominator".into()))
                    } else {
                        Ok(BigRational::new(n.into(), d.into()))
                    }
                })
                .collect()
        };
        Self::new(conv(atoms)?, conv(probs)?)
    }

    /// Independent fair signs: atoms `-1, +1` with probability `1/2` each.
    pub fn fair_coin() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        Self {
            atoms: vec![-BigRational::one(), BigRational::one()],
            probs: vec![half.clone(), half],
        }
    }

    pub fn is_fair_coin(&self) -> bool {
        *self == Self::fair_coin()
    }

    pub fn atoms(&self) -> &[BigRational] {
        &self.atoms
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms_f64(&self) -> Vec<f64> {
        self.atoms.iter().map(rational_to_f64).collect()
    }

    pub fn probs_f64(&self) -> Vec<f64> {
        self.probs.iter().map(rational_to_f64).collect()
    }

    /// Shannon entropy of the law itself, in bits.
    pub fn entropy_bits(&self) -> f64 {
        self.probs_f64()
            .iter()
            .map(|&p| -p * p.log2())
            .sum()
    }

    /// Common denominator `W` of the probabilities and the integer weights
    /// `p_a W`.
    pub(crate) fn integer_weights(&self) -> (BigUint, Vec<BigUint>) {
        let den = self
            .probs
            .iter()
            .fold(BigInt::one(), |l, p| l.lcm(p.denom()));
        let weights = self
            .probs
            .iter()
            .map(|p| {
                (p * BigRational::from_integer(den.clone()))
                    .to_integer()
                    .to_biguint()
                    .expect("positive weight")
            })
            .collect();
        (den.to_biguint().expect("positive denominator"), weights)
    }

    /// Largest absolute atom, as a float.
    pub fn max_abs_atom(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

impl Default for StepDistribution {
    fn default() -> Self {
        Self::fair_coin()
    }
}

fn parse_rational(tok: &str) -> Result<BigRational> {
    let tok = tok.trim();
    let bad = || Error::InvalidArgument(format!("bad rational {tok:?}"));
    match tok.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(tok.parse().map_err(|_| bad())?)),
    }
}

/// Parses `"a1,a2,...:p1,p2,..."` with rationals written as `n/d`.
impl FromStr for StepDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (atoms, probs) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("expected atoms:probs, got {s:?}")))?;
        let parse_list =
            |list: &str| -> Result<Vec<BigRational>> { list.split(',').map(parse_rational).collect() };
        Self::new(parse_list(atoms)?, parse_list(probs)?)
    }
}

impl fmt::Display for StepDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigRational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}:{}", join(&self.atoms), join(&self.probs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_fair_coin() {
        let nu = StepDistribution::from_ratios(&[(1, 1), (-1, 1)], &[(1, 2), (1, 2)]).unwrap();
        assert!(nu.is_fair_coin());
        assert_eq!(nu.atoms()[0], -BigRational::one());
        assert_eq!(nu.entropy_bits(), 1.0);
    }

    #[test]
    fn biased_two_atoms() {
        let nu = StepDistribution::from_ratios(&[(0, 1), (1, 1)], &[(1, 3), (2, 3)]).unwrap();
        assert_eq!(nu.len(), 2);
        assert!(!nu.is_fair_coin());
        let (w, weights) = nu.integer_weights();
        assert_eq!(w, BigUint::from(3u32));
        assert_eq!(weights, vec![BigUint::from(1u32), BigUint::from(2u32)]);
    }

    #[test]
    fn rejects_bad_laws() {
        assert_eq!(
            StepDistribution::from_ratios(&[(1, 1), (1, 1)], &[(1, 2), (1, 2)]),
            Err(Error::DuplicateAtom("1".into()))
        );
        assert!(matches!(
            StepDistribution::from_ratios(&[(0, 1), (1, 1)], &[(0, 1), (1, 1)]),
            Err(Error::NonPositiveProbability(_))
        ));
        assert!(matches!(
            StepDistribution::from_ratios(&[(0, 1), (1, 1)], &[(1, 2), (1, 3)]),
            Err(Error::ProbabilitySumNotOne(_))
        ));
        assert_eq!(
            StepDistribution::from_ratios(&[(0, 1)], &[(1, 1)]),
            Err(Error::TooFewAtoms)
        );
    }

    #[test]
    fn parse_and_display() {
        let nu: StepDistribution = "1,-1:1/2,1/2".parse().unwrap();
        assert!(nu.is_fair_coin());
        assert_eq!(nu.to_string(), "-1,1:1/2,1/2");
        let nu: StepDistribution = "0, 1/3, 2:1/4,1/4,1/2".parse().unwrap();
        assert_eq!(nu.len(), 3);
        assert!("1,2".parse::<StepDistribution>().is_err());
        assert!("1,2:1/0,1".parse::<StepDistribution>().is_err());
    }
}
