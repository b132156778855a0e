//! Integer and rational polynomial arithmetic.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A primitive integer polynomial `a_0 + a_1 x + ... + a_r x^r` with `a_r > 0`.
///
/// Construction divides out the content and flips the overall sign when the
/// leading coefficient is negative, so two polynomials with the same roots
/// compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyInput);
        }
        if coeffs.last().is_some_and(Zero::is_zero) {
            return Err(Error::ZeroLeadingCoefficient);
        }
        if coeffs.len() < 2 {
            return Err(Error::ConstantPolynomial);
        }
        let content = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let negate = coeffs.last().is_some_and(Signed::is_negative);
        for c in coeffs.iter_mut() {
            *c = &*c / &content;
            if negate {
                *c = -&*c;
            }
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Ascending coefficients `a_0, ..., a_r`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonempty")
    }

    pub fn constant(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// `x^r p(1/x)`, the coefficient-reversed polynomial (not normalized).
    pub fn reversed_coeffs(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// True when `p(x) = ±x^r p(1/x)`.
    pub fn is_reciprocal(&self) -> bool {
        let rev = self.reversed_coeffs();
        rev == self.coeffs || rev.iter().zip(&self.coeffs).all(|(a, b)| *a == -b)
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(bigint_to_f64).collect()
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    /// True when `gcd(p, p')` is constant.
    pub fn is_squarefree(&self) -> bool {
        let p = self.to_qpoly();
        p.gcd(&p.derivative()).degree() == Some(0)
    }

    /// `gcd(p, x^r p(1/x))` made primitive. Its roots contain every root of
    /// `p` on the unit circle.
    pub fn reciprocal_gcd(&self) -> QPoly {
        let rev = QPoly::new(
            self.reversed_coeffs()
                .into_iter()
                .map(BigRational::from_integer)
                .collect(),
        );
        self.to_qpoly().gcd(&rev)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Parses comma-separated ascending integer coefficients, e.g. `"-1,1,1"`.
impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::EmptyInput);
        }
        let coeffs = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::InvalidArgument(format!("bad coefficient {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

/// A polynomial with rational coefficients, ascending, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        Self::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] / &lead;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = &rem[idx] - &q * d;
            }
            quot[k - dd] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(lead) => {
                let lead = lead.clone();
                Self::new(self.coeffs.iter().map(|c| c / &lead).collect())
            }
        }
    }

    /// Scales to a primitive integer polynomial with positive leading
    /// coefficient. Fails on constants.
    pub fn to_int_polynomial(&self) -> Result<IntPolynomial> {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        IntPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

pub(crate) fn bigint_to_f64(x: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

pub(crate) fn rational_to_f64(x: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or_else(|| {
        // Both parts overflow f64: scale them down together.
        let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
        let n = bigint_to_f64(&(x.numer() >> shift));
        let d = bigint_to_f64(&(x.denom() >> shift));
        n / d
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &IntPolynomial) -> Vec<i64> {
        p.coeffs()
            .iter()
            .map(|c| num_traits::ToPrimitive::to_i64(c).unwrap())
            .collect()
    }

    #[test]
    fn parse_direct() {
        let p = IntPolynomial::from_i64s(&[-1, 2]).unwrap();
        assert_eq!(ints(&p), vec![-1, 2]);
        assert_eq!(p.to_string(), "2x - 1");
    }

    #[test]
    fn parse_removes_content() {
        let p = IntPolynomial::from_i64s(&[2, -4]).unwrap();
        assert_eq!(ints(&p), vec![-1, 2]);
        let p: IntPolynomial = "6,-3".parse().unwrap();
        assert_eq!(ints(&p), vec![-2, 1]);
    }

    #[test]
    fn parse_negative_leading_flips_sign() {
        let p = IntPolynomial::from_i64s(&[1, 1, -1]).unwrap();
        assert_eq!(ints(&p), vec![-1, -1, 1]);
    }

    #[test]
    fn parse_mercat() {
        let p: IntPolynomial = "1,1,1,-1,1,1,1".parse().unwrap();
        assert_eq!(ints(&p), vec![1, 1, 1, -1, 1, 1, 1]);
        assert_eq!(p.to_string(), "x^6 + x^5 + x^4 - x^3 + x^2 + x + 1");
        assert!(p.is_reciprocal());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(IntPolynomial::from_i64s(&[]), Err(Error::EmptyInput));
        assert_eq!(
            IntPolynomial::from_i64s(&[1, 0]),
            Err(Error::ZeroLeadingCoefficient)
        );
        assert_eq!(
            IntPolynomial::from_i64s(&[3]),
            Err(Error::ConstantPolynomial)
        );
        assert!("1,,2".parse::<IntPolynomial>().is_err());
        assert_eq!("".parse::<IntPolynomial>(), Err(Error::EmptyInput));
    }

    #[test]
    fn squarefree() {
        assert!(IntPolynomial::from_i64s(&[-1, 1, 1]).unwrap().is_squarefree());
        // (x - 1)^2
        assert!(!IntPolynomial::from_i64s(&[1, -2, 1]).unwrap().is_squarefree());
    }

    #[test]
    fn reciprocal_gcd_detects_cyclotomic_factor() {
        // (x^2 + x + 1)(x - 2) = x^3 - x^2 - x - 2
        let p = IntPolynomial::from_i64s(&[-2, -1, -1, 1]).unwrap();
        let g = p.reciprocal_gcd();
        assert_eq!(g, QPoly::from_ints(&[1, 1, 1]));
        let golden = IntPolynomial::from_i64s(&[-1, 1, 1]).unwrap();
        assert_eq!(golden.reciprocal_gcd().degree(), Some(0));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = QPoly::from_ints(&[3, 0, 2, 5, 1]);
        let b = QPoly::from_ints(&[1, 2, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap() < 2);
    }
}
