//! Exact arithmetic in `Q[x]/(p)`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::poly::{rational_to_f64, IntPolynomial, QPoly};

/// An element of `Q[x]/(p)` stored as its canonical remainder: exactly
/// `degree(p)` rational coefficients, ascending. Equal residues are equal
/// field elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    residue: Vec<BigRational>,
}

impl FieldElement {
    pub fn zero(degree: usize) -> Self {
        Self {
            residue: vec![BigRational::zero(); degree],
        }
    }

    pub fn residue(&self) -> &[BigRational] {
        &self.residue
    }

    pub fn is_zero(&self) -> bool {
        self.residue.iter().all(Zero::is_zero)
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.residue.clone())
    }

    /// Evaluates the residue polynomial at a complex point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.residue
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + rational_to_f64(c))
    }

    pub(crate) fn from_parts(residue: Vec<BigRational>) -> Self {
        Self { residue }
    }
}

/// Canonical remainder of `value` modulo `poly` over the rationals.
pub fn reduce_mod(poly: &IntPolynomial, value: &QPoly) -> FieldElement {
    let r = poly.degree();
    let mut residue = value.rem(&poly.to_qpoly()).into_coeffs();
    residue.resize(r, BigRational::zero());
    FieldElement { residue }
}

/// Canonical residues of `1, x, x^2, ..., x^(count-1)` modulo `poly`.
pub fn power_residues(poly: &IntPolynomial, count: usize) -> Vec<FieldElement> {
    let r = poly.degree();
    let lead = BigRational::from_integer(poly.leading().clone());
    let tail: Vec<BigRational> = poly.coeffs()[..r]
        .iter()
        .map(|c| -BigRational::from_integer(c.clone()) / &lead)
        .collect();
    let mut out = Vec::with_capacity(count);
    let mut cur = vec![BigRational::zero(); r];
    cur[0] = BigRational::from_integer(1.into());
    for _ in 0..count {
        out.push(FieldElement {
            residue: cur.clone(),
        });
        cur = times_x(&cur, &tail);
    }
    out
}

/// Multiplies a residue by `x` using `x^r = tail . (1, x, ..., x^(r-1))`.
pub(crate) fn times_x(cur: &[BigRational], tail: &[BigRational]) -> Vec<BigRational> {
    let r = cur.len();
    let top = cur[r - 1].clone();
    let mut next = Vec::with_capacity(r);
    next.push(BigRational::zero());
    next.extend(cur[..r - 1].iter().cloned());
    if !top.is_zero() {
        for (n, t) in next.iter_mut().zip(tail) {
            *n += &top * t;
        }
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn golden_relation() {
        let p = IntPolynomial::from_i64s(&[-1, 1, 1]).unwrap();
        let e = reduce_mod(&p, &QPoly::from_ints(&[0, 0, 1]));
        assert_eq!(e.residue(), &[q(1, 1), q(-1, 1)]);
    }

    #[test]
    fn rational_root() {
        let p = IntPolynomial::from_i64s(&[-1, 2]).unwrap();
        let e = reduce_mod(&p, &QPoly::from_ints(&[0, 1]));
        assert_eq!(e.residue(), &[q(1, 2)]);
    }

    #[test]
    fn multiple_of_modulus_is_zero() {
        let p = IntPolynomial::from_i64s(&[-1, 1, 1]).unwrap();
        assert!(reduce_mod(&p, &QPoly::from_ints(&[1, -1, -1])).is_zero());
        assert!(reduce_mod(&p, &p.to_qpoly()).is_zero());
    }

    #[test]
    fn power_residues_match_reduction() {
        let p = IntPolynomial::from_i64s(&[3, -1, 0, 2]).unwrap();
        let powers = power_residues(&p, 9);
        for (k, e) in powers.iter().enumerate() {
            let mut c = vec![0i64; k + 1];
            c[k] = 1;
            assert_eq!(*e, reduce_mod(&p, &QPoly::from_ints(&c)));
        }
    }

    fn small_poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec(-9i64..=9, 0..8).prop_map(|c| QPoly::from_ints(&c))
    }

    fn modulus() -> impl Strategy<Value = IntPolynomial> {
        (prop::collection::vec(-5i64..=5, 1..5), 1i64..=4).prop_map(|(mut c, lead)| {
            c.push(lead);
            IntPolynomial::from_i64s(&c).unwrap()
        })
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(p in modulus(), v in small_poly()) {
            let once = reduce_mod(&p, &v);
            let twice = reduce_mod(&p, &once.to_qpoly());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn reduce_is_ring_morphism(p in modulus(), u in small_poly(), v in small_poly()) {
            let ru = reduce_mod(&p, &u).to_qpoly();
            let rv = reduce_mod(&p, &v).to_qpoly();
            prop_assert_eq!(reduce_mod(&p, &u.add(&v)), reduce_mod(&p, &ru.add(&rv)));
            prop_assert_eq!(reduce_mod(&p, &u.mul(&v)), reduce_mod(&p, &ru.mul(&rv)));
        }
    }
}
