//! Certified complex root isolation.
//!
//! Roots are first approximated with Aberth–Ehrlich iteration in `f64`, then
//! polished with the same iteration in big-integer fixed point. Each
//! approximation `z_i` is certified by the Weierstrass correction
//!
//! ```text
//! W_i = p(z_i) / (a_r * prod_{j != i} (z_i - z_j))
//! ```
//!
//! The disks `|z - z_i| <= r |W_i|` contain all roots of `p`, and a connected
//! union of `m` of them contains exactly `m` roots. When the disks are
//! pairwise disjoint, each one isolates exactly one root. The evaluation of
//! `p(z_i)` carries an explicit rounding bound, so the radii are upper bounds.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::{bigint_to_f64, rational_to_f64, IntPolynomial};
use crate::error::{Error, Result};

pub const DEFAULT_TARGET_RADIUS: f64 = 1e-14;

const START_BITS: u32 = 128;
const MAX_BITS: u32 = 4096;
const ITERS_PER_LEVEL: usize = 40;

/// A disk in the complex plane that is known to contain a root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexInterval {
    pub center: Complex64,
    pub radius: f64,
}

impl ComplexInterval {
    pub fn exact(center: Complex64) -> Self {
        Self {
            center,
            radius: 0.0,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }

    /// Conservative disjointness test that absorbs the rounding in the
    /// distance computation.
    pub fn disjoint(&self, other: &Self) -> bool {
        let d = (self.center - other.center).norm();
        d * (1.0 - 1e-14) > self.radius + other.radius
    }

    /// Lower and upper bound on `|z|` over the disk.
    pub fn modulus_bounds(&self) -> (f64, f64) {
        if self.radius == 0.0 && (self.center.im == 0.0 || self.center.re == 0.0) {
            let m = self.center.re.abs().max(self.center.im.abs());
            return (m, m);
        }
        let m = self.center.norm();
        let slack = m * 4.0 * f64::EPSILON;
        ((m - self.radius - slack).max(0.0), m + self.radius + slack)
    }

    /// Disk containing the image of this one under `z -> 1 / conj(z)`.
    /// `None` when the disk contains the origin.
    pub fn inverted(&self) -> Option<Self> {
        let (lo, _) = self.modulus_bounds();
        if lo <= 0.0 {
            return None;
        }
        let m = self.center.norm();
        let center = self.center / (m * m);
        let radius = self.radius / (m * lo) + center.norm() * 4.0 * f64::EPSILON;
        Some(Self { center, radius })
    }

    /// The mirror image under complex conjugation.
    pub fn conj(&self) -> Self {
        Self {
            center: self.center.conj(),
            radius: self.radius,
        }
    }

    pub fn touches_real_axis(&self) -> bool {
        self.center.im.abs() <= self.radius
    }
}

/// Isolates every complex root of a squarefree integer polynomial to disks of
/// radius at most `target_radius * max(1, |center|)`.
pub fn isolate_roots(poly: &IntPolynomial, target_radius: f64) -> Result<Vec<ComplexInterval>> {
    if !(target_radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target radius must be positive, got {target_radius}"
        )));
    }
    if !poly.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    if poly.degree() == 1 {
        return Ok(vec![linear_root(poly)]);
    }
    let mut approx = aberth_f64(&poly.coeffs_f64());
    let mut bits = START_BITS;
    loop {
        let mut fx: Vec<Fx> = approx.iter().map(|&z| Fx::from_c64(z, bits)).collect();
        let ints: Vec<BigInt> = poly.coeffs().iter().map(|c| c << bits).collect();
        for _ in 0..ITERS_PER_LEVEL {
            if let Some(disks) = certify(poly, &fx, bits, target_radius) {
                return Ok(disks);
            }
            fx = aberth_step_fx(&ints, &fx, bits);
        }
        if let Some(disks) = certify(poly, &fx, bits, target_radius) {
            return Ok(disks);
        }
        if bits >= MAX_BITS {
            return Err(Error::PrecisionExhausted { bits });
        }
        approx = fx.iter().map(|z| z.to_c64(bits)).collect();
        bits *= 2;
    }
}

fn linear_root(poly: &IntPolynomial) -> ComplexInterval {
    let root = BigRational::new(-poly.constant().clone(), poly.leading().clone());
    let center = rational_to_f64(&root);
    let radius = match BigRational::from_float(center) {
        Some(c) if c == root => 0.0,
        Some(c) => rational_to_f64(&(c - root).abs()) * (1.0 + 1e-15) + f64::MIN_POSITIVE,
        None => f64::INFINITY,
    };
    ComplexInterval {
        center: Complex64::new(center, 0.0),
        radius,
    }
}

/// Initial guesses on circles whose radii come from the upper convex hull of
/// `(k, log|a_k|)`.
fn initial_guesses(coeffs: &[f64]) -> Vec<Complex64> {
    let r = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(k, c)| (k, c.abs().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (k1, y1) = hull[hull.len() - 2];
            let (k2, y2) = hull[hull.len() - 1];
            let cross = (k2 as f64 - k1 as f64) * (p.1 - y1) - (y2 - y1) * (p.0 as f64 - k1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(r);
    // Roots at zero.
    for _ in 0..hull[0].0 {
        out.push(Complex64::new(0.0, 0.0));
    }
    let sigma = 0.7;
    for (seg, w) in hull.windows(2).enumerate() {
        let (k1, y1) = w[0];
        let (k2, y2) = w[1];
        let m = k2 - k1;
        let radius = ((y1 - y2) / m as f64).exp();
        for j in 0..m {
            let angle = 2.0 * std::f64::consts::PI * (j as f64 / m as f64)
                + 2.0 * std::f64::consts::PI * (k2 as f64) / r as f64
                + sigma
                + seg as f64 * 0.3;
            out.push(Complex64::from_polar(radius, angle));
        }
    }
    out
}

fn horner_f64(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn aberth_f64(coeffs: &[f64]) -> Vec<Complex64> {
    let mut z = initial_guesses(coeffs);
    let r = z.len();
    for _ in 0..2000 {
        let mut converged = true;
        for i in 0..r {
            let (p, dp) = horner_f64(coeffs, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..r)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !w.is_finite() {
                continue;
            }
            z[i] -= w;
            if w.norm() > 1e-15 * z[i].norm().max(1e-300) {
                converged = false;
            }
        }
        if converged {
            break;
        }
    }
    z
}

/// Complex number `(re + i im) * 2^-bits` with big-integer parts.
#[derive(Debug, Clone, PartialEq)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

impl Fx {
    fn from_c64(z: Complex64, bits: u32) -> Self {
        Self {
            re: f64_to_fixed(z.re, bits),
            im: f64_to_fixed(z.im, bits),
        }
    }

    fn to_c64(&self, bits: u32) -> Complex64 {
        Complex64::new(fixed_to_f64(&self.re, bits), fixed_to_f64(&self.im, bits))
    }

    fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn mul(&self, o: &Self, bits: u32) -> Self {
        Self {
            re: (&self.re * &o.re - &self.im * &o.im) >> bits,
            im: (&self.re * &o.im + &self.im * &o.re) >> bits,
        }
    }

    fn div(&self, o: &Self, bits: u32) -> Option<Self> {
        let d = &o.re * &o.re + &o.im * &o.im;
        if d.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) << bits;
        let im = (&self.im * &o.re - &self.re * &o.im) << bits;
        Some(Self {
            re: re / &d,
            im: im / &d,
        })
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `ln |z|` with the fixed-point scale removed.
    fn ln_abs(&self, bits: u32) -> f64 {
        let (re, e1) = scaled_f64(&self.re);
        let (im, e2) = scaled_f64(&self.im);
        let e = e1.max(e2);
        let re = re * 2f64.powi(e1 - e);
        let im = im * 2f64.powi(e2 - e);
        re.hypot(im).ln() + (e as f64 - bits as f64) * std::f64::consts::LN_2
    }
}

/// `x` as `m * 2^e` with `|m| < 2^63`.
fn scaled_f64(x: &BigInt) -> (f64, i32) {
    let b = x.bits() as i32;
    if b <= 63 {
        return (bigint_to_f64(x), 0);
    }
    let shift = b - 63;
    (bigint_to_f64(&(x >> shift as u32)), shift)
}

fn ldexp(mut x: f64, mut e: i32) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e)
}

fn fixed_to_f64(x: &BigInt, bits: u32) -> f64 {
    let (m, e) = scaled_f64(x);
    ldexp(m, e - bits as i32)
}

fn f64_to_fixed(x: f64, bits: u32) -> BigInt {
    if x == 0.0 || !x.is_finite() {
        return BigInt::zero();
    }
    let raw = x.abs().to_bits();
    let exp = ((raw >> 52) & 0x7ff) as i32;
    let frac = raw & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let shift = e + bits as i32;
    let m = BigInt::from(mant);
    let v = if shift >= 0 {
        m << shift as u32
    } else {
        m >> (-shift) as u32
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Horner evaluation of `p` and `p'` with coefficients pre-scaled by `2^bits`.
fn horner_fx(ints: &[BigInt], z: &Fx, bits: u32) -> (Fx, Fx) {
    let zero = Fx {
        re: BigInt::zero(),
        im: BigInt::zero(),
    };
    let mut p = zero.clone();
    let mut dp = zero;
    for c in ints.iter().rev() {
        dp = dp.mul(z, bits).add(&p);
        p = p.mul(z, bits);
        p.re += c;
    }
    (p, dp)
}

fn aberth_step_fx(ints: &[BigInt], z: &[Fx], bits: u32) -> Vec<Fx> {
    let one = Fx {
        re: BigInt::from(1) << bits,
        im: BigInt::zero(),
    };
    let mut z = z.to_vec();
    for i in 0..z.len() {
        let (p, dp) = horner_fx(ints, &z[i], bits);
        if p.is_zero() {
            continue;
        }
        let Some(ratio) = p.div(&dp, bits) else {
            continue;
        };
        let mut sum = Fx {
            re: BigInt::zero(),
            im: BigInt::zero(),
        };
        for j in 0..z.len() {
            if j != i {
                if let Some(inv) = one.div(&z[i].sub(&z[j]), bits) {
                    sum = sum.add(&inv);
                }
            }
        }
        let denom = one.sub(&ratio.mul(&sum, bits));
        if let Some(w) = ratio.div(&denom, bits) {
            z[i] = z[i].sub(&w);
        }
    }
    z
}

/// Certified disks around the current approximations, or `None` when they are
/// too large or overlap.
fn certify(
    poly: &IntPolynomial,
    z: &[Fx],
    bits: u32,
    target_radius: f64,
) -> Option<Vec<ComplexInterval>> {
    let r = poly.degree();
    let ulp = std::f64::consts::SQRT_2 * ldexp(1.0, -(bits as i32));
    let ints: Vec<BigInt> = poly.coeffs().iter().map(|c| c << bits).collect();
    let ln_lead = poly.leading().abs().to_f64().unwrap_or(f64::INFINITY).ln();
    let mut disks = Vec::with_capacity(r);
    for i in 0..r {
        let center = z[i].to_c64(bits);
        let m = center.norm() * (1.0 + 1e-14);
        // Horner rounding: sum_{k<r} |z|^k ulps.
        let geom: f64 = (0..r).map(|k| m.powi(k as i32)).sum();
        let eval_err = ulp * geom * (1.0 + 1e-12);
        let (p, _) = horner_fx(&ints, &z[i], bits);
        let ln_p = if p.is_zero() {
            f64::NEG_INFINITY
        } else {
            p.ln_abs(bits) + 1e-13
        };
        let p_upper = ln_p.exp() + eval_err;
        let mut ln_denom = ln_lead;
        for (j, zj) in z.iter().enumerate() {
            if j != i {
                let d = z[i].sub(zj);
                if d.is_zero() {
                    return None;
                }
                ln_denom += d.ln_abs(bits) - 1e-13;
            }
        }
        let radius = (r as f64) * (p_upper.ln() - ln_denom).exp() * (1.0 + 1e-12);
        let rounding = (center.re.abs() + center.im.abs()) * f64::EPSILON + f64::MIN_POSITIVE;
        let radius = radius + rounding;
        if !radius.is_finite() || radius > target_radius * center.norm().max(1.0) {
            return None;
        }
        disks.push(ComplexInterval { center, radius });
    }
    for i in 0..r {
        for j in i + 1..r {
            if !disks[i].disjoint(&disks[j]) {
                return None;
            }
        }
    }
    Some(disks)
}
