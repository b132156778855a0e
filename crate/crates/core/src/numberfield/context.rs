//! Root classification relative to the unit circle, structural predicates and
//! the Mahler measure.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::{IntPolynomial, QPoly};
use super::roots::{isolate_roots, ComplexInterval, DEFAULT_TARGET_RADIUS};
use crate::error::{Error, Result};

/// Default upper bound on the width of the Mahler measure enclosure.
pub const DEFAULT_MAHLER_WIDTH: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RootClass {
    Inside,
    OnCircle,
    Outside,
}

/// A closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Enclosure of `x^n` for a nonnegative interval.
    pub fn powi(&self, n: u32) -> Self {
        if self.lo == self.hi && self.lo.fract() == 0.0 {
            let exact = self.lo.powi(n as i32);
            if exact.abs() <= (1u64 << 53) as f64 {
                return Self::point(exact);
            }
        }
        Self {
            lo: down(self.lo.powi(n as i32), n),
            hi: up(self.hi.powi(n as i32), n),
        }
    }

    pub fn log2(&self) -> Self {
        Self {
            lo: down(self.lo.log2(), 2),
            hi: up(self.hi.log2(), 2),
        }
    }
}

/// Widens `x` downward by `ops` relative rounding steps.
pub(crate) fn down(x: f64, ops: u32) -> f64 {
    x - x.abs() * f64::EPSILON * (ops as f64 + 1.0)
}

pub(crate) fn up(x: f64, ops: u32) -> f64 {
    x + x.abs() * f64::EPSILON * (ops as f64 + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructuralFlags {
    pub is_unit: bool,
    pub is_pisot: bool,
    pub is_salem: bool,
}

/// Output of [`classify_roots`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub classes: Vec<RootClass>,
    /// Number of roots on the unit circle.
    pub k: usize,
}

/// A polynomial together with certified information about its roots.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicContext {
    poly: IntPolynomial,
    roots: Vec<ComplexInterval>,
    classes: Vec<RootClass>,
    mahler: Interval,
    flags: StructuralFlags,
    /// Set when a rational root or a proper reciprocal factor shows the
    /// polynomial is reducible.
    reducible: bool,
}

impl AlgebraicContext {
    pub fn new(poly: IntPolynomial) -> Result<Self> {
        Self::with_tolerances(poly, DEFAULT_TARGET_RADIUS, DEFAULT_MAHLER_WIDTH)
    }

    pub fn with_tolerances(poly: IntPolynomial, target_radius: f64, mahler_width: f64) -> Result<Self> {
        if !poly.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let mut radius = target_radius;
        let mut last_err = None;
        // Shrink the disks until classification and the Mahler width succeed.
        for _ in 0..4 {
            match Self::attempt(&poly, radius, mahler_width) {
                Ok(ctx) => return Ok(ctx),
                Err(e @ (Error::AmbiguousCircleRoot { .. } | Error::PrecisionExhausted { .. })) => {
                    last_err = Some(e);
                    radius *= 1e-2;
                }
                Err(e) => return Err(e),
            }
        }
        Err(last_err.expect("at least one attempt"))
    }

    fn attempt(poly: &IntPolynomial, radius: f64, mahler_width: f64) -> Result<Self> {
        let g = poly.reciprocal_gcd();
        let g_degree = g.degree().unwrap_or(0);
        let roots = if g_degree == 0 {
            isolate_roots(poly, radius)?
        } else {
            // Split p = g h so that every root on the circle is a root of g.
            let (h, _) = poly.to_qpoly().div_rem(&g);
            let mut roots = isolate_roots(&g.to_int_polynomial()?, radius)?;
            if h.degree().unwrap_or(0) > 0 {
                roots.extend(isolate_roots(&h.to_int_polynomial()?, radius)?);
            }
            for i in 0..roots.len() {
                for j in i + 1..roots.len() {
                    if !roots[i].disjoint(&roots[j]) {
                        return Err(Error::PrecisionExhausted { bits: 0 });
                    }
                }
            }
            roots
        };
        let members: Vec<bool> = (0..roots.len()).map(|i| i < g_degree).collect();
        let classification = classify_with_members(&roots, &members)?;
        let mut order: Vec<usize> = (0..roots.len()).collect();
        order.sort_by(|&a, &b| {
            let ka = (classification.classes[a], roots[a].center.arg(), roots[a].center.norm());
            let kb = (classification.classes[b], roots[b].center.arg(), roots[b].center.norm());
            class_rank(ka.0)
                .cmp(&class_rank(kb.0))
                .then(ka.2.total_cmp(&kb.2))
                .then(ka.1.total_cmp(&kb.1))
        });
        let roots: Vec<_> = order.iter().map(|&i| roots[i]).collect();
        let classes: Vec<_> = order.iter().map(|&i| classification.classes[i]).collect();
        let mahler = mahler_from_parts(poly, &roots, &classes);
        if mahler.width() > mahler_width {
            return Err(Error::PrecisionExhausted { bits: 0 });
        }
        let flags = structural_flags(poly, &roots, &classes);
        let reducible = (g_degree > 0 && g_degree != poly.degree())
            || has_rational_root(poly, &roots);
        Ok(Self {
            poly: poly.clone(),
            roots,
            classes,
            mahler,
            flags,
            reducible,
        })
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// Roots ordered Inside, OnCircle, Outside, then by modulus and argument.
    pub fn roots(&self) -> &[ComplexInterval] {
        &self.roots
    }

    pub fn classes(&self) -> &[RootClass] {
        &self.classes
    }

    pub fn mahler(&self) -> Interval {
        self.mahler
    }

    pub fn flags(&self) -> StructuralFlags {
        self.flags
    }

    pub fn reducible(&self) -> bool {
        self.reducible
    }

    /// Number of roots on the unit circle.
    pub fn k_on_circle(&self) -> usize {
        self.count(RootClass::OnCircle)
    }

    pub fn count(&self, class: RootClass) -> usize {
        self.classes.iter().filter(|&&c| c == class).count()
    }

    pub fn roots_in(&self, class: RootClass) -> impl Iterator<Item = &ComplexInterval> + '_ {
        self.roots
            .iter()
            .zip(&self.classes)
            .filter(move |(_, &c)| c == class)
            .map(|(r, _)| r)
    }

    /// Indices of roots certified to be real.
    pub fn real_root_indices(&self) -> Vec<usize> {
        (0..self.roots.len())
            .filter(|&i| is_real_root(&self.roots, i))
            .collect()
    }

    /// Real roots (as their centers) lying in the open interval `(lo, hi)`.
    pub fn real_roots_between(&self, lo: f64, hi: f64) -> Vec<(usize, f64)> {
        self.real_root_indices()
            .into_iter()
            .map(|i| (i, self.roots[i].center.re))
            .filter(|&(i, x)| x - self.roots[i].radius > lo && x + self.roots[i].radius < hi)
            .collect()
    }
}

fn class_rank(c: RootClass) -> u8 {
    match c {
        RootClass::Inside => 0,
        RootClass::OnCircle => 1,
        RootClass::Outside => 2,
    }
}

/// Tags each isolated root as inside, on or outside the unit circle.
///
/// A disk that stays clear of the circle is classified directly. A disk that
/// meets the circle is declared `OnCircle` only when its root is a root of
/// `g = gcd(p, x^r p(1/x))` and the image of the disk under `z -> 1/conj(z)`
/// meets no other disk holding a root of `g`, which forces the root to equal
/// its own reflection.
pub fn classify_roots(poly: &IntPolynomial, roots: &[ComplexInterval]) -> Result<Classification> {
    let g = poly.reciprocal_gcd();
    let mut members = vec![false; roots.len()];
    if g.degree().unwrap_or(0) > 0 {
        let radius = roots
            .iter()
            .map(|r| r.radius)
            .fold(DEFAULT_TARGET_RADIUS, f64::min)
            .max(1e-300);
        let g_roots = isolate_roots(&g.to_int_polynomial()?, radius)?;
        // Each root of g sits in exactly one disk of p; find it.
        for e in &g_roots {
            let hits: Vec<usize> = (0..roots.len()).filter(|&i| !roots[i].disjoint(e)).collect();
            match hits.as_slice() {
                [i] => members[*i] = true,
                _ => return Err(Error::PrecisionExhausted { bits: 0 }),
            }
        }
    }
    classify_with_members(roots, &members)
}

fn classify_with_members(roots: &[ComplexInterval], members: &[bool]) -> Result<Classification> {
    let mut classes = Vec::with_capacity(roots.len());
    for (i, root) in roots.iter().enumerate() {
        let (lo, hi) = root.modulus_bounds();
        let class = if hi < 1.0 {
            RootClass::Inside
        } else if lo > 1.0 {
            RootClass::Outside
        } else if members[i] && reflects_to_itself(roots, members, i) {
            RootClass::OnCircle
        } else {
            return Err(Error::AmbiguousCircleRoot { index: i });
        };
        classes.push(class);
    }
    let k = classes.iter().filter(|&&c| c == RootClass::OnCircle).count();
    Ok(Classification { classes, k })
}

fn reflects_to_itself(roots: &[ComplexInterval], members: &[bool], i: usize) -> bool {
    let Some(image) = roots[i].inverted() else {
        return false;
    };
    if image.disjoint(&roots[i]) {
        return false;
    }
    roots
        .iter()
        .zip(members)
        .enumerate()
        .filter(|&(j, (_, &m))| j != i && m)
        .all(|(_, (r, _))| image.disjoint(r))
}

/// A disk holds a real root when it meets the real axis and its mirror image
/// meets no other disk.
fn is_real_root(roots: &[ComplexInterval], i: usize) -> bool {
    if !roots[i].touches_real_axis() {
        return false;
    }
    let mirror = roots[i].conj();
    roots
        .iter()
        .enumerate()
        .all(|(j, r)| j == i || mirror.disjoint(r))
}

/// Enclosure of `|a_r| * prod_{Outside} |root|`.
pub fn mahler_measure(ctx: &AlgebraicContext) -> Interval {
    ctx.mahler
}

fn mahler_from_parts(poly: &IntPolynomial, roots: &[ComplexInterval], classes: &[RootClass]) -> Interval {
    let lead = poly.leading().abs().to_f64().unwrap_or(f64::INFINITY);
    let mut lo = lead;
    let mut hi = lead;
    let mut ops = 0;
    // Stays true while every factor is exact and every product rounds to itself.
    let mut exact = lead <= (1u64 << 53) as f64;
    for (r, &c) in roots.iter().zip(classes) {
        if c == RootClass::Outside {
            let (a, b) = r.modulus_bounds();
            exact &= a == b && lo.mul_add(a, -(lo * a)) == 0.0;
            lo *= a.max(1.0);
            hi *= b;
            ops += 1;
        }
    }
    if exact {
        return Interval::point(lo);
    }
    Interval {
        lo: down(lo, ops).max(1.0),
        hi: up(hi, ops),
    }
}

/// Unit, Pisot and Salem predicates.
///
/// Pisot: monic, exactly one root outside the circle, that root real, all
/// others strictly inside. Salem: monic, reciprocal, one real root above 1,
/// one real root in (0, 1), at least one root on the circle and the rest on
/// the circle.
pub fn structural_flags(poly: &IntPolynomial, roots: &[ComplexInterval], classes: &[RootClass]) -> StructuralFlags {
    let is_unit = poly.leading().abs().is_one() && poly.constant().abs().is_one();
    let outside: Vec<usize> = (0..roots.len())
        .filter(|&i| classes[i] == RootClass::Outside)
        .collect();
    let inside: Vec<usize> = (0..roots.len())
        .filter(|&i| classes[i] == RootClass::Inside)
        .collect();
    let on = classes.iter().filter(|&&c| c == RootClass::OnCircle).count();
    let monic = poly.is_monic();
    let is_pisot = monic
        && outside.len() == 1
        && on == 0
        && is_real_root(roots, outside[0]);
    let is_salem = monic
        && poly.is_reciprocal()
        && outside.len() == 1
        && inside.len() == 1
        && on >= 1
        && is_real_root(roots, outside[0])
        && roots[outside[0]].center.re > 1.0
        && is_real_root(roots, inside[0])
        && roots[inside[0]].center.re - roots[inside[0]].radius > 0.0;
    StructuralFlags {
        is_unit,
        is_pisot,
        is_salem,
    }
}

/// Tests the real roots for rationality with denominators dividing `a_r`.
fn has_rational_root(poly: &IntPolynomial, roots: &[ComplexInterval]) -> bool {
    if poly.degree() == 1 {
        return false;
    }
    let lead = poly.leading().abs();
    let Some(lead_u) = lead.to_u64().filter(|&l| l <= 1_000_000) else {
        return false;
    };
    let divisors: Vec<u64> = (1..=lead_u).filter(|d| lead_u % d == 0).collect();
    (0..roots.len())
        .filter(|&i| is_real_root(roots, i))
        .any(|i| {
            let x = roots[i].center.re;
            divisors.iter().any(|&q| {
                let p = (x * q as f64).round();
                if !p.is_finite() {
                    return false;
                }
                let cand = BigRational::new(BigInt::from(p as i64), BigInt::from(q));
                poly.eval_rational(&cand).is_zero()
            })
        })
}

/// Exact power sums `s_j = sum_i root_i^j` for `j = 0..=count` via Newton's
/// identities.
pub fn power_sums(poly: &QPoly, count: usize) -> Vec<BigRational> {
    let r = poly.degree().expect("nonzero polynomial");
    let c = poly.coeffs();
    let lead = &c[r];
    // Elementary symmetric functions e_i = (-1)^i a_{r-i} / a_r.
    let e: Vec<BigRational> = (0..=r)
        .map(|i| {
            let v = &c[r - i] / lead;
            if i.is_odd() {
                -v
            } else {
                v
            }
        })
        .collect();
    let mut s = Vec::with_capacity(count + 1);
    s.push(BigRational::from_integer(BigInt::from(r)));
    for k in 1..=count {
        let mut acc = BigRational::zero();
        for i in 1..k.min(r + 1) {
            let term = &e[i] * &s[k - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if k <= r {
            let term = &e[k] * BigRational::from_integer(BigInt::from(k));
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        s.push(acc);
    }
    s
}
