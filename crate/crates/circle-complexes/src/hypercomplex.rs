//! Generalized complex numbers `u + jv` with `j² = ε` for ε ∈ {−1, 0, +1},
//! i.e. ordinary complex, dual and double numbers, together with the ratio
//! invariants (cross-ratio, multi-ratio, concyclicity determinant) that drive
//! every incidence test in this crate.
//!
//! The three algebras share one representation: the sign of `j²` is carried
//! alongside the components and all binary operations insist that both
//! operands live in the same algebra.

use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// The parameter ε = j² selecting the algebra: −1 complex, 0 dual, +1 double.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Epsilon {
    /// j² = −1, ordinary complex numbers (Möbius geometry).
    MinusOne,
    /// j² = 0, dual numbers (Laguerre geometry).
    Zero,
    /// j² = +1, double numbers (hyperbolic geometry).
    PlusOne,
}

impl Epsilon {
    pub fn value(self) -> i8 {
        match self {
            Epsilon::MinusOne => -1,
            Epsilon::Zero => 0,
            Epsilon::PlusOne => 1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Self> {
        match v {
            -1 => Some(Epsilon::MinusOne),
            0 => Some(Epsilon::Zero),
            1 => Some(Epsilon::PlusOne),
            _ => None,
        }
    }

    pub const ALL: [Epsilon; 3] = [Epsilon::MinusOne, Epsilon::Zero, Epsilon::PlusOne];

    fn scale<S: Scalar>(self, x: S) -> S {
        match self {
            Epsilon::MinusOne => -x,
            Epsilon::Zero => S::zero(),
            Epsilon::PlusOne => x,
        }
    }
}

impl Serialize for Epsilon {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Epsilon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i8::deserialize(d)?;
        Epsilon::from_i8(v).ok_or_else(|| serde::de::Error::custom("eps must be -1, 0 or 1"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GcError {
    #[error("operands belong to different algebras (eps {0:?} vs {1:?})")]
    EpsilonMismatch(Epsilon, Epsilon),
    #[error("division by a zero divisor (modulus_sq = 0)")]
    ZeroDivisorDivision,
    #[error("denominator of a ratio is not invertible (touching elements)")]
    NonInvertibleDenominator,
}

/// A generalized complex number `u + jv` over the algebra with `j² = eps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GCNum<S: Scalar> {
    pub u: S,
    pub v: S,
    pub eps: Epsilon,
}

pub type GC = GCNum<f64>;

impl<S: Scalar> GCNum<S> {
    pub fn new(u: S, v: S, eps: Epsilon) -> Self {
        GCNum { u, v, eps }
    }

    pub fn real(u: S, eps: Epsilon) -> Self {
        GCNum { u, v: S::zero(), eps }
    }

    pub fn zero(eps: Epsilon) -> Self {
        Self::real(S::zero(), eps)
    }

    pub fn one(eps: Epsilon) -> Self {
        Self::real(S::one(), eps)
    }

    /// The imaginary unit j of the algebra.
    pub fn j(eps: Epsilon) -> Self {
        GCNum { u: S::zero(), v: S::one(), eps }
    }

    pub fn conj(&self) -> Self {
        GCNum { u: self.u.clone(), v: -self.v.clone(), eps: self.eps }
    }

    /// `z·z̄ = u² − ε v²`. Vanishing modulus characterises zero divisors for
    /// ε ≥ 0; for ε = −1 only z = 0 is singular.
    pub fn modulus_sq(&self) -> S {
        self.u.clone() * self.u.clone() - self.eps.scale(self.v.clone() * self.v.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn mag(&self) -> f64 {
        self.u.mag().max(self.v.mag())
    }

    /// "Real" in the algebra sense: the j-component vanishes.
    /// `tol` is an absolute threshold on the j-component (ignored in exact mode).
    pub fn is_real_tol(&self, tol: f64) -> bool {
        self.v.is_zero_tol(tol)
    }

    pub fn invertible(&self) -> bool {
        if S::EXACT {
            !self.modulus_sq().is_zero()
        } else {
            self.modulus_sq().mag() > 0.0
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, GcError> {
        if self.eps != rhs.eps {
            return Err(GcError::EpsilonMismatch(self.eps, rhs.eps));
        }
        let m = rhs.modulus_sq();
        if m.is_zero() {
            return Err(GcError::ZeroDivisorDivision);
        }
        let num = self.clone() * rhs.conj();
        Ok(GCNum {
            u: num.u / m.clone(),
            v: num.v / m,
            eps: self.eps,
        })
    }

    pub fn scale(&self, s: S) -> Self {
        GCNum {
            u: self.u.clone() * s.clone(),
            v: self.v.clone() * s,
            eps: self.eps,
        }
    }

    fn check_eps(&self, rhs: &Self) {
        assert_eq!(
            self.eps, rhs.eps,
            "generalized complex operands from different algebras"
        );
    }
}

impl GC {
    pub fn from_xy(x: f64, y: f64, eps: Epsilon) -> Self {
        GCNum { u: x, v: y, eps }
    }
}

impl<S: Scalar> Add for GCNum<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check_eps(&rhs);
        GCNum { u: self.u + rhs.u, v: self.v + rhs.v, eps: self.eps }
    }
}

impl<S: Scalar> Sub for GCNum<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check_eps(&rhs);
        GCNum { u: self.u - rhs.u, v: self.v - rhs.v, eps: self.eps }
    }
}

impl<S: Scalar> Mul for GCNum<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check_eps(&rhs);
        // (u₁ + jv₁)(u₂ + jv₂) = (u₁u₂ + ε v₁v₂) + j(u₁v₂ + u₂v₁)
        let u = self.u.clone() * rhs.u.clone()
            + self.eps.scale(self.v.clone() * rhs.v.clone());
        let v = self.u * rhs.v + rhs.u * self.v;
        GCNum { u, v, eps: self.eps }
    }
}

impl<S: Scalar> Neg for GCNum<S> {
    type Output = Self;
    fn neg(self) -> Self {
        GCNum { u: -self.u, v: -self.v, eps: self.eps }
    }
}

impl<S: Scalar> fmt::Display for GCNum<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + j·{:?} (eps {})", self.u, self.v, self.eps.value())
    }
}

/// Requested arithmetic operation for [`gc_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GcOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic over one of the three algebras.
pub fn gc_arith<S: Scalar>(a: &GCNum<S>, b: &GCNum<S>, op: GcOp) -> Result<GCNum<S>, GcError> {
    if a.eps != b.eps {
        return Err(GcError::EpsilonMismatch(a.eps, b.eps));
    }
    match op {
        GcOp::Add => Ok(a.clone() + b.clone()),
        GcOp::Sub => Ok(a.clone() - b.clone()),
        GcOp::Mul => Ok(a.clone() * b.clone()),
        GcOp::Div => a.checked_div(b),
    }
}

fn ratio_div<S: Scalar>(num: GCNum<S>, den: GCNum<S>) -> Result<GCNum<S>, GcError> {
    num.checked_div(&den).map_err(|e| match e {
        GcError::ZeroDivisorDivision => GcError::NonInvertibleDenominator,
        other => other,
    })
}

/// Cross-ratio `(z₁−z₂)(z₃−z₄) / ((z₂−z₃)(z₄−z₁))`.
///
/// Four points lie on a common circle (in the geometry selected by ε) exactly
/// when this is "real", i.e. its j-component vanishes.
pub fn cross_ratio<S: Scalar>(
    z1: &GCNum<S>,
    z2: &GCNum<S>,
    z3: &GCNum<S>,
    z4: &GCNum<S>,
) -> Result<GCNum<S>, GcError> {
    let num = (z1.clone() - z2.clone()) * (z3.clone() - z4.clone());
    let den = (z2.clone() - z3.clone()) * (z4.clone() - z1.clone());
    ratio_div(num, den)
}

/// Multi-ratio `(a₀−b₀)(b₁−a₁)(c₁−c₀) / ((b₀−b₁)(a₁−c₁)(c₀−a₀))` of a
/// hexagonal cycle. Cyclic shift by one maps it to its reciprocal, so
/// "multi-ratio is real" is a property of the unoriented cycle.
pub fn multi_ratio<S: Scalar>(
    a0: &GCNum<S>,
    b0: &GCNum<S>,
    b1: &GCNum<S>,
    a1: &GCNum<S>,
    c1: &GCNum<S>,
    c0: &GCNum<S>,
) -> Result<GCNum<S>, GcError> {
    let num = (a0.clone() - b0.clone())
        * (b1.clone() - a1.clone())
        * (c1.clone() - c0.clone());
    let den = (b0.clone() - b1.clone())
        * (a1.clone() - c1.clone())
        * (c0.clone() - a0.clone());
    ratio_div(num, den)
}

/// The 4×4 determinant with rows `(1, z, z̄, z z̄)`. It is purely imaginary in
/// every one of the three algebras; the returned scalar is its j-coefficient.
/// Vanishes iff the cross-ratio of the four arguments is real.
pub fn concyclicity_det<S: Scalar>(
    z1: &GCNum<S>,
    z2: &GCNum<S>,
    z3: &GCNum<S>,
    z4: &GCNum<S>,
) -> S {
    // det = −(z₁−z₂)(z₃−z₄)(z̄₂−z̄₃)(z̄₄−z̄₁) + conj of that product,
    // so the j-part is −2·Im[(z₁−z₂)(z₃−z₄)(z̄₂−z̄₃)(z̄₄−z̄₁)].
    let w = (z1.clone() - z2.clone())
        * (z3.clone() - z4.clone())
        * (z2.conj() - z3.conj())
        * (z4.conj() - z1.conj());
    -(w.v.clone() + w.v)
}

/// Full 4×4 determinant `det(1, z, z̄, z z̄)` expanded inside the algebra.
/// Used to pin the identity against [`concyclicity_det`] in exact arithmetic.
pub fn concyclicity_det_full<S: Scalar>(zs: [&GCNum<S>; 4]) -> GCNum<S> {
    let eps = zs[0].eps;
    let rows: Vec<[GCNum<S>; 4]> = zs
        .iter()
        .map(|z| {
            [
                GCNum::one(eps),
                (*z).clone(),
                z.conj(),
                (*z).clone() * z.conj(),
            ]
        })
        .collect();
    det4_gc(&rows)
}

fn det2_gc<S: Scalar>(a: &GCNum<S>, b: &GCNum<S>, c: &GCNum<S>, d: &GCNum<S>) -> GCNum<S> {
    a.clone() * d.clone() - b.clone() * c.clone()
}

fn det3_gc<S: Scalar>(m: &[[GCNum<S>; 3]; 3]) -> GCNum<S> {
    let c0 = det2_gc(&m[1][1], &m[1][2], &m[2][1], &m[2][2]);
    let c1 = det2_gc(&m[1][0], &m[1][2], &m[2][0], &m[2][2]);
    let c2 = det2_gc(&m[1][0], &m[1][1], &m[2][0], &m[2][1]);
    m[0][0].clone() * c0 - m[0][1].clone() * c1 + m[0][2].clone() * c2
}

fn det4_gc<S: Scalar>(rows: &[[GCNum<S>; 4]]) -> GCNum<S> {
    assert_eq!(rows.len(), 4);
    let mut acc = GCNum::zero(rows[0][0].eps);
    for col in 0..4 {
        let mut minor: Vec<[GCNum<S>; 3]> = Vec::with_capacity(3);
        for row in rows.iter().skip(1) {
            let mut entries: Vec<GCNum<S>> = Vec::with_capacity(3);
            for (c, e) in row.iter().enumerate() {
                if c != col {
                    entries.push(e.clone());
                }
            }
            minor.push([entries[0].clone(), entries[1].clone(), entries[2].clone()]);
        }
        let minor: [[GCNum<S>; 3]; 3] =
            [minor[0].clone(), minor[1].clone(), minor[2].clone()];
        let term = rows[0][col].clone() * det3_gc(&minor);
        acc = if col % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

/// 3×3 determinant with rows `(1, z, z̄)`; purely imaginary, returns the
/// j-coefficient. This is the numerator determinant of the signed-radius
/// propagation formula.
pub fn collinearity_det<S: Scalar>(z1: &GCNum<S>, z2: &GCNum<S>, z3: &GCNum<S>) -> S {
    let eps = z1.eps;
    let m = [
        [GCNum::one(eps), z1.clone(), z1.conj()],
        [GCNum::one(eps), z2.clone(), z2.conj()],
        [GCNum::one(eps), z3.clone(), z3.conj()],
    ];
    det3_gc(&m).v
}
