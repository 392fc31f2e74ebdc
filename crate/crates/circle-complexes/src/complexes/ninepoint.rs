//! The nine-point relation: on a rhombic configuration of nine lattice
//! points, the two multi-ratio realness constraints determine the last point
//! as the solution of one linear equation over the algebra,
//! `M₍₁₎/conj(M*₍₁₎) + M₍₂₎/conj(M*₍₂₎) = 1`.
//!
//! Clearing denominators gives `(A + B + C)·c⁰ = A·c¹ + B·c² + C·a⁰`, with
//! coefficients free of `c⁰`. For ε ≠ 0 this is a 2×2 real solve. For dual
//! numbers the real part of the relation is an identity and the equation
//! degenerates; the missing condition is recovered as the first ε-derivative
//! at ε = 0, computed here with first-order jets in ε.

use crate::hypercomplex::{Epsilon, GCNum, GC};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NinePointError {
    #[error("a denominator of the multi-ratios is not invertible")]
    NonInvertibleDenominator,
    #[error("the configuration does not determine the ninth point")]
    InconsistentData,
}

type Result<T> = std::result::Result<T, NinePointError>;

/// Input order matches the rhombic labelling: the two hexagonal cycles are
/// `(a0, b0, b1, a1, c1, c0)` and `(a0, b0, b2, a2, c2, c0)`, and `c0` is
/// solved for.
#[allow(clippy::too_many_arguments)]
pub fn nine_point_evolve(
    a0: &GC,
    b0: &GC,
    b1: &GC,
    a1: &GC,
    c1: &GC,
    b2: &GC,
    a2: &GC,
    c2: &GC,
) -> Result<GC> {
    let eps = a0.eps;
    let scale = [a0, b0, b1, a1, c1, b2, a2, c2]
        .iter()
        .map(|z| z.mag())
        .fold(1.0, f64::max);
    let tol = 1e-12 * scale * scale;
    // invertibility of every factor that multiplies the relation
    let factors = [
        a0.clone() - b0.clone(),
        b1.clone() - a1.clone(),
        b2.clone() - a2.clone(),
        b0.clone() - b1.clone(),
        a1.clone() - c1.clone(),
        b0.clone() - b2.clone(),
        a2.clone() - c2.clone(),
        c1.clone() - c2.clone(),
        c2.clone() - a0.clone(),
        c1.clone() - a0.clone(),
    ];
    for f in &factors {
        if f.modulus_sq().abs() <= tol {
            return Err(NinePointError::NonInvertibleDenominator);
        }
    }

    match eps {
        Epsilon::Zero => solve_dual(a0, b0, b1, a1, c1, b2, a2, c2),
        _ => solve_invertible(eps, a0, b0, b1, a1, c1, b2, a2, c2),
    }
}

struct Cleared<T> {
    alpha: T,
    beta: T,
}

fn cleared_system<T: Ring>(pts: &[T; 8]) -> Cleared<T> {
    let [a0, b0, b1, a1, c1, b2, a2, c2] = pts;
    let n1 = a0.sub(b0).mul(&b1.sub(a1));
    let d1 = b0.sub(b1).mul(&a1.sub(c1));
    let n2 = a0.sub(b0).mul(&b2.sub(a2));
    let d2 = b0.sub(b2).mul(&a2.sub(c2));
    let nstar1 = n1.mul(&c1.sub(c2));
    let dstar1 = d1.mul(&c2.sub(a0));
    let nstar2 = n2.mul(&c2.sub(c1));
    let dstar2 = d2.mul(&c1.sub(a0));
    let a = n1.mul(&dstar1.conj()).mul(&d2).mul(&nstar2.conj());
    let b = n2.mul(&dstar2.conj()).mul(&d1).mul(&nstar1.conj());
    let c = d1.mul(&nstar1.conj()).mul(&d2).mul(&nstar2.conj());
    let alpha = a.add(&b).add(&c);
    let beta = a.mul(c1).add(&b.mul(c2)).add(&c.mul(a0));
    Cleared { alpha, beta }
}

/// Minimal ring interface shared by the plain algebra and its ε-jets.
trait Ring: Clone {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn conj(&self) -> Self;
}

impl Ring for GC {
    fn add(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }
    fn sub(&self, o: &Self) -> Self {
        self.clone() - o.clone()
    }
    fn mul(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }
    fn conj(&self) -> Self {
        GCNum::conj(self)
    }
}

#[allow(clippy::too_many_arguments)]
fn solve_invertible(
    eps: Epsilon,
    a0: &GC,
    b0: &GC,
    b1: &GC,
    a1: &GC,
    c1: &GC,
    b2: &GC,
    a2: &GC,
    c2: &GC,
) -> Result<GC> {
    let pts = [
        a0.clone(),
        b0.clone(),
        b1.clone(),
        a1.clone(),
        c1.clone(),
        b2.clone(),
        a2.clone(),
        c2.clone(),
    ];
    let Cleared { alpha, beta } = cleared_system(&pts);
    // (P + jQ)(u + jv) = beta: [[P, εQ], [Q, P]]·(u, v) = (βu, βv)
    let e = eps.value() as f64;
    let (p, q) = (alpha.u, alpha.v);
    let det = p * p - e * q * q;
    let scale = p.abs().max(q.abs()).max(beta.mag());
    if det.abs() <= 1e-14 * scale * scale {
        return Err(NinePointError::InconsistentData);
    }
    let u = (p * beta.u - e * q * beta.v) / det;
    let v = (p * beta.v - q * beta.u) / det;
    Ok(GCNum::new(u, v, eps))
}

/// First-order jet in ε around 0.
#[derive(Clone, Copy, Debug)]
struct Jet {
    a: f64,
    d: f64,
}

impl Jet {
    fn new(a: f64) -> Self {
        Jet { a, d: 0.0 }
    }
    fn add(self, o: Jet) -> Jet {
        Jet {
            a: self.a + o.a,
            d: self.d + o.d,
        }
    }
    fn sub(self, o: Jet) -> Jet {
        Jet {
            a: self.a - o.a,
            d: self.d - o.d,
        }
    }
    fn mul(self, o: Jet) -> Jet {
        Jet {
            a: self.a * o.a,
            d: self.a * o.d + self.d * o.a,
        }
    }
    /// Multiplication by the jet variable ε itself (truncating ε²).
    fn shift(self) -> Jet {
        Jet { a: 0.0, d: self.a }
    }
}

/// `u + jv` with `j² = ε` kept as a first-order jet in ε.
#[derive(Clone, Copy, Debug)]
struct GCJet {
    u: Jet,
    v: Jet,
}

impl Ring for GCJet {
    fn add(&self, o: &Self) -> Self {
        GCJet {
            u: self.u.add(o.u),
            v: self.v.add(o.v),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        GCJet {
            u: self.u.sub(o.u),
            v: self.v.sub(o.v),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        GCJet {
            u: self.u.mul(o.u).add(self.v.mul(o.v).shift()),
            v: self.u.mul(o.v).add(self.v.mul(o.u)),
        }
    }
    fn conj(&self) -> Self {
        GCJet {
            u: self.u,
            v: Jet {
                a: -self.v.a,
                d: -self.v.d,
            },
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn solve_dual(
    a0: &GC,
    b0: &GC,
    b1: &GC,
    a1: &GC,
    c1: &GC,
    b2: &GC,
    a2: &GC,
    c2: &GC,
) -> Result<GC> {
    let lift = |z: &GC| GCJet {
        u: Jet::new(z.u),
        v: Jet::new(z.v),
    };
    let pts = [
        lift(a0),
        lift(b0),
        lift(b1),
        lift(a1),
        lift(c1),
        lift(b2),
        lift(a2),
        lift(c2),
    ];
    let Cleared { alpha, beta } = cleared_system(&pts);
    // At ε = 0 the real part of the relation is an identity: the ε⁰ order of
    // the u-components must cancel, leaving
    //   v(α)|₀ · u₀                     = v(β)|₀
    //   ∂ε u(α)|₀ · u₀ + v(α)|₀ · v₀    = ∂ε u(β)|₀
    let scale = [a0, b0, b1, a1, c1, b2, a2, c2]
        .iter()
        .map(|z| z.mag())
        .fold(1.0, f64::max);
    let coeff_scale = alpha.v.a.abs().max(alpha.u.d.abs()).max(beta.v.a.abs());
    if alpha.u.a.abs() > 1e-6 * coeff_scale.max(1.0) * scale {
        // the ε⁰ identity failed: inputs are not dual numbers of one algebra
        return Err(NinePointError::InconsistentData);
    }
    if alpha.v.a.abs() <= 1e-14 * coeff_scale.max(1.0) {
        return Err(NinePointError::InconsistentData);
    }
    let u0 = beta.v.a / alpha.v.a;
    let v0 = (beta.u.d - alpha.u.d * u0) / alpha.v.a;
    Ok(GCNum::new(u0, v0, Epsilon::Zero))
}
