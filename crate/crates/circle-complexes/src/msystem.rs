//! The matrix evolution system `M^{ik} → M^{ik} − M^{il}M^{lk}/M^{ll}` on a
//! lattice, its symmetric/Hermitian/real reductions, the associated τ-function
//! whose shifts are principal minors, the hyperdeterminant residual, and the
//! extraction of Plücker / Lie-quadric coordinates from the trailing 2×2
//! block.
//!
//! Entries are generic: real scalars give real line complexes, symmetric
//! matrices stay inside a linear line complex (oriented circles), Hermitian
//! matrices over a hypercomplex algebra give sphere complexes.

use crate::hypercomplex::{Epsilon, GCNum};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MSystemError {
    #[error("pivot M^({0},{0}) is singular")]
    SingularPivot(usize),
    #[error("matrix must be square with n >= 5 (got {0})")]
    BadDimension(usize),
    #[error("multi-indices clash or contain repeats")]
    IndexClash,
    #[error("direction {0} is not an evolution direction")]
    BadDirection(usize),
    #[error("state does not satisfy the required reduction ({0})")]
    ReductionViolated(&'static str),
    #[error("tau value at the base site is zero")]
    ZeroTau,
    #[error("negative discriminant: tau data admits no real off-diagonal entry")]
    NegativeDiscriminant,
}

type Result<T> = std::result::Result<T, MSystemError>;

/// Matrix entry: a real scalar or a generalized complex number.
pub trait MEntry:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Real: Scalar;
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn checked_div(&self, rhs: &Self) -> Option<Self>;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn mag(&self) -> f64;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    /// Entry-level zero test honouring exactness.
    fn is_zero_tol(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.mag() <= tol
        }
    }
}

macro_rules! scalar_mentry {
    ($t:ty) => {
        impl MEntry for $t {
            type Real = $t;
            const EXACT: bool = <$t as Scalar>::EXACT;

            fn zero() -> Self {
                <$t as Scalar>::zero()
            }
            fn one() -> Self {
                <$t as Scalar>::one()
            }
            fn checked_div(&self, rhs: &Self) -> Option<Self> {
                if Scalar::is_zero(rhs) {
                    None
                } else {
                    Some(self.clone() / rhs.clone())
                }
            }
            fn conj(&self) -> Self {
                self.clone()
            }
            fn is_zero(&self) -> bool {
                Scalar::is_zero(self)
            }
            fn mag(&self) -> f64 {
                Scalar::mag(self)
            }
            fn re(&self) -> Self {
                self.clone()
            }
            fn im(&self) -> Self {
                <$t as Scalar>::zero()
            }
        }
    };
}

scalar_mentry!(f64);
scalar_mentry!(num::BigRational);

impl<S: Scalar> MEntry for GCNum<S> {
    type Real = S;
    const EXACT: bool = S::EXACT;

    fn zero() -> Self {
        // The algebra tag of an additive zero is contextual; arithmetic on
        // mixed tags is rejected elsewhere, so default to the complex one.
        GCNum::zero(Epsilon::MinusOne)
    }
    fn one() -> Self {
        GCNum::one(Epsilon::MinusOne)
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        self.checked_div(rhs).ok()
    }
    fn conj(&self) -> Self {
        GCNum::conj(self)
    }
    fn is_zero(&self) -> bool {
        GCNum::is_zero(self)
    }
    fn mag(&self) -> f64 {
        GCNum::mag(self)
    }
    fn re(&self) -> S {
        self.u.clone()
    }
    fn im(&self) -> S {
        self.v.clone()
    }
}

/// Relative pivot tolerance in float mode.
const PIVOT_REL_TOL: f64 = 1e-12;

/// The matrix attached to a lattice site. Directions `1..=n−2` evolve; the
/// trailing 2×2 block parametrises the geometry.
#[derive(Clone, Debug, PartialEq)]
pub struct MState<T: MEntry> {
    mat: Vec<Vec<T>>,
    /// Lattice position, one component per evolution direction.
    pub site: Vec<i64>,
}

impl<T: MEntry> MState<T> {
    pub fn new(mat: Vec<Vec<T>>) -> Result<Self> {
        let n = mat.len();
        if n < 5 || mat.iter().any(|r| r.len() != n) {
            return Err(MSystemError::BadDimension(n));
        }
        let dirs = n - 2;
        Ok(MState {
            mat,
            site: vec![0; dirs],
        })
    }

    pub fn n(&self) -> usize {
        self.mat.len()
    }

    /// Number of lattice directions (`n − 2`).
    pub fn dirs(&self) -> usize {
        self.n() - 2
    }

    /// 1-based entry access.
    pub fn entry(&self, i: usize, k: usize) -> &T {
        &self.mat[i - 1][k - 1]
    }

    pub fn matrix(&self) -> &Vec<Vec<T>> {
        &self.mat
    }

    pub fn max_mag(&self) -> f64 {
        self.mat
            .iter()
            .flat_map(|r| r.iter())
            .map(|e| e.mag())
            .fold(0.0, f64::max)
    }

    fn pivot_ok(&self, l: usize) -> bool {
        let p = self.entry(l, l);
        if T::EXACT {
            !p.is_zero()
        } else {
            p.mag() > PIVOT_REL_TOL * self.max_mag()
        }
    }

    /// One elementary step in direction `l`: entries outside row/column `l`
    /// pick up `−M^{il}M^{lk}/M^{ll}`. Row and column `l` are carried along
    /// as `M^{il}/M^{ll}` with `M^{ll} → −1/M^{ll}` (the principal pivot
    /// transform), which makes steps in different directions commute
    /// entrywise and preserves symmetry, Hermiticity and realness.
    pub fn evolve(&self, l: usize) -> Result<Self> {
        if l == 0 || l > self.dirs() {
            return Err(MSystemError::BadDirection(l));
        }
        if !self.pivot_ok(l) {
            return Err(MSystemError::SingularPivot(l));
        }
        let n = self.n();
        let li = l - 1;
        let pivot = self.mat[li][li].clone();
        let mut out = self.mat.clone();
        for i in 0..n {
            for k in 0..n {
                if i == li && k == li {
                    out[i][k] = (-T::one())
                        .checked_div(&pivot)
                        .ok_or(MSystemError::SingularPivot(l))?;
                } else if i == li || k == li {
                    out[i][k] = self.mat[i][k]
                        .checked_div(&pivot)
                        .ok_or(MSystemError::SingularPivot(l))?;
                } else {
                    let corr = (self.mat[i][li].clone() * self.mat[li][k].clone())
                        .checked_div(&pivot)
                        .ok_or(MSystemError::SingularPivot(l))?;
                    out[i][k] = self.mat[i][k].clone() - corr;
                }
            }
        }
        let mut site = self.site.clone();
        site[li] += 1;
        Ok(MState { mat: out, site })
    }

    /// Evolve along a path of directions in order.
    pub fn evolve_path(&self, path: &[usize]) -> Result<Self> {
        let mut st = self.clone();
        for &l in path {
            st = st.evolve(l)?;
        }
        Ok(st)
    }

    pub fn is_symmetric_tol(&self, tol: f64) -> bool {
        let n = self.n();
        for i in 0..n {
            for k in i + 1..n {
                let d = self.mat[i][k].clone() - self.mat[k][i].clone();
                if !d.is_zero_tol(tol) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_hermitian_tol(&self, tol: f64) -> bool {
        let n = self.n();
        for i in 0..n {
            for k in i..n {
                let d = self.mat[i][k].clone() - self.mat[k][i].conj();
                if !d.is_zero_tol(tol) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_real_tol(&self, tol: f64) -> bool {
        self.mat
            .iter()
            .flat_map(|r| r.iter())
            .all(|e| e.im().is_zero_tol(tol))
    }

    /// Minor over ordered 1-based row and column index tuples.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<T> {
        if rows.len() != cols.len() {
            return Err(MSystemError::IndexClash);
        }
        if has_repeats(rows) || has_repeats(cols) {
            return Err(MSystemError::IndexClash);
        }
        let k = rows.len();
        if k == 0 {
            return Ok(T::one());
        }
        let sub: Vec<Vec<T>> = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| self.entry(r, c).clone()).collect())
            .collect();
        Ok(det_entries(&sub, k))
    }

    pub fn principal_minor(&self, idx: &[usize]) -> Result<T> {
        self.minor(idx, idx)
    }

    /// Evolved minor `M^{A,B}` after the evolutions in `C`, computed from the
    /// base matrix as `M^{CA,CB} / M^{C,C}`.
    pub fn evolve_minor(&self, a: &[usize], b: &[usize], c: &[usize]) -> Result<T> {
        if c.iter().any(|&d| d == 0 || d > self.dirs()) {
            return Err(MSystemError::IndexClash);
        }
        if c.iter().any(|&d| a.contains(&d) || b.contains(&d)) || has_repeats(c) {
            return Err(MSystemError::IndexClash);
        }
        let ca: Vec<usize> = c.iter().chain(a.iter()).copied().collect();
        let cb: Vec<usize> = c.iter().chain(b.iter()).copied().collect();
        let num = self.minor(&ca, &cb)?;
        let den = self.principal_minor(c)?;
        num.checked_div(&den)
            .ok_or(MSystemError::SingularPivot(c.first().copied().unwrap_or(0)))
    }

    /// The trailing 2×2 block in row order `[[M^{n-1,n-1}, M^{n-1,n}],
    /// [M^{n,n-1}, M^{n,n}]]`.
    pub fn hat(&self) -> [[T; 2]; 2] {
        let n = self.n();
        [
            [
                self.entry(n - 1, n - 1).clone(),
                self.entry(n - 1, n).clone(),
            ],
            [self.entry(n, n - 1).clone(), self.entry(n, n).clone()],
        ]
    }

    pub fn det_hat(&self) -> T {
        let h = self.hat();
        h[0][0].clone() * h[1][1].clone() - h[0][1].clone() * h[1][0].clone()
    }

    /// Plücker 6-vector `(1, det ĥ, M^{44}, M^{55}, M^{54}, M^{45})` of the
    /// trailing block (indices shown for n = 5). Null for the (3,3) metric by
    /// construction.
    pub fn extract_pluecker(&self) -> [T; 6] {
        let h = self.hat();
        [
            T::one(),
            self.det_hat(),
            h[0][0].clone(),
            h[1][1].clone(),
            h[1][0].clone(),
            h[0][1].clone(),
        ]
    }

    /// Reduced 5-vector `(1, det ĥ, M^{44}, M^{55}, M^{45})` of a symmetric
    /// state; a point of the Lie quadric.
    pub fn extract_lie(&self) -> Result<[T; 5]> {
        let tol = 1e-9 * self.max_mag().max(1.0);
        if !self.is_symmetric_tol(tol) {
            return Err(MSystemError::ReductionViolated("symmetric"));
        }
        let h = self.hat();
        Ok([
            T::one(),
            self.det_hat(),
            h[0][0].clone(),
            h[1][1].clone(),
            h[0][1].clone(),
        ])
    }
}

impl<S: Scalar> MState<GCNum<S>> {
    /// Real 6-vector of a Hermitian state:
    /// `(1, det ĥ, M^{44}, M^{55}, Re M^{45}, Im M^{45})`, null under the
    /// metric with trailing block `diag(2, −2ε)`.
    pub fn extract_sphere(&self) -> Result<([S; 6], Epsilon)> {
        let tol = 1e-9 * self.max_mag().max(1.0);
        if !self.is_hermitian_tol(tol) {
            return Err(MSystemError::ReductionViolated("hermitian"));
        }
        let h = self.hat();
        let eps = h[0][1].eps;
        let det = self.det_hat();
        Ok((
            [
                S::one(),
                det.u,
                h[0][0].u.clone(),
                h[1][1].u.clone(),
                h[0][1].u.clone(),
                h[0][1].v.clone(),
            ],
            eps,
        ))
    }
}

fn has_repeats(idx: &[usize]) -> bool {
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return true;
            }
        }
    }
    false
}

fn det_entries<T: MEntry>(m: &[Vec<T>], n: usize) -> T {
    match n {
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        _ => {
            let mut acc = T::zero();
            for col in 0..n {
                let sub: Vec<Vec<T>> = (1..n)
                    .map(|r| {
                        (0..n)
                            .filter(|&c| c != col)
                            .map(|c| m[r][c].clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][col].clone() * det_entries(&sub, n - 1);
                acc = if col % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Inner product on 6-vectors for the metric
/// `blockdiag([[0,1],[1,0]], −[[0,1],[1,0]], [[0,1],[1,0]])`.
pub fn pluecker_inner<T: MEntry>(v: &[T; 6], w: &[T; 6]) -> T {
    v[0].clone() * w[1].clone() + v[1].clone() * w[0].clone()
        - v[2].clone() * w[3].clone()
        - v[3].clone() * w[2].clone()
        + v[4].clone() * w[5].clone()
        + v[5].clone() * w[4].clone()
}

/// Inner product on reduced 5-vectors, metric
/// `blockdiag([[0,1],[1,0]], −[[0,1],[1,0]], 2)`.
pub fn lie_inner<T: MEntry>(v: &[T; 5], w: &[T; 5]) -> T {
    let two = T::one() + T::one();
    v[0].clone() * w[1].clone() + v[1].clone() * w[0].clone()
        - v[2].clone() * w[3].clone()
        - v[3].clone() * w[2].clone()
        + two * v[4].clone() * w[4].clone()
}

/// Inner product on Hermitian 6-vectors, metric
/// `blockdiag([[0,1],[1,0]], −[[0,1],[1,0]], 2, −2ε)`.
pub fn sphere_inner<S: Scalar>(v: &[S; 6], w: &[S; 6], eps: Epsilon) -> S {
    let two = S::one() + S::one();
    let eps_term = match eps {
        Epsilon::MinusOne => two.clone() * v[5].clone() * w[5].clone(),
        Epsilon::Zero => S::zero(),
        Epsilon::PlusOne => -(two.clone() * v[5].clone() * w[5].clone()),
    };
    v[0].clone() * w[1].clone() + v[1].clone() * w[0].clone()
        - v[2].clone() * w[3].clone()
        - v[3].clone() * w[2].clone()
        + two * v[4].clone() * w[4].clone()
        + eps_term
}

/// τ values on the eight corners of the unit cube spanned by directions
/// (1,2,3): `τ_S = M^{S,S}·τ` for every subset S.
#[derive(Clone, Debug, PartialEq)]
pub struct TauStencil<T> {
    pub t: T,
    pub t1: T,
    pub t2: T,
    pub t3: T,
    pub t12: T,
    pub t13: T,
    pub t23: T,
    pub t123: T,
}

impl<T: MEntry> TauStencil<T> {
    pub fn as_array(&self) -> [T; 8] {
        [
            self.t.clone(),
            self.t1.clone(),
            self.t2.clone(),
            self.t3.clone(),
            self.t12.clone(),
            self.t13.clone(),
            self.t23.clone(),
            self.t123.clone(),
        ]
    }
}

/// Scalar potential over lattice offsets; keys are 0/1 offset vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauField<T> {
    pub values: BTreeMap<Vec<i64>, T>,
}

impl<T: MEntry> TauField<T> {
    /// CSV rows `n1,...,nd,value`, ordered by site.
    pub fn to_csv(&self) -> String
    where
        T: std::fmt::Display,
    {
        let mut out = String::new();
        for (site, v) in &self.values {
            let idx: Vec<String> = site.iter().map(|n| n.to_string()).collect();
            out.push_str(&idx.join(","));
            out.push(',');
            out.push_str(&format!("{v}\n"));
        }
        out
    }
}

/// Local τ stencil of a state: iterated shifts are principal minors.
pub fn tau_extend<T: MEntry>(m: &MState<T>, tau0: &T) -> Result<TauStencil<T>> {
    if tau0.is_zero() {
        return Err(MSystemError::ZeroTau);
    }
    let pm = |idx: &[usize]| -> Result<T> { Ok(m.principal_minor(idx)? * tau0.clone()) };
    Ok(TauStencil {
        t: tau0.clone(),
        t1: pm(&[1])?,
        t2: pm(&[2])?,
        t3: pm(&[3])?,
        t12: pm(&[1, 2])?,
        t13: pm(&[1, 3])?,
        t23: pm(&[2, 3])?,
        t123: pm(&[1, 2, 3])?,
    })
}

/// τ on every subset of the evolution directions, for export.
pub fn tau_field<T: MEntry>(m: &MState<T>, tau0: &T) -> Result<TauField<T>> {
    if tau0.is_zero() {
        return Err(MSystemError::ZeroTau);
    }
    let dirs = m.dirs();
    let mut values = BTreeMap::new();
    for mask in 0u32..(1 << dirs) {
        let idx: Vec<usize> = (0..dirs).filter(|d| mask & (1 << d) != 0).map(|d| d + 1).collect();
        let site: Vec<i64> = (0..dirs)
            .map(|d| if mask & (1 << d) != 0 { 1 } else { 0 })
            .collect();
        values.insert(site, m.principal_minor(&idx)? * tau0.clone());
    }
    Ok(TauField { values })
}

/// Cayley 2×2×2 hyperdeterminant form of the stencil:
/// `(ττ₁₂₃ + τ₁τ₂₃ − τ₂τ₁₃ − τ₃τ₁₂)² − 4(τ₁₂τ₁₃ − τ₁τ₁₂₃)(τ₂τ₃ − ττ₂₃)`.
/// Zero exactly when the stencil comes from a symmetric state.
pub fn dckp_residual<T: MEntry>(s: &TauStencil<T>) -> T {
    let four = {
        let two = T::one() + T::one();
        two.clone() * two
    };
    let lin = s.t.clone() * s.t123.clone() + s.t1.clone() * s.t23.clone()
        - s.t2.clone() * s.t13.clone()
        - s.t3.clone() * s.t12.clone();
    let f1 = s.t12.clone() * s.t13.clone() - s.t1.clone() * s.t123.clone();
    let f2 = s.t2.clone() * s.t3.clone() - s.t.clone() * s.t23.clone();
    lin.clone() * lin - four * f1 * f2
}

/// Recover the leading symmetric 3×3 block from a τ stencil:
/// `M^{ii} = τ_i/τ`, `|M^{ik}| = sqrt((τ_iτ_k − ττ_ik)/τ²)`, signs supplied by
/// the caller (one per off-diagonal edge, order (1,2),(1,3),(2,3)).
pub fn reconstruct_from_tau(
    s: &TauStencil<f64>,
    signs: [f64; 3],
) -> Result<[[f64; 3]; 3]> {
    if s.t == 0.0 {
        return Err(MSystemError::ZeroTau);
    }
    let diag = [s.t1 / s.t, s.t2 / s.t, s.t3 / s.t];
    let off = |ti: f64, tk: f64, tik: f64, sign: f64| -> Result<f64> {
        let disc = (ti * tk - s.t * tik) / (s.t * s.t);
        if disc < -1e-12 * disc.abs().max(1.0) {
            return Err(MSystemError::NegativeDiscriminant);
        }
        Ok(sign * disc.max(0.0).sqrt())
    };
    let m12 = off(s.t1, s.t2, s.t12, signs[0])?;
    let m13 = off(s.t1, s.t3, s.t13, signs[1])?;
    let m23 = off(s.t2, s.t3, s.t23, signs[2])?;
    Ok([
        [diag[0], m12, m13],
        [m12, diag[1], m23],
        [m13, m23, diag[2]],
    ])
}

/// The three τ stencils shifted into the auxiliary directions 4, 5 and 45;
/// each one satisfies the hyperdeterminant relation over the (1,2,3) cube.
pub struct BacklundTaus<T> {
    pub t4: TauStencil<T>,
    pub t5: TauStencil<T>,
    pub t45: TauStencil<T>,
}

pub fn backlund_tau<T: MEntry>(m: &MState<T>, tau0: &T) -> Result<BacklundTaus<T>> {
    if tau0.is_zero() {
        return Err(MSystemError::ZeroTau);
    }
    let tol = 1e-9 * m.max_mag().max(1.0);
    if !m.is_symmetric_tol(tol) {
        return Err(MSystemError::ReductionViolated("symmetric"));
    }
    let n = m.n();
    let (d4, d5) = (n - 1, n);
    let shifted = |extra: &[usize]| -> Result<TauStencil<T>> {
        let pm = |idx: &[usize]| -> Result<T> {
            let mut all = idx.to_vec();
            all.extend_from_slice(extra);
            Ok(m.principal_minor(&all)? * tau0.clone())
        };
        Ok(TauStencil {
            t: pm(&[])?,
            t1: pm(&[1])?,
            t2: pm(&[2])?,
            t3: pm(&[3])?,
            t12: pm(&[1, 2])?,
            t13: pm(&[1, 3])?,
            t23: pm(&[2, 3])?,
            t123: pm(&[1, 2, 3])?,
        })
    };
    Ok(BacklundTaus {
        t4: shifted(&[d4])?,
        t5: shifted(&[d5])?,
        t45: shifted(&[d4, d5])?,
    })
}

/// Lie-quadric 5-vector `(τ, τ₄₅, τ₄, τ₅, √(τ₄τ₅ − ττ₄₅))` built from the
/// four Bäcklund-related τ values at the base site; proportional to the
/// symmetric extraction, with the root sign fixed by the state itself.
pub fn backlund_lie_vector(m: &MState<f64>, tau0: f64) -> Result<[f64; 5]> {
    let bt = backlund_tau(m, &tau0)?;
    let (t, t4, t5, t45) = (tau0, bt.t4.t, bt.t5.t, bt.t45.t);
    let disc = t4 * t5 - t * t45;
    if disc < -1e-9 * disc.abs().max(1.0) {
        return Err(MSystemError::NegativeDiscriminant);
    }
    let n = m.n();
    let sign = if m.entry(n - 1, n) * t < 0.0 { -1.0 } else { 1.0 };
    Ok([t, t45, t4, t5, sign * disc.max(0.0).sqrt()])
}

/// JSON document for a state, real or hypercomplex entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MStateJson {
    pub n: usize,
    /// Row-major entries: numbers, or `[u, v]` pairs when `eps` is present.
    pub entries: Vec<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<i8>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl MStateJson {
    pub fn from_real(m: &MState<f64>) -> Self {
        let mut flags = Vec::new();
        let tol = 1e-9 * m.max_mag().max(1.0);
        if m.is_symmetric_tol(tol) {
            flags.push("symmetric".to_string());
        }
        MStateJson {
            n: m.n(),
            entries: m
                .matrix()
                .iter()
                .flat_map(|r| r.iter())
                .map(|&e| serde_json::json!(e))
                .collect(),
            eps: None,
            flags,
        }
    }

    pub fn to_real(&self) -> Result<MState<f64>> {
        let n = self.n;
        if self.entries.len() != n * n {
            return Err(MSystemError::BadDimension(n));
        }
        let vals: Vec<f64> = self
            .entries
            .iter()
            .map(|v| v.as_f64().unwrap_or(f64::NAN))
            .collect();
        let mat: Vec<Vec<f64>> = (0..n).map(|i| vals[i * n..(i + 1) * n].to_vec()).collect();
        MState::new(mat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    type Rat = BigRational;

    fn rat(n: i64) -> Rat {
        Rat::from_i64(n)
    }

    fn is0(x: &Rat) -> bool {
        x == &rat(0)
    }

    pub fn random_symmetric_rat(rng: &mut StdRng, n: usize) -> MState<Rat> {
        loop {
            let mut m = vec![vec![rat(0); n]; n];
            for i in 0..n {
                for k in i..n {
                    let v = rat(rng.gen_range(-9i64..=9));
                    m[i][k] = v.clone();
                    m[k][i] = v;
                }
            }
            for (i, row) in m.iter_mut().enumerate() {
                if is0(&row[i]) {
                    row[i] = rat(rng.gen_range(1i64..=9));
                }
            }
            let st = MState::new(m).unwrap();
            // demand usable pivots along every length-3 path
            if is0(&st.principal_minor(&[1]).unwrap())
                || is0(&st.principal_minor(&[1, 2]).unwrap())
                || is0(&st.principal_minor(&[1, 3]).unwrap())
                || is0(&st.principal_minor(&[2, 3]).unwrap())
                || is0(&st.principal_minor(&[1, 2, 3]).unwrap())
            {
                continue;
            }
            return st;
        }
    }

    #[test]
    fn uncoupled_entries_do_not_move() {
        // pivot row/column zero except the pivot itself: the complementary
        // block is untouched, only the pivot itself is swept to −1/M^{11}
        let mut m = vec![vec![0.0f64; 5]; 5];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 2.0 + i as f64;
        }
        m[3][4] = 1.5;
        m[4][3] = -0.5;
        let st = MState::new(m).unwrap();
        let ev = st.evolve(1).unwrap();
        for i in 2..=5 {
            for k in 2..=5 {
                assert_eq!(st.entry(i, k), ev.entry(i, k));
            }
        }
        assert_eq!(*ev.entry(1, 1), -0.5);
        assert_eq!(ev.site, vec![1, 0, 0]);
    }

    #[test]
    fn symmetric_reduction_survives_exactly() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let st = random_symmetric_rat(&mut rng, 5);
            let ev = st.evolve(1).unwrap().evolve(3).unwrap();
            assert!(ev.is_symmetric_tol(0.0));
        }
    }

    #[test]
    fn evolution_orders_commute_exactly() {
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..10 {
            let st = random_symmetric_rat(&mut rng, 5);
            let a = st.evolve_path(&[1, 2]).unwrap();
            let b = st.evolve_path(&[2, 1]).unwrap();
            assert_eq!(a.matrix(), b.matrix());
        }
    }

    #[test]
    fn singular_pivot_detected() {
        let mut m = vec![vec![1.0f64; 5]; 5];
        m[0][0] = 0.0;
        let st = MState::new(m).unwrap();
        assert_eq!(st.evolve(1).unwrap_err(), MSystemError::SingularPivot(1));
    }

    #[test]
    fn evolved_minor_matches_direct_evolution() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..10 {
            let st = random_symmetric_rat(&mut rng, 5);
            // C = (1): M^{4,5}_1 = M^{14,15}/M^{1,1}
            let via_formula = st.evolve_minor(&[4], &[5], &[1]).unwrap();
            let direct = st.evolve(1).unwrap().entry(4, 5).clone();
            assert_eq!(via_formula, direct);

            // C = (123), A = B = (45): det of the evolved trailing block
            let via3 = st.evolve_minor(&[4, 5], &[4, 5], &[1, 2, 3]).unwrap();
            let ev = st.evolve_path(&[1, 2, 3]).unwrap();
            assert_eq!(via3, ev.det_hat());
        }
    }

    #[test]
    fn empty_shift_is_plain_minor() {
        let mut rng = StdRng::seed_from_u64(6);
        let st = random_symmetric_rat(&mut rng, 5);
        assert_eq!(
            st.evolve_minor(&[4, 5], &[4, 5], &[]).unwrap(),
            st.minor(&[4, 5], &[4, 5]).unwrap()
        );
        assert_eq!(
            st.evolve_minor(&[1, 4], &[1, 5], &[1]).unwrap_err(),
            MSystemError::IndexClash
        );
    }

    #[test]
    fn pluecker_vector_is_null_and_contacts_neighbours() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..10 {
            let st = random_symmetric_rat(&mut rng, 5);
            let v = st.extract_pluecker();
            assert!(is0(&pluecker_inner(&v, &v)));
            for l in 1..=3 {
                let w = st.evolve(l).unwrap().extract_pluecker();
                assert!(is0(&pluecker_inner(&v, &w)));
            }
            // symmetric states stay in the hyperplane γ⁰³ = γ¹²
            assert_eq!(v[4], v[5]);
        }
    }

    #[test]
    fn lie_extraction_null_and_contact() {
        let mut rng = StdRng::seed_from_u64(8);
        let st = random_symmetric_rat(&mut rng, 5);
        let v = st.extract_lie().unwrap();
        assert!(is0(&lie_inner(&v, &v)));
        let w = st.evolve(2).unwrap().extract_lie().unwrap();
        assert!(is0(&lie_inner(&v, &w)));
    }

    #[test]
    fn tau_diagonal_case() {
        let mut m = vec![vec![0.0f64; 5]; 5];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0 + i as f64;
        }
        let st = MState::new(m).unwrap();
        let s = tau_extend(&st, &2.0).unwrap();
        assert_eq!(s.t12, 1.0 * 2.0 * 2.0);
        assert_eq!(s.t123, 1.0 * 2.0 * 3.0 * 2.0);
    }

    #[test]
    fn tau_path_independence() {
        // τ₁₂ from evolving in 1 then 2 equals evolving in 2 then 1 and the
        // principal-minor formula.
        let mut rng = StdRng::seed_from_u64(9);
        let st = random_symmetric_rat(&mut rng, 5);
        let tau0 = rat(1);
        let t1 = st.principal_minor(&[1]).unwrap() * tau0.clone();
        let t12_a = st.evolve(1).unwrap().principal_minor(&[2]).unwrap() * t1.clone();
        let t2 = st.principal_minor(&[2]).unwrap() * tau0.clone();
        let t12_b = st.evolve(2).unwrap().principal_minor(&[1]).unwrap() * t2;
        let t12_direct = st.principal_minor(&[1, 2]).unwrap() * tau0;
        assert_eq!(t12_a, t12_direct);
        assert_eq!(t12_b, t12_direct);
    }

    #[test]
    fn dckp_residual_examples() {
        let ones = TauStencil {
            t: 1.0,
            t1: 1.0,
            t2: 1.0,
            t3: 1.0,
            t12: 1.0,
            t13: 1.0,
            t23: 1.0,
            t123: 1.0,
        };
        assert_eq!(dckp_residual(&ones), 0.0);

        let mut rng = StdRng::seed_from_u64(10);
        for _ in 0..20 {
            let st = random_symmetric_rat(&mut rng, 5);
            let s = tau_extend(&st, &rat(3)).unwrap();
            assert!(is0(&dckp_residual(&s)));
        }
    }

    #[test]
    fn dckp_both_roots_annihilate() {
        // replacing τ₁₂₃ by the other root of the quadratic keeps residual 0
        let mut rng = StdRng::seed_from_u64(11);
        let st = random_symmetric_rat(&mut rng, 5);
        let s = tau_extend(&st, &rat(1)).unwrap();
        // quadratic aτ² + bτ + c in τ₁₂₃; other root = −b/a − τ₁₂₃
        let a = s.t.clone() * s.t.clone();
        let lin_rest = s.t1.clone() * s.t23.clone()
            - s.t2.clone() * s.t13.clone()
            - s.t3.clone() * s.t12.clone();
        let two = rat(2);
        let four = rat(4);
        let b = two * s.t.clone() * lin_rest
            + four * s.t1.clone() * (s.t2.clone() * s.t3.clone() - s.t.clone() * s.t23.clone());
        let other = -(b / a) - s.t123.clone();
        let mut s2 = s.clone();
        s2.t123 = other;
        assert!(is0(&dckp_residual(&s2)));
    }

    #[test]
    fn reconstruct_round_trip() {
        let mut rng = StdRng::seed_from_u64(12);
        let st = random_symmetric_rat(&mut rng, 5);
        let stf: Vec<Vec<f64>> = st
            .matrix()
            .iter()
            .map(|r| r.iter().map(|e| Scalar::to_f64(e)).collect())
            .collect();
        let stf = MState::new(stf).unwrap();
        let s = tau_extend(&stf, &1.0).unwrap();
        let signs = [
            stf.entry(1, 2).signum(),
            stf.entry(1, 3).signum(),
            stf.entry(2, 3).signum(),
        ];
        let rec = reconstruct_from_tau(&s, signs).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                assert!(
                    (rec[i][k] - stf.entry(i + 1, k + 1)).abs() < 1e-9 * stf.max_mag(),
                    "entry ({i},{k})"
                );
            }
        }
    }

    #[test]
    fn backlund_taus_satisfy_dckp() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..10 {
            let st = random_symmetric_rat(&mut rng, 5);
            let bt = backlund_tau(&st, &rat(1)).unwrap();
            assert!(is0(&dckp_residual(&bt.t4)));
            assert!(is0(&dckp_residual(&bt.t5)));
            assert!(is0(&dckp_residual(&bt.t45)));
            // 2×2 determinant identity: τ₄τ₅ − ττ₄₅ = (M⁴⁵τ)²
            let lhs = bt.t4.t.clone() * bt.t5.t.clone() - rat(1) * bt.t45.t.clone();
            let m45 = st.entry(4, 5).clone();
            assert_eq!(lhs, m45.clone() * m45);
        }
    }

    #[test]
    fn backlund_vector_matches_lie_extraction() {
        let mut rng = StdRng::seed_from_u64(14);
        let st = random_symmetric_rat(&mut rng, 5);
        let stf: Vec<Vec<f64>> = st
            .matrix()
            .iter()
            .map(|r| r.iter().map(|e| Scalar::to_f64(e)).collect())
            .collect();
        let stf = MState::new(stf).unwrap();
        let tau0 = 2.0;
        let v = backlund_lie_vector(&stf, tau0).unwrap();
        let lie = stf.extract_lie().unwrap();
        // proportional with factor τ
        for k in 0..5 {
            assert!((v[k] - tau0 * lie[k]).abs() < 1e-8 * stf.max_mag().powi(3));
        }
    }

    #[test]
    fn hermitian_over_double_matches_real_system() {
        // Hermitian entries A + jB over j² = +1 evolve exactly like the real
        // matrix A + B.
        let mut rng = StdRng::seed_from_u64(15);
        for _ in 0..10 {
            let n = 5;
            let mut a = vec![vec![rat(0); n]; n];
            let mut b = vec![vec![rat(0); n]; n];
            for i in 0..n {
                for k in i..n {
                    let va = rat(rng.gen_range(-5i64..=5));
                    a[i][k] = va.clone();
                    a[k][i] = va;
                    if i != k {
                        let vb = rat(rng.gen_range(-5i64..=5));
                        b[i][k] = vb.clone();
                        b[k][i] = -vb;
                    }
                }
                if is0(&a[i][i]) {
                    a[i][i] = rat(rng.gen_range(1i64..=5));
                }
            }
            let gc_mat: Vec<Vec<GCNum<Rat>>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|k| GCNum::new(a[i][k].clone(), b[i][k].clone(), Epsilon::PlusOne))
                        .collect()
                })
                .collect();
            let real_mat: Vec<Vec<Rat>> = (0..n)
                .map(|i| (0..n).map(|k| a[i][k].clone() + b[i][k].clone()).collect())
                .collect();
            let herm = MState::new(gc_mat).unwrap();
            assert!(herm.is_hermitian_tol(0.0));
            let real = MState::new(real_mat).unwrap();
            if is0(real.entry(1, 1)) || MEntry::is_zero(herm.entry(1, 1)) {
                continue;
            }
            let (Ok(he), Ok(re)) = (herm.evolve(1), real.evolve(1)) else {
                continue;
            };
            assert!(he.is_hermitian_tol(0.0));
            for i in 1..=n {
                for k in 1..=n {
                    let sum = he.entry(i, k).u.clone() + he.entry(i, k).v.clone();
                    assert_eq!(&sum, re.entry(i, k));
                }
            }
        }
    }

    #[test]
    fn hermitian_sphere_vector_null_for_all_eps() {
        let mut rng = StdRng::seed_from_u64(16);
        for eps in Epsilon::ALL {
            let n = 5;
            let mut mat = vec![vec![GCNum::zero(eps); n]; n];
            for i in 0..n {
                for k in i..n {
                    let u = rat(rng.gen_range(-5i64..=5));
                    let v = if i == k {
                        rat(0)
                    } else {
                        rat(rng.gen_range(-5i64..=5))
                    };
                    mat[i][k] = GCNum::new(u.clone(), v.clone(), eps);
                    mat[k][i] = GCNum::new(u, -v, eps);
                }
            }
            let st = MState::new(mat).unwrap();
            let (v6, e) = st.extract_sphere().unwrap();
            assert_eq!(e, eps);
            assert!(is0(&sphere_inner(&v6, &v6, eps)));
        }
    }
}
