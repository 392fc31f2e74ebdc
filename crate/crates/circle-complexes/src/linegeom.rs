//! Real projective line geometry: the Plücker embedding of lines in P³ into
//! the (3,3) quadric, linear line complexes, the correlation induced by a
//! spatial hexagon, and completion of a cube of lines from seven of its eight
//! vertices.

use crate::linalg::{self, Kernel, Mat};
use crate::scalar::{max_mag, Scalar};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LineGeomError {
    #[error("the two spanning points coincide projectively")]
    DegenerateLine,
    #[error("lines are skew (no intersection point)")]
    SkewLines,
    #[error("lines are projectively identical")]
    IdenticalLines,
    #[error("hexagon is degenerate: correlation solution space has dimension != 1")]
    DegenerateHexagon,
    #[error("linear complex is degenerate (det = 0)")]
    DegenerateComplex,
    #[error("line does not belong to the linear complex")]
    LineNotInComplex,
    #[error("cube is inconsistent: {0}")]
    InconsistentCube(&'static str),
    #[error("6-vector does not satisfy the quadric identity")]
    NotOnQuadric,
}

type Result<T> = std::result::Result<T, LineGeomError>;

pub const DEFAULT_TOL: f64 = 1e-9;

/// A point of P³ in homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint<S: Scalar> {
    pub coords: [S; 4],
}

impl<S: Scalar> HPoint<S> {
    pub fn new(coords: [S; 4]) -> Self {
        HPoint { coords }
    }

    pub fn from_i64(c: [i64; 4]) -> Self {
        HPoint::new([
            S::from_i64(c[0]),
            S::from_i64(c[1]),
            S::from_i64(c[2]),
            S::from_i64(c[3]),
        ])
    }

    pub fn basis(k: usize) -> Self {
        let mut c = [S::zero(), S::zero(), S::zero(), S::zero()];
        c[k] = S::one();
        HPoint::new(c)
    }

    pub fn mag(&self) -> f64 {
        max_mag(&self.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Scale so the entry of largest magnitude becomes +1.
    pub fn normalized(&self) -> Self {
        let mut best = 0usize;
        for k in 1..4 {
            if self.coords[k].mag() > self.coords[best].mag() {
                best = k;
            }
        }
        let d = self.coords[best].clone();
        if d.is_zero() {
            return self.clone();
        }
        HPoint::new([
            self.coords[0].clone() / d.clone(),
            self.coords[1].clone() / d.clone(),
            self.coords[2].clone() / d.clone(),
            self.coords[3].clone() / d,
        ])
    }

    /// Projective equality: every 2×2 minor of the 2×4 stack vanishes.
    pub fn proj_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.mag() * other.mag();
        if scale == 0.0 {
            return self.is_zero() && other.is_zero();
        }
        for i in 0..4 {
            for j in i + 1..4 {
                let m = self.coords[i].clone() * other.coords[j].clone()
                    - self.coords[j].clone() * other.coords[i].clone();
                if !m.is_zero_tol(tol * scale) {
                    return false;
                }
            }
        }
        true
    }
}

/// A line of P³ spanned by two projectively distinct points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjLine<S: Scalar> {
    pub a: HPoint<S>,
    pub b: HPoint<S>,
}

impl<S: Scalar> ProjLine<S> {
    pub fn new(a: HPoint<S>, b: HPoint<S>) -> Result<Self> {
        let l = ProjLine { a, b };
        if l.a.is_zero() || l.b.is_zero() || l.a.proj_eq(&l.b, DEFAULT_TOL) {
            return Err(LineGeomError::DegenerateLine);
        }
        Ok(l)
    }

    pub fn mag(&self) -> f64 {
        self.a.mag().max(self.b.mag())
    }
}

/// Plücker coordinates `(γ⁰¹, γ²³, γ⁰², γ¹³, γ⁰³, γ¹²)` of a line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlueckerVec<S: Scalar> {
    pub g: [S; 6],
}

const INDEX_PAIRS: [(usize, usize); 6] = [(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)];

impl<S: Scalar> PlueckerVec<S> {
    pub fn new(g: [S; 6]) -> Self {
        PlueckerVec { g }
    }

    pub fn mag(&self) -> f64 {
        max_mag(&self.g)
    }

    /// `⟨V,V⟩`, which is twice the Plücker expression
    /// `γ⁰¹γ²³ − γ⁰²γ¹³ + γ⁰³γ¹²`.
    pub fn self_inner(&self) -> S {
        quadric_inner(self, self)
    }

    pub fn proj_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.mag() * other.mag();
        if scale == 0.0 {
            return false;
        }
        for i in 0..6 {
            for j in i + 1..6 {
                let m = self.g[i].clone() * other.g[j].clone()
                    - self.g[j].clone() * other.g[i].clone();
                if !m.is_zero_tol(tol * scale) {
                    return false;
                }
            }
        }
        true
    }
}

/// Inner product for the signature-(3,3) metric
/// `blockdiag([[0,1],[1,0]], −[[0,1],[1,0]], [[0,1],[1,0]])`.
/// Vanishes exactly when the two lines intersect.
pub fn quadric_inner<S: Scalar>(v: &PlueckerVec<S>, w: &PlueckerVec<S>) -> S {
    let g = &v.g;
    let h = &w.g;
    g[0].clone() * h[1].clone() + g[1].clone() * h[0].clone()
        - g[2].clone() * h[3].clone()
        - g[3].clone() * h[2].clone()
        + g[4].clone() * h[5].clone()
        + g[5].clone() * h[4].clone()
}

/// Plücker embedding: the six 2×2 minors of the 4×2 matrix of spanning points.
pub fn pluecker_embed<S: Scalar>(l: &ProjLine<S>) -> Result<PlueckerVec<S>> {
    let a = &l.a.coords;
    let b = &l.b.coords;
    let mut g = [
        S::zero(),
        S::zero(),
        S::zero(),
        S::zero(),
        S::zero(),
        S::zero(),
    ];
    for (slot, (mu, nu)) in INDEX_PAIRS.iter().enumerate() {
        g[slot] = a[*mu].clone() * b[*nu].clone() - a[*nu].clone() * b[*mu].clone();
    }
    let v = PlueckerVec::new(g);
    if v.mag() <= DEFAULT_TOL * l.a.mag() * l.b.mag() {
        return Err(LineGeomError::DegenerateLine);
    }
    Ok(v)
}

/// Recover a spanning-point representation from Plücker coordinates.
/// The antisymmetric matrix `Γ` built from the six coordinates has rank 2 on
/// the quadric and its columns span the line.
pub fn pluecker_to_line<S: Scalar>(v: &PlueckerVec<S>) -> Result<ProjLine<S>> {
    let scale = v.mag();
    if !v.self_inner().is_zero_tol(1e-7 * scale * scale) {
        return Err(LineGeomError::NotOnQuadric);
    }
    let mut gamma = vec![vec![S::zero(); 4]; 4];
    for (slot, (mu, nu)) in INDEX_PAIRS.iter().enumerate() {
        gamma[*mu][*nu] = v.g[slot].clone();
        gamma[*nu][*mu] = -v.g[slot].clone();
    }
    let cols: Vec<HPoint<S>> = (0..4)
        .map(|c| {
            HPoint::new([
                gamma[0][c].clone(),
                gamma[1][c].clone(),
                gamma[2][c].clone(),
                gamma[3][c].clone(),
            ])
        })
        .collect();
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| {
        cols[j]
            .mag()
            .partial_cmp(&cols[i].mag())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let first = cols[order[0]].clone();
    for &k in &order[1..] {
        let cand = cols[k].clone();
        if cand.mag() > 1e-12 * scale && !first.proj_eq(&cand, 1e-9) {
            return ProjLine::new(first, cand);
        }
    }
    Err(LineGeomError::DegenerateLine)
}

/// Point of intersection of two coplanar lines.
pub fn intersection_point<S: Kernel>(
    l1: &ProjLine<S>,
    l2: &ProjLine<S>,
) -> Result<HPoint<S>> {
    // p = α a₁ + β b₁ = γ a₂ + δ b₂: kernel of the matrix with those columns.
    let cols = [&l1.a, &l1.b, &l2.a, &l2.b];
    let m: Mat<S> = (0..4)
        .map(|r| {
            vec![
                cols[0].coords[r].clone(),
                cols[1].coords[r].clone(),
                -cols[2].coords[r].clone(),
                -cols[3].coords[r].clone(),
            ]
        })
        .collect();
    let (rank, _gap, basis) = S::kernel(&m);
    match rank {
        4 => Err(LineGeomError::SkewLines),
        3 => {
            let k = &basis[0];
            let p = HPoint::new([
                k[0].clone() * l1.a.coords[0].clone() + k[1].clone() * l1.b.coords[0].clone(),
                k[0].clone() * l1.a.coords[1].clone() + k[1].clone() * l1.b.coords[1].clone(),
                k[0].clone() * l1.a.coords[2].clone() + k[1].clone() * l1.b.coords[2].clone(),
                k[0].clone() * l1.a.coords[3].clone() + k[1].clone() * l1.b.coords[3].clone(),
            ]);
            if p.mag() <= 1e-12 * l1.mag().max(l2.mag()) {
                return Err(LineGeomError::IdenticalLines);
            }
            Ok(p.normalized())
        }
        _ => Err(LineGeomError::IdenticalLines),
    }
}

/// Residual of `p` lying on `l` (0 means incident), relative to the scales.
pub fn point_on_line_residual<S: Scalar>(p: &HPoint<S>, l: &ProjLine<S>) -> f64 {
    // p on l iff the 3×4 stack [a; b; p] has rank 2, i.e. all 3×3 minors vanish.
    let rows = [&l.a.coords, &l.b.coords, &p.coords];
    let mut worst: f64 = 0.0;
    for drop in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != drop).collect();
        let m: Mat<S> = rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
            .collect();
        worst = worst.max(linalg::det(&m).mag());
    }
    worst / (l.a.mag() * l.b.mag() * p.mag()).max(f64::MIN_POSITIVE)
}

/// An antisymmetric bilinear form; its null lines form a linear line complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearComplex<S: Scalar> {
    pub l: Mat<S>,
}

impl<S: Scalar> LinearComplex<S> {
    pub fn new(l: Mat<S>) -> Self {
        debug_assert!(l.len() == 4 && l.iter().all(|r| r.len() == 4));
        LinearComplex { l }
    }

    /// The complex `γ⁰³ = γ¹²`, the one every symmetric matrix evolution
    /// stays inside. `aᵀΛb` for this Λ equals `γ¹² − γ⁰³` of the line `[a,b]`.
    pub fn canonical() -> Self {
        let mut l = vec![vec![S::zero(); 4]; 4];
        l[1][2] = S::one();
        l[2][1] = -S::one();
        l[0][3] = -S::one();
        l[3][0] = S::one();
        LinearComplex::new(l)
    }

    pub fn mag(&self) -> f64 {
        self.l
            .iter()
            .flat_map(|r| r.iter())
            .map(|v| v.mag())
            .fold(0.0, f64::max)
    }

    pub fn is_degenerate(&self, tol: f64) -> bool {
        let scale = self.mag().max(f64::MIN_POSITIVE);
        linalg::det(&self.l).mag() <= tol * scale.powi(4)
    }

    pub fn pairing(&self, a: &HPoint<S>, b: &HPoint<S>) -> S {
        let la = linalg::mat_vec(&self.l, &b.coords);
        let mut acc = S::zero();
        for (x, y) in a.coords.iter().zip(la.iter()) {
            acc = acc + x.clone() * y.clone();
        }
        acc
    }
}

/// `true` iff `aᵀΛb = 0` within `tol` (relative); independent of the choice of
/// spanning points.
pub fn in_linear_complex<S: Scalar>(lc: &LinearComplex<S>, l: &ProjLine<S>, tol: f64) -> bool {
    let scale = lc.mag() * l.a.mag() * l.b.mag();
    lc.pairing(&l.a, &l.b).is_zero_tol(tol * scale.max(f64::MIN_POSITIVE))
}

/// The unique line `l'` with `yᵀΛx = 0` for all `x ∈ l`, `y ∈ l'`. Every line
/// connecting a point of `l` with a point of `l'` belongs to the complex.
pub fn orthogonal_complement_line<S: Kernel>(
    lc: &LinearComplex<S>,
    l: &ProjLine<S>,
) -> Result<ProjLine<S>> {
    if lc.is_degenerate(1e-12) {
        return Err(LineGeomError::DegenerateComplex);
    }
    let ra = linalg::mat_vec(&lc.l, &l.a.coords);
    let rb = linalg::mat_vec(&lc.l, &l.b.coords);
    let m: Mat<S> = vec![ra, rb];
    let (_rank, _gap, basis) = S::kernel(&m);
    if basis.len() != 2 {
        return Err(LineGeomError::DegenerateComplex);
    }
    ProjLine::new(
        HPoint::new([
            basis[0][0].clone(),
            basis[0][1].clone(),
            basis[0][2].clone(),
            basis[0][3].clone(),
        ]),
        HPoint::new([
            basis[1][0].clone(),
            basis[1][1].clone(),
            basis[1][2].clone(),
            basis[1][3].clone(),
        ]),
    )
}

/// The symmetric matrix of a correlation (a polarity) of P³.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correlation<S: Scalar> {
    pub b: Mat<S>,
}

impl<S: Scalar> Correlation<S> {
    pub fn mag(&self) -> f64 {
        self.b
            .iter()
            .flat_map(|r| r.iter())
            .map(|v| v.mag())
            .fold(0.0, f64::max)
    }
}

const SYM_INDEX: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

/// The unique polarity mapping each vertex of a spatial hexagon to the plane
/// of the three opposite vertices: `(x^{i+2})ᵀBx^i = (x^{i+3})ᵀBx^i =
/// (x^{i+4})ᵀBx^i = 0` for all i mod 6.
///
/// The 18 conditions have rank 9 on the 10 symmetric unknowns for a hexagon
/// in general position; rank-revealing kernel extraction rejects anything
/// else as [`LineGeomError::DegenerateHexagon`].
pub fn hexagon_correlation<S: Kernel>(xs: &[HPoint<S>; 6]) -> Result<Correlation<S>> {
    let xs: Vec<HPoint<S>> = xs.iter().map(|x| x.normalized()).collect();
    let mut rows: Mat<S> = Vec::with_capacity(18);
    for i in 0..6 {
        for d in [2usize, 3, 4] {
            let p = &xs[(i + d) % 6].coords;
            let q = &xs[i].coords;
            let mut row = Vec::with_capacity(10);
            for &(k, l) in SYM_INDEX.iter() {
                let c = if k == l {
                    p[k].clone() * q[k].clone()
                } else {
                    p[k].clone() * q[l].clone() + p[l].clone() * q[k].clone()
                };
                row.push(c);
            }
            rows.push(row);
        }
    }
    let (rank, gap, basis) = S::kernel(&rows);
    if rank != 9 || basis.len() != 1 || (!S::EXACT && gap < 1e6) {
        return Err(LineGeomError::DegenerateHexagon);
    }
    let sol = &basis[0];
    let mut b = vec![vec![S::zero(); 4]; 4];
    for (slot, &(k, l)) in SYM_INDEX.iter().enumerate() {
        b[k][l] = sol[slot].clone();
        b[l][k] = sol[slot].clone();
    }
    // Fix scale and sign: unit Frobenius norm in float mode, largest entry +1
    // in exact mode; the largest-magnitude entry is made positive either way.
    let (mut bi, mut bj) = (0usize, 0usize);
    for i in 0..4 {
        for j in 0..4 {
            if b[i][j].mag() > b[bi][bj].mag() {
                (bi, bj) = (i, j);
            }
        }
    }
    let denom = if S::EXACT {
        b[bi][bj].clone()
    } else {
        let frob: f64 = b
            .iter()
            .flat_map(|r| r.iter())
            .map(|v| v.to_f64() * v.to_f64())
            .sum::<f64>()
            .sqrt();
        let sign = if b[bi][bj].to_f64() < 0.0 { -1.0 } else { 1.0 };
        S::from_f64_approx(sign * frob)
    };
    for row in b.iter_mut() {
        for e in row.iter_mut() {
            *e = e.clone() / denom.clone();
        }
    }
    Ok(Correlation { b })
}

/// Image of a line under the correlation: the intersection of the two polar
/// planes of its spanning points.
pub fn correlation_image<S: Kernel>(
    corr: &Correlation<S>,
    l: &ProjLine<S>,
) -> Result<ProjLine<S>> {
    let ra = linalg::mat_vec(&corr.b, &l.a.coords);
    let rb = linalg::mat_vec(&corr.b, &l.b.coords);
    let (_rank, _gap, basis) = S::kernel(&vec![ra, rb]);
    if basis.len() != 2 {
        return Err(LineGeomError::DegenerateHexagon);
    }
    ProjLine::new(
        HPoint::new([
            basis[0][0].clone(),
            basis[0][1].clone(),
            basis[0][2].clone(),
            basis[0][3].clone(),
        ]),
        HPoint::new([
            basis[1][0].clone(),
            basis[1][1].clone(),
            basis[1][2].clone(),
            basis[1][3].clone(),
        ]),
    )
}

/// Correlation restricted to a nondegenerate linear complex: maps `[a, b]`
/// to `[Λ⁻¹Ba, Λ⁻¹Bb]`, which lies in the complex again, and squares to the
/// identity on lines.
pub fn correlate_line<S: Kernel>(
    corr: &Correlation<S>,
    lc: &LinearComplex<S>,
    l: &ProjLine<S>,
) -> Result<ProjLine<S>> {
    if lc.is_degenerate(1e-12) {
        return Err(LineGeomError::DegenerateComplex);
    }
    if !in_linear_complex(lc, l, 1e-6) {
        return Err(LineGeomError::LineNotInComplex);
    }
    let ba = linalg::mat_vec(&corr.b, &l.a.coords);
    let bb = linalg::mat_vec(&corr.b, &l.b.coords);
    let ia = linalg::solve(&lc.l, &ba, 1e-13).ok_or(LineGeomError::DegenerateComplex)?;
    let ib = linalg::solve(&lc.l, &bb, 1e-13).ok_or(LineGeomError::DegenerateComplex)?;
    ProjLine::new(
        HPoint::new([ia[0].clone(), ia[1].clone(), ia[2].clone(), ia[3].clone()]),
        HPoint::new([ib[0].clone(), ib[1].clone(), ib[2].clone(), ib[3].clone()]),
    )
}

/// Cube completion through the hexagon correlation. `seven` is ordered
/// `[l, l1, l2, l3, l12, l23, l13]`; the returned line intersects
/// `l12, l23, l13` and is the correlation image of `l`.
pub fn complete_fundamental_cube<S: Kernel>(
    seven: &[ProjLine<S>; 7],
) -> Result<ProjLine<S>> {
    let [l, l1, l2, l3, l12, l23, l13] = seven;
    for (p, q) in [(l, l1), (l, l2), (l, l3)] {
        intersection_point(p, q)
            .map_err(|_| LineGeomError::InconsistentCube("base edges must intersect"))?;
    }
    let hexagon = [
        (l1, l12),
        (l12, l2),
        (l2, l23),
        (l23, l3),
        (l3, l13),
        (l13, l1),
    ];
    let mut xs = Vec::with_capacity(6);
    for (p, q) in hexagon {
        xs.push(
            intersection_point(p, q)
                .map_err(|_| LineGeomError::InconsistentCube("hexagon edges must intersect"))?,
        );
    }
    let xs: [HPoint<S>; 6] = xs.try_into().map_err(|_| LineGeomError::DegenerateHexagon)?;
    let corr = hexagon_correlation(&xs)?;
    let l123 = correlation_image(&corr, l)?;
    for other in [l12, l23, l13] {
        let v = pluecker_embed(&l123)?;
        let w = pluecker_embed(other)?;
        let ip = quadric_inner(&v, &w);
        if !ip.is_zero_tol(1e-6 * v.mag() * w.mag()) {
            return Err(LineGeomError::InconsistentCube(
                "correlation image misses an opposite edge",
            ));
        }
    }
    Ok(l123)
}

/// Cube completion through the diagonal construction: intersect same-type
/// diagonals to find the concurrency points, intersect the transferred
/// diagonals to get the three far edge points, and join them. Serves as an
/// independent check on [`complete_fundamental_cube`].
pub fn complete_cube_by_diagonals<S: Kernel>(
    seven: &[ProjLine<S>; 7],
) -> Result<ProjLine<S>> {
    let [l, l1, l2, l3, l12, l23, l13] = seven;
    let line = |m: usize| -> &ProjLine<S> {
        match m {
            1 => l1,
            2 => l2,
            3 => l3,
            _ => unreachable!(),
        }
    };
    let line2 = |m: usize, n: usize| -> &ProjLine<S> {
        match (m.min(n), m.max(n)) {
            (1, 2) => l12,
            (2, 3) => l23,
            (1, 3) => l13,
            _ => unreachable!(),
        }
    };
    let inconsistent = |_e: LineGeomError| LineGeomError::InconsistentCube("missing intersection");

    // p[l] = l ∩ l_l, pm[(l, m)] = l_m ∩ l_{lm}
    let mut p = std::collections::BTreeMap::new();
    let mut pm = std::collections::BTreeMap::new();
    for i in 1..=3usize {
        p.insert(i, intersection_point(l, line(i)).map_err(inconsistent)?);
        for m in 1..=3usize {
            if m == i {
                continue;
            }
            pm.insert(
                (i, m),
                intersection_point(line(m), line2(i, m)).map_err(inconsistent)?,
            );
        }
    }

    // Diagonals d[(i, m)] through p[i] and pm[(i, m)], and the concurrency
    // points p^{(m)} of same-type pairs.
    let mut diag = std::collections::BTreeMap::new();
    for (&(i, m), q) in pm.iter() {
        diag.insert((i, m), ProjLine::new(p[&i].clone(), q.clone())?);
    }
    let mut conc = std::collections::BTreeMap::new();
    for m in 1..=3usize {
        let others: Vec<usize> = (1..=3).filter(|&x| x != m).collect();
        let d1 = &diag[&(others[0], m)];
        let d2 = &diag[&(others[1], m)];
        conc.insert(m, intersection_point(d1, d2).map_err(inconsistent)?);
    }

    // Far edge points p^i_{mn} = [pm(i,n), p^{(m)}] ∩ [pm(i,m), p^{(n)}].
    let mut far = Vec::with_capacity(3);
    for i in 1..=3usize {
        let others: Vec<usize> = (1..=3).filter(|&x| x != i).collect();
        let (m, n) = (others[0], others[1]);
        let g1 = ProjLine::new(pm[&(i, n)].clone(), conc[&m].clone())?;
        let g2 = ProjLine::new(pm[&(i, m)].clone(), conc[&n].clone())?;
        far.push(intersection_point(&g1, &g2).map_err(inconsistent)?);
    }

    // The three far points are collinear; join the best-separated pair.
    let l123 = ProjLine::new(far[0].clone(), far[1].clone())?;
    let res = point_on_line_residual(&far[2], &l123);
    if res > 1e-5 {
        return Err(LineGeomError::InconsistentCube(
            "far edge points are not collinear",
        ));
    }
    Ok(l123)
}

/// Normalised coplanarity determinants of the three quadrilaterals
/// `[p^l, p^l_m, p^l_{mp}, p^l_p]` of a full cube of eight lines
/// (ordered `[l, l1, l2, l3, l12, l23, l13, l123]`).
pub fn cube_coplanarity_residuals<S: Kernel>(
    eight: &[ProjLine<S>; 8],
) -> Result<Vec<f64>> {
    let [l, l1, l2, l3, l12, l23, l13, l123] = eight;
    let line = |m: usize| -> &ProjLine<S> {
        match m {
            1 => l1,
            2 => l2,
            3 => l3,
            _ => unreachable!(),
        }
    };
    let line2 = |m: usize, n: usize| -> &ProjLine<S> {
        match (m.min(n), m.max(n)) {
            (1, 2) => l12,
            (2, 3) => l23,
            (1, 3) => l13,
            _ => unreachable!(),
        }
    };
    let mut out = Vec::with_capacity(3);
    for i in 1..=3usize {
        let others: Vec<usize> = (1..=3).filter(|&x| x != i).collect();
        let (m, n) = (others[0], others[1]);
        let q = [
            intersection_point(l, line(i))?,
            intersection_point(line(m), line2(i, m))?,
            intersection_point(line2(m, n), l123)?,
            intersection_point(line(n), line2(i, n))?,
        ];
        let rows: Mat<S> = q.iter().map(|h| h.normalized().coords.to_vec()).collect();
        out.push(linalg::det(&rows).mag());
    }
    Ok(out)
}
