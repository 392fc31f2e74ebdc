//! Construction of lattice complexes from one-dimensional Cauchy data.
//!
//! The even sublattice is reconstructed slice by slice: the three 120°
//! sectors of the base slice are filled by the nine-point evolution from a
//! star of double rows along three arms; circles arise as circumscribed loci
//! of slice triangles, points of the next slices as their pairwise second
//! intersections, constrained by the concurrency of the third circle.

use super::gcplane::{EuclideanLocus, GCircle};
use super::lattice::{idx3, parity, Flag, Idx, LatticeComplex, Site};
use super::ninepoint::nine_point_evolve;
use super::ComplexError;
use crate::hypercomplex::{multi_ratio, Epsilon, GCNum, GC};
use crate::liecircle::{self, LieElement};
use rand::rngs::StdRng;
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

type Result<T> = std::result::Result<T, ComplexError>;

type Vec3 = [i64; 3];

fn add3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale3(a: Vec3, s: i64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn unit(axis: usize) -> Vec3 {
    let mut v = [0i64; 3];
    v[axis] = 1;
    v
}

/// Arm directions of the star, 120° apart: `d₀ = e₁−e₃`, `d₁ = e₂−e₁`,
/// `d₂ = e₃−e₂`.
fn arm(j: usize) -> Vec3 {
    match j % 3 {
        0 => [1, 0, -1],
        1 => [-1, 1, 0],
        _ => [0, -1, 1],
    }
}

/// Cyclic axis rotation `e₁ → e₂ → e₃ → e₁`, iterated `k` times.
fn rotate(v: Vec3, k: usize) -> Vec3 {
    match k % 3 {
        0 => v,
        1 => [v[2], v[0], v[1]],
        _ => [v[1], v[2], v[0]],
    }
}

const U: Vec3 = [1, 0, -1]; // e₁ − e₃
const V: Vec3 = [0, 1, -1]; // e₂ − e₃

/// Offsets (relative to the solved site, before rotation) of the nine-point
/// arguments `(a0, b0, b1, a1, c1, b2, a2, c2)` for the tip-swapped move.
fn move_offsets() -> [Vec3; 8] {
    let uv = |cu: i64, cv: i64| add3(scale3(U, cu), scale3(V, cv));
    [
        uv(1, 0),  // a0
        uv(2, 0),  // b0
        uv(2, -1), // b1
        uv(2, -2), // a1
        uv(1, -1), // c1
        uv(1, 1),  // b2
        uv(0, 2),  // a2
        uv(0, 1),  // c2
    ]
}

/// Rotation applied to the move of sector `j` (the sector spanned by
/// `arm(j)` and `arm(j+1)`).
fn sector_rotation(j: usize) -> usize {
    // sector 1 uses the unrotated move; rotating the lattice by one cyclic
    // step advances the sector index by one
    (j + 2) % 3
}

/// Up-type hexagonal cycle around a site of index sum +2 relative to the
/// base slice, and its down-type mirror.
fn hexagon_up(s: Vec3) -> [Vec3; 6] {
    let e = [unit(0), unit(1), unit(2)];
    [
        add3(s, scale3(add3(e[2], e[0]), -1)),
        add3(s, scale3(e[0], -2)),
        add3(s, scale3(add3(e[0], e[1]), -1)),
        add3(s, scale3(e[1], -2)),
        add3(s, scale3(add3(e[1], e[2]), -1)),
        add3(s, scale3(e[2], -2)),
    ]
}

fn hexagon_down(s: Vec3) -> [Vec3; 6] {
    let e = [unit(0), unit(1), unit(2)];
    [
        add3(s, add3(e[0], e[2])),
        add3(s, scale3(e[2], 2)),
        add3(s, add3(e[1], e[2])),
        add3(s, scale3(e[1], 2)),
        add3(s, add3(e[0], e[1])),
        add3(s, scale3(e[0], 2)),
    ]
}

/// Normalised j-part of the multi-ratio of a hexagonal cycle; None when a
/// denominator degenerates.
fn hexagon_residual(pts: &BTreeMap<Vec3, GC>, cycle: &[Vec3; 6]) -> Option<f64> {
    let vals: Vec<&GC> = cycle.iter().map(|s| pts.get(s)).collect::<Option<_>>()?;
    let m = multi_ratio(vals[0], vals[1], vals[2], vals[3], vals[4], vals[5]).ok()?;
    Some(m.v.abs() / m.mag().max(1.0))
}

/// One-dimensional Cauchy data: hypercomplex values on the three-armed star.
#[derive(Clone, Debug)]
pub struct CauchyData1D {
    pub eps: Epsilon,
    pub extent: usize,
    pub points: BTreeMap<Vec3, GC>,
}

impl CauchyData1D {
    /// Sites of the star: for each sector, the two rows along either
    /// bounding arm.
    pub fn star_sites(extent: usize) -> BTreeSet<Vec3> {
        let r = extent as i64;
        let mut out = BTreeSet::new();
        for j in 0..3 {
            let (dj, dj1) = (arm(j), arm(j + 1));
            for a in 0..=1i64 {
                for b in 0..=r {
                    out.insert(add3(scale3(dj, a), scale3(dj1, b)));
                }
            }
            for b in 0..=1i64 {
                for a in 0..=r {
                    out.insert(add3(scale3(dj, a), scale3(dj1, b)));
                }
            }
        }
        out
    }

    /// All hexagon constraints whose six sites lie inside the star: the
    /// central admissibility conditions on the data.
    pub fn interior_hexagons(extent: usize) -> Vec<[Vec3; 6]> {
        let star = Self::star_sites(extent);
        let mut out = Vec::new();
        let range = 3i64;
        for x in -range..=range {
            for y in -range..=range {
                for z in -range..=range {
                    let s = [x, y, z];
                    let sum = x + y + z;
                    if sum == 2 {
                        let hx = hexagon_up(s);
                        if hx.iter().all(|p| star.contains(p)) {
                            out.push(hx);
                        }
                    } else if sum == -2 {
                        let hx = hexagon_down(s);
                        if hx.iter().all(|p| star.contains(p)) {
                            out.push(hx);
                        }
                    }
                }
            }
        }
        out
    }

    /// Worst constraint residual of the data.
    pub fn central_residual(&self) -> f64 {
        CauchyData1D::interior_hexagons(self.extent)
            .iter()
            .filter_map(|h| hexagon_residual(&self.points, h))
            .fold(0.0, f64::max)
    }

    /// The straight immersion of the star: site `n` is sent to
    /// `n₁ω₁ + n₂ω₂ + n₃ω₃`. Every multi-ratio of a straight immersion is
    /// identically 1, so this is admissible for every algebra. For the
    /// Möbius algebra the anchors are unit vectors at 120°, making every
    /// derived circle a unit circle.
    pub fn regular(extent: usize, eps: Epsilon, scale: f64) -> CauchyData1D {
        let anchors = regular_anchors(eps);
        let mut points = BTreeMap::new();
        for site in Self::star_sites(extent) {
            points.insert(site, immerse(&anchors, site, scale, eps));
        }
        CauchyData1D {
            eps,
            extent,
            points,
        }
    }

    /// Regular data with independent noise on every star value, repaired to
    /// satisfy the central constraints by adjusting the three inner corner
    /// sites.
    pub fn regular_with_noise(
        extent: usize,
        eps: Epsilon,
        scale: f64,
        noise: f64,
        rng: &mut StdRng,
    ) -> Result<CauchyData1D> {
        let mut data = Self::regular(extent, eps, scale);
        for z in data.points.values_mut() {
            z.u += rng.gen_range(-noise..=noise);
            z.v += rng.gen_range(-noise..=noise);
        }
        data.repair()?;
        Ok(data)
    }

    /// Newton iteration on the interior constraints, adjusting the three
    /// sector corner sites `d_j + d_{j+1}`.
    pub fn repair(&mut self) -> Result<()> {
        let hexagons = CauchyData1D::interior_hexagons(self.extent);
        if hexagons.is_empty() {
            return Ok(());
        }
        let unknown_sites: Vec<Vec3> = (0..3).map(|j| add3(arm(j), arm(j + 1))).collect();
        let scale = self
            .points
            .values()
            .map(|z| z.mag())
            .fold(1.0, f64::max);

        let residuals = |pts: &BTreeMap<Vec3, GC>| -> Option<Vec<f64>> {
            hexagons
                .iter()
                .map(|h| hexagon_residual_signed(pts, h))
                .collect()
        };

        for _ in 0..80 {
            let res = residuals(&self.points).ok_or(ComplexError::ConcurrencyFailure {
                site: [0, 0, 0],
                residual: f64::INFINITY,
            })?;
            let worst = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
            if worst < 1e-12 * scale.max(1.0) {
                return Ok(());
            }
            // finite-difference Jacobian in the 6 unknown components
            let m = hexagons.len();
            let mut jac = vec![vec![0.0f64; 6]; m];
            let h = 1e-7 * scale.max(1.0);
            for (col, site) in unknown_sites.iter().enumerate() {
                for part in 0..2 {
                    let mut bumped = self.points.clone();
                    {
                        let z = bumped.get_mut(site).expect("corner site present");
                        if part == 0 {
                            z.u += h;
                        } else {
                            z.v += h;
                        }
                    }
                    let res2 = residuals(&bumped).ok_or(ComplexError::ConcurrencyFailure {
                        site: *site,
                        residual: f64::INFINITY,
                    })?;
                    for row in 0..m {
                        jac[row][2 * col + part] = (res2[row] - res[row]) / h;
                    }
                }
            }
            // least-squares step via normal equations (m×6, m is 6 here)
            let mut ata = vec![vec![0.0f64; 6]; 6];
            let mut atb = vec![0.0f64; 6];
            for i in 0..6 {
                for k in 0..6 {
                    ata[i][k] = (0..m).map(|r| jac[r][i] * jac[r][k]).sum();
                }
                atb[i] = (0..m).map(|r| jac[r][i] * res[r]).sum();
                ata[i][i] += 1e-12;
            }
            let step = crate::linalg::solve(&ata, &atb, 1e-14).ok_or(
                ComplexError::ConcurrencyFailure {
                    site: [0, 0, 0],
                    residual: worst,
                },
            )?;
            for (col, site) in unknown_sites.iter().enumerate() {
                let z = self.points.get_mut(site).expect("corner site present");
                z.u -= step[2 * col];
                z.v -= step[2 * col + 1];
            }
        }
        let final_res = self.central_residual();
        if final_res < 1e-8 * scale.max(1.0) {
            Ok(())
        } else {
            Err(ComplexError::ConcurrencyFailure {
                site: [0, 0, 0],
                residual: final_res,
            })
        }
    }
}

/// Signed residual (j-part, normalised) used by the Newton repair.
fn hexagon_residual_signed(pts: &BTreeMap<Vec3, GC>, cycle: &[Vec3; 6]) -> Option<f64> {
    let vals: Vec<&GC> = cycle.iter().map(|s| pts.get(s)).collect::<Option<_>>()?;
    let m = multi_ratio(vals[0], vals[1], vals[2], vals[3], vals[4], vals[5]).ok()?;
    Some(m.v / m.mag().max(1.0))
}

fn regular_anchors(eps: Epsilon) -> [GC; 3] {
    match eps {
        Epsilon::MinusOne => {
            // unit vectors at 120°: lattice edges have length √3, so the
            // circumscribed circles of the unit triangles have radius 1
            let ang = [
                std::f64::consts::FRAC_PI_2,
                std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::FRAC_PI_3,
                std::f64::consts::FRAC_PI_2 + 4.0 * std::f64::consts::FRAC_PI_3,
            ];
            std::array::from_fn(|k| GCNum::from_xy(ang[k].cos(), ang[k].sin(), eps))
        }
        Epsilon::PlusOne => [
            GCNum::from_xy(0.0, 0.0, eps),
            GCNum::from_xy(0.21, 1.03, eps),
            GCNum::from_xy(-0.17, -1.07, eps),
        ],
        Epsilon::Zero => [
            GCNum::from_xy(0.55, 0.12, eps),
            GCNum::from_xy(-0.23, 0.04, eps),
            GCNum::from_xy(1.12, -0.31, eps),
        ],
    }
}

fn immerse(anchors: &[GC; 3], site: Vec3, scale: f64, eps: Epsilon) -> GC {
    let mut u = 0.0;
    let mut v = 0.0;
    for k in 0..3 {
        u += site[k] as f64 * anchors[k].u;
        v += site[k] as f64 * anchors[k].v;
    }
    GCNum::from_xy(scale * u, scale * v, eps)
}

/// Fill the base slice from the star by the three rotated nine-point moves.
fn build_base_slice(data: &CauchyData1D) -> Result<BTreeMap<Vec3, GC>> {
    let r = data.extent as i64;
    let expected = CauchyData1D::star_sites(data.extent);
    for site in expected.iter() {
        if !data.points.contains_key(site) {
            return Err(ComplexError::MissingData(*site));
        }
    }
    let scale = data
        .points
        .values()
        .map(|z| z.mag())
        .fold(1.0, f64::max);
    let central = data.central_residual();
    if central > 1e-7 * scale {
        return Err(ComplexError::ConcurrencyFailure {
            site: [0, 0, 0],
            residual: central,
        });
    }
    let mut pts = data.points.clone();
    let offsets = move_offsets();
    for j in 0..3 {
        let rot = sector_rotation(j);
        let (dj, dj1) = (arm(j), arm(j + 1));
        for b in 2..=r {
            for a in 2..=r {
                let x = add3(scale3(dj, a), scale3(dj1, b));
                if pts.contains_key(&x) {
                    continue;
                }
                let mut args = Vec::with_capacity(8);
                for off in offsets.iter() {
                    let site = add3(x, rotate(*off, rot));
                    args.push(
                        pts.get(&site)
                            .cloned()
                            .ok_or(ComplexError::MissingData(site))?,
                    );
                }
                let c0 = nine_point_evolve(
                    &args[0], &args[1], &args[2], &args[3], &args[4], &args[5], &args[6],
                    &args[7],
                )?;
                pts.insert(x, c0);
            }
        }
    }
    // every fully-contained hexagon constraint must now hold
    let patch: BTreeSet<Vec3> = pts.keys().copied().collect();
    let range = r + 2;
    for x in -range..=range {
        for y in -range..=range {
            for z in -range..=range {
                let sum = x + y + z;
                let cycle = if sum == 2 {
                    hexagon_up([x, y, z])
                } else if sum == -2 {
                    hexagon_down([x, y, z])
                } else {
                    continue;
                };
                if !cycle.iter().all(|p| patch.contains(p)) {
                    continue;
                }
                if let Some(res) = hexagon_residual(&pts, &cycle) {
                    if res > 1e-6 * scale {
                        return Err(ComplexError::ConcurrencyFailure {
                            site: [x, y, z],
                            residual: res,
                        });
                    }
                }
            }
        }
    }
    Ok(pts)
}

/// Per-algebra conversion of an even-slice value to a stored element.
fn datum_to_element(z: &GC) -> Result<LieElement<f64>> {
    match z.eps {
        Epsilon::MinusOne => Ok(LieElement::point(z.u, z.v)),
        Epsilon::PlusOne => Ok(LieElement::circle(z.u, 0.0, z.v)),
        Epsilon::Zero => {
            liecircle::dual_to_line(z).map_err(|_| ComplexError::HorizontalLine)
        }
    }
}

fn locus_to_element(g: &GCircle) -> Result<Site> {
    match g.to_euclidean()? {
        EuclideanLocus::Circle { x, y, r } => {
            let site = match g.eps {
                // unoriented until correlation assigns a sign
                Epsilon::MinusOne => {
                    Site::with_flag(LieElement::circle(x, y, r.abs()), Flag::Unoriented)
                }
                _ => Site::new(LieElement::circle(x, y, r)),
            };
            Ok(site)
        }
        EuclideanLocus::Line { v, w, d } => Ok(Site::new(LieElement::Line { v, w, d })),
    }
}

/// Shared construction core: fill the base slice, then derive circles and
/// concurrency points outwards to `|k| ≤ slice_extent`.
fn build_complex(data: &CauchyData1D, slice_extent: usize) -> Result<LatticeComplex> {
    let base = build_base_slice(data)?;
    let scale = base.values().map(|z| z.mag()).fold(1.0, f64::max);
    let tol_conc = 1e-8 * scale.max(1.0);

    let mut lc = LatticeComplex::new(data.eps);
    // slice data by index sum: even slices hold hypercomplex data
    let mut even: BTreeMap<i64, BTreeMap<Vec3, GC>> = BTreeMap::new();
    even.insert(0, base);
    // circles on odd slices, kept as loci for the recursion
    let mut odd: BTreeMap<i64, BTreeMap<Vec3, GCircle>> = BTreeMap::new();

    let kmax = slice_extent.min(3) as i64;
    for level in 1..=kmax {
        for dir in [1i64, -1] {
            let k = dir * level;
            if k.rem_euclid(2) == 1 {
                // circles at odd slice k from the even slice k − dir
                let source = match even.get(&(k - dir)) {
                    Some(m) => m,
                    None => continue,
                };
                let mut circles = BTreeMap::new();
                for site in odd_slice_sites(source, dir) {
                    let tri: Option<Vec<&GC>> = (0..3)
                        .map(|ax| source.get(&add3(site, scale3(unit(ax), -dir))))
                        .collect();
                    let Some(tri) = tri else { continue };
                    match GCircle::through(tri[0], tri[1], tri[2]) {
                        Ok(g) => {
                            circles.insert(site, g);
                        }
                        Err(_) => {
                            return Err(ComplexError::DegenerateTriangle(site));
                        }
                    }
                }
                odd.insert(k, circles);
            } else {
                // points at even slice k: second intersections of circle
                // pairs from slice k − dir, checked against the third
                let source = match odd.get(&(k - dir)) {
                    Some(m) => m,
                    None => continue,
                };
                let inner = match even.get(&(k - 2 * dir)) {
                    Some(m) => m,
                    None => continue,
                };
                let mut pts = BTreeMap::new();
                for site in even_slice_sites(source, dir) {
                    let cs: Option<Vec<&GCircle>> = (0..3)
                        .map(|ax| source.get(&add3(site, scale3(unit(ax), -dir))))
                        .collect();
                    let Some(cs) = cs else { continue };
                    let shared = add3(site, scale3(add3(unit(0), unit(1)), -dir));
                    let Some(known) = inner.get(&shared) else {
                        continue;
                    };
                    let q = cs[0].second_intersection(cs[1], known)?;
                    let res = cs[2].residual(&q);
                    if res > tol_conc.max(1e-7 * scale) {
                        return Err(ComplexError::ConcurrencyFailure {
                            site,
                            residual: res,
                        });
                    }
                    pts.insert(site, q);
                }
                even.insert(k, pts);
            }
        }
    }

    for (_, slice) in even.iter() {
        for (site, z) in slice.iter() {
            lc.insert(idx3(*site), Site::new(datum_to_element(z)?));
        }
    }
    for (_, slice) in odd.iter() {
        for (site, g) in slice.iter() {
            lc.insert(idx3(*site), locus_to_element(g)?);
        }
    }
    Ok(lc)
}

fn odd_slice_sites(source: &BTreeMap<Vec3, GC>, dir: i64) -> Vec<Vec3> {
    candidate_sites(source.keys(), dir)
}

fn even_slice_sites(source: &BTreeMap<Vec3, GCircle>, dir: i64) -> Vec<Vec3> {
    candidate_sites(source.keys(), dir)
}

/// Sites one step along `dir` whose three backward neighbours can exist.
fn candidate_sites<'a>(keys: impl Iterator<Item = &'a Vec3>, dir: i64) -> Vec<Vec3> {
    let mut out = BTreeSet::new();
    for k in keys {
        for ax in 0..3 {
            out.insert(add3(*k, scale3(unit(ax), dir)));
        }
    }
    out.into_iter().collect()
}

/// Fundamental point-circle complex (Möbius case) from one-dimensional data.
pub fn build_point_circle_complex(
    data: &CauchyData1D,
    slice_extent: usize,
) -> Result<LatticeComplex> {
    assert_eq!(data.eps, Epsilon::MinusOne, "use build_subgeometry_complex");
    build_complex(data, slice_extent)
}

/// Geodesic-circle (ε = +1) or line-circle (ε = 0) complexes over the same
/// propagation skeleton.
pub fn build_subgeometry_complex(
    data: &CauchyData1D,
    slice_extent: usize,
) -> Result<LatticeComplex> {
    assert_ne!(data.eps, Epsilon::MinusOne, "use build_point_circle_complex");
    build_complex(data, slice_extent)
}

/// Assign circle orientations by propagating the signed-radius formula from
/// seed circles across all elementary cubes. Conflicts beyond tolerance are
/// reported; their absence is the orientation-consistency statement.
pub fn orient_complex(
    lc: &LatticeComplex,
    seeds: &[(Vec3, f64)],
) -> Result<LatticeComplex> {
    assert_eq!(lc.eps, Epsilon::MinusOne);
    let mut out = lc.clone();
    let mut signs: BTreeMap<Idx, f64> = BTreeMap::new();
    for (site, sign) in seeds {
        let idx = idx3(*site);
        if out.get(&idx).is_none() || parity(&idx) == 0 {
            return Err(ComplexError::MissingData(*site));
        }
        signs.insert(idx, if *sign < 0.0 { -1.0 } else { 1.0 });
    }
    let scale = out
        .sites
        .values()
        .map(|s| liecircle::lie_vec_mag(&liecircle::lie_coords(&s.element)))
        .fold(1.0, f64::max);
    let tol = 1e-6 * scale;

    let bases = out.cube_bases();
    loop {
        let mut progress = false;
        for base in bases.iter() {
            let corner = |bits: u8| -> Idx {
                let mut c = *base;
                c[0] += (bits & 1) as i64;
                c[1] += ((bits >> 1) & 1) as i64;
                c[2] += ((bits >> 2) & 1) as i64;
                c
            };
            for bits in 0..8u8 {
                let v = corner(bits);
                if parity(&v) != 0 {
                    continue;
                }
                let LieElement::Point { x, y } = out.get(&v).unwrap().element else {
                    continue;
                };
                let mut centres = Vec::new();
                let mut radii = Vec::new();
                let mut all_signed = true;
                for d in 0..3 {
                    let n = corner(bits ^ (1 << d));
                    let Some(site) = out.get(&n) else {
                        all_signed = false;
                        break;
                    };
                    let LieElement::Circle { x: cx, y: cy, r } = site.element else {
                        all_signed = false;
                        break;
                    };
                    match signs.get(&n) {
                        Some(s) => {
                            centres.push(GCNum::from_xy(cx, cy, Epsilon::MinusOne));
                            radii.push(s * r.abs());
                        }
                        None => {
                            all_signed = false;
                            break;
                        }
                    }
                }
                if !all_signed {
                    continue;
                }
                let opp = corner(bits ^ 7);
                let Some(opp_site) = out.get(&opp) else {
                    continue;
                };
                let LieElement::Circle { r: opp_r, .. } = opp_site.element else {
                    continue;
                };
                let Ok(pred) = liecircle::radius_z1(
                    &GCNum::from_xy(x, y, Epsilon::MinusOne),
                    &centres[0],
                    &centres[1],
                    &centres[2],
                    &radii[0],
                    &radii[1],
                    &radii[2],
                    false,
                ) else {
                    continue;
                };
                // magnitude must agree with the stored circle
                if (pred.abs() - opp_r.abs()).abs() > tol.max(1e-6 * pred.abs()) {
                    return Err(ComplexError::CorrelationConflict {
                        site: [base[0], base[1], base[2]],
                        mismatch: (pred.abs() - opp_r.abs()).abs(),
                    });
                }
                let new_sign = if pred < 0.0 { -1.0 } else { 1.0 };
                match signs.get(&opp) {
                    Some(&s) => {
                        if s != new_sign {
                            return Err(ComplexError::CorrelationConflict {
                                site: [base[0], base[1], base[2]],
                                mismatch: 2.0,
                            });
                        }
                    }
                    None => {
                        signs.insert(opp, new_sign);
                        progress = true;
                    }
                }
            }
        }
        if !progress {
            break;
        }
    }

    for (idx, sign) in signs {
        let site = out.sites.get_mut(&idx).expect("signed site exists");
        if let LieElement::Circle { x, y, r } = site.element {
            site.element = LieElement::circle(x, y, sign * r.abs());
            site.flags.retain(|f| *f != Flag::Unoriented);
        }
    }
    Ok(out)
}

/// Extend a point-circle complex to a parallel layer through one new circle
/// passing through the point at `base`. Every original cube then extends to
/// a hypercube; all new incidences are checked.
pub fn clifford_extend(
    lc: &LatticeComplex,
    base: Vec3,
    new_circle: &LieElement<f64>,
) -> Result<LatticeComplex> {
    assert_eq!(lc.eps, Epsilon::MinusOne);
    let base_idx = idx3(base);
    let Some(base_site) = lc.get(&base_idx) else {
        return Err(ComplexError::MissingData(base));
    };
    let LieElement::Point { .. } = base_site.element else {
        return Err(ComplexError::BadSeedCircle);
    };
    if liecircle::contact_residual(&base_site.element, new_circle) > 1e-9 {
        return Err(ComplexError::BadSeedCircle);
    }

    let as_locus = |e: &LieElement<f64>| -> Option<GCircle> {
        if let LieElement::Circle { x, y, r } = e {
            Some(GCircle {
                a: 1.0,
                b: -2.0 * x,
                c: -2.0 * y,
                d: x * x + y * y - r * r,
                eps: Epsilon::MinusOne,
            })
        } else {
            None
        }
    };
    let point_of = |idx: &Idx| -> Option<GC> {
        if let LieElement::Point { x, y } = lc.get(idx)?.element {
            Some(GCNum::from_xy(x, y, Epsilon::MinusOne))
        } else {
            None
        }
    };

    let scale = 1.0
        + lc.sites
            .values()
            .map(|s| liecircle::lie_vec_mag(&liecircle::lie_coords(&s.element)))
            .fold(0.0, f64::max);
    let tol = 1e-6 * scale;

    // layer elements: circles over even sites, points over odd sites
    let mut layer_circles: BTreeMap<Vec3, GCircle> = BTreeMap::new();
    let mut layer_points: BTreeMap<Vec3, GC> = BTreeMap::new();
    layer_circles.insert(
        base,
        as_locus(new_circle).ok_or(ComplexError::BadSeedCircle)?,
    );

    loop {
        let mut progress = false;
        // new points over odd sites: second intersection of the original
        // circle there with any adjacent new circle
        for (idx, site) in lc.sites.iter() {
            if parity(idx) != 1 || idx[3] != 0 {
                continue;
            }
            let m = [idx[0], idx[1], idx[2]];
            if layer_points.contains_key(&m) {
                continue;
            }
            let Some(orig) = as_locus(&site.element) else {
                continue;
            };
            for ax in 0..3 {
                for dir in [-1i64, 1] {
                    let n = add3(m, scale3(unit(ax), dir));
                    let Some(k) = layer_circles.get(&n) else {
                        continue;
                    };
                    let Some(p) = point_of(&idx3(n)) else {
                        continue;
                    };
                    if let Ok(q) = orig.second_intersection(k, &p) {
                        layer_points.insert(m, q);
                        progress = true;
                    }
                    break;
                }
                if layer_points.contains_key(&m) {
                    break;
                }
            }
        }
        // new circles over even sites: through the original point and two
        // adjacent new points
        for (idx, site) in lc.sites.iter() {
            if parity(idx) != 0 || idx[3] != 0 {
                continue;
            }
            let n = [idx[0], idx[1], idx[2]];
            if layer_circles.contains_key(&n) {
                continue;
            }
            let LieElement::Point { x, y } = site.element else {
                continue;
            };
            let p = GCNum::from_xy(x, y, Epsilon::MinusOne);
            let mut adj = Vec::new();
            for ax in 0..3 {
                for dir in [-1i64, 1] {
                    let m = add3(n, scale3(unit(ax), dir));
                    if let Some(q) = layer_points.get(&m) {
                        adj.push(q.clone());
                    }
                }
            }
            if adj.len() < 2 {
                continue;
            }
            if let Ok(g) = GCircle::through(&p, &adj[0], &adj[1]) {
                layer_circles.insert(n, g);
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }

    // assemble and verify all incidences of the extended structure
    let mut out = LatticeComplex::new(lc.eps);
    for (idx, site) in lc.sites.iter() {
        out.insert(*idx, site.clone());
    }
    for (n, g) in layer_circles.iter() {
        let idx = [n[0], n[1], n[2], 1];
        // incidence with the point below and all adjacent new points
        if let Some(p) = point_of(&idx3(*n)) {
            let res = g.residual(&p);
            if res > tol {
                return Err(ComplexError::CliffordFailure {
                    site: idx,
                    residual: res,
                });
            }
        }
        for ax in 0..3 {
            for dir in [-1i64, 1] {
                let m = add3(*n, scale3(unit(ax), dir));
                if let Some(q) = layer_points.get(&m) {
                    let res = g.residual(q);
                    if res > tol {
                        return Err(ComplexError::CliffordFailure {
                            site: idx,
                            residual: res,
                        });
                    }
                }
            }
        }
        out.insert(idx, locus_to_element(g)?);
    }
    for (m, q) in layer_points.iter() {
        let idx = [m[0], m[1], m[2], 1];
        // incidence with the original circle below
        if let Some(orig) = as_locus(&lc.get(&idx3(*m)).expect("site").element) {
            let res = orig.residual(q);
            if res > tol {
                return Err(ComplexError::CliffordFailure {
                    site: idx,
                    residual: res,
                });
            }
        }
        out.insert(idx, Site::new(LieElement::point(q.u, q.v)));
    }
    Ok(out)
}
