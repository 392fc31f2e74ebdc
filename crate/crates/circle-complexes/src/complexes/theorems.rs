//! Incidence theorems on hexahedral and rhombic-dodecahedral point
//! configurations, verified through face cross-ratio products: with outward
//! face orientations starting on the even colour class, the two contributions
//! of every edge cancel and the product over all faces is identically 1, so
//! realness of all face ratios but one forces the last.

use super::gcplane::{GCircle, GCPlaneError};
use crate::hypercomplex::{cross_ratio, Epsilon, GCNum, GC, GcError};
use crate::scalar::Scalar;
use rand::rngs::StdRng;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TheoremError {
    #[error("a face has touching vertices; its cross-ratio is undefined")]
    DegenerateFace,
    #[error(transparent)]
    Plane(#[from] GCPlaneError),
    #[error(transparent)]
    Algebra(#[from] GcError),
}

type Result<T> = std::result::Result<T, TheoremError>;

/// Vertex `i` of the unit cube sits at bits `(i & 1, (i >> 1) & 1, i >> 2)`.
pub fn cube_vertex(i: usize) -> [i64; 3] {
    [(i & 1) as i64, ((i >> 1) & 1) as i64, ((i >> 2) & 1) as i64]
}

/// The six faces as oriented 4-cycles: outward normals, cycles starting on
/// the even-parity colour class.
pub const CUBE_FACES: [[usize; 4]; 6] = [
    [0, 4, 6, 2], // x = 0
    [3, 7, 5, 1], // x = 1
    [0, 1, 5, 4], // y = 0
    [6, 7, 3, 2], // y = 1
    [0, 2, 3, 1], // z = 0
    [5, 7, 6, 4], // z = 1
];

/// Face cross-ratio per the oriented cycle `a∘ → a• → b∘ → b•`.
pub fn face_cross_ratio<S: Scalar>(
    pts: &[GCNum<S>],
    face: &[usize; 4],
) -> std::result::Result<GCNum<S>, GcError> {
    cross_ratio(&pts[face[0]], &pts[face[1]], &pts[face[2]], &pts[face[3]])
}

pub struct HexahedronReport<S: Scalar> {
    pub face_ratios: Vec<GCNum<S>>,
    pub product: GCNum<S>,
    /// Largest j-part among the first five faces (the hypotheses).
    pub hypothesis_residual: f64,
    /// j-part of the last face (the conclusion).
    pub conclusion_residual: f64,
}

/// Evaluate the six face cross-ratios of a hexahedral configuration. The
/// product is identically 1; when the first five faces are circular the
/// conclusion residual reports how circular the sixth is.
pub fn verify_miquel<S: Scalar>(pts: &[GCNum<S>; 8]) -> Result<HexahedronReport<S>> {
    let mut ratios = Vec::with_capacity(6);
    for f in CUBE_FACES.iter() {
        ratios.push(face_cross_ratio(pts, f).map_err(|_| TheoremError::DegenerateFace)?);
    }
    let product = ratios
        .iter()
        .skip(1)
        .fold(ratios[0].clone(), |acc, r| acc * r.clone());
    let hypothesis_residual = ratios
        .iter()
        .take(5)
        .map(|r| r.v.mag() / r.mag().max(1.0))
        .fold(0.0, f64::max);
    let conclusion_residual = ratios[5].v.mag() / ratios[5].mag().max(1.0);
    Ok(HexahedronReport {
        face_ratios: ratios,
        product,
        hypothesis_residual,
        conclusion_residual,
    })
}

/// The 14 vertices of the rhombic-dodecahedral configuration: even-parity
/// sites of `{0,1,2}³` in lexicographic order.
pub fn rhombic_vertices() -> Vec<[i64; 3]> {
    let mut out = Vec::with_capacity(14);
    for x in 0..3i64 {
        for y in 0..3i64 {
            for z in 0..3i64 {
                if (x + y + z) % 2 == 0 {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

/// The 12 faces: one per odd boundary site of `{0,1,2}³`, as oriented
/// 4-cycles into [`rhombic_vertices`], outward normals, starting on the
/// corner colour class.
pub fn rhombic_faces() -> Vec<[usize; 4]> {
    let verts = rhombic_vertices();
    let index_of = |p: [i64; 3]| -> usize {
        verts
            .iter()
            .position(|&q| q == p)
            .expect("face vertex inside the block")
    };
    let mut faces = Vec::with_capacity(12);
    for x in 0..3i64 {
        for y in 0..3i64 {
            for z in 0..3i64 {
                let s = [x, y, z];
                if (x + y + z) % 2 == 0 || s == [1, 1, 1] {
                    continue;
                }
                let axis = (0..3).find(|&a| s[a] == 1).expect("one odd coordinate");
                let (b, c) = match axis {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let sb: i64 = if s[b] == 0 { 1 } else { -1 };
                let sc: i64 = if s[c] == 0 { 1 } else { -1 };
                let mut rel = [[0i64; 3]; 4];
                rel[0][axis] = 1;
                rel[1][b] = sb;
                rel[2][axis] = -1;
                rel[3][c] = sc;
                // orient the cycle with the outward normal of the block
                let outward = [s[0] - 1, s[1] - 1, s[2] - 1];
                let e1 = [
                    rel[1][0] - rel[0][0],
                    rel[1][1] - rel[0][1],
                    rel[1][2] - rel[0][2],
                ];
                let e2 = [
                    rel[2][0] - rel[1][0],
                    rel[2][1] - rel[1][1],
                    rel[2][2] - rel[1][2],
                ];
                let n = [
                    e1[1] * e2[2] - e1[2] * e2[1],
                    e1[2] * e2[0] - e1[0] * e2[2],
                    e1[0] * e2[1] - e1[1] * e2[0],
                ];
                let dot = n[0] * outward[0] + n[1] * outward[1] + n[2] * outward[2];
                if dot < 0 {
                    rel.swap(1, 3);
                }
                let cycle = rel.map(|r| index_of([s[0] + r[0], s[1] + r[1], s[2] + r[2]]));
                faces.push(cycle);
            }
        }
    }
    faces
}

pub struct RhombicReport<S: Scalar> {
    pub face_ratios: Vec<GCNum<S>>,
    pub product: GCNum<S>,
    pub hypothesis_residual: f64,
    pub conclusion_residual: f64,
}

/// Face cross-ratios of the 14-point configuration; the product over the 12
/// faces is identically 1, so eleven circular faces force the twelfth.
pub fn verify_rhombic_dodecahedron<S: Scalar>(
    pts: &[GCNum<S>; 14],
) -> Result<RhombicReport<S>> {
    let faces = rhombic_faces();
    let mut ratios = Vec::with_capacity(12);
    for f in faces.iter() {
        ratios.push(face_cross_ratio(pts, f).map_err(|_| TheoremError::DegenerateFace)?);
    }
    let product = ratios
        .iter()
        .skip(1)
        .fold(ratios[0].clone(), |acc, r| acc * r.clone());
    let hypothesis_residual = ratios
        .iter()
        .take(11)
        .map(|r| r.v.mag() / r.mag().max(1.0))
        .fold(0.0, f64::max);
    let conclusion_residual = ratios[11].v.mag() / ratios[11].mag().max(1.0);
    Ok(RhombicReport {
        face_ratios: ratios,
        product,
        hypothesis_residual,
        conclusion_residual,
    })
}

/// Pick a point of the locus, using the per-algebra parametrisation of its
/// Euclidean representative.
pub fn sample_on(g: &GCircle, rng: &mut StdRng) -> Result<GC> {
    use super::gcplane::EuclideanLocus;
    let eps = g.eps;
    match g.to_euclidean()? {
        EuclideanLocus::Circle { x, y, r } => match eps {
            Epsilon::MinusOne => {
                let t = rng.gen_range(0.0..std::f64::consts::TAU);
                Ok(GCNum::new(x + r.abs() * t.cos(), y + r.abs() * t.sin(), eps))
            }
            Epsilon::PlusOne => {
                let t = rng.gen_range(-1.5..1.5);
                let rg = r - (t * t + y * y).sqrt();
                Ok(GCNum::new(x - t, rg, eps))
            }
            Epsilon::Zero => {
                let phi = rng.gen_range(0.3..std::f64::consts::PI - 0.3);
                let (v, w) = (phi.cos(), phi.sin());
                let d = x * v + y * w - r;
                crate::liecircle::line_to_dual(v, w, d)
                    .map_err(|_| TheoremError::Plane(GCPlaneError::NoRealCircle))
            }
        },
        EuclideanLocus::Line { v, w, d } => {
            // degenerate representative; points along the line
            let t = rng.gen_range(-2.0..2.0);
            let (px, py) = (v * d - w * t, w * d + v * t);
            Ok(GCNum::new(px, py, eps))
        }
    }
}

/// Construct a hexahedral configuration with five circular faces: four side
/// circles chained around a base circle carrying `p1, p3, p5, p7`. The
/// returned array is indexed by cube vertex.
pub fn build_miquel_figure(eps: Epsilon, rng: &mut StdRng) -> Result<[GC; 8]> {
    let rnd = |rng: &mut StdRng| {
        GCNum::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), eps)
    };
    // base circle through three random points
    let base = GCircle::through(&rnd(rng), &rnd(rng), &rnd(rng))?;
    let q1 = sample_on(&base, rng)?;
    let q3 = sample_on(&base, rng)?;
    let q5 = sample_on(&base, rng)?;
    let q7 = sample_on(&base, rng)?;
    let k2 = GCircle::through(&q1, &q3, &rnd(rng))?;
    let k3 = GCircle::through(&q3, &q5, &rnd(rng))?;
    let k4 = GCircle::through(&q5, &q7, &rnd(rng))?;
    let k1 = GCircle::through(&q7, &q1, &rnd(rng))?;
    let p2 = k1.second_intersection(&k2, &q1)?;
    let p4 = k2.second_intersection(&k3, &q3)?;
    let p6 = k3.second_intersection(&k4, &q5)?;
    let p8 = k4.second_intersection(&k1, &q7)?;
    // cube corners: p1,p3,p5,p7 on the even class, p2,p4,p6,p8 on the odd
    Ok([q1, q3, q7, q5, p2, p4, p8, p6])
}

/// A four-circle configuration through one point: pairwise second
/// intersections span four triple circles which concur. Returns the largest
/// deviation of the fourth-circle incidences.
pub fn clifford_c4_residual(eps: Epsilon, rng: &mut StdRng) -> Result<f64> {
    let rnd = |rng: &mut StdRng| {
        GCNum::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), eps)
    };
    let p = rnd(rng);
    let circles: Vec<GCircle> = (0..4)
        .map(|_| GCircle::through(&p, &rnd(rng), &rnd(rng)))
        .collect::<std::result::Result<_, _>>()?;
    let mut second = std::collections::BTreeMap::new();
    for i in 0..4 {
        for j in i + 1..4 {
            second.insert((i, j), circles[i].second_intersection(&circles[j], &p)?);
        }
    }
    let pair = |i: usize, j: usize| second[&(i.min(j), i.max(j))].clone();
    let triple = |i: usize, j: usize, k: usize| -> Result<GCircle> {
        Ok(GCircle::through(&pair(i, j), &pair(i, k), &pair(j, k))?)
    };
    let c123 = triple(0, 1, 2)?;
    let c124 = triple(0, 1, 3)?;
    let c134 = triple(0, 2, 3)?;
    let c234 = triple(1, 2, 3)?;
    // the first two triple circles share the point pair(0,1)
    let q = c123.second_intersection(&c124, &pair(0, 1))?;
    Ok(c134.residual(&q).max(c234.residual(&q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;
    use rand::SeedableRng;

    type Rat = BigRational;

    fn rat_pt(rng: &mut StdRng, eps: Epsilon) -> GCNum<Rat> {
        GCNum::new(
            Rat::from_i64(rng.gen_range(-20i64..=20)),
            Rat::from_i64(rng.gen_range(-20i64..=20)),
            eps,
        )
    }

    #[test]
    fn cube_product_is_one_exactly() {
        let mut rng = StdRng::seed_from_u64(41);
        for eps in Epsilon::ALL {
            let mut done = 0;
            while done < 10 {
                let pts: [GCNum<Rat>; 8] = std::array::from_fn(|_| rat_pt(&mut rng, eps));
                match verify_miquel(&pts) {
                    Ok(rep) => {
                        assert_eq!(rep.product, GCNum::one(eps), "eps {eps:?}");
                        done += 1;
                    }
                    Err(TheoremError::DegenerateFace) => continue,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn rhombic_product_is_one_exactly() {
        let mut rng = StdRng::seed_from_u64(42);
        for eps in Epsilon::ALL {
            let mut done = 0;
            while done < 5 {
                let pts: [GCNum<Rat>; 14] = std::array::from_fn(|_| rat_pt(&mut rng, eps));
                match verify_rhombic_dodecahedron(&pts) {
                    Ok(rep) => {
                        assert_eq!(rep.product, GCNum::one(eps), "eps {eps:?}");
                        done += 1;
                    }
                    Err(TheoremError::DegenerateFace) => continue,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn rhombic_combinatorics() {
        let faces = rhombic_faces();
        assert_eq!(faces.len(), 12);
        let verts = rhombic_vertices();
        assert_eq!(verts.len(), 14);
        // every face alternates corner/mid vertices
        for f in &faces {
            for (k, &vi) in f.iter().enumerate() {
                let v = verts[vi];
                let odd_coords = v.iter().filter(|&&c| c == 1).count();
                if k % 2 == 0 {
                    assert_eq!(odd_coords, 0, "corner class");
                } else {
                    assert_eq!(odd_coords, 2, "mid class");
                }
            }
        }
        // each of the 24 edges appears in exactly two faces, opposite senses
        let mut directed = std::collections::BTreeMap::new();
        for f in &faces {
            for k in 0..4 {
                let (a, b) = (f[k], f[(k + 1) % 4]);
                *directed.entry((a, b)).or_insert(0usize) += 1;
            }
        }
        assert_eq!(directed.len(), 48, "24 edges, each traversed both ways");
        for (&(a, b), &count) in directed.iter() {
            assert_eq!(count, 1, "directed edge ({a},{b}) repeated");
            assert_eq!(directed.get(&(b, a)), Some(&1), "missing reverse of ({a},{b})");
        }
    }

    #[test]
    fn miquel_figure_conclusion_holds() {
        let mut rng = StdRng::seed_from_u64(43);
        for eps in Epsilon::ALL {
            let mut done = 0;
            let mut attempts = 0;
            while done < 20 && attempts < 500 {
                attempts += 1;
                let Ok(pts) = build_miquel_figure(eps, &mut rng) else {
                    continue;
                };
                if pts.iter().any(|p| p.mag() > 50.0) {
                    continue;
                }
                let Ok(rep) = verify_miquel(&pts) else {
                    continue;
                };
                if rep.hypothesis_residual > 1e-8 {
                    continue;
                }
                assert!(
                    rep.conclusion_residual < 1e-7,
                    "eps {eps:?}: sixth face residual {}",
                    rep.conclusion_residual
                );
                done += 1;
            }
            assert!(done >= 10, "eps {eps:?}: too few valid figures ({done})");
        }
    }

    #[test]
    fn clifford_concurrency_all_algebras() {
        let mut rng = StdRng::seed_from_u64(44);
        for eps in Epsilon::ALL {
            let mut done = 0;
            let mut attempts = 0;
            while done < 20 && attempts < 500 {
                attempts += 1;
                match clifford_c4_residual(eps, &mut rng) {
                    Ok(r) => {
                        assert!(r < 1e-7, "eps {eps:?}: residual {r}");
                        done += 1;
                    }
                    Err(_) => continue,
                }
            }
            assert!(done >= 10, "eps {eps:?}: too few valid figures");
        }
    }
}
