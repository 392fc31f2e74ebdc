//! The eight-cube assembly: starting from a point, three circle centres with
//! sign choices and three outer centres with sign choices, build the 13
//! circles and 14 points of a 2×2×2 block of a point-circle complex, deriving
//! every signed radius through the determinant propagation formula. The
//! orientation of the final circle is computed twice, along independent
//! routes, and their ratio is the orientation-consistency certificate: it
//! equals 1 identically.

use crate::hypercomplex::{Epsilon, GCNum, GC};
use crate::liecircle::{radius_z1, LieError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssemblyError {
    #[error("degenerate geometry in the assembly: {0}")]
    Degenerate(&'static str),
    #[error(transparent)]
    Lie(#[from] LieError),
}

type Result<T> = std::result::Result<T, AssemblyError>;

/// Free data of the assembly: everything else is determined.
#[derive(Clone, Debug)]
pub struct AssemblyData {
    /// the base point
    pub z: (f64, f64),
    /// centres of the three circles through the base point
    pub centres: [(f64, f64); 3],
    pub signs: [f64; 3],
    /// centres of the three outer circles (combinatorially at 113, 122, 233)
    pub outer_centres: [(f64, f64); 3],
    pub outer_signs: [f64; 3],
}

#[derive(Clone, Debug)]
pub struct AssemblyOutcome {
    /// Ratio of the two independently derived orientations of the central
    /// far circle; identically 1 for admissible data.
    pub orientation_ratio: f64,
    /// Worst geometric inconsistency met along the way (radius formula vs
    /// circumradius, concurrency of the final triple).
    pub max_residual: f64,
    /// Residual of the concurrency that closes the twelfth face.
    pub concurrency_residual: f64,
}

#[derive(Clone, Copy, Debug)]
struct Circle {
    x: f64,
    y: f64,
    /// signed radius
    r: f64,
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Second intersection point of two circles through a known common point:
/// its mirror image across the line of centres.
fn second_point(c1: &Circle, c2: &Circle, common: (f64, f64)) -> Result<(f64, f64)> {
    let (dx, dy) = (c2.x - c1.x, c2.y - c1.y);
    let n2 = dx * dx + dy * dy;
    if n2 < 1e-20 {
        return Err(AssemblyError::Degenerate("coincident centres"));
    }
    let t = ((common.0 - c1.x) * dx + (common.1 - c1.y) * dy) / n2;
    let (fx, fy) = (c1.x + t * dx, c1.y + t * dy);
    Ok((2.0 * fx - common.0, 2.0 * fy - common.1))
}

fn circumcentre(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Result<(f64, f64)> {
    let d = 2.0 * (a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1));
    if d.abs() < 1e-14 * (a.0.abs() + b.0.abs() + c.0.abs() + 1.0).powi(2) {
        return Err(AssemblyError::Degenerate("collinear triple"));
    }
    let (na, nb, nc) = (
        a.0 * a.0 + a.1 * a.1,
        b.0 * b.0 + b.1 * b.1,
        c.0 * c.0 + c.1 * c.1,
    );
    Ok((
        (na * (b.1 - c.1) + nb * (c.1 - a.1) + nc * (a.1 - b.1)) / d,
        (na * (c.0 - b.0) + nb * (a.0 - c.0) + nc * (b.0 - a.0)) / d,
    ))
}

fn gc(p: (f64, f64)) -> GC {
    GCNum::from_xy(p.0, p.1, Epsilon::MinusOne)
}

/// Signed radius of the circle opposite a point in an elementary cube: the
/// point `z`, the centres and signed radii of the three circles through it.
fn propagate_radius(z: (f64, f64), cs: [&Circle; 3]) -> Result<f64> {
    Ok(radius_z1(
        &gc(z),
        &gc((cs[0].x, cs[0].y)),
        &gc((cs[1].x, cs[1].y)),
        &gc((cs[2].x, cs[2].y)),
        &cs[0].r,
        &cs[1].r,
        &cs[2].r,
        false,
    )?)
}

/// New circle opposite the point `z` in a cube whose three adjacent circles
/// are given; its centre comes from the circumcircle of the three second
/// intersection points, its orientation from the propagation formula. The
/// returned residual compares the two radius magnitudes.
fn complete_cube(
    z: (f64, f64),
    cs: [&Circle; 3],
    through: [(f64, f64); 3],
) -> Result<(Circle, f64)> {
    let centre = circumcentre(through[0], through[1], through[2])?;
    let geometric = dist(centre, through[0]);
    let signed = propagate_radius(z, cs)?;
    let residual = (signed.abs() - geometric).abs() / geometric.max(1.0);
    Ok((
        Circle {
            x: centre.0,
            y: centre.1,
            r: signed,
        },
        residual,
    ))
}

pub fn run_assembly(data: &AssemblyData) -> Result<AssemblyOutcome> {
    let mut max_res: f64 = 0.0;
    let mut track = |r: f64| {
        if r > max_res {
            max_res = r;
        }
    };
    let z = data.z;
    // circles c1, c2, c3 through the base point
    let c: Vec<Circle> = (0..3)
        .map(|k| {
            let ctr = data.centres[k];
            Circle {
                x: ctr.0,
                y: ctr.1,
                r: data.signs[k] * dist(ctr, z),
            }
        })
        .collect();
    for ci in &c {
        if ci.r.abs() < 1e-9 {
            return Err(AssemblyError::Degenerate("circle through its own centre"));
        }
    }

    // pairwise second intersections p12, p23, p13
    let p12 = second_point(&c[0], &c[1], z)?;
    let p23 = second_point(&c[1], &c[2], z)?;
    let p13 = second_point(&c[0], &c[2], z)?;

    // central far circle c123
    let (c123, r0) = complete_cube(z, [&c[0], &c[1], &c[2]], [p12, p23, p13])?;
    track(r0);

    // outer circles c113 (through p13), c122 (through p12), c233 (through p23)
    let outer_through = [p13, p12, p23];
    let outer: Vec<Circle> = (0..3)
        .map(|k| {
            let ctr = data.outer_centres[k];
            Circle {
                x: ctr.0,
                y: ctr.1,
                r: data.outer_signs[k] * dist(ctr, outer_through[k]),
            }
        })
        .collect();
    let (c113, c122, c233) = (&outer[0], &outer[1], &outer[2]);

    // second intersections with the inner circles
    let p11 = second_point(c113, &c[0], p13)?;
    let p1123 = second_point(c113, &c123, p13)?;
    let p22 = second_point(c122, &c[1], p12)?;
    let p1223 = second_point(c122, &c123, p12)?;
    let p33 = second_point(c233, &c[2], p23)?;
    let p1233 = second_point(c233, &c123, p23)?;

    // three mid-layer cubes
    let (c112, r1) = complete_cube(p13, [&c[0], c113, &c123], [p11, p12, p1123])?;
    track(r1);
    let (c223, r2) = complete_cube(p12, [&c[1], c122, &c123], [p22, p23, p1223])?;
    track(r2);
    let (c133, r3) = complete_cube(p23, [&c[2], c233, &c123], [p33, p13, p1233])?;
    track(r3);

    // outer second intersections
    let p1122 = second_point(&c112, c122, p12)?;
    let p2233 = second_point(&c223, c233, p23)?;
    let p1133 = second_point(&c133, c113, p13)?;

    // the three five-index circles
    let (c11223, r4) = complete_cube(p12, [&c112, c122, &c123], [p1122, p1123, p1223])?;
    track(r4);
    let (c12233, r5) = complete_cube(p23, [&c223, c233, &c123], [p2233, p1223, p1233])?;
    track(r5);
    let (c11233, r6) = complete_cube(p13, [&c113, &c133, &c123], [p1133, p1123, p1233])?;
    track(r6);

    // their concurrency closes the configuration
    let p112233 = second_point(&c11223, &c12233, p1223)?;
    let concurrency_residual =
        (dist(p112233, (c11233.x, c11233.y)) - c11233.r.abs()).abs();
    track(concurrency_residual);

    // second derivation of the central circle's orientation, from the far side
    let signed_back = propagate_radius(p112233, [&c12233, &c11233, &c11223])?;
    let orientation_ratio = signed_back / c123.r;
    Ok(AssemblyOutcome {
        orientation_ratio,
        max_residual: max_res,
        concurrency_residual,
    })
}

/// Data generator: generic admissible positions and signs.
pub fn random_assembly_data(rng: &mut rand::rngs::StdRng) -> AssemblyData {
    use rand::Rng;
    let mut pt = |spread: f64| -> (f64, f64) {
        (
            rng.gen_range(-spread..spread),
            rng.gen_range(-spread..spread),
        )
    };
    let z = pt(1.0);
    let centres = std::array::from_fn(|_| {
        let (dx, dy) = pt(1.5);
        (z.0 + dx + 0.3 * dx.signum(), z.1 + dy + 0.3 * dy.signum())
    });
    let outer_centres = std::array::from_fn(|_| pt(2.5));
    let mut sign = || if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    AssemblyData {
        z,
        centres,
        signs: [sign(), sign(), sign()],
        outer_centres,
        outer_signs: [sign(), sign(), sign()],
    }
}
