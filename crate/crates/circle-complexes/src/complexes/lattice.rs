//! Storage and verification of lattice complexes: maps from Z³ (or Z³×{0,1})
//! sites to elements, point-like on the even sublattice and circle-like on
//! the odd one, with incidence along every lattice edge.

use super::gcplane;
use crate::hypercomplex::{Epsilon, GCNum, GC};
use crate::liecircle::{self, LieElement};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flag {
    /// Circle radius is stored unsigned; orientation not yet assigned.
    Unoriented,
    /// Render mirrored across the x-axis (the binary choice of the
    /// half-plane geometry).
    Reflected,
    /// Part of the prescribed Cauchy data.
    Seed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Site {
    pub element: LieElement<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<Flag>,
}

impl Site {
    pub fn new(element: LieElement<f64>) -> Self {
        Site {
            element,
            flags: Vec::new(),
        }
    }

    pub fn with_flag(element: LieElement<f64>, flag: Flag) -> Self {
        Site {
            element,
            flags: vec![flag],
        }
    }

    pub fn has(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }
}

pub type Idx = [i64; 4];

/// A lattice complex over Z³ (fourth index 0) or two parallel Z³ layers.
///
/// Serialises as `{"eps": e, "sites": [{"idx": [...], "element": ...,
/// "flags": [...]}, ...]}` with sites in lexicographic index order.
#[derive(Clone, Debug)]
pub struct LatticeComplex {
    pub eps: Epsilon,
    pub sites: BTreeMap<Idx, Site>,
}

#[derive(Serialize, Deserialize)]
struct SiteEntry {
    idx: Vec<i64>,
    element: LieElement<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    flags: Vec<Flag>,
}

#[derive(Serialize, Deserialize)]
struct LatticeComplexDoc {
    eps: Epsilon,
    sites: Vec<SiteEntry>,
}

impl Serialize for LatticeComplex {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        let doc = LatticeComplexDoc {
            eps: self.eps,
            sites: self
                .sites
                .iter()
                .map(|(idx, site)| SiteEntry {
                    idx: if idx[3] == 0 {
                        idx[..3].to_vec()
                    } else {
                        idx.to_vec()
                    },
                    element: site.element.clone(),
                    flags: site.flags.clone(),
                })
                .collect(),
        };
        doc.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = LatticeComplexDoc::deserialize(d)?;
        let mut sites = BTreeMap::new();
        for entry in doc.sites {
            let idx: Idx = match entry.idx.len() {
                3 => [entry.idx[0], entry.idx[1], entry.idx[2], 0],
                4 => [entry.idx[0], entry.idx[1], entry.idx[2], entry.idx[3]],
                n => {
                    return Err(serde::de::Error::custom(format!(
                        "site index must have 3 or 4 components, got {n}"
                    )))
                }
            };
            sites.insert(
                idx,
                Site {
                    element: entry.element,
                    flags: entry.flags,
                },
            );
        }
        Ok(LatticeComplex {
            eps: doc.eps,
            sites,
        })
    }
}

pub fn idx3(n: [i64; 3]) -> Idx {
    [n[0], n[1], n[2], 0]
}

pub fn parity(idx: &Idx) -> i64 {
    (idx.iter().sum::<i64>()).rem_euclid(2)
}

impl LatticeComplex {
    pub fn new(eps: Epsilon) -> Self {
        LatticeComplex {
            eps,
            sites: BTreeMap::new(),
        }
    }

    pub fn get(&self, idx: &Idx) -> Option<&Site> {
        self.sites.get(idx)
    }

    pub fn insert(&mut self, idx: Idx, site: Site) {
        self.sites.insert(idx, site);
    }

    /// The even-site datum as a generalized complex number: point
    /// coordinates, geodesic position/radius, or the dual-number line chart.
    pub fn even_datum(&self, idx: &Idx) -> Option<GC> {
        let site = self.get(idx)?;
        match (&site.element, self.eps) {
            (LieElement::Point { x, y }, Epsilon::MinusOne) => {
                Some(GCNum::from_xy(*x, *y, self.eps))
            }
            (LieElement::Circle { x, y, r }, Epsilon::PlusOne) if y.abs() < 1e-9 => {
                Some(GCNum::from_xy(*x, *r, self.eps))
            }
            (LieElement::Line { v, w, d }, Epsilon::Zero) => {
                liecircle::line_to_dual(*v, *w, *d).ok()
            }
            _ => None,
        }
    }

    pub fn edges(&self) -> Vec<(Idx, Idx)> {
        let mut out = Vec::new();
        for idx in self.sites.keys() {
            for d in 0..4 {
                let mut up = *idx;
                up[d] += 1;
                if self.sites.contains_key(&up) {
                    out.push((*idx, up));
                }
            }
        }
        out
    }

    /// Incidence residual of one edge; the even end supplies the hypercomplex
    /// datum, the odd end the circle.
    pub fn edge_residual(&self, a: &Idx, b: &Idx) -> Option<f64> {
        let (even, odd) = if parity(a) == 0 { (a, b) } else { (b, a) };
        let datum = self.even_datum(even)?;
        let odd_site = self.get(odd)?;
        match &odd_site.element {
            LieElement::Circle { x, y, r } => {
                Some(gcplane::incidence_residual(&datum, *x, *y, *r))
            }
            // a point-degenerate circle still counts through its Lie vector
            other => {
                let even_el = &self.get(even)?.element;
                Some(liecircle::contact_residual(even_el, other))
            }
        }
    }

    /// Bases of fully-present elementary 3D cubes (within one layer).
    pub fn cube_bases(&self) -> Vec<Idx> {
        let mut out = Vec::new();
        'next: for idx in self.sites.keys() {
            for corner in 1..8u8 {
                let mut c = *idx;
                c[0] += (corner & 1) as i64;
                c[1] += ((corner >> 1) & 1) as i64;
                c[2] += ((corner >> 2) & 1) as i64;
                if !self.sites.contains_key(&c) {
                    continue 'next;
                }
            }
            out.push(*idx);
        }
        out
    }

    /// Orientation consistency of one cube (Möbius case, oriented): for each
    /// point corner, the propagated signed radius of the opposite circle must
    /// match the stored one. Returns the worst relative mismatch, or None
    /// when the cube has unoriented circles.
    pub fn cube_correlation_mismatch(&self, base: &Idx) -> Option<f64> {
        if self.eps != Epsilon::MinusOne {
            return None;
        }
        let corner = |bits: u8| -> Idx {
            let mut c = *base;
            c[0] += (bits & 1) as i64;
            c[1] += ((bits >> 1) & 1) as i64;
            c[2] += ((bits >> 2) & 1) as i64;
            c
        };
        let mut worst: f64 = 0.0;
        for bits in 0..8u8 {
            let v = corner(bits);
            if parity(&v) != 0 {
                continue;
            }
            let LieElement::Point { x, y } = self.get(&v)?.element else {
                return None;
            };
            let mut centres = Vec::new();
            let mut radii = Vec::new();
            for d in 0..3 {
                let n = corner(bits ^ (1 << d));
                let s = self.get(&n)?;
                if s.has(Flag::Unoriented) {
                    return None;
                }
                let LieElement::Circle { x: cx, y: cy, r } = s.element else {
                    return None;
                };
                centres.push(GCNum::from_xy(cx, cy, Epsilon::MinusOne));
                radii.push(r);
            }
            let opp_site = self.get(&corner(bits ^ 7))?;
            if opp_site.has(Flag::Unoriented) {
                return None;
            }
            let LieElement::Circle { r: opp_r, .. } = opp_site.element else {
                return None;
            };
            let pred = liecircle::radius_z1(
                &GCNum::from_xy(x, y, Epsilon::MinusOne),
                &centres[0],
                &centres[1],
                &centres[2],
                &radii[0],
                &radii[1],
                &radii[2],
                false,
            )
            .ok()?;
            let mismatch = (pred - opp_r).abs() / pred.abs().max(1e-12);
            if mismatch > worst {
                worst = mismatch;
            }
        }
        Some(worst)
    }

    pub fn verify(&self) -> ComplexReport {
        let mut report = ComplexReport::default();
        for (a, b) in self.edges() {
            report.edge_count += 1;
            match self.edge_residual(&a, &b) {
                Some(r) => report.max_edge_residual = report.max_edge_residual.max(r),
                None => report.unchecked_edges += 1,
            }
        }
        for base in self.cube_bases() {
            report.cube_count += 1;
            if let Some(m) = self.cube_correlation_mismatch(&base) {
                report.correlated_cubes += 1;
                report.max_correlation_mismatch = report.max_correlation_mismatch.max(m);
            }
        }
        report.unoriented_circles = self
            .sites
            .values()
            .filter(|s| s.has(Flag::Unoriented))
            .count();
        report
    }

    /// Even slice `n₁+n₂+n₃ = k` (layer 0) as hypercomplex data.
    pub fn slice(&self, k: i64) -> A2Slice {
        let mut values = BTreeMap::new();
        for (idx, _) in self.sites.iter() {
            if idx[3] == 0 && idx[0] + idx[1] + idx[2] == k {
                if let Some(z) = self.even_datum(idx) {
                    values.insert([idx[0], idx[1], idx[2]], z);
                }
            }
        }
        A2Slice { k, values }
    }
}

/// A two-dimensional slice of constant index sum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct A2Slice {
    pub k: i64,
    pub values: BTreeMap<[i64; 3], GC>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ComplexReport {
    pub edge_count: usize,
    pub unchecked_edges: usize,
    pub max_edge_residual: f64,
    pub cube_count: usize,
    pub correlated_cubes: usize,
    pub max_correlation_mismatch: f64,
    pub unoriented_circles: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_ordered() {
        let mut lc = LatticeComplex::new(Epsilon::MinusOne);
        lc.insert(idx3([0, 0, 0]), Site::new(LieElement::point(0.0, 0.0)));
        lc.insert(
            idx3([1, 0, 0]),
            Site::with_flag(LieElement::circle(1.0, 0.0, 1.0), Flag::Unoriented),
        );
        let s = serde_json::to_string(&lc).unwrap();
        let back: LatticeComplex = serde_json::from_str(&s).unwrap();
        assert_eq!(back.sites.len(), 2);
        assert_eq!(back.eps, Epsilon::MinusOne);
        // deterministic serialisation
        assert_eq!(s, serde_json::to_string(&back).unwrap());
    }

    #[test]
    fn edge_residual_point_circle() {
        let mut lc = LatticeComplex::new(Epsilon::MinusOne);
        lc.insert(idx3([0, 0, 0]), Site::new(LieElement::point(0.0, 0.0)));
        lc.insert(
            idx3([1, 0, 0]),
            Site::new(LieElement::circle(1.0, 0.0, 1.0)),
        );
        let edges = lc.edges();
        assert_eq!(edges.len(), 1);
        let r = lc.edge_residual(&edges[0].0, &edges[0].1).unwrap();
        assert!(r < 1e-12);
    }
}
