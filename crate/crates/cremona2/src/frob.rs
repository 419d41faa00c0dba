//! The four Frobenius actions and the candidate points feeding the
//! classification pipelines.
//!
//! The standard Galois action on P^2 squares coordinates. On the quadric,
//! degree-5 and degree-6 models the action is transported through the
//! birational model maps, giving the three twisted actions below; their
//! formulas are fixed data, and the same polynomials drive both symbolic
//! identity checks and fast pointwise orbit computation.

use thiserror::Error;

use crate::ff::{Field, FieldElem};
use crate::geom::{ProjPoint, Space};
use crate::poly::MPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrobError {
    #[error("all output coordinates vanish (indeterminate point)")]
    IndeterminatePoint,
    #[error("orbit period exceeds the cap {0}")]
    PeriodOverflow(usize),
    #[error("orbit size {0} not supported on this surface")]
    UnsupportedSize(u32),
}

/// Orbit cap used by every classification pipeline; the largest field
/// degree is 30 and twisted orbits stay well below twice that.
pub const ORBIT_CAP: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum FrobModel {
    /// `[x:y:z] -> [x^2:y^2:z^2]`
    StdP2,
    /// `([x0:x1],[y0:y1]) -> ([y0^2:y1^2],[x0^2:x1^2])`
    QTwist,
    /// `[x:y:z] -> [x^2y^2 : y^2(x^2+z^2) : x^2(y^2+z^2)]`
    D5Twist,
    /// `[x:y:z] -> [x^2z^2 : x^2y^2 : y^2z^2]`
    D6Twist,
}

impl FrobModel {
    pub fn space(&self) -> Space {
        match self {
            FrobModel::QTwist => Space::P1xP1,
            _ => Space::P2,
        }
    }

    /// Image of a point, normalized.
    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint, FrobError> {
        let c = p.coords();
        let raw: Vec<FieldElem> = match self {
            FrobModel::StdP2 => vec![c[0] * c[0], c[1] * c[1], c[2] * c[2]],
            FrobModel::QTwist => {
                vec![c[2] * c[2], c[3] * c[3], c[0] * c[0], c[1] * c[1]]
            }
            FrobModel::D5Twist => {
                let (x2, y2, z2) = (c[0] * c[0], c[1] * c[1], c[2] * c[2]);
                vec![x2 * y2, y2 * (x2 + z2), x2 * (y2 + z2)]
            }
            FrobModel::D6Twist => {
                let (x2, y2, z2) = (c[0] * c[0], c[1] * c[1], c[2] * c[2]);
                vec![x2 * z2, x2 * y2, y2 * z2]
            }
        };
        ProjPoint::new(self.space(), &raw).map_err(|_| FrobError::IndeterminatePoint)
    }

    /// The defining formulas as a polynomial tuple over the given field.
    pub fn formulas(&self, field: Field) -> Vec<MPoly> {
        let p = |s: &str| crate::poly::p3(field, s);
        match self {
            FrobModel::StdP2 => vec![p("x^2"), p("y^2"), p("z^2")],
            FrobModel::QTwist => {
                let q = |s: &str| crate::poly::parse_poly(field, 4, s).unwrap();
                vec![q("y0^2"), q("y1^2"), q("x0^2"), q("x1^2")]
            }
            FrobModel::D5Twist => vec![
                p("x^2*y^2"),
                p("x^2*y^2 + y^2*z^2"),
                p("x^2*y^2 + x^2*z^2"),
            ],
            FrobModel::D6Twist => vec![p("x^2*z^2"), p("x^2*y^2"), p("y^2*z^2")],
        }
    }
}

/// A Galois orbit: the iterates of the representative under the model,
/// pairwise distinct, closing back at the representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GOrbit {
    model: FrobModel,
    points: Vec<ProjPoint>,
}

impl GOrbit {
    pub fn model(&self) -> FrobModel {
        self.model
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn representative(&self) -> &ProjPoint {
        &self.points[0]
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.contains(p)
    }
}

/// Iterate the model until first return to `p`.
pub fn orbit(model: FrobModel, p: &ProjPoint, cap: usize) -> Result<GOrbit, FrobError> {
    assert!(cap >= 1);
    let mut points = vec![p.clone()];
    let mut cur = model.apply(p)?;
    while cur != *p {
        if points.len() >= cap {
            return Err(FrobError::PeriodOverflow(cap));
        }
        if points.contains(&cur) {
            // entered a cycle that misses the seed: not a Galois orbit
            return Err(FrobError::PeriodOverflow(cap));
        }
        points.push(cur.clone());
        cur = model.apply(&cur)?;
    }
    Ok(GOrbit { model, points })
}

fn point2(x: FieldElem, y: FieldElem, z: FieldElem) -> ProjPoint {
    ProjPoint::new(Space::P2, &[x, y, z]).expect("nonzero candidate")
}

/// One bit-minimal representative per Frobenius orbit of the field.
pub fn frobenius_orbit_representatives(field: Field) -> Vec<FieldElem> {
    field
        .elements()
        .filter(|&y| {
            let mut c = y;
            loop {
                c = c.frobenius(1);
                if c == y {
                    return true;
                }
                if c.bits() < y.bits() {
                    return false;
                }
            }
        })
        .collect()
}

/// Candidate points on P^2 for orbit size d. For odd d every point
/// `[1:y:z]` with y ranging over orbit representatives; for even d the two
/// normal forms `[1:y:b]` and `[1:y:b^2+by]` with b the registered subfield
/// root of degree d/2.
pub fn candidates_p2(d: u32) -> Result<Vec<ProjPoint>, FrobError> {
    let reg = crate::ff::registry();
    match d {
        3 | 7 => {
            let field = reg.field(if d == 3 { "F8" } else { "F128" });
            let reps = frobenius_orbit_representatives(field);
            let mut out = Vec::new();
            for &y in &reps {
                for z in field.elements() {
                    out.push(point2(field.one(), y, z));
                }
            }
            Ok(out)
        }
        6 | 8 => {
            let field = reg.field(if d == 6 { "F64" } else { "F256" });
            let b = field.gen_x().pow(if d == 6 { 9 } else { 17 });
            let mut out = Vec::new();
            for y in field.elements() {
                out.push(point2(field.one(), y, b));
            }
            for y in field.elements() {
                out.push(point2(field.one(), y, b * b + b * y));
            }
            Ok(out)
        }
        _ => Err(FrobError::UnsupportedSize(d)),
    }
}

/// Candidates on P^1 x P^1 for the quadric pipeline: every pair of
/// nonzero affine coordinates for even d, the pairs (x, x^(2^d)) over the
/// quadratic extension for odd d.
pub fn candidates_q(d: u32) -> Result<Vec<ProjPoint>, FrobError> {
    let reg = crate::ff::registry();
    let mk = |field: Field, x: FieldElem, y: FieldElem| {
        ProjPoint::new(Space::P1xP1, &[x, field.one(), y, field.one()]).expect("affine pair")
    };
    match d {
        4 | 6 => {
            let field = reg.field(if d == 4 { "F16" } else { "F64" });
            let mut out = Vec::new();
            for x in field.nonzero_elements() {
                for y in field.nonzero_elements() {
                    out.push(mk(field, x, y));
                }
            }
            Ok(out)
        }
        7 => {
            let field = reg.field("F2_14");
            Ok(field
                .nonzero_elements()
                .map(|x| mk(field, x, x.frobenius(7)))
                .collect())
        }
        _ => Err(FrobError::UnsupportedSize(d)),
    }
}

/// Candidates for the degree-5 model: the solutions of the size-d orbit
/// conditions. Returns the points together with the number of solutions
/// skipped because the derived coordinate was not invertible.
pub fn candidates_d5(d: u32) -> Result<(Vec<ProjPoint>, usize), FrobError> {
    let reg = crate::ff::registry();
    match d {
        3 => {
            let field = reg.field("F2_15");
            let one = field.one();
            let mut out = Vec::new();
            let mut skipped = 0;
            for b in field.elements() {
                let lhs =
                    b.pow(73) + b.pow(72) + b.pow(64) + b.pow(57) + b.pow(9) + b.pow(8) + b;
                if lhs != one {
                    continue;
                }
                if b.is_one() {
                    // spurious root: clearing the denominator 1+b^8 in the
                    // fixed-point derivation introduced b = 1, where the
                    // twisted Frobenius is indeterminate ([1:1:1] -> [1:0:0])
                    skipped += 1;
                    continue;
                }
                match (b.pow(8) + b.pow(7) + one).inverse() {
                    Ok(a) => out.push(point2(one, a, b)),
                    Err(_) => skipped += 1,
                }
            }
            Ok((out, skipped))
        }
        4 => {
            let field = reg.field("F2_20");
            let one = field.one();
            let mut out = Vec::new();
            for a in field.elements() {
                if a.pow(257) + a.pow(16) == one {
                    out.push(point2(one, a, one + a.pow(16)));
                }
            }
            Ok((out, 0))
        }
        _ => Err(FrobError::UnsupportedSize(d)),
    }
}

/// Candidates for the degree-6 model: roots-of-unity families in the
/// torus, one family per orbit size.
pub fn candidates_d6(d: u32) -> Result<Vec<ProjPoint>, FrobError> {
    let reg = crate::ff::registry();
    match d {
        2 => {
            let field = reg.field("F64");
            let one = field.one();
            let mut out = Vec::new();
            for b in field.roots_of_unity(21).unwrap() {
                out.push(point2(b.pow(4).inverse().unwrap(), b, one));
            }
            Ok(out)
        }
        3 => {
            let field = reg.field("F64");
            let one = field.one();
            let mu9 = field.roots_of_unity(9).unwrap();
            let mut out = Vec::new();
            for &a in &mu9 {
                for &b in &mu9 {
                    out.push(point2(a, b, one));
                }
            }
            Ok(out)
        }
        4 => {
            let field = reg.field("F2_12");
            let one = field.one();
            let mut out = Vec::new();
            for a in field.roots_of_unity(16 * 17 + 1).unwrap() {
                out.push(point2(a, a.pow(16).inverse().unwrap(), one));
            }
            Ok(out)
        }
        5 => {
            let field = reg.field("F2_30");
            let one = field.one();
            let mut out = Vec::new();
            for b in field.roots_of_unity(32 * 31 + 1).unwrap() {
                out.push(point2(b.pow(32), b, one));
            }
            Ok(out)
        }
        _ => Err(FrobError::UnsupportedSize(d)),
    }
}
