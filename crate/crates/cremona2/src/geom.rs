//! Projective points, exact linear algebra and the kernel-dimension test
//! for points in del Pezzo-general position.
//!
//! A curve of degree d (or bidegree (a,b)) with prescribed passage and
//! singularity conditions exists iff the evaluation/derivative matrix has
//! positive nullity; all general-position predicates reduce to that test
//! over small subsets.

use std::fmt;

use thiserror::Error;

use crate::ff::{Field, FieldElem};
use crate::poly::Mono;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("too many points: {0} (limit {1})")]
    TooManyPoints(usize, usize),
    #[error("no affine chart valid for a singular point")]
    ChartFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Space {
    P2,
    P3,
    P1xP1,
}

impl Space {
    pub fn coord_len(&self) -> usize {
        match self {
            Space::P2 => 3,
            Space::P3 => 4,
            Space::P1xP1 => 4,
        }
    }
}

/// A point with canonical normalization: the first nonzero coordinate of
/// each factor equals 1, so equality of points is plain equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    space: Space,
    coords: Vec<FieldElem>,
}

impl ProjPoint {
    pub fn new(space: Space, raw: &[FieldElem]) -> Result<ProjPoint, GeomError> {
        assert_eq!(raw.len(), space.coord_len());
        let mut coords = raw.to_vec();
        let factors: &[std::ops::Range<usize>] = match space {
            Space::P2 => &[0..3],
            Space::P3 => &[0..4],
            Space::P1xP1 => &[0..2, 2..4],
        };
        for f in factors {
            let inv = match coords[f.clone()].iter().find(|c| !c.is_zero()) {
                Some(c) => c.inverse().unwrap(),
                None => return Err(GeomError::ZeroVector),
            };
            for c in &mut coords[f.clone()] {
                *c = *c * inv;
            }
        }
        Ok(ProjPoint { space, coords })
    }

    pub fn p2(coords: &[FieldElem; 3]) -> Result<ProjPoint, GeomError> {
        ProjPoint::new(Space::P2, coords)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }

    pub fn lift_to(&self, field: Field) -> ProjPoint {
        let coords: Vec<FieldElem> = self
            .coords
            .iter()
            .map(|c| field.embed_subfield(*c).expect("coordinate field embeds"))
            .collect();
        ProjPoint::new(self.space, &coords).unwrap()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coords;
        match self.space {
            Space::P2 => write!(f, "[{}:{}:{}]", c[0], c[1], c[2]),
            Space::P3 => write!(f, "[{}:{}:{}:{}]", c[0], c[1], c[2], c[3]),
            Space::P1xP1 => write!(f, "([{}:{}],[{}:{}])", c[0], c[1], c[2], c[3]),
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Dense matrix over one field, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<FieldElem>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        let _ = field;
        Matrix { rows: r, cols: c, data }
    }

    pub fn at(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    /// Row echelon form in place; returns the pivot columns.
    fn echelonize(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                let tmp = self.at(row, j);
                let v = self.at(p, j);
                self.set(row, j, v);
                self.set(p, j, tmp);
            }
            let inv = self.at(row, col).inverse().unwrap();
            for j in col..self.cols {
                let v = self.at(row, j) * inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col);
                    for j in col..self.cols {
                        let v = self.at(r, j) + factor * self.at(row, j);
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().echelonize().len()
    }
}

/// Exact nullity of M via row reduction.
pub fn kernel_dimension(m: &Matrix) -> usize {
    m.cols - m.rank()
}

/// Echelon-form basis of the nullspace, deterministic pivot order: one
/// basis vector per free column, with unit entry at that column.
pub fn kernel_basis(m: &Matrix, field: Field) -> Vec<Vec<FieldElem>> {
    let mut red = m.clone();
    let pivots = red.echelonize();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![field.zero(); m.cols];
        v[fc] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            // reduced form: row r reads  x_pc + sum over free cols = 0
            v[pc] = red.at(r, fc); // -coefficient, char 2
        }
        basis.push(v);
    }
    // rank-nullity cross-check between the two elimination passes
    debug_assert_eq!(basis.len(), kernel_dimension(m));
    basis
}

/// Degree data for a linear system: total degree on P^2/P^3, bidegree on
/// P^1 x P^1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeSpec {
    Total(u32),
    Bi(u32, u32),
}

/// The monomials of the given degree in graded-lex order (x > y > z,
/// x0 > x1 > y0 > y1). N = (d+2)(d+1)/2 on P^2, (a+1)(b+1) on P^1 x P^1.
pub fn monomial_basis(space: Space, spec: DegreeSpec) -> Vec<Mono> {
    let mut out = Vec::new();
    match (space, spec) {
        (Space::P2, DegreeSpec::Total(d)) => {
            let d = d as u16;
            for i in (0..=d).rev() {
                for j in (0..=(d - i)).rev() {
                    out.push(Mono([i, j, d - i - j, 0]));
                }
            }
        }
        (Space::P1xP1, DegreeSpec::Bi(a, b)) => {
            let (a, b) = (a as u16, b as u16);
            for i in (0..=a).rev() {
                for j in (0..=b).rev() {
                    out.push(Mono([i, a - i, j, b - j]));
                }
            }
        }
        _ => panic!("unsupported space/degree combination"),
    }
    out
}

fn eval_mono(m: &Mono, p: &[FieldElem], field: Field) -> FieldElem {
    let mut acc = field.one();
    for (v, &e) in m.0.iter().enumerate() {
        for _ in 0..e {
            acc = acc * p[v];
        }
    }
    acc
}

fn eval_mono_derivative(m: &Mono, var: usize, p: &[FieldElem], field: Field) -> FieldElem {
    let e = m.0[var];
    if e % 2 == 0 {
        // even exponents differentiate to zero in characteristic 2
        return field.zero();
    }
    let mut dm = *m;
    dm.0[var] = e - 1;
    eval_mono(&dm, p, field)
}

/// The evaluation/derivative matrix: one row per point, then 3 derivative
/// rows per singular point on P^2 (2 per singular point on P^1 x P^1, in
/// the affine chart where the normalized coordinate of each factor is 1).
pub fn position_matrix(
    points: &[ProjPoint],
    spec: DegreeSpec,
    singular_at: &[usize],
) -> Result<Matrix, GeomError> {
    assert!(!points.is_empty());
    let space = points[0].space();
    let field = points[0].field();
    let basis = monomial_basis(space, spec);
    let mut rows = Vec::new();
    for p in points {
        assert_eq!(p.space(), space);
        assert!(p.field() == field, "points must share a field");
        rows.push(basis.iter().map(|m| eval_mono(m, p.coords(), field)).collect());
    }
    for &k in singular_at {
        let p = &points[k];
        match space {
            Space::P2 | Space::P3 => {
                for var in 0..space.coord_len() {
                    rows.push(
                        basis
                            .iter()
                            .map(|m| eval_mono_derivative(m, var, p.coords(), field))
                            .collect(),
                    );
                }
            }
            Space::P1xP1 => {
                // differentiate with respect to the non-normalized
                // coordinate of each factor; the coordinate pinned to 1 by
                // normalization makes that chart valid
                let c = p.coords();
                let var_x = if c[0].is_one() { 1 } else { 0 };
                let var_y = if c[2].is_one() { 3 } else { 2 };
                if c[1 - var_x].is_zero() || c[2 + (3 - var_y)].is_zero() {
                    return Err(GeomError::ChartFailure);
                }
                for var in [var_x, var_y] {
                    rows.push(
                        basis
                            .iter()
                            .map(|m| eval_mono_derivative(m, var, p.coords(), field))
                            .collect(),
                    );
                }
            }
        }
    }
    Ok(Matrix::from_rows(field, rows))
}

/// Names the first violated general-position condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Violation {
    Collinear3,
    Conic6,
    NodalCubic8,
    Ruling2,
    Curve11_4,
    Curve21_6,
    Curve12_6,
    NodalCurve22_7,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionReport {
    pub ok: bool,
    pub violated: Option<Violation>,
    pub witness: Vec<usize>,
}

impl PositionReport {
    fn pass() -> Self {
        PositionReport { ok: true, violated: None, witness: Vec::new() }
    }

    fn fail(v: Violation, witness: Vec<usize>) -> Self {
        PositionReport { ok: false, violated: Some(v), witness }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn curve_through(points: &[ProjPoint], idx: &[usize], spec: DegreeSpec, singular: &[usize]) -> bool {
    let sel: Vec<ProjPoint> = idx.iter().map(|&i| points[i].clone()).collect();
    let m = position_matrix(&sel, spec, singular).expect("valid chart after normalization");
    kernel_dimension(&m) > 0
}

/// Del Pezzo-general position on P^2: no 3 collinear, no 6 on a conic and,
/// for 8 points, no cubic through all of them with a double point at one.
pub fn general_position_p2(points: &[ProjPoint]) -> Result<PositionReport, GeomError> {
    if points.len() > 8 {
        return Err(GeomError::TooManyPoints(points.len(), 8));
    }
    for s in subsets(points.len(), 3) {
        if curve_through(points, &s, DegreeSpec::Total(1), &[]) {
            return Ok(PositionReport::fail(Violation::Collinear3, s));
        }
    }
    for s in subsets(points.len(), 6) {
        if curve_through(points, &s, DegreeSpec::Total(2), &[]) {
            return Ok(PositionReport::fail(Violation::Conic6, s));
        }
    }
    if points.len() == 8 {
        let all: Vec<usize> = (0..8).collect();
        for i in 0..8 {
            if curve_through(points, &all, DegreeSpec::Total(3), &[i]) {
                let mut w = vec![i];
                w.extend(all.iter().filter(|&&j| j != i));
                return Ok(PositionReport::fail(Violation::NodalCubic8, w));
            }
        }
    }
    Ok(PositionReport::pass())
}

/// Del Pezzo-general position on P^1 x P^1: no 2 on a ruling, no 4 on a
/// (1,1)-curve, no 6 on a (2,1)- or (1,2)-curve and, for 7 points, no
/// (2,2)-curve through all of them with a double point at one.
pub fn general_position_p1xp1(points: &[ProjPoint]) -> Result<PositionReport, GeomError> {
    if points.len() > 7 {
        return Err(GeomError::TooManyPoints(points.len(), 7));
    }
    for s in subsets(points.len(), 2) {
        if curve_through(points, &s, DegreeSpec::Bi(1, 0), &[])
            || curve_through(points, &s, DegreeSpec::Bi(0, 1), &[])
        {
            return Ok(PositionReport::fail(Violation::Ruling2, s));
        }
    }
    for s in subsets(points.len(), 4) {
        if curve_through(points, &s, DegreeSpec::Bi(1, 1), &[]) {
            return Ok(PositionReport::fail(Violation::Curve11_4, s));
        }
    }
    for s in subsets(points.len(), 6) {
        if curve_through(points, &s, DegreeSpec::Bi(2, 1), &[]) {
            return Ok(PositionReport::fail(Violation::Curve21_6, s));
        }
        if curve_through(points, &s, DegreeSpec::Bi(1, 2), &[]) {
            return Ok(PositionReport::fail(Violation::Curve12_6, s));
        }
    }
    if points.len() == 7 {
        let all: Vec<usize> = (0..7).collect();
        for i in 0..7 {
            if curve_through(points, &all, DegreeSpec::Bi(2, 2), &[i]) {
                let mut w = vec![i];
                w.extend(all.iter().filter(|&&j| j != i));
                return Ok(PositionReport::fail(Violation::NodalCurve22_7, w));
            }
        }
    }
    Ok(PositionReport::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::registry;

    fn pt2(_field: Field, c: [FieldElem; 3]) -> ProjPoint {
        ProjPoint::p2(&c).unwrap()
    }

    #[test]
    fn normalization() {
        let f16 = registry().field("F16");
        let a = f16.gen_x();
        let p = pt2(f16, [a, a, a]);
        assert_eq!(p.coords(), &[f16.one(), f16.one(), f16.one()]);
        let q = ProjPoint::new(
            Space::P1xP1,
            &[f16.zero(), a, a * a, a * a],
        )
        .unwrap();
        assert_eq!(q.to_string(), "([0:1],[1:1])");
        assert_eq!(
            ProjPoint::p2(&[f16.zero(), f16.zero(), f16.zero()]),
            Err(GeomError::ZeroVector)
        );
    }

    #[test]
    fn monomial_basis_counts() {
        assert_eq!(monomial_basis(Space::P2, DegreeSpec::Total(1)).len(), 3);
        assert_eq!(monomial_basis(Space::P2, DegreeSpec::Total(3)).len(), 10);
        assert_eq!(monomial_basis(Space::P1xP1, DegreeSpec::Bi(2, 2)).len(), 9);
        // graded-lex: x, y, z in that order for d = 1
        let b = monomial_basis(Space::P2, DegreeSpec::Total(1));
        assert_eq!(b[0].0, [1, 0, 0, 0]);
        assert_eq!(b[1].0, [0, 1, 0, 0]);
        assert_eq!(b[2].0, [0, 0, 1, 0]);
    }

    #[test]
    fn kernel_small_cases() {
        let f4 = registry().field("F4");
        let id = Matrix::from_rows(
            f4,
            (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| if i == j { f4.one() } else { f4.zero() })
                        .collect()
                })
                .collect(),
        );
        assert_eq!(kernel_dimension(&id), 0);
        assert!(kernel_basis(&id, f4).is_empty());
        let z = Matrix::zeros(f4, 2, 5);
        assert_eq!(kernel_dimension(&z), 5);
        // rank-nullity on a random-ish matrix
        let w = f4.gen_x();
        let m = Matrix::from_rows(
            f4,
            vec![
                vec![f4.one(), w, w * w],
                vec![w, w * w, f4.one()],
                vec![f4.one() + w, w * w + w, w * w + f4.one()],
            ],
        );
        assert_eq!(m.rank() + kernel_dimension(&m), 3);
    }

    #[test]
    fn collinear_kernel() {
        let f4 = registry().field("F4");
        let pts = vec![
            pt2(f4, [f4.one(), f4.zero(), f4.zero()]),
            pt2(f4, [f4.zero(), f4.one(), f4.zero()]),
            pt2(f4, [f4.one(), f4.one(), f4.zero()]),
        ];
        let m = position_matrix(&pts, DegreeSpec::Total(1), &[]).unwrap();
        assert_eq!(kernel_dimension(&m), 1); // they all satisfy z = 0
        let r = general_position_p2(&pts).unwrap();
        assert_eq!(r.violated, Some(Violation::Collinear3));
    }

    #[test]
    fn matrix_shapes_match_kernel_test() {
        let f256 = registry().field("F256");
        let a = f256.gen_x();
        let mut pts = Vec::new();
        let mut p = pt2(f256, [f256.one(), a, a.pow(3)]);
        for _ in 0..8 {
            pts.push(p.clone());
            let c = p.coords();
            p = pt2(f256, [c[0] * c[0], c[1] * c[1], c[2] * c[2]]);
        }
        let m = position_matrix(&pts, DegreeSpec::Total(3), &[0]).unwrap();
        assert_eq!((m.rows, m.cols), (11, 10));
        let f16 = registry().field("F16");
        let b = f16.gen_x();
        let q: Vec<ProjPoint> = (0..7)
            .map(|i| {
                ProjPoint::new(
                    Space::P1xP1,
                    &[f16.one(), b.pow(i + 1), f16.one(), b.pow(2 * i + 3)],
                )
                .unwrap()
            })
            .collect();
        let mq = position_matrix(&q, DegreeSpec::Bi(2, 2), &[2]).unwrap();
        assert_eq!((mq.rows, mq.cols), (9, 9));
    }

    #[test]
    fn four_point_orbit_general_position() {
        // the orbit of [1:rho:rho^2], rho a root of x^4+x+1: no 3 collinear
        let f16 = registry().field("F16");
        let mut pts = Vec::new();
        let mut r = f16.gen_x();
        for _ in 0..4 {
            pts.push(pt2(f16, [f16.one(), r, r * r]));
            r = r * r;
        }
        assert!(general_position_p2(&pts).unwrap().ok);
    }

    #[test]
    fn conic_detection_on_seven_points() {
        // 5 points on the conic y^2 = xz plus a size-2 orbit on it: 7 on a conic
        let f2_10 = crate::ff::create_field(&[1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1]).unwrap();
        let a = f2_10.embed_with_min_poly(registry().field("F32").modulus()).unwrap();
        let w = f2_10.embed_with_min_poly(registry().field("F4").modulus()).unwrap();
        let mut pts = Vec::new();
        let mut r = a;
        for _ in 0..5 {
            pts.push(pt2(f2_10, [f2_10.one(), r, r * r]));
            r = r * r;
        }
        let mut s = w;
        for _ in 0..2 {
            pts.push(pt2(f2_10, [f2_10.one(), s, s * s]));
            s = s * s;
        }
        let rep = general_position_p2(&pts).unwrap();
        assert_eq!(rep.violated, Some(Violation::Conic6));
    }

    #[test]
    fn p1xp1_cases() {
        let f4 = registry().field("F4");
        let one = f4.one();
        let zero = f4.zero();
        // same first factor: a ruling violation
        let p = ProjPoint::new(Space::P1xP1, &[one, zero, one, zero]).unwrap();
        let q = ProjPoint::new(Space::P1xP1, &[one, zero, one, one]).unwrap();
        let r = general_position_p1xp1(&[p, q]).unwrap();
        assert_eq!(r.violated, Some(Violation::Ruling2));
        // the three blown-up points of the degree-6 model are fine
        let q1 = ProjPoint::new(Space::P1xP1, &[one, zero, one, zero]).unwrap();
        let q2 = ProjPoint::new(Space::P1xP1, &[zero, one, zero, one]).unwrap();
        let q3 = ProjPoint::new(Space::P1xP1, &[one, one, one, one]).unwrap();
        assert!(general_position_p1xp1(&[q1, q2, q3]).unwrap().ok);
    }

    #[test]
    fn curve11_violation_brute_forced() {
        // four solutions of x0*y0 + x1*y1 = 0 over F16 with distinct factors
        let f16 = registry().field("F16");
        let mut pts = Vec::new();
        for u in f16.nonzero_elements() {
            if pts.len() == 4 {
                break;
            }
            // ([u:1],[1:u]) satisfies x0*y0 + x1*y1 = u + u = 0
            let cand = ProjPoint::new(Space::P1xP1, &[u, f16.one(), f16.one(), u]).unwrap();
            if pts
                .iter()
                .all(|p: &ProjPoint| p.coords()[0..2] != cand.coords()[0..2] && p.coords()[2..4] != cand.coords()[2..4])
            {
                pts.push(cand);
            }
        }
        assert_eq!(pts.len(), 4);
        let rep = general_position_p1xp1(&pts).unwrap();
        assert_eq!(rep.violated, Some(Violation::Curve11_4));
    }

    #[test]
    fn too_many_points() {
        let f4 = registry().field("F4");
        let p = pt2(f4, [f4.one(), f4.zero(), f4.zero()]);
        assert!(matches!(
            general_position_p2(&vec![p.clone(); 9]),
            Err(GeomError::TooManyPoints(9, 8))
        ));
        let q = ProjPoint::new(Space::P1xP1, &[f4.one(), f4.zero(), f4.one(), f4.zero()]).unwrap();
        assert!(matches!(
            general_position_p1xp1(&vec![q; 8]),
            Err(GeomError::TooManyPoints(8, 7))
        ));
    }
}
