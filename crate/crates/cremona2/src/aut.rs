//! The automorphism groups of the four minimal surface models:
//! PGL_3(F_2) by full enumeration, the 120-element stabilizer of the
//! quadric form inside PGL_4(F_2), and the birational automorphism sets
//! of the degree-5 and degree-6 models on P^2.

use crate::ff::Field;
use crate::geom::{ProjPoint, Space};
use crate::poly::MPoly;
use crate::rmap::{maps_equal_rational, RatMap};

/// A square matrix over GF(2), dimensions 2 to 4, packed row major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GF2Mat {
    pub dim: u8,
    bits: u16,
}

impl GF2Mat {
    pub fn new(dim: u8, rows: &[&[u8]]) -> GF2Mat {
        assert!((2..=4).contains(&dim));
        assert_eq!(rows.len(), dim as usize);
        let mut bits = 0u16;
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim as usize);
            for (j, &v) in row.iter().enumerate() {
                if v & 1 == 1 {
                    bits |= 1 << (i * dim as usize + j);
                }
            }
        }
        GF2Mat { dim, bits }
    }

    pub fn from_bits(dim: u8, bits: u16) -> GF2Mat {
        GF2Mat { dim, bits }
    }

    pub fn identity(dim: u8) -> GF2Mat {
        let mut bits = 0u16;
        for i in 0..dim as usize {
            bits |= 1 << (i * dim as usize + i);
        }
        GF2Mat { dim, bits }
    }

    pub fn at(&self, i: usize, j: usize) -> u8 {
        ((self.bits >> (i * self.dim as usize + j)) & 1) as u8
    }

    pub fn mul(&self, other: &GF2Mat) -> GF2Mat {
        assert_eq!(self.dim, other.dim);
        let n = self.dim as usize;
        let mut bits = 0u16;
        for i in 0..n {
            for j in 0..n {
                let mut v = 0;
                for k in 0..n {
                    v ^= self.at(i, k) & other.at(k, j);
                }
                if v == 1 {
                    bits |= 1 << (i * n + j);
                }
            }
        }
        GF2Mat { dim: self.dim, bits }
    }

    pub fn is_invertible(&self) -> bool {
        let n = self.dim as usize;
        let mut rows: Vec<u16> =
            (0..n).map(|i| (self.bits >> (i * n)) & ((1 << n) - 1)).collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..n).find(|&r| (rows[r] >> col) & 1 == 1) else {
                return false;
            };
            rows.swap(rank, p);
            for r in 0..n {
                if r != rank && (rows[r] >> col) & 1 == 1 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
        true
    }

    pub fn inverse(&self) -> Option<GF2Mat> {
        let n = self.dim as usize;
        let mut rows: Vec<u32> = (0..n)
            .map(|i| {
                let left = ((self.bits >> (i * n)) & ((1 << n) - 1)) as u32;
                left | (1u32 << (n + i))
            })
            .collect();
        let mut rank = 0;
        for col in 0..n {
            let p = (rank..n).find(|&r| (rows[r] >> col) & 1 == 1)?;
            rows.swap(rank, p);
            for r in 0..n {
                if r != rank && (rows[r] >> col) & 1 == 1 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
        let mut bits = 0u16;
        for (i, row) in rows.iter().enumerate() {
            for j in 0..n {
                if (row >> (n + j)) & 1 == 1 {
                    bits |= 1 << (i * n + j);
                }
            }
        }
        Some(GF2Mat { dim: self.dim, bits })
    }

    pub fn is_involution(&self) -> bool {
        *self != GF2Mat::identity(self.dim) && self.mul(self) == GF2Mat::identity(self.dim)
    }

    /// Apply to a point with coordinates in any binary field (the entries
    /// 0/1 act by selective XOR).
    pub fn apply_point(&self, p: &ProjPoint) -> ProjPoint {
        let n = self.dim as usize;
        assert_eq!(p.coords().len(), n);
        let field = p.field();
        let mut out = vec![field.zero(); n];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, &c) in p.coords().iter().enumerate() {
                if self.at(i, j) == 1 {
                    *o = *o + c;
                }
            }
        }
        ProjPoint::new(p.space(), &out).expect("invertible matrix preserves nonzero")
    }

    /// The matrix as a tuple of linear forms over the given field.
    pub fn as_rat_map(&self, space: Space, field: Field) -> RatMap {
        let n = self.dim as usize;
        assert_eq!(space.coord_len(), n);
        let comps: Vec<MPoly> = (0..n)
            .map(|i| {
                let mut acc = MPoly::zero(field, n);
                for j in 0..n {
                    if self.at(i, j) == 1 {
                        acc = acc.add(&MPoly::var(field, n, j)).unwrap();
                    }
                }
                acc
            })
            .collect();
        RatMap::new(space, space, comps)
    }
}

/// Breadth-first product closure of a generating set, in deterministic
/// discovery order from the sorted generators.
pub fn closure(generators: &[GF2Mat]) -> Vec<GF2Mat> {
    assert!(!generators.is_empty());
    let dim = generators[0].dim;
    assert!(generators.iter().all(|g| g.dim == dim));
    let mut gens: Vec<GF2Mat> = generators.to_vec();
    gens.sort();
    gens.dedup();
    let mut seen: std::collections::HashSet<GF2Mat> = gens.iter().copied().collect();
    let mut out: Vec<GF2Mat> = gens.clone();
    let mut frontier = gens.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &gens {
                for prod in [m.mul(g), g.mul(m)] {
                    if seen.insert(prod) {
                        out.push(prod);
                        next.push(prod);
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

/// All 168 elements of PGL_3(F_2), by scanning the 512 bit patterns.
pub fn pgl3_f2() -> Vec<GF2Mat> {
    (0u16..512)
        .map(|bits| GF2Mat::from_bits(3, bits))
        .filter(GF2Mat::is_invertible)
        .collect()
}

/// The two standard generators of PGL_3(F_2): a transvection and the
/// coordinate 3-cycle.
pub fn pgl3_two_generators() -> [GF2Mat; 2] {
    [
        GF2Mat::new(3, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
        GF2Mat::new(3, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]),
    ]
}

/// Transform an upper-triangular quadratic-form table by Q(Mx).
fn form_apply(m: &GF2Mat, coeffs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let n = m.dim as usize;
    let mut table = vec![0u8; n * n];
    for &(i, j) in coeffs {
        // expand (row_i(M) . x)(row_j(M) . x) into the triangular table
        for k in 0..n {
            for l in 0..n {
                if m.at(i, k) & m.at(j, l) == 1 {
                    let (a, b) = if k <= l { (k, l) } else { (l, k) };
                    table[a * n + b] ^= 1;
                }
            }
        }
    }
    let mut out = Vec::new();
    for a in 0..n {
        for b in a..n {
            if table[a * n + b] == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// The quadric form x0 x3 + x1^2 + x1 x2 + x2^2 as a coefficient table.
fn quadric_coeffs() -> Vec<(usize, usize)> {
    vec![(0, 3), (1, 1), (1, 2), (2, 2)]
}

/// All elements of Aut_{F2}(Q): the invertible 4x4 matrices over GF(2)
/// preserving the quadric form exactly (over F_2 there are no scalars, so
/// form equality captures the variety stabilizer).
pub fn aut_q() -> Vec<GF2Mat> {
    let target = quadric_coeffs();
    (0u32..(1 << 16))
        .map(|bits| GF2Mat::from_bits(4, bits as u16))
        .filter(|m| m.is_invertible() && form_apply(m, &target) == target)
        .collect()
}

/// An element of a surface automorphism set.
#[derive(Clone)]
pub enum SurfaceAuto {
    Linear(GF2Mat),
    Rational(RatMap),
}

/// The automorphism group of one surface model as an explicit list.
pub struct SurfaceAutoSet {
    pub surface: &'static str,
    pub elements: Vec<SurfaceAuto>,
}

impl SurfaceAutoSet {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// The five iterates of h : `[x:y:z] -> [xy : y(x+z) : x(y+z)]`, the model
/// form of the automorphisms of the degree-5 surface.
pub fn aut_d5_model() -> SurfaceAutoSet {
    let h = crate::rmap::builtin("d5_h").unwrap();
    let mut elements = vec![SurfaceAuto::Rational(RatMap::identity(Space::P2, h.field()))];
    let mut cur = h.clone();
    for _ in 0..4 {
        elements.push(SurfaceAuto::Rational(cur.clone()));
        cur = RatMap::compose(&h, &cur).unwrap();
    }
    SurfaceAutoSet { surface: "D5", elements }
}

/// The 18 automorphisms of the degree-6 model on P^2: toric scalings by
/// cube roots of unity composed with coordinate rotations and optionally
/// the standard quadratic involution.
pub fn aut_d6_model() -> SurfaceAutoSet {
    let f64f = crate::ff::registry().field("F64");
    let omega = f64f
        .embed_with_min_poly(crate::ff::registry().field("F4").modulus())
        .unwrap();
    let p3 = |s: &str| crate::poly::p3(f64f, s);
    let iota = RatMap::new(Space::P2, Space::P2, vec![p3("y*z"), p3("x*z"), p3("x*y")]);
    let rot = RatMap::new(Space::P2, Space::P2, vec![p3("y"), p3("z"), p3("x")]);
    let mut elements = Vec::with_capacity(18);
    for apow in 0..3u64 {
        let a = omega.pow(apow);
        let toric = RatMap::new(
            Space::P2,
            Space::P2,
            vec![
                MPoly::var(f64f, 3, 0),
                MPoly::var(f64f, 3, 1).scale(a),
                MPoly::var(f64f, 3, 2).scale(a * a),
            ],
        );
        for j in 0..3 {
            for i in 0..2 {
                let mut m = RatMap::identity(Space::P2, f64f);
                for _ in 0..i {
                    m = RatMap::compose(&m, &iota).unwrap();
                }
                for _ in 0..j {
                    m = RatMap::compose(&rot, &m).unwrap();
                }
                m = RatMap::compose(&toric, &m).unwrap();
                elements.push(SurfaceAuto::Rational(m));
            }
        }
    }
    SurfaceAutoSet { surface: "D6", elements }
}

/// Pairwise-distinct check via rational-map equality.
pub fn rational_elements_distinct(set: &SurfaceAutoSet) -> bool {
    let maps: Vec<&RatMap> = set
        .elements
        .iter()
        .map(|e| match e {
            SurfaceAuto::Rational(m) => m,
            SurfaceAuto::Linear(_) => panic!("expected rational elements"),
        })
        .collect();
    for i in 0..maps.len() {
        for j in (i + 1)..maps.len() {
            if maps_equal_rational(maps[i], maps[j]) {
                return false;
            }
        }
    }
    true
}

/// Evaluate a point under an automorphism-set element lifted to the
/// point's field.
pub fn apply_surface_auto(auto: &SurfaceAuto, p: &ProjPoint) -> ProjPoint {
    match auto {
        SurfaceAuto::Linear(m) => m.apply_point(p),
        SurfaceAuto::Rational(m) => {
            let lifted = if m.field() == p.field() { m.clone() } else { m.lift_to(p.field()) };
            lifted.eval(p).expect("automorphism defined at classification points")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldElem;
    use crate::frob::FrobModel;

    #[test]
    fn pgl3_enumeration() {
        let g = pgl3_f2();
        assert_eq!(g.len(), 168);
        assert!(g.contains(&GF2Mat::identity(3)));
    }

    #[test]
    fn two_generators_close_to_full_group() {
        let c = closure(&pgl3_two_generators());
        assert_eq!(c.len(), 168);
    }

    #[test]
    fn involution_closure_is_full_group() {
        let invs: Vec<GF2Mat> = pgl3_f2().into_iter().filter(GF2Mat::is_involution).collect();
        assert_eq!(closure(&invs).len(), 168);
    }

    #[test]
    fn pgl2_generated_by_two_involutions() {
        let a = GF2Mat::new(2, &[&[0, 1], &[1, 0]]);
        let b = GF2Mat::new(2, &[&[1, 1], &[0, 1]]);
        assert!(a.is_involution() && b.is_involution());
        assert_eq!(closure(&[a, b]).len(), 6);
        assert_eq!(closure(&[GF2Mat::identity(3)]).len(), 1);
    }

    #[test]
    fn aut_q_has_120_elements() {
        let g = aut_q();
        assert_eq!(g.len(), 120);
        assert!(g.contains(&GF2Mat::identity(4)));
        // closed under product and inverse
        let set: std::collections::HashSet<GF2Mat> = g.iter().copied().collect();
        for m in g.iter().take(20) {
            assert!(set.contains(&m.inverse().unwrap()));
            for n in g.iter().take(20) {
                assert!(set.contains(&m.mul(n)));
            }
        }
    }

    #[test]
    fn aut_q_preserves_f4_points_of_quadric() {
        // forced by form preservation; checked directly on Q(F4)
        let f4 = crate::ff::registry().field("F4");
        let form = crate::rmap::quadric_form(f4);
        let mut points = Vec::new();
        for bits in 0..(4u64.pow(4)) {
            let c: Vec<FieldElem> = (0..4).map(|i| f4.elem((bits >> (2 * i)) & 3)).collect();
            if c.iter().all(|v| v.is_zero()) {
                continue;
            }
            let p = ProjPoint::new(Space::P3, &c).unwrap();
            if form.eval(p.coords()).unwrap().is_zero() && !points.contains(&p) {
                points.push(p);
            }
        }
        let g = aut_q();
        for m in g.iter().take(25) {
            for p in &points {
                let q = m.apply_point(p);
                assert!(form.eval(q.coords()).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn d5_model_group() {
        let set = aut_d5_model();
        assert_eq!(set.order(), 5);
        assert!(rational_elements_distinct(&set));
        let h = crate::rmap::builtin("d5_h").unwrap();
        // h^5 = id as rational maps
        let mut h5 = h.clone();
        for _ in 0..4 {
            h5 = RatMap::compose(&h, &h5).unwrap();
        }
        assert!(maps_equal_rational(&h5, &RatMap::identity(Space::P2, h.field())));
        // h([1:1:1]) = [1:0:0]
        let f2 = h.field();
        let one = f2.one();
        let img = h.eval(&ProjPoint::p2(&[one, one, one]).unwrap()).unwrap();
        assert_eq!(img, ProjPoint::p2(&[one, f2.zero(), f2.zero()]).unwrap());
        // every iterate commutes with the twisted Frobenius
        for e in &set.elements {
            let SurfaceAuto::Rational(m) = e else { unreachable!() };
            assert!(crate::rmap::commutes_with_frob(m, FrobModel::D5Twist));
        }
    }

    #[test]
    fn d6_model_group() {
        let set = aut_d6_model();
        assert_eq!(set.order(), 18);
        assert!(rational_elements_distinct(&set));
        // the trivial parameters give the identity
        let SurfaceAuto::Rational(first) = &set.elements[0] else { unreachable!() };
        assert!(maps_equal_rational(first, &RatMap::identity(Space::P2, first.field())));
        for e in &set.elements {
            let SurfaceAuto::Rational(m) = e else { unreachable!() };
            assert!(crate::rmap::commutes_with_frob(m, FrobModel::D6Twist));
        }
    }

    #[test]
    fn d6_group_closed_under_composition() {
        let set = aut_d6_model();
        let maps: Vec<&RatMap> = set
            .elements
            .iter()
            .map(|e| match e {
                SurfaceAuto::Rational(m) => m,
                _ => unreachable!(),
            })
            .collect();
        // spot-check closure: products of sample elements stay in the set
        for i in [1usize, 5, 9, 17] {
            for j in [0usize, 2, 11] {
                let prod = RatMap::compose(maps[i], maps[j]).unwrap();
                assert!(
                    maps.iter().any(|m| maps_equal_rational(m, &prod)),
                    "product {i},{j} stays in the group"
                );
            }
        }
    }
}
