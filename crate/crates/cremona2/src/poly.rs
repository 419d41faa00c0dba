//! Sparse multivariate polynomials over a binary extension field.
//!
//! The substrate for curves, linear systems and rational-map composition.
//! Monomials are ordered graded-lexicographically with x > y > z
//! (and x0 > x1 > y0 > y1), which fixes canonical printing and the column
//! order of the position matrices in `geom`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::ff::{Field, FieldElem};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("operands belong to different coefficient fields")]
    MixedContexts,
    #[error("expected {expected} variables/substitutions, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Exponent tuple; unused trailing variables stay zero.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Mono(pub [u16; 4]);

impl Mono {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, other: &Mono) -> Mono {
        let mut e = [0u16; 4];
        for i in 0..4 {
            e[i] = self.0[i] + other.0[i];
        }
        Mono(e)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // ascending grlex; reverse iteration gives the canonical order
        (self.total_degree(), self.0).cmp(&(other.total_degree(), other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub fn var_names(nvars: usize) -> &'static [&'static str] {
    match nvars {
        2 => &["s", "t"],
        3 => &["x", "y", "z"],
        4 => &["x0", "x1", "y0", "y1"],
        _ => panic!("unsupported variable count {nvars}"),
    }
}

/// Grading data reported by [`MPoly::degree_info`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeInfo {
    pub total_degree: u32,
    pub is_homogeneous: bool,
    /// Bidegree for the (x0,x1 | y0,y1) split, when defined.
    pub bidegree: Option<(u32, u32)>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Mono, FieldElem>,
}

impl MPoly {
    pub fn zero(field: Field, nvars: usize) -> MPoly {
        assert!((2..=4).contains(&nvars));
        MPoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, nvars: usize, c: FieldElem) -> MPoly {
        let mut p = MPoly::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(Mono([0; 4]), c);
        }
        p
    }

    pub fn one(field: Field, nvars: usize) -> MPoly {
        MPoly::constant(field, nvars, field.one())
    }

    pub fn var(field: Field, nvars: usize, idx: usize) -> MPoly {
        assert!(idx < nvars);
        let mut e = [0u16; 4];
        e[idx] = 1;
        MPoly::from_terms(field, nvars, vec![(Mono(e), field.one())])
    }

    pub fn monomial(field: Field, nvars: usize, exps: &[u16], coeff: FieldElem) -> MPoly {
        assert_eq!(exps.len(), nvars);
        let mut e = [0u16; 4];
        e[..nvars].copy_from_slice(exps);
        MPoly::from_terms(field, nvars, vec![(Mono(e), coeff)])
    }

    pub fn from_terms(field: Field, nvars: usize, terms: Vec<(Mono, FieldElem)>) -> MPoly {
        let mut p = MPoly::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Mono, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = *e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> FieldElem {
        self.terms.get(m).copied().unwrap_or_else(|| self.field.zero())
    }

    fn check_compat(&self, other: &MPoly) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::MixedContexts);
        }
        if self.nvars != other.nvars {
            return Err(PolyError::ArityMismatch { expected: self.nvars, got: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_compat(other)?;
        // sorted merge, so the map is bulk-built from ordered terms
        let mut merged: Vec<(Mono, FieldElem)> =
            Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ma, _)), Some((mb, _))) => match ma.cmp(mb) {
                    std::cmp::Ordering::Less => {
                        let (m, c) = a.next().unwrap();
                        merged.push((*m, *c));
                    }
                    std::cmp::Ordering::Greater => {
                        let (m, c) = b.next().unwrap();
                        merged.push((*m, *c));
                    }
                    std::cmp::Ordering::Equal => {
                        let (m, ca) = a.next().unwrap();
                        let (_, cb) = b.next().unwrap();
                        let s = *ca + *cb;
                        if !s.is_zero() {
                            merged.push((*m, s));
                        }
                    }
                },
                (Some(_), None) => {
                    let (m, c) = a.next().unwrap();
                    merged.push((*m, *c));
                }
                (None, Some(_)) => {
                    let (m, c) = b.next().unwrap();
                    merged.push((*m, *c));
                }
                (None, None) => break,
            }
        }
        Ok(MPoly { field: self.field, nvars: self.nvars, terms: merged.into_iter().collect() })
    }

    pub fn mul(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_compat(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MPoly::zero(self.field, self.nvars));
        }
        if let Some(fast) = self.try_mul_gf2_dense(other) {
            return Ok(fast);
        }
        let mut out = MPoly::zero(self.field, self.nvars);
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (ms, cs) in &small.terms {
            for (mb, cb) in &big.terms {
                out.add_term(ms.mul(mb), *cs * *cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: FieldElem) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.field, self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = *v * c;
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.field, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self).unwrap();
        }
        acc
    }

    /// Dense bit-packed product for big homogeneous trivariate polynomials
    /// over GF(2); the shape hit by self-composition of high-degree maps.
    fn try_mul_gf2_dense(&self, other: &MPoly) -> Option<MPoly> {
        if self.field.degree() != 1 || self.nvars != 3 {
            return None;
        }
        let da = self.homogeneous_degree()?;
        let db = other.homogeneous_degree()?;
        let d = da + db;
        if d < 16 {
            return None;
        }
        let words = (d as usize + 64) / 64;
        let mut rows = vec![vec![0u64; words]; d as usize + 1];
        let mut dense_b = vec![vec![0u64; words]; db as usize + 1];
        for (m, _) in &other.terms {
            dense_b[m.0[0] as usize][(m.0[1] / 64) as usize] |= 1u64 << (m.0[1] % 64);
        }
        for (m, _) in &self.terms {
            let (i1, j1) = (m.0[0] as usize, m.0[1] as u32);
            let (wshift, bshift) = ((j1 / 64) as usize, j1 % 64);
            for (i2, src) in dense_b.iter().enumerate() {
                let dst = &mut rows[i1 + i2];
                for (w, &s) in src.iter().enumerate() {
                    if s == 0 {
                        continue;
                    }
                    let idx = w + wshift;
                    let lo = s << bshift;
                    let hi = if bshift == 0 { 0 } else { s >> (64 - bshift) };
                    // bits beyond the last word would encode exponents
                    // above the product degree, hence are always zero
                    if idx < words {
                        dst[idx] ^= lo;
                    } else {
                        debug_assert_eq!(lo, 0);
                    }
                    if idx + 1 < words {
                        dst[idx + 1] ^= hi;
                    } else {
                        debug_assert_eq!(hi, 0);
                    }
                }
            }
        }
        let one = self.field.one();
        // the row/bit scan emits monomials in ascending order, so the map
        // is bulk-built from the sorted sequence
        let mut sorted: Vec<(Mono, FieldElem)> = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (w, &bitsw) in row.iter().enumerate() {
                let mut bits = bitsw;
                while bits != 0 {
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    let j = (w as u32) * 64 + b;
                    if i as u32 + j <= d {
                        let k = d - i as u32 - j;
                        sorted.push((Mono([i as u16, j as u16, k as u16, 0]), one));
                    }
                }
            }
        }
        Some(MPoly { field: self.field, nvars: 3, terms: sorted.into_iter().collect() })
    }

    fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.total_degree();
        if it.all(|m| m.total_degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Formal partial derivative; note e.g. d(x^2)/dx = 0 in characteristic 2.
    pub fn partial_derivative(&self, var: usize) -> MPoly {
        assert!(var < self.nvars);
        let mut out = MPoly::zero(self.field, self.nvars);
        for (m, &c) in &self.terms {
            let e = m.0[var];
            if e % 2 == 1 {
                // the coefficient e reduces to e mod 2
                let mut em = m.0;
                em[var] -= 1;
                out.add_term(Mono(em), c);
            }
        }
        out
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        for c in point {
            if c.field() != self.field {
                return Err(PolyError::MixedContexts);
            }
        }
        // per-variable power cache
        let maxdeg: Vec<u16> = (0..self.nvars)
            .map(|v| self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0))
            .collect();
        let mut powers: Vec<Vec<FieldElem>> = Vec::with_capacity(self.nvars);
        for v in 0..self.nvars {
            let mut col = Vec::with_capacity(maxdeg[v] as usize + 1);
            let mut acc = self.field.one();
            for _ in 0..=maxdeg[v] {
                col.push(acc);
                acc = acc * point[v];
            }
            powers.push(col);
        }
        let mut total = self.field.zero();
        for (m, &c) in &self.terms {
            let mut t = c;
            for v in 0..self.nvars {
                t = t * powers[v][m.0[v] as usize];
            }
            total = total + t;
        }
        Ok(total)
    }

    /// Substitute `subs[i]` for variable i, fully expanded (multivariate
    /// Horner over the variables).
    pub fn compose(&self, subs: &[MPoly]) -> Result<MPoly, PolyError> {
        if subs.len() != self.nvars {
            return Err(PolyError::ArityMismatch { expected: self.nvars, got: subs.len() });
        }
        let target = &subs[0];
        for s in subs {
            if s.field != self.field {
                return Err(PolyError::MixedContexts);
            }
            if s.nvars != target.nvars {
                return Err(PolyError::ArityMismatch { expected: target.nvars, got: s.nvars });
            }
        }
        let terms: Vec<(Mono, FieldElem)> = self.terms.iter().map(|(m, c)| (*m, *c)).collect();
        Ok(compose_rec(self.field, &terms, 0, self.nvars, subs))
    }

    pub fn degree_info(&self) -> Result<DegreeInfo, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let total_degree = self.terms.keys().map(|m| m.total_degree()).max().unwrap();
        let is_homogeneous = self.homogeneous_degree().is_some();
        let bidegree = if self.nvars == 4 {
            let mut it = self.terms.keys().map(|m| {
                (m.0[0] as u32 + m.0[1] as u32, m.0[2] as u32 + m.0[3] as u32)
            });
            let first = it.next().unwrap();
            if it.all(|bd| bd == first) {
                Some(first)
            } else {
                None
            }
        } else {
            None
        };
        Ok(DegreeInfo { total_degree, is_homogeneous, bidegree })
    }

    /// Transport into a larger field containing this one.
    pub fn lift_to(&self, field: Field) -> MPoly {
        if field == self.field {
            return self.clone();
        }
        let mut out = MPoly::zero(field, self.nvars);
        for (m, &c) in &self.terms {
            out.add_term(*m, field.embed_subfield(c).expect("coefficient field embeds"));
        }
        out
    }

    /// Square every coefficient (the coefficient Frobenius).
    pub fn coeff_frobenius(&self) -> MPoly {
        let mut out = MPoly::zero(self.field, self.nvars);
        for (m, &c) in &self.terms {
            out.add_term(*m, c * c);
        }
        out
    }
}

/// Dense bit-packed homogeneous trivariate polynomial over GF(2):
/// row i holds the coefficients of x^i y^j z^(deg-i-j) as bits over j.
/// Internal workhorse for high-degree compositions.
pub(crate) struct DenseGf2_3 {
    pub deg: u32,
    rows: Vec<Vec<u64>>,
}

impl DenseGf2_3 {
    pub fn zero(deg: u32) -> DenseGf2_3 {
        let words = (deg as usize + 64) / 64;
        DenseGf2_3 { deg, rows: vec![vec![0u64; words]; deg as usize + 1] }
    }

    /// Requires a homogeneous polynomial over GF(2) in three variables.
    pub fn from_mpoly(p: &MPoly) -> Option<DenseGf2_3> {
        if p.field.degree() != 1 || p.nvars != 3 {
            return None;
        }
        let deg = p.homogeneous_degree()?;
        let mut out = DenseGf2_3::zero(deg);
        for (m, _) in &p.terms {
            out.rows[m.0[0] as usize][(m.0[1] / 64) as usize] |= 1u64 << (m.0[1] % 64);
        }
        Some(out)
    }

    pub fn to_mpoly(&self, field: Field) -> MPoly {
        let one = field.one();
        let mut sorted: Vec<(Mono, FieldElem)> = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for (w, &bitsw) in row.iter().enumerate() {
                let mut bits = bitsw;
                while bits != 0 {
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    let j = (w as u32) * 64 + b;
                    if i as u32 + j <= self.deg {
                        let k = self.deg - i as u32 - j;
                        sorted.push((Mono([i as u16, j as u16, k as u16, 0]), one));
                    }
                }
            }
        }
        MPoly { field, nvars: 3, terms: sorted.into_iter().collect() }
    }

    pub fn xor_assign(&mut self, other: &DenseGf2_3) {
        assert_eq!(self.deg, other.deg);
        for (dst, src) in self.rows.iter_mut().zip(&other.rows) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d ^= s;
            }
        }
    }

    /// Product with a sparse homogeneous multiplier.
    pub fn mul_sparse(&self, sparse: &MPoly) -> DenseGf2_3 {
        let sd = sparse.homogeneous_degree().expect("homogeneous multiplier");
        let d = self.deg + sd;
        let mut out = DenseGf2_3::zero(d);
        let words = (d as usize + 64) / 64;
        for (m, _) in &sparse.terms {
            let (i1, j1) = (m.0[0] as usize, m.0[1] as u32);
            let (wshift, bshift) = ((j1 / 64) as usize, j1 % 64);
            for (i2, src) in self.rows.iter().enumerate() {
                let dst = &mut out.rows[i1 + i2];
                for (w, &s) in src.iter().enumerate() {
                    if s == 0 {
                        continue;
                    }
                    let idx = w + wshift;
                    let lo = s << bshift;
                    let hi = if bshift == 0 { 0 } else { s >> (64 - bshift) };
                    if idx < words {
                        dst[idx] ^= lo;
                    } else {
                        debug_assert_eq!(lo, 0);
                    }
                    if idx + 1 < words {
                        dst[idx + 1] ^= hi;
                    } else {
                        debug_assert_eq!(hi, 0);
                    }
                }
            }
        }
        out
    }
}

fn compose_rec(field: Field, terms: &[(Mono, FieldElem)], var: usize, nvars: usize, subs: &[MPoly]) -> MPoly {
    let out_nvars = subs[0].nvars;
    if terms.is_empty() {
        return MPoly::zero(field, out_nvars);
    }
    if var == nvars {
        // all exponents consumed
        debug_assert!(terms.len() == 1);
        return MPoly::constant(field, out_nvars, terms[0].1);
    }
    // group terms by the exponent of `var`
    let mut groups: BTreeMap<u16, Vec<(Mono, FieldElem)>> = BTreeMap::new();
    for &(m, c) in terms {
        let mut rest = m;
        rest.0[var] = 0;
        groups.entry(m.0[var]).or_default().push((rest, c));
    }
    let f = &subs[var];
    let mut acc = MPoly::zero(field, out_nvars);
    let mut prev: Option<u16> = None;
    for (&e, group) in groups.iter().rev() {
        if let Some(pe) = prev {
            for _ in 0..(pe - e) {
                acc = acc.mul(f).unwrap();
            }
        }
        let g = compose_rec(field, group, var + 1, nvars, subs);
        acc = acc.add(&g).unwrap();
        prev = Some(e);
    }
    if let Some(pe) = prev {
        for _ in 0..pe {
            acc = acc.mul(f).unwrap();
        }
    }
    acc
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = var_names(self.nvars);
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let is_const = m.total_degree() == 0;
            if is_const || !c.is_one() {
                write!(f, "{c}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut needs_star = false;
            for v in 0..self.nvars {
                match m.0[v] {
                    0 => {}
                    1 => {
                        if needs_star {
                            write!(f, "*")?;
                        }
                        write!(f, "{}", names[v])?;
                        needs_star = true;
                    }
                    e => {
                        if needs_star {
                            write!(f, "*")?;
                        }
                        write!(f, "{}^{}", names[v], e)?;
                        needs_star = true;
                    }
                }
            }
            Ok::<(), fmt::Error>(())?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parse the canonical text form produced by `Display`.
pub fn parse_poly(field: Field, nvars: usize, s: &str) -> Result<MPoly, PolyError> {
    let names = var_names(nvars);
    let mut out = MPoly::zero(field, nvars);
    let body = s.trim();
    if body == "0" {
        return Ok(out);
    }
    for term in body.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err(PolyError::Parse(format!("empty term in {s:?}")));
        }
        let mut coeff = field.one();
        let mut exps = [0u16; 4];
        for factor in term.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim()),
                None => (factor, "1"),
            };
            if let Some(v) = names.iter().position(|&n| n == base) {
                let e: u16 = exp
                    .parse()
                    .map_err(|_| PolyError::Parse(format!("bad exponent {exp:?}")))?;
                exps[v] += e;
            } else {
                // a coefficient literal: 0, 1, a, a^k
                let lit = if exp == "1" && !factor.contains('^') {
                    factor.to_string()
                } else {
                    format!("{base}^{exp}")
                };
                let c = crate::ff::parse_elem(field, &lit)
                    .map_err(|e| PolyError::Parse(e.to_string()))?;
                coeff = coeff * c;
            }
        }
        out.add_term(Mono(exps), coeff);
    }
    Ok(out)
}

/// Parse with variables x,y,z over the given field: convenience for fixtures.
pub fn p3(field: Field, s: &str) -> MPoly {
    parse_poly(field, 3, s).expect("valid polynomial literal")
}
