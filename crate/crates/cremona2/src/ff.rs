//! Arithmetic in binary extension fields GF(2^n) for n <= 30.
//!
//! Elements are bit vectors in the polynomial basis of a fixed irreducible
//! modulus. Multiplication is carry-less shift-xor followed by reduction.
//! Fields are interned, so `FieldElem` is `Copy` and two elements can be
//! compared for ownership by pointer identity of their context.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::Deserialize;
use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 30;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus degree {0} outside 1..=30")]
    DegreeOutOfRange(u32),
    #[error("modulus is reducible: divisible by {0}")]
    ReducibleModulus(Poly2),
    #[error("elements belong to different fields")]
    MixedFields,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{0} does not divide the group order {1}")]
    NotADivisor(u64, u64),
    #[error("no element with the requested minimal polynomial")]
    NoSuchElement,
    #[error("unknown field key {0:?} in modulus registry")]
    UnknownFieldKey(String),
    #[error("malformed modulus registry: {0}")]
    BadRegistry(String),
}

/// A univariate polynomial over GF(2), bit i = coefficient of x^i.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly2(pub u64);

impl Poly2 {
    pub const ZERO: Poly2 = Poly2(0);
    pub const ONE: Poly2 = Poly2(1);
    pub const X: Poly2 = Poly2(2);

    /// Build from a coefficient sequence, lowest degree first.
    pub fn from_coeffs(coeffs: &[u8]) -> Poly2 {
        let mut bits = 0u64;
        for (i, &c) in coeffs.iter().enumerate() {
            if c & 1 == 1 {
                bits |= 1 << i;
            }
        }
        Poly2(bits)
    }

    pub fn coeffs(&self) -> Vec<u8> {
        let d = self.degree().unwrap_or(0);
        (0..=d).map(|i| ((self.0 >> i) & 1) as u8).collect()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(63 - self.0.leading_zeros())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }

    /// Carry-less product.
    pub fn mul(self, other: Poly2) -> Poly2 {
        let mut acc = 0u64;
        let mut a = self.0;
        let mut shift = 0;
        while a != 0 {
            if a & 1 == 1 {
                acc ^= other.0 << shift;
            }
            a >>= 1;
            shift += 1;
        }
        Poly2(acc)
    }

    /// Remainder of self divided by `m` (m != 0).
    pub fn rem(self, m: Poly2) -> Poly2 {
        let md = m.degree().expect("division by zero polynomial");
        let mut r = self.0;
        while let Some(rd) = Poly2(r).degree() {
            if rd < md {
                break;
            }
            r ^= m.0 << (rd - md);
        }
        Poly2(r)
    }

    /// Irreducibility over GF(2) by trial division against every
    /// polynomial of degree between 1 and deg/2.
    pub fn is_irreducible(&self) -> bool {
        let d = match self.degree() {
            None | Some(0) => return false,
            Some(d) => d,
        };
        if d == 1 {
            return true;
        }
        for deg in 1..=(d / 2) {
            // monic divisors of the given degree
            for low in 0..(1u64 << deg) {
                let g = Poly2(low | (1 << deg));
                if self.rem(g).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in('x'))
    }
}

impl Poly2 {
    /// Render with a chosen variable name (moduli read naturally in x,
    /// rational-function data in t).
    pub fn to_string_in(&self, var: char) -> String {
        if self.0 == 0 {
            return "0".to_string();
        }
        let mut out = String::new();
        for i in (0..=self.degree().unwrap()).rev() {
            if (self.0 >> i) & 1 == 1 {
                if !out.is_empty() {
                    out.push('+');
                }
                match i {
                    0 => out.push('1'),
                    1 => out.push(var),
                    _ => out.push_str(&format!("{var}^{i}")),
                }
            }
        }
        out
    }
}

/// The context of one binary extension field: degree, modulus and the
/// lazily computed multiplicative generator plus discrete-log table.
pub struct FieldCtx {
    n: u32,
    modulus: u64,
    order: u64,
    prime_factors: Vec<u64>,
    generator: OnceLock<u64>,
    dlog: OnceLock<DlogTable>,
}

struct DlogTable {
    baby: HashMap<u64, u64>,
    stride: u64,
    giant_step: u64, // generator^{-stride}
}

/// Interned handle to a `FieldCtx`. Copyable; equality is identity.
#[derive(Copy, Clone)]
pub struct Field(&'static FieldCtx);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0, other.0)
    }
}
impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})/({})", self.0.n, Poly2(self.0.modulus))
    }
}

fn intern_table() -> &'static Mutex<HashMap<u64, &'static FieldCtx>> {
    static TABLE: OnceLock<Mutex<HashMap<u64, &'static FieldCtx>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn factorize(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Construct (or fetch the interned copy of) GF(2^n) with the given
/// modulus, coefficients listed lowest degree first. Fails if the modulus
/// is reducible or the degree is out of range.
pub fn create_field(modulus_coeffs: &[u8]) -> Result<Field, FieldError> {
    let m = Poly2::from_coeffs(modulus_coeffs);
    let n = match m.degree() {
        None | Some(0) => return Err(FieldError::DegreeOutOfRange(0)),
        Some(d) => d,
    };
    if n > MAX_DEGREE {
        return Err(FieldError::DegreeOutOfRange(n));
    }
    if let Some(ctx) = intern_table().lock().unwrap().get(&m.0) {
        return Ok(Field(ctx));
    }
    // trial division finds the smallest factor, reported in the error
    if !m.is_irreducible() {
        for deg in 1..=(n / 2) {
            for low in 0..(1u64 << deg) {
                let g = Poly2(low | (1 << deg));
                if m.rem(g).is_zero() {
                    return Err(FieldError::ReducibleModulus(g));
                }
            }
        }
        unreachable!("reducible modulus without a factor");
    }
    let order = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let ctx = Box::leak(Box::new(FieldCtx {
        n,
        modulus: m.0,
        order,
        prime_factors: factorize(order),
        generator: OnceLock::new(),
        dlog: OnceLock::new(),
    }));
    intern_table().lock().unwrap().insert(m.0, ctx);
    Ok(Field(ctx))
}

/// An element of a binary extension field, fully reduced.
#[derive(Copy, Clone)]
pub struct FieldElem {
    field: Field,
    bits: u64,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.bits == other.bits
    }
}
impl Eq for FieldElem {}

impl std::hash::Hash for FieldElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.bits.hash(state);
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Field {
    pub fn degree(&self) -> u32 {
        self.0.n
    }

    pub fn modulus(&self) -> Poly2 {
        Poly2(self.0.modulus)
    }

    /// Multiplicative group order 2^n - 1.
    pub fn group_order(&self) -> u64 {
        self.0.order
    }

    /// Number of field elements 2^n.
    pub fn size(&self) -> u64 {
        1u64 << self.0.n
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { field: *self, bits: 0 }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { field: *self, bits: 1 }
    }

    /// The class of x modulo the defining polynomial.
    pub fn gen_x(&self) -> FieldElem {
        if self.0.n == 1 {
            // x reduces to a constant in a degree-1 field
            FieldElem { field: *self, bits: Poly2(2).rem(self.modulus()).0 }
        } else {
            FieldElem { field: *self, bits: 2 }
        }
    }

    /// Element from its bit pattern (must have fewer than n bits).
    pub fn elem(&self, bits: u64) -> FieldElem {
        assert!(bits < (1u64 << self.0.n), "bit pattern out of range");
        FieldElem { field: *self, bits }
    }

    /// All field elements in ascending bit-pattern order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let f = *self;
        (0..self.size()).map(move |b| FieldElem { field: f, bits: b })
    }

    /// All nonzero elements in ascending bit-pattern order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let f = *self;
        (1..self.size()).map(move |b| FieldElem { field: f, bits: b })
    }

    fn reduce(&self, mut acc: u64) -> u64 {
        let n = self.0.n;
        let m = self.0.modulus;
        let mut d = 63 - acc.leading_zeros().min(63);
        while acc != 0 && d >= n {
            acc ^= m << (d - n);
            if acc == 0 {
                break;
            }
            d = 63 - acc.leading_zeros();
        }
        acc
    }

    pub fn add(&self, u: FieldElem, v: FieldElem) -> Result<FieldElem, FieldError> {
        if u.field != *self || v.field != *self {
            return Err(FieldError::MixedFields);
        }
        Ok(FieldElem { field: *self, bits: u.bits ^ v.bits })
    }

    pub fn mul(&self, u: FieldElem, v: FieldElem) -> Result<FieldElem, FieldError> {
        if u.field != *self || v.field != *self {
            return Err(FieldError::MixedFields);
        }
        let prod = Poly2(u.bits).mul(Poly2(v.bits)).0;
        Ok(FieldElem { field: *self, bits: self.reduce(prod) })
    }

    /// Smallest element (by bit pattern) of multiplicative order 2^n - 1.
    pub fn generator(&self) -> FieldElem {
        let bits = *self.0.generator.get_or_init(|| {
            'search: for b in 1..self.size() {
                let u = FieldElem { field: *self, bits: b };
                for &p in &self.0.prime_factors {
                    if u.pow(self.0.order / p).bits == 1 {
                        continue 'search;
                    }
                }
                return b;
            }
            unreachable!("every finite field has a primitive element")
        });
        FieldElem { field: *self, bits }
    }

    /// Discrete log with respect to `generator()`, by baby-step/giant-step.
    pub fn dlog(&self, u: FieldElem) -> Option<u64> {
        assert_eq!(u.field, *self);
        if u.bits == 0 {
            return None;
        }
        let table = self.0.dlog.get_or_init(|| {
            let g = self.generator();
            let stride = (self.0.order as f64).sqrt().ceil() as u64;
            let mut baby = HashMap::with_capacity(stride as usize);
            let mut acc = self.one();
            for e in 0..stride {
                baby.entry(acc.bits).or_insert(e);
                acc = acc * g;
            }
            let giant_step = g.pow(stride).inverse().unwrap().bits;
            DlogTable { baby, stride, giant_step }
        });
        let mut cur = u;
        let gs = FieldElem { field: *self, bits: table.giant_step };
        for k in 0..=(self.0.order / table.stride) {
            if let Some(&e) = table.baby.get(&cur.bits) {
                return Some((k * table.stride + e) % self.0.order);
            }
            cur = cur * gs;
        }
        None
    }

    /// All m-th roots of unity, sorted by bit pattern. `m` must divide 2^n - 1.
    pub fn roots_of_unity(&self, m: u64) -> Result<Vec<FieldElem>, FieldError> {
        if m == 0 || self.0.order % m != 0 {
            return Err(FieldError::NotADivisor(m, self.0.order));
        }
        let g = self.generator();
        let step = g.pow(self.0.order / m);
        let mut out = Vec::with_capacity(m as usize);
        let mut acc = self.one();
        for _ in 0..m {
            out.push(acc);
            acc = acc * step;
        }
        out.sort_by_key(|u| u.bits);
        out.dedup();
        debug_assert_eq!(out.len() as u64, m);
        Ok(out)
    }

    /// The power of the generator with smallest exponent whose minimal
    /// polynomial equals `target`. `target` must be irreducible with degree
    /// dividing n.
    pub fn embed_with_min_poly(&self, target: Poly2) -> Result<FieldElem, FieldError> {
        let d = target.degree().ok_or(FieldError::NoSuchElement)?;
        if d == 0 || self.0.n % d != 0 || !target.is_irreducible() {
            return Err(FieldError::NoSuchElement);
        }
        // candidates live in the subfield of size 2^d, i.e. the subgroup of
        // order 2^d - 1 together with zero
        if target == Poly2::X {
            return Ok(self.zero());
        }
        let sub_order = (1u64 << d) - 1;
        let r = self.0.order / sub_order;
        let g = self.generator();
        let step = g.pow(r);
        let mut acc = self.one();
        for k in 0..sub_order {
            if k > 0 {
                acc = acc * step;
            }
            if acc.minimal_polynomial() == target {
                return Ok(acc);
            }
        }
        Err(FieldError::NoSuchElement)
    }

    /// Transport an element of a subfield into this field: `u` is rewritten
    /// as a polynomial in its field's `gen_x()` and evaluated at the image
    /// of that generator, found by `embed_with_min_poly`.
    pub fn embed_subfield(&self, u: FieldElem) -> Result<FieldElem, FieldError> {
        if u.field == *self {
            return Ok(u);
        }
        let root = self.embed_with_min_poly(u.field.modulus())?;
        let mut acc = self.zero();
        let mut pw = self.one();
        for i in 0..u.field.degree() {
            if (u.bits >> i) & 1 == 1 {
                acc = acc + pw;
            }
            pw = pw * root;
        }
        Ok(acc)
    }
}

impl FieldElem {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_one(&self) -> bool {
        self.bits == 1
    }

    pub fn pow(self, mut e: u64) -> FieldElem {
        let mut base = self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// u^(2^k), the k-fold Frobenius.
    pub fn frobenius(self, k: u32) -> FieldElem {
        let mut acc = self;
        for _ in 0..(k % self.field.0.n.max(1)) {
            acc = acc * acc;
        }
        acc
    }

    /// Multiplicative inverse, computed as u^(2^n - 2).
    pub fn inverse(self) -> Result<FieldElem, FieldError> {
        if self.bits == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(self.field.0.order - 1))
    }

    /// Multiplicative order.
    pub fn order(self) -> u64 {
        assert!(self.bits != 0);
        let mut ord = self.field.0.order;
        for &p in &self.field.0.prime_factors {
            while ord % p == 0 && self.pow(ord / p).is_one() {
                ord /= p;
            }
        }
        ord
    }

    /// The product of (X - conjugate) over the distinct Frobenius
    /// conjugates, expanded over GF(2).
    pub fn minimal_polynomial(self) -> Poly2 {
        let mut conj = vec![self];
        let mut c = self.frobenius(1);
        while c != self {
            conj.push(c);
            c = c.frobenius(1);
        }
        // multiply out (X + c_i); coefficients tracked in the big field
        let f = self.field;
        let mut coeffs = vec![f.one()];
        for c in &conj {
            let mut next = vec![f.zero(); coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1] + a;
                next[i] = next[i] + a * *c;
            }
            coeffs = next;
        }
        let mut bits = 0u64;
        for (i, a) in coeffs.iter().enumerate() {
            debug_assert!(a.is_zero() || a.is_one(), "minimal polynomial not over GF(2)");
            if a.is_one() {
                bits |= 1 << i;
            }
        }
        Poly2(bits)
    }
}

impl std::ops::Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        self.field.add(self, rhs).expect("mixed fields in +")
    }
}

impl std::ops::Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: FieldElem) -> FieldElem {
        // characteristic 2
        self + rhs
    }
}

impl std::ops::Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: FieldElem) -> FieldElem {
        self.field.mul(self, rhs).expect("mixed fields in *")
    }
}

impl fmt::Display for FieldElem {
    /// Generator-exponent notation: "0", "1", "a" or "a^k".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            return write!(f, "0");
        }
        if self.bits == 1 {
            return write!(f, "1");
        }
        match self.field.dlog(*self) {
            Some(1) => write!(f, "a"),
            Some(k) => write!(f, "a^{k}"),
            None => unreachable!("nonzero element without discrete log"),
        }
    }
}

/// Parse generator-exponent notation produced by `Display`.
pub fn parse_elem(field: Field, s: &str) -> Result<FieldElem, FieldError> {
    let s = s.trim();
    match s {
        "0" => Ok(field.zero()),
        "1" => Ok(field.one()),
        "a" => Ok(field.generator()),
        _ => {
            let k = s
                .strip_prefix("a^")
                .and_then(|t| t.parse::<u64>().ok())
                .ok_or_else(|| FieldError::BadRegistry(format!("bad element literal {s:?}")))?;
            Ok(field.generator().pow(k))
        }
    }
}

/// The modulus registry embedded from `moduli.json` at the workspace root.
#[derive(Deserialize)]
struct RawRegistry(std::collections::BTreeMap<String, Vec<u8>>);

pub struct Registry {
    fields: HashMap<&'static str, Field>,
}

pub const REGISTRY_KEYS: [&str; 12] = [
    "F4", "F8", "F16", "F32", "F64", "F128", "F256", "F2_12", "F2_14", "F2_15", "F2_20", "F2_30",
];

static MODULI_JSON: &str = include_str!("../../../moduli.json");

impl Registry {
    pub fn field(&self, key: &str) -> Field {
        *self
            .fields
            .get(key)
            .unwrap_or_else(|| panic!("field {key:?} not in registry"))
    }

    /// GF(2) itself (not part of the named registry).
    pub fn f2(&self) -> Field {
        create_field(&[1, 1]).unwrap()
    }
}

/// Parse a registry from JSON text mapping keys to coefficient lists.
pub fn load_registry(json: &str) -> Result<Registry, FieldError> {
    let raw: RawRegistry =
        serde_json::from_str(json).map_err(|e| FieldError::BadRegistry(e.to_string()))?;
    let mut fields = HashMap::new();
    for key in REGISTRY_KEYS {
        let coeffs = raw
            .0
            .get(key)
            .ok_or_else(|| FieldError::UnknownFieldKey(key.to_string()))?;
        fields.insert(key, create_field(coeffs)?);
    }
    Ok(Registry { fields })
}

/// The registry of the twelve fields used throughout the classification.
pub fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| load_registry(MODULI_JSON).expect("embedded moduli.json is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn create_valid_and_reducible() {
        let f4 = create_field(&[1, 1, 1]).unwrap();
        assert_eq!(f4.degree(), 2);
        // x^2 + 1 = (x+1)^2 in characteristic 2
        match create_field(&[1, 0, 1]) {
            Err(FieldError::ReducibleModulus(g)) => assert_eq!(g, Poly2(0b11)),
            other => panic!("expected reducible, got {other:?}"),
        }
        let f30 = registry().field("F2_30");
        assert_eq!(f30.degree(), 30);
    }

    #[test]
    fn f4_multiplication_table() {
        let f4 = registry().field("F4");
        let w = f4.gen_x();
        // x^2 = x + 1 forced by the modulus
        assert_eq!(w * w, w + f4.one());
        assert_eq!(w + w, f4.zero());
        // w * (w+1) = w^2 + w = 1
        assert_eq!(w * (w + f4.one()), f4.one());
    }

    #[test]
    fn f16_modulus_relation() {
        let f16 = registry().field("F16");
        let a = f16.gen_x();
        assert_eq!(a * a.pow(3), a + f16.one()); // a^4 = a + 1
    }

    #[test]
    fn mixed_fields_rejected() {
        let f4 = registry().field("F4");
        let f8 = registry().field("F8");
        assert_eq!(f4.add(f4.one(), f8.one()), Err(FieldError::MixedFields));
        assert_eq!(f4.mul(f4.one(), f8.one()), Err(FieldError::MixedFields));
    }

    #[test]
    fn inverse_f8_brute_force() {
        // independent oracle: scan all 7 nonzero elements for the inverse of a
        let f8 = registry().field("F8");
        let a = f8.gen_x();
        let mut found = None;
        for u in f8.nonzero_elements() {
            if a * u == f8.one() {
                found = Some(u);
            }
        }
        // a^{-1} = a^2 + 1
        assert_eq!(found.unwrap(), a * a + f8.one());
        assert_eq!(a.inverse().unwrap(), a * a + f8.one());
        assert_eq!(f8.zero().inverse(), Err(FieldError::ZeroInverse));
        assert_eq!(f8.one().inverse().unwrap(), f8.one());
    }

    #[test]
    fn inverse_exhaustive_small_fields() {
        for key in ["F4", "F8", "F16"] {
            let f = registry().field(key);
            for u in f.nonzero_elements() {
                assert_eq!(u * u.inverse().unwrap(), f.one());
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        let f4 = registry().field("F4");
        let w = f4.gen_x();
        assert_eq!(w.frobenius(1), w + f4.one());
        let f16 = registry().field("F16");
        let a = f16.gen_x();
        // a^4 = a + 1 under the modulus x^4 + x + 1
        assert_eq!(a.frobenius(2), a + f16.one());
        assert_eq!(a.frobenius(2), a.pow(4));
        for u in f16.elements() {
            assert_eq!(u.frobenius(4), u);
        }
    }

    #[test]
    fn minimal_polynomials_of_subfield_elements() {
        let f256 = registry().field("F256");
        let a = f256.gen_x();
        assert_eq!(a.pow(17).minimal_polynomial(), Poly2::from_coeffs(&[1, 1, 0, 0, 1]));
        let f64 = registry().field("F64");
        let b = f64.gen_x();
        assert_eq!(b.pow(9).minimal_polynomial(), Poly2::from_coeffs(&[1, 1, 0, 1]));
        assert_eq!(b.pow(21).minimal_polynomial(), Poly2::from_coeffs(&[1, 1, 1]));
        // degree divides n, and the polynomial annihilates the element
        for u in f64.nonzero_elements().take(40) {
            let mp = u.minimal_polynomial();
            assert_eq!(6 % mp.degree().unwrap(), 0);
            let mut acc = f64.zero();
            let mut pw = f64.one();
            for i in 0..=mp.degree().unwrap() {
                if (mp.0 >> i) & 1 == 1 {
                    acc = acc + pw;
                }
                pw = pw * u;
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn generator_small_fields() {
        let f2 = registry().f2();
        assert!(f2.generator().is_one());
        let f4 = registry().field("F4");
        assert_eq!(f4.generator(), f4.gen_x());
        let f8 = registry().field("F8");
        assert_eq!(f8.generator(), f8.gen_x());
        // every registry field has the class of x as its generator
        for key in REGISTRY_KEYS {
            let f = registry().field(key);
            assert_eq!(f.generator(), f.gen_x(), "{key}");
            assert_eq!(f.generator().order(), f.group_order(), "{key}");
        }
    }

    #[test]
    fn roots_of_unity_counts() {
        let f2 = registry().f2();
        assert_eq!(f2.roots_of_unity(1).unwrap(), vec![f2.one()]);
        let f64 = registry().field("F64");
        let mu21 = f64.roots_of_unity(21).unwrap();
        assert_eq!(mu21.len(), 21);
        for u in &mu21 {
            assert!(u.pow(21).is_one());
        }
        // completeness: exhaustive scan
        let count = f64.nonzero_elements().filter(|u| u.pow(21).is_one()).count();
        assert_eq!(count, 21);
        assert!(f64.roots_of_unity(5).is_err());
        let f30 = registry().field("F2_30");
        assert_eq!(f30.roots_of_unity(993).unwrap().len(), 993);
    }

    #[test]
    fn embed_examples() {
        let f256 = registry().field("F256");
        let u = f256.embed_with_min_poly(Poly2::from_coeffs(&[1, 1, 0, 0, 1])).unwrap();
        assert_eq!(u.order(), 15);
        assert_eq!(u.minimal_polynomial(), Poly2::from_coeffs(&[1, 1, 0, 0, 1]));
        let f64 = registry().field("F64");
        let v = f64.embed_with_min_poly(Poly2::from_coeffs(&[1, 1, 1])).unwrap();
        assert_eq!(v.order(), 3);
        // the class of x is returned for the defining modulus itself
        assert_eq!(f64.embed_with_min_poly(f64.modulus()).unwrap(), f64.gen_x());
        // xi = a^21 in F64, as used by the quadric model over F4
        assert_eq!(v, f64.gen_x().pow(21));
    }

    #[test]
    fn embed_subfield_is_ring_map() {
        let f16 = registry().field("F16");
        let f256 = registry().field("F256");
        for u in f16.elements() {
            for v in f16.elements().take(8) {
                let eu = f256.embed_subfield(u).unwrap();
                let ev = f256.embed_subfield(v).unwrap();
                assert_eq!(f256.embed_subfield(u + v).unwrap(), eu + ev);
                assert_eq!(f256.embed_subfield(u * v).unwrap(), eu * ev);
            }
        }
    }

    #[test]
    fn dlog_roundtrip_large_field() {
        let f30 = registry().field("F2_30");
        let g = f30.generator();
        for e in [1u64, 2, 993, 1_081_311, 536_870_000, 1_073_741_822] {
            let u = g.pow(e);
            let k = f30.dlog(u).unwrap();
            assert_eq!(g.pow(k), u);
        }
        assert_eq!(f30.dlog(f30.zero()), None);
        assert_eq!(f30.dlog(f30.one()), Some(0));
    }

    #[test]
    fn display_roundtrip() {
        let f64 = registry().field("F64");
        for u in [f64.zero(), f64.one(), f64.gen_x(), f64.gen_x().pow(40)] {
            let s = u.to_string();
            assert_eq!(parse_elem(f64, &s).unwrap(), u);
        }
        assert_eq!(f64.gen_x().pow(40).to_string(), "a^40");
    }
}
