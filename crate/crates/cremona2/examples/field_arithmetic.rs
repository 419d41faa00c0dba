//! Binary field towers: the modulus registry, minimal polynomials,
//! subfield embeddings and roots of unity.
//!
//! Run with: cargo run --release --example field_arithmetic

use cremona2::ff::{registry, Poly2};

fn main() {
    println!("=== GF(2^n) arithmetic ===\n");

    // the registry ships twelve fixed irreducible moduli
    for key in cremona2::ff::REGISTRY_KEYS {
        let f = f_key(key);
        println!("{key:>6}: GF(2^{:<2}) modulus {}", f.degree(), f.modulus());
    }
    println!();

    // basic arithmetic in F4: the class of x satisfies x^2 = x + 1
    let f4 = f_key("F4");
    let w = f4.gen_x();
    println!("in F4: w * w       = {}", w * w);
    println!("in F4: w + w       = {}", w + w);
    println!("in F4: w * (w + 1) = {}", w * (w + f4.one()));
    println!();

    // minimal polynomials locate subfields: a^17 in F256 generates F16
    let f256 = f_key("F256");
    let a = f256.gen_x();
    println!("in F256: minpoly(a^17) = {}", a.pow(17).minimal_polynomial());
    println!("in F256: ord(a^17)     = {}", a.pow(17).order());

    // embeddings go the other way: find the smallest generator power in
    // F64 whose minimal polynomial is x^2 + x + 1 (the copy of F4)
    let f64f = f_key("F64");
    let xi = f64f.embed_with_min_poly(Poly2::from_coeffs(&[1, 1, 1])).unwrap();
    println!("in F64: the embedded F4 generator is a^{}", f64f.dlog(xi).unwrap());
    println!();

    // roots of unity drive the degree-6 model pipelines
    let f30 = f_key("F2_30");
    let mu993 = f30.roots_of_unity(993).unwrap();
    println!("in F_2^30: |mu_993| = {} (31*32+1 = 993 divides 2^30-1)", mu993.len());
    for u in mu993.iter().take(4) {
        println!("    {u}  with u^993 = {}", u.pow(993));
    }
}

fn f_key(key: &str) -> cremona2::ff::Field {
    registry().field(key)
}
