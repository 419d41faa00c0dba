//! The two infinite families of conic-pencil involutions
//! [x : lambda x + y : mu x + z], parametrized by a rational function a
//! over GF(2): the defining conic conditions hold as bivariate
//! identities, and every member is an involution preserving its pencil.
//!
//! Run with: cargo run --release --example infinite_families

use cremona2::ff::Poly2;
use cremona2::rmap::{
    excluded_point_on_conic, family_is_involution, family_member, preserves_fibration,
    verify_conic_identity, FamilyTag, Fibration, RationalFunction1V,
};

fn main() {
    println!("=== The infinite families of pencil-preserving involutions ===\n");

    for tag in [FamilyTag::L2star, FamilyTag::L4star] {
        println!(
            "{tag:?}: conic identity {}, excluded point on the conic {}",
            verify_conic_identity(tag),
            excluded_point_on_conic(tag)
        );
    }
    println!();

    // the worked example a = t of the pi4 family
    let m = family_member(FamilyTag::L4star, RationalFunction1V::t());
    let (lambda, mu) = FamilyTag::L4star.lambda_mu(RationalFunction1V::t());
    println!("pi4 family at a = t:");
    println!("    lambda = ({})/({})", lambda.num.to_string_in('t'), lambda.den.to_string_in('t'));
    println!("    mu     = ({})/({})", mu.num.to_string_in('t'), mu.den.to_string_in('t'));
    println!("    map degree {}", m.map.degree());
    println!();

    // every polynomial parameter of degree <= 3
    for tag in [FamilyTag::L2star, FamilyTag::L4star] {
        let pi = Fibration::new(tag.fibration_tag(), cremona2::ff::registry().f2());
        let mut inv = 0;
        let mut fib = 0;
        for bits in 0u64..16 {
            let member = family_member(tag, RationalFunction1V::from_poly(Poly2(bits)));
            if family_is_involution(&member) {
                inv += 1;
            }
            if preserves_fibration(&member.map, &pi) {
                fib += 1;
            }
        }
        println!("{tag:?}: all 16 degree-<=3 polynomial parameters: {inv}/16 involutions, {fib}/16 preserve the pencil");
    }
}
