//! The four Galois actions: coordinate squaring on the plane and the
//! three twisted actions transported from the quadric and the degree-5
//! and degree-6 surfaces. The same polynomial formulas drive symbolic
//! identities and pointwise orbits.
//!
//! Run with: cargo run --release --example twisted_frobenius

use cremona2::ff::registry;
use cremona2::frob::{orbit, FrobModel, ORBIT_CAP};
use cremona2::geom::{ProjPoint, Space};
use cremona2::rmap::{maps_equal_rational, RatMap};

fn main() {
    println!("=== Twisted Frobenius actions ===\n");

    let f64f = registry().field("F64");
    let a = f64f.gen_x();

    // the degree-6 twist squares to [z^4 : x^4 : y^4] symbolically
    let f2 = registry().f2();
    let d6 = RatMap::new(Space::P2, Space::P2, FrobModel::D6Twist.formulas(f2));
    let square = RatMap::compose(&d6, &d6).unwrap();
    let expected = RatMap::new(
        Space::P2,
        Space::P2,
        ["z^4", "x^4", "y^4"].iter().map(|s| cremona2::poly::p3(f2, s)).collect(),
    );
    println!("D6Twist^2 = [z^4:x^4:y^4]: {}", maps_equal_rational(&square, &expected));

    // the quadric twist squares to the coordinate-wise fourth power
    let f4 = registry().field("F4");
    let qt = RatMap::new(Space::P1xP1, Space::P1xP1, FrobModel::QTwist.formulas(f4));
    let qt2 = RatMap::compose(&qt, &qt).unwrap();
    let fourth = RatMap::new(
        Space::P1xP1,
        Space::P1xP1,
        ["x0^4", "x1^4", "y0^4", "y1^4"]
            .iter()
            .map(|s| cremona2::poly::parse_poly(f4, 4, s).unwrap())
            .collect(),
    );
    println!("QTwist^2 is the fourth power (no factor swap): {}\n", maps_equal_rational(&qt2, &fourth));

    // orbits under the twisted actions
    let p = ProjPoint::p2(&[a.pow(51), a.pow(3), f64f.one()]).unwrap();
    let orb = orbit(FrobModel::D6Twist, &p, ORBIT_CAP).unwrap();
    println!("D6Twist orbit of [a^-12 : a^3 : 1] (size {}):", orb.size());
    for q in orb.points() {
        println!("    {q}");
    }
    println!();

    // a fixed point of the degree-6 twist
    let fix = ProjPoint::p2(&[f64f.one(), f64f.one(), f64f.one()]).unwrap();
    println!(
        "[1:1:1] is fixed by D6Twist: {}",
        FrobModel::D6Twist.apply(&fix).unwrap() == fix
    );

    // candidate families feeding the classification
    println!("\ncandidate counts per family:");
    for d in [2u32, 3, 4, 5] {
        println!("    degree-6 model, d={d}: {}", cremona2::frob::candidates_d6(d).unwrap().len());
    }
    for d in [3u32, 4] {
        let (c, skipped) = cremona2::frob::candidates_d5(d).unwrap();
        println!("    degree-5 model, d={d}: {} (skipped {} spurious)", c.len(), skipped);
    }
}
