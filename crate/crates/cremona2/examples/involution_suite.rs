//! The explicit sporadic generators checked as exact polynomial
//! identities: the two plane quintics, the three degree-6 model maps and
//! their commutation with the twisted Frobenius, and the degree-3 links.
//!
//! Run with: cargo run --release --example involution_suite

use cremona2::frob::FrobModel;
use cremona2::rmap::{builtin, commutes_with_frob, is_involution, RatMap};

fn main() {
    println!("=== Involutions, as exact polynomial identities ===\n");

    for name in ["quintic_inv_1", "quintic_inv_2"] {
        let f = builtin(name).unwrap();
        let ff = RatMap::compose(&f, &f).unwrap();
        println!(
            "{name}: degree {} map, self-composition degree {}, involution {}",
            f.degree(),
            ff.degree(),
            is_involution(&f)
        );
    }
    println!();

    for name in ["d6_inv_size2", "d6_inv_size3_1", "d6_inv_size3_2"] {
        let f = builtin(name).unwrap();
        println!(
            "{name}: involution {}, commutes with the degree-6 twist {}",
            is_involution(&f),
            commutes_with_frob(&f, FrobModel::D6Twist)
        );
    }
    println!();

    for name in [
        "oneLink_p100",
        "oneLink_p010",
        "oneLink_p001",
        "oneLink_p110",
        "oneLink_p101",
        "oneLink22_p100",
        "oneLink22_p101",
    ] {
        let f = builtin(name).unwrap();
        println!("{name}: degree {} involution {}", f.degree(), is_involution(&f));
    }
}
