//! The kernel-dimension test for del Pezzo-general position: a curve with
//! prescribed passage and singularity conditions exists iff the
//! evaluation/derivative matrix has positive nullity.
//!
//! Run with: cargo run --release --example general_position

use cremona2::ff::registry;
use cremona2::frob::{orbit, FrobModel};
use cremona2::geom::{
    general_position_p2, kernel_dimension, monomial_basis, position_matrix, DegreeSpec,
    ProjPoint, Space,
};

fn main() {
    println!("=== General position on P^2 ===\n");

    let f16 = registry().field("F16");
    let rho = f16.gen_x();

    // monomial counts N = (d+2)(d+1)/2
    for d in [1u32, 2, 3] {
        println!(
            "degree {d}: {} monomials",
            monomial_basis(Space::P2, DegreeSpec::Total(d)).len()
        );
    }
    println!();

    // three collinear points have a nontrivial degree-1 kernel
    let collinear = [
        ProjPoint::p2(&[f16.one(), f16.zero(), f16.zero()]).unwrap(),
        ProjPoint::p2(&[f16.zero(), f16.one(), f16.zero()]).unwrap(),
        ProjPoint::p2(&[f16.one(), f16.one(), f16.zero()]).unwrap(),
    ];
    let m = position_matrix(&collinear, DegreeSpec::Total(1), &[]).unwrap();
    println!("collinear triple: kernel dimension {}", kernel_dimension(&m));
    let report = general_position_p2(&collinear).unwrap();
    println!("verdict: {:?} witness {:?}\n", report.violated, report.witness);

    // the size-4 orbit of [1:rho:rho^2] is in general position
    let p = ProjPoint::p2(&[f16.one(), rho, rho * rho]).unwrap();
    let orb = orbit(FrobModel::StdP2, &p, 8).unwrap();
    println!("orbit of [1:a:a^2] over F16 (size {}):", orb.size());
    for q in orb.points() {
        println!("    {q}");
    }
    println!("general position: {}\n", general_position_p2(orb.points()).unwrap().ok);

    // eight points need the nodal-cubic condition: the matrix gains three
    // derivative rows per singular point
    let f256 = registry().field("F256");
    let a = f256.gen_x();
    let seed = ProjPoint::p2(&[f256.one(), a, a.pow(17)]).unwrap();
    let orb8 = orbit(FrobModel::StdP2, &seed, 16).unwrap();
    let m8 = position_matrix(orb8.points(), DegreeSpec::Total(3), &[0]).unwrap();
    println!(
        "eight-point orbit, cubic system singular at the first point: {} x {} matrix, nullity {}",
        m8.rows,
        m8.cols,
        kernel_dimension(&m8)
    );
    println!(
        "full del Pezzo predicate for the orbit: {}",
        general_position_p2(orb8.points()).unwrap().ok
    );
}
