//! Exact computation for the plane Cremona group over GF(2).
//!
//! The library classifies, from first principles, the Galois orbits in
//! del Pezzo-general position on the four minimal rational del Pezzo
//! surfaces over GF(2) (the projective plane, the quadric in P^3 and the
//! degree-5 and degree-6 surfaces), and verifies the explicit birational
//! maps that generate the plane Cremona group over the field with two
//! elements: the three infinite families of fibration-preserving
//! involutions and the 111 sporadic generators.
//!
//! Everything is exact: field arithmetic is carry-less polynomial
//! arithmetic modulo a fixed irreducible, linear algebra is fraction-free
//! Gaussian elimination, and rational-map identities are decided by
//! cross-product polynomial identities, never by floating point and never
//! by multivariate GCD.
//!
//! Entry points:
//! * [`ff`] — binary field towers GF(2^n), n <= 30, and the modulus registry;
//! * [`poly`] — sparse multivariate polynomials over those fields;
//! * [`geom`] — projective points and the kernel-dimension general-position test;
//! * [`frob`] — the standard and twisted Frobenius actions with orbit search;
//! * [`aut`] — the automorphism groups of the four surface models;
//! * [`rmap`] — rational maps, explicit generators and verification predicates;
//! * [`classify`] — the orbit classification pipelines and published tables;
//! * [`cli`] — reproducible runs, JSON artifacts and certificates.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `cremona2` binary for the `classify`, `verify` and
//! `emit-generators` commands.

pub mod aut;
pub mod classify;
pub mod cli;
pub mod ff;
pub mod frob;
pub mod geom;
pub mod poly;
pub mod rmap;
