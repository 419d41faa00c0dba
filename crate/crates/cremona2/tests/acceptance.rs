//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with its runtime. Expensive classifications are shared through a
//! once-cell so the criteria stay independent without recomputation.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use cremona2::aut::{aut_d5_model, aut_d6_model, aut_q, closure, pgl3_f2, pgl3_two_generators, GF2Mat, SurfaceAuto};
use cremona2::classify::{
    all_pairs, classify_orbits, counts_match_published, geiser_pair_report,
    irreducible_quintic_count, match_published_representatives, orbits_equivalent,
    published_class_count, published_stage_counts, unique_size5_check, Classification,
    Surface,
};
use cremona2::ff::{registry, FieldElem};
use cremona2::frob::FrobModel;
use cremona2::geom::{general_position_p2, monomial_basis, DegreeSpec, ProjPoint, Space};
use cremona2::poly::MPoly;
use cremona2::rmap::{
    builtin, commutes_with_frob, excluded_point_on_conic, family_is_involution,
    family_member, is_involution, maps_equal_rational, preserves_fibration, quadric_form,
    semi_preserves_fibration, unique_tangent_check, verify_conic_identity, FamilyTag,
    Fibration, FibrationTag, RatMap, RationalFunction1V,
};

struct Shared {
    classifications: Vec<Classification>,
    elapsed: Duration,
}

fn shared() -> &'static Shared {
    static S: OnceLock<Shared> = OnceLock::new();
    S.get_or_init(|| {
        let t0 = Instant::now();
        let classifications = all_pairs()
            .into_iter()
            .map(|(s, d)| classify_orbits(s, d).unwrap())
            .collect();
        Shared { classifications, elapsed: t0.elapsed() }
    })
}

fn report(name: &str, pass: bool, t: Duration) {
    println!(
        "[acceptance] {} criterion {name} ({} ms)",
        if pass { "PASS" } else { "FAIL" },
        t.as_millis()
    );
    assert!(pass, "criterion {name} failed");
}

#[test]
fn criterion_1_orbit_class_counts() {
    let t0 = Instant::now();
    let s = shared();
    let mut pass = s.elapsed < Duration::from_secs(120);
    for c in &s.classifications {
        pass &= c.counts.classes == published_class_count(c.surface, c.d);
    }
    let expected: Vec<(Surface, u32, u64)> = vec![
        (Surface::P2, 3, 1),
        (Surface::P2, 6, 2),
        (Surface::P2, 7, 10),
        (Surface::P2, 8, 38),
        (Surface::Q, 4, 0),
        (Surface::Q, 6, 5),
        (Surface::Q, 7, 18),
        (Surface::D5, 3, 4),
        (Surface::D5, 4, 12),
        (Surface::D6, 2, 1),
        (Surface::D6, 3, 2),
        (Surface::D6, 4, 4),
        (Surface::D6, 5, 11),
    ];
    for (surface, d, n) in expected {
        let c = s
            .classifications
            .iter()
            .find(|c| c.surface == surface && c.d == d)
            .unwrap();
        pass &= c.counts.classes == n;
    }
    report("1 (orbit-class counts)", pass, t0.elapsed());
}

#[test]
fn criterion_2_stage_count_tables() {
    let t0 = Instant::now();
    let s = shared();
    let mut pass = true;
    for c in &s.classifications {
        pass &= counts_match_published(&c.counts, c.surface, c.d);
        // spot-check the published mid-stage tallies verbatim
        let p = published_stage_counts(c.surface, c.d);
        pass &= c.counts.candidates == p.candidates;
        pass &= c.counts.position_survivors == p.position_survivors;
    }
    report("2 (stage-count tables)", pass, t0.elapsed());
}

#[test]
fn criterion_3_representative_equivalence() {
    let t0 = Instant::now();
    let s = shared();
    let mut pass = true;
    for c in &s.classifications {
        let m = match_published_representatives(c.surface, c.d, &c.classes);
        pass &= m.ok;
    }
    pass &= t0.elapsed() < Duration::from_secs(60 + 120);
    report("3 (published representatives match bijectively)", pass, t0.elapsed());
}

#[test]
fn criterion_4_group_orders() {
    let t0 = Instant::now();
    let g = pgl3_f2();
    let mut pass = g.len() == 168;
    pass &= closure(&pgl3_two_generators()).len() == 168;
    pass &= aut_q().len() == 120;
    let d5 = aut_d5_model();
    pass &= d5.order() == 5;
    let h = builtin("d5_h").unwrap();
    let mut h5 = h.clone();
    for _ in 0..4 {
        h5 = RatMap::compose(&h, &h5).unwrap();
    }
    pass &= maps_equal_rational(&h5, &RatMap::identity(Space::P2, h.field()));
    let d6 = aut_d6_model();
    pass &= d6.order() == 18;
    for e in &d6.elements {
        let SurfaceAuto::Rational(m) = e else { unreachable!() };
        pass &= commutes_with_frob(m, FrobModel::D6Twist);
    }
    pass &= t0.elapsed() < Duration::from_secs(10);
    report("4 (group orders 168/120/5/18)", pass, t0.elapsed());
}

#[test]
fn criterion_5_involution_suite() {
    let t0 = Instant::now();
    let mut pass = true;
    for name in ["quintic_inv_1", "quintic_inv_2"] {
        pass &= is_involution(&builtin(name).unwrap());
    }
    for name in ["d6_inv_size2", "d6_inv_size3_1", "d6_inv_size3_2"] {
        let f = builtin(name).unwrap();
        pass &= is_involution(&f);
        pass &= commutes_with_frob(&f, FrobModel::D6Twist);
    }
    pass &= t0.elapsed() < Duration::from_secs(10);
    report("5 (quintic and degree-6 involutions)", pass, t0.elapsed());
}

#[test]
fn criterion_6_infinite_family_identities() {
    let t0 = Instant::now();
    let mut pass = verify_conic_identity(FamilyTag::L2star)
        && verify_conic_identity(FamilyTag::L4star)
        && excluded_point_on_conic(FamilyTag::L2star)
        && excluded_point_on_conic(FamilyTag::L4star);
    // 20 deterministic polynomial parameters of degree <= 3 per family
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x2f2_c43a);
    for tag in [FamilyTag::L2star, FamilyTag::L4star] {
        let pi = Fibration::new(tag.fibration_tag(), registry().f2());
        for _ in 0..20 {
            let a = RationalFunction1V::from_poly(cremona2::ff::Poly2(rng.gen_range(0..16)));
            let m = family_member(tag, a);
            pass &= family_is_involution(&m);
            pass &= preserves_fibration(&m.map, &pi);
        }
    }
    // the explicit degree-3 links: pi4 fibers fixed pointwise, pi2 fibers
    // permuted by the base involution [s:t] -> [s:s+t]
    let f2 = registry().f2();
    let pi4 = Fibration::new(FibrationTag::Pi4, f2);
    for name in ["oneLink_p100", "oneLink_p010", "oneLink_p001", "oneLink_p110", "oneLink_p101"]
    {
        pass &= preserves_fibration(&builtin(name).unwrap(), &pi4);
    }
    let pi2 = Fibration::new(FibrationTag::Pi2, f2);
    for name in ["oneLink22_p100", "oneLink22_p101"] {
        let f = builtin(name).unwrap();
        pass &= semi_preserves_fibration(&f, &pi2, &|p0, p1| [p0.clone(), p0.add(p1).unwrap()]);
    }
    let a = builtin("oneLink_p100").unwrap();
    let b = builtin("oneLink_p010").unwrap();
    let c = builtin("oneLink_p110").unwrap();
    pass &= maps_equal_rational(
        &RatMap::compose(&a, &RatMap::compose(&b, &a).unwrap()).unwrap(),
        &c,
    );
    pass &= t0.elapsed() < Duration::from_secs(30);
    report("6 (infinite-family identities)", pass, t0.elapsed());
}

#[test]
fn criterion_7_model_coherence() {
    let t0 = Instant::now();
    let mut pass = true;
    // rho_Q lands on the quadric identically
    let r = builtin("rho_Q").unwrap();
    pass &= quadric_form(r.field()).compose(r.comps()).unwrap().is_zero();
    // fiber-product inverses on both charts: phi o psi is the chart
    // identity symbolically, psi o phi is the identity on sampled
    // points of the surfaces
    let f2 = registry().f2();
    let chart_id = RatMap::new(
        Space::P1xP1,
        Space::P1xP1,
        vec![
            MPoly::var(f2, 4, 0),
            MPoly::var(f2, 4, 1),
            MPoly::one(f2, 4),
            MPoly::var(f2, 4, 3),
        ],
    );
    for (phi, psi) in
        [("fiberprod_phi4", "fiberprod_psi4"), ("fiberprod_phi2", "fiberprod_psi2")]
    {
        let comp =
            RatMap::compose(&builtin(phi).unwrap(), &builtin(psi).unwrap()).unwrap();
        pass &= maps_equal_rational(&comp, &chart_id);
    }
    pass &= fiberprod_inverse_pointwise();
    // the cubic-system model map of the degree-5 surface
    let phi = cremona2::rmap::build_phi_d5().unwrap();
    pass &= cremona2::rmap::phi_conjugates_frobenius(&phi, 100);
    // the gamma/phi chain reproduces the twisted degree-6 Frobenius
    let f64f = registry().field("F64");
    let chi = RatMap::compose(
        &builtin("d6_bidegree12").unwrap().lift_to(f64f),
        &builtin("gamma_d6").unwrap(),
    )
    .unwrap();
    let d6 = RatMap::new(Space::P2, Space::P2, FrobModel::D6Twist.formulas(f64f));
    let qt = RatMap::new(Space::P1xP1, Space::P1xP1, FrobModel::QTwist.formulas(f64f));
    pass &= maps_equal_rational(
        &RatMap::compose(&d6, &chi).unwrap(),
        &RatMap::compose(&chi, &qt).unwrap(),
    );
    pass &= t0.elapsed() < Duration::from_secs(30);
    report("7 (model coherence)", pass, t0.elapsed());
}

fn fiberprod_inverse_pointwise() -> bool {
    let field = registry().field("F128");
    let g = field.generator();
    let one = field.one();
    let phi4 = builtin("fiberprod_phi4").unwrap().lift_to(field);
    let psi4 = builtin("fiberprod_psi4").unwrap().lift_to(field);
    let psi2 = builtin("fiberprod_psi2").unwrap().lift_to(field);
    let mut tested4 = 0;
    let mut tested2 = 0;
    let mut e = 0u64;
    while (tested4 < 50 || tested2 < 50) && e < 50_000 {
        e += 1;
        let y = g.pow(e);
        let z = g.pow(3 * e + 1);
        let t = g.pow(5 * e + 2);
        if t.pow(4) == t {
            continue;
        }
        if tested4 < 50 {
            let beta = t * t * z + y;
            let gamma = t * t * y * y + z * z;
            if let Some(x) =
                field.elements().find(|&x| (x * x + x * beta + gamma).is_zero())
            {
                let pt = [x, y, z, t];
                let u: Vec<FieldElem> =
                    phi4.comps().iter().map(|c| c.eval(&pt).unwrap()).collect();
                if !(u[0].is_zero() && u[1].is_zero()) {
                    let im = [u[0], u[1], one, u[3]];
                    let back: Vec<FieldElem> =
                        psi4.comps().iter().map(|c| c.eval(&im).unwrap()).collect();
                    if !(back[3] == t
                        && back[0] * y == back[1] * x
                        && back[0] * z == back[2] * x
                        && back[1] * z == back[2] * y)
                    {
                        return false;
                    }
                    tested4 += 1;
                }
            }
        }
        if tested2 < 50 {
            let xx = g.pow(7 * e + 5);
            let gamma = xx * xx + t * t * y * y + t * t * xx * y;
            if let Some(z2) =
                field.elements().find(|&z2| (z2 * z2 + z2 * xx + gamma).is_zero())
            {
                let pt = [xx, y, z2, t];
                let u: Vec<FieldElem> =
                    phi4.comps().iter().map(|c| c.eval(&pt).unwrap()).collect();
                if !(u[0].is_zero() && u[1].is_zero()) {
                    let im = [u[0], u[1], one, u[3]];
                    let back: Vec<FieldElem> =
                        psi2.comps().iter().map(|c| c.eval(&im).unwrap()).collect();
                    if !(back[3] == t
                        && back[0] * y == back[1] * xx
                        && back[0] * z2 == back[2] * xx
                        && back[1] * z2 == back[2] * y)
                    {
                        return false;
                    }
                    tested2 += 1;
                }
            }
        }
    }
    tested4 >= 50 && tested2 >= 50
}

#[test]
fn criterion_8_counting_lemmas_and_inventory() {
    let t0 = Instant::now();
    let rep = geiser_pair_report();
    // published count 2 via the conic-stabilizer equivalence; the finer
    // tallies are frozen so the literal pair count stays visible
    let mut pass = rep.classes_under_conic_stabilizer == 2
        && rep.classes_under_orbit5_stabilizer == 6
        && rep.orbit5_stabilizer_order == 1
        && rep.conic_stabilizer_order == 6
        && rep.size2_orbits_total == 7;
    pass &= unique_size5_check();
    pass &= irreducible_quintic_count() == 6;
    // generator inventory: 2 automorphisms + per-surface classes + the
    // two 5+2 Geiser types = 111
    let s = shared();
    let class_count = |surface: Surface, d: u32| -> u64 {
        s.classifications
            .iter()
            .find(|c| c.surface == surface && c.d == d)
            .unwrap()
            .counts
            .classes
    };
    let total = 2
        + class_count(Surface::P2, 6)
        + class_count(Surface::P2, 7)
        + class_count(Surface::P2, 8)
        + class_count(Surface::Q, 4)
        + class_count(Surface::Q, 6)
        + class_count(Surface::Q, 7)
        + class_count(Surface::D6, 2)
        + class_count(Surface::D6, 3)
        + class_count(Surface::D6, 4)
        + class_count(Surface::D6, 5)
        + class_count(Surface::D5, 3)
        + class_count(Surface::D5, 4)
        + rep.classes_under_conic_stabilizer;
    pass &= total == 111;
    report("8 (counting lemmas and the 111-generator inventory)", pass, t0.elapsed());
}

#[test]
fn criterion_9_property_suites() {
    let t0 = Instant::now();
    let mut pass = field_axioms_and_frobenius();
    pass &= general_position_oracle_equivalence();
    pass &= dedup_soundness();
    pass &= determinism_across_workers();
    pass &= unique_tangent_check(FibrationTag::Pi2, 2) && unique_tangent_check(FibrationTag::Pi4, 4);
    pass &= t0.elapsed() < Duration::from_secs(120 + 180);
    report("9 (property suites)", pass, t0.elapsed());
}

fn field_axioms_and_frobenius() -> bool {
    let mut pass = true;
    // inverses exhaustively for every registered field of degree <= 16
    for key in ["F4", "F8", "F16", "F32", "F64", "F128", "F256", "F2_12", "F2_14", "F2_15"] {
        let f = registry().field(key);
        for u in f.nonzero_elements() {
            pass &= (u * u.inverse().unwrap()).is_one();
            pass &= u.frobenius(f.degree()) == u;
        }
    }
    // pair properties exhaustively for small fields
    for key in ["F4", "F8", "F16"] {
        let f = registry().field(key);
        for u in f.elements() {
            for v in f.elements() {
                let s = u + v;
                pass &= s.frobenius(1) == u.frobenius(1) + v.frobenius(1);
                pass &= (u * v).frobenius(1) == u.frobenius(1) * v.frobenius(1);
                pass &= u + v == v + u && u * v == v * u;
            }
        }
    }
    // sampled triple properties in a large field
    let f = registry().field("F2_30");
    let g = f.generator();
    for e in 1..200u64 {
        let (u, v, w) = (g.pow(e), g.pow(7 * e + 1), g.pow(e * e % 997 + 3));
        pass &= (u + v) + w == u + (v + w);
        pass &= (u * v) * w == u * (v * w);
        pass &= u * (v + w) == u * v + u * w;
        pass &= (u + v) * (u + v) == u * u + v * v;
    }
    pass
}

/// Brute-force oracle: scan every normalized coefficient vector of the
/// given degree and count points on the curve.
fn oracle_curve_through(points: &[ProjPoint], degree: u32, threshold: usize) -> bool {
    let field = points[0].field();
    let monos = monomial_basis(Space::P2, DegreeSpec::Total(degree));
    let n = monos.len();
    // precompute the monomial values at each point
    let vals: Vec<Vec<FieldElem>> = points
        .iter()
        .map(|p| {
            monos
                .iter()
                .map(|m| {
                    let mut acc = field.one();
                    for (v, &e) in m.0.iter().enumerate().take(3) {
                        for _ in 0..e {
                            acc = acc * p.coords()[v];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let q = field.size();
    // normalized vectors: first nonzero coefficient = 1
    for lead in 0..n {
        let tail = n - lead - 1;
        let mut idx = vec![0u64; tail];
        loop {
            let mut coeffs = vec![field.zero(); n];
            coeffs[lead] = field.one();
            for (i, &b) in idx.iter().enumerate() {
                coeffs[lead + 1 + i] = field.elem(b);
            }
            let on_curve = vals
                .iter()
                .filter(|row| {
                    let mut acc = field.zero();
                    for (c, v) in coeffs.iter().zip(row.iter()) {
                        acc = acc + *c * *v;
                    }
                    acc.is_zero()
                })
                .count();
            if on_curve >= threshold {
                return true;
            }
            // odometer
            let mut i = 0;
            loop {
                if i == tail {
                    break;
                }
                idx[i] += 1;
                if idx[i] < q {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if tail == 0 || (i == tail && idx.iter().all(|&b| b == 0)) {
                break;
            }
        }
    }
    false
}

fn general_position_oracle_equivalence() -> bool {
    let mut pass = true;
    let mut cases: Vec<Vec<ProjPoint>> = Vec::new();
    // collinear triple and conic-carried sextuple over F16
    let f16 = registry().field("F16");
    let a = f16.gen_x();
    cases.push(
        (0..3)
            .map(|i| ProjPoint::p2(&[f16.one(), a.pow(i), f16.zero()]).unwrap())
            .collect(),
    );
    cases.push(
        (0..6)
            .map(|i| {
                let u = a.pow(i);
                ProjPoint::p2(&[f16.one(), u, u * u]).unwrap()
            })
            .collect(),
    );
    // the size-4 orbit plus assorted points
    let orbit4: Vec<ProjPoint> = {
        let p = ProjPoint::p2(&[f16.one(), a, a * a * a]).unwrap();
        cremona2::frob::orbit(FrobModel::StdP2, &p, 8).unwrap().points().to_vec()
    };
    cases.push(orbit4.clone());
    let mut five = orbit4;
    five.push(ProjPoint::p2(&[f16.one(), f16.one(), a]).unwrap());
    cases.push(five);
    // small-field configurations
    for key in ["F4", "F8"] {
        let f = registry().field(key);
        let g = f.generator();
        cases.push(
            (0..4)
                .map(|i| {
                    ProjPoint::p2(&[f.one(), g.pow(i % f.group_order()), g.pow((3 * i + 1) % f.group_order())])
                        .unwrap()
                })
                .collect(),
        );
        cases.push(
            (0..6)
                .map(|i| {
                    let u = g.pow(i % f.group_order());
                    ProjPoint::p2(&[f.one(), u, u * u]).unwrap()
                })
                .collect(),
        );
    }
    // large fields up to 2^8: line enumeration stays exhaustive there
    for key in ["F64", "F256"] {
        let f = registry().field(key);
        let g = f.generator();
        let tri: Vec<ProjPoint> = (0..3)
            .map(|i| ProjPoint::p2(&[f.one(), g.pow(i + 1), g.pow(2 * i + 2)]).unwrap())
            .collect();
        pass &= oracle_curve_through(&tri, 1, 3) == has_collinear_subset(&tri);
        let col: Vec<ProjPoint> = (0..3)
            .map(|i| ProjPoint::p2(&[f.one(), g.pow(i + 1), f.zero()]).unwrap())
            .collect();
        pass &= oracle_curve_through(&col, 1, 3) && has_collinear_subset(&col);
    }
    for points in &cases {
        let mut distinct = points.clone();
        distinct.dedup();
        if distinct.len() != points.len() || points.len() > 6 {
            continue;
        }
        let report = general_position_p2(points).unwrap();
        let line_oracle = oracle_curve_through(points, 1, 3);
        let conic_oracle = points.len() >= 6 && oracle_curve_through(points, 2, 6);
        // category-level agreement between the oracle and the subset scan
        let collinear_subsets = has_collinear_subset(points);
        let conic_subsets = points.len() >= 6 && has_conic_subset(points);
        pass &= line_oracle == collinear_subsets;
        pass &= conic_oracle == conic_subsets;
        pass &= report.ok == (!collinear_subsets && !conic_subsets);
    }
    pass
}

fn has_collinear_subset(points: &[ProjPoint]) -> bool {
    let n = points.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let sel = vec![points[i].clone(), points[j].clone(), points[k].clone()];
                let m = cremona2::geom::position_matrix(&sel, DegreeSpec::Total(1), &[]).unwrap();
                if cremona2::geom::kernel_dimension(&m) > 0 {
                    return true;
                }
            }
        }
    }
    false
}

fn has_conic_subset(points: &[ProjPoint]) -> bool {
    // six points at a time
    let n = points.len();
    if n < 6 {
        return false;
    }
    let mut idx: Vec<usize> = (0..6).collect();
    loop {
        let sel: Vec<ProjPoint> = idx.iter().map(|&i| points[i].clone()).collect();
        let m = cremona2::geom::position_matrix(&sel, DegreeSpec::Total(2), &[]).unwrap();
        if cremona2::geom::kernel_dimension(&m) > 0 {
            return true;
        }
        // next combination
        let mut i = 5usize;
        loop {
            if idx[i] + (5 - i) < n - 1 {
                idx[i] += 1;
                for j in (i + 1)..6 {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return false;
            }
            i -= 1;
        }
    }
}

fn dedup_soundness() -> bool {
    let s = shared();
    for c in &s.classifications {
        for i in 0..c.classes.len() {
            for j in (i + 1)..c.classes.len() {
                if orbits_equivalent(
                    c.surface,
                    c.d,
                    c.classes[i].representative(),
                    c.classes[j].representative(),
                ) {
                    return false;
                }
            }
        }
    }
    true
}

fn determinism_across_workers() -> bool {
    let run = |workers: usize| -> String {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap();
        let mut out = String::new();
        for (s, d) in [(Surface::P2, 6), (Surface::D6, 4), (Surface::Q, 6)] {
            let c = pool.install(|| classify_orbits(s, d)).unwrap();
            out.push_str(&format!("{:?}\n", c.counts));
            for cl in &c.classes {
                out.push_str(&format!("{}\n", cl.representative()));
                for p in cl.orbit.points() {
                    out.push_str(&format!("  {}\n", p));
                }
            }
        }
        out
    };
    run(1) == run(3)
}
