use inclab_core::bounds::{calibrate_a, eval_bound, BoundParams, FormulaId};
use inclab_core::generators::{gen_inversion_circles, gen_packing, gen_random, gen_st_grid, grid_pole, GenKind, GenSpec};
use inclab_core::geom::{circle_through, incident, intersection_count, Intersection};
use inclab_core::incidence::{count_incidences, kst_bound, rich_points};
use inclab_core::partition::{partitioned_count_with, PartitionOptions};
use inclab_core::rat::rat;
use inclab_core::{Circle3, Curve, CurveSet, Line3, Plane, Point3, PointSet, Real};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point3> {
    (-6i64..=6, -6i64..=6, -6i64..=6, 1i64..=3).prop_map(|(x, y, z, d)| {
        Point3::new(rat(x, d), rat(y, d), rat(z, 1))
    })
}

fn circle() -> impl Strategy<Value = Circle3> {
    (point(), point(), point()).prop_filter_map("collinear", |(a, b, c)| circle_through(&a, &b, &c).ok())
}

fn line() -> impl Strategy<Value = Line3> {
    (point(), point()).prop_filter_map("coincident", |(a, b)| Line3::through(&a, &b).ok())
}

fn random_instance(kind: GenKind) -> impl Strategy<Value = (PointSet, CurveSet)> {
    (0u64..10_000, 3u32..14, 8u32..18, 2u32..4).prop_map(move |(seed, n, m, range)| {
        let spec = GenSpec { kind, n, m, range, seed, ..Default::default() };
        gen_random(&spec).expect("lattice is large enough")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_forms_are_idempotent(c in circle(), l in line()) {
        let plane = Plane::new(c.plane().normal_vec().coords().map(|x| x.clone()), c.plane().offset().clone()).unwrap();
        prop_assert_eq!(&plane, c.plane());
        let again = Circle3::new(plane, c.center().clone(), c.rho2().clone()).unwrap();
        prop_assert_eq!(&again, &c);
        let scaled_dir = l.dir_vec().scale(&rat(-3, 2));
        let moved = l.point_at(&rat(7, 3));
        prop_assert_eq!(Line3::new(&moved, &scaled_dir).unwrap(), l);
    }

    #[test]
    fn circle_through_contains_its_points(a in point(), b in point(), c in point()) {
        if let Ok(circ) = circle_through(&a, &b, &c) {
            let curve = Curve::Circle(circ);
            for p in [&a, &b, &c] {
                prop_assert!(incident(p, &curve));
            }
        }
    }

    #[test]
    fn intersection_counts(c1 in circle(), c2 in circle(), l1 in line(), l2 in line()) {
        let curves = [Curve::Circle(c1), Curve::Circle(c2), Curve::Line(l1), Curve::Line(l2)];
        for a in &curves {
            for b in &curves {
                let ab = intersection_count(a, b);
                prop_assert_eq!(ab, intersection_count(b, a));
                if a == b {
                    prop_assert_eq!(ab, Intersection::Coincident);
                } else {
                    let cap = if a.degree() == 1 || b.degree() == 1 { if a.degree() == b.degree() { 1 } else { 2 } } else { 2 };
                    prop_assert!(ab.count().unwrap() <= cap);
                }
            }
        }
    }

    #[test]
    fn shared_construction_points_are_counted(a in point(), b in point(), c in point(), d in point()) {
        let (Ok(c1), Ok(c2)) = (circle_through(&a, &b, &c), circle_through(&a, &b, &d)) else { return Ok(()) };
        if c1 != c2 {
            prop_assert_eq!(intersection_count(&c1.into(), &c2.into()), Intersection::Points(2));
        }
    }

    #[test]
    fn incidence_identities((p, c) in random_instance(GenKind::RandomCircles)) {
        let r = count_incidences(&p, &c);
        prop_assert!(r.is_consistent());
        let brute = p.iter().map(|x| c.curves().iter().filter(|k| incident(x, k)).count() as u64).sum::<u64>();
        prop_assert_eq!(r.total, brute);
        for (i, &deg) in r.curve_degrees.iter().enumerate() {
            prop_assert_eq!(count_incidences(&p, &c.without(i)).total, r.total - deg as u64);
        }
        let mut prev = p.len();
        for t in 1..5 {
            let rich = rich_points(&p, &c, t).unwrap();
            prop_assert!(rich.len() <= prev);
            prev = rich.len();
        }
        let kst = kst_bound(p.len() as u64, c.len() as u64, 3, 2);
        prop_assert!(Real::from_u64(r.total) <= kst);
    }

    #[test]
    fn kst_dominates_lines((p, c) in random_instance(GenKind::RandomLines)) {
        let r = count_incidences(&p, &c);
        prop_assert!(Real::from_u64(r.total) <= kst_bound(p.len() as u64, c.len() as u64, 2, 1));
    }

    #[test]
    fn partition_is_exact_on_circles((p, c) in random_instance(GenKind::RandomCircles), rounds in 1u32..6) {
        let opts = PartitionOptions { rounds: Some(rounds), degree: None };
        let (r, trace) = partitioned_count_with(&p, &c, &BoundParams::default().with_k(3), &opts).unwrap();
        prop_assert_eq!(r, count_incidences(&p, &c));
        prop_assert!(trace.violations(2).is_empty(), "{:?}", trace.violations(2));
    }

    #[test]
    fn partition_is_exact_on_lines((p, c) in random_instance(GenKind::RandomLines), rounds in 1u32..6) {
        let opts = PartitionOptions { rounds: Some(rounds), degree: None };
        let (r, trace) = partitioned_count_with(&p, &c, &BoundParams::default(), &opts).unwrap();
        prop_assert_eq!(r, count_incidences(&p, &c));
        prop_assert!(trace.violations(1).is_empty(), "{:?}", trace.violations(1));
    }

    #[test]
    fn bounds_are_monotone(m in 1u64..500, n in 1u64..500, dq in 0u64..50, k in 2u32..5, s in 2u32..5) {
        let q = dq.min(n);
        let base = BoundParams::new(m, n).with_q(q).with_t(2).with_k(k).with_s(s);
        for id in FormulaId::ALL {
            let v = eval_bound(id, &base).unwrap();
            let bigger = [
                BoundParams { m: m + 1, ..base.clone() },
                BoundParams { n: n + 1, ..base.clone() },
                BoundParams { q: Some((q + 1).min(n)), ..base.clone() },
                BoundParams { a_lead: Real::from_u64(2), ..base.clone() },
            ];
            for b in bigger {
                prop_assert!(eval_bound(id, &b).unwrap() >= v, "{} not monotone", id);
            }
        }
        let main = eval_bound(FormulaId::Main, &base.clone().with_k(2)).unwrap();
        let gk = eval_bound(FormulaId::GkLines, &base.clone().with_k(2)).unwrap();
        prop_assert_eq!(main, gk);
    }

    #[test]
    fn rich_bound_identity(n in 1u64..10_000, q in 0u64..100, t in 1u64..50, k in 2u32..5) {
        let q = q.min(n);
        let p = BoundParams::new(0, n).with_q(q).with_t(t).with_k(k);
        let rich = eval_bound(FormulaId::RichA, &p).unwrap().to_f64();
        let (kf, nf, qf) = (k as f64, n as f64, q as f64);
        let e = (kf - 1.0) / (2.0 * kf - 1.0);
        let q_term = rich.powf(kf / (2.0 * kf - 1.0)) * nf.powf(e) * qf.powf(e);
        let tr = t as f64 * rich;
        prop_assert!(tr >= q_term * (1.0 - 1e-9));
        prop_assert!(tr >= nf * (1.0 - 1e-9));
    }

    #[test]
    fn calibration_dominates(obs in prop::collection::vec((1u64..300, 1u64..300, 0u64..2000), 1..8)) {
        let suite: Vec<(BoundParams, u64)> = obs
            .iter()
            .map(|&(m, n, i)| (BoundParams::new(m, n).with_q(n / 2), i))
            .collect();
        if suite.iter().all(|s| s.1 == 0) { return Ok(()); }
        for id in [FormulaId::Main, FormulaId::Circ3, FormulaId::Impr, FormulaId::Ps] {
            let a = calibrate_a(&suite, id).unwrap();
            for (p, i) in &suite {
                let v = eval_bound(id, &p.clone().with_a(a.clone())).unwrap();
                prop_assert!(v >= Real::from_u64(*i));
            }
        }
    }
}

#[test]
fn grid_closed_form() {
    for a in 1..=6 {
        for b in 1..=6 {
            let (p, l) = gen_st_grid(a, b).unwrap();
            let (a, b) = (a as u64, b as u64);
            assert_eq!((p.len() as u64, l.len() as u64), (2 * a * a * b, a * b * b));
            assert_eq!(count_incidences(&p, &l).total, a * a * b * b);
        }
    }
}

#[test]
fn transport_and_packing() {
    let (p, l) = gen_st_grid(3, 2).unwrap();
    let base = count_incidences(&p, &l);
    let inv = gen_inversion_circles(&p, &l, &grid_pole()).unwrap();
    assert_eq!(count_incidences(&inv.0, &inv.1), base);
    for copies in 1..4u64 {
        let packed = gen_packing(copies as u32, &inv).unwrap();
        assert_eq!(packed.0.len() as u64, copies * p.len() as u64);
        assert_eq!(packed.1.len() as u64, copies * l.len() as u64);
        assert_eq!(count_incidences(&packed.0, &packed.1).total, copies * base.total);
    }
}

#[test]
fn generated_circles_have_three_degrees_of_freedom() {
    let spec = GenSpec { kind: GenKind::RandomCircles, n: 50, m: 30, range: 3, seed: 5, ..Default::default() };
    let (p, c) = gen_random(&spec).unwrap();
    let probes = PointSet::new(p.points()[..12].to_vec());
    let dof = inclab_core::incidence::verify_dof(&c, &probes, 3).unwrap();
    assert!(dof.max_curves_through_k_points <= 1);
    assert!(dof.max_pairwise_intersections <= 2);
}
