//! The container parameter q: the most input curves lying on one plane or
//! one sphere.

use std::collections::{BTreeSet, HashMap};

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::geom::{Circle3, Curve, Line3, Plane, Point3, Sphere};
use crate::incidence::CurveSet;

/// The sphere through both circles, if one exists. Coplanar pairs have none
/// (the plane is their container).
pub fn common_sphere(c1: &Circle3, c2: &Circle3) -> Option<Sphere> {
    if c1.plane() == c2.plane() {
        return None;
    }
    let n1 = c1.plane().normal_vec();
    let n2 = c2.plane().normal_vec();
    let (ctr1, ctr2) = (c1.center(), c2.center());
    let axis_cross = n1.cross(&n2);
    let center = if axis_cross.is_zero() {
        // Parallel planes: the axes must coincide.
        let delta = ctr2.sub(ctr1);
        if !delta.cross(&n1).is_zero() {
            return None;
        }
        let nn = n1.norm2();
        let lambda = delta.dot(&n1) / &nn;
        let s = (c2.rho2() + &lambda * &lambda * &nn - c1.rho2()) / (&lambda * &nn * crate::rat::int(2));
        ctr1.add(&n1.scale(&s))
    } else {
        // O = c1 + s·n1 with (O − c2) × n2 = 0.
        let lhs = ctr1.sub(ctr2).cross(&n2);
        let axis = (0..3).find(|&i| !axis_cross.coord(i).is_zero())?;
        let s = -(lhs.coord(axis) / axis_cross.coord(axis));
        let o = ctr1.add(&n1.scale(&s));
        if !o.sub(ctr2).cross(&n2).is_zero() {
            return None;
        }
        o
    };
    let r2 = c1.rho2() + center.dist2(ctr1);
    if r2 != c2.rho2() + center.dist2(ctr2) {
        return None;
    }
    Sphere::new(center, r2).ok()
}

/// Floating-point image of a circle, used only to skip exact work that is
/// certain to fail.
struct Approx {
    c: [f64; 3],
    n: [f64; 3],
    r2: f64,
}

fn approx(c: &Circle3) -> Approx {
    let f = |r: &crate::rat::Rat| r.to_f64().unwrap_or(f64::NAN);
    Approx {
        c: c.center().coords().map(f),
        n: c.plane().normal_vec().coords().map(f),
        r2: f(c.rho2()),
    }
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn l1(v: &[f64; 3]) -> f64 {
    v.iter().map(|t| t.abs()).sum()
}

/// True only when the pair certainly has no common sphere; exact
/// candidates always pass. The tolerance is far above f64 rounding for
/// the input sizes involved.
fn surely_no_sphere(a: &Approx, b: &Approx) -> bool {
    const TOL: f64 = 1e-9;
    let x = cross3(&a.n, &b.n);
    let d = [b.c[0] - a.c[0], b.c[1] - a.c[1], b.c[2] - a.c[2]];
    let scale = (l1(&a.c) + l1(&b.c) + 1.0) * l1(&a.n) * l1(&b.n);
    if !scale.is_finite() || l1(&x) <= TOL * l1(&a.n) * l1(&b.n) {
        return false;
    }
    let det = d[0] * x[0] + d[1] * x[1] + d[2] * x[2];
    if det.abs() > TOL * scale {
        return true;
    }
    // Meeting point of the axes, then the radius test.
    let lhs = cross3(&[a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2]], &b.n);
    let i = (0..3).max_by(|&i, &j| x[i].abs().total_cmp(&x[j].abs())).unwrap();
    let s = -lhs[i] / x[i];
    let o = [a.c[0] + s * a.n[0], a.c[1] + s * a.n[1], a.c[2] + s * a.n[2]];
    let dist2 = |p: &[f64; 3]| (0..3).map(|k| (o[k] - p[k]).powi(2)).sum::<f64>();
    let gap = a.r2 + dist2(&a.c) - b.r2 - dist2(&b.c);
    let size = a.r2.abs() + b.r2.abs() + dist2(&a.c) + dist2(&b.c) + 1.0;
    gap.is_finite() && size.is_finite() && gap.abs() > 1e-6 * size
}

/// Floating-point screen for [`sphere_contains_circle`]; never rejects a
/// circle that is exactly on the sphere.
fn maybe_on_sphere(s: &Sphere, a: &Approx) -> bool {
    let f = |r: &crate::rat::Rat| r.to_f64().unwrap_or(f64::NAN);
    let o = s.center().coords().map(f);
    let d = [o[0] - a.c[0], o[1] - a.c[1], o[2] - a.c[2]];
    let scale = (l1(&o) + l1(&a.c) + 1.0) * l1(&a.n);
    let off = l1(&cross3(&d, &a.n));
    !(off.is_finite() && scale.is_finite() && off > 1e-9 * scale)
}

/// Whole-circle containment: the sphere center is on the circle's axis and
/// the radii agree.
pub fn sphere_contains_circle(s: &Sphere, c: &Circle3) -> bool {
    let off = s.center().sub(c.center());
    off.cross(&c.plane().normal_vec()).is_zero() && c.rho2() + off.norm2() == *s.r2()
}

pub fn plane_contains_curve(p: &Plane, c: &Curve) -> bool {
    match c {
        Curve::Circle(c) => c.plane() == p,
        Curve::Line(l) => p.contains(l.anchor()) && p.normal_vec().dot(&l.dir_vec()).is_zero(),
    }
}

/// Plane spanned by two distinct coplanar lines, or `None` for skew lines.
pub fn spanning_plane(l1: &Line3, l2: &Line3) -> Option<Plane> {
    let (d1, d2) = (l1.dir_vec(), l2.dir_vec());
    let gap = l2.anchor().sub(l1.anchor());
    let cross = d1.cross(&d2);
    let normal = if cross.is_zero() {
        d1.cross(&gap)
    } else {
        if !gap.dot(&cross).is_zero() {
            return None;
        }
        cross
    };
    Plane::through(l1.anchor(), &normal).ok()
}

fn plane_through_line(l: &Line3) -> Plane {
    let d = l.dir_vec();
    (0..3)
        .map(|axis| {
            let mut e = [0, 0, 0];
            e[axis] = 1;
            d.cross(&Point3::from_ints(e[0], e[1], e[2]))
        })
        .find(|n| !n.is_zero())
        .and_then(|n| Plane::through(l.anchor(), &n).ok())
        .expect("a nonzero direction has a perpendicular axis")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneWitness {
    pub plane: Plane,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereWitness {
    pub sphere: Sphere,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainerReport {
    pub q_plane: usize,
    pub q_sphere: usize,
    pub q: usize,
    pub plane_witness: Option<PlaneWitness>,
    pub sphere_witness: Option<SphereWitness>,
}

/// Collects every container spanned by a pair of members. Once a container
/// is found, all curves on it are gathered in one scan and pairs already
/// sharing a known container are skipped.
fn cluster<K: Clone + Eq + std::hash::Hash + Ord>(
    n: usize,
    pair_key: impl Fn(usize, usize) -> Option<K>,
    contains: impl Fn(&K, usize) -> bool,
) -> Vec<(K, Vec<usize>)> {
    let mut clusters: Vec<(K, Vec<usize>)> = Vec::new();
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut member_of: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if !member_of[i].is_disjoint(&member_of[j]) {
                continue;
            }
            let Some(key) = pair_key(i, j) else { continue };
            if index.contains_key(&key) {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|&c| contains(&key, c)).collect();
            let id = clusters.len();
            for &c in &members {
                member_of[c].insert(id);
            }
            index.insert(key.clone(), id);
            clusters.push((key, members));
        }
    }
    clusters
}

/// Largest cluster, ties broken by the smallest key so the witness does not
/// depend on input order.
fn best<K: Ord + Clone>(clusters: &[(K, Vec<usize>)]) -> Option<(K, Vec<usize>)> {
    clusters
        .iter()
        .max_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| b.0.cmp(&a.0)))
        .cloned()
}

pub fn compute_q(c: &CurveSet) -> ContainerReport {
    let curves = c.curves();
    let n = curves.len();
    let mut report = ContainerReport {
        q_plane: 0,
        q_sphere: 0,
        q: 0,
        plane_witness: None,
        sphere_witness: None,
    };
    if n == 0 {
        return report;
    }
    match &curves[0] {
        Curve::Circle(_) => {
            let circles: Vec<&Circle3> = curves
                .iter()
                .map(|c| match c {
                    Curve::Circle(c) => c,
                    Curve::Line(_) => unreachable!("curve sets are homogeneous"),
                })
                .collect();
            let mut by_plane: HashMap<&Plane, Vec<usize>> = HashMap::new();
            for (i, c) in circles.iter().enumerate() {
                by_plane.entry(c.plane()).or_default().push(i);
            }
            let planes: Vec<(Plane, Vec<usize>)> =
                by_plane.into_iter().map(|(p, m)| (p.clone(), m)).collect();
            if let Some((plane, members)) = best(&planes) {
                report.q_plane = members.len();
                report.plane_witness = Some(PlaneWitness { plane, members });
            }
            let approx: Vec<Approx> = circles.iter().map(|c| approx(c)).collect();
            let spheres = cluster(
                n,
                |i, j| {
                    if surely_no_sphere(&approx[i], &approx[j]) {
                        return None;
                    }
                    common_sphere(circles[i], circles[j])
                },
                |s, k| maybe_on_sphere(s, &approx[k]) && sphere_contains_circle(s, circles[k]),
            );
            if let Some((sphere, members)) = best(&spheres) {
                report.q_sphere = members.len();
                report.sphere_witness = Some(SphereWitness { sphere, members });
            }
        }
        Curve::Line(_) => {
            let lines: Vec<&Line3> = curves
                .iter()
                .map(|c| match c {
                    Curve::Line(l) => l,
                    Curve::Circle(_) => unreachable!("curve sets are homogeneous"),
                })
                .collect();
            let planes = cluster(
                n,
                |i, j| spanning_plane(lines[i], lines[j]),
                |p, k| plane_contains_curve(p, &curves[k]),
            );
            let (plane, members) = best(&planes).unwrap_or_else(|| {
                let lone = (0..n).map(|i| plane_through_line(lines[i])).min().unwrap();
                let idx = (0..n).find(|&i| plane_contains_curve(&lone, &curves[i])).unwrap();
                (lone, vec![idx])
            });
            report.q_plane = members.len();
            report.plane_witness = Some(PlaneWitness { plane, members });
        }
    }
    report.q = report.q_plane.max(report.q_sphere);
    report
}
