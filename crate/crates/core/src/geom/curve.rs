use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::construct::solve3;
use super::{Plane, Point3};
use crate::error::{Error, Result};
use crate::rat::{common_denom, format_rat, gcd_all, parse_rat, Rat};

/// A line with a primitive integer direction (first nonzero entry positive)
/// and the foot of the perpendicular from the origin as anchor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Line3 {
    direction: [BigInt; 3],
    anchor: Point3,
}

impl Line3 {
    /// Line through `point` with direction `dir`, canonicalized.
    pub fn new(point: &Point3, dir: &Point3) -> Result<Line3> {
        let comps = [&dir.x, &dir.y, &dir.z];
        let den = common_denom(comps);
        let ints: Vec<BigInt> = comps
            .iter()
            .map(|c| (*c * Rat::from_integer(den.clone())).to_integer())
            .collect();
        let g = gcd_all(ints.iter());
        if g.is_zero() {
            return Err(Error::Degenerate("line direction is zero"));
        }
        let g = if ints.iter().find(|c| !c.is_zero()).unwrap().is_negative() {
            -g
        } else {
            g
        };
        let direction = [&ints[0] / &g, &ints[1] / &g, &ints[2] / &g];
        let d = int_vec(&direction);
        let anchor = point.sub(&d.scale(&(point.dot(&d) / d.norm2())));
        Ok(Line3 { direction, anchor })
    }

    pub fn through(p: &Point3, q: &Point3) -> Result<Line3> {
        if p == q {
            return Err(Error::CoincidentPoints);
        }
        Line3::new(p, &q.sub(p))
    }

    pub fn direction(&self) -> &[BigInt; 3] {
        &self.direction
    }

    pub fn dir_vec(&self) -> Point3 {
        int_vec(&self.direction)
    }

    pub fn anchor(&self) -> &Point3 {
        &self.anchor
    }

    pub fn point_at(&self, t: &Rat) -> Point3 {
        self.anchor.add(&self.dir_vec().scale(t))
    }

    pub fn contains(&self, p: &Point3) -> bool {
        p.sub(&self.anchor).cross(&self.dir_vec()).is_zero()
    }

    pub fn translate(&self, v: &Point3) -> Line3 {
        Line3::new(&self.anchor.add(v), &self.dir_vec()).expect("direction is nonzero")
    }
}

pub(crate) fn int_vec(v: &[BigInt; 3]) -> Point3 {
    Point3::new(
        Rat::from_integer(v[0].clone()),
        Rat::from_integer(v[1].clone()),
        Rat::from_integer(v[2].clone()),
    )
}

/// Circle = supporting plane ∩ sphere(center, rho2) with center in the plane.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Circle3 {
    plane: Plane,
    center: Point3,
    rho2: Rat,
}

impl Circle3 {
    pub fn new(plane: Plane, center: Point3, rho2: Rat) -> Result<Circle3> {
        if !rho2.is_positive() {
            return Err(Error::Degenerate("circle radius is not positive"));
        }
        if !plane.contains(&center) {
            return Err(Error::Degenerate("circle center is off its plane"));
        }
        Ok(Circle3 {
            plane,
            center,
            rho2,
        })
    }

    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    pub fn center(&self) -> &Point3 {
        &self.center
    }

    pub fn rho2(&self) -> &Rat {
        &self.rho2
    }

    pub fn contains(&self, p: &Point3) -> bool {
        self.plane.contains(p) && p.dist2(&self.center) == self.rho2
    }

    pub fn translate(&self, v: &Point3) -> Circle3 {
        Circle3 {
            plane: self.plane.translate(v),
            center: self.center.add(v),
            rho2: self.rho2.clone(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Line,
    Circle,
}

impl CurveKind {
    /// Algebraic degree E.
    pub fn degree(self) -> u32 {
        match self {
            CurveKind::Line => 1,
            CurveKind::Circle => 2,
        }
    }

    /// Degrees of freedom and multiplicity (k, μ) used for the naive bound.
    pub fn dof(self) -> (u32, u32) {
        match self {
            CurveKind::Line => (2, 1),
            CurveKind::Circle => (3, 2),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Curve {
    Line(Line3),
    Circle(Circle3),
}

impl Curve {
    pub fn kind(&self) -> CurveKind {
        match self {
            Curve::Line(_) => CurveKind::Line,
            Curve::Circle(_) => CurveKind::Circle,
        }
    }

    pub fn degree(&self) -> u32 {
        self.kind().degree()
    }

    pub fn translate(&self, v: &Point3) -> Curve {
        match self {
            Curve::Line(l) => Curve::Line(l.translate(v)),
            Curve::Circle(c) => Curve::Circle(c.translate(v)),
        }
    }
}

impl From<Line3> for Curve {
    fn from(l: Line3) -> Self {
        Curve::Line(l)
    }
}

impl From<Circle3> for Curve {
    fn from(c: Circle3) -> Self {
        Curve::Circle(c)
    }
}

/// Exact point-on-curve test.
pub fn incident(p: &Point3, c: &Curve) -> bool {
    match c {
        Curve::Line(l) => l.contains(p),
        Curve::Circle(c) => c.contains(p),
    }
}

/// Number of common points of two curves.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Intersection {
    Points(u8),
    Coincident,
}

impl Intersection {
    pub fn count(self) -> Option<u8> {
        match self {
            Intersection::Points(k) => Some(k),
            Intersection::Coincident => None,
        }
    }
}

/// Counts common points from rational discriminant signs; the points
/// themselves are never constructed.
pub fn intersection_count(a: &Curve, b: &Curve) -> Intersection {
    if a == b {
        return Intersection::Coincident;
    }
    let k = match (a, b) {
        (Curve::Line(l1), Curve::Line(l2)) => line_line(l1, l2),
        (Curve::Line(l), Curve::Circle(c)) | (Curve::Circle(c), Curve::Line(l)) => line_circle(l, c),
        (Curve::Circle(c1), Curve::Circle(c2)) => circle_circle(c1, c2),
    };
    Intersection::Points(k)
}

fn line_line(l1: &Line3, l2: &Line3) -> u8 {
    if l1.direction == l2.direction {
        return 0;
    }
    let w = l2.anchor.sub(&l1.anchor);
    let n = l1.dir_vec().cross(&l2.dir_vec());
    u8::from(w.dot(&n).is_zero())
}

/// Real roots of `a t² + b t + c` with `a > 0`.
fn quadratic_roots(a: &Rat, b: &Rat, c: &Rat) -> u8 {
    let disc = b * b - Rat::from_integer(4.into()) * a * c;
    match disc.cmp(&Rat::zero()) {
        Ordering::Greater => 2,
        Ordering::Equal => 1,
        Ordering::Less => 0,
    }
}

/// `|A + t d − C|² − R` as coefficients (a, b, c) in `t`.
fn sphere_quadratic(anchor: &Point3, d: &Point3, center: &Point3, r2: &Rat) -> [Rat; 3] {
    let w = anchor.sub(center);
    [d.norm2(), Rat::from_integer(2.into()) * d.dot(&w), w.norm2() - r2]
}

fn line_circle(l: &Line3, c: &Circle3) -> u8 {
    let d = l.dir_vec();
    let along = c.plane.normal_vec().dot(&d);
    let at_anchor = c.plane.eval(&l.anchor);
    if along.is_zero() {
        if !at_anchor.is_zero() {
            return 0;
        }
        let [qa, qb, qc] = sphere_quadratic(&l.anchor, &d, &c.center, &c.rho2);
        return quadratic_roots(&qa, &qb, &qc);
    }
    let x = l.point_at(&(-at_anchor / along));
    u8::from(x.dist2(&c.center) == c.rho2)
}

fn circle_circle(c1: &Circle3, c2: &Circle3) -> u8 {
    if c1.plane == c2.plane {
        let d2 = c1.center.dist2(&c2.center);
        if d2.is_zero() {
            return 0;
        }
        let s = &d2 + &c1.rho2 - &c2.rho2;
        let disc = Rat::from_integer(4.into()) * &d2 * &c1.rho2 - &s * &s;
        return match disc.cmp(&Rat::zero()) {
            Ordering::Greater => 2,
            Ordering::Equal => 1,
            Ordering::Less => 0,
        };
    }
    let Some(line) = plane_intersection(&c1.plane, &c2.plane) else {
        return 0;
    };
    let d = line.dir_vec();
    let [a, b1, k1] = sphere_quadratic(&line.anchor, &d, &c1.center, &c1.rho2);
    let [_, b2, k2] = sphere_quadratic(&line.anchor, &d, &c2.center, &c2.rho2);
    if b1 == b2 {
        return if k1 == k2 {
            quadratic_roots(&a, &b1, &k1)
        } else {
            0
        };
    }
    let t = -(&k1 - &k2) / (&b1 - &b2);
    u8::from((&a * &t * &t + &b1 * &t + &k1).is_zero())
}

/// Common line of two non-parallel planes.
pub fn plane_intersection(p1: &Plane, p2: &Plane) -> Option<Line3> {
    if p1.is_parallel(p2) {
        return None;
    }
    let n1 = p1.normal_vec();
    let n2 = p2.normal_vec();
    let d = n1.cross(&n2);
    let sol = solve3(
        [
            [n1.x.clone(), n1.y.clone(), n1.z.clone()],
            [n2.x.clone(), n2.y.clone(), n2.z.clone()],
            [d.x.clone(), d.y.clone(), d.z.clone()],
        ],
        [p1.offset().clone(), p2.offset().clone(), Rat::zero()],
    )?;
    Line3::new(&Point3::from_array(sol), &d).ok()
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum CurveRec {
    Line {
        anchor: Point3,
        direction: [String; 3],
    },
    Circle {
        plane: Plane,
        center: Point3,
        rho2: String,
    },
}

impl Serialize for Curve {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Curve::Line(l) => CurveRec::Line {
                anchor: l.anchor.clone(),
                direction: l.direction.clone().map(|c| c.to_string()),
            },
            Curve::Circle(c) => CurveRec::Circle {
                plane: c.plane.clone(),
                center: c.center.clone(),
                rho2: format_rat(&c.rho2),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Curve {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let p = |s: &str| parse_rat(s).map_err(D::Error::custom);
        match CurveRec::deserialize(d)? {
            CurveRec::Line { anchor, direction } => {
                let [a, b, c] = &direction;
                let dir = Point3::new(p(a)?, p(b)?, p(c)?);
                Line3::new(&anchor, &dir).map(Curve::Line)
            }
            CurveRec::Circle {
                plane,
                center,
                rho2,
            } => Circle3::new(plane, center, p(&rho2)?).map(Curve::Circle),
        }
        .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::circle_through;
    use crate::rat::{int, rat};

    fn z_plane(z: i64) -> Plane {
        Plane::new([int(0), int(0), int(1)], int(z)).unwrap()
    }

    fn circle(z: i64, c: Point3, rho2: Rat) -> Curve {
        Curve::Circle(Circle3::new(z_plane(z), c, rho2).unwrap())
    }

    #[test]
    fn incidence_examples() {
        let unit = circle(0, Point3::origin(), int(1));
        assert!(incident(&Point3::from_ints(1, 0, 0), &unit));
        assert!(!incident(&Point3::from_ints(1, 1, 0), &unit));
        let c = circle_through(
            &Point3::from_ints(0, 0, 0),
            &Point3::from_ints(2, 0, 0),
            &Point3::from_ints(1, 1, 0),
        )
        .unwrap();
        assert!(incident(&Point3::from_ints(1, -1, 0), &Curve::Circle(c)));
    }

    #[test]
    fn line_canonical_form() {
        let l = Line3::new(&Point3::origin(), &Point3::from_ints(-2, 0, 0)).unwrap();
        assert_eq!(l.direction(), &[1, 0, 0].map(BigInt::from));
        assert_eq!(l.anchor(), &Point3::origin());
        let m = Line3::new(&Point3::from_ints(5, 3, 0), &Point3::new(rat(1, 3), int(0), int(0)))
            .unwrap();
        assert_eq!(m.anchor(), &Point3::from_ints(0, 3, 0));
        assert!(Line3::new(&Point3::origin(), &Point3::origin()).is_err());
        assert!(Circle3::new(z_plane(0), Point3::origin(), int(0)).is_err());
    }

    #[test]
    fn circle_pairs() {
        let a = circle(0, Point3::origin(), int(1));
        let b = circle(0, Point3::from_ints(1, 0, 0), int(1));
        assert_eq!(intersection_count(&a, &b), Intersection::Points(2));
        assert_eq!(intersection_count(&a, &a.clone()), Intersection::Coincident);
        let c = circle(1, Point3::from_ints(0, 0, 1), int(1));
        assert_eq!(intersection_count(&a, &c), Intersection::Points(0));
        // tangent pair in one plane
        let t = circle(0, Point3::from_ints(2, 0, 0), int(1));
        assert_eq!(intersection_count(&a, &t), Intersection::Points(1));
        // perpendicular planes through a common chord
        let v = circle_through(
            &Point3::from_ints(1, 0, 0),
            &Point3::from_ints(-1, 0, 0),
            &Point3::from_ints(0, 0, 1),
        )
        .unwrap();
        assert_eq!(intersection_count(&a, &Curve::Circle(v)), Intersection::Points(2));
    }

    #[test]
    fn lines_against_others() {
        let x = Curve::Line(Line3::new(&Point3::origin(), &Point3::from_ints(1, 0, 0)).unwrap());
        let y = Curve::Line(Line3::new(&Point3::origin(), &Point3::from_ints(0, 1, 0)).unwrap());
        let skew = Curve::Line(
            Line3::new(&Point3::from_ints(0, 0, 1), &Point3::from_ints(0, 1, 0)).unwrap(),
        );
        assert_eq!(intersection_count(&x, &y), Intersection::Points(1));
        assert_eq!(intersection_count(&x, &skew), Intersection::Points(0));
        let unit = circle(0, Point3::origin(), int(1));
        assert_eq!(intersection_count(&x, &unit), Intersection::Points(2));
        let z = Curve::Line(Line3::new(&Point3::from_ints(1, 0, 0), &Point3::from_ints(0, 0, 1)).unwrap());
        assert_eq!(intersection_count(&z, &unit), Intersection::Points(1));
        assert_eq!(intersection_count(&unit, &z), Intersection::Points(1));
    }

    #[test]
    fn json_round_trip() {
        let c = circle(0, Point3::new(rat(1, 2), int(0), int(0)), rat(1, 4));
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"1/2\""));
        let back: Curve = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
