//! Integer fast path for repeated incidence tests.
//!
//! Points and curves are rescaled to common denominators once; each test is
//! then a handful of checked `i128` products. Any overflow falls back to the
//! exact rational predicate, so answers never differ from [`incident`].

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{incident, Curve, Point3};
use crate::rat::{common_denom, Rat};

type V3 = [i128; 3];

#[derive(Clone, Copy, Debug)]
struct HomPoint {
    xyz: V3,
    w: i128,
}

#[derive(Clone, Copy, Debug)]
enum CurveInts {
    /// `k · (X × d) = W · moment`
    Line { d: V3, moment: V3, k: i128 },
    /// `f · (n · X) = e · W` and `s · |cd·X − W·cn|² = r · W² · cd²`
    Circle {
        n: V3,
        e: i128,
        f: i128,
        cn: V3,
        cd: i128,
        r: i128,
        s: i128,
    },
}

fn small(v: &BigInt) -> Option<i128> {
    v.to_i128()
}

fn scaled(values: [&Rat; 3], den: &BigInt) -> Option<V3> {
    let d = Rat::from_integer(den.clone());
    let mut out = [0i128; 3];
    for (o, v) in out.iter_mut().zip(values) {
        *o = small(&(v * &d).to_integer())?;
    }
    Some(out)
}

fn hom(p: &Point3) -> Option<HomPoint> {
    let den = common_denom(p.coords());
    Some(HomPoint {
        xyz: scaled(p.coords(), &den)?,
        w: small(&den)?,
    })
}

fn curve_ints(c: &Curve) -> Option<CurveInts> {
    match c {
        Curve::Line(l) => {
            let dv = l.dir_vec();
            let m = l.anchor().cross(&dv);
            let k = common_denom(m.coords());
            Some(CurveInts::Line {
                d: [small(&l.direction()[0])?, small(&l.direction()[1])?, small(&l.direction()[2])?],
                moment: scaled(m.coords(), &k)?,
                k: small(&k)?,
            })
        }
        Curve::Circle(c) => {
            let pl = c.plane();
            let cd = common_denom(c.center().coords());
            Some(CurveInts::Circle {
                n: [small(&pl.normal()[0])?, small(&pl.normal()[1])?, small(&pl.normal()[2])?],
                e: small(pl.offset().numer())?,
                f: small(pl.offset().denom())?,
                cn: scaled(c.center().coords(), &cd)?,
                cd: small(&cd)?,
                r: small(c.rho2().numer())?,
                s: small(c.rho2().denom())?,
            })
        }
    }
}

fn mul(a: i128, b: i128) -> Option<i128> {
    a.checked_mul(b)
}

fn dot(a: &V3, b: &V3) -> Option<i128> {
    mul(a[0], b[0])?
        .checked_add(mul(a[1], b[1])?)?
        .checked_add(mul(a[2], b[2])?)
}

fn cross(a: &V3, b: &V3) -> Option<V3> {
    Some([
        mul(a[1], b[2])?.checked_sub(mul(a[2], b[1])?)?,
        mul(a[2], b[0])?.checked_sub(mul(a[0], b[2])?)?,
        mul(a[0], b[1])?.checked_sub(mul(a[1], b[0])?)?,
    ])
}

fn test_ints(p: &HomPoint, c: &CurveInts) -> Option<bool> {
    match c {
        CurveInts::Line { d, moment, k } => {
            let x = cross(&p.xyz, d)?;
            for i in 0..3 {
                if mul(*k, x[i])? != mul(p.w, moment[i])? {
                    return Some(false);
                }
            }
            Some(true)
        }
        CurveInts::Circle {
            n,
            e,
            f,
            cn,
            cd,
            r,
            s,
        } => {
            if mul(*f, dot(n, &p.xyz)?)? != mul(*e, p.w)? {
                return Some(false);
            }
            let mut diff = [0i128; 3];
            for i in 0..3 {
                diff[i] = mul(*cd, p.xyz[i])?.checked_sub(mul(p.w, cn[i])?)?;
            }
            let lhs = mul(*s, dot(&diff, &diff)?)?;
            let rhs = mul(mul(*r, mul(p.w, p.w)?)?, mul(*cd, *cd)?)?;
            Some(lhs == rhs)
        }
    }
}

/// Precomputed incidence oracle over fixed point and curve slices.
pub struct IncidenceKernel<'a> {
    points: &'a [Point3],
    curves: &'a [Curve],
    hp: Vec<Option<HomPoint>>,
    hc: Vec<Option<CurveInts>>,
}

impl<'a> IncidenceKernel<'a> {
    pub fn new(points: &'a [Point3], curves: &'a [Curve]) -> Self {
        IncidenceKernel {
            points,
            curves,
            hp: points.iter().map(hom).collect(),
            hc: curves.iter().map(curve_ints).collect(),
        }
    }

    pub fn points(&self) -> &'a [Point3] {
        self.points
    }

    pub fn curves(&self) -> &'a [Curve] {
        self.curves
    }

    /// Same answer as `incident(points[pi], curves[ci])`.
    pub fn incident(&self, pi: usize, ci: usize) -> bool {
        if let (Some(p), Some(c)) = (&self.hp[pi], &self.hc[ci]) {
            if let Some(hit) = test_ints(p, c) {
                return hit;
            }
        }
        incident(&self.points[pi], &self.curves[ci])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{circle_through, Line3};
    use crate::rat::rat;
    use proptest::prelude::*;

    fn pt(c: (i64, i64, i64, i64)) -> Point3 {
        Point3::new(rat(c.0, c.3), rat(c.1, c.3), rat(c.2, c.3))
    }

    proptest! {
        #[test]
        fn matches_exact_predicate(
            raw in prop::collection::vec((-3i64..4, -3i64..4, -2i64..3, 1i64..3), 4..12),
        ) {
            let points: Vec<Point3> = raw.iter().copied().map(pt).collect();
            let mut curves = Vec::new();
            for w in points.windows(3) {
                if let Ok(c) = circle_through(&w[0], &w[1], &w[2]) {
                    curves.push(Curve::Circle(c));
                }
                if let Ok(l) = Line3::through(&w[0], &w[1]) {
                    curves.push(Curve::Line(l));
                }
            }
            let k = IncidenceKernel::new(&points, &curves);
            for pi in 0..points.len() {
                for ci in 0..curves.len() {
                    prop_assert_eq!(k.incident(pi, ci), incident(&points[pi], &curves[ci]));
                }
            }
        }
    }

    #[test]
    fn huge_coordinates_fall_back() {
        let big = Point3::new(rat(i64::MAX, 3), rat(i64::MAX - 1, 7), rat(1, i64::MAX));
        let l = Line3::through(&big, &Point3::origin()).unwrap();
        let points = vec![big.clone(), big.scale(&rat(2, 1)), Point3::from_ints(1, 1, 1)];
        let curves = vec![Curve::Line(l)];
        let k = IncidenceKernel::new(&points, &curves);
        assert!(k.incident(0, 0));
        assert!(k.incident(1, 0));
        assert!(!k.incident(2, 0));
    }
}
