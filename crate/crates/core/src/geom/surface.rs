use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Point3;
use crate::error::{Error, Result};
use crate::rat::{common_denom, format_rat, gcd_all, parse_rat, Rat};

/// The plane `normal · x = offset`, stored with a primitive integer normal
/// whose first nonzero entry is positive. Equal planes compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Plane {
    normal: [BigInt; 3],
    offset: Rat,
}

impl Plane {
    /// Canonicalizes `normal · x = offset`.
    pub fn new(normal: [Rat; 3], offset: Rat) -> Result<Plane> {
        let den = common_denom(normal.iter());
        let scaled: Vec<Rat> = normal
            .iter()
            .map(|c| c * Rat::from_integer(den.clone()))
            .collect();
        let ints: Vec<BigInt> = scaled.iter().map(|c| c.to_integer()).collect();
        let g = gcd_all(ints.iter());
        if g.is_zero() {
            return Err(Error::Degenerate("plane normal is zero"));
        }
        let lead_negative = ints.iter().find(|c| !c.is_zero()).unwrap().is_negative();
        let g = if lead_negative { -g } else { g };
        let factor = Rat::new(den, g.clone());
        let normal = [&ints[0] / &g, &ints[1] / &g, &ints[2] / &g];
        Ok(Plane {
            normal,
            offset: offset * factor,
        })
    }

    pub fn through(p: &Point3, normal: &Point3) -> Result<Plane> {
        Plane::new(
            [normal.x.clone(), normal.y.clone(), normal.z.clone()],
            normal.dot(p),
        )
    }

    /// Axis-aligned plane `x_axis = value`.
    pub fn axis(axis: usize, value: Rat) -> Plane {
        let mut normal = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        normal[axis] = BigInt::from(1);
        Plane {
            normal,
            offset: value,
        }
    }

    pub fn normal(&self) -> &[BigInt; 3] {
        &self.normal
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    pub fn normal_vec(&self) -> Point3 {
        let [a, b, c] = &self.normal;
        Point3::new(
            Rat::from_integer(a.clone()),
            Rat::from_integer(b.clone()),
            Rat::from_integer(c.clone()),
        )
    }

    /// `normal · p - offset`; its sign tells the side of `p`.
    pub fn eval(&self, p: &Point3) -> Rat {
        let [a, b, c] = &self.normal;
        let mut s = -self.offset.clone();
        for (k, v) in [a, b, c].into_iter().zip(p.coords()) {
            if !k.is_zero() {
                s += v * Rat::from_integer(k.clone());
            }
        }
        s
    }

    pub fn contains(&self, p: &Point3) -> bool {
        self.eval(p).is_zero()
    }

    /// The coordinate axis this plane is perpendicular to, if any.
    pub fn axis_index(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..3).filter(|&i| !self.normal[i].is_zero()).collect();
        match nz.as_slice() {
            [i] => Some(*i),
            _ => None,
        }
    }

    pub fn is_parallel(&self, other: &Plane) -> bool {
        self.normal == other.normal
    }

    pub fn translate(&self, v: &Point3) -> Plane {
        Plane {
            normal: self.normal.clone(),
            offset: &self.offset + self.normal_vec().dot(v),
        }
    }
}

/// Sphere with rational center and squared radius.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Sphere {
    center: Point3,
    r2: Rat,
}

impl Sphere {
    pub fn new(center: Point3, r2: Rat) -> Result<Sphere> {
        if !r2.is_positive() {
            return Err(Error::Degenerate("sphere radius is not positive"));
        }
        Ok(Sphere { center, r2 })
    }

    pub fn center(&self) -> &Point3 {
        &self.center
    }

    pub fn r2(&self) -> &Rat {
        &self.r2
    }

    pub fn contains(&self, p: &Point3) -> bool {
        p.dist2(&self.center) == self.r2
    }
}

/// A container surface: the surfaces infinitely ruled by lines or circles.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Surface {
    Plane(Plane),
    Sphere(Sphere),
}

pub fn on_surface(p: &Point3, s: &Surface) -> bool {
    match s {
        Surface::Plane(pl) => pl.contains(p),
        Surface::Sphere(sp) => sp.contains(p),
    }
}

#[derive(Serialize, Deserialize)]
struct PlaneRec {
    normal: [String; 3],
    offset: String,
}

impl Serialize for Plane {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PlaneRec {
            normal: self.normal.clone().map(|c| c.to_string()),
            offset: format_rat(&self.offset),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Plane {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = PlaneRec::deserialize(d)?;
        let p = |s: &str| parse_rat(s).map_err(D::Error::custom);
        let [a, b, c] = &rec.normal;
        Plane::new([p(a)?, p(b)?, p(c)?], p(&rec.offset)?).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SphereRec {
    center: Point3,
    r2: String,
}

impl Serialize for Sphere {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SphereRec {
            center: self.center.clone(),
            r2: format_rat(&self.r2),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sphere {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = SphereRec::deserialize(d)?;
        let r2 = parse_rat(&rec.r2).map_err(D::Error::custom)?;
        Sphere::new(rec.center, r2).map_err(D::Error::custom)
    }
}
