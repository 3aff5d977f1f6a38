//! Deterministic instance generators: grids, inverted grids, stacked
//! copies and seeded random suites.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{circle_through, Circle3, Curve, Line3, Plane, Point3};
use crate::incidence::{CurveSet, PointSet};
use crate::rat::{int, rat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    StGrid,
    InversionCircles,
    Packing,
    RandomCircles,
    RandomLines,
    RandomPoints,
}

/// Everything needed to regenerate an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenSpec {
    pub kind: GenKind,
    /// Grid width parameter.
    pub a: u32,
    /// Grid slope-count parameter.
    pub b: u32,
    /// Number of stacked copies for packings.
    pub copies: u32,
    /// Stack line grids instead of their circle images.
    pub lines: bool,
    /// Random curve count.
    pub n: u32,
    /// Random point count.
    pub m: u32,
    /// Coordinates lie in [-range, range].
    pub range: u32,
    /// Coordinates are multiples of 1/denom.
    pub denom: u32,
    pub seed: u64,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            kind: GenKind::StGrid,
            a: 2,
            b: 2,
            copies: 1,
            lines: false,
            n: 10,
            m: 20,
            range: 10,
            denom: 1,
            seed: 0,
        }
    }
}

/// Pole used when inverting grids: it avoids every grid point and line
/// because 6t − 3s = 2 has no integer solution.
pub fn grid_pole() -> Point3 {
    Point3::new(rat(-1, 2), rat(1, 3), int(0))
}

pub fn generate(spec: &GenSpec) -> Result<(PointSet, CurveSet)> {
    match spec.kind {
        GenKind::StGrid => gen_st_grid(spec.a, spec.b),
        GenKind::InversionCircles => {
            let (p, l) = gen_st_grid(spec.a, spec.b)?;
            gen_inversion_circles(&p, &l, &grid_pole())
        }
        GenKind::Packing => {
            let grid = gen_st_grid(spec.a, spec.b)?;
            let payload = if spec.lines {
                grid
            } else {
                gen_inversion_circles(&grid.0, &grid.1, &grid_pole())?
            };
            gen_packing(spec.copies, &payload)
        }
        GenKind::RandomCircles | GenKind::RandomLines | GenKind::RandomPoints => gen_random(spec),
    }
}

/// Points `(i, j, 0)` for `i < a`, `j < 2ab` and lines `y = s·x + t` for
/// `s < b`, `t < ab`. Every line meets exactly `a` points.
pub fn gen_st_grid(a: u32, b: u32) -> Result<(PointSet, CurveSet)> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidParam("grid sizes a and b must be ≥ 1".into()));
    }
    let (a, b) = (a as i64, b as i64);
    let points = (0..a)
        .flat_map(|i| (0..2 * a * b).map(move |j| Point3::from_ints(i, j, 0)))
        .collect();
    let lines = (0..b)
        .flat_map(|s| {
            (0..a * b).map(move |t| {
                Curve::Line(
                    Line3::new(&Point3::from_ints(0, t, 0), &Point3::from_ints(1, s, 0))
                        .expect("direction is nonzero"),
                )
            })
        })
        .collect();
    Ok((PointSet::new(points), CurveSet::new(lines)?))
}

fn invert(x: &Point3, pole: &Point3) -> Point3 {
    let d = x.sub(pole);
    pole.add(&d.scale(&(int(1) / d.norm2())))
}

/// Image of a line under unit inversion about `pole`: the circle through the
/// pole whose diameter ends at the image of the foot of the perpendicular.
fn invert_line(l: &Line3, pole: &Point3) -> Result<Circle3> {
    let d = l.dir_vec();
    let rel = pole.sub(l.anchor());
    let foot = l.anchor().add(&d.scale(&(rel.dot(&d) / d.norm2())));
    let to_foot = foot.sub(pole);
    let delta2 = to_foot.norm2();
    if delta2 == int(0) {
        return Err(Error::PoleOnObject);
    }
    let center = pole.add(&to_foot.scale(&(int(1) / (&delta2 * int(2)))));
    let plane = Plane::through(pole, &d.cross(&to_foot))?;
    Circle3::new(plane, center, int(1) / (delta2 * int(4)))
}

/// Transports a point/line instance to a point/circle instance by unit
/// inversion about `pole`, preserving every incidence.
pub fn gen_inversion_circles(
    p: &PointSet,
    l: &CurveSet,
    pole: &Point3,
) -> Result<(PointSet, CurveSet)> {
    let mut circles = Vec::with_capacity(l.len());
    for c in l.curves() {
        let Curve::Line(line) = c else {
            return Err(Error::InvalidParam("inversion expects lines".into()));
        };
        if line.contains(pole) {
            return Err(Error::PoleOnObject);
        }
        circles.push(Curve::Circle(invert_line(line, pole)?));
    }
    if p.iter().any(|x| x == pole) {
        return Err(Error::PoleOnObject);
    }
    let points = p.iter().map(|x| invert(x, pole)).collect();
    Ok((PointSet::new(points), CurveSet::new(circles)?))
}

fn in_base_plane(c: &Curve) -> bool {
    let base = Plane::axis(2, int(0));
    crate::containers::plane_contains_curve(&base, c)
}

/// `copies` translates of a planar instance on the planes z = 0, 1, 2, ….
pub fn gen_packing(copies: u32, planar: &(PointSet, CurveSet)) -> Result<(PointSet, CurveSet)> {
    if copies == 0 {
        return Err(Error::InvalidParam("copies must be ≥ 1".into()));
    }
    let (p, c) = planar;
    if p.iter().any(|x| x.z != int(0)) || !c.curves().iter().all(in_base_plane) {
        return Err(Error::InvalidParam("packing payload must lie in z = 0".into()));
    }
    let mut points = Vec::with_capacity(p.len() * copies as usize);
    let mut curves = Vec::with_capacity(c.len() * copies as usize);
    for j in 0..copies as i64 {
        let shift = Point3::from_ints(0, 0, j);
        points.extend(p.iter().map(|x| x.add(&shift)));
        curves.extend(c.curves().iter().map(|x| x.translate(&shift)));
    }
    Ok((PointSet::new(points), CurveSet::new(curves)?))
}

fn lattice_point(rng: &mut ChaCha8Rng, range: i64, denom: i64) -> Point3 {
    let mut coord = || Rat::new((rng.gen_range(-range * denom..=range * denom)).into(), denom.into());
    let (x, y, z) = (coord(), coord(), coord());
    Point3::new(x, y, z)
}

fn retry_budget(target: u32) -> usize {
    100 * target as usize + 100
}

/// Seeded random instance: `m` distinct lattice points, plus `n` distinct
/// circles (or lines) through random triples (pairs) of those points.
pub fn gen_random(spec: &GenSpec) -> Result<(PointSet, CurveSet)> {
    if spec.range == 0 || spec.denom == 0 {
        return Err(Error::InvalidParam("range and denom must be ≥ 1".into()));
    }
    let (range, denom) = (spec.range as i64, spec.denom as i64);
    let lattice = (2 * range * denom + 1).pow(3) as u64;
    let want_points = match spec.kind {
        GenKind::RandomPoints => spec.n.max(spec.m),
        GenKind::RandomCircles if spec.n > 0 => spec.m.max(3),
        GenKind::RandomLines if spec.n > 0 => spec.m.max(2),
        _ => spec.m,
    };
    if want_points as u64 > lattice {
        return Err(Error::InvalidParam(format!(
            "{want_points} points requested from a lattice of {lattice}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut seen = HashSet::new();
    let mut points = Vec::new();
    let mut misses = 0;
    while points.len() < want_points as usize {
        let p = lattice_point(&mut rng, range, denom);
        if seen.insert(p.clone()) {
            points.push(p);
        } else {
            misses += 1;
            if misses > retry_budget(want_points) {
                return Err(Error::ExhaustedRetries(misses));
            }
        }
    }
    let curve_count = match spec.kind {
        GenKind::RandomPoints => 0,
        _ => spec.n as usize,
    };
    let mut curves = Vec::with_capacity(curve_count);
    let mut have = HashSet::new();
    let mut misses = 0;
    let len = points.len();
    while curves.len() < curve_count {
        let c = if spec.kind == GenKind::RandomCircles {
            let i = rng.gen_range(0..len);
            let j = rng.gen_range(0..len);
            let k = rng.gen_range(0..len);
            circle_through(&points[i], &points[j], &points[k]).ok().map(Curve::Circle)
        } else {
            let i = rng.gen_range(0..len);
            let j = rng.gen_range(0..len);
            Line3::through(&points[i], &points[j]).ok().map(Curve::Line)
        };
        match c {
            Some(c) if have.insert(c.clone()) => curves.push(c),
            _ => {
                misses += 1;
                if misses > retry_budget(spec.n) {
                    return Err(Error::ExhaustedRetries(misses));
                }
            }
        }
    }
    Ok((PointSet::new(points), CurveSet::new(curves)?))
}
