//! Similar-triangle counting through circle loci.
//!
//! For an ordered pair (p, q) the apex points r that make pqr similar to a
//! reference triangle abc (with p→a, q→b) form a circle around the line pq.
//! Counting triangles then reduces to point-circle incidences.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::containers::compute_q;
use crate::error::{Error, Result};
use crate::geom::{Circle3, Curve, IncidenceKernel, Plane, Point3};
use crate::incidence::{CurveSet, PointSet};
use crate::rat::{int, Rat};

/// Reference triangle abc up to similarity: `k1sq = |ac|²/|ab|²` and
/// `k2sq = |bc|²/|ab|²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriangleShape {
    #[serde(with = "crate::rat::serde_str")]
    k1sq: Rat,
    #[serde(with = "crate::rat::serde_str")]
    k2sq: Rat,
}

impl TriangleShape {
    pub fn new(k1sq: Rat, k2sq: Rat) -> Result<Self> {
        let zero = int(0);
        if k1sq <= zero || k2sq <= zero {
            return Err(Error::DegenerateShape);
        }
        let s = &k1sq - &k2sq + int(1);
        if int(4) * &k1sq - &s * &s <= zero {
            return Err(Error::DegenerateShape);
        }
        Ok(TriangleShape { k1sq, k2sq })
    }

    /// Shape from squared side lengths |ab|², |ac|², |bc|².
    pub fn from_sides(ab: Rat, ac: Rat, bc: Rat) -> Result<Self> {
        if ab <= int(0) {
            return Err(Error::DegenerateShape);
        }
        TriangleShape::new(ac / &ab, bc / ab)
    }

    pub fn equilateral() -> Self {
        TriangleShape::new(int(1), int(1)).expect("equilateral is proper")
    }

    pub fn k1sq(&self) -> &Rat {
        &self.k1sq
    }

    pub fn k2sq(&self) -> &Rat {
        &self.k2sq
    }

    /// Mirror-free shape symmetry: swapping a and b keeps the shape.
    pub fn is_symmetric(&self) -> bool {
        self.k1sq == self.k2sq
    }

    /// Whether the labelled triangle (a, b, c) has this shape.
    pub fn matches(&self, a: &Point3, b: &Point3, c: &Point3) -> bool {
        let ab = a.dist2(b);
        ab != int(0) && a.dist2(c) == &self.k1sq * &ab && b.dist2(c) == &self.k2sq * &ab
    }

    /// Whether some labelling of the three points has this shape.
    pub fn matches_any(&self, p: &Point3, q: &Point3, r: &Point3) -> bool {
        [(p, q, r), (p, r, q), (q, p, r), (q, r, p), (r, p, q), (r, q, p)]
            .into_iter()
            .any(|(a, b, c)| self.matches(a, b, c))
    }
}

/// Apex locus of triangles pqr similar to the shape with p→a, q→b.
pub fn locus_circle(p: &Point3, q: &Point3, shape: &TriangleShape) -> Result<Circle3> {
    if p == q {
        return Err(Error::CoincidentPoints);
    }
    let pq = q.sub(p);
    let len = pq.norm2();
    let dp2 = &shape.k1sq * &len;
    let dq2 = &shape.k2sq * &len;
    let t = (&dp2 - &dq2 + &len) / (&len * int(2));
    let center = p.add(&pq.scale(&t));
    let rho2 = dp2 - &t * &t * &len;
    if rho2 <= int(0) {
        return Err(Error::DegenerateShape);
    }
    let plane = Plane::through(&center, &pq)?;
    Circle3::new(plane, center, rho2)
}

/// Distinct locus circles with the ordered point pairs generating each.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocusSet {
    pub circles: Vec<Circle3>,
    pub pairs: Vec<Vec<(usize, usize)>>,
}

impl LocusSet {
    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.pairs.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn curve_set(&self) -> CurveSet {
        CurveSet::new(self.circles.iter().cloned().map(Curve::Circle).collect())
            .expect("locus circles are distinct circles")
    }
}

pub fn triangle_circles(p: &PointSet, shape: &TriangleShape) -> Result<LocusSet> {
    let pts = p.points();
    let n = pts.len();
    let built: Vec<((usize, usize), Circle3)> = (0..n * n)
        .into_par_iter()
        .filter(|k| k / n != k % n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            locus_circle(&pts[i], &pts[j], shape).map(|c| ((i, j), c))
        })
        .collect::<Result<_>>()?;
    let mut index: HashMap<Circle3, usize> = HashMap::with_capacity(built.len());
    let mut set = LocusSet::default();
    for (pair, circle) in built {
        match index.get(&circle) {
            Some(&k) => set.pairs[k].push(pair),
            None => {
                index.insert(circle.clone(), set.circles.len());
                set.circles.push(circle);
                set.pairs.push(vec![pair]);
            }
        }
    }
    Ok(set)
}

/// Everything measured while counting similar triangles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimilarReport {
    /// Unordered triples similar to the shape.
    pub count: u64,
    /// Distinct locus circles.
    pub circles: u64,
    /// Point-circle incidences between the points and the locus circles.
    pub incidences: u64,
    pub max_multiplicity: u64,
}

pub fn count_similar(p: &PointSet, shape: &TriangleShape) -> Result<u64> {
    Ok(count_similar_report(p, shape)?.count)
}

/// Rebuilds every triangle from an incidence (r, γ) and a generating pair
/// (p, q) of γ, then keeps the distinct unordered triples that pass the
/// exact similarity check.
pub fn count_similar_report(p: &PointSet, shape: &TriangleShape) -> Result<SimilarReport> {
    if p.len() < 3 {
        let set = triangle_circles(p, shape)?;
        return Ok(SimilarReport {
            count: 0,
            circles: set.len() as u64,
            incidences: 0,
            max_multiplicity: set.max_multiplicity() as u64,
        });
    }
    let set = triangle_circles(p, shape)?;
    let curves: Vec<Curve> = set.circles.iter().cloned().map(Curve::Circle).collect();
    let pts = p.points();
    let kernel = IncidenceKernel::new(pts, &curves);
    let per_circle: Vec<(u64, Vec<[usize; 3]>)> = (0..curves.len())
        .into_par_iter()
        .map(|ci| {
            let on: Vec<usize> = (0..pts.len()).filter(|&r| kernel.incident(r, ci)).collect();
            let mut triples = Vec::new();
            for &r in &on {
                for &(a, b) in &set.pairs[ci] {
                    if r != a && r != b {
                        let mut t = [a, b, r];
                        t.sort_unstable();
                        triples.push(t);
                    }
                }
            }
            (on.len() as u64, triples)
        })
        .collect();
    let incidences = per_circle.iter().map(|x| x.0).sum();
    let triples: HashSet<[usize; 3]> = per_circle.into_iter().flat_map(|x| x.1).collect();
    let count = triples
        .iter()
        .filter(|t| shape.matches_any(&pts[t[0]], &pts[t[1]], &pts[t[2]]))
        .count() as u64;
    Ok(SimilarReport {
        count,
        circles: set.len() as u64,
        incidences,
        max_multiplicity: set.max_multiplicity() as u64,
    })
}

/// Cubic oracle: tests every unordered triple under all six labellings.
pub fn count_similar_bruteforce(p: &PointSet, shape: &TriangleShape) -> u64 {
    let pts = p.points();
    let n = pts.len();
    let d2: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| pts[i].dist2(&pts[j])).collect()).collect();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut hits = 0u64;
            for j in i + 1..n {
                for k in j + 1..n {
                    let labelled = [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)];
                    if labelled.iter().any(|&(a, b, c)| {
                        d2[a][c] == &shape.k1sq * &d2[a][b] && d2[b][c] == &shape.k2sq * &d2[a][b]
                    }) {
                        hits += 1;
                    }
                }
            }
            hits
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QLinear {
    pub q: u64,
    pub bound: u64,
    pub pass: bool,
}

/// Container parameter of the locus circles against the linear bound 3n − 1.
pub fn verify_q_linear(p: &PointSet, shape: &TriangleShape) -> Result<QLinear> {
    let set = triangle_circles(p, shape)?;
    let q = compute_q(&set.curve_set()).q as u64;
    let bound = (3 * p.len() as u64).saturating_sub(1);
    Ok(QLinear { q, bound, pass: q <= bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use proptest::prelude::*;

    fn square() -> PointSet {
        [(0, 0), (1, 0), (1, 1), (0, 1)].iter().map(|&(x, y)| Point3::from_ints(x, y, 0)).collect()
    }

    fn unit_vectors() -> PointSet {
        PointSet::new(vec![Point3::from_ints(1, 0, 0), Point3::from_ints(0, 1, 0), Point3::from_ints(0, 0, 1)])
    }

    #[test]
    fn equilateral_locus() {
        let c = locus_circle(&Point3::origin(), &Point3::from_ints(1, 0, 0), &TriangleShape::equilateral()).unwrap();
        assert_eq!(c.plane(), &Plane::axis(0, rat(1, 2)));
        assert_eq!(c.center(), &Point3::new(rat(1, 2), int(0), int(0)));
        assert_eq!(c.rho2(), &rat(3, 4));
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(TriangleShape::new(int(4), int(1)).unwrap_err(), Error::DegenerateShape);
        let p = Point3::from_ints(1, 2, 3);
        assert_eq!(locus_circle(&p, &p, &TriangleShape::equilateral()).unwrap_err(), Error::CoincidentPoints);
        assert!(TriangleShape::new(int(0), int(1)).is_err());
    }

    #[test]
    fn two_points() {
        let p = PointSet::new(vec![Point3::origin(), Point3::from_ints(1, 0, 0)]);
        let set = triangle_circles(&p, &TriangleShape::equilateral()).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.max_multiplicity(), 2);
        assert_eq!(count_similar(&p, &TriangleShape::equilateral()).unwrap(), 0);
        let ql = verify_q_linear(&p, &TriangleShape::equilateral()).unwrap();
        assert_eq!(ql, QLinear { q: 1, bound: 5, pass: true });
    }

    #[test]
    fn fixtures() {
        let eq = TriangleShape::equilateral();
        assert_eq!(count_similar(&unit_vectors(), &eq).unwrap(), 1);
        assert_eq!(count_similar_bruteforce(&unit_vectors(), &eq), 1);
        let right = TriangleShape::from_sides(int(1), int(1), int(2)).unwrap();
        assert_eq!(count_similar(&square(), &right).unwrap(), 4);
        assert_eq!(count_similar_bruteforce(&square(), &right), 4);
        let ql = verify_q_linear(&square(), &right).unwrap();
        assert!(ql.pass && ql.bound == 11);
    }

    #[test]
    fn collinear_never_matches() {
        let line: PointSet = (0..6).map(|i| Point3::from_ints(i, 2 * i, 0)).collect();
        for shape in [TriangleShape::equilateral(), TriangleShape::new(int(1), int(2)).unwrap()] {
            assert_eq!(count_similar_bruteforce(&line, &shape), 0);
            assert_eq!(count_similar(&line, &shape).unwrap(), 0);
        }
    }

    fn small_points() -> impl Strategy<Value = PointSet> {
        prop::collection::vec((-3i64..=3, -3i64..=3, -1i64..=1), 3..9)
            .prop_map(|v| v.into_iter().map(|(x, y, z)| Point3::from_ints(x, y, z)).collect())
    }

    fn shapes() -> impl Strategy<Value = TriangleShape> {
        prop::sample::select(vec![(1, 1, 1), (1, 1, 2), (1, 2, 5), (2, 5, 5), (1, 2, 3)])
            .prop_map(|(a, b, c)| TriangleShape::from_sides(int(a), int(b), int(c)).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn oracle_equivalence(p in small_points(), shape in shapes()) {
            prop_assert_eq!(count_similar(&p, &shape).unwrap(), count_similar_bruteforce(&p, &shape));
        }

        #[test]
        fn locus_soundness(p in small_points(), shape in shapes()) {
            let pts = p.points();
            for i in 0..pts.len() {
                for j in 0..pts.len() {
                    if i == j { continue; }
                    let c = Curve::Circle(locus_circle(&pts[i], &pts[j], &shape).unwrap());
                    for (k, r) in pts.iter().enumerate() {
                        if k == i || k == j { continue; }
                        prop_assert_eq!(crate::geom::incident(r, &c), shape.matches(&pts[i], &pts[j], r));
                    }
                }
            }
        }

        #[test]
        fn symmetric_shapes_swap(a in (-5i64..5, -5i64..5, -5i64..5), b in (-5i64..5, -5i64..5, -5i64..5), k in 1i64..4) {
            let (p, q) = (Point3::from_ints(a.0, a.1, a.2), Point3::from_ints(b.0, b.1, b.2));
            prop_assume!(p != q);
            let shape = TriangleShape::new(int(k), int(k)).unwrap();
            prop_assert_eq!(locus_circle(&p, &q, &shape).unwrap(), locus_circle(&q, &p, &shape).unwrap());
        }

        #[test]
        fn adding_points_never_decreases(p in small_points(), extra in (-3i64..=3, -3i64..=3, -1i64..=1), shape in shapes()) {
            let before = count_similar(&p, &shape).unwrap();
            let mut v = p.into_vec();
            v.push(Point3::from_ints(extra.0, extra.1, extra.2));
            let after = count_similar(&PointSet::new(v), &shape).unwrap();
            prop_assert!(after >= before);
        }

        #[test]
        fn multiplicity_and_q(p in small_points(), shape in shapes()) {
            let set = triangle_circles(&p, &shape).unwrap();
            prop_assert!(set.len() <= p.len() * (p.len() - 1));
            let ql = verify_q_linear(&p, &shape).unwrap();
            prop_assert!(ql.pass, "q = {} > {}", ql.q, ql.bound);
        }
    }
}
