//! Brute-force incidence counting, rich points and the degrees-of-freedom
//! checks every bound assumes.

use itertools::Itertools;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::geom::{intersection_count, Curve, CurveKind, IncidenceKernel, Point3};
use crate::real::Real;

/// Distinct points in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PointSet(Vec<Point3>);

impl PointSet {
    /// Drops repeated points, keeping the first occurrence.
    pub fn new(points: Vec<Point3>) -> Self {
        let mut seen = std::collections::HashSet::with_capacity(points.len());
        PointSet(points.into_iter().filter(|p| seen.insert(p.clone())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn points(&self) -> &[Point3] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point3> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<Point3> {
        self.0
    }
}

impl FromIterator<Point3> for PointSet {
    fn from_iter<I: IntoIterator<Item = Point3>>(iter: I) -> Self {
        PointSet::new(iter.into_iter().collect())
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(PointSet::new(Vec::deserialize(d)?))
    }
}

/// Distinct curves, all lines or all circles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CurveSet(Vec<Curve>);

impl CurveSet {
    pub fn new(curves: Vec<Curve>) -> Result<Self> {
        if let Some(first) = curves.first() {
            if curves.iter().any(|c| c.kind() != first.kind()) {
                return Err(Error::MixedCurves);
            }
        }
        let mut seen = std::collections::HashSet::with_capacity(curves.len());
        Ok(CurveSet(
            curves.into_iter().filter(|c| seen.insert(c.clone())).collect(),
        ))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn curves(&self) -> &[Curve] {
        &self.0
    }

    pub fn kind(&self) -> Option<CurveKind> {
        self.0.first().map(Curve::kind)
    }

    /// Common degree E (0 for an empty set).
    pub fn degree(&self) -> u32 {
        self.kind().map_or(0, CurveKind::degree)
    }

    pub fn into_vec(self) -> Vec<Curve> {
        self.0
    }

    pub fn without(&self, index: usize) -> CurveSet {
        let mut v = self.0.clone();
        v.remove(index);
        CurveSet(v)
    }
}

impl<'de> Deserialize<'de> for CurveSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        CurveSet::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// I(P, C) with its per-point and per-curve tallies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceReport {
    pub total: u64,
    pub point_degrees: Vec<u32>,
    pub curve_degrees: Vec<u32>,
}

impl IncidenceReport {
    pub fn empty(m: usize, n: usize) -> Self {
        IncidenceReport {
            total: 0,
            point_degrees: vec![0; m],
            curve_degrees: vec![0; n],
        }
    }

    pub fn record(&mut self, point: usize, curve: usize) {
        self.total += 1;
        self.point_degrees[point] += 1;
        self.curve_degrees[curve] += 1;
    }

    /// Both degree sums equal the total.
    pub fn is_consistent(&self) -> bool {
        let sp: u64 = self.point_degrees.iter().map(|&d| d as u64).sum();
        let sc: u64 = self.curve_degrees.iter().map(|&d| d as u64).sum();
        sp == self.total && sc == self.total
    }
}

/// Ground-truth count over the full point × curve grid.
pub fn count_incidences(p: &PointSet, c: &CurveSet) -> IncidenceReport {
    let kernel = IncidenceKernel::new(p.points(), c.curves());
    let per_curve: Vec<Vec<u32>> = (0..c.len())
        .into_par_iter()
        .map(|ci| {
            (0..p.len())
                .filter(|&pi| kernel.incident(pi, ci))
                .map(|pi| pi as u32)
                .collect()
        })
        .collect();
    let mut report = IncidenceReport::empty(p.len(), c.len());
    for (ci, hits) in per_curve.iter().enumerate() {
        for &pi in hits {
            report.record(pi as usize, ci);
        }
    }
    debug_assert!(report.is_consistent());
    report
}

/// Points of `P` lying on at least `t` curves of `C`.
pub fn rich_points(p: &PointSet, c: &CurveSet, t: u32) -> Result<PointSet> {
    if t == 0 {
        return Err(Error::InvalidParam("richness threshold t must be ≥ 1".into()));
    }
    let report = count_incidences(p, c);
    Ok(PointSet(
        p.iter()
            .zip(&report.point_degrees)
            .filter(|(_, &d)| d >= t)
            .map(|(pt, _)| pt.clone())
            .collect(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DofReport {
    pub k: u32,
    pub max_curves_through_k_points: u32,
    pub max_pairwise_intersections: u32,
}

/// Largest number of probe subsets [`verify_dof`] will scan.
pub const DEFAULT_PROBE_BUDGET: u128 = 5_000_000;

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

pub fn verify_dof(c: &CurveSet, probes: &PointSet, k: u32) -> Result<DofReport> {
    verify_dof_with_budget(c, probes, k, DEFAULT_PROBE_BUDGET)
}

/// Scans every k-subset of `probes` for the most curves through all of it,
/// and every curve pair for the most common points.
pub fn verify_dof_with_budget(
    c: &CurveSet,
    probes: &PointSet,
    k: u32,
    budget: u128,
) -> Result<DofReport> {
    if k < 2 {
        return Err(Error::InvalidParam("k must be ≥ 2".into()));
    }
    let subsets = binomial(probes.len() as u128, k as u128);
    if subsets > budget {
        return Err(Error::ProbeTooLarge { subsets, budget });
    }
    let kernel = IncidenceKernel::new(probes.points(), c.curves());
    let through: Vec<Vec<usize>> = (0..probes.len())
        .map(|pi| (0..c.len()).filter(|&ci| kernel.incident(pi, ci)).collect())
        .collect();

    let max_through = (0..probes.len())
        .combinations(k as usize)
        .map(|subset| {
            let mut common = through[subset[0]].clone();
            for &pi in &subset[1..] {
                if common.is_empty() {
                    break;
                }
                common.retain(|ci| through[pi].binary_search(ci).is_ok());
            }
            common.len() as u32
        })
        .max()
        .unwrap_or(0);

    let curves = c.curves();
    let max_pair = (0..curves.len())
        .into_par_iter()
        .map(|i| {
            (i + 1..curves.len())
                .filter_map(|j| intersection_count(&curves[i], &curves[j]).count())
                .max()
                .unwrap_or(0) as u32
        })
        .max()
        .unwrap_or(0);

    Ok(DofReport {
        k,
        max_curves_through_k_points: max_through,
        max_pairwise_intersections: max_pair,
    })
}

/// Explicit Kővári–Sós–Turán envelope `μ^{1/k}·m·n^{1−1/k} + k·n`.
pub fn kst_bound(m: u64, n: u64, k: u32, mu: u32) -> Real {
    let k = k.max(1) as i64;
    let lead = Real::from_u64(mu as u64)
        .pow(Ratio::new(1, k))
        .mul(&Real::from_u64(m))
        .mul(&Real::from_u64(n).pow(Ratio::new(k - 1, k)));
    lead.add(&Real::from_u64(k as u64 * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{circle_through, Circle3, Plane};
    use crate::rat::int;

    fn unit_circles_through_e1() -> CurveSet {
        let e1 = Point3::from_ints(1, 0, 0);
        let thirds = [
            Point3::from_ints(-1, 0, 0),
            Point3::from_ints(0, 0, 1),
            Point3::from_ints(3, 1, 0),
        ];
        let curves = thirds
            .iter()
            .map(|t| Curve::Circle(circle_through(&e1, &Point3::from_ints(0, 1, 0), t).unwrap()))
            .collect();
        CurveSet::new(curves).unwrap()
    }

    #[test]
    fn counts() {
        let c = unit_circles_through_e1();
        assert_eq!(c.len(), 3);
        assert_eq!(count_incidences(&PointSet::default(), &c).total, 0);
        let p = PointSet::new(vec![Point3::from_ints(1, 0, 0)]);
        let r = count_incidences(&p, &c);
        assert_eq!(r.total, 3);
        assert!(r.is_consistent());
    }

    #[test]
    fn tangent_pair_is_two_rich() {
        let z0 = Plane::new([int(0), int(0), int(1)], int(0)).unwrap();
        let c = CurveSet::new(vec![
            Curve::Circle(Circle3::new(z0.clone(), Point3::origin(), int(1)).unwrap()),
            Curve::Circle(Circle3::new(z0, Point3::from_ints(2, 0, 0), int(1)).unwrap()),
        ])
        .unwrap();
        let p = PointSet::new(vec![Point3::from_ints(1, 0, 0), Point3::from_ints(3, 0, 0)]);
        assert_eq!(rich_points(&p, &c, 2).unwrap().points(), &[Point3::from_ints(1, 0, 0)]);
        assert_eq!(rich_points(&p, &c, 1).unwrap().len(), 2);
        assert!(rich_points(&p, &c, 3).unwrap().is_empty());
        assert!(rich_points(&p, &c, 0).is_err());
    }

    #[test]
    fn mixed_sets_rejected() {
        let z0 = Plane::new([int(0), int(0), int(1)], int(0)).unwrap();
        let circle = Curve::Circle(Circle3::new(z0, Point3::origin(), int(1)).unwrap());
        let line = Curve::Line(crate::geom::Line3::through(&Point3::origin(), &Point3::from_ints(1, 0, 0)).unwrap());
        assert_eq!(CurveSet::new(vec![circle, line]), Err(Error::MixedCurves));
    }

    #[test]
    fn kst_examples() {
        assert!((kst_bound(0, 5, 2, 1).to_f64() - 10.0).abs() < 1e-20);
        assert!((kst_bound(16, 16, 2, 1).to_f64() - 96.0).abs() < 1e-20);
        assert!(kst_bound(7, 0, 3, 2).is_zero());
    }

    #[test]
    fn dof_budget() {
        let probes: PointSet = (0..30).map(|i| Point3::from_ints(i, i * i, 0)).collect();
        let c = unit_circles_through_e1();
        let err = verify_dof_with_budget(&c, &probes, 3, 100).unwrap_err();
        assert!(matches!(err, Error::ProbeTooLarge { subsets: 4060, budget: 100 }));
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn dof_on_circles() {
        let c = unit_circles_through_e1();
        let probes = PointSet::new(vec![
            Point3::from_ints(1, 0, 0),
            Point3::from_ints(0, 1, 0),
            Point3::from_ints(-1, 0, 0),
        ]);
        let r = verify_dof(&c, &probes, 3).unwrap();
        assert_eq!(r.max_curves_through_k_points, 1);
        assert!(r.max_pairwise_intersections <= 2);
    }
}
