//! Divide-and-conquer incidence counting over a product of hyperplanes.
//!
//! The partitioning "polynomial" is a product of planes obtained from
//! recursive median cuts. Its sign-vector cells split the points; each curve
//! is traced exactly through the cells it crosses, and points are only tested
//! against curves that reach their cell. Points on a cut plane form the zero
//! set and are handled separately, as are curves lying inside a cut plane.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::time::Instant;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{partition_degree, BoundParams};
use crate::error::{Error, Result};
use crate::geom::{sign_root, Circle3, Curve, IncidenceKernel, Line3, Plane, Point3, Surd};
use crate::incidence::{CurveSet, IncidenceReport, PointSet};
use crate::rat::{int, sign, Rat};

/// Distinct planes whose product plays the role of the partitioning
/// polynomial; its degree `D` is the number of planes.
#[derive(Clone, Debug)]
pub struct HyperplaneProduct {
    planes: Vec<Plane>,
    rounds: u32,
    /// Axis of each plane, when every plane is axis-aligned.
    axes: Option<Vec<usize>>,
    /// Per axis, the cut values in increasing order with their plane index.
    slabs: [Vec<(Rat, usize)>; 3],
}

impl HyperplaneProduct {
    /// Drops repeated planes, keeping first occurrences.
    pub fn new(planes: Vec<Plane>, rounds: u32) -> Self {
        let mut seen = HashSet::new();
        let planes: Vec<Plane> = planes.into_iter().filter(|p| seen.insert(p.clone())).collect();
        let axes: Option<Vec<usize>> = planes.iter().map(Plane::axis_index).collect();
        let mut slabs: [Vec<(Rat, usize)>; 3] = Default::default();
        if let Some(axes) = &axes {
            for (i, (p, &axis)) in planes.iter().zip(axes).enumerate() {
                slabs[axis].push((p.offset().clone(), i));
            }
            for s in &mut slabs {
                s.sort();
            }
        }
        HyperplaneProduct { planes, rounds, axes, slabs }
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    /// D, the number of planes.
    pub fn degree(&self) -> usize {
        self.planes.len()
    }

    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    fn is_slab(&self) -> bool {
        self.axes.is_some()
    }

    /// Open cell containing `p`, or `None` on the zero set.
    fn cell_of(&self, p: &Point3) -> Option<CellId> {
        if self.is_slab() {
            let mut idx = [0u32; 3];
            for axis in 0..3 {
                let v = p.coord(axis);
                match self.slabs[axis].binary_search_by(|(cut, _)| cut.cmp(v)) {
                    Ok(_) => return None,
                    Err(i) => idx[axis] = i as u32,
                }
            }
            Some(CellId::Slab(idx))
        } else {
            let signs: Vec<i8> = self.planes.iter().map(|h| sign(&h.eval(p))).collect();
            if signs.contains(&0) {
                None
            } else {
                Some(CellId::Signs(signs.into()))
            }
        }
    }

    /// Indices of the planes through a zero-set point.
    fn planes_through(&self, p: &Point3) -> Vec<usize> {
        if self.is_slab() {
            let mut out = Vec::new();
            for axis in 0..3 {
                let v = p.coord(axis);
                if let Ok(i) = self.slabs[axis].binary_search_by(|(cut, _)| cut.cmp(v)) {
                    out.push(self.slabs[axis][i].1);
                }
            }
            out.sort_unstable();
            out
        } else {
            (0..self.planes.len()).filter(|&j| self.planes[j].contains(p)).collect()
        }
    }

    fn cell_from_signs(&self, signs: &[i8]) -> CellId {
        match &self.axes {
            Some(axes) => {
                let mut idx = [0u32; 3];
                for (&s, &axis) in signs.iter().zip(axes) {
                    if s > 0 {
                        idx[axis] += 1;
                    }
                }
                CellId::Slab(idx)
            }
            None => CellId::Signs(signs.into()),
        }
    }
}

impl Serialize for HyperplaneProduct {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Rec<'a> {
            degree: usize,
            rounds: u32,
            planes: &'a [Plane],
        }
        Rec { degree: self.degree(), rounds: self.rounds, planes: &self.planes }.serialize(s)
    }
}

/// Sign of a point against every plane of a product; any 0 marks the zero set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellKey(pub Vec<i8>);

impl CellKey {
    pub fn is_zero_set(&self) -> bool {
        self.0.contains(&0)
    }
}

pub fn classify(p: &Point3, h: &HyperplaneProduct) -> CellKey {
    CellKey(h.planes.iter().map(|plane| sign(&plane.eval(p))).collect())
}

/// Compact cell identity. With axis-aligned planes a cell is a box, named by
/// how many cuts lie below it on each axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum CellId {
    Slab([u32; 3]),
    Signs(Box<[i8]>),
}

impl CellId {
    fn label(&self) -> String {
        match self {
            CellId::Slab([x, y, z]) => format!("{x}:{y}:{z}"),
            CellId::Signs(s) => s.iter().map(|&v| if v > 0 { '+' } else { '-' }).collect(),
        }
    }
}

fn split_cell(p: &[Point3], cell: &[usize], round: u32) -> (Plane, Vec<usize>, Vec<usize>) {
    let len = cell.len();
    let half = len.div_ceil(2);
    let order: Vec<usize> = (0..3).map(|i| (round as usize + i) % 3).collect();
    let mut median: Option<(usize, Vec<usize>)> = None;
    for &axis in &order {
        let mut sorted = cell.to_vec();
        sorted.sort_by(|&a, &b| p[a].coord(axis).cmp(p[b].coord(axis)));
        let first = p[sorted[0]].coord(axis);
        if p[sorted[len - 1]].coord(axis) == first {
            continue;
        }
        let best = (0..len - 1)
            .filter(|&i| p[sorted[i]].coord(axis) < p[sorted[i + 1]].coord(axis))
            .filter(|&i| i < half && len - i - 1 <= half)
            .min_by_key(|&i| (2 * (i + 1)).abs_diff(len));
        if let Some(i) = best {
            let cut = (p[sorted[i]].coord(axis) + p[sorted[i + 1]].coord(axis)) / int(2);
            let right = sorted.split_off(i + 1);
            return (Plane::axis(axis, cut), sorted, right);
        }
        median.get_or_insert((axis, sorted));
    }
    match median {
        Some((axis, sorted)) => {
            let v = p[sorted[len / 2]].coord(axis).clone();
            let left = sorted.iter().copied().filter(|&i| *p[i].coord(axis) < v).collect();
            let right = sorted.iter().copied().filter(|&i| *p[i].coord(axis) > v).collect();
            (Plane::axis(axis, v), left, right)
        }
        None => {
            // Zero or one point: cut through it so it lands on the zero set.
            let axis = order[0];
            let v = cell.first().map_or_else(Rat::zero, |&i| p[i].coord(axis).clone());
            (Plane::axis(axis, v), Vec::new(), Vec::new())
        }
    }
}

/// Recursive median cuts: every cell with at least two points (and the root
/// in the first round) is split by an axis-aligned plane, cycling x, y, z.
/// A cut between two distinct coordinates is preferred when it keeps both
/// sides within half; otherwise the cut passes through the median point,
/// which moves to the zero set. After `r` rounds every open cell holds at
/// most ⌈m/2^r⌉ points and at most 2^r − 1 distinct planes exist.
pub fn build_partition(p: &PointSet, rounds: u32) -> HyperplaneProduct {
    let rounds = rounds.max(1);
    let pts = p.points();
    let mut cells: Vec<Vec<usize>> = vec![(0..pts.len()).collect()];
    let mut planes = Vec::new();
    for r in 0..rounds {
        let mut next = Vec::new();
        for cell in cells {
            if cell.len() < 2 && r > 0 {
                continue;
            }
            let (plane, left, right) = split_cell(pts, &cell, r);
            planes.push(plane);
            next.extend([left, right].into_iter().filter(|c| c.len() >= 2));
        }
        cells = next;
        if cells.is_empty() {
            break;
        }
    }
    HyperplaneProduct::new(planes, rounds)
}

fn dot_int(n: &[num_bigint::BigInt; 3], v: &Point3) -> Rat {
    let mut s = Rat::zero();
    for (k, x) in n.iter().zip(v.coords()) {
        if !k.is_zero() {
            s += x * Rat::from_integer(k.clone());
        }
    }
    s
}

fn line_cells(l: &Line3, h: &HyperplaneProduct) -> std::result::Result<Traced, usize> {
    let d = l.dir_vec();
    let a = l.anchor();
    // (event parameter, plane index, sign after crossing)
    let mut at: Vec<Option<(Rat, i8)>> = vec![None; h.degree()];
    let mut signs = vec![0i8; h.degree()];
    for (j, plane) in h.planes.iter().enumerate() {
        let md = dot_int(plane.normal(), &d);
        let ma = plane.eval(a);
        if md.is_zero() {
            if ma.is_zero() {
                return Err(j);
            }
            signs[j] = sign(&ma);
        } else {
            signs[j] = -sign(&md);
            at[j] = Some((-ma / &md, sign(&md)));
        }
    }
    let mut events: Vec<(Rat, usize, i8)> = Vec::with_capacity(h.degree());
    if h.is_slab() {
        // Cuts on one axis are sorted by value, so their events are already
        // monotone along the line; merging three lanes beats a full sort.
        let mut lanes: [Vec<(Rat, usize, i8)>; 3] = Default::default();
        for axis in 0..3 {
            for (_, j) in &h.slabs[axis] {
                if let Some((t, s)) = at[*j].take() {
                    lanes[axis].push((t, *j, s));
                }
            }
            let lane = &mut lanes[axis];
            if lane.len() > 1 && lane[0].0 > lane[lane.len() - 1].0 {
                lane.reverse();
            }
            debug_assert!(lane.windows(2).all(|w| w[0].0 <= w[1].0));
        }
        let mut pos = [0usize; 3];
        loop {
            let next = (0..3)
                .filter(|&i| pos[i] < lanes[i].len())
                .min_by(|&x, &y| lanes[x][pos[x]].0.cmp(&lanes[y][pos[y]].0));
            let Some(i) = next else { break };
            let (j, sg) = (lanes[i][pos[i]].1, lanes[i][pos[i]].2);
            events.push((std::mem::take(&mut lanes[i][pos[i]].0), j, sg));
            pos[i] += 1;
        }
    } else {
        events.extend(at.into_iter().enumerate().filter_map(|(j, e)| e.map(|(t, s)| (t, j, s))));
        events.sort_by(|x, y| x.0.cmp(&y.0));
    }
    let mut cells = vec![h.cell_from_signs(&signs)];
    let mut meets = Vec::new();
    let mut i = 0;
    while i < events.len() {
        let mut k = i;
        while k < events.len() && events[k].0 == events[i].0 {
            signs[events[k].1] = events[k].2;
            k += 1;
        }
        cells.push(h.cell_from_signs(&signs));
        meets.push((events[i].0.clone(), events[i..k].iter().map(|e| e.1).collect()));
        i = k;
    }
    Ok(Traced { cells, meets: Meets::Line(meets) })
}

/// A point of a circle in its own frame: `center + α·u + β·v`.
#[derive(Clone, Debug)]
struct ArcPoint {
    alpha: Surd,
    beta: Surd,
}

impl ArcPoint {
    fn half(&self) -> u8 {
        let sb = self.beta.sign();
        if sb > 0 || (sb == 0 && self.alpha.sign() > 0) {
            0
        } else {
            1
        }
    }

    /// Counter-clockwise order of directions starting at angle 0.
    fn angle_cmp(&self, other: &ArcPoint) -> Ordering {
        self.half().cmp(&other.half()).then_with(|| {
            match Surd::cross_sign(&self.alpha, &self.beta, &other.alpha, &other.beta) {
                1 => Ordering::Less,
                -1 => Ordering::Greater,
                _ => Ordering::Equal,
            }
        })
    }
}

fn circle_cells(c: &Circle3, h: &HyperplaneProduct) -> std::result::Result<Traced, usize> {
    let nrm = c.plane().normal_vec();
    let u = (0..3)
        .map(|i| {
            let mut e = [0, 0, 0];
            e[i] = 1;
            nrm.cross(&Point3::from_ints(e[0], e[1], e[2]))
        })
        .find(|u| !u.is_zero())
        .expect("nonzero normal");
    let v = nrm.cross(&u);
    let (uu, vv) = (u.norm2(), v.norm2());
    let rho2 = c.rho2();

    struct Cut {
        p: Rat,
        q: Rat,
        r: Rat,
    }
    let mut cuts = Vec::with_capacity(h.degree());
    let mut crossings: Vec<(ArcPoint, usize)> = Vec::new();
    let mut touch: Vec<(ArcPoint, usize)> = Vec::new();
    for (j, plane) in h.planes.iter().enumerate() {
        let p = dot_int(plane.normal(), &u);
        let q = dot_int(plane.normal(), &v);
        let r = -plane.eval(c.center());
        if p.is_zero() && q.is_zero() {
            if r.is_zero() {
                return Err(j);
            }
            cuts.push(Cut { p, q, r });
            continue;
        }
        // α·p + β·q = r meets α²U + β²V = ρ².
        let pts: Option<(ArcPoint, ArcPoint, bool)> = if !q.is_zero() {
            let a = &uu * &q * &q + &vv * &p * &p;
            let w = &r * &r * &p * &p * &vv * &vv - &a * (&r * &r * &vv - rho2 * &q * &q);
            if w.is_negative() {
                None
            } else {
                let mk = |s: i64| {
                    let alpha = Surd { a: &r * &p * &vv / &a, b: int(s) / &a, w: w.clone() };
                    let beta = Surd {
                        a: (&r - &p * &alpha.a) / &q,
                        b: -(&p * &alpha.b) / &q,
                        w: w.clone(),
                    };
                    ArcPoint { alpha, beta }
                };
                Some((mk(1), mk(-1), w.is_zero()))
            }
        } else {
            let alpha = &r / &p;
            let rem = (rho2 - &alpha * &alpha * &uu) / &vv;
            if rem.is_negative() {
                None
            } else {
                let mk = |s: i64| ArcPoint {
                    alpha: Surd { a: alpha.clone(), b: Rat::zero(), w: rem.clone() },
                    beta: Surd { a: Rat::zero(), b: int(s), w: rem.clone() },
                };
                Some((mk(1), mk(-1), rem.is_zero()))
            }
        };
        match pts {
            Some((x, _, true)) => touch.push((x, j)),
            Some((x, y, false)) => {
                crossings.push((x, j));
                crossings.push((y, j));
            }
            None => {}
        }
        cuts.push(Cut { p, q, r });
    }

    // A reference point on an open arc: the direction (1, k) scaled onto the
    // circle, for the first k that avoids every crossing and tangency.
    let avoid: Vec<&ArcPoint> = crossings.iter().chain(touch.iter()).map(|(x, _)| x).collect();
    let mut met: Vec<usize> = crossings.iter().chain(touch.iter()).map(|(_, j)| *j).collect();
    met.sort_unstable();
    met.dedup();
    let (dir, lambda2) = (0i64..)
        .map(|k| {
            let (da, db) = (int(1), int(k));
            let l2 = rho2 / (&da * &da * &uu + &db * &db * &vv);
            (ArcPoint { alpha: Surd::rational(da), beta: Surd::rational(db) }, l2)
        })
        .find(|(d, _)| avoid.iter().all(|x| d.angle_cmp(x) != Ordering::Equal))
        .expect("finitely many directions to avoid");
    let mut signs: Vec<i8> = cuts
        .iter()
        .map(|cut| {
            let b = &dir.alpha.a * &cut.p + &dir.beta.a * &cut.q;
            sign_root(&-cut.r.clone(), &b, &lambda2)
        })
        .collect();

    crossings.sort_by(|x, y| x.0.angle_cmp(&y.0));
    let start = crossings
        .iter()
        .position(|(x, _)| dir.angle_cmp(x) == Ordering::Less)
        .unwrap_or(0);
    crossings.rotate_left(start);
    let first = h.cell_from_signs(&signs);
    let mut cells = vec![first.clone()];
    let mut i = 0;
    while i < crossings.len() {
        let mut k = i;
        while k < crossings.len() && crossings[k].0.angle_cmp(&crossings[i].0) == Ordering::Equal {
            let j = crossings[k].1;
            signs[j] = -signs[j];
            k += 1;
        }
        cells.push(h.cell_from_signs(&signs));
        i = k;
    }
    debug_assert_eq!(cells.last(), Some(&first), "tracing a circle must close up");
    Ok(Traced { cells, meets: Meets::Planes(met) })
}

/// Where a traced curve meets the zero set.
enum Meets {
    /// Crossing parameters along a line, with the planes crossed there.
    Line(Vec<(Rat, Vec<usize>)>),
    /// Planes a circle crosses or touches.
    Planes(Vec<usize>),
}

struct Traced {
    cells: Vec<CellId>,
    meets: Meets,
}

/// Distinct open cells met by the curve, in traversal order, plus where it
/// meets the zero set.
fn traced_cells(c: &Curve, h: &HyperplaneProduct) -> std::result::Result<Traced, usize> {
    let mut t = match c {
        Curve::Line(l) => line_cells(l, h)?,
        Curve::Circle(c) => circle_cells(c, h)?,
    };
    let mut seen = HashSet::with_capacity(t.cells.len());
    t.cells.retain(|c| seen.insert(c.clone()));
    Ok(t)
}

/// Number of open cells the curve passes through. A curve inside one of the
/// planes is reported as `CurveOnZeroSet(plane index)`.
pub fn curve_cells(c: &Curve, h: &HyperplaneProduct) -> Result<usize> {
    traced_cells(c, h).map(|t| t.cells.len()).map_err(Error::CurveOnZeroSet)
}

#[derive(Clone, Debug, Default)]
pub struct PartitionOptions {
    /// Fixed number of cut rounds instead of the degree-derived one.
    pub rounds: Option<u32>,
    /// Fixed target degree D instead of the formula.
    pub degree: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellTally {
    pub cell: String,
    pub points: u64,
    pub curves: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionTrace {
    pub m: u64,
    pub n: u64,
    /// D chosen from the point and curve counts.
    pub degree_target: u64,
    /// Planes actually used.
    pub degree: u64,
    pub rounds: u32,
    pub depth: u32,
    /// ⌈m/2^rounds⌉, the open-cell capacity.
    pub cell_cap: u64,
    /// Nonempty open cells with their point count m_i and crossing-curve
    /// count n_i.
    pub cells: Vec<CellTally>,
    /// Points on the zero set.
    pub m_star: u64,
    /// Curves inside some cut plane.
    pub n_star: u64,
    /// Open cells visited per curve (0 for curves inside a plane).
    pub visits: Vec<u32>,
    /// Point-curve incidence tests performed.
    pub tests: u64,
    pub elapsed_ms: f64,
}

impl PartitionTrace {
    /// Largest allowed visit count for a curve of degree `e`.
    pub fn visit_bound(&self, e: u32) -> u64 {
        match e {
            1 => self.degree + 1,
            _ => (e as u64 * self.degree).max(1),
        }
    }

    /// Human-readable contract violations; empty when all hold.
    pub fn violations(&self, curve_degree: u32) -> Vec<String> {
        let mut out = Vec::new();
        let sum: u64 = self.cells.iter().map(|c| c.points).sum();
        if sum + self.m_star != self.m {
            out.push(format!("conservation: {} + {} != {}", sum, self.m_star, self.m));
        }
        if let Some(c) = self.cells.iter().find(|c| c.points > self.cell_cap) {
            out.push(format!("cell {} holds {} > {} points", c.cell, c.points, self.cell_cap));
        }
        let bound = self.visit_bound(curve_degree);
        if let Some((i, v)) = self.visits.iter().enumerate().find(|(_, &v)| v as u64 > bound) {
            out.push(format!("curve {i} visits {v} > {bound} cells"));
        }
        if self.tests > self.work_bound() {
            out.push(format!("{} tests exceed Σ m_i n_i + m*·n", self.tests));
        }
        out
    }

    pub fn work_bound(&self) -> u64 {
        self.cells.iter().map(|c| c.points * c.curves).sum::<u64>() + self.m_star * self.n
    }

    /// Tests performed relative to the m·n of brute force.
    pub fn work_ratio(&self) -> f64 {
        if self.m == 0 || self.n == 0 {
            0.0
        } else {
            self.tests as f64 / (self.m as f64 * self.n as f64)
        }
    }
}

pub fn partitioned_count(
    p: &PointSet,
    c: &CurveSet,
    params: &BoundParams,
) -> Result<(IncidenceReport, PartitionTrace)> {
    partitioned_count_with(p, c, params, &PartitionOptions::default())
}

/// `round(3·log₂ D)` rounds, so that 2^rounds ≈ D³, kept within
/// `1..=max(1, ⌈log₂ m⌉)`.
pub fn rounds_for(degree: u64, m: u64) -> u32 {
    let cap = if m <= 1 { 1 } else { (64 - (m - 1).leading_zeros()).max(1) };
    let want = (3.0 * (degree.max(1) as f64).log2()).round() as u32;
    want.clamp(1, cap)
}

pub fn partitioned_count_with(
    p: &PointSet,
    c: &CurveSet,
    params: &BoundParams,
    opts: &PartitionOptions,
) -> Result<(IncidenceReport, PartitionTrace)> {
    let started = Instant::now();
    let (m, n) = (p.len() as u64, c.len() as u64);
    let degree_target = match opts.degree {
        Some(d) => d.max(1),
        None => match partition_degree(m, n, params.k, params.c, params.a, params.a_prime) {
            Ok(d) => d,
            Err(Error::BelowBase { .. }) => 1,
            Err(e) => return Err(e),
        },
    };
    let rounds = opts.rounds.unwrap_or_else(|| rounds_for(degree_target, m)).max(1);
    let h = build_partition(p, rounds);

    let pts = p.points();
    let mut by_cell: HashMap<CellId, Vec<usize>> = HashMap::new();
    let mut zero: Vec<usize> = Vec::new();
    for (i, x) in pts.iter().enumerate() {
        match h.cell_of(x) {
            Some(id) => by_cell.entry(id).or_default().push(i),
            None => zero.push(i),
        }
    }
    let mut cell_ids: Vec<CellId> = by_cell.keys().cloned().collect();
    cell_ids.sort();
    let cell_index: HashMap<&CellId, usize> =
        cell_ids.iter().enumerate().map(|(i, id)| (id, i)).collect();
    let cell_points: Vec<&Vec<usize>> = cell_ids.iter().map(|id| &by_cell[id]).collect();
    let mut zero_on_plane: Vec<Vec<usize>> = vec![Vec::new(); h.degree()];
    for &i in &zero {
        for j in h.planes_through(&pts[i]) {
            zero_on_plane[j].push(i);
        }
    }

    let zero_index: HashMap<&Point3, usize> = zero.iter().map(|&i| (&pts[i], i)).collect();
    let kernel = IncidenceKernel::new(pts, c.curves());
    struct Outcome {
        visits: u32,
        inside: bool,
        cells: Vec<usize>,
        hits: Vec<usize>,
        tests: u64,
    }
    let outcomes: Vec<Outcome> = (0..c.len())
        .into_par_iter()
        .map(|ci| match traced_cells(&c.curves()[ci], &h) {
            Ok(traced) => {
                let visits = traced.cells.len() as u32;
                let cells: Vec<usize> =
                    traced.cells.iter().filter_map(|id| cell_index.get(id).copied()).collect();
                // A zero-set point can only lie on the curve where the curve
                // meets that point's plane.
                let zero_candidates: Vec<usize> = match (&traced.meets, &c.curves()[ci]) {
                    (Meets::Line(events), Curve::Line(l)) => events
                        .iter()
                        .filter(|(_, js)| js.iter().any(|&j| !zero_on_plane[j].is_empty()))
                        .filter_map(|(t, _)| zero_index.get(&l.point_at(t)).copied())
                        .collect(),
                    (Meets::Planes(js), _) => {
                        let mut v: Vec<usize> =
                            js.iter().flat_map(|&j| zero_on_plane[j].iter().copied()).collect();
                        v.sort_unstable();
                        v.dedup();
                        v
                    }
                    (Meets::Line(_), Curve::Circle(_)) => unreachable!("lines trace as lines"),
                };
                let candidates = cells
                    .iter()
                    .flat_map(|&k| cell_points[k].iter())
                    .chain(zero_candidates.iter());
                let mut tests = 0;
                let mut hits = Vec::new();
                for &pi in candidates {
                    tests += 1;
                    if kernel.incident(pi, ci) {
                        hits.push(pi);
                    }
                }
                Outcome { visits, inside: false, cells, hits, tests }
            }
            Err(j) => {
                let cand = &zero_on_plane[j];
                let hits = cand.iter().copied().filter(|&pi| kernel.incident(pi, ci)).collect();
                Outcome { visits: 0, inside: true, cells: Vec::new(), hits, tests: cand.len() as u64 }
            }
        })
        .collect();

    let mut report = IncidenceReport::empty(p.len(), c.len());
    let mut crossing = vec![0u64; cell_ids.len()];
    let mut tests = 0;
    let mut n_star = 0;
    let mut visits = Vec::with_capacity(c.len());
    for (ci, o) in outcomes.iter().enumerate() {
        for &pi in &o.hits {
            report.record(pi, ci);
        }
        for &k in &o.cells {
            crossing[k] += 1;
        }
        tests += o.tests;
        n_star += o.inside as u64;
        visits.push(o.visits);
    }
    let cells = cell_ids
        .iter()
        .zip(&cell_points)
        .zip(&crossing)
        .map(|((id, pts), &curves)| CellTally { cell: id.label(), points: pts.len() as u64, curves })
        .collect();
    let cell_cap = if rounds >= 64 { 1 } else { m.div_ceil(1u64 << rounds).max(1) };
    let trace = PartitionTrace {
        m,
        n,
        degree_target,
        degree: h.degree() as u64,
        rounds,
        depth: 1,
        cell_cap,
        cells,
        m_star: zero.len() as u64,
        n_star,
        visits,
        tests,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    debug_assert!(report.is_consistent());
    Ok((report, trace))
}
