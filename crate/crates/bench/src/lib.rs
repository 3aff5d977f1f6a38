//! Fixed workloads shared by the benchmarks.

use inclab_core::generators::{gen_random, gen_st_grid, GenKind, GenSpec};
use inclab_core::{CurveSet, PointSet};

/// The first `count` points and lines of a large grid.
pub fn grid_prefix(count: usize) -> (PointSet, CurveSet) {
    let (p, l) = gen_st_grid(11, 22).expect("grid parameters are valid");
    let p = p.into_vec().into_iter().take(count).collect();
    let l = CurveSet::new(l.into_vec().into_iter().take(count).collect()).expect("lines only");
    (p, l)
}

pub fn lattice_points(n: u32, range: u32, seed: u64) -> PointSet {
    let spec = GenSpec { kind: GenKind::RandomPoints, n, range, seed, ..Default::default() };
    gen_random(&spec).expect("lattice is large enough").0
}
