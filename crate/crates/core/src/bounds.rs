//! Closed-form incidence bounds, partition degree selection, constant
//! calibration and log-log slope fitting.
//!
//! Every bound is a sum of monomial terms `m^a n^b q^c t^d`, optionally with
//! an `ε` added to one exponent or a guarded `log₂` factor. Exponents are kept
//! as exact fractions so they can be printed and compared without rounding.
//!
//! For the improved three-dimensional bound the term involving `q^ε` beats
//! the leading term of the general bound exactly when `q` is below `n^β` with
//! `β = (5s − 4k − 2)/(ks − 4k + 2s)`; see [`beta_threshold`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

type Q64 = Ratio<i64>;

fn q(n: i64, d: i64) -> Q64 {
    Q64::new(n, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FormulaId {
    /// Planar curves with k degrees of freedom.
    Ps,
    /// Planar curves from an s-dimensional family.
    Sz,
    /// Planar circles.
    CircPlane,
    /// Curves in space with k degrees of freedom and at most q curves per
    /// infinitely ruled surface.
    Main,
    /// The refinement of `Main` for s-dimensional families.
    Impr,
    /// Circles in space.
    Circ3,
    /// Alternative circle bound with an n·q^{2/3} term.
    Zahl,
    /// Lines in space with at most q per plane.
    GkLines,
    /// Rich points, k degrees of freedom.
    RichA,
    /// Rich points, s-dimensional family.
    RichB,
    /// Similar triangles spanned by m points.
    Tri,
}

impl FormulaId {
    pub const ALL: [FormulaId; 11] = [
        FormulaId::Ps,
        FormulaId::Sz,
        FormulaId::CircPlane,
        FormulaId::Main,
        FormulaId::Impr,
        FormulaId::Circ3,
        FormulaId::Zahl,
        FormulaId::GkLines,
        FormulaId::RichA,
        FormulaId::RichB,
        FormulaId::Tri,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaId::Ps => "PS",
            FormulaId::Sz => "SZ",
            FormulaId::CircPlane => "CIRC_PLANE",
            FormulaId::Main => "MAIN",
            FormulaId::Impr => "IMPR",
            FormulaId::Circ3 => "CIRC3",
            FormulaId::Zahl => "ZAHL",
            FormulaId::GkLines => "GK_LINES",
            FormulaId::RichA => "RICH_A",
            FormulaId::RichB => "RICH_B",
            FormulaId::Tri => "TRI",
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        FormulaId::ALL
            .into_iter()
            .find(|id| id.name() == norm)
            .ok_or_else(|| Error::InvalidParam(format!("unknown formula `{s}`")))
    }
}

/// Inputs shared by every evaluator. `m` counts points, `n` curves; for
/// [`FormulaId::Tri`] the point count `m` is the triangle-set size.
#[derive(Clone, Debug)]
pub struct BoundParams {
    pub m: u64,
    pub n: u64,
    pub q: Option<u64>,
    pub t: Option<u64>,
    pub k: u32,
    pub s: u32,
    pub mu: u32,
    pub eps: Q64,
    /// Leading constant multiplying the whole sum.
    pub a_lead: Real,
    pub c: f64,
    pub a: f64,
    pub a_prime: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            m: 0,
            n: 0,
            q: None,
            t: None,
            k: 2,
            s: 3,
            mu: 1,
            eps: q(1, 100),
            a_lead: Real::one(),
            c: 1.0,
            a: 1.0,
            a_prime: 1.0,
        }
    }
}

impl BoundParams {
    pub fn new(m: u64, n: u64) -> Self {
        BoundParams { m, n, ..Default::default() }
    }

    pub fn with_q(mut self, q: u64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_t(mut self, t: u64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_k(mut self, k: u32) -> Self {
        self.k = k;
        self
    }

    pub fn with_s(mut self, s: u32) -> Self {
        self.s = s;
        self
    }

    pub fn with_a(mut self, a: Real) -> Self {
        self.a_lead = a;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidParam(format!("k = {} must be ≥ 2", self.k)));
        }
        if self.s < 2 {
            return Err(Error::InvalidParam(format!("s = {} must be ≥ 2", self.s)));
        }
        if self.eps <= Q64::zero() || self.eps > Q64::one() {
            return Err(Error::InvalidParam(format!("ε = {} must lie in (0, 1]", self.eps)));
        }
        if !self.a_lead.is_positive() {
            return Err(Error::InvalidParam("A must be positive".into()));
        }
        if let Some(q) = self.q {
            if q > self.n {
                return Err(Error::InvalidParam(format!("q = {q} exceeds n = {}", self.n)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    M,
    N,
    Q,
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogArg {
    /// `m³/n`
    M3OverN,
    /// `m³/q`
    M3OverQ,
}

/// One summand `m^a n^b q^c t^d (+ε on one variable) · max(log₂ x, 1)^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub m: Q64,
    pub n: Q64,
    pub q: Q64,
    pub t: Q64,
    pub eps_on: Option<Var>,
    pub log: Option<(LogArg, Q64)>,
}

impl Term {
    fn mono(m: Q64, n: Q64, qe: Q64, t: Q64) -> Term {
        Term { m, n, q: qe, t, eps_on: None, log: None }
    }

    fn eps(mut self, v: Var) -> Term {
        self.eps_on = Some(v);
        self
    }

    fn log(mut self, arg: LogArg, e: Q64) -> Term {
        self.log = Some((arg, e));
        self
    }

    /// True for the bare `m` or `n` summands.
    pub fn is_linear(&self) -> bool {
        self.eps_on.is_none()
            && self.log.is_none()
            && self.q.is_zero()
            && self.t.is_zero()
            && ((self.m.is_one() && self.n.is_zero()) || (self.m.is_zero() && self.n.is_one()))
    }

    /// Nonzero exponents in m, n, q, t order (ε not included).
    pub fn exponents(&self) -> Vec<Q64> {
        [self.m, self.n, self.q, self.t].into_iter().filter(|e| !e.is_zero()).collect()
    }

    fn uses(&self, v: Var) -> bool {
        let e = match v {
            Var::M => self.m,
            Var::N => self.n,
            Var::Q => self.q,
            Var::T => self.t,
        };
        !e.is_zero() || self.eps_on == Some(v)
    }

    fn eval(&self, p: &BoundParams) -> Result<Real> {
        let mut vars = Vec::with_capacity(4);
        for (v, e) in [(Var::M, self.m), (Var::N, self.n), (Var::Q, self.q), (Var::T, self.t)] {
            let e = if self.eps_on == Some(v) { e + p.eps } else { e };
            if e.is_zero() {
                continue;
            }
            let x = match v {
                Var::M => p.m,
                Var::N => p.n,
                Var::Q => p.q.ok_or(Error::MissingParam("q"))?,
                Var::T => p.t.ok_or(Error::MissingParam("t"))?,
            };
            if x == 0 && e < Q64::zero() {
                return Err(Error::InvalidParam("t must be ≥ 1".into()));
            }
            vars.push((x, e));
        }
        if vars.iter().any(|&(x, _)| x == 0) {
            return Ok(Real::zero());
        }
        let mut acc = Real::one();
        for (x, e) in vars {
            acc = acc.mul(&Real::from_u64(x).pow(e));
        }
        if let Some((arg, e)) = self.log {
            let (num, den) = match arg {
                LogArg::M3OverN => (p.m, p.n),
                LogArg::M3OverQ => (p.m, p.q.ok_or(Error::MissingParam("q"))?),
            };
            let m = Real::from_u64(num);
            let x = m.mul(&m).mul(&m).div(&Real::from_u64(den));
            let guard = x.log2().max(Real::one());
            acc = acc.mul(&guard.pow(e));
        }
        Ok(acc)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, v, e) in [("m", Var::M, self.m), ("n", Var::N, self.n), ("q", Var::Q, self.q), ("t", Var::T, self.t)] {
            let eps = self.eps_on == Some(v);
            if e.is_zero() && !eps {
                continue;
            }
            let mut s = format!("{name}^({e}");
            if eps {
                s.push_str("+eps");
            }
            s.push(')');
            parts.push(s);
        }
        if let Some((arg, e)) = self.log {
            let a = match arg {
                LogArg::M3OverN => "m^3/n",
                LogArg::M3OverQ => "m^3/q",
            };
            parts.push(format!("log2({a})^({e})"));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        f.write_str(&parts.join("·"))
    }
}

/// The summands of formula `id` for the given `k` and `s`.
pub fn terms(id: FormulaId, k: u32, s: u32) -> Vec<Term> {
    let k = k as i64;
    let s = s as i64;
    let z = Q64::zero();
    let one = Q64::one();
    let m_lin = Term::mono(one, z, z, z);
    let n_lin = Term::mono(z, one, z, z);
    let main_lead = Term::mono(q(k, 3 * k - 2), q(3 * k - 3, 3 * k - 2), z, z);
    match id {
        FormulaId::Ps => vec![
            Term::mono(q(k, 2 * k - 1), q(2 * k - 2, 2 * k - 1), z, z),
            m_lin,
            n_lin,
        ],
        FormulaId::Sz => vec![
            Term::mono(q(2 * s, 5 * s - 4), q(5 * s - 6, 5 * s - 4), z, z).eps(Var::N),
            Term::mono(q(2, 3), q(2, 3), z, z),
            m_lin,
            n_lin,
        ],
        FormulaId::CircPlane => vec![
            Term::mono(q(2, 3), q(2, 3), z, z),
            Term::mono(q(6, 11), q(9, 11), z, z).log(LogArg::M3OverN, q(2, 11)),
            m_lin,
            n_lin,
        ],
        FormulaId::Main => {
            let e = q(k - 1, 2 * k - 1);
            vec![main_lead, Term::mono(q(k, 2 * k - 1), e, e, z), m_lin, n_lin]
        }
        FormulaId::Impr => vec![
            main_lead,
            Term::mono(q(2, 3), q(1, 3), q(1, 3), z),
            Term::mono(q(2 * s, 5 * s - 4), q(3 * s - 4, 5 * s - 4), q(2 * s - 2, 5 * s - 4), z)
                .eps(Var::Q),
            m_lin,
            n_lin,
        ],
        FormulaId::Circ3 => vec![
            Term::mono(q(3, 7), q(6, 7), z, z),
            Term::mono(q(2, 3), q(1, 3), q(1, 3), z),
            Term::mono(q(6, 11), q(5, 11), q(4, 11), z).log(LogArg::M3OverQ, q(2, 11)),
            m_lin,
            n_lin,
        ],
        FormulaId::Zahl => vec![
            Term::mono(q(1, 2), q(3, 4), z, z),
            Term::mono(q(2, 3), q(13, 15), z, z),
            Term::mono(q(1, 3), q(8, 9), z, z),
            Term::mono(z, one, q(2, 3), z),
            m_lin,
        ],
        FormulaId::GkLines => vec![
            Term::mono(q(1, 2), q(3, 4), z, z),
            Term::mono(q(2, 3), q(1, 3), q(1, 3), z),
            m_lin,
            n_lin,
        ],
        FormulaId::RichA => vec![
            Term::mono(z, q(3, 2), z, -q(3 * k - 2, 2 * k - 2)),
            Term::mono(z, one, one, -q(2 * k - 1, k - 1)),
            Term::mono(z, one, z, -one),
        ],
        FormulaId::RichB => vec![
            Term::mono(z, q(3, 2), z, -q(3 * k - 2, 2 * k - 2)),
            Term::mono(z, one, q(2 * s - 2, 3 * s - 4), -q(5 * s - 4, 3 * s - 4)).eps(Var::Q),
            Term::mono(z, one, z, -one),
        ],
        FormulaId::Tri => vec![Term::mono(q(15, 7), z, z, z)],
    }
}

/// `A ×` (sum of the terms of `id`) at `p`. Logarithms are base 2 and
/// clamped below at 1; a term whose power part vanishes contributes 0.
pub fn eval_bound(id: FormulaId, p: &BoundParams) -> Result<Real> {
    p.validate()?;
    let ts = terms(id, p.k, p.s);
    if ts.iter().any(|t| t.uses(Var::Q)) && p.q.is_none() {
        return Err(Error::MissingParam("q"));
    }
    if ts.iter().any(|t| t.uses(Var::T)) && p.t.is_none() {
        return Err(Error::MissingParam("t"));
    }
    let mut sum = Real::zero();
    for t in &ts {
        sum = sum.add(&t.eval(p)?);
    }
    Ok(sum.mul(&p.a_lead))
}

/// Crossover exponent `β = (5s − 4k − 2)/(ks − 4k + 2s)`; `None` when the
/// denominator vanishes.
pub fn beta_threshold(k: u32, s: u32) -> Option<Q64> {
    let (k, s) = (k as i64, s as i64);
    let den = k * s - 4 * k + 2 * s;
    (den != 0).then(|| q(5 * s - 4 * k - 2, den))
}

/// One line per formula listing the non-linear terms and their exact
/// exponents at the given `k`, `s`.
pub fn exponent_self_test(k: u32, s: u32) -> Vec<(FormulaId, Vec<Vec<Q64>>)> {
    FormulaId::ALL
        .into_iter()
        .map(|id| {
            let exps = terms(id, k, s)
                .iter()
                .filter(|t| !t.is_linear())
                .map(Term::exponents)
                .collect();
            (id, exps)
        })
        .collect()
}

fn to_rat(v: f64, name: &'static str) -> Result<BigRational> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidParam(format!("{name} = {v} must be positive")));
    }
    BigRational::from_float(v).ok_or(Error::InvalidParam(format!("{name} = {v}")))
}

fn rpow(r: &BigRational, e: u32) -> BigRational {
    num_traits::pow(r.clone(), e as usize)
}

/// Smallest `d ≥ 1` with `ok(d)`, starting the search near `guess`.
fn least_d(guess: f64, ok: impl Fn(u64) -> bool) -> u64 {
    let mut d = if guess.is_finite() && guess > 1.0 { guess.floor() as u64 } else { 1 };
    while d > 1 && ok(d - 1) {
        d -= 1;
    }
    while !ok(d) {
        d += 1;
    }
    d
}

/// Degree of the partitioning product. Mid range
/// `a′n^{1/k} ≤ m ≤ a·n^{3/2}` gives `⌈c·m^{k/(3k−2)}/n^{1/(3k−2)}⌉`; above it
/// `⌈c·n^{1/2}⌉`. All comparisons and ceilings are exact.
pub fn partition_degree(m: u64, n: u64, k: u32, c: f64, a: f64, a_prime: f64) -> Result<u64> {
    if k < 2 {
        return Err(Error::InvalidParam(format!("k = {k} must be ≥ 2")));
    }
    let (c_r, a_r, ap_r) = (to_rat(c, "c")?, to_rat(a, "a")?, to_rat(a_prime, "a'")?);
    let mr = BigRational::from_integer(BigInt::from(m));
    let nr = BigRational::from_integer(BigInt::from(n));
    if rpow(&mr, k) < rpow(&ap_r, k) * &nr {
        return Err(Error::BelowBase { m });
    }
    let (mf, nf) = (m as f64, n as f64);
    if rpow(&mr, 2) > rpow(&a_r, 2) * rpow(&nr, 3) {
        let target = rpow(&c_r, 2) * &nr;
        return Ok(least_d(c * nf.sqrt(), |d| {
            BigRational::from_integer(BigInt::from(d) * BigInt::from(d)) >= target
        }));
    }
    let e = 3 * k - 2;
    let target = rpow(&c_r, e) * rpow(&mr, k);
    let guess = c * mf.powf(k as f64 / e as f64) / nf.powf(1.0 / e as f64);
    Ok(least_d(guess, |d| {
        rpow(&BigRational::from_integer(BigInt::from(d)), e) * &nr >= target
    }))
}

/// Relative slack added to calibrated constants so that rounding in a later
/// evaluation can never push `A·shape` below an observed value.
const CALIBRATION_SLACK_BITS: i64 = 100;

/// Smallest leading constant (up to a 2^-100 relative slack) for which `id`
/// dominates every `(params, observed)` pair.
pub fn calibrate_a(instances: &[(BoundParams, u64)], id: FormulaId) -> Result<Real> {
    if instances.is_empty() {
        return Err(Error::EmptySuite);
    }
    let mut best = Real::zero();
    for (p, observed) in instances {
        let unit = BoundParams { a_lead: Real::one(), ..p.clone() };
        let shape = eval_bound(id, &unit)?;
        if !shape.is_positive() {
            if *observed == 0 {
                continue;
            }
            return Err(Error::InvalidParam(format!(
                "{id} vanishes at m = {}, n = {} but observed {observed}",
                p.m, p.n
            )));
        }
        best = best.max(Real::from_u64(*observed).div(&shape));
    }
    if best.is_zero() {
        return Err(Error::InvalidParam("every observation is zero".into()));
    }
    let slack = Real::one().add(&Real::from_u64(2).pow(q(-CALIBRATION_SLACK_BITS, 1)));
    Ok(best.mul(&slack))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_exponent(series: &[(f64, f64)]) -> Result<f64> {
    if series.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::InvalidParam("series values must be positive and finite".into()));
    }
    let pts: Vec<(f64, f64)> = series.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let distinct = series.windows(2).any(|w| w[0].0 != w[1].0)
        || series.iter().any(|p| p.0 != series[0].0);
    if series.len() < 2 || !distinct || sxx == 0.0 {
        return Err(Error::DegenerateSeries);
    }
    Ok(sxy / sxx)
}

/// Converts a [`Real`] to `f64`, for reporting only.
pub fn report_f64(r: &Real) -> f64 {
    r.to_f64()
}

#[doc(hidden)]
pub fn ratio_to_f64(r: Q64) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Real, b: f64, rel: f64) -> bool {
        let a = a.to_f64();
        (a - b).abs() <= rel * b.abs().max(1.0)
    }

    #[test]
    fn ps_unit() {
        let p = BoundParams::new(1, 1);
        assert!(close(&eval_bound(FormulaId::Ps, &p).unwrap(), 3.0, 1e-30));
    }

    #[test]
    fn main_k2_value() {
        let p = BoundParams::new(16, 16).with_q(4);
        let expect = 32.0 + 16.0 * 4f64.powf(1.0 / 3.0) + 32.0;
        assert!(close(&eval_bound(FormulaId::Main, &p).unwrap(), expect, 1e-14));
        assert!((expect - 89.398).abs() < 1e-3);
    }

    #[test]
    fn exponents_match_special_cases() {
        let main = terms(FormulaId::Main, 2, 3);
        assert_eq!(main[0].exponents(), vec![q(1, 2), q(3, 4)]);
        assert_eq!(main[1].exponents(), vec![q(2, 3), q(1, 3), q(1, 3)]);
        let main3 = terms(FormulaId::Main, 3, 3);
        assert_eq!(main3[0].exponents(), vec![q(3, 7), q(6, 7)]);
        let impr = terms(FormulaId::Impr, 3, 3);
        assert_eq!(impr[2].exponents(), vec![q(6, 11), q(5, 11), q(4, 11)]);
        assert_eq!(impr[2].eps_on, Some(Var::Q));
        assert_eq!(main, terms(FormulaId::GkLines, 2, 3));
    }

    #[test]
    fn missing_and_invalid() {
        let p = BoundParams::new(10, 10);
        let pq = p.clone().with_q(3);
        assert_eq!(eval_bound(FormulaId::RichA, &pq).unwrap_err(), Error::MissingParam("t"));
        assert_eq!(eval_bound(FormulaId::Main, &p).unwrap_err(), Error::MissingParam("q"));
        assert!(matches!(
            eval_bound(FormulaId::Main, &p.clone().with_q(11)),
            Err(Error::InvalidParam(_))
        ));
        assert!(eval_bound(FormulaId::RichA, &p.with_q(2).with_t(0)).is_err());
    }

    #[test]
    fn zero_q_drops_terms() {
        let p = BoundParams::new(8, 8).with_q(0).with_k(3);
        let v = eval_bound(FormulaId::Circ3, &p).unwrap();
        let expect = 8f64.powf(3.0 / 7.0) * 8f64.powf(6.0 / 7.0) + 16.0;
        assert!(close(&v, expect, 1e-14));
    }

    #[test]
    fn log_guard() {
        // m³/n < 2 clamps the log factor to 1.
        let p = BoundParams::new(1, 1);
        let v = eval_bound(FormulaId::CircPlane, &p).unwrap();
        assert!(close(&v, 4.0, 1e-30));
    }

    #[test]
    fn degree_examples() {
        // 256 > 16^{3/2}, so a = 1 selects the upper branch; a = 4 keeps it mid-range.
        assert_eq!(partition_degree(256, 16, 2, 1.0, 1.0, 1.0).unwrap(), 4);
        assert_eq!(partition_degree(256, 16, 2, 1.0, 4.0, 1.0).unwrap(), 8);
        assert_eq!(partition_degree(1000, 16, 2, 1.0, 1.0, 1.0).unwrap(), 4);
        assert_eq!(partition_degree(1000, 17, 2, 1.0, 1.0, 1.0).unwrap(), 5);
        assert_eq!(partition_degree(5000, 5000, 2, 1.0, 1.0, 1.0).unwrap(), 9);
        assert_eq!(
            partition_degree(3, 16, 2, 1.0, 1.0, 1.0).unwrap_err(),
            Error::BelowBase { m: 3 }
        );
        assert_eq!(partition_degree(4, 16, 2, 1.0, 1.0, 1.0).unwrap(), 1);
        assert_eq!(partition_degree(64, 16, 2, 1.0, 1.0, 1.0).unwrap(), 4);
        assert_eq!(partition_degree(0, 0, 2, 1.0, 1.0, 1.0).unwrap(), 1);
    }

    #[test]
    fn calibration() {
        let p = BoundParams::new(4, 4).with_q(2);
        let shape = eval_bound(FormulaId::Main, &p).unwrap();
        let obs = shape.to_f64().floor() as u64;
        let a = calibrate_a(&[(p.clone(), obs)], FormulaId::Main).unwrap();
        let dom = eval_bound(FormulaId::Main, &p.clone().with_a(a.clone())).unwrap();
        assert!(dom >= Real::from_u64(obs));
        let a2 = calibrate_a(&[(p, 2 * obs)], FormulaId::Main).unwrap();
        assert!(close(&a2.div(&a), 2.0, 1e-25));
        assert_eq!(calibrate_a(&[], FormulaId::Ps).unwrap_err(), Error::EmptySuite);
    }

    #[test]
    fn calibration_unit() {
        let p = BoundParams::new(8, 8);
        let shape = eval_bound(FormulaId::Ps, &p).unwrap();
        assert!(close(&shape, 32.0, 1e-25));
        let a = calibrate_a(&[(p, 32)], FormulaId::Ps).unwrap();
        assert!(close(&a, 1.0, 1e-25));
    }

    #[test]
    fn slopes() {
        assert!((fit_exponent(&[(10.0, 100.0), (100.0, 10000.0)]).unwrap() - 2.0).abs() < 1e-12);
        assert!(fit_exponent(&[(1.0, 5.0), (2.0, 5.0), (9.0, 5.0)]).unwrap().abs() < 1e-12);
        assert_eq!(fit_exponent(&[(3.0, 1.0), (3.0, 2.0)]).unwrap_err(), Error::DegenerateSeries);
        assert_eq!(fit_exponent(&[(3.0, 1.0)]).unwrap_err(), Error::DegenerateSeries);
    }

    #[test]
    fn beta() {
        assert_eq!(beta_threshold(3, 3), Some(q(1, 3)));
        assert_eq!(beta_threshold(4, 8), Some(q(11, 16)));
    }

    #[test]
    fn names_round_trip() {
        for id in FormulaId::ALL {
            assert_eq!(id.name().parse::<FormulaId>().unwrap(), id);
        }
        assert_eq!("gk-lines".parse::<FormulaId>().unwrap(), FormulaId::GkLines);
    }
}
