//! 128-bit-mantissa floating point for bound evaluation.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode};
use num_rational::Ratio;

/// Mantissa width, in bits, of every [`Real`].
pub const PRECISION: usize = 128;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

/// A non-exact real with a 128-bit mantissa. Bounds are envelopes, so this
/// is where irrational exponents are evaluated; counting never touches it.
#[derive(Clone, Debug)]
pub struct Real(BigFloat);

impl Real {
    pub fn zero() -> Self {
        Real(BigFloat::from_u64(0, PRECISION))
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn from_u64(v: u64) -> Self {
        Real(BigFloat::from_u64(v, PRECISION))
    }

    pub fn from_f64(v: f64) -> Self {
        Real(BigFloat::from_f64(v, PRECISION))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Self {
        let n = BigFloat::from_i64(*r.numer(), PRECISION);
        let d = BigFloat::from_i64(*r.denom(), PRECISION);
        Real(n.div(&d, PRECISION, RM))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive() && !self.0.is_zero()
    }

    pub fn add(&self, o: &Real) -> Real {
        Real(self.0.add(&o.0, PRECISION, RM))
    }

    pub fn sub(&self, o: &Real) -> Real {
        Real(self.0.sub(&o.0, PRECISION, RM))
    }

    pub fn mul(&self, o: &Real) -> Real {
        Real(self.0.mul(&o.0, PRECISION, RM))
    }

    pub fn div(&self, o: &Real) -> Real {
        Real(self.0.div(&o.0, PRECISION, RM))
    }

    pub fn ln(&self) -> Real {
        CONSTS.with(|cc| Real(self.0.ln(PRECISION, RM, &mut cc.borrow_mut())))
    }

    pub fn exp(&self) -> Real {
        CONSTS.with(|cc| Real(self.0.exp(PRECISION, RM, &mut cc.borrow_mut())))
    }

    pub fn log2(&self) -> Real {
        self.ln().div(&Real::from_u64(2).ln())
    }

    /// `self^e` for `self >= 0`. `0^e` is 0 for positive `e` and 1 for `e = 0`.
    pub fn pow(&self, e: Ratio<i64>) -> Real {
        if *e.numer() == 0 {
            return Real::one();
        }
        if self.is_zero() {
            return if *e.numer() > 0 {
                Real::zero()
            } else {
                Real(BigFloat::from_f64(f64::INFINITY, PRECISION))
            };
        }
        if e.is_integer() && *e.numer() > 0 {
            let mut acc = Real::one();
            for _ in 0..*e.numer() {
                acc = acc.mul(self);
            }
            return acc;
        }
        self.ln().mul(&Real::from_ratio(e)).exp()
    }

    pub fn max(self, o: Real) -> Real {
        if o > self {
            o
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        // The decimal round-trip is exact enough for reporting.
        self.to_string().parse().unwrap_or(f64::NAN)
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_inf() && !self.0.is_nan()
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            return f.write_str("0");
        }
        let s = self.0.to_string();
        // astro-float prints `2.e+0`; normalise to a form `f64::from_str` accepts.
        f.write_str(&s.replace(".e", ".0e"))
    }
}

impl From<u64> for Real {
    fn from(v: u64) -> Self {
        Real::from_u64(v)
    }
}
