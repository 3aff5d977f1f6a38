//! Exact signs of expressions with square roots of rationals.

use num_traits::Zero;

use crate::rat::{sign, Rat};

/// Sign of `a + b·√x` for `x ≥ 0`.
pub fn sign_root(a: &Rat, b: &Rat, x: &Rat) -> i8 {
    let sa = sign(a);
    if b.is_zero() || x.is_zero() {
        return sa;
    }
    let sb = sign(b);
    if sa == 0 || sa == sb {
        return if sa == 0 { sb } else { sa };
    }
    // opposite signs: compare a² with b²x
    match (a * a).cmp(&(b * b * x)) {
        std::cmp::Ordering::Greater => sa,
        std::cmp::Ordering::Less => sb,
        std::cmp::Ordering::Equal => 0,
    }
}

/// Sign of `c0 + c1·√x + c2·√y + c3·√x·√y` for `x, y ≥ 0`.
pub fn sign_root2(c: [&Rat; 4], x: &Rat, y: &Rat) -> i8 {
    let [c0, c1, c2, c3] = c;
    // P + Q·√y with P = c0 + c1√x, Q = c2 + c3√x
    let sp = sign_root(c0, c1, x);
    if y.is_zero() {
        return sp;
    }
    let sq = sign_root(c2, c3, x);
    if sq == 0 || sp == sq {
        return sp;
    }
    if sp == 0 {
        return sq;
    }
    // P² − y·Q² = (c0² + c1²x − y(c2² + c3²x)) + 2(c0c1 − y·c2c3)√x
    let two = Rat::from_integer(2.into());
    let rational = c0 * c0 + c1 * c1 * x - y * (c2 * c2 + c3 * c3 * x);
    let radical = two * (c0 * c1 - y * c2 * c3);
    match sign_root(&rational, &radical, x) {
        1 => sp,
        -1 => sq,
        _ => 0,
    }
}

/// A number `a + b·√w` with rational `a, b` and `w ≥ 0`.
#[derive(Clone, Debug)]
pub struct Surd {
    pub a: Rat,
    pub b: Rat,
    pub w: Rat,
}

impl Surd {
    pub fn rational(a: Rat) -> Surd {
        Surd {
            a,
            b: Rat::zero(),
            w: Rat::zero(),
        }
    }

    pub fn sign(&self) -> i8 {
        sign_root(&self.a, &self.b, &self.w)
    }

    /// Sign of `self − other`.
    pub fn cmp_sign(&self, other: &Surd) -> i8 {
        let c0 = &self.a - &other.a;
        let neg = -other.b.clone();
        let zero = Rat::zero();
        sign_root2([&c0, &self.b, &neg, &zero], &self.w, &other.w)
    }

    /// Sign of `self·p − other·q` for surds sharing nothing in particular.
    pub fn cross_sign(s1: &Surd, t1: &Surd, s2: &Surd, t2: &Surd) -> i8 {
        // s1, t1 share radicand x; s2, t2 share radicand y.
        debug_assert!(s1.w == t1.w || s1.b.is_zero() || t1.b.is_zero());
        debug_assert!(s2.w == t2.w || s2.b.is_zero() || t2.b.is_zero());
        let x = if s1.b.is_zero() { &t1.w } else { &s1.w };
        let y = if s2.b.is_zero() { &t2.w } else { &s2.w };
        // s1·t2 − s2·t1 with s1 = a1 + b1√x, t1 = c1 + d1√x, s2 = a2 + b2√y, t2 = c2 + d2√y
        let c0 = &s1.a * &t2.a - &s2.a * &t1.a;
        let cx = &s1.b * &t2.a - &s2.a * &t1.b;
        let cy = &s1.a * &t2.b - &s2.b * &t1.a;
        let cxy = &s1.b * &t2.b - &s2.b * &t1.b;
        sign_root2([&c0, &cx, &cy, &cxy], x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use proptest::prelude::*;

    fn approx(c: [i64; 4], x: i64, y: i64) -> f64 {
        let (x, y) = (x as f64, y as f64);
        c[0] as f64 + c[1] as f64 * x.sqrt() + c[2] as f64 * y.sqrt() + c[3] as f64 * (x * y).sqrt()
    }

    #[test]
    fn exact_zeros() {
        // 2 − √4 = 0
        assert_eq!(sign_root(&int(2), &int(-1), &int(4)), 0);
        // √2 + √8 − 3√2 = 0
        assert_eq!(sign_root2([&int(0), &int(-2), &int(1), &int(0)], &int(2), &int(8)), 0);
        // 1 − √2·√(1/2) = 0
        assert_eq!(sign_root2([&int(1), &int(0), &int(0), &int(-1)], &int(2), &rat(1, 2)), 0);
        assert_eq!(sign_root(&int(-3), &int(2), &int(2)), -1);
    }

    proptest! {
        #[test]
        fn agrees_with_floating_point_away_from_zero(
            c in prop::array::uniform4(-20i64..20),
            x in 0i64..50,
            y in 0i64..50,
        ) {
            let f = approx(c, x, y);
            prop_assume!(f.abs() > 1e-6);
            let cs = c.map(int);
            let s = sign_root2([&cs[0], &cs[1], &cs[2], &cs[3]], &int(x), &int(y));
            prop_assert_eq!(s, if f > 0.0 { 1 } else { -1 });
        }
    }
}
