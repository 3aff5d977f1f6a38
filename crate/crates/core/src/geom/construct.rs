use num_traits::Zero;

use super::{Circle3, Plane, Point3};
use crate::error::{Error, Result};
use crate::rat::{rat, Rat};

/// Solves the 3×3 system `m · x = rhs` by Gaussian elimination; `None` when singular.
pub fn solve3(mut m: [[Rat; 3]; 3], mut rhs: [Rat; 3]) -> Option<[Rat; 3]> {
    for col in 0..3 {
        let pivot = (col..3).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in 0..3 {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &m[col][col];
            for c in col..3 {
                let delta = &f * &m[col][c];
                m[r][c] -= delta;
            }
            let delta = &f * &rhs[col];
            rhs[r] -= delta;
        }
    }
    let [r0, r1, r2] = rhs;
    Some([r0 / &m[0][0], r1 / &m[1][1], r2 / &m[2][2]])
}

/// The unique circle through three non-collinear points.
pub fn circle_through(p1: &Point3, p2: &Point3, p3: &Point3) -> Result<Circle3> {
    let u = p2.sub(p1);
    let v = p3.sub(p1);
    let n = u.cross(&v);
    if n.is_zero() {
        return Err(Error::CollinearPoints);
    }
    let half = rat(1, 2);
    let row = |w: &Point3| [w.x.clone(), w.y.clone(), w.z.clone()];
    let center = solve3(
        [row(&n), row(&u), row(&v)],
        [
            n.dot(p1),
            (p2.norm2() - p1.norm2()) * &half,
            (p3.norm2() - p1.norm2()) * &half,
        ],
    )
    .ok_or(Error::CollinearPoints)?;
    let center = Point3::from_array(center);
    let rho2 = p1.dist2(&center);
    Circle3::new(Plane::through(p1, &n)?, center, rho2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    #[test]
    fn circumcircles() {
        let c = circle_through(
            &Point3::from_ints(0, 0, 0),
            &Point3::from_ints(2, 0, 0),
            &Point3::from_ints(1, 1, 0),
        )
        .unwrap();
        assert_eq!(c.center(), &Point3::from_ints(1, 0, 0));
        assert_eq!(c.rho2(), &int(1));
        assert_eq!(c.plane(), &Plane::new([int(0), int(0), int(1)], int(0)).unwrap());

        let c = circle_through(
            &Point3::from_ints(1, 0, 0),
            &Point3::from_ints(0, 1, 0),
            &Point3::from_ints(0, 0, 1),
        )
        .unwrap();
        assert_eq!(c.center(), &Point3::new(rat(1, 3), rat(1, 3), rat(1, 3)));
        assert_eq!(c.rho2(), &rat(2, 3));
    }

    #[test]
    fn collinear_rejected() {
        let r = circle_through(
            &Point3::from_ints(0, 0, 0),
            &Point3::from_ints(1, 0, 0),
            &Point3::from_ints(2, 0, 0),
        );
        assert_eq!(r, Err(Error::CollinearPoints));
        let p = Point3::from_ints(1, 2, 3);
        assert_eq!(circle_through(&p, &p, &Point3::origin()), Err(Error::CollinearPoints));
    }

    #[test]
    fn linear_solve() {
        let m = [
            [int(0), int(2), int(0)],
            [int(1), int(0), int(0)],
            [int(0), int(0), int(4)],
        ];
        assert_eq!(solve3(m, [int(2), int(3), int(2)]), Some([int(3), int(1), rat(1, 2)]));
        let singular = [
            [int(1), int(1), int(0)],
            [int(2), int(2), int(0)],
            [int(0), int(0), int(1)],
        ];
        assert_eq!(solve3(singular, [int(1), int(2), int(3)]), None);
    }
}
