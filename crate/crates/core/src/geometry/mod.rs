//! Planar metric primitives.
//!
//! Everything downstream works with [`Point2`] and [`PointCloud`]: finite
//! stand-ins for the compact planar sets under study. Polar coordinates are
//! first class because most of the constructions are described radially.

mod cloud;
mod hausdorff;
mod polyline;

pub use cloud::{read_csv_rows, PointCloud};
pub use hausdorff::{
    diameter, diameter_of_points, directed_hausdorff, hausdorff_distance, hausdorff_points,
    HausdorffMethod, PointIndex,
};
pub use polyline::Polyline;

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn checked(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::NonFinite(x, y))
        }
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn to_polar(self) -> PolarPoint {
        let r = self.norm();
        if r == 0.0 {
            return PolarPoint { r: 0.0, alpha: 0.0 };
        }
        PolarPoint {
            r,
            alpha: canonical_angle(self.y.atan2(self.x)),
        }
    }

    #[inline]
    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        Point2::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }
}

/// Polar coordinates `(r, alpha)` with `alpha` kept in `[0, 2π)`.
///
/// The origin is always stored as `(0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    r: f64,
    alpha: f64,
}

impl PolarPoint {
    pub fn new(r: f64, alpha: f64) -> Result<Self> {
        if !r.is_finite() || !alpha.is_finite() || r < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "polar point needs finite r >= 0 and finite alpha, got ({r}, {alpha})"
            )));
        }
        if r == 0.0 {
            return Ok(Self { r: 0.0, alpha: 0.0 });
        }
        Ok(Self {
            r,
            alpha: canonical_angle(alpha),
        })
    }

    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn to_cartesian(self) -> Point2 {
        polar_to_cartesian(self)
    }
}

/// Reduce an angle into `[0, 2π)`.
pub fn canonical_angle(alpha: f64) -> f64 {
    let a = alpha.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs.
    if a >= TAU {
        0.0
    } else {
        a
    }
}

#[inline]
pub fn polar_to_cartesian(p: PolarPoint) -> Point2 {
    Point2::new(p.r * p.alpha.cos(), p.r * p.alpha.sin())
}

/// Cartesian point from raw polar coordinates, without canonicalising.
#[inline]
pub fn polar(r: f64, alpha: f64) -> Point2 {
    Point2::new(r * alpha.cos(), r * alpha.sin())
}

#[inline]
pub fn dist(p: Point2, q: Point2) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// Distance between two polar points via the law of cosines.
///
/// Evaluated as `(r1 - r2)^2 + 4 r1 r2 sin^2(Δα / 2)`, which is the same
/// quantity as `r1^2 + r2^2 - 2 r1 r2 cos Δα` without the cancellation.
pub fn polar_dist(p: PolarPoint, q: PolarPoint) -> f64 {
    let dr = p.r - q.r;
    let s = (0.5 * (p.alpha - q.alpha)).sin();
    (dr * dr + 4.0 * p.r * q.r * s * s).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn polar_axis_points() {
        let o = polar_to_cartesian(PolarPoint::new(0.0, 0.0).unwrap());
        assert_eq!(o, Point2::ORIGIN);

        let p = polar_to_cartesian(PolarPoint::new(1.0, FRAC_PI_2).unwrap());
        assert!(p.x.abs() < 1e-15 && (p.y - 1.0).abs() < 1e-15);

        let q = polar_to_cartesian(PolarPoint::new(1.0 / 3.0, PI).unwrap());
        assert!((q.x + 1.0 / 3.0).abs() < 1e-15 && q.y.abs() < 1e-15);
    }

    #[test]
    fn polar_origin_convention() {
        let p = PolarPoint::new(0.0, 2.5).unwrap();
        assert_eq!(p.alpha(), 0.0);
        assert_eq!(Point2::ORIGIN.to_polar(), p);
        assert!(PolarPoint::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn angles_are_canonical() {
        let p = PolarPoint::new(1.0, -FRAC_PI_2).unwrap();
        assert!((p.alpha() - 3.0 * FRAC_PI_2).abs() < 1e-15);
        assert_eq!(canonical_angle(TAU), 0.0);
        assert!(canonical_angle(-1e-300) < TAU);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(dist(Point2::ORIGIN, Point2::new(3.0, 4.0)), 5.0);
        let a = PolarPoint::new(1.0, 0.0).unwrap();
        let b = PolarPoint::new(1.0, PI).unwrap();
        assert!((dist(a.to_cartesian(), b.to_cartesian()) - 2.0).abs() < 1e-15);
        // law of cosines: sqrt(2 - 2 cos(pi/3)) = 1
        let c = PolarPoint::new(1.0, FRAC_PI_3).unwrap();
        assert!((polar_dist(c, a) - 1.0).abs() < 1e-15);
        assert!((dist(c.to_cartesian(), a.to_cartesian()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_finite_points_rejected() {
        assert!(Point2::checked(f64::NAN, 0.0).is_err());
        assert!(Point2::checked(0.0, f64::INFINITY).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn cartesian_matches_cosine_formula(
            r1 in 0.0f64..10.0, a1 in 0.0f64..TAU,
            r2 in 0.0f64..10.0, a2 in 0.0f64..TAU,
        ) {
            let p = PolarPoint::new(r1, a1).unwrap();
            let q = PolarPoint::new(r2, a2).unwrap();
            let cart = dist(p.to_cartesian(), q.to_cartesian());
            let cos = polar_dist(p, q);
            prop_assert!((cart - cos).abs() <= 1e-12, "cart={cart} cos={cos}");
        }

        #[test]
        fn dist_symmetric(x1 in -5.0f64..5.0, y1 in -5.0f64..5.0, x2 in -5.0f64..5.0, y2 in -5.0f64..5.0) {
            let p = Point2::new(x1, y1);
            let q = Point2::new(x2, y2);
            prop_assert_eq!(dist(p, q), dist(q, p));
            prop_assert_eq!(dist(p, p), 0.0);
        }
    }
}
