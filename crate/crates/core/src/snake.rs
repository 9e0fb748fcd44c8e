//! The snake: concentric three-quarter circles `O_n` of radius `1/n` joined
//! by radial segments `I_n`, accumulating at the origin.
//!
//! It carries a weak contraction `f` that shifts `O_n ∪ I_n` onto
//! `O_{n+2} ∪ I_{n+2}`, and finitely many honest contractions `g_i` that
//! cover the free initial arc `K = O_1 ∪ I_1 ∪ O_2 ∪ I_2`. The arc has
//! infinite length, which is what keeps it from being an IFS attractor.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{canonical_angle, polar, Point2, PointCloud, PolarPoint, Polyline};
use crate::ifs::{estimate_lipschitz, expect_params, int_param, MapSpec, MapTable, PlaneMap};

/// Slack used when deciding whether a point lies on a piece of the snake.
pub const DOMAIN_TOL: f64 = 1e-9;
/// Sampled Lipschitz bound the cover maps must stay under.
pub const COVER_LIP_LIMIT: f64 = 0.95;

const ARC_SPAN: f64 = 1.5 * PI;
/// Arc-length coordinates where the pieces of `K` start.
const S_I1: f64 = ARC_SPAN;
const S_O2: f64 = S_I1 + 0.5;
const S_I2: f64 = S_O2 + ARC_SPAN / 2.0;
/// Length of `K = O_1 ∪ I_1 ∪ O_2 ∪ I_2`.
pub const K_LENGTH: f64 = S_I2 + 1.0 / 6.0;

/// Angle of the radial segment `I_n`.
pub fn segment_angle(n: usize) -> f64 {
    (n % 2) as f64 * FRAC_PI_2
}

#[derive(Clone, Debug, Serialize)]
pub struct SnakeSpace {
    pub depth: usize,
    pub cloud: PointCloud,
    pub angular_step: f64,
    pub radial_step: f64,
}

impl SnakeSpace {
    /// Points labelled `O_n` or `I_n`.
    pub fn component(&self, n: usize) -> Result<PointCloud> {
        let (o, i) = (format!("O_{n}"), format!("I_{n}"));
        self.cloud.filter_labels(|l| l == o || l == i)
    }
}

/// Angles sampled on every `O_n`: a uniform grid on `[π/2, 2π]` whose
/// interval count is a multiple of 6, so that `π` and `3π/2` are grid points.
pub fn arc_angles(angular_step: f64) -> Vec<f64> {
    let k = ((ARC_SPAN / angular_step).ceil() as usize)
        .max(1)
        .div_ceil(6)
        * 6;
    (0..=k)
        .map(|j| FRAC_PI_2 + ARC_SPAN * j as f64 / k as f64)
        .collect()
}

/// Radii sampled on `I_n`, from `1/n` down to `1/(n+1)`.
pub fn segment_radii(n: usize, radial_step: f64) -> Vec<f64> {
    let (hi, lo) = (1.0 / n as f64, 1.0 / (n + 1) as f64);
    let k = (((hi - lo) / radial_step).ceil() as usize).max(1);
    (0..=k)
        .map(|j| hi + (lo - hi) * j as f64 / k as f64)
        .collect()
}

pub fn build_snake(depth: usize, angular_step: f64, radial_step: f64) -> Result<SnakeSpace> {
    if depth == 0 {
        return Err(Error::InvalidArgument("snake depth must be >= 1".into()));
    }
    for (name, v) in [("angular_step", angular_step), ("radial_step", radial_step)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "{name} must be > 0, got {v}"
            )));
        }
    }
    let angles = arc_angles(angular_step);
    let mut points = vec![Point2::ORIGIN];
    let mut labels = vec!["origin".to_string()];
    for n in 1..=depth {
        let r = 1.0 / n as f64;
        let o = format!("O_{n}");
        for &a in &angles {
            points.push(polar(r, a));
            labels.push(o.clone());
        }
        let i = format!("I_{n}");
        let a = segment_angle(n);
        for r in segment_radii(n, radial_step) {
            points.push(polar(r, a));
            labels.push(i.clone());
        }
    }
    let cloud = PointCloud::labeled(points, labels, angular_step.max(radial_step))?;
    Ok(SnakeSpace {
        depth,
        cloud,
        angular_step,
        radial_step,
    })
}

/// The radial profile `f̃`: piecewise linear, mapping `[1/(n+1), 1/n]`
/// affinely onto `[1/(n+3), 1/(n+2)]`, and `0 ↦ 0`.
pub fn radial_profile(r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(
            "radial_profile",
            format!("r = {r} is outside [0, 1]"),
        ));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    // floor(1/r) picks the higher branch at the shared endpoints r = 1/n.
    let n = (1.0 / r).floor();
    Ok((r * n * (n + 1.0) + 2.0) / ((n + 2.0) * (n + 3.0)))
}

/// `f(r, α) = (f̃(r), α)`.
pub fn snake_weak_map(p: PolarPoint) -> Result<PolarPoint> {
    let r = p.r();
    let r = if r > 1.0 && r <= 1.0 + DOMAIN_TOL {
        1.0
    } else {
        r
    };
    PolarPoint::new(radial_profile(r)?, p.alpha())
}

/// The weak contraction `f` as a plane map. The angle is carried through
/// unchanged, so images of sampled arcs reuse the same angle grid.
#[derive(Clone, Copy, Debug, Default)]
pub struct SnakeMap;

impl PlaneMap for SnakeMap {
    fn apply(&self, p: Point2) -> Result<Point2> {
        let r = p.norm();
        if r == 0.0 {
            return Ok(Point2::ORIGIN);
        }
        let rr = if r > 1.0 && r <= 1.0 + DOMAIN_TOL {
            1.0
        } else {
            r
        };
        let scale = radial_profile(rr).map_err(|_| {
            Error::domain("snake_f", format!("({}, {}) has radius {r} > 1", p.x, p.y))
        })? / r;
        Ok(Point2::new(p.x * scale, p.y * scale))
    }

    fn name(&self) -> String {
        "snake_f".into()
    }
}

/// Arc-length coordinate on `K` of the retraction of `p`: points of `K` keep
/// their position, everything else collapses to the junction `(1/3, 0)`.
pub fn retraction_coordinate(p: Point2) -> Result<f64> {
    let pp = p.to_polar();
    let (r, a) = (pp.r(), pp.alpha());
    let tol = DOMAIN_TOL;
    if r <= 1.0 / 3.0 + tol {
        return Ok(K_LENGTH);
    }
    // Angles of the O_n arcs run over [π/2, 2π]; 2π canonicalises to ~0.
    let arc_angle = if a <= tol {
        Some(a + TAU)
    } else if a >= FRAC_PI_2 - tol {
        Some(a.max(FRAC_PI_2))
    } else {
        None
    };
    let near = |x: f64, y: f64| (x - y).abs() <= tol;
    if near(r, 1.0) {
        if let Some(a) = arc_angle {
            return Ok((TAU - a).clamp(0.0, S_I1));
        }
    }
    if near(a, FRAC_PI_2) && (0.5 - tol..=1.0 + tol).contains(&r) {
        return Ok(S_I1 + (1.0 - r).clamp(0.0, 0.5));
    }
    if near(r, 0.5) {
        if let Some(a) = arc_angle {
            return Ok(S_O2 + ((a - FRAC_PI_2) / 2.0).clamp(0.0, ARC_SPAN / 2.0));
        }
    }
    if (a <= tol || a >= TAU - tol) && r <= 0.5 + tol {
        return Ok(S_I2 + (0.5 - r).clamp(0.0, 1.0 / 6.0));
    }
    Err(Error::domain(
        "snake_cover",
        format!("({}, {}) is not on the snake", p.x, p.y),
    ))
}

/// Arc-length parametrisation of `K`, starting at the free end `(1, 0)`.
pub fn arc_point(s: f64) -> Point2 {
    let s = s.clamp(0.0, K_LENGTH);
    if s <= S_I1 {
        polar(1.0, TAU - s)
    } else if s <= S_O2 {
        polar(1.0 - (s - S_I1), FRAC_PI_2)
    } else if s <= S_I2 {
        polar(0.5, FRAC_PI_2 + 2.0 * (s - S_O2))
    } else {
        polar(0.5 - (s - S_I2), 0.0)
    }
}

/// Cover map `g_i` (1-based `i` out of `m`): retract onto `K`, then map `K`
/// affinely in arc length onto its `i`-th piece of length `|K|/m`.
#[derive(Clone, Copy, Debug)]
pub struct SnakeCover {
    pub i: usize,
    pub m: usize,
}

impl SnakeCover {
    pub fn new(i: usize, m: usize) -> Result<Self> {
        if m == 0 || i == 0 || i > m {
            return Err(Error::domain(
                "snake_cover",
                format!("need 1 <= i <= m, got i = {i}, m = {m}"),
            ));
        }
        Ok(Self { i, m })
    }
}

impl PlaneMap for SnakeCover {
    fn apply(&self, p: Point2) -> Result<Point2> {
        let s = retraction_coordinate(p)?;
        let t = ((self.i - 1) as f64 * K_LENGTH + s) / self.m as f64;
        Ok(arc_point(t))
    }

    fn name(&self) -> String {
        format!("snake_cover({},{})", self.i, self.m)
    }
}

/// Registers `snake_f` and `snake_cover(i, m)`.
pub fn register_maps(table: &mut MapTable) {
    table.register("snake_f", |params| {
        expect_params("snake_f", params, 0)?;
        Ok(Arc::new(SnakeMap) as Arc<dyn PlaneMap>)
    });
    table.register("snake_cover", |params| {
        expect_params("snake_cover", params, 2)?;
        let i = int_param("snake_cover", params, 0)?;
        let m = int_param("snake_cover", params, 1)?;
        Ok(Arc::new(SnakeCover::new(i, m)?) as Arc<dyn PlaneMap>)
    });
}

pub fn cover_specs(m: usize) -> Vec<MapSpec> {
    (1..=m)
        .map(|i| MapSpec::named("snake_cover", &[i as f64, m as f64]))
        .collect()
}

/// Largest sampled Lipschitz ratio over `g_1, ..., g_m` on the snake.
pub fn cover_sup_ratio(space: &SnakeSpace, m: usize, pair_budget: usize, seed: u64) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for i in 1..=m {
        let g = SnakeCover::new(i, m)?;
        let rep = estimate_lipschitz(&g, &space.cloud, pair_budget, seed.wrapping_add(i as u64))?;
        sup = sup.max(rep.sup_ratio);
    }
    Ok(sup)
}

/// Cover maps `g_1..g_m`, after checking that each has sampled Lipschitz
/// ratio below [`COVER_LIP_LIMIT`] on the snake. If not, the error names
/// the first admissible `m` found by doubling.
pub fn build_cover_maps(
    space: &SnakeSpace,
    m: usize,
    pair_budget: usize,
    seed: u64,
) -> Result<Vec<MapSpec>> {
    if m == 0 {
        return Err(Error::InvalidArgument("cover needs m >= 1".into()));
    }
    let sup = cover_sup_ratio(space, m, pair_budget, seed)?;
    if sup < COVER_LIP_LIMIT {
        return Ok(cover_specs(m));
    }
    let mut suggested = m;
    loop {
        suggested *= 2;
        if cover_sup_ratio(space, suggested, pair_budget, seed)? < COVER_LIP_LIMIT {
            break;
        }
    }
    Err(Error::CoverTooCoarse {
        requested: m,
        sup_ratio: sup,
        limit: COVER_LIP_LIMIT,
        suggested,
    })
}

/// Smallest power of two `m` whose cover maps pass the sampled bound.
pub fn find_cover_count(space: &SnakeSpace, pair_budget: usize, seed: u64) -> Result<usize> {
    let mut m = 1;
    while cover_sup_ratio(space, m, pair_budget, seed)? >= COVER_LIP_LIMIT {
        m *= 2;
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct SandersReport {
    /// Polyline lengths of the sampled `O_n`, `n = 1..=N`.
    pub arc_lengths: Vec<f64>,
    /// Polyline lengths of the sampled `I_n`.
    pub segment_lengths: Vec<f64>,
    /// Cumulative length of `O_1 I_1 ... O_n I_n`.
    pub finite_part_lengths: Vec<f64>,
    /// `(3π/2) ln((N+1)/(n+1))`, a lower bound for the length of
    /// `O_{n+1} ... O_N`; unbounded in `N`.
    pub tail_lower_bounds: Vec<f64>,
    /// First `n` whose cumulative length exceeds the caller's bound.
    pub divergence_witness: Option<(usize, f64)>,
    /// Largest deviation from the closed forms `3π/(2n)` and `1/(n(n+1))`.
    pub max_arc_error: f64,
    pub max_segment_error: f64,
}

/// Length diagnostics for the initial pieces of the snake, each sampled as
/// a polyline at `angular_step`.
pub fn sanders_report(
    depth: usize,
    angular_step: f64,
    bound: Option<f64>,
) -> Result<SandersReport> {
    if depth < 2 {
        return Err(Error::InvalidArgument("length report needs N >= 2".into()));
    }
    let angles = arc_angles(angular_step);
    let mut rep = SandersReport {
        arc_lengths: Vec::with_capacity(depth),
        segment_lengths: Vec::with_capacity(depth),
        finite_part_lengths: Vec::with_capacity(depth),
        tail_lower_bounds: Vec::with_capacity(depth),
        divergence_witness: None,
        max_arc_error: 0.0,
        max_segment_error: 0.0,
    };
    let mut total = 0.0;
    for n in 1..=depth {
        let r = 1.0 / n as f64;
        let arc = Polyline::new(angles.iter().map(|&a| polar(r, a)).collect())?;
        let seg_angle = segment_angle(n);
        let seg = Polyline::new(vec![
            polar(r, seg_angle),
            polar(1.0 / (n + 1) as f64, seg_angle),
        ])?;
        let (lo, li) = (arc.length(), seg.length());
        total += lo + li;
        rep.max_arc_error = rep.max_arc_error.max((lo - ARC_SPAN / n as f64).abs());
        rep.max_segment_error = rep
            .max_segment_error
            .max((li - 1.0 / (n * (n + 1)) as f64).abs());
        rep.arc_lengths.push(lo);
        rep.segment_lengths.push(li);
        rep.finite_part_lengths.push(total);
        rep.tail_lower_bounds
            .push(ARC_SPAN * ((depth + 1) as f64 / (n + 1) as f64).ln());
        if let Some(b) = bound {
            if rep.divergence_witness.is_none() && total > b {
                rep.divergence_witness = Some((n, total));
            }
        }
    }
    Ok(rep)
}

/// Angle of a point on `O_n` in `[π/2, 2π]`, undoing canonicalisation.
pub fn arc_angle_of(p: Point2) -> f64 {
    let a = canonical_angle(p.y.atan2(p.x));
    if a < FRAC_PI_2 / 2.0 {
        a + TAU
    } else {
        a
    }
}
