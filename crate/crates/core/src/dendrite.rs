//! The dendrite `P = ⋃ L_n`: piecewise-linear arcs from the origin to
//! `ρ_n = polar(2^{-n}, 2^{-n})` of length `2^n`, each confined to the polar
//! box `[0, 2^{-n}) × (2^{-n} - 2^{-n-2}, 2^{-n} + 2^{-n-2})`.
//!
//! Straightening every `L_n` to the radial segment `J_n` gives a
//! homeomorphic copy `D`, which is the attractor of the explicit system
//! `{h, g_1, g_2}` built here.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{polar, polar_dist, Point2, PointCloud, PolarPoint, Polyline};
use crate::ifs::{expect_params, IfsSystem, MapSpec, MapTable, Mode, PlaneMap};

pub const MAX_DEPTH: u32 = 10;

/// Inner turning radius of the zigzag, as a fraction of `2^{-n}`.
const INNER_FRACTION: f64 = 0.1;
/// Fraction of the half-width of the angular window used by the zigzag.
const ANGLE_FRACTION: f64 = 0.9;

/// Centre `2^{-n}` and half-width `2^{-n-2}` of the angular window of `L_n`.
pub fn sector(n: u32) -> (f64, f64) {
    (2f64.powi(-(n as i32)), 2f64.powi(-(n as i32) - 2))
}

/// `ρ_n = polar(2^{-n}, 2^{-n})`.
pub fn arc_end(n: u32) -> Point2 {
    let c = 2f64.powi(-(n as i32));
    polar(c, c)
}

/// Number of legs of the zigzag `L_n`: odd, so that the last leg runs
/// outward to `ρ_n`, and large enough that legs shorter than `2^{-n}` add
/// up to `2^n`.
pub fn leg_count(n: u32) -> usize {
    let quarter = 4usize.pow(n);
    2 * (5 * quarter).div_ceil(8) + 1
}

#[derive(Clone, Debug, Serialize)]
pub struct DendriteSpace {
    pub depth: u32,
    pub arcs: Vec<Polyline>,
    pub cloud: PointCloud,
    /// Raw arc-length samples of each arc, before deduplication.
    pub samples: Vec<Vec<Point2>>,
}

/// Vertices of the zigzag for outer turning radius `outer`.
fn zigzag(n: u32, outer: f64) -> Vec<PolarPoint> {
    let (c, w) = sector(n);
    let k = leg_count(n);
    let inner = INNER_FRACTION * c;
    let start = c - ANGLE_FRACTION * w;
    let step = ANGLE_FRACTION * w / k as f64;
    let mut v = Vec::with_capacity(k + 1);
    v.push(PolarPoint::new(0.0, 0.0).unwrap());
    for j in 1..k {
        let r = if j % 2 == 1 { outer } else { inner };
        v.push(PolarPoint::new(r, start + j as f64 * step).unwrap());
    }
    v.push(PolarPoint::new(c, c).unwrap());
    v
}

fn zigzag_length(v: &[PolarPoint]) -> f64 {
    v.windows(2).map(|w| polar_dist(w[0], w[1])).sum()
}

/// The arc `L_n` as a radial zigzag of exact length `2^n`.
///
/// Legs alternate between an inner radius `0.1 · 2^{-n}` and an outer
/// radius solved for by bisection, at strictly increasing angles inside the
/// window. Angular monotonicity alone rules out self-intersections.
pub fn build_arc(n: u32) -> Result<Polyline> {
    if n == 0 || n > MAX_DEPTH {
        return Err(Error::DendriteInfeasible {
            n,
            reason: format!("index must be in 1..={MAX_DEPTH}"),
        });
    }
    let target = 2f64.powi(n as i32);
    let (c, _) = sector(n);
    let inner = INNER_FRACTION * c;
    let (mut lo, mut hi) = (inner, c);
    if zigzag_length(&zigzag(n, hi)) < target {
        return Err(Error::DendriteInfeasible {
            n,
            reason: format!(
                "{} legs inside radius 2^-{n} cannot reach length 2^{n}",
                leg_count(n)
            ),
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if zigzag_length(&zigzag(n, mid)) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * c {
            break;
        }
    }
    let vertices: Vec<PolarPoint> = zigzag(n, 0.5 * (lo + hi));
    debug_assert!(vertices
        .windows(2)
        .skip(1)
        .all(|w| w[1].alpha() > w[0].alpha()));
    Polyline::new(vertices.into_iter().map(PolarPoint::to_cartesian).collect())
}

pub fn build_dendrite(depth: u32, samples_per_arc: usize) -> Result<DendriteSpace> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "dendrite depth must be in 1..={MAX_DEPTH}, got {depth}"
        )));
    }
    let mut arcs = Vec::with_capacity(depth as usize);
    let mut samples = Vec::with_capacity(depth as usize);
    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut resolution: f64 = 0.0;
    for n in 1..=depth {
        let legs = leg_count(n);
        if samples_per_arc < legs {
            return Err(Error::DendriteInfeasible {
                n,
                reason: format!("{samples_per_arc} samples for {legs} legs"),
            });
        }
        let arc = build_arc(n)?;
        let s = arc.sample_uniform(samples_per_arc);
        resolution = resolution.max(arc.total_length() / (samples_per_arc - 1) as f64);
        labels.extend(std::iter::repeat_n(format!("L_{n}"), s.len()));
        points.extend_from_slice(&s);
        samples.push(s);
        arcs.push(arc);
    }
    Ok(DendriteSpace {
        depth,
        arcs,
        cloud: PointCloud::labeled(points, labels, resolution)?,
        samples,
    })
}

/// True if `p` lies in the polar box of `L_n` (the origin and `ρ_n`
/// included).
pub fn in_sector(n: u32, p: Point2) -> bool {
    let (c, w) = sector(n);
    let pp = p.to_polar();
    if pp.r() == 0.0 {
        return true;
    }
    if (pp.r() - c).abs() <= 1e-15 && (pp.alpha() - c).abs() <= 1e-15 {
        return true;
    }
    pp.r() < c && pp.alpha() > c - w && pp.alpha() < c + w
}

#[derive(Clone, Debug, Serialize)]
pub struct StraightDendrite {
    pub depth: u32,
    pub cloud: PointCloud,
    /// Samples of `J_n`; sample `k` corresponds to sample `k` of `L_n`.
    pub segments: Vec<Vec<Point2>>,
}

/// Radial segments `J_n = {polar(r, 2^{-n}) : r ∈ [0, 2^{-n}]}`, sampled at
/// the same arc-length fractions as the zigzags.
pub fn straighten_dendrite(depth: u32, samples_per_arc: usize) -> Result<StraightDendrite> {
    if depth == 0 {
        return Err(Error::InvalidArgument("dendrite depth must be >= 1".into()));
    }
    if samples_per_arc < 2 {
        return Err(Error::InvalidArgument(
            "need at least two samples per arc".into(),
        ));
    }
    let mut segments = Vec::with_capacity(depth as usize);
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for n in 1..=depth {
        let (c, _) = sector(n);
        let seg: Vec<Point2> = (0..samples_per_arc)
            .map(|k| polar(c * k as f64 / (samples_per_arc - 1) as f64, c))
            .collect();
        labels.extend(std::iter::repeat_n(format!("J_{n}"), seg.len()));
        points.extend_from_slice(&seg);
        segments.push(seg);
    }
    let resolution = 0.5 / (samples_per_arc - 1) as f64;
    Ok(StraightDendrite {
        depth,
        cloud: PointCloud::labeled(points, labels, resolution)?,
        segments,
    })
}

/// The three maps acting on `D` in polar coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DendriteMap {
    /// `(r, α) ↦ (r/2, α/2)`: shifts `J_n` onto `J_{n+1}`.
    H,
    /// `(r, α) ↦ (r/2, 1/2)`: onto the inner half of `J_1`.
    G1,
    /// `(r, α) ↦ (1/2 - r/2, 1/2)`: onto the outer half of `J_1`.
    G2,
}

impl PlaneMap for DendriteMap {
    fn apply(&self, p: Point2) -> Result<Point2> {
        let pp = p.to_polar();
        let (r, a) = (pp.r(), pp.alpha());
        if r > 0.5 + 1e-12 || (r > 0.0 && a > 0.5 + 1e-12) {
            return Err(Error::domain(
                self.name(),
                format!("({}, {}) is outside the straightened dendrite", p.x, p.y),
            ));
        }
        Ok(match self {
            DendriteMap::H => polar(r / 2.0, a / 2.0),
            DendriteMap::G1 => polar(r / 2.0, 0.5),
            DendriteMap::G2 => polar(0.5 - r / 2.0, 0.5),
        })
    }

    fn name(&self) -> String {
        match self {
            DendriteMap::H => "dendrite_h",
            DendriteMap::G1 => "dendrite_g1",
            DendriteMap::G2 => "dendrite_g2",
        }
        .into()
    }
}

pub fn register_maps(table: &mut MapTable) {
    for map in [DendriteMap::H, DendriteMap::G1, DendriteMap::G2] {
        let name = map.name();
        table.register(&name.clone(), move |params| {
            expect_params(&name, params, 0)?;
            Ok(Arc::new(map) as Arc<dyn PlaneMap>)
        });
    }
}

/// `{h, g_1, g_2}` in strict mode, each claimed 1/2-Lipschitz.
pub fn dendrite_ifs() -> Result<IfsSystem> {
    let mut table = MapTable::new();
    register_maps(&mut table);
    let specs = ["dendrite_h", "dendrite_g1", "dendrite_g2"]
        .iter()
        .map(|n| MapSpec::named(n, &[]).with_lip(0.5))
        .collect();
    IfsSystem::new(specs, Mode::Strict, &table)
}
