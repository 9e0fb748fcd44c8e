use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::system::IfsSystem;
use crate::error::{Error, Result};
use crate::geometry::{hausdorff_distance, HausdorffMethod, Point2, PointCloud};

#[derive(Clone, Debug, Serialize)]
pub struct AttractorResult {
    pub cloud: PointCloud,
    pub iterations: usize,
    /// Hausdorff distance between the last two iterates.
    pub residual: f64,
    pub converged: bool,
    /// Residual after each application of the operator.
    pub history: Vec<f64>,
}

pub fn map_label(i: usize) -> String {
    format!("map_{i}")
}

/// Images of `points` under map `i`, evaluated in parallel for large inputs.
pub fn image_points(sys: &IfsSystem, i: usize, points: &[Point2]) -> Result<Vec<Point2>> {
    let f = sys.map(i);
    if points.len() < PARALLEL_MIN {
        return points.iter().map(|&p| f.apply(p)).collect();
    }
    points.par_iter().map(|&p| f.apply(p)).collect()
}

const PARALLEL_MIN: usize = 2048;

/// One application of the Hutchinson operator: the union of the images of
/// `a` under every map, deduplicated at the resolution of `a`. Each point is
/// labelled with the index of the map that produced it.
pub fn hutchinson(sys: &IfsSystem, a: &PointCloud) -> Result<PointCloud> {
    let mut points = Vec::with_capacity(a.len() * sys.len());
    let mut labels = Vec::with_capacity(a.len() * sys.len());
    for i in 0..sys.len() {
        let img = image_points(sys, i, a.points())?;
        labels.extend(std::iter::repeat_n(map_label(i), img.len()));
        points.extend(img);
    }
    PointCloud::labeled(points, labels, a.resolution())
}

/// Iterates the Hutchinson operator from `seed` until two successive
/// iterates are within `tol` in the Hausdorff metric.
pub fn iterate_attractor(
    sys: &IfsSystem,
    seed: &PointCloud,
    tol: f64,
    max_iter: usize,
) -> Result<AttractorResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be > 0, got {tol}"
        )));
    }
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be >= 1".into()));
    }
    let mut current = seed.clone();
    let mut history = Vec::new();
    for k in 1..=max_iter {
        let next = hutchinson(sys, &current)?;
        let residual = hausdorff_distance(&current, &next, HausdorffMethod::Grid)?;
        history.push(residual);
        current = next;
        if residual <= tol || k == max_iter {
            return Ok(AttractorResult {
                cloud: current,
                iterations: k,
                residual,
                converged: residual <= tol,
                history,
            });
        }
    }
    unreachable!("loop returns on the last iteration")
}

/// Random orbit sampling: starting at the origin, apply uniformly chosen
/// maps `n` times and keep the points after the first `burn_in`.
pub fn chaos_game(
    sys: &IfsSystem,
    n: usize,
    burn_in: usize,
    rng_seed: u64,
    resolution: f64,
) -> Result<PointCloud> {
    if n <= burn_in {
        return Err(Error::InvalidArgument(format!(
            "chaos game needs n > burn_in, got n = {n}, burn_in = {burn_in}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut p = Point2::ORIGIN;
    let mut points = Vec::with_capacity(n - burn_in);
    let mut labels = Vec::with_capacity(n - burn_in);
    for step in 0..n {
        let i = rng.random_range(0..sys.len());
        p = sys.apply(i, p)?;
        if step >= burn_in {
            points.push(p);
            labels.push(map_label(i));
        }
    }
    PointCloud::labeled(points, labels, resolution)
}
