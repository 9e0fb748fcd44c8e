use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::map::PlaneMap;
use crate::error::{Error, Result};
use crate::geometry::{dist, Point2, PointCloud};

/// Number of extreme points whose pairs are always checked.
pub const EXTREME_POINTS: usize = 64;
/// Violating pairs kept in a report; the total is in `violation_count`.
pub const MAX_STORED_VIOLATIONS: usize = 1000;
const PAIR_CHUNK: usize = 4096;

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzReport {
    pub sup_ratio: f64,
    pub argmax_pair: (Point2, Point2),
    pub pairs_sampled: usize,
    /// Pairs with `d(f(x), f(y)) >= d(x, y)`, in sampling order.
    pub violations: Vec<(Point2, Point2)>,
    pub violation_count: usize,
}

impl LipschitzReport {
    /// True iff no sampled pair broke the strict inequality.
    pub fn is_weak_contraction(&self) -> bool {
        self.violation_count == 0
    }
}

#[derive(Clone, Copy)]
struct PairStat {
    ratio: f64,
    pair: (usize, usize),
}

/// Sampled Lipschitz constant of `f` on `domain`.
///
/// Checks `pair_budget` uniformly random pairs of distinct points plus every
/// pair among the [`EXTREME_POINTS`] points of a greedy farthest-point
/// traversal. Random pairs are drawn in fixed-size chunks, chunk `c` using
/// stream `c` of a ChaCha8 generator seeded with `rng_seed`, so the result
/// does not depend on the number of worker threads.
pub fn estimate_lipschitz(
    f: &dyn PlaneMap,
    domain: &PointCloud,
    pair_budget: usize,
    rng_seed: u64,
) -> Result<LipschitzReport> {
    let pts = domain.points();
    if pts.len() < 2 {
        return Err(Error::InvalidArgument(
            "Lipschitz estimate needs at least two distinct points".into(),
        ));
    }
    if pair_budget == 0 {
        return Err(Error::InvalidArgument("pair budget must be >= 1".into()));
    }
    let images: Vec<Point2> = pts.par_iter().map(|&p| f.apply(p)).collect::<Result<_>>()?;

    let chunks = pair_budget.div_ceil(PAIR_CHUNK);
    let random: Vec<(PairStat, Vec<(usize, usize)>, usize)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            rng.set_stream(c as u64);
            let count = PAIR_CHUNK.min(pair_budget - c * PAIR_CHUNK);
            let pairs = (0..count).map(|_| {
                let i = rng.random_range(0..pts.len());
                let mut j = rng.random_range(0..pts.len() - 1);
                if j >= i {
                    j += 1;
                }
                (i, j)
            });
            scan(pts, &images, pairs)
        })
        .collect();

    let extremes = farthest_points(pts, EXTREME_POINTS);
    let extreme_pairs = extremes
        .iter()
        .enumerate()
        .flat_map(|(a, &i)| extremes[a + 1..].iter().map(move |&j| (i, j)));
    let tail = scan(pts, &images, extreme_pairs);
    let extreme_count = extremes.len() * (extremes.len() - 1) / 2;

    let mut best = PairStat {
        ratio: -1.0,
        pair: (0, 1),
    };
    let mut violations = Vec::new();
    let mut violation_count = 0;
    for (stat, v, n) in random.into_iter().chain(std::iter::once(tail)) {
        if stat.ratio > best.ratio {
            best = stat;
        }
        violation_count += n;
        let room = MAX_STORED_VIOLATIONS - violations.len().min(MAX_STORED_VIOLATIONS);
        violations.extend(v.into_iter().take(room).map(|(i, j)| (pts[i], pts[j])));
    }
    Ok(LipschitzReport {
        sup_ratio: best.ratio,
        argmax_pair: (pts[best.pair.0], pts[best.pair.1]),
        pairs_sampled: pair_budget + extreme_count,
        violations,
        violation_count,
    })
}

/// Same sampling as [`estimate_lipschitz`]; the report's
/// [`is_weak_contraction`](LipschitzReport::is_weak_contraction) is the verdict.
pub fn check_weak_contraction(
    f: &dyn PlaneMap,
    domain: &PointCloud,
    pair_budget: usize,
    rng_seed: u64,
) -> Result<LipschitzReport> {
    estimate_lipschitz(f, domain, pair_budget, rng_seed)
}

fn scan(
    pts: &[Point2],
    images: &[Point2],
    pairs: impl Iterator<Item = (usize, usize)>,
) -> (PairStat, Vec<(usize, usize)>, usize) {
    let mut best = PairStat {
        ratio: -1.0,
        pair: (0, 1),
    };
    let mut bad = Vec::new();
    let mut count = 0;
    for (i, j) in pairs {
        let d = dist(pts[i], pts[j]);
        let df = dist(images[i], images[j]);
        let ratio = df / d;
        if ratio > best.ratio {
            best = PairStat {
                ratio,
                pair: (i, j),
            };
        }
        if df >= d || ratio >= 1.0 {
            count += 1;
            if bad.len() < MAX_STORED_VIOLATIONS {
                bad.push((i, j));
            }
        }
    }
    (best, bad, count)
}

/// Greedy farthest-point traversal starting from the point farthest from
/// the first one.
pub fn farthest_points(pts: &[Point2], k: usize) -> Vec<usize> {
    let k = k.min(pts.len());
    let mut chosen = Vec::with_capacity(k);
    let argmax = |d: &[f64]| {
        d.iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
            )
            .0
    };
    let mut nearest: Vec<f64> = pts.par_iter().map(|&p| dist(p, pts[0])).collect();
    let first = argmax(&nearest);
    chosen.push(first);
    nearest = pts.par_iter().map(|&p| dist(p, pts[first])).collect();
    while chosen.len() < k {
        let next = argmax(&nearest);
        chosen.push(next);
        nearest
            .par_iter_mut()
            .zip(pts.par_iter())
            .for_each(|(d, &p)| *d = d.min(dist(p, pts[next])));
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::map::Affine;
    use std::f64::consts::{FRAC_PI_4, TAU};

    fn disk(n: usize) -> PointCloud {
        // Sunflower layout: roughly uniform on the unit disk.
        let golden = TAU * (1.0 - 1.0 / ((1.0 + 5f64.sqrt()) / 2.0));
        let pts = (0..n)
            .map(|k| {
                let r = ((k as f64 + 0.5) / n as f64).sqrt();
                crate::geometry::polar(r, golden * k as f64)
            })
            .collect();
        PointCloud::new(pts, 1e-3).unwrap()
    }

    #[test]
    fn similarity_ratio_is_exact() {
        let d = disk(2000);
        let r = estimate_lipschitz(&Affine::scaling(0.5, [0.0, 0.0]), &d, 10_000, 1).unwrap();
        assert_eq!(r.sup_ratio, 0.5);
        assert!(r.violations.is_empty());
        assert_eq!(r.pairs_sampled, 10_000 + 64 * 63 / 2);
    }

    #[test]
    fn rotation_is_an_isometry() {
        let d = disk(2000);
        let r = estimate_lipschitz(&Affine::rotation(FRAC_PI_4), &d, 5_000, 1).unwrap();
        assert!((r.sup_ratio - 1.0).abs() <= 1e-12);
        assert!(!r.violations.is_empty());
        assert!(r.sup_ratio >= 1.0);
    }

    #[test]
    fn identity_violates_everywhere() {
        let d = disk(500);
        let id = Affine::scaling(1.0, [0.0, 0.0]);
        let r = check_weak_contraction(&id, &d, 3000, 2).unwrap();
        assert_eq!(r.violation_count, r.pairs_sampled);
        assert!(!r.is_weak_contraction());
    }

    #[test]
    fn affine_estimate_matches_singular_value() {
        let d = disk(20_000);
        for (k, m) in [
            [[0.9, 0.3], [-0.2, 0.4]],
            [[0.1, 0.0], [0.0, 0.7]],
            [[0.5, 0.5], [0.5, -0.5]],
            [[1.2, -0.4], [0.3, 0.2]],
        ]
        .into_iter()
        .enumerate()
        {
            let a = Affine::new(m, [0.3, -1.0]).unwrap();
            let r = estimate_lipschitz(&a, &d, 100_000, k as u64).unwrap();
            assert!(r.sup_ratio <= a.operator_norm() + 1e-12);
            assert!(
                (r.sup_ratio - a.operator_norm()).abs() <= 1e-3,
                "{m:?}: {}",
                r.sup_ratio
            );
            assert_eq!(r.violation_count > 0, r.sup_ratio >= 1.0);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = disk(3000);
        let a = Affine::new([[0.9, 0.3], [-0.2, 0.4]], [0.0, 0.0]).unwrap();
        let r1 = estimate_lipschitz(&a, &d, 50_000, 77).unwrap();
        let r2 = estimate_lipschitz(&a, &d, 50_000, 77).unwrap();
        assert_eq!(r1.sup_ratio.to_bits(), r2.sup_ratio.to_bits());
        assert_eq!(r1.argmax_pair, r2.argmax_pair);
    }

    #[test]
    fn too_small_domain_is_an_error() {
        let one = PointCloud::new(vec![Point2::ORIGIN], 0.1).unwrap();
        assert!(estimate_lipschitz(&Affine::scaling(0.5, [0.0, 0.0]), &one, 10, 0).is_err());
    }

    #[test]
    fn farthest_points_are_spread() {
        let d = disk(1000);
        let f = farthest_points(d.points(), 4);
        assert_eq!(f.len(), 4);
        for &i in &f {
            assert!(d.points()[i].norm() > 0.9);
        }
    }
}
