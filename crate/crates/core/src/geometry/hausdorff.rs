use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{dist, Point2, PointCloud};
use crate::error::{Error, Result};

/// Below this many points on either side the grid method just runs the
/// naive double loop.
const NAIVE_CUTOFF: usize = 512;
const BRUTE_DIAMETER_CUTOFF: usize = 4096;
const CHUNK: usize = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HausdorffMethod {
    Naive,
    #[default]
    Grid,
}

pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud, method: HausdorffMethod) -> Result<f64> {
    hausdorff_points(a.points(), b.points(), method)
}

/// Hausdorff distance between two finite point sets.
///
/// Both methods evaluate the same distance expression for every pair that
/// can matter, so they return bit-identical values.
pub fn hausdorff_points(a: &[Point2], b: &[Point2], method: HausdorffMethod) -> Result<f64> {
    let ab = directed_hausdorff(a, b, method)?;
    let ba = directed_hausdorff(b, a, method)?;
    Ok(ab.max(ba))
}

/// `sup_{p ∈ a} inf_{q ∈ b} |p - q|`.
pub fn directed_hausdorff(a: &[Point2], b: &[Point2], method: HausdorffMethod) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyHausdorff);
    }
    let use_grid = method == HausdorffMethod::Grid && a.len().min(b.len()) >= NAIVE_CUTOFF;
    if !use_grid {
        return Ok(directed_naive(a, b));
    }
    let index = PointIndex::new(b);
    let best = AtomicU64::new(0f64.to_bits());
    a.par_chunks(CHUNK).for_each(|chunk| {
        for &p in chunk {
            // Non-negative floats order like their bit patterns.
            let floor = f64::from_bits(best.load(Ordering::Relaxed));
            if let Some(d) = index.nearest_above(p, floor) {
                best.fetch_max(d.to_bits(), Ordering::Relaxed);
            }
        }
    });
    Ok(f64::from_bits(best.into_inner()))
}

fn directed_naive(a: &[Point2], b: &[Point2]) -> f64 {
    a.par_chunks(CHUNK)
        .map(|chunk| {
            chunk
                .iter()
                .map(|&p| b.iter().map(|&q| dist(p, q)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Uniform bucket grid over a fixed point set, for exact nearest-neighbour
/// queries.
#[derive(Clone, Debug)]
pub struct PointIndex<'a> {
    points: &'a [Point2],
    min: Point2,
    cell: f64,
    nx: usize,
    ny: usize,
    /// CSR layout: points of cell `c` are `order[start[c]..start[c + 1]]`.
    start: Vec<usize>,
    order: Vec<usize>,
}

impl<'a> PointIndex<'a> {
    pub fn new(points: &'a [Point2]) -> Self {
        assert!(!points.is_empty(), "index over empty point set");
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        let (w, h) = (hi.x - lo.x, hi.y - lo.y);
        let n = points.len() as f64;
        // Aim for about two cells per point, but never let one axis
        // collapse for thin, curve-like sets.
        let mut cell = if w > 0.0 && h > 0.0 {
            (w * h / (2.0 * n)).sqrt()
        } else {
            w.max(h) / n
        };
        cell = cell.max(w.max(h) / (4.0 * n));
        if !(cell > 0.0 && cell.is_finite()) {
            cell = 1.0;
        }
        let nx = ((w / cell).floor() as usize + 1).max(1);
        let ny = ((h / cell).floor() as usize + 1).max(1);

        let key = |p: &Point2| -> usize {
            let ix = (((p.x - lo.x) / cell) as usize).min(nx - 1);
            let iy = (((p.y - lo.y) / cell) as usize).min(ny - 1);
            iy * nx + ix
        };
        let mut start = vec![0usize; nx * ny + 1];
        for p in points {
            start[key(p) + 1] += 1;
        }
        for c in 0..nx * ny {
            start[c + 1] += start[c];
        }
        let mut fill = start.clone();
        let mut order = vec![0usize; points.len()];
        for (i, p) in points.iter().enumerate() {
            let k = key(p);
            order[fill[k]] = i;
            fill[k] += 1;
        }
        Self {
            points,
            min: lo,
            cell,
            nx,
            ny,
            start,
            order,
        }
    }

    pub fn points(&self) -> &'a [Point2] {
        self.points
    }

    /// Index and distance of a nearest indexed point.
    pub fn nearest(&self, p: Point2) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        self.search(p, |i, d| {
            if d < best.1 {
                best = (i, d);
            }
            best.1
        });
        best
    }

    /// Exact nearest distance, or `None` once it is known to be `<= floor`.
    fn nearest_above(&self, p: Point2, floor: f64) -> Option<f64> {
        let mut best = f64::INFINITY;
        let mut pruned = false;
        self.search(p, |_, d| {
            if d < best {
                best = d;
            }
            if best <= floor {
                pruned = true;
                return f64::NEG_INFINITY;
            }
            best
        });
        if pruned {
            None
        } else {
            Some(best)
        }
    }

    /// Ring search around `p`. `visit(i, d)` returns the current bound; the
    /// search stops once every unvisited point is provably farther.
    fn search(&self, p: Point2, mut visit: impl FnMut(usize, f64) -> f64) {
        let fx = (p.x - self.min.x) / self.cell;
        let fy = (p.y - self.min.y) / self.cell;
        let cx = fx.floor().clamp(-1.0, self.nx as f64) as i64;
        let cy = fy.floor().clamp(-1.0, self.ny as f64) as i64;
        let (nx, ny) = (self.nx as i64, self.ny as i64);
        // Ring distance from p's (possibly virtual) cell to the grid.
        let gap = |c: i64, n: i64| {
            if c < 0 {
                -c
            } else if c >= n {
                c - n + 1
            } else {
                0
            }
        };
        let first = gap(cx, nx).max(gap(cy, ny));
        let last = (cx.max(nx - 1 - cx)).max(cy.max(ny - 1 - cy)).max(first);
        let mut bound = f64::INFINITY;
        for ring in first..=last {
            // Unvisited points lie in rings >= `ring`, hence at distance at
            // least (ring - 1) cells, up to where p sits inside its cell.
            let reach = (ring - 1).max(0) as f64 * self.cell;
            if ring > first && bound <= reach {
                return;
            }
            let y0 = (cy - ring).max(0);
            let y1 = (cy + ring).min(ny - 1);
            for iy in y0..=y1 {
                let edge_row = iy == cy - ring || iy == cy + ring;
                let xs: Box<dyn Iterator<Item = i64>> = if edge_row {
                    Box::new((cx - ring).max(0)..=(cx + ring).min(nx - 1))
                } else {
                    Box::new(
                        [cx - ring, cx + ring]
                            .into_iter()
                            .filter(|&x| x >= 0 && x < nx),
                    )
                };
                for ix in xs {
                    let c = (iy * nx + ix) as usize;
                    for &i in &self.order[self.start[c]..self.start[c + 1]] {
                        bound = visit(i, dist(p, self.points[i]));
                        if bound == f64::NEG_INFINITY {
                            return;
                        }
                    }
                }
                if ring == 0 {
                    break;
                }
            }
        }
    }
}

/// Largest pairwise distance; 0 for a singleton.
pub fn diameter(a: &PointCloud) -> f64 {
    diameter_of_points(a.points()).expect("clouds are nonempty")
}

pub fn diameter_of_points(points: &[Point2]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if points.len() <= BRUTE_DIAMETER_CUTOFF {
        return Ok(brute_diameter(points));
    }
    let hull = convex_hull(points);
    Ok(brute_diameter(&hull))
}

fn brute_diameter(points: &[Point2]) -> f64 {
    let sq = |p: Point2, q: Point2| {
        let (dx, dy) = (q.x - p.x, q.y - p.y);
        dx * dx + dy * dy
    };
    // Squared distances find the candidates; only pairs within rounding of
    // the maximum are measured with `dist`, so the result is the exact
    // maximum of `dist` over all pairs.
    let max_sq = (0..points.len())
        .into_par_iter()
        .with_min_len(64)
        .map(|i| {
            points[i + 1..]
                .iter()
                .map(|&q| sq(points[i], q))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let cut = max_sq * (1.0 - 1e-9);
    (0..points.len())
        .into_par_iter()
        .with_min_len(64)
        .map(|i| {
            points[i + 1..]
                .iter()
                .filter(|&&q| sq(points[i], q) >= cut)
                .map(|&q| dist(points[i], q))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Andrew's monotone chain. Collinear boundary points are kept so that no
/// extreme point is lost to rounding in the turn test.
fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross =
        |o: Point2, a: Point2, b: Point2| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) < 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) < 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polar;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn pts(v: &[(f64, f64)]) -> Vec<Point2> {
        v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    fn random_cloud(rng: &mut ChaCha8Rng, n: usize, spread: f64) -> Vec<Point2> {
        let (cx, cy) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        (0..n)
            .map(|_| {
                Point2::new(
                    cx + spread * rng.random_range(-1.0..1.0),
                    cy + spread * rng.random_range(-1.0..1.0),
                )
            })
            .collect()
    }

    #[test]
    fn hausdorff_examples() {
        let a = pts(&[(0.0, 0.0), (1.0, 0.0), (0.3, 0.7)]);
        for m in [HausdorffMethod::Naive, HausdorffMethod::Grid] {
            assert_eq!(hausdorff_points(&a, &a, m).unwrap(), 0.0);
            assert_eq!(
                hausdorff_points(&pts(&[(0.0, 0.0)]), &pts(&[(3.0, 4.0)]), m).unwrap(),
                5.0
            );
            assert_eq!(
                hausdorff_points(&pts(&[(0.0, 0.0), (1.0, 0.0)]), &pts(&[(0.0, 0.0)]), m).unwrap(),
                1.0
            );
        }
    }

    #[test]
    fn empty_set_is_an_error() {
        let a = pts(&[(0.0, 0.0)]);
        let err = hausdorff_points(&a, &[], HausdorffMethod::Grid).unwrap_err();
        assert_eq!(err.to_string(), "empty set has no Hausdorff distance");
        assert!(diameter_of_points(&[]).is_err());
    }

    #[test]
    fn grid_matches_naive_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..100 {
            let na = rng.random_range(512..3000);
            let nb = rng.random_range(512..3000);
            let (sa, sb) = (rng.random_range(0.01..2.0), rng.random_range(0.01..2.0));
            let a = random_cloud(&mut rng, na, sa);
            let mut b = random_cloud(&mut rng, nb, sb);
            if trial % 3 == 0 {
                // thin, curve-like set
                for p in &mut b {
                    p.y = (p.x * 5.0).sin() * 0.1;
                }
            }
            let naive = hausdorff_points(&a, &b, HausdorffMethod::Naive).unwrap();
            let grid = hausdorff_points(&a, &b, HausdorffMethod::Grid).unwrap();
            assert_eq!(naive.to_bits(), grid.to_bits(), "trial {trial}");
        }
    }

    #[test]
    fn nearest_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = random_cloud(&mut rng, 800, 0.5);
        let index = PointIndex::new(&b);
        for _ in 0..500 {
            let p = Point2::new(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
            let (_, d) = index.nearest(p);
            let brute = b.iter().map(|&q| dist(p, q)).fold(f64::INFINITY, f64::min);
            assert_eq!(d, brute);
        }
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(diameter_of_points(&pts(&[(2.0, 3.0)])).unwrap(), 0.0);
        let tri = diameter_of_points(&pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])).unwrap();
        assert_eq!(tri, 2f64.sqrt());
        let circle: Vec<Point2> = (0..1000)
            .map(|k| polar(1.0, TAU * k as f64 / 1000.0))
            .collect();
        assert!((diameter_of_points(&circle).unwrap() - 2.0).abs() <= 1e-4);
    }

    #[test]
    fn hull_diameter_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let a = random_cloud(&mut rng, 5000, 1.0);
            assert_eq!(diameter_of_points(&a).unwrap(), brute_diameter(&a));
        }
        let line: Vec<Point2> = (0..5000)
            .map(|k| Point2::new(k as f64, 2.0 * k as f64))
            .collect();
        assert_eq!(diameter_of_points(&line).unwrap(), brute_diameter(&line));
    }

    fn cloud_strategy() -> impl Strategy<Value = Vec<Point2>> {
        prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..40)
            .prop_map(|v| v.into_iter().map(|(x, y)| Point2::new(x, y)).collect())
    }

    proptest! {
        #[test]
        fn hausdorff_is_a_metric(a in cloud_strategy(), b in cloud_strategy(), c in cloud_strategy()) {
            let m = HausdorffMethod::Naive;
            let ab = hausdorff_points(&a, &b, m).unwrap();
            let ba = hausdorff_points(&b, &a, m).unwrap();
            let bc = hausdorff_points(&b, &c, m).unwrap();
            let ac = hausdorff_points(&a, &c, m).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!(ac <= ab + bc + 1e-12);
        }
    }
}
