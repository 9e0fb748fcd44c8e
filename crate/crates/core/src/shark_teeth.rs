//! The shark teeth continuum and topological-fractal systems on spaces
//! with a free arc.
//!
//! `M` is the bone `[0,1] × {0}` together with rows of ever finer teeth
//! `M_k`, the graphs of `(1/k) φ_{n_k}`. Any Peano continuum `P` with a free
//! arc `L` carries a family of continuous maps `F_i` (tent-map contractions
//! conjugated onto `L`) and `G_j` (onto the sides `P_j`) whose long
//! compositions have small images; [`FreeArcSpace`] and
//! [`build_free_arc_system`] implement that construction.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist, Point2, PointCloud, Polyline};
use crate::ifs::{expect_params, int_param, IfsSystem, MapSpec, MapTable, Mode, PlaneMap};

/// The 1-periodic triangle wave: `t - n` on `[n, n + 1/2]`, `n - t` on
/// `[n - 1/2, n]`.
pub fn wave(t: f64) -> f64 {
    (t - t.round()).abs()
}

/// `φ_n(t) = 2^{-n} φ(2^n t)`.
pub fn scaled_wave(n: u32, t: f64) -> f64 {
    let s = 2f64.powi(n as i32);
    wave(s * t) / s
}

/// `n_k = ⌊log₂ log₂ (k + 1)⌋`, computed with integers: the largest `m` with
/// `2^(2^m) <= k + 1`.
pub fn row_index(k: u64) -> Result<u32> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "row index is undefined for k = 0 (log2 log2 1)".into(),
        ));
    }
    let bits = 127 - (k as u128 + 1).leading_zeros(); // ⌊log₂(k + 1)⌋ >= 1
    Ok(31 - bits.leading_zeros())
}

/// Peak height `(1/k) 2^{-n_k - 1}` of row `k`.
pub fn row_amplitude(k: u64) -> Result<f64> {
    Ok(2f64.powi(-(row_index(k)? as i32) - 1) / k as f64)
}

/// The tent map on `[0, 1]`.
pub fn tent(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("tent", format!("x = {x} is outside [0, 1]")));
    }
    Ok(if x <= 0.5 { x } else { 1.0 - x })
}

/// `f_i(x) = (i + 2 tent(x)) / 3`, mapping `[0,1]` onto `[i/3, (i+1)/3]`
/// with Lipschitz constant 2/3.
pub fn tent_contraction(i: usize, x: f64) -> Result<f64> {
    if i > 2 {
        return Err(Error::domain(
            "tent_f",
            format!("index {i} is not in {{0, 1, 2}}"),
        ));
    }
    Ok((i as f64 + 2.0 * tent(x)?) / 3.0)
}

/// `tent_f(i)` acting on the plane as `(x, y) ↦ (f_i(x), 0)`; defined for
/// `x ∈ [0, 1]`.
#[derive(Clone, Copy, Debug)]
pub struct TentMap {
    pub i: usize,
}

impl PlaneMap for TentMap {
    fn apply(&self, p: Point2) -> Result<Point2> {
        Ok(Point2::new(tent_contraction(self.i, p.x)?, 0.0))
    }

    fn name(&self) -> String {
        format!("tent_f({})", self.i)
    }
}

pub fn register_tent_maps(table: &mut MapTable) {
    table.register("tent_f", |params| {
        expect_params("tent_f", params, 1)?;
        let i = int_param("tent_f", params, 0)?;
        if i > 2 {
            return Err(Error::domain(
                "tent_f",
                format!("index {i} is not in {{0, 1, 2}}"),
            ));
        }
        Ok(Arc::new(TentMap { i }) as Arc<dyn PlaneMap>)
    });
}

#[derive(Clone, Debug, Serialize)]
pub struct SharkTeethSpace {
    pub rows: usize,
    pub samples_per_row: usize,
    pub cloud: PointCloud,
}

/// Sample points `(t, (1/k) φ_{n_k}(t))` of row `k` at uniform `t`.
pub fn row_points(k: usize, samples: usize) -> Result<Vec<Point2>> {
    let n = row_index(k as u64)?;
    Ok((0..samples)
        .map(|j| {
            let t = j as f64 / (samples - 1) as f64;
            Point2::new(t, scaled_wave(n, t) / k as f64)
        })
        .collect())
}

pub fn build_shark_teeth(rows: usize, samples_per_row: usize) -> Result<SharkTeethSpace> {
    if rows == 0 {
        return Err(Error::InvalidArgument(
            "shark teeth needs at least one row".into(),
        ));
    }
    if samples_per_row < 2 {
        return Err(Error::InvalidArgument(
            "need at least two samples per row".into(),
        ));
    }
    let mut points = Vec::with_capacity((rows + 1) * samples_per_row);
    let mut labels = Vec::with_capacity(points.capacity());
    for j in 0..samples_per_row {
        points.push(Point2::new(j as f64 / (samples_per_row - 1) as f64, 0.0));
        labels.push("bone".to_string());
    }
    for k in 1..=rows {
        let label = format!("M_{k}");
        for p in row_points(k, samples_per_row)? {
            points.push(p);
            labels.push(label.clone());
        }
    }
    // Wave slopes are ±1, so consecutive samples are at most √2 Δt apart.
    let resolution = 2f64.sqrt() / (samples_per_row - 1) as f64;
    Ok(SharkTeethSpace {
        rows,
        samples_per_row,
        cloud: PointCloud::labeled(points, labels, resolution)?,
    })
}

/// A closed walk through the sampled shark teeth that starts and ends at
/// the right end `(1, 0)` of the bone: along the bone to `(0, 0)`, then
/// through the rows alternately left-to-right and back, and finally along
/// the bone home if the last row ended on the left.
pub fn shark_teeth_walk(rows: usize, samples_per_row: usize) -> Result<Vec<Point2>> {
    let mut walk: Vec<Point2> = (0..samples_per_row)
        .rev()
        .map(|j| Point2::new(j as f64 / (samples_per_row - 1) as f64, 0.0))
        .collect();
    for k in 1..=rows {
        let mut row = row_points(k, samples_per_row)?;
        if k % 2 == 0 {
            row.reverse();
        }
        walk.extend(row.into_iter().skip(1));
    }
    if rows % 2 == 0 {
        walk.extend(
            (1..samples_per_row).map(|j| Point2::new(j as f64 / (samples_per_row - 1) as f64, 0.0)),
        );
    }
    Ok(walk)
}

/// `P = P_1 ∪ L ∪ P_2` given by polylines. `arc` is `L`; each side is a
/// walk starting at one endpoint of `L`. Sides that do not return to their
/// start are closed by retracing, so that `ρ_j(0) = ρ_j(1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreeArcDescription {
    pub arc: Vec<Point2>,
    #[serde(default)]
    pub sides: Vec<Vec<Point2>>,
}

/// Sampled `P` with the parametrisations `ρ` of `L` and `ρ_1`, `ρ_2` of
/// the sides (either may be absent).
#[derive(Clone, Debug)]
pub struct FreeArcSpace {
    pub cloud: PointCloud,
    pub arc: Polyline,
    /// `sides[0]` is attached at `ρ(0)`, `sides[1]` at `ρ(1)`.
    pub sides: [Option<Polyline>; 2],
    on_arc_tol: f64,
}

impl FreeArcSpace {
    pub fn new(desc: &FreeArcDescription, resolution: f64) -> Result<Self> {
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(Error::InvalidResolution(resolution));
        }
        let arc = Polyline::new(desc.arc.clone())?;
        if arc.is_closed() {
            return Err(Error::NotFreeArc(
                "L must have two distinct endpoints".into(),
            ));
        }
        if !arc.self_intersections().is_empty() {
            return Err(Error::NotFreeArc("L intersects itself".into()));
        }
        let mut sides: [Option<Polyline>; 2] = [None, None];
        for walk in &desc.sides {
            if walk.is_empty() {
                continue;
            }
            let j = if walk[0] == arc.start() {
                0
            } else if walk[0] == arc.end() {
                1
            } else {
                return Err(Error::NotFreeArc(format!(
                    "side starting at ({}, {}) does not start at an endpoint of L",
                    walk[0].x, walk[0].y
                )));
            };
            if sides[j].is_some() {
                return Err(Error::NotFreeArc(format!(
                    "two sides attached at the same endpoint ρ({j})"
                )));
            }
            let mut path = walk.clone();
            if path.last() != path.first() {
                let back: Vec<Point2> = path.iter().rev().skip(1).copied().collect();
                path.extend(back);
            }
            sides[j] = Some(Polyline::from_path(path)?);
        }

        let longest_side = sides
            .iter()
            .flatten()
            .map(Polyline::total_length)
            .fold(0.0, f64::max);
        let len = arc.total_length();
        // G_j stretches L by |P_j| / |L|; sample L finely enough that its
        // image still covers P_j at the cloud resolution.
        let arc_spacing = resolution * len / len.max(longest_side);
        let mut points = arc.resample(arc_spacing);
        let mut labels = vec!["L".to_string(); points.len()];
        for (j, side) in sides.iter().enumerate() {
            if let Some(side) = side {
                let pts = side.resample(resolution);
                labels.extend(std::iter::repeat_n(format!("P_{}", j + 1), pts.len()));
                points.extend(pts);
            }
        }
        let cloud = PointCloud::labeled(points, labels, resolution)?;
        let space = Self {
            cloud,
            arc,
            sides,
            on_arc_tol: 1e-9 * len.max(1.0),
        };
        space.check_free_arc()?;
        Ok(space)
    }

    /// Numeric free-arc test: side samples within one resolution of `L` must
    /// sit within two resolutions of an endpoint of `L`.
    fn check_free_arc(&self) -> Result<()> {
        let res = self.cloud.resolution();
        let ends = [self.arc.start(), self.arc.end()];
        for (p, l) in self.cloud.points().iter().zip(self.cloud.labels().unwrap()) {
            if l == "L" {
                continue;
            }
            if self.arc.distance_to(*p) <= res && ends.iter().all(|&e| dist(*p, e) > 2.0 * res) {
                return Err(Error::NotFreeArc(format!(
                    "side point ({}, {}) touches L away from its endpoints",
                    p.x, p.y
                )));
            }
        }
        Ok(())
    }

    /// `ρ(t)`: arc-length parametrisation of `L`.
    pub fn rho(&self, t: f64) -> Point2 {
        self.arc.point_at_fraction(t)
    }

    /// `ρ⁻¹(p)` for points of `L` (exact projection), `None` off `L`.
    pub fn rho_inv(&self, p: Point2) -> Option<f64> {
        let (t, d) = self.arc.project(p);
        (d <= self.on_arc_tol).then_some(t)
    }

    /// `ρ_j(t)` for `j ∈ {1, 2}`.
    pub fn side_point(&self, j: usize, t: f64) -> Option<Point2> {
        self.sides
            .get(j.wrapping_sub(1))?
            .as_ref()
            .map(|s| s.point_at_fraction(t))
    }

    /// Indices `j` of the sides that are present.
    pub fn side_indices(&self) -> Vec<usize> {
        (1..=2).filter(|&j| self.sides[j - 1].is_some()).collect()
    }

    pub fn arc_cloud(&self) -> Result<PointCloud> {
        self.cloud.filter_labels(|l| l == "L")
    }

    pub fn side_cloud(&self, j: usize) -> Result<PointCloud> {
        let want = format!("P_{j}");
        self.cloud.filter_labels(|l| l == want)
    }
}

/// Worked instance: `L` is the segment from `(0, 0)` to `(2, 0)`; each side
/// is a copy of the sampled shark teeth, scaled so that its closed walk has
/// unit length, attached by the right end of its bone at `(0, 0)` and
/// mirrored at `(2, 0)`.
///
/// With `|L| = 2` the arc-length parametrisations make `F_i` exactly
/// 2/3-Lipschitz along `L` and `G_j` 1/2-Lipschitz, and every side lies in
/// the outer half-plane of its attachment point.
pub fn shark_teeth_instance(rows: usize, samples_per_row: usize) -> Result<FreeArcDescription> {
    if rows == 0 || samples_per_row < 2 {
        return Err(Error::InvalidArgument(
            "shark teeth instance needs rows >= 1 and samples_per_row >= 2".into(),
        ));
    }
    let walk = shark_teeth_walk(rows, samples_per_row)?;
    let scale = 1.0 / Polyline::from_path(walk.clone())?.total_length();
    let left: Vec<Point2> = walk
        .iter()
        .map(|p| Point2::new(scale * (p.x - 1.0), scale * p.y))
        .collect();
    let right: Vec<Point2> = left.iter().map(|p| Point2::new(2.0 - p.x, p.y)).collect();
    Ok(FreeArcDescription {
        arc: vec![Point2::new(0.0, 0.0), Point2::new(2.0, 0.0)],
        sides: vec![left, right],
    })
}

/// `F_i = ρ ∘ f_i ∘ ρ⁻¹` on `L`, constant `ρ(i/3)` elsewhere.
#[derive(Clone, Debug)]
pub struct ArcContraction {
    pub space: Arc<FreeArcSpace>,
    pub i: usize,
}

impl PlaneMap for ArcContraction {
    fn apply(&self, p: Point2) -> Result<Point2> {
        Ok(match self.space.rho_inv(p) {
            Some(t) => self.space.rho(tent_contraction(self.i, t)?),
            None => self.space.rho(self.i as f64 / 3.0),
        })
    }

    fn name(&self) -> String {
        format!("sharkteeth_F({})", self.i)
    }
}

/// `G_j = ρ_j ∘ ρ⁻¹` on `L`, constant `ρ_j(0)` elsewhere.
#[derive(Clone, Debug)]
pub struct SideMap {
    pub space: Arc<FreeArcSpace>,
    pub j: usize,
}

impl PlaneMap for SideMap {
    fn apply(&self, p: Point2) -> Result<Point2> {
        let t = self.space.rho_inv(p).unwrap_or(0.0);
        self.space
            .side_point(self.j, t)
            .ok_or_else(|| Error::domain(self.name(), "side is empty"))
    }

    fn name(&self) -> String {
        format!("sharkteeth_G({})", self.j)
    }
}

/// Registers `sharkteeth_F(i)` and `sharkteeth_G(j)` bound to `space`.
pub fn register_maps(table: &mut MapTable, space: Arc<FreeArcSpace>) {
    let s = space.clone();
    table.register("sharkteeth_F", move |params| {
        expect_params("sharkteeth_F", params, 1)?;
        let i = int_param("sharkteeth_F", params, 0)?;
        if i > 2 {
            return Err(Error::domain(
                "sharkteeth_F",
                format!("index {i} is not in {{0, 1, 2}}"),
            ));
        }
        Ok(Arc::new(ArcContraction {
            space: s.clone(),
            i,
        }) as Arc<dyn PlaneMap>)
    });
    table.register("sharkteeth_G", move |params| {
        expect_params("sharkteeth_G", params, 1)?;
        let j = int_param("sharkteeth_G", params, 0)?;
        if space.side_point(j, 0.0).is_none() {
            return Err(Error::domain("sharkteeth_G", format!("no side P_{j}")));
        }
        Ok(Arc::new(SideMap {
            space: space.clone(),
            j,
        }) as Arc<dyn PlaneMap>)
    });
}

#[derive(Clone, Debug)]
pub struct FractalSystem {
    pub space: Arc<FreeArcSpace>,
    /// `F_0, F_1, F_2`, then `G_j` for each present side.
    pub system: IfsSystem,
    pub table: MapTable,
}

impl FractalSystem {
    /// True if map `k` of the system is one of the `G_j`.
    pub fn is_side_map(&self, k: usize) -> bool {
        k >= 3
    }
}

pub fn build_free_arc_system(space: FreeArcSpace) -> Result<FractalSystem> {
    let space = Arc::new(space);
    let mut table = MapTable::new();
    register_maps(&mut table, space.clone());
    let mut specs: Vec<MapSpec> = (0..3)
        .map(|i| MapSpec::named("sharkteeth_F", &[i as f64]).with_lip(2.0 / 3.0))
        .collect();
    for j in space.side_indices() {
        specs.push(MapSpec::named("sharkteeth_G", &[j as f64]));
    }
    let system = IfsSystem::new(specs, Mode::Topological, &table)?;
    Ok(FractalSystem {
        space,
        system,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{hausdorff_distance, HausdorffMethod};
    use crate::ifs::{estimate_lipschitz, hutchinson};

    #[test]
    fn wave_examples() {
        assert_eq!(wave(0.25), 0.25);
        assert_eq!(wave(0.75), 0.25);
        assert_eq!(wave(-0.25), 0.25);
        assert_eq!(wave(0.0), 0.0);
        assert_eq!(wave(0.5), 0.5);
        for k in 0..1000 {
            let t = -3.0 + k as f64 * 0.00731;
            assert!((wave(t) - wave(t + 1.0)).abs() < 1e-12);
            assert!((0.0..=0.5).contains(&wave(t)));
        }
    }

    #[test]
    fn scaled_wave_examples() {
        for k in 0..100 {
            let t = k as f64 * 0.0137;
            assert_eq!(scaled_wave(0, t), wave(t));
        }
        assert!((scaled_wave(2, 0.1) - 0.1).abs() < 1e-15);
        for n in 0..=6 {
            let max = (0..=1 << 17)
                .map(|k| scaled_wave(n, k as f64 / (1 << 17) as f64))
                .fold(0.0, f64::max);
            assert!((max - 2f64.powi(-(n as i32) - 1)).abs() <= 1e-6, "n = {n}");
            let period = 2f64.powi(-(n as i32));
            for k in 0..1000 {
                let t = k as f64 / 1000.0;
                assert!((scaled_wave(n, t) - scaled_wave(n, t + period)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn row_index_examples() {
        assert!(row_index(0).is_err());
        assert_eq!(row_index(1).unwrap(), 0);
        assert_eq!(row_index(2).unwrap(), 0);
        assert_eq!(row_index(3).unwrap(), 1);
        assert_eq!(row_index(14).unwrap(), 1);
        assert_eq!(row_index(15).unwrap(), 2);
        assert_eq!(row_index(255).unwrap(), 3);
        assert_eq!(row_index(254).unwrap(), 2);
        assert_eq!(row_index(65535).unwrap(), 4);
        assert_eq!(row_index(u64::MAX - 1).unwrap(), 5);
        assert_eq!(row_index(u64::MAX).unwrap(), 6);
        let mut prev = 0;
        for k in 1..=10_000u64 {
            let n = row_index(k).unwrap();
            assert!(n >= prev);
            // floating-point oracle away from the exact boundaries
            let f = ((k + 1) as f64).log2().log2().floor() as u32;
            assert_eq!(n, f, "k = {k}");
            prev = n;
        }
    }

    #[test]
    fn row_amplitudes() {
        assert_eq!(row_amplitude(1).unwrap(), 0.5);
        assert!((row_amplitude(3).unwrap() - 1.0 / 12.0).abs() < 1e-16);
        let mut prev = f64::INFINITY;
        for k in 1..=1000 {
            let a = row_amplitude(k).unwrap();
            assert!(a <= prev);
            prev = a;
        }
    }

    #[test]
    fn shark_teeth_rows() {
        let m = build_shark_teeth(6, 257).unwrap();
        let row = |k: usize| m.cloud.filter_labels(|l| l == format!("M_{k}")).unwrap();
        let peak = |c: &PointCloud| c.points().iter().map(|p| p.y).fold(0.0, f64::max);
        assert!((peak(&row(1)) - 0.5).abs() < 1e-12);
        assert!((peak(&row(3)) - 1.0 / 12.0).abs() < 1e-12);
        for (p, l) in m.cloud.points().iter().zip(m.cloud.labels().unwrap()) {
            match l.strip_prefix("M_") {
                Some(k) => {
                    let k: usize = k.parse().unwrap();
                    let n = row_index(k as u64).unwrap();
                    assert!((p.y - scaled_wave(n, p.x) / k as f64).abs() <= 1e-12);
                }
                None => assert_eq!(p.y, 0.0),
            }
        }
        // every row passes through both ends of the bone
        for k in 1..=6 {
            let pts = row_points(k, 257).unwrap();
            assert_eq!(pts[0], Point2::new(0.0, 0.0));
            assert_eq!(*pts.last().unwrap(), Point2::new(1.0, 0.0));
        }
    }

    #[test]
    fn tent_examples() {
        assert_eq!(tent(0.5).unwrap(), 0.5);
        assert_eq!(tent(0.0).unwrap(), 0.0);
        assert_eq!(tent(1.0).unwrap(), 0.0);
        assert_eq!(tent(0.75).unwrap(), 0.25);
        assert!(tent(1.5).is_err());
        assert!((tent_contraction(0, 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert!((tent_contraction(2, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-16);
        assert!(tent_contraction(3, 0.5).is_err());
    }

    #[test]
    fn tent_images_cover_unit_interval() {
        let grid: Vec<f64> = (0..=10_000).map(|k| k as f64 / 10_000.0).collect();
        let mut img: Vec<f64> = (0..3)
            .flat_map(|i| grid.iter().map(move |&x| tent_contraction(i, x).unwrap()))
            .collect();
        img.sort_by(f64::total_cmp);
        for &y in &grid {
            let k = img.partition_point(|&v| v < y);
            let d = [k.saturating_sub(1), k.min(img.len() - 1)]
                .iter()
                .map(|&j| (img[j] - y).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(d <= 1e-3);
        }
    }

    fn instance() -> FractalSystem {
        let desc = shark_teeth_instance(6, 129).unwrap();
        build_free_arc_system(FreeArcSpace::new(&desc, 2e-3).unwrap()).unwrap()
    }

    #[test]
    fn walk_is_closed_with_unit_length() {
        let desc = shark_teeth_instance(5, 65).unwrap();
        for side in &desc.sides {
            assert_eq!(side.first(), side.last());
            let len = Polyline::from_path(side.clone()).unwrap().total_length();
            assert!((len - 1.0).abs() < 1e-12);
        }
        assert!(desc.sides[0].iter().all(|p| p.x <= 0.0));
        assert!(desc.sides[1].iter().all(|p| p.x >= 2.0));
    }

    #[test]
    fn images_cover_arc_and_sides() {
        let fs = instance();
        let space = &fs.space;
        let res = space.cloud.resolution();
        let mut arc_img = Vec::new();
        for i in 0..3 {
            arc_img.extend(crate::ifs::image_points(&fs.system, i, space.cloud.points()).unwrap());
        }
        let arc_img = PointCloud::new(arc_img, res).unwrap();
        let d = hausdorff_distance(&arc_img, &space.arc_cloud().unwrap(), HausdorffMethod::Grid)
            .unwrap();
        assert!(d <= 2.0 * res, "d = {d}");
        for (k, j) in [(3, 1), (4, 2)] {
            let img = crate::ifs::image_points(&fs.system, k, space.cloud.points()).unwrap();
            let img = PointCloud::new(img, res).unwrap();
            let d = hausdorff_distance(&img, &space.side_cloud(j).unwrap(), HausdorffMethod::Grid)
                .unwrap();
            assert!(d <= 2.0 * res, "G_{j}: d = {d}");
        }
        // the whole space is invariant under the family
        let h = hutchinson(&fs.system, &space.cloud).unwrap();
        assert!(hausdorff_distance(&h, &space.cloud, HausdorffMethod::Grid).unwrap() <= 2.0 * res);
    }

    #[test]
    fn arc_contractions_are_two_thirds_lipschitz() {
        let fs = instance();
        for i in 0..3 {
            let r =
                estimate_lipschitz(fs.system.map(i), &fs.space.cloud, 100_000, i as u64).unwrap();
            assert!(r.sup_ratio <= 2.0 / 3.0 + 1e-2, "F_{i}: {}", r.sup_ratio);
        }
    }

    #[test]
    fn free_arc_violations_are_rejected() {
        // a side that crosses the middle of L
        let desc = FreeArcDescription {
            arc: vec![Point2::new(0.0, 0.0), Point2::new(2.0, 0.0)],
            sides: vec![vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 1.0),
                Point2::new(1.0, 0.0),
            ]],
        };
        let err = FreeArcSpace::new(&desc, 1e-2).unwrap_err();
        assert!(err
            .to_string()
            .starts_with("L is not a free arc at this resolution"));
        let detached = FreeArcDescription {
            arc: vec![Point2::new(0.0, 0.0), Point2::new(2.0, 0.0)],
            sides: vec![vec![Point2::new(5.0, 0.0), Point2::new(6.0, 1.0)]],
        };
        assert!(FreeArcSpace::new(&detached, 1e-2).is_err());
    }

    #[test]
    fn one_sided_arc_drops_a_side_map() {
        let mut desc = shark_teeth_instance(3, 33).unwrap();
        desc.sides.truncate(1);
        let fs = build_free_arc_system(FreeArcSpace::new(&desc, 5e-3).unwrap()).unwrap();
        assert_eq!(fs.system.len(), 4);
        assert_eq!(fs.space.side_indices(), vec![1]);
    }
}
