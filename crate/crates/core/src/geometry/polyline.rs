use serde::{Deserialize, Serialize};

use super::{dist, Point2};
use crate::error::{Error, Result};

/// Piecewise-linear embedding of an interval.
///
/// Keeps cumulative arc length so that arc-length parametrisation and its
/// inverse (projection) are cheap.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "PolylineRepr", into = "PolylineRepr")]
pub struct Polyline {
    vertices: Vec<Point2>,
    labels: Option<Vec<String>>,
    cumulative: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PolylineRepr {
    vertices: Vec<Point2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<PolylineRepr> for Polyline {
    type Error = Error;
    fn try_from(r: PolylineRepr) -> Result<Self> {
        Polyline::with_labels(r.vertices, r.labels)
    }
}

impl From<Polyline> for PolylineRepr {
    fn from(p: Polyline) -> Self {
        PolylineRepr {
            vertices: p.vertices,
            labels: p.labels,
        }
    }
}

impl Polyline {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        Self::with_labels(vertices, None)
    }

    pub fn with_labels(vertices: Vec<Point2>, labels: Option<Vec<String>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPolyline(format!(
                "need at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(l) = &labels {
            if l.len() != vertices.len() {
                return Err(Error::InvalidPolyline(format!(
                    "{} labels for {} vertices",
                    l.len(),
                    vertices.len()
                )));
            }
        }
        let mut cumulative = Vec::with_capacity(vertices.len());
        cumulative.push(0.0);
        for (i, w) in vertices.windows(2).enumerate() {
            if !w[0].is_finite() || !w[1].is_finite() {
                return Err(Error::InvalidPolyline(format!(
                    "non-finite vertex near index {i}"
                )));
            }
            let d = dist(w[0], w[1]);
            if d == 0.0 {
                return Err(Error::InvalidPolyline(format!(
                    "consecutive vertices {i} and {} coincide",
                    i + 1
                )));
            }
            cumulative.push(cumulative[i] + d);
        }
        Ok(Self {
            vertices,
            labels,
            cumulative,
        })
    }

    /// Drops consecutive duplicates before building; convenient for
    /// concatenated pieces that share junction vertices.
    pub fn from_path(mut vertices: Vec<Point2>) -> Result<Self> {
        vertices.dedup();
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn start(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn end(&self) -> Point2 {
        *self.vertices.last().unwrap()
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    /// Sum of segment lengths. For a polyline this is exactly the supremum
    /// of inscribed partition sums.
    pub fn length(&self) -> f64 {
        self.vertices.windows(2).map(|w| dist(w[0], w[1])).sum()
    }

    /// Point at arc length `s` from the start (clamped to the ends).
    pub fn point_at_length(&self, s: f64) -> Point2 {
        let total = *self.cumulative.last().unwrap();
        if s <= 0.0 {
            return self.start();
        }
        if s >= total {
            return self.end();
        }
        // first index with cumulative > s
        let idx = self.cumulative.partition_point(|&c| c <= s);
        let i = idx - 1;
        let seg = self.cumulative[idx] - self.cumulative[i];
        let t = (s - self.cumulative[i]) / seg;
        self.vertices[i].lerp(self.vertices[idx], t)
    }

    /// Arc-length parametrisation over `[0, 1]`.
    pub fn point_at_fraction(&self, t: f64) -> Point2 {
        if t >= 1.0 {
            return self.end();
        }
        self.point_at_length(t * self.total_length())
    }

    /// Total length from the cached cumulative table.
    pub fn total_length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Closest point on the polyline: returns `(arc-length fraction, distance)`.
    pub fn project(&self, p: Point2) -> (f64, f64) {
        let mut best = (0.0, f64::INFINITY);
        for (i, w) in self.vertices.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let len2 = dx * dx + dy * dy;
            let u = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
            let q = a.lerp(b, u);
            let d = dist(p, q);
            if d < best.1 {
                let s = self.cumulative[i] + u * (self.cumulative[i + 1] - self.cumulative[i]);
                best = (s, d);
            }
        }
        let total = self.total_length();
        ((best.0 / total).clamp(0.0, 1.0), best.1)
    }

    pub fn distance_to(&self, p: Point2) -> f64 {
        self.project(p).1
    }

    /// Samples at uniform arc-length spacing of at most `spacing`, including
    /// both ends and every vertex.
    pub fn resample(&self, spacing: f64) -> Vec<Point2> {
        assert!(spacing > 0.0, "spacing must be positive");
        let mut out = Vec::new();
        for w in self.vertices.windows(2) {
            let d = dist(w[0], w[1]);
            let k = (d / spacing).ceil().max(1.0) as usize;
            for j in 0..k {
                out.push(w[0].lerp(w[1], j as f64 / k as f64));
            }
        }
        out.push(self.end());
        out
    }

    /// `count` samples at uniform arc-length fractions `k / (count - 1)`.
    pub fn sample_uniform(&self, count: usize) -> Vec<Point2> {
        assert!(count >= 2, "need at least two samples");
        let total = self.total_length();
        let mut out = Vec::with_capacity(count);
        let mut seg = 0usize;
        for k in 0..count {
            if k == count - 1 {
                out.push(self.end());
                break;
            }
            let s = total * k as f64 / (count - 1) as f64;
            while seg + 1 < self.cumulative.len() - 1 && self.cumulative[seg + 1] <= s {
                seg += 1;
            }
            let len = self.cumulative[seg + 1] - self.cumulative[seg];
            let t = ((s - self.cumulative[seg]) / len).clamp(0.0, 1.0);
            out.push(self.vertices[seg].lerp(self.vertices[seg + 1], t));
        }
        out
    }

    /// Pairs of segment indices that intersect other than consecutive
    /// segments meeting at their shared vertex. Empty means the polyline is
    /// simple (ignoring a closing vertex when `is_closed`).
    pub fn self_intersections(&self) -> Vec<(usize, usize)> {
        let n = self.segment_count();
        let closed = self.is_closed();
        let bbox: Vec<[f64; 4]> = self
            .vertices
            .windows(2)
            .map(|w| {
                [
                    w[0].x.min(w[1].x),
                    w[0].x.max(w[1].x),
                    w[0].y.min(w[1].y),
                    w[0].y.max(w[1].y),
                ]
            })
            .collect();
        // sweep over x so the quadratic scan only touches overlapping boxes
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| bbox[a][0].total_cmp(&bbox[b][0]));
        let mut hits = Vec::new();
        for (oi, &i) in order.iter().enumerate() {
            for &j in &order[oi + 1..] {
                if bbox[j][0] > bbox[i][1] {
                    break;
                }
                if bbox[j][2] > bbox[i][3] || bbox[i][2] > bbox[j][3] {
                    continue;
                }
                let (lo, hi) = (i.min(j), i.max(j));
                let (a, b) = (self.vertices[lo], self.vertices[lo + 1]);
                let (c, d) = (self.vertices[hi], self.vertices[hi + 1]);
                let adjacent = hi == lo + 1 || (closed && lo == 0 && hi == n - 1);
                let bad = if adjacent {
                    // must share only the common vertex: reject collinear overlap
                    let shared = if hi == lo + 1 { b } else { a };
                    let (p, q) = if hi == lo + 1 { (a, d) } else { (b, c) };
                    overlaps_beyond_shared(shared, p, q)
                } else {
                    segments_intersect(a, b, c, d)
                };
                if bad {
                    hits.push((lo, hi));
                }
            }
        }
        hits.sort_unstable();
        hits
    }
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

pub(crate) fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// Segments `[shared, p]` and `[shared, q]` overlap in more than the shared
/// point iff they are collinear and point the same way.
fn overlaps_beyond_shared(shared: Point2, p: Point2, q: Point2) -> bool {
    if orient(shared, p, q) != 0.0 {
        return false;
    }
    let dot = (p.x - shared.x) * (q.x - shared.x) + (p.y - shared.y) * (q.y - shared.y);
    dot > 0.0
}
