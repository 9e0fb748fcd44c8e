use rustc_hash::FxHashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{dist, Point2};
use crate::error::{Error, Result};

/// Finite labelled sample of a compact planar set.
///
/// `resolution` bounds the gap between the sample and the set it stands
/// for; tolerances downstream are stated as multiples of it. Points closer
/// than `resolution / 10` are merged on construction (first one wins).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointCloud {
    points: Vec<Point2>,
    labels: Option<Vec<String>>,
    resolution: f64,
}

impl PointCloud {
    pub fn new(points: Vec<Point2>, resolution: f64) -> Result<Self> {
        Self::build(points, None, resolution)
    }

    pub fn labeled(points: Vec<Point2>, labels: Vec<String>, resolution: f64) -> Result<Self> {
        if labels.len() != points.len() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} points",
                labels.len(),
                points.len()
            )));
        }
        Self::build(points, Some(labels), resolution)
    }

    /// Convenience: every point gets the same label.
    pub fn uniform_label(points: Vec<Point2>, label: &str, resolution: f64) -> Result<Self> {
        let labels = vec![label.to_string(); points.len()];
        Self::labeled(points, labels, resolution)
    }

    fn build(points: Vec<Point2>, labels: Option<Vec<String>>, resolution: f64) -> Result<Self> {
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(Error::InvalidResolution(resolution));
        }
        if points.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::NonFinite(p.x, p.y));
        }
        let keep = dedup_indices(&points, resolution / 10.0);
        let (points, labels) = if keep.len() == points.len() {
            (points, labels)
        } else {
            let pts = keep.iter().map(|&i| points[i]).collect();
            let lbl = labels.map(|l| keep.iter().map(|&i| l[i].clone()).collect());
            (pts, lbl)
        };
        Ok(Self {
            points,
            labels,
            resolution,
        })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[i].as_str())
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false: clouds are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_parts(self) -> (Vec<Point2>, Option<Vec<String>>, f64) {
        (self.points, self.labels, self.resolution)
    }

    /// Same points with a different resolution (re-deduplicated).
    pub fn with_resolution(self, resolution: f64) -> Result<Self> {
        Self::build(self.points, self.labels, resolution)
    }

    /// Sub-cloud of points whose label satisfies `pred`.
    pub fn filter_labels(&self, pred: impl Fn(&str) -> bool) -> Result<Self> {
        let labels = self
            .labels
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("cloud has no labels".into()))?;
        let (pts, lbl): (Vec<_>, Vec<_>) = self
            .points
            .iter()
            .zip(labels)
            .filter(|(_, l)| pred(l))
            .map(|(p, l)| (*p, l.clone()))
            .unzip();
        Self::labeled(pts, lbl, self.resolution)
    }

    /// Union of several clouds at the coarsest of their resolutions.
    pub fn union(clouds: &[&PointCloud]) -> Result<Self> {
        let resolution = clouds.iter().map(|c| c.resolution).fold(f64::NAN, f64::max);
        let labeled = clouds.iter().all(|c| c.labels.is_some());
        let mut pts = Vec::new();
        let mut lbl = Vec::new();
        for c in clouds {
            pts.extend_from_slice(&c.points);
            if let Some(l) = &c.labels {
                lbl.extend(l.iter().cloned());
            }
        }
        if labeled {
            Self::labeled(pts, lbl, resolution)
        } else {
            Self::new(pts, resolution)
        }
    }

    /// Writes `x,y,label` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["x", "y", "label"]).map_err(csv_err)?;
        for (i, p) in self.points.iter().enumerate() {
            let label = self.label(i).unwrap_or("");
            wr.write_record([
                format!("{:.16e}", p.x),
                format!("{:.16e}", p.y),
                label.to_string(),
            ])
            .map_err(csv_err)?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Reads a cloud written by [`write_csv`](Self::write_csv). A file with
    /// only empty labels yields an unlabelled cloud.
    pub fn read_csv<R: Read>(r: R, resolution: f64) -> Result<Self> {
        let rows = read_csv_rows(r)?;
        let any_label = rows.iter().any(|(_, l)| !l.is_empty());
        let (pts, lbl): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        if any_label {
            Self::labeled(pts, lbl, resolution)
        } else {
            Self::new(pts, resolution)
        }
    }
}

/// Raw `(point, label)` rows of an `x,y,label` CSV, without deduplication.
pub fn read_csv_rows<R: Read>(r: R) -> Result<Vec<(Point2, String)>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let headers = rd.headers().map_err(csv_err)?.clone();
    if headers.len() < 2 || &headers[0] != "x" || &headers[1] != "y" {
        return Err(Error::Csv {
            line: 1,
            message: format!(
                "expected header `x,y,label`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| -> Result<f64> {
            let s = rec.get(i).ok_or_else(|| Error::Csv {
                line,
                message: format!("missing column {}", i + 1),
            })?;
            s.trim().parse::<f64>().map_err(|e| Error::Csv {
                line,
                message: format!("bad number `{s}`: {e}"),
            })
        };
        let p = Point2::new(field(0)?, field(1)?);
        if !p.is_finite() {
            return Err(Error::Csv {
                line,
                message: "non-finite coordinate".into(),
            });
        }
        rows.push((p, rec.get(2).unwrap_or("").to_string()));
    }
    Ok(rows)
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        kind => Error::Csv {
            line,
            message: format!("{kind:?}"),
        },
    }
}

/// Greedy first-wins deduplication on a hash grid with cell size `thr`.
pub(crate) fn dedup_indices(points: &[Point2], thr: f64) -> Vec<usize> {
    // Cell -> most recently kept point; `next` chains earlier kept points
    // of the same cell.
    let mut head: FxHashMap<(i64, i64), usize> = FxHashMap::default();
    head.reserve(points.len());
    let mut next = vec![usize::MAX; points.len()];
    let mut keep = Vec::with_capacity(points.len());
    let key = |p: &Point2| ((p.x / thr).floor() as i64, (p.y / thr).floor() as i64);
    'outer: for (i, p) in points.iter().enumerate() {
        let (cx, cy) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let mut j = head
                    .get(&(cx.saturating_add(dx), cy.saturating_add(dy)))
                    .copied();
                while let Some(k) = j {
                    if dist(points[k], *p) < thr {
                        continue 'outer;
                    }
                    j = (next[k] != usize::MAX).then_some(next[k]);
                }
            }
        }
        if let Some(prev) = head.insert((cx, cy), i) {
            next[i] = prev;
        }
        keep.push(i);
    }
    keep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_clouds() {
        assert!(matches!(
            PointCloud::new(vec![], 0.1),
            Err(Error::EmptyCloud)
        ));
        assert!(PointCloud::new(vec![Point2::ORIGIN], 0.0).is_err());
        assert!(PointCloud::new(vec![Point2::ORIGIN], f64::NAN).is_err());
        assert!(PointCloud::new(vec![Point2::new(f64::INFINITY, 0.0)], 0.1).is_err());
    }

    #[test]
    fn dedup_merges_within_tenth_of_resolution() {
        let c = PointCloud::labeled(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(0.009, 0.0),
                Point2::new(0.011, 0.0),
                Point2::new(0.0, 0.0),
            ],
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            0.1,
        )
        .unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.labels().unwrap(), &["a".to_string(), "c".to_string()]);
    }

    #[test]
    fn deduplicated_points_are_pairwise_separated() {
        let pts: Vec<Point2> = (0..2000)
            .map(|i| {
                let t = i as f64 * 0.618_033_988_75;
                Point2::new(t.fract(), (t * 7.3).fract())
            })
            .collect();
        let c = PointCloud::new(pts, 0.2).unwrap();
        for i in 0..c.len() {
            for j in 0..i {
                assert!(dist(c.points()[i], c.points()[j]) >= 0.02);
            }
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let pts = vec![
            Point2::new(0.1, 1.0 / 3.0),
            Point2::new(-2.0e-300, 123456.789),
            Point2::new(std::f64::consts::PI, -std::f64::consts::E),
        ];
        let c = PointCloud::labeled(
            pts.clone(),
            vec!["O_1".into(), "".into(), "x y".into()],
            1e-310,
        )
        .unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,y,label\n"));
        let back = PointCloud::read_csv(buf.as_slice(), 1e-310).unwrap();
        assert_eq!(back.points(), pts.as_slice());
        assert_eq!(back.labels(), c.labels());
    }

    #[test]
    fn malformed_csv_reports_line() {
        let bad = "x,y,label\n0,0,a\n1,oops,b\n";
        match PointCloud::read_csv(bad.as_bytes(), 0.1) {
            Err(Error::Csv { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let bad_header = "a,b\n0,0\n";
        assert!(matches!(
            PointCloud::read_csv(bad_header.as_bytes(), 0.1),
            Err(Error::Csv { line: 1, .. })
        ));
    }

    #[test]
    fn filter_by_label() {
        let c = PointCloud::labeled(
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(2.0, 0.0),
            ],
            vec!["O_1".into(), "I_1".into(), "O_1".into()],
            0.1,
        )
        .unwrap();
        let o = c.filter_labels(|l| l == "O_1").unwrap();
        assert_eq!(o.len(), 2);
        assert!(c.filter_labels(|l| l == "none").is_err());
    }
}
