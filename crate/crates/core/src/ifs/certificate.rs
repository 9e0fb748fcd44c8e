use rayon::prelude::*;
use serde::Serialize;

use super::attractor::image_points;
use super::system::IfsSystem;
use crate::error::{Error, Result};
use crate::geometry::{diameter_of_points, Point2, PointCloud};

/// Largest number of words a certificate run will enumerate.
pub const WORD_LIMIT: u64 = 10_000_000;

/// Result of enumerating every composition of length `word_length`.
///
/// Words are written outermost map first: `[w0, w1, ..., w_{m-1}]` stands
/// for `f_{w0} ∘ f_{w1} ∘ ... ∘ f_{w_{m-1}}`.
#[derive(Clone, Debug, Serialize)]
pub struct CoverCertificate {
    pub word_length: usize,
    pub max_diameter: f64,
    pub argmax_word: Vec<usize>,
    pub threshold: f64,
    pub words_total: u64,
    /// Distinct prefix images actually computed.
    pub images_computed: u64,
}

impl CoverCertificate {
    /// Every word image has diameter at most the threshold.
    pub fn passes(&self) -> bool {
        self.max_diameter <= self.threshold
    }
}

/// Max image diameter over a subset of words.
#[derive(Clone, Debug, Serialize)]
pub struct WordMaximum {
    pub max_diameter: f64,
    pub argmax_word: Vec<usize>,
    pub images_computed: u64,
}

/// `maps^m`, or an error if that exceeds [`WORD_LIMIT`].
pub fn word_count(maps: usize, m: usize) -> Result<u64> {
    let over = || Error::WordBudget {
        maps,
        word_length: m,
        limit: WORD_LIMIT,
    };
    let exp = u32::try_from(m).map_err(|_| over())?;
    match (maps as u64).checked_pow(exp) {
        Some(n) if n <= WORD_LIMIT => Ok(n),
        _ => Err(over()),
    }
}

/// Enumerates all words of length `m` over the maps of `sys` and reports
/// the largest diameter of an image `w(X)`.
pub fn certify_composition_diameter(
    sys: &IfsSystem,
    x: &PointCloud,
    m: usize,
    threshold: f64,
) -> Result<CoverCertificate> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold must be > 0, got {threshold}"
        )));
    }
    let words_total = word_count(sys.len(), m)?;
    let best = max_word_diameter(sys, x, m, &|_: &[usize]| true)?;
    Ok(CoverCertificate {
        word_length: m,
        max_diameter: best.max_diameter,
        argmax_word: best.argmax_word,
        threshold,
        words_total,
        images_computed: best.images_computed,
    })
}

/// Like [`certify_composition_diameter`] but only words accepted by
/// `filter` count towards the maximum.
///
/// Enumeration is depth first from the innermost map, so every image is
/// computed once per distinct suffix and shared by all its extensions.
/// Images are deduplicated at `x.resolution() / 10`; once an image is a
/// single point every extension has diameter 0 and the subtree is skipped.
pub fn max_word_diameter(
    sys: &IfsSystem,
    x: &PointCloud,
    m: usize,
    filter: &(dyn Fn(&[usize]) -> bool + Sync),
) -> Result<WordMaximum> {
    word_count(sys.len(), m)?;
    let mut inner = Vec::with_capacity(m);
    let (d, word, images) = explore(sys, x.points(), x.resolution(), m, &mut inner, filter)?;
    Ok(WordMaximum {
        max_diameter: d,
        argmax_word: word.unwrap_or_else(|| vec![0; m]),
        images_computed: images,
    })
}

type Best = (f64, Option<Vec<usize>>, u64);

/// `inner` lists the maps applied so far, innermost first.
fn explore(
    sys: &IfsSystem,
    pts: &[Point2],
    resolution: f64,
    remaining: usize,
    inner: &mut Vec<usize>,
    filter: &(dyn Fn(&[usize]) -> bool + Sync),
) -> Result<Best> {
    if remaining == 0 {
        let word: Vec<usize> = inner.iter().rev().copied().collect();
        if !filter(&word) {
            return Ok((0.0, None, 0));
        }
        return Ok((diameter_of_points(pts)?, Some(word), 0));
    }
    if pts.len() == 1 {
        return Ok((0.0, None, 0));
    }
    let child = |i: usize, inner: &mut Vec<usize>| -> Result<Best> {
        let img = image_points(sys, i, pts)?;
        let img = PointCloud::new(img, resolution)?.into_parts().0;
        inner.push(i);
        let (d, w, n) = explore(sys, &img, resolution, remaining - 1, inner, filter)?;
        inner.pop();
        Ok((d, w, n + 1))
    };
    // Fan out while the subtrees are big; results are reduced in map order
    // so the reported word does not depend on scheduling.
    let results: Vec<Best> = if remaining >= 3 {
        (0..sys.len())
            .into_par_iter()
            .map(|i| child(i, &mut inner.clone()))
            .collect::<Result<_>>()?
    } else {
        (0..sys.len())
            .map(|i| child(i, inner))
            .collect::<Result<_>>()?
    };
    let mut best: Best = (0.0, None, 0);
    for (d, w, n) in results {
        best.2 += n;
        if w.is_some() && (best.1.is_none() || d > best.0) {
            best.0 = d;
            best.1 = w;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::diameter;
    use crate::ifs::{MapSpec, MapTable, Mode};

    fn thirds() -> IfsSystem {
        let specs = (0..3)
            .map(|i| {
                MapSpec::affine([[1.0 / 3.0, 0.0], [0.0, 1.0 / 3.0]], [i as f64 / 3.0, 0.0])
                    .unwrap()
            })
            .collect();
        IfsSystem::new(specs, Mode::Weak, &MapTable::new()).unwrap()
    }

    fn unit_segment() -> PointCloud {
        let pts = (0..=3000)
            .map(|k| Point2::new(k as f64 / 3000.0, 0.0))
            .collect();
        PointCloud::new(pts, 1.0 / 3000.0).unwrap()
    }

    #[test]
    fn empty_word_is_the_set_itself() {
        let x = unit_segment();
        let c = certify_composition_diameter(&thirds(), &x, 0, 0.5).unwrap();
        assert_eq!(c.max_diameter, diameter(&x));
        assert!(c.argmax_word.is_empty());
        assert!(!c.passes());
    }

    #[test]
    fn similarity_words_shrink_geometrically() {
        let x = unit_segment();
        for m in 1..=5 {
            let c = certify_composition_diameter(&thirds(), &x, m, 1.0).unwrap();
            let expect = 3f64.powi(-(m as i32));
            assert!(
                (c.max_diameter - expect).abs() <= 2.0 * x.resolution(),
                "m = {m}"
            );
            assert_eq!(c.words_total, 3u64.pow(m as u32));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let x = unit_segment();
        let err = certify_composition_diameter(&thirds(), &x, 15, 1.0).unwrap_err();
        assert!(matches!(
            err,
            Error::WordBudget {
                maps: 3,
                word_length: 15,
                ..
            }
        ));
        assert!(word_count(5, 10).is_ok());
        assert!(certify_composition_diameter(&thirds(), &x, 2, 0.0).is_err());
    }

    #[test]
    fn filter_restricts_the_maximum() {
        let specs = vec![
            MapSpec::affine([[0.5, 0.0], [0.0, 0.5]], [0.0, 0.0]).unwrap(),
            MapSpec::affine([[0.0, 0.0], [0.0, 0.0]], [0.25, 0.0]).unwrap(),
        ];
        let sys = IfsSystem::new(specs, Mode::Weak, &MapTable::new()).unwrap();
        let x = unit_segment();
        // Any word containing the constant map has a single-point image.
        let with_const = max_word_diameter(&sys, &x, 4, &|w: &[usize]| w.contains(&1)).unwrap();
        assert_eq!(with_const.max_diameter, 0.0);
        let all = certify_composition_diameter(&sys, &x, 4, 1.0).unwrap();
        assert_eq!(all.argmax_word, vec![0, 0, 0, 0]);
        assert!((all.max_diameter - 1.0 / 16.0).abs() < 1e-12);
    }
}
