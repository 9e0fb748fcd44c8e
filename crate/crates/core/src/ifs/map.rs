use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;

/// A self-map of the plane that can be evaluated pointwise.
///
/// Maps may be partial: evaluating outside the intended domain is an error
/// rather than a silent extrapolation.
pub trait PlaneMap: Send + Sync {
    fn apply(&self, p: Point2) -> Result<Point2>;

    /// Identifier used in reports and labels.
    fn name(&self) -> String;
}

impl fmt::Debug for dyn PlaneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneMap({})", self.name())
    }
}

/// `p ↦ M p + t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub matrix: [[f64; 2]; 2],
    pub translation: [f64; 2],
}

impl Affine {
    pub fn new(matrix: [[f64; 2]; 2], translation: [f64; 2]) -> Result<Self> {
        if matrix
            .iter()
            .flatten()
            .chain(&translation)
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidArgument(
                "affine map with non-finite entry".into(),
            ));
        }
        Ok(Self {
            matrix,
            translation,
        })
    }

    pub fn scaling(s: f64, translation: [f64; 2]) -> Self {
        Self {
            matrix: [[s, 0.0], [0.0, s]],
            translation,
        }
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            matrix: [[c, -s], [s, c]],
            translation: [0.0, 0.0],
        }
    }

    /// Largest singular value of the linear part.
    pub fn operator_norm(&self) -> f64 {
        let [[a, b], [c, d]] = self.matrix;
        // Singular values of a 2x2 matrix from its Frobenius norm and
        // determinant: s1^2 + s2^2 = |M|_F^2, s1 s2 = |det M|.
        let fro = a * a + b * b + c * c + d * d;
        let det = (a * d - b * c).abs();
        let disc = ((fro * fro) / 4.0 - det * det).max(0.0).sqrt();
        (fro / 2.0 + disc).sqrt()
    }
}

impl PlaneMap for Affine {
    fn apply(&self, p: Point2) -> Result<Point2> {
        let [[a, b], [c, d]] = self.matrix;
        Ok(Point2::new(
            a * p.x + b * p.y + self.translation[0],
            c * p.x + d * p.y + self.translation[1],
        ))
    }

    fn name(&self) -> String {
        "affine".into()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MapKind {
    Affine(Affine),
    Named { name: String, params: Vec<f64> },
}

/// Serializable description of a map, resolved to an evaluator through a
/// [`MapTable`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapSpecRepr", into = "MapSpecRepr")]
pub struct MapSpec {
    pub kind: MapKind,
    pub claimed_lip: Option<f64>,
}

impl MapSpec {
    pub fn affine(matrix: [[f64; 2]; 2], translation: [f64; 2]) -> Result<Self> {
        Ok(Self {
            kind: MapKind::Affine(Affine::new(matrix, translation)?),
            claimed_lip: None,
        })
    }

    pub fn named(name: &str, params: &[f64]) -> Self {
        Self {
            kind: MapKind::Named {
                name: name.to_string(),
                params: params.to_vec(),
            },
            claimed_lip: None,
        }
    }

    pub fn with_lip(mut self, lip: f64) -> Self {
        self.claimed_lip = Some(lip);
        self
    }

    pub fn label(&self) -> String {
        match &self.kind {
            MapKind::Affine(_) => "affine".into(),
            MapKind::Named { name, params } if params.is_empty() => name.clone(),
            MapKind::Named { name, params } => {
                let ps: Vec<String> = params.iter().map(|p| p.to_string()).collect();
                format!("{name}({})", ps.join(","))
            }
        }
    }
}

/// Evaluate `spec` at `p`.
pub fn apply_map(table: &MapTable, spec: &MapSpec, p: Point2) -> Result<Point2> {
    table.resolve(spec)?.apply(p)
}

/// Formats a float as a decimal string with 17 significant digits, which
/// round-trips every `f64` exactly.
pub fn exact_decimal(v: f64) -> String {
    format!("{v:.16e}")
}

/// JSON numbers are accepted on input as well as decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Text(String),
    Value(f64),
}

impl Num {
    fn value(&self) -> Result<f64> {
        let v = match self {
            Num::Text(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidArgument(format!("bad number `{s}`: {e}")))?,
            Num::Value(v) => *v,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::InvalidArgument(format!("non-finite parameter {v}")))
        }
    }
}

impl From<f64> for Num {
    fn from(v: f64) -> Self {
        Num::Text(exact_decimal(v))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindTag {
    Affine,
    Named,
}

#[derive(Serialize, Deserialize)]
struct MapSpecRepr {
    kind: KindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<[[Num; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    translation: Option<[Num; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    claimed_lip: Option<Num>,
}

impl TryFrom<MapSpecRepr> for MapSpec {
    type Error = Error;

    fn try_from(r: MapSpecRepr) -> Result<Self> {
        let claimed_lip = r.claimed_lip.as_ref().map(Num::value).transpose()?;
        let kind = match r.kind {
            KindTag::Affine => {
                let m = r
                    .matrix
                    .ok_or_else(|| Error::InvalidArgument("affine map needs `matrix`".into()))?;
                let t = r.translation.ok_or_else(|| {
                    Error::InvalidArgument("affine map needs `translation`".into())
                })?;
                MapKind::Affine(Affine::new(
                    [
                        [m[0][0].value()?, m[0][1].value()?],
                        [m[1][0].value()?, m[1][1].value()?],
                    ],
                    [t[0].value()?, t[1].value()?],
                )?)
            }
            KindTag::Named => MapKind::Named {
                name: r
                    .name
                    .ok_or_else(|| Error::InvalidArgument("named map needs `name`".into()))?,
                params: r
                    .params
                    .unwrap_or_default()
                    .iter()
                    .map(Num::value)
                    .collect::<Result<_>>()?,
            },
        };
        Ok(MapSpec { kind, claimed_lip })
    }
}

impl From<MapSpec> for MapSpecRepr {
    fn from(s: MapSpec) -> Self {
        let claimed_lip = s.claimed_lip.map(Num::from);
        match s.kind {
            MapKind::Affine(a) => MapSpecRepr {
                kind: KindTag::Affine,
                matrix: Some(a.matrix.map(|row| row.map(Num::from))),
                translation: Some(a.translation.map(Num::from)),
                name: None,
                params: None,
                claimed_lip,
            },
            MapKind::Named { name, params } => MapSpecRepr {
                kind: KindTag::Named,
                matrix: None,
                translation: None,
                name: Some(name),
                params: Some(params.into_iter().map(Num::from).collect()),
                claimed_lip,
            },
        }
    }
}

pub type MapFactory = Arc<dyn Fn(&[f64]) -> Result<Arc<dyn PlaneMap>> + Send + Sync>;

/// Registry of named maps. Factories validate their parameter lists.
#[derive(Clone, Default)]
pub struct MapTable {
    entries: BTreeMap<String, MapFactory>,
}

impl fmt::Debug for MapTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

impl MapTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(&[f64]) -> Result<Arc<dyn PlaneMap>> + Send + Sync + 'static,
    {
        self.entries.insert(name.to_string(), Arc::new(factory));
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn resolve(&self, spec: &MapSpec) -> Result<Arc<dyn PlaneMap>> {
        match &spec.kind {
            MapKind::Affine(a) => Ok(Arc::new(*a)),
            MapKind::Named { name, params } => {
                let factory = self
                    .entries
                    .get(name)
                    .ok_or_else(|| Error::UnknownMap(name.clone()))?;
                factory(params)
            }
        }
    }
}

/// Reads a parameter that must be a nonnegative integer.
pub(crate) fn int_param(map: &str, params: &[f64], i: usize) -> Result<usize> {
    let v = *params
        .get(i)
        .ok_or_else(|| Error::domain(map, format!("missing parameter #{}", i + 1)))?;
    if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(Error::domain(
            map,
            format!("parameter {v} is not a nonnegative integer"),
        ));
    }
    Ok(v as usize)
}

pub(crate) fn expect_params(map: &str, params: &[f64], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(Error::domain(
            map,
            format!("expected {n} parameter(s), got {}", params.len()),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_examples() {
        let t = MapSpec::affine([[1.0, 0.0], [0.0, 1.0]], [1.0, 2.0]).unwrap();
        let table = MapTable::new();
        assert_eq!(
            apply_map(&table, &t, Point2::ORIGIN).unwrap(),
            Point2::new(1.0, 2.0)
        );
        let h = MapSpec::affine([[0.5, 0.0], [0.0, 0.5]], [0.0, 0.0]).unwrap();
        assert_eq!(
            apply_map(&table, &h, Point2::new(1.0, 0.0)).unwrap(),
            Point2::new(0.5, 0.0)
        );
    }

    #[test]
    fn unknown_name_is_an_error() {
        let table = MapTable::new();
        let err = apply_map(&table, &MapSpec::named("nope", &[]), Point2::ORIGIN).unwrap_err();
        assert!(matches!(err, Error::UnknownMap(n) if n == "nope"));
    }

    #[test]
    fn operator_norm_of_known_matrices() {
        assert!((Affine::rotation(0.7).operator_norm() - 1.0).abs() < 1e-15);
        assert_eq!(Affine::scaling(0.5, [0.0, 0.0]).operator_norm(), 0.5);
        let shear = Affine::new([[1.0, 1.0], [0.0, 1.0]], [0.0, 0.0]).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((shear.operator_norm() - golden).abs() < 1e-14);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let a = MapSpec::affine(
            [[0.1, 1.0 / 3.0], [-2.0e-17, 0.7]],
            [std::f64::consts::PI, 1e300],
        )
        .unwrap()
        .with_lip(0.9999999999999999);
        let n = MapSpec::named("snake_cover", &[3.0, 64.0]);
        let text = serde_json::to_string(&vec![a.clone(), n.clone()]).unwrap();
        let back: Vec<MapSpec> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, vec![a, n]);
    }

    #[test]
    fn json_accepts_plain_numbers() {
        let s = r#"{"kind":"affine","matrix":[[0.5,0],[0,0.5]],"translation":["0.5",0]}"#;
        let m: MapSpec = serde_json::from_str(s).unwrap();
        assert_eq!(m.kind, MapKind::Affine(Affine::scaling(0.5, [0.5, 0.0])));
        let missing = r#"{"kind":"affine","matrix":[[1,0],[0,1]]}"#;
        assert!(serde_json::from_str::<MapSpec>(missing).is_err());
    }
}
