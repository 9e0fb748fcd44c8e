use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::map::{MapSpec, MapTable, PlaneMap};
use crate::error::{Error, Result};
use crate::geometry::Point2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every map is a contraction with a claimed constant below 1.
    Strict,
    /// Maps are weak contractions.
    Weak,
    /// Maps are only continuous; used with composition certificates.
    Topological,
}

/// Wire format of an [`IfsSystem`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IfsDocument {
    pub maps: Vec<MapSpec>,
    pub mode: Mode,
}

/// An ordered finite family of plane maps with resolved evaluators.
#[derive(Clone)]
pub struct IfsSystem {
    specs: Vec<MapSpec>,
    mode: Mode,
    maps: Vec<Arc<dyn PlaneMap>>,
}

impl std::fmt::Debug for IfsSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IfsSystem")
            .field("specs", &self.specs)
            .field("mode", &self.mode)
            .finish()
    }
}

impl IfsSystem {
    pub fn new(specs: Vec<MapSpec>, mode: Mode, table: &MapTable) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::InvalidArgument(
                "an IFS needs at least one map".into(),
            ));
        }
        if mode == Mode::Strict {
            for s in &specs {
                match s.claimed_lip {
                    Some(l) if l < 1.0 => {}
                    Some(l) => {
                        return Err(Error::InvalidArgument(format!(
                            "strict system: `{}` claims Lipschitz constant {l} >= 1",
                            s.label()
                        )))
                    }
                    None => {
                        return Err(Error::InvalidArgument(format!(
                            "strict system: `{}` has no claimed Lipschitz constant",
                            s.label()
                        )))
                    }
                }
            }
        }
        let maps = specs
            .iter()
            .map(|s| table.resolve(s))
            .collect::<Result<_>>()?;
        Ok(Self { specs, mode, maps })
    }

    pub fn from_document(doc: IfsDocument, table: &MapTable) -> Result<Self> {
        Self::new(doc.maps, doc.mode, table)
    }

    pub fn from_json(text: &str, table: &MapTable) -> Result<Self> {
        Self::from_document(serde_json::from_str(text)?, table)
    }

    pub fn to_document(&self) -> IfsDocument {
        IfsDocument {
            maps: self.specs.clone(),
            mode: self.mode,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    /// Always false; systems are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn specs(&self) -> &[MapSpec] {
        &self.specs
    }

    pub fn map(&self, i: usize) -> &dyn PlaneMap {
        self.maps[i].as_ref()
    }

    pub fn maps(&self) -> &[Arc<dyn PlaneMap>] {
        &self.maps
    }

    pub fn apply(&self, i: usize, p: Point2) -> Result<Point2> {
        self.maps[i].apply(p)
    }
}
