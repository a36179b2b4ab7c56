//! TOML query files.
//!
//! ```toml
//! agents = [["v1", "v10"], ["v2", "v9"]]
//! categories = [["v3", "v4"], ["v5", "v6"], ["v7", "v8"]]
//! ```
//!
//! Integers are dense PoI ids; strings are external ids.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{MultiModalNetwork, PoiId};
use crate::planner::{Agent, QueryInstance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PoiRef {
    Dense(u32),
    External(String),
}

impl PoiRef {
    pub fn resolve(&self, net: &MultiModalNetwork) -> Result<PoiId> {
        match self {
            PoiRef::Dense(i) => {
                let id = PoiId(*i);
                net.check_poi(id)?;
                Ok(id)
            }
            PoiRef::External(s) => net.require_external(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryFile {
    pub agents: Vec<(PoiRef, PoiRef)>,
    pub categories: Vec<Vec<PoiRef>>,
}

impl QueryFile {
    pub fn resolve(&self, net: &MultiModalNetwork) -> Result<QueryInstance> {
        let agents = self
            .agents
            .iter()
            .map(|(s, d)| {
                Ok(Agent {
                    source: s.resolve(net)?,
                    destination: d.resolve(net)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let categories = self
            .categories
            .iter()
            .map(|c| c.iter().map(|p| p.resolve(net)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        QueryInstance::new(agents, categories)
    }
}

pub fn parse_query(text: &str, label: &Path) -> Result<QueryFile> {
    toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map_or(0, |s| text[..s.start.min(text.len())].matches('\n').count() as u64 + 1);
        Error::parse(label, line, e.message().to_string())
    })
}

pub fn load_query(path: impl AsRef<Path>, net: &MultiModalNetwork) -> Result<QueryInstance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::io(path, e),
    })?;
    parse_query(&text, path)?.resolve(net)
}
