use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Working precision of embeddings and the enumeration node cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub precision_bits: u32,
    pub node_budget: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { precision_bits: DEFAULT_PRECISION_BITS, node_budget: DEFAULT_NODE_BUDGET }
    }
}

#[derive(Deserialize, Default)]
struct ConfigFile {
    precision: Option<u32>,
    node_budget: Option<u64>,
}

impl Config {
    /// Defaults overridden by `HERMLAT_PRECISION` and `HERMLAT_NODE_BUDGET`.
    pub fn from_env() -> Result<Self> {
        Config::default().merge_env()
    }

    /// Override with `HERMLAT_PRECISION` and `HERMLAT_NODE_BUDGET` when set.
    pub fn merge_env(self) -> Result<Self> {
        let mut c = self;
        if let Ok(v) = std::env::var("HERMLAT_PRECISION") {
            c.precision_bits = v.trim().parse().map_err(|_| Error::Parse(format!("HERMLAT_PRECISION=`{v}`")))?;
        }
        if let Ok(v) = std::env::var("HERMLAT_NODE_BUDGET") {
            c.node_budget = v.trim().parse().map_err(|_| Error::Parse(format!("HERMLAT_NODE_BUDGET=`{v}`")))?;
        }
        Ok(c)
    }

    /// Apply a TOML config file with keys `precision` and `node_budget`.
    pub fn merge_file(mut self, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let f: ConfigFile = toml::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(p) = f.precision {
            self.precision_bits = p;
        }
        if let Some(b) = f.node_budget {
            self.node_budget = b;
        }
        Ok(self)
    }
}
