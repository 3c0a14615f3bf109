//! Suite configuration: defaults, plain-text key-value parsing, CLI
//! overrides.
//!
//! Config files are flat `key = value` text; `#` starts a comment.
//! Documented keys: `topology` (circle|torus), `sites` (e.g. `32` or
//! `8x8`), `group` (su2|su3), `seed`, `epsilon`, `region` (site list or
//! ranges, e.g. `0-7`), `mc_samples`, and `tol.<check>` threshold
//! overrides.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lattice::{Region, SampledManifold};

#[derive(Debug, Clone, PartialEq)]
pub enum TopologySpec {
    Circle(usize),
    Torus(usize, usize),
}

/// Configuration of a verification run. Defaults reproduce the acceptance
/// suite exactly.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub topology: TopologySpec,
    /// 2 for su(2), 3 for su(3).
    pub group: usize,
    pub region: String,
    pub seed: u64,
    pub epsilon: f64,
    pub mc_samples: usize,
    /// Per-check threshold overrides, keyed by check name.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            topology: TopologySpec::Circle(32),
            group: 2,
            region: "0-7".to_string(),
            seed: 7,
            epsilon: 0.2,
            mc_samples: 100_000,
            tolerances: BTreeMap::new(),
        }
    }
}

impl SuiteConfig {
    /// Parses flat key-value text, starting from the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: lineno + 1,
                message: format!("expected 'key = value', got '{line}'"),
            })?;
            cfg.set(key.trim(), value.trim(), lineno + 1)?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Sets one key, with line-numbered diagnostics.
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let bad = |message: String| Error::Config { line, message };
        match key {
            "topology" => match value {
                "circle" => {
                    if let TopologySpec::Torus(..) = self.topology {
                        self.topology = TopologySpec::Circle(32);
                    }
                }
                "torus" => {
                    if let TopologySpec::Circle(..) = self.topology {
                        self.topology = TopologySpec::Torus(8, 8);
                    }
                }
                _ => return Err(bad(format!("unknown topology '{value}'"))),
            },
            "sites" => {
                if let Some((r, c)) = value.split_once('x') {
                    let rows: usize = r
                        .trim()
                        .parse()
                        .map_err(|_| bad(format!("bad torus rows '{r}'")))?;
                    let cols: usize = c
                        .trim()
                        .parse()
                        .map_err(|_| bad(format!("bad torus cols '{c}'")))?;
                    self.topology = TopologySpec::Torus(rows, cols);
                } else {
                    let n: usize = value
                        .parse()
                        .map_err(|_| bad(format!("bad site count '{value}'")))?;
                    self.topology = TopologySpec::Circle(n);
                }
            }
            "group" => {
                self.group = match value {
                    "su2" | "2" => 2,
                    "su3" | "3" => 3,
                    _ => return Err(bad(format!("unknown group '{value}'"))),
                }
            }
            "region" => self.region = value.to_string(),
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| bad(format!("bad seed '{value}'")))?
            }
            "epsilon" => {
                self.epsilon = value
                    .parse()
                    .map_err(|_| bad(format!("bad epsilon '{value}'")))?
            }
            "mc_samples" => {
                self.mc_samples = value
                    .parse()
                    .map_err(|_| bad(format!("bad mc_samples '{value}'")))?
            }
            _ => {
                if let Some(check) = key.strip_prefix("tol.") {
                    let tol: f64 = value
                        .parse()
                        .map_err(|_| bad(format!("bad tolerance '{value}'")))?;
                    self.tolerances.insert(check.to_string(), tol);
                } else {
                    return Err(bad(format!("unknown key '{key}'")));
                }
            }
        }
        Ok(())
    }

    pub fn manifold(&self) -> Result<SampledManifold> {
        match self.topology {
            TopologySpec::Circle(n) => SampledManifold::circle(n),
            TopologySpec::Torus(r, c) => SampledManifold::torus(r, c),
        }
    }

    pub fn parsed_region(&self) -> Result<Region> {
        let mani = self.manifold()?;
        Region::parse(&self.region, mani.sites())
    }

    /// Threshold for a named check, honoring overrides.
    pub fn tol(&self, check: &str, default: f64) -> f64 {
        self.tolerances.get(check).copied().unwrap_or(default)
    }

    /// One-line summary embedded in reports.
    pub fn summary(&self) -> String {
        let topo = match self.topology {
            TopologySpec::Circle(n) => format!("circle/{n}"),
            TopologySpec::Torus(r, c) => format!("torus/{r}x{c}"),
        };
        format!(
            "topology={topo} group=su{} region={} seed={} epsilon={} mc_samples={}",
            self.group, self.region, self.seed, self.epsilon, self.mc_samples
        )
    }
}
