// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Pipeline configuration file.
//!
//! ```toml
//! output_dir = "out"
//!
//! [input]
//! mentions = "mentions.csv"      # or a [synthetic] table instead
//! format = "csv"                 # optional; guessed from the extension
//! taxonomy = "taxonomy.toml"     # optional; built-in defaults otherwise
//! external = [{ name = "IF", path = "if.csv" }]
//!
//! [synthetic]
//! spec = "synth.toml"
//! seed = 7
//!
//! [schemes]
//! enabled = ["bc", "ca", "qpr", "qh", "sh", "s-psr", "qh@blogs"]
//! dedup = false
//! paper_count = "distinct_papers"  # or "total_mentions"
//! min_authors = 1
//! psr = "opponents"                # or "global"
//!
//! [solver]
//! damping = 0.85
//! tol = 1e-10
//! max_iter = 1000
//! voting = "winners_and_losers_vote"  # or "losers_vote" (PageRank only)
//!
//! [comparison]
//! methods = ["pearson", "spearman", "kendall"]
//! primary = "spearman"             # feeds PCA and the dendrogram
//! linkage = "average"              # single | complete | average
//!
//! [output]
//! networks = false                 # also dump S/P/Q coordinate files
//! ```
//!
//! Relative paths are resolved against the config file's directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::comparison::{CorrelationMethod, Linkage};
use crate::counts::PaperCountMode;
use crate::error::{Error, Result};
use crate::ingest::InputFormat;
use crate::rating::{PsrNormalization, SolverParams};
use crate::scheme::Scheme;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalInput {
    pub name: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputConfig {
    pub mentions: Option<PathBuf>,
    pub format: Option<InputFormat>,
    pub taxonomy: Option<PathBuf>,
    pub external: Vec<ExternalInput>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticInput {
    pub spec: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchemeConfig {
    pub enabled: Vec<Scheme>,
    pub dedup: bool,
    pub paper_count: PaperCountMode,
    pub min_authors: usize,
    pub psr: PsrNormalization,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            enabled: Vec::new(),
            dedup: false,
            paper_count: PaperCountMode::default(),
            min_authors: 1,
            psr: PsrNormalization::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComparisonConfig {
    pub methods: Vec<CorrelationMethod>,
    pub primary: CorrelationMethod,
    pub linkage: Linkage,
}

impl Default for ComparisonConfig {
    fn default() -> Self {
        ComparisonConfig {
            methods: CorrelationMethod::ALL.to_vec(),
            primary: CorrelationMethod::Spearman,
            linkage: Linkage::Average,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub networks: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub output_dir: PathBuf,
    #[serde(default)]
    pub input: InputConfig,
    #[serde(default)]
    pub synthetic: Option<SyntheticInput>,
    #[serde(default)]
    pub schemes: SchemeConfig,
    #[serde(default)]
    pub solver: SolverParams,
    #[serde(default)]
    pub comparison: ComparisonConfig,
    #[serde(default)]
    pub output: OutputConfig,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl PipelineConfig {
    pub fn from_toml_str(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.base_dir = base_dir.into();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml_str(&text, base).map_err(|e| e.in_file(path))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schemes.enabled.is_empty() {
            return Err(Error::Config("at least one scheme must be enabled".into()));
        }
        match (&self.input.mentions, &self.synthetic) {
            (None, None) => {
                return Err(Error::Config(
                    "either input.mentions or a [synthetic] table is required".into(),
                ))
            }
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "input.mentions and [synthetic] are mutually exclusive".into(),
                ))
            }
            _ => {}
        }
        if self.schemes.min_authors == 0 {
            return Err(Error::Config("schemes.min_authors must be at least 1".into()));
        }
        let mut labels: Vec<String> = self.schemes.enabled.iter().map(Scheme::label).collect();
        labels.extend(self.input.external.iter().map(|e| e.name.clone()));
        let mut sorted = labels.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Config(format!("rating `{}` is listed twice", w[0])));
        }
        Ok(())
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }
}
