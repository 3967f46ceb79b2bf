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

//! Synthetic mention corpora with planted journal qualities.
//!
//! Every author posts on one source, draws an activity level from a
//! discretized Pareto distribution, and sends each of their mentions to
//! journal `j` with probability proportional to its quality `q_j`.
//!
//! ```toml
//! journals = 20
//! quality_ratio = 2.0          # q_j = ratio^-j; or qualities = [...]
//!                              # or power_law_exponent = 1.2 (q_j = (j+1)^-a)
//! authors = 50000
//! papers_per_journal = 500
//!
//! [activity]
//! alpha = 1.5                  # Pareto tail exponent
//! min = 1
//! max = 5000
//!
//! [sources]
//! twitter = 0.6
//! facebook = 0.15
//! blogs = 0.1
//! news = 0.1
//! "google+" = 0.05
//! ```

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Pareto;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::MentionRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ActivitySpec {
    pub alpha: f64,
    pub min: u32,
    pub max: u32,
}

impl Default for ActivitySpec {
    fn default() -> Self {
        ActivitySpec {
            alpha: 1.5,
            min: 1,
            max: 5000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub journals: usize,
    #[serde(default)]
    pub qualities: Option<Vec<f64>>,
    #[serde(default)]
    pub quality_ratio: Option<f64>,
    #[serde(default)]
    pub power_law_exponent: Option<f64>,
    pub authors: usize,
    #[serde(default = "default_papers")]
    pub papers_per_journal: usize,
    #[serde(default)]
    pub activity: ActivitySpec,
    #[serde(default = "default_sources")]
    pub sources: BTreeMap<String, f64>,
}

fn default_papers() -> usize {
    500
}

fn default_sources() -> BTreeMap<String, f64> {
    [
        ("twitter", 0.6),
        ("facebook", 0.15),
        ("blogs", 0.1),
        ("news", 0.1),
        ("google+", 0.05),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_owned(), v))
    .collect()
}

impl SyntheticSpec {
    /// A spec with geometric qualities and default activity and sources.
    pub fn geometric(journals: usize, ratio: f64, authors: usize) -> Self {
        SyntheticSpec {
            journals,
            qualities: None,
            quality_ratio: Some(ratio),
            power_law_exponent: None,
            authors,
            papers_per_journal: default_papers(),
            activity: ActivitySpec::default(),
            sources: default_sources(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: SyntheticSpec = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
        Self::from_toml_str(&text).map_err(|e| e.in_file(path))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(format!("synthetic spec: {m}")));
        if self.journals == 0 || self.authors == 0 || self.papers_per_journal == 0 {
            return bad("journals, authors and papers_per_journal must be positive");
        }
        let generators = [
            self.qualities.is_some(),
            self.quality_ratio.is_some(),
            self.power_law_exponent.is_some(),
        ];
        if generators.iter().filter(|g| **g).count() > 1 {
            return bad("give at most one of qualities, quality_ratio, power_law_exponent");
        }
        if let Some(q) = &self.qualities {
            if q.len() != self.journals || q.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return bad("qualities must be one positive number per journal");
            }
        }
        if self.quality_ratio.is_some_and(|r| !(r.is_finite() && r > 0.0)) {
            return bad("quality_ratio must be positive");
        }
        if self.power_law_exponent.is_some_and(|a| !a.is_finite()) {
            return bad("power_law_exponent must be finite");
        }
        let a = &self.activity;
        if !(a.alpha.is_finite() && a.alpha > 0.0) || a.min == 0 || a.max < a.min {
            return bad("activity needs alpha > 0 and 1 <= min <= max");
        }
        if self.sources.is_empty() || self.sources.values().any(|w| !(w.is_finite() && *w > 0.0)) {
            return bad("sources must be non-empty with positive rates");
        }
        Ok(())
    }

    /// Planted quality of each journal, in journal-id order.
    pub fn planted_qualities(&self) -> Vec<f64> {
        let n = self.journals;
        if let Some(q) = &self.qualities {
            return q.clone();
        }
        if let Some(r) = self.quality_ratio {
            return (0..n).map(|j| r.powi(-(j as i32))).collect();
        }
        let a = self.power_law_exponent.unwrap_or(1.0);
        (0..n).map(|j| ((j + 1) as f64).powf(-a)).collect()
    }

    /// Journal ids, zero-padded so lexicographic order is index order.
    pub fn journal_ids(&self) -> Vec<String> {
        let width = self.journals.to_string().len();
        (1..=self.journals).map(|j| format!("J{j:0width$}")).collect()
    }
}

/// Draw a corpus. The same spec and seed always give the same records.
pub fn generate_synthetic(spec: &SyntheticSpec, seed: u64) -> Result<Vec<MentionRecord>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let journals = spec.journal_ids();
    let pick_journal = WeightedIndex::new(spec.planted_qualities())
        .map_err(|e| Error::Config(format!("synthetic spec: {e}")))?;
    let sources: Vec<&String> = spec.sources.keys().collect();
    let pick_source = WeightedIndex::new(spec.sources.values().copied())
        .map_err(|e| Error::Config(format!("synthetic spec: {e}")))?;
    let act = &spec.activity;
    let activity = Pareto::new(act.min as f64, act.alpha)
        .map_err(|e| Error::Config(format!("synthetic spec: {e}")))?;

    let author_width = spec.authors.to_string().len();
    let paper_width = spec.papers_per_journal.to_string().len();
    let mut records = Vec::new();
    for a in 0..spec.authors {
        let author = format!("A{a:0author_width$}");
        let source = sources[pick_source.sample(&mut rng)];
        let draws = activity.sample(&mut rng).floor().min(act.max as f64) as u32;
        for _ in 0..draws.max(act.min) {
            let j = pick_journal.sample(&mut rng);
            let paper = rng.random_range(0..spec.papers_per_journal);
            records.push(MentionRecord {
                author_id: author.clone(),
                source: source.clone(),
                paper_id: format!("{}-P{paper:0paper_width$}", journals[j]),
                journal_id: journals[j].clone(),
                timestamp: None,
            });
        }
    }
    Ok(records)
}

/// Write records as `author_id,source,paper_id,journal_id` CSV.
pub fn write_mentions_csv<W: Write>(records: &[MentionRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["author_id", "source", "paper_id", "journal_id"])?;
    for r in records {
        w.write_record([&r.author_id, &r.source, &r.paper_id, &r.journal_id])?;
    }
    w.flush()?;
    Ok(())
}
