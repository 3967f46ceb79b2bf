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

//! The full pipeline: records -> ratings -> comparison -> files.
//!
//! Everything is computed in memory first; files are only written once
//! every stage has succeeded, each through a temporary file and a rename.
//! Output bytes depend only on the config and the inputs.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::comparison::{correlation_matrix, hcluster_with, pca, RatingEnsemble};
use crate::error::{Error, Result};
use crate::ingest::{build_profile_with, load_external_ratings, read_mentions, ExternalRating, MentionRecord, SourceTaxonomy};
use crate::network::NetworkKind;
use crate::pipeline::config::PipelineConfig;
use crate::pipeline::svg::pca_scatter;
use crate::pipeline::synth::{generate_synthetic, write_mentions_csv, SyntheticSpec};
use crate::rating::{to_ranking, Convergence};
use crate::scheme::{Evaluator, SchemeOptions};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "ALTRANK_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub records: usize,
    pub journals: usize,
    pub authors: usize,
    pub papers: usize,
    pub mentions_by_source: BTreeMap<String, u64>,
    pub unknown_sources: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExternalStats {
    pub name: String,
    pub journals: usize,
    pub unmatched: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeStats {
    pub label: String,
    pub convergence: Option<Convergence>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationStats {
    pub method: String,
    pub zero_variance: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: PipelineConfig,
    pub corpus: CorpusStats,
    pub external: Vec<ExternalStats>,
    pub schemes: Vec<SchemeStats>,
    pub correlations: Vec<CorrelationStats>,
    pub pca_explained_variance: Option<Vec<f64>>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub output_dir: PathBuf,
    pub manifest: Manifest,
}

fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
    }
}

/// Run `f` on a pool limited by `ALTRANK_THREADS`, if set.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match thread_cap()? {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(f),
    }
}

pub fn run_pipeline(config: &PipelineConfig) -> Result<RunReport> {
    with_thread_cap(|| run(config))
}

/// Characters allowed in output file names; others become `_`.
fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "-_.@+".contains(c) { c } else { '_' })
        .collect()
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn load_records(config: &PipelineConfig, outputs: &mut Vec<(String, Vec<u8>)>) -> Result<Vec<MentionRecord>> {
    if let Some(synth) = &config.synthetic {
        let spec_path = config.resolve(&synth.spec);
        let spec = SyntheticSpec::load(&spec_path)?;
        let records = generate_synthetic(&spec, synth.seed)?;
        outputs.push((
            "synthetic_mentions.csv".into(),
            csv_bytes(|b| write_mentions_csv(&records, b))?,
        ));
        return Ok(records);
    }
    let path = config.resolve(config.input.mentions.as_deref().expect("validated"));
    let parsed = read_mentions(&path, config.input.format)?;
    parsed.into_strict().map_err(|e| e.in_file(&path))
}

fn run(config: &PipelineConfig) -> Result<RunReport> {
    config.validate()?;
    let mut outputs: Vec<(String, Vec<u8>)> = Vec::new();

    let records = load_records(config, &mut outputs)?;
    if records.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let taxonomy = match &config.input.taxonomy {
        Some(p) => SourceTaxonomy::load(&config.resolve(p))?,
        None => SourceTaxonomy::default(),
    };
    let externals = config
        .input
        .external
        .iter()
        .map(|e| {
            let path = config.resolve(&e.path);
            let file = fs::File::open(&path).map_err(|err| Error::from(err).in_file(&path))?;
            load_external_ratings(file, &e.name).map_err(|err| err.in_file(&path))
        })
        .collect::<Result<Vec<ExternalRating>>>()?;

    let options = SchemeOptions {
        taxonomy: taxonomy.clone(),
        profile: crate::ingest::ProfileOptions {
            dedup: config.schemes.dedup,
        },
        solver: config.solver,
        min_authors: config.schemes.min_authors,
        paper_count: config.schemes.paper_count,
        psr: config.schemes.psr,
    };
    let schemes = &config.schemes.enabled;
    let evaluator = Evaluator::new(&records, options.clone(), schemes);
    let outcomes = evaluator.evaluate_all(schemes)?;

    let full = build_profile_with(&records, None, options.profile);
    let journals = full.journals().to_vec();
    let mut mentions_by_source = BTreeMap::new();
    for r in &records {
        *mentions_by_source.entry(r.source.clone()).or_insert(0u64) += 1;
    }
    let unknown_sources: Vec<String> = mentions_by_source
        .keys()
        .filter(|s| !taxonomy.is_known(s))
        .cloned()
        .collect();
    for s in &unknown_sources {
        log::warn!("source `{s}` is not in the taxonomy; treating it as `other`");
    }
    let corpus = CorpusStats {
        records: records.len(),
        journals: journals.len(),
        authors: full.authors().len(),
        papers: records.iter().map(|r| r.paper_id.as_str()).collect::<BTreeSet<_>>().len(),
        mentions_by_source,
        unknown_sources,
    };

    for o in &outcomes {
        let ranking = to_ranking(&o.rating);
        let bytes = csv_bytes(|b| {
            let mut w = csv::Writer::from_writer(b);
            w.write_record(["scheme", "journal_id", "score", "rank"])?;
            for &i in &ranking.order {
                w.write_record([
                    ranking.scheme.as_str(),
                    ranking.journals[i].as_str(),
                    &ranking.scores[i].to_string(),
                    &ranking.ranks[i].to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        })?;
        outputs.push((format!("rankings/{}.csv", file_stem(&o.scheme.label())), bytes));
    }

    if config.output.networks {
        let mut keys: BTreeSet<(Option<String>, NetworkKind)> = BTreeSet::new();
        for s in schemes {
            if let Some(k) = s.metric.network() {
                keys.insert((s.source.clone(), k));
            }
        }
        for (src, kind) in keys {
            let net = evaluator.network(src.as_deref(), kind).expect("prepared");
            let name = match &src {
                Some(s) => format!("networks/{}@{}.csv", kind, file_stem(s)),
                None => format!("networks/{kind}.csv"),
            };
            let mut buf = Vec::new();
            net.write_coordinates(&mut buf)?;
            outputs.push((name, buf));
        }
    }

    let external_stats = externals
        .iter()
        .map(|e| ExternalStats {
            name: e.name.clone(),
            journals: e.scores.len(),
            unmatched: e.unmatched(&journals).into_iter().map(str::to_owned).collect(),
        })
        .collect();

    let mut ensemble = RatingEnsemble::new(journals.clone());
    for o in &outcomes {
        ensemble.push_rating(&o.rating)?;
    }
    for e in &externals {
        ensemble.push_external(e)?;
    }

    let mut correlations = Vec::new();
    let mut pca_explained_variance = None;
    if ensemble.len() >= 2 {
        let mut methods = config.comparison.methods.clone();
        if !methods.contains(&config.comparison.primary) {
            methods.push(config.comparison.primary);
        }
        for method in methods {
            let corr = correlation_matrix(&ensemble, method)?;
            for (a, b) in &corr.zero_variance {
                log::warn!("{method} correlation of `{a}` and `{b}` is undefined (constant scores); set to 0");
            }
            outputs.push((format!("correlation_{method}.csv"), csv_bytes(|b| corr.write_csv(b))?));
            correlations.push(CorrelationStats {
                method: method.to_string(),
                zero_variance: corr.zero_variance.clone(),
            });
            if method == config.comparison.primary {
                let projection = pca(&corr);
                outputs.push(("pca.csv".into(), csv_bytes(|b| projection.write_csv(b))?));
                outputs.push(("pca.svg".into(), pca_scatter(&projection).into_bytes()));
                let tree = hcluster_with(&corr, config.comparison.linkage);
                outputs.push(("dendrogram.nwk".into(), format!("{}\n", tree.to_newick()).into_bytes()));
                pca_explained_variance = Some(projection.explained_variance);
            }
        }
    } else {
        log::info!("fewer than two ratings; skipping comparison outputs");
    }

    let mut files: Vec<String> = outputs.iter().map(|(n, _)| n.clone()).collect();
    files.push("manifest.json".into());
    files.sort();
    let manifest = Manifest {
        tool: "altrank",
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        corpus,
        external: external_stats,
        schemes: outcomes
            .iter()
            .map(|o| SchemeStats {
                label: o.scheme.label(),
                convergence: o.convergence,
            })
            .collect(),
        correlations,
        pca_explained_variance,
        files,
    };
    let mut manifest_bytes = serde_json::to_vec_pretty(&manifest)?;
    manifest_bytes.push(b'\n');
    outputs.push(("manifest.json".into(), manifest_bytes));

    let out_dir = config.resolve(&config.output_dir);
    for (name, bytes) in &outputs {
        write_atomic(&out_dir.join(name), bytes)?;
    }
    Ok(RunReport {
        output_dir: out_dir,
        manifest,
    })
}

/// Write through a sibling temporary file and rename it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let wrap = |e: std::io::Error| Error::from(e).in_file(path);
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(wrap)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(wrap)?;
    fs::rename(&tmp, path).map_err(wrap)
}
