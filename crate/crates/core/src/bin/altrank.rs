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

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use altrank::ingest::{read_mentions, InputFormat, SourceTaxonomy};
use altrank::pipeline::run::{with_thread_cap, write_atomic};
use altrank::pipeline::synth::write_mentions_csv;
use altrank::pipeline::{generate_synthetic, run_pipeline, PipelineConfig, SyntheticSpec};
use altrank::rating::{to_ranking, SolverParams};
use altrank::scheme::{rate, Scheme, SchemeOptions};
use altrank::Result;

#[derive(Parser)]
#[command(name = "altrank", version, about = "Rank journals from altmetric mention data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Generate a synthetic mention corpus as CSV.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rate journals with one scheme and print the ranking as CSV.
    Rank {
        #[arg(long)]
        mentions: PathBuf,
        /// Scheme label, e.g. bc, ca, qpr, sh, s-psr, qh@blogs.
        #[arg(long)]
        scheme: Scheme,
        /// Input format; guessed from the file extension when omitted.
        #[arg(long)]
        format: Option<InputFormat>,
        #[arg(long)]
        taxonomy: Option<PathBuf>,
        #[arg(long, default_value_t = 0.85)]
        damping: f64,
    },
}

fn rank(
    mentions: PathBuf,
    scheme: Scheme,
    format: Option<InputFormat>,
    taxonomy: Option<PathBuf>,
    damping: f64,
) -> Result<()> {
    let records = read_mentions(&mentions, format)?
        .into_strict()
        .map_err(|e| e.in_file(&mentions))?;
    if records.is_empty() {
        return Err(altrank::Error::EmptyCorpus);
    }
    let options = SchemeOptions {
        taxonomy: match taxonomy {
            Some(p) => SourceTaxonomy::load(&p)?,
            None => SourceTaxonomy::default(),
        },
        solver: SolverParams {
            damping,
            ..Default::default()
        },
        min_authors: 1,
        ..Default::default()
    };
    let outcome = with_thread_cap(|| rate(&records, &scheme, &options))?;
    let ranking = to_ranking(&outcome.rating);
    let stdout = std::io::stdout();
    let mut w = csv::Writer::from_writer(stdout.lock());
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
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config } => PipelineConfig::load(&config)
            .and_then(|c| run_pipeline(&c))
            .map(|report| {
                let _ = writeln!(
                    std::io::stderr(),
                    "wrote {} files to {}",
                    report.manifest.files.len(),
                    report.output_dir.display()
                );
            }),
        Command::Synth { spec, seed, out } => SyntheticSpec::load(&spec)
            .and_then(|s| generate_synthetic(&s, seed))
            .and_then(|records| {
                let mut buf = Vec::new();
                write_mentions_csv(&records, &mut buf)?;
                write_atomic(&out, &buf)
            }),
        Command::Rank {
            mentions,
            scheme,
            format,
            taxonomy,
            damping,
        } => rank(mentions, scheme, format, taxonomy, damping),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
