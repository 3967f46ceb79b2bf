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

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed record: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error(
        "line {line}: paper `{paper_id}` was already seen in journal `{first}`, now in `{second}`"
    )]
    InconsistentJournal {
        line: usize,
        paper_id: String,
        first: String,
        second: String,
    },

    #[error("row {row}: score `{value}` is not a number")]
    NonNumericScore { row: usize, value: String },

    #[error("row {row}: journal `{journal_id}` appears more than once")]
    DuplicateJournal { row: usize, journal_id: String },

    #[error("source `{0}` has no weight and no `other` default is configured")]
    MissingWeight(String),

    #[error("invalid taxonomy: {0}")]
    InvalidTaxonomy(String),

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("network has no nonzero weights")]
    DegenerateNetwork,

    #[error("schemes `{0}` and `{1}` share fewer than 3 journals")]
    InsufficientOverlap(String, String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),

    #[error("mention corpus is empty")]
    EmptyCorpus,

    #[error("invalid config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Attach the file the error originated from.
    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::File {
            path: path.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with any file context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::File { source, .. } => source.root(),
            other => other,
        }
    }
}
