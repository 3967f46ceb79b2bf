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

//! Journal ratings from altmetric mention data.
//!
//! Mention records are aggregated into a journal-by-author count matrix
//! ([`ingest`]). From it come simple count ratings ([`counts`]) and three
//! journal-vs-journal comparison networks built only from authors who
//! mention both journals of a pair ([`network`]). The networks are rated with
//! PageRank, HITS and the points spread rating ([`rating`]), and any set of
//! ratings can be compared with correlation matrices, PCA and hierarchical
//! clustering ([`comparison`]). [`pipeline`] runs the whole chain from a
//! config file and generates synthetic corpora.

// Square-matrix loops read [j][l] and [l][j] together.
#![allow(clippy::needless_range_loop)]

pub mod comparison;
pub mod counts;
pub mod error;
pub mod ingest;
pub mod network;
pub mod pipeline;
pub mod rating;
pub mod scheme;

pub use comparison::{
    correlation_matrix, fractional_ranks, hcluster, hcluster_with, pca, CorrelationMatrix,
    CorrelationMethod, Dendrogram, Linkage, PcaResult, RatingEnsemble,
};
pub use counts::{blind_count, class_count, paper_count, weighted_count, PaperCountMode};
pub use error::{Error, Result};
pub use ingest::{
    build_profile, build_profile_with, load_external_ratings, parse_mentions, ExternalRating,
    InputFormat, MentionProfile, MentionRecord, ProfileOptions, SourceClass, SourceTaxonomy,
};
pub use network::{
    build_p, build_q, build_s, comparable_authors, ComparableIndex, JournalNetwork, NetworkKind,
};
pub use rating::{
    hits, pagerank, points_spread, to_ranking, HitsResult, PsrNormalization, Ranking,
    RatingVector, SolverParams, Voting,
};
pub use scheme::{Evaluator, Metric, Scheme, SchemeOptions};
