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

//! Count-based journal ratings: bc, sbc, nsbc, ca and pc.
//!
//! None of these are normalized by the number of articles a journal
//! publishes.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ingest::{MentionProfile, SourceClass, SourceTaxonomy};
use crate::rating::RatingVector;

/// Every mention adds one to its journal.
pub fn blind_count(profile: &MentionProfile) -> RatingVector {
    let scores = (0..profile.journals().len())
        .map(|j| profile.journal_row(j).iter().map(|&(_, c)| c as f64).sum())
        .collect();
    RatingVector::new("bc", profile.journals().to_vec(), scores)
}

/// Blind count over the mentions from one class of sources.
pub fn class_count(
    profile: &MentionProfile,
    taxonomy: &SourceTaxonomy,
    class: SourceClass,
) -> RatingVector {
    let in_class: Vec<bool> = profile
        .sources()
        .iter()
        .map(|s| taxonomy.class_of(s) == class)
        .collect();
    let scores = (0..profile.journals().len())
        .map(|j| {
            profile
                .source_row(j)
                .iter()
                .filter(|&&(s, _)| in_class[s])
                .map(|&(_, c)| c as f64)
                .sum()
        })
        .collect();
    let label = match class {
        SourceClass::Social => "sbc",
        SourceClass::Nonsocial => "nsbc",
    };
    RatingVector::new(label, profile.journals().to_vec(), scores)
}

/// Each mention adds its source's weight.
pub fn weighted_count(profile: &MentionProfile, taxonomy: &SourceTaxonomy) -> Result<RatingVector> {
    let weights = profile
        .sources()
        .iter()
        .map(|s| taxonomy.weight(s))
        .collect::<Result<Vec<f64>>>()?;
    let scores = (0..profile.journals().len())
        .map(|j| {
            profile
                .source_row(j)
                .iter()
                .map(|&(s, c)| weights[s] * c as f64)
                .sum()
        })
        .collect();
    Ok(RatingVector::new("ca", profile.journals().to_vec(), scores))
}

/// How `pc` is read.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaperCountMode {
    /// Distinct papers with at least one mention.
    #[default]
    DistinctPapers,
    /// Total mentions of the journal's papers.
    TotalMentions,
}

pub fn paper_count(profile: &MentionProfile) -> RatingVector {
    paper_count_with(profile, PaperCountMode::DistinctPapers)
}

pub fn paper_count_with(profile: &MentionProfile, mode: PaperCountMode) -> RatingVector {
    let scores = (0..profile.journals().len())
        .map(|j| {
            let papers = profile.papers(j);
            match mode {
                PaperCountMode::DistinctPapers => papers.len() as f64,
                PaperCountMode::TotalMentions => papers.values().sum::<u64>() as f64,
            }
        })
        .collect();
    RatingVector::new("pc", profile.journals().to_vec(), scores)
}
