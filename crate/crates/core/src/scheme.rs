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

//! Rating scheme labels and their evaluation against a record list.
//!
//! Labels are `<metric>[@<source>]`. Metrics are the count ratings `bc`,
//! `sbc`, `nsbc`, `ca`, `pc`, and `<network><method>` for networks `s`, `p`,
//! `q` and methods `pr` (PageRank), `h` (HITS hub) and `-psr` (points
//! spread), e.g. `qpr`, `ph`, `s-psr`. A `@source` suffix restricts the
//! mentions to one source first, as in `qh@blogs`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counts::{self, PaperCountMode};
use crate::error::{Error, Result};
use crate::ingest::{build_profile_with, MentionProfile, MentionRecord, ProfileOptions, SourceClass, SourceTaxonomy};
use crate::network::{build_network, comparable_authors, JournalNetwork, NetworkKind};
use crate::rating::{self, Convergence, PsrNormalization, RatingVector, SolverParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    BlindCount,
    SocialCount,
    NonsocialCount,
    WeightedCount,
    PaperCount,
    PageRank(NetworkKind),
    Hits(NetworkKind),
    PointsSpread(NetworkKind),
}

impl Metric {
    pub fn label(self) -> String {
        match self {
            Metric::BlindCount => "bc".into(),
            Metric::SocialCount => "sbc".into(),
            Metric::NonsocialCount => "nsbc".into(),
            Metric::WeightedCount => "ca".into(),
            Metric::PaperCount => "pc".into(),
            Metric::PageRank(k) => format!("{}pr", k.letter()),
            Metric::Hits(k) => format!("{}h", k.letter()),
            Metric::PointsSpread(k) => format!("{}-psr", k.letter()),
        }
    }

    pub fn network(self) -> Option<NetworkKind> {
        match self {
            Metric::PageRank(k) | Metric::Hits(k) | Metric::PointsSpread(k) => Some(k),
            _ => None,
        }
    }

    /// Every metric, counts first.
    pub fn all() -> Vec<Metric> {
        let mut out = vec![
            Metric::BlindCount,
            Metric::SocialCount,
            Metric::NonsocialCount,
            Metric::WeightedCount,
            Metric::PaperCount,
        ];
        for k in NetworkKind::ALL {
            out.extend([Metric::PageRank(k), Metric::Hits(k), Metric::PointsSpread(k)]);
        }
        out
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::all()
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| Error::UnknownScheme(s.to_owned()))
    }
}

/// A metric, optionally computed from a single source's mentions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scheme {
    pub metric: Metric,
    pub source: Option<String>,
}

impl Scheme {
    pub fn new(metric: Metric) -> Self {
        Scheme { metric, source: None }
    }

    pub fn label(&self) -> String {
        match &self.source {
            Some(s) => format!("{}@{s}", self.metric.label()),
            None => self.metric.label(),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (metric, source) = match s.split_once('@') {
            Some((m, src)) if !src.trim().is_empty() => (m, Some(src.trim().to_lowercase())),
            Some(_) => return Err(Error::UnknownScheme(s.to_owned())),
            None => (s, None),
        };
        let metric = metric.parse().map_err(|_| Error::UnknownScheme(s.to_owned()))?;
        Ok(Scheme { metric, source })
    }
}

impl Serialize for Scheme {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for Scheme {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Everything that parameterizes scheme evaluation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SchemeOptions {
    pub taxonomy: SourceTaxonomy,
    pub profile: ProfileOptions,
    pub solver: SolverParams,
    /// Minimum shared authors for a journal pair to be compared.
    pub min_authors: usize,
    pub paper_count: PaperCountMode,
    pub psr: PsrNormalization,
}

/// A computed scheme with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeOutcome {
    pub scheme: Scheme,
    pub rating: RatingVector,
    /// HITS authority vector, for the `h` methods.
    pub authority: Option<RatingVector>,
    pub convergence: Option<Convergence>,
}

type SourceKey = Option<String>;

/// Builds the profiles and networks a set of schemes needs, once each, and
/// evaluates the schemes.
pub struct Evaluator {
    options: SchemeOptions,
    profiles: HashMap<SourceKey, Arc<MentionProfile>>,
    networks: HashMap<(SourceKey, NetworkKind), Arc<JournalNetwork>>,
}

impl Evaluator {
    pub fn new(records: &[MentionRecord], options: SchemeOptions, schemes: &[Scheme]) -> Self {
        let sources: BTreeSet<SourceKey> = schemes.iter().map(|s| s.source.clone()).collect();
        let profiles: HashMap<SourceKey, Arc<MentionProfile>> = sources
            .into_par_iter()
            .map(|src| {
                let restrict = src.as_ref().map(|s| BTreeSet::from([s.clone()]));
                let p = build_profile_with(records, restrict.as_ref(), options.profile);
                (src, Arc::new(p))
            })
            .collect();

        let wanted: BTreeSet<(SourceKey, NetworkKind)> = schemes
            .iter()
            .filter_map(|s| s.metric.network().map(|k| (s.source.clone(), k)))
            .collect();
        let by_source: BTreeMap<SourceKey, Vec<NetworkKind>> =
            wanted.into_iter().fold(BTreeMap::new(), |mut m, (s, k)| {
                m.entry(s).or_default().push(k);
                m
            });
        let networks = by_source
            .into_par_iter()
            .flat_map_iter(|(src, kinds)| {
                let profile = &profiles[&src];
                let index = comparable_authors(profile).with_min_authors(options.min_authors);
                kinds
                    .into_iter()
                    .map(|k| ((src.clone(), k), Arc::new(build_network(profile, &index, k))))
                    .collect::<Vec<_>>()
            })
            .collect();
        Evaluator {
            options,
            profiles,
            networks,
        }
    }

    /// The aggregated profile for a source (`None` for all sources), if
    /// some scheme asked for it.
    pub fn profile(&self, source: Option<&str>) -> Option<&MentionProfile> {
        self.profiles.get(&source.map(str::to_owned)).map(Arc::as_ref)
    }

    pub fn network(&self, source: Option<&str>, kind: NetworkKind) -> Option<&JournalNetwork> {
        self.networks
            .get(&(source.map(str::to_owned), kind))
            .map(Arc::as_ref)
    }

    pub fn evaluate(&self, scheme: &Scheme) -> Result<SchemeOutcome> {
        let key = scheme.source.clone();
        let profile = self
            .profiles
            .get(&key)
            .ok_or_else(|| Error::InvalidInput(format!("scheme `{scheme}` was not prepared")))?;
        let tax = &self.options.taxonomy;
        let net = |k: NetworkKind| self.networks[&(key.clone(), k)].as_ref();
        let mut authority = None;
        let mut convergence = None;
        let rating = match scheme.metric {
            Metric::BlindCount => counts::blind_count(profile),
            Metric::SocialCount => counts::class_count(profile, tax, SourceClass::Social),
            Metric::NonsocialCount => counts::class_count(profile, tax, SourceClass::Nonsocial),
            Metric::WeightedCount => counts::weighted_count(profile, tax)?,
            Metric::PaperCount => counts::paper_count_with(profile, self.options.paper_count),
            Metric::PageRank(k) => {
                let (rv, conv) = rating::pagerank_with_diagnostics(net(k), &self.options.solver)?;
                convergence = Some(conv);
                rv
            }
            Metric::Hits(k) => {
                let r = rating::hits(net(k), &self.options.solver)?;
                authority = Some(r.authority.with_scheme(format!("{scheme}-auth")));
                convergence = Some(r.convergence);
                r.hub
            }
            Metric::PointsSpread(k) => rating::points_spread_with(net(k), self.options.psr),
        };
        Ok(SchemeOutcome {
            scheme: scheme.clone(),
            rating: rating.with_scheme(scheme.label()),
            authority,
            convergence,
        })
    }

    /// Evaluate several schemes in parallel; results keep the input order.
    pub fn evaluate_all(&self, schemes: &[Scheme]) -> Result<Vec<SchemeOutcome>> {
        schemes.par_iter().map(|s| self.evaluate(s)).collect()
    }
}

/// Compute one scheme from records with the given options.
pub fn rate(records: &[MentionRecord], scheme: &Scheme, options: &SchemeOptions) -> Result<SchemeOutcome> {
    let schemes = std::slice::from_ref(scheme);
    Evaluator::new(records, options.clone(), schemes).evaluate(scheme)
}
