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

//! Journal ratings from comparison networks: PageRank, HITS and the
//! points spread rating, plus conversion of scores to rankings.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::comparison::fractional_ranks;
use crate::error::{Error, Result};
use crate::network::JournalNetwork;

/// Per-journal scores under one rating scheme.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatingVector {
    pub scheme: String,
    pub journals: Vec<String>,
    pub scores: Vec<f64>,
}

impl RatingVector {
    pub fn new(scheme: impl Into<String>, journals: Vec<String>, scores: Vec<f64>) -> Self {
        debug_assert_eq!(journals.len(), scores.len());
        RatingVector {
            scheme: scheme.into(),
            journals,
            scores,
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn score(&self, journal: &str) -> Option<f64> {
        self.journals
            .iter()
            .position(|j| j == journal)
            .map(|i| self.scores[i])
    }

    pub fn with_scheme(mut self, scheme: impl Into<String>) -> Self {
        self.scheme = scheme.into();
        self
    }

    /// Reject NaN and infinite scores.
    pub fn check_finite(&self) -> Result<()> {
        match self.scores.iter().position(|s| !s.is_finite()) {
            Some(i) => Err(Error::InvalidInput(format!(
                "scheme `{}` has non-finite score for journal `{}`",
                self.scheme, self.journals[i]
            ))),
            None => Ok(()),
        }
    }
}

/// Descending fractional ranking of a [`RatingVector`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ranking {
    pub scheme: String,
    pub journals: Vec<String>,
    pub scores: Vec<f64>,
    /// Rank of each journal, aligned with `journals`; ties share the mean position.
    pub ranks: Vec<f64>,
    /// Journal indices from best to worst; equal scores listed by journal id.
    pub order: Vec<usize>,
}

/// Scores closer than this, relative to the largest magnitude in the vector,
/// rank as tied. Matches the solvers' convergence tolerance, so rankings do
/// not depend on rounding in the last few bits.
pub const RANK_TIE_TOLERANCE: f64 = 1e-10;

pub fn to_ranking(rv: &RatingVector) -> Ranking {
    let scale = rv.scores.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let mut by_score: Vec<usize> = (0..rv.len()).collect();
    by_score.sort_by(|&a, &b| rv.scores[b].total_cmp(&rv.scores[a]));
    // Each run of near-equal scores takes the value of its first member.
    let mut snapped = rv.scores.clone();
    for w in 1..by_score.len() {
        let (prev, cur) = (by_score[w - 1], by_score[w]);
        if rv.scores[prev] - rv.scores[cur] <= RANK_TIE_TOLERANCE * scale {
            snapped[cur] = snapped[prev];
        }
    }
    let ranks = fractional_ranks(&snapped);
    let mut order: Vec<usize> = (0..rv.len()).collect();
    order.sort_by(|&a, &b| {
        snapped[b]
            .partial_cmp(&snapped[a])
            .unwrap_or(Ordering::Equal)
            .then_with(|| rv.journals[a].cmp(&rv.journals[b]))
    });
    Ranking {
        scheme: rv.scheme.clone(),
        journals: rv.journals.clone(),
        scores: rv.scores.clone(),
        ranks,
        order,
    }
}

/// Who casts votes in the PageRank random walk.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Voting {
    /// From `l`, step to `j` with probability `W[j][l] / Σ_k W[k][l]`.
    LosersVote,
    /// As `LosersVote`, but `l` also votes for itself with its own row
    /// weight: step to `j` with probability `W[j][l] / T_l` and stay with
    /// probability `Σ_k W[l][k] / T_l`, where `T_l` is the sum of both.
    #[default]
    WinnersAndLosersVote,
}

/// Iteration parameters shared by PageRank and HITS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverParams {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// PageRank only.
    pub voting: Voting,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            damping: 0.85,
            tol: 1e-10,
            max_iter: 1000,
            voting: Voting::default(),
        }
    }
}

/// How a power iteration ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Convergence {
    pub iterations: usize,
    pub residual: f64,
}

/// PageRank where journal `l` passes its weight to the journals that beat
/// it, in proportion to `W[j][l]` (see [`Voting`] for whether it also keeps
/// a share for its own wins). Journals with no votes to cast teleport
/// uniformly.
pub fn pagerank(net: &JournalNetwork, params: &SolverParams) -> Result<RatingVector> {
    pagerank_with_diagnostics(net, params).map(|(rv, _)| rv)
}

pub fn pagerank_with_diagnostics(
    net: &JournalNetwork,
    params: &SolverParams,
) -> Result<(RatingVector, Convergence)> {
    let d = params.damping;
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::InvalidInput(format!("damping must be in (0, 1), got {d}")));
    }
    if params.tol.is_nan() || params.tol <= 0.0 {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let n = net.len();
    if n == 0 {
        return Err(Error::InvalidInput("network has no journals".into()));
    }
    let nf = n as f64;
    let col_sums = net.column_sums();
    let row_sums: Vec<f64> = (0..n)
        .map(|j| net.row(j).iter().map(|&(_, w)| w).sum())
        .collect();
    let (votes, self_votes): (Vec<f64>, Vec<f64>) = match params.voting {
        Voting::LosersVote => (col_sums, vec![0.0; n]),
        Voting::WinnersAndLosersVote => (
            col_sums.iter().zip(&row_sums).map(|(c, r)| c + r).collect(),
            row_sums,
        ),
    };
    let inv_sums: Vec<f64> = votes
        .iter()
        .map(|&s| if s > 0.0 { 1.0 / s } else { 0.0 })
        .collect();

    let mut x = vec![1.0 / nf; n];
    let mut spread = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iter in 1..=params.max_iter {
        let mut dangling = 0.0;
        for l in 0..n {
            spread[l] = x[l] * inv_sums[l];
            if votes[l] <= 0.0 {
                dangling += x[l];
            }
        }
        let base = (1.0 - d) / nf + d * dangling / nf;
        for (j, slot) in next.iter_mut().enumerate() {
            let flow: f64 = net.row(j).iter().map(|&(l, w)| w * spread[l]).sum::<f64>()
                + self_votes[j] * spread[j];
            *slot = base + d * flow;
        }
        residual = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if residual < params.tol {
            let total: f64 = x.iter().sum();
            x.iter_mut().for_each(|v| *v /= total);
            let label = format!("{}pr", net.kind().letter());
            return Ok((
                RatingVector::new(label, net.journals().to_vec(), x),
                Convergence {
                    iterations: iter,
                    residual,
                },
            ));
        }
    }
    Err(Error::NotConverged {
        iterations: params.max_iter,
        residual,
    })
}

/// Hub and authority vectors from HITS.
#[derive(Debug, Clone, PartialEq)]
pub struct HitsResult {
    /// The journal rating: rows of `W` record wins.
    pub hub: RatingVector,
    pub authority: RatingVector,
    pub convergence: Convergence,
}

fn normalize_l2(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// Mutually reinforcing hub/authority iteration, each vector scaled to unit
/// Euclidean norm every step. Only `tol` and `max_iter` of `params` are used.
pub fn hits(net: &JournalNetwork, params: &SolverParams) -> Result<HitsResult> {
    if !net.has_nonzero_weight() {
        return Err(Error::DegenerateNetwork);
    }
    let n = net.len();
    let mut hub = vec![1.0 / (n as f64).sqrt(); n];
    let mut auth = vec![0.0; n];
    let mut next_hub = vec![0.0; n];
    let mut next_auth = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iter in 1..=params.max_iter {
        next_auth.iter_mut().for_each(|v| *v = 0.0);
        for (j, row) in (0..n).map(|j| (j, net.row(j))) {
            for &(l, w) in row {
                next_auth[l] += w * hub[j];
            }
        }
        normalize_l2(&mut next_auth);
        for (j, slot) in next_hub.iter_mut().enumerate() {
            *slot = net.row(j).iter().map(|&(l, w)| w * next_auth[l]).sum();
        }
        normalize_l2(&mut next_hub);

        residual = hub
            .iter()
            .zip(&next_hub)
            .chain(auth.iter().zip(&next_auth))
            .map(|(a, b)| (a - b).abs())
            .sum();
        std::mem::swap(&mut hub, &mut next_hub);
        std::mem::swap(&mut auth, &mut next_auth);
        if residual < params.tol {
            let letter = net.kind().letter();
            let journals = net.journals().to_vec();
            return Ok(HitsResult {
                hub: RatingVector::new(format!("{letter}h"), journals.clone(), hub),
                authority: RatingVector::new(format!("{letter}h-auth"), journals, auth),
                convergence: Convergence {
                    iterations: iter,
                    residual,
                },
            });
        }
    }
    Err(Error::NotConverged {
        iterations: params.max_iter,
        residual,
    })
}

/// Divisor used by the points spread rating.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsrNormalization {
    /// Number of journals `j` shares at least one author with.
    #[default]
    Opponents,
    /// Total number of journals.
    Global,
}

pub fn points_spread(net: &JournalNetwork) -> RatingVector {
    points_spread_with(net, PsrNormalization::Opponents)
}

/// `r_j = Σ_l (W[j][l] - W[l][j]) / n_j`, zero for journals without opponents.
pub fn points_spread_with(net: &JournalNetwork, norm: PsrNormalization) -> RatingVector {
    let n = net.len();
    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for j in 0..n {
        for &(l, w) in net.row(j) {
            columns[l].push((j, w));
        }
    }
    let scores = (0..n)
        .map(|j| {
            let divisor = match norm {
                PsrNormalization::Opponents => net.opponents()[j],
                PsrNormalization::Global => n,
            };
            if divisor == 0 {
                return 0.0;
            }
            // Pair W[j][l] with W[l][j] so balanced pairs cancel exactly.
            let (row, col) = (net.row(j), &columns[j]);
            let (mut a, mut b) = (0, 0);
            let mut total = 0.0;
            while a < row.len() || b < col.len() {
                let ka = row.get(a).map_or(usize::MAX, |e| e.0);
                let kb = col.get(b).map_or(usize::MAX, |e| e.0);
                let diff = match ka.cmp(&kb) {
                    Ordering::Equal => {
                        let d = row[a].1 - col[b].1;
                        a += 1;
                        b += 1;
                        d
                    }
                    Ordering::Less => {
                        a += 1;
                        row[a - 1].1
                    }
                    Ordering::Greater => {
                        b += 1;
                        -col[b - 1].1
                    }
                };
                total += diff;
            }
            total / divisor as f64
        })
        .collect();
    RatingVector::new(
        format!("{}-psr", net.kind().letter()),
        net.journals().to_vec(),
        scores,
    )
}
