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

//! Generators and reference implementations shared by the integration tests.
//! Nothing here calls into the library's numerics: every oracle works from
//! raw records or dense matrices on its own.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use altrank::{JournalNetwork, MentionRecord, NetworkKind, Voting};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;

pub const SOURCES: [&str; 5] = ["twitter", "facebook", "google+", "blogs", "news"];

pub fn journal_id(j: usize) -> String {
    format!("J{j:02}")
}

pub fn author_id(a: usize) -> String {
    format!("a{a:03}")
}

/// One record per unit of `counts[j][a]`, each naming a distinct paper.
pub fn records_from_counts(counts: &[Vec<u64>]) -> Vec<MentionRecord> {
    let mut out = Vec::new();
    for (j, row) in counts.iter().enumerate() {
        for (a, &c) in row.iter().enumerate() {
            for k in 0..c {
                let source = SOURCES[(j + a + k as usize) % SOURCES.len()];
                let paper = format!("p{j}-{a}-{k}");
                out.push(MentionRecord::new(&author_id(a), source, &paper, &journal_id(j)));
            }
        }
    }
    out
}

/// Sparse random count matrix; entries are 0 with probability `1 - density`.
pub fn random_counts<R: Rng>(rng: &mut R, journals: usize, authors: usize, density: f64, max: u64) -> Vec<Vec<u64>> {
    (0..journals)
        .map(|_| {
            (0..authors)
                .map(|_| if rng.random_bool(density) { rng.random_range(1..=max) } else { 0 })
                .collect()
        })
        .collect()
}

/// Journal list and dense counts straight from records.
pub fn tally(records: &[MentionRecord]) -> (Vec<String>, Vec<String>, Vec<Vec<u64>>) {
    let journals: Vec<String> = records.iter().map(|r| r.journal_id.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let authors: Vec<String> = records.iter().map(|r| r.author_id.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut m: BTreeMap<(&str, &str), u64> = BTreeMap::new();
    for r in records {
        *m.entry((&r.journal_id, &r.author_id)).or_default() += 1;
    }
    let counts = journals
        .iter()
        .map(|j| authors.iter().map(|a| m.get(&(j.as_str(), a.as_str())).copied().unwrap_or(0)).collect())
        .collect();
    (journals, authors, counts)
}

pub struct NaiveNetworks {
    pub s: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
    pub q: Vec<Vec<f64>>,
    /// `comparable[j][l]`: some author mentions both.
    pub comparable: Vec<Vec<bool>>,
}

impl NaiveNetworks {
    pub fn get(&self, kind: NetworkKind) -> &Vec<Vec<f64>> {
        match kind {
            NetworkKind::S => &self.s,
            NetworkKind::P => &self.p,
            NetworkKind::Q => &self.q,
        }
    }
}

/// Triple loop over journal pairs and authors.
pub fn naive_networks(counts: &[Vec<u64>]) -> NaiveNetworks {
    let n = counts.len();
    let authors = counts.first().map_or(0, Vec::len);
    let mut s = vec![vec![0.0; n]; n];
    let mut p = vec![vec![0.0; n]; n];
    let mut q = vec![vec![0.0; n]; n];
    let mut comparable = vec![vec![false; n]; n];
    for j in 0..n {
        for l in 0..n {
            if j == l {
                continue;
            }
            let (mut size, mut sum, mut wins, mut ties) = (0u64, 0u64, 0u64, 0u64);
            for a in 0..authors {
                let (x, y) = (counts[j][a], counts[l][a]);
                if x > 0 && y > 0 {
                    size += 1;
                    sum += x;
                    if x > y {
                        wins += 1;
                    } else if x == y {
                        ties += 1;
                    }
                }
            }
            if size > 0 {
                comparable[j][l] = true;
                s[j][l] = sum as f64 / size as f64;
                p[j][l] = wins as f64 / size as f64;
                q[j][l] = (wins as f64 + 0.5 * ties as f64) / size as f64;
            }
        }
    }
    NaiveNetworks { s, p, q, comparable }
}

pub fn network(kind: NetworkKind, w: &[Vec<f64>]) -> JournalNetwork {
    let ids = (0..w.len()).map(journal_id).collect();
    JournalNetwork::from_dense(kind, ids, w).expect("valid dense network")
}

/// Random non-negative matrix with zero diagonal; entries are 0 with
/// probability `1 - density`.
pub fn random_weights<R: Rng>(rng: &mut R, n: usize, density: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|j| {
            (0..n)
                .map(|l| if j != l && rng.random_bool(density) { rng.random_range(0.01..3.0) } else { 0.0 })
                .collect()
        })
        .collect()
}

/// Stationary vector of the explicit Google matrix, found by solving
/// `(I - G) x = 0` with the last equation replaced by `Σ x = 1`.
pub fn dense_pagerank(w: &[Vec<f64>], damping: f64, voting: Voting) -> Vec<f64> {
    let n = w.len();
    let mut t = DMatrix::<f64>::zeros(n, n);
    for l in 0..n {
        let col: f64 = (0..n).map(|j| w[j][l]).sum();
        let row: f64 = if voting == Voting::WinnersAndLosersVote { w[l].iter().sum() } else { 0.0 };
        let total = col + row;
        for j in 0..n {
            t[(j, l)] = if total > 0.0 {
                if j == l { row / total } else { w[j][l] / total }
            } else {
                1.0 / n as f64
            };
        }
    }
    let g = t * damping + DMatrix::from_element(n, n, (1.0 - damping) / n as f64);
    let mut a = DMatrix::<f64>::identity(n, n) - g;
    let mut b = DVector::<f64>::zeros(n);
    for l in 0..n {
        a[(n - 1, l)] = 1.0;
    }
    b[n - 1] = 1.0;
    let x = a.lu().solve(&b).expect("nonsingular stationary system");
    x.iter().copied().collect()
}

/// Principal eigenvector of `W·Wᵀ`, unit length and non-negative, with the
/// gap to the second eigenvalue.
pub fn dense_hub(w: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let n = w.len();
    let m = DMatrix::from_fn(n, n, |i, j| w[i][j]);
    let eig = SymmetricEigen::new(&m * m.transpose());
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = idx[0];
    let gap = if n > 1 { eig.eigenvalues[top] - eig.eigenvalues[idx[1]] } else { f64::INFINITY };
    let mut v: Vec<f64> = eig.eigenvectors.column(top).iter().copied().collect();
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (v.into_iter().map(|x| x / norm).collect(), gap)
}

/// Tau-b by enumerating all pairs.
pub fn brute_kendall(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    let (mut conc, mut disc, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = x[i].partial_cmp(&x[j]).unwrap();
            let dy = y[i].partial_cmp(&y[j]).unwrap();
            use std::cmp::Ordering::Equal;
            match (dx, dy) {
                (Equal, Equal) => {
                    tx += 1;
                    ty += 1;
                }
                (Equal, _) => tx += 1,
                (_, Equal) => ty += 1,
                _ if dx == dy => conc += 1,
                _ => disc += 1,
            }
        }
    }
    let total = (n * (n.saturating_sub(1)) / 2) as i64;
    let (left, right) = (total - tx, total - ty);
    if left == 0 || right == 0 {
        return None;
    }
    Some(((conc - disc) as f64 / ((left * right) as f64).sqrt()).clamp(-1.0, 1.0))
}

/// Average ranks, 1 = largest value.
pub fn naive_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let above = x.iter().filter(|&&u| u > v).count() as f64;
            let equal = x.iter().filter(|&&u| u == v).count() as f64;
            above + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Two-pass textbook formula; `None` for a constant side.
pub fn naive_pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx.sqrt() * vy.sqrt()))
}

/// Every record repeated `k` times, so each count is multiplied by `k`.
pub fn repeat_records(records: &[MentionRecord], k: usize) -> Vec<MentionRecord> {
    records.iter().flat_map(|r| std::iter::repeat_n(r.clone(), k)).collect()
}

pub fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
