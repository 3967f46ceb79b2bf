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

//! Journal-by-journal comparison networks.
//!
//! Only authors who mention both journals of a pair take part in that pair's
//! comparison. Each such author is one "game" between the two journals, the
//! score being the number of mentions of each. Three weightings of the games
//! are built:
//!
//! * `S[j][l]`: mean mentions of `j` among the shared authors,
//! * `P[j][l]`: fraction of shared authors mentioning `j` strictly more,
//! * `Q[j][l]`: as `P`, with a tie worth one half to each side.
//!
//! A larger `W[j][l]` than `W[l][j]` means `j` beat `l`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::MentionProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NetworkKind {
    S,
    P,
    Q,
}

impl NetworkKind {
    pub const ALL: [NetworkKind; 3] = [NetworkKind::S, NetworkKind::P, NetworkKind::Q];

    /// Lowercase letter used in scheme labels.
    pub fn letter(self) -> char {
        match self {
            NetworkKind::S => 's',
            NetworkKind::P => 'p',
            NetworkKind::Q => 'q',
        }
    }
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter().to_ascii_uppercase())
    }
}

impl FromStr for NetworkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" | "S" => Ok(NetworkKind::S),
            "p" | "P" => Ok(NetworkKind::P),
            "q" | "Q" => Ok(NetworkKind::Q),
            _ => Err(Error::InvalidInput(format!("unknown network kind `{s}`"))),
        }
    }
}

/// For each unordered journal pair, the authors who mention both.
///
/// Pairs are stored once with `j < l`; lookups are symmetric. Pairs with no
/// shared author are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparableIndex {
    journals: usize,
    pairs: BTreeMap<(usize, usize), Vec<usize>>,
}

pub fn comparable_authors(profile: &MentionProfile) -> ComparableIndex {
    let mut pairs: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (a, row) in profile.author_rows().iter().enumerate() {
        for (i, &(j, _)) in row.iter().enumerate() {
            for &(l, _) in &row[i + 1..] {
                pairs.entry((j, l)).or_default().push(a);
            }
        }
    }
    ComparableIndex {
        journals: profile.journals().len(),
        pairs,
    }
}

impl ComparableIndex {
    /// Drop pairs with fewer than `k` shared authors.
    pub fn with_min_authors(mut self, k: usize) -> Self {
        if k > 1 {
            self.pairs.retain(|_, a| a.len() >= k);
        }
        self
    }

    pub fn authors(&self, j: usize, l: usize) -> Option<&[usize]> {
        let key = if j < l { (j, l) } else { (l, j) };
        self.pairs.get(&key).map(Vec::as_slice)
    }

    /// Stored pairs `((j, l), authors)` with `j < l`, in order.
    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), &[usize])> {
        self.pairs.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    /// Number of unordered comparable pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn journal_count(&self) -> usize {
        self.journals
    }

    /// For each journal, how many others it has at least one shared author with.
    pub fn opponents(&self) -> Vec<usize> {
        let mut n = vec![0; self.journals];
        for &(j, l) in self.pairs.keys() {
            n[j] += 1;
            n[l] += 1;
        }
        n
    }
}

/// A sparse, weighted, directed journal network.
#[derive(Debug, Clone, PartialEq)]
pub struct JournalNetwork {
    kind: NetworkKind,
    journals: Vec<String>,
    rows: Vec<Vec<(usize, f64)>>,
    opponents: Vec<usize>,
}

struct PairTally {
    size: f64,
    sum_j: u64,
    sum_l: u64,
    wins_j: u64,
    wins_l: u64,
    ties: u64,
}

fn tally(profile: &MentionProfile, j: usize, l: usize, authors: &[usize]) -> PairTally {
    let mut t = PairTally {
        size: authors.len() as f64,
        sum_j: 0,
        sum_l: 0,
        wins_j: 0,
        wins_l: 0,
        ties: 0,
    };
    for &a in authors {
        let (cj, cl) = (profile.count(j, a), profile.count(l, a));
        t.sum_j += cj;
        t.sum_l += cl;
        match cj.cmp(&cl) {
            std::cmp::Ordering::Greater => t.wins_j += 1,
            std::cmp::Ordering::Less => t.wins_l += 1,
            std::cmp::Ordering::Equal => t.ties += 1,
        }
    }
    t
}

fn build(profile: &MentionProfile, index: &ComparableIndex, kind: NetworkKind) -> JournalNetwork {
    let n = profile.journals().len();
    assert_eq!(n, index.journal_count(), "index built from a different profile");
    let mut rows = vec![Vec::new(); n];
    for ((j, l), authors) in index.pairs() {
        let t = tally(profile, j, l, authors);
        let (wj, wl) = match kind {
            NetworkKind::S => (t.sum_j as f64 / t.size, t.sum_l as f64 / t.size),
            NetworkKind::P => (t.wins_j as f64 / t.size, t.wins_l as f64 / t.size),
            NetworkKind::Q => {
                let half = 0.5 * t.ties as f64;
                ((t.wins_j as f64 + half) / t.size, (t.wins_l as f64 + half) / t.size)
            }
        };
        // P keeps only positive entries; S and Q store every comparable pair.
        if kind != NetworkKind::P || wj > 0.0 {
            rows[j].push((l, wj));
        }
        if kind != NetworkKind::P || wl > 0.0 {
            rows[l].push((j, wl));
        }
    }
    for row in &mut rows {
        row.sort_unstable_by_key(|&(c, _)| c);
    }
    JournalNetwork {
        kind,
        journals: profile.journals().to_vec(),
        rows,
        opponents: index.opponents(),
    }
}

pub fn build_s(profile: &MentionProfile, index: &ComparableIndex) -> JournalNetwork {
    build(profile, index, NetworkKind::S)
}

pub fn build_p(profile: &MentionProfile, index: &ComparableIndex) -> JournalNetwork {
    build(profile, index, NetworkKind::P)
}

pub fn build_q(profile: &MentionProfile, index: &ComparableIndex) -> JournalNetwork {
    build(profile, index, NetworkKind::Q)
}

pub fn build_network(
    profile: &MentionProfile,
    index: &ComparableIndex,
    kind: NetworkKind,
) -> JournalNetwork {
    build(profile, index, kind)
}

impl JournalNetwork {
    /// Build a network from a dense weight matrix. A journal's opponents are
    /// the journals it shares a nonzero entry with in either direction.
    pub fn from_dense(kind: NetworkKind, journals: Vec<String>, weights: &[Vec<f64>]) -> Result<Self> {
        let n = journals.len();
        if weights.len() != n || weights.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!(
                "weight matrix must be {n}x{n}"
            )));
        }
        let mut rows = vec![Vec::new(); n];
        let mut opponents = vec![0; n];
        for j in 0..n {
            for l in 0..n {
                let w = weights[j][l];
                if !(w.is_finite() && w >= 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "weight [{j}][{l}] = {w} is not a finite non-negative number"
                    )));
                }
                if j == l {
                    if w != 0.0 {
                        return Err(Error::InvalidInput("diagonal must be zero".into()));
                    }
                    continue;
                }
                if w > 0.0 {
                    rows[j].push((l, w));
                }
                if w > 0.0 || weights[l][j] > 0.0 {
                    opponents[j] += 1;
                }
            }
        }
        Ok(JournalNetwork {
            kind,
            journals,
            rows,
            opponents,
        })
    }

    pub fn kind(&self) -> NetworkKind {
        self.kind
    }

    pub fn journals(&self) -> &[String] {
        &self.journals
    }

    pub fn len(&self) -> usize {
        self.journals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.journals.is_empty()
    }

    /// Stored `(l, W[j][l])` entries of row `j`, sorted by `l`.
    pub fn row(&self, j: usize) -> &[(usize, f64)] {
        &self.rows[j]
    }

    pub fn weight(&self, j: usize, l: usize) -> f64 {
        let row = &self.rows[j];
        row.binary_search_by_key(&l, |&(c, _)| c)
            .map(|i| row[i].1)
            .unwrap_or(0.0)
    }

    /// Whether `W[j][l]` is explicitly stored (it may still be zero for Q).
    pub fn has_edge(&self, j: usize, l: usize) -> bool {
        self.rows[j].binary_search_by_key(&l, |&(c, _)| c).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Number of comparable opponents of each journal.
    pub fn opponents(&self) -> &[usize] {
        &self.opponents
    }

    pub fn has_nonzero_weight(&self) -> bool {
        self.rows.iter().flatten().any(|&(_, w)| w > 0.0)
    }

    /// Column sums `Σ_j W[j][l]`.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.len()];
        for row in &self.rows {
            for &(l, w) in row {
                sums[l] += w;
            }
        }
        sums
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut out = vec![vec![0.0; n]; n];
        for (j, row) in self.rows.iter().enumerate() {
            for &(l, w) in row {
                out[j][l] = w;
            }
        }
        out
    }

    /// Same network with every weight multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            for e in row.iter_mut() {
                e.1 *= c;
            }
        }
        out
    }

    /// Write the stored entries as `j,l,weight` lines under a `# kind: X` line.
    pub fn write_coordinates<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# kind: {}", self.kind)?;
        writeln!(out, "j,l,weight")?;
        for (j, row) in self.rows.iter().enumerate() {
            for &(l, w) in row {
                writeln!(out, "{},{},{}", self.journals[j], self.journals[l], w)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{build_profile, MentionRecord};

    /// Author `a` mentions `count` distinct papers of `journal`.
    pub(crate) fn profile_of(spec: &[(&str, &str, u64)]) -> MentionProfile {
        let mut recs = Vec::new();
        for &(a, j, c) in spec {
            for i in 0..c {
                recs.push(MentionRecord::new(a, "twitter", &format!("{j}-{a}-{i}"), j));
            }
        }
        build_profile(&recs, None)
    }

    fn two_journal() -> MentionProfile {
        profile_of(&[("a1", "X", 2), ("a1", "Y", 1), ("a2", "X", 1), ("a2", "Y", 1)])
    }

    #[test]
    fn comparable_sets() {
        let p = profile_of(&[
            ("a1", "X", 2),
            ("a1", "Y", 1),
            ("a2", "X", 1),
            ("a2", "Y", 1),
            ("a3", "Y", 3),
        ]);
        let idx = comparable_authors(&p);
        let names: Vec<&str> = idx.authors(0, 1).unwrap().iter().map(|&a| p.authors()[a].as_str()).collect();
        assert_eq!(names, ["a1", "a2"]);
        assert_eq!(idx.authors(1, 0), idx.authors(0, 1));
    }

    #[test]
    fn single_journal_author_contributes_nothing() {
        let p = profile_of(&[("a", "X", 4), ("b", "Y", 1)]);
        assert!(comparable_authors(&p).is_empty());
        let s = build_s(&p, &comparable_authors(&p));
        assert_eq!(s.edge_count(), 0);
        assert_eq!(s.dense(), vec![vec![0.0; 2]; 2]);
    }

    #[test]
    fn one_author_three_journals() {
        let p = profile_of(&[("a", "J1", 1), ("a", "J2", 1), ("a", "J3", 1)]);
        let idx = comparable_authors(&p);
        let keys: Vec<_> = idx.pairs().map(|(k, a)| (k, a.to_vec())).collect();
        assert_eq!(keys, [((0, 1), vec![0]), ((0, 2), vec![0]), ((1, 2), vec![0])]);
    }

    #[test]
    fn two_journal_fixture() {
        let p = two_journal();
        let idx = comparable_authors(&p);
        assert_eq!(build_s(&p, &idx).dense(), [[0.0, 1.5], [1.0, 0.0]]);
        assert_eq!(build_p(&p, &idx).dense(), [[0.0, 0.5], [0.0, 0.0]]);
        assert_eq!(build_q(&p, &idx).dense(), [[0.0, 0.75], [0.25, 0.0]]);
        assert_eq!(build_p(&p, &idx).edge_count(), 1);
        assert_eq!(build_q(&p, &idx).edge_count(), 2);
    }

    #[test]
    fn ties_and_sweeps() {
        let tie = profile_of(&[("a", "X", 2), ("a", "Y", 2), ("b", "X", 1), ("b", "Y", 1)]);
        let idx = comparable_authors(&tie);
        assert_eq!(build_s(&tie, &idx).dense(), [[0.0, 1.5], [1.5, 0.0]]);
        assert_eq!(build_p(&tie, &idx).dense(), [[0.0, 0.0], [0.0, 0.0]]);
        assert_eq!(build_q(&tie, &idx).dense(), [[0.0, 0.5], [0.5, 0.0]]);

        let ones = profile_of(&[("a", "X", 1), ("a", "Y", 1)]);
        let idx = comparable_authors(&ones);
        assert_eq!(build_s(&ones, &idx).dense(), [[0.0, 1.0], [1.0, 0.0]]);

        let sweep = profile_of(&[("a", "X", 3), ("a", "Y", 1)]);
        let idx = comparable_authors(&sweep);
        assert_eq!(build_p(&sweep, &idx).dense(), [[0.0, 1.0], [0.0, 0.0]]);
        let q = build_q(&sweep, &idx);
        assert_eq!(q.dense(), [[0.0, 1.0], [0.0, 0.0]]);
        assert!(q.has_edge(1, 0));
    }

    #[test]
    fn min_author_filter() {
        let p = profile_of(&[("a", "X", 1), ("a", "Y", 2), ("a", "Z", 1), ("b", "X", 1), ("b", "Y", 1)]);
        let idx = comparable_authors(&p).with_min_authors(2);
        assert_eq!(idx.len(), 1);
        assert_eq!(idx.opponents(), [1, 1, 0]);
    }

    #[test]
    fn coordinate_dump() {
        let p = two_journal();
        let mut buf = Vec::new();
        build_q(&p, &comparable_authors(&p)).write_coordinates(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# kind: Q\nj,l,weight\nX,Y,0.75\nY,X,0.25\n"
        );
    }

    #[test]
    fn from_dense_validates() {
        let j = vec!["A".to_owned(), "B".to_owned()];
        assert!(JournalNetwork::from_dense(NetworkKind::S, j.clone(), &[vec![1.0, 0.0], vec![0.0, 0.0]]).is_err());
        assert!(JournalNetwork::from_dense(NetworkKind::S, j.clone(), &[vec![0.0, -1.0], vec![0.0, 0.0]]).is_err());
        let n = JournalNetwork::from_dense(NetworkKind::S, j, &[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(n.opponents(), [1, 1]);
        assert_eq!(n.column_sums(), [0.0, 2.0]);
    }
}
