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

//! Comparing rating schemes: correlation matrices (Pearson, Spearman,
//! Kendall tau-b), PCA of the correlation rows, and agglomerative
//! clustering into a dendrogram.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::ExternalRating;
use crate::rating::RatingVector;

/// Descending fractional ranks: the highest score gets rank 1 and tied
/// scores share the mean of the positions they span.
pub fn fractional_ranks(scores: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut ranks = vec![0.0; scores.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && scores[idx[end]] == scores[idx[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let mean = (start + 1 + end) as f64 / 2.0;
        for &i in &idx[start..end] {
            ranks[i] = mean;
        }
        start = end;
    }
    ranks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationMethod {
    Pearson,
    Spearman,
    Kendall,
}

impl CorrelationMethod {
    pub const ALL: [CorrelationMethod; 3] = [
        CorrelationMethod::Pearson,
        CorrelationMethod::Spearman,
        CorrelationMethod::Kendall,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorrelationMethod::Pearson => "pearson",
            CorrelationMethod::Spearman => "spearman",
            CorrelationMethod::Kendall => "kendall",
        }
    }
}

impl fmt::Display for CorrelationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CorrelationMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CorrelationMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown correlation method `{s}`")))
    }
}

/// Sample Pearson correlation; `None` when either side is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Pearson correlation of the fractional ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    pearson(&fractional_ranks(x), &fractional_ranks(y))
}

fn tied_pairs(sorted: &[f64]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Merge sort counting inversions (pairs out of ascending order).
fn count_inversions(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = count_inversions(&mut v[..mid], &mut buf[..mid]);
    swaps += count_inversions(&mut v[mid..], &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Kendall tau-b in O(n log n) (Knight's algorithm); `None` when either side
/// is constant.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let n = x.len() as u64;
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let total = n * n.saturating_sub(1) / 2;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let tie_x = tied_pairs(&xs);
    let mut tie_xy = 0u64;
    let mut run = 1u64;
    for w in pairs.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            tie_xy += run * (run - 1) / 2;
            run = 1;
        }
    }
    tie_xy += run * (run - 1) / 2;

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; ys.len()];
    let discordant = count_inversions(&mut ys, &mut buf);
    let tie_y = tied_pairs(&ys);

    let left = total - tie_x;
    let right = total - tie_y;
    if left == 0 || right == 0 {
        return None;
    }
    let concordant_minus_discordant =
        total as f64 - tie_x as f64 - tie_y as f64 + tie_xy as f64 - 2.0 * discordant as f64;
    let denom = ((left as u128 * right as u128) as f64).sqrt();
    Some((concordant_minus_discordant / denom).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
struct SchemeColumn {
    label: String,
    scores: Vec<f64>,
    present: Vec<bool>,
}

/// Named rating schemes over one journal list. A scheme may lack scores for
/// some journals; comparisons use the journals both sides have.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RatingEnsemble {
    journals: Vec<String>,
    schemes: Vec<SchemeColumn>,
}

impl RatingEnsemble {
    pub fn new(journals: Vec<String>) -> Self {
        RatingEnsemble {
            journals,
            schemes: Vec::new(),
        }
    }

    pub fn journals(&self) -> &[String] {
        &self.journals
    }

    pub fn labels(&self) -> Vec<&str> {
        self.schemes.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.schemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schemes.is_empty()
    }

    /// Add a scheme with one optional score per journal.
    pub fn push(&mut self, label: impl Into<String>, scores: &[Option<f64>]) -> Result<()> {
        let label = label.into();
        if scores.len() != self.journals.len() {
            return Err(Error::InvalidInput(format!(
                "scheme `{label}` has {} scores for {} journals",
                scores.len(),
                self.journals.len()
            )));
        }
        if scores.iter().flatten().any(|s| !s.is_finite()) {
            return Err(Error::InvalidInput(format!("scheme `{label}` has non-finite scores")));
        }
        if self.schemes.iter().any(|s| s.label == label) {
            return Err(Error::InvalidInput(format!("duplicate scheme `{label}`")));
        }
        self.schemes.push(SchemeColumn {
            label,
            scores: scores.iter().map(|s| s.unwrap_or(0.0)).collect(),
            present: scores.iter().map(Option::is_some).collect(),
        });
        Ok(())
    }

    /// Add a rating, matched to the ensemble's journals by id.
    pub fn push_rating(&mut self, rv: &RatingVector) -> Result<()> {
        let by_id: std::collections::HashMap<&str, f64> = rv
            .journals
            .iter()
            .map(String::as_str)
            .zip(rv.scores.iter().copied())
            .collect();
        let scores: Vec<Option<f64>> = self
            .journals
            .iter()
            .map(|j| by_id.get(j.as_str()).copied())
            .collect();
        self.push(rv.scheme.clone(), &scores)
    }

    pub fn push_external(&mut self, ext: &ExternalRating) -> Result<()> {
        let scores: Vec<Option<f64>> = self
            .journals
            .iter()
            .map(|j| ext.scores.get(j).copied())
            .collect();
        self.push(ext.name.clone(), &scores)
    }

    /// The scores of two schemes restricted to journals both have.
    fn overlap(&self, a: usize, b: usize) -> (Vec<f64>, Vec<f64>) {
        let (sa, sb) = (&self.schemes[a], &self.schemes[b]);
        (0..self.journals.len())
            .filter(|&i| sa.present[i] && sb.present[i])
            .map(|i| (sa.scores[i], sb.scores[i]))
            .unzip()
    }

    /// Every scheme replaced by its fractional ranks over its present journals.
    pub fn rank_transformed(&self) -> RatingEnsemble {
        let schemes = self
            .schemes
            .iter()
            .map(|s| {
                let present: Vec<f64> = s
                    .scores
                    .iter()
                    .zip(&s.present)
                    .filter(|(_, p)| **p)
                    .map(|(v, _)| *v)
                    .collect();
                let mut ranks = fractional_ranks(&present).into_iter();
                let scores = s
                    .present
                    .iter()
                    .map(|&p| if p { ranks.next().unwrap() } else { 0.0 })
                    .collect();
                SchemeColumn {
                    label: s.label.clone(),
                    scores,
                    present: s.present.clone(),
                }
            })
            .collect();
        RatingEnsemble {
            journals: self.journals.clone(),
            schemes,
        }
    }

    /// Apply `f` to every present score of one scheme.
    pub fn map_scheme(&mut self, label: &str, f: impl Fn(f64) -> f64) {
        if let Some(s) = self.schemes.iter_mut().find(|s| s.label == label) {
            for (v, p) in s.scores.iter_mut().zip(&s.present) {
                if *p {
                    *v = f(*v);
                }
            }
        }
    }
}

/// Pairwise similarity of rating schemes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub method: CorrelationMethod,
    /// Scheme pairs whose correlation was undefined (a constant side) and set to 0.
    pub zero_variance: Vec<(String, String)>,
}

impl CorrelationMatrix {
    /// Wrap an existing matrix after checking shape, symmetry, range and unit diagonal.
    pub fn new(labels: Vec<String>, values: Vec<Vec<f64>>, method: CorrelationMethod) -> Result<Self> {
        let n = labels.len();
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!("correlation matrix must be {n}x{n}")));
        }
        for i in 0..n {
            if values[i][i] != 1.0 {
                return Err(Error::InvalidInput("correlation diagonal must be 1".into()));
            }
            for j in 0..n {
                let v = values[i][j];
                if !(-1.0..=1.0).contains(&v) || (v - values[j][i]).abs() > 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "entry [{i}][{j}] = {v} is out of range or asymmetric"
                    )));
                }
            }
        }
        Ok(CorrelationMatrix {
            labels,
            values,
            method,
            zero_variance: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        Some(self.values[i][j])
    }

    /// CSV with a header row and a leading column of labels.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![self.method.name().to_owned()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header)?;
        for (label, row) in self.labels.iter().zip(&self.values) {
            let mut rec = vec![label.clone()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Correlate every pair of schemes in the ensemble.
pub fn correlation_matrix(ensemble: &RatingEnsemble, method: CorrelationMethod) -> Result<CorrelationMatrix> {
    let n = ensemble.len();
    if n < 2 {
        return Err(Error::InvalidInput("need at least 2 schemes to compare".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let results: Vec<Result<Option<f64>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = ensemble.overlap(i, j);
            if x.len() < 3 {
                return Err(Error::InsufficientOverlap(
                    ensemble.schemes[i].label.clone(),
                    ensemble.schemes[j].label.clone(),
                ));
            }
            Ok(match method {
                CorrelationMethod::Pearson => pearson(&x, &y),
                CorrelationMethod::Spearman => spearman(&x, &y),
                CorrelationMethod::Kendall => kendall_tau_b(&x, &y),
            })
        })
        .collect();

    let mut values = vec![vec![0.0; n]; n];
    let mut zero_variance = Vec::new();
    for (i, row) in values.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for (&(i, j), r) in pairs.iter().zip(results) {
        let v = match r? {
            Some(v) => v,
            None => {
                zero_variance.push((
                    ensemble.schemes[i].label.clone(),
                    ensemble.schemes[j].label.clone(),
                ));
                0.0
            }
        };
        values[i][j] = v;
        values[j][i] = v;
    }
    Ok(CorrelationMatrix {
        labels: ensemble.schemes.iter().map(|s| s.label.clone()).collect(),
        values,
        method,
        zero_variance,
    })
}

/// Schemes projected onto the principal components of the correlation rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcaResult {
    pub labels: Vec<String>,
    /// `coordinates[scheme][component]`
    pub coordinates: Vec<Vec<f64>>,
    /// Fraction of total variance per component, descending.
    pub explained_variance: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    /// `components[c]` is the unit loading vector of component `c`.
    pub components: Vec<Vec<f64>>,
}

impl PcaResult {
    /// `label,pc1,pc2,...` rows followed by an `explained_variance,...` line.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let k = self.explained_variance.len();
        let mut header = vec!["label".to_owned()];
        header.extend((1..=k).map(|c| format!("pc{c}")));
        w.write_record(&header)?;
        for (label, row) in self.labels.iter().zip(&self.coordinates) {
            let mut rec = vec![label.clone()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        let mut rec = vec!["explained_variance".to_owned()];
        rec.extend(self.explained_variance.iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
        w.flush()?;
        Ok(())
    }
}

/// PCA treating each scheme's row of the correlation matrix as its feature
/// vector. Each component's largest-magnitude loading is made positive.
pub fn pca(corr: &CorrelationMatrix) -> PcaResult {
    let k = corr.len();
    if k == 0 {
        return PcaResult {
            labels: Vec::new(),
            coordinates: Vec::new(),
            explained_variance: Vec::new(),
            eigenvalues: Vec::new(),
            components: Vec::new(),
        };
    }
    let x = DMatrix::from_fn(k, k, |i, j| corr.values[i][j]);
    let mean = x.row_mean();
    let mut centered = x.clone();
    for mut row in centered.row_iter_mut() {
        row -= &mean;
    }
    let denom = (k.max(2) - 1) as f64;
    let cov = (centered.transpose() * &centered) / denom;
    let cov = (&cov + cov.transpose()) * 0.5;
    let eig = SymmetricEigen::new(cov);

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&c| eig.eigenvalues[c].max(0.0)).collect();
    let components: Vec<Vec<f64>> = order
        .iter()
        .map(|&c| {
            let v: Vec<f64> = eig.eigenvectors.column(c).iter().copied().collect();
            let pivot = v
                .iter()
                .enumerate()
                .fold(0, |best, (i, x)| if x.abs() > v[best].abs() { i } else { best });
            if v[pivot] < 0.0 {
                v.into_iter().map(|x| -x).collect()
            } else {
                v
            }
        })
        .collect();
    let total: f64 = eigenvalues.iter().sum();
    let explained_variance = eigenvalues
        .iter()
        .map(|&l| if total > 0.0 { l / total } else { 0.0 })
        .collect();
    let coordinates = (0..k)
        .map(|s| {
            components
                .iter()
                .map(|v| centered.row(s).iter().zip(v).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    PcaResult {
        labels: corr.labels.clone(),
        coordinates,
        explained_variance,
        eigenvalues,
        components,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    Single,
    Complete,
    #[default]
    Average,
}

/// One agglomeration step. Node ids below the leaf count are schemes;
/// merge `i` creates node `leaves + i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dendrogram {
    pub labels: Vec<String>,
    pub merges: Vec<Merge>,
}

/// UPGMA clustering on `d = 1 - corr`.
pub fn hcluster(corr: &CorrelationMatrix) -> Dendrogram {
    hcluster_with(corr, Linkage::Average)
}

pub fn hcluster_with(corr: &CorrelationMatrix, linkage: Linkage) -> Dendrogram {
    let n = corr.len();
    let mut dist: Vec<Vec<f64>> = corr
        .values
        .iter()
        .map(|row| row.iter().map(|c| 1.0 - c).collect())
        .collect();
    // active cluster slots: (node id, size, smallest member label)
    let mut active: Vec<Option<(usize, usize, String)>> = corr
        .labels
        .iter()
        .enumerate()
        .map(|(i, l)| Some((i, 1, l.clone())))
        .collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));

    for step in 0..n.saturating_sub(1) {
        let mut best: Option<(f64, &str, &str, usize, usize)> = None;
        for a in 0..n {
            let Some((_, _, la)) = &active[a] else { continue };
            for b in a + 1..n {
                let Some((_, _, lb)) = &active[b] else { continue };
                let (lo, hi) = if la <= lb { (la.as_str(), lb.as_str()) } else { (lb.as_str(), la.as_str()) };
                let d = dist[a][b];
                let better = match &best {
                    None => true,
                    Some((bd, blo, bhi, _, _)) => match d.total_cmp(bd) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => (lo, hi) < (*blo, *bhi),
                    },
                };
                if better {
                    best = Some((d, lo, hi, a, b));
                }
            }
        }
        let (height, _, _, a, b) = best.expect("at least two active clusters");
        let (ida, sa, la) = active[a].take().unwrap();
        let (idb, sb, lb) = active[b].take().unwrap();
        let ((left, right), name) = if la <= lb { ((ida, idb), la) } else { ((idb, ida), lb) };

        for k in 0..n {
            if active[k].is_none() || k == a {
                continue;
            }
            let (da, db) = (dist[a][k], dist[b][k]);
            let merged = match linkage {
                Linkage::Single => da.min(db),
                Linkage::Complete => da.max(db),
                Linkage::Average => (sa as f64 * da + sb as f64 * db) / (sa + sb) as f64,
            };
            dist[a][k] = merged;
            dist[k][a] = merged;
        }
        active[a] = Some((n + step, sa + sb, name));
        merges.push(Merge {
            left,
            right,
            height,
            size: sa + sb,
        });
    }
    Dendrogram {
        labels: corr.labels.clone(),
        merges,
    }
}

fn newick_label(label: &str) -> String {
    if label.chars().any(|c| " ()[]':;,\t\n".contains(c)) {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_owned()
    }
}

impl Dendrogram {
    fn height(&self, node: usize) -> f64 {
        let leaves = self.labels.len();
        if node < leaves {
            0.0
        } else {
            self.merges[node - leaves].height
        }
    }

    /// Leaf labels under a node, left to right.
    pub fn leaves_of(&self, node: usize) -> Vec<&str> {
        let leaves = self.labels.len();
        if node < leaves {
            return vec![self.labels[node].as_str()];
        }
        let m = self.merges[node - leaves];
        let mut out = self.leaves_of(m.left);
        out.extend(self.leaves_of(m.right));
        out
    }

    fn write_node(&self, node: usize, parent_height: f64, out: &mut String) {
        let leaves = self.labels.len();
        if node < leaves {
            out.push_str(&newick_label(&self.labels[node]));
        } else {
            let m = self.merges[node - leaves];
            out.push('(');
            self.write_node(m.left, m.height, out);
            out.push(',');
            self.write_node(m.right, m.height, out);
            out.push(')');
        }
        out.push_str(&format!(":{}", parent_height - self.height(node)));
    }

    /// Newick tree; branch lengths are differences of merge heights.
    pub fn to_newick(&self) -> String {
        let leaves = self.labels.len();
        let mut out = String::new();
        match leaves {
            0 => {}
            1 => out.push_str(&newick_label(&self.labels[0])),
            _ => {
                let root = leaves + self.merges.len() - 1;
                let m = self.merges[root - leaves];
                out.push('(');
                self.write_node(m.left, m.height, &mut out);
                out.push(',');
                self.write_node(m.right, m.height, &mut out);
                out.push(')');
            }
        }
        out.push(';');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ens(cols: &[(&str, &[f64])]) -> RatingEnsemble {
        let n = cols[0].1.len();
        let mut e = RatingEnsemble::new((0..n).map(|i| format!("J{i}")).collect());
        for (l, s) in cols {
            let v: Vec<Option<f64>> = s.iter().copied().map(Some).collect();
            e.push(*l, &v).unwrap();
        }
        e
    }

    fn corr3(ab: f64, ac: f64, bc: f64) -> CorrelationMatrix {
        CorrelationMatrix::new(
            vec!["A".into(), "B".into(), "C".into()],
            vec![vec![1.0, ab, ac], vec![ab, 1.0, bc], vec![ac, bc, 1.0]],
            CorrelationMethod::Spearman,
        )
        .unwrap()
    }

    #[test]
    fn fractional_rank_examples() {
        assert_eq!(fractional_ranks(&[3.0, 1.0, 2.0]), [1.0, 3.0, 2.0]);
        assert_eq!(fractional_ranks(&[5.0, 5.0, 1.0]), [1.5, 1.5, 3.0]);
        assert_eq!(fractional_ranks(&[7.0]), [1.0]);
    }

    #[test]
    fn identical_and_reversed() {
        let e = ens(&[("a", &[1.0, 4.0, 2.0, 8.0]), ("b", &[1.0, 4.0, 2.0, 8.0]), ("c", &[8.0, 2.0, 4.0, 1.0])]);
        for m in CorrelationMethod::ALL {
            let c = correlation_matrix(&e, m).unwrap();
            assert!((c.get("a", "b").unwrap() - 1.0).abs() < 1e-12, "{m}");
        }
        for m in [CorrelationMethod::Spearman, CorrelationMethod::Kendall] {
            let v = correlation_matrix(&e, m).unwrap().get("a", "c").unwrap();
            assert!((v + 1.0).abs() < 1e-12, "{m}: {v}");
        }
    }

    #[test]
    fn kendall_one_swap() {
        let t = kendall_tau_b(&[1.0, 2.0, 3.0, 4.0], &[2.0, 1.0, 3.0, 4.0]).unwrap();
        assert!((t - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_scheme_flagged_not_nan() {
        let e = ens(&[("a", &[1.0, 2.0, 3.0]), ("k", &[5.0, 5.0, 5.0])]);
        for m in CorrelationMethod::ALL {
            let c = correlation_matrix(&e, m).unwrap();
            assert_eq!(c.values, [[1.0, 0.0], [0.0, 1.0]]);
            assert_eq!(c.zero_variance, [("a".to_owned(), "k".to_owned())]);
        }
    }

    #[test]
    fn masked_overlap() {
        let mut e = RatingEnsemble::new((0..5).map(|i| format!("J{i}")).collect());
        e.push("a", &[Some(1.0), Some(2.0), Some(3.0), Some(4.0), Some(5.0)]).unwrap();
        e.push("b", &[Some(1.0), None, Some(3.0), None, Some(5.0)]).unwrap();
        let c = correlation_matrix(&e, CorrelationMethod::Pearson).unwrap();
        assert!((c.values[0][1] - 1.0).abs() < 1e-12);

        e.push("c", &[None, Some(1.0), None, Some(2.0), Some(0.0)]).unwrap();
        assert!(matches!(
            correlation_matrix(&e, CorrelationMethod::Pearson),
            Err(Error::InsufficientOverlap(a, b)) if a == "b" && b == "c"
        ));
    }

    #[test]
    fn upgma_three_schemes() {
        let d = hcluster(&corr3(0.9, 0.1, 0.1));
        assert_eq!(d.merges.len(), 2);
        assert_eq!((d.merges[0].left, d.merges[0].right), (0, 1));
        assert!((d.merges[0].height - 0.1).abs() < 1e-15);
        assert!((d.merges[1].height - 0.9).abs() < 1e-15);
        assert_eq!(d.leaves_of(4), ["A", "B", "C"]);
    }

    #[test]
    fn upgma_degenerate_heights() {
        let one = CorrelationMatrix::new(
            vec!["x".into(), "y".into()],
            vec![vec![1.0, 1.0], vec![1.0, 1.0]],
            CorrelationMethod::Pearson,
        )
        .unwrap();
        let d = hcluster(&one);
        assert_eq!(d.merges[0].height, 0.0);
        assert_eq!(d.to_newick(), "(x:0,y:0);");

        let zero = corr3(0.0, 0.0, 0.0);
        let d = hcluster(&zero);
        assert!(d.merges.iter().all(|m| m.height == 1.0));
        // ties broken by smallest label pair
        assert_eq!((d.merges[0].left, d.merges[0].right), (0, 1));
    }

    #[test]
    fn linkages_differ() {
        let c = corr3(0.9, 0.5, 0.1);
        assert!((hcluster_with(&c, Linkage::Single).merges[1].height - 0.5).abs() < 1e-12);
        assert!((hcluster_with(&c, Linkage::Complete).merges[1].height - 0.9).abs() < 1e-12);
        assert!((hcluster_with(&c, Linkage::Average).merges[1].height - 0.7).abs() < 1e-12);
    }

    #[test]
    fn newick_quotes_labels() {
        let c = CorrelationMatrix::new(
            vec!["qh@news".into(), "it's".into()],
            vec![vec![1.0, 0.5], vec![0.5, 1.0]],
            CorrelationMethod::Pearson,
        )
        .unwrap();
        assert_eq!(hcluster(&c).to_newick(), "('it''s':0.5,qh@news:0.5);");
    }

    #[test]
    fn pca_identical_schemes_coincide() {
        let c = CorrelationMatrix::new(
            vec!["x".into(), "y".into()],
            vec![vec![1.0, 1.0], vec![1.0, 1.0]],
            CorrelationMethod::Pearson,
        )
        .unwrap();
        let p = pca(&c);
        assert_eq!(p.coordinates[0], p.coordinates[1]);
        assert!(p.explained_variance.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn pca_collinear_rows() {
        let p = pca(&corr3(1.0, 0.3, 0.3));
        assert!((p.explained_variance[0] - 1.0).abs() < 1e-9);
        let s: f64 = p.explained_variance.iter().sum();
        assert!(s <= 1.0 + 1e-9);
    }

    #[test]
    fn correlation_matrix_validation() {
        assert!(CorrelationMatrix::new(vec!["a".into()], vec![vec![0.5]], CorrelationMethod::Pearson).is_err());
        assert!(CorrelationMatrix::new(
            vec!["a".into(), "b".into()],
            vec![vec![1.0, 0.2], vec![0.3, 1.0]],
            CorrelationMethod::Pearson
        )
        .is_err());
    }

    #[test]
    fn csv_emitters() {
        let c = corr3(0.5, 0.25, 0.0);
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "spearman,A,B,C\nA,1,0.5,0.25\nB,0.5,1,0\nC,0.25,0,1\n"
        );
        let mut buf = Vec::new();
        pca(&c).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("label,pc1,pc2,pc3\nA,"));
        assert!(text.lines().last().unwrap().starts_with("explained_variance,"));
    }
}
