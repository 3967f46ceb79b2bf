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

//! Mention records, the source taxonomy, and aggregation into the
//! journal-by-author count matrix every rating is computed from.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One author's mention of one paper, published in one journal, through one source.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MentionRecord {
    pub author_id: String,
    pub source: String,
    pub paper_id: String,
    pub journal_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl MentionRecord {
    pub fn new(author: &str, source: &str, paper: &str, journal: &str) -> Self {
        MentionRecord {
            author_id: author.to_owned(),
            source: source.to_owned(),
            paper_id: paper.to_owned(),
            journal_id: journal.to_owned(),
            timestamp: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Csv,
    Jsonl,
}

impl InputFormat {
    /// Guess the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("ndjson") | Some("json") => InputFormat::Jsonl,
            _ => InputFormat::Csv,
        }
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(InputFormat::Csv),
            "jsonl" => Ok(InputFormat::Jsonl),
            other => Err(Error::InvalidInput(format!("unknown input format `{other}`"))),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::Csv => "csv",
            InputFormat::Jsonl => "jsonl",
        })
    }
}

/// A line that could not be turned into a record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MalformedLine {
    pub line: usize,
    pub reason: String,
}

impl MalformedLine {
    pub fn to_error(&self) -> Error {
        Error::MalformedLine {
            line: self.line,
            reason: self.reason.clone(),
        }
    }
}

/// Result of parsing a mention stream: the good records in input order and
/// a report of every line that was rejected.
#[derive(Debug, Clone, Default)]
pub struct ParsedMentions {
    pub records: Vec<MentionRecord>,
    pub malformed: Vec<MalformedLine>,
}

impl ParsedMentions {
    /// Fail on the first malformed line, if any.
    pub fn into_strict(self) -> Result<Vec<MentionRecord>> {
        match self.malformed.first() {
            Some(bad) => Err(bad.to_error()),
            None => Ok(self.records),
        }
    }
}

const REQUIRED_KEYS: [&str; 4] = ["author_id", "source", "paper_id", "journal_id"];

/// Source labels are matched case-insensitively.
fn normalize_source(s: &str) -> String {
    s.trim().to_lowercase()
}

struct JournalGuard {
    paper_journal: HashMap<String, String>,
}

impl JournalGuard {
    fn new() -> Self {
        JournalGuard {
            paper_journal: HashMap::new(),
        }
    }

    fn check(&mut self, line: usize, rec: &MentionRecord) -> Result<()> {
        match self.paper_journal.get(&rec.paper_id) {
            Some(j) if *j != rec.journal_id => Err(Error::InconsistentJournal {
                line,
                paper_id: rec.paper_id.clone(),
                first: j.clone(),
                second: rec.journal_id.clone(),
            }),
            Some(_) => Ok(()),
            None => {
                self.paper_journal
                    .insert(rec.paper_id.clone(), rec.journal_id.clone());
                Ok(())
            }
        }
    }
}

fn build_record(
    author: Option<&str>,
    source: Option<&str>,
    paper: Option<&str>,
    journal: Option<&str>,
    timestamp: Option<&str>,
) -> std::result::Result<MentionRecord, String> {
    let fields = [author, source, paper, journal];
    let mut values: [String; 4] = Default::default();
    for ((key, value), slot) in REQUIRED_KEYS.iter().zip(fields).zip(values.iter_mut()) {
        match value.map(str::trim) {
            None => return Err(format!("missing `{key}`")),
            Some("") => return Err(format!("empty `{key}`")),
            Some(v) => *slot = v.to_owned(),
        }
    }
    let [author_id, source, paper_id, journal_id] = values;
    Ok(MentionRecord {
        author_id,
        source: normalize_source(&source),
        paper_id,
        journal_id,
        timestamp: timestamp
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::to_owned),
    })
}

/// Parse a mention stream.
///
/// Malformed lines are collected in [`ParsedMentions::malformed`] with their
/// 1-based line numbers. A paper seen under two different journals aborts the
/// parse with [`Error::InconsistentJournal`].
pub fn parse_mentions<R: Read>(reader: R, format: InputFormat) -> Result<ParsedMentions> {
    match format {
        InputFormat::Csv => parse_csv(reader),
        InputFormat::Jsonl => parse_jsonl(reader),
    }
}

pub fn read_mentions(path: &Path, format: Option<InputFormat>) -> Result<ParsedMentions> {
    let format = format.unwrap_or_else(|| InputFormat::from_path(path));
    let file = std::fs::File::open(path).map_err(|e| Error::from(e).in_file(path))?;
    parse_mentions(BufReader::new(file), format).map_err(|e| e.in_file(path))
}

fn parse_csv<R: Read>(reader: R) -> Result<ParsedMentions> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut out = ParsedMentions::default();
    let mut guard = JournalGuard::new();
    let mut rows = rdr.records();

    let header = match rows.next() {
        None => return Ok(out),
        Some(h) => h?,
    };
    let column = |name: &str| header.iter().position(|h| h.trim() == name);
    let mut idx = [0usize; 4];
    for (slot, key) in idx.iter_mut().zip(REQUIRED_KEYS) {
        *slot = column(key).ok_or_else(|| Error::MalformedLine {
            line: 1,
            reason: format!("header lacks `{key}` column"),
        })?;
    }
    let ts_idx = column("timestamp");
    let width = header.len();

    for row in rows {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
                if matches!(e.kind(), csv::ErrorKind::Utf8 { .. }) {
                    out.malformed.push(MalformedLine {
                        line,
                        reason: "invalid UTF-8".into(),
                    });
                    continue;
                }
                return Err(e.into());
            }
        };
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        if row.len() == 1 && row.get(0).is_some_and(|f| f.trim().is_empty()) {
            continue;
        }
        if row.len() != width {
            out.malformed.push(MalformedLine {
                line,
                reason: format!("expected {width} fields, found {}", row.len()),
            });
            continue;
        }
        match build_record(
            row.get(idx[0]),
            row.get(idx[1]),
            row.get(idx[2]),
            row.get(idx[3]),
            ts_idx.and_then(|i| row.get(i)),
        ) {
            Ok(rec) => {
                guard.check(line, &rec)?;
                out.records.push(rec);
            }
            Err(reason) => out.malformed.push(MalformedLine { line, reason }),
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
struct RawMention {
    author_id: Option<String>,
    source: Option<String>,
    paper_id: Option<String>,
    journal_id: Option<String>,
    timestamp: Option<String>,
}

fn parse_jsonl<R: Read>(reader: R) -> Result<ParsedMentions> {
    let mut out = ParsedMentions::default();
    let mut guard = JournalGuard::new();
    let reader = BufReader::new(reader);
    for (i, line) in reader.split(b'\n').enumerate() {
        let lineno = i + 1;
        let bytes = line?;
        let text = match std::str::from_utf8(&bytes) {
            Ok(t) => t.trim(),
            Err(_) => {
                out.malformed.push(MalformedLine {
                    line: lineno,
                    reason: "invalid UTF-8".into(),
                });
                continue;
            }
        };
        if text.is_empty() {
            continue;
        }
        let raw: RawMention = match serde_json::from_str(text) {
            Ok(r) => r,
            Err(e) => {
                out.malformed.push(MalformedLine {
                    line: lineno,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        match build_record(
            raw.author_id.as_deref(),
            raw.source.as_deref(),
            raw.paper_id.as_deref(),
            raw.journal_id.as_deref(),
            raw.timestamp.as_deref(),
        ) {
            Ok(rec) => {
                guard.check(lineno, &rec)?;
                out.records.push(rec);
            }
            Err(reason) => out.malformed.push(MalformedLine {
                line: lineno,
                reason,
            }),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceClass {
    Social,
    Nonsocial,
}

/// Which sources count as social media, and the per-source weights used by
/// the weighted count.
///
/// The defaults (social: twitter, facebook, google+; weights news 8, blogs 5,
/// twitter 1, facebook 0.25, google+ 1, other 1) are this tool's own choice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceTaxonomy {
    weights: BTreeMap<String, f64>,
    social: BTreeSet<String>,
    nonsocial: BTreeSet<String>,
}

/// Key used for sources without an explicit weight.
pub const OTHER_SOURCE: &str = "other";

impl Default for SourceTaxonomy {
    fn default() -> Self {
        let weights = [
            ("news", 8.0),
            ("blogs", 5.0),
            ("twitter", 1.0),
            ("facebook", 0.25),
            ("google+", 1.0),
            (OTHER_SOURCE, 1.0),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
        let social = ["twitter", "facebook", "google+"]
            .into_iter()
            .map(str::to_owned)
            .collect();
        SourceTaxonomy {
            weights,
            social,
            nonsocial: BTreeSet::new(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TaxonomyFile {
    weights: Option<BTreeMap<String, f64>>,
    social: Option<Vec<String>>,
    nonsocial: Option<Vec<String>>,
}

impl SourceTaxonomy {
    pub fn new(
        weights: BTreeMap<String, f64>,
        social: impl IntoIterator<Item = String>,
        nonsocial: impl IntoIterator<Item = String>,
    ) -> Result<Self> {
        let weights: BTreeMap<String, f64> = weights
            .into_iter()
            .map(|(k, v)| (normalize_source(&k), v))
            .collect();
        if let Some((k, w)) = weights.iter().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::InvalidTaxonomy(format!(
                "weight for `{k}` must be a finite non-negative number, got {w}"
            )));
        }
        let social: BTreeSet<String> = social.into_iter().map(|s| normalize_source(&s)).collect();
        let nonsocial: BTreeSet<String> =
            nonsocial.into_iter().map(|s| normalize_source(&s)).collect();
        if let Some(both) = social.intersection(&nonsocial).next() {
            return Err(Error::InvalidTaxonomy(format!(
                "source `{both}` is listed as both social and nonsocial"
            )));
        }
        Ok(SourceTaxonomy {
            weights,
            social,
            nonsocial,
        })
    }

    /// Parse a taxonomy file:
    ///
    /// ```toml
    /// social = ["twitter", "facebook"]
    /// weights.news = 8
    /// weights."google+" = 1
    /// ```
    ///
    /// Keys left out keep their defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: TaxonomyFile =
            toml::from_str(text).map_err(|e| Error::InvalidTaxonomy(e.to_string()))?;
        let default = SourceTaxonomy::default();
        SourceTaxonomy::new(
            file.weights.unwrap_or(default.weights),
            file.social.unwrap_or_else(|| default.social.into_iter().collect()),
            file.nonsocial.unwrap_or_default(),
        )
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
        Self::from_toml_str(&text).map_err(|e| e.in_file(path))
    }

    /// Everything not listed as social is nonsocial.
    pub fn class_of(&self, source: &str) -> SourceClass {
        if self.social.contains(source) {
            SourceClass::Social
        } else {
            SourceClass::Nonsocial
        }
    }

    pub fn weight(&self, source: &str) -> Result<f64> {
        self.weights
            .get(source)
            .or_else(|| self.weights.get(OTHER_SOURCE))
            .copied()
            .ok_or_else(|| Error::MissingWeight(source.to_owned()))
    }

    /// True when the label is named anywhere in the taxonomy.
    pub fn is_known(&self, source: &str) -> bool {
        self.weights.contains_key(source)
            || self.social.contains(source)
            || self.nonsocial.contains(source)
    }

    pub fn weights(&self) -> &BTreeMap<String, f64> {
        &self.weights
    }

    pub fn social(&self) -> &BTreeSet<String> {
        &self.social
    }
}

/// Aggregation switches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileOptions {
    /// Count an author's repeated mentions of the same paper once.
    #[serde(default)]
    pub dedup: bool,
}

/// The journal-by-author mention count matrix, with per-source and
/// per-paper breakdowns.
///
/// Journals, authors and sources are sorted lexicographically. The journal
/// and source lists cover the whole record list even when a source
/// restriction removed all of a journal's mentions, so profiles built from
/// the same records with different restrictions line up row for row.
#[derive(Debug, Clone, PartialEq)]
pub struct MentionProfile {
    journals: Vec<String>,
    authors: Vec<String>,
    sources: Vec<String>,
    /// journal -> (author, count), sorted by author
    rows: Vec<Vec<(usize, u64)>>,
    /// journal -> (source, count), sorted by source
    source_counts: Vec<Vec<(usize, u64)>>,
    /// journal -> paper -> count
    papers: Vec<BTreeMap<String, u64>>,
    total: u64,
}

fn sorted_index<'a>(ids: impl Iterator<Item = &'a str>) -> (Vec<String>, HashMap<&'a str, usize>) {
    let set: BTreeSet<&str> = ids.collect();
    let index = set.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    (set.into_iter().map(str::to_owned).collect(), index)
}

fn into_rows(cells: HashMap<(usize, usize), u64>, n: usize) -> Vec<Vec<(usize, u64)>> {
    let mut rows = vec![Vec::new(); n];
    for ((r, c), v) in cells {
        rows[r].push((c, v));
    }
    for row in &mut rows {
        row.sort_unstable();
    }
    rows
}

/// Aggregate records into a profile, optionally keeping only some sources.
pub fn build_profile(records: &[MentionRecord], restrict: Option<&BTreeSet<String>>) -> MentionProfile {
    build_profile_with(records, restrict, ProfileOptions::default())
}

pub fn build_profile_with(
    records: &[MentionRecord],
    restrict: Option<&BTreeSet<String>>,
    options: ProfileOptions,
) -> MentionProfile {
    let (journals, journal_idx) = sorted_index(records.iter().map(|r| r.journal_id.as_str()));
    let (sources, source_idx) = sorted_index(records.iter().map(|r| r.source.as_str()));

    let mut seen: HashSet<(&str, &str)> = HashSet::new();
    let kept: Vec<&MentionRecord> = records
        .iter()
        .filter(|r| restrict.is_none_or(|s| s.contains(&r.source)))
        .filter(|r| !options.dedup || seen.insert((&r.author_id, &r.paper_id)))
        .collect();

    let (authors, author_idx) = sorted_index(kept.iter().map(|r| r.author_id.as_str()));

    let mut cells: HashMap<(usize, usize), u64> = HashMap::new();
    let mut by_source: HashMap<(usize, usize), u64> = HashMap::new();
    let mut papers = vec![BTreeMap::new(); journals.len()];
    for r in &kept {
        let j = journal_idx[r.journal_id.as_str()];
        *cells.entry((j, author_idx[r.author_id.as_str()])).or_default() += 1;
        *by_source.entry((j, source_idx[r.source.as_str()])).or_default() += 1;
        *papers[j].entry(r.paper_id.clone()).or_default() += 1;
    }

    MentionProfile {
        rows: into_rows(cells, journals.len()),
        source_counts: into_rows(by_source, journals.len()),
        papers,
        total: kept.len() as u64,
        journals,
        authors,
        sources,
    }
}

impl MentionProfile {
    pub fn journals(&self) -> &[String] {
        &self.journals
    }

    pub fn authors(&self) -> &[String] {
        &self.authors
    }

    pub fn sources(&self) -> &[String] {
        &self.sources
    }

    pub fn journal_index(&self, id: &str) -> Option<usize> {
        self.journals.binary_search_by(|j| j.as_str().cmp(id)).ok()
    }

    pub fn author_index(&self, id: &str) -> Option<usize> {
        self.authors.binary_search_by(|a| a.as_str().cmp(id)).ok()
    }

    /// Nonzero `(author, count)` entries of a journal's row.
    pub fn journal_row(&self, journal: usize) -> &[(usize, u64)] {
        &self.rows[journal]
    }

    pub fn count(&self, journal: usize, author: usize) -> u64 {
        let row = &self.rows[journal];
        row.binary_search_by_key(&author, |&(a, _)| a)
            .map(|i| row[i].1)
            .unwrap_or(0)
    }

    /// Nonzero `(source, count)` entries of a journal, indices into [`Self::sources`].
    pub fn source_row(&self, journal: usize) -> &[(usize, u64)] {
        &self.source_counts[journal]
    }

    /// Mentions per paper published in the journal.
    pub fn papers(&self, journal: usize) -> &BTreeMap<String, u64> {
        &self.papers[journal]
    }

    /// Number of records that went into the profile.
    pub fn total_mentions(&self) -> u64 {
        self.total
    }

    /// The transpose of the count matrix: author -> sorted `(journal, count)`.
    pub fn author_rows(&self) -> Vec<Vec<(usize, u64)>> {
        let mut out = vec![Vec::new(); self.authors.len()];
        for (j, row) in self.rows.iter().enumerate() {
            for &(a, c) in row {
                out[a].push((j, c));
            }
        }
        out
    }

    /// The count matrix as a dense journal-by-author table.
    pub fn dense(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0; self.authors.len()]; self.journals.len()];
        for (j, row) in self.rows.iter().enumerate() {
            for &(a, c) in row {
                out[j][a] = c;
            }
        }
        out
    }
}

/// A rating computed elsewhere (Impact Factor, Eigenfactor, ...).
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalRating {
    pub name: String,
    pub scores: BTreeMap<String, f64>,
}

impl ExternalRating {
    /// Journal ids in this rating that the corpus does not know about.
    pub fn unmatched<'a>(&'a self, journals: &[String]) -> Vec<&'a str> {
        self.scores
            .keys()
            .filter(|k| journals.binary_search(k).is_err())
            .map(String::as_str)
            .collect()
    }
}

/// Read a two-column `journal_id,score` CSV. A `journal_id,score` header
/// row is skipped when present.
pub fn load_external_ratings<R: Read>(reader: R, name: &str) -> Result<ExternalRating> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut scores = BTreeMap::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(i + 1);
        if i == 0 && row.get(0).map(str::trim) == Some("journal_id") {
            continue;
        }
        if row.len() == 1 && row.get(0).is_some_and(|f| f.trim().is_empty()) {
            continue;
        }
        if row.len() != 2 {
            return Err(Error::MalformedLine {
                line,
                reason: format!("expected 2 fields, found {}", row.len()),
            });
        }
        let journal = row[0].trim();
        if journal.is_empty() {
            return Err(Error::MalformedLine {
                line,
                reason: "empty `journal_id`".into(),
            });
        }
        let raw = row[1].trim();
        let score: f64 = raw
            .parse()
            .ok()
            .filter(|s: &f64| s.is_finite())
            .ok_or_else(|| Error::NonNumericScore {
                row: line,
                value: raw.to_owned(),
            })?;
        if scores.insert(journal.to_owned(), score).is_some() {
            return Err(Error::DuplicateJournal {
                row: line,
                journal_id: journal.to_owned(),
            });
        }
    }
    Ok(ExternalRating {
        name: name.to_owned(),
        scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv(text: &str) -> ParsedMentions {
        parse_mentions(text.as_bytes(), InputFormat::Csv).unwrap()
    }

    #[test]
    fn empty_stream_yields_no_records() {
        assert!(csv("").records.is_empty());
        let p = parse_mentions("".as_bytes(), InputFormat::Jsonl).unwrap();
        assert!(p.records.is_empty() && p.malformed.is_empty());
    }

    #[test]
    fn jsonl_preserves_order() {
        let text = r#"{"author_id":"a1","source":"twitter","paper_id":"p1","journal_id":"J1"}
{"author_id":"a2","source":"blogs","paper_id":"p2","journal_id":"J2","timestamp":"2014-01-02T00:00:00Z"}
{"author_id":"a3","source":"News","paper_id":"p3","journal_id":"J1"}
"#;
        let p = parse_mentions(text.as_bytes(), InputFormat::Jsonl).unwrap();
        assert!(p.malformed.is_empty());
        let authors: Vec<_> = p.records.iter().map(|r| r.author_id.as_str()).collect();
        assert_eq!(authors, ["a1", "a2", "a3"]);
        assert_eq!(p.records[1].timestamp.as_deref(), Some("2014-01-02T00:00:00Z"));
        assert_eq!(p.records[2].source, "news");
    }

    #[test]
    fn inconsistent_journal_reported_at_second_line() {
        let text = "author_id,source,paper_id,journal_id\na,twitter,P1,J1\nb,twitter,P2,J1\nc,twitter,P1,J2\n";
        match parse_mentions(text.as_bytes(), InputFormat::Csv) {
            Err(Error::InconsistentJournal { line, paper_id, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(paper_id, "P1");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_lines_are_collected() {
        let text = "author_id,source,paper_id,journal_id,timestamp\n\
                    a,twitter,P1,J1,\n\
                    b,twitter,P2\n\
                    ,twitter,P3,J1,\n\
                    d,blogs,P4,J2,2014\n";
        let p = csv(text);
        assert_eq!(p.records.len(), 2);
        let lines: Vec<usize> = p.malformed.iter().map(|m| m.line).collect();
        assert_eq!(lines, [3, 4]);
        assert!(p.into_strict().is_err());
    }

    #[test]
    fn csv_header_may_reorder_columns() {
        let p = csv("journal_id,paper_id,source,author_id\nJ1,P1,twitter,a\n");
        assert_eq!(p.records[0], MentionRecord::new("a", "twitter", "P1", "J1"));
    }

    #[test]
    fn csv_missing_column_is_an_error() {
        let err = parse_mentions("author_id,source,paper_id\n".as_bytes(), InputFormat::Csv);
        assert!(matches!(err, Err(Error::MalformedLine { line: 1, .. })));
    }

    #[test]
    fn jsonl_missing_key() {
        let p = parse_mentions(
            r#"{"author_id":"a","source":"twitter","paper_id":"p"}"#.as_bytes(),
            InputFormat::Jsonl,
        )
        .unwrap();
        assert_eq!(p.malformed.len(), 1);
        assert!(p.malformed[0].reason.contains("journal_id"));
    }

    fn three_author_subset() -> Vec<MentionRecord> {
        vec![
            MentionRecord::new("A2", "twitter", "P1", "J1"),
            MentionRecord::new("A2", "twitter", "P2", "J1"),
            MentionRecord::new("A2", "twitter", "P4", "J2"),
        ]
    }

    #[test]
    fn profile_counts_two_one() {
        let p = build_profile(&three_author_subset(), None);
        assert_eq!(p.journals(), ["J1", "J2"]);
        let a2 = p.author_index("A2").unwrap();
        assert_eq!(p.count(0, a2), 2);
        assert_eq!(p.count(1, a2), 1);
        assert_eq!(p.total_mentions(), 3);
    }

    #[test]
    fn restriction_to_absent_source_empties_profile() {
        let recs = vec![
            MentionRecord::new("a", "facebook", "P1", "J1"),
            MentionRecord::new("b", "facebook", "P2", "J2"),
        ];
        let only_twitter: BTreeSet<String> = ["twitter".to_owned()].into();
        let p = build_profile(&recs, Some(&only_twitter));
        assert!(p.authors().is_empty());
        assert_eq!(p.journals().len(), 2);
        assert!(p.dense().iter().all(|row| row.is_empty()));
        assert_eq!(p.total_mentions(), 0);
    }

    #[test]
    fn repeated_mentions_all_count_unless_dedup() {
        let recs = vec![MentionRecord::new("a", "twitter", "P1", "J1"); 5];
        let p = build_profile(&recs, None);
        assert_eq!(p.count(0, 0), 5);
        let d = build_profile_with(&recs, None, ProfileOptions { dedup: true });
        assert_eq!(d.count(0, 0), 1);
    }

    #[test]
    fn taxonomy_defaults_and_overrides() {
        let t = SourceTaxonomy::default();
        assert_eq!(t.class_of("twitter"), SourceClass::Social);
        assert_eq!(t.class_of("news"), SourceClass::Nonsocial);
        assert_eq!(t.weight("news").unwrap(), 8.0);
        assert_eq!(t.weight("reddit").unwrap(), 1.0);
        assert!(!t.is_known("reddit"));

        let t = SourceTaxonomy::from_toml_str(
            "social = [\"twitter\"]\nweights.news = 2\nweights.\"google+\" = 3\n",
        )
        .unwrap();
        assert_eq!(t.class_of("facebook"), SourceClass::Nonsocial);
        assert_eq!(t.weight("google+").unwrap(), 3.0);
        assert!(matches!(t.weight("blogs"), Err(Error::MissingWeight(_))));
    }

    #[test]
    fn taxonomy_rejects_overlap_and_negative_weights() {
        assert!(SourceTaxonomy::from_toml_str("social=[\"a\"]\nnonsocial=[\"a\"]").is_err());
        assert!(SourceTaxonomy::from_toml_str("weights.a = -1").is_err());
    }

    #[test]
    fn external_ratings() {
        let r = load_external_ratings("J1,3.2\nJ2,1.1\n".as_bytes(), "IF").unwrap();
        assert_eq!(r.scores.len(), 2);
        assert_eq!(r.scores["J1"], 3.2);
        let r = load_external_ratings("journal_id,score\nJ1,3.2\n".as_bytes(), "IF").unwrap();
        assert_eq!(r.scores.len(), 1);
        assert_eq!(r.unmatched(&["J2".to_owned()]), ["J1"]);

        assert!(matches!(
            load_external_ratings("J1,3.2\nJ1,1.0\n".as_bytes(), "IF"),
            Err(Error::DuplicateJournal { row: 2, .. })
        ));
        assert!(matches!(
            load_external_ratings("J1,3.2\nJ2,n/a\n".as_bytes(), "IF"),
            Err(Error::NonNumericScore { row: 2, .. })
        ));
    }
}
