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

//! C ABI for `altrank`. The header `include/altrank.h` is generated from
//! this file by the build script.
//!
//! Every fallible call returns an [`AltrankStatus`]; on failure the message
//! is kept per thread and read with [`altrank_last_error_message`]. Handles
//! are opaque, owned by the caller, and released with their `_free`
//! function. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use altrank::comparison::{kendall_tau_b, pearson, spearman};
use altrank::ingest::{parse_mentions, InputFormat, MentionRecord};
use altrank::rating::{to_ranking, SolverParams, Voting};
use altrank::scheme::{rate, Scheme, SchemeOptions};
use altrank::Error;
use libc::{c_char, size_t};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltrankStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnknownScheme = 4,
    EmptyCorpus = 5,
    NotConverged = 6,
    DegenerateNetwork = 7,
    InvalidInput = 8,
    BufferTooSmall = 10,
    InsufficientOverlap = 11,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltrankFormat {
    Csv = 0,
    Jsonl = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltrankVoting {
    WinnersAndLosers = 0,
    Losers = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltrankCorrelation {
    Pearson = 0,
    Spearman = 1,
    Kendall = 2,
}

/// Scheme evaluation settings. Start from [`altrank_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AltrankOptions {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: size_t,
    /// Minimum shared authors for two journals to be compared; 0 and 1 both
    /// mean any shared author.
    pub min_authors: size_t,
    pub voting: AltrankVoting,
}

/// Parsed mention records.
pub struct AltrankCorpus {
    records: Vec<MentionRecord>,
    journals: Vec<CString>,
}

/// One scheme's rating, aligned with its journal list.
pub struct AltrankRating {
    scheme: CString,
    journals: Vec<CString>,
    ids: Vec<String>,
    scores: Vec<f64>,
    ranks: Vec<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: AltrankStatus, msg: impl Into<String>) -> AltrankStatus {
    set_error(msg);
    status
}

fn status_of(err: &Error) -> AltrankStatus {
    match err.root() {
        Error::MalformedLine { .. }
        | Error::InconsistentJournal { .. }
        | Error::NonNumericScore { .. }
        | Error::DuplicateJournal { .. }
        | Error::Csv(_)
        | Error::Json(_)
        | Error::Io(_) => AltrankStatus::Parse,
        Error::UnknownScheme(_) => AltrankStatus::UnknownScheme,
        Error::EmptyCorpus => AltrankStatus::EmptyCorpus,
        Error::NotConverged { .. } => AltrankStatus::NotConverged,
        Error::DegenerateNetwork => AltrankStatus::DegenerateNetwork,
        Error::InsufficientOverlap(..) => AltrankStatus::InsufficientOverlap,
        _ => AltrankStatus::InvalidInput,
    }
}

fn from_error(err: Error) -> AltrankStatus {
    fail(status_of(&err), err.to_string())
}

/// Run `f`, turning a panic into [`AltrankStatus::Panic`].
fn guard(f: impl FnOnce() -> AltrankStatus + UnwindSafe) -> AltrankStatus {
    catch_unwind(f).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| p.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        fail(AltrankStatus::Panic, format!("internal error: {msg}"))
    })
}

fn c_string(s: &str) -> CString {
    CString::new(s.replace('\0', " ")).expect("NULs replaced")
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn altrank_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn altrank_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn altrank_options_default() -> AltrankOptions {
    let p = SolverParams::default();
    AltrankOptions {
        damping: p.damping,
        tol: p.tol,
        max_iter: p.max_iter,
        min_authors: 1,
        voting: AltrankVoting::WinnersAndLosers,
    }
}

/// Parse `len` bytes of CSV or JSONL mention records into a corpus. Any
/// malformed line fails the call.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn altrank_corpus_from_text(
    data: *const u8,
    len: size_t,
    format: AltrankFormat,
    out: *mut *mut AltrankCorpus,
) -> AltrankStatus {
    if out.is_null() || (data.is_null() && len > 0) {
        return fail(AltrankStatus::NullPointer, "null argument");
    }
    let bytes: &[u8] = if len == 0 { &[] } else { std::slice::from_raw_parts(data, len) };
    guard(move || {
        let format = match format {
            AltrankFormat::Csv => InputFormat::Csv,
            AltrankFormat::Jsonl => InputFormat::Jsonl,
        };
        let records = match parse_mentions(bytes, format).and_then(|p| p.into_strict()) {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        if records.is_empty() {
            return from_error(Error::EmptyCorpus);
        }
        let ids: std::collections::BTreeSet<&str> = records.iter().map(|r| r.journal_id.as_str()).collect();
        let journals = ids.into_iter().map(c_string).collect();
        let corpus = Box::new(AltrankCorpus { records, journals });
        // SAFETY: checked non-null above; the caller guarantees it is writable.
        unsafe { *out = Box::into_raw(corpus) };
        AltrankStatus::Ok
    })
}

/// # Safety
/// `corpus` must be NULL or a handle from [`altrank_corpus_from_text`] not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn altrank_corpus_free(corpus: *mut AltrankCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Number of records; 0 for NULL.
///
/// # Safety
/// `corpus` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn altrank_corpus_record_count(corpus: *const AltrankCorpus) -> size_t {
    corpus.as_ref().map_or(0, |c| c.records.len())
}

/// Number of distinct journals; 0 for NULL.
///
/// # Safety
/// `corpus` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn altrank_corpus_journal_count(corpus: *const AltrankCorpus) -> size_t {
    corpus.as_ref().map_or(0, |c| c.journals.len())
}

/// Journal id at `index` in sorted order, or NULL when out of range. Owned
/// by the corpus.
///
/// # Safety
/// `corpus` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn altrank_corpus_journal_id(corpus: *const AltrankCorpus, index: size_t) -> *const c_char {
    corpus
        .as_ref()
        .and_then(|c| c.journals.get(index))
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// Rate the corpus with one scheme label such as `bc`, `qpr`, `sh`,
/// `s-psr` or `qh@blogs`. `options` may be NULL for defaults.
///
/// # Safety
/// `corpus` must be a live handle, `scheme` a NUL-terminated string,
/// `options` NULL or readable, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn altrank_rate(
    corpus: *const AltrankCorpus,
    scheme: *const c_char,
    options: *const AltrankOptions,
    out: *mut *mut AltrankRating,
) -> AltrankStatus {
    let (Some(corpus), false, false) = (corpus.as_ref(), scheme.is_null(), out.is_null()) else {
        return fail(AltrankStatus::NullPointer, "null argument");
    };
    let Ok(label) = CStr::from_ptr(scheme).to_str() else {
        return fail(AltrankStatus::InvalidUtf8, "scheme is not valid UTF-8");
    };
    let opts = options.as_ref().copied().unwrap_or_else(|| altrank_options_default());
    guard(move || {
        let scheme: Scheme = match label.parse() {
            Ok(s) => s,
            Err(e) => return from_error(e),
        };
        let options = SchemeOptions {
            solver: SolverParams {
                damping: opts.damping,
                tol: opts.tol,
                max_iter: opts.max_iter,
                voting: match opts.voting {
                    AltrankVoting::WinnersAndLosers => Voting::WinnersAndLosersVote,
                    AltrankVoting::Losers => Voting::LosersVote,
                },
            },
            min_authors: opts.min_authors,
            ..Default::default()
        };
        let outcome = match rate(&corpus.records, &scheme, &options) {
            Ok(o) => o,
            Err(e) => return from_error(e),
        };
        let ranking = to_ranking(&outcome.rating);
        let rating = Box::new(AltrankRating {
            scheme: c_string(&ranking.scheme),
            journals: ranking.journals.iter().map(|j| c_string(j)).collect(),
            ids: ranking.journals,
            scores: ranking.scores,
            ranks: ranking.ranks,
        });
        // SAFETY: checked non-null above; the caller guarantees it is writable.
        unsafe { *out = Box::into_raw(rating) };
        AltrankStatus::Ok
    })
}

/// # Safety
/// `rating` must be NULL or a handle from [`altrank_rate`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn altrank_rating_free(rating: *mut AltrankRating) {
    if !rating.is_null() {
        drop(Box::from_raw(rating));
    }
}

/// Number of rated journals; 0 for NULL.
///
/// # Safety
/// `rating` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn altrank_rating_len(rating: *const AltrankRating) -> size_t {
    rating.as_ref().map_or(0, |r| r.scores.len())
}

/// Scheme label, owned by the rating; NULL for NULL.
///
/// # Safety
/// `rating` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn altrank_rating_scheme(rating: *const AltrankRating) -> *const c_char {
    rating.as_ref().map_or(ptr::null(), |r| r.scheme.as_ptr())
}

/// Journal id at `index`, owned by the rating; NULL when out of range.
///
/// # Safety
/// `rating` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn altrank_rating_journal_id(rating: *const AltrankRating, index: size_t) -> *const c_char {
    rating
        .as_ref()
        .and_then(|r| r.journals.get(index))
        .map_or(ptr::null(), |s| s.as_ptr())
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, cap: size_t) -> AltrankStatus {
    if buf.is_null() {
        return fail(AltrankStatus::NullPointer, "null buffer");
    }
    if cap < src.len() {
        return fail(
            AltrankStatus::BufferTooSmall,
            format!("buffer holds {cap} values, {} needed", src.len()),
        );
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    AltrankStatus::Ok
}

/// Copy the scores, in journal-id order, into `buf` of capacity `cap`.
///
/// # Safety
/// `rating` must be a live handle and `buf` writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn altrank_rating_scores(rating: *const AltrankRating, buf: *mut f64, cap: size_t) -> AltrankStatus {
    match rating.as_ref() {
        Some(r) => copy_out(&r.scores, buf, cap),
        None => fail(AltrankStatus::NullPointer, "null rating"),
    }
}

/// Copy the ranks (1 = best, ties share the mean position) into `buf`.
///
/// # Safety
/// `rating` must be a live handle and `buf` writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn altrank_rating_ranks(rating: *const AltrankRating, buf: *mut f64, cap: size_t) -> AltrankStatus {
    match rating.as_ref() {
        Some(r) => copy_out(&r.ranks, buf, cap),
        None => fail(AltrankStatus::NullPointer, "null rating"),
    }
}

/// Correlate two ratings over the journals both contain. A constant side
/// yields 0, as in correlation matrices.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn altrank_correlate(
    a: *const AltrankRating,
    b: *const AltrankRating,
    method: AltrankCorrelation,
    out: *mut f64,
) -> AltrankStatus {
    let (Some(a), Some(b), false) = (a.as_ref(), b.as_ref(), out.is_null()) else {
        return fail(AltrankStatus::NullPointer, "null argument");
    };
    guard(move || {
        let index: std::collections::HashMap<&str, usize> =
            b.ids.iter().enumerate().map(|(i, j)| (j.as_str(), i)).collect();
        let (x, y): (Vec<f64>, Vec<f64>) = a
            .ids
            .iter()
            .zip(&a.scores)
            .filter_map(|(j, &s)| index.get(j.as_str()).map(|&i| (s, b.scores[i])))
            .unzip();
        if x.len() < 3 {
            let (sa, sb) = (a.scheme.to_string_lossy(), b.scheme.to_string_lossy());
            return from_error(Error::InsufficientOverlap(sa.into_owned(), sb.into_owned()));
        }
        let r = match method {
            AltrankCorrelation::Pearson => pearson(&x, &y),
            AltrankCorrelation::Spearman => spearman(&x, &y),
            AltrankCorrelation::Kendall => kendall_tau_b(&x, &y),
        };
        // SAFETY: checked non-null above; the caller guarantees it is writable.
        unsafe { *out = r.unwrap_or(0.0) };
        AltrankStatus::Ok
    })
}
