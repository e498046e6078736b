//! Splitting raw text into words, formulas and excluded spans.
//!
//! Math is recognized inside `$…$`, `$$…$$` and `\[…\]`; `\$` is a literal
//! dollar sign. A block between two leading `---` lines is author metadata,
//! and a line reading only `References`, `Bibliography` or
//! `Список литературы` starts the bibliography, which runs to the end.
//! Lines of the form `[FIGURE]` or `[FIGURE: caption]` stand in for figures.
//!
//! Segments partition the body: each one starts where its first item starts
//! and runs up to the start of the next segment, so punctuation and
//! whitespace between items belong to the segment before them.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::formula::{alpha_canonicalize_document, tokenize_formula, FormulaSpan, MathSymbol};
use crate::span::ByteRange;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct WordToken {
    pub normalized: String,
    pub byte_range: ByteRange,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(
    feature = "serde",
    derive(Serialize, Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum ExclusionReason {
    Metadata,
    Bibliography,
    TermDictionary,
    StopPhrase,
    FigureCaptionPlaceholder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ExclusionSpan {
    pub byte_range: ByteRange,
    pub reason: ExclusionReason,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentKind {
    /// At least one word token.
    Words(Vec<WordToken>),
    /// Index into [`Document::formulas`].
    Formula(usize),
    /// Content kept aside; the tokens and formulas are retained so scoring
    /// can decide per policy whether the exclusion applies.
    Excluded {
        reason: ExclusionReason,
        span: ByteRange,
        words: Vec<WordToken>,
        formulas: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub byte_range: ByteRange,
    pub kind: SegmentKind,
}

impl Segment {
    pub fn words(&self) -> &[WordToken] {
        match &self.kind {
            SegmentKind::Words(w) => w,
            _ => &[],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub source_id: String,
    pub raw_text: String,
    /// Whitespace-trimmed extent of the text; empty when nothing was found.
    pub body_range: ByteRange,
    pub segments: Vec<Segment>,
    pub exclusions: Vec<ExclusionSpan>,
    /// Every formula in reading order, including excluded ones.
    pub formulas: Vec<FormulaSpan>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    pub front_matter: bool,
    pub bibliography: bool,
    pub figures: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            front_matter: true,
            bibliography: true,
            figures: true,
        }
    }
}

const BIBLIOGRAPHY_HEADINGS: &[&str] = &["references", "bibliography", "список литературы"];

/// Split text into lowercase word tokens.
///
/// Words are separated by Unicode whitespace; leading and trailing
/// non-alphanumeric characters are stripped, so `Navier–Stokes,` gives
/// `navier–stokes`. Byte ranges are relative to `text`.
pub fn tokenize_words(text: &str) -> Vec<WordToken> {
    tokenize_words_at(text, 0)
}

fn tokenize_words_at(text: &str, base: usize) -> Vec<WordToken> {
    let mut out = Vec::new();
    let mut chunk_start = None;
    for (i, c) in text
        .char_indices()
        .chain(core::iter::once((text.len(), ' ')))
    {
        match (c.is_whitespace(), chunk_start) {
            (false, None) => chunk_start = Some(i),
            (true, Some(s)) => {
                push_word(&text[s..i], base + s, &mut out);
                chunk_start = None;
            }
            _ => {}
        }
    }
    out
}

fn push_word(chunk: &str, offset: usize, out: &mut Vec<WordToken>) {
    let Some(first) = chunk.find(|c: char| c.is_alphanumeric()) else {
        return;
    };
    let last = chunk
        .char_indices()
        .rev()
        .find(|(_, c)| c.is_alphanumeric())
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(chunk.len());
    let core_text = &chunk[first..last];
    let normalized: String = core_text
        .chars()
        .filter(|c| *c != '$' && *c != '\\')
        .flat_map(char::to_lowercase)
        .collect();
    out.push(WordToken {
        normalized,
        byte_range: ByteRange::new(offset + first, offset + last),
    });
}

/// Parse raw bytes, reporting non-UTF-8 input as [`ParseError::InvalidEncoding`].
pub fn parse_document_bytes(raw: &[u8], options: &ParseOptions) -> Result<Document, ParseError> {
    let text = core::str::from_utf8(raw).map_err(|e| ParseError::InvalidEncoding {
        offset: e.valid_up_to(),
    })?;
    parse_document(text, options)
}

/// Build a document from text that contains no math at all.
pub fn plain_document(text: &str) -> Document {
    let words = tokenize_words(text);
    let mut items = Vec::new();
    for w in words {
        items.push(Item::Word(w));
    }
    assemble(text, Vec::new(), items)
}

enum Item {
    Word(WordToken),
    Formula {
        start: usize,
        index: usize,
    },
    Excluded {
        start: usize,
        span: ExclusionSpan,
        words: Vec<WordToken>,
    },
}

impl Item {
    fn start(&self) -> usize {
        match self {
            Item::Word(w) => w.byte_range.start,
            Item::Formula { start, .. } | Item::Excluded { start, .. } => *start,
        }
    }
}

/// Parse a document into segments.
pub fn parse_document(raw_text: &str, options: &ParseOptions) -> Result<Document, ParseError> {
    let body = trimmed_range(raw_text);
    let mut items = Vec::new();
    let mut formulas = Vec::new();
    let mut cursor = body.start;
    let mut end = body.end;

    if options.front_matter {
        if let Some(fm) = front_matter(raw_text, body) {
            items.push(Item::Excluded {
                start: fm.start,
                span: ExclusionSpan {
                    byte_range: fm,
                    reason: ExclusionReason::Metadata,
                },
                words: tokenize_words_at(&raw_text[fm.as_range()], fm.start),
            });
            cursor = fm.end;
        }
    }
    let mut tail = None;
    if options.bibliography {
        if let Some(start) = bibliography_start(raw_text, cursor, end) {
            tail = Some(ByteRange::new(start, end));
            end = start;
        }
    }

    for piece in scan_math(raw_text, cursor, end)? {
        match piece {
            Piece::Text(r) => text_items(raw_text, r, options.figures, &mut items),
            Piece::Math {
                open,
                interior,
                display,
            } => {
                let (formula_range, label) = if display {
                    split_display(raw_text, interior)
                } else {
                    (trim_range(raw_text, interior), None)
                };
                if let Ok(f) =
                    FormulaSpan::new(&raw_text[formula_range.as_range()], formula_range.start)
                {
                    items.push(Item::Formula {
                        start: open,
                        index: formulas.len(),
                    });
                    formulas.push(f);
                }
                if let Some(label) = label {
                    items.push(Item::Word(label));
                }
            }
        }
    }

    if let Some(t) = tail {
        items.push(Item::Excluded {
            start: t.start,
            span: ExclusionSpan {
                byte_range: t,
                reason: ExclusionReason::Bibliography,
            },
            words: tokenize_words_at(&raw_text[t.as_range()], t.start),
        });
    }

    let mut doc = assemble(raw_text, formulas, items);
    refresh_alpha(&mut doc);
    Ok(doc)
}

fn trimmed_range(text: &str) -> ByteRange {
    let start = text.len() - text.trim_start().len();
    let end = text.trim_end().len().max(start);
    ByteRange::new(start, end)
}

fn trim_range(text: &str, r: ByteRange) -> ByteRange {
    let inner = trimmed_range(&text[r.as_range()]);
    inner.shifted(r.start)
}

/// Lines of `text` within `[from, to)` as (start, end-without-newline).
fn lines(text: &str, from: usize, to: usize) -> impl Iterator<Item = ByteRange> + '_ {
    let mut pos = from;
    core::iter::from_fn(move || {
        if pos >= to {
            return None;
        }
        let rest = &text[pos..to];
        let len = rest.find('\n').unwrap_or(rest.len());
        let line = ByteRange::new(pos, pos + len);
        pos += len + 1;
        Some(line)
    })
}

fn front_matter(text: &str, body: ByteRange) -> Option<ByteRange> {
    let mut it = lines(text, body.start, body.end);
    let first = it.next()?;
    if text[first.as_range()].trim() != "---" {
        return None;
    }
    it.find(|l| text[l.as_range()].trim() == "---")
        .map(|close| ByteRange::new(first.start, trim_range(text, close).end))
}

fn bibliography_start(text: &str, from: usize, to: usize) -> Option<usize> {
    lines(text, from, to).find_map(|l| {
        let line = text[l.as_range()].trim();
        let lower: String = line.chars().flat_map(char::to_lowercase).collect();
        BIBLIOGRAPHY_HEADINGS
            .contains(&lower.as_str())
            .then(|| trim_range(text, l).start)
    })
}

enum Piece {
    Text(ByteRange),
    Math {
        open: usize,
        interior: ByteRange,
        display: bool,
    },
}

/// Position of the next unescaped `closer` at or after `from`.
fn find_closer(bytes: &[u8], from: usize, to: usize, closer: &[u8]) -> Option<usize> {
    let mut i = from;
    while i < to {
        if bytes[i..to].starts_with(closer) {
            return Some(i);
        }
        i += if bytes[i] == b'\\' && closer[0] != b'\\' {
            2
        } else {
            1
        };
    }
    None
}

fn scan_math(text: &str, from: usize, to: usize) -> Result<Vec<Piece>, ParseError> {
    let bytes = text.as_bytes();
    let mut pieces = Vec::new();
    let mut text_start = from;
    let mut i = from;
    // Delimiters are ASCII, so byte-wise stepping never lands inside a
    // multi-byte character in a way that matters.
    while i < to {
        let (open_len, closer, display): (usize, &[u8], bool) = match bytes[i] {
            b'\\' => match bytes.get(i + 1) {
                Some(b'[') if i + 1 < to => (2, b"\\]", true),
                Some(b']') if i + 1 < to => {
                    return Err(ParseError::UnbalancedDelimiter { offset: i });
                }
                Some(_) if i + 1 < to => {
                    i += 2;
                    continue;
                }
                _ => {
                    i += 1;
                    continue;
                }
            },
            b'$' if bytes.get(i + 1) == Some(&b'$') && i + 1 < to => (2, b"$$", true),
            b'$' => (1, b"$", false),
            _ => {
                i += 1;
                continue;
            }
        };
        let inner_start = i + open_len;
        let close = find_closer(bytes, inner_start, to, closer)
            .ok_or(ParseError::UnbalancedDelimiter { offset: i })?;
        if text_start < i {
            pieces.push(Piece::Text(ByteRange::new(text_start, i)));
        }
        pieces.push(Piece::Math {
            open: i,
            interior: ByteRange::new(inner_start, close),
            display,
        });
        i = close + closer.len();
        text_start = i;
    }
    if text_start < to {
        pieces.push(Piece::Text(ByteRange::new(text_start, to)));
    }
    Ok(pieces)
}

fn is_figure_line(line: &str) -> bool {
    let line = line.trim();
    line.ends_with(']')
        && line
            .strip_prefix("[FIGURE")
            .is_some_and(|rest| rest.starts_with([']', ':', ' ']))
}

fn text_items(text: &str, r: ByteRange, figures: bool, items: &mut Vec<Item>) {
    if !figures {
        items.extend(
            tokenize_words_at(&text[r.as_range()], r.start)
                .into_iter()
                .map(Item::Word),
        );
        return;
    }
    for line in lines(text, r.start, r.end) {
        let content = &text[line.as_range()];
        if is_figure_line(content) {
            let span = trim_range(text, line);
            items.push(Item::Excluded {
                start: span.start,
                span: ExclusionSpan {
                    byte_range: span,
                    reason: ExclusionReason::FigureCaptionPlaceholder,
                },
                words: tokenize_words_at(&text[span.as_range()], span.start),
            });
        } else {
            items.extend(
                tokenize_words_at(content, line.start)
                    .into_iter()
                    .map(Item::Word),
            );
        }
    }
}

/// Split a display-math interior into the formula proper and an optional
/// trailing equation label (`\quad (i)`, `\qquad (2)`, `\tag{3}`), dropping
/// sentence punctuation that ends the formula.
fn split_display(text: &str, interior: ByteRange) -> (ByteRange, Option<WordToken>) {
    let r = trim_range(text, interior);
    let s = &text[r.as_range()];
    let mut formula_end = s.len();
    let mut label = None;

    if let Some((cut, lr, name)) = quad_label(s).or_else(|| tag_label(s)) {
        formula_end = cut;
        label = Some(WordToken {
            normalized: name,
            byte_range: lr.shifted(r.start),
        });
    }
    let head = s[..formula_end].trim_end();
    let head = head.trim_end_matches([',', '.', ';']).trim_end();
    (ByteRange::new(r.start, r.start + head.len()), label)
}

/// The label inside `(…)` or `\tag{…}`: its byte range within `inner` and
/// its normalized name.
fn label_name(inner: &str) -> Option<(ByteRange, String)> {
    let mut start = inner.len() - inner.trim_start().len();
    let mut end = inner.trim_end().len();
    for wrap in ["\\text{", "\\mathrm{"] {
        let t = &inner[start..end];
        if t.starts_with(wrap) && t.ends_with('}') {
            start += wrap.len();
            end -= 1;
            break;
        }
    }
    let t = inner[start..end].trim();
    start += inner[start..end].len() - inner[start..end].trim_start().len();
    let ok = !t.is_empty()
        && t.chars().count() <= 8
        && t.chars().all(|c| c.is_alphanumeric() || c == '.');
    ok.then(|| {
        let name = t.chars().flat_map(char::to_lowercase).collect();
        (ByteRange::new(start, start + t.len()), name)
    })
}

/// `... \quad (label)` at the end of `s`: (cut position, label range, name).
fn quad_label(s: &str) -> Option<(usize, ByteRange, String)> {
    if !s.ends_with(')') {
        return None;
    }
    let open = s.rfind('(')?;
    let (r, name) = label_name(&s[open + 1..s.len() - 1])?;
    let before = s[..open].trim_end();
    let cut = ["\\qquad", "\\quad"]
        .iter()
        .find_map(|q| before.strip_suffix(q).map(str::len))?;
    Some((cut, r.shifted(open + 1), name))
}

fn tag_label(s: &str) -> Option<(usize, ByteRange, String)> {
    if !s.ends_with('}') {
        return None;
    }
    let tag = s.rfind("\\tag{")?;
    let (r, name) = label_name(&s[tag + 5..s.len() - 1])?;
    Some((tag, r.shifted(tag + 5), name))
}

fn assemble(raw_text: &str, formulas: Vec<FormulaSpan>, items: Vec<Item>) -> Document {
    let body = trimmed_range(raw_text);
    let mut segments: Vec<Segment> = Vec::new();
    for item in items {
        let start = item.start();
        match item {
            Item::Word(w) => match segments.last_mut() {
                Some(Segment {
                    kind: SegmentKind::Words(words),
                    ..
                }) => words.push(w),
                _ => segments.push(Segment {
                    byte_range: ByteRange::new(start, start),
                    kind: SegmentKind::Words(alloc::vec![w]),
                }),
            },
            Item::Formula { index, .. } => segments.push(Segment {
                byte_range: ByteRange::new(start, start),
                kind: SegmentKind::Formula(index),
            }),
            Item::Excluded { span, words, .. } => segments.push(Segment {
                byte_range: ByteRange::new(start, start),
                kind: SegmentKind::Excluded {
                    reason: span.reason,
                    span: span.byte_range,
                    words,
                    formulas: Vec::new(),
                },
            }),
        }
    }
    let body = if segments.is_empty() {
        ByteRange::new(body.start, body.start)
    } else {
        body
    };
    close_ranges(&mut segments, body);
    let mut doc = Document {
        source_id: String::new(),
        raw_text: raw_text.to_string(),
        body_range: body,
        segments,
        exclusions: Vec::new(),
        formulas,
    };
    doc.exclusions = collect_exclusions(&doc.segments);
    doc
}

/// Stretch each segment to the start of the next one; the first begins at
/// the body start and the last ends at the body end.
fn close_ranges(segments: &mut [Segment], body: ByteRange) {
    let n = segments.len();
    for k in 0..n {
        let end = if k + 1 < n {
            segments[k + 1].byte_range.start
        } else {
            body.end
        };
        if k == 0 {
            segments[k].byte_range.start = body.start;
        }
        segments[k].byte_range.end = end;
    }
}

fn collect_exclusions(segments: &[Segment]) -> Vec<ExclusionSpan> {
    segments
        .iter()
        .filter_map(|s| match &s.kind {
            SegmentKind::Excluded { reason, span, .. } => Some(ExclusionSpan {
                byte_range: *span,
                reason: *reason,
            }),
            _ => None,
        })
        .collect()
}

/// Alpha forms use one renaming over every formula of the document,
/// excluded or not, so exclusions never shift the letter numbering.
fn refresh_alpha(doc: &mut Document) {
    alpha_canonicalize_document(doc.formulas.iter_mut());
}

impl Document {
    pub fn with_source_id(mut self, id: impl Into<String>) -> Self {
        self.source_id = id.into();
        self
    }

    /// Word tokens outside exclusions, in reading order.
    pub fn words(&self) -> impl Iterator<Item = &WordToken> {
        self.segments.iter().flat_map(|s| s.words().iter())
    }

    /// Indices of formulas that are not inside an excluded segment.
    pub fn active_formula_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.segments.iter().filter_map(|s| match s.kind {
            SegmentKind::Formula(i) => Some(i),
            _ => None,
        })
    }

    pub fn excluded_word_count(&self) -> usize {
        self.segments
            .iter()
            .map(|s| match &s.kind {
                SegmentKind::Excluded { words, .. } => words.len(),
                _ => 0,
            })
            .sum()
    }
}

/// Phrases and formulas whose occurrences are kept out of every index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermDictionary {
    /// Normalized word sequences.
    pub phrases: Vec<Vec<String>>,
    /// Canonical symbol sequences of whole formulas.
    pub formulas: Vec<Vec<MathSymbol>>,
}

impl TermDictionary {
    /// Build from entries; an entry wrapped in `$…$` is a formula.
    pub fn from_entries<'a, I: IntoIterator<Item = &'a str>>(entries: I) -> Self {
        let mut dict = TermDictionary::default();
        for e in entries {
            dict.add(e);
        }
        dict
    }

    /// Parse dictionary text: one entry per line, `#` starts a comment line,
    /// blank lines are ignored.
    pub fn parse(text: &str) -> Self {
        Self::from_entries(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn add(&mut self, entry: &str) {
        let entry = entry.trim();
        let math = entry
            .strip_prefix("$$")
            .and_then(|e| e.strip_suffix("$$"))
            .or_else(|| entry.strip_prefix('$').and_then(|e| e.strip_suffix('$')));
        if let Some(src) = math {
            if let Ok(symbols) = tokenize_formula(src) {
                if !self.formulas.contains(&symbols) {
                    self.formulas.push(symbols);
                }
            }
            return;
        }
        let words: Vec<String> = tokenize_words(entry)
            .into_iter()
            .map(|w| w.normalized)
            .collect();
        if !words.is_empty() && !self.phrases.contains(&words) {
            self.phrases.push(words);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty() && self.formulas.is_empty()
    }

    pub fn len(&self) -> usize {
        self.phrases.len() + self.formulas.len()
    }
}

/// Exclude term-dictionary occurrences; see [`apply_exclusions`].
pub fn apply_phrase_exclusions(doc: &Document, dictionary: &TermDictionary) -> Document {
    apply_exclusions(doc, dictionary, ExclusionReason::TermDictionary)
}

/// Mark every case-insensitive occurrence of a dictionary phrase inside a
/// words segment, and every formula equal to a dictionary formula, as
/// excluded with `reason`.
///
/// Overlapping and adjacent occurrences merge into one maximal excluded run,
/// so a longer entry always wins over a shorter one it overlaps. Applying
/// the same dictionary again changes nothing.
pub fn apply_exclusions(
    doc: &Document,
    dictionary: &TermDictionary,
    reason: ExclusionReason,
) -> Document {
    let mut segments = Vec::with_capacity(doc.segments.len());
    for seg in &doc.segments {
        match &seg.kind {
            SegmentKind::Words(words) => {
                split_words_segment(seg.byte_range, words, dictionary, reason, &mut segments)
            }
            SegmentKind::Formula(i)
                if dictionary.formulas.contains(&doc.formulas[*i].canonical) =>
            {
                segments.push(Segment {
                    byte_range: seg.byte_range,
                    kind: SegmentKind::Excluded {
                        reason,
                        span: doc.formulas[*i].byte_range,
                        words: Vec::new(),
                        formulas: alloc::vec![*i],
                    },
                });
            }
            _ => segments.push(seg.clone()),
        }
    }
    Document {
        source_id: doc.source_id.clone(),
        raw_text: doc.raw_text.clone(),
        body_range: doc.body_range,
        exclusions: collect_exclusions(&segments),
        segments,
        formulas: doc.formulas.clone(),
    }
}

fn split_words_segment(
    range: ByteRange,
    words: &[WordToken],
    dictionary: &TermDictionary,
    reason: ExclusionReason,
    out: &mut Vec<Segment>,
) {
    let mut hit = alloc::vec![false; words.len()];
    for phrase in &dictionary.phrases {
        if phrase.len() > words.len() {
            continue;
        }
        for s in 0..=words.len() - phrase.len() {
            let matches = phrase
                .iter()
                .zip(&words[s..])
                .all(|(p, w)| *p == w.normalized);
            if matches {
                hit[s..s + phrase.len()].iter_mut().for_each(|h| *h = true);
            }
        }
    }
    if !hit.iter().any(|h| *h) {
        out.push(Segment {
            byte_range: range,
            kind: SegmentKind::Words(words.to_vec()),
        });
        return;
    }

    let first = out.len();
    let mut k = 0;
    while k < words.len() {
        let excluded = hit[k];
        let run_end = (k..words.len())
            .find(|&j| hit[j] != excluded)
            .unwrap_or(words.len());
        let run = words[k..run_end].to_vec();
        let start = run[0].byte_range.start;
        let kind = if excluded {
            SegmentKind::Excluded {
                reason,
                span: ByteRange::new(start, run[run.len() - 1].byte_range.end),
                words: run,
                formulas: Vec::new(),
            }
        } else {
            SegmentKind::Words(run)
        };
        out.push(Segment {
            byte_range: ByteRange::new(start, start),
            kind,
        });
        k = run_end;
    }
    close_ranges(&mut out[first..], range);
}
