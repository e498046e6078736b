//! Directional similarity indices.
//!
//! For a pair (A, B), `si(A|B)` is the share of A's countable units that
//! coincide with units of B, times 100. What a "unit" is depends on the mode:
//!
//! | mode        | units                                      | formula handling        |
//! |-------------|--------------------------------------------|-------------------------|
//! | `Fragment`  | words + formula fragments (symbols)        | exploded into symbols   |
//! | `Method1`   | formulas only                              | whole-formula equality  |
//! | `Method2`   | words + formulas, a formula worth `w` words | whole-formula equality  |
//! | `Letters`   | letters of the words, spaces dropped       | ignored                 |
//!
//! Word, symbol and letter matching use one greedy tiling per pair, so both
//! directions cover the same number of units and differ only in their
//! denominators. Tiling runs over the full streams; excluded units are then
//! dropped from numerator and denominator alike, which means switching an
//! exclusion on can never raise a matched count.

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::PolicyError;
use crate::formula::{formulas_equal, MathSymbol};
use crate::matcher::{covered_a, covered_b, greedy_string_tiling, Granularity, MatchTile};
use crate::segmenter::{plain_document, Document, ExclusionReason, ExclusionSpan, SegmentKind};
use crate::span::ByteRange;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(
    feature = "serde",
    derive(Serialize, Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum Mode {
    Fragment,
    Method1,
    Method2,
    Letters,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Fragment, Mode::Method1, Mode::Method2, Mode::Letters];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Fragment => "fragment",
            Mode::Method1 => "method1",
            Mode::Method2 => "method2",
            Mode::Letters => "letters",
        }
    }
}

impl core::fmt::Display for Mode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which exclusions are honored. `short_sequences` raises the word
/// minimum match from 1 to [`Policy::word_min_match`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Exclusions {
    pub metadata: bool,
    pub bibliography: bool,
    pub term_dictionary: bool,
    pub stop_phrases: bool,
    pub figure_placeholders: bool,
    pub short_sequences: bool,
}

impl Exclusions {
    pub const ALL: Exclusions = Exclusions {
        metadata: true,
        bibliography: true,
        term_dictionary: true,
        stop_phrases: true,
        figure_placeholders: true,
        short_sequences: true,
    };

    pub const NONE: Exclusions = Exclusions {
        metadata: false,
        bibliography: false,
        term_dictionary: false,
        stop_phrases: false,
        figure_placeholders: false,
        short_sequences: false,
    };

    pub fn applies(&self, reason: ExclusionReason) -> bool {
        match reason {
            ExclusionReason::Metadata => self.metadata,
            ExclusionReason::Bibliography => self.bibliography,
            ExclusionReason::TermDictionary => self.term_dictionary,
            ExclusionReason::StopPhrase => self.stop_phrases,
            ExclusionReason::FigureCaptionPlaceholder => self.figure_placeholders,
        }
    }
}

impl Default for Exclusions {
    fn default() -> Self {
        Exclusions::ALL
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Policy {
    pub mode: Mode,
    pub word_min_match: usize,
    pub symbol_min_match: usize,
    pub letter_min_match: usize,
    /// How many words one formula is worth in `Method2`.
    pub formula_weight: u32,
    /// Compare formulas after document-wide letter renaming.
    pub alpha: bool,
    /// Formulas with fewer canonical symbols are not counted.
    pub min_formula_len: usize,
    pub exclusions: Exclusions,
}

impl Policy {
    pub const DEFAULT_WORD_MIN_MATCH: usize = 8;
    pub const DEFAULT_SYMBOL_MIN_MATCH: usize = 1;
    pub const DEFAULT_LETTER_MIN_MATCH: usize = 3;
    pub const DEFAULT_FORMULA_WEIGHT: u32 = 8;

    pub fn new(mode: Mode) -> Self {
        Policy {
            mode,
            word_min_match: Self::DEFAULT_WORD_MIN_MATCH,
            symbol_min_match: Self::DEFAULT_SYMBOL_MIN_MATCH,
            letter_min_match: Self::DEFAULT_LETTER_MIN_MATCH,
            formula_weight: Self::DEFAULT_FORMULA_WEIGHT,
            alpha: false,
            min_formula_len: 1,
            exclusions: Exclusions::ALL,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<(), PolicyError> {
        for (field, v) in [
            ("word_min_match", self.word_min_match),
            ("symbol_min_match", self.symbol_min_match),
            ("letter_min_match", self.letter_min_match),
        ] {
            if v == 0 {
                return Err(PolicyError::ZeroMinMatch { field });
            }
        }
        if self.formula_weight == 0 {
            return Err(PolicyError::ZeroFormulaWeight);
        }
        Ok(())
    }

    /// Word minimum match after the short-sequence toggle.
    pub fn effective_word_min_match(&self) -> usize {
        if self.exclusions.short_sequences {
            self.word_min_match
        } else {
            1
        }
    }
}

impl Default for Policy {
    fn default() -> Self {
        Policy::new(Mode::Method2)
    }
}

/// Counts for one side of a comparison. Fields a mode does not use stay 0;
/// fragment and letter modes report their units under `symbols_*`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Counts {
    pub words_total: u64,
    pub words_matched: u64,
    pub formulas_total: u64,
    pub formulas_matched: u64,
    pub symbols_total: u64,
    pub symbols_matched: u64,
    /// Nothing countable on this side; the index is reported as 0.
    pub zero_denominator: bool,
}

impl Counts {
    /// The index this side's counts define under `policy`.
    pub fn index(&self, policy: &Policy) -> f64 {
        let (num, den) = match policy.mode {
            Mode::Fragment | Mode::Letters => (
                self.words_matched + self.symbols_matched,
                self.words_total + self.symbols_total,
            ),
            Mode::Method1 => (self.formulas_matched, self.formulas_total),
            Mode::Method2 => {
                let w = u64::from(policy.formula_weight);
                (
                    self.words_matched + w * self.formulas_matched,
                    self.words_total + w * self.formulas_total,
                )
            }
        };
        percent(num, den)
    }
}

fn percent(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64 * 100.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(
    feature = "serde",
    derive(Serialize, Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum Side {
    A,
    B,
}

/// Indices into [`Document::formulas`] of two equal formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FormulaPair {
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct LedgerEntry {
    pub side: Side,
    pub byte_range: ByteRange,
    pub reason: ExclusionReason,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SimilarityReport {
    pub mode: Mode,
    pub si_a_given_b: f64,
    pub si_b_given_a: f64,
    pub policy: Policy,
    pub counts_a: Counts,
    pub counts_b: Counts,
    pub tiles: Vec<MatchTile>,
    pub matched_formula_pairs: Vec<FormulaPair>,
    /// Exclusions that the policy honored, on either side.
    pub excluded_ledger: Vec<LedgerEntry>,
}

impl SimilarityReport {
    fn from_counts(
        policy: Policy,
        counts_a: Counts,
        counts_b: Counts,
        tiles: Vec<MatchTile>,
        matched_formula_pairs: Vec<FormulaPair>,
        a: &Document,
        b: &Document,
    ) -> Self {
        SimilarityReport {
            mode: policy.mode,
            si_a_given_b: counts_a.index(&policy),
            si_b_given_a: counts_b.index(&policy),
            policy,
            counts_a,
            counts_b,
            tiles,
            matched_formula_pairs,
            excluded_ledger: ledger(a, b, &policy),
        }
    }

    pub fn counts(&self, side: Side) -> &Counts {
        match side {
            Side::A => &self.counts_a,
            Side::B => &self.counts_b,
        }
    }

    pub fn index(&self, side: Side) -> f64 {
        match side {
            Side::A => self.si_a_given_b,
            Side::B => self.si_b_given_a,
        }
    }
}

fn ledger(a: &Document, b: &Document, policy: &Policy) -> Vec<LedgerEntry> {
    let entries = |side: Side, doc: &Document| {
        doc.exclusions
            .iter()
            .filter(|e| policy.exclusions.applies(e.reason))
            .map(move |&ExclusionSpan { byte_range, reason }| LedgerEntry {
                side,
                byte_range,
                reason,
            })
            .collect::<Vec<_>>()
    };
    let mut out = entries(Side::A, a);
    out.extend(entries(Side::B, b));
    out
}

/// One countable unit of a stream.
struct Unit<T> {
    token: T,
    range: ByteRange,
    /// Segment index for words and letters, formula index for symbols;
    /// consecutive units of one group are contiguous in the text.
    group: usize,
    counted: bool,
}

fn word_units<'d>(doc: &'d Document, policy: &Policy) -> Vec<Unit<&'d str>> {
    let mut out = Vec::new();
    for (g, seg) in doc.segments.iter().enumerate() {
        let (words, counted) = match &seg.kind {
            SegmentKind::Words(w) => (w.as_slice(), true),
            SegmentKind::Excluded { reason, words, .. } => {
                (words.as_slice(), !policy.exclusions.applies(*reason))
            }
            SegmentKind::Formula(_) => continue,
        };
        out.extend(words.iter().map(|w| Unit {
            token: w.normalized.as_str(),
            range: w.byte_range,
            group: g,
            counted,
        }));
    }
    out
}

fn letter_units(doc: &Document, policy: &Policy) -> Vec<Unit<char>> {
    let mut out = Vec::new();
    for u in word_units(doc, policy) {
        let text = &doc.raw_text[u.range.as_range()];
        for (i, c) in text.char_indices().filter(|(_, c)| c.is_alphanumeric()) {
            let start = u.range.start + i;
            let range = ByteRange::new(start, start + c.len_utf8());
            out.extend(c.to_lowercase().map(|lc| Unit {
                token: lc,
                range,
                group: u.group,
                counted: u.counted,
            }));
        }
    }
    out
}

/// Formulas in reading order with their counted flag.
fn formula_entries(doc: &Document, policy: &Policy) -> Vec<(usize, bool)> {
    let long_enough = |i: usize| doc.formulas[i].canonical.len() >= policy.min_formula_len;
    let mut out = Vec::new();
    for seg in &doc.segments {
        match &seg.kind {
            SegmentKind::Formula(i) => out.push((*i, long_enough(*i))),
            SegmentKind::Excluded {
                reason, formulas, ..
            } => {
                let honored = policy.exclusions.applies(*reason);
                out.extend(formulas.iter().map(|&i| (i, !honored && long_enough(i))));
            }
            SegmentKind::Words(_) => {}
        }
    }
    out
}

fn symbol_units<'d>(doc: &'d Document, policy: &Policy) -> Vec<Unit<&'d MathSymbol>> {
    let mut out = Vec::new();
    for (i, counted) in formula_entries(doc, policy) {
        out.extend(
            doc.formulas[i]
                .fragment_symbols(policy.alpha)
                .map(|(sym, range)| Unit {
                    token: sym,
                    range,
                    group: i,
                    counted,
                }),
        );
    }
    out
}

fn tokens<T: Copy>(units: &[Unit<T>]) -> Vec<T> {
    units.iter().map(|u| u.token).collect()
}

/// (total, matched) over counted units.
fn tally<T>(units: &[Unit<T>], covered: &[bool]) -> (u64, u64) {
    units
        .iter()
        .zip(covered)
        .filter(|(u, _)| u.counted)
        .fold((0, 0), |(t, m), (_, &c)| (t + 1, m + u64::from(c)))
}

struct Tiled {
    tiles: Vec<MatchTile>,
    a: (u64, u64),
    b: (u64, u64),
}

fn tile_units<T: Copy + PartialEq>(
    ua: &[Unit<T>],
    ub: &[Unit<T>],
    min_match: usize,
    granularity: Granularity,
) -> Tiled {
    // A stream shorter than the threshold can still be matched as a whole.
    let min_match = min_match.min(ua.len().min(ub.len())).max(1);
    let tiles = greedy_string_tiling(&tokens(ua), &tokens(ub), min_match, granularity);
    Tiled {
        a: tally(ua, &covered_a(&tiles, ua.len())),
        b: tally(ub, &covered_b(&tiles, ub.len())),
        tiles,
    }
}

fn tile_words(a: &Document, b: &Document, policy: &Policy) -> Tiled {
    let (ua, ub) = (word_units(a, policy), word_units(b, policy));
    tile_units(
        &ua,
        &ub,
        policy.effective_word_min_match(),
        Granularity::Word,
    )
}

struct FormulaMatch {
    pairs: Vec<FormulaPair>,
    a: (u64, u64),
    b: (u64, u64),
}

/// Whole-formula matching with set semantics: a counted formula matches when
/// any counted formula on the other side is equal to it.
fn match_formulas(a: &Document, b: &Document, policy: &Policy) -> FormulaMatch {
    let counted = |d: &Document| -> Vec<usize> {
        formula_entries(d, policy)
            .into_iter()
            .filter_map(|(i, c)| c.then_some(i))
            .collect()
    };
    let (fa, fb) = (counted(a), counted(b));
    let mut pairs = Vec::new();
    let mut hit_a = alloc::vec![false; fa.len()];
    let mut hit_b = alloc::vec![false; fb.len()];
    for (x, &i) in fa.iter().enumerate() {
        for (y, &j) in fb.iter().enumerate() {
            if formulas_equal(&a.formulas[i], &b.formulas[j], policy.alpha) {
                pairs.push(FormulaPair { a: i, b: j });
                hit_a[x] = true;
                hit_b[y] = true;
            }
        }
    }
    let hits = |h: &[bool]| h.iter().filter(|x| **x).count() as u64;
    FormulaMatch {
        a: (fa.len() as u64, hits(&hit_a)),
        b: (fb.len() as u64, hits(&hit_b)),
        pairs,
    }
}

fn finish(mut c: Counts, policy: &Policy) -> Counts {
    c.zero_denominator = match policy.mode {
        Mode::Fragment | Mode::Letters => c.words_total + c.symbols_total == 0,
        Mode::Method1 => c.formulas_total == 0,
        Mode::Method2 => c.words_total + c.formulas_total == 0,
    };
    c
}

/// Fragment mode: words and the symbols of every formula are matched as
/// independent pieces, the way a text-only checker treats formulas.
pub fn score_fragment(a: &Document, b: &Document, policy: &Policy) -> SimilarityReport {
    let policy = policy.with_mode(Mode::Fragment);
    let words = tile_words(a, b, &policy);
    let (sa, sb) = (symbol_units(a, &policy), symbol_units(b, &policy));
    let symbols = tile_units(&sa, &sb, policy.symbol_min_match, Granularity::MathSymbol);
    let side = |w: (u64, u64), s: (u64, u64)| {
        finish(
            Counts {
                words_total: w.0,
                words_matched: w.1,
                symbols_total: s.0,
                symbols_matched: s.1,
                ..Counts::default()
            },
            &policy,
        )
    };
    let counts_a = side(words.a, symbols.a);
    let counts_b = side(words.b, symbols.b);
    let mut tiles = words.tiles;
    tiles.extend(symbols.tiles);
    SimilarityReport::from_counts(policy, counts_a, counts_b, tiles, Vec::new(), a, b)
}

/// Method 1: words are discarded and formulas are compared as wholes.
pub fn score_method1(a: &Document, b: &Document, policy: &Policy) -> SimilarityReport {
    let policy = policy.with_mode(Mode::Method1);
    let m = match_formulas(a, b, &policy);
    let side = |f: (u64, u64)| {
        finish(
            Counts {
                formulas_total: f.0,
                formulas_matched: f.1,
                ..Counts::default()
            },
            &policy,
        )
    };
    SimilarityReport::from_counts(policy, side(m.a), side(m.b), Vec::new(), m.pairs, a, b)
}

/// Method 2: words are tiled as usual and each whole-formula match counts as
/// `formula_weight` words.
pub fn score_method2(a: &Document, b: &Document, policy: &Policy) -> SimilarityReport {
    let policy = policy.with_mode(Mode::Method2);
    let words = tile_words(a, b, &policy);
    let m = match_formulas(a, b, &policy);
    let side = |w: (u64, u64), f: (u64, u64)| {
        finish(
            Counts {
                words_total: w.0,
                words_matched: w.1,
                formulas_total: f.0,
                formulas_matched: f.1,
                ..Counts::default()
            },
            &policy,
        )
    };
    let counts_a = side(words.a, m.a);
    let counts_b = side(words.b, m.b);
    SimilarityReport::from_counts(policy, counts_a, counts_b, words.tiles, m.pairs, a, b)
}

/// Letter mode: the words' letters, with spaces removed, tiled with
/// `letter_min_match`.
pub fn score_letters(a: &Document, b: &Document, policy: &Policy) -> SimilarityReport {
    let policy = policy.with_mode(Mode::Letters);
    let (la, lb) = (letter_units(a, &policy), letter_units(b, &policy));
    let t = tile_units(&la, &lb, policy.letter_min_match, Granularity::Letter);
    let side = |s: (u64, u64)| {
        finish(
            Counts {
                symbols_total: s.0,
                symbols_matched: s.1,
                ..Counts::default()
            },
            &policy,
        )
    };
    SimilarityReport::from_counts(policy, side(t.a), side(t.b), t.tiles, Vec::new(), a, b)
}

/// Compare two plain phrases letter by letter. Kept to show how absurd
/// fragment matching becomes when applied to words.
pub fn letter_fragment_demo(phrase_a: &str, phrase_b: &str) -> SimilarityReport {
    let a = plain_document(phrase_a);
    let b = plain_document(phrase_b);
    score_letters(&a, &b, &Policy::new(Mode::Letters))
}

/// Validate the policy and score under `policy.mode`.
pub fn score(a: &Document, b: &Document, policy: &Policy) -> Result<SimilarityReport, PolicyError> {
    policy.validate()?;
    Ok(match policy.mode {
        Mode::Fragment => score_fragment(a, b, policy),
        Mode::Method1 => score_method1(a, b, policy),
        Mode::Method2 => score_method2(a, b, policy),
        Mode::Letters => score_letters(a, b, policy),
    })
}

/// Byte ranges covered by the report's tiles in each document, one range
/// per run of consecutive tile units inside a single segment or formula.
/// Returned sorted by start.
pub fn tile_byte_ranges(
    report: &SimilarityReport,
    a: &Document,
    b: &Document,
) -> (Vec<ByteRange>, Vec<ByteRange>) {
    let policy = &report.policy;
    let mut out_a = Vec::new();
    let mut out_b = Vec::new();
    for granularity in [
        Granularity::Word,
        Granularity::MathSymbol,
        Granularity::Letter,
    ] {
        let tiles: Vec<&MatchTile> = report
            .tiles
            .iter()
            .filter(|t| t.granularity == granularity)
            .collect();
        if tiles.is_empty() {
            continue;
        }
        let (ga, gb) = match granularity {
            Granularity::Word => (strip(word_units(a, policy)), strip(word_units(b, policy))),
            Granularity::MathSymbol => (
                strip(symbol_units(a, policy)),
                strip(symbol_units(b, policy)),
            ),
            Granularity::Letter => (
                strip(letter_units(a, policy)),
                strip(letter_units(b, policy)),
            ),
        };
        for t in tiles {
            merge_run(&ga[t.a_start..t.a_end()], &mut out_a);
            merge_run(&gb[t.b_start..t.b_end()], &mut out_b);
        }
    }
    out_a.sort_unstable();
    out_b.sort_unstable();
    (out_a, out_b)
}

fn strip<T>(units: Vec<Unit<T>>) -> Vec<(ByteRange, usize)> {
    units.into_iter().map(|u| (u.range, u.group)).collect()
}

fn merge_run(run: &[(ByteRange, usize)], out: &mut Vec<ByteRange>) {
    let mut current: Option<(ByteRange, usize)> = None;
    for &(r, g) in run {
        current = match current {
            Some((cur, cg)) if cg == g => Some((ByteRange::new(cur.start, r.end.max(cur.end)), g)),
            Some((cur, _)) => {
                out.push(cur);
                Some((r, g))
            }
            None => Some((r, g)),
        };
    }
    if let Some((cur, _)) = current {
        out.push(cur);
    }
}
