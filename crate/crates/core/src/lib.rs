#![no_std]
//! Similarity indices for inhomogeneous scientific texts, i.e. documents that
//! mix ordinary words with equations and formulas.
//!
//! The pipeline is:
//!
//! 1. [`segmenter`] splits raw text into word tokens, formula spans and
//!    excluded spans (front matter, bibliography, dictionary phrases).
//! 2. [`formula`] turns every formula into symbol sequences: a full-fidelity
//!    canonical form, a "fragment" stream with brackets and indices thrown
//!    away, and a document-wide letter-renamed form.
//! 3. [`matcher`] runs greedy string tiling over any two token streams.
//! 4. [`scoring`] combines the above into directional indices under one of
//!    the scoring modes: fragment matching, whole-formula matching
//!    (formulas only), a weighted hybrid, or letter-level matching.
//!
//! The crate only needs `alloc`; file IO, rendering and the command line
//! live in the `eqsim` crate.

extern crate alloc;

pub mod error;
pub mod formula;
pub mod matcher;
pub mod scoring;
pub mod segmenter;
mod span;

pub use error::{FormulaError, ParseError, PolicyError};
pub use formula::{
    alpha_canonicalize_document, alpha_rename, formulas_equal, fragment_stream, tokenize_formula,
    FormulaSpan, MathSymbol, SymbolKind,
};
pub use matcher::{coverage, greedy_string_tiling, Granularity, MatchTile};
pub use scoring::{
    letter_fragment_demo, score, score_fragment, score_letters, score_method1, score_method2,
    tile_byte_ranges, Counts, Exclusions, FormulaPair, LedgerEntry, Mode, Policy, Side,
    SimilarityReport,
};
pub use segmenter::{
    apply_exclusions, apply_phrase_exclusions, parse_document, parse_document_bytes,
    plain_document, tokenize_words, Document, ExclusionReason, ExclusionSpan, ParseOptions,
    Segment, SegmentKind, TermDictionary, WordToken,
};
pub use span::ByteRange;
