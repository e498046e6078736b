//! Formula tokenization and the three symbol sequences derived from it.
//!
//! A formula source such as `u_t = au_{xx} + bu\ln u` is split into single
//! symbols: letters, digits, operators, the structural characters
//! `_ ^ { } ( ) [ ] |`, and TeX control words. From that canonical sequence
//! we derive
//!
//! * the fragment stream, which drops every structural symbol and so cannot
//!   tell `bx^{-1/2}` from `bx - 1/2`, and
//! * the alpha-canonical sequence, where letters are renamed `v1, v2, ...`
//!   in order of first occurrence across the whole document.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::FormulaError;
use crate::span::ByteRange;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(
    feature = "serde",
    derive(Serialize, Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum SymbolKind {
    Identifier,
    Digit,
    Operator,
    Structural,
    ControlSequence,
}

/// One symbol of a formula. Control sequences store their name without the
/// leading backslash.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct MathSymbol {
    pub kind: SymbolKind,
    pub text: String,
}

impl MathSymbol {
    pub fn new(kind: SymbolKind, text: impl Into<String>) -> Self {
        MathSymbol {
            kind,
            text: text.into(),
        }
    }

    pub fn ident(text: impl Into<String>) -> Self {
        Self::new(SymbolKind::Identifier, text)
    }

    pub fn digit(text: impl Into<String>) -> Self {
        Self::new(SymbolKind::Digit, text)
    }

    pub fn op(text: impl Into<String>) -> Self {
        Self::new(SymbolKind::Operator, text)
    }

    pub fn structural(text: impl Into<String>) -> Self {
        Self::new(SymbolKind::Structural, text)
    }

    pub fn control(name: impl Into<String>) -> Self {
        Self::new(SymbolKind::ControlSequence, name)
    }

    pub fn is_structural(&self) -> bool {
        self.kind == SymbolKind::Structural
    }
}

impl fmt::Display for MathSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == SymbolKind::ControlSequence {
            f.write_str("\\")?;
        }
        f.write_str(&self.text)
    }
}

const STRUCTURAL: &[char] = &['_', '^', '{', '}', '(', ')', '[', ']', '|'];

// Spacing commands carry no mathematical content.
const SPACING_WORDS: &[&str] = &[
    "quad",
    "qquad",
    "enspace",
    "thinspace",
    "medspace",
    "thickspace",
];
const SPACING_SYMBOLS: &[char] = &[',', ';', ':', '!', ' ', '>'];

// Commands whose braced argument is a name or text, not math.
const NAMED_ARGUMENT: &[&str] = &["begin", "end", "text", "mathrm", "operatorname", "mbox"];

const GREEK: &[(&str, char)] = &[
    ("alpha", 'α'),
    ("beta", 'β'),
    ("gamma", 'γ'),
    ("delta", 'δ'),
    ("epsilon", 'ϵ'),
    ("varepsilon", 'ε'),
    ("zeta", 'ζ'),
    ("eta", 'η'),
    ("theta", 'θ'),
    ("vartheta", 'ϑ'),
    ("iota", 'ι'),
    ("kappa", 'κ'),
    ("lambda", 'λ'),
    ("mu", 'μ'),
    ("nu", 'ν'),
    ("xi", 'ξ'),
    ("pi", 'π'),
    ("varpi", 'ϖ'),
    ("rho", 'ρ'),
    ("varrho", 'ϱ'),
    ("sigma", 'σ'),
    ("varsigma", 'ς'),
    ("tau", 'τ'),
    ("upsilon", 'υ'),
    ("phi", 'ϕ'),
    ("varphi", 'φ'),
    ("chi", 'χ'),
    ("psi", 'ψ'),
    ("omega", 'ω'),
    ("Gamma", 'Γ'),
    ("Delta", 'Δ'),
    ("Theta", 'Θ'),
    ("Lambda", 'Λ'),
    ("Xi", 'Ξ'),
    ("Pi", 'Π'),
    ("Sigma", 'Σ'),
    ("Upsilon", 'Υ'),
    ("Phi", 'Φ'),
    ("Psi", 'Ψ'),
    ("Omega", 'Ω'),
];

fn greek_letter(name: &str) -> Option<char> {
    GREEK.iter().find(|(n, _)| *n == name).map(|&(_, c)| c)
}

/// Tokenize a formula, keeping the byte range of every symbol relative to
/// `raw`.
pub(crate) fn tokenize_spanned(raw: &str) -> Vec<(MathSymbol, ByteRange)> {
    let mut out = Vec::new();
    let mut iter = raw.char_indices().peekable();
    while let Some((start, c)) = iter.next() {
        if c.is_whitespace() {
            continue;
        }
        if c == '\\' {
            match iter.peek().copied() {
                Some((_, n)) if n.is_ascii_alphabetic() => {
                    let name_start = start + 1;
                    let mut end = name_start;
                    while let Some(&(i, n)) = iter.peek() {
                        if !n.is_ascii_alphabetic() {
                            break;
                        }
                        end = i + n.len_utf8();
                        iter.next();
                    }
                    let name = &raw[name_start..end];
                    if SPACING_WORDS.contains(&name) {
                        continue;
                    }
                    if NAMED_ARGUMENT.contains(&name) && raw[end..].starts_with('{') {
                        if let Some(close) = raw[end..].find('}') {
                            let arg_end = end + close + 1;
                            while iter.peek().is_some_and(|&(i, _)| i < arg_end) {
                                iter.next();
                            }
                            let sym = MathSymbol::control(&raw[name_start..arg_end]);
                            out.push((sym, ByteRange::new(start, arg_end)));
                            continue;
                        }
                    }
                    let range = ByteRange::new(start, end);
                    let sym = match greek_letter(name) {
                        Some(g) => MathSymbol::ident(g.to_string()),
                        None => MathSymbol::control(name),
                    };
                    out.push((sym, range));
                }
                Some((_, n)) if n.is_whitespace() || SPACING_SYMBOLS.contains(&n) => {
                    iter.next();
                }
                Some((i, n)) => {
                    iter.next();
                    let end = i + n.len_utf8();
                    out.push((
                        MathSymbol::control(n.to_string()),
                        ByteRange::new(start, end),
                    ));
                }
                None => out.push((MathSymbol::op("\\"), ByteRange::new(start, start + 1))),
            }
            continue;
        }
        let range = ByteRange::new(start, start + c.len_utf8());
        let text = c.to_string();
        let sym = if c.is_alphabetic() {
            MathSymbol::ident(text)
        } else if c.is_numeric() {
            MathSymbol::digit(text)
        } else if STRUCTURAL.contains(&c) {
            MathSymbol::structural(text)
        } else {
            MathSymbol::op(text)
        };
        out.push((sym, range));
    }
    out
}

/// Split a formula source (delimiters already stripped) into symbols.
///
/// Whitespace and TeX spacing commands are dropped, `\name` becomes one
/// control-sequence symbol (Greek letter names become identifiers), and every
/// other character is its own symbol.
pub fn tokenize_formula(raw: &str) -> Result<Vec<MathSymbol>, FormulaError> {
    let symbols: Vec<MathSymbol> = tokenize_spanned(raw).into_iter().map(|(s, _)| s).collect();
    if symbols.is_empty() {
        return Err(FormulaError::EmptyFormula);
    }
    Ok(symbols)
}

/// The canonical sequence with every structural symbol removed.
pub fn fragment_stream(canonical: &[MathSymbol]) -> Vec<MathSymbol> {
    canonical
        .iter()
        .filter(|s| !s.is_structural())
        .cloned()
        .collect()
}

/// One formula occurrence in a document.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FormulaSpan {
    /// Formula source without math delimiters, labels or trailing
    /// sentence punctuation.
    pub raw: String,
    /// Where `raw` sits in the document.
    pub byte_range: ByteRange,
    pub canonical: Vec<MathSymbol>,
    /// Absolute byte range of each canonical symbol.
    pub symbol_ranges: Vec<ByteRange>,
    pub fragments: Vec<MathSymbol>,
    pub fragment_ranges: Vec<ByteRange>,
    /// Filled by [`alpha_canonicalize_document`]; equals `canonical` until then.
    pub alpha_canonical: Vec<MathSymbol>,
}

impl FormulaSpan {
    /// Tokenize `raw`, which starts at byte `offset` of its document.
    pub fn new(raw: &str, offset: usize) -> Result<Self, FormulaError> {
        let spanned = tokenize_spanned(raw);
        if spanned.is_empty() {
            return Err(FormulaError::EmptyFormula);
        }
        let (canonical, symbol_ranges): (Vec<_>, Vec<_>) = spanned
            .into_iter()
            .map(|(s, r)| (s, r.shifted(offset)))
            .unzip();
        let (fragments, fragment_ranges) = canonical
            .iter()
            .zip(&symbol_ranges)
            .filter(|(s, _)| !s.is_structural())
            .map(|(s, r)| (s.clone(), *r))
            .unzip();
        Ok(FormulaSpan {
            raw: raw.to_string(),
            byte_range: ByteRange::new(offset, offset + raw.len()),
            alpha_canonical: canonical.clone(),
            canonical,
            symbol_ranges,
            fragments,
            fragment_ranges,
        })
    }

    /// Canonical or alpha-canonical symbols.
    pub fn symbols(&self, alpha: bool) -> &[MathSymbol] {
        if alpha {
            &self.alpha_canonical
        } else {
            &self.canonical
        }
    }

    /// Fragment stream of [`symbols`](Self::symbols), paired with byte ranges.
    pub fn fragment_symbols(&self, alpha: bool) -> impl Iterator<Item = (&MathSymbol, ByteRange)> {
        self.symbols(alpha)
            .iter()
            .zip(self.symbol_ranges.iter().copied())
            .filter(|(s, _)| !s.is_structural())
    }
}

/// Rename identifiers across several symbol sequences with one shared
/// first-occurrence map: the first distinct identifier becomes `v1`, the
/// next `v2`, and so on. Other symbol kinds pass through.
pub fn alpha_rename<'a, I>(sequences: I) -> Vec<Vec<MathSymbol>>
where
    I: IntoIterator<Item = &'a [MathSymbol]>,
{
    let mut names: BTreeMap<&'a str, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for seq in sequences {
        let renamed = seq
            .iter()
            .map(|s| {
                if s.kind != SymbolKind::Identifier {
                    return s.clone();
                }
                let next = names.len() + 1;
                let n = *names.entry(s.text.as_str()).or_insert(next);
                MathSymbol::ident(format!("v{n}"))
            })
            .collect();
        out.push(renamed);
    }
    out
}

/// Fill `alpha_canonical` for every formula of one document, in reading
/// order, using a single document-wide renaming.
pub fn alpha_canonicalize_document<'a, I>(formulas: I)
where
    I: IntoIterator<Item = &'a mut FormulaSpan>,
{
    let mut formulas: Vec<&mut FormulaSpan> = formulas.into_iter().collect();
    let renamed = alpha_rename(formulas.iter().map(|f| f.canonical.as_slice()));
    for (f, alpha) in formulas.iter_mut().zip(renamed) {
        f.alpha_canonical = alpha;
    }
}

/// Whole-formula equality: every letter, digit and symbol must agree.
pub fn formulas_equal(a: &FormulaSpan, b: &FormulaSpan, alpha: bool) -> bool {
    a.symbols(alpha) == b.symbols(alpha)
}
