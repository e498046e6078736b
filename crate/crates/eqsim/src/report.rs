//! Rendering similarity reports as terminal text, standalone HTML or JSON.

use std::fmt::Write as _;

use eqsim_core::{tile_byte_ranges, ByteRange, Document, Side, SimilarityReport};
use serde::{Deserialize, Serialize};

use crate::fixtures::FixtureRow;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Html,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderedReport {
    pub format: Format,
    pub payload: Vec<u8>,
}

impl RenderedReport {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.payload).expect("rendered reports are UTF-8")
    }
}

const RED: &str = "\x1b[31m";
const GRAY: &str = "\x1b[90m";
const RESET: &str = "\x1b[0m";

/// Whether ANSI colors are allowed (see <https://no-color.org>).
pub fn color_enabled() -> bool {
    std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty())
}

pub fn render(
    report: &SimilarityReport,
    a: &Document,
    b: &Document,
    format: Format,
) -> RenderedReport {
    match format {
        Format::Json => RenderedReport {
            format,
            payload: json_bytes(report),
        },
        _ => render_all(std::slice::from_ref(report), a, b, format),
    }
}

/// Render several reports for the same pair of documents. JSON output is an
/// array with one object per report.
pub fn render_all(
    reports: &[SimilarityReport],
    a: &Document,
    b: &Document,
    format: Format,
) -> RenderedReport {
    let payload = match format {
        Format::Text => render_text(reports, a, b, color_enabled()).into_bytes(),
        Format::Html => render_html(reports, a, b).into_bytes(),
        Format::Json => json_bytes(&reports),
    };
    RenderedReport { format, payload }
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("reports serialize");
    out.push(b'\n');
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mark {
    Tile,
    Formula,
    Excluded,
}

/// Marked ranges for one side of a report.
fn marks(
    report: &SimilarityReport,
    a: &Document,
    b: &Document,
    side: Side,
) -> Vec<(ByteRange, Mark)> {
    let (ta, tb) = tile_byte_ranges(report, a, b);
    let (tiles, doc) = match side {
        Side::A => (ta, a),
        Side::B => (tb, b),
    };
    let mut out: Vec<_> = tiles.into_iter().map(|r| (r, Mark::Tile)).collect();
    for p in &report.matched_formula_pairs {
        let i = match side {
            Side::A => p.a,
            Side::B => p.b,
        };
        out.push((doc.formulas[i].byte_range, Mark::Formula));
    }
    out.extend(
        report
            .excluded_ledger
            .iter()
            .filter(|e| e.side == side)
            .map(|e| (e.byte_range, Mark::Excluded)),
    );
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Flags {
    tile: bool,
    formula: bool,
    excluded: bool,
}

impl Flags {
    fn any(self) -> bool {
        self.tile || self.formula || self.excluded
    }
}

/// Split `text` at every mark boundary; each piece carries the marks that
/// cover it.
fn pieces(text: &str, marks: &[(ByteRange, Mark)]) -> Vec<(ByteRange, Flags)> {
    let mut cuts = vec![0, text.len()];
    for (r, _) in marks {
        cuts.push(r.start);
        cuts.push(r.end);
    }
    cuts.sort_unstable();
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let piece = ByteRange::new(w[0], w[1]);
            let mut f = Flags::default();
            for &(r, m) in marks {
                if r.start <= piece.start && piece.end <= r.end {
                    match m {
                        Mark::Tile => f.tile = true,
                        Mark::Formula => f.formula = true,
                        Mark::Excluded => f.excluded = true,
                    }
                }
            }
            (piece, f)
        })
        .collect()
}

fn pct(x: f64) -> String {
    format!("{x:.1}")
}

fn counts_line(report: &SimilarityReport, side: Side) -> String {
    let c = report.counts(side);
    format!(
        "words {}/{}  formulas {}/{}  symbols {}/{}{}",
        c.words_matched,
        c.words_total,
        c.formulas_matched,
        c.formulas_total,
        c.symbols_matched,
        c.symbols_total,
        if c.zero_denominator {
            "  (nothing to count)"
        } else {
            ""
        }
    )
}

fn render_text(reports: &[SimilarityReport], a: &Document, b: &Document, color: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "A: {}", a.source_id);
    let _ = writeln!(out, "B: {}", b.source_id);
    let _ = writeln!(out, "\n{:<10} {:>8} {:>8}", "mode", "si(A|B)", "si(B|A)");
    for r in reports {
        let _ = writeln!(
            out,
            "{:<10} {:>8} {:>8}",
            r.mode.name(),
            pct(r.si_a_given_b),
            pct(r.si_b_given_a)
        );
    }
    for r in reports {
        let _ = writeln!(out, "\n== {} ==", r.mode.name());
        for (side, doc, label) in [(Side::A, a, "A"), (Side::B, b, "B")] {
            let _ = writeln!(out, "{label}: {}", counts_line(r, side));
            let _ = writeln!(out, "--- {label} ---");
            for (piece, f) in pieces(&doc.raw_text, &marks(r, a, b, side)) {
                let text = &doc.raw_text[piece.as_range()];
                if color && f.excluded {
                    let _ = write!(out, "{GRAY}{text}{RESET}");
                } else if color && (f.tile || f.formula) {
                    let _ = write!(out, "{RED}{text}{RESET}");
                } else {
                    out.push_str(text);
                }
            }
            if !doc.raw_text.ends_with('\n') {
                out.push('\n');
            }
        }
    }
    out
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

const MATCH_STYLE: &str = "background:#ffd0d0;color:#b00000";
const EXCLUDED_STYLE: &str = "color:#999999";

fn html_document(out: &mut String, doc: &Document, marks: &[(ByteRange, Mark)]) {
    out.push_str("<pre style=\"white-space:pre-wrap;font-family:monospace;border:1px solid #ccc;padding:1em\">");
    for (piece, f) in pieces(&doc.raw_text, marks) {
        let text = escape(&doc.raw_text[piece.as_range()]);
        if !f.any() {
            out.push_str(&text);
            continue;
        }
        let mut classes = Vec::new();
        if f.tile {
            classes.push("tile");
        }
        if f.formula {
            classes.push("formula");
        }
        if f.excluded {
            classes.push("excluded");
        }
        let style = if f.excluded {
            EXCLUDED_STYLE
        } else {
            MATCH_STYLE
        };
        let _ = write!(
            out,
            "<span class=\"{}\" data-start=\"{}\" data-end=\"{}\" style=\"{style}\">{text}</span>",
            classes.join(" "),
            piece.start,
            piece.end
        );
    }
    out.push_str("</pre>\n");
}

fn render_html(reports: &[SimilarityReport], a: &Document, b: &Document) -> String {
    let mut out = String::new();
    out.push_str("<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>eqsim report</title>\n</head>\n");
    out.push_str("<body style=\"font-family:sans-serif;margin:2em;max-width:80em\">\n");
    let _ = writeln!(
        out,
        "<h1>Similarity report</h1>\n<p>A: <code>{}</code><br>B: <code>{}</code></p>",
        escape(&a.source_id),
        escape(&b.source_id)
    );
    out.push_str("<table style=\"border-collapse:collapse\" cellpadding=\"4\">\n");
    out.push_str("<tr><th align=\"left\">mode</th><th>si(A|B)</th><th>si(B|A)</th><th align=\"left\">A counts</th><th align=\"left\">B counts</th></tr>\n");
    for r in reports {
        let _ = writeln!(
            out,
            "<tr><td>{}</td><td align=\"right\">{}</td><td align=\"right\">{}</td><td>{}</td><td>{}</td></tr>",
            r.mode.name(),
            pct(r.si_a_given_b),
            pct(r.si_b_given_a),
            counts_line(r, Side::A),
            counts_line(r, Side::B)
        );
    }
    out.push_str("</table>\n");
    for r in reports {
        let _ = writeln!(
            out,
            "<section data-mode=\"{}\">\n<h2>{}</h2>",
            r.mode.name(),
            r.mode.name()
        );
        for (side, doc, label) in [(Side::A, a, "A"), (Side::B, b, "B")] {
            let _ = writeln!(
                out,
                "<div data-side=\"{}\">\n<h3>{label}: {}</h3>",
                label.to_lowercase(),
                escape(&doc.source_id)
            );
            html_document(&mut out, doc, &marks(r, a, b, side));
            out.push_str("</div>\n");
        }
        out.push_str("</section>\n");
    }
    out.push_str("</body>\n</html>\n");
    out
}

/// Aligned summary table, one row per fixture.
pub fn fixture_table(results: &[FixtureRow]) -> RenderedReport {
    let modes: Vec<_> = results
        .first()
        .map(|r| r.indices.iter().map(|m| m.mode).collect())
        .unwrap_or_default();
    let name_width = results
        .iter()
        .map(|r| r.name.len())
        .max()
        .unwrap_or(0)
        .max("fixture".len());
    let mut out = String::new();
    let _ = write!(out, "{:<name_width$}", "fixture");
    for m in &modes {
        let _ = write!(
            out,
            " {:>10} {:>10}",
            format!("{}(A|B)", short(m.name())),
            format!("{}(B|A)", short(m.name()))
        );
    }
    out.push('\n');
    for r in results {
        let _ = write!(out, "{:<name_width$}", r.name);
        for m in &modes {
            match r.get(*m) {
                Some(x) => {
                    let _ = write!(out, " {:>10} {:>10}", pct(x.a_given_b), pct(x.b_given_a));
                }
                None => {
                    let _ = write!(out, " {:>10} {:>10}", "-", "-");
                }
            }
        }
        out.push('\n');
    }
    RenderedReport {
        format: Format::Text,
        payload: out.into_bytes(),
    }
}

fn short(mode: &str) -> &str {
    match mode {
        "fragment" => "frag",
        "method1" => "m1",
        "method2" => "m2",
        "letters" => "ltr",
        other => other,
    }
}
