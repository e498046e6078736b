//! Command-line interface.
//!
//! Exit codes: 0 success, 1 usage error or unreadable input, 2 parse error,
//! 3 fixture bounds violated.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use eqsim_core::{score, Document, Exclusions, Mode, ParseOptions, Policy, SimilarityReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures;
use crate::load::{list_documents, load_terms, load_with_terms};
use crate::report::{fixture_table, render, render_all, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_REGRESSION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "eqsim",
    version,
    about = "Similarity indices for texts with equations and formulas"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two documents.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Compare one document against every file in a directory.
    Batch {
        a: PathBuf,
        dir: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run the built-in fixtures and check their bounds.
    Fixtures {
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Fragment,
    Method1,
    Method2,
    Letters,
    /// fragment, method1 and method2
    All,
}

#[derive(Debug, Args)]
pub struct Opts {
    /// Scoring mode; repeat or separate with commas for several.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub mode: Vec<ModeArg>,
    /// Minimum word run that counts as a match.
    #[arg(long, default_value_t = Policy::DEFAULT_WORD_MIN_MATCH)]
    pub min_words: usize,
    /// Minimum formula-symbol run in fragment mode.
    #[arg(long, default_value_t = Policy::DEFAULT_SYMBOL_MIN_MATCH)]
    pub min_symbols: usize,
    /// Minimum letter run in letters mode.
    #[arg(long, default_value_t = Policy::DEFAULT_LETTER_MIN_MATCH)]
    pub min_letters: usize,
    /// Words one formula is worth in method2.
    #[arg(long, default_value_t = Policy::DEFAULT_FORMULA_WEIGHT)]
    pub formula_weight: u32,
    /// Ignore formulas with fewer symbols than this.
    #[arg(long, default_value_t = 1)]
    pub min_formula_len: usize,
    /// Compare formulas up to a one-to-one renaming of letters.
    #[arg(long)]
    pub alpha: bool,
    /// Term dictionary (defaults to $EQSIM_TERMS).
    #[arg(long, value_name = "FILE")]
    pub terms: Option<PathBuf>,
    /// Count the bibliography like ordinary text.
    #[arg(long)]
    pub no_bibliography_exclude: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Output file (compare, fixtures) or directory for per-pair JSON (batch).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

impl Opts {
    pub fn modes(&self) -> Vec<Mode> {
        let mut out = Vec::new();
        for m in &self.mode {
            let add: &[Mode] = match m {
                ModeArg::Fragment => &[Mode::Fragment],
                ModeArg::Method1 => &[Mode::Method1],
                ModeArg::Method2 => &[Mode::Method2],
                ModeArg::Letters => &[Mode::Letters],
                ModeArg::All => &[Mode::Fragment, Mode::Method1, Mode::Method2],
            };
            for &mode in add {
                if !out.contains(&mode) {
                    out.push(mode);
                }
            }
        }
        out
    }

    /// The policy these flags describe, validated; `mode` is the first
    /// selected mode.
    pub fn policy(&self) -> Result<Policy> {
        let policy = Policy {
            mode: self.modes().first().copied().unwrap_or(Mode::Method2),
            word_min_match: self.min_words,
            symbol_min_match: self.min_symbols,
            letter_min_match: self.min_letters,
            formula_weight: self.formula_weight,
            alpha: self.alpha,
            min_formula_len: self.min_formula_len,
            exclusions: Exclusions {
                bibliography: !self.no_bibliography_exclude,
                ..Exclusions::ALL
            },
        };
        policy.validate()?;
        Ok(policy)
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Compare { a, b, opts } => compare(a, b, opts, stdout),
        Command::Batch { a, dir, opts } => batch(a, dir, opts, stdout, stderr),
        Command::Fixtures { opts } => run_fixtures(opts, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "eqsim: {e}");
            e.exit_code()
        }
    }
}

fn emit(bytes: &[u8], out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Error::io(path, e)),
        None => stdout
            .write_all(bytes)
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn score_modes(
    a: &Document,
    b: &Document,
    policy: &Policy,
    modes: &[Mode],
) -> Result<Vec<SimilarityReport>> {
    modes
        .iter()
        .map(|&m| score(a, b, &policy.with_mode(m)).map_err(Error::from))
        .collect()
}

fn compare(a: &Path, b: &Path, opts: &Opts, stdout: &mut dyn Write) -> Result<i32> {
    let policy = opts.policy()?;
    let terms = load_terms(opts.terms.as_deref())?;
    let options = ParseOptions::default();
    let da = load_with_terms(a, &options, &terms)?;
    let db = load_with_terms(b, &options, &terms)?;
    let reports = score_modes(&da, &db, &policy, &opts.modes())?;
    let rendered = match reports.as_slice() {
        [one] => render(one, &da, &db, opts.format),
        many => render_all(many, &da, &db, opts.format),
    };
    emit(&rendered.payload, opts.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct BatchRow {
    file: String,
    indices: Vec<fixtures::ModeIndices>,
}

#[derive(Debug, Serialize)]
struct BatchSummary {
    reference: String,
    ranked: Vec<BatchRow>,
    skipped: Vec<Skipped>,
}

#[derive(Debug, Serialize)]
struct Skipped {
    file: String,
    error: String,
}

fn batch(
    a: &Path,
    dir: &Path,
    opts: &Opts,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let policy = opts.policy()?;
    let modes = opts.modes();
    let terms = load_terms(opts.terms.as_deref())?;
    let options = ParseOptions::default();
    let da = load_with_terms(a, &options, &terms)?;
    let files = list_documents(dir)?;

    let results: Vec<(PathBuf, Result<Vec<SimilarityReport>>)> = files
        .par_iter()
        .map(|path| {
            let r = load_with_terms(path, &options, &terms)
                .and_then(|db| score_modes(&da, &db, &policy, &modes));
            (path.clone(), r)
        })
        .collect();

    if let Some(out_dir) = &opts.out {
        fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    }
    let mut ranked = Vec::new();
    let mut skipped = Vec::new();
    for (path, r) in results {
        match r {
            Ok(reports) => {
                if let Some(out_dir) = &opts.out {
                    let name = path
                        .file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    let target = out_dir.join(format!("{name}.json"));
                    let mut json = serde_json::to_vec_pretty(&reports).expect("reports serialize");
                    json.push(b'\n');
                    fs::write(&target, json).map_err(|e| Error::io(&target, e))?;
                }
                ranked.push(BatchRow {
                    file: path.display().to_string(),
                    indices: reports
                        .iter()
                        .map(|r| fixtures::ModeIndices {
                            mode: r.mode,
                            a_given_b: r.si_a_given_b,
                            b_given_a: r.si_b_given_a,
                        })
                        .collect(),
                });
            }
            Err(e) => {
                let _ = writeln!(stderr, "eqsim: skipped {e}");
                skipped.push(Skipped {
                    file: path.display().to_string(),
                    error: e.to_string(),
                });
            }
        }
    }
    // stable: ties keep input order
    let key = |r: &BatchRow| r.indices.first().map_or(0.0, |m| m.a_given_b);
    ranked.sort_by(|x, y| key(y).total_cmp(&key(x)));

    let summary = BatchSummary {
        reference: a.display().to_string(),
        ranked,
        skipped,
    };
    let bytes = match opts.format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(&summary).expect("summary serializes");
            v.push(b'\n');
            v
        }
        _ => batch_table(&summary, &modes).into_bytes(),
    };
    stdout
        .write_all(&bytes)
        .map_err(|e| Error::io("<stdout>", e))?;
    Ok(EXIT_OK)
}

fn batch_table(summary: &BatchSummary, modes: &[Mode]) -> String {
    use std::fmt::Write as _;
    let width = summary
        .ranked
        .iter()
        .map(|r| r.file.len())
        .chain(summary.skipped.iter().map(|s| s.file.len()))
        .max()
        .unwrap_or(0)
        .max(4);
    let mut out = String::new();
    let _ = writeln!(out, "reference: {}", summary.reference);
    let _ = write!(out, "{:<width$}", "file");
    for m in modes {
        let _ = write!(
            out,
            " {:>16} {:>16}",
            format!("{m}(A|B)"),
            format!("{m}(B|A)")
        );
    }
    out.push('\n');
    for r in &summary.ranked {
        let _ = write!(out, "{:<width$}", r.file);
        for m in &r.indices {
            let _ = write!(out, " {:>16.1} {:>16.1}", m.a_given_b, m.b_given_a);
        }
        out.push('\n');
    }
    for s in &summary.skipped {
        let _ = writeln!(out, "{:<width$} skipped: {}", s.file, s.error);
    }
    out
}

fn run_fixtures(opts: &Opts, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let policy = opts.policy()?;
    let rows = fixtures::run_all(&policy)?;
    let bytes = match opts.format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(&rows).expect("rows serialize");
            v.push(b'\n');
            v
        }
        _ => fixture_table(&rows).payload,
    };
    emit(&bytes, opts.out.as_deref(), stdout)?;
    let failures = fixtures::check(&rows);
    for f in &failures {
        let _ = writeln!(stderr, "eqsim: regression: {f}");
    }
    Ok(if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_REGRESSION
    })
}
