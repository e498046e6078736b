//! A second, deliberately naive implementation of the scoring pipeline, used
//! to cross-check the library on the fixtures. It only understands what the
//! fixtures use: `$…$` and `$$…$$` math, `\quad (label)` display labels and
//! a dictionary of phrases and `$…$` formulas.

#![allow(dead_code)]

/// Greedy tiling by exhaustive search: every round scans all (i, j) pairs,
/// extends each match as far as it goes and keeps the first longest one.
pub fn naive_tiles<T: PartialEq>(a: &[T], b: &[T], min_match: usize) -> Vec<(usize, usize, usize)> {
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut tiles = Vec::new();
    loop {
        let mut best = (0, 0, 0);
        for i in 0..a.len() {
            for j in 0..b.len() {
                let mut k = 0;
                while i + k < a.len()
                    && j + k < b.len()
                    && !used_a[i + k]
                    && !used_b[j + k]
                    && a[i + k] == b[j + k]
                {
                    k += 1;
                }
                if k > best.2 {
                    best = (i, j, k);
                }
            }
        }
        let (i, j, k) = best;
        if k == 0 || k < min_match.max(1) {
            return tiles;
        }
        for t in 0..k {
            used_a[i + t] = true;
            used_b[j + t] = true;
        }
        tiles.push(best);
    }
}

pub fn naive_covered<T: PartialEq>(a: &[T], b: &[T], min_match: usize) -> usize {
    naive_tiles(a, b, min_match).iter().map(|t| t.2).sum()
}

/// Coverage flags for both streams.
fn flags<T: PartialEq>(a: &[T], b: &[T], min_match: usize) -> (Vec<bool>, Vec<bool>) {
    let min_match = min_match.min(a.len()).min(b.len()).max(1);
    let mut fa = vec![false; a.len()];
    let mut fb = vec![false; b.len()];
    for (i, j, k) in naive_tiles(a, b, min_match) {
        fa[i..i + k].iter_mut().for_each(|x| *x = true);
        fb[j..j + k].iter_mut().for_each(|x| *x = true);
    }
    (fa, fb)
}

/// A formula symbol as plain text; structural symbols are flagged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sym {
    pub text: String,
    pub structural: bool,
}

pub fn symbols(src: &str) -> Vec<Sym> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let push = |out: &mut Vec<Sym>, text: String| {
        let structural = matches!(
            text.as_str(),
            "_" | "^" | "{" | "}" | "(" | ")" | "[" | "]" | "|"
        );
        out.push(Sym { text, structural });
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '\\' {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_alphabetic() {
                j += 1;
            }
            if j == i + 1 {
                // control symbol
                let n = chars.get(i + 1).copied();
                match n {
                    Some(n) if n.is_whitespace() || ",;:!>".contains(n) => {}
                    Some(n) => push(&mut out, format!("\\{n}")),
                    None => push(&mut out, "\\".into()),
                }
                i += 2;
                continue;
            }
            let name: String = chars[i + 1..j].iter().collect();
            if name == "quad" || name == "qquad" {
                i = j;
                continue;
            }
            if (name == "begin" || name == "end" || name == "text") && chars.get(j) == Some(&'{') {
                let close = (j..chars.len()).find(|&k| chars[k] == '}').unwrap();
                push(&mut out, chars[i..=close].iter().collect());
                i = close + 1;
                continue;
            }
            push(&mut out, format!("\\{name}"));
            i = j;
        } else {
            push(&mut out, c.to_string());
            i += 1;
        }
    }
    out
}

fn normalize(word: &str) -> String {
    word.trim_matches(|c: char| !c.is_alphanumeric())
        .chars()
        .filter(|&c| c != '$' && c != '\\')
        .flat_map(char::to_lowercase)
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct OracleDoc {
    pub words: Vec<String>,
    pub formulas: Vec<Vec<Sym>>,
    pub excluded_words: Vec<bool>,
    pub excluded_formulas: Vec<bool>,
}

impl OracleDoc {
    pub fn new(text: &str) -> Self {
        let mut doc = OracleDoc::default();
        let mut rest = text;
        while let Some(open) = rest.find('$') {
            doc.add_words(&rest[..open]);
            let display = rest[open..].starts_with("$$");
            let delim = if display { "$$" } else { "$" };
            let body_start = open + delim.len();
            let close = body_start + rest[body_start..].find(delim).expect("closed math");
            let body = &rest[body_start..close];
            if display {
                doc.add_display(body);
            } else {
                doc.formulas.push(symbols(body));
            }
            rest = &rest[close + delim.len()..];
        }
        doc.add_words(rest);
        doc.excluded_words = vec![false; doc.words.len()];
        doc.excluded_formulas = vec![false; doc.formulas.len()];
        doc
    }

    fn add_words(&mut self, text: &str) {
        self.words.extend(
            text.split_whitespace()
                .map(normalize)
                .filter(|w| !w.is_empty()),
        );
    }

    fn add_display(&mut self, body: &str) {
        let body = body.trim();
        let mut label = None;
        let mut formula = body;
        if let Some(q) = body.rfind("\\quad") {
            let tail = body[q + 5..].trim();
            if tail.starts_with('(') && tail.ends_with(')') {
                let inner = &tail[1..tail.len() - 1];
                let inner = inner
                    .strip_prefix("\\text{")
                    .and_then(|s| s.strip_suffix('}'))
                    .unwrap_or(inner);
                label = Some(inner.to_lowercase());
                formula = &body[..q];
            }
        }
        let formula = formula.trim().trim_end_matches([',', '.', ';']).trim_end();
        self.formulas.push(symbols(formula));
        self.words.extend(label);
    }

    /// Mark dictionary phrases (word lists) and formulas as excluded.
    pub fn exclude(&mut self, phrases: &[&str], formulas: &[&str]) {
        for p in phrases {
            let p: Vec<String> = p.split_whitespace().map(normalize).collect();
            if p.is_empty() || p.len() > self.words.len() {
                continue;
            }
            for i in 0..=self.words.len() - p.len() {
                if self.words[i..i + p.len()] == p[..] {
                    self.excluded_words[i..i + p.len()]
                        .iter_mut()
                        .for_each(|x| *x = true);
                }
            }
        }
        for f in formulas {
            let f = symbols(f);
            for (i, g) in self.formulas.iter().enumerate() {
                if *g == f {
                    self.excluded_formulas[i] = true;
                }
            }
        }
    }

    fn fragments(&self) -> (Vec<String>, Vec<bool>) {
        let mut toks = Vec::new();
        let mut excl = Vec::new();
        for (f, &x) in self.formulas.iter().zip(&self.excluded_formulas) {
            for s in f.iter().filter(|s| !s.structural) {
                toks.push(s.text.clone());
                excl.push(x);
            }
        }
        (toks, excl)
    }

    fn letters(&self) -> (Vec<char>, Vec<bool>) {
        let mut toks = Vec::new();
        let mut excl = Vec::new();
        for (w, &x) in self.words.iter().zip(&self.excluded_words) {
            for c in w.chars().filter(|c| c.is_alphanumeric()) {
                toks.push(c);
                excl.push(x);
            }
        }
        (toks, excl)
    }
}

/// (matched, total) for one side.
pub type Ratio = (u64, u64);

fn tally(covered: &[bool], excluded: &[bool]) -> Ratio {
    let mut m = 0;
    let mut t = 0;
    for (&c, &x) in covered.iter().zip(excluded) {
        if !x {
            t += 1;
            m += u64::from(c);
        }
    }
    (m, t)
}

fn add(x: Ratio, y: Ratio) -> Ratio {
    (x.0 + y.0, x.1 + y.1)
}

pub struct OracleScores {
    pub words: (Ratio, Ratio),
    pub fragments: (Ratio, Ratio),
    pub letters: (Ratio, Ratio),
    pub formulas: (Ratio, Ratio),
}

impl OracleScores {
    pub fn fragment(&self) -> (Ratio, Ratio) {
        (
            add(self.words.0, self.fragments.0),
            add(self.words.1, self.fragments.1),
        )
    }

    pub fn method1(&self) -> (Ratio, Ratio) {
        self.formulas
    }

    pub fn method2(&self, w: u64) -> (Ratio, Ratio) {
        let side = |wd: Ratio, f: Ratio| (wd.0 + w * f.0, wd.1 + w * f.1);
        (
            side(self.words.0, self.formulas.0),
            side(self.words.1, self.formulas.1),
        )
    }
}

/// Scores with word min match 8, symbol min match 1, letter min match 3.
pub fn oracle_scores(a: &OracleDoc, b: &OracleDoc) -> OracleScores {
    let (wa, wb) = flags(&a.words, &b.words, 8);
    let words = (tally(&wa, &a.excluded_words), tally(&wb, &b.excluded_words));

    let ((fa, xa), (fb, xb)) = (a.fragments(), b.fragments());
    let (ca, cb) = flags(&fa, &fb, 1);
    let fragments = (tally(&ca, &xa), tally(&cb, &xb));

    let ((la, ya), (lb, yb)) = (a.letters(), b.letters());
    let (ca, cb) = flags(&la, &lb, 3);
    let letters = (tally(&ca, &ya), tally(&cb, &yb));

    let side = |x: &OracleDoc, y: &OracleDoc| -> Ratio {
        let mut m = 0;
        let mut t = 0;
        for (f, &ex) in x.formulas.iter().zip(&x.excluded_formulas) {
            if ex {
                continue;
            }
            t += 1;
            let hit = y
                .formulas
                .iter()
                .zip(&y.excluded_formulas)
                .any(|(g, &gx)| !gx && g == f);
            m += u64::from(hit);
        }
        (m, t)
    };
    let formulas = (side(a, b), side(b, a));
    OracleScores {
        words,
        fragments,
        letters,
        formulas,
    }
}
