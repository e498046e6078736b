//! Document pairs shipped inside the binary, and the bounds they must meet.

use eqsim_core::{
    apply_phrase_exclusions, parse_document, score, Document, Mode, ParseOptions, Policy,
    TermDictionary,
};
use serde::{Deserialize, Serialize};

pub const STUDENT_WAVE: &str = include_str!("../fixtures/student_wave.txt");
pub const STUDENT_HEAT: &str = include_str!("../fixtures/student_heat.txt");
pub const EXAMPLE1_A: &str = include_str!("../fixtures/example1_a.txt");
pub const EXAMPLE1_B: &str = include_str!("../fixtures/example1_b.txt");
pub const EXAMPLE2_A: &str = include_str!("../fixtures/example2_a.txt");
pub const EXAMPLE2_B: &str = include_str!("../fixtures/example2_b.txt");
pub const EXAMPLE3_A: &str = include_str!("../fixtures/example3_a.txt");
pub const EXAMPLE3_B: &str = include_str!("../fixtures/example3_b.txt");
pub const EXAMPLE4_A: &str = include_str!("../fixtures/example4_a.txt");
pub const EXAMPLE4_B: &str = include_str!("../fixtures/example4_b.txt");
pub const TP1_V1: &str = include_str!("../fixtures/tp1_v1.txt");
pub const TP1_V2: &str = include_str!("../fixtures/tp1_v2.txt");
/// `TP1_V1` with every word translated to Spanish; math untouched.
pub const TP1_V1_ES: &str = include_str!("../fixtures/tp1_v1_es.txt");
pub const TP1_TERMS: &str = include_str!("../fixtures/tp1_terms.txt");
pub const TP2_LEFT: &str = include_str!("../fixtures/tp2_left.txt");
pub const TP2_RIGHT: &str = include_str!("../fixtures/tp2_right.txt");

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub a: &'static str,
    pub b: &'static str,
    pub terms: Option<&'static str>,
}

impl Fixture {
    /// Both documents, parsed and with the fixture's dictionary applied.
    pub fn documents(&self) -> (Document, Document) {
        let dict = self.terms.map(TermDictionary::parse).unwrap_or_default();
        let parse = |text: &str, id: &str| {
            let doc = parse_document(text, &ParseOptions::default())
                .expect("embedded fixture parses")
                .with_source_id(format!("{}/{id}", self.name));
            apply_phrase_exclusions(&doc, &dict)
        };
        (parse(self.a, "a"), parse(self.b, "b"))
    }
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "student",
        a: STUDENT_WAVE,
        b: STUDENT_HEAT,
        terms: None,
    },
    Fixture {
        name: "example1",
        a: EXAMPLE1_A,
        b: EXAMPLE1_B,
        terms: None,
    },
    Fixture {
        name: "example2",
        a: EXAMPLE2_A,
        b: EXAMPLE2_B,
        terms: None,
    },
    Fixture {
        name: "example3",
        a: EXAMPLE3_A,
        b: EXAMPLE3_B,
        terms: None,
    },
    Fixture {
        name: "example4",
        a: EXAMPLE4_A,
        b: EXAMPLE4_B,
        terms: None,
    },
    Fixture {
        name: "tp1",
        a: TP1_V1,
        b: TP1_V2,
        terms: None,
    },
    Fixture {
        name: "tp1+terms",
        a: TP1_V1,
        b: TP1_V2,
        terms: Some(TP1_TERMS),
    },
    Fixture {
        name: "tp2",
        a: TP2_LEFT,
        b: TP2_RIGHT,
        terms: None,
    },
    Fixture {
        name: "self",
        a: TP1_V1,
        b: TP1_V1,
        terms: None,
    },
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeIndices {
    pub mode: Mode,
    pub a_given_b: f64,
    pub b_given_a: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub name: String,
    pub indices: Vec<ModeIndices>,
}

impl FixtureRow {
    pub fn get(&self, mode: Mode) -> Option<&ModeIndices> {
        self.indices.iter().find(|m| m.mode == mode)
    }
}

/// Score one fixture in every mode. `policy.mode` is ignored.
pub fn run(fixture: &Fixture, policy: &Policy) -> Result<FixtureRow, eqsim_core::PolicyError> {
    let (a, b) = fixture.documents();
    let indices = Mode::ALL
        .iter()
        .map(|&mode| {
            let r = score(&a, &b, &policy.with_mode(mode))?;
            Ok(ModeIndices {
                mode,
                a_given_b: r.si_a_given_b,
                b_given_a: r.si_b_given_a,
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(FixtureRow {
        name: fixture.name.to_string(),
        indices,
    })
}

pub fn run_all(policy: &Policy) -> Result<Vec<FixtureRow>, eqsim_core::PolicyError> {
    FIXTURES.iter().map(|f| run(f, policy)).collect()
}

/// Bounds the fixture rows must meet; one message per violation.
pub fn check(rows: &[FixtureRow]) -> Vec<String> {
    let mut failures = Vec::new();
    let find = |name: &str, mode: Mode| {
        rows.iter()
            .find(|r| r.name == name)
            .and_then(|r| r.get(mode))
            .copied()
    };
    let mut expect = |ok: bool, msg: String| {
        if !ok {
            failures.push(msg);
        }
    };

    match find("student", Mode::Fragment) {
        Some(m) => expect(
            m.a_given_b == 87.5,
            format!("student: fragment si(A|B) = {} (want 87.5)", m.a_given_b),
        ),
        None => expect(false, "student: missing".into()),
    }
    for name in ["example1", "example2"] {
        match (find(name, Mode::Fragment), find(name, Mode::Method1)) {
            (Some(f), Some(m)) => {
                expect(
                    f.a_given_b == 100.0 && f.b_given_a == 100.0,
                    format!(
                        "{name}: fragment {} / {} (want 100 / 100)",
                        f.a_given_b, f.b_given_a
                    ),
                );
                expect(
                    m.a_given_b == 0.0 && m.b_given_a == 0.0,
                    format!(
                        "{name}: method1 {} / {} (want 0 / 0)",
                        m.a_given_b, m.b_given_a
                    ),
                );
            }
            _ => expect(false, format!("{name}: missing")),
        }
    }
    match find("example4", Mode::Letters) {
        Some(m) => expect(
            (60.0..=75.0).contains(&m.a_given_b),
            format!("example4: letters si(A|B) = {} (want 60..=75)", m.a_given_b),
        ),
        None => expect(false, "example4: missing".into()),
    }
    for name in ["tp1", "tp2"] {
        match (find(name, Mode::Fragment), find(name, Mode::Method2)) {
            (Some(f), Some(m)) => expect(
                f.a_given_b >= m.a_given_b && f.b_given_a >= m.b_given_a,
                format!(
                    "{name}: fragment {} / {} below method2 {} / {}",
                    f.a_given_b, f.b_given_a, m.a_given_b, m.b_given_a
                ),
            ),
            _ => expect(false, format!("{name}: missing")),
        }
    }
    match rows.iter().find(|r| r.name == "self") {
        Some(r) => {
            for m in &r.indices {
                expect(
                    m.a_given_b == 100.0 && m.b_given_a == 100.0,
                    format!(
                        "self: {} {} / {} (want 100 / 100)",
                        m.mode, m.a_given_b, m.b_given_a
                    ),
                );
            }
        }
        None => expect(false, "self: missing".into()),
    }
    for r in rows {
        for m in &r.indices {
            expect(
                (0.0..=100.0).contains(&m.a_given_b) && (0.0..=100.0).contains(&m.b_given_a),
                format!("{}: {} index out of range", r.name, m.mode),
            );
        }
    }
    failures
}
