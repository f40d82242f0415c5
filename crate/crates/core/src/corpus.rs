//! Curve-table parsing and the built-in dataset.
//!
//! Line format, whitespace-separated:
//!
//! ```text
//! <label> <conductor> [a1,a2,a3,a4,a6] [torsion=<k>] [optimal=<0|1>] [class=<id>]
//! ```
//!
//! The bracketed coefficient list has no interior spaces; the key=value
//! fields are optional and may appear in any order; `#` starts a comment
//! line and blank lines are skipped. This is our own format, not a
//! bit-compatible import of any external table layout; labels follow the
//! conventional database naming, and converting a database row amounts to
//! pasting its label, conductor and a-invariants.
//!
//! Claimed metadata is never trusted: on load, the conductor is recomputed
//! via [`WeierstrassCurve::conductor_semistable`] and the torsion order via
//! [`WeierstrassCurve::torsion_order`], and mismatching entries are
//! rejected with a diagnostic. Malformed lines never abort a batch; errors
//! are collected per line.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::curves::{CurveError, WeierstrassCurve};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub label: String,
    pub conductor: u64,
    pub coefficients: [BigInt; 5],
    pub torsion: Option<u64>,
    pub optimal: Option<bool>,
    pub isogeny_class: Option<String>,
}

impl CorpusEntry {
    /// The curve, carrying the entry's label and optimality flag.
    pub fn curve(&self) -> WeierstrassCurve {
        let mut curve = WeierstrassCurve::new(self.coefficients.clone())
            .expect("validated entry is nonsingular")
            .with_label(&self.label);
        if let Some(optimal) = self.optimal {
            curve = curve.with_optimal(optimal);
        }
        curve
    }
}

/// Structural parse failure, with a 1-based column of the offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusError {
    Parse(ParseError),
    /// Claimed metadata disagrees with the recomputed value.
    Validation(String),
    Curve(CurveError),
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::Parse(e) => write!(f, "{}", e),
            CorpusError::Validation(m) => write!(f, "{}", m),
            CorpusError::Curve(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for CorpusError {}

impl From<ParseError> for CorpusError {
    fn from(e: ParseError) -> Self {
        CorpusError::Parse(e)
    }
}

impl From<CurveError> for CorpusError {
    fn from(e: CurveError) -> Self {
        CorpusError::Curve(e)
    }
}

fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Parse one line. `Ok(None)` for comments and blank lines. Structural
/// only; cross-validation happens in [`parse_corpus`].
pub fn parse_line(line: &str) -> Result<Option<CorpusEntry>, ParseError> {
    let trimmed = line.trim_start();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let tokens = tokens_with_columns(line);
    if tokens.len() < 3 {
        return Err(ParseError {
            column: 1,
            message: format!(
                "expected `<label> <conductor> [a1,a2,a3,a4,a6]`, found {} field(s)",
                tokens.len()
            ),
        });
    }
    let label = tokens[0].1.to_string();
    let (cond_col, cond_tok) = tokens[1];
    let conductor: u64 = cond_tok.parse().map_err(|_| ParseError {
        column: cond_col,
        message: format!("conductor `{}` is not a positive integer", cond_tok),
    })?;
    let (co_col, co_tok) = tokens[2];
    let coefficients = parse_coefficients(co_tok, co_col)?;

    let mut entry = CorpusEntry {
        label,
        conductor,
        coefficients,
        torsion: None,
        optimal: None,
        isogeny_class: None,
    };
    for &(col, tok) in &tokens[3..] {
        let (key, value) = tok.split_once('=').ok_or_else(|| ParseError {
            column: col,
            message: format!("expected key=value, found `{}`", tok),
        })?;
        match key {
            "torsion" => {
                entry.torsion = Some(value.parse().map_err(|_| ParseError {
                    column: col,
                    message: format!("torsion `{}` is not a positive integer", value),
                })?)
            }
            "optimal" => {
                entry.optimal = Some(match value {
                    "0" => false,
                    "1" => true,
                    _ => {
                        return Err(ParseError {
                            column: col,
                            message: format!("optimal must be 0 or 1, found `{}`", value),
                        })
                    }
                })
            }
            "class" => entry.isogeny_class = Some(value.to_string()),
            _ => {
                return Err(ParseError {
                    column: col,
                    message: format!("unknown field `{}`", key),
                })
            }
        }
    }
    Ok(Some(entry))
}

/// Parse a bare bracketed coefficient list like `[0,-1,1,-10,-20]`, as the
/// CLI's `--curve` flag accepts.
pub fn parse_coefficient_list(token: &str) -> Result<[BigInt; 5], ParseError> {
    parse_coefficients(token.trim(), 1)
}

fn parse_coefficients(token: &str, column: usize) -> Result<[BigInt; 5], ParseError> {
    let inner = token
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| ParseError {
            column,
            message: format!(
                "coefficients `{}` must be bracketed like [0,-1,1,-10,-20]",
                token
            ),
        })?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 5 {
        return Err(ParseError {
            column,
            message: format!(
                "expected 5 coefficients a1,a2,a3,a4,a6, found {}",
                parts.len()
            ),
        });
    }
    let mut out: [BigInt; 5] = core::array::from_fn(|_| BigInt::from(0));
    for (i, part) in parts.iter().enumerate() {
        out[i] = part.parse().map_err(|_| ParseError {
            column,
            message: format!("coefficient `{}` is not an integer", part),
        })?;
    }
    Ok(out)
}

/// Render an entry in the line format; `parse_line` inverts this.
pub fn render_line(entry: &CorpusEntry) -> String {
    let mut line = format!(
        "{} {} [{},{},{},{},{}]",
        entry.label,
        entry.conductor,
        entry.coefficients[0],
        entry.coefficients[1],
        entry.coefficients[2],
        entry.coefficients[3],
        entry.coefficients[4],
    );
    if let Some(t) = entry.torsion {
        line.push_str(&format!(" torsion={}", t));
    }
    if let Some(o) = entry.optimal {
        line.push_str(&format!(" optimal={}", if o { 1 } else { 0 }));
    }
    if let Some(c) = &entry.isogeny_class {
        line.push_str(&format!(" class={}", c));
    }
    line
}

/// Re-derive the claimed metadata for one entry.
pub fn validate_entry(entry: &CorpusEntry) -> Result<(), CorpusError> {
    let curve = WeierstrassCurve::new(entry.coefficients.clone())?;
    let conductor = curve.conductor_semistable()?;
    if conductor != entry.conductor {
        return Err(CorpusError::Validation(format!(
            "{}: claimed conductor {} but the model has conductor {}",
            entry.label, entry.conductor, conductor
        )));
    }
    if let Some(claimed) = entry.torsion {
        let torsion = curve.torsion_order()?;
        if torsion.order != claimed {
            return Err(CorpusError::Validation(format!(
                "{}: claimed torsion order {} but computed {}",
                entry.label, claimed, torsion.order
            )));
        }
    }
    Ok(())
}

/// Result of loading a corpus text: validated entries plus per-line errors.
#[derive(Debug, Clone, Default)]
pub struct CorpusLoad {
    pub entries: Vec<CorpusEntry>,
    /// (1-based line number, what went wrong)
    pub errors: Vec<(usize, CorpusError)>,
}

/// Parse and eagerly cross-validate a whole table. Bad lines are collected,
/// never fatal to the batch.
pub fn parse_corpus(text: &str) -> CorpusLoad {
    let mut load = CorpusLoad::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        match parse_line(line) {
            Ok(None) => {}
            Ok(Some(entry)) => match validate_entry(&entry) {
                Ok(()) => load.entries.push(entry),
                Err(e) => load.errors.push((line_no, e)),
            },
            Err(e) => load.errors.push((line_no, e.into())),
        }
    }
    load
}

/// Built-in table: semistable minimal models with recomputable metadata.
/// Conductors 11..91, torsion orders 1..8, the 7-torsion curve 26b1, the
/// even-r example 14a1, torsion-free controls, and five isogeny classes
/// with more than one member for the a_l-invariance checks.
pub const BUILTIN_TABLE: &str = "\
# label conductor [a1,a2,a3,a4,a6] torsion optimal class
11a1 11 [0,-1,1,-10,-20] torsion=5 optimal=1 class=11a
11a2 11 [0,-1,1,-7820,-263580] torsion=1 optimal=0 class=11a
11a3 11 [0,-1,1,0,0] torsion=5 optimal=0 class=11a
14a1 14 [1,0,1,4,-6] torsion=6 optimal=1 class=14a
14a4 14 [1,0,1,-1,0] torsion=6 optimal=0 class=14a
15a1 15 [1,1,1,-10,-10] torsion=8 optimal=1 class=15a
15a8 15 [1,1,1,0,0] torsion=4 optimal=0 class=15a
17a1 17 [1,-1,1,-1,-14] torsion=4 optimal=1 class=17a
17a4 17 [1,-1,1,-1,0] torsion=4 optimal=0 class=17a
19a1 19 [0,1,1,-9,-15] torsion=3 optimal=1 class=19a
19a3 19 [0,1,1,1,0] torsion=3 optimal=0 class=19a
26a1 26 [1,0,1,-5,-8] torsion=3 optimal=1 class=26a
26b1 26 [1,-1,1,-3,3] torsion=7 optimal=1 class=26b
30a1 30 [1,0,1,1,2] torsion=6 optimal=1 class=30a
37a1 37 [0,0,1,-1,0] torsion=1 optimal=1 class=37a
37b1 37 [0,1,1,-23,-50] torsion=3 optimal=1 class=37b
38b1 38 [1,1,1,0,1] torsion=5 optimal=1 class=38b
43a1 43 [0,1,1,0,0] torsion=1 optimal=1 class=43a
53a1 53 [1,-1,1,0,0] torsion=1 optimal=1 class=53a
61a1 61 [1,0,0,-2,1] torsion=1 optimal=1 class=61a
65a1 65 [1,0,0,-1,0] torsion=2 optimal=1 class=65a
91a1 91 [0,0,1,1,0] torsion=1 optimal=1 class=91a
91b1 91 [0,1,1,-7,5] torsion=3 optimal=1 class=91b
";

/// The built-in dataset, fully re-validated on load.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    let load = parse_corpus(BUILTIN_TABLE);
    assert!(
        load.errors.is_empty(),
        "built-in corpus must cross-validate: {:?}",
        load.errors
    );
    load.entries
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_well_formed_line() {
        let entry = parse_line("11a1 11 [0,-1,1,-10,-20] torsion=5 optimal=1")
            .unwrap()
            .unwrap();
        assert_eq!(entry.label, "11a1");
        assert_eq!(entry.conductor, 11);
        assert_eq!(entry.coefficients[3], BigInt::from(-10));
        assert_eq!(entry.torsion, Some(5));
        assert_eq!(entry.optimal, Some(true));
        assert_eq!(entry.isogeny_class, None);
    }

    #[test]
    fn comments_and_blanks_skipped() {
        assert_eq!(parse_line("# comment").unwrap(), None);
        assert_eq!(parse_line("   ").unwrap(), None);
        assert_eq!(parse_line("").unwrap(), None);
    }

    #[test]
    fn arity_and_syntax_errors() {
        let err = parse_line("x 10 [0,0,0,0]").unwrap_err();
        assert!(err.message.contains("5 coefficients"), "{}", err);
        assert_eq!(err.column, 6);

        let err = parse_line("x 10 0,0,0,0,1").unwrap_err();
        assert!(err.message.contains("bracketed"), "{}", err);

        let err = parse_line("x ten [0,0,0,0,1]").unwrap_err();
        assert!(err.message.contains("conductor"), "{}", err);
        assert_eq!(err.column, 3);

        let err = parse_line("x 10 [0,0,0,0,1] torsion=two").unwrap_err();
        assert!(err.message.contains("torsion"), "{}", err);

        let err = parse_line("x 10 [0,0,0,0,1] shape=flat").unwrap_err();
        assert!(err.message.contains("unknown field"), "{}", err);
    }

    #[test]
    fn round_trip_builtin() {
        for entry in builtin_corpus() {
            let line = render_line(&entry);
            let back = parse_line(&line).unwrap().unwrap();
            assert_eq!(back, entry, "round trip failed for {}", line);
        }
    }

    #[test]
    fn batch_collects_errors_without_aborting() {
        let text = "\
11a1 11 [0,-1,1,-10,-20] torsion=5
broken line without coefficients
11a3 11 [0,-1,1,0,0] torsion=5
# fine
26b1 26 [1,-1,1,-3,3] torsion=6
";
        let load = parse_corpus(text);
        assert_eq!(load.entries.len(), 2);
        assert_eq!(load.errors.len(), 2);
        assert_eq!(load.errors[0].0, 2);
        // 26b1 has torsion 7, not 6: validation, not parse, failure
        assert_eq!(load.errors[1].0, 5);
        assert!(matches!(load.errors[1].1, CorpusError::Validation(_)));
    }

    #[test]
    fn claimed_conductor_must_match() {
        let entry = parse_line("bogus 15 [0,-1,1,-10,-20]").unwrap().unwrap();
        let err = validate_entry(&entry).unwrap_err();
        assert!(matches!(err, CorpusError::Validation(_)));
        assert!(format!("{}", err).contains("conductor 15"));
    }

    #[test]
    fn builtin_is_validated_and_rich_enough() {
        let corpus = builtin_corpus();
        assert!(corpus.len() >= 15);
        let find = |label: &str| corpus.iter().find(|e| e.label == label).unwrap();
        assert_eq!(find("11a1").torsion, Some(5));
        assert_eq!(find("26b1").torsion, Some(7));
        assert_eq!(find("14a1").torsion, Some(6));
        // torsion-free control and an isogeny class with several members
        assert!(corpus.iter().any(|e| e.torsion == Some(1)));
        let class_11a = corpus
            .iter()
            .filter(|e| e.isogeny_class.as_deref() == Some("11a"))
            .count();
        assert!(class_11a >= 2);
    }

    #[test]
    fn paper_remark_sign_is_reproduced() {
        // 14a1 carries rational 2-torsion and w_2 = +1
        let corpus = builtin_corpus();
        let entry = corpus.iter().find(|e| e.label == "14a1").unwrap();
        let curve = entry.curve();
        assert_eq!(curve.reduction_data(2).w_p, Some(1));
        assert_eq!(entry.torsion, Some(6));
    }
}
