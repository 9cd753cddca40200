//! OEIS sequences covered by this crate and b-file output.
//!
//! A b-file is ASCII text, one `n value` pair per line, ascending `n`, with
//! a single trailing newline after the last line.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{CountSource, EnumerationError};
use crate::formulas::{count_123_231, FormulaError};
use crate::pattern::PatternSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("unknown sequence {0}")]
    UnknownSequence(String),
    #[error("offset must be at least 1 and at most n_max (offset {offset}, n_max {n_max})")]
    BadRange { offset: u64, n_max: u64 },
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sequence {
    /// `C_n(123,231)`, closed form.
    A309563,
    /// `C_n(123)`.
    A309504,
    /// `C_n(132) = C_n(213)`.
    A309505,
    /// `C_n(231) = C_n(312)`.
    A309506,
    /// `C_n(321)`.
    A309508,
}

impl Sequence {
    pub const ALL: [Sequence; 5] = [
        Sequence::A309563,
        Sequence::A309504,
        Sequence::A309505,
        Sequence::A309506,
        Sequence::A309508,
    ];

    /// The avoided patterns.
    pub fn patterns(self) -> PatternSet {
        let items: &[&str] = match self {
            Sequence::A309563 => &["123", "231"],
            Sequence::A309504 => &["123"],
            Sequence::A309505 => &["132"],
            Sequence::A309506 => &["231"],
            Sequence::A309508 => &["321"],
        };
        PatternSet::parse(items).expect("valid built-in patterns")
    }

    pub fn is_formula_backed(self) -> bool {
        self == Sequence::A309563
    }

    /// The n-th term; oracle-backed terms respect the oracle cap.
    pub fn term(self, n: u64, source: &dyn CountSource) -> Result<u64, ExportError> {
        if self.is_formula_backed() {
            Ok(count_123_231(n)?)
        } else {
            Ok(source.cyclic_count(n as usize, &self.patterns())?)
        }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Sequence {
    type Err = ExportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Sequence::ALL
            .into_iter()
            .find(|seq| seq.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ExportError::UnknownSequence(s.to_string()))
    }
}

/// Renders `(n, value)` pairs in b-file format.
pub fn render_bfile(terms: &[(u64, u64)]) -> String {
    terms.iter().map(|(n, v)| format!("{n} {v}\n")).collect()
}

/// Terms `offset..=n_max` of `seq`, rendered as a b-file.
pub fn bfile(seq: Sequence, offset: u64, n_max: u64, source: &dyn CountSource) -> Result<String, ExportError> {
    if offset == 0 || offset > n_max {
        return Err(ExportError::BadRange { offset, n_max });
    }
    let terms = (offset..=n_max)
        .map(|n| Ok((n, seq.term(n, source)?)))
        .collect::<Result<Vec<_>, ExportError>>()?;
    Ok(render_bfile(&terms))
}
