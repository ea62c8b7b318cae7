//! Match-level skill percentages: CSV parsing, validation, and the bundled
//! 2011/2012 Brazilian men's Super League table.
//!
//! Schema (UTF-8, comma separated, `#` lines are comments):
//!
//! ```text
//! match_id,attack_pct,block_pct,serve_pct,error_pct,z
//! 1,48.00,12.00,2.67,37.33,1
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::composition::{alr, closure};
use crate::error::{Error, Result};
use crate::regress::RegressionDataset;

pub const HEADER: &str = "match_id,attack_pct,block_pct,serve_pct,error_pct,z";

/// Part names in column order; the last is the log-ratio reference.
pub const PART_LABELS: [&str; 4] = ["attack", "block", "serve", "error"];

/// Allowed deviation of the four percentages from 100.
pub const PERCENT_SUM_TOLERANCE: f64 = 0.05;

/// The bundled 128-match table.
pub const BUNDLED_CSV: &str = include_str!("../data/table_a.csv");

/// SHA-256 of [`BUNDLED_CSV`].
pub const BUNDLED_SHA256: &str = "152865c77032df83fc3dcd12d6dab7188629bffabdd5404383da6f82102e32ba";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub match_id: u32,
    pub attack_pct: f64,
    pub block_pct: f64,
    pub serve_pct: f64,
    pub error_pct: f64,
    pub z: u8,
}

impl MatchRecord {
    pub fn percentages(&self) -> [f64; 4] {
        [
            self.attack_pct,
            self.block_pct,
            self.serve_pct,
            self.error_pct,
        ]
    }

    fn validate(&self, mode: ParseMode, warnings: &mut Vec<String>) -> Result<()> {
        let fail = |reason: String| Error::Validation {
            match_id: self.match_id,
            reason,
        };
        if self.match_id == 0 {
            return Err(fail("match id must be positive".into()));
        }
        for (label, v) in PART_LABELS.iter().zip(self.percentages()) {
            if !(v.is_finite() && v > 0.0) {
                return Err(fail(format!("{label} percentage must be > 0, got {v}")));
            }
        }
        if self.z > 1 {
            return Err(fail(format!("z must be 0 or 1, got {}", self.z)));
        }
        let sum: f64 = self.percentages().iter().sum();
        if (sum - 100.0).abs() > PERCENT_SUM_TOLERANCE {
            let reason =
                format!("percentages sum to {sum:.4}, not 100 +/- {PERCENT_SUM_TOLERANCE}");
            match mode {
                ParseMode::Strict => return Err(fail(reason)),
                ParseMode::Lenient => warnings.push(format!("match {}: {reason}", self.match_id)),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchTable {
    pub records: Vec<MatchRecord>,
}

impl MatchTable {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Writes the table in the CSV schema. Values print with at least two
    /// decimals and as many more as needed to round-trip exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * (self.records.len() + 1));
        out.push_str(HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = write!(out, "{}", r.match_id);
            for v in r.percentages() {
                out.push(',');
                out.push_str(&format_percent(v));
            }
            let _ = writeln!(out, ",{}", r.z);
        }
        out
    }
}

fn format_percent(v: f64) -> String {
    let fixed = format!("{v:.2}");
    if fixed.parse::<f64>() == Ok(v) {
        fixed
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ParseMode {
    /// Any invariant violation is an error.
    #[default]
    Strict,
    /// Percentage-sum violations become warnings.
    Lenient,
}

/// Parses and validates a match table in strict mode.
pub fn parse_matches(text: &str) -> Result<MatchTable> {
    parse_matches_with(text, ParseMode::Strict).map(|(table, _)| table)
}

/// Parses with an explicit mode, returning any lenient-mode warnings.
pub fn parse_matches_with(text: &str, mode: ParseMode) -> Result<(MatchTable, Vec<String>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::None)
        .from_reader(text.as_bytes());

    let mut records = Vec::new();
    let mut warnings = Vec::new();
    let mut seen = HashSet::new();
    let mut header_seen = false;

    for row in reader.records() {
        let row = row.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            column: 0,
            reason: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if !header_seen {
            let got: Vec<&str> = row.iter().collect();
            if got.join(",") != HEADER {
                return Err(Error::Parse {
                    line,
                    column: 1,
                    reason: format!("expected header `{HEADER}`"),
                });
            }
            header_seen = true;
            continue;
        }
        if row.len() != 6 {
            return Err(Error::Parse {
                line,
                column: row.len().min(6) + 1,
                reason: format!("expected 6 fields, found {}", row.len()),
            });
        }
        let field = |column: usize| -> Result<f64> {
            let raw = &row[column];
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    line,
                    column: column + 1,
                    reason: format!("`{raw}` is not a finite decimal number"),
                })
        };
        let match_id = row[0].parse::<u32>().map_err(|_| Error::Parse {
            line,
            column: 1,
            reason: format!("`{}` is not a match id", &row[0]),
        })?;
        let z = row[5].parse::<u8>().map_err(|_| Error::Parse {
            line,
            column: 6,
            reason: format!("`{}` is not an integer covariate", &row[5]),
        })?;
        let record = MatchRecord {
            match_id,
            attack_pct: field(1)?,
            block_pct: field(2)?,
            serve_pct: field(3)?,
            error_pct: field(4)?,
            z,
        };
        record.validate(mode, &mut warnings)?;
        if !seen.insert(match_id) {
            return Err(Error::DuplicateId(match_id));
        }
        records.push(record);
    }
    if !header_seen {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            reason: "missing header".into(),
        });
    }
    Ok((MatchTable { records }, warnings))
}

/// The bundled table.
pub fn bundled() -> MatchTable {
    parse_matches(BUNDLED_CSV).expect("bundled table is valid")
}

/// Closes each row's percentages and takes log-ratios against the error
/// share; `z` becomes the single covariate. Row order is kept.
pub fn to_regression_dataset(table: &MatchTable) -> Result<RegressionDataset> {
    let n = table.len();
    let mut y = DMatrix::zeros(n, 3);
    let mut z = DMatrix::zeros(n, 1);
    for (i, r) in table.records.iter().enumerate() {
        let c = closure(&r.percentages()).map_err(|e| Error::Record {
            match_id: r.match_id,
            source: Box::new(e),
        })?;
        for (j, v) in alr(&c).values().iter().enumerate() {
            y[(i, j)] = *v;
        }
        z[(i, 0)] = f64::from(r.z);
    }
    RegressionDataset::new(y, z)?
        .with_part_labels(PART_LABELS.iter().map(|s| s.to_string()).collect())
}
