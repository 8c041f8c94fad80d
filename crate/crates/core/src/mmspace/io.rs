//! Text formats for metric measure spaces.
//!
//! CSV: a header line `# dke-mms v1 n=<n>`, then `n` comma-separated rows of
//! the distance matrix, then one line holding the `n` point masses.
//! JSON: `{"n": .., "dist": [[..]], "measure": [..], "label": ".."}`.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::MetricMeasureSpace;
use crate::error::{Error, Result};

const CSV_MAGIC: &str = "# dke-mms v1 n=";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MmsJson {
    pub n: usize,
    pub dist: Vec<Vec<f64>>,
    pub measure: Vec<f64>,
    #[serde(default)]
    pub label: String,
}

fn parse_row(line: &str, lineno: usize, expect: usize) -> Result<Vec<f64>> {
    let vals = line
        .split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|e| Error::Parse { line: lineno, msg: format!("`{}`: {e}", t.trim()) })
        })
        .collect::<Result<Vec<_>>>()?;
    if vals.len() != expect {
        return Err(Error::Parse { line: lineno, msg: format!("expected {expect} values, found {}", vals.len()) });
    }
    Ok(vals)
}

impl MetricMeasureSpace {
    pub fn to_csv(&self) -> String {
        let n = self.n();
        let mut out = format!("{CSV_MAGIC}{n}\n");
        let join = |vals: &mut dyn Iterator<Item = f64>| vals.map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        for i in 0..n {
            let _ = writeln!(out, "{}", join(&mut (0..n).map(|j| self.d(i, j))));
        }
        let _ = writeln!(out, "{}", join(&mut self.measure().iter().copied()));
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let n: usize = header
            .strip_prefix(CSV_MAGIC)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse { line: hl, msg: format!("expected header `{CSV_MAGIC}<n>`") })?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, l) =
                lines.next().ok_or(Error::Parse { line: hl + rows.len() + 1, msg: "missing distance row".into() })?;
            rows.push(parse_row(l, ln, n)?);
        }
        let (ml, m) = lines.next().ok_or(Error::Parse { line: hl + n + 1, msg: "missing measure line".into() })?;
        let measure = parse_row(m, ml, n)?;
        if let Some((extra, _)) = lines.next() {
            return Err(Error::Parse { line: extra, msg: "trailing data after measure line".into() });
        }
        MetricMeasureSpace::from_rows(&rows, measure)
    }

    pub fn to_json_value(&self) -> MmsJson {
        let n = self.n();
        MmsJson {
            n,
            dist: (0..n).map(|i| (0..n).map(|j| self.d(i, j)).collect()).collect(),
            measure: self.measure().to_vec(),
            label: self.label().to_string(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_json_value())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: MmsJson = serde_json::from_str(text)?;
        if raw.dist.len() != raw.n {
            return Err(Error::DimensionMismatch { expected: raw.n, got: raw.dist.len() });
        }
        let label = raw.label.clone();
        Ok(MetricMeasureSpace::from_rows(&raw.dist, raw.measure)?.with_label(label))
    }

    /// Square matrix view used by other formats.
    pub fn dist_rows(&self) -> Vec<Vec<f64>> {
        let d: &DMatrix<f64> = self.dist();
        d.row_iter().map(|r| r.iter().copied().collect()).collect()
    }
}
