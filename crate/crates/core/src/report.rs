//! Audit rows and their CSV layout.

use crate::error::{domain, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// Fixed leading CSV columns of every audit.
pub const AUDIT_HEADER: [&str; 8] = [
    "n",
    "d",
    "u",
    "exact",
    "approx",
    "raw_err",
    "scaled_err",
    "argmax_flag",
];

/// One grid point of an error-bound audit. `extra` holds audit-specific
/// columns appended after the fixed ones, in insertion order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRow {
    pub n: u64,
    pub d: u64,
    pub u: u64,
    pub exact: f64,
    pub approx: f64,
    pub raw_err: f64,
    pub scaled_err: f64,
    pub argmax_flag: bool,
    pub extra: Vec<(String, String)>,
}

impl AuditRow {
    /// Row with `raw_err = |exact - approx|` and `scaled_err = raw_err * scale`.
    pub fn new(n: u64, d: u64, u: u64, exact: f64, approx: f64, scale: f64) -> Self {
        let raw_err = (exact - approx).abs();
        Self {
            n,
            d,
            u,
            exact,
            approx,
            raw_err,
            scaled_err: raw_err * scale,
            argmax_flag: false,
            extra: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.push((key.to_string(), value.to_string()));
        self
    }

    pub fn header(&self) -> Vec<String> {
        AUDIT_HEADER
            .iter()
            .map(|s| s.to_string())
            .chain(self.extra.iter().map(|(k, _)| k.clone()))
            .collect()
    }

    pub fn record(&self) -> Vec<String> {
        let mut r = vec![
            self.n.to_string(),
            self.d.to_string(),
            self.u.to_string(),
            fmt_f64(self.exact),
            fmt_f64(self.approx),
            fmt_f64(self.raw_err),
            fmt_f64(self.scaled_err),
            (self.argmax_flag as u8).to_string(),
        ];
        r.extend(self.extra.iter().map(|(_, v)| v.clone()));
        r
    }
}

/// Shortest round-trip decimal form, '.' as separator.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Marks the row with the largest scaled error in each group of equal `n`.
pub fn flag_argmax_by_n(rows: &mut [AuditRow]) {
    let mut i = 0;
    while i < rows.len() {
        let mut j = i;
        let mut best = i;
        while j < rows.len() && rows[j].n == rows[i].n {
            if rows[j].scaled_err > rows[best].scaled_err {
                best = j;
            }
            j += 1;
        }
        rows[best].argmax_flag = true;
        i = j;
    }
}

/// Pinned regression constants, one `key = value` per line; `#` starts a comment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Goldens {
    values: BTreeMap<String, f64>,
}

/// Relative slack allowed above a pinned golden before an audit counts as regressed.
pub const GOLDEN_SLACK: f64 = 0.10;

impl Goldens {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| domain(format!("pin line {}: expected key = value", i + 1)))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| domain(format!("pin line {}: bad number {:?}", i + 1, v.trim())))?;
            values.insert(k.trim().to_string(), v);
        }
        Ok(Self { values })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| domain(format!("cannot read pin file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    /// `Some(true)` when `value` exceeds the pin for `key` by more than [`GOLDEN_SLACK`].
    pub fn regressed(&self, key: &str, value: f64) -> Option<bool> {
        self.get(key).map(|pin| value > pin * (1.0 + GOLDEN_SLACK))
    }
}
