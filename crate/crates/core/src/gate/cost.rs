//! Per-gate quantum cost tables.
//!
//! File format, one entry per line:
//!
//! ```text
//! # comment
//! FG  1
//! HNG 6   # trailing comments are allowed
//! ```

use std::collections::HashMap;
use std::str::FromStr;

use thiserror::Error;

const DEFAULT_COSTS: &str = include_str!("../../data/default_costs.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cost table line {line}: {message}")]
pub struct CostTableError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CostTable {
    costs: HashMap<String, u64>,
}

impl CostTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// The bundled table (see `data/default_costs.txt`). Its NG, HNG and
    /// SCL entries are placeholders.
    pub fn builtin_default() -> Self {
        DEFAULT_COSTS
            .parse()
            .expect("bundled cost table is well-formed")
    }

    /// Every listed gate name costs 1.
    pub fn uniform<'a>(names: impl IntoIterator<Item = &'a str>, cost: u64) -> Self {
        Self {
            costs: names.into_iter().map(|n| (n.to_string(), cost)).collect(),
        }
    }

    pub fn set(&mut self, name: impl Into<String>, cost: u64) {
        self.costs.insert(name.into(), cost);
    }

    pub fn get(&self, name: &str) -> Option<u64> {
        self.costs.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }
}

impl FromStr for CostTable {
    type Err = CostTableError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut costs = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |message: String| CostTableError { line, message };
            let mut fields = body.split_whitespace();
            let (Some(name), Some(value), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(err(format!(
                    "expected `<gate-name> <cost>`, found {body:?}"
                )));
            };
            let cost: u64 = value
                .parse()
                .map_err(|_| err(format!("cost {value:?} is not a nonnegative integer")))?;
            if costs.insert(name.to_string(), cost).is_some() {
                return Err(err(format!("duplicate entry for gate {name:?}")));
            }
        }
        Ok(Self { costs })
    }
}
