//! Reversible gates as permutations of `{0,1}^n`.
//!
//! A gate's behaviour is stored as an exhaustive table indexed by the packed
//! input word. Input `A` is the most significant bit of that word, so for a
//! 4x4 gate the index is `A<<3 | B<<2 | C<<1 | D` and the output word packs
//! `P, Q, R, S` the same way.

mod catalog;
pub mod cost;
pub mod expr;

use std::fmt;

use thiserror::Error;

use crate::bits::BitWord;

pub use catalog::{builtin_catalog, Catalog};
pub use cost::{CostTable, CostTableError};
pub use expr::{Expr, ExprError};

/// Largest supported gate arity. Tables hold `2^arity` rows.
pub const MAX_ARITY: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GateError {
    #[error("arity {0} is outside 1..={MAX_ARITY}")]
    BadArity(usize),
    #[error("gate {name}: expected {expected} output functions, got {got}")]
    OutputCount {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("gate {name}: output {output} references input {var} but arity is {arity}")]
    VariableOutOfRange {
        name: String,
        output: usize,
        var: char,
        arity: usize,
    },
    #[error("gate {name} is not bijective: inputs {first} and {second} both map to {image}")]
    NotBijective {
        name: String,
        first: String,
        second: String,
        image: String,
    },
    #[error("truth table for arity {arity} needs {expected} rows, got {got}")]
    TableSize {
        arity: usize,
        expected: usize,
        got: usize,
    },
    #[error("truth table row {row} has output {value:#x} wider than {arity} bits")]
    RowTooWide {
        row: usize,
        value: u32,
        arity: usize,
    },
    #[error("width mismatch: gate {name} takes {expected} bits, got {got}")]
    WidthMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("duplicate gate name {0:?}")]
    DuplicateName(String),
    #[error("gate {name}, output {output}: {source}")]
    Expr {
        name: String,
        output: usize,
        source: ExprError,
    },
}

/// Total mapping from every n-bit input word to an n-bit output word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    rows: Vec<u32>,
}

impl TruthTable {
    pub fn new(arity: usize, rows: Vec<u32>) -> Result<Self, GateError> {
        check_arity(arity)?;
        let expected = 1usize << arity;
        if rows.len() != expected {
            return Err(GateError::TableSize {
                arity,
                expected,
                got: rows.len(),
            });
        }
        if let Some((row, &value)) = rows.iter().enumerate().find(|(_, &v)| v >> arity != 0) {
            return Err(GateError::RowTooWide { row, value, arity });
        }
        Ok(Self { arity, rows })
    }

    pub fn identity(arity: usize) -> Result<Self, GateError> {
        check_arity(arity)?;
        Self::new(arity, (0..1u32 << arity).collect())
    }

    /// Tabulates `outputs` over all `2^arity` inputs.
    pub fn from_functions(arity: usize, outputs: &[Expr]) -> Result<Self, GateError> {
        check_arity(arity)?;
        let rows = (0..1u32 << arity)
            .map(|word| {
                outputs
                    .iter()
                    .fold(0u32, |acc, f| (acc << 1) | f.eval(word, arity) as u32)
            })
            .collect();
        Ok(Self { arity, rows })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn lookup(&self, word: u32) -> u32 {
        self.rows[word as usize]
    }

    /// First pair of distinct inputs sharing an image, if any.
    fn find_collision(&self) -> Option<(u32, u32)> {
        let mut seen: Vec<Option<u32>> = vec![None; self.rows.len()];
        for (input, &out) in self.rows.iter().enumerate() {
            match seen[out as usize] {
                Some(prev) => return Some((prev, input as u32)),
                None => seen[out as usize] = Some(input as u32),
            }
        }
        None
    }
}

fn check_arity(arity: usize) -> Result<(), GateError> {
    if (1..=MAX_ARITY).contains(&arity) {
        Ok(())
    } else {
        Err(GateError::BadArity(arity))
    }
}

/// True iff the table is a permutation of `{0,1}^n`.
pub fn is_bijective(table: &TruthTable) -> bool {
    table.find_collision().is_none()
}

/// A named reversible gate. Construction guarantees the table is bijective.
///
/// Every gate contributes exactly one level of delay. Quantum cost is not
/// stored here; it is looked up by name in a [`CostTable`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateDef {
    name: String,
    table: TruthTable,
    functions: Option<Vec<Expr>>,
}

impl GateDef {
    pub fn from_table(name: impl Into<String>, table: TruthTable) -> Result<Self, GateError> {
        let name = name.into();
        if let Some((first, second)) = table.find_collision() {
            let arity = table.arity;
            return Err(GateError::NotBijective {
                first: word_string(first, arity),
                second: word_string(second, arity),
                image: word_string(table.lookup(first), arity),
                name,
            });
        }
        Ok(Self {
            name,
            table,
            functions: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.table.arity
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    /// Switching functions, when the gate was defined by expressions.
    pub fn functions(&self) -> Option<&[Expr]> {
        self.functions.as_deref()
    }

    pub fn delay(&self) -> usize {
        1
    }

    #[inline]
    pub fn apply_word(&self, word: u32) -> u32 {
        self.table.lookup(word)
    }

    pub fn apply(&self, input: &BitWord) -> Result<BitWord, GateError> {
        if input.width() != self.arity() {
            return Err(GateError::WidthMismatch {
                name: self.name.clone(),
                expected: self.arity(),
                got: input.width(),
            });
        }
        let word = crate::bits::pack(input.bits()) as u32;
        Ok(BitWord::from_u64_truncating(
            self.apply_word(word) as u64,
            self.arity(),
        ))
    }

    pub fn is_self_inverse(&self) -> bool {
        self.table
            .rows
            .iter()
            .enumerate()
            .all(|(x, &y)| self.table.lookup(y) == x as u32)
    }

    /// The gate computing the inverse permutation.
    ///
    /// Self-inverse gates come back unchanged; others are renamed `<name>_inv`.
    pub fn inverse(&self) -> GateDef {
        if self.is_self_inverse() {
            return self.clone();
        }
        let mut rows = vec![0u32; self.table.rows.len()];
        for (x, &y) in self.table.rows.iter().enumerate() {
            rows[y as usize] = x as u32;
        }
        GateDef {
            name: format!("{}_inv", self.name),
            table: TruthTable {
                arity: self.table.arity,
                rows,
            },
            functions: None,
        }
    }
}

impl fmt::Display for GateDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}x{})", self.name, self.arity(), self.arity())
    }
}

/// Builds a gate from one switching function per output.
pub fn make_gate(
    name: impl Into<String>,
    arity: usize,
    outputs: Vec<Expr>,
) -> Result<GateDef, GateError> {
    let name = name.into();
    check_arity(arity)?;
    if outputs.len() != arity {
        return Err(GateError::OutputCount {
            name,
            expected: arity,
            got: outputs.len(),
        });
    }
    for (output, f) in outputs.iter().enumerate() {
        if let Some(v) = f.max_var().filter(|&v| v >= arity) {
            return Err(GateError::VariableOutOfRange {
                name,
                output,
                var: expr::var_name(v),
                arity,
            });
        }
    }
    let table = TruthTable::from_functions(arity, &outputs)?;
    let mut gate = GateDef::from_table(name, table)?;
    gate.functions = Some(outputs);
    Ok(gate)
}

/// [`make_gate`] with functions given in the text syntax of [`Expr::parse`].
pub fn make_gate_str(
    name: impl Into<String>,
    arity: usize,
    outputs: &[&str],
) -> Result<GateDef, GateError> {
    let name = name.into();
    let exprs = outputs
        .iter()
        .enumerate()
        .map(|(output, text)| {
            Expr::parse(text).map_err(|source| GateError::Expr {
                name: name.clone(),
                output,
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    make_gate(name, arity, exprs)
}

fn word_string(word: u32, arity: usize) -> String {
    BitWord::from_u64_truncating(word as u64, arity).to_string()
}
