use std::collections::HashMap;
use std::sync::Arc;

use super::{make_gate_str, GateDef, GateError};

/// Switching functions of the built-in gates, `(name, arity, outputs)`.
const BUILTIN: &[(&str, usize, &[&str])] = &[
    // Feynman (CNOT)
    ("FG", 2, &["A", "A ^ B"]),
    // Fredkin (controlled swap)
    ("FRG", 3, &["A", "A' & B ^ A & C", "A' & C ^ A & B"]),
    // Toffoli (CCNOT)
    ("TG", 3, &["A", "B", "A & B ^ C"]),
    // New gate
    ("NG", 3, &["A", "A & B ^ C", "A' & C' ^ B'"]),
    // Peres
    ("PG", 3, &["A", "A ^ B", "A & B ^ C"]),
    // HNG: full adder with D = 0, R = sum, S = carry
    (
        "HNG",
        4,
        &["A", "B", "A ^ B ^ C", "(A ^ B) & C ^ A & B ^ D"],
    ),
    // Six-correction logic: bound as (S1, S2, S3, C4), S = C4 ^ S3 (S2 + S1)
    ("SCL", 4, &["A", "B", "C", "D ^ C & (A | B)"]),
];

/// A set of gates with unique names, in insertion order.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    gates: Vec<Arc<GateDef>>,
    by_name: HashMap<String, usize>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, gate: GateDef) -> Result<Arc<GateDef>, GateError> {
        if self.by_name.contains_key(gate.name()) {
            return Err(GateError::DuplicateName(gate.name().to_string()));
        }
        let gate = Arc::new(gate);
        self.by_name
            .insert(gate.name().to_string(), self.gates.len());
        self.gates.push(Arc::clone(&gate));
        Ok(gate)
    }

    pub fn get(&self, name: &str) -> Option<&Arc<GateDef>> {
        self.by_name.get(name).map(|&i| &self.gates[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<GateDef>> {
        self.gates.iter()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

/// FG, FRG, TG, NG, PG, HNG and SCL. Each is checked for bijectivity as it
/// is built.
pub fn builtin_catalog() -> Catalog {
    let mut catalog = Catalog::new();
    for &(name, arity, outputs) in BUILTIN {
        let gate = make_gate_str(name, arity, outputs)
            .unwrap_or_else(|e| panic!("built-in gate {name} is invalid: {e}"));
        catalog
            .insert(gate)
            .expect("built-in gate names are unique");
    }
    catalog
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contents_and_arities() {
        let cat = builtin_catalog();
        let listed: Vec<_> = cat.iter().map(|g| (g.name(), g.arity())).collect();
        assert_eq!(
            listed,
            [
                ("FG", 2),
                ("FRG", 3),
                ("TG", 3),
                ("NG", 3),
                ("PG", 3),
                ("HNG", 4),
                ("SCL", 4)
            ]
        );
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut cat = builtin_catalog();
        let fg = cat.get("FG").unwrap().as_ref().clone();
        assert_eq!(cat.insert(fg), Err(GateError::DuplicateName("FG".into())));
    }
}
