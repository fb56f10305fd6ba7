#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use revbcd::gate::{builtin_catalog, GateDef};
use revbcd::netlist::{Circuit, CircuitBuilder, WireId};

/// One random placement step: which gate, and per pin either a free wire
/// (by index into the free list) or a fresh constant.
#[derive(Debug, Clone)]
pub struct Op {
    pub gate: usize,
    pub pins: Vec<(bool, usize)>,
}

#[derive(Debug, Clone)]
pub struct Recipe {
    pub inputs: usize,
    pub ops: Vec<Op>,
}

pub fn recipe(max_inputs: usize, max_ops: usize) -> impl Strategy<Value = Recipe> {
    let op = (
        0usize..7,
        prop::collection::vec((any::<bool>(), 0usize..64), 4),
    )
        .prop_map(|(gate, pins)| Op { gate, pins });
    (1..=max_inputs, prop::collection::vec(op, 0..=max_ops))
        .prop_map(|(inputs, ops)| Recipe { inputs, ops })
}

pub fn catalog_gates() -> Vec<Arc<GateDef>> {
    builtin_catalog().iter().cloned().collect()
}

/// Replays a recipe into a builder, returning it with its still-free wires.
pub fn replay(r: &Recipe) -> (CircuitBuilder, Vec<WireId>) {
    let gates = catalog_gates();
    let labels: Vec<String> = (0..r.inputs).map(|i| format!("i{i}")).collect();
    let mut b = CircuitBuilder::new(&labels).unwrap();
    let mut free = b.inputs();
    for op in &r.ops {
        let g = &gates[op.gate];
        let mut ins = Vec::with_capacity(g.arity());
        for &(use_const, pick) in op.pins.iter().take(g.arity()) {
            if use_const || free.is_empty() {
                ins.push(b.add_constant(pick % 2 == 1));
            } else {
                ins.push(free.remove(pick % free.len()));
            }
        }
        let outs = b.add_gate(g, &ins).unwrap();
        free.extend(outs);
    }
    (b, free)
}

/// Marks every free wire (alternating output / garbage) and seals.
pub fn finish(mut b: CircuitBuilder, free: &[WireId]) -> Circuit {
    for (i, &w) in free.iter().enumerate() {
        if i % 2 == 0 {
            b.mark_output(w, &format!("o{i}")).unwrap();
        } else {
            b.mark_garbage(w).unwrap();
        }
    }
    b.seal().unwrap()
}

pub fn build(r: &Recipe) -> Circuit {
    let (b, free) = replay(r);
    finish(b, &free)
}
