//! Reversible logic circuits and an optimized reversible BCD adder.
//!
//! * [`gate`]: reversible gates as permutations, the built-in catalog and
//!   quantum-cost tables.
//! * [`netlist`]: fan-out-free, feedback-free circuit construction and
//!   simulation.
//! * [`metrics`]: gate count, garbage, constants, quantum cost and delay.
//! * [`designs`]: the full adder, ripple adder, one- and N-digit BCD adders,
//!   the decimal oracle and the published comparison table.
//! * [`text`]: the netlist text format.
//! * [`cli`]: the `revbcd` command-line front end.

pub mod bits;
pub mod cli;
pub mod designs;
pub mod gate;
pub mod metrics;
pub mod netlist;
pub mod text;

pub use bits::BitWord;
pub use gate::{builtin_catalog, is_bijective, make_gate, Catalog, CostTable, GateDef, TruthTable};
pub use metrics::{analyze, delay, delay_decomposition, MetricsReport};
pub use netlist::{Circuit, CircuitBuilder, NetlistError, WireId};
