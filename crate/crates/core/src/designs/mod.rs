//! Reference circuits: the HNG full adder, the 4-bit ripple adder, the SCL
//! correction stage, the one-digit reversible BCD adder and its N-digit
//! cascade, together with the decimal oracle used to check them.

mod bcd;
mod reference;

use std::sync::Arc;

use thiserror::Error;

use crate::gate::{builtin_catalog, GateDef};
use crate::metrics::MetricsError;
use crate::netlist::{Circuit, CircuitBuilder, NetlistError, WireId};

pub use bcd::{
    all_cases, decode_bcd_outputs, encode_bcd_inputs, eval_correction_eq1, eval_correction_eq2,
    oracle_bcd_add, oracle_bcd_add_n, verify_bcd_adder, BcdCase, BcdDigit, CaseFailure,
    VerifyReport,
};
pub use reference::{recompute_reference_row, reference_table, ReferenceRow, PROPOSED_LABEL};

pub const STAGE_ADDER1: &str = "adder1";
pub const STAGE_CORRECTION: &str = "correction";
pub const STAGE_ADDER2: &str = "adder2";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("digit count must be at least 1, got {0}")]
    BadDigitCount(usize),
    #[error("{0} is not a decimal digit")]
    BadDigit(u8),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// The catalog gates the designs are built from.
struct Gates {
    fg: Arc<GateDef>,
    pg: Arc<GateDef>,
    hng: Arc<GateDef>,
    scl: Arc<GateDef>,
}

impl Gates {
    fn load() -> Self {
        let cat = builtin_catalog();
        let get = |n: &str| Arc::clone(cat.get(n).expect("built-in gate"));
        Gates {
            fg: get("FG"),
            pg: get("PG"),
            hng: get("HNG"),
            scl: get("SCL"),
        }
    }
}

/// One HNG full adder with `D = 0`; P and Q become garbage.
fn full_adder_into(
    b: &mut CircuitBuilder,
    g: &Gates,
    x: WireId,
    y: WireId,
    carry_in: WireId,
) -> Result<(WireId, WireId), NetlistError> {
    let zero = b.add_constant(false);
    let o = b.add_gate(&g.hng, &[x, y, carry_in, zero])?;
    b.mark_all_garbage(&o[..2])?;
    Ok((o[2], o[3]))
}

/// Four full adders chained on their carries. Operands are MSB first.
/// Returns `(c4, [s3, s2, s1, s0])`.
fn ripple_adder4_into(
    b: &mut CircuitBuilder,
    g: &Gates,
    x: [WireId; 4],
    y: [WireId; 4],
    carry_in: WireId,
) -> Result<(WireId, [WireId; 4]), NetlistError> {
    let mut carry = carry_in;
    let mut sum = [carry_in; 4];
    for bit in (0..4).rev() {
        let (s, c) = full_adder_into(b, g, x[bit], y[bit], carry)?;
        sum[bit] = s;
        carry = c;
    }
    Ok((carry, sum))
}

/// One BCD digit: ripple adder, SCL overflow detection, then the add-six
/// correction built from PG, HNG and FG. Returns `(cout, [Σ3, Σ2, Σ1, Σ0])`.
///
/// `stage_prefix` is prepended to the stage tags of the instances.
fn bcd_digit_into(
    b: &mut CircuitBuilder,
    g: &Gates,
    x: [WireId; 4],
    y: [WireId; 4],
    carry_in: WireId,
    stage_prefix: &str,
) -> Result<(WireId, [WireId; 4]), NetlistError> {
    let stage = |name: &str| format!("{stage_prefix}{name}");

    b.set_stage(Some(&stage(STAGE_ADDER1)));
    let (c4, [s3, s2, s1, s0]) = ripple_adder4_into(b, g, x, y, carry_in)?;

    b.set_stage(Some(&stage(STAGE_CORRECTION)));
    let o = b.add_gate(&g.scl, &[s1, s2, s3, c4])?;
    let (s1, s2, s3, cout) = (o[0], o[1], o[2], o[3]);

    // Adding 0110 when cout is set: bit 0 is unchanged, bits 1..3 ripple.
    b.set_stage(Some(&stage(STAGE_ADDER2)));
    let zero = b.add_constant(false);
    let o = b.add_gate(&g.pg, &[cout, s1, zero])?;
    let (cout, sum1, c1) = (o[0], o[1], o[2]);

    let zero = b.add_constant(false);
    let o = b.add_gate(&g.hng, &[s2, cout, c1, zero])?;
    b.mark_garbage(o[0])?;
    let (cout, sum2, c2) = (o[1], o[2], o[3]);

    let o = b.add_gate(&g.fg, &[s3, c2])?;
    b.mark_garbage(o[0])?;
    let sum3 = o[1];

    b.set_stage(None);
    Ok((cout, [sum3, sum2, sum1, s0]))
}

fn operand_labels(prefix: char, bits: usize) -> Vec<String> {
    (0..bits).rev().map(|i| format!("{prefix}{i}")).collect()
}

/// A single full adder: inputs `a, b, cin`, outputs `sum, carry`.
pub fn build_full_adder() -> Result<Circuit, DesignError> {
    let g = Gates::load();
    let mut b = CircuitBuilder::new(&["a", "b", "cin"])?;
    let i = b.inputs();
    let (sum, carry) = full_adder_into(&mut b, &g, i[0], i[1], i[2])?;
    b.mark_output(sum, "sum")?;
    b.mark_output(carry, "carry")?;
    Ok(b.seal()?)
}

/// 4-bit ripple-carry adder of four HNG full adders: inputs
/// `a3..a0, b3..b0, cin`, outputs `c4, s3..s0`.
pub fn build_ripple_adder4() -> Result<Circuit, DesignError> {
    let g = Gates::load();
    let mut labels = operand_labels('a', 4);
    labels.extend(operand_labels('b', 4));
    labels.push("cin".into());
    let mut b = CircuitBuilder::new(&labels)?;
    let i = b.inputs();
    b.set_stage(Some(STAGE_ADDER1));
    let (c4, s) = ripple_adder4_into(
        &mut b,
        &g,
        [i[0], i[1], i[2], i[3]],
        [i[4], i[5], i[6], i[7]],
        i[8],
    )?;
    b.mark_output(c4, "c4")?;
    for (k, w) in s.into_iter().enumerate() {
        b.mark_output(w, &format!("s{}", 3 - k))?;
    }
    Ok(b.seal()?)
}

/// The SCL gate alone, bound as `(s1, s2, s3, c4) -> (s1, s2, s3, cout)`.
pub fn build_correction_stage() -> Result<Circuit, DesignError> {
    let g = Gates::load();
    let mut b = CircuitBuilder::new(&["s1", "s2", "s3", "c4"])?;
    b.set_stage(Some(STAGE_CORRECTION));
    let o = b.add_gate(&g.scl, &b.inputs())?;
    for (w, label) in o.into_iter().zip(["s1", "s2", "s3", "cout"]) {
        b.mark_output(w, label)?;
    }
    Ok(b.seal()?)
}

/// The one-digit reversible BCD adder: inputs `a3..a0, b3..b0, cin`,
/// outputs `cout, s3..s0`. Instances carry the stage tags `adder1`,
/// `correction` and `adder2`.
pub fn build_bcd_adder_digit() -> Result<Circuit, DesignError> {
    build_bcd_adder_n(1)
}

/// `digits` one-digit adders cascaded on their decimal carries.
///
/// Inputs are `a{4n-1}..a0, b{4n-1}..b0, cin` and outputs `cout,
/// s{4n-1}..s0`, digit 0 occupying bits 3..0. For more than one digit the
/// stage tags are prefixed with `d<i>.`.
pub fn build_bcd_adder_n(digits: usize) -> Result<Circuit, DesignError> {
    if digits == 0 {
        return Err(DesignError::BadDigitCount(digits));
    }
    let g = Gates::load();
    let bits = 4 * digits;
    let mut labels = operand_labels('a', bits);
    labels.extend(operand_labels('b', bits));
    labels.push("cin".into());
    let mut b = CircuitBuilder::new(&labels)?;
    let i = b.inputs();
    let (a, bb, mut carry) = (&i[..bits], &i[bits..2 * bits], i[2 * bits]);

    // sums[k] holds bit (bits-1-k), MSB first like the operands
    let mut sums = vec![carry; bits];
    for d in 0..digits {
        let hi = bits - 4 * d - 4;
        let nibble = |ops: &[WireId]| [ops[hi], ops[hi + 1], ops[hi + 2], ops[hi + 3]];
        let prefix = if digits == 1 {
            String::new()
        } else {
            format!("d{d}.")
        };
        let (cout, s) = bcd_digit_into(&mut b, &g, nibble(a), nibble(bb), carry, &prefix)?;
        sums[hi..hi + 4].copy_from_slice(&s);
        carry = cout;
    }
    b.mark_output(carry, "cout")?;
    for (k, &w) in sums.iter().enumerate() {
        b.mark_output(w, &format!("s{}", bits - 1 - k))?;
    }
    Ok(b.seal()?)
}
