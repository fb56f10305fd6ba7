use rayon::prelude::*;

use super::DesignError;
use crate::netlist::{Circuit, NetlistError};

/// A decimal digit, 0 through 9.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BcdDigit(u8);

impl BcdDigit {
    pub fn new(value: u8) -> Result<Self, DesignError> {
        if value <= 9 {
            Ok(Self(value))
        } else {
            Err(DesignError::BadDigit(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = BcdDigit> {
        (0..=9).map(BcdDigit)
    }
}

/// One-digit addition problem with its decimal answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BcdCase {
    pub a: BcdDigit,
    pub b: BcdDigit,
    pub cin: bool,
    pub expected_cout: bool,
    pub expected_sum: BcdDigit,
}

impl BcdCase {
    pub fn new(a: BcdDigit, b: BcdDigit, cin: bool) -> Self {
        let (expected_cout, expected_sum) = oracle_bcd_add(a, b, cin);
        Self {
            a,
            b,
            cin,
            expected_cout,
            expected_sum,
        }
    }
}

/// All 200 one-digit cases, ordered by `(a, b, cin)`.
pub fn all_cases() -> Vec<BcdCase> {
    BcdDigit::all()
        .flat_map(|a| {
            BcdDigit::all().flat_map(move |b| [false, true].map(|cin| BcdCase::new(a, b, cin)))
        })
        .collect()
}

/// Plain decimal addition of two digits and a carry.
pub fn oracle_bcd_add(a: BcdDigit, b: BcdDigit, cin: bool) -> (bool, BcdDigit) {
    let s = a.0 + b.0 + cin as u8;
    if s > 9 {
        (true, BcdDigit(s - 10))
    } else {
        (false, BcdDigit(s))
    }
}

/// Digit-by-digit [`oracle_bcd_add`] over `digits`-digit decimal numbers.
pub fn oracle_bcd_add_n(a: u64, b: u64, cin: bool, digits: usize) -> (bool, u64) {
    let mut carry = cin;
    let mut sum = 0u64;
    let mut scale = 1u64;
    let (mut a, mut b) = (a, b);
    for _ in 0..digits {
        let (c, s) = oracle_bcd_add(BcdDigit((a % 10) as u8), BcdDigit((b % 10) as u8), carry);
        sum += s.0 as u64 * scale;
        carry = c;
        scale *= 10;
        a /= 10;
        b /= 10;
    }
    (carry, sum)
}

/// `C4 + S3·S2 + S3·S1`
pub fn eval_correction_eq1(s3: bool, s2: bool, s1: bool, c4: bool) -> bool {
    (s3 && s2) || (s3 && s1) || c4
}

/// `C4 ⊕ S3·(S2 + S1)`
pub fn eval_correction_eq2(s3: bool, s2: bool, s1: bool, c4: bool) -> bool {
    c4 ^ (s3 && (s2 || s1))
}

fn push_bcd(bits: &mut Vec<bool>, value: u64, digits: usize) {
    for d in (0..digits).rev() {
        let digit = (value / 10u64.pow(d as u32)) % 10;
        bits.extend((0..4).rev().map(|i| (digit >> i) & 1 == 1));
    }
}

/// Input bits `a, b, cin` (MSB first) for a `digits`-digit BCD adder.
pub fn encode_bcd_inputs(a: u64, b: u64, cin: bool, digits: usize) -> Vec<bool> {
    let mut bits = Vec::with_capacity(8 * digits + 1);
    push_bcd(&mut bits, a, digits);
    push_bcd(&mut bits, b, digits);
    bits.push(cin);
    bits
}

/// Reads `cout, s{4n-1}..s0` back as a carry and a decimal number. `None`
/// when any nibble is not a decimal digit.
pub fn decode_bcd_outputs(outputs: &[bool], digits: usize) -> Option<(bool, u64)> {
    if outputs.len() != 4 * digits + 1 {
        return None;
    }
    let mut sum = 0u64;
    for nibble in outputs[1..].chunks(4) {
        let d = nibble.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        if d > 9 {
            return None;
        }
        sum = sum * 10 + d;
    }
    Some((outputs[0], sum))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseFailure {
    pub a: u64,
    pub b: u64,
    pub cin: bool,
    pub expected: (bool, u64),
    /// Raw `cout, sum` bits produced by the circuit.
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub digits: usize,
    pub cases: u64,
    pub failures: Vec<CaseFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> u64 {
        self.cases - self.failures.len() as u64
    }

    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks a `digits`-digit BCD adder against the decimal oracle on every
/// valid `(a, b, cin)`. The first primary output must be the carry and the
/// rest the sum bits, MSB first.
pub fn verify_bcd_adder(circuit: &Circuit, digits: usize) -> Result<VerifyReport, DesignError> {
    if digits == 0 {
        return Err(DesignError::BadDigitCount(digits));
    }
    let expected_inputs = 8 * digits + 1;
    if circuit.input_count() != expected_inputs {
        return Err(NetlistError::WidthMismatch {
            expected: expected_inputs,
            got: circuit.input_count(),
        }
        .into());
    }
    if circuit.outputs().len() != 4 * digits + 1 {
        return Err(NetlistError::WidthMismatch {
            expected: 4 * digits + 1,
            got: circuit.outputs().len(),
        }
        .into());
    }
    let limit = 10u64.pow(digits as u32);
    let out_wires: Vec<usize> = circuit.outputs().iter().map(|(_, w)| w.index()).collect();

    let mut failures: Vec<CaseFailure> = (0..limit)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut values = Vec::new();
            let mut out = Vec::with_capacity(out_wires.len());
            let mut local = Vec::new();
            for b in 0..limit {
                for cin in [false, true] {
                    let inputs = encode_bcd_inputs(a, b, cin, digits);
                    circuit.evaluate_into(&inputs, &mut values);
                    out.clear();
                    out.extend(out_wires.iter().map(|&w| values[w]));
                    let expected = oracle_bcd_add_n(a, b, cin, digits);
                    if decode_bcd_outputs(&out, digits) != Some(expected) {
                        local.push(CaseFailure {
                            a,
                            b,
                            cin,
                            expected,
                            got: out.iter().map(|&b| if b { '1' } else { '0' }).collect(),
                        });
                    }
                }
            }
            local
        })
        .collect();
    failures.sort_by_key(|f| (f.a, f.b, f.cin));
    Ok(VerifyReport {
        digits,
        cases: limit * limit * 2,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: u8) -> BcdDigit {
        BcdDigit::new(v).unwrap()
    }

    #[test]
    fn digit_range() {
        assert_eq!(BcdDigit::new(10), Err(DesignError::BadDigit(10)));
        assert_eq!(BcdDigit::all().count(), 10);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_bcd_add(d(4), d(4), false), (false, d(8)));
        assert_eq!(oracle_bcd_add(d(9), d(9), true), (true, d(9)));
        assert_eq!(oracle_bcd_add(d(7), d(8), false), (true, d(5)));
    }

    #[test]
    fn cases_satisfy_their_invariant() {
        let cases = all_cases();
        assert_eq!(cases.len(), 200);
        for c in cases {
            assert_eq!(
                c.expected_cout as u8 * 10 + c.expected_sum.value(),
                c.a.value() + c.b.value() + c.cin as u8
            );
        }
    }

    #[test]
    fn chained_oracle() {
        assert_eq!(oracle_bcd_add_n(99, 1, false, 2), (true, 0));
        assert_eq!(oracle_bcd_add_n(45, 38, true, 2), (false, 84));
        assert_eq!(oracle_bcd_add_n(9999, 9999, true, 4), (true, 9999));
    }

    #[test]
    fn correction_equation_examples() {
        assert!(eval_correction_eq1(false, false, false, true));
        assert!(eval_correction_eq1(true, false, true, false));
        assert!(eval_correction_eq1(true, true, true, true));
        assert!(eval_correction_eq2(false, false, false, true));
        assert!(eval_correction_eq2(true, false, true, false));
        assert!(!eval_correction_eq2(true, true, true, true));
    }

    #[test]
    fn encode_decode() {
        let bits = encode_bcd_inputs(59, 3, true, 2);
        let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        assert_eq!(s, "01011001000000111");
        let out = [true, true, false, true, false, false, false, true, true];
        assert_eq!(decode_bcd_outputs(&out, 2), None); // 1010 is not a digit
        let out = [true, false, false, false, true, false, false, true, true];
        assert_eq!(decode_bcd_outputs(&out, 2), Some((true, 13)));
    }
}
