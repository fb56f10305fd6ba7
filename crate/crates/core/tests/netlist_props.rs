mod common;

use std::collections::HashSet;

use common::{build, catalog_gates, finish, recipe, replay};
use proptest::prelude::*;
use revbcd::bits::BitWord;
use revbcd::gate::CostTable;
use revbcd::metrics::{analyze, delay, delay_decomposition, instance_levels, MetricsError};
use revbcd::netlist::{Circuit, NetlistError, Violation, WireSource};

/// Longest path computed straight from the wire sources. Instances are
/// stored in placement order, which is already topological.
fn oracle_levels(c: &Circuit) -> Vec<usize> {
    let mut levels = vec![0usize; c.gate_count()];
    for (i, inst) in c.instances().iter().enumerate() {
        let upstream = inst
            .inputs()
            .iter()
            .filter_map(|&w| match c.wire_source(w) {
                WireSource::GateOutput { instance, .. } => Some(levels[instance]),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        levels[i] = upstream + 1;
    }
    levels
}

fn feeds(c: &Circuit, from: usize, to: usize) -> bool {
    c.instances()[to].inputs().iter().any(|&w| {
        matches!(c.wire_source(w), WireSource::GateOutput { instance, .. } if instance == from)
    })
}

fn all_ones() -> CostTable {
    let gates = catalog_gates();
    CostTable::uniform(gates.iter().map(|g| g.name()), 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn line_count_is_conserved(r in recipe(6, 12)) {
        let c = build(&r);
        prop_assert_eq!(
            c.input_count() + c.constant_count(),
            c.outputs().len() + c.garbage_count()
        );
    }

    #[test]
    fn outputs_and_garbage_recover_inputs(r in recipe(8, 10)) {
        let c = build(&r);
        let map = c.mapping().unwrap();
        prop_assert_eq!(map.len(), 1 << c.input_count());
        let distinct: HashSet<_> = map.iter().collect();
        prop_assert_eq!(distinct.len(), map.len());
    }

    #[test]
    fn simulate_agrees_with_mapping(r in recipe(6, 10)) {
        let c = build(&r);
        let map = c.mapping().unwrap();
        for (x, expected) in map.iter().enumerate() {
            let input = BitWord::from_u64(x as u64, c.input_count()).unwrap();
            prop_assert_eq!(&c.simulate(&input).unwrap(), expected);
        }
    }

    #[test]
    fn reusing_a_consumed_wire_is_a_fan_out_violation(r in recipe(6, 10)) {
        let (mut b, _) = replay(&r);
        let consumed: Vec<_> = b.inputs().into_iter().filter(|&w| b.is_consumed(w)).collect();
        prop_assume!(!consumed.is_empty());
        let fg = &catalog_gates()[0];
        let k = b.add_constant(false);
        let err = b.add_gate(fg, &[consumed[0], k]).unwrap_err();
        prop_assert!(matches!(err, NetlistError::FanOutViolation { .. }), "{err}");
    }

    #[test]
    fn unmarked_wire_fails_validation(r in recipe(6, 10), skip in 0usize..64) {
        let (mut b, free) = replay(&r);
        let skip = skip % free.len();
        for (i, &w) in free.iter().enumerate() {
            if i != skip {
                b.mark_garbage(w).unwrap();
            }
        }
        match b.seal() {
            Err(NetlistError::ValidationFailed(v)) => {
                let dangling: HashSet<_> = v.iter().filter_map(|v| match v {
                    Violation::Dangling { wire, .. } => Some(*wire),
                    _ => None,
                }).collect();
                prop_assert!(dangling.contains(&free[skip]));
            }
            other => prop_assert!(false, "expected ValidationFailed, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn levels_match_longest_path_oracle(r in recipe(6, 14)) {
        let c = build(&r);
        let oracle = oracle_levels(&c);
        prop_assert_eq!(instance_levels(&c), oracle.clone());
        prop_assert_eq!(delay(&c), oracle.into_iter().max().unwrap_or(0));
    }

    #[test]
    fn delay_equals_gate_count_only_for_chains(r in recipe(6, 14)) {
        let c = build(&r);
        prop_assert!(delay(&c) <= c.gate_count());
        let order = c.topological_order();
        let chain = order.windows(2).all(|p| feeds(&c, p[0], p[1]));
        prop_assert_eq!(delay(&c) == c.gate_count(), chain);
    }

    #[test]
    fn unit_costs_count_gates(r in recipe(6, 14)) {
        let c = build(&r);
        let report = analyze(&c, &all_ones()).unwrap();
        prop_assert_eq!(report.quantum_cost, c.gate_count() as u64);
        prop_assert_eq!(report.delay_levels, delay(&c));
        prop_assert_eq!(report.garbage_count, c.garbage_count());
        prop_assert_eq!(report.constant_count, c.constant_count());
    }

    #[test]
    fn gate_on_a_critical_output_adds_one_level(r in recipe(6, 12), pick in 0usize..8) {
        let before = build(&r);
        let (mut b, mut free) = replay(&r);
        let levels = instance_levels(&before);
        let wire = match levels.iter().enumerate().max_by_key(|&(_, l)| *l) {
            Some((i, _)) => {
                let outs = before.instances()[i].outputs();
                outs[pick % outs.len()]
            }
            None => free[pick % free.len()],
        };
        let pos = free.iter().position(|&w| w == wire).unwrap();
        free.remove(pos);
        let k = b.add_constant(true);
        free.extend(b.add_gate(&catalog_gates()[0], &[wire, k]).unwrap());
        let after = finish(b, &free);
        prop_assert_eq!(delay(&after), delay(&before) + 1);
    }

    #[test]
    fn stage_contributions_sum_to_delay(r in recipe(6, 14), cut in 0usize..16) {
        let c = build(&r);
        let n = c.gate_count();
        let cut = cut.min(n);
        let tags: Vec<&str> = (0..n).map(|i| if i < cut { "first" } else { "second" }).collect();
        let crossing = (0..cut).any(|i| (cut..n).any(|j| feeds(&c, i, j)));
        match delay_decomposition(&c, &tags) {
            Ok(parts) => {
                prop_assert_eq!(parts.iter().map(|p| p.1).sum::<usize>(), delay(&c));
            }
            Err(MetricsError::StagesNotLinear(_)) => {
                prop_assert!(cut > 0 && cut < n && !crossing);
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
