//! Optimization parameters of a sealed circuit: gate count, garbage outputs,
//! constant inputs, quantum cost and delay in gate levels.
//!
//! Delay uses a unit model: each gate contributes one level and the delay of
//! a circuit is the number of gates on its longest path.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::gate::CostTable;
use crate::netlist::{Circuit, Sink, WireSource};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("no quantum cost configured for gate {0:?}")]
    UnknownGateCost(String),
    #[error("stage tags do not form a linear pipeline: {0}")]
    StagesNotLinear(String),
    #[error("expected one stage tag per instance ({expected}), got {got}")]
    TagCount { expected: usize, got: usize },
    #[error("instance {0} has no stage tag")]
    UntaggedInstance(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MetricsReport {
    pub gate_count: usize,
    pub garbage_count: usize,
    pub constant_count: usize,
    pub quantum_cost: u64,
    pub delay_levels: usize,
}

impl MetricsReport {
    /// One `key=value` pair per line.
    pub fn to_kv(&self) -> String {
        format!(
            "gate_count={}\ngarbage_count={}\nconstant_count={}\nquantum_cost={}\ndelay_levels={}\n",
            self.gate_count,
            self.garbage_count,
            self.constant_count,
            self.quantum_cost,
            self.delay_levels
        )
    }

    /// Parses the output of [`MetricsReport::to_kv`]. Unknown keys are ignored.
    pub fn from_kv(text: &str) -> Option<Self> {
        let mut r = MetricsReport::default();
        let mut seen = 0;
        for line in text.lines() {
            let Some((key, value)) = line.split_once('=') else {
                continue;
            };
            let value = value.trim();
            match key.trim() {
                "gate_count" => r.gate_count = value.parse().ok()?,
                "garbage_count" => r.garbage_count = value.parse().ok()?,
                "constant_count" => r.constant_count = value.parse().ok()?,
                "quantum_cost" => r.quantum_cost = value.parse().ok()?,
                "delay_levels" => r.delay_levels = value.parse().ok()?,
                _ => continue,
            }
            seen += 1;
        }
        (seen == 5).then_some(r)
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gates            {}", self.gate_count)?;
        writeln!(f, "garbage outputs  {}", self.garbage_count)?;
        writeln!(f, "constant inputs  {}", self.constant_count)?;
        writeln!(f, "quantum cost     {}", self.quantum_cost)?;
        write!(f, "delay (levels)   {}", self.delay_levels)
    }
}

pub fn analyze(circuit: &Circuit, costs: &CostTable) -> Result<MetricsReport, MetricsError> {
    let quantum_cost = circuit
        .instances()
        .iter()
        .map(|inst| {
            costs
                .get(inst.gate().name())
                .ok_or_else(|| MetricsError::UnknownGateCost(inst.gate().name().to_string()))
        })
        .sum::<Result<u64, _>>()?;
    Ok(MetricsReport {
        gate_count: circuit.gate_count(),
        garbage_count: circuit.garbage_count(),
        constant_count: circuit.constant_count(),
        quantum_cost,
        delay_levels: delay(circuit),
    })
}

/// Level of each instance: the number of gates on the longest path from any
/// primary input or constant up to and including that instance.
pub fn instance_levels(circuit: &Circuit) -> Vec<usize> {
    let instances = circuit.instances();
    let mut level = vec![0usize; instances.len()];
    for &i in circuit.topological_order() {
        let pred = instances[i]
            .inputs()
            .iter()
            .filter_map(|&w| match circuit.wire_source(w) {
                WireSource::GateOutput { instance, .. } => Some(level[instance]),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        level[i] = pred + instances[i].gate().delay();
    }
    level
}

/// Longest path through the instance DAG, in gate levels.
pub fn delay(circuit: &Circuit) -> usize {
    instance_levels(circuit).into_iter().max().unwrap_or(0)
}

/// Stage tags recorded on the circuit's instances by the builder.
pub fn recorded_stage_tags(circuit: &Circuit) -> Result<Vec<String>, MetricsError> {
    circuit
        .instances()
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            inst.stage()
                .map(str::to_string)
                .ok_or(MetricsError::UntaggedInstance(i))
        })
        .collect()
}

/// Splits the circuit delay into per-stage contributions.
///
/// `tags[i]` names the stage of instance `i`. Stages must be totally ordered
/// by their data dependencies: no cycle between stages and a dependency
/// between every pair of consecutive stages. A stage's contribution is how
/// far it pushes the latest arrival level beyond everything upstream of it,
/// so the contributions always sum to [`delay`].
pub fn delay_decomposition<S: AsRef<str>>(
    circuit: &Circuit,
    tags: &[S],
) -> Result<Vec<(String, usize)>, MetricsError> {
    let instances = circuit.instances();
    if tags.len() != instances.len() {
        return Err(MetricsError::TagCount {
            expected: instances.len(),
            got: tags.len(),
        });
    }
    let mut names: Vec<&str> = Vec::new();
    let mut stage_of = Vec::with_capacity(tags.len());
    for t in tags {
        let t = t.as_ref();
        let idx = match names.iter().position(|&n| n == t) {
            Some(idx) => idx,
            None => {
                names.push(t);
                names.len() - 1
            }
        };
        stage_of.push(idx);
    }

    let k = names.len();
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    for (i, inst) in instances.iter().enumerate() {
        for &w in inst.inputs() {
            if let WireSource::GateOutput { instance, .. } = circuit.wire_source(w) {
                let (from, to) = (stage_of[instance], stage_of[i]);
                if from != to {
                    edges.insert((from, to));
                }
            }
        }
    }

    let order = linear_stage_order(k, &edges, &names)?;
    let levels = instance_levels(circuit);
    let mut stage_max = vec![0usize; k];
    for (i, &lvl) in levels.iter().enumerate() {
        stage_max[stage_of[i]] = stage_max[stage_of[i]].max(lvl);
    }
    let mut reached = 0;
    Ok(order
        .into_iter()
        .map(|s| {
            let next = reached.max(stage_max[s]);
            let contribution = next - reached;
            reached = next;
            (names[s].to_string(), contribution)
        })
        .collect())
}

/// Unique topological order of the stage graph, or an explanation of why
/// there is none.
fn linear_stage_order(
    k: usize,
    edges: &HashSet<(usize, usize)>,
    names: &[&str],
) -> Result<Vec<usize>, MetricsError> {
    let mut indegree = vec![0usize; k];
    for &(_, to) in edges {
        indegree[to] += 1;
    }
    let mut order = Vec::with_capacity(k);
    let mut ready: Vec<usize> = (0..k).filter(|&s| indegree[s] == 0).collect();
    while let Some(s) = ready.pop() {
        if !ready.is_empty() {
            let mut parallel: Vec<_> = ready.iter().map(|&r| names[r]).collect();
            parallel.push(names[s]);
            parallel.sort_unstable();
            return Err(MetricsError::StagesNotLinear(format!(
                "stages {parallel:?} are independent of each other"
            )));
        }
        order.push(s);
        for &(from, to) in edges {
            if from == s {
                indegree[to] -= 1;
                if indegree[to] == 0 {
                    ready.push(to);
                }
            }
        }
    }
    if order.len() != k {
        let stuck: Vec<_> = (0..k)
            .filter(|s| !order.contains(s))
            .map(|s| names[s])
            .collect();
        return Err(MetricsError::StagesNotLinear(format!(
            "stages {stuck:?} feed back into each other"
        )));
    }
    Ok(order)
}

/// Gate, garbage and constant counts attributed to one stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageMetrics {
    pub stage: String,
    pub gate_count: usize,
    pub garbage_count: usize,
    pub constant_count: usize,
}

/// Per-stage counts. Garbage belongs to the stage of the gate producing it
/// and a constant to the stage of the gate consuming it; garbage or
/// constants touching no gate are not attributed.
pub fn stage_breakdown<S: AsRef<str>>(
    circuit: &Circuit,
    tags: &[S],
) -> Result<Vec<StageMetrics>, MetricsError> {
    let instances = circuit.instances();
    if tags.len() != instances.len() {
        return Err(MetricsError::TagCount {
            expected: instances.len(),
            got: tags.len(),
        });
    }
    let mut rows: Vec<StageMetrics> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for t in tags {
        let t = t.as_ref();
        let i = *index.entry(t).or_insert_with(|| {
            rows.push(StageMetrics {
                stage: t.to_string(),
                gate_count: 0,
                garbage_count: 0,
                constant_count: 0,
            });
            rows.len() - 1
        });
        rows[i].gate_count += 1;
    }
    let stage_row = |instance: usize| index[tags[instance].as_ref()];
    for &w in circuit.garbage() {
        if let WireSource::GateOutput { instance, .. } = circuit.wire_source(w) {
            rows[stage_row(instance)].garbage_count += 1;
        }
    }
    for w in (0..circuit.wire_count()).map(crate::netlist::WireId::from_index) {
        if let (WireSource::Constant(_), Sink::GateInput { instance, .. }) =
            (circuit.wire_source(w), circuit.wire_sink(w))
        {
            rows[stage_row(instance)].constant_count += 1;
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::builtin_catalog;
    use crate::netlist::CircuitBuilder;

    fn fg_chain(len: usize) -> Circuit {
        let cat = builtin_catalog();
        let fg = cat.get("FG").unwrap();
        let mut b = CircuitBuilder::new(&["a", "b"]).unwrap();
        let mut w = b.inputs();
        for _ in 0..len {
            w = b.add_gate(fg, &w).unwrap();
        }
        b.mark_output(w[0], "p").unwrap();
        b.mark_output(w[1], "q").unwrap();
        b.seal().unwrap()
    }

    #[test]
    fn empty_circuit_is_all_zero() {
        let c = fg_chain(0);
        assert_eq!(
            analyze(&c, &CostTable::new()).unwrap(),
            MetricsReport::default()
        );
    }

    #[test]
    fn fg_chain_sums_costs() {
        let c = fg_chain(3);
        let costs = CostTable::uniform(["FG"], 1);
        let r = analyze(&c, &costs).unwrap();
        assert_eq!(r.quantum_cost, 3);
        assert_eq!(r.delay_levels, 3);
        assert_eq!(r.gate_count, 3);
    }

    #[test]
    fn missing_cost_is_an_error() {
        assert_eq!(
            analyze(&fg_chain(1), &CostTable::uniform(["TG"], 5)),
            Err(MetricsError::UnknownGateCost("FG".into()))
        );
    }

    #[test]
    fn single_gate_delay() {
        assert_eq!(delay(&fg_chain(1)), 1);
    }

    #[test]
    fn parallel_gates_in_one_stage() {
        let cat = builtin_catalog();
        let fg = cat.get("FG").unwrap();
        let mut b = CircuitBuilder::new(&["a", "b", "c", "d"]).unwrap();
        let i = b.inputs();
        let x = b.add_gate(fg, &i[..2]).unwrap();
        let y = b.add_gate(fg, &i[2..]).unwrap();
        b.mark_all_garbage(&x).unwrap();
        b.mark_all_garbage(&y).unwrap();
        let c = b.seal().unwrap();
        assert_eq!(
            delay_decomposition(&c, &["only", "only"]).unwrap(),
            [("only".to_string(), 1)]
        );
        // two independent stages have no pipeline order
        assert!(matches!(
            delay_decomposition(&c, &["x", "y"]),
            Err(MetricsError::StagesNotLinear(_))
        ));
    }

    #[test]
    fn interleaved_stages_are_rejected() {
        let c = fg_chain(3);
        assert!(matches!(
            delay_decomposition(&c, &["a", "b", "a"]),
            Err(MetricsError::StagesNotLinear(_))
        ));
        assert_eq!(
            delay_decomposition(&c, &["a", "a", "b"]).unwrap(),
            [("a".to_string(), 2), ("b".to_string(), 1)]
        );
        assert_eq!(
            delay_decomposition(&c, &["a"]),
            Err(MetricsError::TagCount {
                expected: 3,
                got: 1
            })
        );
    }

    #[test]
    fn untagged_instances_reported() {
        assert_eq!(
            recorded_stage_tags(&fg_chain(1)),
            Err(MetricsError::UntaggedInstance(0))
        );
    }

    #[test]
    fn kv_round_trip() {
        let r = MetricsReport {
            gate_count: 8,
            garbage_count: 10,
            constant_count: 6,
            quantum_cost: 42,
            delay_levels: 8,
        };
        assert_eq!(MetricsReport::from_kv(&r.to_kv()), Some(r));
        assert_eq!(MetricsReport::from_kv("gate_count=1"), None);
    }
}
