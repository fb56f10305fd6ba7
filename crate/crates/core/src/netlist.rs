//! Construction, validation and simulation of reversible circuits.
//!
//! Circuits are assembled with a [`CircuitBuilder`]. A gate can only take
//! wires that already exist, so feedback cannot be expressed, and every wire
//! can be consumed by exactly one sink: a gate input pin, a labelled primary
//! output, or a garbage mark. [`CircuitBuilder::seal`] checks that nothing is
//! left dangling and returns an immutable [`Circuit`].

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::bits::BitWord;
use crate::gate::GateDef;

/// Largest primary-input count accepted by [`Circuit::mapping`].
pub const MAX_ENUMERATION_INPUTS: usize = 20;

/// Handle to a wire inside one builder or circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WireId(usize);

impl WireId {
    pub fn index(self) -> usize {
        self.0
    }

    pub(crate) fn from_index(index: usize) -> Self {
        WireId(index)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WireSource {
    Input(usize),
    Constant(usize),
    GateOutput { instance: usize, pin: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sink {
    GateInput { instance: usize, pin: usize },
    Output(usize),
    Garbage(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Dangling {
        wire: WireId,
        source: String,
    },
    LineCount {
        inputs: usize,
        constants: usize,
        outputs: usize,
        garbage: usize,
    },
    Cycle {
        instances: Vec<usize>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Dangling { source, .. } => write!(
                f,
                "dangling wire: {source} is neither consumed, output, nor garbage"
            ),
            Violation::LineCount {
                inputs,
                constants,
                outputs,
                garbage,
            } => write!(
                f,
                "line count not conserved: {inputs} inputs + {constants} constants != \
                 {outputs} outputs + {garbage} garbage"
            ),
            Violation::Cycle { instances } => {
                write!(f, "instances {instances:?} form a feedback loop")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("a circuit needs at least one primary input")]
    NoInputs,
    #[error("gate {gate} takes {expected} inputs, got {got}")]
    ArityMismatch {
        gate: String,
        expected: usize,
        got: usize,
    },
    #[error("fan-out violation: {wire} is already consumed by {sink}")]
    FanOutViolation { wire: String, sink: String },
    #[error("wire {0:?} does not belong to this circuit")]
    UnknownWire(WireId),
    #[error("expected {expected} input bits, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("validation failed: {}", join_violations(.0))]
    ValidationFailed(Vec<Violation>),
    #[error("{inputs} primary inputs exceed the enumeration limit of {max}")]
    TooWide { inputs: usize, max: usize },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// One placed gate.
#[derive(Debug, Clone)]
pub struct Instance {
    gate: Arc<GateDef>,
    inputs: Vec<WireId>,
    outputs: Vec<WireId>,
    stage: Option<String>,
}

impl Instance {
    pub fn gate(&self) -> &Arc<GateDef> {
        &self.gate
    }

    pub fn inputs(&self) -> &[WireId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[WireId] {
        &self.outputs
    }

    pub fn stage(&self) -> Option<&str> {
        self.stage.as_deref()
    }
}

#[derive(Debug, Clone)]
struct Wire {
    source: WireSource,
    sink: Option<Sink>,
}

/// Incremental, fan-out-checked circuit construction.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    input_labels: Vec<String>,
    constants: Vec<bool>,
    wires: Vec<Wire>,
    instances: Vec<Instance>,
    outputs: Vec<(String, WireId)>,
    garbage: Vec<WireId>,
    stage: Option<String>,
}

impl CircuitBuilder {
    pub fn new<S: AsRef<str>>(input_labels: &[S]) -> Result<Self, NetlistError> {
        if input_labels.is_empty() {
            return Err(NetlistError::NoInputs);
        }
        let mut seen = HashSet::new();
        for label in input_labels {
            if !seen.insert(label.as_ref()) {
                return Err(NetlistError::DuplicateLabel(label.as_ref().to_string()));
            }
        }
        let wires = (0..input_labels.len())
            .map(|i| Wire {
                source: WireSource::Input(i),
                sink: None,
            })
            .collect();
        Ok(Self {
            input_labels: input_labels
                .iter()
                .map(|s| s.as_ref().to_string())
                .collect(),
            constants: Vec::new(),
            wires,
            instances: Vec::new(),
            outputs: Vec::new(),
            garbage: Vec::new(),
            stage: None,
        })
    }

    /// Wire carrying primary input `index`.
    pub fn input(&self, index: usize) -> WireId {
        assert!(
            index < self.input_labels.len(),
            "input {index} out of range"
        );
        WireId(index)
    }

    pub fn inputs(&self) -> Vec<WireId> {
        (0..self.input_labels.len()).map(WireId).collect()
    }

    pub fn input_by_label(&self, label: &str) -> Option<WireId> {
        self.input_labels
            .iter()
            .position(|l| l == label)
            .map(WireId)
    }

    pub fn constant_count(&self) -> usize {
        self.constants.len()
    }

    pub fn is_consumed(&self, w: WireId) -> bool {
        self.wires.get(w.0).is_some_and(|w| w.sink.is_some())
    }

    /// Instances added from now on are tagged with `stage`.
    pub fn set_stage(&mut self, stage: Option<&str>) {
        self.stage = stage.map(str::to_string);
    }

    pub fn add_constant(&mut self, value: bool) -> WireId {
        let id = self.push_wire(WireSource::Constant(self.constants.len()));
        self.constants.push(value);
        id
    }

    /// Places `gate` on `inputs` and returns its fresh output wires. Nothing
    /// is consumed if any check fails.
    pub fn add_gate(
        &mut self,
        gate: &Arc<GateDef>,
        inputs: &[WireId],
    ) -> Result<Vec<WireId>, NetlistError> {
        if inputs.len() != gate.arity() {
            return Err(NetlistError::ArityMismatch {
                gate: gate.name().to_string(),
                expected: gate.arity(),
                got: inputs.len(),
            });
        }
        let instance = self.instances.len();
        for (pin, &w) in inputs.iter().enumerate() {
            self.check_free(w)?;
            if let Some(first) = inputs[..pin].iter().position(|&p| p == w) {
                return Err(NetlistError::FanOutViolation {
                    wire: self.describe(w),
                    sink: describe_sink(
                        Sink::GateInput {
                            instance,
                            pin: first,
                        },
                        &self.instances,
                        Some(gate.name()),
                    ),
                });
            }
        }
        for (pin, &w) in inputs.iter().enumerate() {
            self.wires[w.0].sink = Some(Sink::GateInput { instance, pin });
        }
        let outputs: Vec<WireId> = (0..gate.arity())
            .map(|pin| self.push_wire(WireSource::GateOutput { instance, pin }))
            .collect();
        self.instances.push(Instance {
            gate: Arc::clone(gate),
            inputs: inputs.to_vec(),
            outputs: outputs.clone(),
            stage: self.stage.clone(),
        });
        Ok(outputs)
    }

    pub fn mark_output(&mut self, wire: WireId, label: &str) -> Result<(), NetlistError> {
        self.check_free(wire)?;
        if self.outputs.iter().any(|(l, _)| l == label) {
            return Err(NetlistError::DuplicateLabel(label.to_string()));
        }
        self.wires[wire.0].sink = Some(Sink::Output(self.outputs.len()));
        self.outputs.push((label.to_string(), wire));
        Ok(())
    }

    pub fn mark_garbage(&mut self, wire: WireId) -> Result<(), NetlistError> {
        self.check_free(wire)?;
        self.wires[wire.0].sink = Some(Sink::Garbage(self.garbage.len()));
        self.garbage.push(wire);
        Ok(())
    }

    pub fn mark_all_garbage(&mut self, wires: &[WireId]) -> Result<(), NetlistError> {
        wires.iter().try_for_each(|&w| self.mark_garbage(w))
    }

    /// Validates every structural invariant and freezes the circuit.
    pub fn seal(self) -> Result<Circuit, NetlistError> {
        let mut violations = Vec::new();
        for (i, w) in self.wires.iter().enumerate() {
            if w.sink.is_none() {
                violations.push(Violation::Dangling {
                    wire: WireId(i),
                    source: describe_source(w.source, &self.input_labels, &self.instances),
                });
            }
        }
        let (inputs, constants) = (self.input_labels.len(), self.constants.len());
        let (outputs, garbage) = (self.outputs.len(), self.garbage.len());
        if inputs + constants != outputs + garbage {
            violations.push(Violation::LineCount {
                inputs,
                constants,
                outputs,
                garbage,
            });
        }
        let order = match topological_order(&self.instances, &self.wires) {
            Ok(order) => order,
            Err(instances) => {
                violations.push(Violation::Cycle { instances });
                Vec::new()
            }
        };
        if !violations.is_empty() {
            return Err(NetlistError::ValidationFailed(violations));
        }
        Ok(Circuit {
            input_labels: self.input_labels,
            constants: self.constants,
            wires: self
                .wires
                .into_iter()
                .map(|w| (w.source, w.sink.expect("checked above")))
                .collect(),
            instances: self.instances,
            outputs: self.outputs,
            garbage: self.garbage,
            order,
        })
    }

    fn push_wire(&mut self, source: WireSource) -> WireId {
        self.wires.push(Wire { source, sink: None });
        WireId(self.wires.len() - 1)
    }

    fn check_free(&self, w: WireId) -> Result<(), NetlistError> {
        let wire = self.wires.get(w.0).ok_or(NetlistError::UnknownWire(w))?;
        match wire.sink {
            None => Ok(()),
            Some(sink) => Err(NetlistError::FanOutViolation {
                wire: self.describe(w),
                sink: describe_sink(sink, &self.instances, None),
            }),
        }
    }

    fn describe(&self, w: WireId) -> String {
        describe_source(self.wires[w.0].source, &self.input_labels, &self.instances)
    }
}

const PIN_NAMES: &[u8] = b"PQRSTUVWXYZ";

fn pin_name(prefix: &[u8], pin: usize) -> String {
    match prefix.get(pin) {
        Some(&c) => (c as char).to_string(),
        None => format!("#{pin}"),
    }
}

fn describe_source(src: WireSource, labels: &[String], instances: &[Instance]) -> String {
    match src {
        WireSource::Input(i) => format!("input {:?}", labels[i]),
        WireSource::Constant(i) => format!("constant #{i}"),
        WireSource::GateOutput { instance, pin } => format!(
            "output {} of instance {instance} ({})",
            pin_name(PIN_NAMES, pin),
            instances[instance].gate.name()
        ),
    }
}

fn describe_sink(sink: Sink, instances: &[Instance], pending: Option<&str>) -> String {
    match sink {
        Sink::GateInput { instance, pin } => {
            let name = instances
                .get(instance)
                .map(|i| i.gate.name())
                .or(pending)
                .unwrap_or("?");
            format!(
                "input {} of instance {instance} ({name})",
                pin_name(b"ABCDEFGHIJKLMNOP", pin)
            )
        }
        Sink::Output(i) => format!("primary output #{i}"),
        Sink::Garbage(i) => format!("garbage mark #{i}"),
    }
}

/// Kahn's algorithm over instance dependencies. Returns the instances left
/// unordered when a cycle exists.
fn topological_order(instances: &[Instance], wires: &[Wire]) -> Result<Vec<usize>, Vec<usize>> {
    let n = instances.len();
    let mut indegree = vec![0usize; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, inst) in instances.iter().enumerate() {
        for w in &inst.inputs {
            if let WireSource::GateOutput { instance, .. } = wires[w.0].source {
                succ[instance].push(i);
                indegree[i] += 1;
            }
        }
    }
    let mut ready: Vec<usize> = (0..n).rev().filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop() {
        order.push(i);
        for &s in &succ[i] {
            indegree[s] -= 1;
            if indegree[s] == 0 {
                ready.push(s);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).filter(|&i| indegree[i] > 0).collect())
    }
}

/// A sealed, immutable reversible circuit.
#[derive(Debug, Clone)]
pub struct Circuit {
    input_labels: Vec<String>,
    constants: Vec<bool>,
    wires: Vec<(WireSource, Sink)>,
    instances: Vec<Instance>,
    outputs: Vec<(String, WireId)>,
    garbage: Vec<WireId>,
    order: Vec<usize>,
}

/// Output and garbage values from one evaluation.
pub type Evaluation = (BitWord, BitWord);

impl Circuit {
    pub fn input_labels(&self) -> &[String] {
        &self.input_labels
    }

    pub fn input_count(&self) -> usize {
        self.input_labels.len()
    }

    pub fn constants(&self) -> &[bool] {
        &self.constants
    }

    pub fn constant_count(&self) -> usize {
        self.constants.len()
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn gate_count(&self) -> usize {
        self.instances.len()
    }

    /// Labelled primary outputs in declaration order.
    pub fn outputs(&self) -> &[(String, WireId)] {
        &self.outputs
    }

    pub fn output_labels(&self) -> impl Iterator<Item = &str> {
        self.outputs.iter().map(|(l, _)| l.as_str())
    }

    pub fn garbage(&self) -> &[WireId] {
        &self.garbage
    }

    pub fn garbage_count(&self) -> usize {
        self.garbage.len()
    }

    pub fn wire_count(&self) -> usize {
        self.wires.len()
    }

    pub fn wire_source(&self, w: WireId) -> WireSource {
        self.wires[w.0].0
    }

    pub fn wire_sink(&self, w: WireId) -> Sink {
        self.wires[w.0].1
    }

    /// Instance indices in a valid evaluation order.
    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    /// Human-readable description of a wire's driver.
    pub fn describe_wire(&self, w: WireId) -> String {
        describe_source(self.wires[w.0].0, &self.input_labels, &self.instances)
    }

    /// Evaluates every wire for the given primary inputs into `values`.
    pub fn evaluate_into(&self, inputs: &[bool], values: &mut Vec<bool>) {
        debug_assert_eq!(inputs.len(), self.input_labels.len());
        values.clear();
        values.resize(self.wires.len(), false);
        for (i, &(src, _)) in self.wires.iter().enumerate() {
            match src {
                WireSource::Input(k) => values[i] = inputs[k],
                WireSource::Constant(k) => values[i] = self.constants[k],
                WireSource::GateOutput { .. } => {}
            }
        }
        for &idx in &self.order {
            let inst = &self.instances[idx];
            let word = inst
                .inputs
                .iter()
                .fold(0u32, |acc, w| (acc << 1) | values[w.0] as u32);
            let out = inst.gate.apply_word(word);
            let n = inst.outputs.len();
            for (k, w) in inst.outputs.iter().enumerate() {
                values[w.0] = (out >> (n - 1 - k)) & 1 == 1;
            }
        }
    }

    pub fn simulate(&self, inputs: &BitWord) -> Result<Evaluation, NetlistError> {
        if inputs.width() != self.input_count() {
            return Err(NetlistError::WidthMismatch {
                expected: self.input_count(),
                got: inputs.width(),
            });
        }
        let mut values = Vec::new();
        self.evaluate_into(inputs.bits(), &mut values);
        Ok(self.read_out(&values))
    }

    fn read_out(&self, values: &[bool]) -> Evaluation {
        let outs = self.outputs.iter().map(|(_, w)| values[w.0]).collect();
        let garbage = self.garbage.iter().map(|w| values[w.0]).collect();
        (BitWord::new(outs), BitWord::new(garbage))
    }

    /// Exhaustive `(outputs, garbage)` for each primary-input word, indexed
    /// by the packed (MSB-first) input value.
    pub fn mapping(&self) -> Result<Vec<Evaluation>, NetlistError> {
        let k = self.input_count();
        if k > MAX_ENUMERATION_INPUTS {
            return Err(NetlistError::TooWide {
                inputs: k,
                max: MAX_ENUMERATION_INPUTS,
            });
        }
        Ok((0..1u64 << k)
            .into_par_iter()
            .map_init(
                || (Vec::new(), Vec::new()),
                |(values, inputs), word| {
                    inputs.clear();
                    inputs.extend((0..k).map(|i| (word >> (k - 1 - i)) & 1 == 1));
                    self.evaluate_into(inputs, values);
                    self.read_out(values)
                },
            )
            .collect())
    }
}
