//! Line-oriented netlist format.
//!
//! ```text
//! # one statement per line, '#' starts a comment
//! INPUT a b cin
//! CONST z = 0
//! GATE HNG a b cin z -> p q sum carry
//! OUTPUT sum carry
//! GARBAGE p q
//! ```
//!
//! Every wire is declared exactly once (by `INPUT`, `CONST` or as a `GATE`
//! output) before it is used, so feedback cannot be written down. Primary
//! inputs are ordered by declaration, primary outputs and garbage by the
//! order in which they are marked. Output labels are the wire names.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gate::{Catalog, GateDef};
use crate::netlist::{Circuit, CircuitBuilder, NetlistError, Sink, Violation, WireId, WireSource};

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementKind {
    Input(Vec<Name>),
    Const {
        name: Name,
        value: bool,
    },
    Gate {
        gate: Name,
        inputs: Vec<Name>,
        outputs: Vec<Name>,
    },
    Output(Vec<Name>),
    Garbage(Vec<Name>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub kind: StatementKind,
    pub pos: Pos,
    /// Source text of the statement, comment stripped.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NetlistDocument {
    pub statements: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("wire {0:?} used before declaration")]
    UseBeforeDeclaration(String),
    #[error("unknown gate {0:?}")]
    UnknownGateName(String),
    #[error("wire {name:?} already declared at {first}")]
    DuplicateName { name: String, first: Pos },
    #[error("gate {gate} has arity {expected}, statement gives {got} wires")]
    ArityMismatch {
        gate: String,
        expected: usize,
        got: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {kind}")]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    FanOutViolation { wire: String },
    DanglingWire { wire: String },
    Other,
}

/// An elaboration problem tied to the statement that caused it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub statement: String,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (in `{}`)",
            self.pos, self.message, self.statement
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", .diagnostics.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
pub struct ElaborateError {
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Word(String),
    Arrow,
    Equals,
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<(Token, Pos)>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos {
            line: line_no,
            column: i + 1,
        };
        if c.is_whitespace() {
            i += 1;
        } else if c == '=' {
            tokens.push((Token::Equals, pos));
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            tokens.push((Token::Arrow, pos));
            i += 2;
        } else if is_word_char(c) {
            let start = i;
            while i < chars.len() && is_word_char(chars[i]) {
                i += 1;
            }
            tokens.push((Token::Word(chars[start..i].iter().collect()), pos));
        } else {
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::Syntax(format!("unexpected character {c:?}")),
            });
        }
    }
    Ok(tokens)
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '[' | ']')
}

fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
    ParseError {
        pos,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

fn to_name(tok: &(Token, Pos)) -> Result<Name, ParseError> {
    match &tok.0 {
        Token::Word(w) if w.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') => {
            Ok(Name {
                text: w.clone(),
                pos: tok.1,
            })
        }
        Token::Word(w) => Err(syntax(tok.1, format!("{w:?} is not a valid wire name"))),
        Token::Arrow => Err(syntax(tok.1, "unexpected `->`")),
        Token::Equals => Err(syntax(tok.1, "unexpected `=`")),
    }
}

fn names(tokens: &[(Token, Pos)], after: Pos, what: &str) -> Result<Vec<Name>, ParseError> {
    if tokens.is_empty() {
        return Err(syntax(
            after,
            format!("{what} needs at least one wire name"),
        ));
    }
    tokens.iter().map(to_name).collect()
}

fn end_of(line: &str, line_no: usize) -> Pos {
    Pos {
        line: line_no,
        column: line.trim_end().chars().count() + 1,
    }
}

/// Parses and checks declaration-before-use, wire-name uniqueness, gate
/// names and gate arities against `catalog`. Stops at the first error.
pub fn parse_netlist(text: &str, catalog: &Catalog) -> Result<NetlistDocument, ParseError> {
    let mut statements = Vec::new();
    let mut declared: HashMap<String, Pos> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(body, line_no)?;
        let Some(((keyword, kw_pos), rest)) = tokens.split_first() else {
            continue;
        };
        let eol = end_of(body, line_no);
        let Token::Word(keyword) = keyword else {
            return Err(syntax(*kw_pos, "expected a statement keyword"));
        };

        let kind = match keyword.as_str() {
            "INPUT" => {
                let list = names(rest, eol, "INPUT")?;
                list.iter().try_for_each(|n| declare(&mut declared, n))?;
                StatementKind::Input(list)
            }
            "CONST" => {
                let [name, (Token::Equals, _), (Token::Word(v), vpos)] = rest else {
                    return Err(syntax(
                        rest.first().map_or(eol, |t| t.1),
                        "expected `CONST <name> = 0|1`",
                    ));
                };
                let value = match v.as_str() {
                    "0" => false,
                    "1" => true,
                    _ => return Err(syntax(*vpos, format!("constant must be 0 or 1, got {v:?}"))),
                };
                let name = to_name(name)?;
                declare(&mut declared, &name)?;
                StatementKind::Const { name, value }
            }
            "GATE" => {
                let Some((gate_tok, wires)) = rest.split_first() else {
                    return Err(syntax(eol, "expected a gate name"));
                };
                let gate = to_name(gate_tok)?;
                let Some(arrow) = wires.iter().position(|t| t.0 == Token::Arrow) else {
                    return Err(syntax(eol, "expected `->` between gate inputs and outputs"));
                };
                let inputs = names(&wires[..arrow], wires[arrow].1, "gate input list")?;
                let outputs = names(&wires[arrow + 1..], eol, "gate output list")?;
                let def = catalog.get(&gate.text).ok_or_else(|| ParseError {
                    pos: gate.pos,
                    kind: ParseErrorKind::UnknownGateName(gate.text.clone()),
                })?;
                for list in [&inputs, &outputs] {
                    if list.len() != def.arity() {
                        return Err(ParseError {
                            pos: list[0].pos,
                            kind: ParseErrorKind::ArityMismatch {
                                gate: gate.text.clone(),
                                expected: def.arity(),
                                got: list.len(),
                            },
                        });
                    }
                }
                check_declared(&inputs, &declared)?;
                outputs.iter().try_for_each(|n| declare(&mut declared, n))?;
                StatementKind::Gate {
                    gate,
                    inputs,
                    outputs,
                }
            }
            "OUTPUT" => {
                let list = names(rest, eol, "OUTPUT")?;
                check_declared(&list, &declared)?;
                StatementKind::Output(list)
            }
            "GARBAGE" => {
                let list = names(rest, eol, "GARBAGE")?;
                check_declared(&list, &declared)?;
                StatementKind::Garbage(list)
            }
            other => return Err(syntax(*kw_pos, format!("unknown statement {other:?}"))),
        };
        statements.push(Statement {
            kind,
            pos: *kw_pos,
            text: body.trim().to_string(),
        });
    }
    Ok(NetlistDocument { statements })
}

fn declare(declared: &mut HashMap<String, Pos>, name: &Name) -> Result<(), ParseError> {
    if let Some(&first) = declared.get(&name.text) {
        return Err(ParseError {
            pos: name.pos,
            kind: ParseErrorKind::DuplicateName {
                name: name.text.clone(),
                first,
            },
        });
    }
    declared.insert(name.text.clone(), name.pos);
    Ok(())
}

fn check_declared(list: &[Name], declared: &HashMap<String, Pos>) -> Result<(), ParseError> {
    match list.iter().find(|n| !declared.contains_key(&n.text)) {
        Some(n) => Err(ParseError {
            pos: n.pos,
            kind: ParseErrorKind::UseBeforeDeclaration(n.text.clone()),
        }),
        None => Ok(()),
    }
}

/// Builds and seals the circuit a document describes.
pub fn elaborate(doc: &NetlistDocument, catalog: &Catalog) -> Result<Circuit, ElaborateError> {
    let diag = |stmt: &Statement, pos: Pos, err: &NetlistError| -> ElaborateError {
        let kind = match err {
            NetlistError::FanOutViolation { wire, .. } => {
                DiagnosticKind::FanOutViolation { wire: wire.clone() }
            }
            _ => DiagnosticKind::Other,
        };
        ElaborateError {
            diagnostics: vec![Diagnostic {
                pos,
                statement: stmt.text.clone(),
                kind,
                message: err.to_string(),
            }],
        }
    };

    let input_names: Vec<&Name> = doc
        .statements
        .iter()
        .flat_map(|s| match &s.kind {
            StatementKind::Input(list) => list.iter().collect(),
            _ => Vec::new(),
        })
        .collect();
    let labels: Vec<&str> = input_names.iter().map(|n| n.text.as_str()).collect();
    let mut b = CircuitBuilder::new(&labels).map_err(|e| ElaborateError {
        diagnostics: vec![Diagnostic {
            pos: Pos { line: 1, column: 1 },
            statement: String::new(),
            kind: DiagnosticKind::Other,
            message: e.to_string(),
        }],
    })?;

    // wire name -> (wire, declaring statement index, declaration position)
    let mut wires: HashMap<&str, WireId> = HashMap::new();
    let mut declared_at: HashMap<WireId, (usize, &Name)> = HashMap::new();
    let mut next_input = 0;
    let mut gates: HashMap<&str, Arc<GateDef>> = HashMap::new();

    for (si, stmt) in doc.statements.iter().enumerate() {
        let lookup = |n: &Name, wires: &HashMap<&str, WireId>| -> WireId {
            *wires.get(n.text.as_str()).expect("checked by the parser")
        };
        match &stmt.kind {
            StatementKind::Input(list) => {
                for n in list {
                    let w = b.input(next_input);
                    next_input += 1;
                    wires.insert(&n.text, w);
                    declared_at.insert(w, (si, n));
                }
            }
            StatementKind::Const { name, value } => {
                let w = b.add_constant(*value);
                wires.insert(&name.text, w);
                declared_at.insert(w, (si, name));
            }
            StatementKind::Gate {
                gate,
                inputs,
                outputs,
            } => {
                let def = match gates.get(gate.text.as_str()) {
                    Some(d) => Arc::clone(d),
                    None => {
                        let d = catalog
                            .get(&gate.text)
                            .cloned()
                            .ok_or_else(|| ElaborateError {
                                diagnostics: vec![Diagnostic {
                                    pos: gate.pos,
                                    statement: stmt.text.clone(),
                                    kind: DiagnosticKind::Other,
                                    message: format!("unknown gate {:?}", gate.text),
                                }],
                            })?;
                        gates.insert(&gate.text, Arc::clone(&d));
                        d
                    }
                };
                let ins: Vec<WireId> = inputs.iter().map(|n| lookup(n, &wires)).collect();
                let outs = b.add_gate(&def, &ins).map_err(|e| {
                    // point at the first repeated or already-consumed input
                    let pos = culprit(&b, inputs, &ins).unwrap_or(gate.pos);
                    diag(stmt, pos, &e)
                })?;
                for (n, w) in outputs.iter().zip(outs) {
                    wires.insert(&n.text, w);
                    declared_at.insert(w, (si, n));
                }
            }
            StatementKind::Output(list) => {
                for n in list {
                    b.mark_output(lookup(n, &wires), &n.text)
                        .map_err(|e| diag(stmt, n.pos, &e))?;
                }
            }
            StatementKind::Garbage(list) => {
                for n in list {
                    b.mark_garbage(lookup(n, &wires))
                        .map_err(|e| diag(stmt, n.pos, &e))?;
                }
            }
        }
    }

    b.seal().map_err(|e| {
        let NetlistError::ValidationFailed(violations) = &e else {
            return ElaborateError {
                diagnostics: vec![Diagnostic {
                    pos: Pos { line: 1, column: 1 },
                    statement: String::new(),
                    kind: DiagnosticKind::Other,
                    message: e.to_string(),
                }],
            };
        };
        let has_dangling = violations
            .iter()
            .any(|v| matches!(v, Violation::Dangling { .. }));
        let mut diagnostics: Vec<Diagnostic> = violations
            .iter()
            .filter_map(|v| match v {
                Violation::Dangling { wire, .. } => {
                    let (si, name) = declared_at[wire];
                    Some(Diagnostic {
                        pos: name.pos,
                        statement: doc.statements[si].text.clone(),
                        kind: DiagnosticKind::DanglingWire {
                            wire: name.text.clone(),
                        },
                        message: format!(
                            "dangling wire {:?}: never consumed, output, or marked garbage",
                            name.text
                        ),
                    })
                }
                // a consequence of the dangling wires already reported
                Violation::LineCount { .. } if has_dangling => None,
                other => Some(Diagnostic {
                    pos: Pos { line: 1, column: 1 },
                    statement: String::new(),
                    kind: DiagnosticKind::Other,
                    message: other.to_string(),
                }),
            })
            .collect();
        diagnostics.sort_by_key(|d| d.pos);
        ElaborateError { diagnostics }
    })
}

fn culprit(b: &CircuitBuilder, names: &[Name], wires: &[WireId]) -> Option<Pos> {
    let mut seen = HashSet::new();
    for (n, w) in names.iter().zip(wires) {
        if !seen.insert(*w) || b.is_consumed(*w) {
            return Some(n.pos);
        }
    }
    None
}

/// Convenience: [`parse_netlist`] then [`elaborate`].
pub fn load_netlist(text: &str, catalog: &Catalog) -> Result<Circuit, LoadError> {
    let doc = parse_netlist(text, catalog)?;
    Ok(elaborate(&doc, catalog)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Elaborate(#[from] ElaborateError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("output label {label:?} cannot name {wire}: the wire already has the name {name:?}")]
    LabelConflict {
        label: String,
        wire: String,
        name: String,
    },
    #[error("output label {0:?} collides with another wire name")]
    NameClash(String),
}

fn name_of(
    names: &mut [Option<String>],
    used: &mut HashSet<String>,
    w: WireId,
    prefix: &str,
) -> String {
    names[w.index()]
        .get_or_insert_with(|| {
            (0..)
                .map(|k| format!("{prefix}{k}"))
                .find(|n| used.insert(n.clone()))
                .expect("unbounded")
        })
        .clone()
}

/// Writes `circuit` in the netlist format. Stage tags are kept as comments.
pub fn write_netlist(circuit: &Circuit) -> Result<String, EmitError> {
    let mut names: Vec<Option<String>> = vec![None; circuit.wire_count()];
    let mut used: HashSet<String> = HashSet::new();

    for (i, label) in circuit.input_labels().iter().enumerate() {
        names[i] = Some(label.clone());
        used.insert(label.clone());
    }
    for (label, w) in circuit.outputs() {
        match &names[w.index()] {
            Some(existing) if existing == label => {}
            Some(existing) => {
                return Err(EmitError::LabelConflict {
                    label: label.clone(),
                    wire: circuit.describe_wire(*w),
                    name: existing.clone(),
                })
            }
            None => {
                if !used.insert(label.clone()) {
                    return Err(EmitError::NameClash(label.clone()));
                }
                names[w.index()] = Some(label.clone());
            }
        }
    }
    let mut out = String::new();
    out.push_str(&format!("INPUT {}\n", circuit.input_labels().join(" ")));

    let mut const_lines = Vec::new();
    for i in 0..circuit.wire_count() {
        let w = WireId::from_index(i);
        if let WireSource::Constant(k) = circuit.wire_source(w) {
            let n = name_of(&mut names, &mut used, w, "k");
            const_lines.push(format!("CONST {n} = {}\n", circuit.constants()[k] as u8));
        }
    }
    out.extend(const_lines);

    let mut stage: Option<&str> = None;
    for inst in circuit.instances() {
        if inst.stage() != stage && inst.stage().is_some() {
            out.push_str(&format!("# stage {}\n", inst.stage().unwrap_or_default()));
        }
        stage = inst.stage();
        let ins: Vec<String> = inst
            .inputs()
            .iter()
            .map(|&w| {
                names[w.index()]
                    .clone()
                    .expect("inputs are named before use")
            })
            .collect();
        let outs: Vec<String> = inst
            .outputs()
            .iter()
            .map(|&w| {
                let prefix = match circuit.wire_sink(w) {
                    Sink::Garbage(_) => "g",
                    _ => "w",
                };
                name_of(&mut names, &mut used, w, prefix)
            })
            .collect();
        out.push_str(&format!(
            "GATE {} {} -> {}\n",
            inst.gate().name(),
            ins.join(" "),
            outs.join(" ")
        ));
    }

    if !circuit.outputs().is_empty() {
        let labels: Vec<&str> = circuit.output_labels().collect();
        out.push_str(&format!("OUTPUT {}\n", labels.join(" ")));
    }
    if !circuit.garbage().is_empty() {
        let g: Vec<String> = circuit
            .garbage()
            .iter()
            .map(|w| names[w.index()].clone().expect("named"))
            .collect();
        out.push_str(&format!("GARBAGE {}\n", g.join(" ")));
    }
    Ok(out)
}
