//! The `revbcd` command-line front end.
//!
//! Exit codes: 0 success, 1 verification or validation failure, 2 parse
//! error, 3 usage error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bits::BitWord;
use crate::designs::{
    build_bcd_adder_n, recompute_reference_row, reference_table, verify_bcd_adder, PROPOSED_LABEL,
};
use crate::gate::{builtin_catalog, expr::var_name, Catalog, CostTable};
use crate::metrics::{analyze, delay_decomposition, recorded_stage_tags};
use crate::netlist::{Circuit, MAX_ENUMERATION_INPUTS};
use crate::text::{elaborate, parse_netlist, write_netlist};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Largest digit count `bcd verify` will enumerate.
pub const MAX_VERIFY_DIGITS: usize = 4;

#[derive(Debug, Parser)]
#[command(
    name = "revbcd",
    version,
    about = "Reversible logic netlists and the reversible BCD adder"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the built-in gates with their switching functions
    Gates,
    /// Parse and validate a netlist
    Check { file: PathBuf },
    /// Simulate a netlist on one input word (MSB first, INPUT order)
    Sim {
        file: PathBuf,
        #[arg(long = "in", value_name = "BITSTRING")]
        input: String,
    },
    /// Print the exhaustive input/output mapping of a netlist
    Truth { file: PathBuf },
    /// Print gate count, garbage, constants, quantum cost and delay
    Metrics {
        file: PathBuf,
        #[arg(long, value_name = "COSTFILE")]
        costs: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Built-in reversible BCD adder
    Bcd {
        #[command(subcommand)]
        command: BcdCommand,
    },
}

#[derive(Debug, Subcommand)]
enum BcdCommand {
    /// Emit the N-digit adder as a netlist
    Build {
        #[arg(long, default_value_t = 1)]
        digits: usize,
        #[arg(short = 'o', long = "output", value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Check the N-digit adder against decimal addition on every valid input
    Verify {
        #[arg(long, default_value_t = 1)]
        digits: usize,
    },
    /// Print the published comparison table with a recomputed row
    Table {
        #[arg(long, value_name = "COSTFILE")]
        costs: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

enum CliError {
    Usage(String),
    Parse(String),
    Failure(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Parse(m) | CliError::Failure(m) => m,
        }
    }
}

type CmdResult = Result<i32, CliError>;

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let mut buf = String::new();
    let result = dispatch(cli.command, &mut buf);
    let _ = out.write_all(buf.as_bytes());
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(command: Command, out: &mut String) -> CmdResult {
    let catalog = builtin_catalog();
    match command {
        Command::Gates => cmd_gates(&catalog, out),
        Command::Check { file } => {
            let c = load(&file, &catalog)?;
            writeln!(
                out,
                "ok: {} inputs, {} constants, {} gates, {} outputs, {} garbage",
                c.input_count(),
                c.constant_count(),
                c.gate_count(),
                c.outputs().len(),
                c.garbage_count()
            )
            .ok();
            Ok(EXIT_OK)
        }
        Command::Sim { file, input } => cmd_sim(&load(&file, &catalog)?, &input, out),
        Command::Truth { file } => cmd_truth(&load(&file, &catalog)?, out),
        Command::Metrics {
            file,
            costs,
            format,
        } => {
            let c = load(&file, &catalog)?;
            let costs = load_costs(costs.as_deref())?;
            let report = analyze(&c, &costs).map_err(|e| CliError::Failure(e.to_string()))?;
            match format {
                Format::Text => writeln!(out, "{report}").ok(),
                Format::Kv => write!(out, "{}", report.to_kv()).ok(),
            };
            Ok(EXIT_OK)
        }
        Command::Bcd { command } => match command {
            BcdCommand::Build { digits, output } => cmd_bcd_build(digits, output.as_deref(), out),
            BcdCommand::Verify { digits } => cmd_bcd_verify(digits, out),
            BcdCommand::Table { costs } => cmd_bcd_table(costs.as_deref(), out),
        },
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path, catalog: &Catalog) -> Result<Circuit, CliError> {
    let text = read(path)?;
    let doc = parse_netlist(&text, catalog)
        .map_err(|e| CliError::Parse(format!("{}:{e}", path.display())))?;
    elaborate(&doc, catalog).map_err(|e| {
        let lines: Vec<String> = e
            .diagnostics
            .iter()
            .map(|d| format!("{}:{d}", path.display()))
            .collect();
        CliError::Failure(lines.join("\n"))
    })
}

fn load_costs(path: Option<&Path>) -> Result<CostTable, CliError> {
    match path {
        None => Ok(CostTable::builtin_default()),
        Some(p) => read(p)?
            .parse()
            .map_err(|e| CliError::Parse(format!("{}: {e}", p.display()))),
    }
}

fn cmd_gates(catalog: &Catalog, out: &mut String) -> CmdResult {
    for g in catalog.iter() {
        let n = g.arity();
        let ins: Vec<String> = (0..n).map(|i| var_name(i).to_string()).collect();
        let outs: Vec<String> = (0..n)
            .map(|i| (b'P' + i as u8) as char)
            .map(String::from)
            .collect();
        let funcs = match g.functions() {
            Some(fs) => fs
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", "),
            None => "(table only)".to_string(),
        };
        writeln!(
            out,
            "{:<4} {n}x{n}  ({}) -> ({}) = ({funcs})",
            g.name(),
            ins.join(", "),
            outs.join(", ")
        )
        .ok();
    }
    Ok(EXIT_OK)
}

fn cmd_sim(c: &Circuit, input: &str, out: &mut String) -> CmdResult {
    let word: BitWord = input
        .parse()
        .map_err(|e| CliError::Usage(format!("--in: {e}")))?;
    if word.width() != c.input_count() {
        return Err(CliError::Usage(format!(
            "--in has {} bits but the netlist has {} inputs ({})",
            word.width(),
            c.input_count(),
            c.input_labels().join(" ")
        )));
    }
    let (outputs, garbage) = c
        .simulate(&word)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let named: Vec<String> = c
        .output_labels()
        .zip(outputs.bits())
        .map(|(l, &b)| format!("{l}={}", b as u8))
        .collect();
    writeln!(out, "outputs {outputs}").ok();
    writeln!(out, "  {}", named.join(" ")).ok();
    writeln!(out, "garbage {garbage}").ok();
    Ok(EXIT_OK)
}

fn cmd_truth(c: &Circuit, out: &mut String) -> CmdResult {
    if c.input_count() > MAX_ENUMERATION_INPUTS {
        return Err(CliError::Usage(format!(
            "{} inputs exceed the enumeration limit of {MAX_ENUMERATION_INPUTS}",
            c.input_count()
        )));
    }
    let map = c.mapping().map_err(|e| CliError::Usage(e.to_string()))?;
    let k = c.input_count();
    writeln!(
        out,
        "# {} | {} | garbage",
        c.input_labels().join(" "),
        c.output_labels().collect::<Vec<_>>().join(" ")
    )
    .ok();
    for (word, (o, g)) in map.iter().enumerate() {
        let input = BitWord::from_u64(word as u64, k).expect("fits");
        writeln!(out, "{input} | {o} | {g}").ok();
    }
    Ok(EXIT_OK)
}

fn bcd_circuit(digits: usize) -> Result<Circuit, CliError> {
    build_bcd_adder_n(digits).map_err(|e| CliError::Usage(e.to_string()))
}

fn cmd_bcd_build(digits: usize, output: Option<&Path>, out: &mut String) -> CmdResult {
    let c = bcd_circuit(digits)?;
    let mut text = format!("# {digits}-digit reversible BCD adder\n");
    text.push_str(&write_netlist(&c).map_err(|e| CliError::Failure(e.to_string()))?);
    match output {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            writeln!(out, "wrote {}", path.display()).ok();
        }
        None => out.push_str(&text),
    }
    Ok(EXIT_OK)
}

fn cmd_bcd_verify(digits: usize, out: &mut String) -> CmdResult {
    if !(1..=MAX_VERIFY_DIGITS).contains(&digits) {
        return Err(CliError::Usage(format!(
            "--digits must be between 1 and {MAX_VERIFY_DIGITS}"
        )));
    }
    let c = bcd_circuit(digits)?;
    let report = verify_bcd_adder(&c, digits).map_err(|e| CliError::Failure(e.to_string()))?;
    const SHOWN: usize = 20;
    for f in report.failures.iter().take(SHOWN) {
        writeln!(
            out,
            "FAIL a={} b={} cin={}: expected cout={} sum={:0width$}, got {}",
            f.a,
            f.b,
            f.cin as u8,
            f.expected.0 as u8,
            f.expected.1,
            f.got,
            width = digits
        )
        .ok();
    }
    if report.failures.len() > SHOWN {
        writeln!(out, "... {} more failures", report.failures.len() - SHOWN).ok();
    }
    writeln!(out, "{}/{} cases pass", report.passed(), report.cases).ok();
    Ok(if report.is_success() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

fn cmd_bcd_table(costs: Option<&Path>, out: &mut String) -> CmdResult {
    let costs = load_costs(costs)?;
    let c = bcd_circuit(1)?;
    let recomputed = recompute_reference_row(&c, "Recomputed (built-in design)")
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let report = analyze(&c, &costs).map_err(|e| CliError::Failure(e.to_string()))?;
    let tags = recorded_stage_tags(&c).map_err(|e| CliError::Failure(e.to_string()))?;
    let stages = delay_decomposition(&c, &tags).map_err(|e| CliError::Failure(e.to_string()))?;

    let rows = reference_table();
    writeln!(out, "{}", crate::designs::ReferenceRow::HEADER).ok();
    for r in &rows {
        writeln!(out, "{r}").ok();
    }
    writeln!(out, "{recomputed}").ok();
    writeln!(out).ok();

    let terms: Vec<String> = stages.iter().map(|(s, d)| format!("{s} {d}")).collect();
    writeln!(
        out,
        "delay: {} = {}",
        terms.join(" + "),
        report.delay_levels
    )
    .ok();
    writeln!(
        out,
        "quantum cost (configured per-gate costs): {}",
        report.quantum_cost
    )
    .ok();

    let proposed = rows
        .iter()
        .find(|r| r.design_label == PROPOSED_LABEL)
        .expect("published row present");
    let mismatches = proposed.mismatches(&recomputed);
    if mismatches.is_empty() {
        writeln!(out, "{PROPOSED_LABEL}: matches recomputation").ok();
        Ok(EXIT_OK)
    } else {
        writeln!(
            out,
            "{PROPOSED_LABEL}: MISMATCH in {}",
            mismatches.join(", ")
        )
        .ok();
        Ok(EXIT_FAILURE)
    }
}
