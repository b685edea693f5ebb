//! Command-line front end: argument definitions and command handlers.
//!
//! Exit codes: 0 success, 1 a circuit does not implement its permutation,
//! 2 invalid input.

pub mod formats;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use revsynth::bounds::{bound_report, concrete_l_bound};
use revsynth::circuit::DEFAULT_MAX_N;
use revsynth::synthesis::{synthesize_detailed, ClearingMode};
use revsynth::verify::{bfs_synthesize, check_implements_with_limit, random_even_permutation};
use revsynth::{Circuit, GateWeights, GroupSize, Permutation, SynthError, SynthesisConfig};
use thiserror::Error;

pub use report::{format_rational, metrics_json};

/// Environment variable overriding the exhaustive-simulation ceiling.
pub const MAX_N_ENV: &str = "REVSYNTH_MAX_N";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0:#}")]
    Input(#[from] anyhow::Error),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "revsynth",
    version,
    about = "Synthesize and check reversible circuits over NOT, CNOT and 2-CNOT"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a circuit for a permutation file.
    Synth(SynthArgs),
    /// Check that a circuit implements a permutation.
    Verify(VerifyArgs),
    /// Run a circuit on one point, or print its whole permutation.
    Simulate(SimulateArgs),
    /// Print gate count, depth and weight of a circuit.
    Stats(StatsArgs),
    /// Evaluate the lower and upper complexity bounds.
    Bounds(BoundsArgs),
    /// Minimum-gate circuit by exhaustive search (n <= 3).
    Bfs(BfsArgs),
    /// Write a seeded random even permutation.
    Random(RandomArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Circ,
    Qasm,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    /// Weight of NOT and CNOT gates.
    #[arg(long, default_value = "1", value_parser = parse_rational)]
    pub wc: Rational64,
    /// Weight of 2-CNOT gates.
    #[arg(long, default_value = "5", value_parser = parse_rational)]
    pub wt: Rational64,
}

impl WeightArgs {
    fn weights(&self) -> anyhow::Result<GateWeights> {
        GateWeights::new(self.wc, self.wt).ok_or_else(|| anyhow!("gate weights must be positive"))
    }
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Permutation file.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Output file; the circuit goes to stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Group size: a power of two, or `auto`.
    #[arg(long, default_value = "auto", value_parser = parse_group_size)]
    pub k: GroupSize,
    /// Growth parameter used by automatic group sizing.
    #[arg(long, default_value = "2", value_parser = parse_rational)]
    pub phi: Rational64,
    /// Clear duplicate columns pairwise in logarithmic depth.
    #[arg(long)]
    pub tree: bool,
    /// Skip simulating the result.
    #[arg(long)]
    pub no_self_check: bool,
    #[arg(long, value_enum, default_value = "circ")]
    pub emit: Emit,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub weights: WeightArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(short, long)]
    pub circuit: PathBuf,
    #[arg(short, long)]
    pub perm: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(short, long)]
    pub circuit: PathBuf,
    /// Input point; without it the full table is printed.
    #[arg(short = 'x', long)]
    pub point: Option<u32>,
    /// Print the permutation in cycle form instead of a table.
    #[arg(long)]
    pub cycles: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(short, long)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub weights: WeightArgs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(short)]
    pub n: u64,
    /// Additional inputs.
    #[arg(short, default_value_t = 0)]
    pub q: u64,
    #[arg(long, default_value = "2", value_parser = parse_rational)]
    pub phi: Rational64,
    /// Group size for the budget line; chosen from n and phi by default.
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub weights: WeightArgs,
}

#[derive(Debug, Args)]
pub struct BfsArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "circ")]
    pub emit: Emit,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(short)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write a full table instead of cycles.
    #[arg(long)]
    pub table: bool,
}

fn parse_rational(s: &str) -> Result<Rational64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a rational number such as 2 or 3/2"))
}

fn parse_group_size(s: &str) -> Result<GroupSize, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(GroupSize::Auto);
    }
    s.parse()
        .map(GroupSize::Fixed)
        .map_err(|_| format!("`{s}` is neither `auto` nor an integer"))
}

/// Reads the simulation ceiling from the environment value, if set.
pub fn max_n_from_env(value: Option<&str>) -> anyhow::Result<u32> {
    match value {
        None => Ok(DEFAULT_MAX_N),
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| anyhow!("{MAX_N_ENV}={v} is not a line count")),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_perm(path: &Path) -> anyhow::Result<Permutation> {
    formats::parse_perm(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_circuit(path: &Path) -> anyhow::Result<Circuit> {
    formats::parse_circuit(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn render(c: &Circuit, emit: Emit) -> anyhow::Result<String> {
    Ok(match emit {
        Emit::Circ => formats::write_circuit(c)?,
        Emit::Qasm => formats::write_qasm(c)?,
    })
}

fn deliver(text: &str, path: Option<&Path>, out: &mut dyn Write) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => out.write_all(text.as_bytes()).context("writing output"),
    }
}

/// Runs one command. `out` receives primary output, `log` the report that
/// accompanies a circuit printed to `out`.
pub fn run(cli: Cli, max_n: u32, out: &mut dyn Write, log: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Synth(a) => synth(a, max_n, out, log),
        Command::Verify(a) => verify(a, max_n, out),
        Command::Simulate(a) => simulate(a, max_n, out),
        Command::Stats(a) => stats(a, out),
        Command::Bounds(a) => bounds(a, out),
        Command::Bfs(a) => bfs(a, out, log),
        Command::Random(a) => random(a, out),
    }
}

fn synth(
    a: SynthArgs,
    max_n: u32,
    out: &mut dyn Write,
    log: &mut dyn Write,
) -> Result<(), CliError> {
    let h = read_perm(&a.input)?;
    let weights = a.weights.weights()?;
    let cfg = SynthesisConfig {
        k: a.k,
        phi: a.phi,
        max_n,
        self_check: !a.no_self_check,
        clearing: if a.tree {
            ClearingMode::Tree
        } else {
            ClearingMode::Sequential
        },
    };
    let s = synthesize_detailed(&h, &cfg).map_err(|e| match e {
        SynthError::SelfCheck { .. } | SynthError::Invariant(_) => {
            CliError::Verification(e.to_string())
        }
        e => CliError::Input(anyhow!(e)),
    })?;
    let metrics = s.circuit.metrics(&weights).map_err(anyhow::Error::from)?;
    let n = h.n();
    let k = match s.k {
        Some(k) => Some(k),
        None if n >= 4 => Some(cfg.resolve_k(n).map_err(anyhow::Error::from)?),
        None => None,
    };
    let budget = k
        .map(|k| concrete_l_bound(n as u64, k as u64))
        .transpose()
        .map_err(anyhow::Error::from)?;

    let report = if a.json {
        let mut v = metrics_json(&metrics);
        v["k"] = k.into();
        v["groups"] = s.groups.into();
        v["residual_groups"] = s.residual_groups.into();
        v["budget_l"] = budget.as_ref().map(report::big_json).unwrap_or_default();
        format!("{v}\n")
    } else {
        let mut r = format!("{}\n", report::metrics_line(&metrics));
        match (k, &budget) {
            (Some(k), Some(b)) => {
                r += &format!(
                    "groups={} residual_groups={} k={k}\nbudget: L <= {b} (k={k})\n",
                    s.groups, s.residual_groups
                )
            }
            _ => r += "budget: none (n <= 3 uses exhaustive search)\n",
        }
        r
    };
    let text = render(&s.circuit, a.emit)?;
    deliver(&text, a.output.as_deref(), out)?;
    let dest: &mut dyn Write = if a.output.is_some() { out } else { log };
    dest.write_all(report.as_bytes())
        .map_err(anyhow::Error::from)?;
    Ok(())
}

fn verify(a: VerifyArgs, max_n: u32, out: &mut dyn Write) -> Result<(), CliError> {
    let c = read_circuit(&a.circuit)?;
    let h = read_perm(&a.perm)?;
    let check = check_implements_with_limit(&c, &h, max_n).map_err(anyhow::Error::from)?;
    if let Some(cx) = check.counterexample {
        return Err(CliError::Verification(format!(
            "not equivalent: input {} maps to {}, expected {}",
            cx.point, cx.got, cx.expected
        )));
    }
    let line = if check.exhaustive {
        format!("equivalent: all {} points agree\n", check.points_checked)
    } else {
        format!(
            "no counterexample among {} sampled points (sampled, not a proof)\n",
            check.points_checked
        )
    };
    out.write_all(line.as_bytes())
        .map_err(anyhow::Error::from)?;
    Ok(())
}

fn simulate(a: SimulateArgs, max_n: u32, out: &mut dyn Write) -> Result<(), CliError> {
    let c = read_circuit(&a.circuit)?;
    let text = match a.point {
        Some(x) => {
            if c.n() < 32 && x >> c.n() != 0 {
                return Err(anyhow!("point {x} does not fit on {} lines", c.n()).into());
            }
            format!("{}\n", c.apply(x))
        }
        None => {
            let p = c.simulate_with_limit(max_n).map_err(anyhow::Error::from)?;
            if a.cycles {
                formats::write_perm(&p)
            } else {
                formats::write_perm_table(&p)
            }
        }
    };
    out.write_all(text.as_bytes())
        .map_err(anyhow::Error::from)?;
    Ok(())
}

fn stats(a: StatsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let c = read_circuit(&a.circuit)?;
    let m = c
        .metrics(&a.weights.weights()?)
        .map_err(anyhow::Error::from)?;
    let text = if a.json {
        format!("{}\n", metrics_json(&m))
    } else {
        let cc = c.class_counts();
        format!(
            "{}\nNOT={} CNOT={} 2-CNOT={}\n",
            report::metrics_line(&m),
            cc.not,
            cc.cnot,
            cc.toffoli
        )
    };
    out.write_all(text.as_bytes())
        .map_err(anyhow::Error::from)?;
    Ok(())
}

fn bounds(a: BoundsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.k.is_some() && a.q != 0 {
        return Err(anyhow!("--k only applies with -q 0").into());
    }
    let r =
        bound_report(a.n, a.q, a.phi, a.weights.weights()?, a.k).map_err(anyhow::Error::from)?;
    let text = if a.json {
        format!("{}\n", report::bounds_json(&r))
    } else {
        report::bounds_text(&r)
    };
    out.write_all(text.as_bytes())
        .map_err(anyhow::Error::from)?;
    Ok(())
}

fn bfs(a: BfsArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<(), CliError> {
    let h = read_perm(&a.input)?;
    let c = bfs_synthesize(&h).map_err(anyhow::Error::from)?;
    deliver(&render(&c, a.emit)?, a.output.as_deref(), out)?;
    let dest: &mut dyn Write = if a.output.is_some() { out } else { log };
    writeln!(dest, "L={} (optimal)", c.len()).map_err(anyhow::Error::from)?;
    Ok(())
}

fn random(a: RandomArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let p = random_even_permutation(a.n, a.seed).map_err(anyhow::Error::from)?;
    let text = if a.table {
        formats::write_perm_table(&p)
    } else {
        formats::write_perm(&p)
    };
    deliver(&text, a.output.as_deref(), out)?;
    Ok(())
}

/// Parses arguments and runs, returning the process exit code.
pub fn main_with(args: impl IntoIterator<Item = String>, env_max_n: Option<&str>) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = max_n_from_env(env_max_n)
        .map_err(CliError::from)
        .and_then(|max_n| {
            run(
                cli,
                max_n,
                &mut std::io::stdout().lock(),
                &mut std::io::stderr().lock(),
            )
        });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
