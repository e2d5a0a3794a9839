//! The `lepkit` command line.
//!
//! Exit codes for `distinguish`: 0 likely equivalent, 1 not equivalent,
//! 2 inconclusive. Any error exits with 3.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::field::{field_for_q, make_field};
use crate::harness::{format_table2, run_experiment, table2, ExperimentParams, ExperimentReport};
use crate::instances::{equivalent_pair, random_pair, LepInstance};
use crate::reduction::reduce_instance;
use crate::solver::{diag_subfield, distinguish, fp_estimate, select_construction, select_form, PlanForm, Verdict};

pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "lepkit",
    version,
    about = "Power-code distinguisher and partial-closure reduction for code equivalence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PairKind {
    /// An equivalent pair with its witness.
    Pair,
    /// Two independent random codes.
    Random,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical description of GF(p^m).
    FieldInfo { p: u32, m: u32 },
    /// Generate an instance file.
    Gen {
        kind: PairKind,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        subgroup_r: Option<u32>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the distinguisher on an instance file.
    Distinguish {
        file: PathBuf,
        #[arg(long)]
        plan_form: Option<String>,
    },
    /// Replace both codes by their r-th partial closures.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Multiset-collision estimate for diagonals over a field of size q-diag.
    Estimate {
        #[arg(long)]
        q_diag: u32,
        #[arg(long)]
        n: usize,
    },
    /// Monte Carlo run for one parameter set.
    Experiment {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        plan_form: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Monte Carlo runs for the four reference parameter sets.
    Table2 {
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn parse_form(s: &Option<String>) -> Result<Option<PlanForm>, String> {
    s.as_deref().map(|name| PlanForm::parse(name).ok_or_else(|| format!("unknown plan form {name:?}"))).transpose()
}

fn read_instance(path: &PathBuf) -> Result<LepInstance, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    LepInstance::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_text(path: &PathBuf, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    match cli.command {
        Command::FieldInfo { p, m } => {
            let f = make_field(p, m).map_err(|e| e.to_string())?;
            let d = f.descriptor();
            let v = json!({ "p": d.p, "m": d.m, "q": f.q(), "modulus": d.modulus, "alpha": d.alpha });
            writeln!(out, "{v}").map_err(io)?;
        }
        Command::Gen { kind, q, n, k, subgroup_r, seed, out: path } => {
            let field = field_for_q(q as u64).map_err(|e| e.to_string())?;
            let inst = match kind {
                PairKind::Pair => equivalent_pair(&field, n, k, subgroup_r, seed),
                PairKind::Random => random_pair(&field, n, k, seed),
            }
            .map_err(|e| e.to_string())?;
            write_text(&path, &(inst.to_json() + "\n"))?;
        }
        Command::Distinguish { file, plan_form } => {
            let inst = read_instance(&file)?;
            let field = inst.code_a.field().clone();
            let (n, k) = (inst.code_a.n(), inst.code_a.k());
            let plan = match parse_form(&plan_form)? {
                Some(form) => select_form(&field, k, n, form),
                None => select_construction(&field, k, n),
            }
            .map_err(|e| e.to_string())?;
            let outcome = distinguish(&inst.code_a, &inst.code_b, &plan);
            let v = json!({
                "verdict": outcome.verdict,
                "detail": outcome.detail,
                "plan": plan.record(),
                "diag_subfield": diag_subfield(&plan, &field),
            });
            writeln!(out, "{v}").map_err(io)?;
            return Ok(match outcome.verdict {
                Verdict::LikelyEquivalent => 0,
                Verdict::NotEquivalent => 1,
                Verdict::Inconclusive => 2,
            });
        }
        Command::Reduce { file, r, out: path } => {
            let inst = read_instance(&file)?;
            let reduced = reduce_instance(&inst, r).map_err(|e| e.to_string())?;
            write_text(&path, &(reduced.to_json() + "\n"))?;
            let lifted = reduced.witness.is_some();
            writeln!(out, "{}", json!({ "n": reduced.code_a.n(), "k": reduced.code_a.k(), "witness_lifted": lifted }))
                .map_err(io)?;
        }
        Command::Estimate { q_diag, n } => {
            if q_diag < 2 || n < 1 {
                return Err("need q-diag >= 2 and n >= 1".into());
            }
            writeln!(out, "{}", fp_estimate(q_diag, n)).map_err(io)?;
        }
        Command::Experiment { q, n, k, trials, seed, plan_form, csv } => {
            let params = ExperimentParams { q, n, k, form: parse_form(&plan_form)? };
            let report = run_experiment(&params, trials, seed).map_err(|e| e.to_string())?;
            writeln!(out, "{}", serde_json::to_string(&report).map_err(|e| e.to_string())?).map_err(io)?;
            if let Some(path) = csv {
                let file = fs::File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                ExperimentReport::write_csv(&[report], file).map_err(io)?;
            }
        }
        Command::Table2 { trials, seed, csv } => {
            let reports = table2(trials, seed).map_err(|e| e.to_string())?;
            write!(out, "{}", format_table2(&reports)).map_err(io)?;
            if let Some(path) = csv {
                let file = fs::File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                ExperimentReport::write_csv(&reports, file).map_err(io)?;
            }
        }
    }
    Ok(0)
}

/// Runs the command line on `args` (including the program name).
pub fn cli_main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{e}");
                0
            };
        }
    };
    match run(cli, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    cli_main_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
