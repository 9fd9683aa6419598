//! The `tcsfs` command line.
//!
//! Exit codes: 0 success, 1 the checked object is invalid (`verify`), 2 usage
//! or malformed input, 3 a constructed set failed verification (a bug).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::apfree::{
    elkin_bound, is_ap_free_mod, max_apfree_int_exact, max_apfree_mod_exact, ApFreeSet, BMethod,
};
use crate::bounds::{is_prime, ub_pms, BoundReport};
use crate::construction::{
    collision_factor, default_modulus, expected_y, format_rational, rational_to_f64, run_trials,
    working_dim, x_size, ConstructionParams, RunOptions, TrialSummary,
};
use crate::error::Error;
use crate::io;
use crate::oracle::max_tcsfs_exact;
use crate::verify::{verify_pms, verify_tcsfs, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUG: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tcsfs",
    version,
    about = "Tri-colored sum-free sets in F_2^n: construction, verification, bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the upper and lower bound formulas for F_p^n as JSON.
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Run the randomized construction and keep the largest set found.
    Construct(ConstructArgs),
    /// Check a file: tri-colored sum-free set, perfectly matched sequence,
    /// or AP-free set.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = VerifyKind::Tcsfs)]
        kind: VerifyKind,
        #[arg(long)]
        json: bool,
    },
    /// Build an AP-free subset of Z/MZ.
    Apfree {
        #[arg(long = "M")]
        modulus: u64,
        #[arg(long, value_enum, default_value_t = SetMethod::Behrend)]
        method: SetMethod,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo means of |Y|, |Y0|, |Y1|, |Y2|, |Z| against the exact
    /// expectation.
    Estimate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        source: BSource,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Exhaustive search for tiny instances.
    Oracle {
        #[arg(long, value_enum)]
        kind: OracleKind,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long = "M")]
        modulus: Option<u64>,
        /// Node budget for the tri-colored search.
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct BSource {
    /// Odd modulus; defaults to 4·C(2n'/3, n'/3) + 1.
    #[arg(long = "M")]
    pub modulus: Option<u64>,
    #[arg(long = "b-method", value_enum)]
    pub b_method: Option<BMethodArg>,
    #[arg(long = "b-file")]
    pub b_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub source: BSource,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
    /// TripleSet output (JSON lines).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-trial stats output (JSON).
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Verify every trial's Z(w), not only the returned one.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Tcsfs,
    Pms,
    Apfree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetMethod {
    Behrend,
    Greedy,
    Exact,
}

impl From<SetMethod> for BMethod {
    fn from(m: SetMethod) -> Self {
        match m {
            SetMethod::Behrend => BMethod::Behrend,
            SetMethod::Greedy => BMethod::Greedy,
            SetMethod::Exact => BMethod::Exact,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BMethodArg {
    Behrend,
    Greedy,
    Exact,
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    /// Maximum tri-colored sum-free set in F_2^n (n <= 3).
    Tcsfs,
    /// Maximum AP-free subset of Z/MZ (M <= 40).
    Apfree,
    /// Maximum AP-free subset of [0, n) over the integers (n <= 40).
    ApfreeInt,
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::VerificationFailed { .. } => EXIT_BUG,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn print_json(out: &mut dyn Write, value: &impl Serialize) -> std::result::Result<(), Failure> {
    serde_json::to_writer(&mut *out, value).map_err(|e| Failure::usage(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn open(path: &Path) -> std::result::Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> std::result::Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn execute(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Bound { n, p } => cmd_bound(n, p, out),
        Command::Construct(args) => cmd_construct(args, out),
        Command::Verify { input, kind, json } => cmd_verify(&input, kind, json, out),
        Command::Apfree {
            modulus,
            method,
            out: path,
        } => cmd_apfree(modulus, method, path.as_deref(), out),
        Command::Estimate {
            n,
            trials,
            seed,
            source,
            threads,
        } => cmd_estimate(n, trials, seed, &source, threads, out),
        Command::Oracle {
            kind,
            n,
            modulus,
            budget,
        } => cmd_oracle(kind, n, modulus, budget, out),
    }
}

fn cmd_bound(n: u64, p: u64, out: &mut dyn Write) -> CmdResult {
    if n < 1 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    if !is_prime(p) {
        return Err(Failure::usage(format!("--p must be prime, got {p}")));
    }
    print_json(out, &BoundReport::new(n, p))?;
    Ok(EXIT_OK)
}

/// Resolves the flag combination into construction parameters.
fn resolve_params(
    n: usize,
    source: &BSource,
    seed: u64,
    trials: u64,
) -> std::result::Result<ConstructionParams, Failure> {
    if n < 1 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    let method = match (source.b_method, &source.b_file) {
        (Some(BMethodArg::File), None) => {
            return Err(Failure::usage("--b-method file requires --b-file"))
        }
        (Some(m), Some(_)) if m != BMethodArg::File => {
            return Err(Failure::usage(
                "--b-file conflicts with --b-method other than file",
            ))
        }
        (_, Some(_)) => BMethodArg::File,
        (Some(m), None) => m,
        (None, None) => BMethodArg::Behrend,
    };
    let params = match method {
        BMethodArg::File => {
            let path = source.b_file.as_deref().expect("checked above");
            let b = io::read_apfree(open(path)?)?;
            let modulus = source.modulus.unwrap_or(b.modulus());
            ConstructionParams::new(n, modulus, b, seed, trials)?
        }
        BMethodArg::Behrend => {
            ConstructionParams::with_method(n, source.modulus, BMethod::Behrend, seed, trials)?
        }
        BMethodArg::Greedy => {
            ConstructionParams::with_method(n, source.modulus, BMethod::Greedy, seed, trials)?
        }
        BMethodArg::Exact => {
            ConstructionParams::with_method(n, source.modulus, BMethod::Exact, seed, trials)?
        }
    };
    Ok(params)
}

fn cmd_construct(args: ConstructArgs, out: &mut dyn Write) -> CmdResult {
    let params = resolve_params(args.n, &args.source, args.seed, args.trials)?;
    let result = run_trials(
        &params,
        RunOptions {
            threads: args.threads,
            verify_each: args.verify,
        },
    )?;
    if let Some(path) = &args.out {
        let mut w = create(path)?;
        io::write_triple_set(&mut w, &result.best)?;
        w.flush()?;
    }
    if let Some(path) = &args.stats {
        let mut w = create(path)?;
        io::write_stats(&mut w, &result)?;
        w.flush()?;
    }
    let ub = ub_pms(params.n as u64, 2);
    if args.json {
        print_json(
            out,
            &json!({
                "n": params.n,
                "n_work": params.n_work,
                "M": params.modulus,
                "B_size": params.b.len(),
                "trials": params.trials,
                "seed": params.seed,
                "best_Z": result.best.len(),
                "best_trial": result.best_trial,
                "ub_pms": ub.to_string(),
                "predicted_EY": format_rational(&result.predicted_ey),
            }),
        )?;
    } else {
        writeln!(
            out,
            "n={} n'={} M={} |B|={} trials={} seed={}: best |Z|={} (trial {}), ub={}, E|Y|={:.4}",
            params.n,
            params.n_work,
            params.modulus,
            params.b.len(),
            params.trials,
            params.seed,
            result.best.len(),
            result.best_trial,
            ub,
            rational_to_f64(&result.predicted_ey),
        )?;
    }
    Ok(EXIT_OK)
}

fn report_verdict(verdict: Verdict, kind: &str, json: bool, out: &mut dyn Write) -> CmdResult {
    match verdict {
        Verdict::Valid => {
            if json {
                print_json(out, &json!({ "valid": true, "kind": kind }))?;
            } else {
                writeln!(out, "valid {kind}")?;
            }
            Ok(EXIT_OK)
        }
        Verdict::Invalid(v) => {
            if json {
                print_json(
                    out,
                    &json!({ "valid": false, "kind": kind, "violation": v }),
                )?;
            } else {
                let (i, j, k) = v.indices;
                writeln!(out, "invalid {kind}: ({i}, {j}, {k}): {v}")?;
            }
            Ok(EXIT_INVALID)
        }
    }
}

fn cmd_verify(input: &Path, kind: VerifyKind, json: bool, out: &mut dyn Write) -> CmdResult {
    let reader = open(input)?;
    match kind {
        VerifyKind::Tcsfs => {
            let set = io::read_triple_set(reader)?;
            report_verdict(verify_tcsfs(set.triples())?, "tcsfs", json, out)
        }
        VerifyKind::Pms => {
            let (_, pairs) = io::read_pms(reader)?;
            report_verdict(verify_pms(&pairs)?, "pms", json, out)
        }
        VerifyKind::Apfree => {
            let (modulus, elements) = io::read_apfree_unchecked(reader)?;
            match ApFreeSet::new(modulus, elements) {
                Ok(_) => {
                    if json {
                        print_json(out, &json!({ "valid": true, "kind": "apfree" }))?;
                    } else {
                        writeln!(out, "valid apfree")?;
                    }
                    Ok(EXIT_OK)
                }
                Err(Error::NotApFree(x, y, z)) => {
                    if json {
                        print_json(
                            out,
                            &json!({ "valid": false, "kind": "apfree", "progression": [x, y, z] }),
                        )?;
                    } else {
                        writeln!(out, "invalid apfree: {x} + {z} ≡ 2·{y} (mod {modulus})")?;
                    }
                    Ok(EXIT_INVALID)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn cmd_apfree(
    modulus: u64,
    method: SetMethod,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let set = BMethod::from(method).build(modulus)?;
    debug_assert!(is_ap_free_mod(set.elements(), modulus).unwrap_or(false));
    if let Some(path) = path {
        let mut w = create(path)?;
        io::write_apfree(&mut w, &set)?;
        w.flush()?;
    }
    print_json(
        out,
        &json!({
            "M": set.modulus(),
            "elements": set.elements(),
            "size": set.len(),
            "method": format!("{method:?}").to_lowercase(),
            "elkin_bound": (modulus >= 2).then(|| elkin_bound(modulus)),
        }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_estimate(
    n: usize,
    trials: u64,
    seed: u64,
    source: &BSource,
    threads: Option<usize>,
    out: &mut dyn Write,
) -> CmdResult {
    let params = resolve_params(n, source, seed, trials)?;
    let result = run_trials(
        &params,
        RunOptions {
            threads,
            verify_each: false,
        },
    )?;
    let summary = TrialSummary::from_stats(&result.trials);
    let ey = expected_y(params.n_work, params.modulus, params.b.len())?;
    let factor = collision_factor(params.n_work, params.modulus)?;
    let ey_f = rational_to_f64(&ey);
    let factor_f = rational_to_f64(&factor);
    print_json(
        out,
        &json!({
            "n": params.n,
            "n_work": params.n_work,
            "M": params.modulus,
            "B_size": params.b.len(),
            "X_size": x_size(params.n_work).to_string(),
            "trials": trials,
            "seed": seed,
            "predicted_EY": format_rational(&ey),
            "predicted_EY_value": ey_f,
            "collision_factor": format_rational(&factor),
            "collision_factor_value": factor_f,
            "Y_z_score": (summary.y.mean - ey_f) / summary.y.se,
            "summary": summary,
        }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_oracle(
    kind: OracleKind,
    n: Option<u64>,
    modulus: Option<u64>,
    budget: Option<u64>,
    out: &mut dyn Write,
) -> CmdResult {
    match kind {
        OracleKind::Tcsfs => {
            let n = n.ok_or_else(|| Failure::usage("--kind tcsfs requires --n"))?;
            let r = max_tcsfs_exact(n as usize, budget)?;
            print_json(out, &r)?;
        }
        OracleKind::Apfree => {
            let m = modulus.ok_or_else(|| Failure::usage("--kind apfree requires --M"))?;
            let s = max_apfree_mod_exact(m)?;
            print_json(
                out,
                &json!({ "M": m, "max_size": s.len(), "elements": s.elements() }),
            )?;
        }
        OracleKind::ApfreeInt => {
            let n = n.ok_or_else(|| Failure::usage("--kind apfree-int requires --n"))?;
            let s = max_apfree_int_exact(n)?;
            print_json(out, &json!({ "N": n, "max_size": s.len(), "elements": s }))?;
        }
    }
    Ok(EXIT_OK)
}

/// `M` that `construct --n n` uses when none is given.
pub fn default_modulus_for(n: usize) -> crate::Result<u64> {
    default_modulus(working_dim(n))
}
