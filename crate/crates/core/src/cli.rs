//! Command-line front end. [`run`] does all the work and returns the text
//! to print plus the exit code, so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 negative verdict of a yes/no check, 2 usage or
//! input error, 3 search budget or range exhausted.

use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use serde_json::Value;

use crate::construct::algebraic::{construct_algebraic, DEFAULT_M_LIMIT, DEFAULT_M_START};
use crate::construct::combinatorial::construct_combinatorial;
use crate::construct::{verify_certificate, Certificate};
use crate::error::Error;
use crate::macaulay::{is_kk_fvector, is_o_sequence, Validity, ViolationKind};
use crate::peaks::peak_profile;
use crate::pure_decide::{decide_pure, ip_experiment, PurityStatus};
use crate::steiner::{sts, verify_sts, TripleSystem};
use crate::transform::{f_to_h, h_to_f, is_cm_fvector, parse_int_seq, FVector, HVector};

pub const DEFAULT_BUDGET: u64 = 20_000_000;

#[derive(Debug, Parser)]
#[command(name = "purefv", version, about = "f-vectors, h-vectors, Steiner triple systems and purity search")]
struct Cli {
    /// Print a JSON result object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print nothing on success; the exit code carries the verdict.
    #[arg(long, global = true)]
    quiet: bool,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report wall-clock time.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StsFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert an f-vector (leading 1 included) to its h-vector.
    F2h {
        #[arg(required = true, allow_negative_numbers = true)]
        values: Vec<String>,
    },
    /// Convert an h-vector to its f-vector.
    H2f {
        #[arg(required = true, allow_negative_numbers = true)]
        values: Vec<String>,
    },
    /// Is the sequence an O-sequence?
    CheckOseq {
        #[arg(required = true, allow_negative_numbers = true)]
        values: Vec<String>,
    },
    /// Is the vector the f-vector of some simplicial complex?
    CheckKk {
        #[arg(required = true, allow_negative_numbers = true)]
        values: Vec<String>,
    },
    /// Is the vector the f-vector of a Cohen-Macaulay complex?
    CheckCm {
        #[arg(required = true, allow_negative_numbers = true)]
        values: Vec<String>,
    },
    /// Peaks of a sequence, with an ASCII profile.
    Peaks {
        #[arg(required = true, allow_negative_numbers = true)]
        values: Vec<String>,
    },
    /// Cohen-Macaulay f-vector with N peaks from a spiked h-vector.
    ConstructAlgebraic {
        #[arg(long)]
        n_peaks: u32,
        #[arg(long, default_value_t = DEFAULT_M_START)]
        m_start: u64,
        #[arg(long, default_value_t = DEFAULT_M_LIMIT)]
        m_limit: u64,
    },
    /// Pure f-vector with peaks at f_{k_i - 1} from a disjoint union.
    ConstructCombinatorial {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u64>,
        #[arg(long)]
        r_limit: Option<u64>,
    },
    /// Print a Steiner triple system of the given order.
    Sts {
        #[arg(long)]
        order: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: StsFormat,
    },
    /// Check a Steiner triple system file (text format or JSON; `-` for stdin).
    VerifySts {
        #[arg(long)]
        file: String,
    },
    /// Decide whether an f-vector is pure.
    DecidePure {
        #[arg(long, allow_negative_numbers = true)]
        f: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// The Interval Property experiment for an admissible order.
    IpReport {
        #[arg(long)]
        order: u64,
        /// Also decide every b in 1..=C(r,2).
        #[arg(long)]
        sweep: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommandResult {
    pub status: Status,
    pub command: String,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// What a run produced: the structured result, the rendered streams and the
/// process exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: CommandResult,
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

struct Reply {
    payload: Value,
    text: String,
    exit_code: i32,
}

fn reply<T: Serialize>(payload: &T, text: String, exit_code: i32) -> Reply {
    Reply {
        payload: serde_json::to_value(payload).expect("payload serializes"),
        text,
        exit_code,
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::NoWitnessInRange(_) => 3,
        _ => 2,
    }
}

fn join(values: &[String]) -> Result<Vec<BigInt>, Error> {
    parse_int_seq(&values.join(" "))
}

fn spaced(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn describe(v: &Validity, what: &str) -> String {
    match &v.violation {
        None => "valid".to_string(),
        Some(x) => {
            let why = match &x.kind {
                ViolationKind::Empty => "empty sequence".to_string(),
                ViolationKind::LeadingEntry => "leading entry is not 1".to_string(),
                ViolationKind::Negative => "negative entry".to_string(),
                ViolationKind::NonPositive => "entry is not positive".to_string(),
                ViolationKind::Growth { bound } => format!("exceeds the growth bound {bound}"),
            };
            format!("invalid: {what}[{}]: {why}", x.index)
        }
    }
}

fn verdict(valid: bool) -> i32 {
    if valid {
        0
    } else {
        1
    }
}

/// Bars scaled to the largest entry, peaks marked with `*`.
fn ascii_profile(values: &[BigInt], peaks: &[usize]) -> String {
    const WIDTH: f64 = 50.0;
    let max = values.iter().max().cloned().unwrap_or_default();
    let shift = max.bits().saturating_sub(52);
    let scaled = |x: &BigInt| -> f64 { (x >> shift).to_f64().unwrap_or(0.0) };
    let top = scaled(&max);
    let label = values.iter().map(|v| v.to_string().len()).max().unwrap_or(1).min(24);
    let idx = values.len().to_string().len();
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        let len = if v.is_positive() && top > 0.0 {
            ((scaled(v) / top) * WIDTH).round().max(1.0) as usize
        } else {
            0
        };
        let mut shown = v.to_string();
        if shown.len() > label {
            shown = format!("~{:.3e}", v.to_f64().unwrap_or(f64::INFINITY));
        }
        let mark = if peaks.contains(&i) { " *" } else { "" };
        out.push_str(&format!("{i:>idx$} {shown:>label$} |{}{mark}\n", "#".repeat(len)));
    }
    out
}

fn execute(command: Command) -> Result<Reply, Error> {
    Ok(match command {
        Command::F2h { values } => {
            let f = FVector::from_entries_unchecked(join(&values)?)?;
            let h = f_to_h(&f);
            reply(&h, spaced(h.entries()), 0)
        }
        Command::H2f { values } => {
            let h = HVector::new(join(&values)?)?;
            let f = h_to_f(&h);
            reply(&f, spaced(f.entries()), 0)
        }
        Command::CheckOseq { values } => {
            let v = is_o_sequence(&join(&values)?);
            let text = describe(&v, "h");
            let code = verdict(v.valid);
            reply(&v, text, code)
        }
        Command::CheckKk { values } => {
            let v = is_kk_fvector(&join(&values)?);
            let text = describe(&v, "f");
            let code = verdict(v.valid);
            reply(&v, text, code)
        }
        Command::CheckCm { values } => {
            let f = FVector::from_entries_unchecked(join(&values)?)?;
            let c = is_cm_fvector(&f);
            let text = if c.is_cm {
                format!("Cohen-Macaulay\nh = {}", spaced(c.h.entries()))
            } else {
                format!(
                    "not Cohen-Macaulay\nh = {}\n{}",
                    spaced(c.h.entries()),
                    describe(&c.validity, "h")
                )
            };
            let code = verdict(c.is_cm);
            reply(&c, text, code)
        }
        Command::Peaks { values } => {
            let v = join(&values)?;
            let p = peak_profile(&v);
            let positions = p.positions();
            let text = format!(
                "{} peak(s) at {:?}{}\n{}",
                p.peak_count,
                positions,
                if p.unimodal { ", unimodal" } else { "" },
                ascii_profile(&v, &positions).trim_end()
            );
            reply(&p, text, 0)
        }
        Command::ConstructAlgebraic { n_peaks, m_start, m_limit } => {
            let cert = construct_algebraic(n_peaks, m_start, m_limit)?;
            let text = format!(
                "{} peaks in dimension {}: m = {}, eps = {}\npeaks at f_{:?}\nh = {}\nf = {}",
                cert.n_peaks,
                cert.dimension,
                cert.m,
                cert.epsilon(),
                cert.peak_indices,
                spaced(cert.h.entries()),
                spaced(cert.f.entries())
            );
            let cert = Certificate::Algebraic(cert);
            debug_assert!(verify_certificate(&cert).ok);
            reply(&cert, text, 0)
        }
        Command::ConstructCombinatorial { k, r_limit } => {
            let cert = construct_combinatorial(&k, r_limit)?;
            let text = format!(
                "peaks at f_{:?} in dimension {}: r = {}, a = {}\nf = {}",
                cert.peak_indices,
                cert.dimension,
                cert.r,
                cert.a.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
                spaced(cert.f.entries())
            );
            reply(&Certificate::Combinatorial(cert), text, 0)
        }
        Command::Sts { order, format } => {
            let ts = sts(order)?;
            let text = match format {
                StsFormat::Text => ts.to_text().trim_end().to_string(),
                StsFormat::Json => serde_json::to_string(&ts).expect("serializes"),
            };
            reply(&ts, text, 0)
        }
        Command::VerifySts { file } => {
            let raw = if file == "-" {
                std::io::read_to_string(std::io::stdin())
            } else {
                std::fs::read_to_string(&file)
            }
            .map_err(|e| Error::InvalidArgument(format!("cannot read {file}: {e}")))?;
            let ts = if raw.trim_start().starts_with('{') {
                serde_json::from_str::<TripleSystem>(&raw).map_err(|e| Error::Parse(e.to_string()))?
            } else {
                TripleSystem::from_text(&raw)?
            };
            let check = verify_sts(&ts);
            let text = match &check.problem {
                None => format!(
                    "valid Steiner triple system of order {} with {} blocks",
                    ts.order,
                    ts.blocks.len()
                ),
                Some(p) => format!("invalid: {}", serde_json::to_string(p).expect("serializes")),
            };
            let code = verdict(check.valid);
            reply(&check, text, code)
        }
        Command::DecidePure { f, budget } => {
            let f = FVector::new(parse_int_seq(&f)?)?;
            let v = decide_pure(&f, budget)?;
            let mut text = format!("{}\nnodes explored: {}", v.status, v.nodes_explored);
            if let Some(w) = &v.witness {
                text.push_str("\nwitness facets:");
                for facet in &w.facets {
                    let line = facet.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                    text.push_str(&format!("\n  {line}"));
                }
            }
            let code = match v.status {
                PurityStatus::Pure => 0,
                PurityStatus::NotPure => 1,
                PurityStatus::Unknown => 3,
            };
            reply(&v, text, code)
        }
        Command::IpReport { order, sweep, budget } => {
            let rep = ip_experiment(order, budget, sweep)?;
            let mut text = format!(
                "r = {}\nf  = {} pure: {} (Steiner system with {} blocks)\n\
                 Cohen-Macaulay for b in [{}, {}]: {}\n\
                 f' = {} {} ({})\n\
                 Interval Property violated: {}",
                rep.r,
                spaced(rep.f.entries()),
                rep.f_pure,
                rep.sts_blocks,
                rep.cm_range[0],
                rep.cm_range[1],
                rep.cm_confirmed,
                spaced(rep.f_prime.entries()),
                rep.f_prime_verdict,
                serde_json::to_value(rep.f_prime_source).unwrap().as_str().unwrap(),
                rep.ip_violated
            );
            if let Some(sw) = &rep.pure_sweep {
                let pure: Vec<String> = sw
                    .iter()
                    .filter(|(_, s)| **s == PurityStatus::Pure)
                    .map(|(b, _)| b.to_string())
                    .collect();
                let unknown = sw.values().filter(|s| **s == PurityStatus::Unknown).count();
                text.push_str(&format!("\npure for b in {{{}}}", pure.join(", ")));
                if unknown > 0 {
                    text.push_str(&format!(" ({unknown} undecided within budget)"));
                }
            }
            reply(&rep, text, 0)
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::F2h { .. } => "f2h",
        Command::H2f { .. } => "h2f",
        Command::CheckOseq { .. } => "check-oseq",
        Command::CheckKk { .. } => "check-kk",
        Command::CheckCm { .. } => "check-cm",
        Command::Peaks { .. } => "peaks",
        Command::ConstructAlgebraic { .. } => "construct-algebraic",
        Command::ConstructCombinatorial { .. } => "construct-combinatorial",
        Command::Sts { .. } => "sts",
        Command::VerifySts { .. } => "verify-sts",
        Command::DecidePure { .. } => "decide-pure",
        Command::IpReport { .. } => "ip-report",
    }
}

fn status_for(code: i32) -> Status {
    match code {
        0 | 1 => Status::Ok,
        3 => Status::Unknown,
        _ => Status::Error,
    }
}

fn render(result: CommandResult, text: String, exit_code: i32, json: bool, quiet: bool) -> Outcome {
    let mut stdout = String::new();
    let mut stderr = String::new();
    if json {
        stdout = serde_json::to_string_pretty(&result).expect("serializes") + "\n";
    } else {
        if let Some(m) = &result.message {
            stderr.push_str(&format!("error: {m}\n"));
        } else if !quiet {
            stdout = text + "\n";
        }
        if let Some(ms) = result.elapsed_ms {
            stderr.push_str(&format!("elapsed: {ms} ms\n"));
        }
    }
    Outcome {
        result,
        stdout,
        stderr,
        exit_code,
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let wants_json = argv.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let result = CommandResult {
                status: if code == 0 { Status::Ok } else { Status::Error },
                command: String::new(),
                payload: Value::Null,
                message: (code != 0).then(|| rendered.trim_end().to_string()),
                elapsed_ms: None,
            };
            return Outcome {
                stdout: if code == 0 {
                    rendered.clone()
                } else if wants_json {
                    serde_json::to_string_pretty(&result).expect("serializes") + "\n"
                } else {
                    String::new()
                },
                stderr: if code != 0 && !wants_json { rendered } else { String::new() },
                result,
                exit_code: code,
            };
        }
    };

    if let Some(n) = cli.threads {
        // Only the first configuration in a process takes effect.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let name = command_name(&cli.command).to_string();
    let started = Instant::now();
    let outcome = execute(cli.command);
    let elapsed_ms = cli.timing.then(|| started.elapsed().as_millis() as u64);
    let (result, text, code) = match outcome {
        Ok(r) => (
            CommandResult {
                status: status_for(r.exit_code),
                command: name,
                payload: r.payload,
                message: None,
                elapsed_ms,
            },
            r.text,
            r.exit_code,
        ),
        Err(e) => {
            let code = error_code(&e);
            (
                CommandResult {
                    status: status_for(code),
                    command: name,
                    payload: Value::Null,
                    message: Some(e.to_string()),
                    elapsed_ms,
                },
                String::new(),
                code,
            )
        }
    };
    render(result, text, code, cli.json, cli.quiet)
}
