//! charseq: construct character sequences over F_{p^r} and measure their
//! linear complexity and k-error linear complexity.
//!
//! Exit codes: 0 = success (all checked claims hold), 1 = a measured
//! violation or internal engine disagreement, 2 = invalid usage, malformed
//! input, or unmet hypotheses. All outputs are deterministic; timing data is
//! emitted only under --timing.

pub mod verify;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use charseq::{
    k_error_profile_enum, k_error_profile_full, linear_complexity_bm, linear_complexity_gcd,
    BinaryPolynomial, BinarySequence, ChiSign, GammaChoice, SearchOptions, SequenceJson,
    SequenceKind, SequenceSpec, DEFAULT_PATTERN_BUDGET, FULL_ENUM_PERIOD_CAP,
};

/// Environment variable overriding the per-stage pattern budget.
const BUDGET_ENV: &str = "CHARSEQ_BUDGET";

#[derive(Parser)]
#[command(
    name = "charseq",
    version,
    about = "Character sequences over F_{p^r}: construction, linear complexity, k-error linear complexity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a field descriptor (modulus, ordering basis, primitive element)
    Field(FieldCmd),
    /// Generate a sequence (character, indexed, modified, sidelnikov)
    Gen(GenCmd),
    /// Linear complexity of a binary sequence, with a BM cross-check
    Lc(LcCmd),
    /// k-error linear complexity profile
    Klc(KlcCmd),
    /// Check a built-in claim (1-4) against fresh measurements
    Verify(verify::VerifyCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Character,
    Indexed,
    Modified,
    Sidelnikov,
}

impl From<KindArg> for SequenceKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Character => SequenceKind::Character,
            KindArg::Indexed => SequenceKind::Indexed,
            KindArg::Modified => SequenceKind::Modified,
            KindArg::Sidelnikov => SequenceKind::Sidelnikov,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// enumerate error supports of weight <= k (any period, budgeted)
    Enum,
    /// enumerate all 2^T candidate sequences (period <= 26)
    Full,
}

/// Flags shared by every command that builds a field.
#[derive(Args)]
struct FieldFlags {
    /// odd prime characteristic
    #[arg(long)]
    p: u64,
    /// extension degree
    #[arg(long)]
    r: u32,
    /// modulus coefficients c0,...,cr, comma separated, monic
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    modulus: Option<Vec<u64>>,
    /// primitive element override (ordering index)
    #[arg(long)]
    alpha: Option<u64>,
    /// pick gamma by character sign, +1 or -1 (r = 2 only)
    #[arg(long, allow_hyphen_values = true, conflicts_with = "gamma_index")]
    gamma_sign: Option<String>,
    /// pick gamma explicitly by default-ordering index (r = 2 only)
    #[arg(long)]
    gamma_index: Option<u64>,
}

impl FieldFlags {
    fn spec(&self, kind: SequenceKind, d: Option<u32>) -> Result<SequenceSpec, Failure> {
        let gamma = match (&self.gamma_sign, self.gamma_index) {
            (None, None) => GammaChoice::Default,
            (Some(s), None) => GammaChoice::Sign(parse_sign(s)?),
            (None, Some(n)) => GammaChoice::Index(n),
            (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
        };
        Ok(SequenceSpec {
            kind,
            p: self.p,
            r: self.r,
            modulus: self.modulus.clone(),
            alpha: self.alpha,
            gamma,
            d,
        })
    }
}

fn parse_sign(s: &str) -> Result<ChiSign, Failure> {
    match s {
        "+1" | "1" => Ok(ChiSign::Plus),
        "-1" => Ok(ChiSign::Minus),
        other => Err(Failure::usage(format!(
            "--gamma-sign must be +1 or -1, got {other:?}"
        ))),
    }
}

#[derive(Args)]
struct FieldCmd {
    #[command(flatten)]
    field: FieldFlags,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct GenCmd {
    /// which construction to generate
    #[arg(long, value_enum)]
    kind: KindArg,
    #[command(flatten)]
    field: FieldFlags,
    /// alphabet size for indexed sequences (d >= 2)
    #[arg(long)]
    d: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// write to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InputFlags {
    /// read the sequence from this file (text bits or JSON)
    #[arg(long, conflicts_with = "stdin")]
    input: Option<PathBuf>,
    /// read the sequence from standard input
    #[arg(long)]
    stdin: bool,
}

impl InputFlags {
    fn read(&self) -> Result<BinarySequence, Failure> {
        let content = match (&self.input, self.stdin) {
            (Some(path), false) => std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?,
            (None, true) => {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| Failure::usage(format!("cannot read stdin: {e}")))?;
                buf
            }
            (None, false) => return Err(Failure::usage("one of --input or --stdin is required")),
            (Some(_), true) => unreachable!("clap conflicts_with"),
        };
        let trimmed = content.trim_start();
        if trimmed.starts_with('{') {
            let wire: SequenceJson = serde_json::from_str(trimmed)
                .map_err(|e| Failure::usage(format!("malformed sequence JSON: {e}")))?;
            wire.to_binary().map_err(Failure::from)
        } else {
            BinarySequence::from_bit_str(content.trim_end()).map_err(Failure::from)
        }
    }
}

#[derive(Args)]
struct LcCmd {
    #[command(flatten)]
    input: InputFlags,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct KlcCmd {
    #[command(flatten)]
    input: InputFlags,
    /// largest k to report
    #[arg(long)]
    k_max: usize,
    /// search method; defaults to full for period <= 26, enum otherwise
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// per-stage pattern budget (overrides CHARSEQ_BUDGET)
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// A failed run, carrying the process exit code.
pub struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: 2,
        }
    }

    pub fn violation(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: 1,
        }
    }

    /// Exit with a code after the report has already been printed.
    pub fn silent(code: u8) -> Self {
        Failure {
            message: String::new(),
            code,
        }
    }
}

impl From<charseq::Error> for Failure {
    fn from(e: charseq::Error) -> Self {
        // library errors are bad inputs or unmet hypotheses
        Failure::usage(e.to_string())
    }
}

/// Budget resolution: flag, then CHARSEQ_BUDGET, then the default.
fn resolve_budget(flag: Option<u64>) -> Result<SearchOptions, Failure> {
    let budget = match flag {
        Some(b) => b,
        None => match std::env::var(BUDGET_ENV) {
            Ok(raw) => raw.parse::<u64>().map_err(|_| {
                Failure::usage(format!("{BUDGET_ENV} must be an integer, got {raw:?}"))
            })?,
            Err(_) => DEFAULT_PATTERN_BUDGET,
        },
    };
    Ok(SearchOptions { budget })
}

#[derive(Serialize, Deserialize)]
pub struct LcReport {
    pub period: usize,
    pub lc: usize,
    pub characteristic_poly: BinaryPolynomial,
    pub bm_crosscheck: usize,
}

fn run_field(cmd: &FieldCmd) -> Result<(), Failure> {
    let spec = cmd.field.spec(SequenceKind::Character, None)?;
    let f = spec.build_field()?;
    match cmd.format {
        Format::Json => println!("{}", serde_json::to_string(&f).expect("serializable")),
        Format::Text => {
            println!("p = {}, r = {}, q = {}", f.p(), f.r(), f.q());
            println!("modulus = {:?}", f.modulus());
            println!("alpha_index = {}", f.alpha_index());
            println!("basis = {:?}", f.basis());
        }
    }
    Ok(())
}

fn run_gen(cmd: &GenCmd) -> Result<(), Failure> {
    let spec = cmd.field.spec(cmd.kind.into(), cmd.d)?;
    let generated = spec.generate()?;
    let rendered = match cmd.format {
        Format::Text => generated.to_text()?,
        Format::Json => {
            serde_json::to_string(&SequenceJson::from(&generated)).expect("serializable")
        }
    };
    match &cmd.output {
        Some(path) => std::fs::write(path, rendered + "\n")
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{rendered}"),
    }
    Ok(())
}

fn run_lc(cmd: &LcCmd) -> Result<(), Failure> {
    let s = cmd.input.read()?;
    let gcd = linear_complexity_gcd(&s);
    let bm = linear_complexity_bm(&s);
    let report = LcReport {
        period: s.period(),
        lc: gcd.lc,
        characteristic_poly: gcd.characteristic,
        bm_crosscheck: bm,
    };
    match cmd.format {
        Format::Json => println!("{}", serde_json::to_string(&report).expect("serializable")),
        Format::Text => {
            println!("period = {}", report.period);
            println!("lc = {}", report.lc);
            println!(
                "characteristic = {} (degree {:?})",
                report.characteristic_poly.to_hex(),
                report.characteristic_poly.degree()
            );
            println!("bm = {}", report.bm_crosscheck);
        }
    }
    if bm != gcd.lc {
        return Err(Failure::violation(format!(
            "engine disagreement: gcd = {}, bm = {bm}",
            gcd.lc
        )));
    }
    Ok(())
}

fn run_klc(cmd: &KlcCmd) -> Result<(), Failure> {
    let s = cmd.input.read()?;
    let t = s.period();
    if cmd.k_max > t {
        return Err(Failure::usage(format!(
            "--k-max {} exceeds the period {t}",
            cmd.k_max
        )));
    }
    let opts = resolve_budget(cmd.budget)?;
    let use_full = match cmd.method {
        Some(MethodArg::Full) => {
            if t > FULL_ENUM_PERIOD_CAP {
                return Err(Failure::usage(format!(
                    "--method full handles periods up to {FULL_ENUM_PERIOD_CAP}, got {t}; use --method enum"
                )));
            }
            true
        }
        Some(MethodArg::Enum) => false,
        None => t <= FULL_ENUM_PERIOD_CAP,
    };
    let profile = if use_full {
        let mut profile = k_error_profile_full(&s)?;
        profile.entries.truncate(cmd.k_max + 1);
        profile
    } else {
        k_error_profile_enum(&s, cmd.k_max, &opts)?
    };
    match cmd.format {
        Format::Json => println!("{}", serde_json::to_string(&profile).expect("serializable")),
        Format::Text => {
            println!("period = {}", profile.period);
            for e in &profile.entries {
                let method = serde_json::to_value(e.method).expect("serializable");
                println!(
                    "k = {:>3}: lc = {:>6} ({})",
                    e.k,
                    e.lc,
                    method.as_str().unwrap()
                );
            }
        }
    }
    Ok(())
}

/// Parse arguments and dispatch; the binary wraps this.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Field(cmd) => run_field(cmd),
        Command::Gen(cmd) => run_gen(cmd),
        Command::Lc(cmd) => run_lc(cmd),
        Command::Klc(cmd) => run_klc(cmd),
        Command::Verify(cmd) => verify::run(cmd),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
