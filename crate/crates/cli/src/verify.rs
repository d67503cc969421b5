//! The verify harness: instantiate a claim, measure, compare piece by piece.
//!
//! Measurement strategy: plain gcd LC for claim 1; for claims 2-4 the full
//! 2^T enumeration when the period allows it, otherwise weight-limited
//! support enumeration within the pattern budget. Entries the budget cannot
//! reach stay unchecked; an upper bound below a predicted value still counts
//! as a violation.

use std::time::Instant;

use clap::Args;
use serde::{Deserialize, Serialize};

use charseq::{
    gen_character_sequence, k_error_profile_enum, k_error_profile_full, linear_complexity_gcd,
    predict_profile, thm1_prediction, thm2_prediction, ChiSign, Error, FieldDescriptor,
    GammaChoice, Hypotheses, Method, OddPrime, PieceKind, PredictionPiece, SequenceKind,
    SequenceSpec, TheoremPrediction, FULL_ENUM_PERIOD_CAP,
};

use crate::{parse_sign, resolve_budget, Failure, Format};

#[derive(Args)]
pub struct VerifyCmd {
    /// claim to check: 1 = LC lower bound, 2 = k-error lower bound,
    /// 3 = exact profile for chi(gamma) = +1, 4 = for chi(gamma) = -1
    #[arg(long)]
    theorem: u8,
    /// odd prime characteristic
    #[arg(long)]
    p: u64,
    /// extension degree (claim 1 only; defaults to 2)
    #[arg(long)]
    r: Option<u32>,
    /// character sign of gamma, +1 or -1
    #[arg(long, allow_hyphen_values = true)]
    gamma_sign: Option<String>,
    /// per-stage pattern budget (overrides CHARSEQ_BUDGET)
    #[arg(long)]
    budget: Option<u64>,
    /// report wall time per stage (output is no longer byte-identical)
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Serialize, Deserialize)]
pub struct VerifyReport {
    pub theorem: u8,
    pub parameters: Parameters,
    pub hypotheses: Hypotheses,
    pub pieces: Vec<PieceReport>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<Timing>,
}

#[derive(Serialize, Deserialize)]
pub struct Parameters {
    pub p: u64,
    pub r: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_gamma: Option<i8>,
    pub modulus: Vec<u64>,
    pub alpha_index: u64,
    pub basis: Vec<u64>,
}

#[derive(Debug, Serialize, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Violation,
}

#[derive(Debug, Serialize, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum PieceVerdict {
    Match,
    Violation,
    Unchecked,
}

#[derive(Serialize, Deserialize)]
pub struct PieceReport {
    pub k_lo: usize,
    pub k_hi: usize,
    pub kind: PieceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checked_k_lo: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checked_k_hi: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured_min: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured_max: Option<usize>,
    pub verdict: PieceVerdict,
}

#[derive(Serialize, Deserialize)]
pub struct Timing {
    pub build: f64,
    pub generate: f64,
    pub measure: f64,
    pub total: f64,
}

/// Reported when the claim's hypotheses fail; exits 2, not a violation.
#[derive(Serialize, Deserialize)]
pub struct HypothesesFailure {
    pub theorem: u8,
    pub p: u64,
    pub error: String,
}

#[derive(Clone, Copy)]
struct Measurement {
    lc: usize,
    /// false when the value is only an upper bound (budget-limited)
    exact: bool,
}

pub fn run(cmd: &VerifyCmd) -> Result<(), Failure> {
    let started = Instant::now();
    let p = OddPrime::new(cmd.p)?;
    let sign = cmd.gamma_sign.as_deref().map(parse_sign).transpose()?;
    let opts = resolve_budget(cmd.budget)?;

    let (r, sign) = match cmd.theorem {
        1 => {
            let r = cmd.r.unwrap_or(2);
            if sign.is_some() && r != 2 {
                return Err(Failure::usage("--gamma-sign applies to r = 2 only"));
            }
            (r, sign)
        }
        2 => {
            require_r2(cmd.r)?;
            (2, Some(sign.unwrap_or(ChiSign::Plus)))
        }
        3 => {
            require_r2(cmd.r)?;
            if sign == Some(ChiSign::Minus) {
                return Err(Failure::usage(
                    "claim 3 is the chi(gamma) = +1 case; use --theorem 4 for -1",
                ));
            }
            (2, Some(ChiSign::Plus))
        }
        4 => {
            require_r2(cmd.r)?;
            if sign == Some(ChiSign::Plus) {
                return Err(Failure::usage(
                    "claim 4 is the chi(gamma) = -1 case; use --theorem 3 for +1",
                ));
            }
            (2, Some(ChiSign::Minus))
        }
        other => {
            return Err(Failure::usage(format!(
                "--theorem must be 1, 2, 3, or 4, got {other}"
            )))
        }
    };

    let prediction = match cmd.theorem {
        1 => thm1_prediction(p, r),
        2 => thm2_prediction(p, sign.expect("set above")),
        _ => predict_profile(p, sign.expect("set above")),
    };
    let prediction = match prediction {
        Ok(pred) => pred,
        Err(Error::HypothesesUnmet(reason)) => {
            let report = HypothesesFailure {
                theorem: cmd.theorem,
                p: cmd.p,
                error: format!("hypotheses not satisfied: {reason}"),
            };
            match cmd.format {
                Format::Json => {
                    println!("{}", serde_json::to_string(&report).expect("serializable"))
                }
                Format::Text => println!("theorem {}: {}", cmd.theorem, report.error),
            }
            return Err(Failure::silent(2));
        }
        Err(e) => return Err(e.into()),
    };

    let build_started = Instant::now();
    let mut spec = SequenceSpec::new(SequenceKind::Character, cmd.p, r);
    if let Some(sign) = sign {
        spec = spec.with_gamma(GammaChoice::Sign(sign));
    }
    let field = spec.build_field()?;
    let build_ms = ms_since(build_started);

    let gen_started = Instant::now();
    let sequence = gen_character_sequence(&field);
    let generate_ms = ms_since(gen_started);

    let measure_started = Instant::now();
    let measured = measure(cmd.theorem, &sequence, &prediction, &opts)?;
    let measure_ms = ms_since(measure_started);

    let pieces: Vec<PieceReport> = prediction
        .pieces
        .iter()
        .map(|piece| report_piece(piece, &measured))
        .collect();
    let verdict = if pieces.iter().any(|p| p.verdict == PieceVerdict::Violation) {
        Verdict::Violation
    } else {
        Verdict::Match
    };
    let report = VerifyReport {
        theorem: cmd.theorem,
        parameters: parameters(&field, sign),
        hypotheses: prediction.hypotheses.clone(),
        pieces,
        verdict,
        timing_ms: cmd.timing.then(|| Timing {
            build: build_ms,
            generate: generate_ms,
            measure: measure_ms,
            total: ms_since(started),
        }),
    };
    render(&report, cmd.format, &prediction);
    match verdict {
        Verdict::Match => Ok(()),
        Verdict::Violation => Err(Failure::violation("measured values violate the claim")),
    }
}

fn require_r2(r: Option<u32>) -> Result<(), Failure> {
    match r {
        None | Some(2) => Ok(()),
        Some(other) => Err(Failure::usage(format!(
            "this claim concerns r = 2 only, got --r {other}"
        ))),
    }
}

fn ms_since(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e3 * 1e3).round() / 1e3
}

fn parameters(field: &FieldDescriptor, sign: Option<ChiSign>) -> Parameters {
    Parameters {
        p: field.p().value(),
        r: field.r(),
        chi_gamma: sign.map(ChiSign::value),
        modulus: field.modulus().to_vec(),
        alpha_index: field.alpha_index(),
        basis: field.basis().to_vec(),
    }
}

/// Measurements indexed by k; None where nothing was measured.
fn measure(
    theorem: u8,
    sequence: &charseq::BinarySequence,
    prediction: &TheoremPrediction,
    opts: &charseq::SearchOptions,
) -> Result<Vec<Option<Measurement>>, Failure> {
    let t = sequence.period();
    let mut measured: Vec<Option<Measurement>> = vec![None; t + 1];
    if theorem == 1 {
        measured[0] = Some(Measurement {
            lc: linear_complexity_gcd(sequence).lc,
            exact: true,
        });
        return Ok(measured);
    }
    if t <= FULL_ENUM_PERIOD_CAP {
        let profile = k_error_profile_full(sequence)?;
        for e in &profile.entries {
            measured[e.k] = Some(Measurement {
                lc: e.lc,
                exact: true,
            });
        }
        return Ok(measured);
    }
    // weight-limited enumeration up to the last predicted k
    let k_max = prediction
        .pieces
        .iter()
        .filter(|p| p.kind != PieceKind::Unspecified)
        .map(|p| p.k_hi)
        .max()
        .unwrap_or(0)
        .min(t);
    let profile = k_error_profile_enum(sequence, k_max, opts)?;
    for e in &profile.entries {
        measured[e.k] = Some(Measurement {
            lc: e.lc,
            exact: e.method != Method::BoundOnly,
        });
    }
    Ok(measured)
}

fn report_piece(piece: &PredictionPiece, measured: &[Option<Measurement>]) -> PieceReport {
    let checked: Vec<(usize, Measurement)> = (piece.k_lo..=piece.k_hi)
        .filter_map(|k| measured.get(k).copied().flatten().map(|m| (k, m)))
        .collect();
    let verdict = match piece.kind {
        PieceKind::Unspecified => PieceVerdict::Unchecked,
        PieceKind::Exact => {
            let target = piece.value.expect("exact pieces carry a value") as usize;
            let violated = checked.iter().any(|(_, m)| {
                if m.exact {
                    m.lc != target
                } else {
                    // an upper bound below the exact value is a violation
                    m.lc < target
                }
            });
            if violated {
                PieceVerdict::Violation
            } else if checked.iter().any(|(_, m)| m.exact) {
                PieceVerdict::Match
            } else {
                PieceVerdict::Unchecked
            }
        }
        PieceKind::LowerBound => {
            let bound = piece.value.expect("bound pieces carry a value") as usize;
            if checked.iter().any(|(_, m)| m.lc < bound) {
                PieceVerdict::Violation
            } else if checked.iter().any(|(_, m)| m.exact) {
                PieceVerdict::Match
            } else {
                PieceVerdict::Unchecked
            }
        }
    };
    PieceReport {
        k_lo: piece.k_lo,
        k_hi: piece.k_hi,
        kind: piece.kind,
        value: piece.value,
        checked_k_lo: checked.first().map(|(k, _)| *k),
        checked_k_hi: checked.last().map(|(k, _)| *k),
        measured_min: checked.iter().map(|(_, m)| m.lc).min(),
        measured_max: checked.iter().map(|(_, m)| m.lc).max(),
        verdict,
    }
}

fn render(report: &VerifyReport, format: Format, prediction: &TheoremPrediction) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(report).expect("serializable")),
        Format::Text => {
            println!(
                "theorem {} (source {}), p = {}, r = {}",
                report.theorem,
                serde_json::to_value(prediction.source)
                    .expect("serializable")
                    .as_str()
                    .unwrap(),
                report.parameters.p,
                report.parameters.r
            );
            for piece in &report.pieces {
                let kind = serde_json::to_value(piece.kind)
                    .expect("serializable")
                    .as_str()
                    .unwrap()
                    .to_string();
                let verdict = match piece.verdict {
                    PieceVerdict::Match => "match",
                    PieceVerdict::Violation => "VIOLATION",
                    PieceVerdict::Unchecked => "unchecked",
                };
                let value = piece
                    .value
                    .map(|v| v.to_string())
                    .unwrap_or_else(|| "-".into());
                let measured = match (piece.measured_min, piece.measured_max) {
                    (Some(lo), Some(hi)) if lo == hi => format!("{lo}"),
                    (Some(lo), Some(hi)) => format!("{lo}..{hi}"),
                    _ => "-".into(),
                };
                println!(
                    "  k in [{}, {}] {kind:<11} predicted {value:<6} measured {measured:<8} {verdict}",
                    piece.k_lo, piece.k_hi
                );
            }
            let overall = match report.verdict {
                Verdict::Match => "match",
                Verdict::Violation => "VIOLATION",
            };
            println!("verdict: {overall}");
        }
    }
}
