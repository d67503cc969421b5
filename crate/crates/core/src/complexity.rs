//! Linear complexity and k-error linear complexity over GF(2).
//!
//! Two independent LC engines cross-check each other: the gcd formula
//! LC = T - deg gcd(X^T - 1, S(X)) and Berlekamp-Massey run over two periods.
//! The k-error engines are exact searches: `k_error_profile_full` enumerates
//! every candidate sequence (T <= 26), `k_error_profile_enum` enumerates
//! error supports of bounded weight. Both reduce (lc, witness) pairs under a
//! total order, so results are identical regardless of worker count or
//! partitioning: ties in lc are broken by the lexicographically smallest
//! support.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::ChiSign;
use crate::number_theory::{is_wieferich, lambda_of, multiplicative_order, OddPrime};
use crate::poly2::{words, x_pow_t_minus_1, BinaryPolynomial};
use crate::sequences::{generating_polynomial, BinarySequence};

/// Default cap on enumerated error patterns per stage (per k).
pub const DEFAULT_PATTERN_BUDGET: u64 = 1 << 28;

/// Largest period the full 2^T enumeration accepts.
pub const FULL_ENUM_PERIOD_CAP: usize = 26;

// ---------------------------------------------------------------------------
// Plain linear complexity
// ---------------------------------------------------------------------------

/// LC together with the characteristic polynomial (X^T - 1) / gcd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearComplexity {
    pub lc: usize,
    pub characteristic: BinaryPolynomial,
}

/// LC via the gcd formula. The all-zero sequence reads gcd = X^T - 1, so
/// lc = 0 with characteristic polynomial 1.
pub fn linear_complexity_gcd(s: &BinarySequence) -> LinearComplexity {
    let t = s.period();
    let sx = generating_polynomial(s);
    let xt1 = x_pow_t_minus_1(t);
    if sx.is_zero() {
        return LinearComplexity {
            lc: 0,
            characteristic: BinaryPolynomial::one(),
        };
    }
    let g = xt1.gcd(&sx);
    let lc = t - g.degree().expect("gcd of nonzero polynomials is nonzero");
    let (characteristic, rem) = xt1.div_rem(&g).expect("gcd is nonzero");
    debug_assert!(rem.is_zero());
    LinearComplexity { lc, characteristic }
}

/// Berlekamp-Massey over GF(2), fed exactly two periods. One period is not
/// enough for BM to converge to the periodic LC in general; 2T terms always
/// suffice because LC <= T.
pub fn linear_complexity_bm(s: &BinarySequence) -> usize {
    let t = s.period();
    let n_total = 2 * t;
    let nw = words::words_for(n_total + 1);
    let mut c = vec![0u64; nw];
    let mut b = vec![0u64; nw];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut m = 1usize;
    for n in 0..n_total {
        // discrepancy d = s_n + sum_{i=1..l} c_i s_{n-i}
        let mut d = s.get(n % t);
        for (wi, &word) in c.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let i = wi * 64 + word.trailing_zeros() as usize;
                word &= word - 1;
                if i >= 1 && i <= l {
                    d ^= s.get((n - i) % t);
                }
            }
        }
        if d {
            let keep = c.clone();
            let b_deg = words::degree(&b).expect("b starts at 1 and only grows");
            words::xor_shl(&mut c, &b, b_deg, m);
            if 2 * l <= n {
                l = n + 1 - l;
                b = keep;
                m = 1;
            } else {
                m += 1;
            }
        } else {
            m += 1;
        }
    }
    l
}

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

/// How a profile entry was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Exact: every error support of weight <= k enumerated.
    ExactEnum,
    /// Exact: every candidate sequence enumerated.
    FullEnum,
    /// Upper bound only: some stage exceeded the pattern budget.
    BoundOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub k: usize,
    pub lc: usize,
    pub method: Method,
    /// Error support achieving `lc`, lexicographically smallest among ties.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

/// The map k -> LC_k for k = 0..=k_max; entry i is the entry for k = i.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    pub period: usize,
    #[serde(rename = "profile")]
    pub entries: Vec<ProfileEntry>,
}

impl ComplexityProfile {
    pub fn lc_at(&self, k: usize) -> Option<usize> {
        self.entries.get(k).map(|e| {
            debug_assert_eq!(e.k, k);
            e.lc
        })
    }
}

/// Result of a single k-error search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KErrorResult {
    pub lc: usize,
    pub witness: Vec<usize>,
    pub method: Method,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Max enumerated patterns per stage; beyond it results degrade to
    /// tagged upper bounds instead of erroring.
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_PATTERN_BUDGET,
        }
    }
}

/// min(C(n, k), cap + 1), saturating just above the cap.
fn binomial_capped(n: usize, k: usize, cap: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i as u128 + 1);
        if acc > cap as u128 {
            return cap + 1;
        }
    }
    acc as u64
}

// ---------------------------------------------------------------------------
// Search kernels
// ---------------------------------------------------------------------------

struct Scratch {
    a: Vec<u64>,
    b: Vec<u64>,
}

impl Scratch {
    fn new(t: usize) -> Self {
        let w = words::words_for(t + 1);
        Scratch {
            a: vec![0u64; w],
            b: vec![0u64; w],
        }
    }
}

/// LC of (sequence + error support) using preallocated buffers.
/// `seq` must be padded to words_for(t + 1).
fn eval_support(seq: &[u64], support: &[usize], t: usize, scratch: &mut Scratch) -> u32 {
    scratch.b.copy_from_slice(seq);
    for &i in support {
        scratch.b[i >> 6] ^= 1 << (i & 63);
    }
    if t < 64 {
        return words::lc_word(scratch.b[0], t as u32);
    }
    scratch.a.fill(0);
    scratch.a[t >> 6] |= 1 << (t & 63);
    scratch.a[0] |= 1;
    let g = words::gcd_degree(&mut scratch.a, &mut scratch.b).expect("X^T - 1 is nonzero");
    (t - g) as u32
}

/// Best (lc, support) over all supports of size exactly `j`, parallelized by
/// the leading (largest) support element. Within a branch supports are
/// visited in ascending lexicographic order, so the first strict improvement
/// is already the branch's lexicographically smallest witness; branches are
/// then min-reduced under the full (lc, support) order.
fn eval_stage(seq: &[u64], t: usize, j: usize) -> (u32, Vec<usize>) {
    debug_assert!(j >= 1 && j <= t);
    (j - 1..t)
        .into_par_iter()
        .map(|m| {
            let mut scratch = Scratch::new(t);
            if j == 1 {
                return (eval_support(seq, &[m], t, &mut scratch), vec![m]);
            }
            let mut combo: Vec<usize> = (0..j - 1).collect();
            let mut support = vec![0usize; j];
            let mut best_lc = u32::MAX;
            let mut best: Vec<usize> = Vec::new();
            loop {
                support[..j - 1].copy_from_slice(&combo);
                support[j - 1] = m;
                let lc = eval_support(seq, &support, t, &mut scratch);
                if lc < best_lc {
                    best_lc = lc;
                    best.clear();
                    best.extend_from_slice(&support);
                }
                // next (j-1)-combination of [0, m)
                let mut pos = j - 1;
                loop {
                    if pos == 0 {
                        return (best_lc, best);
                    }
                    pos -= 1;
                    if combo[pos] < m - (j - 1) + pos {
                        combo[pos] += 1;
                        for i in pos + 1..j - 1 {
                            combo[i] = combo[i - 1] + 1;
                        }
                        break;
                    }
                }
            }
        })
        .min()
        .expect("at least one leading element")
}

/// k-error profile by exhaustive support enumeration, exact for every k
/// whose stages all fit the budget. Entries at and beyond the first skipped
/// stage are upper bounds tagged `bound-only`. Once the running minimum hits
/// zero the remaining entries are exact without further enumeration.
pub fn k_error_profile_enum(
    s: &BinarySequence,
    k_max: usize,
    opts: &SearchOptions,
) -> Result<ComplexityProfile> {
    let t = s.period();
    if k_max > t {
        return Err(Error::KOutOfRange {
            k: k_max,
            period: t,
        });
    }
    let mut seq = s.words().to_vec();
    seq.resize(words::words_for(t + 1), 0);
    let mut scratch = Scratch::new(t);
    let lc0 = eval_support(&seq, &[], t, &mut scratch);
    let mut best: (u32, Vec<usize>) = (lc0, Vec::new());
    let mut entries = Vec::with_capacity(k_max + 1);
    entries.push(ProfileEntry {
        k: 0,
        lc: lc0 as usize,
        method: Method::ExactEnum,
        witness: Some(Vec::new()),
    });
    let mut degraded = false;
    for j in 1..=k_max {
        if !degraded && best.0 > 0 {
            if binomial_capped(t, j, opts.budget) > opts.budget {
                degraded = true;
            } else {
                let stage = eval_stage(&seq, t, j);
                best = best.min(stage);
            }
        }
        entries.push(ProfileEntry {
            k: j,
            lc: best.0 as usize,
            method: if degraded {
                Method::BoundOnly
            } else {
                Method::ExactEnum
            },
            witness: Some(best.1.clone()),
        });
    }
    Ok(ComplexityProfile { period: t, entries })
}

/// Minimum LC over all error patterns of weight at most k.
pub fn k_error_lc_enum(s: &BinarySequence, k: usize, opts: &SearchOptions) -> Result<KErrorResult> {
    let profile = k_error_profile_enum(s, k, opts)?;
    let entry = profile
        .entries
        .into_iter()
        .next_back()
        .expect("k + 1 entries");
    Ok(KErrorResult {
        lc: entry.lc,
        witness: entry.witness.unwrap_or_default(),
        method: entry.method,
    })
}

/// Lexicographic order on supports encoded as bitmasks: compare the sorted
/// index lists element by element, shorter-prefix first.
fn support_mask_cmp(a: u64, b: u64) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    if a == b {
        return Ordering::Equal;
    }
    let i = (a ^ b).trailing_zeros();
    // bits below i agree; exactly one of a, b contains i
    let a_has = a >> i & 1 == 1;
    let rest = if a_has { b } else { a } >> i >> 1;
    match (a_has, rest == 0) {
        // the other mask is a proper prefix, so it is smaller
        (true, true) => Ordering::Greater,
        (false, true) => Ordering::Less,
        // the other mask continues with an element above i
        (true, false) => Ordering::Less,
        (false, false) => Ordering::Greater,
    }
}

fn cmp_lc_mask(x: (u32, u64), y: (u32, u64)) -> std::cmp::Ordering {
    x.0.cmp(&y.0).then_with(|| support_mask_cmp(x.1, y.1))
}

fn mask_to_indices(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// Exact profile for every k in [0, T] by enumerating all 2^T candidate
/// sequences (T <= 26). For each candidate the LC and the Hamming distance
/// to s are folded into a per-distance minimum, then prefix-minimized.
pub fn k_error_profile_full(s: &BinarySequence) -> Result<ComplexityProfile> {
    let t = s.period();
    if t > FULL_ENUM_PERIOD_CAP {
        return Err(Error::PeriodOverEnumCap {
            period: t,
            cap: FULL_ENUM_PERIOD_CAP,
        });
    }
    let s_mask = s.words()[0];
    let total: usize = 1 << t;
    const UNSET: (u32, u64) = (u32::MAX, u64::MAX);
    let init = || vec![UNSET; t + 1];
    let merged = (0..total)
        .into_par_iter()
        .with_min_len(1 << 14)
        .fold(init, |mut acc, c| {
            let c = c as u64;
            let lc = words::lc_word(c, t as u32);
            let e = c ^ s_mask;
            let d = e.count_ones() as usize;
            if cmp_lc_mask((lc, e), acc[d]).is_lt() {
                acc[d] = (lc, e);
            }
            acc
        })
        .reduce(init, |mut a, b| {
            for (slot, cand) in a.iter_mut().zip(b) {
                if cmp_lc_mask(cand, *slot).is_lt() {
                    *slot = cand;
                }
            }
            a
        });
    let mut entries = Vec::with_capacity(t + 1);
    let mut cur = merged[0];
    for (k, &cand) in merged.iter().enumerate() {
        if cmp_lc_mask(cand, cur).is_lt() {
            cur = cand;
        }
        entries.push(ProfileEntry {
            k,
            lc: cur.0 as usize,
            method: Method::FullEnum,
            witness: Some(mask_to_indices(cur.1)),
        });
    }
    Ok(ComplexityProfile { period: t, entries })
}

// ---------------------------------------------------------------------------
// Predicted profiles and bounds
// ---------------------------------------------------------------------------

/// Which statement a prediction instantiates. Case 1 is p = 5 (mod 8),
/// case 2 is p = 3 (mod 8).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremSource {
    Thm1,
    Thm2,
    Thm3Case1,
    Thm3Case2,
    Thm4Case1,
    Thm4Case2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PieceKind {
    Exact,
    LowerBound,
    Unspecified,
}

/// One piece of a piecewise profile: k in [k_lo, k_hi] inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionPiece {
    pub k_lo: usize,
    pub k_hi: usize,
    pub kind: PieceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
}

/// The hypotheses the instantiated statement depends on, as checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub non_wieferich: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_primitive_mod_p_squared: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_gamma: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_mod_8: Option<u8>,
}

/// A piecewise prediction covering k = 0..=period without gaps or overlaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremPrediction {
    pub source: TheoremSource,
    pub period: usize,
    pub pieces: Vec<PredictionPiece>,
    pub hypotheses: Hypotheses,
}

impl TheoremPrediction {
    pub fn piece_at(&self, k: usize) -> Option<&PredictionPiece> {
        self.pieces.iter().find(|p| p.k_lo <= k && k <= p.k_hi)
    }

    fn assert_covering(&self) {
        let mut next = 0usize;
        for piece in &self.pieces {
            assert_eq!(piece.k_lo, next, "pieces must tile [0, period]");
            assert!(piece.k_hi >= piece.k_lo);
            next = piece.k_hi + 1;
        }
        assert_eq!(next, self.period + 1);
    }
}

struct PieceBuilder(Vec<PredictionPiece>);

impl PieceBuilder {
    fn push(
        &mut self,
        k_lo: usize,
        k_hi_inclusive: impl TryInto<isize>,
        kind: PieceKind,
        value: Option<u64>,
    ) {
        let k_hi = k_hi_inclusive.try_into().unwrap_or(-1);
        if k_hi < k_lo as isize {
            return; // empty range, e.g. the unspecified gap for p = 3
        }
        self.0.push(PredictionPiece {
            k_lo,
            k_hi: k_hi as usize,
            kind,
            value,
        });
    }
}

fn checked_power(p: u64, r: u32) -> Result<u64> {
    p.checked_pow(r).ok_or(Error::FieldTooLarge { q: u64::MAX })
}

/// LC >= lambda * p^(r-1) for the period-p^r character sequence, r >= 2,
/// p not Wieferich.
pub fn lower_bound_lc(p: OddPrime, r: u32) -> Result<u64> {
    if r < 2 {
        return Err(Error::HypothesesUnmet(format!(
            "the LC lower bound needs r >= 2, got r = {r}"
        )));
    }
    if is_wieferich(p) {
        return Err(Error::HypothesesUnmet(format!("{p} is a Wieferich prime")));
    }
    let lambda = lambda_of(p);
    if lambda <= 1 {
        return Err(Error::HypothesesUnmet(
            "the order of 2 mod p must exceed 1".into(),
        ));
    }
    Ok(lambda * checked_power(p.value(), r - 1)?)
}

/// (lambda * p, threshold): LC_k >= lambda * p holds for all
/// k < threshold, where the threshold is (p-1)^2/2 for chi(gamma) = +1 and
/// 1 + (p-1)^2/2 for chi(gamma) = -1.
pub fn lower_bound_klc(p: OddPrime, chi_gamma: ChiSign) -> Result<(u64, u64)> {
    let bound = lower_bound_lc(p, 2)? / p.value() * p.value(); // lambda * p
    let half = (p.value() - 1) * (p.value() - 1) / 2;
    let threshold = match chi_gamma {
        ChiSign::Plus => half,
        ChiSign::Minus => half + 1,
    };
    Ok((bound, threshold))
}

/// Single-piece prediction: LC_0 >= lambda * p^(r-1).
pub fn thm1_prediction(p: OddPrime, r: u32) -> Result<TheoremPrediction> {
    let bound = lower_bound_lc(p, r)?;
    let t = checked_power(p.value(), r)? as usize;
    let mut pieces = PieceBuilder(Vec::new());
    pieces.push(0, 0isize, PieceKind::LowerBound, Some(bound));
    pieces.push(1, t as isize, PieceKind::Unspecified, None);
    let pred = TheoremPrediction {
        source: TheoremSource::Thm1,
        period: t,
        pieces: pieces.0,
        hypotheses: Hypotheses {
            non_wieferich: true,
            two_primitive_mod_p_squared: None,
            chi_gamma: None,
            p_mod_8: None,
        },
    };
    pred.assert_covering();
    Ok(pred)
}

/// LC_k >= lambda * p up to the sign-dependent threshold; unspecified after.
pub fn thm2_prediction(p: OddPrime, chi_gamma: ChiSign) -> Result<TheoremPrediction> {
    let (bound, threshold) = lower_bound_klc(p, chi_gamma)?;
    let t = (p.value() * p.value()) as usize;
    let mut pieces = PieceBuilder(Vec::new());
    pieces.push(
        0,
        threshold as isize - 1,
        PieceKind::LowerBound,
        Some(bound),
    );
    pieces.push(threshold as usize, t as isize, PieceKind::Unspecified, None);
    let pred = TheoremPrediction {
        source: TheoremSource::Thm2,
        period: t,
        pieces: pieces.0,
        hypotheses: Hypotheses {
            non_wieferich: true,
            two_primitive_mod_p_squared: None,
            chi_gamma: Some(chi_gamma.value()),
            p_mod_8: None,
        },
    };
    pred.assert_covering();
    Ok(pred)
}

/// The exact k-error profile for q = p^2 when 2 is primitive modulo p^2,
/// keyed by the character sign of gamma and p mod 8. The ranges the
/// statements do not cover are marked unspecified.
pub fn predict_profile(p: OddPrime, chi_gamma: ChiSign) -> Result<TheoremPrediction> {
    let pv = p.value();
    if is_wieferich(p) {
        return Err(Error::HypothesesUnmet(format!("{p} is a Wieferich prime")));
    }
    let p_squared = pv * pv;
    let ord = multiplicative_order(2, p_squared)?;
    if ord != pv * (pv - 1) {
        return Err(Error::HypothesesUnmet(format!(
            "2 is not primitive modulo {pv}^2: order {ord} < {}",
            pv * (pv - 1)
        )));
    }
    let p_mod_8 = (pv % 8) as u8;
    // 2 primitive mod p forces 2 to be a non-residue, so p = 3 or 5 mod 8
    debug_assert!(p_mod_8 == 3 || p_mod_8 == 5);
    let t = p_squared as usize;
    let half = ((pv - 1) * (pv - 1) / 2) as usize;
    let zero_from = ((p_squared - 1) / 2) as usize;
    let pu = pv as usize;

    let mut b = PieceBuilder(Vec::new());
    let source = match (chi_gamma, p_mod_8) {
        (ChiSign::Plus, 5) => {
            b.push(0, 0isize, PieceKind::Exact, Some(p_squared - 1));
            b.push(
                1,
                pu as isize - 2,
                PieceKind::Exact,
                Some(p_squared - pv + 1),
            );
            b.push(
                pu - 1,
                half as isize - 1,
                PieceKind::Exact,
                Some(p_squared - pv),
            );
            b.push(half, half as isize, PieceKind::Exact, Some(pv - 1));
            b.push(
                half + 1,
                zero_from as isize - 1,
                PieceKind::Unspecified,
                None,
            );
            b.push(zero_from, t as isize, PieceKind::Exact, Some(0));
            TheoremSource::Thm3Case1
        }
        (ChiSign::Plus, _) => {
            b.push(0, half as isize - 1, PieceKind::Exact, Some(p_squared - pv));
            b.push(half, half as isize, PieceKind::Exact, Some(pv - 1));
            b.push(
                half + 1,
                zero_from as isize - 1,
                PieceKind::Unspecified,
                None,
            );
            b.push(zero_from, t as isize, PieceKind::Exact, Some(0));
            TheoremSource::Thm3Case2
        }
        (ChiSign::Minus, 5) => {
            let kk = half + 1;
            b.push(0, kk as isize - 1, PieceKind::Exact, Some(p_squared - pv));
            b.push(kk, kk as isize, PieceKind::Exact, Some(pv));
            b.push(kk + 1, zero_from as isize - 1, PieceKind::Unspecified, None);
            b.push(zero_from, t as isize, PieceKind::Exact, Some(0));
            TheoremSource::Thm4Case1
        }
        (ChiSign::Minus, _) => {
            let kk = half + 1;
            b.push(0, 0isize, PieceKind::Exact, Some(p_squared - 1));
            b.push(
                1,
                pu as isize - 2,
                PieceKind::Exact,
                Some(p_squared - pv + 1),
            );
            b.push(
                pu - 1,
                kk as isize - 1,
                PieceKind::Exact,
                Some(p_squared - pv),
            );
            b.push(kk, kk as isize, PieceKind::Exact, Some(pv));
            b.push(kk + 1, zero_from as isize - 1, PieceKind::Unspecified, None);
            b.push(zero_from, t as isize, PieceKind::Exact, Some(0));
            TheoremSource::Thm4Case2
        }
    };
    let pred = TheoremPrediction {
        source,
        period: t,
        pieces: b.0,
        hypotheses: Hypotheses {
            non_wieferich: true,
            two_primitive_mod_p_squared: Some(true),
            chi_gamma: Some(chi_gamma.value()),
            p_mod_8: Some(p_mod_8),
        },
    };
    pred.assert_covering();
    Ok(pred)
}
