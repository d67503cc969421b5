//! Sequence generators and their structural statistics.
//!
//! All four constructions are driven by a [`FieldDescriptor`]: the character
//! sequence (period q), the d-ary indexed sequence (period q), the modified
//! balanced construction (period p^2), and the Sidelnikov-style ordering by
//! powers of alpha (period q - 1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{self, ChiSign, FieldConfig, FieldDescriptor};
use crate::number_theory::{legendre_symbol, OddPrime};
use crate::poly2::BinaryPolynomial;

/// One period of a binary sequence, bit-packed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySequence {
    period: usize,
    words: Vec<u64>,
}

impl BinarySequence {
    pub fn zeroes(period: usize) -> Self {
        assert!(period >= 1, "period must be positive");
        BinarySequence {
            period,
            words: vec![0u64; period.div_ceil(64)],
        }
    }

    /// Parse a line of '0'/'1' characters (trailing newline tolerated).
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let s = s.trim_end_matches(['\n', '\r']);
        if s.is_empty() {
            return Err(Error::Parse("empty sequence".into()));
        }
        let mut seq = BinarySequence::zeroes(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => seq.set(i, true),
                other => {
                    return Err(Error::Parse(format!(
                        "invalid character {other:?} at position {i}"
                    )))
                }
            }
        }
        Ok(seq)
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn get(&self, n: usize) -> bool {
        debug_assert!(n < self.period);
        self.words[n / 64] >> (n % 64) & 1 == 1
    }

    pub fn set(&mut self, n: usize, value: bool) {
        debug_assert!(n < self.period);
        if value {
            self.words[n / 64] |= 1 << (n % 64);
        } else {
            self.words[n / 64] &= !(1 << (n % 64));
        }
    }

    pub fn flip(&mut self, n: usize) {
        debug_assert!(n < self.period);
        self.words[n / 64] ^= 1 << (n % 64);
    }

    /// Number of ones in one period.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.period)
            .map(|n| if self.get(n) { '1' } else { '0' })
            .collect()
    }
}

impl std::fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// One period of a sequence over Z_d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DarySequence {
    period: usize,
    d: u32,
    symbols: Vec<u32>,
}

impl DarySequence {
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    /// Digit-string form, defined for d <= 10 only.
    pub fn to_digit_string(&self) -> Option<String> {
        if self.d > 10 {
            return None;
        }
        Some(
            self.symbols
                .iter()
                .map(|&s| char::from_digit(s, 10).unwrap())
                .collect(),
        )
    }
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// The character sequence: bit 0 at n = 0, else (1 - chi(xi_n)) / 2.
pub fn gen_character_sequence(f: &FieldDescriptor) -> BinarySequence {
    let q = f.q() as usize;
    let mut seq = BinarySequence::zeroes(q);
    for n in 1..q {
        let e = f.element(n as u64).expect("n < q");
        if f.quadratic_character(e) < 0 {
            seq.set(n, true);
        }
    }
    seq
}

/// The indexed sequence over Z_d: symbol 0 at n = 0, else ind(xi_n) mod d.
/// Any d >= 2 is accepted; d does not need to divide q - 1.
pub fn gen_indexed_sequence(f: &FieldDescriptor, d: u32) -> Result<DarySequence> {
    if d < 2 {
        return Err(Error::InvalidSpec(format!("d must be at least 2, got {d}")));
    }
    let q = f.q() as usize;
    let mut symbols = vec![0u32; q];
    for (n, slot) in symbols.iter_mut().enumerate().skip(1) {
        let e = f.element(n as u64).expect("n < q");
        *slot = (f.discrete_log(e).expect("nonzero") % d as u64) as u32;
    }
    Ok(DarySequence {
        period: q,
        d,
        symbols,
    })
}

/// The modified construction over q = p^2, which breaks the constant runs
/// the plain character sequence has on the first row and column:
/// (-1)^s_n = 1 at n = 0, (j/p) at n = jp, and (i/p) chi(xi_n) elsewhere.
pub fn gen_modified_sequence(f: &FieldDescriptor) -> Result<BinarySequence> {
    if f.r() != 2 {
        return Err(Error::InvalidSpec(format!(
            "modified construction requires r = 2, got r = {}",
            f.r()
        )));
    }
    let p = f.p();
    let pv = p.value();
    let q = f.q() as usize;
    let mut seq = BinarySequence::zeroes(q);
    for n in 1..q {
        let i = n as u64 % pv;
        let j = n as u64 / pv;
        let sign: i8 = if i == 0 {
            legendre_symbol(j as i64, p)
        } else {
            let chi = f.quadratic_character(f.element(n as u64).expect("n < q"));
            legendre_symbol(i as i64, p) * chi
        };
        debug_assert_ne!(sign, 0);
        if sign < 0 {
            seq.set(n, true);
        }
    }
    Ok(seq)
}

/// The Sidelnikov-style sequence of period q - 1: bit 0 at n = (q-1)/2, else
/// (1 - chi(alpha^n - 1)) / 2. At n = 0 the argument is zero; the generator
/// emits 0 there (reading chi(0) as +1) and reports the position so callers
/// can flag the convention.
pub fn gen_sidelnikov(f: &FieldDescriptor) -> (BinarySequence, Vec<usize>) {
    let q = f.q();
    let period = (q - 1) as usize;
    let mut seq = BinarySequence::zeroes(period);
    let mut chi_zero_positions = Vec::new();
    let one = f.one();
    for n in 0..period {
        if n == period / 2 {
            continue;
        }
        let arg = f.sub(f.exp(n as u64), one);
        match f.quadratic_character(arg) {
            0 => chi_zero_positions.push(n),
            c if c < 0 => seq.set(n, true),
            _ => {}
        }
    }
    (seq, chi_zero_positions)
}

// ---------------------------------------------------------------------------
// Structural statistics
// ---------------------------------------------------------------------------

/// Row weights of a period-p^2 sequence: entry i counts the ones among
/// s\[i\], s\[i + p\], ..., s\[i + (p-1)p\].
pub fn weight_vectors(s: &BinarySequence, p: OddPrime) -> Result<Vec<usize>> {
    let pv = p.value() as usize;
    if s.period() != pv * pv {
        return Err(Error::PeriodNotPSquared {
            period: s.period(),
            p: p.value(),
        });
    }
    Ok((0..pv)
        .map(|i| (0..pv).filter(|&j| s.get(i + j * pv)).count())
        .collect())
}

/// S(X) = sum s_i X^i over one period.
pub fn generating_polynomial(s: &BinarySequence) -> BinaryPolynomial {
    BinaryPolynomial::from_words(s.words().to_vec())
}

/// Smallest divisor t of the stored period such that the sequence is
/// t-periodic.
pub fn least_period(s: &BinarySequence) -> usize {
    let t = s.period();
    for cand in 1..=t {
        if t % cand != 0 {
            continue;
        }
        if (cand..t).all(|n| s.get(n) == s.get(n - cand)) {
            return cand;
        }
    }
    t
}

// ---------------------------------------------------------------------------
// Reproducible construction recipes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Character,
    Indexed,
    Modified,
    Sidelnikov,
}

/// How the second basis element of a quadratic extension is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaChoice {
    #[default]
    Default,
    /// Smallest element outside F_p with the given character sign.
    Sign(ChiSign),
    /// Explicit element, as a default-ordering (natural) index.
    Index(u64),
}

impl GammaChoice {
    pub fn is_default(&self) -> bool {
        matches!(self, GammaChoice::Default)
    }
}

/// Everything needed to regenerate a sequence bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub kind: SequenceKind,
    pub p: u64,
    pub r: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
    /// Ordering index of the primitive element, validated as a generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u64>,
    #[serde(default, skip_serializing_if = "GammaChoice::is_default")]
    pub gamma: GammaChoice,
    /// Symbol alphabet size; indexed sequences only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
}

impl SequenceSpec {
    pub fn new(kind: SequenceKind, p: u64, r: u32) -> Self {
        SequenceSpec {
            kind,
            p,
            r,
            modulus: None,
            alpha: None,
            gamma: GammaChoice::Default,
            d: None,
        }
    }

    pub fn with_gamma(mut self, gamma: GammaChoice) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_d(mut self, d: u32) -> Self {
        self.d = Some(d);
        self
    }

    pub fn build_field(&self) -> Result<FieldDescriptor> {
        let cfg = FieldConfig {
            p: self.p,
            r: self.r,
            modulus: self.modulus.clone(),
            gamma_override: None,
            alpha_index: self.alpha,
        };
        match self.gamma {
            GammaChoice::Default => cfg.build(),
            GammaChoice::Sign(sign) => {
                if self.r != 2 {
                    return Err(Error::GammaRequiresDegreeTwo(self.r));
                }
                gf::build_with_gamma_sign(&cfg, sign)
            }
            GammaChoice::Index(n) => {
                if self.r != 2 {
                    return Err(Error::GammaRequiresDegreeTwo(self.r));
                }
                FieldConfig {
                    gamma_override: Some(vec![n]),
                    ..cfg
                }
                .build()
            }
        }
    }

    pub fn generate(&self) -> Result<GeneratedSequence> {
        match self.kind {
            SequenceKind::Indexed => {
                let Some(d) = self.d else {
                    return Err(Error::InvalidSpec("indexed sequences require d".into()));
                };
                let f = self.build_field()?;
                Ok(GeneratedSequence::Dary {
                    spec: self.clone(),
                    sequence: gen_indexed_sequence(&f, d)?,
                })
            }
            kind => {
                if self.d.is_some() {
                    return Err(Error::InvalidSpec(
                        "d applies to indexed sequences only".into(),
                    ));
                }
                let f = self.build_field()?;
                let (sequence, chi_zero_positions) = match kind {
                    SequenceKind::Character => (gen_character_sequence(&f), Vec::new()),
                    SequenceKind::Modified => (gen_modified_sequence(&f)?, Vec::new()),
                    SequenceKind::Sidelnikov => gen_sidelnikov(&f),
                    SequenceKind::Indexed => unreachable!(),
                };
                Ok(GeneratedSequence::Binary {
                    spec: self.clone(),
                    sequence,
                    chi_zero_positions,
                })
            }
        }
    }
}

/// A generated sequence bundled with its recipe.
#[derive(Debug, Clone)]
pub enum GeneratedSequence {
    Binary {
        spec: SequenceSpec,
        sequence: BinarySequence,
        /// Positions where chi was evaluated at zero and the +1 convention
        /// applied (Sidelnikov position 0).
        chi_zero_positions: Vec<usize>,
    },
    Dary {
        spec: SequenceSpec,
        sequence: DarySequence,
    },
}

impl GeneratedSequence {
    pub fn period(&self) -> usize {
        match self {
            GeneratedSequence::Binary { sequence, .. } => sequence.period(),
            GeneratedSequence::Dary { sequence, .. } => sequence.period(),
        }
    }

    /// Single-line text form; d > 10 has none.
    pub fn to_text(&self) -> Result<String> {
        match self {
            GeneratedSequence::Binary { sequence, .. } => Ok(sequence.to_bit_string()),
            GeneratedSequence::Dary { sequence, .. } => sequence
                .to_digit_string()
                .ok_or_else(|| Error::InvalidSpec("no text form for d > 10; use JSON".into())),
        }
    }
}

/// JSON wire form shared by the generator output and the analysis inputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<SequenceSpec>,
    pub period: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bits: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<SymbolsRepr>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chi_zero_positions: Vec<usize>,
}

/// Digit string for d <= 10, explicit array otherwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolsRepr {
    Digits(String),
    Values(Vec<u32>),
}

impl From<&GeneratedSequence> for SequenceJson {
    fn from(g: &GeneratedSequence) -> Self {
        match g {
            GeneratedSequence::Binary {
                spec,
                sequence,
                chi_zero_positions,
            } => SequenceJson {
                spec: Some(spec.clone()),
                period: sequence.period(),
                bits: Some(sequence.to_bit_string()),
                d: None,
                symbols: None,
                chi_zero_positions: chi_zero_positions.clone(),
            },
            GeneratedSequence::Dary { spec, sequence } => SequenceJson {
                spec: Some(spec.clone()),
                period: sequence.period(),
                bits: None,
                d: Some(sequence.d()),
                symbols: Some(match sequence.to_digit_string() {
                    Some(s) => SymbolsRepr::Digits(s),
                    None => SymbolsRepr::Values(sequence.symbols().to_vec()),
                }),
                chi_zero_positions: Vec::new(),
            },
        }
    }
}

impl SequenceJson {
    /// Recover the binary sequence, validating length against the period.
    pub fn to_binary(&self) -> Result<BinarySequence> {
        let Some(bits) = &self.bits else {
            return Err(Error::Parse(
                "sequence JSON has no \"bits\" field (binary sequences only)".into(),
            ));
        };
        let seq = BinarySequence::from_bit_str(bits)?;
        if seq.period() != self.period {
            return Err(Error::Parse(format!(
                "declared period {} does not match {} bits",
                self.period,
                seq.period()
            )));
        }
        Ok(seq)
    }
}
