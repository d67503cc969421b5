//! Bit-packed polynomials over GF(2).
//!
//! Bit `i` of the word array is the coefficient of `X^i`. The zero polynomial
//! has an empty word array; otherwise the top word is nonzero, so the degree
//! is read off the last word in O(1).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number_theory::OddPrime;

/// Low-level helpers on raw word slices. The complexity search kernels reuse
/// these to run gcds in preallocated scratch buffers.
pub(crate) mod words {
    pub(crate) fn words_for(bits: usize) -> usize {
        bits.div_ceil(64)
    }

    /// Degree = index of the highest set bit, `None` for all-zero.
    pub(crate) fn degree(w: &[u64]) -> Option<usize> {
        for (i, &word) in w.iter().enumerate().rev() {
            if word != 0 {
                return Some(i * 64 + 63 - word.leading_zeros() as usize);
            }
        }
        None
    }

    /// `dst ^= src << shift`, where only bits 0..=src_deg of src are set.
    /// The caller guarantees dst has room for bit src_deg + shift.
    pub(crate) fn xor_shl(dst: &mut [u64], src: &[u64], src_deg: usize, shift: usize) {
        let word_shift = shift / 64;
        let bit_shift = shift % 64;
        let src_words = src_deg / 64 + 1;
        if bit_shift == 0 {
            for i in 0..src_words {
                dst[i + word_shift] ^= src[i];
            }
        } else {
            for i in 0..src_words {
                dst[i + word_shift] ^= src[i] << bit_shift;
                let high = src[i] >> (64 - bit_shift);
                if high != 0 {
                    dst[i + word_shift + 1] ^= high;
                }
            }
        }
    }

    /// Reduce `a` modulo `b` in place; `deg_b` must be `degree(b)`.
    /// Returns the degree of the remainder.
    pub(crate) fn rem_inplace(a: &mut [u64], b: &[u64], deg_b: usize) -> Option<usize> {
        let mut deg_a = degree(a);
        while let Some(da) = deg_a {
            if da < deg_b {
                break;
            }
            xor_shl(a, b, deg_b, da - deg_b);
            // the leading bit was cancelled, rescan downward from da
            deg_a = degree(&a[..da / 64 + 1]);
        }
        deg_a
    }

    /// Euclid on two scratch buffers; destroys both; returns deg(gcd).
    /// gcd(a, 0) = a by convention; returns `None` only when both are zero.
    pub(crate) fn gcd_degree(a: &mut [u64], b: &mut [u64]) -> Option<usize> {
        let mut x: &mut [u64] = a;
        let mut y: &mut [u64] = b;
        let mut dy = degree(y);
        loop {
            let Some(d) = dy else {
                return degree(x);
            };
            let rem_deg = rem_inplace(x, y, d);
            std::mem::swap(&mut x, &mut y);
            dy = rem_deg;
        }
    }

    /// Linear complexity of the T-periodic bit sequence packed in a single
    /// word: T - deg gcd(X^T - 1, S(X)). Fast path for T <= 63.
    #[inline]
    pub(crate) fn lc_word(seq_bits: u64, t: u32) -> u32 {
        debug_assert!(t < 64);
        if seq_bits == 0 {
            return 0;
        }
        let mut a = (1u64 << t) | 1;
        let mut b = seq_bits;
        loop {
            let db = 63 - b.leading_zeros();
            while a != 0 {
                let da = 63 - a.leading_zeros();
                if da < db {
                    break;
                }
                a ^= b << (da - db);
            }
            if a == 0 {
                return t - db;
            }
            std::mem::swap(&mut a, &mut b);
        }
    }
}

/// A polynomial over GF(2), bit-packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BinaryPolynomial {
    words: Vec<u64>,
}

impl BinaryPolynomial {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self { words: vec![1] }
    }

    /// The monomial X^n.
    pub fn x_pow(n: usize) -> Self {
        let mut words = vec![0u64; n / 64 + 1];
        words[n / 64] = 1 << (n % 64);
        Self { words }
    }

    /// Build from raw words (bit i = coefficient of X^i), trimming zeros.
    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Self { words };
        p.normalize();
        p
    }

    /// Build from the exponents whose coefficients are 1.
    pub fn from_exponents(exponents: &[usize]) -> Self {
        let mut words = vec![0u64; exponents.iter().map(|&e| e / 64 + 1).max().unwrap_or(0)];
        for &e in exponents {
            words[e / 64] ^= 1 << (e % 64);
        }
        Self::from_words(words)
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        words::degree(&self.words)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Addition = subtraction = XOR in characteristic 2.
    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (i, w) in short.words.iter().enumerate() {
            words[i] ^= w;
        }
        Self::from_words(words)
    }

    /// Schoolbook shift-XOR multiply, iterating the set bits of the shorter
    /// operand.
    pub fn mul(&self, other: &Self) -> Self {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Self::zero();
        };
        let (a, b, db) = if da >= db {
            (self, other, db)
        } else {
            (other, self, da)
        };
        let da = a.degree().unwrap();
        let mut words = vec![0u64; words::words_for(da + db + 1)];
        for (i, &w) in b.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let bit = w.trailing_zeros() as usize;
                words::xor_shl(&mut words, &a.words, da, i * 64 + bit);
                w &= w - 1;
            }
        }
        Self::from_words(words)
    }

    /// Squaring spreads each bit i to bit 2i.
    pub fn square(&self) -> Self {
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        let mut words = vec![0u64; words::words_for(2 * d + 1)];
        for (i, &w) in self.words.iter().enumerate() {
            let lo = spread_bits(w as u32);
            let hi = spread_bits((w >> 32) as u32);
            words[2 * i] = lo;
            if hi != 0 {
                words[2 * i + 1] = hi;
            }
        }
        Self::from_words(words)
    }

    /// Long division: returns (quotient, remainder).
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let Some(db) = divisor.degree() else {
            return Err(Error::ZeroDivisor);
        };
        let mut rem = self.words.clone();
        let mut quot = vec![0u64; self.words.len()];
        let mut deg_rem = words::degree(&rem);
        while let Some(da) = deg_rem {
            if da < db {
                break;
            }
            let shift = da - db;
            quot[shift / 64] ^= 1 << (shift % 64);
            words::xor_shl(&mut rem, &divisor.words, db, shift);
            deg_rem = words::degree(&rem[..da / 64 + 1]);
        }
        Ok((Self::from_words(quot), Self::from_words(rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Euclidean gcd; gcd(a, 0) = a. Every nonzero gcd over GF(2) is monic.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a
    }

    /// Hex text form: the coefficient bitset serialized as little-endian
    /// bytes (bit i of the byte stream = coefficient of X^i), two lowercase
    /// hex digits per byte. The zero polynomial is the empty string.
    pub fn to_hex(&self) -> String {
        let Some(d) = self.degree() else {
            return String::new();
        };
        let nbytes = d / 8 + 1;
        let mut s = String::with_capacity(2 * nbytes);
        for i in 0..nbytes {
            let byte = (self.words[i / 8] >> (8 * (i % 8))) as u8;
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        if s.len() % 2 != 0 {
            return Err(Error::Parse(format!("odd-length hex string {s:?}")));
        }
        let mut words = vec![0u64; words::words_for(s.len() * 4)];
        for (i, chunk) in s.as_bytes().chunks(2).enumerate() {
            let text = std::str::from_utf8(chunk)
                .map_err(|_| Error::Parse(format!("non-ascii byte in hex string {s:?}")))?;
            let byte = u8::from_str_radix(text, 16)
                .map_err(|_| Error::Parse(format!("bad hex byte {text:?}")))?;
            words[i / 8] |= (byte as u64) << (8 * (i % 8));
        }
        Ok(Self::from_words(words))
    }
}

/// Spread the 32 bits of `w` into the even bit positions of a u64.
fn spread_bits(w: u32) -> u64 {
    let mut x = w as u64;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

/// Serialized form: degree alongside the hex bitset.
#[derive(Serialize, Deserialize)]
struct PolyRepr {
    degree: Option<usize>,
    hex: String,
}

impl Serialize for BinaryPolynomial {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            degree: self.degree(),
            hex: self.to_hex(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for BinaryPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(de)?;
        let poly = BinaryPolynomial::from_hex(&repr.hex).map_err(serde::de::Error::custom)?;
        if poly.degree() != repr.degree {
            return Err(serde::de::Error::custom(format!(
                "declared degree {:?} does not match bitset degree {:?}",
                repr.degree,
                poly.degree()
            )));
        }
        Ok(poly)
    }
}

/// X^T - 1 over GF(2): bits 0 and T.
pub fn x_pow_t_minus_1(t: usize) -> BinaryPolynomial {
    assert!(t >= 1, "period must be positive");
    BinaryPolynomial::from_exponents(&[0, t])
}

/// 1 + X^(p^(r-1)) + X^(2 p^(r-1)) + ... + X^((p-1) p^(r-1)).
///
/// Satisfies X^(p^r) - 1 = (X^(p^(r-1)) - 1) * phi_r(p, r).
pub fn phi_r(p: OddPrime, r: u32) -> BinaryPolynomial {
    let p = p.value();
    let step = p.pow(r - 1) as usize;
    let exponents: Vec<usize> = (0..p as usize).map(|j| j * step).collect();
    BinaryPolynomial::from_exponents(&exponents)
}

/// Distinct-degree profile of a squarefree polynomial: maps d to the number
/// of distinct irreducible factors of degree exactly d.
///
/// Runs the usual filtration gcd(f, X^(2^d) - X) up to deg f / 2, then
/// classifies whatever remains as a single irreducible factor.
pub fn distinct_degree_profile(f: &BinaryPolynomial) -> BTreeMap<usize, usize> {
    let mut profile = BTreeMap::new();
    let mut f = f.clone();
    let Some(mut deg_f) = f.degree() else {
        return profile;
    };
    if deg_f == 0 {
        return profile;
    }
    let x = BinaryPolynomial::x_pow(1);
    let mut h = x.rem(&f).expect("f nonzero"); // X^(2^0) mod f
    let mut d = 0usize;
    while 2 * (d + 1) <= deg_f {
        d += 1;
        h = h.square().rem(&f).expect("f nonzero");
        let g = f.gcd(&h.add(&x));
        let dg = g.degree().expect("gcd of nonzero f is nonzero");
        if dg > 0 {
            debug_assert_eq!(dg % d, 0);
            *profile.entry(d).or_insert(0) += dg / d;
            let (q, rem) = f.div_rem(&g).expect("g nonzero");
            debug_assert!(rem.is_zero());
            f = q;
            deg_f -= dg;
            if deg_f == 0 {
                return profile;
            }
            h = h.rem(&f).expect("f nonzero");
        }
    }
    if deg_f > 0 {
        *profile.entry(deg_f).or_insert(0) += 1;
    }
    profile
}
