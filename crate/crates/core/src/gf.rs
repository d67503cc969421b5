//! Finite fields F_{p^r} with an explicit element ordering.
//!
//! Elements are addressed by their ordering index n: writing
//! n = n_1 + n_2 p + ... + n_r p^(r-1), the element at index n is
//! n_1 g_1 + n_2 g_2 + ... + n_r g_r for a fixed basis {g_1 = 1, g_2, ...}.
//! The default basis is the polynomial basis {1, x, x^2, ...} of
//! F_p\[x\]/(modulus); a quadratic extension can re-order itself around any
//! gamma outside F_p, which is how the two character signs chi(gamma) = +-1
//! are realized.
//!
//! Multiplication and inversion route through exp/log tables built once at
//! construction (q - 2 successive multiplications); addition is digit-wise
//! mod p directly on ordering indices, which is valid for every basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number_theory::{self, OddPrime};

/// Hard cap on the field size: the exp/log tables stay in memory.
pub const Q_CAP: u64 = 1 << 26;

/// A field element, identified by its ordering index in [0, q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub fn index(self) -> u64 {
        self.0 as u64
    }
}

/// Sign of the quadratic character, used to pick gamma for q = p^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum ChiSign {
    Plus,
    Minus,
}

impl ChiSign {
    pub fn value(self) -> i8 {
        match self {
            ChiSign::Plus => 1,
            ChiSign::Minus => -1,
        }
    }
}

impl From<ChiSign> for i8 {
    fn from(s: ChiSign) -> i8 {
        s.value()
    }
}

impl TryFrom<i8> for ChiSign {
    type Error = Error;
    fn try_from(v: i8) -> Result<Self> {
        match v {
            1 => Ok(ChiSign::Plus),
            -1 => Ok(ChiSign::Minus),
            _ => Err(Error::Parse(format!(
                "character sign must be 1 or -1, got {v}"
            ))),
        }
    }
}

impl std::fmt::Display for ChiSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F_p (internal; only what field construction needs)
// ---------------------------------------------------------------------------

fn fp_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Reduce `a` by the monic polynomial `f` in place semantics.
fn fp_rem(mut a: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
    let df = fp_deg(f).expect("modulus is nonzero");
    while let Some(da) = fp_deg(&a) {
        if da < df {
            break;
        }
        let c = a[da];
        for j in 0..=df {
            let sub = c * f[j] % p;
            a[da - df + j] = (a[da - df + j] + p - sub) % p;
        }
    }
    fp_trim(a)
}

fn fp_mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(prod, f, p)
}

fn fp_pow_mod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = fp_rem(a.to_vec(), f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mul_mod(&acc, &base, f, p);
        }
        base = fp_mul_mod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    fp_trim(out)
}

fn fp_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    a = fp_trim(a);
    b = fp_trim(b);
    while !b.is_empty() {
        // reduce a mod b, scaling by the inverse of b's leading coefficient
        let db = fp_deg(&b).unwrap();
        let inv = number_theory::mod_pow(b[db], p - 2, p);
        while let Some(da) = fp_deg(&a) {
            if da < db {
                break;
            }
            let c = a[da] * inv % p;
            for j in 0..=db {
                let sub = c * b[j] % p;
                a[da - db + j] = (a[da - db + j] + p - sub) % p;
            }
        }
        a = fp_trim(a);
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Monic f of degree r is irreducible over F_p iff X^(p^r) = X (mod f) and
/// gcd(X^(p^(r/l)) - X, f) = 1 for every prime l dividing r.
fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let r = match fp_deg(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if r == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // frobenius[i] = X^(p^(i+1)) mod f
    let mut frobenius = Vec::with_capacity(r);
    let mut h = x.clone();
    for _ in 0..r {
        h = fp_pow_mod(&h, p, f, p);
        frobenius.push(h.clone());
    }
    if frobenius[r - 1] != fp_rem(x.clone(), f, p) {
        return false;
    }
    for (l, _) in number_theory::factorize(r as u64) {
        let stage = &frobenius[r / l as usize - 1];
        let diff = fp_sub(stage, &x, p);
        if diff.is_empty() {
            return false;
        }
        if fp_deg(&fp_gcd(f.to_vec(), diff, p)).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

/// The monic degree-r irreducible over F_p that is minimal under the
/// encoding c_0 + c_1 p + ... + c_(r-1) p^(r-1) of its non-leading
/// coefficients. Returns all r + 1 coefficients.
pub fn find_irreducible(p: OddPrime, r: u32) -> Result<Vec<u64>> {
    let pv = p.value();
    let q = checked_q(pv, r)?;
    for m in 0..q {
        let mut coeffs = vec![0u64; r as usize + 1];
        let mut mm = m;
        for c in coeffs.iter_mut().take(r as usize) {
            *c = mm % pv;
            mm /= pv;
        }
        coeffs[r as usize] = 1;
        if fp_is_irreducible(&coeffs, pv) {
            return Ok(coeffs);
        }
    }
    unreachable!("an irreducible of every degree exists over F_p")
}

fn checked_q(p: u64, r: u32) -> Result<u64> {
    if r == 0 {
        return Err(Error::InvalidSpec(
            "extension degree r must be at least 1".into(),
        ));
    }
    let mut q: u64 = 1;
    for _ in 0..r {
        q = q.checked_mul(p).unwrap_or(u64::MAX);
        if q > Q_CAP {
            return Err(Error::FieldTooLarge { q });
        }
    }
    Ok(q)
}

// ---------------------------------------------------------------------------
// Natural (polynomial-basis) representation
// ---------------------------------------------------------------------------

const MAX_R: usize = 16; // 3^16 < 2^26 <= 3^17, so r never exceeds 16

#[derive(Debug, Clone)]
struct NatCtx {
    p: u64,
    r: usize,
    modulus: Vec<u64>,
}

impl NatCtx {
    fn digits(&self, mut n: u64, out: &mut [u64]) {
        for slot in out.iter_mut() {
            *slot = n % self.p;
            n /= self.p;
        }
    }

    fn index(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        let r = self.r;
        let mut da = [0u64; MAX_R];
        let mut db = [0u64; MAX_R];
        self.digits(a, &mut da[..r]);
        self.digits(b, &mut db[..r]);
        let mut prod = [0u64; 2 * MAX_R];
        for i in 0..r {
            if da[i] == 0 {
                continue;
            }
            for j in 0..r {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        // monic reduction: X^r = -sum modulus[j] X^j
        for i in (r..2 * r - 1).rev() {
            let c = prod[i];
            if c != 0 {
                prod[i] = 0;
                for j in 0..r {
                    let sub = c * self.modulus[j] % p;
                    prod[i - r + j] = (prod[i - r + j] + p - sub) % p;
                }
            }
        }
        self.index(&prod[..r])
    }

    fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64; // natural index of the unit element
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Field descriptor
// ---------------------------------------------------------------------------

/// Construction recipe for a field. `gamma_override` lists the natural
/// (polynomial-basis ordering) indices of g_2..g_r; `alpha_index` is an
/// ordering index in the *resulting* ordering and must be a generator.
#[derive(Debug, Clone, Default)]
pub struct FieldConfig {
    pub p: u64,
    pub r: u32,
    pub modulus: Option<Vec<u64>>,
    pub gamma_override: Option<Vec<u64>>,
    pub alpha_index: Option<u64>,
}

impl FieldConfig {
    pub fn new(p: u64, r: u32) -> Self {
        FieldConfig {
            p,
            r,
            ..Default::default()
        }
    }

    pub fn build(&self) -> Result<FieldDescriptor> {
        FieldDescriptor::from_config(self)
    }
}

/// Build F_{p^r} with all defaults: minimal irreducible modulus, polynomial
/// basis, smallest-index generator as alpha.
pub fn build_field(p: u64, r: u32) -> Result<FieldDescriptor> {
    FieldConfig::new(p, r).build()
}

/// Build F_{p^2} ordered by the basis {1, gamma}, where gamma is the element
/// of smallest default-ordering index outside F_p with chi(gamma) = sign.
/// Modulus and alpha overrides in `cfg` are respected.
pub fn build_with_gamma_sign(cfg: &FieldConfig, sign: ChiSign) -> Result<FieldDescriptor> {
    let mut probe = cfg.clone();
    probe.gamma_override = None;
    probe.alpha_index = None;
    let base = probe.build()?;
    let gamma = base.select_gamma(sign)?;
    let mut final_cfg = cfg.clone();
    final_cfg.gamma_override = Some(vec![base.natural_index(gamma)]);
    final_cfg.build()
}

/// A fully materialized field: modulus, ordering basis, primitive element,
/// and the exp/log tables. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FieldDescriptor {
    p: OddPrime,
    r: u32,
    q: u64,
    nat: NatCtx,
    basis_nat: Vec<u64>,
    alpha_index: u64,
    exp_table: Vec<u32>,
    log_table: Vec<u32>,
    /// None when the ordering is the natural one (polynomial basis).
    ord_to_nat: Option<Vec<u32>>,
}

const LOG_OF_ZERO: u32 = u32::MAX;

impl FieldDescriptor {
    fn from_config(cfg: &FieldConfig) -> Result<Self> {
        let p = OddPrime::new(cfg.p)?;
        let pv = p.value();
        let r = cfg.r;
        let q = checked_q(pv, r)?;

        let modulus = match &cfg.modulus {
            Some(m) => {
                let ok =
                    m.len() == r as usize + 1 && m[r as usize] == 1 && m.iter().all(|&c| c < pv);
                if !ok {
                    return Err(Error::MalformedModulus { r });
                }
                if !fp_is_irreducible(m, pv) {
                    return Err(Error::ReducibleModulus);
                }
                m.clone()
            }
            None => find_irreducible(p, r)?,
        };
        let nat = NatCtx {
            p: pv,
            r: r as usize,
            modulus,
        };

        // ordering basis, as natural indices
        let poly_basis: Vec<u64> = (0..r).map(|i| pv.pow(i)).collect();
        let basis_nat = match &cfg.gamma_override {
            None => poly_basis.clone(),
            Some(gs) => {
                if gs.len() != r as usize - 1 {
                    return Err(Error::DependentBasis);
                }
                let mut b = vec![1u64];
                b.extend_from_slice(gs);
                for &g in &b {
                    if g >= q {
                        return Err(Error::IndexOutOfRange { index: g, q });
                    }
                }
                b
            }
        };
        if !basis_is_independent(&nat, &basis_nat) {
            return Err(Error::DependentBasis);
        }

        // ordering permutation (identity for the polynomial basis)
        let (ord_to_nat, nat_to_ord) = if basis_nat == poly_basis {
            (None, None)
        } else {
            let perm = build_ordering(&nat, &basis_nat, q);
            let mut inv = vec![0u32; q as usize];
            for (n, &m) in perm.iter().enumerate() {
                inv[m as usize] = n as u32;
            }
            (Some(perm), Some(inv))
        };
        let to_nat = |ord: u64| -> u64 {
            match &ord_to_nat {
                None => ord,
                Some(t) => t[ord as usize] as u64,
            }
        };

        // primitive element: smallest ordering index that generates F_q*
        let group = q - 1;
        let prime_divisors: Vec<u64> = number_theory::factorize(group)
            .into_iter()
            .map(|(f, _)| f)
            .collect();
        let is_generator = |nat_idx: u64| -> bool {
            nat_idx != 0
                && prime_divisors
                    .iter()
                    .all(|&l| nat.pow(nat_idx, group / l) != 1)
        };
        let alpha_index = match cfg.alpha_index {
            Some(a) => {
                if a == 0 || a >= q {
                    return Err(Error::IndexOutOfRange { index: a, q });
                }
                if !is_generator(to_nat(a)) {
                    return Err(Error::NotGenerator(a));
                }
                a
            }
            None => (1..q)
                .find(|&n| is_generator(to_nat(n)))
                .expect("the multiplicative group of a finite field is cyclic"),
        };

        // exp/log tables by q - 2 successive multiplications
        let alpha_nat = to_nat(alpha_index);
        let mut exp_table = vec![0u32; group as usize];
        let mut log_table = vec![LOG_OF_ZERO; q as usize];
        let to_ord = |nat_idx: u64| -> u32 {
            match &nat_to_ord {
                None => nat_idx as u32,
                Some(t) => t[nat_idx as usize],
            }
        };
        let mut acc = 1u64;
        for e in 0..group {
            let ord = to_ord(acc);
            exp_table[e as usize] = ord;
            log_table[ord as usize] = e as u32;
            acc = nat.mul(acc, alpha_nat);
        }
        debug_assert_eq!(acc, 1, "alpha must have order q - 1");

        Ok(FieldDescriptor {
            p,
            r,
            q,
            nat,
            basis_nat,
            alpha_index,
            exp_table,
            log_table,
            ord_to_nat,
        })
    }

    pub fn p(&self) -> OddPrime {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, constant term first, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.nat.modulus
    }

    /// Ordering basis as natural (polynomial-basis ordering) indices.
    pub fn basis(&self) -> &[u64] {
        &self.basis_nat
    }

    /// Ordering index of the primitive element.
    pub fn alpha_index(&self) -> u64 {
        self.alpha_index
    }

    pub fn alpha(&self) -> FieldElement {
        FieldElement(self.alpha_index as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    /// The unit: g_1 = 1, so ordering index 1 is always the unit element.
    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn element(&self, index: u64) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index as u32))
        } else {
            Err(Error::IndexOutOfRange { index, q: self.q })
        }
    }

    /// All elements in ordering-index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|n| FieldElement(n as u32))
    }

    /// The natural (polynomial-basis ordering) index of an element.
    pub fn natural_index(&self, a: FieldElement) -> u64 {
        match &self.ord_to_nat {
            None => a.index(),
            Some(t) => t[a.0 as usize] as u64,
        }
    }

    /// Addition is digit-wise mod p on ordering indices in any basis.
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.index() < self.q && b.index() < self.q);
        let p = self.p.value();
        let (mut x, mut y) = (a.index(), b.index());
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.r {
            out += (x % p + y % p) % p * place;
            place *= p;
            x /= p;
            y /= p;
        }
        FieldElement(out as u32)
    }

    pub fn negate(&self, a: FieldElement) -> FieldElement {
        let p = self.p.value();
        let mut x = a.index();
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.r {
            out += (p - x % p) % p * place;
            place *= p;
            x /= p;
        }
        FieldElement(out as u32)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.negate(b))
    }

    pub fn multiply(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        let group = self.q - 1;
        let e = (self.log_table[a.0 as usize] as u64 + self.log_table[b.0 as usize] as u64) % group;
        FieldElement(self.exp_table[e as usize])
    }

    pub fn inverse(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let group = self.q - 1;
        let e = (group - self.log_table[a.0 as usize] as u64) % group;
        Ok(FieldElement(self.exp_table[e as usize]))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if a.0 == 0 {
            return if e == 0 { self.one() } else { self.zero() };
        }
        let group = self.q - 1;
        let log = self.log_table[a.0 as usize] as u128;
        let e = (log * e as u128 % group as u128) as u64;
        FieldElement(self.exp_table[e as usize])
    }

    /// alpha^e for any exponent.
    pub fn exp(&self, e: u64) -> FieldElement {
        FieldElement(self.exp_table[(e % (self.q - 1)) as usize])
    }

    pub fn discrete_log(&self, a: FieldElement) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::ZeroLog);
        }
        Ok(self.log_table[a.0 as usize] as u64)
    }

    /// chi(0) = 0; otherwise +1 for squares (even discrete log), -1 for
    /// non-squares.
    pub fn quadratic_character(&self, a: FieldElement) -> i8 {
        if a.0 == 0 {
            0
        } else if self.log_table[a.0 as usize] % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The element of smallest ordering index outside F_p with the requested
    /// character sign. Only meaningful for q = p^2.
    pub fn select_gamma(&self, sign: ChiSign) -> Result<FieldElement> {
        if self.r != 2 {
            return Err(Error::GammaRequiresDegreeTwo(self.r));
        }
        for n in self.p.value()..self.q {
            let e = FieldElement(n as u32);
            if self.quadratic_character(e) == sign.value() {
                return Ok(e);
            }
        }
        unreachable!("both character signs occur outside F_p when q = p^2 >= 9")
    }
}

fn basis_is_independent(nat: &NatCtx, basis: &[u64]) -> bool {
    if basis.is_empty() || basis[0] != 1 {
        return false;
    }
    let r = nat.r;
    let p = nat.p;
    // rows = digit vectors of the basis elements; rank must be r
    let mut rows: Vec<Vec<u64>> = basis
        .iter()
        .map(|&b| {
            let mut d = vec![0u64; r];
            nat.digits(b, &mut d);
            d
        })
        .collect();
    let mut rank = 0;
    for col in 0..r {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = number_theory::mod_pow(rows[rank][col], p - 2, p);
        for i in 0..rows.len() {
            if i != rank && rows[i][col] != 0 {
                let factor = rows[i][col] * inv % p;
                for j in 0..r {
                    let sub = factor * rows[rank][j] % p;
                    rows[i][j] = (rows[i][j] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank == r
}

/// ord_to_nat for a non-polynomial basis, built with an odometer so each
/// step is one basis-element addition.
fn build_ordering(nat: &NatCtx, basis: &[u64], q: u64) -> Vec<u32> {
    let r = nat.r;
    let p = nat.p;
    let basis_digits: Vec<Vec<u64>> = basis
        .iter()
        .map(|&b| {
            let mut d = vec![0u64; r];
            nat.digits(b, &mut d);
            d
        })
        .collect();
    let mut perm = vec![0u32; q as usize];
    let mut acc = vec![0u64; r];
    let mut odometer = vec![0u64; r];
    for n in 0..q {
        perm[n as usize] = nat.index(&acc) as u32;
        let mut j = 0;
        while j < r {
            for (slot, &bd) in acc.iter_mut().zip(&basis_digits[j]) {
                *slot = (*slot + bd) % p;
            }
            odometer[j] += 1;
            if odometer[j] < p {
                break;
            }
            odometer[j] = 0;
            j += 1;
        }
    }
    perm
}

// ---------------------------------------------------------------------------
// Serialization: tables are reconstructed, never serialized
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    p: u64,
    r: u32,
    modulus: Vec<u64>,
    alpha_index: u64,
    basis: Vec<u64>,
}

impl Serialize for FieldDescriptor {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        FieldRepr {
            p: self.p.value(),
            r: self.r,
            modulus: self.nat.modulus.clone(),
            alpha_index: self.alpha_index,
            basis: self.basis_nat.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for FieldDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = FieldRepr::deserialize(de)?;
        if repr.basis.first() != Some(&1) {
            return Err(serde::de::Error::custom("basis must start with 1"));
        }
        FieldConfig {
            p: repr.p,
            r: repr.r,
            modulus: Some(repr.modulus),
            gamma_override: Some(repr.basis[1..].to_vec()),
            alpha_index: Some(repr.alpha_index),
        }
        .build()
        .map_err(serde::de::Error::custom)
    }
}

/// Test-only helpers shared across module test suites.
#[cfg(test)]
pub(crate) mod test_support {
    use crate::number_theory::is_prime;

    /// Every odd prime power q <= cap as (p, r).
    pub(crate) fn small_prime_powers(cap: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        for p in (3..=cap).filter(|&n| is_prime(n)) {
            let mut q = p;
            let mut r = 1;
            while q <= cap {
                out.push((p, r));
                q = match q.checked_mul(p) {
                    Some(v) => v,
                    None => break,
                };
                r += 1;
            }
        }
        out
    }
}
