//! Exact arithmetic in the two concrete fields the toolkit works over.
//!
//! [`PrimeField`] is 𝔽_p with residues stored in a `u64`. [`PadicField`] is
//! ℚ_p with a fixed working precision of `N` digits; every element carries
//! its own known relative precision, and additions that cancel the whole
//! known unit fail with [`Error::PrecisionExhausted`].
//!
//! Both fields expose a valuation and a unit residue, so square classes,
//! power classes and tame symbols are written once, generically, on top of
//! [`Field`]. For 𝔽_p the valuation is identically zero.

mod padic;
mod prime;

use std::fmt;

use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use padic::{Padic, PadicField};
pub use prime::{Fp, PrimeField};

/// Parameters shared by every computation: the prime, the symbol-degree
/// exponent, the p-adic working precision and the RNG seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub p: u64,
    pub m: u32,
    pub precision: u32,
    pub seed: u64,
}

impl FieldConfig {
    pub const DEFAULT_PRECISION: u32 = 64;
    pub const MAX_PRECISION: u32 = 1024;

    pub fn new(p: u64, m: u32, precision: u32, seed: u64) -> Self {
        FieldConfig { p, m, precision, seed }
    }

    /// Checks `p` odd prime with `p ≡ 1 (mod 2^{m+1})` and `2 ≤ precision ≤ 1024`.
    ///
    /// `m = 0` is accepted for chain-only work; then −1 need not be a square.
    pub fn validate(&self) -> Result<()> {
        let p = self.p;
        if !(5..1 << 32).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidConfig(format!(
                "p = {p} must be a prime with 5 <= p < 2^32"
            )));
        }
        if self.m >= 31 || !(p - 1).is_multiple_of(1u64 << (self.m + 1)) {
            return Err(Error::InvalidConfig(format!(
                "p = {p} is not 1 mod 2^(m+1) for m = {}",
                self.m
            )));
        }
        if self.precision < 2 || self.precision > Self::MAX_PRECISION {
            return Err(Error::InvalidConfig(format!(
                "precision {} outside [2, {}]",
                self.precision,
                Self::MAX_PRECISION
            )));
        }
        Ok(())
    }
}

/// Which concrete field a configuration or certificate talks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Fp,
    Qp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    /// Valuation zero (always the case over 𝔽_p).
    Unit,
    Any,
}

/// Class of an element modulo `2^k`-th powers.
///
/// Over ℚ_p this is the pair (valuation mod 2^k, unit index mod 2^k); over
/// 𝔽_p the valuation part is always zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PowerClass {
    pub log2_degree: u32,
    pub val: u64,
    pub unit: u64,
}

impl PowerClass {
    pub fn trivial(log2_degree: u32) -> Self {
        PowerClass { log2_degree, val: 0, unit: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.val == 0 && self.unit == 0
    }

    pub fn add(&self, other: &PowerClass) -> PowerClass {
        assert_eq!(self.log2_degree, other.log2_degree, "mixed power-class degrees");
        let mask = (1u64 << self.log2_degree) - 1;
        PowerClass {
            log2_degree: self.log2_degree,
            val: (self.val + other.val) & mask,
            unit: (self.unit + other.unit) & mask,
        }
    }
}

/// A field with exact (𝔽_p) or precision-tracked (ℚ_p) arithmetic.
///
/// Elements are plain values; all operations go through the field object,
/// which owns the modulus and cached data.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + fmt::Debug + Send + Sync + Serialize + DeserializeOwned + 'static;

    /// Builds the field for `config` (validated).
    fn from_config(config: FieldConfig) -> Result<Self>;
    fn config(&self) -> &FieldConfig;
    fn kind(&self) -> FieldKind;
    /// The residue field 𝔽_p (the field itself for [`PrimeField`]).
    fn residue_field(&self) -> &PrimeField;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, x: i64) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Result<Self::Elem>;

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        self.add(x, &self.neg(y))
    }

    fn div(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    fn square(&self, x: &Self::Elem) -> Self::Elem {
        self.mul(x, x)
    }

    /// `x^e` for any integer `e`; negative exponents need `x ≠ 0`.
    fn pow(&self, x: &Self::Elem, e: i64) -> Result<Self::Elem> {
        let base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            exp >>= 1;
            if exp > 0 {
                sq = self.square(&sq);
            }
        }
        Ok(acc)
    }

    /// Equality up to the precision both operands are known to.
    fn same(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    /// p-adic valuation of a nonzero element (0 over 𝔽_p).
    fn valuation(&self, x: &Self::Elem) -> i64;
    /// Residue mod p of the unit part of a nonzero element.
    fn unit_residue(&self, x: &Self::Elem) -> u64;

    /// `x · p^k` over ℚ_p; the identity over 𝔽_p.
    fn shift(&self, x: &Self::Elem, k: i64) -> Self::Elem;

    fn sqrt(&self, x: &Self::Elem) -> Result<Self::Elem>;

    /// Solves `x² − e·y² = c` with `e, c ≠ 0`; `None` when `c` is not a norm
    /// from `F(√e)`.
    fn solve_norm_equation(
        &self,
        e: &Self::Elem,
        c: &Self::Elem,
    ) -> Result<Option<(Self::Elem, Self::Elem)>>;

    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, kind: ElementKind) -> Self::Elem;

    /// A random coefficient for representation searches; may be zero.
    fn random_coefficient<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// A deterministic sweep of coefficients used after random search fails.
    fn coefficient_candidates(&self) -> Vec<Self::Elem>;

    /// Rejects elements that violate the field's representation invariants.
    fn check_element(&self, x: &Self::Elem) -> Result<()>;

    /// Working precision in digits (`None` for exact fields).
    fn precision(&self) -> Option<u32>;

    /// The same field at twice the working precision, if allowed.
    fn doubled(&self) -> Option<Self>;

    /// Re-reads an input element at this field's working precision,
    /// treating its unknown digits as zero.
    fn lift(&self, x: &Self::Elem) -> Self::Elem;

    fn is_square(&self, x: &Self::Elem) -> Result<bool> {
        if self.is_zero(x) {
            return Err(Error::DivisionByZero);
        }
        let res = self.residue_field();
        Ok(self.valuation(x) % 2 == 0 && res.legendre(self.unit_residue(x)) == 1)
    }

    /// Class of `x` modulo `2^k`-th powers. Requires `2^k | p − 1`.
    fn power_class(&self, x: &Self::Elem, k: u32) -> Result<PowerClass> {
        if self.is_zero(x) {
            return Err(Error::DivisionByZero);
        }
        let res = self.residue_field();
        if k > res.two_adicity() {
            return Err(Error::InvalidInput(format!(
                "2^{k} does not divide p - 1 = {}",
                res.modulus() - 1
            )));
        }
        let modulus = 1i64 << k;
        Ok(PowerClass {
            log2_degree: k,
            val: self.valuation(x).rem_euclid(modulus) as u64,
            unit: res.dlog_mod_2k(self.unit_residue(x), k),
        })
    }

    fn product(&self, xs: &[Self::Elem]) -> Self::Elem {
        xs.iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }
}

/// Residue of `(−1)^{v(a)v(b)} a^{v(b)} b^{−v(a)}`, the unit whose power
/// class is the tame symbol of `(a, b)`.
pub fn tame_residue<F: Field>(field: &F, a: &F::Elem, b: &F::Elem) -> Result<u64> {
    if field.is_zero(a) || field.is_zero(b) {
        return Err(Error::DivisionByZero);
    }
    let res = field.residue_field();
    let p = res.modulus();
    let (va, vb) = (field.valuation(a), field.valuation(b));
    let ua = field.unit_residue(a);
    let ub = field.unit_residue(b);
    let mut t = res.pow_signed(ua, vb);
    t = res.mul(t, res.pow_signed(ub, -va));
    if (va * vb).rem_euclid(2) == 1 {
        t = (p - t) % p;
    }
    Ok(t)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Build either field from a configuration, validating it first.
pub fn prime_field(config: FieldConfig) -> Result<PrimeField> {
    PrimeField::new(config)
}

pub fn padic_field(config: FieldConfig) -> Result<PadicField> {
    PadicField::new(config)
}
