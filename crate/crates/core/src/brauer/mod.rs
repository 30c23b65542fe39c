//! Even tuples, their companion tuples with square product, and the
//! 2-primary Brauer classes they define over ℚ_p.
//!
//! An A-tuple `(a₁,…,a_{2n})` stands for the class
//! `C_m(a) = Σ (a_{2i−1}, a_{2i})_{2^m}`. [`phi`] and [`psi`] translate
//! between A-tuples and B-tuples `(b₁,…,b_{2n+2})` with `∏ b_j` a square, so
//! that chain moves on B-tuples change `C_m` by a single symbol of degree
//! `2^{m−1}` (see [`step_symbol`]).
//!
//! Brauer classes over ℚ_p are stored as their local invariant
//! `num / 2^deg_log2 ∈ ℚ/ℤ`; over 𝔽_p every class is zero.

mod presentations;
mod step;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{tame_residue, Field};

pub use presentations::{pfister_tuple, pfister_symbol, rost14_tuple, QuadExtElement};
pub use step::{classify_move, exponent_in_psi, step_symbol, StepCase};

/// The formal symbol `(a, b)` of degree `2^deg_log2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "E: Serialize + DeserializeOwned")]
pub struct SymbolExpr<E> {
    pub a: E,
    pub b: E,
    pub deg_log2: u32,
}

/// A local invariant `num / 2^deg_log2` in `ℚ/ℤ`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BrauerClass {
    pub num: u64,
    pub deg_log2: u32,
}

impl BrauerClass {
    pub fn zero(deg_log2: u32) -> Self {
        BrauerClass { num: 0, deg_log2 }
    }

    pub fn new(num: u64, deg_log2: u32) -> Self {
        BrauerClass { num: num & mask(deg_log2), deg_log2 }
    }

    pub fn is_zero(&self) -> bool {
        self.num & mask(self.deg_log2) == 0
    }

    /// The same invariant written with denominator `2^k`, `k ≥ deg_log2`.
    pub fn embed(&self, k: u32) -> BrauerClass {
        assert!(k >= self.deg_log2, "cannot embed 1/2^{} into 1/2^{k}", self.deg_log2);
        BrauerClass::new(self.num << (k - self.deg_log2), k)
    }

    pub fn add(&self, other: &BrauerClass) -> BrauerClass {
        let k = self.deg_log2.max(other.deg_log2);
        BrauerClass::new(self.embed(k).num + other.embed(k).num, k)
    }

    pub fn neg(&self) -> BrauerClass {
        BrauerClass::new(self.num.wrapping_neg(), self.deg_log2)
    }

    /// `2^e` times this class, kept at the same denominator.
    pub fn times_pow2(&self, e: u32) -> BrauerClass {
        BrauerClass::new(self.num << e, self.deg_log2)
    }

    /// Reduced form with odd numerator (or `0/1`).
    pub fn reduced(&self) -> BrauerClass {
        let mut c = BrauerClass::new(self.num, self.deg_log2);
        while c.deg_log2 > 0 && c.num.is_multiple_of(2) {
            c = BrauerClass { num: c.num / 2, deg_log2: c.deg_log2 - 1 };
        }
        c
    }
}

impl PartialEq for BrauerClass {
    fn eq(&self, other: &Self) -> bool {
        let k = self.deg_log2.max(other.deg_log2);
        self.embed(k).num == other.embed(k).num
    }
}

impl Eq for BrauerClass {}

fn mask(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

fn nonzero<F: Field>(field: &F, xs: &[F::Elem]) -> Result<()> {
    if xs.iter().any(|x| field.is_zero(x)) {
        return Err(Error::InvalidInput("tuple entries must be nonzero".into()));
    }
    Ok(())
}

/// Whether `b` has even length ≥ 4, nonzero entries and square product.
pub fn is_b_tuple<F: Field>(field: &F, b: &[F::Elem]) -> Result<bool> {
    if b.len() < 4 || b.len() % 2 == 1 || b.iter().any(|x| field.is_zero(x)) {
        return Ok(false);
    }
    field.is_square(&field.product(b))
}

/// `b₁ = 1`, `b_{2i} = a_{2i−1}/P`, `b_{2i+1} = a_{2i}/P` with `P` the
/// product of the entries already written, and `b_{2n+2} = ∏ a_j`.
pub fn phi<F: Field>(field: &F, a: &[F::Elem]) -> Result<Vec<F::Elem>> {
    if a.is_empty() || a.len() % 2 == 1 {
        return Err(Error::InvalidInput("A-tuples have positive even length".into()));
    }
    nonzero(field, a)?;
    let mut b = Vec::with_capacity(a.len() + 2);
    b.push(field.one());
    let mut prefix = field.one();
    for pair in a.chunks(2) {
        let p_inv = field.inv(&prefix)?;
        let b_even = field.mul(&pair[0], &p_inv);
        let b_odd = field.mul(&pair[1], &p_inv);
        prefix = field.mul(&prefix, &field.mul(&b_even, &b_odd));
        b.push(b_even);
        b.push(b_odd);
    }
    b.push(field.product(a));
    Ok(b)
}

/// `a_{2i−1} = b_{2i}·P`, `a_{2i} = b_{2i+1}·P` with `P = b₁⋯b_{2i−1}`.
/// The last entry of `b` is not used.
pub fn psi<F: Field>(field: &F, b: &[F::Elem]) -> Result<Vec<F::Elem>> {
    if b.len() < 4 || b.len() % 2 == 1 {
        return Err(Error::InvalidInput("B-tuples have even length >= 4".into()));
    }
    nonzero(field, b)?;
    let n = (b.len() - 2) / 2;
    let mut a = Vec::with_capacity(2 * n);
    let mut prefix = b[0].clone();
    for i in 0..n {
        let (even, odd) = (&b[2 * i + 1], &b[2 * i + 2]);
        a.push(field.mul(even, &prefix));
        a.push(field.mul(odd, &prefix));
        prefix = field.mul(&prefix, &field.mul(even, odd));
    }
    Ok(a)
}

/// Local invariant of `(a, b)_{2^k}` via the tame symbol.
pub fn tame_symbol<F: Field>(field: &F, a: &F::Elem, b: &F::Elem, k: u32) -> Result<BrauerClass> {
    let res = field.residue_field();
    if k > res.two_adicity() {
        return Err(Error::InvalidInput(format!("2^{k} does not divide p - 1")));
    }
    let t = tame_residue(field, a, b)?;
    Ok(BrauerClass::new(res.dlog_mod_2k(t, k), k))
}

pub fn symbol_class<F: Field>(field: &F, s: &SymbolExpr<F::Elem>) -> Result<BrauerClass> {
    tame_symbol(field, &s.a, &s.b, s.deg_log2)
}

/// `C_m(a) = Σ_i (a_{2i−1}, a_{2i})_{2^m}`.
pub fn cm_class<F: Field>(field: &F, a: &[F::Elem], m: u32) -> Result<BrauerClass> {
    if a.len() % 2 == 1 {
        return Err(Error::InvalidInput("A-tuples have even length".into()));
    }
    let mut acc = BrauerClass::zero(m);
    for pair in a.chunks(2) {
        acc = acc.add(&tame_symbol(field, &pair[0], &pair[1], m)?);
    }
    Ok(acc)
}

/// The quaternion classes `(P b_{2i}, P b_{2i+1})₂` summed over the pairs
/// of `b`, with `P = b₁⋯b_{2i−1}`.
pub fn clifford_class<F: Field>(field: &F, b: &[F::Elem]) -> Result<BrauerClass> {
    if b.len() < 4 || b.len() % 2 == 1 {
        return Err(Error::InvalidInput("B-tuples have even length >= 4".into()));
    }
    nonzero(field, b)?;
    let mut acc = BrauerClass::zero(1);
    let mut prefix = b[0].clone();
    for i in 0..(b.len() - 2) / 2 {
        let (even, odd) = (&b[2 * i + 1], &b[2 * i + 2]);
        let x = field.mul(&prefix, even);
        let y = field.mul(&prefix, odd);
        acc = acc.add(&tame_symbol(field, &x, &y, 1)?);
        prefix = field.mul(&prefix, &field.mul(even, odd));
    }
    Ok(acc)
}
