use serde::{Deserialize, Serialize};

use super::{is_b_tuple, psi, SymbolExpr};
use crate::chain::{apply_move, Move};
use crate::error::{Error, Result};
use crate::field::Field;

/// Exponent of `b_j` in the `r`-th entry of `ψ(b)` (both 1-based).
///
/// `a_r` is the product `b₁⋯b_{2i−1}` (with `i = ⌈r/2⌉`) times `b_{2i}` for
/// odd `r` or `b_{2i+1}` for even `r`.
pub fn exponent_in_psi(r: usize, j: usize) -> i64 {
    let i = r.div_ceil(2);
    let mut e = (j < 2 * i) as i64;
    if r % 2 == 1 {
        e += (j == 2 * i) as i64;
    } else {
        e += (j == 2 * i + 1) as i64;
    }
    e
}

/// Which edge shape a move has on a tuple of `len` slots (1-based parity of
/// the touched slots).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepCase {
    FullFirst,
    FullOther,
    DashedFromFirst,
    DashedToLast,
    DashedOddOdd,
    DashedOddEven,
    DashedEvenOdd,
    DashedEvenEven,
}

impl StepCase {
    pub const ALL: [StepCase; 8] = [
        StepCase::FullFirst,
        StepCase::FullOther,
        StepCase::DashedFromFirst,
        StepCase::DashedToLast,
        StepCase::DashedOddOdd,
        StepCase::DashedOddEven,
        StepCase::DashedEvenOdd,
        StepCase::DashedEvenEven,
    ];
}

pub fn classify_move<E>(len: usize, mv: &Move<E>) -> StepCase {
    match mv {
        Move::Full { i: 0, .. } => StepCase::FullFirst,
        Move::Full { .. } => StepCase::FullOther,
        Move::Dashed { j, .. } if *j + 1 == len => StepCase::DashedToLast,
        Move::Dashed { i: 0, .. } => StepCase::DashedFromFirst,
        Move::Dashed { i, j } => match ((i + 1) % 2 == 1, (j + 1) % 2 == 1) {
            (true, true) => StepCase::DashedOddOdd,
            (true, false) => StepCase::DashedOddEven,
            (false, true) => StepCase::DashedEvenOdd,
            (false, false) => StepCase::DashedEvenEven,
        },
    }
}

/// `∏ b_j^{e_j}`.
fn monomial<F: Field>(field: &F, b: &[F::Elem], e: &[i64]) -> Result<F::Elem> {
    let mut acc = field.one();
    for (x, &k) in b.iter().zip(e) {
        if k != 0 {
            acc = field.mul(&acc, &field.pow(x, k)?);
        }
    }
    Ok(acc)
}

/// A degree-`2^{m−1}` symbol whose class is
/// `C_m(ψ(w)) − C_m(ψ(v))` for the edge `v → w = mv(v)` between B-tuples.
///
/// For `Full{k, c}` the ψ-entries change by even powers of `c`, and
/// bilinearity with `(c, c)_{2^m} = (c, −1)_{2^m} = 0` leaves `(c, X)` with
/// `X = ∏ a_{2i}^{e_{2i−1}} a_{2i−1}^{−e_{2i}}`, `e_r` the exponent of `b_k`
/// in `a_r`.
///
/// For `Dashed{k, ℓ}` with `λ = 1 + b_ℓ/b_k` the difference is `(λ, Y)_{2^m}`
/// with `Y` built the same way from the exponents of `b_k b_ℓ`. Since
/// `(λ, b_ℓ/b_k)_{2^m} = 0`, this equals `(λ, Y b_k/b_ℓ)_{2^m}`, and
/// `Y b_k/b_ℓ = δ²` for a monomial `δ` in the `b`'s, possibly divided by
/// `√(∏ b)`.
pub fn step_symbol<F: Field>(
    field: &F,
    v: &[F::Elem],
    w: &[F::Elem],
    mv: &Move<F::Elem>,
    m: u32,
) -> Result<SymbolExpr<F::Elem>> {
    if m == 0 {
        return Err(Error::InvalidInput("step symbols need m >= 1".into()));
    }
    if !is_b_tuple(field, v)? {
        return Err(Error::InvalidEdge("source is not a B-tuple".into()));
    }
    let moved = apply_move(field, v, mv)?;
    if moved.len() != w.len() || !moved.iter().zip(w).all(|(x, y)| field.same(x, y)) {
        return Err(Error::InvalidEdge("target is not the image of the move".into()));
    }
    let len = v.len();
    let n = (len - 2) / 2;
    let deg_log2 = m - 1;
    match mv {
        Move::Full { i, c } => {
            let k = i + 1;
            let a = psi(field, v)?;
            let mut x = field.one();
            for p in 1..=n {
                let (odd, even) = (2 * p - 1, 2 * p);
                let e_odd = exponent_in_psi(odd, k);
                let e_even = exponent_in_psi(even, k);
                x = field.mul(&x, &field.pow(&a[even - 1], e_odd)?);
                x = field.mul(&x, &field.pow(&a[odd - 1], -e_even)?);
            }
            Ok(SymbolExpr { a: c.clone(), b: x, deg_log2 })
        }
        Move::Dashed { i, j } => {
            let (k, l) = (i + 1, j + 1);
            let g = |r: usize| exponent_in_psi(r, k) + exponent_in_psi(r, l);
            let mut t = vec![0i64; len];
            for (idx, tj) in t.iter_mut().enumerate() {
                let jj = idx + 1;
                for p in 1..=n {
                    let (odd, even) = (2 * p - 1, 2 * p);
                    *tj += g(odd) * exponent_in_psi(even, jj) - g(even) * exponent_in_psi(odd, jj);
                }
            }
            t[k - 1] += 1;
            t[l - 1] -= 1;
            let delta = if t.iter().all(|x| x % 2 == 0) {
                let half: Vec<i64> = t.iter().map(|x| x / 2).collect();
                monomial(field, v, &half)?
            } else if t.iter().all(|x| x % 2 != 0) {
                let half: Vec<i64> = t.iter().map(|x| (x + 1) / 2).collect();
                let root = field.sqrt(&field.product(v)).map_err(|_| {
                    Error::InvalidEdge("product of the B-tuple has no square root".into())
                })?;
                field.div(&monomial(field, v, &half)?, &root)?
            } else {
                return Err(Error::InvalidEdge(format!(
                    "mixed-parity exponents for dashed ({k}, {l})"
                )));
            };
            let lambda = field.div(&field.add(&v[*i], &v[*j])?, &v[*i])?;
            Ok(SymbolExpr { a: lambda, b: delta, deg_log2 })
        }
    }
}
