//! Diagonal quadratic forms ⟨a₁,…,a_n⟩ over 𝔽_p and ℚ_p.
//!
//! Forms are plain slices of nonzero elements. Over these fields a form is
//! classified by its dimension, discriminant and Hasse invariant, which is
//! what every isometry test below relies on.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{tame_residue, Field, PowerClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WittInvariants {
    pub dim: usize,
    /// Square class of the product of the slots.
    pub disc: PowerClass,
    /// ∏_{i<j} (a_i, a_j)₂ as ±1.
    pub hasse: i8,
}

/// The quadratic Hilbert symbol (a, b)₂ ∈ {±1}.
pub fn hilbert_symbol<F: Field>(field: &F, a: &F::Elem, b: &F::Elem) -> Result<i8> {
    let t = tame_residue(field, a, b)?;
    Ok(field.residue_field().legendre(t) as i8)
}

fn check_slots<F: Field>(field: &F, f: &[F::Elem]) -> Result<()> {
    if f.iter().any(|a| field.is_zero(a)) {
        return Err(Error::InvalidInput("form slots must be nonzero".into()));
    }
    Ok(())
}

pub fn invariants<F: Field>(field: &F, f: &[F::Elem]) -> Result<WittInvariants> {
    check_slots(field, f)?;
    let res = field.residue_field();
    let p = res.modulus();
    let mut disc = PowerClass::trivial(1);
    let mut parts = Vec::with_capacity(f.len());
    for a in f {
        disc = disc.add(&field.power_class(a, 1)?);
        parts.push((field.valuation(a), field.unit_residue(a)));
    }
    // Only valuations and unit residues enter (a, b)₂, so work with those.
    let mut hasse = 1i8;
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let ((va, ua), (vb, ub)) = (parts[i], parts[j]);
            if va % 2 == 0 && vb % 2 == 0 {
                continue;
            }
            let mut t = res.mul(res.pow_signed(ua, vb), res.pow_signed(ub, -va));
            if (va * vb).rem_euclid(2) == 1 {
                t = p - t;
            }
            hasse *= res.legendre(t) as i8;
        }
    }
    Ok(WittInvariants { dim: f.len(), disc, hasse })
}

pub fn is_isometric<F: Field>(field: &F, f: &[F::Elem], g: &[F::Elem]) -> Result<bool> {
    if f.len() != g.len() {
        return Ok(false);
    }
    Ok(invariants(field, f)? == invariants(field, g)?)
}

/// Decides whether `f` represents `b`, by asking whether a complement
/// `g` with `f ≅ ⟨b⟩ ⊥ g` can exist.
pub fn represents<F: Field>(field: &F, f: &[F::Elem], b: &F::Elem) -> Result<bool> {
    check_slots(field, f)?;
    if field.is_zero(b) {
        return Err(Error::InvalidInput("target must be nonzero".into()));
    }
    let n = f.len();
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return field.is_square(&field.div(b, &f[0])?);
    }
    if n >= 4 {
        return Ok(true);
    }
    let inv = invariants(field, f)?;
    let d_g = field.mul(&field.product(f), b);
    let s_g = inv.hasse * hilbert_symbol(field, b, &d_g)?;
    Ok(match n {
        2 => s_g == 1,
        _ => s_g == 1 || !field.is_square(&field.neg(&d_g))?,
    })
}

/// Finds `x` with `Σ a_i x_i² = b`.
///
/// A slot equal to `b` times a square is used directly. Otherwise random
/// values are fixed for `x_3, …, x_n` and the binary remainder
/// `a₁x₁² + a₂x₂² = c` is solved as the norm equation
/// `(a₁x₁)² + a₁a₂·x₂² = a₁c` in `F(√(−a₁a₂))`.
pub fn represent<F: Field, R: Rng + ?Sized>(
    field: &F,
    rng: &mut R,
    f: &[F::Elem],
    b: &F::Elem,
) -> Result<Vec<F::Elem>> {
    check_slots(field, f)?;
    if field.is_zero(b) {
        return Err(Error::InvalidInput("target must be nonzero".into()));
    }
    let n = f.len();
    for (i, a) in f.iter().enumerate() {
        let ratio = field.div(b, a)?;
        if field.is_square(&ratio)? {
            let mut x = vec![field.zero(); n];
            x[i] = field.sqrt(&ratio)?;
            return Ok(x);
        }
    }
    if n < 2 || !represents(field, f, b)? {
        return Err(Error::NotRepresented);
    }
    let e = field.neg(&field.mul(&f[0], &f[1]));
    const ATTEMPTS: usize = 256;
    for attempt in 0..ATTEMPTS {
        let mut x = vec![field.zero(); n];
        let mut c = b.clone();
        if attempt > 0 {
            // Aim a_i·x_i² near v(b) so that the remainder's class varies.
            let vb = field.valuation(b);
            for i in 2..n {
                let k = (vb - field.valuation(&f[i])).div_euclid(2) + rng.gen_range(-1..=1);
                x[i] = field.shift(&field.random_coefficient(rng), k);
            }
        }
        let mut ok = true;
        for i in 2..n {
            match field.sub(&c, &field.mul(&f[i], &field.square(&x[i]))) {
                Ok(next) => c = next,
                Err(Error::PrecisionExhausted) => {
                    ok = false;
                    break;
                }
                Err(err) => return Err(err),
            }
        }
        if !ok || field.is_zero(&c) {
            continue;
        }
        match field.solve_norm_equation(&e, &field.mul(&f[0], &c)) {
            Ok(Some((big_x, y))) => {
                x[0] = field.div(&big_x, &f[0])?;
                x[1] = y;
                return Ok(x);
            }
            Ok(None) | Err(Error::PrecisionExhausted) => continue,
            Err(err) => return Err(err),
        }
    }
    Err(Error::NotRepresented)
}

/// Evaluates `Σ a_i x_i²`.
pub fn evaluate<F: Field>(field: &F, f: &[F::Elem], x: &[F::Elem]) -> Result<F::Elem> {
    let mut acc = field.zero();
    for (a, xi) in f.iter().zip(x) {
        acc = field.add(&acc, &field.mul(a, &field.square(xi)))?;
    }
    Ok(acc)
}

/// Even dimension and trivial signed discriminant.
pub fn in_i2<F: Field>(field: &F, f: &[F::Elem]) -> Result<bool> {
    check_slots(field, f)?;
    let n = f.len();
    if n % 2 == 1 {
        return Ok(false);
    }
    let mut d = field.product(f);
    if (n / 2) % 2 == 1 {
        d = field.neg(&d);
    }
    field.is_square(&d)
}

/// In I² with trivial Clifford invariant. For p odd, (−1, −1)₂ = 1, so on
/// I² the Clifford invariant coincides with the Hasse invariant.
pub fn in_i3<F: Field>(field: &F, f: &[F::Elem]) -> Result<bool> {
    Ok(in_i2(field, f)? && invariants(field, f)?.hasse == 1)
}
