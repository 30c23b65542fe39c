//! Random instances for tests, fuzzing and the CLI.
//!
//! Decomposition instances are built presentation first: start from the
//! tuple a presentation describes, scramble it with random valid moves, and
//! read the input off the scrambled tuple with `ψ`. Moves preserve the
//! isometry class, so the pipeline's preconditions hold by construction.

use rand::Rng;

use crate::brauer::{classify_move, pfister_tuple, psi, rost14_tuple, QuadExtElement, StepCase};
use crate::chain::{apply_move, Move};
use crate::error::{Error, Result};
use crate::field::{ElementKind, Field};
use crate::pipeline::Presentation;
use crate::qform;

pub fn random_vertex<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R, n: usize) -> Vec<F::Elem> {
    (0..n).map(|_| field.random_element(rng, ElementKind::Any)).collect()
}

/// A random `w` with `⟨w⟩ ≅ ⟨v⟩`: random slots with the last one fixing the
/// discriminant, redrawn until the Hasse invariants agree.
pub fn random_isometric<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
    let n = v.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let target = qform::invariants(field, v)?;
    let pv = field.product(v);
    for _ in 0..1000 {
        let mut w = random_vertex(field, rng, n - 1);
        let square = field.square(&field.random_element(rng, ElementKind::Any));
        let last = field.mul(&field.div(&pv, &field.product(&w))?, &square);
        w.push(last);
        if qform::invariants(field, &w)? == target {
            return Ok(w);
        }
    }
    Err(Error::NotRepresented)
}

pub fn random_isometric_pair<F: Field, R: Rng + ?Sized>(
    field: &F,
    rng: &mut R,
    n: usize,
) -> Result<(Vec<F::Elem>, Vec<F::Elem>)> {
    let v = random_vertex(field, rng, n);
    let w = random_isometric(field, rng, &v)?;
    Ok((v, w))
}

/// Applies `count` random valid moves to `v`.
pub fn scramble<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R, v: &[F::Elem], count: usize) -> Vec<F::Elem> {
    let n = v.len();
    let mut cur = v.to_vec();
    let mut applied = 0;
    while applied < count {
        let mv = if n < 2 || rng.gen_bool(0.5) {
            Move::Full { i: rng.gen_range(0..n), c: field.random_element(rng, ElementKind::Any) }
        } else {
            let i = rng.gen_range(0..n - 1);
            Move::Dashed { i, j: rng.gen_range(i + 1..n) }
        };
        if let Ok(next) = apply_move(field, &cur, &mv) {
            cur = next;
            applied += 1;
        }
    }
    cur
}

/// A random B-tuple of length `2n + 2`: the last slot makes the product a
/// square.
pub fn random_b_tuple<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R, n: usize) -> Result<Vec<F::Elem>> {
    let mut b = random_vertex(field, rng, 2 * n + 1);
    let square = field.square(&field.random_element(rng, ElementKind::Any));
    b.push(field.div(&square, &field.product(&b))?);
    Ok(b)
}

/// A random move on a `len`-slot tuple with the given edge shape, or `None`
/// when no move of that shape exists at this length.
pub fn random_move_of_case<F: Field, R: Rng + ?Sized>(
    field: &F,
    rng: &mut R,
    len: usize,
    case: StepCase,
) -> Option<Move<F::Elem>> {
    let c = field.random_element(rng, ElementKind::Any);
    let mut moves: Vec<Move<F::Elem>> = (0..len).map(|i| Move::Full { i, c: c.clone() }).collect();
    for i in 0..len {
        for j in i + 1..len {
            moves.push(Move::Dashed { i, j });
        }
    }
    moves.retain(|mv| classify_move(len, mv) == case);
    if moves.is_empty() {
        return None;
    }
    let k = rng.gen_range(0..moves.len());
    Some(moves.swap_remove(k))
}

/// A random edge `v → w` of the given shape between B-tuples.
pub fn random_edge<F: Field, R: Rng + ?Sized>(
    field: &F,
    rng: &mut R,
    case: StepCase,
) -> Result<(Vec<F::Elem>, Vec<F::Elem>, Move<F::Elem>)> {
    for _ in 0..1000 {
        let n = rng.gen_range(2..=5);
        let v = random_b_tuple(field, rng, n)?;
        let Some(mv) = random_move_of_case(field, rng, v.len(), case) else { continue };
        if let Ok(w) = apply_move(field, &v, &mv) {
            return Ok((v, w, mv));
        }
    }
    Err(Error::InvalidEdge(format!("no valid {case:?} edge found")))
}

pub fn random_six<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R) -> [F::Elem; 6] {
    std::array::from_fn(|_| field.random_element(rng, ElementKind::Any))
}

/// A 10-entry input with a Pfister presentation.
pub fn q5_instance<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R) -> Result<(Vec<F::Elem>, [F::Elem; 6])> {
    for _ in 0..100 {
        let x = random_six(field, rng);
        let tuple = pfister_tuple(field, &x)?;
        let scrambled = scramble(field, rng, &tuple, 36);
        let input = psi(field, &scrambled)?;
        if presentation_holds(field, &input, &tuple)? {
            return Ok((input, x));
        }
    }
    Err(Error::PresentationMismatch("could not generate a q = 5 instance".into()))
}

fn presentation_holds<F: Field>(field: &F, input: &[F::Elem], tuple: &[F::Elem]) -> Result<bool> {
    qform::is_isometric(field, &crate::brauer::phi(field, input)?, tuple)
}

fn random_quad<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R, d: &F::Elem) -> QuadExtElement<F::Elem> {
    QuadExtElement {
        x: field.random_element(rng, ElementKind::Any),
        y: field.random_element(rng, ElementKind::Any),
        d: d.clone(),
    }
}

/// A 12-entry input presented by the 14-slot trace/norm tuple. Draws whose
/// tuple is not in I³ are rejected.
pub fn q6_case1_instance<F: Field, R: Rng + ?Sized>(
    field: &F,
    rng: &mut R,
) -> Result<(Vec<F::Elem>, Presentation<F::Elem>)> {
    for _ in 0..200 {
        let d = field.random_element(rng, ElementKind::Any);
        if field.is_square(&d)? {
            continue;
        }
        let (u, v, w) = (random_quad(field, rng, &d), random_quad(field, rng, &d), random_quad(field, rng, &d));
        let tuple = match rost14_tuple(field, &u, &v, &w) {
            Ok(t) => t,
            Err(Error::DegenerateTrace) | Err(Error::PrecisionExhausted) => continue,
            Err(e) => return Err(e),
        };
        if !qform::in_i3(field, &tuple)? {
            continue;
        }
        let scrambled = scramble(field, rng, &tuple, 42);
        let input = psi(field, &scrambled)?;
        if !presentation_holds(field, &input, &tuple)? {
            continue;
        }
        let reduced = random_six(field, rng);
        return Ok((input, Presentation::Rost { d, u, v, w, reduced }));
    }
    Err(Error::PresentationMismatch("could not generate a q = 6 trace/norm instance".into()))
}

/// A 12-entry input with `φ(input) ≅ ⟨1, 1⟩ ⊥ pfister_tuple(x)`.
pub fn q6_case2_instance<F: Field, R: Rng + ?Sized>(
    field: &F,
    rng: &mut R,
) -> Result<(Vec<F::Elem>, Presentation<F::Elem>)> {
    for _ in 0..100 {
        let x0 = random_six(field, rng);
        let mut tuple = vec![field.one(), field.one()];
        tuple.extend(pfister_tuple(field, &x0)?);
        let scrambled = scramble(field, rng, &tuple, 42);
        let input = psi(field, &scrambled)?;
        // φ(ψ(π)) agrees with π₁·π slotwise up to squares.
        let s = scrambled[0].clone();
        let mut x = x0;
        x[4] = field.mul(&x[4], &s);
        x[5] = field.mul(&x[5], &s);
        let mut presented = vec![field.one(), field.one()];
        presented.extend(pfister_tuple(field, &x)?);
        if presentation_holds(field, &input, &presented)? {
            return Ok((input, Presentation::HyperbolicPlane { x }));
        }
    }
    Err(Error::PresentationMismatch("could not generate a q = 6 split instance".into()))
}
