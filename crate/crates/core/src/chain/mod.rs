//! Walks in the graph on `F^{×n}`.
//!
//! A full move scales one slot by a square; a dashed move on slots `i < j`
//! multiplies both by `λ = 1 + a_j/a_i`. Both preserve the isometry class of
//! ⟨a₁,…,a_n⟩. This module builds walks with certified step counts: the swap
//! gadget, permutations, [`connect`] between isometric vertices and
//! [`connect_partial`] towards prescribed leading slots.

mod bfs;

use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::qform;

pub use bfs::bfs_min_chain;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "t", rename_all = "lowercase")]
#[serde(bound = "E: Serialize + DeserializeOwned")]
pub enum Move<E> {
    Full { i: usize, c: E },
    Dashed { i: usize, j: usize },
}

impl<E> Move<E> {
    pub fn is_full(&self) -> bool {
        matches!(self, Move::Full { .. })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub full: usize,
    pub dashed: usize,
}

impl Counts {
    pub fn total(&self) -> usize {
        self.full + self.dashed
    }

    pub fn of<E>(moves: &[Move<E>]) -> Counts {
        let full = moves.iter().filter(|m| m.is_full()).count();
        Counts { full, dashed: moves.len() - full }
    }

    pub fn within(&self, bound: &Counts) -> bool {
        self.full <= bound.full && self.dashed <= bound.dashed
    }
}

/// A start vertex, a move list, and the vertex the moves end at.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "E: Serialize + DeserializeOwned")]
pub struct Chain<E> {
    pub start: Vec<E>,
    pub moves: Vec<Move<E>>,
    pub counts: Counts,
    pub total_steps: usize,
    /// p-adic digits the chain was computed with (0 over 𝔽_p).
    pub precision_used: u32,
    #[serde(default)]
    pub end: Vec<E>,
    /// After each move, the new value of the slot it rescaled: `i` for
    /// `Full{i, c}`, `j` for `Dashed{i, j}`. Lets a replay name the first
    /// wrong step.
    #[serde(default)]
    pub checkpoints: Vec<E>,
}

impl<E> Chain<E> {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

/// Step-count bounds for [`connect`] on `n` slots.
pub fn connect_bound(n: usize) -> Counts {
    let n1 = n.saturating_sub(1);
    Counts { full: (n + 1) * n / 2 + 3 * n1, dashed: n * n1 / 2 + 2 * n1 }
}

/// Step-count bounds for [`connect_partial`] with `k` targets on `n` slots.
pub fn connect_partial_bound(n: usize, k: usize) -> Counts {
    Counts {
        full: k * (2 * n + 1 - k) / 2 + 3 * k,
        dashed: (k * (2 * n).saturating_sub(k + 1)) / 2 + 2 * k,
    }
}

pub fn swap_bound() -> Counts {
    Counts { full: 3, dashed: 2 }
}

pub fn permutation_bound(n: usize) -> Counts {
    let n1 = n.saturating_sub(1);
    Counts { full: 3 * n1, dashed: 2 * n1 }
}

fn check_vertex<F: Field>(field: &F, v: &[F::Elem]) -> Result<()> {
    for a in v {
        field.check_element(a)?;
        if field.is_zero(a) {
            return Err(Error::InvalidInput("vertex slots must be nonzero".into()));
        }
    }
    Ok(())
}

pub fn apply_move<F: Field>(field: &F, v: &[F::Elem], mv: &Move<F::Elem>) -> Result<Vec<F::Elem>> {
    let mut w = v.to_vec();
    apply_in_place(field, &mut w, mv)?;
    Ok(w)
}

fn apply_in_place<F: Field>(field: &F, v: &mut [F::Elem], mv: &Move<F::Elem>) -> Result<()> {
    match mv {
        Move::Full { i, c } => {
            if *i >= v.len() {
                return Err(Error::InvalidInput(format!("slot {i} out of range")));
            }
            if field.is_zero(c) {
                return Err(Error::InvalidInput("full move with c = 0".into()));
            }
            v[*i] = field.mul(&v[*i], &field.square(c));
        }
        Move::Dashed { i, j } => {
            if i >= j || *j >= v.len() {
                return Err(Error::InvalidInput(format!("dashed move on slots ({i}, {j})")));
            }
            let sum = field.add(&v[*i], &v[*j])?;
            if field.is_zero(&sum) {
                return Err(Error::InvalidDashed { i: *i, j: *j });
            }
            let lambda = field.div(&sum, &v[*i])?;
            v[*j] = field.mul(&v[*j], &lambda);
            v[*i] = sum;
        }
    }
    Ok(())
}

/// Accumulates moves while tracking the current vertex.
pub struct ChainBuilder<'a, F: Field> {
    field: &'a F,
    start: Vec<F::Elem>,
    current: Vec<F::Elem>,
    moves: Vec<Move<F::Elem>>,
    checkpoints: Vec<F::Elem>,
}

impl<'a, F: Field> ChainBuilder<'a, F> {
    pub fn new(field: &'a F, start: &[F::Elem]) -> Result<Self> {
        check_vertex(field, start)?;
        Ok(ChainBuilder {
            field,
            start: start.to_vec(),
            current: start.to_vec(),
            moves: Vec::new(),
            checkpoints: Vec::new(),
        })
    }

    pub fn current(&self) -> &[F::Elem] {
        &self.current
    }

    pub fn push(&mut self, mv: Move<F::Elem>) -> Result<()> {
        apply_in_place(self.field, &mut self.current, &mv)?;
        let slot = match mv {
            Move::Full { i, .. } => i,
            Move::Dashed { j, .. } => j,
        };
        self.checkpoints.push(self.current[slot].clone());
        self.moves.push(mv);
        Ok(())
    }

    /// Full move, skipped when `c² = 1`.
    pub fn scale(&mut self, i: usize, c: F::Elem) -> Result<()> {
        let f = self.field;
        if f.same(&f.square(&c), &f.one()) {
            return Ok(());
        }
        self.push(Move::Full { i, c })
    }

    pub fn dashed(&mut self, i: usize, j: usize) -> Result<()> {
        self.push(Move::Dashed { i, j })
    }

    /// Exchanges slots `i` and `j` with the swap gadget.
    pub fn swap(&mut self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Ok(());
        }
        let (lo, hi) = (i.min(j), i.max(j));
        if hi >= self.current.len() {
            return Err(Error::InvalidInput(format!("slot {hi} out of range")));
        }
        let f = self.field;
        let a = self.current[lo].clone();
        let b = self.current[hi].clone();
        let ratio = f.div(&a, &b)?;
        if f.is_square(&ratio)? {
            // a = x²b: (a, b) → (a/x², b) → (a/x², x²b).
            let x = f.sqrt(&ratio)?;
            self.scale(lo, f.inv(&x)?)?;
            return self.scale(hi, x);
        }
        let sum = f.add(&a, &b)?;
        if !f.is_zero(&sum) {
            // (a+b, b(a+b)/a) → (a+b, a(a+b)/b) → ((a+b)²/b, a(a+b)²/b²) → (b, a).
            let back = f.div(&b, &sum)?;
            self.dashed(lo, hi)?;
            self.push(Move::Full { i: hi, c: f.div(&a, &b)? })?;
            self.dashed(lo, hi)?;
            self.push(Move::Full { i: hi, c: back.clone() })?;
            return self.push(Move::Full { i: lo, c: back });
        }
        // b = −a with −1 a non-square. Pick c² − s² = 1 with c, s ≠ 0:
        // (a, −a) → (a, −ac²) → (−as², ac²s²) → (−a, ac²s²) → (−a, a).
        let (c, s) = unit_hyperbola_point(f)?;
        self.push(Move::Full { i: hi, c: c.clone() })?;
        self.dashed(lo, hi)?;
        self.push(Move::Full { i: lo, c: f.inv(&s)? })?;
        self.push(Move::Full { i: hi, c: f.inv(&f.mul(&c, &s))? })
    }

    /// Rearranges so that final slot `k` holds the current slot `sigma[k]`.
    pub fn permute(&mut self, sigma: &[usize]) -> Result<()> {
        let n = self.current.len();
        check_permutation(sigma, n)?;
        // holding[k] = which original slot currently sits at k.
        let mut holding: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let j = (k..n).find(|&j| holding[j] == sigma[k]).expect("permutation");
            if j != k {
                self.swap(k, j)?;
                holding.swap(k, j);
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Chain<F::Elem> {
        let counts = Counts::of(&self.moves);
        Chain {
            start: self.start,
            counts,
            total_steps: counts.total(),
            moves: self.moves,
            precision_used: self.field.precision().unwrap_or(0),
            end: self.current,
            checkpoints: self.checkpoints,
        }
    }
}

fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if sigma.len() != n {
        return Err(Error::InvalidInput("permutation has wrong length".into()));
    }
    for &s in sigma {
        if s >= n || std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidInput("not a permutation".into()));
        }
    }
    Ok(())
}

/// `(c, s)` with `c² − s² = 1` and `c, s ≠ 0`, from `c = (t + 1/t)/2`,
/// `s = (t − 1/t)/2` for the smallest `t ≥ 2` with `t² ≠ ±1`.
fn unit_hyperbola_point<F: Field>(f: &F) -> Result<(F::Elem, F::Elem)> {
    let half = f.inv(&f.from_i64(2))?;
    for t in 2..64 {
        let t = f.from_i64(t);
        let t2 = f.square(&t);
        if f.is_zero(&t) || f.same(&t2, &f.one()) || f.same(&t2, &f.neg(&f.one())) {
            continue;
        }
        let ti = f.inv(&t)?;
        let c = f.mul(&f.add(&t, &ti)?, &half);
        let s = f.mul(&f.sub(&t, &ti)?, &half);
        return Ok((c, s));
    }
    Err(Error::InvalidInput("field too small for the swap gadget".into()))
}

pub fn swap_chain<F: Field>(field: &F, v: &[F::Elem], i: usize, j: usize) -> Result<Chain<F::Elem>> {
    let mut b = ChainBuilder::new(field, v)?;
    b.swap(i, j)?;
    Ok(b.finish())
}

/// Chain whose final slot `k` holds `v[sigma[k]]`.
pub fn permutation_chain<F: Field>(
    field: &F,
    v: &[F::Elem],
    sigma: &[usize],
) -> Result<Chain<F::Elem>> {
    let mut b = ChainBuilder::new(field, v)?;
    b.permute(sigma)?;
    Ok(b.finish())
}

/// Drops zero terms and every prefix whose running sum vanishes, scanning
/// left to right. The kept terms have the same total and no vanishing
/// prefix sum.
pub fn subsequence_extract<F: Field>(field: &F, terms: &[F::Elem]) -> Result<Vec<usize>> {
    let mut kept = Vec::new();
    let mut sum = field.zero();
    for (idx, t) in terms.iter().enumerate() {
        if field.is_zero(t) {
            continue;
        }
        sum = field.add(&sum, t)?;
        if field.is_zero(&sum) {
            kept.clear();
        } else {
            kept.push(idx);
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyResult);
    }
    Ok(kept)
}

/// Represents `target` on the `free` slots and merges the representation
/// into the first selected slot. Returns that slot. A free slot already
/// equal to the target is used as is, `preferred` first.
fn place<F: Field, R: Rng + ?Sized>(
    b: &mut ChainBuilder<'_, F>,
    rng: &mut R,
    free: &[usize],
    target: &F::Elem,
    preferred: usize,
) -> Result<usize> {
    let f = b.field;
    let equal = |s: &usize| f.same(&b.current[*s], target);
    if free.contains(&preferred) && equal(&preferred) {
        return Ok(preferred);
    }
    if let Some(&s) = free.iter().find(|s| equal(s)) {
        return Ok(s);
    }
    let form: Vec<F::Elem> = free.iter().map(|&s| b.current[s].clone()).collect();
    let x = qform::represent(f, rng, &form, target)?;
    let terms: Vec<F::Elem> = form.iter().zip(&x).map(|(a, xi)| f.mul(a, &f.square(xi))).collect();
    let selected = subsequence_extract(f, &terms)?;
    for &s in &selected {
        b.scale(free[s], x[s].clone())?;
    }
    let first = free[selected[0]];
    for &s in &selected[1..] {
        b.dashed(first, free[s])?;
    }
    if !f.same(&b.current[first], target) {
        return Err(precision_or_bug(f, "placed slot differs from its target"));
    }
    Ok(first)
}

fn precision_or_bug<F: Field>(f: &F, what: &str) -> Error {
    if f.precision().is_some() {
        Error::PrecisionExhausted
    } else {
        panic!("{what} over an exact field")
    }
}

/// A chain from `v` to `w`, filling target slots from the last one down and
/// finishing with a permutation.
pub fn connect<F: Field, R: Rng + ?Sized>(
    field: &F,
    rng: &mut R,
    v: &[F::Elem],
    w: &[F::Elem],
) -> Result<Chain<F::Elem>> {
    check_vertex(field, w)?;
    if v.len() != w.len() || !qform::is_isometric(field, v, w)? {
        return Err(Error::NotIsometric);
    }
    let n = v.len();
    let mut b = ChainBuilder::new(field, v)?;
    let mut free: Vec<usize> = (0..n).collect();
    let mut holder = vec![0; n];
    for t in (0..n).rev() {
        let slot = place(&mut b, rng, &free, &w[t], t)?;
        holder[t] = slot;
        free.retain(|&s| s != slot);
    }
    b.permute(&holder)?;
    let chain = b.finish();
    if !chain.end.iter().zip(w).all(|(x, y)| field.same(x, y)) {
        return Err(precision_or_bug(field, "connect missed its target"));
    }
    Ok(chain)
}

/// A chain from `v` to a vertex whose first `k` slots are `targets`.
/// Representability of each target is discovered along the way.
pub fn connect_partial<F: Field, R: Rng + ?Sized>(
    field: &F,
    rng: &mut R,
    v: &[F::Elem],
    targets: &[F::Elem],
) -> Result<(Chain<F::Elem>, Vec<F::Elem>)> {
    check_vertex(field, targets)?;
    let n = v.len();
    if targets.len() > n {
        return Err(Error::InvalidInput("more targets than slots".into()));
    }
    let mut b = ChainBuilder::new(field, v)?;
    let mut free: Vec<usize> = (0..n).collect();
    // slot_of[t] = slot holding target t; target_at[s] = target held at s.
    let mut slot_of = Vec::with_capacity(targets.len());
    let mut target_at = vec![None; n];
    for (t, target) in targets.iter().enumerate() {
        let slot = place(&mut b, rng, &free, target, t)?;
        slot_of.push(slot);
        target_at[slot] = Some(t);
        free.retain(|&s| s != slot);
    }
    for t in 0..targets.len() {
        let s = slot_of[t];
        if s == t {
            continue;
        }
        b.swap(t, s)?;
        if let Some(u) = target_at[t] {
            slot_of[u] = s;
        }
        target_at.swap(t, s);
        slot_of[t] = t;
    }
    let chain = b.finish();
    if !chain.end.iter().zip(targets).all(|(x, y)| field.same(x, y)) {
        return Err(precision_or_bug(field, "connect_partial missed a target"));
    }
    let end = chain.end.clone();
    Ok((chain, end))
}

/// Replays `chain` from its start, checking recorded counts.
pub fn replay<F: Field>(field: &F, chain: &Chain<F::Elem>) -> Result<Vec<F::Elem>> {
    if Counts::of(&chain.moves) != chain.counts || chain.counts.total() != chain.total_steps {
        return Err(Error::InvalidInput("recorded counts do not match the moves".into()));
    }
    let mut v = chain.start.clone();
    check_vertex(field, &v)?;
    for mv in &chain.moves {
        apply_in_place(field, &mut v, mv)?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ElementKind, FieldConfig, Fp, PadicField, PrimeField};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64, m: u32) -> PrimeField {
        PrimeField::new(FieldConfig::new(p, m, 64, 0)).unwrap()
    }

    fn v(xs: &[u64]) -> Vec<Fp> {
        xs.iter().map(|&x| Fp::new(x)).collect()
    }

    #[test]
    fn dashed_move_formula() {
        let k = fp(17, 3);
        let (a, b) = (3u64, 5u64);
        let w = apply_move(&k, &v(&[a, b]), &Move::Dashed { i: 0, j: 1 }).unwrap();
        // (a + b, b + b²/a)
        let b2a = k.mul(b * b % 17, k.inverse(a));
        assert_eq!(w, v(&[a + b, (b + b2a) % 17]));
        assert_eq!(
            apply_move(&k, &v(&[1, 16]), &Move::Dashed { i: 0, j: 1 }),
            Err(Error::InvalidDashed { i: 0, j: 1 })
        );
        let same = apply_move(&k, &v(&[4, 7]), &Move::Full { i: 1, c: Fp::new(1) }).unwrap();
        assert_eq!(same, v(&[4, 7]));
    }

    #[test]
    fn swap_examples() {
        let k = fp(17, 3);
        let c = swap_chain(&k, &v(&[12, 3]), 0, 1).unwrap();
        assert_eq!(c.end, v(&[3, 12]));
        assert_eq!(c.counts, Counts { full: 2, dashed: 0 });
        let c = swap_chain(&k, &v(&[1, 3]), 0, 1).unwrap();
        assert_eq!(c.end, v(&[3, 1]));
        assert_eq!(c.counts, Counts { full: 3, dashed: 2 });
        assert!(c.moves[0] == Move::Dashed { i: 0, j: 1 } && c.moves[2] == Move::Dashed { i: 0, j: 1 });
        assert!(swap_chain(&k, &v(&[1, 3]), 1, 1).unwrap().is_empty());
    }

    #[test]
    fn swap_negatives_when_minus_one_is_not_square() {
        for p in [7, 11, 19, 23, 43, 10007] {
            let k = fp(p, 0);
            for a in 1..p.min(50) {
                let w = v(&[a, p - a]);
                let c = swap_chain(&k, &w, 0, 1).unwrap();
                assert_eq!(c.end, v(&[p - a, a]));
                assert!(c.counts.within(&swap_bound()));
            }
        }
    }

    #[test]
    fn subsequence_examples() {
        let k = fp(17, 3);
        let t = |xs: &[i64]| xs.iter().map(|&x| k.from_i64(x)).collect::<Vec<_>>();
        assert_eq!(subsequence_extract(&k, &t(&[2, 3, -5, 7])).unwrap(), vec![3]);
        assert_eq!(subsequence_extract(&k, &t(&[0, 5])).unwrap(), vec![1]);
        assert_eq!(subsequence_extract(&k, &t(&[1, 2, 3])).unwrap(), vec![0, 1, 2]);
        assert_eq!(subsequence_extract(&k, &t(&[1, -1])), Err(Error::EmptyResult));
    }

    #[test]
    fn permutation_reorders() {
        let k = fp(13, 1);
        let start = v(&[1, 2, 3, 4, 5]);
        let sigma = [4, 2, 0, 1, 3];
        let c = permutation_chain(&k, &start, &sigma).unwrap();
        assert_eq!(c.end, v(&[5, 3, 1, 2, 4]));
        assert!(c.counts.within(&permutation_bound(5)));
        assert!(permutation_chain(&k, &start, &[0, 1, 2, 3, 4]).unwrap().is_empty());
    }

    #[test]
    fn bounds_match_closed_forms() {
        assert_eq!(connect_bound(12).total(), 199);
        for n in 1..20 {
            assert_eq!(connect_bound(n).total(), n * n + 5 * n - 5);
        }
        assert_eq!(connect_partial_bound(14, 6).total(), 162);
        assert_eq!(connect_partial_bound(14, 2).total(), 62);
        assert_eq!(connect_partial_bound(14, 0).total(), 0);
    }

    #[test]
    fn connect_reaches_target_padic() {
        let k = PadicField::new(FieldConfig::new(17, 3, 64, 0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 2..=6 {
            let a: Vec<_> = (0..n).map(|_| k.random_element(&mut rng, ElementKind::Any)).collect();
            // An isometric target: permute, rescale by squares, and apply moves.
            let mut b = ChainBuilder::new(&k, &a).unwrap();
            b.swap(0, n - 1).unwrap();
            b.scale(1, k.from_i64(5)).unwrap();
            b.dashed(0, 1).unwrap();
            let w = b.finish().end;
            let c = connect(&k, &mut rng, &a, &w).unwrap();
            assert!(c.counts.within(&connect_bound(n)));
            let end = replay(&k, &c).unwrap();
            assert!(end.iter().zip(&w).all(|(x, y)| k.same(x, y)));
        }
    }

    #[test]
    fn serde_uses_tagged_moves() {
        let k = fp(17, 3);
        let c = swap_chain(&k, &v(&[1, 3]), 0, 1).unwrap();
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["moves"][0], serde_json::json!({"t": "dashed", "i": 0, "j": 1}));
        assert_eq!(json["moves"][1]["t"], "full");
        assert_eq!(json["counts"], serde_json::json!({"full": 3, "dashed": 2}));
        let back: Chain<Fp> = serde_json::from_value(json).unwrap();
        assert_eq!(back, c);
    }
}
