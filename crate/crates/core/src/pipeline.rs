//! End-to-end decompositions of `C_m(v)` into symbols of degree `2^{m−1}`.
//!
//! Every driver walks a chain from `φ(v)` to a tuple whose class is known
//! from a presentation, converts each move into one symbol, and closes with
//! tail symbols for the final tuple. The result is a
//! [`DecompositionCertificate`] that [`crate::verify`] can re-check without
//! any of the code here.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::brauer::{
    cm_class, is_b_tuple, pfister_tuple, phi, pfister_symbol, psi, rost14_tuple, step_symbol,
    symbol_class, BrauerClass, QuadExtElement, SymbolExpr,
};
use crate::chain::{connect, connect_bound, connect_partial, Chain};
use crate::error::{Error, Result};
use crate::field::{Field, FieldConfig, FieldKind};
use crate::qform;

pub const Q5_BOUND: usize = 200;
pub const Q6_BOUND: usize = 362;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompositionKind {
    Chain,
    Q5,
    #[serde(rename = "q6-case1")]
    Q6Case1,
    #[serde(rename = "q6-case2")]
    Q6Case2,
}

/// Data identifying the tuple a decomposition walks towards.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
#[serde(bound = "E: Serialize + DeserializeOwned")]
pub enum Presentation<E> {
    /// `φ(input) ≅ pfister_tuple(x)`.
    Pfister { x: [E; 6] },
    /// `φ(input) ≅ rost14_tuple(u, v, w)` over `F(√d)`; `reduced` presents
    /// the 5-pair instance left after the split pair is dropped.
    Rost {
        d: E,
        u: QuadExtElement<E>,
        v: QuadExtElement<E>,
        w: QuadExtElement<E>,
        reduced: [E; 6],
    },
    /// `φ(input) ≅ ⟨1, 1⟩ ⊥ pfister_tuple(x)`.
    HyperbolicPlane { x: [E; 6] },
}

/// One chain together with the symbols its moves contribute.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "E: Serialize + DeserializeOwned")]
pub struct Stage<E> {
    /// A-tuple whose `φ` starts the chain.
    pub input: Vec<E>,
    pub chain: Chain<E>,
    /// One symbol per move: the negated step symbol.
    pub symbols: Vec<SymbolExpr<E>>,
    /// Pair of `ψ(chain.end)` (0-based) that contains a 1 and is dropped to
    /// form the next stage's input. `None` on the last stage.
    pub split: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    pub input: BrauerClass,
    pub output: BrauerClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "E: Serialize + DeserializeOwned")]
pub struct DecompositionCertificate<E> {
    pub config: FieldConfig,
    pub field: FieldKind,
    pub kind: DecompositionKind,
    pub m: u32,
    pub input: Vec<E>,
    pub stages: Vec<Stage<E>>,
    pub tail: Vec<SymbolExpr<E>>,
    pub ledger: Ledger,
    pub symbol_count: usize,
    pub bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<Presentation<E>>,
}

impl<E> DecompositionCertificate<E> {
    /// All emitted symbols in order: stage symbols, then the tail.
    pub fn symbols(&self) -> impl Iterator<Item = &SymbolExpr<E>> {
        self.stages.iter().flat_map(|s| s.symbols.iter()).chain(self.tail.iter())
    }
}

/// Symbol bound for a decomposition of the given kind.
pub fn kind_bound(kind: DecompositionKind, n_pairs: usize, tail_len: usize) -> usize {
    match kind {
        DecompositionKind::Chain => connect_bound(2 * n_pairs + 2).total() + tail_len,
        DecompositionKind::Q5 => Q5_BOUND,
        DecompositionKind::Q6Case1 | DecompositionKind::Q6Case2 => Q6_BOUND,
    }
}

/// Runs `run` at the field's precision, doubling it (up to the cap) each
/// time a step reports [`Error::PrecisionExhausted`].
pub fn with_precision_retry<F: Field, T>(field: &F, mut run: impl FnMut(&F) -> Result<T>) -> Result<T> {
    let mut current = field.clone();
    loop {
        match run(&current) {
            Err(Error::PrecisionExhausted) => match current.doubled() {
                Some(next) => current = next,
                None => return Err(Error::PrecisionExhausted),
            },
            other => return other,
        }
    }
}

fn lift_all<F: Field>(field: &F, xs: &[F::Elem]) -> Vec<F::Elem> {
    xs.iter().map(|x| field.lift(x)).collect()
}

fn lift6<F: Field>(field: &F, x: &[F::Elem; 6]) -> [F::Elem; 6] {
    std::array::from_fn(|i| field.lift(&x[i]))
}

fn lift_quad<F: Field>(field: &F, z: &QuadExtElement<F::Elem>) -> QuadExtElement<F::Elem> {
    QuadExtElement { x: field.lift(&z.x), y: field.lift(&z.y), d: field.lift(&z.d) }
}

fn check_m<F: Field>(field: &F, m: u32) -> Result<()> {
    let s = field.residue_field().two_adicity();
    if m == 0 || m + 1 > s {
        return Err(Error::InvalidInput(format!(
            "decompositions need 1 <= m and 2^(m+1) | p - 1 (m = {m})"
        )));
    }
    Ok(())
}

fn check_exponent<F: Field>(field: &F, input: &[F::Elem], m: u32) -> Result<BrauerClass> {
    let class = cm_class(field, input, m)?;
    if !class.times_pow2(m - 1).is_zero() {
        return Err(Error::ExponentTooLarge);
    }
    Ok(class)
}

/// The negated step symbol `(α, β⁻¹)` for each move of `chain`.
fn stage_symbols<F: Field>(field: &F, chain: &Chain<F::Elem>, m: u32) -> Result<Vec<SymbolExpr<F::Elem>>> {
    let mut cur = chain.start.clone();
    let mut out = Vec::with_capacity(chain.moves.len());
    for mv in &chain.moves {
        let next = crate::chain::apply_move(field, &cur, mv)?;
        let s = step_symbol(field, &cur, &next, mv, m)?;
        out.push(SymbolExpr { a: s.a, b: field.inv(&s.b)?, deg_log2: s.deg_log2 });
        cur = next;
    }
    Ok(out)
}

/// Drops pair `pair` (0-based) from an A-tuple.
fn drop_pair<E: Clone>(a: &[E], pair: usize) -> Vec<E> {
    a.iter()
        .enumerate()
        .filter(|(i, _)| i / 2 != pair)
        .map(|(_, x)| x.clone())
        .collect()
}

struct Assembly<F: Field> {
    stages: Vec<Stage<F::Elem>>,
    tail: Vec<SymbolExpr<F::Elem>>,
}

fn finish<F: Field>(
    field: &F,
    kind: DecompositionKind,
    m: u32,
    input: Vec<F::Elem>,
    input_class: BrauerClass,
    asm: Assembly<F>,
    presentation: Option<Presentation<F::Elem>>,
) -> Result<DecompositionCertificate<F::Elem>> {
    let mut output = BrauerClass::zero(m);
    for s in asm.stages.iter().flat_map(|s| &s.symbols).chain(&asm.tail) {
        output = output.add(&symbol_class(field, s)?.embed(m));
    }
    if output != input_class {
        return Err(Error::InvalidEdge(format!(
            "ledger does not balance: input {input_class:?}, output {output:?}"
        )));
    }
    let symbol_count = asm.stages.iter().map(|s| s.symbols.len()).sum::<usize>() + asm.tail.len();
    let bound = kind_bound(kind, input.len() / 2, asm.tail.len());
    Ok(DecompositionCertificate {
        config: *field.config(),
        field: field.kind(),
        kind,
        m,
        input,
        stages: asm.stages,
        tail: asm.tail,
        ledger: Ledger { input: input_class, output },
        symbol_count,
        bound,
        presentation,
    })
}

/// Chain from `φ(v)` to `target`, one symbol per move, then `tail`, whose
/// classes must add up to `C_m(ψ(target))`.
pub fn decompose_via_chain<F: Field>(
    field: &F,
    v: &[F::Elem],
    target: &[F::Elem],
    tail: &[SymbolExpr<F::Elem>],
    m: u32,
) -> Result<DecompositionCertificate<F::Elem>> {
    check_m(field, m)?;
    with_precision_retry(field, |f| {
        let v = lift_all(f, v);
        let target = lift_all(f, target);
        let tail: Vec<_> = tail
            .iter()
            .map(|s| SymbolExpr { a: f.lift(&s.a), b: f.lift(&s.b), deg_log2: s.deg_log2 })
            .collect();
        if !is_b_tuple(f, &target)? {
            return Err(Error::InvalidInput("target is not a B-tuple".into()));
        }
        let mut tail_class = BrauerClass::zero(m);
        for s in &tail {
            if s.deg_log2 + 1 != m {
                return Err(Error::InvalidInput("tail symbols must have degree 2^(m-1)".into()));
            }
            tail_class = tail_class.add(&symbol_class(f, s)?.embed(m));
        }
        if tail_class != cm_class(f, &psi(f, &target)?, m)? {
            return Err(Error::PresentationMismatch("tail does not match the target class".into()));
        }
        let input_class = cm_class(f, &v, m)?;
        let stage = run_stage(f, &v, &target, m, f.config().seed)?;
        let asm = Assembly { stages: vec![stage], tail };
        finish(f, DecompositionKind::Chain, m, v, input_class, asm, None)
    })
}

fn run_stage<F: Field>(field: &F, input: &[F::Elem], target: &[F::Elem], m: u32, seed: u64) -> Result<Stage<F::Elem>> {
    let start = phi(field, input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chain = connect(field, &mut rng, &start, target)?;
    let symbols = stage_symbols(field, &chain, m)?;
    Ok(Stage { input: input.to_vec(), chain, symbols, split: None })
}

/// Five symbols of exponent dividing `2^{m−1}` with a presentation
/// `φ(input) ≅ pfister_tuple(x)`: at most 199 chain symbols plus one.
pub fn decompose5<F: Field>(
    field: &F,
    input: &[F::Elem],
    x: &[F::Elem; 6],
    m: u32,
) -> Result<DecompositionCertificate<F::Elem>> {
    check_m(field, m)?;
    if input.len() != 10 {
        return Err(Error::InvalidInput("decompose5 takes 10 entries".into()));
    }
    with_precision_retry(field, |f| {
        let input = lift_all(f, input);
        let x = lift6(f, x);
        let input_class = check_exponent(f, &input, m)?;
        let (stage, tail) = q5_stage(f, &input, &x, m, f.config().seed)?;
        let asm = Assembly { stages: vec![stage], tail: vec![tail] };
        let pres = Presentation::Pfister { x };
        finish(f, DecompositionKind::Q5, m, input, input_class, asm, Some(pres))
    })
}

fn q5_stage<F: Field>(
    field: &F,
    input: &[F::Elem],
    x: &[F::Elem; 6],
    m: u32,
    seed: u64,
) -> Result<(Stage<F::Elem>, SymbolExpr<F::Elem>)> {
    let target = pfister_tuple(field, x)?;
    if !qform::is_isometric(field, &phi(field, input)?, &target)? {
        return Err(Error::PresentationMismatch(
            "phi(input) is not isometric to the Pfister tuple".into(),
        ));
    }
    let stage = run_stage(field, input, &target, m, seed)?;
    Ok((stage, pfister_symbol(field, x, m)?))
}

/// Six symbols of exponent dividing `2^{m−1}`: a partial chain splits off
/// one pair, and the remaining five go through [`decompose5`]'s path.
pub fn decompose6<F: Field>(
    field: &F,
    input: &[F::Elem],
    presentation: &Presentation<F::Elem>,
    m: u32,
) -> Result<DecompositionCertificate<F::Elem>> {
    check_m(field, m)?;
    if input.len() != 12 {
        return Err(Error::InvalidInput("decompose6 takes 12 entries".into()));
    }
    with_precision_retry(field, |f| {
        let input = lift_all(f, input);
        let input_class = check_exponent(f, &input, m)?;
        let start = phi(f, &input)?;
        let seed = f.config().seed;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (kind, chain, split, reduced_x, pres) = match presentation {
            Presentation::Rost { d, u, v, w, reduced } => {
                let (d, u, v, w) = (f.lift(d), lift_quad(f, u), lift_quad(f, v), lift_quad(f, w));
                let full = rost14_tuple(f, &u, &v, &w)?;
                if !qform::is_isometric(f, &start, &full)? {
                    return Err(Error::PresentationMismatch(
                        "phi(input) is not isometric to the trace/norm tuple".into(),
                    ));
                }
                let (chain, end) = connect_partial(f, &mut rng, &start, &full[..6])?;
                if !f.same(&f.product(&end[..6]), &f.one()) {
                    return Err(Error::PresentationMismatch("first six slots do not multiply to 1".into()));
                }
                let reduced = lift6(f, reduced);
                let pres = Presentation::Rost { d, u, v, w, reduced: reduced.clone() };
                (DecompositionKind::Q6Case1, chain, 2, reduced, pres)
            }
            Presentation::HyperbolicPlane { x } => {
                let x = lift6(f, x);
                let mut full = vec![f.one(), f.one()];
                full.extend(pfister_tuple(f, &x)?);
                if !qform::is_isometric(f, &start, &full)? {
                    return Err(Error::PresentationMismatch(
                        "phi(input) is not isometric to <1,1> + Pfister tuple".into(),
                    ));
                }
                let (chain, end) = connect_partial(f, &mut rng, &start, &full[..2])?;
                // φ of the reduced tuple is end[2]·⟨end[2..]⟩ slotwise up to squares.
                let s = end[2].clone();
                let mut reduced = x.clone();
                reduced[4] = f.mul(&reduced[4], &s);
                reduced[5] = f.mul(&reduced[5], &s);
                (DecompositionKind::Q6Case2, chain, 0, reduced, Presentation::HyperbolicPlane { x })
            }
            Presentation::Pfister { .. } => {
                return Err(Error::InvalidInput("decompose6 needs a 14-slot presentation".into()))
            }
        };
        let after = psi(f, &chain.end)?;
        if !f.same(&after[2 * split], &f.one()) {
            return Err(Error::PresentationMismatch("split pair does not start with 1".into()));
        }
        let symbols = stage_symbols(f, &chain, m)?;
        let first = Stage { input: input.clone(), chain, symbols, split: Some(split) };
        let reduced_input = drop_pair(&after, split);
        let (second, tail) = q5_stage(f, &reduced_input, &reduced_x, m, seed.wrapping_add(1))?;
        let asm = Assembly { stages: vec![first, second], tail: vec![tail] };
        finish(f, kind, m, input, input_class, asm, Some(pres))
    })
}
