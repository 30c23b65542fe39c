//! Certificate checking by replay.
//!
//! Nothing here calls the chain builders, `step_symbol`, or the pipeline:
//! moves are re-applied with a local implementation, tuples are re-derived
//! from their defining formulas, and every symbol is judged only by its
//! local invariant.

use std::fmt;

use serde::Serialize;

use crate::brauer::{tame_symbol, BrauerClass, SymbolExpr};
use crate::chain::{connect_bound, connect_partial_bound, Chain, Counts, Move};
use crate::field::Field;
use crate::pipeline::{kind_bound, DecompositionCertificate, DecompositionKind};
use crate::qform;

/// The first check a certificate failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyFailure {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
    pub reason: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.stage {
            write!(f, "stage {s}: ")?;
        }
        if let Some(s) = self.step {
            write!(f, "step {s}: ")?;
        }
        f.write_str(&self.reason)
    }
}

type Check<T> = std::result::Result<T, VerifyFailure>;

fn fail<T>(reason: impl Into<String>) -> Check<T> {
    Err(VerifyFailure { stage: None, step: None, reason: reason.into() })
}

fn at_step<T>(step: usize, reason: impl Into<String>) -> Check<T> {
    Err(VerifyFailure { stage: None, step: Some(step), reason: reason.into() })
}

fn in_stage<T>(stage: usize, r: Check<T>) -> Check<T> {
    r.map_err(|mut e| {
        e.stage.get_or_insert(stage);
        e
    })
}

fn same_tuple<F: Field>(f: &F, x: &[F::Elem], y: &[F::Elem]) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| f.same(a, b))
}

fn valid_elements<F: Field>(f: &F, xs: &[F::Elem], what: &str) -> Check<()> {
    for x in xs {
        if let Err(e) = f.check_element(x) {
            return fail(format!("{what}: {e}"));
        }
        if f.is_zero(x) {
            return fail(format!("{what}: zero entry"));
        }
    }
    Ok(())
}

fn replay_move<F: Field>(f: &F, v: &mut [F::Elem], mv: &Move<F::Elem>) -> std::result::Result<(), String> {
    match mv {
        Move::Full { i, c } => {
            let slot = v.get_mut(*i).ok_or_else(|| format!("slot {i} out of range"))?;
            f.check_element(c).map_err(|e| e.to_string())?;
            if f.is_zero(c) {
                return Err("full move with zero scalar".into());
            }
            *slot = f.mul(slot, &f.mul(c, c));
        }
        Move::Dashed { i, j } => {
            if i >= j || *j >= v.len() {
                return Err(format!("dashed move on slots ({i}, {j})"));
            }
            let s = f.add(&v[*i], &v[*j]).map_err(|e| e.to_string())?;
            if f.is_zero(&s) {
                return Err("dashed move on a vanishing sum".into());
            }
            let lambda = f.div(&s, &v[*i]).map_err(|e| e.to_string())?;
            v[*j] = f.mul(&v[*j], &lambda);
            v[*i] = s;
        }
    }
    Ok(())
}

/// Replays a chain, checking counts, per-step isometry and the recorded end.
/// Returns every vertex along the walk, start included.
pub fn verify_chain<F: Field>(f: &F, chain: &Chain<F::Elem>) -> Check<Vec<Vec<F::Elem>>> {
    valid_elements(f, &chain.start, "start")?;
    let full = chain.moves.iter().filter(|m| matches!(m, Move::Full { .. })).count();
    let counts = Counts { full, dashed: chain.moves.len() - full };
    if counts != chain.counts {
        return fail(format!("counts {:?} but moves give {:?}", chain.counts, counts));
    }
    if chain.total_steps != chain.moves.len() {
        return fail(format!("total_steps {} but {} moves", chain.total_steps, chain.moves.len()));
    }
    if !chain.checkpoints.is_empty() && chain.checkpoints.len() != chain.moves.len() {
        return fail(format!("{} checkpoints for {} moves", chain.checkpoints.len(), chain.moves.len()));
    }
    let inv0 = qform::invariants(f, &chain.start).or_else(|e| fail(e.to_string()))?;
    let mut walk = vec![chain.start.clone()];
    let mut cur = chain.start.clone();
    for (k, mv) in chain.moves.iter().enumerate() {
        if let Err(e) = replay_move(f, &mut cur, mv) {
            return at_step(k, e);
        }
        if let Some(expected) = chain.checkpoints.get(k) {
            let slot = match mv {
                Move::Full { i, .. } => *i,
                Move::Dashed { j, .. } => *j,
            };
            if !f.same(&cur[slot], expected) {
                return at_step(k, format!("slot {slot} differs from the recorded checkpoint"));
            }
        }
        match qform::invariants(f, &cur) {
            Ok(inv) if inv == inv0 => {}
            Ok(_) => return at_step(k, "isometry class changed"),
            Err(e) => return at_step(k, e.to_string()),
        }
        walk.push(cur.clone());
    }
    if !chain.end.is_empty() && !same_tuple(f, &cur, &chain.end) {
        return fail("replayed end differs from the recorded end");
    }
    Ok(walk)
}

fn own_phi<F: Field>(f: &F, a: &[F::Elem]) -> Check<Vec<F::Elem>> {
    let mut b = vec![f.one()];
    let mut prefix = f.one();
    for pair in a.chunks(2) {
        let p_inv = f.inv(&prefix).or_else(|e| fail(e.to_string()))?;
        let (x, y) = (f.mul(&pair[0], &p_inv), f.mul(&pair[1], &p_inv));
        prefix = f.mul(&prefix, &f.mul(&x, &y));
        b.push(x);
        b.push(y);
    }
    b.push(a.iter().fold(f.one(), |acc, x| f.mul(&acc, x)));
    Ok(b)
}

fn own_psi<F: Field>(f: &F, b: &[F::Elem]) -> Vec<F::Elem> {
    let mut a = Vec::new();
    let mut prefix = b[0].clone();
    for i in 0..(b.len() - 2) / 2 {
        a.push(f.mul(&b[2 * i + 1], &prefix));
        a.push(f.mul(&b[2 * i + 2], &prefix));
        prefix = f.mul(&prefix, &f.mul(&b[2 * i + 1], &b[2 * i + 2]));
    }
    a
}

fn pair_class<F: Field>(f: &F, a: &[F::Elem], m: u32) -> Check<BrauerClass> {
    let mut acc = BrauerClass::zero(m);
    for pair in a.chunks(2) {
        acc = acc.add(&tame_symbol(f, &pair[0], &pair[1], m).or_else(|e| fail(e.to_string()))?);
    }
    Ok(acc)
}

fn symbol_inv<F: Field>(f: &F, s: &SymbolExpr<F::Elem>, m: u32) -> Check<BrauerClass> {
    if s.deg_log2 + 1 != m {
        return fail(format!("symbol of degree 2^{} (expected 2^{})", s.deg_log2, m - 1));
    }
    valid_elements(f, &[s.a.clone(), s.b.clone()], "symbol")?;
    Ok(tame_symbol(f, &s.a, &s.b, s.deg_log2).or_else(|e| fail(e.to_string()))?.embed(m))
}

fn show(c: &BrauerClass) -> String {
    let r = c.reduced();
    format!("{}/{}", r.num, 1u64 << r.deg_log2)
}

/// Checks a decomposition certificate against `f`, which must be built
/// from the certificate's own configuration.
pub fn verify_decomposition<F: Field>(f: &F, cert: &DecompositionCertificate<F::Elem>) -> Check<()> {
    if cert.config != *f.config() || cert.field != f.kind() {
        return fail("certificate configuration does not match the field");
    }
    let m = cert.m;
    if m == 0 || m + 1 > f.residue_field().two_adicity() {
        return fail(format!("m = {m} unsupported for p = {}", f.config().p));
    }
    let (input_len, stage_count, first_split, first_bound) = match cert.kind {
        DecompositionKind::Chain => {
            (cert.input.len(), 1, None, connect_bound(cert.input.len() + 2))
        }
        DecompositionKind::Q5 => (10, 1, None, connect_bound(12)),
        DecompositionKind::Q6Case1 => (12, 2, Some(2), connect_partial_bound(14, 6)),
        DecompositionKind::Q6Case2 => (12, 2, Some(0), connect_partial_bound(14, 2)),
    };
    if cert.input.len() != input_len || input_len == 0 || input_len % 2 == 1 {
        return fail(format!("input has {} entries", cert.input.len()));
    }
    if cert.stages.len() != stage_count {
        return fail(format!("{} stages, expected {stage_count}", cert.stages.len()));
    }
    valid_elements(f, &cert.input, "input")?;

    let mut expected_input = cert.input.clone();
    let mut output = BrauerClass::zero(m);
    let mut last_end = Vec::new();
    for (si, stage) in cert.stages.iter().enumerate() {
        let r = (|| {
            if !same_tuple(f, &stage.input, &expected_input) {
                return fail("stage input differs from the expected tuple");
            }
            if !same_tuple(f, &stage.chain.start, &own_phi(f, &stage.input)?) {
                return fail("chain does not start at phi(input)");
            }
            let walk = verify_chain(f, &stage.chain)?;
            let bound = if si == 0 { first_bound } else { connect_bound(12) };
            if !stage.chain.counts.within(&bound) {
                return fail(format!("counts {:?} exceed {:?}", stage.chain.counts, bound));
            }
            if stage.symbols.len() != stage.chain.moves.len() {
                return fail("symbol list and move list differ in length");
            }
            let mut prev = pair_class(f, &own_psi(f, &walk[0]), m)?;
            for (k, s) in stage.symbols.iter().enumerate() {
                let next = pair_class(f, &own_psi(f, &walk[k + 1]), m)?;
                let class = symbol_inv(f, s, m).map_err(|mut e| {
                    e.step = Some(k);
                    e
                })?;
                // The symbol undoes the step: class + (next − prev) = 0.
                if !class.add(&next).add(&prev.neg()).is_zero() {
                    return at_step(k, "symbol class does not cancel the step");
                }
                output = output.add(&class);
                prev = next;
            }
            let end = walk.last().unwrap().clone();
            let expected_split = if si == 0 { first_split } else { None };
            if stage.split != expected_split {
                return fail(format!("split {:?}, expected {:?}", stage.split, expected_split));
            }
            if let Some(pair) = stage.split {
                if cert.kind == DecompositionKind::Q6Case1 {
                    let prod = end[..6].iter().fold(f.one(), |acc, x| f.mul(&acc, x));
                    if !f.same(&prod, &f.one()) {
                        return fail("first six slots do not multiply to 1");
                    }
                }
                let after = own_psi(f, &end);
                let (x, y) = (&after[2 * pair], &after[2 * pair + 1]);
                if !f.same(x, &f.one()) && !f.same(y, &f.one()) {
                    return fail("split pair contains no 1");
                }
                expected_input = after
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i / 2 != pair)
                    .map(|(_, x)| x.clone())
                    .collect();
            }
            Ok(end)
        })();
        last_end = in_stage(si, r)?;
    }

    let mut tail_class = BrauerClass::zero(m);
    for s in &cert.tail {
        tail_class = tail_class.add(&symbol_inv(f, s, m)?);
    }
    let end_class = pair_class(f, &own_psi(f, &last_end), m)?;
    if tail_class != end_class {
        return fail(format!(
            "tail class {} differs from the final tuple's class {}",
            show(&tail_class),
            show(&end_class)
        ));
    }
    output = output.add(&tail_class);

    let input_class = pair_class(f, &cert.input, m)?;
    if cert.ledger.input != input_class {
        return fail(format!(
            "ledger input {} but the input has class {}",
            show(&cert.ledger.input),
            show(&input_class)
        ));
    }
    if cert.ledger.output != output {
        return fail(format!(
            "ledger output {} but the symbols sum to {}",
            show(&cert.ledger.output),
            show(&output)
        ));
    }
    if input_class != output {
        return fail(format!("ledger does not balance: {} vs {}", show(&input_class), show(&output)));
    }
    let count = cert.stages.iter().map(|s| s.symbols.len()).sum::<usize>() + cert.tail.len();
    if cert.symbol_count != count {
        return fail(format!("symbol_count {} but {count} symbols", cert.symbol_count));
    }
    let bound = kind_bound(cert.kind, cert.input.len() / 2, cert.tail.len());
    if cert.bound != bound {
        return fail(format!("bound {} recorded, {bound} applies", cert.bound));
    }
    if count > bound {
        return fail(format!("{count} symbols exceed the bound {bound}"));
    }
    Ok(())
}
