//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Criteria run one after another so each timing has the whole machine;
//! trials inside a criterion are spread over rayon's pool.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use chainlen_core::brauer::{
    clifford_class, cm_class, pfister_symbol, pfister_tuple, phi, psi, step_symbol, symbol_class, tame_symbol,
    BrauerClass, StepCase, SymbolExpr,
};
use chainlen_core::chain::{
    bfs_min_chain, connect, connect_bound, connect_partial, connect_partial_bound, swap_chain, Counts, Move,
};
use chainlen_core::field::{Field, FieldConfig, Padic, PadicField, PrimeField};
use chainlen_core::pipeline::{
    decompose5, decompose6, DecompositionCertificate, DecompositionKind, Q5_BOUND, Q6_BOUND,
};
use chainlen_core::{generate, verify};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Verdict = Result<String, String>;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn qp(p: u64, m: u32) -> PadicField {
    PadicField::new(FieldConfig::new(p, m, 64, 0)).unwrap()
}

fn fp(p: u64, m: u32) -> PrimeField {
    PrimeField::new(FieldConfig::new(p, m, 64, 0)).unwrap()
}

fn same_tuple<F: Field>(f: &F, x: &[F::Elem], y: &[F::Elem]) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| f.same(a, b))
}

/// Collects the first failure message, if any, from parallel trial results.
fn first_error<T>(results: &[Result<T, String>]) -> Option<String> {
    results.iter().find_map(|r| r.as_ref().err().cloned())
}

fn phi_psi_failures<F: Field>(f: &F, n: usize, trials: usize, stream: u64) -> usize {
    let mut r = rng(1, stream);
    (0..trials)
        .filter(|_| {
            let a = generate::random_vertex(f, &mut r, 2 * n);
            let back = psi(f, &phi(f, &a).unwrap()).unwrap();
            !same_tuple(f, &back, &a)
        })
        .count()
}

fn c1() -> Verdict {
    let (f, q) = (fp(17, 3), qp(17, 3));
    let failures: usize = (1..=7usize)
        .into_par_iter()
        .map(|n| phi_psi_failures(&f, n, 10_000, n as u64) + phi_psi_failures(&q, n, 10_000, 100 + n as u64))
        .sum();
    if failures == 0 {
        Ok("140000 tuples, n = 1..7 pairs over F_17 and Q_17, zero failures".into())
    } else {
        Err(format!("{failures} tuples with psi(phi(a)) != a"))
    }
}

fn c2() -> Verdict {
    let f = fp(13, 1);
    let bound = Counts { full: 3, dashed: 2 };
    let mut worst_gadget = 0;
    let mut worst_bfs = 0;
    let mut pairs = 0;
    for a in 1..13 {
        for b in 1..13 {
            let v = [f.from_i64(a), f.from_i64(b)];
            let w = [v[1], v[0]];
            let c = swap_chain(&f, &v, 0, 1).map_err(|e| format!("swap ({a}, {b}): {e}"))?;
            if !same_tuple(&f, &c.end, &w) {
                return Err(format!("swap ({a}, {b}) ends at {:?}", c.end));
            }
            if !c.counts.within(&bound) || c.total_steps > 5 {
                return Err(format!("swap ({a}, {b}) uses {:?}", c.counts));
            }
            let shortest = bfs_min_chain(&f, &v, &w, 5).map_err(|e| format!("bfs ({a}, {b}): {e}"))?;
            worst_gadget = worst_gadget.max(c.total_steps);
            worst_bfs = worst_bfs.max(shortest.total_steps);
            pairs += 1;
        }
    }
    Ok(format!(
        "{pairs} ordered pairs over F_13; gadget <= {worst_gadget} steps, BFS shortest <= {worst_bfs}"
    ))
}

fn connect_trials<F: Field>(f: &F, n: usize, trials: usize, stream: u64) -> Result<usize, String> {
    let bound = connect_bound(n);
    let results: Vec<Result<usize, String>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(stream, t as u64);
            let (v, w) = generate::random_isometric_pair(f, &mut r, n).map_err(|e| e.to_string())?;
            let c = connect(f, &mut r, &v, &w).map_err(|e| format!("n = {n}, trial {t}: {e}"))?;
            if !same_tuple(f, &c.end, &w) {
                return Err(format!("n = {n}, trial {t}: chain misses w"));
            }
            if !c.counts.within(&bound) || c.total_steps > n * n + 5 * n - 5 {
                return Err(format!("n = {n}, trial {t}: {:?} exceeds {:?}", c.counts, bound));
            }
            Ok(c.total_steps)
        })
        .collect();
    if let Some(e) = first_error(&results) {
        return Err(e);
    }
    Ok(results.into_iter().map(|r| r.unwrap()).max().unwrap_or(0))
}

fn c3() -> Verdict {
    let (f13, f10007, q17) = (fp(13, 1), fp(10007, 0), qp(17, 3));
    let mut worst12 = 0;
    for n in 2..=12 {
        let a = connect_trials(&f13, n, 1000, 300 + n as u64)?;
        let b = connect_trials(&f10007, n, 1000, 400 + n as u64)?;
        let c = connect_trials(&q17, n, 100, 500 + n as u64)?;
        if n == 12 {
            worst12 = a.max(b).max(c);
        }
    }
    if worst12 > 199 {
        return Err(format!("n = 12 chain of {worst12} steps"));
    }
    Ok(format!("n = 2..12 over F_13, F_10007 (10^3 each) and Q_17 (10^2); n = 12 max {worst12} <= 199 steps"))
}

fn c4() -> Verdict {
    let q = qp(17, 3);
    let n = 14;
    let mut summary = Vec::new();
    for (k, limit) in [(2usize, 62usize), (6, 162)] {
        let bound = connect_partial_bound(n, k);
        if bound.total() != limit {
            return Err(format!("bound for k = {k} is {}", bound.total()));
        }
        let results: Vec<Result<usize, String>> = (0..1000)
            .into_par_iter()
            .map(|t| {
                let mut r = rng(600 + k as u64, t);
                let (v, w) = generate::random_isometric_pair(&q, &mut r, n).map_err(|e| e.to_string())?;
                let (c, end) = connect_partial(&q, &mut r, &v, &w[..k]).map_err(|e| format!("k = {k}: {e}"))?;
                if !same_tuple(&q, &end[..k], &w[..k]) {
                    return Err(format!("k = {k}, trial {t}: prefix not reached"));
                }
                if !c.counts.within(&bound) || c.total_steps > limit {
                    return Err(format!("k = {k}, trial {t}: {:?}", c.counts));
                }
                Ok(c.total_steps)
            })
            .collect();
        if let Some(e) = first_error(&results) {
            return Err(e);
        }
        let worst = results.into_iter().map(|r| r.unwrap()).max().unwrap();
        summary.push(format!("k = {k}: max {worst} <= {limit}"));
    }
    Ok(format!("n = 14, 10^3 each; {}", summary.join(", ")))
}

fn c5() -> Verdict {
    let configs = [(17u64, 2u32), (17, 3), (97, 2), (97, 3), (97, 4)];
    let mut edges = 0;
    for (p, m) in configs {
        let f = qp(p, m);
        for (ci, case) in StepCase::ALL.into_iter().enumerate() {
            let results: Vec<Result<(), String>> = (0..1000)
                .into_par_iter()
                .map(|t| {
                    let mut r = rng(700 + p * 10 + m as u64, (ci * 1000 + t) as u64);
                    let (v, w, mv) = generate::random_edge(&f, &mut r, case).map_err(|e| e.to_string())?;
                    let s = step_symbol(&f, &v, &w, &mv, m).map_err(|e| format!("p = {p}, m = {m}, {case:?}: {e}"))?;
                    let diff = cm_class(&f, &psi(&f, &w).unwrap(), m)
                        .unwrap()
                        .add(&cm_class(&f, &psi(&f, &v).unwrap(), m).unwrap().neg());
                    if symbol_class(&f, &s).unwrap() != diff {
                        return Err(format!("p = {p}, m = {m}, {case:?}, trial {t}: class mismatch"));
                    }
                    Ok(())
                })
                .collect();
            if let Some(e) = first_error(&results) {
                return Err(e);
            }
            edges += results.len();
        }
    }
    Ok(format!("{edges} edges, 8 shapes x 5 (p, m) configurations, zero mismatches"))
}

fn c6() -> Verdict {
    let q = qp(17, 3);
    let bad = (0..1000u64)
        .into_par_iter()
        .filter(|&t| {
            let mut r = rng(800, t);
            let x = generate::random_six(&q, &mut r);
            let lhs = symbol_class(&q, &pfister_symbol(&q, &x, 3).unwrap()).unwrap();
            let rhs = cm_class(&q, &psi(&q, &pfister_tuple(&q, &x).unwrap()).unwrap(), 3).unwrap();
            lhs != rhs
        })
        .count();
    if bad == 0 {
        Ok("1000 random (a..f) over Q_17, m = 3, zero failures".into())
    } else {
        Err(format!("{bad} mismatches"))
    }
}

fn check_cert(cert: &DecompositionCertificate<Padic>) -> Result<(), String> {
    let g = PadicField::new(cert.config).map_err(|e| e.to_string())?;
    verify::verify_decomposition(&g, cert).map_err(|e| e.to_string())?;
    if cert.ledger.input != cert.ledger.output {
        return Err("ledger does not balance".into());
    }
    Ok(())
}

fn c7() -> Verdict {
    let q = qp(17, 3);
    let results: Vec<Result<usize, String>> = (0..100u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(900, t);
            let (input, x) = generate::q5_instance(&q, &mut r).map_err(|e| e.to_string())?;
            let cert = decompose5(&q, &input, &x, 3).map_err(|e| format!("instance {t}: {e}"))?;
            check_cert(&cert).map_err(|e| format!("instance {t}: {e}"))?;
            if cert.symbol_count > Q5_BOUND || cert.symbols().any(|s| s.deg_log2 != 2) {
                return Err(format!("instance {t}: {} symbols", cert.symbol_count));
            }
            Ok(cert.symbol_count)
        })
        .collect();
    if let Some(e) = first_error(&results) {
        return Err(e);
    }
    let worst = results.into_iter().map(|r| r.unwrap()).max().unwrap();
    Ok(format!("100 instances over Q_17, m = 3; max {worst} <= {Q5_BOUND} symbols of degree 4, ledgers balance"))
}

fn c8() -> Verdict {
    let q = qp(17, 3);
    let results: Vec<Result<(bool, usize, usize), String>> = (0..100u64)
        .into_par_iter()
        .map(|t| {
            let case1 = t < 50;
            let mut r = rng(1000, t);
            let (input, pres) = if case1 {
                generate::q6_case1_instance(&q, &mut r)
            } else {
                generate::q6_case2_instance(&q, &mut r)
            }
            .map_err(|e| e.to_string())?;
            let cert = decompose6(&q, &input, &pres, 3).map_err(|e| format!("instance {t}: {e}"))?;
            check_cert(&cert).map_err(|e| format!("instance {t}: {e}"))?;
            let (kind, k, limit) =
                if case1 { (DecompositionKind::Q6Case1, 6, 162) } else { (DecompositionKind::Q6Case2, 2, 62) };
            let partial = &cert.stages[0].chain;
            if cert.kind != kind
                || cert.symbol_count > Q6_BOUND
                || partial.total_steps > limit
                || !partial.counts.within(&connect_partial_bound(14, k))
            {
                return Err(format!(
                    "instance {t}: {:?}, {} symbols, partial chain {:?}",
                    cert.kind, cert.symbol_count, partial.counts
                ));
            }
            if case1 {
                let g = PadicField::new(cert.config).unwrap();
                if !g.same(&g.product(&partial.end[..6]), &g.one()) {
                    return Err(format!("instance {t}: first six slots multiply to something other than 1"));
                }
            }
            Ok((case1, cert.symbol_count, partial.total_steps))
        })
        .collect();
    if let Some(e) = first_error(&results) {
        return Err(e);
    }
    let ok: Vec<_> = results.into_iter().map(|r| r.unwrap()).collect();
    let worst = |c1: bool| ok.iter().filter(|x| x.0 == c1).map(|x| (x.1, x.2)).fold((0, 0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    let (s1, p1) = worst(true);
    let (s2, p2) = worst(false);
    Ok(format!(
        "50 + 50 instances; case 1 max {s1} symbols, partial {p1} <= 162; case 2 max {s2} symbols, partial {p2} <= 62"
    ))
}

/// `(a, b)` at an odd prime from valuations and residues only.
fn hilbert_oracle(f: &PadicField, a: &Padic, b: &Padic) -> i32 {
    let p = f.config().p;
    let (alpha, beta) = (f.valuation(a), f.valuation(b));
    let legendre = |u: u64| {
        let mut acc = 1u128;
        let mut base = u as u128 % p as u128;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u128;
            }
            base = base * base % p as u128;
            e >>= 1;
        }
        if acc == 1 {
            1
        } else {
            -1
        }
    };
    let eps = if (alpha * beta).rem_euclid(2) == 1 && p % 4 == 3 { -1 } else { 1 };
    let u = f.unit_residue(a);
    let v = f.unit_residue(b);
    let lu = if beta.rem_euclid(2) == 1 { legendre(u) } else { 1 };
    let lv = if alpha.rem_euclid(2) == 1 { legendre(v) } else { 1 };
    eps * lu * lv
}

/// Clifford invariant of `⟨b⟩` from its Hasse invariant, discriminant and
/// dimension, as a class in ½ℤ/ℤ.
fn clifford_oracle(f: &PadicField, b: &[Padic]) -> BrauerClass {
    let mut s = 1;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            s *= hilbert_oracle(f, &b[i], &b[j]);
        }
    }
    let n = b.len();
    let det = f.product(b);
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    let d = f.mul(&det, &f.from_i64(sign));
    let minus_one = f.from_i64(-1);
    let correction = match n % 8 {
        1 | 2 => 1,
        3 | 4 => hilbert_oracle(f, &minus_one, &f.neg(&d)),
        5 | 6 => hilbert_oracle(f, &minus_one, &minus_one),
        _ => hilbert_oracle(f, &minus_one, &d),
    };
    BrauerClass::new(if s * correction == 1 { 0 } else { 1 }, 1)
}

fn c9() -> Verdict {
    let q = qp(17, 3);
    let results: Vec<Result<(), String>> = (0..1000u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(1100, t);
            let n = r.gen_range(1..=5);
            let b = generate::random_b_tuple(&q, &mut r, n).map_err(|e| e.to_string())?;
            let a = psi(&q, &b).unwrap();
            let cliff = clifford_class(&q, &b).unwrap();
            if cliff != clifford_oracle(&q, &b) {
                return Err(format!("tuple {t}: clifford_class disagrees with the Hasse oracle"));
            }
            if cliff != cm_class(&q, &a, 1).unwrap() {
                return Err(format!("tuple {t}: clifford_class differs from C_1(psi(b))"));
            }
            for m in 1..=3u32 {
                let top = cm_class(&q, &a, m).unwrap();
                for k in 0..m {
                    if cm_class(&q, &a, m - k).unwrap() != top.times_pow2(k) {
                        return Err(format!("tuple {t}: scaling fails for m = {m}, k = {k}"));
                    }
                }
            }
            Ok(())
        })
        .collect();
    match first_error(&results) {
        Some(e) => Err(e),
        None => Ok("1000 B-tuples; Clifford = Hasse oracle = C_1(psi(b)); scaling holds for k < m <= 3".into()),
    }
}

#[derive(Clone, Copy, Debug)]
enum Mutation {
    FullScalar,
    DashedSlots,
    FullCount,
    DashedCount,
    TotalSteps,
    DropMove,
    StartEntry,
    EndEntry,
    Checkpoint,
    SymbolEntry,
    SymbolDegree,
    TailSymbol,
    SymbolCount,
    Bound,
    LedgerInput,
    LedgerOutput,
    InputEntry,
    Split,
}

const MUTATIONS: [Mutation; 18] = [
    Mutation::FullScalar,
    Mutation::DashedSlots,
    Mutation::FullCount,
    Mutation::DashedCount,
    Mutation::TotalSteps,
    Mutation::DropMove,
    Mutation::StartEntry,
    Mutation::EndEntry,
    Mutation::Checkpoint,
    Mutation::SymbolEntry,
    Mutation::SymbolDegree,
    Mutation::TailSymbol,
    Mutation::SymbolCount,
    Mutation::Bound,
    Mutation::LedgerInput,
    Mutation::LedgerOutput,
    Mutation::InputEntry,
    Mutation::Split,
];

/// Replaces one entry of `s` so that its class changes.
fn falsify_symbol(f: &PadicField, s: &mut SymbolExpr<Padic>) -> bool {
    let g = f.element(0, f.residue_field().generator());
    let candidates = [f.element(1, 1), g.clone(), f.mul(&g, &f.element(1, 1))];
    let cls = |a: &Padic, b: &Padic| tame_symbol(f, a, b, s.deg_log2).unwrap();
    for t in &candidates {
        if !cls(&s.a, t).is_zero() {
            s.b = f.mul(&s.b, t);
            return true;
        }
        if !cls(t, &s.b).is_zero() {
            s.a = f.mul(&s.a, t);
            return true;
        }
    }
    false
}

/// Applies `kind` to `cert`; false when the certificate has no field of
/// that kind to change.
fn mutate(f: &PadicField, r: &mut ChaCha8Rng, cert: &mut DecompositionCertificate<Padic>, kind: Mutation) -> bool {
    let two = f.from_i64(2);
    let s = r.gen_range(0..cert.stages.len());
    let chain = &mut cert.stages[s].chain;
    match kind {
        Mutation::FullScalar | Mutation::DashedSlots => {
            let len = chain.start.len();
            let picks: Vec<usize> = (0..chain.moves.len())
                .filter(|&k| matches!(chain.moves[k], Move::Full { .. }) == matches!(kind, Mutation::FullScalar))
                .collect();
            let Some(&k) = picks.choose(r) else { return false };
            match &mut chain.moves[k] {
                Move::Full { c, .. } => *c = f.mul(c, &two),
                Move::Dashed { i, j } => {
                    let others: Vec<(usize, usize)> = (0..len)
                        .flat_map(|a| (a + 1..len).map(move |b| (a, b)))
                        .filter(|&(a, b)| (a, b) != (*i, *j))
                        .collect();
                    let &(a, b) = others.choose(r).unwrap();
                    (*i, *j) = (a, b);
                }
            }
        }
        Mutation::FullCount => chain.counts.full += 1,
        Mutation::DashedCount => chain.counts.dashed += 1,
        Mutation::TotalSteps => chain.total_steps += 1,
        Mutation::DropMove => {
            if chain.moves.pop().is_none() {
                return false;
            }
        }
        Mutation::StartEntry | Mutation::EndEntry | Mutation::Checkpoint => {
            let v = match kind {
                Mutation::StartEntry => &mut chain.start,
                Mutation::EndEntry => &mut chain.end,
                _ => &mut chain.checkpoints,
            };
            if v.is_empty() {
                return false;
            }
            let i = r.gen_range(0..v.len());
            v[i] = f.mul(&v[i], &two);
        }
        Mutation::SymbolEntry => {
            let syms = &mut cert.stages[s].symbols;
            let mut order: Vec<usize> = (0..syms.len()).collect();
            order.shuffle(r);
            if !order.into_iter().any(|i| falsify_symbol(f, &mut syms[i])) {
                return false;
            }
        }
        Mutation::SymbolDegree => {
            let syms = &mut cert.stages[s].symbols;
            let Some(sym) = syms.choose_mut(r) else { return false };
            sym.deg_log2 += 1;
        }
        Mutation::TailSymbol => {
            if !cert.tail.iter_mut().any(|sym| falsify_symbol(f, sym)) {
                return false;
            }
        }
        Mutation::SymbolCount => cert.symbol_count += 1,
        Mutation::Bound => cert.bound += 1,
        Mutation::LedgerInput => cert.ledger.input = cert.ledger.input.add(&BrauerClass::new(1, cert.m)),
        Mutation::LedgerOutput => cert.ledger.output = cert.ledger.output.add(&BrauerClass::new(1, cert.m)),
        Mutation::InputEntry => {
            let i = r.gen_range(0..cert.input.len());
            cert.input[i] = f.mul(&cert.input[i], &two);
        }
        Mutation::Split => {
            let stage = &mut cert.stages[0];
            let Some(pair) = stage.split else { return false };
            let pairs = stage.input.len() / 2 + 1;
            stage.split = Some((pair + r.gen_range(1..pairs)) % pairs);
        }
    }
    true
}

fn c10() -> Verdict {
    let q = qp(17, 3);
    let results: Vec<Result<Vec<String>, String>> = (0..100u64)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(1200, t);
            let cert = match t % 3 {
                0 => {
                    let (input, x) = generate::q5_instance(&q, &mut r).map_err(|e| e.to_string())?;
                    decompose5(&q, &input, &x, 3)
                }
                1 => {
                    let (input, p) = generate::q6_case1_instance(&q, &mut r).map_err(|e| e.to_string())?;
                    decompose6(&q, &input, &p, 3)
                }
                _ => {
                    let (input, p) = generate::q6_case2_instance(&q, &mut r).map_err(|e| e.to_string())?;
                    decompose6(&q, &input, &p, 3)
                }
            }
            .map_err(|e| format!("certificate {t}: {e}"))?;
            let g = PadicField::new(cert.config).unwrap();
            if let Err(e) = verify::verify_decomposition(&g, &cert) {
                return Err(format!("certificate {t}: original rejected: {e}"));
            }
            let mut escaped = Vec::new();
            let mut applied = 0;
            while applied < 10 {
                let kind = *MUTATIONS.choose(&mut r).unwrap();
                let mut bad = cert.clone();
                if !mutate(&g, &mut r, &mut bad, kind) {
                    continue;
                }
                applied += 1;
                if verify::verify_decomposition(&g, &bad).is_ok() {
                    escaped.push(format!("certificate {t}: {kind:?} accepted"));
                }
            }
            Ok(escaped)
        })
        .collect();
    if let Some(e) = first_error(&results) {
        return Err(e);
    }
    let escaped: Vec<String> = results.into_iter().flat_map(|r| r.unwrap()).collect();
    if escaped.is_empty() {
        Ok("100 certificates accepted; 1000 single-field mutations all rejected".into())
    } else {
        Err(format!("{} mutations accepted, first: {}", escaped.len(), escaped[0]))
    }
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Option<u64>, fn() -> Verdict); 10] = [
        (1, "psi o phi = id", Some(5), c1),
        (2, "swap gadget", Some(10), c2),
        (3, "connect bounds", Some(60), c3),
        (4, "partial connect bounds", Some(60), c4),
        (5, "step symbols", Some(120), c5),
        (6, "Pfister symbol identity", None, c6),
        (7, "q = 5 decompositions", Some(300), c7),
        (8, "q = 6 decompositions", Some(600), c8),
        (9, "Clifford invariant and scaling", None, c9),
        (10, "certificate mutations", None, c10),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let started = Instant::now();
        let verdict = run();
        let elapsed = started.elapsed();
        let late = limit.is_some_and(|s| elapsed > Duration::from_secs(s));
        let budget = limit.map(|s| format!(" / {s} s")).unwrap_or_default();
        let (status, detail) = match (&verdict, late) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over time budget; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {n:>2} {status} [{name}] {:.2} s{budget}: {detail}", elapsed.as_secs_f64());
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
