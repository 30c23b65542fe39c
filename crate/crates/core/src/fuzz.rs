//! Randomized identity suites with deterministic, parallel trials.
//!
//! Trial `i` draws its own seed from stream `i` of a ChaCha generator keyed
//! by the run seed, so results do not depend on the thread count and a
//! failing trial can be replayed alone with [`run_trial`].

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brauer::{cm_class, is_b_tuple, pfister_symbol, pfister_tuple, phi, psi, step_symbol, symbol_class, StepCase};
use crate::chain::{connect, connect_bound};
use crate::error::{Error, Result};
use crate::field::{ElementKind, Field, FieldConfig, FieldKind};
use crate::pipeline::{decompose5, decompose6, DecompositionKind, Presentation, Q5_BOUND, Q6_BOUND};
use crate::{generate, verify};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    PhiPsi,
    StepSymbol,
    Pflem,
    ChainBounds,
    Q5,
    Q6,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::PhiPsi, Suite::StepSymbol, Suite::Pflem, Suite::ChainBounds, Suite::Q5, Suite::Q6];

    pub fn name(self) -> &'static str {
        match self {
            Suite::PhiPsi => "phi-psi",
            Suite::StepSymbol => "step-symbol",
            Suite::Pflem => "pflem",
            Suite::ChainBounds => "chain-bounds",
            Suite::Q5 => "q5",
            Suite::Q6 => "q6",
        }
    }

    fn needs_symbols(self) -> bool {
        !matches!(self, Suite::PhiPsi | Suite::ChainBounds)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub index: usize,
    pub seed: u64,
    pub pass: bool,
    /// Size of the object checked: tuple length, step or symbol count.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub elapsed_us: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<usize>,
    pub elapsed_us: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub suite: Suite,
    pub field: FieldKind,
    pub config: FieldConfig,
    pub results: Vec<TrialResult>,
    pub aggregate: Aggregate,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.aggregate.failed == 0
    }

    /// The report with every timing set to zero, for comparing runs.
    pub fn without_timings(&self) -> RunReport {
        let mut r = self.clone();
        r.aggregate.elapsed_us = 0;
        for t in &mut r.results {
            t.elapsed_us = 0;
        }
        r
    }
}

/// Seed of trial `index` under the run seed.
pub fn trial_seed(run_seed: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    rng.set_stream(index as u64);
    rng.next_u64()
}

/// Outcome of one check: the size it looked at and its bound, if any.
struct Checked {
    count: Option<usize>,
    bound: Option<usize>,
}

type TrialOutcome = std::result::Result<Checked, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn phi_psi_trial<F: Field>(f: &F, rng: &mut ChaCha8Rng) -> TrialOutcome {
    let n = rng.gen_range(1..=7);
    let a: Vec<_> = (0..2 * n).map(|_| f.random_element(rng, ElementKind::Any)).collect();
    let b = phi(f, &a).map_err(err)?;
    ensure(is_b_tuple(f, &b).map_err(err)?, || "phi(a) is not a B-tuple".into())?;
    let back = psi(f, &b).map_err(err)?;
    ensure(back.len() == a.len() && back.iter().zip(&a).all(|(x, y)| f.same(x, y)), || {
        format!("psi(phi(a)) differs from a for n = {n}")
    })?;
    Ok(Checked { count: Some(n), bound: None })
}

fn step_symbol_trial<F: Field>(f: &F, rng: &mut ChaCha8Rng, index: usize) -> TrialOutcome {
    let m = f.config().m;
    let case = StepCase::ALL[index % StepCase::ALL.len()];
    let (v, w, mv) = generate::random_edge(f, rng, case).map_err(err)?;
    let s = step_symbol(f, &v, &w, &mv, m).map_err(err)?;
    let before = cm_class(f, &psi(f, &v).map_err(err)?, m).map_err(err)?;
    let after = cm_class(f, &psi(f, &w).map_err(err)?, m).map_err(err)?;
    let got = symbol_class(f, &s).map_err(err)?;
    ensure(got == after.add(&before.neg()), || format!("{case:?} edge: symbol class disagrees"))?;
    Ok(Checked { count: Some(v.len()), bound: None })
}

fn pfister_symbol_trial<F: Field>(f: &F, rng: &mut ChaCha8Rng) -> TrialOutcome {
    let m = f.config().m;
    let x = generate::random_six(f, rng);
    let t = pfister_tuple(f, &x).map_err(err)?;
    let lhs = symbol_class(f, &pfister_symbol(f, &x, m).map_err(err)?).map_err(err)?;
    let rhs = cm_class(f, &psi(f, &t).map_err(err)?, m).map_err(err)?;
    ensure(lhs == rhs, || "symbol class differs from C_m(psi(pfister_tuple))".into())?;
    Ok(Checked { count: None, bound: None })
}

fn chain_bounds_trial<F: Field>(f: &F, rng: &mut ChaCha8Rng, index: usize) -> TrialOutcome {
    let n = 2 + index % 11;
    let (v, w) = generate::random_isometric_pair(f, rng, n).map_err(err)?;
    let chain = connect(f, rng, &v, &w).map_err(err)?;
    let walk = verify::verify_chain(f, &chain).map_err(|e| e.to_string())?;
    let end = walk.last().expect("walk includes the start");
    ensure(end.iter().zip(&w).all(|(x, y)| f.same(x, y)), || "chain does not end at w".into())?;
    let bound = connect_bound(n);
    ensure(chain.counts.within(&bound), || {
        format!("n = {n}: counts {:?} exceed {:?}", chain.counts, bound)
    })?;
    Ok(Checked { count: Some(chain.total_steps), bound: Some(bound.total()) })
}

fn verify_cert<F: Field>(cert: &crate::pipeline::DecompositionCertificate<F::Elem>) -> std::result::Result<(), String> {
    let g = F::from_config(cert.config).map_err(err)?;
    verify::verify_decomposition(&g, cert).map_err(|e| e.to_string())
}

fn q5_trial<F: Field>(f: &F, rng: &mut ChaCha8Rng) -> TrialOutcome {
    let (input, x) = generate::q5_instance(f, rng).map_err(err)?;
    let cert = decompose5(f, &input, &x, f.config().m).map_err(err)?;
    verify_cert::<F>(&cert)?;
    ensure(cert.symbol_count <= Q5_BOUND, || format!("{} symbols", cert.symbol_count))?;
    Ok(Checked { count: Some(cert.symbol_count), bound: Some(Q5_BOUND) })
}

fn q6_trial<F: Field>(f: &F, rng: &mut ChaCha8Rng, index: usize) -> TrialOutcome {
    let (input, pres) = if index.is_multiple_of(2) {
        generate::q6_case1_instance(f, rng)
    } else {
        generate::q6_case2_instance(f, rng)
    }
    .map_err(err)?;
    let cert = decompose6(f, &input, &pres, f.config().m).map_err(err)?;
    verify_cert::<F>(&cert)?;
    ensure(cert.symbol_count <= Q6_BOUND, || format!("{} symbols", cert.symbol_count))?;
    if cert.kind == DecompositionKind::Q6Case1 {
        let end = &cert.stages[0].chain.end;
        let g = F::from_config(cert.config).map_err(err)?;
        ensure(g.same(&g.product(&end[..6]), &g.one()), || "first six slots do not multiply to 1".into())?;
    }
    debug_assert!(matches!(
        (&pres, cert.kind),
        (Presentation::Rost { .. }, DecompositionKind::Q6Case1)
            | (Presentation::HyperbolicPlane { .. }, DecompositionKind::Q6Case2)
    ));
    Ok(Checked { count: Some(cert.symbol_count), bound: Some(Q6_BOUND) })
}

/// Runs trial `index` of `suite` from its own seed.
pub fn run_trial<F: Field>(field: &F, suite: Suite, index: usize, seed: u64) -> TrialResult {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = match suite {
        Suite::PhiPsi => phi_psi_trial(field, &mut rng),
        Suite::StepSymbol => step_symbol_trial(field, &mut rng, index),
        Suite::Pflem => pfister_symbol_trial(field, &mut rng),
        Suite::ChainBounds => chain_bounds_trial(field, &mut rng, index),
        Suite::Q5 => q5_trial(field, &mut rng),
        Suite::Q6 => q6_trial(field, &mut rng, index),
    };
    let elapsed_us = started.elapsed().as_micros() as u64;
    match outcome {
        Ok(c) => TrialResult { index, seed, pass: true, count: c.count, bound: c.bound, detail: None, elapsed_us },
        Err(detail) => {
            TrialResult { index, seed, pass: false, count: None, bound: None, detail: Some(detail), elapsed_us }
        }
    }
}

/// Runs `trials` trials of `suite` in parallel; the report is ordered by
/// trial index.
pub fn run_suite<F: Field>(field: &F, suite: Suite, trials: usize) -> Result<RunReport> {
    let config = *field.config();
    if suite.needs_symbols() && config.m == 0 {
        return Err(Error::InvalidConfig(format!("suite {suite} needs m >= 1")));
    }
    let started = Instant::now();
    let results: Vec<TrialResult> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(field, suite, i, trial_seed(config.seed, i)))
        .collect();
    let passed = results.iter().filter(|r| r.pass).count();
    let aggregate = Aggregate {
        trials,
        passed,
        failed: trials - passed,
        max_count: results.iter().filter_map(|r| r.count).max(),
        first_failure: results.iter().find(|r| !r.pass).map(|r| r.index),
        elapsed_us: started.elapsed().as_micros() as u64,
    };
    Ok(RunReport { command: "fuzz".into(), suite, field: field.kind(), config, results, aggregate })
}
