use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use chainlen_core::brauer::SymbolExpr;
use chainlen_core::chain::{connect, Chain};
use chainlen_core::field::{Field, FieldConfig, FieldKind, PadicField, PrimeField};
use chainlen_core::fuzz::{run_suite, Suite};
use chainlen_core::pipeline::{
    decompose5, decompose6, decompose_via_chain, with_precision_retry, DecompositionCertificate, Presentation,
};
use chainlen_core::verify::{verify_chain, verify_decomposition, VerifyFailure};
use chainlen_core::{generate, Error};

const SEED_ENV: &str = "CHAINLEN_SEED";

#[derive(Parser)]
#[command(name = "chainlen", version, about = "Chains of diagonal forms and certified symbol decompositions")]
struct Cli {
    /// Residue characteristic.
    #[arg(long, global = true, default_value_t = 17)]
    p: u64,
    /// Work with symbols of degree dividing 2^m.
    #[arg(long, global = true, default_value_t = 3)]
    m: u32,
    /// p-adic digits carried by every element.
    #[arg(long, global = true, default_value_t = FieldConfig::DEFAULT_PRECISION)]
    precision: u32,
    /// Run seed; CHAINLEN_SEED takes precedence when set.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = FieldArg::Qp)]
    field: FieldArg,
    /// Output file (stdout if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Fp,
    Qp,
}

#[derive(Subcommand)]
enum Command {
    /// Build a chain between two isometric diagonal forms.
    Connect {
        /// JSON document with entries "v" and "w" ("-" for stdin).
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Replay a chain or decomposition certificate.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Decompose a class given with a presentation.
    Decompose {
        /// JSON document with "input" and either "presentation" or "target".
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run a randomized identity suite.
    Fuzz {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Emit a random input document for connect or decompose.
    Generate {
        #[arg(long, value_enum)]
        kind: GenKind,
        /// Form dimension for `pair`.
        #[arg(long, default_value_t = 12)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Pair,
    Q5,
    Q6Case1,
    Q6Case2,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Why a run did not succeed, and its exit code.
enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::PrecisionExhausted) => 3,
            _ => 2,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            Failure::Core(e) => (e.code(), e.to_string()),
            Failure::Usage(m) => ("invalid-input", m.clone()),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

type Run<T> = Result<T, Failure>;

/// A document and the exit code to finish with.
struct Output {
    doc: Value,
    code: u8,
}

impl Output {
    fn ok(doc: Value) -> Self {
        Output { doc, code: 0 }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "E: Serialize + serde::de::DeserializeOwned")]
struct ChainDocument<E> {
    command: String,
    field: FieldKind,
    config: FieldConfig,
    chain: Chain<E>,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_json(path: &PathBuf) -> Run<Value> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| usage(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    serde_json::from_str(&text).map_err(|e| usage(format!("malformed JSON: {e}")))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Keys whose numeric values are field elements rather than metadata.
const ELEMENT_KEYS: [&str; 5] = ["a", "b", "d", "x", "y"];

/// Rewrites plain integers standing for field elements into the element
/// encoding, leaving valuation, precision and degree fields alone.
fn expand_integers<F: Field>(f: &F, v: Value, is_element: bool) -> Run<Value> {
    Ok(match v {
        Value::Number(n) if is_element => {
            let k = n.as_i64().ok_or_else(|| usage(format!("{n} is not a 64-bit integer")))?;
            to_value(&f.from_i64(k))
        }
        Value::Array(xs) => {
            Value::Array(xs.into_iter().map(|x| expand_integers(f, x, true)).collect::<Run<_>>()?)
        }
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, x)| {
                    let elem = ELEMENT_KEYS.contains(&k.as_str());
                    expand_integers(f, x, elem).map(|x| (k, x))
                })
                .collect::<Run<_>>()?,
        ),
        other => other,
    })
}

fn field_value<F: Field, T: serde::de::DeserializeOwned>(f: &F, doc: &Value, key: &str) -> Run<T> {
    let raw = doc.get(key).ok_or_else(|| usage(format!("missing \"{key}\"")))?;
    let expanded = expand_integers(f, raw.clone(), false)?;
    serde_json::from_value(expanded).map_err(|e| usage(format!("\"{key}\": {e}")))
}

fn elements<F: Field>(f: &F, doc: &Value, key: &str) -> Run<Vec<F::Elem>> {
    let xs: Vec<F::Elem> = field_value(f, doc, key)?;
    for x in &xs {
        f.check_element(x)?;
    }
    Ok(xs)
}

fn cmd_connect<F: Field>(f: &F, doc: &Value) -> Run<Output> {
    let v = elements(f, doc, "v")?;
    let w = elements(f, doc, "w")?;
    let (field, chain) = with_precision_retry(f, |g| {
        let v: Vec<_> = v.iter().map(|x| g.lift(x)).collect();
        let w: Vec<_> = w.iter().map(|x| g.lift(x)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(g.config().seed);
        connect(g, &mut rng, &v, &w).map(|c| (g.clone(), c))
    })?;
    let out = ChainDocument { command: "connect".into(), field: field.kind(), config: *field.config(), chain };
    Ok(Output::ok(to_value(&out)))
}

fn cmd_decompose<F: Field>(f: &F, doc: &Value) -> Run<Output> {
    let input = elements(f, doc, "input")?;
    let m = f.config().m;
    let cert: DecompositionCertificate<F::Elem> = if doc.get("presentation").is_some() {
        let pres: Presentation<F::Elem> = field_value(f, doc, "presentation")?;
        match (&pres, input.len()) {
            (Presentation::Pfister { x }, 10) => decompose5(f, &input, x, m)?,
            (Presentation::Pfister { .. }, n) => {
                return Err(usage(format!("a Pfister presentation needs 10 entries, got {n}")))
            }
            (_, 12) => decompose6(f, &input, &pres, m)?,
            (_, n) => return Err(usage(format!("this presentation needs 12 entries, got {n}"))),
        }
    } else if doc.get("target").is_some() {
        let target = elements(f, doc, "target")?;
        let tail: Vec<SymbolExpr<F::Elem>> =
            if doc.get("tail").is_some() { field_value(f, doc, "tail")? } else { Vec::new() };
        decompose_via_chain(f, &input, &target, &tail, m)?
    } else {
        return Err(usage("expected \"presentation\" or \"target\""));
    };
    Ok(Output::ok(to_value(&cert)))
}

fn verdict(kind: &str, result: Result<(), VerifyFailure>) -> Output {
    match result {
        Ok(()) => Output::ok(json!({ "command": "verify", "kind": kind, "pass": true })),
        Err(failure) => Output {
            doc: json!({ "command": "verify", "kind": kind, "pass": false, "failure": failure }),
            code: 1,
        },
    }
}

fn parse_doc<T: serde::de::DeserializeOwned>(doc: Value) -> Run<T> {
    serde_json::from_value(doc).map_err(|e| usage(format!("malformed certificate: {e}")))
}

fn verify_in<F: Field>(doc: Value, fallback: FieldConfig) -> Run<Output> {
    if doc.get("stages").is_some() {
        let cert: DecompositionCertificate<F::Elem> = parse_doc(doc)?;
        let f = F::from_config(cert.config)?;
        return Ok(verdict("decomposition", verify_decomposition(&f, &cert)));
    }
    let (config, chain): (FieldConfig, Chain<F::Elem>) = if doc.get("chain").is_some() {
        let d: ChainDocument<F::Elem> = parse_doc(doc)?;
        (d.config, d.chain)
    } else {
        (fallback, parse_doc(doc)?)
    };
    let f = F::from_config(config)?;
    Ok(verdict("chain", verify_chain(&f, &chain).map(|_| ())))
}

fn cmd_verify(doc: Value, cli_kind: FieldKind, fallback: FieldConfig) -> Run<Output> {
    let kind = match doc.get("field") {
        Some(k) => serde_json::from_value(k.clone()).map_err(|e| usage(format!("\"field\": {e}")))?,
        None => cli_kind,
    };
    match kind {
        FieldKind::Fp => verify_in::<PrimeField>(doc, fallback),
        FieldKind::Qp => verify_in::<PadicField>(doc, fallback),
    }
}

fn cmd_generate<F: Field>(f: &F, kind: GenKind, n: usize) -> Run<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(f.config().seed);
    let mut doc = json!({ "command": "generate", "field": f.kind(), "config": f.config() });
    match kind {
        GenKind::Pair => {
            let (v, w) = generate::random_isometric_pair(f, &mut rng, n)?;
            doc["v"] = to_value(&v);
            doc["w"] = to_value(&w);
        }
        GenKind::Q5 => {
            let (input, x) = generate::q5_instance(f, &mut rng)?;
            doc["input"] = to_value(&input);
            doc["presentation"] = to_value(&Presentation::Pfister { x });
        }
        GenKind::Q6Case1 | GenKind::Q6Case2 => {
            let (input, pres) = if matches!(kind, GenKind::Q6Case1) {
                generate::q6_case1_instance(f, &mut rng)?
            } else {
                generate::q6_case2_instance(f, &mut rng)?
            };
            doc["input"] = to_value(&input);
            doc["presentation"] = to_value(&pres);
        }
    }
    Ok(Output::ok(doc))
}

fn dispatch<F: Field>(f: &F, command: &Command) -> Run<Output> {
    match command {
        Command::Connect { input } => cmd_connect(f, &read_json(input)?),
        Command::Decompose { input } => cmd_decompose(f, &read_json(input)?),
        Command::Fuzz { suite, trials } => {
            let report = run_suite(f, *suite, *trials)?;
            let code = if report.all_passed() { 0 } else { 1 };
            Ok(Output { doc: to_value(&report), code })
        }
        Command::Generate { kind, n } => cmd_generate(f, *kind, *n),
        Command::Verify { .. } => unreachable!("verify builds its own field"),
    }
}

fn run(cli: &Cli) -> Run<Output> {
    let seed = match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| usage(format!("{SEED_ENV}={s:?} is not a u64")))?,
        Err(_) => cli.seed,
    };
    let config = FieldConfig::new(cli.p, cli.m, cli.precision, seed);
    let kind = match cli.field {
        FieldArg::Fp => FieldKind::Fp,
        FieldArg::Qp => FieldKind::Qp,
    };
    if let Command::Verify { input } = &cli.command {
        return cmd_verify(read_json(input)?, kind, config);
    }
    match kind {
        FieldKind::Fp => dispatch(&PrimeField::new(config)?, &cli.command),
        FieldKind::Qp => dispatch(&PadicField::new(config)?, &cli.command),
    }
}

fn emit(out: &Option<PathBuf>, doc: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("serializable");
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (doc, code) = match run(&cli) {
        Ok(o) => (o.doc, o.code),
        Err(f) => (f.to_json(), f.exit_code()),
    };
    if let Err(e) = emit(&cli.out, &doc) {
        eprintln!("chainlen: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
