//! `cgva`: batch front end for the algebra engine.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use cgva_core::bridge::Bridge;
use cgva_core::cg::{self, cg_identity_suite, CGAlgebra};
use cgva_core::lie::{Builtin, FormSpec, LieAlgebra};
use cgva_core::report::SuiteReport;
use cgva_core::vertex::suites::{axiom_suite, comp_lemma_suite, AxiomOptions};
use cgva_core::vertex::{format_state, parse_state, AffineVertexAlgebra};
use cgva_core::{Error, Field};

/// Above this `dim g`, `build-cg` only computes ranks.
const FULL_BUILD_MAX_DIM: usize = 64;

const PRNG: &str = "ChaCha8";

#[derive(Parser)]
#[command(name = "cgva", version, about = "Exact checks for A(g, κ) and the affine vertex algebra")]
struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "CGVA_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["algebra", "file"])))]
struct AlgebraArgs {
    /// Builtin algebra: sl<n>, so<n> or sp<2n>.
    #[arg(long)]
    algebra: Option<String>,
    /// Algebra in the JSON file format.
    #[arg(long)]
    file: Option<PathBuf>,
    /// `q` or `fp:<odd prime>`.
    #[arg(long, default_value = "q")]
    field: String,
    /// killing, dual-coxeter or killing-scaled:<p/q>; overrides the file's form.
    #[arg(long)]
    form: Option<String>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    Axioms,
    CompLemmas,
    CgIdentities,
    MainTheorem,
    Conformal,
    IdealClosure,
    All,
}

impl Which {
    fn name(self) -> &'static str {
        match self {
            Which::Axioms => "axioms",
            Which::CompLemmas => "comp-lemmas",
            Which::CgIdentities => "cg-identities",
            Which::MainTheorem => "main-theorem",
            Which::Conformal => "conformal",
            Which::IdealClosure => "ideal-closure",
            Which::All => "all",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the Lie algebra and form axioms.
    Validate(AlgebraArgs),
    /// Build A(g, κ) and export its product table and form.
    BuildCg(AlgebraArgs),
    /// Run verification suites.
    Verify {
        #[arg(value_enum)]
        which: Which,
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Largest state degree for the axioms; intermediate-degree cap for
        /// ideal closure.
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
    /// Evaluate a mode expression such as `e(1) f(-1) |0>`.
    Eval {
        expression: String,
        #[command(flatten)]
        alg: AlgebraArgs,
    },
}

/// Exit 1: a check failed. Exit 2: bad input.
enum Fail {
    Check(String),
    Input(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidAlgebra(_) | Error::WellDefinedness(_) | Error::NontrivialCenter(_) => {
                Fail::Check(e.to_string())
            }
            _ => Fail::Input(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Fail>;

struct Loaded {
    g: Arc<LieAlgebra>,
    form: String,
}

fn load(args: &AlgebraArgs) -> Res<Loaded> {
    let field: Field = args.field.parse()?;
    let form: Option<FormSpec> = args.form.as_deref().map(str::parse).transpose()?;
    let g = match (&args.algebra, &args.file) {
        (Some(name), None) => {
            let b: Builtin = name.parse()?;
            LieAlgebra::builtin_unchecked(b, field, form.unwrap_or(FormSpec::DualCoxeter))?
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Fail::Input(format!("cannot read {}: {e}", path.display())))?;
            let g = LieAlgebra::from_json_unchecked(&text, field)?;
            match form {
                Some(f) => LieAlgebra::from_structure(
                    g.name().to_string(),
                    field,
                    g.labels().to_vec(),
                    g.structure().clone(),
                    f,
                )?,
                None => g,
            }
        }
        _ => return Err(Fail::Input("exactly one of --algebra or --file is required".into())),
    };
    let form = g.form_spec().describe();
    Ok(Loaded { g: Arc::new(g), form })
}

/// SHA-256 of a canonical rendering of the structure constants and form.
fn algebra_hash(g: &LieAlgebra) -> String {
    let mut h = Sha256::new();
    h.update(format!("{}\n{}\n", g.name(), g.field()));
    for l in g.labels() {
        h.update(format!("{l}\n"));
    }
    for ((i, j), v) in g.structure() {
        h.update(format!("[{i},{j}]"));
        for (k, c) in &v.0 {
            h.update(format!(" {k}:{c}"));
        }
        h.update("\n");
    }
    let d = g.dim();
    for i in 0..d {
        for j in 0..d {
            let k = g.kappa(i, j);
            if !k.is_zero() {
                h.update(format!("<{i},{j}>{k}\n"));
            }
        }
    }
    hex::encode(h.finalize())
}

#[derive(Serialize)]
struct Envelope {
    tool: &'static str,
    version: &'static str,
    command: String,
    algebra: String,
    algebra_hash: String,
    dim: usize,
    field: String,
    form: String,
    prng: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_degree: Option<u32>,
    passed: bool,
    result: Value,
}

impl Envelope {
    fn new(command: &str, l: &Loaded, passed: bool, result: Value) -> Self {
        Envelope {
            tool: "cgva",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            algebra: l.g.name().to_string(),
            algebra_hash: algebra_hash(&l.g),
            dim: l.g.dim(),
            field: l.g.field().to_string(),
            form: l.form.clone(),
            prng: PRNG,
            seed: None,
            samples: None,
            max_degree: None,
            passed,
            result,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

/// Writes the report and prints either it or the text lines.
fn emit(args: &AlgebraArgs, env: &Envelope, text: &[String]) -> Res<()> {
    let json = serde_json::to_string_pretty(env).expect("report serializes") + "\n";
    if let Some(path) = &args.out {
        std::fs::write(path, &json)
            .map_err(|e| Fail::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    match args.format {
        Format::Json => print!("{json}"),
        Format::Text => {
            for line in text {
                println!("{line}");
            }
        }
    }
    Ok(())
}

fn suite_lines(r: &SuiteReport) -> Vec<String> {
    r.checks
        .iter()
        .map(|c| match &c.counterexample {
            None => format!("PASS {} ({} cases)", c.name, c.cases),
            Some(ce) => format!("FAIL {}: {ce}", c.name),
        })
        .collect()
}

fn cmd_validate(args: &AlgebraArgs) -> Res<bool> {
    let l = load(args)?;
    let r = l.g.validate();
    let mut text = vec![format!("{}", l.g)];
    let mark = |ok: bool| if ok { "ok" } else { "FAILED" };
    text.push(format!("jacobi: {}", mark(r.jacobi_ok)));
    text.push(format!("form symmetric: {}", mark(r.symmetric_ok)));
    text.push(format!("form invariant: {}", mark(r.invariance_ok)));
    text.push(format!(
        "form non-degenerate: {} (rank {})",
        mark(r.nondegenerate_ok),
        r.form_rank
    ));
    text.push(format!("center dimension: {}", r.center_dim));
    if let Some(msg) = r.first_failure() {
        text.push(format!("first failure: {msg}"));
    }
    if r.admissible {
        text.push("main-theorem: admissible".into());
    } else if r.axioms_ok() {
        text.push("main-theorem: inadmissible (center ≠ 0)".into());
    } else {
        text.push("main-theorem: inadmissible (axioms fail)".into());
    }
    let passed = r.axioms_ok();
    emit(args, &Envelope::new("validate", &l, passed, to_value(&r)), &text)?;
    Ok(passed)
}

fn require_valid(g: &LieAlgebra) -> Res<()> {
    match g.validate().first_failure() {
        Some(msg) => Err(Fail::Check(format!("invalid Lie algebra: {msg}"))),
        None => Ok(()),
    }
}

fn show_vec(v: &[cgva_core::Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn cmd_build_cg(args: &AlgebraArgs) -> Res<bool> {
    let l = load(args)?;
    require_valid(&l.g)?;
    if l.g.dim() > FULL_BUILD_MAX_DIM {
        let r = cg::s_rank(&l.g);
        let unital = cg::identity_in_image(&l.g);
        let text = vec![
            format!("dim S²g = {}, dim ker S = {}", r.dim_s2, r.dim_ker),
            format!(
                "dim A = {}, unital: {} (rank only; Id {} im S)",
                r.dim_a,
                if unital { "yes" } else { "no" },
                if unital { "∈" } else { "∉" }
            ),
        ];
        let result = json!({
            "mode": "rank-only",
            "dim_s2": r.dim_s2,
            "dim_ker_s": r.dim_ker,
            "dim_a": r.dim_a,
            "unital": unital,
        });
        emit(args, &Envelope::new("build-cg", &l, true, result), &text)?;
        return Ok(true);
    }
    let g = l.g.clone();
    let a = CGAlgebra::build(g)?;
    let unit = a.check_unital()?;
    let mut text = vec![
        format!("dim S²g = {}, dim ker S = {}", a.dim_s2(), a.ker_s().dim()),
        format!(
            "dim A = {}, unital: {}",
            a.dim(),
            if unit.is_some() { "yes" } else { "no" }
        ),
    ];
    if let Some(u) = &unit {
        text.push(format!("unit = {}", show_vec(u)));
    }
    let result = json!({
        "mode": "full",
        "dim_s2": a.dim_s2(),
        "dim_ker_s": a.ker_s().dim(),
        "dim_a": a.dim(),
        "unital": unit.is_some(),
        "unit": unit.as_ref().map(|u| u.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
        "tables": a.export_tables(),
    });
    emit(args, &Envelope::new("build-cg", &l, true, result), &text)?;
    Ok(true)
}

/// One suite: its JSON, pass flag and text lines.
fn run_one(which: Which, g: &Arc<LieAlgebra>, seed: u64, samples: usize, max_degree: u32) -> Res<(Value, bool, Vec<String>)> {
    let bridge = || -> Res<Bridge> {
        let r = g.validate();
        if !r.admissible {
            return Err(Fail::Check(format!(
                "main-theorem: inadmissible ({})",
                if r.center_dim > 0 { "center ≠ 0" } else { "axioms fail" }
            )));
        }
        Ok(Bridge::new(g.clone())?)
    };
    Ok(match which {
        Which::Axioms => {
            let va = AffineVertexAlgebra::new(g.clone());
            let r = axiom_suite(&va, &AxiomOptions::new(max_degree, samples, seed));
            (to_value(&r), r.passed(), suite_lines(&r))
        }
        Which::CompLemmas => {
            let va = AffineVertexAlgebra::new(g.clone());
            let r = comp_lemma_suite(&va);
            (to_value(&r), r.passed(), suite_lines(&r))
        }
        Which::CgIdentities => {
            let a = CGAlgebra::build(g.clone())?;
            let r = cg_identity_suite(&a, samples, seed);
            (to_value(&r), r.passed(), suite_lines(&r))
        }
        Which::MainTheorem => {
            let r = bridge()?.verify_main_theorem()?;
            let (s2, ks, da, kt) = r.dims;
            let mut text = vec![
                format!("dims: S²g {s2}, ker S {ks}, A {da}, ker T {kt}"),
                format!("lambda = {}", r.form_lambda.as_deref().unwrap_or("undetermined")),
            ];
            for c in &r.checks {
                text.push(match &c.counterexample {
                    None => format!("PASS {} ({} cases)", c.name, c.cases),
                    Some(ce) => format!("FAIL {}: {ce}", c.name),
                });
            }
            (to_value(&r), r.passed(), text)
        }
        Which::Conformal => {
            let r = bridge()?.conformal_checks()?;
            let mut text = vec![
                format!("central_charge = {}", r.central_charge.as_deref().unwrap_or("undetermined")),
                format!(
                    "normalization = {}",
                    r.normalization.map_or("none".to_string(), |f| f.to_string())
                ),
            ];
            for c in &r.checks {
                text.push(match &c.counterexample {
                    None => format!("PASS {}", c.name),
                    Some(ce) => format!("FAIL {}: {ce}", c.name),
                });
            }
            (to_value(&r), r.passed(), text)
        }
        Which::IdealClosure => {
            let r = bridge()?.ideal_closure_check(max_degree);
            (to_value(&r), r.passed(), suite_lines(&r))
        }
        Which::All => unreachable!("expanded by the caller"),
    })
}

fn cmd_verify(args: &AlgebraArgs, which: Which, seed: u64, samples: usize, max_degree: u32) -> Res<bool> {
    if max_degree < 2 {
        return Err(Fail::Input("--max-degree must be at least 2".into()));
    }
    let l = load(args)?;
    require_valid(&l.g)?;
    let g = l.g.clone();
    let list = match which {
        Which::All => vec![
            Which::Axioms,
            Which::CompLemmas,
            Which::CgIdentities,
            Which::MainTheorem,
            Which::Conformal,
            Which::IdealClosure,
        ],
        w => vec![w],
    };
    let mut results = serde_json::Map::new();
    let mut text = Vec::new();
    let mut passed = true;
    for w in list {
        let (v, ok, lines) = run_one(w, &g, seed, samples, max_degree)?;
        passed &= ok;
        text.push(format!("== {} : {}", w.name(), if ok { "pass" } else { "FAIL" }));
        text.extend(lines);
        results.insert(w.name().to_string(), v);
    }
    let result = if results.len() == 1 {
        results.into_iter().next().map(|(_, v)| v).expect("one entry")
    } else {
        Value::Object(results)
    };
    let mut env = Envelope::new(&format!("verify {}", which.name()), &l, passed, result);
    env.seed = Some(seed);
    env.samples = Some(samples);
    env.max_degree = Some(max_degree);
    emit(args, &env, &text)?;
    Ok(passed)
}

fn cmd_eval(args: &AlgebraArgs, expression: &str) -> Res<bool> {
    let l = load(args)?;
    let va = AffineVertexAlgebra::new(l.g.clone());
    let s = parse_state(&va, expression)?;
    let out = format_state(&va, &s);
    let env = Envelope::new("eval", &l, true, json!({ "input": expression, "state": out }));
    emit(args, &env, std::slice::from_ref(&out))?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let res = match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::BuildCg(a) => cmd_build_cg(a),
        Command::Verify {
            which,
            alg,
            seed,
            samples,
            max_degree,
        } => cmd_verify(alg, *which, *seed, *samples, *max_degree),
        Command::Eval { expression, alg } => cmd_eval(alg, expression),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Fail::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
