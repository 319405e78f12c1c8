//! `conslaw`: conservation laws of polynomial ODE models from the command line.
//!
//! Every command prints one JSON report on stdout. Exit codes: 0 success,
//! 1 internal error (including a law that fails verification), 2 input
//! error, 3 budget exhaustion (the partial report is still printed).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use conslaw::algebra::poly::mono_text;
use conslaw::algebra::rational::fmt_q;
use conslaw::algebra::{Poly, RatFun, TermOrder, Q};
use conslaw::cgs::{cgs, CgsOptions};
use conslaw::groebner::DegreeConvention;
use conslaw::linear_laws::{laws_as_polys, linear_basis, semipositive_basis, stoich_rank};
use conslaw::model_io::{crn_of, parse_model_named, parse_poly, positivity_check, truncate, CrnForm, OdeModel};
use conslaw::monomial_laws::{monomial_basis, verify_monomial};
use conslaw::parametric::decide::budget_from_env;
use conslaw::parametric::{is_complete, is_independent, to_smtlib, Answer, CheckReport, Constraint};
use conslaw::syzygy_laws::{
    conservation_laws, derivative_along, filter_generated, LawError, LawExpr, LawKind, LawOptions, Mode, Source,
};

const SCHEMA: u64 = 1;

#[derive(Parser)]
#[command(name = "conslaw", version, about = "Conservation laws of parametric polynomial ODE systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reaction-network form: stoichiometric matrix, rate monomials and the positivity check.
    Convert {
        #[command(flatten)]
        input: Input,
        /// Add wall-clock timings in milliseconds to the report
        #[arg(long)]
        timing: bool,
    },
    /// Linear, monomial or polynomial conservation laws.
    Laws(LawsArgs),
    /// Completeness or independence of a set of conservation laws.
    Check(CheckArgs),
    /// Comprehensive Gröbner system of the right-hand sides.
    Cgs {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = conslaw::cgs::DEFAULT_MAX_BRANCHES)]
        max_branches: usize,
        /// Add wall-clock timings in milliseconds to the report
        #[arg(long)]
        timing: bool,
    },
}

#[derive(clap::Args)]
struct Input {
    /// Model file, or `@name` for a bundled model.
    file: String,
    /// Use the dominant-term truncation of the model.
    #[arg(long)]
    truncated: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Linear,
    Monomial,
    Polynomial,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Generic,
    All,
    Unconditional,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Module,
    Vectorspace,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Product,
    Multiplier,
}

#[derive(clap::Args)]
struct LawsArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Law degree bound (polynomial laws only, default 2).
    #[arg(long)]
    degree: Option<i64>,
    #[arg(long, value_enum, default_value = "generic")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "vectorspace")]
    source: SourceArg,
    #[arg(long, value_enum, default_value = "product")]
    degree_convention: ConventionArg,
    /// Use the unreduced converted syzygies instead of the reduced module basis.
    #[arg(long)]
    unreduced: bool,
    /// Keep branches that are inconsistent with positive parameters.
    #[arg(long)]
    all_signs: bool,
    /// Split the polynomial laws of each branch into generators and generated laws.
    #[arg(long)]
    classify: bool,
    #[arg(long, default_value_t = conslaw::cgs::DEFAULT_MAX_BRANCHES)]
    max_branches: usize,
    /// Worker threads for branch-level parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    /// Add wall-clock timings in milliseconds to the report
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Complete,
    Independent,
}

#[derive(clap::Args)]
struct CheckArgs {
    #[command(flatten)]
    input: Input,
    #[arg(value_enum)]
    property: Property,
    /// Comma-separated laws, e.g. "x1 + x2, x2 + x3".
    #[arg(long, conflicts_with = "laws_file", required_unless_present = "laws_file")]
    laws: Option<String>,
    /// File with one law per line (or comma-separated).
    #[arg(long)]
    laws_file: Option<PathBuf>,
    /// Witness-search budget (overrides CONSLAW_BUDGET).
    #[arg(long)]
    budget: Option<usize>,
    /// Directory for SMT-LIB exports of undecided formulas.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Add wall-clock timings in milliseconds to the report
    #[arg(long)]
    timing: bool,
}

/// A failed command with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input_error(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: e.into() }
}

fn internal_error(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 1, error: e.into() }
}

/// Report together with the exit code it should be printed under.
struct Outcome {
    report: Value,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            println!("{}", serde_json::to_string_pretty(&out.report).expect("reports serialize"));
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Result<Outcome, Failure> {
    let start = Instant::now();
    let (mut report, code, timing) = match cmd {
        Command::Convert { input, timing } => (cmd_convert(&input)?, 0, timing),
        Command::Laws(a) => {
            let timing = a.timing;
            let (r, c) = cmd_laws(&a)?;
            (r, c, timing)
        }
        Command::Check(a) => (cmd_check(&a)?, 0, a.timing),
        Command::Cgs { input, max_branches, timing } => {
            let (r, c) = cmd_cgs(&input, max_branches)?;
            (r, c, timing)
        }
    };
    report["schema"] = json!(SCHEMA);
    if timing {
        report["timing_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    Ok(Outcome { report, code })
}

/// Reads the model named on the command line, truncating it on request.
fn load(input: &Input) -> Result<OdeModel, Failure> {
    let m = if let Some(name) = input.file.strip_prefix('@') {
        conslaw::models::bundled(name).ok_or_else(|| input_error(anyhow!("no bundled model `{name}`")))?
    } else {
        let path = Path::new(&input.file);
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(input_error)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
        parse_model_named(&text, name).with_context(|| format!("parsing {}", path.display())).map_err(input_error)?
    };
    Ok(if input.truncated { truncate(&m).as_model() } else { m })
}

fn model_json(m: &OdeModel, input: &Input) -> Value {
    json!({
        "name": m.name,
        "n": m.n(),
        "r": m.r(),
        "params": m.symbols.params(),
        "vars": m.symbols.vars(),
        "truncated": input.truncated,
    })
}

/// Canonical text plus the structured term list, terms in degrevlex-descending order.
fn poly_json(p: &Poly<Q>, names: &[String]) -> Value {
    let terms: Vec<Value> = p
        .sorted_terms(&TermOrder::DegRevLex)
        .into_iter()
        .map(|(m, c)| json!({ "coeff": fmt_q(c), "exponents": m.0 }))
        .collect();
    json!({ "text": p.to_text(names), "terms": terms })
}

fn condition_text(c: &Constraint, names: &[String]) -> String {
    if c.is_truth() {
        "true".to_string()
    } else {
        c.to_text(names)
    }
}

fn point_json(point: &[Q], names: &[String]) -> Value {
    let map: serde_json::Map<String, Value> =
        names.iter().zip(point).map(|(n, v)| (n.clone(), json!(fmt_q(v)))).collect();
    Value::Object(map)
}

fn split_json(m: &OdeModel, values: &Option<Vec<Q>>) -> Value {
    match values {
        None => Value::Null,
        Some(v) => json!({
            "note": "numeric coefficients replaced by fresh rate symbols",
            "values": point_json(v, m.symbols.params()),
        }),
    }
}

fn crn_json(m: &OdeModel, c: &CrnForm) -> Value {
    let rates: Vec<String> = (0..c.reactions()).map(|j| c.rate_text(j)).collect();
    let violations: Vec<Value> = positivity_check(c)
        .into_iter()
        .map(|(i, j)| json!({ "variable": m.symbols.vars()[i], "rate": rates[j] }))
        .collect();
    json!({
        "stoichiometric_matrix": c.stoich,
        "rate_monomials": rates,
        "positivity": { "preserves_positive_orthant": violations.is_empty(), "violations": violations },
    })
}

fn cmd_convert(input: &Input) -> Result<Value, Failure> {
    let m = load(input)?;
    let (model, c, split) = crn_of(&m).map_err(input_error)?;
    if c.reconstruct() != model.rhs {
        return Err(internal_error(anyhow!("reaction-network form does not reproduce the right-hand sides")));
    }
    Ok(json!({
        "command": { "name": "convert", "file": input.file },
        "model": model_json(&model, input),
        "flags": { "truncated": input.truncated },
        "result": {
            "crn": crn_json(&model, &c),
            "split_numeric": split_json(&model, &split),
            "reconstructed": model.to_text(),
        },
    }))
}

fn cmd_laws(a: &LawsArgs) -> Result<(Value, u8), Failure> {
    if a.degree.is_some() && !matches!(a.kind, Kind::Polynomial) {
        return Err(input_error(anyhow!("--degree applies to --kind polynomial only")));
    }
    if let Some(j) = a.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global().map_err(internal_error)?;
    }
    let m = load(&a.input)?;
    let command = json!({ "name": "laws", "file": a.input.file });
    let (result, flags, code) = match a.kind {
        Kind::Linear => (linear_laws(&m)?, json!({ "kind": "linear", "truncated": a.input.truncated }), 0),
        Kind::Monomial => (monomial_laws(&m)?, json!({ "kind": "monomial", "truncated": a.input.truncated }), 0),
        Kind::Polynomial => polynomial_laws(&m, a)?,
    };
    Ok((json!({ "command": command, "model": model_json(&m, &a.input), "flags": flags, "result": result }), code))
}

fn linear_laws(m: &OdeModel) -> Result<Value, Failure> {
    let (model, c, split) = crn_of(m).map_err(input_error)?;
    let basis = linear_basis(&c);
    let (laws, semipositive) = match semipositive_basis(&basis) {
        Some(sp) => (sp, true),
        None => (basis, false),
    };
    let names = model.symbols.names();
    let polys = laws_as_polys(&laws, model.r());
    if let Some(p) = polys.iter().find(|p| !derivative_along(&model, p).is_zero()) {
        return Err(internal_error(anyhow!("linear law {} fails verification", p.to_text(&names))));
    }
    Ok(json!({
        "laws": polys.iter().map(|p| poly_json(p, &names)).collect::<Vec<_>>(),
        "semipositive": semipositive,
        "stoichiometric_rank": stoich_rank(&c),
        "split_numeric": split_json(&model, &split),
    }))
}

fn monomial_laws(m: &OdeModel) -> Result<Value, Failure> {
    let rep = monomial_basis(m).map_err(input_error)?;
    let vars = m.symbols.vars();
    let mut laws = Vec::new();
    for law in &rep.laws {
        if !verify_monomial(m, law) {
            return Err(internal_error(anyhow!("monomial law {} fails verification", law.to_text(vars))));
        }
        laws.push(json!({
            "text": law.to_text(vars),
            "exponents": law.exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "polynomial": law.is_polynomial(),
        }));
    }
    Ok(json!({
        "laws": laws,
        "divided_stoichiometric_matrix": rep.crn.stoich,
        "divided_rate_monomials": (0..rep.crn.reactions()).map(|j| rep.crn.rate_text(j)).collect::<Vec<_>>(),
        "split_numeric": split_json(&rep.divided, &rep.split_values),
    }))
}

fn polynomial_laws(m: &OdeModel, a: &LawsArgs) -> Result<(Value, Value, u8), Failure> {
    let opts = LawOptions {
        degree: a.degree.unwrap_or(2),
        mode: match a.mode {
            ModeArg::Generic => Mode::Generic,
            ModeArg::All => Mode::AllBranches,
            ModeArg::Unconditional => Mode::Unconditional,
        },
        source: match a.source {
            SourceArg::Module => Source::ModuleBasis,
            SourceArg::Vectorspace => Source::VectorSpace,
        },
        convention: match a.degree_convention {
            ConventionArg::Product => DegreeConvention::Product,
            ConventionArg::Multiplier => DegreeConvention::Multiplier,
        },
        reduced: !a.unreduced,
        positive_params: !a.all_signs,
        max_branches: a.max_branches,
        ..Default::default()
    };
    let flags = json!({
        "kind": "polynomial",
        "truncated": a.input.truncated,
        "degree": opts.degree,
        "mode": a.mode.to_possible_value().unwrap().get_name(),
        "source": a.source.to_possible_value().unwrap().get_name(),
        "degree_convention": a.degree_convention.to_possible_value().unwrap().get_name(),
        "reduced": opts.reduced,
        "positive_params": opts.positive_params,
        "max_branches": opts.max_branches,
        "classify": a.classify,
    });
    let rep = conservation_laws(m, &opts).map_err(|e| match e {
        LawError::DegreeTooSmall(_) => input_error(e),
        _ => internal_error(e),
    })?;
    let names = m.symbols.names();
    let r = m.r();
    let branches: Vec<Value> = rep
        .branches
        .iter()
        .map(|b| {
            let laws: Vec<Value> = b
                .laws
                .iter()
                .map(|l| {
                    let expr = match &l.expr {
                        LawExpr::Poly(p) => poly_json(p, &names),
                        LawExpr::Monomial(ml) => json!({ "text": ml.to_text(m.symbols.vars()) }),
                    };
                    json!({
                        "kind": l.kind.as_str(),
                        "law": expr,
                        "condition": condition_text(&l.condition, &names),
                        "degree": l.degree,
                    })
                })
                .collect();
            let mut v = json!({
                "condition": condition_text(&b.condition, &names),
                "generators": b.generators,
                "space_dim": b.space_dim,
                "laws": laws,
                "counts": {
                    "total": b.laws.len(),
                    "linear": b.count(LawKind::Linear),
                    "polynomial": b.count(LawKind::Polynomial),
                },
            });
            if a.classify {
                let polys: Vec<Poly<Q>> = b.laws.iter().filter_map(|l| l.as_poly().cloned()).collect();
                let (gens, generated) = filter_generated(&polys, r, opts.degree);
                v["classification"] = json!({ "generators": gens, "generated": generated });
            }
            v
        })
        .collect();
    let code = if rep.complete { 0 } else { 3 };
    Ok((json!({ "branches": branches, "complete": rep.complete }), flags, code))
}

fn parse_laws(m: &OdeModel, a: &CheckArgs) -> Result<Vec<Poly<Q>>, Failure> {
    let text = match (&a.laws, &a.laws_file) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => {
            std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())).map_err(input_error)?
        }
        (None, None) => return Err(input_error(anyhow!("no laws given"))),
    };
    let laws: Vec<Poly<Q>> = text
        .split([',', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty() && !s.starts_with('#'))
        .map(|s| parse_poly(s, &m.symbols).with_context(|| format!("parsing law `{s}`")))
        .collect::<Result<_, _>>()
        .map_err(input_error)?;
    if laws.is_empty() {
        return Err(input_error(anyhow!("no laws given")));
    }
    Ok(laws)
}

fn cmd_check(a: &CheckArgs) -> Result<Value, Failure> {
    let m = load(&a.input)?;
    let laws = parse_laws(&m, a)?;
    let budget = a.budget.unwrap_or_else(budget_from_env);
    let (prop, rep): (&str, CheckReport) = match a.property {
        Property::Complete => ("complete", is_complete(&m.symbols, &m.rhs, &laws, budget)),
        Property::Independent => ("independent", is_independent(&m.symbols, &m.rhs, &laws, budget)),
    };
    let names = m.symbols.names();
    let v = &rep.verdict;
    if let Some(w) = &v.witness {
        if rep.formula.conclusion_holds(w) || !rep.formula.premise_holds(w) {
            return Err(internal_error(anyhow!("witness does not refute the formula")));
        }
    }
    let smt_path = if v.answer == Answer::Unknown {
        std::fs::create_dir_all(&a.out)
            .with_context(|| format!("creating {}", a.out.display()))
            .map_err(input_error)?;
        let path = a.out.join(format!("{}_{}.smt2", m.name, prop));
        let text = v.exported_formula.clone().unwrap_or_else(|| to_smtlib(&rep.formula));
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display())).map_err(internal_error)?;
        Some(path.display().to_string())
    } else {
        None
    };
    let cases: Vec<Value> = rep
        .decomposition
        .cases
        .iter()
        .map(|c| json!({ "condition": condition_text(&c.gamma, &names), "rank": c.rank }))
        .collect();
    Ok(json!({
        "command": { "name": "check", "file": a.input.file, "property": prop },
        "model": model_json(&m, &a.input),
        "flags": { "truncated": a.input.truncated, "budget": budget },
        "result": {
            "laws": laws.iter().map(|p| poly_json(p, &names)).collect::<Vec<_>>(),
            "rank_cases": cases,
            "rho": rep.rho.iter().map(|c| condition_text(c, &names)).collect::<Vec<_>>(),
            "formula": rep.formula.to_text(),
            "verdict": v.answer.as_str(),
            "witness": v.witness.as_ref().map(|w| point_json(w, &names)),
            "smt2": smt_path,
            "trials": v.trials,
        },
    }))
}

fn cmd_cgs(input: &Input, max_branches: usize) -> Result<(Value, u8), Failure> {
    let m = load(input)?;
    let r = m.r();
    let names = m.symbols.names();
    let (params, vars) = (m.symbols.params(), m.symbols.vars());
    let c = cgs(&m.rhs, r, &CgsOptions { max_branches, ..Default::default() });
    let branches: Vec<Value> = c
        .branches
        .iter()
        .map(|b| {
            json!({
                "condition": condition_text(&b.condition, &names),
                "basis": b.basis.iter().map(|p| ratfun_poly_text(p, params, vars)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let report = json!({
        "command": { "name": "cgs", "file": input.file },
        "model": model_json(&m, input),
        "flags": { "truncated": input.truncated, "max_branches": max_branches },
        "result": { "branches": branches, "complete": c.complete },
    });
    Ok((report, if c.complete { 0 } else { 3 }))
}

/// Text of a polynomial with rational-function coefficients, terms in
/// degrevlex-descending order.
fn ratfun_poly_text(p: &Poly<RatFun>, params: &[String], vars: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let terms: Vec<String> = p
        .sorted_terms(&TermOrder::DegRevLex)
        .into_iter()
        .map(|(m, c)| {
            let c = c.to_text(params);
            let simple = !c.trim_start_matches('-').contains([' ', '/']);
            let c = if simple { c } else { format!("({c})") };
            if m.0.iter().all(|&e| e == 0) {
                c
            } else if c == "1" {
                mono_text(m, vars)
            } else if c == "-1" {
                format!("-{}", mono_text(m, vars))
            } else {
                format!("{c}*{}", mono_text(m, vars))
            }
        })
        .collect();
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        match t.strip_prefix('-') {
            Some(rest) => out += &format!(" - {rest}"),
            None => out += &format!(" + {t}"),
        }
    }
    out
}
