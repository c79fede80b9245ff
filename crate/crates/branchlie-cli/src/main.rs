mod config;

use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use branchlie::branching::{self, CorollaryMode, OracleBudget};
use branchlie::chevalley::{closed_forms, structure_constants, verify_chevalley_relations};
use branchlie::enveloping::WeylModule;
use branchlie::error::Error;
use branchlie::maxvec::{self, Ambient, AppendixCase, CaseTag};
use branchlie::rootsystem::{LieType, RootSystem, Weight};
use branchlie::weylmod::{char_irreducible, known_multiplicities, weyl_character};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use config::{parse_primes, parse_range, parse_weight, Format, Primes, RunConfig};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "branchlie", version, about = "Exact computations for the restriction of B_n-modules to D_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Chevalley,
    Table2,
    Appendix,
    Branching,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Proof,
    Literal,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether L(λ)|_{D_n} has exactly two composition factors.
    Classify {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = parse_weight)]
        lambda: Weight,
        /// Accept non-restricted weights through their Steinberg digits.
        #[arg(long)]
        general: bool,
        #[arg(long, value_enum, default_value = "proof")]
        mode: ModeArg,
    },
    /// Dominant weights and multiplicities of L(λ) (or V(λ) when p = 0).
    Char {
        #[arg(long = "type")]
        lie_type: LieType,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_parser = parse_weight)]
        lambda: Weight,
        #[arg(long, default_value_t = 0)]
        p: u64,
        #[arg(long, value_enum, default_value = "tsv")]
        out: Format,
    },
    /// Multiplicity of λ − δ in V(λ) and in L(λ).
    Mult {
        #[arg(long = "type")]
        lie_type: LieType,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_parser = parse_weight)]
        lambda: Weight,
        /// δ in simple-root coordinates.
        #[arg(long = "mu-delta", value_parser = parse_weight)]
        mu_delta: Weight,
        #[arg(long)]
        p: u64,
    },
    /// Maximal vectors in one of the explicit families.
    Maxvec {
        #[arg(long)]
        case: CaseTag,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        b: Option<i64>,
        #[arg(long)]
        p: u64,
    },
    /// Composition factors of L(λ)|_{D_n} by character peeling.
    Decompose {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = parse_weight)]
        lambda: Weight,
        #[arg(long = "budget-ms")]
        budget_ms: Option<u64>,
        #[arg(long = "height-budget")]
        height_budget: Option<i64>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long = "rank-min")]
        rank_min: Option<usize>,
        #[arg(long = "rank-max")]
        rank_max: Option<usize>,
        #[arg(long, value_parser = parse_primes)]
        primes: Option<Primes>,
        #[arg(long = "budget-ms")]
        budget_ms: Option<u64>,
        #[arg(long = "height-budget")]
        height_budget: Option<i64>,
    },
    /// One row per (n, p, λ) over all nonzero p-restricted λ.
    Table {
        #[arg(long, value_parser = parse_range, default_value = "3")]
        rank: (usize, usize),
        #[arg(long, value_parser = parse_primes, default_value = "3")]
        primes: Primes,
        #[arg(long, value_enum, default_value = "tsv")]
        out: Format,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
    Verification,
    Other(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Budget(_) | Error::HeightBudget { .. } => Failure::Budget(e.to_string()),
            Error::Inconsistent(_) | Error::Overflow => Failure::Other(e.into()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Other(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn emit(v: &Value) -> Outcome {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).context("writing output")?;
    writeln!(out).context("writing output")?;
    Ok(())
}

fn with_schema<T: Serialize>(kind: &str, body: &T) -> anyhow::Result<Value> {
    let mut v = serde_json::to_value(body)?;
    if let Value::Object(m) = &mut v {
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("kind".into(), json!(kind));
    }
    Ok(v)
}

fn root_system(t: LieType, rank: usize) -> Result<RootSystem, Failure> {
    if matches!(t, LieType::B | LieType::D) && rank < 3 {
        return Err(Failure::Usage(format!("type {t} needs rank ≥ 3")));
    }
    Ok(RootSystem::new(t, rank)?)
}

fn check_len(w: &Weight, rank: usize) -> Outcome {
    if w.rank() != rank {
        return Err(Failure::Usage(format!("expected {rank} coordinates, got {}", w.rank())));
    }
    Ok(())
}

fn mode(m: ModeArg) -> CorollaryMode {
    match m {
        ModeArg::Proof => CorollaryMode::Proof,
        ModeArg::Literal => CorollaryMode::Literal,
    }
}

fn cmd_classify(rank: usize, p: u64, lambda: &Weight, general: bool, m: ModeArg) -> Outcome {
    check_len(lambda, rank)?;
    let v = if general {
        branching::classify_general(rank, p, lambda, mode(m))?
    } else {
        branching::classify_p_restricted(rank, p, lambda)?
    };
    emit(&with_schema("verdict", &v)?)
}

fn cmd_char(t: LieType, rank: usize, lambda: &Weight, p: u64, out: Format) -> Outcome {
    let rs = root_system(t, rank)?;
    check_len(lambda, rank)?;
    let table = if p == 0 { weyl_character(&rs, lambda)? } else { char_irreducible(&rs, lambda, p)? };
    match out {
        Format::Json => emit(&with_schema("character", &table)?),
        Format::Tsv => {
            let mut s = String::from("weight\tmultiplicity\n");
            for (w, m) in table.entries.iter().rev() {
                s.push_str(&format!("{w}\t{m}\n"));
            }
            s.push_str(&format!("dimension\t{}\n", table.dimension));
            print!("{s}");
            Ok(())
        }
    }
}

fn cmd_mult(t: LieType, rank: usize, lambda: &Weight, delta: &Weight, p: u64) -> Outcome {
    let rs = root_system(t, rank)?;
    check_len(lambda, rank)?;
    check_len(delta, rank)?;
    if delta.0.iter().any(|&c| c < 0) {
        return Err(Failure::Usage("δ must have non-negative coordinates".into()));
    }
    if p != 0 && !branchlie::is_prime(p) {
        return Err(Error::InvalidCharacteristic(p).into());
    }
    let mut m = WeylModule::for_system(&rs, lambda)?;
    let weyl = m.weyl_dim_mu(&delta.0)?;
    let irr = m.irreducible_dim_mu(&delta.0, p)?;
    emit(&json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "multiplicity",
        "lambda": lambda,
        "mu": rs.sub_delta(lambda, &delta.0),
        "p": p,
        "weyl_mult": weyl,
        "irreducible_mult": irr,
    }))
}

fn appendix_case(case: CaseTag, n: usize, k: Option<usize>, i: Option<usize>, a: Option<i64>, b: Option<i64>) -> Result<AppendixCase, Failure> {
    let need = |x: Option<i64>, name: &str| x.ok_or_else(|| Failure::Usage(format!("--{name} is required for {case}")));
    let c = match case {
        CaseTag::ARow => AppendixCase::ARow { l: n, a: need(a, "a")?, b: need(b, "b")? },
        CaseTag::BALambda1 => AppendixCase::BALambda1 { n, a: need(a, "a")? },
        CaseTag::BLambdaI => AppendixCase::BLambdaI { n, i: i.ok_or_else(|| Failure::Usage("--i is required".into()))? },
        CaseTag::BALambda1Lambda2 => AppendixCase::BALambda1LambdaK { n, k: 2, a: need(a, "a")? },
        CaseTag::BALambda1LambdaK => AppendixCase::BALambda1LambdaK { n, k: k.ok_or_else(|| Failure::Usage("--k is required".into()))?, a: need(a, "a")? },
        CaseTag::Generic | CaseTag::Quotient => return Err(Failure::Usage(format!("case {case} has no explicit family"))),
    };
    c.check()?;
    Ok(c)
}

fn cmd_maxvec(c: AppendixCase, p: u64) -> Outcome {
    if !branchlie::is_prime(p) {
        return Err(Error::InvalidCharacteristic(p).into());
    }
    let v = if c.stated_vector().is_some() {
        let r = maxvec::check_divisibility_law(&c, p)?;
        let mut v = with_schema("maxvec", &r)?;
        v["dim"] = json!(r.dim);
        v["divisibility_holds"] = json!(r.divisible);
        v
    } else {
        let g = maxvec::appendix_basis(&c)?;
        let s = maxvec::maximal_vector_space(&g, p, Ambient::Weyl)?;
        json!({
            "schema_version": SCHEMA_VERSION,
            "kind": "maxvec",
            "case": c,
            "p": p,
            "ambient": s.ambient,
            "dim": s.solution_dim,
            "basis": s.centered,
            "divisibility_holds": Value::Null,
            "generators": g.generators.iter().map(|x| x.label.clone()).collect::<Vec<_>>(),
        })
    };
    emit(&v)
}

fn cmd_decompose(rank: usize, p: u64, lambda: &Weight, budget: OracleBudget) -> Outcome {
    check_len(lambda, rank)?;
    let f = branching::brute_force_decompose(rank, p, lambda, budget)?;
    let mut v = with_schema("factor_list", &f)?;
    v["count"] = json!(f.count());
    emit(&v)
}

fn cmd_table(cfg: &RunConfig) -> Outcome {
    let mut rows = Vec::new();
    for n in cfg.rank_min..=cfg.rank_max {
        for &p in &cfg.primes {
            if p < 2 {
                return Err(Failure::Usage("table needs primes".into()));
            }
            for lambda in branching::weight_box(n, p as i64) {
                let v = branching::classify_p_restricted(n, p, &lambda)?;
                rows.push(v);
            }
        }
    }
    match cfg.format {
        Format::Json => emit(&json!({ "schema_version": SCHEMA_VERSION, "kind": "table", "rows": rows })),
        Format::Tsv => {
            let mut s = String::from("n\tp\tlambda\tverdict\tcondition\tomega\tomega_prime\n");
            for v in &rows {
                let dash = |w: Option<&Weight>| w.map_or("-".to_string(), |w| w.to_string());
                s.push_str(&format!(
                    "{}\t{}\t{}\t{:?}\t{}\t{}\t{}\n",
                    v.n,
                    v.p,
                    v.lambda,
                    v.outcome,
                    v.fired_condition,
                    dash(v.omega()),
                    dash(v.omega_prime())
                ));
            }
            print!("{s}");
            Ok(())
        }
    }
}

struct SuiteResult {
    report: Value,
    failures: usize,
}

fn suite_chevalley(cfg: &RunConfig) -> Result<SuiteResult, Failure> {
    let mut systems = Vec::new();
    for n in cfg.rank_min..=cfg.rank_max {
        systems.push((LieType::A, n));
        if n >= 3 {
            systems.push((LieType::B, n));
            systems.push((LieType::D, n));
        }
    }
    let mut reports = Vec::new();
    let mut failures = 0;
    for (t, n) in systems {
        let table = structure_constants(&RootSystem::new(t, n)?)?;
        let r = verify_chevalley_relations(&table);
        failures += r.violations.len();
        let forms = if t == LieType::D { Vec::new() } else { closed_forms(&table)? };
        failures += forms.iter().map(|c| c.mismatches.len()).sum::<usize>();
        let mut v = serde_json::to_value(&r).context("report")?;
        v["closed_forms"] = serde_json::to_value(&forms).context("report")?;
        reports.push(v);
    }
    Ok(SuiteResult { report: json!({ "systems": reports }), failures })
}

fn suite_table2() -> Result<SuiteResult, Failure> {
    let rows = known_multiplicities(4)?;
    let failures = rows.iter().filter(|r| !r.ok()).count();
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut v = serde_json::to_value(r).expect("serializable");
            v["ok"] = json!(r.ok());
            v
        })
        .collect();
    Ok(SuiteResult { report: json!({ "instances": rows }), failures })
}

fn suite_appendix(cfg: &RunConfig) -> Result<SuiteResult, Failure> {
    let laws: Vec<_> = maxvec::law_grid(cfg.rank_max, &cfg.primes)
        .into_iter()
        .map(|(c, p)| maxvec::check_divisibility_law(&c, p))
        .collect::<Result<_, _>>()?;
    let audits: Vec<_> = maxvec::audit_grid(cfg.rank_max, &cfg.primes)
        .into_iter()
        .map(|(c, p)| maxvec::equivalence_audit(&c, p))
        .collect::<Result<_, _>>()?;
    let ranks: Vec<usize> = (cfg.rank_min.max(3)..=cfg.rank_max).collect();
    let ids = maxvec::identity_checks_for(&ranks, &cfg.primes)?;
    let failures = laws.iter().filter(|l| !l.ok).count() + audits.iter().filter(|a| !a.agree).count() + ids.checks.iter().filter(|c| !c.holds).count();
    Ok(SuiteResult { report: json!({ "laws": laws, "audits": audits, "identities": ids.checks }), failures })
}

fn suite_branching(cfg: &RunConfig) -> Result<SuiteResult, Failure> {
    let mut audits = Vec::new();
    let mut failures = 0;
    let mut undecided = 0;
    for n in cfg.rank_min.max(3)..=cfg.rank_max {
        for &p in &cfg.primes {
            if p == 2 {
                continue;
            }
            let a = branching::audit_classifier(n, p, cfg.budget())?;
            failures += a.disagreements;
            undecided += a.checked - a.decided;
            audits.push(a);
        }
    }
    Ok(SuiteResult { report: json!({ "audits": audits, "undecided": undecided }), failures })
}

fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Outcome {
    let r = match suite {
        Suite::Chevalley => suite_chevalley(cfg)?,
        Suite::Table2 => suite_table2()?,
        Suite::Appendix => suite_appendix(cfg)?,
        Suite::Branching => suite_branching(cfg)?,
    };
    let name = format!("{suite:?}").to_lowercase();
    let mut v = r.report;
    v["schema_version"] = json!(SCHEMA_VERSION);
    v["kind"] = json!("verify");
    v["suite"] = json!(name);
    v["failures"] = json!(r.failures);
    emit(&v)?;
    if r.failures > 0 {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Classify { rank, p, lambda, general, mode } => cmd_classify(rank, p, &lambda, general, mode),
        Command::Char { lie_type, rank, lambda, p, out } => cmd_char(lie_type, rank, &lambda, p, out),
        Command::Mult { lie_type, rank, lambda, mu_delta, p } => cmd_mult(lie_type, rank, &lambda, &mu_delta, p),
        Command::Maxvec { case, n, k, i, a, b, p } => cmd_maxvec(appendix_case(case, n, k, i, a, b)?, p),
        Command::Decompose { rank, p, lambda, budget_ms, height_budget } => {
            let cfg = RunConfig::new(rank, rank, vec![p], height_budget, budget_ms, Format::Json)?;
            cmd_decompose(rank, p, &lambda, cfg.budget())
        }
        Command::Verify { suite, rank_min, rank_max, primes, budget_ms, height_budget } => {
            let (lo, hi, ps) = match suite {
                Suite::Branching => (3, 3, vec![3, 5]),
                Suite::Table2 => (2, 4, vec![]),
                _ => (2, 4, vec![3, 5, 7, 11]),
            };
            let cfg = RunConfig::new(rank_min.unwrap_or(lo), rank_max.unwrap_or(hi), primes.map_or(ps, |p| p.0), height_budget, budget_ms, Format::Json)?;
            cmd_verify(suite, &cfg)
        }
        Command::Table { rank, primes, out } => {
            let cfg = RunConfig::new(rank.0, rank.1, primes.0, None, None, out)?;
            cmd_table(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = config::init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
