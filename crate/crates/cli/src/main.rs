//! `superinduce`: verification suites, primitive-vector emission and
//! typicality/linkage queries, all reported as JSON.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use superinduce_core::floors::{self, AdmissiblePair, Decomposition, Resolution};
use superinduce_core::linkage::{self, OmegaGrid};
use superinduce_core::lr;
use superinduce_core::scalar::Characteristic;
use superinduce_core::suites::{self, Report};
use superinduce_core::superpoly::Ambient;
use superinduce_core::weights::{self, Weight};
use superinduce_core::Error;

#[derive(Parser, Debug)]
#[command(name = "superinduce", version, about = "Exact computations in induced GL(m|n) supermodules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    cfg: JobConfig,
}

/// Options shared by every command; each command reads the ones it needs.
#[derive(clap::Args, Debug, Clone)]
struct JobConfig {
    #[arg(long, global = true)]
    m: Option<usize>,
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Characteristic: 0 or an odd prime.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Weight literal "plus|minus", e.g. "2,1|1,0".
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, global = true)]
    i: Option<usize>,
    /// Index inside the odd block, 1..=n.
    #[arg(long, global = true)]
    j: Option<usize>,
    /// JSON list of (i, j) cells, e.g. "[[1,1],[2,2]]", j in 1..=n.
    #[arg(long, global = true)]
    pairs: Option<String>,
    #[arg(long, global = true, default_value_t = suites::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true)]
    max_entry: Option<i64>,
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Comma lists for the lr command.
    #[arg(long, global = true)]
    outer: Option<String>,
    #[arg(long, global = true)]
    inner: Option<String>,
    #[arg(long, global = true)]
    content: Option<String>,
    /// Write the JSON here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite.
    Verify { suite: Suite },
    /// Shorthand for `verify lemmas`.
    VerifyLemmas,
    /// Emit an artifact.
    Emit { what: Artifact },
    Typicality,
    Linkage,
    OddChain,
    Alcove,
    LinkChain,
    Lr,
    /// Is π_ij (or π_{I|J} with --pairs) primitive?
    Primitive,
    /// φ_1(π_ij) against ω_ij π_ij.
    Phi1,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Suite {
    Lemmas,
    Identities,
    Gen,
    Phi1,
    Fwedge,
    Linkage,
    Gl22,
    Primitivity,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Artifact {
    HighestVector,
    PiIj,
    #[value(name = "pi-IJ")]
    PiPair,
    OmegaGrid,
    LinkageGraph,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(_) | Error::Parse(_) => Failure::Usage(e.to_string()),
            Error::Internal(_) => Failure::Internal(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

impl JobConfig {
    fn characteristic(&self) -> CliResult<Characteristic> {
        match self.p {
            None | Some(0) => Ok(Characteristic::Zero),
            Some(p) => Ok(Characteristic::from_u32(p)?),
        }
    }

    fn odd_prime(&self) -> CliResult<u32> {
        match self.characteristic()? {
            Characteristic::Prime(p) => Ok(p),
            Characteristic::Zero => usage("this command needs --p with an odd prime"),
        }
    }

    fn weight_of(&self, text: &Option<String>, flag: &str) -> CliResult<Weight> {
        let Some(t) = text else { return usage(format!("--{flag} is required")) };
        let w = Weight::parse(t)?;
        if self.m.is_some_and(|m| m != w.m()) || self.n.is_some_and(|n| n != w.n()) {
            return usage(format!("--{flag} {w} does not match --m/--n"));
        }
        if w.m() == 0 || w.n() == 0 {
            return usage("m and n must be at least 1");
        }
        Ok(w)
    }

    fn lambda(&self) -> CliResult<Weight> {
        self.weight_of(&self.lambda, "lambda")
    }

    fn mu(&self) -> CliResult<Weight> {
        self.weight_of(&self.mu, "mu")
    }

    fn ambient_for(&self, w: &Weight) -> CliResult<Ambient> {
        Ok(Ambient::new(w.m(), w.n(), self.characteristic()?)?)
    }

    fn sizes(&self, default: (usize, usize)) -> (usize, usize) {
        (self.m.unwrap_or(default.0), self.n.unwrap_or(default.1))
    }

    fn ij(&self) -> CliResult<(usize, usize)> {
        match (self.i, self.j) {
            (Some(i), Some(j)) => Ok((i, j)),
            _ => usage("--i and --j are required"),
        }
    }

    /// Cells sorted into the admissible order.
    fn pair(&self, m: usize, n: usize) -> CliResult<AdmissiblePair> {
        let Some(text) = &self.pairs else { return usage("--pairs is required") };
        let mut cells: Vec<(usize, usize)> =
            serde_json::from_str(text).map_err(|e| Failure::Usage(format!("bad --pairs '{text}': {e}")))?;
        cells.sort_unstable();
        let (i, j) = cells.into_iter().unzip();
        Ok(AdmissiblePair::new(m, n, i, j)?)
    }
}

fn parse_list(text: &Option<String>, flag: &str) -> CliResult<Vec<usize>> {
    let t = text.as_deref().unwrap_or("");
    t.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| Failure::Usage(format!("bad --{flag} entry '{s}'"))))
        .collect()
}

/// Pretty JSON with object keys sorted.
fn write_json(v: impl Serialize, out: &Option<PathBuf>) -> CliResult<()> {
    let value = serde_json::to_value(v).map_err(|e| Failure::Internal(e.to_string()))?;
    let text = serde_json::to_string_pretty(&value).map_err(|e| Failure::Internal(e.to_string()))? + "\n";
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pair_label(p: &AdmissiblePair) -> String {
    let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    format!("({}|{})", join(&p.i), join(&p.j))
}

fn verify(suite: Suite, cfg: &JobConfig) -> CliResult<Report> {
    let seed = cfg.seed;
    let sweep = || -> CliResult<Vec<Weight>> {
        match &cfg.lambda {
            Some(_) => Ok(vec![cfg.lambda()?]),
            None => Ok(suites::default_sweep(seed)),
        }
    };
    let chars = || -> CliResult<Vec<u32>> {
        Ok(match cfg.p {
            Some(p) => {
                cfg.characteristic()?;
                vec![p]
            }
            None => suites::SWEEP_CHARACTERISTICS.to_vec(),
        })
    };
    let report = match suite {
        Suite::Lemmas => match (cfg.m, cfg.n) {
            (None, None) => suites::lemmas(&suites::LEMMA_SIZES)?,
            _ => suites::lemmas(&[cfg.sizes((2, 2))])?,
        },
        Suite::Identities => suites::identities(seed, 100)?,
        Suite::Gen => {
            let (m, n) = cfg.sizes((2, 2));
            suites::gen(m, n, 50, cfg.max_entry.unwrap_or(3), seed)?
        }
        Suite::Phi1 => suites::phi1(&sweep()?, &chars()?)?,
        Suite::Fwedge => {
            let (m, n) = cfg.sizes((2, 2));
            suites::fwedge(m, n, cfg.max_entry.unwrap_or(6), 4)?
        }
        Suite::Linkage => match cfg.p {
            None => suites::linkage_suite(seed)?,
            Some(_) => {
                let p = cfg.odd_prime()?;
                let (m, n) = cfg.sizes((2, 2));
                let e = cfg.max_entry.unwrap_or(4);
                let parts =
                    vec![suites::bridge(100, seed)?, suites::congruence(m, n, p, e)?, suites::transport(m, n, p, e, m * n, 50, seed)?];
                Report::merge("linkage", Some(seed), parts)
            }
        },
        Suite::Gl22 => suites::gl22()?,
        Suite::Primitivity => suites::primitivity(&sweep()?, &chars()?, 4)?,
    };
    Ok(report)
}

fn emit(what: Artifact, cfg: &JobConfig) -> CliResult<Value> {
    match what {
        Artifact::HighestVector => {
            let lambda = cfg.lambda()?;
            let amb = cfg.ambient_for(&lambda)?;
            let v = weights::highest_vector(amb, &lambda)?;
            Ok(json!({ "lambda": lambda, "p": amb.characteristic().as_u32(), "element": v.render() }))
        }
        Artifact::PiIj => {
            let lambda = cfg.lambda()?;
            let amb = cfg.ambient_for(&lambda)?;
            let (i, j) = cfg.ij()?;
            let x = floors::pi_ij(amb, &lambda, i, j)?;
            let round_trip = match floors::floor_decompose(&x.embed()?, &lambda)? {
                Decomposition::Floors(y) => y.loc_eq(&x),
                Decomposition::NotRepresentable { .. } => false,
            };
            Ok(json!({
                "lambda": lambda, "i": i, "j": j, "p": amb.characteristic().as_u32(),
                "weight": x.weight(), "element": x, "round_trip": round_trip,
            }))
        }
        Artifact::PiPair => {
            let lambda = cfg.lambda()?;
            let amb = cfg.ambient_for(&lambda)?;
            let pair = cfg.pair(lambda.m(), lambda.n())?;
            let base = json!({
                "lambda": lambda, "pair": pair_label(&pair), "p": amb.characteristic().as_u32(),
                "robust": floors::is_robust(&lambda, &pair), "weight": floors::lambda_pair(&lambda, &pair),
            });
            let mut obj = base.as_object().cloned().unwrap_or_default();
            match floors::pi_pair(amb, &lambda, &pair)? {
                Resolution::InModule(x) => {
                    obj.insert("in_module".into(), json!(true));
                    obj.insert("element".into(), serde_json::to_value(&x).map_err(|e| Failure::Internal(e.to_string()))?);
                }
                Resolution::NotInModule { reason } => {
                    obj.insert("in_module".into(), json!(false));
                    obj.insert("reason".into(), json!(reason));
                }
            }
            Ok(Value::Object(obj))
        }
        Artifact::OmegaGrid => {
            let lambda = cfg.lambda()?;
            let ch = cfg.characteristic()?;
            let grid = OmegaGrid::of(&lambda);
            Ok(json!({ "lambda": lambda, "p": ch.as_u32(), "omega": grid.values, "zeros": grid.zeros(ch) }))
        }
        Artifact::LinkageGraph => linkage_graph(cfg),
    }
}

/// Nodes: dominant λ with entries in 0..=max_entry. Edges: odd steps λ → λ_ij
/// with ω_ij ≡ 0 (and λ_ij a node), and even linkage between nodes.
fn linkage_graph(cfg: &JobConfig) -> CliResult<Value> {
    let p = cfg.odd_prime()?;
    let ch = Characteristic::Prime(p);
    let (m, n) = cfg.sizes((2, 2));
    let max = cfg.max_entry.unwrap_or(3);
    let parts = |len: usize| -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v: Vec<i64>| {
                    let top = v.last().copied().unwrap_or(max);
                    (0..=top).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    };
    let mut nodes: Vec<Weight> = Vec::new();
    for a in parts(m) {
        for b in parts(n) {
            nodes.push(Weight::new(a.clone(), b));
        }
    }
    nodes.sort();
    let mut odd = Vec::new();
    let mut even = Vec::new();
    for (s, lambda) in nodes.iter().enumerate() {
        for i in 1..=m {
            for j in 1..=n {
                let target = lambda.lambda_ij(i, j);
                if ch.divides(linkage::omega(lambda, i, j)) && nodes.binary_search(&target).is_ok() {
                    odd.push(json!({ "from": lambda, "to": target, "i": i, "j": j }));
                }
            }
        }
        for mu in &nodes[s + 1..] {
            if let Some(w) = linkage::even_linked(lambda, mu, p)? {
                even.push(json!({ "from": lambda, "to": mu, "witness": w }));
            }
        }
    }
    Ok(json!({ "m": m, "n": n, "p": p, "max_entry": max, "nodes": nodes, "odd_edges": odd, "even_edges": even }))
}

/// Returns the JSON and whether the command counts as passing.
fn dispatch(cli: &Cli) -> CliResult<(Value, bool)> {
    let cfg = &cli.cfg;
    let to_value = |r: Report| -> CliResult<(Value, bool)> {
        let pass = r.pass;
        Ok((serde_json::to_value(r).map_err(|e| Failure::Internal(e.to_string()))?, pass))
    };
    match &cli.command {
        Command::Verify { suite } => to_value(verify(*suite, cfg)?),
        Command::VerifyLemmas => to_value(verify(Suite::Lemmas, cfg)?),
        Command::Emit { what } => Ok((emit(*what, cfg)?, true)),
        Command::Typicality => {
            let lambda = cfg.lambda()?;
            let ch = cfg.characteristic()?;
            let grid = OmegaGrid::of(&lambda);
            Ok((
                json!({
                    "lambda": lambda, "p": ch.as_u32(), "typical": grid.is_typical(ch),
                    "omega": grid.values, "zeros": grid.zeros(ch),
                }),
                true,
            ))
        }
        Command::Linkage => {
            let (lambda, mu) = (cfg.lambda()?, cfg.mu()?);
            let p = cfg.odd_prime()?;
            let w = linkage::even_linked(&lambda, &mu, p)?;
            Ok((json!({ "lambda": lambda, "mu": mu, "p": p, "even_linked": w.is_some(), "witness": w }), true))
        }
        Command::OddChain => {
            let lambda = cfg.lambda()?;
            let ch = cfg.characteristic()?;
            let pair = cfg.pair(lambda.m(), lambda.n())?;
            if !floors::lambda_pair(&lambda, &pair).is_dominant() {
                return usage(format!("λ_(I|J) for {} is not dominant", pair_label(&pair)));
            }
            let w = linkage::odd_linked(&lambda, &pair, ch)?;
            Ok((
                json!({
                    "lambda": lambda, "pair": pair_label(&pair), "p": ch.as_u32(),
                    "condition_holds": w.is_some(), "rearrangement": w,
                }),
                true,
            ))
        }
        Command::Alcove => {
            let lambda = cfg.lambda()?;
            let p = cfg.odd_prime()?;
            Ok((json!({ "lambda": lambda, "p": p, "in_alcove": linkage::in_alcove(&lambda, p)? }), true))
        }
        Command::LinkChain => {
            let (lambda, mu) = (cfg.lambda()?, cfg.mu()?);
            let p = cfg.odd_prime()?;
            let steps = cfg.max_steps.unwrap_or(lambda.m() * lambda.n());
            let chain = linkage::link_chain_search(&lambda, &mu, p, steps)?;
            Ok((json!({ "lambda": lambda, "target": mu, "p": p, "found": chain.is_some(), "chain": chain }), true))
        }
        Command::Lr => {
            let outer = parse_list(&cfg.outer, "outer")?;
            let inner = parse_list(&cfg.inner, "inner")?;
            let content = parse_list(&cfg.content, "content")?;
            let a = lr::lr_coefficient(&outer, &inner, &content)?;
            let b = lr::lr_coefficient_columnwise(&outer, &inner, &content)?;
            let agree = a.count == b.count;
            Ok((json!({ "outer": outer, "inner": inner, "content": content, "coefficient": a, "orders_agree": agree }), agree))
        }
        Command::Primitive => {
            let lambda = cfg.lambda()?;
            let amb = cfg.ambient_for(&lambda)?;
            if cfg.pairs.is_some() {
                let pair = cfg.pair(lambda.m(), lambda.n())?;
                let (in_module, primitive) = match floors::pi_pair(amb, &lambda, &pair)? {
                    Resolution::InModule(x) => (true, Some(floors::is_primitive(&x)?)),
                    Resolution::NotInModule { .. } => (false, None),
                };
                return Ok((
                    json!({
                        "lambda": lambda, "pair": pair_label(&pair), "p": amb.characteristic().as_u32(),
                        "in_module": in_module, "primitive": primitive,
                    }),
                    true,
                ));
            }
            let (i, j) = cfg.ij()?;
            let x = floors::pi_ij(amb, &lambda, i, j)?;
            let primitive = floors::is_primitive(&x)?;
            Ok((json!({ "lambda": lambda, "i": i, "j": j, "p": amb.characteristic().as_u32(), "primitive": primitive }), true))
        }
        Command::Phi1 => {
            let lambda = cfg.lambda()?;
            let amb = cfg.ambient_for(&lambda)?;
            let (i, j) = cfg.ij()?;
            let x = floors::pi_ij(amb, &lambda, i, j)?;
            let w = linkage::omega(&lambda, i, j);
            let image = floors::phi_r(&x)?;
            let expected = x.scale_i64(w);
            let holds = image.loc_eq(&expected);
            Ok((
                json!({
                    "lambda": lambda, "i": i, "j": j, "p": amb.characteristic().as_u32(),
                    "omega": w, "image": image, "eigen_equation_holds": holds,
                }),
                holds,
            ))
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
    match dispatch(&cli).and_then(|(v, pass)| write_json(&v, &cli.cfg.out).map(|_| pass)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}
