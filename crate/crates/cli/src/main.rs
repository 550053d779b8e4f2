//! `lrss` command-line front end. Exit status: 0 on success or passing
//! audit, 2 on a failed audit, 1 on usage, parse or parameter errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use lrss::access::AccessStructure;
use lrss::bounds::{evaluate, BOUND_NAMES};
use lrss::coop::{build_repetition_coop, is_r_delta_repairable, wrap_secure_coop};
use lrss::format::{
    self, code_from_json, code_to_json, scheme_from_json, scheme_to_json, shares_from_json,
    shares_to_json, unflatten, CodeDoc, SecretDoc,
};
use lrss::galois::{Elem, Field};
use lrss::graphscheme::{
    build_cycle_scheme, build_matching_scheme, fractional_cycle_packing, graph_lower_bound_m,
    graph_secrecy_bound, integral_packing, max_admissible_set, max_matching, Graph,
};
use lrss::lnc::{
    build_flow_graph, eavesdropper_min_cut, min_cut, sample_lnc, verify_multicast_capacity, Node,
    DEFAULT_RETRIES,
};
use lrss::lrc::{build_partitioned_lrc, search_mr_code, LinearCode};
use lrss::oracle::{
    audit_definition1, audit_perfect, default_limit, entropy_table, enumerate_joint,
    gradual_degradation, polymatroid_check,
};
use lrss::secret::{
    build_gabidulin_scheme, isn_scheme, perfect_local_scheme, rank_audit, shamir, split_scheme,
    EncodingInput, SecretSharingScheme,
};
use lrss::Error;

#[derive(Parser)]
#[command(name = "lrss", version, about = "Locally repairable secret sharing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a scheme (or a base code) and print its JSON.
    Construct(ConstructArgs),
    /// Encode a secret into shares.
    Encode(EncodeArgs),
    /// Recover the secret from a set of shares.
    Decode(DecodeArgs),
    /// Recompute one share from its recovery set.
    Repair(RepairArgs),
    /// Audit a scheme by rank checks or, with --oracle, exhaustively.
    Audit(AuditArgs),
    /// Evaluate a named bound, or sweep it over a grid as CSV.
    Bounds(BoundsCmd),
    /// Repairable schemes on graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Cooperative (r, delta) repair.
    #[command(subcommand)]
    Coop(CoopCmd),
    /// Flow network and random linear network code sampling.
    #[command(subcommand)]
    Lnc(LncCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeKind {
    Split,
    Gabidulin,
    Shamir,
    Isn,
    Perfect,
    /// Partitioned LRC (code JSON).
    PartitionedLrc,
    /// Random maximally recoverable LRC (code JSON).
    MrLrc,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long = "type", value_enum)]
    kind: SchemeKind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    l: usize,
    /// Threshold for shamir.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    /// Minimal effective qualified size for perfect.
    #[arg(long)]
    kappa: Option<usize>,
    /// Field characteristic.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Extension degree.
    #[arg(long = "N", default_value_t = 1)]
    ext: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    tries: usize,
    /// Base code JSON for split and gabidulin.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Access structure JSON {"n", "minimal"} for isn.
    #[arg(long)]
    access: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    scheme: PathBuf,
    /// Comma-separated secret symbols as packed integers (decimal or 0x hex).
    #[arg(long, conflicts_with = "secret_file")]
    secret: Option<String>,
    /// Secret JSON {"secret": [...], "randomness": [...]} as flat residues.
    #[arg(long)]
    secret_file: Option<PathBuf>,
    /// Seed for the ChaCha8 stream that draws the randomness.
    #[arg(long, conflicts_with = "randomness_file")]
    seed: Option<u64>,
    /// Randomness JSON {"secret": [], "randomness": [...]} as flat residues.
    #[arg(long)]
    randomness_file: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    scheme: PathBuf,
    #[arg(long)]
    shares: PathBuf,
    /// Use only these share indices.
    #[arg(long, value_delimiter = ',')]
    coords: Option<Vec<usize>>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct RepairArgs {
    #[arg(long)]
    scheme: PathBuf,
    #[arg(long)]
    shares: PathBuf,
    #[arg(long)]
    target: usize,
    /// Repair from these indices instead of the declared recovery set.
    #[arg(long, value_delimiter = ',')]
    from: Option<Vec<usize>>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    scheme: PathBuf,
    /// Enumerate the joint distribution and check every condition exactly.
    #[arg(long)]
    oracle: bool,
    /// Include the entropy table (implies --oracle).
    #[arg(long)]
    entropy_table: bool,
    /// Check perfection against this access structure (implies --oracle).
    #[arg(long)]
    access: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct BoundsCmd {
    #[command(subcommand)]
    sweep: Option<BoundsSub>,
    #[command(flatten)]
    eval: BoundArgs,
}

#[derive(Subcommand)]
enum BoundsSub {
    /// CSV table of a bound over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    bound: Option<String>,
    /// Parameters as key=value pairs, comma separated.
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    k: Option<i64>,
    #[arg(long)]
    l: Option<i64>,
    #[arg(long)]
    m: Option<i64>,
    #[arg(long)]
    r: Option<i64>,
    #[arg(long)]
    delta: Option<i64>,
    #[arg(long)]
    x: Option<i64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    bound: String,
    /// Grid as key=lo..hi or key=value entries, comma separated.
    #[arg(long, value_delimiter = ',')]
    grid: Vec<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Exhaustive graph bounds on m and k.
    Bounds {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        l: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Matching scheme on an undirected graph.
    MatchingScheme {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        l: usize,
        #[arg(long)]
        p: u64,
        #[arg(long = "N", default_value_t = 1)]
        ext: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Cycle-packing scheme on a directed graph.
    CycleScheme {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        l: usize,
        #[arg(long)]
        p: u64,
        #[arg(long = "N", default_value_t = 1)]
        ext: usize,
        /// Use a maximum vertex-disjoint packing instead of the LP optimum.
        #[arg(long)]
        integral: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum CoopCmd {
    /// Exhaustively check (r, delta) cooperative repairability of a code.
    Verify {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        delta: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Repetition code with delta+1 copies of each symbol.
    Build {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Gabidulin-precoded scheme over a verified base code.
    Wrap {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long = "N")]
        ext: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        delta: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct NetArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k0: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    r: usize,
}

#[derive(Subcommand)]
enum LncCmd {
    /// Print the flow network.
    Build {
        #[command(flatten)]
        net: NetArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Min-cut to every data collector, or to an eavesdropper set.
    Mincut {
        #[command(flatten)]
        net: NetArgs,
        /// Observed storage nodes; reports the cut from the first l symbols.
        #[arg(long, value_delimiter = ',')]
        eavesdropper: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Sample coefficients until every constraint holds and emit the scheme.
    Sample {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, default_value_t = 0)]
        l: usize,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long = "N", default_value_t = 16)]
        ext: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: usize,
        /// Also write the sampled coefficients here.
        #[arg(long)]
        assignment: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

/// Outcome of a command: the artifact and whether it is a passing result.
struct Outcome {
    text: String,
    pass: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, pass: true }
    }
}

type CliResult<T> = std::result::Result<T, String>;

fn err(e: Error) -> String {
    e.to_string()
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn in_file<T>(path: &Path, r: lrss::Result<T>) -> CliResult<T> {
    r.map_err(|e| format!("{}: {e}", path.display()))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn need<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| format!("missing --{flag}"))
}

fn load_scheme(path: &Path) -> CliResult<SecretSharingScheme> {
    in_file(path, scheme_from_json(&read(path)?))
}

fn load_code(path: &Path) -> CliResult<LinearCode> {
    in_file(path, code_from_json(&read(path)?))
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    let g: Graph = in_file(path, format::parse(&read(path)?))?;
    in_file(path, g.validate())?;
    Ok(g)
}

fn load_access(path: &Path) -> CliResult<AccessStructure> {
    let a: AccessStructure = in_file(path, format::parse(&read(path)?))?;
    in_file(path, AccessStructure::new(a.n, a.minimal))
}

fn field(p: u64, ext: usize) -> CliResult<Field> {
    Field::new(p, ext).map_err(err)
}

fn parse_int(s: &str) -> CliResult<u64> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| format!("invalid integer {s:?}"))
}

fn parse_elems(f: &Field, list: &str) -> CliResult<Vec<Elem>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| f.elem(parse_int(s)?).map_err(err))
        .collect()
}

fn construct(a: ConstructArgs) -> CliResult<Outcome> {
    let base_code = |dim: usize, n: usize, r: usize| -> CliResult<LinearCode> {
        match &a.code {
            Some(path) => load_code(path),
            None => build_partitioned_lrc(&field(a.p, 1)?, n, dim, r).map_err(err),
        }
    };
    let scheme = match a.kind {
        SchemeKind::PartitionedLrc | SchemeKind::MrLrc => {
            let f = field(a.p, a.ext)?;
            let (n, k, r) = (need(a.n, "n")?, need(a.k, "k")?, need(a.r, "r")?);
            let code = if matches!(a.kind, SchemeKind::MrLrc) {
                search_mr_code(&f, n, k, r, a.seed, a.tries)
            } else {
                build_partitioned_lrc(&f, n, k, r)
            }
            .map_err(err)?;
            return Ok(Outcome::ok(code_to_json(&code).map_err(err)?));
        }
        SchemeKind::Split => {
            let code = match &a.code {
                Some(path) => load_code(path)?,
                None => {
                    let (n, k, r) = (need(a.n, "n")?, need(a.k, "k")?, need(a.r, "r")?);
                    search_mr_code(&field(a.p, a.ext)?, n, k + a.l, r, a.seed, a.tries)
                        .map_err(err)?
                }
            };
            split_scheme(&code, a.l).map_err(err)?
        }
        SchemeKind::Gabidulin => {
            let k = need(a.k, "k")?;
            let code = base_code(k + a.l, need(a.n, "n").unwrap_or(0), a.r.unwrap_or(0))?;
            build_gabidulin_scheme(&code, k, a.l, a.ext).map_err(err)?
        }
        SchemeKind::Shamir => {
            shamir(need(a.n, "n")?, need(a.m, "m")?, &field(a.p, a.ext)?).map_err(err)?
        }
        SchemeKind::Isn => {
            let access = load_access(&need(a.access.clone(), "access")?)?;
            isn_scheme(&access, &field(a.p, a.ext)?).map_err(err)?
        }
        SchemeKind::Perfect => {
            let f = field(a.p, 1)?;
            perfect_local_scheme(
                need(a.n, "n")?,
                need(a.r, "r")?,
                need(a.kappa, "kappa")?,
                &f,
                a.ext,
                a.seed,
                a.tries,
            )
            .map_err(err)?
            .scheme
        }
    };
    Ok(Outcome::ok(scheme_to_json(&scheme).map_err(err)?))
}

fn encode(a: EncodeArgs) -> CliResult<Outcome> {
    let scheme = load_scheme(&a.scheme)?;
    let f = &scheme.field;
    let secret = match (&a.secret, &a.secret_file) {
        (Some(list), _) => parse_elems(f, list)?,
        (None, Some(path)) => {
            let doc: SecretDoc = in_file(path, format::parse(&read(path)?))?;
            in_file(path, unflatten(f, &doc.secret))?
        }
        (None, None) => return Err("one of --secret or --secret-file is required".into()),
    };
    if secret.len() != scheme.secret_len {
        return Err(format!(
            "secret has {} symbols, scheme expects {}",
            secret.len(),
            scheme.secret_len
        ));
    }
    let input = match (a.seed, &a.randomness_file) {
        (Some(seed), _) => {
            EncodingInput::with_secret(&scheme, secret, &mut ChaCha8Rng::seed_from_u64(seed))
        }
        (None, Some(path)) => {
            let doc: SecretDoc = in_file(path, format::parse(&read(path)?))?;
            let randomness = in_file(path, unflatten(f, &doc.randomness.unwrap_or_default()))?;
            EncodingInput { secret, randomness }
        }
        (None, None) => return Err("one of --seed or --randomness-file is required".into()),
    };
    let shares = scheme.encode(&input).map_err(err)?;
    Ok(Outcome::ok(shares_to_json(f, &shares).map_err(err)?))
}

fn decode(a: DecodeArgs) -> CliResult<Outcome> {
    let scheme = load_scheme(&a.scheme)?;
    let mut shares = in_file(&a.shares, shares_from_json(&scheme.field, &read(&a.shares)?))?;
    if let Some(idx) = &a.coords {
        if let Some(i) = idx.iter().find(|i| shares.get(**i).is_none()) {
            return Err(format!("share {i} not present in {}", a.shares.display()));
        }
        shares = shares.restrict(idx);
    }
    let secret = scheme.decode(&shares).map_err(err)?;
    let doc = SecretDoc {
        secret: format::flatten(&scheme.field, &secret),
        randomness: None,
    };
    Ok(Outcome::ok(pretty(&to_value(&doc))))
}

fn repair(a: RepairArgs) -> CliResult<Outcome> {
    let scheme = load_scheme(&a.scheme)?;
    let shares = in_file(&a.shares, shares_from_json(&scheme.field, &read(&a.shares)?))?;
    if a.target >= scheme.n() {
        return Err(format!("target {} outside [{}]", a.target, scheme.n()));
    }
    let value = match &a.from {
        Some(from) => scheme
            .repair_set(&[a.target], from, &shares)
            .map(|mut v| v.remove(0)),
        None => scheme.repair(a.target, &shares),
    }
    .map_err(err)?;
    let mut out = lrss::secret::ShareVector::new(scheme.n());
    out.insert(a.target, value);
    Ok(Outcome::ok(shares_to_json(&scheme.field, &out).map_err(err)?))
}

fn audit(a: AuditArgs) -> CliResult<Outcome> {
    let scheme = load_scheme(&a.scheme)?;
    let mut report = serde_json::Map::new();
    report.insert("format".into(), json!(format::FORMAT));
    report.insert("tag".into(), json!(scheme.tag));
    let mut pass;
    if a.oracle || a.entropy_table || a.access.is_some() {
        let dist = enumerate_joint(&scheme, default_limit()).map_err(err)?;
        let def1 = audit_definition1(&scheme, &dist);
        pass = def1.pass;
        report.insert("support".into(), json!(dist.len()));
        report.insert("oracle".into(), to_value(&def1));
        let access = a.access.as_deref().map(load_access).transpose()?;
        if let Some(acc) = &access {
            let perfect = audit_perfect(&dist, acc).map_err(err)?;
            pass &= perfect.pass;
            report.insert("perfect".into(), to_value(&perfect));
        }
        let poly = polymatroid_check(&dist, access.as_ref(), 1e-9).map_err(err)?;
        pass &= poly.pass;
        report.insert("polymatroid".into(), to_value(&poly));
        if a.entropy_table {
            report.insert("entropy_table".into(), to_value(&entropy_table(&dist).map_err(err)?));
            report.insert(
                "degradation".into(),
                to_value(&gradual_degradation(&dist, &scheme.params)),
            );
        }
    } else {
        let ranks = rank_audit(&scheme).map_err(err)?;
        pass = ranks.pass;
        report.insert("rank".into(), to_value(&ranks));
    }
    report.insert("pass".into(), json!(pass));
    Ok(Outcome {
        text: pretty(&Value::Object(report)),
        pass,
    })
}

fn parse_kv(items: &[String]) -> CliResult<Vec<(String, String)>> {
    items
        .iter()
        .map(|s| {
            s.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| format!("expected key=value, got {s:?}"))
        })
        .collect()
}

fn bound_params(a: &BoundArgs) -> CliResult<BTreeMap<String, i64>> {
    let mut params = BTreeMap::new();
    for (k, v) in parse_kv(&a.params)? {
        let v: i64 = v.parse().map_err(|_| format!("invalid value for {k}: {v:?}"))?;
        params.insert(k, v);
    }
    for (key, v) in [
        ("n", a.n),
        ("k", a.k),
        ("l", a.l),
        ("m", a.m),
        ("r", a.r),
        ("delta", a.delta),
        ("x", a.x),
    ] {
        if let Some(v) = v {
            params.insert(key.to_string(), v);
        }
    }
    Ok(params)
}

fn bounds(cmd: BoundsCmd) -> CliResult<Outcome> {
    if let Some(BoundsSub::Sweep(s)) = cmd.sweep {
        return sweep(&s);
    }
    let a = cmd.eval;
    let name = need(a.bound.clone(), "bound")?;
    if !BOUND_NAMES.contains(&name.as_str()) {
        return Err(format!("unknown bound {name:?}; known: {}", BOUND_NAMES.join(", ")));
    }
    let report = evaluate(&name, &bound_params(&a)?).map_err(err)?;
    Ok(Outcome::ok(pretty(&to_value(&report))))
}

fn sweep(s: &SweepArgs) -> CliResult<Outcome> {
    if !BOUND_NAMES.contains(&s.bound.as_str()) {
        return Err(format!("unknown bound {:?}", s.bound));
    }
    let mut axes: Vec<(String, Vec<i64>)> = Vec::new();
    for (k, v) in parse_kv(&s.grid)? {
        let values = match v.split_once("..") {
            Some((lo, hi)) => {
                let lo: i64 = lo.parse().map_err(|_| format!("invalid range {v:?}"))?;
                let hi: i64 = hi.parse().map_err(|_| format!("invalid range {v:?}"))?;
                (lo..=hi).collect()
            }
            None => vec![v.parse().map_err(|_| format!("invalid value {v:?}"))?],
        };
        axes.push((k, values));
    }
    let mut csv = axes.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>().join(",");
    csv.push_str(",value\n");
    let mut idx = vec![0usize; axes.len()];
    if axes.iter().any(|(_, v)| v.is_empty()) {
        return Ok(Outcome::ok(csv));
    }
    loop {
        let params: BTreeMap<String, i64> = axes
            .iter()
            .zip(&idx)
            .map(|((k, v), &i)| (k.clone(), v[i]))
            .collect();
        let cells: Vec<String> = axes.iter().zip(&idx).map(|((_, v), &i)| v[i].to_string()).collect();
        let value = match evaluate(&s.bound, &params) {
            Ok(rep) => match to_value(&rep.value) {
                Value::String(s) => s,
                other => other.to_string(),
            },
            Err(_) => String::new(),
        };
        csv.push_str(&format!("{},{value}\n", cells.join(",")));
        // odometer over the grid, last axis fastest
        let mut d = axes.len();
        loop {
            if d == 0 {
                return Ok(Outcome::ok(csv));
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < axes[d].1.len() {
                break;
            }
            idx[d] = 0;
        }
    }
}

fn graph_cmd(cmd: GraphCmd) -> CliResult<(Outcome, Option<PathBuf>)> {
    Ok(match cmd {
        GraphCmd::Bounds { graph, k, l, output } => {
            let g = load_graph(&graph)?;
            let m = graph_lower_bound_m(&g, k, l).map_err(err)?;
            let mut doc = json!({
                "m_lower_bound": m,
                "k_upper_bound": graph_secrecy_bound(&g, l).map_err(err)?,
                "admissible_set": max_admissible_set(&g).map_err(err)?,
            });
            if g.directed {
                let frac = fractional_cycle_packing(&g).map_err(err)?;
                let int = integral_packing(&g).map_err(err)?;
                doc["fractional_packing"] = json!({
                    "value": frac.value().to_string(), "p": frac.p,
                    "cycles": frac.cycles, "weights": frac.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                });
                doc["integral_packing"] = json!({"value": int.value().to_string(), "cycles": int.cycles});
            } else {
                doc["matching"] = json!(max_matching(&g).map_err(err)?);
            }
            (Outcome::ok(pretty(&doc)), output.out)
        }
        GraphCmd::MatchingScheme { graph, l, p, ext, output } => {
            let g = load_graph(&graph)?;
            let s = build_matching_scheme(&g, l, &field(p, ext)?).map_err(err)?;
            (Outcome::ok(scheme_to_json(&s).map_err(err)?), output.out)
        }
        GraphCmd::CycleScheme { graph, l, p, ext, integral, output } => {
            let g = load_graph(&graph)?;
            let packing = if integral {
                integral_packing(&g)
            } else {
                fractional_cycle_packing(&g)
            }
            .map_err(err)?;
            let s = build_cycle_scheme(&g, &packing, l, &field(p, ext)?).map_err(err)?;
            (Outcome::ok(scheme_to_json(&s).map_err(err)?), output.out)
        }
    })
}

fn coop_cmd(cmd: CoopCmd) -> CliResult<(Outcome, Option<PathBuf>)> {
    Ok(match cmd {
        CoopCmd::Verify { code, r, delta, output } => {
            let c = load_code(&code)?;
            let audit = is_r_delta_repairable(&c, r, delta).map_err(err)?;
            let pass = audit.repairable;
            (Outcome { text: pretty(&to_value(&audit)), pass }, output.out)
        }
        CoopCmd::Build { n, delta, p, output } => {
            let c = build_repetition_coop(&field(p, 1)?, n, delta).map_err(err)?;
            let mut doc = CodeDoc::from_code(&c);
            doc.delta = Some(delta);
            (Outcome::ok(format::to_pretty(&doc).map_err(err)?), output.out)
        }
        CoopCmd::Wrap { code, k, l, ext, r, delta, output } => {
            let c = load_code(&code)?;
            let s = wrap_secure_coop(&c, k, l, ext, r, delta).map_err(err)?;
            (Outcome::ok(scheme_to_json(&s).map_err(err)?), output.out)
        }
    })
}

fn lnc_cmd(cmd: LncCmd) -> CliResult<(Outcome, Option<PathBuf>)> {
    let build = |n: &NetArgs| build_flow_graph(n.n, n.k0, n.m, n.r).map_err(err);
    Ok(match cmd {
        LncCmd::Build { net, output } => {
            let g = build(&net)?;
            (Outcome::ok(pretty(&to_value(&g))), output.out)
        }
        LncCmd::Mincut { net, eavesdropper, l, output } => {
            let g = build(&net)?;
            match eavesdropper {
                Some(tau) => {
                    let cut = eavesdropper_min_cut(&g, &tau, l).map_err(err)?;
                    let doc = json!({"eavesdropper": tau, "l": l, "min_cut": cut});
                    (Outcome { text: pretty(&doc), pass: cut == l as u64 }, output.out)
                }
                None => {
                    let rep = verify_multicast_capacity(&g).map_err(err)?;
                    let single = min_cut(&g, Node::Source, Node::YOut(0)).map_err(err)?;
                    let mut doc = to_value(&rep);
                    doc["single_node_cut"] = json!(single);
                    (Outcome { text: pretty(&doc), pass: rep.pass }, output.out)
                }
            }
        }
        LncCmd::Sample { net, l, p, ext, seed, retries, assignment, output } => {
            let g = build(&net)?;
            let f = field(p, ext)?;
            let (asg, scheme) = sample_lnc(&g, &f, l, seed, retries).map_err(err)?;
            if let Some(path) = assignment {
                write(&path, &pretty(&to_value(&asg)))?;
            }
            eprintln!("accepted after {} failed samples", asg.retries);
            (Outcome::ok(scheme_to_json(&scheme).map_err(err)?), output.out)
        }
    })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    let mut body = text.to_string();
    if !body.ends_with('\n') {
        body.push('\n');
    }
    fs::write(path, body).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> CliResult<bool> {
    let (outcome, out) = match cli.command {
        Command::Construct(a) => {
            let out = a.output.out.clone();
            (construct(a)?, out)
        }
        Command::Encode(a) => {
            let out = a.output.out.clone();
            (encode(a)?, out)
        }
        Command::Decode(a) => {
            let out = a.output.out.clone();
            (decode(a)?, out)
        }
        Command::Repair(a) => {
            let out = a.output.out.clone();
            (repair(a)?, out)
        }
        Command::Audit(a) => {
            let out = a.output.out.clone();
            (audit(a)?, out)
        }
        Command::Bounds(b) => {
            let out = match &b.sweep {
                Some(BoundsSub::Sweep(s)) => s.output.out.clone(),
                None => b.eval.output.out.clone(),
            };
            (bounds(b)?, out)
        }
        Command::Graph(g) => graph_cmd(g)?,
        Command::Coop(c) => coop_cmd(c)?,
        Command::Lnc(l) => lnc_cmd(l)?,
    };
    match out {
        Some(path) => write(&path, &outcome.text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let newline = if outcome.text.ends_with('\n') { "" } else { "\n" };
            // a closed pipe is not an error
            let _ = write!(stdout, "{}{newline}", outcome.text);
        }
    }
    Ok(outcome.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
