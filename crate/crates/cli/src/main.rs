use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use hecke::cells::{a_function, rs_cells, tableau_label, InvolutionHasse, Order};
use hecke::hecke::{Coords, KLCache};
use hecke::kahrstrom::{self, Kahrstrom, Mode};
use hecke::report::{Report, Severity};
use hecke::rs::rs_shape;
use hecke::submod::{self, Basis};
use hecke::{verify, HeckeAlgebra, HeckeElt, Parabolic, Perm, WeylGroup};
use serde_json::{json, Map, Value};

/// Writes to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! out_raw {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "hecke", version, about = "Kazhdan-Lusztig combinatorics for Hecke algebras of symmetric groups")]
struct Cli {
    /// Rank: work in the Hecke algebra of S_n.
    #[arg(long, short, global = true)]
    n: Option<usize>,
    /// Directory holding one KL cache file per rank.
    #[arg(long, global = true, env = "HECKE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Permit n > 6.
    #[arg(long, global = true)]
    allow_large: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ElementBasis {
    Standard,
    Kl,
    Dualkl,
    Tilting,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModuleBasis {
    Kl,
    Dualkl,
}

impl From<ModuleBasis> for Basis {
    fn from(b: ModuleBasis) -> Basis {
        match b {
            ModuleBasis::Kl => Basis::Kl,
            ModuleBasis::Dualkl => Basis::DualKl,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Left,
    Right,
    TwoSided,
}

impl From<OrderArg> for Order {
    fn from(o: OrderArg) -> Order {
        match o {
            OrderArg::Left => Order::Left,
            OrderArg::Right => Order::Right,
            OrderArg::TwoSided => Order::TwoSided,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CyclicCheck {
    Rank,
    Membership,
    EqualsLm,
    EqualsLn,
    QuasiIdempotent,
    #[value(name = "cor3345-survey")]
    Survey,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Graded,
    Ungraded,
    Both,
}

impl ModeArg {
    fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Graded => vec![Mode::Graded],
            ModeArg::Ungraded => vec![Mode::Ungraded],
            ModeArg::Both => Mode::BOTH.to_vec(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scan {
    Invariance,
    Variation,
    Necessary,
    Parabolic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CacheAction {
    Build,
    Info,
}

#[derive(Subcommand)]
enum Command {
    /// Expansions of basis elements in the standard basis.
    Klbasis {
        #[arg(long)]
        w: Option<String>,
        #[arg(long, value_enum, default_value = "kl")]
        basis: ElementBasis,
    },
    /// Product of two basis elements, expressed in the same basis.
    Mult {
        #[arg(long, value_enum, default_value = "kl")]
        basis: ElementBasis,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// All structure constants of the KL or dual KL basis.
    Structconsts {
        #[arg(long, value_enum, default_value = "kl")]
        basis: ModuleBasis,
    },
    /// Cells of a KL preorder.
    Cells {
        #[arg(long, value_enum, default_value = "left")]
        order: OrderArg,
    },
    /// Hasse diagram of the left order on involutions.
    Hasse,
    /// The a-function.
    Afunc,
    /// Cyclic submodules generated by a basis element.
    Cyclic {
        #[arg(long)]
        gen: Option<String>,
        #[arg(long, value_enum, default_value = "kl")]
        basis: ModuleBasis,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, value_enum, default_value = "rank")]
        check: CyclicCheck,
    },
    /// Kahrstrom conditions and the scans built on them.
    Kahrstrom {
        #[arg(long, conflicts_with = "all")]
        w: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
        #[arg(long, value_enum)]
        scan: Option<Scan>,
        /// Random triples for the necessary-condition scan; 0 means exhaustive.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = verify::SAMPLE_SEED)]
        seed: u64,
        /// Also write the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Runs a named check suite, or "all".
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Builds or inspects the persistent KL cache.
    Cache {
        #[arg(value_enum, default_value = "build")]
        action: CacheAction,
    },
}

type CliResult<T> = std::result::Result<T, String>;

/// Exit status: 0 all asserted checks pass, 1 an asserted check failed,
/// 2 only reported checks (open statements) failed.
fn status(report: &Report) -> u8 {
    if !report.ok() {
        1
    } else if report.checks.iter().any(|c| c.severity == Severity::Reported && !c.passed) {
        2
    } else {
        0
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().map_err(|e| e.to_string())?;
    }
    let n = cli.n.ok_or("--n is required")?;
    if n == 0 {
        return Err("n must be at least 1".into());
    }
    if n > 6 && !cli.allow_large {
        return Err(format!("n = {n} is above 6; pass --allow-large to proceed"));
    }
    let format = cli.format.unwrap_or(match cli.command {
        Command::Hasse => Format::Dot,
        _ => Format::Table,
    });
    let load = || -> CliResult<HeckeAlgebra> {
        match &cli.cache_dir {
            Some(dir) => HeckeAlgebra::with_cache_dir(n, dir).map_err(|e| e.to_string()),
            None => Ok(HeckeAlgebra::new(n)),
        }
    };
    let perm = |s: &str| Perm::parse(s, n).map_err(|e| e.to_string());
    let ctx = Ctx { n, format };

    match &cli.command {
        Command::Cache { action } => cache_cmd(&ctx, cli.cache_dir.as_ref().ok_or("cache needs --cache-dir or HECKE_CACHE_DIR")?, *action),
        Command::Klbasis { w, basis } => {
            let alg = load()?;
            let ws = match w {
                Some(w) => vec![perm(w)?],
                None => alg.group().elements().to_vec(),
            };
            klbasis(&ctx, &alg, &ws, *basis)
        }
        Command::Mult { basis, x, y } => mult(&ctx, &load()?, *basis, &perm(x)?, &perm(y)?),
        Command::Structconsts { basis } => structconsts(&ctx, &load()?, (*basis).into()),
        Command::Cells { order } => cells(&ctx, &load()?, (*order).into()),
        Command::Hasse => {
            let alg = load()?;
            let hasse = InvolutionHasse::new(&alg, alg.preorder(Order::Left));
            match format {
                Format::Json => emit_json(&json!({"version": 1, "n": n, "involutions": hasse.involutions, "edges": hasse.edges})),
                _ => out_raw!("{}", hasse.to_dot()),
            }
            Ok(0)
        }
        Command::Afunc => afunc(&ctx, &load()?),
        Command::Cyclic { gen, basis, target, check } => {
            let alg = load()?;
            let gen = gen.as_deref().map(perm).transpose()?;
            let target = target.as_deref().map(perm).transpose()?;
            cyclic(&ctx, &alg, gen, (*basis).into(), target, *check)
        }
        Command::Kahrstrom { w, all, mode, scan, samples, seed, json } => {
            let alg = load()?;
            let w = w.as_deref().map(perm).transpose()?;
            let opts = KhOptions { w, all: *all, modes: mode.modes(), scan: *scan, samples: *samples, seed: *seed, json: json.clone() };
            kahrstrom_cmd(&ctx, &alg, opts)
        }
        Command::Verify { suite } => {
            let alg = load()?;
            let report = verify::run_suite(&alg, suite).map_err(|e| e.to_string())?;
            emit_report(&ctx, &report);
            Ok(if report.ok() { 0 } else { 1 })
        }
    }
}

struct Ctx {
    n: usize,
    format: Format,
}

fn emit_json(v: &Value) {
    out!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn emit_report(ctx: &Ctx, report: &Report) {
    match ctx.format {
        Format::Json => emit_json(&serde_json::to_value(report).expect("serializable")),
        _ => out_raw!("{report}"),
    }
}

/// Coordinates as a JSON object, keys in length-lex order.
fn coords_json(c: &Coords) -> Value {
    let mut terms: Vec<_> = c.iter().collect();
    terms.sort_by(|a, b| a.0.cmp_length_lex(b.0));
    let mut m = Map::new();
    for (w, p) in terms {
        m.insert(w.to_string(), serde_json::to_value(p).expect("serializable"));
    }
    Value::Object(m)
}

/// `(v)C[123] + (1)C[213]`, or `0`.
fn coords_text(c: &Coords, symbol: &str) -> String {
    let mut terms: Vec<_> = c.iter().collect();
    terms.sort_by(|a, b| a.0.cmp_length_lex(b.0));
    if terms.is_empty() {
        return "0".into();
    }
    terms.iter().map(|(w, p)| format!("({p}){symbol}[{w}]")).collect::<Vec<_>>().join(" + ")
}

fn symbol(b: ElementBasis) -> &'static str {
    match b {
        ElementBasis::Standard => "H",
        ElementBasis::Kl => "C",
        ElementBasis::Dualkl => "D",
        ElementBasis::Tilting => "T",
    }
}

fn basis_name(b: ElementBasis) -> &'static str {
    match b {
        ElementBasis::Standard => "standard",
        ElementBasis::Kl => "kl",
        ElementBasis::Dualkl => "dualkl",
        ElementBasis::Tilting => "tilting",
    }
}

fn element(alg: &HeckeAlgebra, b: ElementBasis, w: &Perm) -> CliResult<HeckeElt> {
    match b {
        ElementBasis::Standard => alg.standard(w),
        ElementBasis::Kl => alg.kl_element(w),
        ElementBasis::Dualkl => alg.dual_kl_element(w),
        ElementBasis::Tilting => alg.tilting_element(w),
    }
    .map_err(|e| e.to_string())
}

fn to_basis(alg: &HeckeAlgebra, b: ElementBasis, x: &HeckeElt) -> CliResult<Coords> {
    match b {
        ElementBasis::Standard => Ok(x.coords().clone()),
        ElementBasis::Kl => alg.to_kl_coords(x),
        ElementBasis::Dualkl => alg.to_dual_kl_coords(x),
        ElementBasis::Tilting => alg.to_tilting_coords(x),
    }
    .map_err(|e| e.to_string())
}

fn klbasis(ctx: &Ctx, alg: &HeckeAlgebra, ws: &[Perm], basis: ElementBasis) -> CliResult<u8> {
    let mut rows = Vec::new();
    for w in ws {
        rows.push((*w, element(alg, basis, w)?));
    }
    match ctx.format {
        Format::Json => {
            let mut m = Map::new();
            for (w, e) in &rows {
                m.insert(w.to_string(), coords_json(e.coords()));
            }
            emit_json(&json!({"version": 1, "n": ctx.n, "basis": basis_name(basis), "elements": m}));
        }
        _ => {
            for (w, e) in &rows {
                out!("{}[{w}] = {e}", symbol(basis));
            }
        }
    }
    Ok(0)
}

fn mult(ctx: &Ctx, alg: &HeckeAlgebra, basis: ElementBasis, x: &Perm, y: &Perm) -> CliResult<u8> {
    let p = alg.mul(&element(alg, basis, x)?, &element(alg, basis, y)?).map_err(|e| e.to_string())?;
    let c = to_basis(alg, basis, &p)?;
    let sym = symbol(basis);
    match ctx.format {
        Format::Json => emit_json(&json!({
            "version": 1, "n": ctx.n, "basis": basis_name(basis),
            "x": x, "y": y, "product": coords_json(&c),
        })),
        _ => out!("{sym}[{x}] {sym}[{y}] = {}", coords_text(&c, sym)),
    }
    Ok(0)
}

fn structconsts(ctx: &Ctx, alg: &HeckeAlgebra, basis: Basis) -> CliResult<u8> {
    let g = alg.group();
    let size = alg.size() as u32;
    let eb = match basis {
        Basis::Kl => ElementBasis::Kl,
        Basis::DualKl => ElementBasis::Dualkl,
    };
    let mut rows = Vec::new();
    for x in 0..size {
        for y in 0..size {
            let prod = match basis {
                Basis::Kl => alg.kl_products().product(x, y).clone(),
                Basis::DualKl => alg.dual_coords_sparse(&alg.mul_sparse(alg.dual_sparse(x), alg.dual_sparse(y))),
            };
            rows.push((g.element(x), g.element(y), alg.coords_from_sparse(&prod)));
        }
    }
    match ctx.format {
        Format::Json => {
            let table: Vec<Value> =
                rows.iter().map(|(x, y, c)| json!({"x": x, "y": y, "product": coords_json(c)})).collect();
            emit_json(&json!({"version": 1, "n": ctx.n, "basis": basis.name(), "table": table}));
        }
        _ => {
            let sym = symbol(eb);
            for (x, y, c) in &rows {
                out!("{sym}[{x}] {sym}[{y}] = {}", coords_text(c, sym));
            }
        }
    }
    Ok(0)
}

fn cells(ctx: &Ctx, alg: &HeckeAlgebra, order: Order) -> CliResult<u8> {
    let decomposition = alg.preorder(order).cells();
    let agrees = decomposition.as_partition(alg) == rs_cells(ctx.n, order);
    match ctx.format {
        Format::Json => emit_json(&serde_json::to_value(decomposition.to_json(alg)).expect("serializable")),
        Format::Dot => {
            out!("digraph cells {{\n  rankdir=BT;");
            for (i, c) in decomposition.classes.iter().enumerate() {
                let names: Vec<String> = c.iter().map(|&w| alg.group().element(w).to_string()).collect();
                out!("  {i} [label=\"{}\"];", names.join(" "));
            }
            for (a, b) in &decomposition.hasse {
                out!("  {a} -> {b};");
            }
            out!("}}");
        }
        Format::Table => {
            for (i, c) in decomposition.classes.iter().enumerate() {
                let names: Vec<String> = c.iter().map(|&w| alg.group().element(w).to_string()).collect();
                out!("{i}: {}", names.join(" "));
            }
            for (a, b) in &decomposition.hasse {
                out!("{a} < {b}");
            }
        }
    }
    if !agrees {
        eprintln!("cells disagree with Robinson-Schensted");
        return Ok(1);
    }
    Ok(0)
}

fn afunc(ctx: &Ctx, alg: &HeckeAlgebra) -> CliResult<u8> {
    let a = a_function(alg);
    let g = alg.group();
    match ctx.format {
        Format::Json => {
            let rows: Vec<Value> = g
                .elements()
                .iter()
                .zip(&a)
                .map(|(w, a)| json!({"w": w, "a": a, "shape": rs_shape(w).0, "tableau": tableau_label(w)}))
                .collect();
            emit_json(&json!({"version": 1, "n": ctx.n, "a": rows}));
        }
        _ => {
            for (w, a) in g.elements().iter().zip(&a) {
                out!("{w} {a} {:?}", rs_shape(w).0);
            }
        }
    }
    Ok(0)
}

fn cyclic(ctx: &Ctx, alg: &HeckeAlgebra, gen: Option<Perm>, basis: Basis, target: Option<Perm>, check: CyclicCheck) -> CliResult<u8> {
    let need_gen = || gen.ok_or_else(|| "--gen is required for this check".to_string());
    let out: Value = match check {
        CyclicCheck::Rank => {
            let g = need_gen()?;
            let m = submod::cyclic_basis_element(alg, &g, basis).map_err(|e| e.to_string())?;
            let support: Vec<Perm> = m.support().into_iter().map(|i| alg.group().element(i)).collect();
            json!({"version": 1, "n": ctx.n, "gen": g, "basis": basis.name(), "rank": m.rank(), "support": support})
        }
        CyclicCheck::Membership => {
            let g = need_gen()?;
            let t = target.ok_or("--target is required for membership")?;
            let m = submod::cyclic_basis_element(alg, &g, basis).map_err(|e| e.to_string())?;
            let target_elt = match basis {
                Basis::Kl => alg.kl_element(&t),
                Basis::DualKl => alg.dual_kl_element(&t),
            }
            .map_err(|e| e.to_string())?;
            let verdict = m.membership(&target_elt).map_err(|e| e.to_string())?;
            json!({"version": 1, "n": ctx.n, "gen": g, "basis": basis.name(), "target": t, "result": verdict})
        }
        CyclicCheck::EqualsLm | CyclicCheck::EqualsLn => {
            let g = need_gen()?;
            let cmp = if check == CyclicCheck::EqualsLm { submod::compare_lm(alg, &g) } else { submod::compare_ln_dual(alg, &g) }
                .map_err(|e| e.to_string())?;
            let mut v = serde_json::to_value(&cmp).expect("serializable");
            v["version"] = json!(1);
            v["equal"] = json!(cmp.equal());
            v
        }
        CyclicCheck::QuasiIdempotent => {
            let g = need_gen()?;
            let q = submod::quasi_idempotent_check(alg, &g).map_err(|e| e.to_string())?;
            let expected = submod::parabolic_of_longest(&g).map(|p| submod::parabolic_scalar(&p));
            json!({"version": 1, "n": ctx.n, "gen": g, "scalar": q, "parabolic_scalar": expected})
        }
        CyclicCheck::Survey => serde_json::to_value(submod::coideal_survey(alg).map_err(|e| e.to_string())?).expect("serializable"),
    };
    match ctx.format {
        Format::Json => emit_json(&out),
        _ => print_flat(&out, ""),
    }
    Ok(0)
}

/// `key: value` lines for a JSON object, nested keys joined by dots.
fn print_flat(v: &Value, prefix: &str) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                match x {
                    Value::Object(_) if !x.as_object().is_some_and(|o| o.keys().all(|k| k.parse::<i32>().is_ok())) => print_flat(x, &key),
                    _ => out!("{key}: {x}"),
                }
            }
        }
        _ => out!("{prefix}: {v}"),
    }
}

struct KhOptions {
    w: Option<Perm>,
    all: bool,
    modes: Vec<Mode>,
    scan: Option<Scan>,
    samples: Option<usize>,
    seed: u64,
    json: Option<PathBuf>,
}

fn kahrstrom_cmd(ctx: &Ctx, alg: &HeckeAlgebra, opts: KhOptions) -> CliResult<u8> {
    let kh = Kahrstrom::new(alg);
    let err = |e: hecke::Error| e.to_string();
    let mut verdicts = Vec::new();
    let mut report = Report::new(format!("Kahrstrom conditions on S_{}", ctx.n));
    if let Some(w) = &opts.w {
        verdicts.push(kh.verdict(w).map_err(err)?);
    }
    let needs_table = opts.all || matches!(opts.scan, Some(Scan::Invariance | Scan::Variation)) || (opts.w.is_none() && opts.scan.is_none());
    let table = if needs_table { kh.table() } else { Vec::new() };
    if opts.all || (opts.w.is_none() && opts.scan.is_none()) {
        report.extend(kahrstrom::kh_report(&kh, &table).map_err(err)?);
        verdicts = table.iter().filter(|v| opts.modes.iter().any(|&m| v.holds(m))).cloned().collect();
    }
    match opts.scan {
        None => {}
        Some(Scan::Invariance) => {
            for &m in &opts.modes {
                report.extend(kahrstrom::scan_left_cell_invariance(&kh, &table, m).map_err(err)?);
            }
        }
        Some(Scan::Variation) => {
            for &m in &opts.modes {
                report.extend(kahrstrom::scan_witness_variation(&kh, &table, m).map_err(err)?);
            }
        }
        Some(Scan::Necessary) => {
            let samples = match opts.samples {
                Some(0) => None,
                Some(k) => Some((k, opts.seed)),
                None if ctx.n <= 4 => None,
                None => Some((verify::SAMPLE_TRIPLES, opts.seed)),
            };
            report.extend(kahrstrom::check_necessary_conditions(&kh, samples));
        }
        Some(Scan::Parabolic) => {
            for j in Parabolic::all_standard(ctx.n) {
                for &m in &opts.modes {
                    report.extend(kahrstrom::parabolic_induction_check(alg, &j, m).map_err(err)?);
                }
            }
        }
    }
    let modes: Vec<&str> = opts.modes.iter().map(|m| m.name()).collect();
    let out = json!({"version": 1, "n": ctx.n, "modes": modes, "verdicts": verdicts, "report": report});
    if let Some(path) = &opts.json {
        std::fs::write(path, serde_json::to_string_pretty(&out).expect("serializable")).map_err(|e| e.to_string())?;
    }
    match ctx.format {
        Format::Json => emit_json(&out),
        _ => {
            for v in &verdicts {
                for &m in &opts.modes {
                    let first = v.witnesses(m).first().map(|(x, y)| format!(" first witness ({x}, {y})")).unwrap_or_default();
                    out!("{} {}: {}{first}", v.w, m.name(), v.holds(m));
                }
            }
            if !report.checks.is_empty() {
                out_raw!("{report}");
            }
        }
    }
    Ok(status(&report))
}

fn cache_cmd(ctx: &Ctx, dir: &PathBuf, action: CacheAction) -> CliResult<u8> {
    let path = dir.join(KLCache::file_name(ctx.n));
    let group = std::sync::Arc::new(WeylGroup::full(ctx.n));
    let start = Instant::now();
    let (cache, built) = match action {
        CacheAction::Build if !path.exists() => {
            let c = KLCache::build(group);
            c.save(dir).map_err(|e| e.to_string())?;
            (c, true)
        }
        _ if path.exists() => (KLCache::load(dir, group).map_err(|e| e.to_string())?, false),
        _ => return Err(format!("no cache file at {}", path.display())),
    };
    cache.validate().map_err(|e| e.to_string())?;
    let stats = cache.degree_statistics();
    let out = json!({
        "version": 1, "n": ctx.n, "path": path, "built": built,
        "seconds": start.elapsed().as_secs_f64(), "statistics": stats,
    });
    match ctx.format {
        Format::Json => emit_json(&out),
        _ => print_flat(&out, ""),
    }
    Ok(0)
}
