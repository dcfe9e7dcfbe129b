use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclotoric::bvector::{bvec, r1_witness, support_form};
use cyclotoric::face::{facet_hyperplane, facets, simplex_halfspaces, Sense};
use cyclotoric::kq::kernel_binomial;
use cyclotoric::lattice::{ehrhart_counts, enumerate_points, h_star_from_counts, EnumConfig};
use cyclotoric::scan::{classify_instance, run_scan, tristate_str, ClassifyOptions, NRange, Rings, ScanRecord, ScanSpec};
use cyclotoric::{gorenstein_witnesses, CycloParams, Error};
use num_bigint::BigInt;
use serde_json::{json, Value};
use std::fmt::Display;
use std::process::ExitCode;
use std::str::FromStr;

// Stdout writes that end quietly when the reader goes away (e.g. `| head`).
macro_rules! println {
    ($($t:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout(), $($t)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
        }
    }};
}

macro_rules! print {
    ($($t:tt)*) => {{
        use std::io::Write;
        if let Err(e) = write!(std::io::stdout(), $($t)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
        }
    }};
}

#[derive(Parser)]
#[command(name = "cyclotoric", version, about = "Toric rings of lattice cyclic polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify K[P] and/or K[Q] for one parameter list
    Classify(ClassifyArgs),
    /// Classify a whole family of gap tuples
    Scan(ScanArgs),
    /// Construct and check explicit witness points
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// List facets with their support forms
    Facets(ParamArgs),
    /// Print the b-vector of an index set
    Bvec(BvecArgs),
    /// Print the kernel binomial (n = d + 2)
    Kernel(ParamArgs),
    /// Print Ehrhart counts and the h*-vector
    Hstar(ParamArgs),
    /// List lattice points of a dilation
    Points(PointsArgs),
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Dimension
    #[arg(long)]
    d: usize,
    /// Comma-separated strictly increasing integers
    #[arg(long, allow_hyphen_values = true)]
    tau: String,
    /// Emit JSON
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ring {
    Kp,
    Kq,
    Both,
}

impl Ring {
    fn rings(self) -> Rings {
        match self {
            Ring::Kp => Rings::KP,
            Ring::Kq => Rings::KQ,
            Ring::Both => Rings::BOTH,
        }
    }
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value = "both")]
    ring: Ring,
    /// Run the exact Gorenstein oracle
    #[arg(long)]
    oracle: bool,
    /// Highest degree compared in normality checks (default d)
    #[arg(long)]
    max_degree: Option<usize>,
    /// Skip the K[Q] brute force
    #[arg(long)]
    no_bruteforce: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Range of d, e.g. 2..4 or 3
    #[arg(long)]
    d: String,
    /// Range of n, absolute (3..5) or relative to d (d+1..d+3)
    #[arg(long)]
    n: String,
    #[arg(long)]
    max_gap: u64,
    #[arg(long, value_enum, default_value = "both")]
    ring: Ring,
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long)]
    no_bruteforce: bool,
    /// Worker threads (0 = machine parallelism)
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// JSONL output path (default standard output)
    #[arg(long)]
    out: Option<String>,
    /// Findings JSONL path
    #[arg(long)]
    findings: Option<String>,
    /// CSV summary path
    #[arg(long)]
    csv: Option<String>,
    /// Summary JSON path (default standard error)
    #[arg(long)]
    summary: Option<String>,
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Height-one point above a facet
    R1 {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        facet: String,
        #[arg(long)]
        apex: Option<usize>,
    },
    /// Interior points ruling out the Gorenstein property
    Gorenstein {
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Args)]
struct BvecArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Comma-separated 1-based indices
    #[arg(long)]
    set: String,
}

#[derive(Args)]
struct PointsArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 1)]
    k: u64,
    #[arg(long)]
    interior: bool,
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn usage(msg: impl Display) -> Failure {
    Failure::Usage(msg.to_string())
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn parse_tau(s: &str) -> CliResult<Vec<BigInt>> {
    s.split(',')
        .map(|t| BigInt::from_str(t.trim()).map_err(|_| usage(format!("malformed tau entry {t:?}"))))
        .collect()
}

fn parse_indices(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| usage(format!("malformed index {t:?}"))))
        .collect()
}

fn build(args: &ParamArgs) -> CliResult<CycloParams> {
    Ok(CycloParams::new(args.d, parse_tau(&args.tau)?)?)
}

fn parse_range(s: &str) -> CliResult<(String, String)> {
    match s.split_once("..") {
        Some((a, b)) => Ok((a.trim().to_string(), b.trim().to_string())),
        None => Ok((s.trim().to_string(), s.trim().to_string())),
    }
}

fn parse_usize(s: &str) -> CliResult<usize> {
    s.parse().map_err(|_| usage(format!("malformed bound {s:?}")))
}

fn parse_n_range(s: &str) -> CliResult<NRange> {
    let (a, b) = parse_range(s)?;
    let rel = |x: &str| x.strip_prefix("d+").map(parse_usize).transpose();
    match (rel(&a)?, rel(&b)?) {
        (Some(lo), Some(hi)) => Ok(NRange::Offset(lo, hi)),
        (None, None) => Ok(NRange::Absolute(parse_usize(&a)?, parse_usize(&b)?)),
        _ => Err(usage("n range must be all absolute or all relative to d")),
    }
}

fn budget() -> u64 {
    EnumConfig::from_env().budget
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn ints(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn record_json(rec: &ScanRecord, rings: Rings) -> Value {
    let mut v = if rings.kp && !rings.kq {
        serde_json::to_value(rec.kp.as_ref().unwrap()).unwrap()
    } else if rings.kq && !rings.kp {
        serde_json::to_value(rec.kq.as_ref().unwrap()).unwrap()
    } else {
        json!({ "params": rec.params, "kp": rec.kp, "kq": rec.kq })
    };
    let obj = v.as_object_mut().unwrap();
    obj.insert("schema".into(), json!(rec.schema));
    obj.insert("findings".into(), serde_json::to_value(&rec.findings).unwrap());
    v
}

fn classify(a: ClassifyArgs) -> CliResult {
    let p = build(&a.params)?;
    let opts = ClassifyOptions {
        rings: a.ring.rings(),
        oracle: a.oracle,
        max_degree: a.max_degree,
        budget: budget(),
        bruteforce: !a.no_bruteforce,
    };
    let rec = classify_instance(&p, &opts)?;
    if a.params.json {
        print_json(&record_json(&rec, opts.rings));
        return Ok(());
    }
    println!("{p}");
    if let Some(k) = &rec.kp {
        println!("K[P]");
        println!("  normal              {}", k.normal);
        if let Some(w) = &k.nonnormal_witness {
            println!("  nonnormal witness   {}", ints(&w.coords));
        }
        println!("  cohen_macaulay      {}", k.cohen_macaulay);
        println!("  s2 / seminormal     {} / {}", k.s2, k.seminormal);
        println!("  r1                  {}", k.r1);
        println!("  gorenstein_theorem  {}", k.gorenstein_theorem);
        if let Some(o) = &k.gorenstein_oracle {
            let g = o.generator.as_ref().map(|g| ints(&g.coords)).unwrap_or_else(|| "-".into());
            println!("  gorenstein_oracle   {} (generator {g})", o.status.as_str());
        }
        println!("  h*                  {}", ints(&k.h_star.h));
        println!("  interior points     {}", k.interior_k1);
        if let Some(d) = &k.discrepancy {
            println!("  discrepancy         {d}");
        }
    }
    if let Some(q) = &rec.kq {
        println!("K[Q]");
        println!("  case                {}", q.case.as_str());
        println!("  normal              {}", tristate_str(q.normal));
        println!("  complete_int.       {}", q.complete_intersection);
        println!("  evidence            {}", serde_json::to_string(&q.evidence).unwrap());
        println!("  [Z^(d+1) : ZQ]      {}", q.lattice_index);
        if let Some(c) = &q.kernel {
            println!("  kernel              {}", ints(c));
        }
    }
    for f in &rec.findings {
        println!("finding {}: {}", f.kind.as_str(), f.details);
    }
    Ok(())
}

fn write_or(path: &Option<String>, content: &str, fallback: impl FnOnce(&str)) -> CliResult {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| usage(format!("cannot write {p}: {e}"))),
        None => {
            fallback(content);
            Ok(())
        }
    }
}

fn scan(a: ScanArgs) -> CliResult {
    let (dl, dh) = parse_range(&a.d)?;
    let spec = ScanSpec {
        d_range: (parse_usize(&dl)?, parse_usize(&dh)?),
        n_range: parse_n_range(&a.n)?,
        max_gap: a.max_gap,
        classify: ClassifyOptions {
            rings: a.ring.rings(),
            oracle: a.oracle,
            max_degree: a.max_degree,
            budget: budget(),
            bruteforce: !a.no_bruteforce,
        },
    };
    let out = run_scan(&spec, a.threads)?;
    write_or(&a.out, &out.jsonl(), |s| print!("{s}"))?;
    if a.findings.is_some() {
        write_or(&a.findings, &out.findings_jsonl(), |_| {})?;
    }
    if a.csv.is_some() {
        write_or(&a.csv, &out.csv(), |_| {})?;
    }
    let summary = serde_json::to_string_pretty(&out.summary).unwrap() + "\n";
    write_or(&a.summary, &summary, |s| eprint!("{s}"))
}

fn witness_r1(params: ParamArgs, facet: String, apex: Option<usize>) -> CliResult {
    let p = build(&params)?;
    let w = parse_indices(&facet)?;
    let form = support_form(&w, &p)?;
    let apexes: Vec<usize> = match apex {
        Some(k) => vec![k],
        None => (1..=p.n()).filter(|k| !form.facet_indices.contains(k)).collect(),
    };
    let mut chosen = None;
    for &k in &apexes {
        let x = r1_witness(&w, k, &p)?;
        let good = x.holds();
        if chosen.is_none() || good {
            chosen = Some(x);
        }
        if good {
            break;
        }
    }
    let x = chosen.ok_or_else(|| usage("no apex outside the facet"))?;
    if params.json {
        print_json(&json!({
            "schema": 1,
            "facet": x.facet,
            "apex": x.apex,
            "point": cyclotoric::json::vec_to_value(&x.point),
            "sigma": cyclotoric::json::to_value(&x.sigma),
            "coefficients": x.coefficients.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "in_cone": x.in_cone,
            "pass": x.holds(),
        }));
        return Ok(());
    }
    println!("facet {:?}, apex {}", x.facet, x.apex);
    println!("support form {}", ints(&form.normal));
    println!("x = {}", ints(&x.point));
    let coeffs: Vec<String> = x.coefficients.iter().map(ToString::to_string).collect();
    println!("coefficients over W+apex: ({})", coeffs.join(", "));
    println!("sigma = {}  {}", x.sigma, pass(x.sigma == BigInt::from(1)));
    println!("in_cone = {}  {}", x.in_cone, pass(x.in_cone));
    println!("{}", pass(x.holds()));
    Ok(())
}

fn witness_gorenstein(params: ParamArgs) -> CliResult {
    let p = build(&params)?;
    let w = gorenstein_witnesses(&p)?;
    if params.json {
        let mut v = serde_json::to_value(&w).unwrap();
        v.as_object_mut().unwrap().insert("schema".into(), json!(1));
        print_json(&v);
        return Ok(());
    }
    println!("branch {} on sub-simplex {:?}{}", w.branch, w.sub_simplex, if w.reversed { " (reversed)" } else { "" });
    if w.oracle_needed {
        println!("no explicit points for this branch; run `classify --oracle`");
        return Ok(());
    }
    let sub = p.restrict(&w.sub_simplex)?;
    let q = if w.reversed { cyclotoric::reverse_negate(&sub) } else { sub };
    let hs = simplex_halfspaces(&q)?;
    for ((fp, x), sl) in w.frame_points.iter().zip(&w.points).zip(&w.slacks) {
        let ok = sl.iter().all(|s| s > &BigInt::from(0));
        println!("point {} (moment coordinates {})", ints(&fp.coords), ints(&x.coords));
        for (h, s) in hs.iter().zip(sl) {
            println!("  {} {} {}: slack {s}", ints(&h.normal), match h.sense { Sense::Geq => ">=", Sense::Leq => "<=" }, h.rhs);
        }
        println!("  strictly interior  {}", pass(ok));
    }
    println!("{}", pass(w.verified));
    Ok(())
}

fn facets_cmd(a: ParamArgs) -> CliResult {
    let p = build(&a)?;
    let list: Vec<_> = facets(&p)
        .iter()
        .map(|w| facet_hyperplane(w, &p))
        .collect::<Result<_, _>>()?;
    if a.json {
        print_json(&json!({ "schema": 1, "params": p, "facets": list }));
        return Ok(());
    }
    for h in list {
        println!("{:?}  {} >= 0", h.facet_indices.unwrap(), ints(&h.normal));
    }
    Ok(())
}

fn bvec_cmd(a: BvecArgs) -> CliResult {
    let p = build(&a.params)?;
    let b = bvec(&parse_indices(&a.set)?, &p)?;
    if a.params.json {
        print_json(&json!({ "schema": 1, "index_set": b.index_set, "value": cyclotoric::json::vec_to_value(&b.value) }));
    } else {
        println!("b_{:?} = {}", b.index_set, ints(&b.value));
    }
    Ok(())
}

fn kernel_cmd(a: ParamArgs) -> CliResult {
    let p = build(&a)?;
    let k = kernel_binomial(&p)?;
    if a.json {
        let mut v = serde_json::to_value(&k).unwrap();
        v.as_object_mut().unwrap().insert("schema".into(), json!(1));
        print_json(&v);
    } else {
        let (u, v) = k.monomials();
        println!("c = {}", ints(&k.c));
        println!("u = {u}  (squarefree {})", k.u_squarefree);
        println!("v = {v}  (squarefree {})", k.v_squarefree);
        println!("degree {}", k.degree);
    }
    Ok(())
}

fn hstar_cmd(a: ParamArgs) -> CliResult {
    let p = build(&a)?;
    let counts = ehrhart_counts(&p, p.d() as u64, &EnumConfig::from_env())?;
    let h = h_star_from_counts(p.d(), &counts);
    if a.json {
        print_json(&json!({ "schema": 1, "ehrhart": counts, "h_star": h, "palindromic": h.is_palindromic() }));
    } else {
        println!("L(0..d) = {counts:?}");
        println!("h* = {}  palindromic {}", ints(&h.h), h.is_palindromic());
    }
    Ok(())
}

fn points_cmd(a: PointsArgs) -> CliResult {
    let p = build(&a.params)?;
    let pts = enumerate_points(&p, a.k, a.interior, &EnumConfig::from_env())?;
    if a.params.json {
        print_json(&json!({ "schema": 1, "k": a.k, "interior": a.interior, "points": pts }));
    } else {
        for x in &pts {
            println!("{}", ints(&x.coords));
        }
        println!("{} points", pts.len());
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Classify(a) => classify(a),
        Command::Scan(a) => scan(a),
        Command::Witness(WitnessCmd::R1 { params, facet, apex }) => witness_r1(params, facet, apex),
        Command::Witness(WitnessCmd::Gorenstein { params }) => witness_gorenstein(params),
        Command::Facets(a) => facets_cmd(a),
        Command::Bvec(a) => bvec_cmd(a),
        Command::Kernel(a) => kernel_cmd(a),
        Command::Hstar(a) => hstar_cmd(a),
        Command::Points(a) => points_cmd(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
