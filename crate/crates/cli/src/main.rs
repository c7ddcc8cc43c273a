use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use linext::generators as gen;
use linext::io::{grid_to_json, parse_input, poset_to_json, two_chain_to_json, Input};
use linext::lattice::{sample_extensions, DownsetLattice};
use linext::mc;
use linext::poset::{comparability_profile, Poset};
use linext::ratio::{fmt, to_f64, RationalRepr};
use linext::stats::SummaryReport;
use linext::two_chain::make_two_chain;
use linext::verify::{run_suite, trend_experiment, SuiteOptions, TrendFamily};
use linext::{BigRational, Error};

#[derive(Parser)]
#[command(name = "linext", version, about = "Exact analytics for linear extensions of finite posets")]
struct Cli {
    /// Node budget for the downset lattice.
    #[arg(long, global = true, default_value_t = linext::lattice::DEFAULT_NODE_BUDGET)]
    budget_nodes: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extension count, width, range, balance and variance of a poset file.
    Analyze {
        file: PathBuf,
        /// Per-element table.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        json: bool,
        /// Estimate with the Markov chain instead of the exact engine.
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long)]
        burn_in: Option<u64>,
    },
    /// Print a member of a poset family as JSON.
    ///
    /// Families: chain N, antichain N, chain-plus-point N, two-equal-chains N,
    /// young PARTS, skew PARTS PARTS, grid-ideal D GEN..., tripod D L,
    /// tightness SIZE, random N P, two-chain M N.
    Generate {
        family: String,
        params: Vec<String>,
        /// Cross relation x_i < y_j for two-chain, as i:j.
        #[arg(long)]
        cross: Vec<String>,
        /// Emit the grid format for grid families.
        #[arg(long)]
        grid: bool,
    },
    /// Run a verification suite and print one JSON record per check.
    Verify {
        suite: String,
        /// Number of random instances.
        #[arg(long)]
        random: Option<usize>,
        /// Largest random poset size.
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Corpus for corpus-based suites (only "builtin").
        #[arg(long)]
        corpus: Option<String>,
    },
    /// Trend table for a family: rect2xk, chainpoint or twochains.
    Experiment {
        name: String,
        /// Comma-separated sizes.
        sizes: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print sampled linear extensions, one per line.
    Sample {
        file: PathBuf,
        count: usize,
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        #[arg(long)]
        mc: bool,
        #[arg(long)]
        burn_in: Option<u64>,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
    Checks(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::SizeBudgetExceeded { .. } => {
                Failure::Budget(format!("{e}; raise --budget-nodes or use --mc"))
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CmdResult = std::result::Result<String, Failure>;

fn usage<T>(msg: impl Into<String>) -> std::result::Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn read_input(path: &PathBuf) -> std::result::Result<Input, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_input(&text)?)
}

fn decimal(q: &BigRational) -> String {
    format!("{} ({:.6})", fmt(q), to_f64(q))
}

fn analyze(cli: &Cli, file: &PathBuf, full: bool, json: bool, mc_mode: bool, samples: u64, burn_in: Option<u64>) -> CmdResult {
    let input = read_input(file)?;
    let p = input.poset();
    if mc_mode {
        return Ok(analyze_mc(p, samples, burn_in, cli.seed, json)?);
    }
    let lat = DownsetLattice::build_with_budget(p, cli.budget_nodes)?;
    let report = SummaryReport::from_lattice(&lat, full);
    if json {
        return Ok(serde_json::to_string_pretty(&report).expect("serializable") + "\n");
    }
    let value = |r: &RationalRepr| r.value().expect("well-formed rational");
    let mut out = String::new();
    out += &format!("elements: {}\n", report.elements);
    out += &format!("extensions: {}\n", report.extensions);
    out += &format!("width: {}\n", report.width);
    out += &format!("pi: {}\n", report.pi);
    match (&report.delta, &report.delta_witness) {
        (Some(d), Some((a, b))) => out += &format!("delta: {} witness ({a}, {b})\n", decimal(&value(d))),
        _ => out += "chain: balance not applicable\n",
    }
    if let Some(x) = &report.sigma_argmax {
        out += &format!(
            "sigma: {:.6} (variance {}) at {x}\n",
            report.sigma,
            fmt(&value(&report.variance))
        );
    }
    if let Some(rows) = &report.per_element {
        out += "element\tpi\tmean\tvariance\tq\tdelta_x\n";
        for r in rows {
            out += &format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                r.label,
                r.pi,
                fmt(&value(&r.mean)),
                fmt(&value(&r.variance)),
                fmt(&value(&r.q)),
                fmt(&value(&r.delta_x))
            );
        }
    }
    Ok(out)
}

fn analyze_mc(p: &Poset, samples: u64, burn_in: Option<u64>, seed: u64, json: bool) -> linext::Result<String> {
    let m = mc::estimate_marginals(p, samples, burn_in, seed)?;
    let n = p.len();
    let mut best: Option<(f64, usize, usize)> = None;
    for x in 0..n {
        for y in x + 1..n {
            if p.incomparable(x, y) {
                let d = m.before[x][y].min(m.before[y][x]);
                if best.map_or(true, |b| d > b.0) {
                    best = Some((d, x, y));
                }
            }
        }
    }
    let (mut sigma, mut arg) = (0.0f64, 0usize);
    for (x, row) in m.position.iter().enumerate() {
        let mean: f64 = row.iter().enumerate().map(|(k, q)| (k + 1) as f64 * q).sum();
        let var: f64 = row
            .iter()
            .enumerate()
            .map(|(k, q)| ((k + 1) as f64 - mean).powi(2) * q)
            .sum();
        if var.sqrt() > sigma {
            sigma = var.sqrt();
            arg = x;
        }
    }
    let profile = comparability_profile(p);
    if json {
        let v = serde_json::json!({
            "provenance": "mc",
            "elements": n,
            "samples": samples,
            "width": profile.width,
            "pi": profile.pi_max,
            "delta": best.map(|b| b.0),
            "delta_witness": best.map(|b| (p.label(b.1), p.label(b.2))),
            "sigma": sigma,
            "sigma_argmax": (n > 0).then(|| p.label(arg)),
        });
        return Ok(serde_json::to_string_pretty(&v).expect("serializable") + "\n");
    }
    let mut out = String::from("provenance: mc (approximate)\n");
    out += &format!("elements: {n}\nsamples: {samples}\n");
    out += &format!("width: {}\npi: {}\n", profile.width, profile.pi_max);
    match best {
        Some((d, x, y)) => out += &format!("delta: ~{d:.4} witness ({}, {})\n", p.label(x), p.label(y)),
        None => out += "chain: balance not applicable\n",
    }
    if n > 0 {
        out += &format!("sigma: ~{sigma:.4} at {}\n", p.label(arg));
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> std::result::Result<T, Failure> {
    s.trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("invalid {what}: '{s}'")))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> std::result::Result<Vec<T>, Failure> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_num(t, what))
        .collect()
}

fn generate(cli: &Cli, family: &str, params: &[String], cross: &[String], grid: bool) -> CmdResult {
    let arg = |k: usize| -> std::result::Result<&str, Failure> {
        params
            .get(k)
            .map(String::as_str)
            .ok_or_else(|| Failure::Usage(format!("{family}: missing parameter {}", k + 1)))
    };
    let count = |k: usize| -> std::result::Result<usize, Failure> { parse_num(arg(k)?, "count") };
    let emit_grid = |shape: linext::grid::GridShape, p: Poset| {
        if grid {
            grid_to_json(&shape)
        } else {
            poset_to_json(&p)
        }
    };
    let json = match family {
        "chain" => poset_to_json(&gen::chain(count(0)?)),
        "antichain" => poset_to_json(&gen::antichain(count(0)?)),
        "chain-plus-point" => poset_to_json(&gen::chain_plus_point(count(0)?)?),
        "two-equal-chains" => poset_to_json(&gen::two_equal_chains(count(0)?)),
        "young" => {
            let (s, p) = gen::young_diagram(&parse_list(arg(0)?, "partition")?)?;
            emit_grid(s, p)
        }
        "skew" => {
            let (s, p) = gen::skew_diagram(
                &parse_list(arg(0)?, "partition")?,
                &parse_list(params.get(1).map_or("", String::as_str), "partition")?,
            )?;
            emit_grid(s, p)
        }
        "grid-ideal" => {
            let dim = count(0)?;
            let gens: Vec<Vec<u32>> = params[1..]
                .iter()
                .map(|g| parse_list(g, "generator"))
                .collect::<std::result::Result<_, _>>()?;
            let (s, p) = gen::grid_ideal(dim, &gens)?;
            emit_grid(s, p)
        }
        "tripod" => {
            let (s, p) = gen::tripod(count(0)?, parse_num(arg(1)?, "arm length")?)?;
            emit_grid(s, p)
        }
        "tightness" => {
            let (s, p) = gen::tightness_example_a(count(0)?)?;
            emit_grid(s, p)
        }
        "random" => {
            let prob: f64 = parse_num(arg(1)?, "edge probability")?;
            if !(0.0..=1.0).contains(&prob) {
                return usage("edge probability must lie in [0, 1]");
            }
            poset_to_json(&gen::random_poset(count(0)?, prob, cli.seed))
        }
        "two-chain" => {
            let pairs = cross
                .iter()
                .map(|c| {
                    let (i, j) = c
                        .split_once(':')
                        .ok_or_else(|| Failure::Usage(format!("--cross expects i:j, got '{c}'")))?;
                    Ok((parse_num(i, "index")?, parse_num(j, "index")?))
                })
                .collect::<std::result::Result<Vec<(usize, usize)>, Failure>>()?;
            two_chain_to_json(&make_two_chain(count(0)?, count(1)?, &pairs)?)
        }
        other => return usage(format!("unknown family '{other}'")),
    };
    Ok(json + "\n")
}

fn verify(cli: &Cli, suite: &str, random: Option<usize>, n: usize, corpus: Option<&str>) -> CmdResult {
    let builtin = match corpus {
        None => false,
        Some("builtin") => true,
        Some(other) => return usage(format!("unknown corpus '{other}'")),
    };
    if n < 2 {
        return usage("--n must be at least 2");
    }
    let opts = SuiteOptions {
        random,
        n_max: n,
        seed: cli.seed,
        builtin,
    };
    let records = run_suite(suite, &opts)?;
    let mut out = String::new();
    for r in &records {
        out += &serde_json::to_string(r).expect("serializable");
        out.push('\n');
    }
    let failed = records.iter().filter(|r| r.fatal && !r.holds).count();
    if failed > 0 {
        print!("{out}");
        return Err(Failure::Checks(failed));
    }
    Ok(out)
}

fn experiment(cli: &Cli, name: &str, sizes: &str, csv: Option<&PathBuf>) -> CmdResult {
    let family: TrendFamily = name.parse()?;
    let sizes: Vec<usize> = parse_list(sizes, "size")?;
    if sizes.is_empty() {
        return usage("empty size list");
    }
    let rows = trend_experiment(family, &sizes, cli.budget_nodes)?;
    let mut out = String::from("family,size,n,width,delta_num,delta_den,delta_float,sigma_float,pi\n");
    for r in rows {
        let (num, den, float) = match &r.delta {
            Some(d) => (d.numer().to_string(), d.denom().to_string(), format!("{:.6}", to_f64(d))),
            None => (String::new(), String::new(), String::new()),
        };
        let sigma = if r.skipped.is_some() {
            String::new()
        } else {
            format!("{:.6}", r.sigma)
        };
        out += &format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.family, r.size, r.n, r.width, num, den, float, sigma, r.pi
        );
        if let Some(msg) = r.skipped {
            eprintln!("row size {} skipped: {msg}", r.size);
        }
    }
    if let Some(path) = csv {
        fs::write(path, &out).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(out)
}

fn sample(cli: &Cli, file: &PathBuf, count: usize, mc_mode: bool, burn_in: Option<u64>) -> CmdResult {
    let input = read_input(file)?;
    let p = input.poset();
    let orders = if mc_mode {
        mc::sample_extensions_mc(p, count, burn_in, None, cli.seed)
    } else {
        let lat = DownsetLattice::build_with_budget(p, cli.budget_nodes)?;
        sample_extensions(&lat, count, cli.seed)
    };
    let mut out = String::from(if mc_mode {
        "# provenance: mc (approximate)\n"
    } else {
        "# provenance: exact\n"
    });
    for o in orders {
        let labels: Vec<&str> = o.iter().map(|&x| p.label(x)).collect();
        out += &labels.join(" ");
        out.push('\n');
    }
    Ok(out)
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Analyze { file, full, json, mc, samples, burn_in } => {
            analyze(cli, file, *full, *json, *mc, *samples, *burn_in)
        }
        Command::Generate { family, params, cross, grid } => generate(cli, family, params, cross, *grid),
        Command::Verify { suite, random, n, corpus } => verify(cli, suite, *random, *n, corpus.as_deref()),
        Command::Experiment { name, sizes, csv } => experiment(cli, name, sizes, csv.as_ref()),
        Command::Sample { file, count, exact: _, mc, burn_in } => sample(cli, file, *count, *mc, *burn_in),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Checks(k)) => {
            eprintln!("{k} theorem-backed check(s) failed");
            ExitCode::from(1)
        }
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
