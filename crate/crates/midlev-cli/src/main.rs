//! Command-line front end: stream star-transposition combination orderings,
//! run the brute-force verification suites, export the cycle factor and
//! gluing graphs, and benchmark per-step cost.

use clap::{Args, Parser, Subcommand, ValueEnum};
use midlev::bitstring::Bitstring;
use midlev::tree::{canonical_word, lambda_of};
use midlev::verifier::Certificate;
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "midlev", about = "Star-transposition Gray codes for combinations", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stream the combination ordering for a given n and shift.
    Generate(GenerateArgs),
    /// Run verification suites and print one certificate per claim.
    Verify(VerifyArgs),
    /// Export the cycle factor, the gluing multigraph, or the spanning tree.
    Analyze(AnalyzeArgs),
    /// Measure per-step generation cost across a range of n.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(short)]
    n: usize,
    /// Block-to-block advance of the emitted flip sequence (coprime to
    /// 2n+1); negative values allowed.
    #[arg(long, allow_hyphen_values = true)]
    shift: i64,
    /// Start combination (length 2n+2, weight n+1).
    #[arg(long)]
    start: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Combinations)]
    format: Format,
    /// Stop after this many lines.
    #[arg(long)]
    limit: Option<u128>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Flips,
    Combinations,
    Both,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Emit certificates as JSON objects.
    #[arg(long)]
    json: bool,
    /// Print how a non-coprime base shift would be repaired.
    #[arg(long)]
    explain_shift: bool,
    /// Seed for the perturbation spot checks.
    #[arg(long, default_value_t = 0x6d69646c)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Lemmas,
    Hamilton,
    Blocks,
    All,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(subcommand)]
    what: AnalyzeWhat,
}

#[derive(Subcommand)]
enum AnalyzeWhat {
    /// The cycle factor: one cycle per plane tree.
    Cycles {
        #[arg(short)]
        n: usize,
    },
    /// The full gluing multigraph.
    GluingGraph {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        csv: bool,
    },
    /// The selected spanning tree.
    SpanningTree {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 50)]
    n_min: usize,
    #[arg(long, default_value_t = 200)]
    n_max: usize,
    /// Steps sampled per n.
    #[arg(long, default_value_t = 20000)]
    limit: u64,
    #[arg(long, default_value_t = 3)]
    reps: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}

fn cmd_generate(a: GenerateArgs) -> Result<ExitCode, midlev::Error> {
    let start = match &a.start {
        Some(text) => Some(Bitstring::parse(text)?),
        None => None,
    };
    let mut state = midlev::generator::init(a.n, a.shift, start.as_ref())?;
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let mut emitted: u128 = 0;
    loop {
        if let Some(limit) = a.limit {
            if emitted >= limit {
                break;
            }
        }
        let before = state.combination().clone();
        let Some(pos) = state.next_flip() else {
            break;
        };
        let line = match a.format {
            Format::Flips => format!("{}", pos),
            Format::Combinations => format!("{}", before),
            Format::Both => format!("{}\t{}", before, pos),
        };
        writeln!(out, "{}", line).expect("stdout");
        emitted += 1;
        if state.is_done() {
            break;
        }
    }
    out.flush().expect("stdout");
    Ok(ExitCode::SUCCESS)
}

fn certificate_line(c: &Certificate, json: bool) -> String {
    if json {
        let mut obj = serde_json::json!({
            "claim": c.claim,
            "n": c.n,
            "pass": c.pass,
        });
        if let Some(w) = &c.counterexample {
            obj["counterexample"] = serde_json::json!(w);
        }
        obj.to_string()
    } else {
        match &c.counterexample {
            None => format!("{}: n={} {}", if c.pass { "PASS" } else { "FAIL" }, c.n, c.claim),
            Some(w) => format!(
                "{}: n={} {} ({})",
                if c.pass { "PASS" } else { "FAIL" },
                c.n,
                c.claim,
                w
            ),
        }
    }
}

/// Deterministic perturbation spot check: every corrupted switch triple
/// must be rejected by the validator.
fn perturbation_certificate(n: usize, seed: u64) -> Certificate {
    let claim = "switch validator rejects corrupted triples";
    let Ok(sw) = midlev::switches::tau_1(n) else {
        return Certificate::fail(claim, n, "unit switch unavailable");
    };
    let m = 2 * n + 1;
    let mut state = seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..500 {
        let mut x = sw.x.clone();
        let mut y = sw.y.clone();
        let mut y2 = sw.y_alt.clone();
        match next() % 3 {
            0 => x.flip((next() % m as u64) as usize),
            1 => y.flip((next() % m as u64) as usize),
            _ => y2.flip((next() % m as u64) as usize),
        }
        let intact = midlev::switches::validate_switch(&x, &y, &y2)
            .map(|v| v.x == sw.x && v.y == sw.y && v.y_alt == sw.y_alt)
            .unwrap_or(false);
        if intact {
            return Certificate::fail(claim, n, format!("perturbation accepted: {} {} {}", x, y, y2));
        }
    }
    Certificate::pass(claim, n)
}

fn stream_certificates(n: usize, which: Suite) -> Result<Vec<Certificate>, midlev::Error> {
    if n > 8 {
        return Err(midlev::Error::ResourceBound(format!(
            "stream certification capped at n = 8, got {}",
            n
        )));
    }
    let state = midlev::generator::init(n, 1, None)?;
    let mut combos = vec![];
    let mut flips = vec![];
    for (c, p) in state.steps() {
        combos.push(c);
        flips.push(p);
    }
    let mut out = vec![];
    if which == Suite::Hamilton || which == Suite::All {
        out.push(midlev::verifier::certify_hamilton(&combos, n));
        if n <= 6 {
            out.push(midlev::verifier::certify_middle_walk(&combos, n));
        }
    }
    if which == Suite::Blocks || which == Suite::All {
        out.push(midlev::verifier::certify_blocks(&flips, n, 1));
    }
    Ok(out)
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode, midlev::Error> {
    if a.explain_shift {
        if a.n >= 4 {
            let base = midlev::generator::base_shift(a.n) as i64;
            let plan = midlev::switches::plan_shift_fix(a.n, base)?;
            print!("{}", plan.explain());
        } else {
            println!("n = {} is served from a fixed table; no shift repair involved", a.n);
        }
    }
    let mut certs = vec![];
    if a.suite == Suite::Lemmas || a.suite == Suite::All {
        let oracles = midlev::verifier::Oracles::production();
        certs.extend(midlev::verifier::lemma_suite(a.n, &oracles));
    }
    if a.suite != Suite::Lemmas {
        certs.extend(stream_certificates(a.n, a.suite)?);
    }
    if a.suite == Suite::All {
        certs.push(perturbation_certificate(a.n, a.seed));
    }
    let mut all_pass = true;
    for c in &certs {
        println!("{}", certificate_line(c, a.json));
        all_pass &= c.pass;
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<ExitCode, midlev::Error> {
    match a.what {
        AnalyzeWhat::Cycles { n } => {
            if n > 9 {
                return Err(midlev::Error::ResourceBound("cycles capped at n = 9".into()));
            }
            println!("plane_tree,lambda,cycle_length");
            for c in midlev::dynamics::cycle_factor(n) {
                println!("{},{},{}", c.plane, c.lambda, c.necklaces.len());
            }
        }
        AnalyzeWhat::GluingGraph { n, dot, csv } => {
            let h = midlev::spanning::build_h(n)?;
            if dot {
                println!("digraph gluing {{");
                for node in &h.nodes {
                    println!("  \"{}\" [lambda={}];", node, lambda_of(node));
                }
                for arc in &h.arcs {
                    println!(
                        "  \"{}\" -> \"{}\" [label=\"({},{})\"];",
                        arc.from, arc.to, arc.pair.x, arc.pair.y
                    );
                }
                println!("}}");
            }
            if csv || !dot {
                println!("from,to,x,y");
                for arc in &h.arcs {
                    println!("{},{},{},{}", arc.from, arc.to, arc.pair.x, arc.pair.y);
                }
            }
        }
        AnalyzeWhat::SpanningTree { n, dot, csv } => {
            let t = midlev::spanning::build_t(n)?;
            if dot {
                println!("digraph spanning {{");
                let mut nodes: Vec<Bitstring> =
                    t.entries.iter().map(|(w, _)| w.clone()).collect();
                nodes.push(canonical_word(&midlev::tree::star(n)?));
                nodes.sort();
                for node in &nodes {
                    println!("  \"{}\";", node);
                }
                for (_, s) in &t.entries {
                    println!(
                        "  \"{}\" -> \"{}\" [label=\"{} ({},{})\"];",
                        canonical_word(&s.x),
                        canonical_word(&s.y),
                        s.rule.tag(),
                        s.x,
                        s.y
                    );
                }
                println!("}}");
            }
            if csv || !dot {
                println!("from,to,x,y,rule");
                for (_, s) in &t.entries {
                    println!(
                        "{},{},{},{},{}",
                        canonical_word(&s.x),
                        canonical_word(&s.y),
                        s.x,
                        s.y,
                        s.rule.tag()
                    );
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn per_step_nanos(n: usize, limit: u64, reps: usize) -> Result<f64, midlev::Error> {
    let mut best = f64::INFINITY;
    for _ in 0..reps {
        let mut state = midlev::generator::init(n, 1, None)?;
        let start = std::time::Instant::now();
        let mut taken = 0u64;
        while taken < limit {
            if state.next_flip().is_none() {
                break;
            }
            taken += 1;
        }
        let nanos = start.elapsed().as_nanos() as f64 / taken.max(1) as f64;
        best = best.min(nanos);
    }
    Ok(best)
}

fn cmd_bench(a: BenchArgs) -> Result<ExitCode, midlev::Error> {
    if a.n_min < 4 || a.n_max < a.n_min {
        return Err(midlev::Error::UnsupportedN(a.n_min));
    }
    let mut samples = vec![];
    let points = 5usize.min(a.n_max - a.n_min + 1);
    for i in 0..points {
        let n = a.n_min + i * (a.n_max - a.n_min) / points.max(1).saturating_sub(1).max(1);
        let nanos = per_step_nanos(n, a.limit, a.reps)?;
        println!("n={} per_step_ns={:.1}", n, nanos);
        samples.push((n as f64, nanos));
    }
    // Least-squares slope of cost against n.
    let len = samples.len() as f64;
    let sx: f64 = samples.iter().map(|(x, _)| x).sum();
    let sy: f64 = samples.iter().map(|(_, y)| y).sum();
    let sxx: f64 = samples.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = samples.iter().map(|(x, y)| x * y).sum();
    let slope = (len * sxy - sx * sy) / (len * sxx - sx * sx);
    let first = samples.first().unwrap().1;
    let last = samples.last().unwrap().1;
    println!("linear_fit_slope_ns_per_n={:.3}", slope);
    println!("cost_ratio_max_over_min={:.2}", last / first);
    Ok(ExitCode::SUCCESS)
}
