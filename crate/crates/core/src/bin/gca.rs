use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use gca_core::adjoin::{tau_tilde, AdjoinError, AdjoinMode};
use gca_core::fixtures;
use gca_core::io::{read_seed, write_seed, TraceLog};
use gca_core::random::RandomBounds;
use gca_core::seed::{GeneralizedSeed, SeedError};
use gca_core::unfold::{build, FoldedMatrix};
use gca_core::verify::{run_on_seed, run_random, CaseReport, Sequences, SuiteConfig, Target};

/// Exact computations with generalized cluster algebras.
#[derive(Parser)]
#[command(name = "gca", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SeedArgs {
    /// A bundled fixture (FIX-A, FIX-B, FIX-C) or a seed file path.
    #[arg(long, alias = "seed-file", default_value = "FIX-A")]
    seed: String,
}

#[derive(Args)]
struct SequenceArgs {
    /// Comma-separated one-based indices, applied left to right.
    #[arg(long, value_delimiter = ',')]
    sequence: Vec<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate a seed and print its matrices, cluster and strings.
    Mutate {
        #[command(flatten)]
        seed: SeedArgs,
        #[command(flatten)]
        sequence: SequenceArgs,
        #[arg(long)]
        json: bool,
    },
    /// Print the unfolded matrix after a sequence of group mutations.
    Unfold {
        #[command(flatten)]
        seed: SeedArgs,
        #[command(flatten)]
        sequence: SequenceArgs,
        #[arg(long, default_value_t = AdjoinMode::Total)]
        adjoin_mode: AdjoinMode,
        #[arg(long)]
        json: bool,
    },
    /// Adjoin roots of all frozen variables, then mutate.
    Adjoin {
        #[command(flatten)]
        seed: SeedArgs,
        #[command(flatten)]
        sequence: SequenceArgs,
        #[arg(long, default_value_t = AdjoinMode::Total)]
        adjoin_mode: AdjoinMode,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite. Exit status 2 reports a mismatch.
    Verify {
        /// hadamard, double-constant, laurent, product-formula, embedding,
        /// subquotient, involution or root-formula.
        target: Target,
        /// A fixture, a seed file, or `random` for random seeds.
        #[arg(long, alias = "seed-file", default_value = "FIX-A")]
        seed: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// `exhaustive` or `random:N`; with `--seed random`, N seeds.
        #[arg(long, default_value_t = Sequences::Exhaustive)]
        sequences: Sequences,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long, default_value_t = AdjoinMode::Total)]
        adjoin_mode: AdjoinMode,
        /// Tab-separated lines instead of one JSON record per check.
        #[arg(long)]
        text: bool,
    },
    /// Mutate step by step and print a digest of every intermediate seed.
    Trace {
        #[command(flatten)]
        seed: SeedArgs,
        #[command(flatten)]
        sequence: SequenceArgs,
        /// Also unfold and group-mutate alongside.
        #[arg(long)]
        unfold: bool,
        #[arg(long)]
        timings: bool,
    },
}

enum Failure {
    Input(String),
    Mismatch(String),
}

type Outcome = Result<String, Failure>;

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn seed_failure(e: SeedError) -> Failure {
    match e {
        SeedError::Matrix(_) | SeedError::IndexOutOfRange { .. } => Failure::Input(e.to_string()),
        _ => Failure::Mismatch(e.to_string()),
    }
}

fn adjoin_failure(e: AdjoinError) -> Failure {
    match e {
        AdjoinError::Seed(e) => seed_failure(e),
        AdjoinError::FrozenIndex(_) | AdjoinError::Exponent(_) => Failure::Input(e.to_string()),
        _ => Failure::Mismatch(e.to_string()),
    }
}

fn load(name: &str) -> Result<GeneralizedSeed, Failure> {
    match fixtures::fixture(name) {
        Some(s) => Ok(s),
        None => read_seed(name).map_err(input),
    }
}

fn zero_based(s: &[usize], n: usize) -> Result<Vec<usize>, Failure> {
    s.iter()
        .map(|&k| {
            if (1..=n).contains(&k) {
                Ok(k - 1)
            } else {
                Err(Failure::Input(format!("index {k} out of range 1..={n}")))
            }
        })
        .collect()
}

fn seed_text(seed: &GeneralizedSeed) -> String {
    let mut s = write_seed(seed);
    s.push_str("cluster-variables\n");
    for (k, x) in seed.cluster().iter().enumerate() {
        s.push_str(&format!("{} = {x}\n", seed.table().name(k)));
    }
    s
}

fn mutate(seed: &str, sequence: &[usize], json: bool) -> Outcome {
    let seed = load(seed)?;
    let s = zero_based(sequence, seed.rank())?;
    let t = seed.mutate_sequence(&s).map_err(seed_failure)?;
    if json {
        let cluster: Vec<String> = t.cluster().iter().map(ToString::to_string).collect();
        return Ok(json!({
            "sequence": sequence,
            "matrix": t.matrix().rows(),
            "modified": t.modified().matrix().rows(),
            "cluster": cluster,
            "seed": write_seed(&t),
        })
        .to_string()
            + "\n");
    }
    Ok(format!(
        "# B\n{}# B-hat\n{}# seed\n{}",
        t.matrix().to_text(),
        t.modified().matrix().to_text(),
        seed_text(&t)
    ))
}

fn unfold(seed: &str, sequence: &[usize], mode: AdjoinMode, json: bool) -> Outcome {
    let seed = load(seed)?;
    let s = zero_based(sequence, seed.rank())?;
    let f: FoldedMatrix = build(seed.matrix(), seed.divisors(), mode)
        .and_then(|f| f.group_mutate_sequence(&s))
        .map_err(input)?;
    if json {
        let l = f.layout();
        let groups: Vec<_> = (0..l.group_count())
            .map(|i| {
                json!({
                    "rows": [l.group(i).start, l.group(i).end],
                    "t": [l.t_columns(i).start, l.t_columns(i).end],
                    "s": [l.s_columns(i).start, l.s_columns(i).end],
                })
            })
            .collect();
        return Ok(json!({"matrix": f.matrix().rows(), "groups": groups, "scale": l.scale()}).to_string() + "\n");
    }
    Ok(f.to_string())
}

fn adjoin(seed: &str, sequence: &[usize], mode: AdjoinMode, json: bool) -> Outcome {
    let seed = load(seed)?;
    let s = zero_based(sequence, seed.rank())?;
    let a = tau_tilde(&seed, mode)
        .and_then(|a| a.mutate_sequence(&s))
        .map_err(adjoin_failure)?;
    let t = a.seed();
    let mut theta = Vec::new();
    let mut tau = Vec::new();
    for k in 0..t.rank() {
        theta.push(t.exchange_polynomial(k).map_err(seed_failure)?.to_string());
        tau.push(t.tau_variable(k).map_err(seed_failure)?.display(t.table()).to_string());
    }
    let rho = a.rho().map_err(adjoin_failure)?;
    if json {
        return Ok(json!({
            "seed": write_seed(t),
            "theta": theta,
            "tau": tau,
            "rho": rho.to_string(),
        })
        .to_string()
            + "\n");
    }
    let mut out = format!("# seed\n{}", seed_text(t));
    out.push_str("# exchange polynomials\n");
    for (k, p) in theta.iter().enumerate() {
        out.push_str(&format!("theta_{} = {p}\n", t.table().name(k)));
    }
    out.push_str("# homogeneous variables\n");
    for (k, m) in tau.iter().enumerate() {
        out.push_str(&format!("tau_{} = {m}\n", t.table().name(k)));
    }
    out.push_str("# generalized coefficients\n");
    out.push_str(&rho.to_string());
    Ok(out)
}

fn verify(
    target: Target,
    seed: &str,
    cfg: SuiteConfig,
    json: bool,
) -> Outcome {
    let reports: Vec<CaseReport> = if seed.eq_ignore_ascii_case("random") {
        let Sequences::Random(count) = cfg.sequences else {
            return Err(Failure::Input("random seeds need --sequences random:N".into()));
        };
        run_random(count, &RandomBounds::default(), &cfg)
    } else {
        let s = load(seed)?;
        run_on_seed(&s, seed, &SuiteConfig { target, ..cfg })
    };
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let mut out = String::new();
    for r in &reports {
        if json {
            out.push_str(&serde_json::to_string(r).map_err(input)?);
        } else {
            out.push_str(&r.to_string());
        }
        out.push('\n');
    }
    let summary = format!("{target}: {} cases, {failed} mismatches", reports.len());
    if json {
        out.push_str(&json!({"target": target.name(), "cases": reports.len(), "mismatches": failed}).to_string());
        out.push('\n');
    } else {
        out.push_str(&summary);
        out.push('\n');
    }
    if failed > 0 {
        print!("{out}");
        return Err(Failure::Mismatch(summary));
    }
    Ok(out)
}

fn trace(seed: &str, sequence: &[usize], unfold: bool, timings: bool) -> Outcome {
    let seed = load(seed)?;
    let s = zero_based(sequence, seed.rank())?;
    let mut log = TraceLog::new();
    let start = Instant::now();
    let mut t = seed.clone();
    log.push("load", None, start.elapsed(), &seed_text(&t));
    let mut f = if unfold {
        let start = Instant::now();
        let f = build(seed.matrix(), seed.divisors(), AdjoinMode::Total).map_err(input)?;
        log.push("unfold", None, start.elapsed(), &f.to_string());
        Some(f)
    } else {
        None
    };
    for &k in &s {
        let start = Instant::now();
        t = t.mutate(k).map_err(seed_failure)?;
        log.push("mutate", Some(k + 1), start.elapsed(), &seed_text(&t));
        if let Some(g) = f.take() {
            let start = Instant::now();
            let g = g.group_mutate(k).map_err(input)?;
            log.push("group-mutate", Some(k + 1), start.elapsed(), &g.to_string());
            f = Some(g);
        }
    }
    Ok(log.render(timings))
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("GCA_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Failure::Input(format!("GCA_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(input)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    match cli.command {
        Command::Mutate { seed, sequence, json } => mutate(&seed.seed, &sequence.sequence, json),
        Command::Unfold { seed, sequence, adjoin_mode, json } => {
            unfold(&seed.seed, &sequence.sequence, adjoin_mode, json)
        }
        Command::Adjoin { seed, sequence, adjoin_mode, json } => {
            adjoin(&seed.seed, &sequence.sequence, adjoin_mode, json)
        }
        Command::Verify { target, seed, depth, sequences, rng_seed, adjoin_mode, text } => {
            let cfg = SuiteConfig {
                target,
                depth,
                sequences,
                rng_seed,
                mode: adjoin_mode,
            };
            verify(target, &seed, cfg, !text)
        }
        Command::Trace { seed, sequence, unfold, timings } => {
            trace(&seed.seed, &sequence.sequence, unfold, timings)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Mismatch(msg) => eprintln!("mismatch: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Mismatch(_) => 2,
        }
    }
}
