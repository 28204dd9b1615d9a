use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use masa_core::affine;
use masa_core::asymptotics;
use masa_core::report::SuiteReport;
use masa_core::stallings::{parse_generators, SubgroupGraph};
use masa_core::suites::{run_suite, SuiteConfig};
use masa_core::{Element, Subgroup, Word};

mod config;

use config::{CliError, Settings};

#[derive(Parser, Debug)]
#[command(name = "masa", version, about = "Checks for strongly singular masas")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// TOML file whose keys are flag names; explicit flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Freely reduce a word.
    Reduce {
        /// Word in letters a..z, capitals for inverses.
        word: String,
        /// Free-group rank (default 2).
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Decide membership of a word in a finitely generated subgroup.
    Member {
        /// Comma-separated generators, e.g. ab,bb.
        #[arg(long)]
        subgroup: String,
        /// Word in letters a..z, capitals for inverses.
        #[arg(long)]
        word: String,
        /// Free-group rank (default 2).
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Conditional expectation of a group-algebra element onto a subgroup.
    Expect {
        /// Element literal such as 2*e + 1/2*aB.
        #[arg(long)]
        x: String,
        /// Comma-separated generators, e.g. ab,bb.
        #[arg(long)]
        subgroup: String,
        /// Free-group rank (default 2).
        #[arg(long)]
        rank: Option<usize>,
    },
    /// The defect φ_k(x, y).
    Phi {
        /// Element literal such as 2*e + 1/2*aB.
        #[arg(long)]
        x: String,
        /// Element literal.
        #[arg(long)]
        y: String,
        /// Generator of the masa (default a).
        #[arg(long)]
        gen: Option<String>,
        /// Exponent; may be negative.
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Free-group rank (default 2).
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Exact decay horizon of φ_k(x, y).
    Horizon {
        /// Element literal such as 2*e + 1/2*aB.
        #[arg(long)]
        x: String,
        /// Element literal.
        #[arg(long)]
        y: String,
        /// Generator of the masa (default a).
        #[arg(long)]
        gen: Option<String>,
        /// Free-group rank (default 2).
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Exponents m with h·genᵐ·k in the cyclic subgroup of gen.
    Exceptional {
        /// Left word, outside the cyclic subgroup.
        #[arg(long)]
        h: String,
        /// Right word, outside the cyclic subgroup.
        #[arg(long)]
        k: String,
        /// Generator of the masa (default a).
        #[arg(long)]
        gen: Option<String>,
        /// Free-group rank (default 2).
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Affine group over GF(p^d).
    Affine {
        /// Field characteristic.
        #[arg(long)]
        p: Option<u64>,
        /// Extension degree (default 1).
        #[arg(long)]
        d: Option<u32>,
        /// Which stage check to run (default malnormal).
        #[arg(long, value_enum)]
        check: Option<AffineCheck>,
    },
    /// Matrix-model suite in one dimension.
    Matrix {
        /// Matrix dimension.
        #[arg(long)]
        n: Option<usize>,
        /// sec2 or sec7 (default sec2).
        #[arg(long)]
        suite: Option<String>,
        /// RNG seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Optimizer restarts per bracket.
        #[arg(long)]
        restarts: Option<usize>,
        /// Random unitary pairs.
        #[arg(long)]
        matrix_samples: Option<usize>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AffineCheck {
    Malnormal,
    IccTrend,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// One of sec2, sec3, sec6, sec7, affine.
    #[arg(long)]
    suite: Option<String>,
    /// Free-group rank.
    #[arg(long)]
    rank: Option<usize>,
    /// Radius for scans and sampled supports.
    #[arg(long)]
    radius: Option<usize>,
    /// Length bound for the exhaustive witness sweep.
    #[arg(long)]
    witness_radius: Option<usize>,
    /// Random samples for the exact checks.
    #[arg(long)]
    samples: Option<usize>,
    /// Random unitary pairs per dimension.
    #[arg(long)]
    matrix_samples: Option<usize>,
    /// RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest field order for the affine stages.
    #[arg(long)]
    field_bound: Option<u64>,
    /// Comma-separated matrix dimensions.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Optimizer restarts per bracket.
    #[arg(long)]
    restarts: Option<usize>,
    /// Also write the report to this file.
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Outcome {
    Value(Value),
    Suite(SuiteReport),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let settings = Settings::load(cli.config.as_deref())?;
    let format = match cli.format {
        Some(f) => f,
        None => match settings.get::<String>("format")?.as_deref() {
            None | Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            Some(other) => return Err(CliError::Config(format!("unknown format {other:?}"))),
        },
    };
    let mut output = None;
    let outcome = match cli.command {
        Command::Verify(args) => {
            output = settings.pick(args.output, "output")?;
            let suite: String = settings
                .pick(args.suite, "suite")?
                .ok_or_else(|| CliError::Config("--suite is required".into()))?;
            let d = SuiteConfig::default();
            let cfg = SuiteConfig {
                rank: settings.pick(args.rank, "rank")?.unwrap_or(d.rank),
                radius: settings.pick(args.radius, "radius")?.unwrap_or(d.radius),
                witness_radius: settings
                    .pick(args.witness_radius, "witness-radius")?
                    .unwrap_or(d.witness_radius),
                samples: settings.pick(args.samples, "samples")?.unwrap_or(d.samples),
                matrix_samples: settings
                    .pick(args.matrix_samples, "matrix-samples")?
                    .unwrap_or(d.matrix_samples),
                seed: settings.pick(args.seed, "seed")?.unwrap_or(d.seed),
                field_bound: settings.pick(args.field_bound, "field-bound")?.unwrap_or(d.field_bound),
                dims: settings.pick(args.dims, "dims")?.unwrap_or(d.dims),
                restarts: settings.pick(args.restarts, "restarts")?.unwrap_or(d.restarts),
            };
            Outcome::Suite(run_suite(&suite, &cfg)?)
        }
        Command::Reduce { word, rank } => {
            let rank = settings.pick(rank, "rank")?.unwrap_or(2);
            Outcome::Value(json!(Word::parse(&word, rank)?.to_string()))
        }
        Command::Member { subgroup, word, rank } => {
            let rank = settings.pick(rank, "rank")?.unwrap_or(2);
            let gens = parse_generators(&subgroup, rank)?;
            let w = Word::parse(&word, rank)?;
            let graph = SubgroupGraph::build(rank, &gens)?;
            Outcome::Value(json!({
                "word": w.to_string(),
                "member": graph.contains(&w)?,
                "index": graph.index().to_string(),
            }))
        }
        Command::Expect { x, subgroup, rank } => {
            let rank = settings.pick(rank, "rank")?.unwrap_or(2);
            let x = Element::parse(&x, rank)?;
            let graph = SubgroupGraph::build(rank, &parse_generators(&subgroup, rank)?)?;
            let e = x.expect(&graph)?;
            Outcome::Value(json!({ "expectation": e.to_string(), "terms": e.to_json() }))
        }
        Command::Phi { x, y, gen, k, rank } => {
            let rank = settings.pick(rank, "rank")?.unwrap_or(2);
            let a = generator(&settings, gen, rank)?;
            let phi = asymptotics::phi_k(&Element::parse(&x, rank)?, &Element::parse(&y, rank)?, &a, k)?;
            Outcome::Value(json!({ "k": k, "phi": phi.to_string(), "terms": phi.to_json() }))
        }
        Command::Horizon { x, y, gen, rank } => {
            let rank = settings.pick(rank, "rank")?.unwrap_or(2);
            let a = generator(&settings, gen, rank)?;
            let cert = asymptotics::decay_horizon(&Element::parse(&x, rank)?, &Element::parse(&y, rank)?, &a)?;
            Outcome::Value(cert.to_json())
        }
        Command::Exceptional { h, k, gen, rank } => {
            let rank = settings.pick(rank, "rank")?.unwrap_or(2);
            let a = generator(&settings, gen, rank)?;
            let set = asymptotics::exceptional_exponents(&Word::parse(&h, rank)?, &Word::parse(&k, rank)?, &a)?;
            Outcome::Value(json!({ "exponents": set.into_iter().collect::<Vec<_>>() }))
        }
        Command::Affine { p, d, check } => {
            let p: u64 = settings
                .pick(p, "p")?
                .ok_or_else(|| CliError::Config("--p is required".into()))?;
            let d: u32 = settings.pick(d, "d")?.unwrap_or(1);
            let check = match check {
                Some(c) => c,
                None => match settings.get::<String>("check")?.as_deref() {
                    None | Some("malnormal") => AffineCheck::Malnormal,
                    Some("icc-trend") => AffineCheck::IccTrend,
                    Some(other) => return Err(CliError::Config(format!("unknown check {other:?}"))),
                },
            };
            let report = match check {
                AffineCheck::Malnormal => affine::check_malnormal(p, d)?,
                AffineCheck::IccTrend => affine::check_icc_trend(p, d)?,
            };
            Outcome::Suite(SuiteReport::new("affine", 0, json!({ "p": p, "d": d }), vec![report]))
        }
        Command::Matrix {
            n,
            suite,
            seed,
            restarts,
            matrix_samples,
        } => {
            let n: usize = settings
                .pick(n, "n")?
                .ok_or_else(|| CliError::Config("--n is required".into()))?;
            let suite: String = settings.pick(suite, "suite")?.unwrap_or_else(|| "sec2".into());
            if suite != "sec2" && suite != "sec7" {
                return Err(CliError::Config(format!(
                    "matrix suite must be sec2 or sec7, not {suite:?}"
                )));
            }
            let d = SuiteConfig::default();
            let cfg = SuiteConfig {
                dims: vec![n],
                seed: settings.pick(seed, "seed")?.unwrap_or(d.seed),
                restarts: settings.pick(restarts, "restarts")?.unwrap_or(d.restarts),
                matrix_samples: settings
                    .pick(matrix_samples, "matrix-samples")?
                    .unwrap_or(d.matrix_samples),
                ..d
            };
            Outcome::Suite(run_suite(&suite, &cfg)?)
        }
    };

    let (text, code) = match outcome {
        Outcome::Value(v) => (render_value(&v, format), 0),
        Outcome::Suite(report) => {
            let text = match format {
                Format::Json => report.to_json_pretty() + "\n",
                Format::Csv => report.to_csv(),
            };
            (text, exit_code(&report))
        }
    };
    if let Some(path) = output {
        std::fs::write(&path, &text).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))?;
    }
    print!("{text}");
    Ok(code)
}

/// 0 when every check passes, 1 otherwise.
fn exit_code(report: &SuiteReport) -> u8 {
    if report.pass {
        0
    } else {
        1
    }
}

fn generator(settings: &Settings, flag: Option<String>, rank: usize) -> Result<Word, CliError> {
    let text: String = settings.pick(flag, "gen")?.unwrap_or_else(|| "a".into());
    Ok(Word::parse(&text, rank)?)
}

/// JSON, or a header row of keys and one row of values for CSV.
fn render_value(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("values serialize") + "\n",
        Format::Csv => {
            let cell = |x: &Value| match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let (keys, values): (Vec<String>, Vec<String>) = match v {
                Value::Object(map) => map.iter().map(|(k, x)| (k.clone(), cell(x))).unzip(),
                other => (vec!["value".into()], vec![cell(other)]),
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&keys).expect("in-memory write");
            w.write_record(&values).expect("in-memory write");
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
        }
    }
}
