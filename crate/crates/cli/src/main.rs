use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use mapstrata::blowup::{phik_coords, phik_len, phik_stream, PhiKIndex, MAX_MATERIALIZED_K};
use mapstrata::sample::{sample_tuple, SampleMode, DEFAULT_BOUND};
use mapstrata::strata::{classify_point, stratum_codimension, stratum_dimension, verify_dimension};
use mapstrata::sylvester::{build_matrix, in_stratum};
use mapstrata::verify::{run_suite, CheckOutcome, Report, Span, Suite, VerifyParams};
use mapstrata::{FormTuple, Rational, TupleDocument};
use serde_json::{json, Value};

/// Coordinate vectors longer than this go to `--output`, not stdout.
const STDOUT_LIMIT: u64 = 10_000;

#[derive(Parser)]
#[command(
    name = "mapstrata",
    version,
    about = "Resultant strata of binary-form tuples, exactly"
)]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Tuple document; stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Membership in R_k against the common-root oracle.
    Stratum {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// Smooth or singular point of R_k.
    Classify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// Rank of the resultant matrix A_k.
    Rank {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
    },
    /// Dimension of R_k, checked on a random parametrization.
    Dim {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Coordinates of the k-th blow-up map.
    BlowupCoords {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        level: usize,
    },
    /// Run a property suite.
    Verify {
        suite: String,
        /// Degree range, e.g. `4` or `2..4`.
        #[arg(long)]
        d: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        k: Option<String>,
        /// Samples per configuration.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
    },
    /// Draw a tuple document.
    Sample {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// generic, in_stratum or in_lower_stratum.
        #[arg(long, default_value = "generic")]
        mode: String,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
    },
}

/// What a command produced. Only reports can fail.
enum Outcome {
    Report(Report),
    Text(String),
    /// Already written to `--output`; the message goes to stdout.
    Written(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(Outcome::Report(report)) => {
            let text = if cli.json {
                report.to_json()
            } else {
                report.human()
            };
            if let Err(e) = emit(cli.output.as_deref(), &text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            ExitCode::from(if report.passed { 0 } else { 1 })
        }
        Ok(Outcome::Text(text)) => match emit(cli.output.as_deref(), &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
        Ok(Outcome::Written(msg)) => {
            println!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    let text = if text.ends_with('\n') {
        text.to_string()
    } else {
        format!("{text}\n")
    };
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout()
            .write_all(text.as_bytes())
            .context("writing stdout"),
    }
}

fn read_tuple(input: &Input) -> anyhow::Result<(FormTuple, Value)> {
    let text = match &input.input {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .context("reading stdin")?;
            s
        }
    };
    let doc = TupleDocument::from_json(&text)?;
    let tuple = doc.to_tuple()?;
    let value = serde_json::to_value(&doc)?;
    Ok((tuple, value))
}

fn check(
    name: &str,
    passed: bool,
    details: Value,
    witness: impl FnOnce() -> Value,
) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        passed,
        diagnostic: false,
        cases: 1,
        failures: usize::from(!passed),
        details,
        witnesses: if passed { Vec::new() } else { vec![witness()] },
    }
}

fn info(name: &str, details: Value) -> CheckOutcome {
    check(name, true, details, || Value::Null)
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let elapsed = |s: Instant| s.elapsed().as_millis() as u64;
    Ok(match &cli.command {
        Command::Stratum { input, k } => {
            let (t, doc) = read_tuple(input)?;
            let inside = in_stratum(&t, *k)?;
            let rank = build_matrix(&t, *k)?.rank();
            let mult = t.common_root_multiplicity()?;
            let threshold = t.degree() + 1 - k;
            let agree = inside == (mult >= threshold);
            let details = json!({
                "in_stratum": inside,
                "rank": rank,
                "full_rank": 2 * k,
                "multiplicity": mult,
                "roots_needed": threshold,
            });
            let outcome = check(
                "rank-matches-common-roots",
                agree,
                details,
                || json!({ "tuple": doc, "k": k }),
            );
            let params = json!({ "tuple": doc, "k": k });
            Outcome::Report(Report::new(
                "stratum",
                0,
                params,
                vec![outcome],
                elapsed(start),
            ))
        }
        Command::Classify { input, k } => {
            let (t, doc) = read_tuple(input)?;
            let c = classify_point(&t, *k)?;
            let details = serde_json::to_value(&c)?;
            let outcome = check(
                "classification-consistent",
                c.consistent(),
                details,
                || json!({ "tuple": doc, "k": k }),
            );
            let params = json!({ "tuple": doc, "k": k });
            Outcome::Report(Report::new(
                "classify",
                0,
                params,
                vec![outcome],
                elapsed(start),
            ))
        }
        Command::Rank { input, k } => {
            let (t, doc) = read_tuple(input)?;
            let a = build_matrix(&t, *k)?;
            let m = a.matrix();
            let details =
                json!({ "rows": m.rows(), "cols": m.cols(), "rank": a.rank(), "full_rank": 2 * k });
            let params = json!({ "tuple": doc, "k": k });
            Outcome::Report(Report::new(
                "rank",
                0,
                params,
                vec![info("rank", details)],
                elapsed(start),
            ))
        }
        Command::Dim { d, r, k, seed } => {
            let dim = stratum_dimension(*d, *r, *k)?;
            let codim = stratum_codimension(*d, *r, *k)?;
            let c = verify_dimension(*d, *r, *k, *seed)?;
            let details = json!({ "dimension": dim, "codimension": codim, "check": c });
            let outcome = check(
                "cone-jacobian-rank",
                c.passed(),
                details,
                || json!({ "d": d, "r": r, "k": k }),
            );
            let params = json!({ "d": d, "r": r, "k": k });
            Outcome::Report(Report::new(
                "dim",
                *seed,
                params,
                vec![outcome],
                elapsed(start),
            ))
        }
        Command::BlowupCoords { input, level } => {
            let (t, _) = read_tuple(input)?;
            blowup_coords(&t, *level, cli)?
        }
        Command::Verify {
            suite,
            d,
            r,
            k,
            n,
            seed,
            bound,
        } => {
            let suite: Suite = suite.parse()?;
            let span = |s: &Option<String>| s.as_deref().map(str::parse::<Span>).transpose();
            let params = VerifyParams {
                d: span(d)?,
                r: span(r)?,
                k: span(k)?,
                n: *n,
                seed: *seed,
                bound: *bound,
            };
            if *bound < 1 {
                bail!("--bound must be positive");
            }
            Outcome::Report(run_suite(suite, &params)?)
        }
        Command::Sample {
            d,
            r,
            k,
            seed,
            mode,
            bound,
        } => {
            if *bound < 1 {
                bail!("--bound must be positive");
            }
            let mode: SampleMode = mode.parse()?;
            let t = sample_tuple(*d, *r, *k, *seed, mode, *bound)?;
            Outcome::Text(TupleDocument::from_tuple(&t).to_json())
        }
    })
}

fn coord_json(idx: &PhiKIndex, v: &Rational) -> Value {
    json!({ "rows": idx.root.rows, "cols": idx.root.cols, "aux_cols": idx.aux_cols, "value": v.to_string() })
}

fn blowup_coords(t: &FormTuple, level: usize, cli: &Cli) -> anyhow::Result<Outcome> {
    let len = phik_len(t.degree(), t.r(), level);
    let big = len > STDOUT_LIMIT.into();
    if level > MAX_MATERIALIZED_K && cli.output.is_none() {
        bail!("levels above {MAX_MATERIALIZED_K} are streamed to a file; pass --output <path>");
    }
    let Some(path) = cli
        .output
        .as_deref()
        .filter(|_| big || level > MAX_MATERIALIZED_K)
    else {
        if big {
            bail!(
                "{len} coordinates exceed the stdout limit of {STDOUT_LIMIT}; pass --output <path>"
            );
        }
        let coords = phik_coords(t, level)?;
        let text = if cli.json {
            let values: Vec<Value> = coords.iter().map(|(i, v)| coord_json(i, v)).collect();
            serde_json::to_string_pretty(
                &json!({ "level": level, "d": t.degree(), "r": t.r(), "coords": values }),
            )?
        } else {
            coords
                .iter()
                .map(|(i, v)| format!("{:?} {:?} {:?} {v}", i.root.rows, i.root.cols, i.aux_cols))
                .collect::<Vec<_>>()
                .join("\n")
        };
        return Ok(Outcome::Text(text));
    };
    // Large outputs are streamed as JSON lines, one coordinate per line.
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut out = BufWriter::new(file);
    let mut written = 0u64;
    for (idx, v) in phik_stream(t, level)? {
        serde_json::to_writer(&mut out, &coord_json(&idx, &v))?;
        out.write_all(b"\n")?;
        written += 1;
    }
    out.flush()?;
    Ok(Outcome::Written(format!(
        "wrote {written} coordinates to {}",
        path.display()
    )))
}
