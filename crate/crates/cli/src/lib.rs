//! Command-line front end. [`run`] parses an argument list, dispatches to
//! the library and reports the exit status; `main` is a thin wrapper so the
//! whole surface is testable in-process.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use guesswork::designs::design_for;
use guesswork::oracle::{
    brute_force_delta, check_delta_sweep, check_theorem1, check_theorem2, OracleReport,
};
use guesswork::rational::{format_exact, parse_rational};
use guesswork::scan::{example_optimal, scan_simplex, DEFAULT_INNER_RESOLUTION};
use guesswork::{
    bound_certificate, canonical_optimal, expected_guesswork, kendall_tau, mismatch_cost,
    minimal_path, optimal_set, parse_distribution, verify_design, weighted_kendall, Distribution,
    GuessingFunction, Rational, DEFAULT_ENUMERATION_CAP,
};
use serde_json::{json, Value};

/// Environment variable capping the number of scan worker threads.
pub const THREADS_ENV: &str = "GUESSWORK_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "guesswork", version, about = "Exact guesswork under distribution mismatch")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mismatch cost delta(p, q).
    Delta {
        #[command(flatten)]
        pq: PairArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Expected number of guesses of a guessing function (default: optimal for p).
    Guesswork {
        #[arg(long)]
        p: String,
        #[arg(long)]
        g: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Kendall tau distance and a minimal adjacent-transposition path.
    Kendall {
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Probability-weighted Kendall divergence.
    Wkendall {
        #[arg(long)]
        p: String,
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// All guessing functions optimal for p.
    Optimal {
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Round-robin design on n symbols, with its verification report.
    Tournament {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Per-round decomposition behind delta(p, q) <= 2(n-1) TV(p, q).
    Certificate {
        #[command(flatten)]
        pq: PairArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Randomized check that expected cost equals the weighted Kendall divergence.
    #[command(name = "verify-thm1")]
    VerifyThm1 {
        #[command(flatten)]
        trials: TrialArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Randomized check of delta(p, q) <= 2(n-1) TV(p, q).
    #[command(name = "verify-thm2")]
    VerifyThm2 {
        #[command(flatten)]
        trials: TrialArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Ball maxima over the 3-symbol simplex, written as CSV.
    Scan {
        #[arg(long)]
        resolution: u64,
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value_t = DEFAULT_INNER_RESOLUTION)]
        inner_resolution: u64,
        /// Also write the JSON sidecar to this path.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// A pair whose mismatch cost is gamma times the bound.
    #[command(name = "example-optimal")]
    ExampleOptimal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        gamma: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Brute-force delta for one pair, or the closed form against brute
    /// force on every distribution with the given denominator.
    #[command(name = "oracle-delta")]
    OracleDelta {
        #[arg(long, requires = "q", conflicts_with = "n")]
        p: Option<String>,
        #[arg(long, requires = "p")]
        q: Option<String>,
        #[arg(long, required_unless_present = "p")]
        n: Option<usize>,
        /// Lattice denominator of the sweep.
        #[arg(long, default_value_t = 10)]
        resolution: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Distribution p, inline (`[0.5,0.5]`, `1/2,1/2`) or `@path`.
    #[arg(long)]
    p: String,
    /// Distribution q, inline or `@path`.
    #[arg(long)]
    q: String,
}

#[derive(Args, Debug)]
struct TrialArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug)]
enum Failure {
    Domain(guesswork::Error),
    Io { path: String, source: io::Error },
    Unsupported(&'static str, Format),
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Domain(e) => e.code(),
            Failure::Io { .. } => "IO",
            Failure::Unsupported(..) => "FORMAT",
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Domain(e) => write!(f, "{e}"),
            Failure::Io { path, source } => write!(f, "{path}: {source}"),
            Failure::Unsupported(cmd, format) => {
                write!(f, "{cmd} has no {format:?} output", format = format)
            }
        }
    }
}

impl From<guesswork::Error> for Failure {
    fn from(e: guesswork::Error) -> Self {
        Failure::Domain(e)
    }
}

/// What a subcommand produced: the rendered body and whether the run
/// counts as a success.
struct Rendered {
    body: String,
    ok: bool,
}

impl Rendered {
    fn ok(body: String) -> Self {
        Self { body, ok: true }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let out_path = output_args(&cli.command).out.clone();
    let result = dispatch(cli.command).and_then(|r| {
        match &out_path {
            Some(path) => fs::write(path, &r.body).map_err(|source| Failure::Io {
                path: path.display().to_string(),
                source,
            })?,
            None => {
                let _ = stdout.write_all(r.body.as_bytes());
            }
        }
        Ok(r.ok)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_DOMAIN,
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.code());
            EXIT_DOMAIN
        }
    }
}

fn output_args(c: &Command) -> &OutputArgs {
    match c {
        Command::Delta { out, .. }
        | Command::Guesswork { out, .. }
        | Command::Kendall { out, .. }
        | Command::Wkendall { out, .. }
        | Command::Optimal { out, .. }
        | Command::Tournament { out, .. }
        | Command::Certificate { out, .. }
        | Command::VerifyThm1 { out, .. }
        | Command::VerifyThm2 { out, .. }
        | Command::Scan { out, .. }
        | Command::ExampleOptimal { out, .. }
        | Command::OracleDelta { out, .. } => out,
    }
}

fn read_input(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|source| Failure::Io {
            path: path.to_string(),
            source,
        }),
        None => Ok(arg.to_string()),
    }
}

fn distribution(arg: &str) -> Result<Distribution, Failure> {
    Ok(parse_distribution(&read_input(arg)?)?)
}

fn guessing_function(arg: &str) -> Result<GuessingFunction, Failure> {
    Ok(read_input(arg)?.trim().parse::<GuessingFunction>()?)
}

fn rational(arg: &str) -> Result<Rational, Failure> {
    Ok(parse_rational(arg.trim())?)
}

fn with_schema(mut v: Value) -> String {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(1));
    }
    let mut s = v.to_string();
    s.push('\n');
    s
}

fn line(s: impl std::fmt::Display) -> String {
    format!("{s}\n")
}

/// Text, JSON, or an error for any other format.
fn render(name: &'static str, format: Format, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) -> Result<Rendered, Failure> {
    match format {
        Format::Text => Ok(Rendered::ok(text())),
        Format::Json => Ok(Rendered::ok(with_schema(value()))),
        Format::Csv => Err(Failure::Unsupported(name, format)),
    }
}

fn render_report(report: OracleReport, format: Format) -> Result<Rendered, Failure> {
    let ok = report.passed();
    let mut r = render(
        "verify",
        format,
        || {
            let mut s = format!(
                "{}: {} trials, {} skipped, {} failures",
                report.check,
                report.trials,
                report.skipped,
                report.failures.len()
            );
            if let Some(m) = &report.max_ratio {
                s.push_str(&format!(", max ratio {}", format_exact(m)));
            }
            s.push('\n');
            for f in &report.failures {
                s.push_str(&format!("  {}: expected {}, got {}\n", f.input, f.expected, f.got));
            }
            s
        },
        || serde_json::to_value(&report).expect("report json"),
    )?;
    r.ok = ok;
    Ok(r)
}

fn dispatch(command: Command) -> Result<Rendered, Failure> {
    match command {
        Command::Delta { pq, out } => {
            let (p, q) = (distribution(&pq.p)?, distribution(&pq.q)?);
            let delta = mismatch_cost(&p, &q)?;
            render("delta", out.format, || line(format_exact(&delta)), || {
                json!({ "delta": format_exact(&delta) })
            })
        }
        Command::Guesswork { p, g, out } => {
            let p = distribution(&p)?;
            let g = match g {
                Some(g) => guessing_function(&g)?,
                None => canonical_optimal(&p),
            };
            let value = expected_guesswork(&g, &p)?;
            render("guesswork", out.format, || line(format_exact(&value)), || {
                json!({ "g": g.ranks(), "guesswork": format_exact(&value) })
            })
        }
        Command::Kendall { s1, s2, out } => {
            let (s1, s2) = (guessing_function(&s1)?, guessing_function(&s2)?);
            let distance = kendall_tau(&s1, &s2)?;
            let path = minimal_path(&s1, &s2)?;
            render("kendall", out.format, || line(distance), || {
                json!({
                    "distance": distance,
                    "path": serde_json::from_str::<Value>(&path.to_json()).expect("path json"),
                })
            })
        }
        Command::Wkendall { p, s1, s2, out } => {
            let p = distribution(&p)?;
            let (s1, s2) = (guessing_function(&s1)?, guessing_function(&s2)?);
            let value = weighted_kendall(&p, &s1, &s2)?;
            render("wkendall", out.format, || line(format_exact(&value)), || {
                json!({ "weighted_kendall": format_exact(&value) })
            })
        }
        Command::Optimal { p, cap, out } => {
            let p = distribution(&p)?;
            let set = optimal_set(&p, cap)?;
            let functions: Vec<GuessingFunction> = set.iter().collect();
            render(
                "optimal",
                out.format,
                || {
                    let mut s = format!("{} optimal guessing function(s)\n", set.count());
                    for g in &functions {
                        s.push_str(&line(g));
                    }
                    s
                },
                || {
                    let groups: Vec<Vec<usize>> =
                        set.tie_groups().iter().map(|g| g.iter().map(|i| i + 1).collect()).collect();
                    json!({
                        "count": set.count().to_string(),
                        "tie_groups": groups,
                        "functions": functions.iter().map(|g| g.ranks()).collect::<Vec<_>>(),
                    })
                },
            )
        }
        Command::Tournament { n, out } => {
            let design = design_for(n)?;
            let report = verify_design(&design);
            let ok = report.is_valid();
            let mut r = render(
                "tournament",
                out.format,
                || {
                    let status = if ok { "valid".to_string() } else { format!("{:?}", report.violations) };
                    format!("{design}verification: {status}\n")
                },
                || {
                    let mut v: Value = serde_json::from_str(&design.to_json()).expect("design json");
                    v["verification"] = serde_json::to_value(&report).expect("report json");
                    v
                },
            )?;
            r.ok = ok;
            Ok(r)
        }
        Command::Certificate { pq, out } => {
            let (p, q) = (distribution(&pq.p)?, distribution(&pq.q)?);
            let cert = bound_certificate(&p, &q)?;
            let checked = cert.check();
            let mut r = render(
                "certificate",
                out.format,
                || {
                    let mut s = format!(
                        "n = {}, TV = {}, delta = {}, bound = {}\n",
                        cert.n,
                        format_exact(&cert.epsilon),
                        format_exact(&cert.delta),
                        format_exact(&cert.bound)
                    );
                    for g in &cert.groups {
                        s.push_str(&format!(
                            "{}: sum {}, inverted {}, {:?}\n",
                            g.label,
                            format_exact(&g.sum),
                            format_exact(&g.inverted_sum),
                            g.status
                        ));
                    }
                    match &checked {
                        Ok(()) => s.push_str("check: ok\n"),
                        Err(why) => s.push_str(&format!("check: FAILED ({why})\n")),
                    }
                    s
                },
                || {
                    let mut v = serde_json::to_value(&cert).expect("certificate json");
                    v["check"] = json!(checked.as_ref().err());
                    v
                },
            )?;
            r.ok = checked.is_ok();
            Ok(r)
        }
        Command::VerifyThm1 { trials, out } => {
            render_report(check_theorem1(trials.n, trials.trials, trials.seed)?, out.format)
        }
        Command::VerifyThm2 { trials, out } => {
            render_report(check_theorem2(trials.n, trials.trials, trials.seed)?, out.format)
        }
        Command::Scan { resolution, epsilon, inner_resolution, sidecar, out } => {
            let epsilon = rational(&epsilon)?;
            let grid = with_thread_cap(|| scan_simplex(resolution, &epsilon, inner_resolution))?;
            if let Some(path) = sidecar {
                fs::write(&path, format!("{}\n", grid.sidecar_json())).map_err(|source| Failure::Io {
                    path: path.display().to_string(),
                    source,
                })?;
            }
            match out.format {
                Format::Csv | Format::Text => {
                    let mut buf = Vec::new();
                    grid.write_csv(&mut buf).expect("writing to memory");
                    Ok(Rendered::ok(String::from_utf8(buf).expect("ascii csv")))
                }
                Format::Json => {
                    let mut v: Value = serde_json::from_str(&grid.sidecar_json()).expect("sidecar json");
                    v["rows"] = grid
                        .cells
                        .iter()
                        .map(|c| {
                            json!({
                                "p": c.p,
                                "max_delta": format_exact(&c.max_delta),
                                "argmax_q": c.argmax_q,
                                "max_kendall": c.max_kendall,
                            })
                        })
                        .collect();
                    Ok(Rendered::ok(with_schema(v)))
                }
            }
        }
        Command::ExampleOptimal { n, epsilon, gamma, out } => {
            let (epsilon, gamma) = (rational(&epsilon)?, rational(&gamma)?);
            let e = example_optimal(n, &epsilon, &gamma)?;
            render(
                "example-optimal",
                out.format,
                || format!("p = {}\nq = {}\ndelta = {}\n", e.p, e.q, format_exact(&e.delta)),
                || serde_json::to_value(&e).expect("example json"),
            )
        }
        Command::OracleDelta { p, q, n, resolution, out } => match (p, q, n) {
            (Some(p), Some(q), _) => {
                let (p, q) = (distribution(&p)?, distribution(&q)?);
                let delta = brute_force_delta(&p, &q)?;
                render("oracle-delta", out.format, || line(format_exact(&delta)), || {
                    json!({ "delta": format_exact(&delta) })
                })
            }
            (_, _, Some(n)) => render_report(check_delta_sweep(n, resolution)?, out.format),
            _ => unreachable!("clap requires --n or --p/--q"),
        },
    }
}

fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
