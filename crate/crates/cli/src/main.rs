//! `adele-zeta`: evaluate completed Dirichlet L-functions, run the self-check
//! suites and emit growth profiles and decomposition tables.
//!
//! Exit codes: 0 ok, 1 check failure, 2 configuration error, 3 domain error (pole).

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use adele_zeta::global::EngineParams;
use adele_zeta::verify::{CheckOptions, Suite};
use clap::{Parser, Subcommand};

use config::{parse_complex, CharSpec, Command, Format, MethodChoice, RunConfig, SGrid};

#[derive(Parser, Debug)]
#[command(name = "adele-zeta", version, about = "Tate zeta integrals and Dirichlet L-functions over Q")]
struct Cli {
    /// Output format (defaults: json for eval, csv for profile and decompose, text for check)
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Write output here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Read the whole run configuration from a JSON file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the parsed configuration as JSON and exit
    #[arg(long, global = true)]
    print_config: bool,
    /// Absolute quadrature tolerance
    #[arg(long, global = true)]
    quad_tol: Option<f64>,
    /// Theta-series truncation tolerance
    #[arg(long, global = true)]
    theta_tail: Option<f64>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate Λ(s, χ) (or L(s, χ) with --strip-gamma) on a list of points
    Eval {
        #[arg(long = "char", default_value = "trivial")]
        character: String,
        /// Comma-separated points, e.g. 2,0.5+14.1i
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        /// Vertical line σ,t_min,t_max,step
        #[arg(long, allow_hyphen_values = true)]
        line: Option<String>,
        #[arg(long)]
        strip_gamma: bool,
        #[arg(long, value_enum, default_value = "continued")]
        method: MethodChoice,
        /// Prime cutoff for the Euler product
        #[arg(long, default_value_t = 10_000_000)]
        cutoff: u64,
    },
    /// Run a self-check suite
    Check {
        suite: String,
        /// Comma-separated fundamental discriminants
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
        #[arg(long)]
        pmax: Option<u64>,
        /// Comma-separated primes
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Sample |Λ(σ+it)| (or the gamma factor alone) and fit the decay rate
    Profile {
        #[arg(long = "char", default_value = "trivial")]
        character: String,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, default_value_t = 10.0)]
        tmin: f64,
        #[arg(long, default_value_t = 60.0, allow_hyphen_values = true)]
        tmax: f64,
        #[arg(long, default_value_t = 0.25, allow_hyphen_values = true)]
        step: f64,
        #[arg(long)]
        gamma_only: bool,
        #[arg(long, default_value_t = 1_000_000)]
        cutoff: u64,
    },
    /// Per-prime Euler-factor table for a quadratic (or abelian) field
    Decompose {
        #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = 229)]
        pmax: u64,
        /// Characters mod q of order dividing n, as q:n
        #[arg(long)]
        abelian: Option<String>,
    },
}

fn split_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|e| format!("bad {what} '{x}': {e}")))
        .collect()
}

fn build_grid(s: Option<String>, line: Option<String>) -> Result<SGrid, String> {
    match (s, line) {
        (Some(s), None) => Ok(SGrid { points: s.split(',').map(parse_complex).collect::<Result<_, _>>()? }),
        (None, Some(line)) => {
            let v: Vec<f64> = split_list(&line, "line parameter")?;
            let [sigma, t0, t1, step] = v[..] else {
                return Err("--line expects σ,t_min,t_max,step".into());
            };
            if !(step > 0.0) || t1 < t0 {
                return Err(format!("empty grid on the line σ = {sigma}"));
            }
            let n = ((t1 - t0) / step + 1e-9).floor() as usize + 1;
            Ok(SGrid { points: (0..n).map(|k| num_complex::Complex64::new(sigma, t0 + k as f64 * step)).collect() })
        }
        (None, None) => Err("give --s or --line".into()),
        (Some(_), Some(_)) => Err("--s and --line are exclusive".into()),
    }
}

fn build_config(cli: Cli) -> Result<RunConfig, String> {
    let mut engine = EngineParams::default();
    if let Some(t) = cli.quad_tol {
        engine.quad_abs_tol = t;
    }
    if let Some(t) = cli.theta_tail {
        engine.theta_tail = t;
    }
    if let Some(path) = cli.config {
        if cli.command.is_some() {
            return Err("--config and a subcommand are exclusive".into());
        }
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut cfg: RunConfig = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.format = cli.format.or(cfg.format);
        cfg.output = cli.output.or(cfg.output);
        return Ok(cfg);
    }
    let command = match cli.command.ok_or("missing subcommand (eval, check, profile, decompose)")? {
        Cmd::Eval { character, s, line, strip_gamma, method, cutoff } => Command::Eval {
            character: character.parse::<CharSpec>()?,
            grid: build_grid(s, line)?,
            strip_gamma,
            method,
            cutoff,
        },
        Cmd::Check { suite, d, pmax, p, points } => {
            let suite: Suite = suite.parse().map_err(|e: adele_zeta::error::Error| e.to_string())?;
            let mut options = CheckOptions::default();
            if let Some(d) = d {
                options.discriminants = split_list(&d, "discriminant")?;
            }
            if let Some(pmax) = pmax {
                options.pmax = pmax;
            }
            if let Some(p) = p {
                options.primes = split_list(&p, "prime")?;
            }
            if let Some(n) = points {
                options.points = n;
            }
            Command::Check { suite, options }
        }
        Cmd::Profile { character, sigma, tmin, tmax, step, gamma_only, cutoff } => Command::Profile {
            character: character.parse::<CharSpec>()?,
            sigma,
            t_min: tmin,
            t_max: tmax,
            step,
            gamma_only,
            cutoff,
        },
        Cmd::Decompose { d, pmax, abelian } => {
            let abelian = match abelian {
                Some(a) => {
                    let v: Vec<u64> = a.split(':').map(|x| x.parse().map_err(|e| format!("bad --abelian '{a}': {e}"))).collect::<Result<_, String>>()?;
                    let [q, n] = v[..] else { return Err("--abelian expects q:n".into()) };
                    Some((q, n))
                }
                None => None,
            };
            Command::Decompose { discriminant: d, pmax, abelian }
        }
    };
    Ok(RunConfig { command, format: cli.format, output: cli.output, engine })
}

fn configure_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("ADELE_ZETA_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| format!("ADELE_ZETA_THREADS must be a positive integer, got '{v}'"))?;
        if n == 0 {
            return Err("ADELE_ZETA_THREADS must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let print_config = cli.print_config;
    let cfg = match configure_threads().and_then(|_| build_config(cli)).and_then(|c| c.validate().map(|_| c)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(run::EXIT_CONFIG);
        }
    };
    if print_config {
        println!("{}", serde_json::to_string_pretty(&cfg).expect("serializable"));
        return ExitCode::SUCCESS;
    }
    ExitCode::from(run::execute(&cfg))
}
