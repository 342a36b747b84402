use std::fs::File;
use std::io::{self, BufWriter, Write};

use adele_zeta::arch::{stirling_profile, GammaFactor};
use adele_zeta::arith::primes_list;
use adele_zeta::characters::{enumerate_characters, DirichletCharacter};
use adele_zeta::error::Error;
use adele_zeta::field_ext::{abelian_decomposition_identity, QuadraticExtensionData};
use adele_zeta::global::{CompletedLFunction, Evaluation};
use adele_zeta::mellin::growth_report;
use adele_zeta::verify;
use rayon::prelude::*;

use crate::config::{Command, Format, MethodChoice, RunConfig};

pub const EXIT_CHECK: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Pole { .. } | Error::GammaPole(_) | Error::Divergent { .. } => EXIT_DOMAIN,
        _ => EXIT_CONFIG,
    }
}

fn report(e: &Error) {
    match e {
        Error::Pole { location, polar: Some(pd) } => {
            let residue = if location.re > 0.5 { pd.residue_at_1 } else { pd.residue_at_0 };
            eprintln!("error: pole at s = {location}, residue {residue}");
        }
        _ => eprintln!("error: {e}"),
    }
}

fn sink(cfg: &RunConfig) -> io::Result<Box<dyn Write>> {
    Ok(match &cfg.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Runs a validated configuration and returns the exit code.
pub fn execute(cfg: &RunConfig) -> u8 {
    let mut out = match sink(cfg) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: cannot open output: {e}");
            return EXIT_CONFIG;
        }
    };
    let code = match dispatch(cfg, &mut out) {
        Ok(code) => code,
        Err(Failure::Core(e)) => {
            report(&e);
            exit_for(&e)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    };
    if let Err(e) = out.flush() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    code
}

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Out<'a> = &'a mut Box<dyn Write>;

fn dispatch(cfg: &RunConfig, out: Out) -> Result<u8, Failure> {
    match &cfg.command {
        Command::Eval { character, grid, strip_gamma, method, cutoff } => {
            let chi = character.resolve().map_err(Error::Invalid)?;
            let l = CompletedLFunction::new(&chi, cfg.engine)?;
            let results: Vec<Result<Evaluation, Error>> = grid
                .points
                .par_iter()
                .map(|&s| match (method, strip_gamma) {
                    (MethodChoice::Continued, false) => l.lambda(s),
                    (MethodChoice::Continued, true) => l.l_value(s),
                    (MethodChoice::Euler, false) => l.lambda_euler(s, *cutoff),
                    (MethodChoice::Euler, true) => l.l_value_euler(s, *cutoff),
                })
                .collect();
            emit_evaluations(cfg.format.unwrap_or(Format::Json), &results, out)
        }
        Command::Check { suite, options } => {
            let r = verify::run(*suite, options)?;
            match cfg.format {
                Some(Format::Json) => writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?,
                Some(Format::Csv) => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["name", "residual", "tolerance", "passed"])?;
                    for l in &r.lines {
                        w.write_record([l.name.clone(), sci(l.residual), sci(l.tolerance), l.passed.to_string()])?;
                    }
                    w.flush()?;
                }
                None => {
                    for l in &r.lines {
                        let tag = if l.passed { "PASS" } else { "FAIL" };
                        writeln!(out, "{tag}  {}  residual={}  tol={}", l.name, sci(l.residual), sci(l.tolerance))?;
                    }
                    let ok = r.lines.iter().filter(|l| l.passed).count();
                    writeln!(out, "{}: {ok}/{} passed", r.suite, r.lines.len())?;
                }
            }
            for l in r.lines.iter().filter(|l| !l.passed) {
                eprintln!("failed: {} residual {} > {}", l.name, sci(l.residual), sci(l.tolerance));
            }
            Ok(if r.passed() { 0 } else { EXIT_CHECK })
        }
        Command::Profile { character, sigma, t_min, t_max, step, gamma_only, cutoff } => {
            let chi = character.resolve().map_err(Error::Invalid)?;
            let format = cfg.format.unwrap_or(Format::Csv);
            if *gamma_only {
                let factor = GammaFactor::real(chi.parity());
                let p = stirling_profile(&factor, *sigma, *t_max, *step)?;
                if format == Format::Json {
                    writeln!(out, "{}", serde_json::to_string_pretty(&p)?)?;
                    return Ok(0);
                }
                writeln!(out, "# gamma factor Gamma_R(s+{}) on sigma = {}", chi.parity(), sigma)?;
                writeln!(out, "# fitted_rate = {:.6}, expected_rate = {:.6}", p.fitted_rate, p.rate)?;
                writeln!(out, "# exponent = {:.6}, max_deviation = {}", p.exponent, sci(p.max_deviation))?;
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(["t", "log_abs", "model", "deviation"])?;
                for r in &p.rows {
                    w.write_record([fx(r.t), fx(r.log_abs), fx(r.model), sci(r.deviation)])?;
                }
                w.flush()?;
            } else {
                let r = growth_report(&chi, *sigma, *t_min, *t_max, *step, *cutoff)?;
                if format == Format::Json {
                    writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?;
                    return Ok(0);
                }
                writeln!(out, "# Lambda(s, {character}) on sigma = {sigma}, t in [{t_min}, {t_max}]")?;
                writeln!(out, "# fitted_rate = {:.6}, expected_rate = {:.6}", r.fitted_rate, r.expected_rate)?;
                writeln!(out, "# band_ratio = {:.6} (max |ln(|Lambda|/|Gamma_R|)| / ln t)", r.band_ratio)?;
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(["t", "re", "im", "log_abs", "model", "err_bound"])?;
                for row in &r.rows {
                    w.write_record([
                        fx(row.t),
                        sci(row.lambda.re),
                        sci(row.lambda.im),
                        fx(row.log_abs_lambda),
                        fx(row.log_abs_gamma),
                        sci(row.err_bound),
                    ])?;
                }
                w.flush()?;
            }
            Ok(0)
        }
        Command::Decompose { discriminant, pmax, abelian } => decompose(*discriminant, *pmax, *abelian, cfg.format, out),
    }
}

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

fn fx(x: f64) -> String {
    format!("{x:.12}")
}

fn emit_evaluations(format: Format, results: &[Result<Evaluation, Error>], out: Out) -> Result<u8, Failure> {
    let mut code = 0;
    let mut csv_writer = (format == Format::Csv).then(|| csv::Writer::from_writer(Vec::new()));
    if let Some(w) = csv_writer.as_mut() {
        w.write_record(["s_re", "s_im", "value_re", "value_im", "err_bound", "method"])?;
    }
    for r in results {
        match r {
            Ok(e) => match csv_writer.as_mut() {
                Some(w) => {
                    let method = serde_json::to_value(e.method)?.as_str().unwrap_or_default().to_string();
                    w.write_record([
                        e.s.re.to_string(),
                        e.s.im.to_string(),
                        sci_full(e.value.re),
                        sci_full(e.value.im),
                        sci(e.err_bound),
                        method,
                    ])?;
                }
                None => writeln!(out, "{}", serde_json::to_string(e)?)?,
            },
            Err(e) => {
                report(e);
                code = code.max(exit_for(e));
            }
        }
    }
    if let Some(w) = csv_writer {
        out.write_all(&w.into_inner().map_err(|e| Failure::Io(e.to_string()))?)?;
    }
    Ok(code)
}

fn sci_full(x: f64) -> String {
    format!("{x:.16e}")
}

fn factor_string(coeffs: &[i64]) -> String {
    let mut terms = Vec::new();
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "X".into(),
            _ => format!("X^{k}"),
        };
        let body = match (c.abs(), k) {
            (1, 0) => "1".to_string(),
            (1, _) => mono,
            (a, _) => format!("{a}{mono}"),
        };
        terms.push(if terms.is_empty() {
            if c < 0 { format!("-{body}") } else { body }
        } else if c < 0 {
            format!(" - {body}")
        } else {
            format!(" + {body}")
        });
    }
    format!("1/({})", terms.concat())
}

fn decompose(d: i64, pmax: u64, abelian: Option<(u64, u64)>, format: Option<Format>, out: Out) -> Result<u8, Failure> {
    let primes = primes_list(pmax);
    let mut all_exact = true;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut json_rows = Vec::new();
    match abelian {
        None => {
            let k = QuadraticExtensionData::new(d)?;
            w.write_record(["p", "splitting", "e_factor", "f_factor_product", "exact"])?;
            for &p in &primes {
                let c = k.decomposition_identity(p)?;
                let f_product = match c.eta {
                    0 => "1/(1 - X)".to_string(),
                    1 => "1/((1 - X)(1 - X))".to_string(),
                    _ => "1/((1 - X)(1 + X))".to_string(),
                };
                let exact = c.residual == 0;
                all_exact &= exact;
                let splitting = serde_json::to_value(c.splitting)?.as_str().unwrap_or_default().to_string();
                let e_factor = factor_string(&c.dedekind_denominator);
                json_rows.push(serde_json::json!({
                    "p": p, "splitting": splitting, "e_factor": e_factor, "f_factor_product": f_product, "exact": exact
                }));
                w.write_record([p.to_string(), splitting, e_factor, f_product, exact.to_string()])?;
            }
        }
        Some((q, n)) => {
            let group: Vec<DirichletCharacter> = enumerate_characters(q)?
                .into_iter()
                .filter(|c| n % c.order() == 0)
                .map(|c| c.primitive())
                .collect();
            w.write_record(["p", "residue_degree", "unramified", "e_factor", "exact"])?;
            for &p in &primes {
                let c = abelian_decomposition_identity(p, &group)?;
                all_exact &= c.exact;
                let e_factor = format!("(1 - X^{})^-{}", c.f, c.unramified as u64 / c.f);
                json_rows.push(serde_json::json!({
                    "p": p, "residue_degree": c.f, "unramified": c.unramified, "e_factor": e_factor, "exact": c.exact
                }));
                w.write_record([p.to_string(), c.f.to_string(), c.unramified.to_string(), e_factor, c.exact.to_string()])?;
            }
        }
    }
    if format == Some(Format::Json) {
        writeln!(out, "{}", serde_json::to_string_pretty(&json_rows)?)?;
    } else {
        out.write_all(&w.into_inner().map_err(|e| Failure::Io(e.to_string()))?)?;
    }
    Ok(if all_exact { 0 } else { EXIT_CHECK })
}
