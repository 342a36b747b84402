use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use adele_zeta::characters::{enumerate_characters, kronecker_character, DirichletCharacter};
use adele_zeta::global::EngineParams;
use adele_zeta::verify::{CheckOptions, Suite};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A primitive character: `trivial`, `d=<disc>` or `q=<modulus>:<index>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CharSpec {
    Trivial,
    Discriminant(i64),
    Indexed { modulus: u64, index: usize },
}

impl FromStr for CharSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "trivial" {
            return Ok(CharSpec::Trivial);
        }
        if let Some(d) = s.strip_prefix("d=") {
            return d.parse().map(CharSpec::Discriminant).map_err(|e| format!("bad discriminant '{d}': {e}"));
        }
        if let Some(rest) = s.strip_prefix("q=") {
            let (q, k) = rest.split_once(':').ok_or_else(|| format!("expected q=<modulus>:<index>, got '{s}'"))?;
            let modulus = q.parse().map_err(|e| format!("bad modulus '{q}': {e}"))?;
            let index = k.parse().map_err(|e| format!("bad index '{k}': {e}"))?;
            return Ok(CharSpec::Indexed { modulus, index });
        }
        Err(format!("unknown character '{s}' (use trivial, d=<disc> or q=<modulus>:<index>)"))
    }
}

impl TryFrom<String> for CharSpec {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<CharSpec> for String {
    fn from(c: CharSpec) -> String {
        c.to_string()
    }
}

impl fmt::Display for CharSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharSpec::Trivial => write!(f, "trivial"),
            CharSpec::Discriminant(d) => write!(f, "d={d}"),
            CharSpec::Indexed { modulus, index } => write!(f, "q={modulus}:{index}"),
        }
    }
}

impl CharSpec {
    pub fn resolve(&self) -> Result<DirichletCharacter, String> {
        let chi = match *self {
            CharSpec::Trivial => DirichletCharacter::trivial(1).map_err(|e| e.to_string())?,
            CharSpec::Discriminant(d) => kronecker_character(d).map_err(|e| e.to_string())?,
            CharSpec::Indexed { modulus, index } => {
                let all = enumerate_characters(modulus).map_err(|e| e.to_string())?;
                let n = all.len();
                all.into_iter()
                    .nth(index)
                    .ok_or_else(|| format!("index {index} out of range: {n} characters mod {modulus}"))?
            }
        };
        if !chi.is_primitive() {
            return Err(format!("character {self} is not primitive (conductor {})", chi.conductor()));
        }
        Ok(chi)
    }
}

/// Parses `2`, `-1.5`, `0.5+14.13i`, `0.5-2i`, `3i`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number '{s}'");
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            x => x,
        };
        let re: f64 = re.parse().map_err(|_| bad())?;
        let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
        return Ok(Complex64::new(re, im));
    }
    t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Continued,
    Euler,
}

/// Points of an evaluation grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SGrid {
    pub points: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    Eval {
        character: CharSpec,
        grid: SGrid,
        strip_gamma: bool,
        method: MethodChoice,
        cutoff: u64,
    },
    Check {
        suite: Suite,
        options: CheckOptions,
    },
    Profile {
        character: CharSpec,
        sigma: f64,
        t_min: f64,
        t_max: f64,
        step: f64,
        gamma_only: bool,
        cutoff: u64,
    },
    Decompose {
        discriminant: i64,
        pmax: u64,
        /// `(q, order)`: the characters mod `q` whose order divides `order`.
        abelian: Option<(u64, u64)>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub engine: EngineParams,
}

impl RunConfig {
    /// Rejects combinations that cannot run, before any computation.
    pub fn validate(&self) -> Result<(), String> {
        let e = &self.engine;
        if !(e.quad_abs_tol > 0.0 && e.quad_rel_tol > 0.0 && e.theta_tail > 0.0 && e.max_intervals > 0) {
            return Err("tolerances and interval budget must be positive".into());
        }
        match &self.command {
            Command::Eval { character, grid, method, cutoff, .. } => {
                character.resolve()?;
                if grid.points.is_empty() {
                    return Err("empty s-grid".into());
                }
                if *method == MethodChoice::Euler {
                    if *cutoff < 2 {
                        return Err("prime cutoff must be at least 2".into());
                    }
                    if let Some(s) = grid.points.iter().find(|s| s.re <= 1.0) {
                        return Err(format!("euler method needs Re s > 1, got s = {s}"));
                    }
                }
            }
            Command::Check { options, .. } => {
                if options.points == 0 {
                    return Err("need at least one sample point".into());
                }
            }
            Command::Profile { character, t_min, t_max, step, gamma_only, .. } => {
                character.resolve()?;
                if !(*step > 0.0) || !(t_max > t_min) {
                    return Err(format!("empty t-grid: [{t_min}, {t_max}] with step {step}"));
                }
                if *gamma_only && *t_max < 10.0 {
                    return Err("gamma profile starts at t = 10; need --tmax >= 10".into());
                }
                if !*gamma_only && *t_min <= 1.0 {
                    return Err("growth profile needs --tmin > 1".into());
                }
            }
            Command::Decompose { discriminant, pmax, abelian } => {
                kronecker_character(*discriminant).map_err(|e| e.to_string())?;
                if *pmax < 2 {
                    return Err("--pmax must be at least 2".into());
                }
                if let Some((q, order)) = abelian {
                    if *q == 0 || *order == 0 {
                        return Err("abelian group needs positive modulus and order".into());
                    }
                }
            }
        }
        Ok(())
    }
}
