use num_complex::Complex64;
use thiserror::Error;

use crate::global::PolarData;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("modulus {modulus} exceeds the supported bound {max}")]
    ModulusTooLarge { modulus: u64, max: u64 },
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("character mod {modulus} is not primitive (conductor {conductor})")]
    NotPrimitive { modulus: u64, conductor: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("integral diverges: need Re s > {abscissa}")]
    Divergent { abscissa: f64 },
    #[error("pole of the gamma function at {0}")]
    GammaPole(Complex64),
    #[error("pole at s = {location}")]
    Pole { location: Complex64, polar: Option<PolarData> },
    #[error("test function is nonzero at 0 (value {0}); expected a function on Q_p^×")]
    TouchesZero(Complex64),
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
    #[error("inconsistent character list: {0}")]
    InconsistentCharacters(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
