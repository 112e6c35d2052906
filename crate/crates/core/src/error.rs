use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a valid negative discriminant (must be < 0 and congruent to 0 or 1 mod 4)")]
    InvalidDiscriminant(i64),

    #[error("discriminant {0} is not fundamental")]
    NotFundamental(i64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("form ({a}, {b}, {c}) is not positive definite")]
    NotPositiveDefinite { a: i64, b: i64, c: i64 },

    #[error("argument out of range: {0}")]
    Domain(String),

    #[error("enclosure contains zero; cannot divide")]
    DivisionByZero,

    #[error("precision of {digits} digits is unachievable within {max_terms} series terms")]
    PrecisionUnachievable { digits: u32, max_terms: usize },

    #[error("trace for D = {d} failed certification (residual bound {residual:e}) after {attempts} attempts")]
    CertificationFailed { d: i64, residual: f64, attempts: u32 },

    #[error("trace for D = {d} rounded to {twelve_a}, which is not divisible by 12")]
    NonIntegralTrace { d: i64, twelve_a: String },

    #[error("singular curve: 4a^3 + 27b^2 = 0")]
    SingularCurve,

    #[error("two-point L-value solve is ill-conditioned (root number estimate {w})")]
    IllConditioned { w: f64 },

    #[error("while processing D = {d}: {source}")]
    AtDiscriminant {
        d: i64,
        #[source]
        source: Box<Error>,
    },

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn at(d: i64, source: Error) -> Self {
        Error::AtDiscriminant {
            d,
            source: Box::new(source),
        }
    }
}
