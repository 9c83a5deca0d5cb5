use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("precision must be at least {min} digits, got {got}")]
    Precision { min: u32, got: u32 },

    #[error("{source_name}:{line}: {msg}")]
    Parse {
        source_name: String,
        line: usize,
        msg: String,
    },

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("coefficients are not normalised: a_1 = {0}")]
    NotNormalized(String),

    #[error("coefficients are not multiplicative: a_{product} != a_{m} * a_{n}")]
    NotMultiplicative { m: usize, n: usize, product: usize },

    #[error("need {needed} coefficients, only {available} available")]
    InsufficientTerms { needed: usize, available: usize },

    #[error("iterated integral order {ell} outside 0..={max}")]
    IterationOrder { ell: usize, max: usize },

    #[error("Fricke sign undetermined (residuals {plus:e} for +1, {minus:e} for -1)")]
    SignUndetermined { plus: f64, minus: f64 },

    #[error("form [{a}, {b}, {c}] is not positive definite")]
    NotPositiveDefinite { a: i64, b: i64, c: i64 },

    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),

    #[error("r = {r} does not satisfy r^2 = {disc} mod {modulus}")]
    BadRoot { disc: i64, r: i64, modulus: i64 },

    #[error("Heegner enumeration found {found} of {expected} classes for D = {disc}")]
    HeegnerEnumeration {
        disc: i64,
        found: usize,
        expected: usize,
    },

    #[error("generator {0:?} fixes the cusp at infinity")]
    FixesInfinity([[i64; 2]; 2]),

    #[error("invalid generator {matrix:?}: {msg}")]
    Generator { matrix: [[i64; 2]; 2], msg: String },

    #[error("Atkin-Lehner eigenvalue for {matrix:?} is not +-1 (got {value})")]
    Eigenvalue { matrix: [[i64; 2]; 2], value: f64 },

    #[error("periods span a lattice of rank < 2")]
    RankDeficient,

    #[error("no integer relation with coefficients below {bound} (residual {residual:e})")]
    NoRelation { bound: String, residual: f64 },

    #[error("lattice has no primitive vector on the imaginary axis")]
    NotRealLattice,

    #[error("Fricke sign is +1: the points already lie in the lattice")]
    TrivialSign,

    #[error("anchor point y_f has zero real part")]
    ZeroAnchor,

    #[error("fit for D = {disc} is unstable under a precision bump")]
    Unstable { disc: i64 },

    #[error("series inversion needs a unit leading coefficient")]
    NonUnitLeading,

    #[error("series has non-integral exponent q^{q}/24 zeta^{z}/2")]
    NonIntegralExponent { q: i64, z: i64 },

    #[error("coefficient q^{n} lies beyond the truncation order")]
    Truncated { n: i64 },

    #[error("c(n, r) depends on r for M = {big_m}")]
    IllDefined { big_m: u64 },

    #[error("twisted L-value for D = {disc}: cutoffs disagree to {digits} digits")]
    CutoffDisagreement { disc: i64, digits: u32 },

    #[error("gcd(D, N) != 1 for D = {disc}, N = {level}")]
    NotCoprime { disc: i64, level: u64 },

    #[error("configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
