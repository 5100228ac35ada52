use thiserror::Error;

/// Errors raised by certified operations.
///
/// Certificates that merely fail an inequality are *not* errors; they are
/// returned with `valid() == false`. Errors mean a precondition could not be
/// established, so nothing was produced.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not provably invertible by a Neumann series: |1 - u| = {distance} >= 1")]
    NotNeumannInvertible { distance: f64 },

    #[error("series truncation needs more than {cap} terms")]
    TermCap { cap: usize },

    #[error("idempotents not provably equivalent by proximity: 2|e||e-f| + |e-f|^2 = {bound} >= 1")]
    NotProximate { bound: f64 },

    #[error("lifting requires |a^2 - a| < 1/4, got {defect}")]
    DefectTooLarge { defect: f64 },

    #[error("{what}: {value} outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("witness not close enough: |a - a'| = {distance} >= 1")]
    WitnessTooFar { distance: f64 },

    #[error("{what} = {value} out of range (allowed {min}..={max})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        min: u64,
        max: u64,
    },

    #[error("generator could not reach the target band after {attempts} attempts")]
    GeneratorFailed { attempts: usize },

    #[error("instance mismatch: {0}")]
    InstanceMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("tower too shallow: no level up to depth {depth} achieves the required bound")]
    TowerTooShallow { depth: usize },

    #[error("path too wild for hint: gap {gap} on [{start}, {end}] still above threshold {threshold} at max depth")]
    PathTooWild {
        start: f64,
        end: f64,
        gap: f64,
        threshold: f64,
    },

    #[error("Lipschitz hint violated on [{start}, {end}]: gap {gap} > L * {width} with L = {hint}")]
    HintViolated {
        start: f64,
        end: f64,
        gap: f64,
        width: f64,
        hint: f64,
    },

    #[error("not an idempotent: defect {defect} exceeds {tol}")]
    NotIdempotent { defect: f64, tol: f64 },

    #[error("no decomposition of {m} within support bound {bound}")]
    NoDecomposition { m: i64, bound: u64 },

    #[error("matrix is numerically singular")]
    Singular,

    #[error("invalid descriptor: {0}")]
    Descriptor(String),

    #[error("invalid element: {0}")]
    Element(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
