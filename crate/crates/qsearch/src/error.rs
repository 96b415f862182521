use thiserror::Error;

/// Crate-wide error type. Generation errors carry enough context
/// (family, params, seed) to reproduce the failing job.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "generator `{family}` failed to produce a connected graph after {attempts} attempts \
         (params: {params}, seed: {seed:?})"
    )]
    Connectivity {
        family: String,
        params: String,
        seed: Option<u64>,
        attempts: u32,
    },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("graph is empty")]
    EmptyGraph,

    #[error("{path}:{line}: parse error: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("matrix dimension {n} exceeds configured cap {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("memory cap exceeded: operation requires {required} bytes, cap is {cap}")]
    MemoryCap { required: usize, cap: usize },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("linear system is singular or ill-conditioned (condition estimate {cond:.3e})")]
    IllConditioned { cond: f64 },

    #[error(
        "no overlap crossing of o0(gamma) - o1(gamma) inside bracket [{lo:.6e}, {hi:.6e}]; \
         scan trace (gamma, o0-o1): {trace}"
    )]
    NoCrossing { lo: f64, hi: f64, trace: String },

    #[error("energy gap {gap:.3e} below {min:.3e}: oscillation period undefined")]
    PeriodUndefined { gap: f64, min: f64 },

    #[error("horizon admits only {windows} peak windows, need at least {min}")]
    HorizonTooShort { windows: usize, min: usize },

    #[error("series truncation bound {bound:.3e} exceeds tolerance {tol:.3e} at n_max = {n_max}")]
    TruncationBound { bound: f64, tol: f64, n_max: usize },

    #[error("Neumann series diverges: spectral radius estimate {radius:.6} >= 1")]
    DivergentSeries { radius: f64 },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("missing reference record for class {class}")]
    MissingReference { class: String },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps an error with pipeline context (which stage, which graph).
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
