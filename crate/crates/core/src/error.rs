use std::fmt;

/// A Courant number that exceeded the stability bound of the kernel it was
/// handed to.
#[derive(Debug, Clone, PartialEq)]
pub struct CflViolation {
    pub courant: f64,
    pub limit: f64,
    /// Where the violation happened, innermost last, e.g.
    /// `strang sub-step 2 / L_V / column 17`.
    pub location: Vec<String>,
}

impl CflViolation {
    pub fn new(courant: f64, limit: f64) -> Self {
        CflViolation {
            courant,
            limit,
            location: Vec::new(),
        }
    }

    /// Prefix an outer context label.
    pub fn within(mut self, label: impl Into<String>) -> Self {
        self.location.insert(0, label.into());
        self
    }
}

impl fmt::Display for CflViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|courant| = {} exceeds the stability bound {}",
            self.courant.abs(),
            self.limit
        )?;
        if !self.location.is_empty() {
            write!(f, " at {}", self.location.join(" / "))?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("CFL violation: {0}")]
    Cfl(CflViolation),

    #[error("invalid domain: {0}")]
    Domain(String),

    #[error("invalid initial condition: {0}")]
    InitialCondition(String),

    #[error("distribution weights violate beta/3 + 2 alpha/3 = 1 (alpha = {alpha}, beta = {beta})")]
    DistributionParams { alpha: f64, beta: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("Poisson stations are not uniformly spaced")]
    NonUniformStations,

    #[error("resolution {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("reference field has zero L1 norm")]
    ZeroReference,

    #[error("found {found} usable samples for the rate fit, need at least {needed}")]
    InsufficientSamples { found: usize, needed: usize },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Attach an outer location label to a CFL error; other variants pass
    /// through untouched.
    pub fn within(self, label: impl Into<String>) -> Self {
        match self {
            Error::Cfl(v) => Error::Cfl(v.within(label)),
            other => other,
        }
    }
}

impl From<CflViolation> for Error {
    fn from(v: CflViolation) -> Self {
        Error::Cfl(v)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
