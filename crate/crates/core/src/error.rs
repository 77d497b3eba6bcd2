use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("polynomial vanishes at the interval endpoint {0}")]
    RootAtEndpoint(String),

    #[error("polynomial is not squarefree (gcd with derivative has degree {0})")]
    NotSquarefree(usize),

    #[error("construction of Xi_{n} failed: {reason}")]
    Construction { n: usize, reason: String },

    #[error("evaluation point is within {distance} of a root or pole")]
    NearSingularity { distance: String },

    #[error("denominator {0} lost in cancellation at the working precision")]
    DivisionRisk(String),

    #[error("refinement radius {radius} is not small against the distance {gap} to 1")]
    Unresolved { radius: String, gap: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
