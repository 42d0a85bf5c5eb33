use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid JSON graph: {0}")]
    Json(String),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("probability {0} outside [0, 1]")]
    Probability(f64),

    #[error("invalid vertex order: {0}")]
    InvalidOrder(String),

    #[error("function values are not injective: vertices {first} and {second} share value {value}")]
    Tie { first: usize, second: usize, value: f64 },

    #[error("vertex {vertex} has degree {degree}, above the cap of {cap}")]
    DegreeAboveCap { vertex: usize, degree: usize, cap: usize },

    #[error("graph has {n} vertices, above the permutation oracle limit of {limit}")]
    TooManyVertices { n: usize, limit: usize },

    #[error("host graph has no K{} subgraph", .0 + 1)]
    NoCliques(usize),

    #[error("clique count overflowed 64 bits")]
    Overflow,

    #[error("clique enumeration exceeded the work budget of {0} steps")]
    BudgetExceeded(u64),

    #[error("{0}")]
    Invalid(String),
}
