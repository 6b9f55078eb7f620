use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A value fell outside the domain of a map.
    #[error("domain error: {0}")]
    Domain(String),

    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Vertices without any outgoing edge at the requested threshold.
    /// Each entry carries the vertex and its minimal outgoing gap; any
    /// threshold strictly above that gap restores the edge.
    #[error("{} vertex(es) have no outgoing edge at eps={eps}: {}", vertices.len(),
        vertices.iter().map(|(v, g)| format!("{v} (min gap {g})")).collect::<Vec<_>>().join(", "))]
    NoOutgoingEdge {
        eps: f64,
        vertices: Vec<(usize, f64)>,
    },

    /// The threshold does not exceed the projection resolution.
    #[error("eps={eps} must exceed the projection resolution rho={rho}")]
    EpsBelowResolution { eps: f64, rho: f64 },

    /// A metric transform that does not yield a metric.
    #[error("invalid metric transform: {0}")]
    MetricTransform(String),

    /// Configuration could not be interpreted.
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
