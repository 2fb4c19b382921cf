use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter or index is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request would require enumerating more than the supported state space.
    #[error("capacity exceeded: {what} (limit {limit}, requested {requested})")]
    Capacity {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    /// The condition is not defined for this game (for example, pairwise
    /// private-monitoring conditions with only two firms).
    #[error("condition inapplicable: {0}")]
    Inapplicable(String),

    /// A closed-form path cannot handle the input; the message names the
    /// route that can.
    #[error("{reason}; use {redirect} instead")]
    Redirect {
        reason: String,
        redirect: &'static str,
    },

    /// A strategy produced an action or message outside the protocol.
    #[error("protocol error: firm {firm} in period {period}: {message}")]
    Protocol {
        firm: usize,
        period: usize,
        message: String,
    },

    /// A promised continuation left the feasible set during simulation.
    #[error(
        "discount too small: continuation left the feasible set in period {period} \
         (observed updates stay feasible only for delta >= {min_delta})"
    )]
    DiscountTooSmall { period: usize, min_delta: f64 },

    /// The linear program solver failed where the model guarantees a solution.
    #[error("internal solver error: {0}")]
    Solver(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
