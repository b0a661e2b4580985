use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("element {element} repeated inside one order")]
    RepeatedElement { element: usize },

    #[error("element {element} is outside the order's domain")]
    Uncovered { element: usize },

    #[error("permutation is not a bijection of {{0,…,{}}}", .n.saturating_sub(1))]
    NotBijective { n: usize },

    #[error("map is not injective: {value} has two preimages")]
    NotInjective { value: usize },

    #[error("element {element} is outside the permutation's domain")]
    OutsideDomain { element: usize },

    #[error("{what} is {got}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("sets are not disjoint: {element} occurs in both")]
    NotDisjoint { element: usize },

    #[error("relation is not a strict partial order: cycle through {element}")]
    Cyclic { element: usize },

    #[error(
        "presentation not homogeneous at this scale: no {side} witness for {element} \
         between {lower:?} and {upper:?} within {budget} candidates"
    )]
    Budget {
        side: &'static str,
        element: usize,
        lower: Option<usize>,
        upper: Option<usize>,
        budget: usize,
    },

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }

    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::RepeatedElement { .. } | Error::Format(_)
        )
    }
}
