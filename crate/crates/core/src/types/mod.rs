//! Types over variable-extended signatures: realization, the named type
//! families, and bounded isolation search.

mod families;
mod isolate;
mod logic_type;
mod realize;

use thiserror::Error;

pub use families::{build_inf_type, build_tc, build_tf, CtorType};
pub use isolate::{search_isolation, IsolationBounds, IsolationSearch, IsolationWitness};
pub use logic_type::LogicType;
pub use realize::{realizes, Realizer};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("the signature declares no constructors")]
    MissingCtors,
    #[error("node budget of {0} exhausted")]
    ResourceLimit(u64),
    #[error("{0}")]
    Eval(#[from] crate::finmod::EvalError),
    #[error("ill-formed input: {0}")]
    IllFormed(String),
}

impl From<crate::finmod::EnumError> for TypeError {
    fn from(e: crate::finmod::EnumError) -> Self {
        match e {
            crate::finmod::EnumError::ResourceLimit(n) => TypeError::ResourceLimit(n),
            crate::finmod::EnumError::Eval(e) => TypeError::Eval(e),
            crate::finmod::EnumError::BadBound(b) => TypeError::IllFormed(b),
        }
    }
}
