//! Workflows, locations and the per-unit data movement cost matrix.

mod matrix;
pub(crate) mod text;
mod workflow;

pub use matrix::CostMatrix;
pub use text::{parse_cost_matrix, parse_workflow, serialize_cost_matrix, serialize_workflow};
pub(crate) use workflow::Graph;
pub use workflow::{Service, Violation, Workflow};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// True when `s` is usable as an identifier in every file format.
pub fn is_token(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || c == '\'' || c == ':')
}

macro_rules! token_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Result<Self> {
                let name = name.into();
                if is_token(&name) {
                    Ok($name(name))
                } else {
                    Err(Error::InvalidToken(name))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                $name::new(s)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({:?})", stringify!($name), self.0)
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

token_id!(
    /// A cloud region. Engines are identified with regions: at most one
    /// engine runs in each location.
    LocationId
);

token_id!(
    /// Name of a web service within a workflow.
    ServiceId
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn token_rules() {
        assert!(LocationId::new("eu-west-1").is_ok());
        assert!(ServiceId::new("ws_1").is_ok());
        assert!(ServiceId::new("").is_err());
        assert!(ServiceId::new("a b").is_err());
        assert!(ServiceId::new("a:b").is_err());
        assert!(LocationId::new("'r1'").is_err());
    }
}
