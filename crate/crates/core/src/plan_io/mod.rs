//! The three plan scripts exchanged between solver, planner and executor.
//!
//! * invocation description: `SERVICE PAIR... OUTPUT`, one invocation per line
//! * deployment plan: `SERVICE --> REGION`
//! * execution plan: host, engine and deployment declarations followed by
//!   per-engine invocation and transfer steps
//!
//! A `PAIR` is `param:value`. Either side wrapped in single quotes is a
//! literal; otherwise it names data stored in the invoking engine. `#` starts
//! a comment line and blank lines are ignored in every format.

mod deployment;
mod execution;
mod generate;
mod invocation;

pub use deployment::{parse_deployment_plan, serialize_deployment_plan};
pub use execution::{
    parse_execution_plan, serialize_execution_plan, Deployment, EngineDecl, ExecutionPlan, Host,
    Invocation, Step, Transfer,
};
pub use generate::{generate_execution_plan, stub_hosts, HostRecord};
pub use invocation::{
    parse_invocation_description, serialize_invocation_description, InvocationDescription,
    InvocationStep,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::model::is_token;

/// Either side of an input pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Operand {
    pub text: String,
    /// Quoted: passed by value. Unquoted: a reference to stored data.
    pub literal: bool,
}

impl Operand {
    pub fn literal(text: impl Into<String>) -> Self {
        Operand {
            text: text.into(),
            literal: true,
        }
    }

    pub fn reference(text: impl Into<String>) -> Self {
        Operand {
            text: text.into(),
            literal: false,
        }
    }

    /// The referenced data name, if this operand is a reference.
    pub fn as_reference(&self) -> Option<&str> {
        (!self.literal).then_some(self.text.as_str())
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literal {
            write!(f, "'{}'", self.text)
        } else {
            f.write_str(&self.text)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pair {
    pub param: Operand,
    pub value: Operand,
}

impl Pair {
    pub fn new(param: Operand, value: Operand) -> Self {
        Pair { param, value }
    }

    /// Data names this pair reads, parameter first.
    pub fn references(&self) -> impl Iterator<Item = &str> {
        self.param
            .as_reference()
            .into_iter()
            .chain(self.value.as_reference())
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.param, self.value)
    }
}

fn take_operand<'s>(format: &'static str, line: usize, s: &'s str) -> Result<(Operand, &'s str)> {
    if let Some(body) = s.strip_prefix('\'') {
        let end = body
            .find('\'')
            .ok_or_else(|| Error::parse(format, line, format!("unterminated quote in `{s}`")))?;
        if end == 0 {
            return Err(Error::parse(format, line, "empty quoted operand"));
        }
        Ok((Operand::literal(&body[..end]), &body[end + 1..]))
    } else {
        let end = s.find(':').unwrap_or(s.len());
        let text = &s[..end];
        if text.is_empty() {
            return Err(Error::parse(format, line, "empty operand"));
        }
        if text.contains('\'') {
            return Err(Error::parse(
                format,
                line,
                format!("stray quote in `{text}`"),
            ));
        }
        Ok((Operand::reference(text), &s[end..]))
    }
}

pub(crate) fn parse_pair(format: &'static str, line: usize, field: &str) -> Result<Pair> {
    let (param, rest) = take_operand(format, line, field)?;
    let rest = rest
        .strip_prefix(':')
        .ok_or_else(|| Error::parse(format, line, format!("input field `{field}` lacks `:`")))?;
    let (value, rest) = take_operand(format, line, rest)?;
    if !rest.is_empty() {
        return Err(Error::parse(
            format,
            line,
            format!("unexpected `{rest}` after value in `{field}`"),
        ));
    }
    Ok(Pair { param, value })
}

pub(crate) fn require_token(format: &'static str, line: usize, what: &str, s: &str) -> Result<()> {
    if is_token(s) {
        Ok(())
    } else {
        Err(Error::parse(format, line, format!("invalid {what} `{s}`")))
    }
}
