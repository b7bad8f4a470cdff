use std::collections::HashMap;
use std::fmt::Write;

use super::{parse_pair, require_token, Pair};
use crate::error::{Error, Result};
use crate::model::text::records;

const FORMAT: &str = "invocation description";

/// One service call: inputs read from engine storage (or given literally),
/// result stored under `output`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvocationStep {
    pub service: String,
    pub inputs: Vec<Pair>,
    pub output: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvocationDescription {
    pub steps: Vec<InvocationStep>,
}

impl InvocationDescription {
    /// Index of the step producing `reference`, if any.
    pub fn producer_of(&self, reference: &str) -> Option<usize> {
        self.steps.iter().position(|s| s.output == reference)
    }

    /// Single assignment and no reads of data produced by the same or a later step.
    pub fn check(&self) -> Result<()> {
        check_steps(&self.steps, |_| 0)
    }
}

fn check_steps(steps: &[InvocationStep], line_of: impl Fn(usize) -> usize) -> Result<()> {
    let mut producer: HashMap<&str, usize> = HashMap::new();
    for (i, s) in steps.iter().enumerate() {
        if s.inputs.is_empty() {
            return Err(Error::parse(FORMAT, line_of(i), "step has no inputs"));
        }
        if producer.insert(s.output.as_str(), i).is_some() {
            return Err(Error::parse(
                FORMAT,
                line_of(i),
                format!("output `{}` is produced more than once", s.output),
            ));
        }
    }
    for (i, s) in steps.iter().enumerate() {
        for r in s.inputs.iter().flat_map(Pair::references) {
            if let Some(&j) = producer.get(r) {
                if j >= i {
                    return Err(Error::parse(
                        FORMAT,
                        line_of(i),
                        format!("`{r}` is read before the step producing it"),
                    ));
                }
            }
        }
    }
    Ok(())
}

pub fn parse_invocation_description(text: &str) -> Result<InvocationDescription> {
    let mut steps = Vec::new();
    let mut lines = Vec::new();
    for (line, fields) in records(text) {
        if fields.len() < 3 {
            return Err(Error::parse(
                FORMAT,
                line,
                "expected `SERVICE PARAM:VALUE... OUTPUT`",
            ));
        }
        let service = fields[0];
        if service.contains('\'') {
            return Err(Error::parse(
                FORMAT,
                line,
                format!("invalid service name `{service}`"),
            ));
        }
        let output = fields[fields.len() - 1];
        require_token(FORMAT, line, "output reference", output)?;
        let inputs = fields[1..fields.len() - 1]
            .iter()
            .map(|f| parse_pair(FORMAT, line, f))
            .collect::<Result<_>>()?;
        steps.push(InvocationStep {
            service: service.to_string(),
            inputs,
            output: output.to_string(),
        });
        lines.push(line);
    }
    check_steps(&steps, |i| lines[i])?;
    Ok(InvocationDescription { steps })
}

pub fn serialize_invocation_description(inv: &InvocationDescription) -> String {
    let mut out = String::new();
    for s in &inv.steps {
        out.push_str(&s.service);
        for p in &s.inputs {
            write!(out, " {p}").unwrap();
        }
        writeln!(out, " {}", s.output).unwrap();
    }
    out
}
