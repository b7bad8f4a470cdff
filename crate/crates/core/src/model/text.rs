//! Line-oriented workflow and cost matrix files.
//!
//! ```text
//! # workflow
//! service s1 eu-west 5 2
//! service s2 us-east 2 1
//! edge s1 s2
//! ```
//!
//! ```text
//! locations eu-west us-east
//! eu-west 0.4 2
//! us-east 2 0.4
//! ```

use std::fmt::Write;

use super::{CostMatrix, LocationId, Service, ServiceId, Workflow};
use crate::error::{Error, Result};
use crate::rational::Rational;

const WORKFLOW: &str = "workflow";
const MATRIX: &str = "cost matrix";

/// Non-blank, non-comment lines with their 1-based line numbers.
pub(crate) fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((i + 1, trimmed.split_whitespace().collect()))
        }
    })
}

fn token<T: std::str::FromStr<Err = Error>>(
    format: &'static str,
    line: usize,
    s: &str,
) -> Result<T> {
    s.parse()
        .map_err(|e: Error| Error::parse(format, line, e.to_string()))
}

/// Parses workflow syntax. The result is not validated; see [`Workflow::validate`].
pub fn parse_workflow(text: &str) -> Result<Workflow> {
    let mut services = Vec::new();
    let mut edges = Vec::new();
    for (line, fields) in records(text) {
        match fields[0] {
            "service" => {
                if fields.len() != 5 {
                    return Err(Error::parse(
                        WORKFLOW,
                        line,
                        "expected `service <id> <location> <in_size> <out_size>`",
                    ));
                }
                services.push(Service::new(
                    token::<ServiceId>(WORKFLOW, line, fields[1])?,
                    token::<LocationId>(WORKFLOW, line, fields[2])?,
                    token::<Rational>(WORKFLOW, line, fields[3])?,
                    token::<Rational>(WORKFLOW, line, fields[4])?,
                ));
            }
            "edge" => {
                if fields.len() != 3 {
                    return Err(Error::parse(
                        WORKFLOW,
                        line,
                        "expected `edge <producer> <consumer>`",
                    ));
                }
                edges.push((
                    token::<ServiceId>(WORKFLOW, line, fields[1])?,
                    token::<ServiceId>(WORKFLOW, line, fields[2])?,
                ));
            }
            other => {
                return Err(Error::parse(
                    WORKFLOW,
                    line,
                    format!("unknown directive `{other}`"),
                ));
            }
        }
    }
    if services.is_empty() && edges.is_empty() {
        return Err(Error::invalid(WORKFLOW, "file declares no services"));
    }
    Ok(Workflow::new(services, edges))
}

pub fn serialize_workflow(w: &Workflow) -> String {
    let mut out = String::new();
    for s in w.services() {
        writeln!(
            out,
            "service {} {} {} {}",
            s.id, s.location, s.in_size, s.out_size
        )
        .unwrap();
    }
    for (p, c) in w.edges() {
        writeln!(out, "edge {p} {c}").unwrap();
    }
    out
}

pub fn parse_cost_matrix(text: &str) -> Result<CostMatrix> {
    let mut lines = records(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::invalid(MATRIX, "file is empty"))?;
    if header[0] != "locations" || header.len() < 2 {
        return Err(Error::parse(
            MATRIX,
            header_line,
            "expected `locations <id> ...`",
        ));
    }
    let locations: Vec<LocationId> = header[1..]
        .iter()
        .map(|s| token(MATRIX, header_line, s))
        .collect::<Result<_>>()?;
    let n = locations.len();
    let mut rows: Vec<Option<Vec<Rational>>> = vec![None; n];
    for (line, fields) in lines {
        let label = fields[0];
        let row = locations
            .iter()
            .position(|l| l.as_str() == label)
            .ok_or_else(|| {
                Error::parse(
                    MATRIX,
                    line,
                    format!("row `{label}` is not a declared location"),
                )
            })?;
        if fields.len() - 1 != n {
            return Err(Error::parse(
                MATRIX,
                line,
                format!(
                    "row `{label}` has {} entries, expected {n}",
                    fields.len() - 1
                ),
            ));
        }
        if rows[row].is_some() {
            return Err(Error::parse(
                MATRIX,
                line,
                format!("duplicate row `{label}`"),
            ));
        }
        let values = fields[1..]
            .iter()
            .map(|s| token::<Rational>(MATRIX, line, s))
            .collect::<Result<Vec<_>>>()?;
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return Err(Error::parse(
                MATRIX,
                line,
                format!("row `{label}` has negative cost {v}"),
            ));
        }
        rows[row] = Some(values);
    }
    let rows = rows
        .into_iter()
        .zip(&locations)
        .map(|(r, loc)| r.ok_or_else(|| Error::invalid(MATRIX, format!("missing row `{loc}`"))))
        .collect::<Result<Vec<_>>>()?;
    CostMatrix::new(locations, rows)
}

pub fn serialize_cost_matrix(m: &CostMatrix) -> String {
    let mut out = String::from("locations");
    for l in m.locations() {
        write!(out, " {l}").unwrap();
    }
    out.push('\n');
    for (i, from) in m.locations().iter().enumerate() {
        out.push_str(from.as_str());
        for j in 0..m.len() {
            write!(out, " {}", m.entry_at(i, j)).unwrap();
        }
        out.push('\n');
    }
    out
}
