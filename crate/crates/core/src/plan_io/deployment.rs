use std::fmt::Write;

use crate::cost::Assignment;
use crate::error::{Error, Result};
use crate::model::text::records;
use crate::model::{LocationId, ServiceId};

const FORMAT: &str = "deployment plan";

/// Reads `SERVICE --> REGION` lines. A region may host many services; a
/// service appears once.
pub fn parse_deployment_plan(text: &str) -> Result<Assignment> {
    let mut out = Assignment::new();
    for (line, fields) in records(text) {
        let joined = fields.join(" ");
        let (service, region) = joined
            .split_once("-->")
            .ok_or_else(|| Error::parse(FORMAT, line, "expected `SERVICE --> REGION`"))?;
        let (service, region) = (service.trim(), region.trim());
        if service.is_empty() || region.is_empty() {
            return Err(Error::parse(FORMAT, line, "empty side of `-->`"));
        }
        let service: ServiceId = service
            .parse()
            .map_err(|e: Error| Error::parse(FORMAT, line, e.to_string()))?;
        let region: LocationId = region
            .parse()
            .map_err(|e: Error| Error::parse(FORMAT, line, e.to_string()))?;
        if out.contains_key(&service) {
            return Err(Error::parse(
                FORMAT,
                line,
                format!("service `{service}` is assigned more than once"),
            ));
        }
        out.insert(service, region);
    }
    Ok(out)
}

pub fn serialize_deployment_plan(assignment: &Assignment) -> String {
    let mut out = String::new();
    for (s, r) in assignment {
        writeln!(out, "{s} --> {r}").unwrap();
    }
    out
}
