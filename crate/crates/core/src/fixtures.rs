//! Small reference instances shared by tests, docs and the CLI test suite.

use crate::model::{CostMatrix, LocationId, Service, Workflow};
use crate::rational::Rational;

/// Two services in two regions, `s1 -> s2`.
///
/// Invoking either service from its home region costs 3 and from the other
/// region 15; shipping `s1`'s output between the regions costs 4. The split
/// plan therefore moves data in 10 units of time and either single-region
/// plan in 18.
pub fn two_region_chain() -> (Workflow, CostMatrix) {
    let q = |s: &str| s.parse::<Rational>().unwrap();
    let r1: LocationId = "r1".parse().unwrap();
    let r2: LocationId = "r2".parse().unwrap();
    let w = Workflow::checked(
        vec![
            Service::new("s1".parse().unwrap(), r1.clone(), q("5.5"), q("2")),
            Service::new("s2".parse().unwrap(), r2.clone(), q("2"), q("5.5")),
        ],
        vec![("s1".parse().unwrap(), "s2".parse().unwrap())],
    )
    .expect("fixture workflow is valid");
    let cm = CostMatrix::new(
        vec![r1, r2],
        vec![vec![q("0.4"), q("2")], vec![q("2"), q("0.4")]],
    )
    .expect("fixture matrix is valid");
    (w, cm)
}

/// Two-service invocation description: a literal zero feeds `ws_1`, whose
/// output feeds `ws_2`.
pub const SAMPLE_INVOCATION: &str = "ws_1 'param_1':'0' value_2\nws_2 'param_2':value_2 value_3\n";

/// Deployment of the two sample services onto separate regions.
pub const SAMPLE_DEPLOYMENT: &str = "ws_1 --> region_1\nws_2 --> region_2\n";

/// Execution plan for the sample services, as written by hand. Its transfer
/// step reads `value2`, a name no step produces.
pub const SAMPLE_EXECUTION: &str = "\
# define hosts
host region_1 aws ubuntu region_1_ip
host region_2 aws ubuntu _

# define engines
serv eng_1 engine
serv eng_2 engine

# deploy engines on hosts
depl eng_1 region_1
depl eng_2 region_2

# invocations for engine_1
eng_1 ws_1 'param_1':'0' value_2
eng_1 eng_2.Setter 'value_2':value2 ack_1

# invocation for engine_2
eng_2 ws_2 'param_2':value_2 value_3
";
