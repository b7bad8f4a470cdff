//! Placement of orchestration engines for geo-distributed service workflows.
//!
//! Given a DAG of web services with relative data sizes and a per-unit data
//! movement cost between regions, [`optimizer`] finds the service to engine
//! region mapping that minimises the workflow's data movement time plus a
//! penalty per extra engine. [`plan_io`] reads and writes the invocation,
//! deployment and execution plan scripts, and [`sim`] replays an execution
//! plan as a discrete-event simulation to cross-check the cost model.

pub mod cost;
pub mod error;
pub mod fixtures;
pub mod model;
pub mod optimizer;
pub mod plan_io;
pub mod rational;
pub mod sim;
pub mod workgen;

pub use cost::{evaluate, Assignment, CostReport, DeploymentPlan};
pub use error::{Error, Result};
pub use model::{CostMatrix, LocationId, Service, ServiceId, Workflow};
pub use rational::Rational;
