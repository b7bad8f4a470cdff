use std::collections::HashSet;
use std::fmt::Write;

use super::{parse_pair, require_token, Operand, Pair};
use crate::error::{Error, Result};
use crate::model::text::records;

const FORMAT: &str = "execution plan";
const SETTER: &str = ".Setter";

/// A machine an engine runs on. `address` is `None` while the instance is
/// not running (written `_`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Host {
    pub alias: String,
    pub provider: String,
    pub user: String,
    pub address: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineDecl {
    pub alias: String,
    pub app: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deployment {
    pub engine: String,
    pub host: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub engine: String,
    pub service: String,
    pub inputs: Vec<Pair>,
    pub output: String,
}

/// `from` pushes its datum `source` into `to`'s store under `key`, written
/// as an invocation of `<to>.Setter 'key':source ack`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub from: String,
    pub to: String,
    pub key: String,
    pub source: String,
    pub ack: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Invocation(Invocation),
    Transfer(Transfer),
}

impl Step {
    /// Engine executing the step.
    pub fn engine(&self) -> &str {
        match self {
            Step::Invocation(i) => &i.engine,
            Step::Transfer(t) => &t.from,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExecutionPlan {
    pub hosts: Vec<Host>,
    pub engines: Vec<EngineDecl>,
    pub deployments: Vec<Deployment>,
    pub steps: Vec<Step>,
}

impl ExecutionPlan {
    pub fn invocations(&self) -> impl Iterator<Item = &Invocation> {
        self.steps.iter().filter_map(|s| match s {
            Step::Invocation(i) => Some(i),
            Step::Transfer(_) => None,
        })
    }

    pub fn transfers(&self) -> impl Iterator<Item = &Transfer> {
        self.steps.iter().filter_map(|s| match s {
            Step::Transfer(t) => Some(t),
            Step::Invocation(_) => None,
        })
    }

    /// Host alias an engine is deployed on.
    pub fn host_of(&self, engine: &str) -> Option<&str> {
        self.deployments
            .iter()
            .find(|d| d.engine == engine)
            .map(|d| d.host.as_str())
    }
}

fn expect_fields(line: usize, fields: &[&str], n: usize, shape: &str) -> Result<()> {
    if fields.len() == n {
        Ok(())
    } else {
        Err(Error::parse(FORMAT, line, format!("expected `{shape}`")))
    }
}

pub fn parse_execution_plan(text: &str) -> Result<ExecutionPlan> {
    let mut plan = ExecutionPlan::default();
    let mut step_lines = Vec::new();
    let mut host_names = HashSet::new();
    let mut engine_names = HashSet::new();
    let mut deployed = HashSet::new();

    for (line, fields) in records(text) {
        match fields[0] {
            "host" => {
                expect_fields(line, &fields, 5, "host ALIAS PROVIDER USER ADDR")?;
                for (what, f) in [
                    ("host alias", fields[1]),
                    ("provider", fields[2]),
                    ("user", fields[3]),
                ] {
                    require_token(FORMAT, line, what, f)?;
                }
                if !host_names.insert(fields[1].to_string()) {
                    return Err(Error::parse(
                        FORMAT,
                        line,
                        format!("host `{}` declared twice", fields[1]),
                    ));
                }
                plan.hosts.push(Host {
                    alias: fields[1].into(),
                    provider: fields[2].into(),
                    user: fields[3].into(),
                    address: (fields[4] != "_").then(|| fields[4].to_string()),
                });
            }
            "serv" => {
                expect_fields(line, &fields, 3, "serv ALIAS APP")?;
                require_token(FORMAT, line, "engine alias", fields[1])?;
                require_token(FORMAT, line, "application", fields[2])?;
                if fields[1].contains('.') {
                    return Err(Error::parse(
                        FORMAT,
                        line,
                        "engine alias may not contain `.`",
                    ));
                }
                if !engine_names.insert(fields[1].to_string()) {
                    return Err(Error::parse(
                        FORMAT,
                        line,
                        format!("engine `{}` declared twice", fields[1]),
                    ));
                }
                plan.engines.push(EngineDecl {
                    alias: fields[1].into(),
                    app: fields[2].into(),
                });
            }
            "depl" => {
                expect_fields(line, &fields, 3, "depl ENGINE HOST")?;
                step_lines.push((line, fields));
            }
            _ => step_lines.push((line, fields)),
        }
    }

    // Deployments and steps may name aliases declared further down.
    for (line, fields) in step_lines {
        if fields[0] == "depl" {
            let (engine, host) = (fields[1], fields[2]);
            if !engine_names.contains(engine) {
                return Err(Error::parse(
                    FORMAT,
                    line,
                    format!("deployment of undeclared engine `{engine}`"),
                ));
            }
            if !host_names.contains(host) {
                return Err(Error::parse(
                    FORMAT,
                    line,
                    format!("deployment onto undeclared host `{host}`"),
                ));
            }
            if !deployed.insert(engine.to_string()) {
                return Err(Error::parse(
                    FORMAT,
                    line,
                    format!("engine `{engine}` deployed twice"),
                ));
            }
            plan.deployments.push(Deployment {
                engine: engine.into(),
                host: host.into(),
            });
            continue;
        }
        let engine = fields[0];
        if !engine_names.contains(engine) {
            return Err(Error::parse(
                FORMAT,
                line,
                format!("unknown directive or engine `{engine}`"),
            ));
        }
        if fields.len() < 4 {
            return Err(Error::parse(
                FORMAT,
                line,
                "expected `ENGINE SERVICE PARAM:VALUE... OUTPUT`",
            ));
        }
        let service = fields[1];
        let output = fields[fields.len() - 1];
        require_token(FORMAT, line, "output reference", output)?;
        let inputs: Vec<Pair> = fields[2..fields.len() - 1]
            .iter()
            .map(|f| parse_pair(FORMAT, line, f))
            .collect::<Result<_>>()?;
        let step = match service.strip_suffix(SETTER) {
            Some(target) => {
                if !engine_names.contains(target) {
                    return Err(Error::parse(
                        FORMAT,
                        line,
                        format!("Setter step targets `{target}`, which is not a declared engine"),
                    ));
                }
                match inputs.as_slice() {
                    [Pair {
                        param:
                            Operand {
                                text: key,
                                literal: true,
                            },
                        value:
                            Operand {
                                text: source,
                                literal: false,
                            },
                    }] => Step::Transfer(Transfer {
                        from: engine.into(),
                        to: target.into(),
                        key: key.clone(),
                        source: source.clone(),
                        ack: output.into(),
                    }),
                    _ => {
                        return Err(Error::parse(
                            FORMAT,
                            line,
                            "Setter step takes exactly one `'KEY':REF` input",
                        ))
                    }
                }
            }
            None => Step::Invocation(Invocation {
                engine: engine.into(),
                service: service.into(),
                inputs,
                output: output.into(),
            }),
        };
        plan.steps.push(step);
    }

    for step in &plan.steps {
        if !deployed.contains(step.engine()) {
            return Err(Error::invalid(
                FORMAT,
                format!("engine `{}` runs steps but is not deployed", step.engine()),
            ));
        }
    }
    Ok(plan)
}

pub fn serialize_execution_plan(plan: &ExecutionPlan) -> String {
    let mut out = String::new();
    out.push_str("# define hosts\n");
    for h in &plan.hosts {
        let addr = h.address.as_deref().unwrap_or("_");
        writeln!(out, "host {} {} {} {addr}", h.alias, h.provider, h.user).unwrap();
    }
    out.push_str("\n# define engines\n");
    for e in &plan.engines {
        writeln!(out, "serv {} {}", e.alias, e.app).unwrap();
    }
    out.push_str("\n# deploy engines on hosts\n");
    for d in &plan.deployments {
        writeln!(out, "depl {} {}", d.engine, d.host).unwrap();
    }
    out.push_str("\n# invocations and transfers\n");
    for s in &plan.steps {
        match s {
            Step::Invocation(i) => {
                write!(out, "{} {}", i.engine, i.service).unwrap();
                for p in &i.inputs {
                    write!(out, " {p}").unwrap();
                }
                writeln!(out, " {}", i.output).unwrap();
            }
            Step::Transfer(t) => {
                writeln!(
                    out,
                    "{} {}{SETTER} '{}':{} {}",
                    t.from, t.to, t.key, t.source, t.ack
                )
                .unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::SAMPLE_EXECUTION;

    #[test]
    fn parses_sample() {
        let plan = parse_execution_plan(SAMPLE_EXECUTION).unwrap();
        assert_eq!(plan.hosts.len(), 2);
        assert_eq!(plan.hosts[0].address.as_deref(), Some("region_1_ip"));
        assert_eq!(plan.hosts[1].address, None);
        assert_eq!(plan.engines.len(), 2);
        assert_eq!(plan.deployments.len(), 2);
        assert_eq!(plan.steps.len(), 3);
        assert_eq!(
            plan.steps[1],
            Step::Transfer(Transfer {
                from: "eng_1".into(),
                to: "eng_2".into(),
                key: "value_2".into(),
                source: "value2".into(),
                ack: "ack_1".into(),
            })
        );
        assert_eq!(plan.host_of("eng_2"), Some("region_2"));
        let again = parse_execution_plan(&serialize_execution_plan(&plan)).unwrap();
        assert_eq!(again, plan);
    }

    #[test]
    fn rejects_unknown_directive() {
        let err = parse_execution_plan("hots a b c d\n").unwrap_err();
        assert!(err.to_string().contains("unknown directive"), "{err}");
    }

    #[test]
    fn rejects_undeclared_aliases() {
        let base = "host h p u _\nserv e engine\n";
        assert!(parse_execution_plan(&format!("{base}depl x h\n")).is_err());
        assert!(parse_execution_plan(&format!("{base}depl e zz\n")).is_err());
        // Steps on an engine that is declared but never deployed.
        assert!(parse_execution_plan(&format!("{base}e ws 'a':'1' out\n")).is_err());
    }

    #[test]
    fn setter_must_target_engine() {
        let base = "host h p u _\nserv e engine\ndepl e h\n";
        let err =
            parse_execution_plan(&format!("{base}e nothere.Setter 'x':x ack_1\n")).unwrap_err();
        assert!(err.to_string().contains("not a declared engine"), "{err}");
        assert!(parse_execution_plan(&format!("{base}e e.Setter x:x ack_1\n")).is_err());
        assert!(parse_execution_plan(&format!("{base}e e.Setter 'x':'x' ack_1\n")).is_err());
        assert!(parse_execution_plan(&format!("{base}e e.Setter 'x':x 'y':y ack_1\n")).is_err());
    }

    #[test]
    fn declarations_in_any_order() {
        let text = "depl e h\nserv e engine\nhost h p u 10.0.0.1\ne ws 'a':'1' out\n";
        let plan = parse_execution_plan(text).unwrap();
        assert_eq!(plan.steps.len(), 1);
        assert_eq!(plan.hosts[0].address.as_deref(), Some("10.0.0.1"));
    }
}
