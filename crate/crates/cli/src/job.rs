//! Job specifications and their validation into typed jobs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use davkit::{AnySequence, Element, GroundSet, GroupSpec, Sequence};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Davenport,
    Atoms,
    CheckMinimal,
    Reorder,
    Bounds,
    Construct,
    Classify,
    Verify,
    HuntChiGap,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Davenport => "davenport",
            Command::Atoms => "atoms",
            Command::CheckMinimal => "check-minimal",
            Command::Reorder => "reorder",
            Command::Bounds => "bounds",
            Command::Construct => "construct",
            Command::Classify => "classify",
            Command::Verify => "verify",
            Command::HuntChiGap => "hunt-chi-gap",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

/// A complete, replayable description of one invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground: Option<String>,
    #[serde(default)]
    pub parameters: BTreeMap<String, Value>,
    #[serde(default)]
    pub output: Format,
}

impl JobSpec {
    pub fn new(command: Command, ground: Option<String>) -> Self {
        JobSpec {
            command,
            ground,
            parameters: BTreeMap::new(),
            output: Format::Json,
        }
    }

    /// Records `value` under `key` when present.
    pub fn set(&mut self, key: &str, value: Option<impl Into<Value>>) {
        if let Some(v) = value {
            self.parameters.insert(key.to_string(), v.into());
        }
    }

    pub fn flag(&mut self, key: &str, on: bool) {
        if on {
            self.parameters.insert(key.to_string(), Value::Bool(true));
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReorderMethod {
    Nyctalopic,
    Greedy,
}

#[derive(Clone, Debug)]
pub enum BoundsQuery {
    Ground(GroundSet),
    Interval { m: u64, big_m: u64 },
    Hypercube { m: u64, d: u32 },
    Group(GroupSpec),
}

#[derive(Clone, Debug)]
pub enum ConstructQuery {
    TwoElement { x: i64, y: i64 },
    IntervalMax { m: i64, big_m: i64 },
    Hypercube { m: i64, d: u32, cap: Option<u64> },
    GroupBox { n: u64, m: i64, d: u32, cap: Option<u64> },
    PowerCheck { m: i64, d: u32, u: u64 },
    Profile { m: i64, d: u32 },
    Weights { m: i64, d: u32 },
}

#[derive(Clone, Debug)]
pub enum Job {
    Davenport {
        ground: GroundSet,
        cap: Option<u64>,
        max_nodes: Option<u64>,
    },
    Atoms {
        ground: GroundSet,
        length: Option<u64>,
        max_nodes: Option<u64>,
    },
    CheckMinimal {
        ground: Option<GroundSet>,
        sequence: AnySequence,
    },
    Reorder {
        ground: Option<GroundSet>,
        sequence: Sequence<Element>,
        seed: Option<Element>,
        method: ReorderMethod,
    },
    Bounds(BoundsQuery),
    Construct(ConstructQuery),
    Classify {
        m: i64,
        big_m: Option<i64>,
        sequence: Sequence<Element>,
    },
    Verify {
        m_values: Vec<i64>,
    },
    HuntChiGap {
        radius: i64,
        max_size: usize,
        max_nodes: Option<u64>,
    },
}

/// Typed access to the parameter map; every key read is remembered so that
/// leftovers can be reported as unknown.
struct Params<'a> {
    command: Command,
    map: &'a BTreeMap<String, Value>,
    seen: BTreeSet<&'static str>,
}

impl<'a> Params<'a> {
    fn new(spec: &'a JobSpec) -> Self {
        Params {
            command: spec.command,
            map: &spec.parameters,
            seen: BTreeSet::new(),
        }
    }

    fn get(&mut self, key: &'static str) -> Option<&'a Value> {
        self.seen.insert(key);
        self.map.get(key)
    }

    fn bad(&self, key: &str, want: &str, got: &Value) -> CliError {
        CliError::usage(format!("{}: parameter '{key}' must be {want}, got {got}", self.command))
    }

    fn missing(&self, key: &str) -> CliError {
        CliError::usage(format!("{}: missing parameter '{key}'", self.command))
    }

    fn i64(&mut self, key: &'static str) -> Result<Option<i64>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.as_i64().map(Some).ok_or_else(|| self.bad(key, "an integer", v)),
        }
    }

    fn u64(&mut self, key: &'static str) -> Result<Option<u64>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| self.bad(key, "a non-negative integer", v)),
        }
    }

    fn u32(&mut self, key: &'static str) -> Result<Option<u32>, CliError> {
        match self.u64(key)? {
            None => Ok(None),
            Some(v) => u32::try_from(v)
                .map(Some)
                .map_err(|_| CliError::usage(format!("{}: parameter '{key}' is too large", self.command))),
        }
    }

    fn string(&mut self, key: &'static str) -> Result<Option<&'a str>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.as_str().map(Some).ok_or_else(|| self.bad(key, "a string", v)),
        }
    }

    fn flag(&mut self, key: &'static str) -> Result<bool, CliError> {
        match self.get(key) {
            None => Ok(false),
            Some(v) => v.as_bool().ok_or_else(|| self.bad(key, "a boolean", v)),
        }
    }

    fn need<T>(&self, key: &str, v: Option<T>) -> Result<T, CliError> {
        v.ok_or_else(|| self.missing(key))
    }

    fn finish(self) -> Result<(), CliError> {
        let unknown: Vec<&str> = self
            .map
            .keys()
            .map(String::as_str)
            .filter(|k| !self.seen.contains(k))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::usage(format!(
                "{}: unknown parameter(s) {}",
                self.command,
                unknown.join(", ")
            )))
        }
    }
}

fn parse_ground(text: &str) -> Result<GroundSet, CliError> {
    GroundSet::parse(text).map_err(|e| CliError::usage(format!("ground set '{text}': {e}")))
}

fn parse_sequence(text: &str, ground: Option<&GroundSet>) -> Result<AnySequence, CliError> {
    AnySequence::parse(text, ground.and_then(GroundSet::group))
        .map_err(|e| CliError::usage(format!("sequence '{text}': {e}")))
}

fn lattice_sequence(command: Command, s: AnySequence) -> Result<Sequence<Element>, CliError> {
    match s {
        AnySequence::Lattice(s) => Ok(s),
        AnySequence::Mixed(_) => Err(CliError::usage(format!("{command} needs a sequence of lattice points"))),
    }
}

/// `C2xC4`, `2x4` or `2,4`.
pub fn parse_group(text: &str) -> Result<GroupSpec, CliError> {
    let factors = text
        .split([',', 'x'])
        .map(|part| {
            let part = part.trim();
            part.strip_prefix('C')
                .unwrap_or(part)
                .parse::<u64>()
                .map_err(|_| CliError::usage(format!("group '{text}': '{part}' is not a factor")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    GroupSpec::new(factors).map_err(|e| CliError::usage(format!("group '{text}': {e}")))
}

/// `2..5`, `3` or `2,3,5`.
pub fn parse_m_values(value: &Value) -> Result<Vec<i64>, CliError> {
    let bad = || CliError::usage(format!("m values must look like 2..5, 3 or 2,3,5; got {value}"));
    if let Some(m) = value.as_i64() {
        return Ok(vec![m]);
    }
    let text = value.as_str().ok_or_else(bad)?;
    let num = |s: &str| s.trim().parse::<i64>().map_err(|_| bad());
    if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(num).collect()
}

fn ground_of(spec: &JobSpec) -> Result<Option<GroundSet>, CliError> {
    spec.ground.as_deref().map(parse_ground).transpose()
}

fn require_ground(spec: &JobSpec) -> Result<GroundSet, CliError> {
    ground_of(spec)?.ok_or_else(|| CliError::usage(format!("{} needs a ground set", spec.command)))
}

fn forbid_ground(spec: &JobSpec) -> Result<(), CliError> {
    match spec.ground {
        Some(_) => Err(CliError::usage(format!("{} does not take a ground set", spec.command))),
        None => Ok(()),
    }
}

/// Checks every parameter of `spec` and builds the typed job. Nothing is
/// computed here beyond parsing.
pub fn validate(spec: &JobSpec) -> Result<Job, CliError> {
    if spec.output == Format::Csv && spec.command != Command::Atoms {
        return Err(CliError::usage(format!(
            "csv output is only available for atom lists, not {}",
            spec.command
        )));
    }
    let mut p = Params::new(spec);
    let job = match spec.command {
        Command::Davenport => Job::Davenport {
            ground: require_ground(spec)?,
            cap: p.u64("cap")?,
            max_nodes: p.u64("max-nodes")?,
        },
        Command::Atoms => Job::Atoms {
            ground: require_ground(spec)?,
            length: p.u64("length")?,
            max_nodes: p.u64("max-nodes")?,
        },
        Command::CheckMinimal => {
            let ground = ground_of(spec)?;
            let text = p.string("sequence")?;
            let sequence = parse_sequence(p.need("sequence", text)?, ground.as_ref())?;
            Job::CheckMinimal { ground, sequence }
        }
        Command::Reorder => {
            let ground = ground_of(spec)?;
            let text = p.string("sequence")?;
            let sequence = lattice_sequence(spec.command, parse_sequence(p.need("sequence", text)?, None)?)?;
            let seed = p
                .string("seed-element")?
                .map(|t| Element::parse(t).map_err(|e| CliError::usage(format!("seed element '{t}': {e}"))))
                .transpose()?;
            let method = match p.string("method")? {
                Some("nyctalopic") => ReorderMethod::Nyctalopic,
                Some("greedy") => ReorderMethod::Greedy,
                Some(other) => {
                    return Err(CliError::usage(format!(
                        "reorder: method must be nyctalopic or greedy, got '{other}'"
                    )))
                }
                None if sequence.iter().next().is_some_and(|(x, _)| x.dim() == 1) => ReorderMethod::Nyctalopic,
                None => ReorderMethod::Greedy,
            };
            Job::Reorder {
                ground,
                sequence,
                seed,
                method,
            }
        }
        Command::Bounds => {
            let ground = ground_of(spec)?;
            let (m, big_m, d) = (p.u64("m")?, p.u64("M")?, p.u32("d")?);
            let group = p.string("group")?.map(parse_group).transpose()?;
            let query = match (ground, m, big_m, d, group) {
                (Some(g), None, None, None, None) => BoundsQuery::Ground(g),
                (None, Some(m), Some(big_m), None, None) => BoundsQuery::Interval { m, big_m },
                (None, Some(m), None, Some(d), None) => BoundsQuery::Hypercube { m, d },
                (None, None, None, None, Some(g)) => BoundsQuery::Group(g),
                _ => {
                    return Err(CliError::usage(
                        "bounds takes exactly one of: a ground set, --m with --M, --m with --d, or --group",
                    ))
                }
            };
            Job::Bounds(query)
        }
        Command::Construct => {
            forbid_ground(spec)?;
            let kind = p.string("kind")?;
            let kind = p.need("kind", kind)?;
            let (m, d) = (p.i64("m")?, p.u32("d")?);
            let query = match kind {
                "two-element" => {
                    let (x, y) = (p.i64("x")?, p.i64("y")?);
                    ConstructQuery::TwoElement {
                        x: p.need("x", x)?,
                        y: p.need("y", y)?,
                    }
                }
                "interval-max" => {
                    let big_m = p.i64("M")?;
                    ConstructQuery::IntervalMax {
                        m: p.need("m", m)?,
                        big_m: p.need("M", big_m)?,
                    }
                }
                "hypercube" => ConstructQuery::Hypercube {
                    m: p.need("m", m)?,
                    d: p.need("d", d)?,
                    cap: p.u64("cap")?,
                },
                "group-box" => {
                    let n = p.u64("n")?;
                    ConstructQuery::GroupBox {
                        n: p.need("n", n)?,
                        m: p.need("m", m)?,
                        d: p.need("d", d)?,
                        cap: p.u64("cap")?,
                    }
                }
                "power-check" => {
                    let u = p.u64("u")?;
                    ConstructQuery::PowerCheck {
                        m: p.need("m", m)?,
                        d: p.need("d", d)?,
                        u: p.need("u", u)?,
                    }
                }
                "profile" => ConstructQuery::Profile {
                    m: p.need("m", m)?,
                    d: p.need("d", d)?,
                },
                "weights" => ConstructQuery::Weights {
                    m: p.need("m", m)?,
                    d: p.need("d", d)?,
                },
                other => {
                    return Err(CliError::usage(format!(
                        "construct: unknown kind '{other}' (two-element, interval-max, hypercube, group-box, power-check, profile, weights)"
                    )))
                }
            };
            Job::Construct(query)
        }
        Command::Classify => {
            forbid_ground(spec)?;
            let text = p.string("sequence")?;
            let sequence = lattice_sequence(spec.command, parse_sequence(p.need("sequence", text)?, None)?)?;
            let m = p.i64("m")?;
            Job::Classify {
                m: p.need("m", m)?,
                big_m: p.i64("M")?,
                sequence,
            }
        }
        Command::Verify => {
            forbid_ground(spec)?;
            if !p.flag("inverse")? {
                return Err(CliError::usage("verify: only --inverse is available"));
            }
            let m = p
                .get("m")
                .ok_or_else(|| CliError::usage("verify: missing parameter 'm'"))?;
            Job::Verify {
                m_values: parse_m_values(m)?,
            }
        }
        Command::HuntChiGap => {
            forbid_ground(spec)?;
            let radius = p.i64("m")?.unwrap_or(3);
            let max_size = p.u64("max-size")?.unwrap_or(4);
            if radius < 1 || max_size < 1 {
                return Err(CliError::usage("hunt-chi-gap: --m and --max-size must be positive"));
            }
            if radius > 12 {
                return Err(CliError::usage(
                    "hunt-chi-gap: --m is limited to 12 (2^24 candidate sets)",
                ));
            }
            Job::HuntChiGap {
                radius,
                max_size: max_size as usize,
                max_nodes: p.u64("max-nodes")?,
            }
        }
    };
    p.finish()?;
    Ok(job)
}
