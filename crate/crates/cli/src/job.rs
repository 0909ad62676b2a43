//! Job documents: one JSON object per job, one command per job.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Presentation,
    Cohomology,
    Form,
    Multiply,
    Antipode,
    Derivations,
    CheckRegular,
    Tor,
    ConditionIi,
    Decompose,
    Naturality,
    Scenario,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Presentation => "presentation",
            Command::Cohomology => "cohomology",
            Command::Form => "form",
            Command::Multiply => "multiply",
            Command::Antipode => "antipode",
            Command::Derivations => "derivations",
            Command::CheckRegular => "check-regular",
            Command::Tor => "tor",
            Command::ConditionIi => "condition-ii",
            Command::Decompose => "decompose",
            Command::Naturality => "naturality",
            Command::Scenario => "scenario",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioBlock {
    pub p: u64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorBlock {
    pub name: String,
    pub degree: i64,
    #[serde(default, skip_serializing_if = "is_false")]
    pub invertible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingBlock {
    pub base: String,
    #[serde(default)]
    pub generators: Vec<GeneratorBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<String>,
}

/// An element of a regular sequence. A missing obstruction means the
/// product on `R/x` is commutative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceEntry {
    pub element: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// The coefficient ring `k = R/K`; `π` is the canonical projection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetBlock {
    pub sequence: Vec<SequenceEntry>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub multiplicative: bool,
}

/// The target pair `(G, l)` of a morphism; `l` defaults to the source `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismBlock {
    pub sequence: Vec<SequenceEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowBlock {
    pub degree: i64,
    pub laurent: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobDescription {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sequence: Vec<SequenceEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<MorphismBlock>,
    /// Generator lists of the ideals for `condition-ii` and `decompose`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ideals: Vec<Vec<String>>,
    /// Clifford elements for `multiply` and `antipode`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub operands: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JobError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid job: {0}")]
    Semantic(String),
    #[error("{0}")]
    Refuted(String),
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Refuted(_) => 1,
            _ => 2,
        }
    }
}

/// Parses and structurally validates a job. Names and degrees are checked
/// when the job runs, since that needs the ring.
pub fn parse_job(text: &str) -> Result<JobDescription, JobError> {
    let job: JobDescription = serde_json::from_str(text).map_err(|e| JobError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate(&job)?;
    Ok(job)
}

pub fn render_job(job: &JobDescription) -> String {
    let mut s = serde_json::to_string_pretty(job).expect("jobs serialize");
    s.push('\n');
    s
}

fn validate(job: &JobDescription) -> Result<(), JobError> {
    let semantic = |m: &str| Err(JobError::Semantic(m.into()));
    match (&job.scenario, &job.ring) {
        (Some(_), Some(_)) => return semantic("`scenario` and `ring` are mutually exclusive"),
        (None, None) => return semantic("one of `scenario` or `ring` is required"),
        (Some(_), None) if !job.sequence.is_empty() => {
            return semantic("a scenario fixes its own sequence");
        }
        _ => {}
    }
    if job.command == Command::Scenario && job.scenario.is_none() {
        return semantic("`scenario` needs a scenario block");
    }
    if job.ring.is_some() && job.window.is_none() {
        return semantic("a ring job needs a `window`");
    }
    match job.command {
        Command::Multiply if job.operands.is_empty() => semantic("`multiply` needs operands"),
        Command::Antipode if job.operands.len() != 1 => semantic("`antipode` takes exactly one operand"),
        Command::ConditionIi | Command::Decompose if job.ideals.is_empty() => semantic("this command needs `ideals`"),
        Command::Tor if job.target.is_none() => semantic("`tor` needs a `target` ideal"),
        Command::Naturality if job.morphism.is_none() => semantic("`naturality` needs a `morphism`"),
        Command::CheckRegular if job.sequence.is_empty() => semantic("`check-regular` needs a sequence"),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positioned_parse_error() {
        let err = parse_job("{\n  \"command\": \"presentation\",\n  \"ring\": 3x\n}").unwrap_err();
        assert!(matches!(err, JobError::Parse { line: 3, .. }), "{err:?}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_command_and_fields() {
        assert!(matches!(parse_job(r#"{"command": "frobnicate"}"#), Err(JobError::Parse { .. })));
        let j = r#"{"command": "scenario", "scenario": {"p": 2, "n": 1}, "colour": 1}"#;
        assert!(matches!(parse_job(j), Err(JobError::Parse { .. })));
    }

    #[test]
    fn structural_rules() {
        let j = r#"{"command": "antipode", "scenario": {"p": 2, "n": 1}}"#;
        assert!(matches!(parse_job(j), Err(JobError::Semantic(_))));
        let j = r#"{"command": "presentation", "ring": {"base": "Z"}}"#;
        assert!(matches!(parse_job(j), Err(JobError::Semantic(_))));
    }

    #[test]
    fn render_is_stable() {
        let j = r#"{"command":"multiply","scenario":{"p":2,"n":1},"operands":["a0","a0"]}"#;
        let once = render_job(&parse_job(j).unwrap());
        assert_eq!(render_job(&parse_job(&once).unwrap()), once);
    }
}
