//! Job model, execution and rendering behind the `davkit` binary.

pub mod error;
pub mod exec;
pub mod job;
pub mod render;

use error::{CliError, EXIT_CONSISTENCY, EXIT_OK};
use exec::ExecOptions;
use job::JobSpec;

/// Environment variable overriding enumeration guards: a positive integer,
/// or `none` to disable them.
pub const GUARD_VAR: &str = "DAVKIT_GUARD";

pub fn guard_from_env() -> Result<Option<u128>, CliError> {
    match std::env::var(GUARD_VAR) {
        Err(_) => Ok(None),
        Ok(v) if v.eq_ignore_ascii_case("none") || v.eq_ignore_ascii_case("off") => Ok(Some(u128::MAX)),
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .ok()
            .filter(|&g| g > 0)
            .map(Some)
            .ok_or_else(|| CliError::usage(format!("{GUARD_VAR} must be a positive integer or 'none', got '{v}'"))),
    }
}

/// What one invocation writes: standard output, an optional diagnostic for
/// standard error, and the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: Option<String>,
    pub code: u8,
}

impl Outcome {
    fn error(e: CliError) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: Some(format!("davkit: {e}")),
            code: e.code,
        }
    }
}

/// Validates and runs `spec`. With `emit_spec` the validated spec is printed
/// instead of being run.
pub fn run(spec: &JobSpec, opts: &ExecOptions, with_stats: bool, emit_spec: bool) -> Outcome {
    let job = match job::validate(spec) {
        Ok(job) => job,
        Err(e) => return Outcome::error(e),
    };
    if emit_spec {
        let mut out = serde_json::to_string_pretty(spec).expect("JobSpec serializes");
        out.push('\n');
        return Outcome {
            stdout: out,
            stderr: None,
            code: EXIT_OK,
        };
    }
    let report = match exec::execute(&job, opts) {
        Ok(r) => r,
        Err(e) => return Outcome::error(e),
    };
    let stdout = match render::render(spec, &report, with_stats) {
        Ok(s) => s,
        Err(e) => return Outcome::error(e),
    };
    match report.failure {
        Some(why) => Outcome {
            stdout,
            stderr: Some(format!("davkit: {why}")),
            code: EXIT_CONSISTENCY,
        },
        None => Outcome {
            stdout,
            stderr: None,
            code: EXIT_OK,
        },
    }
}
