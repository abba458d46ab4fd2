use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use davkit_cli::error::{CliError, EXIT_OK, EXIT_USAGE};
use davkit_cli::exec::ExecOptions;
use davkit_cli::job::{Command, Format, JobSpec};
use davkit_cli::{guard_from_env, run, Outcome};

/// Exact Davenport constants of integer boxes, finite abelian groups and
/// their products.
#[derive(Parser, Debug)]
#[command(name = "davkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Output format (csv is only for atom lists).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Omit the stats block, for byte-identical reruns.
    #[arg(long, global = true)]
    no_stats: bool,

    /// Print the job spec that reproduces this run instead of running it.
    #[arg(long, global = true)]
    emit_spec: bool,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Suppress progress lines on standard error.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Compute D(X) by exhaustive search.
    Davenport {
        #[arg(allow_hyphen_values = true)]
        ground: String,
        /// Search no deeper than this length.
        #[arg(long)]
        cap: Option<u64>,
        /// Node budget per first-element branch (result may become inexact).
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// List the atoms of a given length (default: the longest ones).
    Atoms {
        #[arg(allow_hyphen_values = true)]
        ground: String,
        #[arg(long)]
        length: Option<u64>,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Decide whether a sequence is a minimal zero-sum sequence.
    CheckMinimal {
        #[arg(allow_hyphen_values = true)]
        sequence: String,
        /// Ground set; needed for group-product terms such as (1|2).
        #[arg(long)]
        ground: Option<String>,
    },
    /// Reorder an atom so that its prefix sums stay small.
    Reorder {
        #[arg(allow_hyphen_values = true)]
        sequence: String,
        /// Element to place first.
        #[arg(long, allow_hyphen_values = true)]
        seed_element: Option<String>,
        /// nyctalopic (integers) or greedy (any dimension).
        #[arg(long)]
        method: Option<String>,
        /// Interval the prefix sums are checked against (default: the range of the terms).
        #[arg(long)]
        ground: Option<String>,
    },
    /// Proven lower and upper bounds.
    Bounds {
        #[arg(allow_hyphen_values = true)]
        ground: Option<String>,
        #[arg(long = "m")]
        m: Option<u64>,
        #[arg(long = "M")]
        big_m: Option<u64>,
        #[arg(long = "d")]
        d: Option<u32>,
        /// Invariant factors, e.g. C2xC4 or 2,4.
        #[arg(long)]
        group: Option<String>,
    },
    /// Build an extremal construction.
    Construct {
        /// two-element, interval-max, hypercube, group-box, power-check, profile or weights.
        kind: String,
        #[arg(long = "m", allow_hyphen_values = true)]
        m: Option<i64>,
        #[arg(long = "M")]
        big_m: Option<i64>,
        #[arg(long = "d")]
        d: Option<u32>,
        #[arg(long = "n")]
        n: Option<u64>,
        #[arg(long = "u")]
        u: Option<u64>,
        #[arg(long = "x", allow_hyphen_values = true)]
        x: Option<i64>,
        #[arg(long = "y", allow_hyphen_values = true)]
        y: Option<i64>,
        /// Longest construction whose minimality is machine-checked.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Match an integer sequence against the extremal templates of [-m, M].
    Classify {
        #[arg(allow_hyphen_values = true)]
        sequence: String,
        #[arg(long = "m")]
        m: i64,
        #[arg(long = "M")]
        big_m: Option<i64>,
    },
    /// Compare extremal templates with exhaustive enumeration.
    Verify {
        #[arg(long)]
        inverse: bool,
        /// Values of m: 2..5, 3 or 2,3,5.
        #[arg(long = "m")]
        m: String,
    },
    /// Look for explicit integer sets whose Davenport constant exceeds chi.
    HuntChiGap {
        /// Radius r of the candidate pool [-r, r] minus 0.
        #[arg(long = "m")]
        m: Option<i64>,
        #[arg(long)]
        max_size: Option<u64>,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
    /// Run a job spec from a JSON file, or standard input with '-'.
    Run { spec: String },
}

fn read_spec(path: &str) -> Result<JobSpec, CliError> {
    let mut text = String::new();
    let read = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::File::open(path).and_then(|mut f| f.read_to_string(&mut text).map(|_| ()))
    };
    read.map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{path}: invalid job spec: {e}")))
}

fn to_spec(cmd: Cmd) -> Result<JobSpec, CliError> {
    let spec = match cmd {
        Cmd::Davenport { ground, cap, max_nodes } => {
            let mut s = JobSpec::new(Command::Davenport, Some(ground));
            s.set("cap", cap);
            s.set("max-nodes", max_nodes);
            s
        }
        Cmd::Atoms {
            ground,
            length,
            max_nodes,
        } => {
            let mut s = JobSpec::new(Command::Atoms, Some(ground));
            s.set("length", length);
            s.set("max-nodes", max_nodes);
            s
        }
        Cmd::CheckMinimal { sequence, ground } => {
            let mut s = JobSpec::new(Command::CheckMinimal, ground);
            s.set("sequence", Some(sequence));
            s
        }
        Cmd::Reorder {
            sequence,
            seed_element,
            method,
            ground,
        } => {
            let mut s = JobSpec::new(Command::Reorder, ground);
            s.set("sequence", Some(sequence));
            s.set("seed-element", seed_element);
            s.set("method", method);
            s
        }
        Cmd::Bounds {
            ground,
            m,
            big_m,
            d,
            group,
        } => {
            let mut s = JobSpec::new(Command::Bounds, ground);
            s.set("m", m);
            s.set("M", big_m);
            s.set("d", d);
            s.set("group", group);
            s
        }
        Cmd::Construct {
            kind,
            m,
            big_m,
            d,
            n,
            u,
            x,
            y,
            cap,
        } => {
            let mut s = JobSpec::new(Command::Construct, None);
            s.set("kind", Some(kind));
            s.set("m", m);
            s.set("M", big_m);
            s.set("d", d);
            s.set("n", n);
            s.set("u", u);
            s.set("x", x);
            s.set("y", y);
            s.set("cap", cap);
            s
        }
        Cmd::Classify { sequence, m, big_m } => {
            let mut s = JobSpec::new(Command::Classify, None);
            s.set("sequence", Some(sequence));
            s.set("m", Some(m));
            s.set("M", big_m);
            s
        }
        Cmd::Verify { inverse, m } => {
            let mut s = JobSpec::new(Command::Verify, None);
            s.flag("inverse", inverse);
            s.set("m", Some(m));
            s
        }
        Cmd::HuntChiGap { m, max_size, max_nodes } => {
            let mut s = JobSpec::new(Command::HuntChiGap, None);
            s.set("m", m);
            s.set("max-size", max_size);
            s.set("max-nodes", max_nodes);
            s
        }
        Cmd::Run { spec } => read_spec(&spec)?,
    };
    Ok(spec)
}

fn invoke(cli: Cli) -> Outcome {
    let g = cli.global;
    let prepared = (|| {
        let mut spec = to_spec(cli.command)?;
        if let Some(f) = g.format {
            spec.output = f;
        }
        let guard = guard_from_env()?;
        if let Some(t) = g.threads {
            if t == 0 {
                return Err(CliError::usage("--threads must be at least 1"));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build_global()
                .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
        }
        Ok((spec, guard))
    })();
    match prepared {
        Ok((spec, guard)) => {
            let opts = ExecOptions {
                threads: g.threads,
                guard,
                progress: !g.quiet,
            };
            run(&spec, &opts, !g.no_stats, g.emit_spec)
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: Some(format!("davkit: {e}")),
            code: e.code,
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = invoke(cli);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stdout.flush();
    if let Some(msg) = outcome.stderr {
        eprintln!("{msg}");
    }
    ExitCode::from(outcome.code)
}
