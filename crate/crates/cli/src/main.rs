//! `causal`: run, differentiate and check stream circuits written in `.sfg`.
//!
//! Exit codes: 0 success, 1 a law check found a counterexample, 2 a parse,
//! type or usage error, 3 input records that do not fit the circuit.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use causal::caus::{run, truncate, unroll};
use causal::dsl::{self, DslError, Expr};
use causal::laws::{run_suite, CheckConfig, Suite};
use causal::rnn::{self, Task, TrainConfig};
use causal::stream::{format_record, read_inputs};
use causal::{BaseTag, Error, Rational};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "causal",
    version,
    about = "Stateful stream circuits and their derivatives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit on a stream of CSV records and print its outputs.
    Run {
        file: PathBuf,
        #[arg(long, default_value = "poly")]
        base: BaseTag,
        /// Input records, one per line; `-` reads standard input.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of ticks; defaults to the number of input records.
        #[arg(long)]
        ticks: Option<usize>,
        /// Override the register of a delayed trace, counted in reading
        /// order: `--init 0=1,2`.
        #[arg(long = "init", value_name = "N=V,..")]
        inits: Vec<String>,
    },
    /// Print the derivative of a circuit as a circuit.
    Diff {
        file: PathBuf,
        #[arg(long, default_value = "poly")]
        base: BaseTag,
        /// Write the derivative here instead of standard output.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Print the k-th truncation or unrolling of a circuit as a stateless
    /// circuit over the flattened inputs.
    Unroll {
        file: PathBuf,
        #[arg(long, default_value = "poly")]
        base: BaseTag,
        #[arg(long, default_value_t = 0)]
        tick: usize,
        /// All outputs up to the tick instead of the last one.
        #[arg(long)]
        truncation: bool,
    },
    /// Run a randomized law suite and print a JSON report.
    Check {
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        horizon: usize,
        #[arg(long)]
        base: Option<BaseTag>,
        /// Instances per law.
        #[arg(long)]
        cases: Option<usize>,
    },
    /// Train a two-unit Elman network with gradients from the sequence
    /// derivative, cross-checked against unrolled backpropagation.
    RnnDemo {
        #[arg(long, default_value = "copy-delay")]
        task: Task,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 0.5)]
        lr: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "smooth")]
        base: BaseTag,
        /// Print one JSON object per step instead of text.
        #[arg(long)]
        json: bool,
    },
}

/// An error with the exit code it should produce.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn usage(error: impl Into<anyhow::Error>) -> Failure {
        Failure {
            code: 2,
            error: error.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::ShapeMismatch(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            error: e.into(),
        }
    }
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Failure {
        match e {
            DslError::Core(inner) => inner.into(),
            other => Failure::usage(other),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Failure {
        Failure { code: 2, error }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read_text(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Prints to standard output; a closed pipe is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn load(path: &Path) -> Result<Expr, Failure> {
    let text = read_text(path)?;
    dsl::parse(&text).map_err(|e| Failure::usage(anyhow::anyhow!("{}: {}", path.display(), e)))
}

fn parse_init(spec: &str) -> anyhow::Result<(usize, Vec<Rational>)> {
    let (index, values) = spec
        .split_once('=')
        .ok_or_else(|| anyhow::anyhow!("`{}` should look like N=V,..", spec))?;
    let index = index
        .trim()
        .parse()
        .with_context(|| format!("bad trace number in `{}`", spec))?;
    let values = values
        .split(',')
        .filter(|v| !v.trim().is_empty())
        .map(|v| {
            v.trim()
                .parse::<Rational>()
                .with_context(|| format!("bad value `{}`", v))
        })
        .collect::<anyhow::Result<_>>()?;
    Ok((index, values))
}

fn cmd_run(
    file: &Path,
    base: BaseTag,
    input: Option<&Path>,
    ticks: Option<usize>,
    inits: &[String],
) -> Outcome {
    let mut e = load(file)?;
    for spec in inits {
        let (index, values) = parse_init(spec)?;
        dsl::set_trace_init(&mut e, index, values)
            .map_err(|d| Failure::usage(anyhow::anyhow!("{}", d)))?;
    }
    let s = dsl::compile(&e, base).map_err(|d| match d {
        DslError::Core(inner) => Failure::usage(inner),
        other => Failure::usage(other),
    })?;
    let mut inputs = match input {
        Some(p) => read_inputs(&read_text(p)?, &s, base)?,
        None => Vec::new(),
    };
    let n = ticks.unwrap_or(inputs.len());
    if inputs.len() < n {
        // circuits without inputs can run for any number of ticks
        for k in inputs.len()..n {
            let dom = s.dom_at(k)?;
            if !dom.is_unit() {
                return Err(Error::ShapeMismatch(format!(
                    "{} ticks requested but only {} input records",
                    n, k
                ))
                .into());
            }
            inputs.push(dsl::literal_point(&[], &dom, base)?);
        }
    }
    inputs.truncate(n);
    let out: String = run(&s, &inputs)?
        .iter()
        .map(|y| format_record(y) + "\n")
        .collect();
    emit(&out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_diff(file: &Path, base: BaseTag, target: Option<&Path>) -> Outcome {
    let e = load(file)?;
    if !base.has_differential() {
        return Err(Error::NoDifferential(base).into());
    }
    let d = dsl::derivative(&e, base)?;
    let text = format!("{}\n", dsl::pretty(&d));
    match target {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?,
        None => emit(&text)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_unroll(file: &Path, base: BaseTag, tick: usize, whole: bool) -> Outcome {
    let s = dsl::compile(&load(file)?, base)?;
    let m = if whole {
        truncate(&s, tick)?
    } else {
        unroll(&s, tick)?
    };
    emit(&format!("{}\n", dsl::pretty(&dsl::reify(&m)?)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(suite: Suite, cfg: CheckConfig) -> Outcome {
    let report = run_suite(suite, &cfg)?;
    emit(&format!("{}\n", report.to_json()))?;
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_rnn(cfg: TrainConfig, base: BaseTag, json: bool) -> Outcome {
    if base != BaseTag::Smooth {
        return Err(Failure::usage(anyhow::anyhow!(
            "the demo runs over the smooth base, not {}",
            base
        )));
    }
    let started = Instant::now();
    let training = rnn::train(&cfg, |s| {
        let line = if json {
            serde_json::to_string(s).expect("steps serialize")
        } else {
            format!(
                "step {:>4}  loss {:.6e}  deviation {:.3e}",
                s.step, s.loss, s.deviation
            )
        };
        let _ = emit(&(line + "\n"));
    })?;
    if training.diverged {
        eprintln!("warning: the loss stopped being finite; lower --lr");
    }
    let (first, last) = (training.first_loss(), training.last_loss());
    eprintln!(
        "{} steps in {:.2?}: loss {:.6e} -> {:.6e} ({:.1}% lower), largest deviation {:.3e}",
        training.log.len(),
        started.elapsed(),
        first,
        last,
        100.0 * (1.0 - last / first),
        training.max_deviation()
    );
    Ok(ExitCode::SUCCESS)
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Run {
            file,
            base,
            input,
            ticks,
            inits,
        } => cmd_run(&file, base, input.as_deref(), ticks, &inits),
        Command::Diff { file, base, emit } => cmd_diff(&file, base, emit.as_deref()),
        Command::Unroll {
            file,
            base,
            tick,
            truncation,
        } => cmd_unroll(&file, base, tick, truncation),
        Command::Check {
            suite,
            seed,
            horizon,
            base,
            cases,
        } => {
            let base = base.unwrap_or(if suite == Suite::CausalBijection {
                BaseTag::Fin
            } else {
                BaseTag::Poly
            });
            cmd_check(
                suite,
                CheckConfig {
                    seed,
                    horizon,
                    base,
                    cases,
                },
            )
        }
        Command::RnnDemo {
            task,
            steps,
            lr,
            seed,
            base,
            json,
        } => cmd_rnn(
            TrainConfig {
                steps,
                lr,
                seed,
                ..TrainConfig::new(task)
            },
            base,
            json,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
