//! Command-line front end: parses an instance file, builds the matching
//! oracle and runs one of the estimators on it.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use witcount::coarse::coarse;
use witcount::count::count;
use witcount::oracle::pad_to_power_of_two;
use witcount::problems::{
    count_colourful_h, exact_weight_clique_oracle, kov_oracle, ksum_oracle, CliqueBruteForce, KSumInstance,
    KovInstance, OvBruteForce, PatternInstance, SimpleGraph, SumMeetInMiddle, WeightedGraph,
};
use witcount::random::{seeded, StreamRng};
use witcount::sample::sample;
use witcount::verify::{exact_count, success_rate_trial, TrialReport};
use witcount::{ConstantsProfile, Hypergraph, IndependenceOracle, RunStats};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported instance type `{0}`")]
    UnsupportedInstance(String),

    #[error("malformed instance at {path}: {reason}")]
    Malformed { path: String, reason: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(witcount::Error),
}

impl From<witcount::Error> for CliError {
    fn from(e: witcount::Error) -> Self {
        match e {
            witcount::Error::MalformedInstance { path, reason } => CliError::Malformed { path, reason },
            other => CliError::Core(other),
        }
    }
}

fn malformed(path: impl Into<String>, reason: impl Into<String>) -> CliError {
    CliError::Malformed {
        path: path.into(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// ε-approximate witness count.
    Count,
    /// Approximately uniform witnesses, one JSON line each.
    Sample,
    /// Brute-force witness count.
    Exact,
    /// Coarse estimate within a polylogarithmic factor.
    Coarse,
    /// Success rate of `count` against the exact count.
    Trial,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "witcount", version, about = "Approximate counting and sampling of witnesses")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// Instance JSON file.
    pub instance: PathBuf,

    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,

    #[arg(long, default_value_t = 0.2)]
    pub delta: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// `paper`, `light`, or a path to a profile JSON file.
    #[arg(long, default_value = "light")]
    pub profile: String,

    /// Number of draws for `sample`.
    #[arg(long, default_value_t = 1)]
    pub samples: u64,

    /// Number of trials for `trial`.
    #[arg(long, default_value_t = 20)]
    pub trials: u64,

    /// Write results here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Worker threads for `trial`.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

/// A parsed and validated problem instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Instance {
    Hypergraph(Hypergraph),
    Ksum(KSumInstance),
    Kov(KovInstance),
    WeightedGraph {
        k: usize,
        #[serde(flatten)]
        graph: WeightedGraph,
    },
    Colourful(PatternInstance),
}

enum InstanceFile {
    Hypergraph(HypergraphFile),
    Ksum(KsumFile),
    Kov(KovFile),
    WeightedGraph(WeightedFile),
    Colourful(ColourfulFile),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphFile {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KsumFile {
    k: usize,
    values: Vec<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KovFile {
    d: usize,
    sets: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightedFile {
    k: usize,
    n: usize,
    edges: Vec<(usize, usize, i64)>,
    #[serde(default)]
    max_weight: Option<i64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ColourfulFile {
    pattern: GraphFile,
    graph: GraphFile,
    colours: Vec<usize>,
}

fn prefixed(prefix: &str, e: witcount::Error) -> CliError {
    match e {
        witcount::Error::MalformedInstance { path, reason } => malformed(format!("{prefix}.{path}"), reason),
        other => other.into(),
    }
}

impl InstanceFile {
    fn validate(self) -> Result<Instance, CliError> {
        Ok(match self {
            InstanceFile::Hypergraph(f) => Instance::Hypergraph(Hypergraph::new(f.n, f.k, f.edges)?),
            InstanceFile::Ksum(f) => Instance::Ksum(KSumInstance::new(f.k, f.values)?),
            InstanceFile::Kov(f) => Instance::Kov(KovInstance::new(f.d, f.sets)?),
            InstanceFile::WeightedGraph(f) => {
                if !(3..=64).contains(&f.k) {
                    return Err(malformed("k", format!("clique size must lie in 3..=64, got {}", f.k)));
                }
                Instance::WeightedGraph {
                    k: f.k,
                    graph: WeightedGraph::new(f.n, f.edges, f.max_weight)?,
                }
            }
            InstanceFile::Colourful(f) => {
                let pattern = SimpleGraph::new(f.pattern.n, f.pattern.edges).map_err(|e| prefixed("pattern", e))?;
                let graph = SimpleGraph::new(f.graph.n, f.graph.edges).map_err(|e| prefixed("graph", e))?;
                Instance::Colourful(PatternInstance::new(pattern, graph, f.colours)?)
            }
        })
    }
}

/// Parses instance JSON text; see [`parse_instance`].
pub fn parse_instance_str(text: &str) -> Result<Instance, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| malformed("$", e.to_string()))?;
    let ty = match value.get("type") {
        None => return Err(malformed("type", "missing")),
        Some(t) => t.as_str().ok_or_else(|| malformed("type", "must be a string"))?,
    };
    let file = match ty {
        "hypergraph" => InstanceFile::Hypergraph(fields(&value)?),
        "ksum" => InstanceFile::Ksum(fields(&value)?),
        "kov" => InstanceFile::Kov(fields(&value)?),
        "weighted-graph" => InstanceFile::WeightedGraph(fields(&value)?),
        "colourful" => InstanceFile::Colourful(fields(&value)?),
        other => return Err(CliError::UnsupportedInstance(other.to_string())),
    };
    file.validate()
}

/// Deserializes everything but `"type"` into `T`, keeping the failing path.
fn fields<T: serde::de::DeserializeOwned>(value: &Value) -> Result<T, CliError> {
    let mut body = value.clone();
    if let Value::Object(map) = &mut body {
        map.remove("type");
    }
    serde_path_to_error::deserialize(body).map_err(|e| {
        let path = e.path().to_string();
        malformed(if path == "." { "$".to_string() } else { path }, e.into_inner().to_string())
    })
}

/// Reads and validates an instance file. An unknown `"type"` is
/// [`CliError::UnsupportedInstance`]; any other defect is
/// [`CliError::Malformed`] with the offending field path.
pub fn parse_instance(path: &Path) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance_str(&text)
}

impl Instance {
    /// The witness oracle; `None` for colourful instances, which are
    /// counted through one oracle per colour bijection.
    pub fn oracle(&self) -> witcount::Result<Option<Box<dyn IndependenceOracle + '_>>> {
        Ok(Some(match self {
            Instance::Hypergraph(g) => Box::new(g),
            Instance::Ksum(inst) => Box::new(ksum_oracle(inst.clone(), SumMeetInMiddle)?),
            Instance::Kov(inst) => Box::new(kov_oracle(inst.clone(), OvBruteForce)),
            Instance::WeightedGraph { k, graph } => Box::new(exact_weight_clique_oracle(graph.clone(), *k, CliqueBruteForce)?),
            Instance::Colourful(_) => return Ok(None),
        }))
    }

    /// Brute-force witness count, computed without the oracle.
    pub fn exact(&self) -> Result<u64, CliError> {
        Ok(match self {
            Instance::Hypergraph(g) => exact_count(g),
            Instance::Ksum(inst) => inst.witnesses().len() as u64,
            Instance::Kov(inst) => inst.witnesses().len() as u64,
            Instance::WeightedGraph { k, graph } => graph.zero_weight_cliques(*k).len() as u64,
            Instance::Colourful(inst) => inst.colourful_copy_count()?,
        })
    }

    fn count(
        &self,
        epsilon: f64,
        delta: f64,
        rng: &mut StreamRng,
        profile: &ConstantsProfile,
        stats: &mut RunStats,
    ) -> witcount::Result<f64> {
        match self.oracle()? {
            Some(oracle) => count(&oracle, epsilon, delta, rng, profile, stats),
            None => match self {
                Instance::Colourful(inst) => count_colourful_h(inst, epsilon, delta, rng, profile, stats),
                _ => unreachable!("only colourful instances lack a single oracle"),
            },
        }
    }
}

/// Resolves `paper`, `light`, or a JSON profile file.
pub fn load_profile(name_or_path: &str) -> Result<ConstantsProfile, CliError> {
    let profile = match ConstantsProfile::by_name(name_or_path) {
        Some(p) => p,
        None => {
            let path = Path::new(name_or_path);
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("profile {name_or_path}: {e}")))?
        }
    };
    profile.validate()?;
    Ok(profile)
}

#[derive(Serialize)]
struct TrialOutput<'a> {
    exact: u64,
    epsilon: f64,
    delta: f64,
    #[serde(flatten)]
    report: &'a TrialReport,
}

fn check_unit(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must lie in (0, 1), got {v}")))
    }
}

/// Executes one command, returning its output lines and exit code.
fn execute(cli: &Cli, profile: &ConstantsProfile) -> Result<(Vec<String>, i32), CliError> {
    check_unit("epsilon", cli.epsilon)?;
    check_unit("delta", cli.delta)?;
    let instance = parse_instance(&cli.instance)?;
    let mut stats = RunStats::new();
    let mut rng = seeded(cli.seed);
    let line = |v: Value| v.to_string();
    match cli.command {
        Command::Count => {
            let estimate = instance.count(cli.epsilon, cli.delta, &mut rng, profile, &mut stats)?;
            let out = json!({"estimate": estimate, "epsilon": cli.epsilon, "delta": cli.delta, "stats": stats});
            Ok((vec![line(out)], EXIT_OK))
        }
        Command::Exact => {
            let exact = instance.exact()?;
            Ok((vec![line(json!({"count": exact, "stats": stats}))], EXIT_OK))
        }
        Command::Coarse => {
            let oracle = instance
                .oracle()?
                .ok_or_else(|| CliError::Usage("coarse is not available for colourful instances".into()))?;
            let padded = pad_to_power_of_two(&oracle);
            let estimate = coarse(&padded, cli.delta, &mut rng, profile, &mut stats)?;
            let out = json!({"estimate": estimate, "delta": cli.delta, "stats": stats});
            Ok((vec![line(out)], EXIT_OK))
        }
        Command::Sample => {
            let oracle = instance
                .oracle()?
                .ok_or_else(|| CliError::Usage("sample is not available for colourful instances".into()))?;
            let mut lines = Vec::with_capacity(cli.samples as usize + 1);
            let mut fails = 0u64;
            for _ in 0..cli.samples {
                match sample(&oracle, cli.epsilon, &mut rng, profile, &mut stats)? {
                    Some(edge) => lines.push(line(json!(edge))),
                    None => {
                        fails += 1;
                        lines.push(line(json!({"fail": true})));
                    }
                }
            }
            lines.push(line(json!({"stats": stats})));
            let code = if 2 * fails > cli.samples { EXIT_FAIL } else { EXIT_OK };
            Ok((lines, code))
        }
        Command::Trial => {
            if cli.trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let exact = instance.exact()?;
            let truth = exact as f64;
            let report = success_rate_trial(cli.seed, cli.trials, cli.threads.max(1), |rng| {
                let mut st = RunStats::new();
                let estimate = instance.count(cli.epsilon, cli.delta, rng, profile, &mut st)?;
                let ok = if exact == 0 {
                    estimate == 0.0
                } else {
                    (estimate - truth).abs() < cli.epsilon * truth
                };
                Ok((ok, st))
            })?;
            let out = TrialOutput {
                exact,
                epsilon: cli.epsilon,
                delta: cli.delta,
                report: &report,
            };
            let text = serde_json::to_string(&out).expect("trial report serializes");
            Ok((vec![text], EXIT_OK))
        }
    }
}

/// Runs the CLI, writing results to `stdout` (or `--out`) and diagnostics
/// to `stderr`. Returns the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let profile = match load_profile(&cli.profile) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    if profile.name == "light" {
        let _ = writeln!(
            stderr,
            "warning: the light profile is tuned for speed; theoretical guarantees require --profile paper"
        );
    }
    let (lines, code) = match execute(cli, &profile) {
        Ok(result) => result,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let mut text = lines.join("\n");
    text.push('\n');
    let written = match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_INPUT;
    }
    code
}
