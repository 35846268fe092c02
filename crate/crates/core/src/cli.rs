//! Command-line front end. `run` parses arguments, executes a subcommand
//! and returns the process exit code: 0 for success or "retain", 2 for
//! "reject" (or a failed verification ledger), 1 for any error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::distributions::AlternativeSpec;
use crate::montecarlo::{self, critical_value_table, SimulationConfig, Tail, DEFAULT_REPS};
use crate::power::{power_table, TABLE_TN_TAIL};
use crate::reference;
use crate::sample::Sample;
use crate::statistics::Statistic;
use crate::verify::{run_ledger, Profile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REJECT: i32 = 2;

/// Environment variable that overrides the default number of replications.
pub const REPS_ENV: &str = "PARETOGOF_REPS";
pub const DEFAULT_SEED: u64 = 20_160_101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "paretogof", version, about = "Goodness-of-fit tests for the Pareto distribution")]
pub struct Cli {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value = "tsv")]
    pub format: Format,

    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Record the wall-clock time in the manifest (makes output time-dependent).
    #[arg(long, global = true)]
    pub timestamp: bool,

    /// Write results here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Test whether a data file is consistent with a Pareto law.
    Test(TestArgs),
    /// Simulate upper critical values over sample sizes and levels.
    CriticalValues(CriticalArgs),
    /// Power of all four tests against the alternative families.
    Power(PowerArgs),
    /// Check every closed-form constant numerically.
    Verify(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Test(_) => "test",
            Command::CriticalValues(_) => "critical-values",
            Command::Power(_) => "power",
            Command::Verify(_) => "verify",
        }
    }
}

fn parse_statistic(s: &str) -> Result<Statistic, String> {
    s.parse()
}

fn parse_tail(s: &str) -> Result<Tail, String> {
    s.parse()
}

fn parse_profile(s: &str) -> Result<Profile, String> {
    s.parse()
}

#[derive(Debug, Args, Serialize)]
pub struct TestArgs {
    /// Observations, one per line; `#` starts a comment.
    pub data: PathBuf,

    #[arg(long, short, default_value = "tn", value_parser = parse_statistic)]
    pub statistic: Statistic,

    #[arg(long, short, default_value_t = 0.05)]
    pub level: f64,

    #[arg(long, env = REPS_ENV, default_value_t = DEFAULT_REPS)]
    pub reps: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CriticalArgs {
    #[arg(long, short, default_value = "tn", value_parser = parse_statistic)]
    pub statistic: Statistic,

    #[arg(long = "n", value_delimiter = ',', default_values_t = reference::TABLE_NS)]
    pub ns: Vec<usize>,

    #[arg(long, value_delimiter = ',', default_values_t = reference::TABLE_LEVELS)]
    pub levels: Vec<f64>,

    #[arg(long, env = REPS_ENV, default_value_t = DEFAULT_REPS)]
    pub reps: usize,

    /// Add the published value and the deviation to every row.
    #[arg(long)]
    pub compare_paper: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct PowerArgs {
    /// Alternative family label; repeatable. Defaults to the five families
    /// of the published study. `pareto` gives the size row.
    #[arg(long = "alternative", value_parser = parse_alternative)]
    pub alternatives: Vec<AlternativeSpec>,

    #[arg(long = "n", value_delimiter = ',', default_values_t = reference::POWER_NS)]
    pub ns: Vec<usize>,

    #[arg(long, default_value_t = reference::POWER_LEVEL)]
    pub level: f64,

    /// Rejection region of T_n: upper or two-sided.
    #[arg(long, default_value = "two-sided", value_parser = parse_tail)]
    pub tn_tail: Tail,

    #[arg(long, env = REPS_ENV, default_value_t = DEFAULT_REPS)]
    pub reps: usize,

    /// Report each cell with its standard error, published value and deviation.
    #[arg(long)]
    pub compare_paper: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// `quick` runs the quadrature constants only; `full` adds the seeded
    /// characterization draws.
    #[arg(long, default_value = "full", value_parser = parse_profile)]
    pub profile: Profile,
}

/// Named presets accepted by `--alternative`.
pub fn alternative_preset(label: &str) -> Option<AlternativeSpec> {
    std::iter::once(AlternativeSpec::Pareto { alpha: 1.0 })
        .chain(AlternativeSpec::power_study_set())
        .find(|a| a.label() == label)
}

fn parse_alternative(s: &str) -> Result<AlternativeSpec, String> {
    alternative_preset(s).ok_or_else(|| {
        format!("unknown alternative {s:?} (expected pareto, log-normal, half-normal, weibull, gamma or log-gamma)")
    })
}

/// Everything needed to reproduce a result. Thread count is deliberately
/// absent: it does not influence results.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub timestamp: Option<u64>,
    #[serde(flatten)]
    pub command: &'a Command,
}

impl<'a> RunManifest<'a> {
    fn new(cli: &'a Cli) -> Self {
        RunManifest {
            tool: "paretogof",
            version: env!("CARGO_PKG_VERSION"),
            seed: cli.seed,
            timestamp: cli.timestamp.then(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            }),
            command: &cli.command,
        }
    }

    fn tsv_header(&self) -> String {
        format!("# manifest: {}\n", serde_json::to_string(self).expect("manifest serializes"))
    }
}

type CliResult<T> = std::result::Result<T, String>;

struct Rendered {
    body: String,
    code: i32,
}

fn render(cli: &Cli, payload: serde_json::Value, tsv: String, code: i32) -> Rendered {
    let manifest = RunManifest::new(cli);
    let body = match cli.format {
        Format::Tsv => format!("{}{}", manifest.tsv_header(), tsv),
        Format::Json => {
            let mut doc = json!({ "manifest": manifest });
            if let (Some(d), Some(p)) = (doc.as_object_mut(), payload.as_object()) {
                for (k, v) in p {
                    d.insert(k.clone(), v.clone());
                }
            }
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    };
    Rendered { body, code }
}

fn config(cli: &Cli, reps: usize) -> CliResult<SimulationConfig> {
    let cfg = SimulationConfig::default().with_reps(reps).with_seed(cli.seed);
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn cmd_test(cli: &Cli, args: &TestArgs, notes: &mut Vec<String>) -> CliResult<Rendered> {
    let text = std::fs::read_to_string(&args.data).map_err(|e| format!("{}: {e}", args.data.display()))?;
    let sample = Sample::parse(&text).map_err(|e| format!("{}: {e}", args.data.display()))?;
    if sample.has_ties() {
        notes.push("warning: sample contains tied observations; the null distribution assumes a continuous law".into());
    }
    let cfg = config(cli, args.reps)?;
    let outcome = montecarlo::run_test(&sample, args.statistic, args.level, &cfg).map_err(|e| e.to_string())?;
    let decision = if outcome.reject { "reject" } else { "retain" };
    let tsv = format!(
        "statistic\t{}\nn\t{}\nvalue\t{}\nlevel\t{}\ncritical_value\t{}\np_value\t{}\ndecision\t{}\nreps\t{}\nseed\t{}\n",
        outcome.statistic.symbol(),
        outcome.n,
        outcome.value,
        outcome.level,
        outcome.critical_value,
        outcome.p_value,
        decision,
        outcome.config.reps,
        outcome.config.seed
    );
    let code = if outcome.reject { EXIT_REJECT } else { EXIT_OK };
    Ok(render(cli, json!({ "outcome": outcome, "decision": decision }), tsv, code))
}

#[derive(Serialize)]
struct Comparison {
    n: usize,
    level: f64,
    critical_value: f64,
    paper: Option<f64>,
    delta: Option<f64>,
}

fn cmd_critical(cli: &Cli, args: &CriticalArgs, notes: &mut Vec<String>) -> CliResult<Rendered> {
    let cfg = config(cli, args.reps)?;
    let table = critical_value_table(args.statistic, &args.ns, &args.levels, &cfg).map_err(|e| e.to_string())?;
    for w in table.monotonicity_warnings() {
        notes.push(format!("note: {w}"));
    }
    if !args.compare_paper {
        let tsv = table.to_tsv();
        return Ok(render(cli, json!({ "table": table }), tsv, EXIT_OK));
    }
    let rows: Vec<Comparison> = table
        .rows
        .iter()
        .map(|r| {
            let paper = reference::critical_value(args.statistic, r.n, r.level);
            Comparison {
                n: r.n,
                level: r.level,
                critical_value: r.critical_value,
                paper,
                delta: paper.map(|p| r.critical_value - p),
            }
        })
        .collect();
    let mut tsv = String::from("n\tlevel\tcritical_value\tpaper\tdelta\treps\tseed\n");
    for r in &rows {
        let (p, d) = match (r.paper, r.delta) {
            (Some(p), Some(d)) => (format!("{p:.2}"), format!("{d:+.4}")),
            _ => ("-".into(), "-".into()),
        };
        tsv.push_str(&format!(
            "{}\t{}\t{:.6}\t{}\t{}\t{}\t{}\n",
            r.n, r.level, r.critical_value, p, d, cfg.reps, cfg.seed
        ));
    }
    Ok(render(cli, json!({ "table": table, "comparison": rows }), tsv, EXIT_OK))
}

fn cmd_power(cli: &Cli, args: &PowerArgs) -> CliResult<Rendered> {
    let cfg = config(cli, args.reps)?;
    let alts: Vec<AlternativeSpec> = if args.alternatives.is_empty() {
        AlternativeSpec::power_study_set().to_vec()
    } else {
        args.alternatives.clone()
    };
    let report = power_table(&alts, &args.ns, args.level, args.tn_tail, &cfg).map_err(|e| e.to_string())?;
    let mut payload = json!({ "report": report, "ordering_holds": report.ordering_holds() });
    let tsv = if args.compare_paper {
        payload["comparison"] = serde_json::to_value(report.paper_deltas()).expect("json");
        if args.tn_tail != TABLE_TN_TAIL {
            payload["note"] = json!("published T_n powers correspond to --tn-tail two-sided");
        }
        report.deltas_tsv()
    } else {
        report.to_tsv()
    };
    Ok(render(cli, payload, tsv, EXIT_OK))
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> CliResult<Rendered> {
    let ledger = run_ledger(args.profile, cli.seed).map_err(|e| e.to_string())?;
    let code = if ledger.all_passed() { EXIT_OK } else { EXIT_REJECT };
    let tsv = ledger.to_tsv();
    Ok(render(cli, json!({ "ledger": ledger, "all_passed": ledger.all_passed() }), tsv, code))
}

fn execute(cli: &Cli, notes: &mut Vec<String>) -> CliResult<Rendered> {
    match &cli.command {
        Command::Test(a) => cmd_test(cli, a, notes),
        Command::CriticalValues(a) => cmd_critical(cli, a, notes),
        Command::Power(a) => cmd_power(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_ERROR;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let mut notes = Vec::new();
    let result = match cli.threads {
        Some(0) => Err("--threads must be positive".to_string()),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| e.to_string())
            .and_then(|pool| pool.install(|| execute(&cli, &mut notes))),
        None => execute(&cli, &mut notes),
    };
    for n in &notes {
        let _ = writeln!(err, "{n}");
    }
    match result {
        Ok(r) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &r.body).map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(r.body.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => r.code,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_ERROR
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: paretogof {}: {e}", cli.command.name());
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("paretogof").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn presets_cover_labels() {
        for l in ["pareto", "log-normal", "half-normal", "weibull", "gamma", "log-gamma"] {
            assert_eq!(alternative_preset(l).unwrap().label(), l);
        }
        assert!(alternative_preset("cauchy").is_none());
    }

    #[test]
    fn bad_arguments_exit_with_error() {
        let (code, _, err) = run_capture(&["critical-values", "--statistic", "zz"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("unknown statistic"));
        let (code, _, _) = run_capture(&["power", "--alternative", "cauchy"]);
        assert_eq!(code, EXIT_ERROR);
        let (code, _, _) = run_capture(&["--threads", "0", "verify", "--profile", "quick"]);
        assert_eq!(code, EXIT_ERROR);
    }

    #[test]
    fn manifest_leads_tsv_output() {
        let (code, out, _) = run_capture(&["critical-values", "--n", "10", "--levels", "0.05", "--reps", "200"]);
        assert_eq!(code, EXIT_OK);
        let first = out.lines().next().unwrap();
        assert!(first.starts_with("# manifest: {"));
        assert!(first.contains("\"subcommand\":\"critical-values\""));
        assert!(!first.contains("threads"));
        assert_eq!(out.lines().nth(1).unwrap(), "n\tlevel\tcritical_value\treps\tseed");
    }
}
