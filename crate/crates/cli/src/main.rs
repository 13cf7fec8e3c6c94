mod report;

use anyhow::{bail, Context, Result};
use cdod_core::config::{compatibility, enumerate_valid, parse_config_file, preset, validate};
use cdod_core::enumerate::check_enum;
use cdod_core::sat::{check_sat, check_sat_in, conflict_limit, encode, to_dimacs};
use cdod_core::scope::{compute_scope, is_exhaustive, oracle_scope, Scope, ScopeOverrides};
use cdod_core::{parse_cd, parse_od, resolve, Outcome, ResolvedPair, SemanticConfig, Verdict};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use report::ConfigReport;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_INCONSISTENT: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 3;
const EXIT_DIVERGENCE: u8 = 4;

#[derive(Parser)]
#[command(name = "cdod", version, about = "Consistency of class and object diagrams under a semantic configuration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether some object model satisfies both diagrams.
    Check {
        cd: PathBuf,
        od: PathBuf,
        /// Config file, or a preset name (elicit, test, codegen, evolve).
        config: String,
        #[arg(long, value_enum, default_value_t = Engine::Sat)]
        engine: Engine,
        /// Bound overrides such as `Emp=2,foreign=1,total=5,fresh=3`.
        #[arg(long)]
        scope: Option<String>,
        /// Write the witness here as an object diagram, and as JSON next to it.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run the check under every valid configuration.
    Sweep {
        cd: PathBuf,
        od: PathBuf,
        /// Cross-check every row against the enumeration engine.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Write the Alloy module for a pair and configuration.
    Emit {
        cd: PathBuf,
        od: PathBuf,
        config: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the clause set in DIMACS format.
    Dimacs {
        cd: PathBuf,
        od: PathBuf,
        config: String,
        #[arg(long)]
        scope: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Inspect the configuration space.
    Configs {
        #[command(subcommand)]
        action: ConfigsAction,
    },
}

#[derive(Subcommand)]
enum ConfigsAction {
    List {
        #[arg(long)]
        json: bool,
    },
    Count,
    Validate { config: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Sat,
    Enum,
    Both,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check { cd, od, config, engine, scope, witness, json } => {
            check(&cd, &od, &config, engine, scope.as_deref(), witness.as_deref(), json)
        }
        Command::Sweep { cd, od, oracle, json, jobs } => sweep(&cd, &od, oracle, json, jobs),
        Command::Emit { cd, od, config, output } => {
            let pair = load_pair(&cd, &od)?;
            let (config, _) = load_config(&config)?;
            let text = cdod_core::alloy::emit_module(&pair, &config)?;
            write_out(output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Dimacs { cd, od, config, scope, output } => {
            let pair = load_pair(&cd, &od)?;
            let (config, _) = load_config(&config)?;
            let user = user_scope(scope.as_deref(), &pair, &config)?;
            let (scope, _) = compute_scope(&pair, &config, user.as_ref())?;
            write_out(output.as_deref(), &to_dimacs(&encode(&pair, &config, &scope).cnf))?;
            Ok(0)
        }
        Command::Configs { action } => configs(action),
    }
}

fn load_pair(cd: &Path, od: &Path) -> Result<ResolvedPair> {
    let cd_text = std::fs::read_to_string(cd).with_context(|| format!("reading {}", cd.display()))?;
    let od_text = std::fs::read_to_string(od).with_context(|| format!("reading {}", od.display()))?;
    let cd_ast = parse_cd(&cd_text).with_context(|| format!("in {}", cd.display()))?;
    let od_ast = parse_od(&od_text).with_context(|| format!("in {}", od.display()))?;
    resolve(&cd_ast, &od_ast).with_context(|| format!("resolving {} against {}", od.display(), cd.display()))
}

/// A config file path, or failing that a preset name (`elicit`, `elicit.cfg`).
/// The configuration is validated against the constraints.
fn load_config(arg: &str) -> Result<(SemanticConfig, String)> {
    let path = Path::new(arg);
    let (config, name) = if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        let file = parse_config_file(&text).with_context(|| format!("in {arg}"))?;
        (file.config, file.name)
    } else {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
        match preset(stem) {
            Some(c) => (c, stem.to_string()),
            None => bail!("`{arg}` is neither a config file nor a preset"),
        }
    };
    let violations = validate(&config);
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        bail!("invalid configuration `{name}`:\n  {}", lines.join("\n  "));
    }
    Ok((config, name))
}

fn user_scope(arg: Option<&str>, pair: &ResolvedPair, config: &SemanticConfig) -> Result<Option<Scope>> {
    arg.map(|s| ScopeOverrides::parse(s)?.to_scope(pair, config)).transpose().map_err(Into::into)
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exit_code(outcome: &Outcome) -> u8 {
    match outcome {
        Outcome::Consistent(_) => 0,
        Outcome::Inconsistent => EXIT_INCONSISTENT,
        Outcome::UnknownWithinScope => EXIT_UNKNOWN,
    }
}

/// The scope the enumerator runs at: the user's, or the capped oracle scope.
fn enum_scope(pair: &ResolvedPair, config: &SemanticConfig, user: Option<&Scope>) -> Result<Scope> {
    Ok(match user {
        Some(_) => compute_scope(pair, config, user)?.0,
        None => oracle_scope(pair, config)?,
    })
}

/// Both engines at one scope, so their verdicts are comparable.
fn both(pair: &ResolvedPair, config: &SemanticConfig, user: Option<&Scope>) -> Result<(Verdict, Verdict)> {
    let scope = enum_scope(pair, config, user)?;
    let e = check_enum(pair, config, &scope)?;
    let exhaustive = is_exhaustive(pair, config, &scope);
    let s = check_sat_in(pair, config, scope, exhaustive, conflict_limit())?;
    Ok((s, e))
}

fn check(
    cd: &Path,
    od: &Path,
    config_arg: &str,
    engine: Engine,
    scope: Option<&str>,
    witness: Option<&Path>,
    json: bool,
) -> Result<u8> {
    let pair = load_pair(cd, od)?;
    let (config, name) = load_config(config_arg)?;
    let user = user_scope(scope, &pair, &config)?;
    let notes = compatibility(&config, &pair);
    let cfg = ConfigReport::new(&config, Some(name));

    let runs: Vec<(&str, Verdict)> = match engine {
        Engine::Sat => vec![("sat", check_sat(&pair, &config, user.as_ref())?)],
        Engine::Enum => {
            let scope = enum_scope(&pair, &config, user.as_ref())?;
            vec![("enum", check_enum(&pair, &config, &scope)?)]
        }
        Engine::Both => {
            let (s, e) = both(&pair, &config, user.as_ref())?;
            vec![("sat", s), ("enum", e)]
        }
    };
    let diverged = runs.len() == 2 && !runs[0].1.outcome.agrees(&runs[1].1.outcome);

    if json {
        let reports: Vec<_> = runs.iter().map(|(e, v)| report::verdict_json(e, &cfg, v, &notes)).collect();
        let out = if reports.len() == 1 {
            reports.into_iter().next().unwrap()
        } else {
            serde_json::json!({ "runs": reports, "agree": !diverged })
        };
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for n in &notes {
            eprintln!("note: {n}");
        }
        for (i, (e, v)) in runs.iter().enumerate() {
            if i > 0 {
                println!();
            }
            report::print_verdict(e, &cfg, v);
        }
        if let Some(w) = runs[0].1.outcome.witness() {
            println!("\n{}", w.to_witness_text(&format!("{}_witness", pair.od.name)));
        }
    }

    if let (Some(path), Some(w)) = (witness, runs[0].1.outcome.witness()) {
        std::fs::write(path, w.to_witness_text(&format!("{}_witness", pair.od.name)))
            .with_context(|| format!("writing {}", path.display()))?;
        let mut json_path = path.as_os_str().to_owned();
        json_path.push(".json");
        std::fs::write(&json_path, serde_json::to_string_pretty(w)?)
            .with_context(|| format!("writing {}", Path::new(&json_path).display()))?;
    }

    if diverged {
        eprintln!(
            "error: engines disagree: sat {} vs enum {}",
            runs[0].1.outcome.label(),
            runs[1].1.outcome.label()
        );
        return Ok(EXIT_DIVERGENCE);
    }
    Ok(exit_code(&runs[0].1.outcome))
}

struct Row {
    config: SemanticConfig,
    verdict: Verdict,
    oracle: Option<(Verdict, Verdict)>,
}

impl Row {
    fn disagrees(&self) -> bool {
        self.oracle.as_ref().is_some_and(|(s, e)| !s.outcome.agrees(&e.outcome))
    }
}

fn sweep(cd: &Path, od: &Path, oracle: bool, json: bool, jobs: Option<usize>) -> Result<u8> {
    let pair = load_pair(cd, od)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let mut rows: Vec<Row> = pool.install(|| {
        enumerate_valid()
            .into_par_iter()
            .map(|config| -> Result<Row> {
                let verdict = check_sat(&pair, &config, None)?;
                let oracle = if oracle { Some(both(&pair, &config, None)?) } else { None };
                Ok(Row { config, verdict, oracle })
            })
            .collect::<Result<_>>()
    })?;
    rows.sort_by_key(|r| r.config.key());
    let disagreements = rows.iter().filter(|r| r.disagrees()).count();

    if json {
        let out: Vec<_> = rows
            .iter()
            .map(|r| {
                let mut v = serde_json::json!({
                    "config": r.config.key(),
                    "verdict": r.verdict.outcome.label(),
                    "exhaustive": r.verdict.exhaustive,
                    "micros": r.verdict.stats.micros,
                });
                if let Some((s, e)) = &r.oracle {
                    v["oracle"] = serde_json::json!({ "sat": s.outcome.label(), "enum": e.outcome.label() });
                }
                v
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for r in &rows {
            let mut line = format!("{}  {:<21} exhaustive={}", r.config.key(), r.verdict.outcome.label(), r.verdict.exhaustive);
            if let Some((s, e)) = &r.oracle {
                let mark = if r.disagrees() { "DISAGREE" } else { "agree" };
                line.push_str(&format!("  oracle: sat={} enum={} {mark}", s.outcome.label(), e.outcome.label()));
            }
            println!("{line}");
        }
        let count = |label: &str| rows.iter().filter(|r| r.verdict.outcome.label() == label).count();
        println!(
            "{} configurations: {} consistent, {} inconsistent, {} unknown",
            rows.len(),
            count("CONSISTENT"),
            count("INCONSISTENT"),
            count("UNKNOWN_WITHIN_SCOPE")
        );
        if oracle {
            println!("oracle disagreements: {disagreements}");
        }
    }
    Ok(if disagreements > 0 { EXIT_DIVERGENCE } else { 0 })
}

fn configs(action: ConfigsAction) -> Result<u8> {
    match action {
        ConfigsAction::Count => println!("{}", enumerate_valid().len()),
        ConfigsAction::List { json } => {
            let all = enumerate_valid();
            if json {
                let out: Vec<_> = all.iter().map(|c| ConfigReport::new(c, None)).collect();
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                for c in all {
                    println!("{}  {c}", c.key());
                }
            }
        }
        ConfigsAction::Validate { config } => {
            load_config(&config)?;
            println!("valid");
        }
    }
    Ok(0)
}
