mod config;
mod jobs;
mod summary;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use config::{Diagnostic, JobConfig, Task};

const OUTPUT_HELP: &str = "\
Output:
  Without --out the JSON report is printed to stdout. With --out DIR these files are written:
    <task>.json   JSON report; top-level fields schema (= 1), task, config, result, unstable, notes
    borders.csv   essential:  k,re_lambda,im_lambda,branch,side
    region.csv    essential:  re_lambda,im_lambda,count_plus,count_minus,index
                  (counts and index are empty on a Fredholm border)
    scan.csv      evans-scan: re_lambda,im_lambda,re_e,im_e,phase
    contour.csv   winding:    re_lambda,im_lambda,re_e,im_e,phase
                  (value columns are empty where the Evans function could not be evaluated)
  CSV files are UTF-8, comma separated, with a header row.

Exit status:
  0  success
  1  invalid arguments or configuration, or a failed computation
  2  instability detected and --fail-on-unstable given

Configuration:
  --config FILE reads a TOML job document (see --print-defaults); command-line flags override it.
  --threads falls back to output.threads, then to the EVANSLAB_THREADS environment variable.";

#[derive(Debug, Parser)]
#[command(name = "evanslab", version, about = "Spectral stability of fronts and pulses in a degenerate reaction-diffusion system", after_long_help = OUTPUT_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// TOML job configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the default configuration document and exit.
    #[arg(long)]
    print_defaults: bool,
    /// Catalog example id (1-10).
    #[arg(long, global = true)]
    example: Option<u8>,
    /// Reaction term and profile as a TOML document, instead of --example.
    #[arg(long, global = true)]
    document: Option<PathBuf>,
    /// Diffusivity of v.
    #[arg(long = "D", global = true, allow_negative_numbers = true)]
    d: Option<f64>,
    /// Wave speed.
    #[arg(long, global = true, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long, global = true)]
    gamma: Option<f64>,
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Translation of the profile.
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Truncation of the real line; the plateau half-width for example 3.
    #[arg(long = "L", global = true)]
    l: Option<f64>,
    /// Matching point of the Evans function.
    #[arg(long, global = true, allow_negative_numbers = true)]
    z0: Option<f64>,
    /// Sample count of the task's main grid: scan points, border samples per branch,
    /// initial contour samples, or profile-check points.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Real-scan interval as A,B.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    interval: Option<Vec<f64>>,
    #[arg(long, global = true)]
    contour_outer: Option<f64>,
    #[arg(long, global = true)]
    contour_inner: Option<f64>,
    /// Chart: default, identity, complex3, pulse4, front4 or unitary-<seed>.
    #[arg(long, global = true)]
    chart: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Exit with status 2 when an instability is detected.
    #[arg(long, global = true)]
    fail_on_unstable: bool,
    /// Seed of the unitary chart used after a Riccati blow-up.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// List the catalog of exact waves.
    Catalog,
    /// Check that a profile solves the travelling-wave equations.
    ProfileCheck,
    /// Fredholm borders, far-field stability and a Fredholm-index map.
    Essential,
    /// Evans function along a real interval, with its real roots.
    EvansScan,
    /// Winding number of the Evans function around a right half-annulus.
    Winding,
    /// Verdict tables of the theoretical and numerical results.
    SummaryTables,
}

impl From<Command> for Task {
    fn from(c: Command) -> Self {
        match c {
            Command::Catalog => Task::Catalog,
            Command::ProfileCheck => Task::ProfileCheck,
            Command::Essential => Task::Essential,
            Command::EvansScan => Task::EvansScan,
            Command::Winding => Task::Winding,
            Command::SummaryTables => Task::SummaryTables,
        }
    }
}

fn report(diagnostics: &[Diagnostic]) -> ExitCode {
    for d in diagnostics {
        eprintln!("error: {d}");
    }
    ExitCode::from(1)
}

/// Command-line flags on top of the file configuration.
fn apply_flags(cli: &Cli, cfg: &mut JobConfig, task: Task) {
    let w = &mut cfg.wave;
    if let Some(id) = cli.example {
        w.example = Some(id);
        w.document = None;
    }
    if let Some(p) = &cli.document {
        w.document = Some(p.clone());
        w.example = None;
    }
    for (flag, slot) in [(cli.d, &mut w.d), (cli.c, &mut w.c), (cli.gamma, &mut w.gamma), (cli.delta, &mut w.delta), (cli.beta, &mut w.beta)] {
        if flag.is_some() {
            *slot = flag;
        }
    }
    if let Some(l) = cli.l {
        if w.example == Some(3) {
            w.l = Some(l);
        } else {
            cfg.evans.l = l;
            cfg.evans.l_cap = cfg.evans.l_cap.max(l);
        }
    }
    if let Some(z0) = cli.z0 {
        cfg.evans.z0 = z0;
    }
    if let Some(seed) = cli.seed {
        cfg.evans.seed = seed;
    }
    if let Some(chart) = &cli.chart {
        cfg.evans.chart = chart.clone();
    }
    if let Some(n) = cli.grid {
        match task {
            Task::ProfileCheck => cfg.profile.points = n,
            Task::Essential => cfg.essential.samples = n,
            Task::EvansScan => cfg.scan.points = n,
            Task::Winding => cfg.contour.samples = n,
            Task::Catalog | Task::SummaryTables => {}
        }
    }
    if let Some(v) = &cli.interval {
        cfg.scan.interval = [v[0], v[1]];
    }
    if cli.contour_outer.is_some() {
        cfg.contour.outer = cli.contour_outer;
    }
    if let Some(r) = cli.contour_inner {
        cfg.contour.inner = r;
    }
    if cli.out.is_some() {
        cfg.output.dir = cli.out.clone();
    }
    if cli.threads.is_some() {
        cfg.output.threads = cli.threads;
    }
    cfg.output.fail_on_unstable |= cli.fail_on_unstable;
}

fn threads_from_env() -> Result<Option<usize>, Diagnostic> {
    match std::env::var("EVANSLAB_THREADS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Diagnostic { source: None, line: None, column: None, message: format!("EVANSLAB_THREADS must be a positive integer, got `{s}`") }),
        },
        Err(_) => Ok(None),
    }
}

fn run(task: Task, cfg: &JobConfig) -> anyhow::Result<jobs::Outcome> {
    match task {
        Task::Catalog => jobs::catalog_listing(),
        Task::ProfileCheck => jobs::profile_check(cfg),
        Task::Essential => jobs::essential(cfg),
        Task::EvansScan => jobs::evans_scan(cfg),
        Task::Winding => jobs::winding_task(cfg),
        Task::SummaryTables => summary::summary_tables(&cfg.evans.options()),
    }
}

/// Top-level JSON report; field order is fixed.
#[derive(Serialize)]
struct Document<'a> {
    schema: u32,
    task: &'static str,
    config: &'a JobConfig,
    result: &'a serde_json::Value,
    unstable: Option<bool>,
    notes: &'a [String],
}

fn write_outputs(task: Task, cfg: &JobConfig, outcome: &jobs::Outcome) -> anyhow::Result<()> {
    let document = Document {
        schema: 1,
        task: task.name(),
        config: cfg,
        result: &outcome.result,
        unstable: outcome.unstable,
        notes: &outcome.notes,
    };
    let text = serde_json::to_string_pretty(&document)? + "\n";
    match &cfg.output.dir {
        None => print!("{text}"),
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let json_path = dir.join(format!("{}.json", task.name()));
            std::fs::write(&json_path, text)?;
            println!("{}", json_path.display());
            for (name, bytes) in &outcome.csv {
                let path = dir.join(name);
                std::fs::write(&path, bytes)?;
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if cli.print_defaults {
        print!("{}", JobConfig::defaults_document());
        return ExitCode::SUCCESS;
    }
    let (mut cfg, source) = match &cli.config {
        Some(path) => match JobConfig::load(path) {
            Ok((cfg, text)) => (cfg, Some((path.clone(), text))),
            Err(d) => return report(&d),
        },
        None => (JobConfig::default(), None),
    };
    let task = match (cli.command, cfg.task) {
        (Some(c), _) => Task::from(c),
        (None, Some(t)) => t,
        (None, None) => return report(&[Diagnostic {
            source: None,
            line: None,
            column: None,
            message: "no task given; pass a subcommand or set `task` in the configuration".into(),
        }]),
    };
    cfg.task = Some(task);
    if cli.interval.as_ref().is_some_and(|v| v.len() != 2) {
        return report(&[Diagnostic { source: None, line: None, column: None, message: "--interval takes two numbers, A,B".into() }]);
    }
    // file values are validated against their own lines before flags override them
    if let Some((path, text)) = &source {
        if let Err(d) = cfg.validate(task, Some((path, text))) {
            return report(&d);
        }
    }
    apply_flags(&cli, &mut cfg, task);
    if let Err(d) = cfg.validate(task, None) {
        return report(&d);
    }
    let threads = match cfg.output.threads {
        Some(n) => Some(n),
        None => match threads_from_env() {
            Ok(n) => n,
            Err(d) => return report(&[d]),
        },
    };
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = match run(task, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = write_outputs(task, &cfg, &outcome) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    if cfg.output.fail_on_unstable && outcome.unstable == Some(true) {
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
