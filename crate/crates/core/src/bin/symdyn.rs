use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use symdyn::entropy::{CountMode, EstimateOptions};
use symdyn::experiment::{
    approx_quality_report, build_approximation, certify_report, decide_report, entropy_report, gap_report,
    load_subshift, parse_elements, parse_ratio, parse_sizes, recipe, run_config, stirling_report, sweep_report,
    ApproxKind, ExperimentConfig, Report,
};
use symdyn::group::GroupModel;
use symdyn::io::parse_rule_file;
use symdyn::shift::Subshift;
use symdyn::sofic::SoficApproximation;
use symdyn::{Error, Result};

#[derive(Parser)]
#[command(name = "symdyn", version, about = "Subshifts, cellular automata and microstate entropy experiments")]
struct Cli {
    /// Worker threads for parallel passes (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized constructions; echoed in every CSV header.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Microstate entropy estimates.
    #[command(subcommand)]
    Entropy(EntropyCommand),
    /// Entropy gap between a subshift and a proper subshift.
    Gap(GapArgs),
    /// Decide every local rule on a memory set.
    Sweep(SweepArgs),
    /// Decide injectivity and surjectivity of one rule.
    Decide(DecideArgs),
    /// Cellular automaton decisions.
    #[command(subcommand)]
    Ca(CaCommand),
    /// Strong irreducibility and splicability certificates.
    Certify(CertifyArgs),
    /// Sofic approximations.
    #[command(subcommand)]
    Approx(ApproxCommand),
    /// Binomial tail, subset identity and factorial bounds.
    #[command(subcommand)]
    Stirling(StirlingCommand),
    /// Run a named recipe.
    Recipe {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(symdyn::experiment::RECIPES))]
        name: String,
    },
    /// Run a line-based experiment file.
    Run { config: PathBuf },
}

#[derive(Subcommand)]
enum EntropyCommand {
    Estimate(EstimateArgs),
    Gap(GapArgs),
}

#[derive(Subcommand)]
enum CaCommand {
    Decide(DecideArgs),
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum ApproxCommand {
    /// Print the permutation table of an approximation.
    Build(BuildArgs),
    /// Multiplicativity defects and separations on a test set.
    Quality(QualityArgs),
}

#[derive(Subcommand)]
enum StirlingCommand {
    Verify {
        #[arg(long, default_value = "1/4")]
        gamma: String,
        #[arg(long, default_value_t = 500)]
        span: u64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// golden-mean, weiss, zero, hard-square, full:k=N, hard-ball:d=N
    #[arg(long)]
    preset: Option<String>,
    /// Subshift file.
    #[arg(long)]
    subshift: Option<PathBuf>,
}

impl Source {
    fn load(&self) -> Result<(String, Subshift)> {
        match (&self.preset, &self.subshift) {
            (Some(p), _) => Ok((p.clone(), load_subshift(&format!("preset:{p}"), Path::new("."))?)),
            (_, Some(path)) => Ok((path.display().to_string(), load_subshift(&path.display().to_string(), Path::new("."))?)),
            _ => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    source: Source,
    /// Torus sides, e.g. `8,12,16`.
    #[arg(long, default_value = "8,12,16")]
    d: String,
    #[arg(long, default_value = "1/1000")]
    delta: String,
    #[arg(long, default_value = "1/4")]
    eps: String,
    /// Perturbed copies tried per periodic lift.
    #[arg(long, default_value_t = 0)]
    perturb: usize,
    #[arg(long)]
    radius: Option<u32>,
    #[arg(long)]
    upper_n: Option<usize>,
    #[arg(long, default_value = "greedy", value_parser = ["greedy", "exact"])]
    mode: String,
}

#[derive(Args)]
struct GapArgs {
    /// `preset:<name>` or a file.
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long, default_value = "10,16")]
    d: String,
    #[arg(long, default_value = "1/1000")]
    delta: String,
    #[arg(long, default_value = "1/4")]
    eps: String,
    #[arg(long, default_value_t = 0.0)]
    margin: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: Source,
    /// Memory set, e.g. `"0 1"` or `-1 0`.
    #[arg(long, allow_hyphen_values = true)]
    memory: String,
    #[arg(long, default_value_t = symdyn::automaton::DEFAULT_RULE_BUDGET)]
    budget: u128,
}

#[derive(Args)]
struct DecideArgs {
    #[command(flatten)]
    source: Source,
    /// Rule file; `weiss` for the built-in Weiss rule.
    #[arg(long)]
    rule: String,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    source: Source,
    /// Gap set, e.g. `"-1 0 1"` or `"(-1,-1);(0,0)"`; default is the unit box.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    #[arg(long, default_value_t = 8)]
    budget: usize,
    #[arg(long, default_value_t = symdyn::shift::DEFAULT_MARGIN)]
    margin: u32,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, default_value = "lattice:1")]
    group: String,
    #[arg(long, default_value = "cyclic")]
    kind: String,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    radius: Option<u32>,
}

#[derive(Args)]
struct QualityArgs {
    /// Table written by `approx build`; otherwise built from the flags below.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, default_value = "lattice:1")]
    group: String,
    #[arg(long, default_value = "cyclic")]
    kind: String,
    #[arg(long, default_value_t = 64)]
    d: usize,
    #[arg(long)]
    radius: Option<u32>,
    /// Ball radius of the test set.
    #[arg(long, default_value_t = 3)]
    test: u32,
}

fn build(group: &str, kind: &str, d: usize, radius: Option<u32>, seed: u64) -> Result<SoficApproximation> {
    build_approximation(GroupModel::parse(group)?, kind.parse::<ApproxKind>()?, d, seed, radius)
}

fn load_rule(source: &str) -> Result<symdyn::automaton::LocalRule> {
    if source == "weiss" || source == "preset:weiss" {
        return Ok(symdyn::automaton::LocalRule::weiss());
    }
    Ok(parse_rule_file(source)?.value.1)
}

fn delta_set(x: &Subshift, text: Option<&str>) -> Result<symdyn::group::FiniteSubset> {
    match text {
        Some(t) => parse_elements(x.group(), t),
        None => Ok(symdyn::shift::BoxWindow::centered(x.rank(), 1).to_subset()),
    }
}

fn gap(a: &GapArgs) -> Result<Report> {
    let x = load_subshift(&a.x, Path::new("."))?;
    let y = load_subshift(&a.y, Path::new("."))?;
    let sides = parse_sizes(&a.d)?;
    gap_report(&a.x, &x, &a.y, &y, &sides, parse_ratio(&a.delta)?, parse_ratio(&a.eps)?, a.margin)
}

fn sweep(a: &SweepArgs) -> Result<Report> {
    let (label, x) = a.source.load()?;
    sweep_report(&label, &x, &parse_elements(x.group(), &a.memory)?, a.budget)
}

fn decide(a: &DecideArgs) -> Result<Report> {
    let (label, x) = a.source.load()?;
    Ok(decide_report(&label, &x, &load_rule(&a.rule)?)?.0)
}

struct Output {
    reports: Vec<Report>,
    /// Already written elsewhere (a config's `output`, or a table dump).
    written: bool,
}

fn execute(cli: &Cli) -> Result<Output> {
    let reports = match &cli.command {
        Command::Entropy(EntropyCommand::Estimate(a)) => {
            let (label, x) = a.source.load()?;
            let opts = EstimateOptions {
                perturbation: (a.perturb > 0).then_some((a.perturb, a.radius)),
                upper_n: a.upper_n,
                mode: if a.mode == "exact" { CountMode::exact() } else { CountMode::Greedy },
            };
            let sides = parse_sizes(&a.d)?;
            vec![entropy_report(&label, &x, &sides, parse_ratio(&a.delta)?, parse_ratio(&a.eps)?, &opts)?.0]
        }
        Command::Entropy(EntropyCommand::Gap(a)) | Command::Gap(a) => vec![gap(a)?],
        Command::Sweep(a) | Command::Ca(CaCommand::Sweep(a)) => vec![sweep(a)?],
        Command::Decide(a) | Command::Ca(CaCommand::Decide(a)) => vec![decide(a)?],
        Command::Certify(a) => {
            let (label, x) = a.source.load()?;
            let delta = delta_set(&x, a.delta.as_deref())?;
            vec![certify_report(&label, &x, &delta, a.budget, a.margin)?]
        }
        Command::Approx(ApproxCommand::Build(a)) => {
            let approx = build(&a.group, &a.kind, a.d, a.radius, cli.seed)?;
            let dump = approx.dump();
            match &cli.out {
                Some(p) => std::fs::write(p, dump)?,
                None => print!("{dump}"),
            }
            return Ok(Output { reports: Vec::new(), written: true });
        }
        Command::Approx(ApproxCommand::Quality(a)) => {
            let approx = match &a.file {
                Some(f) => SoficApproximation::parse(&std::fs::read_to_string(f)?)?,
                None => build(&a.group, &a.kind, a.d, a.radius, cli.seed)?,
            };
            let test = approx.model().ball(a.test);
            vec![approx_quality_report(&approx, &test)?]
        }
        Command::Stirling(StirlingCommand::Verify { gamma, span }) => vec![stirling_report(parse_ratio(gamma)?, *span)?],
        Command::Recipe { name } => return Ok(Output { reports: recipe(name, cli.seed)?, written: false }),
        Command::Run { config } => {
            let cfg = ExperimentConfig::from_file(config)?;
            return Ok(Output { reports: run_config(&cfg)?, written: cfg.output.is_some() });
        }
    };
    let reports = reports
        .into_iter()
        .map(|mut r| {
            r.config.insert(0, ("seed".into(), cli.seed.to_string()));
            r
        })
        .collect();
    Ok(Output { reports, written: false })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(&cli) {
        Ok(Output { reports, written }) => {
            let csv: Vec<String> = reports.iter().map(Report::to_csv).collect();
            let csv = csv.join("\n");
            if !written {
                let written = match &cli.out {
                    Some(p) => std::fs::write(p, &csv).map_err(Error::from),
                    None => {
                        print!("{csv}");
                        Ok(())
                    }
                };
                if let Err(e) = written {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            for r in &reports {
                eprint!("{}", r.summary());
            }
            if reports.iter().all(Report::passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
