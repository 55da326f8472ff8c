use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};
use minmin_cli::{compare, run_experiment, CliError, ExperimentConfig, Method, ProblemSource, SyntheticSpec};

/// Min-min optimization experiments: Vaidya with FGM or Varag inner solves,
/// or Varag on the joint problem.
#[derive(Debug, Parser)]
#[command(name = "minmin", version)]
#[command(group(ArgGroup::new("source").required(true).args(["data", "synthetic"])))]
struct Args {
    /// LIBSVM file with binary labels.
    #[arg(long, value_name = "PATH")]
    data: Option<PathBuf>,
    /// Generated problem, e.g. `logreg:m=200,features=55` or `quadratic:n=50,lipschitz=100`.
    #[arg(long, value_name = "SPEC")]
    synthetic: Option<String>,
    /// Size of the x block; for logistic regression the first d feature columns.
    #[arg(long)]
    d: usize,
    /// Regularization weight 1/sigma^2.
    #[arg(long, default_value_t = 0.005)]
    reg: f64,
    /// Radius of the balls Q_x and Q_y for logistic regression [default: 10 (1 + max row norm)].
    #[arg(long)]
    radius: Option<f64>,
    /// approach1, approach2 or varag-joint.
    #[arg(long, default_value = "approach2")]
    method: String,
    /// Limit on grad_y calls (component calls for finite sums).
    #[arg(long)]
    budget: u64,
    /// Target accuracy.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Standardize feature columns of --data.
    #[arg(long)]
    standardize: bool,
    /// Keep only the first N objects of --data.
    #[arg(long, value_name = "N")]
    rows: Option<usize>,
    /// Record wall time in history.csv (otherwise the column is zero and runs are byte-identical).
    #[arg(long)]
    wall_time: bool,
    /// Also run this method on the same problem and budget and write compare.csv.
    #[arg(long, value_name = "METHOD")]
    compare_with: Option<String>,
}

fn config(args: &Args) -> Result<ExperimentConfig, CliError> {
    let source = match (&args.data, &args.synthetic) {
        (Some(path), None) => ProblemSource::Libsvm { path: path.clone(), standardize: args.standardize, rows: args.rows },
        (None, Some(spec)) => ProblemSource::Synthetic(spec.parse::<SyntheticSpec>()?),
        _ => return Err(CliError::Config("give exactly one of --data and --synthetic".into())),
    };
    Ok(ExperimentConfig {
        source,
        d: args.d,
        sigma2_inv: args.reg,
        radius: args.radius,
        method: args.method.parse()?,
        budget: args.budget,
        target_epsilon: args.eps,
        seed: args.seed,
        out_dir: args.out.clone(),
        wall_time: args.wall_time,
    })
}

fn run(args: &Args) -> Result<(), CliError> {
    let cfg = config(args)?;
    match &args.compare_with {
        None => {
            let report = run_experiment(&cfg)?;
            print!("{}", report.summary.to_csv());
        }
        Some(other) => {
            let method_b: Method = other.parse()?;
            let a = ExperimentConfig { out_dir: args.out.join(cfg.method.name()), ..cfg.clone() };
            let b = ExperimentConfig { method: method_b, out_dir: args.out.join(method_b.name()), ..cfg.clone() };
            let report = compare(&a, &b, &args.out)?;
            println!("{} final objective {:e}", a.method, report.a.final_objective());
            println!("{} final objective {:e}", b.method, report.b.final_objective());
            println!("lower: {}", if report.a_wins() { a.method } else { b.method });
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("MINMIN_LOG", "warn")).init();
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
