//! Command-line front end for `keygraph`.
//!
//! Each subcommand parses its flags, calls one library entry point and
//! renders the result as text, CSV or JSON. No numerical work happens here.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use keygraph::analytic::AnalyticReport;
use keygraph::experiments::{
    self, output, KRule, McConfig, MomentReport, RatioRecord, ScalingFamily, SweepResult,
    TableKind, TableRow,
};
use keygraph::graphgen::{sample_er, sample_rkg, Seed};
use keygraph::metrics::{average_clustering, count_triangles, global_clustering};
use keygraph::{analytic, oracle, Probability, Theta};

#[derive(Debug, Parser)]
#[command(
    name = "keygraph",
    version,
    about = "Triangles and clustering in random key graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form quantities for one (n, K, P).
    Analytic(AnalyticArgs),
    /// Sample one random key graph or ER graph and report its statistics.
    Sample(SampleArgs),
    /// Reproduce the fixed-parameter clustering tables.
    Table(TableArgs),
    /// Expected-triangle ratios along a scaling family.
    Sweep(SweepArgs),
    /// Empirical triangle-existence probability along a scaling family.
    ZeroOne(ZeroOneArgs),
    /// First and second moments of the triangle count versus Monte Carlo.
    Moments(MomentsArgs),
    /// Exact enumeration over all key-ring assignments (tiny pools only).
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct ThetaArgs {
    /// Key ring size.
    #[arg(id = "K", long = "K")]
    #[serde(rename = "K")]
    pub k: u64,
    /// Key pool size.
    #[arg(id = "P", long = "P")]
    #[serde(rename = "P")]
    pub p: u64,
}

impl ThetaArgs {
    fn theta(&self) -> keygraph::Result<Theta> {
        Theta::new(self.k, self.p)
    }
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyticArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub theta: ThetaArgs,
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Rkg,
    Er,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub theta: ThetaArgs,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Model::Rkg)]
    pub model: Model,
    /// ER edge probability; defaults to the exactly matched p(θ).
    #[arg(id = "edge_p", long = "p")]
    #[serde(rename = "p")]
    pub edge_p: Option<f64>,
    /// Write the sampled graph as an edge list.
    #[arg(long)]
    #[serde(skip)]
    pub dump: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Which {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

#[derive(Debug, Args, Serialize)]
pub struct McArgs {
    #[arg(long)]
    pub reps: u64,
    #[arg(long)]
    pub seed: u64,
    /// Worker threads for replications (output does not depend on it).
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl McArgs {
    fn config(&self) -> McConfig {
        McConfig::new(self.reps, Seed::new(self.seed)).with_threads(self.threads)
    }
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    #[arg(long, value_enum, ignore_case = true)]
    pub which: Which,
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Connectivity,
    Sparse,
    Explicit,
}

#[derive(Debug, Args, Serialize)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Scale constant of the connectivity or sparse family.
    #[arg(long)]
    pub c: Option<f64>,
    /// Constant ring size for the sparse family.
    #[arg(long)]
    pub k_const: Option<u64>,
    /// Sparse family ring size K_n = ceil(a·n^b).
    #[arg(long)]
    pub k_a: Option<f64>,
    #[arg(long)]
    pub k_b: Option<f64>,
    /// CSV file of `n,K,P` lines for an explicit family.
    #[arg(long)]
    pub family_file: Option<PathBuf>,
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// Also estimate both expectations by sampling.
    #[arg(long, requires = "seed")]
    pub reps: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ZeroOneArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct MomentsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub theta: ThetaArgs,
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Beta,
    Cross,
    Distribution,
}

#[derive(Debug, Args, Serialize)]
pub struct OracleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub theta: ThetaArgs,
    #[arg(long, value_enum, default_value_t = Quantity::Beta)]
    pub quantity: Quantity,
    /// Node count for the triangle-count distribution.
    #[arg(long, default_value_t = 3)]
    pub n: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

/// Failures of a CLI run, each with its own exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(keygraph::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<keygraph::Error> for CliError {
    fn from(e: keygraph::Error) -> Self {
        CliError::Model(e)
    }
}

impl CliError {
    /// 2 = bad flags, 3 = model precondition violated, 4 = oracle guard exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(e) if e.is_model_violation() => 3,
            CliError::Model(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

fn emit(out: &OutputArgs, text: String) -> Result<(), CliError> {
    match &out.output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn render<C: Serialize, T: Serialize>(
    format: Format,
    config: &C,
    seed: Option<u64>,
    rows: &[T],
    text: impl FnOnce() -> String,
) -> String {
    match format {
        Format::Text => text(),
        Format::Csv => output::to_csv(rows),
        Format::Json => output::to_json(config, seed, rows),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analytic(a) => run_analytic(a),
        Command::Sample(a) => run_sample(a),
        Command::Table(a) => run_table(a),
        Command::Sweep(a) => run_sweep(a),
        Command::ZeroOne(a) => run_zero_one(a),
        Command::Moments(a) => run_moments(a),
        Command::Oracle(a) => run_oracle(a),
    }
}

/// Flat view of [`AnalyticReport`] for tabular output.
#[derive(Debug, Serialize)]
pub struct AnalyticRow {
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(rename = "P")]
    pub p: u64,
    pub n: u64,
    pub q: f64,
    pub p_edge: f64,
    pub r: f64,
    pub beta: f64,
    pub tau: f64,
    pub c_k: f64,
    pub expected_triangles: f64,
    pub expected_triangles_matched_er: f64,
    pub ratio_triangles: f64,
    pub ratio_clustering: f64,
    pub ratio_asymptotic: f64,
}

impl From<&AnalyticReport> for AnalyticRow {
    fn from(r: &AnalyticReport) -> Self {
        Self {
            k: r.theta.ring_size(),
            p: r.theta.pool_size(),
            n: r.n,
            q: r.q.value(),
            p_edge: r.p_edge.value(),
            r: r.r.value(),
            beta: r.beta.value(),
            tau: r.tau,
            c_k: r.c_k.value(),
            expected_triangles: r.expected_triangles,
            expected_triangles_matched_er: r.expected_triangles_matched_er,
            ratio_triangles: r.ratio_triangles,
            ratio_clustering: r.ratio_clustering,
            ratio_asymptotic: analytic::asymptotic_ratio(r.theta),
        }
    }
}

fn run_analytic(a: AnalyticArgs) -> Result<(), CliError> {
    let report = AnalyticReport::compute(a.n, a.theta.theta()?)?;
    let row = AnalyticRow::from(&report);
    let text = render(a.out.format, &a, None, std::slice::from_ref(&row), || {
        let mut s = String::new();
        let _ = writeln!(s, "theta                  {}", report.theta);
        let _ = writeln!(s, "n                      {}", row.n);
        let _ = writeln!(s, "q                      {:.6}", row.q);
        let _ = writeln!(s, "p = 1 - q              {:.6}", row.p_edge);
        let _ = writeln!(s, "r                      {:.6}", row.r);
        let _ = writeln!(s, "beta                   {:.6e}", row.beta);
        let _ = writeln!(s, "tau                    {:.6e}", row.tau);
        let _ = writeln!(s, "c_k                    {:.6}", row.c_k);
        let _ = writeln!(s, "E[T] key graph         {:.6}", row.expected_triangles);
        let _ = writeln!(
            s,
            "E[T] matched ER        {:.6}",
            row.expected_triangles_matched_er
        );
        let _ = writeln!(s, "ratio (exact match)    {:.6}", row.ratio_clustering);
        let _ = writeln!(s, "1 + P/K^3              {:.6}", row.ratio_asymptotic);
        s
    });
    emit(&a.out, text)
}

#[derive(Debug, Serialize)]
pub struct SampleRow {
    pub model: Model,
    pub n: u64,
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(rename = "P")]
    pub p: u64,
    pub edge_probability: f64,
    pub edges: u64,
    pub triangles: u64,
    pub global_clustering: f64,
    pub average_clustering: f64,
    pub seed: u64,
}

fn run_sample(a: SampleArgs) -> Result<(), CliError> {
    let theta = a.theta.theta()?;
    let mut rng = Seed::new(a.seed).rng(0);
    let (graph, p_edge) = match a.model {
        Model::Rkg => {
            if a.edge_p.is_some() {
                return Err(CliError::Usage("--p applies to --model er only".into()));
            }
            (
                sample_rkg(a.n as usize, theta, &mut rng),
                analytic::edge_probability(theta),
            )
        }
        Model::Er => {
            let p = match a.edge_p {
                Some(p) => Probability::new(p)?,
                None => analytic::edge_probability(theta),
            };
            (sample_er(a.n as usize, p, &mut rng), p)
        }
    };
    if let Some(path) = &a.dump {
        fs::write(path, graph.to_edge_list())?;
    }
    let stats = count_triangles(&graph);
    let row = SampleRow {
        model: a.model,
        n: a.n,
        k: a.theta.k,
        p: a.theta.p,
        edge_probability: p_edge.value(),
        edges: graph.edge_count() as u64,
        triangles: stats.total_triangles,
        global_clustering: global_clustering(&stats),
        average_clustering: average_clustering(&stats),
        seed: a.seed,
    };
    let text =
        render(
            a.out.format,
            &a,
            Some(a.seed),
            std::slice::from_ref(&row),
            || {
                format!(
            "model {}, n={}, {theta}, p={:.6}\nedges {}\ntriangles {}\nC* {:.6}\nC_avg {:.6}\n",
            if row.model == Model::Rkg { "rkg" } else { "er" },
            row.n, row.edge_probability, row.edges, row.triangles,
            row.global_clustering, row.average_clustering
        )
            },
        );
    emit(&a.out, text)
}

fn run_table(a: TableArgs) -> Result<(), CliError> {
    let which = match a.which {
        Which::I => TableKind::I,
        Which::II => TableKind::II,
    };
    let rows = experiments::reproduce_table(which, a.n, &a.mc.config())?;
    let text = render(a.out.format, &a, Some(a.mc.seed), &rows, || {
        table_text(&rows)
    });
    emit(&a.out, text)
}

fn table_text(rows: &[TableRow]) -> String {
    let mut s = format!(
        "{:>4} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}\n",
        "K", "P", "1-q", "C_K", "C*hat", "C_ER", "C*hat_ER"
    );
    for r in rows {
        let er = r
            .c_star_hat_er
            .map_or("-".to_string(), |v| format!("{v:.4}"));
        let _ = writeln!(
            s,
            "{:>4} {:>9} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9}",
            r.ring_size, r.pool_size, r.one_minus_q, r.c_k, r.c_star_hat, r.c_er, er
        );
    }
    s
}

fn family(args: &FamilyArgs) -> Result<ScalingFamily, CliError> {
    let need = |v: Option<f64>, flag: &str| {
        v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this family")))
    };
    match args.family {
        Some(FamilyKind::Connectivity) => Ok(ScalingFamily::Connectivity {
            c: need(args.c, "c")?,
        }),
        Some(FamilyKind::Sparse) => {
            let k_rule = match (args.k_const, args.k_a, args.k_b) {
                (Some(k), None, None) => KRule::Constant { k },
                (None, Some(a), Some(b)) => KRule::Power { a, b },
                _ => {
                    return Err(CliError::Usage(
                        "sparse family needs --k-const or both --k-a and --k-b".into(),
                    ))
                }
            };
            Ok(ScalingFamily::Sparse {
                c: need(args.c, "c")?,
                k_rule,
            })
        }
        Some(FamilyKind::Explicit) | None => match &args.family_file {
            Some(path) => Ok(ScalingFamily::explicit_from_csv(&fs::read_to_string(
                path,
            )?)?),
            None => Err(CliError::Usage(
                "give --family connectivity|sparse or --family-file".into(),
            )),
        },
    }
}

fn run_sweep(a: SweepArgs) -> Result<(), CliError> {
    let fam = family(&a.family)?;
    let mc = match (a.reps, a.seed) {
        (Some(r), Some(s)) => Some(McConfig::new(r, Seed::new(s)).with_threads(a.threads)),
        _ => None,
    };
    let rows = experiments::ratio_sweep(&fam, &a.family.n_list, mc.as_ref())?;
    let text = render(a.out.format, &a, a.seed, &rows, || ratio_text(&rows));
    emit(&a.out, text)
}

fn ratio_text(rows: &[RatioRecord]) -> String {
    let mut s = format!(
        "{:>8} {:>5} {:>10} {:>14} {:>12} {:>12} {:>12}\n",
        "n", "K", "P", "E[T] key", "ratio exact", "ratio asym", "1+P/K^3"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>8} {:>5} {:>10} {:>14.4} {:>12.4} {:>12.4} {:>12.4}",
            r.n,
            r.ring_size,
            r.pool_size,
            r.expected_rkg,
            r.ratio_exact,
            r.ratio_asymptotic,
            r.predicted_ratio
        );
    }
    s
}

fn run_zero_one(a: ZeroOneArgs) -> Result<(), CliError> {
    let fam = family(&a.family)?;
    let rows = experiments::zero_one_sweep(&fam, &a.family.n_list, &a.mc.config())?;
    let text = render(a.out.format, &a, Some(a.mc.seed), &rows, || {
        zero_one_text(&rows)
    });
    emit(&a.out, text)
}

fn zero_one_text(rows: &[SweepResult]) -> String {
    let mut s = format!(
        "{:>8} {:>5} {:>10} {:>12} {:>10} {:>12} {:>12}\n",
        "n", "K", "P", "n^3 tau", "P(T>0)", "mean T", "E[T]"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>8} {:>5} {:>10} {:>12.4e} {:>10.4} {:>12.4} {:>12.4}",
            r.n,
            r.ring_size,
            r.pool_size,
            r.n3_tau,
            r.empirical_triangle_prob,
            r.mean_triangles,
            r.expected_triangles
        );
    }
    s
}

#[derive(Debug, Serialize)]
pub struct MomentRow {
    pub n: u64,
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(rename = "P")]
    pub p: u64,
    pub cross_moment: f64,
    pub cross_moment_source: &'static str,
    pub analytic_mean: f64,
    pub mc_mean: f64,
    pub mc_mean_se: f64,
    pub analytic_second_moment: f64,
    pub mc_second_moment: f64,
    pub mc_second_moment_se: f64,
    pub analytic_variance: f64,
    pub mean_ok: bool,
    pub second_moment_ok: bool,
    pub exact_mean_matches: Option<bool>,
    pub exact_second_moment_matches: Option<bool>,
    pub replications: u64,
    pub seed: u64,
}

impl From<&MomentReport> for MomentRow {
    fn from(r: &MomentReport) -> Self {
        Self {
            n: r.n,
            k: r.theta.ring_size(),
            p: r.theta.pool_size(),
            cross_moment: r.cross_moment.value(),
            cross_moment_source: match r.cross_moment {
                experiments::CrossMomentSource::Oracle { .. } => "oracle",
                experiments::CrossMomentSource::MonteCarlo { .. } => "monte_carlo",
            },
            analytic_mean: r.analytic_mean,
            mc_mean: r.mc_mean.value,
            mc_mean_se: r.mc_mean.std_error,
            analytic_second_moment: r.analytic_second_moment,
            mc_second_moment: r.mc_second_moment.value,
            mc_second_moment_se: r.mc_second_moment.std_error,
            analytic_variance: r.analytic_variance,
            mean_ok: r.mean_ok,
            second_moment_ok: r.second_moment_ok,
            exact_mean_matches: r.exact.as_ref().map(|e| e.mean_matches),
            exact_second_moment_matches: r.exact.as_ref().map(|e| e.second_moment_matches),
            replications: r.replications,
            seed: r.seed,
        }
    }
}

fn run_moments(a: MomentsArgs) -> Result<(), CliError> {
    let report = experiments::moment_check(a.n, a.theta.theta()?, &a.mc.config())?;
    let row = MomentRow::from(&report);
    let text = render(
        a.out.format,
        &a,
        Some(a.mc.seed),
        std::slice::from_ref(&row),
        || {
            let flag = |ok: bool| if ok { "ok" } else { "DEVIATES" };
            let mut s = format!("n={} {}\n", row.n, report.theta);
            let _ = writeln!(
                s,
                "E[chi123 chi124]   {:.6e} ({})",
                row.cross_moment, row.cross_moment_source
            );
            let _ = writeln!(
                s,
                "E[T]     formula {:.6}  MC {:.6} ± {:.6}  {}",
                row.analytic_mean,
                row.mc_mean,
                row.mc_mean_se,
                flag(row.mean_ok)
            );
            let _ = writeln!(
                s,
                "E[T^2]   formula {:.6}  MC {:.6} ± {:.6}  {}",
                row.analytic_second_moment,
                row.mc_second_moment,
                row.mc_second_moment_se,
                flag(row.second_moment_ok)
            );
            if let Some(e) = &report.exact {
                let _ = writeln!(
                    s,
                    "exact enumeration: mean {} ({}), second moment {} ({})",
                    e.mean,
                    flag(e.mean_matches),
                    e.second_moment,
                    flag(e.second_moment_matches)
                );
            }
            s
        },
    );
    emit(&a.out, text)
}

#[derive(Debug, Serialize)]
pub struct OracleRow {
    pub quantity: String,
    pub exact: String,
    pub value: f64,
}

fn run_oracle(a: OracleArgs) -> Result<(), CliError> {
    let theta = a.theta.theta()?;
    let rows: Vec<OracleRow> = match a.quantity {
        Quantity::Beta => {
            let x = oracle::enumerate_beta(theta)?;
            vec![OracleRow {
                quantity: "beta".into(),
                exact: x.to_string(),
                value: x.to_f64(),
            }]
        }
        Quantity::Cross => {
            let x = oracle::enumerate_cross_moment(theta)?;
            vec![OracleRow {
                quantity: "cross_moment".into(),
                exact: x.to_string(),
                value: x.to_f64(),
            }]
        }
        Quantity::Distribution => {
            let d = oracle::enumerate_triangle_count_distribution(a.n, theta)?;
            d.counts
                .keys()
                .map(|&t| {
                    let x = d.probability(t);
                    OracleRow {
                        quantity: format!("P(T={t})"),
                        exact: x.to_string(),
                        value: x.to_f64(),
                    }
                })
                .collect()
        }
    };
    let text = render(a.out.format, &a, None, &rows, || {
        rows.iter()
            .map(|r| format!("{:<12} {:<24} {:.12}\n", r.quantity, r.exact, r.value))
            .collect()
    });
    emit(&a.out, text)
}
