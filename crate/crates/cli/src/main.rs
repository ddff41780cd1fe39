mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use freeconv_core::infdiv::{mp_product_routes, LevyPair, RectLevyMeasure};
use freeconv_core::*;
use freeconv_matrix_lab::{
    run_additivity_sim, run_figure1, AdditivityParams, ComparisonReport, Factor, Figure1Params,
    HistogramBin, MatrixModel,
};
use serde_json::{json, Value};

use output::{as_values, json_list, json_pairs, JsonScalar, Output};

#[derive(Parser)]
#[command(name = "freeconv", version, about = "Free, multiplicative and rectangular free convolutions on moment sequences")]
struct Cli {
    /// Truncation order N [default: 12 exact, 16 float]
    #[arg(long, global = true, env = "FREECONV_ORDER")]
    order: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Backend::Exact)]
    backend: Backend,

    /// Comparison tolerance of the float backend
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,

    /// Master seed of the Monte Carlo runs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Moments m_1..m_N of a measure
    Moments {
        #[arg(long)]
        spec: String,
    },
    /// Free cumulants k_1..k_N of a measure
    Cumulants {
        #[arg(long)]
        spec: String,
        #[arg(long, value_enum, default_value_t = CumulantMethod::Series)]
        method: CumulantMethod,
    },
    /// Coefficients of the R-, S- or rectangular C-transform; for `c` the input
    /// is the law of ν²
    Transform {
        #[arg(value_enum)]
        kind: TransformKind,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Moments of a convolution; for `rect` both inputs and the output are
    /// laws of squares
    Convolve {
        #[arg(value_enum)]
        kind: ConvolutionKind,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Check an identity; exit code 1 when it fails
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Lévy parameterisations of infinitely divisible laws
    #[command(subcommand)]
    Infdiv(InfdivCommand),
    /// Monte Carlo matrix experiments
    #[command(subcommand)]
    Simulate(SimulateCommand),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CumulantMethod {
    Series,
    Nc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransformKind {
    R,
    S,
    C,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConvolutionKind {
    Boxplus,
    Boxtimes,
    Rect,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// R_μ against C of √(μ ⊠ μ_λ)
    Rc {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        lambda: String,
    },
    /// √(μ ⊠ μ_λ) ⊞_λ √(μ' ⊠ μ_λ) against √((μ ⊞ μ') ⊠ μ_λ)
    Main {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        mu2: String,
        #[arg(long)]
        lambda: String,
    },
    /// Free cumulants of μ against rectangular cumulants of √(μ ⊠ μ_λ)
    Cumulant {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        lambda: String,
    },
    /// The λ = 1 case with ⊞ acting on the symmetric laws
    Corollary {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        mu2: String,
    },
    /// The moments with S-transform 1 + λz fail the Stieltjes positivity test
    Prop {
        #[arg(long)]
        lambda: String,
    },
}

#[derive(Subcommand)]
enum InfdivCommand {
    /// Rectangular Lévy measure G of a Lévy pair
    ToG {
        #[arg(long)]
        pair: String,
    },
    /// Lévy pair of a rectangular Lévy measure G
    ToPair {
        #[arg(long)]
        g: String,
    },
    /// Whether every member of the semigroup lives on [0, ∞)
    Check {
        #[arg(long)]
        pair: String,
    },
    /// Moments of the law with the given Lévy pair
    Moments {
        #[arg(long)]
        pair: String,
    },
    /// Moments of MP_c ⊠ MP_a by two routes
    MpProduct {
        #[arg(long)]
        c: String,
        #[arg(long)]
        a: String,
    },
}

#[derive(Args)]
struct SimOptions {
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 40)]
    bins: usize,
    /// Directory receiving the histogram CSVs and the report
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Exit with code 1 when a left/right moment relative error exceeds this
    #[arg(long)]
    max_rel_err: Option<f64>,
}

#[derive(Subcommand)]
enum SimulateCommand {
    /// Rank-one sum against the Wishart product
    Figure1 {
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 0.6)]
        lambda: f64,
        #[arg(long, default_value_t = 1.3)]
        c: f64,
        #[arg(long, default_value_t = 4)]
        moments: usize,
        #[command(flatten)]
        opts: SimOptions,
    },
    /// (X+Y)(X+Y)ᵀ against XXᵀ + YYᵀ
    Flat {
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        p: usize,
        #[arg(long, default_value_t = 3)]
        moments: usize,
        #[command(flatten)]
        opts: SimOptions,
    },
    /// (AM+BM')(AM+BM')* against AM(AM)* + BM'(BM')*
    Biinv {
        #[arg(long, default_value_t = 120)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        p: usize,
        /// `identity`, `zero` or `haar:s1,s2,...`
        #[arg(long, default_value = "haar:1")]
        a: String,
        #[arg(long, default_value = "haar:1")]
        b: String,
        #[arg(long, default_value_t = 3)]
        moments: usize,
        #[command(flatten)]
        opts: SimOptions,
    },
}

struct RunConfig {
    order: usize,
    tolerance: f64,
    seed: u64,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<freeconv_core::Error> for Failure {
    fn from(e: freeconv_core::Error) -> Self {
        match e {
            freeconv_core::Error::Parse(_) | freeconv_core::Error::RatioOutOfRange(_) => Self::Usage(e.to_string()),
            other => Self::Domain(other.to_string()),
        }
    }
}

impl From<freeconv_matrix_lab::LabError> for Failure {
    fn from(e: freeconv_matrix_lab::LabError) -> Self {
        match e {
            freeconv_matrix_lab::LabError::InvalidParameter(_) => Self::Usage(e.to_string()),
            other => Self::Domain(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Output plus whether the checked statement held.
struct Outcome {
    output: Output,
    passed: bool,
}

impl Outcome {
    fn ok(output: Output) -> Self {
        Self { output, passed: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let order = cli.order.unwrap_or(match cli.backend {
        Backend::Exact => DEFAULT_EXACT_ORDER,
        Backend::Float => DEFAULT_FLOAT_ORDER,
    });
    if order == 0 {
        eprintln!("error: order must be at least 1");
        return ExitCode::from(2);
    }
    if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
        eprintln!("error: tolerance must be positive");
        return ExitCode::from(2);
    }
    let cfg = RunConfig {
        order,
        tolerance: cli.tolerance,
        seed: cli.seed,
    };
    let result = match cli.backend {
        Backend::Exact => run::<Rational>(&cfg, cli.command),
        Backend::Float => run::<f64>(&cfg, cli.command),
    };
    match result {
        Ok(outcome) => {
            let text = match (cli.format, outcome.output.csv) {
                (Format::Csv, Some(csv)) => csv,
                (Format::Csv, None) => {
                    eprintln!("error: this command has no CSV form; use --format json");
                    return ExitCode::from(2);
                }
                (Format::Json, _) => format!("{}\n", outcome.output.json),
            };
            print!("{text}");
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) | Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run<S: JsonScalar>(cfg: &RunConfig, command: Command) -> CliResult<Outcome> {
    match command {
        Command::Moments { spec } => {
            let m: MomentSequence<S> = moments_of(&MeasureSpec::parse(&spec)?, cfg.order)?;
            Ok(Outcome::ok(sequence(m.as_slice(), "moment")))
        }
        Command::Cumulants { spec, method } => {
            let m: MomentSequence<S> = moments_of(&MeasureSpec::parse(&spec)?, cfg.order)?;
            let k = match method {
                CumulantMethod::Series => cumulant_series(&m)?.coeffs()[1..].to_vec(),
                CumulantMethod::Nc => cumulants_from_moments_nc(&m)?,
            };
            Ok(Outcome::ok(sequence(&k, "cumulant")))
        }
        Command::Transform { kind, spec, lambda } => {
            let m: MomentSequence<S> = moments_of(&MeasureSpec::parse(&spec)?, cfg.order)?;
            let series = match kind {
                TransformKind::R => r_transform(&m)?,
                TransformKind::S => s_transform(&m)?,
                TransformKind::C => rect_c_transform(&m, &require_lambda(lambda)?)?,
            };
            let json = json_list(series.coeffs());
            Ok(Outcome::ok(Output::indexed(
                json.clone(),
                "n",
                0,
                &[("coefficient", as_values(&json))],
            )))
        }
        Command::Convolve { kind, a, b, lambda } => {
            let a: MomentSequence<S> = moments_of(&MeasureSpec::parse(&a)?, cfg.order)?;
            let b: MomentSequence<S> = moments_of(&MeasureSpec::parse(&b)?, cfg.order)?;
            let m = match kind {
                ConvolutionKind::Boxplus => boxplus(&a, &b)?,
                ConvolutionKind::Boxtimes => boxtimes(&a, &b)?,
                ConvolutionKind::Rect => rect_boxplus(&a, &b, &require_lambda(lambda)?)?,
            };
            Ok(Outcome::ok(sequence(m.as_slice(), "moment")))
        }
        Command::Verify(v) => verify::<S>(cfg, v),
        Command::Infdiv(c) => infdiv::<S>(cfg, c),
        Command::Simulate(s) => simulate(cfg, s),
    }
}

fn require_lambda(lambda: Option<String>) -> CliResult<RatioParam> {
    let s = lambda.ok_or_else(|| Failure::Usage("--lambda is required".into()))?;
    Ok(RatioParam::parse(&s)?)
}

fn sequence<S: JsonScalar>(values: &[S], name: &str) -> Output {
    let json = json_list(values);
    Output::indexed(json.clone(), "n", 1, &[(name, as_values(&json))])
}

fn report_outcome<S: JsonScalar>(r: &ConvolutionReport<S>, tol: f64) -> Outcome {
    let passed = r.passes(tol);
    let mut json = json!({ "discrepancy": r.max_discrepancy.to_json(), "exact": r.exact });
    if !S::EXACT {
        json["relative_discrepancy"] = json!(r.max_relative_discrepancy);
    }
    let lhs = json_list(&r.lhs);
    let rhs = json_list(&r.rhs);
    Outcome {
        output: Output::indexed(json, "n", 1, &[("lhs", as_values(&lhs)), ("rhs", as_values(&rhs))]),
        passed,
    }
}

fn verify<S: JsonScalar>(cfg: &RunConfig, command: VerifyCommand) -> CliResult<Outcome> {
    let spec = |s: &str| MeasureSpec::parse(s);
    match command {
        VerifyCommand::Rc { mu, lambda } => {
            let r = verify_rc_identity::<S>(&spec(&mu)?, &RatioParam::parse(&lambda)?, cfg.order)?;
            Ok(report_outcome(&r, cfg.tolerance))
        }
        VerifyCommand::Main { mu, mu2, lambda } => {
            let r = verify_main_identity::<S>(&spec(&mu)?, &spec(&mu2)?, &RatioParam::parse(&lambda)?, cfg.order)?;
            Ok(report_outcome(&r, cfg.tolerance))
        }
        VerifyCommand::Corollary { mu, mu2 } => {
            let r = verify_square_corollary::<S>(&spec(&mu)?, &spec(&mu2)?, cfg.order)?;
            Ok(report_outcome(&r, cfg.tolerance))
        }
        VerifyCommand::Cumulant { mu, lambda } => {
            let r = verify_cumulant_identity::<S>(&spec(&mu)?, &RatioParam::parse(&lambda)?, cfg.order, cfg.tolerance)?;
            let chain = r.square_chain.map(|c| {
                json!({
                    "moments_equal_product_cumulants": c.moments_equal_product_cumulants,
                    "even_cumulants_match": c.even_cumulants_match,
                    "symmetric_law_cumulants_match": c.symmetric_law_cumulants_match,
                })
            });
            let free = json_list(&r.free_cumulants);
            let rect = json_list(&r.rectangular_cumulants);
            let json = json!({
                "holds": r.holds(),
                "free_cumulants": free,
                "rectangular_cumulants": rect,
                "series_route_matches": r.series_route_matches,
                "square_chain": chain,
            });
            Ok(Outcome {
                output: Output::indexed(
                    json.clone(),
                    "n",
                    1,
                    &[("free", as_values(&free)), ("rectangular", as_values(&rect))],
                ),
                passed: r.holds(),
            })
        }
        VerifyCommand::Prop { lambda } => {
            let lambda = RatioParam::parse(&lambda)?;
            let k = (cfg.order / 2).max(1);
            let m: MomentSequence<S> = moments_from_linear_s(&lambda.value::<S>(), 2 * k)?;
            let json = match stieltjes_positivity(&m, k, cfg.tolerance)? {
                Positivity::Valid => json!({ "valid": true, "moments": json_list(m.as_slice()) }),
                Positivity::Invalid { order, kind, determinant } => json!({
                    "valid": false,
                    "order": order,
                    "kind": match kind { HankelKind::Plain => "plain", HankelKind::Shifted => "shifted" },
                    "determinant": determinant.to_json(),
                    "moments": json_list(m.as_slice()),
                }),
            };
            let passed = json["valid"] == json!(false);
            Ok(Outcome { output: Output::json_only(json), passed })
        }
    }
}

fn to_backend<S: Scalar>(x: &Rational) -> S {
    S::from_rational(x)
}

fn infdiv<S: JsonScalar>(cfg: &RunConfig, command: InfdivCommand) -> CliResult<Outcome> {
    match command {
        InfdivCommand::ToG { pair } => {
            let p: LevyPair<S> = LevyPair::parse(&pair)?.map(to_backend);
            let g = levy_pair_to_g(&p)?;
            Ok(Outcome::ok(g_output(&g)))
        }
        InfdivCommand::ToPair { g } => {
            let g: RectLevyMeasure<S> = RectLevyMeasure::parse(&g)?.map(to_backend);
            let p = g_to_levy_pair(&g);
            let sigma = json_pairs(&p.sigma);
            let json = json!({ "gamma": p.gamma.to_json(), "sigma": sigma });
            let rows: Vec<Vec<Value>> = p.sigma.iter().map(|(t, w)| vec![t.to_json(), w.to_json()]).collect();
            let mut out = Output::table(json, &["atom", "weight"], &rows);
            out.csv = out.csv.map(|c| format!("# gamma={}\n{c}", p.gamma));
            Ok(Outcome::ok(out))
        }
        InfdivCommand::Check { pair } => {
            let p: LevyPair<S> = LevyPair::parse(&pair)?.map(to_backend);
            Ok(Outcome::ok(Output::json_only(json!({ "nonneg_support": check_nonneg_support(&p) }))))
        }
        InfdivCommand::Moments { pair } => {
            let p: LevyPair<S> = LevyPair::parse(&pair)?.map(to_backend);
            let m = levy_law_moments(&p, cfg.order)?;
            Ok(Outcome::ok(sequence(m.as_slice(), "moment")))
        }
        InfdivCommand::MpProduct { c, a } => {
            let c: S = to_backend(&parse_rational(&c)?);
            let a: S = to_backend(&parse_rational(&a)?);
            let (direct, via_g) = mp_product_routes(&c, &a, cfg.order)?;
            let report = ConvolutionReport::new(direct.into_vec(), via_g.into_vec())?;
            let passed = report.passes(cfg.tolerance);
            let lhs = json_list(&report.lhs);
            let rhs = json_list(&report.rhs);
            let json = json!({
                "moments": lhs,
                "route_levy": rhs,
                "discrepancy": report.max_discrepancy.to_json(),
                "routes_agree": passed,
            });
            Ok(Outcome {
                output: Output::indexed(json, "n", 1, &[("direct", as_values(&lhs)), ("levy", as_values(&rhs))]),
                passed,
            })
        }
    }
}

fn g_output<S: JsonScalar>(g: &RectLevyMeasure<S>) -> Output {
    let symmetric = g.symmetric_atoms().ok();
    let json = json!({
        "g": symmetric.as_ref().map(|s| json_pairs(s)),
        "g_squared": json_pairs(g.squared()),
    });
    let rows: Vec<Vec<Value>> = g.squared().iter().map(|(x, w)| vec![x.to_json(), w.to_json()]).collect();
    Output::table(json, &["squared_atom", "mass"], &rows)
}

fn simulate(cfg: &RunConfig, command: SimulateCommand) -> CliResult<Outcome> {
    let (report, opts) = match command {
        SimulateCommand::Figure1 { n, lambda, c, moments, opts } => {
            let mut params = Figure1Params::new(n, lambda, c, opts.trials, opts.bins, cfg.seed);
            params.order = moments;
            (run_figure1(&params)?, opts)
        }
        SimulateCommand::Flat { n, p, moments, opts } => {
            let report = run_additivity_sim(&additivity(MatrixModel::FlatSum { n, p }, &opts, moments, cfg.seed))?;
            (report, opts)
        }
        SimulateCommand::Biinv { n, p, a, b, moments, opts } => {
            let model = MatrixModel::BiInvariantSum {
                n,
                p,
                a: Factor::parse(&a)?,
                b: Factor::parse(&b)?,
            };
            (run_additivity_sim(&additivity(model, &opts, moments, cfg.seed))?, opts)
        }
    };
    write_artifacts(&report, &opts.out)?;
    let passed = opts
        .max_rel_err
        .is_none_or(|limit| report.rel_err.lhs_rhs.iter().all(|e| *e <= limit));
    let json = serde_json::to_value(&report).map_err(|e| Failure::Domain(e.to_string()))?;
    let cols = |v: &[f64]| v.iter().map(|x| json!(x)).collect::<Vec<Value>>();
    let (l, r, t, tr) = (
        cols(&report.moments_lhs),
        cols(&report.moments_rhs),
        cols(&report.moments_theory),
        cols(&report.moments_theory_rhs),
    );
    Ok(Outcome {
        output: Output::indexed(
            json,
            "k",
            1,
            &[("lhs", &l), ("rhs", &r), ("theory", &t), ("theory_rhs", &tr)],
        ),
        passed,
    })
}

fn additivity(model: MatrixModel, opts: &SimOptions, moments: usize, seed: u64) -> AdditivityParams {
    let mut p = AdditivityParams::new(model, opts.trials, seed);
    p.bins = opts.bins;
    p.order = moments;
    p
}

fn histogram_csv(bins: &[HistogramBin]) -> String {
    let mut s = String::from("bin_left,bin_right,count,density\n");
    for b in bins {
        s.push_str(&format!("{},{},{},{}\n", b.bin_left, b.bin_right, b.count, b.density));
    }
    s
}

fn write_artifacts(report: &ComparisonReport, dir: &PathBuf) -> CliResult<()> {
    let io = |e: std::io::Error| Failure::Domain(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let stem = &report.model;
    fs::write(dir.join(format!("{stem}-lhs-histogram.csv")), histogram_csv(&report.histogram_lhs)).map_err(io)?;
    fs::write(dir.join(format!("{stem}-rhs-histogram.csv")), histogram_csv(&report.histogram_rhs)).map_err(io)?;
    let json = serde_json::to_string_pretty(report).map_err(|e| Failure::Domain(e.to_string()))?;
    fs::write(dir.join(format!("{stem}-report.json")), json + "\n").map_err(io)?;
    Ok(())
}
