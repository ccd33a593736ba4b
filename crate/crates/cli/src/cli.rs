use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracsis::{
    cf_equilibria, existence_horizon, invariance_box, invert_alpha, invert_alpha_with_scaling,
    BoxRegime, CaputoOrdersF64, CfOrderF64, EpidemicParamsF64,
};

use crate::error::CliError;
use crate::output::{emit_csv, format_sig};
use crate::plot::emit_plot_script;
use crate::run::{run_scenario, RunOutput};
use crate::scenario::{CaputoOrdersDoc, CfOrderDoc, GridDoc, ModelKind, ParamsDoc, Scenario};
use crate::validate::{validate_with, ValidateOptions};

#[derive(Debug, Parser)]
#[command(
    name = "fracsis",
    version,
    about = "Fractional-order SIS epidemic simulations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario file, or a one-off run described by flags.
    ///
    /// Flags override the scenario's top-level fields; sweep members keep
    /// their own overrides.
    Simulate(SimulateArgs),
    /// Caputo and Caputo–Fabrizio runs on the same grid (α1 = α, α2 = 1 by default).
    Compare(SimulateArgs),
    /// Existence horizon and invariance box of the Caputo system.
    Horizon(HorizonArgs),
    /// Long-time limits and the monotonicity class of N for the CF model.
    Equilibria(EquilibriaArgs),
    /// Order α that produces a given limiting population.
    InvertAlpha(InvertArgs),
    /// Run the built-in check suite; exits 1 on any failure.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    #[value(name = "csv+plot")]
    CsvPlot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Caputo,
    CaputoFabrizio,
    Compare,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Caputo => ModelKind::Caputo,
            ModelArg::CaputoFabrizio => ModelKind::CaputoFabrizio,
            ModelArg::Compare => ModelKind::Compare,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ParamFlags {
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub s0: Option<f64>,
    #[arg(long)]
    pub i0: Option<f64>,
}

impl ParamFlags {
    fn require(&self) -> Result<EpidemicParamsF64, CliError> {
        let get = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| CliError::Input(format!("--{name} is required")))
        };
        EpidemicParamsF64::new(
            get(self.beta, "beta")?,
            get(self.gamma, "gamma")?,
            get(self.s0, "s0")?,
            get(self.i0, "i0")?,
        )
        .map_err(|e| CliError::Input(e.to_string()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Scenario JSON file.
    pub scenario: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    #[arg(long)]
    pub label: Option<String>,
    #[command(flatten)]
    pub params: ParamFlags,
    /// Final time [default: 20 without a scenario file].
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Number of grid steps [default: 2000 without a scenario file].
    #[arg(long)]
    pub n_steps: Option<usize>,
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub alpha2: Option<f64>,
    /// Caputo–Fabrizio order.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Constant normalisation M(α).
    #[arg(long)]
    pub m_alpha: Option<f64>,
    /// Directory for output files; CSV goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct HorizonArgs {
    #[command(flatten)]
    pub params: ParamFlags,
    #[arg(long)]
    pub alpha1: f64,
    #[arg(long)]
    pub alpha2: f64,
    /// Box size when γ ≥ β (ignored otherwise).
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
}

#[derive(Debug, Clone, Args)]
pub struct EquilibriaArgs {
    #[command(flatten)]
    pub params: ParamFlags,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub m_alpha: f64,
}

#[derive(Debug, Clone, Args)]
pub struct InvertArgs {
    #[command(flatten)]
    pub params: ParamFlags,
    #[arg(long)]
    pub n_infinity: f64,
    /// Constant normalisation M(α); solved by bisection when not 1.
    #[arg(long, default_value_t = 1.0)]
    pub m_alpha: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Perturb the L1 coefficient table; the suite must then fail.
    #[arg(long)]
    pub corrupt_weights: bool,
    /// Override the population-conservation tolerance.
    #[arg(long)]
    pub conservation_tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random parameter draws per invariance-box regime.
    #[arg(long)]
    pub box_draws: Option<usize>,
}

pub fn execute<W: Write>(cli: Cli, out: &mut W) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => simulate(args, None, out),
        Command::Compare(args) => simulate(args, Some(ModelKind::Compare), out),
        Command::Horizon(args) => horizon(args, out),
        Command::Equilibria(args) => equilibria(args, out),
        Command::InvertAlpha(args) => invert(args, out),
        Command::Validate(args) => validate(args, out),
    }
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::io("writing to stdout", e)
}

/// Scenario from the file (if any) with flag overrides applied.
pub fn build_scenario(
    args: &SimulateArgs,
    forced: Option<ModelKind>,
) -> Result<Scenario, CliError> {
    let mut sc = match &args.scenario {
        Some(path) => Scenario::load(path)?,
        None => {
            let p = args.params.require()?;
            let model = forced.or(args.model.map(Into::into)).ok_or_else(|| {
                CliError::Input("--model is required without a scenario file".into())
            })?;
            Scenario {
                label: "run".into(),
                model,
                params: ParamsDoc {
                    beta: p.beta,
                    gamma: p.gamma,
                    s0: p.s0,
                    i0: p.i0,
                },
                grid: GridDoc {
                    t_end: 20.0,
                    n_steps: 2000,
                },
                caputo_orders: None,
                cf_order: None,
                sweep: Vec::new(),
            }
        }
    };
    if let Some(m) = forced.or(args.model.map(Into::into)) {
        sc.model = m;
    }
    if let Some(l) = &args.label {
        sc.label = l.clone();
    }
    let p = &args.params;
    sc.params.beta = p.beta.unwrap_or(sc.params.beta);
    sc.params.gamma = p.gamma.unwrap_or(sc.params.gamma);
    sc.params.s0 = p.s0.unwrap_or(sc.params.s0);
    sc.params.i0 = p.i0.unwrap_or(sc.params.i0);
    sc.grid.t_end = args.t_end.unwrap_or(sc.grid.t_end);
    sc.grid.n_steps = args.n_steps.unwrap_or(sc.grid.n_steps);
    if args.alpha1.is_some() || args.alpha2.is_some() {
        let co = sc.caputo_orders.get_or_insert(CaputoOrdersDoc::default());
        co.alpha1 = args.alpha1.or(co.alpha1);
        co.alpha2 = args.alpha2.or(co.alpha2);
    }
    if args.alpha.is_some() || args.m_alpha.is_some() {
        let cf = sc.cf_order.get_or_insert(CfOrderDoc::default());
        cf.alpha = args.alpha.or(cf.alpha);
        cf.m_alpha = args.m_alpha.or(cf.m_alpha);
    }
    Ok(sc)
}

fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "-_.".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn simulate<W: Write>(
    args: SimulateArgs,
    forced: Option<ModelKind>,
    out: &mut W,
) -> Result<(), CliError> {
    let sc = build_scenario(&args, forced)?;
    if args.format == Format::CsvPlot && args.out.is_none() {
        return Err(CliError::Input("--format csv+plot needs --out".into()));
    }
    let runs = run_scenario(&sc)?;
    match &args.out {
        None => {
            for run in &runs {
                if runs.len() > 1 {
                    writeln!(out, "# {}", run.member.label).map_err(stdout_err)?;
                }
                emit_csv(&mut *out, run)?;
            }
            Ok(())
        }
        Some(dir) => write_outputs(&sc, &runs, dir, args.format, out),
    }
}

fn write_outputs<W: Write>(
    sc: &Scenario,
    runs: &[RunOutput],
    dir: &Path,
    format: Format,
    out: &mut W,
) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    let stem = file_stem(&sc.label);
    let mut names = Vec::with_capacity(runs.len());
    for run in runs {
        let name = if runs.len() == 1 && run.member.label == sc.label {
            format!("{stem}.csv")
        } else {
            format!("{stem}__{}.csv", file_stem(&run.member.label))
        };
        let path = dir.join(&name);
        let file = fs::File::create(&path)
            .map_err(|e| CliError::io(format!("creating {}", path.display()), e))?;
        emit_csv(std::io::BufWriter::new(file), run)?;
        writeln!(out, "{}", path.display()).map_err(stdout_err)?;
        names.push(name);
    }
    if format == Format::CsvPlot {
        let path = dir.join(format!("{stem}.py"));
        let file = fs::File::create(&path)
            .map_err(|e| CliError::io(format!("creating {}", path.display()), e))?;
        emit_plot_script(
            std::io::BufWriter::new(file),
            &sc.label,
            runs,
            &names,
            &format!("{stem}.png"),
        )?;
        writeln!(out, "{}", path.display()).map_err(stdout_err)?;
    }
    Ok(())
}

fn horizon<W: Write>(args: HorizonArgs, out: &mut W) -> Result<(), CliError> {
    let p = args.params.require()?;
    let input = |e: fracsis::Error| CliError::Input(e.to_string());
    let o = CaputoOrdersF64::new(args.alpha1, args.alpha2).map_err(input)?;
    let t = existence_horizon(&p, &o).map_err(input)?;
    let b = invariance_box(&p, &o, args.epsilon).map_err(input)?;
    let regime = match b.regime {
        BoxRegime::RecoveryDominated => "recovery_dominated",
        BoxRegime::InfectionDominated => "infection_dominated",
    };
    writeln!(
        out,
        "existence_horizon = {}\nbox_regime = {regime}\nbox_epsilon = {}\nbox_horizon = {}\nbox_s = [{}, {}]\nbox_i = [{}, {}]",
        format_sig(t),
        format_sig(b.epsilon),
        format_sig(b.horizon),
        format_sig(b.x_lo),
        format_sig(b.x_hi),
        format_sig(b.y_lo),
        format_sig(b.y_hi),
    )
    .map_err(stdout_err)
}

fn equilibria<W: Write>(args: EquilibriaArgs, out: &mut W) -> Result<(), CliError> {
    let p = args.params.require()?;
    let input = |e: fracsis::Error| CliError::Input(e.to_string());
    let order = CfOrderF64::new(args.alpha, args.m_alpha).map_err(input)?;
    let r = cf_equilibria(&p, &order).map_err(input)?;
    writeln!(
        out,
        "reproduction_number = {}\ni_star = {}\ns_star = {}\nn_star = {}\nn_monotonicity = {}",
        format_sig(r.reproduction_number),
        format_sig(r.i_star),
        format_sig(r.s_star),
        format_sig(r.n_star),
        r.n_monotonicity,
    )
    .map_err(stdout_err)
}

fn invert<W: Write>(args: InvertArgs, out: &mut W) -> Result<(), CliError> {
    let p = args.params.require()?;
    let m = args.m_alpha;
    let alpha = if m == 1.0 {
        invert_alpha(&p, args.n_infinity)
    } else {
        invert_alpha_with_scaling(&p, args.n_infinity, |_| m)
    }
    .map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(out, "alpha = {}", format_sig(alpha)).map_err(stdout_err)
}

fn validate<W: Write>(args: ValidateArgs, out: &mut W) -> Result<(), CliError> {
    let defaults = ValidateOptions::default();
    let opts = ValidateOptions {
        corrupt_weights: args.corrupt_weights,
        conservation_tol: args.conservation_tol.unwrap_or(defaults.conservation_tol),
        seed: args.seed.unwrap_or(defaults.seed),
        box_draws: args.box_draws.unwrap_or(defaults.box_draws),
        ..defaults
    };
    let report = validate_with(&opts);
    write!(out, "{report}").map_err(stdout_err)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Validation)
    }
}
