//! opq: channel specs in, tables and CSV out.

use clap::{Args, Parser, Subcommand, ValueEnum};
use opq_cli::manifest::{digest_str, RunManifest};
use opq_cli::spec;
use opq_core::channels::classify_unitary;
use opq_core::entropy::{discord_min_with_config, ExtendedNonNegative};
use opq_core::protocols::{dense_coding_sweep, operational_capacity};
use opq_core::quantumness::{decomposition_terms, integrand, quantumness};
use opq_core::states::BipartiteDims;
use opq_core::{Channel64, Config64, Einselection64, Pure64, Tolerances, UnitaryClass};
use serde_json::json;
use spec::{
    apply_rotations, chain_has_placeholder, chain_to_spec, parse_chain, parse_state, ChannelSpec,
    RotationEntry,
};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "opq",
    version,
    about = "Nonclassicality of quantum operations: measure, decomposition, discord and dense-coding data"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the integrand and its two contributions at one input state
    Eval(EvalArgs),
    /// Maximize the measure and both powers over pure input states
    Quantumness(QuantumnessArgs),
    /// Sweep a channel parameter and write per-value maxima as CSV
    Sweep(SweepArgs),
    /// Dense-coding capacities through the depolarizing family as CSV
    DenseCoding(DenseCodingArgs),
    /// Zurek discord and its minimum over measurement bases
    Discord(DiscordArgs),
    /// Classify a unitary as classical or nonclassical
    Classify(ClassifyArgs),
    /// Export a channel as an explicit-Kraus JSON document
    Export(ExportArgs),
}

#[derive(Args, Clone)]
struct ChannelArgs {
    /// Named channel (discord_map, depolarizing, amplitude_damping, hadamard, ...)
    #[arg(long)]
    named: Option<String>,
    /// JSON channel document (explicit Kraus, named, chain or tensor)
    #[arg(long, conflicts_with = "named")]
    kraus_file: Option<PathBuf>,
    /// Composition chain, leftmost applied last, e.g. "H,amplitude_damping(0.75),H"
    #[arg(long, conflicts_with_all = ["named", "kraus_file"])]
    chain: Option<String>,
    /// Depolarizing-style parameter in [0, 1]
    #[arg(long)]
    mu: Option<f64>,
    /// Damping-style parameter in [0, 1]
    #[arg(long)]
    gamma: Option<f64>,
    /// Flip probability in [0, 1]
    #[arg(long)]
    p: Option<f64>,
    /// Pauli probabilities p0,p1,p2,p3
    #[arg(long, value_delimiter = ',')]
    probs: Option<Vec<f64>>,
    /// Tensor factor dimensions, e.g. 2,2 (inferred when omitted)
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
}

type CliError = Box<dyn std::error::Error>;

impl ChannelArgs {
    /// Build the spec document, substituting a sweep value for the
    /// placeholder when given.
    fn to_spec(&self, placeholder: Option<f64>) -> Result<ChannelSpec, CliError> {
        if let Some(name) = &self.named {
            let scalar = placeholder.or(self.mu).or(self.gamma).or(self.p);
            Ok(ChannelSpec::Named {
                name: name.clone(),
                dims: self.dims.clone(),
                mu: scalar,
                gamma: None,
                p: None,
                probs: self.probs.clone(),
                matrix: None,
            })
        } else if let Some(chain) = &self.chain {
            let items = parse_chain(chain)?;
            Ok(chain_to_spec(&items, placeholder)?)
        } else if let Some(path) = &self.kraus_file {
            let text = std::fs::read_to_string(path)?;
            Ok(serde_json::from_str(&text)?)
        } else {
            Err("one of --named, --chain or --kraus-file is required".into())
        }
    }

    fn resolve(&self, placeholder: Option<f64>) -> Result<(Channel64, ChannelSpec), CliError> {
        let spec = self.to_spec(placeholder)?;
        let ch = spec.resolve(self.dims.as_deref())?;
        Ok((ch, spec))
    }

    fn is_parametric_sweep(&self) -> Result<bool, CliError> {
        if self.named.is_some() {
            return Ok(true);
        }
        if let Some(chain) = &self.chain {
            return Ok(chain_has_placeholder(&parse_chain(chain)?));
        }
        Ok(false)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EinselMode {
    /// Dephase every factor
    Full,
    /// Dephase factor 1 only (the receiver side)
    BSide,
    /// Dephase factor 0 only
    ASide,
}

#[derive(Args, Clone)]
struct EinselArgs {
    /// Which factors the einselection dephases
    #[arg(long, value_enum, default_value_t = EinselMode::Full)]
    einselection: EinselMode,
    /// JSON file of per-factor basis rotations: [{"factor": 1, "matrix": [[[re,im],...],...]}]
    #[arg(long)]
    basis_rotation: Option<PathBuf>,
}

impl EinselArgs {
    fn build(&self, dims: &[usize]) -> Result<Einselection64, CliError> {
        let base = match self.einselection {
            EinselMode::Full => Einselection64::full(dims),
            EinselMode::BSide => {
                if dims.len() < 2 {
                    return Err("b-side einselection needs at least two factors".into());
                }
                Einselection64::one_sided(dims, 1)?
            }
            EinselMode::ASide => {
                if dims.len() < 2 {
                    return Err("a-side einselection needs at least two factors".into());
                }
                Einselection64::one_sided(dims, 0)?
            }
        };
        match &self.basis_rotation {
            None => Ok(base),
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let entries: Vec<RotationEntry> = serde_json::from_str(&text)?;
                Ok(apply_rotations(base, &entries)?)
            }
        }
    }

    fn tag(&self) -> &'static str {
        match self.einselection {
            EinselMode::Full => "full",
            EinselMode::BSide => "b-side",
            EinselMode::ASide => "a-side",
        }
    }
}

#[derive(Args, Clone)]
struct OptArgs {
    /// Random multistart count
    #[arg(long, default_value_t = 64)]
    starts: usize,
    /// RNG seed for the optimizer starts
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Nelder-Mead iteration cap per start
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
}

impl OptArgs {
    fn config(&self) -> Config64 {
        Config64 {
            starts: self.starts,
            max_iterations: self.max_iters,
            ..Config64::with_seed(self.seed)
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Input state: one character per factor (digits, + or -), or @file.json
    #[arg(long)]
    state: String,
    #[command(flatten)]
    einselection: EinselArgs,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QuantumnessArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    einselection: EinselArgs,
    #[command(flatten)]
    optimizer: OptArgs,
    /// CSV of per-start diagnostics (text report goes to stdout regardless)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    einselection: EinselArgs,
    #[command(flatten)]
    optimizer: OptArgs,
    /// Parameter grid a:b:step
    #[arg(long)]
    grid: String,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DenseCodingArgs {
    /// Parameter grid a:b:step over the depolarizing strength
    #[arg(long, default_value = "0:1:0.05")]
    grid: String,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiscordArgs {
    /// Bipartite state: label characters or @file.json
    #[arg(long)]
    state: String,
    /// Factor dimensions (d_B must be 2)
    #[arg(long, value_delimiter = ',', default_value = "2,2")]
    dims: Vec<usize>,
    #[command(flatten)]
    optimizer: OptArgs,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    einselection: EinselArgs,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let tolerance_tag = match init_tolerances() {
        Ok(tag) => tag,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };
    match dispatch(cli, &tolerance_tag) {
        Ok(false) => {}
        Ok(true) => {
            eprintln!("warning: optimization did not converge within its iteration budget");
            std::process::exit(3);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

/// Install the tolerance record from OPQ_TOLERANCE_FILE, if set; returns the
/// manifest tag.
fn init_tolerances() -> Result<String, CliError> {
    match std::env::var_os("OPQ_TOLERANCE_FILE") {
        None => Ok("default".to_string()),
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                format!("cannot read OPQ_TOLERANCE_FILE {:?}: {e}", path)
            })?;
            let tol: Tolerances = serde_json::from_str(&text)
                .map_err(|e| format!("bad tolerance file {:?}: {e}", path))?;
            Tolerances::install(tol).map_err(|_| "tolerances already installed")?;
            Ok(digest_str(&text))
        }
    }
}

fn dispatch(cli: Cli, tolerance_tag: &str) -> Result<bool, CliError> {
    match cli.command {
        Cmd::Eval(args) => cmd_eval(args, tolerance_tag),
        Cmd::Quantumness(args) => cmd_quantumness(args, tolerance_tag),
        Cmd::Sweep(args) => cmd_sweep(args, tolerance_tag),
        Cmd::DenseCoding(args) => cmd_dense_coding(args, tolerance_tag),
        Cmd::Discord(args) => cmd_discord(args, tolerance_tag),
        Cmd::Classify(args) => cmd_classify(args, tolerance_tag),
        Cmd::Export(args) => cmd_export(args),
    }
}

/// 17 significant digits, '.' decimal: diff-able and figure-ready.
fn fmt(v: f64) -> String {
    format!("{:.16e}", v)
}

fn fmt_ext(v: &ExtendedNonNegative<f64>) -> String {
    match v {
        ExtendedNonNegative::Finite(x) => fmt(*x),
        ExtendedNonNegative::Infinite(_) => "inf".to_string(),
    }
}

fn describe_ext(v: &ExtendedNonNegative<f64>) -> String {
    match v {
        ExtendedNonNegative::Finite(x) => fmt(*x),
        ExtendedNonNegative::Infinite(w) => format!(
            "infinite (sigma eigenvalue {:.3e} at index {} carries rho-weight {:.3e})",
            w.sigma_eigenvalue, w.eigenvector_index, w.rho_weight
        ),
    }
}

fn encode_state(psi: &Pure64) -> String {
    psi.amplitudes()
        .iter()
        .map(|c| format!("{}:{}", fmt(c.re), fmt(c.im)))
        .collect::<Vec<_>>()
        .join(";")
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid '{text}' is not of the form a:b:step").into());
    }
    let a: f64 = parts[0].parse()?;
    let b: f64 = parts[1].parse()?;
    let step: f64 = parts[2].parse()?;
    if step <= 0.0 || b < a {
        return Err(format!("grid '{text}' must have a <= b and step > 0").into());
    }
    let count = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| a + i as f64 * step).collect())
}

fn cmd_eval(args: EvalArgs, tolerance_tag: &str) -> Result<bool, CliError> {
    let (ch, spec) = args.channel.resolve(None)?;
    let gamma = args.einselection.build(ch.dims())?;
    let rho = parse_state(&args.state, ch.dims())?;

    let request = json!({
        "cmd": "eval",
        "channel": serde_json::to_value(&spec)?,
        "state": args.state,
        "einselection": args.einselection.tag(),
    });
    let manifest = RunManifest::new(&request, 0, tolerance_tag);

    let whole = integrand(&ch, &gamma, &rho)?;
    let (dist, gen) = decomposition_terms(&ch, &gamma, &rho)?;

    let mut text = manifest.header();
    text.push_str(&format!("integrand:      {}\n", describe_ext(&whole)));
    text.push_str(&format!("distinguishing: {}\n", describe_ext(&dist)));
    text.push_str(&format!("generating:     {}\n", describe_ext(&gen)));
    write_output(&args.out, &text)?;
    Ok(false)
}

fn cmd_quantumness(args: QuantumnessArgs, tolerance_tag: &str) -> Result<bool, CliError> {
    let (ch, spec) = args.channel.resolve(None)?;
    let gamma = args.einselection.build(ch.dims())?;
    let config = args.optimizer.config();

    let request = json!({
        "cmd": "quantumness",
        "channel": serde_json::to_value(&spec)?,
        "einselection": args.einselection.tag(),
        "starts": config.starts,
        "seed": config.seed,
        "max_iterations": config.max_iterations,
    });
    let manifest = RunManifest::new(&request, config.seed, tolerance_tag);

    let report = quantumness(&ch, &gamma, &config)?;

    let mut text = manifest.header();
    text.push_str(&format!("W:                  {}\n", describe_ext(&report.w.value)));
    text.push_str(&format!("W witness:          {}\n", encode_state(&report.w.witness)));
    text.push_str(&format!(
        "distinguishing max: {}\n",
        describe_ext(&report.distinguishing.value)
    ));
    text.push_str(&format!(
        "generating max:     {}\n",
        describe_ext(&report.generating.value)
    ));
    text.push_str(&format!(
        "generating witness: {}\n",
        encode_state(&report.generating.witness)
    ));
    if report.unitary_shortcut {
        text.push_str("method:             unitary dichotomy shortcut\n");
    } else {
        let evaluations =
            report.w.evaluations + report.distinguishing.evaluations + report.generating.evaluations;
        text.push_str(&format!(
            "starts:             {} per objective\n",
            report.w.per_start.len()
        ));
        text.push_str(&format!("evaluations:        {evaluations}\n"));
        text.push_str(&format!(
            "converged:          {}\n",
            report.w.converged && report.distinguishing.converged && report.generating.converged
        ));
    }
    print!("{text}");

    if let Some(path) = &args.out {
        let mut csv = manifest.header();
        csv.push_str("objective,start,value\n");
        for (label, est) in [
            ("w", &report.w),
            ("distinguishing", &report.distinguishing),
            ("generating", &report.generating),
        ] {
            for (i, v) in est.per_start.iter().enumerate() {
                csv.push_str(&format!("{label},{i},{}\n", fmt(*v)));
            }
        }
        std::fs::write(path, csv)?;
    }

    let warn = !report.unitary_shortcut
        && !(report.w.converged && report.distinguishing.converged && report.generating.converged);
    Ok(warn)
}

fn cmd_sweep(args: SweepArgs, tolerance_tag: &str) -> Result<bool, CliError> {
    if !args.channel.is_parametric_sweep()? {
        return Err(
            "sweep needs --named <parametric channel> or --chain with the 'mu' placeholder".into(),
        );
    }
    let grid = parse_grid(&args.grid)?;
    let config = args.optimizer.config();

    let request = json!({
        "cmd": "sweep",
        "channel": serde_json::to_value(&args.channel.to_spec(None).or_else(|_| args.channel.to_spec(Some(f64::NAN)))?)?,
        "einselection": args.einselection.tag(),
        "grid": args.grid,
        "starts": config.starts,
        "seed": config.seed,
        "max_iterations": config.max_iterations,
    });
    let manifest = RunManifest::new(&request, config.seed, tolerance_tag);

    let mut csv = manifest.header();
    csv.push_str("parameter,w,generating_max,distinguishing_max,dominant,witness\n");
    let mut warn = false;
    for &value in &grid {
        let (ch, _) = args.channel.resolve(Some(value))?;
        let gamma = args.einselection.build(ch.dims())?;
        let report = quantumness(&ch, &gamma, &config)?;
        let gen = report.generating.value.to_float();
        let dist = report.distinguishing.value.to_float();
        let dominant = if gen >= dist { "generating" } else { "distinguishing" };
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt(value),
            fmt_ext(&report.w.value),
            fmt_ext(&report.generating.value),
            fmt_ext(&report.distinguishing.value),
            dominant,
            encode_state(&report.w.witness)
        ));
        if !report.unitary_shortcut
            && !(report.w.converged
                && report.distinguishing.converged
                && report.generating.converged)
        {
            warn = true;
        }
    }
    write_output(&args.out, &csv)?;
    Ok(warn)
}

fn cmd_dense_coding(args: DenseCodingArgs, tolerance_tag: &str) -> Result<bool, CliError> {
    let grid = parse_grid(&args.grid)?;
    let request = json!({ "cmd": "dense-coding", "grid": args.grid });
    let manifest = RunManifest::new(&request, 0, tolerance_tag);

    let rows = dense_coding_sweep(&grid)?;
    let mut csv = manifest.header();
    csv.push_str(
        "mu,f_q,f_c,discord_gap,q_z,ppt_min_eigenvalue,f_q_operational,f_c_operational\n",
    );
    for row in rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt(row.mu),
            fmt(row.f_q),
            fmt(row.f_c),
            fmt(row.discord_gap),
            fmt(row.q_z),
            fmt(row.ppt_min_eigenvalue),
            fmt(operational_capacity(row.f_q, 2)),
            fmt(operational_capacity(row.f_c, 2)),
        ));
    }
    write_output(&args.out, &csv)?;
    Ok(false)
}

fn cmd_discord(args: DiscordArgs, tolerance_tag: &str) -> Result<bool, CliError> {
    if args.dims.len() != 2 {
        return Err("discord needs exactly two factors (--dims d_A,d_B)".into());
    }
    let dims = BipartiteDims::new(args.dims[0], args.dims[1])?;
    let rho = parse_state(&args.state, &args.dims)?;
    let config = args.optimizer.config();

    let request = json!({
        "cmd": "discord",
        "state": args.state,
        "dims": args.dims,
        "starts": config.starts,
        "seed": config.seed,
    });
    let manifest = RunManifest::new(&request, config.seed, tolerance_tag);

    let report = discord_min_with_config(&rho, dims, &config)?;
    let basis = &report.optimal_measurement_basis;

    let mut text = manifest.header();
    text.push_str(&format!("zurek discord:        {}\n", fmt(report.zurek_value)));
    text.push_str(&format!("minimized discord:    {}\n", fmt(report.minimized_value)));
    text.push_str(&format!(
        "optimal basis:        [{}:{}; {}:{}] / [{}:{}; {}:{}]\n",
        fmt(basis.get(0, 0).re),
        fmt(basis.get(0, 0).im),
        fmt(basis.get(1, 0).re),
        fmt(basis.get(1, 0).im),
        fmt(basis.get(0, 1).re),
        fmt(basis.get(0, 1).im),
        fmt(basis.get(1, 1).re),
        fmt(basis.get(1, 1).im),
    ));
    text.push_str(&format!(
        "conditional entropy:  {} before, {} after dephasing\n",
        fmt(report.conditional_before),
        fmt(report.conditional_after)
    ));
    write_output(&args.out, &text)?;
    Ok(false)
}

fn cmd_classify(args: ClassifyArgs, tolerance_tag: &str) -> Result<bool, CliError> {
    let (ch, spec) = args.channel.resolve(None)?;
    let gamma = args.einselection.build(ch.dims())?;
    let u = ch
        .as_unitary()
        .ok_or("classify needs a unitary channel (a single unitary Kraus operator)")?;

    let request = json!({
        "cmd": "classify",
        "channel": serde_json::to_value(&spec)?,
        "einselection": args.einselection.tag(),
    });
    let manifest = RunManifest::new(&request, 0, tolerance_tag);

    let mut text = manifest.header();
    match classify_unitary(u, &gamma)? {
        UnitaryClass::Classical => {
            text.push_str("classification: classical (W = 0)\n");
        }
        UnitaryClass::Nonclassical => {
            text.push_str("classification: nonclassical (W = infinite)\n");
            if let opq_core::UnitaryQuantumness::Nonclassical { witness } =
                opq_core::quantumness::unitary_quantumness(u, &gamma)?
            {
                text.push_str(&format!("witness:        {}\n", encode_state(&witness)));
            }
        }
    }
    write_output(&args.out, &text)?;
    Ok(false)
}

fn cmd_export(args: ExportArgs) -> Result<bool, CliError> {
    let (ch, _) = args.channel.resolve(None)?;
    let exported = ChannelSpec::explicit_from(&ch);
    let mut text = serde_json::to_string_pretty(&exported)?;
    text.push('\n');
    write_output(&args.out, &text)?;
    Ok(false)
}
