//! Command-line front end: file I/O, random-instance sweeps, and report
//! emission for generator validation, evolution diagnostics, transport
//! distances, the inequality chain, concentration bounds, and estimation.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 when a checked inequality
//! is violated beyond slack. Reports are deterministic for a fixed seed
//! regardless of the worker count.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qtc_core::estimation::{estimation_report, ParametricFamily};
use qtc_core::generator::DBGenerator;
use qtc_core::inequalities as ineq;
use qtc_core::io::{read_density, read_generator, read_hermitian, write_json, MatrixJson};
use qtc_core::linalg::{trace_re, CMat, DensityMatrix, HermitianOperator};
use qtc_core::rng::rng_for_item;
use qtc_core::wasserstein::{self, Certificate, LipschitzVariant, W1Options, W2Options};

const MARGIN_SLACK: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "qtc", version, about = "Quantum semigroup transport toolkit")]
struct Cli {
    /// Worker threads (0 = auto); the QTC_THREADS environment variable is
    /// used when the flag is absent.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the detailed-balance normal form of a generator file.
    Validate(ValidateArgs),
    /// Evolve a state and report entropy/information diagnostics on a grid.
    Evolve(EvolveArgs),
    /// Transport distance of order 1 or 2 between two states.
    Wasserstein(WassersteinArgs),
    /// Sampled verification of the inequality chain with explicit constants.
    ChainCheck(ChainCheckArgs),
    /// Concentration bounds against exact spectral tails on an r-grid.
    Concentration(ConcentrationArgs),
    /// Finite-blocklength estimation bounds with Monte Carlo validation.
    Estimate(EstimateArgs),
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    generator: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long)]
    generator: PathBuf,
    #[arg(long)]
    state: PathBuf,
    /// Time grid start:stop:step (inclusive endpoints).
    #[arg(long, default_value = "0:2:0.1")]
    t_grid: String,
    #[arg(long)]
    output: PathBuf,
    /// Also write the final evolved state.
    #[arg(long)]
    state_out: Option<PathBuf>,
}

#[derive(Args)]
struct WassersteinArgs {
    #[arg(long)]
    generator: PathBuf,
    #[arg(long)]
    state_a: PathBuf,
    #[arg(long)]
    state_b: PathBuf,
    #[arg(long)]
    order: u8,
    /// Seminorm variant for order 1: lip, lip2, lipg, liph, clh.
    #[arg(long, default_value = "lip")]
    variant: String,
    /// Starting segment count for order 2.
    #[arg(long, default_value_t = 4)]
    segments: usize,
    /// Ascent multi-starts for order 1.
    #[arg(long, default_value_t = 16)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
    /// Optional certificate file (observable or discrete path).
    #[arg(long)]
    certificate: Option<PathBuf>,
}

#[derive(Args)]
struct ChainCheckArgs {
    #[arg(long)]
    generator: PathBuf,
    #[arg(long)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    report: PathBuf,
    /// Directory for worst-margin witness states.
    #[arg(long)]
    witness_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ConcentrationArgs {
    /// Generator file (exp, gauss, product kinds).
    #[arg(long)]
    generator: Option<PathBuf>,
    /// Invariant state file (depol kind).
    #[arg(long)]
    sigma: Option<PathBuf>,
    #[arg(long)]
    observable: PathBuf,
    /// exp | gauss | depol | product
    #[arg(long = "type")]
    kind: String,
    #[arg(long, default_value = "0:3:0.5")]
    r_grid: String,
    /// TC₁ constant for the gauss kind (default d/α₁ for depolarizing input).
    #[arg(long)]
    c1: Option<f64>,
    /// Site count for the product kind.
    #[arg(long, default_value_t = 2)]
    sites: usize,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    /// diag | rotation | gibbs
    #[arg(long)]
    family: String,
    #[arg(long)]
    theta: f64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optional dissipative preparation generator (defaults to the
    /// depolarizing generator with invariant ρ_θ).
    #[arg(long)]
    generator: Option<PathBuf>,
    #[arg(long)]
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads(cli.threads);
    let outcome = match cli.command {
        Command::Validate(a) => cmd_validate(&a),
        Command::Evolve(a) => cmd_evolve(&a),
        Command::Wasserstein(a) => cmd_wasserstein(&a),
        Command::ChainCheck(a) => cmd_chain_check(&a),
        Command::Concentration(a) => cmd_concentration(&a),
        Command::Estimate(a) => cmd_estimate(&a),
    };
    match outcome {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("qtc: at least one check violated beyond slack");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("qtc: error: {e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(feature = "parallel")]
fn init_threads(flag: usize) {
    let n = if flag > 0 {
        flag
    } else {
        std::env::var("QTC_THREADS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .unwrap_or(0)
    };
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn init_threads(_flag: usize) {}

fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        anyhow::bail!("grid must be start:stop:step, got '{spec}'");
    }
    let start: f64 = parts[0].parse()?;
    let stop: f64 = parts[1].parse()?;
    let step: f64 = parts[2].parse()?;
    if step <= 0.0 || stop < start {
        anyhow::bail!("grid needs step > 0 and stop ≥ start");
    }
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let v = start + k as f64 * step;
        if v > stop + 1e-12 {
            break;
        }
        out.push(v);
        k += 1;
    }
    Ok(out)
}

fn fmt(v: f64) -> String {
    format!("{v:.12e}")
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

#[derive(serde::Serialize)]
struct ValidateReport {
    passed: bool,
    items: Vec<ValidateItem>,
}

#[derive(serde::Serialize)]
struct ValidateItem {
    name: String,
    residual: f64,
    tolerance: f64,
    pass: bool,
}

fn cmd_validate(a: &ValidateArgs) -> anyhow::Result<bool> {
    let gen = read_generator(&a.generator)?;
    let report = gen.validate()?;
    let out = ValidateReport {
        passed: report.passed(),
        items: report
            .items
            .iter()
            .map(|i| ValidateItem {
                name: i.name.to_string(),
                residual: i.residual,
                tolerance: i.tolerance,
                pass: i.pass,
            })
            .collect(),
    };
    if let Some(path) = &a.output {
        write_json(path, &out)?;
    }
    for i in &out.items {
        println!(
            "{:<22} residual {:.3e}  tol {:.1e}  {}",
            i.name,
            i.residual,
            i.tolerance,
            if i.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(!out.passed)
}

// ---------------------------------------------------------------------------
// evolve
// ---------------------------------------------------------------------------

fn cmd_evolve(a: &EvolveArgs) -> anyhow::Result<bool> {
    let gen = read_generator(&a.generator)?;
    let rho = read_density(&a.state)?;
    let grid = parse_grid(&a.t_grid)?;
    let mut csv = String::new();
    csv.push_str(&format!(
        "# qtc evolve generator={} state={} t_grid={}\n",
        a.generator.display(),
        a.state.display(),
        a.t_grid
    ));
    csv.push_str(
        "t,relative_entropy,fisher_information,de_bruijn_residual,trace_distance,min_eigenvalue\n",
    );
    let mut last = None;
    for &t in &grid {
        let rho_t = gen.evolve(&rho, t)?;
        let rel = qtc_core::entropy::relative_entropy(&rho_t, gen.sigma())?.value;
        let fisher = qtc_core::entropy::fisher_information(&gen, &rho_t)?;
        let h = qtc_core::entropy::default_de_bruijn_step(t);
        let residual = qtc_core::entropy::de_bruijn_residual(&gen, &rho, t, h)?;
        let dist = qtc_core::linalg::trace_norm(&(rho_t.matrix() - gen.sigma().matrix()));
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt(t),
            fmt(rel),
            fmt(fisher),
            fmt(residual),
            fmt(dist),
            fmt(rho_t.min_eigenvalue())
        ));
        last = Some(rho_t);
    }
    std::fs::write(&a.output, csv)?;
    if let (Some(path), Some(state)) = (&a.state_out, last) {
        write_json(path, &MatrixJson::from_cmat(state.matrix()))?;
    }
    Ok(false)
}

// ---------------------------------------------------------------------------
// wasserstein
// ---------------------------------------------------------------------------

#[derive(serde::Serialize)]
struct WassersteinReport {
    order: u8,
    variant: String,
    value: f64,
    bracket: [f64; 2],
    iterations: usize,
    converged: bool,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    speed_variance: Option<f64>,
}

#[derive(serde::Serialize)]
struct PathJson {
    states: Vec<MatrixJson>,
    potentials: Vec<MatrixJson>,
    speeds: Vec<f64>,
}

fn cmd_wasserstein(a: &WassersteinArgs) -> anyhow::Result<bool> {
    let gen = read_generator(&a.generator)?;
    let rho = read_density(&a.state_a)?;
    let sig = read_density(&a.state_b)?;
    let result = match a.order {
        1 => {
            let variant = LipschitzVariant::parse(&a.variant)?;
            let opts = W1Options {
                starts: a.starts,
                seed: a.seed,
                ..W1Options::default()
            };
            wasserstein::w1(&gen, &rho, &sig, variant, &opts)?
        }
        2 => {
            let opts = W2Options {
                segments: a.segments.max(4),
                ..W2Options::default()
            };
            wasserstein::w2_bracket_opts(&gen, &rho, &sig, &opts)?
        }
        other => anyhow::bail!("order must be 1 or 2, got {other}"),
    };
    let report = WassersteinReport {
        order: a.order,
        variant: if a.order == 1 {
            a.variant.clone()
        } else {
            format!("segments>={}", a.segments)
        },
        value: result.value,
        bracket: result.bracket,
        iterations: result.iterations,
        converged: result.converged,
        seed: a.seed,
        speed_variance: result.speed_variance,
    };
    write_json(&a.output, &report)?;
    if let Some(path) = &a.certificate {
        match &result.certificate {
            Certificate::Observable(f) => write_json(path, &MatrixJson::from_cmat(f.matrix()))?,
            Certificate::Path(p) => {
                let json = PathJson {
                    states: p
                        .states
                        .iter()
                        .map(|s| MatrixJson::from_cmat(s.matrix()))
                        .collect(),
                    potentials: p.potentials.iter().map(MatrixJson::from_cmat).collect(),
                    speeds: p.speeds.clone(),
                };
                write_json(path, &json)?;
            }
            Certificate::None => {}
        }
    }
    println!(
        "order {} value {:.9e} bracket [{:.9e}, {:.9e}]",
        a.order, report.value, report.bracket[0], report.bracket[1]
    );
    Ok(false)
}

// ---------------------------------------------------------------------------
// chain-check
// ---------------------------------------------------------------------------

/// Detects the closed-form depolarizing action L(f) = Tr(σf)·I − f.
fn detect_depolarizing(gen: &DBGenerator) -> bool {
    let d = gen.dim();
    let mut worst = 0.0f64;
    for j in 0..d {
        for i in 0..d {
            let mut e = CMat::zeros(d, d);
            e[(i, j)] = qtc_core::linalg::cr(1.0);
            let got = match gen.apply(&e) {
                Ok(g) => g,
                Err(_) => return false,
            };
            let expected =
                CMat::identity(d, d).scale(trace_re(&(gen.sigma().matrix() * &e))) - &e;
            worst = worst.max(qtc_core::linalg::hs_norm(&(got - expected)));
        }
    }
    worst < 1e-9
}

struct ChainRow {
    inequality: &'static str,
    constant: f64,
    worst_margin: f64,
    witness: Option<DensityMatrix>,
}

struct SampleMargins {
    mlsi: f64,
    tc2: f64,
    tc1: f64,
    pinsker: f64,
    exp_conc: f64,
    gauss_conc: f64,
}

fn cmd_chain_check(a: &ChainCheckArgs) -> anyhow::Result<bool> {
    if a.samples == 0 {
        anyhow::bail!("--samples must be at least 1");
    }
    let gen = read_generator(&a.generator)?;
    let validation = gen.validate()?;
    if !validation.passed() {
        anyhow::bail!("generator fails the detailed-balance checks; run `qtc validate`");
    }
    let d = gen.dim();
    let depol = detect_depolarizing(&gen);
    let (alpha, alpha_source) = if depol {
        (
            qtc_core::generator::mlsi_constant_depolarizing(gen.sigma())?,
            "closed_form",
        )
    } else {
        (
            ineq::mlsi_estimate(&gen, a.samples, a.seed)?,
            "sampled_estimate",
        )
    };
    let c2 = 1.0 / alpha;
    let c1 = d as f64 * c2;
    let [_, kappa_up] = ineq::kappa(&gen)?;
    let lambda_pi = 1.0 / (c2 * kappa_up);
    let gap = gen.spectral_gap()?.spectral_gap;

    let samples: Vec<(usize, DensityMatrix)> = (0..a.samples)
        .map(|i| {
            let mut rng = rng_for_item(a.seed, i as u64);
            (i, qtc_core::rng::random_density(d, &mut rng))
        })
        .collect();
    let gen_ref = &gen;
    let margins: Vec<qtc_core::Result<SampleMargins>> =
        qtc_core::parallel::par_map(samples.clone(), move |(i, rho)| {
            let mlsi = ineq::mlsi_margin(gen_ref, &rho, alpha)?;
            let tc2 = ineq::tc2_check(gen_ref, &rho, c2)?;
            let tc1 = ineq::tc1_check(gen_ref, &rho, c1)?;
            let pinsker = ineq::pinsker_check(&rho, gen_ref.sigma())?;
            // concentration margins with a random observable per sample
            let mut rng = rng_for_item(a.seed ^ 0x0bbe, i as u64);
            let f = HermitianOperator::from_symmetrized(&qtc_core::rng::random_hermitian(
                d, &mut rng,
            ));
            let mut exp_margin = f64::INFINITY;
            let mut gauss_margin = f64::INFINITY;
            let mut r = 0.0;
            while r <= 3.0 + 1e-12 {
                let tail = ineq::tail_probability(gen_ref.sigma(), &f, r);
                exp_margin =
                    exp_margin.min(ineq::exp_concentration_bound(gen_ref, &f, r)? - tail);
                gauss_margin = gauss_margin
                    .min(ineq::gauss_concentration_bound(gen_ref, &f, r, c1)? - tail);
                r += 0.25;
            }
            Ok(SampleMargins {
                mlsi,
                tc2,
                tc1,
                pinsker,
                exp_conc: exp_margin,
                gauss_conc: gauss_margin,
            })
        });

    let mut rows = vec![
        ChainRow {
            inequality: "MLSI",
            constant: alpha,
            worst_margin: f64::INFINITY,
            witness: None,
        },
        ChainRow {
            inequality: "TC2",
            constant: c2,
            worst_margin: f64::INFINITY,
            witness: None,
        },
        ChainRow {
            inequality: "TC1",
            constant: c1,
            worst_margin: f64::INFINITY,
            witness: None,
        },
        ChainRow {
            inequality: "Pinsker",
            constant: 1.0,
            worst_margin: f64::INFINITY,
            witness: None,
        },
        ChainRow {
            inequality: "ExpConc",
            constant: gap,
            worst_margin: f64::INFINITY,
            witness: None,
        },
        ChainRow {
            inequality: "GaussConc",
            constant: c1,
            worst_margin: f64::INFINITY,
            witness: None,
        },
    ];
    for ((_, rho), m) in samples.iter().zip(&margins) {
        let m = match m {
            Ok(m) => m,
            Err(e) => anyhow::bail!("sample failed: {e}"),
        };
        let updates = [
            (0usize, m.mlsi),
            (1, m.tc2),
            (2, m.tc1),
            (3, m.pinsker),
            (4, m.exp_conc),
            (5, m.gauss_conc),
        ];
        for (row, value) in updates {
            if value < rows[row].worst_margin {
                rows[row].worst_margin = value;
                rows[row].witness = Some(rho.clone());
            }
        }
    }
    // Poincaré consistency: the implied constant cannot exceed the gap
    rows.push(ChainRow {
        inequality: "PI",
        constant: lambda_pi,
        worst_margin: gap - lambda_pi,
        witness: None,
    });

    let mut csv = String::new();
    csv.push_str(&format!(
        "# qtc chain-check generator={} samples={} seed={}\n",
        a.generator.display(),
        a.samples,
        a.seed
    ));
    csv.push_str(&format!(
        "# alpha1={} ({alpha_source}) c2=1/alpha1 c1=d*c2 kappa_upper={} lambda_pi=1/(c2*kappa_upper) gap={}\n",
        fmt(alpha),
        fmt(kappa_up),
        fmt(gap)
    ));
    csv.push_str("inequality,constant,worst_margin,witness_file\n");
    let mut violated = false;
    for row in &rows {
        let witness_file = match (&a.witness_dir, &row.witness) {
            (Some(dir), Some(rho)) => {
                std::fs::create_dir_all(dir)?;
                let path = dir.join(format!(
                    "witness_{}.json",
                    row.inequality.to_ascii_lowercase()
                ));
                write_json(&path, &MatrixJson::from_cmat(rho.matrix()))?;
                path.display().to_string()
            }
            _ => String::new(),
        };
        if row.worst_margin < -MARGIN_SLACK {
            violated = true;
        }
        csv.push_str(&format!(
            "{},{},{},{}\n",
            row.inequality,
            fmt(row.constant),
            fmt(row.worst_margin),
            witness_file
        ));
    }
    let mut file = std::fs::File::create(&a.report)?;
    file.write_all(csv.as_bytes())?;
    Ok(violated)
}

// ---------------------------------------------------------------------------
// concentration
// ---------------------------------------------------------------------------

fn cmd_concentration(a: &ConcentrationArgs) -> anyhow::Result<bool> {
    let grid = parse_grid(&a.r_grid)?;
    let f = read_hermitian(&a.observable)?;
    let mut csv = String::new();
    let mut violated = false;
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();
    match a.kind.as_str() {
        "exp" | "gauss" => {
            let gen_path = a
                .generator
                .as_ref()
                .ok_or_else(|| anyhow::anyhow!("--generator required for type {}", a.kind))?;
            let gen = read_generator(gen_path)?;
            let c1 = match (a.kind.as_str(), a.c1) {
                ("gauss", Some(c)) => c,
                ("gauss", None) => {
                    anyhow::ensure!(
                        detect_depolarizing(&gen),
                        "--c1 required for non-depolarizing generators"
                    );
                    gen.dim() as f64
                        / qtc_core::generator::mlsi_constant_depolarizing(gen.sigma())?
                }
                _ => 0.0,
            };
            csv.push_str(&format!(
                "# qtc concentration type={} generator={} observable={} r_grid={}\n",
                a.kind,
                gen_path.display(),
                a.observable.display(),
                a.r_grid
            ));
            for &r in &grid {
                let bound = match a.kind.as_str() {
                    "exp" => ineq::exp_concentration_bound(&gen, &f, r)?,
                    _ => ineq::gauss_concentration_bound(&gen, &f, r, c1)?,
                };
                let tail = ineq::tail_probability(gen.sigma(), &f, r);
                rows.push((r, bound, tail));
            }
        }
        "depol" => {
            let sigma_path = a
                .sigma
                .as_ref()
                .ok_or_else(|| anyhow::anyhow!("--sigma required for type depol"))?;
            let sigma = read_density(sigma_path)?;
            csv.push_str(&format!(
                "# qtc concentration type=depol sigma={} observable={} r_grid={}\n",
                sigma_path.display(),
                a.observable.display(),
                a.r_grid
            ));
            for &r in &grid {
                let bound = ineq::depolarizing_gauss_bound(&sigma, &f, r)?;
                let tail = ineq::tail_probability(&sigma, &f, r);
                rows.push((r, bound, tail));
            }
        }
        "product" => {
            let gen_path = a
                .generator
                .as_ref()
                .ok_or_else(|| anyhow::anyhow!("--generator required for type product"))?;
            let gen = read_generator(gen_path)?;
            let n = a.sites;
            csv.push_str(&format!(
                "# qtc concentration type=product sites={n} generator={} observable={} r_grid={}\n",
                gen_path.display(),
                a.observable.display(),
                a.r_grid
            ));
            // exact product tail on the full tensor space
            let fn_op = qtc_core::estimation::site_average(&f, n)?;
            let mut sig_n = gen.sigma().matrix().clone();
            for _ in 1..n {
                sig_n = sig_n.kronecker(gen.sigma().matrix());
            }
            let sigma_n = DensityMatrix::new(sig_n)?;
            for &r in &grid {
                let bound = ineq::product_concentration_bound(&gen, &f, n, r)?;
                let tail = ineq::tail_probability(&sigma_n, &fn_op, r);
                rows.push((r, bound, tail));
            }
        }
        other => anyhow::bail!("unknown concentration type '{other}'"),
    }
    csv.push_str("r,bound,tail,margin\n");
    for (r, bound, tail) in rows {
        if tail > bound + 1e-9 {
            violated = true;
        }
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt(r),
            fmt(bound),
            fmt(tail),
            fmt(bound - tail)
        ));
    }
    std::fs::write(&a.output, csv)?;
    Ok(violated)
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

fn cmd_estimate(a: &EstimateArgs) -> anyhow::Result<bool> {
    let family = match a.family.as_str() {
        "diag" => ParametricFamily::diag(),
        "rotation" => {
            // fixed full-rank reference qubit off the z-axis
            let rho0 = DensityMatrix::new(CMat::from_row_slice(
                2,
                2,
                &[
                    qtc_core::linalg::c(0.65, 0.0),
                    qtc_core::linalg::c(0.15, 0.05),
                    qtc_core::linalg::c(0.15, -0.05),
                    qtc_core::linalg::c(0.35, 0.0),
                ],
            ))?;
            ParametricFamily::rotation(rho0)?
        }
        "gibbs" => {
            let h = HermitianOperator::new(CMat::from_row_slice(
                2,
                2,
                &[
                    qtc_core::linalg::c(1.0, 0.0),
                    qtc_core::linalg::c(0.4, 0.0),
                    qtc_core::linalg::c(0.4, 0.0),
                    qtc_core::linalg::c(-1.0, 0.0),
                ],
            ))?;
            ParametricFamily::gibbs(h)
        }
        other => anyhow::bail!("unknown family '{other}'"),
    };
    let preparation = match &a.generator {
        Some(path) => Some(read_generator(path)?),
        None => None,
    };
    let report = estimation_report(
        &family,
        a.theta,
        a.n,
        a.eps,
        a.trials,
        a.seed,
        preparation.as_ref(),
    )?;
    write_json(&a.output, &report)?;
    println!(
        "empirical {:.6e} ± {:.2e}  bounds: dissipative {:.6e}, depolarizing {:.6e}",
        report.empirical,
        report.standard_error,
        report.bound_dissipative,
        report.bound_depolarizing
    );
    let slack = 3.0 * report.standard_error;
    Ok(report.empirical > report.bound_dissipative + slack
        || report.empirical > report.bound_depolarizing + slack)
}
