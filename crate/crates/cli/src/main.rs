//! Batch command-line front end: one command per invocation, seeded
//! reproducibility, exit code 0 on success, 2 on validation/domain errors,
//! 3 on I/O errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use osim_core::fourier::{
    complexity_report, dft_direct, fft_radix2, qft_apply, qft_build_circuit, stage_factorization,
    verify_factorization, SpectrumVector,
};
use osim_core::io::{
    circuit_to_json, complexity_to_csv, fmt_f64, hamiltonian_matrix_from_json, signal_from_csv,
    signal_to_csv, state_from_json, state_to_json, trajectory_to_csv, FormatError,
};
use osim_core::lti::{
    acausal_system, check_causality, check_linearity, check_time_invariance, convolution_system,
    evolve_rk4, nonlinear_system, propagator_closed_form, schrodinger_system, time_varying_system,
    CheckReport, LtiError, SystemUnderTest, TimeGrid, TwoLevelHamiltonian, TwoLevelState,
};
use osim_core::signal::{
    decode, encode, verify_orthonormality, EncodingConfig, QuadratureRule, SampledSignal,
    SignalError,
};
use osim_core::state::{normalize_complex, State, StateError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::json;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug)]
enum CliError {
    Validation(String),
    Io(String),
}

impl CliError {
    fn validation(e: impl std::fmt::Display) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SignalError> for CliError {
    fn from(e: SignalError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<LtiError> for CliError {
    fn from(e: LtiError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<osim_core::fourier::FourierError> for CliError {
    fn from(e: osim_core::fourier::FourierError) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuadratureArg {
    Trapezoid,
    Simpson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "osim", about = "O-bit encodings, two-level dynamics, LTI checks and Fourier cross-verification", version)]
struct Cli {
    /// Optional TOML config; command-line flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// RNG seed for every randomized input
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Samples per waveform grid (even, >= 8)
    #[arg(long, global = true)]
    samples: Option<usize>,

    #[arg(long, global = true, value_enum)]
    quadrature: Option<QuadratureArg>,

    /// Scale factor for the Schrodinger generator
    #[arg(long, global = true)]
    hbar: Option<f64>,

    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// O-bit waveform encoding, decoding and the orthonormality table
    Obit {
        #[command(subcommand)]
        sub: ObitCommand,
    },
    /// Integrate the two-level system and compare against the closed form
    Evolve(EvolveArgs),
    /// Run the linearity / time-invariance / causality checkers
    Lticheck(LtiCheckArgs),
    /// Fourier transforms, circuit building, factorization and the ledger
    Fourier {
        #[command(subcommand)]
        sub: FourierCommand,
    },
}

#[derive(Subcommand)]
enum ObitCommand {
    /// Encode a real 2-state into a sin/cos waveform CSV
    Encode {
        /// State JSON file ({"kind":"real","amplitudes":[a,b]})
        #[arg(long)]
        state: PathBuf,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the O-bit amplitudes from a waveform CSV
    Decode {
        #[arg(long)]
        signal: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gram matrix of the basis waveforms under the quadrature inner product
    Gram {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EvolveArgs {
    /// Hamiltonian JSON file ({"matrix": [[[re,im],...],...]})
    #[arg(long)]
    hamiltonian: PathBuf,
    /// Initial state JSON (complex, dimension 2); basis |0> when omitted
    #[arg(long)]
    state: Option<PathBuf>,
    /// Total evolution time
    #[arg(long, short = 't')]
    t: f64,
    /// Time step
    #[arg(long)]
    dt: f64,
    /// Trajectory CSV output path (stdout when omitted)
    #[arg(long)]
    traj_out: Option<PathBuf>,
    /// Summary JSON output path (stderr-free stdout when omitted)
    #[arg(long)]
    summary_out: Option<PathBuf>,
}

#[derive(Args)]
struct LtiCheckArgs {
    /// convolution | schrodinger | counterexample:nonlinear |
    /// counterexample:timevarying | counterexample:acausal
    #[arg(long)]
    system: String,
    /// Time step for the driven two-level system
    #[arg(long, default_value_t = 0.05)]
    dt: f64,
    /// Delay (in steps) used by the time-invariance check
    #[arg(long, default_value_t = 3)]
    shift: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FourierCommand {
    /// Direct O(N^2) transform of a complex state
    Dft(TransformArgs),
    /// Radix-2 FFT of a complex state
    Fft(TransformArgs),
    /// Run the gate circuit on a complex state
    Qft {
        #[command(flatten)]
        input: TransformArgs,
        /// Also write the gate list as JSON to this path
        #[arg(long)]
        dump_circuit: Option<PathBuf>,
    },
    /// Build the sparse stage factorization and report its residual
    Factorize {
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Four-way equivalence at width n on a seeded random state
    Compare {
        #[arg(long, short = 'n')]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Operation-count ledger over a width range
    Complexity {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TransformArgs {
    /// Input state JSON; a delta state of width n when omitted
    #[arg(long)]
    input: Option<PathBuf>,
    /// Register width for the generated delta input
    #[arg(long, short = 'n')]
    n: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
struct FileConfig {
    seed: Option<u64>,
    samples: Option<usize>,
    quadrature: Option<String>,
    hbar: Option<f64>,
    format: Option<String>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
}

struct RunConfig {
    seed: u64,
    samples: usize,
    quadrature: QuadratureRule,
    hbar: f64,
    format: FormatArg,
    tolerances: BTreeMap<String, f64>,
}

impl RunConfig {
    fn tolerance(&self, name: &str, default: f64) -> f64 {
        *self.tolerances.get(name).unwrap_or(&default)
    }

    fn encoding(&self) -> Result<EncodingConfig, CliError> {
        Ok(EncodingConfig::new(self.samples, self.quadrature)?)
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let file: FileConfig = match &cli.config {
        Some(path) => {
            let text = read_file(path)?;
            toml::from_str(&text).map_err(CliError::validation)?
        }
        None => FileConfig::default(),
    };
    let quadrature = match (&cli.quadrature, file.quadrature.as_deref()) {
        (Some(QuadratureArg::Trapezoid), _) => QuadratureRule::Trapezoid,
        (Some(QuadratureArg::Simpson), _) => QuadratureRule::Simpson,
        (None, Some("trapezoid")) | (None, None) => QuadratureRule::Trapezoid,
        (None, Some("simpson")) => QuadratureRule::Simpson,
        (None, Some(other)) => {
            return Err(CliError::Validation(format!(
                "unknown quadrature {other:?} in config"
            )))
        }
    };
    let format = match (&cli.format, file.format.as_deref()) {
        (Some(f), _) => *f,
        (None, Some("csv")) => FormatArg::Csv,
        (None, Some("json")) | (None, None) => FormatArg::Json,
        (None, Some(other)) => {
            return Err(CliError::Validation(format!(
                "unknown format {other:?} in config"
            )))
        }
    };
    let hbar = cli.hbar.or(file.hbar).unwrap_or(1.0);
    if !(hbar > 0.0) {
        return Err(CliError::Validation(format!("hbar must be positive, got {hbar}")));
    }
    Ok(RunConfig {
        seed: cli.seed.or(file.seed).unwrap_or(0),
        samples: cli.samples.or(file.samples).unwrap_or(256),
        quadrature,
        hbar,
        format,
        tolerances: file.tolerances,
    })
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve_config(cli)?;
    match &cli.command {
        Command::Obit { sub } => run_obit(sub, &cfg),
        Command::Evolve(args) => run_evolve(args, &cfg),
        Command::Lticheck(args) => run_lticheck(args, &cfg),
        Command::Fourier { sub } => run_fourier(sub, &cfg),
    }
}

fn run_obit(sub: &ObitCommand, cfg: &RunConfig) -> Result<(), CliError> {
    let encoding = cfg.encoding()?;
    match sub {
        ObitCommand::Encode { state, out } => {
            let state = state_from_json(&read_file(state)?)?;
            let real = match state {
                State::Real(s) => s,
                State::Complex(_) => {
                    return Err(CliError::Validation(
                        "only real states can be encoded as waveforms".into(),
                    ))
                }
            };
            let sig = encode(&real, &encoding)?;
            write_output(out, &signal_to_csv(&sig))
        }
        ObitCommand::Decode { signal, out } => {
            let sig = signal_from_csv(&read_file(signal)?)?;
            let local = EncodingConfig::new(sig.len(), cfg.quadrature)?;
            let state = decode(&sig, &local)?;
            let mut text = state_to_json(&State::Real(state)).to_string();
            text.push('\n');
            write_output(out, &text)
        }
        ObitCommand::Gram { out } => {
            let gram = verify_orthonormality(&encoding);
            let tol = cfg.tolerance("gram_deviation", 1e-12);
            let text = match cfg.format {
                FormatArg::Json => {
                    let v = json!({
                        "samples": encoding.sample_count,
                        "table": gram.table,
                        "max_deviation": gram.max_deviation,
                        "tolerance": tol,
                        "pass": gram.max_deviation <= tol,
                    });
                    format!("{v}\n")
                }
                FormatArg::Csv => {
                    let mut s = String::from("row,col,value\n");
                    for i in 0..2 {
                        for j in 0..2 {
                            s.push_str(&format!("{i},{j},{}\n", fmt_f64(gram.table[i][j])));
                        }
                    }
                    s
                }
            };
            write_output(out, &text)?;
            if gram.max_deviation <= tol {
                Ok(())
            } else {
                Err(CliError::Validation(format!(
                    "Gram deviation {} exceeds {tol}",
                    gram.max_deviation
                )))
            }
        }
    }
}

fn run_evolve(args: &EvolveArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let m = hamiltonian_matrix_from_json(&read_file(&args.hamiltonian)?)?;
    let h = TwoLevelHamiltonian::new(m[0][0], m[0][1], m[1][0], m[1][1])?
        .with_hbar(cfg.hbar)?;
    let s0 = match &args.state {
        Some(path) => match state_from_json(&read_file(path)?)? {
            State::Complex(s) if s.dim() == 2 => {
                TwoLevelState::new(s.amplitudes()[0], s.amplitudes()[1])?
            }
            _ => {
                return Err(CliError::Validation(
                    "initial state must be complex with dimension 2".into(),
                ))
            }
        },
        None => TwoLevelState::basis(0)?,
    };
    if !(args.t > 0.0) || !(args.dt > 0.0) {
        return Err(CliError::Validation("need t > 0 and dt > 0".into()));
    }
    let steps = (args.t / args.dt).round().max(1.0) as usize;
    let grid = TimeGrid::new(0.0, args.t / steps as f64, steps)?;
    let traj = evolve_rk4(&h, &s0, &grid)?;

    let mut max_error: f64 = 0.0;
    let mut max_norm_drift: f64 = 0.0;
    for p in &traj {
        let u = propagator_closed_form(&h, p.t);
        let exact = u.apply(&s0);
        let err = (p.c1 - exact.c1).norm().max((p.c2 - exact.c2).norm());
        max_error = max_error.max(err);
        max_norm_drift = max_norm_drift.max((p.norm - 1.0).abs());
    }
    write_output(&args.traj_out, &trajectory_to_csv(&traj))?;
    let summary = json!({
        "steps": steps,
        "dt": grid.dt,
        "max_error_vs_closed_form": max_error,
        "max_norm_drift": max_norm_drift,
        "final_unitarity_deviation": propagator_closed_form(&h, args.t).unitarity_deviation(),
    });
    write_output(&args.summary_out, &format!("{summary}\n"))
}

/// Expected pass pattern (linearity, time invariance, causality) per system.
fn build_system(
    name: &str,
    cfg: &RunConfig,
    dt: f64,
) -> Result<(SystemUnderTest, [bool; 3]), CliError> {
    match name {
        "convolution" => {
            let mut h = vec![0.0; 8];
            h[0] = 0.5;
            h[1] = 0.25;
            h[2] = -0.125;
            Ok((
                convolution_system(SampledSignal::new(h)?),
                [true, true, true],
            ))
        }
        "schrodinger" => {
            let h = TwoLevelHamiltonian::sigma_x().with_hbar(cfg.hbar)?;
            Ok((schrodinger_system(&h, 2, 0, dt)?, [true, true, true]))
        }
        "counterexample:nonlinear" => Ok((nonlinear_system(), [false, true, true])),
        "counterexample:timevarying" => Ok((time_varying_system(), [true, false, true])),
        "counterexample:acausal" => Ok((acausal_system(), [true, true, false])),
        other => Err(CliError::Validation(format!("unknown system {other:?}"))),
    }
}

fn seeded_supported_signal(rng: &mut ChaCha8Rng, m: usize, support: usize) -> SampledSignal {
    let samples = (0..m)
        .map(|k| {
            if k < support {
                0.0
            } else {
                rng.gen_range(-1.0..1.0)
            }
        })
        .collect();
    SampledSignal::new(samples).expect("even length >= 8 by construction")
}

fn run_lticheck(args: &LtiCheckArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let (sys, expected) = build_system(&args.system, cfg, args.dt)?;
    let m = cfg.samples.max(16);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let x1 = seeded_supported_signal(&mut rng, m, 4);
    let x2 = seeded_supported_signal(&mut rng, m, 4);
    let reports: [CheckReport; 3] = [
        check_linearity(&sys, &x1, &x2, 1.5, -0.7)?,
        check_time_invariance(&sys, &x1, args.shift)?,
        check_causality(&sys, &x1)?,
    ];
    let observed = [reports[0].pass, reports[1].pass, reports[2].pass];
    let v = json!({
        "system": sys.name(),
        "reports": reports,
        "expected_pass": expected,
        "matches_expectation": observed == expected,
    });
    write_output(&args.out, &format!("{v}\n"))?;
    if observed == expected {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "system {:?}: observed pass pattern {observed:?}, expected {expected:?}",
            args.system
        )))
    }
}

fn load_spectrum(input: &TransformArgs) -> Result<SpectrumVector, CliError> {
    match (&input.input, input.n) {
        (Some(path), _) => match state_from_json(&read_file(path)?)? {
            State::Complex(s) => Ok(SpectrumVector::from_state(&s)),
            State::Real(_) => Err(CliError::Validation(
                "Fourier transforms take complex states".into(),
            )),
        },
        (None, Some(n)) => {
            if n == 0 || n > 20 {
                return Err(CliError::Validation(format!("n = {n} out of range [1, 20]")));
            }
            Ok(SpectrumVector::delta(1 << n)?)
        }
        (None, None) => Err(CliError::Validation(
            "provide --input or a width -n for a delta input".into(),
        )),
    }
}

fn spectrum_to_state_json(v: &SpectrumVector) -> Result<String, CliError> {
    let state = State::Complex(normalize_complex(v.values())?);
    let mut text = state_to_json(&state).to_string();
    text.push('\n');
    Ok(text)
}

fn run_fourier(sub: &FourierCommand, cfg: &RunConfig) -> Result<(), CliError> {
    match sub {
        FourierCommand::Dft(args) => {
            let x = load_spectrum(args)?;
            write_output(&args.out, &spectrum_to_state_json(&dft_direct(&x))?)
        }
        FourierCommand::Fft(args) => {
            let x = load_spectrum(args)?;
            write_output(&args.out, &spectrum_to_state_json(&fft_radix2(&x))?)
        }
        FourierCommand::Qft {
            input,
            dump_circuit,
        } => {
            let x = load_spectrum(input)?;
            let n = x.len().trailing_zeros() as usize;
            let circuit = qft_build_circuit(n)?;
            if let Some(path) = dump_circuit {
                let mut text = circuit_to_json(&circuit).to_string();
                text.push('\n');
                write_output(&Some(path.clone()), &text)?;
            }
            let s = normalize_complex(x.values())?;
            let out = qft_apply(&circuit, &s)?;
            write_output(
                &input.out,
                &spectrum_to_state_json(&SpectrumVector::from_state(&out))?,
            )
        }
        FourierCommand::Factorize { n, out } => {
            let f = stage_factorization(*n)?;
            let residual = verify_factorization(&f);
            let tol = cfg.tolerance("factorization_residual", 1e-10);
            let v = json!({
                "n": n,
                "stages": f.stages().len(),
                "nonzeros_per_stage": f.stages().first().map(|s| s.nonzeros()),
                "residual": residual,
                "tolerance": tol,
                "pass": residual <= tol,
            });
            write_output(out, &format!("{v}\n"))?;
            if residual <= tol {
                Ok(())
            } else {
                Err(CliError::Validation(format!(
                    "factorization residual {residual} exceeds {tol}"
                )))
            }
        }
        FourierCommand::Compare { n, out } => run_compare(*n, out, cfg),
        FourierCommand::Complexity { from, to, out } => {
            let rows = complexity_report(*from, *to)?;
            let text = match cfg.format {
                FormatArg::Csv => complexity_to_csv(&rows),
                FormatArg::Json => format!("{}\n", serde_json::to_value(&rows).expect("plain structs")),
            };
            write_output(out, &text)
        }
    }
}

fn run_compare(n: usize, out: &Option<PathBuf>, cfg: &RunConfig) -> Result<(), CliError> {
    if n == 0 || n > 8 {
        return Err(CliError::Validation(format!(
            "n = {n} out of range [1, 8] for the dense four-way comparison"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let raw: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let s = normalize_complex(&raw)?;
    let x = SpectrumVector::from_state(&s);

    let oracle = dft_direct(&x);
    let via_fft = fft_radix2(&x);
    let via_qft = SpectrumVector::from_state(&qft_apply(&qft_build_circuit(n)?, &s)?);
    let factorization = stage_factorization(n)?;
    let via_stages = factorization.apply(&x)?;

    let tol = cfg.tolerance("fourier_residual", 1e-10);
    let residuals = [
        ("dft_vs_fft", oracle.inf_distance(&via_fft)),
        ("dft_vs_qft", oracle.inf_distance(&via_qft)),
        ("dft_vs_stages", oracle.inf_distance(&via_stages)),
        ("factorization_residual", verify_factorization(&factorization)),
    ];
    let pass = residuals.iter().all(|(_, r)| *r <= tol);
    let v = json!({
        "n": n,
        "seed": cfg.seed,
        "residuals": residuals.iter().map(|(k, r)| json!({"check": k, "residual": r})).collect::<Vec<_>>(),
        "norm_in": x.norm(),
        "norm_out": oracle.norm(),
        "tolerance": tol,
        "pass": pass,
    });
    write_output(out, &format!("{v}\n"))?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "four-way residuals exceed {tol}: {residuals:?}"
        )))
    }
}
