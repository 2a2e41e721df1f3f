//! Thin command-line front end. All logic lives in the library; see the
//! crate examples for programmatic use.

use clap::{Args, Parser, Subcommand};
use gapcsp::csp::VecCspInstance;
use gapcsp::pcpp::combined::CombinedVerifier;
use gapcsp::pcpp::linear::LinearVerifier;
use gapcsp::pcpp::measure::{estimate_acceptance, Mode, Verifier};
use gapcsp::pcpp::parallel::ParallelVerifier;
use gapcsp::pcpp::PcppError;
use gapcsp::pipeline::attack::{generate_attack, AttackSpec};
use gapcsp::pipeline::gap::{build_explicit, GapCaps};
use gapcsp::pipeline::proof_io::{proof_from_json, proof_to_json};
use gapcsp::pipeline::PipelineError;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gapcsp", version, about = "structured 3SAT -> vector CSP -> gap CSP reduction chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a reduction.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Split an instance into its linear and parallel sub-instances.
    Split(SplitArgs),
    /// Measure verifier acceptance of a proof.
    Verify(VerifyArgs),
    /// Convert an instance's verifier into a gap CSP.
    Gapify(GapifyArgs),
    /// Generate an (adversarial) proof bundle from an attack spec.
    Attack(AttackArgs),
    /// Run the acceptance check suite.
    Selftest,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Structured 3SAT (DIMACS) to a vector-valued CSP.
    Sat2vec(Sat2vecArgs),
}

#[derive(Args)]
struct Sat2vecArgs {
    /// DIMACS CNF input file.
    cnf: PathBuf,
    /// Number of clause/variable parts.
    #[arg(long, default_value_t = 1)]
    ell: usize,
    /// Output directory for instance.json and plan.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SplitArgs {
    /// Instance JSON file.
    instance: PathBuf,
    #[arg(long)]
    out_linear: Option<PathBuf>,
    #[arg(long)]
    out_parallel: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Proof bundle JSON (see `attack` for generating one).
    #[arg(long)]
    proof: PathBuf,
    #[arg(long, value_parser = ["exhaustive", "sample"])]
    mode: String,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Which verifier to run; `combined` splits the instance itself.
    #[arg(long, default_value = "combined", value_parser = ["combined", "linear", "parallel"])]
    verifier: String,
    /// Write one JSON line per executed descriptor to this file.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct GapifyArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Materialize the gap instance (micro all-linear instances only).
    #[arg(long, conflicts_with = "virtual_mode")]
    explicit: bool,
    /// Report the virtual instance's sizes without materializing.
    #[arg(long = "virtual", conflicts_with = "explicit")]
    virtual_mode: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    /// Attack spec JSON with an embedded `instance` object.
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit codes: 2 usage (via clap), 3 cap violations, 4 internal invariant
/// failures, 1 anything else.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn other(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }
}

impl From<PcppError> for CliError {
    fn from(e: PcppError) -> Self {
        let code = match &e {
            PcppError::CapExceeded { .. } | PcppError::IndexResolutionCap(..) => 3,
            PcppError::Invariant(_) => 4,
            PcppError::Oracle(gapcsp::hadamard::OracleError::DomainExceedsCap(..)) => 3,
            PcppError::Csp(gapcsp::csp::CspError::SearchSpaceExceeded(..)) => 3,
            _ => 1,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Pcpp(inner) => inner.into(),
            other => CliError { code: 1, message: other.to_string() },
        }
    }
}

fn read_json(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::other(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::other(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    std::fs::write(path, text).map_err(|e| CliError::other(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<VecCspInstance, CliError> {
    let json = read_json(path)?;
    VecCspInstance::from_json(&json).map_err(|e| CliError::other(e.to_string()))
}

fn build_verifier(kind: &str, g: VecCspInstance) -> Result<Verifier, CliError> {
    Ok(match kind {
        "linear" => Verifier::Linear(LinearVerifier::new(g)?),
        "parallel" => Verifier::Parallel(ParallelVerifier::new(g)?),
        _ => Verifier::Combined(CombinedVerifier::for_instance(g)?),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Reduce(ReduceCommand::Sat2vec(args)) => {
            let text = std::fs::read_to_string(&args.cnf)
                .map_err(|e| CliError::other(format!("{}: {e}", args.cnf.display())))?;
            let cnf = gapcsp::sat2vec::parse_dimacs(&text)
                .map_err(|e| CliError::other(e.to_string()))?;
            let reduction = gapcsp::sat2vec::reduce::reduce_sat_to_veccsp(&cnf, args.ell)
                .map_err(|e| CliError::other(e.to_string()))?;
            std::fs::create_dir_all(&args.out)
                .map_err(|e| CliError::other(format!("{}: {e}", args.out.display())))?;
            write_json(&args.out.join("instance.json"), &reduction.instance.to_json())?;
            let plan = serde_json::json!({
                "plan": reduction.plan,
                "matchings": reduction.matchings,
            });
            write_json(&args.out.join("plan.json"), &plan)?;
            println!(
                "reduced n={} m={} ell={} s_max={} -> |V|={} |E|={} d={}",
                cnf.n,
                cnf.m(),
                args.ell,
                reduction.plan.s_max,
                reduction.instance.k,
                reduction.instance.constraints.len(),
                reduction.plan.d
            );
            Ok(())
        }
        Command::Split(args) => {
            let g = load_instance(&args.instance)?;
            let violations = g.validate();
            if !violations.is_empty() {
                return Err(CliError {
                    code: 4,
                    message: format!("instance invalid: {}", violations[0]),
                });
            }
            let (gl, gp) = g.split();
            let stem = args.instance.with_extension("");
            let out_l = args
                .out_linear
                .unwrap_or_else(|| stem.with_extension("linear.json"));
            let out_p = args
                .out_parallel
                .unwrap_or_else(|| stem.with_extension("parallel.json"));
            write_json(&out_l, &gl.to_json())?;
            write_json(&out_p, &gp.to_json())?;
            println!(
                "split |E|={} into |E_L|={} ({}) and |E_P|={} ({})",
                g.constraints.len(),
                gl.constraints.len(),
                out_l.display(),
                gp.constraints.len(),
                out_p.display()
            );
            Ok(())
        }
        Command::Verify(args) => {
            let g = load_instance(&args.instance)?;
            let verifier = build_verifier(&args.verifier, g)?;
            let proof = proof_from_json(&read_json(&args.proof)?)?;
            let mode = match args.mode.as_str() {
                "exhaustive" => Mode::exhaustive(),
                _ => Mode::Sampled { trials: args.trials, seed: args.seed },
            };
            if let Some(log_path) = &args.log {
                write_descriptor_log(&verifier, &proof, mode, log_path)?;
            }
            let report = estimate_acceptance(&verifier, &proof, mode, None)?;
            match (&report.exact, &report.estimate) {
                (Some(exact), _) => println!("acceptance {exact}"),
                (None, Some(est)) => println!(
                    "acceptance {:.6} +- {:.6} (trials={}, seed={})",
                    est.estimate, est.radius99, est.trials, est.seed
                ),
                _ => unreachable!(),
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            Ok(())
        }
        Command::Gapify(args) => {
            if !args.explicit && !args.virtual_mode {
                return Err(CliError { code: 1, message: "choose --explicit or --virtual".into() });
            }
            let g = load_instance(&args.instance)?;
            if args.explicit {
                let (gl, gp) = g.split();
                if !gp.constraints.is_empty() {
                    return Err(CliError {
                        code: 3,
                        message:
                            "explicit conversion is only supported for all-linear micro instances"
                                .into(),
                    });
                }
                let verifier = LinearVerifier::new(gl)?;
                let gap = build_explicit(&verifier, GapCaps::default())?;
                let json = gap_to_json(&gap);
                match &args.out {
                    Some(path) => write_json(path, &json)?,
                    None => println!("{}", serde_json::to_string_pretty(&json).unwrap()),
                }
                eprintln!(
                    "explicit gap csp: |V*|={} (pi1 {} + aux {} + supernodes {}), |E*|={}",
                    gap.n_variables(),
                    gap.n_pi1,
                    gap.n_pi2,
                    gap.supernodes.len(),
                    gap.n_constraints()
                );
                Ok(())
            } else {
                let verifier = CombinedVerifier::for_instance(g)?;
                let eps_star = verifier.params.eps
                    / gapcsp::csp::Rational::from_integer(verifier.params.queries as u64);
                let counts = Verifier::Combined(verifier).test_counts();
                let json = serde_json::json!({
                    "mode": "virtual",
                    "eps_star": format!("{}/{}", eps_star.numer(), eps_star.denom()),
                    "per_test_randomness_log2": counts,
                });
                match &args.out {
                    Some(path) => write_json(path, &json)?,
                    None => println!("{}", serde_json::to_string_pretty(&json).unwrap()),
                }
                Ok(())
            }
        }
        Command::Attack(args) => {
            let mut spec_json = read_json(&args.spec)?;
            let instance_json = spec_json
                .as_object_mut()
                .and_then(|o| o.remove("instance"))
                .ok_or_else(|| CliError::other("attack spec needs an embedded \"instance\""))?;
            let g = VecCspInstance::from_json(&instance_json)
                .map_err(|e| CliError::other(e.to_string()))?;
            let spec: AttackSpec = serde_json::from_value(spec_json)
                .map_err(|e| CliError::other(format!("attack spec: {e}")))?;
            let kind = match spec.verifier {
                gapcsp::pipeline::attack::VerifierKind::Linear => "linear",
                gapcsp::pipeline::attack::VerifierKind::Parallel => "parallel",
                gapcsp::pipeline::attack::VerifierKind::Combined => "combined",
            };
            let verifier = build_verifier(kind, g)?;
            let proof = generate_attack(&verifier, &spec)?;
            let json = proof_to_json(&proof);
            match &args.out {
                Some(path) => write_json(path, &json)?,
                None => println!("{}", serde_json::to_string_pretty(&json).unwrap()),
            }
            Ok(())
        }
        Command::Selftest => {
            let results = gapcsp::selftest::run_all();
            let mut all_ok = true;
            for r in &results {
                println!("{r}");
                all_ok &= r.passed;
            }
            if all_ok {
                Ok(())
            } else {
                Err(CliError { code: 1, message: "selftest failed".into() })
            }
        }
    }
}

/// One JSON line per descriptor: every enumerable index in exhaustive
/// mode, every sampled trial otherwise.
fn write_descriptor_log(
    verifier: &Verifier,
    proof: &gapcsp::pcpp::measure::ProofBundle,
    mode: Mode,
    path: &Path,
) -> Result<(), CliError> {
    use gapcsp::pcpp::measure::run_logged;
    use std::io::Write;
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::other(format!("{}: {e}", path.display())))?;
    let mut out = std::io::BufWriter::new(file);
    let mut emit = |line: &serde_json::Value| -> Result<(), CliError> {
        writeln!(out, "{line}").map_err(|e| CliError::other(e.to_string()))
    };
    match mode {
        Mode::Exhaustive { cap_log2 } => {
            for test in verifier.test_ids() {
                let log2 = verifier.count_log2(test);
                if log2 > cap_log2 as u128 {
                    return Err(PcppError::CapExceeded { test, log2, cap: cap_log2 }.into());
                }
                for idx in 0..(1u128 << log2) {
                    let t = verifier.decode(test, idx);
                    let (_, line) = run_logged(verifier, proof, &t, Some(idx))?;
                    emit(&line)?;
                }
            }
        }
        Mode::Sampled { trials, seed } => {
            let mut rng = gapcsp::rng::sampling_rng(seed, 0);
            let ids = verifier.test_ids();
            for _ in 0..trials {
                use rand::Rng;
                let slot = rng.gen_range(0..ids.len());
                let t = verifier.sample(ids[slot], &mut rng);
                let (_, line) = run_logged(verifier, proof, &t, None)?;
                emit(&line)?;
            }
        }
    }
    Ok(())
}

fn gap_to_json(gap: &gapcsp::pipeline::gap::ExplicitGapCsp) -> serde_json::Value {
    serde_json::json!({
        "alphabets": gap
            .csp
            .alphabets
            .iter()
            .map(|a| serde_json::json!(a.values.iter().map(|tuple| {
                tuple.iter().map(|v| v.raw().to_vec()).collect::<Vec<_>>()
            }).collect::<Vec<_>>()))
            .collect::<Vec<_>>(),
        "constraints": gap
            .csp
            .constraints
            .iter()
            .map(|c| serde_json::json!({
                "u": c.u,
                "v": c.v,
                "accepting": c.accepting.iter().collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
        "layout": {
            "n_pi1": gap.n_pi1,
            "n_pi2": gap.n_pi2,
            "f_recorded": gap.f_recorded,
            "g_recorded": gap.g_recorded,
            "supernodes": gap.supernodes,
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
