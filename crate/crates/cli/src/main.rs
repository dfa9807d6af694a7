use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use mcprep::algorithms::{
    cmx2, cumulants, qcels_estimate, qcels_series, qcm4, sceom_energies, sceom_m_matrix, tau_bound,
    vqe_minimize, SceomOptions, VqeOptions,
};
use mcprep::circuit::{compile, count_resources};
use mcprep::config::{cisd_excitations, hartree_fock, ExcitationOp};
use mcprep::givens::angles_from_coefficients;
use mcprep::io::{
    circuit_from_json, circuit_to_json, parse_excitations, parse_hamiltonian, parse_state_spec,
    report, StateFile,
};
use mcprep::sim::{
    exact_spectrum, moments, prepare, sector_configs, spectral_range, subspace_diag,
    verify_preparation, MAX_MOMENT_ORDER,
};
use mcprep::ssp::plan_ssp;
use mcprep::{Circuit, GateSet, OnConfig, PauliSum, PrepMethod, StateSpec, StateVector};

/// Multiconfigurational state preparation: synthesis, verification and the
/// algorithms that consume prepared states. Every command prints one JSON
/// report; the exit code is 2 when a verification gate fails.
#[derive(Parser)]
#[command(name = "mcprep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize, verify and compile a preparation circuit.
    Synth(SynthArgs),
    /// Simulate a circuit and compare it with a target state.
    Verify {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Gate counts and depth of a circuit, optionally after compilation.
    Resources {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        gateset: Option<GateSet>,
    },
    /// Optimize the rotation angles of a GR or SSP ansatz over the state spec's configurations.
    Vqe {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        ham: PathBuf,
        #[arg(long, default_value = "gr")]
        method: PrepMethod,
        #[arg(long, default_value_t = 3)]
        restarts: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Hamiltonian moments, cumulants and the QCM4 and CMX2 energies.
    Moments {
        #[command(flatten)]
        state: StateInput,
        #[arg(long)]
        ham: PathBuf,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Time series and QCELS energy estimate.
    Qcels {
        #[command(flatten)]
        state: StateInput,
        #[arg(long)]
        ham: PathBuf,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        n: usize,
    },
    /// Excited-state M matrix and excitation energies.
    Sceom {
        #[arg(long)]
        ham: PathBuf,
        /// Reference configuration as a bit string.
        #[arg(long)]
        hf: String,
        /// `cisd` or a file of `a,b -> c,d` lines.
        #[arg(long, default_value = "cisd")]
        excitations: String,
        /// Bound ansatz circuit; the identity when omitted.
        #[arg(long)]
        ansatz: Option<PathBuf>,
        #[arg(long, default_value = "ssp")]
        prep: PrepMethod,
        #[arg(long, default_value = "zz")]
        gateset: GateSet,
    },
    /// Exact spectrum, optionally restricted to one Hamming-weight sector.
    Spectrum {
        #[arg(long)]
        ham: PathBuf,
        #[arg(long)]
        sector: Option<usize>,
    },
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value = "ssp")]
    method: PrepMethod,
    #[arg(
        long,
        required_unless_present = "spec_dir",
        conflicts_with = "spec_dir"
    )]
    spec: Option<PathBuf>,
    /// Synthesize every file in a directory; `--out` then names a directory.
    #[arg(long)]
    spec_dir: Option<PathBuf>,
    #[arg(long, default_value = "zz")]
    gateset: GateSet,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct StateInput {
    /// State spec file.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Bound circuit JSON, run on |0…0>.
    #[arg(long)]
    circuit: Option<PathBuf>,
}

/// A report and whether its verification gates passed.
struct Outcome {
    report: Value,
    passed: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self {
            report,
            passed: true,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_ham(path: &Path) -> Result<PauliSum> {
    parse_hamiltonian(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_spec(path: &Path) -> Result<StateFile> {
    parse_state_spec(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    circuit_from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_state(input: &StateInput) -> Result<StateVector> {
    match (&input.state, &input.circuit) {
        (Some(p), _) => Ok(StateVector::from_spec(&load_spec(p)?.spec)?),
        (None, Some(p)) => Ok(prepare(&load_circuit(p)?)?),
        (None, None) => bail!("one of --state or --circuit is required"),
    }
}

/// The state spec as the method expects it: GR puts the largest coefficient first
/// unless the file asks to keep its order.
fn method_spec(file: &StateFile, method: PrepMethod) -> StateSpec {
    if method == PrepMethod::Gr && !file.ordered {
        file.spec.reference_first()
    } else {
        file.spec.clone()
    }
}

fn synth_one(
    file: &StateFile,
    method: PrepMethod,
    gateset: GateSet,
) -> Result<(Value, Option<Circuit>)> {
    let spec = method_spec(file, method);
    let raw = method.synthesize(&spec)?;
    let raw_check = verify_preparation(&raw, &spec)?;
    let compiled = compile(&raw, gateset)?;
    let check = verify_preparation(&compiled, &spec)?;
    let passed = raw_check.passed && check.passed;
    let res = count_resources(&compiled);
    let body = json!({
        "method": method,
        "gateset": gateset.name(),
        "n_qubits": spec.n_qubits(),
        "configurations": spec.len(),
        "rotations": spec.len() - 1,
        "verification": check,
        "uncompiled_verification": raw_check,
        "two_qubit_count": res.two_qubit_total,
        "zzmax_count": res.count("ZZMax"),
        "cnot_count": res.count("CNOT"),
        "resources": res,
        "passed": passed,
    });
    Ok((body, passed.then_some(compiled)))
}

fn write_circuit(path: &Path, c: &Circuit) -> Result<()> {
    let text = serde_json::to_string_pretty(&circuit_to_json(c))?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn synth(args: &SynthArgs) -> Result<Outcome> {
    if let Some(dir) = &args.spec_dir {
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)
            .with_context(|| format!("listing {}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        paths.sort();
        if let Some(out) = &args.out {
            fs::create_dir_all(out)?;
        }
        let mut results = Vec::new();
        let mut all = true;
        for p in paths {
            let (mut body, circuit) = synth_one(&load_spec(&p)?, args.method, args.gateset)?;
            body["spec"] = json!(p.display().to_string());
            if let (Some(out), Some(c)) = (&args.out, &circuit) {
                let stem = p
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                let target = out.join(format!("{stem}.json"));
                write_circuit(&target, c)?;
                body["out"] = json!(target.display().to_string());
            }
            all &= circuit.is_some();
            results.push(body);
        }
        return Ok(Outcome {
            report: report("synth", json!({ "results": results, "passed": all })),
            passed: all,
        });
    }
    let path = args
        .spec
        .as_ref()
        .expect("clap requires --spec without --spec-dir");
    let (mut body, circuit) = synth_one(&load_spec(path)?, args.method, args.gateset)?;
    let passed = circuit.is_some();
    if let Some(c) = circuit {
        match &args.out {
            Some(out) => {
                write_circuit(out, &c)?;
                body["out"] = json!(out.display().to_string());
            }
            None => body["circuit"] = circuit_to_json(&c),
        }
    }
    Ok(Outcome {
        report: report("synth", body),
        passed,
    })
}

fn verify(circuit: &Path, spec: &Path) -> Result<Outcome> {
    let v = verify_preparation(&load_circuit(circuit)?, &load_spec(spec)?.spec)?;
    let passed = v.passed;
    Ok(Outcome {
        report: report("verify", json!(v)),
        passed,
    })
}

fn resources(circuit: &Path, gateset: Option<GateSet>) -> Result<Outcome> {
    let c = load_circuit(circuit)?;
    let mut body = json!({ "n_qubits": c.n_qubits(), "resources": count_resources(&c) });
    if let Some(set) = gateset {
        body["gateset"] = json!(set.name());
        body["compiled"] = json!(count_resources(&compile(&c, set)?));
    }
    Ok(Outcome::ok(report("resources", body)))
}

fn vqe(spec: &Path, ham: &Path, method: PrepMethod, restarts: usize, seed: u64) -> Result<Outcome> {
    let file = load_spec(spec)?;
    let spec = method_spec(&file, method);
    let h = load_ham(ham)?;
    let configs = spec.configs();
    let ansatz = method.symbolic(&configs, "t")?;
    let theta0 = match method {
        PrepMethod::Gr => angles_from_coefficients(&spec.coefficients()).ok(),
        PrepMethod::Ssp => plan_ssp(&configs)?.angles(&spec).ok(),
    };
    let opts = VqeOptions {
        restarts,
        seed,
        ..VqeOptions::default()
    };
    let r = vqe_minimize(&ansatz, &h, theta0.as_deref(), &opts)?;
    let bound = subspace_diag(&h, &configs)?.ground_energy();
    let passed = r.energy >= bound - 1e-9;
    let coefficients: Vec<Value> = configs
        .iter()
        .map(|x| {
            let a = r.state.amplitude(x);
            json!({ "config": x.to_string(), "amplitude": [a.re, a.im] })
        })
        .collect();
    Ok(Outcome {
        report: report(
            "vqe",
            json!({
                "method": method,
                "energy": r.energy,
                "subspace_ground": bound,
                "gap": r.energy - bound,
                "parameters": r.parameters,
                "coefficients": coefficients,
                "converged": r.converged,
                "iterations": r.iterations,
                "evaluations": r.evaluations,
                "passed": passed,
            }),
        ),
        passed,
    })
}

fn estimate(result: mcprep::Result<f64>) -> Value {
    match result {
        Ok(e) => json!({ "energy": e }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn moments_cmd(state: &StateInput, ham: &Path, order: usize) -> Result<Outcome> {
    if !(1..=MAX_MOMENT_ORDER).contains(&order) {
        bail!("--order must be between 1 and {MAX_MOMENT_ORDER}");
    }
    let psi = load_state(state)?;
    let h = load_ham(ham)?;
    let m = moments(&psi, &h, order)?;
    let mut body = json!({ "order": order, "moments": m });
    if order >= 4 {
        let set = cumulants(&[m[0], m[1], m[2], m[3]]);
        body["cumulants"] = json!(set.c);
        body["qcm4"] = estimate(qcm4(&set));
        body["cmx2"] = estimate(cmx2(&set));
    }
    let passed = m.len() < 2 || m[1] - m[0] * m[0] >= -1e-10;
    body["passed"] = json!(passed);
    Ok(Outcome {
        report: report("moments", body),
        passed,
    })
}

fn qcels(state: &StateInput, ham: &Path, tau: f64, n: usize) -> Result<Outcome> {
    let psi = load_state(state)?;
    let h = load_ham(ham)?;
    let series = qcels_series(&psi, &h, tau, n)?;
    let e = qcels_estimate(&series)?;
    let (lo, hi) = spectral_range(&h)?;
    let bounded = series.z.iter().all(|z| z.norm() <= 1.0 + 1e-10);
    // The estimate targets the eigenvalue carrying the most weight in the state.
    let dominant = exact_spectrum(&h).ok().map(|s| {
        let weight = |v: &[Complex64]| {
            psi.amplitudes()
                .iter()
                .zip(v)
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>()
                .norm_sqr()
        };
        let k = (0..s.len())
            .max_by(|&a, &b| weight(&s.vectors[a]).total_cmp(&weight(&s.vectors[b])))
            .expect("nonempty spectrum");
        (s.values[k], weight(&s.vectors[k]))
    });
    let z: Vec<[f64; 2]> = series.z.iter().map(|z| [z.re, z.im]).collect();
    Ok(Outcome {
        report: report(
            "qcels",
            json!({
                "tau": tau,
                "n": n,
                "t_max": series.t_max(),
                "tau_bound": tau_bound(&h)?,
                "shift": series.shift,
                "series": z,
                "energy": e,
                "spectrum_min": lo,
                "spectrum_max": hi,
                "dominant_eigenvalue": dominant.map(|d| d.0),
                "dominant_weight": dominant.map(|d| d.1),
                "error": dominant.map(|d| e - d.0),
                "passed": bounded,
            }),
        ),
        passed: bounded,
    })
}

fn load_excitations(arg: &str, hf: &OnConfig) -> Result<Vec<ExcitationOp>> {
    if arg == "cisd" {
        let (n_orb, n_elec) = (hf.len() / 2, hf.weight());
        if hf.len() % 2 == 1 || hartree_fock(n_orb, n_elec)? != *hf {
            bail!(
                "cisd excitations need the closed-shell reference with the lowest orbitals filled"
            );
        }
        return Ok(cisd_excitations(n_orb, n_elec)?);
    }
    let path = Path::new(arg);
    parse_excitations(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn sceom(
    ham: &Path,
    hf: &str,
    excitations: &str,
    ansatz: Option<&Path>,
    prep: PrepMethod,
    gateset: GateSet,
) -> Result<Outcome> {
    let h = load_ham(ham)?;
    let hf: OnConfig = hf.parse()?;
    let ops = load_excitations(excitations, &hf)?;
    let u = match ansatz {
        Some(p) => load_circuit(p)?,
        None => Circuit::new(hf.len()),
    };
    let opts = SceomOptions {
        method: prep,
        gate_set: gateset,
    };
    let m = sceom_m_matrix(&h, &hf, &ops, &u, &opts)?;
    let energies = sceom_energies(&m)?;
    let asymmetry = m.asymmetry();
    let passed = asymmetry < 1e-9;
    let totals: Vec<f64> = energies.iter().map(|w| w + m.e_gr).collect();
    Ok(Outcome {
        report: report(
            "sceom",
            json!({
                "prep": prep,
                "gateset": gateset.name(),
                "e_gr": m.e_gr,
                "excitation_energies": energies,
                "total_energies": totals,
                "asymmetry": asymmetry,
                "configs": m.configs.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "signs": m.signs,
                "m": m.m,
                "elements": m.elements,
                "passed": passed,
            }),
        ),
        passed,
    })
}

fn spectrum(ham: &Path, sector: Option<usize>) -> Result<Outcome> {
    let h = load_ham(ham)?;
    let values = match sector {
        Some(w) => {
            if w > h.n_qubits() {
                bail!("sector {w} exceeds {} qubits", h.n_qubits());
            }
            subspace_diag(&h, &sector_configs(h.n_qubits(), w))?.values
        }
        None => exact_spectrum(&h)?.values,
    };
    Ok(Outcome::ok(report(
        "spectrum",
        json!({ "n_qubits": h.n_qubits(), "sector": sector, "ground": values[0], "values": values }),
    )))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Synth(args) => synth(&args),
        Command::Verify { circuit, spec } => verify(&circuit, &spec),
        Command::Resources { circuit, gateset } => resources(&circuit, gateset),
        Command::Vqe {
            spec,
            ham,
            method,
            restarts,
            seed,
        } => vqe(&spec, &ham, method, restarts, seed),
        Command::Moments { state, ham, order } => moments_cmd(&state, &ham, order),
        Command::Qcels { state, ham, tau, n } => qcels(&state, &ham, tau, n),
        Command::Sceom {
            ham,
            hf,
            excitations,
            ansatz,
            prep,
            gateset,
        } => sceom(&ham, &hf, &excitations, ansatz.as_deref(), prep, gateset),
        Command::Spectrum { ham, sector } => spectrum(&ham, sector),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.report).expect("reports serialize");
            // A closed pipe on stdout is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if out.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("mcprep: verification failed");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("mcprep: {e:#}");
            ExitCode::FAILURE
        }
    }
}
