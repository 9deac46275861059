//! Command-line front end: parse, build, classify, diagonalize and verify operator files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use mfsolve::builder::build_class_k;
use mfsolve::detector::{classify, DetectorOptions, Verdict, RECONSTRUCTION_TOL};
use mfsolve::group::matrix_distance;
use mfsolve::ops::text::{format_coefficient, format_polynomial, parse_polynomial, parse_polynomial_list};
use mfsolve::ops::{jordan_wigner, AlgebraBasis, Family, DEFAULT_CLOSURE_CAP};
use mfsolve::rep::{exact_eigensystem, mf_state_check, to_matrix};
use mfsolve::serial::{default_algebra, ReportDoc, SpecDoc};
use mfsolve::{Error, ErrorCategory, Polynomial};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Parser, Debug)]
#[command(name = "mfsolve", version, about = "Mean-field solvability of small Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Operator family of the input (fermionic, majorana, pauli); overrides the file directive.
    #[arg(long, global = true)]
    family: Option<Family>,

    /// Number of modes or qubits; overrides the file directive.
    #[arg(long, global = true)]
    modes: Option<usize>,

    /// Seed for every random restart.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Random restarts per optimization.
    #[arg(long, global = true, default_value_t = 32)]
    budget: usize,

    /// Zero-variance threshold relative to ||H||^2.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_variance: f64,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical form of an operator file.
    Parse { input: PathBuf },
    /// Build the Hamiltonian of a class specification (JSON).
    Generate { spec: PathBuf },
    /// Classify a Hamiltonian and write a JSON report.
    Classify {
        input: PathBuf,
        /// Rotation algebra: u, so, so-odd or su2. Defaults by family.
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Exact eigenvalues with a mean-field check of each eigenvector.
    Solve { input: PathBuf },
    /// Compare a Hamiltonian with the one a specification builds.
    Verify { input: PathBuf, spec: PathBuf },
    /// Jordan-Wigner image of a fermionic or Majorana file.
    Jw { input: PathBuf },
    /// Lie closure of anti-hermitian generators separated by `---` lines.
    Closure { input: PathBuf },
}

enum Failure {
    Lib(Error),
    Io(String),
    Inconclusive(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(e) => match e.category() {
                ErrorCategory::Parse => 2,
                ErrorCategory::Constraint => 3,
                ErrorCategory::OracleCap => 4,
                _ => 1,
            },
            Failure::Inconclusive(_) => 5,
            Failure::Io(_) | Failure::Mismatch(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(m) | Failure::Inconclusive(m) | Failure::Mismatch(m) => f.write_str(m),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Everything that determines a run's output.
#[derive(Serialize)]
struct Provenance {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    inputs: Vec<InputDigest>,
    seed: u64,
    budget: usize,
    tol_variance: f64,
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

impl Provenance {
    fn header(&self) -> String {
        let mut s = format!("# {} {} {}\n", self.tool, self.version, self.command);
        for i in &self.inputs {
            let _ = writeln!(s, "# input: {} sha256 {}", i.path, i.sha256);
        }
        let _ = writeln!(
            s,
            "# seed {} budget {} tol-variance {:e}",
            self.seed, self.budget, self.tol_variance
        );
        s
    }
}

struct Run {
    cli: Cli,
    inputs: Vec<InputDigest>,
}

impl Run {
    fn read(&mut self, path: &Path) -> Outcome<String> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: format!("{:x}", Sha256::digest(text.as_bytes())),
        });
        Ok(text)
    }

    fn polynomial(&mut self, path: &Path) -> Outcome<Polynomial> {
        let text = self.read(path)?;
        Ok(parse_polynomial(&text, self.cli.family, self.cli.modes)?)
    }

    fn provenance(&self, command: &'static str) -> Provenance {
        Provenance {
            tool: "mfsolve",
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs: self
                .inputs
                .iter()
                .map(|i| InputDigest {
                    path: i.path.clone(),
                    sha256: i.sha256.clone(),
                })
                .collect(),
            seed: self.cli.seed,
            budget: self.cli.budget,
            tol_variance: self.cli.tol_variance,
        }
    }

    fn emit(&self, body: &str) -> Outcome<()> {
        match &self.cli.out {
            Some(path) => std::fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }

    fn emit_json<T: Serialize>(&self, command: &'static str, key: &str, value: &T) -> Outcome<()> {
        let mut doc = serde_json::Map::new();
        doc.insert(
            "provenance".into(),
            serde_json::to_value(self.provenance(command)).map_err(Error::from)?,
        );
        doc.insert(key.into(), serde_json::to_value(value).map_err(Error::from)?);
        let mut text = serde_json::to_string_pretty(&doc).map_err(Error::from)?;
        text.push('\n');
        self.emit(&text)
    }
}

fn spec_from(run: &mut Run, path: &Path) -> Outcome<mfsolve::builder::ClassSpec<f64>> {
    let text = run.read(path)?;
    Ok(SpecDoc::from_json(&text)?.to_spec()?)
}

fn execute(run: &mut Run) -> Outcome<()> {
    let command = std::mem::replace(&mut run.cli.command, Command::Parse { input: PathBuf::new() });
    match command {
        Command::Parse { input } => {
            let p = run.polynomial(&input)?;
            let mut body = run.provenance("parse").header();
            let _ = writeln!(body, "# terms: {}", p.len());
            body.push_str(&format_polynomial(&p));
            run.emit(&body)
        }
        Command::Generate { spec } => {
            let spec = spec_from(run, &spec)?;
            let h = build_class_k(&spec)?;
            let mut body = run.provenance("generate").header();
            let _ = writeln!(body, "# class: {}", spec.class());
            body.push_str(&format_polynomial(&h));
            run.emit(&body)
        }
        Command::Classify { input, algebra } => {
            let h = run.polynomial(&input)?;
            let name = algebra.unwrap_or_else(|| default_algebra(h.family()).to_string());
            let basis = Arc::new(AlgebraBasis::by_name(&name, h.family(), h.modes())?);
            let opts = DetectorOptions {
                budget: run.cli.budget,
                seed: run.cli.seed,
                tol_variance: run.cli.tol_variance,
            };
            let report = classify(&h, basis.clone(), &opts)?;
            let doc = ReportDoc::from_report(&report, &basis)?;
            run.emit_json("classify", "report", &doc)?;
            match report.verdict {
                Verdict::Inconclusive { level } => Err(Failure::Inconclusive(format!(
                    "classification inconclusive at level {level}"
                ))),
                _ => Ok(()),
            }
        }
        Command::Solve { input } => {
            let h = run.polynomial(&input)?;
            let eig = exact_eigensystem(&to_matrix(&h, h.modes())?)?;
            let mut body = run.provenance("solve").header();
            body.push_str("# k energy degeneracy mf defect\n");
            for group in eig.degeneracy_groups() {
                let size = group.len();
                for k in group {
                    let check = mf_state_check(&eig.vector(k), h.family(), h.modes())?;
                    let _ = writeln!(body, "{k} {:.12} {size} {} {:.3e}", eig.values[k], check.is_mf, check.defect);
                }
            }
            run.emit(&body)
        }
        Command::Verify { input, spec } => {
            let h = run.polynomial(&input)?;
            let spec = spec_from(run, &spec)?;
            if spec.modes() != h.modes() {
                return Err(Error::ModeMismatch {
                    left: spec.modes(),
                    right: h.modes(),
                }
                .into());
            }
            let built = build_class_k(&spec)?;
            let a = to_matrix(&h, h.modes())?.matrix;
            let b = to_matrix(&built, h.modes())?.matrix;
            let norm = exact_eigensystem(&to_matrix(&h, h.modes())?)?.norm();
            let distance = matrix_distance(&a, &b);
            let tol = RECONSTRUCTION_TOL * norm.max(1.0);
            let verdict = if distance <= tol { "PASS" } else { "FAIL" };
            let mut body = run.provenance("verify").header();
            let _ = writeln!(body, "{verdict} distance {distance:.3e} tolerance {tol:.3e}");
            run.emit(&body)?;
            if distance <= tol {
                Ok(())
            } else {
                Err(Failure::Mismatch(format!("matrix distance {distance:.3e} above {tol:.3e}")))
            }
        }
        Command::Jw { input } => {
            let p = run.polynomial(&input)?;
            let q = jordan_wigner(&p)?;
            let mut body = run.provenance("jw").header();
            body.push_str(&format_polynomial(&q));
            run.emit(&body)
        }
        Command::Closure { input } => {
            let text = run.read(&input)?;
            let seed = parse_polynomial_list::<f64>(&text, run.cli.family, run.cli.modes)?;
            let basis = AlgebraBasis::lie_closure(&seed, DEFAULT_CLOSURE_CAP)?;
            let summary = ClosureSummary {
                family: basis.family(),
                modes: basis.modes(),
                dimension: basis.dim(),
                max_structure_imag: basis.max_structure_imag(),
                jacobi_defect: basis.jacobi_defect(),
                csa_dimension: basis.csa_dim(),
                generators: basis
                    .generators()
                    .iter()
                    .zip(basis.labels())
                    .enumerate()
                    .map(|(k, (g, label))| GeneratorSummary {
                        label: label.clone(),
                        csa: k < basis.csa_dim(),
                        terms: g
                            .terms()
                            .map(|(s, c)| format!("{} : {s}", format_coefficient(*c)))
                            .collect(),
                    })
                    .collect(),
            };
            run.emit_json("closure", "algebra", &summary)
        }
    }
}

#[derive(Serialize)]
struct ClosureSummary {
    family: Family,
    modes: usize,
    dimension: usize,
    max_structure_imag: f64,
    jacobi_defect: f64,
    csa_dimension: usize,
    generators: Vec<GeneratorSummary>,
}

#[derive(Serialize)]
struct GeneratorSummary {
    label: String,
    csa: bool,
    terms: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut run = Run { cli, inputs: Vec::new() };
    match execute(&mut run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mfsolve: {f}");
            ExitCode::from(f.code())
        }
    }
}
