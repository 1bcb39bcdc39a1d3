use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use spincode::code::{build_code, SpinCode};
use spincode::codefile::{code_to_json, load_code, save_code, CodeFile};
use spincode::gates::{cz_gate, verify_single};
use spincode::group::{enumerate_group, multiplicity_table, GroupLabel, IrrepLabel, MultiplicityTable};
use spincode::linalg::CMatrix;
use spincode::noise::{error_subspace_rank, kl_matrix, rotation_errors};
use spincode::recovery::{fidelity_sweep, gamma_grid, RecoveryMethod, SdpOptions, SweepRow};
use spincode::wigner::{wigner_function, GridSpec, WignerGrid};
use spincode::{Error, SpinJ};

mod selftest;

const EXIT_VALIDATION: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "spincode", version, about = "Qubit codes in a single large spin from binary polyhedral groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodeFormat {
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum WignerState {
    Ket0,
    Ket1,
    Projector,
}

#[derive(Subcommand)]
enum Command {
    /// Irrep multiplicities in each SU(2) irrep restricted to a group.
    Multiplicities {
        #[arg(long)]
        group: GroupLabel,
        #[arg(long)]
        max_dim: usize,
        #[arg(long, value_enum, default_value = "pretty")]
        format: TableFormat,
    },
    /// Builds the codewords of an irrep code.
    Codewords {
        #[arg(long, default_value = "2O")]
        group: GroupLabel,
        /// Spin as "13/2" or "6.5".
        #[arg(long)]
        spin: SpinJ,
        #[arg(long)]
        irrep: IrrepLabel,
        /// Mixing phase for irreps of multiplicity two or more.
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: CodeFormat,
        /// Writes the code file here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Knill-Laflamme check for the errors {I, Jx, Jy, Jz}.
    KlCheck {
        #[arg(long)]
        code: PathBuf,
    },
    /// Logical gate checks for one code, plus the CZ gate when a second code is given.
    GatesVerify {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        code2: Option<PathBuf>,
    },
    /// Entanglement fidelity after recovery across a range of γt.
    FidelitySweep {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value_t = 1e-4)]
        gamma_t_min: f64,
        #[arg(long, default_value_t = 1e-1)]
        gamma_t_max: f64,
        #[arg(long, default_value_t = 25)]
        points: usize,
        #[arg(long)]
        log_grid: bool,
        #[arg(long, default_value = "sdp")]
        method: RecoveryMethod,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Spin Wigner function of a codeword or the code projector on a sphere grid.
    WignerGrid {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, value_enum)]
        state: WignerState,
        #[arg(long, default_value_t = 181)]
        n_theta: usize,
        #[arg(long, default_value_t = 361)]
        n_phi: usize,
        /// CSV output; metadata goes next to it with a .json extension.
        #[arg(long)]
        out: PathBuf,
    },
    /// Runs the built-in invariant suite.
    Selftest,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_VALIDATION) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SolverNotConverged { .. } => ExitCode::from(EXIT_NOT_CONVERGED),
                _ => ExitCode::from(EXIT_VALIDATION),
            }
        }
    }
}

fn run(command: Command) -> spincode::Result<ExitCode> {
    match command {
        Command::Multiplicities { group, max_dim, format } => {
            let g = enumerate_group(group)?;
            let table = multiplicity_table(&g, max_dim)?;
            let text = match format {
                TableFormat::Csv => table_csv(&table),
                TableFormat::Json => serde_json::to_string_pretty(&table)? + "\n",
                TableFormat::Pretty => table_pretty(&table),
            };
            emit(&text)?;
        }
        Command::Codewords { group, spin, irrep, phi, format: CodeFormat::Json, out } => {
            let g = enumerate_group(group)?;
            let code = build_code(spin, &g, irrep, phi)?;
            match out {
                Some(path) => save_code(&code, &path)?,
                None => emit(&(code_to_json(&code)? + "\n"))?,
            }
        }
        Command::KlCheck { code } => {
            let code = load_code(&code)?;
            let report = kl_report(&code)?;
            emit(&(serde_json::to_string_pretty(&report)? + "\n"))?;
        }
        Command::GatesVerify { code, code2 } => {
            let a = load_code(&code)?;
            let octahedral = enumerate_group(GroupLabel::Octahedral)?;
            let mut reports = verify_single(&a, &octahedral)?;
            if let Some(path) = code2 {
                let b = load_code(&path)?;
                reports.extend(verify_single(&b, &octahedral)?);
                reports.push(cz_gate(&a, &b)?.1);
            }
            emit(&(serde_json::to_string_pretty(&reports)? + "\n"))?;
        }
        Command::FidelitySweep {
            code,
            gamma_t_min,
            gamma_t_max,
            points,
            log_grid,
            method,
            out,
            jobs,
        } => {
            let code = load_code(&code)?;
            let grid = gamma_grid(gamma_t_min, gamma_t_max, points, log_grid)?;
            let rows = fidelity_sweep(&code, &grid, method, &SdpOptions::default(), jobs)?;
            let text = sweep_csv(&rows)?;
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => emit(&text)?,
            }
            if let Some(bad) = rows.iter().find(|r| !r.converged()) {
                eprintln!(
                    "error: recovery did not converge at gamma_t = {:.16e}: {}",
                    bad.gamma_t,
                    bad.error.as_deref().unwrap_or("")
                );
                return Ok(ExitCode::from(EXIT_NOT_CONVERGED));
            }
        }
        Command::WignerGrid { code, state, n_theta, n_phi, out } => {
            let code = load_code(&code)?;
            let (op, label) = match state {
                WignerState::Ket0 => (CMatrix::outer(&code.ket0, &code.ket0), "ket0"),
                WignerState::Ket1 => (CMatrix::outer(&code.ket1, &code.ket1), "ket1"),
                WignerState::Projector => (code.projector(), "projector"),
            };
            let grid = wigner_function(&op, code.spin, GridSpec { n_theta, n_phi }, label)?;
            write_wigner(&grid, &code, &out)?;
        }
        Command::Selftest => {
            return Ok(if selftest::run(&mut io::stdout())? {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Writes to standard output; a closed pipe ends output quietly.
fn emit(text: &str) -> spincode::Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn kl_report(code: &SpinCode) -> spincode::Result<serde_json::Value> {
    let kl = kl_matrix(code, &rotation_errors(code.spin))?;
    Ok(json!({
        "spin": code.spin,
        "group": code.group,
        "irrep": code.irrep,
        "errors": kl.labels,
        "violation": kl.violation,
        "jz_expectation": code.jz_expectation(0),
        "perfectness_rank": error_subspace_rank(code)?,
    }))
}

fn table_csv(t: &MultiplicityTable) -> String {
    let mut s = String::from("dim,spin");
    for l in &t.irreps {
        s += &format!(",{l}");
    }
    s.push('\n');
    for r in &t.rows {
        s += &format!("{},{}", r.dim, r.spin);
        for m in &r.multiplicities {
            s += &format!(",{m}");
        }
        s.push('\n');
    }
    s
}

fn table_pretty(t: &MultiplicityTable) -> String {
    let mut s = format!("{} (period {})\n", t.group, t.period);
    s += &format!("{:>5} {:>6}", "dim", "spin");
    for (l, d) in t.irreps.iter().zip(&t.irrep_dims) {
        s += &format!(" {:>7}", format!("{l}[{d}]"));
    }
    s.push('\n');
    for r in &t.rows {
        s += &format!("{:>5} {:>6}", r.dim, r.spin.to_string());
        for m in &r.multiplicities {
            s += &format!(" {m:>7}");
        }
        s.push('\n');
    }
    if !t.period_violations.is_empty() {
        s += &format!("period law violated at dims {:?}\n", t.period_violations);
    }
    s
}

fn sweep_csv(rows: &[SweepRow]) -> spincode::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(io::Error::other(e));
    w.write_record(["gamma_t", "fidelity", "infidelity", "method", "iterations", "residual"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            format!("{:.16e}", r.gamma_t),
            format!("{:.16e}", r.fidelity),
            format!("{:.16e}", r.infidelity),
            r.method.to_string(),
            r.iterations.to_string(),
            format!("{:.16e}", r.residual),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn write_wigner(grid: &WignerGrid, code: &SpinCode, out: &Path) -> spincode::Result<()> {
    let mut w = csv::Writer::from_writer(File::create(out)?);
    let csv_err = |e: csv::Error| Error::Io(io::Error::other(e));
    w.write_record(["theta", "phi", "value"]).map_err(csv_err)?;
    for i in 0..grid.n_theta {
        for k in 0..grid.n_phi {
            w.write_record([
                format!("{:.16e}", grid.theta[i]),
                format!("{:.16e}", grid.phi[k]),
                format!("{:.16e}", grid.value(i, k).re),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    let meta = json!({
        "state": grid.label,
        "code": CodeFile::from(code),
        "n_theta": grid.n_theta,
        "n_phi": grid.n_phi,
        "theta_nodes": "gauss-legendre in cos(theta), theta ascending",
        "phi_nodes": "uniform, phi_k = 2 pi k / n_phi",
        "theta_weights": grid.theta_weights,
        "integral": grid.integral().re,
        "max_imaginary": grid.max_imaginary(),
        "csv": out.file_name().map(|n| n.to_string_lossy().into_owned()),
    });
    let mut f = File::create(out.with_extension("json"))?;
    writeln!(f, "{}", serde_json::to_string_pretty(&meta)?)?;
    Ok(())
}
