//! Entanglement fidelity after recovery: the optimal recovery channel by a
//! certified ADMM solution of the recovery SDP, and the transpose (Petz)
//! channel as a baseline.
//!
//! A recovery R maps the spin space (dimension d) back to the qubit. Its Choi
//! matrix uses the input ⊗ output ordering of [`QuantumChannel`], so it is
//! 2d × 2d with the spin index slow and the qubit index fast. For effective
//! Kraus operators A_k = K_k·V the fidelity is
//! F(R) = Σ_{k,l} |tr(R_l A_k)/2|² = ¼·tr(C_R·M) with M = Σ_k y_k y_k†,
//! y_k[(i, a)] = conj(A_k[i, a]).

use rayon::prelude::*;
use serde::Serialize;

use crate::code::SpinCode;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, herm_eig_with_guess, CMatrix, EigDecomposition, C64, ZERO};
use crate::noise::{lindblad_channel, QuantumChannel};

/// Entanglement fidelity of a qubit channel with a maximally entangled reference.
pub fn entanglement_fidelity(channel: &QuantumChannel) -> Result<f64> {
    if channel.d_in() != 2 || channel.d_out() != 2 {
        return Err(Error::Dimension(format!(
            "entanglement fidelity needs a qubit channel, got {}->{}",
            channel.d_in(),
            channel.d_out()
        )));
    }
    Ok(channel.kraus().iter().map(|k| (k.trace() / 2.0).norm_sqr()).sum())
}

#[derive(Clone, Debug)]
pub struct RecoveryProblem {
    pub encoder: CMatrix,
    pub noise: QuantumChannel,
    /// Kraus operators of noise ∘ encode, each d × 2.
    pub effective: Vec<CMatrix>,
}

impl RecoveryProblem {
    pub fn new(encoder: CMatrix, noise: QuantumChannel) -> Result<Self> {
        let d = encoder.rows();
        if encoder.cols() != 2 {
            return Err(Error::Dimension(format!("encoder has {} columns, expected 2", encoder.cols())));
        }
        if noise.d_in() != d || noise.d_out() != d {
            return Err(Error::Dimension(format!(
                "noise acts {}->{}, encoder dimension is {d}",
                noise.d_in(),
                noise.d_out()
            )));
        }
        let gram = encoder.adjoint().matmul(&encoder);
        let dev = gram.max_abs_diff(&CMatrix::identity(2));
        if dev > 1e-12 {
            return Err(Error::InvalidCode(format!("encoder is not an isometry (deviation {dev:e})")));
        }
        let effective = noise.kraus().iter().map(|k| k.matmul(&encoder)).collect();
        Ok(RecoveryProblem {
            encoder,
            noise,
            effective,
        })
    }

    pub fn from_code(code: &SpinCode, noise: QuantumChannel) -> Result<Self> {
        Self::new(code.encoder(), noise)
    }

    pub fn dim(&self) -> usize {
        self.encoder.rows()
    }

    /// M = Σ_k y_k y_k†, symmetrized.
    pub fn fidelity_observable(&self) -> CMatrix {
        let d = self.dim();
        let n = 2 * d;
        let mut m = CMatrix::zeros(n, n);
        for a in &self.effective {
            let y: Vec<C64> = (0..n).map(|r| a[(r / 2, r % 2)].conj()).collect();
            m += &CMatrix::outer(&y, &y);
        }
        m.hermitian_part()
    }

    /// Fidelity of a recovery given as a channel from the spin to the qubit.
    pub fn fidelity_of(&self, recovery: &QuantumChannel) -> Result<f64> {
        if recovery.d_in() != self.dim() || recovery.d_out() != 2 {
            return Err(Error::Dimension("recovery must map the spin space to a qubit".into()));
        }
        let mut f = 0.0;
        for r in recovery.kraus() {
            for a in &self.effective {
                f += (r.matmul(a).trace() / 2.0).norm_sqr();
            }
        }
        Ok(f)
    }
}

/// Partial trace over the qubit (fast) factor of a 2d × 2d matrix.
pub fn trace_out_qubit(x: &CMatrix) -> CMatrix {
    let d = x.rows() / 2;
    CMatrix::from_fn(d, d, |i, j| x[(2 * i, 2 * j)] + x[(2 * i + 1, 2 * j + 1)])
}

/// T ⊗ 𝟙₂ in the spin-slow ordering.
pub fn tensor_qubit_identity(t: &CMatrix) -> CMatrix {
    let d = t.rows();
    CMatrix::from_fn(2 * d, 2 * d, |r, c| if r % 2 == c % 2 { t[(r / 2, c / 2)] } else { ZERO })
}

#[derive(Clone, Debug)]
pub struct SdpOptions {
    pub max_iterations: usize,
    /// Bound on primal and dual ADMM residuals.
    pub tolerance: f64,
    /// Bound on the certified duality gap in fidelity.
    pub gap_tolerance: f64,
    pub initial_penalty: f64,
    /// Iterations between duality-gap certificates.
    pub check_every: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            max_iterations: 50_000,
            tolerance: 1e-8,
            gap_tolerance: 1e-10,
            initial_penalty: 1.0,
            check_every: 25,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SdpSolution {
    /// Choi matrix of the recovery (exactly trace preserving).
    pub choi: CMatrix,
    /// Fidelity achieved by `choi`.
    pub fidelity: f64,
    /// Dual bound: no recovery exceeds this fidelity.
    pub upper_bound: f64,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

impl SdpSolution {
    pub fn gap(&self) -> f64 {
        self.upper_bound - self.fidelity
    }

    pub fn recovery_channel(&self) -> Result<QuantumChannel> {
        let d = self.choi.rows() / 2;
        QuantumChannel::from_choi(&self.choi, d, 2)
    }
}

/// Independent feasibility check of a recovery Choi matrix.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionCheck {
    pub min_eigenvalue: f64,
    pub trace_residual: f64,
    pub fidelity: f64,
}

pub fn verify_solution(problem: &RecoveryProblem, choi: &CMatrix) -> Result<SolutionCheck> {
    let d = problem.dim();
    let min_eigenvalue = herm_eig(&choi.hermitian_part())?.eigenvalues[0];
    let trace_residual = trace_out_qubit(choi).max_abs_diff(&CMatrix::identity(d));
    let recovery = QuantumChannel::from_choi(choi, d, 2)?;
    Ok(SolutionCheck {
        min_eigenvalue,
        trace_residual,
        fidelity: problem.fidelity_of(&recovery)?,
    })
}

/// Inverse square root on eigenvalues above `cutoff`, zero elsewhere.
fn pinv_sqrt(eig: &EigDecomposition, cutoff: f64) -> CMatrix {
    eig.map(|l| if l > cutoff { C64::new(1.0 / l.sqrt(), 0.0) } else { ZERO })
}

/// Certified primal point and dual bound from an ADMM iterate.
struct Certificate {
    choi: CMatrix,
    lower: f64,
    upper: f64,
}

fn certificate(z: &CMatrix, u: &CMatrix, m: &CMatrix, rho: f64) -> Result<Option<Certificate>> {
    let d = z.rows() / 2;
    let t = trace_out_qubit(z).hermitian_part();
    let te = herm_eig(&t)?;
    if te.eigenvalues[0] <= 1e-12 {
        return Ok(None);
    }
    let s = tensor_qubit_identity(&pinv_sqrt(&te, 0.0));
    let choi = s.matmul(z).matmul(&s).hermitian_part();
    let lower = choi.inner(m).re / 4.0;

    let mut y = trace_out_qubit(&(m - &u.scale_real(rho))).scale_real(0.5).hermitian_part();
    let slack = &tensor_qubit_identity(&y) - m;
    let shift = herm_eig(&slack.hermitian_part())?.eigenvalues[0];
    if shift < 0.0 {
        y = &y + &CMatrix::identity(d).scale_real(-shift);
    }
    let upper = y.trace().re / 4.0;
    Ok(Some(Certificate { choi, lower, upper }))
}

/// Projection onto the positive semidefinite cone, reusing the previous eigenbasis.
fn project_psd(a: &CMatrix, guess: Option<&CMatrix>) -> Result<(CMatrix, CMatrix)> {
    let eig = match guess {
        Some(g) => herm_eig_with_guess(a, g)?,
        None => herm_eig(a)?,
    };
    let p = eig.map(|l| C64::new(l.max(0.0), 0.0)).hermitian_part();
    Ok((p, eig.eigenvectors))
}

/// Maximizes ¼·tr(C·M) over Choi matrices C ⪰ 0 with Tr_qubit C = 𝟙_d.
///
/// Scaled ADMM on the split X = Z with X in the trace-preserving affine set
/// and Z in the PSD cone; the penalty ρ is rebalanced when one residual
/// exceeds the other tenfold. Every `check_every` iterations the iterate is
/// turned into an exactly feasible recovery (lower bound) and a feasible dual
/// point (upper bound); the solver returns once both residuals and the gap
/// are below tolerance.
pub fn optimal_recovery(problem: &RecoveryProblem, options: &SdpOptions) -> Result<SdpSolution> {
    let d = problem.dim();
    let n = 2 * d;
    let m = problem.fidelity_observable();
    let id_d = CMatrix::identity(d);
    let project_affine = |y: &CMatrix| -> CMatrix {
        let excess = &trace_out_qubit(y) - &id_d;
        (y - &tensor_qubit_identity(&excess).scale_real(0.5)).hermitian_part()
    };

    let (baseline, _) = transpose_recovery(problem)?;
    let mut z = baseline.choi().clone();
    let mut u = CMatrix::zeros(n, n);
    let mut rho = options.initial_penalty;
    let mut basis: Option<CMatrix> = None;
    let (mut r_norm, mut s_norm) = (f64::INFINITY, f64::INFINITY);
    let mut best: Option<Certificate> = None;

    for iter in 1..=options.max_iterations {
        let x = project_affine(&(&(&z - &u) + &m.scale_real(1.0 / rho)));
        let z_prev = z;
        // Refresh from scratch periodically so the reused basis stays unitary.
        let guess = if iter % 50 == 0 { None } else { basis.as_ref() };
        let (z_new, vecs) = project_psd(&(&x + &u), guess)?;
        z = z_new;
        basis = Some(vecs);
        let diff = &x - &z;
        u += &diff;
        r_norm = diff.frobenius_norm();
        s_norm = rho * (&z - &z_prev).frobenius_norm();

        if iter % options.check_every == 0 || iter == options.max_iterations {
            if let Some(c) = certificate(&z, &u, &m, rho)? {
                let better = best.as_ref().is_none_or(|b| c.lower > b.lower);
                let upper = best.as_ref().map_or(c.upper, |b| b.upper.min(c.upper));
                if better {
                    best = Some(Certificate { upper, ..c });
                } else if let Some(b) = best.as_mut() {
                    b.upper = upper;
                }
            }
            if let Some(b) = &best {
                if r_norm < options.tolerance && s_norm < options.tolerance && b.upper - b.lower < options.gap_tolerance {
                    return Ok(SdpSolution {
                        choi: b.choi.clone(),
                        fidelity: b.lower,
                        upper_bound: b.upper,
                        iterations: iter,
                        primal_residual: r_norm,
                        dual_residual: s_norm,
                    });
                }
            }
            if r_norm > 10.0 * s_norm {
                rho *= 2.0;
                u = u.scale_real(0.5);
            } else if s_norm > 10.0 * r_norm {
                rho /= 2.0;
                u = u.scale_real(2.0);
            }
        }
    }
    Err(Error::SolverNotConverged {
        iterations: options.max_iterations,
        primal_residual: r_norm,
        dual_residual: s_norm,
        gap: best.map_or(f64::INFINITY, |b| b.upper - b.lower),
    })
}

/// Transpose channel R_k = (1/√2)·A_k†·N(σ)^{-1/2} for the maximally mixed
/// code state, N(σ) = ½ Σ A_k A_k†, completed to a trace-preserving map on
/// the kernel of N(σ).
pub fn transpose_recovery(problem: &RecoveryProblem) -> Result<(QuantumChannel, f64)> {
    let d = problem.dim();
    let mut ns = CMatrix::zeros(d, d);
    for a in &problem.effective {
        ns += &a.matmul(&a.adjoint());
    }
    let ns = ns.scale_real(0.5).hermitian_part();
    let eig = herm_eig(&ns)?;
    let cutoff = 1e-12;
    let inv_sqrt = pinv_sqrt(&eig, cutoff);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut kraus: Vec<CMatrix> = problem
        .effective
        .iter()
        .map(|a| a.adjoint().matmul(&inv_sqrt).scale_real(s))
        .collect();
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l <= cutoff {
            let v = eig.vector(k);
            kraus.push(CMatrix::from_fn(2, d, |a, i| if a == 0 { v[i].conj() } else { ZERO }));
        }
    }
    let channel = QuantumChannel::from_kraus(kraus)?;
    let f = problem.fidelity_of(&channel)?;
    Ok((channel, f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecoveryMethod {
    Sdp,
    Transpose,
}

impl std::fmt::Display for RecoveryMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RecoveryMethod::Sdp => "sdp",
            RecoveryMethod::Transpose => "transpose",
        })
    }
}

impl std::str::FromStr for RecoveryMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sdp" => Ok(RecoveryMethod::Sdp),
            "transpose" => Ok(RecoveryMethod::Transpose),
            _ => Err(Error::InvalidArgument(format!("unknown method {s:?} (expected sdp or transpose)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub gamma_t: f64,
    pub fidelity: f64,
    pub infidelity: f64,
    pub method: RecoveryMethod,
    pub iterations: usize,
    /// Largest of the solver residuals and the duality gap; 0 for the
    /// transpose channel.
    pub residual: f64,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn converged(&self) -> bool {
        self.error.is_none()
    }
}

fn sweep_point(code: &SpinCode, gamma_t: f64, method: RecoveryMethod, options: &SdpOptions) -> SweepRow {
    let failed = |e: Error| SweepRow {
        gamma_t,
        fidelity: f64::NAN,
        infidelity: f64::NAN,
        method,
        iterations: 0,
        residual: f64::NAN,
        error: Some(e.to_string()),
    };
    let problem = match lindblad_channel(code.spin, gamma_t).and_then(|ch| RecoveryProblem::from_code(code, ch)) {
        Ok(p) => p,
        Err(e) => return failed(e),
    };
    match method {
        RecoveryMethod::Transpose => match transpose_recovery(&problem) {
            Ok((_, f)) => SweepRow {
                gamma_t,
                fidelity: f,
                infidelity: 1.0 - f,
                method,
                iterations: 0,
                residual: 0.0,
                error: None,
            },
            Err(e) => failed(e),
        },
        RecoveryMethod::Sdp => match optimal_recovery(&problem, options) {
            Ok(sol) => SweepRow {
                gamma_t,
                fidelity: sol.fidelity,
                infidelity: 1.0 - sol.fidelity,
                method,
                iterations: sol.iterations,
                residual: sol.primal_residual.max(sol.dual_residual).max(sol.gap()),
                error: None,
            },
            Err(e) => {
                let iterations = match &e {
                    Error::SolverNotConverged { iterations, .. } => *iterations,
                    _ => 0,
                };
                SweepRow {
                    iterations,
                    ..failed(e)
                }
            }
        },
    }
}

/// Fidelity after recovery at each γt. Points run on `jobs` threads; rows
/// come back in grid order regardless.
pub fn fidelity_sweep(
    code: &SpinCode,
    grid: &[f64],
    method: RecoveryMethod,
    options: &SdpOptions,
    jobs: usize,
) -> Result<Vec<SweepRow>> {
    if grid.iter().any(|g| !(*g >= 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("gamma_t grid must be non-negative and strictly ascending".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        grid.par_iter()
            .map(|&g| sweep_point(code, g, method, options))
            .collect()
    }))
}

/// `points` values from `min` to `max`, logarithmically or linearly spaced.
pub fn gamma_grid(min: f64, max: f64, points: usize, log: bool) -> Result<Vec<f64>> {
    if points == 0 || !(min >= 0.0) || !(max >= min) || (points > 1 && max == min) {
        return Err(Error::InvalidArgument(format!("bad grid: min {min}, max {max}, points {points}")));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    if log && min <= 0.0 {
        return Err(Error::InvalidArgument("a log grid needs a positive minimum".into()));
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            let t = k as f64 / last;
            if k == points - 1 {
                max
            } else if log {
                (min.ln() + t * (max.ln() - min.ln())).exp()
            } else {
                min + t * (max - min)
            }
        })
        .collect())
}

/// Least-squares slope of log(infidelity) against log(γt).
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
