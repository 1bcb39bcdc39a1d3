//! Quantum channels, the random-rotation Lindblad channel, and Knill-Laflamme
//! checks.
//!
//! Vectorization is column-stacking: vec(ρ)[i + d·j] = ρ[i, j], so that
//! vec(AρB) = (Bᵀ⊗A)·vec(ρ) with the Kronecker convention of [`kron`].
//! Choi matrices are ordered input ⊗ output:
//! C[(i·d_out + a), (j·d_out + b)] = E(|i⟩⟨j|)[a, b].

use std::sync::OnceLock;

use serde::Serialize;

use crate::code::SpinCode;
use crate::error::{Error, Result};
use crate::linalg::{expm_general, herm_eig, kron, CMatrix, C64, ZERO};
use crate::su2::{angular_momentum_ops, SpinJ};

/// Choi eigenvalues at or below this are dropped when extracting Kraus operators.
pub const KRAUS_CUTOFF: f64 = 1e-12;

#[derive(Debug)]
pub struct QuantumChannel {
    d_in: usize,
    d_out: usize,
    kraus: Vec<CMatrix>,
    choi: OnceLock<CMatrix>,
    superop: OnceLock<CMatrix>,
}

impl Clone for QuantumChannel {
    fn clone(&self) -> Self {
        QuantumChannel {
            d_in: self.d_in,
            d_out: self.d_out,
            kraus: self.kraus.clone(),
            choi: self.choi.clone(),
            superop: self.superop.clone(),
        }
    }
}

impl QuantumChannel {
    pub fn from_kraus(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidArgument("a channel needs at least one Kraus operator".into()))?;
        let (d_out, d_in) = (first.rows(), first.cols());
        if let Some(k) = kraus.iter().find(|k| (k.rows(), k.cols()) != (d_out, d_in)) {
            return Err(Error::Dimension(format!(
                "Kraus operators of shapes {d_out}x{d_in} and {}x{}",
                k.rows(),
                k.cols()
            )));
        }
        Ok(QuantumChannel {
            d_in,
            d_out,
            kraus,
            choi: OnceLock::new(),
            superop: OnceLock::new(),
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::from_kraus(vec![CMatrix::identity(d)]).expect("nonempty")
    }

    /// Channel from a Choi matrix (input ⊗ output ordering), keeping
    /// eigenvalues above [`KRAUS_CUTOFF`].
    pub fn from_choi(choi: &CMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        if choi.rows() != d_in * d_out || !choi.is_square() {
            return Err(Error::Dimension(format!(
                "Choi matrix is {}x{}, expected {}",
                choi.rows(),
                choi.cols(),
                d_in * d_out
            )));
        }
        let eig = herm_eig(&choi.hermitian_part())?;
        let mut kraus = Vec::new();
        for (k, &lam) in eig.eigenvalues.iter().enumerate().rev() {
            if lam <= KRAUS_CUTOFF {
                continue;
            }
            let s = lam.sqrt();
            let v = eig.vector(k);
            kraus.push(CMatrix::from_fn(d_out, d_in, |a, i| v[i * d_out + a] * s));
        }
        if kraus.is_empty() {
            return Err(Error::InvalidArgument("Choi matrix has no positive eigenvalues".into()));
        }
        Self::from_kraus(kraus)
    }

    /// Channel from a column-stacking superoperator.
    pub fn from_superoperator(s: &CMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        Self::from_choi(&superop_to_choi(s, d_in, d_out), d_in, d_out)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn choi(&self) -> &CMatrix {
        self.choi.get_or_init(|| {
            let (di, dout) = (self.d_in, self.d_out);
            let mut c = CMatrix::zeros(di * dout, di * dout);
            for k in &self.kraus {
                for i in 0..di {
                    for a in 0..dout {
                        let x = k[(a, i)];
                        if x == ZERO {
                            continue;
                        }
                        for j in 0..di {
                            for b in 0..dout {
                                c[(i * dout + a, j * dout + b)] += x * k[(b, j)].conj();
                            }
                        }
                    }
                }
            }
            c.hermitian_part()
        })
    }

    /// Σ_k conj(K_k) ⊗ K_k, acting on column-stacked density matrices.
    pub fn superoperator(&self) -> &CMatrix {
        self.superop.get_or_init(|| {
            let n = self.d_out * self.d_out;
            let m = self.d_in * self.d_in;
            let mut s = CMatrix::zeros(n, m);
            for k in &self.kraus {
                s += &kron(&k.conj(), k);
            }
            s
        })
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out += &k.matmul(rho).matmul(&k.adjoint());
        }
        out
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &QuantumChannel) -> Result<Self> {
        if first.d_out != self.d_in {
            return Err(Error::Dimension(format!(
                "cannot compose a {}-output channel into a {}-input channel",
                first.d_out, self.d_in
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * first.kraus.len());
        for a in &self.kraus {
            for b in &first.kraus {
                kraus.push(a.matmul(b));
            }
        }
        Self::from_kraus(kraus)
    }

    /// max |Σ K†K − 𝟙|.
    pub fn trace_preservation_error(&self) -> f64 {
        let mut s = CMatrix::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            s += &k.adjoint().matmul(k);
        }
        s.max_abs_diff(&CMatrix::identity(self.d_in))
    }

    pub fn min_choi_eigenvalue(&self) -> Result<f64> {
        Ok(herm_eig(self.choi())?.eigenvalues[0])
    }
}

/// Rearranges a column-stacking superoperator into a Choi matrix.
pub fn superop_to_choi(s: &CMatrix, d_in: usize, d_out: usize) -> CMatrix {
    CMatrix::from_fn(d_in * d_out, d_in * d_out, |r, c| {
        let (i, a) = (r / d_out, r % d_out);
        let (j, b) = (c / d_out, c % d_out);
        s[(b * d_out + a, j * d_in + i)]
    })
}

/// Column-stacking vec.
pub fn vec_col(rho: &CMatrix) -> Vec<C64> {
    let (r, c) = (rho.rows(), rho.cols());
    (0..r * c).map(|k| rho[(k % r, k / r)]).collect()
}

pub fn unvec_col(v: &[C64], rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |i, j| v[i + rows * j])
}

/// Superoperator of ρ ↦ Σ_w (J_w ρ J_w − ½{J_w², ρ}).
pub fn lindbladian(spin: SpinJ) -> CMatrix {
    let ops = angular_momentum_ops(spin);
    let d = spin.dim();
    let id = CMatrix::identity(d);
    let mut l = CMatrix::zeros(d * d, d * d);
    for j in [&ops.jx, &ops.jy, &ops.jz] {
        let j2 = j.matmul(j);
        l += &kron(&j.transpose(), j);
        l -= &kron(&id, &j2).scale_real(0.5);
        l -= &kron(&j2.transpose(), &id).scale_real(0.5);
    }
    l
}

/// Random-rotation channel exp(γt·L) of the spin.
pub fn lindblad_channel(spin: SpinJ, gamma_t: f64) -> Result<QuantumChannel> {
    if !(gamma_t >= 0.0) || !gamma_t.is_finite() {
        return Err(Error::InvalidArgument(format!("gamma_t must be non-negative, got {gamma_t}")));
    }
    let d = spin.dim();
    if gamma_t == 0.0 {
        return Ok(QuantumChannel::identity(d));
    }
    let s = expm_general(&lindbladian(spin).scale_real(gamma_t))?;
    QuantumChannel::from_superoperator(&s, d, d)
}

/// Four-operator short-time channel: (1 − j(j+1)γdt/2)𝟙 and √(γdt)·J_w.
pub fn first_order_kraus(spin: SpinJ, gamma_dt: f64) -> Vec<CMatrix> {
    let ops = angular_momentum_ops(spin);
    let d = spin.dim();
    let r = gamma_dt.sqrt();
    vec![
        CMatrix::identity(d).scale_real(1.0 - spin.casimir() * gamma_dt / 2.0),
        ops.jx.scale_real(r),
        ops.jy.scale_real(r),
        ops.jz.scale_real(r),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct KLMatrix {
    pub labels: Vec<String>,
    /// blocks[j][k][(a, b)] = ⟨ā|E_j†E_k|b̄⟩.
    pub blocks: Vec<Vec<CMatrix>>,
    /// max over (j, k) of ‖offdiag‖_F + |b₀₀ − b₁₁|.
    pub violation: f64,
}

fn block_violation(b: &CMatrix) -> f64 {
    let off = (b[(0, 1)].norm_sqr() + b[(1, 0)].norm_sqr()).sqrt();
    off + (b[(0, 0)] - b[(1, 1)]).norm()
}

pub fn kl_matrix(code: &SpinCode, errors: &[(String, CMatrix)]) -> Result<KLMatrix> {
    let d = code.dim();
    if let Some((name, e)) = errors.iter().find(|(_, e)| e.rows() != d || e.cols() != d) {
        return Err(Error::Dimension(format!(
            "error {name} is {}x{}, code dimension is {d}",
            e.rows(),
            e.cols()
        )));
    }
    let images: Vec<Vec<Vec<C64>>> = errors
        .iter()
        .map(|(_, e)| vec![e.mul_vec(&code.ket0), e.mul_vec(&code.ket1)])
        .collect();
    let mut violation: f64 = 0.0;
    let blocks: Vec<Vec<CMatrix>> = images
        .iter()
        .map(|ej| {
            images
                .iter()
                .map(|ek| {
                    let b = CMatrix::from_fn(2, 2, |a, bb| crate::linalg::inner(&ej[a], &ek[bb]));
                    violation = violation.max(block_violation(&b));
                    b
                })
                .collect()
        })
        .collect();
    Ok(KLMatrix {
        labels: errors.iter().map(|(n, _)| n.clone()).collect(),
        blocks,
        violation,
    })
}

/// {𝟙, J_x, J_y, J_z}.
pub fn rotation_errors(spin: SpinJ) -> Vec<(String, CMatrix)> {
    let ops = angular_momentum_ops(spin);
    vec![
        ("I".into(), CMatrix::identity(spin.dim())),
        ("Jx".into(), ops.jx),
        ("Jy".into(), ops.jy),
        ("Jz".into(), ops.jz),
    ]
}

/// {𝟙, J_z, J_+, J_−}, spanning the same operator space as [`rotation_errors`].
pub fn ladder_errors(spin: SpinJ) -> Vec<(String, CMatrix)> {
    let ops = angular_momentum_ops(spin);
    vec![
        ("I".into(), CMatrix::identity(spin.dim())),
        ("Jz".into(), ops.jz),
        ("J+".into(), ops.jplus),
        ("J-".into(), ops.jminus),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct ReducedConditions {
    /// Violation of ⟨ā|J_z²|b̄⟩ ∝ δ_ab.
    pub jz2: f64,
    /// Violation of ⟨ā|J_xJ_y|b̄⟩ ∝ δ_ab.
    pub jxjy: f64,
    /// Violation of ⟨ā|J_z|b̄⟩ ∝ δ_ab.
    pub jz: f64,
    /// |⟨1̄|J_z²|1̄⟩ − ⟨0̄|J_z²|0̄⟩|.
    pub jz2_symmetry: f64,
    /// |⟨1̄|J_z|1̄⟩ + ⟨0̄|J_z|0̄⟩|.
    pub jz_antisymmetry: f64,
    pub jz_expectation: f64,
    pub holds: bool,
}

pub fn reduced_conditions(code: &SpinCode) -> ReducedConditions {
    let ops = angular_momentum_ops(code.spin);
    let jz2 = ops.jz.matmul(&ops.jz);
    let jxjy = ops.jx.matmul(&ops.jy);
    let bz2 = code.logical_matrix(&jz2);
    let bxy = code.logical_matrix(&jxjy);
    let bz = code.logical_matrix(&ops.jz);
    let tol = 1e-10;
    let mut r = ReducedConditions {
        jz2: block_violation(&bz2),
        jxjy: block_violation(&bxy),
        jz: block_violation(&bz),
        jz2_symmetry: (bz2[(1, 1)] - bz2[(0, 0)]).norm(),
        jz_antisymmetry: (bz[(1, 1)] + bz[(0, 0)]).norm(),
        jz_expectation: bz[(0, 0)].re,
        holds: false,
    };
    r.holds = r.jz2 < tol && r.jxjy < tol && r.jz < tol;
    r
}

/// Rank of the Gram matrix of the normalized vectors E|ā⟩ for
/// E ∈ {𝟙, J_x, J_y, J_z}; eigenvalues above 1e-9 count.
pub fn error_subspace_rank(code: &SpinCode) -> Result<usize> {
    error_subspace_rank_with(code, &rotation_errors(code.spin))
}

pub fn error_subspace_rank_with(code: &SpinCode, errors: &[(String, CMatrix)]) -> Result<usize> {
    let mut vectors = Vec::new();
    for (_, e) in errors {
        for a in 0..2 {
            let v = e.mul_vec(code.ket(a));
            let n = crate::linalg::norm(&v);
            if n > 1e-12 {
                vectors.push(v.iter().map(|x| x / n).collect::<Vec<_>>());
            }
        }
    }
    let gram = CMatrix::from_fn(vectors.len(), vectors.len(), |i, j| {
        crate::linalg::inner(&vectors[i], &vectors[j])
    });
    let eig = herm_eig(&gram.hermitian_part())?;
    Ok(eig.eigenvalues.iter().filter(|&&l| l > 1e-9).count())
}
