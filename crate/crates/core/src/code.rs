//! Codespaces carried by a two-dimensional irrep of a binary polyhedral group
//! inside a spin-j representation.
//!
//! Codewords are amplitude vectors over |j, m⟩ with m descending. The global
//! phase of |0̄⟩ is fixed so that its highest-m nonzero amplitude is real and
//! positive. |1̄⟩ is σ̄_x|0̄⟩ with no further re-phasing, so that the logical X
//! and Z are exactly σ̄_x and σ̄_z and the relative phase between codewords is
//! the one the group action dictates.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{multiplicity, FiniteSubgroup, GroupLabel, IrrepLabel};
use crate::linalg::{herm_eig, inner, norm, CMatrix, C64, ZERO};
use crate::su2::{angular_momentum_ops, axis_angle, represent_with, AngularMomentumOps, Axis, GroupElement, SpinJ};

/// Amplitudes below this magnitude are outside a state's support.
pub const SUPPORT_TOL: f64 = 1e-10;
const CODEWORD_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinCode {
    pub spin: SpinJ,
    pub group: GroupLabel,
    pub irrep: IrrepLabel,
    /// Mixing phase of the zero-⟨J_z⟩ construction, when used.
    pub phi: Option<f64>,
    pub ket0: Vec<C64>,
    pub ket1: Vec<C64>,
}

impl SpinCode {
    /// Validates lengths, normalization and orthogonality.
    pub fn new(
        spin: SpinJ,
        group: GroupLabel,
        irrep: IrrepLabel,
        phi: Option<f64>,
        ket0: Vec<C64>,
        ket1: Vec<C64>,
    ) -> Result<Self> {
        let d = spin.dim();
        if ket0.len() != d || ket1.len() != d {
            return Err(Error::InvalidCode(format!(
                "codewords have lengths {} and {}, spin {spin} needs {d}",
                ket0.len(),
                ket1.len()
            )));
        }
        for (name, k) in [("ket0", &ket0), ("ket1", &ket1)] {
            let n = norm(k);
            if (n - 1.0).abs() > CODEWORD_TOL {
                return Err(Error::InvalidCode(format!("{name} has norm {n}")));
            }
        }
        let overlap = inner(&ket0, &ket1).norm();
        if overlap > CODEWORD_TOL {
            return Err(Error::InvalidCode(format!("codewords overlap by {overlap:e}")));
        }
        Ok(SpinCode {
            spin,
            group,
            irrep,
            phi,
            ket0,
            ket1,
        })
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn ket(&self, a: usize) -> &[C64] {
        match a {
            0 => &self.ket0,
            1 => &self.ket1,
            _ => panic!("logical index {a} out of range"),
        }
    }

    /// d×2 isometry whose columns are the codewords.
    pub fn encoder(&self) -> CMatrix {
        CMatrix::from_columns(&[self.ket0.clone(), self.ket1.clone()]).expect("codeword lengths agree")
    }

    pub fn projector(&self) -> CMatrix {
        &CMatrix::outer(&self.ket0, &self.ket0) + &CMatrix::outer(&self.ket1, &self.ket1)
    }

    /// 2×2 matrix ⟨ā|A|b̄⟩.
    pub fn logical_matrix(&self, a: &CMatrix) -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| a.sandwich(self.ket(i), self.ket(j)))
    }

    /// ⟨ā|J_z|ā⟩ (real).
    pub fn jz_expectation(&self, a: usize) -> f64 {
        let s = self.spin;
        self.ket(a)
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm_sqr() * s.m(k))
            .sum()
    }
}

/// Rotates the vector so its first (highest-m) amplitude above the support
/// threshold is real and positive.
pub fn fix_phase(v: &[C64]) -> Vec<C64> {
    match v.iter().find(|c| c.norm() > SUPPORT_TOL) {
        Some(&lead) => {
            let phase = lead.conj() / lead.norm();
            v.iter().map(|c| c * phase).collect()
        }
        None => v.to_vec(),
    }
}

#[derive(Clone, Debug)]
pub struct IrrepProjector {
    pub p: CMatrix,
    pub irrep: IrrepLabel,
    pub irrep_dim: usize,
    pub multiplicity: usize,
}

impl IrrepProjector {
    pub fn is_zero(&self) -> bool {
        self.multiplicity == 0
    }
}

/// D(g) for every element of the group, in element order.
pub fn represent_group(group: &FiniteSubgroup, ops: &AngularMomentumOps) -> Vec<CMatrix> {
    group.elements.iter().map(|g| represent_with(g, ops)).collect()
}

/// P_ϱ = (dim ϱ/|G|) Σ_g χ_ϱ(g)* D(g), symmetrized.
pub fn irrep_projector(spin: SpinJ, group: &FiniteSubgroup, irrep: IrrepLabel) -> Result<IrrepProjector> {
    let ops = angular_momentum_ops(spin);
    irrep_projector_with(&ops, group, irrep)
}

pub fn irrep_projector_with(
    ops: &AngularMomentumOps,
    group: &FiniteSubgroup,
    irrep: IrrepLabel,
) -> Result<IrrepProjector> {
    let spin = ops.spin;
    let row = group.table.row(irrep)?;
    let mult = multiplicity(spin, group, irrep)?;
    let d = spin.dim();
    let mut p = CMatrix::zeros(d, d);
    for (i, g) in group.elements.iter().enumerate() {
        let chi = row.values[group.class_of[i]].conj();
        if chi.norm() == 0.0 {
            continue;
        }
        p += &represent_with(g, ops).scale(chi);
    }
    let p = p.scale_real(row.dim as f64 / group.order() as f64).hermitian_part();
    let expected = (mult * row.dim) as f64;
    let tr = p.trace();
    if (tr.re - expected).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::CharacterMismatch(format!(
            "projector trace {tr} for {irrep} at spin {spin}, expected {expected}"
        )));
    }
    Ok(IrrepProjector {
        p,
        irrep,
        irrep_dim: row.dim,
        multiplicity: mult,
    })
}

/// The SU(2) element exp(−iπ σ_w/2), a π rotation about axis w.
pub fn half_turn(axis: Axis) -> GroupElement {
    axis_angle(axis.unit(), PI).expect("unit axis")
}

/// σ̄_w = P (i·exp(−iπ J_w)) P.
pub fn irrep_pauli(projector: &IrrepProjector, ops: &AngularMomentumOps, axis: Axis) -> CMatrix {
    let u = represent_with(&half_turn(axis), ops).scale(C64::new(0.0, 1.0));
    let p = &projector.p;
    p.matmul(&u).matmul(p).hermitian_part()
}

fn require_spinorial_pair(group: &FiniteSubgroup, irrep: IrrepLabel) -> Result<()> {
    let row = group.table.row(irrep)?;
    if row.dim != 2 {
        return Err(Error::InvalidArgument(format!(
            "{irrep} of {} has dimension {}, a qubit code needs a 2-dimensional irrep",
            group.label, row.dim
        )));
    }
    Ok(())
}

/// Eigenvectors of a Hermitian operator with eigenvalue within 1e-8 of `target`.
fn eigenspace(op: &CMatrix, target: f64) -> Result<Vec<Vec<C64>>> {
    let eig = herm_eig(op)?;
    Ok((0..eig.eigenvalues.len())
        .filter(|&k| (eig.eigenvalues[k] - target).abs() < 1e-8)
        .map(|k| eig.vector(k))
        .collect())
}

/// Codewords of a multiplicity-one two-dimensional irrep.
pub fn extract_codewords(spin: SpinJ, group: &FiniteSubgroup, irrep: IrrepLabel) -> Result<SpinCode> {
    require_spinorial_pair(group, irrep)?;
    let ops = angular_momentum_ops(spin);
    let proj = irrep_projector_with(&ops, group, irrep)?;
    if proj.multiplicity != 1 {
        return Err(Error::Multiplicity {
            irrep: irrep.to_string(),
            found: proj.multiplicity,
            expected: "1".into(),
        });
    }
    let sz = irrep_pauli(&proj, &ops, Axis::Z);
    let sx = irrep_pauli(&proj, &ops, Axis::X);
    let plus = eigenspace(&sz, 1.0)?;
    if plus.len() != 1 {
        return Err(Error::CharacterMismatch(format!(
            "irrep Pauli Z has a {}-dimensional +1 eigenspace",
            plus.len()
        )));
    }
    let ket0 = fix_phase(&plus[0]);
    let ket1 = sx.mul_vec(&ket0);
    SpinCode::new(spin, group.label, irrep, None, ket0, ket1)
}

/// Diagnostic data of the zero-⟨J_z⟩ construction.
#[derive(Clone, Debug)]
pub struct ZeroJzConstruction {
    pub code: SpinCode,
    /// Eigenvalues of J_z projected onto the σ̄_z = +1 eigenspace, ascending.
    pub projected_eigenvalues: Vec<f64>,
    /// Phase-fixed eigenvectors, one per projected eigenvalue.
    pub eigenvectors: Vec<Vec<C64>>,
    /// Eigenvalues used, λ₁ < 0 ≤ λ₂.
    pub lambdas: (f64, f64),
    /// Weights √(λ₂/(λ₂−λ₁)) and √(−λ₁/(λ₂−λ₁)).
    pub weights: (f64, f64),
}

/// Code with ⟨0̄|J_z|0̄⟩ = 0 inside a higher-multiplicity isotypic subspace:
/// |0̄⟩ = √(λ₂/(λ₂−λ₁))|v₁⟩ + e^{iφ}√(−λ₁/(λ₂−λ₁))|v₂⟩ built from the
/// extreme eigenpairs of the projected J_z.
pub fn extract_codewords_zero_jz(
    spin: SpinJ,
    group: &FiniteSubgroup,
    irrep: IrrepLabel,
    phi: f64,
) -> Result<SpinCode> {
    zero_jz_construction(spin, group, irrep, phi).map(|c| c.code)
}

pub fn zero_jz_construction(
    spin: SpinJ,
    group: &FiniteSubgroup,
    irrep: IrrepLabel,
    phi: f64,
) -> Result<ZeroJzConstruction> {
    require_spinorial_pair(group, irrep)?;
    let ops = angular_momentum_ops(spin);
    let proj = irrep_projector_with(&ops, group, irrep)?;
    if proj.multiplicity < 2 {
        return Err(Error::Multiplicity {
            irrep: irrep.to_string(),
            found: proj.multiplicity,
            expected: "at least 2".into(),
        });
    }
    let sz = irrep_pauli(&proj, &ops, Axis::Z);
    let sx = irrep_pauli(&proj, &ops, Axis::X);
    let plus = eigenspace(&sz, 1.0)?;
    if plus.len() != proj.multiplicity {
        return Err(Error::CharacterMismatch(format!(
            "irrep Pauli Z +1 eigenspace has dimension {}, multiplicity is {}",
            plus.len(),
            proj.multiplicity
        )));
    }
    let q = CMatrix::from_columns(&plus)?;
    let reduced = q.adjoint().matmul(&ops.jz).matmul(&q).hermitian_part();
    let eig = herm_eig(&reduced)?;
    let eigenvalues = eig.eigenvalues.clone();
    let eigenvectors: Vec<Vec<C64>> = (0..eigenvalues.len())
        .map(|k| fix_phase(&q.mul_vec(&eig.vector(k))))
        .collect();

    let n = eigenvalues.len();
    let (l1, l2) = (eigenvalues[0], eigenvalues[n - 1]);
    let (ket0, lambdas, weights) = if let Some(k) = eigenvalues.iter().position(|l| l.abs() < 1e-12) {
        (eigenvectors[k].clone(), (eigenvalues[k], eigenvalues[k]), (1.0, 0.0))
    } else if l1 < 0.0 && l2 > 0.0 {
        let w1 = (l2 / (l2 - l1)).sqrt();
        let w2 = (-l1 / (l2 - l1)).sqrt();
        let e = C64::from_polar(w2, phi);
        let v: Vec<C64> = eigenvectors[0]
            .iter()
            .zip(&eigenvectors[n - 1])
            .map(|(a, b)| a * w1 + b * e)
            .collect();
        (v, (l1, l2), (w1, w2))
    } else {
        return Err(Error::NoSignChange { eigenvalues });
    };
    let ket0 = fix_phase(&ket0);
    let ket1 = sx.mul_vec(&ket0);
    let code = SpinCode::new(spin, group.label, irrep, Some(phi), ket0, ket1)?;
    Ok(ZeroJzConstruction {
        code,
        projected_eigenvalues: eigenvalues,
        eigenvectors,
        lambdas,
        weights,
    })
}

/// Codewords for any 2-dimensional irrep with nonzero multiplicity: the
/// plain construction at multiplicity one, the zero-⟨J_z⟩ construction
/// (phase φ, default 0) above that. For 2I, whose ẑ axis is five-fold and so
/// has no half-turn in the group, only the spin-7/2 code is available.
pub fn build_code(spin: SpinJ, group: &FiniteSubgroup, irrep: IrrepLabel, phi: Option<f64>) -> Result<SpinCode> {
    if group.label == GroupLabel::Icosahedral {
        let code = icosahedral_code_7half(group)?;
        if spin != code.spin || irrep != code.irrep {
            return Err(Error::InvalidArgument(format!(
                "2I codes are available for spin {} {} only",
                code.spin, code.irrep
            )));
        }
        return Ok(code);
    }
    match multiplicity(spin, group, irrep)? {
        0 => Err(Error::Multiplicity {
            irrep: irrep.to_string(),
            found: 0,
            expected: "at least 1".into(),
        }),
        1 => extract_codewords(spin, group, irrep),
        _ => extract_codewords_zero_jz(spin, group, irrep, phi.unwrap_or(0.0)),
    }
}

/// The spin-7/2 code |0̄⟩ = √(3/10)|7/2⟩ + √(7/10)|−3/2⟩,
/// |1̄⟩ = √(7/10)|3/2⟩ − √(3/10)|−7/2⟩, labelled by the 2I irrep whose
/// projector fixes both codewords.
pub fn icosahedral_code_7half(group: &FiniteSubgroup) -> Result<SpinCode> {
    if group.label != GroupLabel::Icosahedral {
        return Err(Error::InvalidArgument(format!(
            "the spin-7/2 code needs 2I, got {}",
            group.label
        )));
    }
    let spin = SpinJ::from_twice(7);
    let (a, b) = ((0.3f64).sqrt(), (0.7f64).sqrt());
    let mut ket0 = vec![ZERO; 8];
    let mut ket1 = vec![ZERO; 8];
    ket0[0] = C64::new(a, 0.0);
    ket0[5] = C64::new(b, 0.0);
    ket1[2] = C64::new(b, 0.0);
    ket1[7] = C64::new(-a, 0.0);

    let ops = angular_momentum_ops(spin);
    for row in group.table.irreps.iter().filter(|r| r.dim == 2) {
        let proj = irrep_projector_with(&ops, group, row.label)?;
        if proj.is_zero() {
            continue;
        }
        let fixed = |k: &[C64]| {
            let pk = proj.p.mul_vec(k);
            pk.iter().zip(k).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) < 1e-10
        };
        if fixed(&ket0) && fixed(&ket1) {
            return SpinCode::new(spin, group.label, row.label, None, ket0, ket1);
        }
    }
    Err(Error::InvalidCode(
        "spin-7/2 codewords lie in no two-dimensional 2I isotypic subspace".into(),
    ))
}

/// Support of a state in the eigenbasis of J_w, as 2m values, descending.
pub fn support_set(state: &[C64], ops: &AngularMomentumOps, axis: Axis) -> Vec<i32> {
    let spin = ops.spin;
    let amplitudes = match axis {
        Axis::Z => state.to_vec(),
        // D(g)|j,m⟩ is the m-eigenvector of n̂·J for n̂ = R(g)ẑ.
        Axis::X | Axis::Y => {
            let g = match axis {
                Axis::X => axis_angle([0.0, 1.0, 0.0], PI / 2.0),
                _ => axis_angle([1.0, 0.0, 0.0], -PI / 2.0),
            }
            .expect("unit axis");
            represent_with(&g, ops).adjoint().mul_vec(state)
        }
    };
    amplitudes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > SUPPORT_TOL)
        .map(|(k, _)| spin.twice_m(k))
        .collect()
}

/// Outcome of checking the binary-octahedral support law: supp(|0̄⟩) in a
/// single class m₀ + 4ℤ with m₀ ∈ {1/2, −3/2} and supp(|1̄⟩) = −supp(|0̄⟩).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportLaw {
    /// 2m₀: 1 or −3.
    pub twice_m0: i32,
    pub ket0_support: Vec<i32>,
    pub ket1_support: Vec<i32>,
}

pub fn check_support_law(code: &SpinCode) -> Result<SupportLaw> {
    let ops = angular_momentum_ops(code.spin);
    check_support_law_with(code, &ops)
}

pub fn check_support_law_with(code: &SpinCode, ops: &AngularMomentumOps) -> Result<SupportLaw> {
    let s0 = support_set(&code.ket0, ops, Axis::Z);
    let s1 = support_set(&code.ket1, ops, Axis::Z);
    if s0.is_empty() {
        return Err(Error::SupportStructure("ket0 has empty support".into()));
    }
    let residue = s0[0].rem_euclid(8);
    let twice_m0 = match residue {
        1 => 1,
        5 => -3,
        _ => {
            return Err(Error::SupportStructure(format!(
                "2m = {} is not congruent to 1 or -3 mod 8",
                s0[0]
            )))
        }
    };
    if let Some(m) = s0.iter().find(|m| m.rem_euclid(8) != residue) {
        return Err(Error::SupportStructure(format!(
            "ket0 support mixes residues: 2m = {} and {}",
            s0[0], m
        )));
    }
    let mut reflected: Vec<i32> = s0.iter().map(|m| -m).collect();
    reflected.reverse();
    if reflected != s1 {
        return Err(Error::SupportStructure(format!(
            "supp(ket1) = {s1:?} is not the reflection of supp(ket0) = {s0:?}"
        )));
    }
    Ok(SupportLaw {
        twice_m0,
        ket0_support: s0,
        ket1_support: s1,
    })
}
