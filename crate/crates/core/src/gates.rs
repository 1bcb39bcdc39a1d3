//! Logical gates on spin codes: Clifford gates as rotations, the quadratic
//! T̄ and C̄Z gates, and the support checks behind destructive measurement.

use std::f64::consts::PI;

use serde::Serialize;

use crate::code::{check_support_law_with, support_set, SpinCode};
use crate::error::{Error, Result};
use crate::group::{FiniteSubgroup, GroupLabel};
use crate::linalg::{kron, CMatrix, C64};
use crate::su2::{angular_momentum_ops, represent_with, Axis, GroupElement};

/// Distance and leakage below this count as an exact realization.
pub const GATE_TOL: f64 = 1e-9;

/// Largest two-spin dimension the C̄Z construction accepts.
pub const MAX_PAIR_DIM: usize = 4096;

#[derive(Clone, Debug, Serialize)]
pub struct GateReport {
    pub name: String,
    pub target: CMatrix,
    pub achieved: CMatrix,
    pub distance: f64,
    pub leakage: f64,
}

impl GateReport {
    pub fn new(name: impl Into<String>, target: CMatrix, achieved: CMatrix, leakage: f64) -> Self {
        let distance = phase_invariant_distance(&achieved, &target);
        GateReport {
            name: name.into(),
            target,
            achieved,
            distance,
            leakage,
        }
    }

    pub fn success(&self) -> bool {
        self.distance < GATE_TOL && self.leakage < GATE_TOL
    }
}

/// min over α of ‖A − e^{iα}T‖_F.
pub fn phase_invariant_distance(a: &CMatrix, t: &CMatrix) -> f64 {
    // The optimum is at α = arg⟨T, A⟩; evaluating the norm directly avoids
    // the cancellation in ‖A‖² + ‖T‖² − 2|⟨T, A⟩|.
    let overlap = t.inner(a);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    (a - &t.scale(phase)).frobenius_norm()
}

/// Matrix of `u` between codewords, with leakage ‖(1 − VV†)uV‖_F.
#[derive(Clone, Debug)]
pub struct LogicalAction {
    pub matrix: CMatrix,
    pub leakage: f64,
}

/// Logical action of `u` for an isometry `v` whose columns span the codespace.
pub fn logical_action_encoded(u: &CMatrix, v: &CMatrix) -> LogicalAction {
    let uv = u.matmul(v);
    let matrix = v.adjoint().matmul(&uv);
    let leakage = (&uv - &v.matmul(&matrix)).frobenius_norm();
    LogicalAction { matrix, leakage }
}

pub fn logical_action(u: &CMatrix, code: &SpinCode) -> LogicalAction {
    logical_action_encoded(u, &code.encoder())
}

/// Diagonal unitary stored by its diagonal.
#[derive(Clone, Debug)]
pub struct DiagonalGate {
    pub diag: Vec<C64>,
}

impl DiagonalGate {
    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_diag(&self.diag)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.diag.iter().zip(v).map(|(d, x)| d * x).collect()
    }

    /// Logical action on the codespace spanned by the columns of `v`.
    pub fn logical_action(&self, v: &CMatrix) -> LogicalAction {
        let uv = CMatrix::from_fn(v.rows(), v.cols(), |i, j| self.diag[i] * v[(i, j)]);
        let matrix = v.adjoint().matmul(&uv);
        let leakage = (&uv - &v.matmul(&matrix)).frobenius_norm();
        LogicalAction { matrix, leakage }
    }
}

fn t_target() -> CMatrix {
    CMatrix::from_diag(&[C64::new(1.0, 0.0), C64::from_polar(1.0, PI / 4.0)])
}

fn cz_target() -> CMatrix {
    let one = C64::new(1.0, 0.0);
    CMatrix::from_diag(&[one, one, one, -one])
}

/// Linear coefficient φ of exp(−iφJ_z)·exp(−i(π/4)J_z²) for support offset 2m₀.
pub fn t_gate_phi(twice_m0: i32) -> Result<f64> {
    match twice_m0 {
        1 => Ok(PI / 4.0),
        -3 => Ok(5.0 * PI / 4.0),
        _ => Err(Error::SupportStructure(format!("2m0 = {twice_m0} is neither 1 nor -3"))),
    }
}

/// Phases exp(−i(φm + (π/4)m²)) on the m-descending basis.
pub fn t_gate_diagonal(code: &SpinCode) -> Result<DiagonalGate> {
    let ops = angular_momentum_ops(code.spin);
    let law = check_support_law_with(code, &ops)?;
    let phi = t_gate_phi(law.twice_m0)?;
    let spin = code.spin;
    let diag = (0..spin.dim())
        .map(|k| {
            let m = spin.m(k);
            C64::from_polar(1.0, -(phi * m + PI / 4.0 * m * m))
        })
        .collect();
    Ok(DiagonalGate { diag })
}

/// T̄ = exp(−iφJ_z)·exp(−i(π/4)J_z²) with φ chosen by the support offset.
pub fn t_gate(code: &SpinCode) -> Result<(CMatrix, GateReport)> {
    let gate = t_gate_diagonal(code)?;
    let action = gate.logical_action(&code.encoder());
    let report = GateReport::new("T", t_target(), action.matrix, action.leakage);
    Ok((gate.to_matrix(), report))
}

/// Largest spread, over each codeword, of the T̄ phase across its occupied m
/// values. Zero means the quadratic and linear terms combine into a single
/// phase per logical state.
pub fn t_gate_phase_spread(code: &SpinCode) -> Result<f64> {
    let ops = angular_momentum_ops(code.spin);
    let law = check_support_law_with(code, &ops)?;
    let phi = t_gate_phi(law.twice_m0)?;
    let phase = |twice_m: i32| {
        let m = twice_m as f64 / 2.0;
        C64::from_polar(1.0, -(phi * m + PI / 4.0 * m * m))
    };
    let mut spread: f64 = 0.0;
    for support in [&law.ket0_support, &law.ket1_support] {
        let first = phase(support[0]);
        for &tm in support.iter() {
            spread = spread.max((phase(tm) - first).norm());
        }
    }
    Ok(spread)
}

/// exp(i(π/2)J_z⊗𝟙)·exp(i(π/2)𝟙⊗J_z)·exp(−iπJ_z⊗J_z), diagonal in the
/// product basis (index i·d_b + k).
pub fn cz_gate_diagonal(a: &SpinCode, b: &SpinCode) -> Result<DiagonalGate> {
    let (da, db) = (a.dim(), b.dim());
    if da * db > MAX_PAIR_DIM {
        return Err(Error::InvalidArgument(format!(
            "two-spin dimension {} exceeds {MAX_PAIR_DIM}",
            da * db
        )));
    }
    let mut diag = Vec::with_capacity(da * db);
    for i in 0..da {
        let ma = a.spin.m(i);
        for k in 0..db {
            let mb = b.spin.m(k);
            diag.push(C64::from_polar(1.0, PI / 2.0 * (ma + mb) - PI * ma * mb));
        }
    }
    Ok(DiagonalGate { diag })
}

/// C̄Z on two 2O codes; the returned gate acts on the full product space.
pub fn cz_gate(a: &SpinCode, b: &SpinCode) -> Result<(DiagonalGate, GateReport)> {
    for code in [a, b] {
        let ops = angular_momentum_ops(code.spin);
        check_support_law_with(code, &ops)?;
    }
    let gate = cz_gate_diagonal(a, b)?;
    let v = kron(&a.encoder(), &b.encoder());
    let action = gate.logical_action(&v);
    let report = GateReport::new("CZ", cz_target(), action.matrix, action.leakage);
    Ok((gate, report))
}

#[derive(Clone, Debug, Serialize)]
pub struct AxisSupport {
    pub axis: String,
    /// Supports (2m values) of the +1 and −1 eigenstates of σ̄_w along J_w.
    pub plus: Vec<i32>,
    pub minus: Vec<i32>,
    pub disjoint: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasurementReport {
    pub axes: Vec<AxisSupport>,
}

impl MeasurementReport {
    pub fn all_disjoint(&self) -> bool {
        self.axes.iter().all(|a| a.disjoint)
    }
}

/// Checks that the logical eigenstates along each axis occupy disjoint sets
/// of J_w eigenvalues.
pub fn measurement_support_check(code: &SpinCode) -> MeasurementReport {
    let ops = angular_momentum_ops(code.spin);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let combine = |c: C64| -> Vec<C64> {
        code.ket0.iter().zip(&code.ket1).map(|(a, b)| (a + b * c) * s).collect()
    };
    let i = C64::new(0.0, 1.0);
    let axes = Axis::ALL
        .iter()
        .map(|&axis| {
            let (plus, minus) = match axis {
                Axis::Z => (code.ket0.clone(), code.ket1.clone()),
                Axis::X => (combine(C64::new(1.0, 0.0)), combine(C64::new(-1.0, 0.0))),
                Axis::Y => (combine(i), combine(-i)),
            };
            let plus = support_set(&plus, &ops, axis);
            let minus = support_set(&minus, &ops, axis);
            let disjoint = plus.iter().all(|m| !minus.contains(m));
            AxisSupport {
                axis: axis.to_string(),
                plus,
                minus,
                disjoint,
            }
        })
        .collect();
    MeasurementReport { axes }
}

/// How every 2O element acts on a code compared with its 2×2 SU(2) matrix.
#[derive(Clone, Debug, Serialize)]
pub struct CliffordReport {
    pub elements: usize,
    pub max_distance: f64,
    pub max_leakage: f64,
    /// tr(U(g)† L(g))/2 for S and H, where L is the logical action: +1 when
    /// the code carries the defining irrep, −1 for its sign-twisted partner.
    pub s_sign: f64,
    pub h_sign: f64,
}

impl CliffordReport {
    pub fn success(&self) -> bool {
        self.max_distance < GATE_TOL && self.max_leakage < 1e-10
    }
}

pub fn phase_gate() -> GroupElement {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    GroupElement::new_unchecked(h, 0.0, 0.0, h)
}

pub fn hadamard_gate() -> GroupElement {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    GroupElement::new_unchecked(0.0, h, 0.0, h)
}

pub fn clifford_realization(code: &SpinCode, group: &FiniteSubgroup) -> Result<CliffordReport> {
    if group.label != GroupLabel::Octahedral {
        return Err(Error::InvalidArgument("Clifford realization is checked over 2O".into()));
    }
    let ops = angular_momentum_ops(code.spin);
    let v = code.encoder();
    let mut max_distance: f64 = 0.0;
    let mut max_leakage: f64 = 0.0;
    for g in &group.elements {
        let action = logical_action_encoded(&represent_with(g, &ops), &v);
        max_distance = max_distance.max(phase_invariant_distance(&action.matrix, &g.su2_matrix()));
        max_leakage = max_leakage.max(action.leakage);
    }
    let sign = |g: GroupElement| {
        let l = logical_action_encoded(&represent_with(&g, &ops), &v).matrix;
        (g.su2_matrix().inner(&l) / 2.0).re
    };
    Ok(CliffordReport {
        elements: group.order(),
        max_distance,
        max_leakage,
        s_sign: sign(phase_gate()),
        h_sign: sign(hadamard_gate()),
    })
}

/// Sizes of the matrix group generated by the given 2×2 logical gates, exactly
/// and modulo global phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureSizes {
    pub exact: usize,
    pub projective: usize,
}

pub fn logical_group_closure(generators: &[CMatrix], limit: usize) -> Result<ClosureSizes> {
    let mut elements = vec![CMatrix::identity(2)];
    let mut frontier = elements.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for g in generators {
                let p = a.matmul(g);
                if !elements.iter().any(|e| e.max_abs_diff(&p) < 1e-9) {
                    elements.push(p.clone());
                    next.push(p);
                    if elements.len() > limit {
                        return Err(Error::ClosureOverflow { limit });
                    }
                }
            }
        }
        frontier = next;
    }
    let mut classes: Vec<&CMatrix> = Vec::new();
    for e in &elements {
        if !classes.iter().any(|c| phase_invariant_distance(e, c) < 1e-9) {
            classes.push(e);
        }
    }
    Ok(ClosureSizes {
        exact: elements.len(),
        projective: classes.len(),
    })
}

/// Logical S̄ and H̄: the actions of D(S) and D(H) on the code.
pub fn logical_s_h(code: &SpinCode) -> (CMatrix, CMatrix) {
    let ops = angular_momentum_ops(code.spin);
    let v = code.encoder();
    let s = logical_action_encoded(&represent_with(&phase_gate(), &ops), &v).matrix;
    let h = logical_action_encoded(&represent_with(&hadamard_gate(), &ops), &v).matrix;
    (s, h)
}

/// Every gate check that applies to a single code.
pub fn verify_single(code: &SpinCode, octahedral: &FiniteSubgroup) -> Result<Vec<GateReport>> {
    let ops = angular_momentum_ops(code.spin);
    let v = code.encoder();
    let mut reports = Vec::new();
    let i = C64::new(0.0, 1.0);
    for (name, g) in [("S", phase_gate()), ("H", hadamard_gate())] {
        let action = logical_action_encoded(&represent_with(&g, &ops), &v);
        reports.push(GateReport::new(name, g.su2_matrix(), action.matrix, action.leakage));
    }
    for axis in Axis::ALL {
        let g = crate::code::half_turn(axis);
        let action = logical_action_encoded(&represent_with(&g, &ops), &v);
        let pauli = g.su2_matrix().scale(i);
        reports.push(GateReport::new(axis.to_string().to_uppercase(), pauli, action.matrix, action.leakage));
    }
    if code.group == GroupLabel::Octahedral {
        reports.push(t_gate(code)?.1);
        let cr = clifford_realization(code, octahedral)?;
        let worst = GateReport {
            name: "2O".into(),
            target: CMatrix::identity(2),
            achieved: CMatrix::identity(2),
            distance: cr.max_distance,
            leakage: cr.max_leakage,
        };
        reports.push(worst);
    }
    Ok(reports)
}
