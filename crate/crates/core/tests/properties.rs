//! Property tests for the structural invariants of each module.

use std::f64::consts::PI;
use std::sync::OnceLock;

use proptest::prelude::*;

use spincode::code::{build_code, check_support_law, icosahedral_code_7half, represent_group, support_set, SpinCode};
use spincode::gates::t_gate_phase_spread;
use spincode::group::{enumerate_group, multiplicity, FiniteSubgroup, GroupLabel, IrrepLabel};
use spincode::linalg::{expm_general, expm_hermitian_generator, herm_eig, kron, CMatrix, C64};
use spincode::noise::{kl_matrix, ladder_errors, lindblad_channel, reduced_conditions, rotation_errors};
use spincode::su2::{angular_momentum_ops, axis_angle, represent, represent_with, Axis, GroupElement};
use spincode::wigner::{rotation_to, wigner_function_with, GridSpec, WignerKernel};
use spincode::SpinJ;

fn octa() -> &'static FiniteSubgroup {
    static G: OnceLock<FiniteSubgroup> = OnceLock::new();
    G.get_or_init(|| enumerate_group(GroupLabel::Octahedral).unwrap())
}

fn groups() -> &'static [FiniteSubgroup] {
    static G: OnceLock<Vec<FiniteSubgroup>> = OnceLock::new();
    G.get_or_init(|| GroupLabel::ALL.iter().map(|&l| enumerate_group(l).unwrap()).collect())
}

fn hermitian(d: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d * d).prop_map(move |v| {
        CMatrix::from_fn(d, d, |i, j| C64::new(v[i * d + j].0, v[i * d + j].1)).hermitian_part()
    })
}

fn sized_hermitian(max: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max).prop_flat_map(hermitian)
}

fn rotation() -> impl Strategy<Value = GroupElement> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("non-degenerate", |(w, x, y, z)| w * w + x * x + y * y + z * z > 0.01)
        .prop_map(|(w, x, y, z)| {
            let n = (w * w + x * x + y * y + z * z).sqrt();
            GroupElement::new(w / n, x / n, y / n, z / n).unwrap()
        })
}

fn direction() -> impl Strategy<Value = [f64; 3]> {
    (-1.0f64..1.0, 0.0f64..2.0 * PI).prop_map(|(c, p)| {
        let s = (1.0 - c * c).sqrt();
        [s * p.cos(), s * p.sin(), c]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn herm_eig_round_trips(h in sized_hermitian(24)) {
        let e = herm_eig(&h).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&h) < 1e-11);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn expm_is_additive(h in sized_hermitian(12), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let a = expm_hermitian_generator(&h, s).unwrap();
        let b = expm_hermitian_generator(&h, t).unwrap();
        let ab = expm_hermitian_generator(&h, s + t).unwrap();
        prop_assert!(a.matmul(&b).max_abs_diff(&ab) < 1e-10);
    }

    #[test]
    fn expm_general_agrees_with_eigen_exponential(h in sized_hermitian(12), s in -4.0f64..4.0) {
        let via_eig = expm_hermitian_generator(&h, s).unwrap();
        let via_pade = expm_general(&h.scale(C64::new(0.0, -s))).unwrap();
        prop_assert!(via_eig.max_abs_diff(&via_pade) < 1e-10);
    }

    #[test]
    fn representation_is_a_homomorphism(g in rotation(), h in rotation(), tj in 0u32..=20) {
        let spin = SpinJ::from_twice(tj);
        let lhs = represent(&(g * h), spin);
        let rhs = represent(&g, spin).matmul(&represent(&h, spin));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn casimir_is_invariant(g in rotation(), tj in 0u32..=20) {
        let spin = SpinJ::from_twice(tj);
        let ops = angular_momentum_ops(spin);
        let c = ops.casimir();
        let d = represent_with(&g, &ops);
        prop_assert!(d.matmul(&c).matmul(&d.adjoint()).max_abs_diff(&c) < 1e-10);
    }

    #[test]
    fn multiplicities_fill_the_dimension(dim in 1usize..=200, which in 0usize..3) {
        let g = &groups()[which];
        let spin = SpinJ::from_dim(dim).unwrap();
        let total: usize = g
            .table
            .irreps
            .iter()
            .map(|r| multiplicity(spin, g, r.label).unwrap() * r.dim)
            .sum();
        prop_assert_eq!(total, dim);
    }

    #[test]
    fn zero_jz_code_for_any_phase(phi in 0.0f64..2.0 * PI) {
        let c = build_code(SpinJ::from_twice(13), octa(), IrrepLabel(5), Some(phi)).unwrap();
        prop_assert!(kl_matrix(&c, &rotation_errors(c.spin)).unwrap().violation < 1e-10);
        prop_assert!(c.jz_expectation(0).abs() < 1e-12);
        prop_assert!(check_support_law(&c).is_ok());
        prop_assert!(t_gate_phase_spread(&c).unwrap() < 1e-10);
    }

    #[test]
    fn channels_form_a_semigroup(tj in 0u32..=9, t1 in 0.0f64..0.5, t2 in 0.0f64..0.5) {
        let spin = SpinJ::from_twice(tj);
        let a = lindblad_channel(spin, t1).unwrap();
        let b = lindblad_channel(spin, t2).unwrap();
        let ab = lindblad_channel(spin, t1 + t2).unwrap();
        prop_assert!(b.compose(&a).unwrap().superoperator().max_abs_diff(ab.superoperator()) < 1e-8);
    }

    #[test]
    fn channel_is_rotation_covariant(tj in 0u32..=9, g in rotation(), t in 0.0f64..0.5) {
        let spin = SpinJ::from_twice(tj);
        let s = lindblad_channel(spin, t).unwrap().superoperator().clone();
        let d = represent(&g, spin);
        let u = kron(&d.conj(), &d);
        prop_assert!(u.matmul(&s).max_abs_diff(&s.matmul(&u)) < 1e-9);
    }

    #[test]
    fn kernel_is_gauge_independent(n in direction(), twist in 0.0f64..2.0 * PI, tj in 1u32..=9) {
        let k = WignerKernel::new(SpinJ::from_twice(tj)).unwrap();
        let g = rotation_to(n).unwrap();
        let g2 = g * axis_angle([0.0, 0.0, 1.0], twist).unwrap();
        prop_assert!(k.rotated(&g).max_abs_diff(&k.rotated(&g2)) < 1e-10);
    }

    #[test]
    fn wigner_map_is_linear(a in hermitian(6), b in hermitian(6), x in -2.0f64..2.0) {
        let spin = SpinJ::from_twice(5);
        let k = WignerKernel::new(spin).unwrap();
        let spec = GridSpec::minimal(spin);
        let combo = &a + &b.scale_real(x);
        let wa = wigner_function_with(&k, &a, spec, "").unwrap();
        let wb = wigner_function_with(&k, &b, spec, "").unwrap();
        let wc = wigner_function_with(&k, &combo, spec, "").unwrap();
        for ((c, p), q) in wc.values.iter().zip(&wa.values).zip(&wb.values) {
            prop_assert!((c - p - q * x).norm() < 1e-12);
        }
    }

    #[test]
    fn quadrature_is_exact(a in hermitian(8), b in hermitian(8)) {
        let spin = SpinJ::from_twice(7);
        let k = WignerKernel::new(spin).unwrap();
        let coarse = GridSpec::minimal(spin);
        let fine = GridSpec { n_theta: 2 * coarse.n_theta, n_phi: 2 * coarse.n_phi };
        let integrals = |spec: GridSpec| {
            let wa = wigner_function_with(&k, &a, spec, "").unwrap();
            let wb = wigner_function_with(&k, &b, spec, "").unwrap();
            (wa.integral(), wa.integral_product(&wb).unwrap())
        };
        let (s1, t1) = integrals(coarse);
        let (s2, t2) = integrals(fine);
        prop_assert!((s1 - s2).norm() < 1e-12);
        prop_assert!((t1 - t2).norm() < 1e-12);
    }
}

#[test]
fn herm_eig_round_trips_at_dimension_400() {
    let d = 400;
    let h = CMatrix::from_fn(d, d, |i, j| {
        let x = ((i * 7919 + j * 104729) % 1000) as f64 / 500.0 - 1.0;
        let y = ((i * 31 + j * 17) % 997) as f64 / 498.5 - 1.0;
        C64::new(x, y)
    })
    .hermitian_part();
    let e = herm_eig(&h).unwrap();
    assert!(e.reconstruct().max_abs_diff(&h) < 1e-11);
}

#[test]
fn characters_match_traces_up_to_spin_31_halves() {
    for g in groups() {
        for tj in 0..=31u32 {
            let spin = SpinJ::from_twice(tj);
            let ops = angular_momentum_ops(spin);
            for (e, d) in g.elements.iter().zip(represent_group(g, &ops)) {
                let chi = spincode::su2::character_value(e, spin);
                assert!((d.trace() - C64::new(chi, 0.0)).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn character_tables_are_orthonormal() {
    for g in groups() {
        assert!(g.table.row_orthonormality_error() < 1e-10, "{}", g.label);
        assert!(g.table.column_orthogonality_error() < 1e-10, "{}", g.label);
    }
}

fn constructible_codes() -> Vec<SpinCode> {
    let mut out = Vec::new();
    for tj in (1..=23u32).step_by(2) {
        for irrep in [4u8, 5] {
            if let Ok(c) = build_code(SpinJ::from_twice(tj), octa(), IrrepLabel(irrep), Some(0.3)) {
                out.push(c);
            }
        }
    }
    out
}

#[test]
fn code_projectors_are_octahedrally_symmetric() {
    for c in constructible_codes() {
        let p = c.projector();
        let ops = angular_momentum_ops(c.spin);
        for d in represent_group(octa(), &ops) {
            assert!(d.matmul(&p).max_abs_diff(&p.matmul(&d)) < 1e-10, "spin {}", c.spin);
        }
    }
}

#[test]
fn codeword_structure() {
    for c in constructible_codes() {
        let ops = angular_momentum_ops(c.spin);
        assert!((c.jz_expectation(0) + c.jz_expectation(1)).abs() < 1e-10);
        let s0 = support_set(&c.ket0, &ops, Axis::Z);
        let s1 = support_set(&c.ket1, &ops, Axis::Z);
        assert!(s0.iter().all(|m| !s1.contains(m)), "spin {}", c.spin);
        assert!(t_gate_phase_spread(&c).unwrap() < 1e-10);
    }
}

#[test]
fn kl_violation_matches_reduced_conditions() {
    let ico = enumerate_group(GroupLabel::Icosahedral).unwrap();
    let mut codes = constructible_codes();
    codes.push(icosahedral_code_7half(&ico).unwrap());
    for c in codes {
        let full = kl_matrix(&c, &rotation_errors(c.spin)).unwrap().violation;
        let ladder = kl_matrix(&c, &ladder_errors(c.spin)).unwrap().violation;
        let reduced = reduced_conditions(&c);
        let zero = full < 1e-10;
        assert_eq!(zero, ladder < 1e-10, "spin {} {}", c.spin, c.irrep);
        assert_eq!(zero, reduced.holds, "spin {} {}", c.spin, c.irrep);
        assert_eq!(zero, reduced.jz_expectation.abs() < 1e-10, "spin {} {}", c.spin, c.irrep);
    }
}
