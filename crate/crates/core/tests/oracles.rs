//! Independent reference computations checked against the library.

mod common;

use spincode::code::{build_code, icosahedral_code_7half};
use spincode::group::{enumerate_group, multiplicity_by_traces, multiplicity_table, GroupLabel, IrrepLabel};
use spincode::linalg::{herm_eig, kron, CMatrix, C64};
use spincode::recovery::{fidelity_sweep, gamma_grid, RecoveryMethod, SdpOptions};
use spincode::su2::angular_momentum_ops;
use spincode::wigner::{clebsch_gordan_j_l0, CGCache};
use spincode::SpinJ;

/// ⟨j m; ℓ 0|j m⟩ by diagonalizing J² on the coupled space j⊗ℓ: the J = j
/// state at M = j, phased so its (m₁ = j, m₂ = 0) component is positive, is
/// lowered with J₋ to M = m.
fn cg_by_coupling(spin: SpinJ, l: u32, twice_m: i32) -> f64 {
    let a = angular_momentum_ops(spin);
    let b = angular_momentum_ops(SpinJ::from_twice(2 * l));
    let (da, db) = (a.spin.dim(), b.spin.dim());
    let ia = CMatrix::identity(da);
    let ib = CMatrix::identity(db);
    let jx = &kron(&a.jx, &ib) + &kron(&ia, &b.jx);
    let jy = &kron(&a.jy, &ib) + &kron(&ia, &b.jy);
    let jz = &kron(&a.jz, &ib) + &kron(&ia, &b.jz);
    let jminus = &kron(&a.jminus, &ib) + &kron(&ia, &b.jminus);
    let mut j2 = jx.matmul(&jx);
    j2 += &jy.matmul(&jy);
    j2 += &jz.matmul(&jz);

    // Basis states of total M = j.
    let tj = spin.twice_j() as i32;
    let sector: Vec<usize> = (0..da * db).filter(|&k| (2.0 * jz[(k, k)].re).round() as i32 == tj).collect();
    let block = CMatrix::from_fn(sector.len(), sector.len(), |r, c| j2[(sector[r], sector[c])]);
    let e = herm_eig(&block).unwrap();
    let target = spin.casimir();
    let col = (0..sector.len())
        .min_by(|&x, &y| (e.eigenvalues[x] - target).abs().total_cmp(&(e.eigenvalues[y] - target).abs()))
        .unwrap();
    assert!((e.eigenvalues[col] - target).abs() < 1e-8);
    let mut state = vec![C64::new(0.0, 0.0); da * db];
    for (r, &k) in sector.iter().enumerate() {
        state[k] = e.eigenvectors[(r, col)];
    }
    // Component |m₁ = j⟩⊗|m₂ = 0⟩ sits at index 0·db + l.
    let anchor = state[l as usize];
    let phase = anchor.conj() / anchor.norm();
    for x in state.iter_mut() {
        *x *= phase;
    }
    for _ in 0..(tj - twice_m) / 2 {
        state = jminus.mul_vec(&state);
        let n = spincode::linalg::norm(&state);
        for x in state.iter_mut() {
            *x /= n;
        }
    }
    let idx = spin.index_of_twice_m(twice_m).unwrap() * db + l as usize;
    assert!(state[idx].im.abs() < 1e-10);
    state[idx].re
}

#[test]
fn clebsch_gordan_matches_coupled_basis() {
    for tj in 1..=11u32 {
        let spin = SpinJ::from_twice(tj);
        let cache = CGCache::new(spin);
        for l in 0..=tj {
            for k in 0..spin.dim() {
                let tm = spin.twice_m(k);
                let want = cg_by_coupling(spin, l, tm);
                assert!((cache.get(l, k) - want).abs() < 1e-10, "2j {tj} l {l} 2m {tm}: {} vs {want}", cache.get(l, k));
                assert!((clebsch_gordan_j_l0(spin, l, tm).unwrap() - want).abs() < 1e-10);
            }
        }
    }
}

/// ⟨j m; ℓ 0|j m⟩ for every ℓ at fixed m from the three-term recursion of the
/// polynomials in m orthonormal on the N = 2j+1 lattice points:
/// m·v_ℓ = a_{ℓ+1}·v_{ℓ+1} + a_ℓ·v_{ℓ−1}, a_ℓ² = ℓ²(N²−ℓ²)/(4(4ℓ²−1)),
/// and ⟨j m; ℓ 0|j m⟩ = √(N/(2ℓ+1))·v_ℓ(m).
fn cg_by_recursion(spin: SpinJ, twice_m: i32) -> Vec<f64> {
    let n = spin.dim() as f64;
    let m = twice_m as f64 / 2.0;
    let a = |l: usize| {
        let l = l as f64;
        (l * l * (n * n - l * l) / (4.0 * (4.0 * l * l - 1.0))).sqrt()
    };
    let mut v = vec![1.0 / n.sqrt()];
    for l in 0..spin.dim() - 1 {
        let prev = if l == 0 { 0.0 } else { a(l) * v[l - 1] };
        v.push((m * v[l] - prev) / a(l + 1));
    }
    v.iter().enumerate().map(|(l, x)| (n / (2 * l + 1) as f64).sqrt() * x).collect()
}

#[test]
fn clebsch_gordan_matches_recursion() {
    // Forward recursion in ℓ loses accuracy where v_ℓ is exponentially small
    // near m = ±j, so it is only used up to 2j = 20.
    for tj in 0..=20u32 {
        let spin = SpinJ::from_twice(tj);
        let cache = CGCache::new(spin);
        for k in 0..spin.dim() {
            let rec = cg_by_recursion(spin, spin.twice_m(k));
            for (l, want) in rec.iter().enumerate() {
                let got = cache.get(l as u32, k);
                assert!((got - want).abs() < 1e-10, "2j {tj} l {l} 2m {}: {got} vs {want}", spin.twice_m(k));
            }
        }
    }
}

#[test]
fn clebsch_gordan_matches_stretched_closed_form() {
    // ⟨j j; ℓ 0|j j⟩ = (2j)!·√(2j+1)/√((2j−ℓ)!(2j+ℓ+1)!).
    let lnf = |n: u32| (1..=n).map(|k| (k as f64).ln()).sum::<f64>();
    for tj in [21u32, 40, 63, 100] {
        let spin = SpinJ::from_twice(tj);
        let cache = CGCache::new(spin);
        for l in 0..=tj {
            let want = (lnf(tj) + 0.5 * ((tj + 1) as f64).ln() - 0.5 * (lnf(tj - l) + lnf(tj + l + 1))).exp();
            let got = cache.get(l, 0);
            assert!((got - want).abs() < 1e-10 * want, "2j {tj} l {l}: {got} vs {want}");
        }
    }
}

#[test]
fn clebsch_gordan_stays_normalized_at_large_spin() {
    // ⟨j m; ℓ 0|j m⟩ = ±√((2j+1)/(2ℓ+1))·⟨j m; j −m|ℓ 0⟩, and the latter are the
    // components of the normalized coupled state |ℓ 0⟩.
    for tj in [40u32, 75, 100] {
        let spin = SpinJ::from_twice(tj);
        let cache = CGCache::new(spin);
        let d = spin.dim() as f64;
        for l in [0u32, 1, tj / 2, tj] {
            let s: f64 = (0..spin.dim()).map(|k| cache.get(l, k).powi(2)).sum();
            assert!((s - d / (2 * l + 1) as f64).abs() < 1e-9, "2j {tj} l {l}: {s}");
        }
    }
}

#[test]
fn trace_multiplicities_match_tables_up_to_dimension_40() {
    for label in GroupLabel::ALL {
        let g = enumerate_group(label).unwrap();
        let t = multiplicity_table(&g, 40).unwrap();
        for row in &t.rows {
            let spin = row.spin;
            let by_traces: Vec<usize> =
                t.irreps.iter().map(|&l| multiplicity_by_traces(spin, &g, l).unwrap()).collect();
            assert_eq!(by_traces, row.multiplicities, "{label} dim {}", row.dim);
            assert_eq!(
                common::expected_multiplicities(label, &t.irreps, row.dim),
                row.multiplicities,
                "{label} dim {}",
                row.dim
            );
        }
    }
}

#[test]
fn period_increments_match_table_coefficients() {
    for label in GroupLabel::ALL {
        let g = enumerate_group(label).unwrap();
        let p = label.period();
        let t = multiplicity_table(&g, 3 * p).unwrap();
        assert!(t.period_violations.is_empty(), "{label}: {:?}", t.period_violations);
        for (parity, table) in common::tables(label).iter().enumerate() {
            for d in (1..=2 * p).filter(|d| d % 2 == parity) {
                for (&irrep, &coef) in table.irreps.iter().zip(table.coef) {
                    let l = IrrepLabel(irrep);
                    assert_eq!(t.get(d + p, l).unwrap(), t.get(d, l).unwrap() + coef, "{label} dim {d} {l}");
                }
            }
        }
    }
}

#[test]
fn kl_code_infidelity_is_quadratic() {
    let ico = enumerate_group(GroupLabel::Icosahedral).unwrap();
    let code = icosahedral_code_7half(&ico).unwrap();
    let grid = gamma_grid(1e-4, 1e-3, 5, true).unwrap();
    let rows = fidelity_sweep(&code, &grid, RecoveryMethod::Sdp, &SdpOptions::default(), 4).unwrap();
    let (num, den) = rows
        .iter()
        .fold((0.0, 0.0), |(n, d), r| (n + r.infidelity * r.gamma_t.powi(2), d + r.gamma_t.powi(4)));
    let c = num / den;
    for r in &rows {
        let rel = (r.infidelity - c * r.gamma_t.powi(2)).abs() / r.infidelity;
        assert!(rel < 0.05, "gamma_t {}: relative residual {rel}", r.gamma_t);
    }
}

#[test]
fn fidelity_decreases_along_a_sweep() {
    let o = enumerate_group(GroupLabel::Octahedral).unwrap();
    let code = build_code(SpinJ::from_twice(5), &o, IrrepLabel(5), None).unwrap();
    let grid = gamma_grid(1e-3, 0.5, 10, true).unwrap();
    for method in [RecoveryMethod::Sdp, RecoveryMethod::Transpose] {
        let rows = fidelity_sweep(&code, &grid, method, &SdpOptions::default(), 4).unwrap();
        assert!(rows.iter().all(|r| r.converged()));
        for w in rows.windows(2) {
            assert!(w[1].fidelity <= w[0].fidelity + 1e-9, "{method}: {} then {}", w[0].fidelity, w[1].fidelity);
        }
    }
}

#[test]
fn sweep_rows_are_independent_of_thread_count() {
    let o = enumerate_group(GroupLabel::Octahedral).unwrap();
    let code = build_code(SpinJ::from_twice(7), &o, IrrepLabel(4), None).unwrap();
    let grid = gamma_grid(1e-3, 1e-1, 6, true).unwrap();
    let a = fidelity_sweep(&code, &grid, RecoveryMethod::Sdp, &SdpOptions::default(), 1).unwrap();
    let b = fidelity_sweep(&code, &grid, RecoveryMethod::Sdp, &SdpOptions::default(), 3).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.gamma_t.to_bits(), y.gamma_t.to_bits());
        assert_eq!(x.fidelity.to_bits(), y.fidelity.to_bits());
        assert_eq!(x.iterations, y.iterations);
    }
}
