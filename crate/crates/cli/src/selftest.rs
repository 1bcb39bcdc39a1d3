//! Fast built-in invariant suite. Each check prints one line.

use std::io::Write;

use spincode::code::{build_code, check_support_law, icosahedral_code_7half, SpinCode};
use spincode::codefile::{code_from_json, code_to_json};
use spincode::gates::{clifford_realization, cz_gate, t_gate};
use spincode::group::{enumerate_group, multiplicity, multiplicity_by_traces, multiplicity_table, GroupLabel, IrrepLabel};
use spincode::linalg::{CMatrix, C64};
use spincode::noise::{error_subspace_rank, kl_matrix, lindblad_channel, rotation_errors};
use spincode::recovery::{optimal_recovery, transpose_recovery, verify_solution, RecoveryProblem, SdpOptions};
use spincode::wigner::{verify_postulates, GridSpec};
use spincode::su2::axis_angle;
use spincode::SpinJ;

type Check = (&'static str, Box<dyn Fn() -> spincode::Result<Option<String>>>);

fn expect(ok: bool, detail: String) -> spincode::Result<Option<String>> {
    Ok(if ok { None } else { Some(detail) })
}

fn octahedral_code(tj: u32, irrep: u8, phi: Option<f64>) -> spincode::Result<SpinCode> {
    let g = enumerate_group(GroupLabel::Octahedral)?;
    build_code(SpinJ::from_twice(tj), &g, IrrepLabel(irrep), phi)
}

fn checks() -> Vec<Check> {
    vec![
        (
            "multiplicity tables obey the period law",
            Box::new(|| {
                let mut bad = Vec::new();
                for label in GroupLabel::ALL {
                    let g = enumerate_group(label)?;
                    let t = multiplicity_table(&g, 2 * label.period() + 2)?;
                    if !t.period_violations.is_empty() {
                        bad.push(format!("{label}: {:?}", t.period_violations));
                    }
                }
                expect(bad.is_empty(), bad.join("; "))
            }),
        ),
        (
            "character and trace multiplicities agree",
            Box::new(|| {
                let g = enumerate_group(GroupLabel::Octahedral)?;
                for dim in 1..=16 {
                    let spin = SpinJ::from_dim(dim)?;
                    for row in &g.table.irreps {
                        let a = multiplicity(spin, &g, row.label)?;
                        let b = multiplicity_by_traces(spin, &g, row.label)?;
                        if a != b {
                            return expect(false, format!("dim {dim} {}: {a} vs {b}", row.label));
                        }
                    }
                }
                Ok(None)
            }),
        ),
        (
            "spin-5/2 rho5 code has |<0|Jz|0>| = 5/6",
            Box::new(|| {
                let c = octahedral_code(5, 5, None)?;
                let v = c.jz_expectation(0);
                expect((v.abs() - 5.0 / 6.0).abs() < 1e-12, format!("got {v}"))
            }),
        ),
        (
            "Clifford group realized on the four smallest 2O codes",
            Box::new(|| {
                let g = enumerate_group(GroupLabel::Octahedral)?;
                for (tj, irrep, sign) in [(5u32, 5u8, -1.0), (7, 5, -1.0), (7, 4, 1.0), (9, 4, 1.0)] {
                    let c = octahedral_code(tj, irrep, None)?;
                    let r = clifford_realization(&c, &g)?;
                    if !r.success() || (r.s_sign - sign).abs() > 1e-9 || (r.h_sign - sign).abs() > 1e-9 {
                        return expect(false, format!("spin {}/2 rho{irrep}: {r:?}", tj));
                    }
                }
                Ok(None)
            }),
        ),
        (
            "support law up to spin 15/2",
            Box::new(|| {
                let g = enumerate_group(GroupLabel::Octahedral)?;
                for tj in (1..=15u32).step_by(2) {
                    for irrep in [4u8, 5] {
                        match build_code(SpinJ::from_twice(tj), &g, IrrepLabel(irrep), None) {
                            Ok(c) => {
                                check_support_law(&c)?;
                            }
                            Err(spincode::Error::Multiplicity { .. }) => {}
                            Err(e) => return Err(e),
                        }
                    }
                }
                Ok(None)
            }),
        ),
        (
            "T and CZ gates",
            Box::new(|| {
                let a = octahedral_code(5, 5, None)?;
                let b = octahedral_code(7, 4, None)?;
                let (_, ta) = t_gate(&a)?;
                let (_, tb) = t_gate(&b)?;
                let (_, cz) = cz_gate(&a, &b)?;
                expect(
                    ta.success() && tb.success() && cz.success(),
                    format!("T {} / {}, CZ {}", ta.distance, tb.distance, cz.distance),
                )
            }),
        ),
        (
            "Knill-Laflamme conditions for the spin-13/2 and 2I codes",
            Box::new(|| {
                let i = enumerate_group(GroupLabel::Icosahedral)?;
                let codes = [octahedral_code(13, 5, Some(0.0))?, icosahedral_code_7half(&i)?];
                for c in &codes {
                    let v = kl_matrix(c, &rotation_errors(c.spin))?.violation;
                    if v >= 1e-10 {
                        return expect(false, format!("spin {} violation {v}", c.spin));
                    }
                }
                let rank = error_subspace_rank(&codes[1])?;
                expect(rank == 8, format!("2I rank {rank}"))
            }),
        ),
        (
            "code file round trip",
            Box::new(|| {
                let c = octahedral_code(13, 5, Some(1.3))?;
                let back = code_from_json(&code_to_json(&c)?)?;
                expect(back == c, "decoded code differs".into())
            }),
        ),
        (
            "Lindblad channel semigroup and trace preservation",
            Box::new(|| {
                let s = SpinJ::from_twice(5);
                let a = lindblad_channel(s, 0.03)?;
                let b = lindblad_channel(s, 0.05)?;
                let ab = lindblad_channel(s, 0.08)?;
                let err = a.compose(&b)?.superoperator().max_abs_diff(ab.superoperator());
                let tp = ab.trace_preservation_error();
                expect(err < 1e-8 && tp < 1e-10, format!("semigroup {err}, trace {tp}"))
            }),
        ),
        (
            "Wigner postulates at spin 5/2",
            Box::new(|| {
                let s = SpinJ::from_twice(5);
                let ops: Vec<CMatrix> = (0..3)
                    .map(|t| {
                        let m = CMatrix::from_fn(6, 6, |i, j| {
                            C64::new(((3 * i + 5 * j + t) % 7) as f64 - 3.0, ((i * j + t) % 5) as f64 - 2.0)
                        });
                        m.hermitian_part()
                    })
                    .collect();
                let rots = [axis_angle([0.6, 0.0, 0.8], 0.9)?, axis_angle([0.0, 1.0, 0.0], 2.3)?];
                let r = verify_postulates(s, &ops, &rots, GridSpec::minimal(s))?;
                expect(r.max_error() < 1e-8, format!("{r:?}"))
            }),
        ),
        (
            "optimal recovery beats the transpose channel",
            Box::new(|| {
                let c = octahedral_code(5, 5, None)?;
                let p = RecoveryProblem::from_code(&c, lindblad_channel(c.spin, 1e-2)?)?;
                let sol = optimal_recovery(&p, &SdpOptions::default())?;
                let (_, ft) = transpose_recovery(&p)?;
                let chk = verify_solution(&p, &sol.choi)?;
                expect(
                    sol.fidelity >= ft - 1e-7 && chk.min_eigenvalue >= -1e-8 && chk.trace_residual < 1e-8,
                    format!("sdp {} transpose {ft} {chk:?}", sol.fidelity),
                )
            }),
        ),
    ]
}

/// Runs every check and reports whether all passed.
pub fn run(out: &mut impl Write) -> spincode::Result<bool> {
    let mut all = true;
    for (name, check) in checks() {
        let outcome = check();
        let line = match &outcome {
            Ok(None) => format!("ok    {name}"),
            Ok(Some(detail)) => format!("FAIL  {name}: {detail}"),
            Err(e) => format!("FAIL  {name}: {e}"),
        };
        all &= matches!(outcome, Ok(None));
        writeln!(out, "{line}")?;
    }
    writeln!(out, "{}", if all { "selftest passed" } else { "selftest failed" })?;
    Ok(all)
}
