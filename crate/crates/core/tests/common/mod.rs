//! Reference data transcribed from the published tables, shared by the
//! integration tests.

#![allow(dead_code)]

use spincode::group::{GroupLabel, IrrepLabel};

/// Multiplicities periodic in the SU(2) dimension: for dim = period·q + r,
/// irrep `irreps[i]` appears `coef[i]·q + rows[r][i]` times.
pub struct PeriodicTable {
    pub irreps: &'static [u8],
    pub coef: &'static [usize],
    pub period: usize,
    pub rows: &'static [(usize, &'static [usize])],
}

impl PeriodicTable {
    pub fn lookup(&self, dim: usize) -> Option<Vec<(IrrepLabel, usize)>> {
        let q = dim / self.period;
        let r = dim % self.period;
        let (_, consts) = self.rows.iter().find(|(res, _)| *res == r)?;
        Some(
            self.irreps
                .iter()
                .zip(self.coef)
                .zip(consts.iter())
                .map(|((&l, &c), &k)| (IrrepLabel(l), c * q + k))
                .collect(),
        )
    }
}

/// ϱ4, ϱ5 in even dimensions of 2O.
pub const TABLE_2O_RHO45: PeriodicTable = PeriodicTable {
    irreps: &[4, 5],
    coef: &[2, 2],
    period: 24,
    rows: &[
        (0, &[0, 0]),
        (2, &[1, 0]),
        (4, &[0, 0]),
        (6, &[0, 1]),
        (8, &[1, 1]),
        (10, &[1, 0]),
        (12, &[1, 1]),
        (14, &[1, 2]),
        (16, &[1, 1]),
        (18, &[2, 1]),
        (20, &[2, 2]),
        (22, &[1, 2]),
    ],
};

pub const TABLE_2T_HALF: PeriodicTable = PeriodicTable {
    irreps: &[4, 5, 6],
    coef: &[2, 2, 2],
    period: 12,
    rows: &[
        (0, &[0, 0, 0]),
        (2, &[1, 0, 0]),
        (4, &[0, 1, 1]),
        (6, &[1, 1, 1]),
        (8, &[2, 1, 1]),
        (10, &[1, 2, 2]),
    ],
};

pub const TABLE_2T_INT: PeriodicTable = PeriodicTable {
    irreps: &[1, 2, 3, 7],
    coef: &[1, 1, 1, 3],
    period: 12,
    rows: &[
        (1, &[1, 0, 0, 0]),
        (3, &[0, 0, 0, 1]),
        (5, &[0, 1, 1, 1]),
        (7, &[1, 0, 0, 2]),
        (9, &[1, 1, 1, 2]),
        (11, &[0, 1, 1, 3]),
    ],
};

pub const TABLE_2O_HALF: PeriodicTable = PeriodicTable {
    irreps: &[4, 5, 8],
    coef: &[2, 2, 4],
    period: 24,
    rows: &[
        (0, &[0, 0, 0]),
        (2, &[1, 0, 0]),
        (4, &[0, 0, 1]),
        (6, &[0, 1, 1]),
        (8, &[1, 1, 1]),
        (10, &[1, 0, 2]),
        (12, &[1, 1, 2]),
        (14, &[1, 2, 2]),
        (16, &[1, 1, 3]),
        (18, &[2, 1, 3]),
        (20, &[2, 2, 3]),
        (22, &[1, 2, 4]),
    ],
};

pub const TABLE_2O_INT: PeriodicTable = PeriodicTable {
    irreps: &[1, 2, 3, 6, 7],
    coef: &[1, 1, 2, 3, 3],
    period: 24,
    rows: &[
        (1, &[1, 0, 0, 0, 0]),
        (3, &[0, 0, 0, 1, 0]),
        (5, &[0, 0, 1, 0, 1]),
        (7, &[0, 1, 0, 1, 1]),
        (9, &[1, 0, 1, 1, 1]),
        (11, &[0, 0, 1, 2, 1]),
        (13, &[1, 1, 1, 1, 2]),
        (15, &[0, 1, 1, 2, 2]),
        (17, &[1, 0, 2, 2, 2]),
        (19, &[1, 1, 1, 3, 2]),
        (21, &[1, 1, 2, 2, 3]),
        (23, &[0, 1, 2, 3, 3]),
    ],
};

pub const TABLE_2I_HALF: PeriodicTable = PeriodicTable {
    irreps: &[2, 3, 7, 9],
    coef: &[2, 2, 4, 6],
    period: 60,
    rows: &[
        (0, &[0, 0, 0, 0]),
        (2, &[1, 0, 0, 0]),
        (4, &[0, 0, 1, 0]),
        (6, &[0, 0, 0, 1]),
        (8, &[0, 1, 0, 1]),
        (10, &[0, 0, 1, 1]),
        (12, &[1, 0, 1, 1]),
        (14, &[1, 1, 1, 1]),
        (16, &[0, 0, 1, 2]),
        (18, &[0, 1, 1, 2]),
        (20, &[1, 1, 1, 2]),
        (22, &[1, 0, 2, 2]),
        (24, &[1, 1, 2, 2]),
        (26, &[1, 1, 1, 3]),
        (28, &[0, 1, 2, 3]),
        (30, &[1, 1, 2, 3]),
        (32, &[2, 1, 2, 3]),
        (34, &[1, 1, 3, 3]),
        (36, &[1, 1, 2, 4]),
        (38, &[1, 2, 2, 4]),
        (40, &[1, 1, 3, 4]),
        (42, &[2, 1, 3, 4]),
        (44, &[2, 2, 3, 4]),
        (46, &[1, 1, 3, 5]),
        (48, &[1, 2, 3, 5]),
        (50, &[2, 2, 3, 5]),
        (52, &[2, 1, 4, 5]),
        (54, &[2, 2, 4, 5]),
        (56, &[2, 2, 3, 6]),
        (58, &[1, 2, 4, 6]),
    ],
};

pub const TABLE_2I_INT: PeriodicTable = PeriodicTable {
    irreps: &[1, 4, 5, 6, 8],
    coef: &[1, 3, 3, 4, 5],
    period: 60,
    rows: &[
        (1, &[1, 0, 0, 0, 0]),
        (3, &[0, 1, 0, 0, 0]),
        (5, &[0, 0, 0, 0, 1]),
        (7, &[0, 0, 1, 1, 0]),
        (9, &[0, 0, 0, 1, 1]),
        (11, &[0, 1, 1, 0, 1]),
        (13, &[1, 1, 0, 1, 1]),
        (15, &[0, 1, 1, 1, 1]),
        (17, &[0, 0, 1, 1, 2]),
        (19, &[0, 1, 1, 2, 1]),
        (21, &[1, 1, 1, 1, 2]),
        (23, &[0, 2, 1, 1, 2]),
        (25, &[1, 1, 1, 2, 2]),
        (27, &[0, 1, 2, 2, 2]),
        (29, &[0, 1, 1, 2, 3]),
        (31, &[1, 2, 2, 2, 2]),
        (33, &[1, 2, 1, 2, 3]),
        (35, &[0, 2, 2, 2, 3]),
        (37, &[1, 1, 2, 3, 3]),
        (39, &[0, 2, 2, 3, 3]),
        (41, &[1, 2, 2, 2, 4]),
        (43, &[1, 3, 2, 3, 3]),
        (45, &[1, 2, 2, 3, 4]),
        (47, &[0, 2, 3, 3, 4]),
        (49, &[1, 2, 2, 4, 4]),
        (51, &[1, 3, 3, 3, 4]),
        (53, &[1, 3, 2, 3, 5]),
        (55, &[1, 3, 3, 4, 4]),
        (57, &[1, 2, 3, 4, 5]),
        (59, &[0, 3, 3, 4, 5]),
    ],
};

/// Half-integer and integer tables of a group.
pub fn tables(group: GroupLabel) -> [&'static PeriodicTable; 2] {
    match group {
        GroupLabel::Tetrahedral => [&TABLE_2T_HALF, &TABLE_2T_INT],
        GroupLabel::Octahedral => [&TABLE_2O_HALF, &TABLE_2O_INT],
        GroupLabel::Icosahedral => [&TABLE_2I_HALF, &TABLE_2I_INT],
    }
}

/// Expected multiplicity of every irrep in the given dimension; irreps
/// absent from the matching parity table have multiplicity zero.
pub fn expected_multiplicities(group: GroupLabel, irreps: &[IrrepLabel], dim: usize) -> Vec<usize> {
    let [half, int] = tables(group);
    let table = if dim % 2 == 0 { half } else { int };
    let found = table.lookup(dim).expect("residue present in table");
    irreps
        .iter()
        .map(|l| found.iter().find(|(x, _)| x == l).map_or(0, |(_, m)| *m))
        .collect()
}

/// (2j, irrep, [(2m, amplitude)] for |0̄⟩, [(2m, amplitude)] for |1̄⟩).
pub type TabulatedCode = (u32, u8, Vec<(i32, f64)>, Vec<(i32, f64)>);

/// The four smallest 2O codes. The spin-7/2 ϱ4 |1̄⟩ is printed with
/// amplitudes √(5/2), √(7/2); the normalized values √(5/12), √(7/12) are used.
pub fn tabulated_codes() -> Vec<TabulatedCode> {
    let s = f64::sqrt;
    vec![
        (5, 5, vec![(5, s(1.0 / 6.0)), (-3, -s(5.0 / 6.0))], vec![(3, -s(5.0 / 6.0)), (-5, s(1.0 / 6.0))]),
        (7, 5, vec![(5, s(3.0) / 2.0), (-3, -0.5)], vec![(3, 0.5), (-5, -s(3.0) / 2.0)]),
        (7, 4, vec![(1, s(7.0 / 12.0)), (-7, s(5.0 / 12.0))], vec![(7, -s(5.0 / 12.0)), (-1, -s(7.0 / 12.0))]),
        (
            9,
            4,
            vec![(9, s(6.0) / 4.0), (1, s(21.0) / 6.0), (-7, s(6.0) / 12.0)],
            vec![(7, s(6.0) / 12.0), (-1, s(21.0) / 6.0), (-9, s(6.0) / 4.0)],
        ),
    ]
}
