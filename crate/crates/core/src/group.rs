//! The binary polyhedral groups 2T, 2O and 2I inside SU(2): enumeration,
//! conjugacy classes, character tables, and branching multiplicities of their
//! irreps inside spin-j representations.
//!
//! Class and irrep labels follow the GroupNames convention. Character values
//! are transcribed closed forms; they are validated by orthogonality rather
//! than computed.
//!
//! Orientation conventions:
//! * 2T is generated by −iσz and ½(1 − iσx − iσy − iσz) (the Hurwitz units).
//! * 2O is generated by the phase gate S and the Hadamard gate H.
//! * 2I is generated by two order-10 elements: the 2π/5 rotation about ẑ and
//!   the 2π/5 rotation about (2/√5, 0, 1/√5), the neighbouring five-fold axis
//!   in the xz-plane. This places an icosahedron vertex on ẑ and a two-fold
//!   axis on ŷ.
//! * In 2T the two classes of order-3 elements share size and angle. Class 3a
//!   is the one containing ½(−1 − iσx − iσy − iσz); 3b holds the inverses,
//!   6a = −3a and 6b = −3b.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::su2::{represent_with, angular_momentum_ops, weyl_character, GroupElement, SpinJ};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupLabel {
    #[serde(rename = "2T")]
    Tetrahedral,
    #[serde(rename = "2O")]
    Octahedral,
    #[serde(rename = "2I")]
    Icosahedral,
}

impl GroupLabel {
    pub const ALL: [GroupLabel; 3] = [
        GroupLabel::Tetrahedral,
        GroupLabel::Octahedral,
        GroupLabel::Icosahedral,
    ];

    pub fn order(self) -> usize {
        match self {
            GroupLabel::Tetrahedral => 24,
            GroupLabel::Octahedral => 48,
            GroupLabel::Icosahedral => 120,
        }
    }

    /// Period in the SU(2) dimension after which multiplicity patterns repeat.
    pub fn period(self) -> usize {
        match self {
            GroupLabel::Tetrahedral => 12,
            GroupLabel::Octahedral => 24,
            GroupLabel::Icosahedral => 60,
        }
    }

    /// The irrep equal to the restriction of the spin-1/2 representation.
    pub fn defining_irrep(self) -> IrrepLabel {
        match self {
            GroupLabel::Tetrahedral | GroupLabel::Octahedral => IrrepLabel(4),
            GroupLabel::Icosahedral => IrrepLabel(2),
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupLabel::Tetrahedral => "2T",
            GroupLabel::Octahedral => "2O",
            GroupLabel::Icosahedral => "2I",
        })
    }
}

impl FromStr for GroupLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "2T" => Ok(GroupLabel::Tetrahedral),
            "2O" => Ok(GroupLabel::Octahedral),
            "2I" => Ok(GroupLabel::Icosahedral),
            _ => Err(Error::InvalidArgument(format!(
                "unknown group {s:?} (expected 2T, 2O or 2I)"
            ))),
        }
    }
}

/// Irrep ϱ_n, numbered as in the character tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct IrrepLabel(pub u8);

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rho{}", self.0)
    }
}

impl FromStr for IrrepLabel {
    type Err = Error;

    /// Accepts "rho4", "ϱ4" or "4".
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let digits = t
            .strip_prefix("rho")
            .or_else(|| t.strip_prefix('ϱ'))
            .unwrap_or(t);
        digits
            .parse::<u8>()
            .ok()
            .filter(|&n| n >= 1)
            .map(IrrepLabel)
            .ok_or_else(|| Error::InvalidArgument(format!("cannot parse irrep label {s:?}")))
    }
}

impl From<IrrepLabel> for String {
    fn from(l: IrrepLabel) -> String {
        l.to_string()
    }
}

impl TryFrom<String> for IrrepLabel {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Clone, Debug)]
pub struct IrrepRow {
    pub label: IrrepLabel,
    pub dim: usize,
    pub values: Vec<C64>,
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub group: GroupLabel,
    pub class_labels: Vec<&'static str>,
    pub class_sizes: Vec<usize>,
    pub class_thetas: Vec<f64>,
    pub irreps: Vec<IrrepRow>,
}

impl CharacterTable {
    pub fn for_group(group: GroupLabel) -> Self {
        match group {
            GroupLabel::Tetrahedral => table_2t(),
            GroupLabel::Octahedral => table_2o(),
            GroupLabel::Icosahedral => table_2i(),
        }
    }

    pub fn row(&self, label: IrrepLabel) -> Result<&IrrepRow> {
        self.irreps
            .iter()
            .find(|r| r.label == label)
            .ok_or_else(|| Error::InvalidArgument(format!("{} has no irrep {label}", self.group)))
    }

    pub fn order(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    /// ⟨χ1, χ2⟩ = (1/|G|) Σ_classes |[g]| χ1* χ2.
    pub fn inner_product(&self, chi1: &[C64], chi2: &[C64]) -> C64 {
        assert_eq!(chi1.len(), self.class_sizes.len());
        assert_eq!(chi2.len(), self.class_sizes.len());
        let s: C64 = self
            .class_sizes
            .iter()
            .zip(chi1.iter().zip(chi2))
            .map(|(&n, (a, b))| a.conj() * b * n as f64)
            .sum();
        s / self.order() as f64
    }

    /// Largest deviation of the row Gram matrix from the identity.
    pub fn row_orthonormality_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for a in &self.irreps {
            for b in &self.irreps {
                let ip = self.inner_product(&a.values, &b.values);
                let target = if a.label == b.label { 1.0 } else { 0.0 };
                err = err.max((ip - target).norm());
            }
        }
        err
    }

    /// Largest deviation from Σ_ϱ χ_ϱ(c)* χ_ϱ(c') = δ_cc' |G|/|c|.
    pub fn column_orthogonality_error(&self) -> f64 {
        let n = self.class_sizes.len();
        let mut err: f64 = 0.0;
        for c in 0..n {
            for c2 in 0..n {
                let s: C64 = self
                    .irreps
                    .iter()
                    .map(|r| r.values[c].conj() * r.values[c2])
                    .sum();
                let target = if c == c2 {
                    self.order() as f64 / self.class_sizes[c] as f64
                } else {
                    0.0
                };
                err = err.max((s - target).norm());
            }
        }
        err
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn row(n: u8, values: Vec<C64>) -> IrrepRow {
    IrrepRow {
        label: IrrepLabel(n),
        dim: values[0].re.round() as usize,
        values,
    }
}

fn reals(xs: &[f64]) -> Vec<C64> {
    xs.iter().map(|&x| re(x)).collect()
}

fn table_2t() -> CharacterTable {
    let w = |k: f64| C64::from_polar(1.0, k * PI / 3.0);
    let one = re(1.0);
    CharacterTable {
        group: GroupLabel::Tetrahedral,
        class_labels: vec!["1", "2", "3a", "3b", "4", "6a", "6b"],
        class_sizes: vec![1, 1, 4, 4, 6, 4, 4],
        class_thetas: vec![0.0, 2.0 * PI, 4.0 * PI / 3.0, 4.0 * PI / 3.0, PI, 2.0 * PI / 3.0, 2.0 * PI / 3.0],
        irreps: vec![
            row(1, reals(&[1.0; 7])),
            row(2, vec![one, one, w(4.0), w(2.0), one, w(4.0), w(2.0)]),
            row(3, vec![one, one, w(2.0), w(4.0), one, w(2.0), w(4.0)]),
            row(4, reals(&[2.0, -2.0, -1.0, -1.0, 0.0, 1.0, 1.0])),
            row(5, vec![re(2.0), re(-2.0), w(5.0), w(1.0), re(0.0), w(2.0), w(4.0)]),
            row(6, vec![re(2.0), re(-2.0), w(1.0), w(5.0), re(0.0), w(4.0), w(2.0)]),
            row(7, reals(&[3.0, 3.0, 0.0, 0.0, -1.0, 0.0, 0.0])),
        ],
    }
}

fn table_2o() -> CharacterTable {
    let r2 = 2f64.sqrt();
    CharacterTable {
        group: GroupLabel::Octahedral,
        class_labels: vec!["1", "2", "3", "4a", "4b", "6", "8a", "8b"],
        class_sizes: vec![1, 1, 8, 6, 12, 8, 6, 6],
        class_thetas: vec![0.0, 2.0 * PI, 4.0 * PI / 3.0, PI, PI, 2.0 * PI / 3.0, PI / 2.0, 3.0 * PI / 2.0],
        irreps: vec![
            row(1, reals(&[1.0; 8])),
            row(2, reals(&[1.0, 1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0])),
            row(3, reals(&[2.0, 2.0, -1.0, 2.0, 0.0, -1.0, 0.0, 0.0])),
            row(4, reals(&[2.0, -2.0, -1.0, 0.0, 0.0, 1.0, r2, -r2])),
            row(5, reals(&[2.0, -2.0, -1.0, 0.0, 0.0, 1.0, -r2, r2])),
            row(6, reals(&[3.0, 3.0, 0.0, -1.0, -1.0, 0.0, 1.0, 1.0])),
            row(7, reals(&[3.0, 3.0, 0.0, -1.0, 1.0, 0.0, -1.0, -1.0])),
            row(8, reals(&[4.0, -4.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0])),
        ],
    }
}

fn table_2i() -> CharacterTable {
    let s5 = 5f64.sqrt();
    // (1 ± √5)/2
    let gp = (1.0 + s5) / 2.0;
    let gm = (1.0 - s5) / 2.0;
    CharacterTable {
        group: GroupLabel::Icosahedral,
        class_labels: vec!["1", "2", "3", "4", "5a", "5b", "6", "10a", "10b"],
        class_sizes: vec![1, 1, 20, 30, 12, 12, 20, 12, 12],
        class_thetas: vec![
            0.0,
            2.0 * PI,
            4.0 * PI / 3.0,
            PI,
            4.0 * PI / 5.0,
            8.0 * PI / 5.0,
            2.0 * PI / 3.0,
            2.0 * PI / 5.0,
            6.0 * PI / 5.0,
        ],
        irreps: vec![
            row(1, reals(&[1.0; 9])),
            row(2, reals(&[2.0, -2.0, -1.0, 0.0, -gm, -gp, 1.0, gp, gm])),
            row(3, reals(&[2.0, -2.0, -1.0, 0.0, -gp, -gm, 1.0, gm, gp])),
            row(4, reals(&[3.0, 3.0, 0.0, -1.0, gm, gp, 0.0, gp, gm])),
            row(5, reals(&[3.0, 3.0, 0.0, -1.0, gp, gm, 0.0, gm, gp])),
            row(6, reals(&[4.0, 4.0, 1.0, 0.0, -1.0, -1.0, 1.0, -1.0, -1.0])),
            row(7, reals(&[4.0, -4.0, 1.0, 0.0, -1.0, -1.0, -1.0, 1.0, 1.0])),
            row(8, reals(&[5.0, 5.0, -1.0, 1.0, 0.0, 0.0, -1.0, 0.0, 0.0])),
            row(9, reals(&[6.0, -6.0, 0.0, 0.0, 1.0, 1.0, 0.0, -1.0, -1.0])),
        ],
    }
}

#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub label: &'static str,
    pub theta: f64,
    pub size: usize,
    pub element_order: usize,
    /// Indices into [`FiniteSubgroup::elements`].
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FiniteSubgroup {
    pub label: GroupLabel,
    pub elements: Vec<GroupElement>,
    /// Classes in character-table column order.
    pub classes: Vec<ConjugacyClass>,
    /// Class index of each element.
    pub class_of: Vec<usize>,
    pub table: CharacterTable,
}

impl FiniteSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.iter().position(|h| h.approx_eq(g))
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index_of(g).is_some()
    }

    pub fn class_by_label(&self, label: &str) -> Option<&ConjugacyClass> {
        self.classes.iter().find(|c| c.label == label)
    }

    /// Character of an irrep evaluated on element `index`.
    pub fn irrep_character(&self, irrep: IrrepLabel, index: usize) -> Result<C64> {
        Ok(self.table.row(irrep)?.values[self.class_of[index]])
    }
}

/// Generators of each group in the orientation documented at module level.
pub fn generators(label: GroupLabel) -> Vec<GroupElement> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match label {
        GroupLabel::Tetrahedral => vec![
            GroupElement::new_unchecked(0.0, 0.0, 0.0, 1.0),
            GroupElement::new_unchecked(0.5, 0.5, 0.5, 0.5),
        ],
        GroupLabel::Octahedral => vec![
            GroupElement::new_unchecked(h, 0.0, 0.0, h),
            GroupElement::new_unchecked(0.0, h, 0.0, h),
        ],
        GroupLabel::Icosahedral => {
            let (s, c) = (PI / 5.0).sin_cos();
            let r5 = 5f64.sqrt();
            vec![
                GroupElement::new_unchecked(c, 0.0, 0.0, s),
                GroupElement::new_unchecked(c, s * 2.0 / r5, 0.0, s / r5),
            ]
        }
    }
}

/// Closure of a generating set under multiplication.
pub fn closure(gens: &[GroupElement], limit: usize) -> Result<Vec<GroupElement>> {
    let mut elements = vec![GroupElement::IDENTITY];
    let mut frontier = elements.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for g in gens {
                let p = *a * *g;
                if !elements.iter().any(|e| e.approx_eq(&p)) {
                    elements.push(p);
                    next.push(p);
                    if elements.len() > limit {
                        return Err(Error::ClosureOverflow { limit });
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(elements)
}

/// Enumerates the group and classifies its conjugacy classes.
pub fn enumerate_group(label: GroupLabel) -> Result<FiniteSubgroup> {
    let expected = label.order();
    let elements = closure(&generators(label), 2 * expected)?;
    if elements.len() != expected {
        return Err(Error::GroupOrder {
            label: label.to_string(),
            found: elements.len(),
            expected,
        });
    }
    let table = CharacterTable::for_group(label);
    let classes = classify(label, &elements, &table)?;
    let mut class_of = vec![usize::MAX; elements.len()];
    for (c, class) in classes.iter().enumerate() {
        for &m in &class.members {
            class_of[m] = c;
        }
    }
    Ok(FiniteSubgroup {
        label,
        elements,
        classes,
        class_of,
        table,
    })
}

fn find(elements: &[GroupElement], g: &GroupElement) -> Option<usize> {
    elements.iter().position(|h| h.approx_eq(g))
}

/// Conjugation orbits, matched to table labels by (size, θ); the 2T order-3
/// and order-6 pairs are split by the convention in the module docs.
pub fn classify(
    label: GroupLabel,
    elements: &[GroupElement],
    table: &CharacterTable,
) -> Result<Vec<ConjugacyClass>> {
    let n = elements.len();
    let mut assigned = vec![false; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut orbit = Vec::new();
        for h in elements {
            let c = *h * elements[i] * h.inverse();
            let k = find(elements, &c).ok_or_else(|| {
                Error::CharacterMismatch("group not closed under conjugation".into())
            })?;
            if !assigned[k] {
                assigned[k] = true;
                orbit.push(k);
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }

    let q3 = GroupElement::new_unchecked(-0.5, 0.5, 0.5, 0.5);
    let mut slots: Vec<Option<ConjugacyClass>> = vec![None; table.class_labels.len()];
    for orbit in orbits {
        let rep = elements[orbit[0]];
        let theta = rep.theta();
        let size = orbit.len();
        for &m in &orbit {
            if (elements[m].w - rep.w).abs() > 1e-9 {
                return Err(Error::CharacterMismatch(
                    "class members with different rotation angles".into(),
                ));
            }
        }
        let candidates: Vec<usize> = (0..table.class_labels.len())
            .filter(|&c| table.class_sizes[c] == size && (table.class_thetas[c] - theta).abs() < 1e-6)
            .collect();
        let slot = match candidates.as_slice() {
            [c] => *c,
            [a, b] if label == GroupLabel::Tetrahedral => {
                // 3a/3b or 6a/6b: 3a contains q3, 6a contains −q3.
                let marker = if theta > PI { q3 } else { q3.neg() };
                let has_marker = orbit.iter().any(|&m| elements[m].approx_eq(&marker));
                if has_marker {
                    *a
                } else {
                    *b
                }
            }
            _ => return Err(Error::UnmatchedClass { size, theta }),
        };
        if slots[slot].is_some() {
            return Err(Error::UnmatchedClass { size, theta });
        }
        slots[slot] = Some(ConjugacyClass {
            label: table.class_labels[slot],
            theta: table.class_thetas[slot],
            size,
            element_order: rep.order().unwrap_or(0),
            members: orbit,
        });
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(c, s)| {
            s.ok_or_else(|| {
                Error::CharacterMismatch(format!("no elements found for class {}", table.class_labels[c]))
            })
        })
        .collect()
}

/// ⟨χ1, χ2⟩ over the classes of `group`.
pub fn char_inner_product(chi1: &[C64], chi2: &[C64], group: &FiniteSubgroup) -> C64 {
    group.table.inner_product(chi1, chi2)
}

/// Character of the spin representation restricted to the group, one value
/// per class, from χ_d = χ_2·χ_{d−1} − χ_{d−2} seeded with the table's
/// defining irrep. Each value is checked against the Weyl formula.
pub fn reducible_character(spin: SpinJ, group: &FiniteSubgroup) -> Result<Vec<C64>> {
    let nc = group.classes.len();
    let chi2 = group.table.row(group.label.defining_irrep())?.values.clone();
    let mut prev = vec![C64::new(0.0, 0.0); nc];
    let mut cur = vec![C64::new(1.0, 0.0); nc];
    for _ in 1..spin.dim() {
        let next: Vec<C64> = (0..nc).map(|c| chi2[c] * cur[c] - prev[c]).collect();
        prev = cur;
        cur = next;
    }
    for (c, class) in group.classes.iter().enumerate() {
        let weyl = weyl_character(class.theta, spin.dim());
        if (cur[c] - weyl).norm() > 1e-9 * (1.0 + weyl.abs()) {
            return Err(Error::CharacterMismatch(format!(
                "dim {} class {}: recursion {} vs Weyl {}",
                spin.dim(),
                class.label,
                cur[c],
                weyl
            )));
        }
    }
    Ok(cur)
}

fn round_multiplicity(value: C64) -> Result<usize> {
    let r = value.re.round();
    if value.im.abs() > 1e-9 || (value.re - r).abs() > 1e-9 || r < 0.0 {
        return Err(Error::NonIntegerMultiplicity { value });
    }
    Ok(r as usize)
}

/// Multiplicity of an irrep in the restriction of the spin representation.
pub fn multiplicity(spin: SpinJ, group: &FiniteSubgroup, irrep: IrrepLabel) -> Result<usize> {
    let chi = reducible_character(spin, group)?;
    let row = group.table.row(irrep)?;
    round_multiplicity(char_inner_product(&row.values, &chi, group))
}

/// Multiplicity from explicit traces of D(g) over all group elements; shares
/// nothing with the recursion path except the table row.
pub fn multiplicity_by_traces(spin: SpinJ, group: &FiniteSubgroup, irrep: IrrepLabel) -> Result<usize> {
    let ops = angular_momentum_ops(spin);
    let mut s = C64::new(0.0, 0.0);
    for (i, g) in group.elements.iter().enumerate() {
        s += group.irrep_character(irrep, i)?.conj() * represent_with(g, &ops).trace();
    }
    round_multiplicity(s / group.order() as f64)
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityRow {
    pub dim: usize,
    pub spin: SpinJ,
    pub multiplicities: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityTable {
    pub group: GroupLabel,
    pub irreps: Vec<IrrepLabel>,
    pub irrep_dims: Vec<usize>,
    pub rows: Vec<MultiplicityRow>,
    pub period: usize,
    /// Dimensions d for which mult(d + period) ≠ mult(d) + increment.
    pub period_violations: Vec<usize>,
}

impl MultiplicityTable {
    pub fn get(&self, dim: usize, irrep: IrrepLabel) -> Option<usize> {
        let col = self.irreps.iter().position(|&l| l == irrep)?;
        self.rows.iter().find(|r| r.dim == dim).map(|r| r.multiplicities[col])
    }
}

/// Per-period growth of an irrep's multiplicity: its dimension when its
/// parity (faithful on −1 or not) matches that of the SU(2) dimension d, else 0.
pub fn period_increment(group: &FiniteSubgroup, irrep: IrrepLabel, dim: usize) -> Result<usize> {
    let row = group.table.row(irrep)?;
    let spinorial = row.values[1].re < 0.0;
    Ok(if spinorial == (dim % 2 == 0) { row.dim } else { 0 })
}

/// Multiplicities of every irrep for every SU(2) dimension 1..=max_dim.
pub fn multiplicity_table(group: &FiniteSubgroup, max_dim: usize) -> Result<MultiplicityTable> {
    if max_dim == 0 {
        return Err(Error::InvalidArgument("max_dim must be at least 1".into()));
    }
    let irreps: Vec<IrrepLabel> = group.table.irreps.iter().map(|r| r.label).collect();
    let irrep_dims = group.table.irreps.iter().map(|r| r.dim).collect();
    let mut rows = Vec::with_capacity(max_dim);
    for dim in 1..=max_dim {
        let spin = SpinJ::from_dim(dim)?;
        let chi = reducible_character(spin, group)?;
        let multiplicities = group
            .table
            .irreps
            .iter()
            .map(|r| round_multiplicity(char_inner_product(&r.values, &chi, group)))
            .collect::<Result<Vec<_>>>()?;
        rows.push(MultiplicityRow {
            dim,
            spin,
            multiplicities,
        });
    }
    let period = group.label.period();
    let mut period_violations = Vec::new();
    for dim in 1..=max_dim.saturating_sub(period) {
        let a = &rows[dim - 1].multiplicities;
        let b = &rows[dim + period - 1].multiplicities;
        for (k, &irrep) in irreps.iter().enumerate() {
            if b[k] != a[k] + period_increment(group, irrep, dim)? {
                period_violations.push(dim);
                break;
            }
        }
    }
    Ok(MultiplicityTable {
        group: group.label,
        irreps,
        irrep_dims,
        rows,
        period,
        period_violations,
    })
}
