//! Spin-j angular momentum and the representation of SU(2) elements as
//! spin-j unitaries.
//!
//! Basis order everywhere is m descending: index k holds |j, j - k>.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{expm_hermitian_generator, CMatrix, C64};

/// A spin quantum number stored as the integer 2j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SpinJ {
    twice_j: u32,
}

impl SpinJ {
    pub const fn from_twice(twice_j: u32) -> Self {
        Self { twice_j }
    }

    /// Spin whose Hilbert space has dimension `dim` (≥ 1).
    pub fn from_dim(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        Ok(Self::from_twice(dim as u32 - 1))
    }

    pub fn twice_j(self) -> u32 {
        self.twice_j
    }

    pub fn j(self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    pub fn is_half_integer(self) -> bool {
        self.twice_j % 2 == 1
    }

    /// 2m for basis index k.
    pub fn twice_m(self, index: usize) -> i32 {
        self.twice_j as i32 - 2 * index as i32
    }

    pub fn m(self, index: usize) -> f64 {
        self.twice_m(index) as f64 / 2.0
    }

    /// Basis index of the state with the given 2m, if it exists.
    pub fn index_of_twice_m(self, twice_m: i32) -> Option<usize> {
        let tj = self.twice_j as i32;
        if twice_m.abs() > tj || (tj - twice_m) % 2 != 0 {
            return None;
        }
        Some(((tj - twice_m) / 2) as usize)
    }

    /// j(j+1).
    pub fn casimir(self) -> f64 {
        self.j() * (self.j() + 1.0)
    }
}

impl fmt::Display for SpinJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_j % 2 == 0 {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

impl FromStr for SpinJ {
    type Err = Error;

    /// Accepts "5/2", "3", or "2.5".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse spin {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => Ok(Self::from_twice(num)),
                "1" => Ok(Self::from_twice(2 * num)),
                _ => Err(bad()),
            }
        } else {
            let x: f64 = s.parse().map_err(|_| bad())?;
            let twice = 2.0 * x;
            if x < 0.0 || (twice - twice.round()).abs() > 1e-9 {
                return Err(bad());
            }
            Ok(Self::from_twice(twice.round() as u32))
        }
    }
}

impl From<SpinJ> for String {
    fn from(s: SpinJ) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for SpinJ {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Formats 2m as "5/2", "-3/2", "1".
pub fn format_twice_m(twice_m: i32) -> String {
    if twice_m % 2 == 0 {
        format!("{}", twice_m / 2)
    } else {
        format!("{twice_m}/2")
    }
}

/// Tolerance for component-wise quaternion equality.
pub const ELEMENT_TOL: f64 = 1e-9;

/// An SU(2) element w·1 − i(x σx + y σy + z σz) stored as a unit quaternion.
/// q and −q are different elements.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GroupElement {
    pub const IDENTITY: Self = Self::new_unchecked(1.0, 0.0, 0.0, 0.0);
    pub const MINUS_IDENTITY: Self = Self::new_unchecked(-1.0, 0.0, 0.0, 0.0);

    pub const fn new_unchecked(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Normalizes; rejects quaternions whose norm is off by more than 1e-9.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "quaternion norm {n} is not 1"
            )));
        }
        Ok(Self::new_unchecked(w / n, x / n, y / n, z / n))
    }

    pub fn vector(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn inverse(&self) -> Self {
        Self::new_unchecked(self.w, -self.x, -self.y, -self.z)
    }

    pub fn neg(&self) -> Self {
        Self::new_unchecked(-self.w, -self.x, -self.y, -self.z)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.w - other.w)
            .abs()
            .max((self.x - other.x).abs())
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.distance(other) < ELEMENT_TOL
    }

    /// Rotation angle θ ∈ [0, 2π] in exp(−iθ n̂·σ/2).
    pub fn theta(&self) -> f64 {
        let s = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        2.0 * s.atan2(self.w)
    }

    /// (n̂, θ) with θ ∈ [0, 2π]. Near θ = 0 or 2π the axis is arbitrary and ẑ is returned.
    pub fn axis_angle(&self) -> ([f64; 3], f64) {
        let s = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        if s < 1e-12 {
            let theta = if self.w > 0.0 { 0.0 } else { 2.0 * std::f64::consts::PI };
            return ([0.0, 0.0, 1.0], theta);
        }
        ([self.x / s, self.y / s, self.z / s], 2.0 * s.atan2(self.w))
    }

    /// Smallest k ≥ 1 with g^k = 1 (up to 1000).
    pub fn order(&self) -> Option<usize> {
        let mut p = *self;
        for k in 1..=1000 {
            if p.approx_eq(&Self::IDENTITY) {
                return Some(k);
            }
            p = p * *self;
        }
        None
    }

    /// The 2x2 special-unitary matrix.
    pub fn su2_matrix(&self) -> CMatrix {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        CMatrix::new(
            2,
            2,
            vec![
                C64::new(w, -z),
                C64::new(-y, -x),
                C64::new(y, -x),
                C64::new(w, z),
            ],
        )
        .expect("2x2")
    }

    /// The SO(3) rotation R(g) (row-major 3x3).
    pub fn rotation_matrix(&self) -> [[f64; 3]; 3] {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        [
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        ]
    }

    pub fn rotate(&self, v: [f64; 3]) -> [f64; 3] {
        let r = self.rotation_matrix();
        [
            r[0][0] * v[0] + r[0][1] * v[1] + r[0][2] * v[2],
            r[1][0] * v[0] + r[1][1] * v[1] + r[1][2] * v[2],
            r[2][0] * v[0] + r[2][1] * v[1] + r[2][2] * v[2],
        ]
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    /// Matrix product of the SU(2) matrices (Hamilton product).
    fn mul(self, o: GroupElement) -> GroupElement {
        let (w1, x1, y1, z1) = (self.w, self.x, self.y, self.z);
        let (w2, x2, y2, z2) = (o.w, o.x, o.y, o.z);
        GroupElement::new_unchecked(
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 + y1 * w2 + z1 * x2 - x1 * z2,
            w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
        )
    }
}

/// exp(−iθ n̂·σ/2) as a quaternion.
pub fn axis_angle(n_hat: [f64; 3], theta: f64) -> Result<GroupElement> {
    let n = (n_hat[0].powi(2) + n_hat[1].powi(2) + n_hat[2].powi(2)).sqrt();
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "rotation axis has norm {n}, expected 1"
        )));
    }
    let (s, c) = (theta / 2.0).sin_cos();
    Ok(GroupElement::new_unchecked(
        c,
        n_hat[0] / n * s,
        n_hat[1] / n * s,
        n_hat[2] / n * s,
    ))
}

/// Axis selector for J_x, J_y, J_z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn unit(self) -> [f64; 3] {
        match self {
            Axis::X => [1.0, 0.0, 0.0],
            Axis::Y => [0.0, 1.0, 0.0],
            Axis::Z => [0.0, 0.0, 1.0],
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Angular momentum operators in the m-descending basis.
#[derive(Clone, Debug)]
pub struct AngularMomentumOps {
    pub spin: SpinJ,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
    pub jplus: CMatrix,
    pub jminus: CMatrix,
}

impl AngularMomentumOps {
    pub fn get(&self, axis: Axis) -> &CMatrix {
        match axis {
            Axis::X => &self.jx,
            Axis::Y => &self.jy,
            Axis::Z => &self.jz,
        }
    }

    /// n̂·J.
    pub fn along(&self, n: [f64; 3]) -> CMatrix {
        let mut h = self.jx.scale_real(n[0]);
        h += &self.jy.scale_real(n[1]);
        h += &self.jz.scale_real(n[2]);
        h
    }

    /// J² = jx² + jy² + jz².
    pub fn casimir(&self) -> CMatrix {
        let mut c = self.jx.matmul(&self.jx);
        c += &self.jy.matmul(&self.jy);
        c += &self.jz.matmul(&self.jz);
        c
    }
}

pub fn angular_momentum_ops(spin: SpinJ) -> AngularMomentumOps {
    let d = spin.dim();
    let j = spin.j();
    let mut jplus = CMatrix::zeros(d, d);
    // <j, m+1| J+ |j, m>: column k holds m = j - k, row k-1 holds m + 1.
    for k in 1..d {
        let m = spin.m(k);
        jplus[(k - 1, k)] = C64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jminus = jplus.adjoint();
    let jx = (&jplus + &jminus).scale_real(0.5);
    let jy = (&jplus - &jminus).scale(C64::new(0.0, -0.5));
    let jz = CMatrix::from_real_diag(&(0..d).map(|k| spin.m(k)).collect::<Vec<_>>());
    AngularMomentumOps {
        spin,
        jx,
        jy,
        jz,
        jplus,
        jminus,
    }
}

/// D(g) = exp(−iθ n̂·J) for g = exp(−iθ n̂·σ/2).
pub fn represent(g: &GroupElement, spin: SpinJ) -> CMatrix {
    represent_with(g, &angular_momentum_ops(spin))
}

/// [`represent`] reusing precomputed operators.
pub fn represent_with(g: &GroupElement, ops: &AngularMomentumOps) -> CMatrix {
    let d = ops.spin.dim();
    let v = g.vector();
    let s = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if s < 1e-12 {
        let sign = if g.w > 0.0 || !ops.spin.is_half_integer() {
            1.0
        } else {
            -1.0
        };
        return CMatrix::identity(d).scale_real(sign);
    }
    let (n, theta) = g.axis_angle();
    expm_hermitian_generator(&ops.along(n), theta).expect("n·J is Hermitian")
}

/// Weyl character sin(dθ/2)/sin(θ/2) of the spin representation at g.
pub fn character_value(g: &GroupElement, spin: SpinJ) -> f64 {
    weyl_character(g.theta(), spin.dim())
}

/// Weyl character as a function of the rotation angle θ ∈ [0, 2π].
pub fn weyl_character(theta: f64, dim: usize) -> f64 {
    let d = dim as f64;
    let half = theta / 2.0;
    let s = half.sin();
    if s.abs() < 1e-9 {
        // θ = 0 gives d; θ = 2π gives (−1)^(d+1) d.
        return if half.cos() > 0.0 || dim % 2 == 1 { d } else { -d };
    }
    (d * half).sin() / s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn spin_parsing() {
        assert_eq!("5/2".parse::<SpinJ>().unwrap().twice_j(), 5);
        assert_eq!("2.5".parse::<SpinJ>().unwrap().twice_j(), 5);
        assert_eq!("3".parse::<SpinJ>().unwrap().twice_j(), 6);
        assert!("1/3".parse::<SpinJ>().is_err());
        assert!("0.3".parse::<SpinJ>().is_err());
        assert!("-1".parse::<SpinJ>().is_err());
        assert_eq!(SpinJ::from_twice(13).to_string(), "13/2");
        assert_eq!(SpinJ::from_twice(4).to_string(), "2");
    }

    #[test]
    fn index_of_twice_m() {
        let s = SpinJ::from_twice(5);
        assert_eq!(s.index_of_twice_m(5), Some(0));
        assert_eq!(s.index_of_twice_m(-5), Some(5));
        assert_eq!(s.index_of_twice_m(-3), Some(4));
        assert_eq!(s.index_of_twice_m(4), None);
        assert_eq!(s.index_of_twice_m(7), None);
    }

    #[test]
    fn spin_half_is_pauli_over_two() {
        let ops = angular_momentum_ops(SpinJ::from_twice(1));
        let sx = CMatrix::new(2, 2, vec![C64::new(0.0, 0.0), C64::new(0.5, 0.0), C64::new(0.5, 0.0), C64::new(0.0, 0.0)]).unwrap();
        assert!(ops.jx.max_abs_diff(&sx) < 1e-15);
        assert!(ops.jz.max_abs_diff(&CMatrix::from_real_diag(&[0.5, -0.5])) < 1e-15);
    }

    #[test]
    fn spin_five_halves_jz() {
        let ops = angular_momentum_ops(SpinJ::from_twice(5));
        let expect = CMatrix::from_real_diag(&[2.5, 1.5, 0.5, -0.5, -1.5, -2.5]);
        assert_eq!(ops.jz, expect);
    }

    #[test]
    fn ladder_element_spin_seven_halves() {
        // √(j(j+1) − m(m+1)) at j = 7/2, m = 5/2: √(63/4 − 35/4) = √7.
        let ops = angular_momentum_ops(SpinJ::from_twice(7));
        assert!((ops.jplus[(0, 1)].re - 7f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn commutators_and_casimir() {
        for tj in 0..12 {
            let spin = SpinJ::from_twice(tj);
            let ops = angular_momentum_ops(spin);
            let i = C64::new(0.0, 1.0);
            assert!(ops.jx.commutator(&ops.jy).max_abs_diff(&ops.jz.scale(i)) < 1e-12);
            assert!(ops.jy.commutator(&ops.jz).max_abs_diff(&ops.jx.scale(i)) < 1e-12);
            assert!(ops.jz.commutator(&ops.jx).max_abs_diff(&ops.jy.scale(i)) < 1e-12);
            let cas = CMatrix::identity(spin.dim()).scale_real(spin.casimir());
            assert!(ops.casimir().max_abs_diff(&cas) < 1e-12);
        }
    }

    #[test]
    fn axis_angle_generators() {
        let s = axis_angle([0.0, 0.0, 1.0], PI / 2.0).unwrap();
        assert!(s.approx_eq(&GroupElement::new_unchecked(FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2)));
        let h = axis_angle([FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2], PI).unwrap();
        assert!(h.approx_eq(&GroupElement::new_unchecked(0.0, FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2)));
        let id = axis_angle([0.0, 1.0, 0.0], 0.0).unwrap();
        assert!(id.approx_eq(&GroupElement::IDENTITY));
        assert!(axis_angle([1.0, 1.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn represent_trivial_cases() {
        for tj in 0..8 {
            let spin = SpinJ::from_twice(tj);
            let d = spin.dim();
            assert_eq!(represent(&GroupElement::IDENTITY, spin), CMatrix::identity(d));
        }
        let m1 = GroupElement::MINUS_IDENTITY;
        assert_eq!(
            represent(&m1, SpinJ::from_twice(1)),
            CMatrix::identity(2).scale_real(-1.0)
        );
        assert_eq!(represent(&m1, SpinJ::from_twice(2)), CMatrix::identity(3));
    }

    #[test]
    fn represent_s_generator_spin_five_halves() {
        let spin = SpinJ::from_twice(5);
        let s = axis_angle([0.0, 0.0, 1.0], PI / 2.0).unwrap();
        let d = represent(&s, spin);
        let expect: Vec<C64> = (0..6)
            .map(|k| C64::from_polar(1.0, -PI * spin.m(k) / 2.0))
            .collect();
        assert!(d.max_abs_diff(&CMatrix::from_diag(&expect)) < 1e-14);
    }

    #[test]
    fn spin_half_representation_is_the_su2_matrix() {
        let g = axis_angle([0.6, 0.0, 0.8], 1.3).unwrap();
        let d = represent(&g, SpinJ::from_twice(1));
        assert!(d.max_abs_diff(&g.su2_matrix()) < 1e-14);
    }

    #[test]
    fn weyl_character_examples() {
        assert_eq!(weyl_character(0.0, 7), 7.0);
        assert_eq!(weyl_character(2.0 * PI, 4), -4.0);
        assert_eq!(weyl_character(2.0 * PI, 5), 5.0);
        assert!((weyl_character(PI / 2.0, 6) + 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rotation_matrix_matches_axis_angle() {
        let g = axis_angle([0.0, 0.0, 1.0], PI / 2.0).unwrap();
        let v = g.rotate([1.0, 0.0, 0.0]);
        assert!((v[0]).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn element_orders() {
        let s = axis_angle([0.0, 0.0, 1.0], PI / 2.0).unwrap();
        assert_eq!(s.order(), Some(8));
        assert_eq!(GroupElement::MINUS_IDENTITY.order(), Some(2));
        assert_eq!(GroupElement::IDENTITY.order(), Some(1));
    }
}
