//! Spin Wigner functions W_A(n̂) = tr(Δ(n̂)A) from the self-dual
//! Stratonovich-Weyl kernel
//! Δ(R(g)ẑ) = Σ_m Σ_ℓ (2ℓ+1)/(2j+1)·⟨j m; ℓ 0|j m⟩·D(g)|j,m⟩⟨j,m|D(g)†.
//!
//! Grids use Gauss-Legendre nodes in cos θ and uniform nodes in φ. With at
//! least 2j+1 polar and 4j+1 azimuthal nodes every product W_A·W_B is
//! integrated exactly.

use std::f64::consts::PI;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, CMatrix, EigDecomposition, C64, ZERO};
use crate::su2::{angular_momentum_ops, axis_angle, represent_with, AngularMomentumOps, GroupElement, SpinJ};

#[cfg(test)]
fn ln_factorial(n: i64) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Table of ln k! for k ≤ n.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n + 1];
    for k in 1..=n {
        t[k] = t[k - 1] + (k as f64).ln();
    }
    t
}

/// Rows 0…n of Pascal's triangle.
fn binomials(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for r in 1..=n {
        let prev = &rows[r - 1];
        let mut row = Vec::with_capacity(r + 1);
        row.push(BigInt::one());
        for k in 1..r {
            row.push(&prev[k - 1] + &prev[k]);
        }
        row.push(BigInt::one());
        rows.push(row);
    }
    rows
}

/// ln|x| and sign of a big integer, finite for any size.
fn ln_abs_and_sign(x: &BigInt) -> (f64, f64) {
    let sign = match x.sign() {
        Sign::Minus => -1.0,
        Sign::NoSign => return (f64::NEG_INFINITY, 0.0),
        Sign::Plus => 1.0,
    };
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x.abs() >> shift).to_f64().unwrap_or(f64::MAX);
    (top.ln() + shift as f64 * std::f64::consts::LN_2, sign)
}

/// ⟨j m; ℓ 0|j m⟩ by the Racah formula. `twice_m` is 2m.
pub fn clebsch_gordan_j_l0(spin: SpinJ, l: u32, twice_m: i32) -> Result<f64> {
    let tj = spin.twice_j() as i64;
    let tm = twice_m as i64;
    if l as i64 > tj || tm.abs() > tj || (tj - tm) % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "Clebsch-Gordan ⟨j m; l 0|j m⟩ out of range: 2j = {tj}, l = {l}, 2m = {tm}"
        )));
    }
    let lf = ln_factorials((tj + l as i64 + 1) as usize);
    let binom = binomials(tj as usize);
    Ok(racah(&lf, &binom, tj, l as i64, tm))
}

/// Racah sum for ⟨j m; ℓ 0|j m⟩ with all arguments as integers (2j, ℓ, 2m).
/// The alternating sum Σ_k (−1)^k / [k!²(ℓ−k)!²(j−m−k)!(j−ℓ+m+k)!] equals
/// Σ_k (−1)^k C(ℓ,k)² C(2j−ℓ, j−m−k) / (ℓ!²(2j−ℓ)!) and is summed exactly.
fn racah(lf: &[f64], binom: &[Vec<BigInt>], tj: i64, l: i64, tm: i64) -> f64 {
    let f = |n: i64| lf[n as usize];
    let jpm = (tj + tm) / 2; // j + m
    let jmm = (tj - tm) / 2; // j − m
    let jj = tj - l; // 2j − ℓ
    // Prefactor: (2j+1)·(2j−ℓ)!·ℓ!·ℓ!/(2j+ℓ+1)! · [(j+m)!(j−m)!]²·ℓ!·ℓ!
    let ln_pref = 0.5
        * (((tj + 1) as f64).ln() + f(jj) + 2.0 * f(l) - f(tj + l + 1) + 2.0 * (f(jpm) + f(jmm)) + 2.0 * f(l));
    let k_min = 0.max(l - jpm);
    let k_max = l.min(jmm);
    let mut sum = BigInt::zero();
    for k in k_min..=k_max {
        let c = &binom[l as usize][k as usize];
        let term = c * c * &binom[jj as usize][(jmm - k) as usize];
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (ln_sum, sign) = ln_abs_and_sign(&sum);
    if sign == 0.0 {
        return 0.0;
    }
    sign * (ln_pref + ln_sum - 2.0 * f(l) - f(jj)).exp()
}

/// ⟨j m; ℓ 0|j m⟩ for ℓ = 0…2j and every m of one spin.
#[derive(Clone, Debug)]
pub struct CGCache {
    pub spin: SpinJ,
    /// values[ℓ][k] with k the m-descending basis index.
    values: Vec<Vec<f64>>,
}

impl CGCache {
    pub fn new(spin: SpinJ) -> Self {
        let tj = spin.twice_j() as i64;
        let lf = ln_factorials((2 * tj + 1) as usize);
        let binom = binomials(tj as usize);
        let values = (0..=tj)
            .map(|l| (0..spin.dim()).map(|k| racah(&lf, &binom, tj, l, spin.twice_m(k) as i64)).collect())
            .collect();
        CGCache { spin, values }
    }

    pub fn get(&self, l: u32, index: usize) -> f64 {
        self.values[l as usize][index]
    }

    /// Diagonal of Δ(ẑ) in the m-descending basis.
    pub fn kernel_diagonal(&self) -> Vec<f64> {
        let d = self.spin.dim() as f64;
        (0..self.spin.dim())
            .map(|k| {
                self.values
                    .iter()
                    .enumerate()
                    .map(|(l, row)| (2 * l + 1) as f64 / d * row[k])
                    .sum()
            })
            .collect()
    }
}

/// The rotation about ẑ×n̂ by arccos(n_z), taking ẑ to n̂.
pub fn rotation_to(n_hat: [f64; 3]) -> Result<GroupElement> {
    let len = (n_hat[0].powi(2) + n_hat[1].powi(2) + n_hat[2].powi(2)).sqrt();
    if (len - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("direction has norm {len}")));
    }
    let n = [n_hat[0] / len, n_hat[1] / len, n_hat[2] / len];
    let cross = [-n[1], n[0], 0.0];
    let s = (cross[0].powi(2) + cross[1].powi(2)).sqrt();
    if s < 1e-15 {
        return Ok(if n[2] > 0.0 {
            GroupElement::IDENTITY
        } else {
            axis_angle([1.0, 0.0, 0.0], PI)?
        });
    }
    axis_angle([cross[0] / s, cross[1] / s, 0.0], n[2].clamp(-1.0, 1.0).acos())
}

/// Kernel evaluator for one spin.
#[derive(Clone, Debug)]
pub struct WignerKernel {
    pub spin: SpinJ,
    ops: AngularMomentumOps,
    diag: Vec<f64>,
    jy_eig: EigDecomposition,
}

impl WignerKernel {
    pub fn new(spin: SpinJ) -> Result<Self> {
        let ops = angular_momentum_ops(spin);
        let diag = CGCache::new(spin).kernel_diagonal();
        let jy_eig = herm_eig(&ops.jy)?;
        Ok(WignerKernel { spin, ops, diag, jy_eig })
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn at_z(&self) -> CMatrix {
        CMatrix::from_real_diag(&self.diag)
    }

    /// D(g)Δ(ẑ)D(g)†, the kernel at R(g)ẑ.
    pub fn rotated(&self, g: &GroupElement) -> CMatrix {
        let d = represent_with(g, &self.ops);
        d.matmul(&self.at_z()).matmul(&d.adjoint()).hermitian_part()
    }

    /// Δ(n̂) through [`rotation_to`].
    pub fn at(&self, n_hat: [f64; 3]) -> Result<CMatrix> {
        Ok(self.rotated(&rotation_to(n_hat)?))
    }

    /// Δ at polar angle θ, azimuth 0: e^{−iθJ_y}Δ(ẑ)e^{iθJ_y}.
    fn polar(&self, theta: f64) -> CMatrix {
        let d = self.jy_eig.exp_i(theta);
        d.matmul(&self.at_z()).matmul(&d.adjoint())
    }

    /// W_A(n̂) = tr(Δ(n̂)A).
    pub fn evaluate(&self, a: &CMatrix, n_hat: [f64; 3]) -> Result<C64> {
        check_operator(a, self.spin)?;
        Ok(trace_product(&self.at(n_hat)?, a))
    }
}

fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.rows();
    let mut s = ZERO;
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

fn check_operator(a: &CMatrix, spin: SpinJ) -> Result<()> {
    if a.rows() != spin.dim() || a.cols() != spin.dim() {
        return Err(Error::Dimension(format!(
            "operator is {}x{}, spin {spin} needs {}",
            a.rows(),
            a.cols(),
            spin.dim()
        )));
    }
    Ok(())
}

/// Δ(ẑ) for a spin.
pub fn kernel_z(spin: SpinJ) -> CMatrix {
    CMatrix::from_real_diag(&CGCache::new(spin).kernel_diagonal())
}

/// Δ(n̂) for a spin.
pub fn kernel(spin: SpinJ, n_hat: [f64; 3]) -> Result<CMatrix> {
    WignerKernel::new(spin)?.at(n_hat)
}

/// P_n(z) and P_n'(z) by the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

/// Gauss-Legendre nodes and weights on [−1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, z);
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    (x, w)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl GridSpec {
    /// Smallest grid that integrates products of two Wigner functions exactly.
    pub fn minimal(spin: SpinJ) -> Self {
        let tj = spin.twice_j() as usize;
        GridSpec {
            n_theta: tj + 1,
            n_phi: 2 * tj + 1,
        }
    }

    pub fn validate(&self, spin: SpinJ) -> Result<()> {
        let min = Self::minimal(spin);
        if self.n_theta < min.n_theta || self.n_phi < min.n_phi {
            return Err(Error::InvalidArgument(format!(
                "grid {}x{} too coarse for spin {spin}: need at least {}x{}",
                self.n_theta, self.n_phi, min.n_theta, min.n_phi
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WignerGrid {
    pub spin: SpinJ,
    pub label: String,
    pub n_theta: usize,
    pub n_phi: usize,
    /// Polar angles, ascending in (0, π).
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// Gauss-Legendre weights in cos θ for each polar node.
    pub theta_weights: Vec<f64>,
    /// W at (theta[i], phi[k]) stored at i·n_phi + k.
    #[serde(skip)]
    pub values: Vec<C64>,
}

impl WignerGrid {
    pub fn value(&self, i: usize, k: usize) -> C64 {
        self.values[i * self.n_phi + k]
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_imaginary(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Quadrature weight of node (i, k); the weights sum to 4π.
    pub fn weight(&self, i: usize) -> f64 {
        self.theta_weights[i] * 2.0 * PI / self.n_phi as f64
    }

    /// ∫ W dn̂.
    pub fn integral(&self) -> C64 {
        let mut s = ZERO;
        for i in 0..self.n_theta {
            let w = self.weight(i);
            for k in 0..self.n_phi {
                s += self.value(i, k) * w;
            }
        }
        s
    }

    /// ∫ W·W′ dn̂ over a shared grid.
    pub fn integral_product(&self, other: &WignerGrid) -> Result<C64> {
        if (self.n_theta, self.n_phi) != (other.n_theta, other.n_phi) {
            return Err(Error::Dimension("grids differ".into()));
        }
        let mut s = ZERO;
        for i in 0..self.n_theta {
            let w = self.weight(i);
            for k in 0..self.n_phi {
                s += self.value(i, k) * other.value(i, k) * w;
            }
        }
        Ok(s)
    }

    pub fn direction(&self, i: usize, k: usize) -> [f64; 3] {
        let (st, ct) = self.theta[i].sin_cos();
        let (sp, cp) = self.phi[k].sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Evaluates W_A on a Gauss-Legendre × uniform grid.
pub fn wigner_function(op: &CMatrix, spin: SpinJ, spec: GridSpec, label: &str) -> Result<WignerGrid> {
    let kernel = WignerKernel::new(spin)?;
    wigner_function_with(&kernel, op, spec, label)
}

pub fn wigner_function_with(kernel: &WignerKernel, op: &CMatrix, spec: GridSpec, label: &str) -> Result<WignerGrid> {
    let spin = kernel.spin;
    check_operator(op, spin)?;
    spec.validate(spin)?;
    let d = spin.dim();
    let (x, wx) = gauss_legendre(spec.n_theta);
    // Polar nodes from the north pole down: cos θ descending.
    let theta: Vec<f64> = x.iter().rev().map(|c| c.clamp(-1.0, 1.0).acos()).collect();
    let theta_weights: Vec<f64> = wx.iter().rev().copied().collect();
    let phi: Vec<f64> = (0..spec.n_phi).map(|k| 2.0 * PI * k as f64 / spec.n_phi as f64).collect();

    // W(θ, φ) = Σ_{k,l} A[k,l]·K_θ[l,k]·e^{iφ(l−k)}, K_θ the kernel at azimuth 0.
    let rows: Vec<Vec<C64>> = theta
        .par_iter()
        .map(|&t| {
            let k_theta = kernel.polar(t);
            let mut coeff = vec![ZERO; 2 * d - 1];
            for a in 0..d {
                for b in 0..d {
                    coeff[b + d - 1 - a] += op[(a, b)] * k_theta[(b, a)];
                }
            }
            phi.iter()
                .map(|&p| {
                    coeff
                        .iter()
                        .enumerate()
                        .map(|(s, c)| c * C64::from_polar(1.0, p * (s as f64 - (d - 1) as f64)))
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(WignerGrid {
        spin,
        label: label.to_string(),
        n_theta: spec.n_theta,
        n_phi: spec.n_phi,
        theta,
        phi,
        theta_weights,
        values: rows.into_iter().flatten().collect(),
    })
}

/// A = ((2j+1)/4π) ∫ W_A(n̂) Δ(n̂) dn̂ evaluated on the grid.
pub fn reconstruct_operator(kernel: &WignerKernel, grid: &WignerGrid) -> CMatrix {
    let d = kernel.spin.dim();
    let mut a = CMatrix::zeros(d, d);
    for i in 0..grid.n_theta {
        let k_theta = kernel.polar(grid.theta[i]);
        let w = grid.weight(i);
        for k in 0..grid.n_phi {
            let p = grid.phi[k];
            let wv = grid.value(i, k) * w;
            // Δ(θ, φ)[r, c] = K_θ[r, c]·e^{−iφ(m_r − m_c)} = K_θ[r, c]·e^{iφ(r − c)}.
            for r in 0..d {
                for c in 0..d {
                    a[(r, c)] += wv * k_theta[(r, c)] * C64::from_polar(1.0, p * (r as f64 - c as f64));
                }
            }
        }
    }
    a.scale_real(d as f64 / (4.0 * PI))
}

/// Largest violation of each postulate over the sample.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PostulateReport {
    pub standardization: f64,
    pub traciality: f64,
    pub reality: f64,
    pub covariance: f64,
    pub self_duality: f64,
    pub linearity: f64,
}

impl PostulateReport {
    pub fn max_error(&self) -> f64 {
        [
            self.standardization,
            self.traciality,
            self.reality,
            self.covariance,
            self.self_duality,
            self.linearity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Checks the Stratonovich-Weyl postulates on sample operators and rotations.
/// Integrals are compared after dividing by 4π.
pub fn verify_postulates(
    spin: SpinJ,
    ops: &[CMatrix],
    rotations: &[GroupElement],
    spec: GridSpec,
) -> Result<PostulateReport> {
    let kernel = WignerKernel::new(spin)?;
    let d = spin.dim() as f64;
    let grids = ops
        .iter()
        .map(|a| wigner_function_with(&kernel, a, spec, ""))
        .collect::<Result<Vec<_>>>()?;
    let mut r = PostulateReport::default();
    for (a, ga) in ops.iter().zip(&grids) {
        r.standardization = r.standardization.max((a.trace() - ga.integral() * d / (4.0 * PI)).norm());
        for (b, gb) in ops.iter().zip(&grids) {
            let lhs = trace_product(a, b);
            let rhs = ga.integral_product(gb)? * d / (4.0 * PI);
            r.traciality = r.traciality.max((lhs - rhs).norm());
        }
        let adj = wigner_function_with(&kernel, &a.adjoint(), spec, "")?;
        for (x, y) in adj.values.iter().zip(&ga.values) {
            r.reality = r.reality.max((x - y.conj()).norm());
        }
        let rebuilt = reconstruct_operator(&kernel, ga);
        r.self_duality = r.self_duality.max(rebuilt.max_abs_diff(a));
        for g in rotations {
            let dg = represent_with(g, &kernel.ops);
            let moved = dg.matmul(a).matmul(&dg.adjoint());
            let gm = wigner_function_with(&kernel, &moved, spec, "")?;
            let inv = g.inverse();
            for i in 0..gm.n_theta {
                for k in 0..gm.n_phi {
                    let n = inv.rotate(gm.direction(i, k));
                    let rhs = kernel.evaluate(a, n)?;
                    r.covariance = r.covariance.max((gm.value(i, k) - rhs).norm());
                }
            }
        }
    }
    for w in ops.windows(2) {
        let sum = &w[0] + &w[1];
        let gs = wigner_function_with(&kernel, &sum, spec, "")?;
        let g0 = wigner_function_with(&kernel, &w[0], spec, "")?;
        let g1 = wigner_function_with(&kernel, &w[1], spec, "")?;
        for ((s, a), b) in gs.values.iter().zip(&g0.values).zip(&g1.values) {
            r.linearity = r.linearity.max((s - a - b).norm());
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cg_examples() {
        let half = SpinJ::from_twice(1);
        assert!((clebsch_gordan_j_l0(half, 0, 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((clebsch_gordan_j_l0(half, 1, 1).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((clebsch_gordan_j_l0(half, 1, -1).unwrap() + 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!(clebsch_gordan_j_l0(half, 2, 1).is_err());
        assert!(clebsch_gordan_j_l0(half, 0, 3).is_err());
        assert!(clebsch_gordan_j_l0(half, 0, 0).is_err());
    }

    #[test]
    fn cg_closed_forms_for_small_l() {
        for tj in 1..=20u32 {
            let s = SpinJ::from_twice(tj);
            let j = s.j();
            let c = CGCache::new(s);
            for k in 0..s.dim() {
                let m = s.m(k);
                assert!((c.get(0, k) - 1.0).abs() < 1e-12);
                assert!((c.get(1, k) - m / (j * (j + 1.0)).sqrt()).abs() < 1e-12);
                if tj >= 2 {
                    let l2 = (3.0 * m * m - j * (j + 1.0)) / (j * (j + 1.0) * (2.0 * j - 1.0) * (2.0 * j + 3.0)).sqrt();
                    assert!((c.get(2, k) - l2).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn cg_reflection_symmetry() {
        let s = SpinJ::from_twice(9);
        let c = CGCache::new(s);
        for l in 0..=9u32 {
            for k in 0..s.dim() {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                assert!((c.get(l, s.dim() - 1 - k) - sign * c.get(l, k)).abs() < 1e-12);
                assert!(c.get(l, k).abs() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in 1..12 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for deg in 0..2 * n {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg + 1) as f64 };
                let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                assert!((q - exact).abs() < 1e-13, "n {n} deg {deg}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn kernel_trace_and_diagonal() {
        for tj in [1u32, 5, 7, 9] {
            let s = SpinJ::from_twice(tj);
            let kz = kernel_z(s);
            assert!((kz.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
            assert!(kz.is_diagonal(0.0));
            let k = WignerKernel::new(s).unwrap();
            let norm_z = trace_product(&kz, &kz);
            for n in [[1.0, 0.0, 0.0], [0.0, 0.6, -0.8], [0.0, 0.0, -1.0]] {
                let kn = k.at(n).unwrap();
                assert!((kn.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
                assert!((trace_product(&kn, &kn) - norm_z).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn rotation_to_maps_z() {
        for n in [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [0.6, 0.0, 0.8], [0.48, -0.6, 0.64]] {
            let g = rotation_to(n).unwrap();
            let r = g.rotate([0.0, 0.0, 1.0]);
            for i in 0..3 {
                assert!((r[i] - n[i]).abs() < 1e-12);
            }
        }
        assert!(rotation_to([1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn gauge_independence() {
        let s = SpinJ::from_twice(7);
        let k = WignerKernel::new(s).unwrap();
        let n = [0.48, -0.6, 0.64];
        let g = rotation_to(n).unwrap();
        let twist = axis_angle([0.0, 0.0, 1.0], 1.1).unwrap();
        let a = k.rotated(&g);
        let b = k.rotated(&(g * twist));
        assert!(a.max_abs_diff(&b) < 1e-10);
    }

    #[test]
    fn identity_grid_is_one() {
        let s = SpinJ::from_twice(5);
        let g = wigner_function(&CMatrix::identity(6), s, GridSpec { n_theta: 9, n_phi: 13 }, "I").unwrap();
        for v in &g.values {
            assert!((v - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
        assert!((g.integral() - C64::new(4.0 * PI, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn grid_agrees_with_pointwise_kernel() {
        let s = SpinJ::from_twice(3);
        let a = CMatrix::from_fn(4, 4, |i, j| C64::new((i + 2 * j) as f64, i as f64 - j as f64));
        let k = WignerKernel::new(s).unwrap();
        let g = wigner_function_with(&k, &a, GridSpec { n_theta: 5, n_phi: 8 }, "").unwrap();
        for i in 0..g.n_theta {
            for p in 0..g.n_phi {
                let direct = k.evaluate(&a, g.direction(i, p)).unwrap();
                assert!((direct - g.value(i, p)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let s = SpinJ::from_twice(5);
        assert!(wigner_function(&CMatrix::identity(6), s, GridSpec { n_theta: 5, n_phi: 11 }, "").is_err());
        assert!(wigner_function(&CMatrix::identity(5), s, GridSpec::minimal(s), "").is_err());
    }

    #[test]
    fn ln_factorial_matches_table() {
        let t = ln_factorials(20);
        for n in 0..=20 {
            assert!((t[n] - ln_factorial(n as i64)).abs() < 1e-12);
        }
    }

    #[test]
    fn postulates_hold_for_small_spin() {
        let s = SpinJ::from_twice(3);
        let ops: Vec<CMatrix> = (0..3)
            .map(|t| CMatrix::from_fn(4, 4, |i, j| C64::new(((i * 3 + j * 5 + t) % 7) as f64 - 3.0, ((i + 2 * j * t) % 5) as f64)))
            .collect();
        let rots = [axis_angle([0.6, 0.0, 0.8], 0.9).unwrap(), axis_angle([0.0, 1.0, 0.0], 2.3).unwrap()];
        let r = verify_postulates(s, &ops, &rots, GridSpec::minimal(s)).unwrap();
        assert!(r.max_error() < 1e-9, "{r:?}");
    }
}
