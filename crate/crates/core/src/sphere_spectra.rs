//! Dirichlet and mean-zero constrained eigenvalues of the Laplace–Beltrami
//! operator on spherical caps of S^{n-1}.
//!
//! Separating the azimuthal mode `m` (a degree-`m` spherical harmonic on
//! S^{n-2}, eigenvalue kappa = m(m+n-3)) reduces -Δ to the colatitude operator
//!
//! ```text
//!   -w^{-1} (w f')' + kappa f / sin^2(theta),   w = sin^{n-2}(theta)
//! ```
//!
//! with f'(0) = 0 for m = 0 and f(0) = 0 for m >= 1. The axisymmetric ground
//! state (m = 0) is the global first Dirichlet eigenvalue of the cap.

use std::f64::consts::PI;

use log::warn;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};
use crate::linalg::SymTridiagonal;
use crate::quadrature::{adaptive_integrate, GaussLegendre};

/// Axisymmetric cap {colatitude < theta0} on S^{n-1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapDomain {
    pub n: usize,
    pub theta0: f64,
}

impl CapDomain {
    pub fn new(n: usize, theta0: f64) -> Result<Self> {
        let cap = CapDomain { n, theta0 };
        cap.validate()?;
        Ok(cap)
    }

    pub fn hemisphere(n: usize) -> Result<Self> {
        CapDomain::new(n, PI / 2.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(ConeError::Domain(format!("dimension n = {} must be at least 3", self.n)));
        }
        if !(self.theta0 > 0.0 && self.theta0 < PI) {
            return Err(ConeError::Domain(format!(
                "cap angle theta0 = {} must lie strictly inside (0, pi)",
                self.theta0
            )));
        }
        Ok(())
    }
}

/// Discretization of the colatitude eigenproblems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Conservative three-point scheme with cell-integrated weights, second order.
    FiniteDifference,
    /// Chebyshev collocation on Gauss–Lobatto points.
    SpectralCollocation,
}

impl Scheme {
    pub fn order(&self) -> f64 {
        match self {
            Scheme::FiniteDifference => 2.0,
            Scheme::SpectralCollocation => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationConfig {
    pub grid_points: usize,
    pub scheme: Scheme,
    pub max_azimuthal_mode: usize,
    pub richardson_levels: usize,
    /// Normwise backward-error tolerance for accepted eigenpairs.
    pub tolerance: f64,
}

impl Default for DiscretizationConfig {
    fn default() -> Self {
        DiscretizationConfig {
            grid_points: 128,
            scheme: Scheme::FiniteDifference,
            max_azimuthal_mode: 8,
            richardson_levels: 3,
            tolerance: 1e-10,
        }
    }
}

impl DiscretizationConfig {
    pub fn with_grid(grid_points: usize) -> Self {
        DiscretizationConfig { grid_points, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 16 {
            return Err(ConeError::Precondition(format!("grid_points = {} must be at least 16", self.grid_points)));
        }
        if self.max_azimuthal_mode < 1 {
            return Err(ConeError::Precondition("max_azimuthal_mode must be at least 1".into()));
        }
        if self.richardson_levels < 1 {
            return Err(ConeError::Precondition("richardson_levels must be at least 1".into()));
        }
        let finest = u32::try_from(self.richardson_levels - 1)
            .ok()
            .and_then(|s| 1usize.checked_shl(s))
            .and_then(|f| f.checked_mul(self.grid_points));
        match finest {
            Some(f) if f <= 1 << 24 => {}
            _ => {
                return Err(ConeError::Precondition(format!(
                    "grid_points = {} doubled over {} levels is not representable",
                    self.grid_points, self.richardson_levels
                )))
            }
        }
        if !(self.tolerance > 0.0) {
            return Err(ConeError::Precondition("tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Grid sizes used by the Richardson sequence.
    pub fn grid_sequence(&self) -> Vec<usize> {
        (0..self.richardson_levels).map(|k| self.grid_points << k).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub eigenvalue: f64,
    pub m_exponent: f64,
    pub residual: f64,
    pub mode: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintKind {
    MeanZero,
    UnconstrainedMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaResult {
    pub theta_omega: f64,
    pub theta_omega_lambda: Option<f64>,
    pub attaining_mode: usize,
    pub constraint_kind: ConstraintKind,
}

/// Colatitude interval [0, end]; `closed` marks the whole sphere, where the
/// far endpoint is a second pole instead of a Dirichlet boundary.
#[derive(Debug, Clone, Copy)]
struct Region {
    n: usize,
    end: f64,
    closed: bool,
}

impl Region {
    fn cap(cap: &CapDomain) -> Self {
        Region { n: cap.n, end: cap.theta0, closed: false }
    }

    fn sphere(n: usize) -> Self {
        Region { n, end: PI, closed: true }
    }

    fn weight(&self, theta: f64) -> f64 {
        theta.sin().powi(self.n as i32 - 2)
    }
}

fn kappa(n: usize, m: usize) -> f64 {
    (m * (m + n - 3)) as f64
}

/// Returns M >= 0 with M(M+n-2) = eigenvalue.
pub fn exponent_m(eigenvalue: f64, n: usize) -> Result<f64> {
    if !(eigenvalue >= 0.0) {
        return Err(ConeError::Domain(format!("eigenvalue {eigenvalue} must be nonnegative")));
    }
    let a = n as f64 - 2.0;
    let root = (a * a + 4.0 * eigenvalue).sqrt();
    if a + root == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * eigenvalue / (a + root))
}

/// Surface measure of S^k.
pub fn sphere_volume(k: usize) -> f64 {
    match k {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (k as f64 - 1.0) * sphere_volume(k - 2),
    }
}

/// Surface measure of the cap.
pub fn cap_area(cap: &CapDomain) -> Result<f64> {
    cap_area_upto(cap.n, cap.theta0)
}

fn cap_area_upto(n: usize, theta0: f64) -> Result<f64> {
    if n < 3 {
        return Err(ConeError::Domain(format!("dimension n = {n} must be at least 3")));
    }
    if !(theta0 > 0.0 && theta0 <= PI) {
        return Err(ConeError::Domain(format!("cap angle {theta0} outside (0, pi]")));
    }
    let p = n as i32 - 2;
    let integral = adaptive_integrate(|t: f64| t.sin().powi(p), 0.0, theta0, 1e-14)?;
    Ok(sphere_volume(n - 2) * integral)
}

/// Three-point discretization on one grid: symmetric tridiagonal `T`
/// (stiffness scaled by the lumped weights) and the square roots of the weights.
struct FdProblem {
    t: SymTridiagonal,
    sqrt_w: Vec<f64>,
}

fn fd_problem(region: Region, mode: usize, cells: usize) -> FdProblem {
    let h = region.end / cells as f64;
    let kap = kappa(region.n, mode);
    let first = if mode == 0 { 0 } else { 1 };
    let last = if region.closed && mode == 0 { cells } else { cells - 1 };
    let dim = last - first + 1;
    let gauss = GaussLegendre::new(6);
    let mut diag = vec![0.0; dim];
    let mut off = vec![0.0; dim.saturating_sub(1)];
    for e in 0..cells {
        let a = e as f64 * h;
        let b = a + h;
        let mut stiff = 0.0;
        let mut pot = [0.0; 3];
        for (x, wq) in gauss.on_interval(a, b) {
            let w = region.weight(x);
            stiff += wq * w;
            if kap > 0.0 {
                let s = x.sin();
                let l = (b - x) / h;
                let r = (x - a) / h;
                let c = wq * kap * w / (s * s);
                pot[0] += c * l * l;
                pot[1] += c * l * r;
                pot[2] += c * r * r;
            }
        }
        stiff /= h * h;
        let local = [(e, e, stiff + pot[0]), (e, e + 1, -stiff + pot[1]), (e + 1, e + 1, stiff + pot[2])];
        for (i, j, v) in local {
            if i < first || j < first || i > last || j > last {
                continue;
            }
            if i == j {
                diag[i - first] += v;
            } else {
                off[i - first] += v;
            }
        }
    }
    let cell_weight = |i: usize| -> f64 {
        let lo = (i as f64 - 0.5) * h;
        let hi = (i as f64 + 0.5) * h;
        gauss.integrate(lo.max(0.0), hi.min(region.end), |x| region.weight(x))
    };
    let sqrt_w: Vec<f64> = (first..=last).map(|i| cell_weight(i).sqrt()).collect();
    for i in 0..dim {
        diag[i] /= sqrt_w[i] * sqrt_w[i];
        if i + 1 < dim {
            off[i] /= sqrt_w[i] * sqrt_w[i + 1];
        }
    }
    FdProblem { t: SymTridiagonal::new(diag, off), sqrt_w }
}

fn backward_error(t: &SymTridiagonal, x: &[f64], lambda: f64) -> f64 {
    let tx = t.apply(x);
    let r: f64 = tx.iter().zip(x).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
    let xn: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    r / (t.norm_inf() * xn)
}

/// Smallest eigenvalue on one grid, with its backward error.
fn fd_ground(region: Region, mode: usize, cells: usize) -> Result<(f64, f64)> {
    let p = fd_problem(region, mode, cells);
    let lambda = p.t.eigenvalue(0);
    let x = p.t.eigenvector(lambda)?;
    Ok((lambda, backward_error(&p.t, &x, lambda)))
}

/// Mean-zero constrained minimum on one grid via the bordered (secular) equation.
fn fd_constrained(region: Region, cells: usize) -> Result<(f64, f64)> {
    let p = fd_problem(region, 0, cells);
    let u = &p.sqrt_w;
    let l1 = p.t.eigenvalue(0);
    let l2 = p.t.eigenvalue(1);
    let secular = |mu: f64| -> Result<f64> {
        let y = p.t.solve_shifted(mu, u)?;
        Ok(u.iter().zip(&y).map(|(a, b)| a * b).sum())
    };
    let (mut lo, mut hi) = (l1, l2);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match secular(mid) {
            Ok(g) if g < 0.0 => lo = mid,
            Ok(_) => hi = mid,
            Err(_) => break,
        }
    }
    let mu = 0.5 * (lo + hi);
    // Constrained eigenvector: projection of the shifted-inverse image of u,
    // or the second eigenvector when u is orthogonal to it.
    let mut y = match p.t.solve_shifted(mu, u) {
        Ok(y) => y,
        Err(_) => p.t.eigenvector(l2)?,
    };
    let uu: f64 = u.iter().map(|v| v * v).sum();
    let uy: f64 = u.iter().zip(&y).map(|(a, b)| a * b).sum();
    y.iter_mut().zip(u).for_each(|(a, b)| *a -= uy / uu * b);
    let norm: f64 = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(ConeError::Numerical("constrained eigenvector vanished".into()));
    }
    y.iter_mut().for_each(|v| *v /= norm);
    let mut r: Vec<f64> = p.t.apply(&y).iter().zip(&y).map(|(a, b)| a - mu * b).collect();
    let ur: f64 = u.iter().zip(&r).map(|(a, b)| a * b).sum();
    r.iter_mut().zip(u).for_each(|(a, b)| *a -= ur / uu * b);
    let resid = r.iter().map(|v| v * v).sum::<f64>().sqrt() / p.t.norm_inf();
    Ok((mu, resid))
}

/// Richardson extrapolation of second-order values on grids h, h/2, h/4, ...
pub fn richardson(values: &[f64]) -> f64 {
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    for (k, &v) in values.iter().enumerate() {
        let mut row = vec![v];
        for j in 1..=k {
            let factor = 4f64.powi(j as i32) - 1.0;
            let prev = row[j - 1];
            row.push(prev + (prev - table[k - 1][j - 1]) / factor);
        }
        table.push(row);
    }
    *table.last().and_then(|r| r.last()).expect("at least one value")
}

fn extrapolated<F>(cfg: &DiscretizationConfig, solve: F) -> Result<(f64, f64)>
where
    F: Fn(usize) -> Result<(f64, f64)> + Sync,
{
    let results: Vec<(f64, f64)> = cfg.grid_sequence().into_par_iter().map(&solve).collect::<Result<_>>()?;
    let values: Vec<f64> = results.iter().map(|r| r.0).collect();
    let residual = results.iter().map(|r| r.1).fold(0.0, f64::max);
    if residual > cfg.tolerance {
        return Err(ConeError::NonConvergence { residual, tolerance: cfg.tolerance });
    }
    Ok((richardson(&values), residual))
}

/// Chebyshev collocation of the colatitude operator at the interior nodes.
///
/// Pole values are eliminated: f'(pole) = 0 for mode 0 and f(pole) = 0 otherwise;
/// the Dirichlet end of a cap carries f = 0. Returns the reduced operator and
/// the quadrature row that integrates f against the weight.
fn collocation_operator(region: Region, mode: usize, points: usize) -> (DMatrix<f64>, Vec<f64>) {
    let nn = points;
    let x: Vec<f64> = (0..=nn).map(|j| (PI * j as f64 / nn as f64).cos()).collect();
    let c = |j: usize| -> f64 {
        let edge = if j == 0 || j == nn { 2.0 } else { 1.0 };
        if j % 2 == 0 {
            edge
        } else {
            -edge
        }
    };
    let mut d = DMatrix::<f64>::zeros(nn + 1, nn + 1);
    for i in 0..=nn {
        for j in 0..=nn {
            if i != j {
                d[(i, j)] = c(i) / c(j) / (x[i] - x[j]);
            }
        }
        let row_sum: f64 = (0..=nn).filter(|&j| j != i).map(|j| d[(i, j)]).sum();
        d[(i, i)] = -row_sum;
    }
    // theta = end (1 - x) / 2, so d/dtheta = -(2 / end) d/dx
    let d1 = &d * (-2.0 / region.end);
    let d2 = &d1 * &d1;
    let theta: Vec<f64> = x.iter().map(|xi| region.end * (1.0 - xi) / 2.0).collect();
    let kap = kappa(region.n, mode);
    let nm2 = region.n as f64 - 2.0;
    let interior: Vec<usize> = (1..nn).collect();
    let mut neumann = Vec::new();
    if mode == 0 {
        neumann.push(0);
        if region.closed {
            neumann.push(nn);
        }
    }
    // Boundary values as linear combinations of interior values.
    let mut elim = DMatrix::<f64>::zeros(neumann.len(), interior.len());
    if !neumann.is_empty() {
        let nb = DMatrix::<f64>::from_fn(neumann.len(), neumann.len(), |r, s| d1[(neumann[r], neumann[s])]);
        let ni = DMatrix::<f64>::from_fn(neumann.len(), interior.len(), |r, s| d1[(neumann[r], interior[s])]);
        let inv = nb.try_inverse().expect("pole derivative block is invertible");
        elim = -(inv * ni);
    }
    let full = |i: usize, j: usize| -> f64 {
        let t = theta[i];
        let mut v = -d2[(i, j)] - nm2 * t.cos() / t.sin() * d1[(i, j)];
        if i == j {
            v += kap / (t.sin() * t.sin());
        }
        v
    };
    let m = interior.len();
    let mut a = DMatrix::<f64>::from_fn(m, m, |r, s| full(interior[r], interior[s]));
    for (b, &jb) in neumann.iter().enumerate() {
        for r in 0..m {
            let coupling = full(interior[r], jb);
            for s in 0..m {
                a[(r, s)] += coupling * elim[(b, s)];
            }
        }
    }
    let weights = clenshaw_curtis(nn);
    let node_weight = |j: usize| weights[j] * region.end / 2.0 * region.weight(theta[j]);
    let mut q: Vec<f64> = interior.iter().map(|&j| node_weight(j)).collect();
    for (b, &jb) in neumann.iter().enumerate() {
        for s in 0..m {
            q[s] += node_weight(jb) * elim[(b, s)];
        }
    }
    (a, q)
}

/// Clenshaw–Curtis weights on the points cos(j pi / n), j = 0..n.
fn clenshaw_curtis(n: usize) -> Vec<f64> {
    let mut w = vec![0.0; n + 1];
    let nf = n as f64;
    for (j, wj) in w.iter_mut().enumerate() {
        let theta = PI * j as f64 / nf;
        let mut v = 1.0;
        let half = n / 2;
        for k in 1..=half {
            let b = if 2 * k == n { 1.0 } else { 2.0 };
            v -= b * (2.0 * k as f64 * theta).cos() / (4.0 * (k * k) as f64 - 1.0);
        }
        let c = if j == 0 || j == n { 1.0 } else { 2.0 };
        *wj = c * v / nf;
    }
    w
}

fn smallest_real_eigenvalue(a: &DMatrix<f64>, floor: f64) -> Result<f64> {
    let eig = a.clone().complex_eigenvalues();
    let scale = a.norm();
    eig.iter()
        .filter(|z| z.im.abs() <= 1e-8 * scale.max(1.0) && z.re.abs() > floor)
        .map(|z| z.re)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))))
        .ok_or_else(|| ConeError::Numerical("collocation matrix has no real eigenvalue".into()))
}

fn dense_backward_error(a: &DMatrix<f64>, lambda: f64) -> Result<f64> {
    let n = a.nrows();
    let shift = lambda * (1.0 + 1e-12) + 1e-14;
    let shifted = a - DMatrix::<f64>::identity(n, n) * shift;
    let lu = shifted.lu();
    let mut x = nalgebra::DVector::<f64>::from_fn(n, |i, _| 1.0 + 0.1 * (i as f64).sin());
    for _ in 0..3 {
        x = lu.solve(&x).ok_or_else(|| ConeError::Numerical("singular shifted collocation matrix".into()))?;
        let nrm = x.norm();
        x /= nrm;
    }
    let r = a * &x - &x * lambda;
    Ok(r.norm() / (a.norm() * x.norm()))
}

fn spectral_ground(region: Region, mode: usize, points: usize) -> Result<(f64, f64)> {
    let (a, _) = collocation_operator(region, mode, points);
    let floor = if region.closed && mode == 0 { 1e-8 * a.norm() } else { -1.0 };
    let lambda = smallest_real_eigenvalue(&a, floor)?;
    Ok((lambda, dense_backward_error(&a, lambda)?))
}

fn spectral_constrained(region: Region, points: usize) -> Result<(f64, f64)> {
    let (a, q) = collocation_operator(region, 0, points);
    let n = a.nrows();
    let qsum: f64 = q.iter().sum();
    // P = I - 1 q^T / (q^T 1) annihilates constants and maps onto {q^T v = 0}.
    let p = DMatrix::<f64>::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } - q[j] / qsum);
    let pa = &p * &a;
    let lambda = smallest_real_eigenvalue(&pa, 1e-8 * pa.norm())?;
    Ok((lambda, dense_backward_error(&pa, lambda)?))
}

fn solve_mode(region: Region, mode: usize, cfg: &DiscretizationConfig) -> Result<(f64, f64)> {
    match cfg.scheme {
        Scheme::FiniteDifference => extrapolated(cfg, |c| fd_ground(region, mode, c)),
        Scheme::SpectralCollocation => {
            let (v, r) = spectral_ground(region, mode, cfg.grid_points)?;
            if r > cfg.tolerance {
                return Err(ConeError::NonConvergence { residual: r, tolerance: cfg.tolerance });
            }
            Ok((v, r))
        }
    }
}

fn solve_constrained(region: Region, cfg: &DiscretizationConfig) -> Result<(f64, f64)> {
    match cfg.scheme {
        Scheme::FiniteDifference => extrapolated(cfg, |c| fd_constrained(region, c)),
        Scheme::SpectralCollocation => {
            let (v, r) = spectral_constrained(region, cfg.grid_points)?;
            if r > cfg.tolerance {
                return Err(ConeError::NonConvergence { residual: r, tolerance: cfg.tolerance });
            }
            Ok((v, r))
        }
    }
}

/// Smallest Dirichlet eigenvalue of -Δ on the cap within azimuthal mode `mode`.
///
/// The mode-0 value is the first Dirichlet eigenvalue of the whole cap.
pub fn dirichlet_eigenvalue_cap(cap: &CapDomain, mode: usize, cfg: &DiscretizationConfig) -> Result<EigenResult> {
    cap.validate()?;
    cfg.validate()?;
    if mode > cfg.max_azimuthal_mode {
        return Err(ConeError::Precondition(format!(
            "mode {mode} exceeds max_azimuthal_mode {}",
            cfg.max_azimuthal_mode
        )));
    }
    let (eigenvalue, residual) = solve_mode(Region::cap(cap), mode, cfg)?;
    Ok(EigenResult { eigenvalue, m_exponent: exponent_m(eigenvalue.max(0.0), cap.n)?, residual, mode })
}

fn theta_over(region: Region, cfg: &DiscretizationConfig) -> Result<ThetaResult> {
    cfg.validate()?;
    let constrained = solve_constrained(region, cfg)?.0;
    let modes: Vec<(usize, f64)> = (1..=cfg.max_azimuthal_mode)
        .into_par_iter()
        .map(|m| solve_mode(region, m, cfg).map(|r| (m, r.0)))
        .collect::<Result<_>>()?;
    let mut best = ThetaResult {
        theta_omega: constrained,
        theta_omega_lambda: None,
        attaining_mode: 0,
        constraint_kind: ConstraintKind::MeanZero,
    };
    for (m, v) in modes {
        if v < best.theta_omega {
            best.theta_omega = v;
            best.attaining_mode = m;
            best.constraint_kind = ConstraintKind::UnconstrainedMode;
        }
    }
    if best.attaining_mode == cfg.max_azimuthal_mode {
        warn!(
            "minimum over azimuthal modes attained at the largest mode {}; increase max_azimuthal_mode",
            cfg.max_azimuthal_mode
        );
    }
    Ok(best)
}

/// Mean-zero constrained minimum of the Dirichlet integral on the cap.
pub fn theta_omega(cap: &CapDomain, cfg: &DiscretizationConfig) -> Result<ThetaResult> {
    cap.validate()?;
    theta_over(Region::cap(cap), cfg)
}

/// The same minimum on the closed sphere S^{n-1} (no boundary condition).
pub fn theta_omega_sphere(n: usize, cfg: &DiscretizationConfig) -> Result<ThetaResult> {
    if n < 3 {
        return Err(ConeError::Domain(format!("dimension n = {n} must be at least 3")));
    }
    theta_over(Region::sphere(n), cfg)
}

/// Lower bound of the Rayleigh quotient that includes the divergence penalty,
/// `min{Θ, (3-4ν-Re λ)|λ+n-1|^2 / ((1-2ν)(2 Re λ+n-2))}`; for ν = 1/2 it is Θ.
///
/// The second branch is computed as C |Ω| from the constant C of the penalty
/// term, so `cap_area` must be positive.
pub fn theta_omega_lambda(
    theta_omega: f64,
    lambda_re: f64,
    lambda_im: f64,
    n: usize,
    nu: f64,
    cap_area: f64,
) -> Result<f64> {
    if !(nu <= 0.5) {
        return Err(ConeError::Precondition(format!("Poisson ratio {nu} exceeds 1/2")));
    }
    let nf = n as f64;
    let denom = 2.0 * lambda_re + nf - 2.0;
    if !(denom > 0.0) {
        return Err(ConeError::Precondition(format!("2 Re(lambda) + n - 2 = {denom} must be positive")));
    }
    if lambda_re > 3.0 - 4.0 * nu {
        return Err(ConeError::Precondition(format!("Re(lambda) = {lambda_re} exceeds 3 - 4 nu = {}", 3.0 - 4.0 * nu)));
    }
    if !(cap_area > 0.0) {
        return Err(ConeError::Precondition("cap area must be positive".into()));
    }
    if nu == 0.5 {
        return Ok(theta_omega);
    }
    let shifted = (lambda_re + nf - 1.0).powi(2) + lambda_im * lambda_im;
    let c = (3.0 - 4.0 * nu - lambda_re) * shifted / ((1.0 - 2.0 * nu) * denom * cap_area);
    Ok(theta_omega.min(c * cap_area))
}
