//! Non-singularity certificate of the pencil over a lattice in the strip.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};
use crate::pencil::assembly::PencilOperator;
use crate::pencil::phi::{strip_report, MaterialParams, PhiContext, StripReport};
use crate::pencil::singular::singular_extremes_with;
use crate::sphere_spectra::{dirichlet_eigenvalue_cap, CapDomain, DiscretizationConfig, Scheme};

/// A complex sample point λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaPoint {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for LambdaPoint {
    fn from(z: Complex64) -> Self {
        LambdaPoint { re: z.re, im: z.im }
    }
}

impl From<LambdaPoint> for Complex64 {
    fn from(p: LambdaPoint) -> Self {
        Complex64::new(p.re, p.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Relative sigma_min below which a point is flagged.
    pub threshold: f64,
    /// Fraction of the strip half-width removed at each side.
    pub margin: f64,
    /// The lattice covers |Im l| <= im_extent.
    pub im_extent: f64,
    /// Point and mode evaluated as a positive control (a known pencil eigenvalue).
    pub control: Option<(LambdaPoint, usize)>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            threshold: 1e-4,
            margin: 0.01,
            im_extent: 2.0,
            control: Some((LambdaPoint { re: 1.0, im: 0.0 }, 1)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlPoint {
    pub lambda: LambdaPoint,
    pub mode: usize,
    pub sigma_min: f64,
    pub below_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub grid: Vec<LambdaPoint>,
    /// Minimum over the scanned modes of the relative sigma_min, per grid point.
    pub sigma_min: Vec<f64>,
    pub attaining_mode: Vec<usize>,
    pub threshold: f64,
    pub flagged: Vec<LambdaPoint>,
    pub strip: StripReport,
    pub eigenvalue: f64,
    pub m_exponent: f64,
    pub mesh: usize,
    pub max_mode: usize,
    pub control: Option<ControlPoint>,
}

fn lattice(strip: &StripReport, grid_re: usize, grid_im: usize, opts: &ScanOptions) -> Vec<Complex64> {
    let half = (1.0 - opts.margin) * strip.halfwidth;
    let axis = |count: usize, center: f64, half: f64| -> Vec<f64> {
        if count == 1 {
            vec![center]
        } else {
            (0..count).map(|k| center - half + 2.0 * half * k as f64 / (count - 1) as f64).collect()
        }
    };
    let res = axis(grid_re, strip.center(), half);
    let ims = axis(grid_im, 0.0, opts.im_extent);
    let mut pts = Vec::with_capacity(grid_re * grid_im);
    for &im in &ims {
        for &re in &res {
            pts.push(Complex64::new(re, im));
        }
    }
    pts
}

/// Scan with default options.
pub fn strip_scan(
    cap: &CapDomain,
    mat: &MaterialParams,
    grid_re: usize,
    grid_im: usize,
    cfg: &DiscretizationConfig,
) -> Result<ScanReport> {
    strip_scan_with(cap, mat, grid_re, grid_im, cfg, &ScanOptions::default())
}

/// Evaluates the relative sigma_min over a grid_re x grid_im lattice covering the
/// strip (shrunk by the margin) for modes 0..=cfg.max_azimuthal_mode.
pub fn strip_scan_with(
    cap: &CapDomain,
    mat: &MaterialParams,
    grid_re: usize,
    grid_im: usize,
    cfg: &DiscretizationConfig,
    opts: &ScanOptions,
) -> Result<ScanReport> {
    cfg.validate()?;
    if grid_re == 0 || grid_im == 0 {
        return Err(ConeError::Precondition("scan lattice needs at least one point per axis".into()));
    }
    let spectral_cfg = DiscretizationConfig { scheme: Scheme::FiniteDifference, ..*cfg };
    let ground = dirichlet_eigenvalue_cap(cap, 0, &spectral_cfg)?;
    let strip = strip_report(&PhiContext::new(cap.n, mat.nu, ground.m_exponent)?)?;
    let points = lattice(&strip, grid_re, grid_im, opts);

    let operators: Vec<(PencilOperator, crate::linalg::BandLu)> = (0..=cfg.max_azimuthal_mode)
        .into_par_iter()
        .map(|m| {
            let op = PencilOperator::from_config(cap, mat, m, cfg)?;
            let lu = op.gram.lu()?;
            Ok((op, lu))
        })
        .collect::<Result<_>>()?;

    let jobs: Vec<(usize, usize)> = (0..points.len()).flat_map(|p| (0..operators.len()).map(move |m| (p, m))).collect();
    let values: Vec<f64> = jobs
        .par_iter()
        .map(|&(p, m)| {
            let (op, lu) = &operators[m];
            singular_extremes_with(&op.matrix_at(points[p]), &op.gram, lu).map(|s| s.relative)
        })
        .collect::<Result<_>>()?;

    let modes = operators.len();
    let mut sigma_min = Vec::with_capacity(points.len());
    let mut attaining_mode = Vec::with_capacity(points.len());
    for p in 0..points.len() {
        let row = &values[p * modes..(p + 1) * modes];
        let (m, v) =
            row.iter().enumerate().fold((0, f64::INFINITY), |acc, (m, &v)| if v < acc.1 { (m, v) } else { acc });
        sigma_min.push(v);
        attaining_mode.push(m);
    }
    let flagged = points
        .iter()
        .zip(&sigma_min)
        .filter(|(_, &s)| s < opts.threshold)
        .map(|(z, _)| LambdaPoint::from(*z))
        .collect();

    let control = match opts.control {
        Some((lambda, mode)) => {
            let op = match operators.get(mode) {
                Some((op, _)) => op.clone(),
                None => PencilOperator::from_config(cap, mat, mode, cfg)?,
            };
            let lu = op.gram.lu()?;
            let s = singular_extremes_with(&op.matrix_at(lambda.into()), &op.gram, &lu)?.relative;
            Some(ControlPoint { lambda, mode, sigma_min: s, below_threshold: s < opts.threshold })
        }
        None => None,
    };

    Ok(ScanReport {
        grid: points.into_iter().map(LambdaPoint::from).collect(),
        sigma_min,
        attaining_mode,
        threshold: opts.threshold,
        flagged,
        strip,
        eigenvalue: ground.eigenvalue,
        m_exponent: ground.m_exponent,
        mesh: cfg.grid_points,
        max_mode: cfg.max_azimuthal_mode,
        control,
    })
}
