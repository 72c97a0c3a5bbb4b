//! Empirical verification of the maximal-function lemmas under mesh refinement.

use serde::{Deserialize, Serialize};

use super::data::DataGenerator;
use super::maximal::{maximal_report, Components, MaximalReport, NontangentialCone};
use super::mesh::{ConeBoundary, MeshSchedule, MeshSpec};
use crate::error::{ConeError, Result};
use crate::green_model::KernelBoundModel;

/// Maximal relative change of a bounded ratio between the two finest levels.
pub const DRIFT_TOLERANCE: f64 = 0.2;
/// Minimal growth factor per level on the divergence branch.
pub const GROWTH_FACTOR: f64 = 2.0;
/// Exponent offset of the singular datum on the divergence branch.
pub const SHARPNESS_EPS: f64 = 0.01;
/// Exponent offset of the singular datum on the bounded branch.
pub const STABLE_EPS: f64 = 0.25;

pub const SOLVABILITY_ASSUMPTION: &str =
    "L^p solvability on C^1 modifications of the domain near the vertex is assumed, not tested";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LemmaId {
    /// Far-zone potential: L^∞ → L^∞ and L^1 → weak L^1.
    Far = 1,
    /// Near-zone potential: L^∞ → L^∞ and L^p → weak L^p above the critical exponent.
    Near = 2,
    /// Middle-zone potential: L^∞ → L^∞.
    MiddleUniform = 3,
    /// Middle-zone potential: L^p → L^p for p > 1.
    MiddleLp = 4,
}

impl LemmaId {
    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(LemmaId::Far),
            2 => Ok(LemmaId::Near),
            3 => Ok(LemmaId::MiddleUniform),
            4 => Ok(LemmaId::MiddleLp),
            _ => Err(ConeError::Precondition(format!("unknown lemma {k}; expected 1 to 4"))),
        }
    }

    pub fn number(self) -> u8 {
        self as u8
    }

    /// Default refinement schedule: deep dyadic meshes for the far and near zones,
    /// finer angular resolution for the middle zone.
    pub fn schedule(self) -> MeshSchedule {
        match self {
            LemmaId::Far | LemmaId::Near => MeshSchedule {
                base: MeshSpec { bands: 16, radial: 3, angular: 64, lid_rings: 4 },
                step: MeshSpec { bands: 16, radial: 1, angular: 16, lid_rings: 2 },
            },
            LemmaId::MiddleUniform | LemmaId::MiddleLp => MeshSchedule {
                base: MeshSpec { bands: 6, radial: 4, angular: 48, lid_rings: 4 },
                step: MeshSpec { bands: 2, radial: 2, angular: 24, lid_rings: 2 },
            },
        }
    }

    fn components(self) -> Components {
        match self {
            LemmaId::Far => Components { v1: true, v2: false, v3: false },
            LemmaId::Near => Components { v1: false, v2: false, v3: true },
            LemmaId::MiddleUniform | LemmaId::MiddleLp => Components { v1: false, v2: true, v3: false },
        }
    }
}

/// A norm ratio ‖v*‖/‖f‖ tracked across levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// ‖v*‖_∞ / ‖f‖_∞
    Uniform,
    /// ‖v*‖_{1,w} / ‖f‖_1
    WeakL1,
    /// ‖v*‖_{p,w} / ‖f‖_p
    WeakLp,
    /// ‖v*‖_p / ‖f‖_p
    StrongLp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Bounded,
    Sharpness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Pass,
    /// Divergence detected where it is expected.
    Diverges,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSeries {
    pub datum: String,
    pub metric: Metric,
    pub ratios: Vec<f64>,
    /// Relative change between the two finest levels.
    pub drift: f64,
    /// Ratio of consecutive levels.
    pub growth: Vec<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaVerdict {
    pub lemma: u8,
    pub p: f64,
    pub p_critical: Option<f64>,
    pub branch: Branch,
    pub outcome: Outcome,
    pub meshes: Vec<MeshSpec>,
    pub series: Vec<RatioSeries>,
    /// Largest finest-level ratio over the suite, per metric.
    pub fitted_constants: Vec<(Metric, f64)>,
    pub skipped_points: Vec<usize>,
    pub assumptions: Vec<String>,
    pub diagnostics: Vec<String>,
}

impl LemmaVerdict {
    pub fn passed(&self) -> bool {
        self.outcome != Outcome::Fail
    }
}

/// Geometry and sampling shared by all lemma runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub theta0: f64,
    pub cone: NontangentialCone,
    pub levels: usize,
    /// Maximal functions are evaluated on lateral points with |x| at most this radius.
    pub evaluation_radius: f64,
    /// Overrides the lemma's default schedule.
    pub schedule: Option<MeshSchedule>,
}

impl HarnessConfig {
    pub fn new(theta0: f64, delta: f64, levels: usize) -> Self {
        HarnessConfig {
            theta0,
            cone: NontangentialCone::standard(delta),
            levels,
            evaluation_radius: 0.5 * delta,
            schedule: None,
        }
    }
}

/// The critical exponent (n-1)/(n-2+α) of the near-zone lemma.
pub fn critical_exponent(model: &KernelBoundModel) -> f64 {
    (model.n as f64 - 1.0) / (model.n as f64 - 2.0 + model.alpha)
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn metric_values(lemma: LemmaId, rep: &MaximalReport) -> Vec<(Metric, f64)> {
    let norms = match lemma {
        LemmaId::Far => rep.v1_norms,
        LemmaId::Near => rep.v3_norms,
        LemmaId::MiddleUniform | LemmaId::MiddleLp => rep.v2_norms,
    };
    let mut out = Vec::new();
    match lemma {
        LemmaId::Far => {
            out.push((Metric::Uniform, ratio(norms.linf, rep.f_linf)));
            out.push((Metric::WeakL1, ratio(norms.weak_l1, rep.f_l1)));
        }
        LemmaId::Near => {
            out.push((Metric::Uniform, ratio(norms.linf, rep.f_linf)));
            out.push((Metric::WeakLp, ratio(norms.weak_lp, rep.f_lp)));
        }
        LemmaId::MiddleUniform => out.push((Metric::Uniform, ratio(norms.linf, rep.f_linf))),
        LemmaId::MiddleLp => out.push((Metric::StrongLp, ratio(norms.lp, rep.f_lp))),
    }
    out
}

/// Runs the suite on every refinement level and judges the norm-ratio series.
///
/// On the bounded branch each ratio must settle (relative drift at most 20%
/// between the two finest levels). On the sharpness branch (near-zone lemma
/// with p at or below the critical exponent) each weak-L^p ratio must grow by
/// at least a factor 2 per level. Any failing datum makes the verdict FAIL.
pub fn verify_lemma(
    lemma: LemmaId,
    suite: &[DataGenerator],
    p: f64,
    cfg: &HarnessConfig,
    model: &KernelBoundModel,
) -> Result<LemmaVerdict> {
    if model.n != 3 {
        return Err(ConeError::Precondition(format!("the harness supports n = 3 only, got n = {}", model.n)));
    }
    if cfg.levels < 2 {
        return Err(ConeError::Precondition("at least two refinement levels are required".into()));
    }
    if suite.is_empty() {
        return Err(ConeError::Precondition("empty data suite".into()));
    }
    let p_min = matches!(lemma, LemmaId::Near).then(|| critical_exponent(model));
    match lemma {
        LemmaId::Far | LemmaId::MiddleUniform => {}
        LemmaId::Near if !(p >= 1.0) => {
            return Err(ConeError::Precondition(format!("exponent p = {p} must be at least 1")));
        }
        LemmaId::MiddleLp if !(p > 1.0) => {
            return Err(ConeError::Precondition(format!("exponent p = {p} must exceed 1")));
        }
        _ => {}
    }
    let branch = match p_min {
        Some(pm) if p <= pm => Branch::Sharpness,
        _ => Branch::Bounded,
    };
    let q = match lemma {
        LemmaId::Far | LemmaId::MiddleUniform => 1.0,
        _ => p,
    };
    let schedule = cfg.schedule.unwrap_or_else(|| lemma.schedule());
    let meshes: Vec<MeshSpec> = (0..cfg.levels).map(|l| schedule.at(l)).collect();

    // values[d][m][level]
    let mut values: Vec<Vec<(Metric, Vec<f64>)>> = vec![Vec::new(); suite.len()];
    let mut skipped_points = Vec::new();
    let mut diagnostics = Vec::new();
    for spec in &meshes {
        let bnd = ConeBoundary::new(cfg.theta0, model.delta, *spec)?;
        let mut skipped = 0;
        for (d, gen) in suite.iter().enumerate() {
            let f = gen.sample(&bnd)?;
            let rep = maximal_report(&bnd, &f, &cfg.cone, model, q, lemma.components(), cfg.evaluation_radius)?;
            skipped = rep.skipped_count();
            if lemma == LemmaId::MiddleLp {
                diagnostics.push(format!(
                    "mesh {}x{}x{}: {} has z(x)|x|^(n-1)/|f|_1 <= {:.4e}",
                    spec.bands, spec.radial, spec.angular, f.description, rep.z_constant
                ));
            }
            for (m, v) in metric_values(lemma, &rep) {
                if m == Metric::Uniform && !gen.is_bounded() {
                    continue;
                }
                if branch == Branch::Sharpness && m != Metric::WeakLp {
                    continue;
                }
                match values[d].iter_mut().find(|(mm, _)| *mm == m) {
                    Some((_, s)) => s.push(v),
                    None => values[d].push((m, vec![v])),
                }
            }
        }
        skipped_points.push(skipped);
    }

    let mut series = Vec::new();
    for (d, gen) in suite.iter().enumerate() {
        for (metric, ratios) in &values[d] {
            let growth: Vec<f64> = ratios.windows(2).map(|w| ratio(w[1], w[0])).collect();
            let (a, b) = (ratios[ratios.len() - 2], ratios[ratios.len() - 1]);
            let drift = if a == b { 0.0 } else { (b - a).abs() / a.abs().max(f64::MIN_POSITIVE) };
            let finite = ratios.iter().all(|r| r.is_finite());
            let passed = finite
                && match branch {
                    Branch::Bounded => drift <= DRIFT_TOLERANCE,
                    Branch::Sharpness => growth.iter().all(|g| *g >= GROWTH_FACTOR),
                };
            if !passed {
                diagnostics.push(format!("{} {:?}: ratios {:?}", gen.tag(), metric, ratios));
            }
            series.push(RatioSeries {
                datum: gen.tag(),
                metric: *metric,
                ratios: ratios.clone(),
                drift,
                growth,
                passed,
            });
        }
    }
    if series.is_empty() {
        return Err(ConeError::Precondition("no metric applies to the given suite".into()));
    }
    let mut fitted_constants: Vec<(Metric, f64)> = Vec::new();
    for s in &series {
        let last = *s.ratios.last().unwrap_or(&0.0);
        match fitted_constants.iter_mut().find(|(m, _)| *m == s.metric) {
            Some((_, c)) => *c = c.max(last),
            None => fitted_constants.push((s.metric, last)),
        }
    }
    let all_passed = series.iter().all(|s| s.passed);
    let outcome = match (all_passed, branch) {
        (false, _) => Outcome::Fail,
        (true, Branch::Bounded) => Outcome::Pass,
        (true, Branch::Sharpness) => Outcome::Diverges,
    };
    let assumptions = if lemma == LemmaId::MiddleLp { vec![SOLVABILITY_ASSUMPTION.to_string()] } else { Vec::new() };
    log::info!("lemma {} p = {p}: {:?}", lemma.number(), outcome);
    Ok(LemmaVerdict {
        lemma: lemma.number(),
        p,
        p_critical: p_min,
        branch,
        outcome,
        meshes,
        series,
        fitted_constants,
        skipped_points,
        assumptions,
        diagnostics,
    })
}

/// The singular datum used for the near-zone lemma at exponent p: it lies in
/// L^p and is chosen close to the borderline on the sharpness branch.
pub fn near_zone_singular_datum(model: &KernelBoundModel, p: f64) -> DataGenerator {
    let eps = if p <= critical_exponent(model) { SHARPNESS_EPS } else { STABLE_EPS };
    DataGenerator::vertex_singular(model.n, p, eps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub points_checked: usize,
    pub max_count: usize,
    /// histogram[c] = number of points lying in exactly c enlarged bands.
    pub histogram: Vec<usize>,
    /// Each dyadic band is exactly half of the next coarser one.
    pub rescale_exact: bool,
    pub band_range: (i64, i64),
}

/// Indices j in [j_min, j_max] with 2^{-j-2}δ ≤ r < 2^{-j+3}δ.
pub fn band_memberships(radius: f64, delta: f64, j_min: i64, j_max: i64) -> Vec<i64> {
    let x = radius / delta;
    (j_min..=j_max)
        .filter(|&j| {
            let lo = 2f64.powi(-(j as i32) - 2);
            let hi = 2f64.powi(3 - j as i32);
            lo <= x && x < hi
        })
        .collect()
}

/// Checks the dyadic rescaling of the mesh bands and counts how many enlarged
/// bands contain each boundary point.
pub fn dyadic_band_accounting(bnd: &ConeBoundary) -> Result<OverlapReport> {
    let bands = bnd.spec.bands;
    let mut rescale_exact = true;
    for k in 1..bands {
        let coarse = bnd.band_indices(k - 1);
        let fine = bnd.band_indices(k);
        rescale_exact &= coarse.len() == fine.len()
            && coarse.iter().zip(&fine).all(|(&i, &j)| {
                let (a, b) = (&bnd.points[i], &bnd.points[j]);
                b.radius == 0.5 * a.radius
                    && b.weight == 0.25 * a.weight
                    && (0..3).all(|c| b.position[c] == 0.5 * a.position[c])
            });
    }
    let band_range = (0, bands as i64 - 1);
    let mut histogram = vec![0usize; 7];
    let mut max_count = 0;
    for pt in &bnd.points {
        let count = band_memberships(pt.radius, bnd.delta, band_range.0, band_range.1).len();
        if count > 5 {
            return Err(ConeError::Overlap { count, radius: pt.radius });
        }
        histogram[count] += 1;
        max_count = max_count.max(count);
    }
    Ok(OverlapReport { points_checked: bnd.len(), max_count, histogram, rescale_exact, band_range })
}
