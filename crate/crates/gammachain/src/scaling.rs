//! Finite-size scaling drivers: peak location, logarithmic fits and
//! critical-exponent extraction.
//!
//! Near the continuous transitions the energy curvature, the field
//! derivative of the nearest-neighbor correlator and the coherence
//! susceptibility all diverge logarithmically: peak heights grow like
//! `a ln N` while the thermodynamic-limit curves follow `b ln|lambda -
//! lambda_c|`, and `nu = |a/b|` recovers the correlation-length exponent.
//! Gap and dispersion fits give `nu z` and `z` separately.

use rayon::prelude::*;
use std::f64::consts::PI;

use crate::coherence;
use crate::correlations::{self, Component, ContractionSet};
use crate::model::{
    self, classify_phase, critical_set, dispersion, CriticalLine, ModelParams, Phase,
    SweepVariable,
};
use crate::numerics;
use crate::{Error, Result};

/// A one-parameter sweep over a list of system sizes.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub resolution: usize,
    pub base: ModelParams,
    pub sizes: Vec<usize>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.start < self.stop) {
            return Err(Error::InvalidParameter(format!(
                "sweep range [{}, {}] is not strictly ordered",
                self.start, self.stop
            )));
        }
        if self.resolution < 3 {
            return Err(Error::InvalidParameter(
                "sweep resolution must be at least 3 points".into(),
            ));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        numerics_linspace(self.start, self.stop, self.resolution)
    }
}

pub(crate) fn numerics_linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1).max(1) as f64)
        .collect()
}

/// Least-squares line fit with its context.
#[derive(Debug, Clone, Copy)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub n_points: usize,
    pub window: (f64, f64),
}

fn fit(xs: &[f64], ys: &[f64], window: (f64, f64)) -> FitResult {
    let (slope, intercept, stderr) = numerics::linear_fit(xs, ys);
    FitResult {
        slope,
        intercept,
        stderr,
        n_points: xs.len(),
        window,
    }
}

/// Locate a maximum of `eval` on `[lo, hi]`: coarse scan at `resolution`
/// points, then golden-section refinement to `1e-6` in the parameter.
///
/// A maximum on the window edge is reported as an error (the window is too
/// narrow to bracket the peak).
pub fn peak_locate<F>(eval: F, lo: f64, hi: f64, resolution: usize) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    if resolution < 3 || !(lo < hi) {
        return Err(Error::InvalidParameter(
            "peak search needs an ordered window and at least 3 points".into(),
        ));
    }
    let xs = numerics_linspace(lo, hi, resolution);
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, &x) in xs.iter().enumerate() {
        let v = eval(x)?;
        if v > best.1 {
            best = (i, v);
        }
    }
    if best.0 == 0 || best.0 == xs.len() - 1 {
        return Err(Error::InvalidInput(format!(
            "maximum sits on the window edge at {:.6}; widen the sweep",
            xs[best.0]
        )));
    }
    let (a, b) = (xs[best.0 - 1], xs[best.0 + 1]);
    let (x, neg) = numerics::golden_min(
        |x| -eval(x).unwrap_or(f64::NEG_INFINITY),
        a,
        b,
        1e-6,
    );
    Ok((x, -neg))
}

/// Fit `value = a ln N + c` over peak heights.
pub fn log_fit_n(points: &[(usize, f64)]) -> Result<FitResult> {
    if points.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "log-N fit needs at least 4 sizes, got {}",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, v)| *v).collect();
    let window = (
        points.iter().map(|(n, _)| *n as f64).fold(f64::INFINITY, f64::min),
        points.iter().map(|(n, _)| *n as f64).fold(0.0, f64::max),
    );
    Ok(fit(&xs, &ys, window))
}

/// Fit `value = b ln|lambda - lambda_c| + c` over distance points
/// `(|lambda - lambda_c|, value)`.
pub fn log_fit_distance(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "log-distance fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|(d, _)| d.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, v)| *v).collect();
    let window = (
        points.iter().map(|(d, _)| *d).fold(f64::INFINITY, f64::min),
        points.iter().map(|(d, _)| *d).fold(0.0, f64::max),
    );
    Ok(fit(&xs, &ys, window))
}

/// Correlation-length exponent `nu = |a/b|` with first-order error
/// propagation from the two fits.
pub fn exponent_nu(a: &FitResult, b: &FitResult) -> Result<(f64, f64)> {
    if b.slope.abs() < 1e-12 {
        return Err(Error::UndefinedExponent(
            "distance-fit slope is numerically zero".into(),
        ));
    }
    let nu = (a.slope / b.slope).abs();
    let rel = ((a.stderr / a.slope).powi(2) + (b.stderr / b.slope).powi(2)).sqrt();
    Ok((nu, nu * rel.abs()))
}

/// Default distance window for fits against `ln|lambda - lambda_c|`.
pub const DISTANCE_WINDOW: (f64, f64) = (1e-4, 1e-2);
const DISTANCE_POINTS: usize = 20;

fn log_spaced(window: (f64, f64), count: usize) -> Vec<f64> {
    let (lo, hi) = window;
    (0..count)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Which side of a critical point a fit approaches from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

impl Side {
    fn sign(&self) -> f64 {
        match self {
            Side::Above => 1.0,
            Side::Below => -1.0,
        }
    }
}

/// Gap scaling `Delta ~ |lambda - lambda_c|^{nu z}` toward one of the
/// critical lines, approached from the gapped side.
///
/// The gap here is the dispersion evaluated at the gap-closing momentum of
/// the critical point (the quantity whose expansion defines the scaling
/// form); the fit runs over the default distance window.
pub fn gap_scaling_fit(p: &ModelParams, line: CriticalLine, side: Side) -> Result<FitResult> {
    let cs = critical_set(p)?;
    let (k_c, lambda_c, variable): (f64, f64, SweepVariable) = match line {
        CriticalLine::AfmPm => (cs.k_c1, cs.h_c1, SweepVariable::Field),
        CriticalLine::AfmSpiral => {
            let k = cs.k_c2.ok_or_else(|| {
                Error::InvalidInput("no gap-closing momentum: need |h| <= J".into())
            })?;
            let a = cs.alpha_c1.ok_or_else(|| {
                Error::InvalidInput("alpha critical line undefined at Gamma = 0".into())
            })?;
            (k, a, SweepVariable::Alpha)
        }
        CriticalLine::PmSpiral => {
            let h = cs.h_c2.ok_or_else(|| {
                Error::InvalidInput("spiral-PM line does not exist at these couplings".into())
            })?;
            let k = cs.k_c3.ok_or_else(|| {
                Error::InvalidInput("no gap-closing momentum on the spiral-PM line".into())
            })?;
            (k, h, SweepVariable::Field)
        }
    };

    let mut pts = Vec::with_capacity(DISTANCE_POINTS);
    for d in log_spaced(DISTANCE_WINDOW, DISTANCE_POINTS) {
        let params = variable.apply(p, lambda_c + side.sign() * d);
        let delta = dispersion(&params, k_c);
        if delta <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "gap is non-positive ({delta:.3e}) at distance {d:.3e}: \
                 not approaching from the gapped side"
            )));
        }
        pts.push((d, delta.ln()));
    }
    let xs: Vec<f64> = pts.iter().map(|(d, _)| d.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, v)| *v).collect();
    Ok(fit(&xs, &ys, DISTANCE_WINDOW))
}

/// Gap at parameter distance `d` from a critical line, evaluated at the
/// line's gap-closing momentum (used for prefactor checks).
pub fn gap_at_distance(p: &ModelParams, line: CriticalLine, side: Side, d: f64) -> Result<f64> {
    let cs = critical_set(p)?;
    let val = match line {
        CriticalLine::AfmPm => {
            dispersion(&p.with_h(cs.h_c1 + side.sign() * d), cs.k_c1)
        }
        CriticalLine::AfmSpiral => {
            let k = cs.k_c2.ok_or_else(|| Error::InvalidInput("need |h| <= J".into()))?;
            let a = cs
                .alpha_c1
                .ok_or_else(|| Error::InvalidInput("no alpha line at Gamma = 0".into()))?;
            dispersion(&p.with_alpha(a + side.sign() * d), k)
        }
        CriticalLine::PmSpiral => {
            let h = cs
                .h_c2
                .ok_or_else(|| Error::InvalidInput("no spiral-PM line".into()))?;
            let k = cs
                .k_c3
                .ok_or_else(|| Error::InvalidInput("no gap-closing momentum".into()))?;
            dispersion(&p.with_h(h + side.sign() * d), k)
        }
    };
    Ok(val)
}

/// Dynamical exponent from the dispersion shape at a critical point:
/// slope of `ln eps` vs `ln|k - k_c|`, one-sided on the positive-`k` side.
pub fn dispersion_exponent_z(p: &ModelParams) -> Result<FitResult> {
    let line = match classify_phase(p)? {
        Phase::Critical(line) => line,
        other => {
            return Err(Error::InvalidInput(format!(
                "parameters are not on a critical line (phase {:?})",
                other
            )))
        }
    };
    let cs = critical_set(p)?;
    let k_c = match line {
        CriticalLine::AfmPm => cs.k_c1,
        CriticalLine::AfmSpiral => cs
            .k_c2
            .ok_or_else(|| Error::InvalidInput("no gap-closing momentum".into()))?,
        CriticalLine::PmSpiral => cs
            .k_c3
            .ok_or_else(|| Error::InvalidInput("no gap-closing momentum".into()))?,
    };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for dk in log_spaced(DISTANCE_WINDOW, DISTANCE_POINTS) {
        let eps = dispersion(p, k_c + dk);
        if eps <= 0.0 {
            return Err(Error::Numeric(format!(
                "dispersion non-positive at k_c + {dk:.3e}"
            )));
        }
        xs.push(dk.ln());
        ys.push(eps.ln());
    }
    Ok(fit(&xs, &ys, DISTANCE_WINDOW))
}

/// Jump of `-d^2 e0 / d alpha^2` across the alpha critical line at fixed
/// `h`.
///
/// Each one-sided value is the curvature averaged over offsets in
/// `[1e-3, 5e-3]` from the critical point: at finite `N` the gapless-side
/// energy has tiny kinks wherever a quasiparticle mode crosses zero, and a
/// single second-difference stencil next to one of them is noisy by
/// `O(1/(N step))`; the window average is stable to well below a percent
/// for `N >= 1000`.
pub fn discontinuity_probe(p: &ModelParams) -> Result<f64> {
    let cs = critical_set(p)?;
    let alpha_c = if p.h <= p.j {
        cs.alpha_c1
    } else {
        cs.alpha_c2
    }
    .ok_or_else(|| Error::InvalidInput("no alpha critical line at Gamma = 0".into()))?;
    let step = 2.5e-4;
    let samples = 81;
    let spacing = 5e-5;
    let side_average = |sign: f64| -> Result<f64> {
        let mut acc = 0.0;
        for i in 0..samples {
            let alpha = alpha_c + sign * (1e-3 + i as f64 * spacing);
            acc += -model::energy_second_derivative(
                &p.with_alpha(alpha),
                SweepVariable::Alpha,
                step,
            )?;
        }
        Ok(acc / samples as f64)
    };
    Ok((side_average(1.0)? - side_average(-1.0)?).abs())
}

/// Quantity whose logarithmic scaling is being fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingTarget {
    /// `-d^2 e0 / d h^2`
    EnergyCurvature,
    /// `d G_1^{xx} / d h`
    CorrelationDerivative,
    /// `d C^st / d h` at qubit separation `r`
    SqcSusceptibility { r: usize },
}

impl ScalingTarget {
    pub fn label(&self) -> String {
        match self {
            ScalingTarget::EnergyCurvature => "energy-curvature".into(),
            ScalingTarget::CorrelationDerivative => "correlation-derivative".into(),
            ScalingTarget::SqcSusceptibility { r } => format!("sqc-susceptibility[r={r}]"),
        }
    }
}

/// Finite-difference step for the scaling evaluators.
///
/// The peak region sharpens like `1/N`, so the stencil must stay well
/// inside it; `1e-5` keeps the truncation error negligible for every size
/// used here while the chain sums are exact to machine precision.
const FD_STEP: f64 = 1e-5;

/// Evaluate a scaling target at finite `N` as a function of `h`.
fn finite_n_quantity(target: ScalingTarget, p: &ModelParams, h: f64) -> Result<f64> {
    let pp = p.with_h(h);
    match target {
        ScalingTarget::EnergyCurvature => Ok(-model::energy_second_derivative(
            &pp,
            SweepVariable::Field,
            FD_STEP,
        )?),
        ScalingTarget::CorrelationDerivative => {
            let g = |h: f64| -> Result<f64> {
                Ok(correlations::two_point(&pp.with_h(h), Component::Xx, 1)?.value)
            };
            Ok((g(h + FD_STEP)? - g(h - FD_STEP)?) / (2.0 * FD_STEP))
        }
        ScalingTarget::SqcSusceptibility { r } => {
            let window = r + 1;
            let f = |h: f64| -> Result<f64> {
                let set = ContractionSet::new(&pp.with_h(h), window)?;
                coherence::sqc_from(&set, r)
            };
            Ok((f(h + FD_STEP)? - f(h - FD_STEP)?) / (2.0 * FD_STEP))
        }
    }
}

/// Evaluate a scaling target in the thermodynamic limit at field `h`
/// (quadrature contractions; derivative step shrinks with the distance to
/// the critical field).
fn thermo_quantity(target: ScalingTarget, p: &ModelParams, h: f64, fd_step: f64) -> Result<f64> {
    match target {
        ScalingTarget::EnergyCurvature => energy_curvature_thermodynamic(&p.with_h(h)),
        ScalingTarget::CorrelationDerivative => {
            let g = |h: f64| -> Result<f64> {
                let set = ContractionSet::thermodynamic(&p.with_h(h), 1)?;
                correlations::two_point_from(&set, Component::Xx, 1)
            };
            Ok((g(h + fd_step)? - g(h - fd_step)?) / (2.0 * fd_step))
        }
        ScalingTarget::SqcSusceptibility { r } => {
            let f = |h: f64| -> Result<f64> {
                let set = ContractionSet::thermodynamic(&p.with_h(h), r + 1)?;
                coherence::sqc_from(&set, r)
            };
            Ok((f(h + fd_step)? - f(h - fd_step)?) / (2.0 * fd_step))
        }
    }
}

/// Thermodynamic-limit values of a scaling target at logarithmically
/// spaced distances from the critical field, on the chosen side.
pub fn distance_scan_thermo_side(
    base: &ModelParams,
    target: ScalingTarget,
    window: (f64, f64),
    points: usize,
    side: Side,
) -> Result<Vec<(f64, f64)>> {
    let h_c = critical_set(base)?.h_c1;
    log_spaced(window, points)
        .par_iter()
        .map(|&d| {
            let fd_step = (d / 10.0).min(FD_STEP);
            thermo_quantity(target, base, h_c + side.sign() * d, fd_step).map(|v| (d, v))
        })
        .collect()
}

/// Thermodynamic-limit values of a scaling target at logarithmically
/// spaced distances above the critical field.
pub fn distance_scan_thermo(
    base: &ModelParams,
    target: ScalingTarget,
    window: (f64, f64),
    points: usize,
) -> Result<Vec<(f64, f64)>> {
    distance_scan_thermo_side(base, target, window, points, Side::Above)
}

/// Analytic thermodynamic-limit energy curvature `-d^2 e0 / d h^2` for
/// gapped parameters: the `h`-derivative is taken inside the integral,
/// avoiding finite-difference cancellation next to the singularity.
pub fn energy_curvature_thermodynamic(p: &ModelParams) -> Result<f64> {
    let gp = p.big_gamma * (p.alpha + 1.0);
    let gg = p.j * p.gamma;
    let s2 = gp * gp + gg * gg;
    let integrand = |k: f64| {
        let (sk, ck) = k.sin_cos();
        let a = p.j * ck - p.h;
        let r = s2 * sk * sk + a * a;
        2.0 * s2 * sk * sk / (r * r.sqrt())
    };
    let v = numerics::integrate_with_breaks(integrand, -PI, PI, &[0.0], 1e-10, 1e-13)?;
    Ok(v / (4.0 * PI))
}

/// Peak position and height of a scaling target near the field transition,
/// for each system size.
pub fn peaks_over_sizes(
    base: &ModelParams,
    target: ScalingTarget,
    sizes: &[usize],
    window: (f64, f64),
    resolution: usize,
) -> Result<Vec<(usize, f64, f64)>> {
    let results: Vec<Result<(usize, f64, f64)>> = sizes
        .par_iter()
        .map(|&n| {
            let p = base.with_n(n);
            let (loc, val) = peak_locate(
                |h| finite_n_quantity(target, &p, h),
                window.0,
                window.1,
                resolution,
            )?;
            Ok((n, loc, val))
        })
        .collect();
    results.into_iter().collect()
}

/// Full scaling analysis of one target: peak-height fit in `ln N`,
/// thermodynamic distance fit in `ln|h - h_c|`, and `nu = |a/b|`.
#[derive(Debug, Clone)]
pub struct ScalingFits {
    pub target: ScalingTarget,
    pub peaks: Vec<(usize, f64, f64)>,
    pub distance_points: Vec<(f64, f64)>,
    pub size_fit: FitResult,
    pub distance_fit: FitResult,
    pub nu: f64,
    pub nu_stderr: f64,
}

/// Default system sizes `200, 400, ..., 2000`.
pub fn default_sizes() -> Vec<usize> {
    (1..=10).map(|i| 200 * i).collect()
}

/// [`scaling_fit`] with an explicit distance window for the
/// thermodynamic-limit fit.
pub fn scaling_fit_with(
    base: &ModelParams,
    target: ScalingTarget,
    sizes: &[usize],
    window: (f64, f64),
) -> Result<ScalingFits> {
    let peaks = peaks_over_sizes(base, target, sizes, (0.85, 1.1), 400)?;
    let size_fit = log_fit_n(
        &peaks.iter().map(|(n, _, v)| (*n, *v)).collect::<Vec<_>>(),
    )?;
    let distance_points = distance_scan_thermo(base, target, window, DISTANCE_POINTS)?;
    let distance_fit = log_fit_distance(&distance_points)?;
    let (nu, nu_stderr) = exponent_nu(&size_fit, &distance_fit)?;
    Ok(ScalingFits {
        target,
        peaks,
        distance_points,
        size_fit,
        distance_fit,
        nu,
        nu_stderr,
    })
}

/// Peak-height fit over the given sizes plus a thermodynamic-limit
/// distance fit over the default window.
pub fn scaling_fit(
    base: &ModelParams,
    target: ScalingTarget,
    sizes: &[usize],
) -> Result<ScalingFits> {
    scaling_fit_with(base, target, sizes, DISTANCE_WINDOW)
}

/// One grid point of the phase diagram.
#[derive(Debug, Clone, Copy)]
pub struct PhasePoint {
    pub alpha: f64,
    pub h: f64,
    pub signed_min: f64,
    pub gap: f64,
    pub phase: Phase,
}

/// Gap and phase label over an `alpha x h` grid (row-major in `alpha`,
/// then `h`).
pub fn phase_diagram_grid(
    base: &ModelParams,
    alphas: &[f64],
    hs: &[f64],
) -> Result<Vec<PhasePoint>> {
    let pts: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| hs.iter().map(move |&h| (a, h)))
        .collect();
    pts.par_iter()
        .map(|&(alpha, h)| {
            let p = base.with_alpha(alpha).with_h(h);
            let g = model::excitation_gap(&p);
            Ok(PhasePoint {
                alpha,
                h,
                signed_min: g.signed_min,
                gap: g.gap,
                phase: classify_phase(&p)?,
            })
        })
        .collect()
}
