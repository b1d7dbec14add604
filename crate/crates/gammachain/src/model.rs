//! Chain parameters, free-fermion spectrum, phase diagram and energy
//! derivatives.
//!
//! After a Jordan-Wigner transformation the chain becomes a quadratic
//! fermion Hamiltonian.  Per momentum `k` the 2x2 block in the
//! `(c_k, c^dag_{-k})` basis is
//!
//! ```text
//! [ A_k    B_k   ]         A_k = J cos k + G (alpha - 1) sin k - h
//! [ B_k^* -A_{-k}]         B_k = [G (alpha + 1) - i J gamma] sin k
//! ```
//!
//! whose Bogoliubov rotation gives quasiparticle energies
//!
//! ```text
//! eps_k = 2 sqrt([G^2 (alpha+1)^2 + J^2 gamma^2] sin^2 k + (J cos k - h)^2)
//!         - 2 G (1 - alpha) sin k
//! ```
//!
//! `eps_k` is not symmetric in `k` and may turn negative; the filled set of
//! negative-energy quasiparticle modes produces the gapless spiral phase.
//!
//! Boundary conditions on the fermions depend on the fermion-number parity
//! (phase factor `s = (-1)^{N_p + 1}` on the wrap-around bond), splitting the
//! problem into an antiperiodic (even parity, half-integer momenta) and a
//! periodic (odd parity, integer momenta) channel.  [`finite_ground_state`]
//! resolves this bookkeeping exactly, which is what makes small-chain results
//! agree with brute-force diagonalization to machine precision.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::numerics;
use crate::{Error, Result};

/// Couplings and geometry of the chain.
///
/// `j` is the XY exchange scale (positive), `gamma` the XY anisotropy,
/// `big_gamma` the amplitude of the off-diagonal exchange, `alpha` the
/// relative weight of its two terms, `h` the transverse field and `n` the
/// (even) number of sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub j: f64,
    pub gamma: f64,
    pub big_gamma: f64,
    pub alpha: f64,
    pub h: f64,
    pub n: usize,
}

impl ModelParams {
    pub fn new(j: f64, gamma: f64, big_gamma: f64, alpha: f64, h: f64, n: usize) -> Result<Self> {
        let p = Self { j, gamma, big_gamma, alpha, h, n };
        p.validate()?;
        Ok(p)
    }

    /// Paper-style defaults: `J = 1`, `gamma = big_gamma = 0.6`.
    pub fn reference(alpha: f64, h: f64, n: usize) -> Result<Self> {
        Self::new(1.0, 0.6, 0.6, alpha, h, n)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("J", self.j),
            ("gamma", self.gamma),
            ("Gamma", self.big_gamma),
            ("alpha", self.alpha),
            ("h", self.h),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} is not finite")));
            }
        }
        if self.j <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "J must be positive, got {}",
                self.j
            )));
        }
        if self.n < 4 || self.n % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "N must be an even integer >= 4, got {}",
                self.n
            )));
        }
        Ok(())
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    /// `X = 4 alpha Gamma^2 + (J gamma)^2` in units of `J^2`; its sign
    /// selects which critical lines exist.
    pub(crate) fn x_parameter(&self) -> f64 {
        let gr = self.big_gamma / self.j;
        4.0 * self.alpha * gr * gr + self.gamma * self.gamma
    }
}

/// Fermion boundary-condition channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// Half-integer momenta `k = n pi / N`, odd `n`; even fermion parity.
    Antiperiodic,
    /// Integer momenta `k = 2 n pi / N`; odd fermion parity.
    Periodic,
}

/// Ordered set of `N` momenta in `(-pi, pi]`.
#[derive(Debug, Clone)]
pub struct MomentumGrid {
    pub sector: Sector,
    pub k: Vec<f64>,
}

/// Momentum grid for an even chain of `n` sites.
pub fn momentum_grid(n: usize, sector: Sector) -> Result<MomentumGrid> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "momentum grid needs even N >= 4, got {n}"
        )));
    }
    let nn = n as i64;
    let indices: Vec<i64> = match sector {
        Sector::Antiperiodic => (-(nn - 1)..=nn - 1).step_by(2).collect(),
        Sector::Periodic => (-(nn - 2)..=nn).step_by(2).collect(),
    };
    let k = indices
        .iter()
        .map(|&m| m as f64 * PI / nn as f64)
        .collect();
    Ok(MomentumGrid { sector, k })
}

/// One row of the Bogoliubov-de Gennes block at momentum `k`.
#[derive(Debug, Clone, Copy)]
pub struct BdgBlock {
    pub k: f64,
    /// Diagonal entry `A_k` (includes the odd `Gamma (alpha-1) sin k` part).
    pub a: f64,
    /// Pairing entry `B_k`.
    pub b: C64,
}

pub fn bdg_block(p: &ModelParams, k: f64) -> BdgBlock {
    let (sk, ck) = k.sin_cos();
    BdgBlock {
        k,
        a: p.j * ck + p.big_gamma * (p.alpha - 1.0) * sk - p.h,
        b: C64::new(p.big_gamma * (p.alpha + 1.0), -p.j * p.gamma) * sk,
    }
}

/// Quasiparticle energy at momentum `k` (may be negative).
pub fn dispersion(p: &ModelParams, k: f64) -> f64 {
    let (sk, ck) = k.sin_cos();
    let a = p.j * ck - p.h;
    let gp = p.big_gamma * (p.alpha + 1.0);
    let gg = p.j * p.gamma;
    let b2 = (gp * gp + gg * gg) * sk * sk;
    2.0 * ((a * a + b2).sqrt() + p.big_gamma * (p.alpha - 1.0) * sk)
}

/// A single quasiparticle mode.
///
/// `u`, `v`, `phi` parameterize the Bogoliubov rotation
/// `b_k = u c_k + v e^{i phi} c^dag_{-k}` with `u, v` real and
/// `u^2 + v^2 = 1`; `filled` marks modes occupied in the ground state.
#[derive(Debug, Clone, Copy)]
pub struct Mode {
    pub k: f64,
    pub energy: f64,
    pub u: f64,
    pub v: f64,
    pub phi: f64,
    pub filled: bool,
    /// `v e^{i phi}` at full precision.
    pub(crate) w: C64,
    /// `sqrt(a_k^2 + |B_k|^2)`, the even part of `energy / 2`.
    pub(crate) s: f64,
}

/// Bogoliubov amplitudes `(u, w)` of the quasiparticle annihilation
/// operator `b_k = u c_k + w c^dag_{-k}`.
///
/// `(u, w)` solves `[[a, b*], [b, -a]] (u, w)^T = s (u, w)^T` (the
/// coefficient vector transforms with the transpose of the matrix that
/// acts on `(c_k, c^dag_{-k})^T`); the branch is chosen to avoid
/// cancellation on either sign of `a`.
pub(crate) fn bogoliubov_uw(a: f64, b: C64) -> (f64, C64) {
    let b2 = b.norm_sqr();
    let s = (a * a + b2).sqrt();
    if b2 == 0.0 {
        return if a >= 0.0 {
            (1.0, C64::new(0.0, 0.0))
        } else {
            (0.0, C64::new(1.0, 0.0))
        };
    }
    if a >= 0.0 {
        let d = (b2 + (s + a) * (s + a)).sqrt();
        ((s + a) / d, b / d)
    } else {
        let t = s - a;
        let d = (b2 + t * t).sqrt();
        let babs = b2.sqrt();
        (babs / d, b * (t / (babs * d)))
    }
}

/// Spectrum over one boundary sector.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub sector: Sector,
    pub modes: Vec<Mode>,
}

impl Spectrum {
    /// Number of filled (negative-energy) quasiparticle modes.
    pub fn filled_count(&self) -> usize {
        self.modes.iter().filter(|m| m.filled).count()
    }
}

/// Diagonalize every mode of the chosen sector.  Modes with `eps_k < 0`
/// are marked filled.
pub fn spectrum(p: &ModelParams, sector: Sector) -> Result<Spectrum> {
    p.validate()?;
    let grid = momentum_grid(p.n, sector)?;
    let modes = grid
        .k
        .iter()
        .map(|&k| {
            let (sk, ck) = k.sin_cos();
            let a = p.j * ck - p.h;
            let b = C64::new(p.big_gamma * (p.alpha + 1.0), -p.j * p.gamma) * sk;
            let s = (a * a + b.norm_sqr()).sqrt();
            let energy = 2.0 * (s + p.big_gamma * (p.alpha - 1.0) * sk);
            let (u, w) = bogoliubov_uw(a, b);
            Mode {
                k,
                energy,
                u,
                v: w.norm(),
                phi: if w.norm() > 0.0 { w.arg() } else { 0.0 },
                filled: energy < 0.0,
                w,
                s,
            }
        })
        .collect();
    Ok(Spectrum { sector, modes })
}

/// Exact ground state of one boundary sector with the fermion-parity
/// constraint enforced.
#[derive(Debug, Clone)]
pub struct SectorState {
    pub sector: Sector,
    /// Modes with their final occupations in `filled`.
    pub modes: Vec<Mode>,
    /// Total ground-state energy of the sector (not per site).
    pub energy: f64,
    /// Index of the mode whose occupation was flipped to repair parity.
    pub parity_flip: Option<usize>,
}

/// Parity required of the fermion number in each sector.
fn required_parity(sector: Sector) -> i32 {
    match sector {
        Sector::Antiperiodic => 1, // N_p even
        Sector::Periodic => -1,    // N_p odd
    }
}

pub fn sector_ground_state(p: &ModelParams, sector: Sector) -> Result<SectorState> {
    let spec = spectrum(p, sector)?;
    let mut modes = spec.modes;

    // Parity of the Bogoliubov vacuum: paired (k, -k) modes always
    // contribute an even fermion number; the self-paired modes k = 0, pi of
    // the periodic grid hold one fermion when their diagonal energy is
    // negative (the quasiparticle is then the hole).
    let mut parity = 1i32;
    for m in &modes {
        if m.k.sin().abs() < 1e-12 {
            let a = p.j * m.k.cos() + p.big_gamma * (p.alpha - 1.0) * m.k.sin() - p.h;
            if a < 0.0 {
                parity = -parity;
            }
        }
        if m.filled {
            parity = -parity;
        }
    }

    let base: f64 = modes.iter().map(|m| -m.s).sum();
    let mut energy = base + modes.iter().filter(|m| m.filled).map(|m| m.energy).sum::<f64>();

    let mut parity_flip = None;
    if parity != required_parity(sector) {
        // Cheapest admissible repair: toggle the quasiparticle occupation
        // with the smallest |eps|.
        let (idx, _) = modes
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.energy.abs().partial_cmp(&b.energy.abs()).unwrap()
            })
            .expect("non-empty grid");
        energy += modes[idx].energy.abs();
        modes[idx].filled = !modes[idx].filled;
        parity_flip = Some(idx);
    }

    Ok(SectorState { sector, modes, energy, parity_flip })
}

/// Exact finite-`N` ground state: the admissible minimum over both
/// boundary sectors.
pub fn finite_ground_state(p: &ModelParams) -> Result<SectorState> {
    let ap = sector_ground_state(p, Sector::Antiperiodic)?;
    let pe = sector_ground_state(p, Sector::Periodic)?;
    Ok(if ap.energy <= pe.energy { ap } else { pe })
}

/// Signed minimum of the dispersion and the physical excitation gap,
/// minimized over the momentum continuum.
#[derive(Debug, Clone, Copy)]
pub struct GapInfo {
    /// `min_k eps_k`; negative inside the gapless phase.
    pub signed_min: f64,
    /// `min_k |eps_k|` (zero whenever the signed minimum is non-positive).
    pub gap: f64,
    /// Location of the signed minimum.
    pub k_min: f64,
}

/// Continuum excitation gap: a dense scan seeds a golden-section
/// refinement of `eps_k` down to `1e-12` in `k`.
pub fn excitation_gap(p: &ModelParams) -> GapInfo {
    const SCAN: usize = 2048;
    let mut best_k = 0.0;
    let mut best = f64::INFINITY;
    for i in 0..=SCAN {
        let k = -PI + 2.0 * PI * i as f64 / SCAN as f64;
        let e = dispersion(p, k);
        if e < best {
            best = e;
            best_k = k;
        }
    }
    let dk = 2.0 * PI / SCAN as f64;
    let (k_min, signed_min) =
        numerics::golden_min(|k| dispersion(p, k), best_k - dk, best_k + dk, 1e-12);
    GapInfo {
        signed_min,
        gap: signed_min.max(0.0),
        k_min,
    }
}

/// Labels of the three critical lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalLine {
    /// `h = J` between the antiferromagnetic and paramagnetic phases.
    AfmPm,
    /// `alpha = -gamma^2 J^2 / (4 Gamma^2)` between the antiferromagnetic
    /// and spiral phases (`h <= J`).
    AfmSpiral,
    /// `h = J sqrt(1 - gamma^2 - 4 alpha Gamma^2/J^2)` between the spiral
    /// and paramagnetic phases.
    PmSpiral,
}

/// Ground-state phase of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Antiferromagnetic,
    Paramagnetic,
    Spiral,
    Critical(CriticalLine),
}

impl Phase {
    pub fn label(&self) -> &'static str {
        match self {
            Phase::Antiferromagnetic => "AFM",
            Phase::Paramagnetic => "PM",
            Phase::Spiral => "Spiral",
            Phase::Critical(CriticalLine::AfmPm) => "critical:afm-pm",
            Phase::Critical(CriticalLine::AfmSpiral) => "critical:afm-spiral",
            Phase::Critical(CriticalLine::PmSpiral) => "critical:pm-spiral",
        }
    }
}

const BOUNDARY_TOL: f64 = 1e-12;

/// Classify the phase of a parameter point from the critical-line
/// inequalities alone.
pub fn classify_phase(p: &ModelParams) -> Result<Phase> {
    p.validate()?;
    let hr = p.h / p.j;
    let gr = p.big_gamma / p.j;

    if gr == 0.0 {
        // Pure anisotropic XY limit: only the field line remains.
        return Ok(if (hr - 1.0).abs() <= BOUNDARY_TOL {
            Phase::Critical(CriticalLine::AfmPm)
        } else if hr < 1.0 {
            Phase::Antiferromagnetic
        } else {
            Phase::Paramagnetic
        });
    }

    let alpha_c1 = -p.gamma * p.gamma / (4.0 * gr * gr);
    let alpha_c2 = (1.0 - hr * hr - p.gamma * p.gamma) / (4.0 * gr * gr);
    let h_c2_sq = 1.0 - p.gamma * p.gamma - 4.0 * gr * gr * p.alpha;

    if (hr - 1.0).abs() <= BOUNDARY_TOL && p.alpha >= alpha_c1 - BOUNDARY_TOL {
        return Ok(Phase::Critical(CriticalLine::AfmPm));
    }
    if (p.alpha - alpha_c1).abs() <= BOUNDARY_TOL && hr <= 1.0 + BOUNDARY_TOL {
        return Ok(Phase::Critical(CriticalLine::AfmSpiral));
    }
    if p.alpha <= alpha_c1 + BOUNDARY_TOL && h_c2_sq >= 0.0 {
        let h_c2 = h_c2_sq.sqrt();
        if (hr - h_c2).abs() <= BOUNDARY_TOL {
            return Ok(Phase::Critical(CriticalLine::PmSpiral));
        }
    }

    Ok(if hr < 1.0 && p.alpha > alpha_c1 {
        Phase::Antiferromagnetic
    } else if hr > 1.0 && p.alpha > alpha_c2 {
        Phase::Paramagnetic
    } else {
        Phase::Spiral
    })
}

/// The analytic critical lines evaluated at the given couplings, with the
/// gap-closing momentum of each line that exists.
#[derive(Debug, Clone, Copy)]
pub struct CriticalSet {
    /// Field of the AFM-PM line (absolute units).
    pub h_c1: f64,
    /// Gap-closing momentum on the AFM-PM line.
    pub k_c1: f64,
    /// `alpha` of the AFM-spiral line; absent for `Gamma = 0`.
    pub alpha_c1: Option<f64>,
    /// Gap-closing momentum `arccos(h/J)` on the AFM-spiral line
    /// (defined for `h <= J`).
    pub k_c2: Option<f64>,
    /// Field of the spiral-PM line at the given `alpha` (absolute units);
    /// absent when the square root does not exist.
    pub h_c2: Option<f64>,
    /// `alpha` of the spiral-PM line at the given `h`; absent for
    /// `Gamma = 0`.
    pub alpha_c2: Option<f64>,
    /// Gap-closing momentum `arccos(J/h_c2)` on the spiral-PM line.
    pub k_c3: Option<f64>,
}

pub fn critical_set(p: &ModelParams) -> Result<CriticalSet> {
    p.validate()?;
    let hr = p.h / p.j;
    let gr = p.big_gamma / p.j;
    let (alpha_c1, alpha_c2) = if gr == 0.0 {
        (None, None)
    } else {
        (
            Some(-p.gamma * p.gamma / (4.0 * gr * gr)),
            Some((1.0 - hr * hr - p.gamma * p.gamma) / (4.0 * gr * gr)),
        )
    };
    let h_c2_sq = 1.0 - p.gamma * p.gamma - 4.0 * gr * gr * p.alpha;
    let h_c2 = (h_c2_sq >= 0.0).then(|| p.j * h_c2_sq.sqrt());
    Ok(CriticalSet {
        h_c1: p.j,
        k_c1: 0.0,
        alpha_c1,
        k_c2: (hr.abs() <= 1.0).then(|| hr.acos()),
        h_c2,
        alpha_c2,
        k_c3: h_c2.and_then(|h| {
            let inv = p.j / h;
            (inv.abs() <= 1.0).then(|| inv.acos())
        }),
    })
}

/// The two gap-closing momenta of the gapless phase, sorted ascending.
///
/// Returns `None` outside the spiral phase (arccos argument out of range
/// or candidate roots that do not close the gap).
pub fn fermion_points(p: &ModelParams) -> Option<(f64, f64)> {
    let hr = p.h / p.j;
    let x = p.x_parameter();
    let mut disc = (hr * hr - 1.0) * x + x * x;
    // roundoff guard for the tangency point where the roots merge
    if disc < 0.0 && disc > -1e-12 * (x * x + hr * hr + 1.0) {
        disc = 0.0;
    }
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let candidates: Vec<f64> = if (1.0 - x).abs() < 1e-14 {
        if hr == 0.0 {
            return None;
        }
        vec![(hr * hr + x) / (2.0 * hr)]
    } else {
        vec![(hr + sq) / (1.0 - x), (hr - sq) / (1.0 - x)]
    };

    let scale = 2.0 * (p.j.abs() + p.big_gamma.abs() + p.h.abs());
    let mut roots = Vec::new();
    for c in candidates {
        if c.abs() > 1.0 + 1e-12 {
            continue;
        }
        let k0 = c.clamp(-1.0, 1.0).acos();
        for k in [k0, -k0] {
            if dispersion(p, k).abs() <= 1e-8 * scale {
                roots.push(k);
                break;
            }
        }
    }
    match roots.len() {
        2 => {
            roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Some((roots[0], roots[1]))
        }
        // Tangency point: the two roots have merged.
        1 => Some((roots[0], roots[0])),
        _ => None,
    }
}

/// How to evaluate the ground-state energy density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyMode {
    /// `-sum_k |eps_k| / (2N)` over the antiperiodic grid.
    FiniteN,
    /// `-(1/4 pi) int |eps_k| dk` by adaptive quadrature.
    Thermodynamic,
}

/// Ground-state energy per site.
pub fn ground_state_energy_density(p: &ModelParams, mode: EnergyMode) -> Result<f64> {
    p.validate()?;
    match mode {
        EnergyMode::FiniteN => {
            let spec = spectrum(p, Sector::Antiperiodic)?;
            Ok(-spec.modes.iter().map(|m| m.energy.abs()).sum::<f64>() / (2.0 * p.n as f64))
        }
        EnergyMode::Thermodynamic => {
            // |eps_k| has kinks at the gap-closing momenta; split there.
            let breaks: Vec<f64> = fermion_points(p)
                .map(|(kl, kr)| vec![kl, kr, -kl, -kr])
                .unwrap_or_default();
            let integral = numerics::integrate_with_breaks(
                |k| dispersion(p, k).abs(),
                -PI,
                PI,
                &breaks,
                1e-10,
                1e-13,
            )?;
            Ok(-integral / (4.0 * PI))
        }
    }
}

/// Parameter with respect to which sweeps and derivatives are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Field,
    Alpha,
}

impl SweepVariable {
    pub(crate) fn apply(&self, p: &ModelParams, value: f64) -> ModelParams {
        match self {
            SweepVariable::Field => p.with_h(value),
            SweepVariable::Alpha => p.with_alpha(value),
        }
    }

    pub(crate) fn read(&self, p: &ModelParams) -> f64 {
        match self {
            SweepVariable::Field => p.h,
            SweepVariable::Alpha => p.alpha,
        }
    }
}

/// Central second difference `[f(x+s) - 2 f(x) + f(x-s)] / s^2`.
pub fn second_difference<F: Fn(f64) -> f64>(f: F, x: f64, step: f64) -> f64 {
    (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step)
}

/// Second derivative of the finite-`N` ground-state energy density with
/// respect to `h` or `alpha`, by a central second difference.
pub fn energy_second_derivative(p: &ModelParams, wrt: SweepVariable, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
    }
    if step < 1e-8 {
        log::warn!("second-difference step {step:.1e} is ill-conditioned for energies known to ~1e-12");
    }
    let x0 = wrt.read(p);
    let e = |x: f64| {
        ground_state_energy_density(&wrt.apply(p, x), EnergyMode::FiniteN)
            .expect("valid params in stencil")
    };
    Ok(second_difference(e, x0, step))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference(alpha: f64, h: f64) -> ModelParams {
        ModelParams::reference(alpha, h, 8).unwrap()
    }

    #[test]
    fn antiperiodic_grid_n4() {
        let g = momentum_grid(4, Sector::Antiperiodic).unwrap();
        let expect = [-3.0 * PI / 4.0, -PI / 4.0, PI / 4.0, 3.0 * PI / 4.0];
        assert_eq!(g.k.len(), 4);
        for (a, b) in g.k.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn periodic_grid_n4() {
        let g = momentum_grid(4, Sector::Periodic).unwrap();
        let expect = [-PI / 2.0, 0.0, PI / 2.0, PI];
        for (a, b) in g.k.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn antiperiodic_grid_sums_to_zero() {
        let g = momentum_grid(6, Sector::Antiperiodic).unwrap();
        assert_eq!(g.k.len(), 6);
        assert!(g.k.iter().sum::<f64>().abs() < 1e-14);
        // symmetric under k -> -k
        for &k in &g.k {
            assert!(g.k.iter().any(|&q| (q + k).abs() < 1e-14));
        }
    }

    #[test]
    fn grid_rejects_odd_or_small_n() {
        assert!(momentum_grid(5, Sector::Antiperiodic).is_err());
        assert!(momentum_grid(2, Sector::Periodic).is_err());
    }

    #[test]
    fn dispersion_xy_limit_collapses() {
        let p = ModelParams::new(1.0, 0.0, 0.0, 0.7, 0.3, 8).unwrap();
        for &k in &[0.1f64, 0.9, 2.5, -1.3] {
            let expect = 2.0 * (k.cos() - 0.3).abs();
            assert!((dispersion(&p, k) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn dispersion_at_zero_momentum() {
        let p = reference(0.5, 0.25);
        assert!((dispersion(&p, 0.0) - 2.0 * (1.0 - 0.25)).abs() < 1e-15);
    }

    #[test]
    fn dispersion_critical_slope() {
        // At the field line the right-moving branch has velocity
        // 2 sqrt(Gamma^2 (1+alpha)^2 + gamma^2) - 2 Gamma (1 - alpha).
        let p = reference(0.5, 1.0);
        let k = 1e-7;
        let slope = dispersion(&p, k) / k;
        let expect = 2.0 * (0.36f64 * 2.25 + 0.36).sqrt() - 0.6;
        assert!((expect - 1.563_330_8).abs() < 1e-6);
        assert!((slope - expect).abs() < 1e-5, "slope {slope} vs {expect}");
    }

    #[test]
    fn dispersion_even_when_odd_term_vanishes() {
        // Gamma (1 - alpha) = 0 makes eps_k even in k.
        let p = ModelParams::new(1.0, 0.4, 0.5, 1.0, 0.7, 8).unwrap();
        for &k in &[0.3, 1.1, 2.9] {
            assert!((dispersion(&p, k) - dispersion(&p, -k)).abs() < 1e-14);
        }
    }

    #[test]
    fn bdg_pairing_is_odd() {
        let p = reference(0.5, 0.5);
        for &k in &[0.2, 1.4, 3.0] {
            let b1 = bdg_block(&p, k).b;
            let b2 = bdg_block(&p, -k).b;
            assert!((b1 + b2).norm() < 1e-15);
        }
    }

    #[test]
    fn spectrum_matches_dispersion_and_normalization() {
        for (alpha, h) in [(0.5, 0.5), (-0.5, 0.5), (0.5, 1.17)] {
            let p = ModelParams::reference(alpha, h, 10).unwrap();
            for sector in [Sector::Antiperiodic, Sector::Periodic] {
                let s = spectrum(&p, sector).unwrap();
                for m in &s.modes {
                    assert!((m.energy - dispersion(&p, m.k)).abs() < 1e-12);
                    assert!((m.u * m.u + m.v * m.v - 1.0).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn gapped_point_has_no_filled_modes() {
        let s = spectrum(&reference(0.5, 0.5), Sector::Antiperiodic).unwrap();
        assert_eq!(s.filled_count(), 0);
        assert!(s.modes.iter().all(|m| m.energy > 0.0));
    }

    #[test]
    fn spiral_point_fills_modes() {
        let p = ModelParams::reference(-0.5, 0.5, 64).unwrap();
        let s = spectrum(&p, Sector::Antiperiodic).unwrap();
        assert!(s.filled_count() > 0);
    }

    #[test]
    fn gap_of_strong_field_xy() {
        let p = ModelParams::new(1.0, 0.0, 1e-30, 0.0, 2.0, 8).unwrap();
        let g = excitation_gap(&p);
        assert!((g.gap - 2.0).abs() < 1e-9);
        assert!(g.k_min.abs() < 1e-4);
    }

    #[test]
    fn gap_closes_on_field_line() {
        let g = excitation_gap(&reference(0.5, 1.0));
        assert!(g.gap < 1e-10, "gap {}", g.gap);
    }

    #[test]
    fn spiral_point_signed_minimum_negative() {
        let g = excitation_gap(&reference(-0.5, 0.5));
        assert!(g.signed_min < 0.0);
        assert_eq!(g.gap, 0.0);
    }

    #[test]
    fn phases_of_the_three_reference_points() {
        assert_eq!(classify_phase(&reference(0.5, 0.5)).unwrap(), Phase::Antiferromagnetic);
        assert_eq!(classify_phase(&reference(0.5, 1.17)).unwrap(), Phase::Paramagnetic);
        assert_eq!(classify_phase(&reference(-0.5, 0.5)).unwrap(), Phase::Spiral);
    }

    #[test]
    fn phase_boundaries_detected() {
        assert!(matches!(
            classify_phase(&reference(0.5, 1.0)).unwrap(),
            Phase::Critical(CriticalLine::AfmPm)
        ));
        assert!(matches!(
            classify_phase(&reference(-0.25, 0.5)).unwrap(),
            Phase::Critical(CriticalLine::AfmSpiral)
        ));
        let h_c2 = 1.36f64.sqrt();
        assert!(matches!(
            classify_phase(&reference(-0.5, h_c2)).unwrap(),
            Phase::Critical(CriticalLine::PmSpiral)
        ));
    }

    #[test]
    fn phase_invariant_under_gamma_sign() {
        for (alpha, h) in [(0.5, 0.5), (-0.5, 0.5), (0.5, 1.17), (-0.7, 1.05)] {
            let p1 = ModelParams::new(1.0, 0.6, 0.6, alpha, h, 8).unwrap();
            let p2 = ModelParams::new(1.0, -0.6, 0.6, alpha, h, 8).unwrap();
            assert_eq!(classify_phase(&p1).unwrap(), classify_phase(&p2).unwrap());
        }
    }

    #[test]
    fn critical_set_reference_values() {
        let cs = critical_set(&reference(-0.5, 0.5)).unwrap();
        assert!((cs.h_c1 - 1.0).abs() < 1e-15);
        assert!((cs.alpha_c1.unwrap() + 0.25).abs() < 1e-14);
        let h_c2 = cs.h_c2.unwrap();
        assert!((h_c2 - 1.36f64.sqrt()).abs() < 1e-14);
        let k_c3 = cs.k_c3.unwrap();
        assert!((k_c3 - (1.0 / h_c2).acos()).abs() < 1e-14);
    }

    #[test]
    fn critical_set_absent_lines_at_gamma_zero() {
        let p = ModelParams::new(1.0, 0.6, 0.0, 0.5, 0.5, 8).unwrap();
        let cs = critical_set(&p).unwrap();
        assert!(cs.alpha_c1.is_none());
        assert!(cs.alpha_c2.is_none());
    }

    #[test]
    fn fermion_points_merge_on_the_upper_line() {
        let h_c2 = 1.36f64.sqrt();
        let p = reference(-0.5, h_c2);
        let (kl, kr) = fermion_points(&p).unwrap();
        let expect = (1.0 / h_c2).acos();
        assert!((kl - expect).abs() < 1e-6, "kl {kl} vs {expect}");
        assert!((kr - expect).abs() < 1e-6);
        assert!((expect - 0.5404).abs() < 1e-4);
    }

    #[test]
    fn fermion_points_absent_in_gapped_phase() {
        assert!(fermion_points(&reference(0.5, 0.5)).is_none());
    }

    #[test]
    fn fermion_points_close_the_gap() {
        let p = reference(-0.5, 0.5);
        let (kl, kr) = fermion_points(&p).unwrap();
        assert!(kl < kr);
        assert!(dispersion(&p, kl).abs() < 1e-10);
        assert!(dispersion(&p, kr).abs() < 1e-10);
    }

    #[test]
    fn energy_density_free_fermion_limit() {
        // gamma = Gamma = h = 0: e0 -> -2/pi.
        let p = ModelParams::new(1.0, 0.0, 0.0, 0.0, 0.0, 4).unwrap();
        let e = ground_state_energy_density(&p, EnergyMode::Thermodynamic).unwrap();
        assert!((e + 2.0 / PI).abs() < 1e-10, "e0 = {e}");
        let big = ground_state_energy_density(&p.with_n(4096), EnergyMode::FiniteN).unwrap();
        assert!((big + 2.0 / PI).abs() < 1e-5);
    }

    #[test]
    fn energy_density_dominated_by_strong_field() {
        let p = ModelParams::new(1.0, 0.0, 0.0, 0.0, 100.0, 256).unwrap();
        let e = ground_state_energy_density(&p, EnergyMode::FiniteN).unwrap();
        assert!((e + 100.0).abs() / 100.0 < 0.01);
    }

    #[test]
    fn second_difference_exact_on_quadratic() {
        let d = second_difference(|x| x * x, 0.37, 1e-3);
        assert!((d - 2.0).abs() < 1e-8);
    }

    #[test]
    fn energy_second_derivative_rejects_bad_step() {
        let p = reference(0.5, 0.9);
        assert!(energy_second_derivative(&p, SweepVariable::Field, 0.0).is_err());
        assert!(energy_second_derivative(&p, SweepVariable::Field, -1.0).is_err());
    }

    #[test]
    fn sector_energies_and_parity_bookkeeping() {
        // Gapped point: the antiperiodic vacuum is admissible as is.
        let st = sector_ground_state(&reference(0.5, 0.5), Sector::Antiperiodic).unwrap();
        assert!(st.parity_flip.is_none());
        let e_plain = ground_state_energy_density(&reference(0.5, 0.5), EnergyMode::FiniteN)
            .unwrap()
            * 8.0;
        assert!((st.energy - e_plain).abs() < 1e-12);
    }
}
