//! Two-qubit X-states, relative-entropy coherence and steered quantum
//! coherence (SQC).
//!
//! The SQC protocol: Alice measures one of `sigma^x, sigma^y, sigma^z` on
//! her qubit and announces basis and outcome; Bob's conditional state is
//! scored by its relative-entropy coherence in the eigenbases of the two
//! remaining Pauli operators.  The average
//!
//! ```text
//! C^st = 1/2 sum_{mu != nu, a} p_{mu,a} C^{sigma^nu}(rho_{B | Pi_mu^a})
//! ```
//!
//! runs over all six ordered basis pairs, so a fully polarized product
//! state saturates at 2 and the maximally mixed state gives 0.

use num_complex::Complex64 as C64;

use crate::correlations::{self, Component, ContractionSet};
use crate::model::ModelParams;
use crate::numerics::entropy_bit;
use crate::{Error, Result};

pub type Qubit = [[C64; 2]; 2];
pub type TwoQubit = [[C64; 4]; 4];

/// Measurement / reference basis axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    fn others(&self) -> [Axis; 2] {
        match self {
            Axis::X => [Axis::Y, Axis::Z],
            Axis::Y => [Axis::X, Axis::Z],
            Axis::Z => [Axis::X, Axis::Y],
        }
    }

    fn pauli(&self) -> Qubit {
        let z = |re: f64, im: f64| C64::new(re, im);
        match self {
            Axis::X => [[z(0.0, 0.0), z(1.0, 0.0)], [z(1.0, 0.0), z(0.0, 0.0)]],
            Axis::Y => [[z(0.0, 0.0), z(0.0, -1.0)], [z(0.0, 1.0), z(0.0, 0.0)]],
            Axis::Z => [[z(1.0, 0.0), z(0.0, 0.0)], [z(0.0, 0.0), z(-1.0, 0.0)]],
        }
    }
}

/// Two-qubit reduced density matrix in X form: diagonal `u+, w+, w-, u-`
/// and anti-diagonal coherences `z1` (outer) and `z2` (inner).
#[derive(Debug, Clone, Copy)]
pub struct XState {
    pub u_plus: f64,
    pub u_minus: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub z1: C64,
    pub z2: C64,
}

/// Tolerance for trace / positivity checks of assembled X-states.
const STATE_TOL: f64 = 1e-9;

impl XState {
    /// Assemble from the on-site magnetization and the raw (not connected)
    /// two-point expectation values.
    pub fn from_raw_correlators(
        mz: f64,
        gxx: f64,
        gyy: f64,
        gxy: f64,
        gyx: f64,
        gzz: f64,
    ) -> Result<Self> {
        let state = Self {
            u_plus: 0.25 * (1.0 + 2.0 * mz + gzz),
            u_minus: 0.25 * (1.0 - 2.0 * mz + gzz),
            omega_plus: 0.25 * (1.0 - gzz),
            omega_minus: 0.25 * (1.0 - gzz),
            z1: 0.25 * C64::new(gxx - gyy, -(gxy + gyx)),
            z2: 0.25 * C64::new(gxx + gyy, gxy - gyx),
        };
        state.validate()?;
        Ok(state)
    }

    pub fn trace(&self) -> f64 {
        self.u_plus + self.u_minus + self.omega_plus + self.omega_minus
    }

    pub fn validate(&self) -> Result<()> {
        if (self.trace() - 1.0).abs() > STATE_TOL {
            return Err(Error::Numeric(format!(
                "X-state trace {} deviates from 1",
                self.trace()
            )));
        }
        let neg = [self.u_plus, self.u_minus, self.omega_plus, self.omega_minus]
            .into_iter()
            .fold(0.0f64, |acc, d| acc.min(d));
        if neg < -STATE_TOL {
            return Err(Error::Numeric(format!(
                "X-state has negative population {neg:.3e}"
            )));
        }
        let outer = self.u_plus * self.u_minus - self.z1.norm_sqr();
        let inner = self.omega_plus * self.omega_minus - self.z2.norm_sqr();
        if outer < -STATE_TOL || inner < -STATE_TOL {
            return Err(Error::Numeric(format!(
                "X-state positivity violated: u+u- - |z1|^2 = {outer:.3e}, \
                 w+w- - |z2|^2 = {inner:.3e} (inconsistent upstream correlators)"
            )));
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> TwoQubit {
        let zero = C64::new(0.0, 0.0);
        let re = |x: f64| C64::new(x, 0.0);
        [
            [re(self.u_plus), zero, zero, self.z1],
            [zero, re(self.omega_plus), self.z2, zero],
            [zero, self.z2.conj(), re(self.omega_minus), zero],
            [self.z1.conj(), zero, zero, re(self.u_minus)],
        ]
    }
}

/// Reduced two-qubit density matrix of sites `(i, i+r)` from a prebuilt
/// contraction window.
pub fn reduced_density_matrix_from(set: &ContractionSet, r: usize) -> Result<XState> {
    let mz = set.magnetization_z()?;
    let g = |c| correlations::raw_two_point_from(set, c, r);
    XState::from_raw_correlators(
        mz,
        g(Component::Xx)?,
        g(Component::Yy)?,
        g(Component::Xy)?,
        g(Component::Yx)?,
        g(Component::Zz)?,
    )
}

/// Reduced two-qubit density matrix of sites `(i, i+r)`.
pub fn reduced_density_matrix(p: &ModelParams, r: usize) -> Result<XState> {
    let set = ContractionSet::new(p, r.max(1))?;
    reduced_density_matrix_from(&set, r)
}

/// Bloch vector of a single-qubit density matrix, after Hermiticity,
/// trace and positivity checks.
fn bloch(rho: &Qubit) -> Result<(f64, f64, f64)> {
    let tr = rho[0][0].re + rho[1][1].re;
    if (tr - 1.0).abs() > 1e-8
        || rho[0][0].im.abs() > 1e-10
        || rho[1][1].im.abs() > 1e-10
        || (rho[0][1] - rho[1][0].conj()).norm() > 1e-10
    {
        return Err(Error::InvalidState(
            "qubit density matrix is not Hermitian with unit trace".into(),
        ));
    }
    let rx = 2.0 * rho[0][1].re;
    let ry = -2.0 * rho[0][1].im;
    let rz = rho[0][0].re - rho[1][1].re;
    let norm = (rx * rx + ry * ry + rz * rz).sqrt();
    // min eigenvalue (1 - |r|)/2 must not be below -1e-10
    if (1.0 - norm) / 2.0 < -1e-10 {
        return Err(Error::InvalidState(format!(
            "qubit density matrix has negative eigenvalue {:.3e}",
            (1.0 - norm) / 2.0
        )));
    }
    Ok((rx, ry, rz))
}

/// Relative-entropy coherence `C = S(rho_d) - S(rho)` of a qubit state in
/// the eigenbasis of `sigma^basis` (log base 2).
///
/// Dephasing keeps only the Bloch component along the basis axis, so both
/// entropies are binary entropies of `(1 + |r|)/2`-type arguments.
pub fn relative_entropy_coherence(rho: &Qubit, basis: Axis) -> Result<f64> {
    let (rx, ry, rz) = bloch(rho)?;
    let norm = (rx * rx + ry * ry + rz * rz).sqrt().min(1.0);
    let along = match basis {
        Axis::X => rx,
        Axis::Y => ry,
        Axis::Z => rz,
    };
    let s_full = entropy_bit(0.5 * (1.0 + norm));
    let s_deph = entropy_bit(0.5 * (1.0 + along.abs().min(1.0)));
    Ok((s_deph - s_full).max(0.0))
}

/// One conditional branch of Alice's measurement.
#[derive(Debug, Clone, Copy)]
pub struct Branch {
    pub outcome: u8,
    pub probability: f64,
    pub state: Qubit,
    /// Zero-probability branch; its state is a placeholder and it
    /// contributes nothing to averages.
    pub degenerate: bool,
}

/// The ensemble Bob holds after Alice measures `sigma^mu`.
#[derive(Debug, Clone)]
pub struct SteeringEnsemble {
    pub axis: Axis,
    pub branches: [Branch; 2],
}

fn ensemble_of_matrix(rho: &TwoQubit, mu: Axis) -> SteeringEnsemble {
    let pauli = mu.pauli();
    let branches = [0u8, 1u8].map(|a| {
        let sign = if a == 0 { 1.0 } else { -1.0 };
        // projector (I + sign * sigma^mu)/2 on Alice's qubit
        let mut proj = [[C64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                let idd = if r == c { 1.0 } else { 0.0 };
                proj[r][c] = 0.5 * (C64::new(idd, 0.0) + sign * pauli[r][c]);
            }
        }
        // rho_B[b][b'] = sum_{a1,a2} proj[a1][a2] rho[(a2 b)][(a1 b')]
        let mut cond = [[C64::new(0.0, 0.0); 2]; 2];
        for b in 0..2 {
            for bp in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for a1 in 0..2 {
                    for a2 in 0..2 {
                        acc += proj[a1][a2] * rho[2 * a2 + b][2 * a1 + bp];
                    }
                }
                cond[b][bp] = acc;
            }
        }
        let p = cond[0][0].re + cond[1][1].re;
        if p > 1e-14 {
            for row in cond.iter_mut() {
                for v in row.iter_mut() {
                    *v /= p;
                }
            }
            Branch { outcome: a, probability: p, state: cond, degenerate: false }
        } else {
            let half = C64::new(0.5, 0.0);
            Branch {
                outcome: a,
                probability: 0.0,
                state: [[half, C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), half]],
                degenerate: true,
            }
        }
    });
    SteeringEnsemble { axis: mu, branches }
}

/// Bob's conditional ensemble for Alice's measurement along `mu`.
pub fn steering_ensemble(rho: &XState, mu: Axis) -> Result<SteeringEnsemble> {
    rho.validate()?;
    Ok(ensemble_of_matrix(&rho.to_matrix(), mu))
}

/// SQC of an arbitrary two-qubit density matrix.
pub fn sqc_of_matrix(rho: &TwoQubit) -> Result<f64> {
    let mut total = 0.0;
    for mu in Axis::ALL {
        let ens = ensemble_of_matrix(rho, mu);
        for b in ens.branches {
            if b.degenerate {
                continue;
            }
            for nu in mu.others() {
                total += b.probability * relative_entropy_coherence(&b.state, nu)?;
            }
        }
    }
    Ok(0.5 * total)
}

/// SQC of an X-state.
pub fn steered_quantum_coherence(rho: &XState) -> Result<f64> {
    rho.validate()?;
    sqc_of_matrix(&rho.to_matrix())
}

/// SQC of the qubit pair `(i, i+r)` from a prebuilt contraction window.
pub fn sqc_from(set: &ContractionSet, r: usize) -> Result<f64> {
    steered_quantum_coherence(&reduced_density_matrix_from(set, r)?)
}

/// SQC of the qubit pair `(i, i+r)` of the chain.
pub fn sqc(p: &ModelParams, r: usize) -> Result<f64> {
    steered_quantum_coherence(&reduced_density_matrix(p, r)?)
}

/// Coherence susceptibility `d C^st / d h` by a central first difference.
pub fn coherence_susceptibility(p: &ModelParams, r: usize, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
    }
    if step < 1e-8 {
        log::warn!("first-difference step {step:.1e} is ill-conditioned");
    }
    let hi = sqc(&p.with_h(p.h + step), r)?;
    let lo = sqc(&p.with_h(p.h - step), r)?;
    Ok((hi - lo) / (2.0 * step))
}
