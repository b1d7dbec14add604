//! Pfaffians of even-dimensional antisymmetric matrices.
//!
//! The Pfaffian is computed by Parlett-Reid-style skew-symmetric
//! tridiagonalization: congruence transformations `M <- E M E^T` with unit
//! lower-triangular `E` (which leave the Pfaffian invariant) eliminate one
//! column pair at a time, with partial pivoting for stability.  The result
//! is accumulated in phase / log-magnitude form so that the 2r x 2r
//! contraction matrices of long-range correlators neither overflow nor
//! underflow.

use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Dense antisymmetric matrix of even dimension.
#[derive(Debug, Clone)]
pub struct SkewMatrix {
    n: usize,
    data: Vec<C64>,
}

/// Relative antisymmetry tolerance: `max |M + M^T|` entries must stay below
/// this times the largest absolute entry.
const SKEW_TOL: f64 = 1e-12;

impl SkewMatrix {
    /// Build from a row-major complex buffer, validating shape and
    /// antisymmetry.
    pub fn from_complex(n: usize, data: Vec<C64>) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "Pfaffian requires even dimension, got {n}"
            )));
        }
        if data.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "matrix buffer has {} entries, expected {}",
                data.len(),
                n * n
            )));
        }
        let scale = data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let res = (data[i * n + j] + data[j * n + i]).norm();
                worst = worst.max(res);
            }
        }
        if worst > SKEW_TOL * scale.max(1.0e-300) && scale > 0.0 {
            return Err(Error::InvalidInput(format!(
                "matrix is not antisymmetric: max |M + M^T| = {worst:.3e} \
                 vs scale {scale:.3e}"
            )));
        }
        Ok(Self { n, data })
    }

    /// Build from a row-major real buffer.
    pub fn from_real(n: usize, data: Vec<f64>) -> Result<Self> {
        Self::from_complex(n, data.into_iter().map(|x| C64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }
}

/// A Pfaffian in phase / log-magnitude form: the value is
/// `phase * exp(log_abs)` with `|phase| = 1`, or exactly zero when
/// `phase == 0` (`log_abs` is then `-inf`).
#[derive(Debug, Clone, Copy)]
pub struct Pfaffian {
    pub phase: C64,
    pub log_abs: f64,
}

impl Pfaffian {
    const ZERO: Pfaffian = Pfaffian {
        phase: C64::new(0.0, 0.0),
        log_abs: f64::NEG_INFINITY,
    };

    pub fn is_zero(&self) -> bool {
        self.phase == C64::new(0.0, 0.0)
    }

    /// The Pfaffian as a complex number (may overflow for extreme
    /// magnitudes; use the phase/log form directly in that case).
    pub fn value(&self) -> C64 {
        if self.is_zero() {
            C64::new(0.0, 0.0)
        } else {
            self.phase * self.log_abs.exp()
        }
    }

    /// Sign for real matrices: -1, 0 or +1. `None` when the phase has a
    /// non-negligible imaginary part.
    pub fn real_sign(&self) -> Option<i8> {
        if self.is_zero() {
            return Some(0);
        }
        if self.phase.im.abs() < 1e-12 {
            Some(if self.phase.re >= 0.0 { 1 } else { -1 })
        } else {
            None
        }
    }
}

/// Pfaffian of an antisymmetric matrix.
pub fn pfaffian(m: &SkewMatrix) -> Pfaffian {
    let n = m.n;
    if n == 0 {
        return Pfaffian {
            phase: C64::new(1.0, 0.0),
            log_abs: 0.0,
        };
    }
    let mut a = m.data.clone();
    let mut phase = C64::new(1.0, 0.0);
    let mut log_abs = 0.0f64;

    let idx = |i: usize, j: usize| i * n + j;
    let mut k = 0;
    while k + 1 < n {
        // Partial pivot: bring the largest entry of column k (below the
        // diagonal pair) into position (k+1, k).
        let mut p = k + 1;
        let mut best = a[idx(k + 1, k)].norm();
        for j in k + 2..n {
            let v = a[idx(j, k)].norm();
            if v > best {
                best = v;
                p = j;
            }
        }
        if best == 0.0 {
            return Pfaffian::ZERO;
        }
        if p != k + 1 {
            for col in 0..n {
                a.swap(idx(p, col), idx(k + 1, col));
            }
            for row in 0..n {
                a.swap(idx(row, p), idx(row, k + 1));
            }
            phase = -phase;
        }

        let pivot = a[idx(k + 1, k)];
        // Eliminate column k below row k+1 (and, by the symmetric column
        // update, row k to the right of column k+1).
        for j in k + 2..n {
            let mu = a[idx(j, k)] / pivot;
            if mu != C64::new(0.0, 0.0) {
                for col in k..n {
                    let sub = mu * a[idx(k + 1, col)];
                    a[idx(j, col)] -= sub;
                }
                for row in k..n {
                    let sub = mu * a[idx(row, k + 1)];
                    a[idx(row, j)] -= sub;
                }
            }
        }

        let factor = a[idx(k, k + 1)];
        let mag = factor.norm();
        if mag == 0.0 {
            return Pfaffian::ZERO;
        }
        log_abs += mag.ln();
        phase *= factor / mag;
        k += 2;
    }
    Pfaffian { phase, log_abs }
}

/// Elementwise [`pfaffian`] over a batch, preserving order.
pub fn pfaffian_batch(ms: &[SkewMatrix]) -> Vec<Pfaffian> {
    ms.iter().map(pfaffian).collect()
}
