//! Two-level Schrodinger dynamics and executable LTI-axiom checkers.
//!
//! The homogeneous two-level system is integrated with classical RK4 and
//! cross-checked against the closed-form propagator from the 2x2
//! eigendecomposition. To make the dynamics a testable input-to-output map,
//! `schrodinger_system` drives one basis component with an input waveform
//! starting from the zero state; that forced system is linear, shift
//! equivariant in whole steps, and causal, so the three axiom checkers
//! apply to it directly.

use crate::signal::{SampledSignal, SignalError};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Entrywise tolerance for the Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Squared-norm tolerance for two-level states.
pub const TWO_LEVEL_NORM_TOL: f64 = 1e-10;
/// RK4 stability guard: reject steps with dt * ||H|| above this.
pub const MAX_STEP_PRODUCT: f64 = 0.5;
/// Relative scale for the linearity / time-invariance checkers.
pub const CHECK_REL_TOL: f64 = 1e-9;
/// Absolute bound for the causality checker.
pub const CAUSALITY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum LtiError {
    #[error("matrix is not Hermitian within {HERMITIAN_TOL:.1e}: deviation {0:.3e}")]
    NonHermitian(f64),
    #[error("dt * ||H|| = {0:.3e} exceeds the stability guard {MAX_STEP_PRODUCT}")]
    Step(f64),
    #[error("state norm is {0:.17e}, expected 1 within {TWO_LEVEL_NORM_TOL:.1e}")]
    Normalization(f64),
    #[error("component must be 1 or 2, got {0}")]
    BadComponent(usize),
    #[error("drive basis index must be 0 or 1, got {0}")]
    BadBasis(usize),
    #[error("time grid needs dt > 0 and steps >= 1")]
    BadGrid,
    #[error("hbar must be positive, got {0}")]
    BadHbar(f64),
    #[error(transparent)]
    Signal(#[from] SignalError),
}

type Mat2 = [[Complex64; 2]; 2];
type Vec2 = [Complex64; 2];

/// Hermitian 2x2 generator; hbar defaults to 1 and is a plain scale factor.
#[derive(Debug, Clone, Copy)]
pub struct TwoLevelHamiltonian {
    m: Mat2,
    hbar: f64,
}

impl TwoLevelHamiltonian {
    pub fn new(
        h11: Complex64,
        h12: Complex64,
        h21: Complex64,
        h22: Complex64,
    ) -> Result<Self, LtiError> {
        let dev = (h21 - h12.conj())
            .norm()
            .max(h11.im.abs())
            .max(h22.im.abs());
        if dev > HERMITIAN_TOL {
            return Err(LtiError::NonHermitian(dev));
        }
        Ok(Self {
            m: [[h11, h12], [h21, h22]],
            hbar: 1.0,
        })
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self, LtiError> {
        if !(hbar > 0.0) {
            return Err(LtiError::BadHbar(hbar));
        }
        self.hbar = hbar;
        Ok(self)
    }

    pub fn zero() -> Self {
        Self {
            m: [[Complex64::new(0.0, 0.0); 2]; 2],
            hbar: 1.0,
        }
    }

    pub fn sigma_x() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            m: [[zero, one], [one, zero]],
            hbar: 1.0,
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Spectral norm: |mean of eigenvalues| + half the eigenvalue gap.
    pub fn spectral_norm(&self) -> f64 {
        let (mean, radius) = self.eigen_params();
        mean.abs() + radius
    }

    /// (mean, radius) with eigenvalues mean +/- radius.
    fn eigen_params(&self) -> (f64, f64) {
        let a = self.m[0][0].re;
        let b = self.m[1][1].re;
        let mean = 0.5 * (a + b);
        let radius = (0.25 * (a - b) * (a - b) + self.m[0][1].norm_sqr()).sqrt();
        (mean, radius)
    }
}

/// Two complex amplitudes with |C1|^2 + |C2|^2 = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelState {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl TwoLevelState {
    pub fn new(c1: Complex64, c2: Complex64) -> Result<Self, LtiError> {
        let norm_sq = c1.norm_sqr() + c2.norm_sqr();
        if (norm_sq - 1.0).abs() > TWO_LEVEL_NORM_TOL {
            return Err(LtiError::Normalization(norm_sq));
        }
        Ok(Self { c1, c2 })
    }

    pub fn basis(index: usize) -> Result<Self, LtiError> {
        match index {
            0 => Ok(Self {
                c1: Complex64::new(1.0, 0.0),
                c2: Complex64::new(0.0, 0.0),
            }),
            1 => Ok(Self {
                c1: Complex64::new(0.0, 0.0),
                c2: Complex64::new(1.0, 0.0),
            }),
            other => Err(LtiError::BadBasis(other)),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }
}

/// Uniform time grid t0, t0 + dt, ..., t0 + steps * dt.
#[derive(Debug, Clone, Copy)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, steps: usize) -> Result<Self, LtiError> {
        if !(dt > 0.0) || steps < 1 {
            return Err(LtiError::BadGrid);
        }
        Ok(Self { t0, dt, steps })
    }
}

/// One trajectory sample; `norm` records drift, it is never corrected.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub norm: f64,
}

fn mat_vec(m: &Mat2, v: &Vec2) -> Vec2 {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

fn axpy(a: f64, x: &Vec2, y: &Vec2) -> Vec2 {
    [y[0] + a * x[0], y[1] + a * x[1]]
}

/// Generator A = -(i/hbar) H of the homogeneous flow.
fn generator(h: &TwoLevelHamiltonian) -> Mat2 {
    let factor = Complex64::new(0.0, -1.0 / h.hbar);
    [
        [factor * h.m[0][0], factor * h.m[0][1]],
        [factor * h.m[1][0], factor * h.m[1][1]],
    ]
}

fn rk4_step(a: &Mat2, c: &Vec2, dt: f64, drive: Option<(&Vec2, f64, f64, f64)>) -> Vec2 {
    // drive = (direction, x(t), x(t + dt/2), x(t + dt))
    let f = |v: &Vec2, x: f64| -> Vec2 {
        let mut out = mat_vec(a, v);
        if let Some((e, _, _, _)) = drive {
            out[0] += x * e[0];
            out[1] += x * e[1];
        }
        out
    };
    let (x0, xm, x1) = match drive {
        Some((_, x0, xm, x1)) => (x0, xm, x1),
        None => (0.0, 0.0, 0.0),
    };
    let k1 = f(c, x0);
    let k2 = f(&axpy(dt / 2.0, &k1, c), xm);
    let k3 = f(&axpy(dt / 2.0, &k2, c), xm);
    let k4 = f(&axpy(dt, &k3, c), x1);
    [
        c[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        c[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

/// Integrate the homogeneous two-level equation with classical RK4.
///
/// Returns `steps + 1` points including the initial one. Norm drift is
/// recorded per point and never silently renormalized.
pub fn evolve_rk4(
    h: &TwoLevelHamiltonian,
    s0: &TwoLevelState,
    grid: &TimeGrid,
) -> Result<Vec<TrajectoryPoint>, LtiError> {
    let product = grid.dt * h.spectral_norm() / h.hbar;
    if product > MAX_STEP_PRODUCT {
        return Err(LtiError::Step(product));
    }
    let a = generator(h);
    let mut c = [s0.c1, s0.c2];
    let mut out = Vec::with_capacity(grid.steps + 1);
    for k in 0..=grid.steps {
        let t = grid.t0 + k as f64 * grid.dt;
        out.push(TrajectoryPoint {
            t,
            c1: c[0],
            c2: c[1],
            norm: (c[0].norm_sqr() + c[1].norm_sqr()).sqrt(),
        });
        if k < grid.steps {
            c = rk4_step(&a, &c, grid.dt, None);
        }
    }
    Ok(out)
}

/// Unitary solution operator exp(-i H t / hbar).
#[derive(Debug, Clone, Copy)]
pub struct Propagator {
    matrix: Mat2,
    elapsed: f64,
}

impl Propagator {
    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    pub fn elapsed(&self) -> f64 {
        self.elapsed
    }

    pub fn apply(&self, s: &TwoLevelState) -> TwoLevelState {
        let v = mat_vec(&self.matrix, &[s.c1, s.c2]);
        TwoLevelState { c1: v[0], c2: v[1] }
    }

    pub fn apply_raw(&self, v: &Vec2) -> Vec2 {
        mat_vec(&self.matrix, v)
    }

    /// Max-entry deviation of U^dagger U from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let m = &self.matrix;
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let s = m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((s - target).norm());
            }
        }
        dev
    }
}

/// Exact propagator from the 2x2 eigendecomposition.
///
/// With eigenvalues mean +/- radius the spectral projectors are
/// P+- = (+-H -+ lambda_-+ I) / (2 radius); the degenerate case collapses
/// to a global phase.
pub fn propagator_closed_form(h: &TwoLevelHamiltonian, t: f64) -> Propagator {
    let (mean, radius) = h.eigen_params();
    let phase = |lambda: f64| Complex64::new(0.0, -lambda * t / h.hbar).exp();
    let matrix = if radius < 1e-300 {
        let p = phase(mean);
        [
            [p, Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), p],
        ]
    } else {
        let (lp, lm) = (mean + radius, mean - radius);
        let (ep, em) = (phase(lp), phase(lm));
        let mut matrix = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j { 1.0 } else { 0.0 };
                let p_plus = (h.m[i][j] - lm * id) / (2.0 * radius);
                let p_minus = Complex64::new(id, 0.0) - p_plus;
                matrix[i][j] = ep * p_plus + em * p_minus;
            }
        }
        matrix
    };
    Propagator { matrix, elapsed: t }
}

/// A named deterministic map from input waveform to output waveform on the
/// same grid; the subject of the LTI axiom checkers.
pub struct SystemUnderTest {
    name: String,
    map: Box<dyn Fn(&SampledSignal) -> SampledSignal + Send + Sync>,
}

impl SystemUnderTest {
    pub fn new(
        name: impl Into<String>,
        map: impl Fn(&SampledSignal) -> SampledSignal + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            map: Box::new(map),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn respond(&self, x: &SampledSignal) -> SampledSignal {
        (self.map)(x)
    }
}

/// Causal discrete convolution with the given impulse response, truncated to
/// the input grid.
pub fn convolution_system(impulse_response: SampledSignal) -> SystemUnderTest {
    SystemUnderTest::new("convolution", move |x| {
        let h = impulse_response.samples();
        let xs = x.samples();
        let out: Vec<f64> = (0..xs.len())
            .map(|n| {
                (0..=n.min(h.len() - 1)).map(|k| h[k] * xs[n - k]).sum()
            })
            .collect();
        SampledSignal::new(out).expect("output grid matches input grid")
    })
}

/// Impulse response that is a unit delta at the given lag, padded to a valid
/// grid length.
pub fn delta_response(lag: usize, len: usize) -> Result<SampledSignal, LtiError> {
    let mut h = vec![0.0; len.max(lag + 1)];
    h[lag] = 1.0;
    if h.len() % 2 != 0 {
        h.push(0.0);
    }
    Ok(SampledSignal::new(h)?)
}

/// Driven two-level system: dC/dt = -(i/hbar) H C + e_basis x(t), C(0) = 0,
/// output = real part of the selected component on the input grid.
///
/// The input is read at whole samples and linearly interpolated at RK4
/// midpoints, so the discrete map is exactly linear and exactly shift
/// equivariant for whole-step delays.
pub fn schrodinger_system(
    h: &TwoLevelHamiltonian,
    component: usize,
    drive_basis: usize,
    dt: f64,
) -> Result<SystemUnderTest, LtiError> {
    if component != 1 && component != 2 {
        return Err(LtiError::BadComponent(component));
    }
    if drive_basis > 1 {
        return Err(LtiError::BadBasis(drive_basis));
    }
    if !(dt > 0.0) {
        return Err(LtiError::BadGrid);
    }
    let product = dt * h.spectral_norm() / h.hbar;
    if product > MAX_STEP_PRODUCT {
        return Err(LtiError::Step(product));
    }
    let a = generator(h);
    let mut e = [Complex64::new(0.0, 0.0); 2];
    e[drive_basis] = Complex64::new(1.0, 0.0);
    let idx = component - 1;
    Ok(SystemUnderTest::new("schrodinger", move |x| {
        let xs = x.samples();
        let mut c = [Complex64::new(0.0, 0.0); 2];
        let mut out = Vec::with_capacity(xs.len());
        out.push(c[idx].re);
        for k in 0..xs.len() - 1 {
            let (x0, x1) = (xs[k], xs[k + 1]);
            c = rk4_step(&a, &c, dt, Some((&e, x0, 0.5 * (x0 + x1), x1)));
            out.push(c[idx].re);
        }
        SampledSignal::new(out).expect("output grid matches input grid")
    }))
}

/// Counterexample: pointwise squaring (breaks linearity only).
pub fn nonlinear_system() -> SystemUnderTest {
    SystemUnderTest::new("counterexample:nonlinear", |x| {
        SampledSignal::new(x.samples().iter().map(|v| v * v).collect())
            .expect("output grid matches input grid")
    })
}

/// Counterexample: gain growing with time, y_k = k x_k (breaks time
/// invariance only).
pub fn time_varying_system() -> SystemUnderTest {
    SystemUnderTest::new("counterexample:timevarying", |x| {
        SampledSignal::new(
            x.samples()
                .iter()
                .enumerate()
                .map(|(k, v)| k as f64 * v)
                .collect(),
        )
        .expect("output grid matches input grid")
    })
}

/// Counterexample: one-step advance, y_k = x_{k+1} (breaks causality only).
pub fn acausal_system() -> SystemUnderTest {
    SystemUnderTest::new("counterexample:acausal", |x| {
        let xs = x.samples();
        let mut out: Vec<f64> = xs[1..].to_vec();
        out.push(0.0);
        SampledSignal::new(out).expect("output grid matches input grid")
    })
}

/// Outcome of one axiom check; serialized as-is for the report files.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub max_deviation: f64,
    pub pass: bool,
    pub tolerance: f64,
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Superposition check: f(a1 x1 + a2 x2) against a1 f(x1) + a2 f(x2).
pub fn check_linearity(
    sys: &SystemUnderTest,
    x1: &SampledSignal,
    x2: &SampledSignal,
    a1: f64,
    a2: f64,
) -> Result<CheckReport, LtiError> {
    let combined = x1.combine(a1, x2, a2)?;
    let lhs = sys.respond(&combined);
    let y1 = sys.respond(x1);
    let y2 = sys.respond(x2);
    let rhs = y1.combine(a1, &y2, a2)?;
    let max_deviation = lhs
        .samples()
        .iter()
        .zip(rhs.samples())
        .fold(0.0_f64, |m, (l, r)| m.max((l - r).abs()));
    let tolerance = CHECK_REL_TOL * (1.0 + max_abs(lhs.samples()).max(max_abs(rhs.samples())));
    Ok(CheckReport {
        check: "linearity".into(),
        max_deviation,
        pass: max_deviation <= tolerance,
        tolerance,
    })
}

/// Shift equivariance check on the overlap of the two runs; the delay is a
/// whole number of steps, no interpolation. The trailing `shift` samples are
/// excluded from the comparison: the reference run consumed input there that
/// the delayed run never saw.
pub fn check_time_invariance(
    sys: &SystemUnderTest,
    x: &SampledSignal,
    shift: usize,
) -> Result<CheckReport, LtiError> {
    let m = x.len();
    let shift = shift.min(m / 2);
    let mut shifted = vec![0.0; m];
    shifted[shift..].copy_from_slice(&x.samples()[..m - shift]);
    let y = sys.respond(x);
    let y_shifted_input = sys.respond(&SampledSignal::new(shifted)?);
    let mut max_deviation: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for k in shift..m - shift {
        let a = y_shifted_input.samples()[k];
        let b = y.samples()[k - shift];
        max_deviation = max_deviation.max((a - b).abs());
        scale = scale.max(a.abs()).max(b.abs());
    }
    let tolerance = CHECK_REL_TOL * (1.0 + scale);
    Ok(CheckReport {
        check: "time_invariance".into(),
        max_deviation,
        pass: max_deviation <= tolerance,
        tolerance,
    })
}

/// Causality check: the output must vanish strictly before the input's first
/// nonzero sample.
pub fn check_causality(sys: &SystemUnderTest, x: &SampledSignal) -> Result<CheckReport, LtiError> {
    let first_nonzero = x
        .samples()
        .iter()
        .position(|v| *v != 0.0)
        .unwrap_or(x.len());
    let y = sys.respond(x);
    let max_deviation = max_abs(&y.samples()[..first_nonzero]);
    Ok(CheckReport {
        check: "causality".into(),
        max_deviation,
        pass: max_deviation <= CAUSALITY_TOL,
        tolerance: CAUSALITY_TOL,
    })
}
