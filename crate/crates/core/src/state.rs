//! Register states with real (O-bit) or complex (qubit) amplitudes, the
//! orthogonal/unitary gates that act on them, and end-of-run measurement.
//!
//! Measurement is deferred: nothing collapses mid-run, the only observable
//! is the final probability distribution over basis indices.

use num_complex::Complex64;
use thiserror::Error;

/// Squared-norm tolerance accepted by state constructors.
pub const STATE_NORM_TOL: f64 = 1e-9;
/// Entrywise tolerance for the orthogonality/unitarity check on gates.
pub const GATE_ORTHO_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("squared norm is {norm_sq:.17e}, expected 1 within {tol:.1e}")]
    Normalization { norm_sq: f64, tol: f64 },
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension {0} is not a power of two (or is zero)")]
    NotPowerOfTwo(usize),
    #[error("indices (i={i}, j={j}) invalid for dimension {dim}: need 0 <= i < j < dim")]
    Index { i: usize, j: usize, dim: usize },
    #[error("matrix is not {kind} within {tol:.1e}: max deviation {dev:.3e}")]
    NotIsometric {
        kind: &'static str,
        dev: f64,
        tol: f64,
    },
    #[error("cannot combine states of different kinds (real vs complex)")]
    KindMismatch,
    #[error("amplitude entries must be finite")]
    NonFinite,
}

fn is_pow2(d: usize) -> bool {
    d >= 1 && d.is_power_of_two()
}

/// Unit-norm real amplitude vector over the O-bit basis, length `2^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealAmplitudeState {
    amplitudes: Vec<f64>,
}

impl RealAmplitudeState {
    pub fn new(amplitudes: Vec<f64>) -> Result<Self, StateError> {
        if !is_pow2(amplitudes.len()) {
            return Err(StateError::NotPowerOfTwo(amplitudes.len()));
        }
        if amplitudes.iter().any(|a| !a.is_finite()) {
            return Err(StateError::NonFinite);
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a * a).sum();
        if (norm_sq - 1.0).abs() > STATE_NORM_TOL {
            return Err(StateError::Normalization {
                norm_sq,
                tol: STATE_NORM_TOL,
            });
        }
        Ok(Self { amplitudes })
    }

    /// Basis state |i) of the given dimension.
    pub fn basis(dim: usize, index: usize) -> Result<Self, StateError> {
        if !is_pow2(dim) {
            return Err(StateError::NotPowerOfTwo(dim));
        }
        if index >= dim {
            return Err(StateError::Index {
                i: index,
                j: index,
                dim,
            });
        }
        let mut amplitudes = vec![0.0; dim];
        amplitudes[index] = 1.0;
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }
}

/// Unit-norm complex amplitude vector over the qubit basis, length `2^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexAmplitudeState {
    amplitudes: Vec<Complex64>,
}

impl ComplexAmplitudeState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, StateError> {
        if !is_pow2(amplitudes.len()) {
            return Err(StateError::NotPowerOfTwo(amplitudes.len()));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(StateError::NonFinite);
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_NORM_TOL {
            return Err(StateError::Normalization {
                norm_sq,
                tol: STATE_NORM_TOL,
            });
        }
        Ok(Self { amplitudes })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self, StateError> {
        if !is_pow2(dim) {
            return Err(StateError::NotPowerOfTwo(dim));
        }
        if index >= dim {
            return Err(StateError::Index {
                i: index,
                j: index,
                dim,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// A single O-bit `a|0) + b|1)` with real amplitudes, `a^2 + b^2 = 1`.
pub fn new_obit(a: f64, b: f64) -> Result<RealAmplitudeState, StateError> {
    RealAmplitudeState::new(vec![a, b])
}

/// Rescale a nonzero real vector to unit norm.
pub fn normalize_real(v: &[f64]) -> Result<RealAmplitudeState, StateError> {
    if !is_pow2(v.len()) {
        return Err(StateError::NotPowerOfTwo(v.len()));
    }
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(StateError::ZeroVector);
    }
    RealAmplitudeState::new(v.iter().map(|a| a / norm).collect())
}

/// Rescale a nonzero complex vector to unit norm.
pub fn normalize_complex(v: &[Complex64]) -> Result<ComplexAmplitudeState, StateError> {
    if !is_pow2(v.len()) {
        return Err(StateError::NotPowerOfTwo(v.len()));
    }
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(StateError::ZeroVector);
    }
    ComplexAmplitudeState::new(v.iter().map(|a| a / norm).collect())
}

/// Real square matrix with `M^T M = I` within [`GATE_ORTHO_TOL`], row-major.
#[derive(Debug, Clone)]
pub struct OrthogonalGate {
    dim: usize,
    matrix: Vec<f64>,
}

impl OrthogonalGate {
    pub fn new(dim: usize, matrix: Vec<f64>) -> Result<Self, StateError> {
        if matrix.len() != dim * dim {
            return Err(StateError::DimensionMismatch {
                left: matrix.len(),
                right: dim * dim,
            });
        }
        let gate = Self { dim, matrix };
        let dev = gate.orthogonality_deviation();
        if dev > GATE_ORTHO_TOL {
            return Err(StateError::NotIsometric {
                kind: "orthogonal",
                dev,
                tol: GATE_ORTHO_TOL,
            });
        }
        Ok(gate)
    }

    pub fn identity(dim: usize) -> Self {
        let mut matrix = vec![0.0; dim * dim];
        for i in 0..dim {
            matrix[i * dim + i] = 1.0;
        }
        Self { dim, matrix }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.matrix[row * self.dim + col]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    /// Max-entry deviation of `M^T M` from the identity.
    pub fn orthogonality_deviation(&self) -> f64 {
        let d = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    s += self.matrix[k * d + i] * self.matrix[k * d + j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((s - target).abs());
            }
        }
        dev
    }

    /// Matrix-vector product on a raw (not necessarily unit) vector.
    pub fn apply_raw(&self, v: &[f64]) -> Result<Vec<f64>, StateError> {
        if v.len() != self.dim {
            return Err(StateError::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(i, j) * v[j]).sum())
            .collect())
    }

    pub fn apply(&self, s: &RealAmplitudeState) -> Result<RealAmplitudeState, StateError> {
        let out = self.apply_raw(s.amplitudes())?;
        RealAmplitudeState::new(out)
    }
}

/// Complex square matrix with `M^dagger M = I` within [`GATE_ORTHO_TOL`], row-major.
#[derive(Debug, Clone)]
pub struct UnitaryGate {
    dim: usize,
    matrix: Vec<Complex64>,
}

impl UnitaryGate {
    pub fn new(dim: usize, matrix: Vec<Complex64>) -> Result<Self, StateError> {
        if matrix.len() != dim * dim {
            return Err(StateError::DimensionMismatch {
                left: matrix.len(),
                right: dim * dim,
            });
        }
        let gate = Self { dim, matrix };
        let dev = gate.unitarity_deviation();
        if dev > GATE_ORTHO_TOL {
            return Err(StateError::NotIsometric {
                kind: "unitary",
                dev,
                tol: GATE_ORTHO_TOL,
            });
        }
        Ok(gate)
    }

    pub fn identity(dim: usize) -> Self {
        let mut matrix = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            matrix[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self { dim, matrix }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.dim + col]
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    /// Max-entry deviation of `M^dagger M` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    s += self.matrix[k * d + i].conj() * self.matrix[k * d + j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((s - target).norm());
            }
        }
        dev
    }

    pub fn apply_raw(&self, v: &[Complex64]) -> Result<Vec<Complex64>, StateError> {
        if v.len() != self.dim {
            return Err(StateError::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(i, j) * v[j]).sum())
            .collect())
    }

    pub fn apply(&self, s: &ComplexAmplitudeState) -> Result<ComplexAmplitudeState, StateError> {
        let out = self.apply_raw(s.amplitudes())?;
        ComplexAmplitudeState::new(out)
    }
}

/// Plane rotation by `theta` in the (i, j) coordinate plane, identity elsewhere.
///
/// Sign convention: `givens_rotation(2, 0, 1, theta)` maps (1, 0) to
/// (cos theta, sin theta).
pub fn givens_rotation(
    dim: usize,
    i: usize,
    j: usize,
    theta: f64,
) -> Result<OrthogonalGate, StateError> {
    if i >= j || j >= dim {
        return Err(StateError::Index { i, j, dim });
    }
    let mut gate = OrthogonalGate::identity(dim);
    let (s, c) = theta.sin_cos();
    gate.matrix[i * dim + i] = c;
    gate.matrix[i * dim + j] = -s;
    gate.matrix[j * dim + i] = s;
    gate.matrix[j * dim + j] = c;
    Ok(gate)
}

/// Kronecker product of real states; big-endian, the left factor carries the
/// most significant bits of the combined index.
pub fn tensor_real(
    s1: &RealAmplitudeState,
    s2: &RealAmplitudeState,
) -> Result<RealAmplitudeState, StateError> {
    let mut out = Vec::with_capacity(s1.dim() * s2.dim());
    for a in s1.amplitudes() {
        for b in s2.amplitudes() {
            out.push(a * b);
        }
    }
    RealAmplitudeState::new(out)
}

/// Kronecker product of complex states, same index convention as [`tensor_real`].
pub fn tensor_complex(
    s1: &ComplexAmplitudeState,
    s2: &ComplexAmplitudeState,
) -> Result<ComplexAmplitudeState, StateError> {
    let mut out = Vec::with_capacity(s1.dim() * s2.dim());
    for a in s1.amplitudes() {
        for b in s2.amplitudes() {
            out.push(a * b);
        }
    }
    ComplexAmplitudeState::new(out)
}

/// Probability vector over basis indices; entries in [0, 1] summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDistribution {
    probabilities: Vec<f64>,
}

impl MeasurementDistribution {
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

/// Either kind of register state; the kind tag matches the state file format.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Real(RealAmplitudeState),
    Complex(ComplexAmplitudeState),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            State::Real(s) => s.dim(),
            State::Complex(s) => s.dim(),
        }
    }

    pub fn tensor(&self, other: &State) -> Result<State, StateError> {
        match (self, other) {
            (State::Real(a), State::Real(b)) => Ok(State::Real(tensor_real(a, b)?)),
            (State::Complex(a), State::Complex(b)) => Ok(State::Complex(tensor_complex(a, b)?)),
            _ => Err(StateError::KindMismatch),
        }
    }

    pub fn measure(&self) -> MeasurementDistribution {
        match self {
            State::Real(s) => measure_real(s),
            State::Complex(s) => measure_complex(s),
        }
    }
}

/// Born probabilities `a_i^2` for a real state.
pub fn measure_real(s: &RealAmplitudeState) -> MeasurementDistribution {
    MeasurementDistribution {
        probabilities: s.amplitudes().iter().map(|a| a * a).collect(),
    }
}

/// Born probabilities `|a_i|^2` for a complex state.
pub fn measure_complex(s: &ComplexAmplitudeState) -> MeasurementDistribution {
    MeasurementDistribution {
        probabilities: s.amplitudes().iter().map(|a| a.norm_sqr()).collect(),
    }
}
