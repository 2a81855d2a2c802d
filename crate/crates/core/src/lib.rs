//! Simulation and verification toolkit for real-amplitude (O-bit) and
//! complex-amplitude (qubit) registers: waveform encodings with quadrature
//! inner products, two-level Schrodinger evolution with LTI axiom checkers,
//! and four cross-verified routes to the unitary discrete Fourier transform
//! with an operation-count ledger.

pub mod fourier;
pub mod io;
pub mod lti;
pub mod signal;
pub mod state;

pub use fourier::{
    binary_fraction, complexity_report, dft_direct, fft_radix2, fft_radix2_counted,
    qft_apply, qft_build_circuit, stage_factorization, verify_factorization, SpectrumVector,
};
pub use lti::{
    check_causality, check_linearity, check_time_invariance, convolution_system, evolve_rk4,
    propagator_closed_form, schrodinger_system, CheckReport, SystemUnderTest, TimeGrid,
    TwoLevelHamiltonian, TwoLevelState,
};
pub use signal::{
    basis_signal, decode, encode, inner_product, verify_orthonormality, EncodingConfig,
    QuadratureRule, SampledSignal,
};
pub use state::{
    givens_rotation, measure_complex, measure_real, new_obit, normalize_complex, normalize_real,
    tensor_complex, tensor_real, ComplexAmplitudeState, MeasurementDistribution, OrthogonalGate,
    RealAmplitudeState, State, UnitaryGate,
};
