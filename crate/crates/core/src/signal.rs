//! O-bits as sampled waveforms on [0, 2pi).
//!
//! The basis pair is f0 = sin and f1 = cos on a uniform periodic grid
//! xi_k = 2 pi k / M (the point xi = 2 pi is excluded so the quadrature
//! does not double-count it). Inner products are (1/pi) times the
//! quadrature of the pointwise product, which makes {f0, f1} orthonormal.
//! Both waveforms vanish identically outside the window, so the sampled
//! representation never stores out-of-window values.

use crate::state::{new_obit, RealAmplitudeState};
use std::f64::consts::PI;
use thiserror::Error;

/// Minimum number of samples accepted on the grid.
pub const MIN_SAMPLES: usize = 8;
/// Largest norm deviation `decode` will silently renormalize away.
pub const DECODE_NORM_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("sample count {0} invalid: need an even count >= {MIN_SAMPLES}")]
    BadSampleCount(usize),
    #[error("samples must be finite")]
    NonFinite,
    #[error("sample counts differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("state has dimension {0}, only single O-bits (dimension 2) can be encoded")]
    NotAnObit(usize),
    #[error("recovered amplitudes have norm {norm:.17e}; not an O-bit waveform (tolerance {tol:.1e})")]
    Normalization { norm: f64, tol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    Trapezoid,
    Simpson,
}

impl QuadratureRule {
    /// Weight of sample k on the periodic grid, including the step h.
    fn weight(self, k: usize, h: f64) -> f64 {
        match self {
            QuadratureRule::Trapezoid => h,
            // Composite Simpson closed up by periodicity: the two endpoint
            // weights h/3 land on the same sample.
            QuadratureRule::Simpson => {
                if k == 0 {
                    2.0 * h / 3.0
                } else if k % 2 == 1 {
                    4.0 * h / 3.0
                } else {
                    2.0 * h / 3.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EncodingConfig {
    pub sample_count: usize,
    pub quadrature: QuadratureRule,
}

impl EncodingConfig {
    pub fn new(sample_count: usize, quadrature: QuadratureRule) -> Result<Self, SignalError> {
        if sample_count < MIN_SAMPLES || sample_count % 2 != 0 {
            return Err(SignalError::BadSampleCount(sample_count));
        }
        Ok(Self {
            sample_count,
            quadrature,
        })
    }
}

impl Default for EncodingConfig {
    fn default() -> Self {
        Self {
            sample_count: 256,
            quadrature: QuadratureRule::Trapezoid,
        }
    }
}

/// Uniformly sampled real waveform on the periodic grid over [0, 2pi).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    samples: Vec<f64>,
}

impl SampledSignal {
    pub fn new(samples: Vec<f64>) -> Result<Self, SignalError> {
        if samples.len() < MIN_SAMPLES || samples.len() % 2 != 0 {
            return Err(SignalError::BadSampleCount(samples.len()));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(SignalError::NonFinite);
        }
        Ok(Self { samples })
    }

    /// Sample the function f at xi_k = 2 pi k / M.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> f64) -> Result<Self, SignalError> {
        if m < MIN_SAMPLES || m % 2 != 0 {
            return Err(SignalError::BadSampleCount(m));
        }
        Self::new((0..m).map(|k| f(2.0 * PI * k as f64 / m as f64)).collect())
    }

    pub fn zeros(m: usize) -> Result<Self, SignalError> {
        if m < MIN_SAMPLES || m % 2 != 0 {
            return Err(SignalError::BadSampleCount(m));
        }
        Ok(Self {
            samples: vec![0.0; m],
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Abscissa of sample k.
    pub fn xi(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.len() as f64
    }

    /// Pointwise linear combination a*self + b*other.
    pub fn combine(&self, a: f64, other: &SampledSignal, b: f64) -> Result<SampledSignal, SignalError> {
        if self.len() != other.len() {
            return Err(SignalError::DimensionMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        SampledSignal::new(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }
}

/// The waveform carrying basis O-bit |0) (sin) or |1) (cos).
pub fn basis_signal(bit: u8, cfg: &EncodingConfig) -> SampledSignal {
    let m = cfg.sample_count;
    let f: fn(f64) -> f64 = if bit == 0 { f64::sin } else { f64::cos };
    SampledSignal::from_fn(m, f).expect("config sample count validated at construction")
}

/// Map the O-bit a|0) + b|1) to the waveform a sin + b cos.
pub fn encode(s: &RealAmplitudeState, cfg: &EncodingConfig) -> Result<SampledSignal, SignalError> {
    if s.dim() != 2 {
        return Err(SignalError::NotAnObit(s.dim()));
    }
    let (a, b) = (s.amplitudes()[0], s.amplitudes()[1]);
    SampledSignal::from_fn(cfg.sample_count, |xi| a * xi.sin() + b * xi.cos())
}

/// Quadrature approximation of (1/pi) * integral of s1*s2 over [0, 2pi].
pub fn inner_product(
    s1: &SampledSignal,
    s2: &SampledSignal,
    rule: QuadratureRule,
) -> Result<f64, SignalError> {
    if s1.len() != s2.len() {
        return Err(SignalError::DimensionMismatch {
            left: s1.len(),
            right: s2.len(),
        });
    }
    let m = s1.len();
    let h = 2.0 * PI / m as f64;
    let sum: f64 = (0..m)
        .map(|k| rule.weight(k, h) * (s1.samples[k] * s2.samples[k]))
        .sum();
    Ok(sum / PI)
}

/// Recover the O-bit amplitudes by projecting onto the sin/cos basis.
pub fn decode(sig: &SampledSignal, cfg: &EncodingConfig) -> Result<RealAmplitudeState, SignalError> {
    if sig.len() != cfg.sample_count {
        return Err(SignalError::DimensionMismatch {
            left: sig.len(),
            right: cfg.sample_count,
        });
    }
    let f0 = basis_signal(0, cfg);
    let f1 = basis_signal(1, cfg);
    let a = inner_product(sig, &f0, cfg.quadrature)?;
    let b = inner_product(sig, &f1, cfg.quadrature)?;
    let norm = (a * a + b * b).sqrt();
    if (norm - 1.0).abs() > DECODE_NORM_TOL {
        return Err(SignalError::Normalization {
            norm,
            tol: DECODE_NORM_TOL,
        });
    }
    new_obit(a / norm, b / norm).map_err(|_| SignalError::Normalization {
        norm,
        tol: DECODE_NORM_TOL,
    })
}

/// 2x2 Gram table of the basis waveforms with its deviation from identity.
#[derive(Debug, Clone, Copy)]
pub struct GramTable {
    pub table: [[f64; 2]; 2],
    pub max_deviation: f64,
}

/// Compute the Gram matrix of {f0, f1} and report how far it is from identity.
pub fn verify_orthonormality(cfg: &EncodingConfig) -> GramTable {
    let f0 = basis_signal(0, cfg);
    let f1 = basis_signal(1, cfg);
    let ip = |a: &SampledSignal, b: &SampledSignal| {
        inner_product(a, b, cfg.quadrature).expect("equal sample counts by construction")
    };
    let table = [[ip(&f0, &f0), ip(&f0, &f1)], [ip(&f1, &f0), ip(&f1, &f1)]];
    let mut max_deviation: f64 = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((v - target).abs());
        }
    }
    GramTable {
        table,
        max_deviation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn cfg(m: usize, rule: QuadratureRule) -> EncodingConfig {
        EncodingConfig::new(m, rule).unwrap()
    }

    #[test]
    fn basis_samples_hit_known_values() {
        let c = cfg(8, QuadratureRule::Trapezoid);
        let f0 = basis_signal(0, &c);
        let f1 = basis_signal(1, &c);
        // xi = pi/2 is sample index 2 at M = 8
        assert!((f0.samples()[2] - 1.0).abs() < 1e-15);
        assert!((f1.samples()[0] - 1.0).abs() < 1e-15);
        assert!(f0.samples()[0].abs() < 1e-15);
    }

    #[test]
    fn encode_basis_states() {
        let c = cfg(64, QuadratureRule::Trapezoid);
        let sin = encode(&new_obit(1.0, 0.0).unwrap(), &c).unwrap();
        assert_eq!(sin, basis_signal(0, &c));
        let cos = encode(&new_obit(0.0, 1.0).unwrap(), &c).unwrap();
        assert_eq!(cos, basis_signal(1, &c));
    }

    #[test]
    fn encode_equal_superposition_is_shifted_sine() {
        let c = cfg(64, QuadratureRule::Trapezoid);
        let s = new_obit(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap();
        let sig = encode(&s, &c).unwrap();
        for k in 0..64 {
            let xi = sig.xi(k);
            assert!((sig.samples()[k] - (xi + PI / 4.0).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn encode_rejects_multi_obit_states() {
        let c = cfg(64, QuadratureRule::Trapezoid);
        let s4 = RealAmplitudeState::basis(4, 0).unwrap();
        assert!(matches!(encode(&s4, &c), Err(SignalError::NotAnObit(4))));
    }

    #[test]
    fn gram_table_is_identity_even_at_m8() {
        for m in [8, 64, 256] {
            for rule in [QuadratureRule::Trapezoid, QuadratureRule::Simpson] {
                let g = verify_orthonormality(&cfg(m, rule));
                assert!(
                    g.max_deviation <= 1e-12,
                    "M={m} rule={rule:?} deviation {}",
                    g.max_deviation
                );
                assert!((g.table[0][0] - 1.0).abs() <= 1e-12);
                assert!((g.table[1][1] - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn inner_product_is_symmetric_and_bilinear() {
        let c = cfg(64, QuadratureRule::Trapezoid);
        let f0 = basis_signal(0, &c);
        let f1 = basis_signal(1, &c);
        let lhs = inner_product(&f0, &f1, c.quadrature).unwrap();
        let rhs = inner_product(&f1, &f0, c.quadrature).unwrap();
        assert_eq!(lhs, rhs);

        // (f0 + f1, f0) = (f0, f0) + (f1, f0) = 1
        let sum = f0.combine(1.0, &f1, 1.0).unwrap();
        let ip = inner_product(&sum, &f0, c.quadrature).unwrap();
        assert!((ip - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn decode_recovers_encoded_obit() {
        let c = cfg(256, QuadratureRule::Trapezoid);
        let s = new_obit(0.6, 0.8).unwrap();
        let back = decode(&encode(&s, &c).unwrap(), &c).unwrap();
        assert!((back.amplitudes()[0] - 0.6).abs() <= 1e-9);
        assert!((back.amplitudes()[1] - 0.8).abs() <= 1e-9);
    }

    #[test]
    fn decode_pure_sine_is_basis_zero() {
        let c = cfg(64, QuadratureRule::Trapezoid);
        let back = decode(&basis_signal(0, &c), &c).unwrap();
        assert!((back.amplitudes()[0] - 1.0).abs() <= 1e-12);
        assert!(back.amplitudes()[1].abs() <= 1e-12);
    }

    #[test]
    fn decode_rejects_zero_signal() {
        let c = cfg(64, QuadratureRule::Trapezoid);
        let zero = SampledSignal::zeros(64).unwrap();
        assert!(matches!(
            decode(&zero, &c),
            Err(SignalError::Normalization { .. })
        ));
    }

    #[test]
    fn sample_count_must_be_even_and_large_enough() {
        assert!(matches!(
            SampledSignal::new(vec![0.0; 7]),
            Err(SignalError::BadSampleCount(7))
        ));
        assert!(matches!(
            SampledSignal::new(vec![0.0; 9]),
            Err(SignalError::BadSampleCount(9))
        ));
        assert!(matches!(
            EncodingConfig::new(6, QuadratureRule::Trapezoid),
            Err(SignalError::BadSampleCount(6))
        ));
    }

    #[test]
    fn norm_carries_into_signal_domain() {
        let c = cfg(128, QuadratureRule::Trapezoid);
        let s = new_obit(0.28, 0.96).unwrap();
        let sig = encode(&s, &c).unwrap();
        let n = inner_product(&sig, &sig, c.quadrature).unwrap();
        assert!((n - 1.0).abs() <= 1e-10);
    }
}
