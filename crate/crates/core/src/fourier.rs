//! Four equivalent routes to the same unitary Fourier transform, plus the
//! operation-count ledger that probes the speed versus circuit-complexity
//! trade-off.
//!
//! The routes are: the direct O(N^2) DFT (the oracle), a radix-2
//! decimation-in-time FFT, the gate-level QFT circuit built from the
//! product representation, and the stage factorization of the DFT matrix
//! into log2(N) sparse butterfly matrices plus a bit-reversal permutation.
//! All four use the unitary convention y_k = (1/sqrt(N)) sum_j x_j
//! e^{+2 pi i jk / N} and must agree elementwise, not merely up to
//! permutation.

use crate::state::ComplexAmplitudeState;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use thiserror::Error;

/// Widest circuit the builder accepts.
pub const MAX_CIRCUIT_WIDTH: usize = 20;
/// Widest stage factorization (dense verification stays desk-scale).
pub const MAX_FACTORIZATION_WIDTH: usize = 10;
/// Widest ledger entry (counts only, nothing is executed at this size).
pub const MAX_LEDGER_WIDTH: usize = 30;

#[derive(Debug, Error)]
pub enum FourierError {
    #[error("{name} = {value} out of range [{min}, {max}]")]
    Range {
        name: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    #[error("length {0} is not a power of two (or is zero)")]
    Size(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// Complex vector of power-of-two length carrying transform inputs/outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumVector {
    values: Vec<Complex64>,
}

impl SpectrumVector {
    pub fn new(values: Vec<Complex64>) -> Result<Self, FourierError> {
        if values.is_empty() || !values.len().is_power_of_two() {
            return Err(FourierError::Size(values.len()));
        }
        Ok(Self { values })
    }

    pub fn delta(n: usize) -> Result<Self, FourierError> {
        let mut values = vec![Complex64::new(0.0, 0.0); n];
        if values.is_empty() || !n.is_power_of_two() {
            return Err(FourierError::Size(n));
        }
        values[0] = Complex64::new(1.0, 0.0);
        Ok(Self { values })
    }

    pub fn from_state(s: &ComplexAmplitudeState) -> Self {
        Self {
            values: s.amplitudes().to_vec(),
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-entry distance to another vector.
    pub fn inf_distance(&self, other: &SpectrumVector) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()))
    }
}

fn root_of_unity(numerator: u64, denominator: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (numerator % denominator) as f64 / denominator as f64)
}

/// Direct double-loop DFT, the oracle the other three routes are held to.
pub fn dft_direct(x: &SpectrumVector) -> SpectrumVector {
    let n = x.len() as u64;
    let scale = 1.0 / (n as f64).sqrt();
    let values = (0..n)
        .map(|k| {
            let sum: Complex64 = (0..n)
                .map(|j| x.values[j as usize] * root_of_unity(j * k, n))
                .sum();
            sum * scale
        })
        .collect();
    SpectrumVector { values }
}

/// Complex multiply / add tally from an instrumented transform run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCount {
    pub mults: u64,
    pub adds: u64,
}

fn bit_reverse(mut i: usize, bits: u32) -> usize {
    let mut out = 0;
    for _ in 0..bits {
        out = (out << 1) | (i & 1);
        i >>= 1;
    }
    out
}

/// Radix-2 decimation-in-time FFT with the butterfly operations tallied.
///
/// The tally covers the butterflies only: one complex multiply and two
/// complex additions each, (N/2) log2 N multiplies in total. The final
/// 1/sqrt(N) normalization is not an arithmetic stage and is not counted.
pub fn fft_radix2_counted(x: &SpectrumVector) -> (SpectrumVector, OpCount) {
    let n = x.len();
    let bits = n.trailing_zeros();
    let mut z: Vec<Complex64> = (0..n).map(|i| x.values[bit_reverse(i, bits)]).collect();
    let mut count = OpCount::default();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let twiddles: Vec<Complex64> = (0..half)
            .map(|t| root_of_unity(t as u64, len as u64))
            .collect();
        let mut b = 0;
        while b < n {
            for t in 0..half {
                let u = z[b + t];
                let v = twiddles[t] * z[b + t + half];
                count.mults += 1;
                z[b + t] = u + v;
                z[b + t + half] = u - v;
                count.adds += 2;
            }
            b += len;
        }
        len <<= 1;
    }
    let scale = 1.0 / (n as f64).sqrt();
    for v in &mut z {
        *v *= scale;
    }
    (SpectrumVector { values: z }, count)
}

/// Radix-2 FFT; equals [`dft_direct`] within 1e-10 in the max norm.
pub fn fft_radix2(x: &SpectrumVector) -> SpectrumVector {
    fft_radix2_counted(x).0
}

/// Bit string j_1 ... j_n, big-endian: j_1 is the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn from_index(index: usize, n: usize) -> Self {
        let bits = (0..n).map(|l| ((index >> (n - 1 - l)) & 1) as u8).collect();
        Self { bits }
    }

    pub fn to_index(&self) -> usize {
        self.bits.iter().fold(0, |acc, b| (acc << 1) | *b as usize)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Suffix j_l ... j_n for 1-based l.
    pub fn suffix(&self, l: usize) -> &[u8] {
        &self.bits[l - 1..]
    }
}

/// Binary fraction 0.b_1 b_2 ... b_m in [0, 1).
pub fn binary_fraction(bits: &[u8]) -> f64 {
    bits.iter()
        .enumerate()
        .map(|(m, b)| *b as f64 / (1u64 << (m + 1)) as f64)
        .sum()
}

/// Gate descriptor for the Fourier circuit. `ControlledPhase` applies the
/// phase e^{2 pi i / 2^k} when both qubits are set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateOp {
    Hadamard { target: usize },
    ControlledPhase { control: usize, target: usize, k: u32 },
    Swap { a: usize, b: usize },
}

/// Gate list realizing the product representation of the DFT; the closing
/// swaps restore natural (big-endian) output order so the circuit agrees
/// with the direct transform elementwise.
#[derive(Debug, Clone)]
pub struct QftCircuit {
    n: usize,
    gates: Vec<GateOp>,
}

impl QftCircuit {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }
}

/// Build the standard Fourier circuit on n qubits: per qubit one Hadamard
/// followed by controlled phases from every lower-significance qubit, then
/// floor(n/2) swaps. Gate count is n(n+1)/2 + floor(n/2).
pub fn qft_build_circuit(n: usize) -> Result<QftCircuit, FourierError> {
    if n < 1 || n > MAX_CIRCUIT_WIDTH {
        return Err(FourierError::Range {
            name: "n",
            value: n,
            min: 1,
            max: MAX_CIRCUIT_WIDTH,
        });
    }
    let mut gates = Vec::with_capacity(n * (n + 1) / 2 + n / 2);
    for target in 0..n {
        gates.push(GateOp::Hadamard { target });
        for control in target + 1..n {
            gates.push(GateOp::ControlledPhase {
                control,
                target,
                k: (control - target + 1) as u32,
            });
        }
    }
    for q in 0..n / 2 {
        gates.push(GateOp::Swap { a: q, b: n - 1 - q });
    }
    Ok(QftCircuit { n, gates })
}

/// Apply one gate in place. Qubit 0 is the most significant bit of the
/// basis index.
fn apply_gate_op(n: usize, gate: &GateOp, amps: &mut [Complex64]) {
    let mask_of = |q: usize| 1usize << (n - 1 - q);
    match *gate {
        GateOp::Hadamard { target } => {
            let mask = mask_of(target);
            for i in 0..amps.len() {
                if i & mask == 0 {
                    let a = amps[i];
                    let b = amps[i | mask];
                    amps[i] = (a + b) * FRAC_1_SQRT_2;
                    amps[i | mask] = (a - b) * FRAC_1_SQRT_2;
                }
            }
        }
        GateOp::ControlledPhase { control, target, k } => {
            let both = mask_of(control) | mask_of(target);
            let phase = root_of_unity(1, 1u64 << k);
            for (i, amp) in amps.iter_mut().enumerate() {
                if i & both == both {
                    *amp *= phase;
                }
            }
        }
        GateOp::Swap { a, b } => {
            let (ma, mb) = (mask_of(a), mask_of(b));
            for i in 0..amps.len() {
                if i & ma != 0 && i & mb == 0 {
                    amps.swap(i, (i & !ma) | mb);
                }
            }
        }
    }
}

/// Run the circuit on a register state; the output amplitudes are the DFT
/// of the input amplitudes.
pub fn qft_apply(
    circuit: &QftCircuit,
    s: &ComplexAmplitudeState,
) -> Result<ComplexAmplitudeState, FourierError> {
    if s.dim() != 1 << circuit.n {
        return Err(FourierError::DimensionMismatch {
            left: s.dim(),
            right: 1 << circuit.n,
        });
    }
    let mut amps = s.amplitudes().to_vec();
    for gate in &circuit.gates {
        apply_gate_op(circuit.n, gate, &mut amps);
    }
    Ok(ComplexAmplitudeState::new(amps).expect("unitary circuit preserves the norm"))
}

/// Amplitudes of the per-qubit product form for basis input j: factor l
/// contributes the binary-fraction phase 0.j_{n-l+1} ... j_n on its |1>
/// component. An independent route to e^{2 pi i jk / N} / sqrt(N).
pub fn product_representation_amplitudes(n: usize, j: usize) -> Vec<Complex64> {
    let big_n = 1usize << n;
    let jbits = BitString::from_index(j, n);
    // factor_phase[l-1] = 0.j_{n-l+1} ... j_n
    let factor_phase: Vec<f64> = (1..=n)
        .map(|l| binary_fraction(jbits.suffix(n - l + 1)))
        .collect();
    let scale = 1.0 / (big_n as f64).sqrt();
    (0..big_n)
        .map(|k| {
            let kbits = BitString::from_index(k, n);
            let total: f64 = (0..n)
                .filter(|l| kbits.bits()[*l] == 1)
                .map(|l| factor_phase[l])
                .sum();
            Complex64::from_polar(scale, 2.0 * PI * total)
        })
        .collect()
}

/// One sparse butterfly-with-twiddle matrix; exactly two nonzeros per row.
#[derive(Debug, Clone)]
pub struct SparseStage {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseStage {
    pub fn new(dim: usize, entries: Vec<(usize, usize, Complex64)>) -> Self {
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn nonzeros(&self) -> usize {
        self.entries.len()
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for &(row, col, v) in &self.entries {
            out[row] += v * x[col];
        }
        out
    }
}

/// The DFT matrix as an ordered product of sparse stages applied after a
/// bit-reversal permutation; each stage carries a 1/sqrt(2) so every stage
/// is unitary on its own.
#[derive(Debug, Clone)]
pub struct StageFactorization {
    n: usize,
    stages: Vec<SparseStage>,
    permutation: Vec<usize>,
}

impl StageFactorization {
    pub fn new(n: usize, stages: Vec<SparseStage>, permutation: Vec<usize>) -> Self {
        Self {
            n,
            stages,
            permutation,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stages(&self) -> &[SparseStage] {
        &self.stages
    }

    pub fn stages_mut(&mut self) -> &mut [SparseStage] {
        &mut self.stages
    }

    /// `permutation[i]` is the source index feeding slot i (bit reversal).
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn apply(&self, x: &SpectrumVector) -> Result<SpectrumVector, FourierError> {
        let dim = 1usize << self.n;
        if x.len() != dim {
            return Err(FourierError::DimensionMismatch {
                left: x.len(),
                right: dim,
            });
        }
        let mut z: Vec<Complex64> = self.permutation.iter().map(|&src| x.values[src]).collect();
        for stage in &self.stages {
            z = stage.apply(&z);
        }
        Ok(SpectrumVector { values: z })
    }
}

/// Factor the N x N DFT matrix into n sparse butterfly stages plus the
/// bit-reversal permutation, 2N nonzeros per stage.
pub fn stage_factorization(n: usize) -> Result<StageFactorization, FourierError> {
    if n < 1 || n > MAX_FACTORIZATION_WIDTH {
        return Err(FourierError::Range {
            name: "n",
            value: n,
            min: 1,
            max: MAX_FACTORIZATION_WIDTH,
        });
    }
    let dim = 1usize << n;
    let permutation = (0..dim).map(|i| bit_reverse(i, n as u32)).collect();
    let mut stages = Vec::with_capacity(n);
    for s in 1..=n {
        let len = 1usize << s;
        let half = len / 2;
        let mut entries = Vec::with_capacity(2 * dim);
        let mut b = 0;
        while b < dim {
            for t in 0..half {
                let w = root_of_unity(t as u64, len as u64) * FRAC_1_SQRT_2;
                let diag = Complex64::new(FRAC_1_SQRT_2, 0.0);
                let (r0, r1) = (b + t, b + t + half);
                entries.push((r0, r0, diag));
                entries.push((r0, r1, w));
                entries.push((r1, r0, diag));
                entries.push((r1, r1, -w));
            }
            b += len;
        }
        stages.push(SparseStage::new(dim, entries));
    }
    Ok(StageFactorization::new(n, stages, permutation))
}

/// Max-entry residual between the reconstructed product and the DFT matrix,
/// column by column against the direct transform.
pub fn verify_factorization(f: &StageFactorization) -> f64 {
    let dim = 1usize << f.n();
    let mut residual: f64 = 0.0;
    for j in 0..dim {
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        e[j] = Complex64::new(1.0, 0.0);
        let basis = SpectrumVector { values: e };
        let via_stages = f.apply(&basis).expect("dimensions fixed by construction");
        let via_dft = dft_direct(&basis);
        residual = residual.max(via_stages.inf_distance(&via_dft));
    }
    residual
}

/// Operation counts for one transform route at one register width.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ComplexityLedger {
    pub method: String,
    pub width: usize,
    pub complex_mults: u64,
    pub complex_adds: u64,
    pub gate_count: u64,
}

/// Closed-form ledgers for the direct DFT: N^2 multiplies, N(N-1) adds.
pub fn dft_ledger(n: usize) -> ComplexityLedger {
    let big_n = 1u64 << n;
    ComplexityLedger {
        method: "dft".into(),
        width: n,
        complex_mults: big_n * big_n,
        complex_adds: big_n * (big_n - 1),
        gate_count: 0,
    }
}

/// Closed-form ledger for the radix-2 FFT: (N/2) log2 N multiplies,
/// N log2 N adds.
pub fn fft_ledger(n: usize) -> ComplexityLedger {
    let big_n = 1u64 << n;
    ComplexityLedger {
        method: "fft".into(),
        width: n,
        complex_mults: big_n / 2 * n as u64,
        complex_adds: big_n * n as u64,
        gate_count: 0,
    }
}

/// Closed-form ledger for the Fourier circuit: n(n+1)/2 + floor(n/2) gates.
pub fn qft_ledger(n: usize) -> ComplexityLedger {
    let n64 = n as u64;
    ComplexityLedger {
        method: "qft".into(),
        width: n,
        complex_mults: 0,
        complex_adds: 0,
        gate_count: n64 * (n64 + 1) / 2 + n64 / 2,
    }
}

/// One row of the complexity report.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ComplexityRow {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub dft_mults: u64,
    pub fft_mults: u64,
    pub fft_adds: u64,
    pub qft_gates: u64,
}

/// Operation counts per register width over [n_min, n_max]; counts only,
/// nothing is executed.
pub fn complexity_report(n_min: usize, n_max: usize) -> Result<Vec<ComplexityRow>, FourierError> {
    if n_min < 1 || n_min > n_max {
        return Err(FourierError::Range {
            name: "n_min",
            value: n_min,
            min: 1,
            max: n_max,
        });
    }
    if n_max > MAX_LEDGER_WIDTH {
        return Err(FourierError::Range {
            name: "n_max",
            value: n_max,
            min: n_min,
            max: MAX_LEDGER_WIDTH,
        });
    }
    Ok((n_min..=n_max)
        .map(|n| {
            let (dft, fft, qft) = (dft_ledger(n), fft_ledger(n), qft_ledger(n));
            ComplexityRow {
                n,
                big_n: 1u64 << n,
                dft_mults: dft.complex_mults,
                fft_mults: fft.complex_mults,
                fft_adds: fft.complex_adds,
                qft_gates: qft.gate_count,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::normalize_complex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spectrum(rng: &mut ChaCha8Rng, n_len: usize) -> SpectrumVector {
        SpectrumVector::new(
            (0..n_len)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn dft_of_length_one_is_identity() {
        let x = SpectrumVector::new(vec![Complex64::new(0.3, -0.7)]).unwrap();
        assert_eq!(dft_direct(&x).values(), x.values());
    }

    #[test]
    fn dft_of_delta_is_uniform() {
        let y = dft_direct(&SpectrumVector::delta(8).unwrap());
        let expect = 1.0 / 8f64.sqrt();
        for v in y.values() {
            assert!((v - expect).norm() <= 1e-15);
        }
    }

    #[test]
    fn dft_of_uniform_is_delta() {
        let x = SpectrumVector::new(vec![Complex64::new(0.5, 0.0); 4]).unwrap();
        let y = dft_direct(&x);
        assert!((y.values()[0] - 1.0).norm() <= 1e-15);
        for v in &y.values()[1..] {
            assert!(v.norm() <= 1e-15);
        }
    }

    #[test]
    fn fft_matches_dft_on_random_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = random_spectrum(&mut rng, 1024);
        let residual = fft_radix2(&x).inf_distance(&dft_direct(&x));
        assert!(residual <= 1e-10, "residual {residual}");
    }

    #[test]
    fn fft_inverse_via_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x = random_spectrum(&mut rng, 256);
        let y = fft_radix2(&x);
        let conj = SpectrumVector::new(y.values().iter().map(|v| v.conj()).collect()).unwrap();
        let back = SpectrumVector::new(
            fft_radix2(&conj).values().iter().map(|v| v.conj()).collect(),
        )
        .unwrap();
        assert!(back.inf_distance(&x) <= 1e-10);
    }

    #[test]
    fn fft_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let x = random_spectrum(&mut rng, 128);
        let y = fft_radix2(&x);
        assert!((y.norm() - x.norm()).abs() <= 1e-10);
    }

    #[test]
    fn fft_multiply_count_matches_closed_form() {
        for n in 1..=10usize {
            let len = 1usize << n;
            let x = SpectrumVector::delta(len).unwrap();
            let (_, count) = fft_radix2_counted(&x);
            assert_eq!(count.mults, (len as u64 / 2) * n as u64);
            assert_eq!(count.adds, len as u64 * n as u64);
        }
    }

    #[test]
    fn spectrum_rejects_non_power_of_two() {
        let v = vec![Complex64::new(1.0, 0.0); 6];
        assert!(matches!(SpectrumVector::new(v), Err(FourierError::Size(6))));
    }

    #[test]
    fn binary_fraction_values() {
        assert_eq!(binary_fraction(&[1]), 0.5);
        assert_eq!(binary_fraction(&[0, 1]), 0.25);
        assert_eq!(binary_fraction(&[1, 0, 1]), 0.625);
        assert_eq!(binary_fraction(&[]), 0.0);
    }

    #[test]
    fn bitstring_round_trips_big_endian() {
        let b = BitString::from_index(0b101, 3);
        assert_eq!(b.bits(), &[1, 0, 1]);
        assert_eq!(b.to_index(), 5);
        assert_eq!(b.suffix(2), &[0, 1]);
    }

    #[test]
    fn circuit_gate_counts() {
        assert_eq!(qft_build_circuit(1).unwrap().gate_count(), 1);
        assert_eq!(qft_build_circuit(3).unwrap().gate_count(), 7);
        assert_eq!(qft_build_circuit(8).unwrap().gate_count(), 40);
        for n in 1..=MAX_CIRCUIT_WIDTH {
            let c = qft_build_circuit(n).unwrap();
            assert_eq!(c.gate_count(), n * (n + 1) / 2 + n / 2);
        }
        assert!(matches!(
            qft_build_circuit(21),
            Err(FourierError::Range { .. })
        ));
        assert!(matches!(
            qft_build_circuit(0),
            Err(FourierError::Range { .. })
        ));
    }

    #[test]
    fn qft_of_zero_register_is_uniform() {
        let c = qft_build_circuit(4).unwrap();
        let s = ComplexAmplitudeState::basis(16, 0).unwrap();
        let out = qft_apply(&c, &s).unwrap();
        for v in out.amplitudes() {
            assert!((v - 0.25).norm() <= 1e-12);
        }
    }

    #[test]
    fn qft_on_basis_states_matches_dft_columns() {
        let n = 5;
        let c = qft_build_circuit(n).unwrap();
        for j in 0..1usize << n {
            let s = ComplexAmplitudeState::basis(1 << n, j).unwrap();
            let out = qft_apply(&c, &s).unwrap();
            let oracle = dft_direct(&SpectrumVector::from_state(&s));
            let out_vec = SpectrumVector::from_state(&out);
            assert!(out_vec.inf_distance(&oracle) <= 1e-12, "j = {j}");
        }
    }

    #[test]
    fn qft_matches_dft_on_random_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let raw: Vec<Complex64> = (0..256)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let s = normalize_complex(&raw).unwrap();
        let c = qft_build_circuit(8).unwrap();
        let out = SpectrumVector::from_state(&qft_apply(&c, &s).unwrap());
        let oracle = dft_direct(&SpectrumVector::from_state(&s));
        assert!(out.inf_distance(&oracle) <= 1e-10);
    }

    #[test]
    fn qft_rejects_width_mismatch() {
        let c = qft_build_circuit(3).unwrap();
        let s = ComplexAmplitudeState::basis(4, 0).unwrap();
        assert!(matches!(
            qft_apply(&c, &s),
            Err(FourierError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn product_form_phases_reproduce_dft_exhaustively() {
        for n in 1..=6usize {
            let dim = 1usize << n;
            for j in 0..dim {
                let amps = product_representation_amplitudes(n, j);
                let scale = 1.0 / (dim as f64).sqrt();
                for (k, amp) in amps.iter().enumerate() {
                    let expect =
                        Complex64::from_polar(scale, 2.0 * PI * (j * k % dim) as f64 / dim as f64);
                    assert!(
                        (amp - expect).norm() <= 1e-12,
                        "n={n} j={j} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn single_stage_is_the_two_point_transform() {
        let f = stage_factorization(1).unwrap();
        assert_eq!(f.stages().len(), 1);
        assert!(verify_factorization(&f) <= 1e-15);
    }

    #[test]
    fn two_stage_product_is_dft4() {
        let f = stage_factorization(2).unwrap();
        assert!(verify_factorization(&f) <= 1e-12);
    }

    #[test]
    fn stages_have_2n_nonzeros() {
        for n in 1..=6usize {
            let f = stage_factorization(n).unwrap();
            assert_eq!(f.stages().len(), n);
            for stage in f.stages() {
                assert_eq!(stage.nonzeros(), 2 << n);
            }
        }
    }

    #[test]
    fn factorization_verifies_through_n4() {
        let f = stage_factorization(4).unwrap();
        assert!(verify_factorization(&f) <= 1e-12);
    }

    #[test]
    fn corrupted_twiddle_is_detected() {
        let mut f = stage_factorization(3).unwrap();
        // negate one off-diagonal twiddle in the last stage
        let entries = f.stages_mut()[2].entries().to_vec();
        let idx = entries
            .iter()
            .position(|&(r, c, _)| r != c)
            .unwrap();
        let mut corrupted = entries;
        corrupted[idx].2 = -corrupted[idx].2;
        let dim = f.stages()[2].dim();
        f.stages_mut()[2] = SparseStage::new(dim, corrupted);
        assert!(verify_factorization(&f) > 0.1);
    }

    #[test]
    fn factorization_range_is_enforced() {
        assert!(matches!(
            stage_factorization(11),
            Err(FourierError::Range { .. })
        ));
    }

    #[test]
    fn complexity_closed_forms() {
        let rows = complexity_report(1, 10).unwrap();
        assert_eq!(rows[0].dft_mults, 4);
        assert_eq!(rows[0].fft_mults, 1);
        assert_eq!(rows[0].qft_gates, 1);
        let last = &rows[9];
        assert_eq!(last.dft_mults, 1_048_576);
        assert_eq!(last.fft_mults, 5_120);
        assert_eq!(last.qft_gates, 60);
        for pair in rows.windows(2) {
            assert!(pair[1].dft_mults >= pair[0].dft_mults);
            assert!(pair[1].fft_mults >= pair[0].fft_mults);
            assert!(pair[1].fft_adds >= pair[0].fft_adds);
            assert!(pair[1].qft_gates >= pair[0].qft_gates);
        }
        assert!(matches!(
            complexity_report(5, 31),
            Err(FourierError::Range { .. })
        ));
        assert!(matches!(
            complexity_report(3, 2),
            Err(FourierError::Range { .. })
        ));
    }
}
