//! Statevector simulator: gate application, dense unitary extraction, shot
//! sampling, and a Monte-Carlo depolarizing noise channel.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::grid::{SpatialGrid, WavePacket};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone)]
pub struct StateVector {
    pub n_qubits: usize,
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`
    pub fn zero(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amplitudes }
    }

    /// Basis state `|m>`.
    pub fn basis(n_qubits: usize, m: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[m] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amplitudes }
    }

    /// Exact amplitude initialization from a wave packet (grid index `m`
    /// is basis state `|m>`, little-endian).
    pub fn from_wave_packet(psi: &WavePacket) -> Self {
        Self { n_qubits: psi.grid.n_qubits, amplitudes: psi.amplitudes.clone() }
    }

    pub fn to_wave_packet(&self, grid: &SpatialGrid) -> Result<WavePacket> {
        WavePacket::from_amplitudes(*grid, self.amplitudes.clone())
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Single-qubit unitary [[u00,u01],[u10,u11]] on qubit `q` via stride-pair
    /// iteration: partner indices differ in bit `q` only.
    fn apply_1q(&mut self, q: usize, u: [[Complex64; 2]; 2]) {
        let stride = 1usize << q;
        let m = self.amplitudes.len();
        let mut base = 0;
        while base < m {
            for i0 in base..base + stride {
                let i1 = i0 + stride;
                let a = self.amplitudes[i0];
                let b = self.amplitudes[i1];
                self.amplitudes[i0] = u[0][0] * a + u[0][1] * b;
                self.amplitudes[i1] = u[1][0] * a + u[1][1] * b;
            }
            base += 2 * stride;
        }
    }

    /// Multiply amplitudes whose index has bit `q` set by `phase`.
    fn apply_phase_if(&mut self, mask: usize, phase: Complex64) {
        for (m, a) in self.amplitudes.iter_mut().enumerate() {
            if m & mask == mask {
                *a *= phase;
            }
        }
    }

    fn apply_pauli(&mut self, q: usize, pauli: PauliKind) {
        let bit = 1usize << q;
        match pauli {
            PauliKind::X => {
                for m in 0..self.amplitudes.len() {
                    if m & bit == 0 {
                        self.amplitudes.swap(m, m | bit);
                    }
                }
            }
            PauliKind::Y => {
                // Y|0> = i|1>, Y|1> = -i|0>
                for m in 0..self.amplitudes.len() {
                    if m & bit == 0 {
                        let a0 = self.amplitudes[m];
                        let a1 = self.amplitudes[m | bit];
                        self.amplitudes[m] = -Complex64::i() * a1;
                        self.amplitudes[m | bit] = Complex64::i() * a0;
                    }
                }
            }
            PauliKind::Z => {
                for (m, a) in self.amplitudes.iter_mut().enumerate() {
                    if m & bit != 0 {
                        *a = -*a;
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum PauliKind {
    X,
    Y,
    Z,
}

const PAULIS: [PauliKind; 3] = [PauliKind::X, PauliKind::Y, PauliKind::Z];

/// Apply one gate in place. O(2^n).
pub fn apply_gate(state: &mut StateVector, gate: &Gate) -> Result<()> {
    let n = state.n_qubits;
    for q in gate.qubits() {
        if q >= n {
            return Err(Error::QubitIndex { index: q, n });
        }
    }
    let half = Complex64::new(0.5, 0.0);
    match *gate {
        Gate::H { q } => {
            let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
            state.apply_1q(q, [[s, s], [s, -s]]);
        }
        Gate::X { q } => state.apply_pauli(q, PauliKind::X),
        Gate::Sx { q } => {
            let p = half * Complex64::new(1.0, 1.0);
            let m = half * Complex64::new(1.0, -1.0);
            state.apply_1q(q, [[p, m], [m, p]]);
        }
        Gate::Rz { q, theta } => {
            let lo = Complex64::from_polar(1.0, -theta / 2.0);
            let hi = Complex64::from_polar(1.0, theta / 2.0);
            let bit = 1usize << q;
            for (m, a) in state.amplitudes.iter_mut().enumerate() {
                *a *= if m & bit == 0 { lo } else { hi };
            }
        }
        Gate::Phase { q, theta } => {
            state.apply_phase_if(1 << q, Complex64::from_polar(1.0, theta));
        }
        Gate::CPhase { control, target, theta } => {
            state.apply_phase_if((1 << control) | (1 << target), Complex64::from_polar(1.0, theta));
        }
        Gate::Cnot { control, target } => {
            let (cbit, tbit) = (1usize << control, 1usize << target);
            for m in 0..state.amplitudes.len() {
                if m & cbit != 0 && m & tbit == 0 {
                    state.amplitudes.swap(m, m | tbit);
                }
            }
        }
        Gate::Cz { a, b } => {
            state.apply_phase_if((1 << a) | (1 << b), Complex64::new(-1.0, 0.0));
        }
        Gate::Swap { a, b } => {
            let (abit, bbit) = (1usize << a, 1usize << b);
            for m in 0..state.amplitudes.len() {
                if m & abit != 0 && m & bbit == 0 {
                    state.amplitudes.swap(m, m ^ abit ^ bbit);
                }
            }
        }
        Gate::GlobalPhase { theta } => {
            let phase = Complex64::from_polar(1.0, theta);
            for a in state.amplitudes.iter_mut() {
                *a *= phase;
            }
        }
    }
    Ok(())
}

/// Fold the circuit over a copy of the input state.
pub fn run_circuit(state: &StateVector, circuit: &Circuit) -> Result<StateVector> {
    let mut out = state.clone();
    apply_circuit(&mut out, circuit)?;
    Ok(out)
}

pub fn apply_circuit(state: &mut StateVector, circuit: &Circuit) -> Result<()> {
    for gate in &circuit.gates {
        apply_gate(state, gate)?;
    }
    Ok(())
}

/// Dense unitary of a circuit: column `m` is the circuit run on `|m>`.
/// Capped at 10 qubits (oracle use only).
pub fn circuit_unitary(circuit: &Circuit) -> Result<DMatrix<Complex64>> {
    let n = circuit.n_qubits;
    if n > 10 {
        return Err(Error::QubitCount { n, min: 0, max: 10 });
    }
    let m = 1usize << n;
    let mut u = DMatrix::<Complex64>::zeros(m, m);
    for col in 0..m {
        let out = run_circuit(&StateVector::basis(n, col), circuit)?;
        for row in 0..m {
            u[(row, col)] = out.amplitudes[row];
        }
    }
    Ok(u)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotHistogram {
    pub shots: u64,
    pub counts: BTreeMap<usize, u64>,
}

impl ShotHistogram {
    /// Empirical probabilities on the full index range.
    pub fn frequencies(&self, m_points: usize) -> Vec<f64> {
        let mut f = vec![0.0; m_points];
        for (&idx, &count) in &self.counts {
            f[idx] = count as f64 / self.shots as f64;
        }
        f
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,count\n");
        for (idx, count) in &self.counts {
            out.push_str(&format!("{idx},{count}\n"));
        }
        out
    }
}

/// I.i.d. samples from `|psi_m|^2`, deterministic for a given seed.
pub fn sample_shots(state: &StateVector, shots: u64, seed: u64) -> ShotHistogram {
    let mut cumulative = Vec::with_capacity(state.amplitudes.len());
    let mut acc = 0.0;
    for a in &state.amplitudes {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
        *counts.entry(idx).or_insert(0) += 1;
    }
    ShotHistogram { shots, counts }
}

/// Depolarizing-noise parameters for Monte-Carlo trajectories. Qualitative
/// stand-in for hardware error accumulation; not calibrated to any device.
#[derive(Debug, Clone, Copy)]
pub struct NoiseSpec {
    /// Error probability after each 1-qubit gate.
    pub p1: f64,
    /// Error probability after each 2-qubit gate.
    pub p2: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(p1: f64, p2: f64, seed: u64) -> Result<Self> {
        for p in [p1, p2] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::BadProbability(p));
            }
        }
        Ok(Self { p1, p2, seed })
    }
}

/// One noisy trajectory with a caller-owned RNG (so multi-step runs draw from
/// a single stream). After each gate, with the arity-matched probability, a
/// uniformly random non-identity Pauli hits the touched qubit(s).
pub fn apply_circuit_noisy(
    state: &mut StateVector,
    circuit: &Circuit,
    p1: f64,
    p2: f64,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    for gate in &circuit.gates {
        apply_gate(state, gate)?;
        let qs = gate.qubits();
        match qs.len() {
            1 => {
                if p1 > 0.0 && rng.random::<f64>() < p1 {
                    state.apply_pauli(qs[0], PAULIS[rng.random_range(0..3)]);
                }
            }
            2 => {
                if p2 > 0.0 && rng.random::<f64>() < p2 {
                    // Uniform over the 15 non-identity two-qubit Paulis:
                    // pick (P_a, P_b) in {I,X,Y,Z}^2 minus (I,I).
                    let k = rng.random_range(1..16usize);
                    let (pa, pb) = (k / 4, k % 4);
                    if pa > 0 {
                        state.apply_pauli(qs[0], PAULIS[pa - 1]);
                    }
                    if pb > 0 {
                        state.apply_pauli(qs[1], PAULIS[pb - 1]);
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}

/// Single noisy trajectory, seeded from `noise.seed`.
pub fn run_circuit_noisy(state: &StateVector, circuit: &Circuit, noise: &NoiseSpec) -> Result<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let mut out = state.clone();
    apply_circuit_noisy(&mut out, circuit, noise.p1, noise.p2, &mut rng)?;
    Ok(out)
}
