//! Dense and FFT-based classical references the circuit pipeline is checked
//! against. Everything here works on plain index-space vectors/matrices and
//! never touches gates.

use crate::grid::SpatialGrid;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::TAU;
use std::sync::Arc;

/// Discrete Fourier transform with +i kernel, `F[k][j] = exp(+2*pi*i*j*k/M)/sqrt(M)`.
pub fn dft_matrix(n_qubits: usize) -> DMatrix<Complex64> {
    let m = 1usize << n_qubits;
    let scale = 1.0 / (m as f64).sqrt();
    DMatrix::from_fn(m, m, |k, j| {
        Complex64::from_polar(scale, TAU * (j as f64) * (k as f64) / m as f64)
    })
}

/// `diag(exp(-i * v_m * dt))`.
pub fn diagonal_unitary(values: &[f64], dt: f64) -> DMatrix<Complex64> {
    let m = values.len();
    let mut u = DMatrix::<Complex64>::zeros(m, m);
    for (i, &v) in values.iter().enumerate() {
        u[(i, i)] = Complex64::from_polar(1.0, -v * dt);
    }
    u
}

/// Kinetic energies on the momentum grid: `T_j = p_j^2 / (2 mu)`.
pub fn kinetic_phases(grid: &SpatialGrid, mu_au: f64) -> Vec<f64> {
    grid.momenta().iter().map(|p| p * p / (2.0 * mu_au)).collect()
}

/// One exact kinetic half of a split step in index space:
/// `F^dag * diag(exp(-i T_j dt)) * F`.
pub fn kinetic_step_matrix(grid: &SpatialGrid, mu_au: f64, dt: f64) -> DMatrix<Complex64> {
    let f = dft_matrix(grid.n_qubits);
    let t = diagonal_unitary(&kinetic_phases(grid, mu_au), dt);
    f.adjoint() * t * f
}

/// One full first-order split step: kinetic factor applied after the
/// potential factor, `U = U_kin * U_V`.
pub fn trotter_step_matrix(
    grid: &SpatialGrid,
    potential: &[f64],
    mu_au: f64,
    dt: f64,
) -> DMatrix<Complex64> {
    kinetic_step_matrix(grid, mu_au, dt) * diagonal_unitary(potential, dt)
}

/// Grid Hamiltonian `H = F^dag diag(T_j) F + diag(V_m)`, symmetrized to kill
/// the last-bit rounding asymmetry.
pub fn hamiltonian_matrix(grid: &SpatialGrid, potential: &[f64], mu_au: f64) -> DMatrix<Complex64> {
    let m = 1usize << grid.n_qubits;
    assert_eq!(potential.len(), m, "potential length must match grid");
    let f = dft_matrix(grid.n_qubits);
    let mut t = DMatrix::<Complex64>::zeros(m, m);
    for (j, e) in kinetic_phases(grid, mu_au).iter().enumerate() {
        t[(j, j)] = Complex64::new(*e, 0.0);
    }
    let mut h = f.adjoint() * t * f;
    for (i, &v) in potential.iter().enumerate() {
        h[(i, i)] += Complex64::new(v, 0.0);
    }
    let ha = h.adjoint();
    (h + ha) * Complex64::new(0.5, 0.0)
}

/// `exp(-i H t)` for Hermitian `H`, via eigendecomposition.
pub fn hermitian_expm(h: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let se = h.clone().symmetric_eigen();
    let m = h.nrows();
    let mut d = DMatrix::<Complex64>::zeros(m, m);
    for i in 0..m {
        d[(i, i)] = Complex64::from_polar(1.0, -se.eigenvalues[i] * t);
    }
    &se.eigenvectors * d * se.eigenvectors.adjoint()
}

pub fn apply_matrix(u: &DMatrix<Complex64>, psi: &[Complex64]) -> Vec<Complex64> {
    let m = psi.len();
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    for col in 0..m {
        let amp = psi[col];
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        for row in 0..m {
            out[row] += u[(row, col)] * amp;
        }
    }
    out
}

/// FFT split-operator stepper: same `U_kin * U_V` step as
/// [`trotter_step_matrix`] but in O(M log M) with precomputed plans.
pub struct SplitOperatorFft {
    v_phase: Vec<Complex64>,
    /// Kinetic phases with the 1/M round-trip FFT normalization folded in.
    t_phase_scaled: Vec<Complex64>,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

impl SplitOperatorFft {
    pub fn new(grid: &SpatialGrid, potential: &[f64], mu_au: f64, dt: f64) -> Self {
        let m = 1usize << grid.n_qubits;
        assert_eq!(potential.len(), m, "potential length must match grid");
        let v_phase = potential.iter().map(|&v| Complex64::from_polar(1.0, -v * dt)).collect();
        let t_phase_scaled = kinetic_phases(grid, mu_au)
            .iter()
            .map(|&t| Complex64::from_polar(1.0 / m as f64, -t * dt))
            .collect();
        let mut planner = FftPlanner::new();
        Self {
            v_phase,
            t_phase_scaled,
            fft_fwd: planner.plan_fft_forward(m),
            fft_inv: planner.plan_fft_inverse(m),
        }
    }

    /// Advance `psi` by one step in place. The +i-kernel transform into the
    /// momentum representation is rustfft's unnormalized inverse FFT, and the
    /// way back is the forward FFT; the combined 1/M lives in the kinetic
    /// phase table.
    pub fn step(&self, psi: &mut [Complex64]) {
        for (a, p) in psi.iter_mut().zip(&self.v_phase) {
            *a *= p;
        }
        self.fft_inv.process(psi);
        for (a, p) in psi.iter_mut().zip(&self.t_phase_scaled) {
            *a *= p;
        }
        self.fft_fwd.process(psi);
    }
}

/// Max elementwise deviation after aligning `b` to `a` with the L2-optimal
/// global phase (the argument of the overlap `<b|a>`).
pub fn vector_deviation_up_to_phase(a: &[Complex64], b: &[Complex64]) -> f64 {
    let phase = alignment_phase(a, b);
    a.iter().zip(b).map(|(x, y)| (x - phase * y).norm()).fold(0.0, f64::max)
}

/// L2 distance after the same phase alignment.
pub fn l2_error_up_to_phase(a: &[Complex64], b: &[Complex64]) -> f64 {
    let phase = alignment_phase(a, b);
    a.iter().zip(b).map(|(x, y)| (x - phase * y).norm_sqr()).sum::<f64>().sqrt()
}

fn alignment_phase(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| y.conj() * x).sum();
    if overlap.norm() < 1e-300 {
        Complex64::new(1.0, 0.0)
    } else {
        overlap / overlap.norm()
    }
}

/// Max entrywise deviation between matrices after aligning with the phase of
/// the largest-magnitude entry of `a`.
pub fn matrix_deviation_up_to_phase(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let mut best = 0.0;
    let mut phase = Complex64::new(1.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        if x.norm() > best && y.norm() > 1e-300 {
            best = x.norm();
            phase = (x / y) / (x / y).norm();
        }
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - phase * y).norm()).fold(0.0, f64::max)
}
