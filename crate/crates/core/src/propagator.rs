//! Multi-step split-operator time evolution over three interchangeable
//! backends (compiled circuit, dense matrix oracle, FFT oracle), plus the
//! cross-backend and Trotter-convergence checks built on top of it.

use crate::circuit::{trotter_step_circuit, Circuit};
use crate::dense::{self, SplitOperatorFft};
use crate::error::{Error, Result};
use crate::grid::{ObservableSnapshot, SpatialGrid, WavePacket};
use crate::pauli::decompose_diagonal;
use crate::sim::{apply_circuit, apply_circuit_noisy, sample_shots, NoiseSpec, StateVector};
use crate::AMU_TO_ME;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

/// Dense matrices get unwieldy beyond this register size; the circuit and
/// FFT backends have no such cap.
const MAX_DENSE_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Compiled Trotter-step circuit on the statevector simulator.
    Circuit,
    /// One dense step matrix `U_kin * U_V`, applied repeatedly.
    DenseTrotter,
    /// Pointwise phases + FFT round trips.
    FftOracle,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "circuit" => Ok(Backend::Circuit),
            "dense" | "dense_trotter" | "dense-trotter" => Ok(Backend::DenseTrotter),
            "fft" | "fft_oracle" | "fft-oracle" => Ok(Backend::FftOracle),
            other => Err(Error::Config(format!(
                "unknown backend '{other}' (expected circuit, dense, or fft)"
            ))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Circuit => "circuit",
            Backend::DenseTrotter => "dense",
            Backend::FftOracle => "fft",
        })
    }
}

#[derive(Debug, Clone)]
pub struct PropagationPlan {
    pub grid: SpatialGrid,
    /// Potential on the grid, Hartree.
    pub potential: Vec<f64>,
    /// Reduced mass in atomic mass units; converted once via [`AMU_TO_ME`].
    pub mu_amu: f64,
    /// Time step, atomic units.
    pub dt_au: f64,
    pub n_steps: usize,
    pub backend: Backend,
    /// Gate-noise model; circuit backend only.
    pub noise: Option<NoiseSpec>,
    /// When set, snapshot densities after each step come from sampled
    /// measurement histograms instead of the exact statevector.
    pub shots: Option<u64>,
    /// Base seed for shot sampling (step k samples with `seed + k`).
    pub seed: u64,
}

impl PropagationPlan {
    pub fn mu_au(&self) -> f64 {
        self.mu_amu * AMU_TO_ME
    }

    pub fn t_fin(&self) -> f64 {
        self.dt_au * self.n_steps as f64
    }

    fn validate(&self, initial: &WavePacket) -> Result<()> {
        let m = self.grid.m_points;
        if self.potential.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: self.potential.len() });
        }
        if initial.amplitudes.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: initial.amplitudes.len() });
        }
        if self.potential.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !(self.mu_amu.is_finite() && self.mu_amu > 0.0) {
            return Err(Error::Config(format!("reduced mass must be positive, got {}", self.mu_amu)));
        }
        if !self.dt_au.is_finite() {
            return Err(Error::Config("time step must be finite".to_string()));
        }
        if (initial.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::Config(format!(
                "initial state is not normalized (norm = {})",
                initial.norm()
            )));
        }
        if self.noise.is_some() && self.backend != Backend::Circuit {
            return Err(Error::Config(
                "gate noise applies to the circuit backend only".to_string(),
            ));
        }
        Ok(())
    }
}

/// Per-step state advancer, built once per run.
enum Stepper {
    Circuit { circuit: Circuit, noise: Option<(f64, f64, ChaCha8Rng)> },
    Dense { u: DMatrix<Complex64> },
    Fft { stepper: SplitOperatorFft },
}

fn build_stepper(plan: &PropagationPlan, backend: Backend, with_noise: bool) -> Result<Stepper> {
    let grid = &plan.grid;
    match backend {
        Backend::Circuit => {
            let decomp = decompose_diagonal(&plan.potential)?;
            let circuit = trotter_step_circuit(grid, &decomp, plan.mu_au(), plan.dt_au);
            let noise = match (with_noise, plan.noise) {
                (true, Some(n)) => Some((n.p1, n.p2, ChaCha8Rng::seed_from_u64(n.seed))),
                _ => None,
            };
            Ok(Stepper::Circuit { circuit, noise })
        }
        Backend::DenseTrotter => {
            if grid.n_qubits > MAX_DENSE_QUBITS {
                return Err(Error::QubitCount {
                    n: grid.n_qubits,
                    min: 1,
                    max: MAX_DENSE_QUBITS,
                });
            }
            Ok(Stepper::Dense {
                u: dense::trotter_step_matrix(grid, &plan.potential, plan.mu_au(), plan.dt_au),
            })
        }
        Backend::FftOracle => Ok(Stepper::Fft {
            stepper: SplitOperatorFft::new(grid, &plan.potential, plan.mu_au(), plan.dt_au),
        }),
    }
}

impl Stepper {
    fn advance(&mut self, n_qubits: usize, psi: &mut Vec<Complex64>) -> Result<()> {
        match self {
            Stepper::Circuit { circuit, noise } => {
                let mut state = StateVector { n_qubits, amplitudes: std::mem::take(psi) };
                match noise {
                    Some((p1, p2, rng)) => apply_circuit_noisy(&mut state, circuit, *p1, *p2, rng)?,
                    None => apply_circuit(&mut state, circuit)?,
                }
                *psi = state.amplitudes;
            }
            Stepper::Dense { u } => *psi = dense::apply_matrix(u, psi),
            Stepper::Fft { stepper } => stepper.step(psi),
        }
        Ok(())
    }
}

/// Evolve `initial` for `n_steps` steps and record observables after every
/// step, plus the exact t=0 snapshot (`n_steps + 1` entries total). State
/// preparation is exact amplitude loading on every backend; shot sampling,
/// when requested, applies to the post-step measurements.
pub fn propagate(plan: &PropagationPlan, initial: &WavePacket) -> Result<Vec<ObservableSnapshot>> {
    plan.validate(initial)?;
    let grid = plan.grid;
    let mut stepper = build_stepper(plan, plan.backend, true)?;
    let mut psi = initial.amplitudes.clone();
    let mut snapshots = Vec::with_capacity(plan.n_steps + 1);
    snapshots.push(ObservableSnapshot::measure(0, 0.0, initial));
    for step in 1..=plan.n_steps {
        stepper.advance(grid.n_qubits, &mut psi)?;
        let density = match plan.shots {
            Some(shots) => {
                let state = StateVector { n_qubits: grid.n_qubits, amplitudes: psi.clone() };
                sample_shots(&state, shots, plan.seed.wrapping_add(step as u64))
                    .frequencies(grid.m_points)
            }
            None => psi.iter().map(|a| a.norm_sqr()).collect(),
        };
        snapshots.push(ObservableSnapshot::from_density(
            step,
            step as f64 * plan.dt_au,
            &grid,
            density,
        ));
    }
    Ok(snapshots)
}

/// Noise-free, shot-free state trajectory (t=0 first) on an explicit backend.
/// Noise-free amplitude trajectory on the chosen backend: the initial state
/// plus one entry per step (`n_steps + 1` total).
pub fn run_states(
    plan: &PropagationPlan,
    initial: &WavePacket,
    backend: Backend,
) -> Result<Vec<Vec<Complex64>>> {
    let mut stepper = build_stepper(plan, backend, false)?;
    let mut psi = initial.amplitudes.clone();
    let mut states = Vec::with_capacity(plan.n_steps + 1);
    states.push(psi.clone());
    for _ in 0..plan.n_steps {
        stepper.advance(plan.grid.n_qubits, &mut psi)?;
        states.push(psi.clone());
    }
    Ok(states)
}

/// Per-step max amplitude deviations (up to global phase), circuit vs dense
/// and dense vs FFT. Index 0 is the shared initial state (deviation 0).
#[derive(Debug, Clone)]
pub struct BackendComparison {
    pub circuit_vs_dense: Vec<f64>,
    pub dense_vs_fft: Vec<f64>,
}

impl BackendComparison {
    pub fn max_deviation(&self) -> f64 {
        self.circuit_vs_dense
            .iter()
            .chain(&self.dense_vs_fft)
            .copied()
            .fold(0.0, f64::max)
    }
}

pub fn compare_backends(plan: &PropagationPlan, initial: &WavePacket) -> Result<BackendComparison> {
    plan.validate(initial)?;
    if plan.noise.is_some() || plan.shots.is_some() {
        return Err(Error::Config(
            "backend comparison requires a noise-free, shot-free plan".to_string(),
        ));
    }
    let circuit = run_states(plan, initial, Backend::Circuit)?;
    let dense_states = run_states(plan, initial, Backend::DenseTrotter)?;
    let fft = run_states(plan, initial, Backend::FftOracle)?;
    let pairwise = |a: &[Vec<Complex64>], b: &[Vec<Complex64>]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| dense::vector_deviation_up_to_phase(x, y))
            .collect::<Vec<f64>>()
    };
    Ok(BackendComparison {
        circuit_vs_dense: pairwise(&circuit, &dense_states),
        dense_vs_fft: pairwise(&dense_states, &fft),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct ConvergencePoint {
    pub dt_au: f64,
    pub n_steps: usize,
    /// Phase-aligned L2 distance of the final state from the exact one.
    pub error: f64,
}

/// Number of dt-halvings in the convergence ladder.
const CONVERGENCE_LEVELS: u32 = 4;

/// Final-state error against an exact propagator over a dt-halving ladder at
/// fixed total time: entry k uses `dt/2^k` and `n_steps*2^k`. For a
/// first-order split the error halves with dt; it vanishes when the kinetic
/// and potential terms commute.
pub fn trotter_convergence(
    plan: &PropagationPlan,
    initial: &WavePacket,
    exact_reference: &DMatrix<Complex64>,
) -> Result<Vec<ConvergencePoint>> {
    plan.validate(initial)?;
    let m = plan.grid.m_points;
    if exact_reference.nrows() != m || exact_reference.ncols() != m {
        return Err(Error::DimensionMismatch { expected: m, got: exact_reference.nrows() });
    }
    let exact_final = dense::apply_matrix(exact_reference, &initial.amplitudes);
    let mut points = Vec::new();
    for k in 0..CONVERGENCE_LEVELS {
        let mut refined = plan.clone();
        refined.dt_au = plan.dt_au / f64::from(1u32 << k);
        refined.n_steps = plan.n_steps << k;
        let states = run_states(&refined, initial, refined.backend)?;
        points.push(ConvergencePoint {
            dt_au: refined.dt_au,
            n_steps: refined.n_steps,
            error: dense::l2_error_up_to_phase(states.last().expect("non-empty"), &exact_final),
        });
    }
    Ok(points)
}
