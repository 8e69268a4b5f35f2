//! Circuit IR and the builders that compile split-operator steps to gates.

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::pauli::{decompose_diagonal, decompose_full, DiagonalDecomposition};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Gate set of the IR. Angles are radians. Unitaries:
///
/// * `H` = (1/sqrt2)[[1,1],[1,-1]]
/// * `X` = [[0,1],[1,0]]
/// * `Sx` = 0.5[[1+i,1-i],[1-i,1+i]]  (square root of X; Sx^2 = X)
/// * `Rz(t)` = diag(e^{-it/2}, e^{+it/2})
/// * `Phase(t)` = diag(1, e^{it})
/// * `CPhase(t)` = diag(1,1,1,e^{it})  (symmetric in its two qubits)
/// * `Cnot` flips `target` when `control` is 1
/// * `Cz` = diag(1,1,1,-1)
/// * `Swap` exchanges the two qubits
/// * `GlobalPhase(t)` = e^{it} * I  (touches no qubit; depth 0)
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H { q: usize },
    X { q: usize },
    Sx { q: usize },
    Rz { q: usize, theta: f64 },
    Phase { q: usize, theta: f64 },
    CPhase { control: usize, target: usize, theta: f64 },
    Cnot { control: usize, target: usize },
    Cz { a: usize, b: usize },
    Swap { a: usize, b: usize },
    GlobalPhase { theta: f64 },
}

impl Gate {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Gate::H { .. } => "H",
            Gate::X { .. } => "X",
            Gate::Sx { .. } => "SX",
            Gate::Rz { .. } => "RZ",
            Gate::Phase { .. } => "PHASE",
            Gate::CPhase { .. } => "CPHASE",
            Gate::Cnot { .. } => "CNOT",
            Gate::Cz { .. } => "CZ",
            Gate::Swap { .. } => "SWAP",
            Gate::GlobalPhase { .. } => "GLOBAL_PHASE",
        }
    }

    /// Qubits the gate acts on (none for a global phase).
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H { q } | Gate::X { q } | Gate::Sx { q } | Gate::Rz { q, .. } | Gate::Phase { q, .. } => vec![q],
            Gate::CPhase { control, target, .. } | Gate::Cnot { control, target } => vec![control, target],
            Gate::Cz { a, b } | Gate::Swap { a, b } => vec![a, b],
            Gate::GlobalPhase { .. } => vec![],
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match *self {
            Gate::Rz { theta, .. }
            | Gate::Phase { theta, .. }
            | Gate::CPhase { theta, .. }
            | Gate::GlobalPhase { theta } => Some(theta),
            _ => None,
        }
    }

    /// Adjoint gate, when expressible in the same gate set (`Sx` is not).
    pub fn adjoint(&self) -> Option<Gate> {
        match *self {
            Gate::H { .. } | Gate::X { .. } | Gate::Cnot { .. } | Gate::Cz { .. } | Gate::Swap { .. } => Some(*self),
            Gate::Rz { q, theta } => Some(Gate::Rz { q, theta: -theta }),
            Gate::Phase { q, theta } => Some(Gate::Phase { q, theta: -theta }),
            Gate::CPhase { control, target, theta } => Some(Gate::CPhase { control, target, theta: -theta }),
            Gate::GlobalPhase { theta } => Some(Gate::GlobalPhase { theta: -theta }),
            Gate::Sx { .. } => None,
        }
    }

    fn serialize(&self) -> String {
        let qubits = self.qubits();
        let qs = qubits.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",");
        match (qs.is_empty(), self.theta()) {
            (false, Some(t)) => format!("{} {};theta={}", self.kind_name(), qs, t),
            (false, None) => format!("{} {}", self.kind_name(), qs),
            (true, Some(t)) => format!("{};theta={}", self.kind_name(), t),
            (true, None) => self.kind_name().to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
    pub label: String,
}

impl Circuit {
    pub fn new(n_qubits: usize, label: impl Into<String>) -> Self {
        Self { n_qubits, gates: Vec::new(), label: label.into() }
    }

    /// Append a gate. Invalid qubit indices are construction bugs, not
    /// runtime conditions, so this asserts.
    pub fn push(&mut self, gate: Gate) {
        let qs = gate.qubits();
        for &q in &qs {
            assert!(q < self.n_qubits, "gate {:?} out of range for {} qubits", gate, self.n_qubits);
        }
        if qs.len() == 2 {
            assert_ne!(qs[0], qs[1], "two-qubit gate with identical qubits: {gate:?}");
        }
        self.gates.push(gate);
    }

    pub fn extend(&mut self, other: &Circuit) {
        assert_eq!(self.n_qubits, other.n_qubits);
        self.gates.extend_from_slice(&other.gates);
    }

    /// Reverse-order adjoint, if every gate has one in the gate set.
    pub fn inverse(&self) -> Option<Circuit> {
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in self.gates.iter().rev() {
            gates.push(g.adjoint()?);
        }
        Some(Circuit { n_qubits: self.n_qubits, gates, label: format!("{}-inverse", self.label) })
    }

    /// Longest dependency chain of gates sharing qubits (ASAP layering);
    /// global phases contribute nothing.
    pub fn depth(&self) -> usize {
        let mut watermark = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for gate in &self.gates {
            let qs = gate.qubits();
            if qs.is_empty() {
                continue;
            }
            let layer = 1 + qs.iter().map(|&q| watermark[q]).max().unwrap();
            for q in qs {
                watermark[q] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    pub fn gate_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut counts = BTreeMap::new();
        for g in &self.gates {
            *counts.entry(g.kind_name()).or_insert(0) += 1;
        }
        counts
    }

    /// Line-oriented text form: `qubits=<n>` header, then one gate per line
    /// as `KIND q0[,q1][;theta=<radians>]`.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits={}\n", self.n_qubits);
        for g in &self.gates {
            out.push_str(&g.serialize());
            out.push('\n');
        }
        out
    }
}

/// QFT on `n` qubits, little-endian: `|j> -> (1/sqrt M) sum_k exp(+2*pi*i*j*k/M) |k>`.
/// H + controlled-phase template plus an explicit terminal SWAP layer, so the
/// gate count n(n+1)/2 + floor(n/2) reflects what hardware would run.
pub fn qft_circuit(n: usize) -> Circuit {
    let mut c = Circuit::new(n, format!("qft-{n}"));
    for q in (0..n).rev() {
        c.push(Gate::H { q });
        for p in (0..q).rev() {
            c.push(Gate::CPhase { control: p, target: q, theta: PI / (1 << (q - p)) as f64 });
        }
    }
    for i in 0..n / 2 {
        c.push(Gate::Swap { a: i, b: n - 1 - i });
    }
    c
}

/// Exact adjoint of [`qft_circuit`]: reversed gate order, negated angles.
pub fn inverse_qft_circuit(n: usize) -> Circuit {
    let mut c = qft_circuit(n).inverse().expect("QFT gates all have adjoints");
    c.label = format!("iqft-{n}");
    c
}

/// `exp(-i * angle * P)` for the Z-string `P` selected by `z_mask`: a CNOT
/// chain folds the masked parity onto the highest masked qubit, RZ(2*angle)
/// applies the phase pair, and the chain unwinds. 2(w-1) CNOTs + 1 RZ.
pub fn z_string_exponential(z_mask: usize, angle: f64, n: usize) -> Result<Circuit> {
    if z_mask == 0 {
        return Err(Error::EmptyMask);
    }
    if z_mask >= (1 << n) {
        return Err(Error::MaskOutOfRange { mask: z_mask, n });
    }
    let bits: Vec<usize> = (0..n).filter(|b| z_mask >> b & 1 == 1).collect();
    let target = *bits.last().unwrap();
    let mut c = Circuit::new(n, format!("exp-z-{z_mask:#x}"));
    for w in bits.windows(2) {
        c.push(Gate::Cnot { control: w[0], target: w[1] });
    }
    c.push(Gate::Rz { q: target, theta: 2.0 * angle });
    for w in bits.windows(2).rev() {
        c.push(Gate::Cnot { control: w[0], target: w[1] });
    }
    Ok(c)
}

/// Compile `diag(exp(-i * V_m * dt))` from a Z-string decomposition of `V`.
/// The identity term becomes a global phase; the rest are commuting Z-string
/// exponentials in ascending mask order, so the result is exact (the only
/// Trotter error in a full step comes from splitting V against T).
pub fn diagonal_phase_circuit(decomp: &DiagonalDecomposition, dt: f64) -> Circuit {
    let n = decomp.n_qubits;
    let mut c = Circuit::new(n, "diagonal-phase");
    for term in &decomp.terms {
        if term.z_mask == 0 {
            c.push(Gate::GlobalPhase { theta: -term.coefficient * dt });
        } else {
            let sub = z_string_exponential(term.z_mask, term.coefficient * dt, n)
                .expect("decomposition masks are valid");
            c.extend(&sub);
        }
    }
    c
}

/// Kinetic sub-step `exp(-i T dt)`: QFT into the momentum basis, diagonal
/// phases of `T_j = p_j^2 / (2 mu)` on the FFT-ordered momentum grid, QFT back.
/// `mu_au` is the mass in electron masses.
pub fn kinetic_step_circuit(grid: &SpatialGrid, mu_au: f64, dt: f64) -> Circuit {
    let kinetic: Vec<f64> = grid.momenta().iter().map(|p| p * p / (2.0 * mu_au)).collect();
    let decomp = decompose_diagonal(&kinetic).expect("kinetic diagonal is finite, power-of-two length");
    let n = grid.n_qubits;
    let mut c = Circuit::new(n, "kinetic-step");
    c.extend(&qft_circuit(n));
    c.extend(&diagonal_phase_circuit(&decomp, dt));
    c.extend(&inverse_qft_circuit(n));
    c
}

/// One first-order split step: potential phases first, then the kinetic
/// sub-step (matrix order `U = U_kin * U_pot`).
pub fn trotter_step_circuit(
    grid: &SpatialGrid,
    potential_decomp: &DiagonalDecomposition,
    mu_au: f64,
    dt: f64,
) -> Circuit {
    let n = grid.n_qubits;
    let mut c = Circuit::new(n, "trotter-step");
    c.extend(&diagonal_phase_circuit(potential_decomp, dt));
    c.extend(&kinetic_step_circuit(grid, mu_au, dt));
    c
}

/// Brute-force route: one exponential per general Pauli term of the full
/// Hamiltonian. X/Y tensor factors are rotated into the Z basis (H for X,
/// S^dag then H for Y), the usual CNOT ladder + RZ applies the phase, and the
/// basis change unwinds. Terms do not commute, so this is itself a product
/// approximation of `exp(-i H dt)` — it exists to measure circuit cost, not
/// to win on accuracy.
pub fn full_hamiltonian_step_circuit(h_matrix: &DMatrix<Complex64>, dt: f64) -> Result<Circuit> {
    let terms = decompose_full(h_matrix)?;
    let n = h_matrix.nrows().trailing_zeros() as usize;
    let mut c = Circuit::new(n, "full-pauli-step");
    for term in &terms {
        let support = term.x_mask | term.z_mask;
        let coeff = term.coefficient.re;
        if support == 0 {
            c.push(Gate::GlobalPhase { theta: -coeff * dt });
            continue;
        }
        let mut pre = Vec::new();
        for q in 0..n {
            let x = term.x_mask >> q & 1 == 1;
            let z = term.z_mask >> q & 1 == 1;
            match (x, z) {
                (true, false) => pre.push(Gate::H { q }),
                (true, true) => {
                    pre.push(Gate::Phase { q, theta: -PI / 2.0 });
                    pre.push(Gate::H { q });
                }
                _ => {}
            }
        }
        for g in &pre {
            c.push(*g);
        }
        c.extend(&z_string_exponential(support, coeff * dt, n).expect("support is non-zero"));
        for g in pre.iter().rev() {
            c.push(g.adjoint().expect("basis-change gates have adjoints"));
        }
    }
    Ok(c)
}
