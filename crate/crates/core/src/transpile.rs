//! Lowering to a restricted hardware-style gate set on a coupling map.
//!
//! The stock target ("heron-like") is a `{CZ, RZ, SX, X}` basis on a linear
//! qubit chain. It is an explicit stand-in for a vendor backend, used for
//! depth accounting, not a model of any real device's transpiler.

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone)]
pub struct TranspileTarget {
    /// Allowed gate kinds, a subset of {"CZ", "RZ", "SX", "X"}.
    pub basis_gates: Vec<String>,
    /// Undirected edges; must form a connected graph over the qubits used.
    pub coupling_map: Vec<(usize, usize)>,
    /// Drop the accumulated global-phase bookkeeping gate from the output
    /// (hardware-realism depth counts; breaks exact-equality checks).
    pub drop_global_phase: bool,
    pub label: String,
}

impl TranspileTarget {
    /// Default target: full `{CZ, RZ, SX, X}` basis on the chain 0-1-...-(n-1).
    pub fn linear(n_qubits: usize) -> Self {
        Self {
            basis_gates: ["CZ", "RZ", "SX", "X"].map(String::from).to_vec(),
            coupling_map: (1..n_qubits).map(|i| (i - 1, i)).collect(),
            drop_global_phase: false,
            label: "heron-like".to_string(),
        }
    }

    fn has(&self, kind: &str) -> bool {
        self.basis_gates.iter().any(|g| g == kind)
    }

    /// Number of qubits the coupling map covers (lone qubit 0 when empty).
    pub fn n_qubits(&self) -> usize {
        self.coupling_map.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(1)
    }

    fn adjacency(&self, n: usize) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.coupling_map {
            if a < n && b < n && a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }
}

/// Shortest path between two qubits by BFS (ascending-neighbor tie-break, so
/// routing is deterministic).
fn bfs_path(adj: &[Vec<usize>], from: usize, to: usize) -> Option<Vec<usize>> {
    if from == to {
        return Some(vec![from]);
    }
    let mut prev = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::from([from]);
    prev[from] = from;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if prev[v] == usize::MAX {
                prev[v] = u;
                if v == to {
                    let mut path = vec![to];
                    let mut cur = to;
                    while cur != from {
                        cur = prev[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(v);
            }
        }
    }
    None
}

/// Rebuild a two-qubit gate with its qubit slots replaced.
fn with_qubits(gate: &Gate, a: usize, b: usize) -> Gate {
    match *gate {
        Gate::CPhase { theta, .. } => Gate::CPhase { control: a, target: b, theta },
        Gate::Cnot { .. } => Gate::Cnot { control: a, target: b },
        Gate::Cz { .. } => Gate::Cz { a, b },
        Gate::Swap { .. } => Gate::Swap { a, b },
        ref g => panic!("not a two-qubit gate: {}", g.kind_name()),
    }
}

/// Rebuild a one-qubit gate on a new wire.
fn with_one_qubit(gate: &Gate, q: usize) -> Gate {
    match *gate {
        Gate::H { .. } => Gate::H { q },
        Gate::X { .. } => Gate::X { q },
        Gate::Sx { .. } => Gate::Sx { q },
        Gate::Rz { theta, .. } => Gate::Rz { q, theta },
        Gate::Phase { theta, .. } => Gate::Phase { q, theta },
        ref g => panic!("not a one-qubit gate: {}", g.kind_name()),
    }
}

/// Logical-to-physical qubit assignment maintained during routing.
struct Layout {
    /// `to_physical[logical] = physical`
    to_physical: Vec<usize>,
    /// `to_logical[physical] = logical`
    to_logical: Vec<usize>,
}

impl Layout {
    fn identity(n: usize) -> Self {
        Self { to_physical: (0..n).collect(), to_logical: (0..n).collect() }
    }

    /// Exchange the logical qubits sitting on physical wires `pa` and `pb`.
    fn swap_physical(&mut self, pa: usize, pb: usize) {
        let (la, lb) = (self.to_logical[pa], self.to_logical[pb]);
        self.to_logical.swap(pa, pb);
        self.to_physical[la] = pb;
        self.to_physical[lb] = pa;
    }

    fn is_identity(&self) -> bool {
        self.to_physical.iter().enumerate().all(|(l, p)| l == *p)
    }
}

fn ordered_swap(a: usize, b: usize) -> Gate {
    Gate::Swap { a: a.min(b), b: a.max(b) }
}

/// Routing pass: make every two-qubit gate act on a coupled pair. The first
/// operand is swapped along a shortest path until it neighbors the second,
/// and the resulting logical-to-physical permutation persists (later gates
/// are remapped through it), so routing work is shared; one restoring swap
/// chain at the end brings every qubit home, keeping the routed circuit's
/// unitary exactly equal to the input's.
fn route(circuit: &Circuit, target: &TranspileTarget) -> Result<Circuit> {
    let n = circuit.n_qubits;
    let adj = target.adjacency(n);
    let mut layout = Layout::identity(n);
    let mut out = Circuit::new(n, &circuit.label);
    let no_path = |a: usize, b: usize| {
        Error::Config(format!("coupling map does not connect qubits {a} and {b}"))
    };
    for gate in &circuit.gates {
        // A SWAP is a wire permutation, so track it in the layout instead of
        // moving any state. The restoration pass below emits whatever net
        // permutation survives; the mirrored reversal layers of a QFT /
        // inverse-QFT pair cancel here without a single physical gate.
        if let Gate::Swap { a, b } = *gate {
            let (pa, pb) = (layout.to_physical[a], layout.to_physical[b]);
            layout.swap_physical(pa, pb);
            continue;
        }
        let qs = gate.qubits();
        match qs.len() {
            0 => out.push(*gate),
            1 => out.push(with_one_qubit(gate, layout.to_physical[qs[0]])),
            _ => {
                let (mut pa, mut pb) = (layout.to_physical[qs[0]], layout.to_physical[qs[1]]);
                if !adj[pa].contains(&pb) {
                    // Walk the endpoints toward each other along the shortest
                    // path; splitting the movement keeps the layout closer to
                    // identity than dragging one qubit the whole way.
                    let path = bfs_path(&adj, pa, pb).ok_or_else(|| no_path(pa, pb))?;
                    let moves = path.len() - 2;
                    let steps_a = moves / 2;
                    for i in 0..steps_a {
                        out.push(ordered_swap(path[i], path[i + 1]));
                        layout.swap_physical(path[i], path[i + 1]);
                    }
                    for i in 0..moves - steps_a {
                        let hi = path.len() - 1 - i;
                        out.push(ordered_swap(path[hi], path[hi - 1]));
                        layout.swap_physical(path[hi], path[hi - 1]);
                    }
                    pa = path[steps_a];
                    pb = path[steps_a + 1];
                }
                out.push(with_qubits(gate, pa, pb));
            }
        }
    }
    // Send each logical qubit back to its own wire, lowest physical wire
    // first. On a chain this is a selection sort and always terminates; the
    // pass counter guards exotic coupling graphs.
    let mut passes = 0;
    while !layout.is_identity() {
        passes += 1;
        if passes > n * n {
            return Err(Error::Config(
                "routing could not restore the qubit order on this coupling map".to_string(),
            ));
        }
        let p = (0..n).find(|&p| layout.to_logical[p] != p).expect("not identity");
        let from = layout.to_physical[p];
        let path = bfs_path(&adj, from, p).ok_or_else(|| no_path(from, p))?;
        for w in path.windows(2) {
            out.push(ordered_swap(w[0], w[1]));
            layout.swap_physical(w[0], w[1]);
        }
    }
    Ok(out)
}

/// Expand one gate into basis gates, accumulating global phase exactly.
fn lower_into(gate: &Gate, target: &TranspileTarget, out: &mut Vec<Gate>, phase: &mut f64) -> Result<()> {
    let kind = gate.kind_name();
    if target.has(kind) {
        out.push(*gate);
        return Ok(());
    }
    match *gate {
        Gate::GlobalPhase { theta } => *phase += theta,
        // H = e^{-i pi/4} RZ(pi/2) SX RZ(pi/2)
        Gate::H { q } => {
            for g in [
                Gate::Rz { q, theta: FRAC_PI_2 },
                Gate::Sx { q },
                Gate::Rz { q, theta: FRAC_PI_2 },
            ] {
                lower_into(&g, target, out, phase)?;
            }
            *phase += std::f64::consts::FRAC_PI_4;
        }
        Gate::X { q } => {
            // X is SX^2 when not native.
            if target.has("SX") {
                lower_into(&Gate::Sx { q }, target, out, phase)?;
                lower_into(&Gate::Sx { q }, target, out, phase)?;
            } else {
                return Err(Error::MissingBasisGate("X"));
            }
        }
        // PHASE(t) = e^{i t/2} RZ(t)
        Gate::Phase { q, theta } => {
            lower_into(&Gate::Rz { q, theta }, target, out, phase)?;
            *phase += theta / 2.0;
        }
        // Fixed two-CZ template, the Hadamard-conjugated CNOT pair of the
        // textbook construction with the single-qubit runs pre-merged:
        // CPHASE(t) = e^{i(t/4+pi)} RZ_a(t/2) *
        //   [RZ SX RZ(pi) CZ SX RZ(pi-t/2) SX RZ(pi) CZ SX RZ]_b
        // (wire-b gates listed in application order; outer RZ angles
        // (pi+t)/2 at the end, pi/2 at the start).
        Gate::CPhase { control, target: tq, theta } => {
            if !(target.has("CZ") && target.has("SX") && target.has("RZ")) {
                return Err(Error::MissingBasisGate(if target.has("CZ") { "SX" } else { "CZ" }));
            }
            for g in [
                Gate::Rz { q: tq, theta: FRAC_PI_2 },
                Gate::Rz { q: control, theta: theta / 2.0 },
                Gate::Sx { q: tq },
                Gate::Rz { q: tq, theta: PI },
                Gate::Cz { a: control, b: tq },
                Gate::Sx { q: tq },
                Gate::Rz { q: tq, theta: PI - theta / 2.0 },
                Gate::Sx { q: tq },
                Gate::Rz { q: tq, theta: PI },
                Gate::Cz { a: control, b: tq },
                Gate::Sx { q: tq },
                Gate::Rz { q: tq, theta: (PI + theta) / 2.0 },
            ] {
                out.push(g);
            }
            *phase += theta / 4.0 + PI;
        }
        // CNOT = (I x H) CZ (I x H); the inner RZ(pi/2) pair commutes through
        // the (diagonal) CZ and merges: e^{i pi/2} RZ(pi/2) SX RZ(pi) CZ SX RZ(pi/2).
        Gate::Cnot { control, target: tq } => {
            if !(target.has("CZ") && target.has("SX") && target.has("RZ")) {
                return Err(Error::MissingBasisGate(if target.has("CZ") { "SX" } else { "CZ" }));
            }
            for g in [
                Gate::Rz { q: tq, theta: FRAC_PI_2 },
                Gate::Sx { q: tq },
                Gate::Rz { q: tq, theta: PI },
                Gate::Cz { a: control, b: tq },
                Gate::Sx { q: tq },
                Gate::Rz { q: tq, theta: FRAC_PI_2 },
            ] {
                out.push(g);
            }
            *phase += FRAC_PI_2;
        }
        Gate::Swap { a, b } => {
            for g in [
                Gate::Cnot { control: a, target: b },
                Gate::Cnot { control: b, target: a },
                Gate::Cnot { control: a, target: b },
            ] {
                lower_into(&g, target, out, phase)?;
            }
        }
        Gate::Rz { .. } => return Err(Error::MissingBasisGate("RZ")),
        Gate::Sx { .. } => return Err(Error::MissingBasisGate("SX")),
        Gate::Cz { .. } => return Err(Error::MissingBasisGate("CZ")),
    }
    Ok(())
}

/// Route, then lower to the target basis. Output gates touch only coupled
/// pairs; unless `drop_global_phase` is set, a trailing GLOBAL_PHASE keeps
/// the dense unitary exactly equal to the input's.
pub fn transpile(circuit: &Circuit, target: &TranspileTarget) -> Result<Circuit> {
    let covered = target.n_qubits();
    if circuit.n_qubits > covered {
        return Err(Error::CircuitTooWide { circuit: circuit.n_qubits, target: covered });
    }
    let routed = route(circuit, target)?;
    let mut gates = Vec::new();
    let mut phase = 0.0;
    for gate in &routed.gates {
        lower_into(gate, target, &mut gates, &mut phase)?;
    }
    let mut out = Circuit::new(circuit.n_qubits, &format!("{}@{}", circuit.label, target.label));
    for g in gates {
        out.push(g);
    }
    if phase != 0.0 && !target.drop_global_phase {
        out.push(Gate::GlobalPhase { theta: phase });
    }
    Ok(out)
}
