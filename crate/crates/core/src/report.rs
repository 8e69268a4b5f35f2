//! Depth-scaling report: one Trotter step compiled along both routes — the
//! brute-force general Pauli decomposition of the whole Hamiltonian versus
//! the diagonal Z-string + QFT construction — transpiled to a common target
//! and measured by circuit depth.

use crate::circuit::{full_hamiltonian_step_circuit, trotter_step_circuit};
use crate::dense::hamiltonian_matrix;
use crate::error::{Error, Result};
use crate::pauli::decompose_diagonal;
use crate::scenario::{build_potential, default_config, ScenarioKind};
use crate::transpile::{transpile, TranspileTarget};

#[derive(Debug, Clone, Copy)]
pub struct DepthRow {
    pub n_qubits: usize,
    pub depth_full: usize,
    pub depth_diagonal_qft: usize,
}

#[derive(Debug, Clone)]
pub struct DepthReport {
    /// `#`-prefixed provenance lines emitted above the CSV header.
    pub metadata: Vec<String>,
    pub rows: Vec<DepthRow>,
}

impl DepthReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in &self.metadata {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("n,depth_full,depth_diagonal_qft\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                row.n_qubits, row.depth_full, row.depth_diagonal_qft
            ));
        }
        out
    }
}

/// Transpiled depth of one split step for each register size in
/// `n_min..=n_max`, compiled both ways from the scenario's Hamiltonian.
/// The full route exponentiates every general Pauli term of `H = T + V`
/// (O(4^n) terms), the diagonal route is the one used for propagation
/// (O(2^n) Z-strings plus two QFTs); both are first-order steps of the same
/// Hamiltonian. Capped at n_max = 7 by the full decomposition's cost.
pub fn depth_report(
    n_min: usize,
    n_max: usize,
    target: &TranspileTarget,
    kind: ScenarioKind,
) -> Result<DepthReport> {
    if n_min < 2 || n_max > 7 || n_min > n_max {
        return Err(Error::Config(format!(
            "depth report range must satisfy 2 <= n_min <= n_max <= 7, got {n_min}..={n_max}"
        )));
    }
    let mut rows = Vec::new();
    let mut dt_au = 0.0;
    for n in n_min..=n_max {
        let config = default_config(kind, n)?;
        dt_au = config.dt_au;
        let grid = config.grid()?;
        let potential = build_potential(&config, &grid);
        let mu_au = config.mu_amu * crate::AMU_TO_ME;

        let decomp = decompose_diagonal(&potential)?;
        let diagonal = trotter_step_circuit(&grid, &decomp, mu_au, config.dt_au);

        let h = hamiltonian_matrix(&grid, &potential, mu_au);
        let full = full_hamiltonian_step_circuit(&h, config.dt_au)?;

        rows.push(DepthRow {
            n_qubits: n,
            depth_full: transpile(&full, target)?.depth(),
            depth_diagonal_qft: transpile(&diagonal, target)?.depth(),
        });
    }
    let metadata = vec![
        format!("scenario={kind}"),
        format!("dt_au={dt_au}"),
        format!(
            "target={} basis={} coupling=linear-chain",
            target.label,
            target.basis_gates.join("+")
        ),
        "depth_full: every general Pauli term of H exponentiated and transpiled".to_string(),
        "depth_diagonal_qft: Z-string potential phases + QFT-conjugated kinetic phases".to_string(),
    ];
    Ok(DepthReport { metadata, rows })
}
