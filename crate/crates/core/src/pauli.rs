//! Pauli decompositions.
//!
//! Diagonal operators split into at most `2^n` commuting Pauli-Z strings; an
//! arbitrary Hermitian matrix splits into up to `4^n` general Pauli strings
//! (kept only for the depth comparison of the two compilation routes).

use crate::error::{Error, Result};
use crate::fmt::sig12;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Coefficients below this magnitude are dropped from decompositions.
pub const PRUNE_EPSILON: f64 = 1e-14;

/// A Z-only Pauli string: bit `j` of `z_mask` set means Z acts on qubit `j`
/// (little-endian). Eigenvalue on basis state `|m>` is
/// `(-1)^popcount(z_mask & m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZStringTerm {
    pub z_mask: usize,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalDecomposition {
    pub n_qubits: usize,
    /// Unique masks, sorted ascending.
    pub terms: Vec<ZStringTerm>,
}

/// General Pauli string in symplectic encoding: per qubit, (x,z) bits select
/// I=(0,0), X=(1,0), Z=(0,1), Y=(1,1); the string is
/// `i^popcount(x&z) * X^x * Z^z`, which is Hermitian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralPauliTerm {
    pub x_mask: usize,
    pub z_mask: usize,
    pub coefficient: Complex64,
}

fn parity_sign(bits: usize) -> f64 {
    if bits.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// All `2^n` Z-string coefficients at once via an in-place Walsh-Hadamard
/// transform: `c_k = (1/M) * sum_m (-1)^popcount(k & m) V_m`, O(M log M).
pub fn decompose_diagonal(diag_values: &[f64]) -> Result<DiagonalDecomposition> {
    let m = diag_values.len();
    if !m.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(m));
    }
    if diag_values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n_qubits = m.trailing_zeros() as usize;

    let mut buf = diag_values.to_vec();
    let mut h = 1;
    while h < m {
        for base in (0..m).step_by(2 * h) {
            for j in base..base + h {
                let (a, b) = (buf[j], buf[j + h]);
                buf[j] = a + b;
                buf[j + h] = a - b;
            }
        }
        h *= 2;
    }

    let scale = 1.0 / m as f64;
    let terms = buf
        .iter()
        .enumerate()
        .filter_map(|(mask, &c)| {
            let coefficient = c * scale;
            (coefficient.abs() >= PRUNE_EPSILON).then_some(ZStringTerm { z_mask: mask, coefficient })
        })
        .collect();
    Ok(DiagonalDecomposition { n_qubits, terms })
}

/// Direct O(M) trace formula for one mask; the oracle for
/// [`decompose_diagonal`].
pub fn coefficient_bruteforce(z_mask: usize, diag_values: &[f64]) -> f64 {
    let m = diag_values.len();
    let sum: f64 = diag_values
        .iter()
        .enumerate()
        .map(|(i, &v)| parity_sign(z_mask & i) * v)
        .sum();
    sum / m as f64
}

/// Inverse of [`decompose_diagonal`]: `V_m = sum_k c_k (-1)^popcount(mask_k & m)`.
pub fn reconstruct_diagonal(decomp: &DiagonalDecomposition) -> Vec<f64> {
    let m = 1usize << decomp.n_qubits;
    let mut out = vec![0.0; m];
    for term in &decomp.terms {
        for (i, cell) in out.iter_mut().enumerate() {
            *cell += term.coefficient * parity_sign(term.z_mask & i);
        }
    }
    out
}

impl DiagonalDecomposition {
    /// Two-column table, one term per line (`0x<hex-mask> <coefficient>`),
    /// sorted by mask.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for term in &self.terms {
            out.push_str(&format!("{:#x} {}\n", term.z_mask, sig12(term.coefficient)));
        }
        out
    }
}

/// Full Pauli-basis split of a Hermitian matrix: up to `4^n` terms with
/// `c = Tr(P H) / 2^n`. Exists to price the brute-force compilation route;
/// capped at 7 qubits.
pub fn decompose_full(h_matrix: &DMatrix<Complex64>) -> Result<Vec<GeneralPauliTerm>> {
    let m = h_matrix.nrows();
    if h_matrix.ncols() != m {
        return Err(Error::DimensionMismatch { expected: m, got: h_matrix.ncols() });
    }
    if !m.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(m));
    }
    let n = m.trailing_zeros() as usize;
    if n > 7 {
        return Err(Error::QubitCount { n, min: 1, max: 7 });
    }
    let mut max_dev: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            max_dev = max_dev.max((h_matrix[(i, j)] - h_matrix[(j, i)].conj()).norm());
        }
    }
    if max_dev > 1e-10 {
        return Err(Error::NotHermitian { max_dev });
    }

    let mut terms = Vec::new();
    for x_mask in 0..m {
        for z_mask in 0..m {
            // Tr(P H) = i^popcount(x&z) * sum_k (-1)^popcount(z&k) * H[k, k^x]
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..m {
                sum += parity_sign(z_mask & k) * h_matrix[(k, k ^ x_mask)];
            }
            let c = Complex64::i().powu((x_mask & z_mask).count_ones()) * sum / m as f64;
            if c.norm() >= PRUNE_EPSILON {
                terms.push(GeneralPauliTerm { x_mask, z_mask, coefficient: c });
            }
        }
    }
    terms.sort_by_key(|t| (t.x_mask, t.z_mask));
    Ok(terms)
}

/// Dense matrix of one general Pauli string (test/oracle support):
/// `P|k> = i^popcount(x&z) * (-1)^popcount(z&k) |k^x>`.
pub fn pauli_term_matrix(x_mask: usize, z_mask: usize, n_qubits: usize) -> DMatrix<Complex64> {
    let m = 1usize << n_qubits;
    let phase = Complex64::i().powu((x_mask & z_mask).count_ones());
    let mut out = DMatrix::zeros(m, m);
    for k in 0..m {
        out[(k ^ x_mask, k)] = phase * parity_sign(z_mask & k);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_and_zero_potentials() {
        let d = decompose_diagonal(&[1.7; 8]).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert_eq!(d.terms[0].z_mask, 0);
        assert_abs_diff_eq!(d.terms[0].coefficient, 1.7);

        let d = decompose_diagonal(&[0.0; 4]).unwrap();
        assert!(d.terms.is_empty());
    }

    #[test]
    fn double_well_two_terms() {
        let d = decompose_diagonal(&[0.0, -6.0, 0.0, -6.0]).unwrap();
        assert_eq!(d.terms.len(), 2);
        assert_eq!((d.terms[0].z_mask, d.terms[0].coefficient), (0, -3.0));
        assert_eq!((d.terms[1].z_mask, d.terms[1].coefficient), (1, 3.0));
    }

    #[test]
    fn one_qubit_closed_form() {
        let (a, b) = (0.3, -1.9);
        let d = decompose_diagonal(&[a, b]).unwrap();
        assert_abs_diff_eq!(d.terms[0].coefficient, (a + b) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.terms[1].coefficient, (a - b) / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn bruteforce_examples() {
        assert_abs_diff_eq!(coefficient_bruteforce(0, &[2.0, 4.0, 6.0, 8.0]), 5.0);
        assert_abs_diff_eq!(coefficient_bruteforce(3, &[1.0, 0.0, 0.0, 1.0]), 0.5);
        assert_abs_diff_eq!(coefficient_bruteforce(1, &[5.0, 5.0]), 0.0);
    }

    #[test]
    fn fast_matches_bruteforce() {
        for n in 1..=5usize {
            let m = 1usize << n;
            let v: Vec<f64> = (0..m).map(|i| ((i * 37 + 11) % 17) as f64 - 6.5).collect();
            let d = decompose_diagonal(&v).unwrap();
            let mut by_mask = vec![0.0; m];
            for t in &d.terms {
                by_mask[t.z_mask] = t.coefficient;
            }
            for mask in 0..m {
                assert_abs_diff_eq!(
                    by_mask[mask],
                    coefficient_bruteforce(mask, &v),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn round_trip() {
        let v: Vec<f64> = (0..16).map(|i| (i as f64) * 0.31 - 2.0).collect();
        let d = decompose_diagonal(&v).unwrap();
        assert!(d.terms.len() <= 16);
        let back = reconstruct_diagonal(&d);
        for (orig, rec) in v.iter().zip(&back) {
            assert_abs_diff_eq!(orig, rec, epsilon = 1e-12);
        }
    }

    #[test]
    fn reconstruct_examples() {
        let d = DiagonalDecomposition {
            n_qubits: 2,
            terms: vec![
                ZStringTerm { z_mask: 0, coefficient: -3.0 },
                ZStringTerm { z_mask: 1, coefficient: 3.0 },
            ],
        };
        assert_eq!(reconstruct_diagonal(&d), vec![0.0, -6.0, 0.0, -6.0]);

        let empty = DiagonalDecomposition { n_qubits: 3, terms: vec![] };
        assert_eq!(reconstruct_diagonal(&empty), vec![0.0; 8]);

        let full_z = DiagonalDecomposition {
            n_qubits: 2,
            terms: vec![ZStringTerm { z_mask: 3, coefficient: 1.0 }],
        };
        assert_eq!(reconstruct_diagonal(&full_z), vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(decompose_diagonal(&[1.0, 2.0, 3.0]).is_err());
        assert!(decompose_diagonal(&[f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn table_format() {
        let d = decompose_diagonal(&[0.0, -6.0, 0.0, -6.0]).unwrap();
        assert_eq!(d.to_table(), "0x0 -3\n0x1 3\n");
    }

    #[test]
    fn full_identity_and_x() {
        let id = DMatrix::<Complex64>::identity(4, 4);
        let terms = decompose_full(&id).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!((terms[0].x_mask, terms[0].z_mask), (0, 0));
        assert_abs_diff_eq!(terms[0].coefficient.re, 1.0, epsilon = 1e-14);

        let x = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let terms = decompose_full(&x).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!((terms[0].x_mask, terms[0].z_mask), (1, 0));
        assert_abs_diff_eq!(terms[0].coefficient.re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn full_agrees_with_diagonal_path() {
        let v = [0.4, -1.2, 3.0, 0.7];
        let h = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            4,
            v.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        let full = decompose_full(&h).unwrap();
        let diag = decompose_diagonal(&v).unwrap();
        // Every full term must be Z-only and match its diagonal twin.
        assert_eq!(full.len(), diag.terms.len());
        for (f, d) in full.iter().zip(&diag.terms) {
            assert_eq!(f.x_mask, 0);
            assert_eq!(f.z_mask, d.z_mask);
            assert_abs_diff_eq!(f.coefficient.re, d.coefficient, epsilon = 1e-12);
            assert_abs_diff_eq!(f.coefficient.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn full_reconstruction_and_realness() {
        // Random Hermitian 8x8, fixed entries.
        let n = 3;
        let m = 1usize << n;
        let mut h = DMatrix::<Complex64>::zeros(m, m);
        let mut s = 1u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        for i in 0..m {
            for j in i..m {
                let re = next();
                let im = if i == j { 0.0 } else { next() };
                h[(i, j)] = Complex64::new(re, im);
                h[(j, i)] = Complex64::new(re, -im);
            }
        }
        let terms = decompose_full(&h).unwrap();
        let mut rebuilt = DMatrix::<Complex64>::zeros(m, m);
        for t in &terms {
            assert_abs_diff_eq!(t.coefficient.im, 0.0, epsilon = 1e-12);
            rebuilt += pauli_term_matrix(t.x_mask, t.z_mask, n) * t.coefficient;
        }
        for i in 0..m {
            for j in 0..m {
                assert!((rebuilt[(i, j)] - h[(i, j)]).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn full_rejects_non_hermitian() {
        let mut h = DMatrix::<Complex64>::identity(4, 4);
        h[(0, 1)] = Complex64::new(1.0, 0.0); // not mirrored
        assert!(decompose_full(&h).is_err());
    }
}
