//! Spatial discretization, wave-function encoding, and observables.
//!
//! A grid of `M = 2^n` points covers `[r_min, r_max)` with spacing
//! `dr = (r_max - r_min) / M`; point `m` sits at `r_m = r_min + m*dr` (the
//! right endpoint is excluded, keeping the conjugate momentum grid periodic).
//! Basis state `|m>` of the register holds amplitude `psi_m` directly,
//! little-endian: qubit 0 is the least significant bit of `m`.

use crate::error::{Error, Result};
use crate::fmt::sig12;
use num_complex::Complex64;

/// Statevector memory budget: 2^24 amplitudes (256 MiB) is the cap.
pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    pub n_qubits: usize,
    pub m_points: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub delta_r: f64,
}

pub fn make_grid(n_qubits: usize, r_min: f64, r_max: f64) -> Result<SpatialGrid> {
    if n_qubits < 1 || n_qubits > MAX_QUBITS {
        return Err(Error::QubitCount { n: n_qubits, min: 1, max: MAX_QUBITS });
    }
    if !(r_max > r_min) || !r_min.is_finite() || !r_max.is_finite() {
        return Err(Error::GridBounds { r_min, r_max });
    }
    let m_points = 1usize << n_qubits;
    Ok(SpatialGrid {
        n_qubits,
        m_points,
        r_min,
        r_max,
        delta_r: (r_max - r_min) / m_points as f64,
    })
}

impl SpatialGrid {
    pub fn point(&self, m: usize) -> f64 {
        self.r_min + m as f64 * self.delta_r
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.m_points).map(|m| self.point(m)).collect()
    }

    /// FFT-ordered momentum lattice: `p_j = 2*pi*j / (M*dr)` for `j < M/2`,
    /// `2*pi*(j - M) / (M*dr)` for `j >= M/2` (so `j = M/2` takes the
    /// negative branch `-pi/dr`).
    pub fn momenta(&self) -> Vec<f64> {
        let m = self.m_points;
        let scale = 2.0 * std::f64::consts::PI / (m as f64 * self.delta_r);
        (0..m)
            .map(|j| {
                if j < m / 2 {
                    scale * j as f64
                } else {
                    scale * (j as f64 - m as f64)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct WavePacket {
    pub grid: SpatialGrid,
    pub amplitudes: Vec<Complex64>,
}

impl WavePacket {
    pub fn from_amplitudes(grid: SpatialGrid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.m_points {
            return Err(Error::DimensionMismatch {
                expected: grid.m_points,
                got: amplitudes.len(),
            });
        }
        Ok(Self { grid, amplitudes })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Uniform-amplitude packet over the second quarter of the grid:
/// `psi_m = 2/sqrt(M)` for `M/4 <= m < M/2`, zero elsewhere.
pub fn init_step_packet(grid: &SpatialGrid) -> Result<WavePacket> {
    if grid.n_qubits < 2 {
        return Err(Error::PacketTooCoarse(grid.n_qubits));
    }
    let m = grid.m_points;
    let amp = 2.0 / (m as f64).sqrt();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); m];
    for cell in amplitudes.iter_mut().take(m / 2).skip(m / 4) {
        *cell = Complex64::new(amp, 0.0);
    }
    Ok(WavePacket { grid: *grid, amplitudes })
}

/// `<r> = sum_m r_m |psi_m|^2`
pub fn expectation_r(psi: &WavePacket) -> f64 {
    psi.amplitudes
        .iter()
        .enumerate()
        .map(|(m, a)| psi.grid.point(m) * a.norm_sqr())
        .sum()
}

/// `sigma = sqrt(<r^2> - <r>^2)`; round-off can push the radicand a hair
/// negative, which is clamped to zero.
pub fn width_sigma(psi: &WavePacket) -> f64 {
    let mut r1 = 0.0;
    let mut r2 = 0.0;
    for (m, a) in psi.amplitudes.iter().enumerate() {
        let r = psi.grid.point(m);
        let d = a.norm_sqr();
        r1 += r * d;
        r2 += r * r * d;
    }
    (r2 - r1 * r1).max(0.0).sqrt()
}

/// Population lost from the window `M/8 <= m < 5M/8` around the initial well:
/// `p = 1 - sum_window |psi_m|^2`. Window bounds use integer (floor) division,
/// so for M=4 the window is `[0, 2)`.
pub fn right_well_population(psi: &WavePacket) -> f64 {
    let m = psi.grid.m_points;
    let lo = m / 8;
    let hi = 5 * m / 8;
    let inside: f64 = psi.amplitudes[lo..hi].iter().map(|a| a.norm_sqr()).sum();
    (1.0 - inside).clamp(0.0, 1.0)
}

/// Split each source cell's probability equally over its `target_m / M` child
/// cells. Piecewise-constant replication is exactly probability-preserving
/// and invertible by block summation.
pub fn resample_to_common_grid(density: &[f64], target_m: usize) -> Result<Vec<f64>> {
    let source = density.len();
    if target_m < source || target_m % source != 0 || !(target_m / source).is_power_of_two() {
        return Err(Error::ResampleTarget { from: source, target: target_m });
    }
    let ratio = target_m / source;
    let mut out = Vec::with_capacity(target_m);
    for &d in density {
        let share = d / ratio as f64;
        out.extend(std::iter::repeat(share).take(ratio));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ObservableSnapshot {
    pub step_index: usize,
    pub time: f64,
    pub mean_r: f64,
    pub sigma: f64,
    pub norm: f64,
    /// `None` renders as NA; only the tunneling scenario reports it.
    pub right_well_population: Option<f64>,
    pub density: Vec<f64>,
}

impl ObservableSnapshot {
    pub fn measure(step_index: usize, time: f64, psi: &WavePacket) -> Self {
        Self::from_density(step_index, time, &psi.grid, psi.density())
    }

    /// Observables from a bare probability vector (shot-sampled histograms
    /// take this path; all four observables depend only on the density).
    pub fn from_density(step_index: usize, time: f64, grid: &SpatialGrid, density: Vec<f64>) -> Self {
        let mut r1 = 0.0;
        let mut r2 = 0.0;
        for (m, d) in density.iter().enumerate() {
            let r = grid.point(m);
            r1 += r * d;
            r2 += r * r * d;
        }
        let m = grid.m_points;
        let inside: f64 = density[m / 8..5 * m / 8].iter().sum();
        Self {
            step_index,
            time,
            mean_r: r1,
            sigma: (r2 - r1 * r1).max(0.0).sqrt(),
            norm: density.iter().sum(),
            right_well_population: Some((1.0 - inside).clamp(0.0, 1.0)),
            density,
        }
    }

    pub fn csv_header(m_points: usize) -> String {
        let mut header = String::from("step,time,mean_r,sigma,norm,right_well_population");
        for i in 0..m_points {
            header.push_str(&format!(",d{i}"));
        }
        header
    }

    /// One CSV row; floats carry 12 significant digits, NA for a missing
    /// right-well value.
    pub fn csv_row(&self) -> String {
        let well = match self.right_well_population {
            Some(p) => sig12(p),
            None => "NA".to_string(),
        };
        let mut row = format!(
            "{},{},{},{},{},{}",
            self.step_index,
            sig12(self.time),
            sig12(self.mean_r),
            sig12(self.sigma),
            sig12(self.norm),
            well
        );
        for d in &self.density {
            row.push(',');
            row.push_str(&sig12(*d));
        }
        row
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn delta_packet(grid: SpatialGrid, at: usize) -> WavePacket {
        let mut amps = vec![Complex64::new(0.0, 0.0); grid.m_points];
        amps[at] = Complex64::new(1.0, 0.0);
        WavePacket::from_amplitudes(grid, amps).unwrap()
    }

    #[test]
    fn grid_construction() {
        let g = make_grid(5, 0.0, 5.0).unwrap();
        assert_eq!(g.m_points, 32);
        assert_abs_diff_eq!(g.delta_r, 0.15625);
        assert_abs_diff_eq!(g.point(0), 0.0);
        assert_abs_diff_eq!(g.point(31), 4.84375);

        let g = make_grid(2, 0.0, 4.0).unwrap();
        assert_eq!(g.points(), vec![0.0, 1.0, 2.0, 3.0]);

        let g = make_grid(1, 0.0, 2.0).unwrap();
        assert_abs_diff_eq!(g.delta_r, 1.0);

        assert!(make_grid(0, 0.0, 1.0).is_err());
        assert!(make_grid(25, 0.0, 1.0).is_err());
        assert!(make_grid(3, 1.0, 1.0).is_err());
        assert!(make_grid(3, 2.0, -1.0).is_err());
    }

    #[test]
    fn momenta_convention() {
        // M=4 on [0,4]: dr=1, p = (0, pi/2, -pi, -pi/2); j=M/2 is negative.
        let g = make_grid(2, 0.0, 4.0).unwrap();
        let p = g.momenta();
        let pi = std::f64::consts::PI;
        assert_abs_diff_eq!(p[0], 0.0);
        assert_abs_diff_eq!(p[1], pi / 2.0);
        assert_abs_diff_eq!(p[2], -pi);
        assert_abs_diff_eq!(p[3], -pi / 2.0);
    }

    #[test]
    fn step_packet_amplitudes() {
        let g = make_grid(2, 0.0, 4.0).unwrap();
        let psi = init_step_packet(&g).unwrap();
        let re: Vec<f64> = psi.amplitudes.iter().map(|a| a.re).collect();
        assert_eq!(re, vec![0.0, 1.0, 0.0, 0.0]);

        let g = make_grid(3, 0.0, 4.0).unwrap();
        let psi = init_step_packet(&g).unwrap();
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        for (m, a) in psi.amplitudes.iter().enumerate() {
            let expect = if (2..4).contains(&m) { inv_sqrt2 } else { 0.0 };
            assert_abs_diff_eq!(a.re, expect, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-12);

        let g1 = make_grid(1, 0.0, 2.0).unwrap();
        assert!(init_step_packet(&g1).is_err());
    }

    #[test]
    fn step_packet_width_on_stock_free_grid() {
        // 32 points on [0,5]: occupied cells 8..=15, sigma = dr*sqrt(63/12).
        let g = make_grid(5, 0.0, 5.0).unwrap();
        let psi = init_step_packet(&g).unwrap();
        assert_abs_diff_eq!(expectation_r(&psi), 1.796875, epsilon = 1e-12);
        assert_abs_diff_eq!(width_sigma(&psi), 0.35801372616842625, epsilon = 1e-12);
    }

    #[test]
    fn expectation_examples() {
        let g = make_grid(2, 0.0, 4.0).unwrap();
        assert_abs_diff_eq!(expectation_r(&delta_packet(g, 3)), 3.0);

        let m = g.m_points;
        let amp = Complex64::new(1.0 / (m as f64).sqrt(), 0.0);
        let uniform = WavePacket::from_amplitudes(g, vec![amp; m]).unwrap();
        assert_abs_diff_eq!(
            expectation_r(&uniform),
            g.r_min + g.delta_r * (m as f64 - 1.0) / 2.0,
            epsilon = 1e-12
        );

        let g = make_grid(5, 0.0, 3.0).unwrap();
        let psi = init_step_packet(&g).unwrap();
        assert_abs_diff_eq!(expectation_r(&psi), 1.078125, epsilon = 1e-12);
    }

    #[test]
    fn sigma_examples() {
        let g = make_grid(3, 0.0, 5.0).unwrap();
        assert_abs_diff_eq!(width_sigma(&delta_packet(g, 5)), 0.0);

        // M=4: the step packet occupies a single cell.
        let g = make_grid(2, 0.0, 5.0).unwrap();
        let psi = init_step_packet(&g).unwrap();
        assert_abs_diff_eq!(width_sigma(&psi), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn observable_consistency() {
        let g = make_grid(4, 0.0, 3.0).unwrap();
        let psi = init_step_packet(&g).unwrap();
        let r2: f64 = psi
            .amplitudes
            .iter()
            .enumerate()
            .map(|(m, a)| g.point(m).powi(2) * a.norm_sqr())
            .sum();
        let lhs = width_sigma(&psi).powi(2) + expectation_r(&psi).powi(2);
        assert_abs_diff_eq!(lhs, r2, epsilon = 1e-10);
    }

    #[test]
    fn well_population() {
        let g = make_grid(5, 0.0, 4.0).unwrap();
        let psi = init_step_packet(&g).unwrap();
        assert_abs_diff_eq!(right_well_population(&psi), 0.0, epsilon = 1e-12);

        assert_abs_diff_eq!(right_well_population(&delta_packet(g, 31)), 1.0);

        let g = make_grid(3, 0.0, 4.0).unwrap();
        let amp = Complex64::new(1.0 / 8.0f64.sqrt(), 0.0);
        let uniform = WavePacket::from_amplitudes(g, vec![amp; 8]).unwrap();
        assert_abs_diff_eq!(right_well_population(&uniform), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn well_window_floor_convention() {
        // M=4: window is [0,2) so a delta at m=1 stays "inside".
        let g = make_grid(2, 0.0, 4.0).unwrap();
        assert_abs_diff_eq!(right_well_population(&delta_packet(g, 1)), 0.0);
        assert_abs_diff_eq!(right_well_population(&delta_packet(g, 2)), 1.0);
    }

    #[test]
    fn resample() {
        let d = vec![0.0, 1.0, 0.0, 0.0];
        assert_eq!(resample_to_common_grid(&d, 4).unwrap(), d);

        let up = resample_to_common_grid(&d, 32).unwrap();
        for (i, v) in up.iter().enumerate() {
            let expect = if (8..16).contains(&i) { 0.125 } else { 0.0 };
            assert_abs_diff_eq!(*v, expect);
        }

        let d: Vec<f64> = (0..8).map(|i| (i as f64 + 1.0) / 36.0).collect();
        let up = resample_to_common_grid(&d, 32).unwrap();
        let sum_before: f64 = d.iter().sum();
        let sum_after: f64 = up.iter().sum();
        assert_abs_diff_eq!(sum_before, sum_after, epsilon = 1e-14);

        assert!(resample_to_common_grid(&d, 24).is_err());
        assert!(resample_to_common_grid(&d, 4).is_err());
    }

    #[test]
    fn csv_row_shape() {
        let g = make_grid(2, 0.0, 4.0).unwrap();
        let psi = init_step_packet(&g).unwrap();
        let mut snap = ObservableSnapshot::measure(0, 0.0, &psi);
        assert_eq!(ObservableSnapshot::csv_header(4), "step,time,mean_r,sigma,norm,right_well_population,d0,d1,d2,d3");
        assert_eq!(snap.csv_row(), "0,0,1,0,1,0,0,1,0,0");
        snap.right_well_population = None;
        assert!(snap.csv_row().contains(",NA,"));
    }
}
