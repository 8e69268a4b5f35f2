//! The three stock experiments (free spreading, double-well tunneling,
//! harmonic oscillation), their default parameters, potential construction,
//! flat key=value configuration, and CSV emission.

use crate::error::{Error, Result};
use crate::fmt::sig12;
use crate::grid::{
    init_step_packet, make_grid, resample_to_common_grid, ObservableSnapshot, SpatialGrid,
    WavePacket, MAX_QUBITS,
};
use crate::propagator::{propagate, Backend, PropagationPlan};
use crate::sim::NoiseSpec;
use crate::AMU_TO_ME;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

/// Densities are resampled onto this many points when a common-grid file is
/// requested, so runs with different register sizes can be overlaid.
pub const COMMON_GRID_POINTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    FreeParticle,
    Tunneling,
    Harmonic,
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "free_particle" | "free" => Ok(ScenarioKind::FreeParticle),
            "tunneling" => Ok(ScenarioKind::Tunneling),
            "harmonic" => Ok(ScenarioKind::Harmonic),
            other => Err(Error::Config(format!(
                "unknown scenario '{other}' (expected free_particle, tunneling, or harmonic)"
            ))),
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioKind::FreeParticle => "free_particle",
            ScenarioKind::Tunneling => "tunneling",
            ScenarioKind::Harmonic => "harmonic",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub n_qubits: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub mu_amu: f64,
    pub dt_au: f64,
    pub n_steps: usize,
    /// Well depth (Hartree); tunneling only.
    pub v_min: f64,
    /// Angular frequency (atomic units); harmonic only.
    pub omega: f64,
    /// Potential minimum (Bohr); harmonic only.
    pub r_eq: f64,
    pub backend: Backend,
    pub shots: Option<u64>,
    pub noise_p1: f64,
    pub noise_p2: f64,
    pub seed: u64,
    /// Snapshot CSV destination; printed by the CLI when absent.
    pub out: Option<PathBuf>,
    /// Destination for the 32-point resampled density CSV.
    pub common_grid: Option<PathBuf>,
}

/// Stock parameters for each experiment. Masses are stored in amu; the two
/// bound scenarios use one electron mass (1/1822.888486 amu), the only
/// reading of their nominal unit mass under which the well tunnels and the
/// oscillator swings on the stock time steps — see the README's parameter
/// table. Register sizes below 2 cannot hold the quarter-grid step packet.
pub fn default_config(kind: ScenarioKind, n_qubits: usize) -> Result<ScenarioConfig> {
    if !(2..=MAX_QUBITS).contains(&n_qubits) {
        return Err(Error::QubitCount { n: n_qubits, min: 2, max: MAX_QUBITS });
    }
    let electron_amu = 1.0 / AMU_TO_ME;
    let (r_max, mu_amu, dt_au) = match kind {
        ScenarioKind::FreeParticle => (5.0, 0.9412, 125.0),
        ScenarioKind::Tunneling => (4.0, electron_amu, 0.0625),
        ScenarioKind::Harmonic => (3.0, electron_amu, 0.1625),
    };
    Ok(ScenarioConfig {
        kind,
        n_qubits,
        r_min: 0.0,
        r_max,
        mu_amu,
        dt_au,
        n_steps: 8,
        v_min: -6.0,
        omega: 1.0,
        r_eq: 1.5,
        backend: Backend::Circuit,
        shots: None,
        noise_p1: 0.0,
        noise_p2: 0.0,
        seed: 1,
        out: None,
        common_grid: None,
    })
}

/// Potential values on the grid, Hartree.
///
/// * free particle: identically zero;
/// * tunneling: the double well `0, v_min, 0, v_min` over the four grid
///   quarters (boundaries at M/4, M/2, 3M/4);
/// * harmonic: `1/2 * mu * omega^2 * (r - r_eq)^2` with the mass converted
///   to atomic units.
pub fn build_potential(config: &ScenarioConfig, grid: &SpatialGrid) -> Vec<f64> {
    let m = grid.m_points;
    match config.kind {
        ScenarioKind::FreeParticle => vec![0.0; m],
        ScenarioKind::Tunneling => (0..m)
            .map(|i| if (4 * i / m) % 2 == 1 { config.v_min } else { 0.0 })
            .collect(),
        ScenarioKind::Harmonic => {
            let mu_au = config.mu_amu * AMU_TO_ME;
            grid.points()
                .iter()
                .map(|r| 0.5 * mu_au * config.omega * config.omega * (r - config.r_eq) * (r - config.r_eq))
                .collect()
        }
    }
}

impl ScenarioConfig {
    pub fn grid(&self) -> Result<SpatialGrid> {
        make_grid(self.n_qubits, self.r_min, self.r_max)
    }

    /// Materialize the propagation plan and the initial packet.
    pub fn to_plan(&self) -> Result<(PropagationPlan, WavePacket)> {
        let grid = self.grid()?;
        let potential = build_potential(self, &grid);
        let initial = init_step_packet(&grid)?;
        let noise = if self.noise_p1 > 0.0 || self.noise_p2 > 0.0 {
            Some(NoiseSpec::new(self.noise_p1, self.noise_p2, self.seed)?)
        } else {
            None
        };
        let plan = PropagationPlan {
            grid,
            potential,
            mu_amu: self.mu_amu,
            dt_au: self.dt_au,
            n_steps: self.n_steps,
            backend: self.backend,
            noise,
            shots: self.shots,
            seed: self.seed,
        };
        Ok((plan, initial))
    }

    /// Apply one `key = value` setting (config file lines and CLI overrides
    /// both funnel through here).
    pub fn apply_key(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value.parse().map_err(|_| {
                Error::Config(format!("invalid value '{value}' for key '{key}'"))
            })
        }
        match key {
            "scenario" => self.kind = value.parse()?,
            "qubits" => self.n_qubits = num(key, value)?,
            "r_min" => self.r_min = num(key, value)?,
            "r_max" => self.r_max = num(key, value)?,
            "mu_amu" => self.mu_amu = num(key, value)?,
            "dt" => self.dt_au = num(key, value)?,
            "steps" => self.n_steps = num(key, value)?,
            "v_min" => self.v_min = num(key, value)?,
            "omega" => self.omega = num(key, value)?,
            "r_eq" => self.r_eq = num(key, value)?,
            "backend" => self.backend = value.parse()?,
            "shots" => self.shots = Some(num(key, value)?),
            "noise_p1" => self.noise_p1 = num(key, value)?,
            "noise_p2" => self.noise_p2 = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "common_grid" => self.common_grid = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown configuration key '{other}'"))),
        }
        Ok(())
    }

    /// Parse a flat config file body: one `key = value` per line, `#`
    /// comments and blank lines ignored.
    pub fn apply_config_text(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value', got '{line}'", idx + 1))
            })?;
            self.apply_key(key.trim(), value.trim())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub snapshots: Vec<ObservableSnapshot>,
    /// Rendered snapshot table (also written to `config.out` when set).
    pub csv: String,
    /// Rendered 32-point density table when a common-grid file was requested.
    pub common_grid_csv: Option<String>,
}

/// Run one scenario end to end: propagate, render the snapshot CSV (the
/// right-well column is only meaningful for tunneling and reads NA
/// otherwise), and write any requested files.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutcome> {
    let (plan, initial) = config.to_plan()?;
    let mut snapshots = propagate(&plan, &initial)?;
    if config.kind != ScenarioKind::Tunneling {
        for snap in snapshots.iter_mut() {
            snap.right_well_population = None;
        }
    }

    let mut csv = ObservableSnapshot::csv_header(plan.grid.m_points);
    csv.push('\n');
    for snap in &snapshots {
        csv.push_str(&snap.csv_row());
        csv.push('\n');
    }

    let common_grid_csv = if config.common_grid.is_some() {
        let mut text = String::from("step,time");
        for i in 0..COMMON_GRID_POINTS {
            text.push_str(&format!(",c{i}"));
        }
        text.push('\n');
        for snap in &snapshots {
            let coarse = resample_to_common_grid(&snap.density, COMMON_GRID_POINTS)?;
            text.push_str(&format!("{},{}", snap.step_index, sig12(snap.time)));
            for c in coarse {
                text.push(',');
                text.push_str(&sig12(c));
            }
            text.push('\n');
        }
        Some(text)
    } else {
        None
    };

    if let Some(path) = &config.out {
        std::fs::write(path, &csv)?;
    }
    if let (Some(path), Some(text)) = (&config.common_grid, &common_grid_csv) {
        std::fs::write(path, text)?;
    }
    Ok(ScenarioOutcome { snapshots, csv, common_grid_csv })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stock_parameters() {
        let free = default_config(ScenarioKind::FreeParticle, 5).unwrap();
        assert_eq!((free.r_min, free.r_max), (0.0, 5.0));
        assert_eq!(free.mu_amu, 0.9412);
        assert_eq!(free.dt_au, 125.0);
        assert_eq!(free.n_steps, 8);

        let tun = default_config(ScenarioKind::Tunneling, 3).unwrap();
        assert_eq!((tun.r_min, tun.r_max), (0.0, 4.0));
        assert_eq!(tun.dt_au, 0.0625);
        assert_eq!(tun.v_min, -6.0);
        assert_abs_diff_eq!(tun.mu_amu * AMU_TO_ME, 1.0, epsilon = 1e-12);

        let harm = default_config(ScenarioKind::Harmonic, 2).unwrap();
        assert_eq!((harm.r_min, harm.r_max), (0.0, 3.0));
        assert_eq!(harm.dt_au, 0.1625);
        assert_eq!((harm.omega, harm.r_eq), (1.0, 1.5));
        assert_abs_diff_eq!(harm.mu_amu * AMU_TO_ME, 1.0, epsilon = 1e-12);

        assert!(default_config(ScenarioKind::Harmonic, 1).is_err());
        assert!(default_config(ScenarioKind::Harmonic, 25).is_err());
    }

    #[test]
    fn free_potential_is_zero() {
        let config = default_config(ScenarioKind::FreeParticle, 4).unwrap();
        let grid = config.grid().unwrap();
        assert_eq!(build_potential(&config, &grid), vec![0.0; 16]);
    }

    #[test]
    fn tunneling_double_well() {
        let config = default_config(ScenarioKind::Tunneling, 2).unwrap();
        let grid = config.grid().unwrap();
        assert_eq!(build_potential(&config, &grid), vec![0.0, -6.0, 0.0, -6.0]);

        let config = default_config(ScenarioKind::Tunneling, 3).unwrap();
        let grid = config.grid().unwrap();
        assert_eq!(
            build_potential(&config, &grid),
            vec![0.0, 0.0, -6.0, -6.0, 0.0, 0.0, -6.0, -6.0]
        );
    }

    #[test]
    fn harmonic_curvature_with_unit_amu_mass() {
        // Explicit 1-amu mass: V_m = (1822.888486/2) * (r_m - 1.5)^2.
        let mut config = default_config(ScenarioKind::Harmonic, 2).unwrap();
        config.mu_amu = 1.0;
        let grid = config.grid().unwrap();
        let v = build_potential(&config, &grid);
        let k = 911.444243;
        assert_abs_diff_eq!(v[0], k * 2.25, epsilon = 1e-6);
        assert_abs_diff_eq!(v[1], k * 0.5625, epsilon = 1e-6);
        assert_abs_diff_eq!(v[2], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[3], k * 0.5625, epsilon = 1e-6);
    }

    #[test]
    fn harmonic_default_uses_electron_mass() {
        let config = default_config(ScenarioKind::Harmonic, 2).unwrap();
        let grid = config.grid().unwrap();
        let v = build_potential(&config, &grid);
        assert_abs_diff_eq!(v[0], 0.5 * 2.25, epsilon = 1e-12);
        assert_abs_diff_eq!(v[3], 0.5 * 0.5625, epsilon = 1e-12);
    }

    #[test]
    fn key_value_overrides() {
        let mut config = default_config(ScenarioKind::FreeParticle, 5).unwrap();
        config
            .apply_config_text(
                "# comment line\n\nscenario = harmonic\nqubits=4\ndt = 0.5\nbackend = fft\nshots = 1024\nseed = 99\n",
            )
            .unwrap();
        assert_eq!(config.kind, ScenarioKind::Harmonic);
        assert_eq!(config.n_qubits, 4);
        assert_eq!(config.dt_au, 0.5);
        assert_eq!(config.backend, Backend::FftOracle);
        assert_eq!(config.shots, Some(1024));
        assert_eq!(config.seed, 99);

        assert!(config.apply_key("gamma", "1").is_err());
        assert!(config.apply_key("dt", "fast").is_err());
        assert!(config.apply_config_text("no equals sign").is_err());
    }

    #[test]
    fn right_well_column_is_scenario_gated() {
        let mut config = default_config(ScenarioKind::FreeParticle, 3).unwrap();
        config.backend = Backend::FftOracle;
        let out = run_scenario(&config).unwrap();
        assert!(out.snapshots.iter().all(|s| s.right_well_population.is_none()));
        assert!(out.csv.lines().nth(1).unwrap().contains(",NA,"));

        let mut config = default_config(ScenarioKind::Tunneling, 3).unwrap();
        config.backend = Backend::FftOracle;
        let out = run_scenario(&config).unwrap();
        assert!(out.snapshots.iter().all(|s| s.right_well_population.is_some()));
        assert!(!out.csv.contains("NA"));
    }

    #[test]
    fn csv_shape_and_determinism() {
        let mut config = default_config(ScenarioKind::Harmonic, 3).unwrap();
        config.shots = Some(512);
        let a = run_scenario(&config).unwrap();
        let b = run_scenario(&config).unwrap();
        assert_eq!(a.csv, b.csv);
        let lines: Vec<&str> = a.csv.lines().collect();
        assert_eq!(lines.len(), 10); // header + 9 snapshots
        assert_eq!(lines[0].split(',').count(), 6 + 8);
        assert!(lines[0].starts_with("step,time,mean_r,sigma,norm,right_well_population,d0"));
    }

    #[test]
    fn common_grid_resampling() {
        let dir = std::env::temp_dir().join(format!("qwave-scenario-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let mut config = default_config(ScenarioKind::Tunneling, 3).unwrap();
        config.backend = Backend::FftOracle;
        config.out = Some(dir.join("snap.csv"));
        config.common_grid = Some(dir.join("common.csv"));
        let out = run_scenario(&config).unwrap();
        let text = out.common_grid_csv.unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[0].split(',').count(), 2 + 32);
        // each row's densities still sum to ~1
        for row in &lines[1..] {
            let total: f64 = row.split(',').skip(2).map(|x| x.parse::<f64>().unwrap()).sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-9);
        }
        assert_eq!(std::fs::read_to_string(dir.join("snap.csv")).unwrap(), out.csv);
        assert!(dir.join("common.csv").exists());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("free-particle".parse::<ScenarioKind>().unwrap(), ScenarioKind::FreeParticle);
        assert_eq!("TUNNELING".parse::<ScenarioKind>().unwrap(), ScenarioKind::Tunneling);
        assert!("morse".parse::<ScenarioKind>().is_err());
        assert_eq!(ScenarioKind::Harmonic.to_string(), "harmonic");
    }
}
