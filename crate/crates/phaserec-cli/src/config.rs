//! Experiment configuration: strict JSON schema and invariant validation.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use phaserec_core::medium::{
    acoustic_to_potential, Bump, Potential, PotentialKind, RefractionIndex,
};
use phaserec_core::recovery::ray_period;
use phaserec_core::{Dimension, Vector};

use crate::CliError;

/// Experiment mode; must agree with the CLI subcommand.
#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Forward,
    Recover,
    Convergence,
    ResolventReduction,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Forward => "forward",
            Mode::Recover => "recover",
            Mode::Convergence => "convergence",
            Mode::ResolventReduction => "resolvent_reduction",
        }
    }
}

/// Potential specification. The `kind` string selects which of the optional
/// parameter fields are required; unknown keys are rejected.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub kind: String,
    pub dimension: usize,
    pub support_radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bumps: Option<Vec<BumpConfig>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_inside: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BumpConfig {
    pub amplitude: f64,
    pub center: Vec<f64>,
    pub width: f64,
}

/// The raw JSON schema. Unknown keys anywhere are rejected; which optional
/// fields must (or must not) be present depends on the mode.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub mode: Mode,
    pub potential: PotentialConfig,
    #[serde(rename = "E")]
    pub energy: f64,
    pub k_direction: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_direction: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells_per_side: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_list: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_offsets: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples_csv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_prime: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    #[serde(default)]
    pub seed: u64,
}

/// A parsed, invariant-checked configuration ready to run.
#[derive(Clone, Debug)]
pub struct ValidatedConfig {
    pub raw: RawConfig,
    pub mode: Mode,
    pub potential: Potential,
    pub energy: f64,
    /// Wave vector sqrt(E) * k_direction.
    pub k: Vector,
    pub l: Option<Vector>,
    pub cells_per_side: Option<u32>,
    pub grid_list: Option<Vec<u32>>,
    pub n_list: Option<Vec<u32>>,
    pub s_offsets: Option<(f64, f64)>,
    pub samples_csv: Option<PathBuf>,
    pub x_prime: Option<Vector>,
    pub s_list: Option<Vec<f64>>,
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
    /// Non-fatal geometry warnings to surface on stderr.
    pub warnings: Vec<String>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn unit_direction(name: &str, coords: &[f64], dimension: Dimension) -> Result<Vector, CliError> {
    if coords.len() != dimension.as_usize() {
        return Err(invalid(format!(
            "\"{name}\": must have {} components for a {}-dimensional potential",
            dimension.as_usize(),
            dimension
        )));
    }
    let v = Vector::from_slice(coords).map_err(|e| invalid(format!("\"{name}\": {e}")))?;
    if !v.is_finite() || (v.norm() - 1.0).abs() > 1e-10 {
        return Err(invalid(format!(
            "\"{name}\": must be a unit vector within 1e-10 (|v| = {})",
            v.norm()
        )));
    }
    Ok(v)
}

fn build_potential(config: &PotentialConfig, energy: f64) -> Result<Potential, CliError> {
    let dimension = Dimension::from_usize(config.dimension)
        .map_err(|e| invalid(format!("\"potential.dimension\": {e}")))?;
    let support = config.support_radius;
    let require = |field: &str, value: Option<f64>| {
        value.ok_or_else(|| {
            invalid(format!(
                "\"potential.{field}\": required for kind `{}`",
                config.kind
            ))
        })
    };
    let forbid = |field: &str, absent: bool| {
        if absent {
            Ok(())
        } else {
            Err(invalid(format!(
                "\"potential.{field}\": not used by kind `{}`",
                config.kind
            )))
        }
    };
    let potential = match config.kind.as_str() {
        "disc_constant" => {
            forbid("width", config.width.is_none())?;
            forbid("bumps", config.bumps.is_none())?;
            forbid("n_inside", config.n_inside.is_none())?;
            forbid("omega", config.omega.is_none())?;
            forbid("c0", config.c0.is_none())?;
            Potential::new(
                dimension,
                PotentialKind::DiscConstant {
                    amplitude: require("amplitude", config.amplitude)?,
                    radius: require("radius", config.radius)?,
                },
                support,
            )
        }
        "truncated_gaussian" => {
            forbid("radius", config.radius.is_none())?;
            forbid("bumps", config.bumps.is_none())?;
            forbid("n_inside", config.n_inside.is_none())?;
            forbid("omega", config.omega.is_none())?;
            forbid("c0", config.c0.is_none())?;
            Potential::new(
                dimension,
                PotentialKind::TruncatedGaussian {
                    amplitude: require("amplitude", config.amplitude)?,
                    width: require("width", config.width)?,
                },
                support,
            )
        }
        "sum_of_bumps" => {
            forbid("amplitude", config.amplitude.is_none())?;
            forbid("radius", config.radius.is_none())?;
            forbid("width", config.width.is_none())?;
            forbid("n_inside", config.n_inside.is_none())?;
            forbid("omega", config.omega.is_none())?;
            forbid("c0", config.c0.is_none())?;
            let bumps = config
                .bumps
                .as_ref()
                .ok_or_else(|| invalid("\"potential.bumps\": required for kind `sum_of_bumps`"))?
                .iter()
                .map(|b| {
                    Ok(Bump {
                        amplitude: b.amplitude,
                        center: Vector::from_slice(&b.center)
                            .map_err(|e| invalid(format!("\"potential.bumps.center\": {e}")))?,
                        width: b.width,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Potential::new(dimension, PotentialKind::SumOfBumps { bumps }, support)
        }
        "acoustic_disc" => {
            forbid("amplitude", config.amplitude.is_none())?;
            forbid("width", config.width.is_none())?;
            forbid("bumps", config.bumps.is_none())?;
            let omega = require("omega", config.omega)?;
            let c0 = require("c0", config.c0)?;
            let medium = acoustic_to_potential(
                dimension,
                RefractionIndex {
                    n_inside: require("n_inside", config.n_inside)?,
                    radius: require("radius", config.radius)?,
                },
                omega,
                c0,
                support,
            )
            .map_err(|e| invalid(format!("\"potential\": {e}")))?;
            if (medium.energy - energy).abs() > 1e-12 * energy.max(medium.energy) {
                return Err(invalid(format!(
                    "\"E\": must equal (omega/c0)^2 = {} for an acoustic potential, got {energy}",
                    medium.energy
                )));
            }
            return Ok(medium.potential);
        }
        other => {
            return Err(invalid(format!(
                "\"potential.kind\": unknown kind `{other}` (expected disc_constant, truncated_gaussian, sum_of_bumps, or acoustic_disc)"
            )))
        }
    };
    potential.map_err(|e| invalid(format!("\"potential\": {e}")))
}

/// Parses and validates a JSON experiment configuration. Error messages
/// name the offending key and constraint.
pub fn validate_config(text: &str) -> Result<ValidatedConfig, CliError> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| invalid(format!("schema violation: {e}")))?;
    if !raw.energy.is_finite() || raw.energy <= 0.0 {
        return Err(invalid(format!(
            "\"E\": must satisfy E > 0, got {}",
            raw.energy
        )));
    }
    let potential = build_potential(&raw.potential, raw.energy)?;
    let dimension = potential.dimension();
    let k_hat = unit_direction("k_direction", &raw.k_direction, dimension)?;
    let k = k_hat * raw.energy.sqrt();
    let l = raw
        .l_direction
        .as_ref()
        .map(|coords| unit_direction("l_direction", coords, dimension))
        .transpose()?
        .map(|l_hat| l_hat * raw.energy.sqrt());

    if let Some(n_list) = &raw.n_list {
        if n_list.is_empty() || n_list[0] == 0 || !n_list.windows(2).all(|w| w[0] < w[1]) {
            return Err(invalid(
                "\"n_list\": must be a non-empty strictly increasing list of positive integers",
            ));
        }
    }
    if let Some([s1, s2]) = raw.s_offsets {
        if !(s1.is_finite() && s2.is_finite()) || s1 < 0.0 || s2 < 0.0 {
            return Err(invalid("\"s_offsets\": must be finite and non-negative"));
        }
    }

    let mode = raw.mode;
    let require = |name: &str, present: bool| {
        if present {
            Ok(())
        } else {
            Err(invalid(format!(
                "\"{name}\": required in mode `{}`",
                mode.name()
            )))
        }
    };
    let forbid = |name: &str, absent: bool| {
        if absent {
            Ok(())
        } else {
            Err(invalid(format!(
                "\"{name}\": not used in mode `{}`",
                mode.name()
            )))
        }
    };

    let mut warnings = Vec::new();
    match mode {
        Mode::Forward => {
            require("l_direction", l.is_some())?;
            require("cells_per_side", raw.cells_per_side.is_some())?;
            forbid("n_list", raw.n_list.is_none())?;
            forbid("s_offsets", raw.s_offsets.is_none())?;
            forbid("samples_csv", raw.samples_csv.is_none())?;
            forbid("grid_list", raw.grid_list.is_none())?;
            forbid("x_prime", raw.x_prime.is_none())?;
            forbid("s_list", raw.s_list.is_none())?;
        }
        Mode::Recover => {
            require("l_direction", l.is_some())?;
            require("n_list", raw.n_list.is_some())?;
            forbid("grid_list", raw.grid_list.is_none())?;
            forbid("x_prime", raw.x_prime.is_none())?;
            forbid("s_list", raw.s_list.is_none())?;
            if raw.samples_csv.is_some() {
                require("s_offsets", raw.s_offsets.is_some())?;
                forbid("cells_per_side", raw.cells_per_side.is_none())?;
            } else {
                require("cells_per_side", raw.cells_per_side.is_some())?;
            }
            // the pair must be non-forward, and near-forward pairs make the
            // sampling radii explode
            let l_vec = l.as_ref().unwrap();
            let period = ray_period(&k, l_vec)
                .map_err(|e| invalid(format!("\"l_direction\": {e}")))?;
            let support = potential.support_radius();
            if period > 1e3 * support {
                return Err(invalid(format!(
                    "\"l_direction\": near-forward pair gives period T = {period:.3e} > 1000 * support_radius; sample radii would be impractical"
                )));
            }
            if period > 50.0 * support {
                warnings.push(format!(
                    "near-forward pair: period T = {period:.3e} exceeds 50 * support_radius; sample radii grow accordingly"
                ));
            }
        }
        Mode::Convergence => {
            require("l_direction", l.is_some())?;
            require("grid_list", raw.grid_list.is_some())?;
            forbid("cells_per_side", raw.cells_per_side.is_none())?;
            forbid("n_list", raw.n_list.is_none())?;
            forbid("s_offsets", raw.s_offsets.is_none())?;
            forbid("samples_csv", raw.samples_csv.is_none())?;
            forbid("x_prime", raw.x_prime.is_none())?;
            forbid("s_list", raw.s_list.is_none())?;
            let grids = raw.grid_list.as_ref().unwrap();
            if grids.len() < 2 || !grids.windows(2).all(|w| w[0] < w[1]) || grids[0] < 4 {
                return Err(invalid(
                    "\"grid_list\": must be a strictly increasing list of at least 2 grid sizes, each >= 4",
                ));
            }
        }
        Mode::ResolventReduction => {
            require("cells_per_side", raw.cells_per_side.is_some())?;
            require("x_prime", raw.x_prime.is_some())?;
            require("s_list", raw.s_list.is_some())?;
            forbid("l_direction", l.is_none())?;
            forbid("n_list", raw.n_list.is_none())?;
            forbid("s_offsets", raw.s_offsets.is_none())?;
            forbid("samples_csv", raw.samples_csv.is_none())?;
            forbid("grid_list", raw.grid_list.is_none())?;
            let s_list = raw.s_list.as_ref().unwrap();
            let support = potential.support_radius();
            if s_list.len() < 2 || !s_list.windows(2).all(|w| w[0] < w[1]) {
                return Err(invalid(
                    "\"s_list\": must be a strictly increasing list of at least 2 radii",
                ));
            }
            if s_list[0] < 2.0 * support {
                return Err(invalid(format!(
                    "\"s_list\": radii must be at least twice the support radius ({})",
                    2.0 * support
                )));
            }
        }
    }

    let x_prime = raw
        .x_prime
        .as_ref()
        .map(|coords| {
            let v = Vector::from_slice(coords)
                .map_err(|e| invalid(format!("\"x_prime\": {e}")))?;
            if v.dim() != dimension {
                return Err(invalid(format!(
                    "\"x_prime\": must have {} components",
                    dimension.as_usize()
                )));
            }
            if v.norm() <= potential.support_radius() {
                return Err(invalid(
                    "\"x_prime\": must lie strictly outside the scatterer support",
                ));
            }
            Ok(v)
        })
        .transpose()?;

    if let Some(cells) = raw.cells_per_side {
        if cells < 4 {
            return Err(invalid("\"cells_per_side\": must be >= 4"));
        }
    }

    Ok(ValidatedConfig {
        mode,
        potential,
        energy: raw.energy,
        k,
        l,
        cells_per_side: raw.cells_per_side,
        grid_list: raw.grid_list.clone(),
        n_list: raw.n_list.clone(),
        s_offsets: raw.s_offsets.map(|[a, b]| (a, b)),
        samples_csv: raw.samples_csv.as_ref().map(PathBuf::from),
        x_prime,
        s_list: raw.s_list.clone(),
        output_dir: raw.output_dir.as_ref().map(PathBuf::from),
        seed: raw.seed,
        warnings,
        raw,
    })
}
