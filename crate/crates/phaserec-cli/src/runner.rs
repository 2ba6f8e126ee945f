//! Mode dispatch: executes one experiment into an atomically renamed output
//! directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use phaserec_core::farfield::{farfield_constant, scattering_amplitude};
use phaserec_core::forward::{evaluate_psi, LippmannSchwingerOperator, PlaneWaveContext};
use phaserec_core::medium::{discretize, GridDiscretization};
use phaserec_core::recovery::{
    log_log_slope, ray_samples_from_csv, recover_from_solution, recover_sequence,
};
use phaserec_core::resolvent::{evaluate_resolvent, psi_sq_from_resolvent, solve_point_source};
use phaserec_core::{Complex64, Error as CoreError};

use crate::config::{Mode, ValidatedConfig};
use crate::report::{
    write_convergence_csv, write_per_n_csv, write_ray_samples_csv, write_reduction_csv,
    ConvergenceRow, PerNRow, ReductionRow, RunReport,
};
use crate::CliError;

/// Residual gate for every direct solve in a run.
const RESIDUAL_LIMIT: f64 = 1e-10;

/// Result of a completed run.
#[derive(Debug)]
pub struct RunOutcome {
    pub report: RunReport,
    pub out_dir: PathBuf,
}

fn numerical(err: CoreError) -> CliError {
    CliError::Numerical(format!("{err}"))
}

/// Reads the thread cap from PHASEREC_THREADS (positive integer; absent
/// means the implementation default).
fn thread_cap() -> Result<usize, CliError> {
    match std::env::var("PHASEREC_THREADS") {
        Ok(value) => value
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| {
                CliError::Validation(format!(
                    "PHASEREC_THREADS must be a positive integer, got `{value}`"
                ))
            }),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn check_residual(residual: f64) -> Result<(), CliError> {
    if residual > RESIDUAL_LIMIT {
        return Err(CliError::Numerical(format!(
            "backsubstitution residual {residual:.3e} exceeds {RESIDUAL_LIMIT:.0e}"
        )));
    }
    Ok(())
}

fn build_grid(config: &ValidatedConfig, cells: u32) -> Result<GridDiscretization, CliError> {
    discretize(&config.potential, cells).map_err(|e| CliError::Validation(format!("{e}")))
}

struct SolveProducts {
    operator: LippmannSchwingerOperator,
    solution: phaserec_core::forward::ScatteringSolution,
}

fn solve_forward(config: &ValidatedConfig, cells: u32) -> Result<SolveProducts, CliError> {
    let grid = build_grid(config, cells)?;
    let operator = LippmannSchwingerOperator::assemble(&grid, config.energy).map_err(numerical)?;
    let context = PlaneWaveContext::from_wave_vector(config.k).map_err(numerical)?;
    let solution = operator.solve_plane_wave(&context).map_err(numerical)?;
    check_residual(solution.residual())?;
    Ok(SolveProducts { operator, solution })
}

fn run_forward(config: &ValidatedConfig, report: &mut RunReport) -> Result<(), CliError> {
    let products = solve_forward(config, config.cells_per_side.unwrap())?;
    let l = config.l.unwrap();
    let entry = scattering_amplitude(&products.solution, &l).map_err(numerical)?;
    report.f_direct = Some(entry.value().into());
    report.condition_estimate = Some(products.operator.condition_estimate());
    report.max_residual = Some(products.solution.residual());
    Ok(())
}

fn run_recover(
    config: &ValidatedConfig,
    staging: &Path,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let l = config.l.unwrap();
    let n_list = config.n_list.clone().unwrap();
    if let Some(csv_path) = &config.samples_csv {
        // recovery from measured intensities: no solve, no reference
        let text = fs::read_to_string(csv_path)
            .map_err(|e| CliError::Validation(format!("reading {}: {e}", csv_path.display())))?;
        let samples = ray_samples_from_csv(
            &text,
            config.k,
            l,
            config.s_offsets.unwrap(),
            &n_list,
            config.potential.support_radius(),
        )
        .map_err(|e| CliError::Validation(format!("{e}")))?;
        let constant = farfield_constant(config.potential.dimension(), config.k.norm())
            .map_err(numerical)?;
        let result = recover_sequence(&samples, &constant).map_err(numerical)?;
        let rows: Vec<PerNRow> = n_list
            .iter()
            .zip(&result.per_n)
            .zip(&result.residual_trace)
            .map(|((&n, f), &residual)| PerNRow {
                n,
                f_hat_re: f.re,
                f_hat_im: f.im,
                abs_error: residual,
            })
            .collect();
        let errors: Vec<f64> = rows.iter().map(|r| r.abs_error).collect();
        report.fitted_slope = log_log_slope(&n_list, &errors).ok();
        report.final_estimate = Some(result.final_estimate.into());
        write_per_n_csv(&staging.join("per_n.csv"), &rows)?;
        write_ray_samples_csv(&staging.join("ray_samples.csv"), &samples)?;
        report.per_n = Some(rows);
        return Ok(());
    }

    let products = solve_forward(config, config.cells_per_side.unwrap())?;
    let (samples, result, reference) =
        recover_from_solution(&products.solution, &l, &n_list, config.s_offsets)
            .map_err(numerical)?;
    let rows: Vec<PerNRow> = n_list
        .iter()
        .zip(&result.per_n)
        .map(|(&n, f)| PerNRow {
            n,
            f_hat_re: f.re,
            f_hat_im: f.im,
            abs_error: (f - reference.value()).norm(),
        })
        .collect();
    let errors: Vec<f64> = rows.iter().map(|r| r.abs_error).collect();
    report.f_direct = Some(reference.value().into());
    report.final_estimate = Some(result.final_estimate.into());
    report.fitted_slope = log_log_slope(&n_list, &errors).ok();
    report.condition_estimate = Some(products.operator.condition_estimate());
    report.max_residual = Some(products.solution.residual());
    write_per_n_csv(&staging.join("per_n.csv"), &rows)?;
    write_ray_samples_csv(&staging.join("ray_samples.csv"), &samples)?;
    report.per_n = Some(rows);
    Ok(())
}

fn run_convergence(
    config: &ValidatedConfig,
    staging: &Path,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let grids = config.grid_list.clone().unwrap();
    let cap = thread_cap().map(|c| c.max(1))?;
    let l = config.l.unwrap();

    // independent grids solve concurrently, capped by PHASEREC_THREADS;
    // results are joined in grid order so the outputs stay deterministic
    type GridResult = Result<(Complex64, f64, f64), CliError>;
    let mut results: Vec<Option<GridResult>> = (0..grids.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for chunk in grids
            .iter()
            .enumerate()
            .collect::<Vec<_>>()
            .chunks(grids.len().div_ceil(cap))
        {
            let chunk: Vec<(usize, u32)> = chunk.iter().map(|(i, &g)| (*i, g)).collect();
            handles.push(scope.spawn(move || {
                chunk
                    .into_iter()
                    .map(|(index, cells)| {
                        let out = solve_forward(config, cells).and_then(|products| {
                            let entry = scattering_amplitude(&products.solution, &l)
                                .map_err(numerical)?;
                            Ok((
                                entry.value(),
                                products.operator.condition_estimate(),
                                products.solution.residual(),
                            ))
                        });
                        (index, out)
                    })
                    .collect::<Vec<_>>()
            }));
        }
        for handle in handles {
            for (index, value) in handle.join().expect("solver thread panicked") {
                results[index] = Some(value);
            }
        }
    });

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(grids.len());
    let mut previous: Option<Complex64> = None;
    let mut max_residual = 0.0f64;
    for (cells, slot) in grids.iter().zip(results) {
        let (f, condition, residual) = slot.expect("all grids solved")?;
        max_residual = max_residual.max(residual);
        rows.push(ConvergenceRow {
            cells_per_side: *cells,
            f_re: f.re,
            f_im: f.im,
            diff_prev: previous.map(|p| (f - p).norm()),
            condition_estimate: condition,
        });
        previous = Some(f);
    }
    report.f_direct = previous.map(|f| f.into());
    report.condition_estimate = rows.last().map(|r| r.condition_estimate);
    report.max_residual = Some(max_residual);
    write_convergence_csv(&staging.join("convergence.csv"), &rows)?;
    report.convergence = Some(rows);
    Ok(())
}

fn run_resolvent_reduction(
    config: &ValidatedConfig,
    staging: &Path,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let grid = build_grid(config, config.cells_per_side.unwrap())?;
    let operator = LippmannSchwingerOperator::assemble(&grid, config.energy).map_err(numerical)?;
    let x_prime = config.x_prime.unwrap();
    let field = solve_point_source(&operator, &x_prime).map_err(numerical)?;
    check_residual(field.residual())?;
    if field.source_shifted() {
        report.warnings.push(format!(
            "x_prime coincided with a grid cell center; source shifted to ({}, {}, {})",
            field.source().x(),
            field.source().y(),
            field.source().z()
        ));
    }

    let k_hat = config.k * (1.0 / config.k.norm());
    let s_list = config.s_list.clone().unwrap();
    let samples: Vec<(f64, f64)> = s_list
        .iter()
        .map(|&s| {
            let x = -k_hat * s;
            evaluate_resolvent(&field, &x)
                .map(|r| (s, r.norm_sqr()))
                .map_err(numerical)
        })
        .collect::<Result<_, _>>()?;
    let estimate = psi_sq_from_resolvent(
        grid.dimension(),
        &config.k,
        &samples,
        config.potential.support_radius(),
    )
    .map_err(numerical)?;

    // reference |psi+(x', k)|^2 from a plane-wave solve on the same grid
    let context = PlaneWaveContext::from_wave_vector(config.k).map_err(numerical)?;
    let psi = operator.solve_plane_wave(&context).map_err(numerical)?;
    check_residual(psi.residual())?;
    let reference = evaluate_psi(&psi, &x_prime).norm_sqr();

    let rows: Vec<ReductionRow> = estimate
        .per_radius
        .iter()
        .map(|&(s, scaled)| ReductionRow {
            s,
            scaled_rsq: scaled,
            psi_sq_reference: reference,
            rel_defect: (scaled - reference).abs() / reference,
        })
        .collect();
    report.psi_sq_estimate = Some(estimate.value);
    report.psi_sq_defect = Some(estimate.defect);
    report.condition_estimate = Some(operator.condition_estimate());
    report.max_residual = Some(field.residual().max(psi.residual()));
    write_reduction_csv(&staging.join("reduction.csv"), &rows)?;
    report.reduction = Some(rows);
    Ok(())
}

/// Runs one experiment. Outputs are staged in a scratch directory and
/// renamed into place only on success, so a failed run leaves no partial
/// output directory behind.
pub fn run_experiment(
    config: &ValidatedConfig,
    out_override: Option<&Path>,
    quiet: bool,
) -> Result<RunOutcome, CliError> {
    let out_dir: PathBuf = out_override
        .map(Path::to_path_buf)
        .or_else(|| config.output_dir.clone())
        .ok_or_else(|| {
            CliError::Validation(String::from(
                "no output directory: set \"output_dir\" in the config or pass --out",
            ))
        })?;
    let staging = PathBuf::from(format!(
        "{}.staging-{}",
        out_dir.display(),
        std::process::id()
    ));
    if staging.exists() {
        fs::remove_dir_all(&staging)
            .map_err(|e| CliError::Io(format!("clearing {}: {e}", staging.display())))?;
    }
    fs::create_dir_all(&staging)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", staging.display())))?;

    let started = Instant::now();
    let mut report = RunReport::new(config.raw.clone());
    report.warnings = config.warnings.clone();
    let result = match config.mode {
        Mode::Forward => run_forward(config, &mut report),
        Mode::Recover => run_recover(config, &staging, &mut report),
        Mode::Convergence => run_convergence(config, &staging, &mut report),
        Mode::ResolventReduction => run_resolvent_reduction(config, &staging, &mut report),
    }
    .and_then(|()| {
        report.wall_time = started.elapsed();
        report.write_json(&staging.join("report.json"))
    });

    if let Err(err) = result {
        let _ = fs::remove_dir_all(&staging);
        return Err(err);
    }

    if out_dir.exists() {
        fs::remove_dir_all(&out_dir)
            .map_err(|e| CliError::Io(format!("replacing {}: {e}", out_dir.display())))?;
    }
    if let Some(parent) = out_dir.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("creating {}: {e}", parent.display())))?;
        }
    }
    fs::rename(&staging, &out_dir).map_err(|e| {
        CliError::Io(format!(
            "moving {} to {}: {e}",
            staging.display(),
            out_dir.display()
        ))
    })?;

    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    if !quiet {
        println!(
            "{} run completed in {:.1?} -> {}",
            config.mode.name(),
            report.wall_time,
            out_dir.display()
        );
        if let Some(f) = &report.f_direct {
            println!("f_direct = {} + {}i", f.re, f.im);
        }
        if let Some(f) = &report.final_estimate {
            println!("recovered f = {} + {}i", f.re, f.im);
        }
        if let Some(slope) = report.fitted_slope {
            println!("fitted log-log slope = {slope:.4}");
        }
        if let Some(est) = report.psi_sq_estimate {
            println!(
                "psi_sq estimate = {est} (two-point defect {})",
                report.psi_sq_defect.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(RunOutcome { report, out_dir })
}
