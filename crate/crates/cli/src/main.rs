mod args;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::Parser;
use dephase_core::verify::{certify, default_points, Comparison, KernelName, Tolerance};
use dephase_core::{detect_extremum, sweep_with, trajectory, EnvSpec, QuadSpec, SweepScale};
use serde::Serialize;

use args::{Cli, Command, SweepArgs, TrajectoryArgs, VerifyArgs};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Trajectory(a) => run_trajectory(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Verify(a) => run_verify(a),
    }
}

#[derive(Serialize)]
struct Resolved<'a> {
    env: &'a EnvSpec,
    init: &'a dephase_core::InitState,
}

fn run_trajectory(a: &TrajectoryArgs) -> Result<ExitCode> {
    let env = a.env.build()?;
    let init = a.init.build()?;
    let grid = a.grid.build()?;
    let table = trajectory(&env, &init, &grid)?;
    for row in &table.rows {
        row.validate()?;
    }
    let path = output::resolve_out(&a.out);
    output::write_with_manifest(
        &path,
        &output::trajectory_csv(&table),
        "trajectory",
        a,
        &Resolved {
            env: &env,
            init: &init,
        },
    )?;
    println!("{}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn run_sweep(a: &SweepArgs) -> Result<ExitCode> {
    let env = a.env.build()?;
    let init = a.init.build()?;
    let grid = a.grid()?;
    let scale = if a.raw_sweep {
        SweepScale::Raw
    } else {
        SweepScale::Dimensionless
    };
    let table = sweep_with(&env, &init, a.param.into(), &grid, scale, a.horizon()?)?;
    let ext = detect_extremum(&table);
    let path = output::resolve_out(&a.out);
    output::write_with_manifest(
        &path,
        &output::sweep_csv(&table, &ext),
        "sweep",
        a,
        &Resolved {
            env: &env,
            init: &init,
        },
    )?;
    println!("{}", path.display());
    println!("{}", output::extremum_footer(&ext));
    Ok(ExitCode::SUCCESS)
}

fn run_verify(a: &VerifyArgs) -> Result<ExitCode> {
    let quad = QuadSpec::new(a.quad_rel_tol, a.quad_abs_tol, a.max_subdivisions)?;
    if !(a.rel_tol > 0.0 && a.abs_tol >= 0.0) {
        bail!("--rel-tol must be > 0 and --abs-tol >= 0");
    }
    let tol = Tolerance {
        rel: a.rel_tol,
        abs: a.abs_tol,
        ..Tolerance::default()
    };
    let builtin = default_points();
    let mut points = if a.only_point {
        Vec::new()
    } else {
        builtin.clone()
    };
    if a.env.is_specified() || !a.times.is_empty() || a.only_point {
        let env = a.env.build()?;
        let times: Vec<f64> = if a.times.is_empty() {
            let first = builtin[0].0;
            builtin
                .iter()
                .filter(|(e, _)| *e == first)
                .map(|&(_, t)| t)
                .collect()
        } else {
            a.times.clone()
        };
        points.extend(times.into_iter().map(|t| (env, t)));
    }

    let start = Instant::now();
    let report = certify(&points, &quad, &tol)?;
    let elapsed = start.elapsed();

    println!(
        "{:<6} {:>7} {:>12} {:>12} {:>9}",
        "kernel", "checks", "max_rel_err", "max_abs_err", "failures"
    );
    for kernel in [KernelName::R, KernelName::S, KernelName::Phi] {
        let rows: Vec<&Comparison> = report.iter().filter(|c| c.kernel == kernel).collect();
        let max_rel = rows.iter().map(|c| c.rel_error()).fold(0.0, f64::max);
        let max_abs = rows.iter().map(|c| c.abs_error()).fold(0.0, f64::max);
        let failures = rows.iter().filter(|c| !c.passed).count();
        println!(
            "{:<6} {:>7} {:>12.3e} {:>12.3e} {:>9}",
            kernel.as_str(),
            rows.len(),
            max_rel,
            max_abs,
            failures
        );
    }
    let worst = report
        .iter()
        .filter(|c| !c.passed)
        .max_by(|x, y| x.rel_error().total_cmp(&y.rel_error()))
        .or_else(|| {
            report
                .iter()
                .max_by(|x, y| x.rel_error().total_cmp(&y.rel_error()))
        });
    if let Some(w) = worst {
        println!(
            "worst: {} at mu={} nu={} alpha={} gamma={} omega_c={} t={}: closed={:.16e} oracle={:.16e} (oracle err {:.1e}) rel_err={:.3e}",
            w.kernel.as_str(),
            w.env.mu(),
            w.env.nu(),
            w.env.alpha(),
            w.env.gamma(),
            w.env.omega_c(),
            w.t,
            w.closed,
            w.oracle,
            w.oracle_error,
            w.rel_error()
        );
    }
    let failures = report.iter().filter(|c| !c.passed).count();
    println!(
        "{} points, {} checks, {} failures, {:.2}s",
        points.len(),
        report.len(),
        failures,
        elapsed.as_secs_f64()
    );
    if failures == 0 {
        println!("PASS");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("FAIL");
        Ok(ExitCode::from(1))
    }
}
