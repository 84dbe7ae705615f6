//! The four subcommands. Each returns a human-readable report, the CSV files
//! it produced and whether its check passed.

use std::fmt::Write as _;

use warpgeom::export::fmt_real;
use warpgeom::inequalities::{full_report, InequalityReport};
use warpgeom::profile::check_conditions;
use warpgeom::solver::{rigidity_experiment, RigiditySetup, RigidityTable, SolverOptions};
use warpgeom::surface::{height_hessian_at_max, second_fundamental_form};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub struct Outcome {
    pub report: String,
    /// `(file name, contents)` pairs.
    pub artifacts: Vec<(String, String)>,
    pub passed: bool,
}

pub fn profile_check(cfg: &RunConfig) -> CliResult<Outcome> {
    let profile = cfg.build_profile()?;
    let tol = cfg.tol.unwrap_or(1e-10);
    let report = check_conditions(profile.as_ref(), cfg.profile.samples, tol).map_err(CliError::config)?;
    let mut csv = String::from("condition,verdict,margin,at,witness\n");
    for (name, c) in report.conditions() {
        let _ = writeln!(
            csv,
            "{name},{},{},{},{}",
            c.verdict,
            fmt_real(c.margin),
            fmt_real(c.at),
            c.witness.map(fmt_real).unwrap_or_default()
        );
    }
    Ok(Outcome {
        report: report.to_string(),
        artifacts: vec![("conditions.csv".into(), csv)],
        passed: report.all_pass(),
    })
}

pub fn surface_analyze(cfg: &RunConfig) -> CliResult<Outcome> {
    let profile = cfg.build_profile()?;
    let grid = cfg.build_grid()?;
    let spec = cfg.surface_spec(&grid)?;
    let surface = spec.build(profile, grid)?;
    let field = second_fundamental_form(&surface)?;
    let elliptic = height_hessian_at_max(&surface, &field, cfg.tol.unwrap_or(1e-6));
    let sigma1 = field.sigma(1);
    let mut report = String::new();
    let _ = writeln!(report, "nodes           {}", field.len());
    let _ = writeln!(report, "area            {}", fmt_real(field.area()));
    let _ = writeln!(
        report,
        "min sigma_1     {}",
        fmt_real(sigma1.iter().copied().fold(f64::INFINITY, f64::min))
    );
    let _ = writeln!(report, "star-shapedness {}", fmt_real(surface.star_shapedness()));
    report.push_str(&elliptic.to_string());
    report.push('\n');
    Ok(Outcome {
        report,
        artifacts: vec![("curvature.csv".into(), field.to_csv(&surface))],
        passed: elliptic.pass,
    })
}

pub fn ineq_verify(cfg: &RunConfig) -> CliResult<Outcome> {
    let profile = cfg.build_profile()?;
    let n = profile.dim();
    let grid = cfg.build_grid()?;
    let surface = cfg.surface_spec(&grid)?.build(profile, grid)?;
    let orders: Vec<usize> = if cfg.ineq.p.is_empty() {
        (1..n).collect()
    } else {
        cfg.ineq.p.clone()
    };
    let tol = cfg.tol.unwrap_or(1e-8);
    let reports = orders
        .iter()
        .map(|&p| full_report(&surface, p))
        .collect::<Result<Vec<InequalityReport>, _>>()?;
    let mut csv = format!("{}\n", InequalityReport::CSV_HEADER);
    let mut report = String::new();
    let mut passed = true;
    for r in &reports {
        csv.push_str(&r.csv_row());
        csv.push('\n');
        let ok = r.hk.gap >= -tol && r.mk.gap >= -tol;
        passed &= ok;
        let _ = writeln!(report, "{r}\n  verdict          {}", if ok { "holds" } else { "violated" });
    }
    Ok(Outcome {
        report,
        artifacts: vec![("inequalities.csv".into(), csv)],
        passed,
    })
}

pub fn rigidity_run(cfg: &RunConfig) -> CliResult<Outcome> {
    let rig = cfg
        .rigidity
        .as_ref()
        .ok_or_else(|| CliError::Config("missing [rigidity] table".into()))?;
    let profile = cfg.build_profile()?;
    let mut options = SolverOptions::default();
    if let Some(m) = rig.max_iter {
        options.max_iter = m;
    }
    if let Some(t) = rig.solver_tol {
        options.tol = t;
    }
    let dev_tol = cfg.tol.unwrap_or(1e-6 * profile.r_max());
    let mut csv = format!("{}\n", RigidityTable::CSV_HEADER);
    let mut report = String::new();
    let mut passed = true;
    for &p in &rig.p {
        let table = rigidity_experiment(&RigiditySetup {
            profile: profile.clone(),
            grid_size: cfg.grid.n_theta,
            p,
            r0: rig.r0,
            amplitudes: rig.amplitudes.clone(),
            draws: rig.draws,
            seed: cfg.seed(),
            modes: rig.modes,
            options,
        })?;
        // Skip the header line of each per-order table.
        for line in table.to_csv().lines().skip(1) {
            csv.push_str(line);
            csv.push('\n');
        }
        let converged = table.rows.iter().filter(|r| r.converged).count();
        let worst = table
            .rows
            .iter()
            .filter(|r| r.converged)
            .map(|r| r.dev)
            .fold(0.0, f64::max);
        let ok = table.all_slices(dev_tol);
        passed &= ok;
        let roots: Vec<String> = table.roots.iter().map(|r| fmt_real(*r)).collect();
        let _ = writeln!(
            report,
            "p = {p}: target sigma_p {}, slice roots [{}], {converged}/{} converged, max dev {}, {}",
            fmt_real(table.target),
            roots.join(", "),
            table.rows.len(),
            fmt_real(worst),
            if ok { "all slices" } else { "NON-SLICE SOLUTION" }
        );
        for row in table.rows.iter().filter(|r| r.failure.is_some()) {
            let _ = writeln!(
                report,
                "  seed {} amplitude {}: {}",
                row.seed,
                fmt_real(row.amplitude),
                row.failure.as_deref().unwrap_or("")
            );
        }
    }
    Ok(Outcome {
        report,
        artifacts: vec![("rigidity.csv".into(), csv)],
        passed,
    })
}
