use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use qes_core::oracle::{self, symmetric_grid};
use qes_core::ratfun::text;
use qes_core::spectral::{classify_with_epsilon, NonsingularVerdict};
use qes_core::{
    build_model, build_wave_spec, eval_wave, verify_nonsingular, Certainty, DiscretizationPlan,
    GeneratorProfile, Level, LevelPrediction, QesError, QesModel, Rational, RationalFunction,
    SpectrumReport,
};
use serde::Serialize;

use crate::config::Job;
use crate::{CliError, Command, Output};

const HEADER: &str = "# convention: H = -1/2 d^2/dx^2 + V(x); potentials are V itself, not 2V\n";

fn model_error(e: QesError) -> CliError {
    CliError::Model(e.into())
}

/// Oracle failures mean the numerical check could not be carried out.
fn oracle_error(e: QesError) -> CliError {
    CliError::Verification(e.into())
}

fn render<T: Serialize>(command: Command, report: &T) -> Result<String, CliError> {
    let body = toml::to_string(report)
        .context("serializing report")
        .map_err(CliError::Io)?;
    Ok(format!("# qes {} report\n{HEADER}{body}", command.name()))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))
        .map_err(CliError::Io)?;
    let path = dir.join(name);
    fs::write(&path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(CliError::Io)?;
    Ok(path)
}

fn save_report(job: &Job, command: Command, report: &str) -> Result<(), CliError> {
    if let Some(dir) = &job.out {
        write_file(dir, &format!("{}.toml", command.name()), report)?;
    }
    Ok(())
}

fn model(job: &Job) -> Result<QesModel, CliError> {
    build_model(&job.wplus, job.epsilon.as_ref()).map_err(model_error)
}

#[derive(Serialize)]
struct AnalyzeReport<'a> {
    source: &'a str,
    admissible: bool,
    #[serde(with = "text::rational")]
    epsilon: Rational,
    certainty: Certainty,
    wplus: &'a RationalFunction,
    prediction: LevelPrediction,
    nonsingular: NonsingularVerdict,
    profile: &'a GeneratorProfile,
}

pub fn analyze(job: &Job) -> Result<Output, CliError> {
    let profile = classify_with_epsilon(&job.wplus, job.epsilon.as_ref()).map_err(model_error)?;
    let m = model(job)?;
    let nonsingular = verify_nonsingular(&m.v_minus);
    let report = render(
        Command::Analyze,
        &AnalyzeReport {
            source: &job.label,
            admissible: nonsingular.nonsingular,
            epsilon: profile.epsilon.clone(),
            certainty: profile.certainty,
            wplus: &job.wplus,
            prediction: m.prediction(),
            nonsingular,
            profile: &profile,
        },
    )?;
    save_report(job, Command::Analyze, &report)?;
    Ok(Output::ok(report))
}

#[derive(Serialize)]
struct ConstructReport<'a> {
    source: &'a str,
    #[serde(with = "text::rational")]
    epsilon: Rational,
    harmonic_degeneration: bool,
    identities_hold: bool,
    prediction: LevelPrediction,
    w: &'a RationalFunction,
    w1: &'a RationalFunction,
    wminus: &'a RationalFunction,
    wplus: &'a RationalFunction,
    v_minus: &'a RationalFunction,
    v_plus: &'a RationalFunction,
}

pub fn construct(job: &Job) -> Result<Output, CliError> {
    let m = model(job)?;
    let report = render(
        Command::Construct,
        &ConstructReport {
            source: &job.label,
            epsilon: m.epsilon().clone(),
            harmonic_degeneration: m.harmonic_degeneration(),
            identities_hold: m.identities_hold(),
            prediction: m.prediction(),
            w: &m.pair.w,
            w1: &m.pair.w1,
            wminus: &m.pair.wminus,
            wplus: &m.pair.wplus,
            v_minus: &m.v_minus,
            v_plus: &m.v_plus,
        },
    )?;
    save_report(job, Command::Construct, &report)?;
    Ok(Output::ok(report))
}

#[derive(Serialize)]
struct SpectrumOutput<'a> {
    source: &'a str,
    prediction: &'a LevelPrediction,
    spectrum: &'a SpectrumReport,
}

fn discrepancy_table(r: &SpectrumReport) -> String {
    let mut s = String::from("level     predicted  matched  discrepancy  tolerance\n");
    for (name, p, m, d) in [
        (
            "E=0",
            r.predicted_zero_index,
            r.matched_zero_index,
            r.discrepancy_zero,
        ),
        (
            "E=eps",
            r.predicted_epsilon_index,
            r.matched_epsilon_index,
            r.discrepancy_epsilon,
        ),
    ] {
        let _ = writeln!(
            s,
            "{name:<9} {p:>9}  {m:>7}  {d:>11.3e}  {:>9.3e}",
            r.tolerance
        );
    }
    s
}

pub fn spectrum(job: &Job) -> Result<Output, CliError> {
    let m = model(job)?;
    let prediction = m.prediction();
    let r = oracle::verify_prediction(&m, &prediction, &job.oracle).map_err(oracle_error)?;
    let report = render(
        Command::Spectrum,
        &SpectrumOutput {
            source: &job.label,
            prediction: &prediction,
            spectrum: &r,
        },
    )?;
    save_report(job, Command::Spectrum, &report)?;
    if r.passed() {
        Ok(Output::ok(report))
    } else {
        Ok(Output {
            code: crate::EXIT_VERIFY,
            report,
            message: Some(format!("verification failed\n{}", discrepancy_table(&r))),
        })
    }
}

/// 12 significant digits; negative zero is printed as zero.
fn num(v: f64) -> String {
    format!("{:.11e}", if v == 0.0 { 0.0 } else { v })
}

fn csv(header: &str, columns: &[&[f64]]) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for i in 0..columns[0].len() {
        let row: Vec<String> = columns.iter().map(|c| num(c[i])).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Linear interpolation of a vector on the plan grid; zero outside the box.
fn interpolate(plan: &DiscretizationPlan, values: &[f64], x: f64) -> f64 {
    let l = plan.half_width;
    if !(x > -l && x < l) {
        return 0.0;
    }
    let t = (x + l) / plan.step();
    let i = (t.floor() as usize).min(values.len() - 2);
    let f = t - i as f64;
    values[i] * (1.0 - f) + values[i + 1] * f
}

#[derive(Serialize)]
struct ExportReport<'a> {
    source: &'a str,
    directory: String,
    files: Vec<String>,
    grid_half_width: f64,
    grid_points: usize,
    oracle_plan: DiscretizationPlan,
    eigenvalue_zero: f64,
    eigenvalue_epsilon: f64,
    max_abs_diff_zero: f64,
    max_abs_diff_epsilon: f64,
}

pub fn export(job: &Job) -> Result<Output, CliError> {
    let m = model(job)?;
    let prediction = m.prediction();
    let plan = oracle::plan_grid(&m.v_minus, m.epsilon_f64(), &job.oracle).map_err(oracle_error)?;
    let k = prediction.index_epsilon.max(prediction.index_zero_energy) + 1;
    let energies = oracle::eigenvalues(&m.v_minus, &plan, k).map_err(oracle_error)?;
    let box_grid = plan.grid();

    let half_width = job.grid_half_width.unwrap_or(plan.half_width);
    let grid = symmetric_grid(half_width, job.grid_points);
    let v = m.v_minus.compile();
    let potential: Vec<f64> = grid.iter().map(|&x| v.eval(x)).collect();

    let dir = job.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let mut files = vec![write_file(
        &dir,
        "potential.csv",
        &csv("x,V", &[&grid, &potential]),
    )?];

    let mut analytic = Vec::new();
    let mut numeric = Vec::new();
    let mut diffs = Vec::new();
    for (level, index, name) in [
        (
            Level::ZeroEnergy,
            prediction.index_zero_energy,
            "eigvec_zero.csv",
        ),
        (
            Level::EpsilonLevel,
            prediction.index_epsilon,
            "eigvec_epsilon.csv",
        ),
    ] {
        let spec = build_wave_spec(&m, level).map_err(model_error)?;
        let numeric_box =
            oracle::eigenvector(&m.v_minus, &plan, energies[index]).map_err(oracle_error)?;
        let analytic_box = eval_wave(&spec, &box_grid).map_err(model_error)?;
        let diff: Vec<f64> = numeric_box
            .iter()
            .zip(&analytic_box)
            .map(|(a, b)| (a - b).abs())
            .collect();
        diffs.push(diff.iter().cloned().fold(0.0, f64::max));
        files.push(write_file(
            &dir,
            name,
            &csv(
                "x,psi_numeric,psi_analytic,abs_diff",
                &[&box_grid, &numeric_box, &analytic_box, &diff],
            ),
        )?);
        analytic.push(eval_wave(&spec, &grid).map_err(model_error)?);
        numeric.push(
            grid.iter()
                .map(|&x| interpolate(&plan, &numeric_box, x))
                .collect::<Vec<_>>(),
        );
    }
    files.push(write_file(
        &dir,
        "wavefunctions.csv",
        &csv(
            "x,psi0,psi_eps,psi0_numeric,psi_eps_numeric",
            &[&grid, &analytic[0], &analytic[1], &numeric[0], &numeric[1]],
        ),
    )?);

    let report = render(
        Command::Export,
        &ExportReport {
            source: &job.label,
            directory: dir.display().to_string(),
            files: files
                .iter()
                .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
                .collect(),
            grid_half_width: half_width,
            grid_points: grid.len(),
            oracle_plan: plan,
            eigenvalue_zero: energies[prediction.index_zero_energy],
            eigenvalue_epsilon: energies[prediction.index_epsilon],
            max_abs_diff_zero: diffs[0],
            max_abs_diff_epsilon: diffs[1],
        },
    )?;
    write_file(&dir, "export.toml", &report)?;
    Ok(Output::ok(report))
}
