//! Command implementations and their output schemas.
//!
//! CSV numbers are written with the shortest representation that
//! round-trips to the same double, so regression files are diff-stable.

use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use strobosim::scattering::c_series;
use strobosim::sweep::{extract_boundary, scan, BoundaryResult, RegionMap};
use strobosim::witnesses::{
    classify_divisibility, concurrence_witness, entanglement_revival_witness, fidelity_witness,
    relative_entropy_witness, Verdict, WitnessSeries,
};
use strobosim::{ChannelParams64, Error as CoreError};

use crate::config::{CommonArgs, Format, JobConfig, WitnessChoice};

/// Command failure carrying the exit code of the documented contract.
#[derive(Debug)]
pub enum AppError {
    BadInput(String),
    Io(String),
    Numerical(String),
}

impl AppError {
    pub fn code(&self) -> u8 {
        match self {
            AppError::BadInput(_) => 1,
            AppError::Io(_) => 2,
            AppError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::BadInput(m) | AppError::Io(m) | AppError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParams(_)
            | CoreError::IndexOutOfRange(_)
            | CoreError::EmptySeries
            | CoreError::DegenerateProbes
            | CoreError::UnsupportedPhase(_) => AppError::BadInput(e.to_string()),
            CoreError::DegenerateSpectrum
            | CoreError::SingularStep { .. }
            | CoreError::InvalidState(_)
            | CoreError::Numerical(_) => AppError::Numerical(e.to_string()),
        }
    }
}

fn resolve(args: CommonArgs) -> Result<JobConfig, AppError> {
    args.resolve().map_err(AppError::BadInput)
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), AppError> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| AppError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| AppError::Io(format!("cannot write to standard output: {e}")))
        }
    }
}

/// `strobosim trace`: the c_L series as CSV (`L, re_c, im_c, abs_c`), or
/// the coarse-grained magnitudes (`n, abs_c_bar`) when `--delta` is given.
pub fn cmd_trace(args: CommonArgs) -> Result<(), AppError> {
    let job = resolve(args)?;
    let series = c_series(job.l_max, &job.params);
    let mut out = String::new();
    match job.delta {
        None => {
            out.push_str("L,re_c,im_c,abs_c\n");
            for (l, c) in series.values.iter().enumerate() {
                out.push_str(&format!("{l},{},{},{}\n", c.re, c.im, c.norm()));
            }
        }
        Some(delta) => {
            let grains = strobosim::witnesses::coarse_grain(&series, delta)?;
            out.push_str("n,abs_c_bar\n");
            for (i, g) in grains.iter().enumerate() {
                out.push_str(&format!("{},{g}\n", i + 1));
            }
        }
    }
    write_output(job.out.as_deref(), &out)
}

/// JSON report emitted by `strobosim classify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub verdict: Verdict,
    pub violation_steps: Vec<usize>,
    pub singular_steps: Vec<usize>,
    pub horizon: usize,
    pub params: ChannelParams64,
}

/// `strobosim classify`: divisibility verdict for the configured channel.
/// Exits 0 regardless of the verdict.
pub fn cmd_classify(args: CommonArgs) -> Result<(), AppError> {
    let job = resolve(args)?;
    let series = c_series(job.l_max, &job.params);
    let w = classify_divisibility(&series, job.tol)?;
    let report = ClassifyReport {
        verdict: w.verdict,
        violation_steps: w.violation_steps,
        singular_steps: w.singular_steps,
        horizon: w.horizon,
        params: job.params,
    };
    let mut json = serde_json::to_string_pretty(&report)
        .map_err(|e| AppError::Numerical(format!("cannot serialize report: {e}")))?;
    json.push('\n');
    write_output(job.out.as_deref(), &json)
}

fn run_witness(job: &JobConfig) -> Result<WitnessSeries<f64>, AppError> {
    let w = match job.witness {
        WitnessChoice::Divisibility => {
            classify_divisibility(&c_series(job.l_max, &job.params), job.tol)?
        }
        WitnessChoice::Entanglement => {
            entanglement_revival_witness(&job.params, job.l_max, job.xi, job.tol)?
        }
        WitnessChoice::Concurrence => concurrence_witness(&job.params, job.l_max, job.tol)?,
        WitnessChoice::Fidelity => {
            fidelity_witness(&job.params, job.l_max, job.xi1, job.xi2, job.tol)?
        }
        WitnessChoice::RelativeEntropy => {
            relative_entropy_witness(&job.params, job.l_max, job.xi1, job.xi2, job.tol)?
        }
    };
    Ok(w)
}

/// `strobosim witness`: the witness values along the trajectory as CSV
/// (`L, value, violation_flag`), with the witness kind and probe
/// parameters recorded in comment lines.
pub fn cmd_witness(args: CommonArgs) -> Result<(), AppError> {
    let job = resolve(args)?;
    let w = run_witness(&job)?;
    let mut out = String::new();
    out.push_str(&format!("# witness = {}\n", job.witness_name()));
    match job.witness {
        WitnessChoice::Entanglement => out.push_str(&format!("# xi = {}\n", job.xi)),
        WitnessChoice::Fidelity | WitnessChoice::RelativeEntropy => {
            out.push_str(&format!("# xi1 = {}\n# xi2 = {}\n", job.xi1, job.xi2));
        }
        _ => {}
    }
    out.push_str(&format!("# verdict = {}\n", verdict_name(w.verdict)));
    out.push_str("L,value,violation_flag\n");
    for (l, v) in w.values.iter().enumerate() {
        let flag = u8::from(w.violation_steps.contains(&l));
        out.push_str(&format!("{l},{v},{flag}\n"));
    }
    write_output(job.out.as_deref(), &out)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Markovian => "markovian",
        Verdict::NonMarkovian => "non_markovian",
    }
}

fn sweep_csv(map: &RegionMap) -> String {
    let v1 = map.axis1.values();
    let v2 = map.axis2.values();
    let mut out = String::new();
    out.push_str(&format!(
        "# axis1 = {}\n# axis2 = {}\n# verdict: 0 = markovian, 1 = non_markovian, 2 = singular\n",
        map.axis1.param.name(),
        map.axis2.param.name()
    ));
    out.push_str("axis1,axis2,verdict\n");
    for (i, row) in map.verdicts.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", v1[i], v2[j], cell.code()));
        }
    }
    out
}

fn boundary_csv(map: &RegionMap, boundary: &BoundaryResult) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# axis1 = {}\n# axis2 = {}\n# single_class = {}\n",
        map.axis1.param.name(),
        map.axis2.param.name(),
        boundary.single_class
    ));
    out.push_str("axis1,axis2\n");
    for (x, y) in &boundary.points {
        out.push_str(&format!("{x},{y}\n"));
    }
    out
}

/// `strobosim sweep`: verdict grid over the configured plane; CSV long
/// format (`axis1, axis2, verdict`) or JSON mirroring the region map.
pub fn cmd_sweep(args: CommonArgs) -> Result<(), AppError> {
    let job = resolve(args)?;
    let (Some(axis1), Some(axis2)) = (job.axis1, job.axis2) else {
        return Err(AppError::BadInput(
            "sweep requires --axis1 and --axis2".into(),
        ));
    };
    let map = scan(
        axis1,
        axis2,
        &job.params,
        job.sweep_witness(),
        job.l_max,
        job.tol,
    )?;
    let content = match job.format {
        Format::Csv => sweep_csv(&map),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&map)
                .map_err(|e| AppError::Numerical(format!("cannot serialize map: {e}")))?;
            s.push('\n');
            s
        }
    };
    write_output(job.out.as_deref(), &content)?;
    if let Some(bpath) = &job.boundary_out {
        let boundary = extract_boundary(&map);
        write_output(Some(bpath), &boundary_csv(&map, &boundary))?;
    }
    Ok(())
}
