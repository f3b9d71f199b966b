//! Job configuration: flag set shared by all subcommands, the flat
//! `key = value` config-file format, and the merge rule (flags override
//! file values).

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use strobosim::sweep::{AxisSpec, Param, SweepWitness};
use strobosim::ChannelParams64;

/// Flags accepted by every subcommand. All of them may also appear as keys
/// in a config file (`--config`); explicit flags win over file values.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Reflectivity of the system-environment beam splitter, in [0, 1]
    #[arg(long)]
    pub r1: Option<f64>,
    /// Reflectivity of the feedback beam splitter (memory), in [0, 1]
    #[arg(long)]
    pub r2: Option<f64>,
    /// Phase shift per step; accepts plain numbers or multiples of pi
    /// ("pi", "pi/2", "0.5pi", "3pi/4")
    #[arg(long)]
    pub phi: Option<String>,
    /// Thermal photon number of the environmental modes, >= 0
    #[arg(long)]
    pub nt: Option<f64>,
    /// Trajectory horizon: number of collisions L
    #[arg(long)]
    pub lmax: Option<usize>,
    /// Witness kind: divisibility | entanglement | concurrence | fidelity |
    /// relative_entropy
    #[arg(long)]
    pub witness: Option<String>,
    /// Squeezing of the two-mode probe (entanglement witness)
    #[arg(long)]
    pub xi: Option<f64>,
    /// Squeezing of the first single-mode probe (fidelity / relative
    /// entropy witnesses)
    #[arg(long)]
    pub xi1: Option<f64>,
    /// Squeezing of the second single-mode probe
    #[arg(long)]
    pub xi2: Option<f64>,
    /// Grain size: switches the trace output to the coarse-grained series
    #[arg(long)]
    pub delta: Option<usize>,
    /// First sweep axis, "param:min:max[:points]" with param one of
    /// r1 | r2 | phi | nt
    #[arg(long)]
    pub axis1: Option<String>,
    /// Second sweep axis, same syntax as --axis1
    #[arg(long)]
    pub axis2: Option<String>,
    /// Default points per sweep axis when an axis spec omits its count
    #[arg(long)]
    pub res: Option<usize>,
    /// Output path; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: csv | json
    #[arg(long)]
    pub format: Option<String>,
    /// Absolute tolerance for revival detection
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for randomized selections (reserved; accepted for config
    /// compatibility)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Extra output path for the extracted sweep boundary polyline
    #[arg(long = "boundary-out")]
    pub boundary_out: Option<PathBuf>,
    /// Flat key = value config file providing defaults for any of the
    /// flags above
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessChoice {
    Divisibility,
    Entanglement,
    Concurrence,
    Fidelity,
    RelativeEntropy,
}

/// A fully resolved job: flags merged over config-file values, defaults
/// applied, everything validated.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub params: ChannelParams64,
    pub l_max: usize,
    pub witness: WitnessChoice,
    pub xi: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub delta: Option<usize>,
    pub axis1: Option<AxisSpec>,
    pub axis2: Option<AxisSpec>,
    pub out: Option<PathBuf>,
    pub boundary_out: Option<PathBuf>,
    pub format: Format,
    pub tol: f64,
}

const KNOWN_KEYS: &[&str] = &[
    "r1", "r2", "phi", "nt", "lmax", "witness", "xi", "xi1", "xi2", "delta", "axis1", "axis2",
    "res", "out", "format", "tol", "seed", "boundary_out",
];

fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "config line {}: expected `key = value`, got `{line}`",
                lineno + 1
            ));
        };
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(format!("config line {}: unknown key `{key}`", lineno + 1));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(format!("config line {}: duplicate key `{key}`", lineno + 1));
        }
    }
    Ok(map)
}

/// Parse a phase: either a plain number or a multiple of pi written as
/// "[coef]pi[/divisor]", e.g. "pi", "2pi", "pi/2", "0.5pi", "3pi/4".
pub fn parse_phi(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let lower = t.to_ascii_lowercase();
    let Some(pos) = lower.find("pi") else {
        return Err(format!("cannot parse phase `{s}`"));
    };
    let (head, tail) = (&lower[..pos], &lower[pos + 2..]);
    let coef = if head.is_empty() {
        1.0
    } else {
        head.parse::<f64>()
            .map_err(|_| format!("cannot parse phase `{s}`"))?
    };
    let div = if tail.is_empty() {
        1.0
    } else if let Some(d) = tail.strip_prefix('/') {
        let d: f64 = d
            .parse()
            .map_err(|_| format!("cannot parse phase `{s}`"))?;
        if d == 0.0 {
            return Err(format!("zero divisor in phase `{s}`"));
        }
        d
    } else {
        return Err(format!("cannot parse phase `{s}`"));
    };
    Ok(coef * std::f64::consts::PI / div)
}

fn parse_axis(s: &str, default_res: usize) -> Result<AxisSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 && parts.len() != 4 {
        return Err(format!(
            "axis `{s}`: expected param:min:max[:points]"
        ));
    }
    let param = match parts[0] {
        "r1" => Param::R1,
        "r2" => Param::R2,
        "phi" => Param::Phi,
        "nt" => Param::NT,
        other => return Err(format!("axis `{s}`: unknown parameter `{other}`")),
    };
    let min = if param == Param::Phi {
        parse_phi(parts[1])?
    } else {
        parts[1]
            .parse()
            .map_err(|_| format!("axis `{s}`: bad minimum `{}`", parts[1]))?
    };
    let max = if param == Param::Phi {
        parse_phi(parts[2])?
    } else {
        parts[2]
            .parse()
            .map_err(|_| format!("axis `{s}`: bad maximum `{}`", parts[2]))?
    };
    let n = if parts.len() == 4 {
        parts[3]
            .parse()
            .map_err(|_| format!("axis `{s}`: bad point count `{}`", parts[3]))?
    } else {
        default_res
    };
    AxisSpec::new(param, min, max, n).map_err(|e| e.to_string())
}

fn take<T, F>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str, parse: F) -> Result<Option<T>, String>
where
    F: FnOnce(&str) -> Result<T, String>,
{
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        Some(v) => parse(v).map(Some).map_err(|e| format!("config key `{key}`: {e}")),
        None => Ok(None),
    }
}

fn num<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("cannot parse `{v}`"))
}

impl CommonArgs {
    /// Merge flags over config-file values, apply defaults, validate.
    pub fn resolve(self) -> Result<JobConfig, String> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
                parse_config_file(&text)?
            }
            None => BTreeMap::new(),
        };

        let r1 = take(self.r1, &file, "r1", num)?.ok_or("missing parameter r1")?;
        let r2 = take(self.r2, &file, "r2", num)?.ok_or("missing parameter r2")?;
        let phi_raw = take(self.phi, &file, "phi", |v| Ok(v.to_string()))?;
        let phi = match phi_raw {
            Some(s) => parse_phi(&s)?,
            None => 0.0,
        };
        let nt = take(self.nt, &file, "nt", num)?.unwrap_or(0.0);
        let params = ChannelParams64::new(r1, r2, phi, nt).map_err(|e| e.to_string())?;

        let l_max = take(self.lmax, &file, "lmax", num)?.unwrap_or(200);
        let witness = match take(self.witness, &file, "witness", |v| Ok(v.to_string()))?.as_deref()
        {
            None | Some("divisibility") | Some("coefficient") => WitnessChoice::Divisibility,
            Some("entanglement") => WitnessChoice::Entanglement,
            Some("concurrence") => WitnessChoice::Concurrence,
            Some("fidelity") => WitnessChoice::Fidelity,
            Some("relative_entropy") => WitnessChoice::RelativeEntropy,
            Some(other) => return Err(format!("unknown witness `{other}`")),
        };
        let xi = take(self.xi, &file, "xi", num)?.unwrap_or(1.0);
        let xi1 = take(self.xi1, &file, "xi1", num)?.unwrap_or(1.0);
        let xi2 = take(self.xi2, &file, "xi2", num)?.unwrap_or(0.5);
        let delta = take(self.delta, &file, "delta", num)?;
        let res = take(self.res, &file, "res", num)?.unwrap_or(101);
        let axis1 = take(self.axis1, &file, "axis1", |v| Ok(v.to_string()))?
            .map(|s| parse_axis(&s, res))
            .transpose()?;
        let axis2 = take(self.axis2, &file, "axis2", |v| Ok(v.to_string()))?
            .map(|s| parse_axis(&s, res))
            .transpose()?;
        let out = take(self.out, &file, "out", |v| Ok(PathBuf::from(v)))?;
        let boundary_out =
            take(self.boundary_out, &file, "boundary_out", |v| Ok(PathBuf::from(v)))?;
        let format = match take(self.format, &file, "format", |v| Ok(v.to_string()))?.as_deref() {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => return Err(format!("unknown format `{other}`")),
        };
        let tol = take(self.tol, &file, "tol", num)?.unwrap_or(strobosim::tol::MONOTONICITY);
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(format!("tolerance must be a non-negative number, got {tol}"));
        }
        // seed is accepted for config-file compatibility but no current
        // command draws random numbers
        let _ = take(self.seed, &file, "seed", num::<u64>)?;

        Ok(JobConfig {
            params,
            l_max,
            witness,
            xi,
            xi1,
            xi2,
            delta,
            axis1,
            axis2,
            out,
            boundary_out,
            format,
            tol,
        })
    }
}

impl JobConfig {
    pub fn sweep_witness(&self) -> SweepWitness {
        match self.witness {
            WitnessChoice::Divisibility => SweepWitness::Divisibility,
            WitnessChoice::Entanglement => SweepWitness::Entanglement { xi: self.xi },
            WitnessChoice::Concurrence => SweepWitness::Concurrence,
            WitnessChoice::Fidelity => SweepWitness::Fidelity {
                xi1: self.xi1,
                xi2: self.xi2,
            },
            WitnessChoice::RelativeEntropy => SweepWitness::RelativeEntropy {
                xi1: self.xi1,
                xi2: self.xi2,
            },
        }
    }

    pub fn witness_name(&self) -> &'static str {
        match self.witness {
            WitnessChoice::Divisibility => "divisibility",
            WitnessChoice::Entanglement => "entanglement",
            WitnessChoice::Concurrence => "concurrence",
            WitnessChoice::Fidelity => "fidelity",
            WitnessChoice::RelativeEntropy => "relative_entropy",
        }
    }
}
