//! JSON configuration parsing and validation.

use serde::Deserialize;

use adrc_core::{
    continuous_tf_general, controller_gains, discrete_tf_general, observer_gains_ct,
    observer_gains_dt, ContinuousAdrcTf, ContinuousTuning, DiscreteAdrcTf, DiscreteTuning,
    GainSet, PlantSpec,
};

use crate::CliError;

pub const EXIT_VERIFY_FAIL: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_DESIGN: u8 = 3;
pub const EXIT_ANALYSIS: u8 = 4;
pub const EXIT_DIVERGENCE: u8 = 5;

/// Design configuration: either bandwidth parameters (`omega_cl`, `k_eso`)
/// or explicit gains (`k`, `l`, plus `l_d` when `T` is present), never a
/// partial mix.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub n: usize,
    pub b0: f64,
    #[serde(default)]
    pub omega_cl: Option<f64>,
    #[serde(default)]
    pub k_eso: Option<f64>,
    #[serde(default, rename = "T")]
    pub sample_time: Option<f64>,
    #[serde(default)]
    pub k: Option<Vec<f64>>,
    #[serde(default)]
    pub l: Option<Vec<f64>>,
    #[serde(default)]
    pub l_d: Option<Vec<f64>>,
    #[serde(default)]
    pub u_min: Option<f64>,
    #[serde(default)]
    pub u_max: Option<f64>,
}

/// A fully validated design with every coefficient set computed through
/// the general matrix paths (so explicit-gain and bandwidth configurations
/// run the identical code).
pub struct ResolvedDesign {
    pub plant: PlantSpec,
    pub k: Vec<f64>,
    pub l: Vec<f64>,
    pub l_d: Option<Vec<f64>>,
    pub bandwidth: Option<(f64, f64)>,
    pub sample_time: Option<f64>,
    pub z_eso: Option<f64>,
    pub limits: Option<(f64, f64)>,
    pub continuous: ContinuousAdrcTf,
    pub discrete: Option<DiscreteAdrcTf>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_CONFIG, message: msg.into() }
}

fn design_err(e: adrc_core::Error) -> CliError {
    CliError { code: EXIT_DESIGN, message: format!("design degeneracy: {e}") }
}

pub fn load_design(path: &std::path::Path) -> Result<ResolvedDesign, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    let config: DesignConfig = serde_json::from_str(&text)
        .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    resolve(config)
}

pub fn resolve(config: DesignConfig) -> Result<ResolvedDesign, CliError> {
    let plant = PlantSpec::new(config.n, config.b0)
        .map_err(|e| config_err(format!("field n/b0: {e}")))?;

    let bandwidth_mode = config.omega_cl.is_some() || config.k_eso.is_some();
    let explicit_mode = config.k.is_some() || config.l.is_some() || config.l_d.is_some();
    if bandwidth_mode && explicit_mode {
        return Err(config_err(
            "give either bandwidth parameters (omega_cl, k_eso) or explicit gains (k, l, l_d), not a mix",
        ));
    }

    if let Some(t) = config.sample_time {
        if !t.is_finite() || t <= 0.0 {
            return Err(config_err(format!("field T: sample time must be > 0, got {t}")));
        }
    }
    let limits = match (config.u_min, config.u_max) {
        (None, None) => None,
        (Some(lo), Some(hi)) if lo < hi => Some((lo, hi)),
        (Some(_), Some(_)) => {
            return Err(config_err("fields u_min/u_max: u_min must be below u_max"))
        }
        _ => return Err(config_err("fields u_min/u_max: give both limits or neither")),
    };

    let (k, l, l_d, bandwidth, z_eso);
    if explicit_mode {
        let kk = config.k.ok_or_else(|| config_err("field k: required with explicit gains"))?;
        let ll = config.l.ok_or_else(|| config_err("field l: required with explicit gains"))?;
        if kk.len() != config.n {
            return Err(config_err(format!(
                "field k: expected {} gains, got {}",
                config.n,
                kk.len()
            )));
        }
        if ll.len() != config.n + 1 {
            return Err(config_err(format!(
                "field l: expected {} gains, got {}",
                config.n + 1,
                ll.len()
            )));
        }
        match (&config.l_d, config.sample_time) {
            (Some(ld), Some(_)) if ld.len() != config.n + 1 => {
                return Err(config_err(format!(
                    "field l_d: expected {} gains, got {}",
                    config.n + 1,
                    ld.len()
                )))
            }
            (Some(_), None) => return Err(config_err("field l_d: requires T")),
            (None, Some(_)) => {
                return Err(config_err(
                    "field l_d: discrete observer gains required when T is present with explicit gains",
                ))
            }
            _ => {}
        }
        k = kk;
        l = ll;
        l_d = config.l_d;
        bandwidth = None;
        z_eso = None;
    } else {
        let omega_cl = config
            .omega_cl
            .ok_or_else(|| config_err("field omega_cl: required for bandwidth parameterization"))?;
        let k_eso = config
            .k_eso
            .ok_or_else(|| config_err("field k_eso: required for bandwidth parameterization"))?;
        let tuning = ContinuousTuning::new(omega_cl, k_eso)
            .map_err(|e| config_err(format!("fields omega_cl/k_eso: {e}")))?;
        k = controller_gains(config.n, omega_cl).map_err(design_err)?;
        l = observer_gains_ct(config.n, &tuning).map_err(design_err)?;
        if let Some(t) = config.sample_time {
            let dt = DiscreteTuning::from_bandwidth(t, omega_cl, k_eso)
                .map_err(|e| config_err(format!("field T: {e}")))?;
            l_d = Some(observer_gains_dt(config.n, &dt).map_err(design_err)?);
            z_eso = Some(dt.z_eso());
        } else {
            l_d = None;
            z_eso = None;
        }
        bandwidth = Some((omega_cl, k_eso));
    }

    let gains = GainSet::from_gains(k.clone(), l.clone())
        .map_err(|e| config_err(format!("fields k/l: {e}")))?;
    let continuous = continuous_tf_general(&plant, &gains).map_err(design_err)?;
    let discrete = match (&l_d, config.sample_time) {
        (Some(ld), Some(t)) => Some(discrete_tf_general(&plant, &k, ld, t).map_err(design_err)?),
        _ => None,
    };

    Ok(ResolvedDesign {
        plant,
        k,
        l,
        l_d,
        bandwidth,
        sample_time: config.sample_time,
        z_eso,
        limits,
        continuous,
        discrete,
    })
}

#[derive(Debug, Deserialize)]
pub struct SegmentDef {
    pub at: f64,
    pub value: f64,
}

#[derive(Debug, Deserialize)]
pub struct PlantDef {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControllerForm {
    #[default]
    Tf,
    Ss,
}

/// Scenario file: the simulated true plant, profiles and noise.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub plant: PlantDef,
    pub sample_time: f64,
    pub steps: usize,
    #[serde(default)]
    pub r_profile: Vec<SegmentDef>,
    #[serde(default)]
    pub d_profile: Vec<SegmentDef>,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub input_limits: Option<[f64; 2]>,
    #[serde(default)]
    pub controller: ControllerForm,
}

pub fn load_scenario(path: &std::path::Path) -> Result<ScenarioFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

/// `num0,num1,.../den0,den1,...` with ascending coefficients.
pub fn parse_plant_arg(arg: &str) -> Result<adrc_core::RationalTf, CliError> {
    let (num_str, den_str) = arg
        .split_once('/')
        .ok_or_else(|| config_err("--plant: expected num0,num1,.../den0,den1,..."))?;
    let parse_list = |s: &str| -> Result<Vec<f64>, CliError> {
        s.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| config_err(format!("--plant: bad coefficient `{tok}`")))
            })
            .collect()
    };
    adrc_core::RationalTf::continuous(parse_list(num_str)?, parse_list(den_str)?)
        .map_err(|e| config_err(format!("--plant: {e}")))
}
