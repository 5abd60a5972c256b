//! `adrc simulate`: closed-loop run producing a trace CSV and metrics JSON.

use std::path::Path;

use adrc_core::{
    metrics, plant_from_tf, run_closed_loop, zoh_discretize_plant, DiscreteObserverMatrices,
    RationalTf, Scenario, Segment, SimTrace, SsController, TfController,
};

use crate::config::{ControllerForm, ResolvedDesign, ScenarioFile, EXIT_CONFIG, EXIT_DESIGN, EXIT_DIVERGENCE};
use crate::jsonout::Object;
use crate::CliError;

pub fn run(
    design: &ResolvedDesign,
    scenario_file: &ScenarioFile,
    trace_path: &Path,
    metrics_path: &Path,
) -> Result<(), CliError> {
    let coeffs = design.discrete.as_ref().ok_or(CliError {
        code: EXIT_CONFIG,
        message: "simulate requires a design config with T".into(),
    })?;
    let t = design.sample_time.expect("discrete coefficients imply T");
    if (scenario_file.sample_time - t).abs() > 1e-12 * t.abs() {
        return Err(CliError {
            code: EXIT_CONFIG,
            message: format!(
                "scenario sample_time {} does not match design T {t}",
                scenario_file.sample_time
            ),
        });
    }

    let plant_tf =
        RationalTf::continuous(scenario_file.plant.num.clone(), scenario_file.plant.den.clone())
            .map_err(|e| CliError { code: EXIT_CONFIG, message: format!("scenario plant: {e}") })?;
    let plant = plant_from_tf(&plant_tf)
        .map_err(|e| CliError { code: EXIT_CONFIG, message: format!("scenario plant: {e}") })?;
    let discrete_plant = zoh_discretize_plant(&plant, t)
        .map_err(|e| CliError { code: EXIT_DESIGN, message: format!("plant discretization: {e}") })?;

    let scenario = Scenario {
        sample_time: scenario_file.sample_time,
        steps: scenario_file.steps,
        r_profile: scenario_file
            .r_profile
            .iter()
            .map(|s| Segment { at: s.at, value: s.value })
            .collect(),
        d_profile: scenario_file
            .d_profile
            .iter()
            .map(|s| Segment { at: s.at, value: s.value })
            .collect(),
        noise_sigma: scenario_file.noise_sigma,
        seed: scenario_file.seed,
        input_limits: scenario_file.input_limits.map(|[lo, hi]| (lo, hi)),
    };

    let sim_err = |e: adrc_core::Error| CliError {
        code: EXIT_CONFIG,
        message: format!("simulation setup: {e}"),
    };
    let trace = match scenario_file.controller {
        ControllerForm::Tf => {
            let mut ctrl = TfController::new(coeffs, design.limits).map_err(sim_err)?;
            run_closed_loop(&discrete_plant, &mut ctrl, &scenario).map_err(sim_err)?
        }
        ControllerForm::Ss => {
            let l_d = design.l_d.as_ref().expect("discrete coefficients imply l_d");
            let mats = DiscreteObserverMatrices::new(&design.plant, l_d, t).map_err(sim_err)?;
            let mut ctrl =
                SsController::from_matrices(&mats, &design.k, l_d, design.plant.critical_gain());
            run_closed_loop(&discrete_plant, &mut ctrl, &scenario).map_err(sim_err)?
        }
    };

    write_trace(&trace, trace_path)?;

    if let Some(step) = trace.diverged_at {
        let doc = Object::new().usize("diverged_at", step).render(0);
        write_file(metrics_path, &format!("{doc}\n"))?;
        return Err(CliError {
            code: EXIT_DIVERGENCE,
            message: format!("divergence at step {step}; partial trace written"),
        });
    }

    let m = metrics(&trace).map_err(|e| CliError {
        code: EXIT_ANALYSIS_FOR_METRICS,
        message: format!("metrics: {e}"),
    })?;
    let doc = Object::new()
        .num("overshoot_pct", m.overshoot_pct)
        .raw(
            "settling_time",
            m.settling_time.map_or("null".into(), adrc_core::fmt::g17),
        )
        .num("control_effort", m.control_effort)
        .num("peak_control", m.peak_control)
        .render(0);
    write_file(metrics_path, &format!("{doc}\n"))
}

// Metrics failures (no reference step in the scenario) are analysis-class.
const EXIT_ANALYSIS_FOR_METRICS: u8 = crate::config::EXIT_ANALYSIS;

fn write_trace(trace: &SimTrace, path: &Path) -> Result<(), CliError> {
    let file = std::fs::File::create(path).map_err(|e| CliError {
        code: EXIT_CONFIG,
        message: format!("cannot write {}: {e}", path.display()),
    })?;
    trace.write_csv(std::io::BufWriter::new(file)).map_err(|e| CliError {
        code: EXIT_CONFIG,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| CliError {
        code: EXIT_CONFIG,
        message: format!("cannot write {}: {e}", path.display()),
    })
}
