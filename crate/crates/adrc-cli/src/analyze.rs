//! `adrc analyze`: frequency-domain data emission.

use adrc_core::fmt::g17;
use adrc_core::{estimate_b0_crossover, fb_poles_zeros, freq, gang_of_six, RationalTf};

use crate::config::{ResolvedDesign, EXIT_ANALYSIS, EXIT_CONFIG};
use crate::jsonout::Object;
use crate::CliError;

pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Grid {
    /// Default: 400 log-spaced points over [1e-2, 1e3] relative to the
    /// design bandwidth when one is known, absolute otherwise.
    pub fn for_design(design: &ResolvedDesign) -> Grid {
        let omega_ref = design.bandwidth.map_or(1.0, |(omega_cl, _)| omega_cl);
        Grid { lo: 1e-2 * omega_ref, hi: 1e3 * omega_ref, points: 400 }
    }

    pub fn parse(arg: &str) -> Result<Grid, CliError> {
        let parts: Vec<&str> = arg.split(':').collect();
        let bad = || CliError {
            code: EXIT_CONFIG,
            message: format!("--grid: expected lo:hi:points, got `{arg}`"),
        };
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        let points: usize = parts[2].parse().map_err(|_| bad())?;
        let ordered = lo > 0.0 && hi > lo && points >= 2;
        if !ordered {
            return Err(bad());
        }
        Ok(Grid { lo, hi, points })
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        let ratio = self.hi / self.lo;
        (0..self.points)
            .map(move |i| self.lo * ratio.powf(i as f64 / (self.points - 1) as f64))
    }
}

fn analysis_err(e: adrc_core::Error) -> CliError {
    CliError { code: EXIT_ANALYSIS, message: format!("analysis degeneracy: {e}") }
}

pub fn bode(design: &ResolvedDesign, grid: &Grid) -> Result<String, CliError> {
    let blocks = freq::continuous_controller_tfs(&design.continuous);
    let mut out = String::new();
    for (name, tf) in [
        ("C_FB", &blocks.feedback),
        ("C_PF", &blocks.prefilter),
        ("C_FF", &blocks.feedforward),
    ] {
        out.push_str(&format!("# block={name}\n"));
        out.push_str("omega,mag_db,phase_deg\n");
        for omega in grid.frequencies() {
            let response = tf.response(omega).map_err(analysis_err)?;
            out.push_str(&format!(
                "{},{},{}\n",
                g17(omega),
                g17(20.0 * response.norm().log10()),
                g17(response.arg().to_degrees())
            ));
        }
    }
    Ok(out)
}

pub fn gang(design: &ResolvedDesign, plant: &RationalTf, grid: &Grid) -> Result<String, CliError> {
    let blocks = freq::continuous_controller_tfs(&design.continuous);
    let gang = gang_of_six(plant, &blocks).map_err(analysis_err)?;
    let mut out = String::from("omega,G_yr_db,G_yd_db,G_yn_db,G_ur_db,G_ud_db,G_un_db\n");
    for omega in grid.frequencies() {
        out.push_str(&g17(omega));
        for (_, tf) in gang.entries() {
            let mag = tf.magnitude_db(omega).map_err(analysis_err)?;
            out.push(',');
            out.push_str(&g17(mag));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn poles_zeros(design: &ResolvedDesign) -> Result<String, CliError> {
    let (omega_cl, k_eso) = design.bandwidth.ok_or(CliError {
        code: EXIT_CONFIG,
        message: "--what pz requires bandwidth parameters (omega_cl, k_eso)".into(),
    })?;
    let n = design.plant.order();
    if n > 2 {
        return Err(CliError {
            code: EXIT_CONFIG,
            message: format!("--what pz supports n = 1 or 2, got {n}"),
        });
    }
    let pz = fb_poles_zeros(n, omega_cl, k_eso).map_err(analysis_err)?;
    let complex_list = |values: &[adrc_core::Complex64]| {
        let body: Vec<String> = values
            .iter()
            .map(|c| Object::new().num("re", c.re).num("im", c.im).render(2))
            .collect();
        format!("[{}]", body.join(", "))
    };
    let mut out = Object::new()
        .raw("poles", complex_list(&pz.poles))
        .raw("zeros", complex_list(&pz.zeros))
        .arr("damping", &pz.damping)
        .render(0);
    out.push('\n');
    Ok(out)
}

pub fn b0_estimate(design: &ResolvedDesign, plant: &RationalTf) -> Result<String, CliError> {
    let estimate = estimate_b0_crossover(plant, design.plant.order()).map_err(analysis_err)?;
    Ok(format!("{}\n", g17(estimate)))
}
