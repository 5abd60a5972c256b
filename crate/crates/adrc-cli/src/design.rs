//! `adrc design`: coefficient document on standard output.

use crate::config::ResolvedDesign;
use crate::jsonout::Object;

pub fn render_design(design: &ResolvedDesign) -> String {
    let mut doc = Object::new()
        .usize("n", design.plant.order())
        .num("b0", design.plant.critical_gain());
    if let Some((omega_cl, k_eso)) = design.bandwidth {
        doc = doc.num("omega_cl", omega_cl).num("k_eso", k_eso);
    }
    doc = doc.opt_num("T", design.sample_time).opt_num("z_eso", design.z_eso);
    if let Some((lo, hi)) = design.limits {
        doc = doc.raw("limits", Object::new().num("u_min", lo).num("u_max", hi).render(1));
    }

    let mut gains = Object::new().arr("k", &design.k).arr("l", &design.l);
    if let Some(ld) = &design.l_d {
        gains = gains.arr("l_d", ld);
    }
    doc = doc.raw("gains", gains.render(1));

    let ct = &design.continuous;
    doc = doc.raw(
        "continuous",
        Object::new()
            .num("K_I", ct.k_int)
            .num("K_FF", ct.k_ff)
            .arr("alpha", &ct.alpha)
            .arr("beta", &ct.beta)
            .arr("gamma", &ct.gamma)
            .render(1),
    );

    if let Some(dt) = &design.discrete {
        doc = doc.raw(
            "discrete",
            Object::new()
                .arr("alpha", &dt.alpha)
                .arr("beta", &dt.beta)
                .arr("gamma", &dt.gamma)
                .arr("alpha_tilde", &dt.alpha_tilde)
                .render(1),
        );
    }
    let mut out = doc.render(0);
    out.push('\n');
    out
}
