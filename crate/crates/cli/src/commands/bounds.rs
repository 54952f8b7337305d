use std::path::Path;

use qalb_core::bounds::{
    bound_coefficients, epsilon_n, epsilon_n_argmax, feasibility, logistic_map_run, raw_recurrence, BoundVariant,
    ErrorBoundParams,
};

use super::Report;
use crate::config::{KeySpec, Settings};
use crate::error::CliError;
use crate::output::{sibling, Cell, Table};

pub const SCHEMA: &[KeySpec] = &[
    KeySpec { key: "q", default: "3", help: "velocities: 3, 9 or 27" },
    KeySpec { key: "n", default: "3", help: "Fock truncation N used for eps_N" },
    KeySpec { key: "eps_table_max", default: "15", help: "largest N in the eps_N table" },
    KeySpec { key: "tau", default: "1.0", help: "relaxation time" },
    KeySpec { key: "dt", default: "1e-6", help: "time step" },
    KeySpec { key: "steps", default: "20", help: "error-map iterations" },
    KeySpec { key: "variant", default: "both", help: "inflate-c0, inflate-a or both" },
];

const SWEEP: [f64; 7] = [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0];

fn variant_name(v: BoundVariant) -> &'static str {
    match v {
        BoundVariant::InflateC0 => "inflate-c0",
        BoundVariant::InflateA => "inflate-a",
    }
}

pub fn run(s: &Settings, out: &Path) -> Result<Report, CliError> {
    let q: usize = s.get("q")?;
    let n: usize = s.get("n")?;
    let table_max: usize = s.get("eps_table_max")?;
    let tau = s.float("tau", true)?;
    let dt = s.float("dt", true)?;
    let steps: usize = s.get("steps")?;
    let variants: &[BoundVariant] = match s.choice("variant", &["inflate-c0", "inflate-a", "both"])? {
        "inflate-c0" => &[BoundVariant::InflateC0],
        "inflate-a" => &[BoundVariant::InflateA],
        _ => &[BoundVariant::InflateC0, BoundVariant::InflateA],
    };
    let eps = epsilon_n(n);
    let mut report = Report::default();

    let mut series = Table::new(["variant", "step", "z_re", "z_im", "eps_map", "eps_map_imag", "eps_raw", "abs_diff"]);
    let mut feas = Table::new([
        "variant",
        "dt_over_tau",
        "c0",
        "c1",
        "kappa_plus",
        "kappa_minus",
        "lower_margin",
        "upper_margin",
        "verdict",
    ]);
    for &v in variants {
        let (c0, c1) = bound_coefficients(q, v).map_err(|e| match e {
            qalb_core::Error::InvalidInput(m) => CliError::from(s.invalid("q", m)),
            e => e.into(),
        })?;
        let p = ErrorBoundParams::new(c0, c1, tau, dt, eps)?;
        let run = logistic_map_run(&p, steps);
        let raw = raw_recurrence(&p, steps);
        for (t, z) in run.z.iter().enumerate() {
            series.push(vec![
                variant_name(v).into(),
                t.into(),
                z.re.into(),
                z.im.into(),
                run.eps[t].into(),
                run.eps_imag[t].into(),
                raw[t].into(),
                (run.eps[t] - raw[t]).abs().into(),
            ]);
        }
        if let Some(t) = run.diverged_at {
            report.diverged = true;
            report.notes.push(format!("{}: logistic iterate diverged at step {t}", variant_name(v)));
        }
        let mut ratios = SWEEP.to_vec();
        if !ratios.contains(&(dt / tau)) {
            ratios.push(dt / tau);
        }
        for r in ratios {
            let f = feasibility(c0, c1, r, 1.0, eps)?;
            feas.push(vec![
                variant_name(v).into(),
                r.into(),
                c0.into(),
                c1.into(),
                p.kappa_roots.0.into(),
                p.kappa_roots.1.into(),
                f.lower_margin.into(),
                f.upper_margin.into(),
                f.verdict().into(),
            ]);
        }
        report.notes.push(format!(
            "{}: conjugating kappa = {:e}{:+e}i, mu = {:e}",
            variant_name(v),
            p.kappa.re,
            p.kappa.im,
            p.mu().re
        ));
    }

    let mut eps_table = Table::new(["n", "eps_n", "argmax_f"]);
    for k in 1..=table_max {
        let (f, e) = epsilon_n_argmax(k);
        eps_table.push(vec![Cell::from(k), e.into(), f.into()]);
    }

    series.write(out)?;
    let feas_path = sibling(out, "feasibility");
    let eps_path = sibling(out, "epsilon");
    feas.write(&feas_path)?;
    eps_table.write(&eps_path)?;
    report.extra_files = vec![feas_path, eps_path];
    report.notes.push(format!("eps_N at N = {n}: {eps:e}"));
    Ok(report)
}
