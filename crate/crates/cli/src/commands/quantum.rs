use std::path::Path;

use qalb_core::engine::{evolve_quantum_0d, CollisionSetup, EvolveOptions, Method, Propagation};
use qalb_core::fock::{Encoding, FockConfig, HermiteConvention};

use super::{initial_distribution, lattice, Report};
use crate::config::{KeySpec, Settings};
use crate::error::CliError;
use crate::output::{Cell, Table};

pub const SCHEMA: &[KeySpec] = &[
    KeySpec { key: "lattice", default: "d1q3", help: "d1q3 (larger lattices hit the dimension guard quickly)" },
    KeySpec { key: "tau", default: "1.0", help: "relaxation time" },
    KeySpec { key: "dt", default: "1e-3", help: "time step" },
    KeySpec { key: "steps", default: "1000", help: "number of steps" },
    KeySpec { key: "qc", default: "2,3,4", help: "qubits per mode, comma list" },
    KeySpec { key: "f0", default: "d1q3-figure", help: "d1q3-figure, equilibrium or a comma list summing to 1" },
    KeySpec { key: "method", default: "both", help: "hermitized, nonhermitian or both" },
    KeySpec { key: "encoding", default: "physicists", help: "physicists, monic or translation" },
    KeySpec { key: "propagation", default: "auto", help: "auto, dense or action" },
];

pub fn run(s: &Settings, out: &Path) -> Result<Report, CliError> {
    let m = lattice(s)?;
    let tau = s.float("tau", true)?;
    let dt = s.float("dt", true)?;
    let steps: usize = s.get("steps")?;
    let f0 = initial_distribution(s, &m)?;
    let qcs: Vec<usize> = s.list("qc")?;
    if qcs.is_empty() {
        return Err(s.invalid("qc", "at least one value").into());
    }
    let methods: &[Method] = match s.choice("method", &["hermitized", "nonhermitian", "both"])? {
        "hermitized" => &[Method::Hermitized],
        "nonhermitian" => &[Method::NonHermitian],
        _ => &[Method::NonHermitian, Method::Hermitized],
    };
    let encoding = match s.choice("encoding", &["physicists", "monic", "translation"])? {
        "physicists" => Encoding::Eigenstate(HermiteConvention::Physicists),
        "monic" => Encoding::Eigenstate(HermiteConvention::Monic),
        _ => Encoding::Translation,
    };
    let propagation = match s.choice("propagation", &["auto", "dense", "action"])? {
        "dense" => Propagation::Dense,
        "action" => Propagation::Action,
        _ => Propagation::Auto,
    };

    let mut runs = Vec::new();
    let mut report = Report::default();
    for &qc in &qcs {
        let cfg = FockConfig::from_qubits(qc).map_err(|e| s.invalid("qc", e.to_string()))?;
        let setup = CollisionSetup::new(m.clone(), cfg, tau, dt)
            .map_err(|e| CliError::from(e).context(format!("qc = {qc}")))?;
        for &method in methods {
            let opts = EvolveOptions { method, encoding, propagation };
            let r = evolve_quantum_0d(&setup, &f0, steps, &opts)?;
            let tag = format!("{}_qc{qc}", method_tag(method));
            if let Some(step) = r.divergence_step {
                report.diverged = true;
                report.notes.push(format!("{tag} diverged at step {step}"));
            }
            if r.nan_count > 0 {
                report.notes.push(format!("{tag}: {} non-finite decodes", r.nan_count));
            }
            runs.push((tag, r));
        }
    }

    let mut header: Vec<String> = vec!["t".into()];
    header.extend((0..m.q).map(|i| format!("classical_f_{i}")));
    for (tag, _) in &runs {
        header.extend((0..m.q).map(|i| format!("{tag}_f_{i}")));
        header.extend(["relerr", "norm", "diverged"].iter().map(|c| format!("{tag}_{c}")));
    }
    let mut table = Table::new(header);
    let reference = &runs[0].1;
    for k in 0..=steps {
        let mut row: Vec<Cell> = vec![reference.times[k].into()];
        row.extend(reference.classical[k].iter().map(|&x| Cell::from(x)));
        for (_, r) in &runs {
            row.extend(r.decoded[k].iter().map(|&x| Cell::from(x)));
            row.push(r.max_relative_error[k].into());
            row.push(r.norms[k].into());
            row.push(usize::from(r.divergence_step.is_some_and(|d| d <= k)).into());
        }
        table.push(row);
    }
    table.write(out)?;
    Ok(report)
}

fn method_tag(m: Method) -> &'static str {
    match m {
        Method::Hermitized => "herm",
        Method::NonHermitian => "nonherm",
    }
}
