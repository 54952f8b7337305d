use std::path::Path;

use qalb_core::complexity::{
    complexity_rows, lcu_collision_params, qubits_for_reynolds, ComplexityInputs, DISCLAIMER, QUOTED_QUBITS_RE20,
};

use super::Report;
use crate::config::{KeySpec, Settings};
use crate::error::CliError;
use crate::output::{fmt_f64, Cell, Table};

pub const SCHEMA: &[KeySpec] = &[
    KeySpec { key: "g", default: "256", help: "lattice volume" },
    KeySpec { key: "d", default: "2", help: "spatial dimension" },
    KeySpec { key: "t", default: "10", help: "time steps" },
    KeySpec { key: "q", default: "auto", help: "velocities; auto means 3^d" },
    KeySpec { key: "tau", default: "1.0", help: "relaxation time" },
    KeySpec { key: "b", default: "6", help: "decimal digits of precision" },
    KeySpec { key: "n", default: "3", help: "Fock truncation N" },
    KeySpec { key: "reynolds", default: "1e8,1e20", help: "Reynolds numbers for the qubit estimate" },
];

pub fn run(s: &Settings, out: &Path) -> Result<Report, CliError> {
    let d: usize = s.get("d")?;
    let q = match s.raw("q") {
        "auto" => 3usize.checked_pow(d as u32).ok_or_else(|| s.invalid("d", "too large"))?,
        _ => s.get("q")?,
    };
    let inp = ComplexityInputs {
        g: s.float("g", true)?,
        d,
        t: s.float("t", true)?,
        q,
        tau: s.float("tau", true)?,
        b: s.float("b", true)?,
        n: s.get("n")?,
    };
    let rows = complexity_rows(&inp)?;
    let mut table = Table::new(["label", "description", "qubits", "ancillas", "gates", "gates_with_log"]);
    for r in &rows {
        table.push(vec![
            r.label.into(),
            r.description.into(),
            r.qubits.into(),
            r.ancillas.map_or(Cell::Text(String::new()), Cell::Num),
            r.gates.into(),
            r.gates_with_log.into(),
        ]);
    }
    table.write(out)?;

    let lcu = lcu_collision_params(inp.q, inp.n, inp.tau);
    let mut report = Report::default();
    report.notes.push(DISCLAIMER.into());
    report.notes.push(format!(
        "lcu m = {}, L = {}, S0 = {}, S1 = {}, S2 = {}, S = {}",
        lcu.m,
        lcu.l,
        fmt_f64(lcu.s0),
        fmt_f64(lcu.s1),
        fmt_f64(lcu.s2),
        fmt_f64(lcu.s)
    ));
    for re in s.list::<f64>("reynolds")? {
        let qubits = qubits_for_reynolds(re).map_err(|e| s.invalid("reynolds", e.to_string()))?;
        report.notes.push(format!("qubits for Re = {re:e}: {}", fmt_f64(qubits)));
    }
    report
        .notes
        .push(format!("quoted estimate for Re ~ 1e20 is {QUOTED_QUBITS_RE20}; the formula gives 150"));
    Ok(report)
}
