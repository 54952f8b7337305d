use std::path::Path;

use qalb_core::carleman::{logistic_carleman_exact_series, logistic_carleman_series, logistic_exact, LogisticParams};

use super::Report;
use crate::config::{KeySpec, Settings};
use crate::error::CliError;
use crate::output::{Cell, Table};

pub const SCHEMA: &[KeySpec] = &[
    KeySpec { key: "a", default: "1.0", help: "linear decay rate" },
    KeySpec { key: "b", default: "1.0", help: "quadratic coefficient; R = b/a" },
    KeySpec { key: "f0", default: "0.01", help: "initial value" },
    KeySpec { key: "dt", default: "0.01", help: "sample spacing" },
    KeySpec { key: "steps", default: "500", help: "number of samples after t = 0" },
    KeySpec { key: "orders", default: "4", help: "highest truncation order" },
    KeySpec { key: "integrator", default: "exact", help: "exact (matrix exponential) or euler" },
];

pub fn run(s: &Settings, out: &Path) -> Result<Report, CliError> {
    let a = s.float("a", true)?;
    let b = s.float("b", false)?;
    let f0 = s.float("f0", false)?;
    let dt = s.float("dt", true)?;
    let steps: usize = s.get("steps")?;
    let orders: usize = s.get("orders")?;
    if orders == 0 {
        return Err(s.invalid("orders", "must be at least 1").into());
    }
    let euler = s.choice("integrator", &["exact", "euler"])? == "euler";
    let p = LogisticParams::new(a, b, f0).map_err(|e| s.invalid("a", e.to_string()))?;

    let mut report = Report::default();
    if let Some(ts) = p.singular_time() {
        report.notes.push(format!("exact solution singular at t = {ts:.6e} (a t = {:.6e})", a * ts));
    }
    let exact: Vec<f64> = (0..=steps)
        .map(|k| logistic_exact(&p, k as f64 * dt))
        .collect::<Result<_, _>>()
        .map_err(|e| {
            let at = p.singular_time().map_or(f64::NAN, |ts| a * ts);
            CliError::from(e).context(format!("a t_sing = {at:.6e}, horizon t = {:.6e}", steps as f64 * dt))
        })?;
    let approx: Vec<Vec<f64>> = (1..=orders)
        .map(|k| {
            if euler {
                logistic_carleman_series(&p, k, dt, steps)
            } else {
                logistic_carleman_exact_series(&p, k, dt, steps)
            }
        })
        .collect::<Result<_, _>>()?;

    let mut header = vec!["t".to_string(), "exact".to_string()];
    header.extend((1..=orders).map(|k| format!("order_{k}")));
    header.extend((1..=orders).map(|k| format!("abserr_{k}")));
    let mut table = Table::new(header);
    for (i, &e) in exact.iter().enumerate() {
        let mut row: Vec<Cell> = vec![(i as f64 * dt).into(), e.into()];
        row.extend(approx.iter().map(|s| Cell::from(s[i])));
        row.extend(approx.iter().map(|s| Cell::from((s[i] - e).abs())));
        table.push(row);
    }
    table.write(out)?;
    Ok(report)
}
