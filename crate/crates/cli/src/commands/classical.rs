use std::path::Path;

use qalb_core::classical::{collide, evolve_0d, moments, stream, DistributionField};
use rand::{Rng, SeedableRng};

use super::{grid_dims, initial_distribution, lattice, Report};
use crate::config::{KeySpec, Settings};
use crate::error::CliError;
use crate::output::{Cell, Table};

pub const SCHEMA: &[KeySpec] = &[
    KeySpec { key: "lattice", default: "d1q3", help: "d1q3, d2q9 or d3q27" },
    KeySpec { key: "tau", default: "1.0", help: "relaxation time" },
    KeySpec { key: "dt", default: "1e-3", help: "time step" },
    KeySpec { key: "steps", default: "1000", help: "number of steps" },
    KeySpec { key: "f0", default: "d1q3-figure", help: "d1q3-figure, equilibrium or a comma list" },
    KeySpec { key: "grid", default: "", help: "site counts such as 8 or 4x4; empty for a single site" },
    KeySpec { key: "mode", default: "collide-stream", help: "collide-stream, collide-only or stream-only (grid runs)" },
    KeySpec { key: "init", default: "uniform", help: "uniform or random (grid runs)" },
    KeySpec { key: "seed", default: "0", help: "seed for init = random" },
    KeySpec { key: "every", default: "1", help: "write every n-th step" },
];

pub fn run(s: &Settings, out: &Path) -> Result<Report, CliError> {
    let m = lattice(s)?;
    let tau = s.float("tau", true)?;
    let dt = s.float("dt", true)?;
    let steps: usize = s.get("steps")?;
    let f0 = initial_distribution(s, &m)?;
    let dims = grid_dims(s, "grid")?;
    let mode = s.choice("mode", &["collide-stream", "collide-only", "stream-only"])?;
    let init = s.choice("init", &["uniform", "random"])?;
    let seed: u64 = s.get("seed")?;
    let every: usize = s.get("every")?;
    if every == 0 {
        return Err(s.invalid("every", "must be at least 1").into());
    }

    let mut header = vec!["t".to_string()];
    if !dims.is_empty() {
        header.push("site".into());
    }
    header.extend((0..m.q).map(|i| format!("f_{i}")));
    header.push("rho".into());
    header.extend(["u_x", "u_y", "u_z"].iter().take(m.dim).map(|s| s.to_string()));
    let mut table = Table::new(header);

    let mut push_field = |t: f64, field: &DistributionField<f64>, with_site: bool| -> Result<(), CliError> {
        let mom = moments(field)?;
        for site in 0..field.sites() {
            let mut row: Vec<Cell> = vec![t.into()];
            if with_site {
                row.push(site.into());
            }
            row.extend(field.site(site).iter().map(|&x| Cell::from(x)));
            row.push(mom.rho[site].into());
            row.extend(mom.u[site * m.dim..(site + 1) * m.dim].iter().map(|&x| Cell::from(x)));
            table.push(row);
        }
        Ok(())
    };

    if dims.is_empty() {
        let series = evolve_0d(&f0, &m, tau, dt, steps)?;
        for (k, f) in series.iter().enumerate().step_by(every) {
            let field = DistributionField::uniform(m.clone(), vec![1; m.dim], f)?;
            push_field(k as f64 * dt, &field, false)?;
        }
    } else {
        let mut field = DistributionField::uniform(m.clone(), dims, &f0)?;
        if init == "random" {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            for x in field.data.iter_mut() {
                *x *= rng.random_range(0.5..1.5);
            }
        }
        push_field(0.0, &field, true)?;
        for k in 1..=steps {
            if mode != "stream-only" {
                field = collide(&field, tau, dt)?;
            }
            if mode != "collide-only" {
                field = stream(&field);
            }
            if k % every == 0 {
                push_field(k as f64 * dt, &field, true)?;
            }
        }
    }
    table.write(out)?;
    Ok(Report::default())
}
