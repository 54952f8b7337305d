//! Text report: the increment circuit, the per-gate site table, and the
//! D2Q9 direction register demo.

use std::fmt::Write as _;
use std::path::Path;

use qalb_core::lattice::{build_lattice, LatticeKind};
use qalb_core::streaming::{
    controlled_stream, direction_table, dump_circuit, increment_circuit, increment_trace, stream_circuit,
    RegisterLayout, StateVector,
};

use super::{grid_dims, Report};
use crate::config::{KeySpec, Settings};
use crate::error::CliError;

pub const SCHEMA: &[KeySpec] = &[
    KeySpec { key: "sites", default: "8", help: "sites of the 1D increment demo (power of two)" },
    KeySpec { key: "grid", default: "4x4", help: "D2Q9 grid (powers of two)" },
    KeySpec { key: "start", default: "1,3", help: "x,y of the compass demo" },
];

pub fn run(s: &Settings, out: &Path) -> Result<Report, CliError> {
    let sites: usize = s.get("sites")?;
    if sites < 2 || !sites.is_power_of_two() {
        return Err(s.invalid("sites", "must be a power of two >= 2").into());
    }
    let nbits = sites.trailing_zeros() as usize;
    let dims = grid_dims(s, "grid")?;
    if dims.len() != 2 {
        return Err(s.invalid("grid", "expected two site counts such as 4x4").into());
    }
    let start: Vec<usize> = s.list("start")?;
    if start.len() != 2 || start[0] >= dims[0] || start[1] >= dims[1] {
        return Err(s.invalid("start", "expected x,y inside the grid").into());
    }
    let layout = RegisterLayout::new(0, &dims)?;

    let mut text = String::new();
    let w = &mut text;
    writeln!(w, "# increment circuit on {nbits} qubits, qubit 0 most significant").unwrap();
    w.push_str(&dump_circuit(&increment_circuit(nbits, 1)));
    writeln!(w, "\n# site labels after each gate, row 0 is the start").unwrap();
    for (k, row) in increment_trace(nbits, 1).iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(w, "{k}: {}", cells.join(" ")).unwrap();
    }

    let round_trip = (0..sites).all(|i| {
        let up = StateVector::basis(nbits, i);
        let there = qalb_core::streaming::apply_circuit(&up, &increment_circuit(nbits, 1)).expect("in range");
        let back = qalb_core::streaming::apply_circuit(&there, &increment_circuit(nbits, -1)).expect("in range");
        back.basis_index() == Some(i)
    });
    writeln!(w, "\n# round trip +1 then -1 is the identity: {round_trip}").unwrap();

    writeln!(w, "\n# left-stream circuit, D2Q9 {}x{}", dims[0], dims[1]).unwrap();
    w.push_str(&dump_circuit(&stream_circuit(&layout, 0, -1)));

    let model = build_lattice::<f64>(LatticeKind::D2Q9);
    writeln!(
        w,
        "\n# D2Q9 compass at ({},{}): direction, codes, after left-stream, after left-then-up",
        start[0], start[1]
    )
    .unwrap();
    for e in direction_table(&model) {
        let idx = layout.encode(0, &e.codes, &start);
        let s0 = StateVector::basis(layout.nqubits(), idx);
        let left = controlled_stream(&s0, &layout, 0, -1)?;
        let up = controlled_stream(&left, &layout, 1, 1)?;
        let pos = |st: &StateVector| {
            let (_, _, c) = layout.decode(st.basis_index().expect("basis state"));
            format!("({},{})", c[0], c[1])
        };
        writeln!(w, "{:<10} {} {} {}", e.name, e.code_string(), pos(&left), pos(&up)).unwrap();
    }
    std::fs::write(out, text)?;
    let mut report = Report::default();
    if !round_trip {
        report.notes.push("increment round trip failed".into());
    }
    Ok(report)
}
