//! Streaming as controlled binary increments on position registers.
//!
//! Qubit 0 is the most significant bit of the basis index. A register is laid
//! out as payload qubits, then two direction qubits per axis, then the
//! position bits of each axis (most significant first). Periodic wrap comes
//! from binary overflow, so every axis length must be a power of two.

use std::fmt;

use num_complex::Complex64;

use crate::classical::{stream, DistributionField};
use crate::error::{Error, Result};
use crate::lattice::{LatticeKind, LatticeModel};

/// Per-axis two-bit direction codes, most significant bit first.
pub const CODE_STATIONARY: u8 = 0b10;
pub const CODE_POSITIVE: u8 = 0b11;
pub const CODE_NEGATIVE: u8 = 0b01;

/// Multi-controlled X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateStep {
    pub target: usize,
    /// `(qubit, required state)`.
    pub controls: Vec<(usize, u8)>,
}

impl fmt::Display for GateStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X {} | controls:", self.target)?;
        for (q, s) in &self.controls {
            write!(f, " ({q},{s})")?;
        }
        Ok(())
    }
}

/// One gate step per line.
pub fn dump_circuit(steps: &[GateStep]) -> String {
    steps.iter().map(|s| format!("{s}\n")).collect()
}

/// Ripple-carry `+1` or `-1` on `nbits` qubits, local qubit 0 most
/// significant. Bits are flipped from most to least significant, each
/// controlled on all lower bits being 1 (increment) or 0 (decrement).
pub fn increment_circuit(nbits: usize, sign: i32) -> Vec<GateStep> {
    assert!(nbits >= 1, "at least one bit");
    assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
    let state = u8::from(sign == 1);
    (0..nbits)
        .map(|target| GateStep {
            target,
            controls: (target + 1..nbits).map(|q| (q, state)).collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub nqubits: usize,
    pub amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(nqubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << nqubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { nqubits, amps }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Index of the unique nonzero amplitude, if the state is a basis state.
    pub fn basis_index(&self) -> Option<usize> {
        let mut nz = self.amps.iter().enumerate().filter(|(_, z)| z.norm() > 0.0);
        let first = nz.next()?.0;
        nz.next().is_none().then_some(first)
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.nqubits - 1 - q)
    }
}

/// Applies the steps in order by basis-index arithmetic.
pub fn apply_circuit(state: &StateVector, steps: &[GateStep]) -> Result<StateVector> {
    let mut out = state.clone();
    for g in steps {
        for q in std::iter::once(g.target).chain(g.controls.iter().map(|c| c.0)) {
            if q >= state.nqubits {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    nqubits: state.nqubits,
                });
            }
        }
        let t = out.bit(g.target);
        let masks: Vec<(usize, bool)> = g.controls.iter().map(|&(q, s)| (out.bit(q), s == 1)).collect();
        for i in 0..out.amps.len() {
            if i & t != 0 {
                continue;
            }
            if masks.iter().all(|&(m, s)| (i & m != 0) == s) {
                out.amps.swap(i, i | t);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    pub payload: usize,
    pub axes: usize,
    pub position_bits: Vec<usize>,
}

impl RegisterLayout {
    pub fn new(payload: usize, grid_dims: &[usize]) -> Result<Self> {
        let mut position_bits = Vec::with_capacity(grid_dims.len());
        for &n in grid_dims {
            if !n.is_power_of_two() || n < 2 {
                return Err(Error::NotPowerOfTwo(n));
            }
            position_bits.push(n.trailing_zeros() as usize);
        }
        Ok(Self {
            payload,
            axes: grid_dims.len(),
            position_bits,
        })
    }

    pub fn nqubits(&self) -> usize {
        self.payload + 2 * self.axes + self.position_bits.iter().sum::<usize>()
    }

    /// Qubits `(hi, lo)` of the direction code of `axis`.
    pub fn direction_qubits(&self, axis: usize) -> (usize, usize) {
        let base = self.payload + 2 * axis;
        (base, base + 1)
    }

    /// Position qubits of `axis`, most significant first.
    pub fn position_qubits(&self, axis: usize) -> std::ops::Range<usize> {
        let start = self.payload + 2 * self.axes + self.position_bits[..axis].iter().sum::<usize>();
        start..start + self.position_bits[axis]
    }

    /// Basis index of `payload | codes | position`.
    pub fn encode(&self, payload: usize, codes: &[u8], coords: &[usize]) -> usize {
        let mut idx = payload;
        for &c in codes {
            idx = (idx << 2) | c as usize;
        }
        for (a, &x) in coords.iter().enumerate() {
            idx = (idx << self.position_bits[a]) | x;
        }
        idx
    }

    /// Inverse of [`RegisterLayout::encode`].
    pub fn decode(&self, mut idx: usize) -> (usize, Vec<u8>, Vec<usize>) {
        let mut coords = vec![0; self.axes];
        for a in (0..self.axes).rev() {
            let b = self.position_bits[a];
            coords[a] = idx & ((1 << b) - 1);
            idx >>= b;
        }
        let mut codes = vec![0u8; self.axes];
        for a in (0..self.axes).rev() {
            codes[a] = (idx & 3) as u8;
            idx >>= 2;
        }
        (idx, codes, coords)
    }
}

/// Shift along `axis` by `sign`, applied only where the axis code matches.
pub fn stream_circuit(layout: &RegisterLayout, axis: usize, sign: i32) -> Vec<GateStep> {
    let (hi, lo) = layout.direction_qubits(axis);
    let code = if sign > 0 { CODE_POSITIVE } else { CODE_NEGATIVE };
    let pos: Vec<usize> = layout.position_qubits(axis).collect();
    increment_circuit(pos.len(), sign)
        .into_iter()
        .map(|g| {
            let mut controls = vec![(hi, code >> 1), (lo, code & 1)];
            controls.extend(g.controls.iter().map(|&(q, s)| (pos[q], s)));
            GateStep {
                target: pos[g.target],
                controls,
            }
        })
        .collect()
}

pub fn controlled_stream(
    state: &StateVector,
    layout: &RegisterLayout,
    axis: usize,
    sign: i32,
) -> Result<StateVector> {
    if axis >= layout.axes {
        return Err(Error::IndexOutOfRange {
            index: axis,
            nqubits: layout.axes,
        });
    }
    apply_circuit(state, &stream_circuit(layout, axis, sign))
}

/// Streams every axis in both directions.
pub fn stream_all(state: &StateVector, layout: &RegisterLayout) -> Result<StateVector> {
    let mut s = state.clone();
    for axis in 0..layout.axes {
        s = controlled_stream(&s, layout, axis, 1)?;
        s = controlled_stream(&s, layout, axis, -1)?;
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionEntry {
    pub index: usize,
    pub velocity: Vec<i32>,
    pub codes: Vec<u8>,
    pub name: String,
}

impl DirectionEntry {
    /// Codes as bit strings, e.g. `|11>|10>`.
    pub fn code_string(&self) -> String {
        self.codes.iter().map(|c| format!("|{c:02b}>")).collect()
    }
}

pub fn component_code(c: i32) -> u8 {
    match c {
        0 => CODE_STATIONARY,
        1 => CODE_POSITIVE,
        -1 => CODE_NEGATIVE,
        _ => panic!("velocity component {c} outside -1..=1"),
    }
}

fn direction_name(kind: LatticeKind, v: &[i32]) -> String {
    let ew = match v[0] {
        1 => "East",
        -1 => "West",
        _ => "",
    };
    if kind == LatticeKind::D1Q3 {
        return if ew.is_empty() { "Center".into() } else { ew.into() };
    }
    let ns = match v[1] {
        1 => "North",
        -1 => "South",
        _ => "",
    };
    let mut name = if ns.is_empty() {
        ew.to_string()
    } else {
        format!("{ns}{}", ew.to_lowercase())
    };
    if kind == LatticeKind::D3Q27 {
        let ud = match v[2] {
            1 => "Up",
            -1 => "Down",
            _ => "",
        };
        if !ud.is_empty() {
            name = if name.is_empty() { ud.into() } else { format!("{name}-{ud}") };
        }
    }
    if name.is_empty() {
        "Center".into()
    } else {
        name
    }
}

pub fn direction_table<T>(model: &LatticeModel<T>) -> Vec<DirectionEntry> {
    model
        .velocities
        .iter()
        .enumerate()
        .map(|(index, v)| DirectionEntry {
            index,
            velocity: v.clone(),
            codes: v.iter().map(|&c| component_code(c)).collect(),
            name: direction_name(model.kind, v),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionCheck {
    pub name: String,
    pub cases: usize,
    pub mismatches: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub directions: Vec<DirectionCheck>,
}

impl EquivalenceReport {
    pub fn all_pass(&self) -> bool {
        self.directions.iter().all(|d| d.mismatches == 0)
    }

    pub fn cases(&self) -> usize {
        self.directions.iter().map(|d| d.cases).sum()
    }
}

/// Compares the register streaming with the classical shift for every
/// direction and every site.
pub fn equivalence_check(grid_dims: &[usize], model: &LatticeModel<f64>) -> Result<EquivalenceReport> {
    if grid_dims.len() != model.dim {
        return Err(Error::DimMismatch(grid_dims.len(), model.dim));
    }
    let layout = RegisterLayout::new(0, grid_dims)?;
    let table = direction_table(model);
    let zero = vec![0.0; model.q];
    let probe = DistributionField::uniform(model.clone(), grid_dims.to_vec(), &zero)?;
    let mut directions = Vec::with_capacity(model.q);
    for entry in &table {
        let mut mismatches = 0;
        for s in 0..probe.sites() {
            let mut field = probe.clone();
            field.data[s * model.q + entry.index] = 1.0;
            let moved = stream(&field);
            let target = (0..moved.sites())
                .find(|&t| moved.data[t * model.q + entry.index] == 1.0)
                .expect("streamed mass");
            let coords = probe.coords(s);
            let start = StateVector::basis(layout.nqubits(), layout.encode(0, &entry.codes, &coords));
            let end = stream_all(&start, &layout)?;
            let ok = end
                .basis_index()
                .map(|i| layout.decode(i))
                .is_some_and(|(p, codes, c)| p == 0 && codes == entry.codes && c == probe.coords(target));
            if !ok {
                mismatches += 1;
            }
        }
        directions.push(DirectionCheck {
            name: entry.name.clone(),
            cases: probe.sites(),
            mismatches,
        });
    }
    Ok(EquivalenceReport { directions })
}

/// Cell contents after each gate of the increment on `2^nbits` sites.
///
/// Row 0 holds the identity labels; row `k` the labels after `k` gates.
pub fn increment_trace(nbits: usize, sign: i32) -> Vec<Vec<usize>> {
    let steps = increment_circuit(nbits, sign);
    let mut rows = vec![(0..1usize << nbits).collect::<Vec<_>>()];
    for g in &steps {
        let t = 1 << (nbits - 1 - g.target);
        let next = rows
            .last()
            .expect("non-empty")
            .iter()
            .map(|&x| {
                let fire = g
                    .controls
                    .iter()
                    .all(|&(q, s)| ((x >> (nbits - 1 - q)) & 1) as u8 == s);
                if fire {
                    x ^ t
                } else {
                    x
                }
            })
            .collect();
        rows.push(next);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_lattice;

    #[test]
    fn gate_dump() {
        let c = increment_circuit(3, 1);
        assert_eq!(
            dump_circuit(&c),
            "X 0 | controls: (1,1) (2,1)\nX 1 | controls: (2,1)\nX 2 | controls:\n"
        );
    }

    #[test]
    fn eight_site_trace() {
        let t = increment_trace(3, 1);
        assert_eq!(t.len(), 4);
        assert_eq!(t[3], vec![1, 2, 3, 4, 5, 6, 7, 0]);
    }

    #[test]
    fn d2q9_codes() {
        let m = build_lattice::<f64>(LatticeKind::D2Q9);
        let t = direction_table(&m);
        let east = t.iter().find(|e| e.name == "East").unwrap();
        assert_eq!(east.code_string(), "|11>|10>");
        let sw = t.iter().find(|e| e.name == "Southwest").unwrap();
        assert_eq!(sw.codes, vec![CODE_NEGATIVE, CODE_NEGATIVE]);
        assert_eq!(t.iter().filter(|e| e.name == "Center").count(), 1);
    }

    #[test]
    fn non_power_of_two_rejected() {
        assert!(matches!(RegisterLayout::new(0, &[6]), Err(Error::NotPowerOfTwo(6))));
    }

    #[test]
    fn out_of_range_qubit() {
        let s = StateVector::basis(2, 0);
        let g = GateStep {
            target: 2,
            controls: vec![],
        };
        assert!(matches!(apply_circuit(&s, &[g]), Err(Error::IndexOutOfRange { .. })));
    }
}
