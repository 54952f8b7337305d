//! Leading-order resource formulas for the collision and streaming variants.
//!
//! Every big-O constant is set to 1, so the numbers compare variants with
//! each other and carry no absolute meaning.

use crate::error::{Error, Result};

pub const DISCLAIMER: &str = "leading terms with all big-O constants set to 1";
/// Qubit count quoted alongside `Re ~ 1e20`, which the formula puts at 150.
pub const QUOTED_QUBITS_RE20: f64 = 120.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityInputs {
    /// Lattice volume.
    pub g: f64,
    pub d: usize,
    /// Timesteps.
    pub t: f64,
    pub q: usize,
    pub tau: f64,
    /// Decimal precision.
    pub b: f64,
    /// Fock truncation.
    pub n: usize,
}

impl ComplexityInputs {
    pub fn validate(&self) -> Result<()> {
        let q_ok = self.d >= 1 && self.d <= 3 && self.q == 3usize.pow(self.d as u32);
        if !(self.g >= 1.0 && self.t >= 1.0 && self.tau > 0.0 && self.b > 0.0 && self.n >= 1 && q_ok) {
            return Err(Error::InvalidInput(format!("invalid complexity inputs {self:?}")));
        }
        Ok(())
    }
}

fn clog2(x: usize) -> f64 {
    (x as f64).log2().ceil()
}

/// Coefficient sum of one compiled position or momentum operator,
/// `sqrt(2(N+1)) ceil(log2(N+1))^2`.
pub fn single_operator_sum(n: usize) -> f64 {
    (2.0 * (n + 1) as f64).sqrt() * clog2(n + 1).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcuParams {
    /// Monomials in the Hamiltonian.
    pub m: u64,
    /// Pauli words.
    pub l: u64,
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    /// `s0 k + s1 k^2 + s2 k^3` with `k` from [`single_operator_sum`].
    pub s: f64,
}

pub fn lcu_collision_params(q: usize, n: usize, tau: f64) -> LcuParams {
    let qf = q as f64;
    let m = (q * q + 2 * q + 2) as u64;
    let l = m * (clog2(n + 1) as u64).pow(2);
    let s0 = 1.0 / tau;
    let s1 = 2.0 * qf / tau;
    let s2 = qf * (1.5 * qf - 4.5) / tau;
    let k = single_operator_sum(n);
    LcuParams {
        m,
        l,
        s0,
        s1,
        s2,
        s: s0 * k + s1 * k * k + s2 * k * k * k,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityRow {
    pub label: &'static str,
    pub description: &'static str,
    pub qubits: f64,
    /// `None` where the variant needs no LCU ancillas.
    pub ancillas: Option<f64>,
    pub gates: f64,
    /// Gate count with the `log x / log log x` factor kept on the collision term.
    pub gates_with_log: f64,
}

/// `log2 x / log2 log2 x` with `x = S T 10^b`, clamped below at 1.
pub fn log_factor(inp: &ComplexityInputs) -> f64 {
    let s = lcu_collision_params(inp.q, inp.n, inp.tau).s.abs().max(1.0);
    let lx = (s * inp.t).log2() + inp.b * 10f64.log2();
    let llx = lx.log2();
    if llx > 1.0 {
        (lx / llx).max(1.0)
    } else {
        1.0
    }
}

/// One row per collision/streaming combination.
pub fn complexity_rows(inp: &ComplexityInputs) -> Result<Vec<ComplexityRow>> {
    inp.validate()?;
    let ComplexityInputs { g, t, tau, b, .. } = *inp;
    let (d, q) = (inp.d as f64, inp.q as f64);
    let lg = g.log2();
    let clg = g.log2().ceil();
    let ltb = (t + b).log2();
    let lf = log_factor(inp);
    let collision = t.powi(5) * q.powi(5) / tau;
    let embed_gates = t * q * q * d * d * clg * clg;
    let collision_anc = (q * ltb).log2();
    let embed_anc = (q * d * clg).log2();
    let rows = vec![
        ComplexityRow {
            label: "X*",
            description: "streaming by embedding of lattice position",
            qubits: lg + q,
            ancillas: Some(embed_anc),
            gates: embed_gates,
            gates_with_log: embed_gates,
        },
        ComplexityRow {
            label: "X**",
            description: "streaming with binary representation of lattice position",
            qubits: (q * g).log2() + 2.0 * d,
            ancillas: None,
            gates: t * d * lg * lg,
            gates_with_log: t * d * lg * lg,
        },
        ComplexityRow {
            label: "X***",
            description: "streaming by swapping discrete density registers",
            qubits: g * q,
            ancillas: None,
            gates: 3.0 * t * (q - 1.0) / 2.0 * g,
            gates_with_log: 3.0 * t * (q - 1.0) / 2.0 * g,
        },
        ComplexityRow {
            label: "X",
            description: "unitary collision",
            qubits: q * ltb,
            ancillas: Some(collision_anc),
            gates: collision,
            gates_with_log: collision * lf,
        },
        ComplexityRow {
            label: "X & X*",
            description: "unitary collision with embedded-position streaming",
            qubits: lg + q * lg.max(ltb),
            ancillas: Some(embed_anc),
            gates: embed_gates + collision,
            gates_with_log: embed_gates + collision * lf,
        },
        ComplexityRow {
            label: "X & X***",
            description: "unitary collision with register-swap streaming",
            qubits: g.min(t + lg) * q * ltb,
            ancillas: Some(collision_anc),
            gates: collision + t * q * g,
            gates_with_log: collision * lf + t * q * g,
        },
        ComplexityRow {
            label: "X & non-unitary",
            description: "unitary collision with non-unitary streaming",
            qubits: q * ltb + lg + 2.0 * d,
            ancillas: Some(collision_anc),
            gates: g * collision,
            gates_with_log: g * collision * lf,
        },
    ];
    Ok(rows)
}

/// `(15/2) log10(Re)`.
pub fn qubits_for_reynolds(re: f64) -> Result<f64> {
    if !(re >= 1.0) {
        return Err(Error::InvalidInput(format!("Reynolds number must be >= 1, got {re}")));
    }
    Ok(7.5 * re.log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcu_q3() {
        let p = lcu_collision_params(3, 3, 1.0);
        assert_eq!(p.m, 17);
        assert_eq!(p.l, 68);
        assert_eq!(p.s2, 0.0);
        assert!(lcu_collision_params(9, 3, 1.0).s2 > 0.0);
    }

    #[test]
    fn reynolds() {
        assert_eq!(qubits_for_reynolds(1e8).unwrap(), 60.0);
        assert_eq!(qubits_for_reynolds(1.0).unwrap(), 0.0);
        assert_eq!(qubits_for_reynolds(1e20).unwrap(), 150.0);
        assert!(qubits_for_reynolds(0.5).is_err());
    }

    #[test]
    fn invalid_q_rejected() {
        let inp = ComplexityInputs {
            g: 256.0,
            d: 2,
            t: 10.0,
            q: 8,
            tau: 1.0,
            b: 6.0,
            n: 3,
        };
        assert!(complexity_rows(&inp).is_err());
    }
}
