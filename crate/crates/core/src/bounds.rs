//! Truncation residual, the error recurrence and its logistic normal form.
//!
//! The accumulated error obeys `e(t+1) = (dt/tau) (C1 (eps_N + e(t)) + C0)^2`.
//! With `k = C1 sqrt(dt/tau)` and `r = C0/C1 + eps_N` the substitution
//! `e = (2 kappa / k)(Z - 1/2) - r` turns it into `Z(t+1) = mu Z (1 - Z)`,
//! `mu = -2 k kappa`, provided `k kappa^2 + kappa + k r = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::HermiteConvention;

/// Grid resolution used for the supremum in [`epsilon_n`].
pub const EPSILON_GRID: usize = 10_000;
/// Logistic iterates beyond this modulus are flagged as divergent.
pub const Z_DIVERGENCE: f64 = 1e12;
const CLOSURE_TOL: f64 = 1e-9;

/// `sup_{|f| <= 1} |2^{-N/2} (N!)^{-1/2} He_{N+1}(f) / 2|` on a uniform grid
/// including both endpoints.
pub fn epsilon_n(n: usize) -> f64 {
    epsilon_n_argmax(n).1
}

/// `(argmax f, sup)` of [`epsilon_n`].
pub fn epsilon_n_argmax(n: usize) -> (f64, f64) {
    let mut scale = 0.5;
    for k in 1..=n {
        scale /= (2.0 * k as f64).sqrt();
    }
    let mut best = (0.0, -1.0);
    for i in 0..=EPSILON_GRID {
        let f = -1.0 + 2.0 * i as f64 / EPSILON_GRID as f64;
        let v = (scale * HermiteConvention::Monic.values(n + 1, f)[n + 1]).abs();
        if v > best.1 {
            best = (f, v);
        }
    }
    best
}

/// Which coefficient absorbs the slack when completing the square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVariant {
    InflateC0,
    InflateA,
}

/// Quadratic `a x^2 + b x + c` bounding the one-step error growth.
pub fn growth_polynomial(q: usize) -> (f64, f64, f64) {
    let q = q as f64;
    (6.0 * q * q, 12.0 * q * q + 3.0 * q + 1.0, 1.0)
}

/// `(C0, C1)` with `(C1 x + C0)^2 >= a x^2 + b x + c` for `x >= 0`, obtained
/// by inflating `c` or `a` until the discriminant closes.
pub fn bound_coefficients(q: usize, variant: BoundVariant) -> Result<(f64, f64)> {
    if ![3, 9, 27].contains(&q) {
        return Err(Error::InvalidInput(format!("Q must be 3, 9 or 27, got {q}")));
    }
    let (a, b, c) = growth_polynomial(q);
    let qf = q as f64;
    let (a2, c2) = match variant {
        BoundVariant::InflateC0 => (
            a,
            c + 6.0 * qf * qf + 3.0 * qf + 3.0 / 8.0 + 1.0 / (4.0 * qf) + 1.0 / (24.0 * qf * qf),
        ),
        BoundVariant::InflateA => (
            a + 36.0 * qf.powi(4) + 18.0 * qf.powi(3) + 2.25 * qf * qf + 1.5 * qf + 0.25,
            c,
        ),
    };
    let disc = b * b - 4.0 * a2 * c2;
    if disc.abs() > CLOSURE_TOL * b * b {
        return Err(Error::DiscriminantNotClosed(disc));
    }
    Ok((c2.sqrt(), a2.sqrt()))
}

/// Roots of `kappa^2 + kappa - (C0/C1 + eps_N) = 0`, `(plus, minus)`.
pub fn kappa_roots(c0: f64, c1: f64, eps_n: f64) -> Result<(f64, f64)> {
    let rad = 1.0 + 4.0 * (c0 / c1 + eps_n);
    if rad < 0.0 {
        return Err(Error::NegativeRadicand(rad));
    }
    let s = rad.sqrt();
    Ok(((-1.0 + s) / 2.0, (-1.0 - s) / 2.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBoundParams {
    pub c0: f64,
    pub c1: f64,
    pub tau: f64,
    pub dt: f64,
    pub eps_n: f64,
    /// Conjugating root of `k kappa^2 + kappa + k r = 0` nearest zero;
    /// complex when `4 k^2 r > 1`.
    pub kappa: Complex64,
    /// Roots of `kappa^2 + kappa - r = 0`, used by [`feasibility`].
    pub kappa_roots: (f64, f64),
    pub z0: Complex64,
}

impl ErrorBoundParams {
    pub fn new(c0: f64, c1: f64, tau: f64, dt: f64, eps_n: f64) -> Result<Self> {
        if !(c0 >= 0.0 && c1 > 0.0 && tau > 0.0 && dt > 0.0 && (0.0..=1.0).contains(&eps_n)) {
            return Err(Error::InvalidInput(format!(
                "bound parameters out of range: C0={c0}, C1={c1}, tau={tau}, dt={dt}, eps_N={eps_n}"
            )));
        }
        let k = c1 * (dt / tau).sqrt();
        let r = c0 / c1 + eps_n;
        let disc = Complex64::new(1.0 - 4.0 * k * k * r, 0.0).sqrt();
        let kappa = (disc - 1.0) / (2.0 * k);
        if kappa.norm() == 0.0 {
            return Err(Error::InvalidInput("degenerate error map (C0/C1 + eps_N = 0)".into()));
        }
        let z0 = k * r / (2.0 * kappa) + 0.5;
        Ok(Self {
            c0,
            c1,
            tau,
            dt,
            eps_n,
            kappa,
            kappa_roots: kappa_roots(c0, c1, eps_n)?,
            z0,
        })
    }

    pub fn k(&self) -> f64 {
        self.c1 * (self.dt / self.tau).sqrt()
    }

    pub fn r(&self) -> f64 {
        self.c0 / self.c1 + self.eps_n
    }

    /// Logistic parameter `mu = -2 k kappa`.
    pub fn mu(&self) -> Complex64 {
        -2.0 * self.k() * self.kappa
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticRun {
    pub z: Vec<Complex64>,
    /// Error recovered from `Z`; the imaginary part cancels exactly and
    /// is kept as a diagnostic.
    pub eps: Vec<f64>,
    pub eps_imag: Vec<f64>,
    /// Step at which `|Z|` first exceeded [`Z_DIVERGENCE`]; iteration stops there.
    pub diverged_at: Option<usize>,
}

pub fn logistic_map_run(p: &ErrorBoundParams, steps: usize) -> LogisticRun {
    let mu = p.mu();
    let scale = 2.0 * p.kappa / p.k();
    let r = p.r();
    let mut run = LogisticRun {
        z: Vec::with_capacity(steps + 1),
        eps: Vec::with_capacity(steps + 1),
        eps_imag: Vec::with_capacity(steps + 1),
        diverged_at: None,
    };
    let mut z = p.z0;
    for t in 0..=steps {
        if t > 0 {
            z = mu * z * (1.0 - z);
        }
        let e = scale * (z - 0.5) - r;
        run.z.push(z);
        run.eps.push(e.re);
        run.eps_imag.push(e.im);
        if !(z.norm() <= Z_DIVERGENCE) {
            run.diverged_at = Some(t);
            break;
        }
    }
    run
}

/// Direct iteration of the error recurrence from `e(0) = 0`.
pub fn raw_recurrence(p: &ErrorBoundParams, steps: usize) -> Vec<f64> {
    let ratio = p.dt / p.tau;
    let mut out = vec![0.0];
    for _ in 0..steps {
        let e = *out.last().expect("non-empty");
        out.push(ratio * (p.c1 * (p.eps_n + e) + p.c0).powi(2));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    /// `(1 + sqrt(1 + 4r))/2 - sqrt(dt/tau)(C0 + C1 eps_N)`.
    pub lower_margin: f64,
    /// `sqrt(tau/dt)/C1 - 1 - (1 + sqrt(1 + 4r))/2`.
    pub upper_margin: f64,
}

impl Feasibility {
    pub fn feasible(&self) -> bool {
        self.lower_margin >= 0.0 && self.upper_margin > 0.0
    }

    pub fn verdict(&self) -> &'static str {
        if self.feasible() {
            "feasible"
        } else {
            "infeasible"
        }
    }
}

/// Checks `sqrt(dt/tau)(C0 + C1 eps_N) <= (1 + sqrt(1 + 4r))/2 < sqrt(tau/dt)/C1 - 1`.
pub fn feasibility(c0: f64, c1: f64, dt: f64, tau: f64, eps_n: f64) -> Result<Feasibility> {
    let (kp, _) = kappa_roots(c0, c1, eps_n)?;
    let mid = kp + 1.0;
    Ok(Feasibility {
        lower_margin: mid - (dt / tau).sqrt() * (c0 + c1 * eps_n),
        upper_margin: (tau / dt).sqrt() / c1 - 1.0 - mid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_roots(0.0, 1.0, 0.0).unwrap(), (0.0, -1.0));
        assert_eq!(kappa_roots(2.0, 1.0, 0.0).unwrap(), (1.0, -2.0));
        assert!(matches!(kappa_roots(-1.0, 1.0, 0.0), Err(Error::NegativeRadicand(_))));
    }

    #[test]
    fn q3_coefficients() {
        assert_eq!(growth_polynomial(3), (54.0, 118.0, 1.0));
        assert!(bound_coefficients(4, BoundVariant::InflateA).is_err());
    }

    #[test]
    fn eps_zero_at_start() {
        let p = ErrorBoundParams::new(1.0, 2.0, 1.0, 1e-3, 0.1).unwrap();
        let run = logistic_map_run(&p, 0);
        assert!(run.eps[0].abs() < 1e-12);
    }
}
