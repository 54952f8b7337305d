//! Monic polynomials orthogonal under `L[p] = int_{-z}^{z} p(x) exp(-x^2) dx`.
//!
//! They obey `P_{n+1} = x P_n - gamma_n P_{n-1}`. The `gamma_n` come from a
//! quadrature Gram-Schmidt oracle; the nonlinear identities they satisfy are
//! evaluated as residuals, never solved.

use crate::error::{Error, Result};
use crate::quadrature::integrate;

pub const DEFAULT_Z: f64 = 1.0;
pub const MAX_DEGREE: usize = 20;
const QUAD_ABS_TOL: f64 = 1e-30;
const QUAD_REL_TOL: f64 = 1e-14;
/// Smallest `|C_{z,n}(x)|` accepted by [`lowering_check`].
pub const SINGULAR_TOL: f64 = 1e-10;

fn weighted(z: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    integrate(|x| f(x) * (-x * x).exp(), -z, z, QUAD_ABS_TOL, QUAD_REL_TOL)
}

/// `m_k = L[x^k]` for `k = 0..=kmax`.
pub fn moments(z: f64, kmax: usize) -> Result<Vec<f64>> {
    (0..=kmax).map(|k| weighted(z, |x| x.powi(k as i32))).collect()
}

/// Polynomials built by Gram-Schmidt: `P_n = x P_{n-1} - sum_k c[n][k] P_k`.
struct GramSchmidt {
    c: Vec<Vec<f64>>,
}

impl GramSchmidt {
    /// `P_0..=P_n` at `x`.
    fn eval(&self, n: usize, x: f64) -> Vec<f64> {
        let mut p = vec![1.0];
        for m in 1..=n {
            let v = x * p[m - 1] - self.c[m].iter().zip(&p).map(|(c, pk)| c * pk).sum::<f64>();
            p.push(v);
        }
        p
    }
}

/// `gamma_0..=gamma_nmax` (with `gamma_0 = 0`) from quadrature inner
/// products, orthogonalizing `x P_{n-1}` against every earlier polynomial
/// twice.
pub fn gamma_sequence_oracle(z: f64, nmax: usize) -> Result<Vec<f64>> {
    if !(z > 0.0) {
        return Err(Error::InvalidInput(format!("half-width z must be positive, got {z}")));
    }
    if nmax > MAX_DEGREE {
        return Err(Error::TooLarge {
            what: "polynomial degree",
            size: nmax,
            limit: MAX_DEGREE,
        });
    }
    let mut gs = GramSchmidt { c: vec![vec![]] };
    let mut norms = vec![weighted(z, |_| 1.0)?];
    for n in 1..=nmax {
        gs.c.push(vec![0.0; n]);
        for _pass in 0..2 {
            for k in 0..n {
                let ip = weighted(z, |x| {
                    let p = gs.eval(n, x);
                    p[n] * p[k]
                })?;
                gs.c[n][k] += ip / norms[k];
            }
        }
        norms.push(weighted(z, |x| gs.eval(n, x)[n].powi(2))?);
    }
    let mut g = vec![0.0];
    g.extend((1..=nmax).map(|n| norms[n] / norms[n - 1]));
    Ok(g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedHermiteBasis {
    pub z: f64,
    /// `gamma_0..=gamma_nmax`.
    pub gammas: Vec<f64>,
}

impl TruncatedHermiteBasis {
    pub fn new(z: f64, nmax: usize) -> Result<Self> {
        Ok(Self {
            z,
            gammas: gamma_sequence_oracle(z, nmax)?,
        })
    }

    pub fn from_gammas(z: f64, gammas: Vec<f64>) -> Self {
        Self { z, gammas }
    }

    /// Highest `n` with `gamma_n` available.
    pub fn nmax(&self) -> usize {
        self.gammas.len() - 1
    }

    /// `(P_0..=P_n, P'_0..=P'_n)` at `x`. Needs `gamma_1..gamma_{n-1}`.
    pub fn eval_all(&self, n: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
        assert!(n <= self.nmax() + 1, "degree {n} needs gamma_{}", n - 1);
        let mut p = vec![1.0, x];
        let mut d = vec![0.0, 1.0];
        for k in 1..n {
            let g = self.gammas[k];
            p.push(x * p[k] - g * p[k - 1]);
            d.push(p[k] + x * d[k] - g * d[k - 1]);
        }
        p.truncate(n + 1);
        d.truncate(n + 1);
        (p, d)
    }

    /// `(P_n(x), P'_n(x))`.
    pub fn poly_eval(&self, n: usize, x: f64) -> (f64, f64) {
        let (p, d) = self.eval_all(n, x);
        (p[n], d[n])
    }
}

/// Max residuals over the checked range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    pub laguerre_freud: f64,
    pub second_form: f64,
    pub g_form: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.laguerre_freud.max(self.second_form).max(self.g_form)
    }
}

/// Residuals of the Laguerre-Freud relation, its factored form, and the
/// `g_n = n/2 - gamma_n` form, for `n = 1..=len - 3`.
pub fn gamma_laguerre_freud_check(g: &[f64], z: f64) -> Result<IdentityResiduals> {
    if g.len() < 4 {
        return Err(Error::InvalidInput(format!("need at least 4 gammas, got {}", g.len())));
    }
    let z2 = z * z;
    let gn = |k: usize| k as f64 / 2.0 - g[k];
    let mut r = IdentityResiduals {
        laguerre_freud: 0.0,
        second_form: 0.0,
        g_form: 0.0,
    };
    for n in 1..=g.len() - 3 {
        let nf = n as f64;
        let lf = g[n] * (g[n - 1] + g[n] - z2 + 0.5 - nf)
            - g[n + 1] * (g[n + 1] + g[n + 2] - z2 - nf - 1.5)
            - z2 / 2.0;
        let sf = g[n] * (nf + 0.5 - g[n] - g[n + 1]) * (nf - 0.5 - g[n] - g[n - 1])
            - z2 * (nf / 2.0 - g[n]).powi(2);
        let gf = (nf / 2.0 - gn(n)) * (gn(n) + gn(n + 1)) * (gn(n) + gn(n - 1)) - z2 * gn(n).powi(2);
        r.laguerre_freud = r.laguerre_freud.max(lf.abs());
        r.second_form = r.second_form.max(sf.abs());
        r.g_form = r.g_form.max(gf.abs());
    }
    Ok(r)
}

/// Max over `xs` of `|U_{z,n} P_n - P_{n-1}|` with
/// `U = A d/dx - B`, `A = (x^2 - z^2)/(2 gamma_n C)`,
/// `B = (n - 2 gamma_n) x/(2 gamma_n C)`,
/// `C = x^2 - z^2 + gamma_n + gamma_{n+1} - n - 1/2`.
pub fn lowering_check(b: &TruncatedHermiteBasis, n: usize, xs: &[f64]) -> Result<f64> {
    if n == 0 || n + 1 > b.nmax() {
        return Err(Error::InvalidInput(format!("lowering check needs 1 <= n < nmax, got {n}")));
    }
    let (z2, g, g1) = (b.z * b.z, b.gammas[n], b.gammas[n + 1]);
    let nf = n as f64;
    let mut worst: f64 = 0.0;
    for &x in xs {
        let c = x * x - z2 + g + g1 - nf - 0.5;
        if c.abs() < SINGULAR_TOL {
            return Err(Error::SingularCoefficient(c));
        }
        let a = (x * x - z2) / (2.0 * g * c);
        let bb = (nf - 2.0 * g) * x / (2.0 * g * c);
        let (p, d) = b.eval_all(n, x);
        worst = worst.max((a * d[n] - bb * p[n] - p[n - 1]).abs());
    }
    Ok(worst)
}

/// `lambda_n = (2 (gamma_n + gamma_{n+1} + gamma_{n+2} - z^2 - 1) - n) gamma_{n+1}`.
pub fn lambda_coeff(g: &[f64], z: f64, n: usize) -> f64 {
    (2.0 * (g[n] + g[n + 1] + g[n + 2] - z * z - 1.0) - n as f64) * g[n + 1]
}

/// `tau_n = 2 gamma_{n+1} gamma_n gamma_{n-1}`.
pub fn tau_coeff(g: &[f64], n: usize) -> f64 {
    2.0 * g[n + 1] * g[n] * g[n - 1]
}

/// Max over `xs` of
/// `|(x^2 - z^2) P'_{n+1} - (n+1) P_{n+2} - lambda_n P_n - tau_n P_{n-2}|`.
pub fn diff_recurrence_check(b: &TruncatedHermiteBasis, n: usize, xs: &[f64]) -> Result<f64> {
    if n < 2 || n + 2 > b.nmax() {
        return Err(Error::InvalidInput(format!(
            "differential recurrence needs 2 <= n <= nmax - 2, got {n}"
        )));
    }
    let lam = lambda_coeff(&b.gammas, b.z, n);
    let tau = tau_coeff(&b.gammas, n);
    let z2 = b.z * b.z;
    let mut worst: f64 = 0.0;
    for &x in xs {
        let (p, d) = b.eval_all(n + 2, x);
        let r = (x * x - z2) * d[n + 1] - ((n + 1) as f64 * p[n + 2] + lam * p[n] + tau * p[n - 2]);
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// `int P_m P_n exp(-x^2)` over `[-z, z]`.
pub fn inner_product(b: &TruncatedHermiteBasis, m: usize, n: usize) -> Result<f64> {
    let top = m.max(n);
    weighted(b.z, |x| {
        let (p, _) = b.eval_all(top, x);
        p[m] * p[n]
    })
}
