//! Quantum collision step for a single lattice cell.
//!
//! Each distribution `f_i` lives in its own truncated bosonic mode. The BGK
//! collision term becomes a polynomial `Omega_i(q)` in the position
//! operators, and the Hamiltonian `H = sum_i p_i Omega_i(q)` generates
//! `d<q_i>/dt = Omega_i`. The equilibrium is the incompressible form with
//! `rho = 1` and `u = sum_j c_j q_j`, so `Omega` has degree two.

use ndarray::Array2;
use num_complex::Complex64;

use crate::classical::evolve_0d;
use crate::error::{Error, Result};
use crate::fock::{
    decode_ratio, encode_value, position_momentum, Encoding, FockConfig, HermiteConvention,
};
use crate::lattice::LatticeModel;
use crate::operator::{expm, DenseOperator, ExpAction, EXPM_MAX_DIM, EXPM_RESIDUAL_TOL, ONE, ZERO};

/// Relative error above which a run is flagged as divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1.0;
/// Largest dimension for which the propagator is formed densely by default.
pub const DENSE_PROPAGATOR_MAX_DIM: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    NonHermitian,
    Hermitized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    /// Dense below [`DENSE_PROPAGATOR_MAX_DIM`], action above.
    Auto,
    Dense,
    Action,
}

#[derive(Debug, Clone)]
pub struct CollisionSetup {
    pub model: LatticeModel<f64>,
    pub cfg: FockConfig,
    pub tau: f64,
    pub dt: f64,
}

impl CollisionSetup {
    pub fn new(model: LatticeModel<f64>, cfg: FockConfig, tau: f64, dt: f64) -> Result<Self> {
        if !(tau > 0.5 * dt) {
            return Err(Error::TauTooSmall {
                tau,
                half_dt: 0.5 * dt,
            });
        }
        if !(dt > 0.0) {
            return Err(Error::InvalidInput(format!("dt must be positive, got {dt}")));
        }
        let dim = (cfg.dim() as u128).checked_pow(model.q as u32);
        match dim {
            Some(d) if d <= EXPM_MAX_DIM as u128 => {}
            _ => {
                return Err(Error::TooLarge {
                    what: "collision Hilbert space",
                    size: dim.map_or(usize::MAX, |d| d.min(usize::MAX as u128) as usize),
                    limit: EXPM_MAX_DIM,
                })
            }
        }
        Ok(Self {
            model,
            cfg,
            tau,
            dt,
        })
    }

    pub fn modes(&self) -> usize {
        self.model.q
    }

    pub fn nqubits(&self) -> usize {
        self.modes() * self.cfg.qc
    }

    pub fn dim(&self) -> usize {
        self.cfg.dim().pow(self.modes() as u32)
    }

    /// Composite basis index of the given per-mode occupations.
    pub fn index(&self, occupations: &[usize]) -> usize {
        occupations.iter().fold(0, |acc, &n| acc * self.cfg.dim() + n)
    }
}

/// Sum of tensor products; `None` factors are identities.
#[derive(Debug, Clone)]
struct TensorSum {
    slots: usize,
    local: usize,
    terms: Vec<(Complex64, Vec<Option<Array2<Complex64>>>)>,
}

impl TensorSum {
    fn new(slots: usize, local: usize) -> Self {
        Self {
            slots,
            local,
            terms: Vec::new(),
        }
    }

    fn push(&mut self, coeff: Complex64, factors: Vec<(usize, Array2<Complex64>)>) {
        let mut f: Vec<Option<Array2<Complex64>>> = vec![None; self.slots];
        for (slot, m) in factors {
            f[slot] = Some(match f[slot].take() {
                Some(prev) => prev.dot(&m),
                None => m,
            });
        }
        self.terms.push((coeff, f));
    }

    /// Applies `g` to the factor in `slot` of every term.
    fn map_slot(&self, slot: usize, g: impl Fn(&Array2<Complex64>) -> Array2<Complex64>) -> Self {
        let eye = Array2::eye(self.local);
        let mut out = self.clone();
        for (_, f) in &mut out.terms {
            let m = f[slot].as_ref().unwrap_or(&eye);
            f[slot] = Some(g(m));
        }
        out
    }

    fn extend(&mut self, other: Self) {
        self.terms.extend(other.terms);
    }

    fn scale(mut self, z: Complex64) -> Self {
        self.terms.iter_mut().for_each(|(c, _)| *c *= z);
        self
    }

    fn densify(&self) -> DenseOperator {
        let d = self.local;
        let dim = d.pow(self.slots as u32);
        let mut out = Array2::<Complex64>::zeros((dim, dim));
        let ident: Vec<(usize, usize, Complex64)> = (0..d).map(|k| (k, k, ONE)).collect();
        for (coeff, factors) in &self.terms {
            let nz: Vec<Vec<(usize, usize, Complex64)>> = factors
                .iter()
                .map(|f| match f {
                    None => ident.clone(),
                    Some(m) => m
                        .indexed_iter()
                        .filter(|(_, &z)| z != ZERO)
                        .map(|((r, c), &z)| (r, c, z))
                        .collect(),
                })
                .collect();
            accumulate(&nz, 0, 0, 0, *coeff, d, &mut out);
        }
        let mut op = DenseOperator::new(out);
        op.hermitian = false;
        op
    }
}

fn accumulate(
    nz: &[Vec<(usize, usize, Complex64)>],
    slot: usize,
    row: usize,
    col: usize,
    val: Complex64,
    d: usize,
    out: &mut Array2<Complex64>,
) {
    if slot == nz.len() {
        out[[row, col]] += val;
        return;
    }
    for &(r, c, z) in &nz[slot] {
        accumulate(nz, slot + 1, row * d + r, col * d + c, val * z, d, out);
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `Omega_i(q)` as a tensor sum over modes.
fn omega_terms(setup: &CollisionSetup, i: usize) -> TensorSum {
    let m = &setup.model;
    let (q, _) = position_momentum(setup.cfg);
    let q = q.mat;
    let inv_tau = 1.0 / setup.tau;
    let w = m.weights[i];
    let mut s = TensorSum::new(m.q, setup.cfg.dim());
    s.push(real(w * inv_tau), vec![]);
    for j in 0..m.q {
        let lin = 3.0 * w * m.cdot(i, j) as f64 - if i == j { 1.0 } else { 0.0 };
        if lin != 0.0 {
            s.push(real(lin * inv_tau), vec![(j, q.clone())]);
        }
    }
    for j in 0..m.q {
        for k in 0..m.q {
            let quad = w * (4.5 * (m.cdot(i, j) * m.cdot(i, k)) as f64 - 1.5 * m.cdot(j, k) as f64);
            if quad != 0.0 {
                s.push(real(quad * inv_tau), vec![(j, q.clone()), (k, q.clone())]);
            }
        }
    }
    s
}

/// Collision operator `Omega_i(q)` on the full register.
pub fn omega_operator(setup: &CollisionSetup, i: usize) -> DenseOperator {
    assert!(i < setup.modes(), "direction index");
    let mut op = omega_terms(setup, i).densify();
    op.hermitian = true;
    op
}

fn hamiltonian_terms(setup: &CollisionSetup, method: Method) -> TensorSum {
    let (_, p) = position_momentum(setup.cfg);
    let p = p.mat;
    let mut h = TensorSum::new(setup.modes(), setup.cfg.dim());
    for i in 0..setup.modes() {
        let om = omega_terms(setup, i);
        match method {
            Method::NonHermitian => h.extend(om.map_slot(i, |m| p.dot(m))),
            Method::Hermitized => {
                h.extend(om.map_slot(i, |m| p.dot(m)).scale(real(0.5)));
                h.extend(om.map_slot(i, |m| m.dot(&p)).scale(real(0.5)));
            }
        }
    }
    h
}

/// `H = sum_i p_i Omega_i(q)`.
pub fn hamiltonian_nonhermitian(setup: &CollisionSetup) -> DenseOperator {
    hamiltonian_terms(setup, Method::NonHermitian).densify()
}

/// Symmetrized Hamiltonian and the constant divergence `-(Q - D)/tau` of
/// the collision field.
pub fn hamiltonian_hermitized(setup: &CollisionSetup) -> (DenseOperator, f64) {
    let mut h = hamiltonian_terms(setup, Method::Hermitized).densify();
    h.hermitian = true;
    (h, divergence(setup.model.q, setup.model.dim, setup.tau))
}

pub fn divergence(q: usize, d: usize, tau: f64) -> f64 {
    -((q - d) as f64) / tau
}

/// Norm growth `exp(T dt (Q - D) / (2 tau))` removed by the symmetrization.
pub fn dissipation_factor(steps: usize, dt: f64, tau: f64, q: usize, d: usize) -> f64 {
    (steps as f64 * dt * (q - d) as f64 / (2.0 * tau)).exp()
}

/// Per-step time evolution `psi -> exp(-i dt H) psi`.
pub enum Propagator {
    Dense(DenseOperator),
    Action(ExpAction),
}

impl Propagator {
    pub fn new(h: &DenseOperator, dt: f64, kind: Propagation) -> Result<Self> {
        let gen = h.scale(Complex64::new(0.0, -dt));
        let dense = match kind {
            Propagation::Auto => h.dim() <= DENSE_PROPAGATOR_MAX_DIM,
            Propagation::Dense => true,
            Propagation::Action => false,
        };
        if dense {
            Ok(Propagator::Dense(expm(&gen, EXPM_RESIDUAL_TOL)?))
        } else {
            if !gen.is_finite() {
                return Err(Error::NonFinite("hamiltonian"));
            }
            Ok(Propagator::Action(ExpAction::new(&gen)))
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        match self {
            Propagator::Dense(u) => u.apply(v),
            Propagator::Action(a) => Ok(a.apply(v)),
        }
    }
}

/// Product state of per-mode encodings.
pub fn encode_register(setup: &CollisionSetup, f: &[f64], encoding: Encoding) -> Result<Vec<Complex64>> {
    if f.len() != setup.modes() {
        return Err(Error::DimMismatch(f.len(), setup.modes()));
    }
    let mut state = vec![ONE];
    for &fi in f {
        let e = encode_value(fi, setup.cfg, encoding)?;
        let mut next = Vec::with_capacity(state.len() * e.amplitudes.len());
        for &s in &state {
            next.extend(e.amplitudes.iter().map(|&a| s * a));
        }
        state = next;
    }
    Ok(state)
}

/// Per-mode decodes `<e_i|psi> / <0|psi>` scaled by the encoding.
pub fn decode_register(
    setup: &CollisionSetup,
    psi: &[Complex64],
    encoding: Encoding,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let ground = psi[0];
    let mut values = Vec::with_capacity(setup.modes());
    let mut imag = Vec::with_capacity(setup.modes());
    let mut occ = vec![0; setup.modes()];
    for i in 0..setup.modes() {
        occ[i] = 1;
        let d = decode_ratio(ground, psi[setup.index(&occ)], encoding)?;
        occ[i] = 0;
        values.push(d.value);
        imag.push(d.imag_residual);
    }
    Ok((values, imag))
}

/// Per-component relative errors and the count of points where the
/// reference vanished (reported as NaN).
pub fn relative_error(series_q: &[Vec<f64>], series_c: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, usize)> {
    if series_q.len() != series_c.len() {
        return Err(Error::DimMismatch(series_q.len(), series_c.len()));
    }
    let mut nan = 0;
    let mut out = Vec::with_capacity(series_q.len());
    for (q, c) in series_q.iter().zip(series_c) {
        if q.len() != c.len() {
            return Err(Error::DimMismatch(q.len(), c.len()));
        }
        out.push(
            q.iter()
                .zip(c)
                .map(|(&a, &b)| {
                    if b == 0.0 {
                        nan += 1;
                        f64::NAN
                    } else {
                        (a - b).abs() / b.abs()
                    }
                })
                .collect(),
        );
    }
    Ok((out, nan))
}

#[derive(Debug, Clone)]
pub struct EvolveOptions {
    pub method: Method,
    pub encoding: Encoding,
    pub propagation: Propagation,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            method: Method::Hermitized,
            encoding: Encoding::Eigenstate(HermiteConvention::Physicists),
            propagation: Propagation::Auto,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub method: Method,
    pub times: Vec<f64>,
    /// Decoded `f_i` per step.
    pub decoded: Vec<Vec<f64>>,
    /// Imaginary parts of the decode ratios.
    pub imag_residuals: Vec<Vec<f64>>,
    pub classical: Vec<Vec<f64>>,
    pub norms: Vec<f64>,
    /// Norms after undoing the symmetrization's dissipation; equal to
    /// `norms` for the non-Hermitian method. Ratio decodes are unaffected.
    pub corrected_norms: Vec<f64>,
    pub relative_errors: Vec<Vec<f64>>,
    /// Worst component per step; non-finite decodes map to infinity.
    pub max_relative_error: Vec<f64>,
    pub nan_count: usize,
    /// First step whose error exceeds [`DIVERGENCE_THRESHOLD`] or is not finite.
    pub divergence_step: Option<usize>,
}

impl EvolutionResult {
    pub fn diverged(&self) -> bool {
        self.divergence_step.is_some()
    }

    /// Largest per-step change of the statevector norm.
    pub fn max_norm_step_change(&self) -> f64 {
        self.norms
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max)
    }
}

/// Runs `steps` collision steps and compares with the classical Euler update.
pub fn evolve_quantum_0d(
    setup: &CollisionSetup,
    f0: &[f64],
    steps: usize,
    opts: &EvolveOptions,
) -> Result<EvolutionResult> {
    let total: f64 = f0.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("initial mass {total} is not 1")));
    }
    let classical = evolve_0d(f0, &setup.model, setup.tau, setup.dt, steps)?;
    let h = match opts.method {
        Method::NonHermitian => hamiltonian_nonhermitian(setup),
        Method::Hermitized => hamiltonian_hermitized(setup).0,
    };
    let prop = Propagator::new(&h, setup.dt, opts.propagation)?;
    drop(h);

    let mut psi = encode_register(setup, f0, opts.encoding)?;
    let mut decoded = Vec::with_capacity(steps + 1);
    let mut imag = Vec::with_capacity(steps + 1);
    let mut norms = Vec::with_capacity(steps + 1);
    for t in 0..=steps {
        if t > 0 {
            psi = prop.apply(&psi)?;
        }
        norms.push(psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        match decode_register(setup, &psi, opts.encoding) {
            Ok((v, im)) => {
                decoded.push(v);
                imag.push(im);
            }
            Err(Error::GroundAmplitudeZero) => {
                decoded.push(vec![f64::NAN; setup.modes()]);
                imag.push(vec![f64::NAN; setup.modes()]);
            }
            Err(e) => return Err(e),
        }
    }
    let (rel, nan_count) = relative_error(&decoded, &classical)?;
    let max_rel: Vec<f64> = rel
        .iter()
        .map(|r| {
            r.iter().fold(0.0f64, |acc, &x| {
                if x.is_nan() || x.is_infinite() {
                    f64::INFINITY
                } else {
                    acc.max(x)
                }
            })
        })
        .collect();
    let divergence_step = max_rel
        .iter()
        .position(|&e| !(e <= DIVERGENCE_THRESHOLD));
    let corrected_norms = match opts.method {
        Method::NonHermitian => norms.clone(),
        Method::Hermitized => norms
            .iter()
            .enumerate()
            .map(|(t, n)| {
                n * dissipation_factor(t, setup.dt, setup.tau, setup.model.q, setup.model.dim)
            })
            .collect(),
    };
    Ok(EvolutionResult {
        method: opts.method,
        times: (0..=steps).map(|t| t as f64 * setup.dt).collect(),
        decoded,
        imag_residuals: imag,
        classical,
        norms,
        corrected_norms,
        relative_errors: rel,
        max_relative_error: max_rel,
        nan_count,
        divergence_step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, LatticeKind};

    fn setup(qc: usize) -> CollisionSetup {
        CollisionSetup::new(
            build_lattice(LatticeKind::D1Q3),
            FockConfig::from_qubits(qc).unwrap(),
            1.0,
            1e-3,
        )
        .unwrap()
    }

    #[test]
    fn guards() {
        let m = build_lattice(LatticeKind::D1Q3);
        let cfg = FockConfig::from_qubits(1).unwrap();
        assert!(matches!(
            CollisionSetup::new(m.clone(), cfg, 0.1, 0.5),
            Err(Error::TauTooSmall { .. })
        ));
        let big = FockConfig::from_qubits(5).unwrap();
        assert!(matches!(
            CollisionSetup::new(m, big, 1.0, 1e-3),
            Err(Error::TooLarge { .. })
        ));
        let d2 = build_lattice(LatticeKind::D2Q9);
        assert!(CollisionSetup::new(d2.clone(), cfg, 1.0, 1e-3).is_ok());
        assert!(CollisionSetup::new(d2, FockConfig::from_qubits(2).unwrap(), 1.0, 1e-3).is_err());
    }

    #[test]
    fn divergence_values() {
        assert_eq!(divergence(3, 1, 1.0), -2.0);
        assert_eq!(divergence(9, 2, 2.0), -3.5);
        assert_eq!(divergence(27, 3, 1.0), -24.0);
        assert_eq!(dissipation_factor(0, 1e-3, 1.0, 3, 1), 1.0);
        assert!((dissipation_factor(1, 1.0, 1.0, 3, 1) - 1f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn relative_error_basics() {
        let c = vec![vec![1.0, 2.0], vec![0.5, 0.0]];
        let q: Vec<Vec<f64>> = c.iter().map(|r| r.iter().map(|x| 1.2 * x).collect()).collect();
        let (r, nan) = relative_error(&q, &c).unwrap();
        assert_eq!(nan, 1);
        assert!((r[0][1] - 0.2).abs() < 1e-15);
        assert!(r[1][1].is_nan());
    }

    #[test]
    fn register_index_order() {
        let s = setup(2);
        assert_eq!(s.index(&[1, 0, 0]), 16);
        assert_eq!(s.index(&[0, 0, 1]), 1);
        assert_eq!(s.dim(), 64);
    }
}
