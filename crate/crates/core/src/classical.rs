//! Reference BGK solver: incompressible equilibrium, periodic streaming and
//! hydrodynamic moments.

use crate::error::{Error, Result};
use crate::lattice::LatticeModel;
use crate::scalar::Real;

/// Densities `f_i(x)` on a periodic grid, site-major and direction-minor.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionField<T> {
    pub model: LatticeModel<T>,
    /// Site counts per axis; axis 0 varies fastest.
    pub dims: Vec<usize>,
    pub data: Vec<T>,
}

/// Density and velocity per site.
#[derive(Debug, Clone, PartialEq)]
pub struct HydroMoments<T> {
    pub rho: Vec<T>,
    /// `dim` components per site.
    pub u: Vec<T>,
}

impl<T: Real> DistributionField<T> {
    /// Field with every site set to `f`.
    pub fn uniform(model: LatticeModel<T>, dims: Vec<usize>, f: &[T]) -> Result<Self> {
        if dims.len() != model.dim {
            return Err(Error::DimMismatch(dims.len(), model.dim));
        }
        if f.len() != model.q {
            return Err(Error::DimMismatch(f.len(), model.q));
        }
        let sites: usize = dims.iter().product();
        let data = (0..sites).flat_map(|_| f.iter().copied()).collect();
        Ok(Self { model, dims, data })
    }

    pub fn from_data(model: LatticeModel<T>, dims: Vec<usize>, data: Vec<T>) -> Result<Self> {
        if dims.len() != model.dim {
            return Err(Error::DimMismatch(dims.len(), model.dim));
        }
        let expected = dims.iter().product::<usize>() * model.q;
        if data.len() != expected {
            return Err(Error::DimMismatch(data.len(), expected));
        }
        Ok(Self { model, dims, data })
    }

    pub fn sites(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn site(&self, s: usize) -> &[T] {
        let q = self.model.q;
        &self.data[s * q..(s + 1) * q]
    }

    /// Multi-index of a linear site index.
    pub fn coords(&self, mut s: usize) -> Vec<usize> {
        self.dims
            .iter()
            .map(|&n| {
                let c = s % n;
                s /= n;
                c
            })
            .collect()
    }

    pub fn linear(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.dims)
            .rev()
            .fold(0, |acc, (&c, &n)| acc * n + c)
    }

    pub fn total_mass(&self) -> T {
        self.data.iter().fold(T::zero(), |a, &x| a + x)
    }
}

fn site_moments<T: Real>(model: &LatticeModel<T>, f: &[T]) -> (T, Vec<T>) {
    let rho = f.iter().fold(T::zero(), |a, &x| a + x);
    let mut j = vec![T::zero(); model.dim];
    for (fi, c) in f.iter().zip(&model.velocities) {
        for (ja, &ca) in j.iter_mut().zip(c) {
            *ja = *ja + *fi * T::c(ca as f64);
        }
    }
    (rho, j)
}

/// Incompressible equilibrium
/// `f_i^eq = rho w_i (1 + 3 e.u + 9/2 (e.u)^2 - 3/2 u^2)` with `u = (1/rho) sum f_i e_i`.
pub fn equilibrium<T: Real>(f: &[T], model: &LatticeModel<T>) -> Vec<T> {
    let (rho, j) = site_moments(model, f);
    let u: Vec<T> = j.iter().map(|&x| x / rho).collect();
    equilibrium_from(rho, &u, model)
}

/// Equilibrium for given density and velocity.
pub fn equilibrium_from<T: Real>(rho: T, u: &[T], model: &LatticeModel<T>) -> Vec<T> {
    let usq = u.iter().fold(T::zero(), |a, &x| a + x * x);
    model
        .velocities
        .iter()
        .zip(&model.weights)
        .map(|(c, &w)| {
            let eu = c
                .iter()
                .zip(u)
                .fold(T::zero(), |a, (&ca, &ua)| a + T::c(ca as f64) * ua);
            rho * w * (T::one() + T::c(3.0) * eu + T::c(4.5) * eu * eu - T::c(1.5) * usq)
        })
        .collect()
}

fn check_tau<T: Real>(tau: T, dt: T) -> Result<()> {
    let half = dt / T::c(2.0);
    if !(tau > half) {
        return Err(Error::TauTooSmall {
            tau: tau.to_f64().unwrap_or(f64::NAN),
            half_dt: half.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// One explicit relaxation step at a single site.
pub fn collide_site<T: Real>(f: &[T], model: &LatticeModel<T>, tau: T, dt: T) -> Vec<T> {
    let feq = equilibrium(f, model);
    let w = dt / tau;
    f.iter().zip(&feq).map(|(&x, &e)| x - w * (x - e)).collect()
}

/// BGK relaxation `f <- f - (dt/tau)(f - f^eq)` at every site.
pub fn collide<T: Real>(field: &DistributionField<T>, tau: T, dt: T) -> Result<DistributionField<T>> {
    check_tau(tau, dt)?;
    let q = field.model.q;
    let mut out = field.clone();
    for (dst, src) in out.data.chunks_mut(q).zip(field.data.chunks(q)) {
        dst.copy_from_slice(&collide_site(src, &field.model, tau, dt));
    }
    Ok(out)
}

/// Exact periodic streaming `f_i(x + c_i) <- f_i(x)`.
pub fn stream<T: Real>(field: &DistributionField<T>) -> DistributionField<T> {
    let q = field.model.q;
    let mut out = field.clone();
    for s in 0..field.sites() {
        let x = field.coords(s);
        for i in 0..q {
            let dest: Vec<usize> = x
                .iter()
                .zip(&field.model.velocities[i])
                .zip(&field.dims)
                .map(|((&xa, &ca), &n)| (xa as i64 + ca as i64).rem_euclid(n as i64) as usize)
                .collect();
            out.data[field.linear(&dest) * q + i] = field.data[s * q + i];
        }
    }
    out
}

/// Density and velocity at every site.
pub fn moments<T: Real>(field: &DistributionField<T>) -> Result<HydroMoments<T>> {
    let mut rho = Vec::with_capacity(field.sites());
    let mut u = Vec::with_capacity(field.sites() * field.model.dim);
    for s in 0..field.sites() {
        let (r, j) = site_moments(&field.model, field.site(s));
        if !(r > T::zero()) {
            return Err(Error::ZeroDensity {
                site: s,
                rho: r.to_f64().unwrap_or(f64::NAN),
            });
        }
        rho.push(r);
        u.extend(j.iter().map(|&x| x / r));
    }
    Ok(HydroMoments { rho, u })
}

/// First-order Euler relaxation of a single site, returning `steps + 1` states.
pub fn evolve_0d<T: Real>(
    f0: &[T],
    model: &LatticeModel<T>,
    tau: T,
    dt: T,
    steps: usize,
) -> Result<Vec<Vec<T>>> {
    check_tau(tau, dt)?;
    if f0.len() != model.q {
        return Err(Error::DimMismatch(f0.len(), model.q));
    }
    let mut out = Vec::with_capacity(steps + 1);
    out.push(f0.to_vec());
    for _ in 0..steps {
        let next = collide_site(out.last().expect("non-empty"), model, tau, dt);
        out.push(next);
    }
    Ok(out)
}

/// Prefactor multiplying the Hermite generating-function expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionPrefactor {
    /// `rho (2 pi RT)^{-d/2} exp(-c_i^2 / 2RT)`, the Maxwell-Boltzmann form.
    Gaussian,
    /// Lattice weights `rho w_i` in place of the Gaussian.
    LatticeWeights,
}

/// Physicists' Hermite polynomials `H_0..=H_n` at `x`.
pub fn hermite_phys<T: Real>(n: usize, x: T) -> Vec<T> {
    let mut h = Vec::with_capacity(n + 1);
    h.push(T::one());
    if n >= 1 {
        h.push(T::c(2.0) * x);
    }
    for k in 1..n {
        let next = T::c(2.0) * x * h[k] - T::c(2.0 * k as f64) * h[k - 1];
        h.push(next);
    }
    h
}

/// Truncated Hermite expansion of the Maxwell-Boltzmann equilibrium.
///
/// Per axis the factor `exp((2 c u - u^2) / 2RT)` is expanded with the
/// generating function `exp(2xy - y^2) = sum_k H_k(x) y^k / k!`, where
/// `x = c / sqrt(2RT)` and `y = u / sqrt(2RT)`, keeping `k <= kmax`.
pub fn hermite_equilibrium_expansion<T: Real>(
    rho: T,
    u: &[T],
    model: &LatticeModel<T>,
    rt: T,
    kmax: usize,
    prefactor: ExpansionPrefactor,
) -> Vec<T> {
    let s = (T::c(2.0) * rt).sqrt();
    let pi = T::c(std::f64::consts::PI);
    model
        .velocities
        .iter()
        .zip(&model.weights)
        .map(|(c, &w)| {
            let mut prod = T::one();
            let mut csq = T::zero();
            for (&ca, &ua) in c.iter().zip(u) {
                let x = T::c(ca as f64) / s;
                let y = ua / s;
                let h = hermite_phys(kmax, x);
                let mut sum = T::zero();
                let mut term = T::one();
                for (k, hk) in h.iter().enumerate() {
                    if k > 0 {
                        term = term * y / T::c(k as f64);
                    }
                    sum = sum + *hk * term;
                }
                prod = prod * sum;
                csq = csq + T::c((ca * ca) as f64);
            }
            let pre = match prefactor {
                ExpansionPrefactor::Gaussian => {
                    rho * (T::c(2.0) * pi * rt).powf(-T::c(model.dim as f64) / T::c(2.0))
                        * (-csq / (T::c(2.0) * rt)).exp()
                }
                ExpansionPrefactor::LatticeWeights => rho * w,
            };
            pre * prod
        })
        .collect()
}

/// Full Maxwell-Boltzmann value `rho (2 pi RT)^{-d/2} exp(-(c_i - u)^2 / 2RT)`.
pub fn maxwell_boltzmann<T: Real>(rho: T, u: &[T], model: &LatticeModel<T>, rt: T) -> Vec<T> {
    let pi = T::c(std::f64::consts::PI);
    model
        .velocities
        .iter()
        .map(|c| {
            let d2 = c
                .iter()
                .zip(u)
                .fold(T::zero(), |a, (&ca, &ua)| a + (T::c(ca as f64) - ua).powi(2));
            rho * (T::c(2.0) * pi * rt).powf(-T::c(model.dim as f64) / T::c(2.0))
                * (-d2 / (T::c(2.0) * rt)).exp()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, LatticeKind};

    #[test]
    fn coords_roundtrip() {
        let m = build_lattice::<f64>(LatticeKind::D2Q9);
        let f = DistributionField::uniform(m.clone(), vec![4, 3], &m.weights).unwrap();
        for s in 0..12 {
            assert_eq!(f.linear(&f.coords(s)), s);
        }
        assert_eq!(f.coords(5), vec![1, 1]);
    }

    #[test]
    fn tau_guard() {
        let m = build_lattice::<f64>(LatticeKind::D1Q3);
        let f = DistributionField::uniform(m.clone(), vec![2], &m.weights).unwrap();
        assert!(matches!(collide(&f, 0.5, 1.0), Err(Error::TauTooSmall { .. })));
        assert!(collide(&f, 0.51, 1.0).is_ok());
    }

    #[test]
    fn zero_density_rejected() {
        let m = build_lattice::<f64>(LatticeKind::D1Q3);
        let f = DistributionField::uniform(m, vec![2], &[0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(moments(&f), Err(Error::ZeroDensity { site: 0, .. })));
    }

    #[test]
    fn hermite_phys_low_orders() {
        let h = hermite_phys(3, 0.5_f64);
        assert_eq!(h, vec![1.0, 1.0, 4.0 * 0.25 - 2.0, 8.0 * 0.125 - 12.0 * 0.5]);
    }
}
