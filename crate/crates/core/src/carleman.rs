//! Carleman linearization of polynomial ODEs.
//!
//! Monomials are indexed in graded-lexicographic order: ascending total
//! order, and within one order descending in the exponent of the first
//! variable, then the second, and so on. The first `Q` variables are
//! therefore the original unknowns.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::LatticeModel;
use crate::scalar::Real;

pub const MAX_VARS: usize = 9;
pub const MAX_ORDER: u32 = 4;
pub const MAX_DEGREE: u32 = 3;

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialIndex {
    pub exponents: Vec<u32>,
}

impl MonomialIndex {
    pub fn order(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn eval<T: Real>(&self, x: &[T]) -> T {
        self.exponents
            .iter()
            .zip(x)
            .fold(T::one(), |acc, (&e, &xi)| acc * xi.powi(e as i32))
    }
}

/// All monomials in `nvars` variables with order `1..=max_order`, graded-lex.
pub fn monomials(nvars: usize, max_order: u32) -> Vec<MonomialIndex> {
    fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MonomialIndex>) {
        if prefix.len() == nvars - 1 {
            prefix.push(left);
            out.push(MonomialIndex {
                exponents: prefix.clone(),
            });
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(nvars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for order in 1..=max_order {
        rec(nvars, order, &mut Vec::with_capacity(nvars), &mut out);
    }
    out
}

/// Sparse polynomial `sum c_m x^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    pub nvars: usize,
    pub terms: Vec<(T, MonomialIndex)>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(nvars: usize) -> Self {
        Self {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn add_term(&mut self, coeff: T, exponents: Vec<u32>) {
        debug_assert_eq!(exponents.len(), self.nvars);
        self.terms.push((coeff, MonomialIndex { exponents }));
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, m)| m.order()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[T]) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, (c, m)| acc + *c * m.eval(x))
    }

    /// Partial derivative with respect to variable `j`.
    pub fn derivative(&self, j: usize) -> Self {
        let mut out = Self::new(self.nvars);
        for (c, m) in &self.terms {
            let e = m.exponents[j];
            if e > 0 {
                let mut ex = m.exponents.clone();
                ex[j] -= 1;
                out.add_term(*c * T::c(e as f64), ex);
            }
        }
        out
    }
}

/// Linear system `dV/dt = C V + b` over a monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CarlemanSystem<T> {
    pub order: u32,
    pub nvars: usize,
    pub variables: Vec<MonomialIndex>,
    /// Row-major `n x n`.
    pub c: Vec<T>,
    /// Constant forcing, nonzero only when the driving field has constant terms.
    pub b: Vec<T>,
}

impl<T: Real> CarlemanSystem<T> {
    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn entry(&self, row: usize, col: usize) -> T {
        self.c[row * self.len() + col]
    }

    /// Carleman vector of `x`: every basis monomial evaluated at `x`.
    pub fn lift(&self, x: &[T]) -> Vec<T> {
        self.variables.iter().map(|m| m.eval(x)).collect()
    }

    pub fn rhs(&self, v: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|r| {
                self.c[r * n..(r + 1) * n]
                    .iter()
                    .zip(v)
                    .fold(self.b[r], |acc, (&a, &x)| acc + a * x)
            })
            .collect()
    }

    /// Explicit Euler march, returning `steps + 1` Carleman vectors.
    pub fn euler(&self, v0: &[T], dt: T, steps: usize) -> Vec<Vec<T>> {
        let mut out = Vec::with_capacity(steps + 1);
        out.push(v0.to_vec());
        for _ in 0..steps {
            let v = out.last().expect("non-empty");
            let d = self.rhs(v);
            let next = v.iter().zip(&d).map(|(&x, &dx)| x + dt * dx).collect();
            out.push(next);
        }
        out
    }
}

/// Linearizes `dx_j/dt = driving[j](x)` up to monomial order `order`.
///
/// Row of monomial `V = x^e` is `sum_j e_j x^(e - 1_j) driving[j]`; products
/// above `order` are dropped.
pub fn linearize<T: Real>(driving: &[Polynomial<T>], order: u32) -> Result<CarlemanSystem<T>> {
    let nvars = driving.len();
    if nvars == 0 || nvars > MAX_VARS {
        return Err(Error::TooLarge {
            what: "variable count",
            size: nvars,
            limit: MAX_VARS,
        });
    }
    if order == 0 || order > MAX_ORDER {
        return Err(Error::TooLarge {
            what: "Carleman order",
            size: order as usize,
            limit: MAX_ORDER as usize,
        });
    }
    for p in driving {
        if p.nvars != nvars {
            return Err(Error::DimMismatch(p.nvars, nvars));
        }
        if p.degree() > MAX_DEGREE {
            return Err(Error::TooLarge {
                what: "polynomial degree",
                size: p.degree() as usize,
                limit: MAX_DEGREE as usize,
            });
        }
    }
    let variables = monomials(nvars, order);
    let index: HashMap<&MonomialIndex, usize> =
        variables.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let n = variables.len();
    let mut c = vec![T::zero(); n * n];
    let mut b = vec![T::zero(); n];
    for (row, v) in variables.iter().enumerate() {
        for (j, poly) in driving.iter().enumerate() {
            let e = v.exponents[j];
            if e == 0 {
                continue;
            }
            let mut base = v.exponents.clone();
            base[j] -= 1;
            for (coeff, m) in &poly.terms {
                let ex: Vec<u32> = base.iter().zip(&m.exponents).map(|(a, b)| a + b).collect();
                let mono = MonomialIndex { exponents: ex };
                let val = *coeff * T::c(e as f64);
                match mono.order() {
                    0 => b[row] = b[row] + val,
                    o if o <= order => {
                        let col = index[&mono];
                        c[row * n + col] = c[row * n + col] + val;
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(CarlemanSystem {
        order,
        nvars,
        variables,
        c,
        b,
    })
}

/// Parameters of `df/dt = -a f + b f^2`, `f(0) = f0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticParams<T> {
    pub a: T,
    pub b: T,
    pub f0: T,
}

impl<T: Real> LogisticParams<T> {
    pub fn new(a: T, b: T, f0: T) -> Result<Self> {
        if !(a > T::zero()) || b < T::zero() {
            return Err(Error::InvalidInput("logistic needs a > 0 and b >= 0".into()));
        }
        Ok(Self { a, b, f0 })
    }

    /// Carrying capacity `K = a / b`.
    pub fn k(&self) -> T {
        self.a / self.b
    }

    /// Nonlinearity strength `R = b / a`.
    pub fn r(&self) -> T {
        self.b / self.a
    }

    /// Time at which the closed form blows up, if it does.
    pub fn singular_time(&self) -> Option<T> {
        let rf0 = self.r() * self.f0;
        if rf0 > T::one() {
            Some(-(T::one() - T::one() / rf0).ln() / self.a)
        } else {
            None
        }
    }

    /// The right-hand side as a one-variable polynomial.
    pub fn driving(&self) -> Polynomial<T> {
        let mut p = Polynomial::new(1);
        p.add_term(-self.a, vec![1]);
        p.add_term(self.b, vec![2]);
        p
    }
}

/// `f(t) = f0 e^{-at} / (1 - R f0 (1 - e^{-at}))`.
pub fn logistic_exact<T: Real>(p: &LogisticParams<T>, t: T) -> Result<T> {
    let e = (-p.a * t).exp();
    let den = T::one() - p.r() * p.f0 * (T::one() - e);
    if !(den > T::zero()) {
        let t_sing = p
            .singular_time()
            .unwrap_or(t)
            .to_f64()
            .unwrap_or(f64::NAN);
        return Err(Error::SingularTime { t_sing });
    }
    Ok(p.f0 * e / den)
}

/// Chain `df_k/dt = -k (a f_k - b f_{k+1})` for `k = 1..=kmax`, `f_{kmax+1} = 0`.
pub fn logistic_carleman_chain<T: Real>(p: &LogisticParams<T>, kmax: usize) -> Result<CarlemanSystem<T>> {
    if kmax == 0 {
        return Err(Error::InvalidInput("kmax must be at least 1".into()));
    }
    let mut c = vec![T::zero(); kmax * kmax];
    for k in 1..=kmax {
        let kk = T::c(k as f64);
        c[(k - 1) * kmax + (k - 1)] = -kk * p.a;
        if k < kmax {
            c[(k - 1) * kmax + k] = kk * p.b;
        }
    }
    Ok(CarlemanSystem {
        order: kmax as u32,
        nvars: 1,
        variables: (1..=kmax as u32)
            .map(|k| MonomialIndex { exponents: vec![k] })
            .collect(),
        c,
        b: vec![T::zero(); kmax],
    })
}

/// Euler march of the truncated chain; returns `f_1` at each step.
pub fn logistic_carleman_series<T: Real>(
    p: &LogisticParams<T>,
    kmax: usize,
    dt: T,
    steps: usize,
) -> Result<Vec<T>> {
    let sys = logistic_carleman_chain(p, kmax)?;
    let v0 = sys.lift(&[p.f0]);
    Ok(sys.euler(&v0, dt, steps).into_iter().map(|v| v[0]).collect())
}

/// `exp(t C)` for upper-triangular `C` with distinct diagonal (Parlett).
fn expm_upper_triangular<T: Real>(c: &[T], n: usize, t: T) -> Result<Vec<T>> {
    let mut f = vec![T::zero(); n * n];
    for i in 0..n {
        f[i * n + i] = (c[i * n + i] * t).exp();
    }
    if t == T::zero() {
        return Ok(f);
    }
    for d in 1..n {
        for i in 0..n - d {
            let j = i + d;
            let gap = (c[j * n + j] - c[i * n + i]) * t;
            if gap == T::zero() {
                return Err(Error::InvalidInput("repeated eigenvalue in triangular exponential".into()));
            }
            let mut s = c[i * n + j] * t * (f[j * n + j] - f[i * n + i]);
            for k in i + 1..j {
                s = s + (c[i * n + k] * f[k * n + j] - f[i * n + k] * c[k * n + j]) * t;
            }
            f[i * n + j] = s / gap;
        }
    }
    Ok(f)
}

/// Exact solution of the truncated chain sampled every `dt`; returns `f_1`.
pub fn logistic_carleman_exact_series<T: Real>(
    p: &LogisticParams<T>,
    kmax: usize,
    dt: T,
    steps: usize,
) -> Result<Vec<T>> {
    let sys = logistic_carleman_chain(p, kmax)?;
    let v0 = sys.lift(&[p.f0]);
    (0..=steps)
        .map(|s| {
            let e = expm_upper_triangular(&sys.c, kmax, dt * T::c(s as f64))?;
            Ok((0..kmax).fold(T::zero(), |acc, j| acc + e[j] * v0[j]))
        })
        .collect()
}

/// BGK driving field `Omega_i = -(1/tau)(f_i - f_i^eq)` at unit density,
/// with `u = sum_j c_j f_j`, as polynomials in the `f_j`.
pub fn bgk_driving<T: Real>(model: &LatticeModel<T>, tau: T) -> Vec<Polynomial<T>> {
    let q = model.q;
    let mc = crate::lattice::mode_coupling_unchecked(model);
    let inv = T::one() / tau;
    (0..q)
        .map(|i| {
            let mut p = Polynomial::new(q);
            for j in 0..q {
                let mut coeff = *mc.l(i, j);
                if i == j {
                    coeff = coeff - T::one();
                }
                if coeff != T::zero() {
                    let mut e = vec![0; q];
                    e[j] = 1;
                    p.add_term(coeff * inv, e);
                }
            }
            for j in 0..q {
                for k in j..q {
                    let mut coeff = *mc.qt(i, j, k);
                    if j != k {
                        coeff = coeff + *mc.qt(i, k, j);
                    }
                    if coeff != T::zero() {
                        let mut e = vec![0; q];
                        e[j] += 1;
                        e[k] += 1;
                        p.add_term(coeff * inv, e);
                    }
                }
            }
            p
        })
        .collect()
}

/// Exactly closed D1Q3 system over `[f_0, f_1, f_2, (f_2 - f_1)^2]`.
///
/// With unit mass the invariant `(f_2 - f_1)^2 = u^2` makes the equilibrium
/// linear in the four variables, so one Euler step is the linear map applied
/// here. Returns `steps + 1` states.
pub fn clb_closed_d1q3<T: Real>(f0: &[T; 3], omega: T, steps: usize) -> Result<Vec<[T; 4]>> {
    let mass = f0[0] + f0[1] + f0[2];
    if num_traits::Float::abs(mass - T::one()) > T::c(1e-12) {
        return Err(Error::InvalidInput(format!(
            "closed D1Q3 system needs unit mass, got {}",
            mass
        )));
    }
    let w = [T::c(4.0 / 6.0), T::c(1.0 / 6.0), T::c(1.0 / 6.0)];
    let c = [T::zero(), -T::one(), T::one()];
    let mut a = [[T::zero(); 4]; 4];
    for i in 0..3 {
        for (j, aij) in a[i].iter_mut().take(3).enumerate() {
            // w_i (rho + 3 c_i u) with rho = f0 + f1 + f2 and u = f2 - f1.
            let lin = w[i] * (T::one() + T::c(3.0) * c[i] * c[j]);
            *aij = omega * lin;
        }
        a[i][i] = a[i][i] + T::one() - omega;
        a[i][3] = omega * w[i] * (T::c(4.5) * c[i] * c[i] - T::c(1.5));
    }
    a[3][3] = T::one();
    let u = f0[2] - f0[1];
    let mut state = [f0[0], f0[1], f0[2], u * u];
    let mut out = Vec::with_capacity(steps + 1);
    out.push(state);
    for _ in 0..steps {
        let mut next = [T::zero(); 4];
        for (r, row) in a.iter().enumerate() {
            next[r] = row
                .iter()
                .zip(&state)
                .fold(T::zero(), |acc, (&x, &y)| acc + x * y);
        }
        state = next;
        out.push(state);
    }
    Ok(out)
}
