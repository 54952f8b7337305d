//! Truncated bosonic Fock space: ladder, position and momentum matrices,
//! position-eigenstate encoding and the spectrum of the truncated position
//! operator.
//!
//! Matrices act on column vectors over the occupation basis `|0>..|N>`, so
//! `a` carries `sqrt(n)` at row `n - 1`, column `n`. Printed with the
//! column index as the row (the layout used when the matrix is drawn as a
//! map from `|n>`), this is the familiar pattern with `sqrt(1)..sqrt(N)` on
//! the subdiagonal; [`ladder_pattern`] returns that drawing.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{DenseOperator, I, ONE, ZERO};

/// Truncation level `N = 2^qc - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockConfig {
    pub n: usize,
    pub qc: usize,
}

impl FockConfig {
    pub fn from_qubits(qc: usize) -> Result<Self> {
        if qc == 0 || qc > 16 {
            return Err(Error::InvalidInput(format!("qubits per mode {qc} outside 1..=16")));
        }
        Ok(Self {
            n: (1 << qc) - 1,
            qc,
        })
    }

    pub fn from_levels(n: usize) -> Result<Self> {
        if !(n + 1).is_power_of_two() || n == 0 {
            return Err(Error::NotPowerOfTwo(n + 1));
        }
        Self::from_qubits((n + 1).trailing_zeros() as usize)
    }

    /// Single-mode dimension `N + 1`.
    pub fn dim(&self) -> usize {
        self.n + 1
    }
}

/// Lowering and raising operators.
pub fn ladder_matrices(cfg: FockConfig) -> (DenseOperator, DenseOperator) {
    let mut a = DenseOperator::zeros(cfg.dim());
    for n in 1..=cfg.n {
        a.mat[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a.hermitian = false;
    let ad = a.dagger();
    (a, ad)
}

/// The drawn pattern of `a`: entry `(n, n - 1)` holds `sqrt(n)`, i.e. `a^T`.
pub fn ladder_pattern(cfg: FockConfig) -> DenseOperator {
    let mut m = DenseOperator::zeros(cfg.dim());
    for n in 1..=cfg.n {
        m.mat[[n, n - 1]] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    m.hermitian = false;
    m
}

pub fn number_operator(cfg: FockConfig) -> DenseOperator {
    DenseOperator::diag(&(0..=cfg.n).map(|n| n as f64).collect::<Vec<_>>())
}

/// `q = (a + a^dagger)/sqrt(2)`, `p = i (a^dagger - a)/sqrt(2)`.
pub fn position_momentum(cfg: FockConfig) -> (DenseOperator, DenseOperator) {
    let (a, ad) = ladder_matrices(cfg);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut q = a.add(&ad).expect("same dim").scale(Complex64::new(r, 0.0));
    let mut p = ad.sub(&a).expect("same dim").scale(I * r);
    q.hermitian = true;
    p.hermitian = true;
    (q, p)
}

/// `i (I - (N + 1)|N><N|)`, the truncated canonical commutator.
pub fn truncated_commutator(cfg: FockConfig) -> DenseOperator {
    let mut d = vec![1.0; cfg.dim()];
    d[cfg.n] = -(cfg.n as f64);
    DenseOperator::diag(&d).scale(I)
}

/// Hermite convention used for the position-eigenstate amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HermiteConvention {
    /// `He_{n+1} = x He_n - n He_{n-1}`.
    Monic,
    /// `H_{n+1} = 2x H_n - 2n H_{n-1}`.
    Physicists,
}

impl HermiteConvention {
    pub fn values(self, n: usize, x: f64) -> Vec<f64> {
        let mut h = Vec::with_capacity(n + 1);
        h.push(1.0);
        if n == 0 {
            return h;
        }
        match self {
            HermiteConvention::Monic => {
                h.push(x);
                for k in 1..n {
                    h.push(x * h[k] - k as f64 * h[k - 1]);
                }
            }
            HermiteConvention::Physicists => {
                h.push(2.0 * x);
                for k in 1..n {
                    h.push(2.0 * x * h[k] - 2.0 * k as f64 * h[k - 1]);
                }
            }
        }
        h
    }
}

/// How a classical value is written into one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    /// Truncated eigenstate, amplitudes `2^{-n/2} (n!)^{-1/2} H_n(f)`.
    Eigenstate(HermiteConvention),
    /// `exp(-i p f)|0>`, the translated vacuum.
    Translation,
}

impl Encoding {
    /// Factor mapping `<1|psi>/<0|psi>` back to `f`.
    pub fn decode_scale(self) -> f64 {
        match self {
            Encoding::Eigenstate(HermiteConvention::Monic) | Encoding::Translation => {
                std::f64::consts::SQRT_2
            }
            Encoding::Eigenstate(HermiteConvention::Physicists) => std::f64::consts::FRAC_1_SQRT_2,
        }
    }
}

/// Unit-norm single-mode state.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedState {
    pub amplitudes: Vec<Complex64>,
    /// `1 / ||unnormalized amplitudes||`.
    pub normalization: f64,
    pub encoding: Encoding,
}

/// Encodes `f` in `[-1, 1]` into one mode.
pub fn encode_value(f: f64, cfg: FockConfig, encoding: Encoding) -> Result<EncodedState> {
    if !(f.abs() <= 1.0) {
        return Err(Error::OutOfRange(f));
    }
    let raw: Vec<Complex64> = match encoding {
        Encoding::Eigenstate(conv) => {
            let h = conv.values(cfg.n, f);
            let mut scale = 1.0;
            h.iter()
                .enumerate()
                .map(|(n, &hn)| {
                    if n > 0 {
                        scale /= (2.0 * n as f64).sqrt();
                    }
                    Complex64::new(scale * hn, 0.0)
                })
                .collect()
        }
        Encoding::Translation => {
            let (_, p) = position_momentum(cfg);
            let u = crate::operator::expm(&p.scale(-I * f), crate::operator::EXPM_RESIDUAL_TOL)?;
            (0..cfg.dim()).map(|r| u.get(r, 0)).collect()
        }
    };
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(EncodedState {
        amplitudes: raw.iter().map(|z| z / norm).collect(),
        normalization: 1.0 / norm,
        encoding,
    })
}

/// Decoded value with the imaginary part of the ratio kept as a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decoded {
    pub value: f64,
    pub imag_residual: f64,
}

/// `scale * <1|psi> / <0|psi>`, real part.
pub fn decode_ratio(ground: Complex64, first: Complex64, encoding: Encoding) -> Result<Decoded> {
    if ground == ZERO {
        return Err(Error::GroundAmplitudeZero);
    }
    let r = first / ground * encoding.decode_scale();
    Ok(Decoded {
        value: r.re,
        imag_residual: r.im,
    })
}

pub fn decode_value(state: &EncodedState) -> Result<Decoded> {
    decode_ratio(state.amplitudes[0], state.amplitudes[1], state.encoding)
}

/// Sturm count: eigenvalues of the Jacobi matrix `sqrt(2) q` below `x`.
fn sturm_count(n_levels: usize, x: f64) -> usize {
    let mut count = 0;
    let mut d = -x;
    if d < 0.0 {
        count += 1;
    }
    for j in 1..n_levels {
        let prev = if d == 0.0 { f64::EPSILON } else { d };
        d = -x - j as f64 / prev;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenpairs of the truncated position operator.
///
/// Eigenvalues of `sqrt(2) q` are the roots of the characteristic recurrence
/// `P_j = -x P_{j-1} - (j-1) P_{j-2}`, isolated by Sturm counts and refined
/// by bisection to 1e-13. Eigenvectors follow from the component recurrence
/// seeded at `<0|v> = 1`. Eigenvalues are returned ascending.
pub fn q_eigensystem(cfg: FockConfig) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let m = cfg.dim();
    // Gershgorin: off-diagonals are at most sqrt(N) on each side.
    let bound = 2.0 * (cfg.n as f64).sqrt() + 1.0;
    let mut roots = Vec::with_capacity(m);
    for k in 0..m {
        let (mut lo, mut hi) = (-bound, bound);
        // Smallest x with more than k eigenvalues below it.
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(m, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    let distinct = roots.windows(2).all(|w| w[1] - w[0] > 1e-10);
    if !distinct || sturm_count(m, bound) != m {
        return Err(Error::ConvergenceFailure {
            found: roots.len(),
            expected: m,
        });
    }
    let s = std::f64::consts::SQRT_2;
    let mut vectors = Vec::with_capacity(m);
    for &mu in &roots {
        let mut v = vec![0.0; m];
        v[0] = 1.0;
        if m > 1 {
            v[1] = mu;
        }
        for n in 1..m - 1 {
            v[n + 1] = (mu * v[n] - (n as f64).sqrt() * v[n - 1]) / ((n + 1) as f64).sqrt();
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        vectors.push(v);
    }
    Ok((roots.iter().map(|r| r / s).collect(), vectors))
}

/// Occupation vacuum `|0>` and the top level `|N>`.
pub fn zero_vectors(cfg: FockConfig) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut zero = vec![ZERO; cfg.dim()];
    zero[0] = ONE;
    let mut top = vec![ZERO; cfg.dim()];
    top[cfg.n] = ONE;
    (zero, top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert_eq!(FockConfig::from_qubits(3).unwrap().n, 7);
        assert_eq!(FockConfig::from_levels(7).unwrap().qc, 3);
        assert!(matches!(FockConfig::from_levels(6), Err(Error::NotPowerOfTwo(7))));
        assert!(FockConfig::from_qubits(0).is_err());
    }

    #[test]
    fn out_of_range_rejected() {
        let cfg = FockConfig::from_qubits(2).unwrap();
        let e = Encoding::Eigenstate(HermiteConvention::Monic);
        assert!(matches!(encode_value(1.5, cfg, e), Err(Error::OutOfRange(_))));
        assert!(encode_value(-1.0, cfg, e).is_ok());
    }

    #[test]
    fn ground_zero_rejected() {
        assert!(matches!(
            decode_ratio(ZERO, ONE, Encoding::Translation),
            Err(Error::GroundAmplitudeZero)
        ));
    }

    #[test]
    fn sturm_counts_bracket() {
        assert_eq!(sturm_count(2, -2.0), 0);
        assert_eq!(sturm_count(2, 0.0), 1);
        assert_eq!(sturm_count(2, 2.0), 2);
    }
}
