//! Dense complex operators and the matrix exponential.

use ndarray::{s, Array2};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};

/// Largest dimension accepted by [`expm`].
pub const EXPM_MAX_DIM: usize = 4096;
/// Bound on `||exp(A) exp(-A) - I||` accepted by [`expm`].
pub const EXPM_RESIDUAL_TOL: f64 = 1e-9;
/// Above this dimension the residual is probed with random vectors.
const DENSE_RESIDUAL_MAX_DIM: usize = 512;
/// Target one-norm of the scaled matrix fed to the Taylor core.
const TAYLOR_THETA: f64 = 2.0;
const TAYLOR_MAX_TERMS: usize = 60;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square complex matrix with an optional Hermiticity flag.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub mat: Array2<Complex64>,
    /// Set only when the constructor guarantees `A = A^dagger`.
    pub hermitian: bool,
}

impl DenseOperator {
    pub fn new(mat: Array2<Complex64>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "operators are square");
        Self {
            mat,
            hermitian: false,
        }
    }

    pub fn hermitian(mat: Array2<Complex64>) -> Self {
        Self {
            hermitian: true,
            ..Self::new(mat)
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::hermitian(Array2::zeros((dim, dim)))
    }

    pub fn identity(dim: usize) -> Self {
        Self::hermitian(Array2::eye(dim))
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Array2::zeros((values.len(), values.len()));
        for (i, &v) in values.iter().enumerate() {
            m[[i, i]] = Complex64::new(v, 0.0);
        }
        Self::hermitian(m)
    }

    /// `|i><j|` in dimension `dim`.
    pub fn projector(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Array2::zeros((dim, dim));
        m[[i, j]] = ONE;
        if i == j {
            Self::hermitian(m)
        } else {
            Self::new(m)
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.mat[[r, c]]
    }

    pub fn dagger(&self) -> Self {
        Self {
            mat: self.mat.t().mapv(|z| z.conj()),
            hermitian: self.hermitian,
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::new(self.mat.dot(&other.mat)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            mat: &self.mat + &other.mat,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            mat: &self.mat - &other.mat,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self {
            mat: self.mat.mapv(|x| x * z),
            hermitian: self.hermitian && z.im == 0.0,
        }
    }

    /// Kronecker product `self (x) other`; `self` is the more significant factor.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim(), other.dim());
        let mut out = Array2::zeros((n * m, n * m));
        for ((i, j), &a) in self.mat.indexed_iter() {
            if a == ZERO {
                continue;
            }
            out.slice_mut(s![i * m..(i + 1) * m, j * m..(j + 1) * m])
                .zip_mut_with(&other.mat, |o, &b| *o = a * b);
        }
        Self {
            mat: out,
            hermitian: self.hermitian && other.hermitian,
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimMismatch(v.len(), self.dim()));
        }
        Ok(self
            .mat
            .rows()
            .into_iter()
            .map(|row| row.iter().zip(v).fold(ZERO, |acc, (&a, &x)| acc + a * x))
            .collect())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `A - A^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.mat[[i, j]] - self.mat[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        self.mat
            .columns()
            .into_iter()
            .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn nnz(&self) -> usize {
        self.mat.iter().filter(|&&z| z != ZERO).count()
    }

    pub fn is_finite(&self) -> bool {
        self.mat.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }
}

/// `AB - BA`.
pub fn commutator(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

/// `op` acting on `slot` of `nslots` equal-size factors; slot 0 is most significant.
pub fn embed(op: &DenseOperator, slot: usize, nslots: usize) -> DenseOperator {
    let id = DenseOperator::identity(op.dim());
    let mut out = DenseOperator::identity(1);
    for k in 0..nslots {
        out = out.kron(if k == slot { op } else { &id });
    }
    out
}

/// Row-compressed copy used when the Taylor factor is sparse.
struct RowSparse {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl RowSparse {
    fn from_dense(m: &Array2<Complex64>, scale: f64) -> Self {
        let dim = m.nrows();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in m.rows() {
            for (c, &z) in row.iter().enumerate() {
                if z != ZERO {
                    cols.push(c);
                    vals.push(z * scale);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    fn density(&self) -> f64 {
        self.vals.len() as f64 / (self.dim * self.dim) as f64
    }

    /// `self * x` for dense `x`.
    fn mul_dense(&self, x: &Array2<Complex64>, out: &mut Array2<Complex64>) {
        out.fill(ZERO);
        let n = self.dim;
        let xs = x.as_slice().expect("standard layout");
        let os = out.as_slice_mut().expect("standard layout");
        for r in 0..n {
            let orow = &mut os[r * n..(r + 1) * n];
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let a = self.vals[k];
                let c = self.cols[k];
                let xrow = &xs[c * n..(c + 1) * n];
                for (o, &xv) in orow.iter_mut().zip(xrow) {
                    *o += a * xv;
                }
            }
        }
    }

    fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .fold(ZERO, |acc, k| acc + self.vals[k] * x[self.cols[k]])
            })
            .collect()
    }
}

fn scaling_exponent(norm: f64) -> u32 {
    if norm <= TAYLOR_THETA {
        0
    } else {
        (norm / TAYLOR_THETA).log2().ceil() as u32
    }
}

/// Taylor series of `exp(B)` for `B = A / 2^s`, followed by `s` squarings.
fn expm_core(a: &DenseOperator) -> Result<DenseOperator> {
    let n = a.dim();
    let s = scaling_exponent(a.norm_1());
    let scale = 0.5f64.powi(s as i32);
    let sparse = RowSparse::from_dense(&a.mat, scale);
    let use_sparse = sparse.density() < 0.25;
    let b = a.mat.mapv(|z| z * scale);

    let mut sum: Array2<Complex64> = Array2::eye(n);
    let mut term: Array2<Complex64> = Array2::eye(n);
    let mut next: Array2<Complex64> = Array2::zeros((n, n));
    for k in 1..=TAYLOR_MAX_TERMS {
        if use_sparse {
            sparse.mul_dense(&term, &mut next);
        } else {
            next = b.dot(&term);
        }
        let inv_k = 1.0 / k as f64;
        next.mapv_inplace(|z| z * inv_k);
        std::mem::swap(&mut term, &mut next);
        sum += &term;
        let tn = term.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let sn = sum.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if tn <= f64::EPSILON * 1e-2 * sn.max(1.0) {
            break;
        }
    }
    drop(next);
    drop(term);
    for _ in 0..s {
        sum = sum.dot(&sum);
    }
    let out = DenseOperator::new(sum);
    if !out.is_finite() {
        return Err(Error::NonFinite("matrix exponential"));
    }
    Ok(out)
}

/// `exp(A) v` by the same scaled Taylor series, for residual probes.
fn expm_apply(a: &DenseOperator, v: &[Complex64]) -> Vec<Complex64> {
    ExpAction::new(a).apply(v)
}

/// Action `v -> exp(A) v` without forming the exponential.
///
/// Used when the propagator would be too large to square densely; agrees
/// with [`expm`] to the Taylor stopping tolerance.
pub struct ExpAction {
    sparse: RowSparse,
    substeps: u64,
}

impl ExpAction {
    pub fn new(a: &DenseOperator) -> Self {
        let s = scaling_exponent(a.norm_1());
        Self {
            sparse: RowSparse::from_dense(&a.mat, 0.5f64.powi(s as i32)),
            substeps: 1u64 << s,
        }
    }

    pub fn dim(&self) -> usize {
        self.sparse.dim
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut x = v.to_vec();
        for _ in 0..self.substeps {
            let xn = x.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
            let mut sum = x.clone();
            let mut term = x;
            for k in 1..=TAYLOR_MAX_TERMS {
                term = self.sparse.mul_vec(&term);
                let inv_k = 1.0 / k as f64;
                term.iter_mut().for_each(|z| *z *= inv_k);
                sum.iter_mut().zip(&term).for_each(|(s, t)| *s += t);
                let tn = term.iter().map(|z| z.norm()).fold(0.0, f64::max);
                if tn <= f64::EPSILON * 1e-2 * xn {
                    break;
                }
            }
            x = sum;
        }
        x
    }
}

/// Estimate of `||exp(A) exp(-A) - I||`, max-entry norm.
///
/// Exact for small dimensions; above that, the worst of a few random unit
/// probes `||exp(A) exp(-A) v - v||`.
pub fn expm_residual(a: &DenseOperator, e: &DenseOperator) -> Result<f64> {
    let n = a.dim();
    let neg = a.scale(-ONE);
    if n <= DENSE_RESIDUAL_MAX_DIM {
        let inv = expm_core(&neg)?;
        let prod = e.matmul(&inv)?;
        return Ok(prod.max_abs_diff(&DenseOperator::identity(n)));
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= nv);
        let w = expm_apply(&neg, &v);
        let back = e.apply(&w)?;
        let r = back
            .iter()
            .zip(&v)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// Matrix exponential by scaling and squaring around a truncated Taylor core.
///
/// Fails with [`Error::TooLarge`] above [`EXPM_MAX_DIM`] and with
/// [`Error::NonFinite`] on non-finite input or output, or when the residual
/// `||exp(A) exp(-A) - I||` exceeds `tol`.
pub fn expm(a: &DenseOperator, tol: f64) -> Result<DenseOperator> {
    if a.dim() > EXPM_MAX_DIM {
        return Err(Error::TooLarge {
            what: "matrix dimension",
            size: a.dim(),
            limit: EXPM_MAX_DIM,
        });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite("expm input"));
    }
    let e = expm_core(a)?;
    let r = expm_residual(a, &e)?;
    if !(r <= tol) {
        return Err(Error::NonFinite("expm residual"));
    }
    Ok(e)
}
