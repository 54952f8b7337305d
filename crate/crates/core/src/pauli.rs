//! Pauli-word compilation of the truncated bosonic operators.
//!
//! Letter 0 of a word acts on the most significant bit of the occupation
//! number (see [`MSB_FIRST`]), matching the Kronecker ordering of
//! [`DenseOperator::kron`]. The lowering operator is assembled bit by bit:
//! a decrement whose lowest set bit is `j` applies `|0><1|` to bit `j`,
//! `|1><0|` to every lower bit, and a diagonal square-root factor that
//! depends only on the higher bits. That factor is expanded exactly over
//! products of `I` and `Z` by a Walsh-Hadamard transform.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockConfig;
use crate::operator::{DenseOperator, I, ONE, ZERO};

/// Letter 0 is the most significant occupation bit.
pub const MSB_FIRST: bool = true;
/// Largest register handled by [`pauli_to_dense`].
pub const DENSE_MAX_QUBITS: usize = 14;
/// Terms with smaller modulus are dropped on canonicalization.
pub const COEFF_CUTOFF: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// `self * other = phase * letter`.
    pub fn mul(self, other: Pauli) -> (Complex64, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (ONE, p),
            (a, b) if a == b => (ONE, I),
            (X, Y) => (I_UNIT, Z),
            (Y, X) => (-I_UNIT, Z),
            (Y, Z) => (I_UNIT, X),
            (Z, Y) => (-I_UNIT, X),
            (Z, X) => (I_UNIT, Y),
            (X, Z) => (-I_UNIT, Y),
            _ => unreachable!(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

const I_UNIT: Complex64 = I;

/// Coefficient times a tensor product of letters.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliWord {
    pub coeff: Complex64,
    pub letters: Vec<Pauli>,
}

impl PauliWord {
    pub fn nqubits(&self) -> usize {
        self.letters.len()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn count(&self, p: Pauli) -> usize {
        self.letters.iter().filter(|&&l| l == p).count()
    }

    pub fn label(&self) -> String {
        self.letters.iter().map(|p| p.symbol()).collect()
    }
}

/// Canonical sum of Pauli words: letter strings unique and sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    pub nqubits: usize,
    pub terms: Vec<PauliWord>,
}

impl PauliSum {
    pub fn zero(nqubits: usize) -> Self {
        Self {
            nqubits,
            terms: Vec::new(),
        }
    }

    pub fn identity(nqubits: usize) -> Self {
        Self::single(ONE, vec![Pauli::I; nqubits])
    }

    pub fn single(coeff: Complex64, letters: Vec<Pauli>) -> Self {
        Self::from_terms(
            letters.len(),
            vec![PauliWord { coeff, letters }],
        )
    }

    /// Merges equal letter strings and drops negligible coefficients.
    pub fn from_terms(nqubits: usize, terms: Vec<PauliWord>) -> Self {
        let mut map: BTreeMap<Vec<Pauli>, Complex64> = BTreeMap::new();
        for t in terms {
            assert_eq!(t.letters.len(), nqubits, "word length");
            *map.entry(t.letters).or_insert(ZERO) += t.coeff;
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| c.norm() > COEFF_CUTOFF)
            .map(|(letters, coeff)| PauliWord { coeff, letters })
            .collect();
        Self { nqubits, terms }
    }

    /// Re-merges the current terms.
    pub fn canonical(&self) -> Self {
        Self::from_terms(self.nqubits, self.terms.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nqubits, other.nqubits);
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        Self::from_terms(self.nqubits, t)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self::from_terms(
            self.nqubits,
            self.terms
                .iter()
                .map(|w| PauliWord {
                    coeff: w.coeff * z,
                    letters: w.letters.clone(),
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nqubits, other.nqubits);
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut coeff = a.coeff * b.coeff;
                let letters = a
                    .letters
                    .iter()
                    .zip(&b.letters)
                    .map(|(&x, &y)| {
                        let (ph, p) = x.mul(y);
                        coeff *= ph;
                        p
                    })
                    .collect();
                out.push(PauliWord { coeff, letters });
            }
        }
        Self::from_terms(self.nqubits, out)
    }

    /// Tensor product; `self` occupies the leading letters.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let mut letters = a.letters.clone();
                letters.extend(&b.letters);
                out.push(PauliWord {
                    coeff: a.coeff * b.coeff,
                    letters,
                });
            }
        }
        Self::from_terms(self.nqubits + other.nqubits, out)
    }

    pub fn dagger(&self) -> Self {
        Self::from_terms(
            self.nqubits,
            self.terms
                .iter()
                .map(|w| PauliWord {
                    coeff: w.coeff.conj(),
                    letters: w.letters.clone(),
                })
                .collect(),
        )
    }

    /// Largest coefficient gap to another sum, over the union of words.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        self.add(&other.scale(-ONE))
            .terms
            .iter()
            .map(|w| w.coeff.norm())
            .fold(0.0, f64::max)
    }

    /// Text dump, one `coeff_re coeff_im letters` line per term.
    pub fn dump(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.terms {
            writeln!(f, "{:.16e} {:.16e} {}", w.coeff.re, w.coeff.im, w.label())?;
        }
        Ok(())
    }
}

/// Single-qubit operator `[[m00, m01], [m10, m11]]` as a Pauli sum.
fn one_qubit(m: [[Complex64; 2]; 2]) -> PauliSum {
    let h = Complex64::new(0.5, 0.0);
    PauliSum::from_terms(
        1,
        vec![
            PauliWord {
                coeff: (m[0][0] + m[1][1]) * h,
                letters: vec![Pauli::I],
            },
            PauliWord {
                coeff: (m[0][1] + m[1][0]) * h,
                letters: vec![Pauli::X],
            },
            PauliWord {
                coeff: (m[1][0] - m[0][1]) * h * (-I),
                letters: vec![Pauli::Y],
            },
            PauliWord {
                coeff: (m[0][0] - m[1][1]) * h,
                letters: vec![Pauli::Z],
            },
        ],
    )
}

/// `|0><1| = (X + iY)/2`.
pub fn sigma_plus() -> PauliSum {
    one_qubit([[ZERO, ONE], [ZERO, ZERO]])
}

/// `|1><0| = (X - iY)/2`.
pub fn sigma_minus() -> PauliSum {
    one_qubit([[ZERO, ZERO], [ONE, ZERO]])
}

/// Diagonal operator `diag(values)` on `m` qubits, expanded over I/Z words.
///
/// `values[b]` is the entry for basis index `b`, letter 0 most significant.
pub fn diagonal_to_pauli(values: &[f64]) -> PauliSum {
    let m = values.len().trailing_zeros() as usize;
    assert_eq!(1 << m, values.len(), "power-of-two length");
    let mut c = values.to_vec();
    // In-place Walsh-Hadamard transform.
    let mut h = 1;
    while h < c.len() {
        for i in (0..c.len()).step_by(2 * h) {
            for j in i..i + h {
                let (x, y) = (c[j], c[j + h]);
                c[j] = x + y;
                c[j + h] = x - y;
            }
        }
        h *= 2;
    }
    let norm = 1.0 / values.len() as f64;
    let terms = c
        .iter()
        .enumerate()
        .map(|(s, &v)| PauliWord {
            coeff: Complex64::new(v * norm, 0.0),
            letters: (0..m)
                .map(|k| {
                    if (s >> (m - 1 - k)) & 1 == 1 {
                        Pauli::Z
                    } else {
                        Pauli::I
                    }
                })
                .collect(),
        })
        .collect();
    PauliSum::from_terms(m, terms)
}

/// Lowering and raising operators as Pauli sums.
pub fn compile_ladder(cfg: FockConfig) -> (PauliSum, PauliSum) {
    let qc = cfg.qc;
    let mut a = PauliSum::zero(qc);
    // Bit significance j lives on letter qc - 1 - j.
    for j in 0..qc {
        let high = qc - 1 - j;
        // sqrt(n) for the pre-image n = high_bits * 2^(j+1) + 2^j.
        let diag: Vec<f64> = (0..1usize << high)
            .map(|hb| (((hb << (j + 1)) + (1 << j)) as f64).sqrt())
            .collect();
        let mut word = diagonal_to_pauli(&diag).tensor(&sigma_plus());
        for _ in 0..j {
            word = word.tensor(&sigma_minus());
        }
        a = a.add(&word);
    }
    let ad = a.dagger();
    (a, ad)
}

/// Position and momentum as Pauli sums.
pub fn compile_qp(cfg: FockConfig) -> (PauliSum, PauliSum) {
    let (a, ad) = compile_ladder(cfg);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let q = a.add(&ad).scale(Complex64::new(r, 0.0));
    let p = ad.add(&a.scale(-ONE)).scale(I * r);
    (q, p)
}

/// Number operator `sum_k 2^k (I - Z_k)/2`.
pub fn compile_number(cfg: FockConfig) -> PauliSum {
    diagonal_to_pauli(&(0..cfg.dim()).map(|n| n as f64).collect::<Vec<_>>())
}

/// Dense matrix of a Pauli sum.
pub fn pauli_to_dense(s: &PauliSum) -> Result<DenseOperator> {
    if s.nqubits > DENSE_MAX_QUBITS {
        return Err(Error::TooLarge {
            what: "qubit count",
            size: s.nqubits,
            limit: DENSE_MAX_QUBITS,
        });
    }
    let n = s.nqubits;
    let dim = 1usize << n;
    let mut out = DenseOperator::zeros(dim);
    out.hermitian = false;
    for w in &s.terms {
        let mut flip = 0usize;
        for (k, &p) in w.letters.iter().enumerate() {
            if matches!(p, Pauli::X | Pauli::Y) {
                flip |= 1 << (n - 1 - k);
            }
        }
        // Column c maps to row c ^ flip with a phase from Y and Z letters.
        for c in 0..dim {
            let mut ph = w.coeff;
            for (k, &p) in w.letters.iter().enumerate() {
                let bit = (c >> (n - 1 - k)) & 1;
                match p {
                    Pauli::Z if bit == 1 => ph = -ph,
                    Pauli::Y => ph *= if bit == 0 { I } else { -I },
                    _ => {}
                }
            }
            out.mat[[c ^ flip, c]] += ph;
        }
    }
    Ok(out)
}

/// `(count, max_weight, coeff_l1)`.
pub fn term_stats(s: &PauliSum) -> (usize, usize, f64) {
    (
        s.terms.len(),
        s.terms.iter().map(|w| w.weight()).max().unwrap_or(0),
        s.terms.iter().map(|w| w.coeff.norm()).sum(),
    )
}
