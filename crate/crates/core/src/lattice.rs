//! Discrete velocity lattices and the mode-coupling form of the BGK collision.
//!
//! All lattices use `c_s^2 = 1/3`. Velocities are ordered with the rest
//! velocity first, then lexicographically over components, so D1Q3 reads
//! `c = (0, -1, +1)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Supported lattice families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    D1Q3,
    D2Q9,
    D3Q27,
}

impl LatticeKind {
    pub const ALL: [LatticeKind; 3] = [LatticeKind::D1Q3, LatticeKind::D2Q9, LatticeKind::D3Q27];

    pub fn dim(self) -> usize {
        match self {
            LatticeKind::D1Q3 => 1,
            LatticeKind::D2Q9 => 2,
            LatticeKind::D3Q27 => 3,
        }
    }

    pub fn q(self) -> usize {
        3usize.pow(self.dim() as u32)
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LatticeKind::D1Q3 => "D1Q3",
            LatticeKind::D2Q9 => "D2Q9",
            LatticeKind::D3Q27 => "D3Q27",
        };
        f.write_str(s)
    }
}

impl FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "D1Q3" => Ok(LatticeKind::D1Q3),
            "D2Q9" => Ok(LatticeKind::D2Q9),
            "D3Q27" => Ok(LatticeKind::D3Q27),
            _ => Err(Error::InvalidInput(format!("unknown lattice '{s}'"))),
        }
    }
}

/// Velocity set, weights and sound speed of a DdQq lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeModel<T> {
    pub kind: LatticeKind,
    pub dim: usize,
    pub q: usize,
    pub velocities: Vec<Vec<i32>>,
    pub weights: Vec<T>,
    pub cs2: T,
    /// `|c_i|^2 - c_s^2` per direction.
    pub qi: Vec<T>,
}

/// Builds the lattice with the deterministic velocity ordering.
pub fn build_lattice<T: Scalar>(kind: LatticeKind) -> LatticeModel<T> {
    let dim = kind.dim();
    let mut velocities: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..dim {
        velocities = velocities
            .into_iter()
            .flat_map(|v| {
                [-1, 0, 1].into_iter().map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    let rest = velocities
        .iter()
        .position(|v| v.iter().all(|&c| c == 0))
        .expect("rest velocity present");
    let r = velocities.remove(rest);
    velocities.insert(0, r);

    let cs2 = T::ratio(1, 3);
    let weights: Vec<T> = velocities
        .iter()
        .map(|v| {
            v.iter().fold(T::one(), |acc, &c| {
                acc * if c == 0 { T::ratio(4, 6) } else { T::ratio(1, 6) }
            })
        })
        .collect();
    let qi = velocities
        .iter()
        .map(|v| T::int(v.iter().map(|&c| (c * c) as i64).sum()) - cs2.clone())
        .collect();
    LatticeModel {
        kind,
        dim,
        q: velocities.len(),
        velocities,
        weights,
        cs2,
        qi,
    }
}

impl<T: Scalar> LatticeModel<T> {
    /// Integer dot product `c_i . c_j`.
    pub fn cdot(&self, i: usize, j: usize) -> i64 {
        self.velocities[i]
            .iter()
            .zip(&self.velocities[j])
            .map(|(&a, &b)| (a * b) as i64)
            .sum()
    }

    /// Index of the velocity `-c_i`.
    pub fn opposite(&self, i: usize) -> usize {
        let neg: Vec<i32> = self.velocities[i].iter().map(|c| -c).collect();
        self.velocities
            .iter()
            .position(|v| *v == neg)
            .expect("velocity sets are symmetric")
    }

    /// Converts every constant to another scalar type.
    pub fn cast<U: Scalar>(&self) -> LatticeModel<U> {
        build_lattice(self.kind)
    }
}

/// Linear and quadratic coupling tensors of the collision operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeCouplingTensors<T> {
    pub q: usize,
    /// Row-major `Q x Q`.
    pub l: Vec<T>,
    /// Row-major `Q x Q x Q`, index `(i, j, k)`.
    pub qt: Vec<T>,
    pub omega: T,
}

impl<T: Scalar> ModeCouplingTensors<T> {
    pub fn l(&self, i: usize, j: usize) -> &T {
        &self.l[i * self.q + j]
    }

    pub fn qt(&self, i: usize, j: usize, k: usize) -> &T {
        &self.qt[(i * self.q + j) * self.q + k]
    }

    /// `sum_j L_ij f_j + sum_jk Qt_ijk f_j f_k`, the equilibrium at unit density.
    pub fn equilibrium(&self, f: &[T]) -> Vec<T> {
        let q = self.q;
        (0..q)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..q {
                    acc = acc + self.l(i, j).clone() * f[j].clone();
                    for k in 0..q {
                        acc = acc + self.qt(i, j, k).clone() * f[j].clone() * f[k].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn row_sums_l(&self) -> Vec<T> {
        (0..self.q)
            .map(|i| (0..self.q).fold(T::zero(), |a, j| a + self.l(i, j).clone()))
            .collect()
    }

    pub fn col_sums_l(&self) -> Vec<T> {
        (0..self.q)
            .map(|j| (0..self.q).fold(T::zero(), |a, i| a + self.l(i, j).clone()))
            .collect()
    }

    /// `sum_i Qt_ijk` for every `(j, k)`, row-major.
    pub fn qt_sums(&self) -> Vec<T> {
        let q = self.q;
        let mut out = Vec::with_capacity(q * q);
        for j in 0..q {
            for k in 0..q {
                out.push((0..q).fold(T::zero(), |a, i| a + self.qt(i, j, k).clone()));
            }
        }
        out
    }
}

/// Builds `L_ij = w_i (1 + c_i.c_j / c_s^2)` and
/// `Qt_ijk = w_i [ (c_i.c_j)(c_i.c_k) / (2 c_s^4) - (c_j.c_k) / (2 c_s^2) ]`.
///
/// In one dimension `Qt_ijk = w_i Q_i c_j c_k / (2 c_s^4)`.
pub fn mode_coupling<T: Scalar>(model: &LatticeModel<T>, omega: T) -> Result<ModeCouplingTensors<T>> {
    if !(omega > T::zero() && omega < T::int(2)) {
        return Err(Error::OmegaOutOfRange(omega.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(ModeCouplingTensors {
        omega,
        ..mode_coupling_unchecked(model)
    })
}

/// Tensors without a relaxation parameter (`omega` set to one).
pub(crate) fn mode_coupling_unchecked<T: Scalar>(model: &LatticeModel<T>) -> ModeCouplingTensors<T> {
    let q = model.q;
    let cs2 = model.cs2.clone();
    let two = T::int(2);
    let mut l = Vec::with_capacity(q * q);
    for i in 0..q {
        for j in 0..q {
            l.push(model.weights[i].clone() * (T::one() + T::int(model.cdot(i, j)) / cs2.clone()));
        }
    }
    let mut qt = Vec::with_capacity(q * q * q);
    for i in 0..q {
        for j in 0..q {
            for k in 0..q {
                let quad = T::int(model.cdot(i, j) * model.cdot(i, k))
                    / (two.clone() * cs2.clone() * cs2.clone());
                let iso = T::int(model.cdot(j, k)) / (two.clone() * cs2.clone());
                qt.push(model.weights[i].clone() * (quad - iso));
            }
        }
    }
    ModeCouplingTensors {
        q,
        l,
        qt,
        omega: T::one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn d1q3_parameters() {
        let m = build_lattice::<Rational64>(LatticeKind::D1Q3);
        assert_eq!(m.velocities, vec![vec![0], vec![-1], vec![1]]);
        assert_eq!(m.weights, vec![r(4, 6), r(1, 6), r(1, 6)]);
        assert_eq!(m.qi, vec![r(-1, 3), r(2, 3), r(2, 3)]);
        assert_eq!(m.cs2, r(1, 3));
    }

    #[test]
    fn d2q9_ordering_and_weights() {
        let m = build_lattice::<Rational64>(LatticeKind::D2Q9);
        assert_eq!(m.velocities[0], vec![0, 0]);
        assert_eq!(m.velocities[1], vec![-1, -1]);
        assert_eq!(m.velocities[8], vec![1, 1]);
        assert_eq!(m.weights[0], r(4, 9));
        assert_eq!(m.weights[2], r(1, 9));
        assert_eq!(m.weights[1], r(1, 36));
    }

    #[test]
    fn opposite_is_involution() {
        let m = build_lattice::<f64>(LatticeKind::D3Q27);
        for i in 0..m.q {
            assert_eq!(m.opposite(m.opposite(i)), i);
        }
    }

    #[test]
    fn omega_range() {
        let m = build_lattice::<f64>(LatticeKind::D1Q3);
        assert!(matches!(mode_coupling(&m, 0.0), Err(Error::OmegaOutOfRange(_))));
        assert!(matches!(mode_coupling(&m, 2.0), Err(Error::OmegaOutOfRange(_))));
        assert!(mode_coupling(&m, 1.0).is_ok());
    }

    #[test]
    fn parse_kind() {
        assert_eq!("d2q9".parse::<LatticeKind>().unwrap(), LatticeKind::D2Q9);
        assert!("D2Q7".parse::<LatticeKind>().is_err());
    }
}
