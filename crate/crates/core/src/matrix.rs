//! Square matrices of truncated Laurent series.
//!
//! All entries share one variable and one truncation order; constructors
//! re-truncate to the weakest bound among the entries, so a matrix never
//! claims to know an entry further than its least-known one.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::rational::Rational;
use crate::series::{LaurentSeries, Variable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    n: usize,
    var: Variable,
    entries: Vec<LaurentSeries>,
}

impl LaurentMatrix {
    /// Row-major entries; they must all share the same variable.
    pub fn new(n: usize, entries: Vec<LaurentSeries>) -> Self {
        assert_eq!(entries.len(), n * n, "matrix needs n^2 entries");
        assert!(n > 0, "matrix must be nonempty");
        let var = entries[0].var();
        for e in &entries {
            assert_eq!(e.var(), var, "matrix entries must share one variable");
        }
        LaurentMatrix { n, var, entries }.normalized()
    }

    fn normalized(mut self) -> Self {
        let trunc = self
            .entries
            .iter()
            .map(|e| e.truncation())
            .fold(None, |acc, t| match (acc, t) {
                (None, t) => t,
                (acc, None) => acc,
                (Some(a), Some(b)) => Some(a.min(b)),
            });
        if let Some(bound) = trunc {
            for e in &mut self.entries {
                *e = e.truncated(bound);
            }
        }
        self
    }

    pub fn from_fn(n: usize, var: Variable, mut f: impl FnMut(usize, usize) -> LaurentSeries) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = f(i, j);
                assert_eq!(e.var(), var);
                entries.push(e);
            }
        }
        Self::new(n, entries)
    }

    pub fn zero(var: Variable, n: usize) -> Self {
        Self::from_fn(n, var, |_, _| LaurentSeries::zero(var))
    }

    pub fn identity(var: Variable, n: usize) -> Self {
        Self::from_fn(n, var, |i, j| {
            if i == j {
                LaurentSeries::constant(var, Rational::from_integer(1.into()))
            } else {
                LaurentSeries::zero(var)
            }
        })
    }

    /// diag(v^{e_1}, …, v^{e_n}) — the exact monomial gauge matrix.
    pub fn monomial_gauge(var: Variable, exponents: &[i64]) -> Self {
        Self::from_fn(exponents.len(), var, |i, j| {
            if i == j {
                LaurentSeries::monomial(var, Rational::from_integer(1.into()), exponents[i])
            } else {
                LaurentSeries::zero(var)
            }
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn var(&self) -> Variable {
        self.var
    }

    /// Common truncation of all entries (`None` = exact).
    pub fn truncation(&self) -> Option<i64> {
        self.entries
            .iter()
            .map(|e| e.truncation())
            .fold(None, |acc, t| match (acc, t) {
                (None, t) => t,
                (acc, None) => acc,
                (Some(a), Some(b)) => Some(a.min(b)),
            })
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentSeries {
        &self.entries[i * self.n + j]
    }

    pub fn map(&self, mut f: impl FnMut(&LaurentSeries) -> LaurentSeries) -> Self {
        let entries = self.entries.iter().map(|e| f(e)).collect();
        Self::new(self.n, entries)
    }

    pub fn try_map(&self, mut f: impl FnMut(&LaurentSeries) -> Result<LaurentSeries>) -> Result<Self> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(f(e)?);
        }
        Ok(Self::new(self.n, entries))
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        self.map(|e| e.scaled(c))
    }

    pub fn shifted(&self, k: i64) -> Self {
        self.map(|e| e.shifted(k))
    }

    pub fn truncated(&self, n: i64) -> Self {
        self.map(|e| e.truncated(n))
    }

    pub fn derivative(&self) -> Self {
        self.map(|e| e.derivative())
    }

    pub fn substitute_t_to_z(&self) -> Result<Self> {
        self.try_map(|e| e.substitute_t_to_z())
    }

    pub fn substitute_z_to_t(&self) -> Self {
        self.map(|e| e.substitute_z_to_t())
    }

    /// The matrix of constant terms; errors if they are not all known.
    pub fn constant_term(&self) -> Result<Vec<Vec<Rational>>> {
        let mut rows = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut row = Vec::with_capacity(self.n);
            for j in 0..self.n {
                row.push(self.entry(i, j).coeff(0)?);
            }
            rows.push(row);
        }
        Ok(rows)
    }

    pub fn eq_up_to_truncation(&self, other: &Self) -> bool {
        assert_eq!(self.n, other.n);
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| a.agrees_with(b))
    }
}

impl Add for &LaurentMatrix {
    type Output = LaurentMatrix;

    fn add(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.n, rhs.n, "matrix size mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        LaurentMatrix::new(self.n, entries)
    }
}

impl Sub for &LaurentMatrix {
    type Output = LaurentMatrix;

    fn sub(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        self + &(-rhs)
    }
}

impl Neg for &LaurentMatrix {
    type Output = LaurentMatrix;

    fn neg(self) -> LaurentMatrix {
        self.map(|e| -e)
    }
}

impl Mul for &LaurentMatrix {
    type Output = LaurentMatrix;

    fn mul(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.n, rhs.n, "matrix size mismatch");
        LaurentMatrix::from_fn(self.n, self.var, |i, j| {
            let mut acc = LaurentSeries::zero(self.var);
            for k in 0..self.n {
                acc = &acc + &(self.entry(i, k) * rhs.entry(k, j));
            }
            acc
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn v() -> Variable {
        Variable::t(2)
    }

    #[test]
    fn conjugation_by_monomial_gauge_shifts_exponents() {
        // g^{-1} E g with g = diag(t, 1) multiplies the (1,2) slot by t^{-1}...
        // concretely: (g^{-1} m g)_{ij} = t^{p_j - p_i} m_{ij}.
        let m = LaurentMatrix::from_fn(2, v(), |i, j| {
            LaurentSeries::monomial(v(), rat_int((i * 2 + j + 1) as i64), 2)
        });
        let g = LaurentMatrix::monomial_gauge(v(), &[1, 0]);
        let g_inv = LaurentMatrix::monomial_gauge(v(), &[-1, 0]);
        let c = &(&g_inv * &m) * &g;
        assert_eq!(c.entry(0, 0).coeff(2).unwrap(), rat_int(1));
        assert_eq!(c.entry(0, 1).coeff(1).unwrap(), rat_int(2));
        assert_eq!(c.entry(1, 0).coeff(3).unwrap(), rat_int(3));
        assert_eq!(c.entry(1, 1).coeff(2).unwrap(), rat_int(4));
    }

    #[test]
    fn construction_normalizes_to_common_truncation() {
        let m = LaurentMatrix::new(
            2,
            vec![
                LaurentSeries::monomial(v(), rat_int(1), 0).truncated(3),
                LaurentSeries::monomial(v(), rat_int(1), 5).truncated(7),
                LaurentSeries::zero(v()),
                LaurentSeries::monomial(v(), rat(1, 2), 1),
            ],
        );
        assert_eq!(m.truncation(), Some(3));
        // the t^5 term fell past the common bound
        assert!(m.entry(0, 1).is_zero());
    }

    #[test]
    fn constant_term_requires_known_constants() {
        let m = LaurentMatrix::new(2, vec![LaurentSeries::zero_truncated(v(), -1); 4]);
        assert!(m.constant_term().is_err());
        let ok = LaurentMatrix::identity(v(), 2);
        assert_eq!(ok.constant_term().unwrap()[0][0], rat_int(1));
    }
}
