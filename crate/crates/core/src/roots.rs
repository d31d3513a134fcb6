//! Root systems and rational coweights.
//!
//! Roots are stored as integer functionals on a fixed basis of the Cartan
//! subalgebra, so pairings ⟨α, θ⟩ are dot products.  For the matrix types we
//! use bases on which the adjoint action is diagonal:
//!
//! * `sl_n`: Cartan basis the simple coroots h_m = E_mm − E_{m+1,m+1},
//!   root vectors x_α = E_ij (i ≠ j);
//! * `gl_n`: Cartan basis the diagonal units h_m = E_mm, same root vectors.
//!
//! On these bases `[h, x_α] = α(h)·x_α` holds coefficient-wise, and the
//! bracket table for the root vectors is computed once from the commutators
//! of matrix units, so no sign convention is entered by hand.
//!
//! User-supplied root lists (any finite set closed under negation) get the
//! pairing layer — pairings, floors, eigenspaces — but no bracket table.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{floor_i64, rat, rat_int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeAVariant {
    Sl,
    Gl,
}

/// Result of a bracket `[x_α, x_β]` of two root vectors.
#[derive(Clone, Debug, PartialEq)]
pub enum RootBracket {
    Zero,
    /// `c · x_γ` for the root with the given index.
    Root { index: usize, coeff: Rational },
    /// An element of the Cartan, in coordinates on the Cartan basis.
    Cartan(Vec<Rational>),
}

#[derive(Debug)]
struct TypeAData {
    variant: TypeAVariant,
    n: usize,
    /// root index -> (i, j) of the matrix unit E_ij, 0-based
    positions: Vec<(usize, usize)>,
    brackets: Vec<Vec<RootBracket>>,
}

#[derive(Debug)]
pub struct RootSystem {
    name: String,
    cartan_dim: usize,
    roots: Vec<Vec<i64>>,
    neg_of: Vec<usize>,
    type_a: Option<TypeAData>,
}

impl PartialEq for RootSystem {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.cartan_dim == other.cartan_dim
            && self.roots == other.roots
    }
}

impl Eq for RootSystem {}

impl RootSystem {
    pub fn sl(n: usize) -> Result<Arc<Self>> {
        if n < 2 {
            return Err(Error::InvalidRootSystem(format!("sl_{n} needs n >= 2")));
        }
        Ok(Self::type_a(TypeAVariant::Sl, n))
    }

    pub fn gl(n: usize) -> Result<Arc<Self>> {
        if n < 1 {
            return Err(Error::InvalidRootSystem("gl_0 is empty".into()));
        }
        Ok(Self::type_a(TypeAVariant::Gl, n))
    }

    fn type_a(variant: TypeAVariant, n: usize) -> Arc<Self> {
        let cartan_dim = match variant {
            TypeAVariant::Sl => n - 1,
            TypeAVariant::Gl => n,
        };
        // Diagonal realization of the m-th Cartan basis vector.
        let diag = |m: usize| -> Vec<i64> {
            let mut d = vec![0i64; n];
            match variant {
                TypeAVariant::Sl => {
                    d[m] = 1;
                    d[m + 1] = -1;
                }
                TypeAVariant::Gl => d[m] = 1,
            }
            d
        };
        let diags: Vec<Vec<i64>> = (0..cartan_dim).map(diag).collect();

        // Positive roots (i < j) in lexicographic order, then their
        // negatives in the same order.
        let mut positions = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                positions.push((i, j));
            }
        }
        let p = positions.len();
        for q in 0..p {
            let (i, j) = positions[q];
            positions.push((j, i));
        }

        let root_of = |&(i, j): &(usize, usize)| -> Vec<i64> {
            diags.iter().map(|d| d[i] - d[j]).collect()
        };
        let roots: Vec<Vec<i64>> = positions.iter().map(root_of).collect();
        let neg_of: Vec<usize> = (0..2 * p).map(|q| (q + p) % (2 * p)).collect();

        // Express a traceless (sl) or arbitrary (gl) diagonal matrix in the
        // Cartan basis.
        let cartan_coords = |d: &[i64]| -> Vec<Rational> {
            match variant {
                TypeAVariant::Gl => d.iter().map(|x| rat_int(*x)).collect(),
                TypeAVariant::Sl => {
                    let mut acc = 0i64;
                    (0..cartan_dim)
                        .map(|m| {
                            acc += d[m];
                            rat_int(acc)
                        })
                        .collect()
                }
            }
        };

        let index_of = |i: usize, j: usize| -> usize {
            positions.iter().position(|&(a, b)| a == i && b == j).unwrap()
        };

        // [E_ij, E_kl] = δ_jk E_il − δ_li E_kj
        let mut brackets = Vec::with_capacity(2 * p);
        for &(i, j) in &positions {
            let mut row = Vec::with_capacity(2 * p);
            for &(k, l) in &positions {
                let b = if j == k && l == i {
                    let mut d = vec![0i64; n];
                    d[i] += 1;
                    d[j] -= 1;
                    RootBracket::Cartan(cartan_coords(&d))
                } else if j == k {
                    RootBracket::Root { index: index_of(i, l), coeff: rat_int(1) }
                } else if l == i {
                    RootBracket::Root { index: index_of(k, j), coeff: rat_int(-1) }
                } else {
                    RootBracket::Zero
                };
                row.push(b);
            }
            brackets.push(row);
        }

        let name = match variant {
            TypeAVariant::Sl => format!("sl{n}"),
            TypeAVariant::Gl => format!("gl{n}"),
        };
        Arc::new(RootSystem {
            name,
            cartan_dim,
            roots,
            neg_of,
            type_a: Some(TypeAData { variant, n, positions, brackets }),
        })
    }

    /// A bare root list: pairings and eigenspaces work, brackets do not.
    pub fn custom(name: impl Into<String>, cartan_dim: usize, roots: Vec<Vec<i64>>) -> Result<Arc<Self>> {
        let name = name.into();
        for root in &roots {
            if root.len() != cartan_dim {
                return Err(Error::InvalidRootSystem(format!(
                    "root {root:?} has length {}, expected {cartan_dim}",
                    root.len()
                )));
            }
            if root.iter().all(|c| *c == 0) {
                return Err(Error::InvalidRootSystem("the zero vector is not a root".into()));
            }
        }
        for (a, root) in roots.iter().enumerate() {
            if roots[a + 1..].contains(root) {
                return Err(Error::InvalidRootSystem(format!("duplicate root {root:?}")));
            }
        }
        let mut neg_of = Vec::with_capacity(roots.len());
        for root in &roots {
            let neg: Vec<i64> = root.iter().map(|c| -c).collect();
            match roots.iter().position(|s| *s == neg) {
                Some(idx) => neg_of.push(idx),
                None => {
                    return Err(Error::InvalidRootSystem(format!(
                        "root list is not closed under negation: missing {neg:?}"
                    )))
                }
            }
        }
        Ok(Arc::new(RootSystem { name, cartan_dim, roots, neg_of, type_a: None }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cartan_dim(&self) -> usize {
        self.cartan_dim
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn root(&self, idx: usize) -> &[i64] {
        &self.roots[idx]
    }

    pub fn negation(&self, idx: usize) -> usize {
        self.neg_of[idx]
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r == root)
    }

    pub fn has_brackets(&self) -> bool {
        self.type_a.is_some()
    }

    /// `(variant, n)` when this is a matrix realization.
    pub fn matrix_type(&self) -> Option<(TypeAVariant, usize)> {
        self.type_a.as_ref().map(|d| (d.variant, d.n))
    }

    /// For matrix types: the (i, j) position (0-based) of x_α = E_ij.
    pub fn matrix_position(&self, idx: usize) -> Option<(usize, usize)> {
        self.type_a.as_ref().map(|d| d.positions[idx])
    }

    pub fn bracket_roots(&self, a: usize, b: usize) -> Result<&RootBracket> {
        match &self.type_a {
            Some(d) => Ok(&d.brackets[a][b]),
            None => Err(Error::NoBracketTable(self.name.clone())),
        }
    }

    pub fn cartan_label(&self, m: usize) -> String {
        format!("h[{}]", m + 1)
    }

    pub fn root_label(&self, idx: usize) -> String {
        let inner: Vec<String> = self.roots[idx].iter().map(|c| c.to_string()).collect();
        format!("x[[{}]]", inner.join(","))
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (rank {}, {} roots)", self.name, self.cartan_dim, self.roots.len())
    }
}

/// A rational coweight θ with `r·θ` integral on the Cartan basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Coweight {
    system: Arc<RootSystem>,
    r: u32,
    comps: Vec<Rational>,
}

impl Coweight {
    pub fn new(system: Arc<RootSystem>, r: u32, comps: Vec<Rational>) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidWeights("r must be at least 1".into()));
        }
        if comps.len() != system.cartan_dim() {
            return Err(Error::DimensionMismatch {
                expected: system.cartan_dim(),
                found: comps.len(),
            });
        }
        for (index, c) in comps.iter().enumerate() {
            if !(c * rat_int(i64::from(r))).is_integer() {
                return Err(Error::CoweightNotIntegral {
                    index: index + 1,
                    value: c.to_string(),
                    r,
                });
            }
        }
        Ok(Coweight { system, r, comps })
    }

    /// θ with components `numerators[m] / r`.
    pub fn from_numerators(system: Arc<RootSystem>, r: u32, numerators: &[i64]) -> Result<Self> {
        let comps = numerators.iter().map(|n| rat(*n, i64::from(r))).collect();
        Self::new(system, r, comps)
    }

    pub fn system(&self) -> &Arc<RootSystem> {
        &self.system
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn components(&self) -> &[Rational] {
        &self.comps
    }

    /// ⟨α, θ⟩ for the root with the given index.
    pub fn pairing(&self, idx: usize) -> Rational {
        self.pairing_of(self.system.root(idx))
    }

    pub fn pairing_of(&self, alpha: &[i64]) -> Rational {
        assert_eq!(alpha.len(), self.comps.len());
        alpha
            .iter()
            .zip(&self.comps)
            .fold(Rational::zero(), |acc, (a, t)| acc + rat_int(*a) * t)
    }

    /// m_α(θ) = −⌊⟨α, θ⟩⌋, the z-order prescribed for the α-slot of the
    /// parahoric algebra.
    pub fn m_alpha(&self, idx: usize) -> i64 {
        -floor_i64(&self.pairing(idx))
    }

    pub fn is_integral_pairing(&self, idx: usize) -> bool {
        self.pairing(idx).is_integer()
    }

    /// Basis labels of the θ-eigenspace g_λ = {v : [θ, v] = λ v}: every
    /// Cartan generator when λ = 0, and the root vectors with ⟨α, θ⟩ = λ.
    pub fn eigenspace(&self, lambda: &Rational) -> Vec<String> {
        let mut labels = Vec::new();
        if lambda.is_zero() {
            for m in 0..self.system.cartan_dim() {
                labels.push(self.system.cartan_label(m));
            }
        }
        for idx in 0..self.system.root_count() {
            if &self.pairing(idx) == lambda {
                labels.push(self.system.root_label(idx));
            }
        }
        labels
    }
}
