//! Lie-algebra-valued Laurent series.
//!
//! An element is Σ_m a_m(·)·h_m + Σ_α b_α(·)·x_α with truncated Laurent
//! series as coefficients.  All coefficients share one variable and one
//! truncation order; constructors normalize to the weakest bound, and a
//! root coefficient that is absent from the map is zero up to that bound.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::roots::{Coweight, RootBracket, RootSystem};
use crate::series::{LaurentSeries, Variable};

/// Addressable coefficient slot of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    Cartan(usize),
    Root(usize),
}

impl Slot {
    pub fn label(&self, system: &RootSystem) -> String {
        match self {
            Slot::Cartan(m) => system.cartan_label(*m),
            Slot::Root(idx) => system.root_label(*idx),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraElement {
    system: Arc<RootSystem>,
    var: Variable,
    cartan: Vec<LaurentSeries>,
    roots: BTreeMap<usize, LaurentSeries>,
}

impl LieAlgebraElement {
    /// Builds an element from per-slot coefficient series.  Duplicate root
    /// indices are summed; a root index that never appears is exactly zero.
    pub fn new(
        system: Arc<RootSystem>,
        var: Variable,
        cartan: Vec<LaurentSeries>,
        roots: impl IntoIterator<Item = (usize, LaurentSeries)>,
    ) -> Result<Self> {
        if cartan.len() != system.cartan_dim() {
            return Err(Error::DimensionMismatch {
                expected: system.cartan_dim(),
                found: cartan.len(),
            });
        }
        let mut root_map: BTreeMap<usize, LaurentSeries> = BTreeMap::new();
        for (idx, s) in roots {
            if idx >= system.root_count() {
                return Err(Error::UnknownRoot(vec![idx as i64]));
            }
            assert_eq!(s.var(), var, "root coefficient variable mismatch");
            match root_map.remove(&idx) {
                Some(prev) => {
                    root_map.insert(idx, &prev + &s);
                }
                None => {
                    root_map.insert(idx, s);
                }
            }
        }
        for s in &cartan {
            assert_eq!(s.var(), var, "Cartan coefficient variable mismatch");
        }
        Ok(LieAlgebraElement { system, var, cartan, roots: root_map }.normalized())
    }

    fn normalized(mut self) -> Self {
        // An absent root slot means exactly zero, so exact zeros are
        // dropped.  Truncated zeros still carry information and stay.
        self.roots.retain(|_, s| !(s.is_zero() && s.is_exact()));
        self
    }

    pub fn zero(system: Arc<RootSystem>, var: Variable) -> Self {
        let cartan = vec![LaurentSeries::zero(var); system.cartan_dim()];
        LieAlgebraElement { system, var, cartan, roots: BTreeMap::new() }
    }

    /// θ itself as a constant Cartan element.
    pub fn constant_cartan(system: Arc<RootSystem>, var: Variable, values: &[Rational]) -> Result<Self> {
        if values.len() != system.cartan_dim() {
            return Err(Error::DimensionMismatch {
                expected: system.cartan_dim(),
                found: values.len(),
            });
        }
        let cartan = values
            .iter()
            .map(|v| LaurentSeries::constant(var, v.clone()))
            .collect();
        Ok(LieAlgebraElement { system, var, cartan, roots: BTreeMap::new() })
    }

    pub fn from_coweight(theta: &Coweight, var: Variable) -> Self {
        Self::constant_cartan(theta.system().clone(), var, theta.components())
            .expect("coweight has the right dimension")
    }

    pub fn system(&self) -> &Arc<RootSystem> {
        &self.system
    }

    pub fn var(&self) -> Variable {
        self.var
    }

    /// The weakest truncation among the slots (`None` = every slot exact).
    /// Slots keep their own truncation orders: gauges shift different slots
    /// by different amounts, so a common order would throw information away.
    pub fn truncation(&self) -> Option<i64> {
        let mut trunc: Option<i64> = None;
        for s in self.cartan.iter().chain(self.roots.values()) {
            trunc = match (trunc, s.truncation()) {
                (None, t) => t,
                (acc, None) => acc,
                (Some(a), Some(b)) => Some(a.min(b)),
            };
        }
        trunc
    }

    pub fn truncated(&self, n: i64) -> Self {
        let cartan = self.cartan.iter().map(|s| s.truncated(n)).collect();
        let roots = self
            .roots
            .iter()
            .map(|(idx, s)| (*idx, s.truncated(n)))
            .collect();
        LieAlgebraElement { system: self.system.clone(), var: self.var, cartan, roots }
            .normalized()
    }

    pub fn cartan(&self, m: usize) -> &LaurentSeries {
        &self.cartan[m]
    }

    /// The stored coefficient of x_α; `None` means exactly zero.
    pub fn root_coeff(&self, idx: usize) -> Option<&LaurentSeries> {
        self.roots.get(&idx)
    }

    /// The coefficient of x_α as a series; absent slots are exactly zero.
    pub fn root_coeff_series(&self, idx: usize) -> LaurentSeries {
        match self.roots.get(&idx) {
            Some(s) => s.clone(),
            None => LaurentSeries::zero(self.var),
        }
    }

    pub fn root_terms(&self) -> impl Iterator<Item = (usize, &LaurentSeries)> + '_ {
        self.roots.iter().map(|(idx, s)| (*idx, s))
    }

    pub fn is_known_zero(&self) -> bool {
        self.cartan.iter().all(|s| s.is_zero()) && self.roots.is_empty()
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(self.system, other.system, "elements live in different root systems");
        assert_eq!(self.var, other.var, "elements use different variables");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let cartan = self
            .cartan
            .iter()
            .zip(&other.cartan)
            .map(|(a, b)| a + b)
            .collect();
        let mut roots = self.roots.clone();
        for (idx, s) in &other.roots {
            match roots.remove(idx) {
                Some(prev) => {
                    roots.insert(*idx, &prev + s);
                }
                None => {
                    roots.insert(*idx, s.clone());
                }
            }
        }
        LieAlgebraElement { system: self.system.clone(), var: self.var, cartan, roots }
            .normalized()
    }

    pub fn neg(&self) -> Self {
        let cartan = self.cartan.iter().map(|s| -s).collect();
        let roots = self.roots.iter().map(|(idx, s)| (*idx, -s)).collect();
        LieAlgebraElement { system: self.system.clone(), var: self.var, cartan, roots }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let cartan = self.cartan.iter().map(|s| s.scaled(c)).collect();
        let roots = self.roots.iter().map(|(idx, s)| (*idx, s.scaled(c))).collect();
        LieAlgebraElement { system: self.system.clone(), var: self.var, cartan, roots }
            .normalized()
    }

    /// Rebuild the element by transforming each coefficient slot.
    /// Absent root coefficients stay absent (zero maps to zero for every
    /// transform used here).
    pub fn map_coefficients(
        &self,
        mut f: impl FnMut(Slot, &LaurentSeries) -> Result<LaurentSeries>,
    ) -> Result<Self> {
        let mut cartan = Vec::with_capacity(self.cartan.len());
        for (m, s) in self.cartan.iter().enumerate() {
            cartan.push(f(Slot::Cartan(m), s)?);
        }
        let mut roots = Vec::new();
        for (idx, s) in &self.roots {
            roots.push((*idx, f(Slot::Root(*idx), s)?));
        }
        let var = cartan
            .first()
            .map(|s| s.var())
            .or_else(|| roots.first().map(|(_, s)| s.var()))
            .unwrap_or(self.var);
        LieAlgebraElement::new(self.system.clone(), var, cartan, roots)
    }

    /// The Lie bracket.  Root-root products need the bracket table, so this
    /// fails on custom root systems whenever both elements have root parts.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.assert_compatible(other);
        let sys = &self.system;
        if !self.roots.is_empty() && !other.roots.is_empty() && !sys.has_brackets() {
            return Err(Error::NoBracketTable(sys.name().to_string()));
        }
        let mut cartan = vec![LaurentSeries::zero(self.var); sys.cartan_dim()];
        let mut roots: BTreeMap<usize, LaurentSeries> = BTreeMap::new();
        let add_root = |idx: usize, s: LaurentSeries, roots: &mut BTreeMap<usize, LaurentSeries>| {
            match roots.remove(&idx) {
                Some(prev) => {
                    roots.insert(idx, &prev + &s);
                }
                None => {
                    roots.insert(idx, s);
                }
            }
        };

        // [a h_m, d x_β] = a d · β(h_m) x_β
        for (m, a) in self.cartan.iter().enumerate() {
            if a.is_zero() && a.is_exact() {
                continue;
            }
            for (beta, d) in &other.roots {
                let c = crate::rational::rat_int(sys.root(*beta)[m]);
                add_root(*beta, (a * d).scaled(&c), &mut roots);
            }
        }
        // [b x_α, c h_m] = -b c · α(h_m) x_α
        for (alpha, b) in &self.roots {
            for (m, c) in other.cartan.iter().enumerate() {
                if c.is_zero() && c.is_exact() {
                    continue;
                }
                let a = crate::rational::rat_int(-sys.root(*alpha)[m]);
                add_root(*alpha, (b * c).scaled(&a), &mut roots);
            }
        }
        // [b x_α, d x_β] via the table
        for (alpha, b) in &self.roots {
            for (beta, d) in &other.roots {
                match sys.bracket_roots(*alpha, *beta)? {
                    RootBracket::Zero => {}
                    RootBracket::Root { index, coeff } => {
                        add_root(*index, (b * d).scaled(coeff), &mut roots);
                    }
                    RootBracket::Cartan(coords) => {
                        let prod = b * d;
                        for (m, coord) in coords.iter().enumerate() {
                            cartan[m] = &cartan[m] + &prod.scaled(coord);
                        }
                    }
                }
            }
        }
        LieAlgebraElement::new(self.system.clone(), self.var, cartan, roots)
    }

    /// Equality of the known parts up to the common truncation.
    pub fn eq_up_to_truncation(&self, other: &Self) -> bool {
        self.assert_compatible(other);
        for (a, b) in self.cartan.iter().zip(&other.cartan) {
            if !a.agrees_with(b) {
                return false;
            }
        }
        let indices: std::collections::BTreeSet<usize> = self
            .roots
            .keys()
            .chain(other.roots.keys())
            .copied()
            .collect();
        for idx in indices {
            if !self
                .root_coeff_series(idx)
                .agrees_with(&other.root_coeff_series(idx))
            {
                return false;
            }
        }
        true
    }

    /// Deterministic listing: all Cartan lines, then the nonzero root lines
    /// in root-index order.
    pub fn render_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for (m, s) in self.cartan.iter().enumerate() {
            lines.push(format!("{} = {}", self.system.cartan_label(m), s));
        }
        for (idx, s) in &self.roots {
            lines.push(format!("{} = {}", self.system.root_label(*idx), s));
        }
        lines
    }
}

impl fmt::Display for LieAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines = self.render_lines();
        write!(f, "{}", lines.join("\n"))
    }
}
