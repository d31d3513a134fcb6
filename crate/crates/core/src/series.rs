//! Truncated Laurent series over ℚ.
//!
//! A series lives in one of two coordinates: the chart coordinate `t` of the
//! μ_r-cover, or the coarse disc coordinate `z = t^r`.  Truncation is
//! explicit data: `truncation() == Some(N)` means every coefficient at
//! exponent `> N` is *unknown* — not zero — while `None` marks an exact
//! finite sum.  Every operation propagates the most conservative truncation
//! consistent with its inputs:
//!
//! * `a + b` is known up to `min(N_a, N_b)`;
//! * `a · b` up to `min(N_a + ord(b), N_b + ord(a))`, where the order of a
//!   series with no known nonzero term is taken to be its own truncation;
//! * `d/dt` up to `N − 1`;
//! * `t^r = z` substitution up to `⌊N/r⌋`.
//!
//! Asking for a coefficient past the truncation order is an error, never a
//! silent zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{modulo, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// Chart coordinate on the μ_r-cover; ζ ∈ μ_r acts by t ↦ ζ^{-1} t.
    T,
    /// Coarse coordinate z = t^r, invariant under μ_r.
    Z,
}

/// A formal variable together with the order `r` of the ambient μ_r-action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    kind: VarKind,
    order: u32,
}

impl Variable {
    pub fn t(order: u32) -> Self {
        assert!(order >= 1, "variable order must be at least 1");
        Variable { kind: VarKind::T, order }
    }

    pub fn z(order: u32) -> Self {
        assert!(order >= 1, "variable order must be at least 1");
        Variable { kind: VarKind::Z, order }
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn symbol(&self) -> char {
        match self.kind {
            VarKind::T => 't',
            VarKind::Z => 'z',
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// μ_r-weight of a series: ζ·a = ζ^w a for ζ ∈ μ_r.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuWeight {
    /// The zero series is homogeneous of every weight.
    Any,
    Weight(u32),
    NotHomogeneous,
}

impl fmt::Display for MuWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MuWeight::Any => write!(f, "any (zero series)"),
            MuWeight::Weight(w) => write!(f, "{w}"),
            MuWeight::NotHomogeneous => write!(f, "not homogeneous"),
        }
    }
}

fn min_trunc(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn add_trunc(n: Option<i64>, k: Option<i64>) -> Option<i64> {
    match (n, k) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    var: Variable,
    coeffs: BTreeMap<i64, Rational>,
    trunc: Option<i64>,
}

impl LaurentSeries {
    fn normalized(mut self) -> Self {
        if let Some(n) = self.trunc {
            self.coeffs.retain(|k, _| *k <= n);
        }
        self.coeffs.retain(|_, c| !c.is_zero());
        self
    }

    pub fn zero(var: Variable) -> Self {
        LaurentSeries { var, coeffs: BTreeMap::new(), trunc: None }
    }

    pub fn zero_truncated(var: Variable, trunc: i64) -> Self {
        LaurentSeries { var, coeffs: BTreeMap::new(), trunc: Some(trunc) }
    }

    pub fn constant(var: Variable, c: Rational) -> Self {
        Self::monomial(var, c, 0)
    }

    pub fn monomial(var: Variable, c: Rational, exponent: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exponent, c);
        }
        LaurentSeries { var, coeffs, trunc: None }
    }

    /// Exact series from a list of `(exponent, coefficient)` terms.
    /// Repeated exponents are summed.
    pub fn from_terms(var: Variable, terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (k, c) in terms {
            let entry = coeffs.entry(k).or_insert_with(Rational::zero);
            *entry += c;
        }
        LaurentSeries { var, coeffs, trunc: None }.normalized()
    }

    pub fn var(&self) -> Variable {
        self.var
    }

    /// `Some(N)`: exponents `> N` are unknown.  `None`: the series is exact.
    pub fn truncation(&self) -> Option<i64> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Forget everything above exponent `n` (keeps a tighter existing bound).
    pub fn truncated(&self, n: i64) -> Self {
        let mut s = self.clone();
        s.trunc = Some(min_trunc(s.trunc, Some(n)).unwrap());
        s.normalized()
    }

    /// True iff the known part vanishes.  An inexact series may still have
    /// nonzero coefficients past its truncation order.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest exponent with a (known) nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn leading(&self) -> Option<(i64, &Rational)> {
        self.coeffs.iter().next().map(|(k, c)| (*k, c))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// The coefficient at `exponent`, which must lie within the known range.
    pub fn coeff(&self, exponent: i64) -> Result<Rational> {
        match self.trunc {
            Some(n) if exponent > n => {
                Err(Error::TruncationExhausted { exponent, truncation: n })
            }
            _ => Ok(self.coeffs.get(&exponent).cloned().unwrap_or_else(Rational::zero)),
        }
    }

    fn assert_same_var(&self, other: &Self) {
        assert_eq!(
            self.var, other.var,
            "series operation on distinct variables {}^(r={}) vs {}^(r={})",
            self.var, self.var.order, other.var, other.var.order
        );
    }

    /// Effective order for the truncation rule of a product: the order of
    /// the known part, or the series' own truncation when nothing is known
    /// to be nonzero.
    fn rule_order(&self) -> Option<i64> {
        self.order().map(Some).unwrap_or(self.trunc)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, v)| (*k, v * c))
            .collect();
        LaurentSeries { var: self.var, coeffs, trunc: self.trunc }.normalized()
    }

    /// Multiplication by the exact monomial `var^k`.
    pub fn shifted(&self, k: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(e, c)| (*e + k, c.clone())).collect();
        LaurentSeries {
            var: self.var,
            coeffs,
            trunc: self.trunc.map(|n| n + k),
        }
    }

    /// Derivative with respect to the series variable.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| **k != 0)
            .map(|(k, c)| (*k - 1, c * Rational::from(BigInt::from(*k))))
            .collect();
        LaurentSeries {
            var: self.var,
            coeffs,
            trunc: self.trunc.map(|n| n - 1),
        }
        .normalized()
    }

    /// Multiplicative inverse: `a.inverse()? * a == 1` up to truncation.
    ///
    /// An exact monomial inverts exactly.  An exact series with several
    /// terms has an infinite inverse and must be truncated first.
    pub fn inverse(&self) -> Result<Self> {
        let Some((d, lead)) = self.leading() else {
            return Err(Error::ZeroInverse);
        };
        let lead_inv = lead.recip();
        match self.trunc {
            None if self.coeffs.len() == 1 => Ok(Self::monomial(self.var, lead_inv, -d)),
            None => Err(Error::InverseNeedsTruncation),
            Some(n) => {
                // Relative picture: self = lead·t^d·(1 + v) with ord(v) ≥ 1,
                // known through relative exponent l = n − d.
                let l = n - d;
                let mut neg_v = LaurentSeries {
                    var: self.var,
                    coeffs: self
                        .coeffs
                        .iter()
                        .filter(|(k, _)| **k != d)
                        .map(|(k, c)| (*k - d, -(c * &lead_inv)))
                        .collect(),
                    trunc: Some(l),
                }
                .normalized();
                neg_v.trunc = Some(l);
                let one = Self::constant(self.var, Rational::one()).truncated(l);
                let mut acc = one.clone();
                let mut term = one;
                while !term.is_zero() {
                    term = (&term * &neg_v).truncated(l);
                    acc = &acc + &term;
                }
                Ok(acc.scaled(&lead_inv).shifted(-d))
            }
        }
    }

    /// Push a series in `t` down along `t^r = z`; every known nonzero term
    /// must sit at an exponent divisible by `r`.
    pub fn substitute_t_to_z(&self) -> Result<Self> {
        assert_eq!(self.var.kind, VarKind::T, "substitute_t_to_z needs a series in t");
        let r = i64::from(self.var.order);
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            if k.rem_euclid(r) != 0 {
                return Err(Error::NonIntegralExponent { exponent: *k, r: self.var.order });
            }
            coeffs.insert(k.div_euclid(r), c.clone());
        }
        Ok(LaurentSeries {
            var: Variable::z(self.var.order),
            coeffs,
            trunc: self.trunc.map(|n| n.div_euclid(r)),
        })
    }

    /// Pull a series in `z` back up along `z = t^r`.  Exponents that are not
    /// multiples of `r` are known to vanish, so the truncation tightens to
    /// `r·N + r − 1`.
    pub fn substitute_z_to_t(&self) -> Self {
        assert_eq!(self.var.kind, VarKind::Z, "substitute_z_to_t needs a series in z");
        let r = i64::from(self.var.order);
        LaurentSeries {
            var: Variable::t(self.var.order),
            coeffs: self.coeffs.iter().map(|(k, c)| (k * r, c.clone())).collect(),
            trunc: self.trunc.map(|n| n * r + r - 1),
        }
    }

    /// μ_r-weight of the known part: ζ acts by t ↦ ζ^{-1} t, so the term
    /// `c·t^k` has weight `−k mod r`; series in `z` are invariant.
    pub fn mu_r_weight(&self) -> MuWeight {
        let r = i64::from(self.var.order);
        let class_of = |k: i64| -> u32 {
            match self.var.kind {
                VarKind::T => modulo(-k, r) as u32,
                VarKind::Z => 0,
            }
        };
        let mut weight: Option<u32> = None;
        for k in self.coeffs.keys() {
            let w = class_of(*k);
            match weight {
                None => weight = Some(w),
                Some(prev) if prev != w => return MuWeight::NotHomogeneous,
                Some(_) => {}
            }
        }
        match weight {
            None => MuWeight::Any,
            Some(w) => MuWeight::Weight(w),
        }
    }

    /// Equality of the known parts, compared up to the common truncation.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.assert_same_var(other);
        let bound = min_trunc(self.trunc, other.trunc);
        let within = |k: i64| bound.map_or(true, |b| k <= b);
        for (k, c) in &self.coeffs {
            if within(*k) && other.coeffs.get(k).map_or(!c.is_zero(), |d| c != d) {
                return false;
            }
        }
        for (k, c) in &other.coeffs {
            if within(*k) && !self.coeffs.contains_key(k) && !c.is_zero() {
                return false;
            }
        }
        true
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;

    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.assert_same_var(rhs);
        let mut coeffs = self.coeffs.clone();
        for (k, c) in &rhs.coeffs {
            let entry = coeffs.entry(*k).or_insert_with(Rational::zero);
            *entry += c;
        }
        LaurentSeries {
            var: self.var,
            coeffs,
            trunc: min_trunc(self.trunc, rhs.trunc),
        }
        .normalized()
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;

    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self + &(-rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;

    fn neg(self) -> LaurentSeries {
        LaurentSeries {
            var: self.var,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
            trunc: self.trunc,
        }
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;

    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.assert_same_var(rhs);
        let trunc = min_trunc(
            add_trunc(self.trunc, rhs.rule_order()),
            add_trunc(rhs.trunc, self.rule_order()),
        );
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &rhs.coeffs {
                let k = ka + kb;
                if trunc.map_or(true, |n| k <= n) {
                    let entry = coeffs.entry(k).or_insert_with(Rational::zero);
                    *entry += ca * cb;
                }
            }
        }
        LaurentSeries { var: self.var, coeffs, trunc }.normalized()
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.var.symbol();
        let fmt_power = |k: i64| -> String {
            if k == 1 {
                var.to_string()
            } else {
                format!("{var}^{k}")
            }
        };
        let fmt_magnitude = |c: &Rational, k: i64| -> String {
            if k == 0 {
                c.to_string()
            } else if c.is_one() {
                fmt_power(k)
            } else {
                format!("{}*{}", c, fmt_power(k))
            }
        };
        let mut wrote = false;
        for (k, c) in &self.coeffs {
            if !wrote {
                if c.is_negative() {
                    write!(f, "-{}", fmt_magnitude(&-c, *k))?;
                } else {
                    write!(f, "{}", fmt_magnitude(c, *k))?;
                }
            } else if c.is_negative() {
                write!(f, " - {}", fmt_magnitude(&-c, *k))?;
            } else {
                write!(f, " + {}", fmt_magnitude(c, *k))?;
            }
            wrote = true;
        }
        match self.trunc {
            Some(n) => {
                if wrote {
                    write!(f, " + O({})", fmt_power(n + 1))
                } else {
                    write!(f, "O({})", fmt_power(n + 1))
                }
            }
            None => {
                if !wrote {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

/// Error from [`LaurentSeries::parse`]: a 1-based column and a message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesParseError {
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for SeriesParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "col {}: {}", self.col, self.msg)
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src: src.as_bytes(), pos: 0 }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.peek().map_or(false, |c| c == b' ' || c == b'\t') {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> std::result::Result<(), SeriesParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn error(&self, msg: impl Into<String>) -> SeriesParseError {
        SeriesParseError { col: self.col(), msg: msg.into() }
    }

    fn digits(&mut self) -> std::result::Result<&'a str, SeriesParseError> {
        let start = self.pos;
        while self.peek().map_or(false, |c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn integer(&mut self) -> std::result::Result<i64, SeriesParseError> {
        let start = self.col();
        let neg = self.eat(b'-');
        let digits = self.digits()?;
        let value: i64 = digits
            .parse()
            .map_err(|_| SeriesParseError { col: start, msg: "integer out of range".into() })?;
        Ok(if neg { -value } else { value })
    }

    fn rational(&mut self) -> std::result::Result<Rational, SeriesParseError> {
        let numer: BigInt = self.digits()?.parse().unwrap();
        if self.eat(b'/') {
            let col = self.col();
            let denom: BigInt = self.digits()?.parse().unwrap();
            if denom.is_zero() {
                return Err(SeriesParseError { col, msg: "zero denominator".into() });
            }
            Ok(Rational::new(numer, denom))
        } else {
            Ok(Rational::from(numer))
        }
    }
}

impl LaurentSeries {
    /// Parse a series literal such as `1/2*t^-1 + 3*t^2 + O(t^13)`.
    ///
    /// Terms are `c`, `c*v^k`, or `v^k` (`v` alone means `v^1`; a bare `O`
    /// term means the zero series).  `O(v^k)` declares the coefficients at
    /// exponents `≥ k` unknown, i.e. a truncation order of `k − 1`, and must
    /// come last.  The variable letter must match `var`.
    pub fn parse(input: &str, var: Variable) -> std::result::Result<Self, SeriesParseError> {
        let mut cur = Cursor::new(input);
        let sym = var.symbol() as u8;
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        let mut trunc: Option<i64> = None;

        // variable power: `v` or `v^k`; cursor sits on the symbol
        fn power(cur: &mut Cursor, sym: u8) -> std::result::Result<i64, SeriesParseError> {
            let col = cur.col();
            let c = cur.bump().ok_or_else(|| cur.error("expected variable"))?;
            if c != sym {
                return Err(SeriesParseError {
                    col,
                    msg: format!("unexpected variable '{}', expected '{}'", c as char, sym as char),
                });
            }
            if cur.eat(b'^') {
                cur.integer()
            } else {
                Ok(1)
            }
        }

        cur.skip_ws();
        if cur.peek().is_none() {
            return Err(cur.error("empty series"));
        }
        let mut negate = false;
        if cur.eat(b'-') {
            negate = true;
            cur.skip_ws();
        }
        loop {
            if trunc.is_some() {
                return Err(cur.error("the O(..) term must come last"));
            }
            match cur.peek() {
                Some(b'O') => {
                    if negate {
                        return Err(cur.error("an O(..) term cannot be negated"));
                    }
                    cur.bump();
                    cur.expect(b'(')?;
                    cur.skip_ws();
                    let k = power(&mut cur, sym)?;
                    cur.skip_ws();
                    cur.expect(b')')?;
                    trunc = Some(k - 1);
                }
                Some(c) if c.is_ascii_digit() => {
                    let coeff = cur.rational()?;
                    let exponent = {
                        cur.skip_ws();
                        if cur.eat(b'*') {
                            cur.skip_ws();
                            power(&mut cur, sym)?
                        } else {
                            0
                        }
                    };
                    let coeff = if negate { -coeff } else { coeff };
                    *coeffs.entry(exponent).or_insert_with(Rational::zero) += coeff;
                }
                Some(_) => {
                    let exponent = power(&mut cur, sym)?;
                    let coeff = if negate { -Rational::one() } else { Rational::one() };
                    *coeffs.entry(exponent).or_insert_with(Rational::zero) += coeff;
                }
                None => return Err(cur.error("unexpected end of input")),
            }
            cur.skip_ws();
            match cur.peek() {
                None => break,
                Some(b'+') => {
                    cur.bump();
                    negate = false;
                }
                Some(b'-') => {
                    cur.bump();
                    negate = true;
                }
                Some(c) => {
                    return Err(cur.error(format!("unexpected character '{}'", c as char)));
                }
            }
            cur.skip_ws();
            if cur.peek().is_none() {
                return Err(cur.error("dangling sign"));
            }
        }

        if let Some(n) = trunc {
            if let Some((k, c)) = coeffs.iter().rfind(|(_, c)| !c.is_zero()) {
                if *k > n {
                    return Err(SeriesParseError {
                        col: 1,
                        msg: format!(
                            "term {}*{}^{} lies beyond the declared truncation O({}^{})",
                            c,
                            var.symbol(),
                            k,
                            var.symbol(),
                            n + 1
                        ),
                    });
                }
            }
        }
        Ok(LaurentSeries { var, coeffs, trunc }.normalized())
    }
}
