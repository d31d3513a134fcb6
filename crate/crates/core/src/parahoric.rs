//! Parahoric Lie algebras and logahoric connections on the coarse disc.
//!
//! For a rational coweight θ the parahoric algebra ℘_θ ⊂ g(K), K = ℚ((z)),
//! is cut out by order bounds per coefficient slot: Cartan coefficients lie
//! in A = ℚ[[z]], and the x_α-coefficient lies in z^{m_α}A with
//! m_α = −⌊⟨α, θ⟩⟩⌋.  A logahoric connection is d + ω̃ dz/z with ω̃ ∈ ℘_θ.
//!
//! The residue condition singles out the connections that descend from an
//! equivariant connection upstairs.  It is implemented twice:
//!
//! * by definition — the weight-zero component of ω̃ equals θ;
//! * by pole orders — ω̃ ∈ θ + 𝔱(zA) ⊕ Σ_{⟨α,θ⟩∈ℤ} g_α(z^{1+m_α}A)
//!   ⊕ Σ_{⟨α,θ⟩∉ℤ} g_α(z^{m_α}A).
//!
//! On members of ℘_θ the two agree, including which cases are
//! indeterminate; the test suite enforces this.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::diagnostics::{Diagnosis, Verdict};
use crate::element::LieAlgebraElement;
use crate::error::{Error, Result};
use crate::rational::{to_i64, Rational};
use crate::roots::Coweight;
use crate::series::{LaurentSeries, VarKind};

/// Checks one slot for `ord ≥ bound`, recording violations for known
/// offending terms and an unverified finding when the bound reaches past
/// the truncation order.
fn check_order_bound(series: &LaurentSeries, bound: i64, label: &str, d: &mut Diagnosis) {
    for (k, c) in series.terms() {
        if k < bound {
            d.violation(
                label,
                k,
                format!("coefficient {c} at exponent {k}, but the slot requires order >= {bound}"),
            );
        }
    }
    if let Some(n) = series.truncation() {
        if n < bound - 1 {
            d.unverified(
                label,
                n + 1,
                format!(
                    "exponents {}..={} are beyond the truncation order {}, bound >= {} unverified",
                    n + 1,
                    bound - 1,
                    n,
                    bound
                ),
            );
        }
    }
}

/// The parahoric algebra ℘_θ, presented by its slot order bounds.
#[derive(Clone, Debug)]
pub struct ParahoricAlgebra {
    theta: Coweight,
    orders: Vec<i64>,
}

impl ParahoricAlgebra {
    pub fn new(theta: Coweight) -> Self {
        let orders = (0..theta.system().root_count())
            .map(|idx| theta.m_alpha(idx))
            .collect();
        ParahoricAlgebra { theta, orders }
    }

    pub fn theta(&self) -> &Coweight {
        &self.theta
    }

    /// m_α for every root, in root-index order.  Two coweights with the
    /// same orders map cut out the same parahoric algebra.
    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    fn assert_element(&self, xi: &LieAlgebraElement) {
        assert_eq!(xi.system(), self.theta.system(), "element in a different root system");
        assert_eq!(xi.var().kind(), VarKind::Z, "parahoric membership is checked in z");
        assert_eq!(xi.var().order(), self.theta.r(), "variable order must match r");
    }

    /// Truncation-aware membership test for ξ ∈ ℘_θ.
    pub fn membership(&self, xi: &LieAlgebraElement) -> Diagnosis {
        self.assert_element(xi);
        let sys = self.theta.system();
        let mut d = Diagnosis::default();
        for m in 0..sys.cartan_dim() {
            check_order_bound(xi.cartan(m), 0, &sys.cartan_label(m), &mut d);
        }
        for idx in 0..sys.root_count() {
            let s = xi.root_coeff_series(idx);
            check_order_bound(&s, self.orders[idx], &sys.root_label(idx), &mut d);
        }
        d
    }

    /// Basis labels of the weight-zero piece g(K)_0^θ together with the
    /// z-exponent each basis vector carries.  Finite by construction:
    /// h_m z^0 for every Cartan generator and x_α z^{−⟨α,θ⟩} for the roots
    /// with integral pairing.
    pub fn weight_zero_basis(&self) -> Vec<(String, i64)> {
        let sys = self.theta.system();
        let mut basis = Vec::new();
        for m in 0..sys.cartan_dim() {
            basis.push((sys.cartan_label(m), 0));
        }
        for idx in 0..sys.root_count() {
            if let Some(p) = to_i64(&self.theta.pairing(idx)) {
                basis.push((sys.root_label(idx), -p));
            }
        }
        basis
    }
}

/// Is ξ contained in the weight-λ piece g(K)_λ^θ = {Σ ξ_i z^i : ξ_i ∈
/// g_{λ−i}}?  The verdict refers to the known coefficients: a term h_m z^k
/// is allowed only at k = λ, and x_α z^k only at k = λ − ⟨α, θ⟩.
pub fn weight_piece_membership(theta: &Coweight, xi: &LieAlgebraElement, lambda: &Rational) -> bool {
    let sys = theta.system();
    assert_eq!(xi.system(), sys);
    let lambda_int = to_i64(lambda);
    for m in 0..sys.cartan_dim() {
        for (k, _) in xi.cartan(m).terms() {
            if lambda_int != Some(k) {
                return false;
            }
        }
    }
    for (idx, s) in xi.root_terms() {
        let allowed = to_i64(&(lambda - theta.pairing(idx)));
        for (k, _) in s.terms() {
            if allowed != Some(k) {
                return false;
            }
        }
    }
    true
}

/// Projection of ξ onto the weight-zero piece: the Cartan constant terms
/// plus, for each root with integral pairing, the coefficient of
/// z^{−⟨α,θ⟩}.  Errors when a required coefficient lies past the
/// truncation order.
pub fn weight_zero_projection(theta: &Coweight, xi: &LieAlgebraElement) -> Result<LieAlgebraElement> {
    let sys = theta.system();
    assert_eq!(xi.system(), sys);
    let var = xi.var();
    let mut cartan = Vec::with_capacity(sys.cartan_dim());
    for m in 0..sys.cartan_dim() {
        cartan.push(LaurentSeries::constant(var, xi.cartan(m).coeff(0)?));
    }
    let mut roots = Vec::new();
    for idx in 0..sys.root_count() {
        if let Some(p) = to_i64(&theta.pairing(idx)) {
            let c = xi.root_coeff_series(idx).coeff(-p)?;
            if !c.is_zero() {
                roots.push((idx, LaurentSeries::monomial(var, c, -p)));
            }
        }
    }
    LieAlgebraElement::new(sys.clone(), var, cartan, roots)
}

/// Residue condition, definition route: the weight-zero component of ω̃
/// must be θ itself.  Assumes ω̃ ∈ ℘_θ.
pub fn residue_condition_projection(theta: &Coweight, omega: &LieAlgebraElement) -> Diagnosis {
    let sys = theta.system();
    let mut d = Diagnosis::default();
    // Each slot is judged on its own: a known-wrong coefficient is a
    // violation even when some other slot cannot be read off.
    for m in 0..sys.cartan_dim() {
        let want = &theta.components()[m];
        match omega.cartan(m).coeff(0) {
            Ok(got) => {
                if &got != want {
                    d.violation(
                        sys.cartan_label(m),
                        0,
                        format!("weight-zero component is {got}, the residue condition requires {want}"),
                    );
                }
            }
            Err(_) => {
                let n = omega.cartan(m).truncation().unwrap();
                d.unverified(
                    sys.cartan_label(m),
                    0,
                    format!("constant term lies beyond the truncation order {n}"),
                );
            }
        }
    }
    for idx in 0..sys.root_count() {
        if let Some(p) = to_i64(&theta.pairing(idx)) {
            let s = omega.root_coeff_series(idx);
            match s.coeff(-p) {
                Ok(c) => {
                    if !c.is_zero() {
                        d.violation(
                            sys.root_label(idx),
                            -p,
                            format!("weight-zero component must vanish, found {c}"),
                        );
                    }
                }
                Err(_) => {
                    let n = s.truncation().unwrap();
                    d.unverified(
                        sys.root_label(idx),
                        -p,
                        format!("weight-zero coefficient lies beyond the truncation order {n}"),
                    );
                }
            }
        }
    }
    d
}

/// Residue condition, pole-order route: ω̃ − θ must have Cartan order ≥ 1,
/// and the x_α-coefficient order ≥ 1 + m_α for integral ⟨α, θ⟩, ≥ m_α
/// otherwise.
pub fn residue_condition_pole_orders(theta: &Coweight, omega: &LieAlgebraElement) -> Diagnosis {
    let sys = theta.system();
    let mut d = Diagnosis::default();
    for m in 0..sys.cartan_dim() {
        let shifted = omega.cartan(m)
            - &LaurentSeries::constant(omega.var(), theta.components()[m].clone());
        check_order_bound(&shifted, 1, &sys.cartan_label(m), &mut d);
    }
    for idx in 0..sys.root_count() {
        let bound = theta.m_alpha(idx) + i64::from(theta.is_integral_pairing(idx));
        let s = omega.root_coeff_series(idx);
        check_order_bound(&s, bound, &sys.root_label(idx), &mut d);
    }
    d
}

/// A logarithmic connection d + ω̃ dz/z with ω̃ ∈ ℘_θ.  Construction
/// requires definitive membership: a violation or an indeterminate check is
/// an error, never a silently accepted connection.
#[derive(Clone, Debug)]
pub struct LogahoricConnection {
    algebra: ParahoricAlgebra,
    omega: LieAlgebraElement,
}

impl LogahoricConnection {
    pub fn new(theta: Coweight, omega: LieAlgebraElement) -> Result<Self> {
        let algebra = ParahoricAlgebra::new(theta);
        let membership = algebra.membership(&omega);
        match membership.verdict() {
            Verdict::Holds => Ok(LogahoricConnection { algebra, omega }),
            Verdict::Fails => Err(Error::NotParahoric(membership)),
            Verdict::Indeterminate => {
                let first = &membership.unverified[0];
                Err(Error::TruncationExhausted {
                    exponent: first.exponent,
                    truncation: omega.truncation().unwrap_or(i64::MAX),
                })
            }
        }
    }

    pub fn algebra(&self) -> &ParahoricAlgebra {
        &self.algebra
    }

    pub fn theta(&self) -> &Coweight {
        self.algebra.theta()
    }

    pub fn omega(&self) -> &LieAlgebraElement {
        &self.omega
    }

    /// The residue condition (definition route).
    pub fn residue_condition(&self) -> Diagnosis {
        residue_condition_projection(self.theta(), &self.omega)
    }

    /// The residue condition via the explicit pole-order bounds.
    pub fn residue_condition_pole_orders(&self) -> Diagnosis {
        residue_condition_pole_orders(self.theta(), &self.omega)
    }

    /// Human-readable one-line summary of the underlying data.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        let theta = self.theta();
        let comps: Vec<String> = theta.components().iter().map(|c| c.to_string()).collect();
        let _ = write!(
            s,
            "logahoric connection over {} with theta = [{}], r = {}",
            theta.system().name(),
            comps.join(", "),
            theta.r()
        );
        s
    }
}

/// Does the element lie in a single weight piece?  Returns the weight when
/// it does (the zero element reports weight 0).
pub fn homogeneous_weight(theta: &Coweight, xi: &LieAlgebraElement) -> Option<Rational> {
    let sys = theta.system();
    let mut weight: Option<Rational> = None;
    let mut merge = |w: Rational| -> bool {
        match &weight {
            None => {
                weight = Some(w);
                true
            }
            Some(prev) => prev == &w,
        }
    };
    for m in 0..sys.cartan_dim() {
        for (k, _) in xi.cartan(m).terms() {
            if !merge(Rational::from_integer(k.into())) {
                return None;
            }
        }
    }
    for (idx, s) in xi.root_terms() {
        for (k, _) in s.terms() {
            if !merge(theta.pairing(idx) + Rational::from_integer(k.into())) {
                return None;
            }
        }
    }
    Some(weight.unwrap_or_else(Rational::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::roots::RootSystem;
    use crate::series::Variable;
    use std::sync::Arc;

    fn sl2_half() -> (Arc<RootSystem>, Coweight) {
        let sys = RootSystem::sl(2).unwrap();
        let theta = Coweight::new(sys.clone(), 2, vec![rat(1, 2)]).unwrap();
        (sys, theta)
    }

    fn elt(
        sys: &Arc<RootSystem>,
        h: &[(i64, Rational)],
        e: &[(i64, Rational)],
        f: &[(i64, Rational)],
    ) -> LieAlgebraElement {
        let v = Variable::z(2);
        let mk = |terms: &[(i64, Rational)]| LaurentSeries::from_terms(v, terms.iter().cloned());
        LieAlgebraElement::new(sys.clone(), v, vec![mk(h)], [(0, mk(e)), (1, mk(f))]).unwrap()
    }

    #[test]
    fn membership_bounds_for_the_half_coweight() {
        let (sys, theta) = sl2_half();
        let p = ParahoricAlgebra::new(theta);
        // <alpha, theta> = 1: m_alpha = -1, m_{-alpha} = 1
        assert_eq!(p.orders(), &[-1, 1]);

        // x_alpha z^{-1} is allowed
        let xi = elt(&sys, &[], &[(-1, rat_int(1))], &[]);
        assert_eq!(p.membership(&xi).verdict(), Verdict::Holds);

        // x_{-alpha} needs order >= 1, so a constant term violates
        let xi = elt(&sys, &[], &[], &[(0, rat_int(1))]);
        let d = p.membership(&xi);
        assert_eq!(d.verdict(), Verdict::Fails);
        assert_eq!(d.violations[0].label, "x[[-2]]");
        assert_eq!(d.violations[0].exponent, 0);
    }

    #[test]
    fn short_truncation_is_indeterminate_not_false() {
        let (sys, theta) = sl2_half();
        let p = ParahoricAlgebra::new(theta);
        let v = Variable::z(2);
        // x_{-alpha} slot known only up to z^{-1}: the bound ord >= 1
        // cannot be verified there, while the absent x_alpha slot is an
        // exact zero and passes
        let xi = LieAlgebraElement::new(
            sys,
            v,
            vec![LaurentSeries::zero_truncated(v, -1)],
            [(1, LaurentSeries::zero_truncated(v, -1))],
        )
        .unwrap();
        let d = p.membership(&xi);
        assert_eq!(d.verdict(), Verdict::Indeterminate);
        assert_eq!(d.unverified.len(), 1);
        assert_eq!(d.unverified[0].label, "x[[-2]]");
    }

    #[test]
    fn weight_pieces() {
        let (sys, theta) = sl2_half();
        // x_alpha z^{-1} has weight <alpha,theta> - 1 = 0
        let xi = elt(&sys, &[], &[(-1, rat_int(1))], &[]);
        assert!(weight_piece_membership(&theta, &xi, &Rational::zero()));
        assert!(!weight_piece_membership(&theta, &xi, &rat_int(1)));
        assert_eq!(homogeneous_weight(&theta, &xi), Some(Rational::zero()));

        // h z^1 + x_alpha z^0 has weights {1} on both slots
        let xi = elt(&sys, &[(1, rat_int(1))], &[(0, rat_int(1))], &[]);
        assert!(weight_piece_membership(&theta, &xi, &rat_int(1)));
        assert_eq!(homogeneous_weight(&theta, &xi), Some(rat_int(1)));

        // mixed weights
        let xi = elt(&sys, &[(0, rat_int(1))], &[(0, rat_int(1))], &[]);
        assert_eq!(homogeneous_weight(&theta, &xi), None);
    }

    #[test]
    fn weight_zero_basis_is_finite_and_explicit() {
        let (_, theta) = sl2_half();
        let p = ParahoricAlgebra::new(theta);
        // only the Cartan: both pairings are integral here (±1)
        assert_eq!(
            p.weight_zero_basis(),
            vec![
                ("h[1]".to_string(), 0),
                ("x[[2]]".to_string(), -1),
                ("x[[-2]]".to_string(), 1)
            ]
        );
    }

    #[test]
    fn residue_condition_examples() {
        let (sys, theta) = sl2_half();

        // theta + x_{-alpha} z^2 passes (bound on x_{-alpha} is 1 + m = 2)
        let good = elt(&sys, &[(0, rat(1, 2))], &[], &[(2, rat_int(5))]);
        assert_eq!(residue_condition_projection(&theta, &good).verdict(), Verdict::Holds);
        assert_eq!(residue_condition_pole_orders(&theta, &good).verdict(), Verdict::Holds);

        // theta + x_{-alpha} z^1 fails on both routes
        let bad = elt(&sys, &[(0, rat(1, 2))], &[], &[(1, rat_int(5))]);
        let d1 = residue_condition_projection(&theta, &bad);
        let d2 = residue_condition_pole_orders(&theta, &bad);
        assert_eq!(d1.verdict(), Verdict::Fails);
        assert_eq!(d2.verdict(), Verdict::Fails);
        assert_eq!(d1.violations[0].label, "x[[-2]]");
        assert_eq!(d1.violations[0].exponent, 1);

        // wrong Cartan residue
        let bad = elt(&sys, &[(0, rat(1, 3))], &[], &[]);
        assert_eq!(residue_condition_projection(&theta, &bad).verdict(), Verdict::Fails);
        assert_eq!(residue_condition_pole_orders(&theta, &bad).verdict(), Verdict::Fails);
    }

    #[test]
    fn connection_construction_enforces_membership() {
        let (sys, theta) = sl2_half();
        let inside = elt(&sys, &[(0, rat(1, 2))], &[(-1, rat_int(3))], &[(1, rat_int(1))]);
        assert!(LogahoricConnection::new(theta.clone(), inside).is_ok());

        let outside = elt(&sys, &[], &[], &[(0, rat_int(1))]);
        match LogahoricConnection::new(theta, outside) {
            Err(Error::NotParahoric(_)) => {}
            other => panic!("expected NotParahoric, got {other:?}"),
        }
    }
}
