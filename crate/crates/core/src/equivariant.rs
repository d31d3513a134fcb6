//! Equivariant connections on the ramified cover and the gauge transform
//! that descends them to logahoric connections downstairs.
//!
//! Upstairs lives d + ω dt/t with ω ∈ g(ℚ[[t]]).  The μ_r-action sends
//! t ↦ ζ^{-1} t and acts on g through θ, so invariance is a congruence on
//! exponents, slot by slot:
//!
//! * Cartan coefficients:  k ≡ −1 (mod r);
//! * x_α-coefficients:     k ≡ r⟨α, θ⟩ − 1 (mod r).
//!
//! The gauge transform by t^θ followed by t^r = z sends an invariant,
//! pole-free ω to ω̃ ∈ ℘_θ satisfying the residue condition, and is
//! inverted exactly by the reverse substitutions.  Both directions are
//! exact on coefficients; truncation orders are tracked through.

use std::fmt;

use crate::diagnostics::{Diagnosis, Verdict};
use crate::element::{LieAlgebraElement, Slot};
use crate::error::{Error, Result};
use crate::parahoric::LogahoricConnection;
use crate::rational::{modulo, rat_int, to_i64, Rational};
use crate::roots::Coweight;
use crate::series::{LaurentSeries, VarKind};

/// The residue class in [0, r) that equivariance forces on a slot.
pub(crate) fn forced_class(theta: &Coweight, slot: Slot) -> i64 {
    let r = i64::from(theta.r());
    match slot {
        Slot::Cartan(_) => modulo(-1, r),
        Slot::Root(idx) => {
            let scaled = theta.pairing(idx) * rat_int(r);
            let p = to_i64(&scaled).expect("r * pairing is integral");
            modulo(p - 1, r)
        }
    }
}

/// Connection form upstairs, attached to the coweight it is expected to be
/// equivariant for.  Construction does not enforce invariance — that is a
/// checkable property, see [`EquivariantConnection::check_invariance`].
#[derive(Clone, Debug)]
pub struct EquivariantConnection {
    theta: Coweight,
    omega: LieAlgebraElement,
}

impl EquivariantConnection {
    pub fn new(theta: Coweight, omega: LieAlgebraElement) -> Self {
        assert_eq!(omega.system(), theta.system(), "element in a different root system");
        assert_eq!(omega.var().kind(), VarKind::T, "equivariant forms live upstairs in t");
        assert_eq!(omega.var().order(), theta.r(), "variable order must match r");
        EquivariantConnection { theta, omega }
    }

    pub fn theta(&self) -> &Coweight {
        &self.theta
    }

    pub fn omega(&self) -> &LieAlgebraElement {
        &self.omega
    }

    pub fn r(&self) -> u32 {
        self.theta.r()
    }

    /// Checks the invariance congruences on every known coefficient.  The
    /// verdict refers to the stored window; exponents beyond the truncation
    /// order are out of scope by construction.
    pub fn check_invariance(&self) -> Diagnosis {
        let sys = self.theta.system();
        let r = i64::from(self.theta.r());
        let mut d = Diagnosis::default();
        let mut scan = |slot: Slot, series: &LaurentSeries| {
            let class = forced_class(&self.theta, slot);
            for (k, c) in series.terms() {
                if modulo(k, r) != class {
                    d.violation(
                        slot.label(sys),
                        k,
                        format!(
                            "coefficient {c} at exponent {k}, invariance requires exponents = {class} (mod {r})"
                        ),
                    );
                }
            }
        };
        for m in 0..sys.cartan_dim() {
            scan(Slot::Cartan(m), self.omega.cartan(m));
        }
        for (idx, s) in self.omega.root_terms() {
            scan(Slot::Root(idx), s);
        }
        d
    }

    /// Gauge by t^θ and substitute t^r = z.  Requires invariance and a
    /// pole-free form; the image is a logahoric connection satisfying the
    /// residue condition.
    pub fn gauge_to_logahoric(&self) -> Result<LogahoricConnection> {
        let invariance = self.check_invariance();
        if invariance.verdict() == Verdict::Fails {
            return Err(Error::NotEquivariant(invariance));
        }
        let sys = self.theta.system();
        for m in 0..sys.cartan_dim() {
            require_pole_free(self.omega.cartan(m), &sys.cartan_label(m))?;
        }
        for (idx, s) in self.omega.root_terms() {
            require_pole_free(s, &sys.root_label(idx))?;
        }

        let r = i64::from(self.theta.r());
        let inv_r = Rational::new(1.into(), r.into());
        let theta = &self.theta;
        let downstairs = self.omega.map_coefficients(|slot, s| {
            let shift = match slot {
                Slot::Cartan(_) => 1,
                Slot::Root(idx) => {
                    let p = to_i64(&(theta.pairing(idx) * rat_int(r))).expect("integral");
                    1 - p
                }
            };
            let mut image = s.shifted(shift).scaled(&inv_r).substitute_t_to_z()?;
            if let Slot::Cartan(m) = slot {
                image = &image + &LaurentSeries::constant(image.var(), theta.components()[m].clone());
            }
            Ok(image)
        })?;
        LogahoricConnection::new(self.theta.clone(), downstairs)
    }
}

fn require_pole_free(series: &LaurentSeries, label: &str) -> Result<()> {
    for (k, _) in series.terms() {
        if k < 0 {
            return Err(Error::UnexpectedPole { label: label.to_string(), exponent: k });
        }
    }
    if let Some(n) = series.truncation() {
        if n < -1 {
            return Err(Error::TruncationExhausted { exponent: n + 1, truncation: n });
        }
    }
    Ok(())
}

/// Inverse gauge transform: lift a logahoric connection satisfying the
/// residue condition back to the invariant form upstairs.
pub fn from_logahoric(conn: &LogahoricConnection) -> Result<EquivariantConnection> {
    let residue = conn.residue_condition();
    match residue.verdict() {
        Verdict::Holds => {}
        Verdict::Fails => return Err(Error::ResidueCondition(residue)),
        Verdict::Indeterminate => {
            let first = &residue.unverified[0];
            return Err(Error::TruncationExhausted {
                exponent: first.exponent,
                truncation: conn.omega().truncation().unwrap_or(i64::MAX),
            });
        }
    }
    let theta = conn.theta().clone();
    let r = i64::from(theta.r());
    let r_scale = rat_int(r);
    let upstairs = conn.omega().map_coefficients(|slot, s| {
        let lifted = match slot {
            Slot::Cartan(m) => {
                let centred =
                    s - &LaurentSeries::constant(s.var(), theta.components()[m].clone());
                centred.substitute_z_to_t().scaled(&r_scale).shifted(-1)
            }
            Slot::Root(idx) => {
                let p = to_i64(&(theta.pairing(idx) * rat_int(r))).expect("integral");
                s.substitute_z_to_t().scaled(&r_scale).shifted(p - 1)
            }
        };
        Ok(lifted)
    })?;
    Ok(EquivariantConnection::new(theta, upstairs))
}

/// Residue exponents of the μ_r-action cut out by θ: the class of rθ_m
/// modulo r for each Cartan coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalType {
    pub r: u32,
    pub exponents: Vec<u32>,
}

pub fn local_type(theta: &Coweight) -> LocalType {
    let r = i64::from(theta.r());
    let exponents = theta
        .components()
        .iter()
        .map(|c| {
            let scaled = c * rat_int(r);
            let p = to_i64(&scaled).expect("r * theta is integral");
            modulo(p, r) as u32
        })
        .collect();
    LocalType { r: theta.r(), exponents }
}

impl fmt::Display for LocalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|e| e.to_string()).collect();
        write!(f, "r = {}, exponents [{}]", self.r, parts.join(", "))
    }
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

    fn upstairs(
        sys: &Arc<RootSystem>,
        h: &[(i64, Rational)],
        e: &[(i64, Rational)],
        f: &[(i64, Rational)],
    ) -> LieAlgebraElement {
        let v = Variable::t(2);
        let mk = |terms: &[(i64, Rational)]| LaurentSeries::from_terms(v, terms.iter().cloned());
        LieAlgebraElement::new(sys.clone(), v, vec![mk(h)], [(0, mk(e)), (1, mk(f))]).unwrap()
    }

    #[test]
    fn invariance_congruences() {
        let (sys, theta) = sl2_half();
        // <alpha,theta> = 1, r = 2: x_alpha exponents must be odd (2*1-1 = 1 mod 2),
        // x_{-alpha} exponents odd too, Cartan exponents odd.
        let good = upstairs(
            &sys,
            &[(1, rat_int(2))],
            &[(1, rat_int(1)), (3, rat_int(4))],
            &[(3, rat_int(1))],
        );
        let conn = EquivariantConnection::new(theta.clone(), good);
        assert_eq!(conn.check_invariance().verdict(), Verdict::Holds);

        let bad = upstairs(&sys, &[], &[(2, rat_int(1))], &[]);
        let conn = EquivariantConnection::new(theta, bad);
        let d = conn.check_invariance();
        assert_eq!(d.verdict(), Verdict::Fails);
        assert_eq!(d.violations[0].label, "x[[2]]");
        assert_eq!(d.violations[0].exponent, 2);
    }

    #[test]
    fn gauge_matches_the_worked_example() {
        // omega = x_{-alpha} t^3 maps to theta + (1/2) x_{-alpha} z^3
        let (sys, theta) = sl2_half();
        let omega = upstairs(&sys, &[], &[], &[(3, rat_int(1))]);
        let conn = EquivariantConnection::new(theta.clone(), omega.clone());
        let down = conn.gauge_to_logahoric().unwrap();

        let v = Variable::z(2);
        let expected = LieAlgebraElement::new(
            sys,
            v,
            vec![LaurentSeries::constant(v, rat(1, 2))],
            [(1, LaurentSeries::monomial(v, rat(1, 2), 3))],
        )
        .unwrap();
        assert!(down.omega().eq_up_to_truncation(&expected));
        assert_eq!(down.residue_condition().verdict(), Verdict::Holds);
        assert_eq!(down.residue_condition_pole_orders().verdict(), Verdict::Holds);

        // and back
        let lifted = from_logahoric(&down).unwrap();
        assert!(lifted.omega().eq_up_to_truncation(&omega));
    }

    #[test]
    fn gauge_rejects_poles_and_broken_congruences() {
        let (sys, theta) = sl2_half();

        let pole = upstairs(&sys, &[(-1, rat_int(1))], &[], &[]);
        let conn = EquivariantConnection::new(theta.clone(), pole);
        match conn.gauge_to_logahoric() {
            Err(Error::UnexpectedPole { label, exponent }) => {
                assert_eq!(label, "h[1]");
                assert_eq!(exponent, -1);
            }
            other => panic!("expected UnexpectedPole, got {other:?}"),
        }

        let skew = upstairs(&sys, &[(0, rat_int(1))], &[], &[]);
        let conn = EquivariantConnection::new(theta, skew);
        assert!(matches!(conn.gauge_to_logahoric(), Err(Error::NotEquivariant(_))));
    }

    #[test]
    fn truncated_round_trip_preserves_known_coefficients() {
        let (sys, theta) = sl2_half();
        let v = Variable::t(2);
        let h = LaurentSeries::from_terms(v, [(1, rat_int(3)), (5, rat(2, 7))]).truncated(7);
        let e = LaurentSeries::from_terms(v, [(1, rat(1, 2))]).truncated(7);
        let omega =
            LieAlgebraElement::new(sys, v, vec![h], [(0, e)]).unwrap();
        let conn = EquivariantConnection::new(theta, omega.clone());
        let down = conn.gauge_to_logahoric().unwrap();
        let back = from_logahoric(&down).unwrap();
        assert!(back.omega().eq_up_to_truncation(&omega));
        assert!(back.omega().truncation().is_some());
    }

    #[test]
    fn lift_requires_the_residue_condition() {
        let (sys, theta) = sl2_half();
        let v = Variable::z(2);
        // theta + x_{-alpha} z: in the parahoric algebra, but the residue
        // condition demands order >= 2 on that slot.
        let omega = LieAlgebraElement::new(
            sys,
            v,
            vec![LaurentSeries::constant(v, rat(1, 2))],
            [(1, LaurentSeries::monomial(v, rat_int(1), 1))],
        )
        .unwrap();
        let down = LogahoricConnection::new(theta, omega).unwrap();
        assert!(matches!(from_logahoric(&down), Err(Error::ResidueCondition(_))));
    }

    #[test]
    fn local_type_reads_off_theta() {
        let (_, theta) = sl2_half();
        let lt = local_type(&theta);
        assert_eq!(lt, LocalType { r: 2, exponents: vec![1] });
        assert_eq!(lt.to_string(), "r = 2, exponents [1]");
    }
}
