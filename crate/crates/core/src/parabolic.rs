//! The GL_n picture, where everything is an honest matrix.
//!
//! A local datum is a tuple of weights r > p_1 ≥ … ≥ p_n ≥ 0; the gauge
//! g = diag(t^{p_1}, …, t^{p_n}) plays the role of t^{rθ}.  The pushforward
//! of an equivariant matrix form ω across t^r = z is
//!
//!   D = (g^{-1} ω g + g^{-1} g') · t / r  followed by  t^r → z,
//!
//! a logarithmic connection d + D dz/z downstairs whose residue is computable
//! in closed form from finitely many coefficients of ω.  The parabolic
//! residue condition (R_{ab} = δ_{ab} p_a / r whenever p_a ≤ p_b) cuts out
//! exactly the image of the pushforward, and `pullback` inverts it.

use std::sync::Arc;

use num_traits::Zero;

use crate::diagnostics::Diagnosis;
use crate::diagnostics::Verdict;
use crate::element::LieAlgebraElement;
use crate::error::{Error, Result};
use crate::matrix::LaurentMatrix;
use crate::rational::{modulo, rat_int, Rational};
use crate::roots::{Coweight, RootSystem, TypeAVariant};
use crate::series::{LaurentSeries, VarKind};

fn entry_label(prefix: &str, i: usize, j: usize) -> String {
    format!("{prefix}[{}][{}]", i + 1, j + 1)
}

/// Parabolic weights at one orbifold point: r > p_1 ≥ … ≥ p_n ≥ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicLocalDatum {
    r: u32,
    p: Vec<u32>,
}

impl ParabolicLocalDatum {
    pub fn new(r: u32, p: Vec<u32>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidWeights("the order r must be positive".into()));
        }
        if p.is_empty() {
            return Err(Error::InvalidWeights("at least one weight is required".into()));
        }
        if let Some(w) = p.windows(2).find(|w| w[0] < w[1]) {
            return Err(Error::InvalidWeights(format!(
                "weights must be weakly decreasing, found {} before {}",
                w[0], w[1]
            )));
        }
        if p[0] >= r {
            return Err(Error::InvalidWeights(format!(
                "weights must satisfy p_1 <= r - 1, found p_1 = {} with r = {r}",
                p[0]
            )));
        }
        Ok(ParabolicLocalDatum { r, p })
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn weights(&self) -> &[u32] {
        &self.p
    }

    fn weight_i64(&self, i: usize) -> i64 {
        i64::from(self.p[i])
    }

    /// The flag encoded by the weights, as filtration steps (j, p_j / r)
    /// listed from the smallest weight block to the largest.  Each step
    /// records the largest 1-based index of its block.
    pub fn flag(&self) -> Vec<(usize, Rational)> {
        let mut steps = Vec::new();
        let mut j = self.p.len();
        while j > 0 {
            let v = self.p[j - 1];
            let last = j;
            while j > 0 && self.p[j - 1] == v {
                j -= 1;
            }
            steps.push((last, Rational::new(v.into(), self.r.into())));
        }
        steps
    }

    /// The coweight p/r in the diagonal torus of gl_n.
    pub fn theta(&self) -> Coweight {
        let sys = RootSystem::gl(self.n()).expect("n >= 1");
        let comps = self
            .p
            .iter()
            .map(|&w| Rational::new(w.into(), self.r.into()))
            .collect();
        Coweight::new(sys, self.r, comps).expect("p/r clears denominators at r")
    }

    /// The same weights presented with denominator r2.  Fails when some
    /// p_i / r is not expressible over r2.
    pub fn rescaled(&self, r2: u32) -> Result<Self> {
        if r2 == 0 {
            return Err(Error::InvalidWeights("the order r must be positive".into()));
        }
        let mut q = Vec::with_capacity(self.p.len());
        for &w in &self.p {
            let scaled = u64::from(w) * u64::from(r2);
            if scaled % u64::from(self.r) != 0 {
                return Err(Error::InvalidWeights(format!(
                    "weight {w}/{} cannot be written with denominator {r2}",
                    self.r
                )));
            }
            q.push((scaled / u64::from(self.r)) as u32);
        }
        ParabolicLocalDatum::new(r2, q)
    }
}

/// An n×n connection form upstairs, d + ω dt, attached to the local datum
/// it should be equivariant for.
#[derive(Clone, Debug)]
pub struct EquivariantMatrixConnection {
    datum: ParabolicLocalDatum,
    omega: LaurentMatrix,
}

impl EquivariantMatrixConnection {
    pub fn new(datum: ParabolicLocalDatum, omega: LaurentMatrix) -> Self {
        assert_eq!(omega.size(), datum.n(), "matrix size must match the datum");
        assert_eq!(omega.var().kind(), VarKind::T, "equivariant forms live upstairs in t");
        assert_eq!(omega.var().order(), datum.r(), "variable order must match r");
        EquivariantMatrixConnection { datum, omega }
    }

    pub fn datum(&self) -> &ParabolicLocalDatum {
        &self.datum
    }

    pub fn omega(&self) -> &LaurentMatrix {
        &self.omega
    }

    /// μ_r-equivariance for diag(t^{p_i}): entry (i, j) may carry exponents
    /// ≡ p_i − p_j − 1 (mod r) only.  The verdict refers to the stored
    /// coefficient window.
    pub fn check_equivariance(&self) -> Diagnosis {
        let r = i64::from(self.datum.r());
        let n = self.datum.n();
        let mut d = Diagnosis::default();
        for i in 0..n {
            for j in 0..n {
                let class = modulo(self.datum.weight_i64(i) - self.datum.weight_i64(j) - 1, r);
                for (k, c) in self.omega.entry(i, j).terms() {
                    if modulo(k, r) != class {
                        d.violation(
                            entry_label("omega", i, j),
                            k,
                            format!(
                                "coefficient {c} at exponent {k}, equivariance requires exponents = {class} (mod {r})"
                            ),
                        );
                    }
                }
            }
        }
        d
    }

    /// Residue of the pushforward, straight from the coefficients of ω:
    /// (1/r)·[t^{p_i - p_j - 1}] ω_{ij} when p_i > p_j, and δ_{ij} p_i / r
    /// otherwise.
    pub fn residue_closed_form(&self) -> Result<Vec<Vec<Rational>>> {
        let n = self.datum.n();
        let r = self.datum.r();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let pi = self.datum.weight_i64(i);
                let pj = self.datum.weight_i64(j);
                let value = if pi > pj {
                    self.omega.entry(i, j).coeff(pi - pj - 1)? / rat_int(i64::from(r))
                } else if i == j {
                    Rational::new(pi.into(), i64::from(r).into())
                } else {
                    Rational::zero()
                };
                row.push(value);
            }
            rows.push(row);
        }
        Ok(rows)
    }

    /// Gauge by diag(t^{p_i}) and substitute t^r = z.  Requires
    /// equivariance and a pole-free ω.
    pub fn pushforward(&self) -> Result<ParabolicMatrixConnection> {
        let equivariance = self.check_equivariance();
        if equivariance.verdict() == Verdict::Fails {
            return Err(Error::NotEquivariant(equivariance));
        }
        let n = self.datum.n();
        for i in 0..n {
            for j in 0..n {
                for (k, _) in self.omega.entry(i, j).terms() {
                    if k < 0 {
                        return Err(Error::UnexpectedPole {
                            label: entry_label("omega", i, j),
                            exponent: k,
                        });
                    }
                }
            }
        }
        if let Some(nt) = self.omega.truncation() {
            if nt < -1 {
                return Err(Error::TruncationExhausted { exponent: nt + 1, truncation: nt });
            }
        }

        let var = self.omega.var();
        let exps: Vec<i64> = (0..n).map(|i| self.datum.weight_i64(i)).collect();
        let neg: Vec<i64> = exps.iter().map(|e| -e).collect();
        let g = LaurentMatrix::monomial_gauge(var, &exps);
        let g_inv = LaurentMatrix::monomial_gauge(var, &neg);
        let gauged = &(&(&g_inv * &self.omega) * &g) + &(&g_inv * &g.derivative());
        let inv_r = Rational::new(1.into(), i64::from(self.datum.r()).into());
        let d = gauged.shifted(1).scaled(&inv_r).substitute_t_to_z()?;
        ParabolicMatrixConnection::new(self.datum.clone(), d)
    }
}

/// A logarithmic connection d + D dz/z downstairs, with D regular at z = 0,
/// carrying the parabolic weights it is expected to respect.  Construction
/// pins down the residue, so it requires the constant term to be within the
/// known window.
#[derive(Clone, Debug)]
pub struct ParabolicMatrixConnection {
    datum: ParabolicLocalDatum,
    d: LaurentMatrix,
    residue: Vec<Vec<Rational>>,
}

impl ParabolicMatrixConnection {
    pub fn new(datum: ParabolicLocalDatum, d: LaurentMatrix) -> Result<Self> {
        assert_eq!(d.size(), datum.n(), "matrix size must match the datum");
        assert_eq!(d.var().kind(), VarKind::Z, "the connection downstairs lives in z");
        assert_eq!(d.var().order(), datum.r(), "variable order must match r");
        for i in 0..datum.n() {
            for j in 0..datum.n() {
                for (k, _) in d.entry(i, j).terms() {
                    if k < 0 {
                        return Err(Error::UnexpectedPole {
                            label: entry_label("D", i, j),
                            exponent: k,
                        });
                    }
                }
            }
        }
        let residue = d.constant_term()?;
        Ok(ParabolicMatrixConnection { datum, d, residue })
    }

    pub fn datum(&self) -> &ParabolicLocalDatum {
        &self.datum
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.d
    }

    pub fn residue(&self) -> &[Vec<Rational>] {
        &self.residue
    }

    /// The parabolic residue condition: R_{ab} = δ_{ab} p_a / r for every
    /// pair with p_a ≤ p_b.  Entries over the strictly decreasing part of
    /// the weights are unconstrained.  Exact by construction.
    pub fn parabolic_condition(&self) -> Diagnosis {
        let n = self.datum.n();
        let r = i64::from(self.datum.r());
        let mut diag = Diagnosis::default();
        for a in 0..n {
            for b in 0..n {
                if self.datum.p[a] > self.datum.p[b] {
                    continue;
                }
                let want = if a == b {
                    Rational::new(self.datum.weight_i64(a).into(), r.into())
                } else {
                    Rational::zero()
                };
                let got = &self.residue[a][b];
                if got != &want {
                    diag.violation(
                        entry_label("residue", a, b),
                        0,
                        format!("residue entry is {got}, the parabolic structure requires {want}"),
                    );
                }
            }
        }
        diag
    }

    /// Inverts the pushforward: ω_{ij} = (r·D̂_{ij} − δ_{ij} p_i)·t^{p_i − p_j − 1}
    /// with D̂ = D|_{z → t^r}.  Requires the parabolic condition, which is
    /// exactly what keeps the result pole-free.
    pub fn pullback(&self) -> Result<EquivariantMatrixConnection> {
        let condition = self.parabolic_condition();
        if !condition.holds() {
            return Err(Error::ParabolicCondition(condition));
        }
        let n = self.datum.n();
        let r = rat_int(i64::from(self.datum.r()));
        let dhat = self.d.substitute_z_to_t();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut s = dhat.entry(i, j).scaled(&r);
                if i == j {
                    let pi = Rational::new(self.datum.weight_i64(i).into(), 1.into());
                    s = &s - &LaurentSeries::constant(s.var(), pi);
                }
                entries.push(s.shifted(self.datum.weight_i64(i) - self.datum.weight_i64(j) - 1));
            }
        }
        let omega = LaurentMatrix::new(n, entries);
        Ok(EquivariantMatrixConnection::new(self.datum.clone(), omega))
    }
}

/// Is φ a morphism of connections (E, d + source dz/z) → (F, d + target dz/z)?
/// The defining identity is z·φ' + target·φ − φ·source = 0; every stored
/// coefficient of the left side is checked, so the verdict covers the known
/// window and is exact precisely when all three matrices are exact.
pub fn is_connection_morphism(
    phi: &LaurentMatrix,
    source: &LaurentMatrix,
    target: &LaurentMatrix,
) -> Diagnosis {
    assert_eq!(phi.size(), source.size(), "matrix sizes must agree");
    assert_eq!(phi.size(), target.size(), "matrix sizes must agree");
    assert_eq!(phi.var(), source.var(), "variables must agree");
    assert_eq!(phi.var(), target.var(), "variables must agree");
    let residual = &(&phi.derivative().shifted(1) + &(target * phi)) - &(phi * source);
    let mut d = Diagnosis::default();
    for i in 0..phi.size() {
        for j in 0..phi.size() {
            for (k, c) in residual.entry(i, j).terms() {
                d.violation(
                    entry_label("phi", i, j),
                    k,
                    format!("z*phi' + target*phi - phi*source has coefficient {c}"),
                );
            }
        }
    }
    d
}

/// Views an n×n matrix as an element of gl_n: diagonal entries land in the
/// Cartan, entry (i, j) with i ≠ j on the root e_i − e_j.
pub fn matrix_to_element(system: &Arc<RootSystem>, m: &LaurentMatrix) -> Result<LieAlgebraElement> {
    match system.matrix_type() {
        Some((TypeAVariant::Gl, n)) if n == m.size() => {}
        _ => {
            return Err(Error::InvalidRootSystem(format!(
                "expected gl({}) with its matrix realization, found {}",
                m.size(),
                system.name()
            )))
        }
    }
    let n = m.size();
    let cartan = (0..n).map(|i| m.entry(i, i).clone()).collect();
    let mut roots = Vec::new();
    for idx in 0..system.root_count() {
        let (i, j) = system.matrix_position(idx).expect("gl systems carry positions");
        roots.push((idx, m.entry(i, j).clone()));
    }
    LieAlgebraElement::new(system.clone(), m.var(), cartan, roots)
}

/// Inverse of [`matrix_to_element`].
pub fn element_to_matrix(xi: &LieAlgebraElement) -> Result<LaurentMatrix> {
    let system = xi.system();
    let n = match system.matrix_type() {
        Some((TypeAVariant::Gl, n)) => n,
        _ => {
            return Err(Error::InvalidRootSystem(format!(
                "expected a gl system with its matrix realization, found {}",
                system.name()
            )))
        }
    };
    let mut entries: Vec<LaurentSeries> =
        (0..n * n).map(|_| LaurentSeries::zero(xi.var())).collect();
    for i in 0..n {
        entries[i * n + i] = xi.cartan(i).clone();
    }
    for idx in 0..system.root_count() {
        let (i, j) = system.matrix_position(idx).expect("gl systems carry positions");
        entries[i * n + j] = xi.root_coeff_series(idx);
    }
    Ok(LaurentMatrix::new(n, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, rat, rat_int};
    use crate::series::Variable;

    fn series(var: Variable, terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_terms(var, terms.iter().map(|&(k, c)| (k, rat_int(c))))
    }

    fn datum_2x2() -> ParabolicLocalDatum {
        ParabolicLocalDatum::new(2, vec![1, 0]).unwrap()
    }

    #[test]
    fn datum_validation() {
        assert!(ParabolicLocalDatum::new(4, vec![3, 1, 1, 0]).is_ok());
        assert!(matches!(
            ParabolicLocalDatum::new(4, vec![1, 3]),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            ParabolicLocalDatum::new(4, vec![4, 0]),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(ParabolicLocalDatum::new(4, vec![]), Err(Error::InvalidWeights(_))));
    }

    #[test]
    fn flag_steps_walk_the_blocks() {
        let d = ParabolicLocalDatum::new(4, vec![3, 1, 1, 0]).unwrap();
        assert_eq!(
            d.flag(),
            vec![(4, rat_int(0)), (3, rat(1, 4)), (1, rat(3, 4))]
        );
    }

    #[test]
    fn rescaling_preserves_the_weights() {
        let d = datum_2x2();
        let e = d.rescaled(6).unwrap();
        assert_eq!(e.weights(), &[3, 0]);
        assert_eq!(e.theta().components(), d.theta().components());
        assert!(d.rescaled(3).is_err());
    }

    #[test]
    fn pushforward_worked_example() {
        // r = 2, p = (1, 0), omega = [[3t, 1 + t^2], [2, t^3]]
        let d = datum_2x2();
        let v = Variable::t(2);
        let omega = LaurentMatrix::new(
            2,
            vec![
                series(v, &[(1, 3)]),
                series(v, &[(0, 1), (2, 1)]),
                series(v, &[(0, 2)]),
                series(v, &[(3, 1)]),
            ],
        );
        let conn = EquivariantMatrixConnection::new(d, omega);
        assert!(conn.check_equivariance().holds());

        let down = conn.pushforward().unwrap();
        let vz = Variable::z(2);
        let expected = LaurentMatrix::new(
            2,
            vec![
                LaurentSeries::from_terms(vz, [(0, rat(1, 2)), (1, rat(3, 2))]),
                LaurentSeries::from_terms(vz, [(0, rat(1, 2)), (1, rat(1, 2))]),
                LaurentSeries::monomial(vz, rat_int(1), 1),
                LaurentSeries::monomial(vz, rat(1, 2), 2),
            ],
        );
        assert!(down.matrix().eq_up_to_truncation(&expected));

        // residue agrees with the closed form
        let closed = conn.residue_closed_form().unwrap();
        assert_eq!(down.residue(), &closed[..]);
        assert_eq!(closed[0][0], rat(1, 2));
        assert_eq!(closed[0][1], rat(1, 2));
        assert_eq!(closed[1][0], rat_int(0));
        assert_eq!(closed[1][1], rat_int(0));

        // and the parabolic condition holds, so we can pull back
        assert!(down.parabolic_condition().holds());
        let back = down.pullback().unwrap();
        assert!(back.omega().eq_up_to_truncation(conn.omega()));
    }

    #[test]
    fn equivariance_violations_are_located() {
        let d = datum_2x2();
        let v = Variable::t(2);
        // entry (1,2) must have even exponents here; t^1 is wrong
        let omega = LaurentMatrix::new(
            2,
            vec![
                LaurentSeries::zero(v),
                series(v, &[(1, 5)]),
                LaurentSeries::zero(v),
                LaurentSeries::zero(v),
            ],
        );
        let conn = EquivariantMatrixConnection::new(d, omega);
        let diag = conn.check_equivariance();
        assert_eq!(diag.verdict(), Verdict::Fails);
        assert_eq!(diag.violations[0].label, "omega[1][2]");
        assert_eq!(diag.violations[0].exponent, 1);
        assert!(matches!(conn.pushforward(), Err(Error::NotEquivariant(_))));
    }

    #[test]
    fn parabolic_condition_pins_the_residue() {
        let d = datum_2x2();
        let vz = Variable::z(2);
        // D = [[1/2, 0], [1, 0]]: entry (2,1) sits at p_2 <= p_1 and must vanish
        let down = ParabolicMatrixConnection::new(
            d,
            LaurentMatrix::new(
                2,
                vec![
                    LaurentSeries::constant(vz, rat(1, 2)),
                    LaurentSeries::zero(vz),
                    LaurentSeries::constant(vz, rat_int(1)),
                    LaurentSeries::zero(vz),
                ],
            ),
        )
        .unwrap();
        let diag = down.parabolic_condition();
        assert_eq!(diag.verdict(), Verdict::Fails);
        assert_eq!(diag.violations[0].label, "residue[2][1]");
        assert!(matches!(down.pullback(), Err(Error::ParabolicCondition(_))));
    }

    #[test]
    fn morphism_check() {
        let vz = Variable::z(1);
        let id = |c: &str| parse_rational(c).unwrap();
        let phi = LaurentMatrix::new(
            2,
            vec![
                LaurentSeries::constant(vz, id("1")),
                LaurentSeries::monomial(vz, id("1"), 1),
                LaurentSeries::zero(vz),
                LaurentSeries::constant(vz, id("1")),
            ],
        );
        let source = LaurentMatrix::zero(vz, 2);
        let target = LaurentMatrix::new(
            2,
            vec![
                LaurentSeries::zero(vz),
                LaurentSeries::monomial(vz, id("-1"), 1),
                LaurentSeries::zero(vz),
                LaurentSeries::zero(vz),
            ],
        );
        assert!(is_connection_morphism(&phi, &source, &target).holds());

        // phi = diag(z, 1) is not flat from the trivial form to itself
        let skew = LaurentMatrix::monomial_gauge(vz, &[1, 0]);
        let diag = is_connection_morphism(&skew, &source, &source);
        assert_eq!(diag.verdict(), Verdict::Fails);
        assert_eq!(diag.violations[0].label, "phi[1][1]");
        assert_eq!(diag.violations[0].exponent, 1);
    }

    #[test]
    fn gl_bridge_round_trips() {
        let sys = RootSystem::gl(2).unwrap();
        let v = Variable::t(2);
        let m = LaurentMatrix::new(
            2,
            vec![
                series(v, &[(1, 3)]),
                series(v, &[(0, 1), (2, 1)]),
                series(v, &[(0, 2)]),
                series(v, &[(3, 1)]),
            ],
        );
        let xi = matrix_to_element(&sys, &m).unwrap();
        assert_eq!(xi.cartan(0), m.entry(0, 0));
        let back = element_to_matrix(&xi).unwrap();
        assert!(back.eq_up_to_truncation(&m));

        let sl = RootSystem::sl(2).unwrap();
        assert!(matrix_to_element(&sl, &m).is_err());
    }
}
