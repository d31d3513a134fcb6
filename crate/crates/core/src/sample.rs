//! Seeded sample data.  Every generator is a pure function of the RNG
//! state, so a failing test reproduces from its seed.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::element::{LieAlgebraElement, Slot};
use crate::equivariant::forced_class;
use crate::matrix::LaurentMatrix;
use crate::parabolic::ParabolicLocalDatum;
use crate::rational::{modulo, rat, Rational};
use crate::roots::{Coweight, RootSystem};
use crate::series::{LaurentSeries, Variable};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational, possibly zero.
pub fn rational(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

pub fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    let magnitude: i64 = rng.gen_range(1..=9);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(sign * magnitude, rng.gen_range(1..=4))
}

/// Exact series supported in [lo, hi], each exponent filled with
/// probability 0.6.
pub fn series_window(rng: &mut impl Rng, var: Variable, lo: i64, hi: i64) -> LaurentSeries {
    let mut terms = Vec::new();
    for k in lo..=hi {
        if rng.gen_bool(0.6) {
            terms.push((k, nonzero_rational(rng)));
        }
    }
    LaurentSeries::from_terms(var, terms)
}

/// Exact series supported on the congruence class `class` (mod r) within
/// [class, max_exp].
fn class_window(rng: &mut impl Rng, var: Variable, class: i64, r: i64, max_exp: i64) -> LaurentSeries {
    let mut terms = Vec::new();
    let mut k = class;
    while k <= max_exp {
        if rng.gen_bool(0.7) {
            terms.push((k, nonzero_rational(rng)));
        }
        k += r;
    }
    LaurentSeries::from_terms(var, terms)
}

/// Random coweight with denominator r and components in [-2, 2].
pub fn coweight(rng: &mut impl Rng, system: &Arc<RootSystem>, r: u32) -> Coweight {
    let bound = 2 * i64::from(r);
    let nums: Vec<i64> =
        (0..system.cartan_dim()).map(|_| rng.gen_range(-bound..=bound)).collect();
    Coweight::from_numerators(system.clone(), r, &nums).expect("numerators over r")
}

/// Exact element of ℘_θ: every slot is filled within `depth` exponents of
/// its order bound.
pub fn parahoric_element(rng: &mut impl Rng, theta: &Coweight, depth: i64) -> LieAlgebraElement {
    let sys = theta.system();
    let var = Variable::z(theta.r());
    let cartan = (0..sys.cartan_dim()).map(|_| series_window(rng, var, 0, depth)).collect();
    let roots: Vec<(usize, LaurentSeries)> = (0..sys.root_count())
        .map(|idx| {
            let m = theta.m_alpha(idx);
            (idx, series_window(rng, var, m, m + depth))
        })
        .collect();
    LieAlgebraElement::new(sys.clone(), var, cartan, roots).expect("windows respect the bounds")
}

/// Exact element of ℘_θ satisfying the residue condition: θ plus strictly
/// higher-order tails on every slot.
pub fn residue_flat_element(rng: &mut impl Rng, theta: &Coweight, depth: i64) -> LieAlgebraElement {
    let sys = theta.system();
    let var = Variable::z(theta.r());
    let cartan = (0..sys.cartan_dim())
        .map(|m| {
            let tail = series_window(rng, var, 1, depth.max(1));
            &tail + &LaurentSeries::constant(var, theta.components()[m].clone())
        })
        .collect();
    let roots: Vec<(usize, LaurentSeries)> = (0..sys.root_count())
        .map(|idx| {
            let bound = theta.m_alpha(idx) + i64::from(theta.is_integral_pairing(idx));
            (idx, series_window(rng, var, bound, bound + depth))
        })
        .collect();
    LieAlgebraElement::new(sys.clone(), var, cartan, roots).expect("windows respect the bounds")
}

/// Exact invariant, pole-free form upstairs: every slot supported on its
/// forced congruence class within [0, max_exp].
pub fn invariant_form(rng: &mut impl Rng, theta: &Coweight, max_exp: i64) -> LieAlgebraElement {
    let sys = theta.system();
    let r = i64::from(theta.r());
    let var = Variable::t(theta.r());
    let cartan = (0..sys.cartan_dim())
        .map(|m| class_window(rng, var, forced_class(theta, Slot::Cartan(m)), r, max_exp))
        .collect();
    let roots: Vec<(usize, LaurentSeries)> = (0..sys.root_count())
        .map(|idx| (idx, class_window(rng, var, forced_class(theta, Slot::Root(idx)), r, max_exp)))
        .collect();
    LieAlgebraElement::new(sys.clone(), var, cartan, roots).expect("slots are well-formed")
}

/// Exact equivariant pole-free matrix form upstairs for the given datum.
pub fn equivariant_matrix(
    rng: &mut impl Rng,
    datum: &ParabolicLocalDatum,
    max_exp: i64,
) -> LaurentMatrix {
    let r = i64::from(datum.r());
    let var = Variable::t(datum.r());
    let n = datum.n();
    let p = datum.weights();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let class = modulo(i64::from(p[i]) - i64::from(p[j]) - 1, r);
            entries.push(class_window(rng, var, class, r, max_exp));
        }
    }
    LaurentMatrix::new(n, entries)
}

/// Exact matrix form downstairs satisfying the parabolic residue condition.
pub fn parabolic_matrix(
    rng: &mut impl Rng,
    datum: &ParabolicLocalDatum,
    max_exp: i64,
) -> LaurentMatrix {
    let var = Variable::z(datum.r());
    let n = datum.n();
    let p = datum.weights();
    let r = i64::from(datum.r());
    let mut entries = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let s = if p[a] > p[b] {
                series_window(rng, var, 0, max_exp)
            } else if a == b {
                let tail = series_window(rng, var, 1, max_exp.max(1));
                &tail + &LaurentSeries::constant(var, rat(i64::from(p[a]), r))
            } else {
                series_window(rng, var, 1, max_exp.max(1))
            };
            entries.push(s);
        }
    }
    LaurentMatrix::new(n, entries)
}

/// Random weights for given n and r.
pub fn random_datum(rng: &mut impl Rng, n: usize, r: u32) -> ParabolicLocalDatum {
    let mut p: Vec<u32> = (0..n).map(|_| rng.gen_range(0..r)).collect();
    p.sort_unstable_by(|a, b| b.cmp(a));
    ParabolicLocalDatum::new(r, p).expect("sorted weights below r")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::EquivariantConnection;
    use crate::parabolic::ParabolicMatrixConnection;
    use crate::parahoric::ParahoricAlgebra;

    #[test]
    fn generators_are_deterministic() {
        let sys = RootSystem::sl(3).unwrap();
        let mut a = rng(7);
        let mut b = rng(7);
        let ta = coweight(&mut a, &sys, 4);
        let tb = coweight(&mut b, &sys, 4);
        assert_eq!(ta.components(), tb.components());
        let xa = parahoric_element(&mut a, &ta, 5);
        let xb = parahoric_element(&mut b, &tb, 5);
        assert!(xa.eq_up_to_truncation(&xb));
        assert_eq!(xa.to_string(), xb.to_string());
    }

    #[test]
    fn sampled_objects_satisfy_their_contracts() {
        let sys = RootSystem::sl(2).unwrap();
        let mut g = rng(42);
        for r in [2u32, 3, 4] {
            let theta = coweight(&mut g, &sys, r);
            let xi = parahoric_element(&mut g, &theta, 6);
            assert!(ParahoricAlgebra::new(theta.clone()).membership(&xi).holds());

            let flat = residue_flat_element(&mut g, &theta, 6);
            let conn = crate::parahoric::LogahoricConnection::new(theta.clone(), flat).unwrap();
            assert!(conn.residue_condition().holds());
            assert!(conn.residue_condition_pole_orders().holds());

            let form = invariant_form(&mut g, &theta, 9);
            let up = EquivariantConnection::new(theta.clone(), form);
            assert!(up.check_invariance().holds());
            up.gauge_to_logahoric().unwrap();
        }
    }

    #[test]
    fn sampled_matrices_satisfy_their_contracts() {
        let mut g = rng(11);
        for r in [2u32, 3, 4] {
            let datum = random_datum(&mut g, 3, r);
            let omega = equivariant_matrix(&mut g, &datum, 8);
            let up = crate::parabolic::EquivariantMatrixConnection::new(datum.clone(), omega);
            assert!(up.check_equivariance().holds());
            up.pushforward().unwrap();

            let d = parabolic_matrix(&mut g, &datum, 8);
            let down = ParabolicMatrixConnection::new(datum, d).unwrap();
            assert!(down.parabolic_condition().holds());
            down.pullback().unwrap();
        }
    }
}
