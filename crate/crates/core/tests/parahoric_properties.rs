//! Structural properties of the parahoric algebra and its weight pieces.

use rand::Rng;

use orbidisc::element::LieAlgebraElement;
use orbidisc::parahoric::{
    homogeneous_weight, weight_piece_membership, weight_zero_projection, ParahoricAlgebra,
};
use orbidisc::rational::{rat, rat_int, Rational};
use orbidisc::roots::{Coweight, RootSystem};
use orbidisc::sample;
use orbidisc::series::{LaurentSeries, Variable};
use orbidisc::Verdict;

#[test]
fn theta_itself_is_a_member_and_residue_flat() {
    let mut g = sample::rng(100);
    for r in [2u32, 3, 4, 6] {
        for sys in [RootSystem::sl(2).unwrap(), RootSystem::sl(3).unwrap()] {
            let theta = sample::coweight(&mut g, &sys, r);
            let xi = LieAlgebraElement::from_coweight(&theta, Variable::z(r));
            let algebra = ParahoricAlgebra::new(theta.clone());
            assert!(algebra.membership(&xi).holds());
            let conn = orbidisc::parahoric::LogahoricConnection::new(theta, xi).unwrap();
            assert!(conn.residue_condition().holds());
            assert!(conn.residue_condition_pole_orders().holds());
        }
    }
}

#[test]
fn bracket_of_members_is_a_member() {
    let mut g = sample::rng(101);
    for r in [2u32, 3, 4] {
        for sys in [RootSystem::sl(2).unwrap(), RootSystem::sl(3).unwrap()] {
            for _ in 0..8 {
                let theta = sample::coweight(&mut g, &sys, r);
                let algebra = ParahoricAlgebra::new(theta.clone());
                let a = sample::parahoric_element(&mut g, &theta, 4);
                let b = sample::parahoric_element(&mut g, &theta, 4);
                let c = a.bracket(&b).unwrap();
                assert!(
                    algebra.membership(&c).holds(),
                    "bracket left the algebra for theta = {:?}",
                    theta.components()
                );
            }
        }
    }
}

#[test]
fn brackets_add_weights() {
    let sys = RootSystem::sl(3).unwrap();
    let v = Variable::z(3);
    let mut g = sample::rng(102);
    let theta = sample::coweight(&mut g, &sys, 3);

    // single-slot homogeneous elements of known weight
    let mut homogeneous = Vec::new();
    for m in 0..sys.cartan_dim() {
        for k in -2i64..=2 {
            let mut cartan = vec![LaurentSeries::zero(v); sys.cartan_dim()];
            cartan[m] = LaurentSeries::monomial(v, rat_int(1), k);
            let xi = LieAlgebraElement::new(sys.clone(), v, cartan, []).unwrap();
            homogeneous.push((rat_int(k), xi));
        }
    }
    for idx in 0..sys.root_count() {
        for k in -2i64..=2 {
            let xi = LieAlgebraElement::new(
                sys.clone(),
                v,
                vec![LaurentSeries::zero(v); sys.cartan_dim()],
                [(idx, LaurentSeries::monomial(v, rat_int(1), k))],
            )
            .unwrap();
            homogeneous.push((theta.pairing(idx) + rat_int(k), xi));
        }
    }

    for (la, a) in &homogeneous {
        for (mu, b) in &homogeneous {
            let c = a.bracket(b).unwrap();
            if c.is_known_zero() {
                continue;
            }
            let expected = la + mu;
            assert_eq!(homogeneous_weight(&theta, &c), Some(expected.clone()));
            assert!(weight_piece_membership(&theta, &c, &expected));
        }
    }
}

#[test]
fn projection_is_an_idempotent_onto_the_weight_zero_piece() {
    let mut g = sample::rng(103);
    for r in [2u32, 3, 4] {
        let sys = RootSystem::sl(3).unwrap();
        for _ in 0..10 {
            let theta = sample::coweight(&mut g, &sys, r);
            let xi = sample::parahoric_element(&mut g, &theta, 5);
            let proj = weight_zero_projection(&theta, &xi).unwrap();
            assert!(weight_piece_membership(&theta, &proj, &Rational::from_integer(0.into())));
            let again = weight_zero_projection(&theta, &proj).unwrap();
            assert!(again.eq_up_to_truncation(&proj));
        }
    }
}

#[test]
fn weight_zero_piece_is_closed_under_brackets() {
    let mut g = sample::rng(104);
    let sys = RootSystem::sl(3).unwrap();
    for r in [2u32, 3] {
        for _ in 0..6 {
            let theta = sample::coweight(&mut g, &sys, r);
            let v = Variable::z(r);
            let zero = Rational::from_integer(0.into());
            let build = |g: &mut rand_chacha::ChaCha8Rng| {
                let cartan = (0..sys.cartan_dim())
                    .map(|_| LaurentSeries::constant(v, sample::rational(g)))
                    .collect();
                let roots: Vec<_> = (0..sys.root_count())
                    .filter(|&idx| theta.is_integral_pairing(idx))
                    .map(|idx| {
                        let p = theta.pairing(idx).to_integer();
                        let exp = -i64::try_from(p.clone()).unwrap_or_else(|_| panic!("small"));
                        (idx, LaurentSeries::monomial(v, sample::rational(g), exp))
                    })
                    .collect();
                LieAlgebraElement::new(sys.clone(), v, cartan, roots).unwrap()
            };
            let a = build(&mut g);
            let b = build(&mut g);
            assert!(weight_piece_membership(&theta, &a, &zero));
            let c = a.bracket(&b).unwrap();
            assert!(weight_piece_membership(&theta, &c, &zero));
        }
    }
}

#[test]
fn membership_depends_only_on_the_orders_map() {
    // Over sl2 with r = 8, theta = 5/8 and theta = 7/8 share the orders map
    // (-1, 2) but are different coweights.
    let sys = RootSystem::sl(2).unwrap();
    let t1 = Coweight::new(sys.clone(), 8, vec![rat(5, 8)]).unwrap();
    let t2 = Coweight::new(sys.clone(), 8, vec![rat(7, 8)]).unwrap();
    let a1 = ParahoricAlgebra::new(t1.clone());
    let a2 = ParahoricAlgebra::new(t2.clone());
    assert_eq!(a1.orders(), a2.orders());
    assert_ne!(t1.components(), t2.components());

    let mut g = sample::rng(105);
    for _ in 0..20 {
        let xi = sample::parahoric_element(&mut g, &t1, 4);
        assert_eq!(a1.membership(&xi).verdict(), a2.membership(&xi).verdict());
        // stress the negative side too
        let lower = xi.scaled(&rat(1, 3));
        assert_eq!(a1.membership(&lower).verdict(), a2.membership(&lower).verdict());
    }

    // the residue condition, by contrast, sees theta itself
    let xi = LieAlgebraElement::from_coweight(&t1, Variable::z(8));
    let c1 = orbidisc::parahoric::LogahoricConnection::new(t1, xi.clone()).unwrap();
    let c2 = orbidisc::parahoric::LogahoricConnection::new(t2, xi).unwrap();
    assert_eq!(c1.residue_condition().verdict(), Verdict::Holds);
    assert_eq!(c2.residue_condition().verdict(), Verdict::Fails);
}

#[test]
fn residue_routes_agree_on_random_members() {
    let mut g = sample::rng(106);
    for r in [2u32, 3, 4, 6] {
        for sys in [RootSystem::sl(2).unwrap(), RootSystem::sl(3).unwrap()] {
            for _ in 0..10 {
                let theta = sample::coweight(&mut g, &sys, r);
                let xi = if g.gen_bool(0.5) {
                    sample::parahoric_element(&mut g, &theta, 4)
                } else {
                    sample::residue_flat_element(&mut g, &theta, 4)
                };
                let conn = orbidisc::parahoric::LogahoricConnection::new(theta.clone(), xi).unwrap();
                let d1 = conn.residue_condition();
                let d2 = conn.residue_condition_pole_orders();
                assert_eq!(d1.verdict(), d2.verdict());
                let findings =
                    |d: &orbidisc::Diagnosis| -> Vec<(String, i64)> {
                        d.violations.iter().map(|f| (f.label.clone(), f.exponent)).collect()
                    };
                assert_eq!(findings(&d1), findings(&d2));
            }
        }
    }
}
