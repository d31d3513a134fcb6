//! Round trips across t^r = z, at the element level and against the matrix
//! route for gl_n.

use orbidisc::element::LieAlgebraElement;
use orbidisc::equivariant::{from_logahoric, EquivariantConnection};
use orbidisc::parabolic::{element_to_matrix, matrix_to_element, EquivariantMatrixConnection};
use orbidisc::parahoric::LogahoricConnection;
use orbidisc::roots::RootSystem;
use orbidisc::sample;

#[test]
fn exact_round_trips_start_upstairs() {
    let mut g = sample::rng(200);
    for r in [2u32, 3, 4] {
        for sys in [RootSystem::sl(2).unwrap(), RootSystem::sl(3).unwrap()] {
            for _ in 0..8 {
                let theta = sample::coweight(&mut g, &sys, r);
                let omega = sample::invariant_form(&mut g, &theta, 9);
                let up = EquivariantConnection::new(theta.clone(), omega.clone());
                let down = up.gauge_to_logahoric().unwrap();
                assert!(down.residue_condition().holds());
                assert!(down.residue_condition_pole_orders().holds());
                let back = from_logahoric(&down).unwrap();
                assert!(back.omega().eq_up_to_truncation(&omega));
            }
        }
    }
}

#[test]
fn exact_round_trips_start_downstairs() {
    let mut g = sample::rng(201);
    for r in [2u32, 3, 4] {
        for sys in [RootSystem::sl(2).unwrap(), RootSystem::sl(3).unwrap()] {
            for _ in 0..8 {
                let theta = sample::coweight(&mut g, &sys, r);
                let xi = sample::residue_flat_element(&mut g, &theta, 5);
                let down = LogahoricConnection::new(theta.clone(), xi.clone()).unwrap();
                let up = from_logahoric(&down).unwrap();
                let again = up.gauge_to_logahoric().unwrap();
                assert!(again.omega().eq_up_to_truncation(&xi));
            }
        }
    }
}

#[test]
fn truncated_round_trips_keep_every_known_coefficient() {
    let mut g = sample::rng(202);
    let sys = RootSystem::sl(3).unwrap();
    for r in [2u32, 3] {
        for n in [2i64, 5, 9] {
            let theta = sample::coweight(&mut g, &sys, r);
            let omega = sample::invariant_form(&mut g, &theta, 12).truncated(n);
            let up = EquivariantConnection::new(theta.clone(), omega.clone());
            let down = up.gauge_to_logahoric().unwrap();
            assert!(down.omega().truncation().is_some());
            let back = from_logahoric(&down).unwrap();
            assert!(back.omega().eq_up_to_truncation(&omega));
        }
    }
}

#[test]
fn matrix_route_and_element_route_agree_on_gl() {
    let mut g = sample::rng(203);
    for r in [2u32, 3, 4] {
        for n in [2usize, 3] {
            let sys = RootSystem::gl(n).unwrap();
            for _ in 0..5 {
                let datum = sample::random_datum(&mut g, n, r);
                let nu = sample::equivariant_matrix(&mut g, &datum, 8);

                let matrix_route = EquivariantMatrixConnection::new(datum.clone(), nu.clone())
                    .pushforward()
                    .unwrap();

                let xi = matrix_to_element(&sys, &nu).unwrap();
                let up = EquivariantConnection::new(datum.theta(), xi);
                let down = up.gauge_to_logahoric().unwrap();
                let element_route = element_to_matrix(down.omega()).unwrap();

                assert!(element_route.eq_up_to_truncation(matrix_route.matrix()));

                // and the closed-form residue matches the pushforward's
                let closed = EquivariantMatrixConnection::new(datum, nu)
                    .residue_closed_form()
                    .unwrap();
                assert_eq!(matrix_route.residue(), &closed[..]);
            }
        }
    }
}

#[test]
fn matrix_round_trips() {
    let mut g = sample::rng(204);
    for r in [2u32, 3, 4] {
        for n in [2usize, 3, 4] {
            let datum = sample::random_datum(&mut g, n, r);

            let nu = sample::equivariant_matrix(&mut g, &datum, 10);
            let up = EquivariantMatrixConnection::new(datum.clone(), nu.clone());
            let down = up.pushforward().unwrap();
            let back = down.pullback().unwrap();
            assert!(back.omega().eq_up_to_truncation(&nu));

            let d = sample::parabolic_matrix(&mut g, &datum, 10);
            let down = orbidisc::parabolic::ParabolicMatrixConnection::new(datum, d.clone()).unwrap();
            let up = down.pullback().unwrap();
            let again = up.pushforward().unwrap();
            assert!(again.matrix().eq_up_to_truncation(&d));
        }
    }
}

#[test]
fn gauge_is_linear_over_the_nonconstant_part() {
    // the theta shift is affine, so differences gauge linearly
    let mut g = sample::rng(205);
    let sys = RootSystem::sl(2).unwrap();
    let theta = sample::coweight(&mut g, &sys, 3);
    let a = sample::invariant_form(&mut g, &theta, 7);
    let b = sample::invariant_form(&mut g, &theta, 7);
    let da = EquivariantConnection::new(theta.clone(), a.clone())
        .gauge_to_logahoric()
        .unwrap();
    let db = EquivariantConnection::new(theta.clone(), b.clone())
        .gauge_to_logahoric()
        .unwrap();
    let dsum = EquivariantConnection::new(theta.clone(), a.add(&b))
        .gauge_to_logahoric()
        .unwrap();
    let theta_elt = LieAlgebraElement::from_coweight(&theta, dsum.omega().var());
    let lhs = dsum.omega().add(&theta_elt);
    let rhs = da.omega().add(db.omega());
    assert!(lhs.eq_up_to_truncation(&rhs));
}
