use std::f64::consts::PI;

use ddwave::elliptic::{complete_k, jacobi_sn_cn_dn, EllipticModulus};
use ddwave::hill::{integrate_ivp, periodic_inner, HillField};
use ddwave::linalg::{inertia, SymMatrix};
use ddwave::wave::{
    alpha4_band, build_profile, energy, energy_floor, max_speed, period, root_structure,
    solve_alpha4,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn jacobi_identities(k in 0.0f64..0.999_999, u in -60.0f64..60.0) {
        let m = EllipticModulus::new(k).unwrap();
        let (sn, cn, dn) = jacobi_sn_cn_dn(u, m).unwrap();
        prop_assert!((sn * sn + cn * cn - 1.0).abs() <= 1e-12);
        prop_assert!((dn * dn + k * k * sn * sn - 1.0).abs() <= 1e-12);
        prop_assert!(dn > 0.0);
    }

    #[test]
    fn jacobi_parity_and_period(k in 0.01f64..0.99, u in 0.0f64..10.0) {
        let m = EllipticModulus::new(k).unwrap();
        let kk = complete_k(m).unwrap();
        let (sn, cn, dn) = jacobi_sn_cn_dn(u, m).unwrap();
        let (sn_neg, cn_neg, dn_neg) = jacobi_sn_cn_dn(-u, m).unwrap();
        prop_assert!((sn + sn_neg).abs() < 1e-12);
        prop_assert!((cn - cn_neg).abs() < 1e-12 && (dn - dn_neg).abs() < 1e-12);
        let (sn4, cn4, _) = jacobi_sn_cn_dn(u + 4.0 * kk, m).unwrap();
        prop_assert!((sn - sn4).abs() < 1e-11 && (cn - cn4).abs() < 1e-11);
    }

    #[test]
    fn vieta_relations(c in 0.01f64..0.99, t in 0.001f64..0.999) {
        let (lo, hi) = alpha4_band(c);
        let a = lo + t * (hi - lo);
        let rd = root_structure(a, c).unwrap();
        let r = 1.0 - c * c;
        let s = 5.0 - 4.0 * c * c;
        prop_assert!((rd.alpha1 + rd.alpha3 + rd.alpha4 + 1.5).abs() <= 1e-12);
        prop_assert!((rd.alpha1 * rd.alpha3 + rd.alpha1 * rd.alpha4 + rd.alpha3 * rd.alpha4 + 3.0 * r).abs() <= 1e-12);
        prop_assert!((rd.alpha1 * rd.alpha3 * rd.alpha4 - 3.0 * s * rd.energy).abs() <= 1e-12);
        prop_assert!((rd.energy - energy(a, c)).abs() <= 1e-13);
        prop_assert!(rd.energy > energy_floor(c) && rd.energy < 0.0);
        prop_assert!(rd.k2() > 0.0 && rd.k2() < 1.0);
    }

    #[test]
    fn period_increases_with_alpha4(c in 0.01f64..0.99, t1 in 0.01f64..0.99, t2 in 0.01f64..0.99) {
        prop_assume!((t1 - t2).abs() > 1e-6);
        let (lo, hi) = alpha4_band(c);
        let (a, b) = (lo + t1.min(t2) * (hi - lo), lo + t1.max(t2) * (hi - lo));
        prop_assert!(period(a, c).unwrap() < period(b, c).unwrap());
    }

    #[test]
    fn alpha4_round_trip(l in 9.0f64..40.0, frac in 0.02f64..0.98) {
        let c = frac * max_speed(l).unwrap();
        let a = solve_alpha4(l, c).unwrap();
        prop_assert!((period(a, c).unwrap() - l).abs() <= 1e-10 * l);
    }

    #[test]
    fn inertia_is_complete_and_matches_det(
        d in prop::array::uniform3(-5.0f64..5.0),
        o in prop::array::uniform3(-5.0f64..5.0),
    ) {
        let m = SymMatrix::from_rows(&[&[d[0], o[0], o[1]], &[o[0], d[1], o[2]], &[o[1], o[2], d[2]]]).unwrap();
        let i = inertia(&m, m.default_zero_tol());
        prop_assert_eq!(i.negatives + i.zeros + i.positives, 3);
        if i.zeros == 0 {
            prop_assert_eq!(m.det() < 0.0, i.negatives % 2 == 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ivp_superposition(a in -2.0f64..2.0, b in -2.0f64..2.0, p in -1.0f64..1.0, q in -1.0f64..1.0) {
        let l = 15.0;
        let field = HillField::new(build_profile(l, 0.5, 256).unwrap());
        let w = 2.0 * PI / l;
        let f = move |x: f64| 1.0 + p * (w * x).cos();
        let g = move |x: f64| q * (3.0 * w * x).sin() + 0.5;
        let uf = integrate_ivp(&field, 0.3, 0.0, move |x, _| f(x)).unwrap();
        let ug = integrate_ivp(&field, -0.2, 0.1, move |x, _| g(x)).unwrap();
        let uc = integrate_ivp(&field, 0.3 * a - 0.2 * b, 0.1 * b, move |x, _| a * f(x) + b * g(x)).unwrap();
        let scale = 1.0 + uc.sup_norm().max(uf.sup_norm()).max(ug.sup_norm());
        for j in 0..uc.value.len() {
            let lin = a * uf.value[j] + b * ug.value[j];
            prop_assert!((uc.value[j] - lin).abs() <= 1e-10 * scale);
        }
    }
}

proptest! {
    #[test]
    fn inner_product_bilinear_symmetric(
        u in prop::collection::vec(-1.0f64..1.0, 64),
        v in prop::collection::vec(-1.0f64..1.0, 64),
        t in -3.0f64..3.0,
    ) {
        let uv = periodic_inner(&u, &v, 10.0).unwrap();
        prop_assert!((uv - periodic_inner(&v, &u, 10.0).unwrap()).abs() < 1e-12);
        let tu: Vec<f64> = u.iter().map(|x| t * x).collect();
        prop_assert!((periodic_inner(&tu, &v, 10.0).unwrap() - t * uv).abs() < 1e-12);
    }
}
