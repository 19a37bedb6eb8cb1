use jobswitch::model::q_r_quadrature;
use jobswitch::normal::{norm_cdf, norm_pdf};
use jobswitch::Model;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn conjugate_is_the_supremum(y in 1e-3f64..1e3) {
        let m = Model::reference();
        let c = m.inverse_marginal_1(y).unwrap();
        let at_opt = m.utility(c).unwrap() - y * c;
        let conj = m.conjugate_u1(y).unwrap();
        prop_assert!((conj - at_opt).abs() <= 1e-12 * conj.abs());
        for f in [0.9, 1.1] {
            prop_assert!(m.utility(f * c).unwrap() - y * f * c <= conj);
        }
    }

    #[test]
    fn terminal_conjugate_is_the_supremum(y in 1e-3f64..1e3) {
        let m = Model::reference();
        let w = m.inverse_marginal_2(y).unwrap();
        let at_opt = m.terminal_utility(w).unwrap() - y * w;
        let conj = m.conjugate_u2(y).unwrap();
        prop_assert!((conj - at_opt).abs() <= 1e-11 * conj.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn q_r_is_decreasing_and_convex(t in 0.0f64..29.9, x in -5.0f64..5.0) {
        let m = Model::reference();
        let lam = x.exp();
        prop_assert!(m.q_r_dl(t, lam) < 0.0);
        prop_assert!(m.q_r_lambda_dll(t, lam) > 0.0);
        let h = 1e-2 * lam;
        let (a, b, c) = (m.q_r(t, lam - h), m.q_r(t, lam), m.q_r(t, lam + h));
        prop_assert!(c < b && b < a);
        prop_assert!(a + c - 2.0 * b > 0.0);
    }

    #[test]
    fn boundary_data_stay_between_the_obstacles(tau in 0.0f64..30.0, n in 1.0f64..20.0) {
        let m = Model::reference();
        let up = m.varphi_plus(tau);
        prop_assert!((0.0..=m.p.zeta0).contains(&up));
        let down = m.varphi_minus_n(tau, n);
        prop_assert!((-m.p.zeta1..=0.0).contains(&down));
    }

    #[test]
    fn normal_cdf_is_consistent(x in -8.0f64..8.0) {
        prop_assert!((norm_cdf(x) + norm_cdf(-x) - 1.0).abs() <= 1e-15);
        let h = 1e-4;
        let slope = (norm_cdf(x + h) - norm_cdf(x - h)) / (2.0 * h);
        prop_assert!((slope - norm_pdf(x)).abs() <= 1e-8);
    }
}

#[test]
fn quadrature_reproduces_the_closed_form() {
    let m = Model::reference();
    let bequest = m.d.bequest_coef;
    for &(t, lam) in &[(0.0, 0.725), (10.0, 2.0), (25.0, 0.1), (29.5, 5.0)] {
        let u1 = |_: f64, y: f64| m.conjugate_u1(y).unwrap();
        let u2 = |y: f64| bequest * m.conjugate_u1(y).unwrap();
        let q = q_r_quadrature(&m, t, lam, &u1, &u2, 1e-9).unwrap();
        let exact = m.q_r(t, lam);
        assert!((q - exact).abs() <= 1e-7 * exact.abs(), "t {t} lambda {lam}: {q} vs {exact}");
    }
}
