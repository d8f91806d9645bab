use ddwave::stability::{classify, det_p, det_p_scan, threshold_c, Verdict, DEFAULT_SAMPLES};
use ddwave::{Error, Stage};

/// Bisects `det 𝓟(15, ·)` inside the `threshold_c` bracket down to adjacent floats.
fn refined_root(l: f64) -> f64 {
    let th = threshold_c(l, 1e-8).unwrap();
    let [mut a, mut b] = th.bracket;
    let sa = det_p(l, a, DEFAULT_SAMPLES).unwrap().signum();
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return m;
        }
        if det_p(l, m, DEFAULT_SAMPLES).unwrap().signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
}

#[test]
fn verdicts_on_either_side_of_threshold() {
    let low = classify(15.0, 0.30, 128, DEFAULT_SAMPLES).unwrap();
    assert_eq!(low.verdict, Verdict::Unstable);
    assert_eq!(low.krein % 2, 1);
    let high = classify(15.0, 0.60, 128, DEFAULT_SAMPLES).unwrap();
    assert_eq!(high.verdict, Verdict::Stable);
    assert_eq!(high.krein, 0);
    assert_eq!((high.n_p, high.z_p), (1, 0));
}

#[test]
fn threshold_point_is_degenerate() {
    let c = refined_root(15.0);
    let r = classify(15.0, c, 128, DEFAULT_SAMPLES).unwrap();
    assert_eq!(r.z_p, 1, "{r:?}");
    assert_eq!(r.verdict, Verdict::Degenerate);
}

#[test]
fn verdict_independent_of_discretisation() {
    for &c in &[0.3, 0.45, 0.52, 0.7] {
        let reference = classify(15.0, c, 64, 1024).unwrap().verdict;
        for (modes, n) in [(128, 1024), (64, 2048), (128, 2048)] {
            assert_eq!(classify(15.0, c, modes, n).unwrap().verdict, reference, "c = {c}");
        }
    }
}

#[test]
fn thresholds_increase_with_period() {
    let cs: Vec<f64> = [15.0, 20.0, 25.0, 30.0].iter().map(|&l| threshold_c(l, 1e-6).unwrap().c_threshold).collect();
    assert!(cs.windows(2).all(|w| w[0] < w[1]), "{cs:?}");
}

#[test]
fn threshold_matches_fine_scan() {
    let tol = 1e-6;
    let th = threshold_c(20.0, tol).unwrap();
    let fine: Vec<f64> = (0..=40).map(|i| th.c_threshold - 2e-5 + 1e-6 * i as f64).collect();
    let dets: Vec<f64> = fine.iter().map(|&c| det_p(20.0, c, DEFAULT_SAMPLES).unwrap()).collect();
    let i = (1..dets.len()).find(|&i| dets[i].signum() != dets[i - 1].signum()).unwrap();
    assert!((th.c_threshold - 0.5 * (fine[i] + fine[i - 1])).abs() <= tol + 1e-6);
    assert!(th.det_bracket[0].signum() != th.det_bracket[1].signum());
}

#[test]
fn no_sign_change_reports_scan() {
    // just above the minimum period every scanned speed is stable
    match threshold_c(8.452, 1e-6) {
        Err(Error::NoThreshold { scan }) => {
            assert_eq!(scan.len(), 21);
            assert!(scan.iter().all(|&(_, d)| d < 0.0));
        }
        other => panic!("expected NoThreshold, got {other:?}"),
    }
    assert_eq!(det_p_scan(8.452, DEFAULT_SAMPLES).unwrap().len(), 21);
}

#[test]
fn errors_carry_stage_tags() {
    let err = classify(15.0, 0.5, 8, DEFAULT_SAMPLES).unwrap_err();
    assert_eq!(err.stage(), Some(Stage::Spectrum));
    assert!(matches!(err.root(), Error::Domain(_)));
    assert!(err.to_string().starts_with("stage spectrum:"));

    let err = classify(15.0, 0.5, 64, 100).unwrap_err();
    assert_eq!(err.stage(), Some(Stage::Profile));
}
