
use std::f64::consts::PI;

use approx::assert_relative_eq;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use spdc_studio::measurement::*;
use spdc_studio::optics::{compute_jsa, FrequencyGrid, JsaGrid, PmfMode, SourceSpec};
use spdc_studio::polarization::{bell_state, BellKind, TwoQubitState, VisibilityBasis};
use spdc_studio::spectral::{jsa_from_jsi, lobe_stats, overlap_integral, split_lobes_unchecked, PhaseRule};
use spdc_studio::Error;

fn scan_of(f: impl Fn(f64) -> f64, n: usize) -> VisibilityScan {
    let th: Vec<f64> = (0..n).map(|k| PI * k as f64 / (n - 1) as f64).collect();
    VisibilityScan {
        fixed_angle: 0.0,
        counts: th.iter().map(|&t| f(t).round() as u64).collect(),
        sweep_angles: th,
        fit: None,
    }
}

fn pool(n: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()
}

#[test]
fn tof_resolution_and_delay_span() {
    let (f, d) = (FiberSpec::default(), DetectorSpec::default());
    assert_relative_eq!(tof_resolution(&f, &d), 150.0 / 180.0 * 1e-9, max_relative = 1e-12);
    assert_relative_eq!(delay_between(&f, 1548e-9, 1572e-9), 4.32e-9, max_relative = 1e-12);
    assert_relative_eq!(f.wavelength_at(f.delay(1555e-9)), 1555e-9, max_relative = 1e-15);
}

#[test]
fn halving_jitter_halves_resolution() {
    let f = FiberSpec::default();
    let mut d = DetectorSpec::default();
    let r0 = tof_resolution(&f, &d);
    d.jitter_fwhm /= 2.0;
    assert_relative_eq!(tof_resolution(&f, &d), r0 / 2.0, max_relative = 1e-15);
}

#[test]
fn zero_jitter_single_pixel_lands_in_one_bin() {
    let g = FrequencyGrid::from_wavelength_window(1540e-9, 1580e-9, 64).unwrap();
    let mut amp = DMatrix::zeros(64, 64);
    amp[(20, 40)] = Complex64::new(1.0, 0.0);
    let jsa = JsaGrid::new(g, amp).unwrap();
    let det = DetectorSpec { jitter_fwhm: 0.0, ..Default::default() };
    let h = tof_simulate(&jsa, &FiberSpec::default(), &det, 10_000, 1).unwrap();
    assert_eq!(h.total(), 10_000);
    assert_eq!(h.counts.iter().filter(|c| **c > 0).count(), 1);
}

#[test]
fn tof_rejects_bad_input() {
    let g = FrequencyGrid::from_wavelength_window(1540e-9, 1580e-9, 8).unwrap();
    let jsa = JsaGrid::new(g, DMatrix::from_element(8, 8, Complex64::new(1.0, 0.0))).unwrap();
    assert!(tof_simulate(&jsa, &FiberSpec::default(), &DetectorSpec::default(), 0, 1).is_err());
    let empty = TofHistogram { t0: 0.0, bin_width: 50e-12, counts: DMatrix::zeros(4, 4) };
    assert!(matches!(tof_reconstruct(&empty, &FiberSpec::default(), &DetectorSpec::default()), Err(Error::InvalidInput(_))));
    let bad = FiberSpec { length: 0.0, ..Default::default() };
    assert!(bad.validate().is_err());
    let det = DetectorSpec { efficiency: 1.5, ..Default::default() };
    assert!(det.validate().is_err());
}

#[test]
fn tof_round_trip_recovers_lobes() {
    let s = SourceSpec::default();
    let g = FrequencyGrid::from_wavelength_window(1500e-9, 1620e-9, 256).unwrap();
    let jsa = compute_jsa(&g, &s.crystal, &s.pump, &PmfMode::default()).unwrap();
    let (fiber, det) = (FiberSpec::default(), DetectorSpec::default());
    let h = tof_simulate(&jsa, &fiber, &det, 1_000_000, 7).unwrap();
    let rec = tof_reconstruct(&h, &fiber, &det).unwrap();
    assert_relative_eq!(rec.resolution, 0.8333e-9, max_relative = 1e-3);
    let back = jsa_from_jsi(&rec.jsi, PhaseRule::PiBetweenLobes).unwrap();
    let (t, r) = (split_lobes_unchecked(&jsa, 1560e-9).unwrap(), split_lobes_unchecked(&back, 1560e-9).unwrap());
    for (a, b) in [(&t.f1, &r.f1), (&t.f2, &r.f2)] {
        let (sa, sb) = (lobe_stats(a), lobe_stats(b));
        assert!((sa.centroid_signal_nm - sb.centroid_signal_nm).abs() < 0.3, "{sa:?} vs {sb:?}");
        assert!((sa.centroid_idler_nm - sb.centroid_idler_nm).abs() < 0.3, "{sa:?} vs {sb:?}");
    }
    assert!(overlap_integral(&back).unwrap() >= 0.98);
}

#[test]
fn tof_is_thread_count_independent() {
    let g = FrequencyGrid::from_wavelength_window(1520e-9, 1600e-9, 64).unwrap();
    let jsa = JsaGrid::new(
        g.clone(),
        DMatrix::from_fn(64, 64, |a, b| Complex64::new(((a * 7 + b * 3) % 11) as f64, 0.0)),
    )
    .unwrap();
    let run = || tof_simulate(&jsa, &FiberSpec::default(), &DetectorSpec::default(), 200_000, 5).unwrap();
    assert_eq!(pool(1).install(run), pool(4).install(run));
}

#[test]
fn singlet_scan_follows_sin_squared() {
    let s = bell_state(BellKind::PsiMinus);
    let scan = visibility_scan(&s, 0.0, 37, 1e6, 3).unwrap();
    for (t, c) in scan.sweep_angles.iter().zip(&scan.counts) {
        let want = 0.5e6 * t.sin().powi(2);
        assert!((*c as f64 - want).abs() <= 5.0 * want.sqrt().max(1.0), "θ {t}: {c} vs {want}");
    }
    assert!(visibility_scan(&s, 0.0, 7, 1e4, 1).is_err());
    assert!(visibility_scan(&s, 0.0, 37, 0.0, 1).is_err());
}

#[test]
fn fit_recovers_formula_cases() {
    let f = fit_visibility(&scan_of(|t| 1e6 * t.sin().powi(2), 37)).unwrap();
    assert_relative_eq!(f.visibility, 1.0, epsilon = 1e-9);
    let f = fit_visibility(&scan_of(|t| 1e6 * (90.0 * (t + 0.2).sin().powi(2) + 5.0), 37)).unwrap();
    assert_relative_eq!(f.visibility, 0.9, epsilon = 1e-6);
    assert_relative_eq!(f.b, 1.0, epsilon = 1e-6);
    assert!(f.passes_quality_gate());
}

#[test]
fn fit_rejects_short_scans() {
    assert!(fit_visibility(&scan_of(|t| 100.0 * t.sin().powi(2), 6)).is_err());
    let mut half = scan_of(|t| 100.0 * t.sin().powi(2), 37);
    half.sweep_angles.iter_mut().for_each(|t| *t *= 0.2);
    assert!(fit_visibility(&half).is_err());
}

#[test]
fn werner_scan_fits_its_weight() {
    for p in [0.6, 0.9] {
        let w = TwoQubitState::werner(p).unwrap();
        for (k, basis) in [VisibilityBasis::HV, VisibilityBasis::DA].into_iter().enumerate() {
            let scan = visibility_scan(&w, basis.fixed_angle(), 37, 1e4, 20 + k as u64).unwrap();
            let v = fit_visibility(&scan).unwrap().visibility;
            assert!((v - p).abs() <= 0.02, "p {p} {basis:?}: {v}");
        }
    }
}

#[test]
fn analytic_multipair_limits() {
    let d = DetectorSpec::default();
    for b in [VisibilityBasis::HV, VisibilityBasis::DA] {
        assert_eq!(multipair_visibility_analytic(0.0, &d, b), 1.0);
        let v = multipair_visibility_analytic(r_of_mu(0.1), &d, b);
        assert!(v < 1.0 && v > 0.71, "{v}");
        let mut last = 1.0;
        for k in 1..40 {
            let v = multipair_visibility_analytic(0.05 * k as f64, &d, b);
            assert!(v <= last + 1e-15);
            last = v;
        }
    }
}

#[test]
fn monte_carlo_matches_analytic_model() {
    let d = DetectorSpec::default();
    for (r, seed) in [(0.1, 1), (r_of_mu(0.1), 2), (0.6, 3)] {
        let mc = multipair_visibility(r, &d, VisibilityBasis::HV, 400_000, seed).unwrap();
        let an = multipair_visibility_analytic(r, &d, VisibilityBasis::HV);
        assert!((mc.visibility - an).abs() <= 4.0 * mc.std_error, "r {r}: {} ± {} vs {an}", mc.visibility, mc.std_error);
    }
    let z = multipair_visibility(0.0, &d, VisibilityBasis::DA, 100_000, 4).unwrap();
    assert!((z.visibility - 1.0).abs() <= 3.0 * z.std_error.max(1e-12));
}

#[test]
fn monte_carlo_is_thread_count_independent() {
    let d = DetectorSpec::default();
    let run = || multipair_visibility(0.4, &d, VisibilityBasis::DA, 300_000, 8).unwrap();
    assert_eq!(pool(1).install(run), pool(3).install(run));
}

#[test]
fn monte_carlo_rejects_bad_input() {
    let d = DetectorSpec::default();
    assert!(multipair_visibility(-0.1, &d, VisibilityBasis::HV, 100_000, 1).is_err());
    assert!(multipair_visibility(0.1, &d, VisibilityBasis::HV, 1_000, 1).is_err());
    let dead = DetectorSpec { efficiency: 0.0, ..Default::default() };
    assert!(multipair_visibility(0.1, &dead, VisibilityBasis::HV, 100_000, 1).is_err());
}

#[test]
fn squeezing_conversions() {
    let r = r_of_mu(0.1);
    assert_relative_eq!(r, 0.1f64.sqrt().asinh(), max_relative = 1e-15);
    assert!((squeezing_db(r) + 2.71).abs() <= 0.01, "{}", squeezing_db(r));
    assert_eq!(squeezing_db(0.0), 0.0);
    assert_eq!(mu_of_r(0.0), 0.0);
    assert_relative_eq!(mu_of_r(r), 0.1, max_relative = 1e-13);
}

#[test]
fn squeezing_fit_recovers_known_c() {
    let d = DetectorSpec::default();
    let c = 0.45;
    let data: Vec<(f64, f64)> = [0.1, 0.2, 0.4, 0.62]
        .iter()
        .map(|&p| (p, multipair_visibility_analytic(c * f64::sqrt(p), &d, VisibilityBasis::DA)))
        .collect();
    let est = estimate_squeezing(&data, &d, VisibilityBasis::DA).unwrap();
    assert_relative_eq!(est.c, c, max_relative = 1e-6);
    for pt in &est.points {
        assert_relative_eq!(pt.r, c * pt.pump_power.sqrt(), max_relative = 1e-6);
    }
}

#[test]
fn squeezing_errors_name_the_point() {
    let d = DetectorSpec::default();
    assert!(estimate_squeezing(&[(0.1, 0.99), (0.2, 0.98)], &d, VisibilityBasis::HV).is_err());
    match estimate_squeezing(&[(0.1, 0.99), (0.2, 1.2), (0.3, 0.95)], &d, VisibilityBasis::HV) {
        Err(Error::InvalidInput(m)) => assert!(m.contains("200.0 mW"), "{m}"),
        other => panic!("expected an error, got {other:?}"),
    }
    assert!(invert_visibility(0.0, &d, VisibilityBasis::HV).is_err());
    assert_eq!(invert_visibility(1.0, &d, VisibilityBasis::HV).unwrap(), 0.0);
}

#[test]
fn rates_examples() {
    let s = rates_summary(&RateRecord { singles_1: 20e3, singles_2: 20e3, coincidences: 6e3, pump_power: 1e-3 }).unwrap();
    assert!((s.generation_rate - 66.7e3).abs() <= 100.0);
    assert!((s.heralding_efficiency - 0.3).abs() <= 1e-3);
    let l = rates_summary(&RateRecord { singles_1: 5e3, singles_2: 5e3, coincidences: 5e3, pump_power: 1e-3 }).unwrap();
    assert_eq!((l.generation_rate, l.heralding_efficiency), (5e3, 1.0));
    assert!(rates_summary(&RateRecord { singles_1: 5e3, singles_2: 5e3, coincidences: 0.0, pump_power: 1e-3 }).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn visibility_inversion_round_trips(r in 0.01f64..1.5, da in any::<bool>()) {
        let d = DetectorSpec::default();
        let b = if da { VisibilityBasis::DA } else { VisibilityBasis::HV };
        let v = multipair_visibility_analytic(r, &d, b);
        prop_assert!((invert_visibility(v, &d, b).unwrap() - r).abs() < 1e-7);
    }

    #[test]
    fn noiseless_fit_formula(a in 10.0f64..1e3, d in 0.0f64..200.0, c in -1.5f64..1.5) {
        let f = fit_visibility(&scan_of(|t| 1e7 * (a * (t + c).sin().powi(2) + d), 37)).unwrap();
        prop_assert!((f.visibility - a / (a + 2.0 * d)).abs() < 1e-6, "{} vs {}", f.visibility, a / (a + 2.0 * d));
    }

    #[test]
    fn generation_rate_times_heralding(s1 in 1e3f64..1e6, s2 in 1e3f64..1e6, frac in 0.01f64..1.0) {
        let c = frac * s1.min(s2);
        let r = rates_summary(&RateRecord { singles_1: s1, singles_2: s2, coincidences: c, pump_power: 1e-3 }).unwrap();
        prop_assert!((r.generation_rate * r.heralding_efficiency.powi(2) - c).abs() < 1e-9 * c);
    }
}

