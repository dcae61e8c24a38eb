use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use spdc_studio::config::{sub_seed, RunConfig};
use spdc_studio::grid_io::*;
use spdc_studio::optics::{FrequencyGrid, JsaGrid};
use spdc_studio::spectral::JsiGrid;
use spdc_studio::Error;

fn grid(n: usize) -> FrequencyGrid {
    FrequencyGrid::from_wavelength_window(1500e-9, 1620e-9, n).unwrap()
}

/// Axes are stored in nm, so ω survives the round trip only to the last bit.
fn same_axes(a: &FrequencyGrid, b: &FrequencyGrid) -> bool {
    let close = |x: &[f64], y: &[f64]| x.len() == y.len() && x.iter().zip(y).all(|(p, q)| (p - q).abs() <= 1e-15 * q.abs());
    close(a.signal(), b.signal()) && close(a.idler(), b.idler())
}

#[test]
fn jsa_files_round_trip_bit_exact() {
    let d = tempfile::tempdir().unwrap();
    let amp = DMatrix::from_fn(17, 17, |a, b| Complex64::new((a as f64 * 0.37).sin() / 3.0, (b as f64).cbrt() * 1e-7));
    let jsa = JsaGrid::new(grid(17), amp).unwrap();
    let (re, im) = (d.path().join("re.csv"), d.path().join("im.csv"));
    write_jsa_csv(&re, &im, &jsa).unwrap();
    let back = read_jsa_csv(&re, &im).unwrap();
    assert_eq!(back.amplitude, jsa.amplitude);
    assert!(same_axes(&back.grid, &jsa.grid));
}

#[test]
fn mismatched_jsa_parts_are_rejected() {
    let d = tempfile::tempdir().unwrap();
    let a = JsaGrid::new(grid(8), DMatrix::from_element(8, 8, Complex64::new(1.0, 0.0))).unwrap();
    let b = JsaGrid::new(FrequencyGrid::from_wavelength_window(1400e-9, 1700e-9, 8).unwrap(), a.amplitude.clone()).unwrap();
    let (re, im) = (d.path().join("re.csv"), d.path().join("im.csv"));
    write_jsa_csv(&re, &d.path().join("unused.csv"), &a).unwrap();
    write_jsa_csv(&d.path().join("unused.csv"), &im, &b).unwrap();
    assert!(read_jsa_csv(&re, &im).is_err());
}

#[test]
fn reversed_wavelength_order_is_accepted() {
    let nm: Vec<String> = grid(3).signal_wavelengths().iter().map(|l| format!("{}", l * 1e9)).collect();
    let up: Vec<String> = nm.iter().rev().cloned().collect();
    let text = format!("# signal_nm: {}\n# idler_nm: {}\n1,2,3\n4,5,6\n7,8,9\n", up.join(","), nm.join(","));
    let j = parse_jsi_csv(&text, "t").unwrap();
    // grid rows run in increasing ω: the file's signal rows are reversed, its idler columns are not
    assert_eq!(j.intensity[(0, 0)], 7.0);
    assert_eq!(j.intensity[(2, 2)], 3.0);
}

#[test]
fn malformed_grids_name_the_line() {
    let cases = [
        ("1,2\n3,4\n", "signal_nm"),
        ("# signal_nm: 1550,1560\n1,2\n3,4\n", "idler_nm"),
        ("# signal_nm: 1550,1560\n# idler_nm: 1550,1560\n1,2\n3\n", "t:4"),
        ("# signal_nm: 1550,1560\n# idler_nm: 1550,1560\n1,2\n3,q\n", "t:4"),
        ("# signal_nm: 1550,1560\n# idler_nm: 1550,1560\n1,2\n", "rows"),
        ("# signal_nm: 1550,-1\n# idler_nm: 1550,1560\n1,2\n3,4\n", "> 0"),
    ];
    for (text, needle) in cases {
        match parse_jsi_csv(text, "t") {
            Err(Error::Parse(m)) => assert!(m.contains(needle), "{m} lacks {needle}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
}

#[test]
fn negative_intensity_is_rejected() {
    assert!(parse_jsi_csv("# signal_nm: 1550,1560\n# idler_nm: 1550,1560\n1,2\n3,-4\n", "t").is_err());
}

#[test]
fn config_defaults_and_validation() {
    let c = RunConfig::default();
    c.validate().unwrap();
    let c = RunConfig::from_json_str(r#"{"grid": {"samples": 32}}"#, "x").unwrap();
    assert!(matches!(c.validate(), Err(Error::InvalidInput(m)) if m.contains("too coarse")));
    let c = RunConfig::from_json_str(r#"{"grid": {"window_nm": [1540, 1580]}}"#, "x").unwrap();
    assert!(c.validate().is_err());
    match RunConfig::from_json_str("{\n\"sed\": 1}", "cfg.json") {
        Err(Error::InvalidInput(m)) => assert!(m.starts_with("cfg.json: ") && m.contains("line 2"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn sub_seeds_are_distinct_and_stable() {
    assert_eq!(sub_seed(1, "a"), sub_seed(1, "a"));
    assert_ne!(sub_seed(1, "a"), sub_seed(2, "a"));
    assert_ne!(sub_seed(1, "a"), sub_seed(1, "b"));
}

proptest! {
    #[test]
    fn jsi_text_round_trip(vals in proptest::collection::vec(0.0f64..1e6, 36)) {
        let jsi = JsiGrid::new(grid(6), DMatrix::from_vec(6, 6, vals)).unwrap();
        let text = grid_to_csv(&jsi.grid, |a, b| jsi.intensity[(a, b)]);
        let back = parse_jsi_csv(&text, "p").unwrap();
        prop_assert_eq!(back.intensity, jsi.intensity);
        prop_assert!(same_axes(&back.grid, &jsi.grid));
    }
}
