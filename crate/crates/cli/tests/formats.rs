use palm_nmf::io::{load_json, save_json};
use palm_nmf::{load_matrix, save_matrix};
use palm_nmf_core::harness::{ClipMode, SyntheticSpec};
use palm_nmf_core::Matrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn random_matrices_round_trip_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = StdRng::seed_from_u64(5);
    for case in 0..20 {
        let m = Matrix::from_fn(3, 3, |_, _| {
            let mag = 10f64.powi(rng.random_range(-300..300));
            rng.random_range(-1.0..1.0) * mag
        })
        .unwrap();
        let path = dir.path().join(format!("m{case}.csv"));
        save_matrix(&m, &path).unwrap();
        let back = load_matrix(&path).unwrap();
        let bits = |m: &Matrix| m.as_slice().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back), bits(&m));
    }
}

#[test]
fn extreme_values_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let m = Matrix::from_rows(&[[f64::MAX, f64::MIN_POSITIVE, 5e-324], [-0.0, 0.1 + 0.2, 1.0 / 3.0]]).unwrap();
    let path = dir.path().join("m.csv");
    save_matrix(&m, &path).unwrap();
    assert_eq!(load_matrix(&path).unwrap(), m);
}

#[test]
fn json_artifacts_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec {
        sigma: Some(0.25),
        clip_mode: ClipMode::Absolute,
        seed: u64::MAX,
        ..Default::default()
    };
    let path = dir.path().join("spec.json");
    save_json(&spec, &path).unwrap();
    assert_eq!(load_json::<SyntheticSpec>(&path).unwrap(), spec);

    let m = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.5]]).unwrap();
    let path = dir.path().join("m.json");
    save_json(&m, &path).unwrap();
    assert_eq!(load_json::<Matrix>(&path).unwrap(), m);
}

#[test]
fn matrix_json_is_validated() {
    for bad in [
        r#"{"rows":2,"cols":2,"data":[1,2,3]}"#,
        r#"{"rows":0,"cols":0,"data":[]}"#,
    ] {
        assert!(serde_json::from_str::<Matrix>(bad).is_err(), "{bad}");
    }
    assert!(serde_json::from_str::<Matrix>(r#"{"rows":1,"cols":2,"data":[1,2]}"#).is_ok());
}
