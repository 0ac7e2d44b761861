use debranges_web::{classify_value, defect_value, rotation_value};

#[test]
fn classify_lacunary_witness() {
    let v = classify_value("lacunary", 2.0, 24, "prop-t").unwrap();
    assert_eq!(v["verdict"], "StrongViaLacunary");
    assert!(v["sup_c"].as_f64().unwrap() <= 3.0);
}

#[test]
fn rotation_is_bounded_on_lacunary_nodes() {
    let v = rotation_value("lacunary", 2.0, 16, "prop-t", std::f64::consts::FRAC_PI_2).unwrap();
    assert_eq!(v["column_norms"].as_array().unwrap().len(), 16);
    assert!(v["bound"].as_f64().unwrap() <= 1e2);
}

#[test]
fn defect_counts_small_singular_values() {
    let v = defect_value(2, 32).unwrap();
    assert_eq!(v["estimate"], 2);
}

#[test]
fn errors_are_messages() {
    assert!(classify_value("lacunary", 0.5, 8, "const:1").unwrap_err().contains("InvalidRatio"));
    assert!(classify_value("spiral", 2.0, 8, "const:1").is_err());
}
