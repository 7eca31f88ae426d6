use hholo_web::{convergence_curve, holomorphy_scan, maclaurin_table};
use serde_json::Value;

fn get(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn sin_cos_table_matches_rule() {
    let v = get(maclaurin_table("sin(p)*cos(p)", 17, 0.8));
    assert_eq!(v["rule"], "sin_cos");
    let c = v["coefficients"].as_array().unwrap();
    let r = v["rule_values"].as_array().unwrap();
    for (a, b) in c.iter().zip(r) {
        assert!((a.as_f64().unwrap() - b.as_f64().unwrap()).abs() < 1e-9);
    }
}

#[test]
fn geometric_curve_stalls_outside_the_disk() {
    let v = get(convergence_curve("1/(1 - p)", 0.0, 0.0, 1.2, 0.0, 20));
    let e: Vec<f64> = v["errors"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!(e.last().unwrap() > &e[0]);
}

#[test]
fn scan_covers_the_interval() {
    let v = get(holomorphy_scan("exp(p)", -1.0, 1.0, 5, 0.0, 0.0, 0.5));
    let xs: Vec<f64> = v["xs"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(xs, [-1.0, -0.5, 0.0, 0.5, 1.0]);
}

#[test]
fn bad_points_are_errors() {
    let v = get(convergence_curve("p", f64::NAN, 0.0, 0.0, 0.0, 4));
    assert_eq!(v["ok"], false);
}
