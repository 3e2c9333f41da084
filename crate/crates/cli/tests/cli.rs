use serde_json::Value;
use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

fn confdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confdyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn conjugacy_matches_golden() {
    let o = confdyn(&["conjugacy", "--pair", "rho2", "--levels", "3"]);
    assert!(o.status.success());
    let got = stdout(&o);
    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/rho2_levels3.csv");
    let golden = std::fs::read_to_string(golden_path).unwrap();
    assert_eq!(got.lines().next(), golden.lines().next());
    let (a, b) = (rows(&got), rows(&golden));
    assert_eq!(a.len(), b.len());
    for (r, s) in a.iter().zip(&b) {
        assert_eq!(r[..2], s[..2]);
        for k in 2..6 {
            let (x, y): (f64, f64) = (r[k].parse().unwrap(), s[k].parse().unwrap());
            assert!((x - y).abs() < 1e-12, "{r:?} vs {s:?}");
        }
    }
}

#[test]
fn conjugacy_level_three_endpoint_oracle() {
    // The arc 0-2-0 ends at the preimage of 5/6 in the first third: the
    // inversion of e^{5πi/3} in the circle orthogonal to the first side.
    let len = 1.0 / 3.0;
    let center = num_complex::Complex64::from_polar(1.0 / (PI * len).cos(), PI * len);
    let r = (PI * len).tan();
    let z = num_complex::Complex64::from_polar(1.0, 2.0 * PI * 5.0 / 6.0);
    let w = center + r * r / (z - center).conj();
    let expect = w.arg() / (2.0 * PI);
    let o = confdyn(&["conjugacy", "--pair", "rho2", "--levels", "3"]);
    let row = rows(&stdout(&o))
        .into_iter()
        .find(|r| r[1] == "0-2-0")
        .unwrap();
    let got: f64 = row[5].parse().unwrap();
    assert!((got - expect).abs() < 1e-12, "{got} vs {expect}");
}

#[test]
fn output_is_independent_of_worker_count() {
    let args = [
        "distortion",
        "--pair",
        "rho2",
        "--kmin",
        "3",
        "--kmax",
        "8",
        "--samples",
        "256",
    ];
    let one = confdyn(&[&["--workers", "1"], &args[..]].concat());
    let two = confdyn(&[&["--workers", "2"], &args[..]].concat());
    assert!(one.status.success() && two.status.success());
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn render_writes_png() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("julia.png");
    let o = confdyn(&[
        "render",
        "--map",
        "welding",
        "--size",
        "32x24",
        "--max-iter",
        "50",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let bytes = std::fs::read(&out).unwrap();
    assert_eq!(&bytes[..8], b"\x89PNG\r\n\x1a\n");
}

#[test]
fn limit_set_writes_ppm() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("limit.ppm");
    let o = confdyn(&[
        "limit-set",
        "--ideal-polygon",
        "4",
        "--size",
        "16x16",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let bytes = std::fs::read(&out).unwrap();
    assert!(bytes.starts_with(b"P6"));
    assert!(bytes.len() > 16 * 16 * 3);
}

#[test]
fn verify_constants_reports_six_rows() {
    let o = confdyn(&["verify-constants"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines[1..].iter().all(|l| l.trim_end().ends_with("ok")));
}

#[test]
fn exit_codes() {
    assert_eq!(confdyn(&["no-such-command"]).status.code(), Some(64));
    assert_eq!(
        confdyn(&["--workers", "0", "verify-constants"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(
        confdyn(&["conjugacy", "--pair", "nope"]).status.code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\"source\": {\"kind\": \"power\", \"degree\": 1, \"orientation\": \"reversing\"}}",
    )
    .unwrap();
    assert_eq!(
        confdyn(&["conjugacy", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(
        confdyn(&["conjugacy", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        confdyn(&["conjugacy", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn suffridge_report() {
    let s = (2.0f64.sqrt() * 2.0 / 5.0).to_string();
    let coeffs = format!("0,0;{s},0;0,0;0,0");
    let o = confdyn(&["suffridge", "--degree", "5", "--coeffs", &coeffs]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["cusps"].as_array().unwrap().len(), 6);
    assert_eq!(v["double_points"].as_array().unwrap().len(), 3);
    assert_eq!(v["tiles"].as_array().unwrap().len(), 4);
    assert_eq!(v["tree"]["vertices"], 4);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let first = text.find("\"cusps\"").unwrap();
    assert!(first < text.find("\"degree\"").unwrap());
}

#[test]
fn suffridge_without_double_points_is_rejected() {
    let o = confdyn(&["suffridge", "--degree", "5", "--coeffs", "0,0;0,0;0,0;0,0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ba_extend_tail_report() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, tail) = (dir.path().join("ba.csv"), dir.path().join("tail.json"));
    let o = confdyn(&[
        "ba-extend",
        "--pair",
        "rho2",
        "--grid",
        "128",
        "--lift-samples",
        "2048",
        "--out",
        csv.to_str().unwrap(),
        "--tail",
        tail.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&tail).unwrap()).unwrap();
    for k in [
        "C",
        "alpha",
        "areas",
        "levels",
        "max_k",
        "r2",
        "reaches_zero",
        "window",
    ] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    let body = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(body.lines().next(), Some("x,y,re_h,im_h,mu_abs,k"));
    assert!(body.lines().count() > 12000);
    assert_eq!(
        confdyn(&["ba-extend", "--pair", "rho2", "--grid", "64"])
            .status
            .code(),
        Some(64)
    );
}
