use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;

fn uminflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uminflow"))
        .args(args)
        .env_remove("UMINFLOW_CAPS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = uminflow(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    serde_json::from_str(&stdout(&all)).unwrap()
}

fn code(args: &[&str]) -> i32 {
    uminflow(args).status.code().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn measure_examples() {
    assert_eq!(stdout(&["measure", "ord(0<1<2)"]).trim(), "1/6");
    assert_eq!(stdout(&["measure", "ord(0<1)|!ord(0<1)"]).trim(), "1");
    assert_eq!(stdout(&["measure", "ord(3<1)&ord(0<2)"]).trim(), "1/4");
}

#[test]
fn weight_method_is_within_precision() {
    let text = stdout(&[
        "measure",
        "--method",
        "weight",
        "-k",
        "10",
        "ord(0<1)&!ord(2<3)",
    ]);
    let (m, k) = text.trim().split_once("/2^").unwrap();
    let (m, k): (i64, u32) = (m.parse().unwrap(), k.parse().unwrap());
    assert_eq!(k, 10);
    // |m/2^10 − 1/4| < 2^{−10}
    assert!((4 * m - 1024).abs() < 4);
}

#[test]
fn measure_json_record() {
    let v = json(&["measure", "ord(0<1<2)"]);
    assert_eq!(v["mu"], "1/6");
    assert_eq!(v["method"], "exact");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["measure", "ord(0<1"]), 2);
    assert_eq!(code(&["measure", "ord(0<0)"]), 2);
    assert_eq!(code(&["nonsense"]), 2);
    assert_eq!(code(&["--cap-support", "3", "measure", "ord(0<1<2<3)"]), 3);
    assert_eq!(code(&["--cap-support", "99", "measure", "ord(0<1)"]), 3);
    assert_eq!(code(&["test", "--families", "bogus"]), 2);
    assert_eq!(code(&["test", "--families", "density(2,2)"]), 2);
}

#[test]
fn caps_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_uminflow"))
        .args(["measure", "ord(0<1<2<3)"])
        .env("UMINFLOW_CAPS", "support=3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sampling_is_reproducible() {
    let dir = tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let c = dir.path().join("c.txt");
    for (p, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        stdout(&["sample", "30", "--seed", seed, "--out", path_str(p)]);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
    let text = fs::read_to_string(&a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("30"));
    let mut seq: Vec<usize> = lines
        .next()
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    seq.sort();
    assert_eq!(seq, (0..30).collect::<Vec<_>>());
}

#[test]
fn sampled_graph_round_trips_through_bits() {
    let dir = tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let bits = dir.path().join("bits.txt");
    let back = dir.path().join("back.txt");
    stdout(&[
        "sample",
        "12",
        "--seed",
        "3",
        "--kind",
        "graph",
        "--out",
        path_str(&g),
    ]);
    stdout(&["encode", path_str(&g), "--out", path_str(&bits)]);
    let encoded = fs::read_to_string(&bits).unwrap();
    assert_eq!(encoded.trim().len(), 66);
    let expected: String = uminflow::sampler::sample_bits(3, 66)
        .into_iter()
        .map(|b| if b { '1' } else { '0' })
        .collect();
    assert_eq!(encoded.trim(), expected);
    stdout(&["decode", path_str(&bits), "--out", path_str(&back)]);
    assert_eq!(fs::read(&g).unwrap(), fs::read(&back).unwrap());
}

#[test]
fn decode_accepts_hex() {
    let dir = tempdir().unwrap();
    let hex = dir.path().join("hex.txt");
    fs::write(&hex, "0xA\n").unwrap();
    // 1010: ranks 0 and 2 are {0,1} and {1,2}; four bits need four vertices
    assert_eq!(stdout(&["decode", path_str(&hex)]), "4\n0 1\n1 2\n");
}

#[test]
fn depth_zero_gives_empty_report() {
    let v = json(&["test", "--seed", "1", "--depth", "0"]);
    let families = v["families"].as_array().unwrap();
    assert_eq!(families.len(), 3);
    for f in families {
        assert!(f["levels"].as_array().unwrap().is_empty());
        assert_eq!(f["verdict"]["status"], "pass");
    }
}

#[test]
fn canonical_extension_fails_the_poset_family() {
    let v = json(&[
        "test",
        "--canon",
        "16",
        "--families",
        "poset",
        "--depth",
        "3",
    ]);
    let f = &v["families"][0];
    assert_eq!(f["family"], "poset");
    assert_eq!(f["verdict"]["status"], "fail");
    assert_eq!(f["verdict"]["level"], 3);
}

#[test]
fn test_reads_order_files() {
    let dir = tempdir().unwrap();
    let o = dir.path().join("o.txt");
    fs::write(&o, "4\n3 0 1 2\n").unwrap();
    let v = json(&[
        "test",
        "--order",
        path_str(&o),
        "--families",
        "unbounded(3)",
        "--depth",
        "2",
    ]);
    let f = &v["families"][0];
    assert_eq!(f["levels"][0]["member"], true);
    assert_eq!(f["verdict"]["status"], "fail");
    assert_eq!(f["verdict"]["level"], 1);
}

#[test]
fn iso_between_identical_presentations_is_identity() {
    let v = json(&[
        "iso", "--left", "rational", "--right", "rational", "--depth", "8",
    ]);
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 8);
    for (i, p) in pairs.iter().enumerate() {
        assert_eq!(p[0], i);
        assert_eq!(p[1], i);
    }
}

#[test]
fn randomizer_certificates_verify() {
    let dir = tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    for seed in ["0", "1", "2"] {
        stdout(&[
            "--format",
            "json",
            "randomizer",
            "--seed",
            seed,
            "--depth",
            "40",
            "--out",
            path_str(&cert),
        ]);
        assert_eq!(
            stdout(&["randomizer", "--verify", path_str(&cert)]).trim(),
            "verified"
        );
    }
    let text = fs::read_to_string(&cert).unwrap();
    let parsed: Value = serde_json::from_str(&text).unwrap();
    let round = uminflow::randomizer::RandomizerCertificate::from_json(&parsed).unwrap();
    assert_eq!(round.to_json(), parsed);

    fs::write(&cert, text.replace("\"seed\": 2", "\"seed\": 5")).unwrap();
    assert_eq!(code(&["randomizer", "--verify", path_str(&cert)]), 4);
    fs::write(&cert, "{").unwrap();
    assert_eq!(code(&["randomizer", "--verify", path_str(&cert)]), 2);
}

#[test]
fn obstruction_report() {
    let v = json(&["obstruction", "1"]);
    assert_eq!(v["trapped"], true);
    assert_eq!(v["measure"], "1/1");
    assert_eq!(code(&["--cap-poset", "4", "obstruction", "6"]), 3);
}
