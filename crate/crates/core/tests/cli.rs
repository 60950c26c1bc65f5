use std::path::PathBuf;

use nilbott::cli::{run, EXIT_FAILED, EXIT_INPUT, EXIT_OK};

fn nilbott(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(std::iter::once("nilbott").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn golden(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name).display().to_string()
}

#[test]
fn cohomology_examples() {
    assert_eq!(nilbott(&["cohomology", "--base", "klein", "--phi", "g=-1,h=+1"]), (EXIT_OK, "Z\n".into()));
    assert_eq!(nilbott(&["cohomology", "--base", "torus", "--phi", "a=+1,b=+1"]), (EXIT_OK, "Z\n".into()));
    assert_eq!(nilbott(&["cohomology", "--base", "klein", "--phi", "g=-1,h=-1"]), (EXIT_OK, "Z_2\n".into()));
    let (code, json) = nilbott(&["cohomology", "--base", "K", "--phi", "g=1,h=-1", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!((v["schema_version"].as_u64(), v["h2"].as_str()), (Some(1), Some("Z_2")));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(nilbott(&["cohomology", "--base", "sphere", "--phi", "x=1"]).0, EXIT_INPUT);
    assert_eq!(nilbott(&["cohomology", "--base", "klein", "--phi", "g=-1"]).0, EXIT_INPUT);
    assert_eq!(nilbott(&["cohomology", "--base", "torus", "--phi", "a=-1,b=2"]).0, EXIT_INPUT);
    assert_eq!(nilbott(&["verify", "--suite", ""]).0, EXIT_INPUT);
    assert_eq!(nilbott(&["verify", "--suite", "nonsense"]).0, EXIT_INPUT);
    assert_eq!(nilbott(&["classify", "/nonexistent/tower.txt"]).0, EXIT_INPUT);
    assert_eq!(nilbott(&["invariants", "--label", "G7"]).0, EXIT_INPUT);
}

#[test]
fn classify_examples() {
    for (file, line) in [
        ("tower_b3.txt", "B3 (finite)\n"),
        ("tower_t3.txt", "T3 (finite)\n"),
        ("tower_gamma5.txt", "Gamma(5) (infinite)\n"),
    ] {
        assert_eq!(nilbott(&["classify", &golden(file), "--format", "text"]), (EXIT_OK, line.into()), "{file}");
    }
}

#[test]
fn classify_certificate_is_reproducible() {
    let (code, first) = nilbott(&["classify", &golden("tower_gamma5.txt")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(first, std::fs::read_to_string(golden("classify_gamma5.json")).unwrap());
    // The certificate's recorded input reproduces the verdict byte for byte.
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let replay = dir.path().join("replay.txt");
    std::fs::write(&replay, v["certificate"]["inputs"]["tower"].as_str().unwrap()).unwrap();
    let (_, second) = nilbott(&["classify", replay.to_str().unwrap()]);
    assert_eq!(first, second);
}

#[test]
fn tables_markdown_and_json_agree() {
    let (code, md) = nilbott(&["tables"]);
    assert_eq!(code, EXIT_OK);
    assert!(md.contains("| [f]=0 | B1 | B3 | G2 |"));
    assert!(md.contains("| [f]:torsionfree | Delta(k) | - |"));
    let (_, json) = nilbott(&["tables", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    for table in v["tables"].as_array().unwrap() {
        for col in table["columns"].as_array().unwrap() {
            for key in ["h2", "zero", "torsion", "torsionfree"] {
                assert!(md.contains(col[key].as_str().unwrap()));
            }
        }
    }
}

#[test]
fn verify_suites_pass_deterministically() {
    let (code, out) = nilbott(&["verify", "--suite", "paper"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.ends_with("0 failed\n"));
    let (code, first) = nilbott(&["verify", "--suite", "freeness", "--maxlen", "4", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let (_, second) = nilbott(&["verify", "--suite", "freeness", "--maxlen", "4", "--format", "json"]);
    assert_eq!(first, second);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    let claims: Vec<&str> =
        v["certificates"].as_array().unwrap().iter().map(|c| c["claim"].as_str().unwrap()).collect();
    let mut sorted = claims.clone();
    sorted.sort_unstable();
    assert_eq!(claims, sorted);
    assert_eq!(nilbott(&["verify", "--suite", "properties", "--seed", "3"]).0, EXIT_OK);
}

#[test]
fn failing_witness_exits_1() {
    assert_ne!(EXIT_FAILED, EXIT_OK);
    // A depth-4 tower has no catalogue witness to fail, so it classifies cleanly.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("deep.txt");
    std::fs::write(&path, "base=K phi={g:+1,h:+1} k=0\nstage5: phi={g:+1,h:+1,n:+1} lifts=0,0,0\n").unwrap();
    let (code, out) = nilbott(&["classify", path.to_str().unwrap(), "--format", "text"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "unclassified (finite)\n"));
}

#[test]
fn invariants_report() {
    let (code, out) = nilbott(&["invariants", "--label", "B4"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let r = &v["reports"][0];
    assert_eq!(r["h1_torsion"], serde_json::json!([4]));
    assert_eq!(r["betti"], serde_json::json!([1, 1, 0, 0]));
    assert_eq!(r["hc_pass"], true);
}
