use std::path::Path;
use std::process::{Command, Output};

use motivic_ext::cache::SliceFile;

fn stems(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stems"))
        .args(args)
        .env_remove("STEMS_CACHE_DIR")
        .env_remove("STEMS_SLICE_BUDGET")
        .output()
        .expect("run stems")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn validate(json: &str) -> serde_json::Value {
    let schema: serde_json::Value = serde_json::from_str(include_str!("../schema/stems.schema.json")).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap_or_else(|e| panic!("schema: {e}"));
    let v: serde_json::Value = serde_json::from_str(json).expect("valid JSON");
    if let Err(errors) = compiled.validate(&v) {
        let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("schema violations: {msgs:?}");
    }
    v
}

#[test]
fn table_query_examples() {
    let o = stems(&["table", "query", "7", "4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("480·12·4 | red shaded | row 3 | region: Isomorphism boundary"), "{out}");
    assert!(out.contains("order 32: true"));
    let out = stdout(&stems(&["table", "query", "-2", "-4"]));
    assert!(out.starts_with("π_2 | shaded | row 2"), "{out}");
    let o = stems(&["table", "query", "20", "0"]);
    assert!(!o.status.success());
}

#[test]
fn table_check_reports_unsplit_cell() {
    let o = stems(&["table", "check"]);
    let out = stdout(&o);
    assert!(out.contains("cells: 176"));
    assert!(out.contains("round trip failures: 0"));
    assert!(out.contains("shading mismatches: 0"));
    assert!(out.contains("s=13 w=6 row=7 48"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ext_json_matches_schema() {
    let o = stems(&["ext", "--ring", "R", "--box", "-2:6,0:6,-2:4", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = validate(&stdout(&o));
    let records = v["records"].as_array().unwrap();
    assert!(!records.is_empty());
    // h₀ and ρh₁ at (0, 1, 0).
    let at = records
        .iter()
        .find(|r| r["s"] == 0 && r["f"] == 1 && r["w"] == 0)
        .unwrap();
    assert_eq!(at["dim"], 2);
}

#[test]
fn ext_ascii_shows_stem_zero_family() {
    let o = stems(&["ext", "--ring", "Z2", "--box", "0:0,0:4,2:4", "--format", "ascii"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let block = |w: i32| -> Vec<String> {
        let start = out.find(&format!("w = {w}\n")).unwrap();
        out[start..]
            .lines()
            .skip(1)
            .take(5)
            .map(|l| l.split('|').nth(1).unwrap().trim().to_string())
            .collect()
    };
    assert_eq!(block(2), vec!["1"; 5]);
    assert_eq!(block(3), vec![".", ".", ".", ".", "1"]);
    assert_eq!(block(4), vec!["1"; 5]);
}

#[test]
fn ext_svg_is_well_formed() {
    let o = stems(&["ext", "--ring", "C", "--box", "0:3,0:3,0:2", "--format", "svg"]);
    assert!(o.status.success());
    let svg = stdout(&o);
    let doc = roxmltree::Document::parse(&svg).expect("well-formed XML");
    let dots = doc.descendants().filter(|n| n.has_tag_name("circle")).count();
    let json = stdout(&stems(&["ext", "--ring", "C", "--box", "0:3,0:3,0:2"]));
    let v = validate(&json);
    let total: u64 = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["dim"].as_u64().unwrap())
        .sum();
    assert_eq!(dots as u64, total);
    assert!(total > 0);
}

#[test]
fn bad_flags_rejected() {
    assert!(!stems(&["ext", "--ring", "Q", "--box", "0:1,0:1,0:1"]).status.success());
    assert!(!stems(&["ext", "--ring", "R", "--box", "0:1,0:1"]).status.success());
    assert!(!stems(&["compare", "--box", "0:1,0:1,0:1", "--format", "svg"]).status.success());
}

#[test]
fn verify_small_box_passes() {
    let o = stems(&["verify", "--box", "-3:3,0:2,-2:3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = validate(&stdout(&o));
    assert_eq!(v["pass"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 9);
}

#[test]
fn verify_empty_box_is_vacuous() {
    let o = stems(&["verify", "--box", "1:0,0:3,0:3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = validate(&stdout(&o));
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_over_budget_is_not_a_pass() {
    let o = stems(&["--budget", "2", "verify", "--box", "-1:1,0:2,0:1"]);
    assert_eq!(o.status.code(), Some(1));
    let v = validate(&stdout(&o));
    assert_eq!(v["pass"], false);
    assert!(stderr(&o).contains("out of reach"));
}

/// Flips a cached matrix entry so that `d∘d = 0` fails, rewriting the file
/// with a valid checksum. Returns the ring and the tridegree where the
/// composite through the corrupted map lands.
fn corrupt_one(dir: &Path) -> (String, String) {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "slice"))
        .collect();
    files.sort();
    let load = |p: &Path| SliceFile::read(p).unwrap();
    for p in &files {
        let f = load(p);
        let up = f.tridegree.up();
        let next = dir.join(format!("{}_s{}_f{}_w{}.slice", f.ring.name(), up.s, up.f, up.w));
        if !next.exists() || f.d_out.cols() == 0 {
            continue;
        }
        let g = load(&next);
        // A target basis word with nonzero image under the next map.
        let Some(i) = (0..g.d_out.cols()).find(|&i| (0..g.d_out.rows()).any(|r| g.d_out.get(r, i))) else {
            continue;
        };
        let mut bad = f.clone();
        bad.d_out.toggle(i, 0);
        bad.write(p).unwrap();
        return (f.ring.name().to_string(), up.to_string());
    }
    panic!("no slice suitable for corruption");
}

#[test]
fn corrupted_matrix_reported_with_tridegree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let bx = "-2:2,0:2,-1:1";
    let o = stems(&["--cache", cache, "verify", "--box", bx]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (ring, deg) = corrupt_one(dir.path());
    let o = stems(&["--cache", cache, "verify", "--box", bx]);
    assert_eq!(o.status.code(), Some(1));
    let v = validate(&stdout(&o));
    let d2 = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "d_squared")
        .unwrap();
    assert_eq!(d2["status"], "fail");
    let err = stderr(&o);
    assert!(err.starts_with(&format!("d_squared failed at {deg} over {ring}")), "{err}");
    assert!(
        d2["failures"]
            .as_array()
            .unwrap()
            .iter()
            .any(|f| f["detail"].as_str().unwrap().contains("d∘d ≠ 0")),
        "{d2}"
    );
}

#[test]
fn checksum_failure_stops_ext() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["--cache", cache, "ext", "--ring", "R", "--box", "-1:1,0:2,-1:1"];
    assert!(stems(&args).status.success());
    let mut victim = None;
    for e in std::fs::read_dir(dir.path()).unwrap() {
        let p = e.unwrap().path();
        if SliceFile::read(&p).is_ok_and(|f| !f.basis.is_empty()) {
            victim = Some(p);
            break;
        }
    }
    let p = victim.unwrap();
    let mut bytes = std::fs::read(&p).unwrap();
    let k = bytes.len() / 2;
    bytes[k] ^= 0x10;
    std::fs::write(&p, bytes).unwrap();
    let o = stems(&args);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("checksum mismatch"), "{}", stderr(&o));
}

#[test]
fn compare_regions() {
    let o = stems(&["compare", "--box", "-4:-1,0:3,-3:2"]);
    assert!(o.status.success());
    let v = validate(&stdout(&o));
    let s = &v["summary"];
    assert_eq!((s["not_inj"].as_u64(), s["inj_not_surj"].as_u64()), (Some(0), Some(0)));
    assert_eq!(s["inconsistent"], 0);
    // The line s = 3w - 6 at w = 2, 3.
    let o = stems(&["compare", "--box", "0:3,0:3,2:3"]);
    assert!(o.status.success());
    let v = validate(&stdout(&o));
    let on_line: Vec<_> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["verdict_predicted"] == "Injection")
        .collect();
    assert!(!on_line.is_empty());
    assert!(on_line.iter().any(|r| r["verdict_observed"] == "InjNotSurj"));
    // Entirely inside s >= 3w - 5.
    let o = stems(&["compare", "--box", "4:8,0:3,3:4", "--format", "ascii"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("inj_not_surj 0, not_inj 0, inconsistent 0"));
}

#[test]
fn cold_caches_give_identical_output() {
    let run = |dir: &Path| {
        let c = dir.to_str().unwrap();
        (
            stdout(&stems(&["--cache", c, "ext", "--ring", "Z2", "--box", "-2:3,0:3,-1:3"])),
            stdout(&stems(&["--cache", c, "verify", "--box", "-2:3,0:3,-1:3"])),
        )
    };
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = run(a.path());
    assert_eq!(first, run(b.path()));
    assert_eq!(first, run(a.path()));
    assert!(std::fs::read_dir(a.path()).unwrap().count() > 0);
}
