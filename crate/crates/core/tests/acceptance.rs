//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Runs with `harness = false`, so the lines appear in plain `cargo test`
//! output. A criterion that cannot be met prints FAIL with the reason; the
//! target only exits nonzero if a check produces a result that contradicts
//! the recorded analysis (see `unexpected` below).

use std::process::ExitCode;
use std::time::Instant;

use motivic_ext::cache::DiskCache;
use motivic_ext::cobar::{budget_from_env, Engine};
use motivic_ext::compare::s0_cokernel_analysis;
use motivic_ext::grading::Tridegree;
use motivic_ext::tables::{
    contains_cyclic_of_order, region_mismatches, round_trip_failures, splitting_check, StemTable,
};
use motivic_ext::verify::{self, CheckResult, DegreeBox, Status, VerifyReport};

struct Line {
    pass: bool,
    detail: String,
    /// Failures not explained by the budget or by a known false claim.
    unexpected: Vec<String>,
}

fn summarize(c: &CheckResult) -> String {
    let mut s = format!(
        "{} {:?}: {} checked, {} unverified, {} failures",
        c.name,
        c.status,
        c.checked,
        c.unverified,
        c.failures.len()
    );
    if let Some(f) = c.failures.first() {
        let at = f.tridegree.map(|d| format!(" at {d}")).unwrap_or_default();
        s.push_str(&format!(" (first{at}: {})", f.detail));
    }
    s
}

/// Pass iff every check passed; any failure other than over-budget
/// tridegrees is unexpected.
fn from_checks(checks: &[&CheckResult]) -> Line {
    Line {
        pass: checks.iter().all(|c| c.passed()),
        detail: checks.iter().map(|c| summarize(c)).collect::<Vec<_>>().join("; "),
        unexpected: checks
            .iter()
            .flat_map(|c| c.failures.iter().map(move |f| format!("{}: {f:?}", c.name)))
            .collect(),
    }
}

fn find<'a>(r: &'a VerifyReport, name: &str) -> &'a CheckResult {
    r.checks.iter().find(|c| c.name == name).expect("check present")
}

fn criterion4(engine: &Engine, r: &VerifyReport, bx: &DegreeBox) -> Line {
    let exact = verify::cokernel_exactness(engine, bx);
    let parts = [
        find(r, "inclusion_chain_map"),
        find(r, "cokernel_vanishing"),
        find(r, "cokernel_witnesses"),
    ];
    let mut line = from_checks(&parts);
    line.pass &= exact.passed();
    line.detail.push_str(&format!("; {}", summarize(&exact)));
    // The converse of the vanishing ranges fails only where no
    // negative-cone word of the right shape fits; every such tridegree is
    // listed in the ledger's analysis by its shape, so check the shape.
    for f in &exact.failures {
        let d = f.tridegree.expect("exactness failures carry a tridegree");
        if !converse_gap_explained(d) {
            line.unexpected.push(format!("cokernel_exactness: empty at {d}"));
        }
    }
    line
}

/// An empty cokernel outside the vanishing ranges is explained when the Z2
/// slice has no negative-cone coefficient at all, which happens when no
/// `θ/(ρ^k τ^l)` of degree `(k, k+l+2)` leaves a feasible letter total.
fn converse_gap_explained(d: Tridegree) -> bool {
    use motivic_ext::cobar::slice_coefficients;
    use motivic_ext::coeff::GroundRing;
    !slice_coefficients(GroundRing::Z2, d)
        .iter()
        .any(|m| m.is_neg())
}

fn criterion6(engine: &Engine) -> Line {
    let mut bad = Vec::new();
    let mut unverified = 0;
    let mut unexpected = Vec::new();
    for w in 2..=5 {
        for f in 0..=6u32 {
            match s0_cokernel_analysis(engine, f, w) {
                Ok(a) => {
                    let want = format!("θ/τ^{}·h₀^{f}", w - 2);
                    let ok = a.dim == 1
                        && a.dim_recomputed == a.dim
                        && a.candidate_spans
                        && a.labels.len() == 1;
                    if a.dim_recomputed != a.dim {
                        unexpected.push(format!("(f={f}, w={w}): recomputed dim differs"));
                    }
                    if !ok {
                        bad.push(format!("(f={f},w={w}) dim {}", a.dim));
                        // Odd w with f >= 1: θ/τ^{w-2}[τ₀^f] is a boundary.
                        let explained = w % 2 == 1 && f >= 1 && a.dim == 0;
                        if !explained {
                            unexpected.push(format!("(f={f}, w={w}): dim {} labels {:?} ({want})", a.dim, a.labels));
                        }
                    }
                }
                Err(motivic_ext::Error::SliceTooLarge { .. }) => unverified += 1,
                Err(e) => unexpected.push(format!("(f={f}, w={w}): {e}")),
            }
        }
    }
    Line {
        pass: bad.is_empty() && unverified == 0 && unexpected.is_empty(),
        detail: format!(
            "{} of 28 cells differ from dimension 1 [{}], {unverified} unverified",
            bad.len(),
            bad.join(", ")
        ),
        unexpected,
    }
}

fn criterion8() -> Line {
    let t = match StemTable::shipped() {
        Ok(t) => t,
        Err(e) => {
            return Line {
                pass: false,
                detail: e.to_string(),
                unexpected: vec![e.to_string()],
            }
        }
    };
    let rt = round_trip_failures(&t);
    let region = region_mismatches(&t);
    let split = splitting_check(&t);
    let order32 = t.get(7, 4).is_some_and(|g| contains_cyclic_of_order(g, 32));
    let mut unexpected: Vec<String> = rt
        .iter()
        .chain(&region)
        .map(|c| format!("{c:?}"))
        .collect();
    if !order32 {
        unexpected.push("no element of order 32 at (7, 4)".into());
    }
    // The printed "48" at s = 13, s - w = 7 carries no split summand.
    unexpected.extend(
        split
            .iter()
            .filter(|c| (c.s, c.row) != (13, 7))
            .map(|c| format!("unsplit {c:?}")),
    );
    Line {
        pass: rt.is_empty() && region.is_empty() && split.is_empty() && order32,
        detail: format!(
            "{} cells, {} round-trip failures, {} shading mismatches, splitting violations [{}], order 32 at (7,4): {order32}",
            t.len(),
            rt.len(),
            region.len(),
            split
                .iter()
                .map(|c| format!("(s={}, w={}) {}", c.s, c.w, c.expr))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        unexpected,
    }
}

fn main() -> ExitCode {
    let bx = DegreeBox::ACCEPTANCE;
    let budget = budget_from_env();
    let dir1 = tempfile::tempdir().expect("temp dir");
    let dir2 = tempfile::tempdir().expect("temp dir");
    println!("acceptance box {bx}, slice budget {budget}");

    let start = Instant::now();
    let engine = Engine::new(budget).with_disk_cache(DiskCache::new(dir1.path()));
    let report = verify::run_campaign(&engine, &bx);
    let first_run = start.elapsed();

    let mut lines: Vec<(u32, &str, Line)> = vec![
        (
            1,
            "axioms and d∘d = 0",
            from_checks(&[find(&report, "algebra_axioms"), find(&report, "d_squared")]),
        ),
        (2, "monomial degree bounds", from_checks(&[find(&report, "degree_bounds")])),
        (3, "negative cone bound", from_checks(&[find(&report, "neg_cone_bound")])),
        (4, "inclusion and cokernel", criterion4(&engine, &report, &bx)),
        (5, "Ext comparison", from_checks(&[find(&report, "ext_comparison")])),
        (6, "stem zero cokernel", criterion6(&engine)),
        (7, "ρ-Bockstein bound", from_checks(&[find(&report, "bockstein_bound")])),
    ];
    let t8 = Instant::now();
    let mut c8 = criterion8();
    let t8 = t8.elapsed();
    c8.detail.push_str(&format!(", {:.3}s", t8.as_secs_f64()));
    lines.push((8, "table suite", c8));
    drop(engine);

    // Two further runs: a second cold cache, then the warm first cache.
    let json = |r: &VerifyReport| serde_json::to_string_pretty(r).expect("serializable");
    let a = json(&report);
    let cold = Engine::new(budget).with_disk_cache(DiskCache::new(dir2.path()));
    let b = json(&verify::run_campaign(&cold, &bx));
    drop(cold);
    let warm = Engine::new(budget).with_disk_cache(DiskCache::new(dir1.path()));
    let c = json(&verify::run_campaign(&warm, &bx));
    let same = a == b && a == c;
    lines.push((
        9,
        "determinism",
        Line {
            pass: same,
            detail: format!(
                "cold/cold identical: {}, cold/warm identical: {}, {} bytes",
                a == b,
                a == c,
                a.len()
            ),
            unexpected: if same { vec![] } else { vec!["reports differ".into()] },
        },
    ));

    let mut unexpected = Vec::new();
    for (n, name, l) in &lines {
        println!(
            "criterion {n} ({name}): {} | {}",
            if l.pass { "PASS" } else { "FAIL" },
            l.detail
        );
        unexpected.extend(l.unexpected.iter().map(|u| format!("criterion {n}: {u}")));
    }
    println!("first campaign run {:.1}s", first_run.as_secs_f64());
    let unverified: usize = report.checks.iter().map(|c| c.unverified).sum();
    if report.checks.iter().any(|c| c.status == Status::Incomplete) {
        println!("{unverified} tridegree checks were out of reach at budget {budget}");
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            eprintln!("unexpected: {u}");
        }
        ExitCode::FAILURE
    }
}
