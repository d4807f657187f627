//! Verification campaigns over a box of tridegrees.
//!
//! Each check runs independently at every tridegree it needs. Tridegrees
//! whose slices exceed the engine's budget are counted as unverified rather
//! than passed. Results are merged in box order, so reports are
//! reproducible.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cobar::{slice_coefficients, CobarWord, Engine};
use crate::coeff::{neg_cone_bound_check, CoeffMonomial, GroundRing};
use crate::compare::{
    bockstein_bound, bockstein_inputs, check_chain_map, cokernel_basis, cokernel_must_vanish,
    ext_compare, inclusion_matrix, ComparisonReport,
};
use crate::error::Error;
use crate::gf2;
use crate::grading::Tridegree;
use crate::par::par_map;
use crate::steenrod::{
    abar_basis, coassoc_left, coassoc_right, coproduct, coproduct_of, degree_bounds_hold, product,
    tensor_square_product, AbarMonomial, AlgElement,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeBox {
    pub s_min: i32,
    pub s_max: i32,
    pub f_min: u32,
    pub f_max: u32,
    pub w_min: i32,
    pub w_max: i32,
}

impl DegreeBox {
    /// `-6 <= s <= 9`, `0 <= f <= 8`, `-4 <= w <= 5`.
    pub const ACCEPTANCE: DegreeBox = DegreeBox {
        s_min: -6,
        s_max: 9,
        f_min: 0,
        f_max: 8,
        w_min: -4,
        w_max: 5,
    };

    pub fn is_empty(&self) -> bool {
        self.s_min > self.s_max || self.f_min > self.f_max || self.w_min > self.w_max
    }

    pub fn contains(&self, d: Tridegree) -> bool {
        (self.s_min..=self.s_max).contains(&d.s)
            && (self.f_min..=self.f_max).contains(&d.f)
            && (self.w_min..=self.w_max).contains(&d.w)
    }

    /// Every tridegree, ordered by `w`, then `f`, then `s`.
    pub fn tridegrees(&self) -> Vec<Tridegree> {
        let mut v = Vec::new();
        for w in self.w_min..=self.w_max {
            for f in self.f_min..=self.f_max {
                for s in self.s_min..=self.s_max {
                    v.push(Tridegree::new(s, f, w));
                }
            }
        }
        v
    }
}

impl fmt::Display for DegreeBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{},{}:{},{}:{}",
            self.s_min, self.s_max, self.f_min, self.f_max, self.w_min, self.w_max
        )
    }
}

/// Parses `smin:smax,fmin:fmax,wmin:wmax`. A range with `min > max` is
/// allowed and makes the box empty.
impl FromStr for DegreeBox {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != 3 {
            return Err(format!("expected smin:smax,fmin:fmax,wmin:wmax, got '{text}'"));
        }
        let range = |p: &str, what: &str| -> Result<(i32, i32), String> {
            let (a, b) = p
                .split_once(':')
                .ok_or_else(|| format!("{what} range '{p}' lacks ':'"))?;
            let n = |x: &str| {
                x.trim()
                    .parse::<i32>()
                    .map_err(|_| format!("bad {what} bound '{x}'"))
            };
            Ok((n(a)?, n(b)?))
        };
        let (s_min, s_max) = range(parts[0], "s")?;
        let (f_min, f_max) = range(parts[1], "f")?;
        let (w_min, w_max) = range(parts[2], "w")?;
        if f_min < 0 || f_max < 0 {
            return Err("filtration bounds must be nonnegative".into());
        }
        Ok(DegreeBox {
            s_min,
            s_max,
            f_min: f_min as u32,
            f_max: f_max as u32,
            w_min,
            w_max,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// No failures, but some tridegrees were out of reach.
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub tridegree: Option<Tridegree>,
    pub ring: Option<GroundRing>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    /// Tridegrees (or monomials, for algebra checks) actually checked.
    pub checked: usize,
    /// Tridegrees skipped because a needed slice exceeds the budget.
    pub unverified: usize,
    pub failures: Vec<Failure>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    #[serde(rename = "box")]
    pub degree_box: DegreeBox,
    pub budget: u128,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

/// What one unit of a check found.
enum Outcome {
    Ok,
    Skipped,
    Failed(Vec<Failure>),
}

fn fail(d: Option<Tridegree>, ring: Option<GroundRing>, detail: impl Into<String>) -> Outcome {
    Outcome::Failed(vec![Failure {
        tridegree: d,
        ring,
        detail: detail.into(),
    }])
}

fn collect(name: &str, outcomes: Vec<Outcome>) -> CheckResult {
    let mut checked = 0;
    let mut unverified = 0;
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Ok => checked += 1,
            Outcome::Skipped => unverified += 1,
            Outcome::Failed(f) => {
                checked += 1;
                failures.extend(f);
            }
        }
    }
    let status = if !failures.is_empty() {
        Status::Fail
    } else if unverified > 0 {
        Status::Incomplete
    } else {
        Status::Pass
    };
    CheckResult {
        name: name.to_string(),
        status,
        checked,
        unverified,
        failures,
    }
}

/// Runs `f` unless a slice it needs is over budget. An over-budget error
/// raised while running also counts as skipped.
fn guarded(
    reachable: bool,
    d: Tridegree,
    ring: Option<GroundRing>,
    f: impl FnOnce() -> crate::Result<Outcome>,
) -> Outcome {
    if !reachable {
        return Outcome::Skipped;
    }
    match f() {
        Ok(o) => o,
        Err(Error::SliceTooLarge { .. }) => Outcome::Skipped,
        Err(e) => fail(Some(d), ring, e.to_string()),
    }
}

/// Abar monomials with `0 < t <= tmax`.
pub fn monomials_up_to(tmax: i32) -> Vec<AbarMonomial> {
    let mut v = Vec::new();
    for t in 1..=tmax {
        for w in 0..=t {
            v.extend(abar_basis(t, w));
        }
    }
    v
}

/// Coproduct axioms on monomials of degree at most `tmax`, for every ring.
pub fn algebra_axioms(tmax: i32) -> CheckResult {
    let mons = monomials_up_to(tmax);
    let one = |z: AbarMonomial| AlgElement::monomial(CoeffMonomial::ONE, z);
    let mut outcomes = Vec::new();
    for ring in GroundRing::ALL {
        outcomes.extend(par_map(&mons, |&z| {
            let mut bad = Vec::new();
            if coassoc_left(&z, ring) != coassoc_right(&z, ring) {
                bad.push(format!("{z}: not coassociative"));
            }
            let c = coproduct(&z, ring);
            let side = |left: bool| {
                AlgElement::from_terms(
                    c.terms()
                        .iter()
                        .filter(|(_, a, b)| if left { a.is_unit() } else { b.is_unit() })
                        .map(|&(k, a, b)| (k, if left { b } else { a }))
                        .collect(),
                )
            };
            if side(true) != one(z) || side(false) != one(z) {
                bad.push(format!("{z}: counit fails"));
            }
            for &y in &mons {
                if z.degree().t + y.degree().t > tmax {
                    continue;
                }
                let zy = match product(&one(z), &one(y), ring) {
                    Ok(p) => p,
                    Err(e) => {
                        bad.push(format!("{z}·{y}: {e}"));
                        continue;
                    }
                };
                let lhs = coproduct_of(&zy, ring);
                let rhs = tensor_square_product(&coproduct(&z, ring), &coproduct(&y, ring), ring);
                if lhs != rhs {
                    bad.push(format!("ψ({z}·{y}) ≠ ψ({z})ψ({y})"));
                }
            }
            if bad.is_empty() {
                Outcome::Ok
            } else {
                Outcome::Failed(
                    bad.into_iter()
                        .map(|detail| Failure {
                            tridegree: None,
                            ring: Some(ring),
                            detail,
                        })
                        .collect(),
                )
            }
        }));
    }
    collect("algebra_axioms", outcomes)
}

/// `t <= 3w + 1` and `t >= 2^{c+1} - c - 2` with `c = t - 2w`, for every
/// monomial with `t <= tmax`, with τ₀ attaining both.
pub fn degree_bounds(tmax: i32) -> CheckResult {
    let mons = monomials_up_to(tmax);
    let mut outcomes: Vec<Outcome> = mons
        .iter()
        .map(|z| {
            if degree_bounds_hold(z) {
                Outcome::Ok
            } else {
                fail(None, None, format!("{z} at {} violates the bounds", z.degree()))
            }
        })
        .collect();
    let t0 = AbarMonomial::tau(0).degree();
    let c = t0.t - 2 * t0.w;
    if !(t0.t == 3 * t0.w + 1 && t0.t == (1 << (c + 1)) - c - 2) {
        outcomes.push(fail(None, None, "τ₀ does not attain both bounds"));
    }
    collect("degree_bounds", outcomes)
}

/// Every negative-cone coefficient occurring in a Z2 slice of the box
/// satisfies `t <= 3w - 6`, with θ on the line.
pub fn neg_cone_bound(bx: &DegreeBox) -> CheckResult {
    let degs = bx.tridegrees();
    let mut outcomes = par_map(&degs, |&d| {
        let bad: Vec<Failure> = slice_coefficients(GroundRing::Z2, d)
            .into_iter()
            .filter_map(|m| match m {
                CoeffMonomial::Neg { rho, tau } if !neg_cone_bound_check(rho, tau) => Some(Failure {
                    tridegree: Some(d),
                    ring: Some(GroundRing::Z2),
                    detail: format!("{m} at {} violates t <= 3w - 6", m.degree()),
                }),
                _ => None,
            })
            .collect();
        if bad.is_empty() {
            Outcome::Ok
        } else {
            Outcome::Failed(bad)
        }
    });
    let th = CoeffMonomial::THETA.degree();
    if th.t != 3 * th.w - 6 {
        outcomes.push(fail(None, None, "θ is not on the line t = 3w - 6"));
    }
    collect("neg_cone_bound", outcomes)
}

/// `d∘d = 0` at every tridegree of the box, for every ring.
pub fn d_squared(engine: &Engine, bx: &DegreeBox) -> CheckResult {
    let degs = bx.tridegrees();
    let mut outcomes = Vec::new();
    for ring in GroundRing::ALL {
        outcomes.extend(par_map(&degs, |&d| {
            guarded(engine.is_computable(ring, d), d, Some(ring), || {
                engine.check_d_squared(ring, d).map(|_| Outcome::Ok)
            })
        }));
    }
    collect("d_squared", outcomes)
}

fn both_computable(engine: &Engine, d: Tridegree) -> bool {
    engine.is_computable(GroundRing::R, d) && engine.is_computable(GroundRing::Z2, d)
}

/// The inclusion of the R complex into the Z2 complex commutes with `d`
/// and is injective on every slice of the box.
pub fn inclusion_chain_map(engine: &Engine, bx: &DegreeBox) -> CheckResult {
    let degs = bx.tridegrees();
    let outcomes = par_map(&degs, |&d| {
        guarded(both_computable(engine, d), d, None, || {
            check_chain_map(engine, d)?;
            let m = inclusion_matrix(engine, d)?;
            if gf2::rank(&m) != m.cols() {
                return Ok(fail(Some(d), None, "inclusion is not injective"));
            }
            Ok(Outcome::Ok)
        })
    });
    collect("inclusion_chain_map", outcomes)
}

fn slices_fit(engine: &Engine, d: Tridegree) -> bool {
    use crate::cobar::slice_size;
    [GroundRing::R, GroundRing::Z2]
        .iter()
        .all(|&r| slice_size(r, d) <= engine.budget())
}

/// The cokernel vanishes where `t - f >= 3w - 5` or `t <= f - 1`.
pub fn cokernel_vanishing(engine: &Engine, bx: &DegreeBox) -> CheckResult {
    let degs: Vec<Tridegree> = bx
        .tridegrees()
        .into_iter()
        .filter(|&d| cokernel_must_vanish(d))
        .collect();
    let outcomes = par_map(&degs, |&d| {
        guarded(slices_fit(engine, d), d, None, || {
            let ck = cokernel_basis(engine, d)?;
            if ck.is_empty() {
                return Ok(Outcome::Ok);
            }
            Ok(fail(Some(d), None, format!("cokernel contains {}", ck[0])))
        })
    });
    collect("cokernel_vanishing", outcomes)
}

/// Tridegrees of the box outside both vanishing ranges where the cokernel
/// is nonetheless empty.
pub fn cokernel_exactness(engine: &Engine, bx: &DegreeBox) -> CheckResult {
    let degs: Vec<Tridegree> = bx
        .tridegrees()
        .into_iter()
        .filter(|&d| !cokernel_must_vanish(d))
        .collect();
    let outcomes = par_map(&degs, |&d| {
        guarded(slices_fit(engine, d), d, None, || {
            if cokernel_basis(engine, d)?.is_empty() {
                return Ok(fail(
                    Some(d),
                    None,
                    "cokernel is empty outside both vanishing ranges",
                ));
            }
            Ok(Outcome::Ok)
        })
    });
    collect("cokernel_exactness", outcomes)
}

/// The words `θ[τ₀τ₁|τ₀τ₁]` and `θ[τ₀|τ₀]` lie outside the image, one on
/// each boundary line of the vanishing ranges.
pub fn cokernel_witnesses(engine: &Engine) -> CheckResult {
    let t01 = AbarMonomial::from_parts(&[0, 1], &[]);
    let t0 = AbarMonomial::tau(0);
    let witnesses = [
        CobarWord::new(CoeffMonomial::THETA, vec![t01, t01]),
        CobarWord::new(CoeffMonomial::THETA, vec![t0, t0]),
    ];
    let outcomes = witnesses
        .iter()
        .map(|w| {
            let d = w.tridegree();
            let (t, f) = (d.t(), d.f as i32);
            let on_line = t - f == 3 * d.w - 6 || t == f;
            guarded(slices_fit(engine, d), d, None, || {
                if !on_line {
                    return Ok(fail(Some(d), None, format!("{w} is off both boundary lines")));
                }
                if !cokernel_basis(engine, d)?.contains(w) {
                    return Ok(fail(Some(d), None, format!("{w} is not in the cokernel")));
                }
                Ok(Outcome::Ok)
            })
        })
        .collect();
    collect("cokernel_witnesses", outcomes)
}

/// All comparison reports over the box; `None` where out of reach.
pub fn comparison_reports(engine: &Engine, bx: &DegreeBox) -> Vec<(Tridegree, crate::Result<ComparisonReport>)> {
    let degs = bx.tridegrees();
    par_map(&degs, |&d| {
        if both_computable(engine, d) {
            (d, ext_compare(engine, d))
        } else {
            (
                d,
                Err(Error::SliceTooLarge {
                    ring: "R/Z2",
                    deg: d,
                    size: 0,
                    budget: engine.budget(),
                }),
            )
        }
    })
}

/// The Ext map agrees with the predicted region at every tridegree.
pub fn ext_comparison(engine: &Engine, bx: &DegreeBox) -> CheckResult {
    let outcomes = comparison_reports(engine, bx)
        .into_iter()
        .map(|(d, r)| {
            guarded(true, d, None, || {
                let r = r?;
                if r.consistent {
                    Ok(Outcome::Ok)
                } else {
                    Ok(fail(
                        Some(d),
                        None,
                        format!(
                            "predicted {:?}, observed {:?} (dims {} → {}, rank {})",
                            r.verdict_predicted, r.verdict_observed, r.dim_r, r.dim_z2, r.map_rank
                        ),
                    ))
                }
            })
        })
        .collect();
    collect("ext_comparison", outcomes)
}

/// `dim Ext_R` is bounded by the ρ-Bockstein E₁ term at every tridegree.
pub fn bockstein(engine: &Engine, bx: &DegreeBox) -> CheckResult {
    let degs = bx.tridegrees();
    let outcomes = par_map(&degs, |&d| {
        let reachable = engine.is_computable(GroundRing::R, d)
            && bockstein_inputs(d)
                .into_iter()
                .all(|c| engine.is_computable(GroundRing::C, c));
        guarded(reachable, d, Some(GroundRing::R), || {
            let b = bockstein_bound(engine, d)?;
            if b.holds {
                Ok(Outcome::Ok)
            } else {
                Ok(fail(
                    Some(d),
                    Some(GroundRing::R),
                    format!("dim {} exceeds the bound {}", b.dim_r, b.bound),
                ))
            }
        })
    });
    collect("bockstein_bound", outcomes)
}

/// Largest degree for the monomial-level checks.
pub const AXIOM_T_MAX: i32 = 12;
pub const DEGREE_BOUND_T_MAX: i32 = 24;

/// Every box-level check, in a fixed order.
pub fn run_campaign(engine: &Engine, bx: &DegreeBox) -> VerifyReport {
    let checks = vec![
        algebra_axioms(AXIOM_T_MAX),
        degree_bounds(DEGREE_BOUND_T_MAX),
        neg_cone_bound(bx),
        d_squared(engine, bx),
        inclusion_chain_map(engine, bx),
        cokernel_vanishing(engine, bx),
        cokernel_witnesses(engine),
        ext_comparison(engine, bx),
        bockstein(engine, bx),
    ];
    let pass = checks.iter().all(CheckResult::passed);
    VerifyReport {
        degree_box: *bx,
        budget: engine.budget(),
        checks,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> DegreeBox {
        "-3:3,0:2,-2:3".parse().unwrap()
    }

    #[test]
    fn box_parsing() {
        let b: DegreeBox = "-2:6,0:6,-2:4".parse().unwrap();
        assert_eq!(b.to_string(), "-2:6,0:6,-2:4");
        assert_eq!(b.tridegrees().len(), 9 * 7 * 7);
        assert!("1:0,0:0,0:0".parse::<DegreeBox>().unwrap().is_empty());
        assert!("0:1,0:1".parse::<DegreeBox>().is_err());
        assert!("0:1,-1:1,0:0".parse::<DegreeBox>().is_err());
        assert!("a:1,0:1,0:0".parse::<DegreeBox>().is_err());
    }

    #[test]
    fn small_campaign_passes() {
        let e = Engine::new(5000);
        let r = run_campaign(&e, &small());
        for c in &r.checks {
            assert_eq!(c.status, Status::Pass, "{c:?}");
        }
        assert!(r.pass);
    }

    #[test]
    fn empty_box_is_vacuous() {
        let e = Engine::new(5000);
        let b: DegreeBox = "1:0,0:3,0:3".parse().unwrap();
        for c in [d_squared(&e, &b), ext_comparison(&e, &b), bockstein(&e, &b)] {
            assert_eq!((c.status, c.checked), (Status::Pass, 0));
        }
    }

    #[test]
    fn budget_marks_incomplete() {
        let e = Engine::new(2);
        let c = d_squared(&e, &small());
        assert_eq!(c.status, Status::Incomplete);
        assert!(c.unverified > 0 && c.failures.is_empty());
    }

    #[test]
    fn exactness_fails_at_low_filtration() {
        let e = Engine::new(5000);
        let b: DegreeBox = "3:3,0:0,3:3".parse().unwrap();
        let c = cokernel_exactness(&e, &b);
        assert_eq!(c.status, Status::Fail);
    }
}
