//! The inclusion of the R-motivic cobar complex into the equivariant one,
//! its cokernel, and the induced map on Ext.
//!
//! The inference pattern is the usual one for a map of chain complexes:
//! an injection of complexes whose cokernel vanishes in a range of
//! filtrations gives an isomorphism on homology there, and an injection
//! one step past it.

use serde::{Deserialize, Serialize};

use crate::cobar::{differential, differential_matrix_between, CobarWord, CochainElement, Engine};
use crate::coeff::{CoeffMonomial, GroundRing};
use crate::error::{Error, Result};
use crate::gf2::{self, BitMatrix, SpanBuilder};
use crate::grading::{cobar_region_classify, homotopy_region_classify, RegionVerdict, Tridegree};
use crate::steenrod::AbarMonomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObservedVerdict {
    Iso,
    InjNotSurj,
    NotInj,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub tridegree: Tridegree,
    pub dim_r: usize,
    pub dim_z2: usize,
    pub map_rank: usize,
    pub verdict_predicted: RegionVerdict,
    pub verdict_observed: ObservedVerdict,
    pub consistent: bool,
}

fn build_inclusion(r: &[CobarWord], z: &[CobarWord]) -> Result<BitMatrix> {
    let idx: std::collections::HashMap<&CobarWord, usize> =
        z.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut m = BitMatrix::zeros(z.len(), r.len());
    for (j, w) in r.iter().enumerate() {
        let &i = idx.get(w).ok_or_else(|| Error::MissingWord(w.to_string()))?;
        m.set(i, j, true);
    }
    Ok(m)
}

/// The inclusion `C_R → C_Z2` at one tridegree, columns indexed by the R
/// basis and rows by the Z2 basis.
pub fn inclusion_matrix(engine: &Engine, deg: Tridegree) -> Result<BitMatrix> {
    let r = engine.basis(GroundRing::R, deg)?;
    let z = engine.basis(GroundRing::Z2, deg)?;
    build_inclusion(&r, &z)
}

/// The Z2 words outside the image of the inclusion.
pub fn cokernel_basis(engine: &Engine, deg: Tridegree) -> Result<Vec<CobarWord>> {
    let r = engine.basis(GroundRing::R, deg)?;
    let z = engine.basis(GroundRing::Z2, deg)?;
    let image: std::collections::HashSet<&CobarWord> = r.iter().collect();
    Ok(z.iter().filter(|w| !image.contains(w)).cloned().collect())
}

/// Checks `d_Z2 ∘ incl = incl ∘ d_R` out of `deg`.
pub fn check_chain_map(engine: &Engine, deg: Tridegree) -> Result<()> {
    let lhs = engine
        .d_out(GroundRing::Z2, deg)?
        .mul(&inclusion_matrix(engine, deg)?)?;
    let rhs = inclusion_matrix(engine, deg.up())?.mul(&*engine.d_out(GroundRing::R, deg)?)?;
    if lhs != rhs {
        return Err(Error::NotAChainMap(format!(
            "inclusion does not commute with d at {deg}"
        )));
    }
    Ok(())
}

/// Whether the cobar-level cokernel must vanish at `deg`.
pub fn cokernel_must_vanish(deg: Tridegree) -> bool {
    cobar_region_classify(deg.t(), deg.f as i32, deg.w) == RegionVerdict::Isomorphism
}

fn observe(dim_r: usize, dim_z2: usize, rank: usize) -> ObservedVerdict {
    if rank == dim_r && rank == dim_z2 {
        ObservedVerdict::Iso
    } else if rank == dim_r {
        ObservedVerdict::InjNotSurj
    } else {
        ObservedVerdict::NotInj
    }
}

fn consistent(pred: RegionVerdict, obs: ObservedVerdict) -> bool {
    match pred {
        RegionVerdict::Isomorphism => obs == ObservedVerdict::Iso,
        RegionVerdict::Injection => obs != ObservedVerdict::NotInj,
        RegionVerdict::Unclassified => true,
    }
}

fn map_rank(engine: &Engine, deg: Tridegree) -> Result<usize> {
    use GroundRing::{R, Z2};
    gf2::induced_map_rank(
        &*engine.d_out(R, deg)?,
        &*engine.d_in(R, deg)?,
        &*engine.d_out(Z2, deg)?,
        &*engine.d_in(Z2, deg)?,
        &inclusion_matrix(engine, deg)?,
    )
}

/// Ranks and verdicts for the map `Ext_R → Ext_Z2` at one tridegree.
pub fn ext_compare(engine: &Engine, deg: Tridegree) -> Result<ComparisonReport> {
    let dim_r = engine.ext_dim(GroundRing::R, deg)?;
    let dim_z2 = engine.ext_dim(GroundRing::Z2, deg)?;
    let rank = map_rank(engine, deg)?;
    let pred = homotopy_region_classify(deg.s, deg.w);
    let obs = observe(dim_r, dim_z2, rank);
    Ok(ComparisonReport {
        tridegree: deg,
        dim_r,
        dim_z2,
        map_rank: rank,
        verdict_predicted: pred,
        verdict_observed: obs,
        consistent: consistent(pred, obs),
    })
}

/// The expected cokernel class `θ/τ^{w-2}·h₀^f` at stem zero, as a word.
pub fn s0_candidate(f: u32, w: i32) -> Option<CobarWord> {
    (w >= 2).then(|| {
        CobarWord::new(
            CoeffMonomial::neg(0, (w - 2) as u32),
            vec![AbarMonomial::tau(0); f as usize],
        )
    })
}

fn s0_label(f: u32, w: i32) -> String {
    let theta = match w - 2 {
        0 => "θ".to_string(),
        1 => "θ/τ".to_string(),
        k => format!("θ/τ^{k}"),
    };
    match f {
        0 => theta,
        1 => format!("{theta}·h₀"),
        _ => format!("{theta}·h₀^{f}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct S0Cokernel {
    pub f: u32,
    pub w: i32,
    /// Dimension of the cokernel of `Ext_R → Ext_Z2` at `(0, f, w)`.
    pub dim: usize,
    /// The same dimension from freshly enumerated, reversed bases.
    pub dim_recomputed: usize,
    /// Labels of a basis of the cokernel.
    pub labels: Vec<String>,
    /// Whether the candidate word is a cocycle whose class spans the
    /// cokernel.
    pub candidate_spans: bool,
}

/// The cokernel of the Ext map at stem zero and its class labels.
pub fn s0_cokernel_analysis(engine: &Engine, f: u32, w: i32) -> Result<S0Cokernel> {
    let deg = Tridegree::new(0, f, w);
    let dim_z2 = engine.ext_dim(GroundRing::Z2, deg)?;
    let dim = dim_z2 - map_rank(engine, deg)?;
    let dim_recomputed = cokernel_dim_recomputed(engine, deg)?;
    let candidate_spans = match s0_candidate(f, w) {
        Some(c) if dim == 1 => candidate_spans_cokernel(engine, deg, &c)?,
        _ => false,
    };
    let labels = if dim == 1 && candidate_spans {
        vec![s0_label(f, w)]
    } else {
        Vec::new()
    };
    Ok(S0Cokernel {
        f,
        w,
        dim,
        dim_recomputed,
        labels,
        candidate_spans,
    })
}

/// Whether `c` is a Z2 cocycle that is nonzero modulo boundaries and the
/// image of R-cycles.
fn candidate_spans_cokernel(engine: &Engine, deg: Tridegree, c: &CobarWord) -> Result<bool> {
    let x = CochainElement::word(c.clone());
    if !differential(GroundRing::Z2, &x).is_zero() {
        return Ok(false);
    }
    let z = engine.basis(GroundRing::Z2, deg)?;
    let Some(pos) = z.iter().position(|w| w == c) else {
        return Ok(false);
    };
    let mut span = SpanBuilder::new(z.len());
    let d_in = engine.d_in(GroundRing::Z2, deg)?.transpose();
    for i in 0..d_in.rows() {
        span.insert(d_in.row(i));
    }
    let incl = inclusion_matrix(engine, deg)?;
    let cycles = gf2::kernel_basis(&*engine.d_out(GroundRing::R, deg)?);
    if cycles.rows() > 0 {
        let images = incl.mul(&cycles.transpose())?.transpose();
        for i in 0..images.rows() {
            span.insert(images.row(i));
        }
    }
    let mut v = vec![0u64; z.len().div_ceil(64)];
    v[pos / 64] |= 1 << (pos % 64);
    Ok(span.insert(&v))
}

fn reversed(mut v: Vec<CobarWord>) -> Vec<CobarWord> {
    v.reverse();
    v
}

/// Dimension of the Ext-map cokernel from scratch: bases are enumerated
/// afresh in reverse order, so every matrix is rebuilt and every pivot
/// falls differently. The engine's budget still applies.
pub fn cokernel_dim_recomputed(engine: &Engine, deg: Tridegree) -> Result<usize> {
    use GroundRing::{R, Z2};
    for ring in [R, Z2] {
        for d in [Some(deg), Some(deg.up()), deg.down()].into_iter().flatten() {
            engine.basis(ring, d)?;
        }
    }
    let fresh = |ring: GroundRing, d: Tridegree| {
        reversed(crate::cobar::cobar_basis(ring, d.s, d.f, d.w))
    };
    let mats = |ring: GroundRing| -> Result<(Vec<CobarWord>, BitMatrix, BitMatrix)> {
        let mid = fresh(ring, deg);
        let d_out = differential_matrix_between(ring, &mid, &fresh(ring, deg.up()))?;
        let d_in = match deg.down() {
            Some(p) => differential_matrix_between(ring, &fresh(ring, p), &mid)?,
            None => BitMatrix::zeros(mid.len(), 0),
        };
        Ok((mid, d_out, d_in))
    };
    let (r_mid, r_out, r_in) = mats(R)?;
    let (z_mid, z_out, z_in) = mats(Z2)?;
    let incl = build_inclusion(&r_mid, &z_mid)?;
    let dim_z2 = gf2::homology_dim(&z_out, &z_in)?;
    let rank = gf2::induced_map_rank(&r_out, &r_in, &z_out, &z_in, &incl)?;
    Ok(dim_z2 - rank)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BocksteinBound {
    pub tridegree: Tridegree,
    pub dim_r: usize,
    /// `Σ_k dim Ext_C(s+k, f, w+k)` over `0 <= k <= max(0, s+f-2w)`.
    pub bound: usize,
    pub holds: bool,
}

/// Compares `dim Ext_R` with the dimension of the ρ-Bockstein E₁ term.
pub fn bockstein_bound(engine: &Engine, deg: Tridegree) -> Result<BocksteinBound> {
    let dim_r = engine.ext_dim(GroundRing::R, deg)?;
    let kmax = (deg.s + deg.f as i32 - 2 * deg.w).max(0);
    let mut bound = 0;
    for k in 0..=kmax {
        bound += engine.ext_dim(GroundRing::C, Tridegree::new(deg.s + k, deg.f, deg.w + k))?;
    }
    Ok(BocksteinBound {
        tridegree: deg,
        dim_r,
        bound,
        holds: dim_r <= bound,
    })
}

/// Tridegrees a Bockstein check at `deg` reads from ring C.
pub fn bockstein_inputs(deg: Tridegree) -> Vec<Tridegree> {
    let kmax = (deg.s + deg.f as i32 - 2 * deg.w).max(0);
    (0..=kmax)
        .map(|k| Tridegree::new(deg.s + k, deg.f, deg.w + k))
        .collect()
}

/// Whether `dim Ext_R <= Σ dim Ext_C` holds at `deg`.
pub fn bockstein_bound_check(engine: &Engine, deg: Tridegree) -> Result<bool> {
    bockstein_bound(engine, deg).map(|b| b.holds)
}
