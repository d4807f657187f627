//! Cobar complexes sliced by tridegree, with their differentials.
//!
//! Filtration `f` of the complex is spanned by words `m[z₁|⋯|z_f]` with a
//! coefficient monomial `m` and non-unit letters. The differential is
//!
//! ```text
//! d(m[z₁|⋯|z_f]) = [η_R(m) - m | z₁|⋯|z_f] + Σᵢ m[z₁|⋯|ψ̄(zᵢ)|⋯|z_f]
//! ```
//!
//! with every interior coefficient moved to the far left.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::cache::{DiskCache, SliceFile};
use crate::coeff::{coeff_at, CoeffMonomial, GroundRing};
use crate::error::{Error, Result};
use crate::gf2::{self, ones, BitMatrix, SpanBuilder};
use crate::grading::{Bidegree, Tridegree};
use crate::steenrod::{abar_basis, move_left, psi_bar, reduce_mod2, right_mul, AbarMonomial};

/// Default per-slice size limit, in words.
pub const DEFAULT_BUDGET: u128 = 12_000;

/// Environment variable overriding the per-slice budget.
pub const BUDGET_ENV: &str = "STEMS_SLICE_BUDGET";

/// A basis word `m[z₁|⋯|z_f]` of the cobar complex.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CobarWord {
    pub coeff: CoeffMonomial,
    pub letters: Vec<AbarMonomial>,
}

impl CobarWord {
    pub fn new(coeff: CoeffMonomial, letters: Vec<AbarMonomial>) -> Self {
        CobarWord { coeff, letters }
    }

    pub fn filtration(&self) -> u32 {
        self.letters.len() as u32
    }

    pub fn bidegree(&self) -> Bidegree {
        self.letters
            .iter()
            .fold(self.coeff.degree(), |acc, z| acc + z.degree())
    }

    pub fn tridegree(&self) -> Tridegree {
        let b = self.bidegree();
        Tridegree::from_t(b.t, self.filtration(), b.w)
    }
}

impl Ord for CobarWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.letters, self.coeff).cmp(&(&other.letters, other.coeff))
    }
}

impl PartialOrd for CobarWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CobarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "{}", self.coeff);
        }
        if !self.coeff.is_one() {
            write!(f, "{}", self.coeff)?;
        }
        f.write_str("[")?;
        for (i, z) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{z}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for CobarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An F₂-combination of cobar words, sorted, without repeats.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CochainElement {
    words: Vec<CobarWord>,
}

impl CochainElement {
    pub fn from_words(mut words: Vec<CobarWord>) -> Self {
        reduce_mod2(&mut words);
        CochainElement { words }
    }

    pub fn word(w: CobarWord) -> Self {
        CochainElement { words: vec![w] }
    }

    pub fn words(&self) -> &[CobarWord] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn add(&self, o: &CochainElement) -> CochainElement {
        let mut v = self.words.clone();
        v.extend_from_slice(&o.words);
        Self::from_words(v)
    }
}

impl fmt::Display for CochainElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return f.write_str("0");
        }
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Bounds on a total of `r` letters with internal degree `t` and weight
/// `w`. Each letter has `2w_i <= t_i <= 3w_i + 1` and `t_i - w_i >= 1`.
fn letters_feasible(r: u32, t: i32, w: i32) -> bool {
    let r = r as i32;
    if r == 0 {
        return t == 0 && w == 0;
    }
    t >= r && w >= 0 && 2 * w <= t && t - w >= r && t <= 3 * w + r
}

struct LetterTable {
    by_degree: HashMap<Bidegree, Vec<AbarMonomial>>,
}

fn letter_table() -> &'static LetterTable {
    static TABLE: OnceLock<LetterTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut by_degree = HashMap::new();
        for t in 1..=MAX_LETTER_T {
            for w in 0..=t / 2 {
                let b = abar_basis(t, w);
                if !b.is_empty() {
                    by_degree.insert(Bidegree::new(t, w), b);
                }
            }
        }
        LetterTable { by_degree }
    })
}

/// Letters are tabulated up to this internal degree.
const MAX_LETTER_T: i32 = 64;

fn letters_at(t: i32, w: i32) -> &'static [AbarMonomial] {
    assert!(t <= MAX_LETTER_T, "letter degree {t} beyond the table");
    letter_table()
        .by_degree
        .get(&Bidegree::new(t, w))
        .map_or(&[], |v| v.as_slice())
}

/// Letter bidegrees `(t_i, w_i)` that can start a word of `r` letters
/// with totals `(t, w)`.
fn first_letter_degrees(r: u32, t: i32, w: i32) -> impl Iterator<Item = (i32, i32)> {
    (1..=t - (r as i32 - 1)).flat_map(move |ti| {
        let wmin = (ti - 1 + 2) / 3;
        (wmin..=(ti / 2).min(w))
            .filter(move |&wi| letters_feasible(r - 1, t - ti, w - wi))
            .map(move |wi| (ti, wi))
    })
}

thread_local! {
    static WORD_COUNTS: RefCell<HashMap<(u32, i32, i32), u128>> = RefCell::new(HashMap::new());
}

/// Number of letter sequences of length `r` with totals `(t, w)`.
pub fn count_letter_words(r: u32, t: i32, w: i32) -> u128 {
    if !letters_feasible(r, t, w) {
        return 0;
    }
    if r == 0 {
        return 1;
    }
    if let Some(n) = WORD_COUNTS.with(|c| c.borrow().get(&(r, t, w)).copied()) {
        return n;
    }
    let mut n = 0u128;
    for (ti, wi) in first_letter_degrees(r, t, w) {
        let k = letters_at(ti, wi).len() as u128;
        if k > 0 {
            n += k * count_letter_words(r - 1, t - ti, w - wi);
        }
    }
    WORD_COUNTS.with(|c| c.borrow_mut().insert((r, t, w), n));
    n
}

fn enumerate_letter_words(
    r: u32,
    t: i32,
    w: i32,
    prefix: &mut Vec<AbarMonomial>,
    emit: &mut dyn FnMut(&[AbarMonomial]),
) {
    if r == 0 {
        if t == 0 && w == 0 {
            emit(prefix);
        }
        return;
    }
    for (ti, wi) in first_letter_degrees(r, t, w) {
        for &z in letters_at(ti, wi) {
            prefix.push(z);
            enumerate_letter_words(r - 1, t - ti, w - wi, prefix, emit);
            prefix.pop();
        }
    }
}

/// The coefficients that can occur in a slice, each with the letter totals
/// it leaves.
fn coefficient_options(ring: GroundRing, t: i32, f: u32, w: i32) -> Vec<(CoeffMonomial, i32, i32)> {
    let mut out = Vec::new();
    let mut consider = |m: CoeffMonomial| {
        let d = m.degree();
        let (lt, lw) = (t - d.t, w - d.w);
        if letters_feasible(f, lt, lw) {
            out.push((m, lt, lw));
        }
    };
    if f == 0 {
        if let Some(m) = coeff_at(ring, t, w) {
            consider(m);
        }
        return out;
    }
    match ring {
        GroundRing::C => {
            for a in 0..=(t / 2 - w).max(-1) {
                consider(CoeffMonomial::pos(a as u32, 0));
            }
        }
        GroundRing::R | GroundRing::Z2 => {
            for a in 0..=(t - w - f as i32).max(-1) {
                for b in 0..=(t - 2 * w - 2 * a).max(-1) {
                    consider(CoeffMonomial::pos(a as u32, b as u32));
                }
            }
            if ring == GroundRing::Z2 {
                for k in 0..=t.max(-1) {
                    for l in 0..=(w - k - 2).max(-1) {
                        consider(CoeffMonomial::neg(k as u32, l as u32));
                    }
                }
            }
        }
    }
    out
}

/// The coefficients of the words in a slice, without enumerating them.
pub fn slice_coefficients(ring: GroundRing, deg: Tridegree) -> Vec<CoeffMonomial> {
    coefficient_options(ring, deg.t(), deg.f, deg.w)
        .into_iter()
        .filter(|&(_, lt, lw)| count_letter_words(deg.f, lt, lw) > 0)
        .map(|(m, _, _)| m)
        .collect()
}

/// Exact size of a slice, without enumerating it.
pub fn slice_size(ring: GroundRing, deg: Tridegree) -> u128 {
    coefficient_options(ring, deg.t(), deg.f, deg.w)
        .into_iter()
        .map(|(_, lt, lw)| count_letter_words(deg.f, lt, lw))
        .sum()
}

/// All words of a slice in canonical order.
pub fn cobar_basis(ring: GroundRing, s: i32, f: u32, w: i32) -> Vec<CobarWord> {
    enumerate_basis(ring, Tridegree::new(s, f, w))
}

fn enumerate_basis(ring: GroundRing, deg: Tridegree) -> Vec<CobarWord> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(deg.f as usize);
    for (m, lt, lw) in coefficient_options(ring, deg.t(), deg.f, deg.w) {
        enumerate_letter_words(deg.f, lt, lw, &mut prefix, &mut |ls| {
            out.push(CobarWord::new(m, ls.to_vec()));
        });
    }
    out.sort_unstable();
    out
}

/// The differential of one word, as a list of words with repeats
/// cancelled in pairs.
pub fn differential_of_word(ring: GroundRing, word: &CobarWord) -> Vec<CobarWord> {
    let rho = ring.has_rho();
    let mut out = Vec::new();
    // Coefficient face: η_R(m) - m·1.
    for &(c, z) in right_mul(rho, AbarMonomial::UNIT, word.coeff).iter() {
        if z.is_unit() {
            debug_assert_eq!(c, word.coeff);
            continue;
        }
        let mut ls = Vec::with_capacity(word.letters.len() + 1);
        ls.push(z);
        ls.extend_from_slice(&word.letters);
        out.push(CobarWord::new(c, ls));
    }
    for (i, &z) in word.letters.iter().enumerate() {
        for &(c, x, y) in psi_bar(rho, z).iter() {
            move_left(rho, word.coeff, &word.letters[..i], c, &mut |m, pre| {
                let mut ls = Vec::with_capacity(word.letters.len() + 1);
                ls.extend_from_slice(pre);
                ls.push(x);
                ls.push(y);
                ls.extend_from_slice(&word.letters[i + 1..]);
                out.push(CobarWord::new(m, ls));
            });
        }
    }
    reduce_mod2(&mut out);
    out
}

/// The differential of a cochain.
pub fn differential(ring: GroundRing, x: &CochainElement) -> CochainElement {
    let mut v = Vec::new();
    for w in x.words() {
        v.extend(differential_of_word(ring, w));
    }
    CochainElement::from_words(v)
}

fn index_of(words: &[CobarWord]) -> HashMap<&CobarWord, usize> {
    words.iter().enumerate().map(|(i, w)| (w, i)).collect()
}

/// Matrix of `d` from the `source` words to the `target` words.
pub fn differential_matrix_between(
    ring: GroundRing,
    source: &[CobarWord],
    target: &[CobarWord],
) -> Result<BitMatrix> {
    let idx = index_of(target);
    let mut m = BitMatrix::zeros(target.len(), source.len());
    for (j, w) in source.iter().enumerate() {
        for img in differential_of_word(ring, w) {
            let Some(&i) = idx.get(&img) else {
                return Err(Error::DimensionMismatch(format!(
                    "d({w}) contains {img}, which is not in the target basis"
                )));
            };
            m.toggle(i, j);
        }
    }
    Ok(m)
}

/// Matrix of `d: C^f -> C^{f+1}` at a tridegree in filtration `f`.
pub fn differential_matrix(ring: GroundRing, f: u32, deg: Tridegree) -> Result<BitMatrix> {
    if deg.f != f {
        return Err(Error::DimensionMismatch(format!(
            "tridegree {deg} is not in filtration {f}"
        )));
    }
    Engine::global().d_out(ring, deg).map(|m| (*m).clone())
}

/// One tridegree of a cobar complex with its incoming and outgoing maps.
#[derive(Clone, Debug)]
pub struct ComplexSlice {
    pub ring: GroundRing,
    pub tridegree: Tridegree,
    pub basis: Arc<Vec<CobarWord>>,
    pub d_out: Arc<BitMatrix>,
    pub d_in: Arc<BitMatrix>,
}

type Key = (GroundRing, Tridegree);

/// A map of lazily computed values, with one lock per key so that a value
/// is computed once even under concurrent requests.
type Cell<T> = Arc<Mutex<Option<Arc<T>>>>;

struct Keyed<T> {
    map: Mutex<HashMap<Key, Cell<T>>>,
}

impl<T> Keyed<T> {
    fn new() -> Self {
        Keyed {
            map: Mutex::new(HashMap::new()),
        }
    }

    fn get_or_try(&self, key: Key, init: impl FnOnce() -> Result<T>) -> Result<Arc<T>> {
        let slot = self
            .map
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::new(Mutex::new(None)))
            .clone();
        let mut guard = slot.lock().unwrap();
        if let Some(v) = guard.as_ref() {
            return Ok(v.clone());
        }
        let v = Arc::new(init()?);
        *guard = Some(v.clone());
        Ok(v)
    }

    fn clear(&self) {
        self.map.lock().unwrap().clear();
    }
}

/// Computes and caches slices. Values for distinct tridegrees are
/// independent, so callers may query from many threads at once.
pub struct Engine {
    budget: u128,
    disk: Option<DiskCache>,
    bases: Keyed<Vec<CobarWord>>,
    diffs: Keyed<BitMatrix>,
    ranks: Keyed<usize>,
    squares: Keyed<()>,
}

impl Engine {
    pub fn new(budget: u128) -> Self {
        Engine {
            budget,
            disk: None,
            bases: Keyed::new(),
            diffs: Keyed::new(),
            ranks: Keyed::new(),
            squares: Keyed::new(),
        }
    }

    /// An engine whose budget comes from the environment, if set.
    pub fn from_env() -> Self {
        Self::new(budget_from_env())
    }

    /// Persists and reuses outgoing differentials in `cache`.
    pub fn with_disk_cache(mut self, cache: DiskCache) -> Self {
        self.disk = Some(cache);
        self
    }

    /// The process-wide engine used by the free functions.
    pub fn global() -> &'static Engine {
        static ENGINE: OnceLock<Engine> = OnceLock::new();
        ENGINE.get_or_init(Engine::from_env)
    }

    pub fn budget(&self) -> u128 {
        self.budget
    }

    pub fn disk_cache(&self) -> Option<&DiskCache> {
        self.disk.as_ref()
    }

    /// Drops every in-memory value.
    pub fn clear(&self) {
        self.bases.clear();
        self.diffs.clear();
        self.ranks.clear();
        self.squares.clear();
    }

    fn within_budget(&self, ring: GroundRing, deg: Tridegree) -> Result<()> {
        let size = slice_size(ring, deg);
        if size > self.budget {
            return Err(Error::SliceTooLarge {
                ring: ring.name(),
                deg,
                size,
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// Whether the slices at `f - 1`, `f` and `f + 1` all fit the budget.
    pub fn is_computable(&self, ring: GroundRing, deg: Tridegree) -> bool {
        let fits = |d: Tridegree| slice_size(ring, d) <= self.budget;
        fits(deg) && fits(deg.up()) && deg.down().is_none_or(fits)
    }

    pub fn basis(&self, ring: GroundRing, deg: Tridegree) -> Result<Arc<Vec<CobarWord>>> {
        self.within_budget(ring, deg)?;
        self.bases
            .get_or_try((ring, deg), || Ok(enumerate_basis(ring, deg)))
    }

    /// Matrix of `d` out of `deg` into the same `(t, w)` one filtration up.
    pub fn d_out(&self, ring: GroundRing, deg: Tridegree) -> Result<Arc<BitMatrix>> {
        let source = self.basis(ring, deg)?;
        let target = self.basis(ring, deg.up())?;
        self.diffs.get_or_try((ring, deg), || {
            if let Some(disk) = &self.disk {
                if let Some(file) = disk.load(ring, deg)? {
                    if file.basis != *source {
                        return Err(Error::Cache {
                            path: disk.path_for(ring, deg).display().to_string(),
                            message: "stored basis differs from the enumerated basis".into(),
                        });
                    }
                    if file.d_out.rows() != target.len() || file.d_out.cols() != source.len() {
                        return Err(Error::Cache {
                            path: disk.path_for(ring, deg).display().to_string(),
                            message: "stored matrix has the wrong shape".into(),
                        });
                    }
                    return Ok(file.d_out);
                }
                let m = differential_matrix_between(ring, &source, &target)?;
                disk.store(&SliceFile {
                    ring,
                    tridegree: deg,
                    basis: (*source).clone(),
                    d_out: m.clone(),
                })?;
                return Ok(m);
            }
            differential_matrix_between(ring, &source, &target)
        })
    }

    /// Matrix of `d` into `deg`; the empty map at `f = 0`.
    pub fn d_in(&self, ring: GroundRing, deg: Tridegree) -> Result<Arc<BitMatrix>> {
        match deg.down() {
            Some(prev) => self.d_out(ring, prev),
            None => Ok(Arc::new(BitMatrix::zeros(self.basis(ring, deg)?.len(), 0))),
        }
    }

    pub fn rank_out(&self, ring: GroundRing, deg: Tridegree) -> Result<usize> {
        let d = self.d_out(ring, deg)?;
        self.ranks
            .get_or_try((ring, deg), || Ok(gf2::rank(&d)))
            .map(|r| *r)
    }

    fn rank_in(&self, ring: GroundRing, deg: Tridegree) -> Result<usize> {
        match deg.down() {
            Some(prev) => self.rank_out(ring, prev),
            None => Ok(0),
        }
    }

    /// Checks `d_out ∘ d_in = 0` at `deg`.
    pub fn check_d_squared(&self, ring: GroundRing, deg: Tridegree) -> Result<()> {
        let d_out = self.d_out(ring, deg)?;
        let d_in = self.d_in(ring, deg)?;
        self.squares
            .get_or_try((ring, deg), || {
                if d_out.cols() != d_in.rows() {
                    return Err(Error::DimensionMismatch(format!(
                        "{ring} {deg}: maps do not compose"
                    )));
                }
                if !d_out.mul(&d_in)?.is_zero() {
                    return Err(Error::NotAComplex(format!("{ring} {deg}: d∘d ≠ 0")));
                }
                Ok(())
            })
            .map(|_| ())
    }

    pub fn slice(&self, ring: GroundRing, deg: Tridegree) -> Result<ComplexSlice> {
        Ok(ComplexSlice {
            ring,
            tridegree: deg,
            basis: self.basis(ring, deg)?,
            d_out: self.d_out(ring, deg)?,
            d_in: self.d_in(ring, deg)?,
        })
    }

    pub fn ext_dim(&self, ring: GroundRing, deg: Tridegree) -> Result<usize> {
        self.check_d_squared(ring, deg)?;
        let n = self.basis(ring, deg)?.len();
        Ok(n - self.rank_out(ring, deg)? - self.rank_in(ring, deg)?)
    }

    /// Cycles whose classes form a basis of Ext at `deg`.
    pub fn cocycle_representatives(
        &self,
        ring: GroundRing,
        deg: Tridegree,
    ) -> Result<Vec<CochainElement>> {
        self.check_d_squared(ring, deg)?;
        let slice = self.slice(ring, deg)?;
        let reps = homology_representatives(&slice.d_out, &slice.d_in);
        Ok(reps
            .iter()
            .map(|v| chain_from_bits(&slice.basis, v))
            .collect())
    }

    /// Writes a cocycle as a packed vector over the slice basis.
    pub fn to_bits(&self, ring: GroundRing, x: &CochainElement) -> Result<(Tridegree, Vec<u64>)> {
        let deg = cochain_tridegree(x).ok_or_else(|| {
            Error::DimensionMismatch("cannot place the zero cochain in a tridegree".into())
        })?;
        let basis = self.basis(ring, deg)?;
        let idx = index_of(&basis);
        let mut v = vec![0u64; basis.len().div_ceil(64)];
        for w in x.words() {
            let Some(&i) = idx.get(w) else {
                return Err(Error::DimensionMismatch(format!("{w} is not a basis word")));
            };
            v[i / 64] ^= 1 << (i % 64);
        }
        Ok((deg, v))
    }

    /// Whether a cocycle at `deg` is a coboundary.
    pub fn is_boundary(&self, ring: GroundRing, x: &CochainElement) -> Result<bool> {
        if x.is_zero() {
            return Ok(true);
        }
        let (deg, v) = self.to_bits(ring, x)?;
        let d_in = self.d_in(ring, deg)?;
        let mut span = SpanBuilder::new(d_in.rows());
        let dt = d_in.transpose();
        for i in 0..dt.rows() {
            span.insert(dt.row(i));
        }
        Ok(!span.insert(&v))
    }
}

/// Reads the budget from the environment, falling back to the default.
pub fn budget_from_env() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// The common tridegree of a nonzero homogeneous cochain.
pub fn cochain_tridegree(x: &CochainElement) -> Option<Tridegree> {
    x.words().first().map(|w| w.tridegree())
}

fn chain_from_bits(basis: &[CobarWord], v: &[u64]) -> CochainElement {
    CochainElement {
        words: ones(v).map(|i| basis[i].clone()).collect(),
    }
}

/// Kernel vectors of `d_out` that are independent modulo the image of
/// `d_in`, chosen greedily in kernel-basis order.
pub(crate) fn homology_representatives(d_out: &BitMatrix, d_in: &BitMatrix) -> Vec<Vec<u64>> {
    let kernel = gf2::kernel_basis(d_out);
    let mut span = SpanBuilder::new(d_out.cols());
    let dt = d_in.transpose();
    for i in 0..dt.rows() {
        span.insert(dt.row(i));
    }
    (0..kernel.rows())
        .filter(|&i| span.insert(kernel.row(i)))
        .map(|i| kernel.row(i).to_vec())
        .collect()
}

/// Ext dimension of a slice.
pub fn ext_dim(ring: GroundRing, s: i32, f: u32, w: i32) -> Result<usize> {
    Engine::global().ext_dim(ring, Tridegree::new(s, f, w))
}

/// Basis of cocycle representatives at a tridegree.
pub fn cocycle_representatives(
    ring: GroundRing,
    s: i32,
    f: u32,
    w: i32,
) -> Result<Vec<CochainElement>> {
    Engine::global().cocycle_representatives(ring, Tridegree::new(s, f, w))
}

/// Juxtaposition product of two cocycles.
pub fn ext_product(
    ring: GroundRing,
    x: &CochainElement,
    y: &CochainElement,
) -> Result<CochainElement> {
    for (name, c) in [("left", x), ("right", y)] {
        for w in c.words() {
            w.coeff.validate(ring)?;
        }
        if !differential(ring, c).is_zero() {
            return Err(Error::NotACocycle(format!("{name} factor {c}")));
        }
    }
    let rho = ring.has_rho();
    let mut out = Vec::new();
    for a in x.words() {
        for b in y.words() {
            move_left(rho, a.coeff, &a.letters, b.coeff, &mut |m, pre| {
                let mut ls = pre.to_vec();
                ls.extend_from_slice(&b.letters);
                out.push(CobarWord::new(m, ls));
            });
        }
    }
    Ok(CochainElement::from_words(out))
}

/// The non-unit part of `η_R(m)`.
#[cfg(test)]
pub(crate) fn coefficient_face(ring: GroundRing, m: CoeffMonomial) -> Vec<(CoeffMonomial, AbarMonomial)> {
    right_mul(ring.has_rho(), AbarMonomial::UNIT, m)
        .iter()
        .copied()
        .filter(|(_, z)| !z.is_unit())
        .collect()
}
