//! The dual Steenrod algebroid over each ground ring.
//!
//! Elements are left-module combinations `Σ c·z` with `c` a coefficient
//! monomial and `z` an admissible monomial `τ₀^ε₀ τ₁^ε₁ ⋯ ξ₁^e₁ ξ₂^e₂ ⋯`.
//! Coefficients are always written on the left. A coefficient that ends up
//! between two tensor factors is moved left with `x ⊗ c·y = x·η_R(c) ⊗ y`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::coeff::{mul_unchecked, CoeffMonomial, GroundRing};
use crate::error::{Error, Result};
use crate::grading::Bidegree;

/// Number of `τ_i` (indices `0..GENS`) and `ξ_i` (indices `1..=GENS`)
/// generators representable. `τ_7` already has internal degree 255.
pub const GENS: usize = 8;

/// An admissible monomial `τ^ε ξ^e`, possibly the unit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbarMonomial {
    tau: u16,
    xi: [u8; GENS],
}

impl AbarMonomial {
    pub const UNIT: AbarMonomial = AbarMonomial {
        tau: 0,
        xi: [0; GENS],
    };

    pub fn tau(i: usize) -> Self {
        assert!(i < GENS, "τ_{i} out of range");
        AbarMonomial {
            tau: 1 << i,
            xi: [0; GENS],
        }
    }

    pub fn xi(i: usize) -> Self {
        Self::xi_pow(i, 1)
    }

    pub fn xi_pow(i: usize, e: u8) -> Self {
        assert!((1..=GENS).contains(&i), "ξ_{i} out of range");
        let mut m = Self::UNIT;
        m.xi[i - 1] = e;
        m
    }

    /// Builds `τ_{taus...} ξ_{i}^{e}...`; repeated `τ` indices are rejected.
    pub fn from_parts(taus: &[usize], xis: &[(usize, u8)]) -> Self {
        let mut m = Self::UNIT;
        for &i in taus {
            assert!(i < GENS && m.tau & (1 << i) == 0, "bad τ index {i}");
            m.tau |= 1 << i;
        }
        for &(i, e) in xis {
            assert!((1..=GENS).contains(&i), "bad ξ index {i}");
            m.xi[i - 1] += e;
        }
        m
    }

    pub(crate) fn from_raw(tau: u16, xi: [u8; GENS]) -> Self {
        AbarMonomial { tau, xi }
    }

    pub(crate) fn raw(&self) -> (u16, [u8; GENS]) {
        (self.tau, self.xi)
    }

    pub fn is_unit(&self) -> bool {
        *self == Self::UNIT
    }

    pub fn has_tau(&self, i: usize) -> bool {
        self.tau >> i & 1 == 1
    }

    pub fn xi_exp(&self, i: usize) -> u8 {
        self.xi[i - 1]
    }

    /// Number of `τ` factors, which equals `t - 2w`.
    pub fn tau_count(&self) -> u32 {
        self.tau.count_ones()
    }

    pub fn degree(&self) -> Bidegree {
        let mut t = 0i32;
        let mut w = 0i32;
        for i in 0..GENS {
            if self.has_tau(i) {
                t += (1 << (i + 1)) - 1;
                w += (1 << i) - 1;
            }
            let e = self.xi[i] as i32;
            let p = (1i32 << (i + 1)) - 1;
            t += 2 * e * p;
            w += e * p;
        }
        Bidegree::new(t, w)
    }

    fn without_tau(self, i: usize) -> Self {
        AbarMonomial {
            tau: self.tau & !(1 << i),
            xi: self.xi,
        }
    }

    /// Product when no `τ_i` is shared.
    fn disjoint_mul(self, o: Self) -> Self {
        debug_assert_eq!(self.tau & o.tau, 0);
        let mut xi = self.xi;
        for (a, b) in xi.iter_mut().zip(o.xi) {
            *a = a.checked_add(b).expect("ξ exponent overflow");
        }
        AbarMonomial {
            tau: self.tau | o.tau,
            xi,
        }
    }

    /// The first generator factor and the remaining cofactor.
    fn split_first(self) -> Option<(Self, Self)> {
        if self.tau != 0 {
            let i = self.tau.trailing_zeros() as usize;
            return Some((Self::tau(i), self.without_tau(i)));
        }
        let i = self.xi.iter().position(|&e| e > 0)?;
        let mut rest = self;
        rest.xi[i] -= 1;
        Some((Self::xi(i + 1), rest))
    }

    fn sort_key(&self) -> (u16, [u8; GENS]) {
        // ε₀ first: reversing the bits puts τ₀ in the most significant place.
        (self.tau.reverse_bits(), self.xi)
    }
}

impl Ord for AbarMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for AbarMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn subscript(n: usize) -> String {
    n.to_string()
        .chars()
        .map(|c| char::from_u32('₀' as u32 + c.to_digit(10).unwrap()).unwrap())
        .collect()
}

impl fmt::Display for AbarMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        for i in 0..GENS {
            if self.has_tau(i) {
                write!(f, "τ{}", subscript(i))?;
            }
        }
        for i in 0..GENS {
            match self.xi[i] {
                0 => {}
                1 => write!(f, "ξ{}", subscript(i + 1))?,
                e => write!(f, "ξ{}^{e}", subscript(i + 1))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AbarMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Whether `z` satisfies `t <= 3w + 1` and `t >= 2^{c+1} - c - 2` with
/// `c = t - 2w`.
pub fn degree_bounds_hold(z: &AbarMonomial) -> bool {
    let d = z.degree();
    let c = (d.t - 2 * d.w) as i64;
    let lower = (1i64 << (c + 1)) - c - 2;
    d.t <= 3 * d.w + 1 && d.t as i64 >= lower
}

/// The bidegree of a monomial.
pub fn monomial_degree(z: &AbarMonomial) -> Bidegree {
    assert!(
        z.is_unit() || degree_bounds_hold(z),
        "degree bounds fail for {z}"
    );
    z.degree()
}

/// All non-unit monomials of bidegree `(t, w)`, in canonical order.
pub fn abar_basis(t: i32, w: i32) -> Vec<AbarMonomial> {
    if t <= 0 || w < 0 || t > 3 * w + 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    enumerate(t, w, 0, AbarMonomial::UNIT, &mut out);
    out.sort();
    out
}

/// Generators in a fixed order: τ₀..τ₇ then ξ₁..ξ₈.
fn enumerate(t: i32, w: i32, gen: usize, acc: AbarMonomial, out: &mut Vec<AbarMonomial>) {
    if t == 0 && w == 0 {
        if !acc.is_unit() {
            out.push(acc);
        }
        return;
    }
    if t <= 0 || w < 0 || gen >= 2 * GENS {
        return;
    }
    if gen < GENS {
        let i = gen;
        let dt = (1 << (i + 1)) - 1;
        if dt > t {
            // Higher τ's are larger still; move on to the ξ's.
            return enumerate(t, w, GENS, acc, out);
        }
        enumerate(t, w, gen + 1, acc, out);
        let dw = (1 << i) - 1;
        enumerate(t - dt, w - dw, gen + 1, acc.disjoint_mul(AbarMonomial::tau(i)), out);
    } else {
        let i = gen - GENS + 1;
        let dw = (1 << i) - 1;
        let dt = 2 * dw;
        if dt > t {
            return;
        }
        let mut m = acc;
        let (mut tt, mut ww) = (t, w);
        loop {
            enumerate(tt, ww, gen + 1, m, out);
            if tt < dt || ww < dw {
                break;
            }
            tt -= dt;
            ww -= dw;
            m.xi[i - 1] += 1;
        }
    }
}

/// A term `c·z` of an algebra element.
pub type Term = (CoeffMonomial, AbarMonomial);

/// A term `c·x ⊗ y` of the tensor square.
pub type Term2 = (CoeffMonomial, AbarMonomial, AbarMonomial);

/// Sorts and cancels equal terms in pairs.
pub(crate) fn reduce_mod2<T: Ord>(v: &mut Vec<T>) {
    v.sort_unstable();
    let mut out: Vec<T> = Vec::with_capacity(v.len());
    for x in v.drain(..) {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    *v = out;
}

/// An F₂-combination of `c·z` terms, in canonical order with no repeats.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlgElement {
    terms: Vec<Term>,
}

impl AlgElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(mut terms: Vec<Term>) -> Self {
        reduce_mod2(&mut terms);
        AlgElement { terms }
    }

    pub fn monomial(c: CoeffMonomial, z: AbarMonomial) -> Self {
        AlgElement {
            terms: vec![(c, z)],
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &AlgElement) -> AlgElement {
        let mut v = self.terms.clone();
        v.extend_from_slice(&o.terms);
        Self::from_terms(v)
    }

    /// Applies the counit: the coefficient of the unit monomial.
    pub fn counit(&self) -> Vec<CoeffMonomial> {
        self.terms
            .iter()
            .filter(|(_, z)| z.is_unit())
            .map(|&(c, _)| c)
            .collect()
    }
}

impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.terms.iter().map(|(c, z)| format!("{}", Scaled(*c, z))))
    }
}

struct Scaled<'a, T: fmt::Display>(CoeffMonomial, &'a T);

impl<T: fmt::Display> fmt::Display for Scaled<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_one() {
            write!(f, "{}", self.1)
        } else {
            write!(f, "{}·{}", self.0, self.1)
        }
    }
}

fn write_sum(f: &mut fmt::Formatter<'_>, parts: impl Iterator<Item = String>) -> fmt::Result {
    let mut any = false;
    for p in parts {
        if any {
            f.write_str(" + ")?;
        }
        f.write_str(&p)?;
        any = true;
    }
    if !any {
        f.write_str("0")?;
    }
    Ok(())
}

/// A left-normalized element of the tensor square.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TensorSquareElement {
    terms: Vec<Term2>,
}

impl TensorSquareElement {
    pub fn from_terms(mut terms: Vec<Term2>) -> Self {
        reduce_mod2(&mut terms);
        TensorSquareElement { terms }
    }

    pub fn terms(&self) -> &[Term2] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for TensorSquareElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(
            f,
            self.terms.iter().map(|(c, x, y)| {
                let t = format!("{x}⊗{y}");
                format!("{}", Scaled(*c, &t))
            }),
        )
    }
}

type Poly = Rc<[Term]>;
type Poly2 = Rc<[Term2]>;

#[derive(Default)]
struct Caches {
    mul: HashMap<(bool, AbarMonomial, AbarMonomial), Poly>,
    right: HashMap<(bool, AbarMonomial, CoeffMonomial), Poly>,
    tau0: HashMap<(bool, u32), Poly>,
    psi: HashMap<(bool, AbarMonomial), Poly2>,
    psi_bar: HashMap<(bool, AbarMonomial), Poly2>,
}

thread_local! {
    static CACHES: RefCell<Caches> = RefCell::new(Caches::default());
}

/// Drops the per-thread memo tables.
pub fn clear_caches() {
    CACHES.with(|c| *c.borrow_mut() = Caches::default());
}

fn cmul(a: CoeffMonomial, b: CoeffMonomial) -> Option<CoeffMonomial> {
    mul_unchecked(a, b)
}

/// `τ_k² = τξ_{k+1} + ρτ_{k+1} + ρτ₀ξ_{k+1}`, with `ρ = 0` when `!rho`.
fn tau_square(rho: bool, k: usize) -> Vec<Term> {
    assert!(k + 1 < GENS, "τ_{k}² leaves the representable range");
    let xi = AbarMonomial::xi(k + 1);
    let mut v = vec![(CoeffMonomial::TAU, xi)];
    if rho {
        v.push((CoeffMonomial::RHO, AbarMonomial::tau(k + 1)));
        v.push((CoeffMonomial::RHO, xi.disjoint_mul(AbarMonomial::tau(0))));
    }
    v
}

fn mul_rec(rho: bool, c: CoeffMonomial, x: AbarMonomial, y: AbarMonomial, out: &mut Vec<Term>) {
    let common = x.tau & y.tau;
    if common == 0 {
        out.push((c, x.disjoint_mul(y)));
        return;
    }
    let k = common.trailing_zeros() as usize;
    let (x1, y1) = (x.without_tau(k), y.without_tau(k));
    for (cr, r) in tau_square(rho, k) {
        let c2 = cmul(c, cr).expect("positive coefficients");
        let mut tmp = Vec::new();
        mul_rec(rho, c2, r, x1, &mut tmp);
        for (c3, z) in tmp {
            mul_rec(rho, c3, z, y1, out);
        }
    }
}

/// Product of two monomials as a combination with positive coefficients.
fn mono_mul(rho: bool, x: AbarMonomial, y: AbarMonomial) -> Poly {
    let (x, y) = if x <= y { (x, y) } else { (y, x) };
    if x.tau & y.tau == 0 {
        return Rc::from([(CoeffMonomial::ONE, x.disjoint_mul(y))]);
    }
    if let Some(p) = CACHES.with(|c| c.borrow().mul.get(&(rho, x, y)).cloned()) {
        return p;
    }
    let mut out = Vec::new();
    mul_rec(rho, CoeffMonomial::ONE, x, y, &mut out);
    reduce_mod2(&mut out);
    let p: Poly = Rc::from(out);
    CACHES.with(|c| c.borrow_mut().mul.insert((rho, x, y), p.clone()));
    p
}

/// `τ₀^j` expanded into admissible monomials.
fn tau0_pow(rho: bool, j: u32) -> Poly {
    if j == 0 {
        return Rc::from([(CoeffMonomial::ONE, AbarMonomial::UNIT)]);
    }
    if let Some(p) = CACHES.with(|c| c.borrow().tau0.get(&(rho, j)).cloned()) {
        return p;
    }
    let prev = tau0_pow(rho, j - 1);
    let mut out = Vec::new();
    for &(c, z) in prev.iter() {
        for &(c2, z2) in mono_mul(rho, z, AbarMonomial::tau(0)).iter() {
            out.push((cmul(c, c2).expect("positive coefficients"), z2));
        }
    }
    reduce_mod2(&mut out);
    let p: Poly = Rc::from(out);
    CACHES.with(|c| c.borrow_mut().tau0.insert((rho, j), p.clone()));
    p
}

/// The expansion `η_R(m) = Σ_j a_j·τ₀^j` as the list of `(a_j, j)`.
///
/// For `τ^a ρ^b` this is `ρ^b (τ + ρτ₀)^a`. For `θ/(ρ^k τ^l)` it is the
/// truncation `Σ_{j ≤ k} C(l+j, j)·θ/(ρ^{k-j} τ^{l+j})·τ₀^j`.
fn eta_r_coeffs(rho: bool, m: CoeffMonomial) -> Vec<(CoeffMonomial, u32)> {
    if !rho {
        return vec![(m, 0)];
    }
    let binom_odd = |n: u32, k: u32| k <= n && (k & !n) == 0;
    match m {
        CoeffMonomial::Pos { tau, rho: r } => (0..=tau)
            .filter(|&j| binom_odd(tau, j))
            .map(|j| (CoeffMonomial::pos(tau - j, r + j), j))
            .collect(),
        CoeffMonomial::Neg { rho: k, tau: l } => (0..=k)
            .filter(|&j| binom_odd(l + j, j))
            .map(|j| (CoeffMonomial::neg(k - j, l + j), j))
            .collect(),
    }
}

/// `z·η_R(c)` as a left-normalized combination.
pub(crate) fn right_mul(rho: bool, z: AbarMonomial, c: CoeffMonomial) -> Poly {
    if !rho || c.is_one() {
        return Rc::from([(c, z)]);
    }
    if let Some(p) = CACHES.with(|k| k.borrow().right.get(&(rho, z, c)).cloned()) {
        return p;
    }
    let mut out = Vec::new();
    for (a, j) in eta_r_coeffs(rho, c) {
        for &(b, m) in tau0_pow(rho, j).iter() {
            let Some(ab) = cmul(a, b) else { continue };
            for &(d, zm) in mono_mul(rho, z, m).iter() {
                if let Some(abd) = cmul(ab, d) {
                    out.push((abd, zm));
                }
            }
        }
    }
    reduce_mod2(&mut out);
    let p: Poly = Rc::from(out);
    CACHES.with(|k| k.borrow_mut().right.insert((rho, z, c), p.clone()));
    p
}

fn check_element(x: &AlgElement, ring: GroundRing) -> Result<()> {
    for (c, _) in &x.terms {
        c.validate(ring)?;
    }
    Ok(())
}

/// Product in the algebra over `ring`.
pub fn product(x: &AlgElement, y: &AlgElement, ring: GroundRing) -> Result<AlgElement> {
    check_element(x, ring)?;
    check_element(y, ring)?;
    let rho = ring.has_rho();
    let mut out = Vec::new();
    for &(a, u) in &x.terms {
        for &(b, v) in &y.terms {
            let Some(ab) = cmul(a, b) else { continue };
            for &(c, z) in mono_mul(rho, u, v).iter() {
                if let Some(abc) = cmul(ab, c) {
                    out.push((abc, z));
                }
            }
        }
    }
    Ok(AlgElement::from_terms(out))
}

/// The right unit on a coefficient monomial.
pub fn eta_r(m: CoeffMonomial, ring: GroundRing) -> Result<AlgElement> {
    m.validate(ring)?;
    Ok(AlgElement {
        terms: right_mul(ring.has_rho(), AbarMonomial::UNIT, m).to_vec(),
    })
}

/// Extends `η_R` additively and multiplies on the left: `x·η_R(c)`.
pub fn right_action(x: &AlgElement, c: CoeffMonomial, ring: GroundRing) -> Result<AlgElement> {
    check_element(x, ring)?;
    c.validate(ring)?;
    let rho = ring.has_rho();
    let mut out = Vec::new();
    for &(a, z) in &x.terms {
        for &(b, zz) in right_mul(rho, z, c).iter() {
            if let Some(ab) = cmul(a, b) {
                out.push((ab, zz));
            }
        }
    }
    Ok(AlgElement::from_terms(out))
}

fn psi_generator(z: AbarMonomial) -> Vec<Term2> {
    let one = CoeffMonomial::ONE;
    let xi_pow = |i: usize, e: u32| -> AbarMonomial {
        if i == 0 {
            AbarMonomial::UNIT
        } else {
            AbarMonomial::xi_pow(i, u8::try_from(e).expect("ξ exponent overflow"))
        }
    };
    if z.tau != 0 {
        let k = z.tau.trailing_zeros() as usize;
        let mut v = vec![(one, z, AbarMonomial::UNIT)];
        for i in 0..=k {
            v.push((one, xi_pow(k - i, 1 << i), AbarMonomial::tau(i)));
        }
        v
    } else {
        let k = z.xi.iter().position(|&e| e > 0).unwrap() + 1;
        (0..=k)
            .map(|i| (one, xi_pow(k - i, 1 << i), xi_pow(i, 1)))
            .collect()
    }
}

/// Product in the tensor square, normalizing middle coefficients left.
fn tensor2_mul(rho: bool, a: &[Term2], b: &[Term2]) -> Vec<Term2> {
    let mut out = Vec::new();
    for &(c, x, y) in a {
        for &(c2, x2, y2) in b {
            let Some(cc) = cmul(c, c2) else { continue };
            let xx = mono_mul(rho, x, x2);
            let yy = mono_mul(rho, y, y2);
            for &(p, big_x) in xx.iter() {
                let Some(ccp) = cmul(cc, p) else { continue };
                for &(q, big_y) in yy.iter() {
                    for &(r, xr) in right_mul(rho, big_x, q).iter() {
                        if let Some(k) = cmul(ccp, r) {
                            out.push((k, xr, big_y));
                        }
                    }
                }
            }
        }
    }
    reduce_mod2(&mut out);
    out
}

fn psi(rho: bool, z: AbarMonomial) -> Poly2 {
    if z.is_unit() {
        return Rc::from([(CoeffMonomial::ONE, z, z)]);
    }
    if let Some(p) = CACHES.with(|c| c.borrow().psi.get(&(rho, z)).cloned()) {
        return p;
    }
    let (g, rest) = z.split_first().unwrap();
    let v = if rest.is_unit() {
        let mut v = psi_generator(g);
        reduce_mod2(&mut v);
        v
    } else {
        tensor2_mul(rho, &psi_generator(g), &psi(rho, rest))
    };
    let p: Poly2 = Rc::from(v);
    CACHES.with(|c| c.borrow_mut().psi.insert((rho, z), p.clone()));
    p
}

pub(crate) fn psi_bar(rho: bool, z: AbarMonomial) -> Poly2 {
    if let Some(p) = CACHES.with(|c| c.borrow().psi_bar.get(&(rho, z)).cloned()) {
        return p;
    }
    let one = CoeffMonomial::ONE;
    let v: Vec<Term2> = psi(rho, z)
        .iter()
        .copied()
        .filter(|&t| t != (one, z, AbarMonomial::UNIT) && t != (one, AbarMonomial::UNIT, z))
        .collect();
    assert!(
        v.iter().all(|(_, x, y)| !x.is_unit() && !y.is_unit()),
        "coproduct of {z} has unexpected unit terms"
    );
    let p: Poly2 = Rc::from(v);
    CACHES.with(|c| c.borrow_mut().psi_bar.insert((rho, z), p.clone()));
    p
}

/// The coproduct of a monomial.
pub fn coproduct(z: &AbarMonomial, ring: GroundRing) -> TensorSquareElement {
    TensorSquareElement {
        terms: psi(ring.has_rho(), *z).to_vec(),
    }
}

/// The coproduct minus `z⊗1` and `1⊗z`.
pub fn reduced_coproduct(z: &AbarMonomial, ring: GroundRing) -> Result<TensorSquareElement> {
    if z.is_unit() {
        return Err(Error::UnitMonomial);
    }
    Ok(TensorSquareElement {
        terms: psi_bar(ring.has_rho(), *z).to_vec(),
    })
}

/// Normalizes `m·z₁ ⊗ ⋯ ⊗ z_n·c`, where `c` sits just right of the last
/// factor, into `Σ m'·z₁' ⊗ ⋯ ⊗ z_n'`. Each result is passed to `emit`.
pub(crate) fn move_left(
    rho: bool,
    m: CoeffMonomial,
    prefix: &[AbarMonomial],
    c: CoeffMonomial,
    emit: &mut dyn FnMut(CoeffMonomial, &[AbarMonomial]),
) {
    let mut buf: Vec<AbarMonomial> = prefix.to_vec();
    move_left_rec(rho, m, &mut buf, prefix.len(), c, emit);
}

fn move_left_rec(
    rho: bool,
    m: CoeffMonomial,
    buf: &mut Vec<AbarMonomial>,
    n: usize,
    c: CoeffMonomial,
    emit: &mut dyn FnMut(CoeffMonomial, &[AbarMonomial]),
) {
    if c.is_one() {
        emit(m, buf);
        return;
    }
    if n == 0 {
        if let Some(mc) = cmul(m, c) {
            emit(mc, buf);
        }
        return;
    }
    let z = buf[n - 1];
    for &(c2, z2) in right_mul(rho, z, c).iter() {
        buf[n - 1] = z2;
        move_left_rec(rho, m, buf, n - 1, c2, emit);
    }
    buf[n - 1] = z;
}

/// `(ψ ⊗ id)ψ(z)` as left-normalized triples.
pub fn coassoc_left(z: &AbarMonomial, ring: GroundRing) -> Vec<(CoeffMonomial, [AbarMonomial; 3])> {
    let rho = ring.has_rho();
    let mut out = Vec::new();
    for &(c, x, y) in psi(rho, *z).iter() {
        for &(c2, x1, x2) in psi(rho, x).iter() {
            if let Some(k) = cmul(c, c2) {
                out.push((k, [x1, x2, y]));
            }
        }
    }
    reduce_mod2(&mut out);
    out
}

/// `(id ⊗ ψ)ψ(z)` as left-normalized triples.
pub fn coassoc_right(
    z: &AbarMonomial,
    ring: GroundRing,
) -> Vec<(CoeffMonomial, [AbarMonomial; 3])> {
    let rho = ring.has_rho();
    let mut out = Vec::new();
    for &(c, x, y) in psi(rho, *z).iter() {
        for &(c2, y1, y2) in psi(rho, y).iter() {
            move_left(rho, c, &[x], c2, &mut |m, xs| out.push((m, [xs[0], y1, y2])));
        }
    }
    reduce_mod2(&mut out);
    out
}

/// Product of two tensor-square elements.
pub fn tensor_square_product(
    a: &TensorSquareElement,
    b: &TensorSquareElement,
    ring: GroundRing,
) -> TensorSquareElement {
    TensorSquareElement {
        terms: tensor2_mul(ring.has_rho(), &a.terms, &b.terms),
    }
}

/// Applies `ψ` to an algebra element, extended left-linearly.
pub fn coproduct_of(x: &AlgElement, ring: GroundRing) -> TensorSquareElement {
    let rho = ring.has_rho();
    let mut out = Vec::new();
    for &(c, z) in &x.terms {
        for &(c2, a, b) in psi(rho, z).iter() {
            if let Some(k) = cmul(c, c2) {
                out.push((k, a, b));
            }
        }
    }
    TensorSquareElement::from_terms(out)
}
