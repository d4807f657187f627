//! The coefficient rings `F₂[τ]`, `F₂[τ, ρ]` and the equivariant ring with
//! its negative cone of classes `θ/(ρ^k τ^l)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grading::Bidegree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroundRing {
    C,
    R,
    Z2,
}

impl GroundRing {
    pub const ALL: [GroundRing; 3] = [GroundRing::C, GroundRing::R, GroundRing::Z2];

    pub const fn name(self) -> &'static str {
        match self {
            GroundRing::C => "C",
            GroundRing::R => "R",
            GroundRing::Z2 => "Z2",
        }
    }

    pub(crate) const fn tag(self) -> u8 {
        match self {
            GroundRing::C => 0,
            GroundRing::R => 1,
            GroundRing::Z2 => 2,
        }
    }

    pub(crate) const fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(GroundRing::C),
            1 => Some(GroundRing::R),
            2 => Some(GroundRing::Z2),
            _ => None,
        }
    }

    /// Whether `ρ` is nonzero in this ring.
    pub const fn has_rho(self) -> bool {
        !matches!(self, GroundRing::C)
    }
}

impl fmt::Display for GroundRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroundRing {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "C" | "c" => Ok(GroundRing::C),
            "R" | "r" => Ok(GroundRing::R),
            "Z2" | "z2" => Ok(GroundRing::Z2),
            _ => Err(format!("unknown ring `{s}` (expected C, R or Z2)")),
        }
    }
}

/// A basis monomial of a coefficient ring.
///
/// `Pos { tau: a, rho: b }` is `τ^a ρ^b`; `Neg { rho: k, tau: l }` is
/// `θ/(ρ^k τ^l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoeffMonomial {
    Pos { tau: u32, rho: u32 },
    Neg { rho: u32, tau: u32 },
}

impl CoeffMonomial {
    pub const ONE: CoeffMonomial = CoeffMonomial::Pos { tau: 0, rho: 0 };
    pub const TAU: CoeffMonomial = CoeffMonomial::Pos { tau: 1, rho: 0 };
    pub const RHO: CoeffMonomial = CoeffMonomial::Pos { tau: 0, rho: 1 };
    pub const THETA: CoeffMonomial = CoeffMonomial::Neg { rho: 0, tau: 0 };

    pub const fn pos(tau: u32, rho: u32) -> Self {
        CoeffMonomial::Pos { tau, rho }
    }

    pub const fn neg(rho: u32, tau: u32) -> Self {
        CoeffMonomial::Neg { rho, tau }
    }

    pub const fn is_neg(&self) -> bool {
        matches!(self, CoeffMonomial::Neg { .. })
    }

    pub const fn is_one(&self) -> bool {
        matches!(self, CoeffMonomial::Pos { tau: 0, rho: 0 })
    }

    pub fn degree(&self) -> Bidegree {
        match *self {
            CoeffMonomial::Pos { tau, rho } => {
                Bidegree::new(-(rho as i32), -(tau as i32) - rho as i32)
            }
            CoeffMonomial::Neg { rho, tau } => {
                Bidegree::new(rho as i32, rho as i32 + tau as i32 + 2)
            }
        }
    }

    pub fn validate(&self, ring: GroundRing) -> Result<()> {
        let bad = match (ring, self) {
            (GroundRing::C, CoeffMonomial::Pos { rho, .. }) if *rho > 0 => {
                Some("ρ vanishes in F₂[τ]")
            }
            (GroundRing::C | GroundRing::R, CoeffMonomial::Neg { .. }) => {
                Some("negative-cone classes exist only in the equivariant ring")
            }
            _ => None,
        };
        match bad {
            Some(d) => Err(Error::InvalidMonomial {
                ring: ring.name(),
                detail: format!("{self}: {d}"),
            }),
            None => Ok(()),
        }
    }
}

fn power(f: &mut fmt::Formatter<'_>, sym: &str, e: u32) -> fmt::Result {
    match e {
        0 => Ok(()),
        1 => f.write_str(sym),
        _ => write!(f, "{sym}^{e}"),
    }
}

impl fmt::Display for CoeffMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CoeffMonomial::Pos { tau: 0, rho: 0 } => f.write_str("1"),
            CoeffMonomial::Pos { tau, rho } => {
                power(f, "τ", tau)?;
                power(f, "ρ", rho)
            }
            CoeffMonomial::Neg { rho: 0, tau: 0 } => f.write_str("θ"),
            CoeffMonomial::Neg { rho, tau } => {
                f.write_str("θ/")?;
                if rho > 0 && tau > 0 {
                    f.write_str("(")?;
                    power(f, "ρ", rho)?;
                    power(f, "τ", tau)?;
                    f.write_str(")")
                } else {
                    power(f, "ρ", rho)?;
                    power(f, "τ", tau)
                }
            }
        }
    }
}

/// The basis element of the ring in bidegree `(t, w)`, if there is one.
pub fn coeff_at(ring: GroundRing, t: i32, w: i32) -> Option<CoeffMonomial> {
    match ring {
        GroundRing::C => (t == 0 && w <= 0).then(|| CoeffMonomial::pos((-w) as u32, 0)),
        GroundRing::R => pos_at(t, w),
        GroundRing::Z2 => pos_at(t, w).or_else(|| {
            (t >= 0 && w >= t + 2).then(|| CoeffMonomial::neg(t as u32, (w - t - 2) as u32))
        }),
    }
}

fn pos_at(t: i32, w: i32) -> Option<CoeffMonomial> {
    (t <= 0 && w <= t).then(|| CoeffMonomial::pos((t - w) as u32, (-t) as u32))
}

/// All basis monomials of the ring in bidegree `(t, w)`; at most one.
pub fn coeff_basis(ring: GroundRing, t: i32, w: i32) -> Vec<CoeffMonomial> {
    coeff_at(ring, t, w).into_iter().collect()
}

/// Product of two basis monomials; `Ok(None)` is zero.
pub fn coeff_mul(
    x: CoeffMonomial,
    y: CoeffMonomial,
    ring: GroundRing,
) -> Result<Option<CoeffMonomial>> {
    x.validate(ring)?;
    y.validate(ring)?;
    Ok(mul_unchecked(x, y))
}

pub(crate) fn mul_unchecked(x: CoeffMonomial, y: CoeffMonomial) -> Option<CoeffMonomial> {
    use CoeffMonomial::*;
    match (x, y) {
        (Pos { tau: a, rho: b }, Pos { tau: c, rho: d }) => Some(Pos {
            tau: a + c,
            rho: b + d,
        }),
        (Pos { tau: a, rho: b }, Neg { rho: k, tau: l })
        | (Neg { rho: k, tau: l }, Pos { tau: a, rho: b }) => {
            (k >= b && l >= a).then(|| Neg {
                rho: k - b,
                tau: l - a,
            })
        }
        (Neg { .. }, Neg { .. }) => None,
    }
}

/// The inequality `t <= 3w - 6` for `θ/(ρ^k τ^l)`.
pub fn neg_cone_bound_check(k: u32, l: u32) -> bool {
    let d = CoeffMonomial::neg(k, l).degree();
    d.t <= 3 * d.w - 6
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    use CoeffMonomial as M;

    #[test]
    fn basis_examples() {
        assert_eq!(coeff_basis(GroundRing::Z2, 0, 2), vec![M::THETA]);
        assert_eq!(coeff_basis(GroundRing::R, -1, -2), vec![M::pos(1, 1)]);
        assert!(coeff_basis(GroundRing::Z2, 1, 1).is_empty());
        assert_eq!(coeff_basis(GroundRing::C, 0, 0), vec![M::ONE]);
        assert!(coeff_basis(GroundRing::C, -1, -1).is_empty());
    }

    #[test]
    fn mul_examples() {
        let z = GroundRing::Z2;
        assert_eq!(coeff_mul(M::THETA, M::THETA, z).unwrap(), None);
        assert_eq!(
            coeff_mul(M::TAU, M::neg(0, 3), z).unwrap(),
            Some(M::neg(0, 2))
        );
        assert_eq!(coeff_mul(M::TAU, M::THETA, z).unwrap(), None);
        assert_eq!(
            coeff_mul(M::pos(2, 1), M::pos(1, 1), GroundRing::R).unwrap(),
            Some(M::pos(3, 2))
        );
        assert!(coeff_mul(M::RHO, M::ONE, GroundRing::C).is_err());
        assert!(coeff_mul(M::THETA, M::ONE, GroundRing::R).is_err());
    }

    #[test]
    fn neg_cone_bound_examples() {
        assert!(neg_cone_bound_check(0, 0));
        let d = M::THETA.degree();
        assert_eq!(d.t, 3 * d.w - 6);
        assert!(neg_cone_bound_check(5, 0));
        assert_eq!(M::neg(5, 0).degree(), Bidegree::new(5, 7));
        assert!(neg_cone_bound_check(0, 4));
        assert_eq!(M::neg(0, 4).degree(), Bidegree::new(0, 6));
    }

    #[test]
    fn display() {
        assert_eq!(M::pos(3, 2).to_string(), "τ^3ρ^2");
        assert_eq!(M::neg(1, 2).to_string(), "θ/(ρτ^2)");
        assert_eq!(M::neg(0, 1).to_string(), "θ/τ");
        assert_eq!(M::ONE.to_string(), "1");
    }

    #[test]
    fn box_invariants() {
        for ring in GroundRing::ALL {
            for t in -20..=20 {
                for w in -20..=20 {
                    let b = coeff_basis(ring, t, w);
                    assert!(b.len() <= 1);
                    for m in &b {
                        assert_eq!(m.degree(), Bidegree::new(t, w));
                        m.validate(ring).unwrap();
                        if let M::Neg { rho, tau } = *m {
                            assert!(neg_cone_bound_check(rho, tau));
                        }
                    }
                    if ring == GroundRing::Z2 {
                        let expect = (t >= 0 && w >= t + 2) || (t <= 0 && w <= t);
                        assert_eq!(!b.is_empty(), expect, "({t},{w})");
                    }
                }
            }
        }
    }

    fn arb_z2() -> impl Strategy<Value = CoeffMonomial> {
        prop_oneof![
            (0u32..8, 0u32..8).prop_map(|(a, b)| M::pos(a, b)),
            (0u32..8, 0u32..8).prop_map(|(k, l)| M::neg(k, l)),
        ]
    }

    proptest! {
        #[test]
        fn mul_commutative_associative(x in arb_z2(), y in arb_z2(), z in arb_z2()) {
            let r = GroundRing::Z2;
            prop_assert_eq!(coeff_mul(x, y, r).unwrap(), coeff_mul(y, x, r).unwrap());
            let xy_z = coeff_mul(x, y, r).unwrap().and_then(|p| coeff_mul(p, z, r).unwrap());
            let x_yz = coeff_mul(y, z, r).unwrap().and_then(|p| coeff_mul(x, p, r).unwrap());
            prop_assert_eq!(xy_z, x_yz);
        }

        #[test]
        fn mul_degree_additive(x in arb_z2(), y in arb_z2()) {
            match coeff_mul(x, y, GroundRing::Z2).unwrap() {
                Some(p) => prop_assert_eq!(p.degree(), x.degree() + y.degree()),
                None => prop_assert!(x.is_neg() || y.is_neg()),
            }
        }
    }
}
