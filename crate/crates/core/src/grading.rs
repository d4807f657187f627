//! Degree bookkeeping and the region predicates for the comparison maps.
//!
//! All gradings are homological. A tridegree `(s, f, w)` is a stem, an Adams
//! filtration and a weight; the internal degree is `t = s + f`.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub t: i32,
    pub w: i32,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { t: 0, w: 0 };

    pub const fn new(t: i32, w: i32) -> Self {
        Bidegree { t, w }
    }
}

impl std::ops::Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.t + o.t, self.w + o.w)
    }
}

impl std::ops::Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.t - o.t, self.w - o.w)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t, self.w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tridegree {
    pub s: i32,
    pub f: u32,
    pub w: i32,
}

impl Tridegree {
    pub const fn new(s: i32, f: u32, w: i32) -> Self {
        Tridegree { s, f, w }
    }

    /// The tridegree with internal degree `t` in filtration `f`.
    pub const fn from_t(t: i32, f: u32, w: i32) -> Self {
        Tridegree {
            s: t - f as i32,
            f,
            w,
        }
    }

    pub const fn t(&self) -> i32 {
        self.s + self.f as i32
    }

    pub const fn bidegree(&self) -> Bidegree {
        Bidegree::new(self.t(), self.w)
    }

    /// Same `(t, w)` one filtration up, if representable.
    pub const fn up(&self) -> Tridegree {
        Tridegree::from_t(self.t(), self.f + 1, self.w)
    }

    /// Same `(t, w)` one filtration down; `None` at `f = 0`.
    pub const fn down(&self) -> Option<Tridegree> {
        if self.f == 0 {
            None
        } else {
            Some(Tridegree::from_t(self.t(), self.f - 1, self.w))
        }
    }
}

impl fmt::Display for Tridegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(s={}, f={}, w={})", self.s, self.f, self.w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionVerdict {
    Isomorphism,
    Injection,
    Unclassified,
}

impl fmt::Display for RegionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionVerdict::Isomorphism => "Isomorphism",
            RegionVerdict::Injection => "Injection",
            RegionVerdict::Unclassified => "Unclassified",
        })
    }
}

/// The Milnor-Witt stem `s - w`.
pub fn milnor_witt_stem(d: Tridegree) -> i32 {
    d.s - d.w
}

/// Where the realization map on homotopy is known to be an isomorphism
/// or an injection.
pub fn homotopy_region_classify(s: i32, w: i32) -> RegionVerdict {
    if s >= 3 * w - 5 || s <= -1 {
        RegionVerdict::Isomorphism
    } else if s == 3 * w - 6 && s >= 0 {
        RegionVerdict::Injection
    } else {
        RegionVerdict::Unclassified
    }
}

/// Behaviour of the cobar-level inclusion at internal degree `t`.
/// The inclusion is injective everywhere.
pub fn cobar_region_classify(t: i32, f: i32, w: i32) -> RegionVerdict {
    if t - f >= 3 * w - 5 || t < f {
        RegionVerdict::Isomorphism
    } else {
        RegionVerdict::Injection
    }
}
