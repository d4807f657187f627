//! Equivariant stable stems in a small range, in the usual abelian-group
//! shorthand, with checks against the comparison region.
//!
//! Notation: `∞` is Z, `n` is Z/n, `n·m` is Z/n ⊕ Z/m, `n^k` is (Z/n)^k, and
//! `π_k` marks a summand split off from the classical stem π_k.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grading::{homotopy_region_classify, RegionVerdict};

/// The shipped table, one cell per line.
pub const TABLE_DATA: &str = include_str!("../data/equivariant_stems.txt");

/// Classical stable stems π_0..π_7 as (free rank, cyclic orders).
pub const CLASSICAL_STEMS: [(u32, &[u64]); 8] = [
    (1, &[]),
    (0, &[2]),
    (0, &[2]),
    (0, &[24]),
    (0, &[]),
    (0, &[]),
    (0, &[2]),
    (0, &[240]),
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellFlags {
    pub red: bool,
    pub shaded: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupExpr {
    pub free_rank: u32,
    /// Orders of the cyclic summands, in source order.
    pub cyclic: Vec<u64>,
    pub pi_split: Option<u32>,
    pub flags: CellFlags,
}

/// A parse failure at a 1-based column of the expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    pub column: usize,
    pub message: String,
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn err<T>(&self, message: impl Into<String>) -> std::result::Result<T, ExprError> {
        Err(ExprError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn int(&mut self) -> std::result::Result<u64, ExprError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let a = self.chars[start].0;
        let b = self.chars.get(self.pos).map_or(self.src.len(), |&(i, _)| i);
        match self.src[a..b].parse() {
            Ok(n) => Ok(n),
            Err(_) => Err(ExprError {
                column: start + 1,
                message: "integer out of range".into(),
            }),
        }
    }

    fn factor(&mut self, g: &mut GroupExpr) -> std::result::Result<(), ExprError> {
        match self.peek() {
            Some('∞') => {
                self.pos += 1;
                g.free_rank += 1;
            }
            Some('π') => {
                self.pos += 1;
                if self.peek() != Some('_') {
                    return self.err("expected '_' after 'π'");
                }
                self.pos += 1;
                if g.pi_split.is_some() {
                    return self.err("more than one π_k summand");
                }
                let k = self.int()?;
                g.pi_split = Some(u32::try_from(k).or_else(|_| self.err("π index out of range"))?);
            }
            Some(c) if c.is_ascii_digit() => {
                let col = self.column();
                let n = self.int()?;
                if n < 2 {
                    return Err(ExprError {
                        column: col,
                        message: format!("cyclic order {n} is below 2"),
                    });
                }
                let mut k = 1;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let col = self.column();
                    k = self.int()?;
                    if k == 0 || k > 64 {
                        return Err(ExprError {
                            column: col,
                            message: format!("exponent {k} out of range"),
                        });
                    }
                }
                g.cyclic.extend(std::iter::repeat_n(n, k as usize));
            }
            Some(c) => return self.err(format!("unexpected '{c}'")),
            None => return self.err("unexpected end of input"),
        }
        Ok(())
    }
}

/// Parses `'0' | factor ('·' factor)*`.
pub fn parse_group_expr(text: &str) -> std::result::Result<GroupExpr, ExprError> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        src: text,
    };
    let mut g = GroupExpr::default();
    if text == "0" {
        return Ok(g);
    }
    p.factor(&mut g)?;
    while p.peek().is_some() {
        if p.peek() != Some('·') {
            return p.err("expected '·'");
        }
        p.pos += 1;
        p.factor(&mut g)?;
    }
    Ok(g)
}

impl GroupExpr {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.cyclic.is_empty() && self.pi_split.is_none()
    }
}

/// Canonical form: free factors, then cyclic factors with runs of equal
/// orders collapsed to powers, then the split marker.
impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = vec!["∞".to_string(); self.free_rank as usize];
        let mut i = 0;
        while i < self.cyclic.len() {
            let n = self.cyclic[i];
            let mut j = i;
            while j < self.cyclic.len() && self.cyclic[j] == n {
                j += 1;
            }
            parts.push(if j - i == 1 {
                n.to_string()
            } else {
                format!("{n}^{}", j - i)
            });
            i = j;
        }
        if let Some(k) = self.pi_split {
            parts.push(format!("π_{k}"));
        }
        f.write_str(&parts.join("·"))
    }
}

/// Whether the group has an element of order divisible by `n`; split
/// summands are read from [`CLASSICAL_STEMS`].
pub fn contains_cyclic_of_order(g: &GroupExpr, n: u64) -> bool {
    let mut free = g.free_rank;
    let mut orders = g.cyclic.clone();
    if let Some(k) = g.pi_split {
        if let Some(&(r, c)) = CLASSICAL_STEMS.get(k as usize) {
            free += r;
            orders.extend_from_slice(c);
        }
    }
    free > 0 || orders.iter().any(|&m| m % n == 0)
}

/// Cells keyed by `(s, row)` with `row = s - w`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StemTable {
    pub cells: BTreeMap<(i32, i32), GroupExpr>,
    /// The expression text as written in the data file.
    pub sources: BTreeMap<(i32, i32), String>,
}

pub const ROW_RANGE: std::ops::RangeInclusive<i32> = -3..=7;
pub const STEM_RANGE: std::ops::RangeInclusive<i32> = -2..=13;

impl StemTable {
    /// The shipped table.
    pub fn shipped() -> Result<Self> {
        TABLE_DATA.parse()
    }

    pub fn get(&self, s: i32, w: i32) -> Option<&GroupExpr> {
        self.cells.get(&(s, s - w))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

impl FromStr for StemTable {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut t = StemTable::default();
        for (i, line) in text.lines().enumerate() {
            let ln = i + 1;
            let body = line.trim_end();
            if body.trim().is_empty() || body.trim_start().starts_with('#') {
                continue;
            }
            // Columns of each field, 1-based in characters.
            let mut fields = Vec::new();
            let mut start = None;
            for (col, c) in body.chars().enumerate() {
                match (c.is_whitespace(), start) {
                    (false, None) => start = Some(col),
                    (true, Some(a)) => {
                        fields.push((a + 1, body.chars().skip(a).take(col - a).collect::<String>()));
                        start = None;
                    }
                    _ => {}
                }
            }
            if let Some(a) = start {
                fields.push((a + 1, body.chars().skip(a).collect::<String>()));
            }
            if fields.len() != 4 {
                return Err(parse_error(ln, 1, format!("expected 4 fields, found {}", fields.len())));
            }
            let int = |k: usize| -> Result<i32> {
                fields[k]
                    .1
                    .parse()
                    .map_err(|_| parse_error(ln, fields[k].0, format!("bad integer '{}'", fields[k].1)))
            };
            let (row, s) = (int(0)?, int(1)?);
            if !ROW_RANGE.contains(&row) || !STEM_RANGE.contains(&s) {
                return Err(parse_error(ln, fields[0].0, format!("cell ({row}, {s}) outside the table")));
            }
            let (col, expr) = &fields[2];
            let mut g = parse_group_expr(expr)
                .map_err(|e| parse_error(ln, col + e.column - 1, e.message))?;
            let (fcol, flags) = &fields[3];
            if flags != "-" {
                for name in flags.split(',') {
                    match name {
                        "red" => g.flags.red = true,
                        "shaded" => g.flags.shaded = true,
                        _ => return Err(parse_error(ln, *fcol, format!("unknown flag '{name}'"))),
                    }
                }
            }
            if t.cells.insert((s, row), g).is_some() {
                return Err(parse_error(ln, 1, format!("duplicate cell ({row}, {s})")));
            }
            t.sources.insert((s, row), expr.clone());
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRef {
    pub s: i32,
    pub w: i32,
    pub row: i32,
    pub expr: String,
}

fn cell_ref(s: i32, row: i32, g: &GroupExpr) -> CellRef {
    CellRef {
        s,
        w: s - row,
        row,
        expr: g.to_string(),
    }
}

/// Cells with `s >= 2w` that print no `π_{s-w}` summand. Red cells and
/// rows `<= 0` are exempt.
pub fn splitting_check(table: &StemTable) -> Vec<CellRef> {
    table
        .cells
        .iter()
        .filter(|&(&(s, row), g)| {
            let w = s - row;
            s >= 2 * w && !g.flags.red && row > 0 && g.pi_split != Some(row as u32)
        })
        .map(|(&(s, row), g)| cell_ref(s, row, g))
        .collect()
}

/// Cells whose shading disagrees with the isomorphism region.
pub fn region_mismatches(table: &StemTable) -> Vec<CellRef> {
    table
        .cells
        .iter()
        .filter(|&(&(s, row), g)| {
            let iso = homotopy_region_classify(s, s - row) == RegionVerdict::Isomorphism;
            iso != g.flags.shaded
        })
        .map(|(&(s, row), g)| cell_ref(s, row, g))
        .collect()
}

pub fn region_consistency(table: &StemTable) -> bool {
    region_mismatches(table).is_empty()
}

/// Cells whose text is not already in canonical form.
pub fn round_trip_failures(table: &StemTable) -> Vec<CellRef> {
    table
        .cells
        .iter()
        .filter(|&(k, g)| g.to_string() != table.sources[k])
        .map(|(&(s, row), g)| cell_ref(s, row, g))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> GroupExpr {
        parse_group_expr(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        let g = p("48·4·π_7");
        assert_eq!((g.free_rank, g.cyclic.clone(), g.pi_split), (0, vec![48, 4], Some(7)));
        let g = p("∞·2^4");
        assert_eq!((g.free_rank, g.cyclic.clone(), g.pi_split), (1, vec![2; 4], None));
        assert!(p("0").is_trivial());
    }

    #[test]
    fn parse_errors_carry_columns() {
        assert_eq!(parse_group_expr("2·").unwrap_err().column, 3);
        assert_eq!(parse_group_expr("2*3").unwrap_err().column, 2);
        assert_eq!(parse_group_expr("1").unwrap_err().column, 1);
        assert_eq!(parse_group_expr("π7").unwrap_err().column, 2);
        assert!(parse_group_expr("").is_err());
        assert!(parse_group_expr("0·2").is_err());
        let e = "3 4 2·x red\n".parse::<StemTable>().unwrap_err();
        match e {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (1, 7)),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn order_examples() {
        assert!(contains_cyclic_of_order(&p("480·12·4"), 32));
        assert!(!contains_cyclic_of_order(&p("2^4"), 4));
        for n in [2, 3, 1000] {
            assert!(contains_cyclic_of_order(&p("∞"), n));
        }
        assert!(contains_cyclic_of_order(&p("π_7"), 16));
        assert!(!contains_cyclic_of_order(&p("π_7"), 32));
        assert!(contains_cyclic_of_order(&p("π_0"), 5));
    }

    #[test]
    fn shipped_table() {
        let t = StemTable::shipped().unwrap();
        assert_eq!(t.len(), 176);
        for s in STEM_RANGE {
            for row in ROW_RANGE {
                assert!(t.cells.contains_key(&(s, row)), "({s}, {row})");
            }
        }
        assert!(round_trip_failures(&t).is_empty());
        assert!(region_consistency(&t));
        let g = t.get(7, 4).unwrap();
        assert_eq!(g.to_string(), "480·12·4");
        assert!(g.flags.red && g.flags.shaded);
        assert!(contains_cyclic_of_order(g, 32));
        assert!(t.get(13, 6).unwrap().flags.shaded);
        assert!(!t.get(5, 4).unwrap().flags.shaded);
        assert!(t.get(-2, 0).unwrap().flags.shaded);
        assert_eq!(t.get(-2, -4).unwrap().to_string(), "π_2");
    }

    #[test]
    fn splitting_on_shipped_table() {
        let t = StemTable::shipped().unwrap();
        let v = splitting_check(&t);
        // Row 7 at s = 13 prints 48 with no split summand.
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].s, v[0].row, v[0].expr.as_str()), (13, 7, "48"));
        let ok = |s: i32, row: i32| !v.iter().any(|c| (c.s, c.row) == (s, row));
        assert!(ok(3, 3) && ok(7, 3) && ok(0, 0));
    }

    #[test]
    fn shading_flip_detected() {
        let mut t = StemTable::shipped().unwrap();
        t.cells.get_mut(&(5, 1)).unwrap().flags.shaded = true;
        assert_eq!(region_mismatches(&t).len(), 1);
    }

    fn arb_expr() -> impl Strategy<Value = GroupExpr> {
        (0u32..3, prop::collection::vec((2u64..600, 1usize..4), 0..4), prop::option::of(0u32..8)).prop_map(
            |(free_rank, runs, pi_split)| GroupExpr {
                free_rank,
                cyclic: runs.into_iter().flat_map(|(n, k)| std::iter::repeat_n(n, k)).collect(),
                pi_split,
                flags: CellFlags::default(),
            },
        )
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(g in arb_expr()) {
            let h = parse_group_expr(&g.to_string()).unwrap();
            prop_assert_eq!(h, g);
        }
    }
}
