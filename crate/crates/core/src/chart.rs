//! Ext charts over a box. The SVG form is an Adams chart with one dot per
//! class at `(s, f)`.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::cobar::Engine;
use crate::coeff::GroundRing;
use crate::error::{Error, Result};
use crate::grading::Tridegree;
use crate::par::par_map;
use crate::verify::DegreeBox;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtRecord {
    pub s: i32,
    pub f: u32,
    pub w: i32,
    pub dim: usize,
    /// Single-word cocycle representatives, where a basis has them.
    pub labels: Vec<String>,
}

/// Chart coordinates `(s, f)` with dimensions per weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartCell {
    pub s: i32,
    pub f: u32,
    pub dims: BTreeMap<i32, usize>,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtChart {
    pub ring: GroundRing,
    #[serde(rename = "box")]
    pub degree_box: DegreeBox,
    pub budget: u128,
    /// Nonzero tridegrees only.
    pub records: Vec<ExtRecord>,
    /// Tridegrees out of reach of the budget.
    pub unverified: Vec<Tridegree>,
}

enum Slot {
    Dim(ExtRecord),
    Unverified(Tridegree),
}

/// Computes Ext over the box. Over-budget tridegrees are listed, any other
/// error aborts.
pub fn ext_chart(engine: &Engine, ring: GroundRing, bx: &DegreeBox) -> Result<ExtChart> {
    let degs = bx.tridegrees();
    let slots = par_map(&degs, |&d| -> Result<Slot> {
        if !engine.is_computable(ring, d) {
            return Ok(Slot::Unverified(d));
        }
        let dim = match engine.ext_dim(ring, d) {
            Ok(n) => n,
            Err(Error::SliceTooLarge { .. }) => return Ok(Slot::Unverified(d)),
            Err(e) => return Err(e),
        };
        let mut labels = Vec::new();
        if dim > 0 {
            for rep in engine.cocycle_representatives(ring, d)? {
                if let [w] = rep.words() {
                    labels.push(w.to_string());
                }
            }
        }
        Ok(Slot::Dim(ExtRecord {
            s: d.s,
            f: d.f,
            w: d.w,
            dim,
            labels,
        }))
    });
    let mut records = Vec::new();
    let mut unverified = Vec::new();
    for slot in slots {
        match slot? {
            Slot::Dim(r) if r.dim > 0 => records.push(r),
            Slot::Dim(_) => {}
            Slot::Unverified(d) => unverified.push(d),
        }
    }
    Ok(ExtChart {
        ring,
        degree_box: *bx,
        budget: engine.budget(),
        records,
        unverified,
    })
}

impl ExtChart {
    /// Records summed over weights.
    pub fn cells(&self) -> Vec<ChartCell> {
        let mut m: BTreeMap<(i32, u32), ChartCell> = BTreeMap::new();
        for r in &self.records {
            let c = m.entry((r.s, r.f)).or_insert_with(|| ChartCell {
                s: r.s,
                f: r.f,
                dims: BTreeMap::new(),
                labels: Vec::new(),
            });
            c.dims.insert(r.w, r.dim);
            c.labels.extend(r.labels.iter().cloned());
        }
        m.into_values().collect()
    }

    /// One grid per weight, `f` decreasing down the page and `s` across.
    /// `.` is zero and `?` is out of reach.
    pub fn to_ascii(&self) -> String {
        let b = &self.degree_box;
        let mut out = String::new();
        let _ = writeln!(out, "Ext over {} on box {b}", self.ring);
        if b.is_empty() {
            return out;
        }
        let dims: BTreeMap<(i32, u32, i32), usize> = self
            .records
            .iter()
            .map(|r| ((r.s, r.f, r.w), r.dim))
            .collect();
        let unknown: std::collections::HashSet<Tridegree> = self.unverified.iter().copied().collect();
        let width = (b.s_min..=b.s_max)
            .map(|s| s.to_string().len())
            .max()
            .unwrap_or(1)
            .max(2);
        for w in b.w_min..=b.w_max {
            let _ = writeln!(out, "\nw = {w}");
            for f in (b.f_min..=b.f_max).rev() {
                let _ = write!(out, "{f:>3} |");
                for s in b.s_min..=b.s_max {
                    let cell = if unknown.contains(&Tridegree::new(s, f, w)) {
                        "?".to_string()
                    } else {
                        match dims.get(&(s, f, w)) {
                            Some(n) => n.to_string(),
                            None => ".".to_string(),
                        }
                    };
                    let _ = write!(out, " {cell:>width$}");
                }
                out.push('\n');
            }
            let _ = write!(out, "    +");
            for _ in b.s_min..=b.s_max {
                let _ = write!(out, "{}", "-".repeat(width + 1));
            }
            let _ = write!(out, "\n     ");
            for s in b.s_min..=b.s_max {
                let _ = write!(out, " {s:>width$}");
            }
            out.push('\n');
        }
        out
    }

    /// An Adams chart: dots for classes, summed over weights, spread
    /// horizontally inside each cell.
    pub fn to_svg(&self) -> String {
        let b = &self.degree_box;
        let unit = 40.0;
        let margin = 40.0;
        let (ns, nf) = if b.is_empty() {
            (1, 1)
        } else {
            ((b.s_max - b.s_min + 1) as usize, (b.f_max - b.f_min + 1) as usize)
        };
        let width = margin * 2.0 + unit * ns as f64;
        let height = margin * 2.0 + unit * nf as f64;
        let x = |s: i32| margin + unit * ((s - b.s_min) as f64 + 0.5);
        let y = |f: u32| height - margin - unit * ((f - b.f_min) as f64 + 0.5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
        );
        let _ = writeln!(
            out,
            r#"<title>Ext over {} on box {}</title>"#,
            self.ring,
            xml_escape(&b.to_string())
        );
        let _ = writeln!(
            out,
            r##"<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>"##
        );
        if !b.is_empty() {
            for s in b.s_min..=b.s_max {
                let _ = writeln!(
                    out,
                    r##"<text x="{}" y="{}" font-size="10" text-anchor="middle" fill="#444444">{s}</text>"##,
                    x(s),
                    height - margin / 3.0
                );
            }
            for f in b.f_min..=b.f_max {
                let _ = writeln!(
                    out,
                    r##"<text x="{}" y="{}" font-size="10" text-anchor="middle" fill="#444444">{f}</text>"##,
                    margin / 2.0,
                    y(f) + 3.0
                );
            }
            for d in &self.unverified {
                let _ = writeln!(
                    out,
                    r##"<rect x="{}" y="{}" width="{unit}" height="{unit}" fill="#eeeeee" fill-opacity="0.3"/>"##,
                    x(d.s) - unit / 2.0,
                    y(d.f) - unit / 2.0
                );
            }
        }
        for c in self.cells() {
            let n: usize = c.dims.values().sum();
            let step = (unit * 0.8 / n.max(1) as f64).min(8.0);
            let x0 = x(c.s) - step * (n as f64 - 1.0) / 2.0;
            let title = c
                .dims
                .iter()
                .map(|(w, k)| format!("w={w}: {k}"))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(out, r#"<g><title>{}</title>"#, xml_escape(&title));
            for i in 0..n {
                let _ = writeln!(
                    out,
                    r##"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="#000000"/>"##,
                    x0 + step * i as f64,
                    y(c.f)
                );
            }
            out.push_str("</g>\n");
        }
        out.push_str("</svg>\n");
        out
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stem_zero_family_on_z2() {
        let e = Engine::new(5000);
        let bx: DegreeBox = "0:0,0:4,2:4".parse().unwrap();
        let c = ext_chart(&e, GroundRing::Z2, &bx).unwrap();
        let dim = |f: u32, w: i32| {
            c.records
                .iter()
                .find(|r| (r.f, r.w) == (f, w))
                .map_or(0, |r| r.dim)
        };
        for f in 0..=4 {
            assert_eq!(dim(f, 2), 1);
            assert_eq!(dim(f, 4), 1);
            assert_eq!(dim(f, 3), usize::from(f == 0));
        }
        let r = c.records.iter().find(|r| (r.f, r.w) == (2, 2)).unwrap();
        assert_eq!(r.labels, vec!["θ[τ₀|τ₀]".to_string()]);
        let a = c.to_ascii();
        assert!(a.contains("w = 3"));
        assert!(c.to_svg().matches("<circle").count() == c.records.iter().map(|r| r.dim).sum::<usize>());
    }

    #[test]
    fn unverified_marked() {
        let e = Engine::new(0);
        let bx: DegreeBox = "0:1,0:2,0:1".parse().unwrap();
        let c = ext_chart(&e, GroundRing::C, &bx).unwrap();
        assert!(!c.unverified.is_empty());
        assert!(c.to_ascii().contains('?'));
    }
}
