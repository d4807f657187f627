//! `stems`: Ext charts and verification runs.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use motivic_ext::cache::DiskCache;
use motivic_ext::chart::ext_chart;
use motivic_ext::cobar::{budget_from_env, Engine};
use motivic_ext::coeff::GroundRing;
use motivic_ext::compare::{ComparisonReport, ObservedVerdict};
use motivic_ext::grading::{homotopy_region_classify, RegionVerdict, Tridegree};
use motivic_ext::tables::{
    contains_cyclic_of_order, region_mismatches, round_trip_failures, splitting_check, StemTable,
};
use motivic_ext::verify::{comparison_reports, run_campaign, DegreeBox};

#[derive(Parser)]
#[command(name = "stems", version, about = "Ext over the R-motivic and Z/2-equivariant Steenrod algebras")]
struct Cli {
    /// Largest slice, in cobar words, that will be built. Defaults to
    /// $STEMS_SLICE_BUDGET or 12000.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Slice cache directory. Defaults to $STEMS_CACHE_DIR; no disk cache
    /// if neither is set.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ring {
    C,
    R,
    Z2,
}

impl From<Ring> for GroundRing {
    fn from(r: Ring) -> Self {
        match r {
            Ring::C => GroundRing::C,
            Ring::R => GroundRing::R,
            Ring::Z2 => GroundRing::Z2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ChartFormat {
    Json,
    Ascii,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Ascii,
}

#[derive(Subcommand)]
enum Command {
    /// Ext dimensions over a box of tridegrees.
    Ext {
        #[arg(long, value_enum, ignore_case = true)]
        ring: Ring,
        /// smin:smax,fmin:fmax,wmin:wmax
        #[arg(long = "box", allow_hyphen_values = true)]
        degree_box: DegreeBox,
        #[arg(long, value_enum, default_value = "json")]
        format: ChartFormat,
    },
    /// Run every check over a box; exit status 0 iff all pass.
    Verify {
        #[arg(long = "box", allow_hyphen_values = true, default_value_t = DegreeBox::ACCEPTANCE)]
        degree_box: DegreeBox,
    },
    /// Checks on the shipped table of equivariant stems.
    Table {
        #[command(subcommand)]
        action: TableAction,
    },
    /// The map from R-motivic to equivariant Ext over a box.
    Compare {
        #[arg(long = "box", allow_hyphen_values = true)]
        degree_box: DegreeBox,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
    },
}

#[derive(Subcommand)]
enum TableAction {
    /// Consistency checks on the shipped table.
    Check,
    /// Print the cell at stem S and weight W.
    Query {
        #[arg(allow_hyphen_values = true)]
        s: i32,
        #[arg(allow_hyphen_values = true)]
        w: i32,
        /// Report whether the group has an element of this order.
        #[arg(long, default_value_t = 32)]
        order: u64,
    },
}

fn engine(cli: &Cli) -> Engine {
    let e = Engine::new(cli.budget.unwrap_or_else(budget_from_env));
    match cli.cache.clone().map(DiskCache::new).or_else(DiskCache::from_env) {
        Some(c) => e.with_disk_cache(c),
        None => e,
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

#[derive(Serialize)]
struct CompareSummary {
    iso: usize,
    inj_not_surj: usize,
    not_inj: usize,
    inconsistent: usize,
    unverified: usize,
}

#[derive(Serialize)]
struct CompareOutput {
    #[serde(rename = "box")]
    degree_box: DegreeBox,
    budget: u128,
    reports: Vec<ComparisonReport>,
    unverified: Vec<Tridegree>,
    summary: CompareSummary,
}

fn cmd_compare(e: &Engine, bx: DegreeBox, format: ReportFormat) -> Result<ExitCode> {
    let mut reports = Vec::new();
    let mut unverified = Vec::new();
    for (d, r) in comparison_reports(e, &bx) {
        match r {
            Ok(r) => reports.push(r),
            Err(motivic_ext::Error::SliceTooLarge { .. }) => unverified.push(d),
            Err(err) => return Err(err).with_context(|| format!("comparing at {d}")),
        }
    }
    let count = |v: ObservedVerdict| reports.iter().filter(|r| r.verdict_observed == v).count();
    let summary = CompareSummary {
        iso: count(ObservedVerdict::Iso),
        inj_not_surj: count(ObservedVerdict::InjNotSurj),
        not_inj: count(ObservedVerdict::NotInj),
        inconsistent: reports.iter().filter(|r| !r.consistent).count(),
        unverified: unverified.len(),
    };
    let bad = summary.inconsistent;
    match format {
        ReportFormat::Json => print_json(&CompareOutput {
            degree_box: bx,
            budget: e.budget(),
            reports,
            unverified,
            summary,
        })?,
        ReportFormat::Ascii => {
            println!("{:>4} {:>2} {:>3}  {:>5} {:>6} {:>4}  {:<12} {:<10} ok", "s", "f", "w", "dim_R", "dim_Z2", "rank", "predicted", "observed");
            for r in &reports {
                let d = r.tridegree;
                println!(
                    "{:>4} {:>2} {:>3}  {:>5} {:>6} {:>4}  {:<12} {:<10} {}",
                    d.s,
                    d.f,
                    d.w,
                    r.dim_r,
                    r.dim_z2,
                    r.map_rank,
                    format!("{:?}", r.verdict_predicted),
                    format!("{:?}", r.verdict_observed),
                    if r.consistent { "yes" } else { "NO" }
                );
            }
            println!(
                "iso {}, inj_not_surj {}, not_inj {}, inconsistent {}, unverified {}",
                summary.iso, summary.inj_not_surj, summary.not_inj, summary.inconsistent, summary.unverified
            );
        }
    }
    Ok(if bad == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_table(action: &TableAction) -> Result<ExitCode> {
    let t = StemTable::shipped().context("loading the shipped table")?;
    match *action {
        TableAction::Check => {
            let rt = round_trip_failures(&t);
            let region = region_mismatches(&t);
            let split = splitting_check(&t);
            println!("cells: {}", t.len());
            println!("round trip failures: {}", rt.len());
            println!("shading mismatches: {}", region.len());
            println!("splitting violations: {}", split.len());
            for c in rt.iter().chain(&region).chain(&split) {
                println!("  s={} w={} row={} {}", c.s, c.w, c.row, c.expr);
            }
            let ok = rt.is_empty() && region.is_empty() && split.is_empty();
            println!("{}", if ok { "pass" } else { "fail" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        TableAction::Query { s, w, order } => {
            if order < 2 {
                bail!("order must be at least 2");
            }
            let Some(g) = t.get(s, w) else {
                bail!("no cell at s = {s}, w = {w} (row {})", s - w);
            };
            let mut flags = Vec::new();
            if g.flags.red {
                flags.push("red");
            }
            if g.flags.shaded {
                flags.push("shaded");
            }
            let verdict = homotopy_region_classify(s, w);
            let region = match verdict {
                RegionVerdict::Isomorphism if s == 3 * w - 5 => "Isomorphism boundary".to_string(),
                v => format!("{v:?}"),
            };
            println!(
                "{g} | {} | row {} | region: {region}",
                if flags.is_empty() { "-".to_string() } else { flags.join(" ") },
                s - w
            );
            println!("order {order}: {}", contains_cyclic_of_order(g, order));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Ext {
            ring,
            degree_box,
            format,
        } => {
            let e = engine(cli);
            let chart = ext_chart(&e, (*ring).into(), degree_box)?;
            match format {
                ChartFormat::Json => print_json(&chart)?,
                ChartFormat::Ascii => print!("{}", chart.to_ascii()),
                ChartFormat::Svg => print!("{}", chart.to_svg()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { degree_box } => {
            let e = engine(cli);
            let report = run_campaign(&e, degree_box);
            print_json(&report)?;
            if report.pass {
                return Ok(ExitCode::SUCCESS);
            }
            for c in &report.checks {
                if let Some(f) = c.failures.first() {
                    let at = f.tridegree.map(|d| format!(" at {d}")).unwrap_or_default();
                    let ring = f.ring.map(|r| format!(" over {r}")).unwrap_or_default();
                    eprintln!("{} failed{at}{ring}: {}", c.name, f.detail);
                    return Ok(ExitCode::FAILURE);
                }
            }
            let unverified: usize = report.checks.iter().map(|c| c.unverified).sum();
            eprintln!(
                "{unverified} checks out of reach at budget {}; raise --budget to cover them",
                e.budget()
            );
            Ok(ExitCode::FAILURE)
        }
        Command::Table { action } => cmd_table(action),
        Command::Compare { degree_box, format } => cmd_compare(&engine(cli), *degree_box, *format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
