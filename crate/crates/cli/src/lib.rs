//! The `tropfm` command line: builds and verifies the moduli complexes,
//! renders DOT and SVG, and runs the acceptance suite.

pub mod accept;
pub mod export;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tropfm_core::io::{self as cio, FanJson};
use tropfm_core::rat::{fmt_vec, parse_rat};
use tropfm_core::{Rat, RatVec};
use tropfm_degen::rigid::subdivision_of;
use tropfm_degen::{
    build_pi_delta_with_budget, cutting_map, degeneration_report, fm_degen_flatness, min_heights, refine_lattices, rigid_types,
    simplex_subdiv_from_points, verify_degen_ss, CutOptions, DegenModuli, HeightReading,
};
use tropfm_fm::{enumerate_grid_fm_types, fm_codim, PlantedForestType};
use tropfm_grid::{build_pi_with_budget, default_budget, grid_comb_type, grid_from_points, tropicalise, verify_weak_ss, GridCombType, TropFan};

use report::{emit, Report, ReportIn};

#[derive(Parser, Debug)]
#[command(name = "tropfm", version, about = "Tropical moduli of points on simple normal crossings pairs and their degenerations")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Enumeration budget; defaults to TROPFM_BUDGET, else 1000000.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Grid moduli Π_n(Σ) of a fan.
    #[command(subcommand)]
    Grid(GridCmd),
    /// Planted-forest types over grid moduli.
    #[command(subcommand)]
    Fm(FmCmd),
    /// Moduli of points on the slice of a degeneration.
    #[command(subcommand)]
    Degen(DegenCmd),
    /// Run the acceptance criteria.
    Accept(AcceptArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FanArgs {
    /// Number of rays.
    #[arg(long)]
    pub rays: Option<usize>,
    /// No two rays span a cone.
    #[arg(long, conflicts_with_all = ["full", "cones"])]
    pub disjoint: bool,
    /// All rays span one cone (the default).
    #[arg(long, conflicts_with = "cones")]
    pub full: bool,
    /// JSON list of cones, each a list of 0-based ray indices.
    #[arg(long)]
    pub cones: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GridCmd {
    /// Build Π_n(Σ) and write it as a fan file.
    Build {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long)]
        n: usize,
    },
    /// Re-derive a fan file and check weak semistability of Π_n⁺ → Π_n.
    Verify { file: PathBuf },
    /// Combinatorial type of a configuration.
    Type {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long)]
        points: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum FmCmd {
    /// Stable planted-forest types over Π_n(Σ) up to a codimension.
    Enumerate {
        /// A fan file from `grid build`.
        #[arg(long)]
        base: PathBuf,
        /// Number of points; defaults to the one in the fan file.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        max_codim: usize,
    },
    /// DOT graphs of the forests in a types file.
    Dot { file: PathBuf },
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Shape {
    /// Components of the special fibre (vertices of the slice simplex).
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CutArgs {
    #[arg(long)]
    pub rho: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub slice_multiplier: u64,
    #[arg(long, default_value_t = 2_000_000)]
    pub lattice_budget: u64,
    /// Also write the SVG of 𝒮_ρ here.
    #[arg(long)]
    #[serde(skip)]
    pub svg: Option<PathBuf>,
}

impl CutArgs {
    fn options(&self) -> CutOptions {
        CutOptions { samples: self.samples, seed: self.seed, slice_multiplier: self.slice_multiplier, lattice_budget: self.lattice_budget }
    }
}

#[derive(Subcommand, Debug)]
pub enum DegenCmd {
    /// Build Π_n(Δ) and Π_n⁺(Δ).
    Build {
        #[command(flatten)]
        shape: Shape,
        /// Emit the Hasse diagram of the cell poset as DOT instead.
        #[arg(long)]
        dot: bool,
    },
    /// Minimal heights of all cells and their least common multiple.
    Heights {
        #[command(flatten)]
        shape: Shape,
        /// Count integral points on the closed cone.
        #[arg(long)]
        closed: bool,
    },
    /// Rigid types with their subdivisions of the slice.
    Rigid {
        #[command(flatten)]
        shape: Shape,
        /// Directory to receive one SVG per rigid type (r <= 3).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Semistability of the refined complexes, and the state before
    /// refinement.
    Verify {
        #[command(flatten)]
        shape: Shape,
    },
    /// The cutting map at a rigid ray, with its certificate.
    Cut {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        cut: CutArgs,
    },
    /// Factors of the special-fibre component at a rigid ray.
    Report {
        #[command(flatten)]
        shape: Shape,
        #[command(flatten)]
        cut: CutArgs,
    },
    /// Flatness of the FM moduli with a distinguished point.
    FmFlat {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 10)]
        max_codim: usize,
    },
    /// SVG of the subdivision of the slice cut out by a configuration.
    Svg {
        #[arg(long)]
        points: PathBuf,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AcceptArgs {
    /// Run only these criteria.
    #[arg(long)]
    pub only: Vec<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] tropfm_core::CoreError),
    #[error(transparent)]
    Grid(#[from] tropfm_grid::GridError),
    #[error(transparent)]
    Fm(#[from] tropfm_fm::FmError),
    #[error(transparent)]
    Degen(#[from] tropfm_degen::DegenError),
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// What a command produced, and whether its verification passed.
pub struct Output {
    pub text: String,
    pub ok: bool,
    /// Extra files, written only if everything else succeeded.
    pub files: Vec<(PathBuf, String)>,
}

fn json_out(command: &str, config: Value, result: impl Serialize, ok: bool) -> Output {
    Output { text: Report::new(command, config, result).to_text(), ok, files: Vec::new() }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

/// Points file: `{"n": .., "r": .., "coords": [["p/q", ..], ..]}`.
#[derive(Debug, Deserialize)]
struct PointsFile {
    n: usize,
    r: usize,
    coords: Vec<Vec<String>>,
}

fn read_points(path: &Path) -> Result<(usize, Vec<RatVec>), CliError> {
    let pf: PointsFile = read_json(path)?;
    if pf.coords.len() != pf.n || pf.coords.iter().any(|c| c.len() != pf.r) {
        return Err(input(format!("{}: expected {} points with {} coordinates", path.display(), pf.n, pf.r)));
    }
    let pts = pf.coords.iter().map(|c| c.iter().map(|s| parse_rat(s)).collect::<Result<RatVec, _>>()).collect::<Result<Vec<_>, _>>()?;
    Ok((pf.r, pts))
}

/// The fan as it appears in configs: rays and maximal cones.
fn fan_config(fan: &TropFan) -> Value {
    json!({"rays": fan.rays(), "maximal_cones": fan.maximal_cones()})
}

fn fan_from_config(v: &Value) -> Result<TropFan, CliError> {
    let rays = v["rays"].as_u64().ok_or_else(|| input("fan config lacks rays"))? as usize;
    let cones: Vec<Vec<usize>> = serde_json::from_value(v["maximal_cones"].clone()).map_err(|e| input(format!("fan config: {e}")))?;
    Ok(TropFan::new(rays, &cones)?)
}

fn fan_of(a: &FanArgs, rays_hint: Option<usize>) -> Result<TropFan, CliError> {
    let r = a.rays.or(rays_hint).ok_or_else(|| input("--rays is required"))?;
    if a.disjoint {
        return Ok(TropFan::disjoint(r));
    }
    match &a.cones {
        Some(p) => {
            let cones: Vec<Vec<usize>> = read_json(p)?;
            Ok(TropFan::new(r, &cones)?)
        }
        None => Ok(TropFan::full(r)),
    }
}

fn pi_delta(s: &Shape, budget: u64) -> Result<DegenModuli, CliError> {
    Ok(build_pi_delta_with_budget(s.r, s.n, budget)?)
}

fn refined(s: &Shape, budget: u64) -> Result<DegenModuli, CliError> {
    let m = pi_delta(s, budget)?;
    let h = min_heights(&m, HeightReading::RelativeInterior).h_tot;
    Ok(refine_lattices(&m, h))
}

fn grid_cmd(cmd: &GridCmd, budget: u64) -> Result<Output, CliError> {
    match cmd {
        GridCmd::Build { fan, n } => {
            let f = fan_of(fan, None)?;
            let m = build_pi_with_budget(&f, *n, budget)?;
            let mut fj = cio::to_json(&m.pi);
            fj.moduli = Some(json!({"kind": "grid", "types": m.types}));
            let config = json!({"fan": fan_config(&f), "n": n, "budget": budget});
            let result = json!({
                "cells_by_dim": m.pi.count_by_dim(),
                "maximal_cones": m.pi.maximal_cells().len(),
                "complex": fj,
            });
            Ok(json_out("grid build", config, result, true))
        }
        GridCmd::Verify { file } => {
            let rep: ReportIn = read_json(file)?;
            if rep.command != "grid build" {
                return Err(input(format!("{}: not a grid build report", file.display())));
            }
            let f = fan_from_config(&rep.config["fan"])?;
            let n = rep.config["n"].as_u64().ok_or_else(|| input("config lacks n"))? as usize;
            let stored: FanJson = serde_json::from_value(rep.result["complex"].clone()).map_err(|e| input(format!("complex: {e}")))?;
            let stored = cio::from_json(&stored)?;
            let m = build_pi_with_budget(&f, n, budget)?;
            let matches = stored.structurally_equal(&m.pi);
            let ss = verify_weak_ss(&m);
            let ok = matches && ss.passed();
            let config = json!({"fan": fan_config(&f), "n": n, "budget": budget});
            Ok(json_out("grid verify", config, json!({"file_matches_rebuild": matches, "weak_semistability": ss}), ok))
        }
        GridCmd::Type { fan, points } => {
            let (r, pts) = read_points(points)?;
            let f = fan_of(fan, Some(r))?;
            let u = tropicalise(&pts, &f)?;
            let t = grid_comb_type(&u);
            let config = json!({"fan": fan_config(&f), "points": pts.iter().map(|p| fmt_vec(p)).collect::<Vec<_>>()});
            let result = json!({
                "type": t,
                "code": t.to_string(),
                "codim": tropfm_grid::grid_codim(&t),
                "generators": t.generator_vectors().iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "grid": grid_from_points(&u),
            });
            Ok(json_out("grid type", config, result, true))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FmEntry {
    code: String,
    codim: usize,
    forest: PlantedForestType<GridCombType>,
}

fn fm_cmd(cmd: &FmCmd, budget: u64) -> Result<Output, CliError> {
    match cmd {
        FmCmd::Enumerate { base, n, max_codim } => {
            let rep: ReportIn = read_json(base)?;
            let f = fan_from_config(&rep.config["fan"])?;
            let n = match n {
                Some(n) => *n,
                None => rep.config["n"].as_u64().ok_or_else(|| input("give --n or a fan file with n"))? as usize,
            };
            let m = build_pi_with_budget(&f, n, budget)?;
            let types = enumerate_grid_fm_types(&m, *max_codim, budget)?;
            let mut entries = Vec::new();
            let mut by_codim = vec![0usize; max_codim + 1];
            for t in types {
                let codim = fm_codim(&t)?;
                by_codim[codim] += 1;
                entries.push(FmEntry { code: t.code(), codim, forest: t });
            }
            let config = json!({"fan": fan_config(&f), "n": n, "max_codim": max_codim, "budget": budget});
            Ok(json_out("fm enumerate", config, json!({"by_codim": by_codim, "types": entries}), true))
        }
        FmCmd::Dot { file } => {
            let rep: ReportIn = read_json(file)?;
            let entries: Vec<FmEntry> = serde_json::from_value(rep.result["types"].clone()).map_err(|e| input(format!("{}: {e}", file.display())))?;
            let mut text = String::new();
            for (i, e) in entries.iter().enumerate() {
                if e.forest.code() != e.code {
                    return Err(input(format!("type {i}: stored code {} does not match its forest", e.code)));
                }
                text += &export::forest_dot(&e.forest, &format!("type{i}"));
            }
            Ok(Output { text, ok: true, files: Vec::new() })
        }
    }
}

fn svg_of(m: &DegenModuli, cell: usize) -> Result<String, CliError> {
    Ok(export::subdivision_svg(&subdivision_of(m, cell))?)
}

fn degen_cmd(cmd: &DegenCmd, budget: u64) -> Result<Output, CliError> {
    let base = |s: &Shape| json!({"r": s.r, "n": s.n, "budget": budget});
    match cmd {
        DegenCmd::Build { shape, dot } => {
            let m = pi_delta(shape, budget)?;
            if *dot {
                return Ok(Output { text: export::poset_dot(&m.pi, &format!("P_{}(Delta_{})", shape.n, shape.r)), ok: true, files: Vec::new() });
            }
            let cells: Vec<Value> = (0..m.pi.len())
                .map(|c| json!({"id": c, "dim": m.pi.cells[c].dim, "label": m.pi.cells[c].label, "rays": m.pi.cells[c].rays}))
                .collect();
            let result = json!({
                "pi_cells_by_dim": m.pi.count_by_dim(),
                "pi_plus_cells_by_dim": m.pi_plus.count_by_dim(),
                "rigid_types": m.ray_cells().len(),
                "cells": cells,
                "complex": cio::to_json(&m.pi),
            });
            Ok(json_out("degen build", base(shape), result, true))
        }
        DegenCmd::Heights { shape, closed } => {
            let m = pi_delta(shape, budget)?;
            let reading = if *closed { HeightReading::Closed } else { HeightReading::RelativeInterior };
            let mut config = base(shape);
            config["reading"] = serde_json::to_value(reading).expect("serializes");
            Ok(json_out("degen heights", config, min_heights(&m, reading), true))
        }
        DegenCmd::Rigid { shape, svg } => {
            let m = pi_delta(shape, budget)?;
            let mut files = Vec::new();
            let mut list = Vec::new();
            for (c, _) in rigid_types(&m) {
                let s = subdivision_of(&m, c);
                if let Some(dir) = svg {
                    files.push((dir.join(format!("rho_{c}.svg")), export::subdivision_svg(&s)?));
                }
                list.push(json!({"id": c, "label": m.pi.cells[c].label, "points": s.points.iter().map(|p| fmt_vec(p)).collect::<Vec<_>>(), "subdivision": s}));
            }
            let mut out = json_out("degen rigid", base(shape), json!({"count": list.len(), "rigid_types": list}), true);
            out.files = files;
            Ok(out)
        }
        DegenCmd::Verify { shape } => {
            let m = pi_delta(shape, budget)?;
            let h = min_heights(&m, HeightReading::RelativeInterior).h_tot;
            let after = verify_degen_ss(&refine_lattices(&m, h));
            let before = verify_degen_ss(&tropfm_degen::heights::base_changed(&m, h));
            let ok = after.passed() && (h == 1 || !before.h_reduced);
            Ok(json_out("degen verify", base(shape), json!({"h_tot": h, "refined": after, "before_refinement": before}), ok))
        }
        DegenCmd::Cut { shape, cut } | DegenCmd::Report { shape, cut } => {
            let m = refined(shape, budget)?;
            let mut config = base(shape);
            config["cut"] = serde_json::to_value(cut).expect("serializes");
            let opts = cut.options();
            let mut out = if matches!(cmd, DegenCmd::Cut { .. }) {
                let res = cutting_map(&m, cut.rho, &opts)?;
                let ok = res.certificate.holds();
                json_out("degen cut", config, res, ok)
            } else {
                let res = degeneration_report(&m, cut.rho, &opts)?;
                let ok = res.certificate.holds();
                json_out("degen report", config, res, ok)
            };
            if let Some(p) = &cut.svg {
                out.files.push((p.clone(), svg_of(&m, cut.rho)?));
            }
            Ok(out)
        }
        DegenCmd::FmFlat { shape, max_codim } => {
            let m = pi_delta(shape, budget)?;
            let rep = fm_degen_flatness(&m, *max_codim, budget)?;
            let mut config = base(shape);
            config["max_codim"] = json!(max_codim);
            let ok = rep.passed;
            Ok(json_out("degen fm-flat", config, rep, ok))
        }
        DegenCmd::Svg { points } => {
            let (_, pts) = read_points(points)?;
            let t: Rat = pts.first().map(|p| p.iter().sum()).ok_or_else(|| input("no points"))?;
            let s = simplex_subdiv_from_points(&pts, &t)?;
            Ok(Output { text: export::subdivision_svg(&s)?, ok: true, files: Vec::new() })
        }
    }
}

fn accept_cmd(a: &AcceptArgs, budget: u64) -> Result<Output, CliError> {
    let ids: Vec<usize> = if a.only.is_empty() { (1..=accept::CRITERIA).collect() } else { a.only.clone() };
    if let Some(bad) = ids.iter().find(|&&k| k == 0 || k > accept::CRITERIA) {
        return Err(input(format!("no criterion {bad}; criteria are 1..={}", accept::CRITERIA)));
    }
    let outcomes = accept::suite(&ids, budget);
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let ok = outcomes.iter().all(|o| o.passed);
    // timings vary between runs, so they stay out of the report
    let result: Vec<Value> = outcomes.iter().map(|o| json!({"id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail})).collect();
    Ok(json_out("accept", json!({"only": ids, "budget": budget}), json!({"criteria": result, "passed": ok}), ok))
}

fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    let budget = cli.budget.unwrap_or_else(default_budget);
    match &cli.cmd {
        Cmd::Grid(c) => grid_cmd(c, budget),
        Cmd::Fm(c) => fm_cmd(c, budget),
        Cmd::Degen(c) => degen_cmd(c, budget),
        Cmd::Accept(a) => accept_cmd(a, budget),
    }
}

/// Runs the command line and returns the exit code: 0 on success, 1 when a
/// verification fails, 2 on usage or input errors. Nothing is written
/// unless the command completes.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("tropfm: {e}");
            return 2;
        }
    };
    for (p, text) in &out.files {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            if let Err(e) = fs::create_dir_all(dir) {
                eprintln!("tropfm: {}: {e}", dir.display());
                return 2;
            }
        }
        if let Err(e) = emit(text, Some(p)) {
            eprintln!("tropfm: {}: {e}", p.display());
            return 2;
        }
    }
    if let Err(e) = emit(&out.text, cli.out.as_deref()) {
        eprintln!("tropfm: {e}");
        return 2;
    }
    if out.ok {
        0
    } else {
        1
    }
}
