//! Batch front end: JSON inputs in, canonical JSON (or a plain table) out.
//!
//! Exit codes: 0 success, 1 mathematical failure (failed verification,
//! quasicycle where a filtration was demanded, violated identity), 2 usage
//! or input error. Reports go to stdout, diagnostics to stderr.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use morseq_core::cech::{full_cohomology_character, spectral_pages, SpectralPage};
use morseq_core::character::FiniteCharacter;
use morseq_core::error::Error as CoreError;
use morseq_core::fixed_point::{validate_chamber, FixedPointDataset};
use morseq_core::flag::{
    bgg_alternating_identity, bott_cohomology, dominant_rep, flag_dataset, freudenthal_character,
    RootSystem,
};
use morseq_core::flow::{build_filtration, detect_quasicycle, Filtration, FlowDigraph};
use morseq_core::graded::GradedCharacter;
use morseq_core::lattice::{CoordinateBox, Weight};
use morseq_core::morse::{
    e1_page, index, index_cs, morse_series, morse_series_cs, verify_morse, E1Page, MorseReport,
    Variant,
};
use morseq_core::rational::PolarizedRational;
use morseq_core::toric::{
    chart_sections_in_box, dataset_from_fan, flow_digraph_from_fan, polytope_character_oracle,
    Divisor, Fan,
};

#[derive(Parser)]
#[command(name = "morseq", version, about = "Fixed-point Morse theory calculator for sheaf cohomology")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Extra diagnostics on stderr; repeat for more.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    /// Compact supports: downward flows, codimension grading.
    Cs,
    /// Ordinary cohomology: upward flows.
    Ordinary,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Cs => Variant::CompactSupport,
            VariantArg::Ordinary => Variant::Ordinary,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Toric datasets, flow digraphs, and section counts from fan data.
    #[command(subcommand)]
    Toric(ToricCmd),
    /// Chart-cover cohomology and its filtration spectral sequence.
    #[command(subcommand)]
    Cech(CechCmd),
    /// Fixed-point localization and Morse series on a dataset.
    #[command(subcommand)]
    Fp(FpCmd),
    /// Flow digraph sanity: quasicycles and layer filtrations.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// Flag manifold datasets and classical character identities.
    #[command(subcommand)]
    Flag(FlagCmd),
}

#[derive(Subcommand)]
enum ToricCmd {
    /// Emit the fixed-point dataset of (fan, divisor).
    Dataset {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        /// Attach the flow edges of this chamber to the dataset.
        #[arg(long, allow_hyphen_values = true)]
        chamber: Option<String>,
    },
    /// Emit the chamber flow digraph on the maximal cones.
    Flow {
        #[arg(long)]
        fan: PathBuf,
        /// Chamber vector, comma separated, e.g. "1,2".
        #[arg(long, allow_hyphen_values = true)]
        chamber: String,
    },
    /// Sections over the common region of the listed charts, inside a box.
    Sections {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        /// Maximal-cone indices, comma separated; default all.
        #[arg(long)]
        charts: Option<String>,
        /// Weight box "lo1,lo2:hi1,hi2"; default hulls the fiber weights.
        #[arg(long = "box")]
        box_spec: Option<String>,
        /// Margin per axis for the defaulted box.
        #[arg(long, default_value_t = 10)]
        margin: i64,
    },
    /// Polytope lattice-point character (complete fan, nef divisor).
    Oracle {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long = "box")]
        box_spec: Option<String>,
        #[arg(long, default_value_t = 10)]
        margin: i64,
    },
}

#[derive(Subcommand)]
enum CechCmd {
    /// Filtration spectral pages of one weight component.
    Pages {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chamber: String,
        /// Single weight, comma separated, e.g. "-1,2".
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    /// All cohomology group characters, weight by weight over a box.
    Cohomology {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long = "box")]
        box_spec: Option<String>,
        #[arg(long, default_value_t = 10)]
        margin: i64,
    },
}

#[derive(Subcommand)]
enum FpCmd {
    /// Localization index (ordinary polarization).
    Index {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chamber: String,
    },
    /// Localization index, compact supports.
    #[command(name = "index-cs")]
    IndexCs {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chamber: String,
    },
    /// Graded Morse series in t.
    Morse {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chamber: String,
        #[arg(long, value_enum, default_value_t = VariantArg::Cs)]
        variant: VariantArg,
    },
    /// First page of the flow filtration spectral sequence.
    E1 {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chamber: String,
        #[arg(long, value_enum, default_value_t = VariantArg::Cs)]
        variant: VariantArg,
    },
    /// Box-certified Morse inequality check against a candidate.
    Verify {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chamber: String,
        /// JSON map degree -> character, e.g. {"0": [...], "1": [...]}.
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::Cs)]
        variant: VariantArg,
        #[arg(long = "box")]
        box_spec: Option<String>,
        #[arg(long, default_value_t = 10)]
        margin: i64,
    },
}

#[derive(Subcommand)]
enum PosetCmd {
    /// Report a quasicycle if one exists (exit 1), else confirm acyclic.
    Check {
        #[arg(long)]
        edges: PathBuf,
    },
    /// Build the layer filtration; a quasicycle is a failure (exit 1).
    Filtration {
        #[arg(long)]
        edges: PathBuf,
    },
}

#[derive(Subcommand)]
enum FlagCmd {
    /// Emit the Weyl fixed-point dataset of the flag manifold.
    Dataset {
        #[command(flatten)]
        sys: FlagArgs,
    },
    /// Euler characteristic of the line bundle, as a finite character.
    Euler {
        #[command(flatten)]
        sys: FlagArgs,
    },
    /// Check the alternating resolution identity for a dominant weight.
    Bgg {
        #[command(flatten)]
        sys: FlagArgs,
    },
    /// All cohomology group characters of the line bundle.
    Bott {
        #[command(flatten)]
        sys: FlagArgs,
    },
}

#[derive(clap::Args)]
struct FlagArgs {
    /// Root system kind: A, B, or G.
    #[arg(long = "type")]
    kind: char,
    #[arg(long)]
    rank: usize,
    /// Weight coordinates, comma separated, e.g. "-1" or "2,0".
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var("MORSEQ_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .ok();
            }
            _ => {
                eprintln!("error: MORSEQ_THREADS must be a positive integer, got {n:?}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

// ---------- input plumbing ----------

fn load_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {what} file {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("malformed {what} in {}: {e}", path.display()))
}

/// Divisor files may hold a bare coefficient list or {"coeffs": [...]}.
fn load_divisor(path: &Path) -> Result<Divisor, String> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum In {
        Wrapped(Divisor),
        Bare(Vec<i64>),
    }
    Ok(match load_json::<In>(path, "divisor")? {
        In::Wrapped(d) => d,
        In::Bare(coeffs) => Divisor { coeffs },
    })
}

/// Edge files may hold {"vertices": [...], "edges": [...]}, {"edges": [...]},
/// or a bare edge list; missing vertices are collected from the edges.
fn load_digraph(path: &Path) -> Result<FlowDigraph, String> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum In {
        Full {
            vertices: Vec<String>,
            edges: Vec<(String, String)>,
        },
        EdgesOnly {
            edges: Vec<(String, String)>,
        },
        Bare(Vec<(String, String)>),
    }
    let (vertices, edges) = match load_json::<In>(path, "edge list")? {
        In::Full { vertices, edges } => (vertices, edges),
        In::EdgesOnly { edges } | In::Bare(edges) => {
            let mut vertices = Vec::new();
            for (a, b) in &edges {
                for v in [a, b] {
                    if !vertices.contains(v) {
                        vertices.push(v.clone());
                    }
                }
            }
            (vertices, edges)
        }
    };
    FlowDigraph::new(vertices, edges)
        .map_err(|e| format!("bad edge list in {}: {e}", path.display()))
}

fn parse_ints(s: &str, what: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("{what} component {t:?} is not an integer"))
        })
        .collect()
}

fn parse_indices(s: &str, what: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("{what} component {t:?} is not an index"))
        })
        .collect()
}

/// Box syntax "lo1,lo2:hi1,hi2".
fn parse_box(s: &str) -> Result<CoordinateBox, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("box {s:?} must look like \"lo1,lo2:hi1,hi2\""))?;
    CoordinateBox::new(parse_ints(lo, "box lo")?, parse_ints(hi, "box hi")?)
        .map_err(|e| e.to_string())
}

/// Explicit box, or the fiber-weight hull grown by `margin`. The default is
/// announced on stderr because every truncation certificate is box-relative.
fn resolve_box(
    spec: &Option<String>,
    margin: i64,
    ds: &FixedPointDataset,
) -> Result<CoordinateBox, String> {
    if let Some(s) = spec {
        return parse_box(s);
    }
    let bx = CoordinateBox::hull(
        ds.rank,
        ds.points.iter().flat_map(|p| p.fiber.support().cloned()),
        margin,
    );
    eprintln!(
        "warning: no --box given; using fiber hull {:?}:{:?} (margin {margin}). \
         Certificates are relative to this box.",
        bx.lo, bx.hi
    );
    Ok(bx)
}

fn core_err(e: CoreError) -> String {
    e.to_string()
}

/// Candidate files hold either {"0": [...], "1": [...]} keyed by degree or a
/// bare list read as degrees 0, 1, ... (the cohomology command's output).
/// Parsed via Value, not an untagged enum: untagged buffering breaks both
/// integer keys and arbitrary-precision coefficients.
fn load_candidate(path: &Path) -> Result<BTreeMap<i64, FiniteCharacter>, String> {
    let value: serde_json::Value = load_json(path, "candidate")?;
    let bad = |detail: String| format!("malformed candidate in {}: {detail}", path.display());
    let character = |v: serde_json::Value| {
        serde_json::from_value::<FiniteCharacter>(v).map_err(|e| bad(e.to_string()))
    };
    match value {
        serde_json::Value::Object(map) => map
            .into_iter()
            .map(|(k, v)| {
                let degree = k
                    .parse::<i64>()
                    .map_err(|_| bad(format!("degree key {k:?} is not an integer")))?;
                Ok((degree, character(v)?))
            })
            .collect(),
        serde_json::Value::Array(groups) => groups
            .into_iter()
            .enumerate()
            .map(|(q, v)| Ok((q as i64, character(v)?)))
            .collect(),
        other => Err(bad(format!(
            "expected an object keyed by degree or a list, got {other}"
        ))),
    }
}

// ---------- output plumbing ----------

fn emit<T: Serialize>(
    format: Format,
    payload: &T,
    table: impl FnOnce(&T) -> String,
) -> Result<(), String> {
    match format {
        Format::Json => {
            let text = serde_json::to_string(payload).map_err(|e| e.to_string())?;
            println!("{text}");
        }
        Format::Table => println!("{}", table(payload).trim_end()),
    }
    Ok(())
}

fn character_table(ch: &FiniteCharacter) -> String {
    if ch.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (w, c) in ch.iter() {
        let _ = writeln!(out, "{w}  {c}");
    }
    let _ = writeln!(out, "total {}", ch.total());
    out
}

fn groups_table(groups: &[FiniteCharacter]) -> String {
    let mut out = String::new();
    for (q, ch) in groups.iter().enumerate() {
        let _ = writeln!(out, "H^{q} (dim {}):", ch.total());
        for line in character_table(ch).lines() {
            let _ = writeln!(out, "  {line}");
        }
    }
    out
}

fn rational_line(t: &PolarizedRational) -> String {
    let sign = match t.sign().as_i64() {
        1 => '+',
        _ => '-',
    };
    let dens: String = t
        .denominators()
        .iter()
        .map(|mu| format!("(1 - e^{mu})"))
        .collect();
    if dens.is_empty() {
        format!("[{sign}] {:?}", t.numerator())
    } else {
        format!("[{sign}] {:?} / {dens}", t.numerator())
    }
}

fn rationals_table(terms: &[PolarizedRational]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let _ = writeln!(out, "term {i}: {}", rational_line(t));
    }
    if terms.is_empty() {
        out.push_str("0\n");
    }
    out
}

fn graded_table(g: &GradedCharacter) -> String {
    let mut out = String::new();
    for (d, t) in g.iter() {
        let _ = writeln!(out, "t^{d}: {}", rational_line(t));
    }
    if g.is_empty() {
        out.push_str("0\n");
    }
    out
}

fn pages_table(pages: &[SpectralPage]) -> String {
    let mut out = String::new();
    for page in pages {
        let _ = writeln!(out, "E_{} (total dim {}):", page.r(), page.total_dim());
        for (&(p, q), dim) in page.entries() {
            let _ = writeln!(out, "  ({p},{q})  dim {dim}");
        }
        for (&(p, q), rank) in page.differentials() {
            let _ = writeln!(out, "  d: ({p},{q}) -> rank {rank}");
        }
    }
    out
}

fn e1_table(page: &E1Page) -> String {
    let mut out = String::new();
    for (&(p, q), t) in page.entries() {
        let _ = writeln!(out, "({p},{q})  {}", rational_line(t));
    }
    let _ = writeln!(out, "degenerate: {}", page.degenerate);
    out
}

fn report_table(r: &MorseReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "divisible: {}", r.divisible);
    let _ = writeln!(out, "nonneg: {}", r.nonneg);
    out.push_str("Q:\n");
    for line in graded_table(&r.q).lines() {
        let _ = writeln!(out, "  {line}");
    }
    out
}

fn dataset_table(ds: &FixedPointDataset) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "rank {}, ambient dim {}, compact {}",
        ds.rank, ds.ambient_dim, ds.compact
    );
    for p in &ds.points {
        let ws: Vec<String> = p.weights.iter().map(|w| w.to_string()).collect();
        let _ = writeln!(out, "{}: weights {}  fiber {:?}", p.id, ws.join(" "), p.fiber);
    }
    if let Some(edges) = &ds.edges {
        for (a, b) in edges {
            let _ = writeln!(out, "edge {a} -> {b}");
        }
    }
    out
}

fn digraph_table(g: &FlowDigraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vertices: {}", g.vertices.join(" "));
    for (a, b) in &g.edges {
        let _ = writeln!(out, "{a} -> {b}");
    }
    out
}

fn filtration_table(f: &Filtration) -> String {
    let mut out = String::new();
    for (i, layer) in f.layers.iter().enumerate() {
        let _ = writeln!(out, "F_{i}: {}", layer.join(" "));
    }
    out
}

#[derive(Serialize)]
struct CycleWitness {
    quasicycle: Vec<String>,
}

fn witness_table(w: &CycleWitness) -> String {
    format!("quasicycle: {}", w.quasicycle.join(" -> "))
}

// ---------- dispatch ----------

fn run(cli: Cli) -> Result<ExitCode, String> {
    let format = cli.format;
    let verbose = cli.verbose;
    match cli.cmd {
        Cmd::Toric(cmd) => run_toric(cmd, format, verbose),
        Cmd::Cech(cmd) => run_cech(cmd, format, verbose),
        Cmd::Fp(cmd) => run_fp(cmd, format, verbose),
        Cmd::Poset(cmd) => run_poset(cmd, format),
        Cmd::Flag(cmd) => run_flag(cmd, format),
    }
}

fn run_toric(cmd: ToricCmd, format: Format, verbose: u8) -> Result<ExitCode, String> {
    match cmd {
        ToricCmd::Dataset {
            fan,
            divisor,
            chamber,
        } => {
            let fan: Fan = load_json(&fan, "fan")?;
            let divisor = load_divisor(&divisor)?;
            let mut ds = dataset_from_fan(&fan, &divisor).map_err(core_err)?;
            if let Some(chamber) = chamber {
                let v = parse_ints(&chamber, "chamber")?;
                ds.edges = Some(flow_digraph_from_fan(&fan, &v).map_err(core_err)?.edges);
            }
            emit(format, &ds, dataset_table)?;
            Ok(ExitCode::SUCCESS)
        }
        ToricCmd::Flow { fan, chamber } => {
            let fan: Fan = load_json(&fan, "fan")?;
            let v = parse_ints(&chamber, "chamber")?;
            let g = flow_digraph_from_fan(&fan, &v).map_err(core_err)?;
            emit(format, &g, digraph_table)?;
            Ok(ExitCode::SUCCESS)
        }
        ToricCmd::Sections {
            fan,
            divisor,
            charts,
            box_spec,
            margin,
        } => {
            let fan: Fan = load_json(&fan, "fan")?;
            let divisor = load_divisor(&divisor)?;
            let charts = match charts {
                Some(s) => parse_indices(&s, "charts")?,
                None => (0..fan.max_cones.len()).collect(),
            };
            let ds = dataset_from_fan(&fan, &divisor).map_err(core_err)?;
            let bx = resolve_box(&box_spec, margin, &ds)?;
            let ch = chart_sections_in_box(&fan, &divisor, &charts, &bx).map_err(core_err)?;
            emit(format, &ch, character_table)?;
            Ok(ExitCode::SUCCESS)
        }
        ToricCmd::Oracle {
            fan,
            divisor,
            box_spec,
            margin,
        } => {
            let fan: Fan = load_json(&fan, "fan")?;
            let divisor = load_divisor(&divisor)?;
            let ds = dataset_from_fan(&fan, &divisor).map_err(core_err)?;
            let bx = resolve_box(&box_spec, margin, &ds)?;
            if verbose > 0 {
                eprintln!("oracle box {:?}:{:?}", bx.lo, bx.hi);
            }
            let ch = polytope_character_oracle(&fan, &divisor, &bx).map_err(core_err)?;
            emit(format, &ch, character_table)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_cech(cmd: CechCmd, format: Format, verbose: u8) -> Result<ExitCode, String> {
    match cmd {
        CechCmd::Pages {
            fan,
            divisor,
            chamber,
            weight,
        } => {
            let fan: Fan = load_json(&fan, "fan")?;
            let divisor = load_divisor(&divisor)?;
            let v = parse_ints(&chamber, "chamber")?;
            let w = Weight(parse_ints(&weight, "weight")?);
            let pages = spectral_pages(&fan, &divisor, &v, &w).map_err(core_err)?;
            emit(format, &pages, |p| pages_table(p))?;
            Ok(ExitCode::SUCCESS)
        }
        CechCmd::Cohomology {
            fan,
            divisor,
            box_spec,
            margin,
        } => {
            let fan: Fan = load_json(&fan, "fan")?;
            let divisor = load_divisor(&divisor)?;
            let ds = dataset_from_fan(&fan, &divisor).map_err(core_err)?;
            let bx = resolve_box(&box_spec, margin, &ds)?;
            if verbose > 0 {
                eprintln!(
                    "cohomology over box {:?}:{:?} ({} weights)",
                    bx.lo,
                    bx.hi,
                    bx.point_count()
                );
            }
            let groups = full_cohomology_character(&fan, &divisor, &bx).map_err(core_err)?;
            emit(format, &groups, |g| groups_table(g))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_fp(cmd: FpCmd, format: Format, verbose: u8) -> Result<ExitCode, String> {
    match cmd {
        FpCmd::Index { dataset, chamber } => {
            let ds: FixedPointDataset = load_json(&dataset, "dataset")?;
            let v = validate_chamber(&ds, &parse_ints(&chamber, "chamber")?).map_err(core_err)?;
            let terms = index(&ds, &v).map_err(core_err)?;
            emit(format, &terms, |t| rationals_table(t))?;
            Ok(ExitCode::SUCCESS)
        }
        FpCmd::IndexCs { dataset, chamber } => {
            let ds: FixedPointDataset = load_json(&dataset, "dataset")?;
            let v = validate_chamber(&ds, &parse_ints(&chamber, "chamber")?).map_err(core_err)?;
            let terms = index_cs(&ds, &v).map_err(core_err)?;
            emit(format, &terms, |t| rationals_table(t))?;
            Ok(ExitCode::SUCCESS)
        }
        FpCmd::Morse {
            dataset,
            chamber,
            variant,
        } => {
            let ds: FixedPointDataset = load_json(&dataset, "dataset")?;
            let v = validate_chamber(&ds, &parse_ints(&chamber, "chamber")?).map_err(core_err)?;
            let series = match Variant::from(variant) {
                Variant::CompactSupport => morse_series_cs(&ds, &v),
                Variant::Ordinary => morse_series(&ds, &v),
            }
            .map_err(core_err)?;
            emit(format, &series, graded_table)?;
            Ok(ExitCode::SUCCESS)
        }
        FpCmd::E1 {
            dataset,
            chamber,
            variant,
        } => {
            let ds: FixedPointDataset = load_json(&dataset, "dataset")?;
            let v = validate_chamber(&ds, &parse_ints(&chamber, "chamber")?).map_err(core_err)?;
            let g = FlowDigraph::from_dataset(&ds);
            let filt = match build_filtration(&g) {
                Ok(f) => f,
                Err(CoreError::Quasicycle { cycle }) => {
                    emit(format, &CycleWitness { quasicycle: cycle }, witness_table)?;
                    return Ok(ExitCode::from(1));
                }
                Err(e) => return Err(core_err(e)),
            };
            if verbose > 0 {
                eprintln!("filtration has {} layers", filt.layers.len());
            }
            let page = e1_page(&ds, &v, &filt, variant.into()).map_err(core_err)?;
            emit(format, &page, e1_table)?;
            Ok(ExitCode::SUCCESS)
        }
        FpCmd::Verify {
            dataset,
            chamber,
            candidate,
            variant,
            box_spec,
            margin,
        } => {
            let ds: FixedPointDataset = load_json(&dataset, "dataset")?;
            let v = validate_chamber(&ds, &parse_ints(&chamber, "chamber")?).map_err(core_err)?;
            let cand = load_candidate(&candidate)?;
            let bx = resolve_box(&box_spec, margin, &ds)?;
            let report = verify_morse(&ds, &v, &cand, variant.into(), &bx).map_err(core_err)?;
            let ok = report.divisible && report.nonneg;
            emit(format, &report, report_table)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn run_poset(cmd: PosetCmd, format: Format) -> Result<ExitCode, String> {
    match cmd {
        PosetCmd::Check { edges } => {
            let g = load_digraph(&edges)?;
            match detect_quasicycle(&g) {
                Some(cycle) => {
                    emit(format, &CycleWitness { quasicycle: cycle }, witness_table)?;
                    Ok(ExitCode::from(1))
                }
                None => {
                    #[derive(Serialize)]
                    struct Acyclic {
                        acyclic: bool,
                    }
                    emit(format, &Acyclic { acyclic: true }, |_| "acyclic".to_string())?;
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        PosetCmd::Filtration { edges } => {
            let g = load_digraph(&edges)?;
            match build_filtration(&g) {
                Ok(f) => {
                    emit(format, &f, filtration_table)?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(CoreError::Quasicycle { cycle }) => {
                    emit(format, &CycleWitness { quasicycle: cycle }, witness_table)?;
                    Ok(ExitCode::from(1))
                }
                Err(e) => Err(core_err(e)),
            }
        }
    }
}

fn parse_flag_args(args: &FlagArgs) -> Result<(RootSystem, Weight), String> {
    let sys = RootSystem::new(args.kind, args.rank).map_err(core_err)?;
    let lam = Weight(parse_ints(&args.lambda, "lambda")?);
    if lam.rank() != args.rank {
        return Err(format!(
            "lambda has {} coordinates, root system has rank {}",
            lam.rank(),
            args.rank
        ));
    }
    Ok((sys, lam))
}

fn run_flag(cmd: FlagCmd, format: Format) -> Result<ExitCode, String> {
    match cmd {
        FlagCmd::Dataset { sys } => {
            let (sys, lam) = parse_flag_args(&sys)?;
            let ds = flag_dataset(&sys, &lam).map_err(core_err)?;
            emit(format, &ds, dataset_table)?;
            Ok(ExitCode::SUCCESS)
        }
        FlagCmd::Euler { sys } => {
            let (sys, lam) = parse_flag_args(&sys)?;
            let rep = dominant_rep(&sys, &lam).map_err(core_err)?;
            let ch = if rep.singular {
                FiniteCharacter::zero()
            } else {
                let sign = if rep.length.is_multiple_of(2) { 1 } else { -1 };
                freudenthal_character(&sys, &rep.dominant)
                    .map_err(core_err)?
                    .scale(&sign.into())
            };
            emit(format, &ch, character_table)?;
            Ok(ExitCode::SUCCESS)
        }
        FlagCmd::Bgg { sys } => {
            let (sys, lam) = parse_flag_args(&sys)?;
            let id = bgg_alternating_identity(&sys, &lam).map_err(core_err)?;
            #[derive(Serialize)]
            struct Out<'a> {
                holds: bool,
                alternating_sum: &'a FiniteCharacter,
                resolved_product: &'a FiniteCharacter,
            }
            let out = Out {
                holds: id.holds,
                alternating_sum: &id.alternating_sum,
                resolved_product: &id.resolved_product,
            };
            emit(format, &out, |o| {
                format!(
                    "holds: {}\nalternating sum:\n{}",
                    o.holds,
                    character_table(o.alternating_sum)
                )
            })?;
            Ok(if id.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        FlagCmd::Bott { sys } => {
            let (sys, lam) = parse_flag_args(&sys)?;
            let groups = bott_cohomology(&sys, &lam).map_err(core_err)?;
            emit(format, &groups, |g| groups_table(g))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
