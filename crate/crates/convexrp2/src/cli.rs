//! Command-line front end: a flat `key = value` config with `[sections]`,
//! representation ingestion and report emission.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::configurations::{flip, unflip, QuadParams};
use crate::curves::BOUNDARY;
use crate::error::Error;
use crate::hilbert_geometry::{canonical_area_s11_unipotent, limit_set, ConvexDomain, Vec2};
use crate::holonomy::{
    fuchsian_pants, fuchsian_torus, pants_from_coordinates, pants_invariants, simple_root_lengths, torus_from_coordinates,
    unipotent_flag, verify_length_identities, PantsCoordinates, Representation, Surface, TorusCoordinates,
};
use crate::mcshane::{mcshane_sum_boundary, mcshane_sum_unipotent};
use crate::projective_core::Mat3;
use crate::volume::{bound_scan, goldman_coordinates, mc_volume_upper_s11, sandwich_bounds, torus_coordinates, v03_bound};

#[derive(Parser, Debug)]
#[command(name = "convexrp2", version, about = "Experiments on convex real projective surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Config file of `key = value` lines grouped in `[sections]`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub depth: Option<i64>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Triple ratios, edge invariants and length identities.
    Invariants,
    /// Truncated McShane sum over simple curves of the torus.
    Mcshane,
    /// Monte-Carlo check of the volume bound chain.
    Volume,
    /// Hilbert area of an ideal fundamental domain.
    Area,
    /// Truncated boundedness estimators.
    ScanBounds,
    /// Flip of a quadrilateral of flags.
    Flip,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Invariants => "invariants",
            Command::Mcshane => "mcshane",
            Command::Volume => "volume",
            Command::Area => "area",
            Command::ScanBounds => "scan-bounds",
            Command::Flip => "flip",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A failure with its process exit code: 2 for configuration errors, 3 for
/// numerical ones.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError { code: 2, message: msg.into() }
}

fn numeric(op: &str) -> impl Fn(Error) -> CliError + '_ {
    move |e| match e {
        Error::Config(_) | Error::UnsupportedArgument(_) | Error::InsufficientSamples { .. } => {
            CliError { code: 2, message: format!("{op}: {e}") }
        }
        _ => CliError { code: 3, message: format!("{op}: {e}") },
    }
}

/// Parsed `[section]` / `key = value` text. Keys before any section header
/// belong to the section `""`; `#` starts a comment.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    pub sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = ConfigFile::default();
        let mut section = String::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| config_error(format!("line {}: bad section header", n + 1)))?;
                section = name.trim().to_string();
                cfg.sections.entry(section.clone()).or_default();
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| config_error(format!("line {}: expected key = value", n + 1)))?;
            cfg.sections.entry(section.clone()).or_default().insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(cfg)
    }

    fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section).and_then(|s| s.get(key)).map(String::as_str)
    }

    fn numbers(&self, section: &str, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.get(section, key)
            .map(|v| {
                v.split(|c: char| c.is_whitespace() || c == ',' || c == ';')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<f64>().map_err(|_| config_error(format!("{section}.{key}: not a number: {s}"))))
                    .collect()
            })
            .transpose()
    }

    fn exact(&self, section: &str, key: &str, n: usize) -> Result<Option<Vec<f64>>, CliError> {
        match self.numbers(section, key)? {
            Some(v) if v.len() != n => Err(config_error(format!("{section}.{key}: expected {n} numbers, got {}", v.len()))),
            other => Ok(other),
        }
    }

    fn scalar(&self, section: &str, key: &str) -> Result<Option<f64>, CliError> {
        Ok(self.exact(section, key, 1)?.map(|v| v[0]))
    }

    fn to_json(&self) -> Value {
        json!(self.sections)
    }
}

/// Where the representation comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum RepSource {
    Disk,
    TorusFg(TorusCoordinates),
    PantsFg(PantsCoordinates),
    Matrices(Surface, Vec<Mat3>),
    FuchsianTorus(f64),
    FuchsianPants(f64, f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub source: Option<RepSource>,
    pub depth: i64,
    pub limit_depth: usize,
    pub tolerances: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub t: f64,
    pub boundary: (f64, f64),
    pub quad: Option<QuadParams>,
    pub raw: ConfigFile,
}

const REP: &str = "representation";
const RUN: &str = "run";

fn positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(config_error(Error::NotPositive { key: key.into(), value: v }.to_string()))
    }
}

fn parse_matrix(cfg: &ConfigFile, key: &str) -> Result<Option<Mat3>, CliError> {
    let Some(text) = cfg.get(REP, key) else { return Ok(None) };
    let rows: Vec<&str> = text.split(';').collect();
    if rows.len() != 3 {
        return Err(config_error(format!("{REP}.{key}: expected three rows separated by ';'")));
    }
    let mut m = Mat3::zeros();
    for (i, row) in rows.iter().enumerate() {
        let vals: Vec<f64> = row
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| config_error(format!("{REP}.{key}: not a number: {s}"))))
            .collect::<Result<_, _>>()?;
        if vals.len() != 3 {
            return Err(config_error(format!("{REP}.{key}: row {} has {} entries", i + 1, vals.len())));
        }
        for (j, v) in vals.into_iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    Ok(Some(m))
}

fn parse_source(cfg: &ConfigFile) -> Result<Option<RepSource>, CliError> {
    let Some(surface) = cfg.get(REP, "surface") else { return Ok(None) };
    let source = cfg.get(REP, "source").unwrap_or("fg");
    let has = |keys: &[&str]| keys.iter().any(|k| cfg.get(REP, k).is_some());
    let fg_keys = ["t", "t_prime", "edges", "sigma_a", "sigma_b", "sigma_c"];
    let mat_keys = ["a", "b", "c"];
    let fuchsian_keys = ["boundary", "lengths"];
    let others: Vec<&[&str]> = match source {
        "fg" => vec![&mat_keys, &fuchsian_keys],
        "matrices" => vec![&fg_keys, &fuchsian_keys],
        "fuchsian" => vec![&fg_keys, &mat_keys],
        s => return Err(config_error(format!("{REP}.source: unknown source {s}"))),
    };
    if surface != "disk" && others.iter().any(|k| has(k)) {
        return Err(config_error("exactly one representation source may be given"));
    }
    let src = match (surface, source) {
        ("disk", _) => RepSource::Disk,
        ("torus", "fg") => {
            let t = cfg.exact(REP, "t", 2)?.ok_or_else(|| config_error("torus FG source needs t"))?;
            let e = cfg.exact(REP, "edges", 6)?.ok_or_else(|| config_error("torus FG source needs edges"))?;
            let names = ["t1", "t2"];
            for (n, v) in names.iter().zip(&t) {
                positive(n, *v)?;
            }
            for (i, v) in e.iter().enumerate() {
                positive(&format!("edges[{i}]"), *v)?;
            }
            RepSource::TorusFg(TorusCoordinates { t: [t[0], t[1]], edges: [(e[0], e[1]), (e[2], e[3]), (e[4], e[5])] })
        }
        ("pants", "fg") => {
            let s = |k: &str| -> Result<f64, CliError> { cfg.scalar(REP, k)?.ok_or_else(|| config_error(format!("pants FG source needs {k}"))) };
            let pair = |k: &str| -> Result<(f64, f64), CliError> {
                let v = cfg.exact(REP, k, 2)?.ok_or_else(|| config_error(format!("pants FG source needs {k}")))?;
                Ok((v[0], v[1]))
            };
            RepSource::PantsFg(PantsCoordinates {
                t: s("t")?,
                t_prime: s("t_prime")?,
                sigma_a: pair("sigma_a")?,
                sigma_b: pair("sigma_b")?,
                sigma_c: pair("sigma_c")?,
            })
        }
        (surf, "matrices") => {
            let (surface, keys): (Surface, &[&str]) = match surf {
                "torus" => (Surface::OnceHoledTorus, &["a", "b"]),
                "pants" => (Surface::PairOfPants, &["a", "b", "c"]),
                s => return Err(config_error(format!("{REP}.surface: unknown surface {s}"))),
            };
            let mats = keys
                .iter()
                .map(|k| parse_matrix(cfg, k)?.ok_or_else(|| config_error(format!("matrix source needs {k}"))))
                .collect::<Result<Vec<_>, _>>()?;
            RepSource::Matrices(surface, mats)
        }
        ("torus", "fuchsian") => RepSource::FuchsianTorus(cfg.scalar(REP, "boundary")?.unwrap_or(0.0)),
        ("pants", "fuchsian") => {
            let l = cfg.exact(REP, "lengths", 3)?.ok_or_else(|| config_error("Fuchsian pants need lengths"))?;
            for (i, v) in l.iter().enumerate() {
                positive(&format!("lengths[{i}]"), *v)?;
            }
            RepSource::FuchsianPants(l[0], l[1], l[2])
        }
        (s, _) => return Err(config_error(format!("{REP}.surface: unknown surface {s}"))),
    };
    Ok(Some(src))
}

impl ExperimentConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let raw = match &cli.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| config_error(format!("{}: {e}", p.display())))?;
                ConfigFile::parse(&text)?
            }
            None => ConfigFile::default(),
        };
        Self::new(cli.command, raw, cli.seed, cli.samples, cli.depth)
    }

    pub fn new(command: Command, raw: ConfigFile, seed: Option<u64>, samples: Option<usize>, depth: Option<i64>) -> Result<Self, CliError> {
        let int = |k: &str| -> Result<Option<f64>, CliError> { raw.scalar(RUN, k) };
        let depth = depth.or(int("depth")?.map(|v| v as i64)).unwrap_or(20);
        if depth < 1 {
            return Err(config_error("depth must be at least 1"));
        }
        let samples = samples.or(int("samples")?.map(|v| v as usize)).unwrap_or(100_000);
        if command == Command::Volume && samples < 1000 {
            return Err(config_error(format!("samples must be at least 1000, got {samples}")));
        }
        let seed = seed.or(int("seed")?.map(|v| v as u64)).unwrap_or(1);
        let boundary = match raw.numbers(RUN, "L")? {
            None => (0.0, 0.0),
            Some(v) if v.len() == 1 => (v[0], 0.0),
            Some(v) if v.len() == 2 => (v[0], v[1]),
            Some(_) => return Err(config_error("run.L: expected one or two numbers")),
        };
        let quad = match raw.sections.get("quad") {
            None => None,
            Some(_) => {
                let g = |k: &str| -> Result<f64, CliError> {
                    let v = raw.scalar("quad", k)?.ok_or_else(|| config_error(format!("quad.{k} missing")))?;
                    positive(k, v)
                };
                Some(QuadParams::new(g("a")?, g("b")?, g("c")?, g("d")?))
            }
        };
        Ok(ExperimentConfig {
            command,
            source: parse_source(&raw)?,
            depth,
            limit_depth: int("limit_depth")?.map(|v| v as usize).unwrap_or(5),
            tolerances: raw.numbers(RUN, "tol")?.unwrap_or_else(|| vec![1e-3, 1e-4]),
            samples,
            seed,
            t: int("t")?.unwrap_or(1.0),
            boundary,
            quad,
            raw,
        })
    }

    fn provenance(&self) -> Value {
        json!({
            "command": self.command.name(),
            "depth": self.depth,
            "samples": self.samples,
            "seed": self.seed,
            "file": self.raw.to_json(),
        })
    }
}

fn build_rep(src: &RepSource) -> Result<Representation, CliError> {
    match src {
        RepSource::Disk => Err(config_error("the disk has no representation")),
        RepSource::TorusFg(c) => torus_from_coordinates(c).map_err(numeric("holonomy_from_fg")),
        RepSource::PantsFg(c) => pants_from_coordinates(c).map_err(numeric("holonomy_from_fg")),
        RepSource::Matrices(s, m) => Representation::new(*s, m.clone()).map_err(numeric("representation")),
        RepSource::FuchsianTorus(l) => Ok(fuchsian_torus(*l)),
        RepSource::FuchsianPants(a, b, c) => Ok(fuchsian_pants(*a, *b, *c)),
    }
}

fn require_rep(cfg: &ExperimentConfig) -> Result<Representation, CliError> {
    build_rep(cfg.source.as_ref().ok_or_else(|| config_error("no [representation] section"))?)
}

/// A finished report: JSON body plus an optional table for CSV output.
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
}

fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

fn cmd_invariants(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let rep = require_rep(cfg)?;
    let mut rows = Vec::new();
    let result = match rep.surface {
        Surface::OnceHoledTorus => {
            let c = torus_coordinates(&rep, "a", "b", "").map_err(numeric("torus_coordinates"))?;
            let (l1, l2) = rep.lengths(BOUNDARY).unwrap_or((0.0, 0.0));
            rows.extend([("T1", c.t[0]), ("T2", c.t[1]), ("boundary_l1", l1), ("boundary_l2", l2)]);
            for (i, e) in c.edges.iter().enumerate() {
                rows.push((["-D1(e1)", "-D1(e2)", "-D1(e3)"][i], e.0));
                rows.push((["-D2(e1)", "-D2(e2)", "-D2(e3)"][i], e.1));
            }
            json!({
                "surface": "torus",
                "triple_ratios": c.t,
                "edges": c.edges,
                "boundary_lengths": [l1, l2],
                "cusped": unipotent_flag(&rep.matrix(BOUNDARY)).is_ok(),
                "relator_residual": rep.relator_residual,
            })
        }
        Surface::PairOfPants => {
            let p = pants_invariants(&rep).map_err(numeric("pants_invariants"))?;
            let res = verify_length_identities(&rep).map_err(numeric("verify_length_identities"))?;
            let g = goldman_coordinates(&p, 0.0, 0.0, 0.0, 0.0);
            let lengths: Vec<(f64, f64)> = rep
                .generators
                .iter()
                .map(|m| simple_root_lengths(m).map(|r| (r.l1, r.l2)))
                .collect::<Result<_, _>>()
                .map_err(numeric("simple_root_lengths"))?;
            rows.extend([("t", p.t), ("t_prime", p.t_prime), ("X_P", g[0]), ("Y_P", g[1])]);
            for (i, r) in res.iter().enumerate() {
                rows.push((["res_l1_a", "res_l2_a", "res_l1_b", "res_l2_b", "res_l1_c", "res_l2_c"][i], *r));
            }
            json!({
                "surface": "pants",
                "sigma_a": p.sigma_a,
                "sigma_b": p.sigma_b,
                "sigma_c": p.sigma_c,
                "t": p.t,
                "t_prime": p.t_prime,
                "X_P": g[0],
                "Y_P": g[1],
                "cuff_lengths": lengths,
                "length_identity_residuals": res,
                "max_residual": res.iter().copied().fold(0.0, f64::max),
                "relator_residual": rep.relator_residual,
            })
        }
    };
    let mut csv = String::from("name,value\n");
    for (k, v) in rows {
        let _ = writeln!(csv, "{k},{}", f17(v));
    }
    Ok(Report { json: result, csv: Some(csv) })
}

fn cmd_mcshane(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let rep = require_rep(cfg)?;
    let cusped = unipotent_flag(&rep.matrix(BOUNDARY)).is_ok();
    let report = if cusped {
        mcshane_sum_unipotent(&rep, cfg.depth).map_err(numeric("mcshane_sum_unipotent"))?
    } else {
        mcshane_sum_boundary(&rep, cfg.depth).map_err(numeric("mcshane_sum_boundary"))?
    };
    let table: Vec<Value> = report.convergence().iter().map(|(n, s)| json!({"N": n, "partial_sum": s})).collect();
    Ok(Report {
        json: json!({
            "boundary": if cusped { "cusp" } else { "geodesic" },
            "sum": report.sum,
            "target": report.target,
            "defect": (report.sum - report.target).abs(),
            "curves": report.records.len(),
            "last_level_max_term": report.last_level_max_term,
            "convergence": table,
        }),
        csv: Some(report.to_csv()),
    })
}

fn cmd_volume(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let est = mc_volume_upper_s11(cfg.t, cfg.boundary, cfg.samples, cfg.seed).map_err(numeric("mc_volume_upper_s11"))?;
    let sandwich = sandwich_bounds(3, cfg.t).map_err(numeric("sandwich_bounds"))?;
    let mut csv = String::from("label,value\n");
    let _ = writeln!(csv, "estimate,{}", f17(est.estimate));
    let _ = writeln!(csv, "stderr,{}", f17(est.stderr));
    for c in &est.chain_values {
        let _ = writeln!(csv, "{},{}", c.label, f17(c.value));
    }
    let mut v = serde_json::to_value(&est).expect("plain data");
    v["bound_formula"] = json!("-(4t^5+8t^4) Li_3(-e^t)");
    v["sandwich_d3"] = serde_json::to_value(sandwich).expect("plain data");
    v["v03_bound"] = json!(v03_bound(cfg.t));
    Ok(Report { json: v, csv: Some(csv) })
}

fn cmd_area(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let (label, report) = match cfg.source.as_ref() {
        Some(RepSource::Disk) => {
            let s3 = 3f64.sqrt() / 2.0;
            let tri = [Vec2::new(1.0, 0.0), Vec2::new(-0.5, s3), Vec2::new(-0.5, -s3)];
            ("ideal triangle area", ConvexDomain::unit_disk().area(tri, &cfg.tolerances).map_err(numeric("area"))?)
        }
        _ => {
            let rep = require_rep(cfg)?;
            if rep.surface != Surface::OnceHoledTorus {
                return Err(config_error("area is provided for the once-punctured torus and the disk"));
            }
            if unipotent_flag(&rep.matrix(BOUNDARY)).is_ok() {
                let (r, _) = canonical_area_s11_unipotent(&rep, cfg.limit_depth, &cfg.tolerances)
                    .map_err(numeric("canonical_area_s11_unipotent"))?;
                ("canonical area", r)
            } else {
                let dom = limit_set(&rep, cfg.limit_depth).map_err(numeric("limit_set"))?;
                let p = rep.frame(BOUNDARY).map_err(numeric("frame"))?.plus();
                let v: Vec<Vec2> =
                    ["A", "", "BA", "aBA"].iter().map(|w| dom.to_chart(&p.transform(&rep.matrix(w)).point)).collect();
                let a = dom.area([v[0], v[1], v[2]], &cfg.tolerances).map_err(numeric("area"))?;
                let b = dom.area([v[1], v[3], v[2]], &cfg.tolerances).map_err(numeric("area"))?;
                let conv = a.convergence.iter().zip(&b.convergence).map(|(x, y)| (x.0, x.1 + y.1)).collect();
                ("limit-set-domain area", crate::hilbert_geometry::AreaReport { area: a.area + b.area, convergence: conv })
            }
        }
    };
    let mut csv = String::from("target,area\n");
    for (t, a) in &report.convergence {
        let _ = writeln!(csv, "{},{}", f17(*t), f17(*a));
    }
    Ok(Report { json: json!({"label": label, "area": report.area, "convergence": report.convergence}), csv: Some(csv) })
}

fn cmd_scan(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let rep = require_rep(cfg)?;
    let s = bound_scan(&rep, cfg.depth).map_err(numeric("bound_scan"))?;
    let csv = format!("level,m_t,m_d,m_l,t_lower\n{},{},{},{},{}\n", s.level, f17(s.m_t), f17(s.m_d), f17(s.m_l), f17(s.t_lower));
    Ok(Report { json: serde_json::to_value(&s).expect("plain data"), csv: Some(csv) })
}

fn cmd_flip(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let q = cfg.quad.ok_or_else(|| config_error("flip needs a [quad] section with a, b, c, d"))?;
    let f = flip(q);
    let back = unflip(f);
    let residual = q.as_array().iter().zip(back.as_array()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let csv = format!(
        "which,a,b,c,d\ninput,{}\nflipped,{}\n",
        q.as_array().map(f17).join(","),
        f.as_array().map(f17).join(",")
    );
    Ok(Report { json: json!({"input": q.as_array(), "flipped": f.as_array(), "round_trip_residual": residual}), csv: Some(csv) })
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let mut r = match cfg.command {
        Command::Invariants => cmd_invariants(cfg),
        Command::Mcshane => cmd_mcshane(cfg),
        Command::Volume => cmd_volume(cfg),
        Command::Area => cmd_area(cfg),
        Command::ScanBounds => cmd_scan(cfg),
        Command::Flip => cmd_flip(cfg),
    }?;
    r.json = json!({"config": cfg.provenance(), "result": r.json});
    Ok(r)
}

fn text_value(v: &Value) -> String {
    match v {
        Value::Number(n) if !n.is_i64() && !n.is_u64() => f17(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => format!("[{}]", a.iter().map(text_value).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn text_lines(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                text_lines(x, &key, out);
            }
        }
        other => {
            let _ = writeln!(out, "{prefix} = {}", text_value(other));
        }
    }
}

pub fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&r.json).expect("serializable") + "\n",
        Format::Csv => r.csv.clone().unwrap_or_default(),
        Format::Text => {
            let mut s = String::new();
            text_lines(&r.json["result"], "", &mut s);
            s
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = ExperimentConfig::from_cli(cli)?;
    let report = execute(&cfg)?;
    let text = render(&report, cli.format);
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| config_error(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: Command, text: &str) -> Result<ExperimentConfig, CliError> {
        ExperimentConfig::new(command, ConfigFile::parse(text)?, None, None, None)
    }

    #[test]
    fn parses_sections() {
        let c = ConfigFile::parse("top = 1\n[run]\n# note\ndepth = 7 # inline\n").unwrap();
        assert_eq!(c.get("", "top"), Some("1"));
        assert_eq!(c.get("run", "depth"), Some("7"));
        assert_eq!(ConfigFile::parse("[run\n").unwrap_err().code, 2);
        assert_eq!(ConfigFile::parse("novalue\n").unwrap_err().code, 2);
    }

    #[test]
    fn malformed_matrix_is_a_config_error() {
        let e = cfg(Command::Invariants, "[representation]\nsurface = torus\nsource = matrices\na = 1 0 0; 0 1; 0 0 1\nb = 1 0 0; 0 1 0; 0 0 1\n")
            .unwrap_err();
        assert_eq!(e.code, 2);
    }

    #[test]
    fn non_positive_parameter_names_key() {
        let e = cfg(Command::Invariants, "[representation]\nsurface = torus\nt = 1 1\nedges = 1 1 -1 1 1 1\n").unwrap_err();
        assert_eq!(e.code, 2);
        assert!(e.message.contains("edges[2]"), "{}", e.message);
    }

    #[test]
    fn two_sources_are_rejected() {
        let e = cfg(Command::Invariants, "[representation]\nsurface = torus\nt = 1 1\nedges = 1 1 1 1 1 1\na = 1 0 0; 0 1 0; 0 0 1\n")
            .unwrap_err();
        assert_eq!(e.code, 2);
    }

    #[test]
    fn fuchsian_pants_invariants_report() {
        let c = cfg(Command::Invariants, "[representation]\nsurface = pants\nsource = fuchsian\nlengths = 1 1.5 2\n").unwrap();
        let r = execute(&c).unwrap();
        assert!(r.json["result"]["max_residual"].as_f64().unwrap() < 1e-8);
        assert_eq!(r.json["config"]["command"], "invariants");
    }

    #[test]
    fn shallow_mcshane_reports_defect() {
        let c = cfg(Command::Mcshane, "[representation]\nsurface = torus\nt = 1 1\nedges = 1 1 1 1 1 1\n[run]\ndepth = 1\n").unwrap();
        let r = execute(&c).unwrap();
        assert!(r.json["result"]["defect"].as_f64().unwrap() > 0.1);
    }

    #[test]
    fn flip_round_trip() {
        let c = cfg(Command::Flip, "[quad]\na = 1.5\nb = 0.7\nc = 2\nd = 0.9\n").unwrap();
        let r = execute(&c).unwrap();
        assert!(r.json["result"]["round_trip_residual"].as_f64().unwrap() < 1e-12);
        assert!(render(&r, Format::Text).contains("round_trip_residual"));
    }

    #[test]
    fn volume_needs_samples() {
        let e = ExperimentConfig::new(Command::Volume, ConfigFile::default(), None, Some(10), None).unwrap_err();
        assert_eq!(e.code, 2);
    }
}
