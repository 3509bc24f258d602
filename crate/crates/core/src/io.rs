//! Geometry and weight files, CSV tables with a provenance footer, and
//! atomic output.
//!
//! Geometry files hold `alpha1`, `beta1`, `alpha2`, `beta2` as decimal or
//! `p/q` strings. Weight files hold `[mu1]` and `[mu2]` sections with `kind`,
//! `coefficients` (ascending, each a real or complex literal such as `"1-2i"`)
//! and an optional `interval` defaulting to the geometry's.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::curve::Geometry;
use crate::error::{Error, Result};
use crate::precision::PrecisionCtx;
use crate::scalar::Complex;
use crate::weight::{WeightKind, WeightSpec};

#[derive(Deserialize)]
#[serde(untagged)]
enum Number {
    Text(String),
    Int(i64),
    Float(f64),
}

impl Number {
    fn literal(&self) -> String {
        match self {
            Number::Text(s) => s.clone(),
            Number::Int(v) => v.to_string(),
            Number::Float(v) => format!("{v:e}"),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryFile {
    alpha1: Number,
    beta1: Number,
    alpha2: Number,
    beta2: Number,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightSection {
    kind: String,
    coefficients: Vec<Number>,
    interval: Option<[Number; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsFile {
    mu1: WeightSection,
    mu2: WeightSection,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

pub fn parse_geometry(text: &str, ctx: PrecisionCtx) -> Result<Geometry> {
    let f: GeometryFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Geometry::parse(&f.alpha1.literal(), &f.beta1.literal(), &f.alpha2.literal(), &f.beta2.literal(), ctx)
}

pub fn load_geometry(path: &Path, ctx: PrecisionCtx) -> Result<Geometry> {
    parse_geometry(&read(path)?, ctx)
}

fn build_weight(section: &WeightSection, geometry: &Geometry, i: usize, ctx: PrecisionCtx) -> Result<WeightSpec> {
    let kind: WeightKind = section.kind.parse()?;
    let coeffs = section.coefficients.iter().map(|c| Complex::parse(&c.literal(), ctx.bits)).collect::<Result<Vec<_>>>()?;
    let (a, b) = match &section.interval {
        Some([a, b]) => (ctx.parse(&a.literal())?, ctx.parse(&b.literal())?),
        None => geometry.interval(i),
    };
    let (ga, gb) = geometry.interval(i);
    if a != ga || b != gb {
        return Err(Error::InvalidInput(format!("mu{i} interval must equal the geometry interval")));
    }
    WeightSpec::new(kind, coeffs, a, b, ctx)
}

pub fn parse_weights(text: &str, geometry: &Geometry, ctx: PrecisionCtx) -> Result<(WeightSpec, WeightSpec)> {
    let f: WeightsFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((build_weight(&f.mu1, geometry, 1, ctx)?, build_weight(&f.mu2, geometry, 2, ctx)?))
}

pub fn load_weights(path: &Path, geometry: &Geometry, ctx: PrecisionCtx) -> Result<(WeightSpec, WeightSpec)> {
    parse_weights(&read(path)?, geometry, ctx)
}

/// Lebesgue measure on both intervals.
pub fn lebesgue_weights(geometry: &Geometry, ctx: PrecisionCtx) -> Result<(WeightSpec, WeightSpec)> {
    Ok((
        WeightSpec::lebesgue(geometry.alpha1.clone(), geometry.beta1.clone(), ctx)?,
        WeightSpec::lebesgue(geometry.alpha2.clone(), geometry.beta2.clone(), ctx)?,
    ))
}

/// A CSV table followed by `# key: value` provenance lines.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: String,
    pub rows: Vec<String>,
    pub provenance: Vec<(String, String)>,
}

impl Table {
    pub fn new(header: impl Into<String>) -> Self {
        Table { header: header.into(), ..Default::default() }
    }

    pub fn push(&mut self, row: impl Into<String>) {
        self.rows.push(row.into());
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.provenance.push((key.into(), value.into()));
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        s.push_str(&self.header);
        s.push('\n');
        for r in &self.rows {
            s.push_str(r);
            s.push('\n');
        }
        for (k, v) in &self.provenance {
            s.push_str(&format!("# {k}: {v}\n"));
        }
        s
    }
}

fn temp_path(path: &Path) -> PathBuf {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!(".{name}.tmp{}", std::process::id()))
}

/// Writes through a temporary file in the same directory and renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = temp_path(path);
    let io = |e: std::io::Error| Error::InvalidInput(format!("{}: {e}", path.display()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}
