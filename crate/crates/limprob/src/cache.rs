//! On-disk cache of enumeration tables. One file per (model, max_size) with
//! sorted lines `code<TAB>size<TAB>aut`; hypergraph files start with a
//! `d=<uniformity>` header line. Loaded in preference to recomputation.
//!
//! The cache directory comes from the `LIMPROB_CACHE_DIR` environment
//! variable, falling back to `.limprob-cache` in the working directory.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::fragment::ComponentClass;
use crate::intervals::connected_classes;
use crate::model::ModelKind;

pub const CACHE_DIR_ENV: &str = "LIMPROB_CACHE_DIR";

pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".limprob-cache"))
}

pub fn cache_file(dir: &Path, kind: ModelKind, max_size: u32) -> PathBuf {
    let name = match kind {
        ModelKind::Graph => format!("graph-unicycles-{max_size}.tsv"),
        ModelKind::Hypergraph { d } => format!("hyper{d}-unicycles-{max_size}.tsv"),
    };
    dir.join(name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Cache,
    Computed,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::Cache => "cache",
            Source::Computed => "computed",
        }
    }
}

fn render(kind: ModelKind, classes: &[ComponentClass]) -> String {
    let mut out = String::new();
    if let ModelKind::Hypergraph { d } = kind {
        out.push_str(&format!("d={d}\n"));
    }
    let mut sorted: Vec<&ComponentClass> = classes.iter().collect();
    sorted.sort_by(|a, b| a.size.cmp(&b.size).then_with(|| a.code.cmp(&b.code)));
    for c in sorted {
        out.push_str(&format!("{}\t{}\t{}\n", c.code, c.size, c.aut));
    }
    out
}

fn parse(kind: ModelKind, text: &str) -> Result<Vec<ComponentClass>> {
    let mut lines = text.lines().peekable();
    if let ModelKind::Hypergraph { d } = kind {
        match lines.next() {
            Some(h) if h == format!("d={d}") => {}
            other => {
                return Err(Error::CacheFormat(format!(
                    "expected header d={d}, found {other:?}"
                )))
            }
        }
    }
    let mut classes = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let code = parts
            .next()
            .ok_or_else(|| Error::CacheFormat("missing code".into()))?;
        let size: u32 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::CacheFormat(format!("bad size on line: {line}")))?;
        let aut = parts
            .next()
            .and_then(|s| BigUint::from_str(s).ok())
            .ok_or_else(|| Error::CacheFormat(format!("bad aut on line: {line}")))?;
        if parts.next().is_some() {
            return Err(Error::CacheFormat(format!("trailing fields on line: {line}")));
        }
        classes.push(ComponentClass {
            code: code.to_string(),
            size,
            aut,
        });
    }
    Ok(classes)
}

/// Load the table if the file exists and parses.
pub fn load(dir: &Path, kind: ModelKind, max_size: u32) -> Result<Option<Vec<ComponentClass>>> {
    let path = cache_file(dir, kind, max_size);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path)?;
    Ok(Some(parse(kind, &text)?))
}

/// Enumerate with the cache consulted first.
pub fn classes_cached(
    dir: &Path,
    kind: ModelKind,
    max_size: u32,
    cap: u32,
) -> Result<(Vec<ComponentClass>, Source)> {
    if let Some(classes) = load(dir, kind, max_size)? {
        return Ok((classes, Source::Cache));
    }
    Ok((connected_classes(kind, max_size, cap)?, Source::Computed))
}

/// Precompute and store the table; a no-op when the file already exists.
pub fn warm(dir: &Path, kind: ModelKind, max_size: u32, cap: u32) -> Result<Source> {
    let path = cache_file(dir, kind, max_size);
    if path.exists() {
        return Ok(Source::Cache);
    }
    let classes = connected_classes(kind, max_size, cap)?;
    std::fs::create_dir_all(dir)?;
    std::fs::write(&path, render(kind, &classes))?;
    Ok(Source::Computed)
}

/// Remove the table file; succeeds when it was already absent.
pub fn clear(dir: &Path, kind: ModelKind, max_size: u32) -> Result<bool> {
    let path = cache_file(dir, kind, max_size);
    if path.exists() {
        std::fs::remove_file(&path)?;
        Ok(true)
    } else {
        Ok(false)
    }
}
