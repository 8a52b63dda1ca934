//! Artifact writers and the provenance block attached to every output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Provenance<C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: C,
}

impl<C: Serialize> Provenance<C> {
    pub fn new(command: &'static str, config: C) -> Self {
        Provenance {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
        }
    }

    /// One-line `#` comment that heads CSV outputs.
    pub fn csv_comment(&self) -> Result<String> {
        Ok(format!("# {}\n", serde_json::to_string(self)?))
    }
}

/// Writes to `path`, or to stdout when `path` is `None` or `-`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        _ => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// CSV text with the provenance comment on the first line.
pub fn csv_text<C: Serialize, R: Serialize>(prov: &Provenance<C>, rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let body = String::from_utf8(w.into_inner().context("flushing CSV")?)?;
    Ok(prov.csv_comment()? + &body)
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub line: usize,
    pub receptor: PathBuf,
    pub ligand: PathBuf,
}

/// Tab-separated `receptor<TAB>ligand` lines; blank lines and `#` comments
/// are skipped. Relative paths resolve against the manifest's directory.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
            bail!(crate::UsageError(format!(
                "{}:{}: expected receptor<TAB>ligand",
                path.display(),
                i + 1
            )));
        }
        entries.push(ManifestEntry {
            line: i + 1,
            receptor: base.join(fields[0]),
            ligand: base.join(fields[1]),
        });
    }
    if entries.is_empty() {
        bail!(crate::UsageError(format!(
            "manifest {} lists no inputs",
            path.display()
        )));
    }
    Ok(entries)
}

/// File stem used for per-job artifacts: `0003_ligand`.
pub fn job_stem(index: usize, ligand: &Path) -> String {
    let stem = ligand
        .file_stem()
        .map_or("ligand".into(), |s| s.to_string_lossy().into_owned());
    format!("{index:04}_{stem}")
}

pub fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}
