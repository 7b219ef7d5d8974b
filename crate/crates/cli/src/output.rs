use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use dephase_core::{Extremum, ExtremumKind, SweepTable, TrajectoryTable};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const OUT_DIR_ENV: &str = "DEPHASE_OUT_DIR";

pub const TRAJECTORY_HEADER: &str = "t,D_T,S_L_corr,S_L_prod,r,s,phi,absA_corr,absA_prod";
pub const SWEEP_HEADER: &str = "sweep_param,value,D_T_inf";

/// Round-trippable fixed layout, identical across runs and platforms.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Relative paths are placed under `$DEPHASE_OUT_DIR` when it is set.
pub fn resolve_out(out: &str) -> PathBuf {
    let path = PathBuf::from(out);
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path,
    }
}

pub fn trajectory_csv(table: &TrajectoryTable) -> String {
    let mut out = String::with_capacity(64 + table.rows.len() * 220);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for r in &table.rows {
        let fields = [
            r.t,
            r.distance,
            r.entropy_corr,
            r.entropy_prod,
            r.r,
            r.s,
            r.phi,
            r.abs_a_corr,
            r.abs_a_prod,
        ];
        let line: Vec<String> = fields.iter().map(|&v| num(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn extremum_footer(ext: &Extremum) -> String {
    match (ext.kind, ext.location) {
        (ExtremumKind::None, _) | (_, None) => "# extremum: none".to_string(),
        (kind, Some(at)) => format!("# extremum: {kind} at {}", num(at)),
    }
}

pub fn sweep_csv(table: &SweepTable, ext: &Extremum) -> String {
    let name = table.parameter.as_str();
    let mut out = String::with_capacity(64 + table.rows.len() * 60);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for row in &table.rows {
        out.push_str(&format!(
            "{name},{},{}\n",
            num(row.value),
            num(row.distance)
        ));
    }
    out.push_str(&extremum_footer(ext));
    out.push('\n');
    out
}

#[derive(Debug, Serialize)]
struct Artifact {
    path: String,
    bytes: usize,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'static str,
    config: &'a C,
    resolved: &'a R,
    artifacts: Vec<Artifact>,
}

pub fn manifest_path(csv: &Path) -> PathBuf {
    let stem = csv
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".to_string());
    csv.with_file_name(format!("{stem}.manifest.json"))
}

/// Writes the CSV and a manifest beside it; returns the manifest path.
pub fn write_with_manifest<C: Serialize, R: Serialize>(
    csv_path: &Path,
    body: &str,
    subcommand: &'static str,
    config: &C,
    resolved: &R,
) -> Result<PathBuf> {
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(csv_path, body).with_context(|| format!("writing {}", csv_path.display()))?;
    let file_name = csv_path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let manifest = Manifest {
        tool: "dephase",
        version: env!("CARGO_PKG_VERSION"),
        subcommand,
        config,
        resolved,
        artifacts: vec![Artifact {
            path: file_name,
            bytes: body.len(),
            sha256: hex::encode(Sha256::digest(body.as_bytes())),
        }],
    };
    let path = manifest_path(csv_path);
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
