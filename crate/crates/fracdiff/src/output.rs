//! CSV and JSON emission. Every file is written to a temporary file in the
//! destination directory and renamed into place.
//!
//! Floats use Rust's shortest round-trip formatting, so output is
//! byte-stable for a fixed configuration and platform.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::json;

use crate::config::{ExperimentConfig, Format, Problem};
use crate::error::Result;
use crate::experiment::{full_field, Convergence, SolveOutcome, TableRow};

/// Writes `bytes` to `path` via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn problem_name(p: Problem) -> &'static str {
    match p {
        Problem::Linear => "linear",
        Problem::Sqrt => "sqrt",
    }
}

fn stem(cfg: &ExperimentConfig) -> String {
    format!("{}_a{}_n{}", problem_name(cfg.problem), cfg.alpha, cfg.n)
}

fn json_bytes<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(v)?;
    out.push(b'\n');
    Ok(out)
}

/// Long-format `t,x,u` CSV preceded by `# key: value` metadata lines.
pub fn grid_csv(meta: &[(&str, String)], t: &[f64], x: &[f64], u: &DMatrix<f64>) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for (k, v) in meta {
        writeln!(out, "# {k}: {v}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "x", "u"])?;
    for (j, &tj) in t.iter().enumerate() {
        for (i, &xi) in x.iter().enumerate() {
            w.write_record([num(tj), num(xi), num(u[(j, i)])])?;
        }
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

fn grid_json(meta: &[(&str, String)], t: &[f64], x: &[f64], u: &DMatrix<f64>) -> Result<Vec<u8>> {
    let rows: Vec<Vec<f64>> = u.row_iter().map(|r| r.iter().copied().collect()).collect();
    let meta: serde_json::Map<String, serde_json::Value> = meta.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    json_bytes(&json!({ "metadata": meta, "t": t, "x": x, "u": rows }))
}

/// Solution file plus a JSON report; returns the written paths.
pub fn write_solve(dir: &Path, o: &SolveOutcome) -> Result<Vec<PathBuf>> {
    let cfg = &o.config;
    let u = full_field(&o.spec, &o.field);
    let t = o.spec.op.grid().nodes();
    let x = o.field.space.nodes();
    let meta = [
        ("problem", problem_name(cfg.problem).to_string()),
        ("alpha", cfg.alpha.to_string()),
        ("n", cfg.n.to_string()),
        ("m", o.field.space.m().to_string()),
        ("config_hash", cfg.hash()),
    ];
    let name = stem(cfg);
    let sol = match cfg.output.format {
        Format::Csv => (dir.join(format!("solution_{name}.csv")), grid_csv(&meta, t, &x, &u)?),
        Format::Json => (dir.join(format!("solution_{name}.json")), grid_json(&meta, t, &x, &u)?),
    };
    write_atomic(&sol.0, &sol.1)?;

    let report = json!({
        "config": cfg,
        "config_hash": cfg.hash(),
        "sol_err": o.sol_err.map(|s| s.value()),
        "sol_err_detail": o.sol_err,
        "conservation_errs": o.conservation.errs,
        "residual": o.field.residual,
        "residual_history": o.field.residual_history,
        "iterations": o.field.iterations,
        "cond_a": o.field.cond_a,
        "rcond": o.field.rcond,
    });
    let rep = dir.join(format!("report_{name}.json"));
    write_atomic(&rep, &json_bytes(&report)?)?;
    Ok(vec![sol.0, rep])
}

/// `alpha,sol_err,err1,err2,err3,err4,config_hash`; missing values are empty.
pub fn table_csv(rows: &[TableRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["alpha", "sol_err", "err1", "err2", "err3", "err4", "config_hash"])?;
    for r in rows {
        let mut rec = vec![r.alpha.to_string(), opt(r.sol_err)];
        rec.extend(r.errs.iter().map(|e| opt(*e)));
        rec.push(r.config_hash.clone());
        w.write_record(&rec)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn write_table(dir: &Path, cfg: &ExperimentConfig, rows: &[TableRow]) -> Result<Vec<PathBuf>> {
    let base = format!("table_{}_n{}", problem_name(cfg.problem), cfg.n);
    let (path, bytes) = match cfg.output.format {
        Format::Csv => (dir.join(format!("{base}.csv")), table_csv(rows)?),
        Format::Json => (dir.join(format!("{base}.json")), json_bytes(&rows)?),
    };
    write_atomic(&path, &bytes)?;
    Ok(vec![path])
}

/// `n,sol_err,uptick,config_hash` plus a JSON summary.
pub fn convergence_csv(c: &Convergence, hash: &str) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "sol_err", "uptick", "config_hash"])?;
    for p in &c.points {
        w.write_record([p.n.to_string(), num(p.sol_err), p.uptick.to_string(), hash.to_string()])?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn write_convergence(dir: &Path, cfg: &ExperimentConfig, c: &Convergence) -> Result<Vec<PathBuf>> {
    let base = format!("convergence_{}_a{}", problem_name(cfg.problem), cfg.alpha);
    let hash = cfg.hash();
    let doc = json!({ "config_hash": hash, "alpha": c.alpha, "points": c.points, "summary": c.summary });
    match cfg.output.format {
        Format::Csv => {
            let csv_path = dir.join(format!("{base}.csv"));
            let summary = dir.join(format!("{base}_summary.json"));
            write_atomic(&csv_path, &convergence_csv(c, &hash)?)?;
            write_atomic(&summary, &json_bytes(&doc)?)?;
            Ok(vec![csv_path, summary])
        }
        Format::Json => {
            let path = dir.join(format!("{base}.json"));
            write_atomic(&path, &json_bytes(&doc)?)?;
            Ok(vec![path])
        }
    }
}

pub fn write_reference(dir: &Path, cfg: &ExperimentConfig, t: &[f64], x: &[f64], u: &DMatrix<f64>) -> Result<Vec<PathBuf>> {
    let meta = [
        ("alpha", cfg.alpha.to_string()),
        ("n", cfg.n.to_string()),
        ("series_tol", num(cfg.reference.series_tol)),
        ("config_hash", cfg.hash()),
    ];
    let base = format!("reference_a{}_n{}", cfg.alpha, cfg.n);
    let (path, bytes) = match cfg.output.format {
        Format::Csv => (dir.join(format!("{base}.csv")), grid_csv(&meta, t, x, u)?),
        Format::Json => (dir.join(format!("{base}.json")), grid_json(&meta, t, x, u)?),
    };
    write_atomic(&path, &bytes)?;
    Ok(vec![path])
}
