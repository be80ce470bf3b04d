//! Profile table emission and parsing. Numbers are written with 17
//! significant digits so every f64 survives the round trip bit-exactly.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use bpswall_core::{FieldProfile, WallProfile};

pub const HEADER: &str = "x,u,du,f,a,F12,H";

/// Appends `.ext` to a stem without interpreting dots already in it
/// (`Path::with_extension` would turn `beta0_anchor0.5` into `beta0_anchor0.ext`).
pub fn stem_with(stem: &Path, ext: &str) -> std::path::PathBuf {
    let mut name = stem
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".");
    name.push(ext);
    stem.with_file_name(name)
}

/// Parsed columns of a profile CSV.
#[derive(Debug, Clone)]
pub struct ProfileTable {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub f: Vec<f64>,
    pub a: Vec<f64>,
    pub f12: Vec<f64>,
    pub h: Vec<f64>,
}

pub fn write_profile(path: &Path, profile: &WallProfile, fields: &FieldProfile) -> Result<()> {
    let mut out = Vec::with_capacity(profile.len() * 160);
    writeln!(out, "{HEADER}")?;
    for i in 0..profile.len() {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            profile.grid[i],
            profile.u[i],
            profile.du[i],
            fields.f[i],
            fields.a[i],
            fields.f12[i],
            fields.energy_density[i]
        )?;
    }
    std::fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn read_profile(path: &Path) -> Result<ProfileTable> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == HEADER => {}
        Some((_, header)) => bail!(
            "{}:1: bad header '{}' (expected '{HEADER}')",
            path.display(),
            header.trim()
        ),
        None => bail!("{}: empty file", path.display()),
    }
    let mut table = ProfileTable {
        x: Vec::new(),
        u: Vec::new(),
        du: Vec::new(),
        f: Vec::new(),
        a: Vec::new(),
        f12: Vec::new(),
        h: Vec::new(),
    };
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            bail!(
                "{}:{}: expected 7 comma-separated values, got {}",
                path.display(),
                lineno + 1,
                fields.len()
            );
        }
        let mut parsed = [0.0_f64; 7];
        for (k, raw) in fields.iter().enumerate() {
            parsed[k] = raw.trim().parse::<f64>().with_context(|| {
                format!("{}:{}: bad number '{raw}'", path.display(), lineno + 1)
            })?;
        }
        table.x.push(parsed[0]);
        table.u.push(parsed[1]);
        table.du.push(parsed[2]);
        table.f.push(parsed[3]);
        table.a.push(parsed[4]);
        table.f12.push(parsed[5]);
        table.h.push(parsed[6]);
    }
    if table.x.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    Ok(table)
}

/// Writes the two-column plot files `STEM.u.dat`, `STEM.F12.dat`,
/// `STEM.H.dat`.
pub fn write_plot_data(stem: &Path, profile: &WallProfile, fields: &FieldProfile) -> Result<()> {
    let columns: [(&str, &Vec<f64>); 3] = [
        ("u", &profile.u),
        ("F12", &fields.f12),
        ("H", &fields.energy_density),
    ];
    for (suffix, values) in columns {
        let mut out = Vec::with_capacity(profile.len() * 50);
        for (x, v) in profile.grid.iter().zip(values) {
            writeln!(out, "{x:.16e} {v:.16e}")?;
        }
        let path = stem_with(stem, &format!("{suffix}.dat"));
        std::fs::write(&path, out).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}
