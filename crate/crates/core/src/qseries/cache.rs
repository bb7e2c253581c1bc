//! Plain-text coefficient cache.
//!
//! Layout: one header line `QSER1 <level> <weight> <n_max>`, then a_1..a_{n_max}
//! one decimal per line.

use super::{build_form, Coeffs, Form, FormId};
use crate::error::{Error, Result};
use rug::Integer;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

const MAGIC: &str = "QSER1";

pub fn cache_path(dir: &Path, id: &FormId) -> PathBuf {
    dir.join(format!("{}.qser", id.tag()))
}

pub fn write(path: &Path, form: &Form) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("qser.tmp");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        writeln!(w, "{MAGIC} {} {} {}", form.level, form.weight, form.n_max())?;
        match form.coeffs() {
            Coeffs::Small(v) => {
                for x in &v[1..] {
                    writeln!(w, "{x}")?;
                }
            }
            Coeffs::Big(v) => {
                for x in &v[1..] {
                    writeln!(w, "{x}")?;
                }
            }
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads the header only: (level, weight, n_max).
pub fn read_header(path: &Path) -> Result<(u64, u32, usize)> {
    let mut line = String::new();
    BufReader::new(File::open(path)?).read_line(&mut line)?;
    parse_header(&line)
}

fn parse_header(line: &str) -> Result<(u64, u32, usize)> {
    let bad = || Error::Cache(format!("bad cache header `{}`", line.trim()));
    let f: Vec<&str> = line.split_whitespace().collect();
    if f.len() != 4 || f[0] != MAGIC {
        return Err(bad());
    }
    Ok((f[1].parse().map_err(|_| bad())?, f[2].parse().map_err(|_| bad())?, f[3].parse().map_err(|_| bad())?))
}

/// Loads a cached form; `Ok(None)` when the file is absent or too short.
pub fn read(path: &Path, id: &FormId, n_max: usize) -> Result<Option<Form>> {
    if !path.exists() {
        return Ok(None);
    }
    let mut lines = BufReader::new(File::open(path)?).lines();
    let header = lines.next().ok_or_else(|| Error::Cache("empty cache file".into()))??;
    let (level, weight, have) = parse_header(&header)?;
    if level != id.level() || weight != id.weight() {
        return Err(Error::Cache(format!("cache {} holds level {level} weight {weight}", path.display())));
    }
    if have < n_max {
        return Ok(None);
    }
    let mut small: Vec<i64> = Vec::with_capacity(n_max + 1);
    small.push(0);
    let mut big: Option<Vec<Integer>> = None;
    for line in lines.take(n_max) {
        let line = line?;
        let s = line.trim();
        match (&mut big, s.parse::<i64>()) {
            (None, Ok(x)) => small.push(x),
            (None, Err(_)) => {
                let mut v: Vec<Integer> = small.iter().map(|&x| Integer::from(x)).collect();
                v.push(s.parse().map_err(|_| Error::Cache(format!("bad coefficient `{s}`")))?);
                big = Some(v);
            }
            (Some(v), _) => v.push(s.parse().map_err(|_| Error::Cache(format!("bad coefficient `{s}`")))?),
        }
    }
    let coeffs = match big {
        Some(v) => Coeffs::Big(v),
        None => Coeffs::Small(small),
    };
    if coeffs.len() != n_max + 1 {
        return Err(Error::Cache(format!("cache {} is truncated", path.display())));
    }
    Form::from_coeffs(id.clone(), coeffs).map(Some)
}

/// Cached coefficients when available, otherwise built and (if a directory is given) stored.
pub fn obtain(id: &FormId, n_max: usize, dir: Option<&Path>) -> Result<Form> {
    if let Some(dir) = dir {
        let path = cache_path(dir, id);
        if let Some(f) = read(&path, id, n_max)? {
            return Ok(f);
        }
        let form = build_form(id, n_max)?;
        write(&path, &form)?;
        return Ok(form);
    }
    build_form(id, n_max)
}
