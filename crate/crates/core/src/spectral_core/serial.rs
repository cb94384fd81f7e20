//! Columnar text form of a [`Field`]: a header `L, N, rho` followed by one
//! row `j, re, im` per mode, j running from -N/2 to N/2 - 1.

use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral_core::{Field, Grid, GridSpec, C64};

pub fn write_field<W: Write>(out: &mut W, f: &Field) -> Result<()> {
    let spec = f.grid().spec();
    writeln!(out, "{:e}, {}, {:e}", spec.period, spec.modes, spec.dealias)?;
    let n = spec.modes as i64;
    for j in -n / 2..n / 2 {
        let c = f.at(j);
        writeln!(out, "{}, {:e}, {:e}", j, c.re, c.im)?;
    }
    Ok(())
}

/// Reads the header only.
pub fn parse_header(line: &str) -> Option<GridSpec> {
    let parts: Vec<&str> = line.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return None;
    }
    let period = parts[0].parse().ok()?;
    let modes = parts[1].parse().ok()?;
    let dealias = parts[2].parse().ok()?;
    GridSpec::new(period, modes, dealias).ok()
}

/// Reads one field block from `lines`; `grid` is reused when its spec matches the header.
pub fn read_field<I>(lines: &mut I, grid: Option<&Arc<Grid>>, path: &str) -> Result<Field>
where
    I: Iterator<Item = std::io::Result<String>>,
{
    let bad = |reason: String| Error::Format { path: path.to_string(), reason };
    let header = lines.next().ok_or_else(|| bad("missing field header".into()))??;
    let spec = parse_header(&header).ok_or_else(|| bad(format!("bad field header `{header}`")))?;
    let grid = match grid {
        Some(g) if *g.spec() == spec => g.clone(),
        _ => Grid::new(spec),
    };
    let mut f = Field::zeros(&grid);
    for _ in 0..spec.modes {
        let line = lines.next().ok_or_else(|| bad("truncated field block".into()))??;
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad(format!("bad row `{line}`")));
        }
        let j: i64 = parts[0].parse().map_err(|_| bad(format!("bad mode index `{}`", parts[0])))?;
        let re: f64 = parts[1].parse().map_err(|_| bad(format!("bad value `{}`", parts[1])))?;
        let im: f64 = parts[2].parse().map_err(|_| bad(format!("bad value `{}`", parts[2])))?;
        if j < -(spec.modes as i64) / 2 || j >= spec.modes as i64 / 2 {
            return Err(bad(format!("mode {j} out of range")));
        }
        let i = grid.index_of(j);
        f.coef_mut()[i] = C64::new(re, im);
    }
    Ok(f)
}

pub fn field_to_string(f: &Field) -> String {
    let mut buf = Vec::new();
    write_field(&mut buf, f).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn field_from_str(s: &str) -> Result<Field> {
    let mut lines = std::io::Cursor::new(s).lines();
    read_field(&mut lines, None, "<memory>")
}
