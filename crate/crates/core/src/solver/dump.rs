//! Plain-text field dumps: a short header followed by one row-major block
//! per conserved component.

use std::io::{self, BufRead, Write};

use super::grid::{Field, Grid};

#[derive(Debug, thiserror::Error)]
pub enum DumpError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Header and component blocks of a dump.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldDump {
    pub dims: usize,
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub x_min: f64,
    pub y_min: f64,
    pub t: f64,
    pub gamma: Option<f64>,
    pub model: String,
    /// `components[k][j * nx + i]`.
    pub components: Vec<Vec<f64>>,
}

pub fn write_field<const M: usize, W: Write>(
    mut w: W,
    field: &Field<M>,
    grid: &Grid,
    t: f64,
    gamma: Option<f64>,
    model: &str,
) -> io::Result<()> {
    writeln!(w, "fweno-field")?;
    writeln!(w, "dims {}", grid.dims())?;
    writeln!(w, "n {} {}", field.nx, field.ny)?;
    writeln!(w, "h {:e} {:e}", grid.hx(), grid.hy())?;
    writeln!(w, "origin {:e} {:e}", grid.x.min, grid.y.map_or(0.0, |a| a.min))?;
    writeln!(w, "t {t:e}")?;
    match gamma {
        Some(g) => writeln!(w, "gamma {g:e}")?,
        None => writeln!(w, "gamma none")?,
    }
    writeln!(w, "model {model}")?;
    writeln!(w, "components {M}")?;
    for k in 0..M {
        writeln!(w, "component {k}")?;
        for j in 0..field.ny {
            let row = &field.data[j * field.nx..(j + 1) * field.nx];
            let mut first = true;
            for u in row {
                if !first {
                    w.write_all(b" ")?;
                }
                first = false;
                write!(w, "{:e}", u[k])?;
            }
            writeln!(w)?;
        }
    }
    Ok(())
}

pub fn read_field<R: BufRead>(r: R) -> Result<FieldDump, DumpError> {
    let mut lines = r.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| -> Result<(usize, String), DumpError> {
        match lines.next() {
            Some((n, l)) => Ok((n, l?)),
            None => Err(DumpError::Parse { line: 0, msg: format!("unexpected end of file, expected {what}") }),
        }
    };
    fn err(line: usize, msg: impl Into<String>) -> DumpError {
        DumpError::Parse { line, msg: msg.into() }
    }
    fn keyed<'a>(line: usize, text: &'a str, key: &str) -> Result<Vec<&'a str>, DumpError> {
        let mut it = text.split_whitespace();
        if it.next() != Some(key) {
            return Err(err(line, format!("expected '{key}'")));
        }
        Ok(it.collect())
    }
    fn num<T: std::str::FromStr>(line: usize, s: Option<&&str>) -> Result<T, DumpError> {
        s.and_then(|s| s.parse().ok()).ok_or_else(|| err(line, "malformed number"))
    }

    let (n, l) = next("magic")?;
    if l.trim() != "fweno-field" {
        return Err(err(n, "not a field dump"));
    }
    let (n, l) = next("dims")?;
    let dims = num(n, keyed(n, &l, "dims")?.first())?;
    let (n, l) = next("n")?;
    let v = keyed(n, &l, "n")?;
    let (nx, ny): (usize, usize) = (num(n, v.first())?, num(n, v.get(1))?);
    let (n, l) = next("h")?;
    let v = keyed(n, &l, "h")?;
    let (hx, hy) = (num(n, v.first())?, num(n, v.get(1))?);
    let (n, l) = next("origin")?;
    let v = keyed(n, &l, "origin")?;
    let (x_min, y_min) = (num(n, v.first())?, num(n, v.get(1))?);
    let (n, l) = next("t")?;
    let t = num(n, keyed(n, &l, "t")?.first())?;
    let (n, l) = next("gamma")?;
    let v = keyed(n, &l, "gamma")?;
    let gamma = match v.first() {
        Some(&"none") => None,
        g => Some(num(n, g)?),
    };
    let (n, l) = next("model")?;
    let model = keyed(n, &l, "model")?.join(" ");
    let (n, l) = next("components")?;
    let m: usize = num(n, keyed(n, &l, "components")?.first())?;

    let mut components = Vec::with_capacity(m);
    for k in 0..m {
        let (n, l) = next("component header")?;
        let idx: usize = num(n, keyed(n, &l, "component")?.first())?;
        if idx != k {
            return Err(err(n, format!("expected component {k}")));
        }
        let mut values = Vec::with_capacity(nx * ny);
        for _ in 0..ny {
            let (n, l) = next("row")?;
            let row: Result<Vec<f64>, _> = l.split_whitespace().map(str::parse).collect();
            let row = row.map_err(|_| err(n, "malformed value"))?;
            if row.len() != nx {
                return Err(err(n, format!("expected {nx} values, found {}", row.len())));
            }
            values.extend(row);
        }
        components.push(values);
    }
    Ok(FieldDump { dims, nx, ny, hx, hy, x_min, y_min, t, gamma, model, components })
}

impl FieldDump {
    pub fn to_field<const M: usize>(&self) -> Option<Field<M>> {
        if self.components.len() != M {
            return None;
        }
        let data = (0..self.nx * self.ny)
            .map(|p| std::array::from_fn(|k| self.components[k][p]))
            .collect();
        Some(Field { nx: self.nx, ny: self.ny, data })
    }
}
