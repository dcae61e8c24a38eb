//! CSV grids: `# signal_nm:` and `# idler_nm:` header lines, then one row per signal sample.
//! Values use shortest round-trip formatting, so they survive a write/read cycle bit-exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::optics::{FrequencyGrid, JsaGrid};
use crate::spectral::JsiGrid;
use crate::{omega_of_wavelength, wavelength_of_omega};

fn join(v: impl Iterator<Item = f64>) -> String {
    let mut s = String::new();
    for (k, x) in v.enumerate() {
        if k > 0 {
            s.push(',');
        }
        write!(s, "{x}").unwrap();
    }
    s
}

/// Renders a grid with values `value(signal_index, idler_index)`.
pub fn grid_to_csv(grid: &FrequencyGrid, value: impl Fn(usize, usize) -> f64) -> String {
    let mut out = String::new();
    let nm = |w: &f64| wavelength_of_omega(*w) * 1e9;
    writeln!(out, "# signal_nm: {}", join(grid.signal().iter().map(nm))).unwrap();
    writeln!(out, "# idler_nm: {}", join(grid.idler().iter().map(nm))).unwrap();
    let (ns, ni) = grid.shape();
    for a in 0..ns {
        writeln!(out, "{}", join((0..ni).map(|b| value(a, b)))).unwrap();
    }
    out
}

/// Parses the text form back into a grid and a value matrix. `origin` labels errors.
pub fn csv_to_grid(text: &str, origin: &str) -> Result<(FrequencyGrid, DMatrix<f64>)> {
    let err = |line: usize, msg: String| Error::Parse(format!("{origin}:{line}: {msg}"));
    let parse_list = |line: usize, s: &str| -> Result<Vec<f64>> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| err(line, format!("bad number '{}': {e}", t.trim())))
            })
            .collect()
    };
    let mut signal_nm = None;
    let mut idler_nm = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("signal_nm:") {
                signal_nm = Some(parse_list(line, v)?);
            } else if let Some(v) = rest.strip_prefix("idler_nm:") {
                idler_nm = Some(parse_list(line, v)?);
            }
            continue;
        }
        let row = parse_list(line, l)?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(err(line, format!("row has {} values, expected {}", row.len(), first.len())));
            }
        }
        rows.push(row);
    }
    let signal_nm = signal_nm.ok_or_else(|| err(1, "missing '# signal_nm:' header".into()))?;
    let idler_nm = idler_nm.ok_or_else(|| err(2, "missing '# idler_nm:' header".into()))?;
    if rows.len() != signal_nm.len() {
        return Err(err(0, format!("{} rows for {} signal samples", rows.len(), signal_nm.len())));
    }
    if rows.first().map(|r| r.len()) != Some(idler_nm.len()) {
        return Err(err(0, format!("rows do not have {} idler values", idler_nm.len())));
    }
    // file order is arbitrary in wavelength; the grid is increasing in ω
    let to_axis = |nm: &[f64]| -> Result<(Vec<f64>, Vec<usize>)> {
        if nm.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::Parse(format!("{origin}: wavelengths must be > 0")));
        }
        let mut idx: Vec<usize> = (0..nm.len()).collect();
        idx.sort_by(|a, b| nm[*b].total_cmp(&nm[*a]));
        Ok((idx.iter().map(|&k| omega_of_wavelength(nm[k] * 1e-9)).collect(), idx))
    };
    let (ws, is) = to_axis(&signal_nm)?;
    let (wi, ii) = to_axis(&idler_nm)?;
    let grid = FrequencyGrid::new(ws, wi)
        .map_err(|e| Error::Parse(format!("{origin}: {e}")))?;
    let m = DMatrix::from_fn(is.len(), ii.len(), |a, b| rows[is[a]][ii[b]]);
    Ok((grid, m))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_jsi_csv(path: &Path, jsi: &JsiGrid) -> Result<()> {
    write(path, &grid_to_csv(&jsi.grid, |a, b| jsi.intensity[(a, b)]))
}

pub fn read_jsi_csv(path: &Path) -> Result<JsiGrid> {
    parse_jsi_csv(&read(path)?, &path.display().to_string())
}

pub fn parse_jsi_csv(text: &str, origin: &str) -> Result<JsiGrid> {
    let (grid, m) = csv_to_grid(text, origin)?;
    JsiGrid::new(grid, m).map_err(|e| Error::Parse(format!("{origin}: {e}")))
}

/// Complex grids go to two files, real and imaginary parts.
pub fn write_jsa_csv(real_path: &Path, imag_path: &Path, jsa: &JsaGrid) -> Result<()> {
    write(real_path, &grid_to_csv(&jsa.grid, |a, b| jsa.amplitude[(a, b)].re))?;
    write(imag_path, &grid_to_csv(&jsa.grid, |a, b| jsa.amplitude[(a, b)].im))
}

pub fn read_jsa_csv(real_path: &Path, imag_path: &Path) -> Result<JsaGrid> {
    let (g1, re) = csv_to_grid(&read(real_path)?, &real_path.display().to_string())?;
    let (g2, im) = csv_to_grid(&read(imag_path)?, &imag_path.display().to_string())?;
    if g1 != g2 {
        return Err(Error::Parse("real and imaginary grids have different axes".into()));
    }
    let amp = DMatrix::from_fn(re.nrows(), re.ncols(), |a, b| Complex64::new(re[(a, b)], im[(a, b)]));
    JsaGrid::new(g1, amp)
}
