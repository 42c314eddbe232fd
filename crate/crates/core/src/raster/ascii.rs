//! ESRI-style ASCII grid reader and writer.
//!
//! Six header lines in fixed order (`NCOLS`, `NROWS`, `XLLCORNER`,
//! `YLLCORNER`, `CELLSIZE`, `NODATA_VALUE`, keywords case-insensitive),
//! then one line of `NCOLS` space-separated values per row, northernmost row
//! first.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{GridGeometry, RasterGrid};
use crate::error::{Error, Result};

const HEADER_KEYS: [&str; 6] = [
    "NCOLS",
    "NROWS",
    "XLLCORNER",
    "YLLCORNER",
    "CELLSIZE",
    "NODATA_VALUE",
];

/// Candidate sentinels for nodata on output, tried in order until one does
/// not collide with a valid cell.
const NODATA_CANDIDATES: [f64; 4] = [-9999.0, -99999.0, -3.4028234663852886e38, -1.0e300];

pub fn read_ascii_grid(path: impl AsRef<Path>) -> Result<RasterGrid> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_ascii_grid(&text, path)
}

/// Parses grid text; `path` only labels error messages.
pub fn parse_ascii_grid(text: &str, path: impl AsRef<Path>) -> Result<RasterGrid> {
    let path = path.as_ref().to_path_buf();
    let err = |line: usize, column: usize, message: String| Error::Parse {
        path: path.clone(),
        line,
        column,
        message,
    };

    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut header = [0.0f64; 6];
    let mut header_raw = [""; 6];
    for (slot, key) in HEADER_KEYS.iter().enumerate() {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| err(slot + 1, 1, format!("missing header line {key}")))?;
        let mut tokens = tokens_with_columns(line);
        let (col, kw) = tokens
            .next()
            .ok_or_else(|| err(line_no, 1, format!("expected {key}")))?;
        if !kw.eq_ignore_ascii_case(key) {
            return Err(err(line_no, col, format!("expected {key}, found {kw:?}")));
        }
        let (vcol, value) = tokens
            .next()
            .ok_or_else(|| err(line_no, col + kw.len(), format!("{key} has no value")))?;
        if let Some((xcol, extra)) = tokens.next() {
            return Err(err(line_no, xcol, format!("unexpected token {extra:?} after {key}")));
        }
        header[slot] = value
            .parse::<f64>()
            .map_err(|_| err(line_no, vcol, format!("{key} value {value:?} is not a number")))?;
        header_raw[slot] = value;
        let is_count = slot < 2;
        if is_count && header_raw[slot].parse::<usize>().map_or(true, |n| n == 0) {
            return Err(err(line_no, vcol, format!("{key} must be a positive integer, got {value:?}")));
        }
        if !header[slot].is_finite() {
            return Err(err(line_no, vcol, format!("{key} must be finite")));
        }
        if slot == 4 && header[slot] <= 0.0 {
            return Err(err(line_no, vcol, format!("CELLSIZE must be positive, got {value}")));
        }
    }

    let n_cols: usize = header_raw[0].parse().expect("checked above");
    let n_rows: usize = header_raw[1].parse().expect("checked above");
    let geometry = GridGeometry::new(n_cols, n_rows, header[2], header[3], header[4])?;
    let nodata = header[5];

    let mut values = Vec::with_capacity(geometry.len());
    let mut valid = Vec::with_capacity(geometry.len());
    let mut rows_read = 0usize;
    let mut last_line = HEADER_KEYS.len();
    for (line_no, line) in lines {
        last_line = line_no;
        if line.trim().is_empty() {
            continue;
        }
        if rows_read == n_rows {
            return Err(err(
                line_no,
                1,
                format!("found more than NROWS = {n_rows} data rows"),
            ));
        }
        let mut count = 0usize;
        for (col, token) in tokens_with_columns(line) {
            if count == n_cols {
                return Err(err(
                    line_no,
                    col,
                    format!("row has more than NCOLS = {n_cols} values"),
                ));
            }
            let v: f64 = token
                .parse()
                .map_err(|_| err(line_no, col, format!("{token:?} is not a number")))?;
            if v == nodata || !v.is_finite() {
                values.push(0.0);
                valid.push(false);
            } else {
                values.push(v);
                valid.push(true);
            }
            count += 1;
        }
        if count != n_cols {
            return Err(err(
                line_no,
                line.len() + 1,
                format!("row has {count} values, expected NCOLS = {n_cols}"),
            ));
        }
        rows_read += 1;
    }
    if rows_read != n_rows {
        return Err(err(
            last_line + 1,
            1,
            format!("found {rows_read} data rows, expected NROWS = {n_rows}"),
        ));
    }
    Ok(RasterGrid::from_parts_unchecked(geometry, values, valid))
}

fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let base = line.as_ptr() as usize;
    line.split_ascii_whitespace()
        .map(move |tok| (tok.as_ptr() as usize - base + 1, tok))
}

/// Writes `grid` with values at 10 significant digits.
pub fn write_ascii_grid(grid: &RasterGrid, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_ascii_grid_to(grid, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn write_ascii_grid_to(grid: &RasterGrid, out: &mut impl Write) -> std::io::Result<()> {
    let g = grid.geometry();
    let nodata = pick_nodata(grid);
    writeln!(out, "NCOLS {}", g.n_cols)?;
    writeln!(out, "NROWS {}", g.n_rows)?;
    writeln!(out, "XLLCORNER {}", format_sig10(g.x_origin))?;
    writeln!(out, "YLLCORNER {}", format_sig10(g.y_origin))?;
    writeln!(out, "CELLSIZE {}", format_sig10(g.cell_size))?;
    let nodata_token = format_sig10(nodata);
    writeln!(out, "NODATA_VALUE {nodata_token}")?;
    let mut line = String::with_capacity(g.n_cols * 14);
    for row in 0..g.n_rows {
        line.clear();
        for col in 0..g.n_cols {
            if col > 0 {
                line.push(' ');
            }
            match grid.get(row, col) {
                Some(v) => line.push_str(&format_sig10(v)),
                None => line.push_str(&nodata_token),
            }
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

fn pick_nodata(grid: &RasterGrid) -> f64 {
    NODATA_CANDIDATES
        .iter()
        .copied()
        .find(|&sentinel| {
            let token = format_sig10(sentinel);
            !grid
                .cells()
                .flatten()
                .any(|v| v == sentinel || format_sig10(v) == token)
        })
        .unwrap_or(f64::MIN)
}

/// Formats `v` with 10 significant digits, `%g` style: fixed notation for
/// moderate exponents with trailing zeros removed, scientific otherwise.
pub fn format_sig10(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{v:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp) as usize;
        let mut s = String::new();
        write!(s, "{v:.decimals$}").expect("write to String");
        trim_fraction(s)
    } else {
        let mantissa = trim_fraction(mantissa.to_string());
        format!("{mantissa}e{exp}")
    }
}

fn trim_fraction(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}


#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RasterGrid> {
        parse_ascii_grid(text, "test.asc")
    }

    const HEADER_2X2: &str =
        "NCOLS 2\nNROWS 2\nXLLCORNER 0\nYLLCORNER 0\nCELLSIZE 20\nNODATA_VALUE -9999\n";

    #[test]
    fn smallest_legal_file() {
        let g = parse("ncols 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\nnodata_value -9999\n0.5\n")
            .unwrap();
        assert_eq!(g.geometry().len(), 1);
        assert_eq!(g.get(0, 0), Some(0.5));
    }

    #[test]
    fn sentinel_becomes_nodata() {
        let g = parse(&format!("{HEADER_2X2}1 -9999\n3 4\n")).unwrap();
        assert_eq!(g.valid_count(), 3);
        assert_eq!(g.get(0, 1), None);
        assert_eq!(g.get(1, 0), Some(3.0));
    }

    #[test]
    fn extra_row_is_an_error() {
        let e = parse(&format!("{HEADER_2X2}1 2\n3 4\n5 6\n")).unwrap_err();
        match e {
            Error::Parse { line, .. } => assert_eq!(line, 9),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_row_is_an_error() {
        assert!(matches!(parse(&format!("{HEADER_2X2}1 2\n")), Err(Error::Parse { .. })));
    }

    #[test]
    fn errors_name_line_and_column() {
        let e = parse(&format!("{HEADER_2X2}1 2\n3 x4\n")).unwrap_err();
        match e {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (8, 3)),
            other => panic!("unexpected {other:?}"),
        }
        let e = parse("NCOLS 2\nNROWS 2\nXLLCORNER 0\nYLLCORNER 0\nCELLSIZE 0\nNODATA_VALUE -9999\n1 2\n3 4\n")
            .unwrap_err();
        match e {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (5, 10)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_order_is_enforced() {
        let text = "NROWS 1\nNCOLS 1\nXLLCORNER 0\nYLLCORNER 0\nCELLSIZE 1\nNODATA_VALUE -9999\n1\n";
        assert!(parse(text).is_err());
        let text = "NCOLS 1.5\nNROWS 1\nXLLCORNER 0\nYLLCORNER 0\nCELLSIZE 1\nNODATA_VALUE -9999\n1\n";
        assert!(parse(text).is_err());
    }

    #[test]
    fn short_row_is_an_error() {
        assert!(parse(&format!("{HEADER_2X2}1\n3 4\n")).is_err());
        assert!(parse(&format!("{HEADER_2X2}1 2 3\n3 4\n")).is_err());
    }

    #[test]
    fn one_third_has_ten_significant_digits() {
        let token = format_sig10(1.0 / 3.0);
        assert_eq!(token, "0.3333333333");
        let back: f64 = token.parse().unwrap();
        assert!((back - 1.0 / 3.0).abs() <= 1e-9);
    }

    #[test]
    fn sig10_formatting() {
        assert_eq!(format_sig10(0.5), "0.5");
        assert_eq!(format_sig10(-9999.0), "-9999");
        assert_eq!(format_sig10(20.0), "20");
        assert_eq!(format_sig10(123456.789), "123456.789");
        assert_eq!(format_sig10(1.0e-7), "1e-7");
        assert_eq!(format_sig10(6.02214076e23), "6.02214076e23");
        assert_eq!(format_sig10(2.0 / 3.0), "0.6666666667");
    }

    #[test]
    fn nodata_written_as_sentinel() {
        let geometry = GridGeometry::unit(2, 1).unwrap();
        let grid = RasterGrid::from_cells(geometry, vec![Some(0.25), None]).unwrap();
        let mut buf = Vec::new();
        write_ascii_grid_to(&grid, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("NODATA_VALUE -9999\n"));
        assert!(text.ends_with("0.25 -9999\n"));
    }

    #[test]
    fn colliding_sentinel_is_avoided() {
        let geometry = GridGeometry::unit(2, 1).unwrap();
        let grid = RasterGrid::from_cells(geometry, vec![Some(-9999.0), None]).unwrap();
        let mut buf = Vec::new();
        write_ascii_grid_to(&grid, &mut buf).unwrap();
        let back = parse(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, grid);
    }
}
