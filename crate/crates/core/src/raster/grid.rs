use crate::error::{Error, Result};

/// Placement and size of a north-up raster.
///
/// `x_origin`/`y_origin` locate the lower-left corner of the grid. Row 0 is
/// the northernmost row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGeometry {
    pub n_cols: usize,
    pub n_rows: usize,
    pub x_origin: f64,
    pub y_origin: f64,
    pub cell_size: f64,
}

impl GridGeometry {
    pub fn new(
        n_cols: usize,
        n_rows: usize,
        x_origin: f64,
        y_origin: f64,
        cell_size: f64,
    ) -> Result<Self> {
        let geometry = GridGeometry {
            n_cols,
            n_rows,
            x_origin,
            y_origin,
            cell_size,
        };
        geometry.validate()?;
        Ok(geometry)
    }

    /// Unit cells with the lower-left corner at the origin.
    pub fn unit(n_cols: usize, n_rows: usize) -> Result<Self> {
        Self::new(n_cols, n_rows, 0.0, 0.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_cols == 0 || self.n_rows == 0 {
            return Err(Error::InvalidGeometry(format!(
                "dimensions must be positive, got {}x{}",
                self.n_cols, self.n_rows
            )));
        }
        if !(self.cell_size.is_finite() && self.cell_size > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "cell size must be positive, got {}",
                self.cell_size
            )));
        }
        if !self.x_origin.is_finite() || !self.y_origin.is_finite() {
            return Err(Error::InvalidGeometry("origin must be finite".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_cols * self.n_rows
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_compatible(&self, other: &GridGeometry) -> bool {
        self == other
    }

    pub fn ensure_compatible(&self, other: &GridGeometry) -> Result<()> {
        if self.is_compatible(other) {
            Ok(())
        } else {
            Err(Error::incompatible(self, other))
        }
    }

    /// Map coordinates of the center of cell (`row`, `col`).
    #[inline]
    pub fn cell_center(&self, row: usize, col: usize) -> (f64, f64) {
        (self.col_center_x(col), self.row_center_y(row))
    }

    #[inline]
    pub fn col_center_x(&self, col: usize) -> f64 {
        self.x_origin + (col as f64 + 0.5) * self.cell_size
    }

    #[inline]
    pub fn row_center_y(&self, row: usize) -> f64 {
        self.y_origin + ((self.n_rows - row) as f64 - 0.5) * self.cell_size
    }

    #[inline]
    pub(crate) fn index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.n_rows && col < self.n_cols);
        row * self.n_cols + col
    }
}

/// Single-band raster with an explicit per-cell validity flag.
///
/// Nodata cells store `0.0` in `values` so that grids compare equal
/// regardless of how their nodata cells were produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterGrid {
    geometry: GridGeometry,
    values: Vec<f64>,
    valid: Vec<bool>,
}

impl RasterGrid {
    /// Builds a grid from row-major values. Non-finite values become nodata.
    pub fn from_values(geometry: GridGeometry, values: Vec<f64>) -> Result<Self> {
        geometry.validate()?;
        check_len(&geometry, values.len())?;
        let valid = values.iter().map(|v| v.is_finite()).collect();
        Ok(Self::from_parts_unchecked(geometry, values, valid))
    }

    pub fn from_cells(geometry: GridGeometry, cells: Vec<Option<f64>>) -> Result<Self> {
        geometry.validate()?;
        check_len(&geometry, cells.len())?;
        let mut values = Vec::with_capacity(cells.len());
        let mut valid = Vec::with_capacity(cells.len());
        for cell in cells {
            match cell {
                Some(v) if v.is_finite() => {
                    values.push(v);
                    valid.push(true);
                }
                _ => {
                    values.push(0.0);
                    valid.push(false);
                }
            }
        }
        Ok(RasterGrid {
            geometry,
            values,
            valid,
        })
    }

    pub fn filled(geometry: GridGeometry, value: f64) -> Self {
        Self::from_parts_unchecked(
            geometry,
            vec![value; geometry.len()],
            vec![value.is_finite(); geometry.len()],
        )
    }

    pub fn nodata(geometry: GridGeometry) -> Self {
        Self::from_parts_unchecked(geometry, vec![0.0; geometry.len()], vec![false; geometry.len()])
    }

    /// Normalizes nodata cells and rejects non-finite valid values.
    pub(crate) fn from_parts_unchecked(
        geometry: GridGeometry,
        mut values: Vec<f64>,
        mut valid: Vec<bool>,
    ) -> Self {
        debug_assert_eq!(values.len(), geometry.len());
        debug_assert_eq!(valid.len(), geometry.len());
        for (v, ok) in values.iter_mut().zip(valid.iter_mut()) {
            if !*ok || !v.is_finite() {
                *ok = false;
                *v = 0.0;
            }
        }
        RasterGrid {
            geometry,
            values,
            valid,
        }
    }

    #[inline]
    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.cell(self.geometry.index(row, col))
    }

    /// Cell by row-major index.
    #[inline]
    pub fn cell(&self, index: usize) -> Option<f64> {
        if self.valid[index] {
            Some(self.values[index])
        } else {
            None
        }
    }

    pub fn cells(&self) -> impl ExactSizeIterator<Item = Option<f64>> + '_ {
        self.values
            .iter()
            .zip(&self.valid)
            .map(|(&v, &ok)| ok.then_some(v))
    }

    /// Raw values; nodata cells hold `0.0`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn validity(&self) -> &[bool] {
        &self.valid
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&ok| ok).count()
    }

    /// Applies `f` to every valid cell; a non-finite result becomes nodata.
    pub fn map_valid(&self, f: impl Fn(f64) -> f64 + Sync) -> RasterGrid {
        crate::raster::tile::map_unary(self, |v| v.map(&f))
    }
}

fn check_len(geometry: &GridGeometry, len: usize) -> Result<()> {
    if len != geometry.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} cells for a {}x{} grid, got {len}",
            geometry.len(),
            geometry.n_cols,
            geometry.n_rows
        )));
    }
    Ok(())
}

/// Boolean raster.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    geometry: GridGeometry,
    cells: Vec<bool>,
}

impl Mask {
    pub fn new(geometry: GridGeometry, cells: Vec<bool>) -> Result<Self> {
        geometry.validate()?;
        check_len(&geometry, cells.len())?;
        Ok(Mask { geometry, cells })
    }

    pub fn filled(geometry: GridGeometry, value: bool) -> Self {
        Mask {
            geometry,
            cells: vec![value; geometry.len()],
        }
    }

    pub(crate) fn from_parts_unchecked(geometry: GridGeometry, cells: Vec<bool>) -> Self {
        debug_assert_eq!(cells.len(), geometry.len());
        Mask { geometry, cells }
    }

    /// True where `grid` is valid and non-zero.
    pub fn from_grid(grid: &RasterGrid) -> Mask {
        Mask {
            geometry: *grid.geometry(),
            cells: grid.cells().map(|c| matches!(c, Some(v) if v != 0.0)).collect(),
        }
    }

    /// 1.0 where set, 0.0 elsewhere; no nodata.
    pub fn to_grid(&self) -> RasterGrid {
        RasterGrid::from_parts_unchecked(
            self.geometry,
            self.cells.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
            vec![true; self.cells.len()],
        )
    }

    #[inline]
    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[self.geometry.index(row, col)]
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn and(&self, other: &Mask) -> Result<Mask> {
        self.geometry.ensure_compatible(&other.geometry)?;
        Ok(Mask {
            geometry: self.geometry,
            cells: self
                .cells
                .iter()
                .zip(&other.cells)
                .map(|(&a, &b)| a && b)
                .collect(),
        })
    }

    pub fn not(&self) -> Mask {
        Mask {
            geometry: self.geometry,
            cells: self.cells.iter().map(|&b| !b).collect(),
        }
    }
}
