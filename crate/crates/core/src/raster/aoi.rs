use rayon::prelude::*;

use super::{GridGeometry, Mask};
use crate::error::{Error, Result};

/// Vertex in map coordinates (same frame as `GridGeometry` origins).
pub type Point = (f64, f64);

#[derive(Debug, Clone, PartialEq)]
pub enum AoiShape {
    /// Implicitly closed ring.
    Polygon(Vec<Point>),
    Mask(Mask),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AreaOfInterest {
    pub name: String,
    pub shape: AoiShape,
}

impl AreaOfInterest {
    pub fn polygon(name: impl Into<String>, vertices: Vec<Point>) -> Result<Self> {
        validate_polygon(&vertices)?;
        Ok(AreaOfInterest {
            name: name.into(),
            shape: AoiShape::Polygon(vertices),
        })
    }

    pub fn mask(name: impl Into<String>, mask: Mask) -> Self {
        AreaOfInterest {
            name: name.into(),
            shape: AoiShape::Mask(mask),
        }
    }

    /// Axis-aligned rectangle from its lower-left and upper-right corners.
    pub fn rectangle(name: impl Into<String>, min: Point, max: Point) -> Result<Self> {
        Self::polygon(
            name,
            vec![min, (max.0, min.1), max, (min.0, max.1)],
        )
    }
}

fn validate_polygon(vertices: &[Point]) -> Result<()> {
    if vertices.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::InvalidArgument("polygon vertices must be finite".into()));
    }
    let mut distinct: Vec<Point> = Vec::with_capacity(3);
    for &v in vertices {
        if !distinct.contains(&v) {
            distinct.push(v);
            if distinct.len() == 3 {
                return Ok(());
            }
        }
    }
    Err(Error::InvalidArgument(format!(
        "polygon needs at least 3 distinct vertices, got {}",
        distinct.len()
    )))
}

/// Selects the cells of `geometry` covered by `aoi`.
///
/// Polygons are filled by the even-odd rule applied to cell centers. A center
/// lying exactly on an edge counts as inside for left and bottom edges and
/// outside for right and top edges, so polygons sharing an edge never both
/// claim a cell.
pub fn rasterize_aoi(aoi: &AreaOfInterest, geometry: &GridGeometry) -> Result<Mask> {
    geometry.validate()?;
    match &aoi.shape {
        AoiShape::Mask(mask) => {
            mask.geometry().ensure_compatible(geometry)?;
            Ok(mask.clone())
        }
        AoiShape::Polygon(vertices) => {
            validate_polygon(vertices)?;
            Ok(rasterize_polygon(vertices, geometry))
        }
    }
}

/// Scanline fill. For each row the edge crossings at the row-center
/// ordinate are sorted and cells whose centers fall in `[x0, x1)`,
/// `[x2, x3)`, ... are set.
fn rasterize_polygon(vertices: &[Point], geometry: &GridGeometry) -> Mask {
    let mut cells = vec![false; geometry.len()];
    cells
        .par_chunks_mut(geometry.n_cols)
        .enumerate()
        .for_each_init(Vec::new, |crossings, (row, out)| {
            let y = geometry.row_center_y(row);
            crossings.clear();
            let n = vertices.len();
            for i in 0..n {
                let (xi, yi) = vertices[i];
                let (xj, yj) = vertices[(i + n - 1) % n];
                if (yi > y) != (yj > y) {
                    crossings.push((xj - xi) * (y - yi) / (yj - yi) + xi);
                }
            }
            crossings.sort_by(f64::total_cmp);
            for span in crossings.chunks_exact(2) {
                let (start, end) = (span[0], span[1]);
                for (col, cell) in out.iter_mut().enumerate().skip(first_col_at_or_after(geometry, start)) {
                    if geometry.col_center_x(col) >= end {
                        break;
                    }
                    *cell = true;
                }
            }
        });
    Mask::from_parts_unchecked(*geometry, cells)
}

/// First column whose center is `>= x`.
fn first_col_at_or_after(geometry: &GridGeometry, x: f64) -> usize {
    let guess = ((x - geometry.x_origin) / geometry.cell_size - 0.5).ceil();
    let mut col = if guess <= 0.0 {
        0
    } else {
        (guess as usize).min(geometry.n_cols)
    };
    // The closed-form guess can be off by one under rounding.
    while col > 0 && geometry.col_center_x(col - 1) >= x {
        col -= 1;
    }
    while col < geometry.n_cols && geometry.col_center_x(col) < x {
        col += 1;
    }
    col
}
