use std::io::Write;

use super::phase::PhaseContext;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    ReD,
    ImD,
    ReQ,
    ImQ,
    RePhi2,
}

impl Field {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ReD" => Ok(Field::ReD),
            "ImD" => Ok(Field::ImD),
            "ReQ" => Ok(Field::ReQ),
            "ImQ" => Ok(Field::ImQ),
            "RePhi2" => Ok(Field::RePhi2),
            _ => Err(Error::InvalidInput(format!(
                "unknown field {s}; expected ReD, ImD, ReQ, ImQ or RePhi2"
            ))),
        }
    }

    /// Whether the field depends on the branch of `Q^{1/2}`.
    pub fn uses_cut(&self) -> bool {
        !matches!(self, Field::ReQ | Field::ImQ)
    }
}

/// Rectangular grid, endpoints included.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub ny: usize,
}

impl GridSpec {
    fn coord(lo: f64, hi: f64, n: usize, k: usize) -> f64 {
        if n <= 1 {
            lo
        } else {
            lo + (hi - lo) * k as f64 / (n - 1) as f64
        }
    }

    fn cell_diagonal(&self) -> f64 {
        let dx = (self.x_max - self.x_min) / (self.nx.max(2) - 1) as f64;
        let dy = (self.y_max - self.y_min) / (self.ny.max(2) - 1) as f64;
        dx.hypot(dy)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GridValue {
    pub x: f64,
    pub y: f64,
    /// `None` for cells next to the cut, where branch-dependent fields are
    /// not evaluated.
    pub value: Option<f64>,
}

/// Samples a scalar field row by row (y outer, x inner).
pub fn sample_field_grid(phase: &PhaseContext, field: Field, grid: &GridSpec) -> Result<Vec<GridValue>> {
    if grid.nx == 0 || grid.ny == 0 {
        return Err(Error::InvalidInput("grid needs at least one point per axis".into()));
    }
    let ctx = phase.ctx();
    let guard = grid.cell_diagonal().max(phase.cut().resolution());
    let mut out = Vec::with_capacity(grid.nx * grid.ny);
    for j in 0..grid.ny {
        let y = GridSpec::coord(grid.y_min, grid.y_max, grid.ny, j);
        for i in 0..grid.nx {
            let x = GridSpec::coord(grid.x_min, grid.x_max, grid.nx, i);
            let z = ctx.complex(x, y);
            let value = if field.uses_cut() && phase.cut().distance(&z) < guard {
                None
            } else {
                Some(match field {
                    Field::ReQ => phase.qd.q_eval(&z).re.to_f64(),
                    Field::ImQ => phase.qd.q_eval(&z).im.to_f64(),
                    Field::ReD => phase.d_eval(&z)?.re.to_f64(),
                    Field::ImD => phase.d_eval(&z)?.im.to_f64(),
                    Field::RePhi2 => phase.phi2(&z)?.re.to_f64(),
                })
            };
            out.push(GridValue { x, y, value });
        }
    }
    Ok(out)
}

/// CSV `x,y,value`; skipped cells carry `nan`.
pub fn write_grid_csv<W: Write>(values: &[GridValue], mut out: W) -> Result<()> {
    writeln!(out, "x,y,value")?;
    for v in values {
        match v.value {
            Some(f) => writeln!(out, "{},{},{}", v.x, v.y, f)?,
            None => writeln!(out, "{},{},nan", v.x, v.y)?,
        }
    }
    Ok(())
}
