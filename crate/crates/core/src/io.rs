//! CSV and SVG output.
//!
//! Floats are written with 17 significant digits, which round-trips every
//! `f64` exactly and makes output byte-identical across runs.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::chordal::{line_solution, ChordalTrace, RealDriver};
use crate::error::{Error, Result};
use crate::radial::{optimal_polar, CircleDriver, PolarTrace};
use crate::value_region::{BoundaryVertex, RegionSpec};

/// `x` with 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_row<W: Write>(out: &mut W, values: &[f64]) -> io::Result<()> {
    let row: Vec<String> = values.iter().map(|&v| fmt_f64(v)).collect();
    writeln!(out, "{}", row.join(","))
}

pub const REGION_COLUMNS: &str = "t_param,re,im,rho,phi_lifted";

pub fn write_region_csv<W: Write>(out: &mut W, vertices: &[BoundaryVertex]) -> io::Result<()> {
    writeln!(out, "{REGION_COLUMNS}")?;
    for v in vertices {
        write_row(out, &[v.param, v.point.re(), v.point.im(), v.rho, v.phi])?;
    }
    Ok(())
}

/// Radial trace. Optimal drivers get closed-form columns and the residual
/// `max(|rho - rho_closed|, |phi - phi_closed|)`.
pub fn write_radial_csv<W: Write>(
    out: &mut W,
    trace: &PolarTrace,
    driver: &CircleDriver,
) -> Result<(), CsvError> {
    let optimal = match driver {
        CircleDriver::Optimal { sign, .. } => Some(*sign),
        CircleDriver::Piecewise(_) => None,
    };
    let mut header = String::from("t,re,im,rho,phi_lifted,theta_driver");
    if optimal.is_some() {
        header.push_str(",rho_closed,phi_closed,residual");
    }
    writeln!(out, "{header}")?;
    for s in &trace.samples {
        let w = s.point();
        let mut row = vec![s.t, w.re(), w.im(), s.rho, s.phi, s.theta];
        if let Some(sign) = optimal {
            let exact = optimal_polar(trace.z0, sign, s.t)?;
            let residual = (s.rho - exact.rho).abs().max((s.phi - exact.phi).abs());
            row.extend([exact.rho, exact.phi, residual]);
        }
        write_row(out, &row)?;
    }
    Ok(())
}

/// Chordal trace. Line drivers get closed-form columns and the distance to
/// the closed-form point.
pub fn write_chordal_csv<W: Write>(
    out: &mut W,
    trace: &ChordalTrace,
    driver: &RealDriver,
) -> io::Result<()> {
    let line = match driver {
        RealDriver::Line { c, .. } => Some(*c),
        RealDriver::Piecewise(_) => None,
    };
    let mut header = String::from("t,re,im,u_driver");
    if line.is_some() {
        header.push_str(",re_closed,im_closed,residual");
    }
    writeln!(out, "{header}")?;
    for s in &trace.samples {
        let mut row = vec![s.t, s.x, s.y, s.u];
        if let Some(c) = line {
            let exact = line_solution(c, trace.z0, s.t);
            row.extend([exact.x, exact.y, (s.x - exact.x).hypot(s.y - exact.y)]);
        }
        write_row(out, &row)?;
    }
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Domain(#[from] Error),
}

/// Parsed numeric CSV table.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// Read a CSV written by this module.
pub fn read_csv(text: &str) -> Result<Table> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty CSV".into()))?;
    let columns: Vec<String> = header.split(',').map(str::to_owned).collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidArgument(format!("CSV row {}: {e}", k + 2)))?;
        if row.len() != columns.len() {
            return Err(Error::InvalidArgument(format!(
                "CSV row {} has {} fields, header has {}",
                k + 2,
                row.len(),
                columns.len()
            )));
        }
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

const SVG_SIZE: f64 = 800.0;
const SVG_RADIUS: f64 = 380.0;

fn svg_xy(re: f64, im: f64) -> (f64, f64) {
    let c = SVG_SIZE / 2.0;
    (c + SVG_RADIUS * re, c - SVG_RADIUS * im)
}

/// Static picture of the region: unit circle, filled `V(z0)`, marker at
/// `z0`, and the origin (hollow when it is a boundary point not in the
/// region's interior picture).
pub fn region_svg(spec: &RegionSpec, samples_per_arc: usize) -> Result<String> {
    let mut s = String::new();
    let c = SVG_SIZE / 2.0;
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<circle cx="{c}" cy="{c}" r="{SVG_RADIUS}" fill="none" stroke="black" stroke-width="1.5"/>"#
    );
    if !spec.is_degenerate() {
        let points: Vec<String> = spec
            .boundary_polyline(samples_per_arc)?
            .iter()
            .map(|z| {
                let (x, y) = svg_xy(z.re, z.im);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="rgb(70,110,220)" fill-opacity="0.55" stroke="rgb(20,40,160)" stroke-width="1.5"/>"#,
            points.join(" ")
        );
        let z0 = spec.z0();
        let (x, y) = svg_xy(z0.re(), z0.im());
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="black"/>"#);
    }
    let origin_fill = if spec.origin_isolated() {
        "white"
    } else {
        "black"
    };
    let _ = writeln!(
        s,
        r#"<circle cx="{c}" cy="{c}" r="3" fill="{origin_fill}" stroke="black" stroke-width="1"/>"#
    );
    s.push_str("</svg>\n");
    Ok(s)
}
