//! Operator coefficients of both presets written as CSV and JSON.

use finlap::export::{coefficients_csv, json_document};
use finlap::grid::BaseGrid;
use finlap::{kz_sphere, kz_torus, FinslerLaplacian, Result};
use serde_json::json;

fn main() -> Result<()> {
    let torus = FinslerLaplacian::with_default_quadrature(kz_torus(0.6)?);
    let rows = torus.coefficient_field(&BaseGrid::torus(3).points)?;
    print!("{}", coefficients_csv(&rows));

    let sphere = FinslerLaplacian::with_default_quadrature(kz_sphere(0.4)?);
    let grid = BaseGrid::sphere(3, 1)?;
    let rows = sphere.coefficient_field(&grid.points)?;
    print!("{}", json_document("coeffs", json!({"preset": "kz-sphere", "eps": 0.4}), &rows));
    Ok(())
}
