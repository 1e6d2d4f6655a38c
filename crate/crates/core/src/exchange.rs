//! JSON and CSV interchange.
//!
//! Matrices are `{"rows", "cols", "scalar": "complex", "data": [[re, im], ...]}`
//! in row-major order. Subspaces carry their orthonormal basis, charts a
//! pair of bases plus a flavor tag, fiber elements a chart point plus a
//! matrix. Covector classes are not serialized; imported covectors are
//! unrestricted.

use std::io::Read;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::atlas::{ChartFlavor, ChartId, ChartPoint};
use crate::bundle::{Covector, TangentVector, TensorCovector, Vector};
use crate::error::{Error, Result};
use crate::operator::{Mat, Operator};
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub scalar: String,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_mat(m: &Mat) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            scalar: "complex".into(),
            data,
        }
    }

    pub fn to_mat(&self) -> Result<Mat> {
        if self.scalar != "complex" {
            return Err(Error::Format(format!(
                "unsupported scalar type `{}`",
                self.scalar
            )));
        }
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Format(format!(
                "{} entries for a {}x{} matrix",
                self.data.len(),
                self.rows,
                self.cols
            )));
        }
        let entries: Vec<Complex64> = self
            .data
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Ok(Mat::from_row_slice(self.rows, self.cols, &entries))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartJson {
    #[serde(rename = "F")]
    pub f: MatrixJson,
    #[serde(rename = "G")]
    pub g: MatrixJson,
    pub flavor: ChartFlavor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub chart: ChartJson,
    pub coords: MatrixJson,
}

/// A tangent vector or covector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberJson {
    pub at: PointJson,
    pub fiber: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub x: MatrixJson,
    pub y: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorJson {
    pub at: PointJson,
    pub terms: Vec<TermJson>,
}

fn to_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("exchange types serialize")
}

fn parse<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
}

pub fn matrix_to_json(m: &Mat) -> String {
    to_string(&MatrixJson::from_mat(m))
}

pub fn matrix_from_json(s: &str) -> Result<Mat> {
    parse::<MatrixJson>(s)?.to_mat()
}

/// Reads a real matrix from headerless CSV, one row per record.
pub fn matrix_from_csv<R: Read>(reader: R) -> Result<Mat> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Format(e.to_string()))?;
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("`{field}`: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Operator::from_real_rows(&rows).map(Operator::into_matrix)
}

pub fn subspace_to_json(w: &Subspace) -> String {
    matrix_to_json(w.basis())
}

pub fn subspace_from_json(s: &str) -> Result<Subspace> {
    Subspace::from_orthonormal(matrix_from_json(s)?)
}

fn chart_dto(chart: &ChartId) -> ChartJson {
    ChartJson {
        f: MatrixJson::from_mat(chart.f().basis()),
        g: MatrixJson::from_mat(chart.g().basis()),
        flavor: chart.flavor(),
    }
}

fn chart_from_dto(dto: &ChartJson) -> Result<ChartId> {
    ChartId::new(
        Subspace::from_orthonormal(dto.f.to_mat()?)?,
        Subspace::from_orthonormal(dto.g.to_mat()?)?,
        dto.flavor,
    )
}

fn point_dto(pt: &ChartPoint) -> PointJson {
    PointJson {
        chart: chart_dto(pt.chart()),
        coords: MatrixJson::from_mat(pt.coords().matrix()),
    }
}

fn point_from_dto(dto: &PointJson) -> Result<ChartPoint> {
    ChartPoint::new(
        chart_from_dto(&dto.chart)?,
        Operator::new(dto.coords.to_mat()?),
    )
}

pub fn chart_to_json(chart: &ChartId) -> String {
    to_string(&chart_dto(chart))
}

pub fn chart_from_json(s: &str) -> Result<ChartId> {
    chart_from_dto(&parse(s)?)
}

pub fn point_to_json(pt: &ChartPoint) -> String {
    to_string(&point_dto(pt))
}

pub fn point_from_json(s: &str) -> Result<ChartPoint> {
    point_from_dto(&parse(s)?)
}

pub fn tangent_to_json(v: &TangentVector) -> String {
    to_string(&FiberJson {
        at: point_dto(v.at()),
        fiber: MatrixJson::from_mat(v.fiber().matrix()),
    })
}

pub fn tangent_from_json(s: &str) -> Result<TangentVector> {
    let dto: FiberJson = parse(s)?;
    TangentVector::new(point_from_dto(&dto.at)?, Operator::new(dto.fiber.to_mat()?))
}

pub fn covector_to_json(c: &Covector) -> String {
    to_string(&FiberJson {
        at: point_dto(c.at()),
        fiber: MatrixJson::from_mat(c.fiber().matrix()),
    })
}

pub fn covector_from_json(s: &str) -> Result<Covector> {
    let dto: FiberJson = parse(s)?;
    Covector::new(point_from_dto(&dto.at)?, Operator::new(dto.fiber.to_mat()?))
}

fn vector_dto(v: &Vector) -> MatrixJson {
    MatrixJson::from_mat(&Mat::from_column_slice(v.len(), 1, v.as_slice()))
}

fn vector_from_dto(dto: &MatrixJson) -> Result<Vector> {
    let m = dto.to_mat()?;
    if m.ncols() != 1 {
        return Err(Error::Format(format!(
            "expected a column vector, got {} columns",
            m.ncols()
        )));
    }
    Ok(m.column(0).into_owned())
}

pub fn tensor_to_json(tc: &TensorCovector) -> String {
    to_string(&TensorJson {
        at: point_dto(tc.at()),
        terms: tc
            .terms()
            .iter()
            .map(|(x, y)| TermJson {
                x: vector_dto(x),
                y: vector_dto(y),
            })
            .collect(),
    })
}

pub fn tensor_from_json(s: &str) -> Result<TensorCovector> {
    let dto: TensorJson = parse(s)?;
    let terms = dto
        .terms
        .iter()
        .map(|t| Ok((vector_from_dto(&t.x)?, vector_from_dto(&t.y)?)))
        .collect::<Result<Vec<_>>>()?;
    TensorCovector::new(point_from_dto(&dto.at)?, terms)
}
