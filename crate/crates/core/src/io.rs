//! JSON wire formats for matrices, states, observables, and generators.
//!
//! Matrix format: `{"d": n, "re": [[...]], "im": [[...]]}` with row-major
//! nested arrays. Readers validate Hermiticity or positivity according to
//! the requested type.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{DBGenerator, Term};
use crate::linalg::{c, CMat, DensityMatrix, HermitianOperator};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub d: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_cmat(m: &CMat) -> Self {
        let d = m.nrows();
        let re = (0..d)
            .map(|i| (0..d).map(|j| m[(i, j)].re).collect())
            .collect();
        let im = (0..d)
            .map(|i| (0..d).map(|j| m[(i, j)].im).collect())
            .collect();
        MatrixJson { d, re, im }
    }

    pub fn to_cmat(&self) -> Result<CMat> {
        let d = self.d;
        if d == 0 {
            return Err(Error::InvalidInput("matrix dimension must be ≥ 1".into()));
        }
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == d && rows.iter().all(|r| r.len() == d);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::InvalidInput(format!(
                "matrix arrays do not match declared dimension {d}"
            )));
        }
        Ok(CMat::from_fn(d, d, |i, j| c(self.re[i][j], self.im[i][j])))
    }

    pub fn to_hermitian(&self) -> Result<HermitianOperator> {
        HermitianOperator::new(self.to_cmat()?)
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_cmat()?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub c: f64,
    pub omega: f64,
    #[serde(rename = "L")]
    pub l: MatrixJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub sigma: MatrixJson,
    pub terms: Vec<TermJson>,
}

impl GeneratorJson {
    pub fn from_generator(gen: &DBGenerator) -> Self {
        GeneratorJson {
            sigma: MatrixJson::from_cmat(gen.sigma().matrix()),
            terms: gen
                .terms()
                .iter()
                .map(|t| TermJson {
                    c: t.c,
                    omega: t.omega,
                    l: MatrixJson::from_cmat(&t.l),
                })
                .collect(),
        }
    }

    /// Structural validation only (shapes, state positivity); the normal-form
    /// checks live in `DBGenerator::validate`.
    pub fn to_generator(&self) -> Result<DBGenerator> {
        let sigma = self.sigma.to_density()?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(Term {
                    c: t.c,
                    omega: t.omega,
                    l: t.l.to_cmat()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        DBGenerator::new(sigma, terms)
    }
}

pub fn read_generator(path: &std::path::Path) -> Result<DBGenerator> {
    let text = std::fs::read_to_string(path)?;
    let json: GeneratorJson = serde_json::from_str(&text)?;
    json.to_generator()
}

pub fn read_density(path: &std::path::Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)?;
    let json: MatrixJson = serde_json::from_str(&text)?;
    json.to_density()
}

pub fn read_hermitian(path: &std::path::Path) -> Result<HermitianOperator> {
    let text = std::fs::read_to_string(path)?;
    let json: MatrixJson = serde_json::from_str(&text)?;
    json.to_hermitian()
}

pub fn write_json<T: Serialize>(path: &std::path::Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
