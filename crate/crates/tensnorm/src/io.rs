//! JSON file formats for tensors and rank-one decompositions.
//!
//! Complex scalars are stored as `[re, im]` pairs and entries are row-major
//! with the last index fastest. serde_json writes the shortest decimal that
//! parses back to the same double, so save/load round-trips bit-exactly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tensnorm_core::{Field, RankOneDecomposition, RankOneTerm, Shape, Tensor, C64};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum FieldTag {
    R,
    C,
}

impl From<Field> for FieldTag {
    fn from(f: Field) -> Self {
        match f {
            Field::Real => FieldTag::R,
            Field::Complex => FieldTag::C,
        }
    }
}

impl From<FieldTag> for Field {
    fn from(f: FieldTag) -> Self {
        match f {
            FieldTag::R => Field::Real,
            FieldTag::C => Field::Complex,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub schema_version: u32,
    pub shape: Vec<usize>,
    pub field: FieldTag,
    pub entries: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn complexes(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|p| C64::new(p[0], p[1])).collect()
}

fn check_version(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(CliError::Format(format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}")));
    }
    Ok(())
}

impl TensorFile {
    pub fn from_tensor(t: &Tensor, metadata: Option<Metadata>) -> Self {
        TensorFile {
            schema_version: SCHEMA_VERSION,
            shape: t.dims().to_vec(),
            field: t.field().into(),
            entries: pairs(t.entries()),
            metadata,
        }
    }

    pub fn to_tensor(&self) -> Result<Tensor> {
        check_version(self.schema_version)?;
        Ok(Tensor::from_dims(&self.shape, self.field.into(), complexes(&self.entries))?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub factors: Vec<Vec<[f64; 2]>>,
    /// Multiplies the product of factors; general decompositions always use 1.
    #[serde(default = "one")]
    pub sign: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub schema_version: u32,
    pub shape: Vec<usize>,
    pub field: FieldTag,
    pub terms: Vec<TermFile>,
    pub bound: f64,
    pub residual: f64,
}

impl DecompositionFile {
    pub fn from_decomposition(dec: &RankOneDecomposition, target: &Tensor) -> Result<Self> {
        Ok(DecompositionFile {
            schema_version: SCHEMA_VERSION,
            shape: dec.shape.dims().to_vec(),
            field: dec.field.into(),
            terms: dec
                .terms
                .iter()
                .map(|t| TermFile { factors: t.factors.iter().map(|f| pairs(f)).collect(), sign: 1.0 })
                .collect(),
            bound: dec.bound(),
            residual: dec.residual(target)?,
        })
    }

    /// Signs are folded into the first factor.
    pub fn to_decomposition(&self) -> Result<RankOneDecomposition> {
        check_version(self.schema_version)?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut factors: Vec<Vec<C64>> = t.factors.iter().map(|f| complexes(f)).collect();
                if let Some(first) = factors.first_mut() {
                    first.iter_mut().for_each(|z| *z *= t.sign);
                }
                RankOneTerm { factors }
            })
            .collect();
        Ok(RankOneDecomposition::new(Shape::new(self.shape.clone())?, self.field.into(), terms)?)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e))
}

pub fn load_tensor(path: &Path) -> Result<Tensor> {
    read_json::<TensorFile>(path)?.to_tensor()
}

pub fn save_tensor(t: &Tensor, path: &Path) -> Result<()> {
    write_json(&TensorFile::from_tensor(t, None), path)
}

pub fn save_tensor_named(t: &Tensor, name: &str, path: &Path) -> Result<()> {
    let meta = Metadata { name: Some(name.to_string()), source: Some("known-state".to_string()) };
    write_json(&TensorFile::from_tensor(t, Some(meta)), path)
}

pub fn load_decomposition(path: &Path) -> Result<DecompositionFile> {
    read_json(path)
}

pub fn save_decomposition(dec: &RankOneDecomposition, target: &Tensor, path: &Path) -> Result<()> {
    write_json(&DecompositionFile::from_decomposition(dec, target)?, path)
}
