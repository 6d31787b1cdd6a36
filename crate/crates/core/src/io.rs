//! File formats: matched-pair inputs, cocycle tables with exact rational entries, Matrix Market
//! dumps and the run report envelope.

use std::io::Write;
use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cocycle::{CocycleError, CocyclePair, PentagonalCocycle, Table};
use crate::group::{FiniteGroup, GroupError};
use crate::homology::Coefficients;
use crate::matched_pair::{MatchedPair, MatchedPairError};
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("field '{field}': {message}")]
    Field { field: String, message: String },
}

impl SchemaError {
    fn field(field: &str, message: impl Into<String>) -> Self {
        SchemaError::Field { field: field.into(), message: message.into() }
    }

    fn json(e: &serde_json::Error) -> Self {
        // strip serde's trailing location, which is reported separately
        let text = e.to_string();
        let message = text.split(" at line ").next().unwrap_or(&text).to_string();
        SchemaError::Json { line: e.line(), column: e.column(), message }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    MatchedPair(#[from] MatchedPairError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

/// `{"order": n, "table": [[...]]}` or `{"degree": d, "permutation_generators": [[...]]}`.
///
/// For permutation input, element 0 is the identity and the rest are numbered breadth-first,
/// so distinct non-identity generators get the indices `1, 2, …` in the order given.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation_generators: Option<Vec<Vec<usize>>>,
}

impl GroupInput {
    pub fn build(&self) -> Result<FiniteGroup, InputError> {
        match (&self.table, &self.permutation_generators) {
            (Some(table), None) => {
                if self.degree.is_some() {
                    return Err(SchemaError::field("group.degree", "only allowed with permutation_generators").into());
                }
                if let Some(order) = self.order {
                    if order != table.len() {
                        return Err(SchemaError::field("group.order", format!("{order} but the table has {} rows", table.len())).into());
                    }
                }
                Ok(FiniteGroup::from_table(table)?)
            }
            (None, Some(gens)) => {
                if self.order.is_some() {
                    return Err(SchemaError::field("group.order", "only allowed with table").into());
                }
                let degree = self.degree.ok_or_else(|| SchemaError::field("group.degree", "required with permutation_generators"))?;
                Ok(FiniteGroup::from_permutations(degree, gens)?)
            }
            (Some(_), Some(_)) => Err(SchemaError::field("group", "give either table or permutation_generators, not both").into()),
            (None, None) => Err(SchemaError::field("group", "needs table or permutation_generators").into()),
        }
    }
}

/// `{"group": ..., "G1": [...], "G2": [...], "generators": bool}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub group: GroupInput,
    #[serde(rename = "G1")]
    pub g1: Vec<usize>,
    #[serde(rename = "G2")]
    pub g2: Vec<usize>,
    /// close `G1` and `G2` under the group law before use
    #[serde(default)]
    pub generators: bool,
}

impl PairInput {
    pub fn build(&self) -> Result<MatchedPair, InputError> {
        let group = self.group.build()?;
        if self.generators {
            let g1 = group.subgroup_closure(&self.g1)?;
            let g2 = group.subgroup_closure(&self.g2)?;
            Ok(MatchedPair::from_subgroups(group, g1, g2)?)
        } else {
            Ok(MatchedPair::new(group, &self.g1, &self.g2)?)
        }
    }

    /// Table form of an existing pair.
    pub fn from_pair(mp: &MatchedPair, name: Option<&str>) -> Self {
        let group = GroupInput { order: Some(mp.order()), table: Some(mp.group().table()), ..Default::default() };
        PairInput {
            name: name.map(str::to_string),
            group,
            g1: mp.g1().elements().to_vec(),
            g2: mp.g2().elements().to_vec(),
            generators: false,
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, InputError> {
    std::fs::read(path).map_err(|e| InputError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn parse_json<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<T, SchemaError> {
    serde_json::from_slice(bytes).map_err(|e| SchemaError::json(&e))
}

pub fn parse_pair(bytes: &[u8]) -> Result<MatchedPair, InputError> {
    parse_json::<PairInput>(bytes)?.build()
}

/// Reads and validates a matched-pair file, returning the pair and the raw bytes.
pub fn load_pair(path: &Path) -> Result<(MatchedPair, Vec<u8>), InputError> {
    let bytes = read(path)?;
    Ok((parse_pair(&bytes)?, bytes))
}

/// Hex SHA-256 of an input file.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `{"shape": [...], "values": ["p/q", ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableJson {
    pub shape: Vec<usize>,
    pub values: Vec<String>,
}

impl TableJson {
    pub fn from_table(t: &Table) -> Self {
        TableJson { shape: t.shape.clone(), values: t.values.iter().map(format_rational).collect() }
    }

    pub fn to_table(&self, field: &str) -> Result<Table, InputError> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, s)| parse_rational(s).ok_or_else(|| SchemaError::field(&format!("{field}.values[{i}]"), format!("'{s}' is not a rational"))))
            .collect::<Result<Vec<_>, _>>()?;
        let expected: usize = self.shape.iter().product();
        if values.len() != expected {
            return Err(SchemaError::field(&format!("{field}.values"), format!("{} entries for shape {:?}", values.len(), self.shape)).into());
        }
        Ok(Table { shape: self.shape.clone(), values })
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(x: &BigRational) -> String {
    x.to_string()
}

/// Accepts `"p"`, `"p/q"` and `"-p/q"`, with nonzero `q`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let (n, d) = (n.trim().parse().ok()?, d.trim().parse::<num_bigint::BigInt>().ok()?);
            (d != 0.into()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// `{"coeff": "T", "U": {...}, "V": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCocycleFile {
    pub coeff: Coefficients,
    #[serde(rename = "U")]
    pub u: TableJson,
    #[serde(rename = "V")]
    pub v: TableJson,
}

impl PairCocycleFile {
    pub fn from_pair(p: &CocyclePair) -> Self {
        PairCocycleFile { coeff: p.coeff, u: TableJson::from_table(&p.u), v: TableJson::from_table(&p.v) }
    }

    pub fn to_pair(&self, mp: &MatchedPair) -> Result<CocyclePair, InputError> {
        let p = CocyclePair { coeff: self.coeff, u: self.u.to_table("U")?, v: self.v.to_table("V")? };
        p.validate(mp)?;
        Ok(p)
    }
}

/// `{"coeff": "T", "theta": {...}}` with shape `[|G|, |G|]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaFile {
    pub coeff: Coefficients,
    pub theta: TableJson,
}

impl ThetaFile {
    pub fn from_theta(t: &PentagonalCocycle) -> Self {
        ThetaFile { coeff: t.coeff, theta: TableJson::from_table(&t.theta) }
    }

    pub fn to_theta(&self, mp: &MatchedPair) -> Result<PentagonalCocycle, InputError> {
        let t = PentagonalCocycle { coeff: self.coeff, theta: self.theta.to_table("theta")? };
        t.validate(mp)?;
        Ok(t)
    }
}

pub fn load_theta(path: &Path, mp: &MatchedPair) -> Result<PentagonalCocycle, InputError> {
    parse_json::<ThetaFile>(&read(path)?)?.to_theta(mp)
}

pub fn load_pair_cocycle(path: &Path, mp: &MatchedPair) -> Result<CocyclePair, InputError> {
    parse_json::<PairCocycleFile>(&read(path)?)?.to_pair(mp)
}

/// Matrix Market coordinate format, integer entries, 1-based indices.
pub fn write_mtx(m: &SparseMatrix, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate integer general")?;
    writeln!(out, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
    for (r, c, v) in m.triplets() {
        writeln!(out, "{} {} {}", r + 1, c + 1, v)?;
    }
    Ok(())
}

/// Inverse of [`write_mtx`].
pub fn read_mtx(text: &str) -> Result<SparseMatrix, SchemaError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.starts_with('%') && !l.trim().is_empty());
    let bad = |line: usize, msg: &str| SchemaError::Json { line: line + 1, column: 1, message: msg.to_string() };
    let (ln, header) = lines.next().ok_or_else(|| bad(0, "missing size line"))?;
    let dims: Vec<usize> = header.split_whitespace().map(str::parse).collect::<Result<_, _>>().map_err(|_| bad(ln, "bad size line"))?;
    let [rows, cols, nnz] = dims[..] else { return Err(bad(ln, "size line needs three numbers")) };
    let mut trip = Vec::with_capacity(nnz);
    for (ln, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        let entry = match f[..] {
            [r, c, v] => (r.parse::<usize>(), c.parse::<usize>(), v.parse::<i64>()),
            _ => return Err(bad(ln, "entry needs three fields")),
        };
        let (Ok(r), Ok(c), Ok(v)) = entry else { return Err(bad(ln, "bad entry")) };
        if r == 0 || c == 0 || r > rows || c > cols {
            return Err(bad(ln, "index out of range"));
        }
        trip.push((r - 1, c - 1, v));
    }
    if trip.len() != nnz {
        return Err(bad(0, "entry count differs from the size line"));
    }
    Ok(SparseMatrix::from_triplets(rows, cols, trip))
}

/// Envelope shared by all commands. `timing_ms` is the only field that may differ between
/// identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input_digest: String,
    pub config: serde_json::Value,
    pub verdict: Verdict,
    pub payload: serde_json::Value,
    pub timing_ms: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with timing zeroed, for comparisons.
    pub fn without_timing(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["timing_ms"] = 0.into();
        v
    }
}
