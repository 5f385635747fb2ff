//! JSON schemas. Every scalar travels as a string in the expression grammar.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use kgl_core::arith::{parse_ratfun, RatFun, Scalar};
use kgl_core::bf::BfMorphism;
use kgl_core::geniso::GenIso;
use kgl_core::matrix::{Mat, MatK};
use kgl_core::strata::{CompleteCollineation, Flag, StrataDecomposition};

pub type Grid = Vec<Vec<String>>;

pub fn grid<S: Scalar>(m: &Mat<S>) -> Grid {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.to_text()).collect()).collect()
}

pub fn texts<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(|x| x.to_text()).collect()
}

fn parse_entry(s: &str, what: &str) -> Result<RatFun> {
    parse_ratfun(s).with_context(|| format!("{what}: {s:?}"))
}

fn parse_grid(g: &Grid, rows: usize, cols: usize, what: &str) -> Result<MatK> {
    if g.len() != rows || g.iter().any(|r| r.len() != cols) {
        bail!("{what}: expected a {rows}x{cols} array");
    }
    let mut out = Vec::with_capacity(rows);
    for (i, r) in g.iter().enumerate() {
        let row = r
            .iter()
            .enumerate()
            .map(|(j, s)| parse_entry(s, &format!("{what} entry ({}, {})", i + 1, j + 1)))
            .collect::<Result<Vec<_>>>()?;
        out.push(row);
    }
    Ok(Mat::from_rows(out)?)
}

/// `{ "n": int, "entries": [[string]] }`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixInput {
    pub n: usize,
    pub entries: Grid,
}

impl MatrixInput {
    pub fn matrix(&self) -> Result<MatK> {
        parse_grid(&self.entries, self.n, self.n, "matrix")
    }

    /// The input with every entry in canonical form.
    pub fn echo(m: &MatK) -> Self {
        MatrixInput { n: m.rows(), entries: grid(m) }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BfJson {
    pub n: usize,
    pub rank: usize,
    pub mu: String,
    pub fwd: Grid,
    pub bwd: Grid,
}

/// `{ "n": int, "gs": [bf], "hs": [bf], "iso": [[string]] }`, chains listed
/// from rank 0 upward.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenIsoJson {
    pub n: usize,
    pub gs: Vec<BfJson>,
    pub hs: Vec<BfJson>,
    pub iso: Grid,
}

fn bf_json<S: Scalar>(g: &BfMorphism<S>) -> BfJson {
    BfJson { n: g.n, rank: g.rank, mu: g.mu.to_text(), fwd: grid(&g.fwd), bwd: grid(&g.bwd) }
}

impl GenIsoJson {
    pub fn from_geniso<S: Scalar>(phi: &GenIso<S>) -> Self {
        GenIsoJson {
            n: phi.n,
            gs: phi.gs.iter().map(bf_json).collect(),
            hs: phi.hs.iter().map(bf_json).collect(),
            iso: grid(&phi.iso),
        }
    }

    pub fn to_geniso(&self) -> Result<GenIso<RatFun>> {
        let n = self.n;
        if self.gs.len() != n || self.hs.len() != n {
            bail!("expected {n} morphisms in each chain");
        }
        let chain = |side: &str, list: &[BfJson]| -> Result<Vec<BfMorphism<RatFun>>> {
            list.iter()
                .enumerate()
                .map(|(i, b)| {
                    let what = format!("{side}[{i}]");
                    if b.n != n {
                        bail!("{what}: n = {} but the point has n = {n}", b.n);
                    }
                    Ok(BfMorphism {
                        n,
                        rank: b.rank,
                        mu: parse_entry(&b.mu, &format!("{what}.mu"))?,
                        fwd: parse_grid(&b.fwd, n, n, &format!("{what}.fwd"))?,
                        bwd: parse_grid(&b.bwd, n, n, &format!("{what}.bwd"))?,
                    })
                })
                .collect()
        };
        Ok(GenIso { n, gs: chain("gs", &self.gs)?, hs: chain("hs", &self.hs)?, iso: parse_grid(&self.iso, n, n, "iso")? })
    }
}

/// Declared stratum, section indices as in the chains.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeclaredStratum {
    #[serde(rename = "I")]
    pub i: Vec<usize>,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
}

/// Either input schema, told apart by the presence of `"gs"`.
pub enum PointInput {
    Matrix(MatrixInput),
    GenIso(GenIsoJson),
}

pub struct ParsedInput {
    pub point: PointInput,
    pub stratum: Option<DeclaredStratum>,
}

pub fn read_input(text: &str) -> Result<ParsedInput> {
    let v: Value = serde_json::from_str(text).context("input is not valid JSON")?;
    let obj = v.as_object().ok_or_else(|| anyhow!("input must be a JSON object"))?;
    let stratum = match obj.get("stratum") {
        Some(s) => Some(serde_json::from_value(s.clone()).context("bad \"stratum\" field")?),
        None => None,
    };
    let point = if obj.contains_key("gs") {
        PointInput::GenIso(serde_json::from_value(v).context("input does not match the GenIso schema")?)
    } else {
        PointInput::Matrix(serde_json::from_value(v).context("input does not match the matrix schema")?)
    };
    Ok(ParsedInput { point, stratum })
}

#[derive(Serialize)]
pub struct FlagJson {
    pub dims: Vec<usize>,
    pub steps: Vec<Grid>,
}

impl FlagJson {
    pub fn new(f: &Flag) -> Self {
        FlagJson { dims: f.dims.clone(), steps: f.steps.iter().map(grid).collect() }
    }
}

#[derive(Serialize)]
pub struct CollineationJson {
    pub n: usize,
    pub chain: Vec<BfJson>,
}

impl CollineationJson {
    pub fn new(c: &CompleteCollineation) -> Self {
        CollineationJson { n: c.n, chain: c.chain.iter().map(bf_json).collect() }
    }
}

#[derive(Serialize)]
pub struct DecompositionJson {
    pub n: usize,
    #[serde(rename = "I")]
    pub i: Vec<usize>,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub flag_e: FlagJson,
    pub flag_f: FlagJson,
    pub phis: Vec<CollineationJson>,
    pub psis: Vec<CollineationJson>,
    pub core: GenIsoJson,
}

impl DecompositionJson {
    pub fn new(d: &StrataDecomposition) -> Self {
        DecompositionJson {
            n: d.n,
            i: d.i_set.clone(),
            j: d.j_set.clone(),
            flag_e: FlagJson::new(&d.flag_e),
            flag_f: FlagJson::new(&d.flag_f),
            phis: d.phis.iter().map(CollineationJson::new).collect(),
            psis: d.psis.iter().map(CollineationJson::new).collect(),
            core: GenIsoJson::from_geniso(&d.core),
        }
    }
}
