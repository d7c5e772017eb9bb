//! Text and JSON formats for instances, plans, codewords and messages.
//!
//! Instance file (one of `ppc`, `frs`, `family` + `points`):
//!
//! ```json
//! {"q": 61, "t": 1, "k": 3,
//!  "ppc": {"l1": {"a": 9, "b": 0}, "l2": {"a": 32, "b": 0}, "alpha": 1, "beta": 1}}
//! ```
//!
//! Plan file: `{"w": 3, "d1": 3, "d2": 7, "D": 5}` with `D` and `h` optional.
//! Codewords are `n` lines of `s` integers (one column per line); messages
//! are `t` lines of `k` integers (row `a` holds the `X^a` coefficients).

use serde::{Deserialize, Serialize};

use crate::codes::{BloInstance, Codeword, FrsParams, InstanceOrigin, PpcParams};
use crate::error::{Error, Result};
use crate::field::{Felt, Field};
use crate::linalg::Matrix;
use crate::listdecode::{Candidate, PlanParams};
use crate::operators::{power_family, ExtendibilityWitness, HTable, LinOp, OperatorFamily};
use crate::poly::{AffineMap, BiPoly, PolyMatrix};

type Grid = Vec<Vec<u64>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineSpec {
    pub a: u64,
    pub b: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PpcSpec {
    pub l1: AffineSpec,
    pub l2: AffineSpec,
    pub alpha: u64,
    pub beta: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrsSpec {
    pub gamma: u64,
    pub s: usize,
    pub points: Vec<u64>,
}

/// `M_x`, `M_y` as row-major lists of polynomial grids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSpec {
    pub mx: Vec<Vec<Grid>>,
    pub my: Vec<Vec<Grid>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilySpec {
    Power {
        lx: AffineSpec,
        ly: AffineSpec,
        s: usize,
    },
    /// `tk x tk` matrices on the instance's `(t, k)` space.
    Matrix {
        matrices: Vec<Grid>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<WitnessSpec>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub q: u64,
    /// Defaults to 1; FRS instances ignore it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ppc: Option<PpcSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frs: Option<FrsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[u64; 2]>>,
}

fn elem(field: Field, v: u64) -> Result<Felt> {
    if v >= field.size() {
        return Err(Error::Parse(format!("{v} is not in [0, {})", field.size())));
    }
    Ok(field.elem(v))
}

fn affine(field: Field, spec: AffineSpec) -> Result<AffineMap> {
    AffineMap::new(elem(field, spec.a)?, elem(field, spec.b)?)
}

fn grid_poly(field: Field, grid: &Grid) -> Result<BiPoly> {
    for &v in grid.iter().flatten() {
        elem(field, v)?;
    }
    BiPoly::from_grid(field, grid)
}

fn poly_matrix(field: Field, rows: &[Vec<Grid>]) -> Result<PolyMatrix> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("ragged witness matrix".into()));
    }
    let entries = rows
        .iter()
        .flatten()
        .map(|g| grid_poly(field, g))
        .collect::<Result<Vec<_>>>()?;
    PolyMatrix::new(field, rows.len(), cols, entries)
}

fn matrix(field: Field, grid: &Grid) -> Result<Matrix> {
    for &v in grid.iter().flatten() {
        elem(field, v)?;
    }
    Matrix::from_rows(field, grid)
}

impl InstanceSpec {
    pub fn from_ppc(params: &PpcParams) -> Self {
        let field = params.l1().field();
        let spec = |m: AffineMap| AffineSpec {
            a: m.a().value() as u64,
            b: m.b().value() as u64,
        };
        InstanceSpec {
            q: field.size(),
            t: Some(params.t()),
            k: params.k(),
            ppc: Some(PpcSpec {
                l1: spec(params.l1()),
                l2: spec(params.l2()),
                alpha: params.alpha().value() as u64,
                beta: params.beta().value() as u64,
            }),
            frs: None,
            family: None,
            points: None,
        }
    }

    pub fn from_frs(params: &FrsParams) -> Self {
        InstanceSpec {
            q: params.gamma().field().size(),
            t: None,
            k: params.k(),
            ppc: None,
            frs: Some(FrsSpec {
                gamma: params.gamma().value() as u64,
                s: params.s(),
                points: params.points().iter().map(|p| p.value() as u64).collect(),
            }),
            family: None,
            points: None,
        }
    }

    pub fn build(&self) -> Result<BloInstance> {
        let field = Field::new(self.q)?;
        let t = self.t.unwrap_or(1);
        let k = self.k;
        match (&self.ppc, &self.frs, &self.family) {
            (Some(p), None, None) => {
                if self.points.is_some() {
                    return Err(Error::Parse("PPC instances derive their own points".into()));
                }
                PpcParams::new(
                    affine(field, p.l1)?,
                    affine(field, p.l2)?,
                    elem(field, p.alpha)?,
                    elem(field, p.beta)?,
                    t,
                    k,
                )?
                .to_blelo()
            }
            (None, Some(f), None) => {
                if self.points.is_some() {
                    return Err(Error::Parse("FRS points go inside \"frs\"".into()));
                }
                let points = f
                    .points
                    .iter()
                    .map(|&v| elem(field, v))
                    .collect::<Result<Vec<_>>>()?;
                FrsParams::new(elem(field, f.gamma)?, f.s, k, points)?.as_blo()
            }
            (None, None, Some(fam)) => {
                let points = self
                    .points
                    .as_ref()
                    .ok_or_else(|| Error::Parse("family instances need \"points\"".into()))?
                    .iter()
                    .map(|&[x, y]| Ok((elem(field, x)?, elem(field, y)?)))
                    .collect::<Result<Vec<_>>>()?;
                let fam = build_family(field, fam, t, k)?;
                BloInstance::new(fam, points, t, k)
            }
            _ => Err(Error::Parse(
                "instance needs exactly one of \"ppc\", \"frs\" or \"family\"".into(),
            )),
        }
    }
}

fn build_family(field: Field, spec: &FamilySpec, t: usize, k: usize) -> Result<OperatorFamily> {
    match spec {
        FamilySpec::Power { lx, ly, s } => {
            power_family(affine(field, *lx)?, affine(field, *ly)?, *s)
        }
        FamilySpec::Matrix { matrices, witness } => {
            let ops = matrices
                .iter()
                .map(|g| LinOp::from_matrix(matrix(field, g)?, t, k))
                .collect::<Result<Vec<_>>>()?;
            let witness = witness
                .as_ref()
                .map(|w| {
                    ExtendibilityWitness::new(
                        poly_matrix(field, &w.mx)?,
                        poly_matrix(field, &w.my)?,
                    )
                })
                .transpose()?;
            OperatorFamily::new(ops, witness)
        }
    }
}

pub fn parse_instance(text: &str) -> Result<BloInstance> {
    serde_json::from_str::<InstanceSpec>(text)
        .map_err(|e| Error::Parse(format!("instance: {e}")))?
        .build()
}

/// Serializes PPC and FRS instances; generic instances have no compact form.
pub fn instance_to_json(inst: &BloInstance) -> Result<String> {
    let spec = match inst.origin() {
        InstanceOrigin::Ppc(p) => InstanceSpec::from_ppc(p),
        InstanceOrigin::Frs(f) => InstanceSpec::from_frs(f),
        InstanceOrigin::Generic => {
            return Err(Error::invalid(
                "only PPC and FRS instances can be written out",
            ))
        }
    };
    serde_json::to_string_pretty(&spec).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSpec {
    pub w: usize,
    pub d1: usize,
    pub d2: usize,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<usize>,
    /// One `r x s` grid per operator of `G`, the same at every point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Grid>>,
}

impl PlanSpec {
    pub fn to_params(&self, field: Field) -> Result<PlanParams> {
        let h = self
            .h
            .as_ref()
            .map(|grids| {
                grids
                    .iter()
                    .map(|g| matrix(field, g))
                    .collect::<Result<Vec<_>>>()
                    .map(HTable::PointIndependent)
            })
            .transpose()?;
        Ok(PlanParams {
            w: self.w,
            d1: self.d1,
            d2: self.d2,
            distance: self.distance,
            h,
        })
    }
}

pub fn parse_plan(text: &str) -> Result<PlanSpec> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("plan: {e}")))
}

pub fn plan_to_json(spec: &PlanSpec) -> String {
    serde_json::to_string(spec).expect("plan specs always serialize")
}

fn parse_rows(text: &str, field: Field, what: &str) -> Result<Vec<Vec<Felt>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|line| {
            line.split_whitespace()
                .map(|tok| {
                    let v: u64 = tok
                        .parse()
                        .map_err(|_| Error::Parse(format!("{what}: bad integer {tok:?}")))?;
                    elem(field, v)
                })
                .collect()
        })
        .collect()
}

fn format_rows<'a>(rows: impl Iterator<Item = &'a [Felt]>) -> String {
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(|x| x.value().to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// `n` lines of `s` integers.
pub fn parse_codeword(text: &str, field: Field) -> Result<Codeword> {
    Codeword::new(parse_rows(text, field, "codeword")?)
}

pub fn format_codeword(cw: &Codeword) -> String {
    format_rows(cw.columns().iter().map(Vec::as_slice))
}

/// `t` lines of `k` integers, checked against the instance bounds.
pub fn parse_message(text: &str, inst: &BloInstance) -> Result<BiPoly> {
    let rows = parse_rows(text, inst.field(), "message")?;
    if rows.len() != inst.t() || rows.iter().any(|r| r.len() != inst.k()) {
        return Err(Error::bounds(format!(
            "message must be {} lines of {} integers",
            inst.t(),
            inst.k()
        )));
    }
    inst.message_from_coeffs(rows.into_iter().flatten().collect())
}

pub fn format_message(p: &BiPoly) -> String {
    let (_, dy) = p.bounds();
    format_rows(p.coeff_vec().chunks(dy))
}

/// The grid on one line, rows separated by `" | "`.
pub fn format_grid_inline(p: &BiPoly) -> String {
    p.to_grid()
        .iter()
        .map(|row| row.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(" | ")
}

/// `distance ; grid`.
pub fn format_candidate(c: &Candidate) -> String {
    format!("{} ; {}", c.distance, format_grid_inline(&c.message))
}
