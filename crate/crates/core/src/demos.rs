//! Fixed demo instances and their end-to-end transcripts.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::{corrupt_seeded, BloInstance, FrsParams, PpcParams};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::io::{format_candidate, format_grid_inline, PlanSpec};
use crate::listdecode::{build_plan, list_decode_detailed, DecodingPlan};
use crate::oracle::{oracle_list_decode, random_message, OracleBudget};
use crate::poly::{AffineMap, BiPoly};

fn field(p: u64) -> Field {
    Field::new(p).expect("demo moduli are prime")
}

fn affine(f: Field, a: u64, b: u64) -> AffineMap {
    AffineMap::new(f.elem(a), f.elem(b)).expect("demo maps are invertible")
}

/// `F_7`, `l1 = X + 1` (`s = 7`), `l2 = 3X` (`n = 6`), `α = 0`, `β = 1`, `t = k = 2`.
pub fn ppc7() -> PpcParams {
    let f = field(7);
    PpcParams::new(affine(f, 1, 1), affine(f, 3, 0), f.zero(), f.one(), 2, 2)
        .expect("ppc7 parameters are valid")
}

/// `F_61`, `l1 = 9X` (`s = 5`), `l2 = 32X` (`n = 12`), `α = β = 1`.
pub fn ppc61_with(t: usize, k: usize) -> PpcParams {
    let f = field(61);
    PpcParams::new(affine(f, 9, 0), affine(f, 32, 0), f.one(), f.one(), t, k)
        .expect("ppc61 parameters are valid")
}

/// `ppc61` with `t = 1`, `k = 3`.
pub fn ppc61() -> PpcParams {
    ppc61_with(1, 3)
}

pub fn ppc61_plan() -> PlanSpec {
    PlanSpec {
        w: 3,
        d1: 3,
        d2: 7,
        ..Default::default()
    }
}

/// `ppc61` with `t = k = 2`.
pub fn ppc61_bivariate() -> PpcParams {
    ppc61_with(2, 2)
}

pub fn ppc61_bivariate_plan() -> PlanSpec {
    PlanSpec {
        w: 3,
        d1: 3,
        d2: 8,
        distance: Some(4),
        h: None,
    }
}

/// `F_13`, `γ = 2`, `s = 2`, `k = 3`, base points `{1, 3, 4, 5}`.
pub fn frs13() -> FrsParams {
    let f = field(13);
    let points = [1, 3, 4, 5].iter().map(|&a| f.elem(a)).collect();
    FrsParams::new(f.elem(2), 2, 3, points).expect("frs13 parameters are valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Demo {
    Ppc7,
    Ppc61,
    Ppc61Bivariate,
    Frs13,
}

impl Demo {
    pub const ALL: [Demo; 4] = [Demo::Ppc7, Demo::Ppc61, Demo::Ppc61Bivariate, Demo::Frs13];

    pub fn name(self) -> &'static str {
        match self {
            Demo::Ppc7 => "ppc7",
            Demo::Ppc61 => "ppc61",
            Demo::Ppc61Bivariate => "ppc61-bivariate",
            Demo::Frs13 => "frs13",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Demo::ALL.iter().map(|d| d.name()).collect()
    }

    /// Runs the demo and returns its transcript.
    pub fn run(self, seed: u64, budget: OracleBudget) -> Result<String> {
        match self {
            Demo::Ppc7 => ppc7_transcript(),
            Demo::Frs13 => frs13_transcript(),
            Demo::Ppc61 => decode_transcript(&ppc61(), &ppc61_plan(), 4, seed, budget),
            Demo::Ppc61Bivariate => {
                decode_transcript(&ppc61_bivariate(), &ppc61_bivariate_plan(), 3, seed, budget)
            }
        }
    }
}

impl FromStr for Demo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Demo> {
        Demo::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown demo {s:?}; available: {}",
                    Demo::names().join(", ")
                ))
            })
    }
}

/// Every message of `inst`, in odometer order.
pub fn all_messages(inst: &BloInstance) -> impl Iterator<Item = BiPoly> + '_ {
    let f = inst.field();
    let len = inst.t() * inst.k();
    let q = f.size();
    let total = inst.message_count();
    (0..total).map(move |mut idx| {
        let mut coeffs = vec![f.zero(); len];
        for c in coeffs.iter_mut().rev() {
            *c = f.elem((idx % q as u128) as u64);
            idx /= q as u128;
        }
        inst.message_from_coeffs(coeffs)
            .expect("length matches bounds")
    })
}

fn ppc7_transcript() -> Result<String> {
    let params = ppc7();
    let inst = params.to_blelo()?;
    let mut out = String::new();
    writeln!(out, "ppc7: q = 7, l1 = X + 1, l2 = 3X, alpha = 0, beta = 1").unwrap();
    writeln!(
        out,
        "s = {}, n = {}, t = {}, k = {}, rate = {}",
        params.s(),
        params.n(),
        2,
        2,
        inst.rate()
    )
    .unwrap();
    let xy = BiPoly::monomial(inst.field(), 2, 2, 1, 1)?;
    let cw = inst.encode(&xy)?;
    let col: Vec<String> = cw.column(0).iter().map(|x| x.to_string()).collect();
    writeln!(out, "encode(XY) column 0: {}", col.join(" ")).unwrap();
    let mut mismatches = 0;
    let mut total = 0;
    for m in all_messages(&inst) {
        total += 1;
        if params.encode_direct(&m)? != inst.encode(&m)? {
            mismatches += 1;
        }
    }
    writeln!(
        out,
        "direct vs B-LELO encodings: {total} messages, {mismatches} mismatches"
    )
    .unwrap();
    Ok(out)
}

fn frs13_transcript() -> Result<String> {
    let params = frs13();
    let inst = params.as_blo()?;
    let mut out = String::new();
    writeln!(
        out,
        "frs13: q = 13, gamma = 2, s = 2, k = 3, points 1 3 4 5"
    )
    .unwrap();
    let mut mismatches = 0;
    let mut total = 0;
    for m in all_messages(&inst) {
        total += 1;
        if params.encode_direct(&m)? != inst.encode(&m)? {
            mismatches += 1;
        }
    }
    writeln!(
        out,
        "direct vs embedded encodings: {total} messages, {mismatches} mismatches"
    )
    .unwrap();
    Ok(out)
}

/// Plan summary lines shared by the demos and `check`.
pub fn describe_plan(plan: &DecodingPlan) -> String {
    let inst = plan.instance();
    format!(
        "w = {}, r = {}, d1 = {}, d2 = {}, D = {}, ell = {}, radius = {}, rate = {}, unknowns = {}, constraints = {}",
        plan.w(),
        plan.r(),
        plan.d1(),
        plan.d2(),
        plan.distance(),
        plan.ell(),
        plan.radius(),
        inst.rate(),
        plan.unknowns(),
        plan.constraints()
    )
}

fn decode_transcript(
    params: &PpcParams,
    spec: &PlanSpec,
    errors: usize,
    seed: u64,
    budget: OracleBudget,
) -> Result<String> {
    let inst = params.to_blelo()?;
    let plan = build_plan(&inst, spec.to_params(inst.field())?)?;
    let mut out = String::new();
    writeln!(
        out,
        "q = {}, l1 = {}X, l2 = {}X, s = {}, n = {}, t = {}, k = {}",
        inst.field().size(),
        params.l1().a(),
        params.l2().a(),
        params.s(),
        params.n(),
        params.t(),
        params.k()
    )
    .unwrap();
    writeln!(out, "plan: {}", describe_plan(&plan)).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = random_message(&inst, &mut rng)?;
    let cw = inst.encode(&m)?;
    let (received, positions) = corrupt_seeded(&cw, errors, rng.gen())?;
    writeln!(out, "message: {}", format_grid_inline(&m)).unwrap();
    writeln!(out, "corrupted columns: {positions:?}").unwrap();

    let start = Instant::now();
    let report = list_decode_detailed(&plan, &received, false)?;
    writeln!(
        out,
        "decoded in {:.3}s: kernel dim {}, {} kernel vectors, {} candidates",
        start.elapsed().as_secs_f64(),
        report.kernel_dim,
        report.kernel_size,
        report.candidates.len()
    )
    .unwrap();
    for c in &report.candidates {
        writeln!(out, "  {}", format_candidate(c)).unwrap();
    }
    let found = report.candidates.iter().any(|c| c.message == m);
    writeln!(
        out,
        "transmitted message recovered: {}",
        if found { "yes" } else { "no" }
    )
    .unwrap();

    if inst.message_count() <= budget.max_messages {
        let start = Instant::now();
        let oracle = oracle_list_decode(&inst, &received, plan.radius(), budget)?;
        let missed = oracle
            .iter()
            .filter(|o| !report.candidates.iter().any(|c| c.message == o.message))
            .count();
        writeln!(
            out,
            "oracle over {} messages in {:.1}s: {} within radius {}, {} missed by the decoder",
            inst.message_count(),
            start.elapsed().as_secs_f64(),
            oracle.len(),
            plan.radius(),
            missed
        )
        .unwrap();
    } else {
        writeln!(
            out,
            "oracle skipped: {} messages exceed the budget",
            inst.message_count()
        )
        .unwrap();
    }
    Ok(out)
}
