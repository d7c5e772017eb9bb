//! Interpolation-based list decoding of B-LELO codes.
//!
//! A [`DecodingPlan`] fixes the split `T = (L_0, ..., L_{r-1})`,
//! `G = (L_0, ..., L_{w-1})` with `r = s - w + 1`, the interpolation bounds
//! `(d1, d2)`, the column distance `D` of the `T`-code and the list exponent
//! `ell`. Decoding finds `Q = (Q_0, ..., Q_{w-1})` vanishing on the received
//! word, solves `Σ Q_i G_i(p) = 0` for `p` and keeps candidates at column
//! distance `< D`.

use rayon::prelude::*;

use crate::codes::{tcode_distance_ppc, BloInstance, Codeword, InstanceOrigin};
use crate::error::{Error, Result};
use crate::field::{Felt, Field};
use crate::linalg::Matrix;
use crate::operators::{
    check_degree_preserving, diag, diag_distance, verify_extendibility, verify_list_composition,
    HTable, OperatorFamily, DIAG_ENUMERATION_CAP,
};
use crate::poly::{substitute_matrices, BiPoly};

/// User-chosen plan parameters.
#[derive(Clone, Debug, Default)]
pub struct PlanParams {
    pub w: usize,
    pub d1: usize,
    pub d2: usize,
    /// Externally certified `T`-code distance. Required for non-PPC
    /// instances; for PPC instances it may only lower the computed bound.
    pub distance: Option<usize>,
    /// Defaults to the selection maps `[0 | I_r | 0]`.
    pub h: Option<HTable>,
}

impl PlanParams {
    pub fn new(w: usize, d1: usize, d2: usize) -> Self {
        PlanParams {
            w,
            d1,
            d2,
            distance: None,
            h: None,
        }
    }

    pub fn with_distance(mut self, d: usize) -> Self {
        self.distance = Some(d);
        self
    }
}

/// A plan whose four decoding conditions have been checked.
#[derive(Clone, Debug)]
pub struct DecodingPlan {
    inst: BloInstance,
    w: usize,
    r: usize,
    t_fam: OperatorFamily,
    g_fam: OperatorFamily,
    h: HTable,
    d1: usize,
    d2: usize,
    distance: usize,
    ell: usize,
    diag: Matrix,
    g_mats: Vec<Matrix>,
}

impl DecodingPlan {
    pub fn instance(&self) -> &BloInstance {
        &self.inst
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t_family(&self) -> &OperatorFamily {
        &self.t_fam
    }

    pub fn g_family(&self) -> &OperatorFamily {
        &self.g_fam
    }

    pub fn h(&self) -> &HTable {
        &self.h
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    /// Column distance `D` of the `T`-code; decoding covers `D - 1` errors.
    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn radius(&self) -> usize {
        self.distance - 1
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// `Diag(G)`, `w x tk`.
    pub fn diag(&self) -> &Matrix {
        &self.diag
    }

    /// `(d1 - t + 1, d2 - k + 1)`: the bounds of each `Q_i`.
    pub fn q_bounds(&self) -> (usize, usize) {
        (self.d1 - self.inst.t() + 1, self.d2 - self.inst.k() + 1)
    }

    /// Number of interpolation unknowns `w (d1 - t + 1)(d2 - k + 1)`.
    pub fn unknowns(&self) -> usize {
        let (a, b) = self.q_bounds();
        self.w * a * b
    }

    /// Number of interpolation constraints `n r`.
    pub fn constraints(&self) -> usize {
        self.inst.n() * self.r
    }

    /// `B-LELO_{d1,d2}(T)` at the instance's points.
    pub fn tcode_instance(&self) -> Result<BloInstance> {
        BloInstance::new(
            self.t_fam.clone(),
            self.inst.points().to_vec(),
            self.d1,
            self.d2,
        )
    }
}

/// Checks all decoding conditions and assembles a plan.
pub fn build_plan(inst: &BloInstance, params: PlanParams) -> Result<DecodingPlan> {
    let (s, n, t, k) = (inst.s(), inst.n(), inst.t(), inst.k());
    let PlanParams {
        w,
        d1,
        d2,
        distance,
        h,
    } = params;
    if w == 0 || w > s {
        return Err(Error::invalid(format!("w = {w} must lie in 1..={s}")));
    }
    let r = s - w + 1;
    check_condition_one(n, r, w, t, k, d1, d2)?;

    let l_fam = inst.family();
    let t_fam = l_fam.prefix(r)?;
    let g_fam = l_fam.prefix(w)?;
    if !verify_extendibility(&t_fam, d1, d2)? {
        return Err(Error::NotExtendible(format!(
            "T = first {r} operators on degrees below ({d1}, {d2})"
        )));
    }

    let field = inst.field();
    let h = match h {
        Some(h) => h,
        None => HTable::selection(field, w, r, s)?,
    };
    if !verify_list_composition(&t_fam, &g_fam, l_fam, inst.points(), &h, t, k)? {
        return Err(Error::ConditionFailed {
            condition: 2,
            detail: "T does not list-compose G through h".into(),
        });
    }
    if !check_degree_preserving(&g_fam, t, k)? {
        return Err(Error::ConditionFailed {
            condition: 3,
            detail: "G is not degree-preserving in X and Y".into(),
        });
    }
    let diag = diag(&g_fam, t, k)?;
    let ell = t * k - diag_distance(&diag, DIAG_ENUMERATION_CAP)?;

    let distance = resolve_distance(inst, r, d1, d2, distance)?;
    if distance == 0 {
        return Err(Error::DegenerateRadius(format!(
            "T-code distance D = 0 (n = {n}, d2 = {d2}); nothing can be corrected"
        )));
    }
    let g_mats = g_fam.matrices(t, k)?;
    Ok(DecodingPlan {
        inst: inst.clone(),
        w,
        r,
        t_fam,
        g_fam,
        h,
        d1,
        d2,
        distance,
        ell,
        diag,
        g_mats,
    })
}

/// One line of a [`PlanCheck`].
#[derive(Clone, Debug)]
pub struct ConditionOutcome {
    pub label: &'static str,
    /// `Ok(detail)` when the condition holds.
    pub outcome: std::result::Result<String, String>,
}

/// Every decoding condition evaluated independently, plus the plan itself
/// when all of them hold.
#[derive(Debug)]
pub struct PlanCheck {
    pub conditions: Vec<ConditionOutcome>,
    pub plan: Result<DecodingPlan>,
}

impl PlanCheck {
    pub fn all_pass(&self) -> bool {
        self.plan.is_ok() && self.conditions.iter().all(|c| c.outcome.is_ok())
    }
}

/// Like [`build_plan`] but reports on each condition instead of stopping at
/// the first failure.
pub fn check_plan(inst: &BloInstance, params: PlanParams) -> PlanCheck {
    let (s, n, t, k) = (inst.s(), inst.n(), inst.t(), inst.k());
    let (w, d1, d2) = (params.w, params.d1, params.d2);
    let mut conditions = Vec::new();
    let mut push = |label, outcome: Result<String>| {
        conditions.push(ConditionOutcome {
            label,
            outcome: outcome.map_err(|e| e.to_string()),
        })
    };
    if w == 0 || w > s {
        let plan = build_plan(inst, params);
        return PlanCheck { conditions, plan };
    }
    let r = s - w + 1;
    push(
        "condition 1 (interpolation count)",
        check_condition_one(n, r, w, t, k, d1, d2)
            .map(|_| format!("({d1} - {t} + 1)({d2} - {k} + 1) {w} > {n} * {r}")),
    );
    let fams = inst
        .family()
        .prefix(r)
        .and_then(|tf| Ok((tf, inst.family().prefix(w)?)));
    match fams {
        Ok((t_fam, g_fam)) => {
            push(
                "T extendibility",
                verify_extendibility(&t_fam, d1.max(1), d2.max(1)).and_then(|ok| {
                    ok.then(|| "witness verified".to_string())
                        .ok_or_else(|| Error::NotExtendible("witness check failed".into()))
                }),
            );
            let h = match &params.h {
                Some(h) => Ok(h.clone()),
                None => HTable::selection(inst.field(), w, r, s),
            };
            push(
                "condition 2 (list composition)",
                h.and_then(|h| {
                    verify_list_composition(&t_fam, &g_fam, inst.family(), inst.points(), &h, t, k)
                })
                .and_then(|ok| {
                    ok.then(|| "T(G_i(p)) = h_i L(p) at every point".to_string())
                        .ok_or(Error::ConditionFailed {
                            condition: 2,
                            detail: "T does not list-compose G through h".into(),
                        })
                }),
            );
            push(
                "condition 3 (degree preserving)",
                check_degree_preserving(&g_fam, t, k).and_then(|ok| {
                    ok.then(|| "G preserves X- and Y-degrees".to_string())
                        .ok_or(Error::ConditionFailed {
                            condition: 3,
                            detail: "G is not degree-preserving in X and Y".into(),
                        })
                }),
            );
            push(
                "condition 4 (Diag distance)",
                diag(&g_fam, t, k)
                    .and_then(|d| diag_distance(&d, DIAG_ENUMERATION_CAP))
                    .map(|dist| format!("distance {dist}, ell = {}", t * k - dist)),
            );
        }
        Err(e) => push("operator split", Err(e)),
    }
    let plan = build_plan(inst, params);
    PlanCheck { conditions, plan }
}

/// `d1 >= t`, `d2 >= k` and `(d1 - t + 1)(d2 - k + 1) w > n r`.
pub fn check_condition_one(
    n: usize,
    r: usize,
    w: usize,
    t: usize,
    k: usize,
    d1: usize,
    d2: usize,
) -> Result<()> {
    if d1 < t || d2 < k {
        return Err(Error::ConditionFailed {
            condition: 1,
            detail: format!("need d1 >= t and d2 >= k, got d1 = {d1}, d2 = {d2}, t = {t}, k = {k}"),
        });
    }
    let lhs = (d1 - t + 1) * (d2 - k + 1) * w;
    if lhs <= n * r {
        return Err(Error::ConditionFailed {
            condition: 1,
            detail: format!(
                "(d1 - t + 1)(d2 - k + 1) = {} is not > nr/w = {}/{w}",
                (d1 - t + 1) * (d2 - k + 1),
                n * r
            ),
        });
    }
    Ok(())
}

fn resolve_distance(
    inst: &BloInstance,
    r: usize,
    d1: usize,
    d2: usize,
    requested: Option<usize>,
) -> Result<usize> {
    if !matches!(inst.origin(), InstanceOrigin::Ppc(_)) {
        return requested.ok_or_else(|| {
            Error::invalid("no structural distance bound for this instance; supply D in the plan")
        });
    }
    match (tcode_distance_ppc(inst, r, d1, d2), requested) {
        (Ok(bound), None) => Ok(bound),
        (Ok(bound), Some(d)) if d <= bound => Ok(d),
        (Ok(bound), Some(d)) => Err(Error::invalid(format!(
            "requested D = {d} exceeds the T-code bound n - d2 = {bound}"
        ))),
        (Err(_), Some(d)) => Ok(d),
        (Err(e), None) => Err(e),
    }
}

/// `Q = (Q_0, ..., Q_{w-1})`, each with bounds `(d1 - t + 1, d2 - k + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationResult {
    pub q: Vec<BiPoly>,
}

fn check_received(plan: &DecodingPlan, received: &Codeword) -> Result<()> {
    let inst = &plan.inst;
    if (received.n(), received.s()) != (inst.n(), inst.s()) {
        return Err(Error::shape(format!(
            "received word is {}x{}, instance expects {}x{}",
            received.n(),
            received.s(),
            inst.n(),
            inst.s()
        )));
    }
    if received.field() != inst.field() {
        return Err(Error::FieldMismatch {
            left: inst.field().modulus(),
            right: received.field().modulus(),
        });
    }
    Ok(())
}

/// The `nr x w(d1 - t + 1)(d2 - k + 1)` interpolation system. Unknown
/// `q_{i,a,b}` sits at column `(i A + a) B + b`; constraint `j` at point `pt`
/// is row `pt r + j`.
pub fn interpolation_system(plan: &DecodingPlan, received: &Codeword) -> Result<Matrix> {
    check_received(plan, received)?;
    let field = plan.inst.field();
    let (a_bound, b_bound) = plan.q_bounds();
    let r = plan.r;
    let witness = plan.t_fam.witness().ok_or(Error::MissingWitness)?;
    let mut sys = Matrix::zeros(field, plan.constraints(), plan.unknowns());
    for (pt, &(x, y)) in plan.inst.points().iter().enumerate() {
        let mx = witness.mx.eval(x, y)?;
        let my = witness.my.eval(x, y)?;
        let c = received.column(pt);
        for i in 0..plan.w {
            let mut y_vec = plan.h.get(i, pt).mul_vec(c)?;
            for b in 0..b_bound {
                let mut vec = y_vec.clone();
                for a in 0..a_bound {
                    let col = (i * a_bound + a) * b_bound + b;
                    for (j, &v) in vec.iter().enumerate() {
                        sys[(pt * r + j, col)] = v;
                    }
                    vec = mx.mul_vec(&vec)?;
                }
                y_vec = my.mul_vec(&y_vec)?;
            }
        }
    }
    Ok(sys)
}

/// Finds a nonzero `Q` with `Σ_i Q_i(M_x, M_y)(x, y) h_i c_(x,y) = 0` at every
/// point: the first kernel basis vector of the interpolation system.
pub fn interpolate(plan: &DecodingPlan, received: &Codeword) -> Result<InterpolationResult> {
    let sys = interpolation_system(plan, received)?;
    let kernel = sys.kernel_basis();
    let Some(first) = kernel.into_iter().next() else {
        return Err(Error::invariant(format!(
            "interpolation system {}x{} has a trivial kernel",
            sys.rows(),
            sys.cols()
        )));
    };
    let (a_bound, b_bound) = plan.q_bounds();
    let field = plan.inst.field();
    let q = first
        .chunks(a_bound * b_bound)
        .map(|chunk| BiPoly::from_coeff_vec(field, a_bound, b_bound, chunk.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(InterpolationResult { q })
}

/// Rechecks `Q` through symbolic substitution `Q_i(M_x, M_y)` followed by
/// evaluation, and checks the degree bounds and that `Q` is nonzero.
pub fn verify_interpolation(plan: &DecodingPlan, q: &[BiPoly], received: &Codeword) -> bool {
    verify_interpolation_inner(plan, q, received).unwrap_or(false)
}

fn verify_interpolation_inner(
    plan: &DecodingPlan,
    q: &[BiPoly],
    received: &Codeword,
) -> Result<bool> {
    check_received(plan, received)?;
    let field = plan.inst.field();
    let (a_bound, b_bound) = plan.q_bounds();
    if q.len() != plan.w || q.iter().all(BiPoly::is_zero) {
        return Ok(false);
    }
    for qi in q {
        if qi.field() != field
            || qi.deg_x().is_some_and(|d| d >= a_bound)
            || qi.deg_y().is_some_and(|d| d >= b_bound)
        {
            return Ok(false);
        }
    }
    let witness = plan.t_fam.witness().ok_or(Error::MissingWitness)?;
    let subs = q
        .iter()
        .map(|qi| substitute_matrices(&qi.trimmed(), &witness.mx, &witness.my))
        .collect::<Result<Vec<_>>>()?;
    for (pt, &(x, y)) in plan.inst.points().iter().enumerate() {
        let mut acc = vec![field.zero(); plan.r];
        for (i, sub) in subs.iter().enumerate() {
            let hc = plan.h.get(i, pt).mul_vec(received.column(pt))?;
            let term = sub.eval(x, y)?.mul_vec(&hc)?;
            for (a, t) in acc.iter_mut().zip(term) {
                *a += t;
            }
        }
        if acc.iter().any(|v| !v.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_q(plan: &DecodingPlan, q: &[BiPoly]) -> Result<()> {
    if q.len() != plan.w {
        return Err(Error::shape(format!(
            "{} polynomials in Q, w = {}",
            q.len(),
            plan.w
        )));
    }
    let (a_bound, b_bound) = plan.q_bounds();
    for qi in q {
        if qi.field() != plan.inst.field() {
            return Err(Error::FieldMismatch {
                left: plan.inst.field().modulus(),
                right: qi.field().modulus(),
            });
        }
        if qi.deg_x().is_some_and(|d| d >= a_bound) || qi.deg_y().is_some_and(|d| d >= b_bound) {
            return Err(Error::bounds(format!(
                "Q_i exceeds bounds ({a_bound}, {b_bound})"
            )));
        }
    }
    Ok(())
}

/// `R_p = Σ_i Q_i G_i(p)` with bounds `(d1, d2)`.
pub fn residual(plan: &DecodingPlan, q: &[BiPoly], p: &BiPoly) -> Result<BiPoly> {
    check_q(plan, q)?;
    plan.inst.check_message(p)?;
    let (a_bound, b_bound) = plan.q_bounds();
    let images = plan.g_fam.apply(p)?;
    let mut acc = BiPoly::zero(plan.inst.field(), plan.d1, plan.d2);
    for (qi, gi) in q.iter().zip(&images) {
        let prod = qi
            .resized(a_bound, b_bound)?
            .mul(gi)?
            .resized(plan.d1, plan.d2)?;
        acc = acc.add(&prod)?;
    }
    Ok(acc)
}

/// The `d1 d2 x tk` matrix of `p ↦ coeff(R_p)`; row `a d2 + b` is the
/// coefficient of `X^a Y^b`, column `v` is the message coefficient `v`.
pub fn build_solve_system(plan: &DecodingPlan, q: &[BiPoly]) -> Result<Matrix> {
    check_q(plan, q)?;
    let (t, k) = (plan.inst.t(), plan.inst.k());
    let (a_bound, b_bound) = plan.q_bounds();
    let field = plan.inst.field();
    let qs = q
        .iter()
        .map(|qi| qi.resized(a_bound, b_bound))
        .collect::<Result<Vec<_>>>()?;
    let mut sys = Matrix::zeros(field, plan.d1 * plan.d2, t * k);
    for v in 0..t * k {
        let mut acc = BiPoly::zero(field, plan.d1, plan.d2);
        for (qi, gm) in qs.iter().zip(&plan.g_mats) {
            let gi = BiPoly::from_coeff_vec(field, t, k, gm.column(v))?;
            acc = acc.add(&qi.mul(&gi)?.resized(plan.d1, plan.d2)?)?;
        }
        for (row, &c) in acc.coeff_vec().iter().enumerate() {
            sys[(row, v)] = c;
        }
    }
    Ok(sys)
}

/// Leading-term data of the solve step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveDiagnostics {
    pub r1: usize,
    /// `r2(i)` for `i = 0..=r1`; `None` when every `Q_j` has a zero
    /// `X^{r1-i}` coefficient.
    pub r2_profile: Vec<Option<usize>>,
    pub u: Vec<Felt>,
    /// The `tk x tk` block: row `v(i, l)` is the equation for
    /// `X^{r1+t-1-i} Y^{r2+k-1-l}`, column `c` the message coefficient
    /// `tk - 1 - c`.
    pub block: Matrix,
    pub leading_diag: Vec<Felt>,
    pub zero_count: usize,
}

impl SolveDiagnostics {
    pub fn r2(&self) -> usize {
        self.r2_profile[0].expect("r2(0) exists for nonzero Q")
    }
}

/// Extracts the leading block of the solve system and checks it is lower
/// triangular, that its diagonal is `u Diag(G)` (columns reversed) and that
/// it has at most `ell` zeros on the diagonal.
pub fn leading_diagnostics(plan: &DecodingPlan, q: &[BiPoly]) -> Result<SolveDiagnostics> {
    let sys = build_solve_system(plan, q)?;
    let field = plan.inst.field();
    let (t, k) = (plan.inst.t(), plan.inst.k());
    let tk = t * k;
    let r1 = q
        .iter()
        .filter_map(BiPoly::deg_x)
        .max()
        .ok_or_else(|| Error::invalid("Q is identically zero"))?;
    let r2_profile: Vec<Option<usize>> = (0..=r1)
        .map(|i| q.iter().filter_map(|qj| qj.deg_y_of_x_coeff(r1 - i)).max())
        .collect();
    let r2 = r2_profile[0].ok_or_else(|| Error::invariant("no Q_j reaches X-degree r1"))?;
    let u: Vec<Felt> = q.iter().map(|qj| qj.coeff(r1, r2)).collect();
    if u.iter().all(|x| x.is_zero()) {
        return Err(Error::invariant("leading vector u is zero"));
    }

    let block = Matrix::from_fn(field, tk, tk, |v, c| {
        let (i, l) = (v / k, v % k);
        let row = (r1 + t - 1 - i) * plan.d2 + (r2 + k - 1 - l);
        sys[(row, tk - 1 - c)]
    });
    for v in 0..tk {
        if let Some(c) = (v + 1..tk).find(|&c| !block[(v, c)].is_zero()) {
            return Err(Error::invariant(format!(
                "leading block is not lower triangular at ({v}, {c})"
            )));
        }
    }
    let leading_diag: Vec<Felt> = (0..tk).map(|v| block[(v, v)]).collect();
    for (v, &d) in leading_diag.iter().enumerate() {
        let expected = u.iter().enumerate().fold(field.zero(), |acc, (j, &uj)| {
            acc + uj * plan.diag[(j, tk - 1 - v)]
        });
        if d != expected {
            return Err(Error::invariant(format!(
                "leading diagonal entry {v} is {d}, u Diag(G) gives {expected}"
            )));
        }
    }
    let zero_count = leading_diag.iter().filter(|d| d.is_zero()).count();
    if zero_count > plan.ell {
        return Err(Error::invariant(format!(
            "{zero_count} zeros on the leading diagonal, ell = {}",
            plan.ell
        )));
    }
    Ok(SolveDiagnostics {
        r1,
        r2_profile,
        u,
        block,
        leading_diag,
        zero_count,
    })
}

/// Every vector of the right kernel, `q^dim` of them, as all combinations
/// `Σ c_i b_i` of the reduced basis with the last coefficient fastest.
pub fn kernel_enumerate(system: &Matrix, field: Field, dim_cap: usize) -> Result<Vec<Vec<Felt>>> {
    let basis = system.kernel_basis();
    let dim = basis.len();
    if dim > dim_cap {
        return Err(Error::KernelTooLarge { dim, cap: dim_cap });
    }
    let q = field.size();
    let total = (q as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if total > usize::MAX as u128 / 2 {
        return Err(Error::KernelTooLarge { dim, cap: dim_cap });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut coeffs = vec![0u64; dim];
    let len = system.cols();
    loop {
        let mut vec = vec![field.zero(); len];
        for (&c, b) in coeffs.iter().zip(&basis) {
            if c == 0 {
                continue;
            }
            let c = field.elem(c);
            for (x, &y) in vec.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        out.push(vec);
        let mut pos = dim;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            coeffs[pos] += 1;
            if coeffs[pos] < q {
                break;
            }
            coeffs[pos] = 0;
        }
    }
}

/// A decoded message and its column distance to the received word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub message: BiPoly,
    pub distance: usize,
}

/// Everything the decoder computed on one received word.
#[derive(Clone, Debug)]
pub struct DecodeReport {
    pub candidates: Vec<Candidate>,
    pub interpolation: InterpolationResult,
    pub kernel_dim: usize,
    pub kernel_size: usize,
    /// All kernel messages, in enumeration order, when requested.
    pub kernel: Option<Vec<BiPoly>>,
}

/// Every message at column distance `< D` from `received`, sorted by
/// distance then coefficients.
pub fn list_decode(plan: &DecodingPlan, received: &Codeword) -> Result<Vec<Candidate>> {
    Ok(list_decode_detailed(plan, received, false)?.candidates)
}

pub fn list_decode_detailed(
    plan: &DecodingPlan,
    received: &Codeword,
    keep_kernel: bool,
) -> Result<DecodeReport> {
    let interpolation = interpolate(plan, received)?;
    let system = build_solve_system(plan, &interpolation.q)?;
    let field = plan.inst.field();
    let kernel = kernel_enumerate(&system, field, plan.ell)?;
    let kernel_size = kernel.len();
    let kernel_dim = system.cols() - system.rank();

    let messages = kernel
        .into_iter()
        .map(|v| plan.inst.message_from_coeffs(v))
        .collect::<Result<Vec<_>>>()?;
    let scored = messages
        .par_iter()
        .map(|m| {
            let cw = plan.inst.encode(m)?;
            Ok((m, cw.column_distance(received)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut candidates: Vec<Candidate> = scored
        .into_iter()
        .filter(|&(_, d)| d < plan.distance)
        .map(|(m, d)| Candidate {
            message: m.clone(),
            distance: d,
        })
        .collect();
    candidates.sort_by(|a, b| {
        a.distance
            .cmp(&b.distance)
            .then_with(|| a.message.coeff_vec().cmp(b.message.coeff_vec()))
    });
    Ok(DecodeReport {
        candidates,
        interpolation,
        kernel_dim,
        kernel_size,
        kernel: keep_kernel.then_some(messages),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{corrupt_seeded, PpcParams};
    use crate::poly::AffineMap;

    fn ppc61(t: usize, k: usize) -> BloInstance {
        let f = Field::new(61).unwrap();
        let l1 = AffineMap::new(f.elem(9), f.zero()).unwrap();
        let l2 = AffineMap::new(f.elem(32), f.zero()).unwrap();
        PpcParams::new(l1, l2, f.one(), f.one(), t, k)
            .unwrap()
            .to_blelo()
            .unwrap()
    }

    fn msg(inst: &BloInstance, vals: &[u64]) -> BiPoly {
        let f = inst.field();
        inst.message_from_coeffs(vals.iter().map(|&v| f.elem(v)).collect())
            .unwrap()
    }

    #[test]
    fn ppc61_plan_quantities() {
        let inst = ppc61(1, 3);
        let plan = build_plan(&inst, PlanParams::new(3, 3, 7)).unwrap();
        assert_eq!((plan.r(), plan.distance(), plan.ell()), (3, 5, 2));
        assert_eq!(plan.unknowns(), 45);
        assert_eq!(plan.constraints(), 36);
    }

    #[test]
    fn plan_rejections() {
        let inst = ppc61(1, 3);
        let err = build_plan(&inst, PlanParams::new(3, 3, 5)).unwrap_err();
        assert!(matches!(err, Error::ConditionFailed { condition: 1, .. }));
        assert!(build_plan(&inst, PlanParams::new(6, 3, 7)).is_err());
        assert!(build_plan(&inst, PlanParams::new(0, 3, 7)).is_err());
        // d2 = n: condition one holds but the radius collapses
        let err = build_plan(&inst, PlanParams::new(3, 3, 12)).unwrap_err();
        assert!(matches!(err, Error::DegenerateRadius(_)));
        // override may lower D, not raise it
        let plan = build_plan(&inst, PlanParams::new(3, 3, 7).with_distance(3)).unwrap();
        assert_eq!(plan.distance(), 3);
        assert!(build_plan(&inst, PlanParams::new(3, 3, 7).with_distance(6)).is_err());
    }

    #[test]
    fn bivariate_plan() {
        let inst = ppc61(2, 2);
        let plan = build_plan(&inst, PlanParams::new(3, 3, 8)).unwrap();
        assert_eq!((plan.distance(), plan.ell()), (4, 2));
    }

    #[test]
    fn clean_word_decodes_with_zero_distance() {
        let inst = ppc61(1, 3);
        let plan = build_plan(&inst, PlanParams::new(3, 3, 7)).unwrap();
        let m = msg(&inst, &[5, 17, 42]);
        let cw = inst.encode(&m).unwrap();
        let out = list_decode(&plan, &cw).unwrap();
        assert_eq!(
            out[0],
            Candidate {
                message: m.clone(),
                distance: 0
            }
        );
        let interp = interpolate(&plan, &cw).unwrap();
        assert!(verify_interpolation(&plan, &interp.q, &cw));
        let sys = build_solve_system(&plan, &interp.q).unwrap();
        let coeffs = m.coeff_vec().to_vec();
        assert!(sys.mul_vec(&coeffs).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn zero_word_gives_nonzero_q() {
        let inst = ppc61(1, 3);
        let plan = build_plan(&inst, PlanParams::new(3, 3, 7)).unwrap();
        let zero = inst.encode(&BiPoly::zero(inst.field(), 1, 3)).unwrap();
        let interp = interpolate(&plan, &zero).unwrap();
        assert!(interp.q.iter().any(|q| !q.is_zero()));
        assert!(verify_interpolation(&plan, &interp.q, &zero));
    }

    #[test]
    fn verify_rejects_bad_q() {
        let inst = ppc61(1, 3);
        let plan = build_plan(&inst, PlanParams::new(3, 3, 7)).unwrap();
        let f = inst.field();
        let cw = inst.encode(&msg(&inst, &[1, 2, 3])).unwrap();
        let (bad, _) = corrupt_seeded(&cw, 6, 9).unwrap();
        let (a, b) = plan.q_bounds();
        let mut q = vec![BiPoly::zero(f, a, b); 3];
        q[0] = BiPoly::constant(f.one(), a, b);
        assert!(!verify_interpolation(&plan, &q, &bad));
        q[0] = BiPoly::monomial(f, a + 1, b, a, 0).unwrap();
        assert!(!verify_interpolation(&plan, &q, &bad));
    }

    #[test]
    fn identity_q_gives_identity_system() {
        let inst = ppc61(1, 3);
        let plan = build_plan(&inst, PlanParams::new(3, 3, 7)).unwrap();
        let f = inst.field();
        let (a, b) = plan.q_bounds();
        let mut q = vec![BiPoly::zero(f, a, b); 3];
        q[0] = BiPoly::constant(f.one(), a, b);
        let sys = build_solve_system(&plan, &q).unwrap();
        // G_0 is the identity, so R_p = p sits in rows 0..3
        for v in 0..3 {
            for c in 0..3 {
                assert_eq!(sys[(v, c)], if v == c { f.one() } else { f.zero() });
            }
        }
        assert_eq!(sys.rank(), 3);
        let diag = leading_diagnostics(&plan, &q).unwrap();
        assert_eq!(diag.zero_count, 0);
        assert!(diag.leading_diag.iter().all(|d| d.is_one()));
    }

    #[test]
    fn kernel_enumeration_sizes() {
        let f = Field::new(7).unwrap();
        assert_eq!(
            kernel_enumerate(&Matrix::identity(f, 3), f, 0).unwrap(),
            vec![vec![f.zero(); 3]]
        );
        let m = Matrix::from_rows(f, &[vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        let all = kernel_enumerate(&m, f, 1).unwrap();
        assert_eq!(all.len(), 7);
        assert!(all
            .iter()
            .all(|v| m.mul_vec(v).unwrap().iter().all(|x| x.is_zero())));
        let zero = Matrix::zeros(f, 1, 2);
        assert_eq!(
            kernel_enumerate(&zero, f, 1).unwrap_err(),
            Error::KernelTooLarge { dim: 2, cap: 1 }
        );
    }

    #[test]
    fn decodes_four_errors() {
        let inst = ppc61(1, 3);
        let plan = build_plan(&inst, PlanParams::new(3, 3, 7)).unwrap();
        for seed in 0..10 {
            let m = msg(&inst, &[seed, 3 * seed + 1, 60 - seed]);
            let cw = inst.encode(&m).unwrap();
            let (bad, _) = corrupt_seeded(&cw, 4, seed).unwrap();
            let report = list_decode_detailed(&plan, &bad, false).unwrap();
            assert!(report.kernel_dim <= 2);
            assert!(report
                .candidates
                .iter()
                .any(|c| c.message == m && c.distance == 4));
            assert!(report.candidates.iter().all(|c| c.distance < 5));
            let d = leading_diagnostics(&plan, &report.interpolation.q).unwrap();
            assert!(d.zero_count <= 2);
        }
    }
}
