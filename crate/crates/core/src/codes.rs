//! B-LO code instances and the RS/FRS/PPC encoders.
//!
//! A [`BloInstance`] maps `p ∈ F[X, Y]_{<t,<k}` to the `n` columns
//! `L(p)(x_i, y_i) ∈ F^s`. Permuted product and folded Reed-Solomon codes are
//! built both directly from their definitions and as B-LO instances so the
//! two encoders can be compared.

use std::collections::HashSet;

use num_rational::Ratio;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{gcd, Felt, Field};
use crate::operators::{power_family, ExtendibilityWitness, LinOp, OperatorFamily};
use crate::poly::{AffineMap, BiPoly, PolyMatrix};

/// Default cap on the message-space size for exhaustive searches.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 25;

/// A word of `(F^s)^n`, stored as `n` columns of height `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Codeword {
    columns: Vec<Vec<Felt>>,
}

impl Codeword {
    pub fn new(columns: Vec<Vec<Felt>>) -> Result<Self> {
        let s = columns.first().map_or(0, Vec::len);
        if columns.is_empty() || s == 0 || columns.iter().any(|c| c.len() != s) {
            return Err(Error::shape(
                "codeword columns must be nonempty and of equal height",
            ));
        }
        Ok(Codeword { columns })
    }

    pub fn zero(field: Field, n: usize, s: usize) -> Self {
        Codeword {
            columns: vec![vec![field.zero(); s]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn s(&self) -> usize {
        self.columns[0].len()
    }

    pub fn columns(&self) -> &[Vec<Felt>] {
        &self.columns
    }

    pub fn column(&self, i: usize) -> &[Felt] {
        &self.columns[i]
    }

    pub fn field(&self) -> Field {
        self.columns[0][0].field()
    }

    pub fn add(&self, other: &Codeword) -> Result<Codeword> {
        self.check_shape(other)?;
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| x.try_add(y)).collect())
            .collect::<Result<Vec<_>>>()?;
        Ok(Codeword { columns })
    }

    /// Number of columns that differ in at least one entry.
    pub fn column_distance(&self, other: &Codeword) -> Result<usize> {
        self.check_shape(other)?;
        Ok(self
            .columns
            .iter()
            .zip(&other.columns)
            .filter(|(a, b)| a != b)
            .count())
    }

    /// Number of nonzero columns.
    pub fn weight(&self) -> usize {
        self.columns
            .iter()
            .filter(|c| c.iter().any(|x| !x.is_zero()))
            .count()
    }

    fn check_shape(&self, other: &Codeword) -> Result<()> {
        if (self.n(), self.s()) != (other.n(), other.s()) {
            return Err(Error::shape(format!(
                "codewords of shape {}x{} and {}x{}",
                self.n(),
                self.s(),
                other.n(),
                other.s()
            )));
        }
        Ok(())
    }
}

/// Replaces `errors` distinct, uniformly chosen columns with uniformly random
/// different vectors. Returns the corrupted word and the sorted positions.
pub fn corrupt<R: Rng>(
    cw: &Codeword,
    errors: usize,
    rng: &mut R,
) -> Result<(Codeword, Vec<usize>)> {
    let n = cw.n();
    if errors > n {
        return Err(Error::invalid(format!(
            "cannot corrupt {errors} of {n} columns"
        )));
    }
    let field = cw.field();
    let mut positions = index::sample(rng, n, errors).into_vec();
    positions.sort_unstable();
    let mut columns = cw.columns.clone();
    for &i in &positions {
        loop {
            let fresh: Vec<Felt> = (0..cw.s())
                .map(|_| field.elem(rng.gen_range(0..field.size())))
                .collect();
            if fresh != columns[i] {
                columns[i] = fresh;
                break;
            }
        }
    }
    Ok((Codeword { columns }, positions))
}

/// [`corrupt`] driven by a ChaCha8 stream seeded with `seed`.
pub fn corrupt_seeded(cw: &Codeword, errors: usize, seed: u64) -> Result<(Codeword, Vec<usize>)> {
    corrupt(cw, errors, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Where an instance came from; some bounds are only known structurally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceOrigin {
    Generic,
    Ppc(PpcParams),
    Frs(FrsParams),
}

/// The code `B-LO^A_{t,k}(L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BloInstance {
    fam: OperatorFamily,
    points: Vec<(Felt, Felt)>,
    t: usize,
    k: usize,
    origin: InstanceOrigin,
}

impl BloInstance {
    pub fn new(fam: OperatorFamily, points: Vec<(Felt, Felt)>, t: usize, k: usize) -> Result<Self> {
        BloInstance::with_origin(fam, points, t, k, InstanceOrigin::Generic)
    }

    fn with_origin(
        fam: OperatorFamily,
        points: Vec<(Felt, Felt)>,
        t: usize,
        k: usize,
        origin: InstanceOrigin,
    ) -> Result<Self> {
        if t == 0 || k == 0 {
            return Err(Error::invalid("degree bounds t, k must be positive"));
        }
        if points.is_empty() {
            return Err(Error::invalid("need at least one evaluation point"));
        }
        if t * k > fam.len() * points.len() {
            return Err(Error::invalid(format!(
                "tk = {} exceeds sn = {}",
                t * k,
                fam.len() * points.len()
            )));
        }
        let field = fam.field();
        if let Some(&(x, y)) = points
            .iter()
            .find(|(x, y)| x.field() != field || y.field() != field)
        {
            let other = if x.field() != field { x } else { y };
            return Err(Error::FieldMismatch {
                left: field.modulus(),
                right: other.field().modulus(),
            });
        }
        Ok(BloInstance {
            fam,
            points,
            t,
            k,
            origin,
        })
    }

    pub fn field(&self) -> Field {
        self.fam.field()
    }

    pub fn family(&self) -> &OperatorFamily {
        &self.fam
    }

    pub fn points(&self) -> &[(Felt, Felt)] {
        &self.points
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.fam.len()
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn origin(&self) -> &InstanceOrigin {
        &self.origin
    }

    /// `tk / (sn)`.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new((self.t * self.k) as u64, (self.s() * self.n()) as u64)
    }

    /// `q^{tk}`, saturating.
    pub fn message_count(&self) -> u128 {
        (self.field().size() as u128)
            .checked_pow((self.t * self.k) as u32)
            .unwrap_or(u128::MAX)
    }

    pub fn check_message(&self, msg: &BiPoly) -> Result<()> {
        if msg.field() != self.field() {
            return Err(Error::FieldMismatch {
                left: self.field().modulus(),
                right: msg.field().modulus(),
            });
        }
        if msg.bounds() != (self.t, self.k) {
            return Err(Error::bounds(format!(
                "message bounds {:?}, instance expects ({}, {})",
                msg.bounds(),
                self.t,
                self.k
            )));
        }
        Ok(())
    }

    /// Column `i` is `(L_0(p)(x_i, y_i), ..., L_{s-1}(p)(x_i, y_i))`.
    pub fn encode(&self, msg: &BiPoly) -> Result<Codeword> {
        self.check_message(msg)?;
        let images = self.fam.apply(msg)?;
        let columns = self
            .points
            .iter()
            .map(|&(x, y)| images.iter().map(|img| img.eval(x, y)).collect())
            .collect::<Result<Vec<_>>>()?;
        Codeword::new(columns)
    }

    pub fn message_from_coeffs(&self, coeffs: Vec<Felt>) -> Result<BiPoly> {
        BiPoly::from_coeff_vec(self.field(), self.t, self.k, coeffs)
    }
}

/// Parameters of a permuted product code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpcParams {
    l1: AffineMap,
    l2: AffineMap,
    alpha: Felt,
    beta: Felt,
    t: usize,
    k: usize,
    s: usize,
    n: usize,
}

impl PpcParams {
    pub fn new(
        l1: AffineMap,
        l2: AffineMap,
        alpha: Felt,
        beta: Felt,
        t: usize,
        k: usize,
    ) -> Result<Self> {
        let field = l1.field();
        for f in [l2.field(), alpha.field(), beta.field()] {
            if f != field {
                return Err(Error::FieldMismatch {
                    left: field.modulus(),
                    right: f.modulus(),
                });
            }
        }
        let s = l1.order();
        let n = l2.order();
        if gcd(s, n) != 1 {
            return Err(Error::invalid(format!(
                "orders of l1 and l2 must be coprime, got s = {s}, n = {n}"
            )));
        }
        if l1.fixes(alpha) {
            return Err(Error::invalid("l1 fixes alpha"));
        }
        if l2.fixes(beta) {
            return Err(Error::invalid("l2 fixes beta"));
        }
        let (s, n) = (s as usize, n as usize);
        if t == 0 || k == 0 || t * k > s * n {
            return Err(Error::invalid(format!(
                "need 1 <= t, k and tk <= sn = {}, got t = {t}, k = {k}",
                s * n
            )));
        }
        let params = PpcParams {
            l1,
            l2,
            alpha,
            beta,
            t,
            k,
            s,
            n,
        };
        let distinct: HashSet<(Felt, Felt)> = params.flat_points().into_iter().collect();
        if distinct.len() != s * n {
            return Err(Error::invariant(
                "PPC evaluation points are not pairwise distinct",
            ));
        }
        Ok(params)
    }

    pub fn l1(&self) -> AffineMap {
        self.l1
    }

    pub fn l2(&self) -> AffineMap {
        self.l2
    }

    pub fn alpha(&self) -> Felt {
        self.alpha
    }

    pub fn beta(&self) -> Felt {
        self.beta
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `ord(l1)`, the column height.
    pub fn s(&self) -> usize {
        self.s
    }

    /// `ord(l2)`, the block length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `(l1^i(alpha), l2^i(beta))` for `i < sn`.
    pub fn flat_points(&self) -> Vec<(Felt, Felt)> {
        let mut out = Vec::with_capacity(self.s * self.n);
        let (mut x, mut y) = (self.alpha, self.beta);
        for _ in 0..self.s * self.n {
            out.push((x, y));
            x = self.l1.eval(x);
            y = self.l2.eval(y);
        }
        out
    }

    /// Entry `(i, j)` is `p(l1^{is+j}(alpha), l2^{is+j}(beta))`.
    pub fn encode_direct(&self, msg: &BiPoly) -> Result<Codeword> {
        if msg.bounds() != (self.t, self.k) {
            return Err(Error::bounds(format!(
                "message bounds {:?}, code expects ({}, {})",
                msg.bounds(),
                self.t,
                self.k
            )));
        }
        let flat = self
            .flat_points()
            .into_iter()
            .map(|(x, y)| msg.eval(x, y))
            .collect::<Result<Vec<_>>>()?;
        Codeword::new(flat.chunks(self.s).map(<[Felt]>::to_vec).collect())
    }

    /// The same code as a B-LELO instance: `L = (L^0, ..., L^{s-1})` with
    /// `L(p) = p(l1(X), l2(Y))` at the points `(alpha, l2^{is}(beta))`.
    pub fn to_blelo(&self) -> Result<BloInstance> {
        let fam = power_family(self.l1, self.l2, self.s)?;
        let step = self.l2.iterate(self.s as u64);
        let mut y = self.beta;
        let mut points = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            points.push((self.alpha, y));
            y = step.eval(y);
        }
        BloInstance::with_origin(
            fam,
            points,
            self.t,
            self.k,
            InstanceOrigin::Ppc(self.clone()),
        )
    }
}

/// Parameters of a folded Reed-Solomon code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrsParams {
    gamma: Felt,
    s: usize,
    k: usize,
    points: Vec<Felt>,
}

impl FrsParams {
    pub fn new(gamma: Felt, s: usize, k: usize, points: Vec<Felt>) -> Result<Self> {
        let field = gamma.field();
        if let Some(p) = points.iter().find(|p| p.field() != field) {
            return Err(Error::FieldMismatch {
                left: field.modulus(),
                right: p.field().modulus(),
            });
        }
        if s == 0 || k == 0 || points.is_empty() {
            return Err(Error::invalid("FRS needs s, k >= 1 and at least one point"));
        }
        if gamma.is_zero() || gamma.pow(s as u64 - 1).is_one() {
            return Err(Error::invalid("FRS needs gamma != 0 and gamma^(s-1) != 1"));
        }
        let n = points.len();
        if (s * n) as u64 > field.size() || k > s * n {
            return Err(Error::invalid(format!(
                "FRS needs sn <= q and k <= sn (s = {s}, n = {n}, k = {k})"
            )));
        }
        let mut seen = HashSet::new();
        for &a in &points {
            let coset: HashSet<Felt> = (0..s as u64).map(|j| a * gamma.pow(j)).collect();
            if coset.iter().any(|c| seen.contains(c)) {
                return Err(Error::invalid(format!(
                    "coset of {a} meets an earlier coset"
                )));
            }
            seen.extend(coset);
        }
        Ok(FrsParams {
            gamma,
            s,
            k,
            points,
        })
    }

    pub fn gamma(&self) -> Felt {
        self.gamma
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[Felt] {
        &self.points
    }

    /// Column `i` is `(p(a_i), p(a_i γ), ..., p(a_i γ^{s-1}))`; the message
    /// has bounds `(k, 1)`.
    pub fn encode_direct(&self, msg: &BiPoly) -> Result<Codeword> {
        if msg.bounds() != (self.k, 1) {
            return Err(Error::bounds(format!(
                "FRS message bounds {:?}, expected ({}, 1)",
                msg.bounds(),
                self.k
            )));
        }
        let zero = self.gamma.field().zero();
        let columns = self
            .points
            .iter()
            .map(|&a| {
                (0..self.s as u64)
                    .map(|j| msg.eval(a * self.gamma.pow(j), zero))
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        Codeword::new(columns)
    }

    /// `B-LELO_{k,1}` with `L_i(p) = p(γ^i X, 0)` at the points `(a, 0)`;
    /// witness `M_x = diag(γ^i X)`, `M_y = 0`.
    pub fn as_blo(&self) -> Result<BloInstance> {
        let field = self.gamma.field();
        let mut ops = Vec::with_capacity(self.s);
        let mut mx = Vec::with_capacity(self.s);
        for i in 0..self.s as u64 {
            let lx = AffineMap::new(self.gamma.pow(i), field.zero())?;
            ops.push(LinOp::Lifted { lx });
            mx.push(lx.as_poly_x(2, 1));
        }
        let witness = ExtendibilityWitness::new(
            PolyMatrix::diagonal(field, mx)?,
            PolyMatrix::zeros(field, self.s, self.s),
        )?;
        let fam = OperatorFamily::new(ops, Some(witness))?;
        let points = self.points.iter().map(|&a| (a, field.zero())).collect();
        BloInstance::with_origin(fam, points, self.k, 1, InstanceOrigin::Frs(self.clone()))
    }
}

/// The row-RS bound on the distance of `B-LELO^A_{d1,d2}(T)` for
/// `T = (L^0, ..., L^{r-1})` of a PPC instance: `n - d2` columns.
pub fn tcode_distance_ppc(inst: &BloInstance, r: usize, d1: usize, d2: usize) -> Result<usize> {
    let InstanceOrigin::Ppc(params) = inst.origin() else {
        return Err(Error::invalid("T-code bound only applies to PPC instances"));
    };
    let n = params.n();
    if r == 0 || r > params.s() {
        return Err(Error::invalid(format!(
            "r = {r} must lie in 1..={}",
            params.s()
        )));
    }
    if d1 == 0 || d2 == 0 {
        return Err(Error::invalid("d1, d2 must be positive"));
    }
    if d1 > r {
        return Err(Error::invalid(format!(
            "d1 = {d1} > r = {r}: the row argument fails; supply D externally"
        )));
    }
    if d2 > n {
        return Err(Error::invalid(format!("d2 = {d2} exceeds n = {n}")));
    }
    let x_nodes: HashSet<Felt> = (0..r as u64)
        .map(|j| params.l1().iterate(j).eval(params.alpha()))
        .collect();
    if x_nodes.len() != r {
        return Err(Error::invariant(
            "x-nodes l1^j(alpha), j < r, are not distinct",
        ));
    }
    Ok(n - d2)
}

/// Walks the message space in odometer order (coefficient `v = tk - 1` is
/// the fastest digit), keeping the flat codeword up to date by adding basis
/// codewords. Flat codewords are column-major: entry `(i, j)` at `i * s + j`.
pub(crate) struct MessageWalker {
    modulus: u32,
    basis: Vec<Vec<u32>>,
}

impl MessageWalker {
    pub(crate) fn new(inst: &BloInstance) -> Result<Self> {
        let field = inst.field();
        let (t, k) = (inst.t(), inst.k());
        let basis = (0..t * k)
            .map(|v| {
                let mono = BiPoly::monomial(field, t, k, v / k, v % k)?;
                let cw = inst.encode(&mono)?;
                Ok(cw.columns().iter().flatten().map(|x| x.value()).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MessageWalker {
            modulus: field.modulus(),
            basis,
        })
    }

    pub(crate) fn dims(&self) -> usize {
        self.basis.len()
    }

    pub(crate) fn digits_of(&self, mut index: u128) -> Vec<u32> {
        let q = self.modulus as u128;
        let mut digits = vec![0u32; self.dims()];
        for d in digits.iter_mut().rev() {
            *d = (index % q) as u32;
            index /= q;
        }
        digits
    }

    /// Visits messages `start..end` in index order.
    pub(crate) fn walk(&self, start: u128, end: u128, mut visit: impl FnMut(&[u32], &[u32])) {
        if start >= end {
            return;
        }
        let p = self.modulus as u64;
        let len = self.basis.first().map_or(0, Vec::len);
        let mut digits = self.digits_of(start);
        let mut word = vec![0u32; len];
        for (d, b) in digits.iter().zip(&self.basis) {
            for (w, &x) in word.iter_mut().zip(b) {
                *w = ((*w as u64 + *d as u64 * x as u64) % p) as u32;
            }
        }
        let mut index = start;
        loop {
            visit(&digits, &word);
            index += 1;
            if index == end {
                break;
            }
            for v in (0..digits.len()).rev() {
                for (w, &x) in word.iter_mut().zip(&self.basis[v]) {
                    let s = *w as u64 + x as u64;
                    *w = if s >= p { (s - p) as u32 } else { s as u32 };
                }
                digits[v] += 1;
                if digits[v] == self.modulus {
                    digits[v] = 0;
                } else {
                    break;
                }
            }
        }
    }
}

/// Splits `0..total` into `parts` contiguous ranges.
pub(crate) fn partition(total: u128, parts: usize) -> Vec<(u128, u128)> {
    let parts = (parts.max(1) as u128).min(total.max(1));
    let chunk = total.div_ceil(parts);
    (0..parts)
        .map(|i| (i * chunk, ((i + 1) * chunk).min(total)))
        .filter(|(a, b)| a < b)
        .collect()
}

/// Minimum column weight over nonzero messages, by exhaustion.
pub fn brute_force_min_distance(inst: &BloInstance, cap: u128) -> Result<usize> {
    let total = inst.message_count();
    if total > cap {
        return Err(Error::BudgetExceeded {
            needed: total,
            cap,
            hint: "instance too large for exhaustive distance".into(),
        });
    }
    let walker = MessageWalker::new(inst)?;
    let s = inst.s();
    let parts = rayon::current_num_threads() * 4;
    let best = partition(total, parts)
        .into_par_iter()
        .map(|(a, b)| {
            let mut best = usize::MAX;
            walker.walk(a.max(1), b, |_, word| {
                let w = word.chunks(s).filter(|c| c.iter().any(|&x| x != 0)).count();
                best = best.min(w);
            });
            best
        })
        .min()
        .unwrap_or(usize::MAX);
    Ok(if best == usize::MAX { 0 } else { best })
}
