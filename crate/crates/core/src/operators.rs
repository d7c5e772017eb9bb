//! Linear operator families on bounded-degree bivariate polynomials.
//!
//! Operators act on `F[X, Y]_{<t,<k}`; their matrices use the running index
//! `v(a, b) = a k + b` for both rows and columns. This module also holds the
//! executable checks for list-composition, degree preservation and the
//! `Diag` code used by the decoder.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Felt, Field};
use crate::linalg::Matrix;
use crate::poly::{AffineMap, BiPoly, PolyMatrix};

/// Default cap on `q^w` for [`diag_distance`].
pub const DIAG_ENUMERATION_CAP: u128 = 1 << 24;

/// One `F`-linear operator on bivariate polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinOp {
    /// `p ↦ p(lx(X), ly(Y))`.
    Substitution { lx: AffineMap, ly: AffineMap },
    /// `p ↦ p(lx(X), 0)`: a univariate substitution lifted to two variables.
    Lifted { lx: AffineMap },
    /// An explicit `tk x tk` matrix on coefficient vectors in `v` order.
    Matrix { m: Matrix, t: usize, k: usize },
}

impl LinOp {
    pub fn identity(field: Field) -> LinOp {
        let id = AffineMap::identity(field);
        LinOp::Substitution { lx: id, ly: id }
    }

    pub fn from_matrix(m: Matrix, t: usize, k: usize) -> Result<LinOp> {
        if t == 0 || k == 0 || m.rows() != t * k || m.cols() != t * k {
            return Err(Error::shape(format!(
                "operator matrix must be {0}x{0} for bounds ({t}, {k}), got {1}x{2}",
                t * k,
                m.rows(),
                m.cols()
            )));
        }
        Ok(LinOp::Matrix { m, t, k })
    }

    pub fn field(&self) -> Field {
        match self {
            LinOp::Substitution { lx, .. } | LinOp::Lifted { lx } => lx.field(),
            LinOp::Matrix { m, .. } => m.field(),
        }
    }

    /// The image `L(p)`. Substitutions keep `p`'s bounds; matrix operators
    /// only accept `p` with exactly their `(t, k)` bounds.
    pub fn apply(&self, p: &BiPoly) -> Result<BiPoly> {
        match self {
            LinOp::Substitution { lx, ly } => p.substitute_affine(lx, ly),
            LinOp::Lifted { lx } => {
                let (dx, dy) = p.bounds();
                let mut x_only = BiPoly::zero(p.field(), dx, 1);
                for a in 0..dx {
                    x_only.set_coeff(a, 0, p.coeff(a, 0))?;
                }
                x_only
                    .substitute_affine(lx, &AffineMap::identity(p.field()))?
                    .resized(dx, dy)
            }
            LinOp::Matrix { m, t, k } => {
                if p.bounds() != (*t, *k) {
                    return Err(Error::bounds(format!(
                        "matrix operator on ({t}, {k}) applied to polynomial with bounds {:?}",
                        p.bounds()
                    )));
                }
                let image = m.mul_vec(p.coeff_vec())?;
                BiPoly::from_coeff_vec(p.field(), *t, *k, image)
            }
        }
    }

    /// `L(p)(x, y)`. Substitutions are evaluated without forming the image.
    pub fn eval_image(&self, p: &BiPoly, x: Felt, y: Felt) -> Result<Felt> {
        match self {
            LinOp::Substitution { lx, ly } => p.eval(lx.eval(x), ly.eval(y)),
            _ => self.apply(p)?.eval(x, y),
        }
    }

    /// The `tk x tk` matrix of the operator on `F[X, Y]_{<t,<k}`: entry
    /// `(v(a, b), v(a', b'))` is the coefficient of `X^a Y^b` in
    /// `L(X^{a'} Y^{b'})`.
    pub fn matrix(&self, t: usize, k: usize) -> Result<Matrix> {
        if let LinOp::Matrix { m, t: mt, k: mk } = self {
            if (*mt, *mk) != (t, k) {
                return Err(Error::bounds(format!(
                    "operator defined on ({mt}, {mk}), requested on ({t}, {k})"
                )));
            }
            return Ok(m.clone());
        }
        let field = self.field();
        let mut out = Matrix::zeros(field, t * k, t * k);
        for a in 0..t {
            for b in 0..k {
                let image = self.apply(&BiPoly::monomial(field, t, k, a, b)?)?;
                for (row, &c) in image.coeff_vec().iter().enumerate() {
                    out[(row, a * k + b)] = c;
                }
            }
        }
        Ok(out)
    }
}

/// Matrices `M_x, M_y` with `L(X p) = M_x L(p)` and `L(Y p) = M_y L(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendibilityWitness {
    pub mx: PolyMatrix,
    pub my: PolyMatrix,
}

impl ExtendibilityWitness {
    pub fn new(mx: PolyMatrix, my: PolyMatrix) -> Result<Self> {
        let s = mx.rows();
        if mx.cols() != s || my.rows() != s || my.cols() != s {
            return Err(Error::shape(
                "witness matrices must be square of equal size",
            ));
        }
        Ok(ExtendibilityWitness { mx, my })
    }

    pub fn size(&self) -> usize {
        self.mx.rows()
    }

    pub fn leading_block(&self, r: usize) -> Result<Self> {
        Ok(ExtendibilityWitness {
            mx: self.mx.leading_block(r)?,
            my: self.my.leading_block(r)?,
        })
    }
}

/// An ordered family `(L_0, ..., L_{s-1})`, optionally linearly extendible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorFamily {
    field: Field,
    ops: Vec<LinOp>,
    witness: Option<ExtendibilityWitness>,
}

impl OperatorFamily {
    pub fn new(ops: Vec<LinOp>, witness: Option<ExtendibilityWitness>) -> Result<Self> {
        let Some(first) = ops.first() else {
            return Err(Error::invalid("operator family must be nonempty"));
        };
        let field = first.field();
        if let Some(op) = ops.iter().find(|op| op.field() != field) {
            return Err(Error::FieldMismatch {
                left: field.modulus(),
                right: op.field().modulus(),
            });
        }
        let matrix_bounds: Vec<(usize, usize)> = ops
            .iter()
            .filter_map(|op| match op {
                LinOp::Matrix { t, k, .. } => Some((*t, *k)),
                _ => None,
            })
            .collect();
        if matrix_bounds.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::shape("matrix operators disagree on (t, k)"));
        }
        if let Some(w) = &witness {
            if w.size() != ops.len() || w.mx.field() != field || w.my.field() != field {
                return Err(Error::shape(format!(
                    "witness of size {} for a family of {} operators",
                    w.size(),
                    ops.len()
                )));
            }
        }
        Ok(OperatorFamily {
            field,
            ops,
            witness,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn ops(&self) -> &[LinOp] {
        &self.ops
    }

    pub fn witness(&self) -> Option<&ExtendibilityWitness> {
        self.witness.as_ref()
    }

    /// Whether every operator is a plain substitution.
    pub fn is_substitution_family(&self) -> bool {
        self.ops
            .iter()
            .all(|op| matches!(op, LinOp::Substitution { .. }))
    }

    /// The first `r` operators; the witness is cut to its leading block.
    pub fn prefix(&self, r: usize) -> Result<OperatorFamily> {
        if r == 0 || r > self.len() {
            return Err(Error::invalid(format!(
                "prefix of length {r} of a family of {}",
                self.len()
            )));
        }
        let witness = match &self.witness {
            Some(w) => Some(w.leading_block(r)?),
            None => None,
        };
        OperatorFamily::new(self.ops[..r].to_vec(), witness)
    }

    /// `L(p) = (L_0(p), ..., L_{s-1}(p))`.
    pub fn apply(&self, p: &BiPoly) -> Result<Vec<BiPoly>> {
        self.ops.iter().map(|op| op.apply(p)).collect()
    }

    /// `L(p)(x, y) ∈ F^s`.
    pub fn eval_at(&self, p: &BiPoly, x: Felt, y: Felt) -> Result<Vec<Felt>> {
        self.ops.iter().map(|op| op.eval_image(p, x, y)).collect()
    }

    pub fn matrices(&self, t: usize, k: usize) -> Result<Vec<Matrix>> {
        self.ops.iter().map(|op| op.matrix(t, k)).collect()
    }
}

/// `(L^0, ..., L^{s-1})` for `L(p) = p(lx(X), ly(Y))`, with the diagonal
/// witness `M_x = diag(lx^i(X))`, `M_y = diag(ly^i(Y))`.
pub fn power_family(lx: AffineMap, ly: AffineMap, s: usize) -> Result<OperatorFamily> {
    if s == 0 {
        return Err(Error::invalid("power family needs s >= 1"));
    }
    if lx.field() != ly.field() {
        return Err(Error::FieldMismatch {
            left: lx.field().modulus(),
            right: ly.field().modulus(),
        });
    }
    let field = lx.field();
    let mut ops = Vec::with_capacity(s);
    let mut mx = Vec::with_capacity(s);
    let mut my = Vec::with_capacity(s);
    for i in 0..s as u64 {
        let (li_x, li_y) = (lx.iterate(i), ly.iterate(i));
        ops.push(LinOp::Substitution { lx: li_x, ly: li_y });
        mx.push(li_x.as_poly_x(2, 2));
        my.push(li_y.as_poly_y(2, 2));
    }
    let witness = ExtendibilityWitness::new(
        PolyMatrix::diagonal(field, mx)?,
        PolyMatrix::diagonal(field, my)?,
    )?;
    OperatorFamily::new(ops, Some(witness))
}

fn monomials(t: usize, k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..t).flat_map(move |a| (0..k).map(move |b| (a, b)))
}

fn same_vec(a: &[BiPoly], b: &[BiPoly]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_poly(y))
}

/// Checks `L(X p) = M_x L(p)` and `L(Y p) = M_y L(p)` as polynomial identities
/// on every monomial `p` whose product stays inside `F[X, Y]_{<t,<k}`.
pub fn verify_extendibility(fam: &OperatorFamily, t: usize, k: usize) -> Result<bool> {
    let w = fam.witness().ok_or(Error::MissingWitness)?;
    let field = fam.field();
    for (a, b) in monomials(t, k) {
        let p = BiPoly::monomial(field, t, k, a, b)?;
        let image = fam.apply(&p)?;
        if a + 1 < t {
            let xp = BiPoly::monomial(field, t, k, a + 1, b)?;
            if !same_vec(&fam.apply(&xp)?, &w.mx.apply(&image)?) {
                return Ok(false);
            }
        }
        if b + 1 < k {
            let yp = BiPoly::monomial(field, t, k, a, b + 1)?;
            if !same_vec(&fam.apply(&yp)?, &w.my.apply(&image)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Rebuilds every operator as a matrix from `L(1)` and the witness through
/// `L(X^a Y^b) = M_x^a M_y^b L(1)`.
///
/// `M_x` and `M_y` need only commute on the span of the images `L(p)`; that
/// is checked on all monomials and reported as an error otherwise.
pub fn family_from_one(fam: &OperatorFamily, t: usize, k: usize) -> Result<OperatorFamily> {
    let w = fam.witness().ok_or(Error::MissingWitness)?;
    let field = fam.field();
    let trim = |v: Vec<BiPoly>| -> Vec<BiPoly> { v.iter().map(BiPoly::trimmed).collect() };

    for (a, b) in monomials(t, k) {
        let image = trim(fam.apply(&BiPoly::monomial(field, t, k, a, b)?)?);
        let xy = w.mx.apply(&trim(w.my.apply(&image)?))?;
        let yx = w.my.apply(&trim(w.mx.apply(&image)?))?;
        if !same_vec(&xy, &yx) {
            return Err(Error::invalid(format!(
                "witness matrices do not commute on L(X^{a}Y^{b})"
            )));
        }
    }

    let s = fam.len();
    let mut mats = vec![Matrix::zeros(field, t * k, t * k); s];
    let mut y_power = trim(fam.apply(&BiPoly::constant(field.one(), t, k))?);
    for b in 0..k {
        let mut cur = y_power.clone();
        for a in 0..t {
            for (i, poly) in cur.iter().enumerate() {
                let fitted = poly.resized(t, k).map_err(|_| {
                    Error::invalid(format!(
                        "M_x^{a} M_y^{b} L(1) leaves the bounded space in component {i}"
                    ))
                })?;
                for (row, &c) in fitted.coeff_vec().iter().enumerate() {
                    mats[i][(row, a * k + b)] = c;
                }
            }
            cur = trim(w.mx.apply(&cur)?);
        }
        y_power = trim(w.my.apply(&y_power)?);
    }
    let ops = mats
        .into_iter()
        .map(|m| LinOp::from_matrix(m, t, k))
        .collect::<Result<Vec<_>>>()?;
    OperatorFamily::new(ops, fam.witness.clone())
}

/// `Diag(G)`: row `j` is the diagonal of `G_j`'s `tk x tk` matrix in `v` order.
pub fn diag(fam: &OperatorFamily, t: usize, k: usize) -> Result<Matrix> {
    let mats = fam.matrices(t, k)?;
    Ok(Matrix::from_fn(fam.field(), fam.len(), t * k, |j, v| {
        mats[j][(v, v)]
    }))
}

/// Minimum Hamming weight of `u D` over nonzero `u`, by enumerating all of
/// `F^w`. Returns 0 when the row space is trivial.
pub fn diag_distance(d: &Matrix, cap: u128) -> Result<usize> {
    let field = d.field();
    let q = field.size() as u128;
    let total = q.checked_pow(d.rows() as u32).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::BudgetExceeded {
            needed: total,
            cap,
            hint: "supply the Diag distance externally".into(),
        });
    }
    let mut u = vec![field.zero(); d.rows()];
    let mut best: Option<usize> = None;
    loop {
        // odometer increment; stop after wrapping back to zero
        let mut carry = true;
        for x in u.iter_mut() {
            *x += field.one();
            if !x.is_zero() {
                carry = false;
                break;
            }
        }
        if carry {
            break;
        }
        let weight = (0..d.cols())
            .filter(|&c| {
                !u.iter()
                    .enumerate()
                    .fold(field.zero(), |acc, (r, &ur)| acc + ur * d[(r, c)])
                    .is_zero()
            })
            .count();
        if weight > 0 {
            best = Some(best.map_or(weight, |b| b.min(weight)));
        }
    }
    Ok(best.unwrap_or(0))
}

/// Whether every operator maps `X^a Y^b` to a polynomial of `X`-degree
/// exactly `a` and `Y`-degree exactly `b`, for all `a < t`, `b < k`.
pub fn check_degree_preserving(fam: &OperatorFamily, t: usize, k: usize) -> Result<bool> {
    let field = fam.field();
    for op in fam.ops() {
        let m = op.matrix(t, k)?;
        for (a, b) in monomials(t, k) {
            let image = BiPoly::from_coeff_vec(field, t, k, m.column(a * k + b))?;
            if image.deg_x() != Some(a) || image.deg_y() != Some(b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The `r x s` selection matrix with a 1 at `(j, i + j)`.
pub fn selection_h(field: Field, i: usize, r: usize, s: usize) -> Result<Matrix> {
    if i + r > s {
        return Err(Error::invalid(format!(
            "selection offset {i} with r = {r} exceeds family size {s}"
        )));
    }
    Ok(Matrix::from_fn(field, r, s, |j, c| {
        if c == i + j {
            field.one()
        } else {
            field.zero()
        }
    }))
}

/// The linear maps `h_{G_i, (x, y)}: F^s -> F^r`, one per operator of `G`
/// and, when they vary, per evaluation point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HTable {
    PointIndependent(Vec<Matrix>),
    PerPoint(Vec<Vec<Matrix>>),
}

impl HTable {
    /// Selection matrices `h_i = [0 | I_r | 0]` at offset `i` for `i < w`.
    pub fn selection(field: Field, w: usize, r: usize, s: usize) -> Result<HTable> {
        (0..w)
            .map(|i| selection_h(field, i, r, s))
            .collect::<Result<Vec<_>>>()
            .map(HTable::PointIndependent)
    }

    pub fn get(&self, op: usize, point: usize) -> &Matrix {
        match self {
            HTable::PointIndependent(ms) => &ms[op],
            HTable::PerPoint(ms) => &ms[op][point],
        }
    }

    pub fn num_ops(&self) -> usize {
        match self {
            HTable::PointIndependent(ms) => ms.len(),
            HTable::PerPoint(ms) => ms.len(),
        }
    }

    fn check_shape(&self, w: usize, points: usize, r: usize, s: usize) -> Result<()> {
        if self.num_ops() != w {
            return Err(Error::shape(format!(
                "h table has {} entries for |G| = {w}",
                self.num_ops()
            )));
        }
        let all: Vec<&Matrix> = match self {
            HTable::PointIndependent(ms) => ms.iter().collect(),
            HTable::PerPoint(ms) => {
                if ms.iter().any(|per| per.len() != points) {
                    return Err(Error::shape("h table needs one map per evaluation point"));
                }
                ms.iter().flatten().collect()
            }
        };
        if all.iter().any(|m| (m.rows(), m.cols()) != (r, s)) {
            return Err(Error::shape(format!("h maps must be {r}x{s}")));
        }
        Ok(())
    }
}

/// Checks `T(G_i(p))(x, y) = h_{G_i,(x,y)} L(p)(x, y)` for every monomial `p`
/// of `F[X, Y]_{<t,<k}`, every `G_i` and every point.
pub fn verify_list_composition(
    t_fam: &OperatorFamily,
    g_fam: &OperatorFamily,
    l_fam: &OperatorFamily,
    points: &[(Felt, Felt)],
    h: &HTable,
    t: usize,
    k: usize,
) -> Result<bool> {
    h.check_shape(g_fam.len(), points.len(), t_fam.len(), l_fam.len())?;
    let field = l_fam.field();
    for (a, b) in monomials(t, k) {
        let p = BiPoly::monomial(field, t, k, a, b)?;
        let g_images = g_fam.apply(&p)?;
        for (pi, &(x, y)) in points.iter().enumerate() {
            let lp = l_fam.eval_at(&p, x, y)?;
            for (i, gp) in g_images.iter().enumerate() {
                let lhs = t_fam.eval_at(gp, x, y)?;
                let rhs = h.get(i, pi).mul_vec(&lp)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Outcome of [`ideal_closure_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub holds: bool,
    /// The annihilator at the point is `{0}` inside the sampled space.
    pub vacuous: bool,
    pub trials: usize,
}

/// Samples `p` with `L(p)(x, y) = 0` (bounds `p_bounds`) and random `m`
/// (bounds `m_bounds`) and checks `L(m p)(x, y) = 0`.
pub fn ideal_closure_check(
    fam: &OperatorFamily,
    point: (Felt, Felt),
    p_bounds: (usize, usize),
    m_bounds: (usize, usize),
    trials: usize,
    seed: u64,
) -> Result<ClosureReport> {
    fam.witness().ok_or(Error::MissingWitness)?;
    let field = fam.field();
    let (t, k) = p_bounds;
    let (x, y) = point;
    let mut cond = Matrix::zeros(field, fam.len(), t * k);
    for (a, b) in monomials(t, k) {
        let vals = fam.eval_at(&BiPoly::monomial(field, t, k, a, b)?, x, y)?;
        for (i, v) in vals.into_iter().enumerate() {
            cond[(i, a * k + b)] = v;
        }
    }
    let basis = cond.kernel_basis();
    if basis.is_empty() {
        return Ok(ClosureReport {
            holds: true,
            vacuous: true,
            trials: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = field.size();
    for _ in 0..trials {
        let mut coeffs = vec![field.zero(); t * k];
        for vec in &basis {
            let c = field.elem(rng.gen_range(0..q));
            for (acc, &e) in coeffs.iter_mut().zip(vec) {
                *acc += c * e;
            }
        }
        let p = BiPoly::from_coeff_vec(field, t, k, coeffs)?;
        let m_coeffs = (0..m_bounds.0 * m_bounds.1)
            .map(|_| field.elem(rng.gen_range(0..q)))
            .collect();
        let m = BiPoly::from_coeff_vec(field, m_bounds.0, m_bounds.1, m_coeffs)?;
        if fam.eval_at(&m.mul(&p)?, x, y)?.iter().any(|v| !v.is_zero()) {
            return Ok(ClosureReport {
                holds: false,
                vacuous: false,
                trials,
            });
        }
    }
    Ok(ClosureReport {
        holds: true,
        vacuous: false,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> Field {
        Field::new(p).unwrap()
    }

    fn affine(f: Field, a: u64, b: u64) -> AffineMap {
        AffineMap::new(f.elem(a), f.elem(b)).unwrap()
    }

    fn rows(m: &Matrix) -> Vec<Vec<u32>> {
        m.to_rows()
    }

    #[test]
    fn apply_examples() {
        let f = field(7);
        let p = BiPoly::from_grid(f, &[vec![1, 2], vec![3, 4]]).unwrap();
        let id = LinOp::from_matrix(Matrix::identity(f, 4), 2, 2).unwrap();
        assert_eq!(id.apply(&p).unwrap(), p);
        let zero = LinOp::from_matrix(Matrix::zeros(f, 4, 4), 2, 2).unwrap();
        assert!(zero.apply(&p).unwrap().is_zero());
        let xy = BiPoly::monomial(f, 2, 2, 1, 1).unwrap();
        let sub = LinOp::Substitution {
            lx: affine(f, 2, 0),
            ly: affine(f, 3, 0),
        };
        assert_eq!(sub.apply(&xy).unwrap().coeff(1, 1), f.elem(6));
        assert!(id.apply(&BiPoly::zero(f, 3, 2)).is_err());
    }

    #[test]
    fn operator_matrix_examples() {
        let f = field(7);
        assert_eq!(
            LinOp::identity(f).matrix(2, 3).unwrap(),
            Matrix::identity(f, 6)
        );

        let scale = LinOp::Substitution {
            lx: affine(f, 3, 0),
            ly: affine(f, 3, 0),
        };
        let m = scale.matrix(2, 2).unwrap();
        let diag: Vec<u32> = (0..4).map(|i| m[(i, i)].value()).collect();
        assert_eq!(diag, vec![1, 3, 3, 2]);
        assert!((0..4).all(|i| (0..4).all(|j| i == j || m[(i, j)].is_zero())));

        let shift = LinOp::Substitution {
            lx: affine(f, 1, 1),
            ly: AffineMap::identity(f),
        };
        let m = shift.matrix(2, 1).unwrap();
        assert_eq!(rows(&m), vec![vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn power_family_examples() {
        let f = field(7);
        let fam = power_family(affine(f, 1, 1), affine(f, 3, 0), 3).unwrap();
        assert_eq!(
            fam.ops()[2],
            LinOp::Substitution {
                lx: affine(f, 1, 2),
                ly: affine(f, 2, 0)
            }
        );

        let single = power_family(affine(f, 1, 1), affine(f, 3, 0), 1).unwrap();
        assert_eq!(single.ops()[0], LinOp::identity(f));
        let w = single.witness().unwrap();
        assert!(w
            .mx
            .get(0, 0)
            .same_poly(&BiPoly::monomial(f, 2, 1, 1, 0).unwrap()));
        assert!(w
            .my
            .get(0, 0)
            .same_poly(&BiPoly::monomial(f, 1, 2, 0, 1).unwrap()));

        let f61 = field(61);
        let fam = power_family(affine(f61, 9, 0), affine(f61, 32, 0), 5).unwrap();
        let mx = fam.witness().unwrap().mx.clone();
        let lead: Vec<u32> = (0..5).map(|i| mx.get(i, i).coeff(1, 0).value()).collect();
        // powers of 9 mod 61
        assert_eq!(lead, vec![1, 9, 20, 58, 34]);
        assert!(power_family(affine(f, 1, 1), affine(f, 3, 0), 0).is_err());
    }

    #[test]
    fn extendibility_examples() {
        let f = field(7);
        let fam = power_family(affine(f, 1, 1), affine(f, 3, 2), 4).unwrap();
        assert!(verify_extendibility(&fam, 3, 3).unwrap());

        let id = power_family(affine(f, 1, 1), affine(f, 3, 0), 1).unwrap();
        assert!(verify_extendibility(&id, 3, 3).unwrap());

        let w = fam.witness().unwrap();
        let mut entries = w.mx.entries().to_vec();
        entries[0] = BiPoly::zero(f, 1, 1);
        let broken_mx = PolyMatrix::new(f, 4, 4, entries).unwrap();
        let broken = OperatorFamily::new(
            fam.ops().to_vec(),
            Some(ExtendibilityWitness::new(broken_mx, w.my.clone()).unwrap()),
        )
        .unwrap();
        assert!(!verify_extendibility(&broken, 2, 1).unwrap());

        let bare = OperatorFamily::new(fam.ops().to_vec(), None).unwrap();
        assert_eq!(
            verify_extendibility(&bare, 2, 2),
            Err(Error::MissingWitness)
        );
    }

    #[test]
    fn family_from_one_examples() {
        let f = field(7);
        for (lx, ly, s) in [
            (affine(f, 2, 0), affine(f, 3, 0), 2),
            (affine(f, 1, 1), AffineMap::identity(f), 2),
            (AffineMap::identity(f), AffineMap::identity(f), 1),
        ] {
            let fam = power_family(lx, ly, s).unwrap();
            let rebuilt = family_from_one(&fam, 2, 2).unwrap();
            assert_eq!(rebuilt.matrices(2, 2).unwrap(), fam.matrices(2, 2).unwrap());
        }
    }

    #[test]
    fn family_from_one_rejects_noncommuting_witness() {
        let f = field(7);
        let id = LinOp::identity(f);
        let x = BiPoly::monomial(f, 2, 1, 1, 0).unwrap();
        let y = BiPoly::monomial(f, 1, 2, 0, 1).unwrap();
        let zero = BiPoly::zero(f, 1, 1);
        // M_x = [[X, 0], [0, X]], M_y = [[0, Y], [Y, 0]] swapped with a shear
        let one = BiPoly::constant(f.one(), 1, 1);
        let mx = PolyMatrix::new(f, 2, 2, vec![x.clone(), one, zero.clone(), x]).unwrap();
        let my = PolyMatrix::new(f, 2, 2, vec![y.clone(), zero.clone(), y, zero]).unwrap();
        let fam = OperatorFamily::new(
            vec![id.clone(), id],
            Some(ExtendibilityWitness::new(mx, my).unwrap()),
        )
        .unwrap();
        assert!(family_from_one(&fam, 2, 2).is_err());
    }

    #[test]
    fn diag_examples() {
        let f61 = field(61);
        let fam = power_family(affine(f61, 9, 0), affine(f61, 32, 0), 5).unwrap();
        let g = fam.prefix(3).unwrap();
        let d = diag(&g, 1, 3).unwrap();
        assert_eq!(
            rows(&d),
            vec![vec![1, 1, 1], vec![1, 32, 48], vec![1, 48, 47]]
        );
        assert_eq!(diag_distance(&d, DIAG_ENUMERATION_CAP).unwrap(), 1);

        let f7 = field(7);
        let id = power_family(affine(f7, 1, 1), affine(f7, 3, 0), 1).unwrap();
        let d = diag(&id, 1, 3).unwrap();
        assert_eq!(rows(&d), vec![vec![1, 1, 1]]);
        assert_eq!(diag_distance(&d, DIAG_ENUMERATION_CAP).unwrap(), 3);
    }

    #[test]
    fn diag_distance_edge_cases() {
        let f = field(7);
        assert_eq!(diag_distance(&Matrix::zeros(f, 2, 3), 1 << 10).unwrap(), 0);
        let big = Matrix::zeros(field(61), 5, 2);
        assert!(matches!(
            diag_distance(&big, DIAG_ENUMERATION_CAP),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn degree_preservation() {
        let f = field(7);
        let fam = power_family(affine(f, 1, 1), affine(f, 3, 5), 3).unwrap();
        assert!(check_degree_preserving(&fam, 3, 2).unwrap());
        let id = OperatorFamily::new(vec![LinOp::identity(f)], None).unwrap();
        assert!(check_degree_preserving(&id, 2, 2).unwrap());
        // X ↦ 1 drops the X-degree
        let mut m = Matrix::zeros(f, 2, 2);
        m[(0, 1)] = f.one();
        let deriv = OperatorFamily::new(vec![LinOp::from_matrix(m, 2, 1).unwrap()], None).unwrap();
        assert!(!check_degree_preserving(&deriv, 2, 1).unwrap());
    }

    #[test]
    fn selection_examples() {
        let f = field(7);
        assert_eq!(
            rows(&selection_h(f, 0, 2, 4).unwrap()),
            vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]
        );
        assert_eq!(
            rows(&selection_h(f, 1, 2, 4).unwrap()),
            vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0]]
        );
        assert_eq!(
            rows(&selection_h(f, 2, 2, 4).unwrap()),
            vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]]
        );
        assert!(selection_h(f, 3, 2, 4).is_err());
    }

    #[test]
    fn list_composition_examples() {
        let f = field(7);
        let (s, w) = (5, 3);
        let r = s - w + 1;
        let l = power_family(affine(f, 1, 1), affine(f, 3, 0), s).unwrap();
        let t_fam = l.prefix(r).unwrap();
        let g_fam = l.prefix(w).unwrap();
        let points: Vec<_> = (0..4).map(|i| (f.zero(), f.elem(3).pow(i))).collect();
        let h = HTable::selection(f, w, r, s).unwrap();
        assert!(verify_list_composition(&t_fam, &g_fam, &l, &points, &h, 2, 2).unwrap());

        let g_id = l.prefix(1).unwrap();
        let h_id = HTable::PointIndependent(vec![Matrix::identity(f, s)]);
        assert!(verify_list_composition(&l, &g_id, &l, &points, &h_id, 2, 2).unwrap());

        let h_zero = HTable::PointIndependent(vec![Matrix::zeros(f, r, s); w]);
        assert!(!verify_list_composition(&t_fam, &g_fam, &l, &points, &h_zero, 2, 2).unwrap());

        let h_bad = HTable::PointIndependent(vec![Matrix::zeros(f, r, s); w + 1]);
        assert!(verify_list_composition(&t_fam, &g_fam, &l, &points, &h_bad, 2, 2).is_err());
    }

    #[test]
    fn ideal_closure_examples() {
        let f = field(7);
        let fam = power_family(affine(f, 1, 1), affine(f, 3, 0), 3).unwrap();
        let report =
            ideal_closure_check(&fam, (f.zero(), f.one()), (3, 3), (2, 2), 100, 1).unwrap();
        assert!(report.holds && !report.vacuous);

        // L(1) never vanishes, so with constants only the annihilator is {0}
        let report = ideal_closure_check(&fam, (f.zero(), f.one()), (1, 1), (2, 2), 10, 1).unwrap();
        assert!(report.holds && report.vacuous);
    }
}
