//! Bivariate polynomials with explicit degree bounds, affine maps, and
//! matrices of polynomials.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Felt, Field};
use crate::linalg::Matrix;

/// A polynomial in `F[X, Y]` with `deg_X < dx_bound` and `deg_Y < dy_bound`.
///
/// Coefficients live in a dense `dx_bound x dy_bound` grid; the coefficient of
/// `X^a Y^b` is at flat index `a * dy_bound + b`, which is the running index
/// `v(a, b) = a k + b` when the bounds are `(t, k)`. The bounds are part of
/// the value: two polynomials with different bounds compare unequal under
/// `==` even when they are the same polynomial (see [`BiPoly::same_poly`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiPoly {
    field: Field,
    dx: usize,
    dy: usize,
    coeffs: Vec<Felt>,
}

impl BiPoly {
    pub fn zero(field: Field, dx: usize, dy: usize) -> Self {
        assert!(dx >= 1 && dy >= 1, "degree bounds must be positive");
        BiPoly {
            field,
            dx,
            dy,
            coeffs: vec![field.zero(); dx * dy],
        }
    }

    pub fn constant(c: Felt, dx: usize, dy: usize) -> Self {
        let mut p = BiPoly::zero(c.field(), dx, dy);
        p.coeffs[0] = c;
        p
    }

    /// `X^a Y^b` inside the bounds `(dx, dy)`.
    pub fn monomial(field: Field, dx: usize, dy: usize, a: usize, b: usize) -> Result<Self> {
        if a >= dx || b >= dy {
            return Err(Error::bounds(format!(
                "monomial X^{a}Y^{b} outside bounds ({dx}, {dy})"
            )));
        }
        let mut p = BiPoly::zero(field, dx, dy);
        p.coeffs[a * dy + b] = field.one();
        Ok(p)
    }

    /// From a grid `rows[a][b]` = coefficient of `X^a Y^b`.
    pub fn from_grid(field: Field, rows: &[Vec<u64>]) -> Result<Self> {
        let dx = rows.len();
        let dy = rows.first().map_or(0, Vec::len);
        if dx == 0 || dy == 0 || rows.iter().any(|r| r.len() != dy) {
            return Err(Error::shape(
                "coefficient grid must be a nonempty rectangle",
            ));
        }
        Ok(BiPoly {
            field,
            dx,
            dy,
            coeffs: rows.iter().flatten().map(|&c| field.elem(c)).collect(),
        })
    }

    /// From a coefficient vector in running-index order.
    pub fn from_coeff_vec(field: Field, dx: usize, dy: usize, coeffs: Vec<Felt>) -> Result<Self> {
        if dx == 0 || dy == 0 || coeffs.len() != dx * dy {
            return Err(Error::shape(format!(
                "{} coefficients for bounds ({dx}, {dy})",
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch {
                left: field.modulus(),
                right: c.field().modulus(),
            });
        }
        Ok(BiPoly {
            field,
            dx,
            dy,
            coeffs,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// `(dx_bound, dy_bound)`.
    pub fn bounds(&self) -> (usize, usize) {
        (self.dx, self.dy)
    }

    pub fn coeff(&self, a: usize, b: usize) -> Felt {
        if a < self.dx && b < self.dy {
            self.coeffs[a * self.dy + b]
        } else {
            self.field.zero()
        }
    }

    pub fn set_coeff(&mut self, a: usize, b: usize, c: Felt) -> Result<()> {
        if a >= self.dx || b >= self.dy {
            return Err(Error::bounds(format!(
                "X^{a}Y^{b} outside bounds ({}, {})",
                self.dx, self.dy
            )));
        }
        self.coeffs[a * self.dy + b] = c;
        Ok(())
    }

    /// Coefficients in running-index order `v(a, b) = a * dy_bound + b`.
    pub fn coeff_vec(&self) -> &[Felt] {
        &self.coeffs
    }

    pub fn to_grid(&self) -> Vec<Vec<u32>> {
        self.coeffs
            .chunks(self.dy)
            .map(|row| row.iter().map(|c| c.value()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Degree in `X`, `None` for the zero polynomial.
    pub fn deg_x(&self) -> Option<usize> {
        (0..self.dx)
            .rev()
            .find(|&a| (0..self.dy).any(|b| !self.coeff(a, b).is_zero()))
    }

    /// Degree in `Y`, `None` for the zero polynomial.
    pub fn deg_y(&self) -> Option<usize> {
        (0..self.dy)
            .rev()
            .find(|&b| (0..self.dx).any(|a| !self.coeff(a, b).is_zero()))
    }

    /// Degree in `Y` of the coefficient of `X^a`.
    pub fn deg_y_of_x_coeff(&self, a: usize) -> Option<usize> {
        if a >= self.dx {
            return None;
        }
        (0..self.dy).rev().find(|&b| !self.coeff(a, b).is_zero())
    }

    /// Nested Horner evaluation.
    pub fn eval(&self, x: Felt, y: Felt) -> Result<Felt> {
        self.check_elem(x)?;
        self.check_elem(y)?;
        Ok(self.eval_unchecked(x, y))
    }

    pub(crate) fn eval_unchecked(&self, x: Felt, y: Felt) -> Felt {
        let mut acc = self.field.zero();
        for row in self.coeffs.chunks(self.dy).rev() {
            let inner = row.iter().rev().fold(self.field.zero(), |s, &c| s * y + c);
            acc = acc * x + inner;
        }
        acc
    }

    /// Sum; the result has the componentwise maximum of the bounds.
    pub fn add(&self, rhs: &BiPoly) -> Result<BiPoly> {
        self.check_poly(rhs)?;
        let dx = self.dx.max(rhs.dx);
        let dy = self.dy.max(rhs.dy);
        let mut out = BiPoly::zero(self.field, dx, dy);
        for a in 0..dx {
            for b in 0..dy {
                out.coeffs[a * dy + b] = self.coeff(a, b) + rhs.coeff(a, b);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &BiPoly) -> Result<BiPoly> {
        self.add(&rhs.scale(-rhs.field.one()))
    }

    pub fn scale(&self, c: Felt) -> BiPoly {
        assert_eq!(c.field(), self.field, "field mismatch");
        BiPoly {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
            ..self.clone()
        }
    }

    /// Full product with bounds `(dx_p + dx_q - 1, dy_p + dy_q - 1)`.
    pub fn mul(&self, rhs: &BiPoly) -> Result<BiPoly> {
        self.check_poly(rhs)?;
        let dx = self.dx + rhs.dx - 1;
        let dy = self.dy + rhs.dy - 1;
        let mut out = BiPoly::zero(self.field, dx, dy);
        for a in 0..self.dx {
            for b in 0..self.dy {
                let c = self.coeffs[a * self.dy + b];
                if c.is_zero() {
                    continue;
                }
                for a2 in 0..rhs.dx {
                    for b2 in 0..rhs.dy {
                        out.coeffs[(a + a2) * dy + b + b2] += c * rhs.coeffs[a2 * rhs.dy + b2];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Changes the bounds, failing if a nonzero coefficient would be dropped.
    pub fn resized(&self, dx: usize, dy: usize) -> Result<BiPoly> {
        if dx == 0 || dy == 0 {
            return Err(Error::bounds("degree bounds must be positive"));
        }
        if self.deg_x().is_some_and(|d| d >= dx) || self.deg_y().is_some_and(|d| d >= dy) {
            return Err(Error::bounds(format!(
                "polynomial with degrees ({:?}, {:?}) does not fit bounds ({dx}, {dy})",
                self.deg_x(),
                self.deg_y()
            )));
        }
        let mut out = BiPoly::zero(self.field, dx, dy);
        for a in 0..dx.min(self.dx) {
            for b in 0..dy.min(self.dy) {
                out.coeffs[a * dy + b] = self.coeff(a, b);
            }
        }
        Ok(out)
    }

    /// The same polynomial with the smallest bounds that hold it.
    pub fn trimmed(&self) -> BiPoly {
        let dx = self.deg_x().map_or(1, |d| d + 1);
        let dy = self.deg_y().map_or(1, |d| d + 1);
        self.resized(dx, dy).expect("trimmed bounds always fit")
    }

    /// Same polynomial, ignoring the declared bounds.
    pub fn same_poly(&self, other: &BiPoly) -> bool {
        self.field == other.field
            && (0..self.dx.max(other.dx))
                .all(|a| (0..self.dy.max(other.dy)).all(|b| self.coeff(a, b) == other.coeff(a, b)))
    }

    /// `p(lx(X), ly(Y))`, with the same bounds as `p`.
    pub fn substitute_affine(&self, lx: &AffineMap, ly: &AffineMap) -> Result<BiPoly> {
        self.check_elem(lx.a)?;
        self.check_elem(ly.a)?;
        let xs = lx.powers(self.dx);
        let ys = ly.powers(self.dy);
        let mut out = BiPoly::zero(self.field, self.dx, self.dy);
        for a in 0..self.dx {
            for b in 0..self.dy {
                let c = self.coeffs[a * self.dy + b];
                if c.is_zero() {
                    continue;
                }
                for (i, &xi) in xs[a].iter().enumerate() {
                    if xi.is_zero() {
                        continue;
                    }
                    let cx = c * xi;
                    for (j, &yj) in ys[b].iter().enumerate() {
                        out.coeffs[i * self.dy + j] += cx * yj;
                    }
                }
            }
        }
        Ok(out)
    }

    fn check_elem(&self, x: Felt) -> Result<()> {
        if x.field() == self.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.modulus(),
                right: x.field().modulus(),
            })
        }
    }

    fn check_poly(&self, other: &BiPoly) -> Result<()> {
        if other.field == self.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.modulus(),
                right: other.field.modulus(),
            })
        }
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for a in 0..self.dx {
            for b in 0..self.dy {
                let c = self.coeff(a, b);
                if c.is_zero() {
                    continue;
                }
                let mut t = String::new();
                if !c.is_one() || (a == 0 && b == 0) {
                    t.push_str(&c.to_string());
                }
                match a {
                    0 => {}
                    1 => t.push('X'),
                    _ => t.push_str(&format!("X^{a}")),
                }
                match b {
                    0 => {}
                    1 => t.push('Y'),
                    _ => t.push_str(&format!("Y^{b}")),
                }
                terms.push(t);
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// An element `aX + b` of the affine group `GA(p)`, `a != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    a: Felt,
    b: Felt,
}

impl AffineMap {
    pub fn new(a: Felt, b: Felt) -> Result<Self> {
        if a.field() != b.field() {
            return Err(Error::FieldMismatch {
                left: a.field().modulus(),
                right: b.field().modulus(),
            });
        }
        if a.is_zero() {
            return Err(Error::invalid("affine map aX + b needs a != 0"));
        }
        Ok(AffineMap { a, b })
    }

    pub fn identity(field: Field) -> Self {
        AffineMap {
            a: field.one(),
            b: field.zero(),
        }
    }

    pub fn a(&self) -> Felt {
        self.a
    }

    pub fn b(&self) -> Felt {
        self.b
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn eval(&self, x: Felt) -> Felt {
        self.a * x + self.b
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap> {
        if self.field() != inner.field() {
            return Err(Error::FieldMismatch {
                left: self.field().modulus(),
                right: inner.field().modulus(),
            });
        }
        Ok(AffineMap {
            a: self.a * inner.a,
            b: self.a * inner.b + self.b,
        })
    }

    /// `ℓ^i`, with `ℓ^0` the identity.
    pub fn iterate(&self, mut i: u64) -> AffineMap {
        let mut acc = AffineMap::identity(self.field());
        let mut base = *self;
        while i > 0 {
            if i & 1 == 1 {
                acc = acc.compose(&base).expect("same field");
            }
            base = base.compose(&base).expect("same field");
            i >>= 1;
        }
        acc
    }

    /// Order in `GA(p)`: `p` for a nontrivial translation, `ord(a)` otherwise.
    pub fn order(&self) -> u64 {
        if self.a.is_one() {
            if self.b.is_zero() {
                1
            } else {
                self.field().size()
            }
        } else {
            self.a.order().expect("a != 0")
        }
    }

    /// Whether `x` is a fixed point.
    pub fn fixes(&self, x: Felt) -> bool {
        self.eval(x) == x
    }

    /// `(aX + b)^n` coefficient lists for `n < count`, lowest degree first.
    fn powers(&self, count: usize) -> Vec<Vec<Felt>> {
        let field = self.field();
        let mut out: Vec<Vec<Felt>> = Vec::with_capacity(count);
        let mut cur = vec![field.one()];
        for _ in 0..count {
            out.push(cur.clone());
            let mut next = vec![field.zero(); cur.len() + 1];
            for (i, &c) in cur.iter().enumerate() {
                next[i] += c * self.b;
                next[i + 1] += c * self.a;
            }
            cur = next;
        }
        out
    }

    /// `aX + b` as a polynomial in `X` with bounds `(dx, dy)`, `dx >= 2`.
    pub fn as_poly_x(&self, dx: usize, dy: usize) -> BiPoly {
        let mut p = BiPoly::zero(self.field(), dx.max(2), dy);
        p.coeffs[0] = self.b;
        p.coeffs[dy] = self.a;
        p
    }

    /// `aY + b` as a polynomial in `Y` with bounds `(dx, dy)`, `dy >= 2`.
    pub fn as_poly_y(&self, dx: usize, dy: usize) -> BiPoly {
        let dy = dy.max(2);
        let mut p = BiPoly::zero(self.field(), dx, dy);
        p.coeffs[0] = self.b;
        p.coeffs[1] = self.a;
        p
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}X + {}", self.a, self.b)
    }
}

/// A `rows x cols` matrix whose entries are bivariate polynomials sharing one
/// set of degree bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<BiPoly>,
}

impl PolyMatrix {
    /// Entries in row-major order; all are padded to the largest bounds.
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<BiPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::shape(format!(
                "{} entries for a {rows}x{cols} polynomial matrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.field != field) {
            return Err(Error::FieldMismatch {
                left: field.modulus(),
                right: e.field.modulus(),
            });
        }
        let dx = entries.iter().map(|e| e.dx).max().unwrap_or(1);
        let dy = entries.iter().map(|e| e.dy).max().unwrap_or(1);
        let entries = entries
            .iter()
            .map(|e| e.resized(dx, dy))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn diagonal(field: Field, diag: Vec<BiPoly>) -> Result<Self> {
        let n = diag.len();
        let dx = diag.iter().map(|e| e.dx).max().unwrap_or(1);
        let dy = diag.iter().map(|e| e.dy).max().unwrap_or(1);
        let mut entries = vec![BiPoly::zero(field, dx, dy); n * n];
        for (i, d) in diag.into_iter().enumerate() {
            entries[i * n + i] = d;
        }
        PolyMatrix::new(field, n, n, entries)
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            field,
            rows,
            cols,
            entries: vec![BiPoly::zero(field, 1, 1); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = PolyMatrix::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = BiPoly::constant(field.one(), 1, 1);
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Shared degree bounds of the entries.
    pub fn bounds(&self) -> (usize, usize) {
        self.entries.first().map_or((1, 1), BiPoly::bounds)
    }

    pub fn get(&self, i: usize, j: usize) -> &BiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[BiPoly] {
        &self.entries
    }

    /// Leading `r x r` block.
    pub fn leading_block(&self, r: usize) -> Result<PolyMatrix> {
        if r > self.rows || r > self.cols {
            return Err(Error::shape(format!(
                "leading {r}x{r} block of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let entries = (0..r)
            .flat_map(|i| (0..r).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        PolyMatrix::new(self.field, r, r, entries)
    }

    /// Entrywise evaluation at `(x, y)`.
    pub fn eval(&self, x: Felt, y: Felt) -> Result<Matrix> {
        for e in &self.entries {
            e.check_elem(x)?;
            e.check_elem(y)?;
        }
        Ok(Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).eval_unchecked(x, y)
        }))
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = BiPoly::zero(self.field, 1, 1);
                for l in 0..self.cols {
                    acc = acc.add(&self.get(i, l).mul(rhs.get(l, j))?)?;
                }
                entries.push(acc);
            }
        }
        PolyMatrix::new(self.field, self.rows, rhs.cols, entries)
    }

    pub fn add(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::shape(
                "sum of polynomial matrices of different shapes",
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        PolyMatrix::new(self.field, self.rows, self.cols, entries)
    }

    pub fn scale(&self, c: Felt) -> PolyMatrix {
        PolyMatrix {
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
            ..self.clone()
        }
    }

    /// Matrix times a column vector of polynomials.
    pub fn apply(&self, v: &[BiPoly]) -> Result<Vec<BiPoly>> {
        if v.len() != self.cols {
            return Err(Error::shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = BiPoly::zero(self.field, 1, 1);
                for (j, p) in v.iter().enumerate() {
                    acc = acc.add(&self.get(i, j).mul(p)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Result<PolyMatrix> {
        if self.rows != self.cols {
            return Err(Error::shape("power of a non-square polynomial matrix"));
        }
        let mut acc = PolyMatrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Same matrix of polynomials, ignoring declared bounds.
    pub fn same_matrix(&self, other: &PolyMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.same_poly(b))
    }
}

/// `q(mx, my) = Σ q_{ab} mx^a my^b`, with the `X` power on the left.
pub fn substitute_matrices(q: &BiPoly, mx: &PolyMatrix, my: &PolyMatrix) -> Result<PolyMatrix> {
    let n = mx.rows();
    let (dx, dy) = q.bounds();
    let mut x_pows = vec![PolyMatrix::identity(q.field(), n)];
    for a in 1..dx {
        x_pows.push(x_pows[a - 1].mul(mx)?);
    }
    let mut y_pows = vec![PolyMatrix::identity(q.field(), n)];
    for b in 1..dy {
        y_pows.push(y_pows[b - 1].mul(my)?);
    }
    let mut acc = PolyMatrix::zeros(q.field(), n, n);
    for a in 0..dx {
        for b in 0..dy {
            let c = q.coeff(a, b);
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&x_pows[a].mul(&y_pows[b])?.scale(c))?;
        }
    }
    Ok(acc)
}
