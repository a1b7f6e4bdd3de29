//! Finite-dimensional local algebras given by structure constants.
//!
//! The basis is always `e0 = 1, e1, .., e_{N-1}` with the maximal ideal
//! spanned by `e1, .., e_{N-1}`. Only products of maximal-ideal basis vectors
//! are stored; the unit acts implicitly.

use std::fmt;
use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vec, scale_vec, unit_vec, Matrix, Subspace};
use crate::scalar::Scalar;

/// A vector of the algebra in the basis `e0, .., e_{N-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element(Vec<Scalar>);

impl Element {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Element(coords)
    }

    pub fn zero(n: usize) -> Self {
        Element(vec![Scalar::zero(); n])
    }

    pub fn one(n: usize) -> Self {
        Element(unit_vec(n, 0))
    }

    pub fn basis(n: usize, i: usize) -> Self {
        Element(unit_vec(n, i))
    }

    /// Element of the maximal ideal from its coordinates along `e1..`.
    pub fn from_ideal_coords(coords: &[Scalar]) -> Self {
        let mut v = Vec::with_capacity(coords.len() + 1);
        v.push(Scalar::zero());
        v.extend_from_slice(coords);
        Element(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.0)
    }

    pub fn in_maximal_ideal(&self) -> bool {
        self.0.first().is_none_or(Scalar::is_zero)
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        Element(scale_vec(&self.0, s))
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        Element(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        Element(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Unvalidated products `e_i * e_j` for `1 <= i, j < dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTable {
    dim: usize,
    entries: Vec<Vec<Scalar>>,
}

impl StructureTable {
    /// All products zero.
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "algebra dimension must be positive");
        let m = dim - 1;
        StructureTable {
            dim,
            entries: vec![vec![Scalar::zero(); dim]; m * m],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        assert!(
            (1..self.dim).contains(&i) && (1..self.dim).contains(&j),
            "structure index out of range"
        );
        (i - 1) * (self.dim - 1) + (j - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> &[Scalar] {
        &self.entries[self.slot(i, j)]
    }

    /// Sets `e_i * e_j` only; the mirrored entry is left alone.
    pub fn set(&mut self, i: usize, j: usize, coords: Vec<Scalar>) -> Result<()> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: coords.len(),
            });
        }
        let s = self.slot(i, j);
        self.entries[s] = coords;
        Ok(())
    }

    pub fn set_symmetric(&mut self, i: usize, j: usize, coords: Vec<Scalar>) -> Result<()> {
        self.set(i, j, coords.clone())?;
        self.set(j, i, coords)
    }

    /// Convenience: `e_i * e_j = coeff * e_k`.
    pub fn set_monomial(&mut self, i: usize, j: usize, k: usize, coeff: Scalar) {
        let mut v = vec![Scalar::zero(); self.dim];
        v[k] = coeff;
        self.set_symmetric(i, j, v).expect("length matches dim");
    }
}

/// First violated algebra axiom, with witness indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationReport {
    NotCommutative { i: usize, j: usize },
    ProductLeavesIdeal { i: usize, j: usize },
    NotAssociative { i: usize, j: usize, k: usize },
    NotNilpotent { power: usize },
}

impl ValidationReport {
    pub fn axiom(&self) -> &'static str {
        match self {
            ValidationReport::NotCommutative { .. } => "commutativity",
            ValidationReport::ProductLeavesIdeal { .. } => "closure of maximal ideal",
            ValidationReport::NotAssociative { .. } => "associativity",
            ValidationReport::NotNilpotent { .. } => "nilpotency of maximal ideal",
        }
    }

    pub fn witness(&self) -> Vec<usize> {
        match *self {
            ValidationReport::NotCommutative { i, j } => vec![i, j],
            ValidationReport::ProductLeavesIdeal { i, j } => vec![i, j],
            ValidationReport::NotAssociative { i, j, k } => vec![i, j, k],
            ValidationReport::NotNilpotent { power } => vec![power],
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationReport::NotCommutative { i, j } => {
                write!(f, "e{i}*e{j} != e{j}*e{i}")
            }
            ValidationReport::ProductLeavesIdeal { i, j } => {
                write!(f, "e{i}*e{j} has a nonzero unit coordinate")
            }
            ValidationReport::NotAssociative { i, j, k } => {
                write!(f, "(e{i}*e{j})*e{k} != e{i}*(e{j}*e{k})")
            }
            ValidationReport::NotNilpotent { power } => {
                write!(f, "maximal ideal is not nilpotent (m^{power} = m^{} != 0)", power + 1)
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LocalAlgebra {
    table: StructureTable,
    name: Option<String>,
}

impl LocalAlgebra {
    /// Checks commutativity, closure of the maximal ideal, associativity and
    /// nilpotency, in that order.
    pub fn validate(table: StructureTable) -> std::result::Result<LocalAlgebra, ValidationReport> {
        let n = table.dim;
        for i in 1..n {
            for j in i + 1..n {
                if table.get(i, j) != table.get(j, i) {
                    return Err(ValidationReport::NotCommutative { i, j });
                }
            }
        }
        for i in 1..n {
            for j in i..n {
                if !table.get(i, j)[0].is_zero() {
                    return Err(ValidationReport::ProductLeavesIdeal { i, j });
                }
            }
        }
        let alg = LocalAlgebra { table, name: None };
        for i in 1..n {
            for j in 1..n {
                let ij = alg.basis_product(i, j);
                for k in 1..n {
                    let left = alg.mul_coords(&ij, &unit_vec(n, k));
                    let jk = alg.basis_product(j, k);
                    let right = alg.mul_coords(&unit_vec(n, i), &jk);
                    if left != right {
                        return Err(ValidationReport::NotAssociative { i, j, k });
                    }
                }
            }
        }
        let mut power = alg.maximal_ideal();
        for p in 1..=n {
            if power.is_zero() {
                return Ok(alg);
            }
            let next = alg.product_space(&power, &alg.maximal_ideal());
            if next == power {
                return Err(ValidationReport::NotNilpotent { power: p });
            }
            power = next;
        }
        Err(ValidationReport::NotNilpotent { power: n })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.table.dim
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn one(&self) -> Element {
        Element::one(self.dim())
    }

    /// `e_i * e_j` for any basis indices, including the unit.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec<Scalar> {
        let n = self.dim();
        match (i, j) {
            (0, k) | (k, 0) => unit_vec(n, k),
            _ => self.table.get(i, j).to_vec(),
        }
    }

    pub fn mul_coords(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let c = ui * vj;
                if i == 0 {
                    out[j] += &c;
                } else if j == 0 {
                    out[i] += &c;
                } else {
                    axpy(&mut out, &c, self.table.get(i, j));
                }
            }
        }
        out
    }

    pub fn multiply(&self, u: &Element, v: &Element) -> Result<Element> {
        for x in [u, v] {
            if x.len() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: x.len(),
                });
            }
        }
        Ok(Element(self.mul_coords(&u.0, &v.0)))
    }

    pub fn power(&self, u: &Element, k: u32) -> Element {
        let mut acc = self.one();
        for _ in 0..k {
            acc = Element(self.mul_coords(&acc.0, &u.0));
        }
        acc
    }

    /// Matrix of `v -> u * v`; column `j` holds `u * e_j`.
    pub fn multiplication_matrix(&self, u: &[Scalar]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|j| self.mul_coords(u, &unit_vec(n, j)))
            .collect();
        Matrix::from_columns(&cols)
    }

    pub fn maximal_ideal(&self) -> Subspace {
        let n = self.dim();
        Subspace::span(n, (1..n).map(|i| unit_vec(n, i)))
    }

    /// `span { a * b : a in A, b in B }`
    pub fn product_space(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let prods = a
            .basis()
            .iter()
            .flat_map(|x| b.basis().iter().map(move |y| (x, y)))
            .map(|(x, y)| self.mul_coords(x, y))
            .collect::<Vec<_>>();
        Subspace::span(self.dim(), prods)
    }

    /// `[m, m^2, .., 0]`, ending at the first zero power.
    pub fn ideal_filtration(&self) -> Vec<Subspace> {
        let m = self.maximal_ideal();
        let mut out = vec![m.clone()];
        while !out.last().expect("nonempty").is_zero() {
            let next = self.product_space(out.last().expect("nonempty"), &m);
            out.push(next);
        }
        out
    }

    fn check_in_ideal(&self, s: &Subspace) -> Result<()> {
        if s.ambient() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.ambient(),
            });
        }
        if !self.maximal_ideal().contains_subspace(s) {
            return Err(Error::NotInMaximalIdeal);
        }
        Ok(())
    }

    /// Whether `1` and `w` generate the whole algebra.
    pub fn generates(&self, w: &Subspace) -> Result<bool> {
        self.check_in_ideal(w)?;
        Ok(self.generated_subalgebra(w).dim() == self.dim())
    }

    /// Smallest subspace containing `1` and `w` and closed under
    /// multiplication by `w`.
    pub fn generated_subalgebra(&self, w: &Subspace) -> Subspace {
        let mut s = Subspace::span(self.dim(), std::iter::once(unit_vec(self.dim(), 0))).sum(w);
        loop {
            let next = s.sum(&self.product_space(&s, w));
            if next == s {
                return s;
            }
            s = next;
        }
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        let n = self.dim();
        s.basis()
            .iter()
            .all(|x| (1..n).all(|j| s.contains(&self.mul_coords(x, &unit_vec(n, j)))))
    }

    /// Largest ideal of the algebra contained in `w`.
    pub fn largest_ideal_in(&self, w: &Subspace) -> Result<Subspace> {
        self.check_in_ideal(w)?;
        let n = self.dim();
        let mut cur = w.clone();
        loop {
            if cur.is_zero() {
                return Ok(cur);
            }
            let ann = cur.annihilator();
            let basis = cur.basis();
            // Solve for combinations x = sum t_l b_l with x * e_j in cur.
            let mut rows = Vec::new();
            for j in 1..n {
                let images: Vec<Vec<Scalar>> = basis
                    .iter()
                    .map(|b| self.mul_coords(b, &unit_vec(n, j)))
                    .collect();
                for r in 0..ann.rows() {
                    let c = ann.row(r);
                    rows.push(images.iter().map(|img| crate::linalg::dot(c, img)).collect());
                }
            }
            let combos = if rows.is_empty() {
                (0..basis.len()).map(|l| unit_vec(basis.len(), l)).collect()
            } else {
                Matrix::from_rows(rows).kernel()
            };
            let next = Subspace::span(
                n,
                combos.into_iter().map(|t| {
                    let mut x = vec![Scalar::zero(); n];
                    for (tl, b) in t.iter().zip(basis) {
                        axpy(&mut x, tl, b);
                    }
                    x
                }),
            );
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// Quotient by an ideal inside the maximal ideal. The quotient basis is
    /// `1` together with the basis vectors at the non-pivot positions of
    /// the ideal's echelon form.
    pub fn quotient(&self, ideal: &Subspace) -> Result<Quotient> {
        self.check_in_ideal(ideal)?;
        if !self.is_ideal(ideal) {
            return Err(Error::NotAnIdeal);
        }
        let n = self.dim();
        let kept: Vec<usize> = (0..n).filter(|c| !ideal.pivots().contains(c)).collect();
        let q = Quotient {
            ideal: ideal.clone(),
            kept,
            algebra: None,
        };
        let m = q.kept.len();
        let mut table = StructureTable::new(m);
        for a in 1..m {
            for b in 1..m {
                let prod = self.basis_product(q.kept[a], q.kept[b]);
                table.set(a, b, q.project_coords(&prod))?;
            }
        }
        let algebra = LocalAlgebra::validate(table).map_err(Error::InvalidAlgebra)?;
        Ok(Quotient {
            algebra: Some(algebra),
            ..q
        })
    }

    /// Re-expresses the algebra in the basis given by the columns of `p`.
    /// `p` must be invertible and keep `e0 = 1` and the maximal ideal fixed.
    pub fn change_basis(&self, p: &ChangeOfBasis) -> Result<LocalAlgebra> {
        let n = self.dim();
        let pm = p.matrix();
        if pm.rows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: pm.rows(),
            });
        }
        let inv = pm.inverse()?;
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| pm.column(j)).collect();
        let mut table = StructureTable::new(n);
        for a in 1..n {
            for b in a..n {
                let prod = self.mul_coords(&cols[a], &cols[b]);
                table.set_symmetric(a, b, inv.mul_vec(&prod))?;
            }
        }
        let alg = LocalAlgebra::validate(table).map_err(Error::InvalidAlgebra)?;
        Ok(match &self.name {
            Some(name) => alg.with_name(name.clone()),
            None => alg,
        })
    }
}

impl fmt::Debug for LocalAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalAlgebra")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .finish()
    }
}

/// `R / I` together with the projection and the coordinate section.
#[derive(Clone, Debug)]
pub struct Quotient {
    ideal: Subspace,
    kept: Vec<usize>,
    algebra: Option<LocalAlgebra>,
}

impl Quotient {
    pub fn algebra(&self) -> &LocalAlgebra {
        self.algebra.as_ref().expect("quotient algebra is built")
    }

    pub fn ideal(&self) -> &Subspace {
        &self.ideal
    }

    /// Indices of the original basis vectors that survive as the quotient
    /// basis, in order.
    pub fn kept_indices(&self) -> &[usize] {
        &self.kept
    }

    fn project_coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.ideal.reduce(v);
        self.kept.iter().map(|&k| r[k].clone()).collect()
    }

    pub fn project(&self, v: &Element) -> Element {
        Element(self.project_coords(&v.0))
    }

    /// Section of the projection: quotient coordinates placed back on the
    /// kept basis vectors.
    pub fn lift(&self, v: &Element) -> Element {
        let mut out = vec![Scalar::zero(); self.ideal.ambient()];
        for (c, &k) in v.0.iter().zip(&self.kept) {
            out[k] = c.clone();
        }
        Element(out)
    }
}

/// An invertible basis change fixing the unit; column `j` holds the new
/// basis vector `j` in old coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangeOfBasis(Matrix);

impl ChangeOfBasis {
    pub fn new(m: Matrix) -> Result<Self> {
        let n = m.rows();
        if !m.is_square() || n == 0 {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.cols(),
            });
        }
        let e0 = unit_vec(n, 0);
        if m.column(0) != e0 || m.row(0) != e0.as_slice() {
            return Err(Error::InvalidPair(
                "basis change must fix the unit and the maximal ideal".into(),
            ));
        }
        if m.determinant().is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ChangeOfBasis(m))
    }

    pub fn identity(n: usize) -> Self {
        ChangeOfBasis(Matrix::identity(n))
    }

    /// Block matrix `diag(1, block)`.
    pub fn from_ideal_block(block: &Matrix) -> Result<Self> {
        let n = block.rows() + 1;
        let mut m = Matrix::zeros(n, n);
        m[(0, 0)] = Scalar::one();
        for i in 0..block.rows() {
            for j in 0..block.cols() {
                m[(i + 1, j + 1)] = block[(i, j)].clone();
            }
        }
        ChangeOfBasis::new(m)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0 == Matrix::identity(self.0.rows())
    }

    /// First apply `self`, then `next` (expressed in the basis after `self`).
    pub fn then(&self, next: &ChangeOfBasis) -> ChangeOfBasis {
        ChangeOfBasis(&self.0 * &next.0)
    }
}

/// A local algebra with a distinguished generating hyperplane `W` of the
/// maximal ideal and a complement vector fixing `m / W = K`.
#[derive(Clone, PartialEq, Eq)]
pub struct PointedPair {
    algebra: LocalAlgebra,
    w: Vec<Element>,
    complement: Element,
    projection: Vec<Scalar>,
}

impl PointedPair {
    pub fn new(algebra: LocalAlgebra, w: Vec<Element>, complement: Element) -> Result<Self> {
        let n = algebra.dim();
        if n < 3 {
            return Err(Error::InvalidPair(format!(
                "algebra of dimension {n} has no generating hyperplane"
            )));
        }
        if w.len() != n - 2 {
            return Err(Error::InvalidPair(format!(
                "W needs {} vectors, got {}",
                n - 2,
                w.len()
            )));
        }
        for v in w.iter().chain(std::iter::once(&complement)) {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            if !v.in_maximal_ideal() {
                return Err(Error::NotInMaximalIdeal);
            }
        }
        // Columns: W basis then complement, restricted to the ideal coordinates.
        let cols: Vec<Vec<Scalar>> = w
            .iter()
            .chain(std::iter::once(&complement))
            .map(|v| v.0[1..].to_vec())
            .collect();
        let inv = Matrix::from_columns(&cols).inverse().map_err(|_| {
            Error::InvalidPair("W together with the complement is not a basis of m".into())
        })?;
        let mut projection = vec![Scalar::zero()];
        projection.extend_from_slice(inv.row(n - 2));
        let pair = PointedPair {
            algebra,
            w,
            complement,
            projection,
        };
        if !pair.algebra.generates(&pair.w_subspace())? {
            return Err(Error::InvalidPair(
                "W does not generate the algebra".into(),
            ));
        }
        Ok(pair)
    }

    pub fn algebra(&self) -> &LocalAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Number of group parameters, `dim W`.
    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn w_basis(&self) -> &[Element] {
        &self.w
    }

    pub fn complement(&self) -> &Element {
        &self.complement
    }

    pub fn w_subspace(&self) -> Subspace {
        Subspace::span(self.dim(), self.w.iter().map(|v| v.0.clone()))
    }

    /// Coordinate along the complement after writing the maximal-ideal part
    /// of `v` in the basis `(W, complement)`.
    pub fn pi(&self, v: &[Scalar]) -> Scalar {
        crate::linalg::dot(&self.projection, v)
    }

    /// Largest `d` with `m^d` not contained in `W`.
    pub fn degree(&self) -> usize {
        let w = self.w_subspace();
        self.algebra
            .ideal_filtration()
            .iter()
            .take_while(|p| !w.contains_subspace(p))
            .count()
    }

    pub fn change_basis(&self, p: &ChangeOfBasis) -> Result<PointedPair> {
        let algebra = self.algebra.change_basis(p)?;
        let inv = p.matrix().inverse()?;
        let w = self.w.iter().map(|v| Element(inv.mul_vec(&v.0))).collect();
        let complement = Element(inv.mul_vec(&self.complement.0));
        PointedPair::new(algebra, w, complement)
    }

    /// Same algebra and `W`, different spanning list or complement.
    pub fn with_presentation(&self, w: Vec<Element>, complement: Element) -> Result<PointedPair> {
        if Subspace::span(self.dim(), w.iter().map(|v| v.0.clone())) != self.w_subspace() {
            return Err(Error::InvalidPair("new W list spans a different subspace".into()));
        }
        PointedPair::new(self.algebra.clone(), w, complement)
    }

    /// Pair induced on `R / I` for an ideal `I` inside `W`.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(PointedPair, Quotient)> {
        if !self.w_subspace().contains_subspace(ideal) {
            return Err(Error::InvalidPair("ideal is not contained in W".into()));
        }
        let q = self.algebra.quotient(ideal)?;
        let m = q.algebra().dim();
        let images = Subspace::span(m, self.w.iter().map(|v| q.project(v).0));
        let w = images.basis().iter().cloned().map(Element).collect();
        let complement = q.project(&self.complement);
        let pair = PointedPair::new(q.algebra().clone(), w, complement)?;
        Ok((pair, q))
    }
}

impl fmt::Debug for PointedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointedPair")
            .field("algebra", &self.algebra)
            .field("w", &self.w)
            .field("complement", &self.complement)
            .finish()
    }
}
