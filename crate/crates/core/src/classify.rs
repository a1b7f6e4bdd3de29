//! Canonical forms for bilinear triples `(R, W, F)`.
//!
//! A triple is a pointed pair with an invariant symmetric bilinear form
//! `F`, `F(1, 1) = 0`. Non-degenerate triples have a single canonical form,
//! `K[e1..en]/(ei^2 - ej^2, ei ej)` with Gram matrix
//!
//! ```text
//! [ 0  0 ..  0  1 ]
//! [ 0 -1 ..  0  0 ]
//! [ :     ..    : ]
//! [ 1  0 ..  0  0 ]
//! ```
//!
//! Triples of corank one are described by a symmetric matrix `L` with
//! `ei ej = l_ij e_n` and `ei^2 = e(n+1) + l_ii e_n`, defined up to orthogonal
//! similarity, scaling and adding a scalar matrix; for `n = 2` there are
//! two algebras instead. Equivalence of `L` matrices is decided through
//! invariant factors; certificates stay inside Q(i), so classes that need
//! an irrational scaling are reported as inconclusive.

use std::fmt;

use crate::algebra::{ChangeOfBasis, Element, PointedPair};
use crate::catalog;
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, scale_vec, unit_vec, Matrix};
use crate::multilinear::{build_fw, check_invariance, SymForm};
use crate::scalar::Scalar;
use crate::similarity::{characteristic_polynomial, invariant_factors, similarity_transform};
use crate::unipoly::UniPoly;

/// A pointed pair with an invariant symmetric bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearTriple {
    pair: PointedPair,
    form: SymForm,
    rank: usize,
}

impl BilinearTriple {
    pub fn new(pair: PointedPair, form: SymForm) -> Result<Self> {
        if form.arity() != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: form.arity(),
            });
        }
        if form.n_vars() != pair.dim() {
            return Err(Error::DimensionMismatch {
                expected: pair.dim(),
                found: form.n_vars(),
            });
        }
        if !form.get(&[0, 0]).is_zero() {
            return Err(Error::InvalidTriple("F(1, 1) is not zero".into()));
        }
        if let Some(w) = check_invariance(&form, &pair)? {
            return Err(Error::InvalidTriple(format!(
                "form is not invariant: W vector {} on basis tuple {:?} gives {}",
                w.w_index, w.tuple, w.value
            )));
        }
        let rank = form.gram_matrix()?.rank();
        Ok(BilinearTriple { pair, form, rank })
    }

    /// The triple of a degree-2 pair with its canonical invariant form.
    pub fn from_pair(pair: PointedPair) -> Result<Self> {
        let d = pair.degree();
        if d != 2 {
            return Err(Error::InvalidTriple(format!(
                "pair has degree {d}; a bilinear triple needs degree 2"
            )));
        }
        let form = build_fw(&pair)?;
        BilinearTriple::new(pair, form)
    }

    pub fn pair(&self) -> &PointedPair {
        &self.pair
    }

    pub fn form(&self) -> &SymForm {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }

    pub fn gram(&self) -> Matrix {
        gram_matrix(self)
    }

    /// Same triple in the basis given by the columns of `p`; `W` and the
    /// complement are carried along.
    pub fn change_basis(&self, p: &ChangeOfBasis) -> Result<BilinearTriple> {
        let pair = self.pair.change_basis(p)?;
        let g = transform_gram(&self.gram(), p.matrix());
        BilinearTriple::new(pair, SymForm::from_gram(&g)?)
    }

    /// Same algebra, `W` and complement with the form multiplied by `s`.
    pub fn scale_form(&self, s: &Scalar) -> Result<BilinearTriple> {
        if s.is_zero() {
            return Err(Error::DivisionByZero);
        }
        BilinearTriple::new(self.pair.clone(), self.form.scale(s))
    }
}

/// `M[i][j] = F(e_i, e_j)`.
pub fn gram_matrix(t: &BilinearTriple) -> Matrix {
    t.form.gram_matrix().expect("triples hold bilinear forms")
}

/// `P^T G P`.
pub fn transform_gram(g: &Matrix, p: &Matrix) -> Matrix {
    &(&p.transpose() * g) * p
}

/// The Gram matrix of the canonical form on `n + 2` basis vectors with
/// `rank - 2` entries `-1`: `F(1, e(n+1)) = 1` and `F(e_i, e_i) = -1` for
/// the first `minus_ones` vectors of `W`.
pub fn canonical_gram(n: usize, minus_ones: usize) -> Matrix {
    let mut g = Matrix::zeros(n + 2, n + 2);
    g[(0, n + 1)] = Scalar::one();
    g[(n + 1, 0)] = Scalar::one();
    for i in 1..=minus_ones {
        g[(i, i)] = Scalar::from_int(-1);
    }
    g
}

fn bilinear(g: &Matrix, u: &[Scalar], v: &[Scalar]) -> Scalar {
    dot(u, &g.mul_vec(v))
}

/// Orthogonalizes `vectors` for the symmetric form `g`. An isotropic
/// pivot is replaced by its sum with a partner it pairs with nontrivially.
/// Returns each vector with its square.
fn orthogonalize(g: &Matrix, mut rest: Vec<Vec<Scalar>>) -> Result<Vec<(Vec<Scalar>, Scalar)>> {
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let idx = match (0..rest.len()).find(|&k| !bilinear(g, &rest[k], &rest[k]).is_zero()) {
            Some(k) => k,
            None => {
                let (a, b) = (0..rest.len())
                    .flat_map(|a| (a + 1..rest.len()).map(move |b| (a, b)))
                    .find(|&(a, b)| !bilinear(g, &rest[a], &rest[b]).is_zero())
                    .ok_or_else(|| {
                        Error::InvalidTriple("form is degenerate on the orthogonalized subspace".into())
                    })?;
                let partner = rest[b].clone();
                axpy(&mut rest[a], &Scalar::one(), &partner);
                a
            }
        };
        let v = rest.remove(idx);
        let q = bilinear(g, &v, &v);
        let q_inv = q.inv()?;
        for u in rest.iter_mut() {
            let c = &bilinear(g, u, &v) * &q_inv;
            axpy(u, &-c, &v);
        }
        out.push((v, q));
    }
    Ok(out)
}

/// Rescales an orthogonal family so all squares equal the first one.
fn equalize(family: Vec<(Vec<Scalar>, Scalar)>) -> Result<Vec<Vec<Scalar>>> {
    let Some(q1) = family.first().map(|(_, q)| q.clone()) else {
        return Ok(Vec::new());
    };
    family
        .into_iter()
        .map(|(v, q)| {
            let ratio = &q1 * &q.inv()?;
            let mu = ratio.sqrt().ok_or_else(|| {
                Error::NotRepresentable(format!("square root of {ratio} while equalizing norms"))
            })?;
            Ok(scale_vec(&v, &mu))
        })
        .collect()
}

fn basis_change(columns: Vec<Vec<Scalar>>) -> Result<ChangeOfBasis> {
    ChangeOfBasis::new(Matrix::from_columns(&columns))
}

/// Result of bringing a triple to canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub triple: BilinearTriple,
    /// Columns are the canonical basis vectors in input coordinates.
    pub change: ChangeOfBasis,
    /// The canonical form is the transformed input form divided by this.
    pub form_scale: Scalar,
}

/// Canonical form of a non-degenerate triple.
pub fn canonicalize_nondegenerate(t: &BilinearTriple) -> Result<Canonical> {
    let big_n = t.dim();
    if t.rank != big_n {
        return Err(Error::RankMismatch {
            expected: big_n,
            found: t.rank,
        });
    }
    let n = big_n - 2;
    let g = t.gram();
    let w: Vec<Vec<Scalar>> = t.pair.w_basis().iter().map(|v| v.coords().to_vec()).collect();
    let basis = equalize(orthogonalize(&g, w)?)?;
    let kappa = -bilinear(&g, &basis[0], &basis[0]);
    let alg = t.pair.algebra();
    let top = alg.mul_coords(&basis[0], &basis[0]);
    let mut columns = vec![unit_vec(big_n, 0)];
    columns.extend(basis);
    columns.push(top);
    let change = basis_change(columns)?;
    let canon_alg = alg.change_basis(&change)?;
    let pair = PointedPair::new(
        canon_alg,
        (1..=n).map(|i| Element::basis(big_n, i)).collect(),
        Element::basis(big_n, n + 1),
    )?;
    let gram = transform_gram(&g, change.matrix()).scale(&kappa.inv()?);
    let expected = catalog::quadric_nondegenerate(n)?;
    if pair.algebra().table() != expected.algebra().table() || gram != canonical_gram(n, n) {
        return Err(Error::InvalidTriple(
            "input does not reduce to the non-degenerate normal form".into(),
        ));
    }
    let triple = BilinearTriple::new(pair, SymForm::from_gram(&gram)?)?;
    Ok(Canonical {
        triple,
        change,
        form_scale: kappa,
    })
}

/// Which corank-one normal form applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    Nondegenerate,
    GenericNGe3,
    N2Split,
    N2Chain,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Nondegenerate => "NONDEGENERATE",
            CaseTag::GenericNGe3 => "GENERIC_N_GE_3",
            CaseTag::N2Split => "N2_SPLIT",
            CaseTag::N2Chain => "N2_CHAIN",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The matrix `L` of a corank-one triple with its case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaData {
    pub lam: Matrix,
    pub case: CaseTag,
}

impl LambdaData {
    pub fn generic(lam: Matrix) -> Result<Self> {
        if !lam.is_square() || lam.rows() < 2 || !lam.is_symmetric() {
            return Err(Error::MalformedLambda(
                "expected a symmetric matrix of size at least 2".into(),
            ));
        }
        Ok(LambdaData {
            lam,
            case: CaseTag::GenericNGe3,
        })
    }

    pub fn n2(case: CaseTag) -> Self {
        assert!(matches!(case, CaseTag::N2Split | CaseTag::N2Chain));
        LambdaData {
            lam: Matrix::zeros(1, 1),
            case,
        }
    }
}

/// Output of [`extract_lambda`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    pub lambda: LambdaData,
    pub triple: BilinearTriple,
    pub change: ChangeOfBasis,
    pub form_scale: Scalar,
}

/// Normal form of a corank-one triple.
///
/// The kernel vector becomes `e_n`, a complement of it in `W` is
/// orthonormalized to `e_1..e_(n-1)` with `F(e_i, e_i) = -1`, and `e(n+1)`
/// is the complement vector corrected to be orthogonal to them with
/// `F(1, e(n+1)) = 1`. For `n = 2`, `e_3 = e_1^2` instead.
pub fn extract_lambda(t: &BilinearTriple) -> Result<Extraction> {
    let big_n = t.dim();
    if t.rank + 1 != big_n {
        return Err(Error::RankMismatch {
            expected: big_n - 1,
            found: t.rank,
        });
    }
    let n = big_n - 2;
    let g = t.gram();
    let kernel = g
        .kernel()
        .into_iter()
        .next()
        .expect("corank one means a one-dimensional kernel");
    let w_list: Vec<Vec<Scalar>> = t.pair.w_basis().iter().map(|v| v.coords().to_vec()).collect();
    let w_coords = Matrix::from_columns(&w_list)
        .solve(&kernel)
        .ok_or(Error::KernelNotInW)?;
    let drop = w_coords
        .iter()
        .position(|c| !c.is_zero())
        .expect("kernel vector is nonzero");
    let v_list: Vec<Vec<Scalar>> = w_list
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != drop)
        .map(|(_, v)| v.clone())
        .collect();
    let basis = equalize(orthogonalize(&g, v_list)?)?;
    let kappa = -bilinear(&g, &basis[0], &basis[0]);
    let kappa_inv = kappa.inv()?;
    let f = |u: &[Scalar], v: &[Scalar]| &bilinear(&g, u, v) * &kappa_inv;
    let alg = t.pair.algebra();
    let one = unit_vec(big_n, 0);

    let (top, kernel_vec, case) = if n == 2 {
        let e1 = &basis[0];
        let top = alg.mul_coords(e1, e1);
        let cube = alg.mul_coords(e1, &top);
        // e1^3 = beta e2 with e2 the kernel vector
        let beta = Matrix::from_columns(std::slice::from_ref(&kernel))
            .solve(&cube)
            .ok_or_else(|| Error::InvalidTriple("e1^3 is not a multiple of the kernel".into()))?
            .remove(0);
        if beta.is_zero() {
            (top, kernel, CaseTag::N2Split)
        } else {
            (top, scale_vec(&kernel, &beta), CaseTag::N2Chain)
        }
    } else {
        let c = t.pair.complement().coords();
        let mu = f(&one, c);
        let mut top = scale_vec(c, &mu.inv()?);
        for e in &basis {
            let coeff = f(&top, e);
            axpy(&mut top, &coeff, e);
        }
        (top, kernel, CaseTag::GenericNGe3)
    };

    let mut columns = vec![one];
    columns.extend(basis);
    columns.push(kernel_vec);
    columns.push(top);
    let change = basis_change(columns)?;
    let new_alg = t.pair.algebra().change_basis(&change)?;
    let lambda = match case {
        CaseTag::GenericNGe3 => {
            let m = n - 1;
            let mut lam = Matrix::zeros(m, m);
            for i in 0..m {
                for j in 0..m {
                    lam[(i, j)] = new_alg.basis_product(i + 1, j + 1)[n].clone();
                }
            }
            LambdaData::generic(lam)?
        }
        other => LambdaData::n2(other),
    };
    let expected = match case {
        CaseTag::GenericNGe3 => catalog::corank_one(&lambda.lam)?,
        CaseTag::N2Split => catalog::corank_one_n2_split(),
        _ => catalog::corank_one_n2_chain(),
    };
    let gram = transform_gram(&g, change.matrix()).scale(&kappa_inv);
    if new_alg.table() != expected.algebra().table() || gram != canonical_gram(n, n - 1) {
        return Err(Error::InvalidTriple(
            "input does not reduce to the corank-one normal form".into(),
        ));
    }
    let pair = PointedPair::new(
        new_alg,
        (1..=n).map(|i| Element::basis(big_n, i)).collect(),
        Element::basis(big_n, n + 1),
    )?;
    let triple = BilinearTriple::new(pair, SymForm::from_gram(&gram)?)?;
    Ok(Extraction {
        lambda,
        triple,
        change,
        form_scale: kappa,
    })
}

/// `L2 = X (alpha L1 + beta I) X^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCertificate {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub transform: Matrix,
}

impl EquivalenceCertificate {
    /// Recomputes `X (alpha L1 + beta I) = L2 X` and invertibility of `X`.
    pub fn verify(&self, l1: &Matrix, l2: &Matrix) -> bool {
        let m = l1.rows();
        if self.alpha.is_zero() || self.transform.determinant().is_zero() {
            return false;
        }
        let shifted = l1.scale(&self.alpha).add(&Matrix::identity(m).scale(&self.beta));
        &self.transform * &shifted == l2 * &self.transform
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent(Box<EquivalenceCertificate>),
    NotEquivalent,
    /// Equivalent over an algebraically closed field, but the scaling
    /// factor lies outside Q(i) (or its search ran out of budget), so no
    /// certificate is given.
    Inconclusive(String),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }
}

fn trace_normalized(l: &Matrix) -> (Matrix, Scalar) {
    let m = l.rows();
    let tau = &l.trace() * &Scalar::ratio(1, m as i64);
    (l.sub(&Matrix::identity(m).scale(&tau)), tau)
}

/// Nonzero non-leading characteristic polynomial coefficients, keyed by
/// `j` for the coefficient of `t^(m - j)`; scaling by `alpha` multiplies
/// entry `j` by `alpha^j`.
fn scaled_coefficients(a: &Matrix) -> Vec<(usize, Scalar)> {
    let m = a.rows();
    let p = characteristic_polynomial(a);
    (1..=m)
        .map(|j| (j, p.coeff(m - j)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

fn pow_signed(x: &Scalar, e: i64) -> Result<Scalar> {
    let p = x.pow(e.unsigned_abs() as u32);
    if e < 0 {
        p.inv()
    } else {
        Ok(p)
    }
}

/// `(g, u)` with `g = gcd(js)` and `sum u_k js_k = g`.
fn bezout(js: &[usize]) -> (usize, Vec<i64>) {
    let mut g = js[0] as i64;
    let mut coeffs = vec![1i64];
    for &j in &js[1..] {
        let (mut r0, mut r1) = (g, j as i64);
        let (mut s0, mut s1) = (1i64, 0i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        for c in coeffs.iter_mut() {
            *c *= s0;
        }
        coeffs.push(t0);
        g = r0;
    }
    (g as usize, coeffs)
}

/// Coefficients of the invariant factors keyed by `j` for the coefficient
/// of `t^(deg - j)`, leading terms excluded; scaling the matrix by `alpha`
/// multiplies entry `j` by `alpha^j`.
fn factor_coefficients(factors: &[UniPoly]) -> Vec<(usize, Scalar)> {
    let mut out = Vec::new();
    for f in factors {
        let m = f.degree().unwrap_or(0);
        out.extend((1..=m).map(|j| (j, f.coeff(m - j))));
    }
    out
}

/// Whether `L2` is similar to `alpha L1 + beta I` for some `alpha != 0`
/// and `beta`.
///
/// After removing traces, `B ~ alpha A` exactly when the invariant factors
/// agree coefficientwise with `b_j = a_j alpha^j`; this fixes `alpha^g` for
/// `g` the gcd of the indices with `a_j != 0`. The answer over an
/// algebraically closed field is therefore exact. A certificate needs
/// `alpha` in Q(i); when `alpha^g = rho` has no root there the result is
/// [`Equivalence::Inconclusive`].
pub fn lambda_equivalent(l1: &LambdaData, l2: &LambdaData) -> Result<Equivalence> {
    if l1.case != l2.case {
        return Ok(Equivalence::NotEquivalent);
    }
    if l1.case != CaseTag::GenericNGe3 {
        return Ok(Equivalence::Equivalent(Box::new(EquivalenceCertificate {
            alpha: Scalar::one(),
            beta: Scalar::zero(),
            transform: Matrix::identity(l1.lam.rows()),
        })));
    }
    let m = l1.lam.rows();
    if l2.lam.rows() != m {
        return Err(Error::LambdaMismatch(format!(
            "sizes {} and {} differ",
            m,
            l2.lam.rows()
        )));
    }
    let (a, tau1) = trace_normalized(&l1.lam);
    let (b, tau2) = trace_normalized(&l2.lam);
    let certify = |alpha: Scalar| -> Option<Box<EquivalenceCertificate>> {
        let x = similarity_transform(&a.scale(&alpha), &b)?;
        let beta = &tau2 - &(&alpha * &tau1);
        let cert = EquivalenceCertificate {
            alpha,
            beta,
            transform: x,
        };
        assert!(cert.verify(&l1.lam, &l2.lam), "similarity certificate failed to verify");
        Some(Box::new(cert))
    };
    let missing = || Equivalence::Inconclusive("no similarity transform found".into());

    let fa = invariant_factors(&a);
    let fb = invariant_factors(&b);
    let degrees = |f: &[UniPoly]| f.iter().map(|p| p.degree()).collect::<Vec<_>>();
    if degrees(&fa) != degrees(&fb) {
        return Ok(Equivalence::NotEquivalent);
    }
    let ca = factor_coefficients(&fa);
    let cb = factor_coefficients(&fb);
    if ca.iter().zip(&cb).any(|((_, x), (_, y))| x.is_zero() != y.is_zero()) {
        return Ok(Equivalence::NotEquivalent);
    }
    let nz_a: Vec<(usize, Scalar)> = ca.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    let nz_b: Vec<(usize, Scalar)> = cb.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    if nz_a.is_empty() {
        // nilpotent with equal invariant factors
        return Ok(certify(Scalar::one()).map_or_else(missing, Equivalence::Equivalent));
    }
    let (g, rho_a) = weighted_norm(&nz_a);
    let (_, rho_b) = weighted_norm(&nz_b);
    let rho = &rho_b * &rho_a.inv()?;
    for ((j, x), (_, y)) in nz_a.iter().zip(&nz_b) {
        if &(x * &rho.pow((j / g) as u32)) != y {
            return Ok(Equivalence::NotEquivalent);
        }
    }
    let Some(mut roots) = rho.kth_roots(g as u32) else {
        return Ok(Equivalence::Inconclusive(format!(
            "root search for alpha^{g} = {rho} exceeded its budget"
        )));
    };
    if roots.is_empty() {
        return Ok(Equivalence::Inconclusive(format!(
            "equivalent over an extension field: alpha^{g} = {rho} has no root in Q(i)"
        )));
    }
    roots.sort();
    Ok(roots
        .into_iter()
        .find_map(certify)
        .map_or_else(missing, Equivalence::Equivalent))
}

/// `(t^2 - t + 1)^3 / (t^2 (1 - t)^2)`, constant on the orbit
/// `{t, 1/t, 1-t, (t-1)/t, t/(t-1), 1/(1-t)}`.
pub fn j_invariant_n4(t: &Scalar) -> Result<Scalar> {
    let one = Scalar::one();
    if t.is_zero() || *t == one {
        return Err(Error::MalformedParams("t must differ from 0 and 1".into()));
    }
    let num = (&(&(t * t) - t) + &one).pow(3);
    let den = &(t * t) * &(&one - t).pow(2);
    num.checked_div(&den)
}

/// Classification label of a Lambda class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Label {
    pub text: String,
    /// False when no Q(i) scaling brings the first coefficient to one.
    pub normalized: bool,
}

fn render_factors(factors: &[UniPoly]) -> String {
    factors.iter().map(|p| p.render("t")).collect::<Vec<_>>().join(", ")
}

/// `(g, rho)` with `g` the gcd of the indices and `rho` a monomial in the
/// coefficients that scales by `alpha^g` when the matrix scales by `alpha`.
fn weighted_norm(coeffs: &[(usize, Scalar)]) -> (usize, Scalar) {
    let js: Vec<usize> = coeffs.iter().map(|(j, _)| *j).collect();
    let (g, u) = bezout(&js);
    let rho = coeffs.iter().zip(&u).fold(Scalar::one(), |acc, ((_, c), &e)| {
        &acc * &pow_signed(c, e).expect("coefficients are nonzero")
    });
    (g, rho)
}

fn power(var: &str, k: usize) -> Option<String> {
    match k {
        0 => None,
        1 => Some(var.to_string()),
        _ => Some(format!("{var}^{k}")),
    }
}

/// Renders `f(t)` scaled to `alpha^-deg f(alpha t)` where `alpha = zeta s`
/// and `s^g = rho_inv` is kept formal: the coefficient of `t^(m-j)` becomes
/// `c rho_inv^(j div g) zeta^(j mod g) s^(j mod g)`. The flag reports
/// whether `s` occurs.
fn render_formal(f: &UniPoly, g: usize, rho_inv: &Scalar, zeta: &Scalar) -> (String, bool) {
    let m = f.degree().unwrap_or(0);
    let mut out = String::new();
    let mut uses_s = false;
    for k in (0..=m).rev() {
        let c = f.coeff(k);
        if c.is_zero() {
            continue;
        }
        let j = m - k;
        let (q, r) = (j / g, j % g);
        uses_s |= r != 0;
        let c = &(&c * &rho_inv.pow(q as u32)) * &zeta.pow(r as u32);
        let negative = c.is_negative_like();
        let mag = if negative { -c } else { c };
        out.push_str(match (out.is_empty(), negative) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        });
        let mut parts: Vec<String> = Vec::new();
        if !mag.is_one() || (r == 0 && k == 0) {
            parts.push(if mag.is_real() { mag.to_string() } else { format!("({mag})") });
        }
        parts.extend(power("s", r));
        parts.extend(power("t", k));
        out.push_str(&parts.join("*"));
    }
    (out, uses_s)
}

/// Label of a Lambda class: the case tag, plus for the generic case the
/// invariant factors of the trace-free matrix scaled by `alpha` with
/// `alpha^g rho = 1` (see [`weighted_norm`]), taking the smallest rendering
/// over the admissible `alpha`. When no such `alpha` lies in Q(i) it is
/// kept as a formal symbol `s`. The label is still canonical if `s` drops
/// out; otherwise it depends on the scaling of `L`, is marked not
/// normalized, and only [`lambda_equivalent`] can compare such classes.
pub fn lambda_label(l: &LambdaData) -> Label {
    if l.case != CaseTag::GenericNGe3 {
        return Label {
            text: l.case.as_str().to_string(),
            normalized: true,
        };
    }
    let (a, _) = trace_normalized(&l.lam);
    let wrap = |body: String| format!("{}[{}]", l.case.as_str(), body);
    let coeffs = scaled_coefficients(&a);
    if coeffs.is_empty() {
        return Label {
            text: wrap(render_factors(&invariant_factors(&a))),
            normalized: true,
        };
    }
    let (g, rho) = weighted_norm(&coeffs);
    let target = rho.inv().expect("norm is nonzero");
    let candidates = target.kth_roots(g as u32).unwrap_or_default();
    let best = candidates
        .iter()
        .map(|alpha| render_factors(&invariant_factors(&a.scale(alpha))))
        .min();
    if let Some(body) = best {
        return Label {
            text: wrap(body),
            normalized: true,
        };
    }
    let factors = invariant_factors(&a);
    let (body, uses_s) = Scalar::one()
        .kth_roots(g as u32)
        .unwrap_or_else(|| vec![Scalar::one()])
        .iter()
        .map(|zeta| {
            let parts: Vec<(String, bool)> = factors.iter().map(|f| render_formal(f, g, &target, zeta)).collect();
            let uses_s = parts.iter().any(|(_, u)| *u);
            let body = parts.into_iter().map(|(t, _)| t).collect::<Vec<_>>().join(", ");
            (body, uses_s)
        })
        .min()
        .expect("one is a root of unity");
    if uses_s {
        Label {
            text: format!("{}:NotNormalizable(s^{g})", wrap(body)),
            normalized: false,
        }
    } else {
        Label {
            text: wrap(body),
            normalized: true,
        }
    }
}

/// Result of [`classify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub rank: usize,
    pub case: CaseTag,
    /// `None` in the non-degenerate case.
    pub lambda: Option<LambdaData>,
    pub label: Label,
    pub canonical: BilinearTriple,
    pub change: ChangeOfBasis,
    pub form_scale: Scalar,
}

/// Canonical form and label of a corank-one triple.
pub fn classify_corank_one(t: &BilinearTriple) -> Result<Classification> {
    let ex = extract_lambda(t)?;
    Ok(Classification {
        rank: t.rank,
        case: ex.lambda.case,
        label: lambda_label(&ex.lambda),
        lambda: Some(ex.lambda),
        canonical: ex.triple,
        change: ex.change,
        form_scale: ex.form_scale,
    })
}

/// Dispatches on the rank: full rank or corank one. Larger coranks are
/// not classified.
pub fn classify(t: &BilinearTriple) -> Result<Classification> {
    let n = t.dim();
    if t.rank == n {
        let c = canonicalize_nondegenerate(t)?;
        Ok(Classification {
            rank: t.rank,
            case: CaseTag::Nondegenerate,
            lambda: None,
            label: Label {
                text: CaseTag::Nondegenerate.as_str().to_string(),
                normalized: true,
            },
            canonical: c.triple,
            change: c.change,
            form_scale: c.form_scale,
        })
    } else if t.rank + 1 == n {
        classify_corank_one(t)
    } else {
        Err(Error::RankMismatch {
            expected: n - 1,
            found: t.rank,
        })
    }
}
