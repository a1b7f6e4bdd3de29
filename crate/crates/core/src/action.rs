//! The additive action of `G_a^n` on `P(R)` attached to a pointed pair.
//!
//! A parameter vector `a` over the W basis acts on `R` by multiplication
//! with `exp(a_1 w_1 + ... + a_n w_n)`; the action is unipotent, and the
//! orbit of `[1 : 0 : ... : 0]` is open.

use std::fmt;

use rand::Rng;

use crate::algebra::{Element, LocalAlgebra, PointedPair};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{HomPoly, Poly, RenderStyle, TermOrder};
use crate::scalar::Scalar;

/// `sum_k a^k / k!` for `a` in the maximal ideal.
pub fn exp_element(alg: &LocalAlgebra, a: &Element) -> Result<Element> {
    if a.len() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: a.len(),
        });
    }
    if !a.in_maximal_ideal() {
        return Err(Error::NotInMaximalIdeal);
    }
    let mut term = alg.one().into_coords();
    let mut sum = term.clone();
    for k in 1..alg.dim() {
        term = alg.mul_coords(&term, a.coords());
        if term.iter().all(Scalar::is_zero) {
            break;
        }
        term = crate::linalg::scale_vec(&term, &Scalar::ratio(1, k as i64));
        crate::linalg::axpy(&mut sum, &Scalar::one(), &term);
    }
    Ok(Element::new(sum))
}

/// `sum_i a_i w_i` for W-coordinates `a`.
pub fn w_element(pair: &PointedPair, a: &[Scalar]) -> Result<Element> {
    if a.len() != pair.n() {
        return Err(Error::DimensionMismatch {
            expected: pair.n(),
            found: a.len(),
        });
    }
    let mut v = vec![Scalar::zero(); pair.dim()];
    for (c, w) in a.iter().zip(pair.w_basis()) {
        crate::linalg::axpy(&mut v, c, w.coords());
    }
    Ok(Element::new(v))
}

/// Matrix of multiplication by `exp(a)` in the algebra basis.
#[derive(Clone, PartialEq, Eq)]
pub struct ActionMatrix(Matrix);

impl ActionMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn is_identity(&self) -> bool {
        self.0 == Matrix::identity(self.dim())
    }

    /// `(M - I)^N = 0`.
    pub fn is_unipotent(&self) -> bool {
        let n = self.dim();
        self.0.sub(&Matrix::identity(n)).pow(n as u32).is_zero()
    }

    pub fn compose(&self, other: &ActionMatrix) -> ActionMatrix {
        ActionMatrix(&self.0 * &other.0)
    }
}

impl fmt::Debug for ActionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

pub fn rho(pair: &PointedPair, a: &[Scalar]) -> Result<ActionMatrix> {
    let e = exp_element(pair.algebra(), &w_element(pair, a)?)?;
    Ok(ActionMatrix(pair.algebra().multiplication_matrix(e.coords())))
}

/// A point of projective space with its first nonzero coordinate equal to one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint(Vec<Scalar>);

impl ProjPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        let Some(lead) = coords.iter().find(|c| !c.is_zero()) else {
            return Err(Error::ZeroPoint);
        };
        let inv = lead.inv()?;
        Ok(ProjPoint(crate::linalg::scale_vec(&coords, &inv)))
    }

    /// `[1 : 0 : ... : 0]`, the class of the unit.
    pub fn origin(n: usize) -> Self {
        ProjPoint(crate::linalg::unit_vec(n, 0))
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Scalar::to_string).collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn act(m: &ActionMatrix, p: &ProjPoint) -> Result<ProjPoint> {
    if p.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: p.len(),
        });
    }
    ProjPoint::new(m.0.mul_vec(&p.0))
}

/// Action matrix with entries polynomial in the group parameters.
///
/// Parameter `a_i` (1-based, as printed) is polynomial variable `i`;
/// variable 0 is never used so that indices match the printed names.
#[derive(Clone, PartialEq, Eq)]
pub struct SymbolicAction {
    n_params: usize,
    entries: Vec<Vec<Poly>>,
}

impl SymbolicAction {
    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    /// Substitutes numeric parameters.
    pub fn evaluate(&self, a: &[Scalar]) -> Result<Matrix> {
        if a.len() != self.n_params {
            return Err(Error::DimensionMismatch {
                expected: self.n_params,
                found: a.len(),
            });
        }
        let mut point = vec![Scalar::zero()];
        point.extend_from_slice(a);
        Ok(Matrix::from_rows(
            self.entries
                .iter()
                .map(|row| row.iter().map(|p| p.evaluate(&point)).collect())
                .collect(),
        ))
    }

    /// The image coordinates written as in `[x0 : x1+a1*x0 : ...]`.
    ///
    /// In coordinate `i` the term in `x_i` comes first, then the others by
    /// increasing index. Multi-term coefficients are parenthesized.
    pub fn formula(&self) -> String {
        let coords: Vec<String> = (0..self.dim()).map(|i| self.coordinate_formula(i)).collect();
        format!("[{}]", coords.join(" : "))
    }

    pub fn coordinate_formula(&self, i: usize) -> String {
        let style = RenderStyle {
            prefix: "a",
            order: TermOrder::DegreeAscending,
            spaced: false,
        };
        let order = std::iter::once(i).chain((0..self.dim()).filter(|&j| j != i));
        let mut out = String::new();
        for j in order {
            let c = &self.entries[i][j];
            if c.is_zero() {
                continue;
            }
            let (negative, body) = if c.len() == 1 {
                let (e, k) = c.terms().next().unwrap();
                let negative = k.is_negative_like();
                let mag = if negative { -k.clone() } else { k.clone() };
                let single = Poly::monomial(e.clone(), mag);
                let text = if single.total_degree() == Some(0) && single.coeff(e).is_one() {
                    String::new()
                } else {
                    format!("{}*", single.render(&style))
                };
                (negative, text)
            } else {
                (false, format!("({})*", c.render(&style)))
            };
            match (out.is_empty(), negative) {
                (true, true) => out.push('-'),
                (false, true) => out.push('-'),
                (false, false) => out.push('+'),
                (true, false) => {}
            }
            out.push_str(&format!("{body}x{j}"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for SymbolicAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.formula())
    }
}

fn poly_matrix_mul(a: &[Vec<Poly>], b: &[Vec<Poly>], n_vars: usize) -> Vec<Vec<Poly>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(Poly::zero(n_vars), |acc, k| {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&a[i][k] * &b[k][j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// `exp(a_1 L_{w_1} + ... + a_n L_{w_n})` with symbolic `a_i`.
pub fn rho_symbolic(pair: &PointedPair) -> SymbolicAction {
    let n = pair.dim();
    let params = pair.n();
    let vars = params + 1;
    let mut x = vec![vec![Poly::zero(vars); n]; n];
    for (idx, w) in pair.w_basis().iter().enumerate() {
        let l = pair.algebra().multiplication_matrix(w.coords());
        let a = Poly::var(vars, idx + 1);
        for (i, row) in x.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                if !l[(i, j)].is_zero() {
                    *entry = &*entry + &a.scale(&l[(i, j)]);
                }
            }
        }
    }
    let mut sum: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Poly::constant(vars, Scalar::one())
                    } else {
                        Poly::zero(vars)
                    }
                })
                .collect()
        })
        .collect();
    let mut term = sum.clone();
    for k in 1..n {
        term = poly_matrix_mul(&term, &x, vars);
        let inv = Scalar::ratio(1, k as i64);
        for row in term.iter_mut() {
            for p in row.iter_mut() {
                *p = p.scale(&inv);
            }
        }
        if term.iter().flatten().all(Poly::is_zero) {
            break;
        }
        for (srow, trow) in sum.iter_mut().zip(&term) {
            for (s, t) in srow.iter_mut().zip(trow) {
                *s = &*s + t;
            }
        }
    }
    SymbolicAction {
        n_params: params,
        entries: sum,
    }
}

/// Outcome of [`verify_action_invariance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionCheck {
    Invariant,
    /// The derivation along `w_{w_index}` does not kill `f`.
    DerivationFails { w_index: usize, image: Poly },
    /// `f(rho(a) v) != f(v)` at a sampled point.
    SampleFails { params: Vec<Scalar>, point: Vec<Scalar> },
}

impl ActionCheck {
    pub fn is_invariant(&self) -> bool {
        matches!(self, ActionCheck::Invariant)
    }
}

/// `sum_j (a x)_j df/dx_j`: the derivation induced by `a` applied to `f`.
pub fn derivation(alg: &LocalAlgebra, a: &[Scalar], f: &Poly) -> Poly {
    let n = alg.dim();
    let l = alg.multiplication_matrix(a);
    let mut out = Poly::zero(n);
    for j in 0..n {
        let dj = f.derivative(j);
        if dj.is_zero() {
            continue;
        }
        let mut lin = Poly::zero(n);
        for k in 0..n {
            if !l[(j, k)].is_zero() {
                lin = &lin + &Poly::var(n, k).scale(&l[(j, k)]);
            }
        }
        out = &out + &(&lin * &dj);
    }
    out
}

/// Checks `f(rho(a) v) = f(v)` symbolically through the derivations of the
/// W basis, then on `trials` random parameter and point samples.
pub fn verify_action_invariance<R: Rng + ?Sized>(
    pair: &PointedPair,
    f: &HomPoly,
    trials: usize,
    rng: &mut R,
) -> Result<ActionCheck> {
    let n = pair.dim();
    if f.n_vars() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.n_vars(),
        });
    }
    for (w_index, w) in pair.w_basis().iter().enumerate() {
        let image = derivation(pair.algebra(), w.coords(), f.as_poly());
        if !image.is_zero() {
            return Ok(ActionCheck::DerivationFails { w_index, image });
        }
    }
    for _ in 0..trials {
        let params: Vec<Scalar> = (0..pair.n()).map(|_| Scalar::random_small(rng, 10)).collect();
        let point: Vec<Scalar> = (0..n).map(|_| Scalar::random_small(rng, 10)).collect();
        let moved = rho(pair, &params)?.0.mul_vec(&point);
        if f.evaluate(&moved) != f.evaluate(&point) {
            return Ok(ActionCheck::SampleFails { params, point });
        }
    }
    Ok(ActionCheck::Invariant)
}

/// Whether all partial derivatives vanish at a point of `f = 0`.
pub fn singular_at(f: &HomPoly, p: &ProjPoint) -> Result<bool> {
    if p.len() != f.n_vars() {
        return Err(Error::DimensionMismatch {
            expected: f.n_vars(),
            found: p.len(),
        });
    }
    if !f.evaluate(p.coords()).is_zero() {
        return Err(Error::NotOnHypersurface);
    }
    Ok((0..f.n_vars()).all(|j| f.as_poly().derivative(j).evaluate(p.coords()).is_zero()))
}
