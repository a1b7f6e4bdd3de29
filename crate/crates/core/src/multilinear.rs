//! Symmetric multilinear forms on a local algebra and the invariance
//! condition for a generating hyperplane `W`.
//!
//! A form `F` of arity `d` is invariant for a pair `(R, W)` when
//! `F(1, ..., 1) = 0`, `F` does not vanish on the maximal ideal, and for
//! every `a` in `W`
//!
//! ```text
//! F(a b_1, b_2, ..., b_d) + F(b_1, a b_2, ..., b_d) + ... + F(b_1, ..., a b_d) = 0.
//! ```
//!
//! [`build_fw`] produces the canonical such form from the projection
//! `m -> m / W`, and [`hypersurface_equation`] turns it into the polynomial
//! of the invariant hypersurface.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Element, LocalAlgebra, PointedPair};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{HomPoly, Poly};
use crate::scalar::Scalar;

/// Symmetric `d`-linear form stored by sorted multi-index.
#[derive(Clone, PartialEq, Eq)]
pub struct SymForm {
    n_vars: usize,
    arity: usize,
    entries: BTreeMap<Vec<usize>, Scalar>,
}

impl SymForm {
    pub fn zero(n_vars: usize, arity: usize) -> Self {
        SymForm {
            n_vars,
            arity,
            entries: BTreeMap::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nonzero entries keyed by sorted multi-index.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.entries.iter()
    }

    /// Value on basis vectors; the index order is irrelevant.
    pub fn get(&self, index: &[usize]) -> Scalar {
        let mut key = index.to_vec();
        key.sort_unstable();
        self.entries.get(&key).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, index: &[usize], value: Scalar) {
        assert_eq!(index.len(), self.arity, "multi-index has wrong arity");
        assert!(index.iter().all(|&i| i < self.n_vars), "basis index out of range");
        let mut key = index.to_vec();
        key.sort_unstable();
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    pub fn scale(&self, s: &Scalar) -> SymForm {
        let mut out = SymForm::zero(self.n_vars, self.arity);
        for (k, v) in &self.entries {
            out.set(k, v * s);
        }
        out
    }

    /// Full multilinear expansion.
    pub fn evaluate(&self, args: &[&[Scalar]]) -> Result<Scalar> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: args.len(),
            });
        }
        if let Some(a) = args.iter().find(|a| a.len() != self.n_vars) {
            return Err(Error::DimensionMismatch {
                expected: self.n_vars,
                found: a.len(),
            });
        }
        let supports: Vec<Vec<usize>> = args
            .iter()
            .map(|a| (0..a.len()).filter(|&i| !a[i].is_zero()).collect())
            .collect();
        let mut total = Scalar::zero();
        let mut index = vec![0usize; self.arity];
        self.expand(args, &supports, 0, &mut index, Scalar::one(), &mut total);
        Ok(total)
    }

    fn expand(
        &self,
        args: &[&[Scalar]],
        supports: &[Vec<usize>],
        slot: usize,
        index: &mut Vec<usize>,
        weight: Scalar,
        total: &mut Scalar,
    ) {
        if slot == args.len() {
            let v = self.get(index);
            if !v.is_zero() {
                *total += &(&v * &weight);
            }
            return;
        }
        for &i in &supports[slot] {
            index[slot] = i;
            self.expand(args, supports, slot + 1, index, &weight * &args[slot][i], total);
        }
    }

    /// Gram matrix `M[i][j] = F(e_i, e_j)` of a bilinear form.
    pub fn gram_matrix(&self) -> Result<Matrix> {
        if self.arity != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: self.arity,
            });
        }
        let n = self.n_vars;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.get(&[i, j]);
            }
        }
        Ok(m)
    }

    /// Bilinear form of a symmetric matrix.
    pub fn from_gram(m: &Matrix) -> Result<SymForm> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                found: m.cols(),
            });
        }
        if !m.is_symmetric() {
            return Err(Error::InvalidTriple("Gram matrix is not symmetric".into()));
        }
        let n = m.rows();
        let mut f = SymForm::zero(n, 2);
        for i in 0..n {
            for j in i..n {
                f.set(&[i, j], m[(i, j)].clone());
            }
        }
        Ok(f)
    }

    /// Whether some entry with no unit argument is nonzero.
    pub fn nonzero_on_maximal_ideal(&self) -> bool {
        self.entries.keys().any(|k| k.iter().all(|&i| i > 0))
    }
}

impl fmt::Debug for SymForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(k, v)| (k, v.to_string())))
            .finish()
    }
}

fn factorial(n: usize) -> Scalar {
    (1..=n as i64).fold(Scalar::one(), |acc, k| &acc * &Scalar::from_int(k))
}

/// Number of distinct orderings of a multi-index: `d! / prod m_i!`.
fn multinomial(exp: &[u32]) -> Scalar {
    let d: u32 = exp.iter().sum();
    let denom = exp
        .iter()
        .fold(Scalar::one(), |acc, &m| &acc * &factorial(m as usize));
    &factorial(d as usize) * &denom.inv().expect("factorials are nonzero")
}

fn exponent_to_index(exp: &[u32]) -> Vec<usize> {
    exp.iter()
        .enumerate()
        .flat_map(|(i, &m)| std::iter::repeat_n(i, m as usize))
        .collect()
}

fn index_to_exponent(n_vars: usize, index: &[usize]) -> Vec<u32> {
    let mut exp = vec![0u32; n_vars];
    for &i in index {
        exp[i] += 1;
    }
    exp
}

/// All sorted multi-indices of length `d` over `0..n`.
pub fn sorted_multi_indices(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, d, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, d, 0, &mut Vec::with_capacity(d), &mut out);
    out
}

/// The symmetric form with `F(v, ..., v) = f(v)`.
pub fn polarize(f: &HomPoly) -> SymForm {
    let mut form = SymForm::zero(f.n_vars(), f.degree());
    for (exp, c) in f.terms() {
        let value = c * &multinomial(exp).inv().expect("multinomials are nonzero");
        form.set(&exponent_to_index(exp), value);
    }
    form
}

/// `v -> F(v, ..., v)`; inverse of [`polarize`].
pub fn form_to_polynomial(form: &SymForm) -> HomPoly {
    let poly = Poly::from_terms(
        form.n_vars,
        form.entries.iter().map(|(k, v)| {
            let exp = index_to_exponent(form.n_vars, k);
            let c = v * &multinomial(&exp);
            (exp, c)
        }),
    );
    HomPoly::new(poly, form.arity).expect("entries of a form have uniform degree")
}

/// Polarization of the product of the two polynomials.
pub fn product_form(f1: &SymForm, f2: &SymForm) -> Result<SymForm> {
    if f1.n_vars != f2.n_vars {
        return Err(Error::DimensionMismatch {
            expected: f1.n_vars,
            found: f2.n_vars,
        });
    }
    Ok(polarize(
        &form_to_polynomial(f1).mul(&form_to_polynomial(f2)),
    ))
}

/// A failure of the invariance condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceWitness {
    /// Position of `a` in the W basis list.
    pub w_index: usize,
    /// Sorted basis indices `b_1 <= ... <= b_d`.
    pub tuple: Vec<usize>,
    /// The nonzero value of the sum.
    pub value: Scalar,
}

/// `sum_k F(b_1, ..., a b_k, ..., b_d)` for `a` the `w_index`-th W vector.
pub fn invariance_defect(form: &SymForm, pair: &PointedPair, w_index: usize, tuple: &[usize]) -> Scalar {
    defect(form, pair.algebra(), pair.w_basis()[w_index].coords(), tuple)
}

fn defect(form: &SymForm, alg: &LocalAlgebra, a: &[Scalar], tuple: &[usize]) -> Scalar {
    let mut total = Scalar::zero();
    let mut rest = tuple.to_vec();
    for k in 0..tuple.len() {
        let bk = rest.remove(k);
        let img = alg.mul_coords(a, &crate::linalg::unit_vec(alg.dim(), bk));
        for (j, c) in img.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            rest.push(j);
            total += &(c * &form.get(&rest));
            rest.pop();
        }
        rest.insert(k, bk);
    }
    total
}

/// Checks the invariance sum for every W-basis vector and every multiset
/// of basis vectors; returns the first violation.
pub fn check_invariance(form: &SymForm, pair: &PointedPair) -> Result<Option<InvarianceWitness>> {
    check_invariance_in(form, pair.algebra(), pair.w_basis())
}

/// [`check_invariance`] for an arbitrary list of elements of the maximal
/// ideal, which need not generate the algebra.
pub fn check_invariance_in(
    form: &SymForm,
    alg: &LocalAlgebra,
    w: &[Element],
) -> Result<Option<InvarianceWitness>> {
    if form.n_vars != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: form.n_vars,
        });
    }
    if form.arity == 0 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: 0,
        });
    }
    let tuples = sorted_multi_indices(alg.dim(), form.arity);
    for (w_index, a) in w.iter().enumerate() {
        if a.len() != alg.dim() {
            return Err(Error::DimensionMismatch {
                expected: alg.dim(),
                found: a.len(),
            });
        }
        for tuple in &tuples {
            let value = defect(form, alg, a.coords(), tuple);
            if !value.is_zero() {
                return Ok(Some(InvarianceWitness {
                    w_index,
                    tuple: tuple.clone(),
                    value,
                }));
            }
        }
    }
    Ok(None)
}

/// `F(1, ..., 1) = 0`, `F` nonzero on the maximal ideal, and invariance.
pub fn is_invariant_form(form: &SymForm, pair: &PointedPair) -> bool {
    form.n_vars == pair.dim()
        && form.arity >= 1
        && form.get(&vec![0; form.arity]).is_zero()
        && form.nonzero_on_maximal_ideal()
        && matches!(check_invariance(form, pair), Ok(None))
}

/// `F_W(b_1, ..., b_d) = (-1)^k k! (d-k-1)! pi(b_1 ... b_d)` where `k` counts
/// unit arguments and `d` is the degree of the pair.
pub fn build_fw(pair: &PointedPair) -> Result<SymForm> {
    let d = pair.degree();
    if d < 2 {
        return Err(Error::DegreeTooLow(d));
    }
    let alg = pair.algebra();
    let n = alg.dim();
    let mut form = SymForm::zero(n, d);
    for index in sorted_multi_indices(n, d) {
        let k = index.iter().take_while(|&&i| i == 0).count();
        if k == d {
            continue;
        }
        let product = index[k + 1..]
            .iter()
            .fold(crate::linalg::unit_vec(n, index[k]), |acc, &i| {
                alg.mul_coords(&acc, &crate::linalg::unit_vec(n, i))
            });
        let p = pair.pi(&product);
        if p.is_zero() {
            continue;
        }
        let sign = if k % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
        let value = &(&(&sign * &factorial(k)) * &factorial(d - k - 1)) * &p;
        form.set(&index, value);
    }
    Ok(form)
}

/// Equation of the invariant hypersurface, scaled so the lexicographically
/// largest monomial (with `x0 > x1 > ...`) has coefficient one.
pub fn hypersurface_equation(pair: &PointedPair) -> Result<HomPoly> {
    Ok(form_to_polynomial(&build_fw(pair)?).normalized())
}

/// Basis of the linear forms `phi` with `phi(1) = 0` and `phi(a b) = 0` for
/// all `a` in `W`: the invariant linear forms. Always empty for a valid pair.
pub fn invariant_linear_forms(pair: &PointedPair) -> Vec<Vec<Scalar>> {
    let alg = pair.algebra();
    let n = alg.dim();
    let mut rows = vec![crate::linalg::unit_vec(n, 0)];
    for a in pair.w_basis() {
        for b in 0..n {
            rows.push(alg.mul_coords(a.coords(), &crate::linalg::unit_vec(n, b)));
        }
    }
    Matrix::from_rows(rows).kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::StructureTable;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    fn truncated(k: usize) -> PointedPair {
        let mut t = StructureTable::new(k);
        for i in 1..k {
            for j in i..k {
                if i + j < k {
                    t.set_monomial(i, j, i + j, Scalar::one());
                }
            }
        }
        let alg = LocalAlgebra::validate(t).unwrap();
        let w = (1..k - 1).map(|i| Element::basis(k, i)).collect();
        PointedPair::new(alg, w, Element::basis(k, k - 1)).unwrap()
    }

    #[test]
    fn polarize_examples() {
        let f = HomPoly::parse("x1^2", 3).unwrap();
        let p = polarize(&f);
        assert_eq!(p.get(&[1, 1]), s("1"));
        assert_eq!(p.entries().count(), 1);
        assert_eq!(polarize(&HomPoly::parse("x0*x1", 2).unwrap()).get(&[1, 0]), s("1/2"));
        let g = HomPoly::parse("6*x0^2*x3 - 6*x0*x1*x2 + 2*x1^3", 4).unwrap();
        let pg = polarize(&g);
        assert_eq!(pg.get(&[0, 0, 3]), s("2"));
        assert_eq!(pg.get(&[2, 0, 1]), s("-1"));
        assert_eq!(pg.get(&[1, 1, 1]), s("2"));
        assert_eq!(form_to_polynomial(&pg), g);
    }

    #[test]
    fn form_to_polynomial_examples() {
        let mut f = SymForm::zero(3, 2);
        f.set(&[0, 2], s("1"));
        assert_eq!(form_to_polynomial(&f).to_string(), "2*x0*x2");
    }

    #[test]
    fn evaluate_examples() {
        let f = polarize(&HomPoly::parse("x1^2", 3).unwrap());
        let e1 = [s("0"), s("1"), s("0")];
        let plus = [s("0"), s("1"), s("1")];
        let minus = [s("0"), s("1"), s("-1")];
        assert_eq!(f.evaluate(&[&e1, &e1]).unwrap(), s("1"));
        assert_eq!(f.evaluate(&[&plus, &minus]).unwrap(), s("1"));
        assert_eq!(f.evaluate(&[&e1, &[s("0"), s("0"), s("0")]]).unwrap(), s("0"));
        assert!(matches!(f.evaluate(&[&e1]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn build_fw_examples() {
        let conic = build_fw(&truncated(3)).unwrap();
        assert_eq!(conic.get(&[0, 2]), s("-1"));
        assert_eq!(conic.get(&[1, 1]), s("1"));
        assert_eq!(conic.entries().count(), 2);
        assert_eq!(form_to_polynomial(&conic).to_string(), "-2*x0*x2 + x1^2");
        assert_eq!(hypersurface_equation(&truncated(3)).unwrap().to_string(), "x0*x2 - 1/2*x1^2");

        let cubic = build_fw(&truncated(4)).unwrap();
        assert_eq!(cubic.get(&[0, 0, 3]), s("2"));
        assert_eq!(cubic.get(&[0, 1, 2]), s("-1"));
        assert_eq!(cubic.get(&[1, 1, 1]), s("2"));
        assert_eq!(cubic.entries().count(), 3);
        assert_eq!(
            form_to_polynomial(&cubic),
            HomPoly::parse("6*x0^2*x3 - 6*x0*x1*x2 + 2*x1^3", 4).unwrap()
        );
        for k in 3..7 {
            let p = truncated(k);
            assert!(is_invariant_form(&build_fw(&p).unwrap(), &p));
            assert!(invariant_linear_forms(&p).is_empty());
        }
    }

    #[test]
    fn invariance_examples() {
        let p = truncated(3);
        // x0^2 satisfies the sum condition but not F(1,1) = 0
        let sq = polarize(&HomPoly::parse("x0^2", 3).unwrap());
        assert_eq!(check_invariance(&sq, &p).unwrap(), None);
        assert!(!is_invariant_form(&sq, &p));
        assert!(!is_invariant_form(&SymForm::zero(3, 2), &p));
        let x1 = polarize(&HomPoly::parse("x1", 3).unwrap());
        let w = check_invariance(&x1, &p).unwrap().unwrap();
        assert_eq!((w.w_index, w.tuple), (0, vec![0]));
    }

    #[test]
    fn invariance_on_square_zero_ideal() {
        // K[x,y]/(x^2, xy, y^2): W = span(x) does not generate, so only the
        // bare invariance sum applies. a * 1 = x survives: F(x, y) = 1/2.
        let alg = LocalAlgebra::validate(StructureTable::new(3)).unwrap();
        assert!(PointedPair::new(alg.clone(), vec![Element::basis(3, 1)], Element::basis(3, 2)).is_err());
        let f = polarize(&HomPoly::parse("x1*x2", 3).unwrap());
        let w = check_invariance_in(&f, &alg, &[Element::basis(3, 1)]).unwrap().unwrap();
        assert_eq!((w.tuple, w.value), (vec![0, 2], s("1/2")));
        let g = polarize(&HomPoly::parse("x2^2", 3).unwrap());
        assert_eq!(check_invariance_in(&g, &alg, &[Element::basis(3, 1)]).unwrap(), None);
    }

    #[test]
    fn product_of_forms() {
        let x0 = polarize(&HomPoly::parse("x0", 2).unwrap());
        let x1 = polarize(&HomPoly::parse("x1", 2).unwrap());
        assert_eq!(product_form(&x0, &x1).unwrap().get(&[0, 1]), s("1/2"));
        assert_eq!(
            product_form(&x1, &x1).unwrap(),
            polarize(&HomPoly::parse("x1^2", 2).unwrap())
        );
    }
}
