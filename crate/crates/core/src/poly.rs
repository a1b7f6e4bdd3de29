//! Sparse multivariate polynomials over Q(i).
//!
//! [`Poly`] is a general polynomial used for symbolic group parameters and
//! derivatives; [`HomPoly`] adds the homogeneity invariant for hypersurface
//! equations.
//!
//! Text format: terms joined by `+`/`-`, each term `coeff*x0^a0*x3*...`.
//! Coefficients with an imaginary part are parenthesized, a unit coefficient
//! is omitted and exponents of one are dropped, e.g. `x0*x2 - 1/2*x1^2`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Exponent = Vec<u32>;

/// Order in which terms are listed when rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermOrder {
    /// Lexicographic with `x0 > x1 > ...`, largest first.
    Lex,
    /// Increasing total degree; ties broken as in [`TermOrder::Lex`].
    DegreeAscending,
}

/// Lexicographic comparison with `x0 > x1 > ...`: the "larger" exponent
/// comes first when sorting with this function.
pub fn lex_first(a: &[u32], b: &[u32]) -> Ordering {
    b.cmp(a)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    n_vars: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl Poly {
    pub fn zero(n_vars: usize) -> Self {
        Poly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Scalar) -> Self {
        let mut p = Poly::zero(n_vars);
        p.add_term(vec![0; n_vars], c);
        p
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Poly::monomial(e, Scalar::one())
    }

    pub fn monomial(exp: Exponent, c: Scalar) -> Self {
        let mut p = Poly::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Scalar)>>(n_vars: usize, terms: I) -> Self {
        let mut p = Poly::zero(n_vars);
        for (e, c) in terms {
            assert_eq!(e.len(), n_vars, "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    /// Adds `c * x^exp`, dropping the term if it cancels.
    pub fn add_term(&mut self, exp: Exponent, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::from_terms(self.n_vars, self.terms.iter().map(|(e, c)| (e.clone(), c * s)))
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::constant(self.n_vars, Scalar::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.n_vars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out.add_term(ne, c * &Scalar::from_int(e[var] as i64));
        }
        out
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.n_vars, "evaluation point has wrong length");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .filter(|(&k, _)| k > 0)
                    .fold(c.clone(), |acc, (&k, x)| &acc * &x.pow(k))
            })
            .sum()
    }

    /// Terms sorted for display.
    pub fn ordered_terms(&self, order: TermOrder) -> Vec<(&Exponent, &Scalar)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        match order {
            TermOrder::Lex => terms.sort_by(|a, b| lex_first(a.0, b.0)),
            TermOrder::DegreeAscending => terms.sort_by(|a, b| {
                let da: u32 = a.0.iter().sum();
                let db: u32 = b.0.iter().sum();
                da.cmp(&db).then_with(|| lex_first(a.0, b.0))
            }),
        }
        terms
    }

    /// The first term in [`TermOrder::Lex`].
    pub fn leading_term(&self) -> Option<(&Exponent, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn render(&self, style: &RenderStyle<'_>) -> String {
        let terms = self.ordered_terms(style.order);
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative_like();
            let mag = if negative { -c.clone() } else { c.clone() };
            match (idx, negative, style.spaced) {
                (0, true, _) => out.push('-'),
                (0, false, _) => {}
                (_, true, true) => out.push_str(" - "),
                (_, false, true) => out.push_str(" + "),
                (_, true, false) => out.push('-'),
                (_, false, false) => out.push('+'),
            }
            out.push_str(&render_term(e, &mag, style.prefix));
        }
        out
    }

    /// Parses the text format with variables `<prefix>0, <prefix>1, ..`.
    pub fn parse(text: &str, prefix: &str, n_vars: usize) -> Result<Poly> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason: &str| Error::Parse {
            what: "polynomial",
            input: text.to_string(),
            reason: reason.to_string(),
        };
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        let mut poly = Poly::zero(n_vars);
        for (sign, body) in split_terms(&compact).map_err(|r| err(&r))? {
            let mut coeff = Scalar::from_int(sign);
            let mut exp = vec![0u32; n_vars];
            for factor in split_factors(body).map_err(|r| err(&r))? {
                if let Some((idx, power)) = parse_variable(factor, prefix).map_err(|r| err(&r))? {
                    if idx >= n_vars {
                        return Err(err(&format!("variable index {idx} out of range")));
                    }
                    exp[idx] += power;
                } else {
                    let inner = factor
                        .strip_prefix('(')
                        .and_then(|f| f.strip_suffix(')'))
                        .unwrap_or(factor);
                    let s: Scalar = inner.parse()?;
                    coeff = &coeff * &s;
                }
            }
            poly.add_term(exp, coeff);
        }
        Ok(poly)
    }
}

/// How to print a polynomial.
#[derive(Clone, Copy, Debug)]
pub struct RenderStyle<'a> {
    pub prefix: &'a str,
    pub order: TermOrder,
    /// `a + b` instead of `a+b`.
    pub spaced: bool,
}

impl RenderStyle<'static> {
    pub const EQUATION: RenderStyle<'static> = RenderStyle {
        prefix: "x",
        order: TermOrder::Lex,
        spaced: true,
    };
}

fn render_coeff(c: &Scalar) -> String {
    if c.is_real() {
        c.to_string()
    } else {
        format!("({c})")
    }
}

fn render_monomial(e: &[u32], prefix: &str) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("{prefix}{i}")
            } else {
                format!("{prefix}{i}^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn render_term(e: &[u32], mag: &Scalar, prefix: &str) -> String {
    let mono = render_monomial(e, prefix);
    if mono.is_empty() {
        render_coeff(mag)
    } else if mag.is_one() {
        mono
    } else {
        format!("{}*{}", render_coeff(mag), mono)
    }
}

/// Splits at top-level `+`/`-`, returning `(sign, body)` pairs.
fn split_terms(s: &str) -> std::result::Result<Vec<(i64, &str)>, String> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut sign = 1i64;
    for (p, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth < 0 {
                    return Err("unbalanced parentheses".into());
                }
            }
            b'+' | b'-' if depth == 0 => {
                let body = &s[start..p];
                if p == 0 {
                    sign = if b == b'-' { -1 } else { 1 };
                    start = 1;
                    continue;
                }
                // a fraction denominator or exponent cannot carry a sign
                if matches!(bytes[p - 1], b'/' | b'^' | b'*') {
                    return Err("misplaced sign".into());
                }
                if body.is_empty() {
                    return Err("empty term".into());
                }
                out.push((sign, body));
                sign = if b == b'-' { -1 } else { 1 };
                start = p + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err("unbalanced parentheses".into());
    }
    let body = &s[start..];
    if body.is_empty() {
        return Err("empty term".into());
    }
    out.push((sign, body));
    Ok(out)
}

fn split_factors(term: &str) -> std::result::Result<Vec<&str>, String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (p, ch) in term.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => {
                out.push(&term[start..p]);
                start = p + 1;
            }
            _ => {}
        }
    }
    out.push(&term[start..]);
    if out.iter().any(|f| f.is_empty()) {
        return Err("empty factor".into());
    }
    Ok(out)
}

fn parse_variable(factor: &str, prefix: &str) -> std::result::Result<Option<(usize, u32)>, String> {
    let Some(rest) = factor.strip_prefix(prefix) else {
        return Ok(None);
    };
    if !rest.starts_with(|c: char| c.is_ascii_digit()) {
        return Ok(None);
    }
    let (idx, power) = match rest.split_once('^') {
        Some((i, p)) => (i, p.parse::<u32>().map_err(|_| format!("bad exponent in {factor:?}"))?),
        None => (rest, 1),
    };
    let idx = idx
        .parse::<usize>()
        .map_err(|_| format!("bad variable {factor:?}"))?;
    Ok(Some((idx, power)))
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n_vars, rhs.n_vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n_vars, rhs.n_vars);
        let mut out = Poly::zero(self.n_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&RenderStyle::EQUATION))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A homogeneous polynomial of fixed degree in `n_vars` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomPoly {
    poly: Poly,
    degree: usize,
}

impl HomPoly {
    pub fn new(poly: Poly, degree: usize) -> Result<Self> {
        for e in poly.terms.keys() {
            let d: u32 = e.iter().sum();
            if d as usize != degree {
                return Err(Error::Parse {
                    what: "homogeneous polynomial",
                    input: poly.to_string(),
                    reason: format!("term of degree {d} in a degree-{degree} polynomial"),
                });
            }
        }
        Ok(HomPoly { poly, degree })
    }

    /// Degree is read off the terms; the zero polynomial gets degree 0.
    pub fn from_poly(poly: Poly) -> Result<Self> {
        let d = poly.total_degree().unwrap_or(0);
        HomPoly::new(poly, d)
    }

    pub fn zero(n_vars: usize, degree: usize) -> Self {
        HomPoly {
            poly: Poly::zero(n_vars),
            degree,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.poly.n_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn as_poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, exp: &[u32]) -> Scalar {
        self.poly.coeff(exp)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.poly.terms()
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        self.poly.evaluate(point)
    }

    pub fn scale(&self, s: &Scalar) -> HomPoly {
        HomPoly {
            poly: self.poly.scale(s),
            degree: self.degree,
        }
    }

    pub fn mul(&self, other: &HomPoly) -> HomPoly {
        HomPoly {
            poly: &self.poly * &other.poly,
            degree: self.degree + other.degree,
        }
    }

    /// Divides by the coefficient of the first term in [`TermOrder::Lex`]
    /// so that it becomes one.
    pub fn normalized(&self) -> HomPoly {
        match self.poly.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("stored coefficients are nonzero")),
        }
    }

    pub fn parse(text: &str, n_vars: usize) -> Result<HomPoly> {
        HomPoly::from_poly(Poly::parse(text, "x", n_vars)?)
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.poly, f)
    }
}

impl fmt::Debug for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.poly, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn render_equation_style() {
        let f = Poly::from_terms(
            3,
            vec![(vec![0, 2, 0], s("-1/2")), (vec![1, 0, 1], s("1"))],
        );
        assert_eq!(f.to_string(), "x0*x2 - 1/2*x1^2");
        let g = Poly::from_terms(
            4,
            vec![
                (vec![2, 0, 0, 1], s("6")),
                (vec![1, 1, 1, 0], s("-6")),
                (vec![0, 3, 0, 0], s("2")),
            ],
        );
        assert_eq!(g.to_string(), "6*x0^2*x3 - 6*x0*x1*x2 + 2*x1^3");
        let h = Poly::from_terms(2, vec![(vec![1, 0], s("-1+i")), (vec![0, 1], s("-i"))]);
        assert_eq!(h.to_string(), "-(1-i)*x0 - (0+i)*x1");
        assert_eq!(Poly::zero(3).to_string(), "0");
        assert_eq!(Poly::constant(2, s("-3")).to_string(), "-3");
    }

    #[test]
    fn render_compact_degree_order() {
        // a2 + 1/6*a1^3 with variables a1, a2 stored at indices 1, 2
        let p = Poly::from_terms(
            3,
            vec![(vec![0, 3, 0], s("1/6")), (vec![0, 0, 1], s("1"))],
        );
        let style = RenderStyle {
            prefix: "a",
            order: TermOrder::DegreeAscending,
            spaced: false,
        };
        assert_eq!(p.render(&style), "a2+1/6*a1^3");
    }

    #[test]
    fn parse_examples() {
        let f = Poly::parse("x0*x2 - 1/2*x1^2", "x", 3).unwrap();
        assert_eq!(f.coeff(&[1, 0, 1]), s("1"));
        assert_eq!(f.coeff(&[0, 2, 0]), s("-1/2"));
        let g = Poly::parse("-(1-i)*x0 - (0+i)*x1 + 2*x0", "x", 2).unwrap();
        assert_eq!(g.coeff(&[1, 0]), s("1+i"));
        assert_eq!(g.coeff(&[0, 1]), s("-i"));
        assert_eq!(Poly::parse("3", "x", 2).unwrap(), Poly::constant(2, s("3")));
        assert_eq!(Poly::parse("x1*x1", "x", 2).unwrap(), Poly::monomial(vec![0, 2], s("1")));
        for bad in ["", "x0 +", "x5", "(1+i*x0", "x0^-1", "1/0*x0", "x0 ++ x1"] {
            assert!(Poly::parse(bad, "x", 3).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn homogeneity_is_enforced() {
        assert!(HomPoly::parse("x0*x1 + x2", 3).is_err());
        let f = HomPoly::parse("2*x0*x2 - x1^2", 3).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.normalized().to_string(), "x0*x2 - 1/2*x1^2");
    }

    #[test]
    fn derivative_and_evaluate() {
        let f = Poly::parse("x0^2*x1 - 3*x1^3", "x", 2).unwrap();
        assert_eq!(f.derivative(1), Poly::parse("x0^2 - 9*x1^2", "x", 2).unwrap());
        assert_eq!(f.evaluate(&[s("2"), s("1")]), s("1"));
        assert_eq!(f.evaluate(&[s("i"), s("0")]), s("0"));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(
            (prop::collection::vec(0u32..3, 3), -5i64..5, 1i64..4, -5i64..5),
            0..6,
        )
        .prop_map(|terms| {
            Poly::from_terms(
                3,
                terms
                    .into_iter()
                    .map(|(e, a, b, c)| (e, Scalar::gaussian((a, b), (c, 1)))),
            )
        })
    }

    proptest! {
        #[test]
        fn render_parse_roundtrip(p in arb_poly()) {
            prop_assert_eq!(Poly::parse(&p.to_string(), "x", 3).unwrap(), p);
        }

        #[test]
        fn product_evaluates_to_product(p in arb_poly(), q in arb_poly(),
                                        a in -3i64..3, b in -3i64..3, c in -3i64..3) {
            let pt = [Scalar::from_int(a), Scalar::from_int(b), Scalar::gaussian((c, 1), (1, 2))];
            prop_assert_eq!((&p * &q).evaluate(&pt), &p.evaluate(&pt) * &q.evaluate(&pt));
        }
    }
}
