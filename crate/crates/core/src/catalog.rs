//! Named algebras and pointed pairs.
//!
//! Catalog queries have the form `name` or `name:params`:
//!
//! | query | object |
//! |-------|--------|
//! | `truncated:k` | `K[x]/(x^k)`, `W = <x, .., x^(k-2)>`, complement `x^(k-1)` |
//! | `quadric_nondegenerate:n` | `K[e1..en]/(ei^2 - ej^2, ei ej)`, `e(n+1) = e1^2` |
//! | `corank_one:L` | corank-one algebra for a symmetric matrix `L`, rows split by `;`, entries by `,` |
//! | `corank_one_blocks:m@l,..` | `corank_one` with a block-diagonal matrix of canonical blocks |
//! | `corank_one_n2_split` | `K[e1,e2]/(e1^3, e1 e2, e2^2)`, `e3 = e1^2` |
//! | `corank_one_n2_chain` | `K[e1]/(e1^4)`, `e2 = e1^3`, `e3 = e1^2` |
//! | `square_zero:m` | algebra with `m^2 = 0` and `dim m = m` (no pair) |

use crate::algebra::{Element, LocalAlgebra, PointedPair, StructureTable};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A catalog object: a bare algebra or an algebra with a hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogEntry {
    Algebra(LocalAlgebra),
    Pair(PointedPair),
}

impl CatalogEntry {
    pub fn algebra(&self) -> &LocalAlgebra {
        match self {
            CatalogEntry::Algebra(a) => a,
            CatalogEntry::Pair(p) => p.algebra(),
        }
    }

    pub fn pair(&self) -> Option<&PointedPair> {
        match self {
            CatalogEntry::Algebra(_) => None,
            CatalogEntry::Pair(p) => Some(p),
        }
    }

    pub fn into_pair(self) -> Option<PointedPair> {
        match self {
            CatalogEntry::Algebra(_) => None,
            CatalogEntry::Pair(p) => Some(p),
        }
    }
}

/// Description of a built-in family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogInfo {
    pub name: &'static str,
    pub params: &'static str,
    pub description: &'static str,
}

pub const BUILTIN: &[CatalogInfo] = &[
    CatalogInfo {
        name: "truncated",
        params: "k",
        description: "K[x]/(x^k); a pair with W = <x, ..., x^(k-2)> when k >= 3",
    },
    CatalogInfo {
        name: "quadric_nondegenerate",
        params: "n",
        description: "K[e1..en]/(ei^2 - ej^2, ei*ej) with e(n+1) = e1^2, W = <e1..en>",
    },
    CatalogInfo {
        name: "corank_one",
        params: "symmetric (n-1)x(n-1) matrix, rows split by ';', entries by ','",
        description: "ei*ej = l_ij e_n, ei^2 = e(n+1) + l_ii e_n, e_n and e(n+1) annihilate m",
    },
    CatalogInfo {
        name: "corank_one_blocks",
        params: "size@lambda,size@lambda,...",
        description: "corank_one with a block-diagonal matrix of canonical symmetric blocks",
    },
    CatalogInfo {
        name: "corank_one_n2_split",
        params: "",
        description: "K[e1,e2]/(e1^3, e1*e2, e2^2) with e3 = e1^2, W = <e1, e2>",
    },
    CatalogInfo {
        name: "corank_one_n2_chain",
        params: "",
        description: "K[e1]/(e1^4) with e2 = e1^3, e3 = e1^2, W = <e1, e2>",
    },
    CatalogInfo {
        name: "square_zero",
        params: "m",
        description: "algebra with m^2 = 0 and dim m = m (no generating hyperplane for m >= 2)",
    },
];

fn build(table: StructureTable, name: String) -> LocalAlgebra {
    LocalAlgebra::validate(table)
        .expect("catalog tables satisfy the algebra axioms")
        .with_name(name)
}

fn pair(alg: LocalAlgebra, w: impl IntoIterator<Item = usize>, complement: usize) -> PointedPair {
    let n = alg.dim();
    PointedPair::new(
        alg,
        w.into_iter().map(|i| Element::basis(n, i)).collect(),
        Element::basis(n, complement),
    )
    .expect("catalog pairs are valid")
}

/// `K[x]/(x^k)` with basis `1, x, .., x^(k-1)`.
pub fn truncated_algebra(k: usize) -> Result<LocalAlgebra> {
    if k == 0 {
        return Err(Error::MalformedParams("truncated needs k >= 1".into()));
    }
    let mut t = StructureTable::new(k);
    for i in 1..k {
        for j in i..k - i {
            t.set_monomial(i, j, i + j, Scalar::one());
        }
    }
    Ok(build(t, format!("truncated:{k}")))
}

/// `K[x]/(x^k)` with `W = <x, .., x^(k-2)>`, `k >= 3`.
pub fn truncated(k: usize) -> Result<PointedPair> {
    if k < 3 {
        return Err(Error::MalformedParams("a truncated pair needs k >= 3".into()));
    }
    Ok(pair(truncated_algebra(k)?, 1..k - 1, k - 1))
}

/// The non-degenerate quadric algebra on `n >= 1` generators.
pub fn quadric_nondegenerate(n: usize) -> Result<PointedPair> {
    if n == 0 {
        return Err(Error::MalformedParams("quadric_nondegenerate needs n >= 1".into()));
    }
    let mut t = StructureTable::new(n + 2);
    for i in 1..=n {
        t.set_monomial(i, i, n + 1, Scalar::one());
    }
    Ok(pair(build(t, format!("quadric_nondegenerate:{n}")), 1..=n, n + 1))
}

/// Corank-one algebra for a symmetric `(n-1) x (n-1)` matrix, `n >= 3`.
pub fn corank_one(lambda: &Matrix) -> Result<PointedPair> {
    let m = lambda.rows();
    if !lambda.is_square() || m < 2 {
        return Err(Error::MalformedLambda(format!(
            "expected a square matrix of size at least 2, got {}x{}",
            lambda.rows(),
            lambda.cols()
        )));
    }
    if !lambda.is_symmetric() {
        return Err(Error::MalformedLambda("matrix is not symmetric".into()));
    }
    let n = m + 1;
    let mut t = StructureTable::new(n + 2);
    for i in 1..n {
        for j in i..n {
            let mut coords = vec![Scalar::zero(); n + 2];
            coords[n] = lambda[(i - 1, j - 1)].clone();
            if i == j {
                coords[n + 1] = Scalar::one();
            }
            t.set_symmetric(i, j, coords)?;
        }
    }
    let name = format!("corank_one:{}", format_lambda(lambda));
    Ok(pair(build(t, name), 1..=n, n + 1))
}

/// Canonical symmetric block of size `m` with eigenvalue `lambda`:
/// `lambda I + (J + J^T)/2 + (i/2) S`, where `S` has `+1` on the
/// antidiagonal `r + c = m - 2` and `-1` on `r + c = m` (0-based).
pub fn canonical_block(m: usize, lambda: &Scalar) -> Matrix {
    let mut b = Matrix::zeros(m, m);
    let half = Scalar::ratio(1, 2);
    let ihalf = Scalar::gaussian((0, 1), (1, 2));
    for r in 0..m {
        b[(r, r)] = lambda.clone();
        if r + 1 < m {
            b[(r, r + 1)] = half.clone();
            b[(r + 1, r)] = half.clone();
        }
        for c in 0..m {
            if r + c + 2 == m {
                b[(r, c)] += &ihalf;
            } else if r + c == m {
                b[(r, c)] -= &ihalf;
            }
        }
    }
    b
}

pub fn block_diagonal(blocks: &[Matrix]) -> Matrix {
    let n: usize = blocks.iter().map(Matrix::rows).sum();
    let mut out = Matrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for r in 0..b.rows() {
            for c in 0..b.cols() {
                out[(off + r, off + c)] = b[(r, c)].clone();
            }
        }
        off += b.rows();
    }
    out
}

/// Corank-one pair for a block-diagonal matrix of canonical blocks.
pub fn corank_one_blocks(blocks: &[(usize, Scalar)]) -> Result<PointedPair> {
    if blocks.iter().any(|(m, _)| *m == 0) {
        return Err(Error::MalformedParams("block sizes must be positive".into()));
    }
    let mats: Vec<Matrix> = blocks.iter().map(|(m, l)| canonical_block(*m, l)).collect();
    corank_one(&block_diagonal(&mats))
}

/// `K[e1,e2]/(e1^3, e1 e2, e2^2)` with `e3 = e1^2`.
pub fn corank_one_n2_split() -> PointedPair {
    let mut t = StructureTable::new(4);
    t.set_monomial(1, 1, 3, Scalar::one());
    pair(build(t, "corank_one_n2_split".into()), [1, 2], 3)
}

/// `K[e1]/(e1^4)` with `e2 = e1^3`, `e3 = e1^2`.
pub fn corank_one_n2_chain() -> PointedPair {
    let mut t = StructureTable::new(4);
    t.set_monomial(1, 1, 3, Scalar::one());
    t.set_monomial(1, 3, 2, Scalar::one());
    pair(build(t, "corank_one_n2_chain".into()), [1, 2], 3)
}

/// Algebra of dimension `m + 1` whose maximal ideal squares to zero.
pub fn square_zero(m: usize) -> LocalAlgebra {
    build(StructureTable::new(m + 1), format!("square_zero:{m}"))
}

/// Parses `a,b;c,d` into a matrix.
pub fn parse_lambda(text: &str) -> Result<Matrix> {
    let rows: Vec<Vec<Scalar>> = text
        .split(';')
        .map(|row| row.split(',').map(|e| e.trim().parse()).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::MalformedLambda("rows have different lengths".into()));
    }
    Ok(Matrix::from_rows(rows))
}

pub fn format_lambda(m: &Matrix) -> String {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(Scalar::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_count(name: &str, params: Option<&str>) -> Result<usize> {
    let p = params.ok_or_else(|| Error::MalformedParams(format!("{name} needs a parameter")))?;
    p.trim()
        .parse()
        .map_err(|_| Error::MalformedParams(format!("{name}: {p:?} is not a count")))
}

fn no_params(name: &str, params: Option<&str>) -> Result<()> {
    match params {
        None => Ok(()),
        Some(p) => Err(Error::MalformedParams(format!("{name} takes no parameters, got {p:?}"))),
    }
}

/// Builds the entry named by `name[:params]`.
pub fn lookup(query: &str) -> Result<CatalogEntry> {
    let (name, params) = match query.split_once(':') {
        Some((n, p)) => (n.trim(), Some(p)),
        None => (query.trim(), None),
    };
    match name {
        "truncated" => {
            let k = parse_count(name, params)?;
            if k >= 3 {
                Ok(CatalogEntry::Pair(truncated(k)?))
            } else {
                Ok(CatalogEntry::Algebra(truncated_algebra(k)?))
            }
        }
        "quadric_nondegenerate" => Ok(CatalogEntry::Pair(quadric_nondegenerate(parse_count(
            name, params,
        )?)?)),
        "corank_one" => {
            let p = params.ok_or_else(|| Error::MalformedParams("corank_one needs a matrix".into()))?;
            Ok(CatalogEntry::Pair(corank_one(&parse_lambda(p)?)?))
        }
        "corank_one_blocks" => {
            let p = params
                .ok_or_else(|| Error::MalformedParams("corank_one_blocks needs blocks".into()))?;
            let blocks = p
                .split(',')
                .map(|b| {
                    let (m, l) = b.split_once('@').ok_or_else(|| {
                        Error::MalformedParams(format!("block {b:?} is not size@lambda"))
                    })?;
                    let m: usize = m
                        .trim()
                        .parse()
                        .map_err(|_| Error::MalformedParams(format!("bad block size {m:?}")))?;
                    Ok((m, l.trim().parse()?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CatalogEntry::Pair(corank_one_blocks(&blocks)?))
        }
        "corank_one_n2_split" => {
            no_params(name, params)?;
            Ok(CatalogEntry::Pair(corank_one_n2_split()))
        }
        "corank_one_n2_chain" => {
            no_params(name, params)?;
            Ok(CatalogEntry::Pair(corank_one_n2_chain()))
        }
        "square_zero" => Ok(CatalogEntry::Algebra(square_zero(parse_count(name, params)?))),
        _ => Err(Error::UnknownCatalog(query.to_string())),
    }
}

/// A spread of pairs covering every family, used by property checks.
pub fn sample_pairs() -> Vec<PointedPair> {
    let mut out = Vec::new();
    for k in 3..=6 {
        out.push(truncated(k).unwrap());
    }
    for n in 1..=5 {
        out.push(quadric_nondegenerate(n).unwrap());
    }
    out.push(corank_one_n2_split());
    out.push(corank_one_n2_chain());
    for query in [
        "corank_one:0,0;0,0",
        "corank_one:0,0;0,1",
        "corank_one:0+1/2i,1/2;1/2,0-1/2i",
        "corank_one:0,0,0;0,1,0;0,0,2",
        "corank_one:1,2,0;2,-1,1/3;0,1/3,0+i",
        "corank_one_blocks:3@0",
        "corank_one_blocks:2@1,2@-1",
    ] {
        out.push(lookup(query).unwrap().into_pair().unwrap());
    }
    out
}
