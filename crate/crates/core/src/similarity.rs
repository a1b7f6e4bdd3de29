//! Matrix similarity over Q(i) through invariant factors.
//!
//! Two square matrices are similar iff the Smith normal forms of their
//! characteristic matrices `tI - A` agree. No eigenvalues are computed, so
//! the test stays inside the field.

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::unipoly::UniPoly;

type PolyMatrix = Vec<Vec<UniPoly>>;

/// Diagonal of the Smith normal form, each entry monic (or zero), with
/// every entry dividing the next.
pub fn smith_diagonal(mut m: PolyMatrix) -> Vec<UniPoly> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::with_capacity(rows.min(cols));
    for k in 0..rows.min(cols) {
        loop {
            let pivot = (k..rows)
                .flat_map(|i| (k..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by_key(|&(i, j)| m[i][j].degree());
            let Some((pi, pj)) = pivot else {
                diag.extend((k..rows.min(cols)).map(|_| UniPoly::zero()));
                return diag;
            };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let mut clean = true;
            for i in k + 1..rows {
                if m[i][k].is_zero() {
                    continue;
                }
                let (q, r) = m[i][k].div_rem(&m[k][k]);
                let (top, bottom) = m.split_at_mut(i);
                for (x, p) in bottom[0][k..].iter_mut().zip(&top[k][k..]) {
                    *x = &*x - &(&q * p);
                }
                clean &= r.is_zero();
            }
            for j in k + 1..cols {
                if m[k][j].is_zero() {
                    continue;
                }
                let (q, r) = m[k][j].div_rem(&m[k][k]);
                for row in m.iter_mut().skip(k) {
                    let t = &q * &row[k];
                    row[j] = &row[j] - &t;
                }
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (k + 1..rows)
                .find(|&i| (k + 1..cols).any(|j| !m[k][k].divides(&m[i][j])));
            match offender {
                Some(i) => {
                    let (top, bottom) = m.split_at_mut(i);
                    for (x, y) in top[k][k..].iter_mut().zip(&bottom[0][k..]) {
                        *x = &*x + y;
                    }
                }
                None => break,
            }
        }
        diag.push(m[k][k].monic());
    }
    diag
}

/// `tI - A`.
pub fn characteristic_matrix(a: &Matrix) -> PolyMatrix {
    assert!(a.is_square(), "characteristic matrix of a non-square matrix");
    (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| {
                    let c = -a[(i, j)].clone();
                    if i == j {
                        UniPoly::from_coeffs(vec![c, Scalar::one()])
                    } else {
                        UniPoly::constant(c)
                    }
                })
                .collect()
        })
        .collect()
}

/// Nonconstant invariant factors of `A`, each dividing the next.
pub fn invariant_factors(a: &Matrix) -> Vec<UniPoly> {
    smith_diagonal(characteristic_matrix(a))
        .into_iter()
        .filter(|p| !p.is_constant())
        .collect()
}

/// `det(tI - A)` by the Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(a: &Matrix) -> UniPoly {
    let n = a.rows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        let shifted = m.add(&Matrix::identity(n).scale(&coeffs[n + 1 - k]));
        m = a * &shifted;
        coeffs[n - k] = -(m.trace() * Scalar::ratio(1, k as i64));
    }
    UniPoly::from_coeffs(coeffs)
}

pub fn are_similar(a: &Matrix, b: &Matrix) -> bool {
    a.rows() == b.rows() && invariant_factors(a) == invariant_factors(b)
}

/// An invertible `X` with `X A = B X`, i.e. `B = X A X^-1`, when one exists.
///
/// Candidates are `sum_k t^k K_k` over a kernel basis `K_k` for
/// `t = 1, 2, ...`, then seeded random combinations.
pub fn similarity_transform(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let n = a.rows();
    if b.rows() != n || !a.is_square() || !b.is_square() {
        return None;
    }
    // unknown x_{pq} sits at column p*n + q
    let mut system = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for p in 0..n {
                system[(row, i * n + p)] += &a[(p, j)];
                system[(row, p * n + j)] -= &b[(i, p)];
            }
        }
    }
    let kernel = system.kernel();
    if kernel.is_empty() {
        return None;
    }
    let to_matrix = |v: &[Scalar]| Matrix::from_rows(v.chunks(n).map(<[Scalar]>::to_vec).collect());
    let combine = |weights: &[Scalar]| {
        let mut v = vec![Scalar::zero(); n * n];
        for (w, k) in weights.iter().zip(&kernel) {
            crate::linalg::axpy(&mut v, w, k);
        }
        to_matrix(&v)
    };
    for t in 1..=(2 * n * n + 2) as i64 {
        let ts = Scalar::from_int(t);
        let weights: Vec<Scalar> = (0..kernel.len()).map(|k| ts.pow(k as u32)).collect();
        let x = combine(&weights);
        if !x.determinant().is_zero() {
            return Some(x);
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..200 {
        let weights: Vec<Scalar> = (0..kernel.len())
            .map(|_| Scalar::random_small(&mut rng, 10))
            .collect();
        let x = combine(&weights);
        if !x.determinant().is_zero() {
            return Some(x);
        }
    }
    None
}
