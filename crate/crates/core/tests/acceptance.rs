//! Acceptance criteria, each run in exact arithmetic. Prints one PASS or
//! FAIL line per criterion and exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use addax_core::action::{rho, rho_symbolic, singular_at, ProjPoint};
use addax_core::catalog::{self, sample_pairs};
use addax_core::classify::{
    canonical_gram, canonicalize_nondegenerate, extract_lambda, j_invariant_n4, lambda_equivalent,
    lambda_label, transform_gram, BilinearTriple, LambdaData,
};
use addax_core::linalg::{Matrix, Subspace};
use addax_core::multilinear::{
    build_fw, check_invariance, form_to_polynomial, hypersurface_equation, is_invariant_form, polarize,
    sorted_multi_indices, SymForm,
};
use addax_core::poly::{HomPoly, Poly};
use addax_core::{ChangeOfBasis, Element, LocalAlgebra, PointedPair, Scalar, StructureTable};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn s(t: &str) -> Scalar {
    t.parse().unwrap()
}

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn random_invertible(rng: &mut StdRng, m: usize) -> Matrix {
    loop {
        let rows = (0..m)
            .map(|_| (0..m).map(|_| Scalar::random_small(rng, 3)).collect())
            .collect();
        let a = Matrix::from_rows(rows);
        if !a.determinant().is_zero() {
            return a;
        }
    }
}

/// `(I - S)(I + S)^-1` for a random rational skew matrix `S`.
fn random_orthogonal(rng: &mut StdRng, m: usize) -> Matrix {
    let mut skew = Matrix::zeros(m, m);
    for i in 0..m {
        for j in i + 1..m {
            let v = Scalar::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3));
            skew[(i, j)] = v.clone();
            skew[(j, i)] = -v;
        }
    }
    let id = Matrix::identity(m);
    &id.sub(&skew) * &id.add(&skew).inverse().unwrap()
}

/// Independent check of invariance: evaluates the defect sums directly on
/// vectors for every W vector and basis tuple.
fn invariant_by_evaluation(form: &SymForm, pair: &PointedPair) -> bool {
    let n = pair.dim();
    let d = form.arity();
    let alg = pair.algebra();
    for w in pair.w_basis() {
        for tuple in sorted_multi_indices(n, d) {
            let base: Vec<Vec<Scalar>> = tuple.iter().map(|&t| Element::basis(n, t).into_coords()).collect();
            let mut sum = Scalar::zero();
            for k in 0..d {
                let mut args = base.clone();
                args[k] = alg.mul_coords(w.coords(), &args[k]);
                let refs: Vec<&[Scalar]> = args.iter().map(|v| v.as_slice()).collect();
                sum += &form.evaluate(&refs).unwrap();
            }
            if !sum.is_zero() {
                return false;
            }
        }
    }
    true
}

fn criterion_1() {
    let pairs = sample_pairs();
    assert!(pairs.len() >= 10);
    for p in &pairs {
        let f = build_fw(p).unwrap();
        assert!(is_invariant_form(&f, p), "{:?}", p.algebra().name());
        assert_eq!(check_invariance(&f, p).unwrap(), None);
        assert!(invariant_by_evaluation(&f, p));
        assert!(f.nonzero_on_maximal_ideal());
    }
}

fn criterion_2() {
    for p in sample_pairs() {
        let f = hypersurface_equation(&p).unwrap();
        assert!(!f.is_zero());
        assert_eq!(f.as_poly().total_degree(), Some(p.degree()));
        assert_eq!(f.degree(), p.degree());
    }
    let conic = catalog::truncated(3).unwrap();
    assert_eq!(conic.degree(), 2);
    assert_eq!(hypersurface_equation(&conic).unwrap().degree(), 2);
}

fn coefficient(c: &Scalar, monomial: &str) -> String {
    if c.is_one() {
        monomial.to_string()
    } else {
        format!("{c}*{monomial}")
    }
}

fn criterion_3() {
    let split = rho_symbolic(&catalog::corank_one_n2_split()).formula();
    assert_eq!(split, "[x0 : x1+a1*x0 : x2+a2*x0 : x3+1/2*a1^2*x0+a1*x1]");
    let chain = rho_symbolic(&catalog::corank_one_n2_chain()).formula();
    assert_eq!(
        chain,
        "[x0 : x1+a1*x0 : x2+(a2+1/6*a1^3)*x0+1/2*a1^2*x1+a1*x3 : x3+1/2*a1^2*x0+a1*x1]"
    );
    // Lambda = diag(0, 1, t); the displayed coefficients with t substituted
    for t in ["2", "3", "1/2", "5/3"] {
        let ts = s(t);
        let half_t = &ts * &s("1/2");
        let lam = Matrix::diagonal(&[s("0"), s("1"), ts.clone()]);
        let got = rho_symbolic(&catalog::corank_one(&lam).unwrap()).formula();
        let expected = format!(
            "[x0 : x1+a1*x0 : x2+a2*x0 : x3+a3*x0 : x4+(a4+1/2*a2^2+{})*x0+a2*x2+{} : \
             x5+(1/2*a1^2+1/2*a2^2+1/2*a3^2)*x0+a1*x1+a2*x2+a3*x3]",
            coefficient(&half_t, "a3^2"),
            coefficient(&ts, "a3*x3"),
        );
        assert_eq!(got, expected, "t = {t}");
    }
}

fn criterion_4() {
    let mut r = rng(4);
    for p in sample_pairs() {
        let n = p.n();
        let big_n = p.dim();
        let id = Matrix::identity(big_n);
        for _ in 0..100 {
            let a: Vec<Scalar> = (0..n).map(|_| Scalar::random_small(&mut r, 5)).collect();
            let b: Vec<Scalar> = (0..n).map(|_| Scalar::random_small(&mut r, 5)).collect();
            let ab: Vec<Scalar> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let ra = rho(&p, &a).unwrap();
            let rb = rho(&p, &b).unwrap();
            assert_eq!(ra.compose(&rb), rho(&p, &ab).unwrap());
            assert!(ra.matrix().sub(&id).pow(big_n as u32).is_zero());
        }
    }
}

fn criterion_5() {
    let mut r = rng(5);
    for n in 1..=4 {
        let canonical = catalog::quadric_nondegenerate(n).unwrap();
        let base = BilinearTriple::from_pair(canonical.clone()).unwrap();
        let big_n = n + 2;
        for _ in 0..20 {
            let p = ChangeOfBasis::from_ideal_block(&random_invertible(&mut r, big_n - 1)).unwrap();
            let pinv = p.matrix().inverse().unwrap();
            let moved = base.change_basis(&p).unwrap();
            // W presented by scaled, rotated, flag-mixed images of e1..en
            let o = random_orthogonal(&mut r, n);
            let scales: Vec<Scalar> = (0..n).map(|_| Scalar::random_nonzero(&mut r, 4)).collect();
            let u: Vec<Vec<Scalar>> = (0..n)
                .map(|j| {
                    let mut v = vec![Scalar::zero(); big_n];
                    for i in 0..n {
                        v[i + 1] = &o[(i, j)] * &scales[j];
                    }
                    v
                })
                .collect();
            let w: Vec<Element> = (0..n)
                .map(|i| {
                    let mut v = u[i].clone();
                    for uj in &u[..i] {
                        let t = Scalar::random_small(&mut r, 3);
                        for (x, y) in v.iter_mut().zip(uj) {
                            *x += &(&t * y);
                        }
                    }
                    Element::new(pinv.mul_vec(&v))
                })
                .collect();
            let mut c = vec![Scalar::zero(); big_n];
            c[n + 1] = Scalar::random_nonzero(&mut r, 4);
            for x in c.iter_mut().take(n + 1).skip(1) {
                *x = Scalar::random_small(&mut r, 3);
            }
            let pair = moved
                .pair()
                .with_presentation(w, Element::new(pinv.mul_vec(&c)))
                .unwrap();
            let scale = Scalar::random_nonzero(&mut r, 5);
            let input = BilinearTriple::new(pair, moved.form().scale(&scale)).unwrap();

            let out = canonicalize_nondegenerate(&input).unwrap();
            assert_eq!(out.triple.pair().algebra().table(), canonical.algebra().table());
            assert_eq!(out.triple.gram(), canonical_gram(n, n));
            let recomputed = transform_gram(&input.gram(), out.change.matrix()).scale(&out.form_scale.inv().unwrap());
            assert_eq!(recomputed, canonical_gram(n, n));
            let moved_alg = input.pair().algebra().change_basis(&out.change).unwrap();
            assert_eq!(moved_alg.table(), canonical.algebra().table());
        }
    }
}

fn criterion_6() {
    // (a)
    let split = extract_lambda(&BilinearTriple::from_pair(catalog::corank_one_n2_split()).unwrap()).unwrap();
    let chain = extract_lambda(&BilinearTriple::from_pair(catalog::corank_one_n2_chain()).unwrap()).unwrap();
    assert_eq!(lambda_label(&split.lambda).text, "N2_SPLIT");
    assert_eq!(lambda_label(&chain.lambda).text, "N2_CHAIN");
    assert!(!lambda_equivalent(&split.lambda, &chain.lambda).unwrap().is_equivalent());

    // (b)
    let mut r = rng(6);
    let reps: Vec<LambdaData> = ["0,0;0,0", "0,0;0,1", "0+1/2i,1/2;1/2,0-1/2i"]
        .iter()
        .map(|t| LambdaData::generic(catalog::parse_lambda(t).unwrap()).unwrap())
        .collect();
    for (i, a) in reps.iter().enumerate() {
        for (j, b) in reps.iter().enumerate() {
            if i != j {
                assert!(!lambda_equivalent(a, b).unwrap().is_equivalent());
            }
        }
    }
    for rep in &reps {
        for _ in 0..5 {
            let o = random_orthogonal(&mut r, 2);
            let alpha = Scalar::random_nonzero(&mut r, 4);
            let beta = Scalar::random_small(&mut r, 4);
            let shifted = rep.lam.scale(&alpha).add(&Matrix::identity(2).scale(&beta));
            let conj = &(&o * &shifted) * &o.transpose();
            let other = LambdaData::generic(conj.clone()).unwrap();
            match lambda_equivalent(rep, &other).unwrap() {
                addax_core::classify::Equivalence::Equivalent(cert) => assert!(cert.verify(&rep.lam, &conj)),
                e => panic!("{e:?}"),
            }
            assert_eq!(lambda_label(rep), lambda_label(&other));
        }
        // through a basis change of the whole triple
        let pair = catalog::corank_one(&rep.lam).unwrap();
        let p = ChangeOfBasis::from_ideal_block(&random_invertible(&mut r, 4)).unwrap();
        let triple = BilinearTriple::from_pair(pair).unwrap().change_basis(&p).unwrap();
        let ex = extract_lambda(&triple).unwrap();
        assert!(lambda_equivalent(rep, &ex.lambda).unwrap().is_equivalent());
    }

    // (c)
    let t = s("2");
    let one = Scalar::one();
    let orbit = [
        t.clone(),
        t.inv().unwrap(),
        &one - &t,
        (&t - &one).checked_div(&t).unwrap(),
        t.checked_div(&(&t - &one)).unwrap(),
        (&one - &t).inv().unwrap(),
    ];
    let mut values: Vec<Scalar> = orbit.to_vec();
    values.extend([s("3"), s("4"), s("0+i")]);
    let diag = |t: &Scalar| LambdaData::generic(Matrix::diagonal(&[s("0"), s("1"), t.clone()])).unwrap();
    for a in &values {
        for b in &values {
            let same_j = j_invariant_n4(a).unwrap() == j_invariant_n4(b).unwrap();
            assert_eq!(lambda_equivalent(&diag(a), &diag(b)).unwrap().is_equivalent(), same_j, "{a} vs {b}");
        }
    }
    for v in &orbit {
        assert_eq!(j_invariant_n4(v).unwrap(), s("27/4"));
    }
}

fn criterion_7() {
    let mut pairs: Vec<PointedPair> = sample_pairs().into_iter().filter(|p| p.degree() >= 3).collect();
    pairs.push(catalog::truncated(7).unwrap());
    assert!(!pairs.is_empty());
    for p in &pairs {
        let f = hypersurface_equation(p).unwrap();
        let point = ProjPoint::new(p.complement().coords().to_vec()).unwrap();
        assert!(f.evaluate(point.coords()).is_zero());
        assert!(singular_at(&f, &point).unwrap());
    }
    let mut r = rng(7);
    for n in 1..=5 {
        let p = catalog::quadric_nondegenerate(n).unwrap();
        let f = hypersurface_equation(&p).unwrap();
        let last = n + 1;
        let origin_side = ProjPoint::new(p.complement().coords().to_vec()).unwrap();
        assert!(!singular_at(&f, &origin_side).unwrap());
        for _ in 0..20 {
            // f is linear in the last coordinate once x0 != 0
            let mut x: Vec<Scalar> = (0..=last).map(|_| Scalar::random_small(&mut r, 5)).collect();
            x[0] = Scalar::random_nonzero(&mut r, 5);
            x[last] = Scalar::zero();
            let f0 = f.evaluate(&x);
            x[last] = Scalar::one();
            let slope = &f.evaluate(&x) - &f0;
            x[last] = -f0.checked_div(&slope).unwrap();
            let point = ProjPoint::new(x).unwrap();
            assert!(f.evaluate(point.coords()).is_zero());
            assert!(!singular_at(&f, &point).unwrap());
        }
    }
}

/// Appends `p` basis vectors annihilating the maximal ideal, puts them at
/// random positions and adds them to W.
fn pad(pair: &PointedPair, p: usize, r: &mut StdRng) -> PointedPair {
    let n = pair.dim();
    let total = n + p;
    let alg = pair.algebra();
    let mut table = StructureTable::new(total);
    for i in 1..n {
        for j in 1..n {
            let mut c = alg.basis_product(i, j);
            c.resize(total, Scalar::zero());
            table.set(i, j, c).unwrap();
        }
    }
    let padded = LocalAlgebra::validate(table).unwrap();
    let extend = |v: &Element| {
        let mut c = v.coords().to_vec();
        c.resize(total, Scalar::zero());
        Element::new(c)
    };
    let mut w: Vec<Element> = pair.w_basis().iter().map(extend).collect();
    w.extend((n..total).map(|k| Element::basis(total, k)));
    let wide = PointedPair::new(padded, w, extend(pair.complement())).unwrap();

    let mut slots: Vec<usize> = (1..total).collect();
    slots.shuffle(r);
    let mut z_slots: Vec<usize> = slots[..p].to_vec();
    z_slots.sort();
    let mut zs = n..total;
    let mut olds = 1..n;
    let mut perm = vec![0];
    for k in 1..total {
        perm.push(if z_slots.contains(&k) { zs.next().unwrap() } else { olds.next().unwrap() });
    }
    let mut m = Matrix::zeros(total, total);
    for (k, &old) in perm.iter().enumerate() {
        m[(old, k)] = Scalar::one();
    }
    wide.change_basis(&ChangeOfBasis::new(m).unwrap()).unwrap()
}

fn criterion_8() {
    let mut r = rng(8);
    let bases: Vec<PointedPair> = vec![
        catalog::truncated(3).unwrap(),
        catalog::truncated(5).unwrap(),
        catalog::quadric_nondegenerate(2).unwrap(),
        catalog::quadric_nondegenerate(3).unwrap(),
        catalog::corank_one_n2_chain(),
        catalog::lookup("corank_one:0,0;0,1").unwrap().into_pair().unwrap(),
    ];
    for base in &bases {
        for p in 1..=3 {
            let padded = pad(base, p, &mut r);
            let alg = padded.algebra();
            let ideal = alg.largest_ideal_in(&padded.w_subspace()).unwrap();
            assert!(ideal.dim() >= p);
            assert!(alg.is_ideal(&ideal));
            let f = hypersurface_equation(&padded).unwrap();
            let (reduced, q) = padded.quotient(&ideal).unwrap();
            let kept = q.kept_indices().to_vec();
            for (e, _) in f.terms() {
                for (k, &x) in e.iter().enumerate() {
                    assert!(x == 0 || kept.contains(&k), "equation uses an ideal coordinate");
                }
            }
            let deleted = Poly::from_terms(
                kept.len(),
                f.terms().map(|(e, c)| (kept.iter().map(|&k| e[k]).collect(), c.clone())),
            );
            let g = hypersurface_equation(&reduced).unwrap();
            assert_eq!(g, HomPoly::from_poly(deleted).unwrap());
            let again = reduced.algebra().largest_ideal_in(&reduced.w_subspace()).unwrap();
            assert!(again.is_zero());
            assert_eq!(Subspace::span(reduced.dim(), Vec::<Vec<Scalar>>::new()), again);
        }
    }
}

fn random_scalar(r: &mut StdRng) -> Scalar {
    let big = |r: &mut StdRng| (r.gen_range(-1_000_000_000_000i64..=1_000_000_000_000), r.gen_range(1..=1_000_000i64));
    match r.gen_range(0..4) {
        0 => Scalar::random_small(r, 20),
        1 => Scalar::gaussian(big(r), (0, 1)),
        2 => Scalar::gaussian((0, 1), big(r)),
        _ => Scalar::gaussian(big(r), big(r)),
    }
}

fn criterion_9() {
    let mut r = rng(9);
    for _ in 0..200 {
        let n = r.gen_range(1..=8);
        let d = r.gen_range(1..=4);
        let terms = r.gen_range(1..=6);
        let mut f = Poly::zero(n);
        for _ in 0..terms {
            let mut e = vec![0u32; n];
            for _ in 0..d {
                e[r.gen_range(0..n)] += 1;
            }
            f = &f + &Poly::monomial(e, Scalar::random_nonzero(&mut r, 9));
        }
        let f = HomPoly::new(f, d).unwrap();
        let form = polarize(&f);
        assert_eq!(form_to_polynomial(&form), f);
        assert_eq!(polarize(&form_to_polynomial(&form)), form);
    }
    for _ in 0..200 {
        let x = random_scalar(&mut r);
        let text = x.to_string();
        assert_eq!(text.parse::<Scalar>().unwrap(), x, "{text}");
        assert_eq!(text.parse::<Scalar>().unwrap().to_string(), text);
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 9] = [
        ("F_W is invariant on every catalog pair", criterion_1),
        ("degree equals the equation degree", criterion_2),
        ("symbolic actions match the displayed formulas", criterion_3),
        ("rho is a unipotent homomorphism", criterion_4),
        ("non-degenerate triples reach the canonical quadric", criterion_5),
        ("corank-one classification", criterion_6),
        ("singular and non-singular points", criterion_7),
        ("quotient by the largest ideal in W", criterion_8),
        ("polarization and scalar text round-trips", criterion_9),
    ];
    std::panic::set_hook(Box::new(|info| eprintln!("  {info}")));
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(f)).is_ok();
        let status = if ok { "PASS" } else { "FAIL" };
        println!("criterion {}: {status}  {name}  ({:.2?})", k + 1, start.elapsed());
        if !ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
