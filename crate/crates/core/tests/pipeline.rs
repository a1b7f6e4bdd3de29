use std::fs;

use addax_core::action::{act, rho, verify_action_invariance, ProjPoint};
use addax_core::catalog::{self, sample_pairs, CatalogEntry};
use addax_core::classify::{classify, extract_lambda, lambda_equivalent, BilinearTriple, CaseTag};
use addax_core::io::{entry_from_str, entry_to_json, read_entry, resolve_catalog};
use addax_core::linalg::Matrix;
use addax_core::multilinear::{build_fw, hypersurface_equation, invariant_linear_forms};
use addax_core::{ChangeOfBasis, Element, Error, Scalar};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn s(t: &str) -> Scalar {
    t.parse().unwrap()
}

#[test]
fn conic_pipeline() {
    let pair = catalog::truncated(3).unwrap();
    assert_eq!(pair.degree(), 2);
    let f = hypersurface_equation(&pair).unwrap();
    assert_eq!(f.as_poly().render(&addax_core::poly::RenderStyle::EQUATION), "x0*x2 - 1/2*x1^2");
    let image = act(&rho(&pair, &[s("1")]).unwrap(), &ProjPoint::origin(3)).unwrap();
    assert_eq!(image.to_string(), "[1 : 1 : 1/2]");
    assert!(f.evaluate(image.coords()).is_zero());
}

#[test]
fn quadric_equation_text() {
    let f = hypersurface_equation(&catalog::quadric_nondegenerate(2).unwrap()).unwrap();
    assert_eq!(
        f.as_poly().render(&addax_core::poly::RenderStyle::EQUATION),
        "x0*x3 - 1/2*x1^2 - 1/2*x2^2"
    );
}

#[test]
fn every_catalog_pair_is_action_invariant() {
    let mut rng = StdRng::seed_from_u64(11);
    for p in sample_pairs() {
        let f = hypersurface_equation(&p).unwrap();
        assert!(verify_action_invariance(&p, &f, 3, &mut rng).unwrap().is_invariant());
        assert!(invariant_linear_forms(&p).is_empty());
    }
}

#[test]
fn orbit_of_origin_lies_on_the_hypersurface() {
    let mut rng = StdRng::seed_from_u64(12);
    for p in sample_pairs() {
        let f = hypersurface_equation(&p).unwrap();
        for _ in 0..5 {
            let a: Vec<Scalar> = (0..p.n()).map(|_| Scalar::random_small(&mut rng, 6)).collect();
            let image = act(&rho(&p, &a).unwrap(), &ProjPoint::origin(p.dim())).unwrap();
            assert!(f.evaluate(image.coords()).is_zero());
        }
    }
}

/// `F(1, 1) = 0`, `F(1, W) = 0`, `F(1, ab) = -F(a, b)` for `a` in W.
#[test]
fn bilinear_triples_satisfy_the_basic_identities() {
    for p in sample_pairs().into_iter().filter(|p| p.degree() == 2) {
        let form = build_fw(&p).unwrap();
        let n = p.dim();
        let one = Element::one(n).into_coords();
        let f = |u: &[Scalar], v: &[Scalar]| form.evaluate(&[u, v]).unwrap();
        assert!(f(&one, &one).is_zero());
        for a in p.w_basis() {
            assert!(f(&one, a.coords()).is_zero());
            for j in 0..n {
                let b = Element::basis(n, j).into_coords();
                let ab = p.algebra().mul_coords(a.coords(), &b);
                assert_eq!(f(&one, &ab), -f(a.coords(), &b));
            }
        }
    }
}

#[test]
fn classification_survives_basis_changes() {
    let mut rng = StdRng::seed_from_u64(13);
    for query in [
        "corank_one:0,0,0;0,1,0;0,0,2",
        "corank_one:1,2,0;2,-1,1/3;0,1/3,0+i",
        "corank_one_blocks:3@0",
        "corank_one_blocks:2@1,2@-1",
        "corank_one_n2_split",
        "corank_one_n2_chain",
    ] {
        let pair = catalog::lookup(query).unwrap().into_pair().unwrap();
        let triple = BilinearTriple::from_pair(pair).unwrap();
        let reference = classify(&triple).unwrap();
        let m = triple.dim() - 1;
        let block = loop {
            let rows = (0..m)
                .map(|_| (0..m).map(|_| Scalar::random_small(&mut rng, 2)).collect())
                .collect();
            let b = Matrix::from_rows(rows);
            if !b.determinant().is_zero() {
                break b;
            }
        };
        let moved = triple.change_basis(&ChangeOfBasis::from_ideal_block(&block).unwrap()).unwrap();
        let c = classify(&moved).unwrap();
        assert_eq!(c.case, reference.case, "{query}");
        if reference.label.normalized {
            assert_eq!(c.label, reference.label, "{query}");
        }
        let (l1, l2) = (reference.lambda.unwrap(), c.lambda.unwrap());
        assert!(lambda_equivalent(&l1, &l2).unwrap().is_equivalent(), "{query}");
    }
}

#[test]
fn canonical_blocks_extract_to_themselves() {
    let pair = catalog::lookup("corank_one_blocks:3@0").unwrap().into_pair().unwrap();
    let ex = extract_lambda(&BilinearTriple::from_pair(pair).unwrap()).unwrap();
    assert_eq!(ex.lambda.case, CaseTag::GenericNGe3);
    assert_eq!(ex.lambda.lam, catalog::canonical_block(3, &s("0")));
    assert!(ex.change.is_identity());
}

#[test]
fn corank_two_is_not_classified() {
    let json = r#"{"dim":5,"mul":{"1,1":["0","0","1"]},"W":[["1","0","0","0"],["0","1","0","0"],["0","0","1","0"]],"complement":["0","0","0","1"]}"#;
    // W contains the square of e1, so this pair is invalid: m^2 must leave W
    assert!(entry_from_str(json).is_err());
    let quadric = catalog::quadric_nondegenerate(3).unwrap();
    let triple = BilinearTriple::from_pair(quadric).unwrap();
    let mut g = triple.gram();
    let n = g.rows();
    for k in 0..n {
        g[(1, k)] = Scalar::zero();
        g[(k, 1)] = Scalar::zero();
        g[(2, k)] = Scalar::zero();
        g[(k, 2)] = Scalar::zero();
    }
    let form = addax_core::multilinear::SymForm::from_gram(&g).unwrap();
    // dropping part of the form breaks invariance
    assert!(matches!(
        BilinearTriple::new(triple.pair().clone(), form),
        Err(Error::InvalidTriple(_))
    ));
}

#[test]
fn files_and_user_catalogs() {
    let dir = tempfile::tempdir().unwrap();
    for p in sample_pairs() {
        let name = p.algebra().name().unwrap().replace([':', ',', ';', '@', '/', '+'], "_");
        let path = dir.path().join(format!("{name}.json"));
        let entry = CatalogEntry::Pair(p.clone());
        fs::write(&path, serde_json::to_string_pretty(&entry_to_json(&entry)).unwrap()).unwrap();
        assert_eq!(read_entry(&path).unwrap(), entry);
        let resolved = resolve_catalog(&name, Some(dir.path())).unwrap();
        assert_eq!(resolved.algebra().table(), p.algebra().table());
    }
    assert!(matches!(read_entry(&dir.path().join("missing.json")), Err(Error::Io(_))));
    assert!(matches!(resolve_catalog("../etc", Some(dir.path())), Err(Error::UnknownCatalog(_))));
    // built-in names win over user files
    fs::write(dir.path().join("truncated.json"), "not json").unwrap();
    assert!(resolve_catalog("truncated:4", Some(dir.path())).is_ok());
}
