use std::collections::BTreeMap;

use cdga::cohomology;
use cdga::constructions::{corpus, x6_model, CorpusParams};
use cdga::massey::{self, MasseyError};
use cdga::sullivan::{formality, minimal_model, FormalityOptions, FormalityStatus, FormalityWitness};
use cdga::{q, Algebra, Dga, Element, Model, TabularBuilder};

fn heisenberg() -> Dga {
    let alg = Algebra::new([("x", 1), ("y", 1), ("z", 1)]).unwrap();
    let (x, y) = (Element::named(&alg, "x").unwrap(), Element::named(&alg, "y").unwrap());
    Dga::validated(&alg, vec![Element::zero(&alg), Element::zero(&alg), &x * &y]).unwrap()
}

#[test]
fn heisenberg_nilmanifold_is_not_formal() {
    let d = heisenberg();
    assert_eq!(cohomology::betti_numbers(&d, 3), [1, 2, 2, 1]);
    let x = d.cochain(&d.generator("x").unwrap()).unwrap();
    let y = d.cochain(&d.generator("y").unwrap()).unwrap();
    let r = massey::triple(&d, &x, &x, &y).unwrap();
    assert!(!r.vanishes);
    let v = formality(&Model::Free(d), FormalityOptions::new(3)).unwrap();
    assert_eq!(v.status, FormalityStatus::NonFormal);
    assert!(matches!(v.witness, FormalityWitness::Massey(_)));
}

#[test]
fn products_of_spheres_are_formal() {
    let mut b = TabularBuilder::new();
    b.basis("u", 2).unwrap();
    b.basis("v", 2).unwrap();
    b.basis("uv", 4).unwrap();
    b.product("u", "v", &[("uv", q(1))]).unwrap();
    let t = b.build().unwrap();
    let mm = minimal_model(&t, 6).unwrap();
    assert_eq!(mm.generator_counts()[&2], 2);
    assert!(mm.morphism_to(&t).unwrap().is_quasi_iso(6).unwrap().is_quasi_iso());
    let v = formality(&Model::Tabular(t), FormalityOptions::new(4)).unwrap();
    assert_eq!(v.status, FormalityStatus::Formal);
}

#[test]
fn massey_needs_vanishing_products() {
    let d = x6_model(&q(1));
    let a = d.cochain(&d.generator("a").unwrap()).unwrap();
    let c = d.cochain(&d.generator("c").unwrap()).unwrap();
    assert!(matches!(massey::triple(&d, &a, &c, &a), Err(MasseyError::NotDefined(_))));
}

#[test]
fn two_sphere_minimal_model() {
    let mut b = TabularBuilder::new();
    b.basis("u", 2).unwrap();
    let t = b.build().unwrap();
    let mm = minimal_model(&t, 8).unwrap();
    assert_eq!(mm.generator_counts(), BTreeMap::from([(2, 1), (3, 1)]));
}

#[test]
fn aloff_wallach_picks_fibre_by_k_plus_l() {
    let p = |k, l| CorpusParams { k: Some(k), l: Some(l), ..Default::default() };
    let lens = corpus("aloff-wallach", &p(1, 2)).unwrap();
    assert_eq!(lens.parameters["p"], q(3));
    assert_eq!(cohomology::betti_numbers(&lens.model, 7), [1, 0, 1, 0, 0, 1, 0, 1]);
    let flat = corpus("aloff-wallach", &p(1, -1)).unwrap();
    assert!(!flat.parameters.contains_key("p"));
    assert_eq!(cohomology::betti_numbers(&flat.model, 7), [1, 0, 1, 0, 0, 1, 0, 1]);
    assert!(corpus("aloff-wallach", &p(0, 0)).is_err());
}

#[test]
fn sk_overrides_are_checked() {
    let bad = CorpusParams {
        k: Some(3),
        epsilon: Some(vec![q(1) / q(2)]),
        ..Default::default()
    };
    assert!(corpus("sk", &bad).is_err());
}
