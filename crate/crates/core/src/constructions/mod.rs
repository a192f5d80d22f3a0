//! Explicit models: KS-extensions of circle, `S³` and `S¹×S²` bundles,
//! the formal model of the del Pezzo bundles, mapping tori, and a named
//! corpus of examples.

mod corpus;
mod mapping_torus;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::dga::{Cochain, CochainAlgebra, Dga, DgaError, Model, TabularBuilder, TabularDga};
use crate::exactla::{q, qf, Rational};
use crate::gca::{Algebra, Element, GcaError};

pub use corpus::{corpus, corpus_names, CorpusModel, CorpusParams};
pub use mapping_torus::{
    mapping_torus_cohomology, mapping_torus_model, CohomologyAutomorphism, MappingTorusModel,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Algebra(#[from] GcaError),
    #[error("the Euler class {0} is not a cocycle")]
    NotACocycle(String),
    #[error("the Euler class has degree {found}, expected {expected}")]
    WrongDegree { expected: u32, found: u32 },
    #[error("unknown corpus entry `{0}`")]
    UnknownCorpusEntry(String),
    #[error("parameter {name} = {value} is out of range: {reason}")]
    ParamOutOfRange {
        name: String,
        value: String,
        reason: String,
    },
    #[error("the automorphism is missing degree {0}")]
    DegreeGap(u32),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
}

pub type Result<T> = std::result::Result<T, ConstructionError>;

/// A characteristic class of a bundle together with the parameters it was
/// built from.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerData {
    pub class: Cochain,
    pub coefficients: BTreeMap<String, Rational>,
}

impl EulerData {
    pub fn new(class: Cochain) -> Self {
        EulerData {
            class,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: Rational) -> Self {
        self.coefficients.insert(name.to_string(), value);
        self
    }
}

fn check_class<A: CochainAlgebra>(base: &A, class: &Cochain, degree: u32) -> Result<()> {
    if class.degree() != degree {
        return Err(ConstructionError::WrongDegree {
            expected: degree,
            found: class.degree(),
        });
    }
    if !base.d_cochain(class).is_zero() {
        return Err(ConstructionError::NotACocycle(base.render(class)));
    }
    Ok(())
}

/// Name for the fibre generator that does not clash with the base.
fn fresh_name(taken: impl Fn(&str) -> bool, stem: &str) -> String {
    if !taken(stem) {
        return stem.to_string();
    }
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !taken(n))
        .expect("some name is free")
}

/// `base ⊗ Λ(y)` with `|y| = 1` and `dy` the Euler class.
pub fn circle_bundle_model(base: &Model, euler: &EulerData) -> Result<Model> {
    check_class(base, &euler.class, 2)?;
    match base {
        Model::Free(dga) => {
            let name = fresh_name(|n| dga.algebra().generator_index(n).is_some(), "y");
            let alg = dga.algebra().extended([(name, 1)])?;
            let mut images = dga
                .images()
                .iter()
                .map(|e| e.transport(&alg))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            images.push(dga.element(&euler.class).transport(&alg)?);
            Ok(Model::Free(Dga::validated(&alg, images)?))
        }
        Model::Tabular(t) => {
            let name = fresh_name(|n| t.index(n).is_ok(), "y");
            Ok(Model::Tabular(t.circle_bundle(&euler.class, &name)?))
        }
    }
}

fn named(alg: &Arc<Algebra>, name: &str) -> Element {
    Element::named(alg, name).expect("generator exists")
}

/// `Λ(a1, a2, a3, x1, x2, x3)` with `dx_i = a_i²`, the minimal model of
/// `S² × S² × S²`.
pub fn s2_cubed() -> Dga {
    let alg = Algebra::new([("a1", 2), ("a2", 2), ("a3", 2), ("x1", 3), ("x2", 3), ("x3", 3)])
        .expect("valid generators");
    let images = (1..=3)
        .map(|_| Element::zero(&alg))
        .chain((1..=3).map(|i| named(&alg, &format!("a{i}")).pow(2)))
        .collect();
    Dga::validated(&alg, images).expect("valid model")
}

/// The circle bundle over `S² × S² × S²` with Euler class
/// `e1 a1 + e2 a2 + e3 a3`; `e = (1, 1, 1)` gives `Q(1,1,1)`.
pub fn q_model(e: [Rational; 3]) -> Dga {
    let base = s2_cubed();
    let alg = base.algebra().clone();
    let class = (0..3).fold(Element::zero(&alg), |acc, i| {
        &acc + &named(&alg, &format!("a{}", i + 1)).scale(&e[i])
    });
    let mut data = EulerData::new(base.cochain_in(&class, 2).expect("degree 2"));
    for (i, c) in e.iter().enumerate() {
        data = data.with(&format!("e{}", i + 1), c.clone());
    }
    match circle_bundle_model(&Model::Free(base), &data).expect("closed degree-2 class") {
        Model::Free(d) => d,
        Model::Tabular(_) => unreachable!("free base gives a free total space"),
    }
}

/// `Λ(a, u)` with `|a| = 4`, `du = a²`, the minimal model of `S⁴`.
pub fn s4_model() -> Dga {
    let alg = Algebra::new([("a", 4), ("u", 7)]).expect("valid generators");
    let a = named(&alg, "a");
    Dga::validated(&alg, vec![Element::zero(&alg), a.pow(2)]).expect("valid model")
}

/// `Λ(a, x)` with `|a| = 2`, `dx = a³`, the minimal model of `CP²`.
pub fn cp2_model() -> Dga {
    let alg = Algebra::new([("a", 2), ("x", 5)]).expect("valid generators");
    let a = named(&alg, "a");
    Dga::validated(&alg, vec![Element::zero(&alg), a.pow(3)]).expect("valid model")
}

/// KS-model `Λ(a, u, b)` of an `S³`-bundle over `S⁴` with Euler class
/// `e·a`: `Du = a²`, `Db = e·a`.
pub fn s3_bundle_model(e: &Rational) -> Dga {
    let base = s4_model();
    let alg = base.algebra().extended([("b", 3)]).expect("fresh name");
    let a = named(&alg, "a");
    let images = vec![Element::zero(&alg), a.pow(2), a.scale(e)];
    Dga::validated(&alg, images).expect("valid model")
}

/// KS-model `Λ(a, x, u)` of a rational `S³`-fibration over `CP²`:
/// `dx = a³`, `du = e·a²`.
pub fn lens_bundle_cp2_model(e: &Rational) -> Dga {
    let base = cp2_model();
    let alg = base.algebra().extended([("u", 3)]).expect("fresh name");
    let a = named(&alg, "a");
    let images = vec![Element::zero(&alg), a.pow(3), a.pow(2).scale(e)];
    Dga::validated(&alg, images).expect("valid model")
}

/// The general KS-model `Λ(a, x, b, c, y)` of an `S¹×S²`-bundle over `CP²`
/// before simplification: `Dx = a³`, `Db = e·a`, `Dc = g·ab`,
/// `Dy = c² + f·a² + h·ac`. Fails with the `D²` witness unless `g = 0`.
pub fn s1s2_bundle_cp2_general(e: &Rational, f: &Rational, g: &Rational, h: &Rational) -> Result<Dga> {
    let alg = Algebra::new([("a", 2), ("x", 5), ("b", 1), ("c", 2), ("y", 3)])?;
    let (a, b, c) = (named(&alg, "a"), named(&alg, "b"), named(&alg, "c"));
    let dy = &(&c.pow(2) + &a.pow(2).scale(f)) + &(&a * &c).scale(h);
    let images = vec![
        Element::zero(&alg),
        a.pow(3),
        a.scale(e),
        (&a * &b).scale(g),
        dy,
    ];
    Ok(Dga::validated(&alg, images)?)
}

/// Parameters of an `S¹×S²`-bundle model after eliminating `h` by
/// `c ↦ c + h/2·a`.
#[derive(Debug, Clone, PartialEq)]
pub struct S1S2Ledger {
    pub e: Rational,
    pub f: Rational,
    pub h: Rational,
    /// `f − h²/4`.
    pub f_tilde: Rational,
    /// Always zero: forced by `D² = 0`.
    pub g: Rational,
}

/// `Λ(a, x, b, c, y)` with `Dx = a³`, `Db = e·a`, `Dc = 0`,
/// `Dy = c² + f̃·a²`, where `f̃ = f − h²/4`.
pub fn s1s2_bundle_cp2_model(e: &Rational, f: &Rational, h: &Rational) -> (Dga, S1S2Ledger) {
    let general = s1s2_bundle_cp2_general(e, f, &Rational::zero(), h).expect("g = 0 is valid");
    let alg = general.algebra().clone();
    let (a, c) = (named(&alg, "a"), named(&alg, "c"));
    // c = c̃ − h/2·a, so c² + f a² + h a c = c̃² + (f − h²/4) a².
    let c_old = &c - &a.scale(&(h * qf(1, 2)));
    let identity: Vec<Element> = (0..alg.num_generators())
        .map(|i| Element::generator(&alg, i))
        .collect();
    let mut change = identity;
    change[alg.generator_index("c").expect("c")] = c_old;
    let images: Vec<Element> = general
        .images()
        .iter()
        .map(|img| img.substitute(&alg, &change).expect("same algebra"))
        .collect();
    let f_tilde = f - h * h * qf(1, 4);
    let dga = Dga::validated(&alg, images).expect("valid model");
    debug_assert_eq!(
        dga.image(4).to_string(),
        (&c.pow(2) + &a.pow(2).scale(&f_tilde)).to_string()
    );
    let ledger = S1S2Ledger {
        e: e.clone(),
        f: f.clone(),
        h: h.clone(),
        f_tilde,
        g: Rational::zero(),
    };
    (dga, ledger)
}

/// `Λ(a, x, c, y)` with `dx = a³`, `dy = c² + f·a²`, the minimal model of
/// an `S²`-bundle over `CP²`.
pub fn x6_model(f: &Rational) -> Dga {
    let alg = Algebra::new([("a", 2), ("x", 5), ("c", 2), ("y", 3)]).expect("valid generators");
    let (a, c) = (named(&alg, "a"), named(&alg, "c"));
    let images = vec![
        Element::zero(&alg),
        a.pow(3),
        Element::zero(&alg),
        &c.pow(2) + &a.pow(2).scale(f),
    ];
    Dga::validated(&alg, images).expect("valid model")
}

/// The formal model `(H*(P_k × S²), 0)` where `P_k` is `CP²` blown up at
/// `k` points: classes `a, a_1..a_k, b` in degree 2 with `a² = −a_i² = ν`,
/// `a·a_i = a_i·a_j = 0`, `b² = 0`.
pub fn del_pezzo_s2_base(k: usize) -> TabularDga {
    let mut t = TabularBuilder::new();
    let one = q(1);
    t.basis("a", 2).expect("fresh");
    for i in 1..=k {
        t.basis(&format!("a{i}"), 2).expect("fresh");
    }
    t.basis("b", 2).expect("fresh");
    t.basis("nu", 4).expect("fresh");
    t.basis("ab", 4).expect("fresh");
    for i in 1..=k {
        t.basis(&format!("a{i}b"), 4).expect("fresh");
    }
    t.basis("nub", 6).expect("fresh");
    let entries: Vec<(String, String, String, Rational)> = {
        let mut v = vec![
            ("a".into(), "a".into(), "nu".into(), one.clone()),
            ("a".into(), "b".into(), "ab".into(), one.clone()),
            ("a".into(), "ab".into(), "nub".into(), one.clone()),
            ("b".into(), "nu".into(), "nub".into(), one.clone()),
        ];
        for i in 1..=k {
            let ai = format!("a{i}");
            let aib = format!("a{i}b");
            v.push((ai.clone(), ai.clone(), "nu".into(), -one.clone()));
            v.push((ai.clone(), "b".into(), aib.clone(), one.clone()));
            v.push((ai, aib, "nub".into(), -one.clone()));
        }
        v
    };
    for (l, r, out, c) in entries {
        t.product(&l, &r, &[(&out, c)]).expect("consistent table");
    }
    t.build().expect("valid table")
}

/// Parameters of the del Pezzo circle bundle `S_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DelPezzoParams {
    pub k: usize,
    pub epsilon: Vec<Rational>,
    pub n: Rational,
}

impl DelPezzoParams {
    /// `ε_i = 1/(2k)`, `N = 2k`.
    pub fn defaults(k: usize) -> Self {
        DelPezzoParams {
            k,
            epsilon: vec![qf(1, 2 * k as i64); k],
            n: q(2 * k as i64),
        }
    }

    /// Checks `ε_i > 0`, `Σ ε_i < 1` and `N·ε_i ∈ ℤ`.
    pub fn check(&self) -> Result<()> {
        let bad = |name: &str, value: String, reason: &str| ConstructionError::ParamOutOfRange {
            name: name.into(),
            value,
            reason: reason.into(),
        };
        if !(3..=8).contains(&self.k) {
            return Err(bad("k", self.k.to_string(), "expected 3 ≤ k ≤ 8"));
        }
        if self.epsilon.len() != self.k {
            return Err(bad(
                "epsilon",
                format!("{} values", self.epsilon.len()),
                "expected one value per blown-up point",
            ));
        }
        let mut sum = Rational::zero();
        for e in &self.epsilon {
            if !e.is_positive_rational() {
                return Err(bad("epsilon", e.to_string(), "expected ε_i > 0"));
            }
            if !(&self.n * e).is_integer() {
                return Err(bad("epsilon", e.to_string(), "expected N·ε_i to be an integer"));
            }
            sum += e;
        }
        if sum >= Rational::one() {
            return Err(bad("epsilon", sum.to_string(), "expected Σ ε_i < 1"));
        }
        if self.n.is_zero() {
            return Err(bad("N", self.n.to_string(), "expected N ≠ 0"));
        }
        Ok(())
    }
}

trait PositiveRational {
    fn is_positive_rational(&self) -> bool;
}

impl PositiveRational for Rational {
    fn is_positive_rational(&self) -> bool {
        self > &Rational::zero()
    }
}

/// The Euler class `N(a − Σ ε_i a_i + b)` on [`del_pezzo_s2_base`].
pub fn del_pezzo_euler(base: &TabularDga, params: &DelPezzoParams) -> EulerData {
    let mut terms: Vec<(String, Rational)> = vec![("a".into(), params.n.clone())];
    for (i, e) in params.epsilon.iter().enumerate() {
        terms.push((format!("a{}", i + 1), -(&params.n * e)));
    }
    terms.push(("b".into(), params.n.clone()));
    let refs: Vec<(&str, Rational)> = terms.iter().map(|(l, c)| (l.as_str(), c.clone())).collect();
    let class = base.cochain_from_labels(2, &refs).expect("labels exist");
    let mut data = EulerData::new(class).with("k", q(params.k as i64)).with("N", params.n.clone());
    for (i, e) in params.epsilon.iter().enumerate() {
        data = data.with(&format!("epsilon{}", i + 1), e.clone());
    }
    data
}

/// The model of `S_k`: `H*(P_k × S²) ⊗ Λ(y)` with
/// `dy = N(a − Σ ε_i a_i + b)`.
pub fn del_pezzo_bundle_model(params: &DelPezzoParams) -> Result<TabularDga> {
    params.check()?;
    let base = del_pezzo_s2_base(params.k);
    let euler = del_pezzo_euler(&base, params);
    match circle_bundle_model(&Model::Tabular(base), &euler)? {
        Model::Tabular(t) => Ok(t),
        Model::Free(_) => unreachable!("tabular base gives a tabular total space"),
    }
}
