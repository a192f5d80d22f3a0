//! Minimal models, quasi-isomorphisms and formality verdicts.
//!
//! [`minimal_model`] builds `(ΛV, d)` degree by degree for a simply
//! connected target: closed generators first make `H^k` surjective, then
//! generators of degree `k` kill the kernel of `H^{k+1}(model) → H^{k+1}`.
//! [`s_formality_check`] tests the splitting `V^i = C^i ⊕ N^i` with
//! `C^i = ker(d|V^i)` and `N^i` spanned by the generators outside the
//! echelon pivots of `C^i`; a failed check is inconclusive, never a proof of
//! non-formality. [`formality`] combines the `b₂ ≤ 1` shortcut for
//! 7-manifolds, a search for non-vanishing triple Massey products and the
//! s-formality check.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::Zero;

use crate::cohomology::{self, CohomologySummary};
use crate::dga::{Cochain, CochainAlgebra, Dga, DgaError, Model};
use crate::exactla::{Rational, RationalMatrix, Subspace};
use crate::gca::{Algebra, Element, GcaError, Monomial};
use crate::massey;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SullivanError {
    #[error("H^1 of the target has dimension {b1}; minimal models need a simply connected target")]
    NotSimplyConnected { b1: usize },
    #[error("H^0 of the target has dimension {b0}, expected 1")]
    NotConnected { b0: usize },
    #[error("the degree bound {bound} is below {required}")]
    BoundTooLow { bound: u32, required: u32 },
    #[error("the map does not commute with d on {generator}")]
    NotAChainMap { generator: String },
    #[error("the model is not minimal: d({0}) has a linear part")]
    NotMinimal(String),
    #[error("the map has {found} generator images, expected {expected}")]
    ImageCount { expected: usize, found: usize },
    #[error("the image of {generator} has degree {found}, expected {expected}")]
    ImageDegree {
        generator: String,
        expected: u32,
        found: u32,
    },
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Algebra(#[from] GcaError),
}

pub type Result<T> = std::result::Result<T, SullivanError>;

/// An algebra morphism out of a free CDGA, given on generators.
pub struct FreeMorphism<'a, T: CochainAlgebra + ?Sized> {
    source: &'a Dga,
    target: &'a T,
    images: Vec<Cochain>,
    memo: Mutex<HashMap<Monomial, Cochain>>,
}

impl<'a, T: CochainAlgebra + ?Sized> FreeMorphism<'a, T> {
    pub fn new(source: &'a Dga, target: &'a T, images: Vec<Cochain>) -> Result<Self> {
        let alg = source.algebra();
        if images.len() != alg.num_generators() {
            return Err(SullivanError::ImageCount {
                expected: alg.num_generators(),
                found: images.len(),
            });
        }
        for (g, img) in alg.generators().iter().zip(&images) {
            if img.degree() != g.degree() || img.coords().len() != target.dim(g.degree()) {
                return Err(SullivanError::ImageDegree {
                    generator: g.name().to_string(),
                    expected: g.degree(),
                    found: img.degree(),
                });
            }
        }
        Ok(FreeMorphism {
            source,
            target,
            images,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn images(&self) -> &[Cochain] {
        &self.images
    }

    fn with_memo(mut self, memo: HashMap<Monomial, Cochain>) -> Self {
        self.memo = Mutex::new(memo);
        self
    }

    fn into_memo(self) -> HashMap<Monomial, Cochain> {
        self.memo.into_inner().expect("memo")
    }

    fn apply_monomial(&self, m: &Monomial) -> Cochain {
        if let Some(c) = self.memo.lock().expect("memo").get(m) {
            return c.clone();
        }
        let factors = m.factors();
        let out = match factors.split_first() {
            None => self.target.unit(),
            Some((&(g, e), rest)) => {
                let mut tail = rest.to_vec();
                if e > 1 {
                    tail.insert(0, (g, e - 1));
                }
                let tail = Monomial::from_factors(tail);
                let rest_img = self.apply_monomial(&tail);
                self.target.product(&self.images[g], &rest_img)
            }
        };
        self.memo.lock().expect("memo").insert(m.clone(), out.clone());
        out
    }

    /// Image of a cochain of the source.
    pub fn apply(&self, c: &Cochain) -> Cochain {
        let basis = self.source.algebra().degree_basis(c.degree());
        let mut out = self.target.zero(c.degree());
        for (m, x) in basis.monomials().iter().zip(c.coords()) {
            if !x.is_zero() {
                out = out.add(&self.apply_monomial(m).scale(x));
            }
        }
        out
    }

    /// Checks `f(dv) = d f(v)` on every generator.
    pub fn check_chain_map(&self) -> Result<()> {
        for g in self.source.algebra().generators() {
            let dg = self
                .source
                .cochain_in(self.source.image(g.ordinal()), g.degree() + 1)?;
            let lhs = self.apply(&dg);
            let rhs = self.target.d_cochain(&self.images[g.ordinal()]);
            if lhs != rhs {
                return Err(SullivanError::NotAChainMap {
                    generator: g.name().to_string(),
                });
            }
        }
        Ok(())
    }

    /// Matrix of `H^k(f)` in the two summaries' class bases.
    pub fn cohomology_matrix(
        &self,
        source_h: &CohomologySummary,
        target_h: &CohomologySummary,
        k: u32,
    ) -> RationalMatrix {
        let cols: Vec<Vec<Rational>> = source_h
            .representatives(k)
            .iter()
            .map(|r| {
                target_h
                    .class_coords(&self.apply(r))
                    .expect("chain maps send cocycles to cocycles")
            })
            .collect();
        RationalMatrix::from_columns(target_h.betti(k), &cols).expect("column shape")
    }

    /// Whether `H^k(f)` is an isomorphism for every `k ≤ max_degree`.
    pub fn is_quasi_iso(&self, max_degree: u32) -> Result<QuasiIsoReport> {
        self.check_chain_map()?;
        let sh = cohomology::compute(self.source, max_degree);
        let th = cohomology::compute(self.target, max_degree);
        let degrees = (0..=max_degree)
            .map(|k| {
                let m = self.cohomology_matrix(&sh, &th, k);
                DegreeComparison {
                    degree: k,
                    source_betti: sh.betti(k),
                    target_betti: th.betti(k),
                    rank: m.rank(),
                }
            })
            .collect();
        Ok(QuasiIsoReport { degrees })
    }
}

/// `H^k(f)` for one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeComparison {
    pub degree: u32,
    pub source_betti: usize,
    pub target_betti: usize,
    pub rank: usize,
}

impl DegreeComparison {
    pub fn is_iso(&self) -> bool {
        self.source_betti == self.rank && self.target_betti == self.rank
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiIsoReport {
    pub degrees: Vec<DegreeComparison>,
}

impl QuasiIsoReport {
    pub fn is_quasi_iso(&self) -> bool {
        self.degrees.iter().all(DegreeComparison::is_iso)
    }

    /// The first degree where the map is not an isomorphism.
    pub fn first_failure(&self) -> Option<u32> {
        self.degrees.iter().find(|d| !d.is_iso()).map(|d| d.degree)
    }
}

/// Generators added in one degree of the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub degree: u32,
    /// Closed generators mapping onto new classes of the target.
    pub surjective: Vec<String>,
    /// Generators whose differentials kill classes in degree `degree + 1`.
    pub kernel_killing: Vec<String>,
}

/// A minimal model built through a degree bound, with its map to the
/// target given by cochains of the target.
#[derive(Debug, Clone)]
pub struct SullivanModel {
    dga: Dga,
    built_degree: u32,
    stages: Vec<Stage>,
    morphism: Vec<Cochain>,
}

impl SullivanModel {
    pub fn dga(&self) -> &Dga {
        &self.dga
    }

    /// The model maps isomorphically on `H^k` for `k ≤ built_degree` and
    /// injectively on `H^{built_degree + 1}`.
    pub fn built_degree(&self) -> u32 {
        self.built_degree
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// Images of the generators in the target.
    pub fn morphism(&self) -> &[Cochain] {
        &self.morphism
    }

    /// `dim V^k` for every degree with generators.
    pub fn generator_counts(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for g in self.dga.algebra().generators() {
            *out.entry(g.degree()).or_insert(0) += 1;
        }
        out
    }

    pub fn morphism_to<'a, T: CochainAlgebra + ?Sized>(&'a self, target: &'a T) -> Result<FreeMorphism<'a, T>> {
        FreeMorphism::new(&self.dga, target, self.morphism.clone())
    }

    pub fn s_formality(&self, s: u32, cap: u32, dimension: Option<u32>) -> Result<FormalityVerdict> {
        s_formality_check(&self.dga, s, cap, dimension, Some(self.built_degree))
    }
}

/// Classes of `H^k(target)` as coordinates, for the span of `images`.
fn class_span(h: &CohomologySummary, images: &[Cochain], k: u32) -> Subspace {
    let vectors: Vec<Vec<Rational>> = images
        .iter()
        .map(|c| h.class_coords(c).expect("cocycle"))
        .collect();
    Subspace::span(h.betti(k), &vectors).expect("class coordinates")
}

/// Builds the minimal model of a target with `H^0 = Q` and `H^1 = 0`
/// through degree `max_degree`.
pub fn minimal_model<T: CochainAlgebra + ?Sized>(target: &T, max_degree: u32) -> Result<SullivanModel> {
    if max_degree < 2 {
        return Err(SullivanError::BoundTooLow {
            bound: max_degree,
            required: 2,
        });
    }
    let th = cohomology::compute(target, max_degree + 1);
    if th.betti(0) != 1 {
        return Err(SullivanError::NotConnected { b0: th.betti(0) });
    }
    if th.betti(1) != 0 {
        return Err(SullivanError::NotSimplyConnected { b1: th.betti(1) });
    }
    let mut names: Vec<(String, u32)> = Vec::new();
    let mut diffs: Vec<Element> = Vec::new();
    let mut morphism: Vec<Cochain> = Vec::new();
    let mut stages = Vec::new();
    let mut dga = Dga::new(&Algebra::new(Vec::<(String, u32)>::new())?, Vec::new())?;

    let rebuild = |names: &[(String, u32)], diffs: &[Element]| -> Result<Dga> {
        let alg = Algebra::new(names.iter().cloned())?;
        let images = diffs
            .iter()
            .map(|e| e.transport(&alg))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Dga::new(&alg, images)?)
    };

    // Generator ordinals never change as generators are appended, so
    // images of monomials stay valid across stages.
    let mut memo: HashMap<Monomial, Cochain> = HashMap::new();
    for k in 2..=max_degree {
        let mut stage = Stage {
            degree: k,
            surjective: Vec::new(),
            kernel_killing: Vec::new(),
        };
        // Surjectivity on H^k.
        {
            let f = FreeMorphism::new(&dga, target, morphism.clone())?.with_memo(std::mem::take(&mut memo));
            let data = cohomology::degree_data(&dga, k);
            let images: Vec<Cochain> = data
                .representatives
                .basis()
                .into_iter()
                .map(|r| f.apply(&Cochain::new(k, r)))
                .collect();
            memo = f.into_memo();
            let span = class_span(&th, &images, k);
            let mut grown = span;
            let mut i = 0;
            for t in 0..th.betti(k) {
                let e = cohomology::unit_vector(th.betti(k), t);
                let candidate = grown
                    .sum(&Subspace::span(th.betti(k), std::slice::from_ref(&e)).expect("dim"))
                    .expect("dim");
                if candidate.dim() > grown.dim() {
                    grown = candidate;
                    i += 1;
                    let name = format!("v{k}_{i}");
                    names.push((name.clone(), k));
                    diffs.push(Element::zero(dga.algebra()));
                    morphism.push(th.class_cochain(k, &e));
                    stage.surjective.push(name);
                }
            }
            if i > 0 {
                dga = rebuild(&names, &diffs)?;
            }
        }
        // Injectivity on H^{k+1}.
        {
            let f = FreeMorphism::new(&dga, target, morphism.clone())?.with_memo(std::mem::take(&mut memo));
            let data = cohomology::degree_data(&dga, k + 1);
            let reps: Vec<Cochain> = data
                .representatives
                .basis()
                .into_iter()
                .map(|r| Cochain::new(k + 1, r))
                .collect();
            let images: Vec<Cochain> = reps.iter().map(|r| f.apply(r)).collect();
            memo = f.into_memo();
            let cols: Vec<Vec<Rational>> = images
                .iter()
                .map(|c| th.class_coords(c).expect("chain maps send cocycles to cocycles"))
                .collect();
            let m = RationalMatrix::from_columns(th.betti(k + 1), &cols).expect("column shape");
            for (i, v) in m.kernel().basis().into_iter().enumerate() {
                let mut z = dga.zero(k + 1);
                let mut fz = target.zero(k + 1);
                for ((r, img), x) in reps.iter().zip(&images).zip(&v) {
                    if !x.is_zero() {
                        z = z.add(&r.scale(x));
                        fz = fz.add(&img.scale(x));
                    }
                }
                let w = cohomology::is_exact(target, &fz)
                    .expect("images of cocycles are cocycles")
                    .expect("classes in the kernel map to exact cochains");
                let name = format!("u{k}_{}", i + 1);
                names.push((name.clone(), k));
                diffs.push(dga.element(&z));
                morphism.push(w);
                stage.kernel_killing.push(name);
            }
            if !stage.kernel_killing.is_empty() {
                dga = rebuild(&names, &diffs)?;
            }
        }
        stages.push(stage);
    }
    Ok(SullivanModel {
        dga,
        built_degree: max_degree,
        stages,
        morphism,
    })
}

/// Status of a formality verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FormalityStatus {
    Formal,
    NonFormal,
    Inconclusive,
}

impl FormalityStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormalityStatus::Formal => "Formal",
            FormalityStatus::NonFormal => "NonFormal",
            FormalityStatus::Inconclusive => "Inconclusive",
        }
    }
}

/// The splitting `V^i = C^i ⊕ N^i` in one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitDegree {
    pub degree: u32,
    /// Basis of `C^i`, rendered.
    pub closed: Vec<String>,
    /// Generators spanning `N^i`.
    pub non_closed: Vec<String>,
}

/// Closed elements of the ideal `I(N^{≤s})` in one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealDegree {
    pub degree: u32,
    /// Dimension of the closed part of the ideal.
    pub closed_dim: usize,
    /// Whether every closed element is exact.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingLedger {
    pub s: u32,
    pub degrees: Vec<SplitDegree>,
    pub ideal: Vec<IdealDegree>,
    /// A closed ideal element that is not exact, if one was found.
    pub obstruction: Option<String>,
}

/// A non-vanishing triple Massey product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasseyWitness {
    pub classes: [String; 3],
    pub degrees: [u32; 3],
    pub representative: String,
    pub class: Vec<String>,
    pub indeterminacy_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormalityWitness {
    Splitting(SplittingLedger),
    Massey(MasseyWitness),
    Shortcut { b1: usize, b2: usize, dimension: u32 },
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalityVerdict {
    pub status: FormalityStatus,
    pub witness: FormalityWitness,
    pub checked_degree_cap: u32,
    pub s: Option<u32>,
    pub dimension: Option<u32>,
    pub notes: Vec<String>,
}

/// `n` with `dimension ∈ {2n − 1, 2n}`.
pub fn half_dimension(dimension: u32) -> u32 {
    dimension.div_ceil(2)
}

/// `Formal` for a 7-dimensional space with `b1 = 0` and `b2 ≤ 1`.
pub fn formality_shortcut(b1: usize, b2: usize, dimension: u32) -> Option<FormalityVerdict> {
    (dimension == 7 && b1 == 0 && b2 <= 1).then(|| FormalityVerdict {
        status: FormalityStatus::Formal,
        witness: FormalityWitness::Shortcut { b1, b2, dimension },
        checked_degree_cap: 0,
        s: Some(3),
        dimension: Some(dimension),
        notes: vec!["a compact 7-manifold with b1 = 0 and b2 <= 1 is 3-formal".into()],
    })
}

/// Tests s-formality of a minimal free model with the splitting
/// `C^i = ker(d|V^i)`. Closed elements of `I(N^{≤s}) ∩ Λ(V^{≤s})` are
/// checked for exactness in every degree up to `cap`. A model built only
/// through degree `B` (`complete_through`) is checked up to `B + 1`.
pub fn s_formality_check(
    dga: &Dga,
    s: u32,
    cap: u32,
    dimension: Option<u32>,
    complete_through: Option<u32>,
) -> Result<FormalityVerdict> {
    if cap < s + 1 {
        return Err(SullivanError::BoundTooLow {
            bound: cap,
            required: s + 1,
        });
    }
    let alg = dga.algebra();
    for g in alg.generators() {
        if !dga.image(g.ordinal()).linear_part().is_zero() {
            return Err(SullivanError::NotMinimal(g.name().to_string()));
        }
    }
    let mut notes = Vec::new();
    let mut effective_cap = cap;
    if let Some(b) = complete_through {
        if b + 1 < cap {
            effective_cap = b + 1;
            notes.push(format!(
                "the model is complete only through degree {b}; ideal checked through degree {effective_cap}"
            ));
        }
    }
    let mut degrees = Vec::new();
    let mut in_n = vec![false; alg.num_generators()];
    for i in 1..=s {
        let gens: Vec<usize> = alg
            .generators()
            .iter()
            .filter(|g| g.degree() == i)
            .map(|g| g.ordinal())
            .collect();
        if gens.is_empty() {
            continue;
        }
        let cols: Vec<Vec<Rational>> = gens.iter().map(|&g| dga.image(g).coords(i + 1)).collect();
        let m = RationalMatrix::from_columns(dga.dim(i + 1), &cols).expect("column shape");
        let c = m.kernel();
        let closed = c
            .basis()
            .iter()
            .map(|v| {
                let e = gens.iter().zip(v).fold(Element::zero(alg), |acc, (&g, x)| {
                    &acc + &Element::generator(alg, g).scale(x)
                });
                e.to_string()
            })
            .collect();
        let mut non_closed = Vec::new();
        for (col, &g) in gens.iter().enumerate() {
            if !c.pivots().contains(&col) {
                in_n[g] = true;
                non_closed.push(alg.generators()[g].name().to_string());
            }
        }
        degrees.push(SplitDegree {
            degree: i,
            closed,
            non_closed,
        });
    }
    let mut ledger = SplittingLedger {
        s,
        degrees,
        ideal: Vec::new(),
        obstruction: None,
    };
    if in_n.iter().any(|x| *x) {
        for t in 1..=effective_cap {
            let basis = alg.degree_basis(t);
            let cols: Vec<usize> = basis
                .monomials()
                .iter()
                .enumerate()
                .filter(|(_, m)| {
                    m.factors().iter().all(|(g, _)| alg.generators()[*g].degree() <= s)
                        && m.factors().iter().any(|(g, _)| in_n[*g])
                })
                .map(|(i, _)| i)
                .collect();
            if cols.is_empty() {
                continue;
            }
            let d = dga.differential_matrix(t);
            let sub_cols: Vec<Vec<Rational>> = cols.iter().map(|&j| d.column(j)).collect();
            let sub = RationalMatrix::from_columns(d.nrows(), &sub_cols).expect("column shape");
            let kernel = sub.kernel();
            let mut exact = true;
            for v in kernel.basis() {
                let mut z = vec![Rational::zero(); basis.len()];
                for (x, &j) in v.iter().zip(&cols) {
                    z[j] = x.clone();
                }
                let z = Cochain::new(t, z);
                if cohomology::is_exact(dga, &z)
                    .expect("kernel elements are cocycles")
                    .is_none()
                {
                    exact = false;
                    ledger.obstruction = Some(dga.render(&z));
                    break;
                }
            }
            ledger.ideal.push(IdealDegree {
                degree: t,
                closed_dim: kernel.dim(),
                exact,
            });
            if !exact {
                break;
            }
        }
    }
    let passed = ledger.obstruction.is_none();
    let status = match (passed, dimension) {
        (false, _) => {
            notes.push("the canonical splitting fails; another splitting might succeed".into());
            FormalityStatus::Inconclusive
        }
        (true, Some(n)) if s + 1 >= half_dimension(n) => FormalityStatus::Formal,
        (true, Some(n)) => {
            notes.push(format!(
                "{s}-formal, but formality in dimension {n} needs s >= {}",
                half_dimension(n) - 1
            ));
            FormalityStatus::Inconclusive
        }
        (true, None) => {
            notes.push(format!("{s}-formal; no dimension declared"));
            FormalityStatus::Inconclusive
        }
    };
    if dimension.is_some() {
        notes.push("the formal dimension is trusted, not verified".into());
    }
    Ok(FormalityVerdict {
        status,
        witness: FormalityWitness::Splitting(ledger),
        checked_degree_cap: effective_cap,
        s: Some(s),
        dimension,
        notes,
    })
}

/// Cocycles worth testing in Massey products: the class basis plus closed
/// generators or basis elements of the model, one per class up to scale.
fn massey_candidates(model: &Model, h: &CohomologySummary, k: u32) -> Vec<Cochain> {
    let mut raw = h.representatives(k);
    match model {
        Model::Free(d) => {
            for g in d.algebra().generators() {
                if g.degree() == k && d.image(g.ordinal()).is_zero() {
                    raw.push(
                        d.cochain_in(&Element::generator(d.algebra(), g.ordinal()), k)
                            .expect("degree"),
                    );
                }
            }
        }
        Model::Tabular(t) => {
            for &i in t.basis_in_degree(k) {
                let c = t.basis_cochain(i);
                if t.d_cochain(&c).is_zero() {
                    raw.push(c);
                }
            }
        }
    }
    let mut seen: Vec<Vec<Rational>> = Vec::new();
    let mut out = Vec::new();
    for c in raw {
        let mut v = h.class_coords(&c).expect("cocycle");
        let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() else {
            continue;
        };
        v.iter_mut().for_each(|x| *x = &*x / &lead);
        if !seen.contains(&v) {
            seen.push(v);
            out.push(c);
        }
    }
    out
}

/// Searches triples of candidate classes with total degree at most
/// `max_degree + 1` for a defined, non-vanishing Massey product.
pub fn find_massey_obstruction(model: &Model, h: &CohomologySummary, max_degree: u32) -> Option<MasseyWitness> {
    let degrees: Vec<u32> = (1..=max_degree).filter(|&k| h.betti(k) > 0).collect();
    let candidates: HashMap<u32, Vec<Cochain>> = degrees
        .iter()
        .map(|&k| (k, massey_candidates(model, h, k)))
        .collect();
    let zero_product = |x: &Cochain, y: &Cochain| -> bool {
        let n = x.degree() + y.degree();
        n > h.max_degree()
            || h.class_coords(&model.product(x, y))
                .map(|v| v.iter().all(Zero::is_zero))
                .unwrap_or(false)
    };
    for &p1 in &degrees {
        for &p2 in &degrees {
            for &p3 in &degrees {
                let n = p1 + p2 + p3 - 1;
                if n > max_degree || h.betti(n) == 0 {
                    continue;
                }
                for a1 in &candidates[&p1] {
                    for a2 in &candidates[&p2] {
                        if !zero_product(a1, a2) {
                            continue;
                        }
                        for a3 in &candidates[&p3] {
                            if !zero_product(a2, a3) {
                                continue;
                            }
                            if let Ok(r) = massey::triple_in(model, h, a1, a2, a3) {
                                if !r.vanishes {
                                    return Some(MasseyWitness {
                                        classes: [model.render(a1), model.render(a2), model.render(a3)],
                                        degrees: [p1, p2, p3],
                                        representative: model.render(&r.representative),
                                        class: r.class.iter().map(|x| x.to_string()).collect(),
                                        indeterminacy_dim: r.indeterminacy.dim(),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Options for [`formality`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormalityOptions {
    pub dimension: u32,
    /// Defaults to `n − 1` with `dimension ∈ {2n − 1, 2n}`.
    pub s: Option<u32>,
    /// Defaults to `dimension + 1`.
    pub cap: Option<u32>,
}

impl FormalityOptions {
    pub fn new(dimension: u32) -> Self {
        FormalityOptions {
            dimension,
            s: None,
            cap: None,
        }
    }

    pub fn s(&self) -> u32 {
        self.s
            .unwrap_or_else(|| half_dimension(self.dimension).saturating_sub(1).max(1))
    }

    pub fn cap(&self) -> u32 {
        self.cap.unwrap_or(self.dimension + 1).max(self.s() + 1)
    }
}

/// Formality verdict for a model of a closed manifold of the declared
/// dimension.
pub fn formality(model: &Model, options: FormalityOptions) -> Result<FormalityVerdict> {
    let dimension = options.dimension;
    let (s, cap) = (options.s(), options.cap());
    let bettis = cohomology::betti_numbers(model, dimension.max(2));
    if bettis[0] != 1 {
        return Err(SullivanError::NotConnected { b0: bettis[0] });
    }
    if let Some(v) = formality_shortcut(bettis[1], bettis[2], dimension) {
        return Ok(v);
    }
    let h = cohomology::compute(model, dimension);
    if let Some(w) = find_massey_obstruction(model, &h, dimension) {
        return Ok(FormalityVerdict {
            status: FormalityStatus::NonFormal,
            witness: FormalityWitness::Massey(w),
            checked_degree_cap: dimension,
            s: None,
            dimension: Some(dimension),
            notes: vec!["a non-vanishing Massey product obstructs formality".into()],
        });
    }
    if let Model::Free(d) = model {
        if d.is_minimal() {
            return s_formality_check(d, s, cap, Some(dimension), None);
        }
    }
    if bettis[1] == 0 {
        let mm = minimal_model(model, cap)?;
        return mm.s_formality(s, cap, Some(dimension));
    }
    Ok(FormalityVerdict {
        status: FormalityStatus::Inconclusive,
        witness: FormalityWitness::None,
        checked_degree_cap: dimension,
        s: Some(s),
        dimension: Some(dimension),
        notes: vec!["no Massey obstruction found; the model is neither minimal nor simply connected".into()],
    })
}
