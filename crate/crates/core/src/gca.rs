//! Free graded-commutative algebras over Q.
//!
//! An [`Algebra`] is the free graded-commutative algebra on a list of named
//! generators of positive degree. Odd generators anticommute and square to
//! zero; even generators commute. A [`Monomial`] keeps its factors sorted by
//! `(degree, ordinal)`, and every product is brought back to that normal form
//! with the Koszul sign of the permutation applied to the coefficient.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::exactla::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GcaError {
    #[error("generator `{0}` is declared twice")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have positive degree")]
    ZeroDegree(String),
    #[error("`{0}` is not a valid generator name")]
    InvalidName(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("elements belong to different algebras")]
    MixedAlgebra,
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("algebra is not an extension of the element's algebra")]
    Incompatible,
}

pub type Result<T> = std::result::Result<T, GcaError>;

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    name: String,
    degree: u32,
    ordinal: usize,
}

impl Generator {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn ordinal(&self) -> usize {
        self.ordinal
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// A product of generators in normal form.
///
/// Factors are `(ordinal, exponent)` pairs sorted by the generators'
/// `(degree, ordinal)` key. Odd generators always carry exponent 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    factors: Vec<(usize, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    /// Wraps factors that are already in normal form.
    pub(crate) fn from_factors(factors: Vec<(usize, u32)>) -> Self {
        Monomial { factors }
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of generator factors counted with multiplicity.
    pub fn length(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, ordinal: usize) -> u32 {
        self.factors
            .iter()
            .find(|(g, _)| *g == ordinal)
            .map_or(0, |(_, e)| *e)
    }
}

/// The monomials of one degree with a lookup index.
#[derive(Debug)]
pub struct DegreeBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeBasis {
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// The free graded-commutative algebra on a list of generators.
#[derive(Debug)]
pub struct Algebra {
    id: u64,
    generators: Vec<Generator>,
    by_name: HashMap<String, usize>,
    /// Position of each ordinal in `(degree, ordinal)` order.
    rank: Vec<usize>,
    /// Ordinals in `(degree, ordinal)` order.
    order: Vec<usize>,
    bases: Mutex<HashMap<u32, Arc<DegreeBasis>>>,
}

pub(crate) fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Algebra {
    /// Builds `Λ(generators)`; ordinals follow list order.
    pub fn new<S: Into<String>>(generators: impl IntoIterator<Item = (S, u32)>) -> Result<Arc<Self>> {
        let mut gens = Vec::new();
        let mut by_name = HashMap::new();
        for (ordinal, (name, degree)) in generators.into_iter().enumerate() {
            let name = name.into();
            if !valid_identifier(&name) {
                return Err(GcaError::InvalidName(name));
            }
            if degree == 0 {
                return Err(GcaError::ZeroDegree(name));
            }
            if by_name.insert(name.clone(), ordinal).is_some() {
                return Err(GcaError::DuplicateGenerator(name));
            }
            gens.push(Generator {
                name,
                degree,
                ordinal,
            });
        }
        let mut order: Vec<usize> = (0..gens.len()).collect();
        order.sort_by_key(|&i| (gens[i].degree, i));
        let mut rank = vec![0; gens.len()];
        for (pos, &ord) in order.iter().enumerate() {
            rank[ord] = pos;
        }
        Ok(Arc::new(Algebra {
            id: NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed),
            generators: gens,
            by_name,
            rank,
            order,
            bases: Mutex::new(HashMap::new()),
        }))
    }

    /// A new algebra with extra generators appended after the existing ones.
    pub fn extended<S: Into<String>>(&self, more: impl IntoIterator<Item = (S, u32)>) -> Result<Arc<Self>> {
        let existing = self
            .generators
            .iter()
            .map(|g| (g.name.clone(), g.degree));
        let extra = more.into_iter().map(|(n, d)| (n.into(), d));
        Algebra::new(existing.chain(extra))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.generators.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.factors
            .iter()
            .map(|(g, e)| self.generators[*g].degree * e)
            .sum()
    }

    /// Monomial for a single generator power, or `None` if it vanishes.
    pub fn power_monomial(&self, ordinal: usize, exponent: u32) -> Option<Monomial> {
        if exponent == 0 {
            return Some(Monomial::one());
        }
        if self.generators[ordinal].is_odd() && exponent > 1 {
            return None;
        }
        Some(Monomial {
            factors: vec![(ordinal, exponent)],
        })
    }

    /// Normal form of `lhs * rhs`: `None` if the product vanishes, otherwise
    /// the monomial and whether the Koszul sign is negative.
    pub fn mul_monomials(&self, lhs: &Monomial, rhs: &Monomial) -> Option<(bool, Monomial)> {
        let odd = |g: usize| self.generators[g].is_odd();
        let a = &lhs.factors;
        let mut out = Vec::with_capacity(a.len() + rhs.factors.len());
        let mut odd_remaining = a.iter().filter(|(g, _)| odd(*g)).count();
        let mut negative = false;
        let mut i = 0;
        for &(g, e) in &rhs.factors {
            while i < a.len() && self.rank[a[i].0] < self.rank[g] {
                if odd(a[i].0) {
                    odd_remaining -= 1;
                }
                out.push(a[i]);
                i += 1;
            }
            if i < a.len() && a[i].0 == g {
                if odd(g) {
                    return None;
                }
                out.push((g, a[i].1 + e));
                i += 1;
                continue;
            }
            if odd(g) && odd_remaining % 2 == 1 {
                negative = !negative;
            }
            out.push((g, e));
        }
        out.extend_from_slice(&a[i..]);
        Some((negative, Monomial { factors: out }))
    }

    /// All normal-form monomials of degree `k`, in a fixed order.
    pub fn degree_basis(&self, k: u32) -> Arc<DegreeBasis> {
        let mut cache = self.bases.lock().expect("basis cache poisoned");
        if let Some(b) = cache.get(&k) {
            return b.clone();
        }
        let mut monomials = Vec::new();
        let mut current = Vec::new();
        self.enumerate(0, k, &mut current, &mut monomials);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let basis = Arc::new(DegreeBasis { monomials, index });
        cache.insert(k, basis.clone());
        basis
    }

    fn enumerate(&self, pos: usize, remaining: u32, current: &mut Vec<(usize, u32)>, out: &mut Vec<Monomial>) {
        if remaining == 0 {
            out.push(Monomial {
                factors: current.clone(),
            });
            return;
        }
        if pos == self.order.len() {
            return;
        }
        let g = &self.generators[self.order[pos]];
        let max_exp = if g.is_odd() { 1 } else { remaining / g.degree };
        for e in (0..=max_exp.min(remaining / g.degree)).rev() {
            if e > 0 {
                current.push((g.ordinal, e));
            }
            self.enumerate(pos + 1, remaining - e * g.degree, current, out);
            if e > 0 {
                current.pop();
            }
        }
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        m.factors
            .iter()
            .map(|(g, e)| {
                let name = &self.generators[*g].name;
                if *e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// All degree-`k` normal-form monomials of `alg`.
pub fn degree_basis(alg: &Algebra, k: u32) -> Vec<Monomial> {
    alg.degree_basis(k).monomials().to_vec()
}

/// A rational linear combination of normal-form monomials.
#[derive(Clone)]
pub struct Element {
    algebra: Arc<Algebra>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.id == other.algebra.id && self.terms == other.terms
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl Element {
    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        Element {
            algebra: algebra.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(algebra: &Arc<Algebra>) -> Self {
        Self::scalar(algebra, Rational::one())
    }

    pub fn scalar(algebra: &Arc<Algebra>, c: Rational) -> Self {
        Self::from_term(algebra, Monomial::one(), c)
    }

    pub fn from_term(algebra: &Arc<Algebra>, m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Element {
            algebra: algebra.clone(),
            terms,
        }
    }

    /// The generator with the given ordinal.
    pub fn generator(algebra: &Arc<Algebra>, ordinal: usize) -> Self {
        Self::from_term(
            algebra,
            Monomial {
                factors: vec![(ordinal, 1)],
            },
            Rational::one(),
        )
    }

    /// The generator with the given name.
    pub fn named(algebra: &Arc<Algebra>, name: &str) -> Result<Self> {
        let i = algebra
            .generator_index(name)
            .ok_or_else(|| GcaError::UnknownGenerator(name.to_string()))?;
        Ok(Self::generator(algebra, i))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Ok(None)` for zero, `Ok(Some(k))` when every term has degree `k`.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        let mut degrees = self.terms.keys().map(|m| self.algebra.monomial_degree(m));
        let Some(first) = degrees.next() else {
            return Ok(None);
        };
        if degrees.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(GcaError::Inhomogeneous)
        }
    }

    fn same_algebra(&self, other: &Element) -> Result<()> {
        if self.algebra.id == other.algebra.id {
            Ok(())
        } else {
            Err(GcaError::MixedAlgebra)
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn try_add(&self, rhs: &Element) -> Result<Element> {
        self.same_algebra(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Element) -> Result<Element> {
        self.try_add(&rhs.scale(&-Rational::one()))
    }

    pub fn try_mul(&self, rhs: &Element) -> Result<Element> {
        self.same_algebra(rhs)?;
        let mut out = Element::zero(&self.algebra);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                if let Some((negative, m)) = self.algebra.mul_monomials(m1, m2) {
                    let c = c1 * c2;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Element {
        if c.is_zero() {
            return Element::zero(&self.algebra);
        }
        Element {
            algebra: self.algebra.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Element {
        let mut out = Element::one(&self.algebra);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// The same element viewed in `target`, which must extend this
    /// element's algebra (same leading generators, same degrees).
    pub fn transport(&self, target: &Arc<Algebra>) -> Result<Element> {
        if target.id == self.algebra.id {
            return Ok(self.clone());
        }
        let src = self.algebra.generators();
        if src.len() > target.generators.len()
            || src
                .iter()
                .zip(target.generators())
                .any(|(a, b)| a.name != b.name || a.degree != b.degree)
        {
            return Err(GcaError::Incompatible);
        }
        let mut out = Element::zero(target);
        for (m, c) in &self.terms {
            // Factor order only depends on (degree, ordinal), which is preserved.
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Coordinates in the degree-`k` monomial basis; terms of other degrees
    /// are ignored.
    pub fn coords(&self, k: u32) -> Vec<Rational> {
        let basis = self.algebra.degree_basis(k);
        let mut out = vec![Rational::zero(); basis.len()];
        for (m, c) in &self.terms {
            if let Some(i) = basis.index_of(m) {
                out[i] = c.clone();
            }
        }
        out
    }

    pub fn from_coords(algebra: &Arc<Algebra>, k: u32, coords: &[Rational]) -> Element {
        let basis = algebra.degree_basis(k);
        let mut terms = BTreeMap::new();
        for (m, c) in basis.monomials().iter().zip(coords) {
            if !c.is_zero() {
                terms.insert(m.clone(), c.clone());
            }
        }
        Element {
            algebra: algebra.clone(),
            terms,
        }
    }

    /// Image under the algebra morphism sending generator `i` to
    /// `images[i]`. All images must live in one algebra, `target`.
    pub fn substitute(&self, target: &Arc<Algebra>, images: &[Element]) -> Result<Element> {
        let mut out = Element::zero(target);
        for (m, c) in &self.terms {
            let mut term = Element::scalar(target, c.clone());
            for (g, e) in &m.factors {
                let img = &images[*g];
                img.same_algebra(&term)?;
                for _ in 0..*e {
                    term = term.try_mul(img)?;
                }
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// The part of the element of word length one in the generators.
    pub fn linear_part(&self) -> Element {
        Element {
            algebra: self.algebra.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.length() == 1)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

pub(crate) fn render_coefficient_term(c: &Rational, body: &str, first: bool, out: &mut String) {
    let negative = c < &Rational::zero();
    let abs = if negative { -c.clone() } else { c.clone() };
    if first {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    if body == "1" {
        out.push_str(&abs.to_string());
    } else if abs.is_one() {
        out.push_str(body);
    } else {
        out.push_str(&format!("{abs}*{body}"));
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| (self.algebra.monomial_degree(m), *m));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            render_coefficient_term(c, &self.algebra.render_monomial(m), i == 0, &mut out);
        }
        write!(f, "{out}")
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("addition of elements from different algebras")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_sub(rhs).expect("subtraction of elements from different algebras")
    }
}

impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.try_mul(rhs).expect("product of elements from different algebras")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&-Rational::one())
    }
}
