//! Differentials on free CDGAs and finite-dimensional DGAs.
//!
//! A [`Dga`] is a free graded-commutative algebra together with the images of
//! its generators under `d`; the differential on products follows from the
//! graded Leibniz rule. A [`TabularDga`] is a finite-dimensional DGA given by
//! a basis, a multiplication table and a differential matrix. Both implement
//! [`CochainAlgebra`], the interface used by cohomology, Massey products and
//! minimal models.

mod model;
mod tabular;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};


use crate::exactla::{sparse_from_dense, Rational, RationalMatrix, SparseRow};
use crate::gca::{Algebra, Element, GcaError, Monomial};

pub use model::{Cochain, CochainAlgebra, Model};
pub use tabular::{TabularBuilder, TabularDga, UNIT_LABEL};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DgaError {
    #[error(transparent)]
    Algebra(#[from] GcaError),
    #[error("expected {expected} differential images, found {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("d({generator}) is not homogeneous")]
    InhomogeneousDifferential { generator: String },
    #[error("d({generator}) has degree {found}, expected {expected}")]
    WrongDegree {
        generator: String,
        expected: u32,
        found: u32,
    },
    #[error("d∘d is nonzero: {0}")]
    D2NonZero(ValidationReport),
    #[error("validation bound {bound} is below the required {required}")]
    BoundTooLow { bound: u32, required: u32 },
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("{0} is not a cocycle")]
    NotACocycle(String),
}

pub type Result<T> = std::result::Result<T, DgaError>;

/// A generator whose differential does not square to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct D2Failure {
    pub generator: String,
    pub d_squared: String,
}

/// Outcome of [`Dga::validate`]; empty means valid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub max_degree: u32,
    pub failures: Vec<D2Failure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .failures
            .iter()
            .map(|x| format!("d(d({})) = {}", x.generator, x.d_squared))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// A free CDGA `(ΛV, d)`.
#[derive(Clone)]
pub struct Dga {
    algebra: Arc<Algebra>,
    images: Vec<Element>,
    matrices: Arc<Mutex<HashMap<u32, Arc<RationalMatrix>>>>,
}

impl fmt::Debug for Dga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("Dga");
        for g in self.algebra.generators() {
            s.field(
                &format!("d({})", g.name()),
                &self.images[g.ordinal()].to_string(),
            );
        }
        s.finish()
    }
}

impl Dga {
    /// A free CDGA with `d(generator i) = images[i]`. Images must be
    /// homogeneous of degree one more than their generator (or zero).
    pub fn new(algebra: &Arc<Algebra>, images: Vec<Element>) -> Result<Self> {
        if images.len() != algebra.num_generators() {
            return Err(DgaError::ImageCount {
                expected: algebra.num_generators(),
                found: images.len(),
            });
        }
        for (g, img) in algebra.generators().iter().zip(&images) {
            if img.algebra().id() != algebra.id() {
                return Err(GcaError::MixedAlgebra.into());
            }
            match img.homogeneous_degree() {
                Err(_) => {
                    return Err(DgaError::InhomogeneousDifferential {
                        generator: g.name().to_string(),
                    })
                }
                Ok(Some(k)) if k != g.degree() + 1 => {
                    return Err(DgaError::WrongDegree {
                        generator: g.name().to_string(),
                        expected: g.degree() + 1,
                        found: k,
                    })
                }
                _ => {}
            }
        }
        Ok(Dga {
            algebra: algebra.clone(),
            images,
            matrices: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    /// Like [`Dga::new`] with images given by generator name; generators not
    /// mentioned are closed.
    pub fn from_named(algebra: &Arc<Algebra>, images: &[(&str, Element)]) -> Result<Self> {
        let mut all = vec![Element::zero(algebra); algebra.num_generators()];
        for (name, img) in images {
            let i = algebra
                .generator_index(name)
                .ok_or_else(|| GcaError::UnknownGenerator(name.to_string()))?;
            all[i] = img.clone();
        }
        Self::new(algebra, all)
    }

    /// [`Dga::new`] followed by validation at the default bound.
    pub fn validated(algebra: &Arc<Algebra>, images: Vec<Element>) -> Result<Self> {
        let dga = Self::new(algebra, images)?;
        let report = dga.validate(dga.default_bound())?;
        if report.is_valid() {
            Ok(dga)
        } else {
            Err(DgaError::D2NonZero(report))
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn image(&self, ordinal: usize) -> &Element {
        &self.images[ordinal]
    }

    /// Largest generator degree plus two.
    pub fn default_bound(&self) -> u32 {
        self.algebra.max_generator_degree() + 2
    }

    pub fn generator(&self, name: &str) -> Result<Element> {
        Ok(Element::named(&self.algebra, name)?)
    }

    fn d_monomial(&self, m: &Monomial) -> Element {
        let alg = &self.algebra;
        let mut out = Element::zero(alg);
        let factors = m.factors();
        let mut prefix_degree = 0u32;
        for (i, &(g, e)) in factors.iter().enumerate() {
            let gen_degree = alg.generators()[g].degree();
            let dg = &self.images[g];
            if !dg.is_zero() {
                let mut middle = dg.scale(&Rational::from_integer(e.into()));
                if e > 1 {
                    let rest = alg.power_monomial(g, e - 1).expect("even power");
                    middle = &Element::from_term(alg, rest, Rational::from_integer(1.into())) * &middle;
                }
                let prefix = Monomial::from_factors(factors[..i].to_vec());
                let suffix = Monomial::from_factors(factors[i + 1..].to_vec());
                let one = Rational::from_integer(1.into());
                let sign = if prefix_degree % 2 == 1 { -one.clone() } else { one.clone() };
                let term = &(&Element::from_term(alg, prefix, sign) * &middle)
                    * &Element::from_term(alg, suffix, one);
                out = &out + &term;
            }
            prefix_degree += gen_degree * e;
        }
        out
    }

    /// `d(e)` by the graded Leibniz rule.
    pub fn apply_d(&self, e: &Element) -> Result<Element> {
        if e.algebra().id() != self.algebra.id() {
            return Err(GcaError::MixedAlgebra.into());
        }
        let mut out = Element::zero(&self.algebra);
        for (m, c) in e.terms() {
            out = &out + &self.d_monomial(m).scale(c);
        }
        Ok(out)
    }

    /// Checks `d(d(g)) = 0` for every generator whose `d²` lands in degree
    /// at most `max_degree`.
    pub fn validate(&self, max_degree: u32) -> Result<ValidationReport> {
        let required = self.algebra.max_generator_degree() + 1;
        if max_degree < required {
            return Err(DgaError::BoundTooLow {
                bound: max_degree,
                required,
            });
        }
        let mut report = ValidationReport {
            max_degree,
            failures: Vec::new(),
        };
        for g in self.algebra.generators() {
            if g.degree() + 2 > max_degree {
                continue;
            }
            let dd = self.apply_d(&self.images[g.ordinal()])?;
            if !dd.is_zero() {
                report.failures.push(D2Failure {
                    generator: g.name().to_string(),
                    d_squared: dd.to_string(),
                });
            }
        }
        Ok(report)
    }

    /// Whether every generator's differential is decomposable.
    pub fn is_minimal(&self) -> bool {
        self.images.iter().all(|img| img.linear_part().is_zero())
    }

    /// Coordinates of a homogeneous element in the degree-`k` basis.
    pub fn cochain_in(&self, e: &Element, k: u32) -> Result<Cochain> {
        if e.algebra().id() != self.algebra.id() {
            return Err(GcaError::MixedAlgebra.into());
        }
        match e.homogeneous_degree()? {
            Some(d) if d != k => Err(GcaError::Inhomogeneous.into()),
            _ => Ok(Cochain::new(k, e.coords(k))),
        }
    }

    /// Coordinates of a nonzero homogeneous element.
    pub fn cochain(&self, e: &Element) -> Result<Cochain> {
        let k = e.homogeneous_degree()?.ok_or(GcaError::Inhomogeneous)?;
        self.cochain_in(e, k)
    }

    pub fn element(&self, c: &Cochain) -> Element {
        Element::from_coords(&self.algebra, c.degree(), c.coords())
    }

    pub(crate) fn d_column(&self, m: &Monomial, target_degree: u32) -> SparseRow {
        let basis = self.algebra.degree_basis(target_degree);
        let mut col: SparseRow = self
            .d_monomial(m)
            .terms()
            .map(|(mono, c)| (basis.index_of(mono).expect("d preserves degree"), c.clone()))
            .collect();
        col.sort_by_key(|(i, _)| *i);
        col
    }
}

impl CochainAlgebra for Dga {
    fn dim(&self, k: u32) -> usize {
        self.algebra.degree_basis(k).len()
    }

    fn differential_matrix(&self, k: u32) -> Arc<RationalMatrix> {
        if let Some(m) = self.matrices.lock().expect("matrix cache").get(&k) {
            return m.clone();
        }
        let source = self.algebra.degree_basis(k);
        let target_dim = self.dim(k + 1);
        let cols: Vec<SparseRow> = source
            .monomials()
            .iter()
            .map(|m| self.d_column(m, k + 1))
            .collect();
        let m = Arc::new(RationalMatrix::from_sparse_columns(target_dim, &cols));
        self.matrices
            .lock()
            .expect("matrix cache")
            .insert(k, m.clone());
        m
    }

    fn product(&self, lhs: &Cochain, rhs: &Cochain) -> Cochain {
        let k = lhs.degree() + rhs.degree();
        let p = &self.element(lhs) * &self.element(rhs);
        Cochain::new(k, p.coords(k))
    }

    fn unit(&self) -> Cochain {
        Cochain::new(0, vec![Rational::from_integer(1.into())])
    }

    fn render(&self, c: &Cochain) -> String {
        self.element(c).to_string()
    }
}

/// Sparse coordinates of a cochain.
pub(crate) fn cochain_sparse(c: &Cochain) -> SparseRow {
    sparse_from_dense(c.coords())
}
