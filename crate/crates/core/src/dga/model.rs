use std::sync::Arc;

use num_traits::Zero;

use crate::exactla::{Rational, RationalMatrix};

use super::{Dga, TabularDga};

/// A homogeneous element given by coordinates in a model's degree basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: u32,
    coords: Vec<Rational>,
}

impl Cochain {
    pub fn new(degree: u32, coords: Vec<Rational>) -> Self {
        Cochain { degree, coords }
    }

    pub fn zero(degree: u32, dim: usize) -> Self {
        Cochain {
            degree,
            coords: vec![Rational::zero(); dim],
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Cochain {
        Cochain {
            degree: self.degree,
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    /// Sum of two cochains of the same degree.
    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.degree, other.degree, "adding cochains of different degrees");
        Cochain {
            degree: self.degree,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }
}

/// The cochain-level view of a DGA shared by free and tabular models:
/// finite-dimensional graded pieces, the differential as matrices, and the
/// product on coordinates.
pub trait CochainAlgebra {
    /// Dimension of the degree-`k` piece.
    fn dim(&self, k: u32) -> usize;

    /// Matrix of `d` from degree `k` to degree `k + 1`.
    fn differential_matrix(&self, k: u32) -> Arc<RationalMatrix>;

    fn product(&self, lhs: &Cochain, rhs: &Cochain) -> Cochain;

    fn unit(&self) -> Cochain;

    /// Human-readable form of a cochain.
    fn render(&self, c: &Cochain) -> String;

    /// Highest degree with a nonzero piece, if the algebra is finite.
    fn top_degree(&self) -> Option<u32> {
        None
    }

    /// `d` applied to a cochain.
    fn d_cochain(&self, c: &Cochain) -> Cochain {
        let m = self.differential_matrix(c.degree());
        Cochain::new(
            c.degree() + 1,
            m.mul_vec(c.coords()).expect("cochain dimension matches its degree"),
        )
    }

    fn zero(&self, k: u32) -> Cochain {
        Cochain::zero(k, self.dim(k))
    }
}

/// Either kind of DGA the engine works with.
#[derive(Debug, Clone)]
pub enum Model {
    Free(Dga),
    Tabular(TabularDga),
}

impl Model {
    pub fn as_free(&self) -> Option<&Dga> {
        match self {
            Model::Free(d) => Some(d),
            Model::Tabular(_) => None,
        }
    }

    pub fn as_tabular(&self) -> Option<&TabularDga> {
        match self {
            Model::Free(_) => None,
            Model::Tabular(t) => Some(t),
        }
    }
}

impl From<Dga> for Model {
    fn from(d: Dga) -> Self {
        Model::Free(d)
    }
}

impl From<TabularDga> for Model {
    fn from(t: TabularDga) -> Self {
        Model::Tabular(t)
    }
}

impl CochainAlgebra for Model {
    fn dim(&self, k: u32) -> usize {
        match self {
            Model::Free(d) => d.dim(k),
            Model::Tabular(t) => t.dim(k),
        }
    }

    fn differential_matrix(&self, k: u32) -> Arc<RationalMatrix> {
        match self {
            Model::Free(d) => d.differential_matrix(k),
            Model::Tabular(t) => t.differential_matrix(k),
        }
    }

    fn product(&self, lhs: &Cochain, rhs: &Cochain) -> Cochain {
        match self {
            Model::Free(d) => d.product(lhs, rhs),
            Model::Tabular(t) => t.product(lhs, rhs),
        }
    }

    fn unit(&self) -> Cochain {
        match self {
            Model::Free(d) => d.unit(),
            Model::Tabular(t) => t.unit(),
        }
    }

    fn render(&self, c: &Cochain) -> String {
        match self {
            Model::Free(d) => d.render(c),
            Model::Tabular(t) => t.render(c),
        }
    }

    fn top_degree(&self) -> Option<u32> {
        match self {
            Model::Free(d) => d.top_degree(),
            Model::Tabular(t) => t.top_degree(),
        }
    }
}
