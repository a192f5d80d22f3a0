//! Triple Massey products.
//!
//! For cocycles `a1, a2, a3` of degrees `p1, p2, p3` with `a1·a2 = d a12`
//! and `a2·a3 = d a23`, the product is the class of
//! `a1·a23 + (-1)^(p1+1) a12·a3` in `H^(p1+p2+p3-1)`, well defined modulo
//! `[a1]·H^(p2+p3-1) + H^(p1+p2-1)·[a3]`.

use crate::cohomology::{self, CohomologySummary};
use crate::dga::{Cochain, CochainAlgebra};
use crate::exactla::{Rational, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MasseyError {
    #[error("the Massey product is not defined: {0} is a nonzero class")]
    NotDefined(String),
    #[error("{0} is not a cocycle")]
    NotACocycle(String),
    #[error("Massey products need classes of positive degree")]
    ZeroDegree,
    #[error("the cohomology summary stops at degree {max_degree}, below the needed {needed}")]
    BoundTooLow { needed: u32, max_degree: u32 },
    #[error("{0} is not a primitive of the corresponding product")]
    BadPrimitive(String),
}

pub type Result<T> = std::result::Result<T, MasseyError>;

#[derive(Debug, Clone, PartialEq)]
pub struct MasseyResult {
    /// Degree `p1 + p2 + p3 - 1` of the product.
    pub degree: u32,
    pub representative: Cochain,
    pub a12: Cochain,
    pub a23: Cochain,
    /// Class of the representative in the summary's basis.
    pub class: Vec<Rational>,
    /// Indeterminacy as a subspace of class coordinates.
    pub indeterminacy: Subspace,
    pub vanishes: bool,
}

fn check_cocycle<A: CochainAlgebra + ?Sized>(alg: &A, a: &Cochain) -> Result<()> {
    if a.degree() == 0 {
        return Err(MasseyError::ZeroDegree);
    }
    if !alg.d_cochain(a).is_zero() {
        return Err(MasseyError::NotACocycle(alg.render(a)));
    }
    Ok(())
}

/// Solves `d w = z` or reports `z` as a nonzero class.
fn primitive<A: CochainAlgebra + ?Sized>(alg: &A, z: &Cochain) -> Result<Cochain> {
    cohomology::is_exact(alg, z)
        .map_err(|e| MasseyError::NotACocycle(e.to_string()))?
        .ok_or_else(|| MasseyError::NotDefined(alg.render(z)))
}

/// `⟨[a1], [a2], [a3]⟩`, computing the cohomology it needs.
pub fn triple<A: CochainAlgebra + ?Sized>(
    alg: &A,
    a1: &Cochain,
    a2: &Cochain,
    a3: &Cochain,
) -> Result<MasseyResult> {
    let n = (a1.degree() + a2.degree() + a3.degree()).saturating_sub(1);
    let summary = cohomology::compute(alg, n);
    triple_in(alg, &summary, a1, a2, a3)
}

/// `⟨[a1], [a2], [a3]⟩` against a precomputed summary reaching degree
/// `p1 + p2 + p3 - 1`.
pub fn triple_in<A: CochainAlgebra + ?Sized>(
    alg: &A,
    summary: &CohomologySummary,
    a1: &Cochain,
    a2: &Cochain,
    a3: &Cochain,
) -> Result<MasseyResult> {
    for a in [a1, a2, a3] {
        check_cocycle(alg, a)?;
    }
    let a12 = primitive(alg, &alg.product(a1, a2))?;
    let a23 = primitive(alg, &alg.product(a2, a3))?;
    triple_with_primitives(alg, summary, a1, a2, a3, &a12, &a23)
}

/// The Massey product for explicitly chosen primitives `d a12 = a1·a2` and
/// `d a23 = a2·a3`.
pub fn triple_with_primitives<A: CochainAlgebra + ?Sized>(
    alg: &A,
    summary: &CohomologySummary,
    a1: &Cochain,
    a2: &Cochain,
    a3: &Cochain,
    a12: &Cochain,
    a23: &Cochain,
) -> Result<MasseyResult> {
    for a in [a1, a2, a3] {
        check_cocycle(alg, a)?;
    }
    let (p1, p2, p3) = (a1.degree(), a2.degree(), a3.degree());
    let degree = p1 + p2 + p3 - 1;
    if summary.max_degree() < degree {
        return Err(MasseyError::BoundTooLow {
            needed: degree,
            max_degree: summary.max_degree(),
        });
    }
    for (w, z) in [(a12, alg.product(a1, a2)), (a23, alg.product(a2, a3))] {
        if w.degree() + 1 != z.degree() || alg.d_cochain(w) != z {
            return Err(MasseyError::BadPrimitive(alg.render(w)));
        }
    }
    let first = alg.product(a1, a23);
    let second = alg.product(a12, a3);
    let representative = if p1 % 2 == 1 {
        first.add(&second)
    } else {
        first.sub(&second)
    };
    let class = summary
        .class_coords(&representative)
        .map_err(|e| MasseyError::NotACocycle(e.to_string()))?;

    let mut spanning = Vec::new();
    for h in summary.representatives(p2 + p3 - 1) {
        spanning.push(alg.product(a1, &h));
    }
    for h in summary.representatives(p1 + p2 - 1) {
        spanning.push(alg.product(&h, a3));
    }
    let vectors: Vec<Vec<Rational>> = spanning
        .iter()
        .map(|c| summary.class_coords(c).expect("products of cocycles are cocycles"))
        .collect();
    let indeterminacy =
        Subspace::span(summary.betti(degree), &vectors).expect("class coordinates have the Betti dimension");
    let vanishes = indeterminacy
        .member(&class)
        .expect("class coordinates have the Betti dimension");
    Ok(MasseyResult {
        degree,
        representative,
        a12: a12.clone(),
        a23: a23.clone(),
        class,
        indeterminacy,
        vanishes,
    })
}
