//! Cohomology of a DGA up to a degree bound.
//!
//! Class representatives are the echelon coset representatives of
//! `Z^k / B^k`. A cocycle's class coordinates are read off after reducing it
//! modulo `B^k`: the remainder vanishes on the pivot columns of `B^k` and its
//! entries at the representatives' pivot columns are the coordinates.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::dga::{cochain_sparse, Cochain, CochainAlgebra};
use crate::exactla::{dense_from_sparse, quotient_subspace, Rational, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("{0} is not a cocycle")]
    NotACocycle(String),
    #[error("degree {degree} is beyond the computed bound {max_degree}")]
    DegreeOutOfRange { degree: u32, max_degree: u32 },
    #[error("the cup product table was not computed")]
    NoRing,
    #[error("Poincaré duality fails in dimension {dimension}: {detail}")]
    PoincareDuality { dimension: u32, detail: String },
}

pub type Result<T> = std::result::Result<T, CohomologyError>;

/// Cocycles, coboundaries and representatives in one degree.
#[derive(Debug, Clone)]
pub struct CochainData {
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
    /// Echelon basis of the representatives, vanishing on the pivots of
    /// the coboundaries.
    pub representatives: Subspace,
}

#[derive(Debug, Clone)]
pub struct DegreeCohomology {
    pub degree: u32,
    pub betti: usize,
    /// Display names of the basis classes.
    pub labels: Vec<String>,
    /// Present when the summary was computed from cochains.
    pub cochains: Option<CochainData>,
}

/// Per-degree cohomology with an optional cup product table.
/// Cup products `(p, q) ↦ [i][j] ↦` coordinates in degree `p + q`.
pub type CupTable = BTreeMap<(u32, u32), Vec<Vec<Vec<Rational>>>>;

#[derive(Debug, Clone)]
pub struct CohomologySummary {
    max_degree: u32,
    degrees: Vec<DegreeCohomology>,
    /// `cup[(p, q)][i][j]`: coordinates of `[e^p_i]·[e^q_j]` in `H^{p+q}`.
    cup: Option<CupTable>,
}

/// Cocycles, coboundaries and class representatives of degree `k`.
pub fn degree_data<A: CochainAlgebra + ?Sized>(alg: &A, k: u32) -> CochainData {
    let cocycles = alg.differential_matrix(k).kernel();
    let coboundaries = if k == 0 {
        Subspace::zero(alg.dim(0))
    } else {
        alg.differential_matrix(k - 1).image()
    };
    let representatives =
        quotient_subspace(&cocycles, &coboundaries).expect("Z and B share the ambient space");
    CochainData {
        cocycles,
        coboundaries,
        representatives,
    }
}

/// Betti numbers `b_0..=b_max_degree` by rank computations only.
pub fn betti_numbers<A: CochainAlgebra + ?Sized>(alg: &A, max_degree: u32) -> Vec<usize> {
    let ranks: Vec<usize> = (0..=max_degree)
        .map(|k| alg.differential_matrix(k).rank())
        .collect();
    (0..=max_degree as usize)
        .map(|k| alg.dim(k as u32) - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] })
        .collect()
}

/// Cohomology without the cup product table.
pub fn compute<A: CochainAlgebra + ?Sized>(alg: &A, max_degree: u32) -> CohomologySummary {
    let degrees = (0..=max_degree)
        .map(|k| {
            let data = degree_data(alg, k);
            let labels = data
                .representatives
                .basis()
                .into_iter()
                .map(|v| format!("[{}]", alg.render(&Cochain::new(k, v))))
                .collect::<Vec<_>>();
            DegreeCohomology {
                degree: k,
                betti: labels.len(),
                labels,
                cochains: Some(data),
            }
        })
        .collect();
    CohomologySummary {
        max_degree,
        degrees,
        cup: None,
    }
}

/// Cohomology together with the cup products of all basis classes whose
/// product lands within the bound.
pub fn compute_ring<A: CochainAlgebra + ?Sized>(alg: &A, max_degree: u32) -> CohomologySummary {
    let mut summary = compute(alg, max_degree);
    let mut cup = BTreeMap::new();
    for p in 1..=max_degree {
        for q in p..=max_degree - p {
            let (left, right) = (summary.representatives(p), summary.representatives(q));
            if left.is_empty() || right.is_empty() {
                continue;
            }
            let table: Vec<Vec<Vec<Rational>>> = left
                .iter()
                .map(|x| {
                    right
                        .iter()
                        .map(|y| {
                            summary
                                .class_coords(&alg.product(x, y))
                                .expect("products of cocycles are cocycles")
                        })
                        .collect()
                })
                .collect();
            cup.insert((p, q), table);
        }
    }
    summary.cup = Some(cup);
    summary
}

/// Whether the cocycle `z` is exact, with a primitive when it is.
pub fn is_exact<A: CochainAlgebra + ?Sized>(alg: &A, z: &Cochain) -> Result<Option<Cochain>> {
    if !alg.d_cochain(z).is_zero() {
        return Err(CohomologyError::NotACocycle(alg.render(z)));
    }
    if z.degree() == 0 {
        return Ok(if z.is_zero() { Some(z.clone()) } else { None });
    }
    let m = alg.differential_matrix(z.degree() - 1);
    Ok(m.solve(z.coords())
        .ok()
        .map(|w| Cochain::new(z.degree() - 1, w)))
}

impl CohomologySummary {
    /// A summary with no cochain data, for cohomology computed abstractly.
    pub fn abstract_summary(
        max_degree: u32,
        labels: Vec<Vec<String>>,
        cup: Option<CupTable>,
    ) -> Self {
        assert_eq!(labels.len(), max_degree as usize + 1);
        let degrees = labels
            .into_iter()
            .enumerate()
            .map(|(k, labels)| DegreeCohomology {
                degree: k as u32,
                betti: labels.len(),
                labels,
                cochains: None,
            })
            .collect();
        CohomologySummary {
            max_degree,
            degrees,
            cup,
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn degrees(&self) -> &[DegreeCohomology] {
        &self.degrees
    }

    pub fn degree(&self, k: u32) -> Result<&DegreeCohomology> {
        self.degrees
            .get(k as usize)
            .ok_or(CohomologyError::DegreeOutOfRange {
                degree: k,
                max_degree: self.max_degree,
            })
    }

    /// `b_k`, or zero beyond the bound.
    pub fn betti(&self, k: u32) -> usize {
        self.degrees.get(k as usize).map_or(0, |d| d.betti)
    }

    pub fn bettis(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    pub fn has_ring(&self) -> bool {
        self.cup.is_some()
    }

    pub fn cup_table(&self) -> Option<&CupTable> {
        self.cup.as_ref()
    }

    /// Representatives of the basis classes of `H^k` (empty without cochain
    /// data or beyond the bound).
    pub fn representatives(&self, k: u32) -> Vec<Cochain> {
        match self.degrees.get(k as usize).and_then(|d| d.cochains.as_ref()) {
            Some(data) => data
                .representatives
                .basis()
                .into_iter()
                .map(|v| Cochain::new(k, v))
                .collect(),
            None => Vec::new(),
        }
    }

    /// Coordinates of the class of a cocycle in the basis of `H^k`.
    pub fn class_coords(&self, z: &Cochain) -> Result<Vec<Rational>> {
        let k = z.degree();
        let data = self
            .degree(k)?
            .cochains
            .as_ref()
            .expect("class coordinates need cochain data");
        let v = cochain_sparse(z);
        if !data.cocycles.reduce_sparse(&v).is_empty() {
            return Err(CohomologyError::NotACocycle(format!("{:?}", z.coords())));
        }
        let rem = data.coboundaries.reduce_sparse(&v);
        Ok(data.representatives.pivot_values_sparse(&rem))
    }

    /// The cochain `Σ c_i e_i` for class coordinates `c`.
    pub fn class_cochain(&self, k: u32, coords: &[Rational]) -> Cochain {
        let reps = self.representatives(k);
        let dim = self.degrees[k as usize]
            .cochains
            .as_ref()
            .expect("cochain data")
            .cocycles
            .ambient_dim();
        let mut out = Cochain::zero(k, dim);
        for (c, r) in coords.iter().zip(&reps) {
            if !c.is_zero() {
                out = out.add(&r.scale(c));
            }
        }
        out
    }

    /// Cup product of classes given by coordinates.
    pub fn cup(&self, p: u32, x: &[Rational], q: u32, y: &[Rational]) -> Result<Vec<Rational>> {
        let table = self.cup.as_ref().ok_or(CohomologyError::NoRing)?;
        let n = p + q;
        if n > self.max_degree {
            return Err(CohomologyError::DegreeOutOfRange {
                degree: n,
                max_degree: self.max_degree,
            });
        }
        let mut out = vec![Rational::zero(); self.betti(n)];
        if self.betti(p) == 0 || self.betti(q) == 0 || out.is_empty() {
            return Ok(out);
        }
        if p == 0 || q == 0 {
            let (scalar, v) = if p == 0 { (&x[0], y) } else { (&y[0], x) };
            return Ok(v.iter().map(|c| c * scalar).collect());
        }
        let (swap, a, b, key) = if p <= q { (false, x, y, (p, q)) } else { (true, y, x, (q, p)) };
        let entries = &table[&key];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                for (t, c) in entries[i][j].iter().enumerate() {
                    out[t] += ai * bj * c;
                }
            }
        }
        if swap && p % 2 == 1 && q % 2 == 1 {
            for c in &mut out {
                *c = -c.clone();
            }
        }
        Ok(out)
    }

    /// Checks that the summary looks like the cohomology of a closed
    /// orientable manifold of the given dimension: `H^n` is one-dimensional,
    /// nothing lies above it within the bound, and (with a cup table) the
    /// pairings `H^k × H^{n−k} → H^n` are nondegenerate.
    pub fn assert_poincare_duality(&self, dimension: u32) -> Result<()> {
        let fail = |detail: String| CohomologyError::PoincareDuality { dimension, detail };
        if dimension > self.max_degree {
            return Err(fail(format!(
                "the bound {} is below the dimension",
                self.max_degree
            )));
        }
        if self.betti(dimension) != 1 {
            return Err(fail(format!("b_{dimension} = {}", self.betti(dimension))));
        }
        for k in 0..=dimension {
            if self.betti(k) != self.betti(dimension - k) {
                return Err(fail(format!(
                    "b_{k} = {} but b_{} = {}",
                    self.betti(k),
                    dimension - k,
                    self.betti(dimension - k)
                )));
            }
        }
        for k in dimension + 1..=self.max_degree {
            if self.betti(k) != 0 {
                return Err(fail(format!("b_{k} = {} above the dimension", self.betti(k))));
            }
        }
        if self.cup.is_some() {
            for k in 1..dimension {
                let n = self.betti(k);
                let m = self.betti(dimension - k);
                let rows: Vec<Vec<Rational>> = (0..n)
                    .map(|i| {
                        (0..m)
                            .map(|j| {
                                let x = unit_vector(n, i);
                                let y = unit_vector(m, j);
                                self.cup(k, &x, dimension - k, &y)
                                    .map(|v| v[0].clone())
                                    .unwrap_or_else(|_| Rational::zero())
                            })
                            .collect()
                    })
                    .collect();
                let pairing = crate::exactla::RationalMatrix::from_rows(m, rows)
                    .expect("pairing matrix shape");
                if pairing.rank() != n {
                    return Err(fail(format!("the pairing on H^{k} is degenerate")));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::from_integer(1.into());
    v
}

/// Dense form of a cochain reduced modulo the coboundaries of its degree.
pub fn reduce_mod_coboundaries<A: CochainAlgebra + ?Sized>(alg: &A, z: &Cochain) -> Cochain {
    let data = degree_data(alg, z.degree());
    let rem = data.coboundaries.reduce_sparse(&cochain_sparse(z));
    Cochain::new(z.degree(), dense_from_sparse(alg.dim(z.degree()), &rem))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::Dga;
    use crate::exactla::q;
    use crate::gca::{Algebra, Element};

    fn cp2() -> Dga {
        let alg = Algebra::new([("a", 2), ("x", 5)]).unwrap();
        let a = Element::named(&alg, "a").unwrap();
        Dga::validated(&alg, vec![Element::zero(&alg), a.pow(3)]).unwrap()
    }

    #[test]
    fn cp2_betti() {
        let h = compute(&cp2(), 5);
        assert_eq!(h.bettis(), vec![1, 0, 1, 0, 1, 0]);
        assert_eq!(betti_numbers(&cp2(), 5), h.bettis());
    }

    #[test]
    fn s7_betti() {
        let alg = Algebra::new([("u", 7)]).unwrap();
        let dga = Dga::new(&alg, vec![Element::zero(&alg)]).unwrap();
        assert_eq!(compute(&dga, 7).bettis(), vec![1, 0, 0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn exactness_in_cp2() {
        let dga = cp2();
        let a = dga.generator("a").unwrap();
        let a3 = dga.cochain(&a.pow(3)).unwrap();
        let w = is_exact(&dga, &a3).unwrap().unwrap();
        assert_eq!(dga.render(&w), "x");
        assert!(is_exact(&dga, &dga.cochain(&a).unwrap()).unwrap().is_none());
        let x = dga.cochain(&dga.generator("x").unwrap()).unwrap();
        assert!(matches!(is_exact(&dga, &x), Err(CohomologyError::NotACocycle(_))));
    }

    #[test]
    fn cp2_ring_and_duality() {
        let dga = cp2();
        let h = compute_ring(&dga, 5);
        assert_eq!(h.cup(2, &[q(1)], 2, &[q(1)]).unwrap(), vec![q(1)]);
        h.assert_poincare_duality(4).unwrap();
        assert!(h.assert_poincare_duality(3).is_err());
    }

    #[test]
    fn class_coordinates_ignore_coboundaries() {
        let dga = cp2();
        let h = compute(&dga, 7);
        let a = dga.generator("a").unwrap();
        let c = dga.cochain(&a.pow(2)).unwrap();
        assert_eq!(h.class_coords(&c).unwrap(), vec![q(1)]);
        assert_eq!(h.betti(6), 0);
        let c6 = dga.cochain(&a.pow(3)).unwrap();
        assert!(h.class_coords(&c6).unwrap().is_empty());
    }
}
