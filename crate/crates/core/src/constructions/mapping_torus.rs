use std::collections::BTreeMap;

use num_traits::Zero;

use crate::cohomology::{unit_vector, CohomologySummary};
use crate::dga::{Dga, Model, TabularBuilder, TabularDga};
use crate::exactla::{quotient_basis, Rational, RationalMatrix, Subspace};
use crate::gca::{Algebra, Element};
use crate::sullivan::{self, SullivanModel};

use super::{ConstructionError, Result};

/// An automorphism of a cohomology algebra, as one matrix per degree acting
/// on class coordinates: column `i` holds the image of basis class `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyAutomorphism {
    matrices: BTreeMap<u32, RationalMatrix>,
}

fn invalid(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::InvalidAutomorphism(msg.into())
}

impl CohomologyAutomorphism {
    /// Checks shapes and invertibility against `h`. Degrees with `b_k = 0`
    /// and degree 0 may be omitted; any other missing degree is a gap.
    pub fn from_matrices(h: &CohomologySummary, given: BTreeMap<u32, RationalMatrix>) -> Result<Self> {
        let mut matrices = BTreeMap::new();
        for k in 0..=h.max_degree() {
            let b = h.betti(k);
            let m = match given.get(&k) {
                Some(m) => m.clone(),
                None if b == 0 || k == 0 => RationalMatrix::identity(b),
                None => return Err(ConstructionError::DegreeGap(k)),
            };
            if m.nrows() != b || m.ncols() != b {
                return Err(invalid(format!(
                    "degree {k} matrix is {}x{}, expected {b}x{b}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if m.rank() != b {
                return Err(invalid(format!("degree {k} matrix is singular")));
            }
            matrices.insert(k, m);
        }
        if let Some(k) = given.keys().find(|k| **k > h.max_degree()) {
            return Err(invalid(format!("degree {k} is beyond the cohomology bound")));
        }
        Ok(CohomologyAutomorphism { matrices })
    }

    /// The map induced on cohomology by the algebra endomorphism of a free
    /// model sending generator `i` to `images[i]`.
    pub fn induced(dga: &Dga, images: &[Element], h: &CohomologySummary) -> Result<Self> {
        let alg = dga.algebra();
        if images.len() != alg.num_generators() {
            return Err(invalid("one image per generator is required"));
        }
        for (g, img) in alg.generators().iter().zip(images) {
            let d_img = dga.apply_d(img).map_err(|e| invalid(e.to_string()))?;
            let img_d = dga
                .image(g.ordinal())
                .substitute(alg, images)
                .map_err(|e| invalid(e.to_string()))?;
            if d_img != img_d {
                return Err(invalid(format!(
                    "the map does not commute with d on {}",
                    g.name()
                )));
            }
            if !img.is_zero() && img.homogeneous_degree().ok().flatten() != Some(g.degree()) {
                return Err(invalid(format!("the image of {} has the wrong degree", g.name())));
            }
        }
        let mut matrices = BTreeMap::new();
        for k in 0..=h.max_degree() {
            let cols: Vec<Vec<Rational>> = h
                .representatives(k)
                .iter()
                .map(|r| {
                    let e = dga.element(r).substitute(alg, images).expect("same algebra");
                    let c = dga.cochain_in(&e, k).expect("degree preserved");
                    h.class_coords(&c).expect("chain maps send cocycles to cocycles")
                })
                .collect();
            matrices.insert(
                k,
                RationalMatrix::from_columns(h.betti(k), &cols).expect("column shape"),
            );
        }
        Self::from_matrices(h, matrices)
    }

    /// Completes a partial automorphism on the cohomology of a closed
    /// oriented `dimension`-manifold: a missing degree `n − k` is derived
    /// from degree `k` by requiring `ρ(x)·ρ(y) = σ·x·y`, where `σ` is the
    /// action on the top class (`orientation`).
    pub fn complete_by_duality(
        h: &CohomologySummary,
        mut given: BTreeMap<u32, RationalMatrix>,
        dimension: u32,
        orientation: &Rational,
    ) -> Result<Self> {
        if !h.has_ring() {
            return Err(invalid("duality needs the cup product table"));
        }
        if h.max_degree() < dimension || h.betti(dimension) != 1 {
            return Err(invalid(format!("H^{dimension} is not one-dimensional")));
        }
        given
            .entry(dimension)
            .or_insert_with(|| RationalMatrix::from_rows(1, vec![vec![orientation.clone()]]).expect("1x1"));
        for k in 1..dimension {
            let j = dimension - k;
            let (bk, bj) = (h.betti(k), h.betti(j));
            if bj == 0 || given.contains_key(&j) || !given.contains_key(&k) {
                continue;
            }
            // M[i][t] = coefficient of e^k_i · e^j_t on the top class.
            let rows: Vec<Vec<Rational>> = (0..bk)
                .map(|i| {
                    (0..bj)
                        .map(|t| {
                            h.cup(k, &unit_vector(bk, i), j, &unit_vector(bj, t))
                                .expect("within bound")[0]
                                .clone()
                        })
                        .collect()
                })
                .collect();
            let m = RationalMatrix::from_rows(bj, rows).expect("pairing shape");
            let m_inv = m
                .inverse()
                .ok_or_else(|| invalid(format!("the pairing H^{k} x H^{j} is degenerate")))?;
            let r = &given[&k];
            let rt_inv = r
                .transpose()
                .inverse()
                .ok_or_else(|| invalid(format!("degree {k} matrix is singular")))?;
            // Rᵀ M S = σ M, so S = σ M⁻¹ (Rᵀ)⁻¹ M.
            let s = m_inv
                .mul(&rt_inv)
                .and_then(|x| x.mul(&m))
                .expect("square shapes");
            let s = RationalMatrix::from_rows(
                bj,
                s.to_dense()
                    .into_iter()
                    .map(|row| row.into_iter().map(|x| x * orientation).collect())
                    .collect(),
            )
            .expect("shape");
            given.insert(j, s);
        }
        Self::from_matrices(h, given)
    }

    pub fn matrix(&self, k: u32) -> &RationalMatrix {
        &self.matrices[&k]
    }

    pub fn matrices(&self) -> &BTreeMap<u32, RationalMatrix> {
        &self.matrices
    }

    /// Applies `ρ` in degree `k`.
    pub fn apply(&self, k: u32, x: &[Rational]) -> Vec<Rational> {
        self.matrices[&k].mul_vec(x).expect("class coordinates")
    }

    /// Whether `ρ(x·y) = ρ(x)·ρ(y)` on all pairs of basis classes.
    pub fn preserves_cup(&self, h: &CohomologySummary) -> bool {
        if !h.has_ring() {
            return true;
        }
        for p in 1..=h.max_degree() {
            for q in p..=h.max_degree() - p {
                for i in 0..h.betti(p) {
                    for j in 0..h.betti(q) {
                        let x = unit_vector(h.betti(p), i);
                        let y = unit_vector(h.betti(q), j);
                        let lhs = self.apply(p + q, &h.cup(p, &x, q, &y).expect("bound"));
                        let rhs = h
                            .cup(p, &self.apply(p, &x), q, &self.apply(q, &y))
                            .expect("bound");
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Smallest `m ≤ limit` with `ρ^m = id` in every degree.
    pub fn order(&self, limit: u32) -> Option<u32> {
        let mut powers: BTreeMap<u32, RationalMatrix> = self.matrices.clone();
        for m in 1..=limit {
            if powers
                .values()
                .all(|p| *p == RationalMatrix::identity(p.nrows()))
            {
                return Some(m);
            }
            for (k, p) in powers.iter_mut() {
                *p = p.mul(&self.matrices[k]).expect("square");
            }
        }
        None
    }

    fn minus_identity(&self, k: u32) -> RationalMatrix {
        let m = &self.matrices[&k];
        m.sub(&RationalMatrix::identity(m.nrows())).expect("square")
    }
}

fn render_combination(labels: &[String], v: &[Rational]) -> String {
    let mut out = String::new();
    let mut first = true;
    for (l, c) in labels.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        crate::gca::render_coefficient_term(c, l, first, &mut out);
        first = false;
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Per-degree pieces of the mapping torus cohomology, in `H` coordinates.
struct TorusPieces {
    /// Basis of `ker(ρ − id)` on `H^r`.
    kernel: Vec<Subspace>,
    /// `im(ρ − id)` on `H^r`.
    image: Vec<Subspace>,
    /// Representatives of `coker(ρ − id)` on `H^r`.
    coker: Vec<Subspace>,
}

fn torus_pieces(h: &CohomologySummary, rho: &CohomologyAutomorphism) -> TorusPieces {
    let mut kernel = Vec::new();
    let mut image = Vec::new();
    let mut coker = Vec::new();
    for r in 0..=h.max_degree() {
        let a = rho.minus_identity(r);
        kernel.push(a.kernel());
        let im = a.image();
        let reps = quotient_basis(&Subspace::full(h.betti(r)), &im).expect("same ambient");
        coker.push(Subspace::span(h.betti(r), &reps).expect("same ambient"));
        image.push(im);
    }
    TorusPieces {
        kernel,
        image,
        coker,
    }
}

/// Cohomology of the mapping torus of `ρ`: in degree `r`,
/// `ker(ρ* − id | H^r) ⊕ ν·coker(ρ* − id | H^{r−1})` with `|ν| = 1`.
/// Basis classes of the kernel part come first. Products follow from
/// `ν² = 0` and `k·(νc) = (−1)^{|k|} ν·(kc)`.
pub fn mapping_torus_cohomology(h: &CohomologySummary, rho: &CohomologyAutomorphism) -> CohomologySummary {
    let max = h.max_degree() + 1;
    let pieces = torus_pieces(h, rho);
    let labels_of = |r: u32| -> Vec<String> { h.degree(r).map(|d| d.labels.clone()).unwrap_or_default() };
    let mut labels = Vec::new();
    for r in 0..=max {
        let mut l = Vec::new();
        if r <= h.max_degree() {
            for v in pieces.kernel[r as usize].basis() {
                l.push(render_combination(&labels_of(r), &v));
            }
        }
        if r >= 1 {
            for v in pieces.coker[r as usize - 1].basis() {
                l.push(format!("ν·({})", render_combination(&labels_of(r - 1), &v)));
            }
        }
        labels.push(l);
    }
    let kdim = |r: u32| -> usize {
        if r <= h.max_degree() {
            pieces.kernel[r as usize].dim()
        } else {
            0
        }
    };
    // Coordinates of a torus class from its kernel part (an invariant class
    // of H^r) and its ν part (a class of H^{r−1}).
    let assemble = |r: u32, inv: Option<&[Rational]>, nu: Option<&[Rational]>| -> Vec<Rational> {
        let mut out = Vec::new();
        if r <= h.max_degree() {
            let k = &pieces.kernel[r as usize];
            out.extend(match inv {
                Some(v) => k.coordinates(v).expect("ambient").expect("invariant"),
                None => vec![Rational::zero(); k.dim()],
            });
        }
        if r >= 1 {
            let c = &pieces.coker[r as usize - 1];
            out.extend(match nu {
                Some(v) => {
                    let rem = pieces.image[r as usize - 1].reduce(v).expect("ambient");
                    c.pivot_values(&rem)
                }
                None => vec![Rational::zero(); c.dim()],
            });
        }
        out
    };
    let cup = h.cup_table().map(|_| {
        let mut table = BTreeMap::new();
        for p in 1..=max {
            for q in p..=max - p {
                let n = p + q;
                let (bp, bq) = (labels[p as usize].len(), labels[q as usize].len());
                if bp == 0 || bq == 0 {
                    continue;
                }
                let split = |r: u32, i: usize| -> (bool, Vec<Rational>) {
                    if i < kdim(r) {
                        (false, pieces.kernel[r as usize].basis()[i].clone())
                    } else {
                        (true, pieces.coker[r as usize - 1].basis()[i - kdim(r)].clone())
                    }
                };
                let mut rows = Vec::new();
                for i in 0..bp {
                    let mut row = Vec::new();
                    for j in 0..bq {
                        let (x_nu, x) = split(p, i);
                        let (y_nu, y) = split(q, j);
                        let coords = match (x_nu, y_nu) {
                            (false, false) if n <= h.max_degree() => {
                                let v = h.cup(p, &x, q, &y).expect("bound");
                                assemble(n, Some(&v), None)
                            }
                            (false, true) if n - 1 <= h.max_degree() => {
                                // k·(νc) = (−1)^{|k|} ν·(kc)
                                let mut v = h.cup(p, &x, q - 1, &y).expect("bound");
                                if p % 2 == 1 {
                                    v.iter_mut().for_each(|c| *c = -c.clone());
                                }
                                assemble(n, None, Some(&v))
                            }
                            (true, false) if n - 1 <= h.max_degree() => {
                                // (νc)·k = ν·(ck)
                                let v = h.cup(p - 1, &x, q, &y).expect("bound");
                                assemble(n, None, Some(&v))
                            }
                            _ => vec![Rational::zero(); labels[n as usize].len()],
                        };
                        row.push(coords);
                    }
                    rows.push(row);
                }
                table.insert((p, q), rows);
            }
        }
        table
    });
    CohomologySummary::abstract_summary(max, labels, cup)
}

/// A free model of a mapping torus together with the pieces it was built
/// from.
#[derive(Debug, Clone)]
pub struct MappingTorusModel {
    /// `Λ(ν) ⊗ M`, where `M` is the minimal model of the invariant subring.
    pub dga: Dga,
    pub invariant_subring: TabularDga,
    pub invariant_model: SullivanModel,
    pub cohomology: CohomologySummary,
    pub order: u32,
}

/// The invariant subring `H^ρ` as a finite-dimensional DGA with zero
/// differential. Needs the full cup table of `h`.
pub fn invariant_subring(h: &CohomologySummary, rho: &CohomologyAutomorphism) -> Result<TabularDga> {
    if !h.has_ring() {
        return Err(invalid("the invariant subring needs the cup product table"));
    }
    let pieces = torus_pieces(h, rho);
    let mut b = TabularBuilder::new();
    let mut index: BTreeMap<(u32, usize), usize> = BTreeMap::new();
    for r in 1..=h.max_degree() {
        for i in 0..pieces.kernel[r as usize].dim() {
            let idx = b.basis(&format!("h{r}_{}", i + 1), r)?;
            index.insert((r, i), idx);
        }
    }
    for p in 1..=h.max_degree() {
        for q in p..=h.max_degree() - p {
            let (kp, kq) = (&pieces.kernel[p as usize], &pieces.kernel[q as usize]);
            for (i, x) in kp.basis().iter().enumerate() {
                for (j, y) in kq.basis().iter().enumerate() {
                    if p == q && j < i {
                        continue;
                    }
                    let v = h.cup(p, x, q, y).expect("bound");
                    let coords = pieces.kernel[(p + q) as usize]
                        .coordinates(&v)
                        .expect("ambient")
                        .ok_or_else(|| invalid("ρ does not preserve products"))?;
                    let value: Vec<(usize, Rational)> = coords
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(t, c)| (index[&(p + q, t)], c))
                        .collect();
                    if !value.is_empty() {
                        b.product_indexed(index[&(p, i)], index[&(q, j)], value)?;
                    }
                }
            }
        }
    }
    Ok(b.build()?)
}

/// A model of the mapping torus of a finite-order `ρ` acting on a formal
/// space, valid through degree `bound`: `Λ(ν) ⊗ M` where `M` is the
/// minimal model of the invariant subring built through `bound`. The Betti
/// numbers of the result are checked against [`mapping_torus_cohomology`]
/// through `bound`.
pub fn mapping_torus_model(
    h: &CohomologySummary,
    rho: &CohomologyAutomorphism,
    bound: u32,
) -> Result<MappingTorusModel> {
    let order = rho
        .order(24)
        .ok_or_else(|| invalid("only automorphisms of finite order are supported"))?;
    if !rho.preserves_cup(h) {
        return Err(invalid("ρ does not preserve cup products"));
    }
    let cohomology = mapping_torus_cohomology(h, rho);
    let ring = invariant_subring(h, rho)?;
    let invariant_model = sullivan::minimal_model(&ring, bound.max(2))
        .map_err(|e| invalid(format!("invariant subring: {e}")))?;
    let inner = invariant_model.dga();
    let gens = std::iter::once(("nu".to_string(), 1)).chain(
        inner
            .algebra()
            .generators()
            .iter()
            .map(|g| (g.name().to_string(), g.degree())),
    );
    let alg = Algebra::new(gens)?;
    let shift: Vec<Element> = (0..inner.algebra().num_generators())
        .map(|i| Element::generator(&alg, i + 1))
        .collect();
    let images: Vec<Element> = std::iter::once(Element::zero(&alg))
        .chain(
            inner
                .images()
                .iter()
                .map(|e| e.substitute(&alg, &shift).expect("same algebra")),
        )
        .collect();
    let dga = Dga::new(&alg, images)?;
    let got = crate::cohomology::betti_numbers(&dga, bound);
    let want: Vec<usize> = (0..=bound).map(|r| cohomology.betti(r)).collect();
    if got != want {
        return Err(invalid(format!(
            "the model has Betti numbers {got:?} through degree {bound}, expected {want:?}"
        )));
    }
    Ok(MappingTorusModel {
        dga,
        invariant_subring: ring,
        invariant_model,
        cohomology,
        order,
    })
}

impl MappingTorusModel {
    pub fn as_model(&self) -> Model {
        Model::Free(self.dga.clone())
    }
}
