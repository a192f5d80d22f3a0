use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::exactla::{dense_from_sparse, sparse_axpy_into as sparse_axpy, sparse_normalize, Rational, RationalMatrix, SparseRow};
use crate::gca::render_coefficient_term;

use super::{cochain_sparse, Cochain, CochainAlgebra, DgaError, Result};

/// Label of the unit, always basis element 0.
pub const UNIT_LABEL: &str = "1";

fn valid_label(label: &str) -> bool {
    let mut chars = label.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

/// Collects the basis, multiplication table and differential of a
/// [`TabularDga`]. Products are given for one order of each pair; the other
/// order follows from graded commutativity, and products with the unit are
/// implicit. Missing products and differentials are zero.
#[derive(Debug, Clone)]
pub struct TabularBuilder {
    labels: Vec<String>,
    degrees: Vec<u32>,
    by_label: HashMap<String, usize>,
    products: BTreeMap<(usize, usize), SparseRow>,
    differential: BTreeMap<usize, SparseRow>,
}

impl Default for TabularBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl TabularBuilder {
    pub fn new() -> Self {
        let mut by_label = HashMap::new();
        by_label.insert(UNIT_LABEL.to_string(), 0);
        TabularBuilder {
            labels: vec![UNIT_LABEL.to_string()],
            degrees: vec![0],
            by_label,
            products: BTreeMap::new(),
            differential: BTreeMap::new(),
        }
    }

    /// Adds a basis element and returns its index.
    pub fn basis(&mut self, label: &str, degree: u32) -> Result<usize> {
        if !valid_label(label) {
            return Err(DgaError::InvalidTable(format!("invalid label `{label}`")));
        }
        if self.by_label.contains_key(label) {
            return Err(DgaError::InvalidTable(format!("duplicate label `{label}`")));
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.degrees.push(degree);
        self.by_label.insert(label.to_string(), i);
        Ok(i)
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.by_label
            .get(label)
            .copied()
            .ok_or_else(|| DgaError::UnknownLabel(label.to_string()))
    }

    pub fn degree(&self, index: usize) -> u32 {
        self.degrees[index]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn combination(&self, terms: &[(&str, Rational)]) -> Result<SparseRow> {
        let mut out = SparseRow::new();
        for (label, c) in terms {
            let i = self.index(label)?;
            sparse_axpy(&mut out, c, &vec![(i, Rational::one())]);
        }
        Ok(out)
    }

    /// Sets `lhs · rhs` to a linear combination of basis labels.
    pub fn product(&mut self, lhs: &str, rhs: &str, value: &[(&str, Rational)]) -> Result<()> {
        let (i, j) = (self.index(lhs)?, self.index(rhs)?);
        let v = self.combination(value)?;
        self.product_indexed(i, j, v)
    }

    pub fn product_indexed(&mut self, i: usize, j: usize, value: SparseRow) -> Result<()> {
        let value = sparse_normalize(value);
        if self.products.contains_key(&(i, j)) {
            return Err(DgaError::InvalidTable(format!(
                "product {}·{} given twice",
                self.labels[i], self.labels[j]
            )));
        }
        self.products.insert((i, j), value);
        Ok(())
    }

    /// Sets `d(label)` to a linear combination of basis labels.
    pub fn differential(&mut self, label: &str, value: &[(&str, Rational)]) -> Result<()> {
        let i = self.index(label)?;
        let v = self.combination(value)?;
        self.differential_indexed(i, v)
    }

    pub fn differential_indexed(&mut self, i: usize, value: SparseRow) -> Result<()> {
        let value = sparse_normalize(value);
        if self.differential.insert(i, value).is_some() {
            return Err(DgaError::InvalidTable(format!(
                "differential of {} given twice",
                self.labels[i]
            )));
        }
        Ok(())
    }

    fn check_degree(&self, what: &str, v: &SparseRow, degree: u32) -> Result<()> {
        for (k, _) in v {
            if self.degrees[*k] != degree {
                return Err(DgaError::InvalidTable(format!(
                    "{what} has a term {} of degree {}, expected {degree}",
                    self.labels[*k], self.degrees[*k]
                )));
            }
        }
        Ok(())
    }

    /// Completes the table and checks associativity, graded commutativity,
    /// `d² = 0` and the Leibniz rule.
    pub fn build(self) -> Result<TabularDga> {
        let n = self.labels.len();
        let mut table: HashMap<(usize, usize), SparseRow> = HashMap::new();
        for i in 0..n {
            table.insert((0, i), vec![(i, Rational::one())]);
            table.insert((i, 0), vec![(i, Rational::one())]);
        }
        for (&(i, j), v) in &self.products {
            let v: SparseRow = v.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
            let what = format!("{}·{}", self.labels[i], self.labels[j]);
            self.check_degree(&what, &v, self.degrees[i] + self.degrees[j])?;
            let sign = if self.degrees[i] % 2 == 1 && self.degrees[j] % 2 == 1 {
                -Rational::one()
            } else {
                Rational::one()
            };
            let swapped: SparseRow = v.iter().map(|(k, c)| (*k, c * &sign)).collect();
            for (key, val) in [((i, j), v.clone()), ((j, i), swapped)] {
                match table.get(&key) {
                    Some(existing) if *existing != val => {
                        return Err(DgaError::InvalidTable(format!(
                            "{what} conflicts with graded commutativity or the unit"
                        )))
                    }
                    _ => {
                        table.insert(key, val);
                    }
                }
            }
        }
        let mut diff = vec![SparseRow::new(); n];
        for (&i, v) in &self.differential {
            let v: SparseRow = v.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
            self.check_degree(&format!("d({})", self.labels[i]), &v, self.degrees[i] + 1)?;
            diff[i] = v;
        }
        let mut by_degree: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        let mut local = vec![0; n];
        for (i, &d) in self.degrees.iter().enumerate() {
            let slot = by_degree.entry(d).or_default();
            local[i] = slot.len();
            slot.push(i);
        }
        if by_degree[&0].len() != 1 {
            return Err(DgaError::InvalidTable(
                "degree 0 must be spanned by the unit".into(),
            ));
        }
        let dga = TabularDga {
            inner: Arc::new(TabularInner {
                labels: self.labels,
                degrees: self.degrees,
                by_label: self.by_label,
                table,
                diff,
                by_degree,
                local,
            }),
            matrices: Arc::new(Mutex::new(HashMap::new())),
        };
        dga.check_axioms()?;
        Ok(dga)
    }
}

#[derive(Debug)]
struct TabularInner {
    labels: Vec<String>,
    degrees: Vec<u32>,
    by_label: HashMap<String, usize>,
    table: HashMap<(usize, usize), SparseRow>,
    diff: Vec<SparseRow>,
    by_degree: BTreeMap<u32, Vec<usize>>,
    local: Vec<usize>,
}

/// A finite-dimensional CDGA given by a basis, a multiplication table and a
/// differential.
#[derive(Clone)]
pub struct TabularDga {
    inner: Arc<TabularInner>,
    matrices: Arc<Mutex<HashMap<u32, Arc<RationalMatrix>>>>,
}

impl fmt::Debug for TabularDga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TabularDga")
            .field("labels", &self.inner.labels)
            .field("degrees", &self.inner.degrees)
            .finish()
    }
}

impl TabularDga {
    pub fn len(&self) -> usize {
        self.inner.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.inner.labels[index]
    }

    pub fn degree_of(&self, index: usize) -> u32 {
        self.inner.degrees[index]
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.inner
            .by_label
            .get(label)
            .copied()
            .ok_or_else(|| DgaError::UnknownLabel(label.to_string()))
    }

    /// Global indices of the basis elements of degree `k`, in basis order.
    pub fn basis_in_degree(&self, k: u32) -> &[usize] {
        self.inner.by_degree.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Product of two basis elements in global coordinates.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        self.inner.table.get(&(i, j)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Differential of a basis element in global coordinates.
    pub fn basis_differential(&self, i: usize) -> &[(usize, Rational)] {
        &self.inner.diff[i]
    }

    /// Nonzero products `(i, j, value)` with `i <= j`, in index order.
    pub fn product_entries(&self) -> Vec<(usize, usize, SparseRow)> {
        let mut out: Vec<_> = self
            .inner
            .table
            .iter()
            .filter(|((i, j), v)| *i != 0 && i <= j && !v.is_empty())
            .map(|(&(i, j), v)| (i, j, v.clone()))
            .collect();
        out.sort_by_key(|(i, j, _)| (*i, *j));
        out
    }

    fn mul_global(&self, x: &SparseRow, y: &SparseRow) -> SparseRow {
        let mut out = SparseRow::new();
        for (i, a) in x {
            for (j, b) in y {
                let v = self.basis_product(*i, *j);
                if !v.is_empty() {
                    sparse_axpy(&mut out, &(a * b), &v.to_vec());
                }
            }
        }
        out
    }

    fn d_global(&self, x: &SparseRow) -> SparseRow {
        let mut out = SparseRow::new();
        for (i, a) in x {
            let v = &self.inner.diff[*i];
            if !v.is_empty() {
                sparse_axpy(&mut out, a, v);
            }
        }
        out
    }

    fn unit_vec(i: usize) -> SparseRow {
        vec![(i, Rational::one())]
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        let top = self.top_degree().unwrap_or(0);
        for i in 0..n {
            let di = Self::unit_vec(i);
            if !self.d_global(&self.d_global(&di)).is_empty() {
                return Err(DgaError::InvalidTable(format!(
                    "d(d({})) is nonzero",
                    self.label(i)
                )));
            }
        }
        for i in 1..n {
            for j in 1..n {
                let (ei, ej) = (Self::unit_vec(i), Self::unit_vec(j));
                if self.degree_of(i) + self.degree_of(j) <= top + 1 {
                    let lhs = self.d_global(&self.mul_global(&ei, &ej));
                    let mut rhs = self.mul_global(&self.d_global(&ei), &ej);
                    let sign = if self.degree_of(i) % 2 == 1 {
                        -Rational::one()
                    } else {
                        Rational::one()
                    };
                    sparse_axpy(&mut rhs, &sign, &self.mul_global(&ei, &self.d_global(&ej)));
                    if lhs != rhs {
                        return Err(DgaError::InvalidTable(format!(
                            "Leibniz rule fails on {}·{}",
                            self.label(i),
                            self.label(j)
                        )));
                    }
                }
                let ij = self.mul_global(&ei, &ej);
                for k in 1..n {
                    if self.degree_of(i) + self.degree_of(j) + self.degree_of(k) > top {
                        continue;
                    }
                    let ek = Self::unit_vec(k);
                    let lhs = self.mul_global(&ij, &ek);
                    let rhs = self.mul_global(&ei, &self.mul_global(&ej, &ek));
                    if lhs != rhs {
                        return Err(DgaError::InvalidTable(format!(
                            "product is not associative on ({}·{})·{}",
                            self.label(i),
                            self.label(j),
                            self.label(k)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn to_global(&self, c: &Cochain) -> SparseRow {
        let basis = self.basis_in_degree(c.degree());
        cochain_sparse(c)
            .into_iter()
            .map(|(i, v)| (basis[i], v))
            .collect()
    }

    fn cochain_from_global(&self, degree: u32, v: &SparseRow) -> Cochain {
        let local: SparseRow = v
            .iter()
            .map(|(i, c)| {
                debug_assert_eq!(self.degree_of(*i), degree);
                (self.inner.local[*i], c.clone())
            })
            .collect();
        Cochain::new(degree, dense_from_sparse(self.dim(degree), &local))
    }

    /// Cochain of a single basis element.
    pub fn basis_cochain(&self, index: usize) -> Cochain {
        self.cochain_from_global(self.degree_of(index), &Self::unit_vec(index))
    }

    /// Cochain of a linear combination of basis labels of degree `degree`.
    pub fn cochain_from_labels(&self, degree: u32, terms: &[(&str, Rational)]) -> Result<Cochain> {
        let mut v = SparseRow::new();
        for (label, c) in terms {
            let i = self.index(label)?;
            if self.degree_of(i) != degree {
                return Err(DgaError::InvalidTable(format!(
                    "`{label}` has degree {}, expected {degree}",
                    self.degree_of(i)
                )));
            }
            sparse_axpy(&mut v, c, &Self::unit_vec(i));
        }
        Ok(self.cochain_from_global(degree, &v))
    }

    /// `self ⊗ Λ(y)` with `|y| = 1` and `d(y) = euler`, a degree-2 cocycle.
    /// Basis elements `h ⊗ y` are labelled `h.y`, and `1 ⊗ y` is labelled
    /// `y_label`.
    pub fn circle_bundle(&self, euler: &Cochain, y_label: &str) -> Result<TabularDga> {
        if euler.degree() != 2 || euler.coords().len() != self.dim(2) {
            return Err(DgaError::InvalidTable(
                "the Euler class must be a degree-2 cochain".into(),
            ));
        }
        if !self.d_cochain(euler).is_zero() {
            return Err(DgaError::NotACocycle(self.render(euler)));
        }
        let n = self.len();
        let e = self.to_global(euler);
        let mut b = TabularBuilder::new();
        for i in 1..n {
            b.basis(self.label(i), self.degree_of(i))?;
        }
        for i in 0..n {
            let label = if i == 0 {
                y_label.to_string()
            } else {
                format!("{}.{}", self.label(i), y_label)
            };
            b.basis(&label, self.degree_of(i) + 1)?;
        }
        let shift = |v: &SparseRow| -> SparseRow { v.iter().map(|(k, c)| (k + n, c.clone())).collect() };
        for (i, j, v) in self.product_entries() {
            b.product_indexed(i, j, v)?;
        }
        // (h ⊗ 1)(h' ⊗ y) = hh' ⊗ y; the opposite order follows by commutativity.
        for i in 1..n {
            for j in 0..n {
                let v = self.basis_product(i, j);
                if !v.is_empty() {
                    b.product_indexed(i, j + n, shift(&v.to_vec()))?;
                }
            }
        }
        for i in 0..n {
            if !self.inner.diff[i].is_empty() {
                b.differential_indexed(i, self.inner.diff[i].clone())?;
            }
            // d(h ⊗ y) = dh ⊗ y + (-1)^{|h|} h·e
            let mut v = shift(&self.inner.diff[i]);
            let sign = if self.degree_of(i) % 2 == 1 { -Rational::one() } else { Rational::one() };
            sparse_axpy(&mut v, &sign, &self.mul_global(&Self::unit_vec(i), &e));
            if !v.is_empty() {
                b.differential_indexed(i + n, v)?;
            }
        }
        b.build()
    }
}

impl CochainAlgebra for TabularDga {
    fn dim(&self, k: u32) -> usize {
        self.basis_in_degree(k).len()
    }

    fn differential_matrix(&self, k: u32) -> Arc<RationalMatrix> {
        if let Some(m) = self.matrices.lock().expect("matrix cache").get(&k) {
            return m.clone();
        }
        let cols: Vec<SparseRow> = self
            .basis_in_degree(k)
            .iter()
            .map(|&i| {
                let mut col: SparseRow = self.inner.diff[i]
                    .iter()
                    .map(|(j, c)| (self.inner.local[*j], c.clone()))
                    .collect();
                col.sort_by_key(|(j, _)| *j);
                col
            })
            .collect();
        let m = Arc::new(RationalMatrix::from_sparse_columns(self.dim(k + 1), &cols));
        self.matrices.lock().expect("matrix cache").insert(k, m.clone());
        m
    }

    fn product(&self, lhs: &Cochain, rhs: &Cochain) -> Cochain {
        let v = self.mul_global(&self.to_global(lhs), &self.to_global(rhs));
        self.cochain_from_global(lhs.degree() + rhs.degree(), &v)
    }

    fn unit(&self) -> Cochain {
        Cochain::new(0, vec![Rational::one()])
    }

    fn render(&self, c: &Cochain) -> String {
        let v = self.to_global(c);
        if v.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (i, coef)) in v.iter().enumerate() {
            render_coefficient_term(coef, self.label(*i), n == 0, &mut out);
        }
        out
    }

    fn top_degree(&self) -> Option<u32> {
        self.inner.by_degree.keys().next_back().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q;

    /// H*(CP^2) with zero differential.
    fn cp2() -> TabularDga {
        let mut b = TabularBuilder::new();
        b.basis("a", 2).unwrap();
        b.basis("a2", 4).unwrap();
        b.product("a", "a", &[("a2", q(1))]).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn products_follow_table_and_unit() {
        let t = cp2();
        let a = t.basis_cochain(t.index("a").unwrap());
        assert_eq!(t.render(&t.product(&a, &a)), "a2");
        assert_eq!(t.render(&t.product(&t.unit(), &a)), "a");
        assert_eq!(t.top_degree(), Some(4));
    }

    #[test]
    fn circle_bundle_over_cp2_is_s5() {
        let t = cp2();
        let e = t.basis_cochain(t.index("a").unwrap());
        let s5 = t.circle_bundle(&e, "y").unwrap();
        assert_eq!(s5.len(), 6);
        let y = s5.basis_cochain(s5.index("y").unwrap());
        assert_eq!(s5.render(&s5.d_cochain(&y)), "a");
        let ay = s5.basis_cochain(s5.index("a.y").unwrap());
        assert_eq!(s5.render(&s5.d_cochain(&ay)), "a2");
        let a = s5.basis_cochain(s5.index("a").unwrap());
        assert_eq!(s5.render(&s5.product(&y, &a)), "a.y");
        assert_eq!(s5.render(&s5.product(&a, &y)), "a.y");
    }

    #[test]
    fn odd_squares_must_vanish_consistently() {
        let mut b = TabularBuilder::new();
        b.basis("x", 1).unwrap();
        b.basis("y", 1).unwrap();
        b.basis("xy", 2).unwrap();
        b.product("x", "y", &[("xy", q(1))]).unwrap();
        b.product("y", "x", &[("xy", q(1))]).unwrap();
        assert!(matches!(b.build(), Err(DgaError::InvalidTable(_))));
    }

    #[test]
    fn leibniz_violation_is_reported() {
        let mut b = TabularBuilder::new();
        b.basis("x", 1).unwrap();
        b.basis("a", 2).unwrap();
        b.basis("ax", 3).unwrap();
        b.basis("c", 4).unwrap();
        b.product("a", "x", &[("ax", q(1))]).unwrap();
        b.product("a", "a", &[("c", q(1))]).unwrap();
        b.differential("x", &[("a", q(1))]).unwrap();
        let err = b.build().unwrap_err();
        assert!(err.to_string().contains("Leibniz"), "{err}");
    }

    #[test]
    fn non_associative_table_is_rejected() {
        let mut b = TabularBuilder::new();
        b.basis("a", 2).unwrap();
        b.basis("b", 2).unwrap();
        b.basis("c", 4).unwrap();
        b.basis("t", 6).unwrap();
        b.product("a", "a", &[("c", q(1))]).unwrap();
        b.product("c", "b", &[("t", q(1))]).unwrap();
        assert!(matches!(b.build(), Err(DgaError::InvalidTable(_))));
    }

    #[test]
    fn degree_mismatch_is_rejected() {
        let mut b = TabularBuilder::new();
        b.basis("a", 2).unwrap();
        b.basis("x", 3).unwrap();
        b.product("a", "a", &[("x", q(1))]).unwrap();
        assert!(b.build().unwrap_err().to_string().contains("degree"));
    }
}
