//! Test-side oracles that share no code with the engine's linear algebra.

#![allow(dead_code)]

use cdga::{q, Rational, TabularBuilder, TabularDga};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Rank by plain dense Gaussian elimination.
pub fn dense_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] / &pivot;
                for c in col..ncols {
                    let v = &m[rank][c] * &f;
                    m[r][c] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Exact square root of a non-negative rational, if it is a square.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Rational::new(root(x.numer())?, root(x.denom())?))
}

/// Rational roots of `a x² + b x + c`, or `None` when the polynomial is zero.
pub fn rational_roots(a: &Rational, b: &Rational, c: &Rational) -> Option<Vec<Rational>> {
    if a.is_zero() && b.is_zero() {
        return if c.is_zero() { None } else { Some(vec![]) };
    }
    if a.is_zero() {
        return Some(vec![-c / b]);
    }
    let disc = b * b - q(4) * a * c;
    let Some(s) = rational_sqrt(&disc) else {
        return Some(vec![]);
    };
    let two_a = q(2) * a;
    let mut out = vec![(-b + &s) / &two_a, (-b - &s) / &two_a];
    out.dedup();
    Some(out)
}

/// Whether a vector of binary quadratic forms `A x² + B xy + C y²` has a
/// common nontrivial rational zero.
pub fn common_isotropic(forms: &[[Rational; 3]]) -> bool {
    if forms.iter().all(|f| f[0].is_zero()) {
        return true;
    }
    let mut candidates: Option<Vec<Rational>> = None;
    for [a, b, c] in forms {
        let Some(roots) = rational_roots(a, b, c) else {
            continue;
        };
        candidates = Some(match candidates {
            None => roots,
            Some(prev) => prev.into_iter().filter(|r| roots.contains(r)).collect(),
        });
    }
    candidates.is_none_or(|c| !c.is_empty())
}

/// A factor `H*(S^d)` (top power 1) or `H*(CP^m)` (`d = 2`, top power `m`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedFactor {
    pub degree: u32,
    pub top: u32,
}

impl TruncatedFactor {
    pub fn sphere(d: u32) -> Self {
        TruncatedFactor { degree: d, top: 1 }
    }

    pub fn cp(m: u32) -> Self {
        TruncatedFactor { degree: 2, top: m }
    }

    pub fn dimension(&self) -> u32 {
        self.degree * self.top
    }
}

/// The tensor product of truncated polynomial rings, with its own
/// multiplication rule.
#[derive(Debug, Clone)]
pub struct TensorRing {
    pub factors: Vec<TruncatedFactor>,
    /// Exponent tuples; index 0 is the unit.
    pub basis: Vec<Vec<u32>>,
}

impl TensorRing {
    pub fn new(factors: Vec<TruncatedFactor>) -> Self {
        let mut basis = vec![vec![]];
        for f in &factors {
            basis = basis
                .into_iter()
                .flat_map(|b: Vec<u32>| {
                    (0..=f.top).map(move |p| {
                        let mut b = b.clone();
                        b.push(p);
                        b
                    })
                })
                .collect();
        }
        TensorRing { factors, basis }
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i]
            .iter()
            .zip(&self.factors)
            .map(|(p, f)| p * f.degree)
            .sum()
    }

    pub fn dimension(&self) -> u32 {
        self.factors.iter().map(TruncatedFactor::dimension).sum()
    }

    pub fn label(&self, i: usize) -> String {
        let parts: Vec<String> = self.basis[i].iter().map(|p| p.to_string()).collect();
        format!("t{}", parts.join("_"))
    }

    /// `b_i · b_j` as `(sign, index)`, or `None` when it vanishes.
    pub fn product(&self, i: usize, j: usize) -> Option<(i32, usize)> {
        let (x, y) = (&self.basis[i], &self.basis[j]);
        let sum: Vec<u32> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        if sum.iter().zip(&self.factors).any(|(s, f)| *s > f.top) {
            return None;
        }
        let deg = |p: u32, f: &TruncatedFactor| p * f.degree;
        let mut swaps = 0;
        for (jf, qj) in y.iter().enumerate() {
            for (pi, fi) in x.iter().zip(&self.factors).skip(jf + 1) {
                swaps += deg(*pi, fi) * deg(*qj, &self.factors[jf]);
            }
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((sign, self.basis.iter().position(|b| *b == sum)?))
    }

    pub fn in_degree(&self, k: u32) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.degree(i) == k).collect()
    }

    /// The ring as an engine table with zero differential.
    pub fn to_tabular(&self) -> TabularDga {
        let mut b = TabularBuilder::new();
        for i in 1..self.basis.len() {
            b.basis(&self.label(i), self.degree(i)).expect("fresh label");
        }
        for i in 1..self.basis.len() {
            for j in i..self.basis.len() {
                if let Some((s, k)) = self.product(i, j) {
                    b.product_indexed(i, j, vec![(k, q(s as i64))])
                        .expect("each pair once");
                }
            }
        }
        b.build().expect("tensor products of truncated rings are valid")
    }

    /// Matrix of `x ↦ e·x` from degree `r` to `r + 2`, as rows indexed by
    /// the target basis.
    pub fn euler_matrix(&self, e: &[(usize, Rational)], r: u32) -> Vec<Vec<Rational>> {
        let src = self.in_degree(r);
        let dst = self.in_degree(r + 2);
        let mut m = vec![vec![Rational::zero(); src.len()]; dst.len()];
        for (c, &x) in src.iter().enumerate() {
            for (ei, coef) in e {
                if let Some((s, k)) = self.product(*ei, x) {
                    let row = dst.iter().position(|&t| t == k).expect("degree r + 2");
                    m[row][c] += coef * q(s as i64);
                }
            }
        }
        m
    }

    /// Betti numbers of the circle bundle with Euler class `e`, through
    /// degree `cap`, from the Gysin sequence:
    /// `b_r = dim coker(e: H^{r-2} → H^r) + dim ker(e: H^{r-1} → H^{r+1})`.
    pub fn gysin_bettis(&self, e: &[(usize, Rational)], cap: u32) -> Vec<usize> {
        let b = |r: i64| if r < 0 { 0 } else { self.in_degree(r as u32).len() };
        let rank = |r: i64| {
            if r < 0 {
                0
            } else {
                dense_rank(&self.euler_matrix(e, r as u32))
            }
        };
        (0..=cap as i64)
            .map(|r| (b(r) - rank(r - 2)) + (b(r - 1) - rank(r - 1)))
            .collect()
    }
}
