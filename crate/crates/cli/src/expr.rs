//! The expression language used for differentials, Euler classes and class
//! arguments.
//!
//! ```text
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*'? factor)*
//! factor := rational | ident ('^' natural)? | '(' expr ')' ('^' natural)?
//! ```
//!
//! Identifiers may contain `.` after the first character, so tabular labels
//! such as `h.y` parse as single names.

use std::collections::BTreeMap;
use std::sync::Arc;

use cdga::gca::{Algebra, Element};
use cdga::{Cochain, CochainAlgebra, Rational, TabularDga};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("column {column}: unknown identifier `{name}`")]
    UnknownIdentifier { name: String, column: usize },
    #[error("column {column}: {message}")]
    Eval { column: usize, message: String },
}

impl ExprError {
    pub fn column(&self) -> usize {
        match self {
            ExprError::Syntax { column, .. }
            | ExprError::UnknownIdentifier { column, .. }
            | ExprError::Eval { column, .. } => *column,
        }
    }
}

pub type Result<T> = std::result::Result<T, ExprError>;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Number(Rational),
    Ident(String),
    Pow(Box<Expr>, u32),
    Product(Vec<Expr>),
    Sum(Vec<(bool, Expr)>),
}

/// A parsed expression with its 1-based column span in the source.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub node: Node,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    /// Decimal digits, kept as text so long literals survive.
    Int(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col, i));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(chars[start..i].iter().collect()), col, i));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ExprError::Syntax {
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, col, col));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.len + 1)
    }

    fn last_end(&self) -> usize {
        self.pos.checked_sub(1).map(|p| self.toks[p].2).unwrap_or(0)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(ExprError::Syntax {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let start = self.column();
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            terms.push((negative, self.term()?));
            negative = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.pos += 1;
        }
        Ok(Expr {
            node: Node::Sum(terms),
            start,
            end: self.last_end(),
        })
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_) | Tok::Int(_) | Tok::LParen))
    }

    fn term(&mut self) -> Result<Expr> {
        let start = self.column();
        if !self.starts_factor() {
            return self.error("expected a number, identifier or `(`");
        }
        let mut factors = vec![self.factor()?];
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
                if !self.starts_factor() {
                    return self.error("expected a factor after `*`");
                }
            } else if !self.starts_factor() {
                break;
            }
            factors.push(self.factor()?);
        }
        let end = self.last_end();
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            Expr {
                node: Node::Product(factors),
                start,
                end,
            }
        })
    }

    fn natural(&mut self) -> Result<u32> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                let v = n.parse::<u32>().or_else(|_| self.error("exponent is too large"))?;
                self.pos += 1;
                Ok(v)
            }
            _ => self.error("expected a natural number"),
        }
    }

    fn power(&mut self, base: Expr) -> Result<Expr> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.natural()?;
        let start = base.start;
        Ok(Expr {
            node: Node::Pow(Box::new(base), e),
            start,
            end: self.last_end(),
        })
    }

    fn factor(&mut self) -> Result<Expr> {
        let start = self.column();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut text = n;
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if d.trim_start_matches('0').is_empty() => {
                            return self.error("zero denominator");
                        }
                        Some(Tok::Int(d)) => {
                            self.pos += 1;
                            text = format!("{text}/{d}");
                        }
                        _ => return self.error("expected a denominator"),
                    }
                }
                let value: Rational = text.parse().or_else(|_| self.error("malformed number"))?;
                let base = Expr {
                    node: Node::Number(value),
                    start,
                    end: self.last_end(),
                };
                self.power(base)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let base = Expr {
                    node: Node::Ident(name),
                    start,
                    end: self.last_end(),
                };
                self.power(base)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let mut inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                inner.start = start;
                inner.end = self.last_end();
                self.power(inner)
            }
            _ => self.error("expected a number, identifier or `(`"),
        }
    }
}

/// Parses an expression.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: src.chars().count(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Top-level summands with their signs.
    pub fn terms(&self) -> Vec<(bool, &Expr)> {
        match &self.node {
            Node::Sum(t) => t.iter().map(|(n, e)| (*n, e)).collect(),
            _ => vec![(false, self)],
        }
    }

    /// The source text of this node.
    pub fn text<'a>(&self, src: &'a str) -> &'a str {
        let start = src.char_indices().nth(self.start - 1).map(|x| x.0).unwrap_or(src.len());
        let end = src.char_indices().nth(self.end).map(|x| x.0).unwrap_or(src.len());
        &src[start..end]
    }

    pub fn eval<S: Scope>(&self, scope: &S) -> Result<S::Value> {
        match &self.node {
            Node::Number(c) => Ok(scope.number(c)),
            Node::Ident(name) => scope.ident(name).ok_or_else(|| ExprError::UnknownIdentifier {
                name: name.clone(),
                column: self.start,
            }),
            Node::Pow(base, e) => {
                let b = base.eval(scope)?;
                let mut acc = scope.number(&Rational::one());
                for _ in 0..*e {
                    acc = scope.mul(&acc, &b).map_err(|message| ExprError::Eval {
                        column: self.start,
                        message,
                    })?;
                }
                Ok(acc)
            }
            Node::Product(factors) => {
                let mut acc = scope.number(&Rational::one());
                for f in factors {
                    let v = f.eval(scope)?;
                    acc = scope.mul(&acc, &v).map_err(|message| ExprError::Eval {
                        column: f.start,
                        message,
                    })?;
                }
                Ok(acc)
            }
            Node::Sum(terms) => {
                let mut acc = scope.number(&Rational::zero());
                for (negative, t) in terms {
                    let v = t.eval(scope)?;
                    let v = if *negative { scope.neg(&v) } else { v };
                    acc = scope.add(&acc, &v);
                }
                Ok(acc)
            }
        }
    }
}

/// Resolves identifiers and performs arithmetic for [`Expr::eval`].
pub trait Scope {
    type Value;
    fn number(&self, c: &Rational) -> Self::Value;
    fn ident(&self, name: &str) -> Option<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> std::result::Result<Self::Value, String>;
}

/// Generators of a free algebra plus scalar parameters.
pub struct FreeScope<'a> {
    pub algebra: &'a Arc<Algebra>,
    pub parameters: &'a BTreeMap<String, Rational>,
}

impl Scope for FreeScope<'_> {
    type Value = Element;

    fn number(&self, c: &Rational) -> Element {
        Element::scalar(self.algebra, c.clone())
    }

    fn ident(&self, name: &str) -> Option<Element> {
        if let Some(i) = self.algebra.generator_index(name) {
            return Some(Element::generator(self.algebra, i));
        }
        self.parameters.get(name).map(|c| self.number(c))
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        a + b
    }

    fn neg(&self, a: &Element) -> Element {
        a.scale(&-Rational::one())
    }

    fn mul(&self, a: &Element, b: &Element) -> std::result::Result<Element, String> {
        a.try_mul(b).map_err(|e| e.to_string())
    }
}

/// A sparse combination of basis elements of a tabular algebra, possibly
/// of mixed degree.
pub type TabValue = BTreeMap<usize, Rational>;

/// Basis labels of a tabular algebra. With `table` set, products use its
/// multiplication; without it only scalar multiples are allowed.
pub struct TabularScope<'a> {
    pub labels: &'a BTreeMap<String, usize>,
    pub unit: usize,
    pub table: Option<&'a TabularDga>,
    pub parameters: &'a BTreeMap<String, Rational>,
}

fn scalar_part(v: &TabValue, unit: usize) -> Option<Rational> {
    match v.len() {
        0 => Some(Rational::zero()),
        1 => v.get(&unit).cloned(),
        _ => None,
    }
}

fn tab_scale(v: &TabValue, c: &Rational) -> TabValue {
    if c.is_zero() {
        return TabValue::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

impl Scope for TabularScope<'_> {
    type Value = TabValue;

    fn number(&self, c: &Rational) -> TabValue {
        let mut v = TabValue::new();
        if !c.is_zero() {
            v.insert(self.unit, c.clone());
        }
        v
    }

    fn ident(&self, name: &str) -> Option<TabValue> {
        if let Some(&i) = self.labels.get(name) {
            return Some(TabValue::from([(i, Rational::one())]));
        }
        self.parameters.get(name).map(|c| self.number(c))
    }

    fn add(&self, a: &TabValue, b: &TabValue) -> TabValue {
        let mut out = a.clone();
        for (i, x) in b {
            let e = out.entry(*i).or_insert_with(Rational::zero);
            *e += x;
            if e.is_zero() {
                out.remove(i);
            }
        }
        out
    }

    fn neg(&self, a: &TabValue) -> TabValue {
        tab_scale(a, &-Rational::one())
    }

    fn mul(&self, a: &TabValue, b: &TabValue) -> std::result::Result<TabValue, String> {
        if let Some(c) = scalar_part(a, self.unit) {
            return Ok(tab_scale(b, &c));
        }
        if let Some(c) = scalar_part(b, self.unit) {
            return Ok(tab_scale(a, &c));
        }
        let table = self
            .table
            .ok_or_else(|| "only linear combinations of basis labels are allowed here".to_string())?;
        let mut out = TabValue::new();
        for (i, x) in a {
            for (j, y) in b {
                let xy = x * y;
                let part: TabValue = table
                    .basis_product(*i, *j)
                    .iter()
                    .map(|(k, z)| (*k, z * &xy))
                    .collect();
                out = self.add(&out, &part);
            }
        }
        Ok(out)
    }
}

/// Evaluates `src` to a homogeneous cochain of `alg`, which is either a free
/// or a tabular model.
pub fn cochain(model: &cdga::Model, src: &str, parameters: &BTreeMap<String, Rational>) -> Result<Cochain> {
    let e = parse(src)?;
    match model {
        cdga::Model::Free(d) => {
            let scope = FreeScope {
                algebra: d.algebra(),
                parameters,
            };
            let v = e.eval(&scope)?;
            let k = v
                .homogeneous_degree()
                .map_err(|_| ExprError::Eval {
                    column: 1,
                    message: "the expression is not homogeneous".into(),
                })?
                .ok_or_else(|| ExprError::Eval {
                    column: 1,
                    message: "the expression is zero, so its degree is undetermined".into(),
                })?;
            Ok(d.cochain_in(&v, k).expect("homogeneous of degree k"))
        }
        cdga::Model::Tabular(t) => {
            let labels: BTreeMap<String, usize> =
                t.labels().iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
            let unit = t.index(cdga::dga::UNIT_LABEL).expect("unit");
            let scope = TabularScope {
                labels: &labels,
                unit,
                table: Some(t),
                parameters,
            };
            let v = e.eval(&scope)?;
            let mut degrees = v.keys().map(|&i| t.degree_of(i));
            let k = degrees.next().ok_or_else(|| ExprError::Eval {
                column: 1,
                message: "the expression is zero, so its degree is undetermined".into(),
            })?;
            if degrees.any(|d| d != k) {
                return Err(ExprError::Eval {
                    column: 1,
                    message: "the expression is not homogeneous".into(),
                });
            }
            let terms: Vec<(&str, Rational)> = v.iter().map(|(i, x)| (t.label(*i), x.clone())).collect();
            Ok(t.cochain_from_labels(k, &terms).expect("labels exist"))
        }
    }
}

/// Renders a cochain in expression syntax.
pub fn render(model: &cdga::Model, c: &Cochain) -> String {
    model.render(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cdga::q;

    fn eval(src: &str) -> Result<Element> {
        let alg = Algebra::new([("a", 2), ("x", 3), ("y", 3)]).unwrap();
        let params = BTreeMap::from([("e".to_string(), q(3))]);
        let scope = FreeScope {
            algebra: &alg,
            parameters: &params,
        };
        parse(src)?.eval(&scope)
    }

    #[test]
    fn arithmetic() {
        assert_eq!(eval("a^3").unwrap().to_string(), "a^3");
        assert_eq!(eval("2 a x - 1/2*a*x").unwrap().to_string(), "3/2*a*x");
        assert_eq!(eval("e*a").unwrap().to_string(), "3*a");
        assert_eq!(eval("x*y + y*x").unwrap().to_string(), "0");
        assert_eq!(eval("x^2").unwrap().to_string(), "0");
        assert_eq!(eval("-(a + 1)^2").unwrap().to_string(), "-1 - 2*a - a^2");
    }

    #[test]
    fn errors_carry_columns() {
        assert_eq!(
            eval("a + b"),
            Err(ExprError::UnknownIdentifier {
                name: "b".into(),
                column: 5
            })
        );
        assert!(matches!(eval("a +"), Err(ExprError::Syntax { column: 4, .. })));
        assert!(matches!(eval("a $ x"), Err(ExprError::Syntax { column: 3, .. })));
        assert!(matches!(eval("1/0"), Err(ExprError::Syntax { .. })));
        assert!(matches!(eval("(a"), Err(ExprError::Syntax { column: 3, .. })));
    }

    #[test]
    fn term_text() {
        let src = "a^2 - 3*x*y + b";
        let e = parse(src).unwrap();
        let texts: Vec<&str> = e.terms().iter().map(|(_, t)| t.text(src)).collect();
        assert_eq!(texts, ["a^2", "3*x*y", "b"]);
    }
}
