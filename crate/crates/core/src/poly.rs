//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A `Polynomial` over `n` coordinates is an element of the symmetric algebra
//! of the coordinate functionals. Terms are kept in a `BTreeMap` so iteration
//! order (and hence every serialized report) is deterministic. Zero
//! coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::rational::{self, Rational, RationalText};

/// Exponent vector; `Monomial(vec![2, 0, 1])` is `x1^2 x3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The coordinate function `x_{i+1}` (0-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Rational::one());
        p
    }

    /// The linear function `sum_i coeffs[i] x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            check_dim(nvars, m.0.len())?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &Polynomial, c: &Rational) {
        debug_assert_eq!(self.nvars, other.nvars);
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[i] -= 1;
            out.add_term(dm, c * rational::int(e as i64));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        check_dim(self.nvars, point.len())?;
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes `x_i := value`; the variable count is unchanged.
    pub fn substitute(&self, i: usize, value: &Rational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut nm = m.clone();
            nm.0[i] = 0;
            out.add_term(nm, c * num_traits::pow(value.clone(), e as usize));
        }
        out
    }

    /// Replaces each variable `x_i` by `images[i]`; the result lives over
    /// the variables of the images.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Self> {
        check_dim(self.nvars, images.len())?;
        let target = images.first().map_or(0, |p| p.nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(Error::DimensionMismatch {
                expected: target,
                got: bad.nvars,
            });
        }
        let mut out = Self::zero(target);
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(target), p.clone()])
            .collect();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Re-indexes into a larger variable set: variable `i` becomes `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Result<Self> {
        check_dim(self.nvars, map.len())?;
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    if map[i] >= nvars {
                        return Err(Error::DimensionMismatch {
                            expected: nvars,
                            got: map[i] + 1,
                        });
                    }
                    e[map[i]] += k;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> FloatPoly {
        FloatPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.0.clone(), rational::to_f64(c)))
                .collect(),
        }
    }

    pub fn to_wire(&self) -> PolyWire {
        PolyWire(
            self.terms
                .iter()
                .map(|(m, c)| (RationalText::Text(c.to_string()), m.0.clone()))
                .collect(),
        )
    }

    pub fn from_wire(nvars: usize, wire: &PolyWire) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (c, e) in &wire.0 {
            check_dim(nvars, e.len())?;
            p.add_term(Monomial(e.clone()), c.clone().into_rational()?);
        }
        Ok(p)
    }

    /// Renders with the given variable names (`x1..xn` when `None`).
    pub fn display_with(&self, names: Option<&[String]>) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let name = |i: usize| -> String {
            names
                .and_then(|n| n.get(i).cloned())
                .unwrap_or_else(|| format!("x{}", i + 1))
        };
        let mut out = String::new();
        // highest degree first reads more naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(b.0.cmp(a.0)));
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let negative = c < &Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if k == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        name(i)
                    } else {
                        format!("{}^{}", name(i), e)
                    }
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(None))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Serialized form: list of `[coefficient "p/q", [exponents]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyWire(pub Vec<(RationalText, Vec<u32>)>);

/// Up to `terms` monomials of total degree `<= max_degree` with coefficients
/// `p/q`, `|p| <= 5`, `1 <= q <= 4`.
pub fn random_polynomial(
    nvars: usize,
    max_degree: u32,
    terms: usize,
    rng: &mut impl rand::Rng,
) -> Polynomial {
    let mut out = Polynomial::zero(nvars);
    for _ in 0..terms {
        let degree = rng.random_range(0..=max_degree);
        let mut exps = vec![0u32; nvars];
        if nvars > 0 {
            for _ in 0..degree {
                exps[rng.random_range(0..nvars)] += 1;
            }
        }
        let c = rational::frac(rng.random_range(-5..=5), rng.random_range(1..=4));
        out.add_term(Monomial(exps), c);
    }
    out
}

/// Double-precision copy of a polynomial for fast numerical evaluation.
#[derive(Debug, Clone)]
pub struct FloatPoly {
    nvars: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl FloatPoly {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&k, &xi)| if k == 0 { acc } else { acc * xi.powi(k as i32) })
            })
            .sum()
    }
}

/// Parses expressions such as `"3/2*x1^2*x3 - (x2 + 1)*x1"`.
///
/// Variables are `x1..xn` or any of the supplied `names`.
pub fn parse_polynomial(text: &str, nvars: usize, names: &[String]) -> Result<Polynomial> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        nvars,
        names,
    };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!(
            "unexpected trailing input in {text:?}"
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    nvars: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = if self.eat('-') {
            -&self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Sym('('))) {
                // implicit product: "2x1", "x1(x2+1)"
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            let Some(Tok::Num(n)) = self.peek().cloned() else {
                return Err(Error::Parse("exponent must be a non-negative integer".into()));
            };
            self.pos += 1;
            let e: u32 = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {n}")))?;
            let mut out = Polynomial::one(self.nvars);
            for _ in 0..e {
                out = &out * &base;
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut r = rational::parse(&n)?;
                // a slash directly between two integers is part of the literal
                if self.peek() == Some(&Tok::Sym('/')) {
                    if let Some(Tok::Num(d)) = self.tokens.get(self.pos + 1).cloned() {
                        self.pos += 2;
                        r = rational::parse(&format!("{n}/{d}"))?;
                    }
                }
                Ok(Polynomial::constant(self.nvars, r))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.variable(&name)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(inner)
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(-&self.power()?)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn variable(&self, name: &str) -> Result<Polynomial> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            if i < self.nvars {
                return Ok(Polynomial::var(self.nvars, i));
            }
        }
        if let Some(idx) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
            if idx >= 1 && idx <= self.nvars {
                return Ok(Polynomial::var(self.nvars, idx - 1));
            }
        }
        Err(Error::Parse(format!("unknown variable {name:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(3, i)
    }

    #[test]
    fn product_and_derivative() {
        let p = &x(0) * &x(1);
        assert_eq!(p.derivative(0), x(1));
        assert_eq!(p.derivative(2), Polynomial::zero(3));
        let q = &(&x(0) * &x(0)) * &x(2);
        assert_eq!(q.derivative(0), (&x(0) * &x(2)).scale(&int(2)));
    }

    #[test]
    fn no_zero_coefficients_are_stored() {
        let p = &x(0) - &x(0);
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn evaluation_and_substitution() {
        let p = parse_polynomial("x1*x2 + 1/2*x3^2", 3, &[]).unwrap();
        assert_eq!(p.eval(&[int(3), int(5), int(2)]).unwrap(), int(17));
        let s = p.substitute(2, &int(2));
        assert_eq!(s, parse_polynomial("x1*x2 + 2", 3, &[]).unwrap());
        assert!(p.eval(&[int(1)]).is_err());
    }

    #[test]
    fn parser_handles_names_and_parentheses() {
        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let p = parse_polynomial("-(a - 2/3)*b", 2, &names).unwrap();
        let expected = &(&Polynomial::var(2, 0) - &Polynomial::constant(2, frac(2, 3)))
            * &Polynomial::var(2, 1);
        assert_eq!(p, -&expected);
        assert!(parse_polynomial("x4", 3, &[]).is_err());
        assert!(parse_polynomial("x1 +", 3, &[]).is_err());
    }

    #[test]
    fn compose_pulls_back() {
        // (x1 + x2)^2 composed with x1 -> y1*y2, x2 -> 1
        let p = parse_polynomial("(x1 + x2)^2", 2, &[]).unwrap();
        let images = vec![
            parse_polynomial("x1*x2", 2, &[]).unwrap(),
            Polynomial::one(2),
        ];
        let q = p.compose(&images).unwrap();
        assert_eq!(q, parse_polynomial("x1^2*x2^2 + 2*x1*x2 + 1", 2, &[]).unwrap());
    }

    #[test]
    fn display_is_readable() {
        let p = parse_polynomial("x1*x2 - 3/2 + x3^2", 3, &[]).unwrap();
        assert_eq!(p.to_string(), "x1*x2 + x3^2 - 3/2");
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(((-5i64..=5), (1i64..=4), prop::collection::vec(0u32..3, 3)), 0..6)
            .prop_map(|terms| {
                Polynomial::from_terms(
                    3,
                    terms.into_iter().map(|(p, q, e)| (Monomial(e), frac(p, q))),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn wire_round_trip(p in small_poly()) {
            let back = Polynomial::from_wire(3, &p.to_wire()).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn parse_display_round_trip(p in small_poly()) {
            let back = parse_polynomial(&p.to_string(), 3, &[]).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn derivative_is_a_derivation(p in small_poly(), q in small_poly()) {
            let lhs = (&p * &q).derivative(1);
            let rhs = &(&p.derivative(1) * &q) + &(&p * &q.derivative(1));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
