use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{fmt_rational, int, parse_rational, to_f64, Rational};
use super::ExactError;

/// Polynomial in at most two variables with exact rational coefficients.
///
/// The two variable slots are called *outer* (slot 0) and *inner* (slot 1).
/// Univariate polynomials only use the outer slot. For double integrals the
/// inner variable is integrated first, with bounds that are polynomials in
/// the outer one, so `(t, s)` families put `t` in the outer slot.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct Polynomial {
    names: [String; 2],
    terms: BTreeMap<(u32, u32), Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.terms != other.terms {
            return false;
        }
        (0..2).all(|slot| !self.uses(slot) || self.names[slot] == other.names[slot])
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            names: [String::new(), String::new()],
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.insert((0, 0), c);
        p
    }

    /// The univariate polynomial `name`.
    pub fn var(name: &str) -> Self {
        let mut p = Self::zero();
        p.names[0] = name.to_string();
        p.insert((1, 0), Rational::one());
        p
    }

    /// The inner variable of a bivariate ring with variables `(outer, inner)`.
    pub fn inner_var(outer: &str, inner: &str) -> Self {
        let mut p = Self::zero();
        p.names = [outer.to_string(), inner.to_string()];
        p.insert((0, 1), Rational::one());
        p
    }

    /// The outer variable of a bivariate ring with variables `(outer, inner)`.
    pub fn outer_var(outer: &str, inner: &str) -> Self {
        let mut p = Self::var(outer);
        p.names[1] = inner.to_string();
        p
    }

    /// `c0 + c1 x + c2 x^2 + ...` in the variable `name`.
    pub fn univariate(name: &str, coeffs: &[Rational]) -> Self {
        let mut p = Self::zero();
        p.names[0] = name.to_string();
        for (i, c) in coeffs.iter().enumerate() {
            p.insert((i as u32, 0), c.clone());
        }
        p
    }

    /// `c0 + c1 x` in the variable `name`.
    pub fn affine(name: &str, c0: Rational, c1: Rational) -> Self {
        Self::univariate(name, &[c0, c1])
    }

    pub fn from_terms(
        outer: &str,
        inner: &str,
        terms: impl IntoIterator<Item = ((u32, u32), Rational)>,
    ) -> Self {
        let mut p = Self::zero();
        p.names = [outer.to_string(), inner.to_string()];
        for (e, c) in terms {
            p.insert(e, c);
        }
        p
    }

    fn insert(&mut self, e: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn uses(&self, slot: usize) -> bool {
        self.terms
            .keys()
            .any(|&(i, j)| if slot == 0 { i > 0 } else { j > 0 })
    }

    pub fn names(&self) -> (&str, &str) {
        (&self.names[0], &self.names[1])
    }

    /// Renames the variable slots. Useful when a univariate piece must join
    /// a ring with a different variable name.
    pub fn with_names(mut self, outer: &str, inner: &str) -> Self {
        self.names = [outer.to_string(), inner.to_string()];
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, outer_exp: u32, inner_exp: u32) -> Rational {
        self.terms
            .get(&(outer_exp, inner_exp))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    pub fn is_univariate(&self) -> bool {
        !self.uses(1)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn degree_outer(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn degree_inner(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    fn merged_names(&self, other: &Self) -> [String; 2] {
        let mut names = [String::new(), String::new()];
        for slot in 0..2 {
            let (a, b) = (&self.names[slot], &other.names[slot]);
            if self.uses(slot) && other.uses(slot) {
                assert_eq!(a, b, "polynomial variable mismatch in slot {slot}");
            }
            names[slot] = match (self.uses(slot), other.uses(slot)) {
                (true, _) => a.clone(),
                (false, true) => b.clone(),
                _ if !a.is_empty() => a.clone(),
                _ => b.clone(),
            };
        }
        names
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut p = Self::zero();
        p.names = self.names.clone();
        if c.is_zero() {
            return p;
        }
        for (e, v) in &self.terms {
            p.terms.insert(*e, v * c);
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(Rational::one()).with_names(&self.names[0], &self.names[1]);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Value of a univariate polynomial. Inner-slot terms are an error in the caller.
    pub fn eval(&self, x: &Rational) -> Rational {
        debug_assert!(self.is_univariate(), "eval on a bivariate polynomial");
        self.eval2(x, &Rational::zero())
    }

    pub fn eval2(&self, outer: &Rational, inner: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * num_traits::pow(outer.clone(), i as usize)
                * num_traits::pow(inner.clone(), j as usize);
        }
        acc
    }

    pub fn eval_f64(&self, outer: f64, inner: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| to_f64(c) * outer.powi(i as i32) * inner.powi(j as i32))
            .sum()
    }

    /// Partial derivative in the outer variable.
    pub fn derivative(&self) -> Self {
        let mut p = Self::zero();
        p.names = self.names.clone();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                p.insert((i - 1, j), c * int(i as i64));
            }
        }
        p
    }

    /// Partial derivative in the inner variable.
    pub fn derivative_inner(&self) -> Self {
        let mut p = Self::zero();
        p.names = self.names.clone();
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                p.insert((i, j - 1), c * int(j as i64));
            }
        }
        p
    }

    fn antiderivative_outer(&self) -> Self {
        let mut p = Self::zero();
        p.names = self.names.clone();
        for (&(i, j), c) in &self.terms {
            p.insert((i + 1, j), c / int(i as i64 + 1));
        }
        p
    }

    fn antiderivative_inner(&self) -> Self {
        let mut p = Self::zero();
        p.names = self.names.clone();
        for (&(i, j), c) in &self.terms {
            p.insert((i, j + 1), c / int(j as i64 + 1));
        }
        p
    }

    /// Exact `∫_a^b p(x) dx` for a univariate polynomial.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Rational {
        let anti = self.antiderivative_outer();
        anti.eval(b) - anti.eval(a)
    }

    /// Univariate composition `self(g(x))`.
    pub fn compose(&self, g: &Polynomial) -> Self {
        debug_assert!(self.is_univariate() && g.is_univariate());
        let mut acc = Self::zero().with_names(&g.names[0], &g.names[1]);
        // Horner in the outer variable
        for i in (0..=self.degree_outer()).rev() {
            acc = &(&acc * g) + &Self::constant(self.coefficient(i, 0));
        }
        acc.names = g.names.clone();
        acc
    }

    /// Replaces the inner variable by `g`, a polynomial in the outer variable.
    pub fn substitute_inner(&self, g: &Polynomial) -> Self {
        debug_assert!(g.is_univariate());
        let g = g.clone().with_names(&self.names[0], &self.names[1]);
        let mut acc = Self::zero().with_names(&self.names[0], &self.names[1]);
        for (&(i, j), c) in &self.terms {
            let mut term = g.pow(j);
            let mut mono = Self::zero().with_names(&self.names[0], &self.names[1]);
            mono.insert((i, 0), c.clone());
            term = &term * &mono;
            acc = &acc + &term;
        }
        acc.names[1] = self.names[1].clone();
        acc
    }

    /// `∫_{lo(x)}^{hi(x)} p(x, y) dy`, a polynomial in the outer variable.
    pub fn integrate_inner(&self, lo: &Polynomial, hi: &Polynomial) -> Self {
        let anti = self.antiderivative_inner();
        &anti.substitute_inner(hi) - &anti.substitute_inner(lo)
    }

    /// Parses the canonical text form, e.g. `"22 - 6*t^2 - 4*t^3"`.
    ///
    /// Variables are assigned to slots in order of first appearance; use
    /// [`Polynomial::parse_in`] to pin the slots.
    pub fn parse(s: &str) -> Result<Self, ExactError> {
        Self::parse_impl(s, None)
    }

    pub fn parse_in(s: &str, outer: &str, inner: &str) -> Result<Self, ExactError> {
        Self::parse_impl(s, Some([outer.to_string(), inner.to_string()]))
    }

    fn parse_impl(s: &str, pinned: Option<[String; 2]>) -> Result<Self, ExactError> {
        let err = |m: &str| ExactError::Parse(format!("{m} in polynomial {s:?}"));
        let mut names: Vec<String> = match &pinned {
            Some(n) => n.iter().filter(|x| !x.is_empty()).cloned().collect(),
            None => Vec::new(),
        };
        let mut p = Self::zero();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty input"));
        }
        // split into signed terms at top-level +/-; a sign right after '^', '/' or '*' stays attached
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        for ch in compact.chars() {
            let attached = matches!(cur.chars().last(), Some('^') | Some('/') | Some('*'));
            if (ch == '+' || ch == '-') && !attached {
                if !cur.is_empty() {
                    terms.push((negative, std::mem::take(&mut cur)));
                    negative = false;
                }
                if ch == '-' {
                    negative = !negative;
                }
                continue;
            }
            cur.push(ch);
        }
        if cur.is_empty() {
            return Err(err("trailing sign"));
        }
        terms.push((negative, cur));

        for (neg, term) in terms {
            let mut coeff = Rational::one();
            let mut exps = [0u32; 2];
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor"));
                }
                let first = factor.chars().next().unwrap();
                if first.is_ascii_digit() || first == '-' {
                    coeff *= parse_rational(factor)?;
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>().map_err(|_| err("bad exponent"))?,
                    ),
                    None => (factor, 1),
                };
                if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(err("bad variable name"));
                }
                let slot = match names.iter().position(|n| n == name) {
                    Some(i) => i,
                    None if pinned.is_none() && names.len() < 2 => {
                        names.push(name.to_string());
                        names.len() - 1
                    }
                    None => return Err(err("unknown or third variable")),
                };
                exps[slot] += exp;
            }
            if neg {
                coeff = -coeff;
            }
            p.insert((exps[0], exps[1]), coeff);
        }
        match pinned {
            Some(n) => p.names = n,
            None => {
                for (i, n) in names.into_iter().enumerate() {
                    p.names[i] = n;
                }
            }
        }
        Ok(p)
    }
}

impl fmt::Display for Polynomial {
    /// Canonical form: ascending total degree, then descending outer exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by(|a, b| (a.0 + a.1).cmp(&(b.0 + b.1)).then(b.0.cmp(&a.0)));
        for (k, &&(i, j)) in keys.iter().enumerate() {
            let c = &self.terms[&(i, j)];
            let mut mono = Vec::new();
            for (slot, e) in [(0usize, i), (1usize, j)] {
                match e {
                    0 => {}
                    1 => mono.push(self.names[slot].clone()),
                    _ => mono.push(format!("{}^{}", self.names[slot], e)),
                }
            }
            let mag = c.abs();
            let body = if mono.is_empty() {
                fmt_rational(&mag)
            } else if mag.is_one() {
                mono.join("*")
            } else {
                format!("{}*{}", fmt_rational(&mag), mono.join("*"))
            };
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        p.names = self.merged_names(rhs);
        for (e, c) in &rhs.terms {
            p.insert(*e, c.clone());
        }
        p
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        p.names = self.merged_names(rhs);
        for (e, c) in &rhs.terms {
            p.insert(*e, -c.clone());
        }
        p
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut p = Polynomial::zero();
        p.names = self.merged_names(rhs);
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                p.insert((i + k, j + l), a * b);
            }
        }
        p
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -(&self)
    }
}
