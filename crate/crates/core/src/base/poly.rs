//! Exact multivariate polynomials over the rationals and polynomial maps
//! `R^n -> R^m`.
//!
//! Polynomials are kept in a sparse normal form (sorted monomials, no zero
//! coefficients), so structural equality of two [`Poly`] values decides
//! equality of the functions they denote.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::base::Source;
use crate::error::{check_obj, Error, Result};
use crate::obj::Obj;
use crate::rational::Rational;

/// `x_{v0}^{e0} * x_{v1}^{e1} * ...`, sorted by variable, exponents > 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: u32) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(u32, u32)>) -> Monomial {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    fn map_vars(&self, f: impl Fn(u32) -> u32) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)).collect())
    }

    fn exponent(&self, v: u32) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    /// Divides out one power of `v`; the caller guarantees it is present.
    fn lower(&self, v: u32) -> Monomial {
        let mut pairs = self.0.clone();
        for p in pairs.iter_mut() {
            if p.0 == v {
                p.1 -= 1;
            }
        }
        pairs.retain(|&(_, e)| e > 0);
        Monomial(pairs)
    }

    fn max_var(&self) -> Option<u32> {
        self.0.last().map(|&(v, _)| v)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    format!("x{}", v)
                } else {
                    format!("x{}^{}", v, e)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::term(c, Monomial::one())
    }

    pub fn var(v: u32) -> Poly {
        Poly::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest variable index that occurs, if any.
    pub fn max_var(&self) -> Option<u32> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    /// `Some(v)` iff this polynomial is exactly the variable `x_v`.
    pub fn as_var(&self) -> Option<u32> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        match m.factors() {
            [(v, 1)] if c.is_one() => Some(*v),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut acc, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            acc.add_term(m.clone(), c.clone());
        }
        acc
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Poly {
        self.scale(&Rational::from_int(-1))
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.terms.len() == 1 {
            let (sm, sc) = small.terms.iter().next().expect("one term");
            // Multiplying by a single monomial is injective on monomials.
            return Poly {
                terms: big.terms.iter().map(|(m, c)| (m.mul(sm), c * sc)).collect(),
            };
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(big.terms.len() * small.terms.len());
        for (m1, c1) in &big.terms {
            for (m2, c2) in &small.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Renames variables; the map must be injective on the variables present.
    pub fn rename(&self, f: impl Fn(u32) -> u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.map_vars(&f), c.clone()))
                .collect(),
        }
    }

    pub fn shift(&self, offset: u32) -> Poly {
        if offset == 0 {
            return self.clone();
        }
        self.rename(|v| v + offset)
    }

    /// Formal partial derivative with respect to `x_v`.
    pub fn partial(&self, v: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                out.add_term(m.lower(v), c * &Rational::from_int(e as i64));
            }
        }
        out
    }

    /// Substitutes `args[v]` for every `x_v`.
    pub fn substitute(&self, args: &[Poly]) -> Poly {
        let mut cache = PowerCache::new(args);
        self.substitute_cached(&mut cache)
    }

    fn substitute_cached(&self, cache: &mut PowerCache<'_>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for &(v, e) in m.factors() {
                term = term.mul(cache.power(v, e));
                if term.is_zero() {
                    break;
                }
            }
            out.add_assign(&term);
        }
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                t = &t * &x[v as usize].pow(e);
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.factors()
                    .iter()
                    .fold(c.to_f64(), |t, &(v, e)| t * x[v as usize].powi(e as i32))
            })
            .sum()
    }

    /// Parses expressions such as `x0^2 + 3/2*x0*x1 - (x1 - 1)^3`.
    pub fn parse(text: &str, nvars: usize) -> std::result::Result<Poly, String> {
        let mut p = PolyParser {
            chars: text.chars().collect(),
            pos: 0,
            nvars,
        };
        let out = p.sum()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(format!(
                "unexpected `{}` at offset {}",
                p.chars[p.pos], p.pos
            ));
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest degree first reads more naturally.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(a.0.cmp(b.0)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let negative = *c < Rational::zero();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{:?}", m)?;
            } else {
                write!(f, "{}*{:?}", mag, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

struct PowerCache<'a> {
    args: &'a [Poly],
    powers: HashMap<(u32, u32), Poly>,
}

impl<'a> PowerCache<'a> {
    fn new(args: &'a [Poly]) -> Self {
        PowerCache {
            args,
            powers: HashMap::new(),
        }
    }

    fn power(&mut self, v: u32, e: u32) -> &Poly {
        if e == 1 {
            return &self.args[v as usize];
        }
        if !self.powers.contains_key(&(v, e)) {
            let lower = if e == 2 {
                self.args[v as usize].clone()
            } else {
                self.power(v, e - 1).clone()
            };
            let p = lower.mul(&self.args[v as usize]);
            self.powers.insert((v, e), p);
        }
        &self.powers[&(v, e)]
    }
}

struct PolyParser {
    chars: Vec<char>,
    pos: usize,
    nvars: usize,
}

impl PolyParser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn sum(&mut self) -> std::result::Result<Poly, String> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.product()?.neg()
            }
            Some('+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> std::result::Result<Poly, String> {
        let mut acc = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> std::result::Result<Poly, String> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let e: u32 = digits
                .parse()
                .map_err(|_| format!("bad exponent at offset {}", start))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> std::result::Result<Poly, String> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(format!("expected `)` at offset {}", self.pos));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.atom()?.neg())
            }
            Some('x') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let v: usize = digits
                    .parse()
                    .map_err(|_| format!("expected variable index at offset {}", start))?;
                if v >= self.nvars {
                    return Err(format!(
                        "variable x{} out of range (arity {})",
                        v, self.nvars
                    ));
                }
                Ok(Poly::var(v as u32))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '.')
                {
                    self.pos += 1;
                }
                // `a/b` directly after a number is a rational literal.
                if self.pos < self.chars.len() && self.chars[self.pos] == '/' {
                    self.pos += 1;
                    while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                let r: Rational = lit.parse().map_err(|e| format!("{}", e))?;
                Ok(Poly::constant(r))
            }
            Some(c) => Err(format!("unexpected `{}` at offset {}", c, self.pos)),
            None => Err("unexpected end of polynomial".to_string()),
        }
    }
}

/// A polynomial map `R^n -> R^m`, one polynomial per output coordinate.
#[derive(Clone, PartialEq)]
pub struct PolyMap {
    dom: Obj,
    cod: Obj,
    comps: Arc<Vec<Poly>>,
}

impl PolyMap {
    pub fn new(dom: Obj, comps: Vec<Poly>) -> Result<PolyMap> {
        if !dom.is_real() {
            return Err(Error::ShapeMismatch(format!(
                "polynomial maps need a real domain, got {}",
                dom
            )));
        }
        if let Some(v) = comps.iter().filter_map(Poly::max_var).max() {
            if v as usize >= dom.len() {
                return Err(Error::ShapeMismatch(format!(
                    "variable x{} out of range for domain {}",
                    v, dom
                )));
            }
        }
        Ok(PolyMap {
            cod: Obj::real(comps.len()),
            dom,
            comps: Arc::new(comps),
        })
    }

    pub fn dom(&self) -> &Obj {
        &self.dom
    }

    pub fn cod(&self) -> &Obj {
        &self.cod
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn wiring(dom: &Obj, sources: &[Source]) -> PolyMap {
        let comps = sources
            .iter()
            .map(|s| match s {
                Source::Slot(i) => Poly::var(*i as u32),
                Source::Zero => Poly::zero(),
            })
            .collect();
        PolyMap {
            dom: dom.clone(),
            cod: Obj::real(sources.len()),
            comps: Arc::new(comps),
        }
    }

    pub fn plus(n: usize) -> PolyMap {
        let comps = (0..n)
            .map(|i| Poly::var(i as u32).add(&Poly::var((n + i) as u32)))
            .collect();
        PolyMap {
            dom: Obj::real(2 * n),
            cod: Obj::real(n),
            comps: Arc::new(comps),
        }
    }

    pub fn constant(values: &[Rational]) -> PolyMap {
        PolyMap {
            dom: Obj::unit(),
            cod: Obj::real(values.len()),
            comps: Arc::new(values.iter().cloned().map(Poly::constant).collect()),
        }
    }

    /// `Some(sources)` when every component is a bare variable or zero.
    pub fn as_wiring(&self) -> Option<Vec<Source>> {
        self.comps
            .iter()
            .map(|p| {
                if p.is_zero() {
                    Some(Source::Zero)
                } else {
                    p.as_var().map(|v| Source::Slot(v as usize))
                }
            })
            .collect()
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &PolyMap) -> Result<PolyMap> {
        check_obj("compose", &self.dom, &f.cod)?;
        if let Some(w) = self.as_wiring() {
            let comps = w
                .iter()
                .map(|s| match s {
                    Source::Slot(i) => f.comps[*i].clone(),
                    Source::Zero => Poly::zero(),
                })
                .collect();
            return Ok(PolyMap {
                dom: f.dom.clone(),
                cod: self.cod.clone(),
                comps: Arc::new(comps),
            });
        }
        let comps = if let Some(w) = f
            .as_wiring()
            .filter(|w| w.iter().all(|s| matches!(s, Source::Slot(_))))
        {
            // Precomposition with a pure variable map is a renaming, except
            // that it may identify variables, so go through substitution only
            // when it is not injective.
            let idx: Vec<u32> = w
                .iter()
                .map(|s| match s {
                    Source::Slot(i) => *i as u32,
                    Source::Zero => unreachable!(),
                })
                .collect();
            let mut seen = idx.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() == idx.len() {
                self.comps
                    .iter()
                    .map(|p| p.rename(|v| idx[v as usize]))
                    .collect()
            } else {
                let mut cache = PowerCache::new(&f.comps);
                self.comps
                    .iter()
                    .map(|p| p.substitute_cached(&mut cache))
                    .collect()
            }
        } else {
            let mut cache = PowerCache::new(&f.comps);
            self.comps
                .iter()
                .map(|p| p.substitute_cached(&mut cache))
                .collect()
        };
        Ok(PolyMap {
            dom: f.dom.clone(),
            cod: self.cod.clone(),
            comps: Arc::new(comps),
        })
    }

    pub fn product(&self, h: &PolyMap) -> PolyMap {
        let offset = self.dom.len() as u32;
        let mut comps: Vec<Poly> = self.comps.as_ref().clone();
        comps.extend(h.comps.iter().map(|p| p.shift(offset)));
        PolyMap {
            dom: self.dom.times(&h.dom),
            cod: self.cod.times(&h.cod),
            comps: Arc::new(comps),
        }
    }

    /// `Df(Δ, x) = Jf|_x · Δ`, tangent variables first.
    pub fn diff(&self) -> PolyMap {
        let n = self.dom.len() as u32;
        let comps = self
            .comps
            .iter()
            .map(|p| {
                let mut acc = Poly::zero();
                for v in 0..n {
                    let d = p.partial(v);
                    if !d.is_zero() {
                        acc.add_assign(&d.shift(n).mul(&Poly::var(v)));
                    }
                }
                acc
            })
            .collect();
        PolyMap {
            dom: self.dom.times(&self.dom),
            cod: self.cod.clone(),
            comps: Arc::new(comps),
        }
    }

    pub fn eval(&self, x: &[Rational]) -> Vec<Rational> {
        self.comps.iter().map(|p| p.eval(x)).collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.comps.iter().map(|p| p.eval_f64(x)).collect()
    }

    pub fn degree(&self) -> u32 {
        self.comps.iter().map(Poly::degree).max().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.comps.iter().map(Poly::num_terms).sum()
    }
}

impl fmt::Debug for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMap[{} -> {}](", self.dom, self.cod)?;
        for (i, p) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    #[test]
    fn substitution_expands_squares() {
        // g(y) = y^2 after f(x) = x + 1
        let f = PolyMap::new(Obj::real(1), vec![p("x0 + 1", 1)]).unwrap();
        let g = PolyMap::new(Obj::real(1), vec![p("x0^2", 1)]).unwrap();
        let gf = g.after(&f).unwrap();
        assert_eq!(gf.comps()[0], p("x0^2 + 2*x0 + 1", 1));
    }

    #[test]
    fn ring_identity_is_structural() {
        assert_eq!(p("(x0 + 1)^2", 1), p("x0^2 + 2*x0 + 1", 1));
        assert_ne!(p("x0", 1), p("x0 + 1/1000*x0^2", 1));
        assert!(p("(x0 - x1)*(x0 + x1) - x0^2 + x1^2", 2).is_zero());
    }

    #[test]
    fn formal_derivative_is_tangent_first() {
        let f = PolyMap::new(Obj::real(1), vec![p("x0^2", 1)]).unwrap();
        let df = f.diff();
        // Df(Δ, x) = 2xΔ; Df(1, 3) = 6
        assert_eq!(df.comps()[0], p("2*x0*x1", 2));
        assert_eq!(
            df.eval(&[Rational::one(), Rational::from_int(3)]),
            vec![Rational::from_int(6)]
        );
    }

    #[test]
    fn evaluation_is_exact() {
        let f = PolyMap::new(Obj::real(2), vec![p("x0*x1", 2)]).unwrap();
        assert_eq!(
            f.eval(&[Rational::from_int(3), Rational::new(1, 2)]),
            vec![Rational::new(3, 2)]
        );
    }

    #[test]
    fn display_parses_back() {
        for s in ["x0^2 - 3/2*x0*x1 + 7", "-x1", "0", "x0*x1^3 - 1/3"] {
            let q = p(s, 2);
            assert_eq!(p(&q.to_string(), 2), q);
        }
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!(Poly::parse("x2", 2).is_err());
        assert!(Poly::parse("x0 +", 1).is_err());
        assert!(Poly::parse("(x0", 1).is_err());
        assert!(Poly::parse("x0 $", 1).is_err());
    }

    #[test]
    fn non_injective_precomposition_substitutes() {
        // f(a, b) = a*b after the diagonal x -> (x, x) is x^2.
        let f = PolyMap::new(Obj::real(2), vec![p("x0*x1", 2)]).unwrap();
        let diag = PolyMap::wiring(&Obj::real(1), &[Source::Slot(0), Source::Slot(0)]);
        assert_eq!(f.after(&diag).unwrap().comps()[0], p("x0^2", 1));
    }
}
