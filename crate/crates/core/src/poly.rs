//! Sparse multivariate polynomials over a coefficient ring.
//!
//! Terms are stored in a BTreeMap keyed by exponent vector, so the in-memory
//! form is canonical and independent of any monomial order. Orders are applied
//! at use sites (leading-term queries, division); this keeps one polynomial
//! usable under degrevlex and under block elimination orders without copies.

use crate::ring::{Field, Ring};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(pub Box<[u16]>);

impl Monomial {
    pub fn one(n_vars: usize) -> Self {
        Monomial(vec![0u16; n_vars].into_boxed_slice())
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut e = vec![0u16; n_vars];
        e[i] = 1;
        Monomial(e.into_boxed_slice())
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial(exps.to_vec().into_boxed_slice())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// other / self; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(self.0.iter())
                .map(|(b, a)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }
}

/// Monomial orders used by the Groebner layer. `Block { retained }` compares
/// the trailing block of variables (indices >= retained) first, which makes it
/// an elimination order for those variables.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    DegRevLex,
    Block { retained: usize },
}

fn degrevlex_slice(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    // Equal degree: the monomial with the smaller exponent in the last
    // differing position is the larger one.
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return if a[i] < b[i] {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::DegRevLex => degrevlex_slice(&a.0, &b.0),
            MonomialOrder::Block { retained } => {
                match degrevlex_slice(&a.0[retained..], &b.0[retained..]) {
                    Ordering::Equal => degrevlex_slice(&a.0[..retained], &b.0[..retained]),
                    o => o,
                }
            }
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Poly<R: Ring> {
    pub n_vars: usize,
    pub terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: Ring> Poly<R> {
    pub fn zero(n_vars: usize) -> Self {
        Poly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: R::Elem, ring: &R) -> Self {
        let mut p = Poly::zero(n_vars);
        if !ring.is_zero(&c) {
            p.terms.insert(Monomial::one(n_vars), c);
        }
        p
    }

    pub fn term(n_vars: usize, c: R::Elem, m: Monomial, ring: &R) -> Self {
        let mut p = Poly::zero(n_vars);
        if !ring.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: R::Elem, ring: &R) {
        if ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = ring.add(existing, &c);
                if ring.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly<R>, ring: &R) -> Poly<R> {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone(), ring);
        }
        out
    }

    pub fn sub(&self, other: &Poly<R>, ring: &R) -> Poly<R> {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), ring.neg(c), ring);
        }
        out
    }

    pub fn neg(&self, ring: &R) -> Poly<R> {
        let mut out = Poly::zero(self.n_vars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), ring.neg(c));
        }
        out
    }

    pub fn mul(&self, other: &Poly<R>, ring: &R) -> Poly<R> {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = Poly::zero(self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ring.mul(ca, cb), ring);
            }
        }
        out
    }

    pub fn scale(&self, c: &R::Elem, ring: &R) -> Poly<R> {
        let mut out = Poly::zero(self.n_vars);
        if ring.is_zero(c) {
            return out;
        }
        for (m, a) in &self.terms {
            out.add_term(m.clone(), ring.mul(a, c), ring);
        }
        out
    }

    /// self -= c * m * g, the inner step of polynomial division.
    pub fn sub_mul_term(&mut self, c: &R::Elem, m: &Monomial, g: &Poly<R>, ring: &R) {
        for (mg, cg) in &g.terms {
            self.add_term(m.mul(mg), ring.neg(&ring.mul(c, cg)), ring);
        }
    }

    /// Leading (monomial, coefficient) under `ord`.
    pub fn leading<'a>(&'a self, ord: MonomialOrder) -> Option<(&'a Monomial, &'a R::Elem)> {
        self.terms
            .iter()
            .max_by(|(ma, _), (mb, _)| ord.cmp(ma, mb))
    }

    /// Appends `extra` fresh variables (exponent zero) after the existing ones.
    pub fn extend_vars(&self, extra: usize) -> Poly<R> {
        let n = self.n_vars + extra;
        let mut out = Poly::zero(n);
        for (m, c) in &self.terms {
            let mut e = m.0.to_vec();
            e.resize(n, 0);
            out.terms.insert(Monomial(e.into_boxed_slice()), c.clone());
        }
        out
    }

    /// Drops the trailing `extra` variables. Caller guarantees they are unused.
    pub fn shrink_vars(&self, extra: usize) -> Poly<R> {
        let n = self.n_vars - extra;
        let mut out = Poly::zero(n);
        for (m, c) in &self.terms {
            debug_assert!(m.0[n..].iter().all(|&e| e == 0));
            out.terms
                .insert(Monomial(m.0[..n].to_vec().into_boxed_slice()), c.clone());
        }
        out
    }

    /// Applies a variable permutation: new exponent at `perm[i]` comes from
    /// old variable `i`.
    pub fn permute_vars(&self, perm: &[usize]) -> Poly<R> {
        assert_eq!(perm.len(), self.n_vars);
        let mut out = Poly::zero(self.n_vars);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; self.n_vars];
            for (i, &ex) in m.0.iter().enumerate() {
                e[perm[i]] = ex;
            }
            out.terms.insert(Monomial(e.into_boxed_slice()), c.clone());
        }
        out
    }

    pub fn eval<T>(
        &self,
        point: &[T],
        map_coef: impl Fn(&R::Elem) -> T,
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
        zero: T,
    ) -> T {
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t = map_coef(c);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = mul(&t, &point[i]);
                }
            }
            acc = add(&acc, &t);
        }
        acc
    }

    pub fn display<'a>(&'a self, ring: &'a R, names: &'a dyn Fn(usize) -> String) -> PolyDisplay<'a, R> {
        PolyDisplay {
            poly: self,
            ring,
            names,
        }
    }
}

impl<R: Field> Poly<R> {
    /// Normalizes so that the leading coefficient under `ord` is one.
    pub fn monic(&self, ord: MonomialOrder, ring: &R) -> Poly<R> {
        match self.leading(ord) {
            None => self.clone(),
            Some((_, c)) => self.scale(&ring.inv(c), ring),
        }
    }
}

pub struct PolyDisplay<'a, R: Ring> {
    poly: &'a Poly<R>,
    ring: &'a R,
    names: &'a dyn Fn(usize) -> String,
}

impl<R: Ring> fmt::Display for PolyDisplay<'_, R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        // Descending degrevlex reads most naturally.
        let mut terms: Vec<_> = self.poly.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| MonomialOrder::DegRevLex.cmp(b, a));
        for (idx, (m, c)) in terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let cs = self.ring.fmt_elem(c);
            if m.is_one() {
                write!(f, "{cs}")?;
            } else {
                if cs != "1" {
                    write!(f, "{cs}*")?;
                }
                let mut first = true;
                for (i, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, "*")?;
                    }
                    first = false;
                    write!(f, "{}", (self.names)(i))?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
