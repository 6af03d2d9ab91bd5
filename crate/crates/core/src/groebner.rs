//! Buchberger's algorithm over a prime field, plus the quotient-ring queries
//! the certificates need: normal forms, Krull dimension from leading terms,
//! and saturation by a single polynomial via block elimination.

use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Poly};
use crate::ring::{Field, PrimeField, Ring};
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

/// Caps that turn runaway computations into reported failures.
#[derive(Clone, Copy, Debug)]
pub struct GbLimits {
    pub max_basis: usize,
    pub max_pairs: usize,
    pub max_poly_terms: usize,
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits {
            max_basis: 20_000,
            max_pairs: 2_000_000,
            max_poly_terms: 2_000_000,
        }
    }
}

/// A reduced Groebner basis together with the data it was computed under.
/// Reduced bases are unique for a fixed order, so equality of ideals can be
/// tested by comparing `basis` directly.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub field: PrimeField,
    pub order: MonomialOrder,
    pub n_vars: usize,
    pub basis: Vec<Poly<PrimeField>>,
}

impl GroebnerBasis {
    pub fn contains_unit(&self) -> bool {
        self.basis.iter().any(|g| {
            g.leading(self.order)
                .map(|(m, _)| m.is_one())
                .unwrap_or(false)
        })
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis
            .iter()
            .filter_map(|g| g.leading(self.order).map(|(m, _)| m.clone()))
            .collect()
    }
}

type Fp = PrimeField;

/// Full reduction of `f` by `divisors`: no term of the result is divisible by
/// any divisor leading monomial. With a Groebner basis this is the canonical
/// normal form.
pub fn normal_form(
    f: &Poly<Fp>,
    divisors: &[Poly<Fp>],
    order: MonomialOrder,
    field: &Fp,
) -> Poly<Fp> {
    let leads: Vec<(Monomial, u64)> = divisors
        .iter()
        .filter_map(|g| g.leading(order).map(|(m, c)| (m.clone(), *c)))
        .collect();
    let mut work = f.clone();
    let mut remainder = Poly::zero(f.n_vars);
    'outer: while !work.is_zero() {
        let (m, c) = {
            let (m, c) = work.leading(order).unwrap();
            (m.clone(), c.clone())
        };
        for (i, (lm, lc)) in leads.iter().enumerate() {
            if lm.divides(&m) {
                let q = lm.div(&m);
                let factor = field.div(&c, lc);
                work.sub_mul_term(&factor, &q, &divisors[i], field);
                continue 'outer;
            }
        }
        work.terms.remove(&m);
        remainder.add_term(m, c, field);
    }
    remainder
}

fn s_poly(f: &Poly<Fp>, g: &Poly<Fp>, order: MonomialOrder, field: &Fp) -> Poly<Fp> {
    let (mf, cf) = f.leading(order).unwrap();
    let (mg, cg) = g.leading(order).unwrap();
    let l = mf.lcm(mg);
    let mut s = Poly::zero(f.n_vars);
    s.sub_mul_term(&field.inv(cf), &mf.div(&l), f, field);
    let t = g.scale(&field.inv(cg), field);
    s.sub_mul_term(&field.neg(&field.one()), &mg.div(&l), &t, field);
    s
}

/// Buchberger with normal selection (smallest lcm first), the product
/// criterion, and the chain criterion. Returns the reduced basis.
pub fn groebner_basis(
    n_vars: usize,
    gens: &[Poly<Fp>],
    order: MonomialOrder,
    field: &Fp,
    limits: &GbLimits,
) -> Result<GroebnerBasis> {
    for g in gens {
        if g.n_vars != n_vars {
            return Err(Error::RingMismatch(
                "generators live in different polynomial rings".into(),
            ));
        }
    }

    let mut basis: Vec<Poly<Fp>> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(g.monic(order, field));
        }
    }

    // Pending S-pairs keyed by (lcm degree, lcm, i, j) so the pop order is
    // deterministic. `pending` mirrors the heap for the chain criterion.
    let mut heap: BinaryHeap<Reverse<(u32, Monomial, usize, usize)>> = BinaryHeap::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    let lead = |b: &[Poly<Fp>], i: usize| -> Monomial {
        b[i].leading(order).map(|(m, _)| m.clone()).unwrap()
    };

    let push_pair =
        |heap: &mut BinaryHeap<_>, pending: &mut BTreeSet<_>, b: &[Poly<Fp>], i: usize, j: usize| {
            let l = lead(b, i).lcm(&lead(b, j));
            heap.push(Reverse((l.degree(), l, i, j)));
            pending.insert((i, j));
        };

    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            push_pair(&mut heap, &mut pending, &basis, i, j);
        }
    }

    let mut processed_pairs = 0usize;
    while let Some(Reverse((_, l, i, j))) = heap.pop() {
        if !pending.remove(&(i, j)) {
            continue;
        }
        processed_pairs += 1;
        if processed_pairs > limits.max_pairs {
            return Err(Error::ResourceLimit {
                what: "groebner_basis",
                detail: format!("more than {} S-pairs processed", limits.max_pairs),
            });
        }

        let (li, lj) = (lead(&basis, i), lead(&basis, j));
        if li.coprime(&lj) {
            continue; // product criterion
        }
        // Chain criterion: some other leading monomial divides the lcm and
        // both connecting pairs are no longer pending.
        let chained = (0..basis.len()).any(|t| {
            t != i
                && t != j
                && lead(&basis, t).divides(&l)
                && !pending.contains(&ordered(i, t))
                && !pending.contains(&ordered(j, t))
        });
        if chained {
            continue;
        }

        let s = s_poly(&basis[i], &basis[j], order, field);
        let r = normal_form(&s, &basis, order, field);
        if r.is_zero() {
            continue;
        }
        if r.num_terms() > limits.max_poly_terms {
            return Err(Error::ResourceLimit {
                what: "groebner_basis",
                detail: format!("reducer with more than {} terms", limits.max_poly_terms),
            });
        }
        basis.push(r.monic(order, field));
        let newest = basis.len() - 1;
        if basis.len() > limits.max_basis {
            return Err(Error::ResourceLimit {
                what: "groebner_basis",
                detail: format!("basis grew past {} elements", limits.max_basis),
            });
        }
        for t in 0..newest {
            push_pair(&mut heap, &mut pending, &basis, t, newest);
        }
    }

    Ok(GroebnerBasis {
        field: *field,
        order,
        n_vars,
        basis: reduce_basis(basis, order, field),
    })
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Minimalizes and tail-reduces, yielding the unique reduced basis, sorted by
/// ascending leading monomial.
fn reduce_basis(mut basis: Vec<Poly<Fp>>, order: MonomialOrder, field: &Fp) -> Vec<Poly<Fp>> {
    // Minimal: drop g when another leading monomial divides lt(g).
    let leads: Vec<Monomial> = basis
        .iter()
        .map(|g| g.leading(order).unwrap().0.clone())
        .collect();
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j
                && keep[j]
                && leads[j].divides(&leads[i])
                && (leads[j] != leads[i] || j < i)
            {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<Poly<Fp>> = basis
        .drain(..)
        .zip(keep)
        .filter_map(|(g, k)| if k { Some(g) } else { None })
        .collect();

    // Tail-reduce each element against the others.
    for i in 0..minimal.len() {
        let mut others = minimal.clone();
        others.remove(i);
        minimal[i] = normal_form(&minimal[i], &others, order, field).monic(order, field);
    }
    minimal.sort_by(|a, b| {
        order.cmp(
            a.leading(order).unwrap().0,
            b.leading(order).unwrap().0,
        )
    });
    minimal
}

/// Krull dimension of the quotient ring, read off the leading-term ideal: the
/// size of a largest variable set containing no leading-monomial support.
/// The zero ring (unit ideal) yields -1.
pub fn krull_dimension(gb: &GroebnerBasis) -> i64 {
    let n = gb.n_vars;
    assert!(n <= 63, "dimension search uses u64 variable masks");
    let supports: Vec<u64> = gb
        .leading_monomials()
        .iter()
        .map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i)))
        .collect();
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut memo: HashMap<u64, i64> = HashMap::new();
    fn best(avail: u64, supports: &[u64], memo: &mut HashMap<u64, i64>) -> i64 {
        if let Some(&v) = memo.get(&avail) {
            return v;
        }
        let offender = supports.iter().find(|&&s| s & !avail == 0).copied();
        let v = match offender {
            None => avail.count_ones() as i64,
            Some(s) => {
                let mut m = -1;
                let mut bits = s & avail;
                while bits != 0 {
                    let b = bits & bits.wrapping_neg();
                    bits ^= b;
                    m = m.max(best(avail & !b, supports, memo));
                }
                m
            }
        };
        memo.insert(avail, v);
        v
    }
    best(full, &supports, &mut memo)
}

/// Membership test: zero normal form against a Groebner basis.
pub fn reduces_to_zero(f: &Poly<Fp>, gb: &GroebnerBasis) -> Result<bool> {
    if f.n_vars != gb.n_vars {
        return Err(Error::RingMismatch(format!(
            "polynomial in {} variables reduced against a basis in {}",
            f.n_vars, gb.n_vars
        )));
    }
    Ok(normal_form(f, &gb.basis, gb.order, &gb.field).is_zero())
}

/// Saturation (I : f^inf) computed as (I + <t*f - 1>) intersected with the
/// original ring, using a block order that eliminates the auxiliary t.
pub fn saturate(
    gens: &[Poly<Fp>],
    f: &Poly<Fp>,
    field: &Fp,
    limits: &GbLimits,
) -> Result<Vec<Poly<Fp>>> {
    let n = f.n_vars;
    let mut extended: Vec<Poly<Fp>> = gens.iter().map(|g| g.extend_vars(1)).collect();
    // t*f - 1
    let t = Monomial::var(n + 1, n);
    let mut tf = f.extend_vars(1);
    tf = tf.mul(&Poly::term(n + 1, field.one(), t, field), field);
    tf.add_term(
        Monomial::one(n + 1),
        field.neg(&field.one()),
        field,
    );
    extended.push(tf);

    let gb = groebner_basis(
        n + 1,
        &extended,
        MonomialOrder::Block { retained: n },
        field,
        limits,
    )?;
    let kept: Vec<Poly<Fp>> = gb
        .basis
        .iter()
        .filter(|g| g.terms.keys().all(|m| m.0[n] == 0))
        .map(|g| g.shrink_vars(1))
        .collect();
    Ok(kept)
}
