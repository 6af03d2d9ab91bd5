//! Exact certificates for the quadric system: dimension of the zero scheme
//! against the count of components, graded homology of the exterior complex
//! the quadrics generate, codimension bounds for the minor ideals of the
//! Jacobian, and component splitting through saturation at a witness
//! hypersurface.
//!
//! All symbolic verdicts run modulo two independent primes and must agree;
//! disagreement is a hard error, never a silent pick. The homology ranks
//! stream column by column through the panel eliminator in `linalg`, sliced
//! by the (x, y) bidegree so no matrix is ever materialized whole.

use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, krull_dimension, saturate, GbLimits, GroebnerBasis};
use crate::linalg::RankAccumulator;
use crate::moment::{generic_rank, poly_mod_p, MomentSystem};
use crate::poly::{Monomial, MonomialOrder, Poly};
use crate::ring::{PrimeField, Rationals, Ring};
use crate::torus::TorusAnalysis;
use crate::{PolyFp, PolyQ};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct CertConfig {
    pub p1: u64,
    pub p2: u64,
    pub gb_limits: GbLimits,
    /// Cap on the total number of symbolic minors expanded in one rank or
    /// minor-ideal computation.
    pub max_minors: usize,
    /// Cap on rows * columns of a single graded slice of a differential.
    pub max_slice_cells: usize,
}

impl Default for CertConfig {
    fn default() -> Self {
        CertConfig {
            p1: 32003,
            p2: 65537,
            gb_limits: GbLimits::default(),
            max_minors: 5000,
            max_slice_cells: 50_000_000,
        }
    }
}

impl CertConfig {
    pub fn fields(&self) -> Result<(PrimeField, PrimeField)> {
        if self.p1 == self.p2 {
            return Err(Error::BadModulus(
                self.p2,
                "the two certificate primes must differ".into(),
            ));
        }
        Ok((PrimeField::new(self.p1)?, PrimeField::new(self.p2)?))
    }
}

fn require_agreement<T: PartialEq + std::fmt::Debug>(
    what: &'static str,
    cfg: &CertConfig,
    v1: T,
    v2: T,
) -> Result<T> {
    if v1 == v2 {
        Ok(v1)
    } else {
        Err(Error::PrimeDisagreement {
            what,
            p1: cfg.p1,
            p2: cfg.p2,
            v1: format!("{v1:?}"),
            v2: format!("{v2:?}"),
        })
    }
}

// ---------------------------------------------------------------------------
// Regular sequence via the dimension of the zero scheme.

#[derive(Clone, Debug, Serialize)]
pub struct RegularSequenceOutcome {
    pub components: usize,
    pub ambient_dim: usize,
    pub dim_expected: i64,
    pub dim_found: i64,
    /// k homogeneous elements are a regular sequence exactly when their zero
    /// scheme has codimension k.
    pub is_regular: bool,
}

pub fn regular_sequence_check(ms: &MomentSystem, cfg: &CertConfig) -> Result<RegularSequenceOutcome> {
    let (f1, f2) = cfg.fields()?;
    let dim_for = |fp: &PrimeField| -> Result<i64> {
        let gens = ms.quadrics_mod_p(fp)?;
        let gb = groebner_basis(2 * ms.n, &gens, MonomialOrder::DegRevLex, fp, &cfg.gb_limits)?;
        Ok(krull_dimension(&gb))
    };
    let dim_found = require_agreement("zero scheme dimension", cfg, dim_for(&f1)?, dim_for(&f2)?)?;
    let dim_expected = 2 * ms.n as i64 - ms.k as i64;
    Ok(RegularSequenceOutcome {
        components: ms.k,
        ambient_dim: 2 * ms.n,
        dim_expected,
        dim_found,
        is_regular: dim_found == dim_expected,
    })
}

// ---------------------------------------------------------------------------
// Graded homology of the exterior complex.

#[derive(Clone, Debug, Serialize)]
pub struct HomologyTable {
    pub k: usize,
    pub degree_bound: u32,
    /// dims[d][i] = dim of the degree-d slice of the i-th homology, i = 0..=k.
    /// Row i = 0 is the Hilbert function of the quotient by the quadrics.
    pub dims: Vec<Vec<usize>>,
    /// Earliest (i, d) with i >= 1 and a nonzero slice.
    pub first_positive: Option<(usize, u32)>,
    /// True when every homology above index zero vanishes through the bound;
    /// with the bound high enough this is the numerical shadow of the
    /// regular-sequence property.
    pub vanishing_above_zero: bool,
}

fn binomial(a: usize, b: usize) -> usize {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut out: u128 = 1;
    for i in 0..b {
        out = out * (a - i) as u128 / (i + 1) as u128;
    }
    out as usize
}

/// All exponent vectors of length n with the given total degree, in a fixed
/// generation order.
fn degree_vectors(n: usize, d: u16) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; n];
    fn go(pos: usize, left: u16, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            go(pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    go(0, d, &mut cur, &mut out);
    out
}

/// Monomials in 2n variables with x-degree a and y-degree b.
fn monomials_bidegree(n: usize, a: u16, b: u16) -> Vec<Monomial> {
    let xs = degree_vectors(n, a);
    let ys = degree_vectors(n, b);
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for xe in &xs {
        for ye in &ys {
            let mut exps = Vec::with_capacity(2 * n);
            exps.extend_from_slice(xe);
            exps.extend_from_slice(ye);
            out.push(Monomial::from_exps(&exps));
        }
    }
    out
}

fn subsets(k: usize, size: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(size);
    fn go(start: u8, k: u8, size: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        let needed = size - cur.len();
        for a in start..=(k - needed as u8) {
            cur.push(a);
            go(a + 1, k, size, cur, out);
            cur.pop();
        }
    }
    if size <= k {
        go(0, k as u8, size, &mut cur, &mut out);
    }
    out
}

/// Rank of the bidegree-(dx, dy) slice of the i-th differential, streaming
/// columns into the panel eliminator and stopping early on full row rank.
#[allow(clippy::too_many_arguments)]
fn slice_rank(
    quadrics: &[PolyFp],
    n: usize,
    i: usize,
    dx: u16,
    dy: u16,
    subs_prev: &[Vec<u8>],
    prev_pos: &HashMap<Vec<u8>, usize>,
    subs_cur: &[Vec<u8>],
    fp: &PrimeField,
    max_cells: usize,
) -> Result<usize> {
    let iu = i as u16;
    let monos_cur = monomials_bidegree(n, dx - iu, dy - iu);
    let monos_prev = monomials_bidegree(n, dx - iu + 1, dy - iu + 1);
    let rows = subs_prev.len() * monos_prev.len();
    let cols = subs_cur.len() * monos_cur.len();
    if rows == 0 || cols == 0 {
        return Ok(0);
    }
    if rows.saturating_mul(cols) > max_cells {
        return Err(Error::ResourceLimit {
            what: "homology slice",
            detail: format!(
                "slice at index {i}, bidegree ({dx},{dy}) is {rows} x {cols}"
            ),
        });
    }
    let prev_index: HashMap<&Monomial, usize> =
        monos_prev.iter().enumerate().map(|(j, m)| (m, j)).collect();
    let mut acc = RankAccumulator::new(fp, rows);
    'outer: for t in subs_cur {
        // Dropping position l sends e_T m to (-1)^l mu_{T[l]} e_{T minus l} m.
        let mut targets = Vec::with_capacity(i);
        for (l, &a) in t.iter().enumerate() {
            let mut rest = t.clone();
            rest.remove(l);
            let off = prev_pos[&rest] * monos_prev.len();
            let sign = if l % 2 == 0 { fp.one() } else { fp.neg(&fp.one()) };
            targets.push((off, sign, a as usize));
        }
        for m in &monos_cur {
            let mut col = vec![0u64; rows];
            for (off, sign, a) in &targets {
                for (tm, tc) in quadrics[*a].terms.iter() {
                    let idx = off + prev_index[&m.mul(tm)];
                    col[idx] = fp.add(&col[idx], &fp.mul(sign, tc));
                }
            }
            acc.offer(col);
            if acc.rank() == rows {
                break 'outer;
            }
        }
    }
    Ok(acc.rank())
}

fn homology_mod_p(
    ms: &MomentSystem,
    bound: u32,
    fp: &PrimeField,
    cfg: &CertConfig,
) -> Result<Vec<Vec<usize>>> {
    let (n, k) = (ms.n, ms.k);
    let quadrics = ms.quadrics_mod_p(fp)?;
    let subs: Vec<Vec<Vec<u8>>> = (0..=k).map(|i| subsets(k, i)).collect();
    let positions: Vec<HashMap<Vec<u8>, usize>> = subs
        .iter()
        .map(|ss| ss.iter().enumerate().map(|(j, s)| (s.clone(), j)).collect())
        .collect();

    let mut tasks: Vec<(usize, u16, u16)> = Vec::new();
    for i in 1..=k {
        for dx in (i as u16)..=(bound as u16) {
            for dy in (i as u16)..=(bound as u16) {
                if (dx + dy) as u32 <= bound {
                    tasks.push((i, dx, dy));
                }
            }
        }
    }
    let ranks_parts: Result<Vec<((usize, u32), usize)>> = tasks
        .par_iter()
        .map(|&(i, dx, dy)| {
            slice_rank(
                &quadrics,
                n,
                i,
                dx,
                dy,
                &subs[i - 1],
                &positions[i - 1],
                &subs[i],
                fp,
                cfg.max_slice_cells,
            )
            .map(|r| ((i, (dx + dy) as u32), r))
        })
        .collect();
    let mut ranks: HashMap<(usize, u32), usize> = HashMap::new();
    for ((i, d), r) in ranks_parts? {
        *ranks.entry((i, d)).or_insert(0) += r;
    }

    let dim_k = |i: usize, d: u32| koszul_term_dim(n, k, i, d);

    let mut table = Vec::with_capacity(bound as usize + 1);
    for d in 0..=bound {
        let mut row = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let incoming = if i + 1 <= k {
                *ranks.get(&(i + 1, d)).unwrap_or(&0)
            } else {
                0
            };
            let outgoing = if i >= 1 { *ranks.get(&(i, d)).unwrap_or(&0) } else { 0 };
            let total = dim_k(i, d);
            let h = total
                .checked_sub(outgoing)
                .and_then(|x| x.checked_sub(incoming))
                .expect("slice ranks exceed the space dimension");
            row.push(h);
        }
        table.push(row);
    }
    Ok(table)
}

/// Graded homology table through the degree bound, agreeing on two primes.
pub fn graded_homology(ms: &MomentSystem, bound: u32, cfg: &CertConfig) -> Result<HomologyTable> {
    let (f1, f2) = cfg.fields()?;
    let t1 = homology_mod_p(ms, bound, &f1, cfg)?;
    let t2 = homology_mod_p(ms, bound, &f2, cfg)?;
    let dims = require_agreement("graded homology table", cfg, t1, t2)?;
    let mut first_positive = None;
    'scan: for (d, row) in dims.iter().enumerate() {
        for (i, &h) in row.iter().enumerate().skip(1) {
            if h > 0 {
                first_positive = Some((i, d as u32));
                break 'scan;
            }
        }
    }
    Ok(HomologyTable {
        k: ms.k,
        degree_bound: bound,
        dims,
        first_positive,
        vanishing_above_zero: first_positive.is_none(),
    })
}

/// Default degree bound for homology sweeps: past twice the top exterior
/// degree, with headroom for the internal degree-2 shift of the generators.
pub fn default_degree_bound(k: usize) -> u32 {
    2 * k as u32 + 4
}

/// Dimension of the degree-d slice of the i-th term of the exterior complex
/// on k generators of internal degree two, over 2n polynomial variables
/// split into two blocks of n.
pub fn koszul_term_dim(n: usize, k: usize, i: usize, d: u32) -> usize {
    let free = binomial(k, i);
    let rest = d as i64 - 2 * i as i64;
    if rest < 0 {
        return 0;
    }
    let mut total = 0usize;
    for a in 0..=rest as usize {
        let b = rest as usize - a;
        total += binomial(a + n - 1, n - 1) * binomial(b + n - 1, n - 1);
    }
    free * total
}

// ---------------------------------------------------------------------------
// Codimension bounds for the minor ideals of the Jacobian.

#[derive(Clone, Debug, Serialize)]
pub struct FdRow {
    pub t: usize,
    pub minors: usize,
    pub codim: i64,
    pub required: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FdOutcome {
    pub d: i64,
    pub jacobian_rank: usize,
    /// The action is generically locally free exactly when the Jacobian has
    /// full rank k; only then do these bounds read off modularity.
    pub locally_free: bool,
    pub rows: Vec<FdRow>,
    pub holds: bool,
}

/// Determinant of a square submatrix of polynomials by subset dynamic
/// programming over the chosen columns.
fn minor_q(jac: &[Vec<PolyQ>], rows: &[usize], cols: &[usize]) -> PolyQ {
    let q = Rationals;
    let t = rows.len();
    let n_vars = jac[rows[0]][cols[0]].n_vars;
    let mut dp: HashMap<u32, PolyQ> = HashMap::new();
    dp.insert(0, Poly::constant(n_vars, q.one(), &q));
    for l in 0..t {
        let mut next: HashMap<u32, PolyQ> = HashMap::new();
        for (mask, det) in dp.iter() {
            // Expansion along the newly added row: the sign is the parity of
            // the row index plus the column's position within the subset.
            let mut sign_flips = l;
            for (s, &c) in cols.iter().enumerate() {
                if mask & (1 << s) != 0 {
                    sign_flips += 1;
                    continue;
                }
                let entry = &jac[rows[l]][c];
                if entry.is_zero() {
                    continue;
                }
                let mut term = det.mul(entry, &q);
                if sign_flips % 2 == 1 {
                    term = term.neg(&q);
                }
                let key = mask | (1 << s);
                match next.remove(&key) {
                    Some(acc) => {
                        next.insert(key, acc.add(&term, &q));
                    }
                    None => {
                        next.insert(key, term);
                    }
                }
            }
        }
        dp = next;
    }
    let full = (1u32 << t) - 1;
    dp.remove(&full).unwrap_or_else(|| Poly::zero(n_vars))
}

struct MinorBudget {
    used: usize,
    cap: usize,
}

impl MinorBudget {
    fn charge(&mut self, amount: usize) -> Result<()> {
        self.used = self.used.saturating_add(amount);
        if self.used > self.cap {
            Err(Error::ResourceLimit {
                what: "minor expansion",
                detail: format!("needs more than {} minors", self.cap),
            })
        } else {
            Ok(())
        }
    }
}

/// All t x t minors of the Jacobian, within budget.
fn minors_level(
    ms: &MomentSystem,
    t: usize,
    budget: &mut MinorBudget,
) -> Result<Vec<PolyQ>> {
    let rows_sets = subsets(ms.n, t);
    let cols_sets = subsets(ms.k, t);
    budget.charge(rows_sets.len() * cols_sets.len())?;
    let mut out = Vec::with_capacity(rows_sets.len() * cols_sets.len());
    for rs in &rows_sets {
        let rs: Vec<usize> = rs.iter().map(|&x| x as usize).collect();
        for cs in &cols_sets {
            let cs: Vec<usize> = cs.iter().map(|&x| x as usize).collect();
            out.push(minor_q(&ms.jacobian, &rs, &cs));
        }
    }
    Ok(out)
}

/// Exact rank of the Jacobian over the rationals: evaluation at random
/// points gives the floor, and symbolic vanishing of every minor one size up
/// seals the ceiling.
fn symbolic_rank(ms: &MomentSystem, budget: &mut MinorBudget) -> Result<(usize, Vec<Vec<PolyQ>>)> {
    let top = ms.n.min(ms.k);
    let mut r = generic_rank(ms, 0x51ed);
    let mut cache: Vec<Option<Vec<PolyQ>>> = vec![None; top + 1];
    loop {
        if r == top {
            break;
        }
        let level = minors_level(ms, r + 1, budget)?;
        let any_nonzero = level.iter().any(|f| !f.is_zero());
        cache[r + 1] = Some(level);
        if any_nonzero {
            r += 1;
        } else {
            break;
        }
    }
    let mut levels = Vec::with_capacity(r);
    for t in 1..=r {
        let lvl = match cache[t].take() {
            Some(l) => l,
            None => minors_level(ms, t, budget)?,
        };
        levels.push(lvl);
    }
    Ok((r, levels))
}

/// For each minor size t up to the number of generators k, the codimension
/// of the ideal of t x t minors must reach k - t + 1 + d. Minor ideals above
/// the actual Jacobian rank are zero, so their rows fail automatically: the
/// condition can only hold for generically locally free actions, matching
/// the convention that d-modularity requires a nonempty principal stratum.
pub fn fd_condition_check(ms: &MomentSystem, d: i64, cfg: &CertConfig) -> Result<FdOutcome> {
    let (f1, f2) = cfg.fields()?;
    let mut budget = MinorBudget { used: 0, cap: cfg.max_minors };
    let (r, levels) = symbolic_rank(ms, &mut budget)?;
    let mut rows = Vec::with_capacity(ms.k);
    let mut holds = true;
    for t in 1..=ms.k {
        let required = ms.k as i64 - t as i64 + 1 + d;
        let (minors, codim) = match levels.get(t - 1) {
            Some(level) => {
                let codim_for = |fp: &PrimeField| -> Result<i64> {
                    let gens: Result<Vec<PolyFp>> =
                        level.iter().map(|f| poly_mod_p(f, fp)).collect();
                    let gb =
                        groebner_basis(ms.n, &gens?, MonomialOrder::DegRevLex, fp, &cfg.gb_limits)?;
                    Ok(ms.n as i64 - krull_dimension(&gb))
                };
                let codim = require_agreement(
                    "minor ideal codimension",
                    cfg,
                    codim_for(&f1)?,
                    codim_for(&f2)?,
                )?;
                (level.len(), codim)
            }
            // t exceeds the rank: every t x t minor vanishes and the zero
            // ideal has grade zero.
            None => (0, 0),
        };
        let row_holds = codim >= required;
        holds &= row_holds;
        rows.push(FdRow { t, minors, codim, required, holds: row_holds });
    }
    Ok(FdOutcome {
        d,
        jacobian_rank: r,
        locally_free: r == ms.k,
        rows,
        holds,
    })
}

// ---------------------------------------------------------------------------
// Component splitting by saturation at a witness hypersurface.

#[derive(Clone, Debug, Serialize)]
pub struct ComponentOutcome {
    pub dim_total: i64,
    /// Dimension after adding the witness equation.
    pub dim_with_witness: i64,
    /// Dimension after removing everything supported on the witness.
    pub dim_saturation: i64,
    pub saturation_strict: bool,
    /// The witness vanishes on the whole zero scheme.
    pub witness_covers_everything: bool,
    /// Both the part inside the witness hypersurface and the part away from
    /// it reach the total dimension, so the scheme splits into at least two
    /// top-dimensional components.
    pub reducible_certified: bool,
}

pub fn component_analysis(
    ms: &MomentSystem,
    witness: &PolyQ,
    cfg: &CertConfig,
) -> Result<ComponentOutcome> {
    if witness.n_vars != 2 * ms.n {
        return Err(Error::RingMismatch(format!(
            "witness has {} variables, expected {}",
            witness.n_vars,
            2 * ms.n
        )));
    }
    if witness.is_zero() {
        return Err(Error::InvalidSpec("witness polynomial is zero".into()));
    }
    let (f1, f2) = cfg.fields()?;
    let run = |fp: &PrimeField| -> Result<(i64, i64, i64, bool, bool)> {
        let gens = ms.quadrics_mod_p(fp)?;
        let f = poly_mod_p(witness, fp)?;
        let gb = groebner_basis(2 * ms.n, &gens, MonomialOrder::DegRevLex, fp, &cfg.gb_limits)?;
        let dim_total = krull_dimension(&gb);
        let mut with_f = gens.clone();
        with_f.push(f.clone());
        let gb_with =
            groebner_basis(2 * ms.n, &with_f, MonomialOrder::DegRevLex, fp, &cfg.gb_limits)?;
        let dim_with = krull_dimension(&gb_with);
        let sat = saturate(&gens, &f, fp, &cfg.gb_limits)?;
        let strict = sat != gb.basis;
        let sat_gb = GroebnerBasis {
            field: *fp,
            order: MonomialOrder::DegRevLex,
            n_vars: 2 * ms.n,
            basis: sat,
        };
        let covers = sat_gb.contains_unit();
        let dim_sat = krull_dimension(&sat_gb);
        Ok((dim_total, dim_with, dim_sat, strict, covers))
    };
    let agreed = require_agreement("component analysis", cfg, run(&f1)?, run(&f2)?)?;
    let (dim_total, dim_with_witness, dim_saturation, saturation_strict, covers) = agreed;
    let reducible_certified = dim_with_witness == dim_total && dim_saturation == dim_total;
    Ok(ComponentOutcome {
        dim_total,
        dim_with_witness,
        dim_saturation,
        saturation_strict,
        witness_covers_everything: covers,
        reducible_certified,
    })
}

// ---------------------------------------------------------------------------
// Cross-checking the combinatorial verdicts against the symbolic ones.

#[derive(Clone, Debug, Serialize)]
pub struct ModularityCheckRow {
    pub d: i64,
    pub fd_holds: bool,
    pub modular: bool,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularityConsistency {
    pub locally_free: bool,
    pub regular: bool,
    /// For a torus action the quadrics are a regular sequence exactly when
    /// the action is generically locally free.
    pub regular_agrees: bool,
    pub rows: Vec<ModularityCheckRow>,
    pub consistent: bool,
}

/// Run the symbolic side against a finished torus analysis: the dimension
/// test must match local freeness, and for locally free actions the minor
/// bounds at each requested d must match the stratum verdict.
pub fn modularity_consistency(
    analysis: &TorusAnalysis,
    ms: &MomentSystem,
    ds: &[i64],
    cfg: &CertConfig,
) -> Result<ModularityConsistency> {
    let reg = regular_sequence_check(ms, cfg)?;
    let regular_agrees = reg.is_regular == analysis.locally_free;
    let mut rows = Vec::new();
    let mut consistent = regular_agrees;
    if analysis.locally_free {
        for &d in ds {
            let fd = fd_condition_check(ms, d, cfg)?;
            let modular = analysis.strata.max_modular.map_or(false, |m| m >= d);
            let agree = fd.holds == modular;
            consistent &= agree;
            rows.push(ModularityCheckRow { d, fd_holds: fd.holds, modular, agree });
        }
    }
    Ok(ModularityConsistency {
        locally_free: analysis.locally_free,
        regular: reg.is_regular,
        regular_agrees,
        rows,
        consistent,
    })
}
