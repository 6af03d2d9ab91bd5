//! Torus actions given by an integer weight matrix: stability of the generic
//! orbit, the maximal support carrying a closed orbit, finiteness of generic
//! stabilizers on that support, and the support-stratum dimension counts that
//! decide how far the largeness hierarchy reaches.
//!
//! Everything here is exact: feasibility questions run through the rational
//! simplex in `lp`, ranks through fraction-free integer elimination, and the
//! stratum scan through an incremental integer echelon with gcd
//! normalization.

use crate::error::{Error, Result};
use crate::linalg::rank_int;
use crate::lp::{feasible_geq, feasible_point};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// k weight rows, n coordinate columns; column i is the weight of the i-th
/// coordinate of V.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightMatrix {
    pub k: usize,
    pub n: usize,
    pub entries: Vec<Vec<i64>>,
}

impl WeightMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let k = entries.len();
        if k == 0 {
            return Err(Error::InvalidSpec("weight matrix needs at least one row".into()));
        }
        let n = entries[0].len();
        if n == 0 {
            return Err(Error::InvalidSpec("weight matrix needs at least one column".into()));
        }
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSpec("weight matrix rows differ in length".into()));
        }
        Ok(WeightMatrix { k, n, entries })
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.n == 0 || self.entries.len() != self.k {
            return Err(Error::InvalidSpec("malformed weight matrix".into()));
        }
        if self.entries.iter().any(|r| r.len() != self.n) {
            return Err(Error::InvalidSpec("weight matrix rows differ in length".into()));
        }
        Ok(())
    }

    /// Weight of coordinate i as a column vector of length k.
    pub fn column(&self, i: usize) -> Vec<i64> {
        (0..self.k).map(|a| self.entries[a][i]).collect()
    }

    pub fn rank(&self) -> Result<usize> {
        rank_int(&self.entries)
    }

    pub fn has_zero_column(&self) -> bool {
        (0..self.n).any(|i| (0..self.k).all(|a| self.entries[a][i] == 0))
    }
}

#[derive(Clone, Debug)]
pub struct StabilityOutcome {
    pub stable: bool,
    /// When stable: lambda with every entry >= 1 and W lambda = 0.
    pub positive_relation: Option<Vec<BigRational>>,
    /// When unstable: ell with <alpha_i, ell> >= 0 for all i and total >= 1.
    pub separating_covector: Option<Vec<BigRational>>,
}

fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Pairing <alpha_i, ell> for column i.
fn pair(w: &WeightMatrix, i: usize, ell: &[BigRational]) -> BigRational {
    (0..w.k).map(|a| big(w.entries[a][i]) * &ell[a]).sum()
}

/// Is there a relation sum_i lambda_i alpha_i = 0 with every lambda_i >= 1?
/// Exactly one of the two certificates exists; we find both ways and insist
/// they agree.
pub fn stability_check(w: &WeightMatrix) -> Result<StabilityOutcome> {
    w.validate()?;
    // Substitute lambda = mu + 1, mu >= 0: W mu = -(row sums).
    let a: Vec<Vec<BigRational>> = w
        .entries
        .iter()
        .map(|row| row.iter().map(|&x| big(x)).collect())
        .collect();
    let b: Vec<BigRational> = w
        .entries
        .iter()
        .map(|row| -row.iter().map(|&x| big(x)).sum::<BigRational>())
        .collect();
    let relation = feasible_point(&a, &b).map(|mu| {
        mu.into_iter().map(|m| m + BigRational::one()).collect::<Vec<_>>()
    });
    let covector = covector_for_support(w, &(0..w.n).collect::<Vec<_>>());
    match (&relation, &covector) {
        (Some(lam), None) => {
            debug_assert!(lam.iter().all(|x| *x >= BigRational::one()));
            Ok(StabilityOutcome {
                stable: true,
                positive_relation: relation,
                separating_covector: None,
            })
        }
        (None, Some(ell)) => {
            debug_assert!((0..w.n).all(|i| !pair(w, i, ell).is_negative()));
            Ok(StabilityOutcome {
                stable: false,
                positive_relation: None,
                separating_covector: covector,
            })
        }
        _ => Err(Error::InvalidSpec(
            "stability certificates disagree; simplex inconsistency".into(),
        )),
    }
}

/// A covector ell with <alpha_i, ell> >= 0 on the support and total pairing
/// >= 1, when one exists.
fn covector_for_support(w: &WeightMatrix, support: &[usize]) -> Option<Vec<BigRational>> {
    if support.is_empty() {
        return None;
    }
    let mut m: Vec<Vec<BigRational>> = Vec::with_capacity(support.len() + 1);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(support.len() + 1);
    let mut total = vec![BigRational::zero(); w.k];
    for &i in support {
        let row: Vec<BigRational> = (0..w.k).map(|a| big(w.entries[a][i])).collect();
        for (t, r) in total.iter_mut().zip(row.iter()) {
            *t += r;
        }
        m.push(row);
        rhs.push(BigRational::zero());
    }
    m.push(total);
    rhs.push(BigRational::one());
    feasible_geq(&m, &rhs)
}

#[derive(Clone, Debug)]
pub struct SupportRound {
    pub covector: Vec<BigRational>,
    pub removed: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct StableSupport {
    /// Sorted coordinate indices surviving every removal round.
    pub support: Vec<usize>,
    pub rounds: Vec<SupportRound>,
}

/// Shrink the coordinate set until no covector is nonnegative on it and
/// strictly positive somewhere; what survives is the largest support whose
/// weights admit a positive relation.
pub fn stable_support(w: &WeightMatrix) -> Result<StableSupport> {
    w.validate()?;
    let mut support: Vec<usize> = (0..w.n).collect();
    let mut rounds = Vec::new();
    loop {
        let Some(ell) = covector_for_support(w, &support) else {
            return Ok(StableSupport { support, rounds });
        };
        let removed: Vec<usize> = support
            .iter()
            .copied()
            .filter(|&i| pair(w, i, &ell).is_positive())
            .collect();
        debug_assert!(!removed.is_empty());
        support.retain(|i| !removed.contains(i));
        rounds.push(SupportRound { covector: ell, removed });
    }
}

/// Index of the sublattice of Z^k spanned by the given columns, computed by
/// Euclidean column reduction to lower-triangular form; None when the
/// columns do not span.
pub fn lattice_index(w: &WeightMatrix, cols: &[usize]) -> Result<Option<u64>> {
    let k = w.k;
    let ncols = cols.len();
    if ncols < k {
        return Ok(None);
    }
    let mut m: Vec<Vec<i128>> = (0..k)
        .map(|a| cols.iter().map(|&i| w.entries[a][i] as i128).collect())
        .collect();
    let mut index: i128 = 1;
    for r in 0..k {
        loop {
            let nz: Vec<usize> = (r..ncols).filter(|&c| m[r][c] != 0).collect();
            if nz.is_empty() {
                return Ok(None);
            }
            if nz.len() == 1 {
                let c = nz[0];
                for row in m.iter_mut() {
                    row.swap(r, c);
                }
                index = index
                    .checked_mul(m[r][r].abs())
                    .ok_or(Error::IntOverflow("lattice index"))?;
                break;
            }
            let bc = *nz.iter().min_by_key(|&&c| m[r][c].abs()).unwrap();
            let bv = m[r][bc];
            for &c in &nz {
                if c == bc {
                    continue;
                }
                let q = m[r][c].div_euclid(bv);
                if q == 0 {
                    continue;
                }
                for row in m.iter_mut() {
                    let sub = row[bc]
                        .checked_mul(q)
                        .ok_or(Error::IntOverflow("lattice index"))?;
                    row[c] = row[c]
                        .checked_sub(sub)
                        .ok_or(Error::IntOverflow("lattice index"))?;
                }
            }
        }
    }
    Ok(Some(index as u64))
}

#[derive(Clone, Debug)]
pub struct StratumTable {
    /// dims[j] = dimension of the locus whose support drops the weight rank
    /// by j; None when that locus is empty.
    pub dims: Vec<Option<usize>>,
    /// c[j] = dims[j] - (k - j), the stratum dimension against the expected
    /// orbit dimension there.
    pub c: Vec<Option<i64>>,
    pub weight_rank: usize,
    pub locally_free: bool,
    /// Largest d such that every nonempty stratum with j >= 1 satisfies
    /// c_0 - c_j >= d; None when the action is not generically locally free.
    pub max_modular: Option<i64>,
}

/// Enumerate supports, tracking for each achievable weight rank the largest
/// support attaining it.
pub fn stratum_table(w: &WeightMatrix, max_subsets: u64) -> Result<StratumTable> {
    w.validate()?;
    let (k, n) = (w.k, w.n);
    if n >= 63 || (1u64 << n) > max_subsets {
        return Err(Error::ResourceLimit {
            what: "support enumeration",
            detail: format!("2^{n} supports exceeds cap {max_subsets}"),
        });
    }
    let cols: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..k).map(|a| w.entries[a][i] as i128).collect())
        .collect();
    let mut best: Vec<Option<usize>> = vec![None; k + 1];
    let mut echelon: Vec<(usize, Vec<i128>)> = Vec::new();
    scan_supports(0, 0, &cols, &mut echelon, &mut best)?;
    let weight_rank = (0..=k).rev().find(|&r| best[r].is_some()).unwrap_or(0);
    let locally_free = weight_rank == k;
    let mut dims = vec![None; k + 1];
    let mut c = vec![None; k + 1];
    for j in 0..=k {
        if k - j <= weight_rank {
            if let Some(d) = best[k - j] {
                dims[j] = Some(d);
                c[j] = Some(d as i64 - (k as i64 - j as i64));
            }
        }
    }
    let max_modular = if locally_free {
        let c0 = c[0].expect("full support has full rank");
        (1..=k)
            .filter_map(|j| c[j])
            .map(|cj| c0 - cj)
            .min()
    } else {
        None
    };
    Ok(StratumTable { dims, c, weight_rank, locally_free, max_modular })
}

/// Rows stay sorted by pivot position and have zeros before their pivot;
/// reducing a vector at each stored pivot in ascending order therefore never
/// reintroduces an eliminated entry.
fn scan_supports(
    i: usize,
    size: usize,
    cols: &[Vec<i128>],
    echelon: &mut Vec<(usize, Vec<i128>)>,
    best: &mut [Option<usize>],
) -> Result<()> {
    if i == cols.len() {
        let r = echelon.len();
        if best[r].map_or(true, |b| b < size) {
            best[r] = Some(size);
        }
        return Ok(());
    }
    scan_supports(i + 1, size, cols, echelon, best)?;
    let mut v = cols[i].clone();
    for (p, row) in echelon.iter() {
        if v[*p] != 0 {
            let (a, b) = (row[*p], v[*p]);
            for (vj, rj) in v.iter_mut().zip(row.iter()) {
                let left = vj.checked_mul(a).ok_or(Error::IntOverflow("support scan"))?;
                let right = rj.checked_mul(b).ok_or(Error::IntOverflow("support scan"))?;
                *vj = left.checked_sub(right).ok_or(Error::IntOverflow("support scan"))?;
            }
            let g = v.iter().fold(0i128, |acc, &x| gcd_i128(acc, x));
            if g > 1 {
                for vj in v.iter_mut() {
                    *vj /= g;
                }
            }
        }
    }
    if let Some(p) = v.iter().position(|&x| x != 0) {
        let pos = echelon.partition_point(|(q, _)| *q < p);
        echelon.insert(pos, (p, v));
        scan_supports(i + 1, size + 1, cols, echelon, best)?;
        echelon.remove(pos);
    } else {
        scan_supports(i + 1, size + 1, cols, echelon, best)?;
    }
    Ok(())
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[derive(Clone, Debug)]
pub struct TorusAnalysis {
    pub weights: WeightMatrix,
    pub weight_rank: usize,
    pub locally_free: bool,
    pub trivial_summand: bool,
    pub stability: StabilityOutcome,
    pub support: StableSupport,
    pub fpig: bool,
    pub lattice_index: Option<u64>,
    pub strata: StratumTable,
    pub one_large: bool,
}

/// Full verdict chain for a torus weight matrix.
pub fn analyze(w: &WeightMatrix, max_subsets: u64) -> Result<TorusAnalysis> {
    let stability = stability_check(w)?;
    let support = stable_support(w)?;
    let support_rank = if support.support.is_empty() {
        0
    } else {
        let rows: Vec<Vec<i64>> = (0..w.k)
            .map(|a| support.support.iter().map(|&i| w.entries[a][i]).collect())
            .collect();
        rank_int(&rows)?
    };
    let fpig = support_rank == w.k;
    let lat = if fpig {
        lattice_index(w, &support.support)?
    } else {
        None
    };
    let strata = stratum_table(w, max_subsets)?;
    let one_large = fpig && strata.max_modular.map_or(false, |d| d >= 1);
    Ok(TorusAnalysis {
        weights: w.clone(),
        weight_rank: strata.weight_rank,
        locally_free: strata.locally_free,
        trivial_summand: w.has_zero_column(),
        stability,
        support,
        fpig,
        lattice_index: lat,
        strata,
        one_large,
    })
}

pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(rational_string).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumRow {
    pub j: usize,
    pub dim: Option<usize>,
    pub c: Option<i64>,
}

/// Serializable form of the analysis; rationals appear as strings.
#[derive(Clone, Debug, Serialize)]
pub struct LargenessReport {
    pub k: usize,
    pub n: usize,
    pub weight_rank: usize,
    pub locally_free: bool,
    pub trivial_summand: bool,
    pub stable: bool,
    pub positive_relation: Option<Vec<String>>,
    pub separating_covector: Option<Vec<String>>,
    pub stable_support: Vec<usize>,
    pub fpig: bool,
    pub lattice_index: Option<u64>,
    pub strata: Vec<StratumRow>,
    pub max_modular: Option<i64>,
    pub one_large: bool,
}

impl TorusAnalysis {
    pub fn report(&self) -> LargenessReport {
        LargenessReport {
            k: self.weights.k,
            n: self.weights.n,
            weight_rank: self.weight_rank,
            locally_free: self.locally_free,
            trivial_summand: self.trivial_summand,
            stable: self.stability.stable,
            positive_relation: self.stability.positive_relation.as_deref().map(rational_strings),
            separating_covector: self
                .stability
                .separating_covector
                .as_deref()
                .map(rational_strings),
            stable_support: self.support.support.clone(),
            fpig: self.fpig,
            lattice_index: self.lattice_index,
            strata: (0..=self.weights.k)
                .map(|j| StratumRow { j, dim: self.strata.dims[j], c: self.strata.c[j] })
                .collect(),
            max_modular: self.strata.max_modular,
            one_large: self.one_large,
        }
    }
}
