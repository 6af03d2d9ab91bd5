//! Representation data: a group descriptor plus matrices for a basis of its
//! Lie algebra acting on V, and a skew-hermitian basis of the compact form
//! for the numeric path.
//!
//! The complex basis always has exact rational (in fact integer) entries and
//! is what the symbolic layer consumes. The compact basis may live in a
//! unitarily rescaled coordinate system (the monomial basis of binary forms
//! is not orthonormal for degree >= 2); every symbolic certificate is
//! invariant under that rescaling, and the numeric path is self-consistent.

use crate::error::{Error, Result};
use crate::torus::WeightMatrix;
use num_complex::Complex64;
use num_rational::Rational64;

pub type MatQ = Vec<Vec<Rational64>>;
pub type MatC = Vec<Vec<Complex64>>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    Gl,
    Sl,
    So,
    Sp,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Gl => "gl",
            Family::Sl => "sl",
            Family::So => "so",
            Family::Sp => "sp",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Group {
    Torus { rank: usize },
    Sl2,
    Classical { family: Family, n: usize },
}

/// What to build: the CLI parses its JSON input into this.
#[derive(Clone, Debug)]
pub enum RepSpec {
    Torus { weights: WeightMatrix },
    Sl2 { degrees: Vec<usize> },
    Classical { family: Family, n: usize, p: usize, q: usize },
}

#[derive(Clone, Debug)]
pub struct LieAction {
    pub group: Group,
    pub dim_v: usize,
    /// Basis of the complex Lie algebra acting on V; exact entries.
    pub basis: Vec<MatQ>,
    /// Skew-hermitian basis of the compact real form on the same V (possibly
    /// after a unitary diagonal rescaling of coordinates).
    pub compact: Vec<MatC>,
    /// True when V has a nonzero invariant vector (zero weight column,
    /// degree-zero summand); several classification statements exclude this.
    pub trivial_summand: bool,
}

impl LieAction {
    pub fn dim_g(&self) -> usize {
        self.basis.len()
    }
}

pub fn build(spec: &RepSpec) -> Result<LieAction> {
    match spec {
        RepSpec::Torus { weights } => build_torus(weights),
        RepSpec::Sl2 { degrees } => build_sl2(degrees),
        RepSpec::Classical { family, n, p, q } => build_classical(*family, *n, *p, *q),
    }
}

fn zeros_q(d: usize) -> MatQ {
    vec![vec![Rational64::from_integer(0); d]; d]
}

fn zeros_c(d: usize) -> MatC {
    vec![vec![Complex64::new(0.0, 0.0); d]; d]
}

pub fn build_torus(weights: &WeightMatrix) -> Result<LieAction> {
    weights.validate()?;
    let (k, n) = (weights.k, weights.n);
    let mut basis = Vec::with_capacity(k);
    let mut compact = Vec::with_capacity(k);
    for a in 0..k {
        let mut m = zeros_q(n);
        let mut c = zeros_c(n);
        for i in 0..n {
            m[i][i] = Rational64::from_integer(weights.entries[a][i]);
            c[i][i] = Complex64::new(0.0, weights.entries[a][i] as f64);
        }
        basis.push(m);
        compact.push(c);
    }
    let trivial = (0..n).any(|i| (0..k).all(|a| weights.entries[a][i] == 0));
    Ok(LieAction {
        group: Group::Torus { rank: k },
        dim_v: n,
        basis,
        compact,
        trivial_summand: trivial,
    })
}

/// Binary forms R_j of sl2: basis x^(j-m) y^m for m = 0..j, with
/// e = x d/dy, f = y d/dx, h = x d/dx - y d/dy. Complex basis order (e, f, h).
pub fn build_sl2(degrees: &[usize]) -> Result<LieAction> {
    if degrees.is_empty() {
        return Err(Error::InvalidSpec("sl2 needs at least one summand".into()));
    }
    let dim_v: usize = degrees.iter().map(|&j| j + 1).sum();
    let mut e = zeros_q(dim_v);
    let mut f = zeros_q(dim_v);
    let mut h = zeros_q(dim_v);
    let mut b1 = zeros_c(dim_v); // i h
    let mut b2 = zeros_c(dim_v); // e~ - f~
    let mut b3 = zeros_c(dim_v); // i (e~ + f~)
    let mut off = 0usize;
    for &j in degrees {
        for m in 0..=j {
            let r = off + m;
            h[r][r] = Rational64::from_integer(j as i64 - 2 * m as i64);
            b1[r][r] = Complex64::new(0.0, j as f64 - 2.0 * m as f64);
            if m >= 1 {
                e[r - 1][r] = Rational64::from_integer(m as i64);
                // Unitary normalization: sqrt(m (j - m + 1)).
                let s = ((m * (j - m + 1)) as f64).sqrt();
                b2[r - 1][r] += Complex64::new(s, 0.0);
                b2[r][r - 1] += Complex64::new(-s, 0.0);
                b3[r - 1][r] += Complex64::new(0.0, s);
                b3[r][r - 1] += Complex64::new(0.0, s);
            }
            if m < j {
                f[r + 1][r] = Rational64::from_integer((j - m) as i64);
            }
        }
        off += j + 1;
    }
    Ok(LieAction {
        group: Group::Sl2,
        dim_v,
        basis: vec![e, f, h],
        compact: vec![b1, b2, b3],
        trivial_summand: degrees.contains(&0),
    })
}

/// The classical matrix models: gl/sl/so on p copies of C^n plus q copies of
/// the dual, sp(2n) on p copies of C^(2n). so and sp are self-dual, so q = 0
/// there.
pub fn build_classical(family: Family, n: usize, p: usize, q: usize) -> Result<LieAction> {
    if p + q == 0 {
        return Err(Error::InvalidSpec("need at least one copy of V".into()));
    }
    match family {
        Family::Gl if n < 1 => return Err(Error::InvalidSpec("gl needs n >= 1".into())),
        Family::Sl if n < 2 => return Err(Error::InvalidSpec("sl needs n >= 2".into())),
        Family::So if n < 2 => return Err(Error::InvalidSpec("so needs n >= 2".into())),
        Family::Sp if n < 1 => return Err(Error::InvalidSpec("sp needs n >= 1".into())),
        _ => {}
    }
    if matches!(family, Family::So | Family::Sp) && q != 0 {
        return Err(Error::InvalidSpec(format!(
            "{} is self-dual; use q = 0",
            family.name()
        )));
    }
    let (fundamental, compact_fundamental) = classical_fundamental(family, n);
    let d = fundamental[0].len();
    let dim_v = (p + q) * d;
    let basis: Vec<MatQ> = fundamental
        .iter()
        .map(|m| block_action_q(m, p, q))
        .collect();
    let compact: Vec<MatC> = compact_fundamental
        .iter()
        .map(|b| block_action_c(b, p, q))
        .collect();
    Ok(LieAction {
        group: Group::Classical { family, n },
        dim_v,
        basis,
        compact,
        trivial_summand: false,
    })
}

/// Basis matrices of the algebra on its defining space, complex and compact.
fn classical_fundamental(family: Family, n: usize) -> (Vec<MatQ>, Vec<MatC>) {
    let one = Rational64::from_integer(1);
    let mut cplx: Vec<MatQ> = Vec::new();
    let mut comp: Vec<MatC> = Vec::new();
    let i_unit = Complex64::new(0.0, 1.0);
    let r_unit = Complex64::new(1.0, 0.0);
    match family {
        Family::Gl => {
            for i in 0..n {
                for j in 0..n {
                    let mut m = zeros_q(n);
                    m[i][j] = one;
                    cplx.push(m);
                }
            }
            for j in 0..n {
                let mut b = zeros_c(n);
                b[j][j] = i_unit;
                comp.push(b);
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut b = zeros_c(n);
                    b[i][j] = r_unit;
                    b[j][i] = -r_unit;
                    comp.push(b);
                    let mut b = zeros_c(n);
                    b[i][j] = i_unit;
                    b[j][i] = i_unit;
                    comp.push(b);
                }
            }
        }
        Family::Sl => {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let mut m = zeros_q(n);
                    m[i][j] = one;
                    cplx.push(m);
                }
            }
            for i in 0..(n - 1) {
                let mut m = zeros_q(n);
                m[i][i] = one;
                m[i + 1][i + 1] = -one;
                cplx.push(m);
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut b = zeros_c(n);
                    b[i][j] = r_unit;
                    b[j][i] = -r_unit;
                    comp.push(b);
                    let mut b = zeros_c(n);
                    b[i][j] = i_unit;
                    b[j][i] = i_unit;
                    comp.push(b);
                }
            }
            for i in 0..(n - 1) {
                let mut b = zeros_c(n);
                b[i][i] = i_unit;
                b[i + 1][i + 1] = -i_unit;
                comp.push(b);
            }
        }
        Family::So => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut m = zeros_q(n);
                    m[i][j] = one;
                    m[j][i] = -one;
                    cplx.push(m);
                    let mut b = zeros_c(n);
                    b[i][j] = r_unit;
                    b[j][i] = -r_unit;
                    comp.push(b);
                }
            }
        }
        Family::Sp => {
            // 2n x 2n blocks [[X, Y], [Z, -X^T]] with Y, Z symmetric.
            let d = 2 * n;
            for i in 0..n {
                for j in 0..n {
                    let mut m = zeros_q(d);
                    m[i][j] = one;
                    m[n + j][n + i] = -one;
                    cplx.push(m);
                }
            }
            for i in 0..n {
                for j in i..n {
                    let mut y = zeros_q(d);
                    y[i][n + j] = one;
                    y[j][n + i] = one;
                    cplx.push(y);
                    let mut z = zeros_q(d);
                    z[n + i][j] = one;
                    z[n + j][i] = one;
                    cplx.push(z);
                }
            }
            // Compact form sp(n): [[X, Y], [-conj(Y), conj(X)]] with X
            // skew-hermitian and Y symmetric.
            for j in 0..n {
                let mut b = zeros_c(d);
                b[j][j] = i_unit;
                b[n + j][n + j] = -i_unit;
                comp.push(b);
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut b = zeros_c(d);
                    b[i][j] = r_unit;
                    b[j][i] = -r_unit;
                    b[n + i][n + j] = r_unit;
                    b[n + j][n + i] = -r_unit;
                    comp.push(b);
                    let mut b = zeros_c(d);
                    b[i][j] = i_unit;
                    b[j][i] = i_unit;
                    b[n + i][n + j] = -i_unit;
                    b[n + j][n + i] = -i_unit;
                    comp.push(b);
                }
            }
            for i in 0..n {
                for j in i..n {
                    let mut b = zeros_c(d);
                    b[i][n + j] = r_unit;
                    b[j][n + i] = r_unit;
                    b[n + i][j] = -r_unit;
                    b[n + j][i] = -r_unit;
                    comp.push(b);
                    let mut b = zeros_c(d);
                    b[i][n + j] = i_unit;
                    b[j][n + i] = i_unit;
                    b[n + i][j] = i_unit;
                    b[n + j][i] = i_unit;
                    comp.push(b);
                }
            }
        }
    }
    (cplx, comp)
}

/// Block-diagonal action on p copies of V and q copies of V*: the dual blocks
/// carry -M^T.
fn block_action_q(m: &MatQ, p: usize, q: usize) -> MatQ {
    let d = m.len();
    let total = (p + q) * d;
    let mut out = zeros_q(total);
    for b in 0..p {
        for i in 0..d {
            for j in 0..d {
                out[b * d + i][b * d + j] = m[i][j];
            }
        }
    }
    for b in 0..q {
        let off = (p + b) * d;
        for i in 0..d {
            for j in 0..d {
                out[off + i][off + j] = -m[j][i];
            }
        }
    }
    out
}

fn block_action_c(m: &MatC, p: usize, q: usize) -> MatC {
    let d = m.len();
    let total = (p + q) * d;
    let mut out = zeros_c(total);
    for b in 0..p {
        for i in 0..d {
            for j in 0..d {
                out[b * d + i][b * d + j] = m[i][j];
            }
        }
    }
    for b in 0..q {
        let off = (p + b) * d;
        for i in 0..d {
            for j in 0..d {
                out[off + i][off + j] = -m[j][i];
            }
        }
    }
    out
}

/// Direct sum of two actions of the same group: block-diagonal matrices in
/// argument order.
pub fn direct_sum(a: &LieAction, b: &LieAction) -> Result<LieAction> {
    if a.group != b.group {
        return Err(Error::InvalidSpec(format!(
            "direct sum needs one group acting on both summands, got {:?} and {:?}",
            a.group, b.group
        )));
    }
    let k = a.dim_g();
    let dim = a.dim_v + b.dim_v;
    let mut basis = Vec::with_capacity(k);
    let mut compact = Vec::with_capacity(k);
    for t in 0..k {
        let mut m = zeros_q(dim);
        let mut c = zeros_c(dim);
        for i in 0..a.dim_v {
            for j in 0..a.dim_v {
                m[i][j] = a.basis[t][i][j];
                c[i][j] = a.compact[t][i][j];
            }
        }
        for i in 0..b.dim_v {
            for j in 0..b.dim_v {
                m[a.dim_v + i][a.dim_v + j] = b.basis[t][i][j];
                c[a.dim_v + i][a.dim_v + j] = b.compact[t][i][j];
            }
        }
        basis.push(m);
        compact.push(c);
    }
    Ok(LieAction {
        group: a.group.clone(),
        dim_v: dim,
        basis,
        compact,
        trivial_summand: a.trivial_summand || b.trivial_summand,
    })
}

// Small exact helpers for the structure tests below and for the moment layer.

pub fn mat_mul_q(a: &MatQ, b: &MatQ) -> MatQ {
    let n = a.len();
    let mut out = zeros_q(n);
    for i in 0..n {
        for l in 0..n {
            if a[i][l] != Rational64::from_integer(0) {
                for j in 0..n {
                    out[i][j] += a[i][l] * b[l][j];
                }
            }
        }
    }
    out
}

pub fn bracket_q(a: &MatQ, b: &MatQ) -> MatQ {
    let ab = mat_mul_q(a, b);
    let ba = mat_mul_q(b, a);
    let n = a.len();
    let mut out = zeros_q(n);
    for i in 0..n {
        for j in 0..n {
            out[i][j] = ab[i][j] - ba[i][j];
        }
    }
    out
}

pub fn cmat_mul(a: &MatC, b: &MatC) -> MatC {
    let n = a.len();
    let mut out = zeros_c(n);
    for i in 0..n {
        for l in 0..n {
            if a[i][l] != Complex64::new(0.0, 0.0) {
                for j in 0..n {
                    out[i][j] += a[i][l] * b[l][j];
                }
            }
        }
    }
    out
}

/// Max-norm crossing of B + B^dagger; zero for skew-hermitian matrices.
pub fn skew_hermitian_defect(b: &MatC) -> f64 {
    let n = b.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let v = b[i][j] + b[j][i].conj();
            worst = worst.max(v.norm());
        }
    }
    worst
}

/// Rank over Q of the span of the given matrices, by vectorizing.
pub fn span_rank_q(mats: &[MatQ]) -> usize {
    let rows: Vec<Vec<num_rational::BigRational>> = mats
        .iter()
        .map(|m| {
            m.iter()
                .flatten()
                .map(|r| {
                    num_rational::BigRational::new(
                        num_bigint::BigInt::from(*r.numer()),
                        num_bigint::BigInt::from(*r.denom()),
                    )
                })
                .collect()
        })
        .collect();
    crate::linalg::rank_rational(&rows)
}

/// True when every bracket of basis elements stays inside their span.
pub fn bracket_closed(action: &LieAction) -> bool {
    let k = action.dim_g();
    let base_rank = span_rank_q(&action.basis);
    if base_rank != k {
        return false;
    }
    let mut all = action.basis.clone();
    for i in 0..k {
        for j in (i + 1)..k {
            all.push(bracket_q(&action.basis[i], &action.basis[j]));
        }
    }
    span_rank_q(&all) == k
}
