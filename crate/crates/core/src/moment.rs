//! The quadratic component functions attached to an action: mu_a pairs the
//! coordinates of V against those of V* through the basis matrix A_a, giving
//! k quadrics in x_1..x_n, y_1..y_n. Their common zero locus and the ideal
//! they generate drive every symbolic certificate downstream.
//!
//! The numeric counterpart rho lives on V alone through the compact basis;
//! `real_complex_defect` ties the two together by the identity
//! (conj v)^T B v = 2i rho(v).

use crate::error::{Error, Result};
use crate::linalg::rank_rational;
use crate::poly::{Monomial, Poly};
use crate::repspec::{LieAction, MatC};
use crate::ring::{rational_mod_p, PrimeField, Rationals};
use crate::{PolyFp, PolyQ};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bigq(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

#[derive(Clone, Debug)]
pub struct MomentSystem {
    pub n: usize,
    pub k: usize,
    /// Component a in 2n variables, x_1..x_n then y_1..y_n:
    /// sum_{i,j} y_i (A_a)_{ij} x_j.
    pub quadrics: Vec<PolyQ>,
    /// Row i, column a holds (A_a x)_i, a linear form in the x variables
    /// only; these are the partials of the quadrics in the y directions.
    pub jacobian: Vec<Vec<PolyQ>>,
}

pub fn moment_system(action: &LieAction) -> MomentSystem {
    let n = action.dim_v;
    let k = action.dim_g();
    let q = Rationals;
    let mut quadrics = Vec::with_capacity(k);
    for a in 0..k {
        let mut f = Poly::zero(2 * n);
        for i in 0..n {
            for j in 0..n {
                let c = action.basis[a][i][j];
                if !c.is_zero() {
                    let mut exps = vec![0u16; 2 * n];
                    exps[j] += 1;
                    exps[n + i] += 1;
                    f.add_term(Monomial::from_exps(&exps), bigq(c), &q);
                }
            }
        }
        quadrics.push(f);
    }
    let mut jacobian = vec![vec![Poly::zero(n); k]; n];
    for a in 0..k {
        for i in 0..n {
            let mut f = Poly::zero(n);
            for j in 0..n {
                let c = action.basis[a][i][j];
                if !c.is_zero() {
                    f.add_term(Monomial::var(n, j), bigq(c), &q);
                }
            }
            jacobian[i][a] = f;
        }
    }
    MomentSystem { n, k, quadrics, jacobian }
}

pub fn poly_mod_p(f: &PolyQ, fp: &PrimeField) -> Result<PolyFp> {
    let mut out = Poly::zero(f.n_vars);
    for (m, c) in f.terms.iter() {
        let r = rational_mod_p(fp, c)?;
        out.add_term(m.clone(), r, fp);
    }
    Ok(out)
}

impl MomentSystem {
    pub fn quadrics_mod_p(&self, fp: &PrimeField) -> Result<Vec<PolyFp>> {
        self.quadrics.iter().map(|f| poly_mod_p(f, fp)).collect()
    }

    pub fn jacobian_mod_p(&self, fp: &PrimeField) -> Result<Vec<Vec<PolyFp>>> {
        self.jacobian
            .iter()
            .map(|row| row.iter().map(|f| poly_mod_p(f, fp)).collect())
            .collect()
    }
}

/// Variable namer for display: x1..xn then y1..yn.
pub fn xy_names(n: usize) -> impl Fn(usize) -> String {
    move |i| {
        if i < n {
            format!("x{}", i + 1)
        } else {
            format!("y{}", i - n + 1)
        }
    }
}

fn eval_at(f: &PolyQ, pt: &[BigRational]) -> BigRational {
    f.eval(
        pt,
        |c| c.clone(),
        |a, b| a + b,
        |a, b| a * b,
        BigRational::zero(),
    )
}

/// Rank of the Jacobian at random integer points; the orbit dimension
/// through a generic point of V. Three samples vote (any sample only ever
/// undershoots, so ties break upward).
pub fn generic_rank(ms: &MomentSystem, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ranks = Vec::with_capacity(3);
    for _ in 0..3 {
        let pt: Vec<BigRational> = (0..ms.n)
            .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-10_000i64..=10_000))))
            .collect();
        let rows: Vec<Vec<BigRational>> = (0..ms.n)
            .map(|i| (0..ms.k).map(|a| eval_at(&ms.jacobian[i][a], &pt)).collect())
            .collect();
        ranks.push(rank_rational(&rows));
    }
    if ranks[0] == ranks[1] || ranks[0] == ranks[2] {
        ranks[0]
    } else if ranks[1] == ranks[2] {
        ranks[1]
    } else {
        *ranks.iter().max().unwrap()
    }
}

pub fn apply_c(m: &MatC, v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    (0..n)
        .map(|i| (0..n).map(|j| m[i][j] * v[j]).sum())
        .collect()
}

/// rho_a(v) = (-i/2) <B_a v, v> with the inner product conjugate-linear in
/// its second slot. A coordinate of torus weight one gives +|z|^2 / 2; that
/// pins every other sign in the numeric layer.
pub fn real_moment(action: &LieAction, v: &[Complex64]) -> Result<Vec<f64>> {
    if v.len() != action.dim_v {
        return Err(Error::InvalidSpec(format!(
            "point has {} coordinates, action expects {}",
            v.len(),
            action.dim_v
        )));
    }
    let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    action
        .compact
        .iter()
        .map(|b| {
            let bv = apply_c(b, v);
            let z: Complex64 = bv.iter().zip(v).map(|(u, w)| u * w.conj()).sum();
            let rho = Complex64::new(0.0, -0.5) * z;
            if rho.im.abs() > 1e-8 * (1.0 + norm2) {
                return Err(Error::NotReal { imag: rho.im });
            }
            Ok(rho.re)
        })
        .collect()
}

/// Largest deviation from (conj v)^T B_a v = 2i rho_a(v) across the compact
/// basis; zero up to rounding whenever the compact matrices are genuinely
/// skew-hermitian.
pub fn real_complex_defect(action: &LieAction, v: &[Complex64]) -> Result<f64> {
    let rho = real_moment(action, v)?;
    let mut worst = 0.0f64;
    for (b, r) in action.compact.iter().zip(rho.iter()) {
        let bv = apply_c(b, v);
        let z: Complex64 = bv.iter().zip(v).map(|(u, w)| u * w.conj()).sum();
        let expect = Complex64::new(0.0, 2.0 * r);
        worst = worst.max((z - expect).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repspec::{build_classical, build_sl2, build_torus, Family};
    use crate::torus::WeightMatrix;

    fn quad(n: usize, terms: &[(i64, usize, usize)]) -> PolyQ {
        // terms: (coefficient, x index, y index), both zero-based
        let q = Rationals;
        let mut f = Poly::zero(2 * n);
        for &(c, xi, yi) in terms {
            let mut exps = vec![0u16; 2 * n];
            exps[xi] += 1;
            exps[n + yi] += 1;
            f.add_term(
                Monomial::from_exps(&exps),
                BigRational::from_integer(BigInt::from(c)),
                &q,
            );
        }
        f
    }

    #[test]
    fn one_dimensional_binary_form_has_the_known_components() {
        let a = build_sl2(&[1]).unwrap();
        let ms = moment_system(&a);
        assert_eq!(ms.quadrics[0], quad(2, &[(1, 1, 0)])); // y1 x2
        assert_eq!(ms.quadrics[1], quad(2, &[(1, 0, 1)])); // y2 x1
        assert_eq!(ms.quadrics[2], quad(2, &[(1, 0, 0), (-1, 1, 1)])); // x1 y1 - x2 y2
        assert_eq!(generic_rank(&ms, 7), 2);
    }

    #[test]
    fn quadrics_reassemble_from_jacobian_columns() {
        let q = Rationals;
        let actions = vec![
            build_torus(&WeightMatrix::new(vec![vec![1, -1, 2], vec![0, 3, 1]]).unwrap()).unwrap(),
            build_sl2(&[2]).unwrap(),
            build_classical(Family::Gl, 2, 1, 1).unwrap(),
        ];
        for action in &actions {
            let ms = moment_system(action);
            for a in 0..ms.k {
                let mut rebuilt = Poly::zero(2 * ms.n);
                for i in 0..ms.n {
                    let lifted = ms.jacobian[i][a].extend_vars(ms.n);
                    let yi = Poly::term(
                        2 * ms.n,
                        BigRational::from_integer(BigInt::from(1)),
                        Monomial::var(2 * ms.n, ms.n + i),
                        &q,
                    );
                    rebuilt = rebuilt.add(&lifted.mul(&yi, &q), &q);
                }
                assert_eq!(rebuilt, ms.quadrics[a]);
            }
        }
    }

    #[test]
    fn generic_rank_matches_orbit_dimensions() {
        let t = build_torus(&WeightMatrix::new(vec![vec![1, -1]]).unwrap()).unwrap();
        assert_eq!(generic_rank(&moment_system(&t), 1), 1);
        // gl(2) on a vector and a covector: generic stabilizer is the
        // one-parameter scaling transverse to the pairing.
        let g = build_classical(Family::Gl, 2, 1, 1).unwrap();
        assert_eq!(generic_rank(&moment_system(&g), 1), 3);
        let s = build_sl2(&[3]).unwrap();
        assert_eq!(generic_rank(&moment_system(&s), 1), 3);
    }

    #[test]
    fn real_moment_follows_the_weight_sign_convention() {
        let t = build_torus(&WeightMatrix::new(vec![vec![1, -1]]).unwrap()).unwrap();
        let v = [Complex64::new(3.0, 0.0), Complex64::new(0.0, 2.0)];
        let rho = real_moment(&t, &v).unwrap();
        assert!((rho[0] - (9.0 - 4.0) / 2.0).abs() < 1e-12);
        let w1 = build_torus(&WeightMatrix::new(vec![vec![1]]).unwrap()).unwrap();
        let z = [Complex64::new(1.0, 1.0)];
        let r = real_moment(&w1, &z).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-12); // |z|^2 / 2 = 1
    }

    #[test]
    fn complex_and_real_moments_agree_through_the_2i_bridge() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let actions = vec![
            build_torus(&WeightMatrix::new(vec![vec![2, -1, 0], vec![1, 1, -3]]).unwrap()).unwrap(),
            build_sl2(&[1]).unwrap(),
            build_sl2(&[2, 3]).unwrap(),
            build_classical(Family::Sp, 2, 1, 0).unwrap(),
            build_classical(Family::So, 3, 1, 0).unwrap(),
        ];
        for action in &actions {
            for _ in 0..5 {
                let v: Vec<Complex64> = (0..action.dim_v)
                    .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                    .collect();
                assert!(real_complex_defect(action, &v).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn non_skew_matrices_are_rejected() {
        let mut a = build_torus(&WeightMatrix::new(vec![vec![1]]).unwrap()).unwrap();
        a.compact[0][0][0] = Complex64::new(1.0, 0.0);
        let v = [Complex64::new(1.0, 0.0)];
        assert!(matches!(real_moment(&a, &v), Err(Error::NotReal { .. })));
    }
}
