//! Norm-minimizing flow along the noncompact directions of the group: from a
//! start vector, repeatedly move by exp(eta * sum_a rho_a(v) * iB_a), which
//! is the steepest-descent direction for |v|^2 along the orbit. The flow
//! either converges to a vector with vanishing real moment (the orbit is
//! closed and the limit is a minimal vector) or the norm collapses toward
//! zero (the orbit closure contains the origin).
//!
//! Descent bookkeeping: dF/deta at eta = 0 equals -4 ||rho||^2, so an Armijo
//! test against that slope guarantees monotone progress; the step grows on
//! acceptance so null-cone runs reach machine-zero norms in logarithmic time.

use crate::error::{Error, Result};
use crate::moment::{apply_c, real_moment};
use crate::repspec::{cmat_mul, LieAction, MatC};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct FlowConfig {
    pub step0: f64,
    pub backtrack: f64,
    pub grow: f64,
    pub armijo: f64,
    /// Stop when ||rho|| is below this both absolutely and relative to
    /// |v|^2; the second test keeps shrinking null-cone trajectories from
    /// masquerading as converged.
    pub tol: f64,
    pub max_iter: usize,
    /// Declare the null cone when |v| falls below this fraction of |v0|.
    pub null_threshold: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            step0: 1.0,
            backtrack: 0.5,
            grow: 2.0,
            armijo: 1e-4,
            tol: 1e-10,
            max_iter: 100_000,
            null_threshold: 1e-8,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FlowStatus {
    Converged,
    NullCone,
    MaxIter,
}

impl FlowStatus {
    pub fn name(&self) -> &'static str {
        match self {
            FlowStatus::Converged => "converged",
            FlowStatus::NullCone => "null_cone",
            FlowStatus::MaxIter => "max_iter",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TraceRow {
    pub iter: usize,
    pub norm_sq: f64,
    pub moment_norm: f64,
    pub step: f64,
}

#[derive(Clone, Debug)]
pub struct MinimalVectorResult {
    pub status: FlowStatus,
    pub v: Vec<Complex64>,
    pub norm_start: f64,
    pub norm_end: f64,
    /// ||rho(v)||_2 at the final vector.
    pub moment_norm: f64,
    /// max_a |(conj v)^T B_a v|; zero exactly on minimal vectors.
    pub membership_defect: f64,
    pub iterations: usize,
    pub trace: Option<Vec<TraceRow>>,
}

fn cmat_identity(n: usize) -> MatC {
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

fn cmat_add_scaled(a: &MatC, b: &MatC, s: Complex64) -> MatC {
    a.iter()
        .zip(b.iter())
        .map(|(ra, rb)| ra.iter().zip(rb.iter()).map(|(x, y)| x + s * y).collect())
        .collect()
}

fn cmat_scale(a: &MatC, s: f64) -> MatC {
    a.iter()
        .map(|r| r.iter().map(|x| x * s).collect())
        .collect()
}

fn frob(a: &MatC) -> f64 {
    a.iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Matrix exponential by scaling and squaring with a Taylor tail.
pub fn expm(m: &MatC) -> MatC {
    let n = m.len();
    let norm = frob(m);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = cmat_scale(m, 1.0 / f64::powi(2.0, s as i32));
    let mut result = cmat_identity(n);
    let mut term = cmat_identity(n);
    for j in 1..=30 {
        term = cmat_mul(&term, &scaled);
        term = cmat_scale(&term, 1.0 / j as f64);
        result = cmat_add_scaled(&result, &term, Complex64::new(1.0, 0.0));
        if frob(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        result = cmat_mul(&result, &result);
    }
    result
}

fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// max_a |(conj v)^T B_a v| = 2 max_a |rho_a(v)|.
pub fn membership_defect(action: &LieAction, v: &[Complex64]) -> f64 {
    action
        .compact
        .iter()
        .map(|b| {
            let bv = apply_c(b, v);
            let z: Complex64 = bv.iter().zip(v).map(|(u, w)| u * w.conj()).sum();
            z.norm()
        })
        .fold(0.0, f64::max)
}

pub fn kempf_ness_flow(
    action: &LieAction,
    v0: &[Complex64],
    cfg: &FlowConfig,
    want_trace: bool,
) -> Result<MinimalVectorResult> {
    if v0.len() != action.dim_v {
        return Err(Error::InvalidSpec(format!(
            "start vector has {} coordinates, action expects {}",
            v0.len(),
            action.dim_v
        )));
    }
    let k = action.dim_g();
    let n = action.dim_v;
    let norm_start = norm_sq(v0).sqrt();
    if norm_start == 0.0 {
        return Err(Error::InvalidSpec("start vector is zero".into()));
    }
    // exp of eta * sum rho_a iB_a: precompute iB_a once.
    let directions: Vec<MatC> = action
        .compact
        .iter()
        .map(|b| {
            b.iter()
                .map(|row| row.iter().map(|z| Complex64::new(0.0, 1.0) * z).collect())
                .collect()
        })
        .collect();

    let mut v = v0.to_vec();
    let mut f = norm_sq(&v);
    let mut eta = cfg.step0;
    let mut trace: Option<Vec<TraceRow>> = if want_trace { Some(Vec::new()) } else { None };
    let mut status = FlowStatus::MaxIter;
    let mut iterations = cfg.max_iter;

    for iter in 0..cfg.max_iter {
        let nv = f.sqrt();
        if nv < cfg.null_threshold * norm_start {
            status = FlowStatus::NullCone;
            iterations = iter;
            break;
        }
        let rho = real_moment(action, &v)?;
        let rho_norm_sq: f64 = rho.iter().map(|r| r * r).sum();
        let rho_norm = rho_norm_sq.sqrt();
        if let Some(t) = trace.as_mut() {
            t.push(TraceRow { iter, norm_sq: f, moment_norm: rho_norm, step: eta });
        }
        if rho_norm <= cfg.tol && rho_norm <= cfg.tol * f {
            status = FlowStatus::Converged;
            iterations = iter;
            break;
        }
        // One steepest-descent step with Armijo backtracking.
        let mut generator = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for a in 0..k {
            if rho[a] != 0.0 {
                generator = cmat_add_scaled(&generator, &directions[a], Complex64::new(rho[a], 0.0));
            }
        }
        let mut accepted = false;
        while eta > 1e-18 {
            let g = expm(&cmat_scale(&generator, eta));
            let v_next = apply_c(&g, &v);
            let f_next = norm_sq(&v_next);
            let predicted = cfg.armijo * eta * 4.0 * rho_norm_sq;
            // In the convergence tail the true decrease per step is of order
            // eta * ||rho||^2, which drops below one ulp of f long before
            // ||rho|| reaches the tolerance; comparing function values there
            // is rounding noise and stalls the step size. Once the predicted
            // decrease is unmeasurable, accept on a strict drop of the
            // gradient norm instead, which stays resolved in doubles.
            let ok = if predicted >= f * 8.0 * f64::EPSILON {
                f_next <= f - predicted
            } else {
                let rho_next_sq: f64 = real_moment(action, &v_next)?
                    .iter()
                    .map(|r| r * r)
                    .sum();
                rho_next_sq < rho_norm_sq && f_next <= f * (1.0 + 8.0 * f64::EPSILON)
            };
            if ok {
                v = v_next;
                f = f_next;
                eta *= cfg.grow;
                accepted = true;
                break;
            }
            eta *= cfg.backtrack;
        }
        if !accepted {
            // The line search stalled at machine precision; report honestly.
            iterations = iter;
            break;
        }
    }

    let moment_norm = real_moment(action, &v)?
        .iter()
        .map(|r| r * r)
        .sum::<f64>()
        .sqrt();
    Ok(MinimalVectorResult {
        status,
        norm_start,
        norm_end: norm_sq(&v).sqrt(),
        moment_norm,
        membership_defect: membership_defect(action, &v),
        iterations,
        trace,
        v,
    })
}

/// Rank of the differential of the real moment map at v, as a k x 2n real
/// matrix over the coordinates (Re v_j, Im v_j), via singular values.
pub fn rank_sample(action: &LieAction, v: &[Complex64], rel_tol: f64) -> usize {
    let k = action.dim_g();
    let n = action.dim_v;
    let mut rows = Vec::with_capacity(k);
    for b in &action.compact {
        let bv = apply_c(b, v);
        let mut row = Vec::with_capacity(2 * n);
        for z in &bv {
            row.push(z.im);
        }
        for z in &bv {
            row.push(-z.re);
        }
        rows.push(row);
    }
    let mat = DMatrix::from_fn(k, 2 * n, |i, j| rows[i][j]);
    let svd = mat.svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values.iter().filter(|&&s| s > rel_tol * smax).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repspec::{build_sl2, build_torus};
    use crate::torus::WeightMatrix;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn torus(rows: Vec<Vec<i64>>) -> LieAction {
        build_torus(&WeightMatrix::new(rows).unwrap()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn expm_matches_closed_forms() {
        let z = c(0.0, 0.0);
        let zero = vec![vec![z; 2], vec![z; 2]];
        let id = expm(&zero);
        assert!((id[0][0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((id[0][1]).norm() < 1e-15);
        let diag = vec![vec![c(0.3, 0.2), z], vec![z, c(-1.0, 0.7)]];
        let e = expm(&diag);
        assert!((e[0][0] - c(0.3, 0.2).exp()).norm() < 1e-12);
        assert!((e[1][1] - c(-1.0, 0.7).exp()).norm() < 1e-12);
        let nilp = vec![vec![z, c(2.5, -1.0)], vec![z, z]];
        let en = expm(&nilp);
        assert!((en[0][1] - c(2.5, -1.0)).norm() < 1e-12);
        assert!((en[0][0] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn balanced_weight_flow_reaches_the_known_minimum() {
        // |v|^2 along the orbit of (2, 1) is 4s + 1/s in the scaling
        // parameter; the minimum value is 4 at s = 1/2.
        let a = torus(vec![vec![1, -1]]);
        let v0 = [c(2.0, 0.0), c(1.0, 0.0)];
        let out = kempf_ness_flow(&a, &v0, &FlowConfig::default(), true).unwrap();
        assert_eq!(out.status, FlowStatus::Converged);
        assert!((out.norm_end * out.norm_end - 4.0).abs() < 1e-8);
        assert!(out.moment_norm < 1e-9);
        assert!(out.membership_defect < 1e-9);
        // Monotone norm decrease along the accepted steps.
        let trace = out.trace.unwrap();
        for w in trace.windows(2) {
            assert!(w[1].norm_sq <= w[0].norm_sq + 1e-12);
        }
    }

    #[test]
    fn unbalanced_weight_flow_collapses() {
        let a = torus(vec![vec![1, 1]]);
        let v0 = [c(1.0, 0.0), c(1.0, 0.0)];
        let out = kempf_ness_flow(&a, &v0, &FlowConfig::default(), false).unwrap();
        assert_eq!(out.status, FlowStatus::NullCone);
        assert!(out.norm_end < 1e-7 * out.norm_start);
    }

    #[test]
    fn minimal_norm_scales_quadratically_on_the_cone() {
        let a = torus(vec![vec![1, -1]]);
        let base = [c(2.0, 1.0), c(-1.0, 0.5)];
        let r0 = kempf_ness_flow(&a, &base, &FlowConfig::default(), false).unwrap();
        for lambda in [0.5f64, 2.0] {
            let scaled: Vec<Complex64> = base.iter().map(|z| z * lambda).collect();
            let r = kempf_ness_flow(&a, &scaled, &FlowConfig::default(), false).unwrap();
            assert_eq!(r.status, FlowStatus::Converged);
            let ratio = (r.norm_end / r0.norm_end) / lambda;
            assert!((ratio - 1.0).abs() < 1e-6, "lambda {lambda}: ratio {ratio}");
        }
    }

    #[test]
    fn dependent_pair_collapses_and_independent_pair_converges() {
        let a = build_sl2(&[1, 1]).unwrap();
        let dependent = [c(1.0, 0.0), c(0.5, 0.0), c(2.0, 0.0), c(1.0, 0.0)];
        let out = kempf_ness_flow(&a, &dependent, &FlowConfig::default(), false).unwrap();
        assert_eq!(out.status, FlowStatus::NullCone);
        let independent = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let out = kempf_ness_flow(&a, &independent, &FlowConfig::default(), false).unwrap();
        assert_eq!(out.status, FlowStatus::Converged);
        assert!(out.membership_defect < 1e-9);
    }

    #[test]
    fn moment_differential_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let actions = vec![build_sl2(&[2]).unwrap(), torus(vec![vec![1, -1], vec![2, 1]])];
        for a in &actions {
            let v: Vec<Complex64> = (0..a.dim_v)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let h = 1e-6;
            for (ai, b) in a.compact.iter().enumerate() {
                let bv = apply_c(b, &v);
                for j in 0..a.dim_v {
                    // Partial in the real part of v_j.
                    let mut vp = v.clone();
                    vp[j] += c(h, 0.0);
                    let mut vm = v.clone();
                    vm[j] -= c(h, 0.0);
                    let du = (real_moment(a, &vp).unwrap()[ai]
                        - real_moment(a, &vm).unwrap()[ai])
                        / (2.0 * h);
                    assert!((du - bv[j].im).abs() < 1e-5);
                    // Partial in the imaginary part of v_j.
                    let mut vp = v.clone();
                    vp[j] += c(0.0, h);
                    let mut vm = v.clone();
                    vm[j] -= c(0.0, h);
                    let dw = (real_moment(a, &vp).unwrap()[ai]
                        - real_moment(a, &vm).unwrap()[ai])
                        / (2.0 * h);
                    assert!((dw + bv[j].re).abs() < 1e-5);
                }
            }
        }
    }

    #[test]
    fn rank_at_converged_points_matches_the_group_dimension() {
        let a = build_sl2(&[1, 1, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v0: Vec<Complex64> = (0..a.dim_v)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let out = kempf_ness_flow(&a, &v0, &FlowConfig::default(), false).unwrap();
        assert_eq!(out.status, FlowStatus::Converged);
        assert_eq!(rank_sample(&a, &out.v, 1e-8), 3);
    }

    #[test]
    fn zero_start_vector_is_rejected() {
        let a = torus(vec![vec![1, -1]]);
        let v0 = [c(0.0, 0.0), c(0.0, 0.0)];
        assert!(kempf_ness_flow(&a, &v0, &FlowConfig::default(), false).is_err());
    }
}
