//! Lelong constants, bounds on `L(∇)`, and the arithmetic Bernstein–Kushnirenko inequality.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::divisor::normalized_abs;
use crate::error::{Error, Result};
use crate::height::canonical_height_point;
use crate::intersection::{mixed_volume, mixed_volume_on_fan};
use crate::lattice::{Int, Rat};
use crate::laurent::LaurentPolynomial;
use crate::mahler::{mahler_measure, MahlerEstimate, MahlerOptions};
use crate::polytope::{factorial, newton_polytope, LatticePolytope};

#[derive(Clone, Debug, PartialEq)]
pub struct LelongConstants {
    pub n: usize,
    /// `(1/2) sum_{i < n} 1/i`.
    pub c: Rat,
    /// `sum_{i <= 2n-2} 1/i + sum_{i >= 2n-1} 1/(i 2^i)`.
    pub c_prime: f64,
}

impl LelongConstants {
    pub fn total(&self) -> f64 {
        self.c.to_f64().unwrap() + self.c_prime
    }
}

fn harmonic(n: usize) -> Rat {
    (1..=n).map(|i| Rat::new(Int::one(), Int::from(i))).sum()
}

pub fn lelong_constants(n: usize) -> Result<LelongConstants> {
    if n == 0 {
        return Err(Error::Domain("Lelong constants need n >= 1".into()));
    }
    let c = harmonic(n - 1) / Rat::from_integer(Int::from(2));
    let head = 2 * n - 2;
    // sum_{i >= 1} 1/(i 2^i) = ln 2
    let partial: Rat = (1..=head).map(|i| Rat::new(Int::one(), Int::from(i) << i)).sum();
    let c_prime = harmonic(head).to_f64().unwrap() + (LN_2 - partial.to_f64().unwrap());
    Ok(LelongConstants { n, c, c_prime })
}

/// `C_n'` with the tail `sum 1/(i 2^i)` truncated after `depth` terms.
pub fn lelong_c_prime_truncated(n: usize, depth: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("Lelong constants need n >= 1".into()));
    }
    let head = 2 * n - 2;
    let tail: f64 = (head + 1..=head + depth).rev().map(|i| 1.0 / (i as f64 * 2f64.powi(i as i32))).sum();
    Ok(harmonic(head).to_f64().unwrap() + tail)
}

/// `(C_d + C_d') N(∇)` with `d` the dimension of `∇` in its own lattice.
pub fn bound_l(polytope: &LatticePolytope) -> Result<f64> {
    let reduced = polytope.reduce_to_span();
    if reduced.dim() == 0 {
        return Ok(0.0);
    }
    let norm = reduced.norm()?;
    Ok(lelong_constants(reduced.dim())?.total() * norm.to_f64().unwrap())
}

/// Empirical lower bound for `L(∇)`: the best of `samples` random sections with
/// `±1` coefficients, sup norms taken over `grid^d` unit-torus points and as many
/// random points of the open torus, less `M(s)` plus its error heuristic.
pub fn estimate_l_lower(polytope: &LatticePolytope, samples: usize, grid: usize, seed: u64) -> Result<f64> {
    let reduced = polytope.reduce_to_span();
    let d = reduced.dim();
    if d == 0 {
        return Ok(0.0);
    }
    let points = reduced.lattice_points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = grid.max(1);
    let count = grid.saturating_pow(d as u32);
    let mut probes: Vec<(Vec<f64>, Vec<Complex64>)> = Vec::with_capacity(2 * count);
    for k in 0..count {
        let mut f = k;
        let angles: Vec<Complex64> = (0..d)
            .map(|_| {
                let j = f % grid;
                f /= grid;
                Complex64::from_polar(1.0, 2.0 * PI * j as f64 / grid as f64)
            })
            .collect();
        probes.push((vec![0.0; d], angles));
    }
    for _ in 0..count {
        let logs = (0..d).map(|_| rng.random_range(-4.0..4.0)).collect();
        let angles = (0..d).map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))).collect();
        probes.push((logs, angles));
    }
    let sections: Vec<LaurentPolynomial> = (0..samples)
        .map(|_| {
            let keep = rng.random_range(1..=points.len());
            let mut chosen: Vec<usize> = (0..points.len()).collect();
            for i in 0..keep {
                let j = rng.random_range(i..points.len());
                chosen.swap(i, j);
            }
            let terms = chosen[..keep].iter().map(|&i| {
                let c = if rng.random_bool(0.5) { 1 } else { -1 };
                (points[i].clone(), Rat::from_integer(Int::from(c)))
            });
            LaurentPolynomial::from_terms(d, terms).expect("same dimension")
        })
        .collect();
    let opts = MahlerOptions { tol: 1e-5, max_points: 1 << 20, ..Default::default() };
    let best = sections
        .par_iter()
        .map(|s| {
            let m = mahler_measure(s, &opts)?;
            if !m.error.is_finite() {
                return Ok(f64::NEG_INFINITY);
            }
            let sup = probes.iter().map(|(logs, x)| normalized_abs(s, &reduced, x, logs)).fold(0.0, f64::max);
            Ok(sup.ln() - (m.value + m.error))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(best)
}

/// Which polytope supplied the bound on `L(∇_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LSource {
    /// `∇_i` itself is absolutely simple.
    Own,
    /// `L(∇_i) <= L(∇)` with `∇` absolutely simple.
    Total,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LBound {
    pub value: f64,
    pub source: LSource,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BkReport {
    /// `V(∇, ∇_1, ..., ^∇_i, ..., ∇_d)`.
    pub volumes: Vec<Rat>,
    pub mahler: Vec<MahlerEstimate>,
    /// `None` when the matching volume vanishes.
    pub l_bounds: Vec<Option<LBound>>,
    pub rhs: f64,
    /// `sum V_i err(M(P_i))`.
    pub rhs_error: f64,
    /// `d! V(∇_1, ..., ∇_d)`.
    pub bkk: Int,
}

fn system_polytopes(polys: &[LaurentPolynomial]) -> Result<Vec<LatticePolytope>> {
    let d = polys.len();
    if d == 0 {
        return Err(Error::Domain("empty system".into()));
    }
    if let Some(p) = polys.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
    }
    polys.iter().map(newton_polytope).collect()
}

fn minkowski_total(polys: &[LatticePolytope]) -> Result<LatticePolytope> {
    polys[1..].iter().try_fold(polys[0].clone(), |acc, p| acc.minkowski_sum(p))
}

/// Right-hand side `sum_i V(∇, ∇_1, ..., ^∇_i, ..., ∇_d) (M(P_i) + L(∇_i))`.
pub fn bk_bound(polys: &[LaurentPolynomial], opts: &MahlerOptions) -> Result<BkReport> {
    let nablas = system_polytopes(polys)?;
    if let Some(p) = polys.iter().find(|p| !p.has_integer_coefficients()) {
        return Err(Error::Domain(format!("coefficients of {p} are not integers")));
    }
    let d = polys.len();
    let total = minkowski_total(&nablas)?;
    let mahler = polys.par_iter().map(|p| mahler_measure(p, opts)).collect::<Result<Vec<_>>>()?;
    if !total.is_full_dimensional() {
        return Ok(BkReport {
            volumes: vec![Rat::zero(); d],
            mahler,
            l_bounds: vec![None; d],
            rhs: 0.0,
            rhs_error: 0.0,
            bkk: Int::zero(),
        });
    }
    let (fan, _) = total.normal_fan()?;
    let fan = fan.regularize()?;
    let volumes = (0..d)
        .into_par_iter()
        .map(|i| {
            let mut args = vec![total.clone()];
            args.extend(nablas.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()));
            mixed_volume_on_fan(&fan, &args)
        })
        .collect::<Result<Vec<Rat>>>()?;
    let bkk = mixed_volume_on_fan(&fan, &nablas)? * Rat::from_integer(factorial(d));
    let mut total_bound: Option<Result<f64>> = None;
    let mut l_bounds = Vec::with_capacity(d);
    for (i, nabla) in nablas.iter().enumerate() {
        if volumes[i].is_zero() {
            l_bounds.push(None);
            continue;
        }
        let bound = if nabla.reduce_to_span().is_absolutely_simple() {
            LBound { value: bound_l(nabla)?, source: LSource::Own }
        } else {
            let t = total_bound.get_or_insert_with(|| {
                if total.is_absolutely_simple() {
                    bound_l(&total)
                } else {
                    Err(Error::NotAbsolutelySimple)
                }
            });
            match t {
                Ok(v) => LBound { value: *v, source: LSource::Total },
                Err(_) => return Err(Error::NoLBound(i)),
            }
        };
        l_bounds.push(Some(bound));
    }
    let mut rhs = 0.0;
    let mut rhs_error = 0.0;
    for i in 0..d {
        if let Some(l) = l_bounds[i] {
            let v = volumes[i].to_f64().unwrap();
            rhs += v * (mahler[i].value + l.value);
            rhs_error += v * mahler[i].error;
        }
    }
    Ok(BkReport { volumes, mahler, l_bounds, rhs, rhs_error, bkk: bkk.to_integer() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BkVerification {
    pub report: BkReport,
    /// `(1/d!) sum l(x) h_∇(x)`.
    pub lhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub holds: bool,
}

/// Checks the supplied common roots exactly and compares both sides of the inequality.
pub fn bk_verify(
    polys: &[LaurentPolynomial],
    roots: &[(Vec<Rat>, Int)],
    opts: &MahlerOptions,
) -> Result<BkVerification> {
    let nablas = system_polytopes(polys)?;
    let total = minkowski_total(&nablas)?;
    for (x, mult) in roots {
        if !mult.is_positive() {
            return Err(Error::Domain(format!("multiplicity {mult} is not positive")));
        }
        for p in polys {
            if !p.eval_rational(x)?.is_zero() {
                return Err(Error::NotARoot);
            }
        }
    }
    let report = bk_bound(polys, opts)?;
    let mut sum = 0.0;
    for (x, mult) in roots {
        sum += mult.to_f64().unwrap() * canonical_height_point(&total, x)?;
    }
    let lhs = sum / factorial(polys.len()).to_f64().unwrap();
    let slack = report.rhs - lhs;
    Ok(BkVerification { holds: slack >= 0.0, report, lhs, slack })
}

/// `d! V(∇_1, ..., ∇_d)`, the generic number of common roots in the torus.
pub fn bkk_count(polys: &[LaurentPolynomial]) -> Result<Int> {
    let nablas = system_polytopes(polys)?;
    if !minkowski_total(&nablas)?.is_full_dimensional() {
        return Ok(Int::zero());
    }
    let v = mixed_volume(&nablas)? * Rat::from_integer(factorial(polys.len()));
    Ok(v.to_integer())
}
