//! Intersection numbers of divisors on smooth complete fans through
//! Minkowski weights.
//!
//! A weight of codimension `q` assigns an integer to every cone of dimension
//! `d - q`. Intersecting with a Cartier divisor `D` gives, on a cone `sigma`
//! of one dimension less,
//!
//! `w(sigma) = sum_{tau > sigma} c(tau) <m_sigma - m_{D,tau}, v_{tau/sigma}>`
//!
//! where `m_sigma` is any linear form agreeing with `psi_D` on `sigma` and
//! `v_{tau/sigma}` is any lattice point of `tau` lifting the generator of
//! `N_tau / N_sigma`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::divisor::{CartierData, TDivisor};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{combinations, dot, dual_frame, in_integer_span, Int, Rat};
use crate::polytope::{factorial, LatticePolytope};

/// Integer weights on the cones of dimension `d - codim`, keyed by sorted ray index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinkowskiWeight {
    codim: usize,
    values: BTreeMap<Vec<usize>, Int>,
}

impl MinkowskiWeight {
    /// Missing cones get weight zero.
    pub fn new(fan: &Fan, codim: usize, values: BTreeMap<Vec<usize>, Int>) -> Result<Self> {
        if codim > fan.dim() {
            return Err(Error::CodimensionExhausted(codim));
        }
        let k = fan.dim() - codim;
        let mut all: BTreeMap<Vec<usize>, Int> = fan.cones_of_dim(k).into_iter().map(|c| (c, Int::zero())).collect();
        for (mut c, v) in values {
            c.sort_unstable();
            match all.get_mut(&c) {
                Some(slot) => *slot = v,
                None => return Err(Error::Domain(format!("{c:?} is not a cone of dimension {k}"))),
            }
        }
        Ok(MinkowskiWeight { codim, values: all })
    }

    /// Weight 1 on every maximal cone.
    pub fn fundamental(fan: &Fan) -> Result<Self> {
        fan.require_smooth_complete()?;
        let values = fan.maximal_cones().iter().map(|c| (c.clone(), Int::one())).collect();
        Ok(MinkowskiWeight { codim: 0, values })
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    pub fn values(&self) -> &BTreeMap<Vec<usize>, Int> {
        &self.values
    }

    pub fn get(&self, cone: &[usize]) -> Int {
        self.values.get(cone).cloned().unwrap_or_else(Int::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(Zero::is_zero)
    }
}

impl fmt::Display for MinkowskiWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, v) in &self.values {
            writeln!(f, "{c:?} {v}")?;
        }
        Ok(())
    }
}

/// For each cone one dimension below the weight, the cones of the weight containing it with the ray they add.
fn coface_index(weight: &MinkowskiWeight) -> BTreeMap<Vec<usize>, Vec<(Vec<usize>, usize)>> {
    let mut out: BTreeMap<Vec<usize>, Vec<(Vec<usize>, usize)>> = BTreeMap::new();
    for tau in weight.values.keys() {
        for (pos, &extra) in tau.iter().enumerate() {
            let mut sigma = tau.clone();
            sigma.remove(pos);
            out.entry(sigma).or_default().push((tau.clone(), extra));
        }
    }
    out
}

/// Indices of the maximal cones containing each cone of the fan.
fn star_index(fan: &Fan) -> BTreeMap<Vec<usize>, Vec<usize>> {
    let mut out: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (k, m) in fan.maximal_cones().iter().enumerate() {
        for mask in 0u64..(1u64 << m.len()) {
            let face = (0..m.len()).filter(|i| mask >> i & 1 == 1).map(|i| m[i]).collect();
            out.entry(face).or_default().push(k);
        }
    }
    out
}

/// `sum_tau c(tau) v_{tau/sigma} in N_sigma` at every cone one dimension down. The fan must be smooth.
pub fn check_balanced(fan: &Fan, weight: &MinkowskiWeight) -> bool {
    let d = fan.dim();
    if weight.codim >= d {
        return true;
    }
    let k = d - weight.codim;
    let cofaces = coface_index(weight);
    fan.cones_of_dim(k - 1).iter().all(|sigma| {
        let mut total = vec![Int::zero(); d];
        for (tau, extra) in cofaces.get(sigma).into_iter().flatten() {
            let c = weight.get(tau);
            for (t, x) in total.iter_mut().zip(fan.ray(*extra).coords()) {
                *t += &c * x;
            }
        }
        let gens: Vec<Vec<Int>> = sigma.iter().map(|&i| fan.ray(i).coords().to_vec()).collect();
        in_integer_span(&total, &gens)
    })
}

/// How the arbitrary choices of the recursion are made.
enum Choices {
    /// First maximal cone in lexicographic order; the lift is the added ray itself.
    Canonical,
    Random(u64),
}

/// Intersects a balanced weight of codimension `q < d` with a Cartier divisor.
pub fn intersect_divisor(fan: &Fan, weight: &MinkowskiWeight, divisor: &TDivisor) -> Result<MinkowskiWeight> {
    intersect(fan, weight, divisor, Choices::Canonical)
}

/// As [`intersect_divisor`], with reference cones for `m_sigma` and `m_{D,tau}`
/// and the lifts `v_{tau/sigma}` drawn at random from `seed`.
pub fn intersect_divisor_randomized(
    fan: &Fan,
    weight: &MinkowskiWeight,
    divisor: &TDivisor,
    seed: u64,
) -> Result<MinkowskiWeight> {
    intersect(fan, weight, divisor, Choices::Random(seed))
}

fn intersect(fan: &Fan, weight: &MinkowskiWeight, divisor: &TDivisor, choices: Choices) -> Result<MinkowskiWeight> {
    let d = fan.dim();
    if weight.codim >= d {
        return Err(Error::CodimensionExhausted(weight.codim));
    }
    let data = divisor.cartier_data(fan)?;
    if !check_balanced(fan, weight) {
        return Err(Error::Unbalanced);
    }
    Ok(intersect_unchecked(fan, weight, &data, &choices))
}

fn intersect_unchecked(fan: &Fan, weight: &MinkowskiWeight, data: &CartierData, choices: &Choices) -> MinkowskiWeight {
    let d = fan.dim();
    let k = d - weight.codim;
    let sigmas = fan.cones_of_dim(k - 1);
    let cofaces = coface_index(weight);
    let star = star_index(fan);
    let values: BTreeMap<Vec<usize>, Int> = sigmas
        .into_par_iter()
        .enumerate()
        .map(|(idx, sigma)| {
            let mut rng = match choices {
                Choices::Canonical => None,
                Choices::Random(seed) => {
                    Some(ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ idx as u64))
                }
            };
            let m_sigma = data.form(pick(&mut rng, &star[&sigma])).clone();
            let mut w = Int::zero();
            for (tau, extra) in cofaces.get(&sigma).into_iter().flatten() {
                let c = weight.get(tau);
                if c.is_zero() {
                    continue;
                }
                let m_tau = data.form(pick(&mut rng, &star[tau]));
                let mut v = fan.ray(*extra).coords().to_vec();
                if let Some(r) = rng.as_mut() {
                    for &i in &sigma {
                        let n: i64 = r.random_range(-5..=5);
                        for (x, y) in v.iter_mut().zip(fan.ray(i).coords()) {
                            *x += Int::from(n) * y;
                        }
                    }
                }
                let diff = &m_sigma - m_tau;
                w += c * dot(diff.coords(), &v);
            }
            (sigma, w)
        })
        .collect();
    MinkowskiWeight { codim: weight.codim + 1, values }
}

fn pick(rng: &mut Option<ChaCha8Rng>, options: &[usize]) -> usize {
    match rng.as_mut() {
        None => options[0],
        Some(r) => options[r.random_range(0..options.len())],
    }
}

/// `deg(D_1 ... D_d)` on a smooth complete fan.
pub fn degree(fan: &Fan, divisors: &[TDivisor]) -> Result<Int> {
    if divisors.len() != fan.dim() {
        return Err(Error::DimensionMismatch { expected: fan.dim(), found: divisors.len() });
    }
    let mut w = MinkowskiWeight::fundamental(fan)?;
    for dv in divisors {
        w = intersect_divisor(fan, &w, dv)?;
    }
    Ok(w.get(&[]))
}

/// Degree on a fan already known to be smooth and complete, skipping all checks.
pub(crate) fn degree_unchecked(fan: &Fan, data: &[CartierData]) -> Int {
    let values = fan.maximal_cones().iter().map(|c| (c.clone(), Int::one())).collect();
    let mut w = MinkowskiWeight { codim: 0, values };
    for dt in data {
        w = intersect_unchecked(fan, &w, dt, &Choices::Canonical);
    }
    w.get(&[])
}

/// `V(K_1, ..., K_d)`, computed as `deg(E_1 ... E_d) / d!` on a smooth refinement
/// of the normal fan of `K_1 + ... + K_d`.
pub fn mixed_volume(polytopes: &[LatticePolytope]) -> Result<Rat> {
    let d = polytopes.len();
    if let Some(p) = polytopes.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
    }
    if d == 0 {
        return Ok(Rat::one());
    }
    let mut sum = polytopes[0].clone();
    for p in &polytopes[1..] {
        sum = sum.minkowski_sum(p)?;
    }
    let (fan, _) = sum.normal_fan()?;
    let fan = fan.regularize()?;
    mixed_volume_on_fan(&fan, polytopes)
}

/// Mixed volume using a given smooth complete fan on which every support function is linear.
pub fn mixed_volume_on_fan(fan: &Fan, polytopes: &[LatticePolytope]) -> Result<Rat> {
    fan.require_smooth_complete()?;
    let data: Vec<CartierData> = polytopes
        .iter()
        .map(|k| Ok(TDivisor::of_polytope(fan, k)?.cartier_data_unchecked(fan)))
        .collect::<Result<_>>()?;
    Ok(Rat::new(degree_unchecked(fan, &data), factorial(fan.dim())))
}

/// Generators of the ideals `I` (minimal non-faces) and `J` (linear relations)
/// in the presentation `Z[t_1..t_r] / (I + J)` of the Chow ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JdPresentation {
    pub num_rays: usize,
    /// Each entry is the squarefree monomial `prod_{i in S} t_i`.
    pub nonfaces: Vec<Vec<usize>>,
    /// Row `k` holds the coefficients `<e_k*, u_i>` of `sum_i <e_k*, u_i> t_i`.
    pub linear: Vec<Vec<Int>>,
}

impl fmt::Display for JdPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variables: {}", (0..self.num_rays).map(|i| format!("t{i}")).collect::<Vec<_>>().join(" "))?;
        for s in &self.nonfaces {
            writeln!(f, "I: {}", s.iter().map(|i| format!("t{i}")).collect::<Vec<_>>().join("*"))?;
        }
        for row in &self.linear {
            let mut terms = Vec::new();
            for (i, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    terms.push(format!("{c}*t{i}"));
                }
            }
            writeln!(f, "J: {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") })?;
        }
        Ok(())
    }
}

pub fn jd_presentation(fan: &Fan) -> Result<JdPresentation> {
    fan.require_smooth_complete()?;
    let r = fan.rays().len();
    let d = fan.dim();
    let mut nonfaces = Vec::new();
    for size in 2..=(d + 1).min(r) {
        for s in combinations(r, size) {
            if fan.is_cone(&s) {
                continue;
            }
            let minimal = (0..size).all(|skip| {
                let sub: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &i)| i).collect();
                fan.is_cone(&sub)
            });
            if minimal {
                nonfaces.push(s);
            }
        }
    }
    let linear = (0..d).map(|k| fan.rays().iter().map(|u| u.coords()[k].clone()).collect()).collect();
    Ok(JdPresentation { num_rays: r, nonfaces, linear })
}

/// Degree of the monomial `t_{rho_1} ... t_{rho_d}` computed from the relations
/// alone: non-faces vanish, a maximal cone counts 1, and a repeated variable is
/// eliminated through a linear relation.
pub fn jd_monomial_degree(fan: &Fan, monomial: &[usize]) -> Result<Int> {
    fan.require_smooth_complete()?;
    if monomial.len() != fan.dim() {
        return Err(Error::DimensionMismatch { expected: fan.dim(), found: monomial.len() });
    }
    if let Some(&bad) = monomial.iter().find(|&&i| i >= fan.rays().len()) {
        return Err(Error::RayIndexOutOfRange { index: bad, count: fan.rays().len() });
    }
    let mut memo = BTreeMap::new();
    Ok(monomial_degree(fan, monomial.to_vec(), &mut memo))
}

fn monomial_degree(fan: &Fan, mut mono: Vec<usize>, memo: &mut BTreeMap<Vec<usize>, Int>) -> Int {
    mono.sort_unstable();
    if let Some(v) = memo.get(&mono) {
        return v.clone();
    }
    let mut support = mono.clone();
    support.dedup();
    let value = if !fan.is_cone(&support) {
        Int::zero()
    } else if support.len() == mono.len() {
        Int::one()
    } else {
        let rho = mono.windows(2).find(|w| w[0] == w[1]).expect("repeated variable")[0];
        let sigma = &fan.maximal_cones()[fan.maximal_cones_containing(&support)[0]];
        let rows: Vec<Vec<Int>> = sigma.iter().map(|&i| fan.ray(i).coords().to_vec()).collect();
        let frame = dual_frame(&rows, fan.dim()).expect("full-dimensional cone");
        let pos = sigma.iter().position(|&i| i == rho).unwrap();
        let m: Vec<Int> = frame[pos].iter().map(|x| x.to_integer()).collect();
        let mut total = Int::zero();
        for (i, u) in fan.rays().iter().enumerate() {
            if support.contains(&i) {
                continue;
            }
            let c = dot(&m, u.coords());
            if c.is_zero() {
                continue;
            }
            let mut next = mono.clone();
            let at = next.iter().position(|&x| x == rho).unwrap();
            next[at] = i;
            total -= c * monomial_degree(fan, next, memo);
        }
        total
    };
    memo.insert(mono, value.clone());
    value
}

/// Whether `rho_1 + ... + rho_q` spans no cone; when it does not, the product of
/// the elementary divisors is also checked to be the zero weight.
pub fn nonface_product_vanishes(fan: &Fan, rays: &[usize]) -> Result<bool> {
    let d = fan.dim();
    if rays.len() > d {
        return Err(Error::CodimensionExhausted(rays.len()));
    }
    for (a, &i) in rays.iter().enumerate() {
        if i >= fan.rays().len() {
            return Err(Error::RayIndexOutOfRange { index: i, count: fan.rays().len() });
        }
        if rays[..a].contains(&i) {
            return Err(Error::DuplicateRayInProduct(i));
        }
    }
    let mut w = MinkowskiWeight::fundamental(fan)?;
    for &i in rays {
        w = intersect_divisor(fan, &w, &TDivisor::elementary(fan, i))?;
    }
    let vanishes = !fan.is_cone(rays);
    if vanishes && !w.is_zero() {
        return Err(Error::Inconsistent(format!("product over non-face {rays:?} is nonzero")));
    }
    Ok(vanishes)
}
