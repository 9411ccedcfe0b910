//! Canonical heights of rational torus points and of hypersurfaces.

use std::collections::BTreeMap;

use num_bigint::{BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::divisor::TDivisor;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::intersection::degree;
use crate::lattice::{dot, Int, Rat};
use crate::laurent::LaurentPolynomial;
use crate::mahler::{int_ln, mahler_measure, MahlerEstimate, MahlerOptions};
use crate::polytope::LatticePolytope;

/// `h_∇(x)` split by place: `max |x^m|` at the real place and, for each prime
/// `p`, the exponent `e` with `max |x^m|_p = p^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceHeights {
    pub archimedean: Rat,
    pub finite: BTreeMap<Int, Int>,
}

impl PlaceHeights {
    pub fn value(&self) -> f64 {
        let arch = int_ln(self.archimedean.numer()) - int_ln(self.archimedean.denom());
        arch + self.finite.iter().map(|(p, e)| e.to_f64().unwrap() * int_ln(p)).sum::<f64>()
    }

    /// Placewise product, i.e. the height of the Minkowski sum.
    pub fn combine(&self, other: &PlaceHeights) -> PlaceHeights {
        let mut finite = self.finite.clone();
        for (p, e) in &other.finite {
            *finite.entry(p.clone()).or_insert_with(Int::zero) += e;
        }
        finite.retain(|_, e| !e.is_zero());
        PlaceHeights { archimedean: &self.archimedean * &other.archimedean, finite }
    }
}

fn factor(n: &Int, primes: &mut BTreeMap<Int, ()>) -> Result<()> {
    let n: BigUint = n.abs().to_biguint().expect("nonnegative");
    if n <= BigUint::one() {
        return Ok(());
    }
    let (found, rest) = num_prime::nt_funcs::factors(n, None);
    if let Some(rest) = rest {
        return Err(Error::Factorization(format!("could not factor {rest:?}")));
    }
    for p in found.into_keys() {
        primes.insert(Int::from_biguint(Sign::Plus, p), ());
    }
    Ok(())
}

fn valuation(mut n: Int, p: &Int) -> Int {
    let mut v = Int::zero();
    if n.is_zero() {
        return v;
    }
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Exact place decomposition of `h_∇(x)`.
pub fn place_heights(polytope: &LatticePolytope, x: &[Rat]) -> Result<PlaceHeights> {
    if x.len() != polytope.dim() {
        return Err(Error::DimensionMismatch { expected: polytope.dim(), found: x.len() });
    }
    if x.iter().any(Zero::is_zero) {
        return Err(Error::ZeroCoordinate);
    }
    let moduli: Vec<Rat> = x.iter().map(|c| c.abs()).collect();
    let archimedean = polytope
        .vertices()
        .iter()
        .map(|m| {
            m.coords().iter().zip(&moduli).fold(Rat::one(), |acc, (e, a)| {
                acc * num_traits::pow::Pow::pow(a, e.to_i32().expect("exponent fits in i32"))
            })
        })
        .max()
        .expect("nonempty polytope");
    let mut primes = BTreeMap::new();
    for c in x {
        factor(c.numer(), &mut primes)?;
        factor(c.denom(), &mut primes)?;
    }
    let mut finite = BTreeMap::new();
    for p in primes.into_keys() {
        let v: Vec<Int> =
            x.iter().map(|c| valuation(c.numer().clone(), &p) - valuation(c.denom().clone(), &p)).collect();
        // |x^m|_p = p^{-<m, v>}
        let e = polytope.vertices().iter().map(|m| -dot(m.coords(), &v)).max().expect("nonempty polytope");
        if !e.is_zero() {
            finite.insert(p, e);
        }
    }
    Ok(PlaceHeights { archimedean, finite })
}

/// `h_∇(x) = sum over places of log max_{m in ∇} |x^m|_ν` for `x` in `(Q^*)^d`.
pub fn canonical_height_point(polytope: &LatticePolytope, x: &[Rat]) -> Result<f64> {
    Ok(place_heights(polytope, x)?.value())
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfaceHeight {
    pub degree: Int,
    pub mahler: MahlerEstimate,
    pub value: f64,
}

/// `deg(c_1(L_1)...c_1(L_d)) M(s)` for a section `s` of `O(D)`.
pub fn height_hypersurface(
    fan: &Fan,
    line_bundles: &[TDivisor],
    s: &LaurentPolynomial,
    divisor: &TDivisor,
    opts: &MahlerOptions,
) -> Result<HypersurfaceHeight> {
    if s.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if s.dim() != fan.dim() {
        return Err(Error::DimensionMismatch { expected: fan.dim(), found: s.dim() });
    }
    fan.require_smooth_complete()?;
    if divisor.coefficients().len() != fan.rays().len() {
        return Err(Error::DimensionMismatch { expected: fan.rays().len(), found: divisor.coefficients().len() });
    }
    for l in line_bundles {
        if !l.is_basepoint_free(fan)? {
            return Err(Error::NotBasepointFree);
        }
    }
    for m in s.support() {
        for (u, a) in fan.rays().iter().zip(divisor.coefficients()) {
            if dot(m.coords(), u.coords()) < -a {
                return Err(Error::SupportOutsidePolytope);
            }
        }
    }
    let degree = degree(fan, line_bundles)?;
    let mahler = mahler_measure(s, opts)?;
    let value = degree.to_f64().unwrap() * mahler.value;
    Ok(HypersurfaceHeight { degree, mahler, value })
}
