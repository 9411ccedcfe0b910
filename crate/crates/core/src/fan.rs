//! Simplicial rational cones and fans.
//!
//! A [`Fan`] keeps a global ray table and its maximal cones as sorted index
//! sets; every subset of a maximal cone is a face, so the full face lattice is
//! the downward closure.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hull::cone_from_inequalities;
use crate::lattice::{
    clear_denominators, dot_rat, dual_frame, int_rank, minor_gcd, to_rat_vec, Int, IntMatrix, LatticeVector, Rat,
};

/// A strict simplicial cone generated by primitive rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cone {
    rays: Vec<LatticeVector>,
    dim: usize,
}

impl Cone {
    /// The zero cone in `R^dim`.
    pub fn zero(dim: usize) -> Self {
        Cone { rays: Vec::new(), dim }
    }

    /// Rays are made primitive; they must be linearly independent.
    pub fn new(dim: usize, rays: Vec<LatticeVector>) -> Result<Self> {
        let mut prim = Vec::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            r.check_dim(dim)?;
            prim.push(r.primitive().map_err(|_| Error::ZeroRay(i))?);
        }
        let idx: Vec<usize> = (0..prim.len()).collect();
        let rows: Vec<Vec<Int>> = prim.iter().map(|r| r.coords().to_vec()).collect();
        if int_rank(&rows) < rows.len() {
            if contains_line(&rows, dim) {
                return Err(Error::NonStrictCone(idx));
            }
            return Err(Error::NonSimplicialCone(idx));
        }
        Ok(Cone { rays: prim, dim })
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.rays.len()
    }

    /// All `2^dim` faces, ordered by the bitmask of the rays they keep.
    pub fn faces(&self) -> Vec<Cone> {
        let k = self.rays.len();
        (0u64..(1u64 << k))
            .map(|mask| Cone {
                rays: (0..k).filter(|i| mask >> i & 1 == 1).map(|i| self.rays[i].clone()).collect(),
                dim: self.dim,
            })
            .collect()
    }

    /// Gcd of the maximal minors of the ray matrix; 1 iff the rays extend to a basis of `N`.
    pub fn multiplicity(&self) -> Int {
        minor_gcd(&self.rays.iter().map(|r| r.coords().to_vec()).collect::<Vec<_>>(), self.dim)
    }

    pub fn is_smooth(&self) -> bool {
        self.multiplicity().is_one()
    }

    /// Coordinates of `v` in the ray basis, or `None` when `v` is outside the span.
    pub fn coordinates(&self, v: &LatticeVector) -> Option<Vec<Rat>> {
        simplicial_coordinates(&self.rays.iter().map(|r| r.coords().to_vec()).collect::<Vec<_>>(), v.coords(), self.dim)
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.coordinates(v).is_some_and(|c| c.iter().all(|x| !x.is_negative()))
    }
}

/// Whether some nonzero nonnegative combination of `rows` vanishes.
fn contains_line(rows: &[Vec<Int>], dim: usize) -> bool {
    let k = rows.len();
    // {lambda >= 0, sum lambda_i r_i = 0}
    let mut ineq: Vec<Vec<Int>> = (0..k).map(|i| (0..k).map(|j| Int::from((i == j) as i32)).collect()).collect();
    for c in 0..dim {
        let eq: Vec<Int> = rows.iter().map(|r| r[c].clone()).collect();
        ineq.push(eq.iter().map(|x| -x).collect());
        ineq.push(eq);
    }
    let desc = cone_from_inequalities(&ineq, k);
    !desc.rays.is_empty() || !desc.lineality.is_empty()
}

/// Solves `v = sum c_i rays_i` for linearly independent rays.
pub(crate) fn simplicial_coordinates(rays: &[Vec<Int>], v: &[Int], dim: usize) -> Option<Vec<Rat>> {
    let frame = dual_frame(rays, dim)?;
    let vr = to_rat_vec(v);
    let k = rays.len();
    if frame[k..].iter().any(|w| !dot_rat(w, &vr).is_zero()) {
        return None;
    }
    Some(frame[..k].iter().map(|w| dot_rat(w, &vr)).collect())
}

/// Inequalities `<w, x> >= 0` cutting out a simplicial cone (equalities as opposite pairs).
fn simplicial_inequalities(rays: &[Vec<Int>], dim: usize) -> Vec<Vec<Int>> {
    let frame = dual_frame(rays, dim).expect("independent rays");
    let k = rays.len();
    let mut out = Vec::new();
    for (i, w) in frame.iter().enumerate() {
        let w = clear_denominators(w);
        if i >= k {
            out.push(w.iter().map(|x| -x).collect());
        }
        out.push(w);
    }
    out
}

/// A fan of strict simplicial cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    maximal: Vec<Vec<usize>>,
    cones: BTreeSet<Vec<usize>>,
}

impl Fan {
    /// Validates and builds a fan from a ray table and a list of cones (ray index sets).
    ///
    /// Cones need not be maximal; the face closure is computed. Rejects zero,
    /// non-primitive or duplicate rays, unused rays, non-strict or
    /// non-simplicial cones, and pairs of cones meeting outside a common face.
    pub fn new(dim: usize, rays: Vec<LatticeVector>, cones: Vec<Vec<usize>>) -> Result<Self> {
        for (i, r) in rays.iter().enumerate() {
            r.check_dim(dim)?;
            if r.is_zero() {
                return Err(Error::ZeroRay(i));
            }
            if !r.is_primitive() {
                return Err(Error::NonPrimitiveRay(i));
            }
        }
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if rays[i] == rays[j] {
                    return Err(Error::DuplicateRay(i, j));
                }
            }
        }
        let mut sets = Vec::with_capacity(cones.len());
        for c in cones {
            let mut s = c.clone();
            s.sort_unstable();
            s.dedup();
            if let Some(&bad) = s.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::RayIndexOutOfRange { index: bad, count: rays.len() });
            }
            let rows: Vec<Vec<Int>> = s.iter().map(|&i| rays[i].coords().to_vec()).collect();
            if int_rank(&rows) < rows.len() {
                if contains_line(&rows, dim) {
                    return Err(Error::NonStrictCone(s));
                }
                return Err(Error::NonSimplicialCone(s));
            }
            sets.push(s);
        }
        let fan = Self::from_cones_unchecked(dim, rays, sets);
        let used: BTreeSet<usize> = fan.maximal.iter().flatten().copied().collect();
        if let Some(i) = (0..fan.rays.len()).find(|i| !used.contains(i)) {
            return Err(Error::UnusedRay(i));
        }
        fan.check_intersections()?;
        Ok(fan)
    }

    /// Builds the face closure without geometric validation.
    pub(crate) fn from_cones_unchecked(dim: usize, rays: Vec<LatticeVector>, cones: Vec<Vec<usize>>) -> Self {
        let mut sets: BTreeSet<Vec<usize>> = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        let all: Vec<Vec<usize>> = sets.iter().cloned().collect();
        let maximal: Vec<Vec<usize>> =
            all.iter().filter(|c| !all.iter().any(|o| o.len() > c.len() && is_subset(c, o))).cloned().collect();
        sets.clear();
        for m in &maximal {
            for mask in 0u64..(1u64 << m.len()) {
                sets.insert((0..m.len()).filter(|i| mask >> i & 1 == 1).map(|i| m[i]).collect());
            }
        }
        if sets.is_empty() {
            sets.insert(Vec::new());
        }
        let mut maximal = maximal;
        maximal.sort();
        Fan { dim, rays, maximal, cones: sets }
    }

    fn check_intersections(&self) -> Result<()> {
        let rows = |s: &[usize]| -> Vec<Vec<Int>> { s.iter().map(|&i| self.rays[i].coords().to_vec()).collect() };
        for (a, sa) in self.maximal.iter().enumerate() {
            for sb in &self.maximal[a + 1..] {
                let common: Vec<usize> = sa.iter().filter(|i| sb.contains(i)).copied().collect();
                let mut ineq = simplicial_inequalities(&rows(sa), self.dim);
                ineq.extend(simplicial_inequalities(&rows(sb), self.dim));
                let desc = cone_from_inequalities(&ineq, self.dim);
                let ok = desc.lineality.is_empty()
                    && desc.rays.iter().all(|r| common.iter().any(|&i| self.rays[i].coords() == r.as_slice()));
                if !ok {
                    return Err(Error::BadIntersection(sa.clone(), sb.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn ray_index(&self, v: &LatticeVector) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    /// Maximal cones as sorted ray index sets, in lexicographic order.
    pub fn maximal_cones(&self) -> &[Vec<usize>] {
        &self.maximal
    }

    /// Every cone of the fan, including the zero cone.
    pub fn cones(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.cones.iter()
    }

    pub fn cones_of_dim(&self, k: usize) -> Vec<Vec<usize>> {
        self.cones.iter().filter(|c| c.len() == k).cloned().collect()
    }

    pub fn is_cone(&self, set: &[usize]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        self.cones.contains(&s)
    }

    pub fn cone(&self, set: &[usize]) -> Cone {
        Cone { rays: set.iter().map(|&i| self.rays[i].clone()).collect(), dim: self.dim }
    }

    /// Index of the first maximal cone containing `v`.
    pub fn maximal_cone_containing(&self, v: &LatticeVector) -> Option<usize> {
        self.maximal.iter().position(|m| self.cone(m).contains(v))
    }

    /// Maximal cones containing the given cone.
    pub fn maximal_cones_containing(&self, set: &[usize]) -> Vec<usize> {
        (0..self.maximal.len()).filter(|&k| is_subset(set, &self.maximal[k])).collect()
    }

    /// Every maximal cone is generated by part of a basis of `N`.
    pub fn is_smooth(&self) -> bool {
        self.maximal.iter().all(|m| self.cone(m).is_smooth())
    }

    /// Ridge-manifold test: every `(d-1)`-cone lies in exactly two `d`-cones and
    /// the `d`-cones are connected through shared ridges.
    pub fn is_complete(&self) -> Result<bool> {
        let d = self.dim;
        if let Some(low) = self.maximal.iter().find(|m| m.len() < d) {
            return Err(Error::LowDimensionalCone(low.clone()));
        }
        if d == 0 {
            return Ok(true);
        }
        let mut ridges: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (k, m) in self.maximal.iter().enumerate() {
            for skip in 0..m.len() {
                let ridge: Vec<usize> = m.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &r)| r).collect();
                ridges.entry(ridge).or_default().push(k);
            }
        }
        if ridges.values().any(|v| v.len() != 2) {
            return Ok(false);
        }
        let n = self.maximal.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(k) = stack.pop() {
            for pair in ridges.values() {
                if pair.contains(&k) {
                    for &o in pair {
                        if !seen[o] {
                            seen[o] = true;
                            stack.push(o);
                        }
                    }
                }
            }
        }
        Ok(seen.into_iter().all(|s| s))
    }

    pub(crate) fn require_smooth_complete(&self) -> Result<()> {
        if !self.is_complete()? {
            return Err(Error::NotComplete);
        }
        if !self.is_smooth() {
            return Err(Error::NotSmooth);
        }
        Ok(())
    }

    /// Stellar subdivision at the primitive vector `v`.
    ///
    /// The cones containing the face `tau` that has `v` in its relative
    /// interior are replaced by the joins of `v` with their faces missing one
    /// ray of `tau`. Subdividing at an existing ray returns the fan unchanged.
    pub fn stellar_subdivide(&self, v: &LatticeVector) -> Result<Fan> {
        v.check_dim(self.dim)?;
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        if !v.is_primitive() {
            return Err(Error::NonPrimitiveVector);
        }
        if self.ray_index(v).is_some() {
            return Ok(self.clone());
        }
        let (tau, _) = self.carrier(v).ok_or(Error::OutsideSupport)?;
        let new_ray = self.rays.len();
        let mut rays = self.rays.clone();
        rays.push(v.clone());
        let mut cones = Vec::new();
        for m in &self.maximal {
            if is_subset(&tau, m) {
                for &rho in &tau {
                    let mut c: Vec<usize> = m.iter().copied().filter(|&i| i != rho).collect();
                    c.push(new_ray);
                    cones.push(c);
                }
            } else {
                cones.push(m.clone());
            }
        }
        Ok(Fan::from_cones_unchecked(self.dim, rays, cones))
    }

    /// The cone with `v` in its relative interior, with `v`'s coordinates on its rays.
    fn carrier(&self, v: &LatticeVector) -> Option<(Vec<usize>, Vec<Rat>)> {
        for m in &self.maximal {
            if let Some(c) = self.cone(m).coordinates(v) {
                if c.iter().all(|x| !x.is_negative()) {
                    let tau: Vec<usize> = m.iter().zip(&c).filter(|(_, x)| x.is_positive()).map(|(&i, _)| i).collect();
                    let coords = c.into_iter().filter(|x| x.is_positive()).collect();
                    return Some((tau, coords));
                }
            }
        }
        None
    }

    /// Refines a complete simplicial fan to a smooth one by stellar subdivisions.
    ///
    /// Each step picks the first non-smooth maximal cone (lexicographic order)
    /// and subdivides at the nonzero lattice point of its half-open fundamental
    /// parallelepiped with the least sum of barycentric coordinates, ties
    /// broken by the lexicographically smallest point.
    pub fn regularize(&self) -> Result<Fan> {
        if !self.is_complete()? {
            return Err(Error::NotComplete);
        }
        let d = self.dim;
        let mut rays = self.rays.clone();
        let mult = |rays: &[LatticeVector], c: &[usize]| {
            let rows = c.iter().map(|&i| rays[i].coords().to_vec()).collect();
            IntMatrix::from_rows(rows, d).unwrap().det().unwrap().abs()
        };
        let mut cones: BTreeMap<Vec<usize>, Int> = self.maximal.iter().map(|c| (c.clone(), mult(&rays, c))).collect();
        while let Some(bad) = cones.iter().find(|(_, m)| !m.is_one()).map(|(c, _)| c.clone()) {
            let (p, tau) = minimal_parallelepiped_point(&rays, &bad, d);
            let new_ray = rays.len();
            rays.push(p);
            let hit: Vec<Vec<usize>> = cones.keys().filter(|m| is_subset(&tau, m)).cloned().collect();
            for m in hit {
                cones.remove(&m);
                for &rho in &tau {
                    let mut c: Vec<usize> = m.iter().copied().filter(|&i| i != rho).collect();
                    c.push(new_ray);
                    let k = mult(&rays, &c);
                    cones.insert(c, k);
                }
            }
        }
        Ok(Fan::from_cones_unchecked(d, rays, cones.into_keys().collect()))
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// Nonzero point `sum lambda_i r_i`, `0 <= lambda_i < 1`, of the cone on `rays[cone]`
/// minimizing `sum lambda_i`, with the rays carrying a positive `lambda_i`.
fn minimal_parallelepiped_point(all: &[LatticeVector], cone: &[usize], d: usize) -> (LatticeVector, Vec<usize>) {
    let rays: Vec<Vec<Int>> = cone.iter().map(|&i| all[i].coords().to_vec()).collect();
    let m = IntMatrix::from_rows(rays.clone(), d).unwrap().det().unwrap().abs();
    let frame = dual_frame(&rays, d).expect("full-dimensional simplicial cone");
    // barycentric coordinates scaled by m are integers; work in (Z/m)^d
    let gens: Vec<Vec<Int>> = (0..d)
        .map(|j| frame.iter().map(|w| (&w[j] * Rat::from_integer(m.clone())).to_integer().mod_floor(&m)).collect())
        .collect();
    let zero = vec![Int::zero(); d];
    let mut seen: BTreeSet<Vec<Int>> = BTreeSet::from([zero.clone()]);
    let mut queue = vec![zero];
    while let Some(g) = queue.pop() {
        for h in &gens {
            let n: Vec<Int> = g.iter().zip(h).map(|(a, b)| (a + b).mod_floor(&m)).collect();
            if seen.insert(n.clone()) {
                queue.push(n);
            }
        }
    }
    let (_, point, g) = seen
        .into_iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .map(|g| {
            let sum: Int = g.iter().sum();
            let point: Vec<Int> =
                (0..d).map(|j| rays.iter().zip(&g).map(|(r, c)| &r[j] * c).sum::<Int>() / &m).collect();
            (sum, point, g)
        })
        .min()
        .expect("non-smooth cone has a nonzero parallelepiped point");
    let tau = cone.iter().zip(&g).filter(|(_, c)| !c.is_zero()).map(|(&i, _)| i).collect();
    (LatticeVector::new(point), tau)
}

/// Pulling triangulation of `cone(rays[idx])` using only the given rays.
///
/// Pulls the smallest index first; with one global order the triangulations
/// of cones sharing a face agree on that face.
pub(crate) fn pulling_triangulation(rays: &[LatticeVector], idx: &[usize], dim: usize) -> Vec<Vec<usize>> {
    let mut idx = idx.to_vec();
    idx.sort_unstable();
    let rows: Vec<Vec<Int>> = idx.iter().map(|&i| rays[i].coords().to_vec()).collect();
    let rank = int_rank(&rows);
    if rank == idx.len() {
        return vec![idx];
    }
    let apex = idx[0];
    let desc = cone_from_inequalities(&rows, dim);
    let mut out = Vec::new();
    for normal in &desc.rays {
        let facet: Vec<usize> =
            idx.iter().zip(&rows).filter(|(_, r)| crate::lattice::dot(r, normal).is_zero()).map(|(&i, _)| i).collect();
        if facet.contains(&apex) {
            continue;
        }
        let facet_rows: Vec<Vec<Int>> = facet.iter().map(|&i| rays[i].coords().to_vec()).collect();
        if int_rank(&facet_rows) + 1 != rank {
            continue;
        }
        for mut s in pulling_triangulation(rays, &facet, dim) {
            s.push(apex);
            s.sort_unstable();
            out.push(s);
        }
    }
    out.sort();
    out
}

/// `|det|` of a full-dimensional simplicial cone, as `u64` when it fits.
pub fn cone_multiplicity_u64(c: &Cone) -> Option<u64> {
    c.multiplicity().to_u64()
}
