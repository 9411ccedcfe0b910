//! Lattice polytopes in `M`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::divisor::TDivisor;
use crate::error::{Error, Result};
use crate::fan::{pulling_triangulation, Fan};
use crate::hull::cone_from_inequalities;
use crate::lattice::{dot, dot_rat, dual_frame, int_rank, to_rat_vec, DualVector, Int, IntMatrix, LatticeVector, Rat};

/// Half-space `{v : <v, normal> >= offset}` supporting a facet.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: LatticeVector,
    pub offset: Int,
}

/// Convex hull of finitely many points of `M`, stored by its vertices
/// together with the facet inequalities and affine equations.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<DualVector>,
    facets: Vec<Facet>,
    /// `<v, normal> = offset` on the whole polytope.
    equations: Vec<Facet>,
    /// Facets through each vertex.
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl LatticePolytope {
    /// Convex hull of a nonempty point set; keeps only the extreme points, sorted.
    pub fn from_points(dim: usize, points: Vec<DualVector>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("empty point set".into()));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
            }
        }
        let pts: Vec<DualVector> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let rows: Vec<Vec<Int>> =
            pts.iter().map(|p| std::iter::once(Int::one()).chain(p.coords().iter().cloned()).collect()).collect();
        let desc = cone_from_inequalities(&rows, dim + 1);
        let split = |mut v: Vec<Int>| -> Facet {
            let c = v.remove(0);
            Facet { normal: LatticeVector::new(v), offset: -c }
        };
        let mut facets: Vec<Facet> = desc
            .rays
            .into_iter()
            .filter(|r| rows.iter().any(|p| dot(p, r).is_zero()))
            .map(|r| {
                let mut f = split(r);
                let g = f.normal.content();
                if !g.is_one() && !g.is_zero() {
                    f.normal = LatticeVector::new(f.normal.coords().iter().map(|x| x / &g).collect());
                    f.offset = &f.offset / &g;
                }
                f
            })
            .collect();
        facets.sort();
        let equations: Vec<Facet> = desc.lineality.into_iter().map(split).collect();
        let eq_rows: Vec<Vec<Int>> = equations.iter().map(|e| e.normal.coords().to_vec()).collect();

        let mut vertices = Vec::new();
        let mut incidence = Vec::new();
        for p in &pts {
            let tight: Vec<usize> = (0..facets.len()).filter(|&j| facet_value(&facets[j], p).is_zero()).collect();
            let mut normals = eq_rows.clone();
            normals.extend(tight.iter().map(|&j| facets[j].normal.coords().to_vec()));
            if int_rank(&normals) == dim {
                vertices.push(p.clone());
                incidence.push(tight);
            }
        }
        Ok(LatticePolytope { dim, vertices, facets, equations, incidence })
    }

    pub fn point(m: DualVector) -> Self {
        let d = m.dim();
        Self::from_points(d, vec![m]).expect("single point")
    }

    /// `conv{0, e_1*, ..., e_d*}`.
    pub fn unit_simplex(d: usize) -> Self {
        let mut pts = vec![DualVector::zero(d)];
        pts.extend((0..d).map(|i| DualVector::unit(d, i)));
        Self::from_points(d, pts).expect("simplex")
    }

    /// `[0,1]^d`.
    pub fn unit_cube(d: usize) -> Self {
        let pts =
            (0u64..(1 << d)).map(|mask| DualVector::new((0..d).map(|i| Int::from(mask >> i & 1)).collect())).collect();
        Self::from_points(d, pts).expect("cube")
    }

    /// Bounded polyhedron `{v : <v, u> >= b}`; every vertex must be a lattice point.
    pub fn from_halfspaces(dim: usize, halfspaces: &[Facet]) -> Result<Self> {
        // homogenize: t >= 0 and <x, u> - b t >= 0
        let mut rows: Vec<Vec<Int>> = vec![std::iter::once(Int::one()).chain((0..dim).map(|_| Int::zero())).collect()];
        for h in halfspaces {
            h.normal.check_dim(dim)?;
            rows.push(std::iter::once(-&h.offset).chain(h.normal.coords().iter().cloned()).collect());
        }
        let desc = cone_from_inequalities(&rows, dim + 1);
        if !desc.lineality.is_empty() {
            return Err(Error::Domain("half-spaces do not cut out a bounded set".into()));
        }
        let mut pts = Vec::new();
        for r in desc.rays {
            if r[0].is_zero() {
                return Err(Error::Domain("half-spaces do not cut out a bounded set".into()));
            }
            let t = &r[0];
            if r[1..].iter().any(|x| !(x % t).is_zero()) {
                return Err(Error::Domain("vertex is not a lattice point".into()));
            }
            pts.push(DualVector::new(r[1..].iter().map(|x| x / t).collect()));
        }
        if pts.is_empty() {
            return Err(Error::Domain("half-spaces cut out the empty set".into()));
        }
        Self::from_points(dim, pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[DualVector] {
        &self.vertices
    }

    /// Facets sorted by normal vector.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn equations(&self) -> &[Facet] {
        &self.equations
    }

    /// Indices of the facets through vertex `i`.
    pub fn vertex_facets(&self, i: usize) -> &[usize] {
        &self.incidence[i]
    }

    pub fn affine_dim(&self) -> usize {
        self.dim - self.equations.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn contains(&self, m: &DualVector) -> bool {
        m.dim() == self.dim
            && self.facets.iter().all(|f| !facet_value(f, m).is_negative())
            && self.equations.iter().all(|e| facet_value(e, m).is_zero())
    }

    /// `psi_K(u) = min_{v in K} <v, u>`.
    pub fn support_function(&self, u: &LatticeVector) -> Result<Int> {
        u.check_dim(self.dim)?;
        Ok(self.vertices.iter().map(|v| dot(v.coords(), u.coords())).min().expect("nonempty"))
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let pts = self.vertices.iter().flat_map(|a| other.vertices.iter().map(move |b| a + b)).collect();
        Self::from_points(self.dim, pts)
    }

    /// `k K` for `k >= 0`.
    pub fn dilate(&self, k: u64) -> Self {
        let k = Int::from(k);
        Self::from_points(self.dim, self.vertices.iter().map(|v| v.scale(&k)).collect()).expect("nonempty")
    }

    pub fn translate(&self, m: &DualVector) -> Result<Self> {
        m.check_dim(self.dim)?;
        Self::from_points(self.dim, self.vertices.iter().map(|v| v + m).collect())
    }

    /// `-K`.
    pub fn negate(&self) -> Self {
        Self::from_points(self.dim, self.vertices.iter().map(|v| -v).collect()).expect("nonempty")
    }

    /// All points of `K ∩ M`, lexicographically ordered.
    pub fn lattice_points(&self) -> Vec<DualVector> {
        let d = self.dim;
        if d == 0 {
            return vec![DualVector::zero(0)];
        }
        let lo: Vec<Int> = (0..d).map(|i| self.vertices.iter().map(|v| v.coords()[i].clone()).min().unwrap()).collect();
        let hi: Vec<Int> = (0..d).map(|i| self.vertices.iter().map(|v| v.coords()[i].clone()).max().unwrap()).collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let m = DualVector::new(cur.clone());
            if self.contains(&m) {
                out.push(m);
            }
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1).zip(lo.iter().skip(i + 1)) {
                        *c.0 = c.1.clone();
                    }
                    break;
                }
            }
        }
    }

    /// Pairs of vertex indices spanning an edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let eq: Vec<Vec<Int>> = self.equations.iter().map(|e| e.normal.coords().to_vec()).collect();
        let mut out = Vec::new();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let mut normals = eq.clone();
                normals.extend(
                    self.incidence[i]
                        .iter()
                        .filter(|f| self.incidence[j].contains(f))
                        .map(|&f| self.facets[f].normal.coords().to_vec()),
                );
                if int_rank(&normals) + 1 == self.dim {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Primitive edge directions `l_1(S), ..., l_d(S)` at every vertex `S`, when
    /// each vertex meets exactly `d` edges and these directions form a basis of `M`.
    pub fn edge_bases(&self) -> Result<Option<Vec<Vec<DualVector>>>> {
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        let mut bases: Vec<Vec<DualVector>> = vec![Vec::new(); self.vertices.len()];
        for (i, j) in self.edges() {
            let dir = &self.vertices[j] - &self.vertices[i];
            let l = dir.primitive()?;
            bases[j].push(-&l);
            bases[i].push(l);
        }
        for b in &mut bases {
            if b.len() != self.dim {
                return Ok(None);
            }
            b.sort();
            let rows: Vec<Vec<Int>> = b.iter().map(|v| v.coords().to_vec()).collect();
            if !IntMatrix::from_rows(rows, self.dim)?.det()?.abs().is_one() {
                return Ok(None);
            }
        }
        Ok(Some(bases))
    }

    pub fn is_absolutely_simple(&self) -> bool {
        matches!(self.edge_bases(), Ok(Some(_)))
    }

    /// `N(K) = max_{S != S'} sum_i a_i` where `S' - S = sum_i a_i l_i(S)`.
    pub fn norm(&self) -> Result<Int> {
        let bases = self.edge_bases()?.ok_or(Error::NotAbsolutelySimple)?;
        let mut best = Int::zero();
        for (s, basis) in self.vertices.iter().zip(&bases) {
            let rows: Vec<Vec<Int>> = basis.iter().map(|v| v.coords().to_vec()).collect();
            let frame = dual_frame(&rows, self.dim).expect("basis");
            for t in &self.vertices {
                if t == s {
                    continue;
                }
                let diff = to_rat_vec((t - s).coords());
                let mut total = Int::zero();
                for w in &frame {
                    let a = dot_rat(w, &diff);
                    if !a.is_integer() || a.is_negative() {
                        return Err(Error::Inconsistent(format!("edge expansion coefficient {a} at vertex {s}")));
                    }
                    total += a.to_integer();
                }
                best = best.max(total);
            }
        }
        Ok(best)
    }

    /// Euclidean volume in `M_R` (zero unless full-dimensional).
    pub fn volume(&self) -> Rat {
        if !self.is_full_dimensional() {
            return Rat::zero();
        }
        let d = self.dim;
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut total = Int::zero();
        for simplex in self.triangulate(&all, d) {
            let v0 = &self.vertices[simplex[0]];
            let rows: Vec<Vec<Int>> = simplex[1..].iter().map(|&i| (&self.vertices[i] - v0).into_coords()).collect();
            total += IntMatrix::from_rows(rows, d).unwrap().det().unwrap().abs();
        }
        Rat::new(total, factorial(d))
    }

    /// Pulling triangulation of the `k`-dimensional face with vertex set `verts`.
    fn triangulate(&self, verts: &[usize], k: usize) -> Vec<Vec<usize>> {
        if verts.len() == k + 1 {
            return vec![verts.to_vec()];
        }
        let apex = verts[0];
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in 0..self.facets.len() {
            let w: Vec<usize> = verts.iter().copied().filter(|&v| self.incidence[v].contains(&f)).collect();
            if !w.contains(&apex) && self.affine_rank(&w) + 1 == k {
                faces.insert(w);
            }
        }
        let mut out = Vec::new();
        for face in faces {
            for mut s in self.triangulate(&face, k - 1) {
                s.insert(0, apex);
                out.push(s);
            }
        }
        out
    }

    fn affine_rank(&self, verts: &[usize]) -> usize {
        let Some(&first) = verts.first() else { return 0 };
        let rows: Vec<Vec<Int>> =
            verts[1..].iter().map(|&i| (&self.vertices[i] - &self.vertices[first]).into_coords()).collect();
        int_rank(&rows)
    }

    /// The normal fan (one cone per vertex, triangulated without new rays when
    /// not simplicial) and the ample divisor `a_i = -psi_K(u_i)` on it.
    pub fn normal_fan(&self) -> Result<(Fan, TDivisor)> {
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        let d = self.dim;
        let rays: Vec<LatticeVector> = self.facets.iter().map(|f| f.normal.clone()).collect();
        let mut cones = Vec::new();
        for tight in &self.incidence {
            if tight.len() == d {
                cones.push(tight.clone());
            } else {
                cones.extend(pulling_triangulation(&rays, tight, d));
            }
        }
        let coefficients = self.facets.iter().map(|f| -&f.offset).collect();
        let fan = Fan::from_cones_unchecked(d, rays, cones);
        Ok((fan, TDivisor::from_coefficients(coefficients)))
    }

    /// The image of `K - v_0` in the saturated lattice `M ∩ span(K - K)`, in
    /// coordinates of a basis of that lattice; `v_0` is the first vertex.
    pub fn reduce_to_span(&self) -> LatticePolytope {
        let v0 = &self.vertices[0];
        let diffs: Vec<Vec<Int>> = self.vertices.iter().map(|v| (v - v0).into_coords()).collect();
        let r = self.affine_dim();
        if r == self.dim {
            return self.translate(&-v0).expect("same dimension");
        }
        let ortho = IntMatrix::from_rows(diffs.clone(), self.dim).unwrap().integer_kernel();
        let basis = IntMatrix::from_rows(ortho, self.dim).unwrap().integer_kernel();
        debug_assert_eq!(basis.len(), r);
        let frame = dual_frame(&basis, self.dim).expect("basis");
        let pts = diffs
            .iter()
            .map(|x| {
                let x = to_rat_vec(x);
                DualVector::new(frame[..r].iter().map(|w| dot_rat(w, &x).to_integer()).collect())
            })
            .collect();
        LatticePolytope::from_points(r, pts).expect("nonempty")
    }
}

fn facet_value(f: &Facet, m: &DualVector) -> Int {
    dot(m.coords(), f.normal.coords()) - &f.offset
}

pub(crate) fn factorial(d: usize) -> Int {
    (1..=d).fold(Int::one(), |acc, i| acc * Int::from(i))
}

/// Convex hull of the support of a nonzero Laurent polynomial.
pub fn newton_polytope(p: &crate::laurent::LaurentPolynomial) -> Result<LatticePolytope> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    LatticePolytope::from_points(p.dim(), p.support().cloned().collect())
}

/// Mixed volume by inclusion–exclusion over Minkowski sums of subsets:
/// `d! V = sum_{S nonempty} (-1)^{d-|S|} vol(sum_{i in S} K_i)`.
pub fn mixed_volume_oracle(polytopes: &[LatticePolytope]) -> Result<Rat> {
    let d = polytopes.len();
    if let Some(p) = polytopes.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
    }
    if d == 0 {
        return Ok(Rat::one());
    }
    let mut total = Rat::zero();
    for mask in 1u64..(1 << d) {
        let mut sum: Option<LatticePolytope> = None;
        for (i, p) in polytopes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sum = Some(match sum {
                    None => p.clone(),
                    Some(s) => s.minkowski_sum(p)?,
                });
            }
        }
        let vol = sum.expect("nonempty subset").volume();
        if (d - mask.count_ones() as usize).is_multiple_of(2) {
            total += vol;
        } else {
            total -= vol;
        }
    }
    Ok(total / Rat::from_integer(factorial(d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dv(c: &[i64]) -> DualVector {
        DualVector::from_i64(c)
    }

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(c)
    }

    fn poly(pts: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::from_points(pts[0].len(), pts.iter().map(|p| dv(p)).collect()).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn hull_drops_interior_and_duplicates() {
        let k = poly(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1], &[0, 0], &[1, 0]]);
        assert_eq!(k.vertices(), &[dv(&[0, 0]), dv(&[0, 2]), dv(&[2, 0])]);
        assert_eq!(k.facets().len(), 3);
        let seg = poly(&[&[0, 0], &[1, 1], &[2, 2]]);
        assert_eq!(seg.vertices().len(), 2);
        assert_eq!(seg.affine_dim(), 1);
        let pt = poly(&[&[3, -1]]);
        assert_eq!(pt.affine_dim(), 0);
        assert_eq!(pt.vertices(), &[dv(&[3, -1])]);
    }

    #[test]
    fn support_function_examples() {
        let k = LatticePolytope::unit_simplex(2);
        assert_eq!(k.support_function(&lv(&[-1, -1])).unwrap(), Int::from(-1));
        assert_eq!(k.support_function(&lv(&[1, 0])).unwrap(), Int::zero());
        assert_eq!(poly(&[&[3, 4], &[-2, 7]]).support_function(&lv(&[0, 0])).unwrap(), Int::zero());
    }

    #[test]
    fn minkowski_examples() {
        let s = poly(&[&[0], &[1]]);
        assert_eq!(s.minkowski_sum(&s).unwrap(), poly(&[&[0], &[2]]));
        let a = poly(&[&[0, 0], &[1, 0]]);
        let b = poly(&[&[0, 0], &[0, 1]]);
        assert_eq!(a.minkowski_sum(&b).unwrap(), LatticePolytope::unit_cube(2));
        let k = LatticePolytope::unit_simplex(2);
        assert_eq!(k.minkowski_sum(&LatticePolytope::point(dv(&[0, 0]))).unwrap(), k);
    }

    #[test]
    fn normal_fan_examples() {
        let (fan, e) = LatticePolytope::unit_simplex(2).normal_fan().unwrap();
        assert_eq!(fan.rays(), &[lv(&[-1, -1]), lv(&[0, 1]), lv(&[1, 0])]);
        assert!(fan.is_complete().unwrap() && fan.is_smooth());
        assert_eq!(e.coefficients(), &[Int::one(), Int::zero(), Int::zero()]);

        let (fan, e) = LatticePolytope::unit_cube(2).normal_fan().unwrap();
        assert_eq!(fan.rays(), &[lv(&[-1, 0]), lv(&[0, -1]), lv(&[0, 1]), lv(&[1, 0])]);
        assert_eq!(fan.maximal_cones().len(), 4);
        assert_eq!(e.coefficients(), &[Int::one(), Int::one(), Int::zero(), Int::zero()]);

        let (fan, _) = LatticePolytope::unit_simplex(3).normal_fan().unwrap();
        assert_eq!(fan.rays().len(), 4);
        assert!(fan.is_smooth() && fan.is_complete().unwrap());

        assert_eq!(LatticePolytope::point(dv(&[0, 0])).normal_fan().unwrap_err(), Error::NotFullDimensional);
    }

    #[test]
    fn normal_fan_of_octahedron_is_triangulated() {
        let k = poly(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]]);
        let (fan, _) = k.normal_fan().unwrap();
        assert_eq!(fan.rays().len(), 8);
        assert_eq!(fan.maximal_cones().len(), 12);
        let checked = Fan::new(3, fan.rays().to_vec(), fan.maximal_cones().to_vec()).unwrap();
        assert!(checked.is_complete().unwrap());
    }

    #[test]
    fn lattice_point_examples() {
        assert_eq!(LatticePolytope::unit_simplex(2).lattice_points(), vec![dv(&[0, 0]), dv(&[0, 1]), dv(&[1, 0])]);
        assert_eq!(LatticePolytope::unit_simplex(2).dilate(2).lattice_points().len(), 6);
        assert_eq!(LatticePolytope::point(dv(&[2, -5])).lattice_points(), vec![dv(&[2, -5])]);
    }

    #[test]
    fn absolute_simplicity_examples() {
        let simplex = LatticePolytope::unit_simplex(2);
        let bases = simplex.edge_bases().unwrap().unwrap();
        let origin = simplex.vertices().iter().position(|v| v == &dv(&[0, 0])).unwrap();
        assert_eq!(bases[origin], vec![dv(&[0, 1]), dv(&[1, 0])]);
        // edge (2,0)-(1,2) has direction (-1,2), giving det 2 at (2,0)
        assert!(!poly(&[&[0, 0], &[2, 0], &[0, 1], &[1, 2]]).is_absolutely_simple());
        assert!(LatticePolytope::unit_cube(2).is_absolutely_simple());
        // octahedron: four edges at each vertex in dimension 3
        let oct = poly(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]]);
        assert!(!oct.is_absolutely_simple());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(LatticePolytope::unit_simplex(2).norm().unwrap(), Int::one());
        assert_eq!(LatticePolytope::unit_simplex(3).norm().unwrap(), Int::one());
        assert_eq!(LatticePolytope::unit_simplex(2).dilate(3).norm().unwrap(), Int::from(3));
        assert_eq!(LatticePolytope::unit_cube(2).norm().unwrap(), Int::from(2));
        assert_eq!(LatticePolytope::unit_cube(3).norm().unwrap(), Int::from(3));
        assert_eq!(poly(&[&[0], &[1]]).norm().unwrap(), Int::one());
        assert_eq!(poly(&[&[0, 0], &[2, 0], &[0, 1], &[1, 2]]).norm(), Err(Error::NotAbsolutelySimple));
    }

    #[test]
    fn newton_examples() {
        use crate::laurent::LaurentPolynomial;
        let p = LaurentPolynomial::from_i64(2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(newton_polytope(&p).unwrap(), LatticePolytope::unit_simplex(2));
        let p = LaurentPolynomial::from_i64(2, &[(&[1, 0], 1), (&[0, 0], -2)]);
        assert_eq!(newton_polytope(&p).unwrap(), poly(&[&[0, 0], &[1, 0]]));
        let p = LaurentPolynomial::from_i64(2, &[(&[2, 1], 5)]);
        assert_eq!(newton_polytope(&p).unwrap(), LatticePolytope::point(dv(&[2, 1])));
        assert_eq!(newton_polytope(&LaurentPolynomial::zero(2)).unwrap_err(), Error::ZeroPolynomial);
    }

    #[test]
    fn volume_examples() {
        assert_eq!(LatticePolytope::unit_simplex(2).volume(), rat(1, 2));
        assert_eq!(LatticePolytope::unit_simplex(3).volume(), rat(1, 6));
        assert_eq!(LatticePolytope::unit_cube(3).volume(), rat(1, 1));
        let oct = poly(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]]);
        assert_eq!(oct.volume(), rat(4, 3));
        let hex = poly(&[&[1, 0], &[0, 1], &[-1, 1], &[-1, 0], &[0, -1], &[1, -1]]);
        assert_eq!(hex.volume(), rat(3, 1));
        assert_eq!(poly(&[&[0, 0], &[3, 3]]).volume(), Rat::zero());
    }

    #[test]
    fn oracle_examples() {
        let a = poly(&[&[0, 0], &[1, 0]]);
        let b = poly(&[&[0, 0], &[0, 1]]);
        assert_eq!(mixed_volume_oracle(&[a, b]).unwrap(), rat(1, 2));
        let k = LatticePolytope::unit_cube(2);
        assert_eq!(mixed_volume_oracle(&[k.clone(), k]).unwrap(), rat(1, 1));
        let s = LatticePolytope::unit_simplex(3);
        assert_eq!(mixed_volume_oracle(&[s.clone(), s.clone(), s]).unwrap(), rat(1, 6));
    }

    #[test]
    fn halfspace_rebuild_of_example() {
        let k = poly(&[&[0, 0], &[2, 0], &[0, 1], &[1, 2]]);
        assert_eq!(LatticePolytope::from_halfspaces(2, k.facets()).unwrap(), k);
        let open = [Facet { normal: lv(&[1, 0]), offset: Int::zero() }];
        assert!(LatticePolytope::from_halfspaces(2, &open).is_err());
    }

    #[test]
    fn reduce_to_span_examples() {
        let seg = poly(&[&[1, 1, 0], &[3, 3, 0]]);
        let r = seg.reduce_to_span();
        assert_eq!(r.dim(), 1);
        assert!(r.is_full_dimensional());
        assert_eq!(r.volume(), rat(2, 1));
        let tri = poly(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let r = tri.reduce_to_span();
        assert_eq!(r.dim(), 2);
        assert!(r.is_absolutely_simple());
        assert_eq!(r.norm().unwrap(), Int::one());
    }

    fn arb_polytope(d: usize) -> impl Strategy<Value = LatticePolytope> {
        prop::collection::vec(prop::collection::vec(0i64..=3, d), 1..7)
            .prop_map(move |pts| LatticePolytope::from_points(d, pts.iter().map(|p| dv(p)).collect()).unwrap())
    }

    fn arb_full(d: usize) -> impl Strategy<Value = LatticePolytope> {
        arb_polytope(d).prop_filter("full-dimensional", |p| p.is_full_dimensional())
    }

    proptest! {
        #[test]
        fn support_function_is_additive(a in arb_polytope(2), b in arb_polytope(2), u in prop::collection::vec(-5i64..=5, 2)) {
            let u = lv(&u);
            let s = a.minkowski_sum(&b).unwrap();
            prop_assert_eq!(s.support_function(&u).unwrap(), a.support_function(&u).unwrap() + b.support_function(&u).unwrap());
        }

        #[test]
        fn polytope_is_recovered_from_its_facets(k in arb_full(3)) {
            prop_assert_eq!(LatticePolytope::from_halfspaces(3, k.facets()).unwrap(), k.clone());
            for v in k.vertices() {
                prop_assert!(k.contains(v));
            }
        }

        #[test]
        fn normal_fan_is_complete_and_smooth_when_simple(k in arb_full(2)) {
            let (fan, _) = k.normal_fan().unwrap();
            prop_assert!(fan.is_complete().unwrap());
            if k.is_absolutely_simple() {
                prop_assert!(fan.is_smooth());
            }
            let checked = Fan::new(2, fan.rays().to_vec(), fan.maximal_cones().to_vec());
            prop_assert!(checked.is_ok());
        }

        #[test]
        fn lattice_points_of_sum_contain_sums(a in arb_polytope(2), b in arb_polytope(2)) {
            let s = a.minkowski_sum(&b).unwrap();
            let pts: BTreeSet<DualVector> = s.lattice_points().into_iter().collect();
            for p in a.lattice_points() {
                for q in b.lattice_points() {
                    prop_assert!(pts.contains(&(&p + &q)));
                }
            }
        }

        #[test]
        fn oracle_is_symmetric_and_multilinear(a in arb_polytope(2), b in arb_polytope(2), k in 0u64..3) {
            let ab = mixed_volume_oracle(&[a.clone(), b.clone()]).unwrap();
            prop_assert_eq!(&ab, &mixed_volume_oracle(&[b.clone(), a.clone()]).unwrap());
            let kab = mixed_volume_oracle(&[a.dilate(k), b.clone()]).unwrap();
            prop_assert_eq!(kab, ab.clone() * Rat::from_integer(Int::from(k)));
            let aa = mixed_volume_oracle(&[a.clone(), a.clone()]).unwrap();
            prop_assert_eq!(aa, a.volume());
        }

        #[test]
        fn volume_matches_pick_in_the_plane(k in arb_full(2)) {
            // Pick: A = I + B/2 - 1
            let pts = k.lattice_points();
            let boundary = pts.iter().filter(|p| k.facets().iter().any(|f| facet_value(f, p).is_zero())).count() as i64;
            let interior = pts.len() as i64 - boundary;
            prop_assert_eq!(k.volume(), rat(2 * interior + boundary - 2, 2));
        }
    }
}
