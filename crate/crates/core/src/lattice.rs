//! Exact integer and rational linear algebra on the lattice `N` and its dual `M`.
//!
//! Vectors of `N` and `M` are distinct types; the only way to combine them is
//! [`pairing`].

use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Marker for the lattice a [`Vector`] lives in.
pub trait LatticeKind: Copy + Clone + fmt::Debug + PartialEq + Eq + PartialOrd + Ord + std::hash::Hash {
    const NAME: &'static str;
}

/// The lattice `N` of one-parameter subgroups.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NKind;

/// The character lattice `M`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MKind;

impl LatticeKind for NKind {
    const NAME: &'static str = "N";
}

impl LatticeKind for MKind {
    const NAME: &'static str = "M";
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector<K: LatticeKind> {
    coords: Vec<Int>,
    kind: PhantomData<K>,
}

pub type LatticeVector = Vector<NKind>;
pub type DualVector = Vector<MKind>;

impl<K: LatticeKind> fmt::Debug for Vector<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", K::NAME, self)
    }
}

impl<K: LatticeKind> fmt::Display for Vector<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<K: LatticeKind> Vector<K> {
    pub fn new(coords: Vec<Int>) -> Self {
        Vector { coords, kind: PhantomData }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![Int::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[i] = Int::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Int> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn content(&self) -> Int {
        self.coords.iter().fold(Int::zero(), |g, c| g.gcd(c))
    }

    pub fn scale(&self, k: &Int) -> Self {
        Self::new(self.coords.iter().map(|c| c * k).collect())
    }

    /// `v / gcd(v)`.
    pub fn primitive(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let g = self.content();
        Ok(Self::new(self.coords.iter().map(|c| c / &g).collect()))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn to_rat(&self) -> Vec<Rat> {
        self.coords.iter().map(|c| Rat::from_integer(c.clone())).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.coords.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.dim() });
        }
        Ok(())
    }
}

impl<K: LatticeKind> Add for &Vector<K> {
    type Output = Vector<K>;
    fn add(self, rhs: &Vector<K>) -> Vector<K> {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        Vector::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl<K: LatticeKind> Sub for &Vector<K> {
    type Output = Vector<K>;
    fn sub(self, rhs: &Vector<K>) -> Vector<K> {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        Vector::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl<K: LatticeKind> Neg for &Vector<K> {
    type Output = Vector<K>;
    fn neg(self) -> Vector<K> {
        Vector::new(self.coords.iter().map(|c| -c).collect())
    }
}

/// `<m, n> = sum m_i n_i`.
pub fn pairing(m: &DualVector, n: &LatticeVector) -> Result<Int> {
    n.check_dim(m.dim())?;
    Ok(dot(m.coords(), n.coords()))
}

pub(crate) fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divides an integer vector by the gcd of its entries. Zero stays zero.
pub(crate) fn normalize_int(v: &mut [Int]) {
    let g = v.iter().fold(Int::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// Smallest positive integer multiple of a rational vector.
pub(crate) fn clear_denominators(v: &[Rat]) -> Vec<Int> {
    let l = v.iter().fold(Int::one(), |l, c| l.lcm(c.denom()));
    let mut out: Vec<Int> = v.iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
    normalize_int(&mut out);
    out
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length. An empty list gives a `0 x cols` matrix.
    pub fn from_rows(rows: Vec<Vec<Int>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r);
        }
        Ok(IntMatrix { rows: n, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect(), cols)
            .expect("ragged matrix literal")
    }

    pub fn from_vectors<K: LatticeKind>(vs: &[Vector<K>], dim: usize) -> Result<Self> {
        Self::from_rows(vs.iter().map(|v| v.coords().to_vec()).collect(), dim)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<Int> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    /// Row Hermite normal form: returns `(H, U)` with `U` unimodular and `U * self = H`.
    ///
    /// Pivots of `H` are positive, entries above a pivot are reduced into
    /// `[0, pivot)`, and zero rows come last.
    pub fn hermite_normal_form(&self) -> (IntMatrix, IntMatrix) {
        let m = self.rows;
        let n = self.cols;
        let mut h = self.clone();
        let mut u = IntMatrix::identity(m);
        let mut p = 0;
        for col in 0..n {
            if p == m {
                break;
            }
            for i in p + 1..m {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let a = h[(p, col)].clone();
                let b = h[(i, col)].clone();
                let e = a.extended_gcd(&b);
                let (g, x, y) = (e.gcd, e.x, e.y);
                let (ag, bg) = (&a / &g, &b / &g);
                // [x y; -b/g a/g] has determinant 1
                row_combine(&mut h, p, i, &x, &y, &(-&bg), &ag);
                row_combine(&mut u, p, i, &x, &y, &(-&bg), &ag);
            }
            if h[(p, col)].is_zero() {
                continue;
            }
            if h[(p, col)].is_negative() {
                negate_row(&mut h, p);
                negate_row(&mut u, p);
            }
            let piv = h[(p, col)].clone();
            for i in 0..p {
                let q = h[(i, col)].div_floor(&piv);
                if !q.is_zero() {
                    sub_row_multiple(&mut h, i, p, &q);
                    sub_row_multiple(&mut u, i, p, &q);
                }
            }
            p += 1;
        }
        (h, u)
    }

    pub fn rank(&self) -> usize {
        rat_rank(&self.to_rows().iter().map(|r| to_rat_vec(r)).collect::<Vec<_>>())
    }

    /// Z-basis of `{x in Z^cols : self * x = 0}`.
    pub fn integer_kernel(&self) -> Vec<Vec<Int>> {
        let t = self.transpose();
        let (h, u) = t.hermite_normal_form();
        (0..h.rows).filter(|&i| h.row(i).iter().all(Zero::is_zero)).map(|i| u.row(i).to_vec()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

fn row_combine(m: &mut IntMatrix, p: usize, i: usize, a: &Int, b: &Int, c: &Int, d: &Int) {
    for j in 0..m.cols {
        let rp = m[(p, j)].clone();
        let ri = m[(i, j)].clone();
        m[(p, j)] = a * &rp + b * &ri;
        m[(i, j)] = c * &rp + d * &ri;
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for j in 0..m.cols {
        let v = -&m[(i, j)];
        m[(i, j)] = v;
    }
}

fn sub_row_multiple(m: &mut IntMatrix, i: usize, p: usize, q: &Int) {
    for j in 0..m.cols {
        let v = &m[(i, j)] - q * &m[(p, j)];
        m[(i, j)] = v;
    }
}

pub fn det(m: &IntMatrix) -> Result<Int> {
    m.det()
}

pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    m.hermite_normal_form()
}

/// Whether `v` lies in the integer span of `gens`.
pub fn in_sublattice(v: &LatticeVector, gens: &[LatticeVector]) -> Result<bool> {
    let d = v.dim();
    for g in gens {
        g.check_dim(d)?;
    }
    Ok(in_integer_span(v.coords(), &gens.iter().map(|g| g.coords().to_vec()).collect::<Vec<_>>()))
}

pub(crate) fn in_integer_span(v: &[Int], gens: &[Vec<Int>]) -> bool {
    if gens.is_empty() {
        return v.iter().all(Zero::is_zero);
    }
    let h = IntMatrix::from_rows(gens.to_vec(), v.len()).expect("generator dimension").hermite_normal_form().0;
    let mut rest = v.to_vec();
    let mut col = 0;
    for r in 0..h.rows() {
        let row = h.row(r);
        while col < row.len() && row[col].is_zero() {
            col += 1;
        }
        if col == row.len() {
            break;
        }
        let (q, rem) = rest[col].div_rem(&row[col]);
        if !rem.is_zero() {
            return false;
        }
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    rest.iter().all(Zero::is_zero)
}

/// Gcd of all maximal minors of a `k x d` matrix of linearly independent rows.
///
/// Equals 1 exactly when the rows extend to a basis of `Z^d`.
pub(crate) fn minor_gcd(rows: &[Vec<Int>], d: usize) -> Int {
    let k = rows.len();
    if k == 0 {
        return Int::one();
    }
    let mut g = Int::zero();
    for cols in combinations(d, k) {
        let sub: Vec<Vec<Int>> = rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        let det = IntMatrix::from_rows(sub, k).expect("square minor").det().expect("square minor");
        g = g.gcd(&det);
        if g.is_one() {
            break;
        }
    }
    g
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub(crate) fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|c| Rat::from_integer(c.clone())).collect()
}

/// Reduced row echelon form over Q; returns pivot columns.
pub(crate) fn rref(rows: &mut [Vec<Rat>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub(crate) fn rat_rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

pub(crate) fn int_rank(rows: &[Vec<Int>]) -> usize {
    rat_rank(&rows.iter().map(|r| to_rat_vec(r)).collect::<Vec<_>>())
}

pub(crate) fn rat_inverse(rows: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = rows.len();
    let mut aug: Vec<Vec<Rat>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Rows `w_i` dual to an independent family `vs` completed to a basis of `Q^d`
/// by standard vectors: `<w_i, vs_j> = delta_ij` for `j < k`, and the remaining
/// rows vanish on `span(vs)`. Entries are rational.
pub(crate) fn dual_frame(vs: &[Vec<Int>], d: usize) -> Option<Vec<Vec<Rat>>> {
    let mut basis: Vec<Vec<Int>> = vs.to_vec();
    if int_rank(&basis) < basis.len() {
        return None;
    }
    for j in 0..d {
        if basis.len() == d {
            break;
        }
        let mut e = vec![Int::zero(); d];
        e[j] = Int::one();
        basis.push(e);
        if int_rank(&basis) < basis.len() {
            basis.pop();
        }
    }
    // columns of B are the basis vectors; rows of B^{-1} are the dual frame
    let b_rows: Vec<Vec<Rat>> =
        (0..d).map(|i| basis.iter().map(|v| Rat::from_integer(v[i].clone())).collect()).collect();
    rat_inverse(&b_rows)
}
