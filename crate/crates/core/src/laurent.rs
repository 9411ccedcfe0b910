//! Laurent polynomials with rational coefficients and exponents in `M`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{DualVector, Int, Rat};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    dim: usize,
    terms: BTreeMap<DualVector, Rat>,
}

impl LaurentPolynomial {
    pub fn zero(dim: usize) -> Self {
        LaurentPolynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        Self::monomial(DualVector::zero(dim), c)
    }

    /// `c x^m`.
    pub fn monomial(m: DualVector, c: Rat) -> Self {
        let dim = m.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPolynomial { dim, terms }
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (DualVector, Rat)>) -> Result<Self> {
        let mut map: BTreeMap<DualVector, Rat> = BTreeMap::new();
        for (m, c) in terms {
            m.check_dim(dim)?;
            *map.entry(m).or_insert_with(Rat::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(LaurentPolynomial { dim, terms: map })
    }

    /// Integer-coefficient shorthand; panics on dimension mismatch.
    pub fn from_i64(dim: usize, terms: &[(&[i64], i64)]) -> Self {
        Self::from_terms(dim, terms.iter().map(|(m, c)| (DualVector::from_i64(m), Rat::from_integer(Int::from(*c)))))
            .expect("exponent dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DualVector, &Rat)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &DualVector> {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &DualVector) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Sum of the absolute values of the coefficients.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum()
    }

    /// Value at a point of `(C^*)^d`.
    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mono = m.coords().iter().zip(x).fold(Complex64::one(), |acc, (e, z)| acc * powi(*z, e));
                mono * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    /// Exact value at a point of `(Q^*)^d`.
    pub fn eval_rational(&self, x: &[Rat]) -> Result<Rat> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        if x.iter().any(|c| c.is_zero()) {
            return Err(Error::ZeroCoordinate);
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.coords().iter().zip(x).fold(c.clone(), |acc, (e, xi)| {
                    let e = e.to_i32().expect("exponent fits in i32");
                    acc * num_traits::pow::Pow::pow(xi, e)
                })
            })
            .sum())
    }
}

fn powi(z: Complex64, e: &Int) -> Complex64 {
    let e = e.to_i32().expect("exponent fits in i32");
    z.powi(e)
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, other: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        LaurentPolynomial::from_terms(self.dim, self.terms().chain(other.terms()).map(|(m, c)| (m.clone(), c.clone())))
            .expect("same dimension")
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, other: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let prods = self.terms().flat_map(|(a, x)| other.terms().map(move |(b, y)| (a + b, x * y)));
        LaurentPolynomial::from_terms(self.dim, prods).expect("same dimension")
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (j, e) in m.coords().iter().enumerate() {
                if !e.is_zero() {
                    write!(f, "*x{}^{}", j + 1, e)?;
                }
            }
        }
        Ok(())
    }
}
