//! Mahler measures of Laurent polynomials and the Bloch–Wigner dilogarithm.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{dot_rat, dual_frame, int_rank, to_rat_vec, Int, Rat};
use crate::laurent::LaurentPolynomial;

/// How a Mahler measure value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Closed form (constant, binomial or trinomial with independent exponents).
    ClosedForm,
    /// Jensen's formula with numerically computed roots.
    Jensen,
    /// Midpoint rule on the torus.
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MahlerEstimate {
    pub value: f64,
    /// Points per axis of the last grid (0 when no grid was used).
    pub grid: usize,
    /// `|E(n) - E(n/2)|` for the last two grids; zero for closed forms.
    pub error: f64,
    pub method: Method,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MahlerOptions {
    pub initial_grid: usize,
    pub tol: f64,
    pub max_grid: usize,
    /// Upper bound on the number of points of a grid, `n^d`.
    pub max_points: usize,
}

impl Default for MahlerOptions {
    fn default() -> Self {
        MahlerOptions { initial_grid: 16, tol: 1e-6, max_grid: 1 << 20, max_points: 1 << 22 }
    }
}

impl MahlerEstimate {
    pub fn converged(&self, tol: f64) -> bool {
        self.error <= tol
    }
}

/// Midpoint-rule estimate of `M(P)` on grids `n, 2n, 4n, ...` until two
/// successive values differ by less than `tol` or the caps are hit.
pub fn mahler_numeric(p: &LaurentPolynomial, opts: &MahlerOptions) -> Result<MahlerEstimate> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if opts.initial_grid < 8 {
        return Err(Error::GridTooSmall(opts.initial_grid));
    }
    let d = p.dim();
    if d == 0 {
        let c = p.coefficient(&crate::lattice::DualVector::zero(0));
        return Ok(MahlerEstimate { value: rat_abs_ln(&c), grid: 0, error: 0.0, method: Method::ClosedForm });
    }
    let terms: Vec<(Vec<i64>, f64)> = p
        .terms()
        .map(|(m, c)| {
            (m.coords().iter().map(|e| e.to_i64().expect("exponent fits in i64")).collect(), c.to_f64().unwrap())
        })
        .collect();
    let fits = |n: usize| n <= opts.max_grid && (n as f64).powi(d as i32) <= opts.max_points as f64;
    let mut n = opts.initial_grid;
    let mut prev = grid_mean(&terms, d, n)?;
    loop {
        let next_n = 2 * n;
        if !fits(next_n) {
            return Ok(MahlerEstimate { value: prev, grid: n, error: f64::INFINITY, method: Method::Numeric });
        }
        let next = grid_mean(&terms, d, next_n)?;
        let error = (next - prev).abs();
        n = next_n;
        prev = next;
        if error < opts.tol {
            return Ok(MahlerEstimate { value: prev, grid: n, error, method: Method::Numeric });
        }
        if !fits(2 * n) {
            return Ok(MahlerEstimate { value: prev, grid: n, error, method: Method::Numeric });
        }
    }
}

/// Mean of `log|P|` over the grid `theta_j = 2 pi (j + s) / n`, trying a few shifts `s`
/// when the midpoint grid hits the zero set.
fn grid_mean(terms: &[(Vec<i64>, f64)], d: usize, n: usize) -> Result<f64> {
    for shift in [0.5, 0.5 + 0.137_281, 0.5 - 0.291_177] {
        if let Some(v) = grid_mean_shifted(terms, d, n, shift) {
            return Ok(v);
        }
    }
    Err(Error::NonFiniteIntegrand)
}

fn grid_mean_shifted(terms: &[(Vec<i64>, f64)], d: usize, n: usize, shift: f64) -> Option<f64> {
    // tables[t][j][k] = c_t^{[j == 0]} e^{i m_tj theta_k}
    let tables: Vec<Vec<Vec<Complex64>>> = terms
        .iter()
        .map(|(m, c)| {
            (0..d)
                .map(|j| {
                    (0..n)
                        .map(|k| {
                            let theta = 2.0 * PI * (k as f64 + shift) / n as f64;
                            let z = Complex64::from_polar(1.0, (m[j] as f64) * theta);
                            if j == 0 {
                                z * c
                            } else {
                                z
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let rest = n.pow(d as u32 - 1);
    let rows: Vec<Option<f64>> = (0..n)
        .into_par_iter()
        .map(|k0| {
            let mut sum = 0.0;
            let mut comp = 0.0;
            let mut idx = vec![0usize; d];
            idx[0] = k0;
            for flat in 0..rest {
                let mut f = flat;
                for slot in idx.iter_mut().skip(1) {
                    *slot = f % n;
                    f /= n;
                }
                let mut val = Complex64::zero();
                for table in &tables {
                    let mut t = table[0][idx[0]];
                    for j in 1..d {
                        t *= table[j][idx[j]];
                    }
                    val += t;
                }
                let l = val.norm().ln();
                if !l.is_finite() {
                    return None;
                }
                // Kahan summation
                let y = l - comp;
                let s = sum + y;
                comp = (s - sum) - y;
                sum = s;
            }
            Some(sum)
        })
        .collect();
    let mut total = 0.0;
    for r in rows {
        total += r?;
    }
    Some(total / (n as f64).powi(d as i32))
}

fn rat_abs_ln(c: &Rat) -> f64 {
    int_ln(&c.numer().abs()) - int_ln(c.denom())
}

/// Natural log of a positive integer of any size.
pub(crate) fn int_ln(x: &Int) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 900;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log|a_n| + sum log max(1, |rho|)` over the roots of a univariate Laurent polynomial.
pub fn mahler_univariate_exact(p: &LaurentPolynomial) -> Result<f64> {
    if p.dim() != 1 {
        return Err(Error::NotUnivariate);
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let pairs: Vec<(i64, Rat)> = p.terms().map(|(m, c)| (m.coords()[0].to_i64().unwrap(), c.clone())).collect();
    Ok(jensen(&pairs))
}

/// Jensen's formula for `sum c_k y^{e_k}`.
fn jensen(terms: &[(i64, Rat)]) -> f64 {
    let lo = terms.iter().map(|t| t.0).min().unwrap();
    let hi = terms.iter().map(|t| t.0).max().unwrap();
    let deg = (hi - lo) as usize;
    let lead = terms.iter().find(|t| t.0 == hi).unwrap().1.clone();
    let mut value = rat_abs_ln(&lead);
    if deg == 0 {
        return value;
    }
    // monic coefficients a_0 .. a_{deg-1} of y^deg + ...
    let mut a = vec![0.0; deg];
    for (e, c) in terms {
        let k = (*e - lo) as usize;
        if k < deg {
            a[k] = (c / &lead).to_f64().unwrap();
        }
    }
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -a[i];
    }
    for root in comp.complex_eigenvalues().iter() {
        let root = polish(root, &a);
        value += root.norm().ln().max(0.0);
    }
    value
}

/// Newton steps on the monic polynomial with lower coefficients `a`, kept only while they reduce `|p(z)|`.
fn polish(z: &Complex64, a: &[f64]) -> Complex64 {
    let eval = |z: Complex64| {
        let mut p = Complex64::one();
        let mut dp = Complex64::zero();
        for k in (0..a.len()).rev() {
            dp = dp * z + p;
            p = p * z + a[k];
        }
        (p, dp)
    };
    let mut z = *z;
    let (mut p, mut dp) = eval(z);
    for _ in 0..3 {
        let step = p / dp;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        let next = z - step;
        let (np, ndp) = eval(next);
        if np.norm() >= p.norm() {
            break;
        }
        (z, p, dp) = (next, np, ndp);
    }
    z
}

/// Coefficients `B_n / (n+1)!` for `n = 0 .. 60`.
fn bernoulli_series() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let count = 60usize;
        let mut b: Vec<Rat> = Vec::with_capacity(count);
        for m in 0..count {
            if m == 0 {
                b.push(Rat::one());
                continue;
            }
            let mut s = Rat::zero();
            let mut binom = Int::one();
            for (k, bk) in b.iter().enumerate() {
                s += Rat::from_integer(binom.clone()) * bk;
                binom = binom * Int::from(m + 1 - k) / Int::from(k + 1);
            }
            b.push(-s / Rat::from_integer(Int::from(m + 1)));
        }
        let mut fact = Int::one();
        b.iter()
            .enumerate()
            .map(|(n, bn)| {
                fact *= Int::from(n + 1);
                (bn / Rat::from_integer(fact.clone())).to_f64().unwrap()
            })
            .collect()
    })
}

/// `li_2(z)` for `|z| <= 1`, `Re z <= 1/2`.
fn li2_reduced(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let mut sum = Complex64::zero();
        let mut pw = z;
        for k in 1..200 {
            let term = pw / (k * k) as f64;
            sum += term;
            if term.norm() < 1e-18 {
                break;
            }
            pw *= z;
        }
        sum
    } else {
        let u = -(Complex64::one() - z).ln();
        let mut sum = Complex64::zero();
        let mut pw = u;
        for &c in bernoulli_series() {
            let term = pw * c;
            sum += term;
            pw *= u;
        }
        sum
    }
}

/// `D(z) = Im li_2(z) + log|z| arg(1 - z)`.
pub fn bloch_wigner(z: Complex64) -> Result<f64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z == Complex64::zero() || z == Complex64::one() {
        return Err(Error::Domain(format!("D is undefined at {z}")));
    }
    Ok(bw(z))
}

fn bw(z: Complex64) -> f64 {
    if z.im == 0.0 {
        return 0.0;
    }
    if z.norm() > 1.0 {
        return -bw(z.inv());
    }
    if z.re > 0.5 {
        return -bw(Complex64::one() - z);
    }
    li2_reduced(z).im + z.norm().ln() * (Complex64::one() - z).arg()
}

/// `I(a_0, ..., a_n) = M(a_0 + a_1 x_1 + ... + a_n x_n)` for `n <= 2`.
pub fn mahler_linear_form(moduli: &[f64]) -> Result<f64> {
    if moduli.is_empty() || moduli.len() > 3 {
        return Err(Error::Domain(format!("expected 1 to 3 moduli, got {}", moduli.len())));
    }
    if let Some(a) = moduli.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
        return Err(Error::Domain(format!("modulus {a} is not a nonnegative real")));
    }
    let a: Vec<f64> = moduli.iter().copied().filter(|&x| x > 0.0).collect();
    let max = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if a.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if a.len() < 3 {
        return Ok(max.ln());
    }
    let (a0, a1, a2) = (a[0], a[1], a[2]);
    if a0 >= a1 + a2 || a1 >= a0 + a2 || a2 >= a0 + a1 {
        return Ok(max.ln());
    }
    let angle = |opp: f64, x: f64, y: f64| ((x * x + y * y - opp * opp) / (2.0 * x * y)).clamp(-1.0, 1.0).acos();
    let al0 = angle(a0, a1, a2);
    let al1 = angle(a1, a0, a2);
    let al2 = PI - al0 - al1;
    let d = bw(Complex64::from_polar(a1 / a0, al2));
    Ok((al0 * a0.ln() + al1 * a1.ln() + al2 * a2.ln() + d) / PI)
}

/// `M(P)` by the cheapest applicable route: closed forms for at most three
/// monomials in general position, Jensen's formula when the exponents are
/// collinear, and the midpoint rule otherwise.
pub fn mahler_measure(p: &LaurentPolynomial, opts: &MahlerOptions) -> Result<MahlerEstimate> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let closed = |value| MahlerEstimate { value, grid: 0, error: 0.0, method: Method::ClosedForm };
    let terms: Vec<(Vec<Int>, Rat)> = p.terms().map(|(m, c)| (m.coords().to_vec(), c.clone())).collect();
    let base = terms[0].0.clone();
    let diffs: Vec<Vec<Int>> =
        terms[1..].iter().map(|(m, _)| m.iter().zip(&base).map(|(a, b)| a - b).collect()).collect();
    let rank = int_rank(&diffs);
    if terms.len() == 1 {
        return Ok(closed(rat_abs_ln(&terms[0].1)));
    }
    if rank == terms.len() - 1 && terms.len() <= 3 {
        let moduli: Vec<f64> = terms.iter().map(|(_, c)| c.abs().to_f64().unwrap()).collect();
        return Ok(closed(mahler_linear_form(&moduli)?));
    }
    if rank == 1 {
        let dir = diffs.iter().find(|v| v.iter().any(|x| !x.is_zero())).unwrap();
        let frame = dual_frame(std::slice::from_ref(dir), p.dim()).expect("nonzero direction");
        let g = dir.iter().fold(Int::zero(), |g, x| num_integer::Integer::gcd(&g, x));
        // exponent along the primitive direction dir / g
        let pairs: Vec<(i64, Rat)> = std::iter::once((0i64, terms[0].1.clone()))
            .chain(diffs.iter().zip(&terms[1..]).map(|(v, (_, c))| {
                let t = dot_rat(&frame[0], &to_rat_vec(v)) * Rat::from_integer(g.clone());
                (t.to_integer().to_i64().unwrap(), c.clone())
            }))
            .collect();
        return Ok(MahlerEstimate { value: jensen(&pairs), grid: 0, error: 0.0, method: Method::Jensen });
    }
    mahler_numeric(p, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const CATALAN: f64 = 0.915_965_594_177_219;
    const D_MAX: f64 = 1.014_941_606_409_653_6;

    fn numeric_opts() -> MahlerOptions {
        MahlerOptions { initial_grid: 16, tol: 1e-9, max_grid: 1 << 14, max_points: 1 << 22 }
    }

    #[test]
    fn numeric_examples() {
        let two = LaurentPolynomial::from_i64(1, &[(&[0], 2)]);
        let e = mahler_numeric(&two, &numeric_opts()).unwrap();
        assert!((e.value - 2f64.ln()).abs() < 1e-12);
        let p = LaurentPolynomial::from_i64(1, &[(&[1], 1), (&[0], -2)]);
        let e = mahler_numeric(&p, &numeric_opts()).unwrap();
        assert!((e.value - 2f64.ln()).abs() < 1e-6, "{e:?}");
        let p = LaurentPolynomial::from_i64(2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]);
        let e = mahler_numeric(&p, &MahlerOptions { tol: 1e-5, ..Default::default() }).unwrap();
        assert!((e.value - 0.323_065_947_219_450_5).abs() < 1e-3, "{e:?}");
        assert_eq!(mahler_numeric(&LaurentPolynomial::zero(2), &numeric_opts()).unwrap_err(), Error::ZeroPolynomial);
        let small = MahlerOptions { initial_grid: 4, ..Default::default() };
        assert_eq!(mahler_numeric(&two, &small).unwrap_err(), Error::GridTooSmall(4));
    }

    #[test]
    fn grid_hits_zero_and_jitters() {
        // with n = 9 the midpoint theta = pi is a zero of 1 + x
        let p = LaurentPolynomial::from_i64(1, &[(&[0], 1), (&[1], 1)]);
        let e =
            mahler_numeric(&p, &MahlerOptions { initial_grid: 9, tol: 1e-4, max_grid: 1 << 16, max_points: 1 << 22 })
                .unwrap();
        assert!(e.value.abs() < 1e-3, "{e:?}");
    }

    #[test]
    fn jensen_examples() {
        let p = LaurentPolynomial::from_i64(1, &[(&[1], 1), (&[0], -2)]);
        assert!((mahler_univariate_exact(&p).unwrap() - 2f64.ln()).abs() < 1e-12);
        let p = LaurentPolynomial::from_i64(1, &[(&[2], 1), (&[0], 1)]);
        assert!(mahler_univariate_exact(&p).unwrap().abs() < 1e-12);
        let p = LaurentPolynomial::from_i64(1, &[(&[1], 3)]);
        assert!((mahler_univariate_exact(&p).unwrap() - 3f64.ln()).abs() < 1e-12);
        let p = LaurentPolynomial::from_i64(2, &[(&[1, 0], 3)]);
        assert_eq!(mahler_univariate_exact(&p).unwrap_err(), Error::NotUnivariate);
        // Lehmer's polynomial
        let lehmer = LaurentPolynomial::from_i64(
            1,
            &[(&[10], 1), (&[9], 1), (&[7], -1), (&[6], -1), (&[5], -1), (&[4], -1), (&[3], -1), (&[1], 1), (&[0], 1)],
        );
        assert!((mahler_univariate_exact(&lehmer).unwrap() - 1.176_280_818_259_917_5f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn bloch_wigner_examples() {
        assert_eq!(bloch_wigner(Complex64::new(0.3, 0.0)).unwrap(), 0.0);
        assert!((bloch_wigner(Complex64::i()).unwrap() - CATALAN).abs() < 1e-12);
        assert!((bloch_wigner(Complex64::from_polar(1.0, PI / 3.0)).unwrap() - D_MAX).abs() < 1e-12);
        assert!(bloch_wigner(Complex64::zero()).is_err());
        assert!(bloch_wigner(Complex64::one()).is_err());
        // D(1 + i) = Catalan
        assert!((bloch_wigner(Complex64::new(1.0, 1.0)).unwrap() - CATALAN).abs() < 1e-12);
    }

    #[test]
    fn bloch_wigner_agrees_with_direct_series() {
        // inside |z| < 1 the defining series converges; compare away from the reduction boundaries
        for &(r, t) in &[(0.7, 1.0), (0.9, 2.5), (0.6, -0.4), (0.95, 0.3)] {
            let z = Complex64::from_polar(r, t);
            let mut li2 = Complex64::zero();
            let mut pw = z;
            for k in 1..20000 {
                li2 += pw / (k as f64 * k as f64);
                pw *= z;
            }
            let direct = li2.im + z.norm().ln() * (Complex64::one() - z).arg();
            assert!((bw(z) - direct).abs() < 1e-9, "{z}");
        }
    }

    #[test]
    fn linear_form_examples() {
        assert_eq!(mahler_linear_form(&[1.0, 1.0]).unwrap(), 0.0);
        assert!((mahler_linear_form(&[1.0, 1.0, 1.0]).unwrap() - D_MAX / PI).abs() < 1e-12);
        assert!((mahler_linear_form(&[1.0, 1.0, 3.0]).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!(mahler_linear_form(&[1.0, -1.0]).is_err());
        assert!((mahler_linear_form(&[0.0, 2.0, 0.0]).unwrap() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn linear_form_matches_quadrature() {
        for a in [[1.0, 2.0, 3.0], [3.0, 2.0, 2.0], [1.0, 1.5, 2.0], [2.0, 0.7, 1.6]] {
            let p = LaurentPolynomial::from_terms(
                2,
                [(vec![0i64, 0], a[0]), (vec![1, 0], a[1]), (vec![0, 1], a[2])]
                    .into_iter()
                    .map(|(m, c)| (crate::lattice::DualVector::from_i64(&m), Rat::from_float(c).unwrap())),
            )
            .unwrap();
            let e = mahler_numeric(&p, &MahlerOptions { tol: 1e-6, ..Default::default() }).unwrap();
            let exact = mahler_linear_form(&a).unwrap();
            assert!((e.value - exact).abs() < 1e-4, "{a:?}: {} vs {exact}", e.value);
        }
    }

    #[test]
    fn dispatch_routes() {
        let opts = MahlerOptions::default();
        let p = LaurentPolynomial::from_i64(2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]);
        let e = mahler_measure(&p, &opts).unwrap();
        assert_eq!(e.method, Method::ClosedForm);
        assert!((e.value - D_MAX / PI).abs() < 1e-12);
        // collinear exponents: x^2 y^2 - 3 x y + 2 = (xy - 1)(xy - 2)
        let p = LaurentPolynomial::from_i64(2, &[(&[2, 2], 1), (&[1, 1], -3), (&[0, 0], 2)]);
        let e = mahler_measure(&p, &opts).unwrap();
        assert_eq!(e.method, Method::Jensen);
        assert!((e.value - 2f64.ln()).abs() < 1e-12);
        let p = LaurentPolynomial::from_i64(2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)]);
        let e = mahler_measure(&p, &opts).unwrap();
        assert_eq!(e.method, Method::Numeric);
        // (1 + x)(1 + y); the midpoint rule converges like 1/n across a zero curve
        assert!(e.value.abs() < 2e-3, "{e:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bloch_wigner_symmetries(re in -3.0f64..3.0, im in 0.05f64..3.0) {
            let z = Complex64::new(re, im);
            let d = bw(z);
            prop_assert!(d.abs() <= D_MAX + 1e-12);
            prop_assert!((bw(z.conj()) + d).abs() < 1e-12);
            prop_assert!((bw(z.inv()) + d).abs() < 1e-11);
            prop_assert!((bw(Complex64::one() - z) + d).abs() < 1e-11);
        }

        #[test]
        fn numeric_matches_jensen(c in prop::collection::vec(-9i64..=9, 1..=7)) {
            let terms: Vec<(Vec<i64>, i64)> = c.iter().enumerate().map(|(k, &v)| (vec![k as i64], v)).collect();
            let refs: Vec<(&[i64], i64)> = terms.iter().map(|(m, v)| (m.as_slice(), *v)).collect();
            let p = LaurentPolynomial::from_i64(1, &refs);
            prop_assume!(!p.is_zero());
            let e = mahler_numeric(&p, &MahlerOptions { tol: 1e-7, ..Default::default() }).unwrap();
            let exact = mahler_univariate_exact(&p).unwrap();
            prop_assert!((e.value - exact).abs() < 1e-4, "{p}: {e:?} vs {exact}");
        }

        #[test]
        fn mahler_is_additive(a in prop::collection::vec(-4i64..=4, 3), b in prop::collection::vec(-4i64..=4, 3)) {
            let mk = |c: &[i64]| LaurentPolynomial::from_i64(1, &[(&[0], c[0]), (&[1], c[1]), (&[2], c[2])]);
            let (p, q) = (mk(&a), mk(&b));
            prop_assume!(!p.is_zero() && !q.is_zero());
            let pq = &p * &q;
            let lhs = mahler_univariate_exact(&pq).unwrap();
            let rhs = mahler_univariate_exact(&p).unwrap() + mahler_univariate_exact(&q).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-7);
        }
    }
}
