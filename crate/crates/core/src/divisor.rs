//! Torus-invariant divisors `D = sum a_i D_i` on a fan.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{dot, dual_frame, DualVector, Int, LatticeVector};
use crate::laurent::LaurentPolynomial;
use crate::polytope::LatticePolytope;

/// Coefficients `a_i`, aligned with the ray table of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TDivisor {
    coefficients: Vec<Int>,
}

/// The linear forms `m_{D,sigma}` with `<m_{D,sigma}, u_i> = -a_i` on each maximal cone,
/// in the order of [`Fan::maximal_cones`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierData {
    forms: Vec<DualVector>,
}

impl CartierData {
    pub fn forms(&self) -> &[DualVector] {
        &self.forms
    }

    pub fn form(&self, maximal_index: usize) -> &DualVector {
        &self.forms[maximal_index]
    }
}

impl TDivisor {
    pub fn new(fan: &Fan, coefficients: Vec<Int>) -> Result<Self> {
        if coefficients.len() != fan.rays().len() {
            return Err(Error::DimensionMismatch { expected: fan.rays().len(), found: coefficients.len() });
        }
        Ok(TDivisor { coefficients })
    }

    pub(crate) fn from_coefficients(coefficients: Vec<Int>) -> Self {
        TDivisor { coefficients }
    }

    pub fn zero(fan: &Fan) -> Self {
        TDivisor { coefficients: vec![Int::zero(); fan.rays().len()] }
    }

    /// The orbit closure `D_i`.
    pub fn elementary(fan: &Fan, i: usize) -> Self {
        let mut c = vec![Int::zero(); fan.rays().len()];
        c[i] = Int::from(1);
        TDivisor { coefficients: c }
    }

    /// `div(chi^m)`, with `a_i = <m, u_i>`.
    pub fn principal(fan: &Fan, m: &DualVector) -> Result<Self> {
        m.check_dim(fan.dim())?;
        Ok(TDivisor { coefficients: fan.rays().iter().map(|u| dot(m.coords(), u.coords())).collect() })
    }

    pub fn coefficients(&self) -> &[Int] {
        &self.coefficients
    }

    pub fn add(&self, other: &TDivisor) -> TDivisor {
        assert_eq!(self.coefficients.len(), other.coefficients.len(), "divisors on different fans");
        TDivisor { coefficients: self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: &Int) -> TDivisor {
        TDivisor { coefficients: self.coefficients.iter().map(|a| a * k).collect() }
    }

    fn check(&self, fan: &Fan) -> Result<()> {
        if self.coefficients.len() != fan.rays().len() {
            return Err(Error::DimensionMismatch { expected: fan.rays().len(), found: self.coefficients.len() });
        }
        Ok(())
    }

    /// Solves `<m_{D,sigma}, u_i> = -a_i` on every maximal cone of a smooth complete fan.
    pub fn cartier_data(&self, fan: &Fan) -> Result<CartierData> {
        self.check(fan)?;
        fan.require_smooth_complete()?;
        Ok(self.cartier_data_unchecked(fan))
    }

    pub(crate) fn cartier_data_unchecked(&self, fan: &Fan) -> CartierData {
        let d = fan.dim();
        let forms = fan
            .maximal_cones()
            .iter()
            .map(|sigma| {
                let rows: Vec<Vec<Int>> = sigma.iter().map(|&i| fan.ray(i).coords().to_vec()).collect();
                let frame = dual_frame(&rows, d).expect("full-dimensional cone");
                let coords = (0..d)
                    .map(|j| {
                        let v: crate::lattice::Rat = sigma
                            .iter()
                            .zip(&frame)
                            .map(|(&i, w)| -&w[j] * crate::lattice::Rat::from_integer(self.coefficients[i].clone()))
                            .sum();
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect();
                DualVector::new(coords)
            })
            .collect();
        CartierData { forms }
    }

    /// `psi_D(u) = <m_{D,sigma}, u>` for a maximal cone containing `u`.
    pub fn support_function(&self, fan: &Fan, u: &LatticeVector) -> Result<Int> {
        u.check_dim(fan.dim())?;
        let data = self.cartier_data(fan)?;
        let k = fan.maximal_cone_containing(u).ok_or(Error::OutsideSupport)?;
        Ok(dot(data.form(k).coords(), u.coords()))
    }

    /// `<m_{D,sigma}, u_i> >= -a_i` for every maximal cone and every ray.
    pub fn is_basepoint_free(&self, fan: &Fan) -> Result<bool> {
        let data = self.cartier_data(fan)?;
        let ok = self.concavity_slack(fan, &data).all(|(_, _, s)| s >= Int::zero());
        Ok(ok)
    }

    /// Basepoint-free with strict inequality off each cone.
    pub fn is_ample(&self, fan: &Fan) -> Result<bool> {
        let data = self.cartier_data(fan)?;
        let maximal = fan.maximal_cones();
        let ok =
            self.concavity_slack(fan, &data)
                .all(|(k, i, s)| if maximal[k].contains(&i) { s.is_zero() } else { s > Int::zero() });
        Ok(ok)
    }

    pub fn is_principal(&self, fan: &Fan) -> Result<bool> {
        let data = self.cartier_data(fan)?;
        Ok(data.forms.windows(2).all(|w| w[0] == w[1]))
    }

    /// `(maximal cone, ray, <m_sigma, u_i> + a_i)` for all pairs.
    fn concavity_slack<'a>(
        &'a self,
        fan: &'a Fan,
        data: &'a CartierData,
    ) -> impl Iterator<Item = (usize, usize, Int)> + 'a {
        data.forms.iter().enumerate().flat_map(move |(k, m)| {
            fan.rays().iter().enumerate().map(move |(i, u)| (k, i, dot(m.coords(), u.coords()) + &self.coefficients[i]))
        })
    }

    /// `K_D = conv{m_{D,sigma}}`; its lattice points index a basis of sections.
    pub fn polytope(&self, fan: &Fan) -> Result<LatticePolytope> {
        if !self.is_basepoint_free(fan)? {
            return Err(Error::NotBasepointFree);
        }
        let data = self.cartier_data_unchecked(fan);
        LatticePolytope::from_points(fan.dim(), data.forms)
    }

    /// `a_i = -psi_K(u_i)`, provided `psi_K` is linear on every maximal cone.
    pub fn of_polytope(fan: &Fan, k: &LatticePolytope) -> Result<Self> {
        if k.dim() != fan.dim() {
            return Err(Error::DimensionMismatch { expected: fan.dim(), found: k.dim() });
        }
        let psi: Vec<Int> = fan.rays().iter().map(|u| k.support_function(u)).collect::<Result<_>>()?;
        for sigma in fan.maximal_cones() {
            let linear =
                k.vertices().iter().any(|v| sigma.iter().all(|&i| dot(v.coords(), fan.ray(i).coords()) == psi[i]));
            if !linear {
                return Err(Error::NotLinearOnCone(sigma.clone()));
            }
        }
        Ok(TDivisor { coefficients: psi.into_iter().map(|x| -x).collect() })
    }

    /// `||s(x)|| = |s(x)| / max_{m in vertices(K_D)} |x^m|` at a point of the torus.
    pub fn canonical_metric_norm(&self, fan: &Fan, s: &LaurentPolynomial, x: &[Complex64]) -> Result<f64> {
        let k = self.polytope(fan)?;
        if s.dim() != fan.dim() || x.len() != fan.dim() {
            return Err(Error::DimensionMismatch { expected: fan.dim(), found: x.len() });
        }
        if x.iter().any(|z| z.norm() == 0.0) {
            return Err(Error::ZeroCoordinate);
        }
        if s.support().any(|m| !k.contains(m)) {
            return Err(Error::SupportOutsidePolytope);
        }
        let logs: Vec<f64> = x.iter().map(|z| z.norm().ln()).collect();
        Ok(normalized_abs(s, &k, x, &logs))
    }
}

/// `max_{m in vertices(K)} log|x^m|` from the log-moduli of `x`.
pub fn vertex_max_log(k: &LatticePolytope, log_moduli: &[f64]) -> f64 {
    k.vertices().iter().map(|m| log_pairing(m, log_moduli)).fold(f64::NEG_INFINITY, f64::max)
}

fn log_pairing(m: &DualVector, log_moduli: &[f64]) -> f64 {
    m.coords().iter().zip(log_moduli).map(|(e, l)| e.to_f64().unwrap() * l).sum()
}

/// `|s(x)| / max_vertices |x^m|`, evaluated as `|sum c x^{m - m*}|` with `m*` the maximizing vertex.
pub(crate) fn normalized_abs(s: &LaurentPolynomial, k: &LatticePolytope, x: &[Complex64], logs: &[f64]) -> f64 {
    let top =
        k.vertices().iter().max_by(|a, b| log_pairing(a, logs).total_cmp(&log_pairing(b, logs))).expect("nonempty");
    let shifted: Complex64 = s
        .terms()
        .map(|(m, c)| {
            let e = m - top;
            let modulus = log_pairing(&e, logs).exp();
            let phase: f64 = e.coords().iter().zip(x).map(|(e, z)| e.to_f64().unwrap() * z.arg()).sum();
            Complex64::from_polar(modulus, phase) * c.to_f64().unwrap()
        })
        .sum();
    shifted.norm()
}

/// `#rays - d` for a smooth complete fan.
pub fn picard_rank(fan: &Fan) -> Result<usize> {
    fan.require_smooth_complete()?;
    Ok(fan.rays().len() - fan.dim())
}
