use crate::error::{Error, Result};

use super::field::{Elem, Field};
use super::matrix::moore;

/// Linearized polynomial `sum_i a_i y^(q^(i-1))`; `coeffs[0]` multiplies `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedPoly {
    pub coeffs: Vec<Elem>,
}

impl LinearizedPoly {
    pub fn new(coeffs: Vec<Elem>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parameter(
                "linearized polynomial needs at least one coefficient".into(),
            ));
        }
        Ok(LinearizedPoly { coeffs })
    }

    pub fn eval(&self, f: &Field, y: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        let mut power = y;
        for &a in &self.coeffs {
            acc = f.add(acc, f.mul(a, power));
            power = f.frobenius(power, 1);
        }
        acc
    }

    /// Recover the `t` coefficients from `t` evaluations at GF(q)-linearly
    /// independent points by inverting the Moore matrix.
    pub fn interpolate(f: &Field, points: &[(Elem, Elem)]) -> Result<Self> {
        let t = points.len();
        if t == 0 {
            return Err(Error::Parameter("no interpolation points".into()));
        }
        let alphas: Vec<Elem> = points.iter().map(|&(a, _)| a).collect();
        let values: Vec<Elem> = points.iter().map(|&(_, v)| v).collect();
        let b = moore(f, &alphas, t);
        let inv = b.inverse(f).map_err(|_| Error::SingularMoore)?;
        Ok(LinearizedPoly {
            coeffs: inv.mul_vec(f, &values)?,
        })
    }
}

/// True when the points are linearly independent over the prime subfield.
pub fn base_independent(f: &Field, points: &[Elem]) -> bool {
    let base = f.base_field();
    let rows: Vec<Vec<Elem>> = points
        .iter()
        .map(|&a| f.coeffs(a).into_iter().map(Elem).collect())
        .collect();
    match super::matrix::Matrix::from_rows(rows) {
        Ok(m) => m.rank(&base) == points.len(),
        Err(_) => false,
    }
}
