//! Homogeneous binary forms and invertible 2x2 maps over exact scalars.

use thiserror::Error;

use crate::poly::{Coeff, UniPoly};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum FormError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("singular matrix")]
    SingularMatrix,
}

/// Homogeneous form of fixed degree `d`; `coeffs[i]` multiplies
/// `x^{d-i} y^i`. The zero form keeps its declared degree.
#[derive(Clone, Debug)]
pub struct BinaryForm {
    pub degree: usize,
    pub coeffs: Vec<Scalar>,
}

impl BinaryForm {
    pub fn new(degree: usize, coeffs: Vec<Scalar>) -> Self {
        assert_eq!(coeffs.len(), degree + 1, "binary form needs degree+1 coefficients");
        BinaryForm { degree, coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        BinaryForm { degree, coeffs: vec![Scalar::zero(); degree + 1] }
    }

    /// `c * x^a y^b`
    pub fn monomial(c: Scalar, a: usize, b: usize) -> Self {
        let mut f = BinaryForm::zero(a + b);
        f.coeffs[b] = c;
        f
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coeff(&self, y_power: usize) -> Scalar {
        self.coeffs.get(y_power).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "adding forms of unequal degree");
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        BinaryForm { degree: self.degree, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        BinaryForm { degree: self.degree, coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.degree + o.degree;
        let mut out = vec![Scalar::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BinaryForm { degree: d, coeffs: out }
    }

    pub fn eq_form(&self, o: &Self) -> bool {
        self.degree == o.degree
            && self.coeffs.iter().zip(&o.coeffs).all(|(a, b)| a.eq_scalar(b))
    }

    /// Is `o` a nonzero scalar multiple of `self`? Returns the factor `c`
    /// with `o = c * self`.
    pub fn proportionality(&self, o: &Self) -> Option<Scalar> {
        if self.degree != o.degree || self.is_zero() || o.is_zero() {
            return None;
        }
        let pivot = self.coeffs.iter().position(|c| !c.is_zero())?;
        if o.coeffs[pivot].is_zero() {
            return None;
        }
        let c = o.coeffs[pivot].div(&self.coeffs[pivot]);
        if self.scale(&c).eq_form(o) {
            Some(c)
        } else {
            None
        }
    }

    /// Dehomogenize at `x = 1`: `p(z) = f(1, z)`.
    pub fn at_x1(&self) -> UniPoly<Scalar> {
        UniPoly::new(self.coeffs.clone())
    }

    /// Dehomogenize at `y = 1`: `p(w) = f(w, 1)` (ascending in `w`).
    pub fn at_y1(&self) -> UniPoly<Scalar> {
        let mut v = self.coeffs.clone();
        v.reverse();
        UniPoly::new(v)
    }

    /// Rebuild a form of degree `d` from `f(1, z)` (inverse of `at_x1`).
    pub fn from_at_x1(d: usize, p: &UniPoly<Scalar>) -> Self {
        assert!(p.degree().map(|k| k <= d).unwrap_or(true), "degree overflow");
        let mut coeffs = p.coeffs.clone();
        coeffs.resize(d + 1, Scalar::zero());
        BinaryForm { degree: d, coeffs }
    }

    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        // Horner in y over powers of x
        for (i, c) in self.coeffs.iter().enumerate() {
            let term = c.mul(&x.pow((self.degree - i) as i64)).mul(&y.pow(i as i64));
            acc = acc.add(&term);
        }
        acc
    }

    pub fn d_dx(&self) -> Self {
        if self.degree == 0 {
            return BinaryForm::zero(0);
        }
        let d = self.degree;
        let mut out = vec![Scalar::zero(); d];
        for (i, c) in self.coeffs.iter().enumerate() {
            let xpow = d - i;
            if xpow == 0 {
                continue;
            }
            out[i] = c.mul(&Scalar::from_int(xpow as i64));
        }
        BinaryForm { degree: d - 1, coeffs: out }
    }

    pub fn d_dy(&self) -> Self {
        if self.degree == 0 {
            return BinaryForm::zero(0);
        }
        let d = self.degree;
        let mut out = vec![Scalar::zero(); d];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i == 0 {
                continue;
            }
            out[i - 1] = c.mul(&Scalar::from_int(i as i64));
        }
        BinaryForm { degree: d - 1, coeffs: out }
    }

    /// Substitute the linear map: `f(m00 x + m01 y, m10 x + m11 y)`.
    pub fn substitute_linear(&self, m: &LinearMap2) -> Self {
        let lx = BinaryForm::new(1, vec![m.a.clone(), m.b.clone()]);
        let ly = BinaryForm::new(1, vec![m.c.clone(), m.d.clone()]);
        let mut acc = BinaryForm::zero(self.degree);
        // sum_i c_i lx^{d-i} ly^i, built with running powers
        let mut ly_pow = BinaryForm::monomial(Scalar::one(), 0, 0);
        let mut terms: Vec<BinaryForm> = vec![];
        for (i, c) in self.coeffs.iter().enumerate() {
            let lx_pow = pow_form(&lx, self.degree - i);
            terms.push(lx_pow.mul(&ly_pow).scale(c));
            ly_pow = ly_pow.mul(&ly);
        }
        for t in terms {
            acc = acc.add(&t);
        }
        acc
    }

    /// gcd as forms: common `x`-power plus the dehomogenized gcd,
    /// rehomogenized. Returns a form of the appropriate degree (monic in
    /// the sense of the dehomogenized part).
    pub fn gcd_form(&self, o: &Self) -> Self {
        assert!(!self.is_zero() && !o.is_zero(), "gcd with a zero form");
        let xa = self.x_order();
        let xb = o.x_order();
        let pa = self.at_x1();
        let pb = o.at_x1();
        let g = pa.gcd(&pb);
        let xpow = xa.min(xb);
        // g has degree deg_z; as a form of degree deg_z + xpow
        let base = BinaryForm::from_at_x1(g.degree().unwrap_or(0), &g);
        base.mul(&BinaryForm::monomial(Scalar::one(), xpow, 0))
    }

    /// Order of vanishing along `x = 0` (power of `x` dividing the form).
    pub fn x_order(&self) -> usize {
        // x^k | f  iff the last k coefficients (highest y powers) vanish
        let mut k = 0;
        for c in self.coeffs.iter().rev() {
            if c.is_zero() {
                k += 1;
            } else {
                break;
            }
        }
        k.min(self.degree)
    }

    /// Order of vanishing along `y = 0`.
    pub fn y_order(&self) -> usize {
        let mut k = 0;
        for c in self.coeffs.iter() {
            if c.is_zero() {
                k += 1;
            } else {
                break;
            }
        }
        k.min(self.degree)
    }

    /// Squarefree part as a form (distinct linear factors).
    pub fn squarefree_form(&self) -> Self {
        assert!(!self.is_zero());
        let xo = self.x_order();
        let p = self.at_x1();
        if p.degree().unwrap_or(0) == 0 {
            return if xo > 0 {
                BinaryForm::monomial(Scalar::one(), 1, 0)
            } else {
                BinaryForm::monomial(Scalar::one(), 0, 0)
            };
        }
        let sf = p.monic().squarefree_part();
        let base = BinaryForm::from_at_x1(sf.deg(), &sf);
        if xo > 0 {
            base.mul(&BinaryForm::monomial(Scalar::one(), 1, 0))
        } else {
            base
        }
    }

    /// Does `self` divide `o` as forms?
    pub fn divides_form(&self, o: &Self) -> bool {
        if self.is_zero() {
            return o.is_zero();
        }
        if o.is_zero() {
            return true;
        }
        if self.x_order() > o.x_order() {
            return false;
        }
        let pa = self.at_x1();
        let pb = o.at_x1();
        pa.divides(&pb)
    }
}

fn pow_form(f: &BinaryForm, e: usize) -> BinaryForm {
    let mut acc = BinaryForm::monomial(Scalar::one(), 0, 0);
    for _ in 0..e {
        acc = acc.mul(f);
    }
    acc
}

/// Invertible linear map of the plane, `(x, y) -> (a x + b y, c x + d y)`.
#[derive(Clone, Debug)]
pub struct LinearMap2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl LinearMap2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self, FormError> {
        let m = LinearMap2 { a, b, c, d };
        if m.det().is_zero() {
            return Err(FormError::SingularMatrix);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        LinearMap2 { a: Scalar::one(), b: Scalar::zero(), c: Scalar::zero(), d: Scalar::one() }
    }

    pub fn diagonal(a: Scalar, d: Scalar) -> Result<Self, FormError> {
        LinearMap2::new(a, Scalar::zero(), Scalar::zero(), d)
    }

    pub fn det(&self) -> Scalar {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    /// Adjugate: `det * inverse`.
    pub fn adjugate(&self) -> Self {
        LinearMap2 { a: self.d.clone(), b: self.b.neg(), c: self.c.neg(), d: self.a.clone() }
    }

    pub fn inverse(&self) -> Self {
        let det_inv = self.det().inv();
        let adj = self.adjugate();
        LinearMap2 {
            a: adj.a.mul(&det_inv),
            b: adj.b.mul(&det_inv),
            c: adj.c.mul(&det_inv),
            d: adj.d.mul(&det_inv),
        }
    }

    pub fn compose(&self, o: &Self) -> Self {
        // (self ∘ o)(v) = self(o(v))
        LinearMap2 {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }

    pub fn apply(&self, x: &Scalar, y: &Scalar) -> (Scalar, Scalar) {
        (
            self.a.mul(x).add(&self.b.mul(y)),
            self.c.mul(x).add(&self.d.mul(y)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn substitute_identity_and_swap() {
        // x^5 under identity
        let f = BinaryForm::monomial(s(1), 5, 0);
        let id = LinearMap2::identity();
        assert!(f.substitute_linear(&id).eq_form(&f));
        // xy under swap -> yx = xy
        let g = BinaryForm::monomial(s(1), 1, 1);
        let swap = LinearMap2::new(s(0), s(1), s(1), s(0)).unwrap();
        assert!(g.substitute_linear(&swap).eq_form(&g));
    }

    #[test]
    fn substitution_is_functorial() {
        // f((MN)v) = (f∘M)(Nv)
        let f = BinaryForm::new(3, vec![s(1), s(-2), s(0), s(5)]);
        let m = LinearMap2::new(s(1), s(1), s(0), s(2)).unwrap();
        let n = LinearMap2::new(s(2), s(-1), s(1), s(1)).unwrap();
        let lhs = f.substitute_linear(&m.compose(&n));
        let rhs = f.substitute_linear(&m).substitute_linear(&n);
        assert!(lhs.eq_form(&rhs));
    }

    #[test]
    fn x_and_y_orders() {
        // x^2 y (x + y)
        let f = BinaryForm::monomial(s(1), 2, 0)
            .mul(&BinaryForm::monomial(s(1), 0, 1))
            .mul(&BinaryForm::new(1, vec![s(1), s(1)]));
        assert_eq!(f.degree, 4);
        assert_eq!(f.x_order(), 2);
        assert_eq!(f.y_order(), 1);
    }

    #[test]
    fn gcd_of_forms() {
        // gcd(x^2(x+y), x(x+y)^2) = x(x+y)
        let xpy = BinaryForm::new(1, vec![s(1), s(1)]);
        let a = BinaryForm::monomial(s(1), 2, 0).mul(&xpy);
        let b = BinaryForm::monomial(s(1), 1, 0).mul(&xpy).mul(&xpy);
        let g = a.gcd_form(&b);
        let expect = BinaryForm::monomial(s(1), 1, 0).mul(&xpy);
        assert!(g.proportionality(&expect).is_some());
    }

    #[test]
    fn proportionality_detects_scaling() {
        let f = BinaryForm::new(2, vec![s(2), s(-4), s(6)]);
        let g = f.scale(&Scalar::from_q(q(-1, 2)));
        let c = f.proportionality(&g).unwrap();
        assert!(c.eq_scalar(&Scalar::from_q(q(-1, 2))));
        let h = BinaryForm::new(2, vec![s(1), s(0), s(0)]);
        assert!(f.proportionality(&h).is_none());
    }
}
