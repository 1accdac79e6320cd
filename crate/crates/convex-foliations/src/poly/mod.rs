//! Univariate polynomial algebra over exact coefficient rings.
//!
//! `UniPoly<T>` is dense with ascending coefficients. The same type nests
//! (`UniPoly<UniPoly<T>>`) for the bivariate eliminations used by the
//! invariant-line solver and the classification machinery; resultants over
//! such nested rings go through fraction-free Bareiss determinants of
//! Sylvester matrices so only exact division is required of coefficients.

pub mod binary;
pub mod factor;
pub mod isolate;
pub mod poly2;

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

/// Minimal exact-ring interface the polynomial code needs.
pub trait Coeff: Clone + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn eq_elem(&self, o: &Self) -> bool;
    /// Exact division. Callers only invoke this where divisibility is
    /// guaranteed (Bareiss pivots, exact polynomial quotients).
    fn exact_div(&self, o: &Self) -> Self;
}

/// Coefficients forming a field (rationals, number-field scalars).
pub trait FieldCoeff: Coeff {
    fn inv(&self) -> Self;
    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        <Self as Zero>::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn eq_elem(&self, o: &Self) -> bool {
        self == o
    }
    fn exact_div(&self, o: &Self) -> Self {
        assert!(!<Self as Zero>::is_zero(o), "division by zero rational");
        self / o
    }
}

impl FieldCoeff for BigRational {
    fn inv(&self) -> Self {
        assert!(!<Self as Zero>::is_zero(self), "inverse of zero rational");
        self.recip()
    }
}

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct UniPoly<T: Coeff> {
    pub coeffs: Vec<T>,
}

impl<T: Coeff> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UniPoly { coeffs: vec![T::one()] }
    }

    pub fn constant(c: T) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn var() -> Self {
        UniPoly { coeffs: vec![T::zero(), T::one()] }
    }

    /// `c * z^k`
    pub fn monomial(c: T, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        UniPoly::new(v.iter().map(|&n| T::from_int(n)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree of a nonzero polynomial; panics on zero.
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn lc(&self) -> &T {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&o.coeff(i)));
        }
        UniPoly::new(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).sub(&o.coeff(i)));
        }
        UniPoly::new(out)
    }

    pub fn neg(&self) -> Self {
        UniPoly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
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
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.mul(&T::from_int(i as i64)));
        }
        UniPoly::new(out)
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Composition `self(q(z))`.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `self(z + c)`
    pub fn shift(&self, c: &T) -> Self {
        self.compose(&UniPoly::new(vec![c.clone(), T::one()]))
    }

    /// Coefficient reversal `z^n * self(1/z)` padded to `n = self.deg()`.
    pub fn reverse(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        UniPoly::new(coeffs)
    }

    pub fn eq_poly(&self, o: &Self) -> bool {
        if self.coeffs.len() != o.coeffs.len() {
            return false;
        }
        self.coeffs.iter().zip(&o.coeffs).all(|(a, b)| a.eq_elem(b))
    }

    /// Exact quotient; panics unless `o` divides `self` in `T[z]`.
    pub fn exact_div_poly(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "exact division by zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        let dn = o.deg();
        let mut rem = self.coeffs.clone();
        let mut n = rem.len();
        assert!(n >= dn + 1, "exact division degree mismatch");
        let mut quot = vec![T::zero(); n - dn];
        while n >= dn + 1 {
            let t = rem[n - 1].exact_div(o.lc());
            let k = n - 1 - dn;
            for (j, c) in o.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&t.mul(c));
            }
            quot[k] = t;
            while n > 0 && rem[n - 1].is_zero() {
                n -= 1;
            }
            if n < dn + 1 {
                break;
            }
        }
        assert!(rem.iter().take(n).all(|c| c.is_zero()), "exact division left a remainder");
        UniPoly::new(quot)
    }
}

impl<T: FieldCoeff> UniPoly<T> {
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.lc().inv();
        self.scale(&inv)
    }

    pub fn div_rem(&self, o: &Self) -> (Self, Self) {
        assert!(!o.is_zero(), "polynomial division by zero");
        if self.is_zero() || self.deg() < o.deg() {
            return (Self::zero(), self.clone());
        }
        let dn = o.deg();
        let lc_inv = o.lc().inv();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); rem.len() - dn];
        for k in (0..quot.len()).rev() {
            let t = rem[k + dn].mul(&lc_inv);
            if t.is_zero() {
                continue;
            }
            for (j, c) in o.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&t.mul(c));
            }
            quot[k] = t;
        }
        rem.truncate(dn);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn rem(&self, o: &Self) -> Self {
        self.div_rem(o).1
    }

    pub fn divides(&self, target: &Self) -> bool {
        if self.is_zero() {
            return target.is_zero();
        }
        target.rem(self).is_zero()
    }

    /// Monic gcd via Euclid.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Resultant over a field by the Euclidean recurrence.
    pub fn resultant(&self, o: &Self) -> T {
        fn go<T: FieldCoeff>(a: &UniPoly<T>, b: &UniPoly<T>) -> T {
            if b.is_zero() {
                // res(a, 0) = 0 for deg a > 0, 1 for nonzero constants.
                return if a.degree() == Some(0) { T::one() } else { T::zero() };
            }
            if a.is_zero() {
                return if b.degree() == Some(0) { T::one() } else { T::zero() };
            }
            let (da, db) = (a.deg(), b.deg());
            if db == 0 {
                // res(a, c) = c^{deg a}
                return pow_elem(b.lc(), da);
            }
            if da < db {
                let r = go(b, a);
                return if da * db % 2 == 1 { r.neg() } else { r };
            }
            let r = a.rem(b);
            if r.is_zero() {
                return T::zero();
            }
            let dr = r.degree().map(|d| d).unwrap_or(0);
            let rec = go(b, &r);
            let scaled = pow_elem(b.lc(), da - dr).mul(&rec);
            if da * db % 2 == 1 {
                scaled.neg()
            } else {
                scaled
            }
        }
        go(self, o)
    }

    /// Yun squarefree decomposition; returns monic parts with exponents and
    /// the leading unit so that `self = unit * prod part_i^{e_i}`.
    pub fn squarefree_decomposition(&self) -> (T, Vec<(Self, usize)>) {
        assert!(!self.is_zero(), "squarefree decomposition of zero");
        let unit = self.lc().clone();
        let p = self.monic();
        if p.deg() == 0 {
            return (unit, vec![]);
        }
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.exact_div_poly(&a0);
        let mut c = dp.exact_div_poly(&a0);
        let mut d = c.sub(&b.derivative());
        let mut parts = vec![];
        let mut i = 1usize;
        while b.deg() > 0 {
            let ai = b.gcd(&d);
            if ai.deg() > 0 {
                parts.push((ai.clone(), i));
            }
            b = b.exact_div_poly(&ai);
            c = d.exact_div_poly(&ai);
            d = c.sub(&b.derivative());
            i += 1;
        }
        (unit, parts)
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Self {
        let (_, parts) = self.squarefree_decomposition();
        let mut out = Self::one();
        for (p, _) in parts {
            out = out.mul(&p);
        }
        out
    }
}

fn pow_elem<T: Coeff>(x: &T, mut e: usize) -> T {
    let mut base = x.clone();
    let mut acc = T::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    acc
}

impl<T: Coeff> Coeff for UniPoly<T> {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::one()
    }
    fn from_int(n: i64) -> Self {
        UniPoly::constant(T::from_int(n))
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        UniPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        UniPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        UniPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        UniPoly::neg(self)
    }
    fn eq_elem(&self, o: &Self) -> bool {
        self.eq_poly(o)
    }
    fn exact_div(&self, o: &Self) -> Self {
        self.exact_div_poly(o)
    }
}

/// Fraction-free Bareiss determinant over any exact ring.
pub fn bareiss_det<T: Coeff>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    for row in &m {
        assert_eq!(row.len(), n, "determinant of non-square matrix");
    }
    let mut sign = false;
    let mut prev = T::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return T::zero();
            };
            m.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.exact_div(&prev);
            }
            m[i][k] = T::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// Resultant over an arbitrary exact ring via the Sylvester determinant.
pub fn resultant_ring<T: Coeff>(a: &UniPoly<T>, b: &UniPoly<T>) -> T {
    if a.is_zero() || b.is_zero() {
        let other = if a.is_zero() { b } else { a };
        return if other.degree() == Some(0) { T::one() } else { T::zero() };
    }
    let (da, db) = (a.deg(), b.deg());
    if da == 0 {
        return pow_elem(a.lc(), db);
    }
    if db == 0 {
        return pow_elem(b.lc(), da);
    }
    let n = da + db;
    let mut m = vec![vec![T::zero(); n]; n];
    for i in 0..db {
        for (j, c) in a.coeffs.iter().enumerate() {
            m[i][i + (da - j)] = c.clone();
        }
    }
    for i in 0..da {
        for (j, c) in b.coeffs.iter().enumerate() {
            m[db + i][i + (db - j)] = c.clone();
        }
    }
    bareiss_det(m)
}

impl<T: Coeff> fmt::Debug for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})*z^{i}")?;
        }
        Ok(())
    }
}

/// Convenience alias used throughout: polynomials over Q.
pub type QPoly = UniPoly<BigRational>;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Write a rational without a denominator when integral.
pub fn q_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_is_negative(x: &BigRational) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> QPoly {
        QPoly::from_ints(v)
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = p(&[1, 0, -3, 0, 1]); // z^4 - 3z^2 + 1
        let b = p(&[-1, 1]); // z - 1
        let (q_, r) = a.div_rem(&b);
        assert!(q_.mul(&b).add(&r).eq_poly(&a));
        assert_eq!(r.degree(), Some(0)); // a(1) = -1
        assert!(r.coeff(0).eq_elem(&qi(-1)));
    }

    #[test]
    fn gcd_x2m1_xm1() {
        // gcd(z^2 - 1, z - 1) = z - 1
        let g = p(&[-1, 0, 1]).gcd(&p(&[-1, 1]));
        assert!(g.eq_poly(&p(&[-1, 1])));
    }

    #[test]
    fn squarefree_z_z4m1_squared() {
        // z(z^4-1)^2 -> [(z,1), (z^4-1,2)]
        let f = p(&[0, 1]).mul(&p(&[-1, 0, 0, 0, 1]).pow(2));
        let (unit, parts) = f.squarefree_decomposition();
        assert!(unit.eq_elem(&qi(1)));
        assert_eq!(parts.len(), 2);
        assert!(parts[0].0.eq_poly(&p(&[0, 1])));
        assert_eq!(parts[0].1, 1);
        assert!(parts[1].0.eq_poly(&p(&[-1, 0, 0, 0, 1])));
        assert_eq!(parts[1].1, 2);
        // re-multiply for the oracle check
        let again = parts
            .iter()
            .fold(QPoly::one(), |acc, (pi, e)| acc.mul(&pi.pow(*e)));
        assert!(again.eq_poly(&f));
    }

    #[test]
    fn resultant_field_matches_root_product() {
        // res(z^2-2, z-1) = (z^2-2) at 1 = -1
        let r = p(&[-2, 0, 1]).resultant(&p(&[-1, 1]));
        assert!(r.eq_elem(&qi(-1)));
        // res(z^2-1, z^2-4) = prod over roots ±1 of (z^2-4) = (-3)(-3) = 9
        let r = p(&[-1, 0, 1]).resultant(&p(&[-4, 0, 1]));
        assert!(r.eq_elem(&qi(9)));
        // shared root => 0
        let r = p(&[-1, 0, 1]).resultant(&p(&[-1, 1]));
        assert!(r.eq_elem(&qi(0)));
    }

    #[test]
    fn resultant_ring_agrees_with_field() {
        let a = p(&[3, -2, 0, 1]);
        let b = p(&[7, 0, 2]);
        let rf = a.resultant(&b);
        let rr = resultant_ring(&a, &b);
        assert!(rf.eq_elem(&rr));
    }

    #[test]
    fn bivariate_resultant_eliminates() {
        // Res_t(t^2 - 5, (s - t)^2 - 21) has root s = sqrt5 + sqrt21;
        // it must equal s^4 - 52 s^2 + 256.
        type P2 = UniPoly<QPoly>;
        // inner variable: s (coefficients), outer variable: t
        let m1: P2 = UniPoly::new(vec![QPoly::from_ints(&[-5]), QPoly::zero(), QPoly::one()]);
        // (s - t)^2 - 21 = t^2 - 2st + s^2 - 21
        let m2: P2 = UniPoly::new(vec![
            QPoly::from_ints(&[-21, 0, 1]),
            QPoly::from_ints(&[0, -2]),
            QPoly::one(),
        ]);
        let r = resultant_ring(&m1, &m2);
        assert!(r.eq_poly(&QPoly::from_ints(&[256, 0, -52, 0, 1])));
    }

    #[test]
    fn exact_div_poly_works() {
        let a = p(&[-1, 0, 1]); // (z-1)(z+1)
        let b = p(&[-1, 1]);
        let c = a.exact_div_poly(&b);
        assert!(c.eq_poly(&p(&[1, 1])));
    }

    #[test]
    fn deg_gcd_plus_distinct_roots() {
        // deg gcd(p, p') + #distinct roots = deg p for p = z^3(z-1)^2
        let f = p(&[0, 0, 0, 1]).mul(&p(&[-1, 1]).pow(2));
        let g = f.gcd(&f.derivative());
        let sf = f.squarefree_part();
        assert_eq!(g.deg() + sf.deg(), f.deg());
    }
}
