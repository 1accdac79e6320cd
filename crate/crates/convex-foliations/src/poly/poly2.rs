//! Graded bivariate polynomials: a vector of binary forms, one per total
//! degree. This is the natural shape for affine 1-form coefficients, whose
//! graded pieces carry the geometric meaning (jets, top parts).

use crate::poly::binary::{BinaryForm, LinearMap2};
use crate::poly::UniPoly;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Poly2 {
    /// `grades[i]` is the homogeneous part of total degree `i`.
    pub grades: Vec<BinaryForm>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { grades: vec![] }
    }

    pub fn from_form(f: BinaryForm) -> Self {
        let d = f.degree;
        let mut grades: Vec<BinaryForm> = (0..d).map(BinaryForm::zero).collect();
        grades.push(f);
        Poly2 { grades }.trimmed()
    }

    pub fn constant(c: Scalar) -> Self {
        Poly2 { grades: vec![BinaryForm::new(0, vec![c])] }.trimmed()
    }

    /// `c * x^a y^b`
    pub fn monomial(c: Scalar, a: usize, b: usize) -> Self {
        Poly2::from_form(BinaryForm::monomial(c, a, b))
    }

    pub fn x() -> Self {
        Poly2::monomial(Scalar::one(), 1, 0)
    }

    pub fn y() -> Self {
        Poly2::monomial(Scalar::one(), 0, 1)
    }

    fn trimmed(mut self) -> Self {
        while self.grades.last().map(|f| f.is_zero()).unwrap_or(false) {
            self.grades.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.grades.iter().all(|f| f.is_zero())
    }

    /// Total degree (None for zero).
    pub fn degree(&self) -> Option<usize> {
        let t = self.clone().trimmed();
        if t.grades.is_empty() {
            None
        } else {
            Some(t.grades.len() - 1)
        }
    }

    pub fn grade(&self, i: usize) -> BinaryForm {
        self.grades.get(i).cloned().unwrap_or_else(|| BinaryForm::zero(i))
    }

    pub fn top(&self) -> BinaryForm {
        let t = self.clone().trimmed();
        t.grades.last().cloned().unwrap_or_else(|| BinaryForm::zero(0))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.grades.len().max(o.grades.len());
        let mut grades = Vec::with_capacity(n);
        for i in 0..n {
            grades.push(self.grade(i).add(&o.grade(i)));
        }
        Poly2 { grades }.trimmed()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Poly2 { grades: self.grades.iter().map(|f| f.neg()).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Poly2 { grades: self.grades.iter().map(|f| f.scale(c)).collect() }.trimmed()
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly2::zero();
        }
        let da = self.grades.len() - 1;
        let db = o.grades.len() - 1;
        let mut grades: Vec<BinaryForm> = (0..=da + db).map(BinaryForm::zero).collect();
        for (i, a) in self.grades.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.grades.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                grades[i + j] = grades[i + j].add(&a.mul(b));
            }
        }
        Poly2 { grades }.trimmed()
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Poly2::constant(Scalar::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eq_poly2(&self, o: &Self) -> bool {
        let a = self.clone().trimmed();
        let b = o.clone().trimmed();
        if a.grades.len() != b.grades.len() {
            return false;
        }
        a.grades.iter().zip(&b.grades).all(|(x, y)| x.eq_form(y))
    }

    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for f in &self.grades {
            acc = acc.add(&f.eval(x, y));
        }
        acc
    }

    pub fn d_dx(&self) -> Self {
        let mut grades: Vec<BinaryForm> = vec![];
        for (i, f) in self.grades.iter().enumerate() {
            if i == 0 {
                continue;
            }
            while grades.len() < i - 1 {
                grades.push(BinaryForm::zero(grades.len()));
            }
            grades.push(f.d_dx());
        }
        Poly2 { grades }.trimmed()
    }

    pub fn d_dy(&self) -> Self {
        let mut grades: Vec<BinaryForm> = vec![];
        for (i, f) in self.grades.iter().enumerate() {
            if i == 0 {
                continue;
            }
            while grades.len() < i - 1 {
                grades.push(BinaryForm::zero(grades.len()));
            }
            grades.push(f.d_dy());
        }
        Poly2 { grades }.trimmed()
    }

    /// Affine substitution `x -> a x + b y + e`, `y -> c x + d y + f`.
    pub fn substitute_affine(
        &self,
        lin: &LinearMap2,
        tx: &Scalar,
        ty: &Scalar,
    ) -> Self {
        let px = Poly2::x()
            .scale(&lin.a)
            .add(&Poly2::y().scale(&lin.b))
            .add(&Poly2::constant(tx.clone()));
        let py = Poly2::x()
            .scale(&lin.c)
            .add(&Poly2::y().scale(&lin.d))
            .add(&Poly2::constant(ty.clone()));
        self.substitute(&px, &py)
    }

    /// General substitution of polynomials for `x` and `y`.
    pub fn substitute(&self, px: &Self, py: &Self) -> Self {
        let mut acc = Poly2::zero();
        for f in &self.grades {
            let d = f.degree;
            for (i, c) in f.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = px.pow(d - i).mul(&py.pow(i)).scale(c);
                acc = acc.add(&term);
            }
        }
        acc
    }

    /// Translation `p(x + cx, y + cy)`.
    pub fn translate(&self, cx: &Scalar, cy: &Scalar) -> Self {
        self.substitute_affine(&LinearMap2::identity(), cx, cy)
    }

    /// Restriction to the line `y = m x + c`, as a polynomial in `x` with
    /// coefficients in the polynomial ring Q(F)[m][c] (inner variable `m`,
    /// outer `c`).
    pub fn restrict_to_line_symbolic(&self) -> UniPoly<UniPoly<UniPoly<Scalar>>> {
        // result[i] = coefficient of x^i, a polynomial in (m, c)
        type Pm = UniPoly<Scalar>;
        type Pmc = UniPoly<Pm>;
        let deg = match self.degree() {
            None => return UniPoly::zero(),
            Some(d) => d,
        };
        let mut out: Vec<Pmc> = vec![UniPoly::zero(); deg + 1];
        for f in &self.grades {
            let d = f.degree;
            for (b, coef) in f.coeffs.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let a = d - b;
                // x^a (m x + c)^b = sum_j C(b,j) m^j c^{b-j} x^{a+j}
                let mut binom = Scalar::one();
                for j in 0..=b {
                    if j > 0 {
                        let n1 = Scalar::from_int((b - j + 1) as i64);
                        let n2 = Scalar::from_int(j as i64);
                        binom = binom.mul(&n1).div(&n2);
                    }
                    let m_pow: Pm = UniPoly::monomial(coef.mul(&binom), j);
                    let term: Pmc = UniPoly::monomial(m_pow, b - j);
                    out[a + j] = out[a + j].add(&term);
                }
            }
        }
        UniPoly::new(out)
    }

    /// Restriction to a concrete line `y = m x + c` as a polynomial in `x`.
    pub fn restrict_to_line(&self, m: &Scalar, c: &Scalar) -> UniPoly<Scalar> {
        let px = Poly2::x();
        let py = Poly2::x().scale(m).add(&Poly2::constant(c.clone()));
        let r = self.substitute(&px, &py);
        // now a polynomial in x alone
        let mut coeffs = vec![];
        for (i, f) in r.grades.iter().enumerate() {
            // grade i must be c_i x^i
            coeffs.push(f.coeff(0));
            for (j, co) in f.coeffs.iter().enumerate() {
                if j > 0 {
                    assert!(co.is_zero(), "restriction left a y term at grade {i}");
                }
            }
        }
        UniPoly::new(coeffs)
    }

    /// Substitute `x = const`, leaving a polynomial in `y`.
    pub fn at_x(&self, x0: &Scalar) -> UniPoly<Scalar> {
        let mut coeffs: Vec<Scalar> = vec![];
        for f in &self.grades {
            let d = f.degree;
            for (b, c) in f.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                while coeffs.len() <= b {
                    coeffs.push(Scalar::zero());
                }
                coeffs[b] = coeffs[b].add(&c.mul(&x0.pow((d - b) as i64)));
            }
        }
        UniPoly::new(coeffs)
    }

    /// Homogenize to total degree `d` with a third variable and read off
    /// the coefficient forms; used by chart changes. Returns the list of
    /// binary forms `g_i` with `p = sum_i g_i(x, y) z^{d - i}`.
    pub fn homogenize_parts(&self, d: usize) -> Vec<BinaryForm> {
        let mut parts = vec![];
        for i in 0..=d {
            parts.push(self.grade(i));
        }
        parts
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
    fn grading_and_arithmetic() {
        // (x + y)^2 = x^2 + 2xy + y^2
        let f = Poly2::x().add(&Poly2::y()).pow(2);
        assert_eq!(f.degree(), Some(2));
        let top = f.top();
        assert!(top.coeff(0).eq_scalar(&s(1)));
        assert!(top.coeff(1).eq_scalar(&s(2)));
        assert!(top.coeff(2).eq_scalar(&s(1)));
    }

    #[test]
    fn translation_mixes_grades() {
        // x^2 at (x+1) -> x^2 + 2x + 1
        let f = Poly2::monomial(s(1), 2, 0);
        let g = f.translate(&s(1), &s(0));
        assert!(g.grade(0).coeff(0).eq_scalar(&s(1)));
        assert!(g.grade(1).coeff(0).eq_scalar(&s(2)));
        assert!(g.grade(2).coeff(0).eq_scalar(&s(1)));
        assert!(g.eval(&s(2), &s(0)).eq_scalar(&s(9)));
    }

    #[test]
    fn symbolic_line_restriction_matches_concrete() {
        // p = x^2 y - y^3 + x
        let p = Poly2::monomial(s(1), 2, 1)
            .sub(&Poly2::monomial(s(1), 0, 3))
            .add(&Poly2::x());
        let sym = p.restrict_to_line_symbolic();
        let (m, c) = (Scalar::from_q(q(2, 1)), Scalar::from_q(q(-3, 1)));
        // evaluate the symbolic coefficients at (m, c)
        let conc = p.restrict_to_line(&m, &c);
        for (i, co) in sym.coeffs.iter().enumerate() {
            // co is in (m inner, c outer)
            let mut val = Scalar::zero();
            for (cp, inner) in co.coeffs.iter().enumerate() {
                let mut mval = Scalar::zero();
                for (mp, sc) in inner.coeffs.iter().enumerate() {
                    mval = mval.add(&sc.mul(&m.pow(mp as i64)));
                }
                val = val.add(&mval.mul(&c.pow(cp as i64)));
            }
            assert!(val.eq_scalar(&conc.coeff(i)), "coefficient of x^{i}");
        }
    }

    #[test]
    fn derivative_grades() {
        // d/dx (x^3 + x y^2) = 3x^2 + y^2
        let p = Poly2::monomial(s(1), 3, 0).add(&Poly2::monomial(s(1), 1, 2));
        let dx = p.d_dx();
        assert_eq!(dx.degree(), Some(2));
        assert!(dx.top().coeff(0).eq_scalar(&s(3)));
        assert!(dx.top().coeff(2).eq_scalar(&s(1)));
    }
}
