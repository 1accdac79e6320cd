//! Rational minimal polynomials of scalars and derived real-algebraic
//! quantities (real part, squared modulus) with exact sign determination.
//!
//! These power cross-field equality without composita and the region
//! checks on Camacho–Sad indices and multipliers, where boundary cases must
//! be decided exactly.

use std::cmp::Ordering;
use std::sync::Arc;

use num::{BigRational, One, Zero};

use crate::ball::CInterval;
use crate::poly::isolate;
use crate::poly::{resultant_ring, QPoly, UniPoly};
use crate::scalar::{NumberField, QRect, Scalar, ScalarError, DEFAULT_PREC, MAX_PREC};

/// Characteristic polynomial of `x` over Q: `prod_i (s - p_x(theta_i))`
/// over the conjugates of the field generator; monic of degree
/// `deg(minpoly)`. For rationals this is `s - x`.
pub fn charpoly_q(x: &Scalar) -> QPoly {
    match x.field() {
        None => QPoly::new(vec![-x.to_rational().unwrap(), BigRational::one()]),
        Some(f) => {
            // Res_t(m(t), s - p_x(t)) with inner variable s
            let m: UniPoly<QPoly> =
                UniPoly::new(f.minpoly.coeffs.iter().map(|c| QPoly::constant(c.clone())).collect());
            let mut coeffs: Vec<QPoly> = vec![];
            for (i, a) in x.coords().iter().enumerate() {
                let c = if i == 0 {
                    QPoly::new(vec![-a.clone(), BigRational::one()])
                } else {
                    QPoly::constant(-a.clone())
                };
                coeffs.push(c);
            }
            let s_minus_p: UniPoly<QPoly> = UniPoly::new(coeffs);
            resultant_ring(&m, &s_minus_p)
        }
    }
}

/// Squarefree monic rational polynomial vanishing at `x`.
pub fn minpoly_q(x: &Scalar) -> QPoly {
    charpoly_q(x).monic().squarefree_part()
}

/// Evaluate a rational polynomial at a scalar.
pub fn eval_qpoly_at(p: &QPoly, x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in p.coeffs.iter().rev() {
        acc = acc.mul(x).add(&Scalar::from_q(c.clone()));
    }
    acc
}

/// Exact equality of scalars living in unrelated fields, decided through
/// their rational minimal polynomials and isolating enclosures.
pub fn eq_cross_field(a: &Scalar, b: &Scalar) -> bool {
    let ma = minpoly_q(a);
    let mb = minpoly_q(b);
    let g = ma.gcd(&mb);
    if g.degree().unwrap_or(0) == 0 {
        return false;
    }
    if !eval_qpoly_at(&g, a).is_zero() || !eval_qpoly_at(&g, b).is_zero() {
        return false;
    }
    // both are roots of g; equal iff they sit in the same isolating box
    let iso = isolate::isolate_roots_q(&g).expect("isolating a squarefree rational polynomial");
    let mut prec = DEFAULT_PREC;
    loop {
        let ea = a.enclosure(prec).expect("enclosure");
        let eb = b.enclosure(prec).expect("enclosure");
        let hits_a: Vec<usize> = iso
            .clusters
            .iter()
            .enumerate()
            .filter(|(_, c)| c.rect.overlaps(&ea))
            .map(|(i, _)| i)
            .collect();
        let hits_b: Vec<usize> = iso
            .clusters
            .iter()
            .enumerate()
            .filter(|(_, c)| c.rect.overlaps(&eb))
            .map(|(i, _)| i)
            .collect();
        if hits_a.len() == 1 && hits_b.len() == 1 {
            return hits_a[0] == hits_b[0];
        }
        prec *= 2;
        if prec > MAX_PREC {
            panic!("cross-field equality undecided at precision cap");
        }
    }
}

/// Real part of `x` as an exact scalar in a real-embedded field.
pub fn real_part(x: &Scalar) -> Result<Scalar, ScalarError> {
    if x.is_rational() {
        return Ok(x.clone());
    }
    if x.field().map(|f| f.real_embedded).unwrap_or(false) {
        return Ok(x.clone());
    }
    let m = minpoly_q(x);
    // Res_t(m(t), m(2u - t)): roots (theta_i + theta_j)/2, contains Re(x)
    let m_lift: UniPoly<QPoly> =
        UniPoly::new(m.coeffs.iter().map(|c| QPoly::constant(c.clone())).collect());
    let n = m.deg();
    // m(2u - t) as a polynomial in t with QPoly (in u) coefficients
    let mut coeffs: Vec<QPoly> = vec![QPoly::zero(); n + 1];
    for (i, c) in m.coeffs.iter().enumerate() {
        // (2u - t)^i = sum_r C(i,r) (2u)^{i-r} (-t)^r
        let mut binom = BigRational::one();
        for r in 0..=i {
            if r > 0 {
                let ir = BigRational::from_integer(((i - r + 1) as i64).into());
                let rr = BigRational::from_integer((r as i64).into());
                binom = binom * ir / rr;
            }
            let two_pow = num::pow::pow(BigRational::from_integer(2.into()), i - r);
            let sign = if r % 2 == 0 { BigRational::one() } else { -BigRational::one() };
            let term = QPoly::monomial(c * &binom * &two_pow * &sign, i - r);
            coeffs[r] = coeffs[r].add(&term);
        }
    }
    let m_shift: UniPoly<QPoly> = UniPoly::new(coeffs);
    let rs = resultant_ring(&m_lift, &m_shift).monic().squarefree_part();
    adjoin_real_value(&rs, |prec| {
        let e = x.enclosure(prec)?;
        Ok(e.re)
    })
}

/// Squared modulus `|x|^2` as an exact scalar in a real-embedded field.
pub fn abs_squared(x: &Scalar) -> Result<Scalar, ScalarError> {
    if x.is_rational() {
        let v = x.to_rational().unwrap();
        return Ok(Scalar::from_q(&v * &v));
    }
    if x.field().map(|f| f.real_embedded).unwrap_or(false) {
        return Ok(x.mul(x));
    }
    let m = minpoly_q(x);
    let n = m.deg();
    // h(t, u) = sum_i m_i u^i t^{n-i}; Res_t(m, h) has roots theta_i*theta_j
    let mut coeffs: Vec<QPoly> = vec![QPoly::zero(); n + 1];
    for (i, c) in m.coeffs.iter().enumerate() {
        coeffs[n - i] = QPoly::monomial(c.clone(), i);
    }
    let m_lift: UniPoly<QPoly> =
        UniPoly::new(m.coeffs.iter().map(|c| QPoly::constant(c.clone())).collect());
    let h: UniPoly<QPoly> = UniPoly::new(coeffs);
    let rp = resultant_ring(&m_lift, &h).monic().squarefree_part();
    adjoin_real_value(&rp, |prec| {
        let e = x.enclosure(prec)?;
        Ok(e.abs2())
    })
}

/// Given a squarefree rational polynomial and a shrinking certified real
/// enclosure of one of its (real) roots, build the field and return the
/// root.
fn adjoin_real_value(
    p: &QPoly,
    encloser: impl Fn(u64) -> Result<crate::ball::RInterval, ScalarError>,
) -> Result<Scalar, ScalarError> {
    let mut prec = DEFAULT_PREC;
    loop {
        let e = encloser(prec)?;
        let rect = QRect::real(e.lo.to_rational(), e.hi.to_rational());
        match isolate::count_roots_in_rect_q(p, &rect) {
            Ok(1) => {
                let f = NumberField::new("r", p.clone(), rect)?;
                return Ok(Scalar::generator(&f));
            }
            Ok(_) | Err(isolate::IsolateError::Undecidable) => {
                prec *= 2;
                if prec > MAX_PREC {
                    return Err(ScalarError::PrecisionExhausted);
                }
            }
            Err(isolate::IsolateError::PrecisionExhausted) => return Err(ScalarError::PrecisionExhausted),
            Err(isolate::IsolateError::WrongRootCount { count }) => {
                return Err(ScalarError::BoxNotIsolating { count })
            }
            Err(isolate::IsolateError::ZeroPolynomial) => return Err(ScalarError::NonSquarefree),
            Err(isolate::IsolateError::Scalar(s)) => return Err(s),
        }
    }
}

/// Exact sign of a real scalar (rational or in a real-embedded field).
pub fn sign_real(x: &Scalar) -> Result<Ordering, ScalarError> {
    if let Some(q) = x.to_rational() {
        return Ok(q.cmp(&BigRational::zero()));
    }
    assert!(
        x.field().map(|f| f.real_embedded).unwrap_or(false),
        "sign_real needs a real-embedded scalar"
    );
    if x.is_zero() {
        return Ok(Ordering::Equal);
    }
    let mut prec = DEFAULT_PREC;
    loop {
        let e: CInterval = x.enclosure(prec)?;
        if e.re.lo.is_positive() {
            return Ok(Ordering::Greater);
        }
        if e.re.hi.is_negative() {
            return Ok(Ordering::Less);
        }
        prec *= 2;
        if prec > MAX_PREC {
            return Err(ScalarError::PrecisionExhausted);
        }
    }
}

/// Compare `Re(x)` with a rational exactly.
pub fn re_cmp_q(x: &Scalar, c: &BigRational) -> Result<Ordering, ScalarError> {
    let r = real_part(x)?;
    sign_real(&r.sub(&Scalar::from_q(c.clone())))
}

/// Compare `|x - center|^2` with a rational exactly.
pub fn dist2_cmp_q(x: &Scalar, center: &BigRational, r2: &BigRational) -> Result<Ordering, ScalarError> {
    let shifted = x.sub(&Scalar::from_q(center.clone()));
    let d2 = abs_squared(&shifted)?;
    sign_real(&d2.sub(&Scalar::from_q(r2.clone())))
}

/// Is `x` real? (decided exactly through the real part)
pub fn is_real(x: &Scalar) -> Result<bool, ScalarError> {
    if x.is_rational() || x.field().map(|f| f.real_embedded).unwrap_or(false) {
        return Ok(true);
    }
    let r = real_part(x)?;
    Ok(x.eq_scalar(&r))
}

/// A deterministic total order on scalars: first by certified enclosure
/// comparisons (real part, then imaginary part), falling back to exact
/// serialization for equal values. Used for reproducible report ordering.
pub fn cmp_for_order(a: &Scalar, b: &Scalar) -> Ordering {
    if a.eq_scalar(b) {
        return Ordering::Equal;
    }
    let mut prec = DEFAULT_PREC;
    loop {
        let (Ok(ea), Ok(eb)) = (a.enclosure(prec), b.enclosure(prec)) else {
            return a.sort_key().cmp(&b.sort_key());
        };
        if ea.re.hi.cmp_d(&eb.re.lo) == Ordering::Less {
            return Ordering::Less;
        }
        if eb.re.hi.cmp_d(&ea.re.lo) == Ordering::Less {
            return Ordering::Greater;
        }
        if ea.im.hi.cmp_d(&eb.im.lo) == Ordering::Less {
            return Ordering::Less;
        }
        if eb.im.hi.cmp_d(&ea.im.lo) == Ordering::Less {
            return Ordering::Greater;
        }
        prec *= 2;
        if prec > MAX_PREC {
            return a.sort_key().cmp(&b.sort_key());
        }
    }
}

pub fn field_of(x: &Scalar) -> Option<Arc<NumberField>> {
    x.field().cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn sqrt5() -> Scalar {
        let f = NumberField::new("s5", QPoly::from_ints(&[-5, 0, 1]), QRect::real(q(2, 1), q(5, 2)))
            .unwrap();
        Scalar::generator(&f)
    }

    #[test]
    fn charpoly_of_golden_ratio_like_value() {
        // x = (1+sqrt5)/2  ->  s^2 - s - 1
        let x = Scalar::one().add(&sqrt5()).mul_q(&q(1, 2));
        let cp = charpoly_q(&x);
        assert!(cp.eq_poly(&QPoly::new(vec![q(-1, 1), q(-1, 1), q(1, 1)])));
    }

    #[test]
    fn cross_field_equality_same_value_different_fields() {
        // sqrt5 in [2, 5/2] vs the root of t^2-5 isolated in [2.2, 2.3]
        let f2 = NumberField::new("s5b", QPoly::from_ints(&[-5, 0, 1]), QRect::real(q(11, 5), q(23, 10)))
            .unwrap();
        let a = sqrt5();
        let b = Scalar::generator(&f2);
        assert!(a.eq_scalar(&b));
        // and -sqrt5 is distinct
        assert!(!a.eq_scalar(&b.neg()));
    }

    #[test]
    fn real_part_of_gaussian_value() {
        let fi = NumberField::new(
            "i",
            QPoly::from_ints(&[1, 0, 1]),
            QRect::complex((q(-1, 2), q(1, 2)), (q(1, 2), q(3, 2))),
        )
        .unwrap();
        let i = Scalar::generator(&fi);
        // x = 3/2 + 2i
        let x = Scalar::from_q(q(3, 2)).add(&i.mul(&Scalar::from_int(2)));
        let r = real_part(&x).unwrap();
        assert!(r.eq_scalar(&Scalar::from_q(q(3, 2))));
        let a2 = abs_squared(&x).unwrap();
        // 9/4 + 4 = 25/4
        assert!(a2.eq_scalar(&Scalar::from_q(q(25, 4))));
        assert!(!is_real(&x).unwrap());
        assert!(is_real(&Scalar::from_int(7)).unwrap());
    }

    #[test]
    fn sign_and_disk_comparisons() {
        // |5 - 3| = 2 exactly equals the radius 2: boundary case
        let mu = Scalar::from_int(5);
        let s = dist2_cmp_q(&mu, &q(3, 1), &q(4, 1)).unwrap();
        assert_eq!(s, Ordering::Equal);
        // sqrt5: Re = sqrt5 > 2
        let cmp = re_cmp_q(&sqrt5(), &q(2, 1)).unwrap();
        assert_eq!(cmp, Ordering::Greater);
    }
}
