//! Dyadic interval and ball arithmetic used for certified enclosures.
//!
//! Everything here is conservative: endpoints are dyadic rationals
//! (`mantissa * 2^exp`), additions and multiplications of endpoints are
//! exact, and the only rounding (in division and precision trimming) is
//! outward. Soundness never depends on a rounding mode being tight.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};

/// A dyadic rational `man * 2^exp`.
#[derive(Clone, Debug)]
pub struct Dyadic {
    pub man: BigInt,
    pub exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { man: BigInt::from(n), exp: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.man.sign() == Sign::Plus
    }

    /// Strip trailing zero bits so equal values share a representation.
    fn normalize(mut self) -> Self {
        if self.man.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.man.is_zero() {
            return other.clone();
        }
        if other.man.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.exp <= other.exp { (self, other) } else { (other, self) };
        let shift = (hi.exp - lo.exp) as u64;
        let man = &lo.man + (&hi.man << shift);
        Dyadic { man, exp: lo.exp }.normalize()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Dyadic { man: &self.man * &other.man, exp: self.exp + other.exp }.normalize()
    }

    pub fn shl(&self, bits: i64) -> Self {
        Dyadic { man: self.man.clone(), exp: self.exp + bits }
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Round to at most `prec` mantissa bits, away from zero (an upper
    /// bound on the magnitude; sign preserved).
    pub fn round_up_mag(&self, prec: u64) -> Self {
        let bits = self.man.bits();
        if bits <= prec {
            return self.clone();
        }
        let drop = bits - prec;
        let mag = self.man.abs();
        let rounded = (&mag >> drop) + 1u32;
        let man = if self.is_negative() { -rounded } else { rounded };
        Dyadic { man, exp: self.exp + drop as i64 }.normalize()
    }

    /// Round toward −∞ keeping at most `prec` mantissa bits.
    pub fn round_down(&self, prec: u64) -> Self {
        let bits = self.man.bits();
        if bits <= prec {
            return self.clone();
        }
        let drop = bits - prec;
        // floor division by 2^drop
        let man = self.man.clone() >> drop;
        Dyadic { man, exp: self.exp + drop as i64 }.normalize()
    }

    /// Round toward +∞ keeping at most `prec` mantissa bits.
    pub fn round_up(&self, prec: u64) -> Self {
        self.neg().round_down(prec).neg()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from(self.man.clone() << self.exp as u64)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Largest dyadic with at most `prec` mantissa bits that is `<= q`.
    pub fn from_rational_floor(q: &BigRational, prec: u64) -> Self {
        dyadic_from_rational(q, prec, false)
    }

    /// Smallest dyadic with at most `prec` mantissa bits that is `>= q`.
    pub fn from_rational_ceil(q: &BigRational, prec: u64) -> Self {
        dyadic_from_rational(q, prec, true)
    }

    pub fn cmp_d(&self, other: &Self) -> Ordering {
        let diff = self.sub(other);
        if diff.man.is_zero() {
            Ordering::Equal
        } else if diff.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn min_d(a: &Self, b: &Self) -> Self {
        if a.cmp_d(b) == Ordering::Greater { b.clone() } else { a.clone() }
    }

    pub fn max_d(a: &Self, b: &Self) -> Self {
        if a.cmp_d(b) == Ordering::Less { b.clone() } else { a.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.man.bits();
        if bits <= 52 {
            use num::ToPrimitive;
            let m = self.man.to_f64().unwrap_or(f64::NAN);
            m * 2f64.powi(self.exp as i32)
        } else {
            let drop = bits - 52;
            use num::ToPrimitive;
            let m = (self.man.clone() >> drop).to_f64().unwrap_or(f64::NAN);
            m * 2f64.powi((self.exp + drop as i64) as i32)
        }
    }
}

fn dyadic_from_rational(q: &BigRational, prec: u64, ceil: bool) -> Dyadic {
    if q.is_zero() {
        return Dyadic::zero();
    }
    let num = q.numer();
    let den = q.denom();
    // scale so that the quotient has about `prec+1` bits
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift = prec as i64 + 1 - (nb - db);
    let (scaled_num, scaled_den) = if shift >= 0 {
        (num.clone() << shift as u64, den.clone())
    } else {
        (num.clone(), den.clone() << (-shift) as u64)
    };
    let (quot, rem) = num::Integer::div_rem(&scaled_num, &scaled_den);
    let exact = rem.is_zero();
    let mut man = quot;
    if !exact {
        // div_rem truncates toward zero
        let num_neg = num.is_negative();
        if ceil && !num_neg {
            man += 1;
        }
        if !ceil && num_neg {
            man -= 1;
        }
    }
    Dyadic { man, exp: -shift }.normalize()
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}

/// Closed real interval with dyadic endpoints.
#[derive(Clone, Debug)]
pub struct RInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl RInterval {
    pub fn point(d: Dyadic) -> Self {
        RInterval { lo: d.clone(), hi: d }
    }

    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo.cmp_d(&hi) != Ordering::Greater);
        RInterval { lo, hi }
    }

    pub fn from_rationals(lo: &BigRational, hi: &BigRational, prec: u64) -> Self {
        RInterval {
            lo: Dyadic::from_rational_floor(lo, prec),
            hi: Dyadic::from_rational_ceil(hi, prec),
        }
    }

    pub fn zero() -> Self {
        RInterval::point(Dyadic::zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        RInterval { lo: self.lo.add(&o.lo), hi: self.hi.add(&o.hi) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        RInterval { lo: self.lo.sub(&o.hi), hi: self.hi.sub(&o.lo) }
    }

    pub fn neg(&self) -> Self {
        RInterval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for x in &c[1..] {
            lo = Dyadic::min_d(&lo, x);
            hi = Dyadic::max_d(&hi, x);
        }
        RInterval { lo, hi }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        self.lo.cmp_d(d) != Ordering::Greater && self.hi.cmp_d(d) != Ordering::Less
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).shl(-1)
    }

    /// Magnitude upper bound.
    pub fn mag(&self) -> Dyadic {
        Dyadic::max_d(&self.lo.abs(), &self.hi.abs())
    }

    /// Lower bound on |x| over the interval (zero if it straddles 0).
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            Dyadic::min_d(&self.lo.abs(), &self.hi.abs())
        }
    }

    /// Outward-round endpoints to `prec` mantissa bits.
    pub fn trim(&self, prec: u64) -> Self {
        RInterval { lo: self.lo.round_down(prec), hi: self.hi.round_up(prec) }
    }

    pub fn intersect(&self, o: &Self) -> Option<Self> {
        let lo = Dyadic::max_d(&self.lo, &o.lo);
        let hi = Dyadic::min_d(&self.hi, &o.hi);
        if lo.cmp_d(&hi) == Ordering::Greater {
            None
        } else {
            Some(RInterval { lo, hi })
        }
    }

    pub fn subset_of_interior(&self, o: &Self) -> bool {
        self.lo.cmp_d(&o.lo) == Ordering::Greater && self.hi.cmp_d(&o.hi) == Ordering::Less
    }

    pub fn subset_of(&self, o: &Self) -> bool {
        self.lo.cmp_d(&o.lo) != Ordering::Less && self.hi.cmp_d(&o.hi) != Ordering::Greater
    }
}

/// Closed complex rectangle (interval for each coordinate).
#[derive(Clone, Debug)]
pub struct CInterval {
    pub re: RInterval,
    pub im: RInterval,
}

impl CInterval {
    pub fn new(re: RInterval, im: RInterval) -> Self {
        CInterval { re, im }
    }

    pub fn zero() -> Self {
        CInterval { re: RInterval::zero(), im: RInterval::zero() }
    }

    pub fn add(&self, o: &Self) -> Self {
        CInterval { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        CInterval { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Self {
        CInterval { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        CInterval { re, im }
    }

    /// Reciprocal; `None` when the rectangle may contain zero.
    pub fn inv(&self, prec: u64) -> Option<Self> {
        // 1/z = conj(z) / |z|^2. |z|^2 bounds from coordinate bounds.
        let n2 = self.abs2();
        if n2.lo.is_zero() || n2.lo.is_negative() {
            return None;
        }
        let inv_n2 = inv_interval(&n2, prec)?;
        let re = self.re.mul(&inv_n2);
        let im = self.im.neg().mul(&inv_n2);
        Some(CInterval { re, im })
    }

    pub fn div(&self, o: &Self, prec: u64) -> Option<Self> {
        Some(self.mul(&o.inv(prec)?))
    }

    /// Interval containing |z|^2 over the rectangle.
    pub fn abs2(&self) -> RInterval {
        let re2 = square_interval(&self.re);
        let im2 = square_interval(&self.im);
        re2.add(&im2)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn width(&self) -> Dyadic {
        Dyadic::max_d(&self.re.width(), &self.im.width())
    }

    pub fn mid(&self) -> (Dyadic, Dyadic) {
        (self.re.mid(), self.im.mid())
    }

    pub fn trim(&self, prec: u64) -> Self {
        CInterval { re: self.re.trim(prec), im: self.im.trim(prec) }
    }

    pub fn intersect(&self, o: &Self) -> Option<Self> {
        Some(CInterval { re: self.re.intersect(&o.re)?, im: self.im.intersect(&o.im)? })
    }

    pub fn subset_of_interior(&self, o: &Self) -> bool {
        self.re.subset_of_interior(&o.re) && self.im.subset_of_interior(&o.im)
    }

    pub fn subset_of(&self, o: &Self) -> bool {
        self.re.subset_of(&o.re) && self.im.subset_of(&o.im)
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        self.re.intersect(&o.re).is_some() && self.im.intersect(&o.im).is_some()
    }

    /// Certified disjointness of the value sets.
    pub fn disjoint(&self, o: &Self) -> bool {
        !self.overlaps(o)
    }

    pub fn to_ball(&self) -> ComplexBall {
        let (cre, cim) = self.mid();
        let rad_re = self.re.width().shl(-1);
        let rad_im = self.im.width().shl(-1);
        // Euclidean radius bound: |(a,b)| <= |a| + |b|
        let rad = rad_re.add(&rad_im);
        ComplexBall { re: cre, im: cim, rad }
    }
}

fn square_interval(x: &RInterval) -> RInterval {
    let lo2 = x.lo.mul(&x.lo);
    let hi2 = x.hi.mul(&x.hi);
    if x.contains_zero() {
        RInterval { lo: Dyadic::zero(), hi: Dyadic::max_d(&lo2, &hi2) }
    } else {
        RInterval { lo: Dyadic::min_d(&lo2, &hi2), hi: Dyadic::max_d(&lo2, &hi2) }
    }
}

fn inv_interval(x: &RInterval, prec: u64) -> Option<RInterval> {
    if x.contains_zero() {
        return None;
    }
    let lo = Dyadic::from_rational_floor(&x.hi.to_rational().recip(), prec);
    let hi = Dyadic::from_rational_ceil(&x.lo.to_rational().recip(), prec);
    Some(RInterval { lo, hi })
}

/// Certified complex enclosure: `|z - (re + i*im)| <= rad`.
#[derive(Clone, Debug)]
pub struct ComplexBall {
    pub re: Dyadic,
    pub im: Dyadic,
    pub rad: Dyadic,
}

impl ComplexBall {
    pub fn to_rect(&self) -> CInterval {
        CInterval {
            re: RInterval::new(self.re.sub(&self.rad), self.re.add(&self.rad)),
            im: RInterval::new(self.im.sub(&self.rad), self.im.add(&self.rad)),
        }
    }

    pub fn contains_zero(&self) -> bool {
        // |center| <= rad certified: use |c| <= |re| + |im| upper and
        // max(|re|,|im|) lower.
        let lower = Dyadic::max_d(&self.re.abs(), &self.im.abs());
        lower.cmp_d(&self.rad) != Ordering::Greater
    }

    /// Certified: the two balls have disjoint value sets.
    pub fn disjoint(&self, o: &ComplexBall) -> bool {
        // lower bound on |c1-c2| via max of coordinate distances
        let dre = self.re.sub(&o.re).abs();
        let dim = self.im.sub(&o.im).abs();
        let dist_lo = Dyadic::max_d(&dre, &dim);
        let rsum = self.rad.add(&o.rad);
        dist_lo.cmp_d(&rsum) == Ordering::Greater
    }

    pub fn approx_string(&self, digits: usize) -> String {
        let re = self.re.to_f64();
        let im = self.im.to_f64();
        if im == 0.0 && self.im.is_zero() {
            format!("{re:.digits$}")
        } else if im >= 0.0 {
            format!("{re:.digits$}+{im:.digits$}i")
        } else {
            format!("{re:.digits$}{im:.digits$}i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn dyadic_rounding_brackets_value() {
        let v = q(1, 3);
        let lo = Dyadic::from_rational_floor(&v, 30);
        let hi = Dyadic::from_rational_ceil(&v, 30);
        assert!(lo.to_rational() <= v);
        assert!(hi.to_rational() >= v);
        assert!(lo.to_rational() != hi.to_rational());
        let exact = q(3, 8);
        let lo = Dyadic::from_rational_floor(&exact, 30);
        assert_eq!(lo.to_rational(), exact);
    }

    #[test]
    fn interval_mul_is_conservative() {
        let a = RInterval::from_rationals(&q(-1, 2), &q(1, 3), 40);
        let b = RInterval::from_rationals(&q(2, 1), &q(3, 1), 40);
        let p = a.mul(&b);
        // -1/2*3 = -3/2 is the min, 1/3*3 = 1 the max
        assert!(p.lo.to_rational() <= q(-3, 2));
        assert!(p.hi.to_rational() >= q(1, 1));
    }

    #[test]
    fn complex_inv_roundtrip_contains_one() {
        let z = CInterval::new(
            RInterval::from_rationals(&q(1, 1), &q(101, 100), 60),
            RInterval::from_rationals(&q(1, 1), &q(101, 100), 60),
        );
        let inv = z.inv(60).unwrap();
        let prod = z.mul(&inv);
        // 1 must lie inside z * (1/z)
        assert!(prod.re.contains(&Dyadic::one()));
        assert!(prod.im.contains_zero() || prod.im.contains(&Dyadic::zero()));
    }

    #[test]
    fn ball_disjointness() {
        let b1 = ComplexBall { re: Dyadic::zero(), im: Dyadic::zero(), rad: Dyadic::from_int(1) };
        let b2 = ComplexBall { re: Dyadic::from_int(5), im: Dyadic::zero(), rad: Dyadic::from_int(1) };
        assert!(b1.disjoint(&b2));
        let b3 = ComplexBall { re: Dyadic::from_int(1), im: Dyadic::zero(), rad: Dyadic::from_int(1) };
        assert!(!b1.disjoint(&b3));
    }

    #[test]
    fn f64_conversion_sane() {
        let v = Dyadic::from_rational_floor(&BigRational::from_f64(0.3125).unwrap(), 60);
        assert!((v.to_f64() - 0.3125).abs() < 1e-12);
    }
}
