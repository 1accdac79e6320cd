//! Exact scalars: rationals and elements of `Q[t]/(m(t))` where `m` is a
//! monic squarefree rational polynomial equipped with a complex rectangle
//! isolating one distinguished root.
//!
//! Minimal polynomials are required to be squarefree, not irreducible.
//! Arithmetic therefore runs in a product of fields; the zero test and
//! inversion consult the embedding box to decide which component the
//! distinguished root lives in, and inversion refines the field to the
//! factor vanishing on the box whenever it meets a zero divisor. All values
//! are immutable; refinement produces new values.

pub mod algebraic;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num::BigRational;

fn q0() -> BigRational {
    <BigRational as num::Zero>::zero()
}

fn q1() -> BigRational {
    <BigRational as num::One>::one()
}
use once_cell::sync::Lazy;
use thiserror::Error;

use crate::ball::{CInterval, ComplexBall, Dyadic, RInterval};
use crate::poly::isolate::{self, IsolateError};
use crate::poly::{q_string, Coeff, FieldCoeff, QPoly, UniPoly};

pub const DEFAULT_PREC: u64 = 128;
pub const MAX_PREC: u64 = 8192;

#[derive(Debug, Error)]
pub enum ScalarError {
    #[error("minimal polynomial is not squarefree")]
    NonSquarefree,
    #[error("box is not isolating: contains {count} roots")]
    BoxNotIsolating { count: usize },
    #[error("box isolation undecidable (root on the boundary?)")]
    BoxUndecidable,
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("precision cap of {MAX_PREC} bits exhausted")]
    PrecisionExhausted,
    #[error("primitive element search failed")]
    PrimitiveElement,
}

/// Rational rectangle in the complex plane; `im = (0, 0)` encodes a real
/// segment (decided by exact endpoint tests rather than refinement).
#[derive(Clone, Debug, PartialEq)]
pub struct QRect {
    pub re: (BigRational, BigRational),
    pub im: (BigRational, BigRational),
}

impl QRect {
    pub fn real(lo: BigRational, hi: BigRational) -> Self {
        let z = q0();
        QRect { re: (lo, hi), im: (z.clone(), z) }
    }

    pub fn complex(re: (BigRational, BigRational), im: (BigRational, BigRational)) -> Self {
        QRect { re, im }
    }

    pub fn is_degenerate_real(&self) -> bool {
        self.im.0 == self.im.1
    }

    /// Conjugation-stable boxes certify realness of a unique root of a real
    /// polynomial.
    pub fn is_conj_symmetric(&self) -> bool {
        self.im.0 == -self.im.1.clone()
    }

    pub fn key(&self) -> String {
        format!(
            "[{},{}]x[{},{}]",
            q_string(&self.re.0),
            q_string(&self.re.1),
            q_string(&self.im.0),
            q_string(&self.im.1)
        )
    }

    pub fn to_cinterval(&self, prec: u64) -> CInterval {
        CInterval::new(
            RInterval::from_rationals(&self.re.0, &self.re.1, prec),
            RInterval::from_rationals(&self.im.0, &self.im.1, prec),
        )
    }
}

/// A number field `Q[t]/(m)` with a certified embedding.
pub struct NumberField {
    pub name: String,
    /// Monic squarefree minimal polynomial over Q.
    pub minpoly: QPoly,
    /// Rational rectangle isolating the distinguished root.
    pub embedding_box: QRect,
    /// The unique root of `minpoly` in the box is real.
    pub real_embedded: bool,
    /// Certified, monotonically shrinking enclosure of the root.
    enclosure: Mutex<CInterval>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({} : {:?} in {})", self.name, self.minpoly, self.embedding_box.key())
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly.eq_poly(&other.minpoly) && self.embedding_box == other.embedding_box
    }
}

impl NumberField {
    /// Build a field after verifying squarefreeness and box isolation.
    pub fn new(name: &str, minpoly: QPoly, embedding_box: QRect) -> Result<Arc<Self>, ScalarError> {
        let minpoly = minpoly.monic();
        if minpoly.degree().unwrap_or(0) < 1 {
            return Err(ScalarError::NonSquarefree);
        }
        let d = minpoly.gcd(&minpoly.derivative());
        if d.deg() > 0 {
            return Err(ScalarError::NonSquarefree);
        }
        let as_scalars = UniPoly::new(minpoly.coeffs.iter().map(|c| Scalar::from_q(c.clone())).collect());
        let located = isolate::locate_unique_root_in_rect(&as_scalars, &embedding_box)
            .map_err(map_isolate_err)?;
        let real_embedded = located.certified_real
            || (embedding_box.is_conj_symmetric() && !embedding_box.is_degenerate_real());
        Ok(Arc::new(NumberField {
            name: name.to_string(),
            minpoly,
            embedding_box,
            real_embedded,
            enclosure: Mutex::new(located.enclosure),
        }))
    }

    /// Construct without re-running isolation (internal; enclosure must be
    /// certified by the caller).
    pub(crate) fn new_prechecked(
        name: &str,
        minpoly: QPoly,
        embedding_box: QRect,
        real_embedded: bool,
        enclosure: CInterval,
    ) -> Arc<Self> {
        Arc::new(NumberField {
            name: name.to_string(),
            minpoly,
            embedding_box,
            real_embedded,
            enclosure: Mutex::new(enclosure),
        })
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn key(&self) -> String {
        format!("{:?}|{}", poly_key(&self.minpoly), self.embedding_box.key())
    }

    /// Certified enclosure of the distinguished root, refined until its
    /// width is below `2^-prec`.
    pub fn root_enclosure(&self, prec: u64) -> Result<CInterval, ScalarError> {
        let mut guard = self.enclosure.lock().unwrap();
        let target = Dyadic { man: num::BigInt::from(1), exp: -(prec as i64) };
        if guard.width().cmp_d(&target) != Ordering::Greater {
            return Ok(guard.clone());
        }
        let as_scalars =
            UniPoly::new(self.minpoly.coeffs.iter().map(|c| Scalar::from_q(c.clone())).collect());
        let refined = isolate::refine_enclosure(&as_scalars, guard.clone(), prec).map_err(map_isolate_err)?;
        // monotone: the refined enclosure always lies inside the previous one
        *guard = refined.clone();
        Ok(refined)
    }

    /// Refined ball form of the root enclosure.
    pub fn root_ball(&self, prec: u64) -> Result<ComplexBall, ScalarError> {
        Ok(self.root_enclosure(prec)?.to_ball())
    }
}

fn map_isolate_err(e: IsolateError) -> ScalarError {
    match e {
        IsolateError::ZeroPolynomial => ScalarError::NonSquarefree,
        IsolateError::PrecisionExhausted => ScalarError::PrecisionExhausted,
        IsolateError::WrongRootCount { count } => ScalarError::BoxNotIsolating { count },
        IsolateError::Undecidable => ScalarError::BoxUndecidable,
        IsolateError::Scalar(s) => s,
    }
}

fn poly_key(p: &QPoly) -> String {
    let parts: Vec<String> = p.coeffs.iter().map(q_string).collect();
    parts.join(",")
}

/// An exact scalar: a rational (no field) or an element of a number field.
#[derive(Clone)]
pub struct Scalar {
    field: Option<Arc<NumberField>>,
    /// Length 1 when rational, `deg(minpoly)` otherwise, ascending powers.
    coords: Vec<BigRational>,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize_exact())
    }
}

impl Scalar {
    pub fn from_q(x: BigRational) -> Self {
        Scalar { field: None, coords: vec![x] }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_q(BigRational::from(num::BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Scalar::from_int(0)
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn generator(field: &Arc<NumberField>) -> Self {
        let n = field.degree();
        if n == 1 {
            // Q[t]/(t - c): the generator is the rational c itself.
            let c = -field.minpoly.coeff(0);
            return Scalar::from_q(c);
        }
        let mut coords = vec![q0(); n];
        coords[1] = q1();
        Scalar { field: Some(field.clone()), coords }
    }

    pub fn in_field(field: &Arc<NumberField>, coords: Vec<BigRational>) -> Self {
        let n = field.degree();
        let reduced = QPoly::new(coords).rem(&field.minpoly);
        if n == 1 {
            // Q[t]/(t - c) is Q itself; the residue is the value.
            return Scalar::from_q(reduced.coeff(0));
        }
        let mut c = reduced.coeffs;
        c.resize(n, q0());
        Scalar { field: Some(field.clone()), coords: c }
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_rational(&self) -> bool {
        match &self.field {
            None => true,
            Some(_) => self.coords.iter().skip(1).all(|c| num::Zero::is_zero(c)),
        }
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Drop the field tag when the value is rational.
    pub fn demote_if_rational(&self) -> Self {
        match self.to_rational() {
            Some(q) => Scalar::from_q(q),
            None => self.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        if self.coords.iter().all(|c| num::Zero::is_zero(c)) {
            return true;
        }
        match &self.field {
            None => false,
            Some(f) => {
                let p = QPoly::new(self.coords.clone());
                let g = p.gcd(&f.minpoly);
                if g.deg() == 0 {
                    return false;
                }
                // zero iff the embedded root is a root of g
                root_in_field_box(f, &g).expect("zero test must decide")
            }
        }
    }

    pub fn is_one(&self) -> bool {
        self.sub(&Scalar::one()).is_zero()
    }

    fn unify(&self, other: &Self) -> (Scalar, Scalar) {
        match (&self.field, &other.field) {
            (None, None) => (self.clone(), other.clone()),
            (Some(f), None) => (self.clone(), promote(other, f)),
            (None, Some(g)) => (promote(self, g), other.clone()),
            (Some(f), Some(g)) => {
                if Arc::ptr_eq(f, g) || **f == **g {
                    return (self.clone(), Scalar { field: Some(f.clone()), coords: other.coords.clone() });
                }
                // refinement lineage: same box, one minimal polynomial divides
                // the other
                if f.embedding_box == g.embedding_box {
                    if g.minpoly.divides(&f.minpoly) {
                        return (reduce_into(self, g), other.clone());
                    }
                    if f.minpoly.divides(&g.minpoly) {
                        return (self.clone(), reduce_into(other, f));
                    }
                }
                let comp = compositum(f, g).expect("compositum construction failed");
                (apply_embedding(self, &comp.embed1, &comp.field), apply_embedding(other, &comp.embed2, &comp.field))
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x + y)
            .collect();
        Scalar { field: a.field, coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Scalar { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.unify(other);
        match &a.field {
            None => Scalar::from_q(&a.coords[0] * &b.coords[0]),
            Some(f) => {
                let p = QPoly::new(a.coords.clone()).mul(&QPoly::new(b.coords.clone()));
                let r = p.rem(&f.minpoly);
                Scalar::in_field(f, r.coeffs)
            }
        }
    }

    pub fn mul_q(&self, c: &BigRational) -> Self {
        Scalar { field: self.field.clone(), coords: self.coords.iter().map(|x| x * c).collect() }
    }

    /// Exact inverse. On a zero divisor in a reducible field, refines the
    /// field to the factor vanishing on the box and retries.
    pub fn try_inv(&self) -> Result<Self, ScalarError> {
        match &self.field {
            None => {
                if num::Zero::is_zero(&self.coords[0]) {
                    return Err(ScalarError::DivisionByZero);
                }
                Ok(Scalar::from_q(self.coords[0].recip()))
            }
            Some(f) => {
                let p = QPoly::new(self.coords.clone());
                if p.is_zero() {
                    return Err(ScalarError::DivisionByZero);
                }
                let (g, u, _v) = egcd(&p, &f.minpoly);
                if g.deg() == 0 {
                    let ginv = g.coeff(0).recip();
                    let inv = u.scale(&ginv).rem(&f.minpoly);
                    return Ok(Scalar::in_field(f, inv.coeffs));
                }
                // zero divisor: decide which side of the splitting the
                // embedded root is on
                if root_in_field_box(f, &g)? {
                    return Err(ScalarError::DivisionByZero);
                }
                let reduced = refine_field(f, &g)?;
                let x = reduce_into(self, &reduced);
                x.try_inv()
            }
        }
    }

    pub fn inv(&self) -> Self {
        self.try_inv().expect("scalar inversion failed")
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e as u64;
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

    /// Exact equality across fields.
    pub fn eq_scalar(&self, other: &Self) -> bool {
        // quick certified rejection
        if let (Ok(b1), Ok(b2)) = (self.enclosure(64), other.enclosure(64)) {
            if b1.to_ball().disjoint(&b2.to_ball()) {
                return false;
            }
        }
        match (&self.field, &other.field) {
            (None, None) => self.coords[0] == other.coords[0],
            (Some(f), Some(g)) => {
                let same = Arc::ptr_eq(f, g) || **f == **g;
                let lineage = f.embedding_box == g.embedding_box
                    && (f.minpoly.divides(&g.minpoly) || g.minpoly.divides(&f.minpoly));
                if same || lineage {
                    self.sub(other).is_zero()
                } else {
                    // cross-field route that avoids composita: rational
                    // minimal polynomials plus isolating boxes
                    algebraic::eq_cross_field(self, other)
                }
            }
            _ => self.sub(other).is_zero(),
        }
    }

    /// Certified enclosure of the embedded value with width below `2^-prec`.
    pub fn enclosure(&self, prec: u64) -> Result<CInterval, ScalarError> {
        match &self.field {
            None => {
                let r = &self.coords[0];
                Ok(CInterval::new(
                    RInterval::from_rationals(r, r, prec.max(8)),
                    RInterval::zero(),
                ))
            }
            Some(f) => {
                let mut work = prec.max(DEFAULT_PREC);
                loop {
                    let root = f.root_enclosure(work)?;
                    let mut acc = CInterval::zero();
                    for c in self.coords.iter().rev() {
                        let cc = CInterval::new(RInterval::from_rationals(c, c, work), RInterval::zero());
                        acc = acc.mul(&root).add(&cc).trim(work);
                    }
                    let target = Dyadic { man: num::BigInt::from(1), exp: -(prec as i64) };
                    if acc.width().cmp_d(&target) != Ordering::Greater {
                        return Ok(acc);
                    }
                    work = work * 2;
                    if work > MAX_PREC {
                        return Err(ScalarError::PrecisionExhausted);
                    }
                }
            }
        }
    }

    pub fn ball(&self, prec: u64) -> Result<ComplexBall, ScalarError> {
        Ok(self.enclosure(prec)?.to_ball())
    }

    /// Exact string such as `3/2 + 1/2*sqrt5`.
    pub fn serialize_exact(&self) -> String {
        match &self.field {
            None => q_string(&self.coords[0]),
            Some(f) => {
                let mut parts: Vec<String> = vec![];
                for (i, c) in self.coords.iter().enumerate() {
                    if num::Zero::is_zero(c) {
                        continue;
                    }
                    let gen = &f.name;
                    let term = match i {
                        0 => q_string(c),
                        1 if num::One::is_one(c) => gen.clone(),
                        1 => format!("{}*{}", q_string(c), gen),
                        _ if num::One::is_one(c) => format!("{gen}^{i}"),
                        _ => format!("{}*{}^{}", q_string(c), gen, i),
                    };
                    parts.push(term);
                }
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts
                        .into_iter()
                        .enumerate()
                        .map(|(k, s)| {
                            if k == 0 {
                                s
                            } else if let Some(rest) = s.strip_prefix('-') {
                                format!(" - {rest}")
                            } else {
                                format!(" + {s}")
                            }
                        })
                        .collect()
                }
            }
        }
    }

    /// Decimal display hint from the certified enclosure.
    pub fn approx_string(&self, digits: usize) -> String {
        match self.ball(96) {
            Ok(b) => b.approx_string(digits),
            Err(_) => "?".to_string(),
        }
    }

    /// Deterministic sort key: exact field key plus coordinates.
    pub fn sort_key(&self) -> String {
        match &self.field {
            None => format!("Q|{}", q_string(&self.coords[0])),
            Some(f) => format!(
                "{}|{}",
                f.key(),
                self.coords.iter().map(q_string).collect::<Vec<_>>().join(",")
            ),
        }
    }
}

fn promote(x: &Scalar, f: &Arc<NumberField>) -> Scalar {
    let mut coords = vec![q0(); f.degree()];
    coords[0] = x.coords[0].clone();
    Scalar { field: Some(f.clone()), coords }
}

fn reduce_into(x: &Scalar, f: &Arc<NumberField>) -> Scalar {
    let p = QPoly::new(x.coords.clone()).rem(&f.minpoly);
    Scalar::in_field(f, p.coeffs)
}

fn apply_embedding(x: &Scalar, image_of_gen: &Scalar, f: &Arc<NumberField>) -> Scalar {
    let mut acc = Scalar::zero();
    for c in x.coords.iter().rev() {
        acc = acc.mul(image_of_gen).add(&Scalar::from_q(c.clone()));
    }
    match acc.field {
        Some(_) => acc,
        None => promote(&acc, f),
    }
}

/// Does the unique root of the field's minimal polynomial in its box satisfy
/// `g` (a divisor of the minimal polynomial)?
fn root_in_field_box(f: &Arc<NumberField>, g: &QPoly) -> Result<bool, ScalarError> {
    // refine the field enclosure until it certifies g != 0 on it, or until
    // exactness: g divides minpoly, so the root satisfies g iff the gcd
    // factor containing it is g's side. Evaluate with interval arithmetic
    // and fall back to the complement factor.
    let comp = f.minpoly.exact_div_poly(g);
    let mut prec = DEFAULT_PREC;
    loop {
        let root = f.root_enclosure(prec)?;
        let gval = eval_qpoly_on_rect(g, &root, prec);
        if !gval.contains_zero() {
            return Ok(false);
        }
        let cval = eval_qpoly_on_rect(&comp, &root, prec);
        if !cval.contains_zero() {
            return Ok(true);
        }
        prec *= 2;
        if prec > MAX_PREC {
            return Err(ScalarError::PrecisionExhausted);
        }
    }
}

pub(crate) fn eval_qpoly_on_rect(p: &QPoly, x: &CInterval, prec: u64) -> CInterval {
    let mut acc = CInterval::zero();
    for c in p.coeffs.iter().rev() {
        let cc = CInterval::new(RInterval::from_rationals(c, c, prec), RInterval::zero());
        acc = acc.mul(x).add(&cc).trim(prec);
    }
    acc
}

/// Refine a reducible field to the complement of `g` (the factor vanishing
/// on the box being `minpoly / g`).
fn refine_field(f: &Arc<NumberField>, g: &QPoly) -> Result<Arc<NumberField>, ScalarError> {
    let m2 = f.minpoly.exact_div_poly(g);
    let enclosure = f.root_enclosure(DEFAULT_PREC)?;
    Ok(NumberField::new_prechecked(
        &f.name,
        m2.monic(),
        f.embedding_box.clone(),
        f.real_embedded,
        enclosure,
    ))
}

/// Extended gcd over Q[t]: returns `(g, u, v)` with `u*a + v*b = g`.
fn egcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0 = QPoly::one();
    let mut s1 = QPoly::zero();
    let mut t0 = QPoly::zero();
    let mut t1 = QPoly::one();
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    (r0, s0, t0)
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn from_int(n: i64) -> Self {
        Scalar::from_int(n)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Scalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Scalar::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Scalar::mul(self, o)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn eq_elem(&self, o: &Self) -> bool {
        self.eq_scalar(o)
    }
    fn exact_div(&self, o: &Self) -> Self {
        self.div(o)
    }
}

impl FieldCoeff for Scalar {
    fn inv(&self) -> Self {
        Scalar::inv(self)
    }
}

/// Result of adjoining a root: the flattened field, the new root, and the
/// image of the previous working field's generator.
pub struct Adjoined {
    pub field: Arc<NumberField>,
    pub root: Scalar,
    pub base_gen_image: Option<Scalar>,
}

/// Unified field of a polynomial's coefficients (None = all rational).
pub fn coefficients_field(p: &UniPoly<Scalar>) -> Option<Arc<NumberField>> {
    let mut field: Option<Arc<NumberField>> = None;
    for c in &p.coeffs {
        if let Some(f) = c.field() {
            field = Some(match field {
                None => f.clone(),
                Some(g) => {
                    if Arc::ptr_eq(&g, f) || *g == **f {
                        g
                    } else {
                        compositum(&g, f).expect("compositum failed").field.clone()
                    }
                }
            });
        }
    }
    field
}

/// Force every coefficient into the same field representation.
pub fn unify_poly(p: &UniPoly<Scalar>) -> (UniPoly<Scalar>, Option<Arc<NumberField>>) {
    match coefficients_field(p) {
        None => (p.clone(), None),
        Some(f) => {
            let gen = Scalar::generator(&f);
            let coeffs = p
                .coeffs
                .iter()
                .map(|c| {
                    // adding 0*gen moves the coefficient into f
                    c.add(&gen.mul(&Scalar::zero()))
                })
                .collect();
            (UniPoly::new(coeffs), Some(f))
        }
    }
}

/// Adjoin a root of `p` (given by an isolating rational rectangle) to the
/// working field of its coefficients, flattening to a simple extension.
pub fn adjoin_root(p: &UniPoly<Scalar>, rect: &QRect) -> Result<Adjoined, ScalarError> {
    let (p, field) = unify_poly(p);
    if p.degree().unwrap_or(0) < 1 {
        return Err(ScalarError::NonSquarefree);
    }
    // squarefree check over the working field
    let g = p.gcd(&p.derivative());
    if g.deg() > 0 {
        return Err(ScalarError::NonSquarefree);
    }
    match field {
        None => {
            let qp = QPoly::new(p.coeffs.iter().map(|c| c.to_rational().unwrap()).collect());
            let f = NumberField::new(&fresh_name(), qp.monic(), rect.clone())?;
            Ok(Adjoined { root: Scalar::generator(&f), field: f, base_gen_image: None })
        }
        Some(base) => adjoin_over(&base, &p, rect),
    }
}

static NAME_COUNTER: Lazy<Mutex<u64>> = Lazy::new(|| Mutex::new(0));

fn fresh_name() -> String {
    let mut c = NAME_COUNTER.lock().unwrap();
    *c += 1;
    format!("g{}", *c)
}

/// Primitive-element adjunction of a root of `p` over `base`.
fn adjoin_over(
    base: &Arc<NumberField>,
    p: &UniPoly<Scalar>,
    rect: &QRect,
) -> Result<Adjoined, ScalarError> {
    // locate the target root inside the rectangle
    let located = isolate::locate_unique_root_in_rect(p, rect).map_err(map_isolate_err)?;
    let mut xi_enc = located.enclosure;

    // p written with the base generator as an inner variable t:
    // coefficients of p are polynomials in t, p_hat(t, s) with s the root
    // variable. Inner = s (QPoly), outer = t.
    let n = base.degree();
    // p_hat = sum_j coeff_j(t) s^j with t standing for the base generator;
    // substituting s -> s - k t happens per candidate k below
    let coeff_polys: Vec<Vec<BigRational>> = p
        .coeffs
        .iter()
        .map(|c| {
            let mut v = match c.field() {
                None => vec![c.to_rational().unwrap()],
                Some(_) => c.coords().to_vec(),
            };
            v.resize(n.max(1), q0());
            v
        })
        .collect();

    let m1: UniPoly<QPoly> = UniPoly::new(
        base.minpoly
            .coeffs
            .iter()
            .map(|c| QPoly::constant(c.clone()))
            .collect(),
    );

    for k in 1i64..=24 {
        // p_k(t, s) = p_hat(t, s - k t): degree e in s
        // build as UniPoly in t with QPoly (in s) coefficients
        // s - k t raised to powers: expand binomially
        // term c_{j,i} t^i s^j  ->  c_{j,i} t^i (s - k t)^j
        let mut acc: Vec<QPoly> = vec![]; // index by power of t
        let kq = BigRational::from(num::BigInt::from(k));
        for (j, cj) in coeff_polys.iter().enumerate() {
            // (s - k t)^j = sum_r C(j,r) s^{j-r} (-k t)^r
            let mut binom = q1();
            for r in 0..=j {
                if r > 0 {
                    let jr = BigRational::from(num::BigInt::from((j - r + 1) as i64));
                    let rr = BigRational::from(num::BigInt::from(r as i64));
                    binom = binom * jr / rr;
                }
                let sign_kr = if r % 2 == 0 {
                    num::pow::pow(kq.clone(), r)
                } else {
                    -num::pow::pow(kq.clone(), r)
                };
                let spow = j - r;
                for (i, c) in cj.iter().enumerate() {
                    if num::Zero::is_zero(c) {
                        continue;
                    }
                    let tpow = i + r;
                    while acc.len() <= tpow {
                        acc.push(QPoly::zero());
                    }
                    let term = QPoly::monomial(c * &binom * &sign_kr, spow);
                    acc[tpow] = acc[tpow].add(&term);
                }
            }
        }
        let pk: UniPoly<QPoly> = UniPoly::new(acc);
        let res = crate::poly::resultant_ring(&m1, &pk);
        if res.is_zero() {
            continue;
        }
        let res_m = res.monic();
        if res_m.gcd(&res_m.derivative()).deg() > 0 {
            continue; // not squarefree: k not separating
        }
        // enclosure of c = xi + k*theta
        let mut prec = DEFAULT_PREC;
        loop {
            let th = base.root_enclosure(prec)?;
            let kq_rect = CInterval::new(RInterval::from_rationals(&kq, &kq, prec), RInterval::zero());
            let c_enc = xi_enc.add(&kq_rect.mul(&th));
            // rational rectangle slightly padded
            let crect = cinterval_to_qrect(&c_enc);
            match isolate::count_roots_in_rect_q(&res_m, &crect) {
                Ok(1) => {
                    let located_c =
                        isolate::locate_unique_root_in_rect(&lift_qpoly(&res_m), &crect).map_err(map_isolate_err)?;
                    let newf = NumberField::new_prechecked(
                        &fresh_name(),
                        res_m.clone(),
                        crect,
                        located_c.certified_real,
                        located_c.enclosure,
                    );
                    // embeddings: theta = root of gcd(m1(t), p_k(t)) over newf
                    let cgen = Scalar::generator(&newf);
                    let m1f: UniPoly<Scalar> = UniPoly::new(
                        base.minpoly.coeffs.iter().map(|c| Scalar::from_q(c.clone())).collect(),
                    );
                    // p_hat(t, c - k t) over newf
                    let mut pc: UniPoly<Scalar> = UniPoly::zero();
                    for (tpow, spoly) in pk.coeffs.iter().enumerate() {
                        // spoly evaluated at s = cgen
                        let mut val = Scalar::zero();
                        for sc in spoly.coeffs.iter().rev() {
                            val = val.mul(&cgen).add(&Scalar::from_q(sc.clone()));
                        }
                        pc = pc.add(&UniPoly::monomial(val, tpow));
                    }
                    let lin = m1f.gcd(&pc);
                    if lin.degree() != Some(1) {
                        return Err(ScalarError::PrimitiveElement);
                    }
                    let theta_img = lin.coeff(0).neg().div(&lin.coeff(1));
                    let k_scalar = Scalar::from_q(kq.clone());
                    let root = cgen.sub(&k_scalar.mul(&theta_img));
                    return Ok(Adjoined { field: newf, root, base_gen_image: Some(theta_img) });
                }
                Ok(_) | Err(IsolateError::Undecidable) => {
                    prec *= 2;
                    if prec > MAX_PREC {
                        return Err(ScalarError::PrecisionExhausted);
                    }
                    xi_enc = isolate::refine_enclosure(p, xi_enc, prec).map_err(map_isolate_err)?;
                }
                Err(e) => return Err(map_isolate_err(e)),
            }
        }
    }
    Err(ScalarError::PrimitiveElement)
}

fn lift_qpoly(p: &QPoly) -> UniPoly<Scalar> {
    UniPoly::new(p.coeffs.iter().map(|c| Scalar::from_q(c.clone())).collect())
}

fn cinterval_to_qrect(c: &CInterval) -> QRect {
    QRect {
        re: (c.re.lo.to_rational(), c.re.hi.to_rational()),
        im: (c.im.lo.to_rational(), c.im.hi.to_rational()),
    }
}

/// Compositum of two fields with embeddings of both generators.
pub struct Compositum {
    pub field: Arc<NumberField>,
    pub embed1: Scalar,
    pub embed2: Scalar,
}

static COMPOSITUM_CACHE: Lazy<Mutex<HashMap<String, Arc<Compositum>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub fn compositum(f1: &Arc<NumberField>, f2: &Arc<NumberField>) -> Result<Arc<Compositum>, ScalarError> {
    if **f1 == **f2 {
        return Ok(Arc::new(Compositum {
            field: f1.clone(),
            embed1: Scalar::generator(f1),
            embed2: Scalar::generator(f1),
        }));
    }
    let key = format!("{}||{}", f1.key(), f2.key());
    if let Some(c) = COMPOSITUM_CACHE.lock().unwrap().get(&key) {
        return Ok(c.clone());
    }
    // adjoin the root of f2's minimal polynomial (in f2's box) over f1
    let m2: UniPoly<Scalar> = UniPoly::new(
        f2.minpoly
            .coeffs
            .iter()
            .map(|c| {
                let mut s = Scalar::from_q(c.clone());
                // tie the coefficients to f1 so adjoin_over runs over f1
                s = s.add(&Scalar::generator(f1).mul(&Scalar::zero()));
                s
            })
            .collect(),
    );
    let adj = adjoin_over(f1, &m2, &f2.embedding_box)?;
    let comp = Arc::new(Compositum {
        field: adj.field,
        embed1: adj.base_gen_image.expect("base embedding must exist"),
        embed2: adj.root,
    });
    COMPOSITUM_CACHE.lock().unwrap().insert(key, comp.clone());
    Ok(comp)
}

/// Outcome of `compare`.
pub enum Comparison {
    Equal,
    Distinct { lhs: ComplexBall, rhs: ComplexBall },
}

/// Exact comparison; when distinct, certified disjoint balls at the first
/// separating precision (starting at 128 bits, doubling, capped).
pub fn compare(x: &Scalar, y: &Scalar) -> Result<Comparison, ScalarError> {
    if x.eq_scalar(y) {
        return Ok(Comparison::Equal);
    }
    let mut prec = DEFAULT_PREC;
    loop {
        let bx = x.ball(prec)?;
        let by = y.ball(prec)?;
        if bx.disjoint(&by) {
            return Ok(Comparison::Distinct { lhs: bx, rhs: by });
        }
        prec *= 2;
        if prec > MAX_PREC {
            return Err(ScalarError::PrecisionExhausted);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    pub(crate) fn sqrt5_field() -> Arc<NumberField> {
        NumberField::new("sqrt5", QPoly::from_ints(&[-5, 0, 1]), QRect::real(q(11, 5), q(12, 5)))
            .expect("sqrt5 field")
    }

    #[test]
    fn sqrt5_squares_to_five() {
        let f = sqrt5_field();
        let s = Scalar::generator(&f);
        let five = s.mul(&s);
        assert!(five.eq_scalar(&Scalar::from_int(5)));
        assert!(five.is_rational());
    }

    #[test]
    fn golden_product_is_one() {
        // (3+sqrt5)/2 * (3-sqrt5)/2 = 1
        let f = sqrt5_field();
        let s = Scalar::generator(&f);
        let half = Scalar::from_q(q(1, 2));
        let a = Scalar::from_int(3).add(&s).mul(&half);
        let b = Scalar::from_int(3).sub(&s).mul(&half);
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn inverse_in_extension() {
        let f = sqrt5_field();
        let s = Scalar::generator(&f);
        let x = Scalar::from_int(2).add(&s); // 2 + sqrt5
        let inv = x.inv();
        assert!(x.mul(&inv).is_one());
        // 1/(2+sqrt5) = sqrt5 - 2
        assert!(inv.eq_scalar(&s.sub(&Scalar::from_int(2))));
    }

    #[test]
    fn gaussian_field_and_i_squared() {
        let f = NumberField::new(
            "i",
            QPoly::from_ints(&[1, 0, 1]),
            QRect::complex((q(-1, 2), q(1, 2)), (q(1, 2), q(3, 2))),
        )
        .unwrap();
        let i = Scalar::generator(&f);
        assert!(i.mul(&i).eq_scalar(&Scalar::from_int(-1)));
        assert!(!f.real_embedded);
    }

    #[test]
    fn reducible_squarefree_zero_test_and_refinement() {
        // Q[t]/((t-1)(t-3)) with box isolating the root 1
        let m = QPoly::from_ints(&[3, -4, 1]);
        let f = NumberField::new("r", m, QRect::real(q(0, 1), q(2, 1))).unwrap();
        let t = Scalar::generator(&f);
        // t - 1 is zero at the embedded root
        let x = t.sub(&Scalar::one());
        assert!(x.is_zero());
        // t - 3 is a zero divisor but nonzero at the root; inversion refines
        let y = t.sub(&Scalar::from_int(3));
        assert!(!y.is_zero());
        let inv = y.try_inv().unwrap();
        assert!(y.mul(&inv).is_one());
        // value is 1 - 3 = -2, inverse -1/2
        assert!(inv.eq_scalar(&Scalar::from_q(q(-1, 2))));
    }

    #[test]
    fn cubic_root_field_from_sign_change_box() {
        // 8 t^3 - 52 t^2 + 134 t - 15: endpoints have opposite signs on
        // [11/100, 3/25] (independent oracle for the box).
        let p = QPoly::new(vec![q(-15, 1), q(134, 1), q(-52, 1), q(8, 1)]);
        let at = |x: BigRational| p.eval(&x);
        assert!(at(q(11, 100)) < q0());
        assert!(at(q(3, 25)) > q0());
        let f = NumberField::new("rho", p, QRect::real(q(11, 100), q(3, 25))).unwrap();
        let rho = Scalar::generator(&f);
        // 8 rho^3 - 52 rho^2 + 134 rho - 15 = 0
        let val = rho
            .pow(3)
            .mul_q(&q(8, 1))
            .add(&rho.pow(2).mul_q(&q(-52, 1)))
            .add(&rho.mul_q(&q(134, 1)))
            .sub(&Scalar::from_int(15));
        assert!(val.is_zero());
        assert!(f.real_embedded);
    }

    #[test]
    fn non_squarefree_rejected() {
        let p = QPoly::from_ints(&[1, -2, 1]); // (t-1)^2
        let err = NumberField::new("x", p, QRect::real(q(0, 1), q(2, 1)));
        assert!(matches!(err, Err(ScalarError::NonSquarefree)));
    }

    #[test]
    fn box_with_two_roots_rejected() {
        let p = QPoly::from_ints(&[-1, 0, 1]); // roots ±1
        let err = NumberField::new("x", p, QRect::real(q(-2, 1), q(2, 1)));
        assert!(matches!(err, Err(ScalarError::BoxNotIsolating { count: 2 })));
    }

    #[test]
    fn compositum_sqrt5_sqrt21() {
        let f1 = sqrt5_field();
        let f2 = NumberField::new("sqrt21", QPoly::from_ints(&[-21, 0, 1]), QRect::real(q(9, 2), q(47, 10)))
            .unwrap();
        let c = compositum(&f1, &f2).unwrap();
        assert_eq!(c.field.degree(), 4);
        // the embeddings still satisfy their defining relations
        assert!(c.embed1.mul(&c.embed1).eq_scalar(&Scalar::from_int(5)));
        assert!(c.embed2.mul(&c.embed2).eq_scalar(&Scalar::from_int(21)));
        // mixed product has exact square 105
        let prod = c.embed1.mul(&c.embed2);
        assert!(prod.mul(&prod).eq_scalar(&Scalar::from_int(105)));
    }

    #[test]
    fn compositum_of_field_with_itself_variant_embeddings() {
        // Q(i) with the box at i, and Q(i) with the box at -i, must not be
        // conflated.
        let fi = NumberField::new(
            "i",
            QPoly::from_ints(&[1, 0, 1]),
            QRect::complex((q(-1, 2), q(1, 2)), (q(1, 2), q(3, 2))),
        )
        .unwrap();
        let fmi = NumberField::new(
            "mi",
            QPoly::from_ints(&[1, 0, 1]),
            QRect::complex((q(-1, 2), q(1, 2)), (q(-3, 2), q(-1, 2))),
        )
        .unwrap();
        let i = Scalar::generator(&fi);
        let mi = Scalar::generator(&fmi);
        assert!(!i.eq_scalar(&mi));
        // i + (-i) = 0 exactly, computed through the compositum
        assert!(i.add(&mi).is_zero());
        // i * (-i) = 1
        assert!(i.mul(&mi).is_one());
    }

    #[test]
    fn compare_separates_distinct_values() {
        let f = sqrt5_field();
        let s = Scalar::generator(&f);
        match compare(&s, &Scalar::from_q(q(9, 4))).unwrap() {
            Comparison::Distinct { lhs, rhs } => assert!(lhs.disjoint(&rhs)),
            Comparison::Equal => panic!("sqrt5 != 9/4"),
        }
        match compare(&s.mul(&s), &Scalar::from_int(5)).unwrap() {
            Comparison::Equal => {}
            _ => panic!("sqrt5^2 == 5"),
        }
    }

    #[test]
    fn enclosure_nesting_under_refinement() {
        let f = sqrt5_field();
        let s = Scalar::generator(&f).mul_q(&q(7, 3));
        let lo = s.enclosure(64).unwrap();
        let hi = s.enclosure(128).unwrap();
        assert!(hi.subset_of(&lo));
    }
}
