//! Rational self-maps of the projective line: fixed points with
//! multipliers and holomorphic indices, critical structure, and Möbius
//! conjugacy with exact witnesses.
//!
//! Convention, used everywhere downstream: a map is the pair of coprime
//! binary forms `[x:y] -> [fx(x,y) : fy(x,y)]`; in the affine chart
//! `z = y/x` it acts as `g(z) = fy(1,z) / fx(1,z)`. The point `[a:b]`
//! corresponds to `z = b/a` and the chart of `[0:1]` (that is `z = ∞`) is
//! `w = x/y`.

use std::sync::Arc;

use thiserror::Error;

use crate::ball::CInterval;
use crate::poly::binary::{BinaryForm, LinearMap2};
use crate::poly::isolate::{self, IsolateError};
use crate::poly::UniPoly;
use crate::scalar::algebraic;
use crate::scalar::{adjoin_root, QRect, Scalar, ScalarError};

#[derive(Debug, Error)]
pub enum RatMapError {
    #[error("numerator and denominator share a factor")]
    NotReduced,
    #[error("the map is the identity; fixed points are not isolated")]
    IdentityMap,
    #[error("map is not critically fixed")]
    NotCriticallyFixed,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("could not build three exact anchor fixed points")]
    AnchorConstruction,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("isolation failure: {0}")]
    Isolate(String),
}

impl From<IsolateError> for RatMapError {
    fn from(e: IsolateError) -> Self {
        RatMapError::Isolate(e.to_string())
    }
}

/// Projective point on the line, normalized so `x = 1`, or `(0, 1)`.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    pub x: Scalar,
    pub y: Scalar,
}

impl ProjPoint {
    pub fn finite(z: Scalar) -> Self {
        ProjPoint { x: Scalar::one(), y: z }
    }

    pub fn infinity() -> Self {
        ProjPoint { x: Scalar::zero(), y: Scalar::one() }
    }

    pub fn new(x: Scalar, y: Scalar) -> Self {
        if x.is_zero() {
            assert!(!y.is_zero(), "projective point needs a nonzero coordinate");
            ProjPoint::infinity()
        } else {
            ProjPoint { y: y.div(&x), x: Scalar::one() }
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.x.is_zero()
    }

    pub fn eq_point(&self, o: &Self) -> bool {
        match (self.is_infinity(), o.is_infinity()) {
            (true, true) => true,
            (false, false) => self.y.eq_scalar(&o.y),
            _ => false,
        }
    }
}

/// Where the multipliers of a fixed-point class live.
#[derive(Clone, Debug)]
pub enum MultiplierRep {
    Exact(Scalar),
    /// Monic polynomial whose roots are exactly the multipliers of the
    /// class (one per fixed point in the class).
    Factored(UniPoly<Scalar>),
}

/// A Galois-stable group of fixed points: the roots of one factor of the
/// fixed-point polynomial sharing fixed multiplicity and critical
/// multiplicity.
#[derive(Clone, Debug)]
pub struct FixedClass {
    /// `None` marks the point at infinity `[0:1]`.
    pub factor: Option<UniPoly<Scalar>>,
    /// Multiplicity as a root of the fixed-point form.
    pub fixed_multiplicity: usize,
    /// Order of vanishing of the Jacobian determinant (0 = not critical).
    pub critical_multiplicity: usize,
    pub multiplier: MultiplierRep,
    /// `1/(1-mu)` data; `None` when `mu = 1` (multiple fixed point).
    pub index: Option<MultiplierRep>,
}

impl FixedClass {
    pub fn count(&self) -> usize {
        match &self.factor {
            None => 1,
            Some(q) => q.deg(),
        }
    }
}

/// One fixed point as reported by `fixed_points`.
#[derive(Clone, Debug)]
pub struct FixedPointRecord {
    pub class: usize,
    /// Exact coordinates when the defining factor is linear (or infinity).
    pub point: Option<ProjPoint>,
    pub cluster: Option<CInterval>,
    pub multiplier: MultiplierRep,
    pub index: Option<MultiplierRep>,
    pub critical_multiplicity: usize,
    pub fixed_multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct RationalSelfMap {
    pub fx: BinaryForm,
    pub fy: BinaryForm,
}

impl RationalSelfMap {
    pub fn new(fx: BinaryForm, fy: BinaryForm) -> Result<Self, RatMapError> {
        assert_eq!(fx.degree, fy.degree, "map components must have equal degree");
        if fx.is_zero() && fy.is_zero() {
            return Err(RatMapError::NotReduced);
        }
        if !fx.is_zero() && !fy.is_zero() {
            let g = fx.gcd_form(&fy);
            if g.degree > 0 {
                return Err(RatMapError::NotReduced);
            }
        }
        Ok(RationalSelfMap { fx, fy })
    }

    pub fn degree(&self) -> usize {
        self.fx.degree
    }

    /// `g(z) = N(z)/D(z)` in the `z = y/x` chart.
    pub fn numerator_z(&self) -> UniPoly<Scalar> {
        self.fy.at_x1()
    }

    pub fn denominator_z(&self) -> UniPoly<Scalar> {
        self.fx.at_x1()
    }

    /// Fixed-point form `y fx - x fy` of degree `d + 1`.
    pub fn fixed_point_form(&self) -> BinaryForm {
        let yfx = self.fx.mul(&BinaryForm::monomial(Scalar::one(), 0, 1));
        let xfy = self.fy.mul(&BinaryForm::monomial(Scalar::one(), 1, 0));
        yfx.sub(&xfy)
    }

    /// Jacobian determinant of the pair, degree `2d - 2`.
    pub fn wronskian(&self) -> BinaryForm {
        let a = self.fx.d_dx().mul(&self.fy.d_dy());
        let b = self.fx.d_dy().mul(&self.fy.d_dx());
        a.sub(&b)
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let x = self.fx.eval(&p.x, &p.y);
        let y = self.fy.eval(&p.x, &p.y);
        ProjPoint::new(x, y)
    }

    pub fn is_fixed(&self, p: &ProjPoint) -> bool {
        self.apply(p).eq_point(p)
    }

    /// Multiplier at a finite fixed point `z0` (must be fixed).
    pub fn multiplier_at_finite(&self, z0: &Scalar) -> Scalar {
        let n = self.numerator_z();
        let d = self.denominator_z();
        let dval = d.eval(z0);
        let num = n
            .derivative()
            .eval(z0)
            .mul(&dval)
            .sub(&n.eval(z0).mul(&d.derivative().eval(z0)));
        num.div(&dval.mul(&dval))
    }

    /// Multiplier at `[0:1]` (must be fixed): derivative of the `w = x/y`
    /// chart representation at `w = 0`.
    pub fn multiplier_at_infinity(&self) -> Scalar {
        let n = self.fx.at_y1();
        let d = self.fy.at_y1();
        let zero = Scalar::zero();
        let dval = d.eval(&zero);
        let num = n
            .derivative()
            .eval(&zero)
            .mul(&dval)
            .sub(&n.eval(&zero).mul(&d.derivative().eval(&zero)));
        num.div(&dval.mul(&dval))
    }

    pub fn multiplier_at(&self, p: &ProjPoint) -> Scalar {
        if p.is_infinity() {
            self.multiplier_at_infinity()
        } else {
            self.multiplier_at_finite(&p.y)
        }
    }

    /// Is `[0:1]` fixed?
    pub fn infinity_fixed(&self) -> bool {
        self.fx.eval(&Scalar::zero(), &Scalar::one()).is_zero()
    }

    /// `E(z) = D^2 - N'D + ND'`: vanishes at fixed points with multiplier
    /// 1; the finite index is `D^2 / E`.
    fn index_denominator(&self) -> UniPoly<Scalar> {
        let n = self.numerator_z();
        let d = self.denominator_z();
        let d2 = d.mul(&d);
        d2.sub(&n.derivative().mul(&d)).add(&n.mul(&d.derivative()))
    }

    /// `(N'D - ND')(z)`: numerator of the multiplier function.
    fn multiplier_numerator(&self) -> UniPoly<Scalar> {
        let n = self.numerator_z();
        let d = self.denominator_z();
        n.derivative().mul(&d).sub(&n.mul(&d.derivative()))
    }

    /// Exact monic polynomial whose roots (with multiplicity) are the
    /// multipliers at the roots of `q` (a factor of the finite fixed-point
    /// polynomial).
    fn multiplier_poly_for_factor(&self, q: &UniPoly<Scalar>) -> UniPoly<Scalar> {
        let d = self.denominator_z();
        let d2 = d.mul(&d);
        let mnum = self.multiplier_numerator();
        resultant_in_lambda(q, &d2, &mnum.neg())
    }

    /// Same for the holomorphic index `1/(1-mu) = D^2/E`.
    fn index_poly_for_factor(&self, q: &UniPoly<Scalar>) -> UniPoly<Scalar> {
        let e = self.index_denominator();
        let d = self.denominator_z();
        let d2 = d.mul(&d);
        resultant_in_lambda(q, &e, &d2.neg())
    }

    /// Fixed points grouped into Galois-stable classes.
    pub fn fixed_classes(&self) -> Result<Vec<FixedClass>, RatMapError> {
        let phi_form = self.fixed_point_form();
        if phi_form.is_zero() {
            return Err(RatMapError::IdentityMap);
        }
        let phi = phi_form.at_x1();
        let inf_mult = phi_form.x_order();

        // critical structure: squarefree split of the Wronskian
        let j = self.wronskian();
        let j_inf_order = if j.is_zero() { 0 } else { j.x_order() };
        let j_parts: Vec<(UniPoly<Scalar>, usize)> = if j.is_zero() {
            vec![]
        } else {
            let jz = j.at_x1();
            if jz.degree().unwrap_or(0) == 0 {
                vec![]
            } else {
                jz.squarefree_decomposition().1
            }
        };

        let mut classes = vec![];
        if phi.degree().unwrap_or(0) >= 1 {
            let (_, phi_parts) = phi.squarefree_decomposition();
            for (part, fixed_mult) in phi_parts {
                // split by critical multiplicity
                let mut remaining = part.clone();
                let mut pieces: Vec<(UniPoly<Scalar>, usize)> = vec![];
                for (jk, k) in &j_parts {
                    if remaining.degree().unwrap_or(0) == 0 {
                        break;
                    }
                    let g = remaining.gcd(jk);
                    if g.degree().unwrap_or(0) >= 1 {
                        remaining = remaining.exact_div_poly(&g);
                        pieces.push((g, *k));
                    }
                }
                if remaining.degree().unwrap_or(0) >= 1 {
                    pieces.push((remaining, 0));
                }
                for (qf, crit) in pieces {
                    let multiplier = if qf.deg() == 1 {
                        let z0 = qf.coeff(0).neg().div(&qf.coeff(1));
                        MultiplierRep::Exact(self.multiplier_at_finite(&z0))
                    } else {
                        MultiplierRep::Factored(self.multiplier_poly_for_factor(&qf))
                    };
                    let index = self.index_rep_for(&qf, &multiplier, fixed_mult);
                    classes.push(FixedClass {
                        factor: Some(qf),
                        fixed_multiplicity: fixed_mult,
                        critical_multiplicity: crit,
                        multiplier,
                        index,
                    });
                }
            }
        }
        if inf_mult > 0 {
            let mu = self.multiplier_at_infinity();
            let index = if mu.is_one() {
                None
            } else {
                Some(MultiplierRep::Exact(Scalar::one().div(&Scalar::one().sub(&mu))))
            };
            classes.push(FixedClass {
                factor: None,
                fixed_multiplicity: inf_mult,
                critical_multiplicity: j_inf_order,
                multiplier: MultiplierRep::Exact(mu),
                index,
            });
        }
        classes.sort_by_key(class_sort_key);
        Ok(classes)
    }

    fn index_rep_for(
        &self,
        q: &UniPoly<Scalar>,
        multiplier: &MultiplierRep,
        fixed_mult: usize,
    ) -> Option<MultiplierRep> {
        if fixed_mult > 1 {
            return None; // multiple fixed point: mu = 1, index undefined
        }
        match multiplier {
            MultiplierRep::Exact(mu) => {
                if mu.is_one() {
                    None
                } else {
                    Some(MultiplierRep::Exact(Scalar::one().div(&Scalar::one().sub(mu))))
                }
            }
            MultiplierRep::Factored(_) => {
                let e = self.index_denominator();
                if q.gcd(&e).degree().unwrap_or(0) > 0 {
                    None
                } else {
                    Some(MultiplierRep::Factored(self.index_poly_for_factor(q)))
                }
            }
        }
    }

    /// Per-point fixed-point records (clusters for irrational points).
    pub fn fixed_points(&self) -> Result<Vec<FixedPointRecord>, RatMapError> {
        let classes = self.fixed_classes()?;
        let mut out = vec![];
        for (ci, class) in classes.iter().enumerate() {
            match &class.factor {
                None => out.push(FixedPointRecord {
                    class: ci,
                    point: Some(ProjPoint::infinity()),
                    cluster: None,
                    multiplier: class.multiplier.clone(),
                    index: class.index.clone(),
                    critical_multiplicity: class.critical_multiplicity,
                    fixed_multiplicity: class.fixed_multiplicity,
                }),
                Some(qf) => {
                    if qf.deg() == 1 {
                        let z0 = qf.coeff(0).neg().div(&qf.coeff(1));
                        out.push(FixedPointRecord {
                            class: ci,
                            point: Some(ProjPoint::finite(z0)),
                            cluster: None,
                            multiplier: class.multiplier.clone(),
                            index: class.index.clone(),
                            critical_multiplicity: class.critical_multiplicity,
                            fixed_multiplicity: class.fixed_multiplicity,
                        });
                    } else {
                        let iso = isolate::isolate_roots(qf)?;
                        for c in iso.clusters {
                            out.push(FixedPointRecord {
                                class: ci,
                                point: None,
                                cluster: Some(c.rect),
                                multiplier: class.multiplier.clone(),
                                index: class.index.clone(),
                                critical_multiplicity: class.critical_multiplicity,
                                fixed_multiplicity: class.fixed_multiplicity,
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Critical points with multiplicities (order of the Jacobian zero);
    /// `None` in the first slot marks the point at infinity.
    pub fn critical_points(&self) -> Result<Vec<(Option<UniPoly<Scalar>>, usize)>, RatMapError> {
        let j = self.wronskian();
        assert!(!j.is_zero(), "Wronskian of a nonconstant map is nonzero");
        let mut out: Vec<(Option<UniPoly<Scalar>>, usize)> = vec![];
        let inf_order = j.x_order();
        if inf_order > 0 {
            out.push((None, inf_order));
        }
        let jz = j.at_x1();
        if jz.degree().unwrap_or(0) >= 1 {
            let (_, parts) = jz.squarefree_decomposition();
            for (p, k) in parts {
                out.push((Some(p), k));
            }
        }
        Ok(out)
    }

    /// Total critical multiplicity, always `2d - 2`.
    pub fn total_critical_multiplicity(&self) -> usize {
        self.wronskian().degree
    }

    /// Every critical point is fixed (exact check through radicals).
    pub fn is_critically_fixed(&self) -> bool {
        let j = self.wronskian();
        if j.is_zero() {
            return false;
        }
        let rad = j.squarefree_form();
        let phi = self.fixed_point_form();
        rad.divides_form(&phi)
    }

    /// Exact monic polynomial with the multipliers of all `d+1` fixed
    /// points as roots.
    pub fn multiplier_polynomial(&self) -> Result<UniPoly<Scalar>, RatMapError> {
        let phi_form = self.fixed_point_form();
        if phi_form.is_zero() {
            return Err(RatMapError::IdentityMap);
        }
        let phi = phi_form.at_x1();
        let inf_mult = phi_form.x_order();
        let mut acc = UniPoly::one();
        if phi.degree().unwrap_or(0) >= 1 {
            acc = self.multiplier_poly_for_factor(&phi.monic());
        }
        for _ in 0..inf_mult {
            let mu = self.multiplier_at_infinity();
            acc = acc.mul(&UniPoly::new(vec![mu.neg(), Scalar::one()]));
        }
        Ok(acc)
    }

    /// Exact monic polynomial with the indices `1/(1-mu)` of the `d+1`
    /// fixed points as roots; fails if some multiplier equals 1.
    pub fn index_polynomial(&self) -> Result<UniPoly<Scalar>, RatMapError> {
        let phi_form = self.fixed_point_form();
        if phi_form.is_zero() {
            return Err(RatMapError::IdentityMap);
        }
        let phi = phi_form.at_x1().monic();
        let e = self.index_denominator();
        if phi.gcd(&e).degree().unwrap_or(0) > 0 {
            return Err(RatMapError::NotCriticallyFixed);
        }
        let inf_mult = phi_form.x_order();
        let mut acc = UniPoly::one();
        if phi.degree().unwrap_or(0) >= 1 {
            acc = self.index_poly_for_factor(&phi);
        }
        for _ in 0..inf_mult {
            let mu = self.multiplier_at_infinity();
            let idx = Scalar::one().div(&Scalar::one().sub(&mu));
            acc = acc.mul(&UniPoly::new(vec![idx.neg(), Scalar::one()]));
        }
        Ok(acc)
    }

    /// Conjugation by an invertible map: `M ∘ f ∘ M^{-1}`.
    pub fn mobius_conjugate(&self, m: &LinearMap2) -> Result<RationalSelfMap, RatMapError> {
        if m.det().is_zero() {
            return Err(RatMapError::SingularMatrix);
        }
        let adj = m.adjugate();
        let gx = self.fx.substitute_linear(&adj);
        let gy = self.fy.substitute_linear(&adj);
        let nfx = gx.scale(&m.a).add(&gy.scale(&m.b));
        let nfy = gx.scale(&m.c).add(&gy.scale(&m.d));
        RationalSelfMap::new(nfx, nfy)
    }

    /// Canonical scaling: divide by the first nonzero coefficient in the
    /// scan order (fx then fy).
    pub fn canonical(&self) -> RationalSelfMap {
        let pivot = self
            .fx
            .coeffs
            .iter()
            .chain(self.fy.coeffs.iter())
            .find(|c| !c.is_zero())
            .expect("nonzero map")
            .clone();
        let inv = pivot.inv();
        RationalSelfMap { fx: self.fx.scale(&inv), fy: self.fy.scale(&inv) }
    }

    pub fn eq_projective(&self, o: &RationalSelfMap) -> bool {
        if self.degree() != o.degree() {
            return false;
        }
        let a = self.canonical();
        let b = o.canonical();
        a.fx.eq_form(&b.fx) && a.fy.eq_form(&b.fy)
    }
}

fn class_sort_key(c: &FixedClass) -> String {
    match &c.factor {
        None => "~inf".to_string(),
        Some(q) => format!(
            "{}|{}",
            q.deg(),
            q.coeffs.iter().map(|s| s.sort_key()).collect::<Vec<_>>().join(",")
        ),
    }
}

/// `Res_z(q(z), lambda * A(z) + B(z))` as a monic polynomial in lambda.
fn resultant_in_lambda(
    q: &UniPoly<Scalar>,
    a: &UniPoly<Scalar>,
    b: &UniPoly<Scalar>,
) -> UniPoly<Scalar> {
    type PL = UniPoly<Scalar>;
    type PZL = UniPoly<PL>;
    let qq: PZL = UniPoly::new(q.coeffs.iter().map(|c| PL::constant(c.clone())).collect());
    let max = a.coeffs.len().max(b.coeffs.len());
    let mut coeffs: Vec<PL> = vec![];
    for i in 0..max {
        coeffs.push(UniPoly::new(vec![b.coeff(i), a.coeff(i)]));
    }
    let lin: PZL = UniPoly::new(coeffs);
    let res = crate::poly::resultant_ring(&qq, &lin);
    res.monic()
}

/// An exact fixed point with its conjugacy-invariant label.
#[derive(Clone, Debug)]
pub struct MarkedPoint {
    pub point: ProjPoint,
    pub critical_multiplicity: usize,
    pub multiplier: Scalar,
}

/// All fixed points of a map as exact points, adjoining roots as needed.
pub fn exact_fixed_points(f: &RationalSelfMap) -> Result<Vec<MarkedPoint>, RatMapError> {
    let classes = f.fixed_classes()?;
    let mut out = vec![];
    for class in &classes {
        match &class.factor {
            None => out.push(MarkedPoint {
                point: ProjPoint::infinity(),
                critical_multiplicity: class.critical_multiplicity,
                multiplier: match &class.multiplier {
                    MultiplierRep::Exact(m) => m.clone(),
                    MultiplierRep::Factored(_) => unreachable!("infinity multiplier is exact"),
                },
            }),
            Some(q) => {
                for z0 in roots_exact(q)? {
                    let mu = f.multiplier_at_finite(&z0);
                    out.push(MarkedPoint {
                        point: ProjPoint::finite(z0),
                        critical_multiplicity: class.critical_multiplicity,
                        multiplier: mu,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// All roots of a squarefree polynomial as exact scalars (adjoining one
/// root at a time and splitting off the linear factor).
pub fn roots_exact(q: &UniPoly<Scalar>) -> Result<Vec<Scalar>, RatMapError> {
    let mut out = vec![];
    let mut rem = q.monic();
    while rem.degree().unwrap_or(0) >= 1 {
        if rem.deg() == 1 {
            out.push(rem.coeff(0).neg());
            break;
        }
        let iso = isolate::isolate_roots(&rem)?;
        let cluster = &iso.clusters[0];
        let rect = QRect {
            re: (cluster.rect.re.lo.to_rational(), cluster.rect.re.hi.to_rational()),
            im: (cluster.rect.im.lo.to_rational(), cluster.rect.im.hi.to_rational()),
        };
        let adj = adjoin_root(&rem, &rect)?;
        let root = adj.root.clone();
        let rem2 = match &adj.base_gen_image {
            Some(img) => migrate_poly(&rem, img),
            None => lift_into(&rem),
        };
        out.push(root.clone());
        let lin = UniPoly::new(vec![root.neg(), Scalar::one()]);
        rem = rem2.exact_div_poly(&lin);
    }
    Ok(out)
}

fn lift_into(p: &UniPoly<Scalar>) -> UniPoly<Scalar> {
    p.clone()
}

/// Rewrite a polynomial over a base field in terms of the image of the
/// base generator inside an extension.
pub fn migrate_poly(p: &UniPoly<Scalar>, gen_image: &Scalar) -> UniPoly<Scalar> {
    UniPoly::new(
        p.coeffs
            .iter()
            .map(|c| migrate_scalar(c, gen_image))
            .collect(),
    )
}

pub fn migrate_scalar(c: &Scalar, gen_image: &Scalar) -> Scalar {
    match c.field() {
        None => c.clone(),
        Some(_) => {
            let mut acc = Scalar::zero();
            for q in c.coords().iter().rev() {
                acc = acc.mul(gen_image).add(&Scalar::from_q(q.clone()));
            }
            acc
        }
    }
}

/// The Möbius map sending the ordered triple `(p1, p2, p3)` to
/// `([0:1], [1:0], [1:1])`, i.e. `(∞, 0, 1)` in the `z = y/x` chart.
pub fn normalizing_map(
    p1: &ProjPoint,
    p2: &ProjPoint,
    p3: &ProjPoint,
) -> Result<LinearMap2, RatMapError> {
    let det = |p: &ProjPoint, q: &ProjPoint| p.x.mul(&q.y).sub(&p.y.mul(&q.x));
    let d32 = det(p3, p2);
    let d31 = det(p3, p1);
    // x' = d32 * det([x,y], p1), y' = d31 * det([x,y], p2)
    let a = p1.y.mul(&d32);
    let b = p1.x.neg().mul(&d32);
    let c = p2.y.mul(&d31);
    let d = p2.x.neg().mul(&d31);
    LinearMap2::new(a, b, c, d).map_err(|_| RatMapError::SingularMatrix)
}

/// Decide Möbius conjugacy of two critically fixed maps; returns a witness
/// `M` with `mobius_conjugate(f, M) = g` when conjugate.
pub fn are_mobius_conjugate(
    f: &RationalSelfMap,
    g: &RationalSelfMap,
) -> Result<Option<LinearMap2>, RatMapError> {
    if !f.is_critically_fixed() || !g.is_critically_fixed() {
        return Err(RatMapError::NotCriticallyFixed);
    }
    if f.degree() != g.degree() {
        return Ok(None);
    }
    // invariant pre-check: the exact multiplier polynomials must agree
    let mf = f.multiplier_polynomial()?;
    let mg = g.multiplier_polynomial()?;
    if mf.coeffs.len() != mg.coeffs.len() {
        return Ok(None);
    }
    if !mf.coeffs.iter().zip(&mg.coeffs).all(|(x, y)| x.eq_scalar(y)) {
        return Ok(None);
    }

    let f_pts = exact_fixed_points(f)?;
    let g_pts = exact_fixed_points(g)?;
    if f_pts.len() < 3 || g_pts.len() < 3 {
        return Err(RatMapError::AnchorConstruction);
    }
    // anchors: prefer high critical multiplicity, then cheap fields; ties
    // between equal labels are covered by the exhaustive target search
    let mut order: Vec<usize> = (0..f_pts.len()).collect();
    order.sort_by_key(|&i| {
        let p = &f_pts[i];
        let depth = p.point.y.field().map(|fl| fl.degree()).unwrap_or(1);
        (usize::MAX - p.critical_multiplicity, depth)
    });
    let anchors: Vec<&MarkedPoint> = order.iter().take(3).map(|&i| &f_pts[i]).collect();
    let mf_norm = normalizing_map(&anchors[0].point, &anchors[1].point, &anchors[2].point)?;
    let f_hat = f.mobius_conjugate(&mf_norm)?.canonical();

    for i in 0..g_pts.len() {
        if !label_matches(anchors[0], &g_pts[i]) {
            continue;
        }
        for j in 0..g_pts.len() {
            if j == i || !label_matches(anchors[1], &g_pts[j]) {
                continue;
            }
            for k in 0..g_pts.len() {
                if k == i || k == j || !label_matches(anchors[2], &g_pts[k]) {
                    continue;
                }
                let mg_norm =
                    normalizing_map(&g_pts[i].point, &g_pts[j].point, &g_pts[k].point)?;
                let g_hat = g.mobius_conjugate(&mg_norm)?.canonical();
                if f_hat.eq_projective(&g_hat) {
                    let w = mg_norm.inverse().compose(&mf_norm);
                    let check = f.mobius_conjugate(&w)?;
                    if check.eq_projective(g) {
                        return Ok(Some(w));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn label_matches(a: &MarkedPoint, b: &MarkedPoint) -> bool {
    a.critical_multiplicity == b.critical_multiplicity && a.multiplier.eq_scalar(&b.multiplier)
}

/// The self-map `z -> z^d`.
pub fn power_map(d: usize) -> RationalSelfMap {
    RationalSelfMap::new(
        BinaryForm::monomial(Scalar::one(), d, 0),
        BinaryForm::monomial(Scalar::one(), 0, d),
    )
    .unwrap()
}

pub fn arc_field(s: &Scalar) -> Option<Arc<crate::scalar::NumberField>> {
    algebraic::field_of(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, QPoly};
    use crate::scalar::NumberField;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn sq(n: i64, d: i64) -> Scalar {
        Scalar::from_q(q(n, d))
    }

    #[test]
    fn z5_fixed_structure() {
        let f = power_map(5);
        let classes = f.fixed_classes().unwrap();
        let total: usize = classes.iter().map(|c| c.count() * c.fixed_multiplicity).sum();
        assert_eq!(total, 6);
        let inf = classes.iter().find(|c| c.factor.is_none()).unwrap();
        assert_eq!(inf.critical_multiplicity, 4);
        match &inf.multiplier {
            MultiplierRep::Exact(m) => assert!(m.is_zero()),
            _ => panic!(),
        }
        let zero = classes
            .iter()
            .find(|c| {
                c.factor.as_ref().map(|q| q.deg() == 1).unwrap_or(false)
                    && c.critical_multiplicity == 4
            })
            .unwrap();
        match &zero.multiplier {
            MultiplierRep::Exact(m) => assert!(m.is_zero()),
            _ => panic!(),
        }
        let simple: Vec<&FixedClass> =
            classes.iter().filter(|c| c.critical_multiplicity == 0).collect();
        let simple_count: usize = simple.iter().map(|c| c.count()).sum();
        assert_eq!(simple_count, 4);
        for c in simple {
            match &c.index {
                Some(MultiplierRep::Exact(ix)) => assert!(ix.eq_scalar(&sq(-1, 4))),
                Some(MultiplierRep::Factored(p)) => {
                    let lin = UniPoly::new(vec![sq(1, 4), s(1)]);
                    assert!(lin.pow(p.deg()).eq_poly(p));
                }
                None => panic!("index must be defined"),
            }
        }
        assert!(f.is_critically_fixed());
    }

    #[test]
    fn z2_data() {
        let f = power_map(2);
        let recs = f.fixed_points().unwrap();
        assert_eq!(recs.len(), 3);
        let mut mults = vec![];
        for r in &recs {
            match &r.multiplier {
                MultiplierRep::Exact(m) => mults.push(m.clone()),
                _ => panic!(),
            }
        }
        assert_eq!(mults.iter().filter(|m| m.is_zero()).count(), 2);
        assert_eq!(mults.iter().filter(|m| m.eq_scalar(&s(2))).count(), 1);
        let crit = f.critical_points().unwrap();
        let total: usize = crit
            .iter()
            .map(|(p, k)| p.as_ref().map(|q| q.deg()).unwrap_or(1) * k)
            .sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn parabolic_fixed_point_has_undefined_index() {
        // g(z) = z + z^2: fx = x^2, fy = xy + y^2
        let fx = BinaryForm::monomial(s(1), 2, 0);
        let fy = BinaryForm::new(2, vec![s(0), s(1), s(1)]);
        let f = RationalSelfMap::new(fx, fy).unwrap();
        let classes = f.fixed_classes().unwrap();
        let zero_class = classes.iter().find(|c| c.factor.is_some()).unwrap();
        assert_eq!(zero_class.fixed_multiplicity, 2);
        assert!(zero_class.index.is_none());
        match &zero_class.multiplier {
            MultiplierRep::Exact(m) => assert!(m.is_one()),
            _ => panic!(),
        }
    }

    #[test]
    fn critically_fixed_rejects_z2_plus_1() {
        let fx = BinaryForm::monomial(s(1), 2, 0);
        let fy = BinaryForm::new(2, vec![s(1), s(0), s(1)]);
        let f = RationalSelfMap::new(fx, fy).unwrap();
        assert!(!f.is_critically_fixed());
        assert!(power_map(5).is_critically_fixed());
    }

    #[test]
    fn multiplier_polynomial_of_z5() {
        let f = power_map(5);
        let mp = f.multiplier_polynomial().unwrap();
        let expect = UniPoly::new(vec![s(0), s(1)])
            .pow(2)
            .mul(&UniPoly::new(vec![s(-5), s(1)]).pow(4));
        assert!(mp.eq_poly(&expect));
        let ip = f.index_polynomial().unwrap();
        let expect = UniPoly::new(vec![s(-1), s(1)])
            .pow(2)
            .mul(&UniPoly::new(vec![sq(1, 4), s(1)]).pow(4));
        assert!(ip.eq_poly(&expect));
    }

    #[test]
    fn index_sum_is_one() {
        // sum of the d+1 indices is 1: the monic index polynomial has
        // lambda^d coefficient equal to -1
        for f in [power_map(2), power_map(3), power_map(5)] {
            let ip = f.index_polynomial().unwrap();
            let d1 = ip.deg();
            let sum = ip.coeff(d1 - 1).neg();
            assert!(sum.is_one(), "sum of indices must be 1");
        }
    }

    #[test]
    fn conjugation_by_inversion_fixes_z5() {
        let f = power_map(5);
        let m = LinearMap2::new(s(0), s(1), s(1), s(0)).unwrap();
        let g = f.mobius_conjugate(&m).unwrap();
        assert!(g.eq_projective(&f));
    }

    #[test]
    fn multiplier_polynomial_invariant_under_conjugation() {
        let f = power_map(5);
        let m = LinearMap2::new(s(2), s(1), s(-1), s(3)).unwrap();
        let g = f.mobius_conjugate(&m).unwrap();
        let mp_f = f.multiplier_polynomial().unwrap();
        let mp_g = g.multiplier_polynomial().unwrap();
        assert!(mp_f.eq_poly(&mp_g));
    }

    #[test]
    fn conjugacy_of_z5_with_itself_and_with_translate() {
        let f = power_map(5);
        let w = are_mobius_conjugate(&f, &f).unwrap();
        assert!(w.is_some());
        let m = LinearMap2::new(s(1), s(2), s(0), s(1)).unwrap();
        let g = f.mobius_conjugate(&m).unwrap();
        let w = are_mobius_conjugate(&f, &g).unwrap().expect("conjugate by construction");
        let check = f.mobius_conjugate(&w).unwrap();
        assert!(check.eq_projective(&g));
    }

    #[test]
    fn roots_exact_splits_over_extension() {
        let p = UniPoly::new(vec![s(-5), s(0), s(1)]);
        let roots = roots_exact(&p).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].add(&roots[1]).is_zero());
        assert!(roots[0].mul(&roots[1]).eq_scalar(&s(-5)));
        let f5 = NumberField::new("s5", QPoly::from_ints(&[-5, 0, 1]), QRect::real(q(2, 1), q(5, 2)))
            .unwrap();
        let s5 = Scalar::generator(&f5);
        let p2 = UniPoly::new(vec![s5.neg(), Scalar::zero(), Scalar::one()]);
        let roots = roots_exact(&p2).unwrap();
        assert_eq!(roots.len(), 2);
        let prod = roots[0].mul(&roots[1]);
        assert!(prod.mul(&prod).eq_scalar(&s(5)));
    }

    #[test]
    fn normalizing_map_sends_triple_to_standard() {
        let p1 = ProjPoint::finite(s(2));
        let p2 = ProjPoint::finite(s(-1));
        let p3 = ProjPoint::infinity();
        let m = normalizing_map(&p1, &p2, &p3).unwrap();
        let q1 = apply_map(&m, &p1);
        let q2 = apply_map(&m, &p2);
        let q3 = apply_map(&m, &p3);
        assert!(q1.eq_point(&ProjPoint::infinity()));
        assert!(q2.eq_point(&ProjPoint::finite(s(0))));
        assert!(q3.eq_point(&ProjPoint::finite(s(1))));
    }

    fn apply_map(m: &LinearMap2, p: &ProjPoint) -> ProjPoint {
        let (x, y) = m.apply(&p.x, &p.y);
        ProjPoint::new(x, y)
    }
}
