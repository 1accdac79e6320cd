//! Certified complex root isolation by rectangle subdivision.
//!
//! The input is squarefree-decomposed exactly first; each squarefree part is
//! isolated by subdivision with two certified predicates: interval exclusion
//! (the polynomial's range on the rectangle omits zero) and a Krawczyk
//! inclusion test on a slightly inflated rectangle (existence and uniqueness
//! of a root). Inflation lets roots sitting exactly on subdivision grid
//! lines be certified; duplicates from adjacent rectangles are merged by a
//! joint uniqueness test. Multiplicities come from the squarefree exponents,
//! never from numerics.

use std::cmp::Ordering;

use num::{BigRational, Zero};
use thiserror::Error;

use crate::ball::{CInterval, Dyadic, RInterval};
use crate::poly::{QPoly, UniPoly};
use crate::scalar::{QRect, Scalar, ScalarError, MAX_PREC};

#[derive(Debug, Error)]
pub enum IsolateError {
    #[error("zero polynomial has no root structure")]
    ZeroPolynomial,
    #[error("precision cap exhausted during isolation")]
    PrecisionExhausted,
    #[error("rectangle contains {count} roots, expected exactly one")]
    WrongRootCount { count: usize },
    #[error("in/out classification undecidable (root on rectangle boundary?)")]
    Undecidable,
    #[error(transparent)]
    Scalar(ScalarError),
}

impl From<ScalarError> for IsolateError {
    fn from(e: ScalarError) -> Self {
        IsolateError::Scalar(e)
    }
}

/// One distinct root: a certified isolating rectangle plus the exponent of
/// the squarefree part it belongs to.
#[derive(Clone, Debug)]
pub struct RootCluster {
    pub rect: CInterval,
    pub multiplicity: usize,
    pub part_index: usize,
    /// Certified to lie on the real axis.
    pub real: bool,
    /// Filled in by callers that adjoin the root to a field.
    pub exact_tag: Option<Scalar>,
}

/// Result of a full isolation: the squarefree parts and one cluster per
/// distinct root.
pub struct Isolation {
    pub parts: Vec<(UniPoly<Scalar>, usize)>,
    pub clusters: Vec<RootCluster>,
}

struct CoeffRects {
    rects: Vec<CInterval>,
    prec: u64,
}

fn coeff_rects(p: &UniPoly<Scalar>, prec: u64) -> Result<CoeffRects, IsolateError> {
    let rects = p
        .coeffs
        .iter()
        .map(|c| c.enclosure(prec))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CoeffRects { rects, prec })
}

fn eval_rects(c: &CoeffRects, x: &CInterval) -> CInterval {
    let mut acc = CInterval::zero();
    for r in c.rects.iter().rev() {
        acc = acc.mul(x).add(r).trim(c.prec);
    }
    acc
}

fn point_rect(re: &Dyadic, im: &Dyadic) -> CInterval {
    CInterval::new(RInterval::point(re.clone()), RInterval::point(im.clone()))
}

/// Krawczyk inclusion test: on success, returns a refined enclosure that is
/// certified to contain exactly one (simple) root of `q` inside `x`.
fn krawczyk(
    q: &CoeffRects,
    dq: &CoeffRects,
    x: &CInterval,
    prec: u64,
) -> Option<CInterval> {
    let (mre, mim) = x.mid();
    let m = point_rect(&mre, &mim);
    let qm = eval_rects(q, &m);
    let qd = eval_rects(dq, x);
    // center of q'(X)
    let (cre, cim) = qd.mid();
    if cre.is_zero() && cim.is_zero() {
        return None;
    }
    // Y = 1/c as a tight rectangle, via exact rational arithmetic
    let cre_q = cre.to_rational();
    let cim_q = cim.to_rational();
    let n2 = &cre_q * &cre_q + &cim_q * &cim_q;
    if n2.is_zero() {
        return None;
    }
    let yre = &cre_q / &n2;
    let yim = -&cim_q / &n2;
    let y = CInterval::new(
        RInterval::from_rationals(&yre, &yre, prec),
        RInterval::from_rationals(&yim, &yim, prec),
    );
    let one = point_rect(&Dyadic::one(), &Dyadic::zero());
    let xm = x.sub(&m);
    let k = m
        .sub(&y.mul(&qm))
        .add(&one.sub(&y.mul(&qd)).mul(&xm))
        .trim(prec);
    if k.subset_of_interior(x) {
        Some(k)
    } else {
        if std::env::var("CF_KRAWCZYK_DEBUG").is_ok() {
            eprintln!(
                "K fail: X re[{:.6e},{:.6e}] im[{:.6e},{:.6e}] K re[{:.6e},{:.6e}] im[{:.6e},{:.6e}] qm re[{:.6e},{:.6e}] qd re[{:.6e},{:.6e}]",
                x.re.lo.to_f64(), x.re.hi.to_f64(), x.im.lo.to_f64(), x.im.hi.to_f64(),
                k.re.lo.to_f64(), k.re.hi.to_f64(), k.im.lo.to_f64(), k.im.hi.to_f64(),
                qm.re.lo.to_f64(), qm.re.hi.to_f64(), qd.re.lo.to_f64(), qd.re.hi.to_f64()
            );
        }
        None
    }
}

/// Contract a certified enclosure by iterating the Krawczyk step.
fn polish(
    q: &CoeffRects,
    dq: &CoeffRects,
    enc: &CInterval,
    prec: u64,
    steps: usize,
) -> CInterval {
    let mut cur = enc.clone();
    for _ in 0..steps {
        // inflate a touch so the strict-interior test can succeed again
        let pad = cur.width().shl(-4).add(&Dyadic { man: num::BigInt::from(1), exp: -(prec as i64) });
        let inflated = inflate(&cur, &pad);
        if let Some(k) = krawczyk(q, dq, &inflated, prec) {
            if let Some(meet) = k.intersect(&cur) {
                if meet.width().cmp_d(&cur.width()) == Ordering::Less {
                    cur = meet;
                    continue;
                }
            }
        }
        break;
    }
    cur
}

fn inflate(x: &CInterval, pad: &Dyadic) -> CInterval {
    CInterval::new(
        RInterval::new(x.re.lo.sub(pad), x.re.hi.add(pad)),
        RInterval::new(x.im.lo.sub(pad), x.im.hi.add(pad)),
    )
}

/// Isolate all roots of a squarefree polynomial; returns exactly `deg q`
/// pairwise disjoint certified rectangles.
fn isolate_squarefree(q: &UniPoly<Scalar>, start_prec: u64) -> Result<Vec<CInterval>, IsolateError> {
    let n = q.degree().ok_or(IsolateError::ZeroPolynomial)?;
    if n == 0 {
        return Ok(vec![]);
    }
    let dq_poly = q.derivative();
    let mut prec = start_prec;
    'restart: loop {
        if prec > MAX_PREC {
            return Err(IsolateError::PrecisionExhausted);
        }
        let qc = coeff_rects(q, prec)?;
        let dqc = coeff_rects(&dq_poly, prec)?;

        // Cauchy bound 1 + max|a_i| / |a_n|
        let lc = qc.rects.last().unwrap();
        let lc_low = {
            let a = lc.abs2();
            a.lo.clone()
        };
        if lc_low.is_zero() || lc_low.is_negative() {
            prec *= 2;
            continue 'restart;
        }
        let mut max_mag2 = Dyadic::zero();
        for r in &qc.rects[..n] {
            let m = r.abs2().hi;
            max_mag2 = Dyadic::max_d(&max_mag2, &m);
        }
        // R^2 bound: (1 + max|a|/|lc|)^2 <= 4 + 4*max|a|^2/|lc|^2; take a
        // crude but safe dyadic radius
        let ratio2 = max_mag2.to_rational() / lc_low.to_rational();
        let bound_q = BigRational::from_integer(4.into()) + ratio2 * BigRational::from_integer(4.into());
        // radius = ceil(sqrt(bound)): use bit length
        let bits = bound_q.ceil().to_integer().bits();
        let radius = Dyadic { man: num::BigInt::from(1), exp: (bits / 2 + 1) as i64 };

        let init = CInterval::new(
            RInterval::new(radius.neg(), radius.clone()),
            RInterval::new(radius.neg(), radius.clone()),
        );
        let mut queue = vec![init];
        let mut certified: Vec<CInterval> = vec![];
        let mut work_budget: u64 = 4_000u64.saturating_mul((n as u64 + 1) * (n as u64 + 1));

        while let Some(b) = queue.pop() {
            if work_budget == 0 {
                if std::env::var("CF_ISOLATE_DEBUG").is_ok() {
                    eprintln!("budget exhausted at prec {prec}");
                }
                prec *= 2;
                continue 'restart;
            }
            work_budget -= 1;
            let val = eval_rects(&qc, &b);
            if !val.contains_zero() {
                continue;
            }
            // inclusion on the inflated box
            let pad = b.width().shl(-2);
            let infl = inflate(&b, &pad);
            if let Some(k) = krawczyk(&qc, &dqc, &infl, prec) {
                let refined = polish(&qc, &dqc, &k, prec, 24);
                certified.push(refined);
                continue;
            }
            // subdivide: split the longer side; ties split the real axis
            let wre = b.re.width();
            let wim = b.im.width();
            let min_width = Dyadic { man: num::BigInt::from(1), exp: -(prec as i64 / 2) };
            if Dyadic::max_d(&wre, &wim).cmp_d(&min_width) == Ordering::Less {
                // too small to decide at this precision
                if std::env::var("CF_ISOLATE_DEBUG").is_ok() {
                    eprintln!(
                        "undecided box re[{},{}] im[{},{}] at prec {}",
                        b.re.lo.to_f64(), b.re.hi.to_f64(), b.im.lo.to_f64(), b.im.hi.to_f64(), prec
                    );
                }
                prec *= 2;
                continue 'restart;
            }
            if wre.cmp_d(&wim) != Ordering::Less {
                let mid = b.re.mid();
                queue.push(CInterval::new(RInterval::new(b.re.lo.clone(), mid.clone()), b.im.clone()));
                queue.push(CInterval::new(RInterval::new(mid, b.re.hi.clone()), b.im.clone()));
            } else {
                let mid = b.im.mid();
                queue.push(CInterval::new(b.re.clone(), RInterval::new(b.im.lo.clone(), mid.clone())));
                queue.push(CInterval::new(b.re.clone(), RInterval::new(mid, b.im.hi.clone())));
            }
        }

        // merge duplicate certifications of the same root
        let mut merged: Vec<CInterval> = vec![];
        'outer: for c in certified {
            for m in merged.iter_mut() {
                if c.overlaps(m) {
                    // joint test: both claim a unique root; certify the union
                    let hull = CInterval::new(
                        RInterval::new(Dyadic::min_d(&c.re.lo, &m.re.lo), Dyadic::max_d(&c.re.hi, &m.re.hi)),
                        RInterval::new(Dyadic::min_d(&c.im.lo, &m.im.lo), Dyadic::max_d(&c.im.hi, &m.im.hi)),
                    );
                    // the hull may be degenerate (regions contracted to
                    // points); always pad by an absolute ulp
                    let pad = hull
                        .width()
                        .shl(-2)
                        .add(&Dyadic { man: num::BigInt::from(1), exp: -(prec as i64) });
                    let infl = inflate(&hull, &pad);
                    if let Some(k) = krawczyk(&qc, &dqc, &infl, prec) {
                        *m = polish(&qc, &dqc, &k, prec, 24);
                        continue 'outer;
                    }
                    // overlapping but not jointly certifiable: need more
                    // precision
                    if std::env::var("CF_ISOLATE_DEBUG").is_ok() {
                        eprintln!(
                            "merge failed at prec {prec}: c=re[{:.6e},{:.6e}]im[{:.6e},{:.6e}] m=re[{:.6e},{:.6e}]im[{:.6e},{:.6e}]",
                            c.re.lo.to_f64(), c.re.hi.to_f64(), c.im.lo.to_f64(), c.im.hi.to_f64(),
                            m.re.lo.to_f64(), m.re.hi.to_f64(), m.im.lo.to_f64(), m.im.hi.to_f64()
                        );
                    }
                    prec *= 2;
                    continue 'restart;
                }
            }
            merged.push(c);
        }

        if merged.len() != n {
            if std::env::var("CF_ISOLATE_DEBUG").is_ok() {
                eprintln!("count mismatch: {} vs {} at prec {prec}", merged.len(), n);
            }
            prec *= 2;
            continue 'restart;
        }
        // deterministic output order
        merged.sort_by(|a, b| match a.re.lo.cmp_d(&b.re.lo) {
            Ordering::Equal => a.im.lo.cmp_d(&b.im.lo),
            o => o,
        });
        return Ok(merged);
    }
}

/// Full isolation: exact squarefree decomposition, then one rectangle per
/// distinct root, multiplicity read off the exponent.
pub fn isolate_roots(p: &UniPoly<Scalar>) -> Result<Isolation, IsolateError> {
    if p.is_zero() {
        return Err(IsolateError::ZeroPolynomial);
    }
    let (_unit, parts) = p.squarefree_decomposition();
    let mut clusters = vec![];
    for (idx, (part, exp)) in parts.iter().enumerate() {
        let rects = isolate_squarefree(part, 64)?;
        for rect in rects {
            let real = rect_certifies_real(part, &rect);
            clusters.push(RootCluster {
                rect,
                multiplicity: *exp,
                part_index: idx,
                real,
                exact_tag: None,
            });
        }
    }
    clusters.sort_by(|a, b| match a.rect.re.lo.cmp_d(&b.rect.re.lo) {
        Ordering::Equal => a.rect.im.lo.cmp_d(&b.rect.im.lo),
        o => o,
    });
    Ok(Isolation { parts, clusters })
}

pub fn isolate_roots_q(p: &QPoly) -> Result<Isolation, IsolateError> {
    let lifted = UniPoly::new(p.coeffs.iter().map(|c| Scalar::from_q(c.clone())).collect());
    isolate_roots(&lifted)
}

/// Working precision adequate for boxes of the given width: rounding noise
/// must sit far below the box scale.
fn prec_for_width(w: &Dyadic) -> u64 {
    if w.is_zero() {
        return 256;
    }
    let log2 = w.exp + w.man.bits() as i64;
    let need = if log2 >= 0 { 128 } else { (-log2) as u64 + 128 };
    need.min(MAX_PREC)
}

fn poly_is_real(p: &UniPoly<Scalar>) -> bool {
    p.coeffs
        .iter()
        .all(|c| c.is_rational() || c.field().map(|f| f.real_embedded).unwrap_or(false))
}

/// For a real-coefficient squarefree part: certify that the unique root in
/// `rect` is real by re-testing uniqueness on a conjugation-symmetric
/// rectangle.
fn rect_certifies_real(part: &UniPoly<Scalar>, rect: &CInterval) -> bool {
    if !poly_is_real(part) {
        return false;
    }
    if !rect.im.contains_zero() {
        return false;
    }
    let prec = prec_for_width(&rect.width());
    let Ok(qc) = coeff_rects(part, prec) else { return false };
    let dq = part.derivative();
    let Ok(dqc) = coeff_rects(&dq, prec) else { return false };
    let w = Dyadic::max_d(&rect.im.lo.abs(), &rect.im.hi.abs());
    let sym = CInterval::new(rect.re.clone(), RInterval::new(w.neg(), w.clone()));
    let pad = sym
        .width()
        .shl(-3)
        .add(&Dyadic { man: num::BigInt::from(1), exp: -(prec as i64) + 8 });
    // keep the inflation conjugation-symmetric in the imaginary direction
    let wi = w.add(&pad);
    let infl_sym = CInterval::new(
        RInterval::new(sym.re.lo.sub(&pad), sym.re.hi.add(&pad)),
        RInterval::new(wi.neg(), wi),
    );
    krawczyk(&qc, &dqc, &infl_sym, prec).is_some()
}

/// Classification of one cluster against a rational rectangle.
enum Placement {
    Inside,
    Outside,
}

fn classify_cluster(
    part: &UniPoly<Scalar>,
    rect: &mut CInterval,
    target: &QRect,
    prec_start: u64,
) -> Result<Placement, IsolateError> {
    let mut prec = prec_start;
    if target.is_degenerate_real() {
        // degenerate (real segment) target: decide realness first
        if !poly_is_real(part) {
            return Err(IsolateError::Undecidable);
        }
        loop {
            if !rect.im.contains_zero() {
                return Ok(Placement::Outside);
            }
            if rect_certifies_real(part, rect) {
                // real root: compare against the segment with exact endpoint
                // tests
                return classify_real_position(part, rect, target, prec);
            }
            prec *= 2;
            if prec > MAX_PREC {
                return Err(IsolateError::PrecisionExhausted);
            }
            *rect = refine_enclosure(part, rect.clone(), prec)?;
        }
    }
    loop {
        let (rlo, rhi) = (rect.re.lo.to_rational(), rect.re.hi.to_rational());
        let (ilo, ihi) = (rect.im.lo.to_rational(), rect.im.hi.to_rational());
        let strictly_inside =
            target.re.0 < rlo && rhi < target.re.1 && target.im.0 < ilo && ihi < target.im.1;
        if strictly_inside {
            return Ok(Placement::Inside);
        }
        let outside =
            rhi < target.re.0 || target.re.1 < rlo || ihi < target.im.0 || target.im.1 < ilo;
        if outside {
            return Ok(Placement::Outside);
        }
        prec *= 2;
        if prec > MAX_PREC {
            return Err(IsolateError::Undecidable);
        }
        *rect = refine_enclosure(part, rect.clone(), prec)?;
    }
}

fn classify_real_position(
    part: &UniPoly<Scalar>,
    rect: &mut CInterval,
    target: &QRect,
    prec_start: u64,
) -> Result<Placement, IsolateError> {
    let (lo, hi) = (&target.re.0, &target.re.1);
    // exact endpoint hits: if an endpoint is a root and lies in this
    // cluster's rectangle, the unique root here *is* the endpoint
    for endpoint in [lo, hi] {
        let val = part.eval(&Scalar::from_q(endpoint.clone()));
        if val.is_zero() {
            let inside_re = rect.re.lo.to_rational() <= *endpoint && *endpoint <= rect.re.hi.to_rational();
            if inside_re {
                return Ok(Placement::Inside);
            }
        }
    }
    let mut prec = prec_start;
    loop {
        if &rect.re.lo.to_rational() > lo && &rect.re.hi.to_rational() < hi {
            return Ok(Placement::Inside);
        }
        if &rect.re.hi.to_rational() < lo || &rect.re.lo.to_rational() > hi {
            return Ok(Placement::Outside);
        }
        prec *= 2;
        if prec > MAX_PREC {
            return Err(IsolateError::Undecidable);
        }
        *rect = refine_enclosure(part, rect.clone(), prec)?;
    }
}

pub struct Located {
    pub enclosure: CInterval,
    pub certified_real: bool,
    pub multiplicity: usize,
}

/// Verify the rational rectangle isolates exactly one distinct root and
/// return its certified enclosure.
pub fn locate_unique_root_in_rect(
    p: &UniPoly<Scalar>,
    rect: &QRect,
) -> Result<Located, IsolateError> {
    let iso = isolate_roots(p)?;
    let mut found: Option<Located> = None;
    let mut count = 0usize;
    for c in iso.clusters {
        let part = &iso.parts[c.part_index].0;
        let mut r = c.rect.clone();
        match classify_cluster(part, &mut r, rect, 128)? {
            Placement::Inside => {
                count += 1;
                found = Some(Located {
                    enclosure: r,
                    certified_real: c.real || rect_certifies_real(part, &c.rect),
                    multiplicity: c.multiplicity,
                });
            }
            Placement::Outside => {}
        }
    }
    if count != 1 {
        return Err(IsolateError::WrongRootCount { count });
    }
    Ok(found.unwrap())
}

/// Count distinct roots inside a rational rectangle.
pub fn count_roots_in_rect(p: &UniPoly<Scalar>, rect: &QRect) -> Result<usize, IsolateError> {
    let iso = isolate_roots(p)?;
    let mut count = 0usize;
    for c in iso.clusters {
        let part = &iso.parts[c.part_index].0;
        let mut r = c.rect.clone();
        if matches!(classify_cluster(part, &mut r, rect, 128)?, Placement::Inside) {
            count += 1;
        }
    }
    Ok(count)
}

pub fn count_roots_in_rect_q(p: &QPoly, rect: &QRect) -> Result<usize, IsolateError> {
    let lifted = UniPoly::new(p.coeffs.iter().map(|c| Scalar::from_q(c.clone())).collect());
    count_roots_in_rect(&lifted, rect)
}

/// Shrink a certified enclosure of a simple root until its width is below
/// `2^-prec`. Falls back to re-isolation when the Newton step stalls.
pub fn refine_enclosure(
    p: &UniPoly<Scalar>,
    enc: CInterval,
    prec: u64,
) -> Result<CInterval, IsolateError> {
    let sf = squarefree_of(p);
    let target = Dyadic { man: num::BigInt::from(1), exp: -(prec as i64) };
    let mut cur = enc.clone();
    let mut work = prec.max(64);
    loop {
        let qc = coeff_rects(&sf, work)?;
        let dqc = coeff_rects(&sf.derivative(), work)?;
        let before = cur.width();
        cur = polish(&qc, &dqc, &cur, work, 48);
        if cur.width().cmp_d(&target) != Ordering::Greater {
            return Ok(cur);
        }
        if cur.width().cmp_d(&before) != Ordering::Less {
            // no progress: raise working precision
            work *= 2;
            if work > MAX_PREC {
                return Err(IsolateError::PrecisionExhausted);
            }
        }
    }
}

fn squarefree_of(p: &UniPoly<Scalar>) -> UniPoly<Scalar> {
    let g = p.gcd(&p.derivative());
    if g.degree().unwrap_or(0) == 0 {
        p.clone()
    } else {
        p.exact_div_poly(&g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn qp(v: &[i64]) -> UniPoly<Scalar> {
        UniPoly::new(v.iter().map(|&n| Scalar::from_int(n)).collect())
    }

    #[test]
    fn isolates_z5_minus_z() {
        // roots 0, ±1, ±i, all exactly on dyadic grid lines
        let p = qp(&[0, -1, 0, 0, 0, 1]);
        let iso = isolate_roots(&p).unwrap();
        assert_eq!(iso.clusters.len(), 5);
        assert!(iso.clusters.iter().all(|c| c.multiplicity == 1));
        // each expected root is contained in exactly one cluster
        let expected: Vec<(BigRational, BigRational)> = vec![
            (q(0, 1), q(0, 1)),
            (q(1, 1), q(0, 1)),
            (q(-1, 1), q(0, 1)),
            (q(0, 1), q(1, 1)),
            (q(0, 1), q(-1, 1)),
        ];
        for (re, im) in expected {
            let hits = iso
                .clusters
                .iter()
                .filter(|c| {
                    c.rect.re.lo.to_rational() <= re
                        && re <= c.rect.re.hi.to_rational()
                        && c.rect.im.lo.to_rational() <= im
                        && im <= c.rect.im.hi.to_rational()
                })
                .count();
            assert_eq!(hits, 1, "root ({re},{im}) must be in exactly one cluster");
        }
    }

    #[test]
    fn double_root_multiplicity_from_squarefree_part() {
        // (z-1)^2
        let p = qp(&[1, -2, 1]);
        let iso = isolate_roots(&p).unwrap();
        assert_eq!(iso.clusters.len(), 1);
        assert_eq!(iso.clusters[0].multiplicity, 2);
        assert!(iso.clusters[0].real);
    }

    #[test]
    fn table_row_two_cubic_root_structure() {
        // 491 l^3 + 982 l^2 + 463 l + 64: discriminant is negative, so one
        // real root and a conjugate pair. Oracle: the discriminant formula.
        let (a, b, c, d) = (491i64, 982, 463, 64);
        let disc: i128 = 18 * (a as i128) * (b as i128) * (c as i128) * (d as i128)
            - 4 * (b as i128).pow(3) * (d as i128)
            + (b as i128).pow(2) * (c as i128).pow(2)
            - 4 * (a as i128) * (c as i128).pow(3)
            - 27 * (a as i128).pow(2) * (d as i128).pow(2);
        assert!(disc < 0, "discriminant oracle: one real root");
        let p = qp(&[64, 463, 982, 491]);
        let iso = isolate_roots(&p).unwrap();
        assert_eq!(iso.clusters.len(), 3);
        assert!(iso.clusters.iter().all(|c| c.multiplicity == 1));
        let reals = iso.clusters.iter().filter(|c| c.real).count();
        assert_eq!(reals, 1);
        // sign-change oracle for the real root: p(-1.4) < 0 < p(-1.3)
        let at = |x: BigRational| {
            let v = QPoly::new(vec![q(64, 1), q(463, 1), q(982, 1), q(491, 1)]).eval(&x);
            v
        };
        assert!(at(q(-14, 10)) < BigRational::zero());
        assert!(at(q(-13, 10)) > BigRational::zero());
        let real = iso.clusters.iter().find(|c| c.real).unwrap();
        assert!(real.rect.re.lo.to_rational() >= q(-14, 10));
        assert!(real.rect.re.hi.to_rational() <= q(-13, 10));
    }

    #[test]
    fn count_in_rect_degenerate_real_segment() {
        // z^2 - 5 on the real segment [2.2, 2.3]
        let p = qp(&[-5, 0, 1]);
        let rect = QRect::real(q(11, 5), q(23, 10));
        assert_eq!(count_roots_in_rect(&p, &rect).unwrap(), 1);
        let rect2 = QRect::real(q(-3, 1), q(3, 1));
        assert_eq!(count_roots_in_rect(&p, &rect2).unwrap(), 2);
    }

    #[test]
    fn endpoint_root_counts_as_inside() {
        // root exactly at a rational endpoint of the segment
        let p = qp(&[-1, 1]); // z - 1
        let rect = QRect::real(q(1, 1), q(2, 1));
        assert_eq!(count_roots_in_rect(&p, &rect).unwrap(), 1);
    }

    #[test]
    fn isolation_over_extension_field() {
        use crate::scalar::{NumberField, Scalar};
        let f = NumberField::new("s5", QPoly::from_ints(&[-5, 0, 1]), QRect::real(q(2, 1), q(5, 2)))
            .unwrap();
        let s = Scalar::generator(&f);
        // (z - sqrt5)(z + sqrt5) z = z^3 - 5 z over Q(sqrt5): roots 0, ±sqrt5
        let p = UniPoly::new(vec![Scalar::zero(), Scalar::from_int(-5), Scalar::zero(), Scalar::one()]);
        let iso = isolate_roots(&p).unwrap();
        assert_eq!(iso.clusters.len(), 3);
        // and the factored form (z - sqrt5) alone
        let lin = UniPoly::new(vec![s.neg(), Scalar::one()]);
        let iso2 = isolate_roots(&lin).unwrap();
        assert_eq!(iso2.clusters.len(), 1);
        assert!(iso2.clusters[0].real);
    }

    #[test]
    fn refine_shrinks_and_stays_inside() {
        let p = qp(&[-2, 0, 1]); // z^2 - 2
        let iso = isolate_roots(&p).unwrap();
        let c = iso.clusters.iter().find(|c| c.rect.re.lo.is_positive()).unwrap();
        let refined = refine_enclosure(&p, c.rect.clone(), 200).unwrap();
        assert!(refined.subset_of(&c.rect));
        let w = refined.width();
        let target = Dyadic { man: num::BigInt::from(1), exp: -200 };
        assert!(w.cmp_d(&target) != Ordering::Greater);
    }
}
