//! Certified factorization over Q for the small polynomials that appear in
//! residual conditions and displayed index polynomials.
//!
//! Strategy: isolate the complex roots, enumerate conjugation-closed
//! subsets as candidate factors, recognize their elementary symmetric
//! functions as rationals with denominator dividing the leading coefficient
//! (refining enclosures until a Landau–Mignotte-style bound pins the only
//! candidate), and verify every candidate by exact division. Sound because
//! verification is exact; complete because true factors have such rational
//! coefficient vectors.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::ball::CInterval;
use crate::poly::isolate::{self, RootCluster};
use crate::poly::{QPoly, UniPoly};
use crate::scalar::Scalar;

/// Monic-normalized factorization over Q: `p = unit * prod f_i^{e_i}` with
/// the `f_i` irreducible, primitive-ordered deterministically (degree, then
/// coefficient string).
pub fn factor_over_q(p: &QPoly) -> (BigRational, Vec<(QPoly, usize)>) {
    assert!(!p.is_zero(), "factor of zero polynomial");
    let (unit, parts) = p.squarefree_decomposition();
    let mut out: Vec<(QPoly, usize)> = vec![];
    for (part, exp) in parts {
        for f in factor_squarefree(&part) {
            out.push((f, exp));
        }
    }
    out.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| poly_sort_key(&a.0).cmp(&poly_sort_key(&b.0)))
    });
    (unit, out)
}

fn poly_sort_key(p: &QPoly) -> String {
    p.coeffs.iter().map(crate::poly::q_string).collect::<Vec<_>>().join(",")
}

/// Factor a monic squarefree rational polynomial into irreducible monic
/// factors.
fn factor_squarefree(p: &QPoly) -> Vec<QPoly> {
    let n = p.deg();
    if n <= 1 {
        return vec![p.clone()];
    }
    // clear denominators: work with the primitive integer polynomial
    let den_lcm = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| num::integer::lcm(acc, c.denom().clone()));
    let int_poly: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| c.numer() * &den_lcm / c.denom())
        .collect();
    let lead = int_poly.last().unwrap().clone();

    let lifted = UniPoly::new(p.coeffs.iter().map(|c| Scalar::from_q(c.clone())).collect());
    let iso = isolate::isolate_roots(&lifted).expect("isolating squarefree polynomial");
    let clusters = iso.clusters;

    // conjugate pairing: for real-coefficient p, clusters are closed under
    // conjugation; find the pairing by reflecting rectangles
    let n_roots = clusters.len();
    let mut conj_of = vec![usize::MAX; n_roots];
    for (i, c) in clusters.iter().enumerate() {
        if c.real {
            conj_of[i] = i;
            continue;
        }
        for (j, d) in clusters.iter().enumerate() {
            if reflect_overlaps(&c.rect, &d.rect) {
                conj_of[i] = j;
            }
        }
    }
    // fall back to brute pairing with refinement if ambiguous
    assert!(
        conj_of.iter().all(|&j| j != usize::MAX),
        "conjugation pairing failed; refine isolation"
    );

    let mut remaining: Vec<usize> = (0..n_roots).collect();
    let mut current = p.clone();
    let mut factors: Vec<QPoly> = vec![];
    // candidate subsets in order of size; a minimal conjugation-closed
    // subset that yields a rational factor is irreducible
    'outer: while !remaining.is_empty() {
        let max_size = remaining.len();
        for size in 1..=max_size {
            for subset in subsets_of(&remaining, size) {
                // must be conjugation-closed
                if !subset.iter().all(|&i| subset.contains(&conj_of[i])) {
                    continue;
                }
                if let Some(f) = recognize_factor(&clusters, &subset, &lead, &lifted) {
                    if f.divides(&current) {
                        current = current.exact_div_poly(&f);
                        factors.push(f);
                        remaining.retain(|i| !subset.contains(i));
                        continue 'outer;
                    }
                }
            }
        }
        // no subset yields a factor: what remains is irreducible
        factors.push(current.monic());
        break;
    }
    if factors.is_empty() {
        factors.push(p.clone());
    }
    factors
}

fn reflect_overlaps(a: &CInterval, b: &CInterval) -> bool {
    // does conj(a) overlap b?
    let re_ok = a.re.intersect(&b.re).is_some();
    let conj_im = crate::ball::RInterval::new(a.im.hi.neg(), a.im.lo.neg());
    re_ok && conj_im.intersect(&b.im).is_some()
}

fn subsets_of(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let n = items.len();
    if size > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // next combination
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - size {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Try to recognize the monic polynomial with the given root subset as
/// having rational coefficients with denominator dividing `lead`.
fn recognize_factor(
    clusters: &[RootCluster],
    subset: &[usize],
    lead: &BigInt,
    lifted: &UniPoly<Scalar>,
) -> Option<QPoly> {
    let mut rects: Vec<CInterval> = subset.iter().map(|&i| clusters[i].rect.clone()).collect();
    let mut prec = 128u64;
    for _ in 0..6 {
        // product of (z - root_i) with interval arithmetic
        let mut coeffs: Vec<CInterval> = vec![point_one()];
        for r in &rects {
            let mut next: Vec<CInterval> = vec![CInterval::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                // multiply by (z - r): c z^{i+1} - r c z^i
                next[i + 1] = next[i + 1].add(c);
                next[i] = next[i].sub(&c.mul(r));
            }
            coeffs = next;
        }
        // recognize each coefficient as k/lead
        let mut rationals = vec![];
        let mut ok = true;
        for c in &coeffs[..coeffs.len() - 1] {
            if !c.im.contains_zero() {
                return None; // genuinely complex coefficient
            }
            match unique_rational_with_denominator(&c.re, lead) {
                Some(v) => rationals.push(v),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            rationals.push(BigRational::one());
            return Some(QPoly::new(rationals));
        }
        // refine the enclosures and retry
        prec *= 2;
        for (pos, r) in rects.iter_mut().enumerate() {
            let part = &clusters[subset[pos]];
            let _ = part;
            if let Ok(refined) = isolate::refine_enclosure(lifted, r.clone(), prec) {
                *r = refined;
            }
        }
    }
    None
}

fn point_one() -> CInterval {
    CInterval::new(
        crate::ball::RInterval::point(crate::ball::Dyadic::one()),
        crate::ball::RInterval::point(crate::ball::Dyadic::zero()),
    )
}

/// The unique rational `k / den` inside the interval, if the interval is
/// narrow enough to pin one.
fn unique_rational_with_denominator(
    iv: &crate::ball::RInterval,
    den: &BigInt,
) -> Option<BigRational> {
    let lo = iv.lo.to_rational() * BigRational::from_integer(den.abs());
    let hi = iv.hi.to_rational() * BigRational::from_integer(den.abs());
    let k_lo = lo.ceil().to_integer();
    let k_hi = hi.floor().to_integer();
    if k_lo == k_hi {
        Some(BigRational::new(k_lo, den.abs()))
    } else {
        None
    }
}

/// Rational roots of a rational polynomial (exactly, by recognizing the
/// linear factors from the full factorization).
pub fn rational_roots(p: &QPoly) -> Vec<BigRational> {
    let (_, factors) = factor_over_q(p);
    let mut out = vec![];
    for (f, _) in factors {
        if f.deg() == 1 {
            // monic z + c -> root -c
            out.push(-f.coeff(0));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qi};

    #[test]
    fn factors_linear_times_quadratic() {
        // (a+1)(3a^2-5a+3), the residual of the 2R1+1R2+1R4 branch
        let p = QPoly::new(vec![qi(3), qi(-2), qi(-2), qi(3)]);
        let (unit, factors) = factor_over_q(&p);
        assert!(unit.eq(&qi(3)));
        assert_eq!(factors.len(), 2);
        assert!(factors[0].0.eq_poly(&QPoly::new(vec![qi(1), qi(1)])));
        assert!(factors[1].0.eq_poly(&QPoly::new(vec![qi(1), q(-5, 3), qi(1)])));
    }

    #[test]
    fn factors_three_quadratics() {
        // (a^2-2a+2)(2a^2-2a+1)(a^2+1): the 4R1+1R4 residual
        let f1 = QPoly::new(vec![qi(2), qi(-2), qi(1)]);
        let f2 = QPoly::new(vec![qi(1), qi(-2), qi(2)]);
        let f3 = QPoly::new(vec![qi(1), qi(0), qi(1)]);
        let p = f1.mul(&f2).mul(&f3);
        let (unit, factors) = factor_over_q(&p);
        assert!(unit.eq(&qi(2)));
        assert_eq!(factors.len(), 3);
        let monics: Vec<QPoly> = factors.iter().map(|(f, _)| f.clone()).collect();
        assert!(monics.iter().any(|f| f.eq_poly(&f1)));
        assert!(monics.iter().any(|f| f.eq_poly(&f2.monic())));
        assert!(monics.iter().any(|f| f.eq_poly(&f3)));
    }

    #[test]
    fn sextic_residual_is_irreducible() {
        // 3z^6 - 39z^5 + 194z^4 - 203z^3 + 194z^2 - 39z + 3
        let p = QPoly::new(vec![qi(3), qi(-39), qi(194), qi(-203), qi(194), qi(-39), qi(3)]);
        let (unit, factors) = factor_over_q(&p);
        assert!(unit.eq(&qi(3)));
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0.deg(), 6);
    }

    #[test]
    fn multiplicities_preserved() {
        // (z-1)^2 (z^2+1)
        let p = QPoly::new(vec![qi(-1), qi(1)]).pow(2).mul(&QPoly::new(vec![qi(1), qi(0), qi(1)]));
        let (_, factors) = factor_over_q(&p);
        assert_eq!(factors.len(), 2);
        let lin = factors.iter().find(|(f, _)| f.deg() == 1).unwrap();
        assert_eq!(lin.1, 2);
        let quad = factors.iter().find(|(f, _)| f.deg() == 2).unwrap();
        assert_eq!(quad.1, 1);
    }

    #[test]
    fn rational_roots_found() {
        // (z - 1/2)(z + 3) = z^2 + 5/2 z - 3/2
        let p = QPoly::new(vec![q(-3, 2), q(5, 2), qi(1)]);
        let roots = rational_roots(&p);
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&q(1, 2)));
        assert!(roots.contains(&qi(-3)));
    }
}
