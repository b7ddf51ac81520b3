//! Stratification data for the families where it is effective: presentations
//! without tails (quantum affine spaces and tori) and the rank-two family
//! `x·y = q·y·x + f(q)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::normalform::{nf_mul, NfElement};
use crate::params::{Laurent, ParamRing};
use crate::presentation::{builtin_presentation, Family, Presentation};
use crate::torus::{center_lattice, LatticeSubgroup, TorusPresentation};

/// All `(i_1..i_{k+1})` with `k + Σ i_j = n`, grouped by `k`, each group in
/// lexicographic order. There are `2^n` of them.
pub fn admissible_compositions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..=n {
        let mut cur = Vec::with_capacity(k + 1);
        compositions_into(n - k, k + 1, &mut cur, &mut out);
    }
    out
}

/// Weak compositions of `total` into `parts` parts, lexicographically.
fn compositions_into(total: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        cur.push(total);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for first in 0..=total {
        cur.push(first);
        compositions_into(total - first, parts - 1, cur, out);
        cur.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumDescriptor {
    pub composition: Vec<usize>,
    /// Polynomial generators in the standard ideal.
    pub vanishing: Vec<usize>,
    /// Polynomial generators made invertible.
    pub inverted: Vec<usize>,
    /// Commutation data of the inverted generators and all invertible ones.
    pub localized_torus: TorusPresentation,
    /// Torus generators of the Laurent model, as presentation indices.
    pub torus_generators: Vec<usize>,
    pub center: LatticeSubgroup,
}

impl StratumDescriptor {
    pub fn label(&self, p: &Presentation<ParamRing>) -> String {
        let names = |v: &[usize]| v.iter().map(|&g| p.gen_name(g).to_string()).collect::<Vec<_>>().join(",");
        format!("vanish {{{}}} invert {{{}}}", names(&self.vanishing), names(&self.inverted))
    }
}

/// Scans `x_n` down to `x_1`: `i_1` generators vanish, one is inverted,
/// `i_2` vanish, and so on.
fn split(p: &Presentation<ParamRing>, comp: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut order = (0..p.npoly()).rev();
    let mut vanish = Vec::new();
    let mut invert = Vec::new();
    for (k, &i) in comp.iter().enumerate() {
        vanish.extend(order.by_ref().take(i));
        if k + 1 < comp.len() {
            invert.extend(order.next());
        }
    }
    vanish.sort_unstable();
    invert.sort_unstable();
    (vanish, invert)
}

/// Inverse of [`split`]: run lengths of vanishing generators from the top.
fn composition_of(p: &Presentation<ParamRing>, vanishing: &[usize]) -> Vec<usize> {
    let mut comp = vec![0];
    for g in (0..p.npoly()).rev() {
        if vanishing.contains(&g) {
            *comp.last_mut().unwrap() += 1;
        } else {
            comp.push(0);
        }
    }
    comp
}

fn descriptor(p: &Presentation<ParamRing>, comp: Vec<usize>) -> Result<StratumDescriptor> {
    let (vanishing, inverted) = split(p, &comp);
    let mut torus_generators = inverted.clone();
    torus_generators.extend(p.npoly()..p.ngens());
    let pmat = torus_generators
        .iter()
        .map(|&a| torus_generators.iter().map(|&b| p.commutation(a, b).clone()).collect())
        .collect();
    let localized_torus = TorusPresentation::new(p.ring().clone(), pmat)?;
    let center = center_lattice(&localized_torus)?;
    Ok(StratumDescriptor { composition: comp, vanishing, inverted, localized_torus, torus_generators, center })
}

fn require_no_tails(p: &Presentation<ParamRing>) -> Result<()> {
    if p.has_tails() {
        Err(Error::Unsupported(format!(
            "`{}` has nonzero tails; monomial stratification needs pure q-commutation",
            p.name()
        )))
    } else {
        Ok(())
    }
}

/// One stratum per admissible composition, `2^n` in all.
pub fn stratify_affine(p: &Presentation<ParamRing>) -> Result<Vec<StratumDescriptor>> {
    require_no_tails(p)?;
    admissible_compositions(p.npoly())
        .into_par_iter()
        .map(|c| descriptor(p, c))
        .collect()
}

/// The stratum whose standard ideal is generated by `vanishing`.
pub fn classify_affine_prime(p: &Presentation<ParamRing>, vanishing: &[usize]) -> Result<StratumDescriptor> {
    require_no_tails(p)?;
    if let Some(&g) = vanishing.iter().find(|&&g| g >= p.npoly()) {
        return Err(Error::Unsupported(format!("`{}` is not a polynomial generator", p.gen_name(g))));
    }
    descriptor(p, composition_of(p, vanishing))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank2Stratum {
    pub label: &'static str,
    pub condition: &'static str,
}

#[derive(Clone, Debug)]
pub struct Rank2Strata {
    pub presentation: Presentation<ParamRing>,
    pub f: Laurent,
    /// `u = x·y − y·x` in normal form.
    pub u: NfElement<ParamRing>,
    pub strata: [Rank2Stratum; 2],
    /// `{1} ∪` rational roots of `f`, ascending.
    pub exceptional: Vec<BigRational>,
    /// `f` divided by its rational linear factors, up to a unit; kept symbolic.
    pub residual: Laurent,
    /// `f = 0`: the algebra is a quantum plane.
    pub degenerate: bool,
    /// `f(1) ≠ 0`: the fiber at `q = 1` is a Weyl algebra.
    pub weyl_fiber_at_one: bool,
}

/// Dense integer polynomial (lowest degree first) proportional to `f`,
/// after removing the unit factor `q^k`.
fn integer_poly(f: &Laurent) -> Vec<BigInt> {
    let lo = f.terms().keys().map(|e| e[0]).min().unwrap_or(0);
    let hi = f.terms().keys().map(|e| e[0]).max().unwrap_or(0);
    let denom = f.terms().values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut out = vec![BigInt::zero(); (hi - lo + 1) as usize];
    for (e, c) in f.terms() {
        out[(e[0] - lo) as usize] = (c * BigRational::from_integer(denom.clone())).to_integer();
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

fn eval_int_poly(p: &[BigInt], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
}

/// Rational roots (with multiplicity removed) and the remaining cofactor.
pub fn rational_roots(f: &Laurent) -> (Vec<BigRational>, Vec<BigRational>) {
    if f.is_zero() {
        return (Vec::new(), Vec::new());
    }
    let ip = integer_poly(f);
    let mut poly: Vec<BigRational> = ip.iter().cloned().map(BigRational::from_integer).collect();
    let mut roots = Vec::new();
    if poly.len() > 1 {
        let c0 = ip[0].clone();
        let cn = ip[ip.len() - 1].clone();
        let mut cands = Vec::new();
        for a in divisors(&c0) {
            for b in divisors(&cn) {
                let r = BigRational::new(a.clone(), b.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for r in cands {
            let mut found = false;
            loop {
                if poly.len() <= 1 {
                    break;
                }
                let v = poly.iter().rev().fold(BigRational::zero(), |acc, c| acc * &r + c);
                if !v.is_zero() {
                    break;
                }
                found = true;
                // synthetic division by (t - r)
                let n = poly.len() - 1;
                let mut q = vec![BigRational::zero(); n];
                let mut carry = poly[n].clone();
                for k in (0..n).rev() {
                    q[k] = carry.clone();
                    carry = &poly[k] + &carry * &r;
                }
                poly = q;
            }
            if found {
                roots.push(r);
            }
        }
    }
    debug_assert!(roots.iter().all(|r| eval_int_poly(&ip, r).is_zero()));
    (roots, poly)
}

pub fn stratify_rank2(f: &Laurent) -> Result<Rank2Strata> {
    let p = builtin_presentation(&Family::Rank2(f.clone()))?;
    let ring = p.ring().clone();
    let q = ring.var("q", 1);
    let (x, y) = (p.gen_elem(0), p.gen_elem(1));
    let u = nf_mul(&p, &x, &y)?.sub(&p, &nf_mul(&p, &y, &x)?)?;
    let uy = nf_mul(&p, &u, &y)?;
    let yu = nf_mul(&p, &y, &u)?.scale(&p, &q);
    let xu = nf_mul(&p, &x, &u)?;
    let ux = nf_mul(&p, &u, &x)?.scale(&p, &q);
    if uy != yu || xu != ux {
        return Err(Error::Internal("u fails the normality relations".into()));
    }
    let (roots, cofactor) = rational_roots(f);
    let mut exceptional = roots;
    let one = BigRational::one();
    if !exceptional.contains(&one) {
        exceptional.push(one.clone());
    }
    exceptional.sort();
    let residual = Laurent::from_terms(
        1,
        cofactor.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (vec![k as i64], c.clone())),
    );
    let f1 = f.eval_rational(&[one]).unwrap_or_else(BigRational::zero);
    Ok(Rank2Strata {
        presentation: p,
        f: f.clone(),
        u,
        strata: [
            Rank2Stratum { label: "M1", condition: "u not in I" },
            Rank2Stratum { label: "M2", condition: "u in I" },
        ],
        exceptional,
        residual,
        degenerate: f.is_zero(),
        weyl_fiber_at_one: !f1.is_zero(),
    })
}

/// `NfElement` helper used by callers that want `u` from scratch.
pub fn rank2_u(p: &Presentation<ParamRing>) -> Result<NfElement<ParamRing>> {
    let (x, y) = (p.gen_elem(0), p.gen_elem(1));
    nf_mul(p, &x, &y)?.sub(p, &nf_mul(p, &y, &x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::CoeffRing;
    use crate::text::parse_scalar;

    #[test]
    fn small_compositions() {
        assert_eq!(admissible_compositions(0), vec![vec![0]]);
        assert_eq!(admissible_compositions(1), vec![vec![1], vec![0, 0]]);
        assert_eq!(
            admissible_compositions(2),
            vec![vec![2], vec![0, 1], vec![1, 0], vec![0, 0, 0]]
        );
    }

    #[test]
    fn plane_strata() {
        let p = builtin_presentation(&Family::QuantumPlane).unwrap();
        let s = stratify_affine(&p).unwrap();
        let labels: Vec<(Vec<usize>, Vec<usize>)> = s.iter().map(|d| (d.vanishing.clone(), d.inverted.clone())).collect();
        assert_eq!(labels, vec![(vec![0, 1], vec![]), (vec![0], vec![1]), (vec![1], vec![0]), (vec![], vec![0, 1])]);
        for d in &s {
            assert_eq!(classify_affine_prime(&p, &d.vanishing).unwrap(), *d);
        }
        assert!(s[3].center.is_trivial());
    }

    #[test]
    fn tails_rejected() {
        let p = builtin_presentation(&Family::QuantumWeyl(1)).unwrap();
        assert!(matches!(stratify_affine(&p), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rank2_example() {
        let ring = ParamRing::new(["q"]);
        let f = parse_scalar(&ring, "q^2 - 5*q + 6").unwrap();
        let s = stratify_rank2(&f).unwrap();
        let ex: Vec<String> = s.exceptional.iter().map(|r| r.to_string()).collect();
        assert_eq!(ex, vec!["1", "2", "3"]);
        assert!(s.residual.as_constant().is_some());
        assert!(s.weyl_fiber_at_one);
        let p = &s.presentation;
        let expect = NfElement::monomial(p, vec![1, 1], ring.one().sub(&ring.var("q", -1)))
            .add(p, &NfElement::scalar(p, ring.var("q", -1).mul(&f)))
            .unwrap();
        assert_eq!(s.u, expect);
    }

    #[test]
    fn rank2_irreducible_part_kept() {
        let ring = ParamRing::new(["q"]);
        let f = parse_scalar(&ring, "(q - 1/2)*(q^2 + 1)").unwrap();
        let s = stratify_rank2(&f).unwrap();
        let ex: Vec<String> = s.exceptional.iter().map(|r| r.to_string()).collect();
        assert_eq!(ex, vec!["1/2", "1"]);
        assert_eq!(s.residual.terms().len(), 2);
    }

    #[test]
    fn rank2_degenerate_and_constant() {
        let ring = ParamRing::new(["q"]);
        let s = stratify_rank2(&Laurent::zero(1)).unwrap();
        assert!(s.degenerate);
        let s = stratify_rank2(&ring.from_int(4)).unwrap();
        assert_eq!(s.exceptional, vec![BigRational::one()]);
        assert!(s.weyl_fiber_at_one);
    }
}
