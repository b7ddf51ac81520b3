//! The adjoint action `Ad_x(a) = x·a·x^{-1}` in the localization at one
//! polynomial generator, its minimal polynomial on an element, and the
//! splitting of the element into Ad_x-eigencomponents.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::normalform::{nf_mul, NfElement};
use crate::params::{FracElem, Laurent, ParamRing};
use crate::presentation::Presentation;
use crate::ring::CoeffRing;

pub const DEFAULT_DEGREE_CAP: usize = 16;

const DIVISION_STEPS: usize = 100_000;

/// `numer · x^{-k}` for the localized generator `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocElement {
    pub numer: NfElement<ParamRing>,
    pub k: u32,
}

impl LocElement {
    pub fn from_element(a: NfElement<ParamRing>) -> Self {
        LocElement { numer: a, k: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    /// Multiplying on the right by `x^k` lands back in the algebra.
    pub fn clear_denominator(&self) -> &NfElement<ParamRing> {
        &self.numer
    }

    pub fn format(&self, p: &Presentation<ParamRing>, x: usize) -> String {
        let n = p.format_elem(&self.numer);
        let n = if self.numer.len() > 1 { format!("({n})") } else { n };
        match self.k {
            0 => n,
            1 => format!("{}*{}^-1", n, p.gen_name(x)),
            k => format!("{}*{}^-{}", n, p.gen_name(x), k),
        }
    }
}

fn check_admissible(p: &Presentation<ParamRing>, x: usize) -> Result<()> {
    if x >= p.ngens() {
        return Err(Error::UnknownGenerator(format!("#{}", x + 1)));
    }
    if !p.is_poly(x) {
        return Err(Error::NotAdmissible(
            p.gen_name(x).to_string(),
            "already invertible; localize at a polynomial generator".into(),
        ));
    }
    Ok(())
}

/// `a = q·x` in the algebra, if such `q` exists.
pub fn right_divide(
    p: &Presentation<ParamRing>,
    x: usize,
    a: &NfElement<ParamRing>,
) -> Result<Option<NfElement<ParamRing>>> {
    let ring = p.ring();
    let xe = p.gen_elem(x);
    let mut rem = a.clone();
    let mut quot = NfElement::zero(p);
    for _ in 0..DIVISION_STEPS {
        let Some((m, c)) = rem.leading() else {
            return Ok(Some(quot));
        };
        if m[x] <= 0 {
            return Ok(None);
        }
        let mut m1 = m.clone();
        m1[x] -= 1;
        let prod = nf_mul(p, &NfElement::monomial(p, m1.clone(), ring.one()), &xe)?;
        let (lm, lc) = prod.leading().expect("product of nonzero monomials");
        if lm != m {
            return Err(Error::Internal("leading term of m·x is not the shifted monomial".into()));
        }
        let Some(coef) = lc.unit_inverse().map(|u| u.mul(c)) else {
            return Ok(None);
        };
        quot = quot.add(p, &NfElement::monomial(p, m1, coef.clone()))?;
        rem = rem.sub(p, &prod.scale(p, &coef))?;
    }
    Err(Error::RewriteBudget(DIVISION_STEPS))
}

/// Cancels right factors of `x` while the denominator power is positive.
pub fn normalize(p: &Presentation<ParamRing>, x: usize, mut a: LocElement) -> Result<LocElement> {
    if a.numer.is_zero() {
        a.k = 0;
        return Ok(a);
    }
    while a.k > 0 {
        match right_divide(p, x, &a.numer)? {
            Some(q) => {
                a.numer = q;
                a.k -= 1;
            }
            None => break,
        }
    }
    Ok(a)
}

/// `numer · x^{k_target - k}` so that `a = result · x^{-k_target}`.
fn lift_to(p: &Presentation<ParamRing>, x: usize, a: &LocElement, k: u32) -> Result<NfElement<ParamRing>> {
    debug_assert!(k >= a.k);
    if k == a.k {
        return Ok(a.numer.clone());
    }
    nf_mul(p, &a.numer, &p.gen_power(x, i64::from(k - a.k))?)
}

pub fn loc_add(p: &Presentation<ParamRing>, x: usize, a: &LocElement, b: &LocElement) -> Result<LocElement> {
    let k = a.k.max(b.k);
    let numer = lift_to(p, x, a, k)?.add(p, &lift_to(p, x, b, k)?)?;
    normalize(p, x, LocElement { numer, k })
}

pub fn loc_scale(p: &Presentation<ParamRing>, a: &LocElement, c: &Laurent) -> LocElement {
    let numer = a.numer.scale(p, c);
    let k = if numer.is_zero() { 0 } else { a.k };
    LocElement { numer, k }
}

/// `x·a·x^{-1}`.
pub fn ad_apply(p: &Presentation<ParamRing>, x: usize, a: &LocElement) -> Result<LocElement> {
    check_admissible(p, x)?;
    let numer = nf_mul(p, &p.gen_elem(x), &a.numer)?;
    normalize(p, x, LocElement { numer, k: a.k + 1 })
}

/// One Ad_x-eigencomponent: `numer / denom` with eigenvalue `gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub gamma: Laurent,
    pub numer: LocElement,
    /// `∏_{j≠m}(γ_m − γ_j)`.
    pub denom: Laurent,
    /// The individual differences `γ_m − γ_j` making up `denom`.
    pub denom_factors: Vec<Laurent>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdSpectrum {
    /// Monic, ascending coefficients.
    pub minpoly: Vec<FracElem>,
    /// Distinct roots in the order found.
    pub roots: Vec<Laurent>,
    pub multiplicities: Vec<usize>,
    pub components: Vec<Component>,
}

impl AdSpectrum {
    pub fn is_diagonalizable(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }

    pub fn format_minpoly(&self, ring: &ParamRing) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.minpoly.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.display_with(ring.names());
            let t = match k {
                0 => format!("({cs})"),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if k == 0 || c == &FracElem::one(ring.nvars()) {
                parts.push(t);
            } else {
                parts.push(format!("({cs})*{t}"));
            }
        }
        parts.join(" + ")
    }
}

struct Row {
    pivot: Vec<i64>,
    coords: BTreeMap<Vec<i64>, FracElem>,
    comb: Vec<FracElem>,
}

/// Coordinates of `v_0..v_t` over a common denominator `x^{-K}`, then the
/// first linear relation, if any, expressing `v_t` through earlier ones.
fn dependence(
    p: &Presentation<ParamRing>,
    x: usize,
    krylov: &[LocElement],
) -> Result<Option<Vec<FracElem>>> {
    let nv = p.ring().nvars();
    let kmax = krylov.iter().map(|v| v.k).max().unwrap_or(0);
    let mut rows: Vec<Row> = Vec::new();
    let t = krylov.len();
    for (i, v) in krylov.iter().enumerate() {
        let num = lift_to(p, x, v, kmax)?;
        let mut coords: BTreeMap<Vec<i64>, FracElem> =
            num.terms().iter().map(|(m, c)| (m.clone(), FracElem::from_laurent(c.clone()))).collect();
        let mut comb = vec![FracElem::zero(nv); t];
        comb[i] = FracElem::one(nv);
        for r in &rows {
            let Some(f) = coords.get(&r.pivot).cloned() else { continue };
            for (m, c) in &r.coords {
                let nvv = coords.get(m).cloned().unwrap_or_else(|| FracElem::zero(nv)).sub(&f.mul(c));
                if nvv.is_zero() {
                    coords.remove(m);
                } else {
                    coords.insert(m.clone(), nvv);
                }
            }
            for (j, c) in r.comb.iter().enumerate() {
                comb[j] = comb[j].sub(&f.mul(c));
            }
        }
        if coords.is_empty() {
            if i + 1 != t {
                return Err(Error::Internal("Krylov vectors became dependent early".into()));
            }
            return Ok(Some(comb));
        }
        let (pivot, pc) = coords.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let inv = pc.inv().expect("nonzero pivot");
        for c in coords.values_mut() {
            *c = c.mul(&inv);
        }
        for c in comb.iter_mut() {
            *c = c.mul(&inv);
        }
        rows.push(Row { pivot, coords, comb });
    }
    Ok(None)
}

/// Leading Ad_x scalars of the monomials in `v` at a common denominator.
fn leading_scalars(p: &Presentation<ParamRing>, x: usize, v: &LocElement, out: &mut BTreeSet<Laurent>) {
    let ring = p.ring();
    for m in v.numer.terms().keys() {
        let mut s = ring.one();
        for (g, &e) in m.iter().enumerate() {
            if e != 0 && g != x {
                s = s.mul(&ring.pow(p.commutation(x, g), e).expect("unit"));
            }
        }
        out.insert(s);
    }
}

fn eval(poly: &[FracElem], t: &FracElem) -> FracElem {
    let nv = t.num().nvars();
    poly.iter().rev().fold(FracElem::zero(nv), |acc, c| acc.mul(t).add(c))
}

/// Divides by `t − γ`, assuming `γ` is a root.
fn deflate(poly: &[FracElem], g: &FracElem) -> Vec<FracElem> {
    let n = poly.len() - 1;
    let mut out = vec![FracElem::zero(g.num().nvars()); n];
    let mut carry = poly[n].clone();
    for k in (0..n).rev() {
        out[k] = carry.clone();
        carry = poly[k].add(&carry.mul(g));
    }
    out
}

/// Minimal polynomial of Ad_x on `a` and its roots.
pub fn ad_minimal_polynomial(
    p: &Presentation<ParamRing>,
    x: usize,
    a: &LocElement,
    degree_cap: usize,
) -> Result<AdSpectrum> {
    check_admissible(p, x)?;
    let ring = p.ring();
    let nv = ring.nvars();
    if a.is_zero() {
        return Ok(AdSpectrum {
            minpoly: vec![FracElem::one(nv)],
            roots: Vec::new(),
            multiplicities: Vec::new(),
            components: Vec::new(),
        });
    }
    let a = normalize(p, x, a.clone())?;
    let mut krylov = vec![a];
    let mut cands = BTreeSet::new();
    let minpoly = loop {
        leading_scalars(p, x, krylov.last().unwrap(), &mut cands);
        if let Some(rel) = dependence(p, x, &krylov)? {
            break rel;
        }
        if krylov.len() > degree_cap {
            return Err(Error::DegreeCap(degree_cap));
        }
        let next = ad_apply(p, x, krylov.last().unwrap())?;
        krylov.push(next);
    };
    // the candidate set: observed scalars, commutation data, q_i, 1
    cands.insert(ring.one());
    for g in 0..p.ngens() {
        for h in 0..p.ngens() {
            cands.insert(p.commutation(g, h).clone());
        }
    }
    for i in 0..p.npoly() {
        cands.insert(p.qskew(i).clone());
        cands.insert(ring.unit_inverse(p.qskew(i)).unwrap());
    }
    let mut rest = minpoly.clone();
    let mut roots = Vec::new();
    let mut mult = Vec::new();
    for g in &cands {
        let gf = FracElem::from_laurent(g.clone());
        let mut k = 0;
        while rest.len() > 1 && eval(&rest, &gf).is_zero() {
            rest = deflate(&rest, &gf);
            k += 1;
        }
        if k > 0 {
            roots.push(g.clone());
            mult.push(k);
        }
        if rest.len() == 1 {
            break;
        }
    }
    if rest.len() > 1 {
        let r = AdSpectrum { minpoly: rest, roots: vec![], multiplicities: vec![], components: vec![] };
        return Err(Error::RootNotFound(r.format_minpoly(ring)));
    }
    Ok(AdSpectrum { minpoly, roots, multiplicities: mult, components: Vec::new() })
}

/// `μ_m(Ad_x)(a) / ∏_{j≠m}(γ_m − γ_j)` for every root `γ_m`.
pub fn ad_eigencomponents(
    p: &Presentation<ParamRing>,
    x: usize,
    a: &LocElement,
    degree_cap: usize,
) -> Result<AdSpectrum> {
    let mut spec = ad_minimal_polynomial(p, x, a, degree_cap)?;
    if let Some(i) = spec.multiplicities.iter().position(|&m| m > 1) {
        return Err(Error::RepeatedRoot(spec.roots[i].display_with(p.ring().names())));
    }
    let a = normalize(p, x, a.clone())?;
    let ring = p.ring();
    let mut comps = Vec::new();
    for (m, gm) in spec.roots.iter().enumerate() {
        let mut w = a.clone();
        let mut factors = Vec::new();
        for (j, gj) in spec.roots.iter().enumerate() {
            if j == m {
                continue;
            }
            let adw = ad_apply(p, x, &w)?;
            w = loc_add(p, x, &adw, &loc_scale(p, &w, &gj.neg()))?;
            factors.push(gm.sub(gj));
        }
        let denom = factors.iter().fold(ring.one(), |acc, f| acc.mul(f));
        comps.push(Component { gamma: gm.clone(), numer: w, denom, denom_factors: factors });
    }
    spec.components = comps;
    Ok(spec)
}

/// `Σ numer_m / denom_m` compared with `a`: checks `Σ numer_m·L/denom_m = L·a`
/// with `L = ∏ denom_m`.
pub fn components_sum_to(p: &Presentation<ParamRing>, x: usize, spec: &AdSpectrum, a: &LocElement) -> Result<bool> {
    let ring = p.ring();
    let l = spec.components.iter().fold(ring.one(), |acc, c| acc.mul(&c.denom));
    let mut total = LocElement::from_element(NfElement::zero(p));
    for c in &spec.components {
        let cof = l
            .exact_div(&c.denom)
            .ok_or_else(|| Error::Internal("denominator does not divide the product".into()))?;
        total = loc_add(p, x, &total, &loc_scale(p, &c.numer, &cof))?;
    }
    let target = normalize(p, x, loc_scale(p, a, &l))?;
    Ok(total == target)
}

/// `Ad_x(numer) = γ·numer` for a component.
pub fn satisfies_eigen_equation(p: &Presentation<ParamRing>, x: usize, c: &Component) -> Result<bool> {
    let lhs = ad_apply(p, x, &c.numer)?;
    Ok(lhs == normalize(p, x, loc_scale(p, &c.numer, &c.gamma))?)
}

/// Eigencomponents of every other generator under Ad_x: the data for
/// replacing generators by Ad_x-eigenvectors.
pub fn replacement_generators(
    p: &Presentation<ParamRing>,
    x: usize,
    degree_cap: usize,
) -> Result<Vec<(usize, AdSpectrum)>> {
    (0..p.ngens())
        .filter(|&g| g != x)
        .map(|g| {
            let a = LocElement::from_element(p.gen_elem(g));
            Ok((g, ad_eigencomponents(p, x, &a, degree_cap)?))
        })
        .collect()
}
