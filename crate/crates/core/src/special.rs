//! Specialization of parameters: to rational values, to powers of a
//! primitive root of unity, or kept symbolic (transcendental mode).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::normalform::{nf_mul, NfElement};
use crate::params::{Laurent, ParamRing};
use crate::presentation::{validate_presentation, Presentation, ValidationReport};
use crate::ring::{CoeffRing, Rationals};
use crate::strat::rational_roots;
use crate::torus::{root_of_unity_structure, LatticeSubgroup, TorusPresentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecTarget {
    /// One value per parameter, in declaration order.
    Rational(Vec<BigRational>),
    /// Parameter `k` goes to `ζ_N^{exponents[k]}`.
    Cyclotomic { order: u32, exponents: Vec<i64> },
    Transcendental,
}

impl SpecTarget {
    pub fn cyclotomic(order: u32, exponents: Vec<i64>) -> Result<Self> {
        if order < 1 {
            return Err(Error::Specialization("cyclotomic order must be at least 1".into()));
        }
        let n = i64::from(order);
        Ok(SpecTarget::Cyclotomic { order, exponents: exponents.into_iter().map(|e| e.rem_euclid(n)).collect() })
    }

    pub fn describe(&self, ring: &ParamRing) -> String {
        match self {
            SpecTarget::Rational(v) => ring
                .names()
                .iter()
                .zip(v)
                .map(|(n, x)| format!("{n}={x}"))
                .collect::<Vec<_>>()
                .join(", "),
            SpecTarget::Cyclotomic { order, exponents } => ring
                .names()
                .iter()
                .zip(exponents)
                .map(|(n, e)| format!("{n}=zeta_{order}^{e}"))
                .collect::<Vec<_>>()
                .join(", "),
            SpecTarget::Transcendental => "transcendental".into(),
        }
    }
}

/// A presentation after specialization, over whichever field the target
/// lands in.
#[derive(Clone, Debug)]
pub enum Specialized {
    Rational(Presentation<Rationals>),
    Cyclotomic(Presentation<Cyclotomic>),
    Symbolic(Presentation<ParamRing>),
}

impl Specialized {
    pub fn validate(&self) -> ValidationReport {
        match self {
            Specialized::Rational(p) => validate_presentation(p),
            Specialized::Cyclotomic(p) => validate_presentation(p),
            Specialized::Symbolic(p) => validate_presentation(p),
        }
    }

    /// Commutation scalars, qskew and tails, one per line.
    pub fn summary(&self) -> Vec<String> {
        match self {
            Specialized::Rational(p) => summarize(p),
            Specialized::Cyclotomic(p) => summarize(p),
            Specialized::Symbolic(p) => summarize(p),
        }
    }
}

fn summarize<R: CoeffRing>(p: &Presentation<R>) -> Vec<String> {
    let ring = p.ring();
    let mut out = Vec::new();
    for a in 0..p.ngens() {
        for b in a + 1..p.ngens() {
            out.push(format!("commute {} {} : {}", p.gen_name(a), p.gen_name(b), ring.format(p.commutation(a, b))));
        }
    }
    for i in 0..p.npoly() {
        if !ring.is_one(p.qskew(i)) {
            out.push(format!("qskew {} : {}", p.gen_name(i), ring.format(p.qskew(i))));
        }
    }
    for &(a, b) in p.tails().keys() {
        out.push(format!("tail {} {} : {}", p.gen_name(a), p.gen_name(b), p.format_elem(&p.tail_element(a, b))));
    }
    out
}

/// Evaluates `f` with parameter `k` sent to `values[k]`, which must be units.
fn eval_in<S: CoeffRing>(ring: &S, values: &[S::Elem], f: &Laurent) -> Result<S::Elem> {
    let mut acc = ring.zero();
    for (e, c) in f.terms() {
        let mut t = ring.from_rational(c);
        for (v, &k) in values.iter().zip(e) {
            let pw = ring
                .pow(v, k)
                .ok_or_else(|| Error::Specialization(format!("{} is not invertible", ring.format(v))))?;
            t = ring.mul(&t, &pw);
        }
        acc = ring.add(&acc, &t);
    }
    Ok(acc)
}

fn map_to<S: CoeffRing>(p: &Presentation<ParamRing>, ring: S, values: Vec<S::Elem>, tag: &str) -> Result<Presentation<S>> {
    let name = format!("{}[{}]", p.name(), tag);
    let out = p.map_scalars(ring.clone(), name, |f| eval_in(&ring, &values, f))?;
    for a in 0..out.ngens() {
        for b in a + 1..out.ngens() {
            if ring.is_zero(out.commutation(a, b)) {
                return Err(Error::Specialization(format!(
                    "commutation scalar of ({}, {}) specializes to zero",
                    p.gen_name(a),
                    p.gen_name(b)
                )));
            }
        }
    }
    for i in 0..out.npoly() {
        if ring.is_zero(out.qskew(i)) {
            return Err(Error::Specialization(format!("q_{} specializes to zero", p.gen_name(i))));
        }
    }
    Ok(out)
}

pub fn specialize_presentation(p: &Presentation<ParamRing>, t: &SpecTarget) -> Result<Specialized> {
    let nv = p.ring().nvars();
    let tag = t.describe(p.ring());
    match t {
        SpecTarget::Transcendental => Ok(Specialized::Symbolic(p.renamed(format!("{}[{}]", p.name(), tag)))),
        SpecTarget::Rational(values) => {
            if values.len() != nv {
                return Err(Error::Specialization(format!("expected {nv} parameter values, got {}", values.len())));
            }
            if let Some(k) = values.iter().position(Zero::is_zero) {
                return Err(Error::Specialization(format!("parameter {} specializes to zero", p.ring().names()[k])));
            }
            map_to(p, Rationals, values.clone(), &tag).map(Specialized::Rational)
        }
        SpecTarget::Cyclotomic { order, exponents } => {
            let ring = Cyclotomic::new(*order)
                .ok_or_else(|| Error::Specialization(format!("unsupported cyclotomic order {order}")))?;
            if exponents.len() != nv {
                return Err(Error::Specialization(format!("expected {nv} exponents, got {}", exponents.len())));
            }
            let values = exponents.iter().map(|&e| ring.zeta_pow(e)).collect();
            map_to(p, ring, values, &tag).map(Specialized::Cyclotomic)
        }
    }
}

/// Whether `λ` lies in the open set of good specializations for the rank-two
/// family with parameter `f`: outside `{1}` and the rational roots of `f`.
/// Nonlinear irreducible factors of `f` have no rational roots, so they never
/// exclude a rational `λ`.
pub fn classify_specialization(f: &Laurent, t: &SpecTarget) -> Result<bool> {
    match t {
        SpecTarget::Transcendental => Ok(true),
        SpecTarget::Rational(v) => {
            let lam = v
                .first()
                .ok_or_else(|| Error::Specialization("rank-two family needs a value for q".into()))?;
            if lam.is_zero() || *lam == BigRational::from_integer(1.into()) {
                return Ok(false);
            }
            let (roots, _) = rational_roots(f);
            Ok(!roots.contains(lam))
        }
        SpecTarget::Cyclotomic { .. } => Err(Error::Unsupported(
            "classification is defined for rational and transcendental targets".into(),
        )),
    }
}

/// Evidence that a quantum torus or affine space is finite over its center
/// at `q = ζ_N`.
#[derive(Clone, Debug)]
pub struct RootOfUnityWitness {
    pub order: u32,
    pub central_lattice: LatticeSubgroup,
    /// `[Z^n : K]`, the rank over the center.
    pub rank_over_center: BigInt,
    /// `x_i^N` for every generator, each checked central by normal forms.
    pub central_powers: Vec<NfElement<Cyclotomic>>,
}

/// Specializes the single parameter to `ζ_N`, checks `x_i^N` central by
/// exact multiplication and reads the rank off the central lattice.
pub fn root_of_unity_witness(p: &Presentation<ParamRing>, order: u32) -> Result<RootOfUnityWitness> {
    if p.has_tails() {
        return Err(Error::Unsupported("root-of-unity witness needs a presentation without tails".into()));
    }
    let t = TorusPresentation::from_presentation(p)?;
    let (central_lattice, rank_over_center) = root_of_unity_structure(&t, order)?;
    let exps = vec![1; p.ring().nvars()];
    let sp = match specialize_presentation(p, &SpecTarget::cyclotomic(order, exps)?)? {
        Specialized::Cyclotomic(sp) => sp,
        _ => unreachable!(),
    };
    let mut central_powers = Vec::new();
    for g in 0..sp.ngens() {
        let pw = sp.gen_power(g, i64::from(order))?;
        for h in 0..sp.ngens() {
            let other = sp.gen_elem(h);
            if nf_mul(&sp, &pw, &other)? != nf_mul(&sp, &other, &pw)? {
                return Err(Error::Internal(format!("{}^{order} is not central", sp.gen_name(g))));
            }
        }
        central_powers.push(pw);
    }
    // every x^N lies in the central lattice
    let n = i64::from(order);
    for g in 0..sp.ngens() {
        let mut m = vec![0; sp.ngens()];
        m[g] = n;
        if !central_lattice.contains(&m) {
            return Err(Error::Internal("x^N missing from the central lattice".into()));
        }
    }
    Ok(RootOfUnityWitness { order, central_lattice, rank_over_center, central_powers })
}
