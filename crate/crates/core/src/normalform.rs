//! PBW normal forms.
//!
//! An element is a finite sum of ordered monomials
//! `x_1^{t_1}⋯x_n^{t_n} k_1^{s_1}⋯k_m^{s_m}` keyed by exponent vector.
//! Products are brought back to normal form by the oriented relations
//!
//! ```text
//! x_j·x_i  →  q_ij^{-1}·x_i·x_j − q_ij^{-1}·r_ij      (i < j, polynomial)
//! b^t·a^s  →  u^{-ts}·a^s·b^t                          (a < b, no tail)
//! ```
//!
//! Each rewrite either removes an inversion or replaces it by a tail in
//! strictly later generators, so the process terminates on presentations of
//! solvable shape; a step budget guards against malformed input.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::params::{Laurent, ParamRing};
use crate::presentation::Presentation;
use crate::ring::CoeffRing;

/// Monomial exponent vector → coefficient, zero coefficients never stored.
pub type Terms<E> = BTreeMap<Vec<i64>, E>;

pub const DEFAULT_REWRITE_BUDGET: usize = 1_000_000;

/// Element of a presentation in PBW normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NfElement<R: CoeffRing> {
    pres: u64,
    terms: Terms<R::Elem>,
}

fn add_into<R: CoeffRing>(ring: &R, acc: &mut Terms<R::Elem>, m: Vec<i64>, c: R::Elem) {
    if ring.is_zero(&c) {
        return;
    }
    match acc.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = ring.add(o.get(), &c);
            if ring.is_zero(&s) {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

impl<R: CoeffRing> NfElement<R> {
    pub fn zero(p: &Presentation<R>) -> Self {
        NfElement { pres: p.id(), terms: Terms::new() }
    }

    pub fn one(p: &Presentation<R>) -> Self {
        Self::scalar(p, p.ring().one())
    }

    pub fn scalar(p: &Presentation<R>, c: R::Elem) -> Self {
        Self::monomial(p, vec![0; p.ngens()], c)
    }

    pub fn monomial(p: &Presentation<R>, exps: Vec<i64>, c: R::Elem) -> Self {
        assert_eq!(exps.len(), p.ngens(), "exponent vector length");
        let mut terms = Terms::new();
        add_into(p.ring(), &mut terms, exps, c);
        NfElement { pres: p.id(), terms }
    }

    pub fn generator(p: &Presentation<R>, g: usize) -> Self {
        let mut e = vec![0; p.ngens()];
        e[g] = 1;
        Self::monomial(p, e, p.ring().one())
    }

    pub fn from_terms(p: &Presentation<R>, terms: Terms<R::Elem>) -> Self {
        let mut out = Terms::new();
        for (m, c) in terms {
            add_into(p.ring(), &mut out, m, c);
        }
        NfElement { pres: p.id(), terms: out }
    }

    pub fn terms(&self) -> &Terms<R::Elem> {
        &self.terms
    }

    pub fn into_terms(self) -> Terms<R::Elem> {
        self.terms
    }

    pub fn presentation_id(&self) -> u64 {
        self.pres
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, p: &Presentation<R>) -> Result<()> {
        if self.pres == p.id() {
            Ok(())
        } else {
            Err(Error::MixedPresentations)
        }
    }

    pub fn add(&self, p: &Presentation<R>, o: &Self) -> Result<Self> {
        self.check(p)?;
        o.check(p)?;
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            add_into(p.ring(), &mut terms, m.clone(), c.clone());
        }
        Ok(NfElement { pres: self.pres, terms })
    }

    pub fn neg(&self, p: &Presentation<R>) -> Self {
        let ring = p.ring();
        NfElement {
            pres: self.pres,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), ring.neg(c))).collect(),
        }
    }

    pub fn sub(&self, p: &Presentation<R>, o: &Self) -> Result<Self> {
        self.add(p, &o.neg(p))
    }

    pub fn scale(&self, p: &Presentation<R>, c: &R::Elem) -> Self {
        let ring = p.ring();
        let mut terms = Terms::new();
        for (m, v) in &self.terms {
            add_into(ring, &mut terms, m.clone(), ring.mul(v, c));
        }
        NfElement { pres: self.pres, terms }
    }

    /// Whether every monomial avoids the generators before `i`, i.e. the
    /// element lies in `R_i` (0-based: generators `i..`).
    pub fn in_subalgebra(&self, i: usize) -> bool {
        self.terms.keys().all(|m| m[..i].iter().all(|&e| e == 0))
    }

    /// Lexicographically largest monomial.
    pub fn leading(&self) -> Option<(&Vec<i64>, &R::Elem)> {
        self.terms.iter().next_back()
    }
}

impl NfElement<ParamRing> {
    /// Coefficient of a monomial (zero when absent).
    pub fn coefficient(&self, nvars: usize, m: &[i64]) -> Laurent {
        self.terms.get(m).cloned().unwrap_or_else(|| Laurent::zero(nvars))
    }
}

struct MulCtx<'a, R: CoeffRing> {
    p: &'a Presentation<R>,
    steps: usize,
    budget: usize,
    cache: HashMap<(Vec<i64>, usize, i8), Terms<R::Elem>>,
}

impl<'a, R: CoeffRing> MulCtx<'a, R> {
    fn new(p: &'a Presentation<R>, budget: usize) -> Self {
        MulCtx { p, steps: 0, budget, cache: HashMap::new() }
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(Error::RewriteBudget(self.budget))
        } else {
            Ok(())
        }
    }

    /// `m · g^s` with `s = ±1` (`-1` only for invertible generators).
    fn mono_times_gen(&mut self, m: &[i64], g: usize, s: i8) -> Result<Terms<R::Elem>> {
        let ring = self.p.ring();
        let Some(j) = (g + 1..m.len()).rev().find(|&j| m[j] != 0) else {
            let mut e = m.to_vec();
            e[g] += i64::from(s);
            let mut t = Terms::new();
            add_into(ring, &mut t, e, ring.one());
            return Ok(t);
        };
        let key = (m.to_vec(), g, s);
        if let Some(t) = self.cache.get(&key) {
            return Ok(t.clone());
        }
        self.tick()?;
        // m = m'' · b^t with b = generator j the last one present
        let t: i8 = if m[j] > 0 { 1 } else { -1 };
        let mut rest = m.to_vec();
        rest[j] -= i64::from(t);
        let u = self.p.commutation(g, j);
        let uinv = ring.unit_inverse(u).expect("commutation scalars are units");
        let mut out = Terms::new();
        // b^t·g^s = u^{-ts}·g^s·b^t (+ tail for two polynomial generators)
        let lead = if t * s == 1 { uinv.clone() } else { u.clone() };
        let moved = self.mono_times_gen(&rest, g, s)?;
        for (m2, c2) in moved {
            let c = ring.mul(&c2, &lead);
            for (m3, c3) in self.mono_times_gen(&m2, j, t)? {
                add_into(ring, &mut out, m3, ring.mul(&c, &c3));
            }
        }
        if self.p.is_poly(j) && self.p.is_poly(g) {
            if let Some(tail) = self.p.tail(g, j) {
                let tail = tail.clone();
                let neg = ring.neg(&uinv);
                for (mr, cr) in &tail {
                    for (m3, c3) in self.mono_times_mono(&rest, mr)? {
                        add_into(ring, &mut out, m3, ring.mul(&ring.mul(&neg, cr), &c3));
                    }
                }
            }
        }
        self.cache.insert(key, out.clone());
        Ok(out)
    }

    fn terms_times_gen(&mut self, a: &Terms<R::Elem>, g: usize, s: i8) -> Result<Terms<R::Elem>> {
        let ring = self.p.ring();
        let mut out = Terms::new();
        for (m, c) in a {
            for (m2, c2) in self.mono_times_gen(m, g, s)? {
                add_into(ring, &mut out, m2, ring.mul(c, &c2));
            }
        }
        Ok(out)
    }

    fn mono_times_mono(&mut self, a: &[i64], b: &[i64]) -> Result<Terms<R::Elem>> {
        let ring = self.p.ring();
        let mut cur = Terms::new();
        add_into(ring, &mut cur, a.to_vec(), ring.one());
        for (g, &e) in b.iter().enumerate() {
            let s: i8 = if e > 0 { 1 } else { -1 };
            for _ in 0..e.unsigned_abs() {
                cur = self.terms_times_gen(&cur, g, s)?;
            }
        }
        Ok(cur)
    }

    fn mul(&mut self, a: &Terms<R::Elem>, b: &Terms<R::Elem>) -> Result<Terms<R::Elem>> {
        let ring = self.p.ring();
        let mut out = Terms::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let cab = ring.mul(ca, cb);
                for (m, c) in self.mono_times_mono(ma, mb)? {
                    add_into(ring, &mut out, m, ring.mul(&cab, &c));
                }
            }
        }
        Ok(out)
    }
}

/// Product in PBW normal form.
pub fn nf_mul<R: CoeffRing>(p: &Presentation<R>, a: &NfElement<R>, b: &NfElement<R>) -> Result<NfElement<R>> {
    nf_mul_with_budget(p, a, b, DEFAULT_REWRITE_BUDGET)
}

pub fn nf_mul_with_budget<R: CoeffRing>(
    p: &Presentation<R>,
    a: &NfElement<R>,
    b: &NfElement<R>,
    budget: usize,
) -> Result<NfElement<R>> {
    a.check(p)?;
    b.check(p)?;
    let mut ctx = MulCtx::new(p, budget);
    Ok(NfElement { pres: p.id(), terms: ctx.mul(&a.terms, &b.terms)? })
}

impl<R: CoeffRing> Presentation<R> {
    /// Normal form of a product of generator powers.
    pub fn word(&self, word: &[(usize, i64)]) -> Result<NfElement<R>> {
        let mut ctx = MulCtx::new(self, DEFAULT_REWRITE_BUDGET);
        let ring = self.ring();
        let mut cur = Terms::new();
        add_into(ring, &mut cur, vec![0; self.ngens()], ring.one());
        for &(g, e) in word {
            if g >= self.ngens() {
                return Err(Error::UnknownGenerator(format!("#{}", g + 1)));
            }
            if e < 0 && self.is_poly(g) {
                return Err(Error::NegativePower(self.gen_name(g).to_string()));
            }
            let s: i8 = if e > 0 { 1 } else { -1 };
            for _ in 0..e.unsigned_abs() {
                cur = ctx.terms_times_gen(&cur, g, s)?;
            }
        }
        Ok(NfElement { pres: self.id(), terms: cur })
    }

    pub fn gen_elem(&self, g: usize) -> NfElement<R> {
        NfElement::generator(self, g)
    }

    pub fn gen_power(&self, g: usize, e: i64) -> Result<NfElement<R>> {
        self.word(&[(g, e)])
    }

    pub fn mul(&self, a: &NfElement<R>, b: &NfElement<R>) -> Result<NfElement<R>> {
        nf_mul(self, a, b)
    }

    /// Renders an element with generator names, e.g. `q^-1*x1*x2 + 3`.
    pub fn format_elem(&self, a: &NfElement<R>) -> String {
        if a.terms.is_empty() {
            return "0".into();
        }
        let ring = self.ring();
        let mut parts = Vec::new();
        for (m, c) in a.terms.iter().rev() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(g, &e)| {
                    if e == 1 {
                        self.gen_name(g).to_string()
                    } else {
                        format!("{}^{}", self.gen_name(g), e)
                    }
                })
                .collect();
            let coef = ring.format(c);
            let s = if mono.is_empty() {
                coef
            } else if ring.is_one(c) {
                mono.join("*")
            } else if coef.contains(' ') {
                format!("({})*{}", coef, mono.join("*"))
            } else {
                format!("{}*{}", coef, mono.join("*"))
            };
            parts.push(s);
        }
        let mut out = parts[0].clone();
        for s in &parts[1..] {
            match s.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(s);
                }
            }
        }
        out
    }

    /// Commutator scalar of a monomial under `τ_h`: `∏_g λ_{h,g}^{e_g}`.
    pub(crate) fn monomial_weight_scalar(&self, h: usize, m: &[i64]) -> R::Elem {
        let ring = self.ring();
        let mut w = ring.one();
        for (g, &e) in m.iter().enumerate() {
            if e != 0 {
                w = ring.mul(&w, &ring.pow(self.weight(h, g), e).expect("weights are units"));
            }
        }
        w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkewKind {
    Tau,
    Delta,
}

/// `τ_i` scales each monomial by its weight; `δ_i(a) = x_i·a − τ_i(a)·x_i`
/// for `a ∈ R_{i+1}`.
pub fn skew_action<R: CoeffRing>(
    p: &Presentation<R>,
    i: usize,
    kind: SkewKind,
    a: &NfElement<R>,
) -> Result<NfElement<R>> {
    a.check(p)?;
    if i >= p.npoly() {
        return Err(Error::IllFormed(format!("skew action of non-polynomial generator #{}", i + 1)));
    }
    let tau = {
        let ring = p.ring();
        let mut terms = Terms::new();
        for (m, c) in &a.terms {
            add_into(ring, &mut terms, m.clone(), ring.mul(c, &p.monomial_weight_scalar(i, m)));
        }
        NfElement { pres: p.id(), terms }
    };
    match kind {
        SkewKind::Tau => Ok(tau),
        SkewKind::Delta => {
            if !a.in_subalgebra(i + 1) {
                return Err(Error::NotInSubalgebra(i + 2));
            }
            let x = p.gen_elem(i);
            let d = nf_mul(p, &x, a)?.sub(p, &nf_mul(p, &tau, &x)?)?;
            if !d.in_subalgebra(i + 1) {
                return Err(Error::Internal(format!(
                    "δ_{} left R_{}: τ weights disagree with the relations",
                    i + 1,
                    i + 2
                )));
            }
            Ok(d)
        }
    }
}

/// Gaussian binomial `(n choose i)_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBinomial {
    pub n: u64,
    pub i: u64,
    pub value: Laurent,
}

/// `(n)_q = 1 + q + ⋯ + q^{n-1}`, which is `n` at `q = 1`.
fn q_integer(nvars: usize, slot: usize, n: u64) -> Laurent {
    (0..n).fold(Laurent::zero(nvars), |acc, k| acc.add(&Laurent::var(nvars, slot, k as i64)))
}

/// `(n choose i)_q = (n)! / ((i)! (n-i)!)` as a polynomial in parameter
/// `slot` of a ring with `nvars` parameters; the division is exact.
pub fn q_binomial(nvars: usize, slot: usize, n: u64, i: u64) -> Result<QBinomial> {
    if i > n {
        return Err(Error::BinomialRange { n, i });
    }
    let fact = |k: u64| {
        (1..=k).fold(Laurent::one(nvars), |acc, j| acc.mul(&q_integer(nvars, slot, j)))
    };
    let den = fact(i).mul(&fact(n - i));
    let value = fact(n)
        .exact_div(&den)
        .ok_or_else(|| Error::Internal("q-factorial quotient not exact".into()))?;
    Ok(QBinomial { n, i, value })
}

/// Gaussian binomial evaluated at an arbitrary ring element `q`, by the
/// q-Pascal recursion `(n i) = (n-1 i-1) + q^i (n-1 i)`.
pub fn q_binomial_at<R: CoeffRing>(ring: &R, q: &R::Elem, n: u64, i: u64) -> Result<R::Elem> {
    if i > n {
        return Err(Error::BinomialRange { n, i });
    }
    let mut row = vec![ring.one()];
    for m in 1..=n as usize {
        let mut next = vec![ring.one(); m + 1];
        for k in 1..m {
            let qk = ring.pow(q, k as i64).expect("nonnegative power");
            next[k] = ring.add(&row[k - 1], &ring.mul(&qk, &row[k]));
        }
        row = next;
    }
    Ok(row[i as usize].clone())
}

/// Right-hand side of `x_i^n a = Σ_k (n choose k)_{q_i} τ_i^{n-k} δ_i^k(a) x_i^{n-k}`.
pub fn q_leibniz_expand<R: CoeffRing>(
    p: &Presentation<R>,
    i: usize,
    n: u64,
    a: &NfElement<R>,
) -> Result<NfElement<R>> {
    a.check(p)?;
    if !a.in_subalgebra(i + 1) {
        return Err(Error::NotInSubalgebra(i + 2));
    }
    let ring = p.ring();
    let q = p.qskew(i).clone();
    let mut acc = NfElement::zero(p);
    let mut delta_k = a.clone();
    for k in 0..=n {
        if delta_k.is_zero() {
            break;
        }
        let mut term = delta_k.clone();
        for _ in 0..n - k {
            term = skew_action(p, i, SkewKind::Tau, &term)?;
        }
        let coef = q_binomial_at(ring, &q, n, k)?;
        let xpow = p.gen_power(i, (n - k) as i64)?;
        acc = acc.add(p, &nf_mul(p, &term, &xpow)?.scale(p, &coef))?;
        if k < n {
            delta_k = skew_action(p, i, SkewKind::Delta, &delta_k)?;
        }
    }
    Ok(acc)
}

/// Rational number helper used by callers building coefficients.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
