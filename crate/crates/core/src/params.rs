//! The coefficient ring `C`: Laurent polynomials with rational coefficients
//! in a fixed list of named parameters, its fraction field, and the group of
//! signed unit monomials in which commutation scalars live.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::{integer_kernel, IntMatrix};
use crate::ring::{CoeffRing, TorsionVerdict};

/// Element of `C = Q[p_1^±1, ..., p_k^±1]`.
///
/// Exponent vectors are dense, one slot per parameter; no stored
/// coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Laurent {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl Laurent {
    pub fn zero(nvars: usize) -> Self {
        Laurent { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(c.into()))
    }

    pub fn monomial(nvars: usize, exps: Vec<i64>, c: BigRational) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Laurent { nvars, terms }
    }

    /// The parameter `var` to the power `e`.
    pub fn var(nvars: usize, var: usize, e: i64) -> Self {
        let mut exps = vec![0; nvars];
        exps[var] = e;
        Self::monomial(nvars, exps, BigRational::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i64>, BigRational)>) -> Self {
        let mut out = Laurent::zero(nvars);
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, BigRational> {
        &self.terms
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

    fn add_term(&mut self, e: Vec<i64>, c: BigRational) {
        assert_eq!(e.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Laurent {
        Laurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Laurent {
        if c.is_zero() {
            return Laurent::zero(self.nvars);
        }
        Laurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by the monomial with exponent vector `shift`.
    pub fn shift(&self, shift: &[i64]) -> Laurent {
        Laurent {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// The single coefficient of a constant, if `self` is one.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `Some` if `self` is `±` a monomial with coefficient `±1`.
    pub fn as_unit_monomial(&self) -> Option<UnitMonomial> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if c.is_one() {
            Some(UnitMonomial::new(1, e.clone()))
        } else if (-c).is_one() {
            Some(UnitMonomial::new(-1, e.clone()))
        } else {
            None
        }
    }

    /// Inverse in `C`: only nonzero rational multiples of monomials qualify.
    pub fn unit_inverse(&self) -> Option<Laurent> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        Some(Laurent::monomial(self.nvars, e.iter().map(|x| -x).collect(), c.recip()))
    }

    /// Leading term in lexicographic order of exponent vectors.
    pub fn leading(&self) -> Option<(&Vec<i64>, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Per-variable (min, max) exponents.
    fn degree_box(&self) -> Vec<(i64, i64)> {
        let mut b = vec![(i64::MAX, i64::MIN); self.nvars];
        for e in self.terms.keys() {
            for (k, &x) in e.iter().enumerate() {
                b[k].0 = b[k].0.min(x);
                b[k].1 = b[k].1.max(x);
            }
        }
        b
    }

    /// Exact quotient `self / divisor` in `C`, or `None` if `divisor` does
    /// not divide `self`.
    pub fn exact_div(&self, divisor: &Laurent) -> Option<Laurent> {
        assert!(!divisor.is_zero(), "division by zero");
        if self.is_zero() {
            return Some(Laurent::zero(self.nvars));
        }
        // Degrees add under multiplication in a domain, so every term of the
        // quotient lives in this box.
        let abox = self.degree_box();
        let bbox = divisor.degree_box();
        let qbox: Vec<(i64, i64)> =
            abox.iter().zip(&bbox).map(|(a, b)| (a.0 - b.0, a.1 - b.1)).collect();
        if qbox.iter().any(|(lo, hi)| lo > hi) {
            return None;
        }
        let (be, bc) = divisor.leading().unwrap();
        let (be, bc) = (be.clone(), bc.clone());
        let mut rem = self.clone();
        let mut quot = Laurent::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            let qe: Vec<i64> = re.iter().zip(&be).map(|(a, b)| a - b).collect();
            if qe.iter().zip(&qbox).any(|(x, (lo, hi))| x < lo || x > hi) {
                return None;
            }
            let qc = rc / &bc;
            let t = Laurent::monomial(self.nvars, qe, qc);
            rem = rem.sub(&divisor.mul(&t));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Evaluates at rational values, one per parameter. Fails if a negative
    /// power meets a zero value.
    pub fn eval_rational(&self, values: &[BigRational]) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(e) {
                if k < 0 && v.is_zero() {
                    return None;
                }
                t *= pow_rational(v, k);
            }
            acc += t;
        }
        Some(acc)
    }

    /// Renders with the given parameter names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono = monomial_string(names, e);
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", abs, mono));
            }
        }
        out
    }
}

pub(crate) fn pow_rational(v: &BigRational, k: i64) -> BigRational {
    let base = if k < 0 { v.recip() } else { v.clone() };
    let mut acc = BigRational::one();
    for _ in 0..k.unsigned_abs() {
        acc *= &base;
    }
    acc
}

pub(crate) fn monomial_string(names: &[String], e: &[i64]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
        .collect();
    parts.join("*")
}

/// A signed monomial `±p^e`: an element of the group `Γ` of commutation
/// scalars.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct UnitMonomial {
    sign: i8,
    exps: Vec<i64>,
}

impl UnitMonomial {
    pub fn new(sign: i8, exps: Vec<i64>) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        UnitMonomial { sign, exps }
    }

    pub fn one(nvars: usize) -> Self {
        UnitMonomial { sign: 1, exps: vec![0; nvars] }
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        UnitMonomial { sign: 1, exps }
    }

    pub fn minus_one(nvars: usize) -> Self {
        UnitMonomial { sign: -1, exps: vec![0; nvars] }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.sign == 1 && self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &UnitMonomial) -> UnitMonomial {
        UnitMonomial {
            sign: self.sign * other.sign,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inv(&self) -> UnitMonomial {
        UnitMonomial { sign: self.sign, exps: self.exps.iter().map(|e| -e).collect() }
    }

    pub fn pow(&self, k: i64) -> UnitMonomial {
        UnitMonomial {
            sign: if self.sign == -1 && k.rem_euclid(2) == 1 { -1 } else { 1 },
            exps: self.exps.iter().map(|e| e * k).collect(),
        }
    }

    pub fn to_laurent(&self) -> Laurent {
        Laurent::monomial(
            self.exps.len(),
            self.exps.clone(),
            BigRational::from_integer(BigInt::from(self.sign)),
        )
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let m = monomial_string(names, &self.exps);
        match (self.sign, m.is_empty()) {
            (1, true) => "1".into(),
            (-1, true) => "-1".into(),
            (1, false) => m,
            _ => format!("-{}", m),
        }
    }
}

/// Product of unit monomials raised to integer powers: exponents add,
/// signs multiply.
pub fn unit_product(nvars: usize, factors: &[(UnitMonomial, i64)]) -> UnitMonomial {
    factors
        .iter()
        .fold(UnitMonomial::one(nvars), |acc, (u, k)| acc.mul(&u.pow(*k)))
}

/// Whether the subgroup of `Γ` generated by `generators` is torsion-free.
///
/// The parameter part is free abelian, so the only possible torsion is
/// `-1`. It lies in the group iff some integer relation among the exponent
/// vectors has odd total sign parity; the relations form the integer kernel
/// of the exponent matrix, and parity is linear, so checking a kernel basis
/// suffices.
pub fn gamma_torsionfree(generators: &[UnitMonomial]) -> bool {
    if generators.is_empty() {
        return true;
    }
    let nvars = generators[0].nvars();
    let cols: Vec<Vec<i64>> = generators.iter().map(|g| g.exps.clone()).collect();
    let kernel = if nvars == 0 {
        IntMatrix::identity(generators.len())
    } else {
        integer_kernel(&IntMatrix::from_columns(nvars, &cols))
    };
    let parity: Vec<i64> = generators.iter().map(|g| i64::from(g.sign == -1)).collect();
    kernel.columns().iter().all(|b| {
        let s: BigInt = b.iter().zip(&parity).map(|(x, &p)| x * p).sum();
        (s % 2i32).is_zero()
    })
}

/// The ring object for `C`: the ordered parameter names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamRing {
    names: Arc<Vec<String>>,
}

impl ParamRing {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        ParamRing { names: Arc::new(names.into_iter().map(Into::into).collect()) }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn var(&self, name: &str, e: i64) -> Laurent {
        let k = self.index_of(name).unwrap_or_else(|| panic!("unknown parameter {name}"));
        Laurent::var(self.nvars(), k, e)
    }

    pub fn unit(&self, sign: i8, exps: Vec<i64>) -> Laurent {
        UnitMonomial::new(sign, exps).to_laurent()
    }
}

impl CoeffRing for ParamRing {
    type Elem = Laurent;

    fn zero(&self) -> Laurent {
        Laurent::zero(self.nvars())
    }
    fn one(&self) -> Laurent {
        Laurent::one(self.nvars())
    }
    fn from_rational(&self, r: &BigRational) -> Laurent {
        Laurent::constant(self.nvars(), r.clone())
    }
    fn add(&self, a: &Laurent, b: &Laurent) -> Laurent {
        a.add(b)
    }
    fn neg(&self, a: &Laurent) -> Laurent {
        a.neg()
    }
    fn mul(&self, a: &Laurent, b: &Laurent) -> Laurent {
        a.mul(b)
    }
    fn is_zero(&self, a: &Laurent) -> bool {
        a.is_zero()
    }
    fn unit_inverse(&self, a: &Laurent) -> Option<Laurent> {
        a.unit_inverse()
    }
    fn format(&self, a: &Laurent) -> String {
        a.display_with(&self.names)
    }
    fn torsion_verdict(&self, units: &[Laurent]) -> TorsionVerdict {
        let mut gens = Vec::with_capacity(units.len());
        for u in units {
            match u.as_unit_monomial() {
                Some(m) => gens.push(m),
                None => {
                    return TorsionVerdict::Undetermined(format!(
                        "{} is not a signed monomial",
                        self.format(u)
                    ))
                }
            }
        }
        if gamma_torsionfree(&gens) {
            TorsionVerdict::TorsionFree
        } else {
            TorsionVerdict::Torsion("-1 lies in the generated group".into())
        }
    }
}

/// Element of `F = Fract(C)`.
///
/// Kept as `num / den` with the denominator normalized: monomial content
/// shifted out (lowest exponent of every parameter is zero) and the leading
/// coefficient equal to one. When the denominator divides the numerator the
/// quotient is stored with denominator one.
#[derive(Clone, Debug)]
pub struct FracElem {
    num: Laurent,
    den: Laurent,
}

impl FracElem {
    pub fn new(num: Laurent, den: Laurent) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut f = FracElem { num, den };
        f.normalize();
        f
    }

    pub fn from_laurent(a: Laurent) -> Self {
        let n = a.nvars();
        FracElem { num: a, den: Laurent::one(n) }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_laurent(Laurent::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_laurent(Laurent::one(nvars))
    }

    pub fn num(&self) -> &Laurent {
        &self.num
    }

    pub fn den(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) {
        let n = self.num.nvars();
        if self.num.is_zero() {
            self.den = Laurent::one(n);
            return;
        }
        if let Some(q) = self.num.exact_div(&self.den) {
            self.num = q;
            self.den = Laurent::one(n);
            return;
        }
        let lows: Vec<i64> = self.den.degree_box().iter().map(|b| -b.0).collect();
        let (_, lc) = self.den.leading().unwrap();
        let inv = lc.recip();
        self.den = self.den.shift(&lows).scale(&inv);
        self.num = self.num.shift(&lows).scale(&inv);
    }

    pub fn add(&self, o: &FracElem) -> FracElem {
        if self.den == o.den {
            return FracElem::new(self.num.add(&o.num), self.den.clone());
        }
        FracElem::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> FracElem {
        FracElem { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &FracElem) -> FracElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FracElem) -> FracElem {
        FracElem::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<FracElem> {
        (!self.is_zero()).then(|| FracElem::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &FracElem) -> Option<FracElem> {
        Some(self.mul(&o.inv()?))
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let n = self.num.display_with(names);
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            n
        } else {
            format!("({})/({})", n, self.den.display_with(names))
        }
    }
}

impl PartialEq for FracElem {
    fn eq(&self, o: &FracElem) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl Eq for FracElem {}

impl fmt::Display for UnitMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.exps.len()).map(|i| format!("p{i}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> ParamRing {
        ParamRing::new(["q", "c"])
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn unit_product_examples() {
        let qm = UnitMonomial::new(1, vec![1, 0]);
        let c = UnitMonomial::new(1, vec![0, 1]);
        assert!(unit_product(2, &[(qm.clone(), 1), (qm.clone(), -1)]).is_one());
        assert_eq!(unit_product(2, &[(qm.clone(), 1), (c, 2)]), UnitMonomial::new(1, vec![1, 2]));
        let mq = UnitMonomial::new(-1, vec![1, 0]);
        assert_eq!(unit_product(2, &[(mq, 2)]), UnitMonomial::new(1, vec![2, 0]));
    }

    #[test]
    fn torsion_examples() {
        let qm = UnitMonomial::new(1, vec![1, 0]);
        let qc = UnitMonomial::new(1, vec![1, 1]);
        assert!(gamma_torsionfree(&[qm.clone(), qc]));
        assert!(!gamma_torsionfree(&[UnitMonomial::minus_one(2)]));
        assert!(gamma_torsionfree(&[]));
        // -q and q together contain -1
        assert!(!gamma_torsionfree(&[qm.clone(), UnitMonomial::new(-1, vec![1, 0])]));
        // -q alone is free
        assert!(gamma_torsionfree(&[UnitMonomial::new(-1, vec![1, 0])]));
        // -q^2 and q: (-q^2) * q^-2 = -1
        assert!(!gamma_torsionfree(&[UnitMonomial::new(-1, vec![2, 0]), qm]));
    }

    #[test]
    fn exact_division() {
        let r = q();
        let qv = r.var("q", 1);
        let one = r.one();
        let a = qv.sub(&one).mul(&qv.add(&one)); // q^2 - 1
        assert_eq!(a.exact_div(&qv.sub(&one)), Some(qv.add(&one)));
        assert_eq!(a.exact_div(&qv.add(&r.from_int(2))), None);
        // Laurent: (q^-1 - 1) divides (1 - q)
        let qi = r.var("q", -1);
        let b = one.sub(&qv);
        assert_eq!(b.exact_div(&qi.sub(&one)), Some(qv.clone()));
    }

    #[test]
    fn frac_normalizes_and_compares() {
        let r = q();
        let qv = r.var("q", 1);
        let one = r.one();
        let f = FracElem::new(qv.mul(&qv).sub(&one), qv.sub(&one));
        assert_eq!(f.den(), &one);
        assert_eq!(f.num(), &qv.add(&one));
        let g = FracElem::new(one.clone(), r.var("q", -1).sub(&one));
        let h = FracElem::new(qv.clone(), one.sub(&qv));
        assert_eq!(g, h);
    }

    #[test]
    fn display() {
        let r = q();
        let a = r.var("q", -1).sub(&r.one()).scale(&rat(2));
        assert_eq!(r.format(&a), "-2 + 2*q^-1");
    }
}
