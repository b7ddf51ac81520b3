//! Exact arithmetic in `Q(ζ_N)`, elements kept as residues modulo the
//! cyclotomic polynomial `Φ_N`.

use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ring::{CoeffRing, TorsionVerdict};

pub const MAX_ORDER: u32 = 64;

/// Dense univariate polynomial over Q, lowest degree first, no trailing zeros.
pub type UPoly = Vec<BigRational>;

fn trim(p: &mut UPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn upoly_mul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub fn upoly_sub(a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    let mut out: UPoly = (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(BigRational::zero)
                - b.get(i).cloned().unwrap_or_else(BigRational::zero)
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn upoly_divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem = a.clone();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] -= &c * bc;
        }
        quot[shift] = c;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// `Φ_n` as a dense polynomial.
pub fn cyclotomic_polynomial(n: u32) -> UPoly {
    assert!(n >= 1);
    let mut p: UPoly = vec![BigRational::zero(); n as usize + 1];
    p[0] = -BigRational::one();
    p[n as usize] = BigRational::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let (q, r) = upoly_divrem(&p, &cyclotomic_polynomial(d));
            debug_assert!(r.is_empty());
            p = q;
        }
    }
    p
}

/// Element of `Q(ζ_N)`: coefficients of `1, ζ, …, ζ^{φ(N)-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CycloElem(Vec<BigRational>);

impl CycloElem {
    pub fn coefficients(&self) -> &[BigRational] {
        &self.0
    }
}

/// The field `Q(ζ_N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    order: u32,
    phi: Arc<UPoly>,
}

impl Cyclotomic {
    pub fn new(order: u32) -> Option<Self> {
        if order == 0 || order > MAX_ORDER {
            return None;
        }
        Some(Cyclotomic { order, phi: Arc::new(cyclotomic_polynomial(order)) })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    fn reduce(&self, p: &UPoly) -> CycloElem {
        let (_, mut r) = upoly_divrem(p, &self.phi);
        r.resize(self.degree(), BigRational::zero());
        CycloElem(r)
    }

    fn as_upoly(&self, a: &CycloElem) -> UPoly {
        let mut p = a.0.clone();
        trim(&mut p);
        p
    }

    /// `ζ_N^k`.
    pub fn zeta_pow(&self, k: i64) -> CycloElem {
        let k = k.rem_euclid(self.order as i64) as usize;
        let mut p = vec![BigRational::zero(); k + 1];
        p[k] = BigRational::one();
        self.reduce(&p)
    }

    /// Order of `a` as a root of unity, if it is one.
    pub fn root_of_unity_order(&self, a: &CycloElem) -> Option<u64> {
        // the roots of unity in Q(ζ_N) are exactly the lcm(2, N)-th ones
        let m = self.order.lcm(&2) as u64;
        let mut acc = self.one();
        for k in 1..=m {
            acc = self.mul(&acc, a);
            if self.is_one(&acc) {
                return Some(k);
            }
        }
        None
    }
}

impl CoeffRing for Cyclotomic {
    type Elem = CycloElem;

    fn zero(&self) -> CycloElem {
        CycloElem(vec![BigRational::zero(); self.degree()])
    }
    fn one(&self) -> CycloElem {
        self.reduce(&vec![BigRational::one()])
    }
    fn from_rational(&self, r: &BigRational) -> CycloElem {
        self.reduce(&vec![r.clone()])
    }
    fn add(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        CycloElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }
    fn neg(&self, a: &CycloElem) -> CycloElem {
        CycloElem(a.0.iter().map(|x| -x).collect())
    }
    fn mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        self.reduce(&upoly_mul(&self.as_upoly(a), &self.as_upoly(b)))
    }
    fn is_zero(&self, a: &CycloElem) -> bool {
        a.0.iter().all(Zero::is_zero)
    }

    /// Extended Euclid against `Φ_N`.
    fn unit_inverse(&self, a: &CycloElem) -> Option<CycloElem> {
        if self.is_zero(a) {
            return None;
        }
        let (mut r0, mut r1) = ((*self.phi).clone(), self.as_upoly(a));
        let (mut t0, mut t1): (UPoly, UPoly) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = upoly_divrem(&r0, &r1);
            let t = upoly_sub(&t0, &upoly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        // r0 is a nonzero constant since Φ_N is irreducible
        if r0.len() != 1 {
            return None;
        }
        let inv = r0[0].recip();
        let scaled: UPoly = t0.iter().map(|c| c * &inv).collect();
        Some(self.reduce(&scaled))
    }

    fn format(&self, a: &CycloElem) -> String {
        let mut parts = Vec::new();
        for (k, c) in a.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "zeta".into(),
                _ => format!("zeta^{k}"),
            };
            let s = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else {
                format!("{c}*{mono}")
            };
            parts.push(s);
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }

    fn torsion_verdict(&self, units: &[CycloElem]) -> TorsionVerdict {
        let mut undecided = false;
        for u in units {
            match self.root_of_unity_order(u) {
                Some(1) => {}
                Some(k) => {
                    return TorsionVerdict::Torsion(format!(
                        "{} is a root of unity of order {k}",
                        self.format(u)
                    ))
                }
                None => undecided = true,
            }
        }
        if undecided {
            TorsionVerdict::Undetermined("units that are not roots of unity".into())
        } else {
            TorsionVerdict::TorsionFree
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &UPoly) -> Vec<i64> {
        p.iter().map(|c| c.to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(ints(&cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_has_order_n() {
        for n in [1u32, 2, 3, 4, 5, 6, 12] {
            let k = Cyclotomic::new(n).unwrap();
            assert_eq!(k.root_of_unity_order(&k.zeta_pow(1)), Some(n as u64), "n = {n}");
            assert!(k.is_one(&k.pow(&k.zeta_pow(1), n as i64).unwrap()));
        }
    }

    #[test]
    fn inverse() {
        let k = Cyclotomic::new(5).unwrap();
        let a = k.add(&k.one(), &k.zeta_pow(1));
        let inv = k.unit_inverse(&a).unwrap();
        assert!(k.is_one(&k.mul(&a, &inv)));
        assert_eq!(k.unit_inverse(&k.zeta_pow(1)).unwrap(), k.zeta_pow(4));
    }

    #[test]
    fn torsion_of_zeta() {
        let k = Cyclotomic::new(4).unwrap();
        assert!(matches!(k.torsion_verdict(&[k.zeta_pow(1)]), TorsionVerdict::Torsion(_)));
        assert_eq!(k.torsion_verdict(&[k.one()]), TorsionVerdict::TorsionFree);
        assert_eq!(k.format(&k.zeta_pow(1)), "zeta");
    }

    #[test]
    fn out_of_range_order() {
        assert!(Cyclotomic::new(0).is_none());
        assert!(Cyclotomic::new(65).is_none());
    }
}
