//! Coefficient rings. A presentation is defined over one of these: the
//! generic Laurent ring of its parameters, the rationals after substituting
//! values, or a cyclotomic field after sending parameters to roots of unity.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::params::{gamma_torsionfree, UnitMonomial};

/// Outcome of asking whether the group generated by some units is
/// torsion-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorsionVerdict {
    TorsionFree,
    Torsion(String),
    Undetermined(String),
}

/// A commutative coefficient ring, given as a ring object that knows how to
/// operate on its elements.
pub trait CoeffRing: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_rational(&self, r: &BigRational) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Inverse of `a` if `a` is a unit of the ring.
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Human-readable rendering.
    fn format(&self, a: &Self::Elem) -> String;

    /// Torsion analysis of the multiplicative group generated by `units`.
    fn torsion_verdict(&self, units: &[Self::Elem]) -> TorsionVerdict;

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// `a^e`; negative exponents need `a` to be a unit.
    fn pow(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        let base = if e < 0 { self.unit_inverse(a)? } else { a.clone() };
        let mut acc = self.one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            k >>= 1;
        }
        Some(acc)
    }
}

/// The field of rational numbers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl CoeffRing for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_rational(&self, r: &BigRational) -> BigRational {
        r.clone()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn unit_inverse(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }

    /// Factors each rational over the primes and reuses the monomial
    /// torsion test with primes playing the role of parameters.
    fn torsion_verdict(&self, units: &[BigRational]) -> TorsionVerdict {
        let mut primes: Vec<BigInt> = Vec::new();
        let mut factored: Vec<(i8, Vec<(BigInt, i64)>)> = Vec::new();
        for u in units {
            if u.is_zero() {
                return TorsionVerdict::Undetermined("zero is not a unit".into());
            }
            let sign = if u.is_negative() { -1 } else { 1 };
            let mut fs = Vec::new();
            for (p, e) in factor_integer(u.numer().abs()) {
                fs.push((p, e));
            }
            for (p, e) in factor_integer(u.denom().abs()) {
                fs.push((p, -e));
            }
            for (p, _) in &fs {
                if !primes.contains(p) {
                    primes.push(p.clone());
                }
            }
            factored.push((sign, fs));
        }
        let gens: Vec<UnitMonomial> = factored
            .into_iter()
            .map(|(sign, fs)| {
                let mut exps = vec![0i64; primes.len()];
                for (p, e) in fs {
                    let k = primes.iter().position(|x| *x == p).unwrap();
                    exps[k] += e;
                }
                UnitMonomial::new(sign, exps)
            })
            .collect();
        if gamma_torsionfree(&gens) {
            TorsionVerdict::TorsionFree
        } else {
            TorsionVerdict::Torsion("-1 lies in the generated group".into())
        }
    }
}

/// Trial-division factorization of a positive integer.
pub(crate) fn factor_integer(n: BigInt) -> Vec<(BigInt, i64)> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_torsion() {
        let q = Rationals;
        assert_eq!(q.torsion_verdict(&[r(3, 1), r(1, 2)]), TorsionVerdict::TorsionFree);
        assert!(matches!(q.torsion_verdict(&[r(-1, 1)]), TorsionVerdict::Torsion(_)));
        // (-2) * (1/2) = -1
        assert!(matches!(q.torsion_verdict(&[r(-2, 1), r(1, 2)]), TorsionVerdict::Torsion(_)));
        assert_eq!(q.torsion_verdict(&[r(-2, 1)]), TorsionVerdict::TorsionFree);
    }

    #[test]
    fn pow_with_inverse() {
        let q = Rationals;
        assert_eq!(q.pow(&r(2, 3), -2), Some(r(9, 4)));
        assert_eq!(q.pow(&r(0, 1), -1), None);
    }

    #[test]
    fn factorization() {
        let f = factor_integer(BigInt::from(360));
        assert_eq!(
            f,
            vec![(BigInt::from(2), 3), (BigInt::from(3), 2), (BigInt::from(5), 1)]
        );
    }
}
