//! H-weights: the eigenvalues of `τ_1..τ_n` on PBW monomials, and the
//! decomposition of elements into weight components.

use std::collections::BTreeMap;

use crate::normalform::{NfElement, Terms};
use crate::presentation::Presentation;
use crate::ring::CoeffRing;

/// `χ(h)` for each polynomial generator `h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector<E>(pub Vec<E>);

impl<E: Clone> WeightVector<E> {
    pub fn get(&self, h: usize) -> &E {
        &self.0[h]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<E: Clone + Eq> WeightVector<E> {
    pub fn identity<R: CoeffRing<Elem = E>>(p: &Presentation<R>) -> Self {
        WeightVector(vec![p.ring().one(); p.npoly()])
    }

    pub fn mul<R: CoeffRing<Elem = E>>(&self, ring: &R, o: &Self) -> Self {
        WeightVector(self.0.iter().zip(&o.0).map(|(a, b)| ring.mul(a, b)).collect())
    }

    pub fn is_identity<R: CoeffRing<Elem = E>>(&self, ring: &R) -> bool {
        self.0.iter().all(|a| ring.is_one(a))
    }

    pub fn format<R: CoeffRing<Elem = E>>(&self, ring: &R) -> String {
        let parts: Vec<String> = self.0.iter().map(|a| ring.format(a)).collect();
        format!("({})", parts.join(", "))
    }
}

/// `χ(h) = ∏_g λ_{h,g}^{e_g}`.
pub fn monomial_weight<R: CoeffRing>(p: &Presentation<R>, exps: &[i64]) -> WeightVector<R::Elem> {
    WeightVector((0..p.npoly()).map(|h| p.monomial_weight_scalar(h, exps)).collect())
}

/// Splits `a` by weight; components are nonzero, pairwise of distinct
/// weight, and sum to `a`. Ordered by weight.
pub fn weight_components<R: CoeffRing>(
    p: &Presentation<R>,
    a: &NfElement<R>,
) -> Vec<(WeightVector<R::Elem>, NfElement<R>)> {
    let mut groups: BTreeMap<WeightVector<R::Elem>, Terms<R::Elem>> = BTreeMap::new();
    for (m, c) in a.terms() {
        groups.entry(monomial_weight(p, m)).or_default().insert(m.clone(), c.clone());
    }
    groups
        .into_iter()
        .map(|(w, t)| (w, NfElement::from_terms(p, t)))
        .collect()
}

/// The weight of `a` if it is a nonzero H-eigenvector.
pub fn homogeneous_weight<R: CoeffRing>(p: &Presentation<R>, a: &NfElement<R>) -> Option<WeightVector<R::Elem>> {
    let mut comps = weight_components(p, a);
    if comps.len() == 1 {
        comps.pop().map(|(w, _)| w)
    } else {
        None
    }
}

/// Replaces each ideal generator by its weight components; the ideal they
/// generate is H-stable and contains the H-stable core of the original.
pub fn h_stable_generators<R: CoeffRing>(p: &Presentation<R>, gens: &[NfElement<R>]) -> Vec<NfElement<R>> {
    let mut out: Vec<NfElement<R>> = Vec::new();
    for g in gens {
        for (_, c) in weight_components(p, g) {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}
