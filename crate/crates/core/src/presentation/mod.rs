//! Presentations of quantum solvable algebras.
//!
//! Generators come in PBW order: polynomial generators `x_1..x_n` first,
//! then invertible generators `k_1..k_m`. For every ordered pair `a < b`
//! the presentation stores the scalar `u` of `a·b = u·b·a + r_ab`, where the
//! tail `r_ab` is nonzero only between polynomial generators and lies in the
//! subalgebra generated by the generators after `a`.

mod families;
mod validate;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

pub use families::{builtin_presentation, Family};
pub use validate::{validate_presentation, Condition, Finding, Severity, ValidationReport};

use crate::error::{Error, Result};
use crate::normalform::{NfElement, Terms};
use crate::ring::CoeffRing;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenKind {
    Poly,
    Laurent,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub kind: GenKind,
}

/// A quantum solvable algebra over the coefficient ring `R`.
#[derive(Clone, Debug)]
pub struct Presentation<R: CoeffRing> {
    id: u64,
    name: String,
    ring: R,
    gens: Vec<Generator>,
    npoly: usize,
    /// Full commutation matrix: `qmat[a][b]·qmat[b][a] = 1`, diagonal one.
    qmat: Vec<Vec<R::Elem>>,
    tails: BTreeMap<(usize, usize), Terms<R::Elem>>,
    qskew: Vec<R::Elem>,
    /// `hweights[h][g]`: `τ_h(g) = hweights[h][g]·g`.
    hweights: Vec<Vec<R::Elem>>,
}

impl<R: CoeffRing> PartialEq for Presentation<R> {
    fn eq(&self, o: &Self) -> bool {
        self.name == o.name
            && self.ring == o.ring
            && self.gens == o.gens
            && self.qmat == o.qmat
            && self.tails == o.tails
            && self.qskew == o.qskew
            && self.hweights == o.hweights
    }
}

impl<R: CoeffRing> Presentation<R> {
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    /// Number of polynomial generators `n`.
    pub fn npoly(&self) -> usize {
        self.npoly
    }

    /// Number of invertible generators `m`.
    pub fn nlaurent(&self) -> usize {
        self.gens.len() - self.npoly
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn gen_name(&self, g: usize) -> &str {
        &self.gens[g].name
    }

    pub fn is_poly(&self, g: usize) -> bool {
        g < self.npoly
    }

    /// The scalar `u` with `a·b = u·b·a` (+ tail when `a < b`).
    pub fn commutation(&self, a: usize, b: usize) -> &R::Elem {
        &self.qmat[a][b]
    }

    pub fn tail(&self, a: usize, b: usize) -> Option<&Terms<R::Elem>> {
        self.tails.get(&(a, b))
    }

    pub fn tails(&self) -> &BTreeMap<(usize, usize), Terms<R::Elem>> {
        &self.tails
    }

    pub fn has_tails(&self) -> bool {
        !self.tails.is_empty()
    }

    /// `q_i` of `δ_i τ_i = q_i τ_i δ_i`.
    pub fn qskew(&self, i: usize) -> &R::Elem {
        &self.qskew[i]
    }

    /// `λ_{h,g}`: eigenvalue of `τ_h` on generator `g`.
    pub fn weight(&self, h: usize, g: usize) -> &R::Elem {
        &self.hweights[h][g]
    }

    /// Tail as a normal-form element.
    pub fn tail_element(&self, a: usize, b: usize) -> NfElement<R> {
        let terms = self.tails.get(&(a, b)).cloned().unwrap_or_default();
        NfElement::from_terms(self, terms)
    }

    /// Weight the auto-derivation rule assigns to `(h, g)`.
    pub(crate) fn default_weight(&self, h: usize, g: usize) -> R::Elem {
        derived_weight(&self.ring, &self.qmat, &self.qskew, h, g)
    }

    /// Same algebra under a new name.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let mut p = self.clone();
        p.name = name.into();
        p
    }

    /// Replaces one tail, keeping everything else; used to build mutated
    /// presentations for validation experiments.
    pub fn with_tail(&self, a: usize, b: usize, tail: Terms<R::Elem>) -> Self {
        let mut p = self.clone();
        p.id = fresh_id();
        if tail.is_empty() {
            p.tails.remove(&(a, b));
        } else {
            p.tails.insert((a, b), tail);
        }
        p
    }

    /// Replaces one weight `λ_{h,g}`.
    pub fn with_weight(&self, h: usize, g: usize, w: R::Elem) -> Self {
        let mut p = self.clone();
        p.id = fresh_id();
        p.hweights[h][g] = w;
        p
    }

    /// Rebuilds the presentation with every scalar passed through `f`.
    pub(crate) fn map_scalars<S: CoeffRing>(
        &self,
        ring: S,
        name: String,
        mut f: impl FnMut(&R::Elem) -> Result<S::Elem>,
    ) -> Result<Presentation<S>> {
        let qmat = self
            .qmat
            .iter()
            .map(|row| row.iter().map(&mut f).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut tails = BTreeMap::new();
        for (k, t) in &self.tails {
            let mut nt = Terms::new();
            for (m, c) in t {
                let v = f(c)?;
                if !ring.is_zero(&v) {
                    nt.insert(m.clone(), v);
                }
            }
            if !nt.is_empty() {
                tails.insert(*k, nt);
            }
        }
        let qskew = self.qskew.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        let hweights = self
            .hweights
            .iter()
            .map(|row| row.iter().map(&mut f).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Presentation {
            id: fresh_id(),
            name,
            ring,
            gens: self.gens.clone(),
            npoly: self.npoly,
            qmat,
            tails,
            qskew,
            hweights,
        })
    }
}

fn derived_weight<R: CoeffRing>(
    ring: &R,
    qmat: &[Vec<R::Elem>],
    qskew: &[R::Elem],
    h: usize,
    g: usize,
) -> R::Elem {
    if g == h {
        ring.unit_inverse(&qskew[h]).expect("q_i is a unit")
    } else {
        // λ_{h,g} = qmat(h,g) for g after h and qmat(g,h)^{-1} before;
        // with qmat(g,h)·qmat(h,g) = 1 both are qmat[h][g].
        qmat[h][g].clone()
    }
}

/// Tail terms as (coefficient, word) pairs; words need not be ordered.
pub type TailSpec<E> = Vec<(E, Vec<(usize, i64)>)>;

/// Incremental construction of a [`Presentation`].
///
/// Tails are supplied as lists of `(coefficient, word)` where a word is a
/// sequence of `(generator, exponent)`; they are brought to normal form
/// with the relations already present, from the last polynomial generator
/// backwards, so tails may be written in any generator order.
#[derive(Clone, Debug)]
pub struct PresentationBuilder<R: CoeffRing> {
    name: String,
    ring: R,
    gens: Vec<Generator>,
    qmat: BTreeMap<(usize, usize), R::Elem>,
    tails: BTreeMap<(usize, usize), TailSpec<R::Elem>>,
    qskew: BTreeMap<usize, R::Elem>,
    weights: BTreeMap<(usize, usize), R::Elem>,
}

impl<R: CoeffRing> PresentationBuilder<R> {
    pub fn new(name: impl Into<String>, ring: R) -> Self {
        PresentationBuilder {
            name: name.into(),
            ring,
            gens: Vec::new(),
            qmat: BTreeMap::new(),
            tails: BTreeMap::new(),
            qskew: BTreeMap::new(),
            weights: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn npoly(&self) -> usize {
        self.gens.iter().filter(|g| g.kind == GenKind::Poly).count()
    }

    pub fn generator(&mut self, name: impl Into<String>, kind: GenKind) -> Result<usize> {
        let name = name.into();
        if self.gen_index(&name).is_some() {
            return Err(Error::Duplicate(format!("generator `{name}`")));
        }
        if kind == GenKind::Poly && self.gens.iter().any(|g| g.kind == GenKind::Laurent) {
            return Err(Error::IllFormed(format!(
                "polynomial generator `{name}` declared after an invertible one"
            )));
        }
        self.gens.push(Generator { name, kind });
        Ok(self.gens.len() - 1)
    }

    fn check_gen(&self, g: usize) -> Result<()> {
        if g < self.gens.len() {
            Ok(())
        } else {
            Err(Error::UnknownGenerator(format!("#{}", g + 1)))
        }
    }

    /// Sets `a·b = u·b·a` for `a` before `b`.
    pub fn commute(&mut self, a: usize, b: usize, u: R::Elem) -> Result<()> {
        self.check_gen(a)?;
        self.check_gen(b)?;
        if a >= b {
            return Err(Error::IllFormed(format!(
                "commute `{}` `{}`: first generator must come first in PBW order",
                self.gens[a].name, self.gens[b].name
            )));
        }
        if self.ring.unit_inverse(&u).is_none() {
            return Err(Error::NotAUnit(self.ring.format(&u)));
        }
        if self.qmat.insert((a, b), u).is_some() {
            return Err(Error::Duplicate(format!(
                "commute `{}` `{}`",
                self.gens[a].name, self.gens[b].name
            )));
        }
        Ok(())
    }

    /// Sets the tail `r_ab`, given as a linear combination of words.
    pub fn tail(&mut self, a: usize, b: usize, terms: TailSpec<R::Elem>) -> Result<()> {
        self.check_gen(a)?;
        self.check_gen(b)?;
        let npoly = self.npoly();
        if a >= b || b >= npoly {
            return Err(Error::IllFormed(format!(
                "tail `{}` `{}`: tails join two polynomial generators in PBW order",
                self.gens[a].name, self.gens[b].name
            )));
        }
        for (_, word) in &terms {
            for &(g, _) in word {
                self.check_gen(g)?;
                if g <= a {
                    return Err(Error::IllFormed(format!(
                        "tail `{}` `{}` mentions `{}`, which is not later than `{}`",
                        self.gens[a].name, self.gens[b].name, self.gens[g].name, self.gens[a].name
                    )));
                }
            }
        }
        if self.tails.insert((a, b), terms).is_some() {
            return Err(Error::Duplicate(format!(
                "tail `{}` `{}`",
                self.gens[a].name, self.gens[b].name
            )));
        }
        Ok(())
    }

    pub fn qskew(&mut self, i: usize, q: R::Elem) -> Result<()> {
        self.check_gen(i)?;
        if i >= self.npoly() {
            return Err(Error::IllFormed("qskew applies to polynomial generators".into()));
        }
        if self.ring.unit_inverse(&q).is_none() {
            return Err(Error::NotAUnit(self.ring.format(&q)));
        }
        if self.qskew.insert(i, q).is_some() {
            return Err(Error::Duplicate(format!("qskew {}", i + 1)));
        }
        Ok(())
    }

    pub fn weight(&mut self, h: usize, g: usize, w: R::Elem) -> Result<()> {
        self.check_gen(h)?;
        self.check_gen(g)?;
        if h >= self.npoly() {
            return Err(Error::IllFormed("weights are indexed by polynomial generators".into()));
        }
        if self.ring.unit_inverse(&w).is_none() {
            return Err(Error::NotAUnit(self.ring.format(&w)));
        }
        if self.weights.insert((h, g), w).is_some() {
            return Err(Error::Duplicate(format!("weight {} `{}`", h + 1, self.gens[g].name)));
        }
        Ok(())
    }

    pub fn build(self) -> Result<Presentation<R>> {
        let ring = self.ring;
        let n = self.gens.len();
        let npoly = self.gens.iter().filter(|g| g.kind == GenKind::Poly).count();
        let mut qmat = vec![vec![ring.one(); n]; n];
        for (&(a, b), u) in &self.qmat {
            qmat[a][b] = u.clone();
            qmat[b][a] = ring.unit_inverse(u).expect("checked unit");
        }
        let mut p = Presentation {
            id: fresh_id(),
            name: self.name,
            ring: ring.clone(),
            gens: self.gens,
            npoly,
            qmat,
            tails: BTreeMap::new(),
            qskew: vec![ring.one(); npoly],
            hweights: Vec::new(),
        };
        // Normalize tails from the last polynomial generator backwards; the
        // rewriting inside R_{a+1} only uses tails of later pairs.
        for a in (0..npoly).rev() {
            let pairs: Vec<usize> =
                self.tails.range((a, 0)..(a + 1, 0)).map(|(&(_, b), _)| b).collect();
            for b in pairs {
                let words = &self.tails[&(a, b)];
                let mut acc = NfElement::zero(&p);
                for (c, word) in words {
                    let t = p.word(word)?.scale(&p, c);
                    acc = acc.add(&p, &t)?;
                }
                if !acc.is_zero() {
                    p.tails.insert((a, b), acc.into_terms());
                }
            }
        }
        // q_i: explicit, else inferred from the first nonzero tail of x_i
        for i in 0..npoly {
            if let Some(q) = self.qskew.get(&i) {
                p.qskew[i] = q.clone();
            } else if let Some(q) = infer_qskew(&p, i) {
                p.qskew[i] = q;
            }
        }
        let mut hweights = vec![vec![ring.one(); n]; npoly];
        for (h, row) in hweights.iter_mut().enumerate() {
            for (g, w) in row.iter_mut().enumerate() {
                *w = match self.weights.get(&(h, g)) {
                    Some(w) => w.clone(),
                    None => derived_weight(&ring, &p.qmat, &p.qskew, h, g),
                };
            }
        }
        p.hweights = hweights;
        Ok(p)
    }
}

/// From `τ_i(r_ij) = q_i^{-1} λ_{i,x_j} r_ij`, reading the weight of the
/// tail off its first monomial.
fn infer_qskew<R: CoeffRing>(p: &Presentation<R>, i: usize) -> Option<R::Elem> {
    let ring = p.ring();
    let ((_, j), tail) = p.tails.range((i, 0)..(i + 1, 0)).next()?;
    let (mono, _) = tail.iter().next()?;
    let mut w = ring.one();
    for (g, &e) in mono.iter().enumerate() {
        if e != 0 {
            w = ring.mul(&w, &ring.pow(&p.qmat[i][g], e)?);
        }
    }
    // q_i = λ_{i,x_j} / weight(r_ij)
    Some(ring.mul(&p.qmat[i][*j], &ring.unit_inverse(&w)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamRing;

    #[test]
    fn builder_rejects_out_of_order_tail() {
        let ring = ParamRing::new(["q"]);
        let mut b = PresentationBuilder::new("P", ring.clone());
        let x = b.generator("x", GenKind::Poly).unwrap();
        let y = b.generator("y", GenKind::Poly).unwrap();
        b.commute(x, y, ring.var("q", 1)).unwrap();
        assert!(matches!(b.tail(x, y, vec![(ring.one(), vec![(x, 1)])]), Err(Error::IllFormed(_))));
    }

    #[test]
    fn builder_rejects_duplicates_and_non_units() {
        let ring = ParamRing::new(["q"]);
        let mut b = PresentationBuilder::new("P", ring.clone());
        let x = b.generator("x", GenKind::Poly).unwrap();
        let y = b.generator("y", GenKind::Poly).unwrap();
        assert!(b.generator("x", GenKind::Poly).is_err());
        b.commute(x, y, ring.var("q", 1)).unwrap();
        assert!(matches!(b.commute(x, y, ring.var("q", 1)), Err(Error::Duplicate(_))));
        let mut b2 = PresentationBuilder::new("P", ring.clone());
        let x = b2.generator("x", GenKind::Poly).unwrap();
        let y = b2.generator("y", GenKind::Poly).unwrap();
        let not_unit = ring.var("q", 1).add(&ring.one());
        assert!(matches!(b2.commute(x, y, not_unit), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn poly_after_laurent_rejected() {
        let ring = ParamRing::new(["q"]);
        let mut b = PresentationBuilder::new("P", ring);
        b.generator("k", GenKind::Laurent).unwrap();
        assert!(b.generator("x", GenKind::Poly).is_err());
    }

    #[test]
    fn derived_weights_follow_commutation() {
        let ring = ParamRing::new(["q"]);
        let mut b = PresentationBuilder::new("P", ring.clone());
        let x = b.generator("x", GenKind::Poly).unwrap();
        let y = b.generator("y", GenKind::Poly).unwrap();
        b.commute(x, y, ring.var("q", 1)).unwrap();
        let p = b.build().unwrap();
        assert_eq!(p.weight(0, 1), &ring.var("q", 1));
        assert_eq!(p.weight(1, 0), &ring.var("q", -1));
        assert_eq!(p.weight(0, 0), &ring.one());
    }
}
