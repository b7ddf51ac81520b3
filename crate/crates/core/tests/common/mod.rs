#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use qsolv_core::{nf_mul, CoeffRing, Laurent, NfElement, ParamRing, Presentation, TorusPresentation};
use rand::Rng;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Small nonzero rational times a parameter monomial with exponents in [-1, 1].
pub fn random_scalar(ring: &ParamRing, rng: &mut impl Rng) -> Laurent {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-3..=3);
    }
    let d = rng.gen_range(1..=2);
    let exps: Vec<i64> = (0..ring.nvars()).map(|_| rng.gen_range(-1..=1)).collect();
    Laurent::monomial(ring.nvars(), exps, BigRational::new(c.into(), d.into()))
}

/// Up to `terms` random terms of total degree `<= max_deg` in the
/// generators `from..`. Invertible generators may get negative powers.
pub fn random_element(
    p: &Presentation<ParamRing>,
    rng: &mut impl Rng,
    from: usize,
    max_deg: i64,
    terms: usize,
) -> NfElement<ParamRing> {
    let n = p.ngens();
    let mut acc = NfElement::zero(p);
    for _ in 0..rng.gen_range(1..=terms) {
        let mut exps = vec![0i64; n];
        let mut budget = rng.gen_range(0..=max_deg);
        while budget > 0 && from < n {
            let g = rng.gen_range(from..n);
            let step = if !p.is_poly(g) && rng.gen_bool(0.5) { -1 } else { 1 };
            exps[g] += step;
            budget -= 1;
        }
        let t = NfElement::monomial(p, exps, random_scalar(p.ring(), rng));
        acc = acc.add(p, &t).unwrap();
    }
    acc
}

/// Whether `Y^m` commutes with every generator, decided by multiplying out
/// normal forms in the torus presented as an algebra.
pub fn central_by_multiplication(tp: &Presentation<ParamRing>, m: &[i64]) -> bool {
    let ring = tp.ring();
    let ym = NfElement::monomial(tp, m.to_vec(), ring.one());
    (0..tp.ngens()).all(|i| {
        let g = tp.gen_elem(i);
        nf_mul(tp, &ym, &g).unwrap() == nf_mul(tp, &g, &ym).unwrap()
    })
}

/// Random torus with `p_ij` a monomial in `nv` parameters, exponents in [-2, 2].
pub fn random_torus(rng: &mut impl Rng, rank: usize, nv: usize) -> TorusPresentation {
    let names: Vec<String> = (1..=nv).map(|k| format!("q{k}")).collect();
    let upper: Vec<Vec<Vec<i64>>> = (0..rank)
        .map(|_| (0..rank).map(|_| (0..nv).map(|_| rng.gen_range(-2..=2)).collect()).collect())
        .collect();
    TorusPresentation::from_upper(ParamRing::new(names), &upper).unwrap()
}

/// All vectors in `[-w, w]^n`.
pub fn window(n: usize, w: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-w..=w).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}
