mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use qsolv_core::adjoint::{components_sum_to, satisfies_eigen_equation};
use qsolv_core::lattice::{column_hnf, determinant, is_unimodular, smith_normal_form, IntMatrix};
use qsolv_core::normalform::q_binomial_at;
use qsolv_core::torus::torus_normal_scalar;
use qsolv_core::{
    ad_eigencomponents, admissible_compositions, builtin_presentation, center_lattice, classify_affine_prime,
    classify_specialization, compatible_basis, describe_center, gamma_torsionfree, homogeneous_weight,
    monomial_weight, nf_mul, parse_presentation, print_presentation, q_binomial, q_leibniz_expand,
    root_of_unity_structure, skew_action, specialize_presentation, stratify_affine, stratify_rank2, unit_product,
    validate_presentation, weight_components, CoeffRing, Condition, Error, Family, Laurent, LocElement, NfElement,
    ParamRing, Presentation, SkewKind, SpecTarget, Specialized, TorusPresentation, UnitMonomial,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{central_by_multiplication, random_element, random_torus, rat, window};

fn laurent_strategy(nv: usize) -> impl Strategy<Value = Laurent> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, nv), -4i64..=4, 1i64..=3), 0..4).prop_map(move |ts| {
        Laurent::from_terms(nv, ts.into_iter().map(|(e, n, d)| (e, BigRational::new(n.into(), d.into()))))
    })
}

fn unit_strategy(nv: usize, lo: i64, hi: i64) -> impl Strategy<Value = UnitMonomial> {
    (prop::bool::ANY, prop::collection::vec(lo..=hi, nv))
        .prop_map(|(neg, e)| UnitMonomial::new(if neg { -1 } else { 1 }, e))
}

fn builtins() -> Vec<Family> {
    let ring = ParamRing::new(["q"]);
    vec![
        Family::QuantumPlane,
        Family::QuantumAffine(2),
        Family::QuantumTorus(2),
        Family::QuantumWeyl(1),
        Family::QuantumWeyl(2),
        Family::QuantumMatrices(2),
        Family::Rank2(qsolv_core::parse_scalar(&ring, "q^2 - 5*q + 6").unwrap()),
    ]
}

fn pres(f: &Family) -> Presentation<ParamRing> {
    builtin_presentation(f).unwrap()
}

fn no_zero_coefficients(a: &NfElement<ParamRing>) -> bool {
    a.terms().values().all(|c| !c.is_zero() && c.terms().values().all(|r| !r.is_zero()))
}

// params

proptest! {
    #[test]
    fn laurent_ring_axioms(a in laurent_strategy(2), b in laurent_strategy(2), c in laurent_strategy(2)) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.mul(&b).terms().values().all(|r| !r.is_zero()));
    }

    #[test]
    fn unit_times_inverse_is_one(u in unit_strategy(3, -5, 5)) {
        prop_assert!(unit_product(3, &[(u.clone(), 1), (u, -1)]).is_one());
    }

    #[test]
    fn torsion_matches_enumeration(gens in prop::collection::vec(unit_strategy(2, -1, 1), 0..=3)) {
        // the only torsion in ±Z^2 is -1, so look for it among small products
        let k = gens.len();
        let mut found = false;
        for e in window(k, 4) {
            let factors: Vec<(UnitMonomial, i64)> = gens.iter().cloned().zip(e).collect();
            let u = unit_product(2, &factors);
            if u.sign() == -1 && u.exponents().iter().all(|&x| x == 0) {
                found = true;
                break;
            }
        }
        prop_assert_eq!(gamma_torsionfree(&gens), !found);
    }
}

// presentation

#[test]
fn builtins_up_to_three_validate() {
    for n in 1..=3 {
        for f in [Family::QuantumAffine(n), Family::QuantumTorus(n), Family::QuantumWeyl(n), Family::QuantumMatrices(n)] {
            let r = validate_presentation(&pres(&f));
            assert!(r.passed, "{f}: {:?}", r.summary());
        }
    }
    let r = validate_presentation(&pres(&Family::QuantumPlane));
    assert!(r.passed);
}

#[test]
fn q1_is_a_weight_statement() {
    for f in builtins() {
        let p = pres(&f);
        let ring = p.ring();
        for &(i, j) in p.tails().keys() {
            let r = p.tail_element(i, j);
            let w = homogeneous_weight(&p, &r).expect("tails are homogeneous");
            let want = ring.mul(&ring.unit_inverse(p.qskew(i)).unwrap(), p.weight(i, j));
            assert_eq!(w.get(i), &want, "{f}: tail ({i}, {j})");
        }
    }
}

#[test]
fn validation_is_idempotent() {
    for f in builtins() {
        let p = pres(&f);
        let before = print_presentation(&p);
        assert_eq!(validate_presentation(&p), validate_presentation(&p));
        assert_eq!(print_presentation(&p), before);
    }
}

// normalform

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nf_mul_is_associative_and_bilinear(fam in 0usize..7, seed in any::<u64>()) {
        let f = &builtins()[fam];
        let p = pres(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&p, &mut rng, 0, 3, 3);
        let b = random_element(&p, &mut rng, 0, 3, 3);
        let c = random_element(&p, &mut rng, 0, 3, 3);
        let s = common::random_scalar(p.ring(), &mut rng);
        let m = |x: &NfElement<ParamRing>, y: &NfElement<ParamRing>| nf_mul(&p, x, y).unwrap();
        prop_assert_eq!(m(&m(&a, &b), &c), m(&a, &m(&b, &c)));
        prop_assert_eq!(m(&a, &b.add(&p, &c).unwrap()), m(&a, &b).add(&p, &m(&a, &c)).unwrap());
        prop_assert_eq!(m(&a.scale(&p, &s), &b), m(&a, &b).scale(&p, &s));
        prop_assert_eq!(m(&a, &b.scale(&p, &s)), m(&a, &b).scale(&p, &s));
        prop_assert!(no_zero_coefficients(&m(&a, &b)));
    }

    #[test]
    fn leibniz_matches_multiplication(fam in 0usize..7, n in 0u64..=5, seed in any::<u64>()) {
        let f = &builtins()[fam];
        let p = pres(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..p.npoly() {
            let a = random_element(&p, &mut rng, i + 1, 2, 3);
            let lhs = q_leibniz_expand(&p, i, n, &a).unwrap();
            let rhs = nf_mul(&p, &p.gen_power(i, n as i64).unwrap(), &a).unwrap();
            prop_assert_eq!(lhs, rhs, "{} generator {} n = {}", f, i, n);
        }
    }

    #[test]
    fn q_binomial_identities(n in 1u64..=9, i in 0u64..=9) {
        prop_assume!(i <= n);
        let b = |n, i| q_binomial(1, 0, n, i).unwrap().value;
        prop_assert_eq!(b(n, i), b(n, n - i));
        if i >= 1 && i < n {
            let pascal = b(n - 1, i - 1).add(&Laurent::var(1, 0, i as i64).mul(&b(n - 1, i)));
            prop_assert_eq!(b(n, i), pascal);
        }
        let ring = ParamRing::new(["q"]);
        prop_assert_eq!(q_binomial_at(&ring, &ring.var("q", 1), n, i).unwrap(), b(n, i));
        // at q = 1 the ordinary binomial
        let at_one = b(n, i).eval_rational(&[BigRational::one()]).unwrap();
        let ordinary = (0..i).fold(BigRational::one(), |acc, k| acc * rat((n - k) as i64) / rat((k + 1) as i64));
        prop_assert_eq!(at_one, ordinary);
    }
}

// weights

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weight_components_are_eigenvectors(fam in 0usize..7, seed in any::<u64>()) {
        let f = &builtins()[fam];
        let p = pres(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&p, &mut rng, 0, 3, 4);
        let comps = weight_components(&p, &a);
        let total = comps.iter().fold(NfElement::zero(&p), |acc, (_, c)| acc.add(&p, c).unwrap());
        prop_assert_eq!(&total, &a);
        for (w, c) in &comps {
            prop_assert!(!c.is_zero());
            for h in 0..p.npoly() {
                let t = skew_action(&p, h, SkewKind::Tau, c).unwrap();
                prop_assert_eq!(t, c.scale(&p, w.get(h)));
            }
        }
        for pair in comps.windows(2) {
            prop_assert!(pair[0].0 != pair[1].0);
        }
    }

    #[test]
    fn products_of_homogeneous_elements(fam in 0usize..7, seed in any::<u64>()) {
        let f = &builtins()[fam];
        let p = pres(f);
        let ring = p.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&p, &mut rng, 0, 3, 1);
        let b = random_element(&p, &mut rng, 0, 3, 1);
        let ab = nf_mul(&p, &a, &b).unwrap();
        if !ab.is_zero() {
            let wa = monomial_weight(&p, a.terms().keys().next().unwrap());
            let wb = monomial_weight(&p, b.terms().keys().next().unwrap());
            let w = homogeneous_weight(&p, &ab);
            prop_assert_eq!(w, Some(wa.mul(ring, &wb)));
        }
    }
}

// adjoint

fn is_difference_of_units(f: &Laurent) -> bool {
    let t: Vec<_> = f.terms().iter().collect();
    matches!(t.as_slice(), [(e1, c1), (e2, c2)] if e1 != e2 && c1.abs().is_one() && c2.abs().is_one())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ad_components_reconstruct(fam in prop::sample::select(vec![0usize, 1, 3, 4, 5]), seed in any::<u64>()) {
        let f = &builtins()[fam];
        let p = pres(f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = rand::Rng::gen_range(&mut rng, 0..p.npoly());
        let a = LocElement::from_element(random_element(&p, &mut rng, 0, 2, 3));
        match ad_eigencomponents(&p, x, &a, 16) {
            Ok(spec) => {
                prop_assert!(components_sum_to(&p, x, &spec, &a).unwrap());
                for c in &spec.components {
                    prop_assert!(satisfies_eigen_equation(&p, x, c).unwrap());
                    let prod = c.denom_factors.iter().fold(Laurent::one(p.ring().nvars()), |acc, d| acc.mul(d));
                    prop_assert_eq!(&prod, &c.denom);
                    prop_assert!(c.denom_factors.iter().all(is_difference_of_units));
                    // right multiplication by x^k clears the localization
                    let cleared = c.numer.clear_denominator();
                    prop_assert!(cleared.terms().keys().all(|m| m.iter().all(|&e| e >= 0) || !p.is_poly(x)));
                }
            }
            Err(Error::RepeatedRoot(_)) | Err(Error::DegreeCap(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

// torus

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn normal_scalar_is_a_cocycle(seed in any::<u64>(),
                                  a in prop::collection::vec(-3i64..=3, 3),
                                  b in prop::collection::vec(-3i64..=3, 3),
                                  c in prop::collection::vec(-3i64..=3, 3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_torus(&mut rng, 3, 2);
        let add = |x: &[i64], y: &[i64]| x.iter().zip(y).map(|(p, q)| p + q).collect::<Vec<_>>();
        let s = |x: &[i64], y: &[i64]| torus_normal_scalar(&t, x, y);
        prop_assert_eq!(s(&a, &b).mul(&s(&add(&a, &b), &c)), s(&b, &c).mul(&s(&a, &add(&b, &c))));
    }

    #[test]
    fn center_matches_commutation(seed in any::<u64>(), rank in 1usize..=3, nv in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_torus(&mut rng, rank, nv);
        let g = center_lattice(&t).unwrap();
        let tp = t.to_presentation().unwrap();
        for m in window(rank, 2) {
            prop_assert_eq!(central_by_multiplication(&tp, &m), g.contains(&m), "{:?}", m);
        }
    }

    #[test]
    fn compatible_basis_is_unimodular_and_spans(seed in any::<u64>(), rank in 1usize..=4, nv in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_torus(&mut rng, rank, nv);
        let d = describe_center(&t).unwrap();
        prop_assert!(is_unimodular(&d.change_of_basis));
        let central: Vec<usize> = d.central_positions().collect();
        prop_assert!(d.lattice.spans_same(&d.change_of_basis.select_columns(&central)));
        // in the new basis, central generators commute with everything
        for form in &d.quotient_form {
            for &c in &central {
                for k in 0..rank {
                    prop_assert!(form[(c, k)].is_zero() && form[(k, c)].is_zero());
                }
            }
        }
        let again = compatible_basis(&d.lattice).unwrap();
        prop_assert!(is_unimodular(&again.change_of_basis));
    }

    #[test]
    fn root_of_unity_rank_is_multiplicative(seed in any::<u64>(), r1 in 1usize..=2, r2 in 1usize..=2, n in 1u32..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = ParamRing::new(["q"]);
        let block = |rng: &mut ChaCha8Rng, r: usize| -> Vec<Vec<Vec<i64>>> {
            (0..r).map(|_| (0..r).map(|_| vec![rand::Rng::gen_range(rng, -2..=2)]).collect()).collect()
        };
        let (u1, u2) = (block(&mut rng, r1), block(&mut rng, r2));
        let mut sum = vec![vec![vec![0i64]; r1 + r2]; r1 + r2];
        for i in 0..r1 { for j in 0..r1 { sum[i][j] = u1[i][j].clone(); } }
        for i in 0..r2 { for j in 0..r2 { sum[r1 + i][r1 + j] = u2[i][j].clone(); } }
        let t1 = TorusPresentation::from_upper(ring.clone(), &u1).unwrap();
        let t2 = TorusPresentation::from_upper(ring.clone(), &u2).unwrap();
        let ts = TorusPresentation::from_upper(ring, &sum).unwrap();
        let idx = |t: &TorusPresentation, n| root_of_unity_structure(t, n).unwrap().1;
        prop_assert_eq!(idx(&ts, n), idx(&t1, n) * idx(&t2, n));
        prop_assert_eq!(idx(&ts, 1), BigInt::one());
    }
}

// lattice

fn subsets_of(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|b| b.count_ones() as usize == k)
        .map(|b| (0..n).filter(|&i| b >> i & 1 == 1).collect())
        .collect()
}

/// `d_k` = gcd of all k×k minors; invariant factors are `d_k / d_{k-1}`.
fn determinantal_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=a.rows().min(a.cols()) {
        let mut g = BigInt::zero();
        for rs in subsets_of(a.rows(), k) {
            for cs in subsets_of(a.cols(), k) {
                let rows: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| a[(r, c)].clone()).collect()).collect();
                g = num_integer::Integer::gcd(&g, &determinant(&IntMatrix::from_rows(&rows)));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_correct(rows in 1usize..=4, cols in 1usize..=4, entries in prop::collection::vec(-9i64..=9, 16)) {
        let data: Vec<Vec<i64>> = (0..rows).map(|i| entries[i * cols..(i + 1) * cols].to_vec()).collect();
        let a = IntMatrix::from_rows(&data);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.left.mul(&a).mul(&s.right), s.diag.clone());
        prop_assert!(is_unimodular(&s.left) && is_unimodular(&s.right));
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|d| d.is_positive()));
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert_eq!(f, determinantal_factors(&a));
        let h = column_hnf(&a);
        prop_assert_eq!(a.mul(&h.transform), h.echelon);
        prop_assert!(is_unimodular(&h.transform));
    }
}

// strat

#[test]
fn composition_counts() {
    for n in 0..=12 {
        assert_eq!(admissible_compositions(n).len(), 1 << n);
    }
}

#[test]
fn strata_partition_the_subsets() {
    for n in 1..=4 {
        let p = pres(&Family::QuantumAffine(n));
        let strata = stratify_affine(&p).unwrap();
        let mut sets: Vec<Vec<usize>> = strata.iter().map(|s| s.vanishing.clone()).collect();
        sets.sort();
        let mut all: Vec<Vec<usize>> =
            (0u32..1 << n).map(|bits| (0..n).filter(|&i| bits >> i & 1 == 1).collect()).collect();
        all.sort();
        assert_eq!(sets, all);
        for s in &strata {
            assert_eq!(&classify_affine_prime(&p, &s.vanishing).unwrap(), s);
            let mut both = s.vanishing.clone();
            both.extend(&s.inverted);
            both.sort();
            assert_eq!(both, (0..n).collect::<Vec<_>>());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rank2_normality(f in laurent_strategy(1), lam in -6i64..=6) {
        let ring = ParamRing::new(["q"]);
        let s = stratify_rank2(&f).unwrap();
        let p = &s.presentation;
        let q = ring.var("q", 1);
        let (x, y) = (p.gen_elem(0), p.gen_elem(1));
        prop_assert_eq!(nf_mul(p, &s.u, &y).unwrap(), nf_mul(p, &y, &s.u).unwrap().scale(p, &q));
        prop_assert_eq!(nf_mul(p, &x, &s.u).unwrap(), nf_mul(p, &s.u, &x).unwrap().scale(p, &q));
        prop_assert!(s.exceptional.contains(&BigRational::one()));
        for r in &s.exceptional {
            prop_assert!(r.is_one() || f.eval_rational(std::slice::from_ref(r)).unwrap().is_zero());
        }
        prop_assume!(lam != 0);
        let good = classify_specialization(&f, &SpecTarget::Rational(vec![rat(lam)])).unwrap();
        let root = !f.is_zero() && f.eval_rational(&[rat(lam)]).unwrap().is_zero();
        prop_assert_eq!(good, lam != 1 && !root);
        prop_assert_eq!(good, !s.exceptional.contains(&rat(lam)));
    }
}

// special

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn specialization_keeps_q1_q3(fam in 0usize..7, vals in prop::collection::vec(prop::sample::select(vec![-3i64, -2, 2, 3, 5, 7]), 8)) {
        let f = &builtins()[fam];
        let p = pres(f);
        let nv = p.ring().nvars();
        let t = SpecTarget::Rational(vals[..nv].iter().map(|&v| rat(v)).collect());
        let s = match specialize_presentation(&p, &t) {
            Ok(s) => s,
            Err(Error::Specialization(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let generic = validate_presentation(&p);
        let special = s.validate();
        for c in [Condition::WF, Condition::Q1, Condition::Q3] {
            prop_assert_eq!(
                generic.failures().filter(|x| x.condition == c).count(),
                special.failures().filter(|x| x.condition == c).count(),
                "{} {}", f, c
            );
        }
    }
}

#[test]
fn plane_at_roots_of_unity() {
    let p = pres(&Family::QuantumPlane);
    let t = TorusPresentation::from_presentation(&p).unwrap();
    for n in 1u32..=8 {
        let (_, index) = root_of_unity_structure(&t, n).unwrap();
        assert_eq!(index, BigInt::from(n * n));
        let Specialized::Cyclotomic(sp) = specialize_presentation(&p, &SpecTarget::cyclotomic(n, vec![1]).unwrap()).unwrap()
        else {
            panic!()
        };
        for g in 0..2 {
            let pw = sp.gen_power(g, i64::from(n)).unwrap();
            for h in 0..2 {
                let o = sp.gen_elem(h);
                assert_eq!(nf_mul(&sp, &pw, &o).unwrap(), nf_mul(&sp, &o, &pw).unwrap());
            }
        }
    }
}

// text

#[test]
fn print_parse_round_trip() {
    for f in builtins().into_iter().chain([Family::QuantumMatrices(3), Family::QuantumWeyl(3), Family::QuantumTorus(3)]) {
        let p = pres(&f);
        let text = print_presentation(&p);
        let back = parse_presentation(&text).unwrap();
        assert_eq!(print_presentation(&back), text, "{f}");
        assert_eq!(validate_presentation(&back).passed, validate_presentation(&p).passed);
    }
}
