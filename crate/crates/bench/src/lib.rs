//! Benchmark inputs shared by the criterion suites. Everything here is
//! deterministic so runs are comparable.

use qsolv_core::lattice::IntMatrix;
use qsolv_core::{builtin_presentation, Family, NfElement, ParamRing, Presentation, TorusPresentation};

pub fn presentation(f: Family) -> Presentation<ParamRing> {
    builtin_presentation(&f).expect("builtin families are well formed")
}

/// `(Σ_g g)^d`, a dense element with every PBW monomial of degree `d`.
pub fn dense_power(p: &Presentation<ParamRing>, d: u32) -> NfElement<ParamRing> {
    let sum = (0..p.ngens()).fold(NfElement::zero(p), |acc, g| acc.add(p, &p.gen_elem(g)).unwrap());
    (0..d).fold(NfElement::one(p), |acc, _| p.mul(&acc, &sum).unwrap())
}

/// Rank-`n` torus in one parameter with `p_ij = q^{v_ij}` from a fixed
/// pseudo-random pattern in `[-2, 2]`.
pub fn patterned_torus(n: usize) -> TorusPresentation {
    let upper: Vec<Vec<Vec<i64>>> = (0..n)
        .map(|i| (0..n).map(|j| vec![((3 * i + 5 * j) % 5) as i64 - 2]).collect())
        .collect();
    TorusPresentation::from_upper(ParamRing::new(["q"]), &upper).expect("valid torus data")
}

/// Square integer matrix with entries from a linear congruential sequence.
pub fn lcg_matrix(n: usize, seed: u64) -> IntMatrix {
    let mut s = seed;
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((s >> 33) % 19) as i64 - 9
                })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&rows)
}
