//! Quantum tori `C_P[Y_1^{±1}..Y_n^{±1}]` with `Y_i Y_j = p_ij Y_j Y_i`:
//! normal-ordering scalars, the central lattice, compatible bases and the
//! structure at a root of unity.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    determinant, hermite_basis, integer_kernel, smith_normal_form, unimodular_inverse, IntMatrix,
};
use crate::params::{Laurent, ParamRing, UnitMonomial};
use crate::presentation::{GenKind, Presentation, PresentationBuilder};
use crate::ring::CoeffRing;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusPresentation {
    ring: ParamRing,
    /// `pmat[i][j] = p_ij` as signed monomials.
    pmat: Vec<Vec<UnitMonomial>>,
}

impl TorusPresentation {
    /// Checks `p_ij·p_ji = 1` and `p_ii = 1`.
    pub fn new(ring: ParamRing, pmat: Vec<Vec<Laurent>>) -> Result<Self> {
        let n = pmat.len();
        let mut out = Vec::with_capacity(n);
        for (i, row) in pmat.iter().enumerate() {
            if row.len() != n {
                return Err(Error::IllFormed("commutation matrix is not square".into()));
            }
            let mut r = Vec::with_capacity(n);
            for e in row {
                r.push(e.as_unit_monomial().ok_or_else(|| Error::NotAUnit(ring.format(e)))?);
            }
            if !r[i].is_one() {
                return Err(Error::IllFormed(format!("p_{}{} must be 1", i + 1, i + 1)));
            }
            out.push(r);
        }
        for i in 0..n {
            for j in 0..n {
                if !out[i][j].mul(&out[j][i]).is_one() {
                    return Err(Error::IllFormed(format!(
                        "p_{}{}·p_{}{} must be 1",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(TorusPresentation { ring, pmat: out })
    }

    /// Upper-triangular exponent data: `upper[i][j]` (i < j) is `v_ij`.
    pub fn from_upper(ring: ParamRing, upper: &[Vec<Vec<i64>>]) -> Result<Self> {
        let n = upper.len();
        let nv = ring.nvars();
        let mut pmat = vec![vec![Laurent::one(nv); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = &upper[i][j];
                pmat[i][j] = UnitMonomial::new(1, v.clone()).to_laurent();
                pmat[j][i] = UnitMonomial::new(1, v.iter().map(|x| -x).collect()).to_laurent();
            }
        }
        Self::new(ring, pmat)
    }

    /// Commutation data of a presentation without tails; all generators,
    /// polynomial or not, become torus generators.
    pub fn from_presentation(p: &Presentation<ParamRing>) -> Result<Self> {
        if p.has_tails() {
            return Err(Error::Unsupported("torus data needs a presentation without tails".into()));
        }
        let n = p.ngens();
        let pmat = (0..n).map(|i| (0..n).map(|j| p.commutation(i, j).clone()).collect()).collect();
        Self::new(p.ring().clone(), pmat)
    }

    /// The torus itself as a presentation with invertible generators `Y1..Yn`.
    pub fn to_presentation(&self) -> Result<Presentation<ParamRing>> {
        let mut b = PresentationBuilder::new(format!("torus({})", self.rank()), self.ring.clone());
        for i in 1..=self.rank() {
            b.generator(format!("Y{i}"), GenKind::Laurent)?;
        }
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                b.commute(i, j, self.p(i, j).to_laurent())?;
            }
        }
        b.build()
    }

    pub fn ring(&self) -> &ParamRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.pmat.len()
    }

    pub fn p(&self, i: usize, j: usize) -> &UnitMonomial {
        &self.pmat[i][j]
    }

    fn check_signs(&self) -> Result<()> {
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if self.pmat[i][j].sign() < 0 {
                    return Err(Error::Unsupported(format!(
                        "p_{}{} has sign -1; specialize -1 downstream instead",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// `M_k[i][j] = v_ij[k]` for each parameter `k`.
    pub fn exponent_matrices(&self) -> Vec<IntMatrix> {
        let n = self.rank();
        (0..self.ring.nvars())
            .map(|k| {
                let rows: Vec<Vec<i64>> =
                    (0..n).map(|i| (0..n).map(|j| self.pmat[i][j].exponents()[k]).collect()).collect();
                IntMatrix::from_rows(&rows)
            })
            .collect()
    }
}

/// `σ` with `Y^a·Y^b = σ·Y^{a+b}`: `σ = ∏_{i>j} p_ij^{a_i b_j}`.
pub fn torus_normal_scalar(t: &TorusPresentation, a: &[i64], b: &[i64]) -> UnitMonomial {
    let n = t.rank();
    let mut s = UnitMonomial::one(t.ring.nvars());
    for i in 0..n {
        for j in 0..i {
            let e = a[i] * b[j];
            if e != 0 {
                s = s.mul(&t.p(i, j).pow(e));
            }
        }
    }
    s
}

/// A subgroup of `Z^n`, basis columns in Hermite form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSubgroup {
    ambient: usize,
    basis: IntMatrix,
}

impl LatticeSubgroup {
    pub fn from_generators(ambient: usize, gens: &IntMatrix) -> Self {
        assert_eq!(gens.rows(), ambient);
        LatticeSubgroup { ambient, basis: hermite_basis(gens) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn is_trivial(&self) -> bool {
        self.rank() == 0
    }

    pub fn contains(&self, m: &[i64]) -> bool {
        let mut cols = self.basis.columns_i64();
        cols.push(m.to_vec());
        hermite_basis(&IntMatrix::from_columns(self.ambient, &cols)) == self.basis
    }

    /// Same subgroup, compared through the Hermite basis.
    pub fn spans_same(&self, gens: &IntMatrix) -> bool {
        hermite_basis(gens) == self.basis
    }
}

/// `G = {m : ∏_j p_ij^{m_j} = 1 for all i}`; `Y^m` is central iff `m ∈ G`.
pub fn center_lattice(t: &TorusPresentation) -> Result<LatticeSubgroup> {
    t.check_signs()?;
    let n = t.rank();
    let nv = t.ring.nvars();
    let mut rows = Vec::with_capacity(n * nv);
    for i in 0..n {
        for k in 0..nv {
            rows.push((0..n).map(|j| t.p(i, j).exponents()[k]).collect::<Vec<i64>>());
        }
    }
    let basis = if rows.is_empty() {
        IntMatrix::identity(n)
    } else {
        integer_kernel(&IntMatrix::from_rows(&rows))
    };
    Ok(LatticeSubgroup { ambient: n, basis: hermite_basis(&basis) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterDescription {
    pub lattice: LatticeSubgroup,
    /// Unimodular; the last `rank(G)` columns span `G`.
    pub change_of_basis: IntMatrix,
    /// Per parameter, `Wᵀ M_k W`: commutation exponents between the new
    /// generators `Y'_a = Y^{w_a}`. Empty when no torus was given.
    pub quotient_form: Vec<IntMatrix>,
}

impl CenterDescription {
    /// Positions of the central generators in the new basis.
    pub fn central_positions(&self) -> std::ops::Range<usize> {
        let n = self.lattice.ambient();
        n - self.lattice.rank()..n
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Completes a basis of `G` to a basis of `Z^n`, `G`'s basis last. Standard
/// vectors are tried first so already-compatible cases keep the identity;
/// otherwise the Smith form supplies a complement.
pub fn compatible_basis(g: &LatticeSubgroup) -> Result<CenterDescription> {
    let n = g.ambient();
    let r = g.rank();
    let b = g.basis();
    if r > 0 {
        let smith = smith_normal_form(b);
        if smith.invariant_factors().iter().any(|d| d.abs() != BigInt::from(1)) || smith.invariant_factors().len() != r {
            return Err(Error::NotDirectSummand(format!(
                "invariant factors {:?}",
                smith.invariant_factors().iter().map(|d| d.to_string()).collect::<Vec<_>>()
            )));
        }
    }
    let gcols = b.columns_i64();
    let mut w: Option<IntMatrix> = None;
    for idx in subsets(n, n - r) {
        let mut cols: Vec<Vec<i64>> = idx
            .iter()
            .map(|&i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
        cols.extend(gcols.iter().cloned());
        let m = IntMatrix::from_columns(n, &cols);
        if determinant(&m).abs() == BigInt::from(1) {
            w = Some(m);
            break;
        }
    }
    let mut w = match w {
        Some(w) => w,
        None => {
            // left·B·right = [I_r; 0], so the first r columns of left^{-1}
            // span G and the rest complete them
            let smith = smith_normal_form(b);
            let linv = unimodular_inverse(&smith.left);
            let mut order: Vec<usize> = (r..n).collect();
            order.extend(0..r);
            linv.select_columns(&order)
        }
    };
    if determinant(&w).is_negative() {
        // only complement columns are flipped; G keeps its basis
        let c = if r < n { 0 } else { n - 1 };
        for i in 0..n {
            let v = -w[(i, c)].clone();
            w[(i, c)] = v;
        }
    }
    debug_assert!(!determinant(&w).is_zero());
    Ok(CenterDescription { lattice: g.clone(), change_of_basis: w, quotient_form: Vec::new() })
}

/// Center lattice, compatible basis and the commutation data in that basis.
pub fn describe_center(t: &TorusPresentation) -> Result<CenterDescription> {
    let g = center_lattice(t)?;
    let mut d = compatible_basis(&g)?;
    let w = &d.change_of_basis;
    d.quotient_form = t.exponent_matrices().iter().map(|m| w.transpose().mul(m).mul(w)).collect();
    Ok(d)
}

/// Structure at `q = ζ_N` when every `p_ij` is a power of one parameter `q`:
/// the lattice `K = {m : Σ_j m_j v_ij ≡ 0 mod N}` of central exponents and
/// the index `[Z^n : K]`, the rank of the torus over its center.
pub fn root_of_unity_structure(t: &TorusPresentation, order: u32) -> Result<(LatticeSubgroup, BigInt)> {
    if order == 0 {
        return Err(Error::Specialization("root of unity order must be at least 1".into()));
    }
    t.check_signs()?;
    let n = t.rank();
    let nv = t.ring.nvars();
    let used: Vec<usize> = (0..nv)
        .filter(|&k| (0..n).any(|i| (0..n).any(|j| t.p(i, j).exponents()[k] != 0)))
        .collect();
    if used.len() > 1 {
        return Err(Error::Unsupported(
            "root-of-unity structure needs every p_ij to be a power of a single parameter".into(),
        ));
    }
    let k = used.first().copied();
    // V m + N z = 0, projected to m
    let mut rows = Vec::new();
    for i in 0..n {
        let mut row: Vec<i64> = (0..n).map(|j| k.map_or(0, |k| t.p(i, j).exponents()[k])).collect();
        let mut z = vec![0; n];
        z[i] = i64::from(order);
        row.extend(z);
        rows.push(row);
    }
    let kernel = if n == 0 { IntMatrix::zeros(0, 0) } else { integer_kernel(&IntMatrix::from_rows(&rows)) };
    let proj: Vec<Vec<i64>> = kernel.columns_i64().into_iter().map(|c| c[..n].to_vec()).collect();
    let gens = if proj.is_empty() { IntMatrix::zeros(n, 0) } else { IntMatrix::from_columns(n, &proj) };
    let lattice = LatticeSubgroup::from_generators(n, &gens);
    if lattice.rank() != n {
        return Err(Error::Internal("central lattice at a root of unity must have full rank".into()));
    }
    let index = determinant(lattice.basis()).abs();
    Ok((lattice, index))
}
