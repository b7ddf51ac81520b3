//! Builders for the standard families.

use std::fmt;

use crate::error::{Error, Result};
use crate::params::{Laurent, ParamRing};
use crate::presentation::{GenKind, Presentation, PresentationBuilder};
use crate::ring::CoeffRing;

const MAX_SIZE: usize = 9;

/// A builtin family tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `x1·x2 = q·x2·x1`.
    QuantumPlane,
    /// `x_i·x_j = q_ij·x_j·x_i`, no tails.
    QuantumAffine(usize),
    /// Laurent version of the quantum affine space.
    QuantumTorus(usize),
    /// Multiparameter quantum Weyl algebra in PBW order `y_1..y_n, x_n..x_1`.
    QuantumWeyl(usize),
    /// Multiparameter quantum `n×n` matrices with `c = h²`.
    QuantumMatrices(usize),
    /// `x·y = q·y·x + f(q)`; `f` is a Laurent polynomial in the single parameter `q`.
    Rank2(Laurent),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::QuantumPlane => write!(f, "quantum_plane"),
            Family::QuantumAffine(n) => write!(f, "quantum_affine({n})"),
            Family::QuantumTorus(n) => write!(f, "quantum_torus({n})"),
            Family::QuantumWeyl(n) => write!(f, "quantum_weyl({n})"),
            Family::QuantumMatrices(n) => write!(f, "quantum_matrices({n})"),
            Family::Rank2(p) => write!(f, "rank2({})", p.display_with(&["q".to_string()])),
        }
    }
}

impl Family {
    /// Parses tags like `quantum_weyl(2)` or `rank2(q^2 - 5*q + 6)`.
    pub fn parse(tag: &str) -> Result<Family> {
        let tag = tag.trim();
        let (name, arg) = match tag.find('(') {
            Some(open) => {
                let close = tag
                    .rfind(')')
                    .filter(|&c| c > open && c == tag.len() - 1)
                    .ok_or_else(|| Error::FamilyArguments(format!("unbalanced parentheses in `{tag}`")))?;
                (tag[..open].trim(), Some(tag[open + 1..close].trim()))
            }
            None => (tag, None),
        };
        let size = |arg: Option<&str>| -> Result<usize> {
            let a = arg.ok_or_else(|| Error::FamilyArguments(format!("`{name}` needs a size")))?;
            a.parse::<usize>()
                .map_err(|_| Error::FamilyArguments(format!("`{a}` is not a size")))
        };
        match name {
            "quantum_plane" if arg.is_none() => Ok(Family::QuantumPlane),
            "quantum_affine" => Ok(Family::QuantumAffine(size(arg)?)),
            "quantum_torus" => Ok(Family::QuantumTorus(size(arg)?)),
            "quantum_weyl" => Ok(Family::QuantumWeyl(size(arg)?)),
            "quantum_matrices" => Ok(Family::QuantumMatrices(size(arg)?)),
            "rank2" => {
                let a = arg.ok_or_else(|| Error::FamilyArguments("rank2 needs f(q)".into()))?;
                let ring = ParamRing::new(["q"]);
                let f = crate::text::parse_scalar(&ring, a)
                    .map_err(|e| Error::FamilyArguments(format!("f(q): {e}")))?;
                Ok(Family::Rank2(f))
            }
            "quantum_plane" => Err(Error::FamilyArguments("quantum_plane takes no arguments".into())),
            _ => Err(Error::UnknownFamily(name.to_string())),
        }
    }
}

fn check_size(n: usize, what: &str) -> Result<()> {
    if (1..=MAX_SIZE).contains(&n) {
        Ok(())
    } else {
        Err(Error::FamilyArguments(format!("{what} size must lie in 1..={MAX_SIZE}, got {n}")))
    }
}

fn q_name(i: usize, j: usize) -> String {
    format!("q{i}{j}")
}

fn q_names(n: usize) -> Vec<String> {
    let mut v = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            v.push(q_name(i, j));
        }
    }
    v
}

/// `q_ij` for any `i, j` (1-based) with `q_ji = q_ij^{-1}`, `q_ii = 1`.
fn qv(ring: &ParamRing, i: usize, j: usize) -> Laurent {
    use std::cmp::Ordering::*;
    match i.cmp(&j) {
        Less => ring.var(&q_name(i, j), 1),
        Greater => ring.var(&q_name(j, i), -1),
        Equal => ring.one(),
    }
}

pub fn builtin_presentation(family: &Family) -> Result<Presentation<ParamRing>> {
    match family {
        Family::QuantumPlane => quantum_plane(),
        Family::QuantumAffine(n) => quantum_affine(*n, GenKind::Poly),
        Family::QuantumTorus(n) => quantum_affine(*n, GenKind::Laurent),
        Family::QuantumWeyl(n) => quantum_weyl(*n),
        Family::QuantumMatrices(n) => quantum_matrices(*n),
        Family::Rank2(f) => rank2(f),
    }
}

fn quantum_plane() -> Result<Presentation<ParamRing>> {
    let ring = ParamRing::new(["q"]);
    let mut b = PresentationBuilder::new("quantum_plane", ring.clone());
    let x1 = b.generator("x1", GenKind::Poly)?;
    let x2 = b.generator("x2", GenKind::Poly)?;
    b.commute(x1, x2, ring.var("q", 1))?;
    b.build()
}

fn quantum_affine(n: usize, kind: GenKind) -> Result<Presentation<ParamRing>> {
    check_size(n, "quantum affine")?;
    let ring = ParamRing::new(q_names(n));
    let (name, prefix) = match kind {
        GenKind::Poly => (format!("quantum_affine({n})"), "x"),
        GenKind::Laurent => (format!("quantum_torus({n})"), "k"),
    };
    let mut b = PresentationBuilder::new(name, ring.clone());
    for i in 1..=n {
        b.generator(format!("{prefix}{i}"), kind)?;
    }
    for i in 0..n {
        for j in i + 1..n {
            b.commute(i, j, qv(&ring, i + 1, j + 1))?;
        }
    }
    b.build()
}

/// Generators `y_1..y_n, x_n..x_1` with
/// `y_i x_i = 1 + c^{-1} x_i y_i + (c^{-1} - 1) Σ_{α>i} x_α y_α`.
fn quantum_weyl(n: usize) -> Result<Presentation<ParamRing>> {
    check_size(n, "quantum Weyl")?;
    let mut names = vec!["c".to_string()];
    names.extend(q_names(n));
    let ring = ParamRing::new(names);
    let c = ring.var("c", 1);
    let cinv = ring.var("c", -1);
    // p_ij = c·q_ij^{-1} for i < j, p_ji = p_ij^{-1}
    let pv = |i: usize, j: usize| -> Laurent {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => c.mul(&qv(&ring, i, j).unit_inverse().unwrap()),
            Greater => cinv.mul(&qv(&ring, j, i)),
            Equal => ring.one(),
        }
    };
    let mut b = PresentationBuilder::new(format!("quantum_weyl({n})"), ring.clone());
    let y: Vec<usize> = (1..=n)
        .map(|i| b.generator(format!("y{i}"), GenKind::Poly))
        .collect::<Result<_>>()?;
    let mut x = vec![0; n + 1];
    for i in (1..=n).rev() {
        x[i] = b.generator(format!("x{i}"), GenKind::Poly)?;
    }
    let y = |i: usize| y[i - 1];
    for i in 1..=n {
        for j in i + 1..=n {
            b.commute(y(i), y(j), pv(i, j))?;
            // x_j x_i = q_ij x_i x_j and x_j precedes x_i
            b.commute(x[j], x[i], qv(&ring, i, j))?;
        }
        for j in 1..=n {
            let u = match j.cmp(&i) {
                std::cmp::Ordering::Greater => pv(j, i),
                std::cmp::Ordering::Less => qv(&ring, i, j),
                std::cmp::Ordering::Equal => cinv.clone(),
            };
            b.commute(y(i), x[j], u)?;
        }
        let mut tail = vec![(ring.one(), Vec::new())];
        let k = cinv.sub(&ring.one());
        for a in i + 1..=n {
            tail.push((k.clone(), vec![(x[a], 1), (y(a), 1)]));
        }
        b.tail(y(i), x[i], tail)?;
        b.qskew(y(i), cinv.clone())?;
    }
    // τ_{y_i}: the x-weights below, y-weights their inverses
    for i in 1..=n {
        for j in 1..=n {
            let wx = match j.cmp(&i) {
                std::cmp::Ordering::Greater => pv(j, i),
                std::cmp::Ordering::Less => qv(&ring, i, j),
                std::cmp::Ordering::Equal => cinv.clone(),
            };
            b.weight(y(i), y(j), wx.unit_inverse().unwrap())?;
            b.weight(y(i), x[j], wx)?;
        }
    }
    // τ_{x_h}: conjugation scalars on the x's, inverses on the y's
    for h in 1..=n {
        for j in 1..=n {
            let wx = qv(&ring, j, h);
            b.weight(x[h], x[j], wx.clone())?;
            b.weight(x[h], y(j), wx.unit_inverse().unwrap())?;
        }
    }
    b.build()
}

/// Entries `a_ti` in row-major order. With `c = h²`, `p_ts = c·q_ts^{-1}`
/// for `t < s`; for `a_ti` before `a_sj`
///
/// ```text
/// a_ti a_sj = q_ts q_ij^{-1} a_sj a_ti + (p_ts^{-1} - q_ij) a_si a_tj   (t < s, i < j)
/// a_ti a_sj = p_ts^{-1} q_ij^{-1} a_sj a_ti                              otherwise
/// ```
fn quantum_matrices(n: usize) -> Result<Presentation<ParamRing>> {
    check_size(n, "quantum matrices")?;
    let mut names = vec!["h".to_string()];
    names.extend(q_names(n));
    let ring = ParamRing::new(names);
    let h = ring.var("h", 1);
    let hinv = ring.var("h", -1);
    let c = ring.var("h", 2);
    let pv = |t: usize, s: usize| -> Laurent {
        use std::cmp::Ordering::*;
        match t.cmp(&s) {
            Less => c.mul(&qv(&ring, t, s).unit_inverse().unwrap()),
            Greater => ring.var("h", -2).mul(&qv(&ring, s, t)),
            Equal => ring.one(),
        }
    };
    let inv = |a: &Laurent| a.unit_inverse().unwrap();
    let mut b = PresentationBuilder::new(format!("quantum_matrices({n})"), ring.clone());
    let idx = |t: usize, i: usize| (t - 1) * n + (i - 1);
    for t in 1..=n {
        for i in 1..=n {
            b.generator(format!("a{t}{i}"), GenKind::Poly)?;
        }
    }
    let entries: Vec<(usize, usize)> =
        (1..=n).flat_map(|t| (1..=n).map(move |i| (t, i))).collect();
    for (ka, &(t, i)) in entries.iter().enumerate() {
        for &(s, j) in &entries[ka + 1..] {
            if t < s && i < j {
                let u = qv(&ring, t, s).mul(&inv(&qv(&ring, i, j)));
                b.commute(idx(t, i), idx(s, j), u)?;
                let coef = inv(&pv(t, s)).sub(&qv(&ring, i, j));
                b.tail(idx(t, i), idx(s, j), vec![(coef, vec![(idx(s, i), 1), (idx(t, j), 1)])])?;
            } else {
                let u = inv(&pv(t, s)).mul(&inv(&qv(&ring, i, j)));
                b.commute(idx(t, i), idx(s, j), u)?;
            }
        }
    }
    // τ_{a_{t0 i0}} scales row s by P(s) and column j by Q(j)
    for &(t0, i0) in &entries {
        let se_block = t0 < n && i0 < n;
        let rho = |s: usize| -> Laurent {
            if !se_block || s < t0 {
                ring.one()
            } else if s == t0 {
                hinv.clone()
            } else {
                h.clone()
            }
        };
        let sigma = |j: usize| -> Laurent {
            if !se_block {
                ring.one()
            } else if j <= i0 {
                hinv.clone()
            } else {
                h.clone()
            }
        };
        for &(s, j) in &entries {
            let w = inv(&pv(t0, s)).mul(&rho(s)).mul(&inv(&qv(&ring, i0, j))).mul(&sigma(j));
            b.weight(idx(t0, i0), idx(s, j), w)?;
        }
        if se_block {
            b.qskew(idx(t0, i0), c.clone())?;
        }
    }
    b.build()
}

fn rank2(f: &Laurent) -> Result<Presentation<ParamRing>> {
    let ring = ParamRing::new(["q"]);
    if f.nvars() != 1 {
        return Err(Error::FamilyArguments("f must be a Laurent polynomial in q alone".into()));
    }
    let q = ring.var("q", 1);
    let name = Family::Rank2(f.clone()).to_string();
    let mut b = PresentationBuilder::new(name, ring.clone());
    let x = b.generator("x", GenKind::Poly)?;
    let y = b.generator("y", GenKind::Poly)?;
    b.commute(x, y, q.clone())?;
    if !f.is_zero() {
        b.tail(x, y, vec![(f.clone(), Vec::new())])?;
    }
    b.qskew(x, q.clone())?;
    b.weight(x, x, ring.var("q", -1))?;
    b.weight(x, y, q.clone())?;
    // any diagonal extension works for the last generator; this one keeps
    // x·y homogeneous of weight one
    b.weight(y, x, ring.var("q", -1))?;
    b.weight(y, y, q)?;
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl1_tail() {
        let p = builtin_presentation(&Family::QuantumWeyl(1)).unwrap();
        assert_eq!(p.gen_name(0), "y1");
        assert_eq!(p.gen_name(1), "x1");
        assert_eq!(p.format_elem(&p.tail_element(0, 1)), "1");
        assert_eq!(p.commutation(0, 1), &p.ring().var("c", -1));
    }

    #[test]
    fn weyl2_tail_normalized() {
        // c + (1 - c)·y2·x2
        let p = builtin_presentation(&Family::QuantumWeyl(2)).unwrap();
        let r = p.ring().clone();
        let (y1, y2, x2, x1) = (0, 1, 2, 3);
        assert_eq!(p.gen_name(x1), "x1");
        let t = p.tail_element(y1, x1);
        let expect = p
            .word(&[(y2, 1), (x2, 1)])
            .unwrap()
            .scale(&p, &r.one().sub(&r.var("c", 1)))
            .add(&p, &crate::normalform::NfElement::scalar(&p, r.var("c", 1)))
            .unwrap();
        assert_eq!(t, expect);
    }

    #[test]
    fn matrices2_data() {
        let p = builtin_presentation(&Family::QuantumMatrices(2)).unwrap();
        let r = p.ring().clone();
        let q = |e| r.var("q12", e);
        let h = |e| r.var("h", e);
        assert_eq!(p.commutation(0, 1), &q(-1));
        assert_eq!(p.commutation(0, 2), &q(1).mul(&h(-2)));
        assert_eq!(p.commutation(0, 3), &r.one());
        assert_eq!(p.commutation(1, 2), &q(2).mul(&h(-2)));
        assert_eq!(p.commutation(1, 3), &q(1).mul(&h(-2)));
        assert_eq!(p.commutation(2, 3), &q(-1));
        let tail = p.word(&[(1, 1), (2, 1)]).unwrap().scale(&p, &q(-1).mul(&r.one().sub(&h(2))));
        assert_eq!(p.tail_element(0, 3), tail);
        assert_eq!(p.qskew(0), &h(2));
        assert_eq!(p.qskew(1), &r.one());
    }

    #[test]
    fn parse_tags() {
        assert_eq!(Family::parse("quantum_plane").unwrap(), Family::QuantumPlane);
        assert_eq!(Family::parse(" quantum_weyl(3) ").unwrap(), Family::QuantumWeyl(3));
        assert!(matches!(Family::parse("weyl(2)"), Err(Error::UnknownFamily(_))));
        assert!(matches!(Family::parse("quantum_weyl(x)"), Err(Error::FamilyArguments(_))));
        let f = Family::parse("rank2(q^2 - 5*q + 6)").unwrap();
        assert_eq!(f.to_string(), "rank2(q^2 - 5*q + 6)");
        assert!(matches!(Family::parse("rank2(q + c)"), Err(Error::FamilyArguments(_))));
    }

    #[test]
    fn sizes_checked() {
        assert!(builtin_presentation(&Family::QuantumAffine(0)).is_err());
        assert!(builtin_presentation(&Family::QuantumWeyl(10)).is_err());
    }
}
