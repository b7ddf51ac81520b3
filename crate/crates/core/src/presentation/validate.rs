//! Machine checks of well-formedness and Conditions Q1–Q3.

use std::fmt;

use crate::normalform::{skew_action, NfElement, SkewKind};
use crate::presentation::Presentation;
use crate::ring::{CoeffRing, TorsionVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    WF,
    Q1,
    Q2,
    Q3,
}

impl Condition {
    pub const ALL: [Condition; 4] = [Condition::WF, Condition::Q1, Condition::Q2, Condition::Q3];
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::WF => "WF",
            Condition::Q1 => "Q1",
            Condition::Q2 => "Q2",
            Condition::Q3 => "Q3",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Failure,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub condition: Condition,
    pub severity: Severity,
    pub location: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Failure => "FAIL",
            Severity::Warning => "warning",
        };
        write!(f, "{} {} at {}: {}", self.condition, sev, self.location, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub passed: bool,
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    fn from_findings(findings: Vec<Finding>) -> Self {
        let passed = findings.iter().all(|f| f.severity != Severity::Failure);
        ValidationReport { passed, findings }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Failure)
    }

    /// No failure recorded against `c`.
    pub fn holds(&self, c: Condition) -> bool {
        self.failures().all(|f| f.condition != c)
    }

    /// `WF OK`, `Q1 FAIL (2)`, ... one entry per condition.
    pub fn summary(&self) -> Vec<String> {
        Condition::ALL
            .iter()
            .map(|&c| {
                let n = self.failures().filter(|f| f.condition == c).count();
                if n == 0 {
                    format!("{c} OK")
                } else {
                    format!("{c} FAIL ({n})")
                }
            })
            .collect()
    }
}

/// Runs WF, Q1, Q2, Q3 in that order. Failures are findings, never errors.
pub fn validate_presentation<R: CoeffRing>(p: &Presentation<R>) -> ValidationReport {
    let mut out = Vec::new();
    check_wf(p, &mut out);
    check_q1(p, &mut out);
    check_q2(p, &mut out);
    check_q3(p, &mut out);
    ValidationReport::from_findings(out)
}

fn pair(p: &Presentation<impl CoeffRing>, a: usize, b: usize) -> String {
    format!("({}, {})", p.gen_name(a), p.gen_name(b))
}

fn fail(c: Condition, location: String, message: String) -> Finding {
    Finding { condition: c, severity: Severity::Failure, location, message }
}

fn check_wf<R: CoeffRing>(p: &Presentation<R>, out: &mut Vec<Finding>) {
    let ring = p.ring();
    for (&(a, b), tail) in p.tails() {
        if a >= b || b >= p.npoly() {
            out.push(fail(Condition::WF, pair(p, a, b), "tail on a pair that is not (x_i, x_j), i < j".into()));
            continue;
        }
        for m in tail.keys() {
            if let Some(g) = (0..=a).find(|&g| m[g] != 0) {
                out.push(fail(
                    Condition::WF,
                    pair(p, a, b),
                    format!("tail mentions `{}`, outside the subalgebra after `{}`", p.gen_name(g), p.gen_name(a)),
                ));
                break;
            }
            if let Some(g) = (0..p.npoly()).find(|&g| m[g] < 0) {
                out.push(fail(
                    Condition::WF,
                    pair(p, a, b),
                    format!("negative power of polynomial generator `{}`", p.gen_name(g)),
                ));
                break;
            }
        }
    }
    for i in 0..p.npoly() {
        for j in i + 1..p.ngens() {
            if p.weight(i, j) != p.commutation(i, j) {
                out.push(fail(
                    Condition::WF,
                    format!("τ_{}({})", p.gen_name(i), p.gen_name(j)),
                    format!(
                        "weight {} differs from commutation scalar {}",
                        ring.format(p.weight(i, j)),
                        ring.format(p.commutation(i, j))
                    ),
                ));
            }
        }
    }
}

fn weight_check<R: CoeffRing>(
    p: &Presentation<R>,
    h: usize,
    r: &NfElement<R>,
    expected: &R::Elem,
) -> Option<String> {
    let ring = p.ring();
    let tau = match skew_action(p, h, SkewKind::Tau, r) {
        Ok(t) => t,
        Err(e) => return Some(e.to_string()),
    };
    let want = r.scale(p, expected);
    if tau == want {
        None
    } else {
        Some(format!(
            "τ_{}(r) = {} but the required eigenvalue {} gives {}",
            p.gen_name(h),
            p.format_elem(&tau),
            ring.format(expected),
            p.format_elem(&want)
        ))
    }
}

/// `τ_i(r_ij) = q_i^{-1}·λ_{i,x_j}·r_ij`.
fn check_q1<R: CoeffRing>(p: &Presentation<R>, out: &mut Vec<Finding>) {
    let ring = p.ring();
    for &(i, j) in p.tails().keys() {
        if i >= p.npoly() {
            continue;
        }
        let r = p.tail_element(i, j);
        let Some(qinv) = ring.unit_inverse(p.qskew(i)) else {
            out.push(fail(Condition::Q1, p.gen_name(i).to_string(), "q_i is not a unit".into()));
            continue;
        };
        let expected = ring.mul(&qinv, p.weight(i, j));
        if let Some(msg) = weight_check(p, i, &r, &expected) {
            out.push(fail(Condition::Q1, pair(p, i, j), msg));
        }
    }
}

fn check_q2<R: CoeffRing>(p: &Presentation<R>, out: &mut Vec<Finding>) {
    let ring = p.ring();
    let mut units = Vec::new();
    for a in 0..p.ngens() {
        for b in a + 1..p.ngens() {
            units.push(p.commutation(a, b).clone());
        }
    }
    for i in 0..p.npoly() {
        units.push(p.qskew(i).clone());
        for g in 0..p.ngens() {
            units.push(p.weight(i, g).clone());
        }
    }
    units.sort();
    units.dedup();
    let negative: Vec<String> = units
        .iter()
        .filter(|u| ring.format(u).starts_with('-'))
        .map(|u| ring.format(u))
        .collect();
    match ring.torsion_verdict(&units) {
        TorsionVerdict::TorsionFree => {
            if !negative.is_empty() {
                out.push(Finding {
                    condition: Condition::Q2,
                    severity: Severity::Warning,
                    location: "Γ".into(),
                    message: format!("torsion risk: negative scalars {}", negative.join(", ")),
                });
            }
        }
        TorsionVerdict::Torsion(why) => {
            out.push(fail(Condition::Q2, "Γ".into(), format!("Γ has torsion: {why}")));
        }
        TorsionVerdict::Undetermined(why) => out.push(Finding {
            condition: Condition::Q2,
            severity: Severity::Warning,
            location: "Γ".into(),
            message: format!("torsion not decided: {why}"),
        }),
    }
}

/// `τ_h(r_ij) = λ_{h,x_i}·λ_{h,x_j}·r_ij` for every `h`.
fn check_q3<R: CoeffRing>(p: &Presentation<R>, out: &mut Vec<Finding>) {
    let ring = p.ring();
    for &(i, j) in p.tails().keys() {
        let r = p.tail_element(i, j);
        for h in 0..p.npoly() {
            let expected = ring.mul(p.weight(h, i), p.weight(h, j));
            if let Some(msg) = weight_check(p, h, &r, &expected) {
                out.push(fail(Condition::Q3, format!("τ_{} on {}", p.gen_name(h), pair(p, i, j)), msg));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{builtin_presentation, Family};

    #[test]
    fn builtins_pass() {
        for fam in [
            Family::QuantumPlane,
            Family::QuantumAffine(3),
            Family::QuantumTorus(2),
            Family::QuantumWeyl(1),
            Family::QuantumWeyl(2),
            Family::QuantumWeyl(3),
            Family::QuantumMatrices(2),
        ] {
            let p = builtin_presentation(&fam).unwrap();
            let rep = validate_presentation(&p);
            assert!(rep.passed, "{fam}: {:?}", rep.findings);
            assert!(rep.findings.is_empty(), "{fam}: {:?}", rep.findings);
        }
    }

    #[test]
    fn tail_in_wrong_subalgebra() {
        let p = builtin_presentation(&Family::QuantumPlane).unwrap();
        let r = p.ring().clone();
        let bad = p.with_tail(0, 1, [(vec![1, 0], r.one())].into_iter().collect());
        let rep = validate_presentation(&bad);
        assert!(!rep.passed);
        assert!(!rep.holds(Condition::WF));
    }

    #[test]
    fn inhomogeneous_tail_fails_q3() {
        let p = builtin_presentation(&Family::QuantumWeyl(2)).unwrap();
        let r = p.ring().clone();
        // add x1 to the tail of (y2, x2): legal subalgebra, wrong weight
        let (y2, x2, x1) = (1, 2, 3);
        let mut t = p.tail(y2, x2).unwrap().clone();
        let mut m = vec![0; 4];
        m[x1] = 1;
        t.insert(m, r.one());
        let bad = p.with_tail(y2, x2, t);
        let rep = validate_presentation(&bad);
        assert!(rep.holds(Condition::WF));
        assert!(!rep.holds(Condition::Q3));
        assert!(!rep.passed);
    }

    #[test]
    fn validation_is_idempotent() {
        let p = builtin_presentation(&Family::QuantumMatrices(2)).unwrap();
        assert_eq!(validate_presentation(&p), validate_presentation(&p));
    }
}
