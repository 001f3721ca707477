//! Complexity verdicts for the orientation and completion problems of `F`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forbidden::{ForbiddenSet, Kf};
use crate::relation::{build_pn, build_qn, tuple_to_bools, AffineRep, Op};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Problem {
    Orientation,
    Completion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// Every input is a yes-instance.
    TrivialAllOrientable,
    /// Yes iff the input has no clique on this many vertices.
    CliqueCheck(usize),
    /// Solvable through the linear systems of the affine relations.
    PolyAffine,
    NPComplete,
}

impl Verdict {
    pub fn is_polynomial(self) -> bool {
        self != Verdict::NPComplete
    }
}

/// Three members of `P_n` whose minority is not a member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorityWitness {
    pub n: usize,
    pub arity: usize,
    pub tuples: [String; 3],
    pub image: String,
    #[serde(skip)]
    pub raw: [u64; 3],
}

impl MinorityWitness {
    fn new(n: usize, arity: usize, raw: [u64; 3]) -> Self {
        let show = |t: u64| -> String {
            tuple_to_bools(arity, t)
                .into_iter()
                .map(|b| if b { '1' } else { '0' })
                .collect()
        };
        MinorityWitness {
            n,
            arity,
            tuples: raw.map(show),
            image: show(raw[0] ^ raw[1] ^ raw[2]),
            raw,
        }
    }

    /// Re-checks the witness against a freshly built `P_n`.
    pub fn verify(&self, forbidden: &ForbiddenSet) -> Result<bool> {
        let pn = build_pn(forbidden, self.n)?;
        let [a, b, c] = self.raw;
        Ok(pn.contains(a) && pn.contains(b) && pn.contains(c) && !pn.contains(a ^ b ^ c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    EmptyForbiddenSet,
    NoTransitiveMember,
    /// No F-free tournament on `n_f` vertices.
    NoFreeTournament {
        n_f: usize,
    },
    /// `(n, representation of P_n)` for `n = 2..=m_F`.
    AffineReps(Vec<(usize, AffineRep)>),
    MinorityViolation(MinorityWitness),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineDim {
    pub n: usize,
    pub arity: usize,
    /// `None` when `P_n` is empty.
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub problem: Problem,
    pub verdict: Verdict,
    #[serde(rename = "nF")]
    pub n_f: Option<usize>,
    #[serde(rename = "kF")]
    pub k_f: Option<Kf>,
    #[serde(rename = "mF")]
    pub m_f: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MinorityWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub affine_dims: Option<Vec<AffineDim>>,
    pub equivalence_case: Option<u8>,
    pub evidence: Evidence,
}

/// Either affine representations of every `P_n`, or the first violation.
fn minority_scan(forbidden: &ForbiddenSet) -> Result<std::result::Result<Vec<(usize, AffineRep)>, MinorityWitness>> {
    let mut reps = Vec::new();
    if let Some(m) = forbidden.m_f() {
        for n in 2..=m {
            let pn = build_pn(forbidden, n)?;
            if let Some((a, b, c)) = pn.minority_witness() {
                return Ok(Err(MinorityWitness::new(n, pn.arity(), [a, b, c])));
            }
            reps.push((n, pn.affine_representation()?));
        }
    }
    Ok(Ok(reps))
}

fn report(
    forbidden: &ForbiddenSet,
    problem: Problem,
    verdict: Verdict,
    evidence: Evidence,
) -> Result<ClassificationReport> {
    let witness = match &evidence {
        Evidence::MinorityViolation(w) => Some(w.clone()),
        _ => None,
    };
    let affine_dims = match &evidence {
        Evidence::AffineReps(reps) => Some(
            reps.iter()
                .map(|(n, rep)| AffineDim {
                    n: *n,
                    arity: rep.arity,
                    dim: rep.dimension(),
                })
                .collect(),
        ),
        _ => None,
    };
    let equivalence_case = if forbidden.is_empty() {
        None
    } else {
        Some(equivalence_report(forbidden)?)
    };
    Ok(ClassificationReport {
        problem,
        verdict,
        n_f: forbidden.n_f(),
        k_f: forbidden.k_f(),
        m_f: forbidden.m_f(),
        witness,
        affine_dims,
        equivalence_case,
        evidence,
    })
}

/// Orientation problem: no transitive member, then no F-free tournament on
/// `n_F` vertices, then minority on every `P_n`, else NP-complete.
pub fn classify_orientation(forbidden: &ForbiddenSet) -> Result<ClassificationReport> {
    let Some(n_f) = forbidden.n_f() else {
        let evidence = if forbidden.is_empty() {
            Evidence::EmptyForbiddenSet
        } else {
            Evidence::NoTransitiveMember
        };
        return report(forbidden, Problem::Orientation, Verdict::TrivialAllOrientable, evidence);
    };
    if forbidden.free_classes(n_f)?.is_empty() {
        return report(
            forbidden,
            Problem::Orientation,
            Verdict::CliqueCheck(n_f),
            Evidence::NoFreeTournament { n_f },
        );
    }
    match minority_scan(forbidden)? {
        Ok(reps) => report(
            forbidden,
            Problem::Orientation,
            Verdict::PolyAffine,
            Evidence::AffineReps(reps),
        ),
        Err(w) => report(
            forbidden,
            Problem::Orientation,
            Verdict::NPComplete,
            Evidence::MinorityViolation(w),
        ),
    }
}

/// Completion problem: polynomial iff every `P_n` is minority-closed.
pub fn classify_completion(forbidden: &ForbiddenSet) -> Result<ClassificationReport> {
    if forbidden.is_empty() {
        return report(
            forbidden,
            Problem::Completion,
            Verdict::TrivialAllOrientable,
            Evidence::EmptyForbiddenSet,
        );
    }
    match minority_scan(forbidden)? {
        Ok(reps) => report(
            forbidden,
            Problem::Completion,
            Verdict::PolyAffine,
            Evidence::AffineReps(reps),
        ),
        Err(w) => report(
            forbidden,
            Problem::Completion,
            Verdict::NPComplete,
            Evidence::MinorityViolation(w),
        ),
    }
}

pub fn classify(forbidden: &ForbiddenSet, problem: Problem) -> Result<ClassificationReport> {
    match problem {
        Problem::Orientation => classify_orientation(forbidden),
        Problem::Completion => classify_completion(forbidden),
    }
}

/// Which of the three orientation/completion relationships holds:
/// 1 = transitive member and some F-free tournament on `n_F` vertices,
/// 2 = transitive member and no member smaller than `n_F`,
/// 3 = otherwise.
pub fn equivalence_report(forbidden: &ForbiddenSet) -> Result<u8> {
    if forbidden.is_empty() {
        return Err(Error::Contract("equivalence case needs a nonempty F".into()));
    }
    let Some(n_f) = forbidden.n_f() else {
        return Ok(3);
    };
    if !forbidden.free_classes(n_f)?.is_empty() {
        Ok(1)
    } else if forbidden.members().iter().all(|t| t.n() >= n_f) {
        Ok(2)
    } else {
        Ok(3)
    }
}

/// Minority verdict computed on the triangle-parity relations `Q_n` instead of `P_n`.
/// Only meaningful when `F` is closed under switching.
pub fn qn_minority_verdict(forbidden: &ForbiddenSet) -> Result<Verdict> {
    if !forbidden.is_switch_closed() {
        return Err(Error::Contract("Q_n classification needs a switch-closed F".into()));
    }
    let Some(m) = forbidden.m_f() else {
        return Ok(Verdict::TrivialAllOrientable);
    };
    for n in 3..=m {
        if !build_qn(forbidden, n)?.preserved_by(Op::Minority) {
            return Ok(Verdict::NPComplete);
        }
    }
    Ok(Verdict::PolyAffine)
}
