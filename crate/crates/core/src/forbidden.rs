//! Finite sets of forbidden tournaments and their derived invariants.

use std::collections::BTreeSet;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tournament::{extend_classes, iso_classes, Tournament, ENUMERATION_HARD_CAP, MAX_VERTICES};

/// Largest `k` examined when searching for `k_F`.
pub const KF_SEARCH_CAP: usize = MAX_VERTICES;

/// Largest number of F-free classes kept on one level of the `k_F` search.
pub const KF_LEVEL_BUDGET: usize = 50_000;

/// Largest number of one-vertex extensions tried for one level of the `k_F` search.
pub const KF_WORK_BUDGET: usize = 1 << 20;

/// Whether a computed `k_F` is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KfStatus {
    Exact,
    /// The search stopped at a cap; the value is a verified lower bound.
    ExceedsCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Kf {
    pub value: usize,
    pub status: KfStatus,
}

/// A set `F` of tournaments, stored as sorted canonical forms.
#[derive(Debug)]
pub struct ForbiddenSet {
    members: Vec<Tournament>,
    duplicates_removed: usize,
    // free_levels[k] = canonical F-free tournaments on k vertices, filled on demand
    free_levels: Mutex<Vec<Option<Vec<Tournament>>>>,
    kf: OnceLock<Option<Kf>>,
}

impl Clone for ForbiddenSet {
    fn clone(&self) -> Self {
        ForbiddenSet {
            members: self.members.clone(),
            duplicates_removed: self.duplicates_removed,
            free_levels: Mutex::new(self.free_levels.lock().unwrap().clone()),
            kf: self.kf.clone(),
        }
    }
}

impl PartialEq for ForbiddenSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for ForbiddenSet {}

impl ForbiddenSet {
    /// Canonicalises and deduplicates `members`. Tournaments on one vertex are rejected.
    pub fn new(members: Vec<Tournament>) -> Result<Self> {
        let given = members.len();
        let mut set = BTreeSet::new();
        for t in members {
            if t.n() < 2 {
                return Err(Error::Input("forbidden tournaments need at least two vertices".into()));
            }
            if t.n() > ENUMERATION_HARD_CAP {
                return Err(Error::ResourceLimit(format!(
                    "forbidden tournament with {} vertices; the cap is {ENUMERATION_HARD_CAP}",
                    t.n()
                )));
            }
            set.insert(t.canonical_form());
        }
        let members: Vec<Tournament> = set.into_iter().collect();
        Ok(ForbiddenSet {
            duplicates_removed: given - members.len(),
            members,
            free_levels: Mutex::new(vec![None; KF_SEARCH_CAP + 1]),
            kf: OnceLock::new(),
        })
    }

    pub fn members(&self) -> &[Tournament] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// How many given members were isomorphic to an earlier one.
    pub fn duplicates_removed(&self) -> usize {
        self.duplicates_removed
    }

    /// Largest member size; absent for the empty set.
    pub fn m_f(&self) -> Option<usize> {
        self.members.iter().map(|t| t.n()).max()
    }

    /// Smallest `n` with `T_n` in `F`.
    pub fn n_f(&self) -> Option<usize> {
        self.members.iter().filter(|t| t.is_transitive()).map(|t| t.n()).min()
    }

    /// True iff `t` is isomorphic to a member.
    pub fn contains_iso(&self, t: &Tournament) -> bool {
        self.members.binary_search(&t.canonical_form()).is_ok()
    }

    /// True iff no member embeds into `t`.
    pub fn admits(&self, t: &Tournament) -> bool {
        t.is_free_of(&self.members)
    }

    /// Canonical forms of the `F`-free tournaments on `n` vertices, sorted.
    pub fn free_classes(&self, n: usize) -> Result<Vec<Tournament>> {
        if n == 0 || n > KF_SEARCH_CAP {
            return Err(Error::Domain(format!(
                "F-free class listing needs 1 <= n <= {KF_SEARCH_CAP}"
            )));
        }
        self.free_level(n, usize::MAX).map(|v| v.expect("unbounded level"))
    }

    /// Level `n` of the F-free classes, or `None` when some level up to `n`
    /// holds more than `budget` classes.
    fn free_level(&self, n: usize, budget: usize) -> Result<Option<Vec<Tournament>>> {
        if let Some(level) = &self.free_levels.lock().unwrap()[n] {
            return Ok(Some(level.clone()));
        }
        let beyond_members = self.m_f().is_some_and(|m| n > m);
        let level: Vec<Tournament> = if n == 1 || (n <= ENUMERATION_HARD_CAP && !beyond_members) {
            let all = iso_classes(n);
            if self.members.iter().all(|m| m.n() > n) {
                all.to_vec()
            } else {
                all.iter().copied().filter(|t| self.admits(t)).collect()
            }
        } else {
            let Some(below) = self.free_level(n - 1, budget)? else {
                return Ok(None);
            };
            if below.len() > budget {
                return Ok(None);
            }
            if budget != usize::MAX && below.len().saturating_mul(1 << (n - 1)) > KF_WORK_BUDGET {
                return Ok(None);
            }
            extend_classes(&below, |t| self.admits(t)).into_iter().collect()
        };
        if level.len() > budget {
            return Ok(None);
        }
        self.free_levels.lock().unwrap()[n] = Some(level.clone());
        Ok(Some(level))
    }

    /// `F_f`: canonical F-free tournaments on `2..=m_F` vertices.
    pub fn f_f(&self) -> Result<Vec<Tournament>> {
        let mut out = Vec::new();
        if let Some(m) = self.m_f() {
            for n in 2..=m {
                out.extend(self.free_classes(n)?);
            }
        }
        Ok(out)
    }

    /// Largest `k` such that some tournament on `k` vertices is F-free.
    /// Absent when `F` has no transitive member (then every `k` works).
    pub fn k_f(&self) -> Option<Kf> {
        *self.kf.get_or_init(|| {
            self.n_f()?;
            let mut best = 1;
            for k in 2..=KF_SEARCH_CAP {
                match self.free_level(k, KF_LEVEL_BUDGET) {
                    Ok(Some(level)) if level.is_empty() => {
                        return Some(Kf {
                            value: best,
                            status: KfStatus::Exact,
                        })
                    }
                    Ok(Some(_)) => best = k,
                    _ => break,
                }
            }
            Some(Kf {
                value: best,
                status: KfStatus::ExceedsCap,
            })
        })
    }

    /// Every member's flip is isomorphic to a member.
    pub fn is_flip_closed(&self) -> bool {
        self.members.iter().all(|t| self.contains_iso(&t.flip()))
    }

    /// Every switch of every member is isomorphic to a member.
    pub fn is_switch_closed(&self) -> bool {
        self.members
            .iter()
            .all(|t| (0..t.n()).all(|a| self.contains_iso(&t.switch(a).expect("vertex in range"))))
    }
}
