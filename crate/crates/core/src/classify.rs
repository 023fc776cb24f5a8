//! Isomorphism of multiprojective bundles from descriptor data.
//!
//! Two bundles `P(E_1,..,E_r)` and `P(F_1,..,F_r)` over `P^n` are isomorphic
//! iff there are `ψ ∈ Aut(P^n)`, line bundles `L_i` and a permutation `σ`
//! with `E_i ≅ ψ*F_{σ(i)} ⊗ L_i`. Pullback by `ψ` fixes every `O(d)` and
//! `T_{P^n}`, so for split and tangent data the test reduces to matching
//! normalized descriptors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chowring::BundleDescriptor;
use crate::error::Error;
use crate::fibration::{second_fibration_exists, SecondFibration};

/// Sorts and shifts so the smallest twist is 0.
pub fn normalize_split(twists: &[i64]) -> Vec<i64> {
    let mut v = twists.to_vec();
    v.sort_unstable();
    if let Some(&min) = v.first() {
        for d in &mut v {
            *d -= min;
        }
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiBundleSpec {
    pub n: u32,
    pub factors: Vec<BundleDescriptor>,
}

impl MultiBundleSpec {
    pub fn new(n: u32, factors: Vec<BundleDescriptor>) -> Result<Self, Error> {
        let spec = MultiBundleSpec { n, factors };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.n < 1 {
            return Err(Error::InvalidDescriptor("base dimension must be >= 1".into()));
        }
        if self.factors.is_empty() {
            return Err(Error::InvalidDescriptor("at least one factor required".into()));
        }
        self.factors.iter().try_for_each(|d| d.validate(self.n))
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.factors.iter().map(|d| d.rank(self.n)).collect()
    }
}

/// How `ψ` was determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiNote {
    Identity,
    /// Some automorphism of `P^n`, not computed.
    Unspecified,
}

/// `E_i ≅ F_{σ(i)} ⊗ O(-shifts[i])`, i.e. `F_{σ(i)}` twists minus `shifts[i]`
/// equal the twists of `E_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoCertificate {
    /// 0-based: factor `i` on the left matches factor `sigma[i]` on the right.
    pub sigma: Vec<usize>,
    pub shifts: Vec<i64>,
    pub psi: PsiNote,
    /// Exceptional configuration of the left side, for context.
    pub second_fibration: SecondFibration,
}

impl IsoCertificate {
    /// Re-checks the certificate factor by factor.
    pub fn verify(&self, left: &MultiBundleSpec, right: &MultiBundleSpec) -> bool {
        let r = left.factors.len();
        if right.factors.len() != r || self.sigma.len() != r || self.shifts.len() != r || left.n != right.n {
            return false;
        }
        let mut seen = vec![false; r];
        for (i, (&s, &shift)) in self.sigma.iter().zip(&self.shifts).enumerate() {
            if s >= r || std::mem::replace(&mut seen[s], true) {
                return false;
            }
            let ok = match (&left.factors[i], &right.factors[s]) {
                (BundleDescriptor::Split { twists: e }, BundleDescriptor::Split { twists: f }) => {
                    let mut e = e.clone();
                    let mut f: Vec<i64> = f.iter().map(|d| d - shift).collect();
                    e.sort_unstable();
                    f.sort_unstable();
                    e == f
                }
                (BundleDescriptor::Tangent, BundleDescriptor::Tangent) => shift == 0,
                _ => false,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// Inverse certificate, from the right side to the left.
    pub fn inverse(&self) -> IsoCertificate {
        let mut sigma = vec![0; self.sigma.len()];
        let mut shifts = vec![0; self.sigma.len()];
        for (i, &s) in self.sigma.iter().enumerate() {
            sigma[s] = i;
            shifts[s] = -self.shifts[i];
        }
        IsoCertificate {
            sigma,
            shifts,
            psi: self.psi,
            second_fibration: self.second_fibration,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionReason {
    RankMismatch,
    FactorCountMismatch,
    BaseMismatch,
    NoMatchingPermutation,
}

impl fmt::Display for ObstructionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObstructionReason::RankMismatch => "rank-mismatch",
            ObstructionReason::FactorCountMismatch => "factor-count-mismatch",
            ObstructionReason::BaseMismatch => "base-mismatch",
            ObstructionReason::NoMatchingPermutation => "no-matching-permutation",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub reason: ObstructionReason,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    Isomorphic(IsoCertificate),
    NotIsomorphic(Obstruction),
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }

    pub(crate) fn obstruction(reason: ObstructionReason, detail: impl Into<String>) -> Self {
        IsoVerdict::NotIsomorphic(Obstruction {
            reason,
            detail: detail.into(),
        })
    }
}

fn shift_between(e: &BundleDescriptor, f: &BundleDescriptor) -> Option<i64> {
    match (e, f) {
        (BundleDescriptor::Split { twists: a }, BundleDescriptor::Split { twists: b }) => {
            (normalize_split(a) == normalize_split(b)).then(|| b.iter().min().unwrap() - a.iter().min().unwrap())
        }
        (BundleDescriptor::Tangent, BundleDescriptor::Tangent) => Some(0),
        _ => None,
    }
}

pub fn multi_iso_check(left: &MultiBundleSpec, right: &MultiBundleSpec) -> Result<IsoVerdict, Error> {
    left.validate()?;
    right.validate()?;
    if left.n != right.n {
        return Ok(IsoVerdict::obstruction(
            ObstructionReason::BaseMismatch,
            format!("base P^{} vs P^{}", left.n, right.n),
        ));
    }
    if left.factors.len() != right.factors.len() {
        return Ok(IsoVerdict::obstruction(
            ObstructionReason::FactorCountMismatch,
            format!("{} factors vs {}", left.factors.len(), right.factors.len()),
        ));
    }
    let mut lr = left.ranks();
    let mut rr = right.ranks();
    lr.sort_unstable();
    rr.sort_unstable();
    if lr != rr {
        return Ok(IsoVerdict::obstruction(
            ObstructionReason::RankMismatch,
            format!("ranks {lr:?} vs {rr:?}"),
        ));
    }
    // matching normalized descriptors is an equivalence, so greedy assignment is complete
    let r = left.factors.len();
    let mut used = vec![false; r];
    let mut sigma = Vec::with_capacity(r);
    let mut shifts = Vec::with_capacity(r);
    for (i, e) in left.factors.iter().enumerate() {
        let hit = (0..r).find_map(|j| {
            if used[j] {
                return None;
            }
            shift_between(e, &right.factors[j]).map(|s| (j, s))
        });
        let Some((j, s)) = hit else {
            return Ok(IsoVerdict::obstruction(
                ObstructionReason::NoMatchingPermutation,
                format!("left factor {} ({}) has no partner", i + 1, e.normalized()),
            ));
        };
        used[j] = true;
        sigma.push(j);
        shifts.push(s);
    }
    Ok(IsoVerdict::Isomorphic(IsoCertificate {
        sigma,
        shifts,
        psi: PsiNote::Identity,
        second_fibration: second_fibration_exists(left.n, &left.factors)?,
    }))
}
