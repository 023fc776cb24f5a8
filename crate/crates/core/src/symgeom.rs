//! Relative symmetric powers `S^r_{P^n} P(E)` with `rank E = p + 1`.

use serde::{Deserialize, Serialize};

use crate::chowring::BundleDescriptor;
use crate::classify::{multi_iso_check, IsoVerdict, MultiBundleSpec, ObstructionReason};
use crate::error::Error;

/// Class group of the fiber `S^r P^p`.
pub const FIBER_CLASS_GROUP: &str = "Cl(fiber) ≅ Z ⊕ Z/2Z";

/// Singular-locus chain and Picard rank of `Z = S^r_{P^n} P(E)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumReport {
    pub n: u32,
    pub r: u32,
    pub p: u32,
    /// `n + r·p`.
    pub total_dim: u32,
    /// Codimension of `Sing Z`.
    pub sing_codim: u32,
    /// `k` with `Sing^k Z` equal to the diagonal copy of `P(E)`.
    pub diag_level: u32,
    /// Dimension of the diagonal copy, `n + p`.
    pub diag_dim: u32,
    /// Smallest `k` with `Sing^k Z` empty.
    pub empty_level: u32,
    pub picard_rank: u32,
    pub class_group_note: String,
}

pub fn sym_invariants(n: u32, r: u32, p: u32) -> Result<StratumReport, Error> {
    if n < 1 {
        return Err(Error::Regime(format!("base dimension must be >= 1 (got {n})")));
    }
    if r < 2 {
        return Err(Error::Regime(format!("symmetric power r must be >= 2 (got {r})")));
    }
    if p < 2 {
        return Err(Error::Regime(format!("fiber dimension p must be >= 2 (got {p})")));
    }
    let total_dim = r
        .checked_mul(p)
        .and_then(|rp| rp.checked_add(n))
        .ok_or(Error::Overflow("symmetric power dimension"))?;
    Ok(StratumReport {
        n,
        r,
        p,
        total_dim,
        sing_codim: p,
        diag_level: r - 1,
        diag_dim: n + p,
        empty_level: r,
        picard_rank: 2,
        class_group_note: FIBER_CLASS_GROUP.to_string(),
    })
}

/// `S^r` of a single projective bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPowerSpec {
    pub spec: MultiBundleSpec,
    pub r: u32,
}

impl SymPowerSpec {
    pub fn new(n: u32, factor: BundleDescriptor, r: u32) -> Result<Self, Error> {
        let s = SymPowerSpec {
            spec: MultiBundleSpec::new(n, vec![factor])?,
            r,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), Error> {
        self.spec.validate()?;
        if self.spec.factors.len() != 1 {
            return Err(Error::Regime(format!(
                "symmetric power needs exactly one factor (got {})",
                self.spec.factors.len()
            )));
        }
        if self.r < 2 {
            return Err(Error::Regime(format!("symmetric power r must be >= 2 (got {})", self.r)));
        }
        let rank = self.factor().rank(self.spec.n);
        if rank < 3 {
            return Err(Error::Regime(format!(
                "rank-{rank} factor gives p = 1; only p >= 2 is decided"
            )));
        }
        Ok(())
    }

    pub fn factor(&self) -> &BundleDescriptor {
        &self.spec.factors[0]
    }

    /// Fiber dimension `p`.
    pub fn p(&self) -> u32 {
        self.factor().rank(self.spec.n) as u32 - 1
    }

    pub fn invariants(&self) -> Result<StratumReport, Error> {
        sym_invariants(self.spec.n, self.r, self.p())
    }
}

pub fn sym_iso_check(left: &SymPowerSpec, right: &SymPowerSpec) -> Result<IsoVerdict, Error> {
    left.validate()?;
    right.validate()?;
    let (a, b) = (left.invariants()?, right.invariants()?);
    if a != b {
        let (reason, detail) = if a.n != b.n {
            (ObstructionReason::BaseMismatch, format!("base P^{} vs P^{}", a.n, b.n))
        } else if a.r != b.r {
            (ObstructionReason::FactorCountMismatch, format!("symmetric power {} vs {}", a.r, b.r))
        } else {
            (ObstructionReason::RankMismatch, format!("fiber dimension {} vs {}", a.p, b.p))
        };
        return Ok(IsoVerdict::obstruction(reason, detail));
    }
    multi_iso_check(&left.spec, &right.spec)
}
