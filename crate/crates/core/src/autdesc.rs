//! Structured descriptions of automorphism groups.
//!
//! For `P = Π_i P_i^{a_i}` (fiber powers over `P^n`) outside the exceptional
//! cases, `Aut P` is an extension of `H ⊆ PGL(n+1)` by
//! `Π_i (Aut_{P^n} P_i)^{a_i} ⋊ S_{a_i}`. Split and tangent bundles are
//! invariant under pullback by `Aut(P^n)`, so `H = PGL(n+1)` here. The
//! exceptional cases are products of projective spaces, optionally with the
//! flag variety `P(T_{P^n})`, whose automorphism group is `PGL(n+1) ⋊ Z/2`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chowring::{binomial, BundleDescriptor};
use crate::error::Error;

/// Defining condition of the quotient group `H`.
pub const H_CONDITION: &str = "ψ*P ≅ P over P^n";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupExpr {
    /// `PGL(k) = Aut(P^{k-1})`.
    Pgl { k: u32 },
    /// `Aut_{P^n} P(E)`, connected.
    FiberAut { descriptor: BundleDescriptor, dim: u64 },
    Sym { a: u32 },
    Z2,
    Product { factors: Vec<GroupExpr> },
    Semidirect { normal: Box<GroupExpr>, acting: Box<GroupExpr> },
    Extension {
        kernel: Box<GroupExpr>,
        quotient: Box<GroupExpr>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        condition: Option<String>,
    },
}

impl GroupExpr {
    pub fn dimension(&self) -> Option<u64> {
        match self {
            GroupExpr::Pgl { k } => (u64::from(*k)).checked_mul(u64::from(*k))?.checked_sub(1),
            GroupExpr::FiberAut { dim, .. } => Some(*dim),
            GroupExpr::Sym { .. } | GroupExpr::Z2 => Some(0),
            GroupExpr::Product { factors } => factors.iter().try_fold(0u64, |acc, g| acc.checked_add(g.dimension()?)),
            GroupExpr::Semidirect { normal: a, acting: b }
            | GroupExpr::Extension {
                kernel: a, quotient: b, ..
            } => a.dimension()?.checked_add(b.dimension()?),
        }
    }

    /// Order of the component group; `None` when it does not fit in `u64`.
    pub fn component_order(&self) -> Option<u64> {
        match self {
            GroupExpr::Pgl { .. } | GroupExpr::FiberAut { .. } => Some(1),
            GroupExpr::Sym { a } => (1..=u64::from(*a)).try_fold(1u64, |acc, k| acc.checked_mul(k)),
            GroupExpr::Z2 => Some(2),
            GroupExpr::Product { factors } => factors.iter().try_fold(1u64, |acc, g| acc.checked_mul(g.component_order()?)),
            GroupExpr::Semidirect { normal: a, acting: b }
            | GroupExpr::Extension {
                kernel: a, quotient: b, ..
            } => a.component_order()?.checked_mul(b.component_order()?),
        }
    }

    fn product(mut factors: Vec<GroupExpr>) -> GroupExpr {
        if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            GroupExpr::Product { factors }
        }
    }

    /// `G^a ⋊ S_a`, or `G` when `a = 1`.
    fn wreath(g: GroupExpr, a: u32) -> GroupExpr {
        if a == 1 {
            return g;
        }
        GroupExpr::Semidirect {
            normal: Box::new(GroupExpr::Product {
                factors: vec![g; a as usize],
            }),
            acting: Box::new(GroupExpr::Sym { a }),
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(g: &GroupExpr) -> String {
            match g {
                GroupExpr::Product { .. } | GroupExpr::Semidirect { .. } | GroupExpr::Extension { .. } => format!("({g})"),
                _ => g.to_string(),
            }
        }
        match self {
            GroupExpr::Pgl { k } => write!(f, "PGL({k})"),
            GroupExpr::FiberAut { descriptor, dim } => write!(f, "FiberAut({descriptor}; dim {dim})"),
            GroupExpr::Sym { a } => write!(f, "S{a}"),
            GroupExpr::Z2 => f.write_str("Z/2"),
            GroupExpr::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(wrap).collect();
                f.write_str(&parts.join(" × "))
            }
            GroupExpr::Semidirect { normal, acting } => write!(f, "{} ⋊ {}", wrap(normal), wrap(acting)),
            GroupExpr::Extension {
                kernel,
                quotient,
                condition,
            } => {
                write!(f, "1 → {kernel} → Aut → {quotient} → 1")?;
                if let Some(c) = condition {
                    write!(f, " [H = {{ψ | {c}}}]")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentOrder {
    Known(u64),
    Unknown,
}

impl Serialize for ComponentOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ComponentOrder::Known(k) => s.serialize_u64(*k),
            ComponentOrder::Unknown => s.serialize_str("unknown"),
        }
    }
}

impl<'de> Deserialize<'de> for ComponentOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(k) if k > 0 => Ok(ComponentOrder::Known(k)),
            Raw::Str(s) if s == "unknown" => Ok(ComponentOrder::Unknown),
            _ => Err(serde::de::Error::custom("component_order must be a positive integer or \"unknown\"")),
        }
    }
}

impl fmt::Display for ComponentOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentOrder::Known(k) => write!(f, "{k}"),
            ComponentOrder::Unknown => f.write_str("unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDescriptor {
    pub expression: GroupExpr,
    pub dimension: u64,
    pub component_order: ComponentOrder,
}

impl GroupDescriptor {
    fn from_expr(expression: GroupExpr) -> Result<Self, Error> {
        let dimension = expression.dimension().ok_or(Error::Overflow("group dimension"))?;
        let component_order = expression
            .component_order()
            .map_or(ComponentOrder::Unknown, ComponentOrder::Known);
        Ok(GroupDescriptor {
            expression,
            dimension,
            component_order,
        })
    }
}

/// `dim H^0(P^n, O(d))`.
pub fn h0_line(n: u32, d: i64) -> BigInt {
    if d < 0 {
        return BigInt::zero();
    }
    binomial(u64::from(n) + d as u64, u64::from(n))
}

/// `dim Aut_{P^n} P(E) = h^0(End E) - 1` for split `E`.
pub fn dim_aut_fiberwise(n: u32, d: &BundleDescriptor) -> Result<u64, Error> {
    let BundleDescriptor::Split { twists } = d else {
        return Err(Error::InvalidDescriptor("fiberwise dimension formula needs a split factor".into()));
    };
    let mut total = BigInt::zero();
    for &di in twists {
        for &dj in twists {
            total += h0_line(n, dj - di);
        }
    }
    (total - BigInt::from(1)).to_u64().ok_or(Error::Overflow("fiberwise automorphism dimension"))
}

fn fiber_aut(n: u32, d: &BundleDescriptor) -> Result<GroupExpr, Error> {
    let dim = match d {
        BundleDescriptor::Split { .. } => dim_aut_fiberwise(n, d)?,
        // End(T) is one-dimensional, so the fiberwise group is trivial
        BundleDescriptor::Tangent => 0,
    };
    Ok(GroupExpr::FiberAut {
        descriptor: d.normalized(),
        dim,
    })
}

fn pgl_powers(dims: &BTreeMap<u32, u32>) -> Vec<GroupExpr> {
    dims.iter()
        .map(|(&m, &count)| GroupExpr::wreath(GroupExpr::Pgl { k: m + 1 }, count))
        .collect()
}

/// `Aut` of the fiber product `Π_i P(E_i)^{a_i}` over `P^n`; the factors must
/// be pairwise distinct after normalization.
pub fn describe_aut_multi(n: u32, factors: &[(BundleDescriptor, u32)]) -> Result<GroupDescriptor, Error> {
    if factors.is_empty() {
        return Err(Error::InvalidDescriptor("at least one factor required".into()));
    }
    let mut seen = Vec::with_capacity(factors.len());
    for (d, a) in factors {
        d.validate(n)?;
        if *a == 0 {
            return Err(Error::Dimension("multiplicities must be positive".into()));
        }
        let norm = d.normalized();
        if seen.contains(&norm) {
            return Err(Error::DuplicateFactor(norm.to_string()));
        }
        seen.push(norm);
    }

    let tangents: Vec<u32> = factors.iter().filter(|(d, _)| d.is_tangent()).map(|&(_, a)| a).collect();
    let rest_trivial = factors
        .iter()
        .filter(|(d, _)| !d.is_tangent())
        .all(|(d, _)| d.is_trivial_up_to_twist());
    // fiber dimension -> multiplicity, for the trivial factors
    let mut dims: BTreeMap<u32, u32> = BTreeMap::new();
    for (d, a) in factors.iter().filter(|(d, _)| !d.is_tangent()) {
        *dims.entry(d.rank(n) as u32 - 1).or_default() += a;
    }

    let expr = match (tangents.as_slice(), rest_trivial) {
        ([], true) => {
            // P^n × Π (P^{p_i})^{a_i}
            *dims.entry(n).or_default() += 1;
            GroupExpr::product(pgl_powers(&dims))
        }
        ([1], true) => {
            let mut parts = vec![GroupExpr::Semidirect {
                normal: Box::new(GroupExpr::Pgl { k: n + 1 }),
                acting: Box::new(GroupExpr::Z2),
            }];
            parts.extend(pgl_powers(&dims));
            GroupExpr::product(parts)
        }
        _ => {
            let kernel = factors
                .iter()
                .map(|(d, a)| Ok(GroupExpr::wreath(fiber_aut(n, d)?, *a)))
                .collect::<Result<Vec<_>, Error>>()?;
            GroupExpr::Extension {
                kernel: Box::new(GroupExpr::product(kernel)),
                quotient: Box::new(GroupExpr::Pgl { k: n + 1 }),
                condition: Some(H_CONDITION.to_string()),
            }
        }
    };
    GroupDescriptor::from_expr(expr)
}

/// `Aut(S^r_{P^n} P(E)) ≅ Aut_{P^n→P^n} P(E)`, an extension of `PGL(n+1)`
/// by `Aut_{P^n} P(E)`.
///
/// The identification relies on `S^r P^p` being singular, which needs
/// `p >= 2`; for rank-2 factors the fibers are `P^r` and the descriptor is
/// only the formal value of the right-hand side.
pub fn describe_aut_sym(n: u32, r: u32, d: &BundleDescriptor) -> Result<GroupDescriptor, Error> {
    if r < 2 {
        return Err(Error::Regime(format!("symmetric power r must be >= 2 (got {r})")));
    }
    d.validate(n)?;
    GroupDescriptor::from_expr(GroupExpr::Extension {
        kernel: Box::new(fiber_aut(n, d)?),
        quotient: Box::new(GroupExpr::Pgl { k: n + 1 }),
        condition: Some(H_CONDITION.to_string()),
    })
}
