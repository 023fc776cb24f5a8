//! Chow rings of multiprojective bundles over `P^n`.
//!
//! The ring of `P(E_1) x_{P^n} ... x_{P^n} P(E_r)` is
//! `Z[T, U_1, .., U_r] / (T^{n+1}, G_1(U_1, T), .., G_r(U_r, T))` where
//! `G_i` is the Grothendieck relation of `E_i`. The leading monomials
//! `T^{n+1}, U_1^{q_1+1}, .., U_r^{q_r+1}` are pairwise coprime, so
//! reduction by these relations is confluent and the monomials
//! `t^a u_1^{a_1} .. u_r^{a_r}` with `a <= n`, `a_i <= q_i` form a Z-basis.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::{Monomial, Poly};

/// Default cap on `(n+1)·Π rank_i`.
pub const DEFAULT_MAX_BASIS: u128 = 1_000_000;

/// A factor of a multiprojective bundle, known through its Chern data.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawDescriptor")]
pub enum BundleDescriptor {
    /// `O(d_1) ⊕ .. ⊕ O(d_k)`.
    Split { twists: Vec<i64> },
    /// Tangent bundle of the base.
    Tangent,
}

// internally tagged unit variants would accept stray keys
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDescriptor {
    kind: String,
    twists: Option<Vec<i64>>,
}

impl TryFrom<RawDescriptor> for BundleDescriptor {
    type Error = String;

    fn try_from(raw: RawDescriptor) -> Result<Self, String> {
        match (raw.kind.as_str(), raw.twists) {
            ("split", Some(twists)) => Ok(BundleDescriptor::Split { twists }),
            ("split", None) => Err("split factor needs \"twists\"".into()),
            ("tangent", None) => Ok(BundleDescriptor::Tangent),
            ("tangent", Some(_)) => Err("tangent factor takes no \"twists\"".into()),
            (other, _) => Err(format!("unknown factor kind {other:?}")),
        }
    }
}

impl BundleDescriptor {
    pub fn split(twists: impl Into<Vec<i64>>) -> Self {
        BundleDescriptor::Split {
            twists: twists.into(),
        }
    }

    pub fn rank(&self, n: u32) -> usize {
        match self {
            BundleDescriptor::Split { twists } => twists.len(),
            BundleDescriptor::Tangent => n as usize,
        }
    }

    pub fn validate(&self, n: u32) -> Result<(), Error> {
        match self {
            BundleDescriptor::Split { twists } if twists.len() < 2 => Err(Error::InvalidDescriptor(format!(
                "split factor has rank {}, rank >= 2 required",
                twists.len()
            ))),
            BundleDescriptor::Tangent if n < 2 => Err(Error::InvalidDescriptor(format!(
                "tangent factor requires base dimension >= 2 (got {n})"
            ))),
            _ => Ok(()),
        }
    }

    /// Equal to a trivial bundle after a line-bundle twist.
    pub fn is_trivial_up_to_twist(&self) -> bool {
        match self {
            BundleDescriptor::Split { twists } => twists.windows(2).all(|w| w[0] == w[1]),
            BundleDescriptor::Tangent => false,
        }
    }

    pub fn is_tangent(&self) -> bool {
        matches!(self, BundleDescriptor::Tangent)
    }

    /// Split twists sorted and shifted to start at 0; tangent unchanged.
    pub fn normalized(&self) -> BundleDescriptor {
        match self {
            BundleDescriptor::Split { twists } => BundleDescriptor::Split {
                twists: crate::classify::normalize_split(twists),
            },
            BundleDescriptor::Tangent => BundleDescriptor::Tangent,
        }
    }
}

impl fmt::Display for BundleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleDescriptor::Split { twists } => {
                let parts: Vec<String> = twists.iter().map(i64::to_string).collect();
                write!(f, "split[{}]", parts.join(","))
            }
            BundleDescriptor::Tangent => f.write_str("tangent"),
        }
    }
}

/// Total Chern class `c_0 + c_1 t + .. + c_n t^n`, with `c_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernClass {
    coeffs: Vec<BigInt>,
}

impl ChernClass {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, Error> {
        if coeffs.first() != Some(&BigInt::one()) {
            return Err(Error::InvalidDescriptor("Chern class must have c0 = 1".into()));
        }
        Ok(ChernClass { coeffs })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `c_k`, zero beyond the stored degree.
    pub fn get(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }
}

pub fn chern_of_descriptor(d: &BundleDescriptor, n: u32) -> Result<ChernClass, Error> {
    d.validate(n)?;
    let len = n as usize + 1;
    let mut c = vec![BigInt::zero(); len];
    c[0] = BigInt::one();
    match d {
        BundleDescriptor::Split { twists } => {
            for &dj in twists {
                // multiply by (1 + dj t), truncating at t^n
                let dj = BigInt::from(dj);
                for k in (1..len).rev() {
                    let prev = &c[k - 1] * &dj;
                    c[k] += prev;
                }
            }
        }
        BundleDescriptor::Tangent => {
            // Euler sequence: c(T) = (1+t)^{n+1}
            for (k, slot) in c.iter_mut().enumerate().skip(1) {
                *slot = binomial(n as u64 + 1, k as u64);
            }
        }
    }
    Ok(ChernClass { coeffs: c })
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `G(U, T) = Σ_k (-1)^k c_k U^{rank-k} T^k` in variables `(T, U)`.
///
/// `G` is monic in `U` and `G(1, -t) = c(t)`.
pub fn grothendieck_relation(c: &ChernClass, rank: usize) -> Poly {
    let mut g = Poly::zero(2);
    for k in 0..=rank {
        let mut ck = c.get(k);
        if k % 2 == 1 {
            ck = -ck;
        }
        g.add_term(Monomial::new(vec![k as u32, (rank - k) as u32]), ck);
    }
    g
}

/// Presentation `Z[T, U_1..U_r] / (T^{n+1}, G_1, .., G_r)` with its monomial basis.
#[derive(Clone, Debug)]
pub struct ChowPresentation {
    n: u32,
    ranks: Vec<usize>,
    relations: Vec<Poly>,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    // reductions[i][e][j]: coefficient of U_i^j T^{e-j} in the normal form of U_i^e
    reductions: Vec<Vec<Vec<BigInt>>>,
}

impl ChowPresentation {
    pub fn build(n: u32, factors: &[BundleDescriptor]) -> Result<Self, Error> {
        Self::build_with_limit(n, factors, DEFAULT_MAX_BASIS)
    }

    pub fn build_with_limit(n: u32, factors: &[BundleDescriptor], limit: u128) -> Result<Self, Error> {
        if n < 1 {
            return Err(Error::InvalidDescriptor("base dimension must be >= 1".into()));
        }
        if factors.is_empty() {
            return Err(Error::InvalidDescriptor("at least one factor required".into()));
        }
        let nvars = factors.len() + 1;
        let mut gs = Vec::with_capacity(factors.len());
        for (i, d) in factors.iter().enumerate() {
            let c = chern_of_descriptor(d, n)?;
            gs.push(grothendieck_relation(&c, d.rank(n)).embed(nvars, &[0, i + 1]));
        }
        Self::from_relations_with_limit(n, gs, limit)
    }

    /// Builds from explicit relations; `gs[i]` must be homogeneous of degree
    /// at least 2, monic in `U_{i+1}` and involve only `U_{i+1}` and `T`.
    pub fn from_relations(n: u32, gs: Vec<Poly>) -> Result<Self, Error> {
        Self::from_relations_with_limit(n, gs, DEFAULT_MAX_BASIS)
    }

    pub fn from_relations_with_limit(n: u32, gs: Vec<Poly>, limit: u128) -> Result<Self, Error> {
        if n < 1 {
            return Err(Error::InvalidDescriptor("base dimension must be >= 1".into()));
        }
        let nvars = gs.len() + 1;
        let mut ranks = Vec::with_capacity(gs.len());
        for (i, g) in gs.iter().enumerate() {
            let ui = i + 1;
            if g.nvars() != nvars {
                return Err(Error::VariableCount {
                    left: g.nvars(),
                    right: nvars,
                });
            }
            let deg = g
                .homogeneous_degree()
                .ok_or_else(|| Error::InvalidRelation(format!("G{ui} = {g} is not homogeneous")))?;
            if deg < 2 {
                return Err(Error::InvalidRelation(format!("G{ui} has degree {deg}, need >= 2")));
            }
            if g.support_vars().iter().any(|&v| v != 0 && v != ui) {
                return Err(Error::InvalidRelation(format!("G{ui} = {g} involves variables other than u{ui}, t")));
            }
            let mut lead = vec![0u32; nvars];
            lead[ui] = deg;
            if !g.coefficient(&Monomial::new(lead)).is_one() {
                return Err(Error::InvalidRelation(format!("G{ui} = {g} is not monic in u{ui}")));
            }
            ranks.push(deg as usize);
        }

        let size = ranks
            .iter()
            .try_fold(n as u128 + 1, |acc, &k| acc.checked_mul(k as u128))
            .unwrap_or(u128::MAX);
        if size > limit {
            return Err(Error::BasisLimit { size, limit });
        }

        let mut relations = Vec::with_capacity(nvars);
        let mut tn = vec![0u32; nvars];
        tn[0] = n + 1;
        relations.push(Poly::term(nvars, Monomial::new(tn), 1));
        relations.extend(gs);

        let basis = enumerate_basis(n, &ranks);
        let index = basis.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        let reductions = ranks
            .iter()
            .enumerate()
            .map(|(i, &rank)| reduction_table(&relations[i + 1], i + 1, rank, n))
            .collect();

        Ok(ChowPresentation {
            n,
            ranks,
            relations,
            basis,
            index,
            reductions,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of factors.
    pub fn r(&self) -> usize {
        self.ranks.len()
    }

    pub fn nvars(&self) -> usize {
        self.ranks.len() + 1
    }

    /// Factor ranks `q_i + 1`.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `T^{n+1}` followed by `G_1, .., G_r`.
    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn basis_position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Top degree `n + Σ q_i`.
    pub fn top_degree(&self) -> u32 {
        self.n + self.ranks.iter().map(|&k| k as u32 - 1).sum::<u32>()
    }

    /// Normal form of `f`: the unique representative supported on the basis.
    pub fn normal_form(&self, f: &Poly) -> ChowElement<'_> {
        assert_eq!(f.nvars(), self.nvars(), "polynomial not in this ring");
        let mut out = Poly::zero(self.nvars());
        for (m, c) in f.terms() {
            self.reduce_monomial_into(m, c, &mut out);
        }
        ChowElement { pres: self, value: out }
    }

    fn reduce_monomial_into(&self, m: &Monomial, c: &BigInt, out: &mut Poly) {
        let n = self.n;
        if m.exponent(0) > n {
            return;
        }
        // partial products: (T exponent, U exponents so far, coefficient)
        let mut partial: Vec<(u32, Vec<u32>, BigInt)> = vec![(m.exponent(0), Vec::with_capacity(self.r()), c.clone())];
        for (i, table) in self.reductions.iter().enumerate() {
            let e = m.exponent(i + 1);
            let Some(row) = table.get(e as usize) else {
                return;
            };
            let mut next = Vec::new();
            for (texp, us, coeff) in &partial {
                for (j, rc) in row.iter().enumerate() {
                    if rc.is_zero() {
                        continue;
                    }
                    let new_t = texp + e - j as u32;
                    if new_t > n {
                        continue;
                    }
                    let mut us2 = us.clone();
                    us2.push(j as u32);
                    next.push((new_t, us2, coeff * rc));
                }
            }
            if next.is_empty() {
                return;
            }
            partial = next;
        }
        for (texp, us, coeff) in partial {
            let mut exps = Vec::with_capacity(self.nvars());
            exps.push(texp);
            exps.extend(us);
            out.add_term(Monomial::new(exps), coeff);
        }
    }

    pub fn element(&self, f: &Poly) -> ChowElement<'_> {
        self.normal_form(f)
    }

    pub fn zero(&self) -> ChowElement<'_> {
        ChowElement {
            pres: self,
            value: Poly::zero(self.nvars()),
        }
    }

    pub fn one(&self) -> ChowElement<'_> {
        ChowElement {
            pres: self,
            value: Poly::one(self.nvars()),
        }
    }

    /// Degree-one class `Σ coeffs[k]·v_k` (index 0 is `t`).
    pub fn linear(&self, coeffs: &[i64]) -> ChowElement<'_> {
        assert_eq!(coeffs.len(), self.nvars());
        ChowElement {
            pres: self,
            value: Poly::linear(coeffs),
        }
    }

    /// Ranks of the graded pieces `A^0, .., A^{top}`.
    pub fn betti(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.top_degree() as usize + 1];
        for m in &self.basis {
            out[m.degree() as usize] += 1;
        }
        out
    }
}

fn enumerate_basis(n: u32, ranks: &[usize]) -> Vec<Monomial> {
    let mut basis = vec![Vec::with_capacity(ranks.len() + 1)];
    let bounds = std::iter::once(n).chain(ranks.iter().map(|&k| k as u32 - 1));
    for bound in bounds {
        basis = basis
            .into_iter()
            .flat_map(|prefix: Vec<u32>| {
                (0..=bound).map(move |e| {
                    let mut p = prefix.clone();
                    p.push(e);
                    p
                })
            })
            .collect();
    }
    let mut basis: Vec<Monomial> = basis.into_iter().map(Monomial::new).collect();
    basis.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    basis
}

/// Rows `e = 0 ..= rank-1+n` of the reduction of `U^e` modulo `G` and `T^{n+1}`.
fn reduction_table(g: &Poly, var: usize, rank: usize, n: u32) -> Vec<Vec<BigInt>> {
    let q = rank - 1;
    let max_e = q + n as usize;
    // U^{q+1} ≡ U^{q+1} - G
    let mut top = vec![BigInt::zero(); rank];
    for (m, c) in g.terms() {
        let j = m.exponent(var) as usize;
        if j < rank {
            top[j] = -c;
        }
    }
    let mut table = Vec::with_capacity(max_e + 1);
    for e in 0..rank.min(max_e + 1) {
        let mut row = vec![BigInt::zero(); rank];
        row[e] = BigInt::one();
        table.push(row);
    }
    for e in rank..=max_e {
        let prev: &Vec<BigInt> = &table[e - 1];
        let mut row = vec![BigInt::zero(); rank];
        row[1..=q].clone_from_slice(&prev[..q]);
        if !prev[q].is_zero() {
            for j in 0..rank {
                row[j] += &prev[q] * &top[j];
            }
        }
        // T exponent of U^j in row e is e - j
        for (j, slot) in row.iter_mut().enumerate() {
            if e - j > n as usize {
                *slot = BigInt::zero();
            }
        }
        table.push(row);
    }
    table
}

/// A ring element in normal form.
#[derive(Clone, Debug)]
pub struct ChowElement<'p> {
    pres: &'p ChowPresentation,
    value: Poly,
}

impl<'p> ChowElement<'p> {
    pub fn presentation(&self) -> &'p ChowPresentation {
        self.pres
    }

    pub fn value(&self) -> &Poly {
        &self.value
    }

    pub fn into_poly(self) -> Poly {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Coordinates in the basis order of the presentation.
    pub fn coordinates(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.pres.basis.len()];
        for (m, c) in self.value.terms() {
            out[self.pres.index[m]] = c.clone();
        }
        out
    }

    pub fn pow(&self, k: u32) -> ChowElement<'p> {
        let mut acc = self.pres.one();
        for _ in 0..k {
            acc = &acc * self;
            if acc.is_zero() {
                break;
            }
        }
        acc
    }
}

impl PartialEq for ChowElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.pres, other.pres) && self.value == other.value
    }
}

impl<'p> Add for &ChowElement<'p> {
    type Output = ChowElement<'p>;
    fn add(self, rhs: &ChowElement<'p>) -> ChowElement<'p> {
        ChowElement {
            pres: self.pres,
            value: &self.value + &rhs.value,
        }
    }
}

impl<'p> Sub for &ChowElement<'p> {
    type Output = ChowElement<'p>;
    fn sub(self, rhs: &ChowElement<'p>) -> ChowElement<'p> {
        ChowElement {
            pres: self.pres,
            value: &self.value - &rhs.value,
        }
    }
}

impl<'p> Neg for &ChowElement<'p> {
    type Output = ChowElement<'p>;
    fn neg(self) -> ChowElement<'p> {
        ChowElement {
            pres: self.pres,
            value: -&self.value,
        }
    }
}

impl<'p> Mul for &ChowElement<'p> {
    type Output = ChowElement<'p>;
    fn mul(self, rhs: &ChowElement<'p>) -> ChowElement<'p> {
        self.pres.normal_form(&(&self.value * &rhs.value))
    }
}

impl fmt::Display for ChowElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}
