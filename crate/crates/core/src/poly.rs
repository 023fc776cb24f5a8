//! Sparse multivariate polynomials over arbitrary-precision integers.
//!
//! Variables are indexed `0..nvars`; index 0 is `T` and index `i >= 1` is
//! `U_i`. Monomials are ordered lexicographically with
//! `U_r > ... > U_1 > T`, so a relation `G_i(U_i, T)` that is monic in `U_i`
//! has leading monomial `U_i^{deg}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exponent vector; position 0 is `T`, position `i` is `U_i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[index] = 1;
        m
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.exps[index]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // highest-index variable is compared first
        self.exps.iter().rev().cmp(other.exps.iter().rev())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with integer coefficients. No stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::term(nvars, Monomial::one(nvars), c)
    }

    pub fn term(nvars: usize, m: Monomial, c: impl Into<BigInt>) -> Self {
        assert_eq!(m.nvars(), nvars, "monomial arity");
        let mut p = Self::zero(nvars);
        p.add_term(m, c.into());
        p
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self::term(nvars, Monomial::var(nvars, index), 1)
    }

    /// Linear form `Σ coeffs[k]·v_k`.
    pub fn linear(coeffs: &[i64]) -> Self {
        let nvars = coeffs.len();
        let mut p = Self::zero(nvars);
        for (k, &c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(nvars, k), BigInt::from(c));
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Adds `c·m` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Total degree if every term has the same degree; the zero polynomial
    /// reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&v| self.terms.keys().any(|m| m.exponent(v) > 0))
            .collect()
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    fn check_arity(&self, other: &Poly) -> Result<(), Error> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCount {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, Error> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, Error> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    /// Exact product.
    pub fn multiply(&self, other: &Poly) -> Result<Poly, Error> {
        self.check_arity(other)?;
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    /// `self^k` by repeated squaring; `power(0)` is 1.
    pub fn power(&self, mut k: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Replaces each variable `v_j` by `Σ_k m[j][k]·v_k`.
    ///
    /// Substituting `m` and then `n` equals substituting the product `m·n`.
    pub fn substitute_linear(&self, m: &[Vec<i64>]) -> Result<Poly, Error> {
        let images: Vec<Poly> = self.check_matrix(m)?.iter().map(|row| Poly::linear(row)).collect();
        Ok(self.substitute(&images))
    }

    fn check_matrix<'m>(&self, m: &'m [Vec<i64>]) -> Result<&'m [Vec<i64>], Error> {
        if m.len() != self.nvars || m.iter().any(|row| row.len() != self.nvars) {
            return Err(Error::MatrixShape {
                expected: self.nvars,
            });
        }
        Ok(m)
    }

    /// Replaces variable `j` by `images[j]`; all images share one arity,
    /// which becomes the arity of the result.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map_or(self.nvars, Poly::nvars);
        // cache of powers per variable
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(p.nvars), p.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(target, c.clone());
            for (j, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[j];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &images[j];
                    cache.push(next);
                }
                acc = &acc * &cache[e as usize];
            }
            out = &out + &acc;
        }
        out
    }

    /// Re-indexes variables into an ambient ring with `nvars` variables;
    /// variable `j` of `self` becomes variable `map[j]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        assert_eq!(map.len(), self.nvars);
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; nvars];
            for (j, &e) in m.exponents().iter().enumerate() {
                exps[map[j]] += e;
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial arity mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomial arity mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.multiply(rhs).expect("polynomial arity mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

fn var_name(index: usize) -> String {
    if index == 0 {
        "t".to_string()
    } else {
        format!("u{index}")
    }
}

pub(crate) fn fmt_monomial(m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for index in (0..m.nvars()).rev() {
        let e = m.exponent(index);
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(&var_name(index))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Prints in the expression grammar accepted by [`crate::expr::parse_poly`],
/// leading term first.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let abs = c.abs();
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                fmt_monomial(m, f)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(nvars: usize) -> Poly {
        Poly::var(nvars, 0)
    }
    fn u(nvars: usize, i: usize) -> Poly {
        Poly::var(nvars, i)
    }

    #[test]
    fn difference_of_squares() {
        let a = &t(2) + &u(2, 1);
        let b = &u(2, 1) - &t(2);
        let b = -&b;
        assert_eq!(&a * &b, &(&t(2) * &t(2)) - &(&u(2, 1) * &u(2, 1)));
    }

    #[test]
    fn multiply_by_one_and_mismatch() {
        let p = &(&t(3) + &u(3, 2)) * &u(3, 1);
        assert_eq!(&p * &Poly::one(3), p);
        assert_eq!(
            p.multiply(&Poly::one(2)),
            Err(Error::VariableCount { left: 3, right: 2 })
        );
    }

    #[test]
    fn hand_expanded_quadratic() {
        let two_t = t(2).scale(&BigInt::from(2));
        let three_t = t(2).scale(&BigInt::from(3));
        let p = &(&u(2, 1) - &two_t) * &(&u(2, 1) - &three_t);
        assert_eq!(p.to_string(), "u1^2 - 5*u1*t + 6*t^2");
    }

    #[test]
    fn powers() {
        assert_eq!(t(2).power(0), Poly::one(2));
        let d = &u(2, 1) - &t(2);
        assert_eq!(d.power(2).to_string(), "u1^2 - 2*u1*t + t^2");
        let s = &(&t(3) + &u(3, 1)) + &u(3, 2);
        let cube = s.power(3);
        assert_eq!(cube.coefficient(&Monomial::new(vec![1, 1, 1])), BigInt::from(6));
    }

    #[test]
    fn substitution_examples() {
        let id = vec![vec![1, 0], vec![0, 1]];
        let sq = u(2, 1).power(2);
        assert_eq!(sq.substitute_linear(&id).unwrap(), sq);
        let shift = vec![vec![1, 0], vec![-1, 1]];
        assert_eq!(u(2, 1).substitute_linear(&shift).unwrap().to_string(), "u1 - t");
        assert_eq!(
            u(2, 1).substitute_linear(&[vec![1, 0, 0]]),
            Err(Error::MatrixShape { expected: 2 })
        );
    }

    #[test]
    fn recentering_shifts_roots() {
        // (U - aT)(U - bT) with U -> U + cT gives (U - (a-c)T)(U - (b-c)T)
        let lin = |a: i64| &u(2, 1) - &t(2).scale(&BigInt::from(a));
        for (a, b, c) in [(0, 1, 1), (2, -3, 5), (4, 4, -2)] {
            let g = &lin(a) * &lin(b);
            let m = vec![vec![1, 0], vec![c, 1]];
            assert_eq!(g.substitute_linear(&m).unwrap(), &lin(a - c) * &lin(b - c));
        }
    }

    #[test]
    fn display_orders_leading_first() {
        let p = &(&u(3, 2) * &t(3)) - &(&u(3, 1).power(3) + &Poly::constant(3, 7));
        assert_eq!(p.to_string(), "u2*t - u1^3 - 7");
        assert_eq!(Poly::zero(2).to_string(), "0");
        assert_eq!((-&t(2)).to_string(), "-t");
    }

    #[test]
    fn monomial_order_prefers_higher_u() {
        let a = Monomial::new(vec![5, 0, 1]);
        let b = Monomial::new(vec![0, 3, 0]);
        assert!(a > b);
        let c = Monomial::new(vec![0, 1, 0]);
        let d = Monomial::new(vec![9, 0, 0]);
        assert!(c > d);
    }
}
