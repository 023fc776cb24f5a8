//! Degree-one nilpotent classes and alternative bundle structures on a Chow ring.
//!
//! A morphism `X -> P^n` pulls the hyperplane class back to a degree-one
//! class `x` with `x^{n+1} = 0`. Every sweep here is exhaustive only inside
//! the coefficient box `[-bound, bound]`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chowring::{BundleDescriptor, ChowElement, ChowPresentation};
use crate::error::Error;
use crate::linalg::{determinant, solve_columns};
use crate::par::{filter_map_range, map_slice, Strategy};
use crate::poly::{Monomial, Poly};

/// Default coefficient box for sweeps.
pub const DEFAULT_BOUND: i64 = 8;

/// Primitive class `a·t + Σ b_i·u_i` whose first nonzero coefficient is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeOneClass {
    coeffs: Vec<i64>,
}

impl DegreeOneClass {
    /// Divides out the content and fixes the sign; `None` for the zero vector.
    pub fn canonical(mut coeffs: Vec<i64>) -> Option<Self> {
        let g = coeffs.iter().fold(0i64, |g, &c| g.gcd(&c));
        if g == 0 {
            return None;
        }
        let lead = coeffs.iter().copied().find(|&c| c != 0)?;
        let g = if lead < 0 { -g } else { g };
        for c in &mut coeffs {
            *c /= g;
        }
        Some(DegreeOneClass { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> Poly {
        Poly::linear(&self.coeffs)
    }

    fn l1(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

/// Smaller coefficient norm first, then lexicographically larger vectors
/// first, so `t` precedes `u_1`.
impl Ord for DegreeOneClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.l1().cmp(&other.l1()).then_with(|| other.coeffs.cmp(&self.coeffs))
    }
}

impl PartialOrd for DegreeOneClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DegreeOneClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_poly().fmt(f)
    }
}

fn is_primitive(v: &[i64]) -> bool {
    v.iter().fold(0i64, |g, &c| g.gcd(&c)) == 1
}

fn is_sign_canonical(v: &[i64]) -> bool {
    v.iter().copied().find(|&c| c != 0).is_some_and(|c| c > 0)
}

/// Decodes `index` into a vector of `dim` entries in `[-bound, bound]`.
fn box_vector(index: u64, dim: usize, bound: i64) -> Vec<i64> {
    let side = (2 * bound + 1) as u64;
    let mut rest = index;
    let mut v = vec![0i64; dim];
    for slot in v.iter_mut() {
        *slot = (rest % side) as i64 - bound;
        rest /= side;
    }
    v
}

fn box_size(dim: usize, bound: i64) -> u64 {
    ((2 * bound + 1) as u64).pow(dim as u32)
}

fn is_nilpotent(p: &ChowPresentation, v: &[i64], power: u32) -> bool {
    p.linear(v).pow(power).is_zero()
}

/// All canonical primitive classes in the box with `x^{n+1} = 0`.
pub fn nilpotent_degree_one_classes(p: &ChowPresentation, bound: i64) -> Vec<DegreeOneClass> {
    nilpotent_degree_one_classes_with(p, bound, Strategy::default())
}

pub fn nilpotent_degree_one_classes_with(p: &ChowPresentation, bound: i64, strategy: Strategy) -> Vec<DegreeOneClass> {
    let dim = p.nvars();
    let mut classes = filter_map_range(strategy, box_size(dim, bound), |idx| {
        let v = box_vector(idx, dim, bound);
        if !is_sign_canonical(&v) || !is_primitive(&v) || !is_nilpotent(p, &v, p.n() + 1) {
            return None;
        }
        DegreeOneClass::canonical(v)
    });
    classes.sort();
    classes
}

/// Which exceptional configuration allows an isomorphism not over `Aut(P^n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SecondFibration {
    /// Every factor is trivial up to a twist.
    TrivialUpToTwist,
    /// One tangent factor, all others trivial up to a twist.
    TangentPlusTrivial,
    None,
}

impl SecondFibration {
    pub fn exists(self) -> bool {
        self != SecondFibration::None
    }
}

impl fmt::Display for SecondFibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SecondFibration::TrivialUpToTwist => "trivial-up-to-twist",
            SecondFibration::TangentPlusTrivial => "tangent-plus-trivial",
            SecondFibration::None => "none",
        })
    }
}

pub fn second_fibration_exists(n: u32, factors: &[BundleDescriptor]) -> Result<SecondFibration, Error> {
    for d in factors {
        d.validate(n)?;
    }
    let tangents = factors.iter().filter(|d| d.is_tangent()).count();
    let others_trivial = factors.iter().filter(|d| !d.is_tangent()).all(BundleDescriptor::is_trivial_up_to_twist);
    Ok(match (tangents, others_trivial) {
        (0, true) => SecondFibration::TrivialUpToTwist,
        (1, true) => SecondFibration::TangentPlusTrivial,
        _ => SecondFibration::None,
    })
}

/// Monic homogeneous form `F(Y, X) = Σ_k e_k Y^{d-k} X^k` with `e_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicForm {
    coeffs: Vec<BigRational>,
}

impl MonicForm {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    /// Average of the roots of `F(Y, 1)`: `-e_1 / d`.
    pub fn root_average(&self) -> BigRational {
        -self.coeffs[1].clone() / BigRational::from_integer(BigInt::from(self.degree()))
    }
}

impl fmt::Display for MonicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let mut parts = Vec::new();
            if d - k > 0 {
                parts.push(if d - k == 1 { "Y".to_string() } else { format!("Y^{}", d - k) });
            }
            if k > 0 {
                parts.push(if k == 1 { "X".to_string() } else { format!("X^{k}") });
            }
            if !abs.is_one() {
                parts.insert(0, abs.to_string());
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonicSolve {
    Found(Vec<MonicForm>),
    /// No rational monic form exists for `ys[index]`.
    Failed { index: usize },
}

/// For each `i`, looks for rational `e_{i,k}` with
/// `y_i^{d_i} + e_{i,1} y_i^{d_i-1} x + .. + e_{i,d_i} x^{d_i} = 0` in the ring.
///
/// Consistency of a linear system with rational coefficients does not depend
/// on the field, so a failure here also rules out complex solutions.
pub fn solve_monic_forms(
    p: &ChowPresentation,
    x: &[i64],
    ys: &[Vec<i64>],
    degrees: &[usize],
) -> Result<MonicSolve, Error> {
    let nvars = p.nvars();
    if x.len() != nvars || ys.iter().any(|y| y.len() != nvars) {
        return Err(Error::Dimension(format!("classes must have {nvars} coefficients")));
    }
    if ys.len() != degrees.len() {
        return Err(Error::Dimension(format!(
            "{} classes but {} degrees",
            ys.len(),
            degrees.len()
        )));
    }
    if let Some(d) = degrees.iter().find(|&&d| d < 2) {
        return Err(Error::Dimension(format!("form degree {d} < 2")));
    }
    let xe = p.linear(x);
    let max_d = degrees.iter().copied().max().unwrap_or(0);
    let xpow = powers(&xe, max_d);
    let mut forms = Vec::with_capacity(ys.len());
    for (index, (y, &d)) in ys.iter().zip(degrees).enumerate() {
        let ypow = powers(&p.linear(y), d);
        let vecs: Vec<Vec<BigRational>> = (0..=d)
            .map(|k| {
                (&ypow[d - k] * &xpow[k])
                    .coordinates()
                    .into_iter()
                    .map(BigRational::from_integer)
                    .collect()
            })
            .collect();
        let rhs: Vec<BigRational> = vecs[0].iter().map(|c| -c.clone()).collect();
        match solve_columns(&vecs[1..], &rhs) {
            Some(sol) => {
                let mut coeffs = vec![BigRational::one()];
                coeffs.extend(sol);
                forms.push(MonicForm { coeffs });
            }
            None => return Ok(MonicSolve::Failed { index }),
        }
    }
    Ok(MonicSolve::Found(forms))
}

fn powers<'p>(e: &ChowElement<'p>, k: usize) -> Vec<ChowElement<'p>> {
    let mut out = vec![e.presentation().one()];
    for i in 0..k {
        let next = &out[i] * e;
        out.push(next);
    }
    out
}

/// Outcome of checking one instance of the two-factor quadratic lemma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaAlgReport {
    pub matrix: Vec<Vec<i64>>,
    pub n: u32,
    pub g1: Poly,
    pub g2: Poly,
    /// `x^{n+1} = 0`.
    pub x_nilpotent: bool,
    pub forms: MonicSolve,
    /// Root averages of `g_1`, `g_2`.
    pub alpha: [BigRational; 2],
    /// `a + b_1 α_1 + b_2 α_2 = 0`.
    pub centered: bool,
    pub hypotheses_hold: bool,
    /// `b_1 b_2 = 0`.
    pub conclusion_holds: bool,
    pub counterexample: bool,
}

/// Homogenizes a monic quadratic in `U_var` and returns it with its root average.
fn homogenize_quadratic(g: &Poly, var: usize) -> Result<(Poly, BigRational), Error> {
    if g.support_vars().iter().any(|&v| v != var) {
        return Err(Error::InvalidRelation(format!("g{var} = {g} must be a polynomial in u{var} only")));
    }
    if g.total_degree() != Some(2) {
        return Err(Error::InvalidRelation(format!("g{var} = {g} is not quadratic")));
    }
    let mut lead = vec![0u32; g.nvars()];
    lead[var] = 2;
    if !g.coefficient(&Monomial::new(lead)).is_one() {
        return Err(Error::InvalidRelation(format!("g{var} = {g} is not monic")));
    }
    let mut h = Poly::zero(g.nvars());
    let mut linear = BigInt::zero();
    for (m, c) in g.terms() {
        let j = m.exponent(var);
        if j == 1 {
            linear = c.clone();
        }
        let mut exps = m.exponents().to_vec();
        exps[0] = 2 - j;
        h.add_term(Monomial::new(exps), c.clone());
    }
    let alpha = BigRational::new(-linear, BigInt::from(2));
    Ok((h, alpha))
}

/// Checks the statement: for unimodular `A` with rows `(a, b_1, b_2)`, ..,
/// if `x = a t + b_1 u_1 + b_2 u_2` has `x^{n+1} = 0`, monic quadratics
/// `F_i(y_i, x) = 0` exist and the root averages satisfy
/// `a + b_1 α_1 + b_2 α_2 = 0`, then `b_1 b_2 = 0`.
///
/// `g1`, `g2` are monic quadratics in `u1`, `u2` over the ring `(t, u1, u2)`;
/// repeated roots are allowed.
pub fn lemma_alg_check(matrix: &[Vec<i64>], g1: &Poly, g2: &Poly, n: u32) -> Result<LemmaAlgReport, Error> {
    if n < 2 {
        return Err(Error::Regime(format!("base dimension must be >= 2 (got {n})")));
    }
    if matrix.len() != 3 || matrix.iter().any(|row| row.len() != 3) {
        return Err(Error::MatrixShape { expected: 3 });
    }
    if g1.nvars() != 3 || g2.nvars() != 3 {
        return Err(Error::VariableCount {
            left: g1.nvars().max(g2.nvars()),
            right: 3,
        });
    }
    if determinant(matrix).abs() != BigInt::one() {
        return Err(Error::Dimension("matrix is not unimodular".into()));
    }
    let (h1, alpha1) = homogenize_quadratic(g1, 1)?;
    let (h2, alpha2) = homogenize_quadratic(g2, 2)?;
    let p = ChowPresentation::from_relations(n, vec![h1, h2])?;

    let x = &matrix[0];
    let x_nilpotent = is_nilpotent(&p, x, n + 1);
    let forms = solve_monic_forms(&p, x, &matrix[1..], &[2, 2])?;
    let (a, b1, b2) = (x[0], x[1], x[2]);
    let centering = BigRational::from_integer(a.into())
        + BigRational::from_integer(b1.into()) * &alpha1
        + BigRational::from_integer(b2.into()) * &alpha2;
    let centered = centering.is_zero();
    let hypotheses_hold = x_nilpotent && matches!(forms, MonicSolve::Found(_)) && centered;
    let conclusion_holds = b1 == 0 || b2 == 0;
    Ok(LemmaAlgReport {
        matrix: matrix.to_vec(),
        n,
        g1: g1.clone(),
        g2: g2.clone(),
        x_nilpotent,
        forms,
        alpha: [alpha1, alpha2],
        centered,
        hypotheses_hold,
        conclusion_holds,
        counterexample: hypotheses_hold && !conclusion_holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaAlgInstance {
    pub matrix: Vec<Vec<i64>>,
    pub g1: Poly,
    pub g2: Poly,
    pub n: u32,
}

/// Seeded random instances: unimodular `A` with `b_1 b_2 != 0`, integer monic
/// quadratics, `n ∈ {2, 3}`. About a third are generic, a third satisfy the
/// centering condition, and a third also have double roots
/// `g_i = (U_i - α_i)^2`, which is what nilpotency of `x` forces under
/// centering.
pub fn random_lemma_alg_instances(count: usize, seed: u64) -> Vec<LemmaAlgInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let matrix = random_unimodular_3x3(&mut rng);
            let (a, b1, b2) = (matrix[0][0], matrix[0][1], matrix[0][2]);
            let mut coeffs = [
                rng.gen_range(-4..=4),
                rng.gen_range(-4..=4),
                rng.gen_range(-4..=4),
                rng.gen_range(-4..=4),
            ];
            match rng.gen_range(0..3) {
                0 => {}
                1 => {
                    // 2a = b1·p1 + b2·p2 makes the root averages centered
                    for p1 in -6..=6i64 {
                        let rest = 2 * a - b1 * p1;
                        if rest % b2 == 0 {
                            coeffs[0] = p1;
                            coeffs[2] = rest / b2;
                            break;
                        }
                    }
                }
                _ => {
                    // a + b1·α1 + b2·α2 = 0 with integer double roots α_i
                    for al1 in -6..=6i64 {
                        let rest = -a - b1 * al1;
                        if rest % b2 == 0 {
                            let al2 = rest / b2;
                            coeffs = [-2 * al1, al1 * al1, -2 * al2, al2 * al2];
                            break;
                        }
                    }
                }
            }
            let quad = |var: usize, p: i64, q: i64| {
                let u = Poly::var(3, var);
                &(&(&u * &u) + &u.scale(&BigInt::from(p))) + &Poly::constant(3, q)
            };
            LemmaAlgInstance {
                g1: quad(1, coeffs[0], coeffs[1]),
                g2: quad(2, coeffs[2], coeffs[3]),
                n: rng.gen_range(2..=3),
                matrix,
            }
        })
        .collect()
}

fn random_unimodular_3x3(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    loop {
        let mut m = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        for _ in 0..rng.gen_range(4..=10) {
            let i = rng.gen_range(0..3);
            let j = (i + rng.gen_range(1..3)) % 3;
            match rng.gen_range(0..4) {
                0 => m.swap(i, j),
                1 => m[i].iter_mut().for_each(|c| *c = -*c),
                _ => {
                    let k = if rng.gen_bool(0.5) { rng.gen_range(1..=2) } else { -rng.gen_range(1..=2) };
                    let src = m[j].clone();
                    for (c, s) in m[i].iter_mut().zip(src) {
                        *c += k * s;
                    }
                }
            }
        }
        let small = m.iter().flatten().all(|c| c.abs() <= 12);
        if small && m[0][1] != 0 && m[0][2] != 0 {
            return m;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarnessSummary {
    pub instances: usize,
    pub nilpotent: usize,
    pub forms_found: usize,
    pub hypotheses_held: usize,
    pub centered: usize,
    pub counterexamples: Vec<LemmaAlgReport>,
}

pub fn lemma_alg_harness(count: usize, seed: u64, strategy: Strategy) -> Result<HarnessSummary, Error> {
    let instances = random_lemma_alg_instances(count, seed);
    let reports = map_slice(strategy, &instances, |inst| lemma_alg_check(&inst.matrix, &inst.g1, &inst.g2, inst.n));
    let reports = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(HarnessSummary {
        instances: reports.len(),
        nilpotent: reports.iter().filter(|r| r.x_nilpotent).count(),
        forms_found: reports.iter().filter(|r| matches!(r.forms, MonicSolve::Found(_))).count(),
        hypotheses_held: reports.iter().filter(|r| r.hypotheses_hold).count(),
        centered: reports.iter().filter(|r| r.centered).count(),
        counterexamples: reports.into_iter().filter(|r| r.counterexample).collect(),
    })
}

/// Whether sending `(t, u_1, .., u_r)` of `left` to the rows of `m` in `right`
/// maps every relation of `left` into the ideal of `right`.
pub fn maps_relations(left: &ChowPresentation, right: &ChowPresentation, m: &[Vec<i64>]) -> bool {
    if left.nvars() != right.nvars() || m.len() != right.nvars() {
        return false;
    }
    let images: Vec<Poly> = m.iter().map(|row| Poly::linear(row)).collect();
    left.relations()
        .iter()
        .all(|rel| right.normal_form(&rel.substitute(&images)).is_zero())
}

type DistanceKey = (i64, Vec<i64>);

fn distance_key(m: &[Vec<i64>]) -> DistanceKey {
    let dist = m
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &c)| (c - i64::from(i == j)).abs()))
        .sum();
    (dist, m.iter().flatten().copied().collect())
}

/// Searches unimodular integer matrices with entries in `[-bound, bound]`
/// that induce a graded ring isomorphism `A(left) -> A(right)`.
///
/// Among all hits, returns the one closest to the identity (entrywise L1
/// distance, ties broken by row-major order). A hit certifies a ring
/// isomorphism, which is necessary but not sufficient for the varieties to
/// be isomorphic; `None` only rules out matrices inside the box.
pub fn chow_structure_search(left: &ChowPresentation, right: &ChowPresentation, bound: i64) -> Option<Vec<Vec<i64>>> {
    chow_structure_search_with(left, right, bound, Strategy::default())
}

pub fn chow_structure_search_with(
    left: &ChowPresentation,
    right: &ChowPresentation,
    bound: i64,
    strategy: Strategy,
) -> Option<Vec<Vec<i64>>> {
    if left.r() != right.r() || left.betti() != right.betti() {
        return None;
    }
    let dim = right.nvars();
    // rows of a unimodular matrix are primitive
    let prims: Vec<Vec<i64>> = (0..box_size(dim, bound))
        .map(|idx| box_vector(idx, dim, bound))
        .filter(|v| is_primitive(v))
        .collect();
    let xs: Vec<&Vec<i64>> = prims
        .iter()
        .filter(|v| is_nilpotent(right, v, left.n() + 1))
        .collect();

    let best = map_slice(strategy, &xs, |x| {
        let xe = right.linear(x);
        let mut row_choices: Vec<Vec<&Vec<i64>>> = Vec::with_capacity(left.r());
        for i in 1..=left.r() {
            let g = &left.relations()[i];
            let deg = g.homogeneous_degree().unwrap_or(0) as usize;
            let xpow = powers(&xe, deg);
            let ys: Vec<&Vec<i64>> = prims
                .iter()
                .filter(|y| {
                    let ypow = powers(&right.linear(y), deg);
                    let mut acc = right.zero();
                    for (m, c) in g.terms() {
                        let term = &xpow[m.exponent(0) as usize] * &ypow[m.exponent(i) as usize];
                        let scaled = right.normal_form(&term.value().scale(c));
                        acc = &acc + &scaled;
                    }
                    acc.is_zero()
                })
                .collect();
            if ys.is_empty() {
                return None;
            }
            row_choices.push(ys);
        }
        best_combination(x, &row_choices)
    });
    best.into_iter().flatten().min_by(|a, b| distance_key(a).cmp(&distance_key(b)))
}

fn best_combination(x: &[i64], rows: &[Vec<&Vec<i64>>]) -> Option<Vec<Vec<i64>>> {
    let mut best: Option<(Vec<Vec<i64>>, DistanceKey)> = None;
    let mut idx = vec![0usize; rows.len()];
    loop {
        let mut m = Vec::with_capacity(rows.len() + 1);
        m.push(x.to_vec());
        m.extend(idx.iter().zip(rows).map(|(&k, choices)| choices[k].clone()));
        if determinant(&m).abs().is_one() {
            let key = distance_key(&m);
            if best.as_ref().is_none_or(|(_, k)| key < *k) {
                best = Some((m, key));
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == rows.len() {
                return best.map(|(m, _)| m);
            }
            idx[pos] += 1;
            if idx[pos] < rows[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
