#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::process::Command;

use bundlechow::{BundleDescriptor, ChowPresentation, Monomial, Poly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

pub type Dense = BTreeMap<Vec<u32>, BigRational>;

/// Chern coefficients by direct expansion of `Π(1 + d t)` or `(1 + t)^{n+1}`.
pub fn chern_naive(d: &BundleDescriptor, n: u32) -> Vec<BigInt> {
    let factors: Vec<i64> = match d {
        BundleDescriptor::Split { twists } => twists.clone(),
        BundleDescriptor::Tangent => vec![1; n as usize + 1],
    };
    let mut c = vec![BigInt::one()];
    for d in factors {
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (k, ck) in c.iter().enumerate() {
            next[k] += ck;
            next[k + 1] += ck * d;
        }
        c = next;
    }
    c.truncate(n as usize + 1);
    c
}

/// `Σ_k (-1)^k c_k U_i^{rank-k} T^k` as a dense map over `(T, U_1, .., U_r)`.
pub fn relation_naive(c: &[BigInt], rank: usize, var: usize, nvars: usize) -> BTreeMap<Vec<u32>, BigInt> {
    let mut out = BTreeMap::new();
    for k in 0..=rank {
        let ck = c.get(k).cloned().unwrap_or_default();
        if ck.is_zero() {
            continue;
        }
        let mut e = vec![0u32; nvars];
        e[0] = k as u32;
        e[var] = (rank - k) as u32;
        out.insert(e, if k % 2 == 0 { ck } else { -ck });
    }
    out
}

/// `Π_j (U - d_j T)` expanded in two variables `(T, U)`.
pub fn split_product_naive(twists: &[i64]) -> BTreeMap<Vec<u32>, BigInt> {
    let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::from([(vec![0, 0], BigInt::one())]);
    for &d in twists {
        let mut next: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e, c) in &acc {
            *next.entry(vec![e[0], e[1] + 1]).or_default() += c;
            *next.entry(vec![e[0] + 1, e[1]]).or_default() -= c * d;
        }
        acc = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    }
    acc
}

pub fn poly_map(p: &Poly) -> BTreeMap<Vec<u32>, BigInt> {
    p.terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect()
}

fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: usize, d: u32, out: &mut Vec<Vec<u32>>) {
        if left == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in 0..=d {
            prefix.push(e);
            rec(prefix, left - 1, d - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), nvars, d, &mut out);
    out
}

struct DegreeData {
    /// pivot column -> reduced row (dense over `cols`)
    rows: Vec<(usize, Vec<BigRational>)>,
    cols: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    standard: Vec<Vec<u32>>,
}

/// Independent model of the quotient: for each degree, the span of all
/// `monomial · relation` products is row-reduced densely over `Q`, with
/// monomials divisible by `T^{n+1}` or `U_i^{q_i+1}` as preferred pivots.
pub struct DenseOracle {
    nvars: usize,
    relations: Vec<BTreeMap<Vec<u32>, BigInt>>,
    leads: Vec<Vec<u32>>,
    cache: RefCell<HashMap<u32, std::rc::Rc<DegreeData>>>,
}

impl DenseOracle {
    pub fn new(n: u32, factors: &[BundleDescriptor]) -> Self {
        let nvars = factors.len() + 1;
        let mut leads = Vec::new();
        let mut top = vec![0u32; nvars];
        top[0] = n + 1;
        leads.push(top.clone());
        let mut relations = vec![BTreeMap::from([(top, BigInt::one())])];
        for (i, d) in factors.iter().enumerate() {
            let rank = match d {
                BundleDescriptor::Split { twists } => twists.len(),
                BundleDescriptor::Tangent => n as usize,
            };
            let rel = relation_naive(&chern_naive(d, n), rank, i + 1, nvars);
            let mut lead = vec![0u32; nvars];
            lead[i + 1] = rank as u32;
            leads.push(lead);
            relations.push(rel);
        }
        DenseOracle {
            nvars,
            relations,
            leads,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn relations(&self) -> &[BTreeMap<Vec<u32>, BigInt>] {
        &self.relations
    }

    fn reducible(&self, m: &[u32]) -> bool {
        self.leads.iter().any(|l| l.iter().zip(m).all(|(a, b)| a <= b))
    }

    fn degree(&self, d: u32) -> std::rc::Rc<DegreeData> {
        if let Some(dd) = self.cache.borrow().get(&d) {
            return dd.clone();
        }
        let all = monomials_of_degree(self.nvars, d);
        let (mut cols, standard): (Vec<_>, Vec<_>) = all.into_iter().partition(|m| self.reducible(m));
        let n_red = cols.len();
        cols.extend(standard.iter().cloned());
        let index: HashMap<Vec<u32>, usize> = cols.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();

        let mut gens: Vec<Vec<BigRational>> = Vec::new();
        for rel in &self.relations {
            let e: u32 = rel.keys().next().map(|k| k.iter().sum()).unwrap_or(0);
            if e > d {
                continue;
            }
            for m in monomials_of_degree(self.nvars, d - e) {
                let mut row = vec![BigRational::zero(); cols.len()];
                for (k, c) in rel {
                    let prod: Vec<u32> = k.iter().zip(&m).map(|(a, b)| a + b).collect();
                    row[index[&prod]] += BigRational::from_integer(c.clone());
                }
                gens.push(row);
            }
        }
        // Gauss-Jordan
        let mut rows: Vec<(usize, Vec<BigRational>)> = Vec::new();
        for mut g in gens {
            for (p, r) in &rows {
                if !g[*p].is_zero() {
                    let f = g[*p].clone();
                    for (x, y) in g.iter_mut().zip(r) {
                        *x -= &f * y;
                    }
                }
            }
            let Some(p) = g.iter().position(|x| !x.is_zero()) else { continue };
            let inv = g[p].recip();
            for x in g.iter_mut() {
                *x *= &inv;
            }
            for (_, r) in rows.iter_mut() {
                if !r[p].is_zero() {
                    let f = r[p].clone();
                    for (x, y) in r.iter_mut().zip(&g) {
                        *x -= &f * y;
                    }
                }
            }
            rows.push((p, g));
        }
        assert_eq!(rows.len(), n_red, "relations span exactly the reducible monomials in degree {d}");
        assert!(rows.iter().all(|(p, _)| *p < n_red));
        let dd = std::rc::Rc::new(DegreeData {
            rows,
            cols,
            index,
            standard,
        });
        self.cache.borrow_mut().insert(d, dd.clone());
        dd
    }

    /// `dim_Q` of the degree-`d` part of the quotient.
    pub fn quotient_rank(&self, d: u32) -> usize {
        self.degree(d).standard.len()
    }

    /// Coordinates of `f` modulo the ideal, on the standard monomials.
    pub fn reduce(&self, f: &Poly) -> Dense {
        let mut by_degree: BTreeMap<u32, Vec<(Vec<u32>, BigInt)>> = BTreeMap::new();
        for (m, c) in f.terms() {
            by_degree.entry(m.degree()).or_default().push((m.exponents().to_vec(), c.clone()));
        }
        let mut out = Dense::new();
        for (d, terms) in by_degree {
            let dd = self.degree(d);
            let mut v = vec![BigRational::zero(); dd.cols.len()];
            for (m, c) in terms {
                v[dd.index[&m]] += BigRational::from_integer(c);
            }
            for (p, r) in &dd.rows {
                if !v[*p].is_zero() {
                    let f = v[*p].clone();
                    for (x, y) in v.iter_mut().zip(r) {
                        *x -= &f * y;
                    }
                }
            }
            for (m, x) in dd.cols.iter().zip(v) {
                if !x.is_zero() {
                    out.insert(m.clone(), x);
                }
            }
        }
        out
    }
}

pub fn dense_of(p: &Poly) -> Dense {
    p.terms()
        .map(|(m, c)| (m.exponents().to_vec(), BigRational::from_integer(c.clone())))
        .collect()
}

pub fn random_split(rng: &mut ChaCha8Rng, rank: usize, span: i64) -> BundleDescriptor {
    BundleDescriptor::split((0..rank).map(|_| rng.gen_range(-span..=span)).collect::<Vec<_>>())
}

/// Random factor list over `P^n` with `r` factors of rank in `2..=max_rank`;
/// a tangent factor appears occasionally when allowed.
pub fn random_factors(rng: &mut ChaCha8Rng, n: u32, r: usize, max_rank: usize) -> Vec<BundleDescriptor> {
    (0..r)
        .map(|_| {
            if n >= 2 && n as usize <= max_rank && rng.gen_bool(0.2) {
                BundleDescriptor::Tangent
            } else {
                let rank = rng.gen_range(2..=max_rank);
                random_split(rng, rank, 3)
            }
        })
        .collect()
}

pub fn random_homogeneous(rng: &mut ChaCha8Rng, nvars: usize, degree: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(nvars);
    for _ in 0..terms {
        let mut e = vec![0u32; nvars];
        for _ in 0..degree {
            e[rng.gen_range(0..nvars)] += 1;
        }
        p.add_term(Monomial::new(e), BigInt::from(rng.gen_range(-9i64..=9)));
    }
    p
}

pub fn presentation(n: u32, factors: &[BundleDescriptor]) -> ChowPresentation {
    ChowPresentation::build(n, factors).expect("valid presentation")
}

pub fn is_unimodular3(m: &[Vec<i64>]) -> bool {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    det.abs() == 1
}

/// Primitive with first nonzero coefficient positive.
pub fn canonical_sign(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &c| num_integer::gcd(g, c));
    let mut w: Vec<i64> = v.iter().map(|c| c / g.max(1)).collect();
    if w.iter().find(|c| **c != 0).is_some_and(|c| c.is_negative()) {
        w.iter_mut().for_each(|c| *c = -*c);
    }
    w
}

// ---- golden CLI corpus ----

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenCase {
    pub name: String,
    pub args: Vec<String>,
    #[serde(default)]
    pub env: BTreeMap<String, String>,
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn spec_path(name: &str) -> String {
    golden_dir().join("specs").join(format!("{name}.json")).display().to_string()
}

pub fn run_bin(args: &[String], env: &BTreeMap<String, String>) -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_bundlechow"))
        .args(args)
        .env_remove("BUNDLECHOW_MAX_BASIS")
        .envs(env)
        .output()
        .expect("binary runs");
    Outcome {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn golden_cases() -> Vec<GoldenCase> {
    let text = std::fs::read_to_string(golden_dir().join("cases.json")).expect("golden manifest");
    serde_json::from_str(&text).expect("golden manifest parses")
}

fn render(o: &Outcome, dir: &str) -> String {
    format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        o.code,
        o.stdout.replace(dir, "$G"),
        o.stderr.replace(dir, "$G")
    )
}

/// Runs every golden case; `BUNDLECHOW_BLESS=1` rewrites the expected files.
pub fn check_goldens() -> Vec<(String, Result<(), String>)> {
    let dir = golden_dir();
    let dir_s = dir.display().to_string();
    let bless = std::env::var_os("BUNDLECHOW_BLESS").is_some();
    golden_cases()
        .into_iter()
        .map(|case| {
            let args: Vec<String> = case.args.iter().map(|a| a.replace("$G", &dir_s)).collect();
            let got = render(&run_bin(&args, &case.env), &dir_s);
            let path = dir.join("expected").join(format!("{}.out", case.name));
            if bless {
                std::fs::create_dir_all(path.parent().unwrap()).unwrap();
                std::fs::write(&path, &got).unwrap();
            }
            let result = match std::fs::read_to_string(&path) {
                Ok(want) if want == got => Ok(()),
                Ok(want) => Err(format!("mismatch\n--- want\n{want}\n--- got\n{got}")),
                Err(e) => Err(format!("missing {}: {e}", path.display())),
            };
            (case.name, result)
        })
        .collect()
}
