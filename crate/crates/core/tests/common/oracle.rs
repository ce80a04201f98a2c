//! Brute-force feasibility oracle, independent of the library's certifier.
//!
//! A system is feasible iff some finite ontic space carries distributions
//! meeting every constraint pointwise. Carathéodory bounds the space by the
//! variable count (≤ 4 here), so the oracle tries ontic spaces of 1 to 4
//! points with every assignment of a zero-pattern to each point. Each
//! resulting exact linear program is decided by enumerating basic solutions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use contextuality::nogo::ConstraintSystem;
use contextuality::rational::ratio;
use rand::Rng;

#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Frac {
    n: i128,
    d: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Frac {
    pub fn new(n: i128, d: i128) -> Frac {
        assert!(d != 0);
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Frac {
            n: s * n / g,
            d: s * d / g,
        }
    }
    pub fn int(n: i128) -> Frac {
        Frac { n, d: 1 }
    }
    pub fn is_zero(self) -> bool {
        self.n == 0
    }
    pub fn is_neg(self) -> bool {
        self.n < 0
    }
    pub fn parts(self) -> (i64, i64) {
        (self.n as i64, self.d as i64)
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.n, self.d)
    }
}

impl Add for Frac {
    type Output = Frac;
    fn add(self, o: Frac) -> Frac {
        Frac::new(
            self.n.checked_mul(o.d).unwrap() + o.n.checked_mul(self.d).unwrap(),
            self.d.checked_mul(o.d).unwrap(),
        )
    }
}
impl Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac { n: -self.n, d: self.d }
    }
}
impl Sub for Frac {
    type Output = Frac;
    fn sub(self, o: Frac) -> Frac {
        self + (-o)
    }
}
impl Mul for Frac {
    type Output = Frac;
    fn mul(self, o: Frac) -> Frac {
        Frac::new(self.n.checked_mul(o.n).unwrap(), self.d.checked_mul(o.d).unwrap())
    }
}
impl Div for Frac {
    type Output = Frac;
    fn div(self, o: Frac) -> Frac {
        Frac::new(self.n.checked_mul(o.d).unwrap(), self.d.checked_mul(o.n).unwrap())
    }
}

/// Plain description of a random system.
#[derive(Clone, Debug)]
pub struct Instance {
    pub nvars: usize,
    pub pairs: Vec<(usize, usize)>,
    pub groups: Vec<Vec<Frac>>,
}

impl Instance {
    pub fn to_system(&self) -> ConstraintSystem {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let pairs: Vec<(&str, &str)> = self.pairs.iter().map(|&(a, b)| (refs[a], refs[b])).collect();
        let groups: Vec<Vec<_>> = self
            .groups
            .iter()
            .map(|g| {
                g.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(v, c)| {
                        let (n, d) = c.parts();
                        (refs[v], ratio(n, d))
                    })
                    .collect()
            })
            .collect();
        ConstraintSystem::new(&refs, &pairs, &groups).unwrap()
    }
}

const COEFFS: [(i128, i128); 9] = [(1, 1), (1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (2, 1), (1, 6), (-1, 2)];

/// Random system with 1–4 variables, 0–2 pairs and 0–3 groups.
pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let nvars = rng.random_range(1..=4);
    let mut pairs = Vec::new();
    if nvars >= 2 {
        let want = rng.random_range(0..=2);
        for _ in 0..want * 4 {
            if pairs.len() == want {
                break;
            }
            let a = rng.random_range(0..nvars);
            let b = rng.random_range(0..nvars);
            if a != b && !pairs.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
                pairs.push((a, b));
            }
        }
    }
    let ngroups = rng.random_range(0..=3);
    let groups = (0..ngroups)
        .map(|_| {
            let mut g: Vec<Frac> = (0..nvars)
                .map(|_| {
                    if rng.random_bool(0.55) {
                        // Negative coefficients are rare but allowed.
                        let top = COEFFS.len() - usize::from(rng.random_bool(0.9));
                        let (n, d) = COEFFS[rng.random_range(0..top)];
                        Frac::new(n, d)
                    } else {
                        Frac::int(0)
                    }
                })
                .collect();
            if g.iter().all(|c| c.is_zero()) {
                let v = rng.random_range(0..nvars);
                g[v] = Frac::new(1, 2);
            }
            g
        })
        .collect();
    Instance { nvars, pairs, groups }
}

/// Columns `cols` of `a` against `b`: is there `x ≥ 0` supported there with
/// linearly independent columns?
fn basic_solution(a: &[Vec<Frac>], b: &[Frac], cols: &[usize]) -> bool {
    let k = cols.len();
    let mut m: Vec<Vec<Frac>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r: Vec<Frac> = cols.iter().map(|&c| row[c]).collect();
            r.push(rhs);
            r
        })
        .collect();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            return false; // dependent columns
        };
        m.swap(row, p);
        let inv = Frac::int(1) / m[row][col];
        for v in m[row].iter_mut() {
            *v = *v * inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in 0..=k {
                    m[r][c] = m[r][c] - f * m[row][c];
                }
            }
        }
        row += 1;
    }
    if m[row..].iter().any(|r| !r[k].is_zero()) {
        return false;
    }
    (0..k).all(|i| !m[i][k].is_neg())
}

fn lp_feasible(a: &[Vec<Frac>], b: &[Frac], ncols: usize) -> bool {
    let max = ncols.min(a.len());
    let mut cols = Vec::new();
    fn rec(a: &[Vec<Frac>], b: &[Frac], ncols: usize, max: usize, start: usize, cols: &mut Vec<usize>) -> bool {
        if basic_solution(a, b, cols) {
            return true;
        }
        if cols.len() == max {
            return false;
        }
        for c in start..ncols {
            cols.push(c);
            if rec(a, b, ncols, max, c + 1, cols) {
                return true;
            }
            cols.pop();
        }
        false
    }
    rec(a, b, ncols, max, 0, &mut cols)
}

/// Non-decreasing sequences of length `k` over `0..n`: one zero-pattern
/// per ontic point, up to relabeling the points.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for s in multisets(n, k - 1) {
        let from = s.last().copied().unwrap_or(0);
        for x in from..n {
            let mut t = s.clone();
            t.push(x);
            out.push(t);
        }
    }
    out
}

pub const MAX_ONTIC_SIZE: usize = 4;

pub fn oracle_feasible(inst: &Instance) -> bool {
    let n = inst.nvars;
    let p = inst.pairs.len();
    let mut patterns: Vec<Vec<bool>> = Vec::new();
    for mask in 0..1usize << p {
        let mut zero = vec![false; n];
        for (k, &(x, y)) in inst.pairs.iter().enumerate() {
            zero[if mask >> k & 1 == 0 { x } else { y }] = true;
        }
        if !patterns.contains(&zero) {
            patterns.push(zero);
        }
    }
    for size in 1..=MAX_ONTIC_SIZE {
        for chosen in multisets(patterns.len(), size) {
            // Unknowns: (point, variable) for variables not zeroed at that point.
            let mut index = Vec::new();
            for (pt, &pat) in chosen.iter().enumerate() {
                for v in 0..n {
                    if !patterns[pat][v] {
                        index.push((pt, v));
                    }
                }
            }
            let mut a = Vec::new();
            let mut b = Vec::new();
            for pt in 0..size {
                for g in inst.groups.iter().skip(1) {
                    a.push(
                        index
                            .iter()
                            .map(|&(q, v)| {
                                if q == pt {
                                    inst.groups[0][v] - g[v]
                                } else {
                                    Frac::int(0)
                                }
                            })
                            .collect(),
                    );
                    b.push(Frac::int(0));
                }
            }
            for v in 0..n {
                a.push(
                    index
                        .iter()
                        .map(|&(_, w)| if w == v { Frac::int(1) } else { Frac::int(0) })
                        .collect(),
                );
                b.push(Frac::int(1));
            }
            if lp_feasible(&a, &b, index.len()) {
                return true;
            }
        }
    }
    false
}
