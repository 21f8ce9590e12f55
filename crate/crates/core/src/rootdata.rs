//! Root systems of simple type and weight-lattice arithmetic.
//!
//! Weights are integer vectors in the fundamental-weight basis, so the `i`-th
//! coordinate of `λ` is `⟨λ, α_i^∨⟩`. Roots are stored in the simple-root basis.
//! The Cartan matrix follows the convention `A[i][j] = ⟨α_i, α_j^∨⟩`, so row `i`
//! is the simple root `α_i` written in fundamental weights. Simple roots are
//! numbered as in Bourbaki.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// A simple Cartan type such as `A2` or `G2`.
///
/// `B2` and `C2` are both accepted; they differ only in which simple root is
/// called long.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    family: Family,
    rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(Self { family, rank })
        } else {
            Err(Error::InvalidCartanType { family: family.letter(), rank })
        }
    }

    pub fn family(self) -> Family {
        self.family
    }

    pub fn rank(self) -> usize {
        self.rank
    }

    /// Name of the associated affine Coxeter system, e.g. `A2~`.
    pub fn affine_name(self) -> String {
        format!("{self}~")
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| Error::UnknownCartanType(s.to_string()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnknownCartanType(s.to_string()))?;
        CartanType::new(family, rank)
    }
}

impl Serialize for CartanType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CartanType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An integral weight in fundamental-weight coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// `0 <= λ_i < p` for every coordinate.
    pub fn is_restricted(&self, p: u32) -> bool {
        self.0.iter().all(|&c| (0..p as i64).contains(&c))
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|&c| c * k).collect())
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl<const N: usize> From<[i64; N]> for Weight {
    fn from(v: [i64; N]) -> Self {
        Weight(v.to_vec())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), rhs.rank());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses comma-separated coordinates, with or without surrounding brackets.
impl FromStr for Weight {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        if s.trim().is_empty() {
            return Ok(Weight(Vec::new()));
        }
        s.split(',').map(|t| t.trim().parse()).collect::<std::result::Result<_, _>>().map(Weight)
    }
}

/// Cartan data and positive roots of a simple root system.
#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan_type: CartanType,
    cartan: IntMatrix,
    /// `d_i = (α_i, α_i) / 2`, normalised so short roots have `d = 1`.
    symmetrizer: Vec<i64>,
    cartan_det: i64,
    cartan_adj: IntMatrix,
    positive_roots: Vec<Vec<i64>>,
    positive_root_weights: Vec<Weight>,
    coroots: Vec<Vec<i64>>,
    highest_short_root: usize,
    rho: Weight,
    coxeter_number: i64,
    height_coeffs: Vec<i64>,
    w0_matrix: IntMatrix,
    w0_word: Vec<usize>,
}

pub fn build_root_system(t: CartanType) -> RootSystem {
    RootSystem::new(t)
}

impl RootSystem {
    pub fn new(t: CartanType) -> Self {
        let n = t.rank();
        let cartan = cartan_matrix(t);
        let symmetrizer = symmetrizer(&cartan);
        let cartan_det = cartan.determinant();
        let cartan_adj = cartan.adjugate();

        let positive_roots = positive_roots(&cartan);
        let positive_root_weights: Vec<Weight> = positive_roots
            .iter()
            .map(|b| Weight((0..n).map(|j| (0..n).map(|i| b[i] * cartan.get(i, j)).sum()).collect()))
            .collect();
        let half_norm = |b: &[i64]| -> i64 {
            let mut s = 0;
            for i in 0..n {
                for j in 0..n {
                    s += b[i] * b[j] * cartan.get(i, j) * symmetrizer[j];
                }
            }
            debug_assert!(s % 2 == 0);
            s / 2
        };
        let coroots: Vec<Vec<i64>> = positive_roots
            .iter()
            .map(|b| {
                let d = half_norm(b);
                b.iter()
                    .zip(&symmetrizer)
                    .map(|(&c, &di)| {
                        debug_assert_eq!((c * di) % d, 0);
                        c * di / d
                    })
                    .collect()
            })
            .collect();

        let short = positive_roots.iter().map(|b| half_norm(b)).min().unwrap();
        let highest_short_root = (0..positive_roots.len())
            .filter(|&k| half_norm(&positive_roots[k]) == short)
            .max_by_key(|&k| positive_roots[k].iter().sum::<i64>())
            .unwrap();
        let coxeter_number = coroots[highest_short_root].iter().sum::<i64>() + 1;

        let height_coeffs = (0..n).map(|i| (0..n).map(|j| cartan_adj.get(i, j)).sum()).collect();

        let mut rs = RootSystem {
            cartan_type: t,
            cartan,
            symmetrizer,
            cartan_det,
            cartan_adj,
            positive_roots,
            positive_root_weights,
            coroots,
            highest_short_root,
            rho: Weight(vec![1; n]),
            coxeter_number,
            height_coeffs,
            w0_matrix: IntMatrix::identity(n),
            w0_word: Vec::new(),
        };
        // w0 by descent from -ρ into the dominant chamber.
        let mut v = -&rs.rho;
        let mut word = Vec::new();
        while let Some(i) = v.0.iter().position(|&c| c < 0) {
            v = rs.reflect(&v, i);
            word.push(i);
        }
        let mut m = IntMatrix::identity(n);
        for &i in word.iter().rev() {
            m = rs.simple_reflection_matrix(i).mul(&m);
        }
        rs.w0_matrix = m;
        rs.w0_word = word;
        rs
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank()
    }

    pub fn cartan_matrix(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    /// Positive roots in the simple-root basis; the first `rank` are the simple roots.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// Positive roots written as weights.
    pub fn positive_root_weights(&self) -> &[Weight] {
        &self.positive_root_weights
    }

    /// Coroots `α^∨` of the positive roots in the simple-coroot basis.
    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    /// Index of the highest short root `α₀` among the positive roots.
    pub fn highest_short_root(&self) -> usize {
        self.highest_short_root
    }

    pub fn coxeter_number(&self) -> i64 {
        self.coxeter_number
    }

    pub fn w0_matrix(&self) -> &IntMatrix {
        &self.w0_matrix
    }

    /// Reduced word for `w₀` found by descent from `-ρ`.
    pub fn w0_word(&self) -> &[usize] {
        &self.w0_word
    }

    /// Number of roots plus rank.
    pub fn lie_algebra_dimension(&self) -> usize {
        2 * self.num_positive_roots() + self.rank()
    }

    pub fn check_weight(&self, w: &Weight) -> Result<()> {
        if w.rank() == self.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch { weight: w.clone(), expected: self.rank(), got: w.rank() })
        }
    }

    pub fn check_dominant(&self, w: &Weight) -> Result<()> {
        self.check_weight(w)?;
        if w.is_dominant() {
            Ok(())
        } else {
            Err(Error::NonDominant(w.clone()))
        }
    }

    /// `⟨λ, α^∨⟩` for the positive root with index `root`.
    pub fn pair(&self, lambda: &Weight, root: usize) -> Result<i64> {
        self.check_weight(lambda)?;
        if root >= self.positive_roots.len() {
            return Err(Error::IndexOutOfRange { index: root, len: self.positive_roots.len() });
        }
        Ok(self.pairing(lambda.coords(), root))
    }

    #[inline]
    pub(crate) fn pairing(&self, v: &[i64], root: usize) -> i64 {
        self.coroots[root].iter().zip(v).map(|(c, x)| c * x).sum()
    }

    /// `⟨λ, α₀^∨⟩`.
    pub fn pair_highest_short(&self, v: &[i64]) -> i64 {
        self.pairing(v, self.highest_short_root)
    }

    /// Root-basis coordinates of `μ`, or `None` when `μ` is not in the root lattice.
    pub fn to_root_coords(&self, mu: &Weight) -> Option<Vec<i64>> {
        let n = self.rank();
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let s: i64 = (0..n).map(|i| mu.0[i] * self.cartan_adj.get(i, j)).sum();
            if s % self.cartan_det != 0 {
                return None;
            }
            out.push(s / self.cartan_det);
        }
        Some(out)
    }

    /// Weight coordinates of a root-lattice vector given in the simple-root basis.
    pub fn from_root_coords(&self, b: &[i64]) -> Weight {
        let n = self.rank();
        Weight((0..n).map(|j| (0..n).map(|i| b[i] * self.cartan.get(i, j)).sum()).collect())
    }

    /// `det(A)` times the height of `μ`; strictly increases along positive roots.
    #[inline]
    pub fn scaled_height(&self, mu: &Weight) -> i64 {
        mu.0.iter().zip(&self.height_coeffs).map(|(a, b)| a * b).sum()
    }

    /// `λ ≤ μ` iff `μ - λ` is a non-negative integer combination of simple roots.
    pub fn dominance_leq(&self, lambda: &Weight, mu: &Weight) -> bool {
        match self.to_root_coords(&(mu - lambda)) {
            Some(c) => c.iter().all(|&x| x >= 0),
            None => false,
        }
    }

    /// Linear action of the simple reflection `s_i`.
    pub fn reflect(&self, mu: &Weight, i: usize) -> Weight {
        let m = mu.0[i];
        if m == 0 {
            return mu.clone();
        }
        Weight(mu.0.iter().enumerate().map(|(j, &c)| c - m * self.cartan.get(i, j)).collect())
    }

    pub fn simple_reflection_matrix(&self, i: usize) -> IntMatrix {
        let n = self.rank();
        let mut m = IntMatrix::identity(n);
        for j in 0..n {
            m.set(j, i, m.get(j, i) - self.cartan.get(i, j));
        }
        m
    }

    /// The unique dominant weight in the Weyl orbit of `μ`.
    pub fn dominant_representative(&self, mu: &Weight) -> Weight {
        let mut v = mu.clone();
        while let Some(i) = v.0.iter().position(|&c| c < 0) {
            v = self.reflect(&v, i);
        }
        v
    }

    /// Weyl orbit of `μ`, sorted.
    pub fn orbit(&self, mu: &Weight) -> Vec<Weight> {
        let mut seen: HashSet<Weight> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(mu.clone());
        queue.push_back(mu.clone());
        while let Some(v) = queue.pop_front() {
            for i in 0..self.rank() {
                if v.0[i] != 0 {
                    let r = self.reflect(&v, i);
                    if seen.insert(r.clone()) {
                        queue.push_back(r);
                    }
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        out
    }

    pub fn apply_w0(&self, mu: &Weight) -> Weight {
        Weight(self.w0_matrix.apply(&mu.0))
    }

    /// `λ* = -w₀(λ)`.
    pub fn star(&self, lambda: &Weight) -> Weight {
        -&self.apply_w0(lambda)
    }

    /// Dominant `λ` with `⟨λ+ρ, α₀^∨⟩ ≤ level`, in lexicographic order.
    pub fn dominant_weights_up_to_level(&self, level: i64) -> Vec<Weight> {
        let c = &self.coroots[self.highest_short_root];
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.rank()];
        fn go(c: &[i64], i: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
            if i == c.len() {
                out.push(Weight(cur.clone()));
                return;
            }
            // each remaining coordinate costs at least c_j for its +1 from ρ
            let rest: i64 = c[i + 1..].iter().sum();
            let mut k = 0;
            while c[i] * (k + 1) + rest <= budget {
                cur[i] = k;
                go(c, i + 1, budget - c[i] * (k + 1), cur, out);
                k += 1;
            }
            cur[i] = 0;
        }
        go(c, 0, level, &mut cur, &mut out);
        out
    }

    /// Invariant form `(β, ν)` for a root-lattice vector `β` (simple-root basis)
    /// and a weight `ν`, scaled so that short roots have squared length 2.
    #[inline]
    pub(crate) fn form_root_weight(&self, beta: &[i64], nu: &[i64]) -> i64 {
        beta.iter()
            .zip(&self.symmetrizer)
            .zip(nu)
            .map(|((b, d), x)| b * d * x)
            .sum()
    }
}

fn cartan_matrix(t: CartanType) -> IntMatrix {
    let n = t.rank();
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match t.family() {
        Family::A | Family::B | Family::C | Family::F | Family::G => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        Family::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        Family::E => {
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
    }
    match t.family() {
        // α_n short
        Family::B => a[n - 2][n - 1] = -2,
        // α_n long
        Family::C => a[n - 1][n - 2] = -2,
        // α1, α2 long; α3, α4 short
        Family::F => a[1][2] = -2,
        // α1 short, α2 long
        Family::G => a[1][0] = -3,
        _ => {}
    }
    IntMatrix::from_rows(&a)
}

fn symmetrizer(a: &IntMatrix) -> Vec<i64> {
    let n = a.dim();
    // Start at 6 so every ratio along the (tree-shaped) diagram stays integral.
    let mut d = vec![0i64; n];
    d[0] = 6;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if j != i && a.get(i, j) != 0 && d[j] == 0 {
                d[j] = a.get(j, i) * d[i] / a.get(i, j);
                queue.push_back(j);
            }
        }
    }
    let g = d.iter().copied().fold(0, gcd);
    d.iter().map(|x| x / g).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Positive roots by root-string closure, layer by layer in height.
fn positive_roots(a: &IntMatrix) -> Vec<Vec<i64>> {
    let n = a.dim();
    let unit = |i: usize| {
        let mut v = vec![0i64; n];
        v[i] = 1;
        v
    };
    let mut all: Vec<Vec<i64>> = (0..n).map(unit).collect();
    let mut known: HashSet<Vec<i64>> = all.iter().cloned().collect();
    let mut layer = all.clone();
    while !layer.is_empty() {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &layer {
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| beta[j] * a.get(j, i)).sum();
                // r = length of the string below β in direction α_i
                let mut r = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        r += 1;
                    } else {
                        break;
                    }
                }
                if *beta == unit(i) {
                    continue;
                }
                if r - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort_by(|x, y| y.cmp(x));
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}
