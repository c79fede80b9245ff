//! Root data for the types A_l, B_n and D_n in Bourbaki labelling.
//!
//! Roots are kept in simple-root coordinates and weights in fundamental-weight
//! coordinates. The inner product is normalised so that long roots have norm 2
//! and, in type B, the short simple root α_n has norm 1.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LieType {
    A,
    B,
    D,
}

impl LieType {
    pub fn letter(self) -> char {
        match self {
            LieType::A => 'A',
            LieType::B => 'B',
            LieType::D => 'D',
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl std::str::FromStr for LieType {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "A" | "a" => Ok(LieType::A),
            "B" | "b" => Ok(LieType::B),
            "D" | "d" => Ok(LieType::D),
            _ => Err(format!("unknown type {s}")),
        }
    }
}

/// A root in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub Vec<i64>);

/// A weight in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

/// Coefficients `c` with `μ = λ − Σ c_i α_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DominanceDelta {
    pub coeffs: Vec<i64>,
}

/// Why `μ ≼ λ` fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotBelow {
    /// `λ − μ` is not in the root lattice.
    OffLattice,
    /// `λ − μ` is an integral root combination with some negative coefficient.
    Negative(Vec<i64>),
}

impl Root {
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }
    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }
    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
    pub fn sub(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
    pub fn scale(&self, k: i64) -> Root {
        Root(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, &self.0)
    }
}

impl Weight {
    pub fn zero(rank: usize) -> Weight {
        Weight(vec![0; rank])
    }
    pub fn fundamental(rank: usize, i: usize) -> Weight {
        let mut v = vec![0; rank];
        v[i - 1] = 1;
        Weight(v)
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
    /// Dominant with every coefficient below `p`; every dominant weight when `p = 0`.
    pub fn is_restricted(&self, p: u64) -> bool {
        self.is_dominant() && (p == 0 || self.0.iter().all(|&c| (c as u64) < p))
    }
    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, &self.0)
    }
}

fn write_coords(f: &mut fmt::Formatter<'_>, v: &[i64]) -> fmt::Result {
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

/// Weyl orbit of a weight together with its dominant member.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub members: BTreeSet<Weight>,
    pub dominant: Weight,
}

/// Immutable root datum.
#[derive(Clone, Debug)]
pub struct RootSystem {
    lie_type: LieType,
    rank: usize,
    gram: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    cartan_inv: Vec<Vec<Rational64>>,
    weight_gram: Vec<Vec<Rational64>>,
    positive: Vec<Root>,
    index: HashMap<Vec<i64>, usize>,
}

/// Order on roots: `α < β` iff the last nonzero coefficient of `β − α` is positive.
pub fn root_order(a: &[i64], b: &[i64]) -> Ordering {
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn gram_of(lie_type: LieType, rank: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        g[i][i] = 2;
    }
    match lie_type {
        LieType::A => {
            for i in 0..rank.saturating_sub(1) {
                g[i][i + 1] = -1;
                g[i + 1][i] = -1;
            }
        }
        LieType::B => {
            for i in 0..rank.saturating_sub(1) {
                g[i][i + 1] = -1;
                g[i + 1][i] = -1;
            }
            g[rank - 1][rank - 1] = 1;
        }
        LieType::D => {
            for i in 0..rank.saturating_sub(2) {
                g[i][i + 1] = -1;
                g[i + 1][i] = -1;
            }
            if rank >= 3 {
                g[rank - 3][rank - 1] = -1;
                g[rank - 1][rank - 3] = -1;
            }
        }
    }
    g
}

fn invert(m: &[Vec<i64>]) -> Vec<Vec<Rational64>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational64> = row.iter().map(|&x| Rational64::from_integer(x)).collect();
            r.extend((0..n).map(|j| if i == j { Rational64::one() } else { Rational64::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let k = (c..n).find(|&k| !a[k][c].is_zero()).expect("Cartan matrix is invertible");
        a.swap(c, k);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= inv;
        }
        let row = a[c].clone();
        for (k, r) in a.iter_mut().enumerate() {
            if k != c && !r[c].is_zero() {
                let f = r[c];
                for (x, y) in r.iter_mut().zip(&row) {
                    *x -= f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

impl RootSystem {
    /// Build the root system of the given type; rank ≥ 2 for A and ≥ 3 for B and D.
    pub fn new(lie_type: LieType, rank: usize) -> Result<RootSystem> {
        let min = match lie_type {
            LieType::A => 2,
            LieType::B | LieType::D => 3,
        };
        if rank < min || rank > 12 {
            return Err(Error::RankOutOfRange { lie_type: lie_type.letter(), rank });
        }
        Ok(Self::from_gram(lie_type, gram_of(lie_type, rank)))
    }

    pub(crate) fn from_gram(lie_type: LieType, gram: Vec<Vec<i64>>) -> RootSystem {
        let rank = gram.len();
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| 2 * gram[i][j] / gram[j][j]).collect())
            .collect();
        let cartan_inv = invert(&cartan);
        // λ_i = Σ_k (A^{-1})_{ik} α_k and (α_k, λ_j) = δ_kj (α_j,α_j)/2.
        let weight_gram: Vec<Vec<Rational64>> = (0..rank)
            .map(|i| (0..rank).map(|j| cartan_inv[i][j] * Rational64::new(gram[j][j], 2)).collect())
            .collect();
        let mut rs = RootSystem {
            lie_type,
            rank,
            gram,
            cartan,
            cartan_inv,
            weight_gram,
            positive: Vec::new(),
            index: HashMap::new(),
        };
        rs.generate_positive_roots();
        rs
    }

    fn generate_positive_roots(&mut self) {
        let n = self.rank;
        let mut roots: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut known: std::collections::HashSet<Vec<i64>> = roots.iter().cloned().collect();
        let mut frontier = roots.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for beta in &frontier {
                for i in 0..n {
                    // Length of the α_i-string below β.
                    let mut p = 0;
                    loop {
                        let mut x = beta.clone();
                        x[i] -= p + 1;
                        if known.contains(&x) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pair = self.pairing_coords(beta, i);
                    if p - pair > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if known.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            roots.extend(next.iter().cloned());
            frontier = next;
        }
        roots.sort_by(|a, b| root_order(a, b));
        self.index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        self.positive = roots.into_iter().map(Root).collect();
    }

    /// ⟨x, α_i⟩ for x in root coordinates.
    fn pairing_coords(&self, x: &[i64], i: usize) -> i64 {
        let ip: i64 = x.iter().zip(&self.gram).map(|(c, row)| c * row[i]).sum();
        2 * ip / self.gram[i][i]
    }

    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn label(&self) -> String {
        format!("{}{}", self.lie_type, self.rank)
    }
    /// Symmetric matrix of inner products (α_i, α_j).
    pub fn inner_products(&self) -> &[Vec<i64>] {
        &self.gram
    }
    /// Cartan matrix with entries ⟨α_i, α_j⟩.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }
    pub fn simple_root(&self, i: usize) -> Root {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        Root(v)
    }
    pub fn simple_roots(&self) -> Vec<Root> {
        (0..self.rank).map(|i| self.simple_root(i)).collect()
    }
    /// Positive roots, sorted increasingly in the order of [`root_order`].
    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }
    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }
    pub fn positive_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }
    pub fn is_root(&self, coords: &[i64]) -> bool {
        if self.index.contains_key(coords) {
            return true;
        }
        let neg: Vec<i64> = coords.iter().map(|c| -c).collect();
        self.index.contains_key(&neg)
    }
    pub fn all_roots(&self) -> Vec<Root> {
        let mut v: Vec<Root> = self.positive.clone();
        v.extend(self.positive.iter().map(|r| r.neg()));
        v
    }

    pub fn inner_roots(&self, a: &Root, b: &Root) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += a.0[i] * self.gram[i][j] * b.0[j];
            }
        }
        s
    }
    pub fn norm(&self, a: &Root) -> i64 {
        self.inner_roots(a, a)
    }
    pub fn is_long(&self, a: &Root) -> bool {
        self.norm(a) == 2
    }

    /// ⟨x, α⟩ = 2(x,α)/(α,α) for x in root coordinates.
    pub fn pairing_root(&self, x: &Root, alpha: &Root) -> Result<i64> {
        let n = self.norm(alpha);
        if n == 0 {
            return Err(Error::ZeroRoot);
        }
        Ok(2 * self.inner_roots(x, alpha) / n)
    }

    /// ⟨λ, α⟩ for a weight λ and a root α.
    pub fn pairing(&self, lambda: &Weight, alpha: &Root) -> Result<i64> {
        let n = self.norm(alpha);
        if n == 0 {
            return Err(Error::ZeroRoot);
        }
        // (λ_i, α) = c_i (α_i, α_i)/2.
        let twice: i64 = (0..self.rank).map(|i| lambda.0[i] * alpha.0[i] * self.gram[i][i]).sum();
        Ok(twice / n)
    }

    /// ⟨λ, α_i⟩ is just the i-th coordinate.
    pub fn pairing_simple(&self, lambda: &Weight, i: usize) -> i64 {
        lambda.0[i]
    }

    /// Fundamental-weight coordinates of a root lattice element.
    pub fn root_to_weight(&self, r: &Root) -> Weight {
        Weight(
            (0..self.rank)
                .map(|j| (0..self.rank).map(|i| r.0[i] * self.cartan[i][j]).sum())
                .collect(),
        )
    }

    /// Simple-root coordinates of a weight, in general rational.
    pub fn weight_to_root_rational(&self, w: &Weight) -> Vec<Rational64> {
        (0..self.rank)
            .map(|j| (0..self.rank).map(|i| self.cartan_inv[i][j] * w.0[i]).sum())
            .collect()
    }

    /// Inner product of two weights.
    pub fn inner_weights(&self, a: &Weight, b: &Weight) -> Rational64 {
        let mut s = Rational64::zero();
        for i in 0..self.rank {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if b.0[j] != 0 {
                    s += self.weight_gram[i][j] * (a.0[i] * b.0[j]);
                }
            }
        }
        s
    }

    /// ρ, the half sum of positive roots.
    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// s_α(λ) = λ − ⟨λ,α⟩α.
    pub fn reflect(&self, lambda: &Weight, alpha: &Root) -> Result<Weight> {
        let c = self.pairing(lambda, alpha)?;
        Ok(lambda.sub(&self.root_to_weight(alpha).scale(c)))
    }

    pub fn simple_reflect(&self, lambda: &Weight, i: usize) -> Weight {
        let c = lambda.0[i];
        let mut out = lambda.0.clone();
        if c != 0 {
            for (j, x) in out.iter_mut().enumerate() {
                *x -= c * self.cartan[i][j];
            }
        }
        Weight(out)
    }

    /// Dominant representative of the orbit of λ.
    pub fn dominant_rep(&self, lambda: &Weight) -> Weight {
        self.dominant_rep_with_length(lambda).0
    }

    /// Dominant representative and the number of simple reflections used.
    pub fn dominant_rep_with_length(&self, lambda: &Weight) -> (Weight, usize) {
        let mut w = lambda.clone();
        let mut len = 0;
        while let Some(i) = w.0.iter().position(|&c| c < 0) {
            w = self.simple_reflect(&w, i);
            len += 1;
        }
        (w, len)
    }

    /// Dot action straightening: returns `(sign, ν)` with `w·μ = ν` dominant,
    /// or `None` when μ + ρ lies on a wall.
    pub fn dot_dominant(&self, mu: &Weight) -> Option<(i64, Weight)> {
        let shifted = mu.add(&self.rho());
        let (d, len) = self.dominant_rep_with_length(&shifted);
        if d.0.iter().any(|&c| c == 0) {
            return None;
        }
        let sign = if len % 2 == 0 { 1 } else { -1 };
        Some((sign, d.sub(&self.rho())))
    }

    pub fn weyl_orbit(&self, mu: &Weight) -> Orbit {
        let mut members = BTreeSet::new();
        let mut queue = VecDeque::new();
        members.insert(mu.clone());
        queue.push_back(mu.clone());
        while let Some(w) = queue.pop_front() {
            for i in 0..self.rank {
                if w.0[i] == 0 {
                    continue;
                }
                let r = self.simple_reflect(&w, i);
                if members.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        let dominant = members.iter().find(|w| w.is_dominant()).cloned().expect("orbit has a dominant member");
        Orbit { members, dominant }
    }

    /// Size of the Weyl orbit of a dominant weight, via its stabiliser.
    pub fn orbit_size(&self, mu: &Weight) -> u64 {
        self.weyl_orbit(mu).members.len() as u64
    }

    /// Coefficients of λ − μ in the simple roots, when μ ≼ λ.
    pub fn dominance_delta(&self, lambda: &Weight, mu: &Weight) -> std::result::Result<DominanceDelta, NotBelow> {
        let c = self.weight_to_root_rational(&lambda.sub(mu));
        if c.iter().any(|x| !x.is_integer()) {
            return Err(NotBelow::OffLattice);
        }
        let coeffs: Vec<i64> = c.iter().map(|x| x.to_integer()).collect();
        if coeffs.iter().any(|&x| x < 0) {
            return Err(NotBelow::Negative(coeffs));
        }
        Ok(DominanceDelta { coeffs })
    }

    pub fn is_below(&self, lambda: &Weight, mu: &Weight) -> bool {
        self.dominance_delta(lambda, mu).is_ok()
    }

    pub fn compare_positive(&self, a: &Root, b: &Root) -> Ordering {
        root_order(&a.0, &b.0)
    }

    /// Greatest q ≥ 0 with α − qβ a root.
    pub fn root_string_q(&self, alpha: &Root, beta: &Root) -> Result<u32> {
        if !self.is_root(&alpha.0) {
            return Err(Error::NotARoot(alpha.0.clone()));
        }
        if !self.is_root(&beta.0) {
            return Err(Error::NotARoot(beta.0.clone()));
        }
        if alpha == beta || *alpha == beta.neg() {
            return Err(Error::ProportionalRoots);
        }
        let mut q = 0;
        let mut x = alpha.sub(beta);
        while self.is_root(&x.0) {
            q += 1;
            x = x.sub(beta);
        }
        Ok(q)
    }

    /// Weight lattice translate of λ by a root combination.
    pub fn sub_delta(&self, lambda: &Weight, delta: &[i64]) -> Weight {
        lambda.sub(&self.root_to_weight(&Root(delta.to_vec())))
    }

    pub fn levi(&self, j: &[usize]) -> Result<Levi> {
        levi_subsystem(self, j)
    }
}

/// A Levi subsystem on a contiguous set of simple roots (0-based indices).
#[derive(Clone, Debug)]
pub struct Levi {
    pub system: RootSystem,
    pub indices: Vec<usize>,
}

impl Levi {
    /// λ ↦ λ|_{T_H}: keep the coordinates indexed by J.
    pub fn restrict_weight(&self, lambda: &Weight) -> Weight {
        Weight(self.indices.iter().map(|&i| lambda.0[i]).collect())
    }
    /// Root of the subsystem in ambient coordinates.
    pub fn lift_root(&self, r: &Root, ambient_rank: usize) -> Root {
        let mut v = vec![0; ambient_rank];
        for (k, &i) in self.indices.iter().enumerate() {
            v[i] = r.0[k];
        }
        Root(v)
    }
    /// Ambient root combination restricted to J, when supported on J.
    pub fn restrict_delta(&self, delta: &[i64]) -> Option<Vec<i64>> {
        if delta.iter().enumerate().any(|(i, &c)| c != 0 && !self.indices.contains(&i)) {
            return None;
        }
        Some(self.indices.iter().map(|&i| delta[i]).collect())
    }
}

/// Levi subsystem for a contiguous set `j` of 0-based simple-root indices.
pub fn levi_subsystem(rs: &RootSystem, j: &[usize]) -> Result<Levi> {
    let mut idx: Vec<usize> = j.to_vec();
    idx.sort_unstable();
    idx.dedup();
    let bad = || Error::UnsupportedLevi(j.iter().map(|x| x + 1).collect());
    if idx.is_empty() || *idx.last().unwrap() >= rs.rank {
        return Err(bad());
    }
    let n = rs.rank;
    let first = idx[0];
    let last = *idx.last().unwrap();
    let m = idx.len();
    let contiguous = last - first + 1 == m;
    if !contiguous {
        return Err(bad());
    }
    let lie_type = match rs.lie_type {
        LieType::A => LieType::A,
        LieType::B if last == n - 1 && m >= 2 => LieType::B,
        LieType::B => LieType::A,
        LieType::D if last <= n - 2 || m == 1 => LieType::A,
        LieType::D if first + 3 <= n => LieType::D,
        LieType::D => return Err(bad()),
    };
    let gram: Vec<Vec<i64>> = idx.iter().map(|&a| idx.iter().map(|&b| rs.gram[a][b]).collect()).collect();
    let short_a1 = m == 1 && gram[0][0] == 1;
    if gram != gram_of(lie_type, m) && !short_a1 {
        return Err(bad());
    }
    Ok(Levi { system: RootSystem::from_gram(lie_type, gram), indices: idx })
}

/// The B_n ⊃ D_n simple-root dictionary.
#[derive(Clone, Debug)]
pub struct BnDnDictionary {
    pub n: usize,
    pub b: RootSystem,
    pub d: RootSystem,
    /// β_i in B_n simple-root coordinates.
    pub simple: Vec<Root>,
}

impl BnDnDictionary {
    pub fn new(n: usize) -> Result<BnDnDictionary> {
        let b = RootSystem::new(LieType::B, n)?;
        let d = RootSystem::new(LieType::D, n)?;
        let mut simple: Vec<Root> = (0..n - 1).map(|i| b.simple_root(i)).collect();
        let mut last = vec![0; n];
        last[n - 2] = 1;
        last[n - 1] = 2;
        simple.push(Root(last));
        Ok(BnDnDictionary { n, b, d, simple })
    }

    /// Long roots of B_n, which make up the root system of D_n.
    pub fn is_long(&self, r: &Root) -> bool {
        self.b.is_long(r)
    }

    /// A D_n root (in β coordinates) written in B_n coordinates.
    pub fn d_root_to_b(&self, r: &Root) -> Root {
        let mut v = vec![0; self.n];
        for (c, beta) in r.0.iter().zip(&self.simple) {
            for (x, y) in v.iter_mut().zip(&beta.0) {
                *x += c * y;
            }
        }
        Root(v)
    }
}

pub fn bn_dn_dictionary(n: usize) -> Result<BnDnDictionary> {
    BnDnDictionary::new(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(t: LieType, n: usize) -> RootSystem {
        RootSystem::new(t, n).unwrap()
    }

    #[test]
    fn positive_root_counts() {
        for n in 2..=6 {
            assert_eq!(rs(LieType::A, n).num_positive(), n * (n + 1) / 2);
        }
        for n in 3..=6 {
            assert_eq!(rs(LieType::B, n).num_positive(), n * n);
            assert_eq!(rs(LieType::D, n).num_positive(), n * (n - 1));
        }
    }

    #[test]
    fn rank_guard() {
        assert!(RootSystem::new(LieType::A, 1).is_err());
        assert!(RootSystem::new(LieType::B, 2).is_err());
        assert!(RootSystem::new(LieType::D, 2).is_err());
    }

    #[test]
    fn cartan_pairings() {
        let b3 = rs(LieType::B, 3);
        let a = b3.simple_roots();
        assert_eq!(b3.pairing_root(&a[1], &a[2]).unwrap(), -2);
        assert_eq!(b3.pairing_root(&a[2], &a[1]).unwrap(), -1);
        let a2 = rs(LieType::A, 2);
        assert_eq!(a2.pairing_root(&a2.simple_root(0), &a2.simple_root(1)).unwrap(), -1);
        for i in 0..3 {
            for j in 0..3 {
                let l = Weight::fundamental(3, i + 1);
                assert_eq!(b3.pairing(&l, &a[j]).unwrap(), (i == j) as i64);
            }
        }
        assert_eq!(b3.pairing(&Weight::zero(3), &Root(vec![0, 0, 0])), Err(Error::ZeroRoot));
    }

    #[test]
    fn order_examples() {
        let a2 = rs(LieType::A, 2);
        let p: Vec<Vec<i64>> = a2.positive_roots().iter().map(|r| r.0.clone()).collect();
        assert_eq!(p, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let b3 = rs(LieType::B, 3);
        assert_eq!(b3.compare_positive(&Root(vec![1, 0, 0]), &Root(vec![1, 1, 1])), Ordering::Less);
    }

    #[test]
    fn reflections_and_orbits() {
        let b3 = rs(LieType::B, 3);
        let l1 = Weight::fundamental(3, 1);
        let r = b3.reflect(&l1, &b3.simple_root(0)).unwrap();
        assert_eq!(r, l1.sub(&b3.root_to_weight(&b3.simple_root(0))));
        let orbit = b3.weyl_orbit(&l1);
        assert_eq!(orbit.members.len(), 6);
        assert!(!orbit.members.contains(&Weight::zero(3)));
        assert_eq!(orbit.dominant, l1);
        // (c−1)λ_1 from cλ_1 − (α_1+α_2+α_3)
        let c = 3;
        let mu = b3.sub_delta(&l1.scale(c), &[1, 1, 1]);
        assert_eq!(b3.weyl_orbit(&mu).dominant, l1.scale(c - 1));
        assert_eq!(b3.orbit_size(&Weight(vec![0, 0, 1])), 8);
    }

    #[test]
    fn dominance_examples() {
        let b3 = rs(LieType::B, 3);
        let l1 = Weight::fundamental(3, 1);
        assert_eq!(b3.dominance_delta(&l1, &l1.scale(-1)).unwrap().coeffs, vec![2, 2, 2]);
        let a2 = rs(LieType::A, 2);
        assert_eq!(
            a2.dominance_delta(&Weight::fundamental(2, 1), &Weight::fundamental(2, 2)),
            Err(NotBelow::OffLattice)
        );
        let mu = a2.sub_delta(&Weight(vec![1, 1]), &[1, 0]);
        assert_eq!(a2.dominance_delta(&mu, &Weight(vec![1, 1])), Err(NotBelow::Negative(vec![-1, 0])));
    }

    #[test]
    fn root_strings() {
        let a2 = rs(LieType::A, 2);
        assert_eq!(a2.root_string_q(&a2.simple_root(0), &a2.simple_root(1)).unwrap(), 0);
        let b3 = rs(LieType::B, 3);
        assert_eq!(b3.root_string_q(&Root(vec![0, 1, 1]), &Root(vec![0, 0, 1])).unwrap(), 1);
        assert_eq!(b3.root_string_q(&Root(vec![0, 0, 1]), &Root(vec![0, 1, 0])).unwrap(), 0);
        assert!(b3.root_string_q(&Root(vec![0, 0, 1]), &Root(vec![0, 0, -1])).is_err());
    }

    #[test]
    fn levi_types() {
        let b4 = rs(LieType::B, 4);
        let l = b4.levi(&[1, 2, 3]).unwrap();
        assert_eq!((l.system.lie_type(), l.system.rank()), (LieType::B, 3));
        let l = b4.levi(&[0, 1, 2]).unwrap();
        assert_eq!((l.system.lie_type(), l.system.rank()), (LieType::A, 3));
        let l = b4.levi(&[0, 1, 2, 3]).unwrap();
        assert_eq!(l.restrict_weight(&Weight(vec![1, 2, 3, 4])), Weight(vec![1, 2, 3, 4]));
        assert!(b4.levi(&[0, 2]).is_err());
        let d4 = rs(LieType::D, 4);
        assert_eq!(d4.levi(&[1, 2, 3]).unwrap().system.lie_type(), LieType::D);
        assert_eq!(d4.levi(&[0, 1, 2]).unwrap().system.lie_type(), LieType::A);
        assert!(d4.levi(&[2, 3]).is_err());
    }

    #[test]
    fn dictionary() {
        let d = bn_dn_dictionary(3).unwrap();
        assert_eq!(d.simple[2], Root(vec![0, 1, 2]));
        assert_eq!(d.simple[0], Root(vec![1, 0, 0]));
        let long = d.b.positive_roots().iter().filter(|r| d.is_long(r)).count();
        assert_eq!(long, 6);
        // The images of the D_n positive roots are exactly the long positive roots of B_n.
        for n in 3..=5 {
            let d = bn_dn_dictionary(n).unwrap();
            let mut img: Vec<Root> = d.d.positive_roots().iter().map(|r| d.d_root_to_b(r)).collect();
            let mut long: Vec<Root> = d.b.positive_roots().iter().filter(|r| d.is_long(r)).cloned().collect();
            img.sort();
            long.sort();
            assert_eq!(img, long);
        }
    }

    #[test]
    fn roots_have_pairing_two() {
        for (t, n) in [(LieType::A, 4), (LieType::B, 4), (LieType::D, 4)] {
            let s = rs(t, n);
            for r in s.all_roots() {
                assert_eq!(s.pairing_root(&r, &r).unwrap(), 2);
            }
        }
    }
}
