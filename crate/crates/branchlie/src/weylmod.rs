//! Characters: Freudenthal multiplicities, the Weyl dimension formula,
//! saturated weight sets, Levi restriction and irreducible characters mod p.
//!
//! Irreducible characters are computed by [`CharacterEngine`]. For a
//! p-restricted λ the Jantzen sum formula gives the character of
//! `Σ_{i>0} V(λ)^i` as a combination of Weyl characters. Peeling it in the basis
//! of irreducible characters gives integers `c_ν ≥ [V(λ):L(ν)]` with `c_ν > 0`
//! exactly when `L(ν)` is a composition factor, which settles every ν with
//! `c_ν ≤ 1`. The remaining decomposition numbers are pinned by multiplicity
//! bounds or, failing that, by a Gram rank of the contravariant form.
//! Non-restricted weights use Steinberg's tensor product theorem.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::rc::Rc;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::enveloping::{Straightener, WeylModule, DEFAULT_MAX_HEIGHT};
use crate::error::{Error, Result};
use crate::rootsystem::{LieType, RootSystem, Weight};

/// Dominant weight → multiplicity.
pub type Character = BTreeMap<Weight, i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CharKind {
    Weyl,
    Irreducible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterTable {
    pub lambda: Weight,
    pub p: u64,
    pub entries: BTreeMap<Weight, u64>,
    pub kind: CharKind,
    pub dimension: u128,
}

impl CharacterTable {
    fn from_character(rs: &RootSystem, lambda: &Weight, p: u64, kind: CharKind, ch: &Character) -> Result<CharacterTable> {
        let mut entries = BTreeMap::new();
        for (w, &m) in ch {
            if m < 0 {
                return Err(Error::Inconsistent(format!("negative multiplicity at {w}")));
            }
            if m > 0 {
                entries.insert(w.clone(), m as u64);
            }
        }
        let dimension = character_dimension(rs, ch);
        Ok(CharacterTable { lambda: lambda.clone(), p, entries, kind, dimension })
    }

    pub fn multiplicity(&self, mu: &Weight) -> u64 {
        self.entries.get(mu).copied().unwrap_or(0)
    }
}

pub fn check_characteristic(p: u64) -> Result<()> {
    if p != 0 && !crate::is_prime(p) {
        return Err(Error::InvalidCharacteristic(p));
    }
    Ok(())
}

fn check_rank(rs: &RootSystem, w: &Weight) -> Result<()> {
    if w.rank() != rs.rank() {
        return Err(Error::LengthMismatch { expected: rs.rank(), got: w.rank() });
    }
    Ok(())
}

pub(crate) fn check_dominant(rs: &RootSystem, w: &Weight) -> Result<()> {
    check_rank(rs, w)?;
    if !w.is_dominant() {
        return Err(Error::NotDominant(w.0.clone()));
    }
    Ok(())
}

/// Σ over dominant μ of |W μ| · m(μ).
pub fn character_dimension(rs: &RootSystem, ch: &Character) -> u128 {
    ch.iter().map(|(w, &m)| rs.orbit_size(w) as u128 * m.max(0) as u128).sum()
}

fn height_below(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> i64 {
    rs.dominance_delta(lambda, mu).map(|d| d.coeffs.iter().sum()).unwrap_or(i64::MAX)
}

/// Dominant weights μ ≼ λ, sorted by increasing height of λ − μ.
pub fn dominant_weights_below(rs: &RootSystem, lambda: &Weight) -> Vec<Weight> {
    let mut seen: BTreeSet<Weight> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(lambda.clone());
    queue.push_back(lambda.clone());
    while let Some(mu) = queue.pop_front() {
        for a in rs.positive_roots() {
            let c = rs.pairing(&mu, a).unwrap_or(0);
            if c <= 0 {
                continue;
            }
            let aw = rs.root_to_weight(a);
            for r in 1..=c {
                let nu = rs.dominant_rep(&mu.sub(&aw.scale(r)));
                if seen.insert(nu.clone()) {
                    queue.push_back(nu);
                }
            }
        }
    }
    let mut out: Vec<(i64, Weight)> = seen.into_iter().map(|w| (height_below(rs, lambda, &w), w)).collect();
    out.sort();
    out.into_iter().map(|(_, w)| w).collect()
}

/// Weyl character of V(λ) by Freudenthal's recursion.
pub fn weyl_character_map(rs: &RootSystem, lambda: &Weight) -> Result<Character> {
    check_dominant(rs, lambda)?;
    let weights = dominant_weights_below(rs, lambda);
    let rho = rs.rho();
    let lr = lambda.add(&rho);
    let top = rs.inner_weights(&lr, &lr);
    let pos: Vec<Weight> = rs.positive_roots().iter().map(|a| rs.root_to_weight(a)).collect();
    let mut mult: Character = BTreeMap::new();
    mult.insert(lambda.clone(), 1);
    for mu in weights.iter().skip(1) {
        let mut num = Rational64::zero();
        for aw in &pos {
            let mut k = 1;
            loop {
                let x = mu.add(&aw.scale(k));
                let Some(&m) = mult.get(&rs.dominant_rep(&x)) else { break };
                num += Rational64::from_integer(2 * m) * rs.inner_weights(&x, aw);
                k += 1;
            }
        }
        let mr = mu.add(&rho);
        let den = top - rs.inner_weights(&mr, &mr);
        let m = num / den;
        if !m.is_integer() || m.to_integer() < 0 {
            return Err(Error::Inconsistent(format!("Freudenthal produced {m} at {mu}")));
        }
        mult.insert(mu.clone(), m.to_integer());
    }
    mult.retain(|_, m| *m != 0);
    Ok(mult)
}

pub fn weyl_character(rs: &RootSystem, lambda: &Weight) -> Result<CharacterTable> {
    let ch = weyl_character_map(rs, lambda)?;
    CharacterTable::from_character(rs, lambda, 0, CharKind::Weyl, &ch)
}

/// Multiplicity of μ in V(λ) in characteristic zero.
pub fn freudenthal_mult(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Result<u64> {
    check_rank(rs, mu)?;
    if !rs.is_below(lambda, mu) {
        return Err(Error::NotDominated { lambda: lambda.0.clone(), mu: mu.0.clone() });
    }
    let ch = weyl_character_map(rs, lambda)?;
    Ok(ch.get(&rs.dominant_rep(mu)).copied().unwrap_or(0) as u64)
}

/// dim V(λ) = Π_{α>0} (λ+ρ, α)/(ρ, α).
pub fn weyl_dim(rs: &RootSystem, lambda: &Weight) -> Result<u128> {
    check_dominant(rs, lambda)?;
    let rho = rs.rho();
    let lr = lambda.add(&rho);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for a in rs.positive_roots() {
        let aw = rs.root_to_weight(a);
        let x = rs.inner_weights(&lr, &aw);
        let y = rs.inner_weights(&rho, &aw);
        let q = BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
            / BigRational::new(BigInt::from(*y.numer()), BigInt::from(*y.denom()));
        num *= q.numer();
        den *= q.denom();
    }
    let d = BigRational::new(num, den);
    if !d.is_integer() {
        return Err(Error::Inconsistent("non-integral Weyl dimension".into()));
    }
    d.to_integer().to_u128().ok_or(Error::Overflow)
}

#[derive(Clone, Debug, Serialize)]
pub struct SaturatedSet {
    pub lambda: Weight,
    pub dominant: Vec<Weight>,
    pub orbit_sizes: Vec<u64>,
    /// Whether `μ − rα` stays in the set for all μ, α ∈ Φ and 0 ≤ r ≤ ⟨μ,α⟩.
    pub closed: bool,
}

impl SaturatedSet {
    pub fn contains(&self, rs: &RootSystem, mu: &Weight) -> bool {
        let d = rs.dominant_rep(mu);
        self.dominant.binary_search(&d).is_ok()
    }
    pub fn num_weights(&self) -> u64 {
        self.orbit_sizes.iter().sum()
    }
}

/// The set Λ(λ) of weights of V(λ), given by its dominant members.
pub fn weight_set_saturated(rs: &RootSystem, lambda: &Weight) -> Result<SaturatedSet> {
    check_dominant(rs, lambda)?;
    let mut dominant = dominant_weights_below(rs, lambda);
    dominant.sort();
    let set: BTreeSet<Weight> = dominant.iter().cloned().collect();
    let mut closed = true;
    'outer: for mu in &dominant {
        for a in rs.all_roots() {
            let c = rs.pairing(mu, &a)?;
            let aw = rs.root_to_weight(&a);
            for r in 0..=c.max(0) {
                let nu = mu.sub(&aw.scale(r));
                if !set.contains(&rs.dominant_rep(&nu)) || !rs.is_below(lambda, &rs.dominant_rep(&nu)) {
                    closed = false;
                    break 'outer;
                }
            }
        }
    }
    let orbit_sizes = dominant.iter().map(|w| rs.orbit_size(w)).collect();
    Ok(SaturatedSet { lambda: lambda.clone(), dominant, orbit_sizes, closed })
}

/// m_{L(λ)}(μ) computed inside the Levi subsystem on `j` (0-based simple roots).
pub fn levi_restrict_mult(rs: &RootSystem, lambda: &Weight, mu: &Weight, j: &[usize], p: u64) -> Result<u64> {
    check_characteristic(p)?;
    let delta = rs
        .dominance_delta(lambda, mu)
        .map_err(|_| Error::NotDominated { lambda: lambda.0.clone(), mu: mu.0.clone() })?
        .coeffs;
    let levi = rs.levi(j)?;
    let sub = levi.restrict_delta(&delta).ok_or_else(|| Error::UnsupportedLevi(j.iter().map(|x| x + 1).collect()))?;
    let lam = levi.restrict_weight(lambda);
    let mut m = WeylModule::for_system(&levi.system, &lam)?;
    Ok(m.irreducible_dim_mu(&sub, p)? as u64)
}

/// Same quantity computed in the ambient group, for comparison.
pub fn ambient_mult(rs: &RootSystem, lambda: &Weight, mu: &Weight, p: u64) -> Result<u64> {
    Ok(crate::enveloping::irreducible_dim_mu(rs, lambda, mu, p)? as u64)
}

pub(crate) fn add_scaled(acc: &mut Character, ch: &Character, k: i64) {
    if k == 0 {
        return;
    }
    for (w, &m) in ch {
        let e = acc.entry(w.clone()).or_insert(0);
        *e += k * m;
        if *e == 0 {
            acc.remove(w);
        }
    }
}

fn valuation(mut m: i64, p: i64) -> i64 {
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

/// How a decomposition number was determined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ResolutionStats {
    pub jantzen: u64,
    pub bounds: u64,
    pub gram: u64,
}

/// Memoised Weyl and irreducible characters for one root system and one p.
pub struct CharacterEngine {
    rs: RootSystem,
    p: u64,
    weyl: HashMap<Weight, Rc<Character>>,
    irr: HashMap<Weight, Rc<Character>>,
    failed: HashMap<Weight, Error>,
    straightener: Option<Arc<Straightener>>,
    gram_height: i64,
    premet: bool,
    pub stats: ResolutionStats,
}

impl CharacterEngine {
    pub fn new(rs: &RootSystem, p: u64) -> Result<CharacterEngine> {
        check_characteristic(p)?;
        Ok(CharacterEngine {
            rs: rs.clone(),
            p,
            weyl: HashMap::new(),
            irr: HashMap::new(),
            failed: HashMap::new(),
            straightener: None,
            gram_height: DEFAULT_MAX_HEIGHT,
            // Λ(L(λ)) = Λ(λ) unless (type B, p = 2).
            premet: !(p == 2 && rs.lie_type() == LieType::B),
            stats: ResolutionStats::default(),
        })
    }

    pub fn with_gram_height(mut self, h: i64) -> CharacterEngine {
        self.gram_height = h;
        self
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn weyl(&mut self, lambda: &Weight) -> Result<Rc<Character>> {
        if let Some(c) = self.weyl.get(lambda) {
            return Ok(c.clone());
        }
        let c = Rc::new(weyl_character_map(&self.rs, lambda)?);
        self.weyl.insert(lambda.clone(), c.clone());
        Ok(c)
    }

    /// Character of L(λ).
    pub fn irreducible(&mut self, lambda: &Weight) -> Result<Rc<Character>> {
        check_dominant(&self.rs, lambda)?;
        if let Some(c) = self.irr.get(lambda) {
            return Ok(c.clone());
        }
        if let Some(e) = self.failed.get(lambda) {
            return Err(e.clone());
        }
        let c = if self.p == 0 {
            self.weyl(lambda)
        } else if lambda.is_restricted(self.p) {
            self.restricted(lambda).map(Rc::new)
        } else {
            self.steinberg(lambda).map(Rc::new)
        };
        match &c {
            Ok(c) => {
                self.irr.insert(lambda.clone(), c.clone());
            }
            Err(e) => {
                self.failed.insert(lambda.clone(), e.clone());
            }
        }
        c
    }

    fn steinberg(&mut self, lambda: &Weight) -> Result<Character> {
        let p = self.p as i64;
        let mut rest = lambda.clone();
        let mut scale = 1i64;
        let mut acc: Option<Character> = None;
        while !rest.is_zero() {
            let digit = Weight(rest.0.iter().map(|c| c % p).collect());
            rest = Weight(rest.0.iter().map(|c| c / p).collect());
            let ch = self.irreducible(&digit)?;
            let twisted: Character = ch.iter().map(|(w, &m)| (w.scale(scale), m)).collect();
            acc = Some(match acc {
                None => twisted,
                Some(a) => tensor(&self.rs, &a, &twisted),
            });
            scale *= p;
        }
        Ok(acc.unwrap_or_else(|| BTreeMap::from([(lambda.clone(), 1)])))
    }

    /// Jantzen sum of V(λ) as a combination of Weyl characters.
    pub fn jantzen_sum(&self, lambda: &Weight) -> Result<BTreeMap<Weight, i64>> {
        let p = self.p as i64;
        let rho = self.rs.rho();
        let lr = lambda.add(&rho);
        let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
        for a in self.rs.positive_roots() {
            let n = self.rs.pairing(&lr, a)?;
            let aw = self.rs.root_to_weight(a);
            let mut m = 1;
            while m * p < n {
                let v = valuation(m * p, p);
                let mu = lambda.sub(&aw.scale(n - m * p));
                if let Some((sign, nu)) = self.rs.dot_dominant(&mu) {
                    *out.entry(nu).or_insert(0) += sign * v;
                }
                m += 1;
            }
        }
        out.retain(|_, c| *c != 0);
        Ok(out)
    }

    /// Coefficients of a character in the basis of irreducible characters.
    pub fn peel(&mut self, ch: &Character) -> Result<BTreeMap<Weight, i64>> {
        let mut rest = ch.clone();
        let mut out = BTreeMap::new();
        while !rest.is_empty() {
            let top = maximal_weight(&self.rs, &rest);
            let c = rest[&top];
            let l = self.irreducible(&top)?;
            add_scaled(&mut rest, &l, -c);
            out.insert(top, c);
        }
        Ok(out)
    }

    /// Composition multiplicities [V(λ) : L(ν)], ν ≠ λ.
    pub fn decomposition_numbers(&mut self, lambda: &Weight) -> Result<BTreeMap<Weight, i64>> {
        if self.p == 0 {
            return Ok(BTreeMap::new());
        }
        let weyl = self.weyl(lambda)?;
        let c = self.irreducible(lambda)?;
        let mut rest = (*weyl).clone();
        add_scaled(&mut rest, &c, -1);
        self.peel(&rest)
    }

    fn restricted(&mut self, lambda: &Weight) -> Result<Character> {
        let weyl = self.weyl(lambda)?;
        let js = self.jantzen_sum(lambda)?;
        let mut jch: Character = BTreeMap::new();
        for (nu, k) in &js {
            let w = self.weyl(nu)?;
            add_scaled(&mut jch, &w, *k);
        }
        let c = self.peel(&jch)?;
        if c.values().any(|&x| x < 0) {
            return Err(Error::Inconsistent(format!("negative Jantzen coefficient below {lambda}")));
        }
        // Decreasing order so that every larger decomposition number is known.
        let mut order: Vec<Weight> = c.keys().cloned().collect();
        order.sort_by_key(|w| height_below(&self.rs, lambda, w));
        let mut d: BTreeMap<Weight, i64> = BTreeMap::new();
        for nu in &order {
            let cn = c[nu];
            if cn == 1 {
                self.stats.jantzen += 1;
                d.insert(nu.clone(), 1);
                continue;
            }
            // m_V(ν) = m_{L(λ)}(ν) + Σ_{ν<ν'<λ} d_{ν'} m_{L(ν')}(ν) + d_ν.
            let mut known = 0;
            for (nu2, &d2) in &d {
                known += d2 * self.irreducible(nu2)?.get(nu).copied().unwrap_or(0);
            }
            let room = weyl.get(nu).copied().unwrap_or(0) - known;
            let upper = cn.min(room - if self.premet { 1 } else { 0 });
            if upper == 1 {
                self.stats.bounds += 1;
                d.insert(nu.clone(), 1);
                continue;
            }
            let m_l = self.gram_multiplicity(lambda, nu)? as i64;
            let dn = room - m_l;
            if dn < 1 || dn > cn {
                return Err(Error::Inconsistent(format!("decomposition number {dn} at {nu} outside [1, {cn}]")));
            }
            self.stats.gram += 1;
            d.insert(nu.clone(), dn);
        }
        let mut ch = (*weyl).clone();
        for (nu, &k) in &d {
            let l = self.irreducible(nu)?;
            add_scaled(&mut ch, &l, -k);
        }
        if ch.values().any(|&m| m < 0) || ch.get(lambda) != Some(&1) {
            return Err(Error::Inconsistent(format!("irreducible character of {lambda} is not effective")));
        }
        Ok(ch)
    }

    fn gram_multiplicity(&mut self, lambda: &Weight, nu: &Weight) -> Result<usize> {
        let delta = self.rs.dominance_delta(lambda, nu).map_err(|_| Error::NotDominated { lambda: lambda.0.clone(), mu: nu.0.clone() })?.coeffs;
        let h: i64 = delta.iter().sum();
        if h > self.gram_height {
            return Err(Error::Budget(format!("decomposition number of {nu} in V({lambda}) needs a Gram matrix at height {h}")));
        }
        if self.straightener.is_none() {
            self.straightener = Some(Straightener::new(&self.rs)?.with_max_height(self.gram_height));
        }
        let mut m = WeylModule::new(self.straightener.clone().unwrap(), lambda)?;
        m.irreducible_dim_mu(&delta, self.p)
    }
}

/// A weight of the character maximal for dominance (the one of largest height).
fn maximal_weight(rs: &RootSystem, ch: &Character) -> Weight {
    let mut best: Option<(Rational64, &Weight)> = None;
    for w in ch.keys() {
        let h: Rational64 = rs.weight_to_root_rational(w).iter().sum();
        if best.as_ref().map_or(true, |(b, bw)| h > *b || (h == *b && w > *bw)) {
            best = Some((h, w));
        }
    }
    best.expect("non-empty character").1.clone()
}

/// Product of two W-invariant characters given by dominant multiplicities.
pub fn tensor(rs: &RootSystem, a: &Character, b: &Character) -> Character {
    let (small, large) = if orbit_count(rs, a) <= orbit_count(rs, b) { (a, b) } else { (b, a) };
    let mut full: Vec<(Weight, i64)> = Vec::new();
    for (w, &m) in small {
        for x in rs.weyl_orbit(w).members {
            full.push((x, m));
        }
    }
    let mut out: Character = BTreeMap::new();
    for (w, &m) in large {
        for x in rs.weyl_orbit(w).members {
            for (y, k) in &full {
                let s = x.add(y);
                if s.is_dominant() {
                    *out.entry(s).or_insert(0) += m * k;
                }
            }
        }
    }
    out.retain(|_, m| *m != 0);
    out
}

fn orbit_count(rs: &RootSystem, ch: &Character) -> u64 {
    ch.keys().map(|w| rs.orbit_size(w)).sum()
}

fn guard_irreducible(rs: &RootSystem, lambda: &Weight, p: u64) -> Result<()> {
    check_characteristic(p)?;
    check_dominant(rs, lambda)?;
    if p > 0 && !lambda.is_restricted(p) {
        return Err(Error::NotRestricted { weight: lambda.0.clone(), p });
    }
    if p == 2 && rs.lie_type() == LieType::B {
        return Err(Error::CharacteristicTwoTypeB);
    }
    Ok(())
}

/// Dominant-multiplicity table of L(λ) in characteristic p.
pub fn char_irreducible(rs: &RootSystem, lambda: &Weight, p: u64) -> Result<CharacterTable> {
    guard_irreducible(rs, lambda, p)?;
    let mut e = CharacterEngine::new(rs, p)?;
    let ch = e.irreducible(lambda)?;
    CharacterTable::from_character(rs, lambda, p, CharKind::Irreducible, &ch)
}

/// Same table computed only from Gram ranks at every dominant weight.
pub fn char_irreducible_gram(rs: &RootSystem, lambda: &Weight, p: u64) -> Result<CharacterTable> {
    guard_irreducible(rs, lambda, p)?;
    let mut m = WeylModule::for_system(rs, lambda)?;
    let mut ch = Character::new();
    for mu in dominant_weights_below(rs, lambda) {
        let delta = rs.dominance_delta(lambda, &mu).expect("below λ").coeffs;
        let k = m.irreducible_dim_mu(&delta, p)?;
        if k > 0 {
            ch.insert(mu, k as i64);
        }
    }
    CharacterTable::from_character(rs, lambda, p, CharKind::Irreducible, &ch)
}

/// One instance of a closed-form multiplicity, computed two ways.
#[derive(Clone, Debug, Serialize)]
pub struct KnownMultiplicity {
    pub family: String,
    pub lie_type: LieType,
    pub rank: usize,
    pub lambda: Weight,
    pub mu: Weight,
    pub expected: u64,
    pub freudenthal: u64,
    pub gram_rank: u64,
}

impl KnownMultiplicity {
    pub fn ok(&self) -> bool {
        self.expected == self.freudenthal && self.expected == self.gram_rank
    }
}

fn known(family: &str, rs: &RootSystem, lambda: Weight, delta: Vec<i64>, expected: u64) -> Result<KnownMultiplicity> {
    let mu = rs.sub_delta(&lambda, &delta);
    let freudenthal = freudenthal_mult(rs, &lambda, &mu)?;
    let gram_rank = WeylModule::for_system(rs, &lambda)?.weyl_dim_mu(&delta)? as u64;
    Ok(KnownMultiplicity { family: family.into(), lie_type: rs.lie_type(), rank: rs.rank(), lambda, mu, expected, freudenthal, gram_rank })
}

/// The closed-form characteristic-zero multiplicities in types A_2, A_3, B_3, B_4
/// with every coefficient parameter at most `max_coeff`:
///
/// | type | λ | μ | m(μ) |
/// |---|---|---|---|
/// | A_2 | aλ_1+bλ_2 | (a−2r+1)λ_1+(b+r−2)λ_2, 1 ≤ r ≤ a | 2 |
/// | A_n | aλ_1+bλ_n | (a−2r+1)λ_1+(r−1)λ_2+(b−1)λ_n | n |
/// | B_n | aλ_1 | (a−1)λ_1 | 1 |
/// | B_n | cλ_1, c ≥ 2 | (c−2)λ_1 | n |
/// | B_n | λ_2 | 0 | n |
/// | B_n | aλ_1+λ_i, 1 < i < n | (a−1)λ_1+λ_{i−1} | i(n−i+2)−1 |
pub fn known_multiplicities(max_coeff: i64) -> Result<Vec<KnownMultiplicity>> {
    let mut jobs: Vec<(String, LieType, usize, Weight, Vec<i64>, u64)> = Vec::new();
    for n in [2usize, 3] {
        for a in 1..=max_coeff {
            for b in 1..=max_coeff {
                let lambda = Weight::fundamental(n, 1).scale(a).add(&Weight::fundamental(n, n).scale(b));
                for r in 1..=a {
                    let mut delta = vec![1; n];
                    delta[0] = r;
                    let fam = if n == 2 { "A2 aλ1+bλ2" } else { "An aλ1+bλn" };
                    jobs.push((fam.into(), LieType::A, n, lambda.clone(), delta, n as u64));
                }
            }
        }
    }
    for n in [3usize, 4] {
        let l1 = Weight::fundamental(n, 1);
        for a in 1..=max_coeff {
            jobs.push(("Bn aλ1, μ=(a−1)λ1".into(), LieType::B, n, l1.scale(a), vec![1; n], 1));
        }
        for c in 2..=max_coeff.max(2) {
            jobs.push(("Bn cλ1, μ=(c−2)λ1".into(), LieType::B, n, l1.scale(c), vec![2; n], n as u64));
        }
        let mut d2 = vec![2; n];
        d2[0] = 1;
        jobs.push(("Bn λ2, μ=0".into(), LieType::B, n, Weight::fundamental(n, 2), d2, n as u64));
        for i in 2..n {
            for a in 1..=max_coeff {
                let delta = (1..=n).map(|j| if j < i { 1 } else { 2 }).collect();
                let lambda = l1.scale(a).add(&Weight::fundamental(n, i));
                jobs.push(("Bn aλ1+λi".into(), LieType::B, n, lambda, delta, (i * (n - i + 2) - 1) as u64));
            }
        }
    }
    jobs.par_iter()
        .map(|(fam, t, n, lambda, delta, e)| known(fam, &RootSystem::new(*t, *n)?, lambda.clone(), delta.clone(), *e))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_multiplicities_small() {
        let rows = known_multiplicities(2).unwrap();
        assert_eq!(rows.len(), 12 + 6 + 8);
        for r in &rows {
            assert!(r.ok(), "{r:?}");
        }
    }

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn weyl_dimensions() {
        let b3 = RootSystem::new(LieType::B, 3).unwrap();
        assert_eq!(weyl_dim(&b3, &w(&[1, 0, 0])).unwrap(), 7);
        assert_eq!(weyl_dim(&b3, &w(&[0, 0, 1])).unwrap(), 8);
        assert_eq!(weyl_dim(&b3, &w(&[0, 1, 0])).unwrap(), 21);
        assert_eq!(weyl_dim(&b3, &w(&[0, 0, 0])).unwrap(), 1);
        for n in 3..7 {
            let d = RootSystem::new(LieType::D, n).unwrap();
            assert_eq!(weyl_dim(&d, &Weight::fundamental(n, n)).unwrap(), 1 << (n - 1));
        }
    }

    #[test]
    fn freudenthal_examples() {
        let a2 = RootSystem::new(LieType::A, 2).unwrap();
        assert_eq!(freudenthal_mult(&a2, &w(&[2, 2]), &w(&[1, 1])).unwrap(), 2);
        let b3 = RootSystem::new(LieType::B, 3).unwrap();
        assert_eq!(freudenthal_mult(&b3, &w(&[0, 1, 0]), &w(&[0, 0, 0])).unwrap(), 3);
        for a in 1..4 {
            let l = w(&[a, 1, 0]);
            let mu = b3.sub_delta(&l, &[1, 2, 2]);
            assert_eq!(mu, w(&[a, 0, 0]));
            assert_eq!(freudenthal_mult(&b3, &l, &mu).unwrap(), 5);
        }
        assert!(freudenthal_mult(&b3, &w(&[1, 0, 0]), &w(&[0, 0, 1])).is_err());
    }

    #[test]
    fn total_dimension_matches() {
        for (t, n) in [(LieType::A, 3), (LieType::B, 3), (LieType::D, 4)] {
            let rs = RootSystem::new(t, n).unwrap();
            for v in [vec![1; n], {
                let mut x = vec![0; n];
                x[0] = 2;
                x
            }] {
                let l = Weight(v);
                let ch = weyl_character(&rs, &l).unwrap();
                assert_eq!(ch.dimension, weyl_dim(&rs, &l).unwrap());
            }
        }
    }

    #[test]
    fn saturated_sets() {
        let b3 = RootSystem::new(LieType::B, 3).unwrap();
        let s = weight_set_saturated(&b3, &w(&[1, 0, 0])).unwrap();
        assert_eq!(s.dominant, vec![w(&[0, 0, 0]), w(&[1, 0, 0])]);
        assert!(s.closed);
        let z = weight_set_saturated(&b3, &w(&[0, 0, 0])).unwrap();
        assert_eq!(z.dominant, vec![w(&[0, 0, 0])]);
    }

    #[test]
    fn irreducible_small() {
        let b3 = RootSystem::new(LieType::B, 3).unwrap();
        let t = char_irreducible(&b3, &w(&[1, 0, 0]), 7).unwrap();
        assert_eq!(t.entries, BTreeMap::from([(w(&[1, 0, 0]), 1), (w(&[0, 0, 0]), 1)]));
        assert_eq!(t.dimension, 7);
        let s = char_irreducible(&b3, &w(&[0, 0, 1]), 5).unwrap();
        assert_eq!(s.entries, BTreeMap::from([(w(&[0, 0, 1]), 1)]));
        assert_eq!(s.dimension, 8);
        assert_eq!(char_irreducible(&b3, &w(&[1, 0, 0]), 5).unwrap().dimension, 7);
        // 7 | 2(2+3) − 3: the zero weight drops out of L(2λ_1).
        assert_eq!(char_irreducible(&b3, &w(&[2, 0, 0]), 7).unwrap().dimension, 26);
        assert_eq!(char_irreducible(&b3, &w(&[2, 0, 0]), 5).unwrap().dimension, 27);
        assert!(matches!(char_irreducible(&b3, &w(&[1, 0, 0]), 2), Err(Error::CharacteristicTwoTypeB)));
        assert!(char_irreducible(&b3, &w(&[5, 0, 0]), 5).is_err());
    }

    #[test]
    fn routes_agree() {
        let a2 = RootSystem::new(LieType::A, 2).unwrap();
        let b3 = RootSystem::new(LieType::B, 3).unwrap();
        for p in [2, 3, 5] {
            for l in [[1, 1], [2, 1], [2, 2], [3, 1], [1, 4]] {
                let l = w(&l);
                if !l.is_restricted(p) {
                    continue;
                }
                assert_eq!(char_irreducible(&a2, &l, p).unwrap(), char_irreducible_gram(&a2, &l, p).unwrap(), "A2 {l} p={p}");
            }
        }
        for p in [3, 5] {
            for l in [[1, 0, 0], [0, 1, 0], [1, 1, 0], [2, 0, 0], [0, 0, 2], [1, 0, 1]] {
                let l = w(&l);
                assert_eq!(char_irreducible(&b3, &l, p).unwrap(), char_irreducible_gram(&b3, &l, p).unwrap(), "B3 {l} p={p}");
            }
        }
    }

    #[test]
    fn characteristic_zero_is_weyl() {
        let b3 = RootSystem::new(LieType::B, 3).unwrap();
        let l = w(&[1, 1, 0]);
        let a = char_irreducible(&b3, &l, 0).unwrap();
        let b = weyl_character(&b3, &l).unwrap();
        assert_eq!(a.entries, b.entries);
    }

    #[test]
    fn steinberg_twist() {
        let a2 = RootSystem::new(LieType::A, 2).unwrap();
        let mut e = CharacterEngine::new(&a2, 3).unwrap();
        let ch = e.irreducible(&w(&[3, 0])).unwrap();
        let total = character_dimension(&a2, &ch);
        assert_eq!(total, 3);
        let ch = e.irreducible(&w(&[1, 3])).unwrap();
        assert_eq!(character_dimension(&a2, &ch), 9);
    }

    #[test]
    fn levi_restriction() {
        let b3 = RootSystem::new(LieType::B, 3).unwrap();
        let l = w(&[1, 1, 0]);
        let mu = b3.sub_delta(&l, &[1, 1, 0]);
        for p in [0, 3, 5, 7] {
            assert_eq!(levi_restrict_mult(&b3, &l, &mu, &[0, 1], p).unwrap(), ambient_mult(&b3, &l, &mu, p).unwrap());
        }
        assert_eq!(levi_restrict_mult(&b3, &l, &mu, &[0, 1, 2], 0).unwrap(), ambient_mult(&b3, &l, &mu, 0).unwrap());
        assert!(levi_restrict_mult(&b3, &l, &mu, &[1, 2], 0).is_err());
    }
}
