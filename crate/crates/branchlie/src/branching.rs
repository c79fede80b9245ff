//! Restriction of irreducible modules from Y = B_n to X = D_n.
//!
//! The formula side classifies the p-restricted highest weights λ for which
//! L_Y(λ)|_X has exactly two composition factors and names the two factors.
//! The oracle side computes the restriction of the character of L_Y(λ) and
//! peels it into irreducible characters of X.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::enveloping::DEFAULT_MAX_HEIGHT;
use crate::error::{Error, Result};
use crate::rootsystem::{LieType, RootSystem, Weight};
use crate::weylmod::{add_scaled, character_dimension, check_characteristic, weight_set_saturated, Character, CharacterEngine};

/// p | m, where 0 | m means m = 0.
pub fn divides(p: u64, m: i64) -> bool {
    if p == 0 {
        m == 0
    } else {
        m.rem_euclid(p as i64) == 0
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::RankOutOfRange { lie_type: 'B', rank: n });
    }
    Ok(())
}

fn check_weight(n: usize, w: &Weight) -> Result<()> {
    if w.rank() != n {
        return Err(Error::LengthMismatch { expected: n, got: w.rank() });
    }
    if !w.is_dominant() {
        return Err(Error::NotDominant(w.0.clone()));
    }
    Ok(())
}

/// The linear map X(T_Y) → X(T_X) in fundamental-weight coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionMap {
    pub n: usize,
}

impl RestrictionMap {
    pub fn new(n: usize) -> Result<RestrictionMap> {
        check_n(n)?;
        Ok(RestrictionMap { n })
    }

    /// λ_i ↦ ω_i (i < n−1), λ_{n−1} ↦ ω_{n−1} + ω_n, λ_n ↦ ω_n.
    pub fn apply(&self, lambda: &Weight) -> Weight {
        let n = self.n;
        let mut out = lambda.0.clone();
        out[n - 1] = lambda.0[n - 2] + lambda.0[n - 1];
        Weight(out)
    }
}

pub fn restrict_weight(lambda: &Weight) -> Result<Weight> {
    let map = RestrictionMap::new(lambda.rank())?;
    Ok(map.apply(lambda))
}

/// The graph automorphism θ of D_n: swaps the coefficients of ω_{n−1} and ω_n.
pub fn theta_twist(omega: &Weight) -> Weight {
    let n = omega.rank();
    let mut out = omega.0.clone();
    if n >= 2 {
        out.swap(n - 2, n - 1);
    }
    Weight(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    TwoFactors,
    NotTwo,
    Unknown,
}

/// Why a weight fails to give exactly two factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Failure {
    /// λ = λ_k with k < n in characteristic 2.
    FundamentalCharTwo { k: usize },
    /// ⟨λ, α_n⟩ > 1 forces a third factor.
    AlphaNLarge { a_n: i64 },
    /// ω′ is not p-restricted.
    OmegaPrimeNotRestricted { k: usize },
    /// p ∤ a_i + a_j + j − i.
    Pair { i: usize, j: usize, value: i64 },
    /// p ∤ 2(a_n + a_k + n − k) − 1.
    Tail { k: usize, value: i64 },
    /// δ does not have the shape required for non-restricted weights.
    Digits { note: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Condition {
    #[serde(rename = "Thm1_case1")]
    Thm1Case1,
    #[serde(rename = "Thm1_case2")]
    Thm1Case2,
    #[serde(rename = "Thm1_case3")]
    Thm1Case3,
    #[serde(rename = "Thm3_1")]
    Thm31,
    #[serde(rename = "Cor2_case1")]
    Cor2Case1 { r: usize, base: Box<Condition> },
    #[serde(rename = "Cor2_case2")]
    Cor2Case2 { j: usize },
    #[serde(rename = "failed")]
    Failed(Failure),
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Thm1Case1 => write!(f, "Thm1_case1"),
            Condition::Thm1Case2 => write!(f, "Thm1_case2"),
            Condition::Thm1Case3 => write!(f, "Thm1_case3"),
            Condition::Thm31 => write!(f, "Thm3_1"),
            Condition::Cor2Case1 { r, base } => write!(f, "Cor2_case1(r={r},{base})"),
            Condition::Cor2Case2 { j } => write!(f, "Cor2_case2(j={j})"),
            Condition::Failed(x) => match x {
                Failure::FundamentalCharTwo { k } => write!(f, "failed(fundamental λ_{k} at p=2)"),
                Failure::AlphaNLarge { a_n } => write!(f, "failed(a_n={a_n}>1)"),
                Failure::OmegaPrimeNotRestricted { k } => write!(f, "failed(ω' not restricted, k={k})"),
                Failure::Pair { i, j, value } => write!(f, "failed(a: i={i},j={j},{value})"),
                Failure::Tail { k, value } => write!(f, "failed(b: k={k},{value})"),
                Failure::Digits { note } => write!(f, "failed(digits: {note})"),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorNote {
    pub weight: Weight,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchingVerdict {
    pub n: usize,
    pub p: u64,
    pub lambda: Weight,
    pub outcome: Outcome,
    pub factors: Vec<FactorNote>,
    pub fired_condition: Condition,
    pub completely_reducible: Option<bool>,
}

impl BranchingVerdict {
    fn two(n: usize, p: u64, lambda: &Weight, cond: Condition, pair: (Weight, Weight)) -> BranchingVerdict {
        BranchingVerdict {
            n,
            p,
            lambda: lambda.clone(),
            outcome: Outcome::TwoFactors,
            factors: vec![
                FactorNote { weight: pair.0, note: "ω = λ|_T".into() },
                FactorNote { weight: pair.1, note: "ω′".into() },
            ],
            fired_condition: cond,
            completely_reducible: Some(true),
        }
    }

    fn not_two(n: usize, p: u64, lambda: &Weight, why: Failure, factors: Vec<FactorNote>) -> BranchingVerdict {
        BranchingVerdict {
            n,
            p,
            lambda: lambda.clone(),
            outcome: Outcome::NotTwo,
            factors,
            fired_condition: Condition::Failed(why),
            completely_reducible: None,
        }
    }

    pub fn omega(&self) -> Option<&Weight> {
        self.factors.first().map(|f| &f.weight)
    }

    pub fn omega_prime(&self) -> Option<&Weight> {
        if self.outcome == Outcome::TwoFactors {
            self.factors.get(1).map(|f| &f.weight)
        } else {
            None
        }
    }
}

/// Largest k < n with a_k ≠ 0 (1-based).
fn last_nonzero_below_n(a: &[i64]) -> Option<usize> {
    let n = a.len();
    (0..n - 1).rev().find(|&r| a[r] != 0).map(|r| r + 1)
}

fn is_fundamental(a: &[i64]) -> Option<usize> {
    let nz: Vec<usize> = (0..a.len()).filter(|&r| a[r] != 0).collect();
    if nz.len() == 1 && a[nz[0]] == 1 {
        Some(nz[0] + 1)
    } else {
        None
    }
}

/// The two factor weights named for an accepted λ.
///
/// `case` must be the condition the classifier fired for λ. For k = 1 the
/// term in ω_{k−1} vanishes.
pub fn predicted_factors(n: usize, lambda: &Weight, case: &Condition) -> Result<(Weight, Weight)> {
    check_n(n)?;
    check_weight(n, lambda)?;
    let a = &lambda.0;
    let an = a[n - 1];
    let mismatch = || Error::Hypothesis(format!("{lambda} does not fit condition {case}"));
    match case {
        Condition::Thm1Case2 | Condition::Thm31 | Condition::Thm1Case3 if an == 1 => {
            if matches!(case, Condition::Thm1Case2) && is_fundamental(a) != Some(n) {
                return Err(mismatch());
            }
            let mut omega = a.clone();
            omega[n - 1] = a[n - 2] + 1;
            let omega = Weight(omega);
            let prime = theta_twist(&omega);
            Ok((omega, prime))
        }
        Condition::Thm1Case1 | Condition::Thm1Case3 if an == 0 => {
            let k = last_nonzero_below_n(a).ok_or_else(mismatch)?;
            let delta = if k == n - 1 { 1 } else { 0 };
            let mut omega = vec![0i64; n];
            omega[..k].copy_from_slice(&a[..k]);
            omega[n - 1] += delta * a[k - 1];
            let mut prime = vec![0i64; n];
            if k >= 2 {
                prime[..k - 2].copy_from_slice(&a[..k - 2]);
                prime[k - 2] = a[k - 2] + 1;
            }
            prime[k - 1] += a[k - 1] - 1;
            prime[n - 1] += delta * (a[k - 1] - 1);
            Ok((Weight(omega), Weight(prime)))
        }
        _ => Err(mismatch()),
    }
}

/// Λ(ω) ∩ Λ(ω′) = ∅ for weights of D_n modules.
pub fn weight_sets_disjoint(n: usize, omega: &Weight, prime: &Weight) -> Result<bool> {
    let d = RootSystem::new(LieType::D, n)?;
    let a = weight_set_saturated(&d, omega)?;
    let b = weight_set_saturated(&d, prime)?;
    Ok(!a.dominant.iter().any(|w| b.dominant.binary_search(w).is_ok()))
}

fn validate_restricted(n: usize, p: u64, lambda: &Weight) -> Result<()> {
    check_n(n)?;
    check_characteristic(p)?;
    check_weight(n, lambda)?;
    if lambda.is_zero() {
        return Err(Error::Hypothesis("λ must be non-zero".into()));
    }
    if p > 0 && !lambda.is_restricted(p) {
        return Err(Error::NotRestricted { weight: lambda.0.clone(), p });
    }
    Ok(())
}

/// Decide whether L_Y(λ)|_X has exactly two composition factors, for p-restricted λ.
pub fn classify_p_restricted(n: usize, p: u64, lambda: &Weight) -> Result<BranchingVerdict> {
    validate_restricted(n, p, lambda)?;
    let a = &lambda.0;
    let an = a[n - 1];
    let omega = RestrictionMap { n }.apply(lambda);
    let mut known = vec![FactorNote { weight: omega.clone(), note: "ω = λ|_T".into() }];
    if an > 0 {
        known.push(FactorNote { weight: theta_twist(&omega), note: "(λ−α_n)|_T".into() });
    }

    let fundamental = is_fundamental(a);
    if fundamental == Some(n) {
        let pair = predicted_factors(n, lambda, &Condition::Thm1Case2)?;
        return Ok(BranchingVerdict::two(n, p, lambda, Condition::Thm1Case2, pair));
    }
    if let Some(k) = fundamental {
        if p == 2 {
            return Ok(BranchingVerdict::not_two(n, p, lambda, Failure::FundamentalCharTwo { k }, known));
        }
        let pair = predicted_factors(n, lambda, &Condition::Thm1Case1)?;
        return Ok(BranchingVerdict::two(n, p, lambda, Condition::Thm1Case1, pair));
    }
    if an > 1 {
        return Ok(BranchingVerdict::not_two(n, p, lambda, Failure::AlphaNLarge { a_n: an }, known));
    }
    // λ ∉ Zλ_n here, so k exists.
    let k = last_nonzero_below_n(a).expect("λ is not a multiple of λ_n");
    if an == 0 && k >= 2 && p > 0 && a[k - 2] + 1 >= p as i64 {
        return Ok(BranchingVerdict::not_two(n, p, lambda, Failure::OmegaPrimeNotRestricted { k }, known));
    }
    let support: Vec<usize> = (1..n).filter(|&r| a[r - 1] != 0).collect();
    for w in support.windows(2) {
        let (i, j) = (w[0], w[1]);
        let value = a[i - 1] + a[j - 1] + (j - i) as i64;
        if !divides(p, value) {
            return Ok(BranchingVerdict::not_two(n, p, lambda, Failure::Pair { i, j, value }, known));
        }
    }
    let value = 2 * (an + a[k - 1] + (n - k) as i64) - 1;
    if !divides(p, value) {
        return Ok(BranchingVerdict::not_two(n, p, lambda, Failure::Tail { k, value }, known));
    }
    let cond = if an == 1 { Condition::Thm31 } else { Condition::Thm1Case3 };
    let pair = predicted_factors(n, lambda, &cond)?;
    Ok(BranchingVerdict::two(n, p, lambda, cond, pair))
}

/// δ = Σ p^i δ_i with every δ_i p-restricted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinbergDigits {
    pub p: u64,
    pub digits: Vec<Weight>,
}

impl SteinbergDigits {
    pub fn recompose(&self) -> Weight {
        let rank = self.digits[0].rank();
        let mut out = Weight::zero(rank);
        let mut scale = 1i64;
        for d in &self.digits {
            out = out.add(&d.scale(scale));
            scale *= self.p as i64;
        }
        out
    }

    /// Index of the last digit.
    pub fn r(&self) -> usize {
        self.digits.len() - 1
    }
}

pub fn steinberg_digits(delta: &Weight, p: u64) -> Result<SteinbergDigits> {
    if !crate::is_prime(p) {
        return Err(Error::InvalidCharacteristic(p));
    }
    if !delta.is_dominant() {
        return Err(Error::NotDominant(delta.0.clone()));
    }
    let q = p as i64;
    let mut rest = delta.clone();
    let mut digits = vec![];
    loop {
        digits.push(Weight(rest.0.iter().map(|c| c % q).collect()));
        rest = Weight(rest.0.iter().map(|c| c / q).collect());
        if rest.is_zero() {
            break;
        }
    }
    Ok(SteinbergDigits { p, digits })
}

/// Which reading of the characteristic-2 digit condition to apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorollaryMode {
    /// Count digits with index 1 ≤ j ≤ r, and require r > 0.
    Literal,
    /// Count digits with index 0 ≤ j ≤ r.
    #[default]
    Proof,
}

impl std::str::FromStr for CorollaryMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<CorollaryMode> {
        match s {
            "literal" => Ok(CorollaryMode::Literal),
            "proof" => Ok(CorollaryMode::Proof),
            _ => Err(Error::Hypothesis(format!("unknown mode {s}"))),
        }
    }
}

/// Decide the two-factor question for an arbitrary dominant δ.
pub fn classify_general(n: usize, p: u64, delta: &Weight, mode: CorollaryMode) -> Result<BranchingVerdict> {
    check_n(n)?;
    check_characteristic(p)?;
    check_weight(n, delta)?;
    if delta.is_zero() {
        return Err(Error::Hypothesis("δ must be non-zero".into()));
    }
    if p == 0 {
        let v = classify_p_restricted(n, p, delta)?;
        return Ok(lift_case1(v, 0, delta));
    }
    let sd = steinberg_digits(delta, p)?;
    let nonzero: Vec<usize> = (0..sd.digits.len()).filter(|&j| !sd.digits[j].is_zero()).collect();
    if nonzero.len() == 1 {
        let r = nonzero[0];
        let v = classify_p_restricted(n, p, &sd.digits[r])?;
        return Ok(lift_case1(v, r, delta));
    }
    let fail = |note: String| BranchingVerdict::not_two(n, p, delta, Failure::Digits { note }, vec![]);
    if p != 2 {
        return Ok(fail(format!("{} non-zero digits", nonzero.len())));
    }
    let lo = match mode {
        CorollaryMode::Literal => 1,
        CorollaryMode::Proof => 0,
    };
    let idx: Vec<usize> = (lo..sd.digits.len()).collect();
    let spin = Weight::fundamental(n, n);
    let on_alpha_n: Vec<usize> = idx.iter().copied().filter(|&j| sd.digits[j].0[n - 1] != 0).collect();
    let spin_digits: Vec<usize> = idx.iter().copied().filter(|&j| sd.digits[j] == spin).collect();
    if on_alpha_n.len() == 1 && spin_digits.len() == 1 && (mode == CorollaryMode::Proof || sd.r() > 0) {
        let j = spin_digits[0];
        let mut omega = Weight::zero(n);
        let mut scale = 1i64;
        for d in &sd.digits {
            omega = omega.add(&RestrictionMap { n }.apply(d).scale(scale));
            scale *= 2;
        }
        let prime = omega.add(&theta_twist(&Weight::fundamental(n, n)).sub(&Weight::fundamental(n, n)).scale(1 << j));
        return Ok(BranchingVerdict::two(n, p, delta, Condition::Cor2Case2 { j }, (omega, prime)));
    }
    Ok(fail(format!("{} digits on α_n, {} equal to λ_n", on_alpha_n.len(), spin_digits.len())))
}

fn lift_case1(v: BranchingVerdict, r: usize, delta: &Weight) -> BranchingVerdict {
    let scale = if v.p == 0 { 1 } else { (v.p as i64).pow(r as u32) };
    let factors = v.factors.iter().map(|f| FactorNote { weight: f.weight.scale(scale), note: f.note.clone() }).collect();
    let fired = match v.fired_condition {
        Condition::Failed(x) => Condition::Failed(x),
        c => Condition::Cor2Case1 { r, base: Box::new(c) },
    };
    BranchingVerdict { lambda: delta.clone(), factors, fired_condition: fired, ..v }
}

/// Limits for the decomposition oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleBudget {
    /// Largest height of a Gram matrix the character engine may build.
    pub gram_height: i64,
    pub time_ms: Option<u64>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { gram_height: DEFAULT_MAX_HEIGHT, time_ms: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub weight: Weight,
    pub multiplicity: u64,
    pub dim: u128,
}

/// Composition factors of L_Y(λ)|_X with a dimension ledger.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorList {
    pub n: usize,
    pub p: u64,
    pub lambda: Weight,
    pub factors: Vec<Factor>,
    pub dim_y: u128,
    pub dim_sum: u128,
}

impl FactorList {
    pub fn count(&self) -> u64 {
        self.factors.iter().map(|f| f.multiplicity).sum()
    }

    pub fn balanced(&self) -> bool {
        self.dim_y == self.dim_sum
    }
}

/// Bounds on the number of composition factors of L_Y(λ)|_X.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountBounds {
    pub lower: u64,
    pub upper: u64,
    pub exact: Option<FactorList>,
}

impl CountBounds {
    /// Whether the count is known to be 2, known not to be 2, or undecided.
    pub fn two_factors(&self) -> Option<bool> {
        if self.lower > 2 || self.upper < 2 {
            Some(false)
        } else if self.lower == 2 && self.upper == 2 {
            Some(true)
        } else {
            None
        }
    }
}

/// Character-peeling decomposition of restrictions B_n → D_n at one p.
pub struct Oracle {
    n: usize,
    p: u64,
    map: RestrictionMap,
    y: CharacterEngine,
    x: CharacterEngine,
    images: HashMap<Weight, Vec<Weight>>,
    budget: OracleBudget,
    deadline: Option<Instant>,
}

impl Oracle {
    pub fn new(n: usize, p: u64, budget: OracleBudget) -> Result<Oracle> {
        check_n(n)?;
        check_characteristic(p)?;
        let yrs = RootSystem::new(LieType::B, n)?;
        let xrs = RootSystem::new(LieType::D, n)?;
        Ok(Oracle {
            n,
            p,
            map: RestrictionMap { n },
            y: CharacterEngine::new(&yrs, p)?.with_gram_height(budget.gram_height),
            x: CharacterEngine::new(&xrs, p)?.with_gram_height(budget.gram_height),
            images: HashMap::new(),
            budget,
            deadline: None,
        })
    }

    fn start(&mut self) {
        self.deadline = self.budget.time_ms.map(|ms| Instant::now() + Duration::from_millis(ms));
    }

    fn tick(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::Budget(format!("time budget of {} ms exceeded", self.budget.time_ms.unwrap_or(0)))),
            _ => Ok(()),
        }
    }

    /// Dominant X-weights in the restriction of the Y-orbit of μ, with repetition.
    fn images(&mut self, mu: &Weight) -> &[Weight] {
        if !self.images.contains_key(mu) {
            let orbit = self.y.root_system().weyl_orbit(mu);
            let v: Vec<Weight> = orbit.members.iter().map(|w| self.map.apply(w)).filter(|w| w.is_dominant()).collect();
            self.images.insert(mu.clone(), v);
        }
        &self.images[mu]
    }

    /// Restriction of a W(B_n)-invariant character to D_n.
    pub fn restrict_character(&mut self, ch: &Character) -> Character {
        let mut out = Character::new();
        for (mu, &m) in ch {
            for w in self.images(mu).to_vec() {
                *out.entry(w).or_insert(0) += m;
            }
        }
        out.retain(|_, m| *m != 0);
        out
    }

    fn peel_x(&mut self, ch: &Character) -> Result<BTreeMap<Weight, i64>> {
        self.x.peel(ch)
    }

    fn factor_list(&mut self, lambda: &Weight, ych: &Character) -> Result<FactorList> {
        let dim_y = character_dimension(self.y.root_system(), ych);
        let rch = self.restrict_character(ych);
        let coeffs = self.peel_x(&rch)?;
        let mut factors = vec![];
        let mut dim_sum = 0u128;
        for (w, c) in coeffs.into_iter().rev() {
            if c < 0 {
                return Err(Error::Inconsistent(format!("negative multiplicity of L_X({w}) in L_Y({lambda})|_X")));
            }
            let l = self.x.irreducible(&w)?;
            let dim = character_dimension(self.x.root_system(), &l);
            dim_sum += dim * c as u128;
            factors.push(Factor { weight: w, multiplicity: c as u64, dim });
        }
        factors.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| b.weight.cmp(&a.weight)));
        Ok(FactorList { n: self.n, p: self.p, lambda: lambda.clone(), factors, dim_y, dim_sum })
    }

    /// Exact composition factors of L_Y(λ)|_X.
    pub fn decompose(&mut self, lambda: &Weight) -> Result<FactorList> {
        check_weight(self.n, lambda)?;
        self.start();
        let ych = self.y.irreducible(lambda)?;
        self.tick()?;
        let out = self.factor_list(lambda, &ych)?;
        self.tick()?;
        if !out.balanced() {
            return Err(Error::Inconsistent(format!("dimension ledger of {lambda}: {} ≠ {}", out.dim_y, out.dim_sum)));
        }
        Ok(out)
    }

    /// Exact factors when the character engine resolves λ, otherwise bounds.
    ///
    /// For restricted λ, χ(λ) minus the Jantzen sum is at most ch L(λ) and the
    /// difference is a genuine character, so its peeled coefficients bound the
    /// multiplicity of each X-factor from below. χ(λ) bounds from above.
    pub fn count_bounds(&mut self, lambda: &Weight) -> Result<CountBounds> {
        match self.decompose(lambda) {
            Ok(f) => {
                let c = f.count();
                Ok(CountBounds { lower: c, upper: c, exact: Some(f) })
            }
            Err(Error::Budget(_)) if self.p > 0 && lambda.is_restricted(self.p) => {
                self.start();
                let weyl = self.y.weyl(lambda)?;
                let mut lower_ch = (*weyl).clone();
                for (nu, k) in self.y.jantzen_sum(lambda)? {
                    let w = self.y.weyl(&nu)?;
                    add_scaled(&mut lower_ch, &w, -k);
                }
                let r = self.restrict_character(&lower_ch);
                let lower: i64 = self.peel_x(&r)?.values().map(|&c| c.max(0)).sum();
                self.tick()?;
                let r = self.restrict_character(&weyl);
                let upper: i64 = self.peel_x(&r)?.values().map(|&c| c.max(0)).sum();
                self.tick()?;
                Ok(CountBounds { lower: lower as u64, upper: upper as u64, exact: None })
            }
            Err(e) => Err(e),
        }
    }
}

/// Composition factors of L_Y(λ)|_X by peeling characters.
pub fn brute_force_decompose(n: usize, p: u64, lambda: &Weight, budget: OracleBudget) -> Result<FactorList> {
    Oracle::new(n, p, budget)?.decompose(lambda)
}

/// Nonzero dominant weights with every coefficient below `bound`, in lexicographic order.
pub fn weight_box(n: usize, bound: i64) -> Vec<Weight> {
    let mut out = vec![];
    let mut cur = vec![0i64; n];
    loop {
        if cur.iter().any(|&c| c != 0) {
            out.push(Weight(cur.clone()));
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < bound {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Count bounds for many weights at once, in input order.
pub fn count_bounds_many(n: usize, p: u64, lambdas: &[Weight], budget: OracleBudget) -> Result<Vec<Result<CountBounds>>> {
    Oracle::new(n, p, budget)?;
    Ok(lambdas
        .par_iter()
        .map_init(|| Oracle::new(n, p, budget).expect("validated"), |o, l| o.count_bounds(l))
        .collect())
}

/// Formula against oracle for one λ.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifierCheck {
    pub lambda: Weight,
    pub outcome: Outcome,
    pub condition: String,
    /// Whether the oracle finds exactly two factors; `None` when undecided.
    pub oracle_two: Option<bool>,
    /// Whether the oracle produced the full factor list.
    pub exact: bool,
    /// For accepted λ with an exact factor list: the factors are ω and ω′,
    /// each once, and the dimension ledger balances.
    pub factors_match: Option<bool>,
}

impl ClassifierCheck {
    pub fn agrees(&self) -> Option<bool> {
        let two = self.oracle_two?;
        Some(two == (self.outcome == Outcome::TwoFactors) && self.factors_match != Some(false))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifierAudit {
    pub n: usize,
    pub p: u64,
    pub checked: usize,
    pub decided: usize,
    pub exact: usize,
    pub disagreements: usize,
    pub checks: Vec<ClassifierCheck>,
}

/// Compare `classify_p_restricted` with the oracle on every nonzero p-restricted λ.
pub fn audit_classifier(n: usize, p: u64, budget: OracleBudget) -> Result<ClassifierAudit> {
    if p == 0 {
        return Err(Error::InvalidCharacteristic(p));
    }
    let lambdas = weight_box(n, p as i64);
    let bounds = count_bounds_many(n, p, &lambdas, budget)?;
    let mut checks = Vec::with_capacity(lambdas.len());
    for (lambda, b) in lambdas.iter().zip(bounds) {
        let v = classify_p_restricted(n, p, lambda)?;
        let (oracle_two, exact, factors_match) = match b {
            Ok(b) => {
                let fm = match (&b.exact, v.outcome) {
                    (Some(f), Outcome::TwoFactors) => {
                        let mut got: Vec<&Weight> = f.factors.iter().flat_map(|x| std::iter::repeat(&x.weight).take(x.multiplicity as usize)).collect();
                        let mut want: Vec<&Weight> = v.factors.iter().map(|x| &x.weight).collect();
                        got.sort();
                        want.sort();
                        Some(got == want && f.balanced())
                    }
                    _ => None,
                };
                (b.two_factors(), b.exact.is_some(), fm)
            }
            Err(Error::Budget(_)) | Err(Error::HeightBudget { .. }) => (None, false, None),
            Err(e) => return Err(e),
        };
        checks.push(ClassifierCheck { lambda: lambda.clone(), outcome: v.outcome, condition: v.fired_condition.to_string(), oracle_two, exact, factors_match });
    }
    Ok(ClassifierAudit {
        n,
        p,
        checked: checks.len(),
        decided: checks.iter().filter(|c| c.oracle_two.is_some()).count(),
        exact: checks.iter().filter(|c| c.exact).count(),
        disagreements: checks.iter().filter(|c| c.agrees() == Some(false)).count(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn restriction_map() {
        assert_eq!(restrict_weight(&w(&[0, 0, 1])).unwrap(), w(&[0, 0, 1]));
        assert_eq!(restrict_weight(&w(&[0, 1, 0])).unwrap(), w(&[0, 1, 1]));
        assert_eq!(restrict_weight(&w(&[0, 0, 0])).unwrap(), w(&[0, 0, 0]));
        assert!(restrict_weight(&w(&[1, 0])).is_err());
    }

    #[test]
    fn theta() {
        assert_eq!(theta_twist(&w(&[0, 0, 1])), w(&[0, 1, 0]));
        assert_eq!(theta_twist(&w(&[0, 1, 1])), w(&[0, 1, 1]));
        assert_eq!(theta_twist(&w(&[1, 0, 0])), w(&[1, 0, 0]));
    }

    #[test]
    fn classifier_examples() {
        let v = classify_p_restricted(3, 3, &w(&[1, 1, 0])).unwrap();
        assert_eq!(v.outcome, Outcome::TwoFactors);
        assert_eq!(v.fired_condition, Condition::Thm1Case3);
        assert_eq!(v.completely_reducible, Some(true));
        let v = classify_p_restricted(3, 5, &w(&[2, 0, 0])).unwrap();
        assert_eq!(v.outcome, Outcome::NotTwo);
        assert_eq!(v.fired_condition, Condition::Failed(Failure::Tail { k: 1, value: 7 }));
        let v = classify_p_restricted(3, 5, &w(&[0, 1, 0])).unwrap();
        assert_eq!(v.fired_condition, Condition::Thm1Case1);
        let v = classify_p_restricted(3, 5, &w(&[0, 0, 1])).unwrap();
        assert_eq!(v.fired_condition, Condition::Thm1Case2);
        assert!(matches!(classify_p_restricted(3, 5, &w(&[5, 0, 0])), Err(Error::NotRestricted { .. })));
        assert!(classify_p_restricted(3, 5, &w(&[0, 0, 0])).is_err());
    }

    #[test]
    fn characteristic_two_and_zero() {
        let v = classify_p_restricted(3, 2, &w(&[0, 1, 0])).unwrap();
        assert_eq!(v.outcome, Outcome::NotTwo);
        for l in weight_box(3, 2) {
            let v = classify_p_restricted(3, 2, &l).unwrap();
            assert_eq!(v.outcome == Outcome::TwoFactors, l == w(&[0, 0, 1]), "{l}");
        }
        assert_eq!(classify_p_restricted(4, 0, &w(&[0, 1, 0, 0])).unwrap().outcome, Outcome::TwoFactors);
        assert_eq!(classify_p_restricted(4, 0, &w(&[1, 1, 0, 0])).unwrap().outcome, Outcome::NotTwo);
    }

    #[test]
    fn remark_factors() {
        let two = |n, l: &[i64], c| predicted_factors(n, &w(l), &c).unwrap();
        assert_eq!(two(3, &[0, 0, 1], Condition::Thm1Case2), (w(&[0, 0, 1]), w(&[0, 1, 0])));
        assert_eq!(two(3, &[0, 1, 0], Condition::Thm1Case1), (w(&[0, 1, 1]), w(&[1, 0, 0])));
        assert_eq!(two(3, &[2, 0, 0], Condition::Thm1Case3), (w(&[2, 0, 0]), w(&[1, 0, 0])));
        assert_eq!(two(3, &[1, 0, 0], Condition::Thm1Case1), (w(&[1, 0, 0]), w(&[0, 0, 0])));
        assert!(predicted_factors(3, &w(&[1, 0, 0]), &Condition::Thm1Case2).is_err());
        let v = classify_p_restricted(3, 7, &w(&[2, 0, 0])).unwrap();
        assert_eq!(v.outcome, Outcome::TwoFactors);
        assert_eq!(v.omega_prime(), Some(&w(&[1, 0, 0])));
    }

    #[test]
    fn disjoint_weight_sets() {
        for p in [3u64, 5, 7] {
            for l in weight_box(3, p as i64) {
                let v = classify_p_restricted(3, p, &l).unwrap();
                if v.outcome == Outcome::TwoFactors {
                    let a = v.omega().unwrap();
                    let b = v.omega_prime().unwrap();
                    assert!(a.is_dominant() && b.is_dominant() && a != b);
                    assert!(weight_sets_disjoint(3, a, b).unwrap(), "{l} p={p}");
                }
            }
        }
    }

    #[test]
    fn digits() {
        let d = steinberg_digits(&w(&[5, 0, 0]), 5).unwrap();
        assert_eq!(d.digits, vec![w(&[0, 0, 0]), w(&[1, 0, 0])]);
        let d = steinberg_digits(&w(&[1, 3, 0]), 3).unwrap();
        assert_eq!(d.digits, vec![w(&[1, 0, 0]), w(&[0, 1, 0])]);
        let d = steinberg_digits(&w(&[1, 2, 0]), 3).unwrap();
        assert_eq!(d.digits, vec![w(&[1, 2, 0])]);
        assert_eq!(d.recompose(), w(&[1, 2, 0]));
        assert!(steinberg_digits(&w(&[1, 0, 0]), 4).is_err());
    }

    #[test]
    fn corollary_examples() {
        let v = classify_general(3, 5, &w(&[0, 5, 0]), CorollaryMode::Proof).unwrap();
        assert_eq!(v.outcome, Outcome::TwoFactors);
        assert_eq!(v.fired_condition, Condition::Cor2Case1 { r: 1, base: Box::new(Condition::Thm1Case1) });
        assert_eq!(v.omega(), Some(&w(&[0, 5, 5])));
        let v = classify_general(3, 3, &w(&[1, 3, 0]), CorollaryMode::Proof).unwrap();
        assert_eq!(v.outcome, Outcome::NotTwo);
        for mode in [CorollaryMode::Proof, CorollaryMode::Literal] {
            let v = classify_general(3, 2, &w(&[1, 0, 2]), mode).unwrap();
            assert_eq!(v.outcome, Outcome::TwoFactors);
            assert_eq!(v.fired_condition, Condition::Cor2Case2 { j: 1 });
            assert_eq!(v.factors[0].weight, w(&[1, 0, 2]));
            assert_eq!(v.factors[1].weight, w(&[1, 2, 0]));
        }
        // The two readings differ when the spin digit is δ_0.
        let l = w(&[2, 0, 1]);
        assert_eq!(classify_general(3, 2, &l, CorollaryMode::Proof).unwrap().outcome, Outcome::TwoFactors);
        assert_eq!(classify_general(3, 2, &l, CorollaryMode::Literal).unwrap().outcome, Outcome::NotTwo);
        let l = w(&[0, 0, 3]);
        assert_eq!(classify_general(3, 2, &l, CorollaryMode::Proof).unwrap().outcome, Outcome::NotTwo);
        assert_eq!(classify_general(3, 2, &l, CorollaryMode::Literal).unwrap().outcome, Outcome::TwoFactors);
    }

    #[test]
    fn oracle_anchors() {
        let b = OracleBudget::default();
        let f = brute_force_decompose(3, 7, &w(&[1, 0, 0]), b).unwrap();
        assert_eq!(f.dim_y, 7);
        let dims: Vec<(Weight, u128)> = f.factors.iter().map(|x| (x.weight.clone(), x.dim)).collect();
        assert_eq!(dims, vec![(w(&[1, 0, 0]), 6), (w(&[0, 0, 0]), 1)]);
        let f = brute_force_decompose(3, 5, &w(&[0, 0, 1]), b).unwrap();
        assert_eq!(f.dim_y, 8);
        assert_eq!(f.count(), 2);
        assert!(f.factors.iter().all(|x| x.dim == 4));
        let f = brute_force_decompose(3, 5, &w(&[0, 1, 0]), b).unwrap();
        let dims: Vec<u128> = f.factors.iter().map(|x| x.dim).collect();
        assert_eq!((f.dim_y, dims), (21, vec![15, 6]));
        let f = brute_force_decompose(3, 5, &w(&[1, 1, 0]), b).unwrap();
        assert!(f.count() > 2);
        assert!(f.balanced());
        let f = brute_force_decompose(3, 3, &w(&[1, 1, 0]), b).unwrap();
        assert_eq!(f.count(), 2);
    }
}
