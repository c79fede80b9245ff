//! Generating sets of weight spaces, the explicit bases of the special weights
//! `aσ_1+bσ_l` (type A) and `aλ_1`, `λ_i`, `aλ_1+λ_k` (type B), maximal vectors
//! of those weights, and quotients `V(λ)/⟨G u⁺⟩` by a Levi maximal vector.
//!
//! Everything is evaluated in the Verma module over Z and then read off in one of
//! three ambient spaces over F_p: the Weyl module (lattice coordinates), the
//! irreducible quotient (Gram rows), or a quotient of the Weyl module by the
//! submodule generated by a maximal vector.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::branching::divides;
use crate::chevalley::{b_long_segment, segment};
use crate::enveloping::{apply_raising, Coeff, Lin, ModuleElement, PBWMonomial, Straightener, WeylModule};
use crate::error::{Error, Result};
use crate::linalg::{self, EchelonModP};
use crate::rootsystem::{LieType, Root, RootSystem, Weight};
use crate::weylmod::{dominant_weights_below, weight_set_saturated};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    #[serde(rename = "generic")]
    Generic,
    #[serde(rename = "A_row")]
    ARow,
    #[serde(rename = "B_aλ1")]
    BALambda1,
    #[serde(rename = "B_λi")]
    BLambdaI,
    #[serde(rename = "B_aλ1λ2")]
    BALambda1Lambda2,
    #[serde(rename = "B_aλ1λk")]
    BALambda1LambdaK,
    #[serde(rename = "quotient")]
    Quotient,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::Generic => "generic",
            CaseTag::ARow => "A_row",
            CaseTag::BALambda1 => "B_aλ1",
            CaseTag::BLambdaI => "B_λi",
            CaseTag::BALambda1Lambda2 => "B_aλ1λ2",
            CaseTag::BALambda1LambdaK => "B_aλ1λk",
            CaseTag::Quotient => "quotient",
        };
        f.write_str(s)
    }
}

impl FromStr for CaseTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<CaseTag> {
        let t = s.replace('λ', "l").to_ascii_lowercase();
        Ok(match t.as_str() {
            "generic" => CaseTag::Generic,
            "a_row" | "arow" => CaseTag::ARow,
            "b_al1" => CaseTag::BALambda1,
            "b_li" => CaseTag::BLambdaI,
            "b_al1l2" => CaseTag::BALambda1Lambda2,
            "b_al1lk" => CaseTag::BALambda1LambdaK,
            "quotient" => CaseTag::Quotient,
            _ => return Err(Error::Hypothesis(format!("unknown case {s}"))),
        })
    }
}

/// A lowering operator applied to the highest-weight vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Operator {
    /// Divided-power PBW monomial.
    Divided { monomial: PBWMonomial },
    /// Product of non-divided root vectors `f_{β_1} ⋯ f_{β_r}`, written left to right.
    Word { roots: Vec<Root> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub label: String,
    pub op: Operator,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorList {
    pub lie_type: LieType,
    pub rank: usize,
    pub lambda: Weight,
    pub mu: Weight,
    /// `λ − μ` in simple-root coordinates.
    pub delta: Vec<i64>,
    pub case: CaseTag,
    pub generators: Vec<Generator>,
}

impl GeneratorList {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn root_system(&self) -> Result<RootSystem> {
        RootSystem::new(self.lie_type, self.rank)
    }

    /// The same list without its last generator.
    pub fn without_last(&self) -> GeneratorList {
        let mut g = self.clone();
        g.generators.pop();
        g
    }
}

fn op_delta(rs: &RootSystem, op: &Operator) -> Vec<i64> {
    match op {
        Operator::Divided { monomial } => monomial.delta(rs),
        Operator::Word { roots } => {
            let mut d = vec![0; rs.rank()];
            for r in roots {
                for (x, y) in d.iter_mut().zip(&r.0) {
                    *x += y;
                }
            }
            d
        }
    }
}

fn delta_between(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Result<Vec<i64>> {
    rs.dominance_delta(lambda, mu)
        .map(|d| d.coeffs)
        .map_err(|_| Error::NotDominated { lambda: lambda.0.clone(), mu: mu.0.clone() })
}

fn sub_root(rs: &RootSystem, lambda: &Weight, delta: &[i64]) -> Weight {
    rs.sub_delta(lambda, delta)
}

/// `Φ⁺_λ = {γ ∈ Φ⁺ : λ − γ is a weight of V(λ)}`.
pub fn phi_plus_lambda(rs: &RootSystem, lambda: &Weight) -> Result<Vec<Root>> {
    let sat = weight_set_saturated(rs, lambda)?;
    Ok(rs
        .positive_roots()
        .iter()
        .filter(|g| sat.contains(rs, &sub_root(rs, lambda, &g.0)))
        .cloned()
        .collect())
}

/// `m_λ = |Φ⁺| − |Φ⁺_λ|`.
pub fn m_lambda(rs: &RootSystem, lambda: &Weight) -> Result<usize> {
    Ok(rs.num_positive() - phi_plus_lambda(rs, lambda)?.len())
}

/// All divided-power monomials of weight `λ − μ`; with `restricted = Some(p)`
/// only roots of `Φ⁺_λ` are used, which requires every coefficient of `λ − μ`
/// to be below p.
pub fn generating_monomials(rs: &RootSystem, lambda: &Weight, mu: &Weight, restricted: Option<u64>) -> Result<GeneratorList> {
    let delta = delta_between(rs, lambda, mu)?;
    let s = Straightener::new(rs)?;
    let mut monos = s.monomials(&delta);
    if let Some(p) = restricted {
        if p < 2 || delta.iter().any(|&c| c as u64 >= p) {
            return Err(Error::Hypothesis(format!("coefficients {delta:?} of λ − μ are not all below p = {p}")));
        }
        let allowed: Vec<usize> = phi_plus_lambda(rs, lambda)?
            .iter()
            .filter_map(|g| rs.positive_index(&g.0))
            .collect();
        monos.retain(|m| m.iter().enumerate().all(|(i, &k)| k == 0 || allowed.contains(&i)));
    }
    if restricted.is_some() {
        let mut module = WeylModule::new(s.clone(), lambda)?;
        let rows = monos
            .iter()
            .map(|m| {
                let x = module.apply_mono(m, &module.highest())?;
                module.lattice_coords(&x, &delta)
            })
            .collect::<Result<Vec<_>>>()?;
        if linalg::rank_q(&rows) != module.weyl_dim_mu(&delta)? {
            return Err(Error::Inconsistent(format!("restricted monomials do not span V(λ)_{mu}")));
        }
    }
    let generators = monos
        .iter()
        .map(|m| {
            let monomial = PBWMonomial::from_mono(m);
            Generator { label: pbw_label(rs, &monomial), op: Operator::Divided { monomial } }
        })
        .collect();
    Ok(GeneratorList {
        lie_type: rs.lie_type(),
        rank: rs.rank(),
        lambda: lambda.clone(),
        mu: mu.clone(),
        delta,
        case: CaseTag::Generic,
        generators,
    })
}

fn pbw_label(rs: &RootSystem, m: &PBWMonomial) -> String {
    if m.factors.is_empty() {
        return "1".into();
    }
    m.factors
        .iter()
        .map(|&(i, k)| {
            let r = &rs.positive_roots()[i];
            if k == 1 {
                format!("f{r}")
            } else {
                format!("f{r}^({k})")
            }
        })
        .collect::<Vec<_>>()
        .join("")
}

/// Parameters of the explicit families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "case")]
pub enum AppendixCase {
    /// Type `A_l`, `σ = aσ_1 + bσ_l`, `μ = σ − (γ_1+⋯+γ_l)`.
    #[serde(rename = "A_row")]
    ARow { l: usize, a: i64, b: i64 },
    /// Type `B_n`, `λ = aλ_1`, `μ = λ − 2(α_1+⋯+α_n)`.
    #[serde(rename = "B_aλ1")]
    BALambda1 { n: usize, a: i64 },
    /// Type `B_n`, `λ = λ_i`, `μ = λ − (α_1+⋯+α_{i−1}+2α_i+⋯+2α_n)`.
    #[serde(rename = "B_λi")]
    BLambdaI { n: usize, i: usize },
    /// Type `B_n`, `λ = aλ_1 + λ_k` (2 ≤ k < n), `μ = λ − (α_1+⋯+α_{k−1}+2α_k+⋯+2α_n)`.
    #[serde(rename = "B_aλ1λk")]
    BALambda1LambdaK { n: usize, k: usize, a: i64 },
}

impl fmt::Display for AppendixCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AppendixCase::ARow { l, a, b } => write!(f, "A_row(l={l}, a={a}, b={b})"),
            AppendixCase::BALambda1 { n, a } => write!(f, "B_aλ1(n={n}, a={a})"),
            AppendixCase::BLambdaI { n, i } => write!(f, "B_λi(n={n}, i={i})"),
            AppendixCase::BALambda1LambdaK { n, k, a } => write!(f, "B_aλ1λk(n={n}, k={k}, a={a})"),
        }
    }
}

impl AppendixCase {
    pub fn tag(&self) -> CaseTag {
        match *self {
            AppendixCase::ARow { .. } => CaseTag::ARow,
            AppendixCase::BALambda1 { .. } => CaseTag::BALambda1,
            AppendixCase::BLambdaI { .. } => CaseTag::BLambdaI,
            AppendixCase::BALambda1LambdaK { k: 2, .. } => CaseTag::BALambda1Lambda2,
            AppendixCase::BALambda1LambdaK { .. } => CaseTag::BALambda1LambdaK,
        }
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Hypothesis(format!("{self}: {m}")));
        match *self {
            AppendixCase::ARow { l, a, b } => {
                if l < 2 || a < 1 || b < 1 {
                    return bad("need l ≥ 2 and a, b ≥ 1");
                }
            }
            AppendixCase::BALambda1 { n, a } => {
                if n < 3 || a < 2 {
                    return bad("need n ≥ 3 and a ≥ 2");
                }
            }
            AppendixCase::BLambdaI { n, i } => {
                if n < 3 || i < 2 || i >= n {
                    return bad("need 1 < i < n");
                }
            }
            AppendixCase::BALambda1LambdaK { n, k, a } => {
                if n < 3 || k < 2 || k >= n || a < 1 {
                    return bad("need 2 ≤ k < n and a ≥ 1");
                }
            }
        }
        Ok(())
    }

    pub fn root_system(&self) -> Result<RootSystem> {
        match *self {
            AppendixCase::ARow { l, .. } => RootSystem::new(LieType::A, l),
            AppendixCase::BALambda1 { n, .. }
            | AppendixCase::BLambdaI { n, .. }
            | AppendixCase::BALambda1LambdaK { n, .. } => RootSystem::new(LieType::B, n),
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            AppendixCase::ARow { l, .. } => l,
            AppendixCase::BALambda1 { n, .. }
            | AppendixCase::BLambdaI { n, .. }
            | AppendixCase::BALambda1LambdaK { n, .. } => n,
        }
    }

    pub fn lambda(&self) -> Weight {
        let r = self.rank();
        match *self {
            AppendixCase::ARow { l, a, b } => Weight::fundamental(l, 1).scale(a).add(&Weight::fundamental(l, l).scale(b)),
            AppendixCase::BALambda1 { a, .. } => Weight::fundamental(r, 1).scale(a),
            AppendixCase::BLambdaI { i, .. } => Weight::fundamental(r, i),
            AppendixCase::BALambda1LambdaK { k, a, .. } => Weight::fundamental(r, 1).scale(a).add(&Weight::fundamental(r, k)),
        }
    }

    pub fn delta(&self) -> Vec<i64> {
        match *self {
            AppendixCase::ARow { l, .. } => vec![1; l],
            AppendixCase::BALambda1 { n, .. } => vec![2; n],
            AppendixCase::BLambdaI { n, i } | AppendixCase::BALambda1LambdaK { n, k: i, .. } => {
                (1..=n).map(|j| if j < i { 1 } else { 2 }).collect()
            }
        }
    }

    pub fn mu(&self) -> Result<Weight> {
        let rs = self.root_system()?;
        Ok(rs.sub_delta(&self.lambda(), &self.delta()))
    }

    /// Whether a maximal vector of weight μ needs the quotient by a Levi maximal vector.
    pub fn uses_quotient(&self) -> bool {
        matches!(self, AppendixCase::BALambda1LambdaK { .. })
    }

    /// Condition for a (quotient) Levi maximal vector of weight `μ_{1,k}` to exist.
    pub fn levi_condition(&self, p: u64) -> bool {
        match *self {
            AppendixCase::BALambda1LambdaK { k, a, .. } => divides(p, a + k as i64),
            _ => true,
        }
    }

    /// The divisibility law governing maximal vectors of weight μ.
    pub fn divisibility(&self, p: u64) -> Option<bool> {
        match *self {
            AppendixCase::ARow { l, a, b } => Some(divides(p, a + b + l as i64 - 1)),
            AppendixCase::BALambda1 { n, a } => Some(divides(p, 2 * (a + n as i64) - 3)),
            AppendixCase::BLambdaI { .. } => None,
            AppendixCase::BALambda1LambdaK { n, k, .. } => Some(divides(p, 2 * (n as i64 - k as i64) + 1)),
        }
    }

    /// The solution vector stated for the maximal vector, in generator order.
    pub fn stated_vector(&self) -> Option<Vec<i64>> {
        match *self {
            AppendixCase::ARow { l, b, .. } => {
                let mut v = vec![1; l - 1];
                v.push(-b);
                Some(v)
            }
            AppendixCase::BALambda1 { n, .. } => {
                let mut v = vec![4; n - 1];
                v.push(1);
                Some(v)
            }
            AppendixCase::BLambdaI { .. } => None,
            AppendixCase::BALambda1LambdaK { n, k, .. } => {
                let (n, k) = (n as i64, k as i64);
                let mut v = vec![4];
                v.extend(std::iter::repeat(n - k - 1).take((k - 2) as usize));
                v.extend(std::iter::repeat(k - n).take((k - 2) as usize));
                v.extend(std::iter::repeat(-2).take(((n - k) * (k - 2)) as usize));
                v.extend(std::iter::repeat(4).take((n - k) as usize));
                v.push(1);
                Some(v)
            }
        }
    }

    /// Hypotheses for the four-way equivalence: restricted λ, and p ≠ 2 in type B.
    pub fn audit_hypotheses(&self, p: u64) -> Result<()> {
        self.check()?;
        if !crate::is_prime(p) {
            return Err(Error::InvalidCharacteristic(p));
        }
        if !matches!(self, AppendixCase::ARow { .. }) && p == 2 {
            return Err(Error::CharacteristicTwoTypeB);
        }
        if matches!(self, AppendixCase::BLambdaI { .. }) {
            return Err(Error::Hypothesis(format!("{self} has no divisibility law")));
        }
        if !self.lambda().is_restricted(p) {
            return Err(Error::NotRestricted { weight: self.lambda().0, p });
        }
        if !self.levi_condition(p) {
            return Err(Error::Hypothesis(format!("{self}: p = {p} does not divide a + k")));
        }
        Ok(())
    }
}

fn word(label: String, roots: Vec<Root>) -> Generator {
    Generator { label, op: Operator::Word { roots } }
}

/// `f_{i,j}` as a root (1-based, `f_{i,i} = f_{α_i}`).
fn fs(n: usize, i: usize, j: usize) -> (String, Root) {
    let label = if i == j { format!("f_{{α{i}}}") } else { format!("f_{{{i},{j}}}") };
    (label, segment(n, i, j))
}

/// `F_{r,s} = f_{α_r+⋯+α_{s−1}+2α_s+⋯+2α_n}`.
fn fl(n: usize, r: usize, s: usize) -> (String, Root) {
    (format!("F_{{{r},{s}}}"), b_long_segment(n, r, s))
}

fn product(parts: Vec<(String, Root)>) -> Generator {
    let label = parts.iter().map(|(l, _)| l.as_str()).collect::<String>();
    word(label, parts.into_iter().map(|(_, r)| r).collect())
}

fn case_list(case: &AppendixCase, tag: CaseTag, generators: Vec<Generator>) -> Result<GeneratorList> {
    let rs = case.root_system()?;
    let delta = case.delta();
    if let Some(g) = generators.iter().find(|g| op_delta(&rs, &g.op) != delta) {
        return Err(Error::Inconsistent(format!("{} does not have weight λ − {delta:?}", g.label)));
    }
    Ok(GeneratorList {
        lie_type: case.root_system()?.lie_type(),
        rank: case.rank(),
        lambda: case.lambda(),
        mu: case.mu()?,
        delta: case.delta(),
        case: tag,
        generators,
    })
}

/// The displayed spanning list of `V(λ)_μ`, in display order.
pub fn appendix_generators(case: &AppendixCase) -> Result<GeneratorList> {
    case.check()?;
    let mut g = Vec::new();
    match *case {
        AppendixCase::ARow { l, .. } => {
            for r in 1..l {
                g.push(product(vec![fs(l, 1, r), fs(l, r + 1, l)]));
            }
            g.push(product(vec![fs(l, 1, l)]));
        }
        AppendixCase::BALambda1 { n, .. } => {
            for j in 1..n {
                g.push(product(vec![fs(n, 1, j), fl(n, 1, j + 1)]));
            }
            let (lab, r) = fs(n, 1, n);
            g.push(word(format!("({lab})²"), vec![r.clone(), r]));
        }
        AppendixCase::BLambdaI { n, i } => {
            g.push(product(vec![fl(n, 1, i)]));
            g.push(product(vec![fs(n, 1, i - 1), fs(n, i, i), fl(n, i, i + 1)]));
            for j in i..n {
                g.push(product(vec![fs(n, i, j), fl(n, 1, j + 1)]));
            }
        }
        AppendixCase::BALambda1LambdaK { n, k, .. } => {
            g.push(product(vec![fl(n, 1, k)]));
            g.push(product(vec![fs(n, 1, k - 1), fs(n, k, k), fl(n, k, k + 1)]));
            for i in 1..=k.saturating_sub(2) {
                g.push(product(vec![fs(n, 1, i), fl(n, i + 1, k)]));
            }
            for j in k..n {
                g.push(product(vec![fs(n, 1, j), fl(n, k, j + 1)]));
            }
            for i in 1..=k.saturating_sub(2) {
                g.push(product(vec![fs(n, 1, i), fs(n, i + 1, k - 1), fs(n, k, k), fl(n, k, k + 1)]));
            }
            for i in 1..=k.saturating_sub(2) {
                for j in k..n {
                    g.push(product(vec![fs(n, 1, i), fs(n, k, j), fl(n, i + 1, j + 1)]));
                }
            }
            for j in k..n {
                g.push(product(vec![fs(n, k, j), fl(n, 1, j + 1)]));
            }
            g.push(product(vec![fs(n, k, n), fs(n, 1, n)]));
        }
    }
    case_list(case, case.tag(), g)
}

/// The displayed basis of the quotient weight space `V̄(λ)_μ` for `λ = aλ_1 + λ_k`.
pub fn quotient_generators(case: &AppendixCase) -> Result<GeneratorList> {
    case.check()?;
    let AppendixCase::BALambda1LambdaK { n, k, .. } = *case else {
        return Err(Error::Hypothesis(format!("{case} has no quotient basis")));
    };
    let mut g = vec![product(vec![fl(n, 1, k)])];
    for i in 1..=k - 2 {
        g.push(product(vec![fs(n, 1, i), fl(n, i + 1, k)]));
    }
    for i in 1..=k - 2 {
        g.push(product(vec![fs(n, 1, i), fs(n, i + 1, k - 1), fs(n, k, k), fl(n, k, k + 1)]));
    }
    for i in 1..=k - 2 {
        for j in k..n {
            g.push(product(vec![fs(n, 1, i), fs(n, k, j), fl(n, i + 1, j + 1)]));
        }
    }
    for j in k..n {
        g.push(product(vec![fs(n, k, j), fl(n, 1, j + 1)]));
    }
    g.push(product(vec![fs(n, k, n), fs(n, 1, n)]));
    case_list(case, CaseTag::Quotient, g)
}

/// The displayed list, certified to be a basis of `V(λ)_μ` in characteristic 0.
pub fn appendix_basis(case: &AppendixCase) -> Result<GeneratorList> {
    let list = appendix_generators(case)?;
    let rs = case.root_system()?;
    let mut module = WeylModule::for_system(&rs, &list.lambda)?;
    let mut rows = Vec::with_capacity(list.len());
    for g in &list.generators {
        let x = eval_op(&mut module, &g.op)?;
        rows.push(module.lattice_coords(&x, &list.delta)?);
    }
    let dim = module.weyl_dim_mu(&list.delta)?;
    let rank = linalg::rank_q(&rows);
    if rank != list.len() || dim != list.len() {
        return Err(Error::Inconsistent(format!(
            "{case}: {} generators of rank {rank} in a space of dimension {dim}",
            list.len()
        )));
    }
    Ok(list)
}

fn eval_op(module: &mut WeylModule, op: &Operator) -> Result<Lin> {
    let v = module.highest();
    match op {
        Operator::Divided { monomial } => {
            let m = monomial.to_mono(module.root_system().num_positive());
            module.apply_mono(&m, &v)
        }
        Operator::Word { roots } => {
            let idx = roots
                .iter()
                .map(|r| module.root_system().positive_index(&r.0).ok_or_else(|| Error::NotARoot(r.0.clone())))
                .collect::<Result<Vec<_>>>()?;
            module.apply_word(&idx, &v)
        }
    }
}

fn lin_delta(rs: &RootSystem, x: &Lin) -> Option<Vec<i64>> {
    x.first().map(|(m, _)| PBWMonomial::from_mono(m).delta(rs))
}

fn add_lin(acc: &mut HashMap<Box<[u8]>, Coeff>, x: &Lin, c: Coeff) -> Result<()> {
    for (m, v) in x {
        let e = acc.entry(m.clone()).or_insert(0);
        *e = e.checked_add(v.checked_mul(c).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
    }
    Ok(())
}

fn collect_lin(acc: HashMap<Box<[u8]>, Coeff>) -> Lin {
    let mut out: Lin = acc.into_iter().filter(|(_, c)| *c != 0).collect();
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AmbientKind {
    WeylModule,
    Irreducible,
    Quotient,
}

/// Where vectors are compared.
#[derive(Clone, Copy, Debug)]
pub enum Ambient<'a> {
    Weyl,
    Irreducible,
    Quotient(&'a QuotientSpace),
}

impl Ambient<'_> {
    pub fn kind(&self) -> AmbientKind {
        match self {
            Ambient::Weyl => AmbientKind::WeylModule,
            Ambient::Irreducible => AmbientKind::Irreducible,
            Ambient::Quotient(_) => AmbientKind::Quotient,
        }
    }
}

struct Killed {
    lin: Lin,
    delta: Vec<i64>,
}

/// A Weyl module read off over F_p in a fixed ambient.
struct Frame {
    module: WeylModule,
    p: u64,
    kind: AmbientKind,
    killed: Option<Killed>,
    spans: HashMap<Vec<i64>, EchelonModP>,
}

impl Frame {
    fn new(rs: &RootSystem, lambda: &Weight, p: u64, ambient: Ambient<'_>) -> Result<Frame> {
        if !crate::is_prime(p) {
            return Err(Error::InvalidCharacteristic(p));
        }
        let module = WeylModule::for_system(rs, lambda)?;
        let mut f = Frame { module, p, kind: ambient.kind(), killed: None, spans: HashMap::new() };
        if let Ambient::Quotient(q) = ambient {
            if q.p != p || &q.lambda != lambda {
                return Err(Error::Hypothesis("quotient built for another module".into()));
            }
            f.set_killed(&q.killed)?;
        }
        Ok(f)
    }

    fn set_killed(&mut self, u: &ModuleElement) -> Result<()> {
        let (lin, den) = u.to_lin(self.module.root_system().num_positive())?;
        if linalg::reduce_big(&den, self.p) == 0 {
            return Err(Error::Hypothesis("killed vector has a denominator divisible by p".into()));
        }
        let delta = lin_delta(self.module.root_system(), &lin).ok_or_else(|| Error::Hypothesis("killed vector is zero".into()))?;
        self.killed = Some(Killed { lin, delta });
        self.spans.clear();
        Ok(())
    }

    fn rank(&self) -> usize {
        self.module.root_system().rank()
    }

    fn eval(&mut self, op: &Operator) -> Result<Lin> {
        eval_op(&mut self.module, op)
    }

    fn raw_coords(&mut self, x: &Lin, delta: &[i64]) -> Result<Vec<u64>> {
        match self.kind {
            AmbientKind::Irreducible => self.module.irreducible_image_mod_p(x, delta, self.p),
            _ => self.module.weyl_coords_mod_p(x, delta, self.p),
        }
    }

    /// `⟨G u⁺⟩ ∩ V_{λ−delta}` in lattice coordinates mod p.
    fn killed_span(&mut self, delta: &[i64]) -> Result<Option<EchelonModP>> {
        let Some(k) = &self.killed else { return Ok(None) };
        if let Some(e) = self.spans.get(delta) {
            return Ok(Some(e.clone()));
        }
        let rest: Vec<i64> = delta.iter().zip(&k.delta).map(|(a, b)| a - b).collect();
        let width = self.module.weyl_dim_mu(delta)?;
        let mut e = EchelonModP::new(self.p, width);
        if rest.iter().all(|&c| c >= 0) {
            let u = k.lin.clone();
            let monos = self.module.straightener().monomials(&rest);
            for m in monos {
                let y = self.module.apply_mono(&m, &u)?;
                let c = self.module.weyl_coords_mod_p(&y, delta, self.p)?;
                e.insert(&c);
            }
        }
        self.spans.insert(delta.to_vec(), e.clone());
        Ok(Some(e))
    }

    /// Coordinates of x in the ambient weight space at `λ − delta`.
    fn coords(&mut self, x: &Lin, delta: &[i64]) -> Result<Vec<u64>> {
        let c = self.raw_coords(x, delta)?;
        Ok(match self.killed_span(delta)? {
            Some(e) => e.reduce(&c),
            None => c,
        })
    }

    fn element_coords(&mut self, x: &ModuleElement, delta: &[i64]) -> Result<Vec<u64>> {
        let rs = self.module.root_system().clone();
        for m in x.terms.keys() {
            if m.delta(&rs) != delta {
                return Err(Error::Inconsistent(format!("element is not of weight λ − {delta:?}")));
            }
        }
        let (lin, den) = x.to_lin(rs.num_positive())?;
        let d = linalg::reduce_big(&den, self.p);
        if d == 0 {
            return Err(Error::Hypothesis("denominator divisible by p".into()));
        }
        let inv = linalg::inv_mod(d, self.p);
        Ok(self.coords(&lin, delta)?.into_iter().map(|c| ((c as u128 * inv as u128) % self.p as u128) as u64).collect())
    }

    fn dim(&mut self, delta: &[i64]) -> Result<usize> {
        let base = match self.kind {
            AmbientKind::Irreducible => self.module.irreducible_dim_mu(delta, self.p)?,
            _ => self.module.weyl_dim_mu(delta)?,
        };
        Ok(base - self.killed_span(delta)?.map_or(0, |e| e.rank()))
    }

    fn simple_index(&self, i: usize) -> usize {
        let rs = self.module.root_system();
        rs.positive_index(&rs.simple_root(i).0).expect("simple root")
    }

    /// The matrix of `x ↦ (e_α x)_{α∈Π}` on the given vectors, one row per output coordinate.
    fn raising_rows(&mut self, vecs: &[Lin], delta: &[i64]) -> Result<Vec<Vec<u64>>> {
        let mut rows = Vec::new();
        for i in 0..self.rank() {
            let mut d = delta.to_vec();
            d[i] -= 1;
            if d.iter().any(|&c| c < 0) {
                continue;
            }
            let g = self.simple_index(i);
            let mut cols = Vec::with_capacity(vecs.len());
            for x in vecs {
                let y = self.module.raise(g, x)?;
                cols.push(self.coords(&y, &d)?);
            }
            let h = cols.first().map_or(0, |c| c.len());
            for r in 0..h {
                rows.push(cols.iter().map(|c| c[r]).collect());
            }
        }
        Ok(rows)
    }
}

fn transpose(cols: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let h = cols.first().map_or(0, |c| c.len());
    (0..h).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

fn combine(vecs: &[Lin], coeffs: &[u64]) -> Result<Lin> {
    let mut acc = HashMap::new();
    for (x, &c) in vecs.iter().zip(coeffs) {
        add_lin(&mut acc, x, c as Coeff)?;
    }
    Ok(collect_lin(acc))
}

/// Representative in `(−p/2, p/2]`.
pub fn centered(x: u64, p: u64) -> i64 {
    if x > p / 2 {
        x as i64 - p as i64
    } else {
        x as i64
    }
}

fn normalize(v: &mut [u64], p: u64) {
    let pivot = match v.last() {
        Some(&x) if x != 0 => x,
        _ => match v.iter().find(|&&x| x != 0) {
            Some(&x) => x,
            None => return,
        },
    };
    let inv = linalg::inv_mod(pivot, p);
    for x in v.iter_mut() {
        *x = ((*x as u128 * inv as u128) % p as u128) as u64;
    }
}

/// Whether two vectors over F_p span the same line.
pub fn proportional_mod_p(a: &[u64], b: &[i64], p: u64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let b: Vec<u64> = b.iter().map(|&x| linalg::reduce(x as i128, p)).collect();
    if a.iter().all(|&x| x == 0) || b.iter().all(|&x| x == 0) {
        return false;
    }
    linalg::rank_mod_p(&[a.to_vec(), b], p) == 1
}

#[derive(Clone, Debug, Serialize)]
pub struct MaxVecSolution {
    pub p: u64,
    pub ambient: AmbientKind,
    pub lambda: Weight,
    pub mu: Weight,
    /// Dimension of the space of maximal vectors of weight μ (zero included).
    pub solution_dim: usize,
    /// Coefficient vectors in generator order, modulo relations among the generators.
    pub basis_vectors: Vec<Vec<u64>>,
    /// The same vectors with entries in `(−p/2, p/2]`.
    pub centered: Vec<Vec<i64>>,
    /// Rank of the generators in the ambient weight space.
    pub generator_rank: usize,
    /// Dimension of the ambient weight space.
    pub ambient_dim: usize,
}

/// Maximal vectors of weight μ in the span of `gens`: elements killed by every
/// `e_α`, α simple. The solution space is ker(e) / ker(generators).
pub fn maximal_vector_space(gens: &GeneratorList, p: u64, ambient: Ambient<'_>) -> Result<MaxVecSolution> {
    let rs = gens.root_system()?;
    let mut fr = Frame::new(&rs, &gens.lambda, p, ambient)?;
    let vecs = gens.generators.iter().map(|g| fr.eval(&g.op)).collect::<Result<Vec<_>>>()?;
    let ngen = vecs.len();
    let cols = vecs.iter().map(|x| fr.coords(x, &gens.delta)).collect::<Result<Vec<_>>>()?;
    let g_rows = transpose(&cols);
    let ker_g = linalg::nullspace_mod_p(&g_rows, ngen, p);
    let e_rows = fr.raising_rows(&vecs, &gens.delta)?;
    let ker_e = linalg::nullspace_mod_p(&e_rows, ngen, p);
    let mut ech = EchelonModP::new(p, ngen);
    for v in &ker_g {
        ech.insert(v);
    }
    let mut basis = Vec::new();
    for v in ker_e {
        if ech.insert(&v) {
            let mut v = v;
            normalize(&mut v, p);
            basis.push(v);
        }
    }
    // Independent check through the rational element interface.
    for v in &basis {
        let w = ModuleElement::from_lin(&gens.lambda, &combine(&vecs, v)?);
        for i in 0..rs.rank() {
            let mut d = gens.delta.clone();
            d[i] -= 1;
            if d.iter().any(|&c| c < 0) {
                continue;
            }
            let y = apply_raising(&mut fr.module, &rs.simple_root(i), &w)?;
            if y.is_zero() {
                continue;
            }
            if fr.element_coords(&y, &d)?.iter().any(|&c| c != 0) {
                return Err(Error::Inconsistent("solution vector is not killed by e_α".into()));
            }
        }
    }
    let ambient_dim = fr.dim(&gens.delta)?;
    Ok(MaxVecSolution {
        p,
        ambient: ambient.kind(),
        lambda: gens.lambda.clone(),
        mu: gens.mu.clone(),
        solution_dim: basis.len(),
        centered: basis.iter().map(|v| v.iter().map(|&x| centered(x, p)).collect()).collect(),
        basis_vectors: basis,
        generator_rank: ngen - ker_g.len(),
        ambient_dim,
    })
}

/// Coordinates of one spanning vector in the quotient basis.
#[derive(Clone, Debug, Serialize)]
pub struct Rewrite {
    pub label: String,
    pub coords: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientSpace {
    pub p: u64,
    pub lambda: Weight,
    pub mu: Weight,
    /// `u⁺`, a maximal vector whose submodule is factored out.
    pub killed: ModuleElement,
    pub killed_weight: Weight,
    pub basis: GeneratorList,
    pub dim: usize,
    /// Each vector of the rewrite list written in `basis`.
    pub rewriting: Vec<Rewrite>,
}

/// `V(λ)/⟨G u⁺⟩` at the weight of `basis`, with `basis` certified to be a basis
/// and every vector of `rewrite` expressed in it.
pub fn quotient_space(u: &ModuleElement, basis: GeneratorList, rewrite: &GeneratorList, p: u64) -> Result<QuotientSpace> {
    let rs = basis.root_system()?;
    let mut fr = Frame::new(&rs, &basis.lambda, p, Ambient::Weyl)?;
    let Some(first) = u.terms.keys().next() else {
        return Err(Error::Hypothesis("killed vector is zero".into()));
    };
    let udelta = first.delta(&rs);
    if !is_maximal(&mut fr, u, &udelta)? {
        return Err(Error::Hypothesis("killed vector is not maximal".into()));
    }
    fr.set_killed(u)?;
    fr.kind = AmbientKind::Quotient;
    if fr.coords(&u.to_lin(rs.num_positive())?.0, &udelta)?.iter().any(|&c| c != 0) {
        return Err(Error::Inconsistent("killed vector survives in the quotient".into()));
    }
    let dim = fr.dim(&basis.delta)?;
    let cols = basis
        .generators
        .iter()
        .map(|g| {
            let x = fr.eval(&g.op)?;
            fr.coords(&x, &basis.delta)
        })
        .collect::<Result<Vec<_>>>()?;
    let rank = linalg::rank_mod_p(&cols, p);
    if rank != basis.len() || dim != basis.len() {
        return Err(Error::Inconsistent(format!(
            "{} quotient generators of rank {rank} in a space of dimension {dim}",
            basis.len()
        )));
    }
    let mut rewriting = Vec::new();
    for g in &rewrite.generators {
        let x = fr.eval(&g.op)?;
        let t = fr.coords(&x, &rewrite.delta)?;
        let c = linalg::solve_mod_p(&cols, &t, p).ok_or_else(|| Error::Inconsistent(format!("{} is outside the quotient span", g.label)))?;
        rewriting.push(Rewrite { label: g.label.clone(), coords: c.iter().map(|&x| centered(x, p)).collect() });
    }
    Ok(QuotientSpace {
        p,
        lambda: basis.lambda.clone(),
        mu: basis.mu.clone(),
        killed: u.clone(),
        killed_weight: rs.sub_delta(&basis.lambda, &udelta),
        dim,
        basis,
        rewriting,
    })
}

fn is_maximal(fr: &mut Frame, u: &ModuleElement, delta: &[i64]) -> Result<bool> {
    let rs = fr.module.root_system().clone();
    for i in 0..rs.rank() {
        let mut d = delta.to_vec();
        d[i] -= 1;
        if d.iter().any(|&c| c < 0) {
            continue;
        }
        let y = apply_raising(&mut fr.module, &rs.simple_root(i), u)?;
        if !y.is_zero() && fr.element_coords(&y, &d)?.iter().any(|&c| c != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The maximal vector `u⁺` of weight `λ − (α_1+⋯+α_k)` in `V(aλ_1+λ_k)` for type
/// `B_n`, obtained from the type-A family on α_1..α_k; requires `p | a+k`.
pub fn levi_maximal_vector(n: usize, k: usize, a: i64, p: u64) -> Result<ModuleElement> {
    let rs = RootSystem::new(LieType::B, n)?;
    let lambda = Weight::fundamental(n, 1).scale(a).add(&Weight::fundamental(n, k));
    let mut g = Vec::new();
    for r in 1..k {
        g.push(product(vec![fs(n, 1, r), fs(n, r + 1, k)]));
    }
    g.push(product(vec![fs(n, 1, k)]));
    let delta: Vec<i64> = (1..=n).map(|j| if j <= k { 1 } else { 0 }).collect();
    let list = GeneratorList {
        lie_type: LieType::B,
        rank: n,
        mu: rs.sub_delta(&lambda, &delta),
        lambda: lambda.clone(),
        delta,
        case: CaseTag::ARow,
        generators: g,
    };
    let sol = maximal_vector_space(&list, p, Ambient::Weyl)?;
    if sol.solution_dim != 1 {
        return Err(Error::Hypothesis(format!("no Levi maximal vector for a = {a}, k = {k}, p = {p}")));
    }
    let mut module = WeylModule::for_system(&rs, &lambda)?;
    let vecs = list.generators.iter().map(|g| eval_op(&mut module, &g.op)).collect::<Result<Vec<_>>>()?;
    let mut acc = HashMap::new();
    for (x, &c) in vecs.iter().zip(&sol.centered[0]) {
        add_lin(&mut acc, x, c as Coeff)?;
    }
    Ok(ModuleElement::from_lin(&lambda, &collect_lin(acc)))
}

/// The quotient `V̄(λ)_μ` for `λ = aλ_1 + λ_k`, `p | a+k`, with the full basis of
/// `V(λ)_μ` rewritten in the quotient basis.
pub fn appendix_quotient(case: &AppendixCase, p: u64) -> Result<QuotientSpace> {
    let AppendixCase::BALambda1LambdaK { n, k, a } = *case else {
        return Err(Error::Hypothesis(format!("{case} has no quotient")));
    };
    case.check()?;
    if p == 2 {
        return Err(Error::CharacteristicTwoTypeB);
    }
    if !case.levi_condition(p) {
        return Err(Error::Hypothesis(format!("{case}: p = {p} does not divide a + k")));
    }
    let u = levi_maximal_vector(n, k, a, p)?;
    quotient_space(&u, quotient_generators(case)?, &appendix_generators(case)?, p)
}

#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    pub member: bool,
    /// Coefficients on the span, when a member.
    pub coordinates: Option<Vec<i64>>,
}

/// Whether `target` lies in the span of `span` in the chosen ambient over F_p.
pub fn subspace_membership(target: &ModuleElement, span: &GeneratorList, p: u64, ambient: Ambient<'_>) -> Result<Membership> {
    let rs = span.root_system()?;
    for m in target.terms.keys() {
        if m.delta(&rs) != span.delta {
            return Err(Error::Hypothesis(format!("target is not of weight {}", span.mu)));
        }
    }
    let mut fr = Frame::new(&rs, &span.lambda, p, ambient)?;
    let t = fr.element_coords(target, &span.delta)?;
    let cols = span
        .generators
        .iter()
        .map(|g| {
            let x = fr.eval(&g.op)?;
            fr.coords(&x, &span.delta)
        })
        .collect::<Result<Vec<_>>>()?;
    let sol = if cols.is_empty() {
        t.iter().all(|&c| c == 0).then(Vec::new)
    } else {
        linalg::solve_mod_p(&cols, &t, p)
    };
    Ok(Membership { member: sol.is_some(), coordinates: sol.map(|v| v.iter().map(|&x| centered(x, p)).collect()) })
}

/// A generator evaluated as an element of `V(λ)`.
pub fn generator_element(list: &GeneratorList, index: usize) -> Result<ModuleElement> {
    let rs = list.root_system()?;
    let mut module = WeylModule::for_system(&rs, &list.lambda)?;
    let x = eval_op(&mut module, &list.generators[index].op)?;
    Ok(ModuleElement::from_lin(&list.lambda, &x))
}

/// `[V(λ) : L(μ)]` in characteristic p, from Gram ranks of the Weyl modules
/// `V(ν)` for the dominant ν between μ and λ.
pub fn composition_multiplicity(rs: &RootSystem, lambda: &Weight, mu: &Weight, p: u64) -> Result<i64> {
    delta_between(rs, lambda, mu)?;
    let s: Arc<Straightener> = Straightener::new(rs)?;
    let mut chain: Vec<Weight> = dominant_weights_below(rs, lambda).into_iter().filter(|nu| rs.is_below(nu, mu)).collect();
    chain.retain(|nu| rs.is_below(lambda, nu));
    let mut top = WeylModule::new(s.clone(), lambda)?;
    let mut modules: HashMap<Weight, WeylModule> = HashMap::new();
    let mut mult: Vec<(Weight, i64)> = Vec::new();
    for nu in &chain {
        let d = delta_between(rs, lambda, nu)?;
        let mut m = top.weyl_dim_mu(&d)? as i64;
        for (w, c) in &mult {
            if *c == 0 || !rs.is_below(w, nu) {
                continue;
            }
            let dd = delta_between(rs, w, nu)?;
            let module = modules.get_mut(w).expect("module for an earlier weight");
            m -= c * module.irreducible_dim_mu(&dd, p)? as i64;
        }
        if m < 0 {
            return Err(Error::Inconsistent(format!("negative composition multiplicity at {nu}")));
        }
        if m > 0 {
            modules.insert(nu.clone(), WeylModule::new(s.clone(), nu)?);
        }
        mult.push((nu.clone(), m));
        if nu == mu {
            return Ok(m);
        }
    }
    Ok(0)
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceAudit {
    pub case: AppendixCase,
    pub p: u64,
    /// `[V(λ) : L(μ)] > 0`.
    pub composition_factor: bool,
    /// The generators are linearly dependent in `L(λ)_μ`.
    pub dependent: bool,
    /// The last generator lies in the span of the others in `L(λ)_μ`.
    pub member: bool,
    pub divisible: bool,
    pub agree: bool,
}

/// The four statements that the appendix shows to be equivalent, each computed
/// independently.
pub fn equivalence_audit(case: &AppendixCase, p: u64) -> Result<EquivalenceAudit> {
    case.audit_hypotheses(p)?;
    let rs = case.root_system()?;
    let list = if case.uses_quotient() { quotient_generators(case)? } else { appendix_generators(case)? };
    let lambda = list.lambda.clone();
    let composition_factor = composition_multiplicity(&rs, &lambda, &list.mu, p)? > 0;
    let mut fr = Frame::new(&rs, &lambda, p, Ambient::Irreducible)?;
    let cols = list
        .generators
        .iter()
        .map(|g| {
            let x = fr.eval(&g.op)?;
            fr.coords(&x, &list.delta)
        })
        .collect::<Result<Vec<_>>>()?;
    let dependent = linalg::rank_mod_p(&cols, p) < cols.len();
    let target = generator_element(&list, list.len() - 1)?;
    let member = subspace_membership(&target, &list.without_last(), p, Ambient::Irreducible)?.member;
    let divisible = case.divisibility(p).expect("audit cases carry a law");
    Ok(EquivalenceAudit {
        case: *case,
        p,
        composition_factor,
        dependent,
        member,
        divisible,
        agree: composition_factor == dependent && dependent == member && member == divisible,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LawCheck {
    pub case: AppendixCase,
    pub p: u64,
    pub ambient: AmbientKind,
    pub divisible: bool,
    pub dim: usize,
    pub basis: Vec<Vec<i64>>,
    pub stated: Vec<i64>,
    /// Whether the solution, when it exists, spans the stated vector.
    pub proportional: Option<bool>,
    pub ok: bool,
}

/// One instance of a divisibility law: the maximal-vector space of weight μ has
/// dimension 1 exactly when the law holds, spanned by the stated vector.
pub fn check_divisibility_law(case: &AppendixCase, p: u64) -> Result<LawCheck> {
    case.check()?;
    if !matches!(case, AppendixCase::ARow { .. }) && p == 2 {
        return Err(Error::CharacteristicTwoTypeB);
    }
    let stated = case.stated_vector().ok_or_else(|| Error::Hypothesis(format!("{case} has no divisibility law")))?;
    let divisible = case.divisibility(p).expect("law");
    let sol = if case.uses_quotient() {
        let q = appendix_quotient(case, p)?;
        maximal_vector_space(&q.basis.clone(), p, Ambient::Quotient(&q))?
    } else {
        maximal_vector_space(&appendix_basis(case)?, p, Ambient::Weyl)?
    };
    let proportional = (sol.solution_dim == 1).then(|| proportional_mod_p(&sol.basis_vectors[0], &stated, p));
    let ok = sol.solution_dim == usize::from(divisible) && proportional != Some(false);
    Ok(LawCheck { case: *case, p, ambient: sol.ambient, divisible, dim: sol.solution_dim, basis: sol.centered, stated, proportional, ok })
}

/// Instances of the four families over ranks up to `rank_max`: type A with
/// `l ≤ min(rank_max, 4)` and `a, b ≤ 4`; `aλ_1` with `2 ≤ a ≤ 4`; `aλ_1+λ_k` with
/// `a ≤ max(4, p−1)` and `p | a+k`.
pub fn law_grid(rank_max: usize, primes: &[u64]) -> Vec<(AppendixCase, u64)> {
    let mut out = Vec::new();
    for &p in primes {
        for l in 2..=rank_max.min(4) {
            for a in 1..=4 {
                for b in 1..=4 {
                    out.push((AppendixCase::ARow { l, a, b }, p));
                }
            }
        }
        if p == 2 {
            continue;
        }
        for n in 3..=rank_max {
            for a in 2..=4 {
                out.push((AppendixCase::BALambda1 { n, a }, p));
            }
            for k in 2..n {
                for a in 1..=4.max(p as i64 - 1) {
                    if divides(p, a + k as i64) {
                        out.push((AppendixCase::BALambda1LambdaK { n, k, a }, p));
                    }
                }
            }
        }
    }
    out
}

/// The subset of `law_grid` satisfying the hypotheses of the four-way equivalence.
pub fn audit_grid(rank_max: usize, primes: &[u64]) -> Vec<(AppendixCase, u64)> {
    law_grid(rank_max, primes).into_iter().filter(|(c, p)| c.audit_hypotheses(*p).is_ok()).collect()
}

/// Signed sum of products of root vectors.
type Combo = Vec<(i64, Vec<Root>)>;

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub rank: usize,
    pub lambda: Weight,
    /// 0 when checked exactly in the Weyl module over Q.
    pub p: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.holds)
    }
}

fn combo_lin(module: &mut WeylModule, c: &Combo) -> Result<Lin> {
    let mut acc = HashMap::new();
    for (k, roots) in c {
        let x = eval_op(module, &Operator::Word { roots: roots.clone() })?;
        add_lin(&mut acc, &x, *k as Coeff)?;
    }
    Ok(collect_lin(acc))
}

fn combo_delta(rs: &RootSystem, c: &Combo) -> Vec<i64> {
    op_delta(rs, &Operator::Word { roots: c[0].1.clone() })
}

fn exact_equal(rs: &RootSystem, lambda: &Weight, lhs: &Combo, rhs: &Combo) -> Result<bool> {
    let mut module = WeylModule::for_system(rs, lambda)?;
    let d = combo_delta(rs, lhs);
    let l = combo_lin(&mut module, lhs)?;
    let r = combo_lin(&mut module, rhs)?;
    Ok(module.gram_row(&l, &d)? == module.gram_row(&r, &d)?)
}

fn quotient_equal(q: &QuotientSpace, lhs: &Combo, rhs: &Combo) -> Result<bool> {
    let rs = q.basis.root_system()?;
    let mut fr = Frame::new(&rs, &q.lambda, q.p, Ambient::Quotient(q))?;
    let d = combo_delta(&rs, lhs);
    let l = combo_lin(&mut fr.module, lhs)?;
    let r = combo_lin(&mut fr.module, rhs)?;
    Ok(fr.coords(&l, &d)? == fr.coords(&r, &d)?)
}

fn f(n: usize, i: usize, j: usize) -> Root {
    segment(n, i, j)
}

fn big_f(n: usize, r: usize, s: usize) -> Root {
    b_long_segment(n, r, s)
}

/// Closed-form relations in `V(λ_1)` and in the quotients `V(aλ_1+λ_k)/⟨G u⁺⟩`,
/// for the given ranks and odd primes. For each `(n, k, p)` the quotient uses the
/// least `a ≥ 1` with `p | a+k`.
pub fn identity_checks_for(ranks: &[usize], primes: &[u64]) -> Result<IdentityReport> {
    let mut checks = Vec::new();
    for &n in ranks {
        let rs = RootSystem::new(LieType::B, n)?;
        let l1 = Weight::fundamental(n, 1);
        let rhs: Combo = vec![(1, vec![f(n, 1, 1), big_f(n, 1, 2)])];
        for j in 1..n {
            let lhs: Combo = vec![(1, vec![f(n, 1, j), big_f(n, 1, j + 1)])];
            checks.push(IdentityCheck {
                name: format!("f_{{1,{j}}}F_{{1,{}}}v = f_{{α1}}F_{{1,2}}v", j + 1),
                rank: n,
                lambda: l1.clone(),
                p: 0,
                holds: exact_equal(&rs, &l1, &lhs, &rhs)?,
            });
        }
        let sq: Combo = vec![(1, vec![f(n, 1, n), f(n, 1, n)])];
        let twice: Combo = vec![(2, vec![f(n, 1, 1), big_f(n, 1, 2)])];
        checks.push(IdentityCheck {
            name: "(f_{1,n})²v = 2f_{α1}F_{1,2}v".into(),
            rank: n,
            lambda: l1.clone(),
            p: 0,
            holds: exact_equal(&rs, &l1, &sq, &twice)?,
        });
        for &p in primes {
            if p == 2 || !crate::is_prime(p) {
                continue;
            }
            for k in 2..n {
                let a = (1..=p as i64).find(|&a| divides(p, a + k as i64)).expect("some a");
                let case = AppendixCase::BALambda1LambdaK { n, k, a };
                let q = appendix_quotient(&case, p)?;
                let lambda = q.lambda.clone();
                let mut push = |name: String, lhs: &Combo, rhs: &Combo| -> Result<()> {
                    let holds = quotient_equal(&q, lhs, rhs)?;
                    checks.push(IdentityCheck { name, rank: n, lambda: lambda.clone(), p, holds });
                    Ok(())
                };
                for r in k + 1..=n {
                    let lhs: Combo = vec![(1, vec![f(n, 1, r)])];
                    let rhs: Combo = (1..k).map(|s| (1, vec![f(n, 1, s), f(n, s + 1, r)])).collect();
                    push(format!("f_{{1,{r}}}v̄ = Σ_s f_{{1,s}}f_{{s+1,{r}}}v̄ (k={k})"), &lhs, &rhs)?;
                }
                if k > 2 {
                    let lhs: Combo = vec![(1, vec![f(n, k, n), f(n, 2, n)])];
                    let rhs: Combo = vec![(-1, vec![big_f(n, 2, k)]), (-1, vec![f(n, 2, k - 1), f(n, k, k), big_f(n, k, k + 1)])];
                    push(format!("f_{{{k},{n}}}f_{{2,{n}}}v̄ = −F_{{2,{k}}}v̄ − f_{{2,{}}}f_{{α{k}}}F_{{{k},{}}}v̄", k - 1, k + 1), &lhs, &rhs)?;
                    let lhs: Combo = vec![(1, vec![f(n, k, n - 1), f(n, 1, n)])];
                    let mut rhs: Combo = (1..=k - 2).map(|r| (-1, vec![f(n, 1, r), f(n, r + 1, n - 1), f(n, k, n)])).collect();
                    rhs.push((1, vec![f(n, 1, n - 1), f(n, k, n)]));
                    push(format!("f_{{{k},{}}}f_{{1,{n}}}v̄ = −Σ_r f_{{1,r}}f_{{r+1,{}}}f_{{{k},{n}}}v̄ + f_{{1,{}}}f_{{{k},{n}}}v̄", n - 1, n - 1, n - 1), &lhs, &rhs)?;
                    for r in 1..k - 1 {
                        let lhs: Combo = vec![(1, vec![f(n, k, n - 1), f(n, r + 1, n)])];
                        let rhs: Combo = vec![(-1, vec![f(n, r + 1, n - 1), f(n, k, n)])];
                        push(format!("f_{{{k},{}}}f_{{{},{n}}}v̄ = −f_{{{},{}}}f_{{{k},{n}}}v̄", n - 1, r + 1, r + 1, n - 1), &lhs, &rhs)?;
                    }
                }
            }
        }
    }
    Ok(IdentityReport { checks })
}

/// The identity checks at ranks 3 and 4 over the primes 3, 5, 7, 11.
pub fn identity_checks() -> Result<IdentityReport> {
    identity_checks_for(&[3, 4], &[3, 5, 7, 11])
}

/// Dimension of the weight space of `gens` in the ambient, and the rank of `gens` there.
pub fn span_rank(gens: &GeneratorList, p: u64, ambient: Ambient<'_>) -> Result<(usize, usize)> {
    let rs = gens.root_system()?;
    let mut fr = Frame::new(&rs, &gens.lambda, p, ambient)?;
    let cols = gens
        .generators
        .iter()
        .map(|g| {
            let x = fr.eval(&g.op)?;
            fr.coords(&x, &gens.delta)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((fr.dim(&gens.delta)?, linalg::rank_mod_p(&cols, p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_row(l: usize, a: i64, b: i64) -> AppendixCase {
        AppendixCase::ARow { l, a, b }
    }

    #[test]
    fn generating_sets() {
        let rs = RootSystem::new(LieType::A, 3).unwrap();
        let lam = Weight(vec![2, 0, 1]);
        let g = generating_monomials(&rs, &lam, &lam, None).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.generators[0].label, "1");
        let mu = rs.sub_delta(&lam, &[1, 1, 1]);
        let full = generating_monomials(&rs, &lam, &mu, None).unwrap();
        let res = generating_monomials(&rs, &lam, &mu, Some(5)).unwrap();
        assert!(res.len() < full.len());
        for p in [3, 5, 7] {
            let (dim, r) = span_rank(&res, p, Ambient::Weyl).unwrap();
            assert_eq!(dim, 3);
            assert_eq!(r, 3);
        }
        let rs = RootSystem::new(LieType::B, 3).unwrap();
        let lam = Weight(vec![2, 0, 0]);
        let mu = rs.sub_delta(&lam, &[2, 2, 2]);
        assert!(generating_monomials(&rs, &lam, &mu, Some(2)).is_err());
    }

    #[test]
    fn m_lambda_values() {
        let rs = RootSystem::new(LieType::A, 3).unwrap();
        // Only roots γ_r+⋯+γ_s with r = 1 or s = 3 survive for aσ_1 + bσ_3.
        assert_eq!(m_lambda(&rs, &Weight(vec![2, 0, 1])).unwrap(), 1);
        assert_eq!(m_lambda(&rs, &Weight(vec![1, 1, 1])).unwrap(), 0);
    }

    #[test]
    fn basis_cardinalities() {
        assert_eq!(appendix_basis(&a_row(3, 2, 1)).unwrap().len(), 3);
        assert_eq!(appendix_basis(&AppendixCase::BALambda1 { n: 3, a: 2 }).unwrap().len(), 3);
        assert_eq!(appendix_basis(&AppendixCase::BALambda1LambdaK { n: 4, k: 3, a: 1 }).unwrap().len(), 8);
        assert_eq!(appendix_basis(&AppendixCase::BALambda1LambdaK { n: 3, k: 2, a: 1 }).unwrap().len(), 5);
        assert_eq!(appendix_basis(&AppendixCase::BLambdaI { n: 4, i: 3 }).unwrap().len(), 3);
        assert_eq!(appendix_basis(&AppendixCase::BLambdaI { n: 3, i: 2 }).unwrap().len(), 3);
        assert!(appendix_basis(&AppendixCase::BALambda1 { n: 3, a: 1 }).is_err());
    }

    #[test]
    fn type_a_maximal_vectors() {
        let g = appendix_basis(&a_row(3, 2, 1)).unwrap();
        let s = maximal_vector_space(&g, 5, Ambient::Weyl).unwrap();
        assert_eq!(s.solution_dim, 1);
        assert!(proportional_mod_p(&s.basis_vectors[0], &[1, 1, -1], 5));
        assert_eq!(maximal_vector_space(&g, 3, Ambient::Weyl).unwrap().solution_dim, 0);
    }

    #[test]
    fn type_b_maximal_vector() {
        let g = appendix_basis(&AppendixCase::BALambda1 { n: 3, a: 2 }).unwrap();
        let s = maximal_vector_space(&g, 7, Ambient::Weyl).unwrap();
        assert_eq!(s.solution_dim, 1);
        assert!(proportional_mod_p(&s.basis_vectors[0], &[4, 4, 1], 7));
    }

    #[test]
    fn quotient_dimensions() {
        let q = appendix_quotient(&AppendixCase::BALambda1LambdaK { n: 3, k: 2, a: 1 }, 3).unwrap();
        assert_eq!(q.dim, 3);
        assert_eq!(q.rewriting.len(), 5);
        let q = appendix_quotient(&AppendixCase::BALambda1LambdaK { n: 4, k: 3, a: 2 }, 5).unwrap();
        assert_eq!(q.dim, 6);
        // u⁺ itself vanishes in the quotient.
        let rs = RootSystem::new(LieType::B, 4).unwrap();
        let mut fr = Frame::new(&rs, &q.lambda, 5, Ambient::Quotient(&q)).unwrap();
        let (lin, _) = q.killed.to_lin(rs.num_positive()).unwrap();
        let d = lin_delta(&rs, &lin).unwrap();
        assert!(fr.coords(&lin, &d).unwrap().iter().all(|&c| c == 0));
        assert!(appendix_quotient(&AppendixCase::BALambda1LambdaK { n: 4, k: 3, a: 2 }, 7).is_err());
    }

    #[test]
    fn membership_examples() {
        let g = appendix_basis(&a_row(3, 2, 1)).unwrap();
        let target = generator_element(&g, 2).unwrap();
        let m = subspace_membership(&target, &g.without_last(), 5, Ambient::Irreducible).unwrap();
        assert!(m.member);
        assert_eq!(m.coordinates.unwrap(), vec![1, 1]);
        assert!(!subspace_membership(&target, &g.without_last(), 3, Ambient::Irreducible).unwrap().member);
        let g = appendix_basis(&AppendixCase::BALambda1 { n: 3, a: 2 }).unwrap();
        let target = generator_element(&g, 2).unwrap();
        assert!(subspace_membership(&target, &g.without_last(), 7, Ambient::Irreducible).unwrap().member);
        let other = generator_element(&appendix_basis(&a_row(3, 2, 2)).unwrap(), 0).unwrap();
        let g = appendix_basis(&a_row(3, 2, 1)).unwrap();
        assert!(subspace_membership(&other, &g, 5, Ambient::Irreducible).is_ok());
    }

    #[test]
    fn audits() {
        let r = equivalence_audit(&a_row(3, 2, 1), 5).unwrap();
        assert!(r.agree && r.divisible);
        let r = equivalence_audit(&a_row(3, 2, 1), 7).unwrap();
        assert!(r.agree && !r.divisible);
        let r = equivalence_audit(&AppendixCase::BALambda1LambdaK { n: 4, k: 3, a: 2 }, 5).unwrap();
        assert!(r.agree && !r.divisible);
    }

    #[test]
    fn identities_rank_three() {
        let rep = identity_checks_for(&[3], &[3, 5]).unwrap();
        for c in &rep.checks {
            assert!(c.holds, "{} fails at p = {}", c.name, c.p);
        }
    }

    #[test]
    fn stated_vector_shapes() {
        let c = AppendixCase::BALambda1LambdaK { n: 4, k: 3, a: 2 };
        assert_eq!(c.stated_vector().unwrap(), vec![4, 0, -1, -2, 4, 1]);
        assert_eq!(c.stated_vector().unwrap().len(), quotient_generators(&c).unwrap().len());
        let c = AppendixCase::BALambda1LambdaK { n: 4, k: 2, a: 3 };
        assert_eq!(c.stated_vector().unwrap(), vec![4, 4, 4, 1]);
    }

    #[test]
    fn case_names() {
        assert_eq!("B_aλ1λk".parse::<CaseTag>().unwrap(), CaseTag::BALambda1LambdaK);
        assert_eq!("b_al1".parse::<CaseTag>().unwrap(), CaseTag::BALambda1);
        assert!("nope".parse::<CaseTag>().is_err());
    }
}
