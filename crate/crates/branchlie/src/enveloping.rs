//! Divided-power PBW monomials acting on a highest-weight vector.
//!
//! Computations take place in the Verma module M(λ) over Z, which is free on the
//! divided-power monomials `f_{γ_1}^{(k_1)} ⋯ f_{γ_r}^{(k_r)} v` with
//! `γ_1 < … < γ_r` in the positive-root order (the smallest root acts last).
//! The contravariant form on M(λ) has radical containing the kernel of
//! M(λ) → V(λ), so Gram ranks over Q and F_p of the full monomial set are the
//! dimensions of V(λ)_μ and L(λ)_μ.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::chevalley::{structure_constants, StructureConstantTable};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rootsystem::{Root, RootSystem, Weight};

pub type Coeff = i128;
/// Exponent vector over the positive roots.
pub type Mono = Box<[u8]>;
/// Integral linear combination of monomials.
pub type Lin = Vec<(Mono, Coeff)>;

pub const DEFAULT_MAX_HEIGHT: i64 = 24;

fn cadd(a: Coeff, b: Coeff) -> Result<Coeff> {
    a.checked_add(b).ok_or(Error::Overflow)
}

fn cmul(a: Coeff, b: Coeff) -> Result<Coeff> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn accumulate(acc: &mut HashMap<Mono, Coeff>, lin: &[(Mono, Coeff)], scale: Coeff) -> Result<()> {
    if scale == 0 {
        return Ok(());
    }
    for (m, c) in lin {
        let e = acc.entry(m.clone()).or_insert(0);
        *e = cadd(*e, cmul(*c, scale)?)?;
    }
    Ok(())
}

fn finish(acc: HashMap<Mono, Coeff>, divisor: Coeff) -> Result<Lin> {
    let mut out: Lin = Vec::with_capacity(acc.len());
    for (m, c) in acc {
        if c == 0 {
            continue;
        }
        if c % divisor != 0 {
            return Err(Error::Inconsistent("inexact division in divided-power straightening".into()));
        }
        out.push((m, c / divisor));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn first_nonzero(m: &[u8]) -> Option<usize> {
    m.iter().position(|&k| k != 0)
}

#[derive(Clone, Copy, Debug)]
enum EfBracket {
    Cartan,
    Raise(usize, i64),
    Lower(usize, i64),
    Zero,
}

/// λ-independent straightening data for one root system.
#[derive(Debug)]
pub struct Straightener {
    table: StructureConstantTable,
    npos: usize,
    roots: Vec<Vec<i64>>,
    add: Vec<Option<usize>>,
    ff: Vec<i64>,
    ef: Vec<EfBracket>,
    pair: Vec<i64>,
    max_height: i64,
}

impl Straightener {
    pub fn new(rs: &RootSystem) -> Result<Arc<Straightener>> {
        Self::with_table(structure_constants(rs)?)
    }

    pub fn with_table(table: StructureConstantTable) -> Result<Arc<Straightener>> {
        let rs = table.root_system().clone();
        let npos = rs.num_positive();
        let pos = rs.positive_roots();
        let roots: Vec<Vec<i64>> = pos.iter().map(|r| r.0.clone()).collect();
        let mut add = vec![None; npos * npos];
        let mut ff = vec![0; npos * npos];
        let mut ef = vec![EfBracket::Zero; npos * npos];
        let mut pair = vec![0; npos * npos];
        for i in 0..npos {
            for j in 0..npos {
                let s = pos[i].add(&pos[j]);
                if let Some(k) = rs.positive_index(&s.0) {
                    add[i * npos + j] = Some(k);
                    // [f_i, f_j] = N(−i,−j) f_{i+j} = −N(i,j) f_{i+j}.
                    ff[i * npos + j] = -table.get(&pos[i], &pos[j]).expect("sum is a root");
                }
                pair[i * npos + j] = rs.pairing_root(&pos[i], &pos[j])?;
                // [e_i, f_j] = [e_i, e_{−j}].
                ef[i * npos + j] = if i == j {
                    EfBracket::Cartan
                } else {
                    let d = pos[i].sub(&pos[j]);
                    let c = table.get(&pos[i], &pos[j].neg());
                    match (rs.positive_index(&d.0), rs.positive_index(&d.neg().0), c) {
                        (Some(k), _, Some(c)) => EfBracket::Raise(k, c),
                        (_, Some(k), Some(c)) => EfBracket::Lower(k, c),
                        _ => EfBracket::Zero,
                    }
                };
            }
        }
        Ok(Arc::new(Straightener { table, npos, roots, add, ff, ef, pair, max_height: DEFAULT_MAX_HEIGHT }))
    }

    pub fn with_max_height(self: &Arc<Self>, h: i64) -> Arc<Straightener> {
        Arc::new(Straightener {
            table: self.table.clone(),
            npos: self.npos,
            roots: self.roots.clone(),
            add: self.add.clone(),
            ff: self.ff.clone(),
            ef: self.ef.clone(),
            pair: self.pair.clone(),
            max_height: h,
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        self.table.root_system()
    }

    pub fn table(&self) -> &StructureConstantTable {
        &self.table
    }

    pub fn num_positive(&self) -> usize {
        self.npos
    }

    pub fn max_height(&self) -> i64 {
        self.max_height
    }

    /// All exponent vectors of total weight `delta` (simple-root coordinates), sorted.
    pub fn monomials(&self, delta: &[i64]) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut cur = vec![0u8; self.npos];
        let mut rest = delta.to_vec();
        self.enumerate(0, &mut rest, &mut cur, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, i: usize, rest: &mut Vec<i64>, cur: &mut Vec<u8>, out: &mut Vec<Mono>) {
        if rest.iter().all(|&c| c == 0) {
            out.push(cur.clone().into_boxed_slice());
            return;
        }
        if i == self.npos {
            return;
        }
        let r = &self.roots[i];
        let mut k = 0;
        loop {
            self.enumerate(i + 1, rest, cur, out);
            if rest.iter().zip(r).any(|(x, y)| x < y) {
                break;
            }
            for (x, y) in rest.iter_mut().zip(r) {
                *x -= y;
            }
            k += 1;
            cur[i] = k;
        }
        for (x, y) in rest.iter_mut().zip(r) {
            *x += y * k as i64;
        }
        cur[i] = 0;
    }

    pub fn mono_delta(&self, m: &[u8]) -> Vec<i64> {
        let mut d = vec![0; self.root_system().rank()];
        for (i, &k) in m.iter().enumerate() {
            if k != 0 {
                for (x, y) in d.iter_mut().zip(&self.roots[i]) {
                    *x += y * k as i64;
                }
            }
        }
        d
    }

    pub fn unit(&self) -> Mono {
        vec![0u8; self.npos].into_boxed_slice()
    }
}

/// Gram matrix of the contravariant form on all monomials of one weight.
#[derive(Debug)]
pub struct WeightSpace {
    pub delta: Vec<i64>,
    pub monos: Vec<Mono>,
    pub index: HashMap<Mono, usize>,
    pub gram: Vec<Vec<Coeff>>,
}

impl WeightSpace {
    pub fn len(&self) -> usize {
        self.monos.len()
    }
    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }
    pub fn rank_q(&self) -> usize {
        linalg::rank_q_int(&self.gram)
    }
    pub fn rank_mod_p(&self, p: u64) -> usize {
        if p == 0 {
            return self.rank_q();
        }
        linalg::rank_mod_p_int(&self.gram, p)
    }
}

/// Row HNF of the Gram matrix: a Z-basis of V_Z(λ)_μ embedded by `x ↦ ⟨x, −⟩`.
#[derive(Debug)]
pub struct Lattice {
    pub hnf: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn rank(&self) -> usize {
        self.hnf.len()
    }
}

/// The module V(λ), computed through M(λ) and its contravariant form.
pub struct WeylModule {
    s: Arc<Straightener>,
    lambda: Weight,
    lam_pair: Vec<i64>,
    f_cache: HashMap<(u8, Mono), Rc<Lin>>,
    e_cache: HashMap<(u8, Mono), Rc<Lin>>,
    spaces: HashMap<Vec<i64>, Rc<WeightSpace>>,
    lattices: HashMap<Vec<i64>, Rc<Lattice>>,
}

impl WeylModule {
    pub fn new(s: Arc<Straightener>, lambda: &Weight) -> Result<WeylModule> {
        let rs = s.root_system();
        if lambda.rank() != rs.rank() {
            return Err(Error::LengthMismatch { expected: rs.rank(), got: lambda.rank() });
        }
        let lam_pair = rs.positive_roots().iter().map(|r| rs.pairing(lambda, r)).collect::<Result<Vec<_>>>()?;
        Ok(WeylModule {
            s,
            lambda: lambda.clone(),
            lam_pair,
            f_cache: HashMap::new(),
            e_cache: HashMap::new(),
            spaces: HashMap::new(),
            lattices: HashMap::new(),
        })
    }

    pub fn for_system(rs: &RootSystem, lambda: &Weight) -> Result<WeylModule> {
        WeylModule::new(Straightener::new(rs)?, lambda)
    }

    pub fn straightener(&self) -> &Arc<Straightener> {
        &self.s
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn root_system(&self) -> &RootSystem {
        self.s.root_system()
    }

    pub fn highest(&self) -> Lin {
        vec![(self.s.unit(), 1)]
    }

    /// Non-divided `f_b` applied to a monomial.
    pub fn act_f(&mut self, b: usize, m: &Mono) -> Result<Rc<Lin>> {
        let key = (b as u8, m.clone());
        if let Some(r) = self.f_cache.get(&key) {
            return Ok(r.clone());
        }
        let npos = self.s.npos;
        let res = match first_nonzero(m) {
            None => {
                let mut n = m.clone();
                n[b] = 1;
                vec![(n, 1)]
            }
            Some(i1) if b < i1 => {
                let mut n = m.clone();
                n[b] = 1;
                vec![(n, 1)]
            }
            Some(i1) if b == i1 => {
                let mut n = m.clone();
                n[b] = n[b].checked_add(1).ok_or(Error::Overflow)?;
                let k = n[b] as Coeff;
                vec![(n, k)]
            }
            Some(i1) => {
                // f_b f_{i1}^{(k)} X = (1/k)(f_{i1} f_b f_{i1}^{(k−1)} X + [f_b, f_{i1}] f_{i1}^{(k−1)} X).
                let k = m[i1] as Coeff;
                let mut rest = m.clone();
                rest[i1] -= 1;
                let mut acc = HashMap::new();
                let x = self.act_f(b, &rest)?;
                for (t, c) in x.iter() {
                    let y = self.act_f(i1, t)?;
                    accumulate(&mut acc, &y, *c)?;
                }
                if let Some(sum) = self.s.add[b * npos + i1] {
                    let c = self.s.ff[b * npos + i1] as Coeff;
                    let z = self.act_f(sum, &rest)?;
                    accumulate(&mut acc, &z, c)?;
                }
                finish(acc, k)?
            }
        };
        let rc = Rc::new(res);
        self.f_cache.insert(key, rc.clone());
        Ok(rc)
    }

    /// ⟨wt(m), γ_g⟩ for the weight λ − wt of the monomial.
    fn cartan_value(&self, g: usize, m: &[u8]) -> Coeff {
        let npos = self.s.npos;
        let mut v = self.lam_pair[g] as Coeff;
        for (i, &k) in m.iter().enumerate() {
            if k != 0 {
                v -= k as Coeff * self.s.pair[i * npos + g] as Coeff;
            }
        }
        v
    }

    /// `e_g` applied to a monomial.
    pub fn act_e(&mut self, g: usize, m: &Mono) -> Result<Rc<Lin>> {
        let key = (g as u8, m.clone());
        if let Some(r) = self.e_cache.get(&key) {
            return Ok(r.clone());
        }
        let npos = self.s.npos;
        let res = match first_nonzero(m) {
            None => Vec::new(),
            Some(i1) => {
                let k = m[i1] as Coeff;
                let mut rest = m.clone();
                rest[i1] -= 1;
                let mut acc = HashMap::new();
                let x = self.act_e(g, &rest)?;
                for (t, c) in x.iter() {
                    let y = self.act_f(i1, t)?;
                    accumulate(&mut acc, &y, *c)?;
                }
                match self.s.ef[g * npos + i1] {
                    EfBracket::Cartan => {
                        let h = self.cartan_value(g, &rest);
                        accumulate(&mut acc, &[(rest.clone(), 1)], h)?;
                    }
                    EfBracket::Raise(j, c) => {
                        let z = self.act_e(j, &rest)?;
                        accumulate(&mut acc, &z, c as Coeff)?;
                    }
                    EfBracket::Lower(j, c) => {
                        let z = self.act_f(j, &rest)?;
                        accumulate(&mut acc, &z, c as Coeff)?;
                    }
                    EfBracket::Zero => {}
                }
                finish(acc, k)?
            }
        };
        let rc = Rc::new(res);
        self.e_cache.insert(key, rc.clone());
        Ok(rc)
    }

    /// Non-divided `f_b` applied to a combination.
    pub fn lower(&mut self, b: usize, x: &[(Mono, Coeff)]) -> Result<Lin> {
        let mut acc = HashMap::new();
        for (m, c) in x {
            let y = self.act_f(b, m)?;
            accumulate(&mut acc, &y, *c)?;
        }
        finish(acc, 1)
    }

    /// Divided power `f_b^{(k)}` applied to a combination.
    pub fn lower_divided(&mut self, b: usize, k: u32, x: &[(Mono, Coeff)]) -> Result<Lin> {
        let mut y: Lin = x.to_vec();
        let mut fact: Coeff = 1;
        for i in 1..=k {
            y = self.lower(b, &y)?;
            fact = cmul(fact, i as Coeff)?;
        }
        let acc: HashMap<Mono, Coeff> = y.into_iter().collect();
        finish(acc, fact)
    }

    /// `e_g` applied to a combination.
    pub fn raise(&mut self, g: usize, x: &[(Mono, Coeff)]) -> Result<Lin> {
        let mut acc = HashMap::new();
        for (m, c) in x {
            let y = self.act_e(g, m)?;
            accumulate(&mut acc, &y, *c)?;
        }
        finish(acc, 1)
    }

    /// A word of non-divided lowering operators, applied right to left.
    pub fn apply_word(&mut self, word: &[usize], x: &[(Mono, Coeff)]) -> Result<Lin> {
        let mut y = x.to_vec();
        for &b in word.iter().rev() {
            y = self.lower(b, &y)?;
        }
        Ok(y)
    }

    /// A divided-power monomial applied to a combination.
    pub fn apply_mono(&mut self, m: &[u8], x: &[(Mono, Coeff)]) -> Result<Lin> {
        let mut y = x.to_vec();
        for (b, &k) in m.iter().enumerate().rev() {
            if k != 0 {
                y = self.lower_divided(b, k as u32, &y)?;
            }
        }
        Ok(y)
    }

    fn check_height(&self, delta: &[i64]) -> Result<()> {
        let h: i64 = delta.iter().sum();
        if h > self.s.max_height {
            return Err(Error::HeightBudget { height: h, limit: self.s.max_height });
        }
        Ok(())
    }

    /// Gram matrix on all monomials of weight λ − delta.
    pub fn weight_space(&mut self, delta: &[i64]) -> Result<Rc<WeightSpace>> {
        if let Some(ws) = self.spaces.get(delta) {
            return Ok(ws.clone());
        }
        self.check_height(delta)?;
        let monos = if delta.iter().any(|&c| c < 0) { Vec::new() } else { self.s.monomials(delta) };
        let index: HashMap<Mono, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let p = monos.len();
        let mut gram = vec![vec![0 as Coeff; p]; p];
        if delta.iter().all(|&c| c == 0) {
            if p == 1 {
                gram[0][0] = 1;
            }
        } else {
            // Group rows by their leading root so each parent space is fetched once.
            let mut by_lead: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (i, m) in monos.iter().enumerate() {
                by_lead.entry(first_nonzero(m).expect("nonzero delta")).or_default().push(i);
            }
            for (lead, rows) in by_lead {
                let mut parent_delta = delta.to_vec();
                for (x, y) in parent_delta.iter_mut().zip(&self.s.roots[lead]) {
                    *x -= y;
                }
                let parent = self.weight_space(&parent_delta)?;
                // e_lead m_j, expressed in the parent space.
                let mut images: Vec<Vec<(usize, Coeff)>> = Vec::with_capacity(p);
                for m in &monos {
                    let e = self.act_e(lead, m)?;
                    images.push(e.iter().map(|(t, c)| (parent.index[t], *c)).collect());
                }
                for &i in &rows {
                    let k = monos[i][lead] as Coeff;
                    let mut reduced = monos[i].clone();
                    reduced[lead] -= 1;
                    let prow = &parent.gram[parent.index[&reduced]];
                    for j in 0..p {
                        let mut s: Coeff = 0;
                        for &(t, c) in &images[j] {
                            s = cadd(s, cmul(c, prow[t])?)?;
                        }
                        if s % k != 0 {
                            return Err(Error::Inconsistent("non-integral Gram entry".into()));
                        }
                        gram[i][j] = s / k;
                    }
                }
            }
        }
        let ws = Rc::new(WeightSpace { delta: delta.to_vec(), monos, index, gram });
        self.spaces.insert(delta.to_vec(), ws.clone());
        Ok(ws)
    }

    /// The contravariant form between two elements of the same weight.
    pub fn form(&mut self, x: &[(Mono, Coeff)], y: &[(Mono, Coeff)]) -> Result<Coeff> {
        let Some((m0, _)) = x.first().or_else(|| y.first()) else { return Ok(0) };
        let delta = self.s.mono_delta(m0);
        let ws = self.weight_space(&delta)?;
        let mut s: Coeff = 0;
        for (a, ca) in x {
            let i = ws.index[a];
            for (b, cb) in y {
                s = cadd(s, cmul(cmul(*ca, *cb)?, ws.gram[i][ws.index[b]])?)?;
            }
        }
        Ok(s)
    }

    /// `⟨x, m⟩` for every monomial m of the weight space.
    pub fn gram_row(&mut self, x: &[(Mono, Coeff)], delta: &[i64]) -> Result<Vec<Coeff>> {
        let ws = self.weight_space(delta)?;
        let mut row = vec![0 as Coeff; ws.len()];
        for (m, c) in x {
            let i = *ws.index.get(m).ok_or_else(|| Error::Inconsistent("monomial of the wrong weight".into()))?;
            for (r, g) in row.iter_mut().zip(&ws.gram[i]) {
                *r = cadd(*r, cmul(*c, *g)?)?;
            }
        }
        Ok(row)
    }

    pub fn lattice(&mut self, delta: &[i64]) -> Result<Rc<Lattice>> {
        if let Some(l) = self.lattices.get(delta) {
            return Ok(l.clone());
        }
        let ws = self.weight_space(delta)?;
        let rows: Vec<Vec<BigInt>> = ws.gram.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let l = Rc::new(Lattice { hnf: linalg::hermite_normal_form(&rows) });
        self.lattices.insert(delta.to_vec(), l.clone());
        Ok(l)
    }

    /// Integral coordinates of x ∈ V_Z(λ)_μ in the lattice basis.
    pub fn lattice_coords(&mut self, x: &[(Mono, Coeff)], delta: &[i64]) -> Result<Vec<BigInt>> {
        let row = self.gram_row(x, delta)?;
        let lat = self.lattice(delta)?;
        let big: Vec<BigInt> = row.iter().map(|&v| BigInt::from(v)).collect();
        linalg::hnf_coordinates(&lat.hnf, &big).ok_or_else(|| Error::Inconsistent("element outside V_Z".into()))
    }

    /// Image of x in V_K(λ)_μ, as lattice coordinates mod p (exact when p = 0 is not used).
    pub fn weyl_coords_mod_p(&mut self, x: &[(Mono, Coeff)], delta: &[i64], p: u64) -> Result<Vec<u64>> {
        Ok(self.lattice_coords(x, delta)?.iter().map(|c| linalg::reduce_big(c, p)).collect())
    }

    /// Image of x in L(λ)_μ, represented by its Gram row mod p.
    pub fn irreducible_image_mod_p(&mut self, x: &[(Mono, Coeff)], delta: &[i64], p: u64) -> Result<Vec<u64>> {
        Ok(self.gram_row(x, delta)?.iter().map(|&c| linalg::reduce(c, p)).collect())
    }

    /// dim V(λ)_μ.
    pub fn weyl_dim_mu(&mut self, delta: &[i64]) -> Result<usize> {
        Ok(self.lattice(delta)?.rank())
    }

    /// dim L(λ)_μ in characteristic p (p = 0 gives the Weyl multiplicity).
    pub fn irreducible_dim_mu(&mut self, delta: &[i64], p: u64) -> Result<usize> {
        Ok(self.weight_space(delta)?.rank_mod_p(p))
    }
}

/// Monomial in root-index notation, factors in increasing root order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PBWMonomial {
    pub factors: Vec<(usize, u32)>,
}

impl PBWMonomial {
    pub fn identity() -> PBWMonomial {
        PBWMonomial { factors: Vec::new() }
    }
    pub fn from_mono(m: &[u8]) -> PBWMonomial {
        PBWMonomial { factors: m.iter().enumerate().filter(|(_, &k)| k != 0).map(|(i, &k)| (i, k as u32)).collect() }
    }
    pub fn to_mono(&self, npos: usize) -> Mono {
        let mut v = vec![0u8; npos];
        for &(i, k) in &self.factors {
            v[i] = k as u8;
        }
        v.into_boxed_slice()
    }
    /// Weight of the monomial, in simple-root coordinates.
    pub fn delta(&self, rs: &RootSystem) -> Vec<i64> {
        let mut d = vec![0; rs.rank()];
        for &(i, k) in &self.factors {
            for (x, y) in d.iter_mut().zip(&rs.positive_roots()[i].0) {
                *x += y * k as i64;
            }
        }
        d
    }
}

/// Rational combination of monomials applied to the highest-weight vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleElement {
    pub lambda: Weight,
    pub terms: BTreeMap<PBWMonomial, BigRational>,
}

impl ModuleElement {
    pub fn highest(lambda: &Weight) -> ModuleElement {
        let mut terms = BTreeMap::new();
        terms.insert(PBWMonomial::identity(), BigRational::one());
        ModuleElement { lambda: lambda.clone(), terms }
    }

    pub fn zero(lambda: &Weight) -> ModuleElement {
        ModuleElement { lambda: lambda.clone(), terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_lin(lambda: &Weight, x: &[(Mono, Coeff)]) -> ModuleElement {
        let terms = x
            .iter()
            .filter(|(_, c)| *c != 0)
            .map(|(m, c)| (PBWMonomial::from_mono(m), BigRational::from_integer(BigInt::from(*c))))
            .collect();
        ModuleElement { lambda: lambda.clone(), terms }
    }

    /// Integral combination and the common denominator it was scaled by.
    pub fn to_lin(&self, npos: usize) -> Result<(Lin, BigInt)> {
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = num_integer::Integer::lcm(&den, c.denom());
        }
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let v = (c * BigRational::from_integer(den.clone())).to_integer();
            out.push((m.to_mono(npos), v.to_i128().ok_or(Error::Overflow)?));
        }
        Ok((out, den))
    }

    fn from_scaled(lambda: &Weight, x: &[(Mono, Coeff)], den: &BigInt) -> ModuleElement {
        let terms = x
            .iter()
            .filter(|(_, c)| *c != 0)
            .map(|(m, c)| (PBWMonomial::from_mono(m), BigRational::new(BigInt::from(*c), den.clone())))
            .collect();
        ModuleElement { lambda: lambda.clone(), terms }
    }
}

impl Serialize for ModuleElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<(&PBWMonomial, String)> = self.terms.iter().map(|(m, c)| (m, c.to_string())).collect();
        let mut st = s.serialize_struct("ModuleElement", 2)?;
        st.serialize_field("lambda", &self.lambda)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

fn positive_index(rs: &RootSystem, gamma: &Root) -> Result<usize> {
    rs.positive_index(&gamma.0).ok_or_else(|| Error::NotARoot(gamma.0.clone()))
}

/// `f_γ^k / k! · x`, re-expressed in PBW-ordered monomials.
pub fn apply_lowering(module: &mut WeylModule, gamma: &Root, k: u32, x: &ModuleElement) -> Result<ModuleElement> {
    let g = positive_index(module.root_system(), gamma)?;
    let (lin, den) = x.to_lin(module.s.npos)?;
    let y = module.lower_divided(g, k, &lin)?;
    Ok(ModuleElement::from_scaled(&x.lambda, &y, &den))
}

/// `e_γ · x`, with `e_γ v^λ = 0`.
pub fn apply_raising(module: &mut WeylModule, gamma: &Root, x: &ModuleElement) -> Result<ModuleElement> {
    let g = positive_index(module.root_system(), gamma)?;
    let (lin, den) = x.to_lin(module.s.npos)?;
    let y = module.raise(g, &lin)?;
    Ok(ModuleElement::from_scaled(&x.lambda, &y, &den))
}

fn delta_of(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Result<Vec<i64>> {
    rs.dominance_delta(lambda, mu)
        .map(|d| d.coeffs)
        .map_err(|_| Error::NotDominated { lambda: lambda.0.clone(), mu: mu.0.clone() })
}

/// Gram matrix of the contravariant form on the generating monomials of V(λ)_μ.
pub fn contravariant_gram(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Result<(Vec<PBWMonomial>, Vec<Vec<BigRational>>)> {
    let delta = delta_of(rs, lambda, mu)?;
    let mut module = WeylModule::for_system(rs, lambda)?;
    let ws = module.weight_space(&delta)?;
    let monos = ws.monos.iter().map(|m| PBWMonomial::from_mono(m)).collect();
    let gram = ws
        .gram
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    Ok((monos, gram))
}

/// Z-basis of V_Z(λ)_μ in monomial coordinates, with the form on it.
#[derive(Clone, Debug, Serialize)]
pub struct WeightSpaceLattice {
    pub lambda: Weight,
    pub mu: Weight,
    pub monomials: Vec<PBWMonomial>,
    /// Rows are lattice vectors written in the monomials above (rational in general).
    #[serde(skip)]
    pub lattice_basis: Vec<Vec<BigRational>>,
    #[serde(skip)]
    pub gram: Vec<Vec<BigInt>>,
}

impl WeightSpaceLattice {
    pub fn rank(&self) -> usize {
        self.lattice_basis.len()
    }
    pub fn gram_determinant(&self) -> BigInt {
        linalg::det(&self.gram)
    }
}

/// Integral basis for V_Z(λ)_μ: choose monomials forming a Q-basis, express every
/// monomial in it, and take the lattice generated by those coordinates.
pub fn lattice_basis(rs: &RootSystem, lambda: &Weight, mu: &Weight) -> Result<WeightSpaceLattice> {
    let delta = delta_of(rs, lambda, mu)?;
    let mut module = WeylModule::for_system(rs, lambda)?;
    let ws = module.weight_space(&delta)?;
    lattice_from_space(lambda, mu, &ws, None)
}

/// As [`lattice_basis`], with the monomials taken in a permuted order.
pub fn lattice_basis_permuted(rs: &RootSystem, lambda: &Weight, mu: &Weight, perm: &[usize]) -> Result<WeightSpaceLattice> {
    let delta = delta_of(rs, lambda, mu)?;
    let mut module = WeylModule::for_system(rs, lambda)?;
    let ws = module.weight_space(&delta)?;
    lattice_from_space(lambda, mu, &ws, Some(perm))
}

fn lattice_from_space(lambda: &Weight, mu: &Weight, ws: &WeightSpace, perm: Option<&[usize]>) -> Result<WeightSpaceLattice> {
    let p = ws.len();
    let order: Vec<usize> = match perm {
        Some(q) => q.to_vec(),
        None => (0..p).collect(),
    };
    let q = |x: Coeff| BigRational::from_integer(BigInt::from(x));
    // Monomials whose Gram rows are independent form a Q-basis B of V(λ)_μ.
    let mut basis: Vec<usize> = Vec::new();
    let mut chosen_rows: Vec<Vec<BigInt>> = Vec::new();
    for &i in &order {
        let mut trial = chosen_rows.clone();
        trial.push(ws.gram[i].iter().map(|&x| BigInt::from(x)).collect());
        if linalg::rank_q(&trial) > chosen_rows.len() {
            chosen_rows = trial;
            basis.push(i);
        }
    }
    let d = basis.len();
    // c(m): coordinates of m in B, from ⟨m, b'⟩ = Σ c_b ⟨b, b'⟩ over b' ∈ B.
    let g_bb: Vec<Vec<BigRational>> = basis.iter().map(|&a| basis.iter().map(|&b| q(ws.gram[a][b])).collect()).collect();
    let inv = invert_rational(&g_bb)?;
    let coords: Vec<Vec<BigRational>> = order
        .iter()
        .map(|&m| {
            let rhs: Vec<BigRational> = basis.iter().map(|&b| q(ws.gram[m][b])).collect();
            (0..d).map(|j| (0..d).map(|k| &rhs[k] * &inv[k][j]).fold(BigRational::zero(), |a, b| a + b)).collect()
        })
        .collect();
    let mut den = BigInt::one();
    for row in &coords {
        for c in row {
            den = num_integer::Integer::lcm(&den, c.denom());
        }
    }
    let scaled: Vec<Vec<BigInt>> = coords
        .iter()
        .map(|r| r.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let hnf = linalg::hermite_normal_form(&scaled);
    let lattice_basis: Vec<Vec<BigRational>> = hnf
        .iter()
        .map(|r| {
            let mut full = vec![BigRational::zero(); p];
            for (k, &b) in basis.iter().enumerate() {
                full[b] = BigRational::new(r[k].clone(), den.clone());
            }
            full
        })
        .collect();
    let gram: Vec<Vec<BigInt>> = lattice_basis
        .iter()
        .map(|x| {
            lattice_basis
                .iter()
                .map(|y| {
                    let mut s = BigRational::zero();
                    for &a in &basis {
                        if x[a].is_zero() {
                            continue;
                        }
                        for &b in &basis {
                            if !y[b].is_zero() {
                                s += &x[a] * &y[b] * q(ws.gram[a][b]);
                            }
                        }
                    }
                    s.to_integer()
                })
                .collect()
        })
        .collect();
    Ok(WeightSpaceLattice {
        lambda: lambda.clone(),
        mu: mu.clone(),
        monomials: ws.monos.iter().map(|m| PBWMonomial::from_mono(m)).collect(),
        lattice_basis,
        gram,
    })
}

fn invert_rational(m: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let k = (c..n).find(|&k| !a[k][c].is_zero()).ok_or_else(|| Error::Inconsistent("singular Gram block".into()))?;
        a.swap(c, k);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        let row = a[c].clone();
        for (k, r) in a.iter_mut().enumerate() {
            if k != c && !r[c].is_zero() {
                let f = r[c].clone();
                for (x, y) in r.iter_mut().zip(&row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// dim L(λ)_μ over a field of characteristic p.
pub fn irreducible_dim_mu(rs: &RootSystem, lambda: &Weight, mu: &Weight, p: u64) -> Result<usize> {
    if p != 0 && !crate::is_prime(p) {
        return Err(Error::InvalidCharacteristic(p));
    }
    let delta = delta_of(rs, lambda, mu)?;
    let mut module = WeylModule::for_system(rs, lambda)?;
    module.irreducible_dim_mu(&delta, p)
}

/// |Gram determinant| helper used by tests of lattice invariance.
pub fn abs_det(g: &[Vec<BigInt>]) -> BigInt {
    linalg::det(g).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::LieType;

    fn module(t: LieType, n: usize, lambda: &[i64]) -> WeylModule {
        let rs = RootSystem::new(t, n).unwrap();
        WeylModule::for_system(&rs, &Weight(lambda.to_vec())).unwrap()
    }

    #[test]
    fn sl2_relation() {
        let mut m = module(LieType::A, 2, &[3, 0]);
        let v = m.highest();
        let fv = m.lower(0, &v).unwrap();
        let efv = m.raise(0, &fv).unwrap();
        assert_eq!(efv, vec![(m.straightener().unit(), 3)]);
        assert!(m.raise(1, &v).unwrap().is_empty());
    }

    #[test]
    fn a2_reordering_sign() {
        // Positive roots of A_2 in order: α_1, α_2, α_1+α_2.
        let mut m = module(LieType::A, 2, &[1, 1]);
        let v = m.highest();
        let f1v = m.lower(0, &v).unwrap();
        let y = m.lower(1, &f1v).unwrap();
        let n12 = m.straightener().table().get(&Root(vec![1, 0]), &Root(vec![0, 1])).unwrap();
        let mut expected = vec![(vec![1u8, 1, 0].into_boxed_slice(), 1), (vec![0u8, 0, 1].into_boxed_slice(), n12 as Coeff)];
        expected.sort();
        assert_eq!(y, expected);
    }

    #[test]
    fn divided_square() {
        let mut m = module(LieType::B, 3, &[2, 0, 0]);
        let v = m.highest();
        let once = m.lower(0, &v).unwrap();
        let twice = m.lower(0, &once).unwrap();
        let div = m.lower_divided(0, 2, &v).unwrap();
        assert_eq!(twice.len(), 1);
        assert_eq!(twice[0].1, 2 * div[0].1);
        assert_eq!(twice[0].0, div[0].0);
    }

    #[test]
    fn gram_small_cases() {
        let mut m = module(LieType::A, 2, &[4, 1]);
        let ws = m.weight_space(&[0, 0]).unwrap();
        assert_eq!(ws.gram, vec![vec![1]]);
        let ws = m.weight_space(&[1, 0]).unwrap();
        assert_eq!(ws.gram, vec![vec![4]]);
        let rs = RootSystem::new(LieType::B, 3).unwrap();
        let (monos, g) = contravariant_gram(&rs, &Weight(vec![0, 1, 0]), &Weight(vec![0, 0, 0])).unwrap();
        assert_eq!(monos.len(), g.len());
        let m = module(LieType::B, 3, &[0, 1, 0]);
        drop(m);
        let mut m = module(LieType::B, 3, &[0, 1, 0]);
        assert_eq!(m.weyl_dim_mu(&[1, 2, 2]).unwrap(), 3);
        assert_eq!(m.weight_space(&[1, 2, 2]).unwrap().rank_q(), 3);
    }

    #[test]
    fn gram_is_symmetric() {
        let mut m = module(LieType::B, 3, &[1, 1, 0]);
        let ws = m.weight_space(&[1, 2, 2]).unwrap();
        for i in 0..ws.len() {
            for j in 0..ws.len() {
                assert_eq!(ws.gram[i][j], ws.gram[j][i]);
            }
        }
    }

    #[test]
    fn irreducible_multiplicities() {
        let a2 = RootSystem::new(LieType::A, 2).unwrap();
        let l = Weight(vec![1, 1]);
        assert_eq!(irreducible_dim_mu(&a2, &l, &Weight(vec![0, 0]), 3).unwrap(), 1);
        assert_eq!(irreducible_dim_mu(&a2, &l, &Weight(vec![0, 0]), 0).unwrap(), 2);
        let a3 = RootSystem::new(LieType::A, 3).unwrap();
        let s = Weight(vec![2, 0, 1]);
        let mu = a3.sub_delta(&s, &[1, 1, 1]);
        assert_eq!(irreducible_dim_mu(&a3, &s, &mu, 5).unwrap(), 2);
        assert_eq!(irreducible_dim_mu(&a3, &s, &mu, 0).unwrap(), 3);
        assert!(irreducible_dim_mu(&a3, &s, &mu, 4).is_err());
    }

    #[test]
    fn lattice_examples() {
        let b3 = RootSystem::new(LieType::B, 3).unwrap();
        let l = Weight(vec![2, 0, 0]);
        let lat = lattice_basis(&b3, &l, &b3.sub_delta(&l, &[2, 2, 2])).unwrap();
        assert_eq!(lat.rank(), 3);
        let lat1 = lattice_basis(&b3, &l, &b3.sub_delta(&l, &[1, 0, 0])).unwrap();
        assert_eq!(lat1.rank(), 1);
        let n = lat.monomials.len();
        let rev: Vec<usize> = (0..n).rev().collect();
        let lat2 = lattice_basis_permuted(&b3, &l, &b3.sub_delta(&l, &[2, 2, 2]), &rev).unwrap();
        assert_eq!(lat.gram_determinant().abs(), lat2.gram_determinant().abs());
    }

    #[test]
    fn module_element_round_trip() {
        let b3 = RootSystem::new(LieType::B, 3).unwrap();
        let l = Weight(vec![1, 0, 0]);
        let mut m = WeylModule::for_system(&b3, &l).unwrap();
        let v = ModuleElement::highest(&l);
        let x = apply_lowering(&mut m, &Root(vec![1, 0, 0]), 1, &v).unwrap();
        let back = apply_raising(&mut m, &Root(vec![1, 0, 0]), &x).unwrap();
        assert_eq!(back, v);
        assert!(apply_raising(&mut m, &Root(vec![0, 1, 0]), &v).unwrap().is_zero());
    }
}
