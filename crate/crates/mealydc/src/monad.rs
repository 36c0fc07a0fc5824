//! Monads on endo Mealy machines and everything they induce: the six-law
//! checker, exhaustive enumeration with a budget guard, the derived matched
//! pair, left modules and their equivalence with bicrossed representations,
//! the truncated free monad with its interpretation flags, and monad
//! morphisms in both the tight and the loose direction.
//!
//! All law checkers scan their argument space in a fixed order (units and
//! associativity of the algebraic structure first, compatibility with the
//! machine tables second) so the reported first failure is deterministic and
//! unit-level mutations are reported as unit violations.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::doublecat::all_machines;
use crate::finset::{all_funs, FinFun, FinSet};
use crate::mealy::{check_cell, identity_loose, Cell, MealyMachine};
use crate::monoid::{check_table, words_up_to, BicrossedElement, FinMonoid, MatchedPair, Word};
use crate::verdict::{Error, Result, Verdict};

/// Candidate budget for [`enumerate_monads`]: the pruned table space must
/// stay at or below this many candidates.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

// ===================
// === DoubleMonad ===
// ===================

/// A monad structure on an endo machine `A ⇸ A`: a unit state `e0` and a
/// multiplication table `mu[e][e'] ∈ E`. Construction validates shapes only;
/// the laws are [`check_monad`]'s business.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleMonad {
    machine: MealyMachine,
    e0: usize,
    mu: Vec<Vec<usize>>,
}

impl DoubleMonad {
    pub fn new(machine: MealyMachine, e0: usize, mu: Vec<Vec<usize>>) -> Result<Self> {
        if !machine.is_endo() {
            return Err(Error::Invalid(
                "a monad lives on an endo machine A ⇸ A".into(),
            ));
        }
        let ne = machine.states().size();
        if e0 >= ne {
            return Err(Error::index("e0", format!("value {e0} not below {ne}")));
        }
        check_table(&mu, ne, ne, ne, "mu")?;
        Ok(DoubleMonad { machine, e0, mu })
    }

    /// The singleton-state monad on alphabet `a`; its machine is `i_A`.
    pub fn trivial(a: &FinSet) -> DoubleMonad {
        DoubleMonad {
            machine: identity_loose(a),
            e0: 0,
            mu: vec![vec![0]],
        }
    }

    pub fn machine(&self) -> &MealyMachine {
        &self.machine
    }

    pub fn alphabet(&self) -> &FinSet {
        self.machine.input()
    }

    pub fn states(&self) -> &FinSet {
        self.machine.states()
    }

    pub fn e0(&self) -> usize {
        self.e0
    }

    pub fn mu(&self, e: usize, e2: usize) -> usize {
        self.mu[e][e2]
    }

    pub fn mu_table(&self) -> &Vec<Vec<usize>> {
        &self.mu
    }
}

/// The six monad laws, scanned in the order ac_1, ac_2, ma_1, ma_2, mc_1,
/// mc_2: unit behaviour of the tables, then the monoid laws of `mu`, then
/// compatibility of `mu` with the tables. Monoid well-formedness comes
/// before compatibility so that a broken unit is reported as ma_2 even when
/// it also breaks mc_1.
pub fn check_monad(m: &DoubleMonad) -> Verdict {
    let mm = &m.machine;
    let ne = mm.states().size();
    for a in mm.input().elements() {
        if mm.s(a, m.e0) != a {
            return Verdict::fail("ac_1", json!({ "a": a, "lhs": mm.s(a, m.e0), "rhs": a }));
        }
    }
    for a in mm.input().elements() {
        if mm.d(a, m.e0) != m.e0 {
            return Verdict::fail("ac_2", json!({ "a": a, "lhs": mm.d(a, m.e0), "rhs": m.e0 }));
        }
    }
    for e in 0..ne {
        for e2 in 0..ne {
            for e3 in 0..ne {
                let lhs = m.mu(m.mu(e, e2), e3);
                let rhs = m.mu(e, m.mu(e2, e3));
                if lhs != rhs {
                    return Verdict::fail(
                        "ma_1",
                        json!({ "triple": [e, e2, e3], "lhs": lhs, "rhs": rhs }),
                    );
                }
            }
        }
    }
    for e in 0..ne {
        if m.mu(m.e0, e) != e {
            return Verdict::fail(
                "ma_2",
                json!({ "e": e, "side": "left", "lhs": m.mu(m.e0, e), "rhs": e }),
            );
        }
        if m.mu(e, m.e0) != e {
            return Verdict::fail(
                "ma_2",
                json!({ "e": e, "side": "right", "lhs": m.mu(e, m.e0), "rhs": e }),
            );
        }
    }
    for a in mm.input().elements() {
        for e in 0..ne {
            for e2 in 0..ne {
                let lhs = mm.s(a, m.mu(e, e2));
                let rhs = mm.s(mm.s(a, e), e2);
                if lhs != rhs {
                    return Verdict::fail(
                        "mc_1",
                        json!({ "a": a, "e": e, "e2": e2, "lhs": lhs, "rhs": rhs }),
                    );
                }
            }
        }
    }
    for a in mm.input().elements() {
        for e in 0..ne {
            for e2 in 0..ne {
                let lhs = mm.d(a, m.mu(e, e2));
                let rhs = m.mu(mm.d(a, e), mm.d(mm.s(a, e), e2));
                if lhs != rhs {
                    return Verdict::fail(
                        "mc_2",
                        json!({ "a": a, "e": e, "e2": e2, "lhs": lhs, "rhs": rhs }),
                    );
                }
            }
        }
    }
    Verdict::pass()
}

// ===================
// === Enumeration ===
// ===================

fn pow128(base: usize, exp: u32) -> u128 {
    (base as u128).checked_pow(exp).unwrap_or(u128::MAX)
}

/// Pruned candidate count for `enumerate_monads`: ac_1/ac_2 force the `e0`
/// column of both tables and ma_2 forces the unit row and column of `mu`,
/// so only the remaining entries vary.
pub fn enumeration_estimate(size_a: usize, size_e: usize) -> u128 {
    let nf = size_e.saturating_sub(1);
    let per_e0 = pow128(size_e, (size_a * nf) as u32)
        .saturating_mul(pow128(size_a, (size_a * nf) as u32))
        .saturating_mul(pow128(size_e, (nf * nf) as u32));
    (size_e as u128).saturating_mul(per_e0)
}

fn all_tables(len: usize, radix: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![vec![]];
    }
    if radix == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; len];
    loop {
        out.push(digits.clone());
        let mut i = len;
        loop {
            i -= 1;
            digits[i] += 1;
            if digits[i] < radix {
                break;
            }
            digits[i] = 0;
            if i == 0 {
                return out;
            }
        }
    }
}

/// Exhaustively lists every monad structure on the given sizes, in canonical
/// lexicographic order of the flattened `(d, s, e0, mu)` tables. The free
/// entries are enumerated per unit candidate with the forced rows filled in,
/// and the merged list is sorted back into the canonical order.
pub fn enumerate_monads(size_a: usize, size_e: usize) -> Result<Vec<DoubleMonad>> {
    if size_a == 0 || size_e == 0 {
        return Err(Error::Invalid(
            "enumeration needs sizes of at least 1".into(),
        ));
    }
    let estimate = enumeration_estimate(size_a, size_e);
    if estimate > ENUMERATION_BUDGET {
        return Err(Error::Budget {
            estimate,
            limit: ENUMERATION_BUDGET,
        });
    }
    let a_set = FinSet::new(size_a);
    let e_set = FinSet::new(size_e);
    let nf = size_e - 1;
    let mut keyed: Vec<(Vec<usize>, DoubleMonad)> = Vec::new();
    for e0 in 0..size_e {
        let free: Vec<usize> = (0..size_e).filter(|&e| e != e0).collect();
        for dfree in all_tables(size_a * nf, size_e) {
            let mut d = vec![vec![0usize; size_e]; size_a];
            for a in 0..size_a {
                d[a][e0] = e0;
                for (i, &e) in free.iter().enumerate() {
                    d[a][e] = dfree[a * nf + i];
                }
            }
            for sfree in all_tables(size_a * nf, size_a) {
                let mut s = vec![vec![0usize; size_e]; size_a];
                for a in 0..size_a {
                    s[a][e0] = a;
                    for (i, &e) in free.iter().enumerate() {
                        s[a][e] = sfree[a * nf + i];
                    }
                }
                let machine = MealyMachine::new(
                    a_set.clone(),
                    a_set.clone(),
                    e_set.clone(),
                    d.clone(),
                    s.clone(),
                )
                .expect("enumerated tables are well-indexed");
                for mufree in all_tables(nf * nf, size_e) {
                    let mut mu: Vec<Vec<usize>> = (0..size_e)
                        .map(|e| {
                            let mut row = vec![0usize; size_e];
                            row[e0] = e;
                            row
                        })
                        .collect();
                    mu[e0] = (0..size_e).collect();
                    for (i, &e) in free.iter().enumerate() {
                        for (j, &e2) in free.iter().enumerate() {
                            mu[e][e2] = mufree[i * nf + j];
                        }
                    }
                    let cand = DoubleMonad {
                        machine: machine.clone(),
                        e0,
                        mu,
                    };
                    if check_monad(&cand).pass {
                        let mut key: Vec<usize> = Vec::new();
                        key.extend(cand.machine.d_table().iter().flatten());
                        key.extend(cand.machine.s_table().iter().flatten());
                        key.push(e0);
                        key.extend(cand.mu.iter().flatten());
                        keyed.push((key, cand));
                    }
                }
            }
        }
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, m)| m).collect())
}

/// Repackages a verified monad as its matched pair: the state monoid
/// `(E, e0, mu)` and the alphabet acting through the machine tables.
pub fn derive_matched_pair(m: &DoubleMonad) -> Result<MatchedPair> {
    let v = check_monad(m);
    if !v.pass {
        return Err(Error::Invalid(format!(
            "not a monad: fails {}",
            v.law.as_deref().unwrap_or("?")
        )));
    }
    let monoid = FinMonoid::new(m.states().clone(), m.e0, m.mu.clone())?;
    MatchedPair::new(
        monoid,
        m.alphabet().clone(),
        m.machine.d_table().clone(),
        m.machine.s_table().clone(),
    )
}

// ==================
// === Free monad ===
// ==================

/// How `d⁺` recurses: threaded rewrites the letter as it walks the word
/// (`d⁺(a, e::es) = d(a,e) :: d⁺(s(a,e), es)`), pointwise keeps the original
/// letter throughout (`d(a,e) :: d⁺(a, es)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DThreading {
    Threaded,
    Pointwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuOrder {
    Concat,
    ReversedConcat,
}

/// Interpretation flags for the free monad's extension recursions. The
/// source recursions are ambiguous (see [`free_monad_discrepancy_report`]);
/// the default is the one combination the law search finds consistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeMonadConfig {
    /// Maximum state-word length kept in the truncation.
    pub bound: usize,
    /// Reverse the tail at each step of the `s⁺` recursion.
    pub s_reverse: bool,
    pub d_threading: DThreading,
    pub mu_order: MuOrder,
}

impl Default for FreeMonadConfig {
    fn default() -> Self {
        FreeMonadConfig {
            bound: 3,
            s_reverse: false,
            d_threading: DThreading::Threaded,
            mu_order: MuOrder::Concat,
        }
    }
}

impl FreeMonadConfig {
    pub fn with_bound(bound: usize) -> Self {
        FreeMonadConfig {
            bound,
            ..Default::default()
        }
    }

    /// The recursions exactly as written in the source: reversed `s⁺` tail,
    /// pointwise `d⁺`.
    pub fn literal(bound: usize) -> Self {
        FreeMonadConfig {
            bound,
            s_reverse: true,
            d_threading: DThreading::Pointwise,
            mu_order: MuOrder::Concat,
        }
    }
}

/// The truncated free monad on an endo machine: states are state-words of
/// length at most `bound` (in length-then-lex order), the unit is the empty
/// word, and the multiplication is concatenation wherever the result stays
/// within the bound (`None` past it).
#[derive(Debug, Clone, Serialize)]
pub struct FreeMonad {
    /// The word machine `A ⇸ A` whose states index `words`.
    pub machine: MealyMachine,
    pub words: Vec<Word>,
    /// Index of the empty word.
    pub e0: usize,
    /// Partial multiplication: concatenation, `None` when it leaves the
    /// truncation.
    pub mu: Vec<Vec<Option<usize>>>,
    /// The cell `ν : F → M(F)` over identity tights, `e ↦ [e]`.
    pub nu: Cell,
    pub config: FreeMonadConfig,
}

fn splus(f: &MealyMachine, s_reverse: bool, a: usize, es: &[usize]) -> usize {
    match es.split_first() {
        None => a,
        Some((&e, rest)) => {
            let next = f.s(a, e);
            if s_reverse {
                let rev: Vec<usize> = rest.iter().rev().copied().collect();
                splus(f, s_reverse, next, &rev)
            } else {
                splus(f, s_reverse, next, rest)
            }
        }
    }
}

fn dplus(f: &MealyMachine, threading: DThreading, a: usize, es: &[usize]) -> Word {
    let mut out = Vec::with_capacity(es.len());
    match threading {
        DThreading::Threaded => {
            let mut cur = a;
            for &e in es {
                out.push(f.d(cur, e));
                cur = f.s(cur, e);
            }
        }
        DThreading::Pointwise => {
            for &e in es {
                out.push(f.d(a, e));
            }
        }
    }
    out
}

pub fn free_monad(f: &MealyMachine, config: FreeMonadConfig) -> Result<FreeMonad> {
    if !f.is_endo() {
        return Err(Error::Invalid(
            "the free monad is built on an endo machine".into(),
        ));
    }
    if config.bound < 1 {
        return Err(Error::Invalid("free monad bound must be at least 1".into()));
    }
    let words = words_up_to(f.states().size(), config.bound);
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let na = f.input().size();
    let mut d = vec![vec![0usize; words.len()]; na];
    let mut s = vec![vec![0usize; words.len()]; na];
    for a in 0..na {
        for (w, word) in words.iter().enumerate() {
            d[a][w] = index[&dplus(f, config.d_threading, a, word)];
            s[a][w] = splus(f, config.s_reverse, a, word);
        }
    }
    let machine = MealyMachine::new(
        f.input().clone(),
        f.input().clone(),
        FinSet::new(words.len()),
        d,
        s,
    )
    .expect("word tables are well-indexed");
    let mu: Vec<Vec<Option<usize>>> = words
        .iter()
        .map(|u| {
            words
                .iter()
                .map(|v| {
                    let mut w = match config.mu_order {
                        MuOrder::Concat => u.clone(),
                        MuOrder::ReversedConcat => v.clone(),
                    };
                    w.extend(match config.mu_order {
                        MuOrder::Concat => v.iter(),
                        MuOrder::ReversedConcat => u.iter(),
                    });
                    index.get(&w).copied()
                })
                .collect()
        })
        .collect();
    let e0 = index[&vec![]];
    let nu_alpha = FinFun::from_fn(f.states().clone(), machine.states().clone(), |e| {
        index[&vec![e]]
    })
    .expect("single-letter words are states");
    let nu = Cell::new(
        f.clone(),
        machine.clone(),
        FinFun::identity(f.input()),
        FinFun::identity(f.input()),
        nu_alpha,
    )
    .expect("nu boundaries match");
    assert!(check_cell(&nu).pass, "nu must commute under every config");
    Ok(FreeMonad {
        machine,
        words,
        e0,
        mu,
        nu,
        config,
    })
}

/// The monad law suite on the truncation, skipping any argument whose
/// multiplication leaves the bound. Same scan order as [`check_monad`];
/// witnesses spell words out rather than reporting state indices.
pub fn check_free_monad(fm: &FreeMonad) -> Verdict {
    let m = &fm.machine;
    let n = fm.words.len();
    let word = |i: usize| fm.words[i].clone();
    for a in m.input().elements() {
        if m.s(a, fm.e0) != a {
            return Verdict::fail("ac_1", json!({ "a": a, "lhs": m.s(a, fm.e0), "rhs": a }));
        }
    }
    for a in m.input().elements() {
        if m.d(a, fm.e0) != fm.e0 {
            return Verdict::fail(
                "ac_2",
                json!({ "a": a, "lhs": word(m.d(a, fm.e0)), "rhs": Vec::<usize>::new() }),
            );
        }
    }
    for u in 0..n {
        for v in 0..n {
            let Some(uv) = fm.mu[u][v] else { continue };
            for t in 0..n {
                let Some(vt) = fm.mu[v][t] else { continue };
                if fm.mu[uv][t] != fm.mu[u][vt] {
                    return Verdict::fail(
                        "ma_1",
                        json!({ "u": word(u), "v": word(v), "t": word(t) }),
                    );
                }
            }
        }
    }
    for u in 0..n {
        if fm.mu[fm.e0][u] != Some(u) || fm.mu[u][fm.e0] != Some(u) {
            return Verdict::fail("ma_2", json!({ "u": word(u) }));
        }
    }
    for a in m.input().elements() {
        for u in 0..n {
            for v in 0..n {
                let Some(uv) = fm.mu[u][v] else { continue };
                let lhs = m.s(a, uv);
                let rhs = m.s(m.s(a, u), v);
                if lhs != rhs {
                    return Verdict::fail(
                        "mc_1",
                        json!({ "a": a, "u": word(u), "v": word(v), "lhs": lhs, "rhs": rhs }),
                    );
                }
            }
        }
    }
    for a in m.input().elements() {
        for u in 0..n {
            for v in 0..n {
                let Some(uv) = fm.mu[u][v] else { continue };
                let lhs = m.d(a, uv);
                let rhs = fm.mu[m.d(a, u)][m.d(m.s(a, u), v)];
                if rhs != Some(lhs) {
                    return Verdict::fail(
                        "mc_2",
                        json!({
                            "a": a, "u": word(u), "v": word(v),
                            "lhs": word(lhs),
                            "rhs": rhs.map(word),
                        }),
                    );
                }
            }
        }
    }
    Verdict::pass()
}

/// Sweeps every endo machine with at most two letters and two states,
/// running the truncated law suite under all four interpretations of the
/// extension recursions, and reports the failure counts with the first
/// failing machine and witness for each. The default interpretation
/// (left-fold `s⁺`, threaded `d⁺`) is the only one that passes everywhere;
/// the literal recursions (reversed tail, pointwise `d⁺`) fail from word
/// length 3 on.
pub fn free_monad_discrepancy_report(bound: usize) -> Value {
    let combos = [
        (false, DThreading::Threaded),
        (false, DThreading::Pointwise),
        (true, DThreading::Threaded),
        (true, DThreading::Pointwise),
    ];
    let mut swept = 0usize;
    let mut configs = Vec::new();
    for (s_reverse, d_threading) in combos {
        let config = FreeMonadConfig {
            bound,
            s_reverse,
            d_threading,
            mu_order: MuOrder::Concat,
        };
        let mut failing = 0usize;
        let mut first: Option<Value> = None;
        swept = 0;
        for n_a in 1..=2usize {
            for n_e in 1..=2usize {
                let a_set = FinSet::new(n_a);
                for m in all_machines(&a_set, &a_set, &FinSet::new(n_e)) {
                    swept += 1;
                    let fm = free_monad(&m, config).expect("endo by construction");
                    let v = check_free_monad(&fm);
                    if !v.pass {
                        failing += 1;
                        if first.is_none() {
                            first = Some(json!({
                                "machine": {
                                    "kind": "machine",
                                    "input": { "size": n_a },
                                    "output": { "size": n_a },
                                    "states": { "size": n_e },
                                    "d": m.d_table(),
                                    "s": m.s_table(),
                                },
                                "axiom": v.law,
                                "witness": v.witness,
                            }));
                        }
                    }
                }
            }
        }
        configs.push(json!({
            "s_reverse": s_reverse,
            "d_threading": d_threading,
            "mu_order": MuOrder::Concat,
            "failing_machines": failing,
            "first_failure": first,
        }));
    }
    json!({
        "kind": "free-monad-discrepancy",
        "bound": bound,
        "machines_swept": swept,
        "configs": configs,
    })
}

/// Extends a cell `γ : F → N.machine` (identity tights) to the canonical
/// state map `γ* : E^{≤L} → E_N` with `γ*(ε) = e0` and
/// `γ*(e::es) = μ_N(γe, γ*(es))`. Returns the free monad alongside.
/// `γ*∘ν = γ` holds by construction and is asserted.
pub fn free_monad_extend(
    f: &MealyMachine,
    gamma: &Cell,
    n: &DoubleMonad,
    config: FreeMonadConfig,
) -> Result<(FreeMonad, FinFun)> {
    if gamma.top != *f
        || gamma.bottom != *n.machine()
        || !gamma.f.is_identity()
        || !gamma.g.is_identity()
    {
        return Err(Error::Boundary(
            "gamma must run from the machine into the monad's machine over identity tights".into(),
        ));
    }
    if !check_cell(gamma).pass {
        return Err(Error::Invalid("gamma does not commute".into()));
    }
    let fm = free_monad(f, config)?;
    let table: Vec<usize> = fm
        .words
        .iter()
        .map(|w| {
            w.iter()
                .rev()
                .fold(n.e0(), |acc, &e| n.mu(gamma.alpha.apply(e), acc))
        })
        .collect();
    let gamma_star = FinFun::new(fm.machine.states().clone(), n.states().clone(), table)
        .expect("extension lands in E_N");
    for e in f.states().elements() {
        assert_eq!(
            gamma_star.apply(fm.nu.alpha.apply(e)),
            gamma.alpha.apply(e),
            "gamma* must restrict to gamma on single letters"
        );
    }
    Ok((fm, gamma_star))
}

/// Counts all state maps `E^{≤L} → E_N` that preserve the unit, restrict to
/// `gamma` on single letters, and are multiplicative wherever concatenation
/// stays within the bound. The canonical extension is the unique such map;
/// this enumerates `|E_N|^|words|` candidates, so keep the sizes small.
pub fn count_free_extensions(fm: &FreeMonad, gamma_alpha: &FinFun, n: &DoubleMonad) -> usize {
    all_funs(fm.machine.states(), n.states())
        .into_iter()
        .filter(|cand| {
            if cand.apply(fm.e0) != n.e0() {
                return false;
            }
            for e in gamma_alpha.dom().elements() {
                if cand.apply(fm.nu.alpha.apply(e)) != gamma_alpha.apply(e) {
                    return false;
                }
            }
            for u in 0..fm.words.len() {
                for v in 0..fm.words.len() {
                    if let Some(uv) = fm.mu[u][v] {
                        if cand.apply(uv) != n.mu(cand.apply(u), cand.apply(v)) {
                            return false;
                        }
                    }
                }
            }
            true
        })
        .count()
}

// ===============
// === Modules ===
// ===============

/// A left module over a monad: a machine `P : A ⇸ X` (tables `δ`, `σ`) with
/// an action table `ξ : E × P → P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleStructure {
    pub monad: DoubleMonad,
    pub machine: MealyMachine,
    pub xi: Vec<Vec<usize>>,
}

impl ModuleStructure {
    pub fn new(monad: DoubleMonad, machine: MealyMachine, xi: Vec<Vec<usize>>) -> Result<Self> {
        if machine.input() != monad.alphabet() {
            return Err(Error::Boundary(
                "module machine must share the monad's alphabet".into(),
            ));
        }
        let np = machine.states().size();
        check_table(&xi, monad.states().size(), np, np, "xi")?;
        Ok(ModuleStructure { monad, machine, xi })
    }
}

fn delta_plus(p: &MealyMachine, w: &[usize], x: usize) -> usize {
    w.iter().rev().fold(x, |acc, &a| p.d(a, acc))
}

fn sigma_plus(p: &MealyMachine, w: &[usize], x: usize) -> usize {
    // only called with nonempty words
    p.s(w[0], delta_plus(p, &w[1..], x))
}

/// The four module laws, unit and associativity of `ξ` first (ax_3, ax_4),
/// then compatibility with the machine tables (ax_1, ax_2), then spot
/// checks of the induced word forms up to length 3 (implied by the
/// single-letter laws; checked anyway as a guard on the recursions).
pub fn check_module(m: &ModuleStructure) -> Verdict {
    let monad = &m.monad;
    let p = &m.machine;
    let np = p.states().size();
    let ne = monad.states().size();
    for x in 0..np {
        if m.xi[monad.e0()][x] != x {
            return Verdict::fail(
                "ax_3",
                json!({ "p": x, "lhs": m.xi[monad.e0()][x], "rhs": x }),
            );
        }
    }
    for e in 0..ne {
        for e2 in 0..ne {
            for x in 0..np {
                let lhs = m.xi[monad.mu(e, e2)][x];
                let rhs = m.xi[e][m.xi[e2][x]];
                if lhs != rhs {
                    return Verdict::fail(
                        "ax_4",
                        json!({ "e": e, "e2": e2, "p": x, "lhs": lhs, "rhs": rhs }),
                    );
                }
            }
        }
    }
    for a in monad.alphabet().elements() {
        for e in 0..ne {
            for x in 0..np {
                let lhs = p.s(a, m.xi[e][x]);
                let rhs = p.s(monad.machine().s(a, e), x);
                if lhs != rhs {
                    return Verdict::fail(
                        "ax_1",
                        json!({ "a": a, "e": e, "p": x, "lhs": lhs, "rhs": rhs }),
                    );
                }
            }
        }
    }
    for a in monad.alphabet().elements() {
        for e in 0..ne {
            for x in 0..np {
                let lhs = p.d(a, m.xi[e][x]);
                let rhs = m.xi[monad.machine().d(a, e)][p.d(monad.machine().s(a, e), x)];
                if lhs != rhs {
                    return Verdict::fail(
                        "ax_2",
                        json!({ "a": a, "e": e, "p": x, "lhs": lhs, "rhs": rhs }),
                    );
                }
            }
        }
    }
    // word forms: σ⁺(as, ξ(e,p)) = σ⁺(as ⊙⁺ e, p) and
    // δ⁺(as, ξ(e,p)) = ξ(as ⊗⁺ e, δ⁺(as ⊙⁺ e, p)), single letters excluded
    for w in words_up_to(monad.alphabet().size(), 3) {
        if w.len() < 2 {
            continue;
        }
        for e in 0..ne {
            for x in 0..np {
                let acted = monad.machine().act_word(&w, e);
                let tensored = monad.machine().tensor_word(&w, e);
                let lhs1 = sigma_plus(p, &w, m.xi[e][x]);
                let rhs1 = sigma_plus(p, &acted, x);
                if lhs1 != rhs1 {
                    return Verdict::fail(
                        "ax_1_word",
                        json!({ "word": w, "e": e, "p": x, "lhs": lhs1, "rhs": rhs1 }),
                    );
                }
                let lhs2 = delta_plus(p, &w, m.xi[e][x]);
                let rhs2 = m.xi[tensored][delta_plus(p, &acted, x)];
                if lhs2 != rhs2 {
                    return Verdict::fail(
                        "ax_2_word",
                        json!({ "word": w, "e": e, "p": x, "lhs": lhs2, "rhs": rhs2 }),
                    );
                }
            }
        }
    }
    Verdict::pass()
}

// =======================
// === Representations ===
// =======================

/// A pair of actions on a finite set `P`: `alpha[e][p]` for the state
/// monoid, `beta[a][p]` for single letters of the free monoid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BicrossedRepresentation {
    pub set: FinSet,
    pub alpha: Vec<Vec<usize>>,
    pub beta: Vec<Vec<usize>>,
}

impl BicrossedRepresentation {
    pub fn new(set: FinSet, alpha: Vec<Vec<usize>>, beta: Vec<Vec<usize>>) -> Result<Self> {
        let np = set.size();
        for (name, t) in [("alpha", &alpha), ("beta", &beta)] {
            for (r, row) in t.iter().enumerate() {
                if row.len() != np {
                    return Err(Error::index(
                        format!("{name}[{r}]"),
                        format!("{} columns, expected {}", row.len(), np),
                    ));
                }
                if let Some((c, &v)) = row.iter().enumerate().find(|(_, &v)| v >= np) {
                    return Err(Error::index(
                        format!("{name}[{r}][{c}]"),
                        format!("value {v} not below {np}"),
                    ));
                }
            }
        }
        Ok(BicrossedRepresentation { set, alpha, beta })
    }
}

fn beta_plus(beta: &[Vec<usize>], w: &[usize], x: usize) -> usize {
    match w.split_first() {
        None => x,
        Some((&a, rest)) => beta[a][beta_plus(beta, rest, x)],
    }
}

/// α must be an action of the state monoid; the letterwise β then matches α
/// through the two word extensions:
///
/// ```text
/// β⁺(g, α(h, x)) = α(g ⊗⁺ h, β⁺(g ⊙⁺ h, x))    for |g| ≤ bound
/// ```
pub fn check_matching_relation(
    m: &DoubleMonad,
    r: &BicrossedRepresentation,
    bound: usize,
) -> Result<Verdict> {
    let ne = m.states().size();
    let na = m.alphabet().size();
    let np = r.set.size();
    if r.alpha.len() != ne {
        return Err(Error::index(
            "alpha",
            format!("{} rows, expected {}", r.alpha.len(), ne),
        ));
    }
    if r.beta.len() != na {
        return Err(Error::index(
            "beta",
            format!("{} rows, expected {}", r.beta.len(), na),
        ));
    }
    for x in 0..np {
        if r.alpha[m.e0()][x] != x {
            return Ok(Verdict::fail(
                "alpha_unit",
                json!({ "x": x, "got": r.alpha[m.e0()][x] }),
            ));
        }
    }
    for e in 0..ne {
        for e2 in 0..ne {
            for x in 0..np {
                let joined = r.alpha[m.mu(e, e2)][x];
                let stepped = r.alpha[e][r.alpha[e2][x]];
                if joined != stepped {
                    return Ok(Verdict::fail(
                        "alpha_assoc",
                        json!({ "pair": [e, e2], "x": x, "joined": joined, "stepped": stepped }),
                    ));
                }
            }
        }
    }
    for g in words_up_to(na, bound) {
        for h in 0..ne {
            for x in 0..np {
                let lhs = beta_plus(&r.beta, &g, r.alpha[h][x]);
                let tensored = m.machine().tensor_word(&g, h);
                let acted = m.machine().act_word(&g, h);
                let rhs = r.alpha[tensored][beta_plus(&r.beta, &acted, x)];
                if lhs != rhs {
                    return Ok(Verdict::fail(
                        "matching",
                        json!({ "g": g, "h": h, "x": x, "lhs": lhs, "rhs": rhs }),
                    ));
                }
            }
        }
    }
    Ok(Verdict::pass())
}

/// Forgets a verified module to its representation: `α := ξ`, `β := δ` on
/// single letters. The result passes the matching relation (asserted).
pub fn module_to_representation(m: &ModuleStructure) -> Result<BicrossedRepresentation> {
    let v = check_module(m);
    if !v.pass {
        return Err(Error::Invalid(format!(
            "module laws fail at {}",
            v.law.as_deref().unwrap_or("?")
        )));
    }
    let rep = BicrossedRepresentation {
        set: m.machine.states().clone(),
        alpha: m.xi.clone(),
        beta: m.machine.d_table().clone(),
    };
    let check = check_matching_relation(&m.monad, &rep, 3).expect("shapes match by construction");
    assert!(
        check.pass,
        "a module's representation must match: {:?}",
        check
    );
    Ok(rep)
}

/// Rebuilds the module from a representation plus the output data the
/// representation does not carry: `σ : A × P → X`. The matching relation
/// and the balance of `σ` (`σ(a, α(e,p)) = σ(s(a,e), p)`, the module's
/// ax_1) are violations when they fail, not input errors; both are exactly
/// what separates representation data from module data.
pub fn representation_to_module(
    monad: &DoubleMonad,
    r: &BicrossedRepresentation,
    sigma: &[Vec<usize>],
    output: &FinSet,
    bound: usize,
) -> Result<std::result::Result<ModuleStructure, Verdict>> {
    let na = monad.alphabet().size();
    let np = r.set.size();
    check_table(sigma, na, np, output.size(), "sigma")?;
    let matching = check_matching_relation(monad, r, bound)?;
    if !matching.pass {
        return Ok(Err(matching));
    }
    for a in 0..na {
        for e in 0..monad.states().size() {
            for x in 0..np {
                let lhs = sigma[a][r.alpha[e][x]];
                let rhs = sigma[monad.machine().s(a, e)][x];
                if lhs != rhs {
                    return Ok(Err(Verdict::fail(
                        "sigma_balance",
                        json!({ "a": a, "e": e, "p": x, "lhs": lhs, "rhs": rhs }),
                    )));
                }
            }
        }
    }
    let machine = MealyMachine::new(
        monad.alphabet().clone(),
        output.clone(),
        r.set.clone(),
        r.beta.clone(),
        sigma.to_vec(),
    )?;
    let module = ModuleStructure {
        monad: monad.clone(),
        machine,
        xi: r.alpha.clone(),
    };
    let v = check_module(&module);
    assert!(
        v.pass,
        "matching + balance must rebuild a lawful module: {:?}",
        v
    );
    Ok(Ok(module))
}

// ========================
// === Tight morphisms ====
// ========================

/// A tight monad morphism: `f` renames the alphabet, `alpha` the states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightMonadMorphism {
    pub f: FinFun,
    pub alpha: FinFun,
}

/// Cell condition over `(f, f)` plus unit and multiplication compatibility
/// of `alpha`, scanned in that order.
pub fn check_tight_monad_morphism(
    src: &DoubleMonad,
    dst: &DoubleMonad,
    t: &TightMonadMorphism,
) -> Result<Verdict> {
    if t.f.dom() != src.alphabet() || t.f.cod() != dst.alphabet() {
        return Err(Error::Boundary(
            "f must map the source alphabet to the target alphabet".into(),
        ));
    }
    if t.alpha.dom() != src.states() || t.alpha.cod() != dst.states() {
        return Err(Error::Boundary(
            "alpha must map source states to target states".into(),
        ));
    }
    let (sm, dm) = (src.machine(), dst.machine());
    for a in src.alphabet().elements() {
        for e in src.states().elements() {
            let lhs_d = dm.d(t.f.apply(a), t.alpha.apply(e));
            let rhs_d = t.alpha.apply(sm.d(a, e));
            if lhs_d != rhs_d {
                return Ok(Verdict::fail(
                    "cell",
                    json!({ "side": "d", "a": a, "e": e, "lhs": lhs_d, "rhs": rhs_d }),
                ));
            }
            let lhs_s = dm.s(t.f.apply(a), t.alpha.apply(e));
            let rhs_s = t.f.apply(sm.s(a, e));
            if lhs_s != rhs_s {
                return Ok(Verdict::fail(
                    "cell",
                    json!({ "side": "s", "a": a, "e": e, "lhs": lhs_s, "rhs": rhs_s }),
                ));
            }
        }
    }
    if t.alpha.apply(src.e0()) != dst.e0() {
        return Ok(Verdict::fail(
            "eta_compat",
            json!({ "lhs": t.alpha.apply(src.e0()), "rhs": dst.e0() }),
        ));
    }
    for e in src.states().elements() {
        for e2 in src.states().elements() {
            let lhs = t.alpha.apply(src.mu(e, e2));
            let rhs = dst.mu(t.alpha.apply(e), t.alpha.apply(e2));
            if lhs != rhs {
                return Ok(Verdict::fail(
                    "mu_compat",
                    json!({ "e": e, "e2": e2, "lhs": lhs, "rhs": rhs }),
                ));
            }
        }
    }
    Ok(Verdict::pass())
}

/// The word-bounded homomorphism `E ⋈ A* → E′ ⋈ B*` induced by a tight
/// monad morphism: `(e, w) ↦ (α e, map f w)`, listed for all `|w| ≤ bound`,
/// plus the verdict of checking it unital and multiplicative on every pair
/// whose product stays within the bound.
pub fn induced_bicrossed_hom(
    src: &DoubleMonad,
    dst: &DoubleMonad,
    t: &TightMonadMorphism,
    bound: usize,
) -> Result<(Vec<(BicrossedElement, BicrossedElement)>, Verdict)> {
    let v = check_tight_monad_morphism(src, dst, t)?;
    if !v.pass {
        return Err(Error::Invalid(format!(
            "not a monad morphism: fails {}",
            v.law.as_deref().unwrap_or("?")
        )));
    }
    let src_pair = derive_matched_pair(src)?;
    let dst_pair = derive_matched_pair(dst)?;
    let hom = |x: &BicrossedElement| {
        BicrossedElement::new(
            t.alpha.apply(x.e),
            x.w.iter().map(|&a| t.f.apply(a)).collect(),
        )
    };
    let mut pairs = Vec::new();
    for e in src.states().elements() {
        for w in words_up_to(src.alphabet().size(), bound) {
            let x = BicrossedElement::new(e, w);
            let y = hom(&x);
            pairs.push((x, y));
        }
    }
    let unit = BicrossedElement::new(src.e0(), vec![]);
    if hom(&unit) != BicrossedElement::new(dst.e0(), vec![]) {
        return Ok((
            pairs,
            Verdict::fail("hom_unit", json!({ "got": hom(&unit) })),
        ));
    }
    for (x, hx) in &pairs {
        for (y, hy) in &pairs {
            if x.w.len() + y.w.len() > bound {
                continue;
            }
            let lhs = hom(&crate::monoid::bicrossed_multiply(&src_pair, x, y)?);
            let rhs = crate::monoid::bicrossed_multiply(&dst_pair, hx, hy)?;
            if lhs != rhs {
                return Ok((
                    pairs.clone(),
                    Verdict::fail(
                        "hom_mult",
                        json!({ "x": x, "y": y, "lhs": lhs, "rhs": rhs }),
                    ),
                ));
            }
        }
    }
    Ok((pairs, Verdict::pass()))
}

// ========================
// === Loose monad maps ===
// ========================

/// A loose monad map from `M` (on `A`, states `E`) to `N` (on `B`, states
/// `E′`): a machine `U : A ⇸ B` with states `X`, a left `E`-action `δ` on
/// `X`, and an output map `σ : E × X → E′`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LooseMonadMap {
    pub machine: MealyMachine,
    pub delta: Vec<Vec<usize>>,
    pub sigma: Vec<Vec<usize>>,
}

/// The loose monad map laws, units first (dl_2), then compatibility with
/// the multiplications (dl_3.1 for δ, dl_3.2 — fugality — for σ), then the
/// three cell equations (dl_1). `fugality_only` restricts to dl_3.2.
pub fn check_loose_monad_map(
    m: &DoubleMonad,
    n: &DoubleMonad,
    u: &LooseMonadMap,
    fugality_only: bool,
) -> Result<Verdict> {
    if u.machine.input() != m.alphabet() {
        return Err(Error::Boundary("map machine must read M's alphabet".into()));
    }
    if u.machine.output() != n.alphabet() {
        return Err(Error::Boundary(
            "map machine must write N's alphabet".into(),
        ));
    }
    let ne = m.states().size();
    let nx = u.machine.states().size();
    check_table(&u.delta, ne, nx, nx, "delta")?;
    check_table(&u.sigma, ne, nx, n.states().size(), "sigma")?;
    let (mm, nm, um) = (m.machine(), n.machine(), &u.machine);
    let fugality = |report: bool| -> Verdict {
        if !report {
            return Verdict::pass();
        }
        for e in 0..ne {
            for e2 in 0..ne {
                for x in 0..nx {
                    let lhs = u.sigma[m.mu(e, e2)][x];
                    let rhs = n.mu(u.sigma[e][u.delta[e2][x]], u.sigma[e2][x]);
                    if lhs != rhs {
                        return Verdict::fail(
                            "dl_3.2",
                            json!({ "e": e, "e2": e2, "x": x, "lhs": lhs, "rhs": rhs }),
                        );
                    }
                }
            }
        }
        Verdict::pass()
    };
    if fugality_only {
        return Ok(fugality(true));
    }
    for x in 0..nx {
        if u.delta[m.e0()][x] != x {
            return Ok(Verdict::fail(
                "dl_2",
                json!({ "eq": "delta", "x": x, "lhs": u.delta[m.e0()][x], "rhs": x }),
            ));
        }
        if u.sigma[m.e0()][x] != n.e0() {
            return Ok(Verdict::fail(
                "dl_2",
                json!({ "eq": "sigma", "x": x, "lhs": u.sigma[m.e0()][x], "rhs": n.e0() }),
            ));
        }
    }
    for e in 0..ne {
        for e2 in 0..ne {
            for x in 0..nx {
                let lhs = u.delta[m.mu(e, e2)][x];
                let rhs = u.delta[e][u.delta[e2][x]];
                if lhs != rhs {
                    return Ok(Verdict::fail(
                        "dl_3.1",
                        json!({ "e": e, "e2": e2, "x": x, "lhs": lhs, "rhs": rhs }),
                    ));
                }
            }
        }
    }
    let fuga = fugality(true);
    if !fuga.pass {
        return Ok(fuga);
    }
    for a in m.alphabet().elements() {
        for e in 0..ne {
            for x in 0..nx {
                // 1: s_N(s_U(a, δ(e,x)), σ(e,x)) = s_U(s_M(a,e), x)
                let lhs1 = nm.s(um.s(a, u.delta[e][x]), u.sigma[e][x]);
                let rhs1 = um.s(mm.s(a, e), x);
                if lhs1 != rhs1 {
                    return Ok(Verdict::fail(
                        "dl_1",
                        json!({ "eq": 1, "a": a, "e": e, "x": x, "lhs": lhs1, "rhs": rhs1 }),
                    ));
                }
                // 2: δ(d_M(a,e), d_U(s_M(a,e), x)) = d_U(a, δ(e,x))
                let lhs2 = u.delta[mm.d(a, e)][um.d(mm.s(a, e), x)];
                let rhs2 = um.d(a, u.delta[e][x]);
                if lhs2 != rhs2 {
                    return Ok(Verdict::fail(
                        "dl_1",
                        json!({ "eq": 2, "a": a, "e": e, "x": x, "lhs": lhs2, "rhs": rhs2 }),
                    ));
                }
                // 3: σ(d_M(a,e), d_U(s_M(a,e), x)) = d_N(s_U(a, δ(e,x)), σ(e,x))
                let lhs3 = u.sigma[mm.d(a, e)][um.d(mm.s(a, e), x)];
                let rhs3 = nm.d(um.s(a, u.delta[e][x]), u.sigma[e][x]);
                if lhs3 != rhs3 {
                    return Ok(Verdict::fail(
                        "dl_1",
                        json!({ "eq": 3, "a": a, "e": e, "x": x, "lhs": lhs3, "rhs": rhs3 }),
                    ));
                }
            }
        }
    }
    Ok(Verdict::pass())
}
