//! Mealy machines as loose morphisms, cells, the three compositions,
//! identity loose morphisms, coherence cells, run semantics, and the
//! canonical word extensions of the two tables.
//!
//! A machine `A ⇸ B` is a state set `E` with tables `d : A×E → E` and
//! `s : A×E → B`. A cell between a top machine `A ⇸ B` and a bottom machine
//! `X ⇸ Y` over tight maps `f : A → X`, `g : B → Y` is a state map
//! `α : E_top → E_bot` making both tables commute:
//!
//! ```text
//! d_bot(f a, α e) = α (d_top(a, e))        s_bot(f a, α e) = g (s_top(a, e))
//! ```
//!
//! Loose composition is the cascade product ("first machine feeds the
//! second"): `loose_compose(m1, m2)` runs `m1` and pipes its output letters
//! into `m2`, on the lexicographically paired state set `E1 × E2`. The
//! associator and unitors are concrete state bijections, constructed by
//! explicit re-indexing and verified as cells, never assumed.
//!
//! Two word conventions coexist, both kept exactly as sourced:
//! [`MealyMachine::run`] consumes its input left to right threading the
//! state, while the extensions `⊗⁺`/`⊙⁺` of [`MealyMachine::extend_actions`]
//! apply the head letter last. They agree up to which end of the word acts
//! first: `extend_actions(w, e)` equals running the machine from `e` on the
//! reversal of `w` and reversing the emitted word.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::finset::{pair_index, unpair_index, FinFun, FinSet};
use crate::monoid::{check_table, Word};
use crate::verdict::{Error, Result, Verdict};

// ====================
// === MealyMachine ===
// ====================

/// A loose morphism `input ⇸ output`: states with transition and output
/// tables, both indexed `[letter][state]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MealyMachine {
    input: FinSet,
    output: FinSet,
    states: FinSet,
    /// `d[a][e] ∈ states`
    d: Vec<Vec<usize>>,
    /// `s[a][e] ∈ output`
    s: Vec<Vec<usize>>,
}

impl MealyMachine {
    pub fn new(
        input: FinSet,
        output: FinSet,
        states: FinSet,
        d: Vec<Vec<usize>>,
        s: Vec<Vec<usize>>,
    ) -> Result<Self> {
        check_table(&d, input.size(), states.size(), states.size(), "d")?;
        check_table(&s, input.size(), states.size(), output.size(), "s")?;
        Ok(MealyMachine {
            input,
            output,
            states,
            d,
            s,
        })
    }

    pub fn input(&self) -> &FinSet {
        &self.input
    }

    pub fn output(&self) -> &FinSet {
        &self.output
    }

    pub fn states(&self) -> &FinSet {
        &self.states
    }

    pub fn d(&self, a: usize, e: usize) -> usize {
        self.d[a][e]
    }

    pub fn s(&self, a: usize, e: usize) -> usize {
        self.s[a][e]
    }

    pub fn d_table(&self) -> &Vec<Vec<usize>> {
        &self.d
    }

    pub fn s_table(&self) -> &Vec<Vec<usize>> {
        &self.s
    }

    pub fn is_endo(&self) -> bool {
        self.input == self.output
    }

    /// Consumes `w` left to right, threading the state: each step emits
    /// `s(a, e)` and moves to `d(a, e)`.
    pub fn run(&self, mut e: usize, w: &[usize]) -> Result<(Word, usize)> {
        if !self.states.contains(e) {
            return Err(Error::index(
                "state",
                format!("{} not below {}", e, self.states.size()),
            ));
        }
        let mut out = Vec::with_capacity(w.len());
        for (i, &a) in w.iter().enumerate() {
            if !self.input.contains(a) {
                return Err(Error::index(
                    format!("word[{i}]"),
                    format!("letter {} not below {}", a, self.input.size()),
                ));
            }
            out.push(self.s[a][e]);
            e = self.d[a][e];
        }
        Ok((out, e))
    }

    /// `(w ⊗⁺ e, w ⊙⁺ e)` for an endo machine: the canonical extensions
    ///
    /// ```text
    /// [] ⊗⁺ e = e          (a::as) ⊗⁺ e = d(a, as ⊗⁺ e)
    /// [] ⊙⁺ e = []         (a::as) ⊙⁺ e = s(a, as ⊗⁺ e) :: (as ⊙⁺ e)
    /// ```
    pub fn extend_actions(&self, w: &[usize], e: usize) -> Result<(usize, Word)> {
        if !self.is_endo() {
            return Err(Error::Invalid(
                "extend_actions needs an endo machine (input = output)".into(),
            ));
        }
        if !self.states.contains(e) {
            return Err(Error::index(
                "state",
                format!("{} not below {}", e, self.states.size()),
            ));
        }
        if let Some(&a) = w.iter().find(|&&a| !self.input.contains(a)) {
            return Err(Error::index(
                "word",
                format!("letter {} not below {}", a, self.input.size()),
            ));
        }
        Ok((self.tensor_word(w, e), self.act_word(w, e)))
    }

    /// `w ⊗⁺ e`, head letter last. Indices are assumed valid.
    pub fn tensor_word(&self, w: &[usize], e: usize) -> usize {
        w.iter().rev().fold(e, |acc, &a| self.d[a][acc])
    }

    /// `w ⊙⁺ e`, same length as `w`. Indices are assumed valid.
    pub fn act_word(&self, w: &[usize], e: usize) -> Word {
        let mut out = Vec::with_capacity(w.len());
        let mut acc = e;
        // build from the tail: letter i sees the state produced by letters i+1..
        for &a in w.iter().rev() {
            out.push(self.s[a][acc]);
            acc = self.d[a][acc];
        }
        out.reverse();
        out
    }
}

/// The identity loose morphism `i_X`: one state, `d(x, •) = •`,
/// `s(x, •) = x`.
pub fn identity_loose(x: &FinSet) -> MealyMachine {
    MealyMachine {
        input: x.clone(),
        output: x.clone(),
        states: FinSet::singleton(),
        d: vec![vec![0]; x.size()],
        s: x.elements().map(|i| vec![i]).collect(),
    }
}

// ============
// === Cell ===
// ============

/// A square bounded by two machines (top, bottom) and two tight maps
/// (`f` on inputs, `g` on outputs), witnessed by a state map `alpha`.
/// Construction checks boundaries only; [`check_cell`] checks the equations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub top: MealyMachine,
    pub bottom: MealyMachine,
    pub f: FinFun,
    pub g: FinFun,
    pub alpha: FinFun,
}

impl Cell {
    pub fn new(
        top: MealyMachine,
        bottom: MealyMachine,
        f: FinFun,
        g: FinFun,
        alpha: FinFun,
    ) -> Result<Self> {
        if f.dom() != top.input() || f.cod() != bottom.input() {
            return Err(Error::Boundary(
                "f must map top input to bottom input".into(),
            ));
        }
        if g.dom() != top.output() || g.cod() != bottom.output() {
            return Err(Error::Boundary(
                "g must map top output to bottom output".into(),
            ));
        }
        if alpha.dom() != top.states() || alpha.cod() != bottom.states() {
            return Err(Error::Boundary(
                "alpha must map top states to bottom states".into(),
            ));
        }
        Ok(Cell {
            top,
            bottom,
            f,
            g,
            alpha,
        })
    }

    /// The identity cell `ι_m` on a machine.
    pub fn identity(m: &MealyMachine) -> Cell {
        Cell {
            top: m.clone(),
            bottom: m.clone(),
            f: FinFun::identity(m.input()),
            g: FinFun::identity(m.output()),
            alpha: FinFun::identity(m.states()),
        }
    }

    /// The cell `ι_f : i_A → i_B` between identity loose morphisms over a
    /// tight `f`.
    pub fn tight_identity(f: &FinFun) -> Cell {
        Cell {
            top: identity_loose(f.dom()),
            bottom: identity_loose(f.cod()),
            f: f.clone(),
            g: f.clone(),
            alpha: FinFun::identity(&FinSet::singleton()),
        }
    }

    /// Inverse cell, when all three boundary maps are bijections and the
    /// inverse square still commutes.
    pub fn inverse(&self) -> Option<Cell> {
        let c = Cell {
            top: self.bottom.clone(),
            bottom: self.top.clone(),
            f: self.f.inverse()?,
            g: self.g.inverse()?,
            alpha: self.alpha.inverse()?,
        };
        check_cell(&c).pass.then_some(c)
    }
}

/// Both commuting equations at every `(a, e)`; the first failing pair is the
/// witness.
pub fn check_cell(c: &Cell) -> Verdict {
    for a in c.top.input().elements() {
        for e in c.top.states().elements() {
            let fa = c.f.apply(a);
            let ae = c.alpha.apply(e);
            let d_lhs = c.bottom.d(fa, ae);
            let d_rhs = c.alpha.apply(c.top.d(a, e));
            if d_lhs != d_rhs {
                return Verdict::fail(
                    "cell_d",
                    json!({ "a": a, "e": e, "lhs": d_lhs, "rhs": d_rhs }),
                );
            }
            let s_lhs = c.bottom.s(fa, ae);
            let s_rhs = c.g.apply(c.top.s(a, e));
            if s_lhs != s_rhs {
                return Verdict::fail(
                    "cell_s",
                    json!({ "a": a, "e": e, "lhs": s_lhs, "rhs": s_rhs }),
                );
            }
        }
    }
    Verdict::pass()
}

// =========================
// === Loose composition ===
// =========================

/// Cascade product `m1 ⨟ m2 : A ⇸ C` of `m1 : A ⇸ B` and `m2 : B ⇸ C`:
/// states `E1 × E2` (flat lexicographic pairing), transition feeds `m1`'s
/// output letter to `m2`:
///
/// ```text
/// d(a, (e1, e2)) = (d1(a, e1), d2(s1(a, e1), e2))
/// s(a, (e1, e2)) = s2(s1(a, e1), e2)
/// ```
pub fn loose_compose(m1: &MealyMachine, m2: &MealyMachine) -> Result<MealyMachine> {
    if m1.output() != m2.input() {
        return Err(Error::Boundary(format!(
            "cannot compose machines: middle sets have sizes {} and {}",
            m1.output().size(),
            m2.input().size()
        )));
    }
    let n1 = m1.states().size();
    let n2 = m2.states().size();
    let states = FinSet::new(n1 * n2);
    let mut d = Vec::with_capacity(m1.input().size());
    let mut s = Vec::with_capacity(m1.input().size());
    for a in m1.input().elements() {
        let mut d_row = Vec::with_capacity(n1 * n2);
        let mut s_row = Vec::with_capacity(n1 * n2);
        for p in 0..n1 * n2 {
            let (e1, e2) = unpair_index(p, n2);
            let b = m1.s(a, e1);
            d_row.push(pair_index(m1.d(a, e1), m2.d(b, e2), n2));
            s_row.push(m2.s(b, e2));
        }
        d.push(d_row);
        s.push(s_row);
    }
    Ok(MealyMachine {
        input: m1.input().clone(),
        output: m2.output().clone(),
        states,
        d,
        s,
    })
}

/// Re-indexing bijection `(E1×E2)×E3 → E1×(E2×E3)` on flat indices. With
/// lexicographic pairing both sides flatten a triple `(e1, e2, e3)` to
/// `e1·n2·n3 + e2·n3 + e3`, so the table is the identity permutation; it is
/// still built by explicit unpair/pair so the convention is checked, not
/// assumed.
fn rebracket(n1: usize, n2: usize, n3: usize) -> FinFun {
    let total = FinSet::new(n1 * n2 * n3);
    let table = (0..n1 * n2 * n3)
        .map(|p| {
            let (e12, e3) = unpair_index(p, n3);
            let (e1, e2) = unpair_index(e12, n2);
            pair_index(e1, pair_index(e2, e3, n3), n2 * n3)
        })
        .collect();
    FinFun::new(total.clone(), total, table).unwrap()
}

/// Associator cell `(m1 ⨟ m2) ⨟ m3 → m1 ⨟ (m2 ⨟ m3)` over identity tights.
/// Panics if the constructed square does not commute: that would be a
/// construction bug, not bad input.
pub fn assoc_cell(m1: &MealyMachine, m2: &MealyMachine, m3: &MealyMachine) -> Result<Cell> {
    let left = loose_compose(&loose_compose(m1, m2)?, m3)?;
    let right = loose_compose(m1, &loose_compose(m2, m3)?)?;
    let alpha = rebracket(m1.states().size(), m2.states().size(), m3.states().size());
    let c = Cell {
        top: left,
        bottom: right,
        f: FinFun::identity(m1.input()),
        g: FinFun::identity(m3.output()),
        alpha,
    };
    assert!(check_cell(&c).pass, "associator must be a valid cell");
    Ok(c)
}

/// Left unitor `i_A ⨟ m → m` over identity tights.
pub fn unitor_left(m: &MealyMachine) -> Cell {
    let top = loose_compose(&identity_loose(m.input()), m).expect("boundaries match");
    // 1 × E → E: the flat pairing is the identity on indices
    let alpha = FinFun::new(
        top.states().clone(),
        m.states().clone(),
        m.states().elements().collect(),
    )
    .unwrap();
    let c = Cell {
        top,
        bottom: m.clone(),
        f: FinFun::identity(m.input()),
        g: FinFun::identity(m.output()),
        alpha,
    };
    assert!(check_cell(&c).pass, "left unitor must be a valid cell");
    c
}

/// Right unitor `m ⨟ i_B → m` over identity tights.
pub fn unitor_right(m: &MealyMachine) -> Cell {
    let top = loose_compose(m, &identity_loose(m.output())).expect("boundaries match");
    let alpha = FinFun::new(
        top.states().clone(),
        m.states().clone(),
        m.states().elements().collect(),
    )
    .unwrap();
    let c = Cell {
        top,
        bottom: m.clone(),
        f: FinFun::identity(m.input()),
        g: FinFun::identity(m.output()),
        alpha,
    };
    assert!(check_cell(&c).pass, "right unitor must be a valid cell");
    c
}

// ========================
// === Cell composition ===
// ========================

/// Vertical composite (stacking): needs `c1.bottom = c2.top`; tights and
/// state maps compose.
pub fn cell_compose_v(c1: &Cell, c2: &Cell) -> Result<Cell> {
    if c1.bottom != c2.top {
        return Err(Error::Boundary(
            "vertical composition needs c1.bottom = c2.top".into(),
        ));
    }
    Ok(Cell {
        top: c1.top.clone(),
        bottom: c2.bottom.clone(),
        f: c1.f.then(&c2.f)?,
        g: c1.g.then(&c2.g)?,
        alpha: c1.alpha.then(&c2.alpha)?,
    })
}

/// Horizontal composite (side by side along the loose direction): needs
/// `c1.g = c2.f`; machines compose by cascade and the state map is
/// `alpha1 × alpha2` on paired states.
pub fn cell_compose_h(c1: &Cell, c2: &Cell) -> Result<Cell> {
    if c1.g != c2.f {
        return Err(Error::Boundary(
            "horizontal composition needs c1.g = c2.f".into(),
        ));
    }
    let top = loose_compose(&c1.top, &c2.top)?;
    let bottom = loose_compose(&c1.bottom, &c2.bottom)?;
    let n2 = c2.top.states().size();
    let k2 = c2.bottom.states().size();
    let table = (0..top.states().size())
        .map(|p| {
            let (e1, e2) = unpair_index(p, n2);
            pair_index(c1.alpha.apply(e1), c2.alpha.apply(e2), k2)
        })
        .collect();
    let alpha = FinFun::new(top.states().clone(), bottom.states().clone(), table).unwrap();
    Ok(Cell {
        top,
        bottom,
        f: c1.f.clone(),
        g: c2.g.clone(),
        alpha,
    })
}

// ========================
// === Parallel product ===
// ========================

/// Componentwise parallel product `m1 ⊗ m2 : A1×A2 ⇸ B1×B2`, with the swap
/// symmetry cell `m1 ⊗ m2 → m2 ⊗ m1`.
pub fn tensor_machines(m1: &MealyMachine, m2: &MealyMachine) -> (MealyMachine, Cell) {
    let na2 = m2.input().size();
    let nb2 = m2.output().size();
    let n2 = m2.states().size();
    let build = |x: &MealyMachine, y: &MealyMachine| {
        let (nay, nby, ny) = (y.input().size(), y.output().size(), y.states().size());
        let input = FinSet::new(x.input().size() * nay);
        let output = FinSet::new(x.output().size() * nby);
        let states = FinSet::new(x.states().size() * ny);
        let mut d = Vec::new();
        let mut s = Vec::new();
        for a in 0..input.size() {
            let (a1, a2) = unpair_index(a, nay);
            let mut d_row = Vec::new();
            let mut s_row = Vec::new();
            for p in 0..states.size() {
                let (e1, e2) = unpair_index(p, ny);
                d_row.push(pair_index(x.d(a1, e1), y.d(a2, e2), ny));
                s_row.push(pair_index(x.s(a1, e1), y.s(a2, e2), nby));
            }
            d.push(d_row);
            s.push(s_row);
        }
        MealyMachine {
            input,
            output,
            states,
            d,
            s,
        }
    };
    let prod = build(m1, m2);
    let flipped = build(m2, m1);
    let swap_fun = |x: usize, y: usize| {
        let dom = FinSet::new(x * y);
        FinFun::new(
            dom.clone(),
            dom,
            (0..x * y)
                .map(|p| {
                    let (i, j) = unpair_index(p, y);
                    pair_index(j, i, x)
                })
                .collect(),
        )
        .unwrap()
    };
    let swap = Cell {
        top: prod.clone(),
        bottom: flipped,
        f: swap_fun(m1.input().size(), na2),
        g: swap_fun(m1.output().size(), nb2),
        alpha: swap_fun(m1.states().size(), n2),
    };
    assert!(check_cell(&swap).pass, "swap must be a valid cell");
    (prod, swap)
}
