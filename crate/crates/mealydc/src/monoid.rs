//! Finite monoids, free-monoid words, actions, matched pairs, and the
//! bicrossed product `E ⋈ A*`.
//!
//! A matched pair packages a finite monoid `E`, an alphabet `A`, and the two
//! tables `d : A×E → E`, `s : A×E → A` of an endo Mealy machine whose state
//! set carries the monoid. Words extend the tables by the recursions
//!
//! ```text
//! [] ⊗⁺ e = e            (a::as) ⊗⁺ e = d(a, as ⊗⁺ e)
//! [] ⊙⁺ e = []           (a::as) ⊙⁺ e = s(a, as ⊗⁺ e) :: (as ⊙⁺ e)
//! ```
//!
//! so the head letter acts last ("inner-first"); every word-order convention
//! in the crate is stated relative to this one. The bicrossed product is the
//! set `E × A*` with multiplication
//!
//! ```text
//! (x, as) • (y, bs) = (x · (as ⊗⁺ y), (as ⊙⁺ y) ⌢ bs)
//! ```
//!
//! and unit `(e0, [])`. `A*` is infinite, so every law about `E ⋈ A*` is
//! verified on a word-length-bounded fragment; the defining recursions are
//! inductive in word length, which is what makes the bounded check
//! meaningful.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::finset::FinSet;
use crate::verdict::{Error, Result, Verdict};

/// A word over an alphabet, as a sequence of letter indices.
pub type Word = Vec<usize>;

/// All words of length ≤ `bound`, ordered by length then lexicographically.
/// This is the canonical witness order for every word-quantified law.
pub fn words_up_to(alphabet: usize, bound: usize) -> Vec<Word> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Word> = vec![vec![]];
    for _ in 0..bound {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..alphabet {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

// =================
// === FinMonoid ===
// =================

/// A finite monoid: carrier, unit element, full multiplication table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinMonoid {
    carrier: FinSet,
    unit: usize,
    mult: Vec<Vec<usize>>,
}

impl FinMonoid {
    /// Validates indexing only; use [`check_monoid_laws`] for the laws.
    pub fn new(carrier: FinSet, unit: usize, mult: Vec<Vec<usize>>) -> Result<Self> {
        if !carrier.contains(unit) {
            return Err(Error::index(
                "unit",
                format!("{} not below {}", unit, carrier.size()),
            ));
        }
        check_table(
            &mult,
            carrier.size(),
            carrier.size(),
            carrier.size(),
            "mult",
        )?;
        Ok(FinMonoid {
            carrier,
            unit,
            mult,
        })
    }

    pub fn trivial() -> Self {
        FinMonoid {
            carrier: FinSet::singleton(),
            unit: 0,
            mult: vec![vec![0]],
        }
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mult_table(&self) -> &Vec<Vec<usize>> {
        &self.mult
    }

    pub fn mult(&self, x: usize, y: usize) -> usize {
        self.mult[x][y]
    }
}

/// Validates a rectangular table `rows × cols → cod`, reporting the first
/// offending entry by position.
pub(crate) fn check_table(
    t: &[Vec<usize>],
    rows: usize,
    cols: usize,
    cod: usize,
    name: &str,
) -> Result<()> {
    if t.len() != rows {
        return Err(Error::index(
            name,
            format!("{} rows, expected {}", t.len(), rows),
        ));
    }
    for (r, row) in t.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::index(
                format!("{name}[{r}]"),
                format!("{} columns, expected {}", row.len(), cols),
            ));
        }
        for (c, &v) in row.iter().enumerate() {
            if v >= cod {
                return Err(Error::index(
                    format!("{name}[{r}][{c}]"),
                    format!("value {v} not below {cod}"),
                ));
            }
        }
    }
    Ok(())
}

/// Associativity on all triples (scanned lexicographically), then both unit
/// laws. The first violating arguments are reported.
pub fn check_monoid_laws(m: &FinMonoid) -> Verdict {
    let n = m.size();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = m.mult(m.mult(a, b), c);
                let rhs = m.mult(a, m.mult(b, c));
                if lhs != rhs {
                    return Verdict::fail(
                        "monoid_assoc",
                        json!({ "triple": [a, b, c], "lhs": lhs, "rhs": rhs }),
                    );
                }
            }
        }
    }
    for a in 0..n {
        if m.mult(m.unit, a) != a || m.mult(a, m.unit) != a {
            return Verdict::fail(
                "monoid_unit",
                json!({
                    "element": a,
                    "left": m.mult(m.unit, a),
                    "right": m.mult(a, m.unit),
                }),
            );
        }
    }
    Verdict::pass()
}

// ====================
// === MonoidAction ===
// ====================

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// An action of a finite monoid on a finite set, as a table `act[m][x]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonoidAction {
    pub monoid: FinMonoid,
    pub set: FinSet,
    pub act: Vec<Vec<usize>>,
    pub side: Side,
}

impl MonoidAction {
    pub fn new(monoid: FinMonoid, set: FinSet, act: Vec<Vec<usize>>, side: Side) -> Result<Self> {
        check_table(&act, monoid.size(), set.size(), set.size(), "act")?;
        Ok(MonoidAction {
            monoid,
            set,
            act,
            side,
        })
    }
}

/// Unit law and the compatibility law for the declared side:
/// left actions satisfy `(m·m') ⋆ x = m ⋆ (m' ⋆ x)`, right actions the
/// mirror image.
pub fn check_action_laws(a: &MonoidAction) -> Verdict {
    let n = a.monoid.size();
    let u = a.monoid.unit();
    for x in a.set.elements() {
        if a.act[u][x] != x {
            return Verdict::fail("action_unit", json!({ "x": x, "got": a.act[u][x] }));
        }
    }
    for m in 0..n {
        for m2 in 0..n {
            for x in a.set.elements() {
                let joined = a.act[a.monoid.mult(m, m2)][x];
                let stepped = match a.side {
                    Side::Left => a.act[m][a.act[m2][x]],
                    Side::Right => a.act[m2][a.act[m][x]],
                };
                if joined != stepped {
                    return Verdict::fail(
                        "action_compat",
                        json!({ "pair": [m, m2], "x": x, "joined": joined, "stepped": stepped }),
                    );
                }
            }
        }
    }
    Verdict::pass()
}

// ===================
// === MatchedPair ===
// ===================

/// A monoid `E` and an alphabet `A` acting on each other through the two
/// tables of an endo Mealy machine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    #[serde(rename = "monoid")]
    state_monoid: FinMonoid,
    alphabet: FinSet,
    /// `d[a][e] ∈ E`
    d: Vec<Vec<usize>>,
    /// `s[a][e] ∈ A`
    s: Vec<Vec<usize>>,
}

impl MatchedPair {
    pub fn new(
        state_monoid: FinMonoid,
        alphabet: FinSet,
        d: Vec<Vec<usize>>,
        s: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let ne = state_monoid.size();
        let na = alphabet.size();
        check_table(&d, na, ne, ne, "d")?;
        check_table(&s, na, ne, na, "s")?;
        Ok(MatchedPair {
            state_monoid,
            alphabet,
            d,
            s,
        })
    }

    pub fn state_monoid(&self) -> &FinMonoid {
        &self.state_monoid
    }

    pub fn alphabet(&self) -> &FinSet {
        &self.alphabet
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

    /// `w ⊗⁺ e`: the word acts on the state, head letter last.
    pub fn tensor_word(&self, w: &[usize], e: usize) -> usize {
        w.iter().rev().fold(e, |acc, &a| self.d[a][acc])
    }

    /// `w ⊙⁺ e`: the state rewrites the word, preserving its length.
    pub fn act_word(&self, w: &[usize], e: usize) -> Word {
        match w.split_first() {
            None => vec![],
            Some((&a, rest)) => {
                let mut out = Vec::with_capacity(w.len());
                out.push(self.s[a][self.tensor_word(rest, e)]);
                out.extend(self.act_word(rest, e));
                out
            }
        }
    }
}

// ========================
// === BicrossedElement ===
// ========================

/// An element `(e, w)` of `E ⋈ A*`: the state-monoid component first, then
/// the word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicrossedElement {
    pub e: usize,
    pub w: Word,
}

impl BicrossedElement {
    pub fn new(e: usize, w: Word) -> Self {
        BicrossedElement { e, w }
    }
}

/// The unit `(e0, [])` of `E ⋈ A*`.
pub fn bicrossed_identity(p: &MatchedPair) -> BicrossedElement {
    BicrossedElement::new(p.state_monoid.unit(), vec![])
}

/// `(x, as) • (y, bs) = (x · (as ⊗⁺ y), (as ⊙⁺ y) ⌢ bs)`.
pub fn bicrossed_multiply(
    p: &MatchedPair,
    x: &BicrossedElement,
    y: &BicrossedElement,
) -> Result<BicrossedElement> {
    for el in [x, y] {
        if !p.state_monoid.carrier().contains(el.e) {
            return Err(Error::index(
                "e",
                format!("{} not below {}", el.e, p.state_monoid.size()),
            ));
        }
        if let Some(&a) = el.w.iter().find(|&&a| !p.alphabet.contains(a)) {
            return Err(Error::index(
                "w",
                format!("letter {} not below {}", a, p.alphabet.size()),
            ));
        }
    }
    let e = p.state_monoid.mult(x.e, p.tensor_word(&x.w, y.e));
    let mut w = p.act_word(&x.w, y.e);
    w.extend_from_slice(&y.w);
    Ok(BicrossedElement::new(e, w))
}

/// The two bicrossed equations plus the unit-fixpoint conditions, checked
/// for all words up to length `bound`:
///
/// ```text
/// as ⊗⁺ (e·e') = (as ⊗⁺ e) · ((as ⊙⁺ e) ⊗⁺ e')
/// (as ⌢ bs) ⊙⁺ e = (as ⊙⁺ (bs ⊗⁺ e)) ⌢ (bs ⊙⁺ e)
/// as ⊗⁺ e0 = e0        as ⊙⁺ e0 = as
/// ```
///
/// The source text states the degenerate unit conditions as
/// "`g ⊗⁺ h = 1` and `g ⊙⁺ h = 1`", which as written would force both
/// actions to be trivial; what its monad characterization actually uses is
/// that the unit `e0` is a fixpoint of `⊗⁺` fixing words under `⊙⁺`, and
/// that is what is checked here.
pub fn check_bicrossed_equations(p: &MatchedPair, bound: usize) -> Verdict {
    let na = p.alphabet.size();
    let ne = p.state_monoid.size();
    let e0 = p.state_monoid.unit();
    let ws = words_up_to(na, bound);
    for asw in &ws {
        for e in 0..ne {
            for e2 in 0..ne {
                let lhs = p.tensor_word(asw, p.state_monoid.mult(e, e2));
                let rhs = p.state_monoid.mult(
                    p.tensor_word(asw, e),
                    p.tensor_word(&p.act_word(asw, e), e2),
                );
                if lhs != rhs {
                    return Verdict::fail(
                        "bicrossed_tensor_mult",
                        json!({ "word": asw, "e": e, "e2": e2, "lhs": lhs, "rhs": rhs }),
                    );
                }
                let lhs2 = p.act_word(asw, p.state_monoid.mult(e, e2));
                let rhs2 = p.act_word(&p.act_word(asw, e), e2);
                if lhs2 != rhs2 {
                    return Verdict::fail(
                        "bicrossed_act_mult",
                        json!({ "word": asw, "e": e, "e2": e2, "lhs": lhs2, "rhs": rhs2 }),
                    );
                }
            }
        }
        if p.tensor_word(asw, e0) != e0 {
            return Verdict::fail(
                "bicrossed_unit_tensor",
                json!({ "word": asw, "got": p.tensor_word(asw, e0) }),
            );
        }
        if p.act_word(asw, e0) != *asw {
            return Verdict::fail(
                "bicrossed_unit_act",
                json!({ "word": asw, "got": p.act_word(asw, e0) }),
            );
        }
    }
    // concatenation laws; half the bound on each factor keeps the total in range
    let half = words_up_to(na, bound.div_ceil(2));
    for asw in &half {
        for bsw in &half {
            let joined: Word = asw.iter().chain(bsw.iter()).copied().collect();
            for e in 0..ne {
                if p.tensor_word(&joined, e) != p.tensor_word(asw, p.tensor_word(bsw, e)) {
                    return Verdict::fail(
                        "bicrossed_tensor_concat",
                        json!({ "as": asw, "bs": bsw, "e": e }),
                    );
                }
                let mut expect = p.act_word(asw, p.tensor_word(bsw, e));
                expect.extend(p.act_word(bsw, e));
                if p.act_word(&joined, e) != expect {
                    return Verdict::fail(
                        "bicrossed_act_concat",
                        json!({ "as": asw, "bs": bsw, "e": e }),
                    );
                }
            }
        }
    }
    Verdict::pass()
}

/// Relations of the two canonical injections into `E ⋈ A*`:
/// `i_E(e) = (e, [])` and `i_W(w) = (e0, w)` are monoid maps,
/// `i_W(w) • i_E(e) = (w ⊗⁺ e, w ⊙⁺ e)`, and `i_E(e) • i_W(w) = (e, w)`.
pub fn bicrossed_cospan_relations(p: &MatchedPair, bound: usize) -> Result<Verdict> {
    let ne = p.state_monoid.size();
    let e0 = p.state_monoid.unit();
    let ws = words_up_to(p.alphabet.size(), bound);
    let i_e = |e: usize| BicrossedElement::new(e, vec![]);
    let i_w = |w: &Word| BicrossedElement::new(e0, w.clone());
    for w in &ws {
        for e in 0..ne {
            let we = bicrossed_multiply(p, &i_w(w), &i_e(e))?;
            let expect = BicrossedElement::new(p.tensor_word(w, e), p.act_word(w, e));
            if we != expect {
                return Ok(Verdict::fail(
                    "cospan_word_state",
                    json!({ "word": w, "e": e, "got": we, "expected": expect }),
                ));
            }
            let ew = bicrossed_multiply(p, &i_e(e), &i_w(w))?;
            if ew != BicrossedElement::new(e, w.clone()) {
                return Ok(Verdict::fail(
                    "cospan_state_word",
                    json!({ "word": w, "e": e, "got": ew }),
                ));
            }
        }
    }
    // both injections are monoid homomorphisms on the bounded fragment
    for e in 0..ne {
        for e2 in 0..ne {
            let prod = bicrossed_multiply(p, &i_e(e), &i_e(e2))?;
            if prod != i_e(p.state_monoid.mult(e, e2)) {
                return Ok(Verdict::fail(
                    "cospan_hom_state",
                    json!({ "e": e, "e2": e2 }),
                ));
            }
        }
    }
    let half = words_up_to(p.alphabet.size(), bound.div_ceil(2));
    for u in &half {
        for v in &half {
            let prod = bicrossed_multiply(p, &i_w(u), &i_w(v))?;
            let joined: Word = u.iter().chain(v.iter()).copied().collect();
            if prod != i_w(&joined) {
                return Ok(Verdict::fail("cospan_hom_word", json!({ "u": u, "v": v })));
            }
        }
    }
    Ok(Verdict::pass())
}

/// The multiplication table of the bounded fragment
/// `{(e, w) : |w| ≤ bound}`, for inspection; rows and columns are indexed by
/// the canonical element order (state, then word in length-lex order).
/// Products whose word outgrows the bound are reported as such.
#[derive(Debug, Clone, Serialize)]
pub struct CayleyFragment {
    pub elements: Vec<BicrossedElement>,
    /// `products[i][j]` is the index of element `i • j`, or `None` when the
    /// product leaves the fragment.
    pub products: Vec<Vec<Option<usize>>>,
}

pub fn bicrossed_cayley(p: &MatchedPair, bound: usize) -> Result<CayleyFragment> {
    let mut elements = Vec::new();
    for e in 0..p.state_monoid.size() {
        for w in words_up_to(p.alphabet.size(), bound) {
            elements.push(BicrossedElement::new(e, w));
        }
    }
    let index: std::collections::HashMap<(usize, Word), usize> = elements
        .iter()
        .enumerate()
        .map(|(i, el)| ((el.e, el.w.clone()), i))
        .collect();
    let mut products = Vec::with_capacity(elements.len());
    for x in &elements {
        let mut row = Vec::with_capacity(elements.len());
        for y in &elements {
            let z = bicrossed_multiply(p, x, y)?;
            row.push(index.get(&(z.e, z.w)).copied());
        }
        products.push(row);
    }
    Ok(CayleyFragment { elements, products })
}
