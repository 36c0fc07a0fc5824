//! Finite sets and functions, with the categorical constructions every other
//! module consumes: products, coproducts, pullbacks, coequalizers.
//!
//! Elements are canonically the indices `0..size`; labels are display-only
//! and never participate in equality. All outputs are bit-stable: pullbacks
//! enumerate pairs lexicographically, coequalizer classes are indexed by
//! their smallest member.

use serde::{Deserialize, Serialize};

use crate::verdict::{Error, Result, Verdict};

// ==============
// === FinSet ===
// ==============

/// A finite set: the index set `0..size`, optionally labeled for display.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FinSet {
    size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// Equality is by size only: labels are presentation, not identity.
impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
    }
}
impl Eq for FinSet {}

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet { size, labels: None }
    }

    /// Labels must be one per element and pairwise distinct.
    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        for i in 0..labels.len() {
            for j in 0..i {
                if labels[i] == labels[j] {
                    return Err(Error::Invalid(format!(
                        "duplicate label {:?} at positions {} and {}",
                        labels[i], j, i
                    )));
                }
            }
        }
        Ok(FinSet {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn empty() -> Self {
        FinSet::new(0)
    }

    pub fn singleton() -> Self {
        FinSet::new(1)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.size
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(ls) if x < ls.len() => ls[x].clone(),
            _ => x.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

// ==============
// === FinFun ===
// ==============

/// A function between finite sets, stored as its full value table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinFun {
    dom: FinSet,
    cod: FinSet,
    table: Vec<usize>,
}

impl FinFun {
    pub fn new(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size() {
            return Err(Error::index(
                "table",
                format!("length {} but domain has size {}", table.len(), dom.size()),
            ));
        }
        for (i, &y) in table.iter().enumerate() {
            if !cod.contains(y) {
                return Err(Error::index(
                    format!("table[{i}]"),
                    format!("value {} not below codomain size {}", y, cod.size()),
                ));
            }
        }
        Ok(FinFun { dom, cod, table })
    }

    /// Builds the table by evaluating `f` on each element of `dom`.
    pub fn from_fn(dom: FinSet, cod: FinSet, f: impl Fn(usize) -> usize) -> Result<Self> {
        let table = dom.elements().map(f).collect();
        FinFun::new(dom, cod, table)
    }

    pub fn identity(x: &FinSet) -> Self {
        FinFun {
            dom: x.clone(),
            cod: x.clone(),
            table: x.elements().collect(),
        }
    }

    /// The unique map into the singleton.
    pub fn bang(x: &FinSet) -> Self {
        FinFun {
            dom: x.clone(),
            cod: FinSet::singleton(),
            table: vec![0; x.size()],
        }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// Diagrammatic composition: `self` first, then `g`.
    pub fn then(&self, g: &FinFun) -> Result<FinFun> {
        if self.cod != g.dom {
            return Err(Error::Boundary(format!(
                "cannot compose: middle sets have sizes {} and {}",
                self.cod.size(),
                g.dom.size()
            )));
        }
        Ok(FinFun {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            table: self.table.iter().map(|&x| g.apply(x)).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.table
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        for &y in &self.table {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.size() == self.cod.size() && self.is_injective()
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.table.iter().enumerate().all(|(i, &y)| i == y)
    }

    pub fn inverse(&self) -> Option<FinFun> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.cod.size()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Some(FinFun {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            table,
        })
    }
}

/// All functions `dom → cod` in lexicographic table order. The number of
/// candidates is `|cod|^|dom|`; callers guard their own budgets.
pub fn all_funs(dom: &FinSet, cod: &FinSet) -> Vec<FinFun> {
    let n = dom.size();
    let k = cod.size();
    if n == 0 {
        return vec![FinFun {
            dom: dom.clone(),
            cod: cod.clone(),
            table: vec![],
        }];
    }
    if k == 0 {
        return vec![]; // no map out of a nonempty set into the empty set
    }
    let mut out = Vec::new();
    let mut table = vec![0usize; n];
    loop {
        out.push(FinFun {
            dom: dom.clone(),
            cod: cod.clone(),
            table: table.clone(),
        });
        // increment as a base-k counter, most significant digit first
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            table[i] += 1;
            if table[i] < k {
                break;
            }
            table[i] = 0;
        }
    }
}

// ===========================
// === Products, coproducts ===
// ===========================

/// Flat index of the pair `(i, j)` in a product whose second factor has
/// `size2` elements. Every product state space in the crate uses this
/// lexicographic pairing.
pub fn pair_index(i: usize, j: usize, size2: usize) -> usize {
    i * size2 + j
}

/// Inverse of [`pair_index`].
pub fn unpair_index(p: usize, size2: usize) -> (usize, usize) {
    (p / size2, p % size2)
}

/// Cartesian product with its two projections.
pub fn product(x: &FinSet, y: &FinSet) -> (FinSet, FinFun, FinFun) {
    let p = FinSet::new(x.size() * y.size());
    let proj_x = FinFun {
        dom: p.clone(),
        cod: x.clone(),
        table: p.elements().map(|i| unpair_index(i, y.size()).0).collect(),
    };
    let proj_y = FinFun {
        dom: p.clone(),
        cod: y.clone(),
        table: p.elements().map(|i| unpair_index(i, y.size()).1).collect(),
    };
    (p, proj_x, proj_y)
}

/// Disjoint union `X + Y` with its two injections; `X` occupies the low
/// indices.
pub fn coproduct(x: &FinSet, y: &FinSet) -> (FinSet, FinFun, FinFun) {
    let c = FinSet::new(x.size() + y.size());
    let inj_x = FinFun {
        dom: x.clone(),
        cod: c.clone(),
        table: x.elements().collect(),
    };
    let inj_y = FinFun {
        dom: y.clone(),
        cod: c.clone(),
        table: y.elements().map(|j| x.size() + j).collect(),
    };
    (c, inj_x, inj_y)
}

/// Copairing `[f, g] : X + Y → Z` of two maps with a common codomain.
pub fn copair(f: &FinFun, g: &FinFun) -> Result<FinFun> {
    if f.cod != g.cod {
        return Err(Error::Boundary("copair requires equal codomains".into()));
    }
    let (c, _, _) = coproduct(&f.dom, &g.dom);
    let table = f.table.iter().chain(g.table.iter()).copied().collect();
    Ok(FinFun {
        dom: c,
        cod: f.cod.clone(),
        table,
    })
}

// ================
// === Pullback ===
// ================

/// Pullback of a cospan `f : A → Z ← B : g`.
///
/// The carrier enumerates all pairs `(x, y)` with `f(x) = g(y)` in
/// lexicographic order; the two projections satisfy `pA.then(f) = pB.then(g)`
/// (asserted on every call).
pub fn pullback(f: &FinFun, g: &FinFun) -> Result<(FinSet, FinFun, FinFun)> {
    if f.cod != g.cod {
        return Err(Error::Boundary(format!(
            "pullback needs a cospan: codomain sizes {} and {}",
            f.cod.size(),
            g.cod.size()
        )));
    }
    let mut pairs = Vec::new();
    for x in f.dom.elements() {
        for y in g.dom.elements() {
            if f.apply(x) == g.apply(y) {
                pairs.push((x, y));
            }
        }
    }
    let p = FinSet::new(pairs.len());
    let p_a = FinFun {
        dom: p.clone(),
        cod: f.dom.clone(),
        table: pairs.iter().map(|&(x, _)| x).collect(),
    };
    let p_b = FinFun {
        dom: p.clone(),
        cod: g.dom.clone(),
        table: pairs.iter().map(|&(_, y)| y).collect(),
    };
    assert_eq!(
        p_a.then(f).unwrap(),
        p_b.then(g).unwrap(),
        "pullback projections must commute"
    );
    Ok((p, p_a, p_b))
}

/// The unique map into the pullback induced by `u : W → A`, `v : W → B` with
/// `u.then(f) = v.then(g)`. Fails when the square does not commute.
pub fn pullback_pairing(f: &FinFun, g: &FinFun, u: &FinFun, v: &FinFun) -> Result<FinFun> {
    let (p, p_a, p_b) = pullback(f, g)?;
    if u.dom != v.dom {
        return Err(Error::Boundary("pairing legs must share a domain".into()));
    }
    if u.then(f)? != v.then(g)? {
        return Err(Error::Invalid(
            "pairing legs do not commute over the cospan".into(),
        ));
    }
    // index of each (x, y) pair in the lexicographic enumeration
    let mut index = std::collections::HashMap::new();
    for i in p.elements() {
        index.insert((p_a.apply(i), p_b.apply(i)), i);
    }
    let table = u
        .dom
        .elements()
        .map(|w| index[&(u.apply(w), v.apply(w))])
        .collect();
    Ok(FinFun {
        dom: u.dom.clone(),
        cod: p,
        table,
    })
}

// ===================
// === Coequalizer ===
// ===================

/// Union-find over codomain elements with path compression and union by
/// size; roots are canonicalized to the smallest member of each class.
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            cur = std::mem::replace(&mut self.parent[cur], root);
        }
        root
    }

    fn union(&mut self, x: usize, y: usize) {
        let (mut a, mut b) = (self.find(x), self.find(y));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Coequalizer of a parallel pair `f, g : W → Z`.
///
/// Quotient classes are the connected components of the relation
/// `{f(w) ~ g(w)}`; class indices are assigned in order of each class's
/// smallest member, so the result is canonical.
pub fn coequalizer(f: &FinFun, g: &FinFun) -> Result<(FinSet, FinFun)> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::Boundary("coequalizer needs a parallel pair".into()));
    }
    let n = f.cod.size();
    let mut uf = UnionFind::new(n);
    for w in f.dom.elements() {
        uf.union(f.apply(w), g.apply(w));
    }
    // smallest member of each class, in that member's order
    let mut least = vec![usize::MAX; n];
    for z in 0..n {
        let r = uf.find(z);
        if least[r] == usize::MAX {
            least[r] = z;
        }
    }
    let mut reps: Vec<usize> = (0..n)
        .filter(|&z| least.get(uf.find(z)) == Some(&z))
        .collect();
    reps.sort_unstable();
    let class_of_rep: std::collections::HashMap<usize, usize> =
        reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let q_set = FinSet::new(reps.len());
    let table = (0..n).map(|z| class_of_rep[&least[uf.find(z)]]).collect();
    let q = FinFun {
        dom: f.cod.clone(),
        cod: q_set.clone(),
        table,
    };
    Ok((q_set, q))
}

/// The unique `h' : Q → C` with `q.then(h') = h`, when `h` coequalizes the
/// pair that produced `q`. Returns `None` when `h` is not constant on some
/// class (i.e. does not factor).
pub fn factor_through_coequalizer(q: &FinFun, h: &FinFun) -> Option<FinFun> {
    if q.dom != h.dom {
        return None;
    }
    let mut table = vec![usize::MAX; q.cod.size()];
    for z in q.dom.elements() {
        let c = q.apply(z);
        let v = h.apply(z);
        if table[c] == usize::MAX {
            table[c] = v;
        } else if table[c] != v {
            return None;
        }
    }
    // q is surjective, so every class received a value
    Some(FinFun {
        dom: q.cod.clone(),
        cod: h.cod.clone(),
        table,
    })
}

// ==========================
// === Property checkers ===
// ==========================

/// Universal property of the coequalizer, verified by enumeration: every
/// `h` with `f.then(h) = g.then(h)` factors through `q` by exactly one map.
/// Intended for desk-scale instances.
pub fn check_coequalizer_universal(f: &FinFun, g: &FinFun, probe_cod: &FinSet) -> Result<Verdict> {
    let (q_set, q) = coequalizer(f, g)?;
    for h in all_funs(f.cod(), probe_cod) {
        if f.then(&h)? != g.then(&h)? {
            continue;
        }
        let candidates: Vec<FinFun> = all_funs(&q_set, probe_cod)
            .into_iter()
            .filter(|hp| q.then(hp).unwrap() == h)
            .collect();
        if candidates.len() != 1 {
            return Ok(Verdict::fail(
                "coequalizer_universal",
                serde_json::json!({ "h": h.table(), "factorizations": candidates.len() }),
            ));
        }
        if factor_through_coequalizer(&q, &h).as_ref() != Some(&candidates[0]) {
            return Ok(Verdict::fail(
                "coequalizer_factor",
                serde_json::json!({ "h": h.table() }),
            ));
        }
    }
    Ok(Verdict::pass())
}

/// Universal property of the pullback, verified by enumeration over all
/// commuting spans from `probe_dom`.
pub fn check_pullback_universal(f: &FinFun, g: &FinFun, probe_dom: &FinSet) -> Result<Verdict> {
    let (p, p_a, p_b) = pullback(f, g)?;
    for u in all_funs(probe_dom, f.dom()) {
        for v in all_funs(probe_dom, g.dom()) {
            if u.then(f)? != v.then(g)? {
                continue;
            }
            let mediating: Vec<FinFun> = all_funs(probe_dom, &p)
                .into_iter()
                .filter(|m| m.then(&p_a).unwrap() == u && m.then(&p_b).unwrap() == v)
                .collect();
            if mediating.len() != 1 {
                return Ok(Verdict::fail(
                    "pullback_universal",
                    serde_json::json!({
                        "u": u.table(),
                        "v": v.table(),
                        "mediating": mediating.len(),
                    }),
                ));
            }
            if pullback_pairing(f, g, &u, &v)? != mediating[0] {
                return Ok(Verdict::fail(
                    "pullback_pairing",
                    serde_json::json!({ "u": u.table(), "v": v.table() }),
                ));
            }
        }
    }
    Ok(Verdict::pass())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fun(dom: usize, cod: usize, table: &[usize]) -> FinFun {
        FinFun::new(FinSet::new(dom), FinSet::new(cod), table.to_vec()).unwrap()
    }

    #[test]
    fn labels_must_be_distinct() {
        assert!(FinSet::with_labels(vec!["a".into(), "a".into()]).is_err());
        let s = FinSet::with_labels(vec!["x".into(), "y".into()]).unwrap();
        assert_eq!(s.size(), 2);
        assert_eq!(s.label(1), "y");
        assert_eq!(s.label(7), "7");
    }

    #[test]
    fn equality_ignores_labels() {
        let a = FinSet::new(2);
        let b = FinSet::with_labels(vec!["p".into(), "q".into()]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fun_validation() {
        assert!(FinFun::new(FinSet::new(2), FinSet::new(2), vec![0]).is_err());
        assert!(FinFun::new(FinSet::new(2), FinSet::new(2), vec![0, 2]).is_err());
        assert!(FinFun::new(FinSet::new(0), FinSet::new(0), vec![]).is_ok());
    }

    #[test]
    fn compose_and_invert() {
        let swap = fun(2, 2, &[1, 0]);
        assert_eq!(swap.then(&swap).unwrap(), FinFun::identity(&FinSet::new(2)));
        assert_eq!(swap.inverse().unwrap(), swap);
        let c = fun(2, 1, &[0, 0]);
        assert!(c.inverse().is_none());
        assert!(c.is_surjective() && !c.is_injective());
    }

    #[test]
    fn all_funs_counts() {
        assert_eq!(all_funs(&FinSet::new(2), &FinSet::new(3)).len(), 9);
        assert_eq!(all_funs(&FinSet::new(0), &FinSet::new(0)).len(), 1);
        assert_eq!(all_funs(&FinSet::new(1), &FinSet::new(0)).len(), 0);
        // lexicographic table order
        let fs = all_funs(&FinSet::new(2), &FinSet::new(2));
        let tables: Vec<&[usize]> = fs.iter().map(|f| f.table()).collect();
        assert_eq!(tables, vec![&[0, 0][..], &[0, 1], &[1, 0], &[1, 1]]);
    }

    #[test]
    fn pullback_over_singleton_is_product() {
        let f = fun(2, 1, &[0, 0]);
        let g = fun(1, 1, &[0]);
        let (p, _, _) = pullback(&f, &g).unwrap();
        assert_eq!(p.size(), 2);
    }

    #[test]
    fn pullback_of_identities_is_diagonal() {
        let id = FinFun::identity(&FinSet::new(2));
        let (p, p_a, p_b) = pullback(&id, &id).unwrap();
        assert_eq!(p.size(), 2);
        assert_eq!(p_a, p_b);
    }

    #[test]
    fn pullback_singleton_example() {
        // f = [0,0,1], g = [1]: the only matching pair is (2, 0)
        let f = fun(3, 2, &[0, 0, 1]);
        let g = fun(1, 2, &[1]);
        let (p, p_a, p_b) = pullback(&f, &g).unwrap();
        assert_eq!(p.size(), 1);
        assert_eq!(p_a.table(), &[2]);
        assert_eq!(p_b.table(), &[0]);
    }

    #[test]
    fn coequalizer_of_equal_pair_is_identity() {
        let f = fun(2, 3, &[0, 2]);
        let (q_set, q) = coequalizer(&f, &f).unwrap();
        assert_eq!(q_set.size(), 3);
        assert!(q.is_identity());
    }

    #[test]
    fn coequalizer_glues_two_points() {
        let f = fun(1, 2, &[0]);
        let g = fun(1, 2, &[1]);
        let (q_set, q) = coequalizer(&f, &g).unwrap();
        assert_eq!(q_set.size(), 1);
        assert_eq!(q.table(), &[0, 0]);
    }

    #[test]
    fn coequalizer_chains_relations() {
        // f = [0,1], g = [1,2]: 0 ~ 1 ~ 2 collapses everything
        let f = fun(2, 3, &[0, 1]);
        let g = fun(2, 3, &[1, 2]);
        let (q_set, q) = coequalizer(&f, &g).unwrap();
        assert_eq!(q_set.size(), 1);
        assert!(q.is_surjective());
        assert_eq!(f.then(&q).unwrap(), g.then(&q).unwrap());
    }

    #[test]
    fn coequalizer_class_order_is_by_least_member() {
        // relate 1 ~ 3 on {0,1,2,3}: classes {0}, {1,3}, {2} in that order
        let f = fun(1, 4, &[1]);
        let g = fun(1, 4, &[3]);
        let (q_set, q) = coequalizer(&f, &g).unwrap();
        assert_eq!(q_set.size(), 3);
        assert_eq!(q.table(), &[0, 1, 2, 1]);
    }

    #[test]
    fn universal_properties_small() {
        let f = fun(2, 3, &[0, 1]);
        let g = fun(2, 3, &[1, 2]);
        for n in 0..=4 {
            assert!(
                check_coequalizer_universal(&f, &g, &FinSet::new(n))
                    .unwrap()
                    .pass
            );
        }
        let f = fun(3, 2, &[0, 0, 1]);
        let g = fun(2, 2, &[1, 0]);
        for n in 0..=3 {
            assert!(
                check_pullback_universal(&f, &g, &FinSet::new(n))
                    .unwrap()
                    .pass
            );
        }
    }

    #[test]
    fn product_and_coproduct_shapes() {
        let (p, px, py) = product(&FinSet::new(2), &FinSet::new(3));
        assert_eq!(p.size(), 6);
        assert_eq!(px.apply(pair_index(1, 2, 3)), 1);
        assert_eq!(py.apply(pair_index(1, 2, 3)), 2);
        let (c, ix, iy) = coproduct(&FinSet::new(2), &FinSet::new(3));
        assert_eq!(c.size(), 5);
        assert_eq!(ix.table(), &[0, 1]);
        assert_eq!(iy.table(), &[2, 3, 4]);
    }

    #[test]
    fn copair_restricts_to_legs() {
        let f = fun(2, 2, &[1, 0]);
        let g = fun(1, 2, &[1]);
        let h = copair(&f, &g).unwrap();
        assert_eq!(h.table(), &[1, 0, 1]);
    }

    #[test]
    fn empty_sets_are_legal() {
        let e = FinSet::empty();
        let f = FinFun::new(e.clone(), FinSet::new(2), vec![]).unwrap();
        assert!(f.is_injective());
        assert!(!f.is_surjective());
        let (q_set, _) = coequalizer(&f, &f).unwrap();
        assert_eq!(q_set.size(), 2);
    }
}
