//! Seeded random generators for machines, cells, and grids.
//!
//! Randomized suites never consume wall-clock entropy: every generator takes
//! an explicit `ChaCha8Rng`, so a seed fully determines the suite and
//! counterexamples are reproducible.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::finset::{FinFun, FinSet};
use crate::mealy::{Cell, MealyMachine};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_table(rng: &mut ChaCha8Rng, rows: usize, cols: usize, cod: usize) -> Vec<Vec<usize>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..cod)).collect())
        .collect()
}

/// A machine with the given boundary sizes; state count is at least 1 so the
/// tables are inhabited even when callers pass 0.
pub fn random_machine(
    rng: &mut ChaCha8Rng,
    input: usize,
    output: usize,
    states: usize,
) -> MealyMachine {
    let states = states.max(1);
    MealyMachine::new(
        FinSet::new(input),
        FinSet::new(output),
        FinSet::new(states),
        random_table(rng, input, states, states),
        random_table(rng, input, states, output),
    )
    .expect("random tables are well-indexed by construction")
}

/// An endo machine on an alphabet of the given size.
pub fn random_endo(rng: &mut ChaCha8Rng, alphabet: usize, states: usize) -> MealyMachine {
    random_machine(rng, alphabet, alphabet, states)
}

pub fn random_fun(rng: &mut ChaCha8Rng, dom: &FinSet, cod: &FinSet) -> FinFun {
    let table = (0..dom.size())
        .map(|_| rng.gen_range(0..cod.size()))
        .collect();
    FinFun::new(dom.clone(), cod.clone(), table).expect("entries sampled below codomain size")
}

/// A valid cell under a random top machine: the bottom machine is the image
/// of the top one along random boundary maps, with table entries off the
/// image filled in randomly. Every produced cell passes `check_cell`.
pub fn random_valid_cell(
    rng: &mut ChaCha8Rng,
    input: usize,
    output: usize,
    states: usize,
    bottom_input: usize,
    bottom_output: usize,
    bottom_states: usize,
) -> Cell {
    let bi = bottom_input.max(1);
    let bo = bottom_output.max(1);
    let bs = bottom_states.max(1);
    loop {
        let top = random_machine(rng, input, output, states.max(1));
        let f = random_fun(rng, top.input(), &FinSet::new(bi));
        let g = random_fun(rng, top.output(), &FinSet::new(bo));
        let alpha = random_fun(rng, top.states(), &FinSet::new(bs));
        let mut d = random_table(rng, bi, bs, bs);
        let mut s = random_table(rng, bi, bs, bo);
        // overwrite the image entries so both squares commute
        for a in top.input().elements() {
            for e in top.states().elements() {
                d[f.apply(a)][alpha.apply(e)] = alpha.apply(top.d(a, e));
                s[f.apply(a)][alpha.apply(e)] = g.apply(top.s(a, e));
            }
        }
        let bottom = MealyMachine::new(FinSet::new(bi), FinSet::new(bo), FinSet::new(bs), d, s)
            .expect("rewritten tables stay well-indexed");
        let cell = Cell::new(top, bottom, f, g, alpha).expect("boundaries match by construction");
        // two top entries landing on the same bottom entry can demand
        // different values; the last writer wins, so reject and resample
        if crate::mealy::check_cell(&cell).pass {
            return cell;
        }
    }
}

/// A valid cell under a prescribed top machine and left tight `f`. Tries
/// random completions first; the collapse completion (constant `g` and
/// `alpha`, which commutes under any `f`) guarantees termination.
pub fn random_cell_given(
    rng: &mut ChaCha8Rng,
    top: &MealyMachine,
    f: &FinFun,
    bottom_output: usize,
    bottom_states: usize,
) -> Cell {
    let bi = f.cod().size();
    let bo = bottom_output.max(1);
    let bs = bottom_states.max(1);
    let complete = |g: FinFun, alpha: FinFun, mut d: Vec<Vec<usize>>, mut s: Vec<Vec<usize>>| {
        for a in top.input().elements() {
            for e in top.states().elements() {
                d[f.apply(a)][alpha.apply(e)] = alpha.apply(top.d(a, e));
                s[f.apply(a)][alpha.apply(e)] = g.apply(top.s(a, e));
            }
        }
        let bottom = MealyMachine::new(f.cod().clone(), FinSet::new(bo), FinSet::new(bs), d, s)
            .expect("rewritten tables stay well-indexed");
        Cell::new(top.clone(), bottom, f.clone(), g, alpha).expect("boundaries match")
    };
    for _ in 0..100 {
        let g = random_fun(rng, top.output(), &FinSet::new(bo));
        let alpha = random_fun(rng, top.states(), &FinSet::new(bs));
        let d = random_table(rng, bi, bs, bs);
        let s = random_table(rng, bi, bs, bo);
        let cell = complete(g, alpha, d, s);
        if crate::mealy::check_cell(&cell).pass {
            return cell;
        }
    }
    let g = FinFun::from_fn(top.output().clone(), FinSet::new(bo), |_| 0).expect("constant");
    let alpha = FinFun::from_fn(top.states().clone(), FinSet::new(bs), |_| 0).expect("constant");
    let cell = complete(
        g,
        alpha,
        random_table(rng, bi, bs, bs),
        random_table(rng, bi, bs, bo),
    );
    debug_assert!(crate::mealy::check_cell(&cell).pass);
    cell
}

/// A composable 2x2 grid of valid cells (top-left, top-right, bottom-left,
/// bottom-right): rows compose horizontally, columns vertically. Boundary
/// sizes are sampled up to the given maximum.
pub fn random_grid(rng: &mut ChaCha8Rng, max_size: usize) -> (Cell, Cell, Cell, Cell) {
    let max = max_size.max(1);
    let mut sizes = [0usize; 15];
    for v in sizes.iter_mut() {
        *v = rng.gen_range(1..=max);
    }
    let [a0, a1, a2, e1, e2, b0, b1, b2, f1, f2, c0, c1, c2, g1, g2] = sizes;
    let tl = {
        let top = random_machine(rng, a0, a1, e1);
        let f = random_fun(rng, top.input(), &FinSet::new(b0));
        random_cell_given(rng, &top, &f, b1, f1)
    };
    let tr = {
        let top = random_machine(rng, a1, a2, e2);
        random_cell_given(rng, &top, &tl.g, b2, f2)
    };
    let bl = {
        let top = tl.bottom.clone();
        let f = random_fun(rng, top.input(), &FinSet::new(c0));
        random_cell_given(rng, &top, &f, c1, g1)
    };
    let br = {
        let top = tr.bottom.clone();
        random_cell_given(rng, &top, &bl.g, c2, g2)
    };
    (tl, tr, bl, br)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mealy::{cell_compose_h, cell_compose_v};

    #[test]
    fn generators_are_deterministic() {
        let mut r1 = rng_from_seed(7);
        let mut r2 = rng_from_seed(7);
        assert_eq!(random_endo(&mut r1, 2, 3), random_endo(&mut r2, 2, 3));
    }

    #[test]
    fn random_grids_compose_both_ways() {
        let mut rng = rng_from_seed(3);
        for _ in 0..25 {
            let (tl, tr, bl, br) = random_grid(&mut rng, 3);
            let rows = cell_compose_v(
                &cell_compose_h(&tl, &tr).unwrap(),
                &cell_compose_h(&bl, &br).unwrap(),
            );
            let cols = cell_compose_h(
                &cell_compose_v(&tl, &bl).unwrap(),
                &cell_compose_v(&tr, &br).unwrap(),
            );
            assert!(rows.is_ok() && cols.is_ok());
        }
    }

    #[test]
    fn random_cells_are_valid() {
        let mut rng = rng_from_seed(0);
        for _ in 0..50 {
            let c = random_valid_cell(&mut rng, 2, 2, 3, 2, 2, 3);
            assert!(crate::mealy::check_cell(&c).pass);
        }
    }
}
