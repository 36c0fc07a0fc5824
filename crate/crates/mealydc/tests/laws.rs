//! Randomized law checks. Machines are drawn from seeded generators so
//! every failure shrinks to a (seed, sizes) pair that reproduces exactly.

use proptest::prelude::*;
use rand::Rng;

use mealydc::doublecat::check_interchange;
use mealydc::finset::pair_index;
use mealydc::gen::{random_grid, random_machine, rng_from_seed};
use mealydc::mealy::{
    assoc_cell, cell_compose_h, cell_compose_v, check_cell, loose_compose, unitor_left,
    unitor_right, Cell,
};

proptest! {
    /// Running a cascade composite equals piping the first machine's
    /// output word through the second machine.
    #[test]
    fn composite_run_is_pipeline(
        seed in any::<u64>(),
        a in 1usize..=4, b in 1usize..=4, c in 1usize..=4,
        n1 in 1usize..=3, n2 in 1usize..=3,
        len in 0usize..=6,
    ) {
        let mut rng = rng_from_seed(seed);
        let m1 = random_machine(&mut rng, a, b, n1);
        let m2 = random_machine(&mut rng, b, c, n2);
        let composite = loose_compose(&m1, &m2).unwrap();
        let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..a)).collect();
        let e1 = rng.gen_range(0..n1);
        let e2 = rng.gen_range(0..n2);

        let (w1, f1) = m1.run(e1, &w).unwrap();
        let (w2, f2) = m2.run(e2, &w1).unwrap();
        let got = composite.run(pair_index(e1, e2, n2), &w).unwrap();
        prop_assert_eq!(got, (w2, pair_index(f1, f2, n2)));
    }

    /// Cell validity is closed under both compositions, and composing a
    /// 2x2 grid row-first or column-first gives the same cell.
    #[test]
    fn grid_composition_closure(seed in any::<u64>(), max in 1usize..=3) {
        let mut rng = rng_from_seed(seed);
        let (tl, tr, bl, br) = random_grid(&mut rng, max);
        for c in [&tl, &tr, &bl, &br] {
            prop_assert!(check_cell(c).pass);
        }
        let top = cell_compose_h(&tl, &tr).unwrap();
        let bottom = cell_compose_h(&bl, &br).unwrap();
        let left = cell_compose_v(&tl, &bl).unwrap();
        let right = cell_compose_v(&tr, &br).unwrap();
        for c in [&top, &bottom, &left, &right] {
            prop_assert!(check_cell(c).pass);
        }
        let rows_first = cell_compose_v(&top, &bottom).unwrap();
        let cols_first = cell_compose_h(&left, &right).unwrap();
        prop_assert!(check_cell(&rows_first).pass);
        prop_assert_eq!(&rows_first, &cols_first);
        prop_assert!(check_interchange(&tl, &tr, &bl, &br).unwrap().pass);
    }

    /// Associators and unitors are valid invertible cells.
    #[test]
    fn coherence_cells_are_invertible(
        seed in any::<u64>(),
        a in 1usize..=3, b in 1usize..=3, c in 1usize..=3, d in 1usize..=3,
        n1 in 1usize..=2, n2 in 1usize..=2, n3 in 1usize..=2,
    ) {
        let mut rng = rng_from_seed(seed);
        let m1 = random_machine(&mut rng, a, b, n1);
        let m2 = random_machine(&mut rng, b, c, n2);
        let m3 = random_machine(&mut rng, c, d, n3);

        let assoc = assoc_cell(&m1, &m2, &m3).unwrap();
        for cell in [assoc.clone(), unitor_left(&m1), unitor_right(&m1)] {
            prop_assert!(check_cell(&cell).pass);
            let inv = cell.inverse().expect("coherence cells are invertible");
            prop_assert!(check_cell(&inv).pass);
            prop_assert_eq!(
                cell_compose_v(&cell, &inv).unwrap(),
                Cell::identity(&cell.top)
            );
            prop_assert_eq!(
                cell_compose_v(&inv, &cell).unwrap(),
                Cell::identity(&cell.bottom)
            );
        }
    }

    /// For endo machines the word-long state and output actions agree with
    /// their one-shot form.
    #[test]
    fn extended_actions_agree(
        seed in any::<u64>(),
        a in 1usize..=3, n in 1usize..=3,
        len in 0usize..=5,
    ) {
        let mut rng = rng_from_seed(seed);
        let m = random_machine(&mut rng, a, a, n);
        let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..a)).collect();
        let e = rng.gen_range(0..n);
        let (tensored, acted) = m.extend_actions(&w, e).unwrap();
        prop_assert_eq!(tensored, m.tensor_word(&w, e));
        prop_assert_eq!(acted, m.act_word(&w, e));
    }
}
