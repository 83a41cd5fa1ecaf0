use std::sync::OnceLock;

use proptest::prelude::*;
use tropfm_core::rat::rat;
use tropfm_grid::*;

fn full_moduli(n: usize) -> &'static GridModuli {
    static M: OnceLock<Vec<GridModuli>> = OnceLock::new();
    &M.get_or_init(|| (1..=3).map(|n| build_pi(&TropFan::full(3), n).unwrap()).collect())[n - 1]
}

proptest! {
    /// Points on the full fan of three rays survive the trip through the
    /// marked grid, and their type is a cell of the moduli complex.
    #[test]
    fn grid_round_trip(raw in prop::collection::vec(prop::collection::vec(0i64..4, 3), 1..4)) {
        let fan = TropFan::full(3);
        let vals: Vec<_> = raw.iter().map(|p| p.iter().map(|&x| rat(x, 2)).collect()).collect();
        let u = tropicalise(&vals, &fan).unwrap();
        let g = grid_from_points(&u);
        prop_assert!(g.is_valid());
        prop_assert_eq!(points_from_grid(&g), u.clone());
        let m = full_moduli(u.n());
        let t = grid_comb_type(&u);
        prop_assert!(m.cell_of_type(&t).is_some());
        prop_assert_eq!(grid_codim(&t), m.pi.cells[m.cell_of_type(&t).unwrap()].dim);
    }
}
