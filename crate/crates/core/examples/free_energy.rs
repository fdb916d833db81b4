//! Closed free energies F_2 and F_3 at two framings.

use remodel::algebra::{Prec, Scalar, C, Q};
use remodel::cli::selftest::{C3_F1, C3_F2, CONIFOLD_F1, CONIFOLD_F2};
use remodel::curve::CurveConfig;
use remodel::recursion::{free_energy, OmegaTable, RecursionConfig};

fn main() {
    for (label, text) in [("C^3 f=1", C3_F1), ("C^3 f=2", C3_F2)] {
        let curve = CurveConfig::from_str(text).unwrap().build::<Q>(&()).unwrap();
        let mut t = OmegaTable::new(curve, RecursionConfig::default());
        println!("{label}: F2 = {}, F3 = {}", free_energy(&mut t, 2).unwrap(), free_energy(&mut t, 3).unwrap());
    }
    let cfg = RecursionConfig {
        check_tolerance: RecursionConfig::tolerance_for_bits(256),
        ..RecursionConfig::default()
    };
    for (label, text) in [("conifold f=1", CONIFOLD_F1), ("conifold f=2", CONIFOLD_F2)] {
        let curve = CurveConfig::from_str(text).unwrap().build::<C>(&Prec(256)).unwrap();
        let mut t = OmegaTable::new(curve, cfg.clone());
        let f2 = free_energy(&mut t, 2).unwrap();
        println!("{label}: F2 = {}", f2.render());
    }
}
