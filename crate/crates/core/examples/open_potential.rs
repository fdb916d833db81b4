//! Higher open potentials F_{0,3} and F_{1,1} of the framed C^3 vertex.

use remodel::algebra::Q;
use remodel::cli::selftest::C3_F1;
use remodel::curve::CurveConfig;
use remodel::potentials::{open_potential, MultiSeries};
use remodel::recursion::{OmegaTable, RecursionConfig};

fn main() {
    let curve = CurveConfig::from_str(C3_F1).unwrap().build::<Q>(&()).unwrap();
    let mut t = OmegaTable::new(curve, RecursionConfig::default());
    for (g, n, degree) in [(1, 1, 4), (0, 3, 2)] {
        let p = open_potential(&mut t, g, n, degree).unwrap();
        println!("F_{{{g},{n}}} (symmetry defect {:e}):", p.symmetry_defect());
        for s in p.components.values() {
            for (e, c) in &s.terms {
                println!("  {:>14}  {c}", MultiSeries::<Q>::monomial_name(e));
            }
        }
    }
}
