//! A curve whose brane sits on an edge of multiplicity 3, giving three disk components.

use remodel::algebra::{Prec, Scalar, C};
use remodel::cli::selftest::C3_Z3;
use remodel::curve::CurveConfig;
use remodel::potentials::disk_potential;

fn main() {
    let curve = CurveConfig::from_str(C3_Z3).unwrap().build::<C>(&Prec(128)).unwrap();
    println!("brane branches: {}", curve.brane_punctures(6).unwrap().len());
    let p = disk_potential(&curve, 4).unwrap();
    for (l, s) in &p.components {
        println!("component {l:?}:");
        for (e, c) in &s.terms {
            println!("  X^{}  {}", e[0], c.render());
        }
    }
}
