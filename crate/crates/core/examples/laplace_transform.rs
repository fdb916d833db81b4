//! Formal Laplace transforms of Airy correlators at the ramification point.

use remodel::algebra::Q;
use remodel::cli::selftest::AIRY;
use remodel::curve::CurveConfig;
use remodel::potentials::{gaussian_moment, laplace_transform};
use remodel::recursion::{OmegaTable, RecursionConfig};

fn main() {
    let moments: Vec<String> = (-4..=6).map(|m| gaussian_moment::<Q>(m, &()).to_string()).collect();
    println!("Gaussian moments m = -4..6: {moments:?}");
    let curve = CurveConfig::from_str(AIRY).unwrap().build::<Q>(&()).unwrap();
    let mut t = OmegaTable::new(curve, RecursionConfig::default());
    for (g, n) in [(1, 1), (0, 3), (2, 1)] {
        let l = laplace_transform(&mut t, g, n, 8).unwrap();
        println!("({g},{n}) {}", l.to_json());
    }
}
