//! Annulus potential of C^3 at framing 1 with its diagonal-subtraction report.

use remodel::algebra::Q;
use remodel::cli::selftest::C3_F1;
use remodel::curve::CurveConfig;
use remodel::potentials::annulus_potential;

fn main() {
    let curve = CurveConfig::from_str(C3_F1).unwrap().build::<Q>(&()).unwrap();
    let (p, report) = annulus_potential(&curve, 4).unwrap();
    for (e, c) in &p.components[&vec![0, 0]].terms {
        println!("{:>10}  {c}", remodel::potentials::MultiSeries::<Q>::monomial_name(e));
    }
    println!("largest residual after removing the diagonal pole: {:e}", report.max_residual);
}
