//! Mirror polynomial of the resolved conifold and its rational parametrization.

use remodel::algebra::Q;
use remodel::cli::selftest::CONIFOLD_EXACT;
use remodel::curve::CurveConfig;

fn main() {
    let cfg = CurveConfig::from_str(CONIFOLD_EXACT).unwrap();
    let curve = cfg.build::<Q>(&()).unwrap();
    let toric = curve.toric.as_ref().unwrap();
    println!("H(X, Y) = {}", toric.mirror.render());
    println!("X(z)    = {}", curve.x);
    println!("Y(z)    = {}", curve.y);
    println!("X^ = X Y^{} = {}", curve.framing, curve.xhat);
    for z in [Q::new(1, 3), Q::new(-5, 2), Q::new(7, 1)] {
        let (x, y) = (curve.x.eval(&z).unwrap(), curve.y.eval(&z).unwrap());
        println!("z = {z:5}  H(X(z), Y(z)) = {}", toric.mirror.eval(&x, &y).unwrap());
    }
}
