//! Disk potential of the framed C^3 vertex next to the closed form -C(2d-1, d-1)/d^2.

use remodel::algebra::Q;
use remodel::cli::selftest::C3_F1;
use remodel::curve::CurveConfig;
use remodel::potentials::disk_potential;

fn main() {
    let curve = CurveConfig::from_str(C3_F1).unwrap().build::<Q>(&()).unwrap();
    let p = disk_potential(&curve, 8).unwrap();
    let s = &p.components[&vec![0]];
    for d in 1..=8u32 {
        let binom: i64 = (0..d as i64 - 1).fold(1, |a, i| a * (2 * d as i64 - 1 - i) / (i + 1));
        let closed = Q::new(-binom, (d * d) as i64);
        println!("X^{d}: {:>12}   closed form {closed}", s.get(&[d]).unwrap());
    }
}
