//! A-periods of Phi = log Y dlog X around the punctures of two curves.

use remodel::algebra::{Prec, C, Q};
use remodel::cli::selftest::{C3_F1, CONIFOLD_F1};
use remodel::curve::CurveConfig;
use remodel::potentials::a_period;

fn main() {
    let c3 = CurveConfig::from_str(C3_F1).unwrap().build::<Q>(&()).unwrap();
    for i in 0..c3.punctures().unwrap().len() {
        println!("C^3 {}", a_period(&c3, i).unwrap().to_json());
    }
    let con = CurveConfig::from_str(CONIFOLD_F1).unwrap().build::<C>(&Prec(128)).unwrap();
    for i in 0..con.punctures().unwrap().len() {
        let p = a_period(&con, i).unwrap();
        println!("conifold puncture {i}: log coefficient {}, monodromy {}", p.log_coefficient, p.monodromy);
    }
}
