pub mod algebra;
pub mod toric;
pub mod curve;
pub mod recursion;
pub mod potentials;
pub mod cli;
