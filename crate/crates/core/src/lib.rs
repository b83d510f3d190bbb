pub mod constructions;
pub mod data;
pub mod datagen;
pub mod error;
pub mod experiment;
pub mod loss;
pub mod lowrank;
pub mod lp;
pub mod mu_exact;
pub mod mu_oracle;
pub mod mu_sketch;
pub mod rng;
pub mod verify;
