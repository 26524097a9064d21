pub mod budget;
pub mod characters;
pub mod coeff_field;
pub mod combinatorics;
pub mod error;
pub mod finite_field;
pub mod flag_modules;
pub mod fq_linalg;
pub mod tableaux;
pub mod verify;
