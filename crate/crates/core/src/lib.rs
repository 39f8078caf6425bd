pub mod config;
pub mod diffcalc;
pub mod expr;
pub mod freealg;
pub mod matrix;
pub mod plane2d;
pub mod symring;
pub mod tensorcheck;
