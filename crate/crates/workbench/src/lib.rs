pub mod cli;
pub mod gen;
pub mod pipeline;
pub mod rng;
