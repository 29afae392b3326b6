pub mod cli;
pub mod error;
pub mod example;
pub mod io;
pub mod kernels;
pub mod pencil;
pub mod projection;
pub mod refined;
pub mod solver;
pub mod study;
pub mod subspace;
pub mod theory;
