pub mod error;
pub mod linalg;
pub mod poly;
pub mod presentation;
pub mod scalar;
pub mod word;
pub mod groebner;
pub mod hilbert;
pub mod quadratic;
pub mod coherence;
pub mod qgr;
pub mod cli;
