pub mod family;
pub mod graph;
pub mod linalg;
pub mod lp;
pub mod drum;
pub mod polytope;
pub mod verify;
pub mod rat;
pub mod search;
pub mod symmetry;
