//! A desk-scale laboratory for asymmetric Ramsey properties of random
//! graphs: exact density computations, typed random graphs with moment and
//! tail bounds, an exact Ramsey-arrow decision engine, and Monte Carlo
//! threshold sweeps.

pub mod arrow;
pub mod balance;
pub mod density;
pub mod family;
pub mod graph;
pub mod graph6;
pub mod jsonio;
pub mod moments;
pub mod ratio;
pub mod sample;
pub mod smallgraphs;
pub mod suen;
pub mod sweep;
pub mod typed;

pub use graph::{EdgeId, Graph};
pub use ratio::Rational;
pub use typed::TypedGraph;
