//! Multiplicative Serre spectral sequences with trivial coefficients.

mod fiber;
mod model;
mod page;
mod ring;

pub use fiber::{FiberKind, FiberSpec, TransgressionSeed};
pub use page::{LeibnizReport, Page, PageDump, Piece, PieceDump, TurnStats};
pub use ring::{reconstruct_ring, GeneratorLabel, OpenExtension, RingReconstruction};
