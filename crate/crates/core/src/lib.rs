pub mod calabi;
pub mod catalog;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod graph;
pub mod height;
pub mod jet;
pub mod lightlike;
pub mod report;
pub mod wick;

pub use error::{Error, Result};
pub use expr::{parse, Expr, Slot};
pub use graph::{GraphKind, Rect, SurfaceGraph};
pub use height::Height;
pub use jet::{jet_at, Jet};
