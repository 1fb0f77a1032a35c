pub mod barnes;
pub mod closedform;
pub mod elliptic_core;
pub mod error;
pub mod exactalg;
pub mod hyperseries;
pub mod jacobi_maclaurin;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
