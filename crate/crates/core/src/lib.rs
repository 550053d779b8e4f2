pub mod access;
pub mod bounds;
pub mod coop;
pub mod error;
pub mod format;
pub mod galois;
pub mod graphscheme;
pub mod lnc;
pub mod lrc;
pub mod oracle;
pub mod secret;
pub mod subsets;

pub use error::{Error, Result};
