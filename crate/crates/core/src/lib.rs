//! Exact stabilizer formalism for qudits of arbitrary dimension `D`.

pub mod canonicalize;
pub mod clifford;
pub mod channel;
pub mod crt;
pub mod error;
mod linalg;
pub mod modring;
pub mod oracle;
pub mod pauli;
pub mod random;
pub mod stabilizer;
pub mod text;

pub use clifford::{CliffordTableau, Gate, PivotTarget};
pub use error::{Error, Result};
pub use modring::Modulus;
pub use pauli::PauliProduct;
pub use stabilizer::{GraphAdjacency, StabilizerGroup};
