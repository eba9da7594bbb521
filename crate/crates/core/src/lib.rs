//! Exact computations with filtrations of monomial ideals: orders, the
//! asymptotic Samuel function, integral closures, projective equivalence
//! and multiplicities.

pub mod equivalence;
pub mod error;
pub mod exactnum;
pub mod filtration;
pub mod lp;
pub mod monalg;
pub mod multiplicity;
pub mod props;
pub mod samuel;
pub mod valuation;
pub mod wire;

pub use error::{Error, ErrorKind, Result};
pub use exactnum::{ExactReal, ExtReal, Extended};
pub use filtration::{Filtration, Order};
pub use monalg::{Exponent, MonomialIdeal, SupportPoly};
pub use valuation::MonomialValuation;
