//! Symbolic abelian group calculus and a three-valued decision engine for
//! cellularity with respect to two-dimensional Moore spaces.

pub mod baer;
pub mod cellularity;
pub mod classify;
pub mod cli;
pub mod coeffs;
pub mod error;
pub mod group;
pub mod homalg;
pub mod moore;
pub mod oracle;
pub mod parse;
pub mod primes;
pub mod radical;
pub mod space;
pub mod telescope;
pub mod verdict;

pub use baer::{BaerType, Exp};
pub use error::{Error, ParseError};
pub use group::{GroupExpr, PrimeFamily};
pub use parse::parse;
pub use primes::PrimeSet;
