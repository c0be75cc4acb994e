//! Exact machinery for Dirac series of the real forms FII, EIV, FI, EI and G2(2):
//! root systems and Weyl groups, norms of K-types, candidate infinitesimal
//! characters, Dirac cohomology bookkeeping and table verification.

pub mod dirac;
pub mod enumerate;
pub mod error;
pub mod linalg;
pub mod norms;
pub mod rat;
pub mod realforms;
pub mod rootsystem;
pub mod tables;
pub mod vect;

pub use error::{Error, Result};
pub use rat::Rat;
pub use realforms::{get_form, make_infchar, make_ktype, Group, InfChar, KType, RealFormData};
pub use rootsystem::{build_root_system, RootSystem, SystemKind, WeylWord};
pub use vect::Vect;
