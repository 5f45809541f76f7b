//! Fixed-point counts, generating functions and Lind zeta functions of
//! finite-order reversal systems over shifts of finite type and sofic shifts.

pub mod algebra;
pub mod budget;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod random;
pub mod sft;
pub mod sofic;
pub mod zeta;
