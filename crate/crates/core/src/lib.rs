//! Numerics for a focus-focus fibration with harmonic semi-global invariant.
//!
//! The crate is layered bottom-up: special functions and the invariant
//! ([`scalar_kernels`]), pointwise exterior algebra ([`geometry`]), the local
//! model and its action-angle coordinates ([`local_model`]), central charges
//! ([`holomorphic`]), the semi-flat metric ([`semiflat`]), the generalized
//! Ooguri-Vafa space ([`ooguri_vafa`]) and the instanton-corrected twistor
//! family ([`gmn`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod gmn;
pub mod holomorphic;
pub mod local_model;
pub mod ooguri_vafa;
pub mod quadrature;
pub mod scalar_kernels;
pub mod semiflat;

pub use error::{Error, Result};
pub use num_complex::Complex64;
