//! f-vectors and h-vectors of simplicial complexes: Macaulay and
//! Kruskal-Katona growth checks, constructions of nonunimodal
//! Cohen-Macaulay and pure f-vectors, Steiner triple systems, and an
//! exhaustive purity search.

pub mod cli;
pub mod construct;
pub mod error;
mod json;
pub mod macaulay;
pub mod peaks;
pub mod pure_decide;
pub mod steiner;
pub mod transform;

pub use error::{Error, Result};
pub use macaulay::{expand, is_kk_fvector, is_o_sequence, kk_bound, macaulay_bound, BinomialExpansion};
pub use peaks::{first_half_increasing, peak_profile, PeakProfile};
pub use pure_decide::{complex_f_vector, decide_pure, decide_pure_dim2, ip_experiment, FacetComplex, PurityStatus, PurityVerdict};
pub use steiner::{sts, verify_sts, TripleSystem};
pub use transform::{f_to_h, h_to_f, is_cm_fvector, FVector, HVector};
