//! Explicit coordinates of the iterated blow-up along the strata, and the
//! identities that cut out the proper transforms.

pub mod aux;
pub mod corner;
pub mod embed;
pub mod fmap;
pub mod minors;
pub mod poly;

pub use aux::{
    attach_aux, aux_count_identity, phik_coords, phik_len, phik_stream, AuxNode, AuxTree,
    PhiKIndex, PhiKStream, MAX_MATERIALIZED_K,
};
pub use corner::{corner_expansion, corner_expansion_for, corner_identity_check, CornerExpansion};
pub use embed::{monomial_span_check, segre, skew_coords, veronese, MonomialSpan, ProjectivePoint};
pub use fmap::{
    check_tau, f_map_level1, phi2_product, product_minor_expansion, product_minor_expansion_check,
    BlowupPoint, ProductExpansion,
};
pub use minors::{
    enumerate_minor_indices, phi1_coords, phi1_values, phi2_coords, relation_six_term, MinorIndex,
    Phi1Coords,
};
