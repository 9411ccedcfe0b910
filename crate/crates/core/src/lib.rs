//! Exact toric geometry over the integers, with the arithmetic layer on top:
//! canonical metrics, Mahler measures, heights and Bernstein–Kushnirenko bounds.

pub mod bernstein;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod height;
mod hull;
pub mod intersection;
pub mod lattice;
pub mod laurent;
pub mod mahler;
pub mod polytope;

pub use bernstein::{
    bk_bound, bk_verify, bkk_count, bound_l, estimate_l_lower, lelong_constants, BkReport, BkVerification, LBound,
    LSource, LelongConstants,
};
pub use divisor::{picard_rank, vertex_max_log, CartierData, TDivisor};
pub use error::{Error, Result};
pub use fan::{Cone, Fan};
pub use height::{canonical_height_point, height_hypersurface, place_heights, HypersurfaceHeight, PlaceHeights};
pub use intersection::{
    check_balanced, degree, intersect_divisor, intersect_divisor_randomized, jd_monomial_degree, jd_presentation,
    mixed_volume, mixed_volume_on_fan, nonface_product_vanishes, JdPresentation, MinkowskiWeight,
};
pub use lattice::{det, hermite_normal_form, in_sublattice, pairing, DualVector, Int, IntMatrix, LatticeVector, Rat};
pub use laurent::LaurentPolynomial;
pub use mahler::{
    bloch_wigner, mahler_linear_form, mahler_measure, mahler_numeric, mahler_univariate_exact, MahlerEstimate,
    MahlerOptions, Method,
};
pub use polytope::{mixed_volume_oracle, newton_polytope, Facet, LatticePolytope};
